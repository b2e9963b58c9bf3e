//! The finite part `Γ' = Γ × Z₂` of the symmetry group, with its character
//! table and display names for its subgroups.

use std::collections::HashMap;

use crate::chartab::CharacterTable;
use crate::error::{EqError, Result};
use crate::permgroup::{FiniteGroup, Group, Subgroup, SubgroupClassLattice};

pub struct GammaPrime {
    pub base: Group,
    pub base_table: CharacterTable,
    pub ext: Group,
    pub ext_table: CharacterTable,
    /// Γ-component of every element of Γ'.
    pub to_base: Vec<usize>,
    /// Whether the Z₂-component is the antipodal element.
    pub antipodal: Vec<bool>,
    /// Element index of `(1, -1)`.
    pub antipode: usize,
    pub exponent: usize,
    pub base_lattice: SubgroupClassLattice,
    pub ext_lattice: SubgroupClassLattice,
    base_names: Vec<String>,
    ext_names: Vec<String>,
    dihedral: Option<DihedralInfo>,
}

struct DihedralInfo {
    rotations: Vec<bool>,
    vertex_reflection: Vec<bool>,
}

impl GammaPrime {
    pub fn new(base: Group, base_table: CharacterTable) -> Result<GammaPrime> {
        let ext = base.times_z2()?;
        let ext_table = base_table.times_z2(&base, &ext)?;
        let n = base.degree();
        let mut to_base = Vec::with_capacity(ext.order());
        let mut antipodal = Vec::with_capacity(ext.order());
        for x in 0..ext.order() {
            let p = ext.element(x);
            let bp = crate::permgroup::Permutation::from_images(p.images()[..n].to_vec())?;
            to_base.push(
                base.index_of(&bp)
                    .ok_or_else(|| EqError::Internal("bad Z2 extension".into()))?,
            );
            antipodal.push(p.apply(n) != n);
        }
        let antipode = (0..ext.order())
            .find(|&x| to_base[x] == 0 && antipodal[x])
            .ok_or_else(|| EqError::Internal("no antipode".into()))?;
        let exponent = (0..ext.order())
            .map(|x| ext.element_order(x))
            .fold(1, num_integer::lcm);
        let base_lattice = SubgroupClassLattice::build(&base);
        let ext_lattice = SubgroupClassLattice::build(&ext);
        let dihedral = dihedral_info(&base, &base_table);
        let mut gp = GammaPrime {
            base,
            base_table,
            ext,
            ext_table,
            to_base,
            antipodal,
            antipode,
            exponent,
            base_lattice,
            ext_lattice,
            base_names: vec![],
            ext_names: vec![],
            dihedral,
        };
        gp.base_names = (0..gp.base_lattice.len())
            .map(|c| gp.name_base_subgroup(&gp.base_lattice.classes[c].representative))
            .collect();
        gp.base_names = disambiguate(gp.base_names.clone());
        gp.ext_names = (0..gp.ext_lattice.len())
            .map(|c| gp.name_ext_subgroup(&gp.ext_lattice.classes[c].representative))
            .collect();
        gp.ext_names = disambiguate(gp.ext_names.clone());
        Ok(gp)
    }

    pub fn order(&self) -> usize {
        self.ext.order()
    }

    /// Number of irreducible Γ-representations.
    pub fn num_irreps(&self) -> usize {
        self.base_table.rows.len()
    }

    /// Row of the Γ' table carrying `χ_l ⊗ sign`.
    pub fn minus_row(&self, l: usize) -> usize {
        self.num_irreps() + l
    }

    pub fn irrep_dim(&self, l: usize) -> usize {
        self.base_table.dim(l)
    }

    pub fn irrep_label(&self, l: usize) -> String {
        format!("{}", l + 1)
    }

    pub fn base_class_name(&self, c: usize) -> &str {
        &self.base_names[c]
    }

    pub fn ext_class_name(&self, c: usize) -> &str {
        &self.ext_names[c]
    }

    /// Name of an arbitrary subgroup of Γ (looked up by conjugacy class).
    pub fn base_name(&self, s: &Subgroup) -> String {
        match self.base_lattice.class_of(&s.bits) {
            Some(c) => self.base_names[c].clone(),
            None => format!("<{} elements>", s.order()),
        }
    }

    /// Name of an arbitrary subgroup of Γ'.
    pub fn ext_name(&self, s: &Subgroup) -> String {
        match self.ext_lattice.class_of(&s.bits) {
            Some(c) => self.ext_names[c].clone(),
            None => format!("<{} elements>", s.order()),
        }
    }

    fn name_base_subgroup(&self, s: &Subgroup) -> String {
        let Some(d) = &self.dihedral else {
            return generic_name(s, &self.base, &self.base_lattice);
        };
        let rots = s.elements.iter().filter(|&&x| d.rotations[x]).count();
        let refl: Vec<usize> = s.elements.iter().copied().filter(|&x| !d.rotations[x]).collect();
        if refl.is_empty() {
            return format!("Z{}", rots);
        }
        let all_edge = refl.iter().all(|&x| !d.vertex_reflection[x]);
        if all_edge {
            format!("D̃{}", rots)
        } else {
            format!("D{}", rots)
        }
    }

    fn name_ext_subgroup(&self, s: &Subgroup) -> String {
        if s.contains(self.antipode) {
            let k0 = self.project(s, |x| !self.antipodal[x]);
            return format!("{}^p", self.name_base_subgroup(&k0));
        }
        let k0 = self.project(s, |_| true);
        let k1 = self.project(s, |x| !self.antipodal[x]);
        let n0 = self.name_base_subgroup(&k0);
        if k1.order() == k0.order() {
            return n0;
        }
        let n1 = self.name_base_subgroup(&k1);
        if self.dihedral.is_none() {
            return format!("{}^[{}]", n0, n1);
        }
        if n0.starts_with('Z') {
            return format!("{}^-", n0);
        }
        if n1.starts_with('Z') {
            return format!("{}^z", n0);
        }
        if n1.starts_with("D̃") {
            format!("D̃{}^d", &n0[n0.find(|c: char| c.is_ascii_digit()).unwrap_or(0)..])
        } else {
            format!("{}^d", n0)
        }
    }

    /// Γ-projection of the elements of a Γ'-subgroup passing `keep`.
    fn project(&self, s: &Subgroup, keep: impl Fn(usize) -> bool) -> Subgroup {
        Subgroup::from_elements(
            &self.base,
            s.elements.iter().copied().filter(|&x| keep(x)).map(|x| self.to_base[x]),
        )
    }

    /// Γ' element for `(g, ±1)`.
    pub fn lift(&self, g: usize, antipodal: bool) -> usize {
        (0..self.ext.order())
            .find(|&x| self.to_base[x] == g && self.antipodal[x] == antipodal)
            .expect("every pair occurs")
    }
}

fn dihedral_info(base: &Group, table: &CharacterTable) -> Option<DihedralInfo> {
    let n: usize = table.name.strip_prefix('D')?.parse().ok()?;
    if n < 2 || base.order() != 2 * n {
        return None;
    }
    let a = base.eval_word("a").ok()?;
    let b = base.eval_word("b").ok()?;
    if base.element_order(a) != n || base.element_order(b) != 2 {
        return None;
    }
    let rot = Subgroup::generated(base, &[a]);
    let rotations: Vec<bool> = (0..base.order()).map(|x| rot.contains(x)).collect();
    let vclass = table.class_of(b);
    let vertex_reflection = (0..base.order())
        .map(|x| !rotations[x] && table.class_of(x) == vclass)
        .collect();
    Some(DihedralInfo {
        rotations,
        vertex_reflection,
    })
}

fn generic_name<G: FiniteGroup>(s: &Subgroup, g: &G, lattice: &SubgroupClassLattice) -> String {
    let cyclic = s.elements.iter().any(|&x| g.element_order(x) == s.order());
    let _ = lattice;
    if cyclic {
        format!("Z{}", s.order())
    } else {
        format!("H{}", s.order())
    }
}

// Appends `.1`, `.2`, … to names shared by several classes.
fn disambiguate(names: Vec<String>) -> Vec<String> {
    let mut count: HashMap<String, usize> = HashMap::new();
    for n in &names {
        *count.entry(n.clone()).or_insert(0) += 1;
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    names
        .into_iter()
        .map(|n| {
            if count[&n] > 1 {
                let i = seen.entry(n.clone()).or_insert(0);
                *i += 1;
                format!("{}.{}", n, i)
            } else {
                n
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d6() -> GammaPrime {
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        GammaPrime::new(g, t).unwrap()
    }

    #[test]
    fn d6_prime_basics() {
        let gp = d6();
        assert_eq!(gp.order(), 24);
        assert_eq!(gp.exponent, 6);
        assert_eq!(gp.num_irreps(), 6);
        assert_eq!(gp.base_lattice.len(), 10);
        let names: Vec<&str> = (0..gp.base_lattice.len()).map(|c| gp.base_class_name(c)).collect();
        for expect in ["Z1", "D1", "D̃1", "Z2", "Z3", "D2", "Z6", "D3", "D̃3", "D6"] {
            assert!(names.contains(&expect), "{:?}", names);
        }
    }

    #[test]
    fn d6_prime_names_unique() {
        let gp = d6();
        let mut names: Vec<&str> = (0..gp.ext_lattice.len()).map(|c| gp.ext_class_name(c)).collect();
        assert!(names.contains(&"D6^p"));
        assert!(names.contains(&"D6^z"));
        assert!(names.contains(&"D3^p"));
        assert!(names.contains(&"D2^d"));
        assert!(names.contains(&"D̃2^d"));
        assert!(names.contains(&"Z2^-"));
        names.sort();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
    }
}

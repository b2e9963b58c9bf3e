//! Character tables bound to permutation groups, isotypic decompositions and
//! fixed-point dimensions.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{parse_rational, Cyclotomic, Rational};
use crate::error::{EqError, Result};
use crate::permgroup::{FiniteGroup, Group, Subgroup};

/// A class function, one value per conjugacy class (table column order).
pub type ClassFunction = Vec<Cyclotomic>;

/// Table data before it is attached to a concrete group: class
/// representatives are words in the group generators (`a`, `b`, …).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableSpec {
    pub name: String,
    pub class_words: Vec<String>,
    #[serde(default)]
    pub class_names: Vec<String>,
    pub class_sizes: Vec<usize>,
    #[serde(default)]
    pub row_names: Vec<String>,
    #[serde(deserialize_with = "de_rows", serialize_with = "ser_rows")]
    pub rows: Vec<Vec<Cyclotomic>>,
}

fn de_rows<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Cyclotomic>>, D::Error> {
    use serde::de::Error;
    let raw: Vec<Vec<serde_json::Value>> = Deserialize::deserialize(d)?;
    raw.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    let s = match &v {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Number(n) => n.to_string(),
                        _ => return Err(D::Error::custom(format!("bad table entry {}", v))),
                    };
                    parse_rational(&s)
                        .map(Cyclotomic::from_rational)
                        .ok_or_else(|| D::Error::custom(format!("bad table entry {}", s)))
                })
                .collect()
        })
        .collect()
}

fn ser_rows<S: serde::Serializer>(rows: &[Vec<Cyclotomic>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect())
        .collect();
    strs.serialize(s)
}

/// A character table attached to a group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub name: String,
    pub class_names: Vec<String>,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub row_names: Vec<String>,
    pub rows: Vec<ClassFunction>,
    class_of: Vec<usize>,
    group_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotypicDecomposition {
    pub multiplicities: Vec<usize>,
    pub dims: Vec<usize>,
    pub component_dims: Vec<usize>,
}

impl IsotypicDecomposition {
    pub fn total_dim(&self) -> usize {
        self.component_dims.iter().sum()
    }

    /// Indices of irreducibles that actually occur.
    pub fn present(&self) -> Vec<usize> {
        (0..self.multiplicities.len())
            .filter(|&i| self.multiplicities[i] > 0)
            .collect()
    }
}

fn int(n: i64) -> Cyclotomic {
    Cyclotomic::from_int(n)
}

/// Bundled tables: `Z<n>`, `D<n>` (n ≤ 12), `S3`, `S4`. Words refer to the
/// generators of the matching [`Group::preset`].
pub fn bundled_spec(name: &str) -> Result<TableSpec> {
    let name = name.trim();
    let unknown = || EqError::Unknown(name.to_string());
    if name == "S3" {
        return Ok(TableSpec {
            name: "S3".into(),
            class_words: vec!["1".into(), "b".into(), "a".into()],
            class_names: vec!["()".into(), "(1 2)".into(), "(1 2 3)".into()],
            class_sizes: vec![1, 3, 2],
            row_names: vec!["trivial".into(), "sign".into(), "standard".into()],
            rows: vec![
                vec![int(1), int(1), int(1)],
                vec![int(1), int(-1), int(1)],
                vec![int(2), int(0), int(-1)],
            ],
        });
    }
    if name == "S4" {
        return Ok(TableSpec {
            name: "S4".into(),
            class_words: vec!["1".into(), "b".into(), "a^2".into(), "ab".into(), "a".into()],
            class_names: vec![
                "()".into(),
                "(1 2)".into(),
                "(1 2)(3 4)".into(),
                "(1 2 3)".into(),
                "(1 2 3 4)".into(),
            ],
            class_sizes: vec![1, 6, 3, 8, 6],
            row_names: vec![
                "trivial".into(),
                "sign".into(),
                "2-dim".into(),
                "standard".into(),
                "standard x sign".into(),
            ],
            rows: [
                [1, 1, 1, 1, 1],
                [1, -1, 1, 1, -1],
                [2, 0, 2, -1, 0],
                [3, 1, -1, 0, -1],
                [3, -1, -1, 0, 1],
            ]
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect(),
        });
    }
    let (kind, num) = name.split_at(1.min(name.len()));
    let n: usize = num.parse().map_err(|_| unknown())?;
    if n == 0 {
        return Err(unknown());
    }
    match kind {
        "Z" | "C" => Ok(cyclic_spec(n)),
        "D" if n <= 12 => Ok(dihedral_spec(n)),
        _ => Err(unknown()),
    }
}

fn cyclic_spec(n: usize) -> TableSpec {
    let class_words = (0..n)
        .map(|j| if j == 0 { "1".to_string() } else { format!("a^{}", j) })
        .collect();
    let rows = (0..n)
        .map(|h| {
            (0..n)
                .map(|j| Cyclotomic::root_of_unity(n as u32, (h * j) as i64))
                .collect()
        })
        .collect();
    TableSpec {
        name: format!("Z{}", n),
        class_words,
        class_names: (0..n).map(|j| format!("(g^{})", j)).collect(),
        class_sizes: vec![1; n],
        row_names: (1..=n).map(|h| format!("chi{}", h)).collect(),
        rows,
    }
}

// Column order: (1), (κ), (γ), …, (γ^{⌊(n-1)/2⌋}), then for even n (κγ), (γ^{n/2}).
// For n = 6 this is exactly the classical ordering ((1),(κ),(γ),(γ²),(κγ),(γ³)).
fn dihedral_spec(n: usize) -> TableSpec {
    if n == 1 {
        return TableSpec {
            name: "D1".into(),
            class_words: vec!["1".into(), "a".into()],
            class_names: vec!["(1)".into(), "(κ)".into()],
            class_sizes: vec![1, 1],
            row_names: vec!["chi1".into(), "chi2".into()],
            rows: vec![vec![int(1), int(1)], vec![int(1), int(-1)]],
        };
    }
    #[derive(Clone, Copy)]
    enum Col {
        Rot(usize),
        Refl(usize),
    }
    let mut cols = vec![Col::Rot(0), Col::Refl(0)];
    for j in 1..=(n - 1) / 2 {
        cols.push(Col::Rot(j));
    }
    if n.is_multiple_of(2) {
        cols.push(Col::Refl(1));
        cols.push(Col::Rot(n / 2));
    }
    let power = |j: usize| match j {
        0 => "1".to_string(),
        1 => "a".to_string(),
        _ => format!("a^{}", j),
    };
    let pname = |j: usize| match j {
        1 => "γ".to_string(),
        _ => format!("γ^{}", j),
    };
    let class_words = cols
        .iter()
        .map(|c| match *c {
            Col::Rot(j) => power(j),
            Col::Refl(0) => "b".to_string(),
            Col::Refl(_) => "ba".to_string(),
        })
        .collect();
    let class_names = cols
        .iter()
        .map(|c| match *c {
            Col::Rot(0) => "(1)".to_string(),
            Col::Rot(j) => format!("({})", pname(j)),
            Col::Refl(0) => "(κ)".to_string(),
            Col::Refl(_) => "(κγ)".to_string(),
        })
        .collect();
    let class_sizes = cols
        .iter()
        .map(|c| match *c {
            Col::Rot(0) => 1,
            Col::Rot(j) if 2 * j == n => 1,
            Col::Rot(_) => 2,
            Col::Refl(_) if n.is_multiple_of(2) => n / 2,
            Col::Refl(_) => n,
        })
        .collect();
    // linear characters given by (value on γ, value on κ)
    let linear: Vec<(i64, i64)> = if n.is_multiple_of(2) {
        vec![(1, 1), (-1, -1), (1, -1), (-1, 1)]
    } else {
        vec![(1, 1), (1, -1)]
    };
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for &(g, k) in &linear {
        rows.push(
            cols.iter()
                .map(|c| match *c {
                    Col::Rot(j) => int(g.pow(j as u32)),
                    Col::Refl(j) => int(k * g.pow(j as u32)),
                })
                .collect(),
        );
    }
    for h in 1..=(n - 1) / 2 {
        rows.push(
            cols.iter()
                .map(|c| match *c {
                    Col::Rot(j) => Cyclotomic::two_cos(n as u32, (h * j) as i64),
                    Col::Refl(_) => int(0),
                })
                .collect(),
        );
    }
    TableSpec {
        name: format!("D{}", n),
        class_words,
        class_names,
        class_sizes,
        row_names: (1..=rows.len()).map(|h| format!("chi{}", h)).collect(),
        rows,
    }
}

impl CharacterTable {
    /// Attaches table data to `group`, validating class sizes, coverage of
    /// all conjugacy classes and exact row orthonormality.
    pub fn bind(spec: &TableSpec, group: &Group) -> Result<CharacterTable> {
        let nc = spec.class_words.len();
        if spec.class_sizes.len() != nc || spec.rows.iter().any(|r| r.len() != nc) || spec.rows.len() != nc {
            return Err(EqError::TableMismatch(format!(
                "table {} is not square ({} classes, {} rows)",
                spec.name,
                nc,
                spec.rows.len()
            )));
        }
        let classes = group.conjugacy_classes();
        let mut class_of_elem = vec![usize::MAX; group.order()];
        for (ci, c) in classes.iter().enumerate() {
            for &x in c {
                class_of_elem[x] = ci;
            }
        }
        if classes.len() != nc {
            return Err(EqError::TableMismatch(format!(
                "group has {} classes, table {} has {}",
                classes.len(),
                spec.name,
                nc
            )));
        }
        let mut col_of_class = vec![usize::MAX; nc];
        let mut reps = Vec::with_capacity(nc);
        for (col, w) in spec.class_words.iter().enumerate() {
            let x = group.eval_word(w)?;
            let ci = class_of_elem[x];
            if col_of_class[ci] != usize::MAX {
                return Err(EqError::TableMismatch(format!("word {} repeats a class", w)));
            }
            if classes[ci].len() != spec.class_sizes[col] {
                return Err(EqError::TableMismatch(format!(
                    "class of {} has size {}, table says {}",
                    w,
                    classes[ci].len(),
                    spec.class_sizes[col]
                )));
            }
            col_of_class[ci] = col;
            reps.push(x);
        }
        let class_of = class_of_elem.iter().map(|&ci| col_of_class[ci]).collect();
        let t = CharacterTable {
            name: spec.name.clone(),
            class_names: if spec.class_names.len() == nc {
                spec.class_names.clone()
            } else {
                spec.class_words.iter().map(|w| format!("({})", w)).collect()
            },
            class_reps: reps,
            class_sizes: spec.class_sizes.clone(),
            row_names: if spec.row_names.len() == nc {
                spec.row_names.clone()
            } else {
                (1..=nc).map(|i| format!("chi{}", i)).collect()
            },
            rows: spec.rows.clone(),
            class_of,
            group_order: group.order(),
        };
        t.check_orthonormal()?;
        Ok(t)
    }

    pub fn bundled(name: &str, group: &Group) -> Result<CharacterTable> {
        Self::bind(&bundled_spec(name)?, group)
    }

    fn check_orthonormal(&self) -> Result<()> {
        if self.rows.first().map(|r| r.iter().all(|v| *v == Cyclotomic::one())) != Some(true) {
            return Err(EqError::TableMismatch("first row must be the trivial character".into()));
        }
        for i in 0..self.rows.len() {
            for j in 0..self.rows.len() {
                let ip = self.inner(&self.rows[i], &self.rows[j]);
                let expect = Cyclotomic::from_int((i == j) as i64);
                if ip != expect {
                    return Err(EqError::TableMismatch(format!(
                        "rows {} and {} have inner product {}",
                        i + 1,
                        j + 1,
                        ip
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn value(&self, row: usize, element: usize) -> &Cyclotomic {
        &self.rows[row][self.class_of[element]]
    }

    pub fn dim(&self, row: usize) -> usize {
        self.rows[row][self.class_of[0]].to_integer().unwrap_or(0) as usize
    }

    /// `⟨χ, ψ⟩ = (1/|G|) Σ |C| χ(C) ψ(C)̄`.
    pub fn inner(&self, chi: &[Cyclotomic], psi: &[Cyclotomic]) -> Cyclotomic {
        let s: Cyclotomic = chi
            .iter()
            .zip(psi)
            .zip(&self.class_sizes)
            .map(|((a, b), &n)| (a * &b.conj()).scale(Rational::from_integer(n as i128)))
            .sum();
        s.scale(Rational::new(1, self.group_order as i128))
    }

    /// Frobenius–Schur indicator `(1/|G|) Σ_g χ(g²)`: 1 real, 0 complex, −1 quaternionic.
    pub fn frobenius_schur<G: FiniteGroup>(&self, group: &G, row: usize) -> i64 {
        let s: Cyclotomic = (0..group.order())
            .map(|g| self.value(row, group.mul(g, g)).clone())
            .sum();
        s.scale(Rational::new(1, self.group_order as i128))
            .to_integer()
            .unwrap_or(0) as i64
    }

    pub fn real_type_flags<G: FiniteGroup>(&self, group: &G) -> Vec<bool> {
        (0..self.rows.len())
            .map(|r| self.frobenius_schur(group, r) == 1)
            .collect()
    }

    /// Character of the permutation action: number of fixed points per class.
    pub fn permutation_character(&self, group: &Group) -> ClassFunction {
        self.class_reps
            .iter()
            .map(|&x| Cyclotomic::from_int(group.element(x).fixed_points() as i64))
            .collect()
    }

    /// Character of a representation given by one matrix per group element
    /// (traces), folded onto classes.
    pub fn class_function_from_traces(&self, traces: &[Cyclotomic]) -> ClassFunction {
        self.class_reps.iter().map(|&x| traces[x].clone()).collect()
    }

    pub fn isotypic_multiplicities(&self, chi: &[Cyclotomic]) -> Result<IsotypicDecomposition> {
        let mut mult = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let m = self
                .inner(chi, row)
                .to_integer()
                .filter(|&m| m >= 0)
                .ok_or(EqError::CharacterInconsistent)?;
            mult.push(m as usize);
        }
        let dims: Vec<usize> = (0..self.rows.len()).map(|r| self.dim(r)).collect();
        let component_dims = mult.iter().zip(&dims).map(|(m, d)| m * d).collect();
        Ok(IsotypicDecomposition {
            multiplicities: mult,
            dims,
            component_dims,
        })
    }

    /// `dim V^H = (1/|H|) Σ_{h∈H} χ(h)`.
    pub fn fixed_space_dim(&self, chi: &[Cyclotomic], h: &Subgroup) -> Result<usize> {
        let s: Cyclotomic = h.elements.iter().map(|&x| chi[self.class_of[x]].clone()).sum();
        s.scale(Rational::new(1, h.order() as i128))
            .to_integer()
            .filter(|&d| d >= 0)
            .map(|d| d as usize)
            .ok_or(EqError::NotACharacter)
    }

    /// Table of `Γ × Z₂` where `ext` is `base.times_z2()`. Rows `0..r` are
    /// `χ_l ⊗ 1`, rows `r..2r` are `χ_l ⊗ sign` (the antipodal versions).
    pub fn times_z2(&self, base: &Group, ext: &Group) -> Result<CharacterTable> {
        let n = base.degree();
        let nc = self.num_classes();
        let mut class_of = vec![0usize; ext.order()];
        let mut reps = vec![usize::MAX; 2 * nc];
        for x in 0..ext.order() {
            let p = ext.element(x);
            let restricted: Vec<u16> = p.images()[..n].to_vec();
            let bp = crate::permgroup::Permutation::from_images(restricted)?;
            let bx = base
                .index_of(&bp)
                .ok_or_else(|| EqError::Internal("extension does not restrict to base".into()))?;
            let s = (p.apply(n) != n) as usize;
            let c = 2 * self.class_of[bx] + s;
            class_of[x] = c;
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        let mut class_names = Vec::with_capacity(2 * nc);
        let mut class_sizes = Vec::with_capacity(2 * nc);
        for c in 0..nc {
            class_names.push(format!("{}+", self.class_names[c]));
            class_names.push(format!("{}-", self.class_names[c]));
            class_sizes.push(self.class_sizes[c]);
            class_sizes.push(self.class_sizes[c]);
        }
        let mut rows = Vec::with_capacity(2 * nc);
        let mut row_names = Vec::with_capacity(2 * nc);
        for sign in [1i64, -1] {
            for (r, row) in self.rows.iter().enumerate() {
                let mut out = Vec::with_capacity(2 * nc);
                for v in row {
                    out.push(v.clone());
                    out.push(v.scale(Rational::from_integer(sign as i128)));
                }
                rows.push(out);
                row_names.push(format!("{}{}", self.row_names[r], if sign < 0 { "-" } else { "+" }));
            }
        }
        let t = CharacterTable {
            name: format!("{}xZ2", self.name),
            class_names,
            class_reps: reps,
            class_sizes,
            row_names,
            rows,
            class_of,
            group_order: ext.order(),
        };
        t.check_orthonormal()?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::SubgroupClassLattice;

    fn ints(v: &[i64]) -> Vec<Cyclotomic> {
        v.iter().map(|&x| Cyclotomic::from_int(x)).collect()
    }

    #[test]
    fn d6_matches_classical_table() {
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        let expected = [
            [1, 1, 1, 1, 1, 1],
            [1, -1, -1, 1, 1, -1],
            [1, -1, 1, 1, -1, 1],
            [1, 1, -1, 1, -1, -1],
            [2, 0, 1, -1, 0, -2],
            [2, 0, -1, -1, 0, 2],
        ];
        for (r, e) in expected.iter().enumerate() {
            assert_eq!(t.rows[r], ints(e));
        }
        assert_eq!(t.class_sizes, vec![1, 3, 2, 2, 3, 1]);
        assert!(t.real_type_flags(&g).iter().all(|&b| b));
    }

    #[test]
    fn all_bundled_tables_bind() {
        for n in 1..=12 {
            let g = Group::preset(&format!("D{}", n)).unwrap();
            CharacterTable::bundled(&format!("D{}", n), &g).unwrap();
            let z = Group::preset(&format!("Z{}", n)).unwrap();
            CharacterTable::bundled(&format!("Z{}", n), &z).unwrap();
        }
        for s in ["S3", "S4"] {
            let g = Group::preset(s).unwrap();
            CharacterTable::bundled(s, &g).unwrap();
        }
        assert!(bundled_spec("Q8").is_err());
    }

    #[test]
    fn complex_type_detected() {
        let g = Group::preset("Z3").unwrap();
        let t = CharacterTable::bundled("Z3", &g).unwrap();
        assert_eq!(t.real_type_flags(&g), vec![true, false, false]);
    }

    #[test]
    fn hexagon_decomposition() {
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        let chi = t.permutation_character(&g);
        assert_eq!(chi, ints(&[6, 2, 0, 0, 0, 0]));
        let dec = t.isotypic_multiplicities(&chi).unwrap();
        assert_eq!(dec.multiplicities, vec![1, 0, 0, 1, 1, 1]);
        assert_eq!(dec.total_dim(), 6);
        let whole = Subgroup::whole(&g);
        assert_eq!(t.fixed_space_dim(&chi, &whole).unwrap(), 1);
        let triv = Subgroup::trivial(&g);
        assert_eq!(t.fixed_space_dim(&chi, &triv).unwrap(), 6);
        let rot = Subgroup::generated(&g, &[g.eval_word("a").unwrap()]);
        assert_eq!(t.fixed_space_dim(&t.rows[4], &rot).unwrap(), 0);
    }

    #[test]
    fn regular_and_inconsistent() {
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        let reg = ints(&[12, 0, 0, 0, 0, 0]);
        let dec = t.isotypic_multiplicities(&reg).unwrap();
        assert_eq!(dec.multiplicities, dec.dims);
        let bad = ints(&[1, 0, 0, 0, 0, 0]);
        assert!(matches!(t.isotypic_multiplicities(&bad), Err(EqError::CharacterInconsistent)));
        let triv = Subgroup::generated(&g, &[g.eval_word("b").unwrap()]);
        assert!(matches!(t.fixed_space_dim(&ints(&[0, 1, 0, 0, 0, 0]), &triv), Err(EqError::NotACharacter)));
    }

    #[test]
    fn fixed_dims_match_projector_rank() {
        // dim V^H from character averaging equals the rank of the averaged
        // permutation projector, for every subgroup of D6 on R^6.
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        let chi = t.permutation_character(&g);
        let lat = SubgroupClassLattice::build(&g);
        for c in &lat.classes {
            let h = &c.representative;
            let mut p = nalgebra::DMatrix::<f64>::zeros(6, 6);
            for &x in &h.elements {
                let perm = g.element(x);
                for i in 0..6 {
                    p[(perm.apply(i), i)] += 1.0 / h.order() as f64;
                }
            }
            let rank = p.rank(1e-9);
            assert_eq!(t.fixed_space_dim(&chi, h).unwrap(), rank);
        }
    }

    #[test]
    fn z2_extension() {
        let g = Group::preset("D6").unwrap();
        let t = CharacterTable::bundled("D6", &g).unwrap();
        let gp = g.times_z2().unwrap();
        let tp = t.times_z2(&g, &gp).unwrap();
        assert_eq!(tp.rows.len(), 12);
        assert_eq!(gp.order(), 24);
        assert!(tp.real_type_flags(&gp).iter().all(|&b| b));
    }

    #[test]
    fn user_table_json() {
        let js = r#"{"name":"Z2","class_words":["1","a"],"class_sizes":[1,1],"rows":[["1","1"],["1","-1"]]}"#;
        let spec: TableSpec = serde_json::from_str(js).unwrap();
        let g = Group::preset("Z2").unwrap();
        let t = CharacterTable::bind(&spec, &g).unwrap();
        assert_eq!(t.rows[1], ints(&[1, -1]));
        let z1 = Group::preset("Z1").unwrap();
        let t1 = CharacterTable::bundled("Z1", &z1).unwrap();
        assert_eq!(t1.rows, vec![ints(&[1])]);
    }
}

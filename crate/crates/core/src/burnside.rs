//! Burnside ring elements and multiplication for finite groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{EqError, Result};
use crate::permgroup::{generating_set, FiniteGroup, Subgroup, SubgroupClassLattice};

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

pub fn fresh_ring_id() -> u64 {
    NEXT_RING_ID.fetch_add(1, Ordering::Relaxed)
}

/// Integer combination of subgroup classes; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BurnsideElement {
    #[serde(skip)]
    ring: u64,
    coeffs: BTreeMap<usize, i64>,
}

impl BurnsideElement {
    pub fn zero(ring: u64) -> Self {
        BurnsideElement {
            ring,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn class(ring: u64, h: usize) -> Self {
        Self::from_map(ring, [(h, 1)])
    }

    pub fn from_map(ring: u64, it: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut e = Self::zero(ring);
        for (h, c) in it {
            e.add_term(h, c);
        }
        e
    }

    pub fn ring(&self) -> u64 {
        self.ring
    }

    pub fn add_term(&mut self, h: usize, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry(h).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&h);
        }
    }

    pub fn coeff(&self, h: usize) -> i64 {
        self.coeffs.get(&h).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&h, &c)| (h, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(EqError::LatticeMismatch);
        }
        let mut out = self.clone();
        for (h, c) in other.terms() {
            out.add_term(h, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::from_map(self.ring, self.terms().map(|(h, c)| (h, c * s)))
    }
}

/// A ring structure on class indices.
pub trait BurnsideRing {
    fn ring_id(&self) -> u64;
    /// Index of the class of the whole group (the unit).
    fn unit_class(&self) -> usize;
    fn mul_classes(&self, h: usize, k: usize) -> BTreeMap<usize, i64>;
    fn class_name(&self, h: usize) -> String;

    /// Sort key for display; larger keys are printed first.
    fn display_rank(&self, h: usize) -> i64 {
        h as i64
    }

    fn display_order(&self, a: &BurnsideElement) -> Vec<(usize, i64)> {
        let mut t: Vec<(usize, i64)> = a.terms().collect();
        t.sort_by_key(|&(h, _)| std::cmp::Reverse((self.display_rank(h), h)));
        t
    }

    fn unit(&self) -> BurnsideElement {
        BurnsideElement::class(self.ring_id(), self.unit_class())
    }

    fn element(&self, it: impl IntoIterator<Item = (usize, i64)>) -> BurnsideElement
    where
        Self: Sized,
    {
        BurnsideElement::from_map(self.ring_id(), it)
    }

    fn ring_mul(&self, a: &BurnsideElement, b: &BurnsideElement) -> Result<BurnsideElement> {
        if a.ring != self.ring_id() || b.ring != self.ring_id() {
            return Err(EqError::LatticeMismatch);
        }
        let mut out = BurnsideElement::zero(self.ring_id());
        for (h, ch) in a.terms() {
            for (k, ck) in b.terms() {
                for (l, m) in self.mul_classes(h, k) {
                    out.add_term(l, ch * ck * m);
                }
            }
        }
        Ok(out)
    }

    /// Renders `n₁(H₁) + n₂(H₂) + …` in class order, largest classes first.
    fn render(&self, a: &BurnsideElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (h, c)) in self.display_order(a).into_iter().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {} ", sign);
            }
            if mag != 1 {
                let _ = write!(s, "{}", mag);
            }
            let _ = write!(s, "({})", self.class_name(h));
        }
        s
    }

    fn to_json(&self, a: &BurnsideElement) -> serde_json::Value {
        serde_json::Value::Array(
            self.display_order(a)
                .into_iter()
                .map(|(h, c)| {
                    serde_json::json!({"class": h, "name": self.class_name(h), "coeff": c})
                })
                .collect(),
        )
    }
}

/// Burnside ring of a finite group over its subgroup class lattice.
/// Products are computed by explicit orbit enumeration on `G/H × G/K` and
/// memoized.
pub struct FiniteBurnside<'a, G: FiniteGroup> {
    group: &'a G,
    lattice: &'a SubgroupClassLattice,
    names: Vec<String>,
    id: u64,
    cache: Mutex<HashMap<(usize, usize), BTreeMap<usize, i64>>>,
}

impl<'a, G: FiniteGroup> FiniteBurnside<'a, G> {
    pub fn new(group: &'a G, lattice: &'a SubgroupClassLattice) -> Self {
        let names = default_class_names(lattice);
        FiniteBurnside {
            group,
            lattice,
            names,
            id: fresh_ring_id(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = names;
        self
    }

    pub fn lattice(&self) -> &SubgroupClassLattice {
        self.lattice
    }

    /// Orbits of the diagonal action on `G/H × G/K`, each reported as
    /// (orbit size, class of the stabilizer).
    pub fn diagonal_orbits(&self, h: usize, k: usize) -> Vec<(usize, usize)> {
        let g = self.group;
        let hs = &self.lattice.classes[h].representative;
        let ks = &self.lattice.classes[k].representative;
        let (coset_h, reps_h) = left_cosets(g, hs);
        let (coset_k, reps_k) = left_cosets(g, ks);
        let nh = reps_h.len();
        let nk = reps_k.len();
        let gens = generating_set(g);
        let mut seen = vec![false; nh * nk];
        let mut out = Vec::new();
        for start in 0..nh * nk {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(p) = stack.pop() {
                size += 1;
                let (i, j) = (p / nk, p % nk);
                for &s in &gens {
                    let ni = coset_h[g.mul(s, reps_h[i])];
                    let nj = coset_k[g.mul(s, reps_k[j])];
                    let q = ni * nk + nj;
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            let (i, j) = (start / nk, start % nk);
            let a = hs.conjugate(g, reps_h[i]);
            let b = ks.conjugate(g, reps_k[j]);
            let stab = a.bits.intersection(&b.bits);
            let class = self
                .lattice
                .class_of(&stab)
                .expect("stabilizer is a subgroup in the lattice");
            out.push((size, class));
        }
        out
    }
}

/// Left cosets `xS`: coset index of every element, and one representative per coset.
pub fn left_cosets<G: FiniteGroup + ?Sized>(g: &G, s: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &h in &s.elements {
            coset[g.mul(x, h)] = c;
        }
    }
    (coset, reps)
}

impl<G: FiniteGroup> BurnsideRing for FiniteBurnside<'_, G> {
    fn ring_id(&self) -> u64 {
        self.id
    }

    fn unit_class(&self) -> usize {
        self.lattice.top()
    }

    fn mul_classes(&self, h: usize, k: usize) -> BTreeMap<usize, i64> {
        let key = (h.min(k), h.max(k));
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut out = BTreeMap::new();
        for (_, l) in self.diagonal_orbits(key.0, key.1) {
            *out.entry(l).or_insert(0) += 1;
        }
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn class_name(&self, h: usize) -> String {
        self.names[h].clone()
    }
}

fn default_class_names(lattice: &SubgroupClassLattice) -> Vec<String> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    lattice
        .classes
        .iter()
        .map(|c| {
            let i = count.entry(c.order).or_insert(0);
            *i += 1;
            format!("S{}_{}", c.order, i)
        })
        .collect()
}

/// Product of two classes by inverting the table of marks
/// `|(G/H × G/K)^L| = |(G/H)^L|·|(G/K)^L|`.
pub fn mul_classes_by_marks(lattice: &SubgroupClassLattice, h: usize, k: usize) -> BTreeMap<usize, i64> {
    let n = lattice.len();
    let mut m = vec![0i64; n];
    for l in (0..n).rev() {
        let mut v = (lattice.mark(l, h) * lattice.mark(l, k)) as i64;
        for lp in l + 1..n {
            if m[lp] != 0 {
                v -= m[lp] * lattice.mark(l, lp) as i64;
            }
        }
        let d = lattice.mark(l, l) as i64;
        assert_eq!(v % d, 0, "mark inversion not integral");
        m[l] = v / d;
    }
    m.into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// Class membership of an arbitrary subgroup given as a bit set.
pub fn class_of_subgroup(lattice: &SubgroupClassLattice, s: &BitSet) -> Option<usize> {
    lattice.class_of(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Group;

    #[test]
    fn z2_products() {
        let g = Group::preset("Z2").unwrap();
        let lat = SubgroupClassLattice::build(&g);
        let r = FiniteBurnside::new(&g, &lat);
        assert_eq!(r.mul_classes(0, 0), BTreeMap::from([(0, 2)]));
        assert_eq!(r.mul_classes(1, 0), BTreeMap::from([(0, 1)]));
        assert_eq!(r.mul_classes(1, 1), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn d6_trivial_square() {
        let g = Group::preset("D6").unwrap();
        let lat = SubgroupClassLattice::build(&g);
        let r = FiniteBurnside::new(&g, &lat);
        assert_eq!(r.mul_classes(0, 0), BTreeMap::from([(0, 12)]));
        let top = lat.top();
        assert_eq!(r.mul_classes(top, top), BTreeMap::from([(top, 1)]));
        for h in 0..lat.len() {
            assert_eq!(r.mul_classes(top, h), BTreeMap::from([(h, 1)]));
            // coefficient of (H) in (H)·(H) is |W(H)|
            assert_eq!(r.mul_classes(h, h)[&h], lat.weyl_order(h) as i64);
        }
    }

    #[test]
    fn element_ops_and_render() {
        let g = Group::preset("Z2").unwrap();
        let lat = SubgroupClassLattice::build(&g);
        let r = FiniteBurnside::new(&g, &lat);
        let a = r.element([(1, 1), (0, -2)]);
        assert_eq!(a.coeff(0), -2);
        assert_eq!(BurnsideElement::zero(r.ring_id()).coeff(1), 0);
        assert_eq!(r.render(&a), "(S2_1) - 2(S1_1)");
        let sq = r.ring_mul(&a, &a).unwrap();
        // (G - 2·1)² = G - 4·1 + 4·2·1 = G + 4·1
        assert_eq!(sq, r.element([(1, 1), (0, 4)]));
        let other = FiniteBurnside::new(&g, &lat);
        assert!(r.ring_mul(&a, &other.unit()).is_err());
    }

    #[test]
    fn orbit_enumeration_matches_marks() {
        for name in ["D6", "S3", "S4", "Z6"] {
            let g = Group::preset(name).unwrap();
            let lat = SubgroupClassLattice::build(&g);
            let r = FiniteBurnside::new(&g, &lat);
            for h in 0..lat.len() {
                for k in 0..lat.len() {
                    assert_eq!(r.mul_classes(h, k), mul_classes_by_marks(&lat, h, k), "{} {} {}", name, h, k);
                }
            }
        }
    }
}

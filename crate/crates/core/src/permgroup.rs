//! Permutation groups, subgroup enumeration and the lattice of subgroup classes.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{EqError, Result};

pub const DEFAULT_ORDER_CAP: usize = 10_000;
const CAYLEY_LIMIT: usize = 2048;

/// A permutation of `{0, …, n-1}` stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u16>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u16).collect())
    }

    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || seen[i as usize] {
                return Err(EqError::BadPermutation(format!("{:?} is not a bijection", images)));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"` or `"()"`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let s = s.trim();
        if s.is_empty() || s == "()" || s == "1" || s == "e" {
            return Ok(Permutation(images));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| EqError::BadPermutation(s.to_string()))?;
            if !rest[..open].trim().is_empty() {
                return Err(EqError::BadPermutation(s.to_string()));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| EqError::BadPermutation(s.to_string()))?;
            let cycle: Vec<usize> = rest[open + 1..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| EqError::BadPermutation(s.to_string()))?;
            for &p in &cycle {
                if p == 0 || p > degree {
                    return Err(EqError::InconsistentDegree(format!(
                        "point {} outside 1..{} in {}",
                        p, degree, s
                    )));
                }
            }
            for (i, &p) in cycle.iter().enumerate() {
                let q = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (q - 1) as u16;
            }
            rest = rest[close + 1..].trim_start();
        }
        Permutation::from_images(images)
    }

    /// Largest point moved (1-based) appearing in a cycle string.
    pub fn max_point(s: &str) -> usize {
        s.split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self` followed by `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &j)| *i == j as usize).count()
    }

    pub fn extend(&self, degree: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u16..degree as u16);
        Permutation(v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Minimal interface the subgroup machinery needs from a finite group whose
/// elements are numbered `0..order` with `0` the identity.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    fn identity(&self) -> usize {
        0
    }

    fn conj(&self, g: usize, x: usize) -> usize {
        // g x g^{-1}
        self.mul(self.mul(g, x), self.inv(g))
    }

    fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}

/// A subgroup stored as a sorted element list plus a membership bit set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub bits: BitSet,
    pub gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn trivial<G: FiniteGroup + ?Sized>(g: &G) -> Subgroup {
        Subgroup {
            elements: vec![g.identity()],
            bits: BitSet::from_indices(g.order(), [g.identity()]),
            gens: vec![],
        }
    }

    pub fn whole<G: FiniteGroup + ?Sized>(g: &G) -> Subgroup {
        Subgroup {
            elements: (0..g.order()).collect(),
            bits: BitSet::from_indices(g.order(), 0..g.order()),
            gens: (0..g.order()).collect(),
        }
    }

    pub fn from_elements<G: FiniteGroup + ?Sized>(g: &G, elems: impl IntoIterator<Item = usize>) -> Subgroup {
        let bits = BitSet::from_indices(g.order(), elems);
        let elements: Vec<usize> = bits.iter().collect();
        Subgroup {
            gens: elements.clone(),
            elements,
            bits,
        }
    }

    /// Subgroup generated by `gens`.
    pub fn generated<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Subgroup {
        Subgroup::trivial(g).extend(g, gens)
    }

    /// Smallest subgroup containing `self` and `extra`.
    pub fn extend<G: FiniteGroup + ?Sized>(&self, g: &G, extra: &[usize]) -> Subgroup {
        let mut gens = self.gens.clone();
        let mut bits = self.bits.clone();
        let mut elements = self.elements.clone();
        let new_gens: Vec<usize> = extra.iter().copied().filter(|&x| !bits.contains(x)).collect();
        if new_gens.is_empty() {
            return self.clone();
        }
        gens.extend(&new_gens);
        // Every element of the closure is a word in the generators; extending
        // all known elements by all generators reaches it.
        let mut queue: VecDeque<usize> = elements.iter().copied().collect();
        while let Some(e) = queue.pop_front() {
            for &s in &gens {
                let p = g.mul(e, s);
                if bits.insert(p) {
                    elements.push(p);
                    queue.push_back(p);
                }
            }
        }
        elements.sort_unstable();
        Subgroup { elements, bits, gens }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn conjugate<G: FiniteGroup + ?Sized>(&self, g: &G, x: usize) -> Subgroup {
        let elems: Vec<usize> = self.elements.iter().map(|&e| g.conj(x, e)).collect();
        let mut s = Subgroup::from_elements(g, elems);
        s.gens = self.gens.iter().map(|&e| g.conj(x, e)).collect();
        s
    }

    pub fn intersection<G: FiniteGroup + ?Sized>(&self, g: &G, other: &Subgroup) -> Subgroup {
        let bits = self.bits.intersection(&other.bits);
        let elements: Vec<usize> = bits.iter().collect();
        let _ = g;
        Subgroup {
            gens: elements.clone(),
            elements,
            bits,
        }
    }
}

/// A small generating set, chosen greedily in element order.
pub fn generating_set<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let mut s = Subgroup::trivial(g);
    let mut gens = Vec::new();
    for x in 0..g.order() {
        if !s.contains(x) {
            s = s.extend(g, &[x]);
            gens.push(x);
        }
    }
    gens
}

/// Elements generating pairwise distinct cyclic subgroups.
pub fn cyclic_generators<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut out = Vec::new();
    for x in 0..g.order() {
        let c = Subgroup::generated(g, &[x]);
        if seen.insert(c.bits) {
            out.push(x);
        }
    }
    out
}

/// All subgroups `S` with `keep(S)`, where `keep` is inherited by subgroups
/// (if it holds for `S` it holds for every subgroup of `S`). Built by the
/// cyclic extension method: repeatedly adjoin a cyclic generator.
pub fn enumerate_subgroups<G, F>(g: &G, keep: F) -> Vec<Subgroup>
where
    G: FiniteGroup + ?Sized,
    F: Fn(&Subgroup) -> bool,
{
    enumerate_subgroups_with(g, &cyclic_generators(g), keep)
}

pub fn enumerate_subgroups_with<G, F>(g: &G, cyc: &[usize], keep: F) -> Vec<Subgroup>
where
    G: FiniteGroup + ?Sized,
    F: Fn(&Subgroup) -> bool,
{
    let triv = Subgroup::trivial(g);
    if !keep(&triv) {
        return vec![];
    }
    let mut seen: HashSet<BitSet> = HashSet::new();
    seen.insert(triv.bits.clone());
    let mut out = vec![triv];
    let mut head = 0;
    while head < out.len() {
        let s = out[head].clone();
        head += 1;
        for &x in cyc {
            if s.contains(x) {
                continue;
            }
            let t = s.extend(g, &[x]);
            if seen.contains(&t.bits) {
                continue;
            }
            seen.insert(t.bits.clone());
            if keep(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// A finite permutation group with enumerated, lexicographically sorted elements.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    name: Option<String>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup for Group {
    fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

impl Group {
    pub fn from_generators(generators: Vec<Permutation>) -> Result<Group> {
        Self::with_cap(generators, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(generators: Vec<Permutation>, cap: usize) -> Result<Group> {
        if generators.is_empty() {
            return Err(EqError::InconsistentDegree("no generators".into()));
        }
        let degree = generators[0].degree();
        if let Some(p) = generators.iter().find(|p| p.degree() != degree) {
            return Err(EqError::InconsistentDegree(format!(
                "generator {} has degree {} but expected {}",
                p,
                p.degree(),
                degree
            )));
        }
        let id = Permutation::identity(degree);
        let mut set: HashSet<Permutation> = HashSet::new();
        set.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for s in &generators {
                let p = e.then(s);
                if !set.contains(&p) {
                    if set.len() >= cap {
                        return Err(EqError::GroupTooLarge { cap });
                    }
                    set.insert(p.clone());
                    queue.push_back(p);
                }
            }
        }
        let mut elements: Vec<Permutation> = set.into_iter().collect();
        elements.sort();
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let table = (n <= CAYLEY_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for (a, pa) in elements.iter().enumerate() {
                for (b, pb) in elements.iter().enumerate() {
                    t[a * n + b] = index[&pa.then(pb)] as u32;
                }
            }
            t
        });
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        Ok(Group {
            degree,
            generators,
            elements,
            index,
            table,
            inverses,
            name: None,
        })
    }

    /// Parses generators in cycle notation; the degree is the largest point
    /// mentioned unless `degree` is given.
    pub fn from_cycle_strings(gens: &[&str], degree: Option<usize>) -> Result<Group> {
        let n = degree.unwrap_or_else(|| gens.iter().map(|s| Permutation::max_point(s)).max().unwrap_or(1).max(1));
        let perms = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, n))
            .collect::<Result<Vec<_>>>()?;
        Group::from_generators(perms)
    }

    /// Named presets: `Z<n>` (cyclic, on n points), `D<n>` (dihedral of order
    /// 2n on the vertices of an n-gon), `S<n>` (symmetric).
    pub fn preset(name: &str) -> Result<Group> {
        let name = name.trim();
        let (kind, num) = name.split_at(1.min(name.len()));
        let n: usize = num
            .parse()
            .map_err(|_| EqError::Unknown(name.to_string()))?;
        if n == 0 {
            return Err(EqError::Unknown(name.to_string()));
        }
        let gens = match kind {
            "Z" | "C" => vec![rotation(n)],
            "D" => {
                if n == 1 {
                    // D1 = {1, κ}: a single reflection, realised on two points.
                    vec![Permutation::parse_cycles("(1 2)", 2)?]
                } else if n == 2 {
                    // Klein four-group on the "2-gon": rotation by π and a reflection.
                    vec![
                        Permutation::parse_cycles("(1 2)(3 4)", 4)?,
                        Permutation::parse_cycles("(1 3)(2 4)", 4)?,
                    ]
                } else {
                    vec![rotation(n), vertex_reflection(n)]
                }
            }
            "S" => {
                if n == 1 {
                    vec![Permutation::identity(1)]
                } else {
                    vec![rotation(n), Permutation::parse_cycles("(1 2)", n)?]
                }
            }
            _ => return Err(EqError::Unknown(name.to_string())),
        };
        let mut g = Group::from_generators(gens)?;
        g.name = Some(format!("{}{}", if kind == "C" { "Z" } else { kind }, n));
        Ok(g)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|p| self.index[p]).collect()
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Conjugacy classes of elements, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        let gens = self.generator_indices();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![x];
            class_of[x] = c;
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                i += 1;
                for &s in &gens {
                    let z = self.conj(s, y);
                    if class_of[z] == usize::MAX {
                        class_of[z] = c;
                        members.push(z);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Direct product with Z₂ acting on two extra points; the added
    /// involution is the antipodal element.
    pub fn times_z2(&self) -> Result<Group> {
        let n = self.degree;
        let mut gens: Vec<Permutation> = self.generators.iter().map(|p| p.extend(n + 2)).collect();
        let mut swap: Vec<u16> = (0..(n + 2) as u16).collect();
        swap.swap(n, n + 1);
        gens.push(Permutation(swap));
        let mut g = Group::from_generators(gens)?;
        if let Some(nm) = &self.name {
            g.name = Some(format!("{}xZ2", nm));
        }
        Ok(g)
    }

    /// Evaluates a word such as `"ab^2a^-1"` in the generators (letters
    /// `a, b, c, …` in generator order; `1`/`e` is the identity).
    pub fn eval_word(&self, word: &str) -> Result<usize> {
        let mut acc = self.identity();
        let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if chars.is_empty() || chars == ['1'] || chars == ['e'] {
            return Ok(acc);
        }
        let gens = self.generator_indices();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_lowercase() || c == 'e' {
                return Err(EqError::Config(format!("bad word {}", word)));
            }
            let gi = (c as u8 - b'a') as usize;
            let g = *gens
                .get(gi)
                .ok_or_else(|| EqError::Config(format!("word {} uses missing generator {}", word, c)))?;
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                exp = s.parse().map_err(|_| EqError::Config(format!("bad exponent in {}", word)))?;
            }
            let base = if exp < 0 { self.inv(g) } else { g };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul(acc, base);
            }
        }
        Ok(acc)
    }
}

fn rotation(n: usize) -> Permutation {
    Permutation((0..n).map(|i| ((i + 1) % n) as u16).collect())
}

// Reflection of the n-gon fixing vertex 1: i ↦ -i (mod n).
fn vertex_reflection(n: usize) -> Permutation {
    Permutation((0..n).map(|i| ((n - i) % n) as u16).collect())
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupClass {
    #[serde(serialize_with = "ser_elems")]
    pub representative: Subgroup,
    pub order: usize,
    pub class_size: usize,
    pub normalizer_order: usize,
    pub weyl_order: usize,
    #[serde(skip)]
    pub conjugates: Vec<BitSet>,
}

fn ser_elems<S: serde::Serializer>(s: &Subgroup, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    s.elements.serialize(ser)
}

/// Conjugacy classes of all subgroups with subconjugacy and containment counts.
#[derive(Debug)]
pub struct SubgroupClassLattice {
    pub classes: Vec<SubgroupClass>,
    leq: Vec<Vec<bool>>,
    n_hk: Vec<Vec<usize>>,
    class_of: HashMap<BitSet, usize>,
    group_order: usize,
}

impl SubgroupClassLattice {
    pub fn build<G: FiniteGroup + ?Sized>(g: &G) -> SubgroupClassLattice {
        let subs = enumerate_subgroups(g, |_| true);
        Self::from_subgroups(g, subs)
    }

    pub fn from_subgroups<G: FiniteGroup + ?Sized>(g: &G, subs: Vec<Subgroup>) -> SubgroupClassLattice {
        let order = g.order();
        let by_bits: HashMap<BitSet, Subgroup> = subs.into_iter().map(|s| (s.bits.clone(), s)).collect();
        let mut assigned: HashSet<BitSet> = HashSet::new();
        let mut raw: Vec<(Subgroup, Vec<BitSet>)> = Vec::new();
        let mut keys: Vec<&BitSet> = by_bits.keys().collect();
        keys.sort();
        for key in keys {
            if assigned.contains(key) {
                continue;
            }
            let s = &by_bits[key];
            let mut conj: Vec<BitSet> = Vec::new();
            let mut local: HashSet<BitSet> = HashSet::new();
            for x in 0..order {
                let c = s.conjugate(g, x);
                if local.insert(c.bits.clone()) {
                    conj.push(c.bits);
                }
            }
            let rep_bits = conj
                .iter()
                .min_by(|a, b| a.iter().cmp(b.iter()))
                .cloned()
                .unwrap();
            for c in &conj {
                assigned.insert(c.clone());
            }
            let rep = by_bits
                .get(&rep_bits)
                .cloned()
                .unwrap_or_else(|| Subgroup::from_elements(g, rep_bits.iter()));
            raw.push((rep, conj));
        }
        raw.sort_by(|(a, _), (b, _)| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        let classes: Vec<SubgroupClass> = raw
            .into_iter()
            .map(|(rep, conjugates)| {
                let class_size = conjugates.len();
                let normalizer_order = order / class_size;
                SubgroupClass {
                    order: rep.order(),
                    weyl_order: normalizer_order / rep.order(),
                    representative: rep,
                    class_size,
                    normalizer_order,
                    conjugates,
                }
            })
            .collect();
        let mut class_of = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for b in &c.conjugates {
                class_of.insert(b.clone(), i);
            }
        }
        let nc = classes.len();
        let mut n_hk = vec![vec![0usize; nc]; nc];
        let mut leq = vec![vec![false; nc]; nc];
        for h in 0..nc {
            let rep = &classes[h].representative.bits;
            for k in 0..nc {
                if !classes[k].order.is_multiple_of(classes[h].order) {
                    continue;
                }
                let cnt = classes[k].conjugates.iter().filter(|c| rep.is_subset(c)).count();
                n_hk[h][k] = cnt;
                leq[h][k] = cnt > 0;
            }
        }
        SubgroupClassLattice {
            classes,
            leq,
            n_hk,
            class_of,
            group_order: order,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.leq[h][k]
    }

    pub fn n_count(&self, h: usize, k: usize) -> usize {
        self.n_hk[h][k]
    }

    pub fn weyl_order(&self, h: usize) -> usize {
        self.classes[h].weyl_order
    }

    /// Number of fixed points of `H` on `G/K`: `n(H,K)·|W(K)|`.
    pub fn mark(&self, h: usize, k: usize) -> usize {
        self.n_hk[h][k] * self.classes[k].weyl_order
    }

    pub fn class_of(&self, s: &BitSet) -> Option<usize> {
        self.class_of.get(s).copied()
    }
}

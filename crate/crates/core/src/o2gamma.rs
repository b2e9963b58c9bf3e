//! Conjugacy classes of closed subgroups of `G = O(2) × Γ'` with finite Weyl
//! group, together with marks, Burnside products, orbit types of the
//! irreducible representations `𝒱_{k,l}` and the folding homomorphisms.
//!
//! All finite classes that can occur live inside `D_M × Γ'` with
//! `M = E·lcm(modes)`, `E` the exponent of `Γ'`. Conjugations and double
//! cosets are computed inside the finite group `U = D_{2M} × Γ'`, which
//! contains every conjugator relating two such subgroups that contain a
//! reflection. Classes containing `SO(2)` are handled through the quotient
//! `Q = G/SO(2) = Z₂ × Γ'`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::burnside::{fresh_ring_id, BurnsideElement, BurnsideRing};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{EqError, Result};
use crate::gamma::GammaPrime;
use crate::permgroup::{FiniteGroup, Subgroup};

const MAX_AMBIENT: usize = 1 << 20;

/// `D_res × Γ'` with element `((j·2 + r)·n + g)` standing for
/// `(ρ_{j/res} κ^r, g)`, rotation angles measured in turns.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub res: usize,
    pub n: usize,
    gmul: Vec<u32>,
    ginv: Vec<u32>,
}

impl Ambient {
    fn new(res: usize, ext: &crate::permgroup::Group) -> Ambient {
        let n = ext.order();
        let mut gmul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                gmul[a * n + b] = ext.mul(a, b) as u32;
            }
        }
        let ginv = (0..n).map(|a| ext.inv(a) as u32).collect();
        Ambient { res, n, gmul, ginv }
    }

    #[inline]
    pub fn decode(&self, x: usize) -> (usize, bool, usize) {
        let g = x % self.n;
        let t = x / self.n;
        (t / 2, t % 2 == 1, g)
    }

    #[inline]
    pub fn encode(&self, j: usize, r: bool, g: usize) -> usize {
        ((j % self.res) * 2 + r as usize) * self.n + g
    }

    /// Order of the rotation `j/res` turns.
    pub fn rotation_order(&self, j: usize) -> usize {
        self.res / num_integer::gcd(j % self.res, self.res)
    }
}

impl FiniteGroup for Ambient {
    fn order(&self) -> usize {
        2 * self.res * self.n
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let (j1, r1, g1) = self.decode(a);
        let (j2, r2, g2) = self.decode(b);
        let j = if r1 { j1 + self.res - j2 } else { j1 + j2 };
        self.encode(j, r1 ^ r2, self.gmul[g1 * self.n + g2] as usize)
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        let (j, r, g) = self.decode(a);
        let j = if r { j } else { self.res - j };
        self.encode(j, r, self.ginv[g] as usize)
    }
}

/// `Q = Z₂ × Γ'` with element `r·n + g`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub n: usize,
    gmul: Vec<u32>,
    ginv: Vec<u32>,
}

impl Quotient {
    #[inline]
    pub fn decode(&self, x: usize) -> (bool, usize) {
        (x >= self.n, x % self.n)
    }

    #[inline]
    pub fn encode(&self, r: bool, g: usize) -> usize {
        r as usize * self.n + g
    }
}

impl FiniteGroup for Quotient {
    fn order(&self) -> usize {
        2 * self.n
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (r1, g1) = self.decode(a);
        let (r2, g2) = self.decode(b);
        self.encode(r1 ^ r2, self.gmul[g1 * self.n + g2] as usize)
    }

    fn inv(&self, a: usize) -> usize {
        let (r, g) = self.decode(a);
        self.encode(r, self.ginv[g] as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Finite,
    Continuous,
}

/// Goursat data `H ^Z ×_L ^R K` of an amalgamated subgroup.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Goursat {
    pub h: String,
    pub z: String,
    pub l: String,
    pub r: String,
    pub k: String,
    pub h_order: usize,
    pub z_order: usize,
    pub l_order: usize,
    pub r_order: usize,
    pub k_order: usize,
    /// Representatives of `H/Z` paired with representatives of `K/R`.
    pub pairing: Vec<(String, String)>,
}

/// Numerical fingerprint used to compare classes against reference data:
/// `(|H| or 0 for continuous, |Z|, |L|, |R|, |K|, |W|)`.
pub type Fingerprint = (usize, usize, usize, usize, usize, usize);

#[derive(Clone, Debug)]
pub struct AmalgamatedClass {
    pub id: usize,
    pub kind: ClassKind,
    /// Subgroup of `U` (finite) or of `Q` (continuous).
    pub sub: Subgroup,
    pub gens: Vec<usize>,
    pub weyl_order: usize,
    pub name: String,
    pub goursat: Goursat,
}

impl AmalgamatedClass {
    pub fn order(&self) -> usize {
        self.sub.order()
    }

    pub fn is_finite(&self) -> bool {
        self.kind == ClassKind::Finite
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let g = &self.goursat;
        (g.h_order, g.z_order, g.l_order, g.r_order, g.k_order, self.weyl_order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Signature {
    kind: ClassKind,
    order: usize,
    counts: Vec<(bool, usize, usize, usize)>,
}

/// Orbit types of one irreducible representation `𝒱_{k,l}`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTypes {
    pub k: usize,
    pub l: usize,
    /// Isotropy classes belonging to `Φ₀`, ordered by id.
    pub classes: Vec<usize>,
    pub fixed_dims: Vec<usize>,
    pub maximal: Vec<usize>,
}

#[derive(Default)]
struct State {
    classes: Vec<Arc<AmalgamatedClass>>,
    exact: HashMap<(ClassKind, BitSet), usize>,
    by_sig: HashMap<Signature, Vec<usize>>,
    names: HashMap<String, usize>,
    marks: HashMap<(usize, usize), usize>,
    products: HashMap<(usize, usize), Arc<BTreeMap<usize, i64>>>,
    orbits: HashMap<(usize, usize), Arc<OrbitTypes>>,
    fixed: HashMap<(usize, usize, usize), usize>,
}

/// Registry of classes in `Φ₀(G)` and the Burnside ring `A(G)` on them.
pub struct O2Gamma {
    pub gp: GammaPrime,
    /// lcm of the Fourier modes that may be folded to.
    pub modes_lcm: usize,
    /// Finite classes live in `D_m × Γ'`.
    pub m: usize,
    pub u: Ambient,
    pub q: Quotient,
    chi_f64: Vec<Vec<f64>>,
    ring: u64,
    state: Mutex<State>,
}

impl O2Gamma {
    /// Builds the registry for folds by every divisor of `modes_lcm`.
    pub fn new(gp: GammaPrime, modes_lcm: usize) -> Result<O2Gamma> {
        let modes_lcm = modes_lcm.max(1);
        let m = gp.exponent * modes_lcm;
        let res = 2 * m;
        if 2 * res * gp.order() > MAX_AMBIENT {
            return Err(EqError::GroupTooLarge { cap: MAX_AMBIENT });
        }
        let u = Ambient::new(res, &gp.ext);
        let q = Quotient {
            n: u.n,
            gmul: u.gmul.clone(),
            ginv: u.ginv.clone(),
        };
        let chi_f64 = gp
            .ext_table
            .rows
            .iter()
            .enumerate()
            .map(|(row, _)| (0..gp.order()).map(|g| gp.ext_table.value(row, g).to_f64()).collect())
            .collect();
        let reg = O2Gamma {
            gp,
            modes_lcm,
            m,
            u,
            q,
            chi_f64,
            ring: fresh_ring_id(),
            state: Mutex::new(State::default()),
        };
        let whole = Subgroup::whole(&reg.q);
        let top = reg.intern_continuous(&whole);
        debug_assert_eq!(top, 0);
        Ok(reg)
    }

    /// Registry large enough to fold orbit types up to mode `kmax`.
    pub fn for_kmax(gp: GammaPrime, kmax: usize) -> Result<O2Gamma> {
        let l = (1..=kmax.max(1)).fold(1, num_integer::lcm);
        O2Gamma::new(gp, l)
    }

    /// Id of the class of `G` itself.
    pub fn top(&self) -> usize {
        0
    }

    pub fn class(&self, id: usize) -> Arc<AmalgamatedClass> {
        self.state.lock().unwrap().classes[id].clone()
    }

    pub fn num_classes(&self) -> usize {
        self.state.lock().unwrap().classes.len()
    }

    pub fn classes(&self) -> Vec<Arc<AmalgamatedClass>> {
        self.state.lock().unwrap().classes.clone()
    }

    pub fn name(&self, id: usize) -> String {
        self.class(id).name.clone()
    }

    pub fn weyl_order(&self, id: usize) -> usize {
        self.class(id).weyl_order
    }

    // ----- interning -------------------------------------------------------

    fn finite_signature(&self, s: &Subgroup) -> Signature {
        let mut c: BTreeMap<(bool, usize, usize), usize> = BTreeMap::new();
        for &x in &s.elements {
            let (j, r, g) = self.u.decode(x);
            let ro = if r { 0 } else { self.u.rotation_order(j) };
            *c.entry((r, ro, self.gp.ext_table.class_of(g))).or_insert(0) += 1;
        }
        Signature {
            kind: ClassKind::Finite,
            order: s.order(),
            counts: c.into_iter().map(|((a, b, d), n)| (a, b, d, n)).collect(),
        }
    }

    fn continuous_signature(&self, s: &Subgroup) -> Signature {
        let mut c: BTreeMap<(bool, usize), usize> = BTreeMap::new();
        for &x in &s.elements {
            let (r, g) = self.q.decode(x);
            *c.entry((r, self.gp.ext_table.class_of(g))).or_insert(0) += 1;
        }
        Signature {
            kind: ClassKind::Continuous,
            order: s.order(),
            counts: c.into_iter().map(|((a, d), n)| (a, 0, d, n)).collect(),
        }
    }

    /// Interns a finite subgroup of `D_m × Γ'` (given inside `U`) that
    /// contains a reflection.
    pub fn intern_finite(&self, s: &Subgroup) -> usize {
        debug_assert!(self.has_reflection(s));
        self.intern(ClassKind::Finite, s)
    }

    /// Interns the preimage in `G` of a subgroup of `Q`.
    pub fn intern_continuous(&self, s: &Subgroup) -> usize {
        self.intern(ClassKind::Continuous, s)
    }

    fn intern(&self, kind: ClassKind, s: &Subgroup) -> usize {
        let key = (kind, s.bits.clone());
        if let Some(&id) = self.state.lock().unwrap().exact.get(&key) {
            return id;
        }
        let sig = match kind {
            ClassKind::Finite => self.finite_signature(s),
            ClassKind::Continuous => self.continuous_signature(s),
        };
        let candidates: Vec<Arc<AmalgamatedClass>> = {
            let st = self.state.lock().unwrap();
            st.by_sig
                .get(&sig)
                .map(|v| v.iter().map(|&i| st.classes[i].clone()).collect())
                .unwrap_or_default()
        };
        let gens = small_gens(s, |a, b| self.mul_kind(kind, a, b));
        for c in &candidates {
            if self.conjugate_into(kind, &gens, &c.sub) {
                self.state.lock().unwrap().exact.insert(key, c.id);
                return c.id;
            }
        }
        let weyl_order = self.raw_mark(kind, &gens, s.order(), kind, s);
        let goursat = match kind {
            ClassKind::Finite => self.goursat_finite(s),
            ClassKind::Continuous => self.goursat_continuous(s),
        };
        let base_name = render_name(&goursat);
        let mut st = self.state.lock().unwrap();
        if let Some(&id) = st.exact.get(&key) {
            return id;
        }
        // Another thread may have added a conjugate meanwhile.
        if let Some(v) = st.by_sig.get(&sig) {
            for &i in v {
                if !candidates.iter().any(|c| c.id == i) && self.conjugate_into(kind, &gens, &st.classes[i].sub) {
                    st.exact.insert(key, i);
                    return i;
                }
            }
        }
        let id = st.classes.len();
        let n = st.names.entry(base_name.clone()).or_insert(0);
        *n += 1;
        let name = if *n > 1 { format!("{}#{}", base_name, n) } else { base_name };
        st.classes.push(Arc::new(AmalgamatedClass {
            id,
            kind,
            sub: s.clone(),
            gens,
            weyl_order,
            name,
            goursat,
        }));
        st.by_sig.entry(sig).or_default().push(id);
        st.exact.insert(key, id);
        id
    }

    fn mul_kind(&self, kind: ClassKind, a: usize, b: usize) -> usize {
        match kind {
            ClassKind::Finite => self.u.mul(a, b),
            ClassKind::Continuous => self.q.mul(a, b),
        }
    }

    fn conjugate_into(&self, kind: ClassKind, gens: &[usize], target: &Subgroup) -> bool {
        match kind {
            ClassKind::Finite => (0..self.u.order()).any(|x| gens.iter().all(|&g| target.contains(self.u.conj(x, g)))),
            ClassKind::Continuous => {
                (0..self.q.order()).any(|x| gens.iter().all(|&g| target.contains(self.q.conj(x, g))))
            }
        }
    }

    pub fn has_reflection(&self, s: &Subgroup) -> bool {
        s.elements.iter().any(|&x| self.u.decode(x).1)
    }

    /// Image in `Q` of a finite subgroup of `U`.
    fn to_quotient(&self, x: usize) -> usize {
        let (_, r, g) = self.u.decode(x);
        self.q.encode(r, g)
    }

    // ----- marks -----------------------------------------------------------

    /// `|(G/H)^L|` computed from generators of `L`.
    fn raw_mark(&self, lk: ClassKind, lgens: &[usize], lorder: usize, hk: ClassKind, h: &Subgroup) -> usize {
        match (lk, hk) {
            (ClassKind::Finite, ClassKind::Finite) => {
                if !h.order().is_multiple_of(lorder) {
                    return 0;
                }
                let cnt = (0..self.u.order())
                    .filter(|&x| {
                        let xi = self.u.inv(x);
                        lgens.iter().all(|&g| h.contains(self.u.conj(xi, g)))
                    })
                    .count();
                cnt / h.order()
            }
            (ClassKind::Continuous, ClassKind::Finite) => 0,
            (lk, ClassKind::Continuous) => {
                let qgens: Vec<usize> = match lk {
                    ClassKind::Finite => lgens.iter().map(|&g| self.to_quotient(g)).collect(),
                    ClassKind::Continuous => lgens.to_vec(),
                };
                let cnt = (0..self.q.order())
                    .filter(|&x| {
                        let xi = self.q.inv(x);
                        qgens.iter().all(|&g| h.contains(self.q.conj(xi, g)))
                    })
                    .count();
                cnt / h.order()
            }
        }
    }

    /// Number of points of `G/H` fixed by `L`.
    pub fn mark(&self, l: usize, h: usize) -> usize {
        if let Some(&m) = self.state.lock().unwrap().marks.get(&(l, h)) {
            return m;
        }
        let (cl, ch) = (self.class(l), self.class(h));
        let m = if l == h {
            cl.weyl_order
        } else {
            self.raw_mark(cl.kind, &cl.gens, cl.order(), ch.kind, &ch.sub)
        };
        self.state.lock().unwrap().marks.insert((l, h), m);
        m
    }

    /// Number of subgroups of class `H` containing a fixed `L`.
    pub fn n_count(&self, l: usize, h: usize) -> usize {
        self.mark(l, h) / self.weyl_order(h)
    }

    /// `(L) ≤ (H)`.
    pub fn subconjugate(&self, l: usize, h: usize) -> bool {
        self.mark(l, h) > 0
    }

    // ----- products --------------------------------------------------------

    fn compute_product(&self, h: usize, k: usize) -> BTreeMap<usize, i64> {
        let (ch, ck) = (self.class(h), self.class(k));
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        match (ch.kind, ck.kind) {
            (ClassKind::Finite, ClassKind::Finite) => {
                let mut seen = BitSet::new(self.u.order());
                for g in 0..self.u.order() {
                    if seen.contains(g) {
                        continue;
                    }
                    double_coset(&self.u, g, &ch.gens, &ck.gens, &mut seen);
                    let elems: Vec<usize> = ck
                        .sub
                        .elements
                        .iter()
                        .map(|&y| self.u.conj(g, y))
                        .filter(|&y| ch.sub.contains(y))
                        .collect();
                    let l = Subgroup::from_elements(&self.u, elems);
                    if self.has_reflection(&l) {
                        *out.entry(self.intern_finite(&l)).or_insert(0) += 1;
                    }
                }
            }
            (ClassKind::Continuous, ClassKind::Continuous) => {
                let mut seen = BitSet::new(self.q.order());
                for g in 0..self.q.order() {
                    if seen.contains(g) {
                        continue;
                    }
                    double_coset(&self.q, g, &ch.gens, &ck.gens, &mut seen);
                    let elems: Vec<usize> = ck
                        .sub
                        .elements
                        .iter()
                        .map(|&y| self.q.conj(g, y))
                        .filter(|&y| ch.sub.contains(y))
                        .collect();
                    let l = Subgroup::from_elements(&self.q, elems);
                    *out.entry(self.intern_continuous(&l)).or_insert(0) += 1;
                }
            }
            _ => {
                let (cf, cc) = if ch.is_finite() { (&ch, &ck) } else { (&ck, &ch) };
                let fbar: Vec<usize> = cf.gens.iter().map(|&x| self.to_quotient(x)).collect();
                let mut seen = BitSet::new(self.q.order());
                for g in 0..self.q.order() {
                    if seen.contains(g) {
                        continue;
                    }
                    double_coset(&self.q, g, &fbar, &cc.gens, &mut seen);
                    let elems: Vec<usize> = cf
                        .sub
                        .elements
                        .iter()
                        .copied()
                        .filter(|&x| {
                            let xb = self.to_quotient(x);
                            cc.sub.contains(self.q.conj(self.q.inv(g), xb))
                        })
                        .collect();
                    let l = Subgroup::from_elements(&self.u, elems);
                    if self.has_reflection(&l) {
                        *out.entry(self.intern_finite(&l)).or_insert(0) += 1;
                    }
                }
            }
        }
        out
    }

    // ----- folding ---------------------------------------------------------

    /// `φ_p^{-1}` applied to a class: the preimage under `θ ↦ pθ` on `O(2)`.
    pub fn fold(&self, id: usize, p: usize) -> Result<usize> {
        if p == 1 {
            return Ok(id);
        }
        let c = self.class(id);
        if !c.is_finite() {
            return Ok(id);
        }
        let res = self.u.res;
        if p == 0 || !res.is_multiple_of(p) {
            return Err(EqError::Config(format!("fold index {} not supported by registry", p)));
        }
        let mut elems = Vec::with_capacity(c.order() * p);
        for &x in &c.sub.elements {
            let (j, r, g) = self.u.decode(x);
            if j % p != 0 {
                return Err(EqError::Config(format!("class {} cannot be folded by {}", c.name, p)));
            }
            for i in 0..p {
                elems.push(self.u.encode(j / p + i * (res / p), r, g));
            }
        }
        let s = Subgroup::from_elements(&self.u, elems);
        if s.order() != c.order() * p {
            return Err(EqError::Internal("fold produced a non-subgroup".into()));
        }
        Ok(self.intern_finite(&s))
    }

    /// Applies `fold(·, p)` to every term of a Burnside element.
    pub fn fold_element(&self, a: &BurnsideElement, p: usize) -> Result<BurnsideElement> {
        let mut out = BurnsideElement::zero(self.ring);
        for (h, c) in a.terms() {
            out.add_term(self.fold(h, p)?, c);
        }
        Ok(out)
    }

    // ----- fixed-point dimensions ------------------------------------------

    /// Exact `dim 𝒱_{k,l}^H` from character averaging.
    pub fn fixed_dim(&self, id: usize, k: usize, l: usize) -> usize {
        if let Some(&d) = self.state.lock().unwrap().fixed.get(&(id, k, l)) {
            return d;
        }
        let c = self.class(id);
        let row = self.gp.minus_row(l);
        let table = &self.gp.ext_table;
        let mut counts: BTreeMap<(usize, usize), i128> = BTreeMap::new();
        match c.kind {
            ClassKind::Finite => {
                for &x in &c.sub.elements {
                    let (j, r, g) = self.u.decode(x);
                    if k > 0 && r {
                        continue;
                    }
                    *counts.entry(((j * k) % self.u.res, table.class_of(g))).or_insert(0) += 1;
                }
            }
            ClassKind::Continuous => {
                if k == 0 {
                    for &x in &c.sub.elements {
                        let (_, g) = self.q.decode(x);
                        *counts.entry((0, table.class_of(g))).or_insert(0) += 1;
                    }
                }
            }
        }
        let mut total = Cyclotomic::zero();
        for ((jk, cls), n) in counts {
            let rot = if k == 0 {
                Cyclotomic::one()
            } else {
                Cyclotomic::two_cos(self.u.res as u32, jk as i64)
            };
            total = total + (&rot * &table.rows[row][cls]).scale(Rational::from_integer(n));
        }
        let d = total
            .scale(Rational::new(1, c.order() as i128))
            .to_integer()
            .expect("fixed dimension is an integer") as usize;
        self.state.lock().unwrap().fixed.insert((id, k, l), d);
        d
    }

    /// `dim 𝒱_{k,l}`.
    pub fn irrep_dim(&self, k: usize, l: usize) -> usize {
        self.gp.irrep_dim(l) * if k == 0 { 1 } else { 2 }
    }

    /// Character of `𝒱_{k,l}` on every element of `U` (as floats).
    pub fn weights(&self, k: usize, l: usize) -> Vec<f64> {
        let row = self.gp.minus_row(l);
        (0..self.u.order())
            .map(|x| {
                let (j, r, g) = self.u.decode(x);
                let chi = self.chi_f64[row][g];
                if k == 0 {
                    chi
                } else if r {
                    0.0
                } else {
                    2.0 * (2.0 * std::f64::consts::PI * (j * k) as f64 / self.u.res as f64).cos() * chi
                }
            })
            .collect()
    }

    // ----- orbit types -----------------------------------------------------

    /// Orbit types in `Φ₀` of `𝒱_{k,l}`; for `k ≥ 1` obtained by folding
    /// the mode-one lattice.
    pub fn orbit_types(&self, k: usize, l: usize) -> Result<Arc<OrbitTypes>> {
        if let Some(o) = self.state.lock().unwrap().orbits.get(&(k, l)) {
            return Ok(o.clone());
        }
        let o = match k {
            0 => self.orbit_types_zero(l),
            1 => self.orbit_types_direct(1, l)?,
            _ => {
                let base = self.orbit_types(1, l)?;
                let classes = base
                    .classes
                    .iter()
                    .map(|&c| self.fold(c, k))
                    .collect::<Result<Vec<_>>>()?;
                let maximal = base
                    .maximal
                    .iter()
                    .map(|&c| self.fold(c, k))
                    .collect::<Result<Vec<_>>>()?;
                OrbitTypes {
                    k,
                    l,
                    fixed_dims: base.fixed_dims.clone(),
                    classes,
                    maximal,
                }
            }
        };
        let o = Arc::new(o);
        self.state.lock().unwrap().orbits.insert((k, l), o.clone());
        Ok(o)
    }

    /// Orbit types of `𝒱_{k,l}`, `k ≥ 1`, by enumerating subgroups of
    /// `D_{kE} × Γ'` directly.
    pub fn orbit_types_direct(&self, k: usize, l: usize) -> Result<OrbitTypes> {
        if k == 0 {
            return Ok(self.orbit_types_zero(l));
        }
        let ke = k * self.gp.exponent;
        if !self.m.is_multiple_of(ke) {
            return Err(EqError::Config(format!("mode {} not supported by registry", k)));
        }
        let step = self.u.res / ke;
        let domain: Vec<usize> = (0..self.u.order()).filter(|&x| self.u.decode(x).0.is_multiple_of(step)).collect();
        let w = self.weights(k, l);
        let iso = isotropy_subgroups(&self.u, &domain, &w);
        let mut classes: Vec<usize> = iso
            .iter()
            .filter(|s| self.has_reflection(s))
            .map(|s| self.intern_finite(s))
            .collect();
        classes.sort_unstable();
        classes.dedup();
        Ok(self.finish_orbit_types(k, l, classes))
    }

    fn orbit_types_zero(&self, l: usize) -> OrbitTypes {
        let ext = &self.gp.ext;
        let row = self.gp.minus_row(l);
        let w: Vec<f64> = (0..ext.order()).map(|g| self.chi_f64[row][g]).collect();
        let domain: Vec<usize> = (0..ext.order()).collect();
        let iso = isotropy_subgroups(ext, &domain, &w);
        let mut classes: Vec<usize> = iso
            .iter()
            .map(|s| {
                let elems = s
                    .elements
                    .iter()
                    .flat_map(|&g| [self.q.encode(false, g), self.q.encode(true, g)]);
                self.intern_continuous(&Subgroup::from_elements(&self.q, elems))
            })
            .collect();
        classes.sort_unstable();
        classes.dedup();
        self.finish_orbit_types(0, l, classes)
    }

    fn finish_orbit_types(&self, k: usize, l: usize, classes: Vec<usize>) -> OrbitTypes {
        let fixed_dims = classes.iter().map(|&c| self.fixed_dim(c, k, l)).collect();
        let maximal = classes
            .iter()
            .copied()
            .filter(|&h| h != self.top())
            .filter(|&h| {
                !classes
                    .iter()
                    .any(|&h2| h2 != h && h2 != self.top() && self.subconjugate(h, h2))
            })
            .collect();
        OrbitTypes {
            k,
            l,
            classes,
            fixed_dims,
            maximal,
        }
    }

    // ----- Goursat data ----------------------------------------------------

    fn o2_name(&self, rots: usize, refl: bool) -> String {
        format!("{}{}", if refl { "D" } else { "Z" }, rots)
    }

    fn o2_elem_name(&self, j: usize, r: bool) -> String {
        let g = num_integer::gcd(j, self.u.res);
        let (a, b) = (j / g, self.u.res / g);
        let rot = if j == 0 { String::from("1") } else { format!("ρ({}/{})", a, b) };
        match (j == 0, r) {
            (_, false) => rot,
            (true, true) => "κ".into(),
            (false, true) => format!("{}κ", rot),
        }
    }

    fn goursat_finite(&self, s: &Subgroup) -> Goursat {
        let mut h: HashSet<(usize, bool)> = HashSet::new();
        let mut z: HashSet<(usize, bool)> = HashSet::new();
        let mut kset = Vec::new();
        let mut rset = Vec::new();
        for &x in &s.elements {
            let (j, r, g) = self.u.decode(x);
            h.insert((j, r));
            kset.push(g);
            if g == 0 {
                z.insert((j, r));
            }
            if j == 0 && !r {
                rset.push(g);
            }
        }
        let hrot = h.iter().filter(|e| !e.1).count();
        let hrefl = h.len() > hrot;
        let zrot = z.iter().filter(|e| !e.1).count();
        let zrefl = z.len() > zrot;
        let ksub = Subgroup::from_elements(&self.gp.ext, kset);
        let rsub = Subgroup::from_elements(&self.gp.ext, rset);
        let l_order = h.len() / z.len();
        let l = if hrefl && !zrefl && hrot / zrot >= 2 {
            format!("D{}", hrot / zrot)
        } else {
            format!("Z{}", l_order)
        };
        // One element of S over each coset of Z in H.
        let mut pairing = Vec::new();
        let mut covered: HashSet<(usize, bool)> = HashSet::new();
        let mut elems: Vec<usize> = s.elements.clone();
        elems.sort_by_key(|&x| {
            let (j, r, g) = self.u.decode(x);
            (r, j, g)
        });
        for x in elems {
            let (j, r, g) = self.u.decode(x);
            if covered.contains(&(j, r)) {
                continue;
            }
            for &(zj, zr) in &z {
                // (j,r)·(zj,zr)
                let jj = if r { (j + self.u.res - zj) % self.u.res } else { (j + zj) % self.u.res };
                covered.insert((jj, r ^ zr));
            }
            pairing.push((self.o2_elem_name(j, r), format!("{}", self.gp.ext.element(g))));
        }
        Goursat {
            h: self.o2_name(hrot, hrefl),
            z: self.o2_name(zrot, zrefl),
            l,
            r: self.gp.ext_name(&rsub),
            k: self.gp.ext_name(&ksub),
            h_order: h.len(),
            z_order: z.len(),
            l_order,
            r_order: rsub.order(),
            k_order: ksub.order(),
            pairing,
        }
    }

    fn goursat_continuous(&self, s: &Subgroup) -> Goursat {
        let hrefl = s.elements.iter().any(|&x| self.q.decode(x).0);
        let zrefl = s.contains(self.q.encode(true, 0));
        let kset: Vec<usize> = s.elements.iter().map(|&x| self.q.decode(x).1).collect();
        let rset: Vec<usize> = s
            .elements
            .iter()
            .filter(|&&x| !self.q.decode(x).0)
            .map(|&x| self.q.decode(x).1)
            .collect();
        let ksub = Subgroup::from_elements(&self.gp.ext, kset);
        let rsub = Subgroup::from_elements(&self.gp.ext, rset);
        let o2 = |refl: bool| if refl { "O(2)".to_string() } else { "SO(2)".to_string() };
        let l_order = if hrefl && !zrefl { 2 } else { 1 };
        let pairing = if l_order == 2 {
            let g = s
                .elements
                .iter()
                .map(|&x| self.q.decode(x))
                .find(|e| e.0)
                .map(|e| e.1)
                .unwrap_or(0);
            vec![
                ("1".into(), "()".into()),
                ("κ".into(), format!("{}", self.gp.ext.element(g))),
            ]
        } else {
            vec![]
        };
        Goursat {
            h: o2(hrefl),
            z: o2(zrefl),
            l: format!("Z{}", l_order),
            r: self.gp.ext_name(&rsub),
            k: self.gp.ext_name(&ksub),
            h_order: 0,
            z_order: 0,
            l_order,
            r_order: rsub.order(),
            k_order: ksub.order(),
            pairing,
        }
    }

    pub fn class_json(&self, id: usize) -> serde_json::Value {
        let c = self.class(id);
        serde_json::json!({
            "id": id,
            "name": c.name,
            "kind": c.kind,
            "order": if c.is_finite() { Some(c.order()) } else { None },
            "weyl_order": c.weyl_order,
            "goursat": c.goursat,
        })
    }
}

fn render_name(g: &Goursat) -> String {
    if g.l_order == 1 {
        format!("{}×{}", g.h, g.k)
    } else {
        format!("{}^{{{}}}×_{{{}}}^{{{}}}{}", g.h, g.z, g.l, g.r, g.k)
    }
}

impl BurnsideRing for O2Gamma {
    fn ring_id(&self) -> u64 {
        self.ring
    }

    fn unit_class(&self) -> usize {
        self.top()
    }

    fn mul_classes(&self, h: usize, k: usize) -> BTreeMap<usize, i64> {
        let key = if h <= k { (h, k) } else { (k, h) };
        if let Some(p) = self.state.lock().unwrap().products.get(&key) {
            return (**p).clone();
        }
        let p = if h == self.top() {
            BTreeMap::from([(k, 1)])
        } else if k == self.top() {
            BTreeMap::from([(h, 1)])
        } else {
            self.compute_product(key.0, key.1)
        };
        self.state.lock().unwrap().products.insert(key, Arc::new(p.clone()));
        p
    }

    fn class_name(&self, h: usize) -> String {
        self.name(h)
    }

    fn display_rank(&self, h: usize) -> i64 {
        let c = self.class(h);
        match c.kind {
            ClassKind::Continuous => (1i64 << 40) + c.order() as i64,
            ClassKind::Finite => c.order() as i64,
        }
    }
}

/// Marks the double coset `⟨hgens⟩ g ⟨kgens⟩` in `seen`.
fn double_coset<G: FiniteGroup>(grp: &G, g: usize, hgens: &[usize], kgens: &[usize], seen: &mut BitSet) {
    let mut queue = VecDeque::from([g]);
    seen.insert(g);
    while let Some(x) = queue.pop_front() {
        for &h in hgens {
            let y = grp.mul(h, x);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
        for &k in kgens {
            let y = grp.mul(x, k);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
}

/// Greedy small generating set of a subgroup given by its elements.
fn small_gens(s: &Subgroup, mul: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let cap = s.bits.clone();
    let mut have: HashSet<usize> = HashSet::from([s.elements[0]]);
    let mut gens = Vec::new();
    // Elements sorted by decreasing order tend to give short lists.
    for &x in s.elements.iter().rev() {
        if have.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut list: Vec<usize> = have.iter().copied().collect();
        let mut i = 0;
        while i < list.len() {
            let e = list[i];
            i += 1;
            for &g in &gens {
                let p = mul(e, g);
                debug_assert!(cap.contains(p));
                if have.insert(p) {
                    list.push(p);
                }
            }
        }
        if have.len() == s.order() {
            break;
        }
    }
    gens
}

/// Subgroups `S` of the subgroup generated by `domain` with
/// `V^S ≠ 0` that are isotropy groups, i.e. no overgroup has the same
/// fixed-point dimension. `weights` is the character on every element.
pub fn isotropy_subgroups<G: FiniteGroup>(grp: &G, domain: &[usize], weights: &[f64]) -> Vec<Subgroup> {
    let dim = |s: &Subgroup| -> usize {
        let t: f64 = s.elements.iter().map(|&x| weights[x]).sum();
        let d = t / s.order() as f64;
        debug_assert!((d - d.round()).abs() < 1e-6, "non-integral fixed dimension {}", d);
        d.round().max(0.0) as usize
    };
    let mut cyc = Vec::new();
    let mut seen_cyc: HashSet<BitSet> = HashSet::new();
    for &x in domain {
        let c = Subgroup::generated(grp, &[x]);
        if seen_cyc.insert(c.bits) {
            cyc.push(x);
        }
    }
    let triv = Subgroup::trivial(grp);
    let d0 = dim(&triv);
    if d0 == 0 {
        return vec![];
    }
    let mut dims: HashMap<BitSet, usize> = HashMap::from([(triv.bits.clone(), d0)]);
    let mut list: Vec<(Subgroup, usize, bool)> = vec![(triv, d0, true)];
    let mut head = 0;
    while head < list.len() {
        let (s, ds) = (list[head].0.clone(), list[head].1);
        let mut iso = true;
        for &x in &cyc {
            if s.contains(x) {
                continue;
            }
            let t = s.extend(grp, &[x]);
            let dt = match dims.get(&t.bits) {
                Some(&d) => d,
                None => {
                    let d = dim(&t);
                    dims.insert(t.bits.clone(), d);
                    if d > 0 {
                        list.push((t, d, true));
                    }
                    d
                }
            };
            if dt == ds {
                iso = false;
            }
        }
        list[head].2 = iso;
        head += 1;
    }
    list.into_iter().filter(|e| e.2).map(|e| e.0).collect()
}

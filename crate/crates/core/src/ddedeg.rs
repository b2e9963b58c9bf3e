//! Spectral data of the linearized delay system and the degree analysis
//! built on it: coupling coefficients, the eigenvalues `ξ_{k,l}`, sign and
//! multiplicity tables, survival parities, `ω` and the existence conclusions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basicdeg::{degree_product, x_o, Factor};
use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::chartab::{CharacterTable, IsotypicDecomposition};
use crate::cyclotomic::{parse_rational, Cyclotomic, Rational};
use crate::error::{EqError, Result};
use crate::o2gamma::{Fingerprint, O2Gamma};
use crate::permgroup::{FiniteGroup, Group};

/// Square matrix of exact rationals, row-major.
pub type Matrix = Vec<Vec<Rational>>;

/// `μ_j^l` for `j = 0..m` and every Γ-irreducible `l`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearizationData {
    pub m: usize,
    /// Indexed `[l][j]`.
    #[serde(serialize_with = "ser_mu")]
    pub mu: Vec<Vec<Rational>>,
}

fn ser_mu<S: serde::Serializer>(mu: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = mu.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
    v.serialize(s)
}

impl LinearizationData {
    pub fn new(m: usize, mu: Vec<Vec<Rational>>) -> Result<Self> {
        if m == 0 {
            return Err(EqError::Config("m must be positive".into()));
        }
        if let Some(l) = mu.iter().position(|r| r.len() != m) {
            return Err(EqError::Config(format!("mu row {} has wrong length", l + 1)));
        }
        let d = LinearizationData { m, mu };
        d.check_reversible()?;
        Ok(d)
    }

    /// Reversibility: `μ_j = μ_{m-j}`.
    pub fn check_reversible(&self) -> Result<()> {
        for (l, row) in self.mu.iter().enumerate() {
            for j in 1..self.m {
                if row[j] != row[self.m - j] {
                    return Err(EqError::SymmetryViolation((l + 1).to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> Rational {
        self.mu
            .iter()
            .flatten()
            .map(|q| if *q < Rational::from_integer(0) { -q } else { *q })
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }

    /// Smallest `k ≥ m` with `k² > m·max|μ| + 1`; no block beyond it can be negative.
    pub fn default_kmax(&self) -> usize {
        let bound = self.max_abs() * Rational::from_integer(self.m as i128) + Rational::from_integer(1);
        let mut k = 0usize;
        while Rational::from_integer((k * k) as i128) <= bound {
            k += 1;
        }
        k.max(self.m)
    }
}

/// `c_k = Σ_j γ^{jk} μ_j` with `γ = e^{2πi/m}`, exact.
pub fn coupling_coefficient(mu_row: &[Rational], k: usize) -> Result<Cyclotomic> {
    let m = mu_row.len();
    for j in 1..m {
        if mu_row[j] != mu_row[m - j] {
            return Err(EqError::SymmetryViolation("?".into()));
        }
    }
    let c: Cyclotomic = mu_row
        .iter()
        .enumerate()
        .map(|(j, q)| Cyclotomic::root_of_unity(m as u32, (j * k) as i64).scale(*q))
        .sum();
    if !c.is_real() {
        return Err(EqError::Internal("coupling coefficient not real".into()));
    }
    Ok(c)
}

/// `ξ_{k} = 1 + (c_k - 1)/(1 + k²)`.
pub fn xi(c: &Cyclotomic, k: usize) -> Cyclotomic {
    let one = Cyclotomic::one();
    &one + &(c - &one).scale(Rational::new(1, 1 + (k * k) as i128))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Cyclotomic) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.to_f64() < 0.0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Signs of `ξ_{k,l}` and multiplicities `m_{k,l}` for `k = 0..=k_max` and
/// the irreducibles present in `V`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralTable {
    pub m: usize,
    pub k_max: usize,
    /// Irreducibles with `m^l > 0`, in table order.
    pub irreps: Vec<usize>,
    /// `m^l` for every irreducible.
    pub mult: Vec<usize>,
    /// `c_k^l` for `k = 0..m`, indexed `[l][k]` (all irreducibles).
    pub c: Vec<Vec<f64>>,
    /// `ξ_{k,l}` indexed `[k][l]` (all irreducibles).
    pub xi: Vec<Vec<f64>>,
    #[serde(skip)]
    pub xi_exact: Vec<Vec<Cyclotomic>>,
    pub signs: Vec<Vec<Sign>>,
    /// `m_{k,l}` indexed `[k][l]`.
    pub m_kl: Vec<Vec<usize>>,
    /// Modes `k` with `ξ_{k,l} = 0` for a present `l`.
    pub resonant: Vec<usize>,
}

impl SpectralTable {
    pub fn negative_blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..=self.k_max {
            for &l in &self.irreps {
                if self.m_kl[k][l] > 0 {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// Factors of the degree product, in canonical order.
    pub fn factors(&self) -> Vec<Factor> {
        self.negative_blocks()
            .into_iter()
            .map(|(k, l)| Factor {
                k,
                l,
                mult: self.m_kl[k][l],
            })
            .collect()
    }

    /// Largest mode carrying a negative block.
    pub fn max_negative_mode(&self) -> usize {
        self.negative_blocks().iter().map(|b| b.0).max().unwrap_or(0)
    }

    pub fn is_degenerate(&self) -> bool {
        !self.resonant.is_empty()
    }
}

/// `m^l = dim V_l / dim 𝒱_l`.
pub fn component_multiplicities(decomp: &IsotypicDecomposition) -> Vec<usize> {
    decomp.multiplicities.clone()
}

/// Builds the full sign and multiplicity grid.
pub fn sign_table(data: &LinearizationData, decomp: &IsotypicDecomposition, k_max: Option<usize>) -> Result<SpectralTable> {
    let nl = data.mu.len();
    if decomp.multiplicities.len() != nl {
        return Err(EqError::Config(format!(
            "mu has {} rows, representation has {} irreducibles",
            nl,
            decomp.multiplicities.len()
        )));
    }
    let k_max = k_max.unwrap_or_else(|| data.default_kmax());
    let mult = component_multiplicities(decomp);
    let irreps: Vec<usize> = (0..nl).filter(|&l| mult[l] > 0).collect();
    let mut c_exact = Vec::with_capacity(nl);
    for (l, row) in data.mu.iter().enumerate() {
        let cl = (0..data.m)
            .map(|k| coupling_coefficient(row, k))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                EqError::SymmetryViolation(_) => EqError::SymmetryViolation((l + 1).to_string()),
                e => e,
            })?;
        c_exact.push(cl);
    }
    let mut xi_exact = Vec::with_capacity(k_max + 1);
    let mut signs = Vec::with_capacity(k_max + 1);
    let mut m_kl = Vec::with_capacity(k_max + 1);
    let mut resonant = Vec::new();
    for k in 0..=k_max {
        let row: Vec<Cyclotomic> = (0..nl).map(|l| xi(&c_exact[l][k % data.m], k)).collect();
        let s: Vec<Sign> = row.iter().map(Sign::of).collect();
        if irreps.iter().any(|&l| s[l] == Sign::Zero) {
            resonant.push(k);
        }
        m_kl.push((0..nl).map(|l| if s[l] == Sign::Neg { mult[l] } else { 0 }).collect());
        signs.push(s);
        xi_exact.push(row);
    }
    Ok(SpectralTable {
        m: data.m,
        k_max,
        irreps,
        mult,
        c: c_exact.iter().map(|r| r.iter().map(|c| c.to_f64()).collect()).collect(),
        xi: xi_exact.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect(),
        xi_exact,
        signs,
        m_kl,
        resonant,
    })
}

/// `𝔫^{H}_k = Σ_l 𝔩^{H}_{k,l} m_{k,l}` with `𝔩 = 1` iff `dim 𝒱_{k,l}^H` is odd.
pub fn survival_parity(reg: &O2Gamma, h: usize, k: usize, table: &SpectralTable) -> usize {
    if k > table.k_max {
        return 0;
    }
    table
        .irreps
        .iter()
        .filter(|&&l| table.m_kl[k][l] > 0 && reg.fixed_dim(h, k, l) % 2 == 1)
        .map(|&l| table.m_kl[k][l])
        .sum()
}

/// One guaranteed symmetry class.
#[derive(Clone, Debug, Serialize)]
pub struct Conclusion {
    pub class: usize,
    pub name: String,
    /// Mode at which the class is of maximal kind.
    pub k: usize,
    /// Irreducibles in which it is maximal at that mode.
    pub irreps: Vec<usize>,
    pub fold_index: usize,
    /// Coefficient in `ω`, when `ω` was computed.
    pub coefficient: Option<i64>,
    pub x_o: i64,
    pub parity: usize,
    /// `coefficient = ±x_o` whenever the parity is odd.
    pub parity_consistent: bool,
    pub fingerprint: Fingerprint,
    pub guarantee: String,
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub factors: Vec<Factor>,
    pub degree: BurnsideElement,
    pub omega: BurnsideElement,
    pub conclusions: Vec<Conclusion>,
    pub zero_spectrum: bool,
}

/// Maximal orbit types of every negative block with `k ≥ 1`, keyed by
/// `(k, class)` and listing the irreducibles where they occur.
pub fn maximal_kinds(reg: &O2Gamma, table: &SpectralTable, modes: &[usize]) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
    let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &k in modes {
        if k == 0 || k > table.k_max {
            continue;
        }
        for &l in &table.irreps {
            if table.m_kl[k][l] == 0 {
                continue;
            }
            for &h in &reg.orbit_types(k, l)?.maximal {
                out.entry((k, h)).or_default().push(l);
            }
        }
    }
    Ok(out)
}

fn guarantee_text(name: &str, p: usize) -> String {
    if p == 1 {
        format!("non-constant 2π-periodic solution with extended orbit type ({})", name)
    } else {
        format!(
            "non-constant 2π-periodic solution with extended orbit type ({}), {}-folded",
            name, p
        )
    }
}

/// `ω = (G) - G-deg(𝒜, B(ℰ))` with the maximal-kind classes whose
/// coefficient survives.
pub fn assemble_omega(reg: &O2Gamma, table: &SpectralTable) -> Result<DegreeReport> {
    if table.is_degenerate() {
        return Err(EqError::Degenerate(table.resonant.iter().map(|&k| k as u32).collect()));
    }
    let factors = table.factors();
    let degree = degree_product(reg, &factors)?;
    let omega = reg.unit().sub(&degree)?;
    let modes: Vec<usize> = (1..=table.k_max).collect();
    let mut conclusions = Vec::new();
    for ((k, h), ls) in maximal_kinds(reg, table, &modes)? {
        let coeff = omega.coeff(h);
        let parity = survival_parity(reg, h, k, table);
        let xo = x_o(reg, k, ls[0], h)?;
        let consistent = parity.is_multiple_of(2) || coeff.abs() == xo;
        if coeff != 0 {
            let c = reg.class(h);
            conclusions.push(Conclusion {
                class: h,
                name: c.name.clone(),
                k,
                irreps: ls,
                fold_index: k,
                coefficient: Some(coeff),
                x_o: xo,
                parity,
                parity_consistent: consistent,
                fingerprint: c.fingerprint(),
                guarantee: guarantee_text(&c.name, k),
            });
        } else if !consistent {
            return Err(EqError::Internal(format!(
                "odd parity but zero coefficient at {}",
                reg.name(h)
            )));
        }
    }
    Ok(DegreeReport {
        factors,
        degree,
        omega,
        conclusions,
        zero_spectrum: false,
    })
}

/// Conclusions licensed by odd parity alone.
pub fn parity_backed_conclusions(report: &DegreeReport) -> Vec<Conclusion> {
    report.conclusions.iter().filter(|c| c.parity % 2 == 1).cloned().collect()
}

/// Degenerate case: parities at the odd multiples `(2i-1)s` only, valid
/// when none of them is resonant.
pub fn resonant_conclusions(reg: &O2Gamma, table: &SpectralTable, s: usize) -> Result<Vec<Conclusion>> {
    if s == 0 {
        return Err(EqError::Config("s must be positive".into()));
    }
    for &k in &table.resonant {
        if k > 0 && k % s == 0 && (k / s) % 2 == 1 {
            return Err(EqError::ResonantS {
                s: s as u32,
                k: k as u32,
                odd: (k / s) as u32,
            });
        }
    }
    let modes: Vec<usize> = (1..=table.k_max).filter(|k| k % s == 0 && (k / s) % 2 == 1).collect();
    let mut out = Vec::new();
    for ((k, h), ls) in maximal_kinds(reg, table, &modes)? {
        let parity = survival_parity(reg, h, k, table);
        if parity % 2 == 1 {
            let c = reg.class(h);
            out.push(Conclusion {
                class: h,
                name: c.name.clone(),
                k,
                irreps: ls.clone(),
                fold_index: k,
                coefficient: None,
                x_o: x_o(reg, k, ls[0], h)?,
                parity,
                parity_consistent: true,
                fingerprint: c.fingerprint(),
                guarantee: guarantee_text(&c.name, k),
            });
        }
    }
    Ok(out)
}

/// Modes needed to fold orbit types for a table: the negative blocks and,
/// for the degenerate path, the odd multiples of `s`.
pub fn required_modes(table: &SpectralTable, s: Option<usize>) -> Vec<usize> {
    let mut modes: Vec<usize> = table.negative_blocks().into_iter().map(|b| b.0).filter(|&k| k > 0).collect();
    if let Some(s) = s.filter(|&s| s > 0) {
        modes.extend((1..=table.k_max).filter(|k| k % s == 0 && (k / s) % 2 == 1));
    }
    modes.sort_unstable();
    modes.dedup();
    modes
}

// ----- a-priori sign sampling ----------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct A3Report {
    pub samples: usize,
    pub radius: f64,
    pub min_value: f64,
    pub negative_samples: usize,
    pub all_positive: bool,
    pub note: &'static str,
}

/// Samples `x•f(x, y)` on `R ≤ |x|∞ ≤ 2R`, `|y^j|∞ ≤ |x|∞`. Heuristic only.
pub fn check_a3<F>(f: F, n: usize, m: usize, samples: usize, radius: f64, seed: u64) -> A3Report
where
    F: Fn(&[f64], &[Vec<f64>]) -> Vec<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut negative = 0;
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = x.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let target = rng.random_range(radius..=2.0 * radius);
        x.iter_mut().for_each(|v| *v *= target / norm);
        let y: Vec<Vec<f64>> = (1..m)
            .map(|_| (0..n).map(|_| rng.random_range(-target..=target)).collect())
            .collect();
        let fx = f(&x, &y);
        let dot: f64 = x.iter().zip(&fx).map(|(a, b)| a * b).sum();
        if dot <= 0.0 {
            negative += 1;
        }
        min_value = min_value.min(dot);
    }
    A3Report {
        samples,
        radius,
        min_value,
        negative_samples: negative,
        all_positive: negative == 0,
        note: "numerical sampling, not a proof",
    }
}

// ----- μ from matrices -------------------------------------------------------

/// Matrices of a representation of `group`, one per element.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub dim: usize,
    pub mats: Vec<Matrix>,
}

fn zero(n: usize) -> Matrix {
    vec![vec![Rational::from_integer(0); n]; n]
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == Rational::from_integer(0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

impl MatrixRep {
    /// The coordinate permutation action `e_i ↦ e_{g(i)}`.
    pub fn permutation(group: &Group) -> MatrixRep {
        let n = group.degree();
        let mats = group
            .elements()
            .iter()
            .map(|p| {
                let mut m = zero(n);
                for i in 0..n {
                    m[p.apply(i)][i] = Rational::from_integer(1);
                }
                m
            })
            .collect();
        MatrixRep { dim: n, mats }
    }

    /// Extends matrices given for the generators to all elements, checking
    /// that they respect the group relations.
    pub fn from_generators(group: &Group, gens: &[Matrix]) -> Result<MatrixRep> {
        let gi = group.generator_indices();
        if gens.len() != gi.len() {
            return Err(EqError::Config(format!(
                "{} generator matrices for {} generators",
                gens.len(),
                gi.len()
            )));
        }
        let n = gens.first().map(|g| g.len()).unwrap_or(0);
        if gens.iter().any(|g| g.len() != n || g.iter().any(|r| r.len() != n)) {
            return Err(EqError::Config("generator matrices must be square of equal size".into()));
        }
        let mut id = zero(n);
        (0..n).for_each(|i| id[i][i] = Rational::from_integer(1));
        let mut mats: Vec<Option<Matrix>> = vec![None; group.order()];
        mats[group.identity()] = Some(id);
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let mx = mats[x].clone().unwrap();
            for (s, &g) in gi.iter().enumerate() {
                // x then g acts as M_g M_x
                let y = group.mul(x, g);
                let my = mat_mul(&gens[s], &mx);
                match &mats[y] {
                    Some(prev) if *prev != my => {
                        return Err(EqError::Config("matrices do not define a representation".into()))
                    }
                    Some(_) => {}
                    None => {
                        mats[y] = Some(my);
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(MatrixRep {
            dim: n,
            mats: mats.into_iter().map(|m| m.unwrap()).collect(),
        })
    }

    /// Character of the representation, folded onto table classes.
    pub fn character(&self, table: &CharacterTable) -> Vec<Cyclotomic> {
        table
            .class_reps
            .iter()
            .map(|&x| Cyclotomic::from_rational((0..self.dim).map(|i| self.mats[x][i][i]).sum()))
            .collect()
    }
}

/// Scalar `μ` with `A P_l = μ P_l` for each isotypic projector `P_l`; zero
/// for irreducibles absent from the representation. Non-scalar blocks
/// violate (A₄′).
pub fn component_scalars(rep: &MatrixRep, table: &CharacterTable, a: &Matrix) -> Result<Vec<Rational>> {
    let n = rep.dim;
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(EqError::Config(format!("matrix must be {}x{}", n, n)));
    }
    let order = rep.mats.len();
    let mut out = Vec::with_capacity(table.rows.len());
    for l in 0..table.rows.len() {
        let exact: Option<Vec<Rational>> = (0..order).map(|g| table.value(l, g).to_rational()).collect();
        let mu = match exact {
            Some(chi) => scalar_exact(rep, &chi, table.dim(l), a, l)?,
            None => {
                let chi: Vec<f64> = (0..order).map(|g| table.value(l, g).to_f64()).collect();
                scalar_float(rep, &chi, table.dim(l), a, l)?
            }
        };
        out.push(mu);
    }
    Ok(out)
}

fn scalar_exact(rep: &MatrixRep, chi: &[Rational], dim: usize, a: &Matrix, l: usize) -> Result<Rational> {
    let n = rep.dim;
    let order = rep.mats.len();
    let mut p = zero(n);
    for (g, m) in rep.mats.iter().enumerate() {
        if chi[g] == Rational::from_integer(0) {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                p[i][j] += chi[g] * m[i][j];
            }
        }
    }
    let s = Rational::new(dim as i128, order as i128);
    p.iter_mut().flatten().for_each(|v| *v *= s);
    let tr: Rational = (0..n).map(|i| p[i][i]).sum();
    if tr == Rational::from_integer(0) {
        return Ok(Rational::from_integer(0));
    }
    let ap = mat_mul(a, &p);
    let mu = (0..n).map(|i| ap[i][i]).sum::<Rational>() / tr;
    for i in 0..n {
        for j in 0..n {
            if ap[i][j] != mu * p[i][j] {
                return Err(EqError::NotScalar(format!("matrix is not scalar on component {}", l + 1)));
            }
        }
    }
    Ok(mu)
}

fn scalar_float(rep: &MatrixRep, chi: &[f64], dim: usize, a: &Matrix, l: usize) -> Result<Rational> {
    let n = rep.dim;
    let order = rep.mats.len() as f64;
    let mut p = vec![vec![0.0f64; n]; n];
    for (g, m) in rep.mats.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                p[i][j] += chi[g] * num_traits::ToPrimitive::to_f64(&m[i][j]).unwrap_or(0.0);
            }
        }
    }
    p.iter_mut().flatten().for_each(|v| *v *= dim as f64 / order);
    let tr: f64 = (0..n).map(|i| p[i][i]).sum();
    if tr.abs() < 0.5 {
        return Ok(Rational::from_integer(0));
    }
    let af: Vec<Vec<f64>> = a
        .iter()
        .map(|r| r.iter().map(|q| num_traits::ToPrimitive::to_f64(q).unwrap_or(0.0)).collect())
        .collect();
    let mut ap = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                ap[i][j] += af[i][k] * p[k][j];
            }
        }
    }
    let mu = (0..n).map(|i| ap[i][i]).sum::<f64>() / tr;
    for i in 0..n {
        for j in 0..n {
            if (ap[i][j] - mu * p[i][j]).abs() > 1e-9 {
                return Err(EqError::NotScalar(format!("matrix is not scalar on component {}", l + 1)));
            }
        }
    }
    parse_rational(&format!("{:.12}", mu)).ok_or_else(|| EqError::Internal("non-finite mu".into()))
}

/// `μ_j^l` from the matrices `A_0, …, A_{m-1}`.
pub fn mu_from_matrices(rep: &MatrixRep, table: &CharacterTable, mats: &[Matrix]) -> Result<LinearizationData> {
    let per_j = mats
        .iter()
        .map(|a| component_scalars(rep, table, a))
        .collect::<Result<Vec<_>>>()?;
    let nl = table.rows.len();
    let mu = (0..nl).map(|l| per_j.iter().map(|row| row[l]).collect()).collect();
    LinearizationData::new(mats.len(), mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn coupling_no_delay() {
        let c = coupling_coefficient(&[q("-3/2")], 5).unwrap();
        assert_eq!(c.to_rational(), Some(q("-3/2")));
    }

    #[test]
    fn coupling_rejects_irreversible() {
        assert!(coupling_coefficient(&[q("1"), q("2"), q("3")], 1).is_err());
    }

    #[test]
    fn coupling_hexagon_factors() {
        // (d, a, b, c, b, a) with (d, a, b, c) = (6.9, 4, 1, 3)
        let row: Vec<Rational> = ["6.9", "4", "1", "3", "1", "4"].iter().map(|s| q(s)).collect();
        let expect = ["19.9", "6.9", "4.9", "-2.1", "4.9", "6.9"];
        for (k, e) in expect.iter().enumerate() {
            let c = coupling_coefficient(&row, k).unwrap();
            assert_eq!(c.to_rational(), Some(q(e)), "k={}", k);
        }
    }

    #[test]
    fn zero_mu_is_degenerate_at_zero() {
        let c = coupling_coefficient(&[q("0")], 0).unwrap();
        assert!(xi(&c, 0).is_zero());
        for k in 1..5 {
            let c = coupling_coefficient(&[q("0")], k).unwrap();
            assert_eq!(Sign::of(&xi(&c, k)), Sign::Pos);
        }
    }

    #[test]
    fn constant_coupling_negatives() {
        // c ≡ -10: negative exactly for k² < 10.
        let data = LinearizationData::new(1, vec![vec![q("-10")]]).unwrap();
        let decomp = IsotypicDecomposition {
            multiplicities: vec![1],
            dims: vec![1],
            component_dims: vec![1],
        };
        let t = sign_table(&data, &decomp, Some(6)).unwrap();
        let neg: Vec<usize> = (0..=6).filter(|&k| t.signs[k][0] == Sign::Neg).collect();
        assert_eq!(neg, vec![0, 1, 2, 3]);
    }

    #[test]
    fn a3_sampling() {
        let cubic = |x: &[f64], _y: &[Vec<f64>]| x.iter().map(|v| v * v * v).collect();
        let r = check_a3(cubic, 3, 2, 500, 2.0, 7);
        assert!(r.all_positive);
        let neg = |x: &[f64], _y: &[Vec<f64>]| x.iter().map(|v| -v).collect();
        let r = check_a3(neg, 3, 2, 100, 2.0, 7);
        assert!(!r.all_positive);
        assert_eq!(r.negative_samples, 100);
    }
}

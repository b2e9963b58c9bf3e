//! Spatio-temporal symmetries of a computed trajectory, matched against the
//! amalgamated classes of `O(2) × Γ × Z₂`.

use num_traits::ToPrimitive;
use serde::Serialize;

use eqdeg::ddedeg::MatrixRep;
use eqdeg::o2gamma::{Fingerprint, O2Gamma};
use eqdeg::permgroup::{FiniteGroup, Subgroup};

use crate::fourier::FourierSolution;

/// Acts on trajectories by `(ρ_θ κ^r, g) x = ±g x(±t + θ)`, with the
/// rotation measured on the registry's angular grid.
pub struct Action<'a> {
    reg: &'a O2Gamma,
    /// Matrix of `g⁻¹` for every base element, so that `g ↦ M` is a homomorphism.
    mats: Vec<Vec<Vec<f64>>>,
}

impl<'a> Action<'a> {
    pub fn new(reg: &'a O2Gamma, rep: &MatrixRep) -> Action<'a> {
        let base = &reg.gp.base;
        let mats = (0..base.order())
            .map(|g| {
                rep.mats[base.inv(g)]
                    .iter()
                    .map(|r| r.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect())
                    .collect()
            })
            .collect();
        Action { reg, mats }
    }

    pub fn apply(&self, u: usize, x: &FourierSolution) -> FourierSolution {
        let (j, r, g) = self.reg.u.decode(u);
        let theta = std::f64::consts::TAU * j as f64 / self.reg.u.res as f64;
        let mut y = if r { x.reversed() } else { x.clone() };
        y = y.shifted(theta);
        let mut y = y.mapped(&self.mats[self.reg.gp.to_base[g]]);
        if self.reg.gp.antipodal[g] {
            y.coeffs.iter_mut().for_each(|v| *v = -*v);
        }
        y
    }

    /// Elements of the ambient group fixing `x` up to `tol · max(1, |x|)`.
    pub fn stabilizer(&self, x: &FourierSolution, tol: f64) -> Vec<usize> {
        let scale = x.max_abs().max(1.0);
        (0..self.reg.u.order())
            .filter(|&u| {
                let y = self.apply(u, x);
                y.coeffs
                    .iter()
                    .zip(&x.coeffs)
                    .all(|(a, b)| (a - b).abs() <= tol * scale)
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassMatch {
    pub class: usize,
    pub name: String,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotropyReport {
    pub constant: bool,
    pub order: usize,
    /// The detected set is closed under composition.
    pub closed: bool,
    pub contains_reflection: bool,
    pub matched: Option<ClassMatch>,
    /// Match under a looser tolerance when it differs.
    pub alternative: Option<ClassMatch>,
    /// Guaranteed classes contained (up to conjugacy) in the detected isotropy.
    pub contains_guaranteed: Vec<String>,
    pub note: &'static str,
}

fn match_class(reg: &O2Gamma, s: &Subgroup) -> Option<ClassMatch> {
    if !reg.has_reflection(s) {
        return None;
    }
    let id = reg.intern_finite(s);
    let c = reg.class(id);
    Some(ClassMatch {
        class: id,
        name: c.name.clone(),
        fingerprint: c.fingerprint(),
    })
}

/// Detects the isotropy of a non-constant trajectory and matches it to a class.
pub fn isotropy_of_trajectory(
    reg: &O2Gamma,
    rep: &MatrixRep,
    x: &FourierSolution,
    tol: f64,
    guaranteed: &[usize],
) -> IsotropyReport {
    let act = Action::new(reg, rep);
    let constant = x.oscillation() <= tol * x.max_abs().max(1.0);
    let elems = act.stabilizer(x, tol);
    let s = Subgroup::from_elements(&reg.u, elems.iter().copied());
    let closed = Subgroup::generated(&reg.u, &elems).order() == s.order();
    let matched = if constant || !closed { None } else { match_class(reg, &s) };
    let loose = act.stabilizer(x, tol * 100.0);
    let alternative = if loose.len() != elems.len() && !constant {
        let s2 = Subgroup::generated(&reg.u, &loose);
        match_class(reg, &s2).filter(|m| Some(m.class) != matched.as_ref().map(|a| a.class))
    } else {
        None
    };
    let contains_guaranteed = match &matched {
        Some(m) => guaranteed
            .iter()
            .filter(|&&h| reg.subconjugate(h, m.class))
            .map(|&h| reg.name(h))
            .collect(),
        None => vec![],
    };
    IsotropyReport {
        constant,
        order: s.order(),
        closed,
        contains_reflection: reg.has_reflection(&s),
        matched,
        alternative,
        contains_guaranteed,
        note: "numerical evidence, not a proof",
    }
}

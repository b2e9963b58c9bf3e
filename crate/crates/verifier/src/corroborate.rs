//! Seeds Newton along an eigendirection of a negative spectral block and
//! checks the symmetry of whatever orbit it reaches.

use num_traits::ToPrimitive;
use serde::Serialize;

use eqdeg::chartab::CharacterTable;
use eqdeg::ddedeg::MatrixRep;
use eqdeg::o2gamma::O2Gamma;

use crate::apriori::{apriori_check, AprioriReport};
use crate::error::Result;
use crate::fourier::FourierSolution;
use crate::galerkin::{newton_solve, Galerkin, NewtonOptions, NewtonStatus};
use crate::symmetry::{isotropy_of_trajectory, IsotropyReport};

/// A vector of the isotypic component of irreducible `l`, scaled to max-abs 1.
pub fn eigendirection(rep: &MatrixRep, table: &CharacterTable, l: usize) -> Option<Vec<f64>> {
    let n = rep.dim;
    let order = rep.mats.len() as f64;
    let d = table.dim(l) as f64;
    let mut p = vec![vec![0.0f64; n]; n];
    for (g, m) in rep.mats.iter().enumerate() {
        let chi = table.value(l, g).to_f64();
        for i in 0..n {
            for j in 0..n {
                p[i][j] += chi * m[i][j].to_f64().unwrap_or(0.0) * d / order;
            }
        }
    }
    let col = (0..n).max_by(|&a, &b| {
        let na: f64 = (0..n).map(|i| p[i][a] * p[i][a]).sum();
        let nb: f64 = (0..n).map(|i| p[i][b] * p[i][b]).sum();
        na.total_cmp(&nb)
    })?;
    let v: Vec<f64> = (0..n).map(|i| p[i][col]).collect();
    let s = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    (s > 1e-12).then(|| v.iter().map(|x| x / s).collect())
}

/// `α cos(kt) v`.
pub fn seed_along(n: usize, modes: usize, k: usize, v: &[f64], alpha: f64) -> FourierSolution {
    let mut x = FourierSolution::zeros(n, modes);
    x.cos_mut(k).iter_mut().zip(v).for_each(|(c, vi)| *c = alpha * vi);
    x
}

/// Amplitude minimizing `|F(α cos(kt) v)| / α` on a logarithmic scan.
pub fn scan_amplitude(g: &Galerkin, k: usize, v: &[f64], lo: f64, hi: f64, steps: usize) -> Result<f64> {
    let mut best = (f64::INFINITY, lo);
    for s in 0..=steps {
        let alpha = lo * (hi / lo).powf(s as f64 / steps as f64);
        let x = seed_along(g.spec.n, g.modes, k, v, alpha);
        let r = g.residual_modes(&x)?;
        let score = r.iter().map(|e| e * e).sum::<f64>().sqrt() / alpha;
        if score < best.0 {
            best = (score, alpha);
        }
    }
    Ok(best.1)
}

#[derive(Clone, Debug, Serialize)]
pub struct Corroboration {
    pub k: usize,
    pub l: usize,
    pub amplitude: f64,
    pub status: NewtonStatus,
    pub iterations: usize,
    pub residual: f64,
    pub non_constant: bool,
    pub isotropy: Option<IsotropyReport>,
    pub apriori: Option<AprioriReport>,
    pub verdict: String,
}

pub struct CorroborationSetup<'a> {
    pub reg: &'a O2Gamma,
    pub rep: &'a MatrixRep,
    pub table: &'a CharacterTable,
    pub galerkin: &'a Galerkin,
    pub guaranteed: &'a [usize],
    pub newton: NewtonOptions,
    pub symmetry_tol: f64,
    pub a3_radius: Option<f64>,
}

/// One seeded Newton run along block `(k, l)`.
pub fn corroborate(setup: &CorroborationSetup, k: usize, l: usize) -> Result<Corroboration> {
    let g = setup.galerkin;
    let Some(v) = eigendirection(setup.rep, setup.table, l) else {
        return Ok(Corroboration {
            k,
            l,
            amplitude: 0.0,
            status: NewtonStatus::Singular,
            iterations: 0,
            residual: f64::NAN,
            non_constant: false,
            isotropy: None,
            apriori: None,
            verdict: format!("irreducible {} absent from the representation", l + 1),
        });
    };
    let alpha = scan_amplitude(g, k, &v, 1e-2, 1e2, 200)?;
    let seed = seed_along(g.spec.n, g.modes, k, &v, alpha);
    let res = newton_solve(g, &seed, &setup.newton)?;
    let x = &res.solution;
    let non_constant = x.oscillation() > 1e-6;
    let converged = res.status == NewtonStatus::Converged;
    let isotropy = (converged && non_constant)
        .then(|| isotropy_of_trajectory(setup.reg, setup.rep, x, setup.symmetry_tol, setup.guaranteed));
    let apriori = setup.a3_radius.map(|r| apriori_check(&g.spec, x, r, 2000, 11));
    let verdict = if !converged {
        format!("Newton did not converge ({:?}) after {} iterations", res.status, res.iterations)
    } else if !non_constant {
        "Newton converged to a constant solution".to_string()
    } else {
        match isotropy.as_ref().and_then(|i| i.matched.as_ref().map(|m| (m, &i.contains_guaranteed))) {
            Some((m, gs)) if !gs.is_empty() => format!(
                "non-constant orbit with isotropy ({}) containing guaranteed class(es) {}",
                m.name,
                gs.join(", ")
            ),
            Some((m, _)) => format!("non-constant orbit with isotropy ({}), no guaranteed class contained", m.name),
            None => "non-constant orbit, isotropy not matched to a class".to_string(),
        }
    };
    Ok(Corroboration {
        k,
        l,
        amplitude: alpha,
        status: res.status,
        iterations: res.iterations,
        residual: x.residual_norm,
        non_constant,
        isotropy,
        apriori,
        verdict,
    })
}

//! Verification run attached to a degree analysis.

use serde::Serialize;

use eqdeg::analysis::{Analysis, Prepared};
use eqdeg::ddedeg::{check_a3, A3Report};

use crate::corroborate::{corroborate, Corroboration, CorroborationSetup};
use crate::error::{Result, VerifyError};
use crate::galerkin::{Galerkin, NewtonOptions, DEFAULT_MODES};
use crate::system::SystemSpec;

/// `A_j = Σ_l μ_j^l P_l` with `P_l` the isotypic projectors of the representation.
pub fn linear_part(p: &Prepared) -> Vec<Vec<Vec<f64>>> {
    let n = p.rep.dim;
    let order = p.rep.mats.len() as f64;
    let projectors: Vec<Vec<Vec<f64>>> = (0..p.table.rows.len())
        .map(|l| {
            let d = p.table.dim(l) as f64;
            let mut pm = vec![vec![0.0; n]; n];
            for (g, m) in p.rep.mats.iter().enumerate() {
                let chi = p.table.value(l, g).to_f64();
                for i in 0..n {
                    for j in 0..n {
                        pm[i][j] += d / order * chi * num_traits::ToPrimitive::to_f64(&m[i][j]).unwrap_or(0.0);
                    }
                }
            }
            pm
        })
        .collect();
    (0..p.data.m)
        .map(|j| {
            let mut a = vec![vec![0.0; n]; n];
            for (l, pm) in projectors.iter().enumerate() {
                let mu = num_traits::ToPrimitive::to_f64(&p.data.mu[l][j]).unwrap_or(0.0);
                for i in 0..n {
                    for c in 0..n {
                        a[i][c] += mu * pm[i][c];
                    }
                }
            }
            a
        })
        .collect()
}

/// Parses the `system` block, filling the linear part from the analysis when absent.
pub fn system_from(analysis: &Analysis, raw: &serde_json::Value) -> Result<SystemSpec> {
    let mut spec: SystemSpec =
        serde_json::from_value(raw.clone()).map_err(|e| VerifyError::Spec(e.to_string()))?;
    if spec.linear.is_empty() {
        spec.linear = linear_part(&analysis.prepared);
    }
    if spec.n != analysis.prepared.rep.dim || spec.m != analysis.prepared.data.m {
        return Err(VerifyError::Dimension(format!(
            "system has n = {}, m = {}; analysis has n = {}, m = {}",
            spec.n, spec.m, analysis.prepared.rep.dim, analysis.prepared.data.m
        )));
    }
    spec.validate()?;
    Ok(spec)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    pub modes: usize,
    pub newton: NewtonOptions,
    pub symmetry_tol: f64,
    pub a3_samples: usize,
    pub a3_radius: f64,
    /// At most this many negative blocks are seeded.
    pub max_blocks: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            modes: DEFAULT_MODES,
            newton: NewtonOptions::default(),
            symmetry_tol: 1e-7,
            a3_samples: 2000,
            a3_radius: 10.0,
            max_blocks: 16,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub reversibility_violation: Option<String>,
    pub oddness_violation: Option<String>,
    pub a3: A3Report,
    pub runs: Vec<Corroboration>,
    pub note: &'static str,
}

pub fn verify(analysis: &Analysis, spec: &SystemSpec, opts: &VerifyOptions) -> Result<VerifyReport> {
    let reversibility_violation = spec.check_reversible(1e-12).err().map(|e| e.to_string());
    let oddness_violation = spec.check_odd().err().map(|e| e.to_string());
    let norm = spec.normalize();
    let a3 = check_a3(
        |x, y| {
            let mut xs = vec![x.to_vec()];
            xs.extend(y.iter().cloned());
            norm.eval(&xs)
        },
        spec.n,
        spec.m,
        opts.a3_samples,
        opts.a3_radius,
        7,
    );
    let g = Galerkin::new(spec, opts.modes, None)?;
    let guaranteed: Vec<usize> = analysis.report.conclusions.iter().map(|c| c.class).collect();
    let setup = CorroborationSetup {
        reg: &analysis.registry,
        rep: &analysis.prepared.rep,
        table: &analysis.prepared.table,
        galerkin: &g,
        guaranteed: &guaranteed,
        newton: opts.newton.clone(),
        symmetry_tol: opts.symmetry_tol,
        a3_radius: Some(opts.a3_radius),
    };
    let blocks: Vec<(usize, usize)> = analysis
        .prepared
        .spectrum
        .negative_blocks()
        .into_iter()
        .filter(|&(k, _)| k > 0 && k <= opts.modes)
        .take(opts.max_blocks)
        .collect();
    let runs = blocks
        .into_iter()
        .map(|(k, l)| corroborate(&setup, k, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        reversibility_violation,
        oddness_violation,
        a3,
        runs,
        note: "numerical evidence, not a proof",
    })
}

//! Sampled a-priori bounds for periodic solutions inside the admissible ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fourier::FourierSolution;
use crate::system::SystemSpec;

#[derive(Clone, Debug, Serialize)]
pub struct AprioriReport {
    pub sup_x: f64,
    pub sup_dx: f64,
    pub sup_ddx: f64,
    pub r: f64,
    /// Sampled estimate of `sup |𝔣|` on `{|x_j|∞ ≤ R}`.
    pub m1: f64,
    /// `max(R, M₁, 2πM₁) + 1`.
    pub bound: f64,
    pub within: bool,
    pub warning: Option<String>,
}

/// Estimates `M₁` by sampling (corners included) and checks `‖x‖`, `‖ẋ‖`, `‖ẍ‖ < M`.
pub fn apriori_check(spec: &SystemSpec, x: &FourierSolution, r: f64, samples: usize, seed: u64) -> AprioriReport {
    let spec = spec.normalize();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m1 = 0.0f64;
    for q in 0..samples {
        let xs: Vec<Vec<f64>> = (0..spec.m)
            .map(|_| {
                (0..spec.n)
                    .map(|_| if q % 2 == 0 { r * if rng.random::<bool>() { 1.0 } else { -1.0 } } else { rng.random_range(-r..=r) })
                    .collect()
            })
            .collect();
        let f = spec.eval(&xs);
        m1 = m1.max(f.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    }
    let bound = r.max(m1).max(std::f64::consts::TAU * m1) + 1.0;
    let grid = 8 * x.modes.max(1) + 1;
    let (mut sx, mut sdx, mut sddx) = (0.0f64, 0.0f64, 0.0f64);
    for q in 0..grid {
        let t = std::f64::consts::TAU * q as f64 / grid as f64;
        let sup = |v: Vec<f64>| v.iter().fold(0.0f64, |a, y| a.max(y.abs()));
        sx = sx.max(sup(x.eval_derivative(t, 0)));
        sdx = sdx.max(sup(x.eval_derivative(t, 1)));
        sddx = sddx.max(sup(x.eval_derivative(t, 2)));
    }
    let within = sx < bound && sdx < bound && sddx < bound;
    AprioriReport {
        sup_x: sx,
        sup_dx: sdx,
        sup_ddx: sddx,
        r,
        m1,
        bound,
        within,
        warning: (!within).then(|| "solution lies outside the admissible ball of the a-priori bound".to_string()),
    }
}

//! Truncated Fourier series `x(t) = a_0 + Σ_k a_k cos kt + b_k sin kt`.

use serde::{Deserialize, Serialize};

/// Coefficients stored flat: `a_0`, then `a_1, b_1, a_2, b_2, …`, each an
/// `n`-vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSolution {
    pub n: usize,
    pub modes: usize,
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub residual_norm: f64,
}

impl FourierSolution {
    pub fn zeros(n: usize, modes: usize) -> Self {
        FourierSolution {
            n,
            modes,
            coeffs: vec![0.0; n * (2 * modes + 1)],
            residual_norm: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Offset of the cosine (`sin = false`) or sine block of mode `k`.
    #[inline]
    pub fn offset(n: usize, k: usize, sin: bool) -> usize {
        if k == 0 {
            0
        } else {
            n + (k - 1) * 2 * n + if sin { n } else { 0 }
        }
    }

    pub fn cos_mut(&mut self, k: usize) -> &mut [f64] {
        let o = Self::offset(self.n, k, false);
        &mut self.coeffs[o..o + self.n]
    }

    pub fn sin_mut(&mut self, k: usize) -> &mut [f64] {
        assert!(k > 0);
        let o = Self::offset(self.n, k, true);
        &mut self.coeffs[o..o + self.n]
    }

    pub fn cos(&self, k: usize) -> &[f64] {
        let o = Self::offset(self.n, k, false);
        &self.coeffs[o..o + self.n]
    }

    pub fn sin(&self, k: usize) -> &[f64] {
        let o = Self::offset(self.n, k, true);
        &self.coeffs[o..o + self.n]
    }

    /// `d^order x / dt^order` at `t`.
    pub fn eval_derivative(&self, t: f64, order: u32) -> Vec<f64> {
        let mut out = if order == 0 { self.cos(0).to_vec() } else { vec![0.0; self.n] };
        for k in 1..=self.modes {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            // derivatives of (cos, sin) cycle with period four
            let (dc, ds) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            let scale = kf.powi(order as i32);
            let (a, b) = (self.cos(k), self.sin(k));
            for i in 0..self.n {
                out[i] += scale * (a[i] * dc + b[i] * ds);
            }
        }
        out
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.eval_derivative(t, 0)
    }

    /// `x(t + θ)`.
    pub fn shifted(&self, theta: f64) -> Self {
        let mut out = self.clone();
        for k in 1..=self.modes {
            let (s, c) = (k as f64 * theta).sin_cos();
            let a = self.cos(k).to_vec();
            let b = self.sin(k).to_vec();
            for i in 0..self.n {
                out.cos_mut(k)[i] = a[i] * c + b[i] * s;
                out.sin_mut(k)[i] = -a[i] * s + b[i] * c;
            }
        }
        out
    }

    /// `x(-t)`.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        for k in 1..=self.modes {
            out.sin_mut(k).iter_mut().for_each(|v| *v = -*v);
        }
        out
    }

    /// Applies a linear map to the values: `x(t) ↦ M x(t)`.
    pub fn mapped(&self, m: &[Vec<f64>]) -> Self {
        let mut out = self.clone();
        let blocks = 2 * self.modes + 1;
        for blk in 0..blocks {
            let o = blk * self.n;
            for r in 0..self.n {
                out.coeffs[o + r] = (0..self.n).map(|c| m[r][c] * self.coeffs[o + c]).sum();
            }
        }
        out
    }

    /// `d/dθ x(t + θ)` at `θ = 0`, the generator of time shifts.
    pub fn shift_tangent(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for k in 1..=self.modes {
            let kf = k as f64;
            let (oa, ob) = (Self::offset(self.n, k, false), Self::offset(self.n, k, true));
            for i in 0..self.n {
                out[oa + i] = kf * self.coeffs[ob + i];
                out[ob + i] = -kf * self.coeffs[oa + i];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Largest coefficient of a non-constant mode.
    pub fn oscillation(&self) -> f64 {
        self.coeffs[self.n..].iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// `samples` rows `t, x_1, …, x_n` over one period.
    pub fn to_csv(&self, samples: usize) -> String {
        let mut s = String::from("t");
        for i in 0..self.n {
            s.push_str(&format!(",x{}", i + 1));
        }
        s.push('\n');
        for q in 0..samples {
            let t = std::f64::consts::TAU * q as f64 / samples as f64;
            s.push_str(&format!("{:.12}", t));
            for v in self.eval(t) {
                s.push_str(&format!(",{:.12e}", v));
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FourierSolution {
        let mut x = FourierSolution::zeros(2, 3);
        x.cos_mut(0)[0] = 0.5;
        x.cos_mut(1)[0] = 1.0;
        x.sin_mut(2)[1] = -0.3;
        x.cos_mut(3)[1] = 0.2;
        x
    }

    #[test]
    fn shift_and_reverse_match_pointwise() {
        let x = sample();
        for &t in &[0.0, 0.7, 2.9, 5.5] {
            let a = x.shifted(1.3).eval(t);
            let b = x.eval(t + 1.3);
            assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-13));
            let r = x.reversed().eval(t);
            let s = x.eval(-t);
            assert!(r.iter().zip(&s).all(|(p, q)| (p - q).abs() < 1e-13));
        }
    }

    #[test]
    fn second_derivative_of_cosine() {
        let mut x = FourierSolution::zeros(1, 2);
        x.cos_mut(2)[0] = 1.0;
        let d = x.eval_derivative(0.4, 2)[0];
        assert!((d + 4.0 * (0.8f64).cos()).abs() < 1e-13);
    }

    #[test]
    fn tangent_is_derivative_of_shift() {
        let x = sample();
        let h = 1e-6;
        let p = x.shifted(h);
        let q = x.shifted(-h);
        let t = x.shift_tangent();
        for i in 0..x.len() {
            assert!(((p.coeffs[i] - q.coeffs[i]) / (2.0 * h) - t[i]).abs() < 1e-8);
        }
    }
}

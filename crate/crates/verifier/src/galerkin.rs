//! Fourier–Galerkin discretization of `ẍ(t) = f(x_t) + g(t)` on `[0, 2π]`
//! and a damped Newton solver with a phase condition.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, VerifyError};
use crate::fourier::FourierSolution;
use crate::system::SystemSpec;

pub const DEFAULT_MODES: usize = 32;

pub struct Galerkin {
    pub spec: SystemSpec,
    pub modes: usize,
    pub grid: usize,
    /// Optional forcing `g`, as Fourier coefficients of the same layout.
    pub forcing: Option<Vec<f64>>,
    times: Vec<f64>,
    /// `[j][q][k] = (cos k(t_q - jτ), sin k(t_q - jτ))`.
    basis: Vec<Vec<Vec<(f64, f64)>>>,
}

impl Galerkin {
    /// Discretizes the normalized (period `2π`) form of `spec`.
    pub fn new(spec: &SystemSpec, modes: usize, grid: Option<usize>) -> Result<Galerkin> {
        spec.validate()?;
        let grid = grid.unwrap_or(4 * modes + 1);
        if grid < 4 * modes + 1 {
            return Err(VerifyError::Spec(format!("grid {} below 4K+1 = {}", grid, 4 * modes + 1)));
        }
        let spec = spec.normalize();
        let times: Vec<f64> = (0..grid).map(|q| std::f64::consts::TAU * q as f64 / grid as f64).collect();
        let tau = spec.tau();
        let basis = (0..spec.m)
            .map(|j| {
                times
                    .iter()
                    .map(|&t| {
                        (0..=modes)
                            .map(|k| {
                                let (s, c) = (k as f64 * (t - j as f64 * tau)).sin_cos();
                                (c, s)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Galerkin {
            spec,
            modes,
            grid,
            forcing: None,
            times,
            basis,
        })
    }

    pub fn size(&self) -> usize {
        self.spec.n * (2 * self.modes + 1)
    }

    fn check(&self, x: &FourierSolution) -> Result<()> {
        if x.n != self.spec.n || x.modes != self.modes {
            return Err(VerifyError::Dimension(format!(
                "solution has n = {}, K = {}; discretization has n = {}, K = {}",
                x.n, x.modes, self.spec.n, self.modes
            )));
        }
        Ok(())
    }

    /// `x(t_q - jτ)` on the grid, indexed `[q][j][i]`, from the modes.
    pub fn delayed_values(&self, x: &FourierSolution) -> Vec<Vec<Vec<f64>>> {
        let n = self.spec.n;
        (0..self.grid)
            .map(|q| {
                (0..self.spec.m)
                    .map(|j| {
                        let b = &self.basis[j][q];
                        let mut v = x.cos(0).to_vec();
                        for k in 1..=self.modes {
                            let (c, s) = b[k];
                            let (a, bb) = (x.cos(k), x.sin(k));
                            for i in 0..n {
                                v[i] += a[i] * c + bb[i] * s;
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Galerkin projection of grid values `r[q][c]` onto modes `0..=K`.
    fn project(&self, vals: &[Vec<f64>]) -> Vec<f64> {
        let n = self.spec.n;
        let mut out = vec![0.0; self.size()];
        let inv = 1.0 / self.grid as f64;
        for (q, r) in vals.iter().enumerate() {
            let b = &self.basis[0][q];
            for c in 0..n {
                out[c] += r[c] * inv;
            }
            for k in 1..=self.modes {
                let (co, si) = b[k];
                let oa = FourierSolution::offset(n, k, false);
                let ob = oa + n;
                for c in 0..n {
                    out[oa + c] += 2.0 * inv * r[c] * co;
                    out[ob + c] += 2.0 * inv * r[c] * si;
                }
            }
        }
        out
    }

    /// Mode coefficients of `ẍ - f(x_t) - g`.
    pub fn residual_modes(&self, x: &FourierSolution) -> Result<Vec<f64>> {
        self.check(x)?;
        let vals: Vec<Vec<f64>> = self
            .delayed_values(x)
            .iter()
            .map(|xs| self.spec.eval(xs))
            .collect();
        let mut r: Vec<f64> = self.project(&vals).into_iter().map(|v| -v).collect();
        for k in 1..=self.modes {
            let k2 = (k * k) as f64;
            for sin in [false, true] {
                let o = FourierSolution::offset(self.spec.n, k, sin);
                for i in 0..self.spec.n {
                    r[o + i] -= k2 * x.coeffs[o + i];
                }
            }
        }
        if let Some(g) = &self.forcing {
            r.iter_mut().zip(g).for_each(|(a, b)| *a -= b);
        }
        Ok(r)
    }

    /// Sup-norm of `ẍ(t) - f(x_t) - g(t)` over the grid (pointwise, not projected).
    pub fn residual(&self, x: &FourierSolution) -> Result<f64> {
        self.check(x)?;
        let delayed = self.delayed_values(x);
        let g = self.forcing.as_ref().map(|c| FourierSolution {
            n: self.spec.n,
            modes: self.modes,
            coeffs: c.clone(),
            residual_norm: 0.0,
        });
        let mut sup = 0.0f64;
        for (q, &t) in self.times.iter().enumerate() {
            let acc = x.eval_derivative(t, 2);
            let f = self.spec.eval(&delayed[q]);
            let gv = g.as_ref().map(|g| g.eval(t)).unwrap_or_else(|| vec![0.0; self.spec.n]);
            for i in 0..self.spec.n {
                sup = sup.max((acc[i] - f[i] - gv[i]).abs());
            }
        }
        Ok(sup)
    }

    /// Analytic Jacobian of [`Galerkin::residual_modes`].
    pub fn jacobian(&self, x: &FourierSolution) -> Result<DMatrix<f64>> {
        self.check(x)?;
        let n = self.spec.n;
        let m = self.spec.m;
        let local: Vec<Vec<Vec<Vec<f64>>>> = self
            .delayed_values(x)
            .iter()
            .map(|xs| self.spec.jacobian(xs))
            .collect();
        let size = self.size();
        let cols: Vec<(usize, usize, bool)> = (0..=self.modes)
            .flat_map(|k| [false, true].into_iter().filter(move |&s| k > 0 || !s).map(move |s| (k, s)))
            .flat_map(|(k, s)| (0..n).map(move |i| (k, i, s)))
            .collect();
        let columns: Vec<Vec<f64>> = cols
            .par_iter()
            .map(|&(k, i, sin)| {
                let vals: Vec<Vec<f64>> = (0..self.grid)
                    .map(|q| {
                        (0..n)
                            .map(|c| {
                                (0..m)
                                    .map(|j| {
                                        let (co, si) = self.basis[j][q][k];
                                        local[q][c][j][i] * if sin { si } else { co }
                                    })
                                    .sum()
                            })
                            .collect()
                    })
                    .collect();
                let mut p = self.project(&vals);
                p.iter_mut().for_each(|v| *v = -*v);
                p[FourierSolution::offset(n, k, sin) + i] -= (k * k) as f64;
                p
            })
            .collect();
        let mut jac = DMatrix::zeros(size, size);
        for (&(k, i, sin), col) in cols.iter().zip(columns) {
            jac.set_column(FourierSolution::offset(n, k, sin) + i, &DVector::from_vec(col));
        }
        Ok(jac)
    }

    /// Largest relative deviation between the analytic Jacobian and central
    /// differences of the residual.
    pub fn jacobian_fd_error(&self, x: &FourierSolution, h: f64) -> Result<f64> {
        let jac = self.jacobian(x)?;
        let mut worst = 0.0f64;
        let scale = jac.amax().max(1.0);
        for col in 0..self.size() {
            let mut p = x.clone();
            p.coeffs[col] += h;
            let mut q = x.clone();
            q.coeffs[col] -= h;
            let (rp, rq) = (self.residual_modes(&p)?, self.residual_modes(&q)?);
            for row in 0..self.size() {
                let fd = (rp[row] - rq[row]) / (2.0 * h);
                worst = worst.max((fd - jac[(row, col)]).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Square block of the Jacobian acting on mode `k` (`n×n` for `k = 0`,
    /// `2n×2n` otherwise).
    pub fn mode_block(&self, jac: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
        let n = self.spec.n;
        let o = FourierSolution::offset(n, k, false);
        let w = if k == 0 { n } else { 2 * n };
        jac.view((o, o), (w, w)).into_owned()
    }
}

/// Real eigenvalues of a matrix block, sorted (complex pairs reported by real part).
pub fn block_eigenvalues(b: &DMatrix<f64>) -> Vec<f64> {
    let sym = (b - b.transpose()).amax() <= 1e-12 * b.amax().max(1.0);
    let mut ev: Vec<f64> = if sym {
        b.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
    } else {
        b.clone().complex_eigenvalues().iter().map(|z| z.re).collect()
    };
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Append `⟨T, x - x_0⟩ = 0` with `T` the shift tangent of the seed.
    pub phase_condition: bool,
    pub min_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 60,
            tol: 1e-10,
            phase_condition: true,
            min_step: 1.0 / 1024.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonStatus {
    Converged,
    MaxIterations,
    LineSearchFailed,
    Singular,
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonResult {
    pub solution: FourierSolution,
    pub status: NewtonStatus,
    pub iterations: usize,
    /// Max-abs of the projected residual at each accepted iterate.
    pub history: Vec<f64>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Damped Newton on the projected residual with backtracking on its norm.
pub fn newton_solve(g: &Galerkin, initial: &FourierSolution, opts: &NewtonOptions) -> Result<NewtonResult> {
    let mut x = initial.clone();
    let tangent = initial.shift_tangent();
    let use_phase = opts.phase_condition && max_abs(&tangent) > 0.0;
    let phase = |x: &FourierSolution| -> f64 {
        tangent
            .iter()
            .zip(x.coeffs.iter().zip(&initial.coeffs))
            .map(|(t, (a, b))| t * (a - b))
            .sum()
    };
    let merit = |x: &FourierSolution| -> Result<f64> {
        let r = g.residual_modes(x)?;
        let p = if use_phase { phase(x).abs() } else { 0.0 };
        Ok(max_abs(&r).max(p))
    };
    let mut history = vec![merit(&x)?];
    let mut status = NewtonStatus::MaxIterations;
    let mut iterations = 0;
    for it in 0..opts.max_iter {
        if history.last().copied().unwrap_or(f64::INFINITY) < opts.tol {
            status = NewtonStatus::Converged;
            break;
        }
        iterations = it + 1;
        let size = g.size();
        let jac = g.jacobian(&x)?;
        let r = g.residual_modes(&x)?;
        let rows = size + use_phase as usize;
        let mut a = DMatrix::zeros(rows, size);
        a.view_mut((0, 0), (size, size)).copy_from(&jac);
        let mut rhs = DVector::zeros(rows);
        r.iter().enumerate().for_each(|(i, v)| rhs[i] = -v);
        if use_phase {
            for (c, t) in tangent.iter().enumerate() {
                a[(size, c)] = *t;
            }
            rhs[size] = -phase(&x);
        }
        let svd = a.svd(true, true);
        if svd.singular_values.max() == 0.0 {
            status = NewtonStatus::Singular;
            break;
        }
        let eps = 1e-13 * svd.singular_values.max();
        let delta = match svd.solve(&rhs, eps) {
            Ok(d) => d,
            Err(_) => {
                status = NewtonStatus::Singular;
                break;
            }
        };
        let current = *history.last().unwrap();
        let mut step = 1.0;
        let mut accepted = None;
        while step >= opts.min_step {
            let mut trial = x.clone();
            trial.coeffs.iter_mut().zip(delta.iter()).for_each(|(c, d)| *c += step * d);
            let mt = merit(&trial)?;
            if mt < current || mt < opts.tol {
                accepted = Some((trial, mt));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((t, mt)) => {
                x = t;
                history.push(mt);
            }
            None => {
                status = NewtonStatus::LineSearchFailed;
                break;
            }
        }
    }
    if history.last().copied().unwrap_or(f64::INFINITY) < opts.tol {
        status = NewtonStatus::Converged;
    }
    x.residual_norm = g.residual(&x)?;
    Ok(NewtonResult {
        solution: x,
        status,
        iterations,
        history,
    })
}

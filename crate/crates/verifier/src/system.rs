//! Polynomial delay systems `ẍ(t) = f(x(t), x(t - p/m), …, x(t - (m-1)p/m))`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VerifyError};

/// One monomial `coeff · Π x_{i}(t - jτ)^e` in component `component`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub component: usize,
    pub coeff: f64,
    /// `[slot j, variable i, exponent e]`.
    pub powers: Vec<[usize; 3]>,
}

impl Term {
    pub fn degree(&self) -> usize {
        self.powers.iter().map(|p| p[2]).sum()
    }

    /// Canonical factor list: merged, sorted, zero exponents dropped.
    fn canonical(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = Vec::new();
        let mut ps = self.powers.clone();
        ps.sort_unstable();
        for p in ps {
            match out.last_mut() {
                Some(last) if last[0] == p[0] && last[1] == p[1] => last[2] += p[2],
                _ => out.push(p),
            }
        }
        out.retain(|p| p[2] > 0);
        out
    }

    fn mirrored(&self, m: usize) -> Vec<[usize; 3]> {
        let mut t = self.clone();
        for p in &mut t.powers {
            p[0] = (m - p[0]) % m;
        }
        t.canonical()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub n: usize,
    pub m: usize,
    #[serde(default = "two_pi")]
    pub period: f64,
    /// `A_0, …, A_{m-1}`, row-major; empty means no linear part.
    #[serde(default)]
    pub linear: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub terms: Vec<Term>,
}

fn two_pi() -> f64 {
    std::f64::consts::TAU
}

impl SystemSpec {
    pub fn from_json(v: &serde_json::Value) -> Result<SystemSpec> {
        let s: SystemSpec = serde_json::from_value(v.clone()).map_err(|e| VerifyError::Spec(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(VerifyError::Spec("n and m must be positive".into()));
        }
        if !(self.period > 0.0) {
            return Err(VerifyError::Spec("period must be positive".into()));
        }
        if !self.linear.is_empty() {
            if self.linear.len() != self.m {
                return Err(VerifyError::Spec(format!("{} linear matrices for m = {}", self.linear.len(), self.m)));
            }
            if self.linear.iter().any(|a| a.len() != self.n || a.iter().any(|r| r.len() != self.n)) {
                return Err(VerifyError::Spec(format!("linear matrices must be {}x{}", self.n, self.n)));
            }
        }
        for t in &self.terms {
            if t.component >= self.n || t.powers.iter().any(|p| p[0] >= self.m || p[1] >= self.n) {
                return Err(VerifyError::Spec(format!("term out of range: {:?}", t)));
            }
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        std::f64::consts::TAU / self.m as f64
    }

    /// Reversibility of the data: `A_j = A_{m-j}` and every monomial has a
    /// mirrored partner with the same coefficient.
    pub fn check_reversible(&self, tol: f64) -> Result<()> {
        for j in 1..self.linear.len() {
            let (a, b) = (&self.linear[j], &self.linear[self.m - j]);
            if a.iter().flatten().zip(b.iter().flatten()).any(|(x, y)| (x - y).abs() > tol) {
                return Err(VerifyError::Reversibility(format!("A_{} != A_{}", j, self.m - j)));
            }
        }
        let collected = self.collected();
        for (key, c) in &collected {
            let mut mirror = Term {
                component: key.0,
                coeff: 0.0,
                powers: key.1.clone(),
            }
            .mirrored(self.m);
            mirror.sort_unstable();
            let partner = collected
                .iter()
                .find(|(k, _)| k.0 == key.0 && k.1 == mirror)
                .map(|(_, c)| *c)
                .unwrap_or(0.0);
            if (partner - c).abs() > tol {
                return Err(VerifyError::Reversibility(format!(
                    "term {:?} in component {} has no mirrored partner",
                    key.1, key.0
                )));
            }
        }
        Ok(())
    }

    /// Condition (A₂): every monomial has odd total degree.
    pub fn check_odd(&self) -> Result<()> {
        match self.terms.iter().find(|t| t.degree() % 2 == 0) {
            Some(t) => Err(VerifyError::Spec(format!("term of even degree: {:?}", t))),
            None => Ok(()),
        }
    }

    fn collected(&self) -> Vec<((usize, Vec<[usize; 3]>), f64)> {
        let mut out: Vec<((usize, Vec<[usize; 3]>), f64)> = Vec::new();
        for t in &self.terms {
            let key = (t.component, t.canonical());
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, c)) => *c += t.coeff,
                None => out.push((key, t.coeff)),
            }
        }
        out
    }

    /// Rescales time to period `2π`: `f ↦ α² f` with `α = p/2π`.
    pub fn normalize(&self) -> SystemSpec {
        let alpha = self.period / std::f64::consts::TAU;
        let s = alpha * alpha;
        SystemSpec {
            n: self.n,
            m: self.m,
            period: std::f64::consts::TAU,
            linear: self
                .linear
                .iter()
                .map(|a| a.iter().map(|r| r.iter().map(|v| v * s).collect()).collect())
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * s,
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// `f(x_t)` for the delayed states `xs[j]`.
    pub fn eval(&self, xs: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, a) in self.linear.iter().enumerate() {
            for (c, row) in a.iter().enumerate() {
                out[c] += row.iter().zip(&xs[j]).map(|(p, q)| p * q).sum::<f64>();
            }
        }
        for t in &self.terms {
            out[t.component] += t.coeff * t.powers.iter().map(|p| xs[p[0]][p[1]].powi(p[2] as i32)).product::<f64>();
        }
        out
    }

    /// `∂f_c/∂x_{j,i}` indexed `[c][j][i]`.
    pub fn jacobian(&self, xs: &[Vec<f64>]) -> Vec<Vec<Vec<f64>>> {
        let mut d = vec![vec![vec![0.0; self.n]; self.m]; self.n];
        for (j, a) in self.linear.iter().enumerate() {
            for c in 0..self.n {
                for i in 0..self.n {
                    d[c][j][i] += a[c][i];
                }
            }
        }
        for t in &self.terms {
            for (q, p) in t.powers.iter().enumerate() {
                if p[2] == 0 {
                    continue;
                }
                let mut v = t.coeff * p[2] as f64 * xs[p[0]][p[1]].powi(p[2] as i32 - 1);
                for (r, o) in t.powers.iter().enumerate() {
                    if r != q {
                        v *= xs[o[0]][o[1]].powi(o[2] as i32);
                    }
                }
                d[t.component][p[0]][p[1]] += v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(n: usize, m: usize) -> SystemSpec {
        SystemSpec {
            n,
            m,
            period: std::f64::consts::TAU,
            linear: vec![],
            terms: (0..n)
                .map(|i| Term {
                    component: i,
                    coeff: 1.0,
                    powers: vec![[0, i, 3]],
                })
                .collect(),
        }
    }

    #[test]
    fn normalize_scales_by_alpha_squared() {
        let mut s = cubic(2, 2);
        s.linear = vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]; 2];
        assert_eq!(s.normalize(), s);
        s.period = 2.0 * std::f64::consts::TAU;
        let t = s.normalize();
        assert_eq!(t.linear[0][0][0], 4.0);
        assert_eq!(t.terms[0].coeff, 4.0);
        assert_eq!(t.tau(), s.tau());
    }

    #[test]
    fn reversibility_on_terms() {
        let mut s = cubic(1, 3);
        assert!(s.check_reversible(0.0).is_ok());
        s.terms.push(Term {
            component: 0,
            coeff: 0.5,
            powers: vec![[1, 0, 3]],
        });
        assert!(s.check_reversible(0.0).is_err());
        s.terms.push(Term {
            component: 0,
            coeff: 0.5,
            powers: vec![[2, 0, 2], [2, 0, 1]],
        });
        assert!(s.check_reversible(0.0).is_ok());
        assert!(s.check_odd().is_ok());
    }

    #[test]
    fn jacobian_matches_difference_quotient() {
        let mut s = cubic(2, 2);
        s.terms.push(Term {
            component: 1,
            coeff: -0.7,
            powers: vec![[1, 0, 2], [0, 1, 1]],
        });
        let xs = vec![vec![0.3, -1.1], vec![0.8, 0.4]];
        let d = s.jacobian(&xs);
        let h = 1e-6;
        for j in 0..2 {
            for i in 0..2 {
                let mut p = xs.clone();
                p[j][i] += h;
                let mut q = xs.clone();
                q[j][i] -= h;
                let (fp, fq) = (s.eval(&p), s.eval(&q));
                for c in 0..2 {
                    let fd = (fp[c] - fq[c]) / (2.0 * h);
                    assert!((fd - d[c][j][i]).abs() < 1e-6);
                }
            }
        }
    }
}

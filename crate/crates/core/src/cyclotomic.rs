//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Character values of finite groups live in cyclotomic fields; keeping them
//! exact means orthogonality relations, fixed-point dimensions and degree
//! coefficients never pass through floating point.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational numbers used throughout the crate.
pub type Rational = num_rational::Ratio<i128>;

fn cyclotomic_poly_cache() -> &'static Mutex<HashMap<u32, Vec<i128>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i128>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i128> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = exact_poly_div(&num, &den);
        }
    }
    cyclotomic_poly_cache()
        .lock()
        .unwrap()
        .insert(n, num.clone());
    num
}

// Division of integer polynomials by a monic divisor with zero remainder.
fn exact_poly_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Q(ζ_N)`, stored reduced modulo `Φ_N` (length `φ(N)`).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n as i128))
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Rational::zero(); n as usize];
        raw[e] = Rational::one();
        Self::from_group_algebra(n, raw)
    }

    /// `ζ_n^k + ζ_n^{-k} = 2 cos(2πk/n)`.
    pub fn two_cos(n: u32, k: i64) -> Self {
        Self::root_of_unity(n, k) + Self::root_of_unity(n, -k)
    }

    /// Builds an element from coefficients of `1, ζ, …, ζ^{n-1}` (unreduced).
    pub fn from_group_algebra(n: u32, raw: Vec<Rational>) -> Self {
        assert_eq!(raw.len(), n as usize);
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        let mut rem = raw;
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if !c.is_zero() {
                for (j, &pj) in phi.iter().enumerate() {
                    rem[i - deg + j] -= c * Rational::from_integer(pj);
                }
            }
        }
        rem.truncate(deg);
        Cyclotomic { order: n, coeffs: rem }.normalized()
    }

    // Drops to the smallest order that represents the same number whenever the
    // value is rational; keeps comparisons structural.
    fn normalized(self) -> Self {
        if self.order != 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return Cyclotomic {
                order: 1,
                coeffs: vec![self.coeffs.first().copied().unwrap_or_else(Rational::zero)],
            };
        }
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Re-expresses the element in `Q(ζ_m)` where `order | m`.
    pub fn embed(&self, m: u32) -> Self {
        assert!(m.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{})", self.order, m);
        self.embed_raw(m)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.embed_raw(m), other.embed_raw(m))
    }

    // Like `embed` but never normalizes back to order 1, so the two operands
    // share a coefficient layout.
    fn embed_raw(&self, m: u32) -> Self {
        if self.order == m {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut raw = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(i * step) % m as usize] += *c;
        }
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        for i in (deg..raw.len()).rev() {
            let c = raw[i];
            if !c.is_zero() {
                for (j, &pj) in phi.iter().enumerate() {
                    raw[i - deg + j] -= c * Rational::from_integer(pj);
                }
            }
        }
        raw.truncate(deg);
        Cyclotomic {
            order: m,
            coeffs: raw,
        }
    }

    /// Complex conjugate (`ζ ↦ ζ^{-1}`).
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut raw = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(n - i) % n] += *c;
        }
        Self::from_group_algebra(self.order, raw)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.order == 1 || self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().copied().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<i128> {
        self.to_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn scale(&self, q: Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| *c * q).collect(),
        }
        .normalized()
    }

    /// Numerical value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let a = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex().0
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        (self - other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
        .normalized()
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 {
            return rhs.scale(self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(rhs.coeffs[0]);
        }
        let (a, b) = self.common(rhs);
        let n = a.order as usize;
        let mut raw = vec![Rational::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                raw[(i + j) % n] += x * y;
            }
        }
        Cyclotomic::from_group_algebra(a.order, raw)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (i, mag == Rational::one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "E({})^{}", self.order, i)?,
                (_, false) => write!(f, "{}*E({})^{}", mag, self.order, i)?,
            }
        }
        Ok(())
    }
}

/// Parses `"p/q"`, integers and finite decimals (`"6.9"`, `"-1.2e-1"`) exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let neg = mantissa.starts_with('-');
    let body = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{}{}", int_part, frac_part);
    let mut num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 {
        Rational::from_integer(num * pow)
    } else {
        Rational::new(num, pow)
    })
}

/// Converts a float to the rational given by its shortest round-trip decimal form.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{}", x))
}

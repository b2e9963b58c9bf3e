//! Basic degrees `deg_{𝒱_{k,l}}` from the recurrence over orbit types and
//! products of basic degrees in the Burnside ring of `O(2) × Γ'`.

use std::sync::Arc;

use serde::Serialize;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{EqError, Result};
use crate::o2gamma::{O2Gamma, OrbitTypes};

#[derive(Clone, Debug)]
pub struct BasicDegree {
    pub k: usize,
    pub l: usize,
    pub element: BurnsideElement,
    pub orbit_types: Arc<OrbitTypes>,
}

/// `deg_{𝒱_{k,l}}`: coefficients `n_H` computed from the top of the orbit
/// type lattice downwards,
/// `n_H = ((-1)^{dim V^H} - Σ_{K>H} n_K n(H,K) |W(K)|) / |W(H)|`.
pub fn basic_degree(reg: &O2Gamma, k: usize, l: usize) -> Result<BasicDegree> {
    let ot = reg.orbit_types(k, l)?;
    let top = reg.top();
    let mut classes: Vec<usize> = ot.classes.clone();
    if !classes.contains(&top) {
        classes.push(top);
    }
    classes.sort_by_key(|&h| std::cmp::Reverse((reg.display_rank(h), h)));
    let mut coeffs: Vec<(usize, i64)> = Vec::with_capacity(classes.len());
    for &h in &classes {
        let d = if h == top { 0 } else { reg.fixed_dim(h, k, l) };
        let mut num: i64 = if d % 2 == 0 { 1 } else { -1 };
        for &(kc, nk) in &coeffs {
            if nk != 0 {
                num -= nk * reg.mark(h, kc) as i64;
            }
        }
        let w = reg.weyl_order(h) as i64;
        if num % w != 0 {
            return Err(EqError::Recurrence(format!(
                "recurrence for {} in 𝒱_{{{},{}}} gives {}/{}",
                reg.name(h),
                k,
                l + 1,
                num,
                w
            )));
        }
        coeffs.push((h, num / w));
    }
    Ok(BasicDegree {
        k,
        l,
        element: reg.element(coeffs),
        orbit_types: ot,
    })
}

/// Coefficient `x_o ∈ {0,1,2}` of a maximal orbit type in a basic degree,
/// `deg = (G) - x_o (H_o) + …`.
pub fn x_o(reg: &O2Gamma, k: usize, l: usize, h: usize) -> Result<i64> {
    let d = reg.fixed_dim(h, k, l);
    if d.is_multiple_of(2) {
        return Ok(0);
    }
    match reg.weyl_order(h) {
        2 => Ok(1),
        1 => Ok(2),
        w => Err(EqError::Recurrence(format!(
            "maximal type {} has odd fixed dimension and |W| = {}",
            reg.name(h),
            w
        ))),
    }
}

/// One factor `deg_{𝒱_{k,l}}^{mult}` of a degree product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub k: usize,
    pub l: usize,
    pub mult: usize,
}

/// `Π deg_{𝒱_{k,l}}^{m_{k,l}}`, with exponents reduced mod 2 first.
pub fn degree_product(reg: &O2Gamma, factors: &[Factor]) -> Result<BurnsideElement> {
    let mut acc = reg.unit();
    for f in factors.iter().filter(|f| f.mult % 2 == 1) {
        let d = basic_degree(reg, f.k, f.l)?;
        acc = reg.ring_mul(&acc, &d.element)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::CharacterTable;
    use crate::gamma::GammaPrime;
    use crate::permgroup::Group;

    fn registry(name: &str, kmax: usize) -> O2Gamma {
        let g = Group::preset(name).unwrap();
        let t = CharacterTable::bundled(name, &g).unwrap();
        O2Gamma::for_kmax(GammaPrime::new(g, t).unwrap(), kmax).unwrap()
    }

    /// Checks `Σ_{L ≥ H} n_L n(H,L) |W(L)| = (-1)^{dim V^H}` on every class.
    fn check_recurrence(reg: &O2Gamma, d: &BasicDegree) {
        let mut all = d.orbit_types.classes.clone();
        all.push(reg.top());
        for &h in &all {
            let lhs: i64 = d.element.terms().map(|(l, n)| n * reg.mark(h, l) as i64).sum();
            let dim = if h == reg.top() { 0 } else { reg.fixed_dim(h, d.k, d.l) };
            assert_eq!(lhs, if dim % 2 == 0 { 1 } else { -1 }, "class {}", reg.name(h));
        }
    }

    #[test]
    fn antipodal_line_for_trivial_gamma() {
        let reg = registry("Z1", 1);
        let d = basic_degree(&reg, 0, 0).unwrap();
        // deg = (G) - (O(2) × Z1): the index-two kernel of the sign action.
        assert_eq!(d.element.terms().count(), 2);
        assert_eq!(d.element.coeff(reg.top()), 1);
        let other = d.element.support().into_iter().find(|&h| h != reg.top()).unwrap();
        assert_eq!(d.element.coeff(other), -1);
        assert_eq!(reg.class(other).goursat.k_order, 1);
    }

    #[test]
    fn trivial_gamma_mode_one() {
        let reg = registry("Z1", 1);
        let d = basic_degree(&reg, 1, 0).unwrap();
        check_recurrence(&reg, &d);
        let sq = reg.ring_mul(&d.element, &d.element).unwrap();
        assert_eq!(sq, reg.unit());
    }

    #[test]
    fn d6_basic_degrees_are_involutions() {
        let reg = registry("D6", 2);
        for k in 0..=2 {
            for l in [0usize, 3, 4, 5] {
                let d = basic_degree(&reg, k, l).unwrap();
                check_recurrence(&reg, &d);
                let sq = reg.ring_mul(&d.element, &d.element).unwrap();
                assert_eq!(sq, reg.unit(), "k={} l={}", k, l + 1);
                for &h in &d.orbit_types.maximal {
                    assert_eq!(d.element.coeff(h), -x_o(&reg, k, l, h).unwrap());
                }
            }
        }
    }

    #[test]
    fn even_multiplicity_cancels() {
        let reg = registry("D6", 1);
        let p = degree_product(&reg, &[Factor { k: 1, l: 4, mult: 2 }]).unwrap();
        assert_eq!(p, reg.unit());
        assert_eq!(degree_product(&reg, &[]).unwrap(), reg.unit());
    }
}

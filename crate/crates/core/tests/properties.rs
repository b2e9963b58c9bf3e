use proptest::prelude::*;

use eqdeg::burnside::{mul_classes_by_marks, BurnsideRing, FiniteBurnside};
use eqdeg::chartab::CharacterTable;
use eqdeg::cyclotomic::{Cyclotomic, Rational};
use eqdeg::ddedeg::{coupling_coefficient, LinearizationData};
use eqdeg::permgroup::{enumerate_subgroups, FiniteGroup, Group, Permutation, SubgroupClassLattice};

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::from_images(images.into_iter().map(|i| i as u16).collect()).unwrap()
}

fn permutation_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(perm)
}

#[test]
fn subgroup_counts_match_divisor_formulas() {
    // Z_n has tau(n) subgroups, D_n has tau(n) + sigma(n).
    for n in 1..=12 {
        let tau = divisors(n).len();
        let sigma: usize = divisors(n).iter().sum();
        let z = Group::preset(&format!("Z{}", n)).unwrap();
        assert_eq!(enumerate_subgroups(&z, |_| true).len(), tau, "Z{}", n);
        if n >= 3 {
            let d = Group::preset(&format!("D{}", n)).unwrap();
            assert_eq!(enumerate_subgroups(&d, |_| true).len(), tau + sigma, "D{}", n);
        }
    }
}

#[test]
fn s4_has_eleven_subgroup_classes() {
    let s4 = Group::preset("S4").unwrap();
    let lat = SubgroupClassLattice::build(&s4);
    assert_eq!(lat.len(), 11);
    assert_eq!(lat.classes.iter().map(|c| c.class_size).sum::<usize>(), 30);
}

#[test]
fn bundled_tables_are_orthonormal() {
    let mut names: Vec<String> = (1..=12).flat_map(|n| [format!("Z{}", n), format!("D{}", n)]).collect();
    names.extend(["S3".to_string(), "S4".to_string()]);
    for name in names {
        let g = Group::preset(&name).unwrap();
        let t = CharacterTable::bundled(&name, &g).unwrap();
        let r = t.rows.len();
        assert_eq!(r, t.num_classes(), "{}", name);
        let dims: usize = (0..r).map(|l| t.dim(l) * t.dim(l)).sum();
        assert_eq!(dims, g.order(), "{}", name);
        for i in 0..r {
            for j in 0..r {
                let ip = t.inner(&t.rows[i], &t.rows[j]);
                let want = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                assert_eq!(ip, want, "{} rows {} {}", name, i, j);
            }
        }
    }
}

#[test]
fn burnside_products_match_marks_on_small_groups() {
    for name in ["Z4", "Z6", "D3", "D4", "D5", "S4"] {
        let g = Group::preset(name).unwrap();
        let lat = SubgroupClassLattice::build(&g);
        let ring = FiniteBurnside::new(&g, &lat);
        for h in 0..lat.len() {
            for k in h..lat.len() {
                assert_eq!(ring.mul_classes(h, k), mul_classes_by_marks(&lat, h, k), "{} ({}, {})", name, h, k);
            }
        }
    }
}

proptest! {
    #[test]
    fn permutations_form_a_group(p in permutation_strategy(7), q in permutation_strategy(7), r in permutation_strategy(7)) {
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.then(&Permutation::identity(7)), p.clone());
        for i in 0..7 {
            prop_assert_eq!(p.then(&q).apply(i), q.apply(p.apply(i)));
        }
    }

    #[test]
    fn cycle_notation_round_trips(p in permutation_strategy(9)) {
        let s = p.to_string();
        prop_assert_eq!(Permutation::parse_cycles(&s, 9).unwrap(), p);
    }

    #[test]
    fn cyclotomic_field_laws(n in 1u32..=12, a in -20i64..20, b in -20i64..20, k in 0i64..24, j in 0i64..24) {
        let x = Cyclotomic::root_of_unity(n, k).scale(Rational::from_integer(a as i128));
        let y = Cyclotomic::root_of_unity(n, j) + Cyclotomic::from_int(b);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
        let (xr, xi) = x.to_complex();
        let (yr, yi) = y.to_complex();
        let (pr, pi) = (&x * &y).to_complex();
        prop_assert!((pr - (xr * yr - xi * yi)).abs() < 1e-9);
        prop_assert!((pi - (xr * yi + xi * yr)).abs() < 1e-9);
        prop_assert!((&x * &x.conj()).is_real());
    }

    #[test]
    fn coupling_matches_float_direct_sum(m in 1usize..=9, k in 0usize..40, raw in prop::collection::vec(-50i64..50, 5)) {
        // reversible row: mu_j = mu_(m - j)
        let mut row = vec![Rational::from_integer(0); m];
        for j in 0..m {
            let r = j.min(m - j) % m;
            row[j] = Rational::new(raw[r % raw.len()] as i128, 10);
        }
        let data = LinearizationData::new(m, vec![row.clone()]).unwrap();
        data.check_reversible().unwrap();
        let exact = coupling_coefficient(&row, k).unwrap().to_f64();
        let float: f64 = row
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let v = *q.numer() as f64 / *q.denom() as f64;
                v * (2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64).cos()
            })
            .sum();
        prop_assert!((exact - float).abs() < 1e-9, "{} vs {}", exact, float);
    }

    #[test]
    fn conjugation_is_an_automorphism(n in 3usize..=8, a in 0usize..16, b in 0usize..16, c in 0usize..16) {
        let g = Group::preset(&format!("D{}", n)).unwrap();
        let o = g.order();
        let (a, b, c) = (a % o, b % o, c % o);
        prop_assert_eq!(g.conj(c, g.mul(a, b)), g.mul(g.conj(c, a), g.conj(c, b)));
        prop_assert_eq!(g.element_order(g.conj(c, a)), g.element_order(a));
    }
}

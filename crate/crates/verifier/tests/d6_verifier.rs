use eqdeg::analysis::{analyze, Analysis, AnalysisConfig};
use eqdeg::permgroup::FiniteGroup;
use eqverify::galerkin::block_eigenvalues;
use eqverify::pipeline::{linear_part, system_from};
use eqverify::symmetry::{isotropy_of_trajectory, Action};
use eqverify::{newton_solve, FourierSolution, Galerkin, NewtonOptions, NewtonStatus, SystemSpec, Term};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> AnalysisConfig {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/d6_example.json")).unwrap();
    AnalysisConfig::from_json(&text).unwrap()
}

fn d6() -> (Analysis, SystemSpec) {
    let cfg = config();
    let a = analyze(&cfg).unwrap();
    let spec = system_from(&a, cfg.system.as_ref().unwrap()).unwrap();
    (a, spec)
}

fn random_solution(n: usize, modes: usize, band: usize, seed: u64) -> FourierSolution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = FourierSolution::zeros(n, modes);
    for k in 0..=band {
        for v in x.cos_mut(k) {
            *v = rng.random_range(-1.0..1.0) / (1 + k * k) as f64;
        }
        if k > 0 {
            for v in x.sin_mut(k) {
                *v = rng.random_range(-1.0..1.0) / (1 + k * k) as f64;
            }
        }
    }
    x
}

#[test]
fn linear_jacobian_spectrum_matches_xi() {
    let (a, mut spec) = d6();
    spec.terms.clear();
    let modes = 8;
    let g = Galerkin::new(&spec, modes, None).unwrap();
    let jac = g.jacobian(&FourierSolution::zeros(6, modes)).unwrap();
    let sp = &a.prepared.spectrum;
    let dec = &a.prepared.decomposition;
    for k in 0..=modes {
        let mut expect = Vec::new();
        for &l in &sp.irreps {
            let xi = sp.xi_exact[k][l].to_f64();
            let copies = dec.component_dims[l] * if k == 0 { 1 } else { 2 };
            expect.extend(std::iter::repeat_n(-(1.0 + (k * k) as f64) * xi, copies));
        }
        expect.sort_by(|p, q| p.total_cmp(q));
        let got = block_eigenvalues(&g.mode_block(&jac, k));
        assert_eq!(got.len(), expect.len());
        for (x, y) in got.iter().zip(&expect) {
            assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "k={} got {} expected {}", k, x, y);
        }
    }
}

#[test]
fn linear_part_is_the_scaled_circulant() {
    let (a, _) = d6();
    let lin = linear_part(&a.prepared);
    let scales = [6.9, 4.0, 1.0, 3.0, 1.0, 4.0];
    for (j, s) in scales.iter().enumerate() {
        for i in 0..6 {
            for c in 0..6 {
                let d = (i as i64 - c as i64).rem_euclid(6);
                let base = match d {
                    0 => -1.0,
                    1 | 5 => 0.1,
                    _ => 0.0,
                };
                assert!((lin[j][i][c] - s * base).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn manufactured_solution_recovered() {
    let (_, spec) = d6();
    let modes = 24;
    let mut g = Galerkin::new(&spec, modes, None).unwrap();
    let target = random_solution(6, modes, 8, 3);
    g.forcing = Some(g.residual_modes(&target).unwrap());
    assert!(g.residual(&target).unwrap() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut start = target.clone();
    start
        .coeffs
        .iter_mut()
        .for_each(|v| *v *= 1.0 + 0.1 * if rng.random::<bool>() { 1.0 } else { -1.0 });
    let opts = NewtonOptions {
        phase_condition: false,
        ..NewtonOptions::default()
    };
    let r = newton_solve(&g, &start, &opts).unwrap();
    assert_eq!(r.status, NewtonStatus::Converged);
    assert!(r.solution.residual_norm < 1e-10, "{}", r.solution.residual_norm);
    let err = r
        .solution
        .coeffs
        .iter()
        .zip(&target.coeffs)
        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    assert!(err < 1e-9);
}

#[test]
fn reversed_trajectory_has_equal_residual() {
    let (_, mut spec) = d6();
    spec.terms.push(Term {
        component: 0,
        coeff: 0.3,
        powers: vec![[1, 2, 1], [5, 3, 2]],
    });
    spec.terms.push(Term {
        component: 0,
        coeff: 0.3,
        powers: vec![[5, 2, 1], [1, 3, 2]],
    });
    spec.check_reversible(0.0).unwrap();
    let g = Galerkin::new(&spec, 12, None).unwrap();
    for seed in 0..4 {
        let x = random_solution(6, 12, 12, seed);
        let (r1, r2) = (g.residual(&x).unwrap(), g.residual(&x.reversed()).unwrap());
        assert!((r1 - r2).abs() <= 1e-12 * r1.max(1.0), "{} vs {}", r1, r2);
    }
    // one-sided delay breaks the invariant
    spec.terms.truncate(spec.terms.len() - 1);
    let g = Galerkin::new(&spec, 12, None).unwrap();
    let x = random_solution(6, 12, 12, 9);
    assert!((g.residual(&x).unwrap() - g.residual(&x.reversed()).unwrap()).abs() > 1e-6);
}

#[test]
fn detects_reversal_and_antipodal_shift() {
    let (a, _) = d6();
    let reg = &a.registry;
    let act = Action::new(reg, &a.prepared.rep);
    let id = reg.gp.ext.identity();
    // x(t) = cos t · (1,-1,1,-1,1,-1)
    let mut x = FourierSolution::zeros(6, 4);
    x.cos_mut(1).copy_from_slice(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
    let stab = act.stabilizer(&x, 1e-12);
    assert!(stab.contains(&reg.u.encode(0, true, id)));
    assert!(stab.contains(&reg.u.encode(reg.u.res / 2, false, reg.gp.antipode)));
    let iso = isotropy_of_trajectory(reg, &a.prepared.rep, &x, 1e-9, &[]);
    assert!(iso.closed && iso.matched.is_some() && !iso.constant);
    // a constant vector is flagged
    let mut c = FourierSolution::zeros(6, 4);
    c.cos_mut(0).copy_from_slice(&[1.0; 6]);
    let iso = isotropy_of_trajectory(reg, &a.prepared.rep, &c, 1e-9, &[]);
    assert!(iso.constant);
    assert!(act.stabilizer(&c, 1e-12).len() >= 2 * reg.u.res * reg.gp.base.order());
}

#[test]
fn stabilizers_are_closed() {
    let (a, _) = d6();
    let act = Action::new(&a.registry, &a.prepared.rep);
    for seed in 0..3 {
        let mut x = random_solution(6, 4, 4, seed);
        // impose x(t + π) = -x(t) and evenness
        for k in (0..=4).step_by(2) {
            x.cos_mut(k).iter_mut().for_each(|v| *v = 0.0);
            if k > 0 {
                x.sin_mut(k).iter_mut().for_each(|v| *v = 0.0);
            }
        }
        for k in 1..=4 {
            x.sin_mut(k).iter_mut().for_each(|v| *v = 0.0);
        }
        let stab = act.stabilizer(&x, 1e-12);
        let s = eqdeg::permgroup::Subgroup::from_elements(&a.registry.u, stab.iter().copied());
        let closure = eqdeg::permgroup::Subgroup::generated(&a.registry.u, &stab);
        assert_eq!(s.order(), closure.order());
        assert!(stab.len() >= 4);
    }
}

#[test]
fn linear_matrices_match_exact_mu() {
    let (a, _) = d6();
    let lin = linear_part(&a.prepared);
    let mu = &a.prepared.data.mu;
    // μ on the alternating vector (component 4) equals A_j applied to it
    let v = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
    for j in 0..6 {
        let av: f64 = (0..6).map(|c| lin[j][0][c] * v[c]).sum();
        assert!((av - mu[3][j].to_f64().unwrap()).abs() < 1e-12);
    }
}

fn spec_strategy() -> impl Strategy<Value = SystemSpec> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
        let term = (0..n, -2.0f64..2.0, prop::collection::vec((0..m, 0..n, 1usize..=3), 1..=3));
        (Just(n), Just(m), prop::collection::vec(term, 1..5)).prop_map(|(n, m, ts)| SystemSpec {
            n,
            m,
            period: std::f64::consts::TAU,
            linear: vec![],
            terms: ts
                .into_iter()
                .map(|(c, coeff, ps)| {
                    let mut powers: Vec<[usize; 3]> = ps.into_iter().map(|(j, i, e)| [j, i, e]).collect();
                    let mut deg: usize = powers.iter().map(|p| p[2]).sum();
                    while deg > 5 {
                        powers.pop();
                        deg = powers.iter().map(|p| p[2]).sum();
                    }
                    Term {
                        component: c,
                        coeff,
                        powers,
                    }
                })
                .collect(),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn jacobian_matches_finite_differences(spec in spec_strategy(), seed in 0u64..1000) {
        let g = Galerkin::new(&spec, 3, None).unwrap();
        let x = random_solution(spec.n, 3, 3, seed);
        let err = g.jacobian_fd_error(&x, 1e-6).unwrap();
        prop_assert!(err < 1e-6, "relative error {}", err);
    }
}

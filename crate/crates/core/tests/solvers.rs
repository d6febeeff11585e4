mod common;

use common::{random_data, rel_diff};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sobolev_core::hiep::{arnoldi, diagnostics, solve, solve_traced, Solver, TraceEvent};
use sobolev_core::jordan::build_same_measure;
use sobolev_core::quadrature::{gauss_legendre, legendre_jacobi};

const ALL: [Solver; 3] = [Solver::Arnoldi, Solver::UpdateHouseholder, Solver::UpdateRotations];

#[test]
fn solvers_agree_and_meet_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut worst = 0.0_f64;
    for case in 0..60 {
        let data = random_data(&mut rng, 40);
        let m = data.dim();
        let reference = solve(&data, Solver::Arnoldi).unwrap();
        for solver in ALL {
            let sol = solve(&data, solver).unwrap();
            let d = diagnostics(&data, &sol.h, &sol.q);
            assert!(d.within_contract(m), "case {case} {solver:?}: {d:?}");
            let diff = rel_diff(reference.h.as_matrix(), sol.h.as_matrix());
            worst = worst.max(diff);
            assert!(diff <= 1e-11, "case {case} {solver:?} (m = {m}): {diff:e}");
        }
    }
    eprintln!("worst relative difference {worst:e}");
}

#[test]
fn breakdown_happens_at_full_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    for _ in 0..40 {
        let data = random_data(&mut rng, 20);
        let r = arnoldi(&data, data.dim()).unwrap();
        assert_eq!(r.breakdown_at, Some(data.dim()));
        assert!(r.q_next.is_none());
        // no earlier step broke down: every subdiagonal is well away from zero
        for j in 0..data.dim() - 1 {
            assert!(r.h.subdiag(j).re > 1e-13 * data.operator().frobenius_norm());
        }
    }
}

#[test]
fn legendre_measure_gives_jacobi_matrix() {
    let rule = gauss_legendre(8).unwrap();
    let data = build_same_measure(&rule, &[1.0]).unwrap();
    let jac = legendre_jacobi(8).unwrap();
    for solver in ALL {
        let h = solve(&data, solver).unwrap().h;
        let h = h.as_matrix();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j {
                    jac.diag()[i]
                } else if i.abs_diff(j) == 1 {
                    jac.offdiag()[i.min(j)]
                } else {
                    0.0
                };
                let got = h[(i, j)];
                assert!(
                    (got.re - want).abs() <= 1e-12 && got.im.abs() <= 1e-12,
                    "{solver:?} ({i},{j}): {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn traces_cover_every_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
    let data = random_data(&mut rng, 15);
    let mut steps = 0;
    solve_traced(&data, Solver::Arnoldi, &mut |e| {
        if matches!(e, TraceEvent::ArnoldiStep { .. }) {
            steps += 1;
        }
    })
    .unwrap();
    assert_eq!(steps, data.dim());

    let mut merges = 0;
    solve_traced(&data, Solver::UpdateRotations, &mut |e| {
        if let TraceEvent::BlockMerged { rotation_a, rotation_b, .. } = e {
            assert!((rotation_a * rotation_a + rotation_b * rotation_b - 1.0).abs() < 1e-14);
            merges += 1;
        }
    })
    .unwrap();
    assert_eq!(merges, data.operator().blocks().len() - 1);
}

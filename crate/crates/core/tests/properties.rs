mod common;

use common::{random_data, recurrence_polys, unit_phase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sobolev_core::eigen::hessenberg_eigenvalues;
use sobolev_core::hiep::{diagnostics, solve, HessenbergMatrix, Householder, PlaneRotation, Solver};
use sobolev_core::jordan::{build_same_measure, JordanBlock, JordanOperator, SpectralData, WeightVector};
use sobolev_core::linalg::orthogonality_defect;
use sobolev_core::quadrature::{gauss_legendre, QuadratureRule};
use sobolev_core::sop::{evaluate, hermite_coefficients, HermiteSamples};
use sobolev_core::{Matrix, C64};

fn complex() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Determinant by partial-pivoting LU.
fn determinant(mut a: Matrix) -> C64 {
    let n = a.nrows();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)];
        det *= piv;
        if piv.norm() == 0.0 {
            return det;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    det
}

fn random_hessenberg(rng: &mut ChaCha8Rng, n: usize) -> HessenbergMatrix {
    use rand::Rng;
    let m = Matrix::from_fn(n, n, |i, j| {
        if i > j + 1 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }
    });
    HessenbergMatrix::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_solver_meets_contract(seed in any::<u64>(), max_dim in 1usize..24) {
        let data = random_data(&mut ChaCha8Rng::seed_from_u64(seed), max_dim);
        for solver in [Solver::Arnoldi, Solver::UpdateHouseholder, Solver::UpdateRotations] {
            let sol = solve(&data, solver).unwrap();
            let d = diagnostics(&data, &sol.h, &sol.q);
            prop_assert!(d.within_contract(data.dim()), "{:?}: {:?}", solver, d);
        }
    }

    #[test]
    fn plane_rotation_is_unitary(x in complex(), y in complex(), i in 0usize..5, j in 0usize..5) {
        prop_assume!(i != j);
        let (rot, rho) = PlaneRotation::zeroing(x, y, i, j);
        let p = rot.to_dense(5);
        prop_assert!(orthogonality_defect(&p) < 1e-14);
        let mut v = vec![C64::new(0.0, 0.0); 5];
        v[i] = x;
        v[j] = y;
        rot.apply_vec(&mut v);
        prop_assert!((v[i] - C64::new(rho, 0.0)).norm() <= 1e-14 * (1.0 + rho));
        prop_assert!(v[j].norm() <= 1e-14 * (1.0 + rho));
    }

    #[test]
    fn householder_maps_to_axis(c in prop::collection::vec(complex(), 1..8)) {
        prop_assume!(c.iter().any(|v| v.norm() > 1e-3));
        let refl = Householder::from_vector(&c).unwrap();
        let d = refl.to_dense(c.len());
        prop_assert!((&d - &d.adjoint()).frobenius_norm() < 1e-14);
        prop_assert!(orthogonality_defect(&d) < 1e-13);
        let mut v = c.clone();
        refl.apply_local(&mut v);
        let scale: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((v[0] + refl.alpha()).norm() <= 1e-13 * scale);
        prop_assert!(v[1..].iter().all(|z| z.norm() <= 1e-13 * scale));
    }

    #[test]
    fn spectrum_matches_trace_and_determinant(seed in any::<u64>(), n in 1usize..16) {
        let h = random_hessenberg(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let spec = hessenberg_eigenvalues(&h).unwrap();
        prop_assert_eq!(spec.len(), n);
        let sum: C64 = spec.eigenvalues().iter().sum();
        let prod: C64 = spec.eigenvalues().iter().product();
        let scale = h.as_matrix().frobenius_norm();
        prop_assert!((sum - h.as_matrix().trace()).norm() <= 1e-12 * (1.0 + scale));
        let det = determinant(h.as_matrix().clone());
        prop_assert!((prod - det).norm() <= 1e-10 * (1.0 + scale).powi(n as i32));
    }

    #[test]
    fn spectrum_is_invariant_under_diagonal_similarity(seed in any::<u64>(), n in 1usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hessenberg(&mut rng, n);
        let d: Vec<C64> = (0..n).map(|_| unit_phase(&mut rng)).collect();
        let scaled = Matrix::from_fn(n, n, |i, j| d[i].conj() * h[(i, j)] * d[j]);
        let a = hessenberg_eigenvalues(&h).unwrap();
        let b = hessenberg_eigenvalues(&HessenbergMatrix::new(scaled).unwrap()).unwrap();
        // match greedily, since sorting can swap near-ties
        let mut used = vec![false; n];
        for x in a.eigenvalues() {
            let (k, dist) = b.eigenvalues().iter().enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, y)| (k, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[k] = true;
            prop_assert!(dist < 1e-9, "{} unmatched ({})", x, dist);
        }
    }

    #[test]
    fn discrete_measure_nodes_are_recovered(nodes in prop::collection::btree_set(-1000i32..1000, 1..20), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes: Vec<f64> = nodes.into_iter().map(|k| k as f64 / 500.0).collect();
        let blocks = nodes.iter().map(|&x| JordanBlock::scalar(C64::new(x, 0.0)).unwrap()).collect();
        let betas = nodes.iter().map(|_| unit_phase(&mut rng) * 0.5).collect();
        let data = SpectralData::new(JordanOperator::new(blocks).unwrap(), WeightVector::new(betas).unwrap()).unwrap();
        let h = solve(&data, Solver::UpdateRotations).unwrap().h;
        let spec = hessenberg_eigenvalues(&h).unwrap();
        for (got, want) in spec.eigenvalues().iter().zip(&nodes) {
            prop_assert!((got - C64::new(*want, 0.0)).norm() < 1e-9, "{} vs {}", got, want);
        }
    }

    #[test]
    fn leading_coefficients_are_positive(seed in any::<u64>()) {
        let data = random_data(&mut ChaCha8Rng::seed_from_u64(seed), 13);
        let m = data.dim();
        let h = solve(&data, Solver::UpdateHouseholder).unwrap().h;
        let wn = data.weights().norm();
        let polys = recurrence_polys(h.as_matrix(), wn, m - 1);
        let mut expected = 1.0 / wn;
        for (k, p) in polys.iter().enumerate() {
            if k > 0 {
                expected /= h.subdiag(k - 1).re;
            }
            prop_assert_eq!(p.coeffs().len(), k + 1);
            let lead = p.coeffs()[k];
            prop_assert!(expected.is_finite() && expected > 0.0);
            prop_assert!((lead.re - expected).abs() <= 1e-12 * expected && lead.im.abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn full_basis_parseval(seed in any::<u64>(), n in 2usize..12, gamma in 0.01..2.0f64) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rule: QuadratureRule = gauss_legendre(n).unwrap();
        let data = build_same_measure(&rule, &[1.0, gamma]).unwrap();
        let h = solve(&data, Solver::UpdateRotations).unwrap().h;
        let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ders: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = HermiteSamples { nodes: rule.nodes(), weights: rule.weights(), values: &vals, derivatives: &ders };
        let c = hermite_coefficients(&h, data.weights().norm(), &s, gamma, 2 * n - 1).unwrap();
        let energy: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let direct: f64 = rule.weights().iter().zip(&vals).zip(&ders)
            .map(|((w, f), d)| w * (f * f + gamma * d * d)).sum();
        prop_assert!((energy - direct).abs() <= 1e-9 * direct);
    }
}

#[test]
fn recurrence_roots_match_eigenvalues() {
    // real roots of p_k located by sign changes and bisection on the recurrence
    let rule = gauss_legendre(12).unwrap();
    let data = build_same_measure(&rule, &[1.0, 0.5]).unwrap();
    let h = solve(&data, Solver::Arnoldi).unwrap().h;
    let wn = data.weights().norm();
    let pk = |x: f64, k: usize| evaluate(&h, wn, C64::new(x, 0.0), k).unwrap().values[k].re;
    for k in 1..=10 {
        let spec = hessenberg_eigenvalues(&h.leading(k)).unwrap();
        let grid: Vec<f64> = (0..=4000).map(|i| -1.5 + 3.0 * i as f64 / 4000.0).collect();
        let mut roots = Vec::new();
        for w in grid.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            if pk(a, k).signum() == pk(b, k).signum() {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if pk(mid, k).signum() == pk(a, k).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        assert_eq!(roots.len(), k, "degree {k}");
        for (r, e) in roots.iter().zip(spec.eigenvalues()) {
            assert!((r - e.re).abs() < 1e-8 && e.im.abs() < 1e-8, "degree {k}: {r} vs {e}");
        }
    }
}

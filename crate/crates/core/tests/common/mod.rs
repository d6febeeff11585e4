#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sobolev_core::jordan::{JordanBlock, JordanOperator, PolyCoeffs, SpectralData, WeightVector};
use sobolev_core::{Matrix, C64};

pub fn unit_phase(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Blocks of size 1..=4, eigenvalues in `[-2,2] x [-1,1]i`, total size `<= max_dim`.
pub fn random_data(rng: &mut ChaCha8Rng, max_dim: usize) -> SpectralData {
    let target = rng.gen_range(1..=max_dim);
    let mut blocks = Vec::new();
    let mut betas = Vec::new();
    let mut dim = 0;
    while dim < target {
        let size = rng.gen_range(1..=4).min(target - dim);
        let z = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let alphas = (1..size)
            .map(|_| unit_phase(rng) * rng.gen_range(0.5..2.0))
            .collect();
        blocks.push(JordanBlock::new(z, alphas).unwrap());
        betas.push(unit_phase(rng) * rng.gen_range(0.2..2.0));
        dim += size;
    }
    SpectralData::new(
        JordanOperator::new(blocks).unwrap(),
        WeightVector::new(betas).unwrap(),
    )
    .unwrap()
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> PolyCoeffs {
    PolyCoeffs(
        (0..=degree)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

/// `p(Z) w` through a dense Horner evaluation.
pub fn dense_krylov_vector(data: &SpectralData, p: &PolyCoeffs) -> Vec<C64> {
    p.eval_matrix(&data.operator().to_dense())
        .mul_vec(&data.dense_weights())
}

/// Monomial coefficients of `p_0..p_k` expanded from the recurrence matrix.
pub fn recurrence_polys(h: &Matrix, w_norm: f64, k: usize) -> Vec<PolyCoeffs> {
    let mut out: Vec<Vec<C64>> = vec![vec![C64::new(1.0 / w_norm, 0.0)]];
    for j in 1..=k {
        let mut next = vec![C64::new(0.0, 0.0); j + 1];
        for (d, a) in out[j - 1].iter().enumerate() {
            next[d + 1] += *a;
        }
        for (i, prev) in out.iter().enumerate().take(j) {
            for (d, a) in prev.iter().enumerate() {
                next[d] -= h[(i, j - 1)] * a;
            }
        }
        let s = h[(j, j - 1)];
        out.push(next.into_iter().map(|a| a / s).collect());
    }
    out.into_iter().map(PolyCoeffs).collect()
}

pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).frobenius_norm() / a.frobenius_norm().max(f64::MIN_POSITIVE)
}

//! Updating procedure: merge one Jordan block at a time.
//!
//! For a single block `J` with weight `beta e_last` the solution is
//! `Q = (beta/|beta|) F`, `H = F J F` with `F` the flip matrix. Given the
//! solution `(H^, Q^)` for the blocks processed so far and the next block
//! `J`, each merge
//!
//! 1. embeds `H^ (+) F J F` and `Q^ (+) Q_J`;
//! 2. rotates basis columns `0` and `d^` (the first column of the new
//!    block) so the first column becomes `w / ||w||` over the merged blocks;
//! 3. restores Hessenberg form column by column with reflectors or plane
//!    rotations acting on rows/columns `>= 1`, which leaves `Q e_1` alone.
//!
//! A final unimodular diagonal similarity makes the subdiagonal real and
//! non-negative.

use alloc::vec::Vec;
#[allow(unused_imports)] // float methods live in core only on newer toolchains
use num_traits::Float;

use super::transform::{Householder, PlaneRotation};
use super::{HessenbergMatrix, HiepSolution, TraceEvent};
use crate::jordan::{JordanBlock, SpectralData};
use crate::linalg::{Matrix, C64, ZERO};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestoreStrategy {
    Householder,
    Rotations,
}

pub fn update_solve(data: &SpectralData, strategy: RestoreStrategy) -> Result<HiepSolution> {
    update_solve_traced(data, strategy, &mut |_| {})
}

pub fn update_solve_traced(
    data: &SpectralData,
    strategy: RestoreStrategy,
    trace: &mut dyn FnMut(&TraceEvent),
) -> Result<HiepSolution> {
    let blocks = data.operator().blocks();
    let betas = data.weights().betas();

    let (mut h, mut q) = single_block(&blocks[0], betas[0]);
    let mut norm_w = betas[0].norm();

    for (t, (block, &beta)) in blocks.iter().zip(betas).enumerate().skip(1) {
        let d_hat = h.nrows();
        let (hj, qj) = single_block(block, beta);
        let dim = d_hat + block.size();
        h = embed(&h, &hj, dim);
        q = embed(&q, &qj, dim);

        let beta_abs = beta.norm();
        let new_norm = libm::hypot(norm_w, beta_abs);
        let a = norm_w / new_norm;
        let b = beta_abs / new_norm;
        // P^H e_1 = a e_1 + b e_{d^}
        let rot = PlaneRotation::new(C64::new(a, 0.0), C64::new(-b, 0.0), 0, d_hat)?;
        rot.apply_left(&mut h, 0..dim);
        rot.apply_right_adjoint(&mut h, 0..dim);
        rot.apply_right_adjoint(&mut q, 0..dim);
        norm_w = new_norm;
        trace(&TraceEvent::BlockMerged {
            block: t,
            dim,
            rotation_a: a,
            rotation_b: b,
        });

        restore_hessenberg(&mut h, &mut q, strategy, t, trace);
    }

    normalize_subdiagonal(&mut h, &mut q);

    let sol = HiepSolution {
        h: HessenbergMatrix::new_unchecked(h),
        q,
    };
    let diag = super::diagnostics(data, &sol.h, &sol.q);
    let tol = 1e-10 * diag.z_norm.max(f64::MIN_POSITIVE);
    if !(diag.similarity <= tol) {
        return Err(Error::NumericalFailure {
            what: "updating procedure similarity",
            residual: diag.similarity,
            tolerance: tol,
        });
    }
    Ok(sol)
}

fn single_block(block: &JordanBlock, beta: C64) -> (Matrix, Matrix) {
    let s = block.size();
    let phase = beta / beta.norm();
    let dense = block.to_dense();
    let h = Matrix::from_fn(s, s, |i, j| dense[(s - 1 - i, s - 1 - j)]);
    let q = Matrix::from_fn(s, s, |i, j| if i + j == s - 1 { phase } else { ZERO });
    (h, q)
}

fn embed(top: &Matrix, bottom: &Matrix, dim: usize) -> Matrix {
    let d = top.nrows();
    Matrix::from_fn(dim, dim, |i, j| {
        if i < d && j < d {
            top[(i, j)]
        } else if i >= d && j >= d {
            bottom[(i - d, j - d)]
        } else {
            ZERO
        }
    })
}

fn restore_hessenberg(
    h: &mut Matrix,
    q: &mut Matrix,
    strategy: RestoreStrategy,
    block: usize,
    trace: &mut dyn FnMut(&TraceEvent),
) {
    let dim = h.nrows();
    let mut rows: Vec<usize> = Vec::new();
    for col in 0..dim.saturating_sub(2) {
        rows.clear();
        rows.push(col + 1);
        rows.extend(((col + 2)..dim).filter(|&r| h[(r, col)] != ZERO));
        if rows.len() == 1 {
            continue;
        }
        let eliminated = rows[1..].iter().map(|&r| h[(r, col)].norm_sqr()).sum::<f64>().sqrt();
        match strategy {
            RestoreStrategy::Householder => {
                let c: Vec<C64> = rows.iter().map(|&r| h[(r, col)]).collect();
                let refl = Householder::embedded(&c, rows.clone())
                    .expect("bulge vector has a nonzero entry");
                refl.apply_left(h, col..dim);
                for &r in &rows[1..] {
                    h[(r, col)] = ZERO;
                }
                h[(rows[0], col)] = -refl.alpha();
                refl.apply_right(h, 0..dim);
                refl.apply_right(q, 0..dim);
            }
            RestoreStrategy::Rotations => {
                for idx in (1..rows.len()).rev() {
                    let (ri, rj) = (rows[idx - 1], rows[idx]);
                    let y = h[(rj, col)];
                    if y == ZERO {
                        continue;
                    }
                    let (rot, rho) = PlaneRotation::zeroing(h[(ri, col)], y, ri, rj);
                    rot.apply_left(h, (col + 1)..dim);
                    h[(ri, col)] = C64::new(rho, 0.0);
                    h[(rj, col)] = ZERO;
                    rot.apply_right_adjoint(h, 0..dim);
                    rot.apply_right_adjoint(q, 0..dim);
                }
            }
        }
        trace(&TraceEvent::ColumnRestored {
            block,
            column: col + 1,
            bulge_len: rows.len(),
            eliminated_norm: eliminated,
        });
    }
}

/// `H <- D^H H D`, `Q <- Q D` with `D` unimodular diagonal, `D_00 = 1`.
fn normalize_subdiagonal(h: &mut Matrix, q: &mut Matrix) {
    let n = h.nrows();
    let mut d = Vec::with_capacity(n);
    d.push(C64::new(1.0, 0.0));
    for j in 0..n.saturating_sub(1) {
        let s = h[(j + 1, j)];
        let u = if s == ZERO { C64::new(1.0, 0.0) } else { s / s.norm() };
        d.push(d[j] * u);
    }
    for j in 0..n {
        for i in 0..n {
            h[(i, j)] = d[i].conj() * h[(i, j)] * d[j];
        }
        for v in q.col_mut(j) {
            *v *= d[j];
        }
    }
    for j in 0..n.saturating_sub(1) {
        h[(j + 1, j)] = C64::new(h[(j + 1, j)].norm(), 0.0);
    }
}

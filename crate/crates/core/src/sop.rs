//! Evaluating the orthonormal sequence from its recurrence matrix, Hermite
//! least squares in that basis, and the five-term recurrence matrix of a
//! discrete Laguerre-Sobolev product.
//!
//! Values and derivatives come from the (differentiated) Hessenberg
//! recurrence, never from monomial coefficients, which overflow long
//! before degree 200.

use alloc::vec;
use alloc::vec::Vec;

use crate::hiep::{solve, HessenbergMatrix, Solver};
use crate::jordan::SpectralData;
use crate::linalg::{Matrix, C64, ZERO};
use crate::{Error, Result};

/// Number of uniform points on `[-1, 1]` used to measure fit errors.
pub const GRID_POINTS: usize = 2001;

/// `p_0(x), ..., p_k(x)` and their first derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct SopEvaluation {
    pub values: Vec<C64>,
    pub derivs: Vec<C64>,
}

/// Evaluates `p_0..p_k` at `x` from the recurrence
/// `x [p_0 .. p_{k-1}] = [p_0 .. p_{k-1}] H_k + h_{k+1,k} p_k e_k^T`.
///
/// `h` may be square (then `k < dim`) or carry one extra row.
pub fn evaluate(h: &HessenbergMatrix, h_norm: f64, x: C64, k: usize) -> Result<SopEvaluation> {
    check_degree(h, h_norm, k)?;
    let mut values = Vec::with_capacity(k + 1);
    let mut derivs = Vec::with_capacity(k + 1);
    values.push(C64::new(1.0 / h_norm, 0.0));
    derivs.push(ZERO);
    let m = h.as_matrix();
    for j in 1..=k {
        let col = m.col(j - 1);
        let mut v = x * values[j - 1];
        let mut d = values[j - 1] + x * derivs[j - 1];
        for i in 0..j {
            v -= col[i] * values[i];
            d -= col[i] * derivs[i];
        }
        let s = col[j];
        values.push(v / s);
        derivs.push(d / s);
    }
    Ok(SopEvaluation { values, derivs })
}

fn check_degree(h: &HessenbergMatrix, h_norm: f64, k: usize) -> Result<()> {
    if !(h_norm > 0.0 && h_norm.is_finite()) {
        return Err(Error::invalid("weight norm must be positive"));
    }
    let m = h.as_matrix();
    if k >= m.nrows() || k > m.ncols() {
        return Err(Error::invalid(alloc::format!(
            "degree {k} needs a recurrence of at least {} rows, have {}",
            k + 1,
            m.nrows()
        )));
    }
    if let Some(j) = (0..k).find(|&j| !(m[(j + 1, j)].norm() > 0.0)) {
        return Err(Error::invalid(alloc::format!(
            "zero subdiagonal at column {j}: the sequence ends at degree {j}"
        )));
    }
    Ok(())
}

/// Samples of a real target and its derivative at the quadrature nodes.
#[derive(Clone, Copy, Debug)]
pub struct HermiteSamples<'a> {
    pub nodes: &'a [f64],
    /// Weights of the function-value term (`|beta_j|^2`).
    pub weights: &'a [f64],
    pub values: &'a [f64],
    pub derivatives: &'a [f64],
}

impl HermiteSamples<'_> {
    fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.weights.len() != n || self.values.len() != n || self.derivatives.len() != n {
            return Err(Error::invalid("node, weight and sample arrays must have equal length"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LsqFit {
    pub coefficients: Vec<C64>,
    pub degree: usize,
    /// Max error of the fit over the evaluation grid.
    pub value_error: f64,
    pub derivative_error: f64,
}

/// `c_j = sum_m w_m [f(x_m) conj(p_j(x_m)) + gamma f'(x_m) conj(p_j'(x_m))]`, `j = 0..=n`.
///
/// Since the basis is orthonormal for the same product, the coefficients
/// of a degree `n' < n` fit are the first `n' + 1` entries.
pub fn hermite_coefficients(
    h: &HessenbergMatrix,
    h_norm: f64,
    samples: &HermiteSamples<'_>,
    gamma: f64,
    n: usize,
) -> Result<Vec<C64>> {
    samples.validate()?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma must be non-negative"));
    }
    check_degree(h, h_norm, n)?;
    let mut c = vec![ZERO; n + 1];
    for i in 0..samples.nodes.len() {
        let e = evaluate(h, h_norm, C64::new(samples.nodes[i], 0.0), n)?;
        let w = samples.weights[i];
        let (f, df) = (samples.values[i], samples.derivatives[i]);
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += (e.values[j].conj() * f + e.derivs[j].conj() * (gamma * df)) * w;
        }
    }
    Ok(c)
}

/// Fits the degree-`n` approximant and measures it on the standard grid.
#[allow(clippy::too_many_arguments)]
pub fn hermite_least_squares(
    h: &HessenbergMatrix,
    h_norm: f64,
    samples: &HermiteSamples<'_>,
    gamma: f64,
    n: usize,
    f: &dyn Fn(f64) -> f64,
    fprime: &dyn Fn(f64) -> f64,
) -> Result<LsqFit> {
    let coefficients = hermite_coefficients(h, h_norm, samples, gamma, n)?;
    let (value_error, derivative_error) =
        grid_errors(h, h_norm, &coefficients, &[n], f, fprime)?[0];
    Ok(LsqFit {
        coefficients,
        degree: n,
        value_error,
        derivative_error,
    })
}

pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Max value and derivative errors on the standard grid of the truncations
/// `sum_{j <= n} c_j p_j`, one pair per requested degree.
pub fn grid_errors(
    h: &HessenbergMatrix,
    h_norm: f64,
    coefficients: &[C64],
    degrees: &[usize],
    f: &dyn Fn(f64) -> f64,
    fprime: &dyn Fn(f64) -> f64,
) -> Result<Vec<(f64, f64)>> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    if top >= coefficients.len() {
        return Err(Error::invalid("degree exceeds the available coefficients"));
    }
    let mut errs = vec![(0.0_f64, 0.0_f64); degrees.len()];
    for x in uniform_grid(GRID_POINTS) {
        let e = evaluate(h, h_norm, C64::new(x, 0.0), top)?;
        let (fx, dfx) = (f(x), fprime(x));
        let mut v = ZERO;
        let mut d = ZERO;
        let mut partial = Vec::with_capacity(top + 1);
        for ((&c, &pv), &pd) in coefficients[..=top].iter().zip(&e.values).zip(&e.derivs) {
            v += c * pv;
            d += c * pd;
            partial.push((v, d));
        }
        for (slot, &n) in errs.iter_mut().zip(degrees) {
            let (v, d) = partial[n];
            slot.0 = slot.0.max((v - fx).norm());
            slot.1 = slot.1.max((d - dfx).norm());
        }
    }
    Ok(errs)
}

/// Leading `m x m` block of `H_{m+1}^2`, where `H` solves the inverse
/// problem for already-shifted data `(Z - cI, w)`.
pub fn pentadiagonal_recurrence(shifted: &SpectralData, m: usize, solver: Solver) -> Result<Matrix> {
    if m == 0 || m + 1 > shifted.dim() {
        return Err(Error::invalid(alloc::format!(
            "m = {m} needs spectral data of dimension at least m + 1, have {}",
            shifted.dim()
        )));
    }
    let sol = solve(shifted, solver)?;
    pentadiagonal_from_recurrence(&sol.h, m)
}

/// Leading `m x m` block of `H_{m+1}^2` for an already computed `H`.
pub fn pentadiagonal_from_recurrence(h: &HessenbergMatrix, m: usize) -> Result<Matrix> {
    if m == 0 || m + 1 > h.dim() {
        return Err(Error::invalid(alloc::format!(
            "m = {m} needs a recurrence matrix of dimension at least m + 1, have {}",
            h.dim()
        )));
    }
    let h = h.as_matrix().leading(m + 1);
    Ok((&h * &h).leading(m))
}

/// Largest entry outside the band `|i - j| <= 2`, relative to `||b||_F`.
pub fn off_band_ratio(b: &Matrix) -> f64 {
    let mut worst = 0.0_f64;
    for j in 0..b.ncols() {
        for i in 0..b.nrows() {
            if i.abs_diff(j) > 2 {
                worst = worst.max(b[(i, j)].norm());
            }
        }
    }
    let nrm = b.frobenius_norm();
    if nrm == 0.0 {
        0.0
    } else {
        worst / nrm
    }
}

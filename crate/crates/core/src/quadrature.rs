//! Gauss-type quadrature rules built from three-term recurrence data.
//!
//! Nodes and weights come from the eigen-decomposition of the symmetric
//! tridiagonal Jacobi matrix (Golub-Welsch). Eigenvalues and first
//! eigenvector components are computed by implicit QL with a Wilkinson shift;
//! each node is then polished by a guarded Newton step on the characteristic
//! recurrence and each weight is re-evaluated from the Christoffel function
//! `1 / sum_k p_k(x)^2`, which keeps tiny weights (Laguerre tails) accurate
//! in the relative sense.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float methods live in core only on newer toolchains
use num_traits::Float;

use crate::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Recurrence data of orthonormal polynomials: `b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCoefficients {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    moment0: f64,
}

impl JacobiCoefficients {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, moment0: f64) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("Jacobi matrix must have at least one row"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(format!(
                "expected {} off-diagonal entries, got {}",
                diag.len() - 1,
                offdiag.len()
            )));
        }
        if !diag.iter().all(|d| d.is_finite()) {
            return Err(Error::invalid("non-finite diagonal entry"));
        }
        if !offdiag.iter().all(|&b| b > 0.0 && b.is_finite()) {
            return Err(Error::invalid("off-diagonal entries must be positive"));
        }
        if !(moment0 > 0.0 && moment0.is_finite()) {
            return Err(Error::invalid("moment0 must be positive and finite"));
        }
        Ok(JacobiCoefficients {
            diag,
            offdiag,
            moment0,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn moment0(&self) -> f64 {
        self.moment0
    }
}

/// Nodes (strictly increasing) and positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::invalid("nodes and weights must be non-empty and equally long"));
        }
        if !nodes.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("non-finite node"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("nodes must be strictly increasing"));
        }
        if !weights.iter().all(|&w| w > 0.0 && w.is_finite()) {
            return Err(Error::invalid("weights must be positive (a weight may have underflowed)"));
        }
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre measure on `[-1, 1]`: `a_k = 0`, `b_k = k / sqrt(4k^2 - 1)`, mass 2.
pub fn legendre_jacobi(n: usize) -> Result<JacobiCoefficients> {
    if n == 0 {
        return Err(Error::invalid("rule size must be at least 1"));
    }
    let offdiag = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    JacobiCoefficients::new(vec![0.0; n], offdiag, 2.0)
}

/// Generalized Laguerre measure `x^alpha e^{-x}` on `[0, inf)`.
pub fn laguerre_jacobi(n: usize, alpha: f64) -> Result<JacobiCoefficients> {
    if n == 0 {
        return Err(Error::invalid("rule size must be at least 1"));
    }
    if !(alpha > -1.0) {
        return Err(Error::invalid(format!("Laguerre parameter must exceed -1, got {alpha}")));
    }
    let diag = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let offdiag = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + alpha)).sqrt()
        })
        .collect();
    let moment0 = libm::lgamma(alpha + 1.0).exp();
    JacobiCoefficients::new(diag, offdiag, moment0)
}

pub fn golub_welsch(jac: &JacobiCoefficients) -> Result<QuadratureRule> {
    let (nodes, weights) = solve_jacobi(jac.diag(), jac.offdiag(), jac.moment0(), None)?;
    QuadratureRule::new(nodes, weights)
}

pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    golub_welsch(&legendre_jacobi(n)?)
}

pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<QuadratureRule> {
    golub_welsch(&laguerre_jacobi(n, alpha)?)
}

/// Gauss-Radau rule with `jac.len()` points, one of them pinned at `endpoint`.
///
/// The last diagonal entry is replaced so that `endpoint` becomes an eigenvalue:
/// `a' = endpoint + b^2 / r`, where `r` is the last pivot of `J - endpoint I`
/// restricted to the leading rows. `endpoint` must lie outside the open
/// support interval for the weights to stay positive.
pub fn gauss_radau(jac: &JacobiCoefficients, endpoint: f64) -> Result<QuadratureRule> {
    if !endpoint.is_finite() {
        return Err(Error::invalid("endpoint must be finite"));
    }
    let n = jac.len();
    let mut diag = jac.diag().to_vec();
    if n == 1 {
        diag[0] = endpoint;
    } else {
        let b = jac.offdiag();
        let mut pivot = diag[0] - endpoint;
        for k in 1..n - 1 {
            pivot = (diag[k] - endpoint) - b[k - 1] * b[k - 1] / pivot;
        }
        diag[n - 1] = endpoint + b[n - 2] * b[n - 2] / pivot;
    }
    let (mut nodes, weights) = solve_jacobi(&diag, jac.offdiag(), jac.moment0(), Some(endpoint))?;
    // snap the pinned node
    let pinned = nodes
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - endpoint).abs().total_cmp(&(b.1 - endpoint).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    nodes[pinned] = endpoint;
    QuadratureRule::new(nodes, weights)
}

/// Radau rule for the Legendre measure with `n_free + 1` points, one at `endpoint`.
pub fn gauss_radau_legendre(n_free: usize, endpoint: f64) -> Result<QuadratureRule> {
    if endpoint.abs() < 1.0 {
        return Err(Error::invalid(format!(
            "Radau endpoint must not lie inside (-1, 1), got {endpoint}"
        )));
    }
    gauss_radau(&legendre_jacobi(n_free + 1)?, endpoint)
}

/// Radau rule for the Legendre measure with the fixed node at `x = 1`.
pub fn gauss_radau_right(n_free: usize) -> Result<QuadratureRule> {
    gauss_radau_legendre(n_free, 1.0)
}

fn solve_jacobi(
    diag: &[f64],
    offdiag: &[f64],
    moment0: f64,
    pinned: Option<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eig: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let ql_weights: Vec<f64> = order.iter().map(|&i| moment0 * z[i] * z[i]).collect();

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (j, &x0) in eig.iter().enumerate() {
        let lo = if j > 0 { eig[j - 1] } else { f64::NEG_INFINITY };
        let hi = if j + 1 < n { eig[j + 1] } else { f64::INFINITY };
        let x = match pinned {
            Some(p) if (x0 - p).abs() <= 1e-8 * (1.0 + p.abs()) => p,
            _ => newton_polish(diag, offdiag, x0, lo, hi),
        };
        let w = christoffel_weight(diag, offdiag, moment0, x);
        nodes.push(x);
        weights.push(if w.is_finite() && w > 0.0 { w } else { ql_weights[j] });
    }
    Ok((nodes, weights))
}

/// Implicit QL with Wilkinson shift on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` couples rows `i` and `i + 1` (`e[n-1]` is
/// scratch). `z` is the first row of the accumulated eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= f64::EPSILON * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_QL_SWEEPS {
                return Err(Error::NoConvergence { iterations: iter });
            }
            iter += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated_early = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                let r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                let g2 = d[i + 1] - p;
                let r2 = (d[i] - g2) * s + 2.0 * c * b;
                p = s * r2;
                d[i + 1] = g2 + p;
                g = c * r2 - b;

                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Characteristic polynomial (up to a positive factor) and its derivative,
/// rescaled whenever the recurrence grows large.
fn char_poly(diag: &[f64], offdiag: &[f64], x: f64) -> (f64, f64) {
    let n = diag.len();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut dp_prev, mut dp) = (0.0, 0.0);
    for k in 0..n {
        let b_k = if k > 0 { offdiag[k - 1] } else { 0.0 };
        let b_next = if k + 1 < n { offdiag[k] } else { 1.0 };
        let p_next = ((x - diag[k]) * p - b_k * p_prev) / b_next;
        let dp_next = (p + (x - diag[k]) * dp - b_k * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        let big = p.abs().max(dp.abs());
        if big > 1e150 {
            p /= big;
            dp /= big;
            p_prev /= big;
            dp_prev /= big;
        }
    }
    (p, dp)
}

fn newton_polish(diag: &[f64], offdiag: &[f64], x0: f64, lo: f64, hi: f64) -> f64 {
    let mut x = x0;
    for _ in 0..4 {
        let (p, dp) = char_poly(diag, offdiag, x);
        if dp == 0.0 || !dp.is_finite() || !p.is_finite() {
            break;
        }
        let step = p / dp;
        let next = x - step;
        // stay strictly between the neighbouring eigenvalues
        if !(next > lo && next < hi) || step.abs() > 1e-6 * (1.0 + x0.abs()) {
            break;
        }
        x = next;
        if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

/// `moment0 / sum_{k<n} p_k(x)^2` with `p_0 = 1`.
fn christoffel_weight(diag: &[f64], offdiag: &[f64], moment0: f64, x: f64) -> f64 {
    let n = diag.len();
    let (mut p_prev, mut p) = (0.0_f64, 1.0_f64);
    let mut sum = 1.0_f64;
    // value of sum is sum_true * 2^(-2 * shift)
    let mut shift = 0_i32;
    for k in 0..n - 1 {
        let b_k = if k > 0 { offdiag[k - 1] } else { 0.0 };
        let p_next = ((x - diag[k]) * p - b_k * p_prev) / offdiag[k];
        p_prev = p;
        p = p_next;
        sum += p * p;
        if p.abs() > 1e100 {
            let s = libm::ldexp(1.0, -300);
            p *= s;
            p_prev *= s;
            sum *= s * s;
            shift += 300;
        }
    }
    libm::ldexp(moment0 / sum, -2 * shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn legendre_coefficients() {
        let j = legendre_jacobi(1).unwrap();
        assert_eq!(j.diag(), &[0.0]);
        assert_eq!(j.moment0(), 2.0);
        let j = legendre_jacobi(2).unwrap();
        assert!(close(j.offdiag()[0], 0.5773502691896258, 1e-15));
        let j = legendre_jacobi(3).unwrap();
        assert!(close(j.offdiag()[0], 0.5773502691896258, 1e-15));
        assert!(close(j.offdiag()[1], 0.5163977794943222, 1e-15));
        assert!(legendre_jacobi(0).is_err());
    }

    #[test]
    fn laguerre_coefficients() {
        let j = laguerre_jacobi(1, 0.0).unwrap();
        assert_eq!(j.diag(), &[1.0]);
        assert!(close(j.moment0(), 1.0, 1e-15));
        let j = laguerre_jacobi(2, 0.0).unwrap();
        assert_eq!(j.diag(), &[1.0, 3.0]);
        assert!(close(j.offdiag()[0], 1.0, 1e-15));
        let j = laguerre_jacobi(1, -0.5).unwrap();
        assert_eq!(j.diag(), &[0.5]);
        assert!(close(j.moment0(), core::f64::consts::PI.sqrt(), 1e-14));
        assert!(matches!(laguerre_jacobi(3, -1.0), Err(Error::InvalidArgument(_))));
        assert!(laguerre_jacobi(3, -1.5).is_err());
    }

    #[test]
    fn small_rules() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!(close(r.weights()[0], 2.0, 1e-15));

        let r = gauss_legendre(2).unwrap();
        assert!(close(r.nodes()[0], -0.5773502691896257, 1e-15));
        assert!(close(r.nodes()[1], 0.5773502691896257, 1e-15));
        assert!(close(r.weights()[0], 1.0, 1e-15));
        assert!(close(r.weights()[1], 1.0, 1e-15));

        let r = gauss_laguerre(1, 0.0).unwrap();
        assert!(close(r.nodes()[0], 1.0, 1e-15));
        assert!(close(r.weights()[0], 1.0, 1e-15));
    }

    #[test]
    fn radau_small() {
        let r = gauss_radau_right(0).unwrap();
        assert_eq!(r.nodes(), &[1.0]);
        assert!(close(r.weights()[0], 2.0, 1e-15));

        let r = gauss_radau_right(1).unwrap();
        assert!(close(r.nodes()[0], -1.0 / 3.0, 1e-15));
        assert_eq!(r.nodes()[1], 1.0);
        assert!(close(r.weights()[0], 1.5, 1e-14));
        assert!(close(r.weights()[1], 0.5, 1e-14));

        let r = gauss_radau_right(2).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() <= 1e-13);

        let r = gauss_radau_legendre(3, -1.0).unwrap();
        assert_eq!(r.nodes()[0], -1.0);
        assert!(gauss_radau_legendre(3, 0.5).is_err());
    }

    #[test]
    fn rule_validation() {
        assert!(QuadratureRule::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(QuadratureRule::new(vec![], vec![]).is_err());
        assert!(JacobiCoefficients::new(vec![0.0, 0.0], vec![-1.0], 1.0).is_err());
        assert!(JacobiCoefficients::new(vec![0.0], vec![], 0.0).is_err());
    }

    #[test]
    fn weights_sum_to_mass() {
        for n in [3, 17, 64] {
            let r = gauss_laguerre(n, -0.9).unwrap();
            let m0 = laguerre_jacobi(1, -0.9).unwrap().moment0();
            let s: f64 = r.weights().iter().sum();
            assert!(close(s, m0, 1e-13), "n={n}: {s} vs {m0}");
        }
    }
}

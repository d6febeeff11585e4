//! Jordan-matrix spectral data of discretized Sobolev inner products.
//!
//! A discretized diagonal Sobolev product
//!
//! ```text
//! <p, q>_S = sum_j sum_{r <= k_j} w_{j,r} p^(r)(z_j) conj(q^(r)(z_j))
//! ```
//!
//! is the Euclidean product `(q(Z) w)^H (p(Z) w)` for a block-diagonal Jordan
//! matrix `Z` (one block of size `k_j + 1` per node) and a weight vector `w`
//! carrying `beta_j` in the last slot of each block. Block superdiagonal
//! scalings `alpha_i` and the `beta_j` determine the derivative weights:
//! `w_{j,r} = |beta_j|^2 |prod_{i<=r} alpha_i / r!|^2`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float methods live in core only on newer toolchains
use num_traits::Float;

use crate::linalg::{norm2, Matrix, C64, ONE, ZERO};
use crate::quadrature::QuadratureRule;
use crate::{Error, Result};

/// One Jordan block `z I + N` with superdiagonal scalings.
///
/// `alphas[0]` is `alpha_1`, the entry adjacent to the last diagonal entry;
/// `alphas[k-1]` sits in the first row.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock {
    eigenvalue: C64,
    alphas: Vec<C64>,
}

impl JordanBlock {
    pub fn new(eigenvalue: C64, alphas: Vec<C64>) -> Result<Self> {
        if !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) {
            return Err(Error::invalid("non-finite eigenvalue"));
        }
        if alphas.iter().any(|a| *a == ZERO || !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("Jordan superdiagonal scalings must be nonzero and finite"));
        }
        Ok(JordanBlock { eigenvalue, alphas })
    }

    /// A 1x1 block.
    pub fn scalar(eigenvalue: C64) -> Result<Self> {
        Self::new(eigenvalue, Vec::new())
    }

    pub fn eigenvalue(&self) -> C64 {
        self.eigenvalue
    }

    pub fn alphas(&self) -> &[C64] {
        &self.alphas
    }

    pub fn size(&self) -> usize {
        self.alphas.len() + 1
    }

    /// Entry `(row, row + 1)` of the block.
    #[inline]
    pub fn superdiag(&self, row: usize) -> C64 {
        self.alphas[self.alphas.len() - 1 - row]
    }

    pub fn to_dense(&self) -> Matrix {
        let s = self.size();
        let mut m = Matrix::zeros(s, s);
        for i in 0..s {
            m[(i, i)] = self.eigenvalue;
            if i + 1 < s {
                m[(i, i + 1)] = self.superdiag(i);
            }
        }
        m
    }

    /// `prod_{i<=r} alpha_i / r!` for `r = 0..size`.
    pub fn taylor_scalings(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.size());
        let mut acc = ONE;
        out.push(acc);
        for (r, a) in self.alphas.iter().enumerate() {
            acc = acc * a / (r + 1) as f64;
            out.push(acc);
        }
        out
    }

    /// Last column of `p(J)`: entry `size-1-r` is `(prod alpha_i / r!) p^(r)(z)`.
    pub fn poly_last_column(&self, p: &PolyCoeffs) -> Vec<C64> {
        let s = self.size();
        let derivs = p.derivatives_at(self.eigenvalue, s);
        let scal = self.taylor_scalings();
        let mut col = vec![ZERO; s];
        for r in 0..s {
            col[s - 1 - r] = scal[r] * derivs[r];
        }
        col
    }
}

/// `Z = J_1 (+) J_2 (+) ... (+) J_n` with pairwise distinct eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanOperator {
    blocks: Vec<JordanBlock>,
    offsets: Vec<usize>,
    dim: usize,
}

impl JordanOperator {
    pub fn new(blocks: Vec<JordanBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("Jordan operator needs at least one block"));
        }
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[..i] {
                if a.eigenvalue == b.eigenvalue {
                    return Err(Error::invalid(format!(
                        "duplicate eigenvalue {} across Jordan blocks",
                        a.eigenvalue
                    )));
                }
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.size();
        }
        Ok(JordanOperator {
            blocks,
            offsets,
            dim,
        })
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// Row offset of each block in the dense matrix.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `y = Z x`, blockwise.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::invalid(format!(
                "vector length {} does not match operator dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut y = vec![ZERO; self.dim];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let s = b.size();
            for i in 0..s {
                let mut v = b.eigenvalue * x[off + i];
                if i + 1 < s {
                    v += b.superdiag(i) * x[off + i + 1];
                }
                y[off + i] = v;
            }
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            for i in 0..b.size() {
                m[(off + i, off + i)] = b.eigenvalue;
                if i + 1 < b.size() {
                    m[(off + i, off + i + 1)] = b.superdiag(i);
                }
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                b.size() as f64 * b.eigenvalue.norm_sqr()
                    + b.alphas.iter().map(|a| a.norm_sqr()).sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `Z - c I`.
    pub fn shifted(&self, c: C64) -> JordanOperator {
        let blocks = self
            .blocks
            .iter()
            .map(|b| JordanBlock {
                eigenvalue: b.eigenvalue - c,
                alphas: b.alphas.clone(),
            })
            .collect();
        JordanOperator {
            blocks,
            offsets: self.offsets.clone(),
            dim: self.dim,
        }
    }
}

/// The `beta_j`, one per block.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    betas: Vec<C64>,
}

impl WeightVector {
    pub fn new(betas: Vec<C64>) -> Result<Self> {
        if betas.iter().any(|b| *b == ZERO || !b.re.is_finite() || !b.im.is_finite()) {
            return Err(Error::invalid("weights beta_j must be nonzero and finite"));
        }
        Ok(WeightVector { betas })
    }

    pub fn betas(&self) -> &[C64] {
        &self.betas
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.betas)
    }
}

/// A Jordan operator with its weight vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    operator: JordanOperator,
    weights: WeightVector,
}

impl SpectralData {
    pub fn new(operator: JordanOperator, weights: WeightVector) -> Result<Self> {
        if operator.blocks.len() != weights.betas.len() {
            return Err(Error::invalid(format!(
                "{} blocks but {} weights",
                operator.blocks.len(),
                weights.betas.len()
            )));
        }
        Ok(SpectralData { operator, weights })
    }

    pub fn operator(&self) -> &JordanOperator {
        &self.operator
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.operator.dim
    }

    /// Dense `w`: `beta_j` in the last position of block `j`.
    pub fn dense_weights(&self) -> Vec<C64> {
        let mut w = vec![ZERO; self.operator.dim];
        for ((b, &off), &beta) in self
            .operator
            .blocks
            .iter()
            .zip(&self.operator.offsets)
            .zip(&self.weights.betas)
        {
            w[off + b.size() - 1] = beta;
        }
        w
    }

    /// Same weights, operator replaced by `Z - c I`.
    pub fn shifted(&self, c: C64) -> SpectralData {
        SpectralData {
            operator: self.operator.shifted(c),
            weights: self.weights.clone(),
        }
    }
}

/// Derivative weights at one node, lowest order first.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeTerm {
    pub node: C64,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SobolevProductSpec {
    terms: Vec<NodeTerm>,
}

impl SobolevProductSpec {
    /// Checks sequential dominance and a positive highest-order weight per node.
    pub fn new(terms: Vec<NodeTerm>) -> Result<Self> {
        for t in &terms {
            let Some(&last) = t.weights.last() else {
                return Err(Error::invalid("node without weights"));
            };
            if !(last > 0.0) {
                return Err(Error::invalid("highest-order weight must be positive"));
            }
            if t.weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
                // with a positive top weight, dominance forces every lower weight positive
                return Err(Error::invalid(format!(
                    "inner product at node {} is not sequentially dominated",
                    t.node
                )));
            }
        }
        Ok(SobolevProductSpec { terms })
    }

    pub fn terms(&self) -> &[NodeTerm] {
        &self.terms
    }

    /// Highest derivative order over all nodes.
    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.weights.len() - 1).max().unwrap_or(0)
    }
}

/// Monomial coefficients `c_0 + c_1 z + ... + c_d z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffs(pub Vec<C64>);

impl PolyCoeffs {
    pub fn from_real(c: &[f64]) -> Self {
        PolyCoeffs(c.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> PolyCoeffs {
        PolyCoeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// `[p(z), p'(z), ..., p^(count-1)(z)]`.
    pub fn derivatives_at(&self, z: C64, count: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(count);
        let mut p = self.clone();
        for _ in 0..count {
            out.push(p.eval(z));
            p = p.derivative();
        }
        out
    }

    /// `p(A)` by Horner's scheme on a dense matrix.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.nrows();
        let mut acc = Matrix::zeros(n, n);
        for &c in self.0.iter().rev() {
            acc = &acc * a;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

/// Jordan data for `sum_r gamma_r * integral p^(r) conj(q^(r)) dmu`
/// discretized by `rule`: one block of size `gammas.len()` per node with
/// `alpha_r = r sqrt(gamma_r / gamma_{r-1})` and `beta_j = sqrt(gamma_0 w_j)`.
pub fn build_same_measure(rule: &QuadratureRule, gammas: &[f64]) -> Result<SpectralData> {
    if gammas.is_empty() {
        return Err(Error::invalid("need at least gamma_0"));
    }
    if gammas.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
        return Err(Error::invalid("all gamma_r must be positive"));
    }
    let alphas: Vec<C64> = (1..gammas.len())
        .map(|r| C64::new(r as f64 * (gammas[r] / gammas[r - 1]).sqrt(), 0.0))
        .collect();
    let mut blocks = Vec::with_capacity(rule.len());
    let mut betas = Vec::with_capacity(rule.len());
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        blocks.push(JordanBlock::new(C64::new(x, 0.0), alphas.clone())?);
        betas.push(C64::new((gammas[0] * w).sqrt(), 0.0));
    }
    SpectralData::new(JordanOperator::new(blocks)?, WeightVector::new(betas)?)
}

/// `integral p q dmu + M p(c) q(c) + N p'(c) q'(c)`: a 2x2 block at `c`
/// followed by one scalar block per quadrature node.
pub fn build_discrete_laguerre_sobolev(
    rule: &QuadratureRule,
    c: f64,
    m: f64,
    n: f64,
) -> Result<SpectralData> {
    if !(m > 0.0 && n > 0.0) {
        return Err(Error::invalid("M and N must be positive"));
    }
    if rule.nodes().contains(&c) {
        return Err(Error::invalid(format!("point mass location {c} coincides with a quadrature node")));
    }
    let mut blocks = vec![JordanBlock::new(C64::new(c, 0.0), vec![C64::new((n / m).sqrt(), 0.0)])?];
    let mut betas = vec![C64::new(m.sqrt(), 0.0)];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        blocks.push(JordanBlock::scalar(C64::new(x, 0.0))?);
        betas.push(C64::new(w.sqrt(), 0.0));
    }
    SpectralData::new(JordanOperator::new(blocks)?, WeightVector::new(betas)?)
}

/// `integral p q dmu + gamma p'(a) q'(a)` with a Radau rule pinned at `a`:
/// a 2x2 block at the endpoint with superdiagonal `sqrt(gamma) / beta_0`.
pub fn build_radau_endpoint(rule: &QuadratureRule, gamma: f64, endpoint: f64) -> Result<SpectralData> {
    if !(gamma > 0.0) {
        return Err(Error::invalid("gamma must be positive"));
    }
    let tol = 1e-14 * (1.0 + endpoint.abs());
    let Some(pos) = rule.nodes().iter().position(|&x| (x - endpoint).abs() <= tol) else {
        return Err(Error::invalid(format!("endpoint {endpoint} is not a node of the rule")));
    };
    let beta0 = rule.weights()[pos].sqrt();
    let mut blocks = vec![JordanBlock::new(
        C64::new(endpoint, 0.0),
        vec![C64::new(gamma.sqrt() / beta0, 0.0)],
    )?];
    let mut betas = vec![C64::new(beta0, 0.0)];
    for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        if j != pos {
            blocks.push(JordanBlock::scalar(C64::new(x, 0.0))?);
            betas.push(C64::new(w.sqrt(), 0.0));
        }
    }
    SpectralData::new(JordanOperator::new(blocks)?, WeightVector::new(betas)?)
}

/// Reads the derivative weights `|beta_j|^2 |prod alpha_i / r!|^2` off `(Z, w)`.
pub fn spec_of(data: &SpectralData) -> SobolevProductSpec {
    let terms = data
        .operator
        .blocks
        .iter()
        .zip(&data.weights.betas)
        .map(|(b, beta)| NodeTerm {
            node: b.eigenvalue,
            weights: b
                .taylor_scalings()
                .iter()
                .map(|s| beta.norm_sqr() * s.norm_sqr())
                .collect(),
        })
        .collect();
    SobolevProductSpec { terms }
}

/// `sum_j sum_r w_{j,r} conj(q^(r)(z_j)) p^(r)(z_j)`, derivatives taken exactly.
pub fn inner_product_direct(p: &PolyCoeffs, q: &PolyCoeffs, spec: &SobolevProductSpec) -> C64 {
    let mut acc = ZERO;
    for t in &spec.terms {
        let dp = p.derivatives_at(t.node, t.weights.len());
        let dq = q.derivatives_at(t.node, t.weights.len());
        for ((w, a), b) in t.weights.iter().zip(&dp).zip(&dq) {
            acc += b.conj() * a * *w;
        }
    }
    acc
}

/// `Z x` computed blockwise.
pub fn jordan_matvec(z: &JordanOperator, x: &[C64]) -> Result<Vec<C64>> {
    z.apply(x)
}

pub fn jordan_poly_column(block: &JordanBlock, p: &PolyCoeffs) -> Vec<C64> {
    block.poly_last_column(p)
}

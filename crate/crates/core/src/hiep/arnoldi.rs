use alloc::vec::Vec;

use super::{HessenbergMatrix, TraceEvent, BREAKDOWN_TOL};
use crate::jordan::SpectralData;
use crate::linalg::{dot, norm2, orthogonality_defect, Matrix, C64, ZERO};
use crate::{Error, Result};

/// Output of [`arnoldi`]: `Z Q = Q H + h_next q_next e_k^T`.
#[derive(Clone, Debug)]
pub struct ArnoldiResult {
    /// `m x k` orthonormal basis.
    pub q: Matrix,
    pub h: HessenbergMatrix,
    pub h_next: f64,
    /// `None` on breakdown.
    pub q_next: Option<Vec<C64>>,
    /// Step (1-based) at which the residual fell below the breakdown threshold.
    pub breakdown_at: Option<usize>,
}

/// `k` steps of the Arnoldi iteration on `(Z, w)`.
///
/// Each step runs modified Gram-Schmidt followed by one full
/// reorthogonalization sweep. A residual `h_{l+1,l} <= 1e-13 ||Z||_F`
/// stops the iteration and returns the `l`-step basis.
pub fn arnoldi(data: &SpectralData, k: usize) -> Result<ArnoldiResult> {
    arnoldi_traced(data, k, &mut |_| {})
}

pub fn arnoldi_traced(
    data: &SpectralData,
    k: usize,
    trace: &mut dyn FnMut(&TraceEvent),
) -> Result<ArnoldiResult> {
    let m = data.dim();
    if k == 0 || k > m {
        return Err(Error::invalid(alloc::format!(
            "Arnoldi steps must lie in 1..={m}, got {k}"
        )));
    }
    let z = data.operator();
    let tol = BREAKDOWN_TOL * z.frobenius_norm();

    let w = data.dense_weights();
    let wn = norm2(&w);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k + 1);
    basis.push(w.iter().map(|x| x / wn).collect());
    let mut h = Matrix::zeros(k, k);
    let mut v = alloc::vec![ZERO; m];

    for l in 0..k {
        z.apply_into(&basis[l], &mut v);
        let mut coeffs = alloc::vec![ZERO; l + 1];
        for (j, q) in basis.iter().enumerate() {
            let c = dot(q, &v);
            axpy(&mut v, -c, q);
            coeffs[j] = c;
        }
        let mut correction = 0.0_f64;
        for (j, q) in basis.iter().enumerate() {
            let c = dot(q, &v);
            axpy(&mut v, -c, q);
            coeffs[j] += c;
            correction = correction.max(c.norm());
        }
        for (j, c) in coeffs.into_iter().enumerate() {
            h[(j, l)] = c;
        }
        let hn = norm2(&v);
        trace(&TraceEvent::ArnoldiStep {
            step: l + 1,
            subdiagonal: hn,
            reorthogonalization: correction,
        });

        if hn <= tol {
            let steps = l + 1;
            let q = Matrix::from_columns(m, &basis);
            check_orthogonality(&q)?;
            return Ok(ArnoldiResult {
                q,
                h: HessenbergMatrix::new_unchecked(h.leading(steps)),
                h_next: hn,
                q_next: None,
                breakdown_at: Some(steps),
            });
        }
        let next: Vec<C64> = v.iter().map(|x| x / hn).collect();
        if l + 1 < k {
            h[(l + 1, l)] = C64::new(hn, 0.0);
            basis.push(next);
        } else {
            let q = Matrix::from_columns(m, &basis);
            check_orthogonality(&q)?;
            return Ok(ArnoldiResult {
                q,
                h: HessenbergMatrix::new_unchecked(h),
                h_next: hn,
                q_next: Some(next),
                breakdown_at: None,
            });
        }
    }
    unreachable!("loop returns on its last step")
}

#[inline]
fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn check_orthogonality(q: &Matrix) -> Result<()> {
    let defect = orthogonality_defect(q);
    if defect > 1e-8 {
        return Err(Error::NumericalFailure {
            what: "Arnoldi orthogonality",
            residual: defect,
            tolerance: 1e-8,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{JordanBlock, JordanOperator, WeightVector};
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn scalar_case() {
        let op = JordanOperator::new(vec![JordanBlock::scalar(c(2.0)).unwrap()]).unwrap();
        let d = SpectralData::new(op, WeightVector::new(vec![c(3.0)]).unwrap()).unwrap();
        let r = arnoldi(&d, 1).unwrap();
        assert_eq!(r.q, Matrix::from_real_rows(&[&[1.0]]));
        assert_eq!(r.h.as_matrix(), &Matrix::from_real_rows(&[&[2.0]]));
        assert_eq!(r.h_next, 0.0);
        assert_eq!(r.breakdown_at, Some(1));
    }

    #[test]
    fn nilpotent_block() {
        let op = JordanOperator::new(vec![JordanBlock::new(c(0.0), vec![c(1.0)]).unwrap()]).unwrap();
        let d = SpectralData::new(op, WeightVector::new(vec![c(1.0)]).unwrap()).unwrap();
        let r = arnoldi(&d, 2).unwrap();
        assert_eq!(r.q, Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(r.h.as_matrix(), &Matrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(r.breakdown_at, Some(2));
        assert!(r.q_next.is_none());
    }

    #[test]
    fn rejects_bad_step_count() {
        let op = JordanOperator::new(vec![JordanBlock::scalar(c(2.0)).unwrap()]).unwrap();
        let d = SpectralData::new(op, WeightVector::new(vec![c(3.0)]).unwrap()).unwrap();
        assert!(matches!(arnoldi(&d, 2), Err(Error::InvalidArgument(_))));
        assert!(arnoldi(&d, 0).is_err());
    }

    #[test]
    fn partial_run_keeps_next_vector() {
        let blocks = (0..4).map(|i| JordanBlock::scalar(c(i as f64)).unwrap()).collect();
        let d = SpectralData::new(
            JordanOperator::new(blocks).unwrap(),
            WeightVector::new(vec![c(1.0); 4]).unwrap(),
        )
        .unwrap();
        let r = arnoldi(&d, 2).unwrap();
        assert_eq!(r.q.ncols(), 2);
        assert!(r.h_next > 0.1);
        let qn = r.q_next.unwrap();
        assert!((norm2(&qn) - 1.0).abs() < 1e-14);
        assert!(dot(r.q.col(0), &qn).norm() < 1e-14);
    }
}

//! Eigenvalues of complex upper Hessenberg matrices (roots of the SOPs).
//!
//! Single-shift complex QR with Wilkinson shifts, bulge chasing by plane
//! rotations restricted to the active window, and an exceptional shift
//! every tenth sweep without deflation.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::hiep::{HessenbergMatrix, PlaneRotation};
use crate::linalg::{Matrix, C64, ZERO};
use crate::{Error, Result};

/// Eigenvalues sorted by ascending real part, then ascending imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<C64>,
}

impl Spectrum {
    fn from_unsorted(mut eigenvalues: Vec<C64>) -> Self {
        eigenvalues.sort_by(|a, b| {
            a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
        });
        Spectrum { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Smallest real part; ties broken by smallest `|imag|`.
    pub fn smallest(&self) -> Option<C64> {
        self.eigenvalues.iter().copied().min_by(|a, b| {
            match a.re.total_cmp(&b.re) {
                Ordering::Equal => a.im.abs().total_cmp(&b.im.abs()),
                o => o,
            }
        })
    }
}

pub fn hessenberg_eigenvalues(h: &HessenbergMatrix) -> Result<Spectrum> {
    let m = h.as_matrix();
    if !m.is_square() {
        return Err(Error::invalid("eigenvalues need a square matrix"));
    }
    let tol = 1e-13 * m.frobenius_norm();
    if m.below_subdiagonal_max() > tol {
        return Err(Error::invalid("matrix is not upper Hessenberg"));
    }
    Ok(Spectrum::from_unsorted(qr_eigenvalues(m.clone())?))
}

/// Eigenvalue of the leading `k x k` block with the smallest real part.
pub fn smallest_root(h: &HessenbergMatrix, k: usize) -> Result<C64> {
    if k == 0 || k > h.dim() {
        return Err(Error::invalid(alloc::format!(
            "degree {k} outside 1..={}",
            h.dim()
        )));
    }
    let spec = hessenberg_eigenvalues(&h.leading(k))?;
    Ok(spec.smallest().expect("k >= 1"))
}

fn qr_eigenvalues(mut a: Matrix) -> Result<Vec<C64>> {
    let n = a.nrows();
    let mut eigs = vec![ZERO; n];
    if n == 0 {
        return Ok(eigs);
    }
    let fallback = f64::EPSILON * a.frobenius_norm();
    let max_its = 30 * n.max(10);
    let mut hi = n - 1;
    let mut its = 0;
    loop {
        if hi == 0 {
            eigs[0] = a[(0, 0)];
            break;
        }
        // look for a negligible subdiagonal entry
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = a[(k, k - 1)].norm();
            let mut tst = a[(k - 1, k - 1)].norm() + a[(k, k)].norm();
            if tst == 0.0 {
                tst = fallback / f64::EPSILON;
            }
            if sub <= f64::EPSILON * tst {
                a[(k, k - 1)] = ZERO;
                lo = k;
                break;
            }
        }
        if lo == hi {
            eigs[hi] = a[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        if its > max_its {
            return Err(Error::NoConvergence { iterations: its });
        }

        let shift = if its % 10 == 0 {
            let mut s = a[(hi, hi - 1)].re.abs();
            if hi >= 2 {
                s += a[(hi - 1, hi - 2)].re.abs();
            }
            a[(hi, hi)] + C64::new(0.75 * s, 0.0)
        } else {
            wilkinson(a[(hi - 1, hi - 1)], a[(hi - 1, hi)], a[(hi, hi - 1)], a[(hi, hi)])
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (a[(lo, lo)] - shift, a[(lo + 1, lo)])
            } else {
                (a[(k, k - 1)], a[(k + 1, k - 1)])
            };
            let (rot, _) = PlaneRotation::zeroing(x, y, k, k + 1);
            let first_col = if k > lo { k - 1 } else { lo };
            rot.apply_left(&mut a, first_col..hi + 1);
            if k > lo {
                a[(k + 1, k - 1)] = ZERO;
            }
            rot.apply_right_adjoint(&mut a, lo..(k + 3).min(hi + 1));
        }
    }
    Ok(eigs)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(rows: &[&[f64]]) -> HessenbergMatrix {
        HessenbergMatrix::new(Matrix::from_real_rows(rows)).unwrap()
    }

    #[test]
    fn nilpotent() {
        let s = hessenberg_eigenvalues(&h(&[&[0.0, 0.0], &[1.0, 0.0]])).unwrap();
        for e in s.eigenvalues() {
            assert!(e.norm() < 1e-15);
        }
    }

    #[test]
    fn triangular_gives_diagonal() {
        let s = hessenberg_eigenvalues(&h(&[&[3.0, 1.0, 2.0], &[0.0, -1.0, 5.0], &[0.0, 0.0, 0.5]])).unwrap();
        let want = [-1.0, 0.5, 3.0];
        for (e, w) in s.eigenvalues().iter().zip(want) {
            assert!((e - C64::new(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_matrix_has_complex_pair() {
        let s = hessenberg_eigenvalues(&h(&[&[0.0, -1.0], &[1.0, 0.0]])).unwrap();
        assert!((s.eigenvalues()[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((s.eigenvalues()[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(s.smallest().unwrap().im.abs(), s.eigenvalues()[0].im.abs());
    }

    #[test]
    fn rejects_non_hessenberg() {
        let m = Matrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]]);
        assert!(HessenbergMatrix::new(m).is_err());
    }

    #[test]
    fn smallest_root_bounds() {
        let m = h(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!((smallest_root(&m, 1).unwrap() - C64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((smallest_root(&m, 2).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(smallest_root(&m, 3).is_err());
        assert!(smallest_root(&m, 0).is_err());
    }
}

//! Hessenberg inverse eigenvalue problem: given `(Z, w)`, find unitary `Q`
//! and upper Hessenberg `H` with `Q^H Z Q = H`, `Q e_1 = w / ||w||` and a
//! real non-negative subdiagonal.

mod arnoldi;
mod transform;
mod update;

pub use arnoldi::{arnoldi, arnoldi_traced, ArnoldiResult};
pub use transform::{Householder, PlaneRotation};
pub use update::{update_solve, update_solve_traced, RestoreStrategy};

use crate::jordan::SpectralData;
use crate::linalg::{norm2, orthogonality_defect, Matrix, C64};
use crate::{Error, Result};

/// Relative threshold (times `||Z||_F`) below which `h_{l+1,l}` counts as a breakdown.
pub const BREAKDOWN_TOL: f64 = 1e-13;

/// Square or rectangular upper Hessenberg matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergMatrix(Matrix);

impl HessenbergMatrix {
    /// Wraps `m`, rejecting entries below the subdiagonal larger than
    /// `1e-13 ||m||_F`.
    pub fn new(m: Matrix) -> Result<Self> {
        let tol = 1e-13 * m.frobenius_norm();
        let worst = m.below_subdiagonal_max();
        if worst > tol {
            return Err(Error::NumericalFailure {
                what: "Hessenberg structure",
                residual: worst,
                tolerance: tol,
            });
        }
        Ok(HessenbergMatrix(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        HessenbergMatrix(m)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.ncols()
    }

    /// `h_{j+1,j}` (0-based `j`).
    pub fn subdiag(&self, j: usize) -> C64 {
        self.0[(j + 1, j)]
    }

    /// Leading `k x k` principal submatrix.
    pub fn leading(&self, k: usize) -> HessenbergMatrix {
        HessenbergMatrix(self.0.leading(k))
    }
}

impl core::ops::Index<(usize, usize)> for HessenbergMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Full solution of the inverse problem.
#[derive(Clone, Debug)]
pub struct HiepSolution {
    pub h: HessenbergMatrix,
    pub q: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Arnoldi,
    UpdateHouseholder,
    UpdateRotations,
}

/// Step-by-step progress reported to an optional observer.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    ArnoldiStep {
        step: usize,
        subdiagonal: f64,
        reorthogonalization: f64,
    },
    BlockMerged {
        block: usize,
        dim: usize,
        rotation_a: f64,
        rotation_b: f64,
    },
    ColumnRestored {
        block: usize,
        column: usize,
        bulge_len: usize,
        eliminated_norm: f64,
    },
}

/// Solves the full `m x m` problem with the chosen method.
pub fn solve(data: &SpectralData, solver: Solver) -> Result<HiepSolution> {
    solve_traced(data, solver, &mut |_| {})
}

pub fn solve_traced(
    data: &SpectralData,
    solver: Solver,
    trace: &mut dyn FnMut(&TraceEvent),
) -> Result<HiepSolution> {
    match solver {
        Solver::Arnoldi => {
            let r = arnoldi_traced(data, data.dim(), trace)?;
            Ok(HiepSolution { h: r.h, q: r.q })
        }
        Solver::UpdateHouseholder => update_solve_traced(data, RestoreStrategy::Householder, trace),
        Solver::UpdateRotations => update_solve_traced(data, RestoreStrategy::Rotations, trace),
    }
}

/// Residuals of a computed solution against `(Z, w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// `||Q^H Q - I||_F`
    pub orthogonality: f64,
    /// `||Q^H Z Q - H||_F`
    pub similarity: f64,
    /// `||Q e_1 - w / ||w|| ||_2`
    pub first_column: f64,
    /// Smallest real part over the subdiagonal.
    pub min_subdiag_re: f64,
    /// Largest imaginary magnitude over the subdiagonal.
    pub max_subdiag_im: f64,
    pub z_norm: f64,
}

impl Diagnostics {
    /// Thresholds every solver output must satisfy.
    pub fn within_contract(&self, m: usize) -> bool {
        self.orthogonality <= 1e-12 * m as f64
            && self.similarity <= 1e-11 * self.z_norm
            && self.first_column <= 1e-13
            && self.min_subdiag_re >= 0.0
            && self.max_subdiag_im == 0.0
    }
}

/// Works for square `Q` (full solutions) and rectangular `Q` (partial Arnoldi runs
/// checked with `h_next` folded in by the caller).
pub fn diagnostics(data: &SpectralData, h: &HessenbergMatrix, q: &Matrix) -> Diagnostics {
    let z = data.operator();
    let k = q.ncols();
    let mut zq = Matrix::zeros(q.nrows(), k);
    for j in 0..k {
        z.apply_into(q.col(j), zq.col_mut(j));
    }
    let qzq = &q.adjoint() * &zq;
    let similarity = (&qzq - h.as_matrix()).frobenius_norm();

    let w = data.dense_weights();
    let wn = norm2(&w);
    let first_column = norm2(
        &q.col(0)
            .iter()
            .zip(&w)
            .map(|(a, b)| a - b / wn)
            .collect::<alloc::vec::Vec<_>>(),
    );
    let mut min_re = f64::INFINITY;
    let mut max_im = 0.0_f64;
    for j in 0..h.dim().saturating_sub(1) {
        let s = h.subdiag(j);
        min_re = min_re.min(s.re);
        max_im = max_im.max(s.im.abs());
    }
    Diagnostics {
        orthogonality: orthogonality_defect(q),
        similarity,
        first_column,
        min_subdiag_re: if min_re.is_finite() { min_re } else { 0.0 },
        max_subdiag_im: max_im,
        z_norm: z.frobenius_norm(),
    }
}

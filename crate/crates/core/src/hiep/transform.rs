//! Unitary building blocks: plane rotations and Householder reflectors.

use alloc::vec::Vec;
use core::ops::Range;

use crate::linalg::{norm2, Matrix, C64, ZERO};
use crate::{Error, Result};

/// The 2x2 unitary `[[conj(a), -conj(b)], [b, a]]` acting on coordinates `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneRotation {
    a: C64,
    b: C64,
    i: usize,
    j: usize,
}

impl PlaneRotation {
    pub fn new(a: C64, b: C64, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::invalid("plane rotation needs two distinct coordinates"));
        }
        let s = a.norm_sqr() + b.norm_sqr();
        if (s - 1.0).abs() > 1e-14 {
            return Err(Error::invalid("plane rotation parameters must satisfy |a|^2 + |b|^2 = 1"));
        }
        Ok(PlaneRotation { a, b, i, j })
    }

    /// Rotation mapping `(x, y)` on `(i, j)` to `(rho, 0)`, `rho = ||(x, y)|| >= 0`.
    pub fn zeroing(x: C64, y: C64, i: usize, j: usize) -> (Self, f64) {
        let rho = libm::hypot(x.norm(), y.norm());
        let rot = if rho == 0.0 {
            PlaneRotation {
                a: C64::new(1.0, 0.0),
                b: ZERO,
                i,
                j,
            }
        } else {
            PlaneRotation {
                a: x / rho,
                b: -y / rho,
                i,
                j,
            }
        };
        (rot, rho)
    }

    pub fn params(&self) -> (C64, C64) {
        (self.a, self.b)
    }

    pub fn coords(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    #[inline]
    fn act(&self, x: C64, y: C64) -> (C64, C64) {
        (self.a.conj() * x - self.b.conj() * y, self.b * x + self.a * y)
    }

    pub fn apply_vec(&self, v: &mut [C64]) {
        let (x, y) = self.act(v[self.i], v[self.j]);
        v[self.i] = x;
        v[self.j] = y;
    }

    /// `M <- P M` restricted to the given columns.
    pub fn apply_left(&self, m: &mut Matrix, cols: Range<usize>) {
        for c in cols {
            let (x, y) = self.act(m[(self.i, c)], m[(self.j, c)]);
            m[(self.i, c)] = x;
            m[(self.j, c)] = y;
        }
    }

    /// `M <- M P^H` restricted to the given rows.
    pub fn apply_right_adjoint(&self, m: &mut Matrix, rows: Range<usize>) {
        let (a, b) = (self.a, self.b);
        for r in rows {
            let x = m[(r, self.i)];
            let y = m[(r, self.j)];
            m[(r, self.i)] = a * x - b * y;
            m[(r, self.j)] = b.conj() * x + a.conj() * y;
        }
    }

    pub fn to_dense(&self, dim: usize) -> Matrix {
        let mut p = Matrix::identity(dim);
        p[(self.i, self.i)] = self.a.conj();
        p[(self.i, self.j)] = -self.b.conj();
        p[(self.j, self.i)] = self.b;
        p[(self.j, self.j)] = self.a;
        p
    }
}

/// `R = I - tau y y^H` with `y = c + alpha e_1`, so that `R c = -alpha e_1`.
///
/// `alpha = ||c|| e^{i arg c_1}` avoids cancellation in `y_1`. The reflector
/// acts on the listed coordinates of a larger space.
#[derive(Clone, Debug, PartialEq)]
pub struct Householder {
    y: Vec<C64>,
    tau: f64,
    alpha: C64,
    indices: Vec<usize>,
}

impl Householder {
    pub fn from_vector(c: &[C64]) -> Result<Self> {
        Self::embedded(c, (0..c.len()).collect())
    }

    pub fn embedded(c: &[C64], indices: Vec<usize>) -> Result<Self> {
        if c.len() != indices.len() {
            return Err(Error::invalid("index list length mismatch"));
        }
        let nrm = norm2(c);
        if nrm == 0.0 {
            return Err(Error::invalid("cannot build a reflector from the zero vector"));
        }
        let phase = if c[0] == ZERO {
            C64::new(1.0, 0.0)
        } else {
            c[0] / c[0].norm()
        };
        let alpha = phase * nrm;
        let mut y = c.to_vec();
        y[0] += alpha;
        let yy: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        Ok(Householder {
            y,
            tau: 2.0 / yy,
            alpha,
            indices,
        })
    }

    /// `R c = -alpha e_1`.
    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Applies `R` to a vector in the reflector's own coordinates.
    pub fn apply_local(&self, x: &mut [C64]) {
        let s: C64 = self.y.iter().zip(x.iter()).map(|(y, v)| y.conj() * v).sum::<C64>() * self.tau;
        for (v, y) in x.iter_mut().zip(&self.y) {
            *v -= s * y;
        }
    }

    /// `M <- R M` restricted to the given columns.
    pub fn apply_left(&self, m: &mut Matrix, cols: Range<usize>) {
        for c in cols {
            let mut s = ZERO;
            for (y, &r) in self.y.iter().zip(&self.indices) {
                s += y.conj() * m[(r, c)];
            }
            if s == ZERO {
                continue;
            }
            s *= self.tau;
            for (y, &r) in self.y.iter().zip(&self.indices) {
                m[(r, c)] -= s * y;
            }
        }
    }

    /// `M <- M R` restricted to the given rows (`R` is Hermitian).
    pub fn apply_right(&self, m: &mut Matrix, rows: Range<usize>) {
        for r in rows {
            let mut s = ZERO;
            for (y, &c) in self.y.iter().zip(&self.indices) {
                s += m[(r, c)] * y;
            }
            if s == ZERO {
                continue;
            }
            s *= self.tau;
            for (y, &c) in self.y.iter().zip(&self.indices) {
                m[(r, c)] -= s * y.conj();
            }
        }
    }

    pub fn to_dense(&self, dim: usize) -> Matrix {
        let mut out = Matrix::identity(dim);
        for (yi, &ri) in self.y.iter().zip(&self.indices) {
            for (yj, &rj) in self.y.iter().zip(&self.indices) {
                out[(ri, rj)] -= yi * yj.conj() * self.tau;
            }
        }
        out
    }
}

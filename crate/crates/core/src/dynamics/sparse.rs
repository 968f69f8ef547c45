//! Coordinate-list operator used inside the integrator. The Hamiltonians and
//! jump operators here have a handful of nonzeros per row, so sparse × dense
//! products are much cheaper than dense ones.

use crate::scalar::{CMatrix, Cx, Real};

#[derive(Clone, Debug)]
pub(crate) struct SparseOp<T: Real> {
    dim: usize,
    entries: Vec<(usize, usize, Cx<T>)>,
}

impl<T: Real> SparseOp<T> {
    pub fn from_dense(m: &CMatrix<T>) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v.norm_sqr() > T::zero() {
                    entries.push((i, j, v));
                }
            }
        }
        Self { dim: m.nrows(), entries }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect(),
        }
    }

    /// `out += c · S · x`
    pub fn left_acc(&self, c: Cx<T>, x: &CMatrix<T>, out: &mut CMatrix<T>) {
        let n = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for &(i, k, v) in &self.entries {
            let cv = c * v;
            for col in 0..n {
                os[i + col * n] += cv * xs[k + col * n];
            }
        }
    }

    /// `out += c · x · S`
    pub fn right_acc(&self, c: Cx<T>, x: &CMatrix<T>, out: &mut CMatrix<T>) {
        let n = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for &(k, j, v) in &self.entries {
            let cv = c * v;
            let (src, dst) = (&xs[k * n..(k + 1) * n], &mut os[j * n..(j + 1) * n]);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += cv * *s;
            }
        }
    }
}

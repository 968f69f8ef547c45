use crate::error::{Error, Result};
use crate::hilbert::{Operator, SpaceLayout};
use crate::scalar::{re, CMatrix, CVector, Real};

/// Ordered subset of the computational basis of a layout, on which the
/// dynamics is simulated. The whole space is the trivial case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    layout: SpaceLayout,
    indices: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Subspace {
    pub fn full(layout: &SpaceLayout) -> Self {
        let n = layout.total_dim();
        Self {
            layout: layout.clone(),
            indices: (0..n).collect(),
            position: (0..n).map(Some).collect(),
        }
    }

    /// Basis states with total excitation `a†a + Σ_j |1⟩_j⟨1|` at most
    /// `max_excitation`. The Raman Hamiltonian conserves the excitation and
    /// every collapse channel lowers or keeps it, so this block is invariant.
    pub fn excitation(layout: &SpaceLayout, max_excitation: usize) -> Self {
        let indices: Vec<usize> = (0..layout.total_dim())
            .filter(|&i| layout.excitation(i) <= max_excitation)
            .collect();
        let mut position = vec![None; layout.total_dim()];
        for (k, &i) in indices.iter().enumerate() {
            position[i] = Some(k);
        }
        Self { layout: layout.clone(), indices, position }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.layout.total_dim()
    }

    /// Full-space index of each subspace basis state.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Subspace position of a full-space basis index.
    pub fn position(&self, full_index: usize) -> Option<usize> {
        self.position.get(full_index).copied().flatten()
    }

    /// Projector onto the subspace, as a full-space operator.
    pub fn projector<T: Real>(&self) -> Operator<T> {
        let n = self.layout.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for &i in &self.indices {
            m[(i, i)] = re(T::one());
        }
        Operator::new(self.layout.clone(), m).expect("layout dimension")
    }

    /// `P A P` expressed in subspace coordinates.
    pub fn project<T: Real>(&self, op: &Operator<T>) -> Result<CMatrix<T>> {
        if op.layout() != &self.layout {
            return Err(Error::Layout(format!(
                "operator on {} projected onto a subspace of {}",
                op.layout(),
                self.layout
            )));
        }
        let m = op.matrix();
        Ok(CMatrix::from_fn(self.dim(), self.dim(), |i, j| m[(self.indices[i], self.indices[j])]))
    }

    /// Restricts a full-space vector; fails if it has weight outside.
    pub fn restrict_vector<T: Real>(&self, v: &CVector<T>) -> Result<CVector<T>> {
        if v.len() != self.layout.total_dim() {
            return Err(Error::Layout(format!("vector of length {} for {}", v.len(), self.layout)));
        }
        let outside: T = (0..v.len())
            .filter(|&i| self.position(i).is_none())
            .fold(T::zero(), |acc, i| acc + v[i].norm_sqr());
        if outside > T::zero() {
            return Err(Error::Restriction(format!(
                "state has weight {outside} outside the {}-dimensional subspace",
                self.dim()
            )));
        }
        Ok(CVector::from_fn(self.dim(), |k, _| v[self.indices[k]]))
    }

    /// Restricts a full-space matrix; fails if any entry outside is nonzero.
    pub fn restrict_matrix<T: Real>(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = self.layout.total_dim();
        if m.shape() != (n, n) {
            return Err(Error::Layout(format!("matrix {:?} for {}", m.shape(), self.layout)));
        }
        for j in 0..n {
            for i in 0..n {
                if (self.position(i).is_none() || self.position(j).is_none()) && m[(i, j)].norm_sqr() > T::zero() {
                    return Err(Error::Restriction(format!(
                        "entry ({i}, {j}) lies outside the {}-dimensional subspace",
                        self.dim()
                    )));
                }
            }
        }
        Ok(CMatrix::from_fn(self.dim(), self.dim(), |i, j| m[(self.indices[i], self.indices[j])]))
    }

    /// Embeds a subspace matrix back into the full space (zeros outside).
    pub fn lift<T: Real>(&self, m: &CMatrix<T>) -> CMatrix<T> {
        let n = self.layout.total_dim();
        let mut out = CMatrix::zeros(n, n);
        for (a, &i) in self.indices.iter().enumerate() {
            for (b, &j) in self.indices.iter().enumerate() {
                out[(i, j)] = m[(a, b)];
            }
        }
        out
    }
}

/// Projector and subspace for the excitation-bounded block.
pub fn excitation_restrict<T: Real>(layout: &SpaceLayout, max_excitation: usize) -> (Operator<T>, Subspace) {
    let sub = Subspace::excitation(layout, max_excitation);
    (sub.projector(), sub)
}

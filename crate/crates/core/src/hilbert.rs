//! Composite Hilbert-space bookkeeping and dense operator algebra.
//!
//! Basis ordering is row-major over the subsystem dimensions with site 0 the
//! slowest index. When a layout carries a cavity it occupies site 0 and the
//! qubits follow; qubits are addressed by their 1-based physical number.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cx, max_abs_diff, re, CMatrix, CVector, Cx, Real};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    dims: Vec<usize>,
    cavity: bool,
}

impl SpaceLayout {
    /// Generic product space without a distinguished cavity slot.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::checked(dims, false)
    }

    /// `n_qubits` two-level systems, no cavity.
    pub fn qubits(n_qubits: usize) -> Result<Self> {
        Self::checked(vec![2; n_qubits], false)
    }

    /// Cavity truncated at `n_max` photons followed by `n_qubits` qubits.
    pub fn cavity_qubits(n_max: usize, n_qubits: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        let mut dims = Vec::with_capacity(n_qubits + 1);
        dims.push(n_max + 1);
        dims.extend(std::iter::repeat_n(2, n_qubits));
        Self::checked(dims, true)
    }

    /// A single truncated bosonic mode.
    pub fn cavity(n_max: usize) -> Result<Self> {
        Self::cavity_qubits(n_max, 0)
    }

    fn checked(dims: Vec<usize>, cavity: bool) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Layout("layout needs at least one subsystem".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Layout(format!("subsystem dimension {d} < 2")));
        }
        Ok(Self { dims, cavity })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn has_cavity(&self) -> bool {
        self.cavity
    }

    /// Photon cutoff, if the layout has a cavity.
    pub fn n_max(&self) -> Option<usize> {
        self.cavity.then(|| self.dims[0] - 1)
    }

    pub fn n_qubits(&self) -> usize {
        self.dims.len() - usize::from(self.cavity)
    }

    /// Site index of physical qubit `q` (1-based).
    pub fn qubit_site(&self, q: usize) -> Result<usize> {
        if q == 0 || q > self.n_qubits() {
            return Err(Error::Layout(format!(
                "qubit {q} out of range 1..={}",
                self.n_qubits()
            )));
        }
        let site = q - 1 + usize::from(self.cavity);
        if self.dims[site] != 2 {
            return Err(Error::Layout(format!("site {site} is not a qubit")));
        }
        Ok(site)
    }

    pub fn qubit_sites(&self) -> std::ops::Range<usize> {
        usize::from(self.cavity)..self.dims.len()
    }

    pub fn index_of(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dims.len() {
            return Err(Error::Layout(format!(
                "multi-index has {} entries, layout has {} sites",
                multi.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0;
        for (&m, &d) in multi.iter().zip(&self.dims) {
            if m >= d {
                return Err(Error::Layout(format!("level {m} out of range for dimension {d}")));
            }
            idx = idx * d + m;
        }
        Ok(idx)
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        assert!(idx < self.total_dim(), "basis index {idx} out of range");
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }

    /// Basis index of `|n⟩_cavity ⊗ |bits⟩`, bits given per qubit in physical order.
    pub fn index_of_bits(&self, photons: usize, bits: &[u8]) -> Result<usize> {
        let mut multi = Vec::with_capacity(self.dims.len());
        if self.cavity {
            multi.push(photons);
        } else if photons != 0 {
            return Err(Error::Layout("photon number given for a layout without cavity".into()));
        }
        multi.extend(bits.iter().map(|&b| b as usize));
        self.index_of(&multi)
    }

    /// Total excitation `a†a + Σ_j |1⟩_j⟨1|` of a basis state.
    pub fn excitation(&self, idx: usize) -> usize {
        self.multi_index(idx).iter().sum()
    }
}

impl fmt::Display for SpaceLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.dims)
    }
}

/// Dense complex square matrix tagged with the layout it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    layout: SpaceLayout,
    matrix: CMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(layout: SpaceLayout, matrix: CMatrix<T>) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Layout(format!(
                "matrix is {}x{}, layout {layout} needs {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { layout, matrix })
    }

    pub fn zeros(layout: &SpaceLayout) -> Self {
        let n = layout.total_dim();
        Self { layout: layout.clone(), matrix: CMatrix::zeros(n, n) }
    }

    pub fn identity(layout: &SpaceLayout) -> Self {
        let n = layout.total_dim();
        Self { layout: layout.clone(), matrix: CMatrix::identity(n, n) }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { layout: self.layout.clone(), matrix: self.matrix.adjoint() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Layout(format!(
                "layout mismatch: {} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix * &other.matrix })
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Ok(Self { layout: self.layout.clone(), matrix: ab - ba })
    }

    pub fn scale(&self, factor: Cx<T>) -> Self {
        Self { layout: self.layout.clone(), matrix: &self.matrix * factor }
    }

    /// `max |A − A†|`.
    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_error() < tol
    }

    pub fn apply(&self, v: &CVector<T>) -> CVector<T> {
        &self.matrix * v
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is split into the connected blocks of its nonzero pattern
/// first. nalgebra's symmetric eigensolver occasionally returns NaN on large
/// matrices with many empty rows; when a block still fails, its real
/// symmetric form `[[A, −B], [B, A]]` (spectrum doubled) is tried instead.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let n = m.nrows();
    let mut ev = Vec::with_capacity(n);
    for block in nonzero_blocks(m) {
        if let [i] = block[..] {
            ev.push(m[(i, i)].re);
            continue;
        }
        let sub = CMatrix::from_fn(block.len(), block.len(), |a, b| m[(block[a], block[b])]);
        let vals: Vec<T> = sub.clone().symmetric_eigenvalues().iter().copied().collect();
        if vals.iter().all(|v| v.is_finite()) {
            ev.extend(vals);
        } else {
            ev.extend(real_form_eigenvalues(&sub));
        }
    }
    // NaN sorts first so that it cannot hide behind a larger value
    ev.sort_by(|a, b| match (a.is_finite(), b.is_finite()) {
        (true, true) => a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal),
        (x, y) => x.cmp(&y),
    });
    ev
}

fn real_form_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let n = m.nrows();
    let real = nalgebra::DMatrix::<T>::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<T> = real.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev.into_iter().step_by(2).collect()
}

/// Index sets of the connected components of the graph with an edge (i, j)
/// wherever `m[(i, j)] != 0`.
fn nonzero_blocks<T: Real>(m: &CMatrix<T>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)].norm_sqr() > T::zero() || m[(j, i)].norm_sqr() > T::zero() {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        self.try_add(rhs).expect("operator addition")
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        self.check_same(rhs).expect("operator subtraction");
        Operator { layout: self.layout.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Self) -> Operator<T> {
        self.try_mul(rhs).expect("operator product")
    }
}

impl<T: Real> Mul<Cx<T>> for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Cx<T>) -> Operator<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        Operator { layout: self.layout.clone(), matrix: -&self.matrix }
    }
}

/// Bosonic annihilation operator truncated at `n_max` photons.
pub fn annihilation<T: Real>(n_max: usize) -> Result<Operator<T>> {
    let layout = SpaceLayout::cavity(n_max)?;
    let mut m = CMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        m[(n - 1, n)] = re(T::lit(n as f64).sqrt());
    }
    Operator::new(layout, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitOp {
    /// `|1⟩⟨0|`
    SigmaPlus,
    /// `|0⟩⟨1|`
    SigmaMinus,
    /// `|1⟩⟨1| − |0⟩⟨0|`
    SigmaZ,
    Proj0,
    Proj1,
}

/// Single-qubit operator in the basis `(|0⟩, |1⟩)`.
pub fn qubit_op<T: Real>(kind: QubitOp) -> Operator<T> {
    let one = re(T::one());
    let mut m = CMatrix::zeros(2, 2);
    match kind {
        QubitOp::SigmaPlus => m[(1, 0)] = one,
        QubitOp::SigmaMinus => m[(0, 1)] = one,
        QubitOp::SigmaZ => {
            m[(0, 0)] = -one;
            m[(1, 1)] = one;
        }
        QubitOp::Proj0 => m[(0, 0)] = one,
        QubitOp::Proj1 => m[(1, 1)] = one,
    }
    Operator { layout: SpaceLayout::qubits(1).expect("static layout"), matrix: m }
}

/// Places a single-subsystem operator on `site`, identity elsewhere.
pub fn embed<T: Real>(op: &Operator<T>, site: usize, layout: &SpaceLayout) -> Result<Operator<T>> {
    if site >= layout.n_sites() {
        return Err(Error::Layout(format!("site {site} out of range for {layout}")));
    }
    if op.layout.n_sites() != 1 || op.dim() != layout.dims()[site] {
        return Err(Error::Layout(format!(
            "operator of dimension {} cannot act on site {site} of {layout}",
            op.dim()
        )));
    }
    let before: usize = layout.dims()[..site].iter().product();
    let after: usize = layout.dims()[site + 1..].iter().product();
    let m = CMatrix::<T>::identity(before, before)
        .kronecker(&op.matrix)
        .kronecker(&CMatrix::<T>::identity(after, after));
    Operator::new(layout.clone(), m)
}

/// Embeds a qubit operator on physical qubit `q` (1-based).
pub fn embed_qubit<T: Real>(kind: QubitOp, q: usize, layout: &SpaceLayout) -> Result<Operator<T>> {
    embed(&qubit_op(kind), layout.qubit_site(q)?, layout)
}

/// Cavity annihilation operator on the cavity slot of `layout`.
pub fn cavity_annihilation<T: Real>(layout: &SpaceLayout) -> Result<Operator<T>> {
    let n_max = layout
        .n_max()
        .ok_or_else(|| Error::Layout(format!("layout {layout} has no cavity")))?;
    embed(&annihilation(n_max)?, 0, layout)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collective {
    SMinus,
    SPlus,
    SZ,
}

/// Sum of single-qubit embeddings over every qubit site.
pub fn collective_op<T: Real>(kind: Collective, layout: &SpaceLayout) -> Result<Operator<T>> {
    if layout.n_qubits() == 0 {
        return Err(Error::Layout(format!("layout {layout} has no qubits")));
    }
    let single = qubit_op(match kind {
        Collective::SMinus => QubitOp::SigmaMinus,
        Collective::SPlus => QubitOp::SigmaPlus,
        Collective::SZ => QubitOp::SigmaZ,
    });
    let mut total = Operator::zeros(layout);
    for site in layout.qubit_sites() {
        total = &total + &embed(&single, site, layout)?;
    }
    Ok(total)
}

/// Computational basis vector `|multi⟩`.
pub fn basis_state<T: Real>(layout: &SpaceLayout, multi: &[usize]) -> Result<CVector<T>> {
    let idx = layout.index_of(multi)?;
    let mut v = CVector::zeros(layout.total_dim());
    v[idx] = cx(T::one(), T::zero());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eigenvalues_of_scattered_blocks() {
        // a 2x2 block on {1, 4}, isolated diagonal entries elsewhere
        let mut m = CMatrix::<f64>::zeros(6, 6);
        m[(1, 1)] = cx(1.0, 0.0);
        m[(4, 4)] = cx(1.0, 0.0);
        m[(1, 4)] = cx(0.0, 0.5);
        m[(4, 1)] = cx(0.0, -0.5);
        m[(2, 2)] = cx(-0.25, 0.0);
        let ev = hermitian_eigenvalues(&m);
        let expect = [-0.25, 0.0, 0.0, 0.0, 0.5, 1.5];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{ev:?}");
        }
        let r = real_form_eigenvalues(&m);
        for (a, b) in r.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{r:?}");
        }
    }

    fn op(kind: QubitOp) -> Operator<f64> {
        qubit_op(kind)
    }

    #[test]
    fn annihilation_superdiagonal() {
        let a = annihilation::<f64>(1).unwrap();
        assert_eq!(a.matrix()[(0, 1)], re(1.0));
        assert_eq!(a.matrix()[(0, 0)], re(0.0));
        assert_eq!(a.matrix()[(1, 0)], re(0.0));

        let a = annihilation::<f64>(2).unwrap();
        assert_eq!(a.matrix()[(0, 1)], re(1.0));
        assert_eq!(a.matrix()[(1, 2)], re(2f64.sqrt()));
        let nonzero = a.matrix().iter().filter(|z| z.norm_sqr() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn number_operator_on_fock_two() {
        let a = annihilation::<f64>(3).unwrap();
        let n = &a.adjoint() * &a;
        let fock2 = basis_state::<f64>(a.layout(), &[2]).unwrap();
        let out = n.apply(&fock2);
        assert!((out - fock2 * re(2.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_cutoff_rejected() {
        assert_eq!(annihilation::<f64>(0).unwrap_err(), Error::InvalidCutoff(0));
    }

    #[test]
    fn canonical_commutator_below_cutoff() {
        let n_max = 4;
        let a = annihilation::<f64>(n_max).unwrap();
        let c = a.commutator(&a.adjoint()).unwrap();
        for i in 0..=n_max {
            for j in 0..=n_max {
                let expect = if i == j && i < n_max { 1.0 } else if i == j { -(n_max as f64) } else { 0.0 };
                // √n·√n is exact only up to rounding
                let err = (c.matrix()[(i, j)] - re(expect)).norm();
                assert!(err <= 8.0 * f64::EPSILON * n_max as f64, "entry ({i},{j}): {err}");
            }
        }
    }

    #[test]
    fn pauli_conventions() {
        let sp = op(QubitOp::SigmaPlus);
        assert_eq!(sp.matrix()[(1, 0)], re(1.0));
        assert_eq!(sp.matrix()[(0, 1)], re(0.0));

        let one = CVector::from_vec(vec![re(0.0), re(1.0)]);
        assert_eq!(op(QubitOp::SigmaZ).apply(&one), one);

        let sum = &op(QubitOp::Proj0) + &op(QubitOp::Proj1);
        assert_eq!(sum.matrix(), &CMatrix::identity(2, 2));

        let c = op(QubitOp::SigmaPlus).commutator(&op(QubitOp::SigmaMinus)).unwrap();
        assert_eq!(c, op(QubitOp::SigmaZ));
    }

    #[test]
    fn commutator_and_adjoint_basics() {
        let a = annihilation::<f64>(3).unwrap();
        assert_eq!(max_abs(a.commutator(&a).unwrap().matrix()), 0.0);
        assert_eq!(a.adjoint().adjoint(), a);
        let other = annihilation::<f64>(2).unwrap();
        assert!(matches!(a.commutator(&other), Err(Error::Layout(_))));
    }

    use crate::scalar::max_abs;

    #[test]
    fn embedded_sigma_z_eigenvalue() {
        let layout = SpaceLayout::qubits(3).unwrap();
        let sz1 = embed(&op(QubitOp::SigmaZ), 0, &layout).unwrap();
        let psi = basis_state::<f64>(&layout, &[1, 0, 0]).unwrap();
        assert_eq!(sz1.apply(&psi), psi);
        let id = embed(&Operator::<f64>::identity(&SpaceLayout::qubits(1).unwrap()), 2, &layout).unwrap();
        assert_eq!(id, Operator::identity(&layout));
    }

    #[test]
    fn embed_rejects_mismatch() {
        let layout = SpaceLayout::cavity_qubits(2, 2).unwrap();
        assert!(embed(&op(QubitOp::SigmaZ), 0, &layout).is_err());
        assert!(embed(&op(QubitOp::SigmaZ), 5, &layout).is_err());
        assert!(layout.qubit_site(0).is_err());
        assert!(layout.qubit_site(3).is_err());
        assert_eq!(layout.qubit_site(1).unwrap(), 1);
    }

    #[test]
    fn collective_operators() {
        let layout = SpaceLayout::qubits(3).unwrap();
        let sz = collective_op::<f64>(Collective::SZ, &layout).unwrap();
        let psi = basis_state::<f64>(&layout, &[1, 0, 0]).unwrap();
        assert_eq!(sz.apply(&psi), &psi * re(-1.0));
        assert!(sz.is_hermitian(1e-15));

        let sm = collective_op::<f64>(Collective::SMinus, &layout).unwrap();
        let ground = basis_state::<f64>(&layout, &[0, 0, 0]).unwrap();
        assert_eq!(sm.apply(&ground).norm(), 0.0);
        assert_eq!(sm.adjoint(), collective_op(Collective::SPlus, &layout).unwrap());

        // S_z on the span {|100⟩, |001⟩, |010⟩} is −1 times identity.
        for bits in [[1, 0, 0], [0, 0, 1], [0, 1, 0]] {
            let v = basis_state::<f64>(&layout, &bits).unwrap();
            assert_eq!(sz.apply(&v), &v * re(-1.0));
        }

        // cavity slot is excluded
        let with_cavity = SpaceLayout::cavity_qubits(2, 3).unwrap();
        let sz_c = collective_op::<f64>(Collective::SZ, &with_cavity).unwrap();
        let v = basis_state::<f64>(&with_cavity, &[2, 1, 0, 0]).unwrap();
        assert_eq!(sz_c.apply(&v), &v * re(-1.0));
        assert!(collective_op::<f64>(Collective::SZ, &SpaceLayout::cavity(2).unwrap()).is_err());
    }

    #[test]
    fn index_round_trip_and_excitation() {
        let layout = SpaceLayout::cavity_qubits(2, 3).unwrap();
        assert_eq!(layout.total_dim(), 24);
        assert_eq!(layout.index_of(&[1, 0, 1, 1]).unwrap(), 8 + 3);
        assert_eq!(layout.excitation(11), 3);
        assert_eq!(layout.index_of_bits(1, &[0, 1, 1]).unwrap(), 11);
        assert!(SpaceLayout::new(vec![2, 1]).is_err());
    }

    fn random_matrix(dim: usize, seed: &[f64]) -> CMatrix<f64> {
        CMatrix::from_fn(dim, dim, |i, j| {
            let k = (i * dim + j) * 2;
            cx(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        })
    }

    proptest! {
        #[test]
        fn multi_index_bijection(dims in proptest::collection::vec(2usize..5, 1..4)) {
            let layout = SpaceLayout::new(dims).unwrap();
            for idx in 0..layout.total_dim() {
                let multi = layout.multi_index(idx);
                prop_assert_eq!(layout.index_of(&multi).unwrap(), idx);
            }
        }

        #[test]
        fn disjoint_embeddings_commute(
            dims in proptest::collection::vec(2usize..4, 2..4),
            seed in proptest::collection::vec(-1.0f64..1.0, 32),
        ) {
            let layout = SpaceLayout::new(dims.clone()).unwrap();
            let (i, j) = (0, dims.len() - 1);
            let a = Operator::new(SpaceLayout::new(vec![dims[i]]).unwrap(), random_matrix(dims[i], &seed)).unwrap();
            let b = Operator::new(SpaceLayout::new(vec![dims[j]]).unwrap(), random_matrix(dims[j], &seed[3..])).unwrap();
            let ea = embed(&a, i, &layout).unwrap();
            let eb = embed(&b, j, &layout).unwrap();
            let c = ea.commutator(&eb).unwrap();
            prop_assert!(max_abs(c.matrix()) < 1e-12);
        }

        #[test]
        fn embedding_preserves_spectrum(
            dims in proptest::collection::vec(2usize..5, 1..4),
            site_pick in 0usize..3,
            seed in proptest::collection::vec(-1.0f64..1.0, 40),
        ) {
            let layout = SpaceLayout::new(dims.clone()).unwrap();
            prop_assume!(layout.total_dim() <= 64);
            let site = site_pick % dims.len();
            let d = dims[site];
            let m = random_matrix(d, &seed);
            let h = (&m + m.adjoint()) * re(0.5);
            let small = Operator::new(SpaceLayout::new(vec![d]).unwrap(), h).unwrap();
            let big = embed(&small, site, &layout).unwrap();
            let mult = layout.total_dim() / d;
            let expected: Vec<f64> = {
                let mut v: Vec<f64> = small.hermitian_eigenvalues().into_iter()
                    .flat_map(|e| std::iter::repeat_n(e, mult)).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            };
            let got = big.hermitian_eigenvalues();
            prop_assert_eq!(got.len(), expected.len());
            for (g, e) in got.iter().zip(&expected) {
                prop_assert!((g - e).abs() < 1e-9, "{} vs {}", g, e);
            }
        }
    }
}

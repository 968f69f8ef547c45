//! Decoherence-free encodings, analytic holonomic gates, and the checks that a
//! given effective Hamiltonian really produces them (cyclic evolution after a
//! π pulse, vanishing dynamical contribution inside the gate subspace).

use crate::error::{Error, Result};
use crate::hilbert::SpaceLayout;
use crate::scalar::{cis, cx, i_unit, inner, max_abs_diff, modulus, re, CMatrix, CVector, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsKind {
    /// One logical qubit on three physical qubits.
    S1,
    /// Two logical qubits on six physical qubits.
    S2,
}

/// Logical labels of a decoherence-free subspace and the physical
/// computational-basis states they stand for. Computational labels come first,
/// ancillas last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfsEncoding {
    kind: DfsKind,
    entries: Vec<(&'static str, Vec<u8>)>,
    n_logical: usize,
}

fn bits(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}

impl DfsEncoding {
    pub fn s1() -> Self {
        Self {
            kind: DfsKind::S1,
            entries: vec![("0L", bits("100")), ("1L", bits("001")), ("a1", bits("010"))],
            n_logical: 2,
        }
    }

    pub fn s2() -> Self {
        Self {
            kind: DfsKind::S2,
            entries: vec![
                ("00L", bits("100100")),
                ("01L", bits("100001")),
                ("10L", bits("001100")),
                ("11L", bits("001001")),
                ("a2", bits("101000")),
                ("a3", bits("000101")),
            ],
            n_logical: 4,
        }
    }

    pub fn of(kind: DfsKind) -> Self {
        match kind {
            DfsKind::S1 => Self::s1(),
            DfsKind::S2 => Self::s2(),
        }
    }

    pub fn kind(&self) -> DfsKind {
        self.kind
    }

    /// Number of basis states, ancillas included.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Number of computational (non-ancilla) states.
    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_qubits(&self) -> usize {
        self.entries[0].1.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(l, _)| *l)
    }

    pub fn bits(&self, i: usize) -> &[u8] {
        &self.entries[i].1
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|(l, _)| *l == label)
    }

    /// Number of qubits in `|1⟩` shared by every member.
    pub fn excitation(&self) -> usize {
        self.entries[0].1.iter().map(|&b| b as usize).sum()
    }

    /// Eigenvalue of `S^z = Σ σ^z` (with `σ^z|1⟩ = +|1⟩`) on member `i`.
    pub fn sz_eigenvalue(&self, i: usize) -> i64 {
        self.entries[i].1.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum()
    }

    /// Full-space basis index of member `i` with `photons` in the cavity.
    pub fn index_in(&self, layout: &SpaceLayout, photons: usize, i: usize) -> Result<usize> {
        if layout.n_qubits() != self.n_qubits() {
            return Err(Error::Layout(format!(
                "encoding needs {} qubits, layout {layout} has {}",
                self.n_qubits(),
                layout.n_qubits()
            )));
        }
        layout.index_of_bits(photons, &self.entries[i].1)
    }

    /// Maps a logical amplitude vector (length `n_logical` or `dim`) to the
    /// physical state with the cavity in `|photons⟩`.
    pub fn physical_state<T: Real>(
        &self,
        layout: &SpaceLayout,
        photons: usize,
        amplitudes: &CVector<T>,
    ) -> Result<CVector<T>> {
        if amplitudes.len() != self.n_logical && amplitudes.len() != self.dim() {
            return Err(Error::Layout(format!(
                "logical vector of length {} for an encoding of dimension {}",
                amplitudes.len(),
                self.dim()
            )));
        }
        let mut out = CVector::zeros(layout.total_dim());
        for (i, amp) in amplitudes.iter().enumerate() {
            out[self.index_in(layout, photons, i)?] = *amp;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    U1,
    U2,
}

/// Two-parameter holonomic gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSpec<T: Real> {
    pub kind: GateKind,
    /// θ for U1, ϑ for U2.
    pub angle: T,
    pub phase: T,
}

impl<T: Real> GateSpec<T> {
    pub fn new(kind: GateKind, angle: T, phase: T) -> Result<Self> {
        if !angle.is_finite() || !phase.is_finite() {
            return Err(Error::Parameter(format!("non-finite gate angles ({angle}, {phase})")));
        }
        Ok(Self { kind, angle, phase })
    }

    pub fn u1(theta: T, phase: T) -> Self {
        Self { kind: GateKind::U1, angle: theta, phase }
    }

    pub fn u2(vartheta: T, phase: T) -> Self {
        Self { kind: GateKind::U2, angle: vartheta, phase }
    }

    pub fn matrix(&self) -> CMatrix<T> {
        match self.kind {
            GateKind::U1 => u1_matrix(self.angle, self.phase),
            GateKind::U2 => u2_matrix(self.angle, self.phase),
        }
    }

    /// Same gate with the angle folded into `[0, π]`, which is the range the
    /// coupling ratio can reach. Uses `U(θ, φ) = U(−θ, φ + π)` and 2π
    /// periodicity.
    pub fn normalized(&self) -> Self {
        let two_pi = T::two_pi();
        let mut angle = self.angle % two_pi;
        if angle > T::pi() {
            angle -= two_pi;
        } else if angle <= -T::pi() {
            angle += two_pi;
        }
        let mut phase = self.phase;
        if angle < T::zero() {
            angle = -angle;
            phase += T::pi();
        }
        Self { kind: self.kind, angle, phase }
    }
}

/// Single-qubit holonomic gate in the basis `(|0⟩_L, |1⟩_L)`.
pub fn u1_matrix<T: Real>(theta: T, phi: T) -> CMatrix<T> {
    let (s, c) = theta.sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[re(c), cis(-phi) * s, cis(phi) * s, re(-c)],
    )
}

/// Two-qubit holonomic gate in the basis `(|00⟩, |01⟩, |10⟩, |11⟩)_L`.
pub fn u2_matrix<T: Real>(vartheta: T, phi: T) -> CMatrix<T> {
    let (s, c) = vartheta.sin_cos();
    let z = re(T::zero());
    let e_m = cis(-phi) * s;
    let e_p = cis(phi) * s;
    CMatrix::from_row_slice(
        4,
        4,
        &[
            re(c), e_m, z, z,
            e_p, re(-c), z, z,
            z, z, re(-c), e_m,
            z, z, e_p, re(c),
        ],
    )
}

/// Dark and bright dressed states `(|d⟩, |b⟩)` in the logical basis.
pub fn dark_bright<T: Real>(theta: T, phi: T) -> (CVector<T>, CVector<T>) {
    let half = theta / T::lit(2.0);
    let (s, c) = half.sin_cos();
    let dark = CVector::from_vec(vec![re(c), cis(phi) * s]);
    let bright = CVector::from_vec(vec![cis(-phi) * s, re(-c)]);
    (dark, bright)
}

/// Effective Rabi frequency and mixing angle of a Λ system driven by two
/// Raman pairs: `λ = √(g_a⁴ + g_b⁴)/δ`, `θ = 2 arctan(g_a²/g_b²)`.
pub fn gate_params<T: Real>(g_a: T, g_b: T, delta: T) -> Result<(T, T)> {
    if !(delta > T::zero()) {
        return Err(Error::Parameter(format!("Raman detuning must be positive, got {delta}")));
    }
    let a2 = g_a.abs().powi(2);
    let b2 = g_b.abs().powi(2);
    if a2 == T::zero() && b2 == T::zero() {
        return Err(Error::Parameter("both couplings are zero".into()));
    }
    let lambda = (a2 * a2 + b2 * b2).sqrt() / delta;
    let theta = T::lit(2.0) * a2.atan2(b2);
    Ok((lambda, theta))
}

/// Coupling `g_a` that yields mixing angle `θ` against a fixed `g_b`.
pub fn couplings_for<T: Real>(theta: T, g_b: T) -> Result<T> {
    if g_b == T::zero() {
        return Err(Error::Parameter("g_b = 0 fixes theta = pi; cannot solve for g_a".into()));
    }
    let t = (theta / T::lit(2.0)).tan();
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::Parameter(format!("theta = {theta} outside [0, pi)")));
    }
    Ok(g_b.abs() * t.sqrt())
}

/// π-pulse duration `τ = π/λ`.
pub fn pulse_time<T: Real>(lambda: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::Parameter(format!("Rabi frequency must be positive, got {lambda}")));
    }
    Ok(T::pi() / lambda)
}

/// `exp(−i H t)`.
pub fn propagator<T: Real>(h: &CMatrix<T>, t: T) -> CMatrix<T> {
    (h * (-i_unit::<T>() * t)).exp()
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn spectral_radius<T: Real>(h: &CMatrix<T>) -> T {
    crate::hilbert::hermitian_eigenvalues(h)
        .into_iter()
        .fold(T::zero(), |m, e| if e.abs() > m { e.abs() } else { m })
}

/// Evolves a gate Hamiltonian (logical states first, ancillas last) for `tau`
/// and returns the block on the first `n_logical` states. Fails unless
/// `λτ = π` to 1e−9, λ being the spectral radius.
pub fn holonomic_gate_from<T: Real>(h: &CMatrix<T>, tau: T, n_logical: usize) -> Result<CMatrix<T>> {
    let lambda = spectral_radius(h);
    let product = lambda * tau;
    if (product - T::pi()).abs() > T::lit(1e-9) * T::pi() {
        return Err(Error::Cyclicity { product: product.as_f64() });
    }
    let u = propagator(h, tau);
    Ok(u.view((0, 0), (n_logical, n_logical)).into_owned())
}

/// Single-qubit gate generated by `h1` (basis `|0⟩_L, |1⟩_L, |a₁⟩`).
pub fn holonomic_u1_from_h1<T: Real>(h1: &CMatrix<T>, tau: T) -> Result<CMatrix<T>> {
    holonomic_gate_from(h1, tau, 2)
}

/// Two-qubit gate generated by `h2` (basis `|00⟩…|11⟩_L, |a₂⟩, |a₃⟩`).
pub fn holonomic_u2_from_h2<T: Real>(h2: &CMatrix<T>, tau: T) -> Result<CMatrix<T>> {
    holonomic_gate_from(h2, tau, 4)
}

/// Largest `|⟨ψ_i(t)|H|ψ_j(t)⟩|` over `n_samples` equally spaced times in
/// `[0, τ]`, with `|ψ_i(t)⟩ = exp(−iHt)|i⟩`. Zero for a purely geometric
/// evolution of the given subspace.
pub fn parallel_transport_check<T: Real>(
    h: &CMatrix<T>,
    vectors: &[CVector<T>],
    tau: T,
    n_samples: usize,
) -> Result<T> {
    if n_samples < 2 {
        return Err(Error::Parameter("parallel transport check needs at least 2 samples".into()));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != h.nrows()) {
        return Err(Error::Layout(format!(
            "vector of length {} against a {}-dim Hamiltonian",
            v.len(),
            h.nrows()
        )));
    }
    let mut worst = T::zero();
    for k in 0..n_samples {
        let t = tau * T::lit(k as f64) / T::lit((n_samples - 1) as f64);
        let u = propagator(h, t);
        let evolved: Vec<CVector<T>> = vectors.iter().map(|v| &u * v).collect();
        for a in &evolved {
            let ha = h * a;
            for b in &evolved {
                let v = modulus(inner(b, &ha));
                if v > worst {
                    worst = v;
                }
            }
        }
    }
    Ok(worst)
}

/// Ordered product, first gate applied first: `compose([A, B]) = B·A`.
pub fn compose<T: Real>(gates: &[CMatrix<T>]) -> Result<CMatrix<T>> {
    let first = gates
        .first()
        .ok_or_else(|| Error::Parameter("nothing to compose".into()))?;
    let mut acc = first.clone();
    for g in &gates[1..] {
        if g.ncols() != acc.nrows() {
            return Err(Error::Layout(format!(
                "cannot compose {}x{} after {}x{}",
                g.nrows(),
                g.ncols(),
                acc.nrows(),
                acc.ncols()
            )));
        }
        acc = g * acc;
    }
    Ok(acc)
}

/// `I ⊗ U`: a single-qubit gate on logical qubit 2 of the two-qubit space.
pub fn on_second_qubit<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    CMatrix::<T>::identity(2, 2).kronecker(u)
}

/// `U ⊗ I`: a single-qubit gate on logical qubit 1.
pub fn on_first_qubit<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    u.kronecker(&CMatrix::<T>::identity(2, 2))
}

/// The CNOT recipe: `U₂(π/4, π/2)` followed by `U₁(π/4, π/2)` on logical qubit 2.
pub fn cnot_construction<T: Real>() -> CMatrix<T> {
    let angle = T::frac_pi_4();
    let phase = T::frac_pi_2();
    compose(&[u2_matrix(angle, phase), on_second_qubit(&u1_matrix(angle, phase))])
        .expect("conformable 4x4 factors")
}

/// Divides out the phase of the largest-magnitude entry.
pub fn strip_global_phase<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let mut best = cx(T::zero(), T::zero());
    let mut best_mod = T::zero();
    for z in m.iter() {
        let r = modulus(*z);
        // ties go to the first entry in column-major order
        if r > best_mod * (T::one() + T::lit(1e-12)) {
            best = *z;
            best_mod = r;
        }
    }
    if best_mod == T::zero() {
        return m.clone();
    }
    let phase: Cx<T> = best.conj() / best_mod;
    m * phase
}

/// Entrywise distance between `a` and `b` after removing a global phase from
/// each.
pub fn distance_up_to_phase<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    // Align on b's largest entry so that near-ties cannot pick different
    // reference entries in the two matrices.
    let mut k = 0;
    let mut best = T::zero();
    for (i, z) in b.iter().enumerate() {
        if modulus(*z) > best * (T::one() + T::lit(1e-12)) {
            best = modulus(*z);
            k = i;
        }
    }
    let (za, zb) = (a[k], b[k]);
    if modulus(za) == T::zero() || modulus(zb) == T::zero() {
        return max_abs_diff(a, b);
    }
    let pa = za.conj() / modulus(za);
    let pb = zb.conj() / modulus(zb);
    max_abs_diff(&(a * pa), &(b * pb))
}

//! Physical parameters and Hamiltonians.
//!
//! Frequencies and rates are angular, in rad/ns; times are in ns. The
//! full model is the rotating-frame Raman Hamiltonian
//! `H(t) = Σ_j g_j (a σ_j⁺ e^{−i(Δ_j t − φ_j)} + h.c.)`, one term per drive tone,
//! plus the static counter-term that removes the second-order level shifts.
//! Its second-order effective form is the flip-flop pair Hamiltonian, and
//! restricted to a decoherence-free subspace it becomes the Λ-type gate
//! Hamiltonian of the holonomic gates.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hilbert::{cavity_annihilation, embed_qubit, Operator, QubitOp, SpaceLayout};
use crate::holonomy::{couplings_for, gate_params, GateKind, GateSpec};
use crate::scalar::{cis, re, CMatrix, Cx, Real};

/// Converts an ordinary frequency in MHz to rad/ns.
pub fn mhz<T: Real>(f: f64) -> T {
    T::lit(TAU * f * 1e-3)
}

/// Converts rad/ns back to MHz.
pub fn to_mhz<T: Real>(w: T) -> f64 {
    w.as_f64() / TAU * 1e3
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalParams<T: Real> {
    /// NV–cavity coupling G.
    pub cavity_coupling: T,
    /// Laser Rabi frequency Ω_L.
    pub laser_rabi: T,
    /// Optical detuning Δ = ω_e0 − ω_c.
    pub optical_detuning: T,
    /// Raman detuning magnitude δ.
    pub raman_detuning: T,
    /// Raman coupling g used by the gate drives (the larger of each pair).
    pub raman_coupling: T,
    /// Cavity decay κ.
    pub kappa: T,
    /// Qubit relaxation γ.
    pub gamma: T,
    /// Qubit dephasing γ_φ.
    pub gamma_phi: T,
    /// Per-qubit rate multipliers for uncorrelated noise, cycled over the
    /// qubits.
    pub rate_multipliers: Vec<T>,
}

impl<T: Real> Default for PhysicalParams<T> {
    /// The experimental set: G = 2π·1 GHz, Ω_L = 2π·500 MHz, Δ = 2π·8 GHz,
    /// δ = 2π·1 GHz, g = 2π·50 MHz, κ = 2π·0.5 MHz, γ = γ_φ = 2π·4 kHz,
    /// multipliers 0.8/1.0/1.2.
    fn default() -> Self {
        Self {
            cavity_coupling: mhz(1000.0),
            laser_rabi: mhz(500.0),
            optical_detuning: mhz(8000.0),
            raman_detuning: mhz(1000.0),
            raman_coupling: mhz(50.0),
            kappa: mhz(0.5),
            gamma: mhz(0.004),
            gamma_phi: mhz(0.004),
            rate_multipliers: vec![T::lit(0.8), T::lit(1.0), T::lit(1.2)],
        }
    }
}

impl<T: Real> PhysicalParams<T> {
    /// Same parameters with every decoherence rate set to zero.
    pub fn without_decoherence(&self) -> Self {
        Self { kappa: T::zero(), gamma: T::zero(), gamma_phi: T::zero(), ..self.clone() }
    }

    /// Multiplier for physical qubit `q` (1-based).
    pub fn multiplier(&self, q: usize) -> T {
        if self.rate_multipliers.is_empty() {
            T::one()
        } else {
            self.rate_multipliers[(q - 1) % self.rate_multipliers.len()]
        }
    }

    /// Rejects negative or non-finite values. Returns warnings when the
    /// dispersive hierarchy δ ≫ g, Δ ≫ δ is weak.
    pub fn validate(&self) -> Result<Vec<String>> {
        let named = [
            ("G", self.cavity_coupling),
            ("Omega_L", self.laser_rabi),
            ("Delta", self.optical_detuning),
            ("delta", self.raman_detuning),
            ("g", self.raman_coupling),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_phi", self.gamma_phi),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::Parameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if let Some(m) = self.rate_multipliers.iter().find(|m| !m.is_finite() || **m < T::zero()) {
            return Err(Error::Parameter(format!("rate multiplier must be >= 0, got {m}")));
        }
        if self.raman_detuning == T::zero() {
            return Err(Error::Parameter("delta must be positive".into()));
        }
        let mut warnings = Vec::new();
        if self.raman_detuning <= T::lit(10.0) * self.raman_coupling {
            warnings.push(format!(
                "weak dispersive regime: delta/g = {:.3} <= 10",
                (self.raman_detuning / self.raman_coupling).as_f64()
            ));
        }
        if self.optical_detuning <= T::lit(4.0) * self.raman_detuning {
            warnings.push(format!(
                "Delta/delta = {:.3} <= 4; excited-state elimination is marginal",
                (self.optical_detuning / self.raman_detuning).as_f64()
            ));
        }
        Ok(warnings)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetuningSign {
    Plus,
    Minus,
}

impl DetuningSign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Self::Plus => T::one(),
            Self::Minus => -T::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }
}

/// Raman coupling after eliminating the excited state:
/// `g = G Ω_L (1/(Δ + δ_±) + 1/Δ)`.
pub fn effective_coupling<T: Real>(params: &PhysicalParams<T>, sign: DetuningSign) -> Result<T> {
    let big_delta = params.optical_detuning;
    let shifted = big_delta + sign.value::<T>() * params.raman_detuning;
    if !(big_delta > T::zero()) || !(shifted > T::zero()) {
        return Err(Error::Parameter(format!(
            "need Delta > 0 and Delta + delta_pm > 0, got Delta = {big_delta}, Delta + delta_pm = {shifted}"
        )));
    }
    Ok(params.cavity_coupling * params.laser_rabi * (T::one() / shifted + T::one() / big_delta))
}

/// One drive tone as it enters the rotating-frame Hamiltonian:
/// `g (a σ⁺ e^{−i(detuning·t − phase)} + h.c.)` on `qubit` (1-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSpec<T: Real> {
    pub qubit: usize,
    pub coupling: T,
    pub detuning: T,
    pub phase: T,
}

/// Two qubits driven with a common coupling and a common signed Raman
/// detuning δ_±, producing an effective flip-flop exchange between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDrive<T: Real> {
    pub qubit_m: usize,
    pub qubit_n: usize,
    pub coupling: T,
    pub sign: DetuningSign,
    pub phase_m: T,
    pub phase_n: T,
}

impl<T: Real> PairDrive<T> {
    pub fn new(qubit_m: usize, qubit_n: usize, coupling: T, sign: DetuningSign, phase_m: T, phase_n: T) -> Result<Self> {
        if qubit_m == qubit_n {
            return Err(Error::Parameter(format!("pair needs two distinct qubits, got {qubit_m} twice")));
        }
        Ok(Self { qubit_m, qubit_n, coupling, sign, phase_m, phase_n })
    }

    /// Signed exchange strength `g²/δ_±`.
    pub fn strength(&self, delta: T) -> Result<T> {
        if delta == T::zero() {
            return Err(Error::Parameter("Raman detuning is zero".into()));
        }
        Ok(self.sign.value::<T>() * self.coupling * self.coupling / delta.abs())
    }

    /// The two rotating-frame tones that realise this pair.
    ///
    /// Eliminating the virtual photon from tones with detuning `d` and phases
    /// `ψ_m, ψ_n` gives `−(g²/d)(e^{i(ψ_n−ψ_m)} σ_m⁻σ_n⁺ + h.c.)`, and level
    /// shifts `(g²/d)(a†a|0⟩⟨0| − aa†|1⟩⟨1|)` per qubit. The labelled pair
    /// (sign s, phases φ) is defined by `+(s g²/δ)(e^{i(φ_m−φ_n)} σ_m⁻σ_n⁺ + h.c.)`,
    /// so the tones carry `d = −sδ` and `ψ = −φ`. This is the only place the
    /// two conventions meet.
    pub fn tones(&self, delta: T) -> Result<[DriveSpec<T>; 2]> {
        if !(delta > T::zero()) {
            return Err(Error::Parameter(format!("Raman detuning must be positive, got {delta}")));
        }
        let detuning = -self.sign.value::<T>() * delta;
        Ok([
            DriveSpec { qubit: self.qubit_m, coupling: self.coupling, detuning, phase: -self.phase_m },
            DriveSpec { qubit: self.qubit_n, coupling: self.coupling, detuning, phase: -self.phase_n },
        ])
    }

    fn check(&self, layout: &SpaceLayout) -> Result<()> {
        layout.qubit_site(self.qubit_m)?;
        layout.qubit_site(self.qubit_n)?;
        if layout.n_max().is_none() {
            return Err(Error::Layout(format!("layout {layout} has no cavity")));
        }
        Ok(())
    }
}

/// Harmonic term `amplitude·e^{−i·frequency·t}·op + h.c.`
#[derive(Clone, Debug)]
pub struct Tone<T: Real> {
    pub op: Operator<T>,
    pub amplitude: Cx<T>,
    pub frequency: T,
}

impl<T: Real> Tone<T> {
    pub fn coefficient(&self, t: T) -> Cx<T> {
        self.amplitude * cis(-self.frequency * t)
    }
}

/// Time-dependent Hermitian Hamiltonian `H(t) = H_static + Σ_k (c_k(t) A_k + h.c.)`.
#[derive(Clone, Debug)]
pub struct DrivenHamiltonian<T: Real> {
    layout: SpaceLayout,
    static_part: Operator<T>,
    tones: Vec<Tone<T>>,
}

impl<T: Real> DrivenHamiltonian<T> {
    pub fn constant(h: Operator<T>) -> Self {
        Self { layout: h.layout().clone(), static_part: h, tones: Vec::new() }
    }

    /// Rotating-frame Raman Hamiltonian for the given tones.
    pub fn from_drives(layout: &SpaceLayout, drives: &[DriveSpec<T>]) -> Result<Self> {
        let a = cavity_annihilation(layout)?;
        let mut tones = Vec::with_capacity(drives.len());
        for d in drives {
            let sp = embed_qubit(QubitOp::SigmaPlus, d.qubit, layout)?;
            tones.push(Tone {
                op: &a * &sp,
                amplitude: cis(d.phase) * d.coupling,
                frequency: d.detuning,
            });
        }
        Ok(Self { layout: layout.clone(), static_part: Operator::zeros(layout), tones })
    }

    pub fn with_static(mut self, extra: &Operator<T>) -> Result<Self> {
        self.static_part = self.static_part.try_add(extra)?;
        Ok(self)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn static_part(&self) -> &Operator<T> {
        &self.static_part
    }

    pub fn tones(&self) -> &[Tone<T>] {
        &self.tones
    }

    /// Largest |frequency| among the tones; differences between tones are at
    /// most twice this.
    pub fn max_frequency(&self) -> T {
        self.tones
            .iter()
            .fold(T::zero(), |m, t| if t.frequency.abs() > m { t.frequency.abs() } else { m })
    }

    pub fn at(&self, t: T) -> Operator<T> {
        let mut m = self.static_part.matrix().clone();
        for tone in &self.tones {
            let c = tone.coefficient(t);
            let term = tone.op.matrix() * c;
            m += &term;
            m += term.adjoint();
        }
        Operator::new(self.layout.clone(), m).expect("same layout")
    }
}

/// `H(t)` of the rotating-frame Raman model at time `t`.
pub fn interaction_hamiltonian<T: Real>(
    layout: &SpaceLayout,
    drives: &[DriveSpec<T>],
    t: T,
) -> Result<Operator<T>> {
    Ok(DrivenHamiltonian::from_drives(layout, drives)?.at(t))
}

/// `(−a†a|0⟩⟨0| + aa†|1⟩⟨1|)` on qubit `q`.
fn level_shift_operator<T: Real>(layout: &SpaceLayout, q: usize) -> Result<Operator<T>> {
    let a = cavity_annihilation::<T>(layout)?;
    let ad = a.adjoint();
    let n = &ad * &a;
    let nn = &a * &ad;
    let p0 = embed_qubit(QubitOp::Proj0, q, layout)?;
    let p1 = embed_qubit(QubitOp::Proj1, q, layout)?;
    Ok(&(&nn * &p1) - &(&n * &p0))
}

/// Second-order level shifts of a driven pair:
/// `(g²/δ_±) Σ_{j=m,n} (−a†a|0⟩_j⟨0| + aa†|1⟩_j⟨1|)`.
pub fn level_shift<T: Real>(layout: &SpaceLayout, pair: &PairDrive<T>, delta: T) -> Result<Operator<T>> {
    pair.check(layout)?;
    let s = pair.strength(delta)?;
    let sum = &level_shift_operator(layout, pair.qubit_m)? + &level_shift_operator(layout, pair.qubit_n)?;
    Ok(sum.scale(re(s)))
}

/// Exact counter-term cancelling [`level_shift`].
pub fn stark_compensation<T: Real>(layout: &SpaceLayout, pair: &PairDrive<T>, delta: T) -> Result<Operator<T>> {
    Ok(-&level_shift(layout, pair, delta)?)
}

/// `(g²/δ_±)(e^{iφ_mn} σ_m⁻ σ_n⁺ + h.c.)` with `φ_mn = φ_m − φ_n`, identity on
/// the cavity.
pub fn effective_pair_hamiltonian<T: Real>(
    layout: &SpaceLayout,
    pair: &PairDrive<T>,
    delta: T,
) -> Result<Operator<T>> {
    layout.qubit_site(pair.qubit_m)?;
    layout.qubit_site(pair.qubit_n)?;
    let s = pair.strength(delta)?;
    let sm = embed_qubit::<T>(QubitOp::SigmaMinus, pair.qubit_m, layout)?;
    let sp = embed_qubit::<T>(QubitOp::SigmaPlus, pair.qubit_n, layout)?;
    let hop = (&sm * &sp).scale(cis(pair.phase_m - pair.phase_n) * s);
    Ok(&hop + &hop.adjoint())
}

fn lambda_system<T: Real>(
    dim: usize,
    couplings: &[(usize, usize, Cx<T>)],
) -> CMatrix<T> {
    let mut h = CMatrix::zeros(dim, dim);
    for &(top, bottom, c) in couplings {
        h[(top, bottom)] += c;
        h[(bottom, top)] += c.conj();
    }
    h
}

/// Single-qubit gate Hamiltonian on `(|0⟩_L, |1⟩_L, |a₁⟩)`:
/// `λ₁(sin(θ/2)e^{iφ}|a₁⟩⟨0| − cos(θ/2)|a₁⟩⟨1|) + h.c.`
pub fn h1_dfs<T: Real>(g12: T, g23: T, delta: T, phi: T) -> Result<CMatrix<T>> {
    let (lambda, theta) = gate_params(g12, g23, delta)?;
    let (s, c) = (theta / T::lit(2.0)).sin_cos();
    Ok(lambda_system(
        3,
        &[(2, 0, cis(phi) * (lambda * s)), (2, 1, re(-lambda * c))],
    ))
}

/// Commuting halves of the two-qubit gate Hamiltonian, `H₂ = λ₂(H_a + H_b)`,
/// on `(|00⟩, |01⟩, |10⟩, |11⟩)_L, |a₂⟩, |a₃⟩`. Returns `(λ₂, H_a, H_b)`.
pub fn h2_parts<T: Real>(g34: T, g36: T, delta: T, phi: T) -> Result<(T, CMatrix<T>, CMatrix<T>)> {
    let (lambda, vartheta) = gate_params(g34, g36, delta)?;
    let (s, c) = (vartheta / T::lit(2.0)).sin_cos();
    let ha = lambda_system(6, &[(4, 0, cis(phi) * s), (4, 1, re(-c))]);
    let hb = lambda_system(6, &[(5, 3, cis(phi) * s), (5, 2, re(-c))]);
    Ok((lambda, ha, hb))
}

/// Two-qubit gate Hamiltonian
/// `λ₂[sin(ϑ/2)e^{iφ}(|a₂⟩⟨00| + |a₃⟩⟨11|) − cos(ϑ/2)(|a₂⟩⟨01| + |a₃⟩⟨10|)] + h.c.`
pub fn h2_dfs<T: Real>(g34: T, g36: T, delta: T, phi: T) -> Result<CMatrix<T>> {
    let (lambda, ha, hb) = h2_parts(g34, g36, delta, phi)?;
    Ok((ha + hb) * re(lambda))
}

/// Splits a target angle into pair couplings `(g_a, g_b)`, the larger one
/// equal to `g_max`.
pub fn split_couplings<T: Real>(angle: T, g_max: T) -> Result<(T, T)> {
    if !(g_max > T::zero()) {
        return Err(Error::Parameter(format!("coupling must be positive, got {g_max}")));
    }
    if !(angle >= T::zero() && angle <= T::pi()) {
        return Err(Error::Parameter(format!("gate angle {angle} outside [0, pi]")));
    }
    if angle <= T::frac_pi_2() {
        Ok((couplings_for(angle, g_max)?, g_max))
    } else {
        let t = (angle / T::lit(2.0)).tan();
        let g_b = if t.is_finite() { g_max / t.sqrt() } else { T::zero() };
        Ok((g_max, g_b))
    }
}

/// Drive configuration of one holonomic gate: the two Raman pairs, the Λ
/// system they induce, and the π-pulse duration.
#[derive(Clone, Debug, PartialEq)]
pub struct GateDrive<T: Real> {
    pub gate: GateSpec<T>,
    pub pairs: [PairDrive<T>; 2],
    pub n_qubits: usize,
    pub lambda: T,
    pub tau: T,
    pub delta: T,
}

impl<T: Real> GateDrive<T> {
    /// Pairs (1,2) at δ₊ with phase difference φ and (2,3) at δ₋ for U1;
    /// pairs (3,4) at δ₊ and (3,6) at δ₋ for U2.
    pub fn new(gate: &GateSpec<T>, params: &PhysicalParams<T>) -> Result<Self> {
        let gate = gate.normalized();
        let (g_a, g_b) = split_couplings(gate.angle, params.raman_coupling)?;
        let (plus, minus, n_qubits) = match gate.kind {
            GateKind::U1 => ((1, 2), (2, 3), 3),
            GateKind::U2 => ((3, 4), (3, 6), 6),
        };
        let pairs = [
            PairDrive::new(plus.0, plus.1, g_a, DetuningSign::Plus, gate.phase, T::zero())?,
            PairDrive::new(minus.0, minus.1, g_b, DetuningSign::Minus, T::zero(), T::zero())?,
        ];
        let delta = params.raman_detuning;
        let (lambda, _) = gate_params(g_a, g_b, delta)?;
        let tau = crate::holonomy::pulse_time(lambda)?;
        Ok(Self { gate, pairs, n_qubits, lambda, tau, delta })
    }

    pub fn tones(&self) -> Result<Vec<DriveSpec<T>>> {
        let mut out = Vec::with_capacity(4);
        for p in &self.pairs {
            out.extend(p.tones(self.delta)?);
        }
        Ok(out)
    }

    /// Full rotating-frame Hamiltonian with level-shift compensation.
    pub fn full_hamiltonian(&self, layout: &SpaceLayout) -> Result<DrivenHamiltonian<T>> {
        let mut h = DrivenHamiltonian::from_drives(layout, &self.tones()?)?;
        for p in &self.pairs {
            h = h.with_static(&stark_compensation(layout, p, self.delta)?)?;
        }
        Ok(h)
    }

    /// Sum of the effective pair Hamiltonians.
    pub fn effective_hamiltonian(&self, layout: &SpaceLayout) -> Result<Operator<T>> {
        let mut h = Operator::zeros(layout);
        for p in &self.pairs {
            h = h.try_add(&effective_pair_hamiltonian(layout, p, self.delta)?)?;
        }
        Ok(h)
    }

    /// Gate Hamiltonian on the DFS basis.
    pub fn dfs_hamiltonian(&self) -> Result<CMatrix<T>> {
        let (g_a, g_b) = (self.pairs[0].coupling, self.pairs[1].coupling);
        match self.gate.kind {
            GateKind::U1 => h1_dfs(g_a, g_b, self.delta, self.gate.phase),
            GateKind::U2 => h2_dfs(g_a, g_b, self.delta, self.gate.phase),
        }
    }
}

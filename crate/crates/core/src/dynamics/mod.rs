//! Open-system time evolution.
//!
//! The master equation is
//! `ρ̇ = −i[H(t), ρ] + ½ Σ_k r_k (2 A_k ρ A_k† − A_k†A_k ρ − ρ A_k†A_k)`,
//! integrated with fixed-step fourth-order Runge–Kutta on the density matrix
//! (never a superoperator), optionally inside an excitation-bounded block.

mod integrate;
mod sparse;
mod subspace;

use std::sync::Arc;

pub use integrate::{integrate_master, integrate_master_collect, IntegrationReport};
pub use subspace::{excitation_restrict, Subspace};

use crate::error::{Error, Result};
use crate::hilbert::{
    cavity_annihilation, collective_op, embed_qubit, hermitian_eigenvalues, Collective, Operator,
    QubitOp, SpaceLayout,
};
use crate::model::PhysicalParams;
use crate::scalar::{max_abs_diff, re, CMatrix, CVector, Cx, Real};

/// Density matrix expressed in the coordinates of a [`Subspace`].
#[derive(Clone, Debug)]
pub struct DensityState<T: Real> {
    space: Arc<Subspace>,
    rho: CMatrix<T>,
}

impl<T: Real> DensityState<T> {
    pub fn new(space: Arc<Subspace>, rho: CMatrix<T>) -> Result<Self> {
        if rho.shape() != (space.dim(), space.dim()) {
            return Err(Error::Layout(format!(
                "density matrix {:?} for a {}-dimensional space",
                rho.shape(),
                space.dim()
            )));
        }
        Ok(Self { space, rho })
    }

    /// `|ψ⟩⟨ψ|` from a full-space vector, restricted to `space`.
    pub fn pure(space: Arc<Subspace>, psi: &CVector<T>) -> Result<Self> {
        let v = space.restrict_vector(psi)?;
        let norm = v.norm();
        if !(norm > T::zero()) {
            return Err(Error::Parameter("zero state vector".into()));
        }
        let v = v / re(norm);
        let rho = &v * v.adjoint();
        Ok(Self { space, rho })
    }

    /// Full-space density matrix on the whole layout.
    pub fn from_full(layout: &SpaceLayout, rho: CMatrix<T>) -> Result<Self> {
        Self::new(Arc::new(Subspace::full(layout)), rho)
    }

    /// Same state in a smaller subspace; fails if it has support outside.
    pub fn restricted_to(&self, space: Arc<Subspace>) -> Result<Self> {
        let full = self.space.lift(&self.rho);
        Ok(Self { rho: space.restrict_matrix(&full)?, space })
    }

    pub fn space(&self) -> &Arc<Subspace> {
        &self.space
    }

    pub fn layout(&self) -> &SpaceLayout {
        self.space.layout()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.rho
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix<T> {
        &mut self.rho
    }

    /// Density matrix on the whole layout.
    pub fn full_matrix(&self) -> CMatrix<T> {
        self.space.lift(&self.rho)
    }

    /// Element `⟨i|ρ|j⟩` for full-space indices (zero outside the subspace).
    pub fn element(&self, i: usize, j: usize) -> Cx<T> {
        match (self.space.position(i), self.space.position(j)) {
            (Some(a), Some(b)) => self.rho[(a, b)],
            _ => re(T::zero()),
        }
    }

    pub fn trace(&self) -> Cx<T> {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.rho, &self.rho.adjoint())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> T {
        let herm = (&self.rho + self.rho.adjoint()) * re(T::lit(0.5));
        hermitian_eigenvalues(&herm).first().copied().unwrap_or_else(T::zero)
    }
}

/// Lindblad channel `rate · L(op)`.
#[derive(Clone, Debug)]
pub struct CollapseChannel<T: Real> {
    pub label: String,
    pub op: Operator<T>,
    pub rate: T,
}

impl<T: Real> CollapseChannel<T> {
    pub fn new(label: impl Into<String>, op: Operator<T>, rate: T) -> Result<Self> {
        if !(rate >= T::zero()) {
            return Err(Error::Parameter(format!("collapse rate must be >= 0, got {rate}")));
        }
        Ok(Self { label: label.into(), op, rate })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseMode {
    /// `κ L(a) + γ L(S⁻) + γ_φ L(S^z)`.
    Collective,
    /// `κ L(a)` plus `γ_i L(σ_i⁻)` and `γ_φi L(σ_i^z)` per qubit, with the
    /// per-qubit multipliers.
    Individual,
}

pub fn build_channels<T: Real>(
    layout: &SpaceLayout,
    params: &PhysicalParams<T>,
    mode: NoiseMode,
) -> Result<Vec<CollapseChannel<T>>> {
    let mut out = vec![CollapseChannel::new("cavity", cavity_annihilation(layout)?, params.kappa)?];
    match mode {
        NoiseMode::Collective => {
            out.push(CollapseChannel::new(
                "S-",
                collective_op(Collective::SMinus, layout)?,
                params.gamma,
            )?);
            out.push(CollapseChannel::new(
                "Sz",
                collective_op(Collective::SZ, layout)?,
                params.gamma_phi,
            )?);
        }
        NoiseMode::Individual => {
            for q in 1..=layout.n_qubits() {
                let m = params.multiplier(q);
                out.push(CollapseChannel::new(
                    format!("sigma-_{q}"),
                    embed_qubit(QubitOp::SigmaMinus, q, layout)?,
                    params.gamma * m,
                )?);
            }
            for q in 1..=layout.n_qubits() {
                let m = params.multiplier(q);
                out.push(CollapseChannel::new(
                    format!("sigmaz_{q}"),
                    embed_qubit(QubitOp::SigmaZ, q, layout)?,
                    params.gamma_phi * m,
                )?);
            }
        }
    }
    Ok(out)
}

/// Dense right-hand side of the master equation on the full layout.
pub fn lindblad_rhs<T: Real>(
    rho: &CMatrix<T>,
    h: &Operator<T>,
    channels: &[CollapseChannel<T>],
) -> Result<CMatrix<T>> {
    let n = h.dim();
    if rho.shape() != (n, n) {
        return Err(Error::Layout(format!("rho {:?} against a {n}x{n} Hamiltonian", rho.shape())));
    }
    let hm = h.matrix();
    let minus_i = Cx::new(T::zero(), -T::one());
    let mut out = (hm * rho - rho * hm) * minus_i;
    let half = T::lit(0.5);
    for ch in channels {
        if ch.op.layout() != h.layout() {
            return Err(Error::Layout(format!(
                "channel {} on {} vs Hamiltonian on {}",
                ch.label,
                ch.op.layout(),
                h.layout()
            )));
        }
        let a = ch.op.matrix();
        let ad = a.adjoint();
        let ada = &ad * a;
        let term = (a * rho * &ad) * re(T::lit(2.0)) - &ada * rho - rho * &ada;
        out += term * re(half * ch.rate);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Full,
    /// Keep states with excitation ≤ initial excitation + margin.
    Excitation { margin: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationConfig<T: Real> {
    /// Nominal step in ns; the integrator shortens it slightly so that a whole
    /// number of steps lands on the end time.
    pub dt: T,
    /// End time in ns; `None` means one gate duration.
    pub t_end: Option<T>,
    /// Steps between recorded samples.
    pub sample_stride: usize,
    /// Photon cutoff.
    pub n_max: usize,
    pub truncation: Truncation,
}

impl<T: Real> IntegrationConfig<T> {
    /// Step resolving the fastest rotating-frame oscillation 2δ with 200
    /// steps per period.
    pub fn default_dt(delta: T) -> T {
        T::two_pi() / (T::lit(200.0) * T::lit(2.0) * delta)
    }

    /// Largest admissible step: 100 steps per period of 2δ.
    pub fn max_dt(delta: T) -> T {
        T::two_pi() / (T::lit(100.0) * T::lit(2.0) * delta)
    }

    pub fn for_detuning(delta: T) -> Self {
        Self {
            dt: Self::default_dt(delta),
            t_end: None,
            sample_stride: 100,
            n_max: 2,
            truncation: Truncation::Excitation { margin: 0 },
        }
    }

    pub fn validate(&self, delta: T) -> Result<()> {
        if !(self.dt > T::zero()) {
            return Err(Error::Parameter(format!("dt must be positive, got {}", self.dt)));
        }
        let bound = Self::max_dt(delta);
        if self.dt > bound {
            return Err(Error::Parameter(format!(
                "dt = {} ns exceeds the resolution bound 2*pi/(100*2*delta) = {} ns",
                self.dt, bound
            )));
        }
        if let Some(t) = self.t_end {
            if !(t > T::zero()) {
                return Err(Error::Parameter(format!("t_end must be positive, got {t}")));
            }
        }
        if self.sample_stride == 0 {
            return Err(Error::Parameter("sample_stride must be >= 1".into()));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidCutoff(self.n_max));
        }
        Ok(())
    }
}

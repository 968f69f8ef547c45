use super::sparse::SparseOp;
use super::{CollapseChannel, DensityState, Subspace};
use crate::error::{Error, Result};
use crate::hilbert::Operator;
use crate::model::DrivenHamiltonian;
use crate::scalar::{cx, modulus, CMatrix, Cx, Real};

/// Invariant bookkeeping over the recorded samples of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationReport<T: Real> {
    pub steps: usize,
    pub dt: T,
    pub samples: usize,
    pub max_trace_drift: T,
    pub max_hermiticity_error: T,
    pub min_eigenvalue: T,
}

// Trace drift beyond this means the step is unstable, not merely inaccurate.
const DIVERGENCE_DRIFT: f64 = 1e-2;

struct ToneTerm<T: Real> {
    a: SparseOp<T>,
    a_dag: SparseOp<T>,
    amplitude: Cx<T>,
    frequency: T,
}

/// Master-equation generator compiled to sparse form on a subspace.
struct Generator<T: Real> {
    h_eff: SparseOp<T>,
    h_eff_dag: SparseOp<T>,
    tones: Vec<ToneTerm<T>>,
    jumps: Vec<(SparseOp<T>, SparseOp<T>)>,
}

fn check_closed<T: Real>(space: &Subspace, op: &Operator<T>, what: &str) -> Result<()> {
    let m = op.matrix();
    for &j in space.indices() {
        for i in 0..m.nrows() {
            if space.position(i).is_none() && m[(i, j)].norm_sqr() > T::zero() {
                return Err(Error::Restriction(format!(
                    "{what} couples the simulated block to basis state {i}"
                )));
            }
        }
    }
    Ok(())
}

impl<T: Real> Generator<T> {
    fn compile(h: &DrivenHamiltonian<T>, channels: &[CollapseChannel<T>], space: &Subspace) -> Result<Self> {
        if h.layout() != space.layout() {
            return Err(Error::Layout(format!(
                "Hamiltonian on {} but state on {}",
                h.layout(),
                space.layout()
            )));
        }
        check_closed(space, h.static_part(), "static Hamiltonian")?;
        let mut h_eff = space.project(h.static_part())?;
        let mut jumps = Vec::with_capacity(channels.len());
        for ch in channels {
            if ch.rate == T::zero() {
                continue;
            }
            check_closed(space, &ch.op, &format!("channel {}", ch.label))?;
            let l = space.project(&ch.op)? * cx(ch.rate.sqrt(), T::zero());
            let ldl = l.adjoint() * &l;
            h_eff -= ldl * cx(T::zero(), T::lit(0.5));
            let sl = SparseOp::from_dense(&l);
            jumps.push((sl.clone(), sl.adjoint()));
        }
        let mut tones = Vec::with_capacity(h.tones().len());
        for tone in h.tones() {
            check_closed(space, &tone.op, "drive term")?;
            check_closed(space, &tone.op.adjoint(), "drive term")?;
            let a = SparseOp::from_dense(&space.project(&tone.op)?);
            tones.push(ToneTerm { a_dag: a.adjoint(), a, amplitude: tone.amplitude, frequency: tone.frequency });
        }
        let h_eff = SparseOp::from_dense(&h_eff);
        Ok(Self { h_eff_dag: h_eff.adjoint(), h_eff, tones, jumps })
    }

    fn rhs(&self, t: T, rho: &CMatrix<T>, out: &mut CMatrix<T>, scratch: &mut CMatrix<T>) {
        let mi = cx(T::zero(), -T::one());
        let pi = cx(T::zero(), T::one());
        out.fill(Cx::new(T::zero(), T::zero()));
        self.h_eff.left_acc(mi, rho, out);
        self.h_eff_dag.right_acc(pi, rho, out);
        for tone in &self.tones {
            let c = tone.amplitude * crate::scalar::cis(-tone.frequency * t);
            let cc = c.conj();
            tone.a.left_acc(mi * c, rho, out);
            tone.a_dag.left_acc(mi * cc, rho, out);
            tone.a.right_acc(pi * c, rho, out);
            tone.a_dag.right_acc(pi * cc, rho, out);
        }
        let one = cx(T::one(), T::zero());
        for (l, ld) in &self.jumps {
            scratch.fill(Cx::new(T::zero(), T::zero()));
            l.left_acc(one, rho, scratch);
            ld.right_acc(one, scratch, out);
        }
    }
}

/// `y += a·x`
fn add_scaled<T: Real>(y: &mut CMatrix<T>, a: Cx<T>, x: &CMatrix<T>) {
    for (d, s) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *d += a * *s;
    }
}

/// Integrates from t = 0 to `t_end` with fixed-step RK4.
///
/// `dt` is shortened to `t_end / ceil(t_end / dt)`. The observer sees the
/// state at t = 0, after every `stride` steps, and at `t_end`; invariants are
/// checked at those same samples.
pub fn integrate_master<T, F>(
    h: &DrivenHamiltonian<T>,
    channels: &[CollapseChannel<T>],
    initial: &DensityState<T>,
    t_end: T,
    dt: T,
    stride: usize,
    mut observer: F,
) -> Result<(DensityState<T>, IntegrationReport<T>)>
where
    T: Real,
    F: FnMut(T, &DensityState<T>),
{
    if !(t_end > T::zero()) || !(dt > T::zero()) {
        return Err(Error::Parameter(format!("need t_end > 0 and dt > 0, got {t_end} and {dt}")));
    }
    if stride == 0 {
        return Err(Error::Parameter("sample stride must be >= 1".into()));
    }
    let gen = Generator::compile(h, channels, initial.space())?;
    let steps = (t_end.as_f64() / dt.as_f64()).ceil().max(1.0) as usize;
    let dt = t_end / T::lit(steps as f64);
    let half = dt * T::lit(0.5);
    let sixth = cx(dt / T::lit(6.0), T::zero());
    let n = initial.space().dim();

    let mut state = initial.clone();
    let trace0 = state.trace();
    let mut report = IntegrationReport {
        steps,
        dt,
        samples: 0,
        max_trace_drift: T::zero(),
        max_hermiticity_error: T::zero(),
        min_eigenvalue: T::max_value().unwrap_or_else(T::one),
    };
    let mut record = |t: T, s: &DensityState<T>, report: &mut IntegrationReport<T>| -> Result<()> {
        let drift = modulus(s.trace() - trace0);
        if !drift.is_finite() || drift > T::lit(DIVERGENCE_DRIFT) {
            return Err(Error::IntegrationDiverged {
                time: t.as_f64(),
                reason: format!("trace drifted by {drift}"),
            });
        }
        report.samples += 1;
        report.max_trace_drift = report.max_trace_drift.max(drift);
        report.max_hermiticity_error = report.max_hermiticity_error.max(s.hermiticity_error());
        report.min_eigenvalue = report.min_eigenvalue.min(s.min_eigenvalue());
        observer(t, s);
        Ok(())
    };
    record(T::zero(), &state, &mut report)?;

    let zero = || CMatrix::<T>::zeros(n, n);
    let (mut k1, mut k2, mut k3, mut k4) = (zero(), zero(), zero(), zero());
    let (mut probe, mut scratch) = (zero(), zero());
    for step in 0..steps {
        let t = dt * T::lit(step as f64);
        let rho = state.matrix();
        gen.rhs(t, rho, &mut k1, &mut scratch);
        probe.copy_from(rho);
        add_scaled(&mut probe, cx(half, T::zero()), &k1);
        gen.rhs(t + half, &probe, &mut k2, &mut scratch);
        probe.copy_from(rho);
        add_scaled(&mut probe, cx(half, T::zero()), &k2);
        gen.rhs(t + half, &probe, &mut k3, &mut scratch);
        probe.copy_from(rho);
        add_scaled(&mut probe, cx(dt, T::zero()), &k3);
        gen.rhs(t + dt, &probe, &mut k4, &mut scratch);

        k2 *= cx(T::lit(2.0), T::zero());
        k3 *= cx(T::lit(2.0), T::zero());
        k1 += &k2;
        k1 += &k3;
        k1 += &k4;
        add_scaled(state.matrix_mut(), sixth, &k1);

        let done = step + 1;
        if done % stride == 0 || done == steps {
            let t_now = if done == steps { t_end } else { dt * T::lit(done as f64) };
            // a positive matrix has no entry larger than its trace
            let bound = modulus(trace0) * T::lit(1.0 + DIVERGENCE_DRIFT);
            if state.matrix().iter().any(|z| !(modulus(*z) <= bound)) {
                return Err(Error::IntegrationDiverged {
                    time: t_now.as_f64(),
                    reason: "density matrix entries exceed the trace".into(),
                });
            }
            record(t_now, &state, &mut report)?;
        }
    }
    Ok((state, report))
}

/// [`integrate_master`] keeping every sampled state.
pub fn integrate_master_collect<T: Real>(
    h: &DrivenHamiltonian<T>,
    channels: &[CollapseChannel<T>],
    initial: &DensityState<T>,
    t_end: T,
    dt: T,
    stride: usize,
) -> Result<(Vec<(T, DensityState<T>)>, IntegrationReport<T>)> {
    let mut out = Vec::new();
    let (_, report) = integrate_master(h, channels, initial, t_end, dt, stride, |t, s| out.push((t, s.clone())))?;
    Ok((out, report))
}

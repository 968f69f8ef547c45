//! Observables and experiment drivers: logical populations, fidelity, gate
//! runs on the full model, the Θ-scan, CSV output and the oracle suite.

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::dynamics::{
    build_channels, integrate_master, CollapseChannel, DensityState, IntegrationConfig,
    IntegrationReport, NoiseMode, Subspace, Truncation,
};
use crate::error::{Error, Result};
use crate::hilbert::{Collective, SpaceLayout};
use crate::holonomy::{
    cnot_construction, distance_up_to_phase, holonomic_u1_from_h1, holonomic_u2_from_h2,
    parallel_transport_check, propagator, u1_matrix, DfsEncoding, DfsKind, GateKind, GateSpec,
};
use crate::model::{DetuningSign, DrivenHamiltonian, GateDrive, PhysicalParams};
use crate::scalar::{cx, inner, max_abs_diff, modulus, re, CMatrix, CVector, Cx, Real};

/// Sampled populations and fidelity of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries<T: Real> {
    pub labels: Vec<String>,
    pub times: Vec<T>,
    /// One row per sample, one column per label.
    pub populations: Vec<Vec<T>>,
    pub fidelity: Vec<T>,
    /// Population outside the encoding with an empty cavity.
    pub leakage: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    fn new(labels: Vec<String>) -> Self {
        Self { labels, times: Vec::new(), populations: Vec::new(), fidelity: Vec::new(), leakage: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_fidelity(&self) -> Option<T> {
        self.fidelity.last().copied()
    }

    pub fn max_fidelity(&self) -> Option<T> {
        self.fidelity.iter().copied().reduce(|a, b| a.max(b))
    }

    pub fn column(&self, label: &str) -> Option<Vec<T>> {
        let k = self.labels.iter().position(|l| l == label)?;
        Some(self.populations.iter().map(|row| row[k]).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult<T: Real> {
    pub theta: Vec<T>,
    pub max_fidelity_identical: Vec<T>,
    pub max_fidelity_individual: Vec<T>,
}

/// Reads logical populations and a target fidelity off a density matrix
/// without forming the cavity-traced state.
struct Probe<T: Real> {
    /// Subspace positions of each label, one per photon number.
    label_positions: Vec<Vec<usize>>,
    /// Per photon number, `(position, target amplitude)`.
    target: Vec<Vec<(usize, Cx<T>)>>,
    vacuum_positions: Vec<usize>,
}

impl<T: Real> Probe<T> {
    fn new(space: &Subspace, enc: &DfsEncoding, target: &CVector<T>) -> Result<Self> {
        let layout = space.layout();
        if target.len() != enc.dim() && target.len() != enc.n_logical() {
            return Err(Error::Layout(format!(
                "target of length {} for an encoding of dimension {}",
                target.len(),
                enc.dim()
            )));
        }
        let norm = target.norm();
        if !(norm > T::zero()) {
            return Err(Error::Parameter("zero target state".into()));
        }
        let photons = layout.n_max().map_or(0, |n| n);
        let mut label_positions = vec![Vec::new(); enc.dim()];
        let mut tgt = Vec::new();
        let mut vacuum_positions = Vec::new();
        for n in 0..=photons {
            let mut row = Vec::new();
            for (i, slot) in label_positions.iter_mut().enumerate() {
                let idx = enc.index_in(layout, n, i)?;
                if let Some(p) = space.position(idx) {
                    slot.push(p);
                    if n == 0 {
                        vacuum_positions.push(p);
                    }
                    if i < target.len() {
                        row.push((p, target[i] / re(norm)));
                    }
                }
            }
            tgt.push(row);
        }
        Ok(Self { label_positions, target: tgt, vacuum_positions })
    }

    fn populations(&self, rho: &CMatrix<T>) -> Vec<T> {
        self.label_positions
            .iter()
            .map(|ps| ps.iter().fold(T::zero(), |acc, &p| acc + rho[(p, p)].re))
            .collect()
    }

    fn fidelity(&self, rho: &CMatrix<T>) -> T {
        let mut f = cx(T::zero(), T::zero());
        for row in &self.target {
            for &(p, a) in row {
                for &(q, b) in row {
                    f += a.conj() * rho[(p, q)] * b;
                }
            }
        }
        f.re
    }

    fn leakage(&self, rho: &CMatrix<T>) -> T {
        let inside = self.vacuum_positions.iter().fold(T::zero(), |acc, &p| acc + rho[(p, p)].re);
        rho.trace().re - inside
    }
}

/// `p_label = ⟨label| Tr_cavity ρ |label⟩` for every member of the encoding.
pub fn logical_populations<T: Real>(rho: &DensityState<T>, enc: &DfsEncoding) -> Result<Vec<T>> {
    let mut unit = CVector::zeros(enc.dim());
    unit[0] = re(T::one());
    Ok(Probe::new(rho.space(), enc, &unit)?.populations(rho.matrix()))
}

/// `⟨ψ| Tr_cavity ρ |ψ⟩` for a logical target given as amplitudes over the
/// encoding (length `n_logical` or `dim`). The target is normalized here.
pub fn state_fidelity<T: Real>(rho: &DensityState<T>, target: &CVector<T>, enc: &DfsEncoding) -> Result<T> {
    Ok(Probe::new(rho.space(), enc, target)?.fidelity(rho.matrix()))
}

/// Logical basis vector for a label such as `0L` or `01L`.
pub fn logical_basis<T: Real>(enc: &DfsEncoding, label: &str) -> Result<CVector<T>> {
    let k = enc
        .position(label)
        .filter(|&k| k < enc.n_logical())
        .ok_or_else(|| {
            let known: Vec<_> = enc.labels().take(enc.n_logical()).collect();
            Error::Parameter(format!("unknown logical state {label:?}; expected one of {known:?}"))
        })?;
    let mut v = CVector::zeros(enc.n_logical());
    v[k] = re(T::one());
    Ok(v)
}

/// Result of one gate simulation.
#[derive(Clone, Debug)]
pub struct GateRun<T: Real> {
    pub series: TimeSeries<T>,
    pub report: IntegrationReport<T>,
    pub tau: T,
    pub subspace_dim: usize,
}

impl<T: Real> GateRun<T> {
    pub fn final_fidelity(&self) -> T {
        self.series.final_fidelity().unwrap_or_else(T::zero)
    }
}

fn encoding_for(kind: GateKind) -> DfsEncoding {
    match kind {
        GateKind::U1 => DfsEncoding::s1(),
        GateKind::U2 => DfsEncoding::s2(),
    }
}

fn simulation_space(layout: &SpaceLayout, enc: &DfsEncoding, truncation: Truncation) -> Subspace {
    match truncation {
        Truncation::Full => Subspace::full(layout),
        Truncation::Excitation { margin } => Subspace::excitation(layout, enc.excitation() + margin),
    }
}

/// Full-model Lindblad run of a holonomic gate from a logical state with the
/// cavity empty. Runs until `cfg.t_end`, or one gate duration when unset; the
/// target is the analytic gate applied to `initial`.
pub fn run_gate<T: Real>(
    gate: &GateSpec<T>,
    initial: &CVector<T>,
    params: &PhysicalParams<T>,
    mode: NoiseMode,
    cfg: &IntegrationConfig<T>,
) -> Result<GateRun<T>> {
    params.validate()?;
    cfg.validate(params.raman_detuning)?;
    let enc = encoding_for(gate.kind);
    if initial.len() != enc.n_logical() {
        return Err(Error::Layout(format!(
            "initial logical state of length {} for a gate on {} states",
            initial.len(),
            enc.n_logical()
        )));
    }
    let drive = GateDrive::new(gate, params)?;
    let layout = SpaceLayout::cavity_qubits(cfg.n_max, drive.n_qubits)?;
    let h = drive.full_hamiltonian(&layout)?;
    let channels = build_channels(&layout, params, mode)?;
    let space = Arc::new(simulation_space(&layout, &enc, cfg.truncation));
    let psi0 = enc.physical_state(&layout, 0, initial)?;
    let rho0 = DensityState::pure(space.clone(), &psi0)?;
    let target = gate.matrix() * initial;
    let probe = Probe::new(&space, &enc, &target)?;

    let mut series = TimeSeries::new(enc.labels().map(str::to_string).collect());
    let t_end = cfg.t_end.unwrap_or(drive.tau);
    let (_, report) = integrate_master(&h, &channels, &rho0, t_end, cfg.dt, cfg.sample_stride, |t, s| {
        let m = s.matrix();
        series.times.push(t);
        series.populations.push(probe.populations(m));
        series.fidelity.push(probe.fidelity(m));
        series.leakage.push(probe.leakage(m));
    })?;
    Ok(GateRun { series, report, tau: drive.tau, subspace_dim: space.dim() })
}

pub fn run_single_qubit_gate<T: Real>(
    theta: T,
    phi: T,
    initial: &CVector<T>,
    params: &PhysicalParams<T>,
    mode: NoiseMode,
    cfg: &IntegrationConfig<T>,
) -> Result<GateRun<T>> {
    run_gate(&GateSpec::new(GateKind::U1, theta, phi)?, initial, params, mode, cfg)
}

pub fn run_two_qubit_gate<T: Real>(
    vartheta: T,
    phi: T,
    initial: &CVector<T>,
    params: &PhysicalParams<T>,
    mode: NoiseMode,
    cfg: &IntegrationConfig<T>,
) -> Result<GateRun<T>> {
    run_gate(&GateSpec::new(GateKind::U2, vartheta, phi)?, initial, params, mode, cfg)
}

/// `n_points` equally spaced values of Θ in `[0, π]`.
pub fn theta_grid<T: Real>(n_points: usize) -> Result<Vec<T>> {
    if n_points < 2 {
        return Err(Error::Parameter(format!("theta scan needs at least 2 points, got {n_points}")));
    }
    Ok((0..n_points)
        .map(|k| T::pi() * T::lit(k as f64) / T::lit((n_points - 1) as f64))
        .collect())
}

/// Maximum fidelity over `[0, 1.2τ]` from `cos Θ|0⟩_L + sin Θ|1⟩_L`, with
/// identical collective rates and with individual per-qubit rates.
/// Points run in parallel; results are ordered by grid index.
pub fn theta_scan<T: Real>(
    gate: &GateSpec<T>,
    n_points: usize,
    params: &PhysicalParams<T>,
    cfg: &IntegrationConfig<T>,
) -> Result<ScanResult<T>> {
    if gate.kind != GateKind::U1 {
        return Err(Error::Parameter("the theta scan is defined for the single-qubit gate".into()));
    }
    let theta = theta_grid::<T>(n_points)?;
    let drive = GateDrive::new(gate, params)?;
    let mut cfg = cfg.clone();
    cfg.t_end = Some(drive.tau * T::lit(1.2));
    let jobs: Vec<(usize, NoiseMode)> = (0..n_points)
        .flat_map(|k| [(k, NoiseMode::Collective), (k, NoiseMode::Individual)])
        .collect();
    let results: Vec<Result<T>> = jobs
        .par_iter()
        .map(|&(k, mode)| {
            let th = theta[k];
            let init = CVector::from_vec(vec![re(th.cos()), re(th.sin())]);
            let run = run_gate(gate, &init, params, mode, &cfg)?;
            Ok(run.series.max_fidelity().unwrap_or_else(T::zero))
        })
        .collect();
    let mut identical = Vec::with_capacity(n_points);
    let mut individual = Vec::with_capacity(n_points);
    for (r, &(_, mode)) in results.into_iter().zip(&jobs) {
        match mode {
            NoiseMode::Collective => identical.push(r?),
            NoiseMode::Individual => individual.push(r?),
        }
    }
    Ok(ScanResult { theta, max_fidelity_identical: identical, max_fidelity_individual: individual })
}

/// Formats with 9 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..9).contains(&exp) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_time_series<T: Real, W: Write>(mut w: W, ts: &TimeSeries<T>) -> io::Result<()> {
    let mut header = vec!["time_ns".to_string()];
    header.extend(ts.labels.iter().map(|l| format!("pop_{l}")));
    header.push("fidelity".into());
    writeln!(w, "{}", header.join(","))?;
    for ((t, row), f) in ts.times.iter().zip(&ts.populations).zip(&ts.fidelity) {
        let mut cells = vec![format_sig(t.as_f64())];
        cells.extend(row.iter().map(|p| format_sig(p.as_f64())));
        cells.push(format_sig(f.as_f64()));
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_scan<T: Real, W: Write>(mut w: W, scan: &ScanResult<T>) -> io::Result<()> {
    writeln!(w, "theta_over_pi,maxF_identical,maxF_individual")?;
    for ((th, a), b) in scan.theta.iter().zip(&scan.max_fidelity_identical).zip(&scan.max_fidelity_individual) {
        writeln!(
            w,
            "{},{},{}",
            format_sig(th.as_f64() / std::f64::consts::PI),
            format_sig(a.as_f64()),
            format_sig(b.as_f64())
        )?;
    }
    Ok(())
}

/// Complex matrix as CSV, each entry written as `re,im`.
pub fn write_matrix<T: Real, W: Write>(mut w: W, m: &CMatrix<T>) -> io::Result<()> {
    for i in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols())
            .map(|j| format!("{},{}", format_sig(m[(i, j)].re.as_f64()), format_sig(m[(i, j)].im.as_f64())))
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Overlap between a full-model run and the effective-Hamiltonian evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<T: Real> {
    /// `⟨ψ_eff(t)|ρ(t)|ψ_eff(t)⟩` at the end time.
    pub final_overlap: T,
    /// Smallest overlap over the recorded samples.
    pub min_overlap: T,
}

/// Integrates `h_full` without dissipation from `psi0` and compares against
/// `exp(−i h_eff t) psi0` at every sample.
pub fn compare_with_effective<T: Real>(
    h_full: &DrivenHamiltonian<T>,
    h_eff: &CMatrix<T>,
    psi0: &CVector<T>,
    space: Arc<Subspace>,
    t_end: T,
    dt: T,
    stride: usize,
) -> Result<Comparison<T>> {
    let rho0 = DensityState::pure(space, psi0)?;
    let channels: Vec<CollapseChannel<T>> = Vec::new();
    let mut min_overlap = T::one();
    let mut last = T::one();
    let mut failure = None;
    integrate_master(h_full, &channels, &rho0, t_end, dt, stride, |t, s| {
        let phi = propagator(h_eff, t) * psi0;
        let phi = match s.space().restrict_vector(&phi) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                return;
            }
        };
        let f = inner(&phi, &(s.matrix() * &phi)).re;
        min_overlap = min_overlap.min(f);
        last = f;
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Comparison { final_overlap: last, min_overlap })
}

/// Two qubits exchanging an excitation through one Raman pair: full model vs
/// the effective flip-flop Hamiltonian, from `|10⟩` with the cavity empty, up
/// to complete transfer at `t = π|δ|/(2g²)`.
pub fn pair_exchange_comparison<T: Real>(
    params: &PhysicalParams<T>,
    sign: DetuningSign,
    n_max: usize,
    dt: T,
) -> Result<Comparison<T>> {
    use crate::model::{effective_pair_hamiltonian, stark_compensation, PairDrive};
    let pair = PairDrive::new(1, 2, params.raman_coupling, sign, T::zero(), T::zero())?;
    let delta = params.raman_detuning;
    let layout = SpaceLayout::cavity_qubits(n_max, 2)?;
    let h = DrivenHamiltonian::from_drives(&layout, &pair.tones(delta)?)?
        .with_static(&stark_compensation(&layout, &pair, delta)?)?;
    let h_eff = effective_pair_hamiltonian(&layout, &pair, delta)?;
    let psi0 = crate::hilbert::basis_state(&layout, &[0, 1, 0])?;
    let g = params.raman_coupling;
    let t_end = T::pi() * delta.abs() / (T::lit(2.0) * g * g);
    let space = Arc::new(Subspace::excitation(&layout, 1));
    compare_with_effective(&h, h_eff.matrix(), &psi0, space, t_end, dt, 100)
}

/// Knobs for the oracle suite; the flag exists for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleOptions {
    /// Builds the physical drives with the second pair's detuning sign
    /// reversed while the reference keeps the intended one.
    pub flip_minus_detuning: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    /// `value >= tolerance` when true, `value <= tolerance` otherwise.
    pub at_least: bool,
    pub passed: bool,
}

impl OracleOutcome {
    fn below(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, value, tolerance, at_least: false, passed: value <= tolerance }
    }

    fn above(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, value, tolerance, at_least: true, passed: value >= tolerance }
    }
}

/// Effective-vs-full comparison for the single-qubit gate U₁(π/2, 0), no
/// dissipation, from `|0⟩_L`. Returns the smallest overlap over the run.
pub fn gate_effective_vs_full<T: Real>(
    params: &PhysicalParams<T>,
    cfg: &IntegrationConfig<T>,
    options: OracleOptions,
) -> Result<Comparison<T>> {
    let gate = GateSpec::u1(T::frac_pi_2(), T::zero());
    let drive = GateDrive::new(&gate, params)?;
    let layout = SpaceLayout::cavity_qubits(cfg.n_max, drive.n_qubits)?;
    let h_eff = drive.effective_hamiltonian(&layout)?;
    let mut built = drive.clone();
    if options.flip_minus_detuning {
        built.pairs[1].sign = built.pairs[1].sign.flipped();
    }
    let h = built.full_hamiltonian(&layout)?;
    let enc = DfsEncoding::s1();
    let psi0 = enc.physical_state(&layout, 0, &logical_basis(&enc, "0L")?)?;
    let space = Arc::new(simulation_space(&layout, &enc, cfg.truncation));
    compare_with_effective(&h, h_eff.matrix(), &psi0, space, drive.tau, cfg.dt, cfg.sample_stride)
}

/// Holonomy checks on a fixed set of gate parameters.
fn holonomy_oracles<T: Real>(params: &PhysicalParams<T>) -> Result<Vec<OracleOutcome>> {
    let angles = [(0.3, 0.0), (0.7853981633974483, 0.0), (1.5707963267948966, 0.0), (1.1, 0.9), (2.4, -2.0)];
    let mut cyclic = 0.0f64;
    let mut transport = 0.0f64;
    for &(a, p) in &angles {
        let (a, p) = (T::lit(a), T::lit(p));
        let d1 = GateDrive::new(&GateSpec::u1(a, p), params)?;
        let h1 = d1.dfs_hamiltonian()?;
        let u = holonomic_u1_from_h1(&h1, d1.tau)?;
        cyclic = cyclic.max(distance_up_to_phase(&u, &u1_matrix(a, p)).as_f64());
        let basis: Vec<CVector<T>> = (0..2).map(|k| CVector::from_fn(3, |i, _| re(if i == k { T::one() } else { T::zero() }))).collect();
        transport = transport.max(parallel_transport_check(&h1, &basis, d1.tau, 20)?.as_f64());

        let d2 = GateDrive::new(&GateSpec::u2(a, p), params)?;
        let h2 = d2.dfs_hamiltonian()?;
        let u2 = holonomic_u2_from_h2(&h2, d2.tau)?;
        let (_, ha, hb) = crate::model::h2_parts(d2.pairs[0].coupling, d2.pairs[1].coupling, d2.delta, p)?;
        let pi = T::pi();
        let product = propagator(&ha, pi) * propagator(&hb, pi);
        let block = product.view((0, 0), (4, 4)).into_owned();
        cyclic = cyclic.max(distance_up_to_phase(&u2, &block).as_f64());
        let basis: Vec<CVector<T>> = (0..4).map(|k| CVector::from_fn(6, |i, _| re(if i == k { T::one() } else { T::zero() }))).collect();
        transport = transport.max(parallel_transport_check(&h2, &basis, d2.tau, 20)?.as_f64());
    }
    let cnot = cnot_construction::<T>();
    let mut expected = CMatrix::<T>::zeros(4, 4);
    expected[(0, 0)] = re(T::one());
    expected[(1, 1)] = re(T::one());
    expected[(2, 3)] = cx(T::zero(), -T::one());
    expected[(3, 2)] = cx(T::zero(), -T::one());
    Ok(vec![
        OracleOutcome::below("holonomy cyclicity", cyclic, 1e-9),
        OracleOutcome::below("parallel transport", transport, 1e-10),
        OracleOutcome::below("CNOT composition", max_abs_diff(&cnot, &expected).as_f64(), 1e-12),
    ])
}

/// The oracle suite behind the `verify` command.
pub fn oracle_suite<T: Real>(
    params: &PhysicalParams<T>,
    cfg: &IntegrationConfig<T>,
    options: OracleOptions,
) -> Result<Vec<OracleOutcome>> {
    let clean = params.without_decoherence();
    let cmp = gate_effective_vs_full(&clean, cfg, options)?;
    let mut out = vec![OracleOutcome::above("effective vs full", cmp.min_overlap.as_f64(), 0.98)];
    out.extend(holonomy_oracles(&clean)?);
    Ok(out)
}

/// Changes in the final fidelity of one gate run under refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport<T: Real> {
    pub fidelity: T,
    pub dt_halved_delta: T,
    pub n_max_raised_delta: T,
    pub report: IntegrationReport<T>,
}

/// Runs the gate from `initial` at `cfg`, at `dt/2`, and at `n_max + 1`.
pub fn convergence<T: Real>(
    gate: &GateSpec<T>,
    initial: &CVector<T>,
    params: &PhysicalParams<T>,
    mode: NoiseMode,
    cfg: &IntegrationConfig<T>,
) -> Result<ConvergenceReport<T>> {
    let base = run_gate(gate, initial, params, mode, cfg)?;
    let mut fine = cfg.clone();
    fine.dt = cfg.dt * T::lit(0.5);
    fine.sample_stride = cfg.sample_stride * 2;
    let mut deep = cfg.clone();
    deep.n_max = cfg.n_max + 1;
    let runs: Vec<Result<GateRun<T>>> =
        [fine, deep].par_iter().map(|c| run_gate(gate, initial, params, mode, c)).collect();
    let mut runs = runs.into_iter();
    let fine = runs.next().expect("two runs")?;
    let deep = runs.next().expect("two runs")?;
    let f = base.final_fidelity();
    Ok(ConvergenceReport {
        fidelity: f,
        dt_halved_delta: (fine.final_fidelity() - f).abs(),
        n_max_raised_delta: (deep.final_fidelity() - f).abs(),
        report: base.report,
    })
}

/// Eigenvalue of the collective `S^z` on each member of an encoding, read
/// off the operator itself.
pub fn collective_sz_on<T: Real>(kind: DfsKind) -> Result<Vec<T>> {
    let enc = DfsEncoding::of(kind);
    let layout = SpaceLayout::qubits(enc.n_qubits())?;
    let sz = crate::hilbert::collective_op::<T>(Collective::SZ, &layout)?;
    let mut out = Vec::with_capacity(enc.dim());
    for i in 0..enc.dim() {
        let idx = enc.index_in(&layout, 0, i)?;
        let col = sz.matrix().column(idx);
        let off = col.iter().enumerate().filter(|&(r, _)| r != idx).fold(T::zero(), |m, (_, z)| m.max(modulus(*z)));
        if off > T::zero() {
            return Err(Error::Parameter(format!("member {i} is not an S^z eigenstate")));
        }
        out.push(col[idx].re);
    }
    Ok(out)
}

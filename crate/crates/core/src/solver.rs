//! Time integration of the mollified system
//! `v_t + J_m[v] . grad v + grad pi = nu Lap v` on the torus.

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::init::InitialCondition;
use crate::ledger::TimeSeriesLedger;
use crate::mollifier::MollifierSpec;
use crate::ops;
use crate::real::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const RUN_SCHEMA: &str = "mollns/run/v1";

fn default_schema() -> String {
    RUN_SCHEMA.to_string()
}
fn default_viscosity<T: Real>() -> T {
    T::one()
}
fn default_stride() -> usize {
    1
}
fn default_true() -> bool {
    true
}
fn default_qs<T: Real>() -> Vec<T> {
    vec![T::of(8.0), T::of(16.0), T::of(64.0)]
}
fn default_ceiling<T: Real>() -> T {
    T::of(1e6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Backward Euler on the Stokes term, forward Euler on the advection.
    ImexEuler,
    /// Exact per-mode solve of the Stokes term (the stiff part is integrated
    /// by its exponential factor), second-order Adams-Bashforth on the
    /// mollified advection; the first step is bootstrapped with ten
    /// exponential-Euler substeps at dt/10.
    #[default]
    ImexCnAb2,
}

impl Integrator {
    pub fn identifier(&self) -> &'static str {
        match self {
            Integrator::ImexEuler => "imex-euler",
            Integrator::ImexCnAb2 => "imex-cn-ab2(exact-stokes)",
        }
    }
}

/// Full description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct SimConfig<T: Real> {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub grid: GridSpec,
    #[serde(default = "default_viscosity")]
    pub viscosity: T,
    pub mollifier: MollifierSpec<T>,
    pub dt: T,
    pub t_final: T,
    pub initial_condition: InitialCondition<T>,
    /// `v0^m = J_m[v0]` when true (default), `v0^m = v0` when false.
    #[serde(default = "default_true")]
    pub mollify_initial: bool,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
    /// Store velocity snapshots every this many steps (also stores t = 0 and
    /// the final step). None disables snapshots.
    #[serde(default)]
    pub snapshot_stride: Option<usize>,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Exponents of the ledger's Lq columns.
    #[serde(default = "default_qs")]
    pub norm_qs: Vec<T>,
    #[serde(default = "default_ceiling")]
    pub blowup_ceiling: T,
}

/// Stability record evaluated at construction time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StabilityRecord<T: Real> {
    pub diffusive_bound: T,
    pub advective_bound: T,
    pub v0_linf: T,
}

impl<T: Real> SimConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.schema != RUN_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: RUN_SCHEMA.into(),
                got: self.schema.clone(),
            });
        }
        self.grid.validate()?;
        self.mollifier.validate()?;
        self.initial_condition.validate(self.grid)?;
        if !(self.viscosity > T::zero()) {
            return Err(Error::InvalidConfig("viscosity must be positive".into()));
        }
        if !(self.dt > T::zero()) {
            return Err(Error::InvalidConfig("dt must be positive".into()));
        }
        if self.t_final < self.dt {
            return Err(Error::InvalidConfig("t_final must be >= dt".into()));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidConfig("sample_stride must be >= 1".into()));
        }
        if self.snapshot_stride == Some(0) {
            return Err(Error::InvalidConfig("snapshot_stride must be >= 1".into()));
        }
        for &q in &self.norm_qs {
            if q < T::one() {
                return Err(Error::BadNormExponent(q.to64()));
            }
        }
        Ok(())
    }

    /// Stability bounds: `dt <= 0.5 h^2 / nu` and `dt <= 0.25 h / |v0|_inf`.
    pub fn stability(&self, v0_linf: T) -> StabilityRecord<T> {
        let h = T::of(self.grid.spacing());
        let diffusive = T::of(0.5) * h * h / self.viscosity;
        let advective = if v0_linf > T::zero() {
            T::of(0.25) * h / v0_linf
        } else {
            T::infinity()
        };
        StabilityRecord {
            diffusive_bound: diffusive,
            advective_bound: advective,
            v0_linf,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().to64() as usize
    }

    /// Content hash of (config, v0 coefficients); identifies a run.
    pub fn run_hash(&self, v0: &SpectralField<T>) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(self).expect("config serializes"));
        for c in 0..v0.components() {
            for z in v0.comp(c) {
                hasher.update(z.re.to64().to_le_bytes());
                hasher.update(z.im.to64().to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Hash of a bare field (content address for v0).
pub fn field_hash<T: Real>(v: &SpectralField<T>) -> String {
    let mut hasher = Sha256::new();
    for c in 0..v.components() {
        for z in v.comp(c) {
            hasher.update(z.re.to64().to_le_bytes());
            hasher.update(z.im.to64().to_le_bytes());
        }
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Current integration state: time, velocity, cached advection and pressure.
#[derive(Debug, Clone)]
pub struct SimState<T: Real> {
    pub t: T,
    pub v: SpectralField<T>,
    pub nonlinear: SpectralField<T>,
    pub pressure: SpectralField<T>,
}

/// A stored velocity snapshot.
#[derive(Debug, Clone)]
pub struct Snapshot<T: Real> {
    pub t: T,
    pub v: SpectralField<T>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutput<T: Real> {
    pub config: SimConfig<T>,
    pub ledger: TimeSeriesLedger<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub v0_hash: String,
    pub run_hash: String,
    pub stability: StabilityRecord<T>,
}

/// Mollified advection term. Returns `(P(J_m[v] . grad v), J_m[v] . grad v)`
/// - the projected term that drives the dynamics and the raw (dealiased)
/// product the pressure is recovered from.
pub fn advection<T: Real>(
    v: &SpectralField<T>,
    m: &MollifierSpec<T>,
    dealias: bool,
    fft: &GridFft<T>,
) -> (SpectralField<T>, SpectralField<T>) {
    let grid = v.grid();
    let d = grid.dimension;
    let w_phys = m.apply(v).to_physical(fft);
    let mut product: Vec<Vec<T>> = vec![vec![T::zero(); grid.point_count()]; d];
    for i in 0..d {
        let vi = component_field(v, i);
        for (j, wj) in w_phys.iter().enumerate() {
            let dj_vi = ops::derivative(&vi, j).to_physical(fft);
            for (p, (&w, &g)) in product[i].iter_mut().zip(wj.iter().zip(&dj_vi[0])) {
                *p += w * g;
            }
        }
    }
    let mut raw = SpectralField::from_physical(grid, &product, fft).expect("grid sizes match");
    if dealias {
        ops::dealias(&mut raw);
    }
    raw.zero_mean();
    let projected = ops::leray_project(&raw);
    (projected, raw)
}

fn component_field<T: Real>(v: &SpectralField<T>, i: usize) -> SpectralField<T> {
    SpectralField::from_components(v.grid(), vec![v.comp(i).to_vec()]).expect("same grid")
}

/// `P(J_m[v] . grad v)`, the projected mollified advection.
pub fn nonlinear_term<T: Real>(
    v: &SpectralField<T>,
    m: &MollifierSpec<T>,
    dealias: bool,
    fft: &GridFft<T>,
) -> SpectralField<T> {
    advection(v, m, dealias, fft).0
}

/// Zero-mean pressure from the spectral Poisson problem
/// `-Lap pi = div(J_m[v] . grad v)`, with the sign fixed so the momentum
/// balance reads `v_t + a + grad pi = nu Lap v`, i.e. `a + grad pi = P a`.
pub fn pressure<T: Real>(
    v: &SpectralField<T>,
    m: &MollifierSpec<T>,
    dealias: bool,
    fft: &GridFft<T>,
) -> SpectralField<T> {
    let (_, raw) = advection(v, m, dealias, fft);
    pressure_from_advection(&raw)
}

/// Solve the Poisson problem given the raw advection term.
pub fn pressure_from_advection<T: Real>(raw: &SpectralField<T>) -> SpectralField<T> {
    let grid = raw.grid();
    let d = grid.dimension;
    let mut p = SpectralField::zeros(grid, 1);
    for mode in grid.modes() {
        let ksq = mode.k_sq();
        if ksq == 0 {
            continue;
        }
        let mut dot = Complex::new(T::zero(), T::zero());
        for axis in 0..d {
            dot += raw.comp(axis)[mode.flat] * T::of(mode.k[axis] as f64);
        }
        // pi_hat = i (k . a_hat) / |k|^2
        p.comp_mut(0)[mode.flat] = Complex::new(T::zero(), T::one()) * dot / T::of(ksq as f64);
    }
    p
}

/// Right-hand side `nu P Lap v - P(J_m[v] . grad v)`; its L2 norm squared is
/// the ledger's `Tt` column.
pub fn rhs<T: Real>(
    v: &SpectralField<T>,
    m: &MollifierSpec<T>,
    viscosity: T,
    dealias: bool,
    fft: &GridFft<T>,
) -> SpectralField<T> {
    let mut out = ops::stokes_laplacian(v);
    out.scale(viscosity);
    out.axpy(-T::one(), &nonlinear_term(v, m, dealias, fft));
    out
}

/// Instantaneous `d/dt |grad v|_2^2 = -2 nu |P Lap v|_2^2
/// + 2 (P(J_m[v] . grad v), P Lap v)`, evaluated spectrally.
pub fn grad_energy_rate<T: Real>(
    v: &SpectralField<T>,
    m: &MollifierSpec<T>,
    viscosity: T,
    dealias: bool,
    fft: &GridFft<T>,
) -> T {
    let lap = ops::stokes_laplacian(v);
    let nl = nonlinear_term(v, m, dealias, fft);
    let s = ops::l2_norm_sq(&lap);
    -T::of(2.0) * viscosity * s + T::of(2.0) * ops::l2_inner(&nl, &lap)
}

struct Stepper<T: Real> {
    config: SimConfig<T>,
    fft: GridFft<T>,
    refined: GridFft<T>,
    /// exp(-nu |k|^2 dt) per flat index
    exp_factor: Vec<T>,
    /// 1 / (1 + nu |k|^2 dt) per flat index
    euler_factor: Vec<T>,
}

impl<T: Real> Stepper<T> {
    fn new(config: &SimConfig<T>) -> Self {
        let grid = config.grid;
        let mut exp_factor = vec![T::zero(); grid.point_count()];
        let mut euler_factor = vec![T::zero(); grid.point_count()];
        for mode in grid.modes() {
            let lam = config.viscosity * T::of(mode.k_sq() as f64);
            exp_factor[mode.flat] = (-lam * config.dt).exp();
            euler_factor[mode.flat] = T::one() / (T::one() + lam * config.dt);
        }
        Stepper {
            config: config.clone(),
            fft: GridFft::new(grid),
            refined: GridFft::new(grid.refined()),
            exp_factor,
            euler_factor,
        }
    }

    fn nonlinear(&self, v: &SpectralField<T>) -> SpectralField<T> {
        nonlinear_term(v, &self.config.mollifier, self.config.dealias, &self.fft)
    }

    fn renormalize(&self, v: &mut SpectralField<T>) {
        *v = ops::leray_project(v);
        v.zero_mean();
    }

    /// One step of backward-Euler diffusion + forward-Euler advection.
    fn step_imex_euler(&self, v: &mut SpectralField<T>, nl: &SpectralField<T>) {
        for c in 0..v.grid().dimension {
            let (dt,) = (self.config.dt,);
            let factors = &self.euler_factor;
            let nlc = nl.comp(c).to_vec();
            for (flat, z) in v.comp_mut(c).iter_mut().enumerate() {
                *z = (*z - nlc[flat] * dt) * factors[flat];
            }
        }
        self.renormalize(v);
    }

    /// One exponential-Euler substep with step `h` (bootstrap only).
    fn substep_exp_euler(&self, v: &mut SpectralField<T>, h: T) {
        let nl = self.nonlinear(v);
        let grid = v.grid();
        for c in 0..grid.dimension {
            let nlc = nl.comp(c).to_vec();
            let nu = self.config.viscosity;
            for mode in grid.modes() {
                let lam = nu * T::of(mode.k_sq() as f64);
                let phi = (-lam * h).exp();
                let z = v.comp_mut(c);
                z[mode.flat] = (z[mode.flat] - nlc[mode.flat] * h) * phi;
            }
        }
        self.renormalize(v);
    }

    /// Exact Stokes factor + AB2 advection:
    /// `v' = phi v - dt (3/2 phi N^n - 1/2 phi^2 N^{n-1})`.
    fn step_cn_ab2(
        &self,
        v: &mut SpectralField<T>,
        nl: &SpectralField<T>,
        nl_prev: &SpectralField<T>,
    ) {
        let dt = self.config.dt;
        let c32 = T::of(1.5);
        let c12 = T::of(0.5);
        for c in 0..v.grid().dimension {
            let nlc = nl.comp(c).to_vec();
            let nlp = nl_prev.comp(c).to_vec();
            let factors = &self.exp_factor;
            for (flat, z) in v.comp_mut(c).iter_mut().enumerate() {
                let phi = factors[flat];
                *z = *z * phi - (nlc[flat] * (c32 * phi) - nlp[flat] * (c12 * phi * phi)) * dt;
            }
        }
        self.renormalize(v);
    }
}

/// Integrate the configured run and collect the ledger (and snapshots when
/// enabled). Divergence-freeness is re-enforced by projection after every
/// step; the blow-up guard aborts on a non-finite state or when the sup norm
/// exceeds the configured ceiling.
pub fn run<T: Real>(config: &SimConfig<T>) -> Result<RunOutput<T>> {
    config.validate()?;
    let stepper = Stepper::new(config);
    let v0_master = config.initial_condition.generate(config.grid)?;
    let v0_hash = field_hash(&v0_master);
    let mut v = if config.mollify_initial {
        config.mollifier.apply(&v0_master)
    } else {
        v0_master
    };
    stepper.renormalize(&mut v);

    let v0_linf = ops::norm_inf(&v, &stepper.refined);
    let stability = config.stability(v0_linf);
    if config.dt > stability.diffusive_bound || config.dt > stability.advective_bound {
        return Err(Error::InvalidConfig(format!(
            "dt = {} exceeds the stability bound min({:e}, {:e})",
            config.dt, stability.diffusive_bound, stability.advective_bound
        )));
    }
    let run_hash = config.run_hash(&v);

    let steps = config.steps();
    let mut ledger = TimeSeriesLedger::new(config.norm_qs.clone());
    let mut snapshots = Vec::new();
    let mut nl = stepper.nonlinear(&v);
    let mut nl_prev = nl.clone();

    for step in 0..=steps {
        let t = config.dt * T::of(step as f64);

        if !v.is_finite() {
            return Err(Error::NonFinite { t: t.to64() });
        }
        if step % config.sample_stride == 0 || step == steps {
            sample(config, &stepper, &mut ledger, t, &v, &nl)?;
        }
        if let Some(stride) = config.snapshot_stride {
            if step % stride == 0 || step == steps {
                snapshots.push(Snapshot { t, v: v.clone() });
            }
        }
        if step == steps {
            break;
        }

        match config.integrator {
            Integrator::ImexEuler => {
                stepper.step_imex_euler(&mut v, &nl);
                nl = stepper.nonlinear(&v);
            }
            Integrator::ImexCnAb2 => {
                if step == 0 {
                    nl_prev = nl.clone();
                    let h = config.dt / T::of(10.0);
                    for _ in 0..10 {
                        stepper.substep_exp_euler(&mut v, h);
                    }
                } else {
                    let next_prev = nl.clone();
                    stepper.step_cn_ab2(&mut v, &nl, &nl_prev);
                    nl_prev = next_prev;
                }
                nl = stepper.nonlinear(&v);
            }
        }
    }

    Ok(RunOutput {
        config: config.clone(),
        ledger,
        snapshots,
        v0_hash,
        run_hash,
        stability,
    })
}

fn sample<T: Real>(
    config: &SimConfig<T>,
    stepper: &Stepper<T>,
    ledger: &mut TimeSeriesLedger<T>,
    t: T,
    v: &SpectralField<T>,
    nl: &SpectralField<T>,
) -> Result<()> {
    let lap = ops::stokes_laplacian(v);
    let e = ops::l2_norm_sq(v);
    let d = ops::gradient_norm_sq(v);
    let s = ops::l2_norm_sq(&lap);
    let mut vt = lap.scaled(config.viscosity);
    vt.axpy(-T::one(), nl);
    let tt = ops::l2_norm_sq(&vt);
    let g = -T::of(2.0) * config.viscosity * s + T::of(2.0) * ops::l2_inner(nl, &lap);
    let mag = v.pointwise_magnitude(&stepper.refined);
    let grid = stepper.refined.grid();
    let cell = T::of(grid.spacing().powi(grid.dimension as i32));
    let mut lq = Vec::with_capacity(config.norm_qs.len());
    for &q in &config.norm_qs {
        if q == T::of(2.0) {
            lq.push(e.sqrt());
        } else {
            let sum: T = mag.iter().map(|&x| x.powf(q)).sum::<T>() * cell;
            lq.push(sum.powf(T::one() / q));
        }
    }
    let linf = mag.into_iter().fold(T::zero(), |a, b| if b > a { b } else { a });
    if !linf.is_finite() {
        return Err(Error::NonFinite { t: t.to64() });
    }
    if linf > config.blowup_ceiling {
        return Err(Error::BlowUp {
            t: t.to64(),
            linf: linf.to64(),
            ceiling: config.blowup_ceiling.to64(),
        });
    }
    ledger.push(t, e, d, s, tt, g, &lq, linf);
    Ok(())
}

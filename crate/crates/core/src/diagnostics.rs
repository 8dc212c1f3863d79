//! Energy-identity diagnostics evaluated from a run's scalar ledger (and,
//! for the localized balance, its velocity snapshots).
//!
//! Conventions: `E = |v|_2^2`, `D = |grad v|_2^2`, `G = dD/dt`. Time
//! integrals are composite trapezoids on the sample grid, matching the
//! integrator's second order; windows are snapped to sample times.

use crate::bump::BumpSpec;
use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::field::SpectralField;
use crate::ledger::TimeSeriesLedger;
use crate::mollifier::MollifierSpec;
use crate::ops;
use crate::oracle::trapezoid;
use crate::real::Real;
use crate::solver::{advection, pressure_from_advection, RunOutput, Snapshot};
use serde::{Deserialize, Serialize};

pub const DIAG_SCHEMA: &str = "mollns/diagnostics/v1";

fn default_diag_schema() -> String {
    DIAG_SCHEMA.to_string()
}
fn default_k<T: Real>() -> T {
    T::one()
}
fn default_k_grid<T: Real>() -> Vec<T> {
    vec![T::of(0.1), T::one(), T::of(10.0)]
}
fn default_k1_grid<T: Real>() -> Vec<T> {
    vec![T::zero(), T::one()]
}
fn default_alpha_grid<T: Real>() -> Vec<T> {
    vec![T::of(0.4), T::of(0.2), T::of(0.1), T::of(0.05), T::of(0.025)]
}
fn default_q_grid<T: Real>() -> Vec<T> {
    vec![T::of(8.0), T::of(16.0), T::of(64.0)]
}
fn default_saturation_tol<T: Real>() -> T {
    T::of(1e-3)
}
fn default_closure_tol<T: Real>() -> T {
    T::of(1e-5)
}
fn default_bump<T: Real>() -> BumpSpec<T> {
    BumpSpec::Constant
}

/// Parameter grids for the defect diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct DiagnosticsConfig<T: Real> {
    #[serde(default = "default_diag_schema")]
    pub schema: String,
    /// Headline constant of the H integrand.
    #[serde(default = "default_k")]
    pub k: T,
    /// Headline constant of the F factor (may be zero).
    #[serde(default)]
    pub k1: T,
    /// K values for robustness tables.
    #[serde(default = "default_k_grid")]
    pub k_grid: Vec<T>,
    /// K1 values for robustness tables (zero allowed).
    #[serde(default = "default_k1_grid")]
    pub k1_grid: Vec<T>,
    /// Decreasing alpha grid in (0, 1/2].
    #[serde(default = "default_alpha_grid")]
    pub alpha_grid: Vec<T>,
    /// (s, t) windows, snapped to sample times.
    pub windows: Vec<(T, T)>,
    /// q grid for mu-norms; every entry must exceed 6 and be a ledger column.
    #[serde(default = "default_q_grid")]
    pub q_grid: Vec<T>,
    /// Cutoff for the localized balance.
    #[serde(default = "default_bump")]
    pub bump: BumpSpec<T>,
    /// Relative change between the two largest m below which the m-axis
    /// counts as saturated.
    #[serde(default = "default_saturation_tol")]
    pub saturation_tol: T,
    /// Relative closure tolerance for the inclusion bookkeeping.
    #[serde(default = "default_closure_tol")]
    pub closure_rel_tol: T,
}

impl<T: Real> DiagnosticsConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.schema != DIAG_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: DIAG_SCHEMA.into(),
                got: self.schema.clone(),
            });
        }
        if !(self.k > T::zero()) {
            return Err(Error::InvalidConfig("K must be positive".into()));
        }
        if self.k1 < T::zero() {
            return Err(Error::InvalidConfig("K1 must be nonnegative".into()));
        }
        for &a in &self.alpha_grid {
            if !(a > T::zero() && a <= T::of(0.5)) {
                return Err(Error::InvalidConfig(format!(
                    "alpha = {a} outside (0, 1/2]"
                )));
            }
        }
        for w in self.alpha_grid.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidConfig("alpha grid must decrease".into()));
            }
        }
        for &(s, t) in &self.windows {
            if !(s < t) {
                return Err(Error::InvalidConfig(format!("window ({s}, {t}) has s >= t")));
            }
        }
        for &q in &self.q_grid {
            if q <= T::of(6.0) {
                return Err(Error::MuExponentOutOfRange(q.to64()));
            }
        }
        Ok(())
    }
}

/// Trapezoid of `f(j)` over the sample rows `i..=j` of a ledger.
fn window_trapezoid<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    i: usize,
    j: usize,
    f: impl Fn(usize) -> T,
) -> T {
    let mut total = T::zero();
    for r in i..j {
        let dt = ledger.times[r + 1] - ledger.times[r];
        total += (f(r) + f(r + 1)) * dt * T::of(0.5);
    }
    total
}

/// Inner quantity of the H defect at finite (alpha, m):
/// `alpha * int_s^t E / (K + D)^{alpha+1} G dtau`.
pub fn h_integral<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    alpha: T,
    k: T,
    s: T,
    t: T,
) -> Result<T> {
    let (i, j) = ledger.snap_window(s, t)?;
    let integrand = |r: usize| {
        ledger.e[r] / (k + ledger.d[r]).powf(alpha + T::one()) * ledger.g[r]
    };
    Ok(alpha * window_trapezoid(ledger, i, j, integrand))
}

/// Residual of the integrated-by-parts weighted identity:
/// `| h + 2 int D/(K+D)^alpha - E(s)/(K+D(s))^alpha + E(t)/(K+D(t))^alpha |`.
pub fn identity25_residual<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    alpha: T,
    k: T,
    s: T,
    t: T,
) -> Result<T> {
    let (i, j) = ledger.snap_window(s, t)?;
    let h = h_integral(ledger, alpha, k, s, t)?;
    let dissipation = window_trapezoid(ledger, i, j, |r| {
        T::of(2.0) * ledger.d[r] / (k + ledger.d[r]).powf(alpha)
    });
    let boundary_s = ledger.e[i] / (k + ledger.d[i]).powf(alpha);
    let boundary_t = ledger.e[j] / (k + ledger.d[j]).powf(alpha);
    Ok((h + dissipation - boundary_s + boundary_t).abs())
}

/// Signed residual of the energy relation `E(t) + 2 nu int_s^t D - E(s) + H`.
pub fn energy_relation_residual<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    viscosity: T,
    s: T,
    t: T,
    h_estimate: T,
) -> Result<T> {
    let (i, j) = ledger.snap_window(s, t)?;
    let dissipation = window_trapezoid(ledger, i, j, |r| ledger.d[r]);
    Ok(ledger.e[j] + T::of(2.0) * viscosity * dissipation - ledger.e[i] + h_estimate)
}

/// Finite-(alpha, m) mean-value factor
/// `2 int_s^t D/(K1+D)^alpha dtau / (E(s) - E(t))`; with `alpha = 0` this is
/// exactly the dissipation-to-decay ratio, equal to 1 whenever the run's
/// energy equality holds.
pub fn f_factor<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    alpha: T,
    k1: T,
    s: T,
    t: T,
) -> Result<T> {
    let (i, j) = ledger.snap_window(s, t)?;
    let drop = ledger.e[i] - ledger.e[j];
    if drop == T::zero() {
        return Err(Error::DegenerateWindow {
            s: ledger.times[i].to64(),
            t: ledger.times[j].to64(),
        });
    }
    let num = window_trapezoid(ledger, i, j, |r| {
        T::of(2.0) * ledger.d[r] / (k1 + ledger.d[r]).powf(alpha)
    });
    Ok(num / drop)
}

/// Left side and right-side shape of the uniform a-priori estimate:
/// `lhs = (int_0^T (S + Tt)^{1/3})^3`, `rhs = 1/(1 + D(T)) + E(0)^3`
/// (the unspecified constant is reported as the ratio).
pub fn estimate18_check<T: Real>(ledger: &TimeSeriesLedger<T>) -> (T, T) {
    let n = ledger.len();
    let third = T::one() / T::of(3.0);
    let integral = window_trapezoid(ledger, 0, n - 1, |r| {
        (ledger.s[r] + ledger.tt[r]).powf(third)
    });
    let lhs = integral.powi(3);
    let rhs = T::one() / (T::one() + ledger.d[n - 1]) + ledger.e[0].powi(3);
    (lhs, rhs)
}

/// Time-integrability functional `int_0^T |v|_q^{q/(q-2)} dtau`, `q > 6`.
pub fn mu_norm<T: Real>(ledger: &TimeSeriesLedger<T>, q: T) -> Result<T> {
    if q <= T::of(6.0) {
        return Err(Error::MuExponentOutOfRange(q.to64()));
    }
    let col = ledger.lq_column(q).ok_or_else(|| {
        Error::InvalidConfig(format!("q = {q} is not a ledger column"))
    })?;
    let exponent = q / (q - T::of(2.0));
    Ok(window_trapezoid(ledger, 0, ledger.len() - 1, |r| {
        col[r].powf(exponent)
    }))
}

/// Per-sample q -> inf extrapolation of the Lq columns: least squares of
/// `ln |v|_q` against `1/q`, evaluated at `1/q = 0`.
pub fn linf_limit_profile<T: Real>(ledger: &TimeSeriesLedger<T>) -> Vec<T> {
    let inv_q: Vec<T> = ledger.qs.iter().map(|&q| T::one() / q).collect();
    (0..ledger.len())
        .map(|r| {
            let vals: Vec<T> = ledger.lq.iter().map(|col| col[r]).collect();
            if vals.iter().any(|&v| v <= T::zero()) {
                return T::zero();
            }
            let logs: Vec<T> = vals.iter().map(|&v| v.ln()).collect();
            let (intercept, _) = crate::fit::linear_fit(&inv_q, &logs);
            intercept.exp()
        })
        .collect()
}

/// Run-level sup of the extrapolated q -> inf limit (the estimate of
/// `|v|_{L^inf(0,T;L^inf)}`).
pub fn linf_limit<T: Real>(ledger: &TimeSeriesLedger<T>) -> T {
    linf_limit_profile(ledger)
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Backward-uniqueness diagnostics over a window.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LogConvexityVerdict<T: Real> {
    /// `h = 2 max |v|_inf^2` over the window.
    pub h: T,
    /// min over interior samples of the second difference of `log E` in t
    /// (>= ~0 means convex in t).
    pub min_second_difference: T,
    /// max |second difference| of `log E` in t (linearity measure).
    pub max_abs_second_difference: T,
    /// Whether `e^{-h t} dE/dt / E` is nondecreasing across the window
    /// (the reparameterized convexity claim), up to `slack`.
    pub reparameterized_convex: bool,
    pub slack: T,
    /// `D > 0` at every sample (gradient never vanishes).
    pub gradient_positive: bool,
}

/// Discrete log-convexity check. `dE/dt` is taken as the exact instantaneous
/// value `-2 nu D`; the monotone quantity is `M = e^{-h t} (dE/dt) / E`.
pub fn log_convexity_check<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    viscosity: T,
    s: T,
    t: T,
) -> Result<LogConvexityVerdict<T>> {
    if ledger.e[0] == T::zero() {
        return Err(Error::ZeroInitialData);
    }
    let (i, j) = ledger.snap_window(s, t)?;
    let linf_max = ledger.linf[i..=j]
        .iter()
        .fold(T::zero(), |a, &b| if b > a { b } else { a });
    let h = T::of(2.0) * linf_max * linf_max;

    let mut min_dd = T::infinity();
    let mut max_abs = T::zero();
    for r in (i + 1)..j {
        let dt1 = ledger.times[r] - ledger.times[r - 1];
        let dt2 = ledger.times[r + 1] - ledger.times[r];
        let l0 = ledger.e[r - 1].ln();
        let l1 = ledger.e[r].ln();
        let l2 = ledger.e[r + 1].ln();
        let dd = ((l2 - l1) / dt2 - (l1 - l0) / dt1) / ((dt1 + dt2) * T::of(0.5));
        if dd < min_dd {
            min_dd = dd;
        }
        if dd.abs() > max_abs {
            max_abs = dd.abs();
        }
    }
    if j == i + 1 {
        min_dd = T::zero();
    }

    let gradient_positive = ledger.d[i..=j].iter().all(|&d| d > T::zero());

    // monotonicity of M = e^{-h t} Edot / E with Edot = -2 nu D
    let m_val = |r: usize| {
        (-h * ledger.times[r]).exp() * (-T::of(2.0) * viscosity * ledger.d[r]) / ledger.e[r]
    };
    let scale = (i..=j).fold(T::zero(), |a, r| {
        let v = m_val(r).abs();
        if v > a {
            a.max(v)
        } else {
            a
        }
    });
    let slack = T::of(1e-8) * scale.max(T::of(1e-30));
    let mut mono = true;
    let mut prev = m_val(i);
    for r in (i + 1)..=j {
        let cur = m_val(r);
        if cur < prev - slack {
            mono = false;
            break;
        }
        prev = cur;
    }

    Ok(LogConvexityVerdict {
        h,
        min_second_difference: min_dd,
        max_abs_second_difference: max_abs,
        reparameterized_convex: mono,
        slack,
        gradient_positive,
    })
}

/// Localized energy balance residual over `(s, t)` with the given cutoff.
///
/// For a constant cutoff the terms collapse onto the ledger columns and this
/// reduces, by the same code path, to `energy_relation_residual` with H = 0.
/// For a genuine bump the spatial integrals are quadratures of snapshot
/// fields on the 3/2-refined grid, with the transport velocity `J_m[v]`
/// (the advecting field of the system actually integrated).
pub fn local_energy_residual<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    snapshots: &[Snapshot<T>],
    mollifier: &MollifierSpec<T>,
    viscosity: T,
    dealias: bool,
    bump: &BumpSpec<T>,
    s: T,
    t: T,
) -> Result<T> {
    if bump.is_constant() {
        return energy_relation_residual(ledger, viscosity, s, t, T::zero());
    }
    if snapshots.is_empty() {
        return Err(Error::SnapshotsMissing(
            "localized balance needs velocity snapshots".into(),
        ));
    }
    let grid = snapshots[0].v.grid();
    let refined_grid = grid.refined();
    let fft = GridFft::new(grid);
    let refined = GridFft::new(refined_grid);
    let d = grid.dimension;
    let cell = T::of(refined_grid.spacing().powi(d as i32));
    let two = T::of(2.0);

    // snapshot window
    let times: Vec<T> = snapshots.iter().map(|s| s.t).collect();
    let pick = |target: T| -> Result<usize> {
        let mut best = 0;
        let mut dist = T::infinity();
        for (idx, &tau) in times.iter().enumerate() {
            if (tau - target).abs() < dist {
                dist = (tau - target).abs();
                best = idx;
            }
        }
        let lo = times[0];
        let hi = times[times.len() - 1];
        if target < lo - T::of(1e-9) || target > hi + T::of(1e-9) {
            return Err(Error::WindowOutsideLedger {
                s: target.to64(),
                t: target.to64(),
                lo: lo.to64(),
                hi: hi.to64(),
            });
        }
        Ok(best)
    };
    let i = pick(s)?;
    let j = pick(t)?;
    if j <= i {
        return Err(Error::WindowTooShort {
            s: s.to64(),
            t: t.to64(),
        });
    }

    // Per-snapshot integrands:
    //   weighted  A = int |v|^2 phi
    //   diss      B = int |grad v|^2 phi
    //   source    C = int |v|^2 (phi_t + nu Lap phi)
    //   transport P = int (|v|^2 J_m[v] + 2 pi v) . grad phi
    let mut a_vals = vec![T::zero(); j - i + 1];
    let mut b_vals = vec![T::zero(); j - i + 1];
    let mut c_vals = vec![T::zero(); j - i + 1];
    let mut p_vals = vec![T::zero(); j - i + 1];

    for (row, snap) in snapshots[i..=j].iter().enumerate() {
        let table = bump.tabulate(refined_grid, snap.t);
        let v_ref = snap.v.pad_to(refined_grid, true);
        let v_phys = v_ref.to_physical(&refined);
        let w_phys = mollifier.apply(&snap.v).pad_to(refined_grid, true).to_physical(&refined);
        let (_, raw) = advection(&snap.v, mollifier, dealias, &fft);
        let pi_phys = pressure_from_advection(&raw)
            .pad_to(refined_grid, true)
            .to_physical(&refined);
        // |grad v|^2 needs all d^2 derivative components
        let mut gradsq = vec![T::zero(); refined_grid.point_count()];
        for ci in 0..d {
            let comp = SpectralField::from_components(grid, vec![snap.v.comp(ci).to_vec()])
                .expect("same grid");
            for axis in 0..d {
                let der = ops::derivative(&comp, axis)
                    .pad_to(refined_grid, true)
                    .to_physical(&refined);
                for (g, &x) in gradsq.iter_mut().zip(&der[0]) {
                    *g += x * x;
                }
            }
        }
        let mut a = T::zero();
        let mut b = T::zero();
        let mut c = T::zero();
        let mut p = T::zero();
        for flat in 0..refined_grid.point_count() {
            let mut vsq = T::zero();
            for comp in v_phys.iter() {
                vsq += comp[flat] * comp[flat];
            }
            a += vsq * table.phi[flat];
            b += gradsq[flat] * table.phi[flat];
            c += vsq * (table.phi_t[flat] + viscosity * table.laplacian[flat]);
            let mut transport = T::zero();
            for axis in 0..d {
                transport +=
                    (vsq * w_phys[axis][flat] + two * pi_phys[0][flat] * v_phys[axis][flat])
                        * table.grad[flat][axis];
            }
            p += transport;
        }
        a_vals[row] = a * cell;
        b_vals[row] = b * cell;
        c_vals[row] = c * cell;
        p_vals[row] = p * cell;
    }

    let ts = &times[i..=j];
    let residual = a_vals[j - i] - a_vals[0] + two * viscosity * trapezoid(ts, &b_vals)
        - trapezoid(ts, &c_vals)
        - trapezoid(ts, &p_vals);
    Ok(residual)
}

/// Term-by-term 2D Hoelder-chain bound on |h_integral|, with the constant
/// measured from the ledger: `|G| <= c E(0) D^2` with
/// `c = max |G| / (E(0) D^2)` over the window, then
/// `|h(alpha)| <= alpha c E(0)^2 (t-s)^alpha (int_s^t D)^{1-alpha}`.
/// The exponent on `(t-s)` follows the conjugate-exponent algebra
/// (`1/alpha`, `1/(1-alpha)`), i.e. `(t-s)^alpha`; the display form with
/// `(t-s)^{1/alpha}` is also reported.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Remark4Bound<T: Real> {
    pub lhs: T,
    pub rhs_holder: T,
    pub rhs_display_form: T,
    pub measured_constant: T,
    pub holds: bool,
}

pub fn remark4_bound<T: Real>(
    ledger: &TimeSeriesLedger<T>,
    alpha: T,
    k: T,
    s: T,
    t: T,
) -> Result<Remark4Bound<T>> {
    let (i, j) = ledger.snap_window(s, t)?;
    let lhs = h_integral(ledger, alpha, k, s, t)?.abs();
    let e0 = ledger.e[0];
    let mut c = T::zero();
    for r in i..=j {
        let d = ledger.d[r];
        if d > T::zero() && e0 > T::zero() {
            let ratio = ledger.g[r].abs() / (e0 * d * d);
            if ratio > c {
                c = ratio;
            }
        }
    }
    let span = ledger.times[j] - ledger.times[i];
    let diss = window_trapezoid(ledger, i, j, |r| ledger.d[r]);
    let rhs = |span_exp: T| {
        alpha * c * e0 * e0 * span.powf(span_exp) * diss.powf(T::one() - alpha)
    };
    let rhs_holder = rhs(alpha);
    let rhs_display = rhs(T::one() / alpha);
    Ok(Remark4Bound {
        lhs,
        rhs_holder,
        rhs_display_form: rhs_display,
        measured_constant: c,
        holds: lhs <= rhs_holder * (T::one() + T::of(1e-10)),
    })
}

/// A residual together with the tolerance it was checked against.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Checked<T: Real> {
    pub value: T,
    pub tol: T,
}

impl<T: Real> Checked<T> {
    pub fn ok(&self) -> bool {
        self.value.abs() <= self.tol
    }
}

/// Full per-run report (one ledger; the sweep report aggregates across m).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DiagnosticsReport<T: Real> {
    pub schema: String,
    pub run_hash: String,
    pub windows: Vec<WindowReport<T>>,
    pub estimate18_lhs: T,
    pub estimate18_rhs_shape: T,
    pub estimate18_ratio: T,
    pub mu_norms: Vec<(T, T)>,
    pub linf_limit: T,
    pub linf_column_sup: T,
    pub linf_max_rel_dev: T,
    pub local_balance: Option<Checked<T>>,
    /// Quadrature/integrator tolerance model inputs.
    pub dt_sample: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WindowReport<T: Real> {
    pub s: T,
    pub t: T,
    pub h_by_k: Vec<KColumn<T>>,
    pub energy_residual_h0: Checked<T>,
    pub f_by_k1: Vec<K1Column<T>>,
    pub f_alpha0: Option<T>,
    pub degenerate: bool,
    pub log_convexity: Option<LogConvexityVerdict<T>>,
    pub remark4: Option<Remark4Bound<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct KColumn<T: Real> {
    pub k: T,
    /// (alpha, h value, identity-25 residual with its tolerance)
    pub rows: Vec<(T, T, Checked<T>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct K1Column<T: Real> {
    pub k1: T,
    /// (alpha, f value)
    pub rows: Vec<(T, T)>,
}

/// Evaluate the whole diagnostics battery on one run.
pub fn diagnose<T: Real>(
    output: &RunOutput<T>,
    cfg: &DiagnosticsConfig<T>,
) -> Result<DiagnosticsReport<T>> {
    cfg.validate()?;
    let ledger = &output.ledger;
    let nu = output.config.viscosity;
    let e0 = ledger.e[0];
    let dt_sample = if ledger.len() > 1 {
        ledger.times[1] - ledger.times[0]
    } else {
        output.config.dt
    };

    let mut windows = Vec::new();
    for &(s, t) in &cfg.windows {
        let (i, j) = ledger.snap_window(s, t)?;
        let (snap_s, snap_t) = (ledger.times[i], ledger.times[j]);
        let es = ledger.e[i];

        let mut h_by_k = Vec::new();
        for &k in &cfg.k_grid {
            let mut rows = Vec::new();
            for &alpha in &cfg.alpha_grid {
                let h = h_integral(ledger, alpha, k, snap_s, snap_t)?;
                let resid = identity25_residual(ledger, alpha, k, snap_s, snap_t)?;
                rows.push((
                    alpha,
                    h,
                    Checked {
                        value: resid,
                        tol: T::of(1e-5) * es,
                    },
                ));
            }
            h_by_k.push(KColumn { k, rows });
        }

        let energy_residual = energy_relation_residual(ledger, nu, snap_s, snap_t, T::zero())?;
        let degenerate = es == ledger.e[j];
        let mut f_by_k1 = Vec::new();
        let mut f_alpha0 = None;
        if !degenerate {
            for &k1 in &cfg.k1_grid {
                let mut rows = Vec::new();
                for &alpha in &cfg.alpha_grid {
                    rows.push((alpha, f_factor(ledger, alpha, k1, snap_s, snap_t)?));
                }
                f_by_k1.push(K1Column { k1, rows });
            }
            f_alpha0 = Some(f_factor(ledger, T::zero(), cfg.k1, snap_s, snap_t)?);
        }

        let log_convexity = if e0 > T::zero() {
            Some(log_convexity_check(ledger, nu, snap_s, snap_t)?)
        } else {
            None
        };
        let remark4 = if output.config.grid.dimension == 2 {
            Some(remark4_bound(ledger, cfg.alpha_grid[0], cfg.k, snap_s, snap_t)?)
        } else {
            None
        };

        windows.push(WindowReport {
            s: snap_s,
            t: snap_t,
            h_by_k,
            energy_residual_h0: Checked {
                value: energy_residual,
                tol: T::of(1e-6) * e0.max(T::of(1e-30)),
            },
            f_by_k1,
            f_alpha0,
            degenerate,
            log_convexity,
            remark4,
        });
    }

    let (lhs, rhs) = estimate18_check(ledger);
    let mut mu_norms = Vec::new();
    for &q in &cfg.q_grid {
        mu_norms.push((q, mu_norm(ledger, q)?));
    }
    let profile = linf_limit_profile(ledger);
    let mut max_rel_dev = T::zero();
    for (est, &col) in profile.iter().zip(&ledger.linf) {
        if col > T::zero() {
            let dev = (*est - col).abs() / col;
            if dev > max_rel_dev {
                max_rel_dev = dev;
            }
        }
    }
    let linf_sup = linf_limit(ledger);
    let col_sup = ledger
        .linf
        .iter()
        .fold(T::zero(), |a, &b| if b > a { b } else { a });

    let local_balance = if output.snapshots.is_empty() && !cfg.bump.is_constant() {
        None
    } else {
        let (lo, hi) = ledger.time_range();
        let value = local_energy_residual(
            ledger,
            &output.snapshots,
            &output.config.mollifier,
            nu,
            output.config.dealias,
            &cfg.bump,
            lo,
            hi,
        )?;
        Some(Checked {
            value,
            tol: T::of(1e-4) * e0.max(T::of(1e-30)),
        })
    };

    Ok(DiagnosticsReport {
        schema: DIAG_SCHEMA.into(),
        run_hash: output.run_hash.clone(),
        windows,
        estimate18_lhs: lhs,
        estimate18_rhs_shape: rhs,
        estimate18_ratio: if rhs > T::zero() { lhs / rhs } else { T::zero() },
        mu_norms,
        linf_limit: linf_sup,
        linf_column_sup: col_sup,
        linf_max_rel_dev: max_rel_dev,
        local_balance,
        dt_sample,
    })
}

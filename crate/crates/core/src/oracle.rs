//! Slow, independent reference implementations used to validate the fast
//! paths. These run inside the test/validate suites only and carry explicit
//! cost guards; nothing in the solver or sweep paths calls them.

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::real::Real;
use num_complex::Complex;

/// Cost guards for the brute-force paths.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Hard ceiling on `N^(2d)` operations for the direct Fourier sum.
    pub max_dft_ops: f64,
    /// Default refinement factor for quadrature cross-checks.
    pub refine_factor: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_dft_ops: 1e9,
            refine_factor: 4,
        }
    }
}

/// Exact 2D Taylor-Green solution
/// `v(t) = e^{-2 nu t} (sin x1 cos x2, -cos x1 sin x2)`;
/// its self-advection is a pure gradient, so it decays by the Stokes factor.
pub fn taylor_green<T: Real>(grid: GridSpec, t: T, viscosity: T) -> Result<SpectralField<T>> {
    if grid.dimension != 2 {
        return Err(Error::OracleDimension(grid.dimension));
    }
    let amp = (-T::of(2.0) * viscosity * t).exp();
    let quarter = amp * T::of(0.25);
    let mut v = SpectralField::zeros(grid, 2);
    // sin x1 cos x2 = sum over k = (+-1, +-1) of -i s1 / 4 e^{i k x}
    // -cos x1 sin x2 = sum over k = (+-1, +-1) of  i s2 / 4 e^{i k x}
    for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        let n = grid.resolution as i64;
        let idx = [((s1 + n) % n) as usize, ((s2 + n) % n) as usize];
        let flat = grid.flatten(&idx);
        v.comp_mut(0)[flat] = Complex::new(T::zero(), -T::of(s1 as f64)) * quarter;
        v.comp_mut(1)[flat] = Complex::new(T::zero(), T::of(s2 as f64)) * quarter;
    }
    Ok(v)
}

/// Pressure paired with `taylor_green`:
/// `pi(t) = e^{-4 nu t} (cos 2x1 + cos 2x2)/4`.
pub fn taylor_green_pressure<T: Real>(
    grid: GridSpec,
    t: T,
    viscosity: T,
) -> Result<SpectralField<T>> {
    if grid.dimension != 2 {
        return Err(Error::OracleDimension(grid.dimension));
    }
    let amp = (-T::of(4.0) * viscosity * t).exp() * T::of(0.125);
    let mut p = SpectralField::zeros(grid, 1);
    let n = grid.resolution as i64;
    for k in [[2i64, 0i64], [-2, 0], [0, 2], [0, -2]] {
        let idx = [((k[0] + n) % n) as usize, ((k[1] + n) % n) as usize];
        let flat = grid.flatten(&idx);
        p.comp_mut(0)[flat] = Complex::new(amp, T::zero());
    }
    Ok(p)
}

/// Direct `O(N^{2d})` discrete Fourier sum of physical samples, normalized to
/// match `GridFft::forward`.
pub fn dft_bruteforce<T: Real>(
    grid: GridSpec,
    samples: &[T],
    cfg: &OracleConfig,
) -> Result<Vec<Complex<T>>> {
    let npts = grid.point_count();
    if samples.len() != npts {
        return Err(Error::ResolutionMismatch {
            expected: npts,
            got: samples.len(),
        });
    }
    let cost = (npts as f64) * (npts as f64);
    if cost > cfg.max_dft_ops {
        return Err(Error::CostGuard {
            cost,
            guard: cfg.max_dft_ops,
        });
    }
    let h = T::of(grid.spacing());
    let norm = T::one() / T::of(npts as f64);
    let d = grid.dimension;
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); npts];
    for mode in grid.modes() {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (flat, &s) in samples.iter().enumerate() {
            let idx = grid.unflatten(flat);
            let mut phase = T::zero();
            for axis in 0..d {
                phase += T::of(mode.k[axis] as f64) * h * T::of(idx[axis] as f64);
            }
            acc += Complex::new(phase.cos(), -phase.sin()) * s;
        }
        coeffs[mode.flat] = acc * norm;
    }
    Ok(coeffs)
}

/// Composite trapezoid of a closed-form integrand at `n * factor` intervals.
pub fn quadrature_refine<T: Real>(
    f: &dyn Fn(T) -> T,
    a: T,
    b: T,
    base_intervals: usize,
    factor: usize,
) -> T {
    let n = base_intervals * factor.max(1);
    let dt = (b - a) / T::of(n as f64);
    let mut total = (f(a) + f(b)) * T::of(0.5);
    for i in 1..n {
        total += f(a + dt * T::of(i as f64));
    }
    total * dt
}

/// Composite trapezoid on tabulated (possibly non-uniform) samples.
pub fn trapezoid<T: Real>(ts: &[T], ys: &[T]) -> T {
    assert_eq!(ts.len(), ys.len());
    let mut total = T::zero();
    for i in 1..ts.len() {
        total += (ys[i] + ys[i - 1]) * (ts[i] - ts[i - 1]) * T::of(0.5);
    }
    total
}

/// Centered difference `(x[j+1] - x[j-1]) / (2 dt)` of a uniformly sampled
/// column.
pub fn fd_time_derivative<T: Real>(column: &[T], j: usize, dt: T) -> Result<T> {
    if j == 0 || j + 1 >= column.len() {
        return Err(Error::FdBoundary {
            index: j,
            len: column.len(),
        });
    }
    Ok((column[j + 1] - column[j - 1]) / (T::of(2.0) * dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::l2_norm_sq;

    #[test]
    fn taylor_green_energy_and_decay() {
        let grid = GridSpec::new(2, 16).unwrap();
        let v0 = taylor_green(grid, 0.0f64, 1.0).unwrap();
        // E(0) = 2 pi^2: each component contributes pi^2.
        let e0 = l2_norm_sq(&v0);
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        assert!((e0 - 2.0 * pi2).abs() < 1e-12 * e0);
        let v1 = taylor_green(grid, 1.0f64, 1.0).unwrap();
        assert!((l2_norm_sq(&v1) / e0 - (-4.0f64).exp()).abs() < 1e-14);
        // viscosity 0: no decay
        let vz = taylor_green(grid, 5.0f64, 0.0).unwrap();
        assert!((l2_norm_sq(&vz) - e0).abs() < 1e-12 * e0);
        assert!(taylor_green(GridSpec::new(3, 8).unwrap(), 0.0f64, 1.0).is_err());
    }

    #[test]
    fn dft_constant_field_is_single_mode() {
        let grid = GridSpec::new(2, 8).unwrap();
        let samples = vec![1.0f64; grid.point_count()];
        let coeffs = dft_bruteforce(grid, &samples, &OracleConfig::default()).unwrap();
        for mode in grid.modes() {
            let expect = if mode.is_zero() { 1.0 } else { 0.0 };
            assert!((coeffs[mode.flat].re - expect).abs() < 1e-12);
            assert!(coeffs[mode.flat].im.abs() < 1e-12);
        }
    }

    #[test]
    fn dft_cost_guard_fires() {
        let grid = GridSpec::new(3, 64).unwrap();
        let samples = vec![0.0f64; grid.point_count()];
        let res = dft_bruteforce(grid, &samples, &OracleConfig::default());
        assert!(matches!(res, Err(Error::CostGuard { .. })));
    }

    #[test]
    fn trapezoid_exact_on_linear() {
        let f = |x: f64| 3.0 * x + 1.0;
        let coarse = quadrature_refine(&f, 0.0, 2.0, 4, 1);
        let fine = quadrature_refine(&f, 0.0, 2.0, 4, 8);
        assert!((coarse - 8.0).abs() < 1e-13);
        assert!((coarse - fine).abs() < 1e-13);
    }

    #[test]
    fn centered_difference_boundary_errors() {
        let col = [1.0f64, 2.0, 3.0];
        assert!(fd_time_derivative(&col, 0, 0.1).is_err());
        assert!(fd_time_derivative(&col, 2, 0.1).is_err());
        let d = fd_time_derivative(&col, 1, 0.1).unwrap();
        assert!((d - 10.0).abs() < 1e-12);
    }
}

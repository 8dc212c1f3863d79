//! Smooth nonnegative space-time cutoffs for the localized energy balance.
//! Every derivative entering the balance (`phi_t`, `grad phi`, `Lap phi`) is
//! evaluated from closed forms, never by numerical differentiation.

use crate::grid::GridSpec;
use crate::real::Real;
use serde::{Deserialize, Serialize};

/// Optional smooth time factor `exp(rate (cos(omega (t - t0)) - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TimeProfile<T: Real> {
    pub t0: T,
    pub rate: T,
    pub omega: T,
}

/// Named cutoff. `gaussian-periodic` is the von Mises bump
/// `prod_i exp(c (cos(x_i - x0_i) - 1))`, a strictly positive C-infinity
/// periodic analogue of a Gaussian; `constant` is `phi = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", bound = "T: Real")]
pub enum BumpSpec<T: Real> {
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "gaussian-periodic")]
    GaussianPeriodic {
        center: Vec<T>,
        concentration: T,
        #[serde(default)]
        time: Option<TimeProfile<T>>,
    },
}

impl<T: Real> BumpSpec<T> {
    pub fn is_constant(&self) -> bool {
        matches!(self, BumpSpec::Constant)
    }

    fn time_factor(&self, t: T) -> (T, T) {
        match self {
            BumpSpec::Constant => (T::one(), T::zero()),
            BumpSpec::GaussianPeriodic { time, .. } => match time {
                None => (T::one(), T::zero()),
                Some(tp) => {
                    let phase = tp.omega * (t - tp.t0);
                    let g = (tp.rate * (phase.cos() - T::one())).exp();
                    let dg = g * (-tp.rate * tp.omega * phase.sin());
                    (g, dg)
                }
            },
        }
    }

    /// Evaluate `(phi, phi_t, grad phi, Lap phi)` at one space-time point.
    pub fn eval(&self, t: T, x: &[T]) -> BumpValues<T> {
        match self {
            BumpSpec::Constant => BumpValues {
                phi: T::one(),
                phi_t: T::zero(),
                grad: [T::zero(); 3],
                laplacian: T::zero(),
            },
            BumpSpec::GaussianPeriodic {
                center,
                concentration,
                ..
            } => {
                let c = *concentration;
                let d = x.len();
                // per-axis factor f_i = exp(c (cos(x - x0) - 1))
                let mut fs = [T::one(); 3];
                let mut dlog = [T::zero(); 3]; // f_i'/f_i = -c sin
                let mut d2log = [T::zero(); 3]; // f_i''/f_i = c^2 sin^2 - c cos
                for i in 0..d {
                    let a = x[i] - center[i];
                    let (sin, cos) = (a.sin(), a.cos());
                    fs[i] = (c * (cos - T::one())).exp();
                    dlog[i] = -c * sin;
                    d2log[i] = c * c * sin * sin - c * cos;
                }
                let spatial: T = fs.iter().take(d).copied().fold(T::one(), |a, b| a * b);
                let (g, dg) = self.time_factor(t);
                let phi = g * spatial;
                let mut grad = [T::zero(); 3];
                let mut lap = T::zero();
                for i in 0..d {
                    grad[i] = phi * dlog[i];
                    lap += phi * d2log[i];
                }
                BumpValues {
                    phi,
                    phi_t: dg * spatial,
                    grad,
                    laplacian: lap,
                }
            }
        }
    }

    /// Tabulate the bump on the physical points of `grid` at time `t`.
    pub fn tabulate(&self, grid: GridSpec, t: T) -> BumpTable<T> {
        let n = grid.resolution;
        let h = T::of(grid.spacing());
        let d = grid.dimension;
        let npts = grid.point_count();
        let mut table = BumpTable {
            phi: vec![T::zero(); npts],
            phi_t: vec![T::zero(); npts],
            grad: vec![[T::zero(); 3]; npts],
            laplacian: vec![T::zero(); npts],
        };
        let mut x = [T::zero(); 3];
        for flat in 0..npts {
            let idx = grid.unflatten(flat);
            for a in 0..d {
                x[a] = h * T::of(idx[a] as f64);
            }
            debug_assert!(idx[0] < n);
            let v = self.eval(t, &x[..d]);
            table.phi[flat] = v.phi;
            table.phi_t[flat] = v.phi_t;
            table.grad[flat] = v.grad;
            table.laplacian[flat] = v.laplacian;
        }
        table
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BumpValues<T: Real> {
    pub phi: T,
    pub phi_t: T,
    pub grad: [T; 3],
    pub laplacian: T,
}

pub struct BumpTable<T: Real> {
    pub phi: Vec<T>,
    pub phi_t: Vec<T>,
    pub grad: Vec<[T; 3]>,
    pub laplacian: Vec<T>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_matches_finite_differences() {
        let bump = BumpSpec::GaussianPeriodic {
            center: vec![3.0f64, 1.0],
            concentration: 2.0,
            time: None,
        };
        let h = 1e-5;
        let x = [0.7, 2.1];
        let v = bump.eval(0.0, &x);
        let mut lap_fd = 0.0;
        for axis in 0..2 {
            let mut xp = x;
            xp[axis] += h;
            let mut xm = x;
            xm[axis] -= h;
            let fp = bump.eval(0.0, &xp).phi;
            let fm = bump.eval(0.0, &xm).phi;
            lap_fd += (fp - 2.0 * v.phi + fm) / (h * h);
            let grad_fd = (fp - fm) / (2.0 * h);
            assert!((grad_fd - v.grad[axis]).abs() < 1e-6);
        }
        assert!((lap_fd - v.laplacian).abs() < 1e-5);
        assert!(v.phi > 0.0);
    }

    #[test]
    fn time_profile_derivative() {
        let bump = BumpSpec::GaussianPeriodic {
            center: vec![0.0f64, 0.0],
            concentration: 1.0,
            time: Some(TimeProfile {
                t0: 0.2,
                rate: 1.5,
                omega: 3.0,
            }),
        };
        let h = 1e-6;
        let x = [1.0, 2.0];
        let f0 = bump.eval(0.4, &x);
        let fp = bump.eval(0.4 + h, &x).phi;
        let fm = bump.eval(0.4 - h, &x).phi;
        assert!(((fp - fm) / (2.0 * h) - f0.phi_t).abs() < 1e-6);
    }
}

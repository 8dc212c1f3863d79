//! Named initial-condition generators.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::ops::{l2_norm_sq, leray_project};
use crate::oracle::taylor_green;
use crate::real::Real;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

fn default_one<T: Real>() -> T {
    T::one()
}
fn default_zero<T: Real>() -> T {
    T::zero()
}

/// Generator name plus parameters, as it appears in run configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum InitialCondition<T: Real> {
    /// `(sin x1 cos x2, -cos x1 sin x2)`, the exact decaying vortex.
    #[serde(rename = "taylor-green-2d")]
    TaylorGreen2d,
    /// Random divergence-free field supported on `0 < |k| <= band` with
    /// amplitudes damped like `|k|^-decay`, rescaled to the given energy.
    #[serde(rename = "random-bandlimited")]
    RandomBandlimited {
        seed: u64,
        band: T,
        energy: T,
        #[serde(default = "default_zero")]
        decay: T,
    },
    /// Beltrami flow `(A sin x3 + C cos x2, B sin x1 + A cos x3,
    /// C sin x2 + B cos x1)`.
    #[serde(rename = "abc-flow-3d")]
    AbcFlow3d {
        #[serde(default = "default_one")]
        a: T,
        #[serde(default = "default_one")]
        b: T,
        #[serde(default = "default_one")]
        c: T,
    },
}

impl<T: Real> InitialCondition<T> {
    pub fn validate(&self, grid: GridSpec) -> Result<()> {
        match self {
            InitialCondition::TaylorGreen2d => {
                if grid.dimension != 2 {
                    return Err(Error::InvalidConfig(
                        "taylor-green-2d requires a 2D grid".into(),
                    ));
                }
            }
            InitialCondition::AbcFlow3d { .. } => {
                if grid.dimension != 3 {
                    return Err(Error::InvalidConfig(
                        "abc-flow-3d requires a 3D grid".into(),
                    ));
                }
            }
            InitialCondition::RandomBandlimited { band, energy, .. } => {
                if !(*band >= T::one()) {
                    return Err(Error::InvalidConfig("spectral band must be >= 1".into()));
                }
                if band.to64() >= grid.nyquist() as f64 {
                    return Err(Error::InvalidConfig(format!(
                        "spectral band {} must stay below the grid Nyquist {}",
                        band,
                        grid.nyquist()
                    )));
                }
                if !(*energy > T::zero()) {
                    return Err(Error::InvalidConfig("energy normalization must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// Build the divergence-free, zero-mean velocity field.
    pub fn generate(&self, grid: GridSpec) -> Result<SpectralField<T>> {
        self.validate(grid)?;
        match self {
            InitialCondition::TaylorGreen2d => taylor_green(grid, T::zero(), T::one()),
            InitialCondition::AbcFlow3d { a, b, c } => Ok(abc_flow(grid, *a, *b, *c)),
            InitialCondition::RandomBandlimited {
                seed,
                band,
                energy,
                decay,
            } => Ok(random_bandlimited(grid, *seed, *band, *energy, *decay)),
        }
    }
}

fn abc_flow<T: Real>(grid: GridSpec, a: T, b: T, c: T) -> SpectralField<T> {
    let mut v = SpectralField::zeros(grid, 3);
    let half = T::of(0.5);
    let n = grid.resolution as i64;
    let mut put = |k: [i64; 3], comp: usize, val: Complex<T>| {
        let idx = [
            ((k[0] + n) % n) as usize,
            ((k[1] + n) % n) as usize,
            ((k[2] + n) % n) as usize,
        ];
        let flat = grid.flatten(&idx);
        v.comp_mut(comp)[flat] += val;
    };
    for s in [1i64, -1] {
        let sf = T::of(s as f64);
        // sin ks -> -i s / 2, cos -> 1/2 at k = +-1 along the axis
        put([0, 0, s], 0, Complex::new(T::zero(), -half * sf) * a); // A sin x3
        put([0, s, 0], 0, Complex::new(half, T::zero()) * c); // C cos x2
        put([s, 0, 0], 1, Complex::new(T::zero(), -half * sf) * b); // B sin x1
        put([0, 0, s], 1, Complex::new(half, T::zero()) * a); // A cos x3
        put([0, s, 0], 2, Complex::new(T::zero(), -half * sf) * c); // C sin x2
        put([s, 0, 0], 2, Complex::new(half, T::zero()) * b); // B cos x1
    }
    v
}

fn random_bandlimited<T: Real>(
    grid: GridSpec,
    seed: u64,
    band: T,
    energy: T,
    decay: T,
) -> SpectralField<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = grid.dimension;
    let band_sq = (band * band).to64();
    let mut v = SpectralField::zeros(grid, d);
    let normal = StandardNormal;
    // Fill each conjugate pair once, in deterministic mode order.
    for mode in grid.modes() {
        if mode.is_zero() {
            continue;
        }
        let ksq = mode.k_sq() as f64;
        if ksq > band_sq + 1e-12 {
            continue;
        }
        let conj = grid.conjugate_index(mode.flat);
        if conj < mode.flat {
            continue;
        }
        let amp = T::of(ksq.sqrt().powf(-decay.to64()));
        let self_conjugate = conj == mode.flat;
        let mut coeffs = [Complex::new(T::zero(), T::zero()); 3];
        for c in coeffs.iter_mut().take(d) {
            let re: f64 = normal.sample(&mut rng);
            let im: f64 = normal.sample(&mut rng);
            *c = if self_conjugate {
                Complex::new(T::of(re), T::zero()) * amp
            } else {
                Complex::new(T::of(re), T::of(im)) * amp
            };
        }
        for (axis, &val) in coeffs.iter().enumerate().take(d) {
            v.comp_mut(axis)[mode.flat] = val;
            v.comp_mut(axis)[conj] = val.conj();
        }
    }
    let mut v = leray_project(&v);
    v.zero_mean();
    let e = l2_norm_sq(&v);
    if e > T::zero() {
        v.scale((energy / e).sqrt());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{gradient_norm_sq, l2_norm_sq};

    #[test]
    fn random_field_is_divergence_free_and_normalized() {
        let grid = GridSpec::new(3, 16).unwrap();
        let ic = InitialCondition::RandomBandlimited {
            seed: 42,
            band: 4.0f64,
            energy: 2.5,
            decay: 1.0,
        };
        let v = ic.generate(grid).unwrap();
        assert!(v.is_divergence_free(1e-12));
        assert!(v.hermitian_defect() < 1e-14);
        assert!((l2_norm_sq(&v) - 2.5).abs() < 1e-12);
        // determinism
        let v2 = ic.generate(grid).unwrap();
        assert_eq!(v, v2);
    }

    #[test]
    fn abc_flow_is_beltrami() {
        let grid = GridSpec::new(3, 8).unwrap();
        let ic = InitialCondition::AbcFlow3d {
            a: 1.0f64,
            b: 1.0,
            c: 1.0,
        };
        let v = ic.generate(grid).unwrap();
        assert!(v.is_divergence_free(1e-13));
        // all modes sit on |k| = 1, so D = E
        let e = l2_norm_sq(&v);
        let d = gradient_norm_sq(&v);
        assert!((d - e).abs() < 1e-12 * e);
        assert!(e > 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g2 = GridSpec::new(2, 8).unwrap();
        let g3 = GridSpec::new(3, 8).unwrap();
        assert!(InitialCondition::<f64>::TaylorGreen2d.generate(g3).is_err());
        let abc = InitialCondition::AbcFlow3d {
            a: 1.0f64,
            b: 1.0,
            c: 1.0,
        };
        assert!(abc.generate(g2).is_err());
    }

    #[test]
    fn band_must_fit_under_nyquist() {
        let grid = GridSpec::new(2, 8).unwrap();
        let ic = InitialCondition::RandomBandlimited {
            seed: 1,
            band: 4.0f64,
            energy: 1.0,
            decay: 0.0,
        };
        assert!(ic.generate(grid).is_err());
    }
}

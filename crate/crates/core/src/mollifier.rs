//! Spectral low-pass mollifier J_m.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::real::Real;
use serde::{Deserialize, Serialize};

/// Shape of the radial symbol chi(|k|/m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MollifierProfile {
    /// chi = 1 on [0, 1/2], exp(1 - 1/(1 - (2r-1)^2)) on (1/2, 1), 0 on [1, inf).
    #[default]
    SmoothStep,
    /// Hard cutoff at |k| = m/2 (diagnostic use; not smooth).
    SharpCutoff,
}

/// Cutoff scale `index` = m together with the symbol profile. Coefficients
/// are scaled by `chi(|k|/m)`: untouched below `m/2`, zero at and above `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierSpec<T: Real> {
    pub index: T,
    #[serde(default)]
    pub profile: MollifierProfile,
}

impl<T: Real> MollifierSpec<T> {
    pub fn new(index: T) -> Result<Self> {
        let m = MollifierSpec {
            index,
            profile: MollifierProfile::SmoothStep,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.index > T::zero()) {
            return Err(Error::BadMollifierIndex(self.index.to64()));
        }
        Ok(())
    }

    /// Radial symbol value at rho = |k|/m.
    pub fn symbol_at(&self, rho: T) -> T {
        let half = T::of(0.5);
        if rho <= half {
            return T::one();
        }
        if rho >= T::one() {
            return T::zero();
        }
        match self.profile {
            MollifierProfile::SmoothStep => {
                let t = T::of(2.0) * rho - T::one(); // in (0, 1)
                (T::one() - T::one() / (T::one() - t * t)).exp()
            }
            MollifierProfile::SharpCutoff => T::zero(),
        }
    }

    /// Symbol at a given squared wavenumber.
    pub fn symbol_ksq(&self, k_sq: i64) -> T {
        let rho = T::of((k_sq as f64).sqrt()) / self.index;
        self.symbol_at(rho)
    }

    /// Apply J_m: scale every coefficient by the symbol.
    pub fn apply(&self, u: &SpectralField<T>) -> SpectralField<T> {
        let mut out = u.clone();
        out.map_modes(|mode, vals| {
            let chi = self.symbol_ksq(mode.k_sq());
            for v in vals.iter_mut() {
                *v = *v * chi;
            }
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_index() {
        assert!(MollifierSpec::new(0.0f64).is_err());
        assert!(MollifierSpec::new(-3.0f64).is_err());
        assert!(MollifierSpec::new(8.0f64).is_ok());
    }

    #[test]
    fn symbol_plateau_and_support() {
        let m = MollifierSpec::new(8.0f64).unwrap();
        assert_eq!(m.symbol_at(0.0), 1.0);
        assert_eq!(m.symbol_at(0.5), 1.0);
        assert_eq!(m.symbol_at(1.0), 0.0);
        assert_eq!(m.symbol_at(2.0), 0.0);
        let mid = m.symbol_at(0.75);
        // exp(1 - 1/(1 - (1/2)^2)) = exp(-1/3)
        assert!((mid - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn symbol_monotone_nonincreasing() {
        let m = MollifierSpec::new(1.0f64).unwrap();
        let mut prev = 1.0;
        for i in 0..=1000 {
            let rho = i as f64 / 1000.0 * 1.5;
            let v = m.symbol_at(rho);
            assert!(v <= prev + 1e-15, "rho={rho} v={v} prev={prev}");
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}

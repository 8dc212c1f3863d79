//! The periodic computational domain `[0, 2pi)^d`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform grid on the torus: `resolution` modes per axis, `dimension` axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dimension: usize,
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(dimension: usize, resolution: usize) -> Result<Self> {
        let g = GridSpec {
            dimension,
            resolution,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::BadDimension(self.dimension));
        }
        if self.resolution < 4 || self.resolution % 2 != 0 {
            return Err(Error::BadResolution(self.resolution));
        }
        Ok(())
    }

    /// Number of physical points (= number of retained Fourier modes).
    pub fn point_count(&self) -> usize {
        self.resolution.pow(self.dimension as u32)
    }

    /// Physical spacing `2pi / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.resolution as f64
    }

    /// Largest representable wavenumber per axis.
    pub fn nyquist(&self) -> i64 {
        (self.resolution / 2) as i64
    }

    /// Grid refined for non-quadratic norm quadrature (`3N/2` points per axis).
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            dimension: self.dimension,
            resolution: self.resolution * 3 / 2,
        }
    }

    /// Signed wavenumber of a storage index along one axis. Indices run
    /// `0..N`; frequencies are `0, 1, .., N/2, -(N/2-1), .., -1` with the
    /// Nyquist bin assigned `+N/2`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.resolution as i64;
        let i = idx as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Iterate flat index together with the signed wavevector.
    pub fn modes(&self) -> ModeIter<'_> {
        ModeIter {
            grid: self,
            flat: 0,
            total: self.point_count(),
        }
    }

    /// Decompose a flat row-major index into per-axis indices.
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let n = self.resolution;
        let mut idx = [0usize; 3];
        for axis in (0..self.dimension).rev() {
            idx[axis] = flat % n;
            flat /= n;
        }
        idx
    }

    /// Flat row-major index of per-axis indices.
    pub fn flatten(&self, idx: &[usize]) -> usize {
        let n = self.resolution;
        let mut flat = 0usize;
        for &i in idx.iter().take(self.dimension) {
            flat = flat * n + i;
        }
        flat
    }

    /// Index of the Hermitian partner `-k` of a flat index.
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.resolution;
        let idx = self.unflatten(flat);
        let mut conj = [0usize; 3];
        for axis in 0..self.dimension {
            conj[axis] = (n - idx[axis]) % n;
        }
        self.flatten(&conj[..self.dimension])
    }
}

pub struct ModeIter<'a> {
    grid: &'a GridSpec,
    flat: usize,
    total: usize,
}

/// One Fourier mode: flat storage index plus signed wavevector (unused axes 0).
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub flat: usize,
    pub k: [i64; 3],
}

impl Mode {
    pub fn k_sq(&self) -> i64 {
        self.k.iter().map(|&x| x * x).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.k == [0, 0, 0]
    }
}

impl Iterator for ModeIter<'_> {
    type Item = Mode;

    fn next(&mut self) -> Option<Mode> {
        if self.flat >= self.total {
            return None;
        }
        let flat = self.flat;
        self.flat += 1;
        let idx = self.grid.unflatten(flat);
        let mut k = [0i64; 3];
        for axis in 0..self.grid.dimension {
            k[axis] = self.grid.wavenumber(idx[axis]);
        }
        Some(Mode { flat, k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_tiny_resolution() {
        assert!(GridSpec::new(2, 7).is_err());
        assert!(GridSpec::new(2, 2).is_err());
        assert!(GridSpec::new(4, 8).is_err());
        assert!(GridSpec::new(2, 8).is_ok());
    }

    #[test]
    fn wavenumbers_cover_symmetric_band() {
        let g = GridSpec::new(2, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
    }

    #[test]
    fn conjugate_index_is_involutive() {
        let g = GridSpec::new(3, 8).unwrap();
        for flat in 0..g.point_count() {
            let c = g.conjugate_index(flat);
            assert_eq!(g.conjugate_index(c), flat);
        }
    }
}

//! Vector (and scalar) fields on the torus stored by Fourier coefficients.

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::grid::GridSpec;
use crate::real::Real;
use num_complex::Complex;

/// A real-valued field on `[0, 2pi)^d` held as complex Fourier coefficients,
/// one full `N^d` coefficient block per component. Velocity fields carry `d`
/// components, pressure-like scalars carry one.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T: Real> {
    grid: GridSpec,
    comps: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        let block = vec![Complex::new(T::zero(), T::zero()); grid.point_count()];
        SpectralField {
            grid,
            comps: vec![block; components],
        }
    }

    /// Zero velocity field (`d` components).
    pub fn zero_velocity(grid: GridSpec) -> Self {
        Self::zeros(grid, grid.dimension)
    }

    pub fn from_components(grid: GridSpec, comps: Vec<Vec<Complex<T>>>) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.point_count() {
                return Err(Error::ResolutionMismatch {
                    expected: grid.point_count(),
                    got: c.len(),
                });
            }
        }
        Ok(SpectralField { grid, comps })
    }

    /// Forward transform of physical samples, one slice per component.
    pub fn from_physical(grid: GridSpec, samples: &[Vec<T>], fft: &GridFft<T>) -> Result<Self> {
        let mut comps = Vec::with_capacity(samples.len());
        for s in samples {
            if s.len() != grid.point_count() {
                return Err(Error::ResolutionMismatch {
                    expected: grid.point_count(),
                    got: s.len(),
                });
            }
            let mut block: Vec<Complex<T>> =
                s.iter().map(|&x| Complex::new(x, T::zero())).collect();
            fft.forward(&mut block);
            comps.push(block);
        }
        Ok(SpectralField { grid, comps })
    }

    /// Inverse transform to physical samples (real parts; the imaginary parts
    /// of a Hermitian-symmetric field are rounding noise).
    pub fn to_physical(&self, fft: &GridFft<T>) -> Vec<Vec<T>> {
        self.comps
            .iter()
            .map(|c| {
                let mut block = c.clone();
                fft.inverse(&mut block);
                block.iter().map(|z| z.re).collect()
            })
            .collect()
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &[Complex<T>] {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.comps[i]
    }

    /// Apply a per-mode map `(k, coeffs) -> coeffs` across all components.
    pub fn map_modes<F>(&mut self, mut f: F)
    where
        F: FnMut(&crate::grid::Mode, &mut [Complex<T>]),
    {
        let ncomp = self.comps.len();
        let mut vals = vec![Complex::new(T::zero(), T::zero()); ncomp];
        for mode in self.grid.modes() {
            for c in 0..ncomp {
                vals[c] = self.comps[c][mode.flat];
            }
            f(&mode, &mut vals);
            for c in 0..ncomp {
                self.comps[c][mode.flat] = vals[c];
            }
        }
    }

    /// Largest deviation from Hermitian symmetry `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for c in &self.comps {
            for flat in 0..c.len() {
                let conj_flat = self.grid.conjugate_index(flat);
                let defect = (c[flat] - c[conj_flat].conj()).norm();
                if defect > worst {
                    worst = defect;
                }
            }
        }
        worst
    }

    /// Force exact Hermitian symmetry by averaging conjugate pairs.
    pub fn symmetrize(&mut self) {
        let half = T::of(0.5);
        for c in self.comps.iter_mut() {
            for flat in 0..c.len() {
                let conj_flat = self.grid.conjugate_index(flat);
                if conj_flat < flat {
                    continue;
                }
                if conj_flat == flat {
                    c[flat] = Complex::new(c[flat].re, T::zero());
                } else {
                    let avg = (c[flat] + c[conj_flat].conj()) * half;
                    c[flat] = avg;
                    c[conj_flat] = avg.conj();
                }
            }
        }
    }

    /// Largest relative divergence `|k . u(k)| / |u(k)|` over nonzero modes.
    pub fn divergence_defect(&self) -> T {
        assert_eq!(self.comps.len(), self.grid.dimension, "velocity field");
        let mut worst = T::zero();
        for mode in self.grid.modes() {
            if mode.is_zero() {
                continue;
            }
            let mut dot = Complex::new(T::zero(), T::zero());
            let mut mag = T::zero();
            for (axis, c) in self.comps.iter().enumerate() {
                dot += c[mode.flat] * T::of(mode.k[axis] as f64);
                mag += c[mode.flat].norm_sqr();
            }
            let mag = mag.sqrt();
            if mag > T::zero() {
                let rel = dot.norm() / mag;
                if rel > worst {
                    worst = rel;
                }
            }
        }
        worst
    }

    pub fn is_divergence_free(&self, tol: T) -> bool {
        self.divergence_defect() <= tol
    }

    /// Zero the mean-flow mode of every component.
    pub fn zero_mean(&mut self) {
        for c in self.comps.iter_mut() {
            c[0] = Complex::new(T::zero(), T::zero());
        }
    }

    /// Re-grid onto `target` (zero-padding upward). The source Nyquist bin is
    /// split evenly between `+N/2` and `-N/2` on the finer grid so real fields
    /// stay real.
    pub fn pad_to(&self, target: GridSpec, half_nyquist: bool) -> SpectralField<T> {
        assert!(target.resolution >= self.grid.resolution);
        assert_eq!(target.dimension, self.grid.dimension);
        let d = self.grid.dimension;
        let nyq = self.grid.nyquist();
        let half = T::of(0.5);
        let mut out = SpectralField::zeros(target, self.comps.len());
        for mode in self.grid.modes() {
            // Axes sitting exactly on the source Nyquist get split in two.
            let mut targets: Vec<([i64; 3], T)> = vec![(mode.k, T::one())];
            if half_nyquist {
                for axis in 0..d {
                    if mode.k[axis] == nyq {
                        let mut split = Vec::with_capacity(targets.len() * 2);
                        for (k, w) in targets {
                            let mut kp = k;
                            kp[axis] = nyq;
                            let mut km = k;
                            km[axis] = -nyq;
                            split.push((kp, w * half));
                            split.push((km, w * half));
                        }
                        targets = split;
                    }
                }
            }
            for (k, w) in targets {
                let mut idx = [0usize; 3];
                for axis in 0..d {
                    let n = target.resolution as i64;
                    idx[axis] = ((k[axis] + n) % n) as usize;
                }
                let flat = target.flatten(&idx[..d]);
                for (c, comp) in self.comps.iter().enumerate() {
                    out.comps[c][flat] += comp[mode.flat] * w;
                }
            }
        }
        out
    }

    /// Euclidean magnitude `|v(x)|` on the physical points of `fft`'s grid
    /// (which may be a refinement of the field's own grid).
    pub fn pointwise_magnitude(&self, fft: &GridFft<T>) -> Vec<T> {
        let work = if fft.grid() == self.grid {
            self.clone()
        } else {
            self.pad_to(fft.grid(), true)
        };
        let phys = work.to_physical(fft);
        let npts = fft.grid().point_count();
        let mut mag = vec![T::zero(); npts];
        for comp in &phys {
            for (m, &x) in mag.iter_mut().zip(comp.iter()) {
                *m += x * x;
            }
        }
        for m in mag.iter_mut() {
            *m = m.sqrt();
        }
        mag
    }

    pub fn scale(&mut self, factor: T) {
        for c in self.comps.iter_mut() {
            for z in c.iter_mut() {
                *z = *z * factor;
            }
        }
    }

    pub fn scaled(&self, factor: T) -> SpectralField<T> {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += other * factor`
    pub fn axpy(&mut self, factor: T, other: &SpectralField<T>) {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.comps.len(), other.comps.len());
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += *y * factor;
            }
        }
    }

    pub fn sub(&self, other: &SpectralField<T>) -> SpectralField<T> {
        let mut out = self.clone();
        out.axpy(-T::one(), other);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// l1 mass of the coefficients, a cheap upper bound for the sup norm.
    pub fn coeff_l1(&self) -> T {
        let mut total = T::zero();
        for mode in self.grid.modes() {
            let mut sq = T::zero();
            for c in &self.comps {
                sq += c[mode.flat].norm_sqr();
            }
            total += sq.sqrt();
        }
        total
    }
}

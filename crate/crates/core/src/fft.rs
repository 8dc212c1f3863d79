//! Cached FFT plans for one grid, with d-dimensional transforms done as
//! per-axis line passes.

use crate::grid::GridSpec;
use crate::real::Real;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Forward/inverse plans for a fixed grid. Immutable after construction and
/// safe to share across threads.
pub struct GridFft<T: Real> {
    grid: GridSpec,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> GridFft<T> {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.resolution);
        let inverse = planner.plan_fft_inverse(grid.resolution);
        GridFft {
            grid,
            forward,
            inverse,
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Physical samples -> Fourier coefficients of `u(x) = sum_k c_k e^{ikx}`.
    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.forward);
        let scale = T::one() / T::of(self.grid.point_count() as f64);
        for c in data.iter_mut() {
            *c = *c * scale;
        }
    }

    /// Fourier coefficients -> physical samples (unnormalized inverse DFT).
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let n = self.grid.resolution;
        let d = self.grid.dimension;
        debug_assert_eq!(data.len(), self.grid.point_count());
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let mut scratch =
            vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        // Axis `a` has stride n^(d-1-a) in row-major layout.
        for axis in 0..d {
            let stride = n.pow((d - 1 - axis) as u32);
            let lines = data.len() / n;
            for l in 0..lines {
                // Base offset of the l-th line orthogonal to `axis`.
                let block = l / stride;
                let offset = block * stride * n + l % stride;
                for (i, c) in line.iter_mut().enumerate() {
                    *c = data[offset + i * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (i, c) in line.iter().enumerate() {
                    data[offset + i * stride] = *c;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn forward_inverse_round_trip() {
        let grid = GridSpec::new(2, 8).unwrap();
        let fft = GridFft::<f64>::new(grid);
        let orig: Vec<Complex<f64>> = (0..grid.point_count())
            .map(|i| Complex::new((i as f64 * 0.37).sin(), 0.0))
            .collect();
        let mut work = orig.clone();
        fft.forward(&mut work);
        fft.inverse(&mut work);
        for (a, b) in orig.iter().zip(&work) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn cosine_maps_to_two_modes() {
        let grid = GridSpec::new(2, 8).unwrap();
        let fft = GridFft::<f64>::new(grid);
        let n = grid.resolution;
        let h = grid.spacing();
        let mut data = vec![Complex::new(0.0, 0.0); grid.point_count()];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = Complex::new((i as f64 * h).cos(), 0.0);
            }
        }
        fft.forward(&mut data);
        for mode in grid.modes() {
            let c = data[mode.flat];
            let expect = if mode.k[0].abs() == 1 && mode.k[1] == 0 {
                0.5
            } else {
                0.0
            };
            assert!(
                (c.re - expect).abs() < 1e-12 && c.im.abs() < 1e-12,
                "mode {:?} -> {}",
                mode.k,
                c
            );
        }
    }
}

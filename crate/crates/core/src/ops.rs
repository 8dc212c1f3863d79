//! Differential operators, the Leray projector, and norms, all acting on
//! Fourier coefficients. On the torus every operator here is diagonal per
//! mode, so projection, mollification and derivatives commute exactly.

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::field::SpectralField;
use crate::real::Real;
use num_complex::Complex;

/// Volume of the domain `(2pi)^d`.
pub fn domain_volume<T: Real>(d: usize) -> T {
    let two_pi = T::of(2.0) * T::PI();
    let mut v = T::one();
    for _ in 0..d {
        v = v * two_pi;
    }
    v
}

/// Leray projection: per mode `u -> u - k (k.u)/|k|^2`, identity at k = 0.
pub fn leray_project<T: Real>(u: &SpectralField<T>) -> SpectralField<T> {
    assert_eq!(u.components(), u.grid().dimension);
    let mut out = u.clone();
    out.map_modes(|mode, vals| {
        let ksq = mode.k_sq();
        if ksq == 0 {
            return;
        }
        let mut dot = Complex::new(T::zero(), T::zero());
        for (axis, v) in vals.iter().enumerate() {
            dot += *v * T::of(mode.k[axis] as f64);
        }
        let scale = dot / T::of(ksq as f64);
        for (axis, v) in vals.iter_mut().enumerate() {
            *v -= scale * T::of(mode.k[axis] as f64);
        }
    });
    out
}

/// Projected Laplacian: multiply each mode by `-|k|^2`, then project. For a
/// divergence-free field the projection is a no-op and `P Lap u = Lap u`.
pub fn stokes_laplacian<T: Real>(u: &SpectralField<T>) -> SpectralField<T> {
    let mut out = u.clone();
    out.map_modes(|mode, vals| {
        let factor = -T::of(mode.k_sq() as f64);
        for v in vals.iter_mut() {
            *v = *v * factor;
        }
    });
    leray_project(&out)
}

/// Spectral partial derivative along `axis`. The Nyquist bin is zeroed: its
/// first derivative has no consistent real representation on the grid.
pub fn derivative<T: Real>(u: &SpectralField<T>, axis: usize) -> SpectralField<T> {
    let nyq = u.grid().nyquist();
    let mut out = u.clone();
    out.map_modes(|mode, vals| {
        let k = mode.k[axis];
        let factor = if k.abs() == nyq {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::new(T::zero(), T::of(k as f64))
        };
        for v in vals.iter_mut() {
            *v = *v * factor;
        }
    });
    out
}

/// Gradient of a scalar field as a d-component field.
pub fn gradient_of_scalar<T: Real>(p: &SpectralField<T>) -> SpectralField<T> {
    assert_eq!(p.components(), 1);
    let d = p.grid().dimension;
    let comps = (0..d)
        .map(|axis| derivative(p, axis).comp(0).to_vec())
        .collect();
    SpectralField::from_components(p.grid(), comps).expect("same grid")
}

/// Squared L2 norm `(2pi)^d sum |c_k|^2` (Parseval).
pub fn l2_norm_sq<T: Real>(u: &SpectralField<T>) -> T {
    let vol = domain_volume::<T>(u.grid().dimension);
    let mut total = T::zero();
    for c in 0..u.components() {
        total += u.comp(c).iter().map(|z| z.norm_sqr()).sum::<T>();
    }
    total * vol
}

pub fn l2_norm<T: Real>(u: &SpectralField<T>) -> T {
    l2_norm_sq(u).sqrt()
}

/// Squared L2 norm of the full gradient: `(2pi)^d sum |k|^2 |c_k|^2`.
pub fn gradient_norm_sq<T: Real>(u: &SpectralField<T>) -> T {
    let vol = domain_volume::<T>(u.grid().dimension);
    let mut total = T::zero();
    for mode in u.grid().modes() {
        let ksq = T::of(mode.k_sq() as f64);
        for c in 0..u.components() {
            total += ksq * u.comp(c)[mode.flat].norm_sqr();
        }
    }
    total * vol
}

pub fn gradient_norm<T: Real>(u: &SpectralField<T>) -> T {
    gradient_norm_sq(u).sqrt()
}

/// L2 inner product `(u, v)` summed over components.
pub fn l2_inner<T: Real>(u: &SpectralField<T>, v: &SpectralField<T>) -> T {
    assert_eq!(u.grid(), v.grid());
    assert_eq!(u.components(), v.components());
    let vol = domain_volume::<T>(u.grid().dimension);
    let mut total = T::zero();
    for c in 0..u.components() {
        for (a, b) in u.comp(c).iter().zip(v.comp(c)) {
            total += (a * b.conj()).re;
        }
    }
    total * vol
}

/// Lq norm by quadrature of `|v(x)|` on the 3/2-refined grid; `q = 2` routes
/// through Parseval, which is exact.
pub fn norm_q<T: Real>(u: &SpectralField<T>, q: T, refined: &GridFft<T>) -> Result<T> {
    if q < T::one() {
        return Err(Error::BadNormExponent(q.to64()));
    }
    if q == T::of(2.0) {
        return Ok(l2_norm(u));
    }
    let mag = u.pointwise_magnitude(refined);
    let g = refined.grid();
    let cell = T::of(g.spacing().powi(g.dimension as i32));
    let sum: T = mag.iter().map(|&m| m.powf(q)).sum::<T>() * cell;
    Ok(sum.powf(T::one() / q))
}

/// Sup norm as the grid maximum of `|v(x)|` on the 3/2-refined grid.
pub fn norm_inf<T: Real>(u: &SpectralField<T>, refined: &GridFft<T>) -> T {
    u.pointwise_magnitude(refined)
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Zero every coefficient with any axis wavenumber above `floor(N/3)`
/// (the 2/3 anti-aliasing rule for quadratic products).
pub fn dealias<T: Real>(u: &mut SpectralField<T>) {
    let keep = (u.grid().resolution / 3) as i64;
    u.map_modes(|mode, vals| {
        if mode.k.iter().any(|k| k.abs() > keep) {
            for v in vals.iter_mut() {
                *v = Complex::new(T::zero(), T::zero());
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn single_mode_field(grid: GridSpec, k: [i64; 3], comp_vals: &[[f64; 2]]) -> SpectralField<f64> {
        // Places conj pair so the field is real.
        let mut f = SpectralField::zeros(grid, comp_vals.len());
        let n = grid.resolution as i64;
        let d = grid.dimension;
        let mut idx = [0usize; 3];
        for a in 0..d {
            idx[a] = ((k[a] + n) % n) as usize;
        }
        let flat = grid.flatten(&idx[..d]);
        let conj = grid.conjugate_index(flat);
        for (c, v) in comp_vals.iter().enumerate() {
            f.comp_mut(c)[flat] = Complex::new(v[0], v[1]);
            f.comp_mut(c)[conj] = Complex::new(v[0], -v[1]);
        }
        f
    }

    #[test]
    fn gradient_field_projects_to_zero() {
        // u = grad(sin x sin y): u_hat parallel to k at every mode.
        let grid = GridSpec::new(2, 16).unwrap();
        let fft = GridFft::new(grid);
        let n = grid.resolution;
        let h = grid.spacing();
        let mut ux = vec![0.0; grid.point_count()];
        let mut uy = vec![0.0; grid.point_count()];
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (i as f64 * h, j as f64 * h);
                ux[i * n + j] = x.cos() * y.sin();
                uy[i * n + j] = x.sin() * y.cos();
            }
        }
        let u = SpectralField::from_physical(grid, &[ux, uy], &fft).unwrap();
        let p = leray_project(&u);
        assert!(l2_norm(&p) < 1e-12);
    }

    #[test]
    fn single_fourier_mode_parallel_to_k_projects_to_zero() {
        // u = (sin x1, 0, 0): the k = (+-1,0,0) modes are parallel to k.
        let grid = GridSpec::new(3, 8).unwrap();
        let u = single_mode_field(grid, [1, 0, 0], &[[0.0, -0.5], [0.0, 0.0], [0.0, 0.0]]);
        let p = leray_project(&u);
        assert!(l2_norm(&p) < 1e-14);
    }

    #[test]
    fn projection_is_idempotent_and_contracts() {
        let grid = GridSpec::new(3, 8).unwrap();
        let u = single_mode_field(
            grid,
            [1, 2, 0],
            &[[0.3, 0.1], [-0.2, 0.4], [0.05, -0.6]],
        );
        let p1 = leray_project(&u);
        let p2 = leray_project(&p1);
        assert!(l2_norm(&p1.sub(&p2)) < 1e-14);
        assert!(l2_norm(&p1) <= l2_norm(&u) * (1.0 + 1e-14));
        // orthogonality (Pu, u - Pu) = 0
        let resid = u.sub(&p1);
        let ip = l2_inner(&p1, &resid);
        assert!(ip.abs() <= 1e-12 * l2_norm_sq(&u));
    }

    #[test]
    fn norm_q_rejects_small_exponent() {
        let grid = GridSpec::new(2, 8).unwrap();
        let refined = GridFft::new(grid.refined());
        let u = SpectralField::<f64>::zero_velocity(grid);
        assert!(norm_q(&u, 0.5, &refined).is_err());
        assert_eq!(norm_q(&u, 3.0, &refined).unwrap(), 0.0);
    }

    #[test]
    fn dealias_zeroes_high_modes_only() {
        let grid = GridSpec::new(2, 16).unwrap();
        let low = single_mode_field(grid, [2, 1, 0], &[[0.5, 0.0], [0.1, 0.0]]);
        let high = single_mode_field(grid, [7, 0, 0], &[[0.3, 0.0], [0.0, 0.0]]);
        let mut u = low.clone();
        u.axpy(1.0, &high);
        dealias(&mut u);
        assert!(l2_norm(&u.sub(&low)) < 1e-15);
    }
}

//! Small least-squares helpers for limit extrapolation.

use crate::real::Real;

/// Ordinary least squares `y = a + b x`. Returns `(a, b)`.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T) {
    let n = T::of(xs.len() as f64);
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = ys.iter().copied().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == T::zero() {
        return (mean_y, T::zero());
    }
    let b = sxy / sxx;
    (mean_y - b * mean_x, b)
}

/// Quadratic least squares `y = c0 + c1 x + c2 x^2` by normal equations.
/// Returns `(c0, c1, c2)`. Falls back to the linear fit for < 3 points.
pub fn quadratic_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    if xs.len() < 3 {
        let (a, b) = linear_fit(xs, ys);
        return (a, b, T::zero());
    }
    // moments
    let mut s = [T::zero(); 5];
    let mut t = [T::zero(); 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut xp = T::one();
        for sk in s.iter_mut() {
            *sk += xp;
            xp = xp * x;
        }
        let mut xp = T::one();
        for tk in t.iter_mut() {
            *tk += y * xp;
            xp = xp * x;
        }
    }
    // 3x3 solve via Cramer
    let m = [
        [s[0], s[1], s[2]],
        [s[1], s[2], s[3]],
        [s[2], s[3], s[4]],
    ];
    let det = det3(&m);
    if det == T::zero() {
        let (a, b) = linear_fit(xs, ys);
        return (a, b, T::zero());
    }
    let mut cols = [T::zero(); 3];
    for (i, col) in cols.iter_mut().enumerate() {
        let mut mi = m;
        for r in 0..3 {
            mi[r][i] = t[r];
        }
        *col = det3(&mi) / det;
    }
    (cols[0], cols[1], cols[2])
}

fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Log-log slope of `|y|` against `x`, or None when a value vanishes or the
/// signs are mixed (the power-law model does not apply).
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> Option<T> {
    if ys.iter().any(|&y| y == T::zero()) {
        return None;
    }
    let all_pos = ys.iter().all(|&y| y > T::zero());
    let all_neg = ys.iter().all(|&y| y < T::zero());
    if !all_pos && !all_neg {
        return None;
    }
    let lx: Vec<T> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|&y| y.abs().ln()).collect();
    let (_, slope) = linear_fit(&lx, &ly);
    Some(slope)
}

/// Intercept standard error of the linear model (residual-based).
pub fn intercept_stderr<T: Real>(xs: &[T], ys: &[T], a: T, b: T) -> T {
    let n = xs.len();
    if n < 3 {
        return T::zero();
    }
    let nf = T::of(n as f64);
    let mean_x = xs.iter().copied().sum::<T>() / nf;
    let mut sxx = T::zero();
    let mut ssr = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        let r = y - (a + b * x);
        ssr += r * r;
    }
    if sxx == T::zero() {
        return T::zero();
    }
    let s2 = ssr / T::of((n - 2) as f64);
    (s2 * (T::one() / nf + mean_x * mean_x / sxx)).sqrt()
}

/// RMS residual of an arbitrary model prediction.
pub fn rms_residual<T: Real>(ys: &[T], preds: &[T]) -> T {
    let n = T::of(ys.len() as f64);
    let ssr: T = ys
        .iter()
        .zip(preds)
        .map(|(&y, &p)| (y - p) * (y - p))
        .sum();
    (ssr / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_recovered() {
        let xs = [0.1f64, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (a, b) = linear_fit(&xs, &ys);
        assert!((a + 1.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_parabola_recovered() {
        let xs = [0.025f64, 0.05, 0.1, 0.2, 0.4];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 2.0 * x + 7.0 * x * x).collect();
        let (c0, c1, c2) = quadratic_fit(&xs, &ys);
        assert!((c0 - 0.5).abs() < 1e-10);
        assert!((c1 + 2.0).abs() < 1e-9);
        assert!((c2 - 7.0).abs() < 1e-8);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.025f64, 0.05, 0.1, 0.2, 0.4];
        let ys: Vec<f64> = xs.iter().map(|x| -3.0 * x).collect();
        let s = loglog_slope(&xs, &ys).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        let zeros = [0.0f64; 5];
        assert!(loglog_slope(&xs, &zeros).is_none());
    }
}

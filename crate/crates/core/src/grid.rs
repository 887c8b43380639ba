//! Equispaced unit-circle grids and DFT helpers shared by the sampling and
//! factorization routines.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest power of two >= max(8k, 256).
pub(crate) fn grid_size(k: usize) -> usize {
    let target = (8 * k).max(256);
    let mut m = 256;
    while m < target {
        m *= 2;
    }
    m
}

/// Points e^{i 2 pi m / M}, m = 0..M-1.
pub(crate) fn unit_circle(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|i| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / m as f64))
        .collect()
}

/// Forward DFT normalized by 1/M: bins[j] = (1/M) sum_m samples[m] e^{-2 pi i j m / M}.
///
/// This is exactly the trapezoid rule for (1/2pi) \int f(e^{i theta}) e^{-i j theta} d theta
/// on the sampled values, spectrally accurate for analytic integrands.
pub(crate) fn dft_bins(samples: &[Complex64]) -> Vec<Complex64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let inv = 1.0 / m as f64;
    for v in &mut buf {
        *v *= inv;
    }
    buf
}

/// Extract the window j in [-k, k] from DFT bins (index j mod M).
pub(crate) fn window(bins: &[Complex64], k: usize) -> Vec<Complex64> {
    let m = bins.len();
    debug_assert!(2 * k + 1 <= m);
    (0..=2 * k)
        .map(|i| {
            let j = i as i64 - k as i64;
            bins[j.rem_euclid(m as i64) as usize]
        })
        .collect()
}

/// Evaluate a coefficient window (indices -k..=k) at all M grid points via inverse DFT.
pub(crate) fn grid_eval(coeffs: &[Complex64], k: usize, m: usize) -> Vec<Complex64> {
    debug_assert_eq!(coeffs.len(), 2 * k + 1);
    debug_assert!(2 * k + 1 <= m);
    let mut bins = vec![Complex64::new(0.0, 0.0); m];
    for (i, &c) in coeffs.iter().enumerate() {
        let j = i as i64 - k as i64;
        bins[j.rem_euclid(m as i64) as usize] = c;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut bins);
    bins
}

/// Neumaier-compensated complex sum; keeps quadrature noise near one ulp of
/// the summand magnitudes instead of growing with the term count.
pub(crate) fn compensated_sum(terms: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum_re = 0.0f64;
    let mut c_re = 0.0f64;
    let mut sum_im = 0.0f64;
    let mut c_im = 0.0f64;
    for t in terms {
        let (s, c) = neumaier_step(sum_re, c_re, t.re);
        sum_re = s;
        c_re = c;
        let (s, c) = neumaier_step(sum_im, c_im, t.im);
        sum_im = s;
        c_im = c;
    }
    Complex64::new(sum_re + c_re, sum_im + c_im)
}

fn neumaier_step(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        comp + ((sum - t) + x)
    } else {
        comp + ((x - t) + sum)
    };
    (t, c)
}

/// Laurent coefficient g_j = (1/2pi) \int g(e^{i theta}) e^{-i j theta} d theta by
/// compensated trapezoid quadrature on the unit circle.
pub(crate) fn coefficient_quadrature<F>(g: F, j: i64, m: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let sum = compensated_sum((0..m).map(|i| {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
        let z = Complex64::from_polar(1.0, theta);
        g(z) * Complex64::from_polar(1.0, -(j as f64) * theta)
    }));
    sum / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size_floor_and_growth() {
        assert_eq!(grid_size(1), 256);
        assert_eq!(grid_size(32), 256);
        assert_eq!(grid_size(33), 512);
        assert_eq!(grid_size(100), 1024);
    }

    #[test]
    fn dft_window_round_trip() {
        let k = 5;
        let m = 256;
        let coeffs: Vec<Complex64> = (0..=2 * k)
            .map(|i| Complex64::new(i as f64 * 0.1 - 0.4, (i as f64).sin()))
            .collect();
        let samples = grid_eval(&coeffs, k, m);
        let back = window(&dft_bins(&samples), k);
        for (a, b) in coeffs.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn quadrature_picks_single_mode() {
        let g = |z: Complex64| z * z + 3.0 / z;
        let c = coefficient_quadrature(g, -1, 512);
        assert!((c - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        let c2 = coefficient_quadrature(g, 2, 512);
        assert!((c2 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let c0 = coefficient_quadrature(g, 0, 512);
        assert!(c0.norm() < 1e-14);
    }
}

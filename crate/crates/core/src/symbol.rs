//! Analytic symbols on an annulus around the unit circle and their Laurent
//! coefficient windows.
//!
//! Coefficients are sampled by equispaced trapezoid quadrature on |z| = 1,
//! which converges spectrally for analytic integrands. A window is considered
//! resolved once the outermost coefficients have decayed below
//! [`TAIL_TOLERANCE`] relative to the largest one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid;

/// Relative tail bound below which a coefficient window counts as resolved.
pub const TAIL_TOLERANCE: f64 = 1e-13;
/// Accuracy expected when the sampled window is evaluated back on the circle.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Hard cap for the truncation index during auto-refinement.
pub const MAX_TRUNCATION: usize = 1 << 14;

/// Finite window of Laurent coefficients g_j, j in [-K, K].
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    coeffs: Vec<Complex64>,
    k: usize,
    tail_bound: f64,
}

impl LaurentSeries {
    /// Wrap an explicit coefficient window. The slice length must be odd,
    /// laid out as j = -K..=K. Tail metadata is computed, not enforced.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(coeffs.len() % 2 == 1, "coefficient window must be odd-length");
        let k = (coeffs.len() - 1) / 2;
        let tail_bound = tail_bound_of(&coeffs, k);
        LaurentSeries { coeffs, k, tail_bound }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// g_j, zero outside the window.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let k = self.k as i64;
        if (-k..=k).contains(&j) {
            self.coeffs[(j + k) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Max |g_j| over the outermost 10% of indices on both sides.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_resolved(&self) -> bool {
        self.tail_bound <= TAIL_TOLERANCE * self.max_abs()
    }

    /// Evaluate sum_j g_j z^j by split Horner (plus part in z, minus part in 1/z).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let k = self.k as i64;
        let mut plus = Complex64::new(0.0, 0.0);
        for j in (0..=k).rev() {
            plus = plus * z + self.coeff(j);
        }
        let w = 1.0 / z;
        let mut minus = Complex64::new(0.0, 0.0);
        for j in (1..=k).rev() {
            minus = minus * w + self.coeff(-j);
        }
        plus + minus * w
    }

    /// d/dz of the series at z.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let k = self.k as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in -k..=k {
            if j != 0 {
                sum += self.coeff(j) * (j as f64) * z.powi(j as i32 - 1);
            }
        }
        sum
    }

    /// Keep indices j >= 0.
    pub fn plus_part(&self) -> LaurentSeries {
        self.filtered(|j| j >= 0)
    }

    /// Keep indices j <= -1.
    pub fn minus_part(&self) -> LaurentSeries {
        self.filtered(|j| j < 0)
    }

    pub(crate) fn filtered(&self, keep: impl Fn(i64) -> bool) -> LaurentSeries {
        let k = self.k as i64;
        let coeffs = (-k..=k)
            .map(|j| if keep(j) { self.coeff(j) } else { Complex64::new(0.0, 0.0) })
            .collect();
        LaurentSeries::from_coeffs(coeffs)
    }

    /// Coefficients of z^m * g(z), re-windowed to the same K (indices shifted
    /// past +-K are dropped).
    pub fn shifted(&self, m: i64) -> LaurentSeries {
        let k = self.k as i64;
        let coeffs = (-k..=k).map(|j| self.coeff(j - m)).collect();
        LaurentSeries::from_coeffs(coeffs)
    }

    /// Evaluate [g z^m]_+ at z: sum_{j >= 0} g_{j-m} z^j without windowing loss.
    pub fn shifted_plus_at(&self, m: i64, z: Complex64) -> Complex64 {
        let k = self.k as i64;
        // j - m in [-k, k] and j >= 0
        let lo = 0.max(m - k);
        let hi = m + k;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in (lo..=hi).rev() {
            sum = sum * z + self.coeff(j - m);
        }
        sum * z.powi(lo as i32)
    }

    /// Sampled values on the M-point unit-circle grid.
    pub(crate) fn grid_values(&self, m: usize) -> Vec<Complex64> {
        grid::grid_eval(&self.coeffs, self.k, m)
    }
}

fn tail_bound_of(coeffs: &[Complex64], k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let tail_len = (k / 10).max(1);
    let mut bound = 0.0f64;
    for i in 0..tail_len {
        bound = bound.max(coeffs[i].norm());
        bound = bound.max(coeffs[coeffs.len() - 1 - i].norm());
    }
    bound
}

/// Sample Laurent coefficients of an analytic symbol on |z| = 1.
///
/// The grid has M = smallest power of two >= max(8K, 256) points. If the
/// outermost 10% of the window has not decayed below [`TAIL_TOLERANCE`]
/// relative to the peak, K is doubled and the symbol resampled, up to
/// [`MAX_TRUNCATION`].
pub fn sample_coefficients<F>(f: F, k: usize) -> Result<LaurentSeries>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut k = k.max(1);
    loop {
        let m = grid::grid_size(k);
        let points = grid::unit_circle(m);
        let mut samples = Vec::with_capacity(m);
        for &z in &points {
            let v = f(z);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::EvaluationError { z });
            }
            samples.push(v);
        }
        let series = LaurentSeries::from_coeffs(grid::window(&grid::dft_bins(&samples), k));
        if series.is_resolved() {
            return Ok(series);
        }
        if 2 * k > MAX_TRUNCATION {
            return Err(Error::UnresolvedSeries {
                k,
                tail: series.tail_bound(),
                tol: TAIL_TOLERANCE * series.max_abs(),
            });
        }
        k *= 2;
    }
}

/// Winding number of f around the origin, from the continuous phase increment
/// over one turn of an M-point grid.
pub fn winding_number<F>(f: F, m: usize) -> Result<i32>
where
    F: Fn(Complex64) -> Complex64,
{
    let m = m.max(16);
    let points = grid::unit_circle(m);
    let mut total = 0.0f64;
    let mut prev = f(points[0]);
    for i in 1..=m {
        let theta = 2.0 * std::f64::consts::PI * (i % m) as f64 / m as f64;
        let z = Complex64::from_polar(1.0, theta);
        let v = f(z);
        if v.norm() < 1e-300 || !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::ZeroOnCircle { theta, magnitude: v.norm() });
        }
        total += (v / prev).arg();
        prev = v;
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.1 {
        return Err(Error::NonIntegerWinding { value: turns, m });
    }
    Ok(rounded as i32)
}

/// Least-squares geometric decay rates of the two coefficient tails.
///
/// Returns (rate_minus, rate_plus) with |g_{-j}| ~ rate_minus^j and
/// |g_j| ~ rate_plus^j. The fit uses the upper half of the indices that sit
/// above the relative floor, where algebraic prefactors have flattened out.
/// A side with fewer than 5 usable coefficients reports rate 0.
pub fn decay_rate(series: &LaurentSeries) -> (f64, f64) {
    let floor = TAIL_TOLERANCE * series.max_abs();
    let side = |sign: i64| -> f64 {
        let mut idx: Vec<i64> = (1..=series.k() as i64)
            .filter(|&j| series.coeff(sign * j).norm() > floor)
            .collect();
        if idx.len() < 5 {
            return 0.0;
        }
        let upper = idx.split_off(idx.len() / 2);
        let idx = if upper.len() >= 5 { upper } else { { let mut all = idx; all.extend(upper); all } };
        let n = idx.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &j in &idx {
            let x = j as f64;
            let y = series.coeff(sign * j).norm().ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        slope.exp().min(1.0)
    };
    (side(-1), side(1))
}

/// An analytic, non-vanishing symbol on an annulus rho_minus < |z| < rho_plus
/// containing the unit circle, written f(z) = a(z) z^nu with nu the winding
/// number.
pub struct AnnularSymbol {
    eval: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    nu: i32,
    rho_minus: f64,
    rho_plus: f64,
}

impl AnnularSymbol {
    /// Construct and verify: radii must straddle 1 and the measured winding
    /// number of `eval` must equal `nu`.
    pub fn new<F>(eval: F, nu: i32, rho_minus: f64, rho_plus: f64) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        if !(rho_minus < 1.0 && 1.0 < rho_plus) {
            return Err(Error::invalid(
                "rho",
                format!("need rho_minus < 1 < rho_plus, got ({rho_minus}, {rho_plus})"),
            ));
        }
        let measured = winding_number(&eval, 1024)?;
        if measured != nu {
            return Err(Error::invalid(
                "nu",
                format!("declared winding {nu} but measured {measured}"),
            ));
        }
        Ok(AnnularSymbol { eval: Box::new(eval), nu, rho_minus, rho_plus })
    }

    pub fn constant(value: Complex64) -> Self {
        AnnularSymbol {
            eval: Box::new(move |_| value),
            nu: 0,
            rho_minus: 0.0,
            rho_plus: f64::INFINITY,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn nu(&self) -> i32 {
        self.nu
    }

    pub fn rho_minus(&self) -> f64 {
        self.rho_minus
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    pub fn sample(&self, k: usize) -> Result<LaurentSeries> {
        sample_coefficients(|z| self.eval(z), k)
    }
}

impl std::fmt::Debug for AnnularSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnnularSymbol")
            .field("nu", &self.nu)
            .field("rho_minus", &self.rho_minus)
            .field("rho_plus", &self.rho_plus)
            .finish()
    }
}

/// Rule assigning the delta weight z_n to a matrix rank n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaWeight {
    /// z_n independent of n.
    Constant(Complex64),
    /// z_n = coeff / (2n + 1), the odd-chain scaling.
    OverOddRank(f64),
}

impl DeltaWeight {
    pub fn at(&self, n: usize) -> Complex64 {
        match *self {
            DeltaWeight::Constant(z) => z,
            DeltaWeight::OverOddRank(c) => Complex64::new(c / (2 * n + 1) as f64, 0.0),
        }
    }
}

/// Symbol f(e^{i theta}) [1 + 2 pi z_n delta(theta - theta0)]. The matrix
/// entries are always built from the modified-entry rule, which also fixes
/// the theta0 = 0 ambiguity.
#[derive(Debug)]
pub struct DeltaSymbol {
    pub base: AnnularSymbol,
    pub theta0: f64,
    pub weight: DeltaWeight,
}

impl DeltaSymbol {
    pub fn new(base: AnnularSymbol, theta0: f64, weight: DeltaWeight) -> Result<Self> {
        if !(0.0..2.0 * std::f64::consts::PI).contains(&theta0) {
            return Err(Error::invalid("theta0", format!("{theta0} outside [0, 2pi)")));
        }
        Ok(DeltaSymbol { base, theta0, weight })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn magnetization(lambda: f64) -> impl Fn(Complex64) -> Complex64 {
        move |z| ((1.0 - lambda / z) / (1.0 - lambda * z)).sqrt()
    }

    fn correlation_c(lambda: f64) -> impl Fn(Complex64) -> Complex64 {
        move |z| ((1.0 - lambda * z * z) * (1.0 - lambda / (z * z))).sqrt().inv()
    }

    /// Truncated binomial-series convolution of (1-lam/z)^{1/2} (1-lam z)^{-1/2}.
    fn binomial_oracle(lambda: f64, j: i64, terms: usize) -> f64 {
        let mut cm = vec![1.0f64]; // (1 - lam t)^{1/2} in t = 1/z
        let mut cp = vec![1.0f64]; // (1 - lam z)^{-1/2}
        for k in 1..=terms {
            let kf = k as f64;
            cm.push(cm[k - 1] * (0.5 - kf + 1.0) / kf * -lambda);
            cp.push(cp[k - 1] * (-0.5 - kf + 1.0) / kf * -lambda);
        }
        let mut s = 0.0;
        for k in 0..=terms as i64 {
            let m = j + k;
            if (0..=terms as i64).contains(&m) {
                s += cm[k as usize] * cp[m as usize];
            }
        }
        s
    }

    #[test]
    fn constant_symbol_coefficients() {
        let s = sample_coefficients(|_| Complex64::new(1.0, 0.0), 8).unwrap();
        assert_relative_eq!(s.coeff(0).re, 1.0, max_relative = 1e-14);
        for j in 1..=8 {
            assert!(s.coeff(j).norm() <= 1e-14);
            assert!(s.coeff(-j).norm() <= 1e-14);
        }
    }

    #[test]
    fn magnetization_coefficients_match_binomial_convolution() {
        let s = sample_coefficients(magnetization(0.5), 48).unwrap();
        for j in -40..=40 {
            let oracle = binomial_oracle(0.5, j, 400);
            assert!(
                (s.coeff(j).re - oracle).abs() < 1e-12 && s.coeff(j).im.abs() < 1e-12,
                "j = {j}: {} vs {}",
                s.coeff(j),
                oracle
            );
        }
    }

    #[test]
    fn correlation_symbol_odd_coefficients_vanish() {
        let s = sample_coefficients(correlation_c(0.5), 64).unwrap();
        let mut j = -63i64;
        while j <= 63 {
            assert!(s.coeff(j).norm() <= 1e-14, "odd coefficient {j} nonzero");
            j += 2;
        }
    }

    #[test]
    fn non_finite_symbol_rejected() {
        let err = sample_coefficients(|z| 1.0 / (z - Complex64::new(1.0, 0.0)), 4).unwrap_err();
        assert!(matches!(err, Error::EvaluationError { .. }));
    }

    #[test]
    fn unresolved_series_hits_cap() {
        // A slowly decaying (non-analytic-feeling) profile: |g_j| ~ 1/(1+|j|)
        // can never satisfy the relative tail bound.
        let f = |z: Complex64| {
            let theta = z.arg();
            Complex64::new(theta * theta, 0.0) // C0 kink at theta = +-pi
        };
        let err = sample_coefficients(f, 8).unwrap_err();
        assert!(matches!(err, Error::UnresolvedSeries { .. }));
    }

    #[test]
    fn winding_numbers() {
        assert_eq!(winding_number(|_| Complex64::new(1.0, 0.0), 256).unwrap(), 0);
        let a = magnetization(0.5);
        assert_eq!(winding_number(move |z| z * z * a(z), 512).unwrap(), 2);
        let c = |z: Complex64| ((1.0 - 0.5 / (z * z)) / (1.0 - 0.5 * z * z)).sqrt() * z * z;
        assert_eq!(winding_number(c, 512).unwrap(), 2);
    }

    #[test]
    fn winding_rejects_zero_on_circle() {
        let err = winding_number(|z| z - Complex64::new(1.0, 0.0), 256).unwrap_err();
        assert!(matches!(err, Error::ZeroOnCircle { .. } | Error::NonIntegerWinding { .. }));
    }

    #[test]
    fn decay_rates_match_singularity_locations() {
        let s = sample_coefficients(magnetization(0.5), 64).unwrap();
        let (rm, rp) = decay_rate(&s);
        assert!((rm - 0.5).abs() < 0.05, "rate_minus {rm}");
        assert!((rp - 0.5).abs() < 0.05, "rate_plus {rp}");

        let s = sample_coefficients(correlation_c(0.5), 96).unwrap();
        let (rm, rp) = decay_rate(&s);
        let target = 0.5f64.sqrt();
        assert!((rm - target).abs() < 0.1 * target, "rate_minus {rm}");
        assert!((rp - target).abs() < 0.1 * target, "rate_plus {rp}");
    }

    #[test]
    fn decay_rate_constant_symbol_is_zero() {
        let s = sample_coefficients(|_| Complex64::new(3.0, 0.0), 8).unwrap();
        assert_eq!(decay_rate(&s), (0.0, 0.0));
    }

    #[test]
    fn decay_rate_scale_invariant() {
        let s = sample_coefficients(magnetization(0.5), 64).unwrap();
        let scaled = LaurentSeries::from_coeffs(
            s.coeffs().iter().map(|c| c * Complex64::new(0.0, 137.0)).collect(),
        );
        let (a0, a1) = decay_rate(&s);
        let (b0, b1) = decay_rate(&scaled);
        assert!((a0 - b0).abs() < 1e-6 && (a1 - b1).abs() < 1e-6);
    }

    #[test]
    fn series_eval_round_trip() {
        let s = sample_coefficients(magnetization(0.5), 48).unwrap();
        let f = magnetization(0.5);
        for i in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.31) / 64.0;
            let z = Complex64::from_polar(1.0, theta);
            let direct = f(z);
            assert!((s.eval(z) - direct).norm() <= 1e-10 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn shifted_plus_at_matches_definition() {
        let s = sample_coefficients(magnetization(0.5), 32).unwrap();
        let z = Complex64::from_polar(1.0, 0.9);
        let m = 5i64;
        let mut direct = Complex64::new(0.0, 0.0);
        for j in 0..=(32 + m) {
            direct += s.coeff(j - m) * z.powi(j as i32);
        }
        assert!((s.shifted_plus_at(m, z) - direct).norm() < 1e-12);
    }

    #[test]
    fn annular_symbol_validates_winding() {
        let bad = AnnularSymbol::new(|z| z, 0, 0.5, 2.0);
        assert!(bad.is_err());
        let good = AnnularSymbol::new(|z| z, 1, 0.5, 2.0).unwrap();
        assert_eq!(good.nu(), 1);
    }

    #[test]
    fn delta_weight_rules() {
        let w = DeltaWeight::OverOddRank(-2.0);
        assert_relative_eq!(w.at(10).re, -2.0 / 21.0);
        let c = DeltaWeight::Constant(Complex64::new(0.1, -0.2));
        assert_eq!(c.at(3), Complex64::new(0.1, -0.2));
    }

    #[test]
    fn delta_symbol_rejects_out_of_range_theta0() {
        let base = AnnularSymbol::constant(Complex64::new(1.0, 0.0));
        assert!(DeltaSymbol::new(base, 7.0, DeltaWeight::Constant(Complex64::new(0.0, 0.0))).is_err());
    }
}

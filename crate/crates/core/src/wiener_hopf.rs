//! Wiener-Hopf factorization a = a_- a_+ and the component calculus for
//! functions with a unit-circle pole.
//!
//! The factorization splits log a by coefficient sign, with the index-0 term
//! assigned to a_+, so (a_-)_0 = 1. The singular components
//! [g/(z - e^{i theta0})]_-^{(<)} and [g/(z - e^{i theta0})]_+^{(>)} are
//! computed from the closed forms
//! ([g]_-(z) - [g]_-(e^{i theta0})) / (z - e^{i theta0}) and the plus
//! analogue, sampled on the circle and re-expanded.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid;
use crate::symbol::LaurentSeries;

/// Threshold below which the Lemma-1 quotient switches to the derivative value.
const NEAR_POLE: f64 = 1e-6;

/// Series data of a zero-winding factorization: log a, the factors, and
/// b = a_- a_+^{-1}, c = a_+ a_-^{-1}.
#[derive(Debug, Clone)]
pub struct WienerHopfData {
    pub log_a: LaurentSeries,
    pub a_plus: LaurentSeries,
    pub a_minus: LaurentSeries,
    pub b: LaurentSeries,
    pub c: LaurentSeries,
}

impl WienerHopfData {
    pub fn a_plus_at(&self, z: Complex64) -> Complex64 {
        self.a_plus.eval(z)
    }

    pub fn a_minus_at(&self, z: Complex64) -> Complex64 {
        self.a_minus.eval(z)
    }

    pub fn a_at(&self, z: Complex64) -> Complex64 {
        self.a_plus.eval(z) * self.a_minus.eval(z)
    }

    pub fn b_at(&self, z: Complex64) -> Complex64 {
        self.b.eval(z)
    }

    pub fn c_at(&self, z: Complex64) -> Complex64 {
        self.c.eval(z)
    }
}

/// Factorize a zero-winding symbol given by its coefficient window.
///
/// log a is computed on the sampling grid with sequential phase unwrapping;
/// the grid must be fine enough that adjacent phase steps stay below pi.
pub fn factorize(a: &LaurentSeries) -> Result<WienerHopfData> {
    let k = a.k();
    let m = grid::grid_size(k);
    let vals = a.grid_values(m);

    let mut log_vals = Vec::with_capacity(m);
    let mut phase = vals[0].arg();
    for i in 0..m {
        let v = vals[i];
        let theta = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
        if !v.re.is_finite() || !v.im.is_finite() || v.norm() == 0.0 {
            return Err(Error::ZeroOnCircle { theta, magnitude: v.norm() });
        }
        if i > 0 {
            let step = (v / vals[i - 1]).arg();
            if step.abs() > 0.9 * std::f64::consts::PI {
                return Err(Error::PhaseStepTooLarge { step });
            }
            phase += step;
        }
        log_vals.push(Complex64::new(v.norm().ln(), phase));
    }
    let closure = phase + (vals[0] / vals[m - 1]).arg() - vals[0].arg();
    let turns = closure / (2.0 * std::f64::consts::PI);
    if (turns - turns.round()).abs() > 0.1 {
        return Err(Error::NonIntegerWinding { value: turns, m });
    }
    if turns.round() as i32 != 0 {
        return Err(Error::NonzeroWinding { nu: turns.round() as i32 });
    }

    let log_a = LaurentSeries::from_coeffs(grid::window(&grid::dft_bins(&log_vals), k));
    let lp = log_a.plus_part().grid_values(m);
    let lm = log_a.minus_part().grid_values(m);

    let resample = |vals: Vec<Complex64>| -> LaurentSeries {
        LaurentSeries::from_coeffs(grid::window(&grid::dft_bins(&vals), k))
    };
    let exp_of = |s: &[Complex64]| s.iter().map(|v| v.exp()).collect::<Vec<_>>();
    let diff_exp = |p: &[Complex64], q: &[Complex64]| {
        p.iter().zip(q).map(|(x, y)| (x - y).exp()).collect::<Vec<_>>()
    };

    // exp([log a]_+) is analytic in the disk, exp([log a]_-) outside it with
    // value 1 at infinity; coefficients on the wrong side are pure roundoff.
    let a_plus = resample(exp_of(&lp)).filtered(|j| j >= 0);
    let a_minus = resample(exp_of(&lm)).filtered(|j| j <= 0);
    let b = resample(diff_exp(&lm, &lp));
    let c = resample(diff_exp(&lp, &lm));

    Ok(WienerHopfData { log_a, a_plus, a_minus, b, c })
}

/// [g]_-: keep indices j <= -1.
pub fn component_minus(g: &LaurentSeries) -> LaurentSeries {
    g.minus_part()
}

/// [g]_+: keep indices j >= 0.
pub fn component_plus(g: &LaurentSeries) -> LaurentSeries {
    g.plus_part()
}

/// [g/(z - e^{i theta0})]_-^{(<)} as a coefficient window (indices <= -1).
pub fn singular_minus(g: &LaurentSeries, theta0: f64) -> LaurentSeries {
    singular_component(&g.minus_part(), theta0).filtered(|j| j < 0)
}

/// [g/(z - e^{i theta0})]_+^{(>)} as a coefficient window (indices >= 0).
pub fn singular_plus(g: &LaurentSeries, theta0: f64) -> LaurentSeries {
    singular_component(&g.plus_part(), theta0).filtered(|j| j >= 0)
}

/// (h(z) - h(e^{i theta0})) / (z - e^{i theta0}) sampled and re-expanded,
/// with the derivative value near the pole.
fn singular_component(h: &LaurentSeries, theta0: f64) -> LaurentSeries {
    let et = Complex64::from_polar(1.0, theta0);
    let at_pole = h.eval(et);
    let m = grid::grid_size(h.k());
    let mut samples = Vec::with_capacity(m);
    for z in grid::unit_circle(m) {
        let v = if (z - et).norm() < NEAR_POLE {
            h.eval_derivative(et)
        } else {
            (h.eval(z) - at_pole) / (z - et)
        };
        samples.push(v);
    }
    LaurentSeries::from_coeffs(grid::window(&grid::dft_bins(&samples), h.k()))
}

/// i d/dtheta log b(e^{i theta}) at theta0, from the log a coefficients:
/// (log b)_k = (log a)_k for k < 0 and -(log a)_k for k >= 0.
pub fn log_derivative_b(wh: &WienerHopfData, theta0: f64) -> Complex64 {
    let k = wh.log_a.k() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in -k..=k {
        if j == 0 {
            continue;
        }
        let sign = if j < 0 { 1.0 } else { -1.0 };
        let lb = wh.log_a.coeff(j) * sign;
        // i * (i j) e^{i j theta0} = -j e^{i j theta0}
        sum += lb * (-(j as f64)) * Complex64::from_polar(1.0, j as f64 * theta0);
    }
    sum
}

//! Double-exponential (tanh-sinh) quadrature on a finite interval.
//!
//! The substitution `x = tanh((pi/2) sinh t)` pushes the endpoints to
//! infinity and makes the trapezoidal rule converge double-exponentially,
//! absorbing algebraic endpoint singularities `(x-a)^e`, `(b-x)^e` with
//! `e > -1` without any weight bookkeeping. Infinite intervals are handled
//! by the callers through explicit compactifying substitutions.

use num_complex::Complex64;

use super::Tolerance;
use crate::error::{Error, Result};

use std::f64::consts::FRAC_PI_2;

/// A quadrature node, carrying stable distances to both endpoints.
///
/// Near an endpoint the distance underflows long before `x` stops being
/// representable, so singular factors must be evaluated from `from_lo` /
/// `from_hi` rather than from `x` itself.
#[derive(Debug, Clone, Copy)]
pub struct DeNode {
    /// The abscissa in `(lo, hi)`.
    pub x: f64,
    /// Distance `x - lo`, computed without cancellation.
    pub from_lo: f64,
    /// Distance `hi - x`, computed without cancellation.
    pub from_hi: f64,
}

struct Levels {
    lo: f64,
    half: f64,
    width: f64,
    t_lo: f64,
    t_hi: f64,
}

impl Levels {
    /// Node at transformed parameter `t`; `None` once the endpoint distance
    /// underflows (the weight is then far below any tolerance too).
    fn node(&self, t: f64) -> Option<(DeNode, f64)> {
        let (t_cut, toward_hi) = if t >= 0.0 {
            (self.t_hi, true)
        } else {
            (self.t_lo, false)
        };
        if t.abs() > t_cut {
            return None;
        }
        let u = FRAC_PI_2 * t.sinh();
        // 1 - tanh|u| = 2 e^{-2|u|} / (1 + e^{-2|u|})
        let eu = (-2.0 * u.abs()).exp();
        let delta = self.half * 2.0 * eu / (1.0 + eu);
        if delta == 0.0 || !delta.is_finite() {
            return None;
        }
        let sech = 1.0 / (FRAC_PI_2 * t.sinh()).cosh();
        let w = self.half * FRAC_PI_2 * t.cosh() * sech * sech;
        if w == 0.0 || !w.is_finite() {
            return None;
        }
        let (from_lo, from_hi) = if toward_hi {
            (self.width - delta, delta)
        } else {
            (delta, self.width - delta)
        };
        let x = if toward_hi {
            self.lo + self.width - delta
        } else {
            self.lo + delta
        };
        Some((
            DeNode {
                x,
                from_lo,
                from_hi,
            },
            w,
        ))
    }
}

fn cutoff_param(exponent: f64) -> f64 {
    // Keep |delta^e * weight| below ~1e-20: the endpoint factor behaves
    // like exp(-2u(1+e)), u = (pi/2) sinh t.
    let u_needed = 22.5 / (1.0 + exponent).max(0.05);
    let t = (u_needed.max(22.5) * 2.0 / std::f64::consts::PI).asinh() + 0.5;
    t.min(6.2)
}

/// Integrate `f` over `(lo, hi)` by the tanh-sinh rule.
///
/// `singular_exponents = (e_lo, e_hi)` describe the algebraic behavior of
/// the integrand near the endpoints (`> -1` each); they only shape the
/// truncation range, the rule itself needs no weights. Refinement halves
/// the step until two successive levels agree to `max(abs_eps,
/// rel_eps*|I|)`, up to `quad_levels` halvings.
pub fn integrate_de<F>(
    f: F,
    lo: f64,
    hi: f64,
    singular_exponents: (f64, f64),
    tol: &Tolerance,
) -> Result<Complex64>
where
    F: Fn(&DeNode) -> Complex64,
{
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "empty or reversed interval [{lo}, {hi}]"
        )));
    }
    let (e_lo, e_hi) = singular_exponents;
    if e_lo <= -1.0 || e_hi <= -1.0 {
        return Err(Error::Domain("endpoint exponents must exceed -1".into()));
    }
    let lv = Levels {
        lo,
        half: 0.5 * (hi - lo),
        width: hi - lo,
        t_lo: cutoff_param(e_lo),
        t_hi: cutoff_param(e_hi),
    };
    let eval = |t: f64| -> Complex64 {
        match lv.node(t) {
            Some((node, w)) => f(&node) * w,
            None => Complex64::new(0.0, 0.0),
        }
    };

    let t_max = lv.t_lo.max(lv.t_hi);
    let mut h = 1.0f64;
    // level 0: all integer multiples of h
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = (k as f64) * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut value = sum * h;
    let mut prev = value;

    for level in 1..=tol.quad_levels {
        h *= 0.5;
        let mut add = Complex64::new(0.0, 0.0);
        let mut k = 1;
        // only odd multiples of the refined step are new
        while (k as f64) * h <= t_max {
            let t = (k as f64) * h;
            add += eval(t) + eval(-t);
            k += 2;
        }
        prev = value;
        value = prev * 0.5 + add * h;
        let err = (value - prev).norm();
        if level >= 2 && err <= tol.abs_eps.max(tol.rel_eps * value.norm()) {
            return Ok(value);
        }
    }
    let err = (value - prev).norm();
    if err > 10.0 * tol.abs_eps.max(tol.rel_eps * value.norm()) {
        return Err(Error::NonConvergent(format!(
            "tanh-sinh level disagreement {err:.3e} after {} levels",
            tol.quad_levels
        )));
    }
    Ok(value)
}

/// Convenience wrapper for integrands given as a function of the bare
/// abscissa, when no endpoint factor needs the stable distances.
pub fn integrate_de_complex<F>(
    f: F,
    lo: f64,
    hi: f64,
    singular_exponents: (f64, f64),
    tol: &Tolerance,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_de(|n| f(n.x), lo, hi, singular_exponents, tol)
}

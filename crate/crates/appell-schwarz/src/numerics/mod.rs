//! Shared numerical infrastructure: tolerances, unit phases, torus
//! (lattice-quotient) arithmetic, quadrature and special functions.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

mod gamma;
mod quad;

pub use gamma::{beta_fn, gamma_fn};
pub use quad::{integrate_de, integrate_de_complex, DeNode};

use std::f64::consts::TAU;

/// Tolerance bundle threaded through every numerical operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute tolerance for quadrature and comparisons.
    pub abs_eps: f64,
    /// Relative tolerance for quadrature.
    pub rel_eps: f64,
    /// Maximum refinement depth of the double-exponential rule.
    pub quad_levels: u32,
    /// Truncation threshold for theta and hypergeometric series.
    pub theta_trunc_eps: f64,
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64, quad_levels: u32, theta_trunc_eps: f64) -> Result<Self> {
        if !(abs_eps > 0.0 && rel_eps > 0.0 && theta_trunc_eps > 0.0) {
            return Err(Error::Domain("tolerances must be strictly positive".into()));
        }
        if quad_levels == 0 || quad_levels > 16 {
            return Err(Error::Domain("quad_levels must be in 1..=16".into()));
        }
        Ok(Tolerance {
            abs_eps,
            rel_eps,
            quad_levels,
            theta_trunc_eps,
        })
    }
}

impl Default for Tolerance {
    /// Defaults leave at least three digits of headroom over the 1e-8
    /// verification thresholds.
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-12,
            rel_eps: 1e-11,
            quad_levels: 12,
            theta_trunc_eps: 1e-14,
        }
    }
}

/// A root of unity `e(q) = exp(2 pi i q)` with exact rational exponent.
///
/// Phase constants of the period formulas (`e(3/8)`, `e(-1/8)`, ...) are
/// kept as rationals so that products and inverses stay exact until the
/// final complex evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitPhase {
    q: Ratio<i64>,
}

impl UnitPhase {
    pub fn new(num: i64, den: i64) -> Self {
        UnitPhase {
            q: Ratio::new(num, den),
        }
    }

    pub fn exponent(&self) -> Ratio<i64> {
        self.q
    }

    /// The complex value `exp(2 pi i q)`, evaluated on the fractional part
    /// of `q` so large exponents cost no precision.
    pub fn value(&self) -> Complex64 {
        let f = self.q.fract();
        let angle = TAU * (*f.numer() as f64) / (*f.denom() as f64);
        Complex64::new(angle.cos(), angle.sin())
    }

    pub fn mul(&self, other: &UnitPhase) -> UnitPhase {
        UnitPhase {
            q: self.q + other.q,
        }
    }
}

/// A point of the complex torus `C / (Z tau + Z)`, kept as a raw
/// representative; reduction is a separate, explicit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub y: Complex64,
    pub tau: Complex64,
}

impl TorusPoint {
    pub fn new(y: Complex64, tau: Complex64) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::Domain("tau must lie in the upper half-plane".into()));
        }
        Ok(TorusPoint { y, tau })
    }

    /// Lattice coordinates `(p, q)` with `y = p tau + q`, both real.
    pub fn lattice_coords(&self) -> (f64, f64) {
        let p = self.y.im / self.tau.im;
        let q = self.y.re - p * self.tau.re;
        (p, q)
    }
}

fn frac_unit(x: f64) -> f64 {
    let mut f = x - x.floor();
    if f >= 1.0 {
        f -= 1.0;
    }
    if f < 0.0 {
        f = 0.0;
    }
    f
}

/// Reduce a torus point to the representative with lattice coordinates in
/// `[0,1)^2`. Idempotent: an already-reduced point is returned unchanged.
pub fn torus_reduce(p: &TorusPoint) -> Result<TorusPoint> {
    if p.tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let mut cur = *p;
    for _ in 0..4 {
        let (cp, cq) = cur.lattice_coords();
        if (0.0..1.0).contains(&cp) && (0.0..1.0).contains(&cq) {
            return Ok(cur);
        }
        let rp = frac_unit(cp);
        let rq = frac_unit(cq);
        cur = TorusPoint {
            y: cur.tau * rp + Complex64::new(rq, 0.0),
            tau: cur.tau,
        };
    }
    Ok(cur)
}

/// Equality on the torus, testing adjacent lattice translates so that
/// representatives straddling the cell boundary still compare equal.
pub fn torus_eq(p: &TorusPoint, q: &TorusPoint, tol: &Tolerance) -> Result<bool> {
    let tau_scale = 1.0 + p.tau.norm().max(q.tau.norm());
    if (p.tau - q.tau).norm() > 1e-9 * tau_scale {
        return Err(Error::Domain("torus points live on different tori".into()));
    }
    let a = torus_reduce(p)?;
    let b = torus_reduce(q)?;
    let (pa, qa) = a.lattice_coords();
    let (pb, qb) = b.lattice_coords();
    let close = |u: f64, v: f64| -> bool {
        let d = u - v;
        [d, d + 1.0, d - 1.0]
            .iter()
            .any(|e| e.abs() < tol.abs_eps.max(1e-13))
    };
    Ok(close(pa, pb) && close(qa, qb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: Tolerance = Tolerance {
        abs_eps: 1e-12,
        rel_eps: 1e-11,
        quad_levels: 12,
        theta_trunc_eps: 1e-14,
    };

    fn tau() -> Complex64 {
        Complex64::new(0.3, 1.4)
    }

    #[test]
    fn reduce_lattice_point() {
        let p = TorusPoint::new(tau() + Complex64::new(1.0, 0.0), tau()).unwrap();
        let r = torus_reduce(&p).unwrap();
        assert!(r.y.norm() < 1e-12);
    }

    #[test]
    fn reduce_negative_half_period() {
        // -1/2 and 1/2 coincide on the torus
        let p = TorusPoint::new(Complex64::new(-0.5, 0.0), tau()).unwrap();
        let r = torus_reduce(&p).unwrap();
        assert!((r.y - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reduce_fractional_parts() {
        let p = TorusPoint::new(tau() * 2.3 + Complex64::new(0.7, 0.0), tau()).unwrap();
        let r = torus_reduce(&p).unwrap();
        let expect = tau() * 0.3 + Complex64::new(0.7, 0.0);
        assert!((r.y - expect).norm() < 1e-12);
    }

    #[test]
    fn eq_on_translates() {
        let p0 = TorusPoint::new(Complex64::new(0.0, 0.0), tau()).unwrap();
        let p1 = TorusPoint::new(tau() + Complex64::new(2.0, 0.0), tau()).unwrap();
        assert!(torus_eq(&p0, &p1, &TOL).unwrap());
    }

    #[test]
    fn distinct_two_torsion() {
        let a = TorusPoint::new(Complex64::new(0.5, 0.0), tau()).unwrap();
        let b = TorusPoint::new(tau() * 0.5, tau()).unwrap();
        assert!(!torus_eq(&a, &b, &TOL).unwrap());
    }

    #[test]
    fn wraparound_eq() {
        let a = TorusPoint::new(Complex64::new(1.0 - 1e-14, 0.0), tau()).unwrap();
        let b = TorusPoint::new(Complex64::new(0.0, 0.0), tau()).unwrap();
        assert!(torus_eq(&a, &b, &TOL).unwrap());
    }

    #[test]
    fn mismatched_tau_rejected() {
        let a = TorusPoint::new(Complex64::new(0.1, 0.0), tau()).unwrap();
        let b = TorusPoint::new(Complex64::new(0.1, 0.0), Complex64::new(0.0, 2.0)).unwrap();
        assert!(torus_eq(&a, &b, &TOL).is_err());
    }

    #[test]
    fn phase_eighths_table() {
        let e = UnitPhase::new(3, 8).value();
        let expect = Complex64::new(-(0.5f64).sqrt(), (0.5f64).sqrt());
        assert!((e - expect).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn torus_reduce_idempotent(re in -5.0f64..5.0, im in -5.0f64..5.0,
                                   tre in -1.0f64..1.0, tim in 0.3f64..3.0) {
            let t = Complex64::new(tre, tim);
            let p = TorusPoint::new(Complex64::new(re, im), t).unwrap();
            let r1 = torus_reduce(&p).unwrap();
            let r2 = torus_reduce(&r1).unwrap();
            prop_assert_eq!(r1.y.re.to_bits(), r2.y.re.to_bits());
            prop_assert_eq!(r1.y.im.to_bits(), r2.y.im.to_bits());
        }

        #[test]
        fn unit_phase_multiplicative(n1 in -40i64..40, n2 in -40i64..40,
                                     d1 in 1i64..12, d2 in 1i64..12) {
            let a = UnitPhase::new(n1, d1);
            let b = UnitPhase::new(n2, d2);
            let lhs = a.value() * b.value();
            let rhs = a.mul(&b).value();
            prop_assert!((lhs - rhs).norm() < 1e-14);
        }
    }
}

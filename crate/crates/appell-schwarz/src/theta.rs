//! Theta functions with characteristics on `C x H`,
//!
//! `theta_{k,l}(y, tau) = sum_n exp(pi i ((n + k/2)^2 tau + 2 (n + k/2)(y + l/2)))`,
//!
//! together with their five quasi-periodicity/half-period laws, Jacobi's
//! quartic identity for the constants, and the two modular transformations
//! (`tau -> tau + 2` and `tau -> -1/tau`) used to cut out the image of the
//! Schwarz map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::Tolerance;

use std::f64::consts::PI;

/// One of the four characteristics `(k, l)` with `k, l` in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaChar {
    pub k: u8,
    pub l: u8,
}

pub const TH00: ThetaChar = ThetaChar { k: 0, l: 0 };
pub const TH01: ThetaChar = ThetaChar { k: 0, l: 1 };
pub const TH10: ThetaChar = ThetaChar { k: 1, l: 0 };
pub const TH11: ThetaChar = ThetaChar { k: 1, l: 1 };

impl ThetaChar {
    pub fn new(k: u8, l: u8) -> Result<Self> {
        if k > 1 || l > 1 {
            return Err(Error::Domain("theta characteristics lie in {0,1}^2".into()));
        }
        Ok(ThetaChar { k, l })
    }

    pub const ALL: [ThetaChar; 4] = [TH00, TH01, TH10, TH11];
}

fn check_tau(tau: Complex64) -> Result<()> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    if tau.im < 0.05 {
        return Err(Error::Domain(
            "Im tau below 0.05 is rejected; reduce tau to the fundamental range first".into(),
        ));
    }
    Ok(())
}

/// Truncation bound from the Gaussian tail of the summand, with a margin
/// of two terms.
fn truncation_n(y: Complex64, tau: Complex64, eps: f64) -> i64 {
    let tail = ((-eps.ln()).max(0.0) / (PI * tau.im)).sqrt();
    (y.im.abs() / tau.im + tail + 2.0).ceil() as i64
}

/// Theta function with characteristics.
pub fn theta(ch: ThetaChar, y: Complex64, tau: Complex64, tol: &Tolerance) -> Result<Complex64> {
    check_tau(tau)?;
    let n_max = truncation_n(y, tau, tol.theta_trunc_eps);
    Ok(theta_sum(ch, y, tau, n_max))
}

fn theta_sum(ch: ThetaChar, y: Complex64, tau: Complex64, n_max: i64) -> Complex64 {
    let i_pi = Complex64::new(0.0, PI);
    let kk = f64::from(ch.k) / 2.0;
    let ll = f64::from(ch.l) / 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        let m = n as f64 + kk;
        let expo = i_pi * (m * m * tau + 2.0 * m * (y + ll));
        sum += expo.exp();
    }
    sum
}

/// Theta constant `theta_{k,l}(0, tau)`.
pub fn theta_const(ch: ThetaChar, tau: Complex64, tol: &Tolerance) -> Complex64 {
    // Im tau > 0 is the caller's responsibility at this level; the checked
    // entry point is `theta`.
    let n_max = truncation_n(Complex64::new(0.0, 0.0), tau, tol.theta_trunc_eps);
    theta_sum(ch, Complex64::new(0.0, 0.0), tau, n_max)
}

/// Doubling the truncation must not move the value: used by the tests to
/// validate the tail bound.
pub fn theta_doubled_n(ch: ThetaChar, y: Complex64, tau: Complex64, tol: &Tolerance) -> Complex64 {
    let n_max = truncation_n(y, tau, tol.theta_trunc_eps);
    theta_sum(ch, y, tau, 2 * n_max)
}

/// The five displayed transformation laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicIdentity {
    /// `theta(y + p tau + q) = (-1)^{kq+lp} exp(-pi i (p^2 tau + 2 p y)) theta(y)`
    QuasiPeriod,
    /// `theta(-y) = (-1)^{kl} theta(y)`
    Parity,
    /// `theta(y + 1/2) = (-1)^{kl} theta_{k,1-l}(y)`
    HalfOne,
    /// `theta(y + tau/2) = (-i)^l exp(-pi i (tau/4 + y)) theta_{1-k,l}(y)`
    HalfTau,
    /// `theta(y + (tau+1)/2) = (-1)^{kl} (-i)^{1-l} exp(-pi i (tau/4 + y)) theta_{1-k,1-l}(y)`
    HalfTauPlusOne,
}

fn minus_i_pow(e: u8) -> Complex64 {
    match e % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn sign_pow(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Relative residual `|LHS - RHS| / (1 + |LHS| + |RHS|)` of one transformation
/// law, with both sides evaluated by independent theta sums.
pub fn basic_identity_residual(
    id: BasicIdentity,
    ch: ThetaChar,
    y: Complex64,
    tau: Complex64,
    p: i64,
    q: i64,
    tol: &Tolerance,
) -> Result<f64> {
    check_tau(tau)?;
    let i_pi = Complex64::new(0.0, PI);
    let base = theta(ch, y, tau, tol)?;
    let (lhs, rhs) = match id {
        BasicIdentity::QuasiPeriod => {
            let shifted = y + tau * p as f64 + Complex64::new(q as f64, 0.0);
            let lhs = theta(ch, shifted, tau, tol)?;
            let factor = sign_pow(i64::from(ch.k) * q + i64::from(ch.l) * p)
                * (-(i_pi) * ((p * p) as f64 * tau + 2.0 * p as f64 * y)).exp();
            (lhs, factor * base)
        }
        BasicIdentity::Parity => {
            let lhs = theta(ch, -y, tau, tol)?;
            (lhs, sign_pow(i64::from(ch.k) * i64::from(ch.l)) * base)
        }
        BasicIdentity::HalfOne => {
            let lhs = theta(ch, y + Complex64::new(0.5, 0.0), tau, tol)?;
            let flip = ThetaChar {
                k: ch.k,
                l: 1 - ch.l,
            };
            (
                lhs,
                sign_pow(i64::from(ch.k) * i64::from(ch.l)) * theta(flip, y, tau, tol)?,
            )
        }
        BasicIdentity::HalfTau => {
            let lhs = theta(ch, y + tau * 0.5, tau, tol)?;
            let flip = ThetaChar {
                k: 1 - ch.k,
                l: ch.l,
            };
            let factor = minus_i_pow(ch.l) * (-(i_pi) * (tau * 0.25 + y)).exp();
            (lhs, factor * theta(flip, y, tau, tol)?)
        }
        BasicIdentity::HalfTauPlusOne => {
            let lhs = theta(ch, y + (tau + Complex64::new(1.0, 0.0)) * 0.5, tau, tol)?;
            let flip = ThetaChar {
                k: 1 - ch.k,
                l: 1 - ch.l,
            };
            let factor = sign_pow(i64::from(ch.k) * i64::from(ch.l))
                * minus_i_pow(1 - ch.l)
                * (-(i_pi) * (tau * 0.25 + y)).exp();
            (lhs, factor * theta(flip, y, tau, tol)?)
        }
    };
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm()))
}

/// The two modular transformations that preserve the image equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModularLaw {
    /// `theta00(y, tau+2) = theta00(y, tau)`; `theta11(y, tau+2) = i theta11(y, tau)`
    Shift2,
    /// `theta00(y/tau, -1/tau) = sqrt(-i tau) exp(pi i y^2 / tau) theta00(y, tau)`
    /// and the analogous law for `theta11` with an extra `-i`.
    Inversion,
}

/// Relative residual of the selected modular law for the characteristic
/// `(0,0)` or `(1,1)`.
pub fn modular_residual(
    law: ModularLaw,
    ch: ThetaChar,
    y: Complex64,
    tau: Complex64,
    tol: &Tolerance,
) -> Result<f64> {
    check_tau(tau)?;
    if ch != TH00 && ch != TH11 {
        return Err(Error::Domain(
            "modular laws are stated for (0,0) and (1,1)".into(),
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let (lhs, rhs) = match law {
        ModularLaw::Shift2 => {
            let lhs = theta(ch, y, tau + Complex64::new(2.0, 0.0), tol)?;
            let factor = if ch == TH11 {
                i
            } else {
                Complex64::new(1.0, 0.0)
            };
            (lhs, factor * theta(ch, y, tau, tol)?)
        }
        ModularLaw::Inversion => {
            let lhs = theta(ch, y / tau, -tau.inv(), tol)?;
            let root = (-i * tau).sqrt(); // principal branch
            let factor = root * (Complex64::new(0.0, PI) * y * y / tau).exp();
            let extra = if ch == TH11 {
                -i
            } else {
                Complex64::new(1.0, 0.0)
            };
            (lhs, extra * factor * theta(ch, y, tau, tol)?)
        }
    };
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm()))
}

/// Central-difference `|d/dy (theta11/theta00)|` at `y = 1/2` and `y = tau/2`;
/// both derivatives vanish because the shifted quotients are even in `y`.
pub fn theta11_ratio_derivative_check(
    tau: Complex64,
    h: f64,
    tol: &Tolerance,
) -> Result<(f64, f64)> {
    check_tau(tau)?;
    let ratio = |y: Complex64| -> Result<Complex64> {
        Ok(theta(TH11, y, tau, tol)? / theta(TH00, y, tau, tol)?)
    };
    let deriv = |y: Complex64| -> Result<f64> {
        let hh = Complex64::new(h, 0.0);
        Ok(((ratio(y + hh)? - ratio(y - hh)?) / (2.0 * h)).norm())
    };
    Ok((deriv(Complex64::new(0.5, 0.0))?, deriv(tau * 0.5)?))
}

/// `|theta01^4 + theta10^4 - theta00^4|` at `y = 0` (Jacobi's identity).
pub fn jacobi_identity_residual(tau: Complex64, tol: &Tolerance) -> Result<f64> {
    check_tau(tau)?;
    let t01 = theta_const(TH01, tau, tol);
    let t10 = theta_const(TH10, tau, tol);
    let t00 = theta_const(TH00, tau, tol);
    Ok((t01.powu(4) + t10.powu(4) - t00.powu(4)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta11_vanishes_at_origin() {
        let v = theta(TH11, c(0.0, 0.0), c(0.0, 1.3), &tol()).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn theta00_at_i_closed_form() {
        // theta00(0, i) = pi^{1/4} / Gamma(3/4) = 1.0864348112133080146
        let v = theta(TH00, c(0.0, 0.0), c(0.0, 1.0), &tol()).unwrap();
        assert!(
            (v.re - 1.086_434_811_213_308_014_6).abs() < 1e-13,
            "got {}",
            v.re
        );
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn theta01_even_in_y() {
        let y = c(0.23, 0.11);
        let tau = c(0.2, 1.1);
        let a = theta(TH01, y, tau, &tol()).unwrap();
        let b = theta(TH01, -y, tau, &tol()).unwrap();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn jacobi_identity_on_grid() {
        for &im in &[0.6, 1.0, 1.7, 2.5] {
            for &re in &[-0.8, 0.0, 0.9] {
                let r = jacobi_identity_residual(c(re, im), &tol()).unwrap();
                assert!(r < 1e-12, "residual {r:.2e} at tau = {re}+{im}i");
            }
        }
    }

    #[test]
    fn theta_const_equal_at_fixed_point() {
        // tau = i is fixed by -1/tau, forcing theta01(i) = theta10(i)
        let t01 = theta_const(TH01, c(0.0, 1.0), &tol());
        let t10 = theta_const(TH10, c(0.0, 1.0), &tol());
        assert!((t01 - t10).norm() < 1e-13);
    }

    #[test]
    fn theta10_decays_for_large_im() {
        let v = theta_const(TH10, c(0.0, 40.0), &tol());
        // leading term 2 exp(-pi t / 4)
        let lead = 2.0 * (-std::f64::consts::PI * 10.0).exp();
        assert!((v.re - lead).abs() < 1e-15 && v.re < 1e-12);
    }

    #[test]
    fn quasi_period_trivial_shift() {
        let r = basic_identity_residual(
            BasicIdentity::QuasiPeriod,
            TH10,
            c(0.3, 0.2),
            c(0.1, 0.9),
            0,
            0,
            &tol(),
        )
        .unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn all_five_laws_random_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let laws = [
            BasicIdentity::QuasiPeriod,
            BasicIdentity::Parity,
            BasicIdentity::HalfOne,
            BasicIdentity::HalfTau,
            BasicIdentity::HalfTauPlusOne,
        ];
        for trial in 0..100 {
            let ch = ThetaChar::ALL[rng.gen_range(0..4)];
            let law = laws[trial % laws.len()];
            let y = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let tau = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..3.0));
            let p = rng.gen_range(-3..=3);
            let q = rng.gen_range(-3..=3);
            let r = basic_identity_residual(law, ch, y, tau, p, q, &tol()).unwrap();
            assert!(
                r < 1e-10,
                "law {law:?} ch ({},{}) residual {r:.2e}",
                ch.k,
                ch.l
            );
        }
    }

    #[test]
    fn modular_laws() {
        let r =
            modular_residual(ModularLaw::Shift2, TH00, c(0.2, 0.1), c(0.3, 1.4), &tol()).unwrap();
        assert!(r < 1e-12, "shift2(0,0) residual {r:.2e}");
        let r = modular_residual(
            ModularLaw::Inversion,
            TH11,
            c(0.3, 0.1),
            c(0.0, 2.0),
            &tol(),
        )
        .unwrap();
        assert!(r < 1e-10, "inversion(1,1) residual {r:.2e}");
        let r = modular_residual(
            ModularLaw::Inversion,
            TH00,
            c(0.0, 0.0),
            c(0.0, 1.0),
            &tol(),
        )
        .unwrap();
        assert!(r < 1e-13, "inversion fixed point residual {r:.2e}");
    }

    #[test]
    fn derivative_vanishes_at_half_periods() {
        let (d1, d2) = theta11_ratio_derivative_check(c(0.0, 1.5), 1e-5, &tol()).unwrap();
        assert!(d1 < 1e-7 && d2 < 1e-7, "derivatives {d1:.2e} {d2:.2e}");
    }

    #[test]
    fn derivative_not_small_generically() {
        let tau = c(0.0, 1.5);
        let ratio = |y: Complex64| {
            theta(TH11, y, tau, &tol()).unwrap() / theta(TH00, y, tau, &tol()).unwrap()
        };
        let h = 1e-5;
        let y = c(0.23, 0.0);
        let d = ((ratio(y + c(h, 0.0)) - ratio(y - c(h, 0.0))) / (2.0 * h)).norm();
        assert!(d > 1e-3, "generic derivative unexpectedly small: {d:.2e}");
    }

    #[test]
    fn shifted_quotients_even() {
        // theta11(y+1/2)/theta00(y+1/2) and theta11(y+tau/2)/theta00(y+tau/2)
        // are even in y
        let tau = c(0.1, 1.2);
        for shift in [c(0.5, 0.0), tau * 0.5] {
            for y in [c(0.17, 0.05), c(-0.4, 0.2)] {
                let f = |u: Complex64| {
                    theta(TH11, u + shift, tau, &tol()).unwrap()
                        / theta(TH00, u + shift, tau, &tol()).unwrap()
                };
                assert!((f(y) - f(-y)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn truncation_doubling_stable() {
        let y = c(0.4, 0.6);
        let tau = c(-0.3, 0.8);
        for ch in ThetaChar::ALL {
            let a = theta(ch, y, tau, &tol()).unwrap();
            let b = theta_doubled_n(ch, y, tau, &tol());
            assert!((a - b).norm() < tol().theta_trunc_eps * (1.0 + a.norm()));
        }
    }

    #[test]
    fn positive_constants_on_imaginary_axis() {
        for ch in [TH00, TH01, TH10] {
            for &t in &[0.8, 1.0, 1.6, 2.4] {
                let v = theta_const(ch, c(0.0, t), &tol());
                assert!(v.re > 0.0 && v.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn low_im_tau_rejected() {
        assert!(theta(TH00, c(0.0, 0.0), c(0.0, 0.01), &tol()).is_err());
        assert!(theta(TH00, c(0.0, 0.0), c(0.0, -1.0), &tol()).is_err());
    }
}

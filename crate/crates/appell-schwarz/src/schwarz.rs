//! The Schwarz map `(x1, x2) -> (y1, y2, tau)` assembled from the four
//! periods, the theta-function equation cutting out its image, the modular
//! expression of `z` through theta constants, and the closed-form inverse.

use num_complex::Complex64;

use crate::curve::{abel_jacobi_with, dual_basis, CurvePoint};
use crate::error::{Error, Result};
use crate::hypergeo::DomainPoint;
use crate::numerics::{torus_eq, Tolerance, TorusPoint};
use crate::periods::{periods, PeriodVector};
use crate::theta::{theta, theta_const, TH00, TH01, TH10, TH11};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A point of the image: two torus coordinates and the module of the torus.
///
/// `y1` and `y2` are kept as the raw values delivered by the canonical
/// paths; reducing them independently would break the joint parity that the
/// theta expressions rely on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzImage {
    pub y1: Complex64,
    pub y2: Complex64,
    pub tau: Complex64,
}

impl SchwarzImage {
    pub fn new(y1: Complex64, y2: Complex64, tau: Complex64) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::Domain("tau must lie in the upper half-plane".into()));
        }
        Ok(SchwarzImage { y1, y2, tau })
    }
}

/// The forward map: periods to `tau = -f1/f2 - i` and
/// `y = ((1-i)/4 (f3-f4)/f2 + 1/2, (1+i)/4 (f3+f4)/f2 - i/2)`.
pub fn forward(x: &DomainPoint, tol: &Tolerance) -> Result<SchwarzImage> {
    let p = periods(x, tol)?;
    image_from_periods(&p)
}

/// Assemble the image point from an already computed period vector.
pub fn image_from_periods(p: &PeriodVector) -> Result<SchwarzImage> {
    let tau = -p.f1 / p.f2 - I;
    let y1 = (c(1.0) - I) / 4.0 * (p.f3 - p.f4) / p.f2 + c(0.5);
    let y2 = (c(1.0) + I) / 4.0 * (p.f3 + p.f4) / p.f2 - I * 0.5;
    SchwarzImage::new(y1, y2, tau)
}

/// The modified solution vector `Q (f1, f2, f3, f4)^t` whose projective
/// ratios read off `tau`, `y1`, `y2` directly.
pub fn modified_solution_vector(x: &DomainPoint, tol: &Tolerance) -> Result<[Complex64; 4]> {
    let p = periods(x, tol)?;
    let q = q_matrix();
    let f = [p.f1, p.f2, p.f3, p.f4];
    let mut out = [c(0.0); 4];
    for (r, row) in q.iter().enumerate() {
        out[r] = row.iter().zip(f.iter()).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// The change-of-basis matrix applied to the period vector.
pub fn q_matrix() -> [[Complex64; 4]; 4] {
    let h = 0.5;
    let q4 = 0.25;
    [
        [c(-1.0), -I, c(0.0), c(0.0)],
        [c(0.0), c(1.0), c(0.0), c(0.0)],
        [c(0.0), c(h), c(q4) - I * q4, c(-q4) + I * q4],
        [c(0.0), -I * h, c(q4) + I * q4, c(q4) + I * q4],
    ]
}

/// Normalized residual of the image equation
/// `theta00(y1) theta11(y2) = i theta11(y1) theta00(y2)`.
pub fn image_residual(img: &SchwarzImage, tol: &Tolerance) -> Result<f64> {
    let lhs = theta(TH00, img.y1, img.tau, tol)? * theta(TH11, img.y2, img.tau, tol)?;
    let rhs = I * theta(TH11, img.y1, img.tau, tol)? * theta(TH00, img.y2, img.tau, tol)?;
    let scale = (theta(TH00, img.y1, img.tau, tol)? * theta(TH00, img.y2, img.tau, tol)?).norm();
    Ok((lhs - rhs).norm() / scale.max(1e-300))
}

/// `z` recovered from theta constants:
/// `z = 4 theta01(tau)^4 theta10(tau)^4 / theta00(tau)^8`.
pub fn z_of_tau(tau: Complex64, tol: &Tolerance) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let t01 = theta_const(TH01, tau, tol);
    let t10 = theta_const(TH10, tau, tol);
    let t00 = theta_const(TH00, tau, tol);
    Ok(t01.powu(4) * t10.powu(4) * 4.0 / t00.powu(8))
}

/// The meromorphic building block of the inverse:
/// `theta00(tau)^4 / (4 theta01(tau)^2 theta10(tau)^2)` times the squared
/// sum of the quotients `theta01(y) theta10(y) / theta00(y)^2` at `y1, y2`.
pub fn one_minus_v(
    y1: Complex64,
    y2: Complex64,
    tau: Complex64,
    tol: &Tolerance,
) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let q = |y: Complex64| -> Result<Complex64> {
        Ok(theta(TH01, y, tau, tol)? * theta(TH10, y, tau, tol)?
            / theta(TH00, y, tau, tol)?.powu(2))
    };
    let t00 = theta_const(TH00, tau, tol);
    let t01 = theta_const(TH01, tau, tol);
    let t10 = theta_const(TH10, tau, tol);
    let cc = t00.powu(4) / (t01.powu(2) * t10.powu(2) * 4.0);
    Ok(cc * (q(y1)? + q(y2)?).powu(2))
}

/// Threshold on the image residual below which `inverse` accepts its input.
pub const NOT_ON_IMAGE_THRESHOLD: f64 = 1e-6;

/// The closed-form inverse: `x1` from the sum of theta quotients, `x2`
/// from their difference.
pub fn inverse(img: &SchwarzImage, tol: &Tolerance) -> Result<DomainPoint> {
    if img.tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let residual = image_residual(img, tol)?;
    if residual >= NOT_ON_IMAGE_THRESHOLD {
        return Err(Error::NotOnImage {
            residual,
            threshold: NOT_ON_IMAGE_THRESHOLD,
        });
    }
    let q = |y: Complex64| -> Result<Complex64> {
        Ok(
            theta(TH01, y, img.tau, tol)? * theta(TH10, y, img.tau, tol)?
                / theta(TH00, y, img.tau, tol)?.powu(2),
        )
    };
    let t00 = theta_const(TH00, img.tau, tol);
    let t01 = theta_const(TH01, img.tau, tol);
    let t10 = theta_const(TH10, img.tau, tol);
    let cc = t00.powu(4) / (t01.powu(2) * t10.powu(2) * 4.0);
    let q1 = q(img.y1)?;
    let q2 = q(img.y2)?;
    let x1 = cc * (q1 + q2).powu(2);
    let x2 = cc * (q2 - q1).powu(2);
    DomainPoint::new(x1, x2)
}

/// Torus-level comparison of the forward map with the Abel-Jacobi image of
/// `P_{1-x1}`; the two must agree as points of `T_tau + T_tau`.
pub fn forward_matches_abel_jacobi(x: &DomainPoint, tol: &Tolerance) -> Result<bool> {
    if !x.real_chamber {
        return Err(Error::Domain(
            "comparison needs a real-chamber point".into(),
        ));
    }
    let img = forward(x, tol)?;
    let z = x.z.re;
    let basis = dual_basis(z, tol)?;
    let p = CurvePoint::finite(c(1.0 - x.x1.re), 0);
    let (a1, a2) = abel_jacobi_with(&basis, &p, z, tol)?;
    let t1 = TorusPoint::new(img.y1, img.tau)?;
    let t2 = TorusPoint::new(img.y2, img.tau)?;
    // allow quadrature-level slack between the two pipelines
    let cmp_tol = Tolerance {
        abs_eps: 1e-9,
        ..*tol
    };
    Ok(torus_eq(&t1, &a1, &cmp_tol)? && torus_eq(&t2, &a2, &cmp_tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tau_pure_imaginary_on_chamber() {
        let x = DomainPoint::real(0.2, 0.2).unwrap();
        let img = forward(&x, &tol()).unwrap();
        assert!(img.tau.re.abs() < 1e-9, "Re tau = {}", img.tau.re);
        assert!(img.tau.im > 0.0);
    }

    #[test]
    fn equal_arguments_pin_y1() {
        let x = DomainPoint::real(0.2, 0.2).unwrap();
        let img = forward(&x, &tol()).unwrap();
        assert!((img.y1 - c(0.5)).norm() < 1e-12, "y1 = {}", img.y1);
    }

    #[test]
    fn swap_law() {
        let t = tol();
        let x = DomainPoint::real(0.15, 0.35).unwrap();
        let xs = DomainPoint::real(0.35, 0.15).unwrap();
        let a = forward(&x, &t).unwrap();
        let b = forward(&xs, &t).unwrap();
        assert!((b.y1 - (c(1.0) - a.y1)).norm() < 1e-10);
        assert!((b.y2 - a.y2).norm() < 1e-10);
        assert!((b.tau - a.tau).norm() < 1e-10);
    }

    #[test]
    fn modified_vector_ratios() {
        let t = tol();
        let x = DomainPoint::real(0.25, 0.4).unwrap();
        let img = forward(&x, &t).unwrap();
        let f = modified_solution_vector(&x, &t).unwrap();
        assert!((f[0] / f[1] - img.tau).norm() < 1e-10);
        assert!((f[2] / f[1] - img.y1).norm() < 1e-10);
        assert!((f[3] / f[1] - img.y2).norm() < 1e-10);
        assert!((f[0] / f[1]).im > 0.0);
    }

    #[test]
    fn image_equation_holds_and_is_sharp() {
        let t = tol();
        let x = DomainPoint::real(0.2, 0.3).unwrap();
        let img = forward(&x, &t).unwrap();
        let r = image_residual(&img, &t).unwrap();
        assert!(r < 1e-9, "residual {r:.3e}");
        let perturbed = SchwarzImage::new(img.y1 + c(0.01), img.y2, img.tau).unwrap();
        let rp = image_residual(&perturbed, &t).unwrap();
        assert!(rp > 1e-3, "perturbed residual {rp:.3e} not significant");
    }

    #[test]
    fn phi_ratio_limit_at_base_point() {
        // the l'Hopital limit of theta11(y1)/theta11(y2) at P -> P_0 equals
        // phi1(P_0)/phi2(P_0) = -i; equivalently the image equation is
        // non-degenerate at the origin
        let t = tol();
        let z = 0.5;
        let basis = dual_basis(z, &t).unwrap();
        let p = CurvePoint::finite(c(1e-8), 0);
        let (phi1, phi2) = basis.two_phi_coeffs(&p, z).unwrap();
        // the eta2 admixture decays like v^{1/2} toward the base point
        assert!((phi1 / phi2 - -I).norm() < 1e-3, "ratio {}", phi1 / phi2);
    }

    #[test]
    fn z_of_tau_fixed_point() {
        let v = z_of_tau(Complex64::new(0.0, 1.0), &tol()).unwrap();
        assert!((v - c(1.0)).norm() < 1e-10, "z(i) = {v}");
    }

    #[test]
    fn z_of_tau_matches_x() {
        let t = tol();
        for (x1, x2) in [(0.2, 0.2), (0.1, 0.4), (0.35, 0.55)] {
            let x = DomainPoint::real(x1, x2).unwrap();
            let img = forward(&x, &t).unwrap();
            let zv = z_of_tau(img.tau, &t).unwrap();
            assert!(
                (zv - x.z).norm() < 1e-9,
                "z mismatch at ({x1},{x2}): {zv} vs {}",
                x.z
            );
        }
    }

    #[test]
    fn z_of_tau_leading_term() {
        // for large Im tau, z ~ 64 exp(pi i tau)
        let tau = Complex64::new(0.0, 6.0);
        let v = z_of_tau(tau, &tol()).unwrap();
        let lead = (Complex64::new(0.0, std::f64::consts::PI) * tau).exp() * 64.0;
        assert!((v / lead - c(1.0)).norm() < 0.05, "ratio {}", v / lead);
    }

    #[test]
    fn round_trip_samples() {
        let t = tol();
        for (x1, x2) in [(0.2, 0.2), (0.3, 0.1), (0.05, 0.85)] {
            let x = DomainPoint::real(x1, x2).unwrap();
            let img = forward(&x, &t).unwrap();
            let back = inverse(&img, &t).unwrap();
            assert!(
                (back.x1 - x.x1).norm() < 1e-8 && (back.x2 - x.x2).norm() < 1e-8,
                "round trip at ({x1},{x2}) gave ({}, {})",
                back.x1,
                back.x2
            );
        }
        // equal arguments: y1 = 1/2 kills the difference bracket, so the
        // two recovered coordinates agree to machine precision
        let img = forward(&DomainPoint::real(0.2, 0.2).unwrap(), &t).unwrap();
        let back = inverse(&img, &t).unwrap();
        assert!((back.x1 - back.x2).norm() < 1e-12);
    }

    #[test]
    fn inverse_rejects_off_image_points() {
        let t = tol();
        let x = DomainPoint::real(0.3, 0.1).unwrap();
        let img = forward(&x, &t).unwrap();
        let bad = SchwarzImage::new(img.y1 + c(0.1), img.y2, img.tau).unwrap();
        match inverse(&bad, &t) {
            Err(Error::NotOnImage { .. }) => {}
            other => panic!("expected NotOnImage, got {other:?}"),
        }
        assert!(SchwarzImage::new(c(0.1), c(0.2), Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn one_minus_v_anchor_values() {
        let t = tol();
        let x = DomainPoint::real(0.2, 0.3).unwrap();
        let img = forward(&x, &t).unwrap();
        let tau = img.tau;
        // at (0,0) the function equals 1
        let v0 = one_minus_v(c(0.0), c(0.0), tau, &t).unwrap();
        assert!((v0 - c(1.0)).norm() < 1e-12);
        // at the image of P_1 = (1, 0) it vanishes
        let v1 = one_minus_v(c(1.0), c(0.0), tau, &t).unwrap();
        assert!(v1.norm() < 1e-12);
        // near the image of P_oo it blows up
        let pole = ((tau + c(1.0)) * 0.5 + c(1e-4), (tau - c(1.0)) * 0.5);
        let vp = one_minus_v(pole.0, pole.1, tau, &t).unwrap();
        assert!(vp.norm() > 1e6, "|1-v| near the pole = {:.3e}", vp.norm());
    }

    #[test]
    fn inverse_x1_is_one_minus_v_at_its_point() {
        let t = tol();
        let x = DomainPoint::real(0.25, 0.45).unwrap();
        let img = forward(&x, &t).unwrap();
        let w = one_minus_v(img.y1, img.y2, img.tau, &t).unwrap();
        assert!((w - x.x1).norm() < 1e-9, "1-v = {w} vs x1 = {}", x.x1);
    }

    #[test]
    fn forward_consistent_with_abel_jacobi() {
        let t = tol();
        for (x1, x2) in [(0.2, 0.3), (0.4, 0.15)] {
            let x = DomainPoint::real(x1, x2).unwrap();
            assert!(
                forward_matches_abel_jacobi(&x, &t).unwrap(),
                "mismatch at ({x1},{x2})"
            );
        }
    }

    #[test]
    fn forward_rejects_singular_points() {
        assert!(DomainPoint::real(0.5, 0.5).is_err());
    }
}

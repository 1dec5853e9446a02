//! Points of the quartic cover `w^4 = v^3 (1-v)(1-vz)`, its automorphisms,
//! the meromorphic functions `s`, `f_+`, `f_-`, `h_+`, `h_-`, the dual basis
//! of eigenforms and the Abel-Jacobi map into the doubled torus, together
//! with the point-level theta identities used to invert the Schwarz map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{torus_eq, Tolerance, TorusPoint};
use crate::periods::{
    beta_period, segment1_partial, segment2_partial, tau_from_periods, EigenForm, PathSegment,
};
use crate::theta::{theta, TH00, TH01, TH10, TH11};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!("z = {z} must lie in (0,1)")));
    }
    if z > 1.0 - 1e-6 {
        return Err(Error::Domain(
            "z too close to 1: the branch points v_+/- collide".into(),
        ));
    }
    Ok(())
}

/// A point of the curve: the base coordinate `v`, a branch index mod 4
/// selecting `w = i^branch * principal fourth root`, and a flag for the
/// point above `v = oo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub v: Complex64,
    pub branch: u8,
    pub at_infinity: bool,
}

impl CurvePoint {
    pub fn finite(v: Complex64, branch: u8) -> Self {
        CurvePoint {
            v,
            branch: branch % 4,
            at_infinity: false,
        }
    }

    pub fn at_infinity() -> Self {
        CurvePoint {
            v: Complex64::new(f64::INFINITY, 0.0),
            branch: 0,
            at_infinity: true,
        }
    }

    /// The canonical lift of a real `v` on the integration path: branch 0
    /// (positive real `w`) on `(0,1)`, branch 3 on `(1, 1/z)`.
    pub fn on_path(v: f64, z: f64) -> Result<Self> {
        check_z(z)?;
        if v > 0.0 && v < 1.0 {
            Ok(CurvePoint::finite(c(v), 0))
        } else if v > 1.0 && v < 1.0 / z {
            Ok(CurvePoint::finite(c(v), 3))
        } else {
            Err(Error::Path(format!(
                "v = {v} is not interior to (0,1) or (1,1/z)"
            )))
        }
    }

    /// True at the four ramification points `P_0`, `P_1`, `P_{1/z}`, `P_oo`.
    pub fn is_ramification(&self, z: f64) -> bool {
        if self.at_infinity {
            return true;
        }
        let candidates = [c(0.0), c(1.0), c(1.0 / z)];
        candidates.iter().any(|r| (self.v - r).norm() < 1e-12)
    }

    /// The fourth-root coordinate `w` fixed by the branch index.
    pub fn w(&self, z: f64) -> Result<Complex64> {
        if self.at_infinity {
            return Err(Error::Pole("w has a pole above v = oo".into()));
        }
        let rad = self.v.powu(3) * (c(1.0) - self.v) * (c(1.0) - self.v * z);
        let principal = rad.powc(c(0.25));
        Ok(i_pow(self.branch) * principal)
    }
}

fn i_pow(e: u8) -> Complex64 {
    match e % 4 {
        0 => c(1.0),
        1 => I,
        2 => c(-1.0),
        _ => -I,
    }
}

/// The covering automorphism `(v, w) -> (v, i w)`; ramification points are
/// fixed.
pub fn sigma_pt(p: &CurvePoint, z: f64) -> CurvePoint {
    if p.at_infinity || p.is_ramification(z) {
        return *p;
    }
    CurvePoint {
        v: p.v,
        branch: (p.branch + 1) % 4,
        at_infinity: false,
    }
}

/// The involution `v -> (1-v)/(1-vz)`, `w -> v(1-v) sqrt(1-z) / ((1-vz) w)`.
///
/// On ramification points (where `w = 0` or `oo`) the map is extended by
/// continuity: it exchanges `P_0 <-> P_1` and `P_{1/z} <-> P_oo`. Elsewhere
/// the image branch is resolved by nearest-branch matching of the computed
/// `w` value.
pub fn iota_pt(p: &CurvePoint, z: f64) -> Result<CurvePoint> {
    check_z(z)?;
    if p.at_infinity {
        return Ok(CurvePoint::finite(c(1.0 / z), 0));
    }
    if (p.v - c(1.0 / z)).norm() < 1e-12 {
        return Ok(CurvePoint::at_infinity());
    }
    if p.v.norm() < 1e-12 {
        return Ok(CurvePoint::finite(c(1.0), 0));
    }
    if (p.v - c(1.0)).norm() < 1e-12 {
        return Ok(CurvePoint::finite(c(0.0), 0));
    }
    let one = c(1.0);
    let w = p.w(z)?;
    let v2 = (one - p.v) / (one - p.v * z);
    let w2 = p.v * (one - p.v) * (1.0 - z).sqrt() / ((one - p.v * z) * w);
    let target = CurvePoint::finite(v2, 0);
    let principal = target.w(z)?;
    // choose the branch matching the formula value; reject ambiguity
    let mut dists: Vec<(f64, u8)> = (0..4u8)
        .map(|k| ((i_pow(k) * principal - w2).norm(), k))
        .collect();
    dists.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = w2.norm().max(1e-30);
    if (dists[1].0 - dists[0].0).abs() < 1e-6 * scale {
        return Err(Error::Branch(format!(
            "ambiguous branch resolution at v = {} (image too close to ramification)",
            p.v
        )));
    }
    Ok(CurvePoint::finite(v2, dists[0].1))
}

/// The two finite fixed `v`-values of the involution,
/// `v_± = (1 ± sqrt(1-z)) / z`, returned as `(v_plus, v_minus)`.
/// At `z = 1` they collide into the double root `1`.
pub fn v_pm(z: Complex64) -> Result<(Complex64, Complex64)> {
    if z.norm() < 1e-14 {
        return Err(Error::Domain("v_+/- are undefined at z = 0".into()));
    }
    let root = (c(1.0) - z).sqrt();
    Ok(((c(1.0) + root) / z, (c(1.0) - root) / z))
}

/// `s = w^2 / (v (1-vz)) = v^2 (1-v) / w^2`, the degree-two coordinate
/// fixed by the involution.
pub fn fn_s(p: &CurvePoint, z: f64) -> Result<Complex64> {
    check_z(z)?;
    if p.at_infinity || p.is_ramification(z) {
        return Err(Error::Pole(
            "s degenerates at the ramification points".into(),
        ));
    }
    let w = p.w(z)?;
    Ok(w * w / (p.v * (c(1.0) - p.v * z)))
}

/// All four defining expressions of `s`; they agree on the curve and the
/// spread is a useful consistency residual.
pub fn s_expressions(p: &CurvePoint, z: f64) -> Result<[Complex64; 4]> {
    check_z(z)?;
    if p.at_infinity || p.is_ramification(z) {
        return Err(Error::Pole(
            "s degenerates at the ramification points".into(),
        ));
    }
    let one = c(1.0);
    let w = p.w(z)?;
    let u = w * w;
    Ok([
        u / (p.v * (one - p.v * z)),
        p.v * p.v * (one - p.v) / u,
        w * w / (p.v * (one - p.v * z)),
        p.v * p.v * (one - p.v) / (w * w),
    ])
}

/// `f_+ = w/v + sqrt(1-z) v/w`.
pub fn fn_fplus(p: &CurvePoint, z: f64) -> Result<Complex64> {
    check_z(z)?;
    if p.at_infinity || p.is_ramification(z) {
        return Err(Error::Pole(
            "f_+ degenerates at the ramification points".into(),
        ));
    }
    let w = p.w(z)?;
    Ok(w / p.v + (1.0 - z).sqrt() * p.v / w)
}

/// `f_- = w/v - sqrt(1-z) v/w`.
pub fn fn_fminus(p: &CurvePoint, z: f64) -> Result<Complex64> {
    check_z(z)?;
    if p.at_infinity || p.is_ramification(z) {
        return Err(Error::Pole(
            "f_- degenerates at the ramification points".into(),
        ));
    }
    let w = p.w(z)?;
    Ok(w / p.v - (1.0 - z).sqrt() * p.v / w)
}

/// `h_±(s) = (s ∓ v_+)(s ± v_-) / s`.
pub fn fn_hpm(plus: bool, s: Complex64, z: f64) -> Result<Complex64> {
    check_z(z)?;
    if s.norm() < 1e-14 {
        return Err(Error::Pole("h_± has a pole at s = 0".into()));
    }
    let (vp, vm) = v_pm(c(z))?;
    Ok(if plus {
        (s - vp) * (s + vm) / s
    } else {
        (s + vp) * (s - vm) / s
    })
}

/// The four beta-periods of the two eigenforms and the module `tau`,
/// computed once per `z` and shared by every downstream evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualBasisData {
    pub b1_eta1: Complex64,
    pub b1_eta2: Complex64,
    pub b2_eta1: Complex64,
    pub b2_eta2: Complex64,
    pub tau: Complex64,
}

/// Periods normalizing the dual basis `phi_1, phi_2` with
/// `int_{beta_i} phi_j = delta_ij`:
/// `phi_1 = eta1/(2 b1_eta1) + eta2/(2 b1_eta2)` and
/// `phi_2 = eta1/(2 b2_eta1) + eta2/(2 b2_eta2)`.
pub fn dual_basis(z: f64, tol: &Tolerance) -> Result<DualBasisData> {
    check_z(z)?;
    let b1_eta1 = beta_period(1, 1, z, tol)?;
    let b1_eta2 = beta_period(2, 1, z, tol)?;
    let tau = tau_from_periods(1, z, tol)?;
    if tau.im <= 0.0 {
        return Err(Error::Domain(
            "period quotient left the upper half-plane".into(),
        ));
    }
    Ok(DualBasisData {
        b1_eta1,
        b1_eta2,
        b2_eta1: -I * b1_eta1,
        b2_eta2: I * b1_eta2,
        tau,
    })
}

impl DualBasisData {
    /// `dv`-coefficients of `(2 phi_1, 2 phi_2)` at a finite point off the
    /// ramification locus.
    pub fn two_phi_coeffs(&self, p: &CurvePoint, z: f64) -> Result<(Complex64, Complex64)> {
        let w = p.w(z)?;
        if w.norm() < 1e-14 {
            return Err(Error::Pole(
                "eigenform coefficients blow up where w = 0".into(),
            ));
        }
        let eta1 = c(1.0) / w;
        let eta2 = p.v * p.v / (w * w * w);
        let phi1 = eta1 / self.b1_eta1 + eta2 / self.b1_eta2;
        let phi2 = eta1 / self.b2_eta1 + eta2 / self.b2_eta2;
        Ok((phi1, phi2))
    }
}

/// Integrals of `(eta1, eta2)` from `P_0` to the point along the canonical
/// path, with the lifted-segment phases.
fn eta_integrals_to(p: &CurvePoint, z: f64, tol: &Tolerance) -> Result<(Complex64, Complex64)> {
    let seg1 = |form: EigenForm, hi: f64| segment1_partial(form, hi, z, tol);
    let seg2 = |form: EigenForm, hi: f64| segment2_partial(form, hi, z, tol);
    let full1 = || -> Result<(Complex64, Complex64)> {
        Ok((seg1(EigenForm::Eta1, 1.0)?, seg1(EigenForm::Eta2, 1.0)?))
    };
    let ph2_1 = PathSegment::OneToRecipZ.phase(EigenForm::Eta1).value();
    let ph2_2 = PathSegment::OneToRecipZ.phase(EigenForm::Eta2).value();

    if p.at_infinity {
        // chain I_{0,1} + I_{1,1/z} + I_{1/z,oo}
        let (f1, f2) = full1()?;
        let seg2_1 = ph2_1 * seg2(EigenForm::Eta1, 1.0 / z)?;
        let seg2_2 = ph2_2 * seg2(EigenForm::Eta2, 1.0 / z)?;
        let seg3_1 = crate::periods::eta_segment(1, PathSegment::RecipZToInf, z, tol)?;
        let seg3_2 = crate::periods::eta_segment(2, PathSegment::RecipZToInf, z, tol)?;
        return Ok((f1 + seg2_1 + seg3_1, f2 + seg2_2 + seg3_2));
    }
    if p.v.im.abs() > 1e-13 {
        return Err(Error::Path(
            "only real path coordinates are supported".into(),
        ));
    }
    let v = p.v.re;
    if v.abs() < 1e-14 {
        return Ok((c(0.0), c(0.0))); // P_0 itself
    }
    if (v - 1.0).abs() < 1e-14 {
        return full1();
    }
    if v > 0.0 && v < 1.0 {
        if p.branch != 0 {
            return Err(Error::Path("points over (0,1) must sit on branch 0".into()));
        }
        return Ok((seg1(EigenForm::Eta1, v)?, seg1(EigenForm::Eta2, v)?));
    }
    let recip = 1.0 / z;
    if v > 1.0 && v <= recip + 1e-12 * recip {
        if (v - recip).abs() > 1e-12 * recip && p.branch != 3 {
            return Err(Error::Path(
                "points over (1, 1/z) must sit on branch 3".into(),
            ));
        }
        let hi = v.min(recip);
        let (f1, f2) = full1()?;
        let a = f1 + ph2_1 * seg2(EigenForm::Eta1, hi)?;
        let b = f2 + ph2_2 * seg2(EigenForm::Eta2, hi)?;
        return Ok((a, b));
    }
    Err(Error::Path(format!(
        "v = {v} is outside the supported path set"
    )))
}

/// The Abel-Jacobi map `P -> (int 2 phi_1, int 2 phi_2)` from `P_0`, for
/// points on the canonical real paths and for the four ramification points
/// (reached through the segment chain).
pub fn abel_jacobi(p: &CurvePoint, z: f64, tol: &Tolerance) -> Result<(TorusPoint, TorusPoint)> {
    let basis = dual_basis(z, tol)?;
    abel_jacobi_with(&basis, p, z, tol)
}

/// As [`abel_jacobi`], reusing precomputed beta-periods.
pub fn abel_jacobi_with(
    basis: &DualBasisData,
    p: &CurvePoint,
    z: f64,
    tol: &Tolerance,
) -> Result<(TorusPoint, TorusPoint)> {
    let (int1, int2) = eta_integrals_to(p, z, tol)?;
    let y1 = int1 / basis.b1_eta1 + int2 / basis.b1_eta2;
    let y2 = int1 / basis.b2_eta1 + int2 / basis.b2_eta2;
    Ok((
        TorusPoint::new(y1, basis.tau)?,
        TorusPoint::new(y2, basis.tau)?,
    ))
}

/// `(|phi_2|, |phi_1|)` dv-coefficient magnitudes at `P_{v_-}` on branch 0:
/// the first vanishes (a ramification point of the second projection), the
/// second stays bounded away from zero.
pub fn phi2_vanishing_check(z: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    let basis = dual_basis(z, tol)?;
    let (_, vm) = v_pm(c(z))?;
    let p = CurvePoint::finite(vm, 0);
    let (phi1, phi2) = basis.two_phi_coeffs(&p, z)?;
    Ok((0.5 * phi2.norm(), 0.5 * phi1.norm()))
}

/// Residual report of the point-level theta identities.
#[derive(Debug, Clone, Copy)]
pub struct ThetaExprReport {
    /// `s = z^{-1/2} theta11(y1)^2/theta00(y1)^2`.
    pub s_via_y1: f64,
    /// `s = -z^{-1/2} theta11(y2)^2/theta00(y2)^2`.
    pub s_via_y2: f64,
    /// `f_-^2 = 2 theta01(y1)^2 theta10(y1)^2 / (theta00(y1)^2 theta11(y1)^2)`.
    pub fminus_sq: f64,
    /// `f_+^2 = -2 theta01(y2)^2 theta10(y2)^2 / (theta00(y2)^2 theta11(y2)^2)`.
    pub fplus_sq: f64,
    /// `1 - v` via the quotient sum at `(y1, y2)`.
    pub one_minus_v_direct: f64,
    /// `1 - v` via `y_1' = -y_2` (the route through the rotated point).
    pub one_minus_v_rotated: f64,
    /// signed `w/v` formula.
    pub w_over_v: f64,
    /// `theta11^4/theta00^4 = v(v-1)/(v-1/z)` at `y1`.
    pub quartic_y1: f64,
    /// same at `y2`.
    pub quartic_y2: f64,
    /// both branched values of `v(v-1)/(v-1/z)` satisfy
    /// `l^2 + (2 - 4/z) l + 1 = 0`.
    pub branch_equation: f64,
}

impl ThetaExprReport {
    pub fn max(&self) -> f64 {
        [
            self.s_via_y1,
            self.s_via_y2,
            self.fminus_sq,
            self.fplus_sq,
            self.one_minus_v_direct,
            self.one_minus_v_rotated,
            self.w_over_v,
            self.quartic_y1,
            self.quartic_y2,
            self.branch_equation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluate every point-level theta identity at an on-path point.
pub fn theta_exprs_check(p: &CurvePoint, z: f64, tol: &Tolerance) -> Result<ThetaExprReport> {
    check_z(z)?;
    let basis = dual_basis(z, tol)?;
    let (ty1, ty2) = abel_jacobi_with(&basis, p, z, tol)?;
    let (y1, y2, tau) = (ty1.y, ty2.y, basis.tau);

    let th = |ch, y: Complex64| theta(ch, y, tau, tol);
    let t00 = |y| th(TH00, y);
    let t01 = |y| th(TH01, y);
    let t10 = |y| th(TH10, y);
    let t11 = |y| th(TH11, y);

    let sqrt_z = z.sqrt();
    let s = fn_s(p, z)?;
    let s_y1 = t11(y1)?.powu(2) / t00(y1)?.powu(2) / sqrt_z;
    let s_y2 = -t11(y2)?.powu(2) / t00(y2)?.powu(2) / sqrt_z;

    let fp = fn_fplus(p, z)?;
    let fm = fn_fminus(p, z)?;
    let quot_sq = |y: Complex64| -> Result<Complex64> {
        Ok(t01(y)?.powu(2) * t10(y)?.powu(2) / (t00(y)?.powu(2) * t11(y)?.powu(2)))
    };
    let fm_sq_theta = quot_sq(y1)? * 2.0;
    let fp_sq_theta = -quot_sq(y2)? * 2.0;

    let q = |y: Complex64| -> Result<Complex64> { Ok(t01(y)? * t10(y)? / t00(y)?.powu(2)) };
    let t00c = theta(TH00, c(0.0), tau, tol)?;
    let t01c = theta(TH01, c(0.0), tau, tol)?;
    let t10c = theta(TH10, c(0.0), tau, tol)?;
    let cconst = t00c.powu(4) / (t01c.powu(2) * t10c.powu(2) * 4.0);
    let one_minus_v = c(1.0) - p.v;
    let form1 = cconst * (q(y1)? + q(y2)?).powu(2);
    // route the second slot through y1' = -y2 (the sigma-rotated point)
    let form2 = cconst * (q(y1)? + q(-y2)?).powu(2);

    let wv = p.w(z)? / p.v;
    let quot = |y: Complex64| -> Result<Complex64> { Ok(t01(y)? * t10(y)? / (t00(y)? * t11(y)?)) };
    let wv_theta = -(quot(y1)? + I * quot(y2)?) / 2.0f64.sqrt();

    let quartic_target = p.v * (p.v - c(1.0)) / (p.v - c(1.0 / z));
    let quartic = |y: Complex64| -> Result<Complex64> { Ok(t11(y)?.powu(4) / t00(y)?.powu(4)) };

    let lam1 = t01c.powu(4) / t10c.powu(4);
    let lam2 = t10c.powu(4) / t01c.powu(4);
    let branch_poly = |l: Complex64| l * l + (c(2.0) - c(4.0 / z)) * l + c(1.0);
    let branch_equation = branch_poly(lam1).norm().max(branch_poly(lam2).norm());

    let rel = |a: Complex64, b: Complex64| (a - b).norm() / (1.0 + a.norm().max(b.norm()));
    Ok(ThetaExprReport {
        s_via_y1: rel(s, s_y1),
        s_via_y2: rel(s, s_y2),
        fminus_sq: rel(fm * fm, fm_sq_theta),
        fplus_sq: rel(fp * fp, fp_sq_theta),
        one_minus_v_direct: rel(one_minus_v, form1),
        one_minus_v_rotated: rel(one_minus_v, form2),
        w_over_v: rel(wv, wv_theta),
        quartic_y1: rel(quartic_target, quartic(y1)?),
        quartic_y2: rel(quartic_target, quartic(y2)?),
        branch_equation,
    })
}

/// Componentwise residual of the commutative square `pr_1 ∘ sigma = psi ∘ pr_2`
/// with `psi(f_-, s) = (i f_-, -s)`.
pub fn diagram_check(p: &CurvePoint, z: f64) -> Result<f64> {
    check_z(z)?;
    let sp = sigma_pt(p, z);
    let lhs = (fn_fplus(&sp, z)?, fn_s(&sp, z)?);
    let rhs = (I * fn_fminus(p, z)?, -fn_s(p, z)?);
    Ok((lhs.0 - rhs.0).norm().max((lhs.1 - rhs.1).norm()))
}

/// Residuals of the two cubic-model memberships:
/// `f_+'^2 = -z s (s - v_+)(s + v_-)` and `f_-'^2 = -z s (s + v_+)(s - v_-)`
/// with `f_±' = s f_±`.
pub fn cubic_residuals(p: &CurvePoint, z: f64) -> Result<(f64, f64)> {
    let s = fn_s(p, z)?;
    let (vp, vm) = v_pm(c(z))?;
    let fpp = s * fn_fplus(p, z)?;
    let fmp = s * fn_fminus(p, z)?;
    let e1 = (fpp * fpp + c(z) * s * (s - vp) * (s + vm)).norm();
    let e2 = (fmp * fmp + c(z) * s * (s + vp) * (s - vm)).norm();
    Ok((e1, e2))
}

/// `torus_eq` on both components at once.
pub fn aj_eq(
    a: &(TorusPoint, TorusPoint),
    b: &(TorusPoint, TorusPoint),
    tol: &Tolerance,
) -> Result<bool> {
    Ok(torus_eq(&a.0, &b.0, tol)? && torus_eq(&a.1, &b.1, tol)?)
}

/// Local-coordinate order data for the spot checks of the zero table:
/// `|f| / |t|^{order}` stays bounded near the point when `f` vanishes (or
/// blows up) to the stated order in the local coordinate `t`.
pub fn order_probe<F>(f: F, order: i32, t_local: f64) -> f64
where
    F: Fn() -> Complex64,
{
    f().norm() / t_local.powi(order)
}

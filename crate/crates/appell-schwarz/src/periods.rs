//! Period integrals of the eigenforms `eta_1 = dv/w`, `eta_2 = v^2 dv/w^3`,
//! `eta_3 = v dv/w^2` on the curve `w^4 = v^3 (1-v)(1-vz)`, together with
//! the half-integer homology bookkeeping for the lattice `Lambda`.
//!
//! For `z` in `(0, 1)` the four ramification points `0, 1, 1/z, oo` cut the
//! real axis into four segments. Each lifted segment carries a constant
//! phase per eigenform, fixed by the homology identities below; the moduli
//! of the integrands are positive real, so every integral is a phase times
//! a positive number evaluated by the tanh-sinh rule.
//!
//! Homology conventions over the ordered basis `(a1, a2, b1, b2)`:
//! `(1-s^2) I_{0,1} = b1`, `(1-s^2) I_{1,1/z} = (a1+a2-b1+b2)/2`,
//! `(1-s^2) I_{1/z,oo} = -b2`, `(1-s^2) I_{-oo,0} = (-a1-a2-b1+b2)/2`,
//! where `s` denotes the covering automorphism `(v, w) -> (v, i w)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergeo::DomainPoint;
use crate::numerics::{beta_fn, integrate_de, Tolerance, UnitPhase};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The four real segments joining consecutive ramification points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathSegment {
    /// `I_{0,1}`: from `P_0` to `P_1`.
    ZeroToOne,
    /// `I_{1,1/z}`: from `P_1` to `P_{1/z}`.
    OneToRecipZ,
    /// `I_{1/z,oo}`: from `P_{1/z}` to `P_oo`.
    RecipZToInf,
    /// `I_{-oo,0}`: from `P_oo` to `P_0` along the negative axis.
    MinusInfToZero,
}

impl PathSegment {
    pub const ALL: [PathSegment; 4] = [
        PathSegment::ZeroToOne,
        PathSegment::OneToRecipZ,
        PathSegment::RecipZToInf,
        PathSegment::MinusInfToZero,
    ];

    /// Constant phase of the lifted eigenform on this segment.
    ///
    /// The `I_{0,1}` lift is real positive (all three arguments vanish);
    /// `I_{-oo,0}` carries `arg(v) = pi`; the two outer segments are the
    /// `s^3`- and `s^2`-translates of the naive window lift, as required
    /// by the homology identities in the module header.
    pub fn phase(&self, form: EigenForm) -> UnitPhase {
        use EigenForm::*;
        use PathSegment::*;
        match (self, form) {
            (ZeroToOne, _) => UnitPhase::new(0, 1),
            (OneToRecipZ, Eta1) => UnitPhase::new(1, 8),
            (OneToRecipZ, Eta2) => UnitPhase::new(3, 8),
            (OneToRecipZ, Eta3) => UnitPhase::new(1, 4),
            (RecipZToInf, Eta1) => UnitPhase::new(1, 4),
            (RecipZToInf, Eta2) => UnitPhase::new(3, 4),
            (RecipZToInf, Eta3) => UnitPhase::new(1, 2),
            (MinusInfToZero, Eta1) => UnitPhase::new(-3, 8),
            (MinusInfToZero, Eta2) => UnitPhase::new(-1, 8),
            (MinusInfToZero, Eta3) => UnitPhase::new(-1, 4),
        }
    }
}

/// The three eigenforms of the covering automorphism, with pullback
/// eigenvalues `-i`, `i`, `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenForm {
    Eta1,
    Eta2,
    Eta3,
}

impl EigenForm {
    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(EigenForm::Eta1),
            2 => Ok(EigenForm::Eta2),
            3 => Ok(EigenForm::Eta3),
            _ => Err(Error::Domain("eigenform index must be 1, 2 or 3".into())),
        }
    }

    /// Pullback eigenvalue under the covering automorphism.
    pub fn sigma_eigenvalue(&self) -> Complex64 {
        match self {
            EigenForm::Eta1 => Complex64::new(0.0, -1.0),
            EigenForm::Eta2 => Complex64::new(0.0, 1.0),
            EigenForm::Eta3 => Complex64::new(-1.0, 0.0),
        }
    }

    /// Exponents `(e_v, e_{1-v}, e_{1-vz})` of the integrand modulus.
    fn exponents(&self) -> (f64, f64, f64) {
        match self {
            EigenForm::Eta1 => (-0.75, -0.25, -0.25),
            EigenForm::Eta2 => (-0.25, -0.75, -0.75),
            EigenForm::Eta3 => (-0.5, -0.5, -0.5),
        }
    }
}

fn check_z_real(z: f64) -> Result<()> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!(
            "z = {z} must lie in the open interval (0,1)"
        )));
    }
    Ok(())
}

/// Modulus integral of `form` over `(0, v_hi)` with `v_hi <= 1`, for real
/// `z` in `(0,1)`. Positive real; the full segment is `v_hi = 1`.
pub(crate) fn segment1_partial(
    form: EigenForm,
    v_hi: f64,
    z: f64,
    tol: &Tolerance,
) -> Result<Complex64> {
    check_z_real(z)?;
    if !(v_hi > 0.0 && v_hi <= 1.0) {
        return Err(Error::Domain(
            "partial upper limit must lie in (0, 1]".into(),
        ));
    }
    let (ev, e1v, evz) = form.exponents();
    let hi_exp = if (v_hi - 1.0).abs() < 1e-15 { e1v } else { 0.0 };
    integrate_de(
        |n| {
            let one_minus_v = if hi_exp == 0.0 { 1.0 - n.x } else { n.from_hi };
            c(n.from_lo.powf(ev) * one_minus_v.powf(e1v) * (1.0 - n.x * z).powf(evz))
        },
        0.0,
        v_hi,
        (ev, hi_exp),
        tol,
    )
}

/// Modulus integral over `(1, v_hi)` with `v_hi <= 1/z`.
pub(crate) fn segment2_partial(
    form: EigenForm,
    v_hi: f64,
    z: f64,
    tol: &Tolerance,
) -> Result<Complex64> {
    check_z_real(z)?;
    let recip = 1.0 / z;
    if !(v_hi > 1.0 && v_hi <= recip) {
        return Err(Error::Domain(
            "partial upper limit must lie in (1, 1/z]".into(),
        ));
    }
    let (ev, e1v, evz) = form.exponents();
    let hi_exp = if (v_hi - recip).abs() < 1e-12 * recip {
        evz
    } else {
        0.0
    };
    integrate_de(
        |n| {
            // v - 1 = from_lo, 1 - vz = z*(1/z - v)
            let one_minus_vz = if hi_exp == 0.0 {
                1.0 - n.x * z
            } else {
                z * n.from_hi
            };
            c(n.x.powf(ev) * n.from_lo.powf(e1v) * one_minus_vz.powf(evz))
        },
        1.0,
        v_hi,
        (e1v, hi_exp),
        tol,
    )
}

/// Modulus integral over `(1/z, oo)`, compactified by `v = 1/(z u)`.
fn segment3_full(form: EigenForm, z: f64, tol: &Tolerance) -> Result<Complex64> {
    check_z_real(z)?;
    // the substitution carries each eigenform integrand into the same
    // shape as on (0,1): u^{e_v} (1-u)^{e_{1-vz}} (1-uz)^{e_{1-v}}
    let (ev, e1v, evz) = form.exponents();
    integrate_de(
        |n| c(n.from_lo.powf(ev) * n.from_hi.powf(evz) * (1.0 - n.x * z).powf(e1v)),
        0.0,
        1.0,
        (ev, evz),
        tol,
    )
}

/// Modulus integral over `(-oo, 0)`, compactified by `v = -u/(1-u)`.
fn segment4_full(form: EigenForm, z: f64, tol: &Tolerance) -> Result<Complex64> {
    check_z_real(z)?;
    let (ev, e1v, evz) = form.exponents();
    // combined exponent of (1-u) after the substitution
    let e1u = -(ev + e1v + evz) - 2.0;
    integrate_de(
        |n| c(n.from_lo.powf(ev) * n.from_hi.powf(e1u) * (1.0 - n.x * (1.0 - z)).powf(evz)),
        0.0,
        1.0,
        (ev, e1u),
        tol,
    )
}

/// Integral of the chosen eigenform over a lifted segment, with the branch
/// convention of the module header. Rejects segments that cross a branch
/// point and `z` outside `(0,1)`.
pub fn eta_segment(j: usize, seg: PathSegment, z: f64, tol: &Tolerance) -> Result<Complex64> {
    let form = EigenForm::from_index(j)?;
    if seg != PathSegment::ZeroToOne && !(z > 0.0 && z < 1.0) {
        return Err(Error::Branch(format!(
            "segment {seg:?} degenerates for z = {z} outside (0,1)"
        )));
    }
    let modulus = match seg {
        PathSegment::ZeroToOne => {
            // z = 0 is allowed here as the degenerate limit (1 - vz = 1)
            if z == 0.0 {
                let (ev, e1v, _) = form.exponents();
                integrate_de(
                    |n| c(n.from_lo.powf(ev) * n.from_hi.powf(e1v)),
                    0.0,
                    1.0,
                    (ev, e1v),
                    tol,
                )?
            } else {
                check_z_real(z)?;
                segment1_partial(form, 1.0, z, tol)?
            }
        }
        PathSegment::OneToRecipZ => segment2_partial(form, 1.0 / z, z, tol)?,
        PathSegment::RecipZToInf => segment3_full(form, z, tol)?,
        PathSegment::MinusInfToZero => segment4_full(form, z, tol)?,
    };
    Ok(seg.phase(form).value() * modulus)
}

/// `int_{beta_i} eta_j`, assembled from `beta_1 = (1-s^2) I_{0,1}` and
/// `beta_2 = s(beta_1)`: the `(1-s^2)` factor doubles the integral and the
/// `s`-translate multiplies by the pullback eigenvalue.
pub fn beta_period(j: usize, i: usize, z: f64, tol: &Tolerance) -> Result<Complex64> {
    let form = EigenForm::from_index(j)?;
    if j == 3 {
        return Err(Error::Domain(
            "eta3 is killed by (1 - s^2); no beta period".into(),
        ));
    }
    let base = eta_segment(j, PathSegment::ZeroToOne, z, tol)? * 2.0;
    match i {
        1 => Ok(base),
        2 => Ok(form.sigma_eigenvalue() * base),
        _ => Err(Error::Domain("cycle index must be 1 or 2".into())),
    }
}

/// `int_{alpha_i} eta_j` with `alpha_1 = (1-s^2)(1-s)(I_{0,1} + I_{1,1/z})
/// - beta_1` and `alpha_2 = s(alpha_1)`.
pub fn alpha_period(j: usize, i: usize, z: f64, tol: &Tolerance) -> Result<Complex64> {
    let form = EigenForm::from_index(j)?;
    if j == 3 {
        return Err(Error::Domain(
            "eta3 is killed by (1 - s^2); no alpha period".into(),
        ));
    }
    let lam = form.sigma_eigenvalue();
    let g1 = eta_segment(j, PathSegment::ZeroToOne, z, tol)?;
    let g2 = eta_segment(j, PathSegment::OneToRecipZ, z, tol)?;
    let base = (c(1.0) - lam) * (g1 + g2) * 2.0 - g1 * 2.0;
    match i {
        1 => Ok(base),
        2 => Ok(lam * base),
        _ => Err(Error::Domain("cycle index must be 1 or 2".into())),
    }
}

/// The period quotient `tau = int_{alpha_i} eta_i / int_{beta_i} eta_i`,
/// identical for `i = 1, 2`.
pub fn tau_from_periods(i: usize, z: f64, tol: &Tolerance) -> Result<Complex64> {
    Ok(alpha_period(i, i, z, tol)? / beta_period(i, i, z, tol)?)
}

/// The four solution values of the system at `x`.
///
/// On the real chamber `f1` and `f2/i` are positive real while `f3`, `f4`
/// are `e(3/8)` times positive reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodVector {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
    pub f4: Complex64,
}

/// Evaluate the four periods at a point of the regular locus.
///
/// Real-chamber points use the validated real-segment forms; other points
/// fall back to principal branches along straight-line paths and carry no
/// homology guarantee.
pub fn periods(x: &DomainPoint, tol: &Tolerance) -> Result<PeriodVector> {
    let b14 = beta_fn(c(0.25), c(0.25))?;
    let e38 = UnitPhase::new(3, 8).value();
    let one = c(1.0);
    let pref = ((one - x.x1) * (one - x.x2)).powc(c(-0.25));
    if x.real_chamber {
        let z = x.z.re;
        let i4 = segment4_full(EigenForm::Eta1, z, tol)?;
        let i3 = segment3_full(EigenForm::Eta1, z, tol)?;
        let s1 = segment1_partial(EigenForm::Eta1, 1.0 - x.x1.re, z, tol)?;
        let s2 = segment1_partial(EigenForm::Eta1, 1.0 - x.x2.re, z, tol)?;
        Ok(PeriodVector {
            f1: b14 * pref * i4,
            f2: I * (b14 / 2.0f64.sqrt()) * pref * i3,
            f3: e38 * b14 * pref * s1,
            f4: e38 * b14 * pref * s2,
        })
    } else {
        let z = x.z;
        // principal-branch straight-line integrals; experimental
        let i4 = integrate_de(
            |n| {
                let u = n.x;
                c(n.from_lo.powf(-0.75) * n.from_hi.powf(-0.75))
                    * (one - (one - z) * u).powc(c(-0.25))
            },
            0.0,
            1.0,
            (-0.75, -0.75),
            tol,
        )?;
        let i3 = integrate_de(
            |n| {
                let u = n.x;
                c(n.from_lo.powf(-0.75) * n.from_hi.powf(-0.25)) * (one - z * u).powc(c(-0.25))
            },
            0.0,
            1.0,
            (-0.75, -0.25),
            tol,
        )?;
        let partial = |y: Complex64| -> Result<Complex64> {
            // v = y t along the straight path, t in (0,1)
            integrate_de(
                |n| {
                    let t = n.x;
                    let v = y * t;
                    c(n.from_lo.powf(-0.75))
                        * y.powc(c(-0.75))
                        * (one - v).powc(c(-0.25))
                        * (one - v * z).powc(c(-0.25))
                },
                0.0,
                1.0,
                (-0.75, 0.0),
                tol,
            )
            .map(|w| w * y)
        };
        let s1 = partial(one - x.x1)?;
        let s2 = partial(one - x.x2)?;
        Ok(PeriodVector {
            f1: b14 * pref * i4,
            f2: I * (b14 / 2.0f64.sqrt()) * pref * i3,
            f3: e38 * b14 * pref * s1,
            f4: e38 * b14 * pref * s2,
        })
    }
}

// ---------------------------------------------------------------------------
// Lattice bookkeeping
// ---------------------------------------------------------------------------

/// A half-integer vector over the ordered basis `(a1, a2, b1, b2)`,
/// stored as doubled integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LambdaVector {
    /// Twice the coordinates `(p1, p2, q1, q2)`.
    pub twice: [i64; 4],
}

/// Nested classification of a half-integer vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeClass {
    /// Inside `(1 - s^2) H_1`: integer coordinates with even sum.
    InSublattice1MinusS2,
    /// Inside `Lambda`: integer coordinates.
    InLambda,
    /// Inside `H_1^{-s^2}`: coordinates congruent mod 2 after doubling.
    InHMinus,
    Outside,
}

impl LambdaVector {
    /// From integer coordinates.
    pub fn from_integers(v: [i64; 4]) -> Self {
        LambdaVector {
            twice: [2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]],
        }
    }

    /// From doubled coordinates (so `[1,1,1,1]` is `(1/2,1/2,1/2,1/2)`).
    pub fn from_halves(twice: [i64; 4]) -> Self {
        LambdaVector { twice }
    }

    pub fn add(&self, other: &LambdaVector) -> LambdaVector {
        let mut t = self.twice;
        for (a, b) in t.iter_mut().zip(other.twice.iter()) {
            *a += b;
        }
        LambdaVector { twice: t }
    }

    pub fn is_zero(&self) -> bool {
        self.twice.iter().all(|&t| t == 0)
    }
}

/// Finest lattice class containing the vector.
pub fn lambda_classify(v: &LambdaVector) -> LatticeClass {
    let all_even = v.twice.iter().all(|t| t.rem_euclid(2) == 0);
    if all_even {
        let sum: i64 = v.twice.iter().sum();
        if sum.rem_euclid(4) == 0 {
            return LatticeClass::InSublattice1MinusS2;
        }
        return LatticeClass::InLambda;
    }
    let all_odd = v.twice.iter().all(|t| t.rem_euclid(2) == 1);
    if all_odd {
        return LatticeClass::InHMinus;
    }
    LatticeClass::Outside
}

/// The covering automorphism on coordinates:
/// `(p1, p2, q1, q2) -> (-p2, p1, -q2, q1)`.
pub fn sigma_on_lambda(v: &LambdaVector) -> LambdaVector {
    let [p1, p2, q1, q2] = v.twice;
    LambdaVector {
        twice: [-p2, p1, -q2, q1],
    }
}

/// Intersection pairing with Gram matrix `2 J_4` (`a_i . b_j = -2 d_ij`).
/// Defined for integer-coordinate vectors; half-integers are rejected.
pub fn intersection(u: &LambdaVector, v: &LambdaVector) -> Result<i64> {
    for w in [u, v] {
        if w.twice.iter().any(|t| t.rem_euclid(2) != 0) {
            return Err(Error::Domain(
                "intersection requires integer coordinates".into(),
            ));
        }
    }
    let a = |k: usize| u.twice[k] / 2;
    let b = |k: usize| v.twice[k] / 2;
    // u . v = -2 (p1 q1' + p2 q2') + 2 (q1 p1' + q2 p2')
    Ok(-2 * (a(0) * b(2) + a(1) * b(3)) + 2 * (a(2) * b(0) + a(3) * b(1)))
}

/// Class of `(1 - s^2) I` for each lifted segment.
pub fn segment_homology(seg: PathSegment) -> LambdaVector {
    match seg {
        PathSegment::ZeroToOne => LambdaVector::from_halves([0, 0, 2, 0]),
        PathSegment::OneToRecipZ => LambdaVector::from_halves([1, 1, -1, 1]),
        PathSegment::RecipZToInf => LambdaVector::from_halves([0, 0, 0, -2]),
        PathSegment::MinusInfToZero => LambdaVector::from_halves([-1, -1, -1, 1]),
    }
}

//! Hypergeometric series: the Gauss function `F(a,b,c;x)`, Appell's first
//! and second double series, the reducibility test, and the Euler double
//! integral that the series layer is validated against.
//!
//! Appell's second series is
//! `F2(a,b1,b2,c1,c2; x1,x2) = sum (a,n1+n2)(b1,n1)(b2,n2) /
//! ((c1,n1)(c2,n2) n1! n2!) x1^n1 x2^n2`, absolutely convergent for
//! `|x1|+|x2| < 1`.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::numerics::{beta_fn, integrate_de, Tolerance};

const MAX_TERMS: usize = 1_000_000;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Parameter tuple of Appell's second system.
///
/// When constructed from exact rationals the reducibility test is exact;
/// otherwise integrality is tested to 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F2Params {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    rational: Option<[Ratio<i64>; 5]>,
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12 && z.re.round() <= 0.0
}

impl F2Params {
    pub fn new(
        a: Complex64,
        b1: Complex64,
        b2: Complex64,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<Self> {
        if is_nonpositive_integer(c1) || is_nonpositive_integer(c2) {
            return Err(Error::Pole("c1, c2 must avoid 0, -1, -2, ...".into()));
        }
        Ok(F2Params {
            a,
            b1,
            b2,
            c1,
            c2,
            rational: None,
        })
    }

    /// Exact rational parameters, each as `(numerator, denominator)`.
    pub fn from_rational(r: [(i64, i64); 5]) -> Result<Self> {
        let ratios = [
            Ratio::new(r[0].0, r[0].1),
            Ratio::new(r[1].0, r[1].1),
            Ratio::new(r[2].0, r[2].1),
            Ratio::new(r[3].0, r[3].1),
            Ratio::new(r[4].0, r[4].1),
        ];
        let as_c = |q: Ratio<i64>| Complex64::new(*q.numer() as f64 / *q.denom() as f64, 0.0);
        let mut p = F2Params::new(
            as_c(ratios[0]),
            as_c(ratios[1]),
            as_c(ratios[2]),
            as_c(ratios[3]),
            as_c(ratios[4]),
        )?;
        p.rational = Some(ratios);
        Ok(p)
    }

    /// The distinguished specialization `(1/2, 1/4, 1/4, 1/2, 1/2)`.
    pub fn fixed() -> Self {
        F2Params::from_rational([(1, 2), (1, 4), (1, 4), (1, 2), (1, 2)]).unwrap()
    }
}

/// A point of the regular locus `X`, with the derived variable
/// `z = (1 - x1 - x2) / ((1-x1)(1-x2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    pub x1: Complex64,
    pub x2: Complex64,
    pub z: Complex64,
    /// True iff `0 < x1 < 1`, `0 < x2 < 1`, `x1 + x2 < 1` with real parts only.
    pub real_chamber: bool,
}

impl DomainPoint {
    pub fn new(x1: Complex64, x2: Complex64) -> Result<Self> {
        let one = c(1.0);
        let factors = [x1, one - x1, x2, one - x2, one - x1 - x2];
        if factors.iter().any(|f| f.norm() < 1e-12) {
            return Err(Error::Domain(
                "point lies on the singular locus x1 x2 (1-x1)(1-x2)(1-x1-x2) = 0".into(),
            ));
        }
        let z = (one - x1 - x2) / ((one - x1) * (one - x2));
        let real = x1.im.abs() < 1e-14 && x2.im.abs() < 1e-14;
        let real_chamber =
            real && x1.re > 0.0 && x1.re < 1.0 && x2.re > 0.0 && x2.re < 1.0 && x1.re + x2.re < 1.0;
        Ok(DomainPoint {
            x1,
            x2,
            z,
            real_chamber,
        })
    }

    pub fn real(x1: f64, x2: f64) -> Result<Self> {
        DomainPoint::new(c(x1), c(x2))
    }
}

/// Stopping rule shared by all series: three consecutive terms below
/// `trunc_eps * |partial sum|`.
struct Stopper {
    small_run: u32,
    eps: f64,
}

impl Stopper {
    fn new(eps: f64) -> Self {
        Stopper { small_run: 0, eps }
    }
    fn done(&mut self, term_mag: f64, sum_mag: f64) -> bool {
        if term_mag <= self.eps * (1.0 + sum_mag) {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 3
    }
}

/// Gauss hypergeometric series `F(a,b,c;x)` for `|x| < 1`.
pub fn gauss_f(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    x: Complex64,
    tol: &Tolerance,
) -> Result<Complex64> {
    if is_nonpositive_integer(cc) {
        return Err(Error::Pole("c must avoid 0, -1, -2, ...".into()));
    }
    if x.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "|x| = {} is outside the unit disc",
            x.norm()
        )));
    }
    let mut term = c(1.0);
    let mut sum = term;
    let mut stop = Stopper::new(tol.theta_trunc_eps);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) * x / ((cc + nf) * (nf + 1.0));
        sum += term;
        if stop.done(term.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent(
        "Gauss series exceeded the term cap".into(),
    ))
}

/// Appell's second series, summed along anti-diagonals `n1 + n2 = N`.
pub fn appell_f2(p: &F2Params, x1: Complex64, x2: Complex64, tol: &Tolerance) -> Result<Complex64> {
    if x1.norm() + x2.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "|x1|+|x2| = {} is outside the convergence domain",
            x1.norm() + x2.norm()
        )));
    }
    // a collapsed index reduces to a Gauss series
    if x2.norm() == 0.0 {
        return gauss_f(p.a, p.b1, p.c1, x1, tol);
    }
    if x1.norm() == 0.0 {
        return gauss_f(p.a, p.b2, p.c2, x2, tol);
    }
    let mut edge = c(1.0); // term at (n1, n2) = (0, N)
    let mut sum = edge;
    let mut stop = Stopper::new(tol.theta_trunc_eps);
    let mut terms = 1usize;
    for nn in 1..MAX_TERMS {
        let nf = (nn - 1) as f64;
        edge *= (p.a + nf) * (p.b2 + nf) * x2 / ((p.c2 + nf) * (nf + 1.0));
        let mut term = edge;
        let mut diag = term;
        for n1 in 0..nn {
            // step (n1, n2) -> (n1+1, n2-1)
            let n1f = n1 as f64;
            let n2f = (nn - n1) as f64;
            term *= (p.b1 + n1f) * (p.c2 + (n2f - 1.0)) * n2f * x1
                / ((p.c1 + n1f) * (p.b2 + (n2f - 1.0)) * (n1f + 1.0) * x2);
            diag += term;
        }
        sum += diag;
        terms += nn + 1;
        if terms > MAX_TERMS {
            return Err(Error::NonConvergent(
                "F2 series exceeded the term cap".into(),
            ));
        }
        if stop.done(diag.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent(
        "F2 series exceeded the diagonal cap".into(),
    ))
}

/// Appell's first series, convergent on the unit polydisc.
pub fn appell_f1(
    a: Complex64,
    b1: Complex64,
    b2: Complex64,
    cc: Complex64,
    x1: Complex64,
    x2: Complex64,
    tol: &Tolerance,
) -> Result<Complex64> {
    if is_nonpositive_integer(cc) {
        return Err(Error::Pole("c must avoid 0, -1, -2, ...".into()));
    }
    if x1.norm() >= 1.0 || x2.norm() >= 1.0 {
        return Err(Error::Domain("F1 needs |x1| < 1 and |x2| < 1".into()));
    }
    if x2.norm() == 0.0 {
        return gauss_f(a, b1, cc, x1, tol);
    }
    if x1.norm() == 0.0 {
        return gauss_f(a, b2, cc, x2, tol);
    }
    let mut edge = c(1.0);
    let mut sum = edge;
    let mut stop = Stopper::new(tol.theta_trunc_eps);
    let mut terms = 1usize;
    for nn in 1..MAX_TERMS {
        let nf = (nn - 1) as f64;
        edge *= (a + nf) * (b2 + nf) * x2 / ((cc + nf) * (nf + 1.0));
        let mut term = edge;
        let mut diag = term;
        for n1 in 0..nn {
            let n1f = n1 as f64;
            let n2f = (nn - n1) as f64;
            term *= (b1 + n1f) * n2f * x1 / ((b2 + (n2f - 1.0)) * (n1f + 1.0) * x2);
            diag += term;
        }
        sum += diag;
        terms += nn + 1;
        if terms > MAX_TERMS {
            return Err(Error::NonConvergent(
                "F1 series exceeded the term cap".into(),
            ));
        }
        if stop.done(diag.norm(), sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent(
        "F1 series exceeded the diagonal cap".into(),
    ))
}

/// Magnitudes of the two system operators applied to the F2 series by
/// central finite differences; both vanish on true solutions.
pub fn f2_pde_residual(p: &F2Params, x: &DomainPoint, h: f64) -> Result<(f64, f64)> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(Error::Domain("step h must lie in [1e-5, 1e-3]".into()));
    }
    if x.x1.norm() + x.x2.norm() >= 1.0 - 4.0 * h {
        return Err(Error::Domain(
            "point too close to the convergence boundary".into(),
        ));
    }
    let tol = Tolerance {
        theta_trunc_eps: 1e-16,
        ..Tolerance::default()
    };
    let f = |u: Complex64, v: Complex64| appell_f2(p, u, v, &tol);
    let (x1, x2) = (x.x1, x.x2);
    let hh = c(h);

    let f00 = f(x1, x2)?;
    let fp0 = f(x1 + hh, x2)?;
    let fm0 = f(x1 - hh, x2)?;
    let f0p = f(x1, x2 + hh)?;
    let f0m = f(x1, x2 - hh)?;
    let fpp = f(x1 + hh, x2 + hh)?;
    let fpm = f(x1 + hh, x2 - hh)?;
    let fmp = f(x1 - hh, x2 + hh)?;
    let fmm = f(x1 - hh, x2 - hh)?;

    let h2 = h * h;
    let d1 = (fp0 - fm0) / (2.0 * h);
    let d2 = (f0p - f0m) / (2.0 * h);
    let d11 = (fp0 - f00 * 2.0 + fm0) / h2;
    let d22 = (f0p - f00 * 2.0 + f0m) / h2;
    let d12 = (fpp - fpm - fmp + fmm) / (4.0 * h2);

    let one = c(1.0);
    let op1 = x1 * (one - x1) * d11 - x1 * x2 * d12 + (p.c1 - (p.a + p.b1 + one) * x1) * d1
        - p.b1 * x2 * d2
        - p.a * p.b1 * f00;
    let op2 = x2 * (one - x2) * d22 - x1 * x2 * d12 + (p.c2 - (p.a + p.b2 + one) * x2) * d2
        - p.b2 * x1 * d1
        - p.a * p.b2 * f00;
    Ok((op1.norm(), op2.norm()))
}

/// The system is reducible iff one of
/// `a, b1, b2, b1-c1, b2-c2, a-c1, a-c2, a-c1-c2` is an integer.
pub fn is_reducible(p: &F2Params) -> bool {
    if let Some([a, b1, b2, c1, c2]) = p.rational {
        let combos = [a, b1, b2, b1 - c1, b2 - c2, a - c1, a - c2, a - c1 - c2];
        combos.iter().any(|q| q.is_integer())
    } else {
        let combos = [
            p.a,
            p.b1,
            p.b2,
            p.b1 - p.c1,
            p.b2 - p.c2,
            p.a - p.c1,
            p.a - p.c2,
            p.a - p.c1 - p.c2,
        ];
        combos
            .iter()
            .any(|q| q.im.abs() < 1e-12 && (q.re - q.re.round()).abs() < 1e-12)
    }
}

/// The Euler double integral over the unit square for the fixed parameters,
/// by a tensor-product tanh-sinh rule.
///
/// The integrand is
/// `t1^{-3/4} (1-t1)^{-3/4} t2^{-3/4} (1-t2)^{-3/4} (1-t1 x1-t2 x2)^{-1/2}`,
/// positive on the open square for a real-chamber `(x1, x2)`.
pub fn euler_d1(x1: f64, x2: f64, tol: &Tolerance) -> Result<Complex64> {
    let x = DomainPoint::real(x1, x2)?;
    if !x.real_chamber {
        return Err(Error::Domain("euler_d1 requires the real chamber".into()));
    }
    // tensor rule: axis nodes at a fixed level, refined until the full
    // 2-D sums of two successive levels agree
    let mut prev: Option<Complex64> = None;
    for level in 4..=tol.quad_levels.max(8) {
        let nodes = axis_nodes(level);
        let mut total = 0.0f64;
        // precompute the separable factor t^{-3/4}(1-t)^{-3/4} * weight
        let fw: Vec<(f64, f64)> = nodes
            .iter()
            .map(|(t, dlo, dhi, w)| (*t, dlo.powf(-0.75) * dhi.powf(-0.75) * w))
            .collect();
        for (t1, fw1) in &fw {
            let mut row = 0.0f64;
            for (t2, fw2) in &fw {
                let core = 1.0 - t1 * x1 - t2 * x2;
                row += fw2 * core.powf(-0.5);
            }
            total += fw1 * row;
        }
        let value = Complex64::new(total, 0.0);
        if let Some(p) = prev {
            let err = (value - p).norm();
            if err <= 1e-9_f64.max(tol.rel_eps * value.norm() * 10.0) {
                return Ok(value);
            }
        }
        prev = Some(value);
    }
    Err(Error::NonConvergent(
        "euler_d1 tensor rule did not settle".into(),
    ))
}

/// Tanh-sinh abscissas on (0,1) at the given level: `(t, t-0, 1-t, weight)`.
fn axis_nodes(level: u32) -> Vec<(f64, f64, f64, f64)> {
    use std::f64::consts::FRAC_PI_2;
    let h = 1.0 / f64::from(1u32 << level);
    let t_max = 4.8; // exponents -3/4: u > 90 suffices, asinh(2*90/pi) + margin
    let mut out = Vec::new();
    let n = (t_max / h) as i64;
    for k in -n..=n {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let eu = (-2.0 * u.abs()).exp();
        let delta = eu / (1.0 + eu); // distance to the nearer endpoint, half-width 1/2
        if delta == 0.0 {
            continue;
        }
        let sech = 1.0 / u.cosh();
        let w = h * 0.5 * FRAC_PI_2 * t.cosh() * sech * sech;
        if w == 0.0 {
            continue;
        }
        let (dlo, dhi) = if t >= 0.0 {
            (1.0 - delta, delta)
        } else {
            (delta, 1.0 - delta)
        };
        let x = if t >= 0.0 { 1.0 - delta } else { delta };
        out.push((x, dlo, dhi, w));
    }
    out
}

/// Euler-integral form of the Gauss series,
/// `B(b, c-b) F(a,b,c;x) = int_0^1 t^{b-1} (1-t)^{c-b-1} (1-tx)^{-a} dt`,
/// used as an independent quadrature oracle in the tests.
pub fn gauss_euler_integral(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    x: Complex64,
    tol: &Tolerance,
) -> Result<Complex64> {
    let eb = b.re - 1.0;
    let ec = (cc - b).re - 1.0;
    let val = integrate_de(
        |n| {
            let t = n.x;
            let tb = Complex64::new(n.from_lo, 0.0).powc(b - c(1.0));
            let omt = Complex64::new(n.from_hi, 0.0).powc(cc - b - c(1.0));
            let core = (c(1.0) - x * t).powc(-a);
            tb * omt * core
        },
        0.0,
        1.0,
        (eb, ec),
        tol,
    )?;
    Ok(val / beta_fn(b, cc - b)?)
}

//! Command implementations behind the `schwarz` binary: forward/inverse
//! evaluation, verification suites, monodromy queries, period evaluation,
//! and CSV table emission.
//!
//! Output is deterministic: JSON keys are emitted in sorted order and every
//! floating-point number is rendered with 17 significant digits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergeo::DomainPoint;
use crate::monodromy::{decompose, is_in_m, GaussInt, GaussianMatrix};
use crate::numerics::Tolerance;
use crate::periods::periods;
use crate::schwarz::{forward, image_residual, inverse, SchwarzImage};
use crate::verify::{run_suite, Suite};

/// Output format for the scalar commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

/// Grid specification `start:end:step` over one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl std::str::FromStr for GridSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid '{s}' must be start:end:step")));
        }
        let parse = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad grid number '{t}': {e}")))
        };
        let g = GridSpec {
            start: parse(parts[0])?,
            end: parse(parts[1])?,
            step: parse(parts[2])?,
        };
        if !(g.step > 0.0 && g.end >= g.start) {
            return Err(Error::Parse("grid needs end >= start and step > 0".into()));
        }
        Ok(g)
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let x = self.start + self.step * f64::from(k);
            if x > self.end + 1e-12 {
                break;
            }
            out.push(x);
            k += 1;
        }
        out
    }
}

/// Resolved run configuration: tolerances, output shape, grid, and the
/// escape hatch for points outside the real chamber.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub tol: Tolerance,
    pub format: OutputFormat,
    pub grid: Option<GridSpec>,
    pub unvalidated: bool,
}

impl RunConfig {
    /// Parse a `key=value` configuration file body; unknown keys error.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|e| Error::Parse(format!("bad number '{v}': {e}")))
            };
            match key {
                "abs_eps" => self.tol.abs_eps = parse_f64(value)?,
                "rel_eps" => self.tol.rel_eps = parse_f64(value)?,
                "theta_trunc_eps" => self.tol.theta_trunc_eps = parse_f64(value)?,
                "quad_levels" => {
                    self.tol.quad_levels = value
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad quad_levels '{value}': {e}")))?
                }
                "format" => self.format = value.parse()?,
                "grid" => self.grid = Some(value.parse()?),
                "unvalidated" => {
                    self.unvalidated = value
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad bool '{value}': {e}")))?
                }
                other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
            }
        }
        Tolerance::new(
            self.tol.abs_eps,
            self.tol.rel_eps,
            self.tol.quad_levels,
            self.tol.theta_trunc_eps,
        )?;
        Ok(())
    }
}

/// 17-significant-digit rendering used for every numeric field.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// Evaluate the forward map and render it.
pub fn cmd_forward(x1: f64, x2: f64, config: &RunConfig) -> Result<String> {
    let x = DomainPoint::real(x1, x2)?;
    if !x.real_chamber && !config.unvalidated {
        return Err(Error::Domain(
            "point is outside the real chamber; pass --unvalidated to evaluate anyway".into(),
        ));
    }
    let img = forward(&x, &config.tol)?;
    let residual = image_residual(&img, &config.tol)?;
    match config.format {
        OutputFormat::Json => Ok(format!(
            "{{\"image_residual\":{},\"tau\":{},\"y1\":{},\"y2\":{},\"z\":{}}}",
            fmt_f64(residual),
            json_complex(img.tau),
            json_complex(img.y1),
            json_complex(img.y2),
            json_complex(x.z),
        )),
        OutputFormat::Csv => {
            let mut s = String::from(
                "x1,x2,y1_re,y1_im,y2_re,y2_im,tau_re,tau_im,z_re,z_im,image_residual\n",
            );
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(x1),
                fmt_f64(x2),
                fmt_f64(img.y1.re),
                fmt_f64(img.y1.im),
                fmt_f64(img.y2.re),
                fmt_f64(img.y2.im),
                fmt_f64(img.tau.re),
                fmt_f64(img.tau.im),
                fmt_f64(x.z.re),
                fmt_f64(x.z.im),
                fmt_f64(residual),
            ));
            Ok(s)
        }
    }
}

/// Evaluate the inverse map and render it.
pub fn cmd_inverse(
    y1: Complex64,
    y2: Complex64,
    tau: Complex64,
    config: &RunConfig,
) -> Result<String> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let img = SchwarzImage::new(y1, y2, tau)?;
    let x = inverse(&img, &config.tol)?;
    match config.format {
        OutputFormat::Json => Ok(format!(
            "{{\"x1\":{},\"x2\":{}}}",
            json_complex(x.x1),
            json_complex(x.x2)
        )),
        OutputFormat::Csv => Ok(format!(
            "x1_re,x1_im,x2_re,x2_im\n{},{},{},{}\n",
            fmt_f64(x.x1.re),
            fmt_f64(x.x1.im),
            fmt_f64(x.x2.re),
            fmt_f64(x.x2.im),
        )),
    }
}

/// Evaluate the period vector and render it.
pub fn cmd_periods(x1: f64, x2: f64, config: &RunConfig) -> Result<String> {
    let x = DomainPoint::real(x1, x2)?;
    if !x.real_chamber && !config.unvalidated {
        return Err(Error::Domain(
            "point is outside the real chamber; pass --unvalidated to evaluate anyway".into(),
        ));
    }
    let p = periods(&x, &config.tol)?;
    match config.format {
        OutputFormat::Json => Ok(format!(
            "{{\"f1\":{},\"f2\":{},\"f3\":{},\"f4\":{},\"z\":{}}}",
            json_complex(p.f1),
            json_complex(p.f2),
            json_complex(p.f3),
            json_complex(p.f4),
            json_complex(x.z),
        )),
        OutputFormat::Csv => {
            let mut s = String::from("f1_re,f1_im,f2_re,f2_im,f3_re,f3_im,f4_re,f4_im,z_re,z_im\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(p.f1.re),
                fmt_f64(p.f1.im),
                fmt_f64(p.f2.re),
                fmt_f64(p.f2.im),
                fmt_f64(p.f3.re),
                fmt_f64(p.f3.im),
                fmt_f64(p.f4.re),
                fmt_f64(p.f4.im),
                fmt_f64(x.z.re),
                fmt_f64(x.z.im),
            ));
            Ok(s)
        }
    }
}

/// Run a verification suite; the report lists one line per check and the
/// exit status is nonzero when any check fails.
pub fn cmd_verify(suite: Suite, config: &RunConfig) -> Result<(String, bool)> {
    let checks = run_suite(suite, &config.tol)?;
    let all_pass = checks.iter().all(|c| c.pass);
    match config.format {
        OutputFormat::Json => {
            let items: Vec<String> = checks
                .iter()
                .map(|c| {
                    format!(
                        "{{\"detail\":{},\"id\":{},\"pass\":{},\"residual\":{},\"threshold\":{}}}",
                        json_string(&c.detail),
                        json_string(&c.id),
                        c.pass,
                        fmt_f64(c.residual),
                        fmt_f64(c.threshold),
                    )
                })
                .collect();
            Ok((
                format!("{{\"checks\":[{}],\"pass\":{}}}", items.join(","), all_pass),
                all_pass,
            ))
        }
        OutputFormat::Csv => {
            let mut s = String::from("id,residual,threshold,pass\n");
            for c in &checks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    c.id,
                    fmt_f64(c.residual),
                    fmt_f64(c.threshold),
                    c.pass
                ));
            }
            Ok((s, all_pass))
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Monodromy actions on a matrix given as JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyAction {
    Check,
    Decompose,
}

impl std::str::FromStr for MonodromyAction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "check" => Ok(MonodromyAction::Check),
            "decompose" => Ok(MonodromyAction::Decompose),
            other => Err(Error::Parse(format!("unknown monodromy action '{other}'"))),
        }
    }
}

/// Parse `{"phase": e, "entries": [[[re,im]; 4]; 4]}`.
pub fn parse_matrix_json(text: &str) -> Result<GaussianMatrix> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let phase = v
        .get("phase")
        .and_then(|p| p.as_u64())
        .ok_or_else(|| Error::Parse("missing integer field 'phase'".into()))?;
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| Error::Parse("missing array field 'entries'".into()))?;
    if entries.len() != 4 {
        return Err(Error::Parse("'entries' must have 4 rows".into()));
    }
    let mut m = [[GaussInt::ZERO; 4]; 4];
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("rows must be arrays".into()))?;
        if row.len() != 4 {
            return Err(Error::Parse("each row must have 4 entries".into()));
        }
        for (j, e) in row.iter().enumerate() {
            let pair = e
                .as_array()
                .ok_or_else(|| Error::Parse("entries must be [re,im]".into()))?;
            if pair.len() != 2 {
                return Err(Error::Parse("entries must be [re,im]".into()));
            }
            let re = pair[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("entry parts must be integers".into()))?;
            let im = pair[1]
                .as_i64()
                .ok_or_else(|| Error::Parse("entry parts must be integers".into()))?;
            m[i][j] = GaussInt::new(re, im);
        }
    }
    Ok(GaussianMatrix {
        phase: (phase % 4) as u8,
        entries: m,
    })
}

/// Render a matrix in the same JSON schema.
pub fn matrix_to_json(m: &GaussianMatrix) -> String {
    let rows: Vec<String> = m
        .entries
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|e| format!("[{},{}]", e.re, e.im)).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("{{\"entries\":[{}],\"phase\":{}}}", rows.join(","), m.phase)
}

/// `check` and `decompose` actions with a machine-readable report.
pub fn cmd_monodromy(action: MonodromyAction, matrix_json: &str) -> Result<String> {
    let m = parse_matrix_json(matrix_json)?;
    match action {
        MonodromyAction::Check => match is_in_m(&m) {
            Some(w) => {
                let block = |b: [[i64; 2]; 2]| {
                    format!("[[{},{}],[{},{}]]", b[0][0], b[0][1], b[1][0], b[1][1])
                };
                Ok(format!(
                    "{{\"member\":true,\"witness\":{{\"G\":{},\"L\":{},\"n1\":{},\"n2\":{}}}}}",
                    block(w.g_block),
                    block(w.l_block),
                    w.n1,
                    w.n2
                ))
            }
            None => Ok("{\"member\":false}".into()),
        },
        MonodromyAction::Decompose => {
            let word = decompose(&m)?;
            let eval = crate::monodromy::evaluate(&word)?;
            if eval.key() != m.key() {
                return Err(Error::NonConvergent("word evaluation mismatch".into()));
            }
            let tokens: Vec<String> = word.iter().map(|t| format!("\"{t}\"")).collect();
            Ok(format!("{{\"word\":[{}]}}", tokens.join(",")))
        }
    }
}

/// Sweep the forward map over a grid and emit one CSV row per point.
pub fn cmd_table(config: &RunConfig) -> Result<String> {
    let grid = config.grid.unwrap_or(GridSpec {
        start: 0.05,
        end: 0.85,
        step: 0.1,
    });
    let axis = grid.points();
    let mut s = String::from("x1,x2,z,y1_re,y1_im,y2_re,y2_im,tau_re,tau_im,image_residual\n");
    for &x1 in &axis {
        for &x2 in &axis {
            let Ok(x) = DomainPoint::real(x1, x2) else {
                continue;
            };
            if !x.real_chamber && !config.unvalidated {
                continue;
            }
            let img = forward(&x, &config.tol)?;
            let residual = image_residual(&img, &config.tol)?;
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(x1),
                fmt_f64(x2),
                fmt_f64(x.z.re),
                fmt_f64(img.y1.re),
                fmt_f64(img.y1.im),
                fmt_f64(img.y2.re),
                fmt_f64(img.y2.im),
                fmt_f64(img.tau.re),
                fmt_f64(img.tau.im),
                fmt_f64(residual),
            ));
        }
    }
    Ok(s)
}

//! Command handlers behind the `toric` binary. Each takes already-read input
//! and returns the text to print, so golden tests can call them directly.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan, FanFile};
use crate::kring::{parse_formal_sum, reduce, KRingElement};
use crate::lattice::json;
use crate::moment::{delzant_svg, DelzantReport};
use crate::quotient::QuotientReport;
use crate::semigroup::{affine_fiber_rank, affine_semigroup, dual_cone, RationalCone};
use crate::solenoid::{
    cover_map, parse_rational, sol_exp, PolarComplex, ProfiniteInt, SolenoidPoint,
};

#[derive(Clone, Debug, Serialize)]
pub struct ConeFiber {
    pub cone: Vec<usize>,
    pub dim: usize,
    /// Size of the Hilbert basis of `σ^∨ ∩ M`; the fiber over the chart is `Ẑ^r`.
    pub fiber_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceSummary {
    pub f_vector: Vec<usize>,
    pub cusps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub lattice_rank: usize,
    pub n_rays: usize,
    pub complete: bool,
    #[serde(flatten)]
    pub quotient: QuotientReport,
    pub cone_fibers: Vec<ConeFiber>,
    pub faces: Option<FaceSummary>,
}

impl AnalysisReport {
    pub fn build(fan: &Fan, name: String) -> Result<Self> {
        let mut cone_fibers = Vec::new();
        for cone in fan.cones() {
            cone_fibers.push(ConeFiber {
                cone: cone.labels(),
                dim: cone.len(),
                fiber_rank: affine_fiber_rank(fan, cone)?,
            });
        }
        cone_fibers.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.cone.cmp(&b.cone)));
        let faces = if fan.is_complete() {
            let d = DelzantReport::build(fan)?;
            Some(FaceSummary {
                f_vector: d.f_vector,
                cusps: d.cusps,
            })
        } else {
            None
        };
        Ok(AnalysisReport {
            name,
            lattice_rank: fan.lattice_rank(),
            n_rays: fan.n_rays(),
            complete: fan.is_complete(),
            quotient: QuotientReport::build(fan)?,
            cone_fibers,
            faces,
        })
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses a fan file; `fallback_name` is used when the file has no `name`.
pub fn load_fan(text: &str, fallback_name: &str) -> Result<(Fan, String)> {
    let file = FanFile::parse(text)?;
    let fan = file.build()?;
    let name = file
        .name
        .clone()
        .unwrap_or_else(|| fallback_name.to_string());
    Ok((fan, name))
}

pub fn cmd_analyze(text: &str, fallback_name: &str) -> Result<String> {
    let (fan, name) = load_fan(text, fallback_name)?;
    Ok(to_json(&AnalysisReport::build(&fan, name)?))
}

/// Face-lattice report, plus the SVG when requested.
pub fn cmd_delzant(text: &str, svg: bool) -> Result<(String, Option<String>)> {
    let (fan, _) = load_fan(text, "")?;
    let report = to_json(&DelzantReport::build(&fan)?);
    let picture = if svg { Some(delzant_svg(&fan)?) } else { None };
    Ok((report, picture))
}

/// `"1,2"` → 0-based cone.
pub fn parse_cone_labels(spec: &str) -> Result<ConeRef> {
    if spec.trim().is_empty() {
        return Ok(ConeRef::zero());
    }
    let mut indices = Vec::new();
    for part in spec.split(',') {
        let k: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("cone label {part:?} is not a positive integer")))?;
        if k == 0 {
            return Err(Error::Parse("cone labels are 1-based".into()));
        }
        indices.push(k - 1);
    }
    Ok(ConeRef::new(indices))
}

#[derive(Serialize)]
struct HilbertReport {
    cone: Vec<usize>,
    #[serde(serialize_with = "json::int_rows")]
    dual_cone: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "json::int_rows")]
    hilbert_basis: Vec<Vec<BigInt>>,
    r: usize,
}

pub fn cmd_hilbert(text: &str, cone: &str) -> Result<String> {
    let (fan, _) = load_fan(text, "")?;
    let cone = parse_cone_labels(cone)?;
    let hb = affine_semigroup(&fan, &cone)?;
    let sigma = RationalCone::new(fan.lattice_rank(), fan.generators(&cone))?;
    let rows = |vs: &[crate::lattice::IntVector]| vs.iter().map(|v| v.entries().to_vec()).collect();
    Ok(to_json(&HilbertReport {
        cone: cone.labels(),
        dual_cone: rows(dual_cone(&sigma).generators()),
        hilbert_basis: rows(&hb.generators),
        r: hb.rank_r,
    }))
}

fn parse_level(s: &str) -> Result<u64> {
    let m: u64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("level {s:?} is not a positive integer")))?;
    if m == 0 {
        return Err(Error::ZeroLevel);
    }
    Ok(m)
}

/// `--a` accepts `r` (with `--level`) or `r/M`.
pub fn cmd_solenoid_exp(a: &str, turns: &str, level: Option<&str>) -> Result<String> {
    let level = level.map(parse_level).transpose()?;
    let (residue, m) = match a.split_once('/') {
        Some((r, m)) => {
            let m = parse_level(m)?;
            if let Some(l) = level {
                if l != m {
                    return Err(Error::LevelMismatch { left: m, right: l });
                }
            }
            (r, m)
        }
        None => (
            a,
            level.ok_or_else(|| Error::Parse("--a without /M needs --level".into()))?,
        ),
    };
    let r: i64 = residue
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("residue {residue:?} is not an integer")))?;
    let a = ProfiniteInt::from_integer(r, m)?;
    let point = sol_exp(&a, &parse_rational(turns)?)?;
    Ok(format!("{point}\n"))
}

fn polar(rho: &str, turns: &str) -> Result<PolarComplex> {
    PolarComplex::new(parse_rational(rho)?, parse_rational(turns)?)
}

pub fn cmd_solenoid_cover(n: u64, m: u64, rho: &str, turns: &str) -> Result<String> {
    let z = cover_map(n, m, &polar(rho, turns)?)?;
    Ok(format!("level={n} {z}\n"))
}

pub fn cmd_solenoid_refine(
    level: u64,
    rho: &str,
    turns: &str,
    to: u64,
    branch: u64,
) -> Result<String> {
    let z = SolenoidPoint::new(level, polar(rho, turns)?)?;
    Ok(format!("{}\n", z.refine(to, branch)?))
}

fn render(e: &KRingElement) -> String {
    format!("{e}\n")
}

pub fn cmd_kring_reduce(expr: &str) -> Result<String> {
    Ok(render(&reduce(&parse_formal_sum(expr)?)))
}

pub fn cmd_kring_mul(e1: &str, e2: &str) -> Result<String> {
    let u = reduce(&parse_formal_sum(e1)?);
    let v = reduce(&parse_formal_sum(e2)?);
    Ok(render(&u.multiply(&v)))
}

pub fn cmd_kring_level(n: u64, expr: &str) -> Result<String> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let e = reduce(&parse_formal_sum(expr)?);
    Ok(format!("{e} level {n}: {}\n", e.in_level(n)))
}

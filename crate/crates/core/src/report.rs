//! Report documents, the `describe` data dump, and independent witness
//! re-validation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certifier::{
    verify_condition_direction, verify_domination, ConditionId, ConditionReport, EfficiencyResult, Verdict,
};
use crate::error::{Error, Result};
use crate::exactlp::cone::{ConeHRep, ConeVRep};
use crate::exactlp::rational::{parse_rational, QMatrix, QVector, Rational};
use crate::funcalc::{ConvexityWitness, SubdiffPolytope};
use crate::gap::verify_gap_witness;
use crate::geometry::{g1_cone, g2_cone, normal_cone, tangent_cone, G2Cone};
use crate::instance::Problem;
use crate::oracle::{verify_refutation, OracleReport, RadiusEstimate};

pub const TOOL: &str = "vopcert";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<EfficiencyResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<RadiusEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<ConditionReport>,
    /// Wall-clock milliseconds per phase.
    pub timings_ms: BTreeMap<String, f64>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            seed: None,
            verdict: None,
            efficiency: None,
            oracle: None,
            radius: None,
            gap: None,
            timings_ms: BTreeMap::new(),
        }
    }

    /// Runs `f` and records its duration under `phase`.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = std::time::Instant::now();
        let out = f();
        self.timings_ms
            .insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `G₂` as stored in a describe document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Data {
    pub exact: bool,
    pub inner: ConeHRep,
    pub outer: ConeHRep,
}

/// Exact cone data at the candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescribeDocument {
    pub candidate: QVector,
    /// `K = {y : mᵀy ≤ 0}`.
    pub k_hrep: ConeHRep,
    pub k_vrep: ConeVRep,
    /// Generators of `−K*`.
    pub dual_neg_generators: ConeVRep,
    /// Vertices of `∂_c fᵢ(x̄)` per component.
    pub subdifferentials: Vec<SubdiffPolytope>,
    pub g1: ConeHRep,
    pub g2: G2Data,
    pub tangent: ConeHRep,
    pub tangent_exact: bool,
    pub normal: ConeVRep,
}

pub fn describe(problem: &Problem) -> Result<DescribeDocument> {
    let inst = &problem.instance;
    let x = &problem.candidate;
    let t = tangent_cone(&inst.omega, x)?;
    let g2 = g2_cone(&inst.f, &inst.k, x)?;
    Ok(DescribeDocument {
        candidate: x.clone(),
        k_hrep: inst.k.hrep().clone(),
        k_vrep: inst.k.vrep().clone(),
        dual_neg_generators: inst.k.dual_neg_gens().clone(),
        subdifferentials: inst.f.component_subdiffs(x),
        g1: g1_cone(&inst.f, &inst.k, x)?,
        g2: G2Data {
            exact: matches!(g2, G2Cone::Exact(_)),
            inner: g2.inner().clone(),
            outer: g2.outer().clone(),
        },
        tangent: t.cone,
        tangent_exact: t.exact,
        normal: normal_cone(&inst.omega, x)?.cone,
    })
}

fn interval(p: &SubdiffPolytope) -> String {
    let lo = &p.vertices().first().expect("nonempty")[0];
    let hi = &p.vertices().last().expect("nonempty")[0];
    if lo == hi {
        format!("{{{lo}}}")
    } else {
        format!("[{lo}, {hi}]")
    }
}

/// A cone on the line, as an interval.
fn line_cone(c: &ConeHRep) -> &'static str {
    let up = c.contains(&QVector::from_i64(&[1]));
    let down = c.contains(&QVector::from_i64(&[-1]));
    match (down, up) {
        (true, true) => "ℝ",
        (true, false) => "(-∞, 0]",
        (false, true) => "[0, ∞)",
        (false, false) => "{0}",
    }
}

fn rows(c: &ConeHRep) -> String {
    if c.rows().is_empty() {
        return format!("ℝ^{}", c.dim());
    }
    let rs: Vec<String> = c.rows().iter().map(|r| format!("{r}·d ≤ 0")).collect();
    format!("{{d : {}}}", rs.join(", "))
}

fn gens(c: &ConeVRep) -> String {
    let gs: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
    format!("pos{{{}}}", gs.join(", "))
}

/// Human-readable rendering of a describe document.
pub fn render_describe(d: &DescribeDocument) -> String {
    let n = d.candidate.dim();
    let mut s = String::new();
    let _ = writeln!(s, "candidate x̄ = {}", d.candidate);
    let _ = writeln!(s, "K = {} = {}", rows(&d.k_hrep), gens(&d.k_vrep));
    let _ = writeln!(s, "-K* = {}", gens(&d.dual_neg_generators));
    let sub: Vec<String> = d
        .subdifferentials
        .iter()
        .map(|p| if n == 1 { interval(p) } else { p.to_string() })
        .collect();
    let _ = writeln!(s, "∂f(x̄) = {}", sub.join(" × "));
    let cone = |c: &ConeHRep| if n == 1 { line_cone(c).to_string() } else { rows(c) };
    let _ = writeln!(s, "G1 = {}", cone(&d.g1));
    if d.g2.exact {
        let _ = writeln!(s, "G2 = {}", cone(&d.g2.inner));
    } else {
        let _ = writeln!(s, "G2 between {} and {}", cone(&d.g2.inner), cone(&d.g2.outer));
    }
    let approx = if d.tangent_exact { "" } else { " (approximation)" };
    let _ = writeln!(s, "T = {}{approx}", cone(&d.tangent));
    let _ = writeln!(s, "N = {}{approx}", gens(&d.normal));
    s
}

/// Outcome of re-validating one witness found in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub location: String,
    pub kind: String,
    pub valid: bool,
}

fn field<'a>(v: &'a Value, key: &str, loc: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("{loc}: missing field {key:?}")))
}

fn decode<T: for<'de> Deserialize<'de>>(v: &Value, loc: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{loc}: {e}")))
}

fn rational(v: &Value, loc: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap())),
        _ => Err(Error::Parse(format!("{loc}: expected a rational"))),
    }
}

fn condition_id(code: &str) -> Option<ConditionId> {
    use ConditionId::*;
    [
        NecessaryIntersection,
        SufficientIntersection,
        NecessaryDual,
        SufficientDual,
        ConicNecessary,
        ConicSufficient,
        Cq1,
        ZeroNotInConstraintSubdiff,
        Discretized,
        Gap,
    ]
    .into_iter()
    .find(|c| c.code() == code)
}

fn check_witness(
    problem: &Problem,
    w: &Value,
    id: Option<ConditionId>,
    radius: Option<&Rational>,
    loc: &str,
) -> Result<WitnessCheck> {
    let inst = &problem.instance;
    let x = &problem.candidate;
    let kind = field(w, "kind", loc)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{loc}: kind must be a string")))?
        .to_string();
    let valid = match kind.as_str() {
        "direction" => {
            let d: QVector = decode(field(w, "d", loc)?, loc)?;
            match id {
                Some(id) => verify_condition_direction(inst, x, id, &d)?,
                None => false,
            }
        }
        "perturbation" => {
            let c: QMatrix = decode(field(w, "c", loc)?, loc)?;
            let y: QVector = decode(field(w, "y", loc)?, loc)?;
            match radius {
                Some(r) => verify_refutation(inst, x, r, &c, &y),
                None => false,
            }
        }
        "gap" => {
            let xi: QMatrix = decode(field(w, "xi", loc)?, loc)?;
            let ybar: QVector = decode(field(w, "ybar", loc)?, loc)?;
            verify_gap_witness(inst, x, &xi, &ybar)?
        }
        "convexity" => convexity(problem, w, loc)?,
        other => return Err(Error::Parse(format!("{loc}: unknown witness kind {other:?}"))),
    };
    Ok(WitnessCheck {
        location: loc.to_string(),
        kind,
        valid,
    })
}

fn convexity(problem: &Problem, w: &Value, loc: &str) -> Result<bool> {
    let cw = ConvexityWitness {
        x: decode(field(w, "x", loc)?, loc)?,
        y: decode(field(w, "y", loc)?, loc)?,
        lambda: rational(field(w, "lambda", loc)?, loc)?,
        scalarization: decode(field(w, "scalarization", loc)?, loc)?,
    };
    Ok(cw.verify(&problem.instance.f, &problem.instance.k))
}

/// Re-validates every witness in a report against the instance, using
/// substitution into the instance data and cones rebuilt from it.
pub fn verify_report(problem: &Problem, report: &Value) -> Result<Vec<WitnessCheck>> {
    let mut out = Vec::new();
    if let Some(verdict) = report.get("verdict") {
        let conds = field(verdict, "conditions", "verdict")?
            .as_array()
            .ok_or_else(|| Error::Parse("verdict.conditions must be a list".into()))?;
        for (i, c) in conds.iter().enumerate() {
            let loc = format!("verdict.conditions[{i}]");
            let w = field(c, "witness", &loc)?;
            if w.is_null() {
                continue;
            }
            let id = field(c, "id", &loc)?.as_str().and_then(condition_id);
            out.push(check_witness(problem, w, id, None, &loc)?);
        }
        if let Some(w) = verdict
            .get("hypotheses")
            .and_then(|h| h.get("f_convexity_witness"))
            .filter(|w| !w.is_null())
        {
            let loc = "verdict.hypotheses.f_convexity_witness";
            out.push(WitnessCheck {
                location: loc.into(),
                kind: "convexity".into(),
                valid: convexity(problem, w, loc)?,
            });
        }
    }
    if let Some(e) = report.get("efficiency") {
        let w = field(e, "witness", "efficiency")?;
        if !w.is_null() {
            let y: QVector = decode(w, "efficiency.witness")?;
            out.push(WitnessCheck {
                location: "efficiency.witness".into(),
                kind: "domination".into(),
                valid: verify_domination(&problem.instance, &problem.candidate, None, &y),
            });
        }
    }
    if let Some(o) = report.get("oracle") {
        let outcome = field(o, "outcome", "oracle")?;
        if field(outcome, "kind", "oracle.outcome")?.as_str() == Some("RefutedWithWitness") {
            let loc = "oracle.outcome";
            let r = rational(field(o, "radius", "oracle")?, "oracle.radius")?;
            let c: QMatrix = decode(field(field(outcome, "perturbation", loc)?, "c", loc)?, loc)?;
            let y: QVector = decode(field(outcome, "y", loc)?, loc)?;
            out.push(WitnessCheck {
                location: loc.into(),
                kind: "perturbation".into(),
                valid: verify_refutation(&problem.instance, &problem.candidate, &r, &c, &y),
            });
        }
    }
    if let Some(g) = report.get("gap") {
        let w = field(g, "witness", "gap")?;
        if !w.is_null() {
            out.push(check_witness(problem, w, Some(ConditionId::Gap), None, "gap")?);
        }
    }
    Ok(out)
}

//! Dispatch of tasks to the core library and assembly of reports.

use std::time::Instant;

use anyhow::{bail, Context};
use serde_json::{json, Value};
use simplederiv_core::darboux::{cofactor_bound, stable_ideal_scan, ScanConfig};
use simplederiv_core::image::{affine_target_scan, membership_report, AffineVerdict, ColumnOrder};
use simplederiv_core::isotropy::{
    closed_in_box, commutes, diagonal_affine_scan, translation, triangular_affine_scan, AffineMap, Endomorphism,
};
use simplederiv_core::lemma::{
    check_degree_schedule, contradiction_certificate, leading_ledger, reconstruct_sequence, residual, residual_rows,
    solve_chain, symbols, CaseResolution, Certificate, DegreeBound, LemmaConfig, SymbolRole,
};
use simplederiv_core::poly::{parse, Polynomial, Rational};
use simplederiv_core::Derivation;

use crate::config::{DerivationSource, RunConfig, Task};
use crate::format::DerivationFile;
use crate::report::{GridReport, Output, Report, Status, Timing, Verdict, SCHEMA, TOOL, VERSION};

pub const M1_WARNING: &str = "m=1 outside theorem hypothesis";

struct Outcome {
    status: Status,
    expectation: String,
    summary: String,
    evidence: &'static str,
    result: Value,
    warnings: Vec<String>,
}

/// Runs every task of `config`. One task gives a plain report; several give a
/// grid report whose verdict is the conjunction of the point verdicts.
pub fn run(config: &RunConfig) -> anyhow::Result<Output> {
    if config.tasks.is_empty() {
        bail!("nothing to run");
    }
    let start = Instant::now();
    let points = config
        .tasks
        .iter()
        .map(|t| run_task(t, config.seed))
        .collect::<anyhow::Result<Vec<Report>>>()?;
    if points.len() == 1 {
        return Ok(Output::Point(points.into_iter().next().expect("one point")));
    }
    let status = points.iter().fold(Status::Expected, |acc, p| acc.and(p.verdict.status));
    let failing = points
        .iter()
        .filter(|p| p.verdict.status == Status::Counterexample)
        .count();
    let command = points[0].command.clone();
    let summary = match failing {
        0 => format!("all {} grid points as expected", points.len()),
        k => format!("{k} of {} grid points contradict the expectation", points.len()),
    };
    let evidence = if points.iter().all(|p| p.verdict.evidence == "exact") {
        "exact"
    } else {
        "bounded"
    };
    Ok(Output::Grid(GridReport {
        schema: SCHEMA,
        tool: TOOL.into(),
        version: VERSION.into(),
        command,
        seed: config.seed,
        config: config.clone(),
        verdict: Verdict {
            status,
            expectation: "every grid point as expected".into(),
            summary,
            evidence: evidence.into(),
        },
        points,
        timing: Timing {
            millis: start.elapsed().as_secs_f64() * 1e3,
        },
    }))
}

pub fn run_task(task: &Task, seed: u64) -> anyhow::Result<Report> {
    let start = Instant::now();
    let mut outcome = match task {
        Task::Apply { derivation, target } => apply(derivation, target)?,
        Task::Image {
            derivation,
            target,
            degree,
        } => image(derivation, target, *degree)?,
        Task::ScanUnits { n, m, alpha, degree } => scan_units(*n, *m, *alpha, *degree)?,
        Task::LemmaCert { m, alpha, j0 } => lemma_cert(*m, *alpha, *j0)?,
        Task::Darboux {
            derivation,
            deg_p,
            cofactor_deg,
            coefficient_box,
        } => darboux(derivation, *deg_p, *cofactor_deg, *coefficient_box)?,
        Task::Isotropy {
            n,
            m,
            alpha,
            bound,
            full_affine,
        } => isotropy(*n, *m, *alpha, *bound, *full_affine)?,
    };
    if task.outside_hypothesis() {
        outcome.warnings.insert(0, M1_WARNING.into());
    }
    Ok(Report {
        schema: SCHEMA,
        tool: TOOL.into(),
        version: VERSION.into(),
        command: task.command().into(),
        seed,
        config: task.clone(),
        verdict: Verdict {
            status: outcome.status,
            expectation: outcome.expectation,
            summary: outcome.summary,
            evidence: outcome.evidence.into(),
        },
        warnings: outcome.warnings,
        result: outcome.result,
        timing: Timing {
            millis: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn derivation_json(d: &Derivation) -> Value {
    serde_json::to_value(DerivationFile::from_derivation(d)).expect("serializes")
}

fn parse_target(text: &str, arity: usize) -> anyhow::Result<Polynomial> {
    parse(text, arity).with_context(|| format!("target {text:?}"))
}

fn apply(source: &DerivationSource, target: &str) -> anyhow::Result<Outcome> {
    let d = source.build()?;
    let p = parse_target(target, d.arity())?;
    let image = d.apply(&p)?;
    Ok(Outcome {
        status: Status::Expected,
        expectation: "none".into(),
        summary: format!("d({p}) = {image}"),
        evidence: "exact",
        result: json!({
            "derivation": derivation_json(&d),
            "input": p.to_string(),
            "image": image.to_string(),
        }),
        warnings: Vec::new(),
    })
}

/// `a*x_n + b` with `(a, b) != (0, 0)`.
fn is_affine_in_last(t: &Polynomial) -> bool {
    let n = t.arity();
    !t.is_zero()
        && t.terms()
            .all(|(m, _)| m.degree() == 0 || (m.degree() == 1 && m.exponent(n - 1) == 1))
}

fn image(source: &DerivationSource, target: &str, degree: u32) -> anyhow::Result<Outcome> {
    let d = source.build()?;
    let t = parse_target(target, d.arity())?;
    let report = membership_report(&d, &t, degree, ColumnOrder::Grlex)?;
    let predicted_absent = source.family_m().is_some_and(|m| m >= 2) && is_affine_in_last(&t);
    let witness = report.witness.as_ref().map(|w| w.r().to_string());
    let status = if predicted_absent && witness.is_some() {
        Status::Counterexample
    } else {
        Status::Expected
    };
    let summary = match &witness {
        Some(r) => format!("{t} = d({r})"),
        None => format!("{t} not in the image of polynomials of degree <= {degree}"),
    };
    Ok(Outcome {
        status,
        expectation: if predicted_absent {
            "absent".into()
        } else {
            "none".into()
        },
        summary,
        evidence: "bounded",
        result: json!({
            "derivation": derivation_json(&d),
            "target": t.to_string(),
            "degree": degree,
            "rows": report.rows,
            "cols": report.cols,
            "rank": report.rank,
            "witness": witness,
        }),
        warnings: Vec::new(),
    })
}

fn scan_units(n: usize, m: u32, alpha: u32, degree: u32) -> anyhow::Result<Outcome> {
    let d = DerivationSource::Family { n, m, alpha }.build()?;
    let unit = membership_report(&d, &Polynomial::one(n), degree, ColumnOrder::Grlex)?;
    let affine = affine_target_scan(&d, n - 1, degree)?;
    let witness = unit.witness.as_ref().map(|w| w.r().to_string());
    let trivial = affine.verdict == AffineVerdict::TrivialOnly;
    let status = if witness.is_none() && trivial {
        Status::Expected
    } else {
        Status::Counterexample
    };
    let summary = match (&witness, trivial) {
        (Some(r), _) => format!("unit in image: 1 = d({r})"),
        (None, false) => format!("no unit in image up to degree {degree}, but a*x{n} + b is reached nontrivially"),
        (None, true) => format!("no unit in image up to degree {degree}"),
    };
    let solutions: Vec<Value> = affine
        .solutions
        .iter()
        .map(|s| json!({ "r": s.r.to_string(), "a": s.target.a.to_string(), "b": s.target.b.to_string() }))
        .collect();
    Ok(Outcome {
        status,
        expectation: format!("no unit and no nontrivial preimage of a*x{n} + b up to degree {degree}"),
        summary,
        evidence: "bounded",
        result: json!({
            "derivation": derivation_json(&d),
            "degree": degree,
            "unit": {
                "rows": unit.rows,
                "cols": unit.cols,
                "rank": unit.rank,
                "witness": witness,
            },
            "affine": {
                "variable": format!("x{n}"),
                "rows": affine.rows,
                "cols": affine.cols,
                "rank": affine.rank,
                "verdict": if trivial { "trivial-only" } else { "nontrivial" },
                "solutions": solutions,
            },
        }),
        warnings: Vec::new(),
    })
}

fn lemma_cert(m: u32, alpha: u32, j0: Option<u32>) -> anyhow::Result<Outcome> {
    if m == 1 {
        // no contradiction to certify: run the chain and report its solution
        let cfg = LemmaConfig::unrestricted(1, alpha, j0.unwrap_or(1))?;
        let (chain, solvable) = chain_json(&cfg)?;
        return Ok(Outcome {
            status: if solvable {
                Status::Counterexample
            } else {
                Status::Expected
            },
            expectation: "no preimage of a*x + b of positive y-degree".into(),
            summary: if solvable {
                format!("chain of y-degree {} solves d(r) = a*x + b", cfg.l())
            } else {
                format!("chain of y-degree {} has no solution", cfg.l())
            },
            evidence: "exact",
            result: json!({ "certificate": Value::Null, "chain": chain }),
            warnings: Vec::new(),
        });
    }
    let cert = contradiction_certificate(m, alpha)?;
    let mut complete = cert.is_complete();
    let chain = match j0 {
        Some(j0) => {
            let cfg = LemmaConfig::new(m, alpha, j0)?;
            let (chain, solvable) = chain_json(&cfg)?;
            complete &= !solvable;
            chain
        }
        None => Value::Null,
    };
    Ok(Outcome {
        status: if complete {
            Status::Expected
        } else {
            Status::Counterexample
        },
        expectation: "every case closed".into(),
        summary: if complete {
            format!("certificate complete for m={m}, alpha={alpha}")
        } else {
            format!("certificate incomplete for m={m}, alpha={alpha}")
        },
        evidence: "exact",
        result: json!({ "certificate": certificate_json(&cert)?, "chain": chain }),
        warnings: Vec::new(),
    })
}

fn ratio(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn certificate_json(cert: &Certificate) -> anyhow::Result<Value> {
    let (m, alpha) = (cert.m, cert.alpha);
    let case = |number: u32, assumption: &str, rhs: Option<u32>, res: &CaseResolution| -> anyhow::Result<Value> {
        let resolution = match res {
            CaseResolution::NoAdmissibleJ0 { rhs } => json!({ "kind": "no-admissible-j0", "rhs": rhs }),
            CaseResolution::DegreeAbsurdity { min_degree } => {
                json!({ "kind": "degree-absurdity", "min_degree": min_degree })
            }
            CaseResolution::SignClash(s) => {
                let names = symbol_names(&LemmaConfig::new(m, alpha, s.j0)?);
                json!({
                    "kind": "sign-clash",
                    "j0": s.j0,
                    "l": s.l,
                    "degree": s.degree,
                    "A": ratio(&s.leading_a),
                    "B": ratio(&s.sub_leading_b),
                    "forced_positive": ratio(&s.forced_positive),
                    "forced_negative": ratio(&s.forced_negative),
                    "companion": s.companion.named(&names).to_string(),
                    "companion_degree": s.companion_degree,
                    "chain_agrees": s.chain_agrees,
                    "chain_inconsistent": s.chain_inconsistent,
                })
            }
        };
        Ok(json!({
            "case": number,
            "assumption": assumption,
            "equation": rhs.map(|r| format!("(j0-1)*(alpha+1) = {r}")),
            "resolution": resolution,
        }))
    };
    Ok(json!({
        "m": m,
        "alpha": alpha,
        "max_j0": cert.max_j0,
        "j0_one": {
            "excluded": cert.j0_one_excluded_degree >= 1,
            "f_m_degree": cert.j0_one_excluded_degree,
        },
        "cases": [
            case(1, "a != 0", Some((m - 1) * alpha + 1), &cert.case1)?,
            case(2, "a = 0, b != 0", Some((m - 1) * alpha), &cert.case2)?,
            case(3, "a = b = 0", None, &cert.case3)?,
        ],
        "complete": cert.is_complete(),
    }))
}

fn symbol_names(cfg: &LemmaConfig) -> Vec<String> {
    simplederiv_core::lemma::symbol_names(cfg)
}

/// The reconstructed chain at `cfg` and whether its linear system is solvable.
pub fn chain_json(cfg: &LemmaConfig) -> anyhow::Result<(Value, bool)> {
    let names = symbol_names(cfg);
    let seq = reconstruct_sequence(cfg);
    let n = cfg.arity();
    let schedule: Vec<Value> = check_degree_schedule(&seq, cfg)
        .checks
        .iter()
        .map(|c| {
            let expected = match c.expected {
                DegreeBound::Exact(e) => format!("= {e}"),
                DegreeBound::AtMost(e) => format!("<= {e}"),
            };
            json!({
                "index": c.index,
                "expected": expected,
                "actual": c.actual.to_string(),
                "leading": c.leading.as_ref().map(ratio),
                "ok": c.ok,
            })
        })
        .collect();
    let ledger = leading_ledger(cfg);
    let keyed = |map: &std::collections::BTreeMap<u32, Rational>| -> Value {
        map.iter()
            .map(|(j, v)| (j.to_string(), ratio(v)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let companion: serde_json::Map<String, Value> = ledger
        .companion
        .iter()
        .map(|(j, p)| (j.to_string(), Value::String(p.named(&names).to_string())))
        .collect();
    let (a, b) = (
        Polynomial::var(n, simplederiv_core::lemma::A),
        Polynomial::var(n, simplederiv_core::lemma::B),
    );
    let rows: Vec<Value> = residual_rows(&residual(cfg, &seq, &a, &b)?)
        .iter()
        .map(|(i, p)| json!({ "power_of_y": i, "coefficient": p.named(&names).to_string() }))
        .collect();
    let solution = solve_chain(cfg, &seq)?;
    let solvable = solution.is_some();
    let solution = solution.map(|s| {
        let values: serde_json::Map<String, Value> =
            names[2..].iter().cloned().zip(s.values.iter().map(ratio)).collect();
        json!({ "values": values, "freedom": s.freedom })
    });
    let symbols: Vec<Value> = symbols(cfg)
        .into_iter()
        .map(|s| {
            let role = match s.role {
                SymbolRole::X | SymbolRole::Y => "ring variable".to_string(),
                SymbolRole::A | SymbolRole::B => "target coefficient".to_string(),
                SymbolRole::Lambda(k) => format!("f_{} constant", cfg.l() - k),
                SymbolRole::IntegrationConstant(i) => format!("integration constant of f_{i}"),
            };
            json!({ "name": s.name, "role": role })
        })
        .collect();
    let entries: Vec<Value> = seq
        .descending()
        .map(|(i, f)| json!({ "index": i, "f": f.named(&names).to_string() }))
        .collect();
    Ok((
        json!({
            "m": cfg.m(),
            "alpha": cfg.alpha(),
            "j0": cfg.j0(),
            "l": cfg.l(),
            "symbols": symbols,
            "entries": entries,
            "schedule": schedule,
            "ledger": { "A": keyed(&ledger.a), "B": keyed(&ledger.b), "companion": companion },
            "residual_rows": rows,
            "solution": solution,
        }),
        solvable,
    ))
}

fn darboux(
    source: &DerivationSource,
    deg_p: u32,
    cofactor_deg: Option<u32>,
    coefficient_box: (i64, i64),
) -> anyhow::Result<Outcome> {
    let d = source.build()?;
    let cfg = ScanConfig {
        deg_p,
        cofactor_deg: cofactor_deg.unwrap_or_else(|| cofactor_bound(&d)),
        coefficient_box,
    };
    let report = stable_ideal_scan(&d, &cfg)?;
    let (expectation, status) = match source {
        DerivationSource::Family { m, .. } if *m >= 2 => (
            "no stable principal ideal",
            if report.found() {
                Status::Counterexample
            } else {
                Status::Expected
            },
        ),
        DerivationSource::Control { .. } => (
            "stable principal ideal",
            if report.found() {
                Status::Expected
            } else {
                Status::Counterexample
            },
        ),
        _ => ("none", Status::Expected),
    };
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| json!({ "p": w.p().to_string(), "q": w.q().to_string() }))
        .collect();
    Ok(Outcome {
        status,
        expectation: expectation.into(),
        summary: format!(
            "{} Darboux witnesses among {} cofactors ({} exact solves)",
            witnesses.len(),
            report.cofactors,
            report.solves
        ),
        evidence: "bounded",
        result: json!({
            "derivation": derivation_json(&d),
            "deg_p": cfg.deg_p,
            "cofactor_deg": cfg.cofactor_deg,
            "coefficient_box": [coefficient_box.0, coefficient_box.1],
            "cofactors": report.cofactors.to_string(),
            "top_parts": report.top_parts.to_string(),
            "top_parts_surviving": report.top_parts_surviving.to_string(),
            "solves": report.solves.to_string(),
            "witnesses": witnesses,
            "disclaimer": report.disclaimer(),
        }),
        warnings: Vec::new(),
    })
}

fn affine_json(map: &AffineMap) -> Value {
    let n = map.arity();
    let linear: Vec<Vec<String>> = (0..n)
        .map(|i| map.linear.row(i).iter().map(ToString::to_string).collect())
        .collect();
    json!({
        "images": map.to_endomorphism().images().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "linear": linear,
        "offset": map.offset.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "translation": map.is_translation(),
    })
}

fn isotropy(n: usize, m: u32, alpha: u32, bound: i64, full_affine: bool) -> anyhow::Result<Outcome> {
    if bound < 0 {
        bail!("box must be non-negative");
    }
    let d = DerivationSource::Family { n, m, alpha }.build()?;
    let found = if full_affine {
        triangular_affine_scan(&d, -bound, bound)?
    } else {
        diagonal_affine_scan(&d, -bound, bound)?
    };
    // translations by every c in the box commute when n >= 3; for n = 2 only
    // the identity is expected
    let shifts: Vec<i64> = if n >= 3 { (-bound..=bound).collect() } else { vec![0] };
    let mut translations_commute = true;
    for &c in &shifts {
        let t: Endomorphism = translation(n, Rational::from_integer(c.into()));
        translations_commute &= commutes(&d, &t)?.holds();
    }
    let only_expected = found.len() == shifts.len()
        && found
            .iter()
            .all(|f| f.is_translation() && (n >= 3 || f.offset.iter().all(|c| *c == Rational::from_integer(0.into()))));
    let closed = closed_in_box(&d, &found, -bound, bound)?;
    let status = if only_expected && translations_commute && closed {
        Status::Expected
    } else {
        Status::Counterexample
    };
    let family = if full_affine { "lower-triangular" } else { "diagonal" };
    let expectation = if n >= 3 {
        format!("exactly the {} translations of x{n}", shifts.len())
    } else {
        "only the identity".to_string()
    };
    Ok(Outcome {
        status,
        expectation,
        summary: format!(
            "{} commuting {family} affine maps with entries in [-{bound}, {bound}]",
            found.len()
        ),
        evidence: "bounded",
        result: json!({
            "derivation": derivation_json(&d),
            "family": family,
            "box": [-bound, bound],
            "commuting": found.iter().map(affine_json).collect::<Vec<_>>(),
            "translations_commute": translations_commute,
            "closed_in_box": closed,
        }),
        warnings: Vec::new(),
    })
}

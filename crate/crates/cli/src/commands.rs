//! One function per subcommand. Each returns an [`Outcome`] or a
//! [`CliError`] that decides the exit code.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qvspi::compile::compile_formula;
use qvspi::cuts::{classify_cut, decompose, is_valuational, Cut, ExtPoint, IntervalSet};
use qvspi::eval::{eval, Assignment};
use qvspi::formula::{parse, parse_scalar, ParseError};
use qvspi::imaginaries::{ei_code, in_domain, same_class, validate_equivalence, CutCode};
use qvspi::limits::{check_no_external_limits, check_skolem, leftmost_witness, limit_at, DefinableFunction, PieceRecord, Side, SkolemVerdict};
use qvspi::qe::{decide_with, eliminate, QeError, Strategy};
use qvspi::scalar::{PiScalar, Rational};
use qvspi::selftest::{run_selftest, SelftestConfig};
use qvspi::Formula;
use serde_json::{json, Value};

use crate::output::{json, CliError, Outcome, Status};

fn diagnose(text: &str, e: &ParseError) -> CliError {
    let pos = e.pos().min(text.len());
    let column = text[..pos].chars().count();
    CliError::Input(format!("{e}\n  {text}\n  {}^", " ".repeat(column)))
}

pub fn read_formula(text: &str) -> Result<Formula, CliError> {
    parse(text).map_err(|e| diagnose(text, &e))
}

pub fn read_scalar(text: &str) -> Result<PiScalar, CliError> {
    parse_scalar(text).map_err(|e| diagnose(text, &e))
}

fn read_rational(text: &str) -> Result<Rational, CliError> {
    read_scalar(text)?
        .is_rational()
        .ok_or_else(|| CliError::Input(format!("`{text}` is not a rational number")))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn qe_error(e: QeError) -> CliError {
    match e {
        QeError::Undecided(_) => CliError::Invariant(e.to_string()),
        _ => CliError::input(e),
    }
}

fn rational_text(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::FourierMotzkin => "fourier-motzkin",
        Strategy::VirtualSubstitution => "virtual-substitution",
    }
}

/// A rational instance of the outermost quantifier: a witness when a true
/// sentence starts with an existential, a counterexample when a false one
/// starts with a universal.
fn outer_witness(sentence: &Formula, truth: bool) -> Result<Option<(String, Rational)>, CliError> {
    let (var, set) = match (sentence, truth) {
        (Formula::Exists(v, body), true) => (v, eliminate(body).map_err(qe_error)?),
        (Formula::ForAll(v, body), false) => (v, eliminate(&Formula::not((**body).clone())).map_err(qe_error)?),
        _ => return Ok(None),
    };
    let set = decompose(&set, var).map_err(CliError::input)?;
    Ok(leftmost_witness(&set).map(|q| (var.clone(), q)))
}

pub fn decide(text: &str, strategy: Strategy) -> Result<Outcome, CliError> {
    let f = read_formula(text)?;
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(CliError::Input(format!("not a sentence: free variables {}", names(&free))));
    }
    let truth = decide_with(&f, strategy).map_err(qe_error)?;
    let witness = outer_witness(&f, truth)?;
    let mut out = truth.to_string();
    let mut witnesses = Vec::new();
    if let Some((v, q)) = witness {
        let role = if truth { "witness" } else { "counterexample" };
        write!(out, "\n{role}: {v} = {q}").unwrap();
        witnesses.push(json!({ "role": role, "variable": v, "value": rational_text(&q) }));
    }
    let status = if truth { Status::Success } else { Status::False };
    Ok(Outcome::new("decide", json!({ "formula": text, "strategy": strategy_name(strategy) }), json!(truth), out)
        .with_witnesses(witnesses)
        .with_status(status))
}

pub fn eliminate_cmd(text: &str) -> Result<Outcome, CliError> {
    let f = read_formula(text)?;
    let g = eliminate(&f).map_err(qe_error)?;
    let printed = g.to_string();
    Ok(Outcome::new("eliminate", json!({ "formula": text }), json!(printed), printed))
}

fn names(vars: &BTreeSet<String>) -> String {
    vars.iter().cloned().collect::<Vec<_>>().join(", ")
}

fn parse_assignment(bindings: &[String]) -> Result<(Assignment, Value), CliError> {
    let mut a = Assignment::new();
    let mut shown = serde_json::Map::new();
    for b in bindings {
        let (v, s) = b
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("assignment `{b}` is not of the form VAR=SCALAR")))?;
        let v = v.trim().to_string();
        let s = read_scalar(s.trim())?;
        shown.insert(v.clone(), json(&s));
        a.insert(v, s);
    }
    Ok((a, Value::Object(shown)))
}

pub fn eval_cmd(text: &str, bindings: &[String]) -> Result<Outcome, CliError> {
    let f = read_formula(text)?;
    let (a, shown) = parse_assignment(bindings)?;
    let missing: BTreeSet<String> = f.free_vars().into_iter().filter(|v| !a.contains_key(v)).collect();
    if !missing.is_empty() {
        return Err(CliError::Input(format!("no value for {}", names(&missing))));
    }
    let truth = eval(&f, &a).map_err(CliError::input)?;
    Ok(Outcome::new("eval", json!({ "formula": text, "assignment": shown }), json!(truth), truth.to_string()))
}

fn choose_var(f: &Formula, var: Option<&str>) -> Result<String, CliError> {
    if let Some(v) = var {
        let others: BTreeSet<String> = f.free_vars().into_iter().filter(|w| w != v).collect();
        if !others.is_empty() {
            return Err(CliError::Input(format!("free variables other than {v}: {}", names(&others))));
        }
        return Ok(v.to_string());
    }
    let free = f.free_vars();
    match free.len() {
        0 => Ok("x".to_string()),
        1 => Ok(free.into_iter().next().unwrap()),
        _ => Err(CliError::Input(format!("several free variables ({}); pick one with --var", names(&free)))),
    }
}

fn set_witnesses(set: &IntervalSet) -> Vec<Value> {
    leftmost_witness(set).map(|q| vec![json!({ "role": "member", "value": rational_text(&q) })]).unwrap_or_default()
}

pub fn decompose_cmd(text: &str, var: Option<&str>) -> Result<Outcome, CliError> {
    let f = read_formula(text)?;
    let v = choose_var(&f, var)?;
    let qf = eliminate(&f).map_err(qe_error)?;
    let set = decompose(&qf, &v).map_err(CliError::input)?;
    let witnesses = set_witnesses(&set);
    Ok(Outcome::new("decompose", json!({ "formula": text, "variable": v }), json(&set), set.to_string()).with_witnesses(witnesses))
}

pub fn classify_cut_cmd(text: &str) -> Result<Outcome, CliError> {
    let c = Cut::new(read_scalar(text)?);
    let kind = classify_cut(&c);
    Ok(Outcome::new(
        "classify-cut",
        json!({ "value": text }),
        json!({ "value": json(&c.value), "kind": kind.to_string() }),
        kind.to_string(),
    ))
}

pub fn valuational_cmd(text: &str) -> Result<Outcome, CliError> {
    let c = Cut::new(read_scalar(text)?);
    let v = is_valuational(&c);
    let word = if v { "valuational" } else { "non-valuational" };
    Ok(Outcome::new("valuational", json!({ "value": text }), json!(v), word))
}

fn read_function(path: &Path) -> Result<(DefinableFunction, Value), CliError> {
    let raw = read_file(path)?;
    let records: Vec<PieceRecord> =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let f = DefinableFunction::try_from(records.as_slice()).map_err(CliError::input)?;
    Ok((f, json(&records)))
}

fn read_ext(text: &str) -> Result<ExtPoint, CliError> {
    match text.trim() {
        "-inf" => Ok(ExtPoint::NegInf),
        "+inf" | "inf" => Ok(ExtPoint::PosInf),
        t => Ok(ExtPoint::Finite(read_scalar(t)?)),
    }
}

pub fn limit_cmd(path: &Path, at: Option<&str>, side: Side) -> Result<Outcome, CliError> {
    let (f, records) = read_function(path)?;
    match at {
        Some(p) => {
            let point = read_ext(p)?;
            let l = limit_at(&f, &point, side).map_err(CliError::input)?;
            Ok(Outcome::new(
                "limit",
                json!({ "function": records, "at": p, "side": side }),
                json!({ "limit": json(&l), "in_m_or_infinite": !matches!(l, ExtPoint::Finite(_)) || l.is_rational() }),
                l.to_string(),
            ))
        }
        None => {
            let report = check_no_external_limits(&f);
            let mut text = String::new();
            for e in &report.entries {
                let note = if e.exempt { " (exempt)" } else if e.ok { "" } else { " EXTERNAL" };
                writeln!(text, "{} from the {}: {}{note}", e.endpoint, e.side, e.limit).unwrap();
            }
            write!(text, "{}", if report.pass { "no external limits" } else { "external limit found" }).unwrap();
            Ok(Outcome::new("limit", json!({ "function": records }), json(&report), text))
        }
    }
}

pub fn skolem_check_cmd(cut: &str, path: &Path) -> Result<Outcome, CliError> {
    let c = Cut::new(read_scalar(cut)?);
    let raw = read_file(path)?;
    let candidates: Vec<Vec<PieceRecord>> =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut verdicts = Vec::new();
    let mut witnesses = Vec::new();
    let mut text = String::new();
    for (i, records) in candidates.iter().enumerate() {
        let f = DefinableFunction::try_from(records.as_slice())
            .map_err(|e| CliError::Input(format!("candidate {i}: {e}")))?;
        let verdict = check_skolem(&c, &f).map_err(|e| match e {
            qvspi::limits::LimitError::Unverified(_) => CliError::Invariant(e.to_string()),
            _ => CliError::input(e),
        })?;
        match &verdict {
            SkolemVerdict::Valid => {
                return Err(CliError::Invariant(format!("candidate {i} ({f}) picks witnesses everywhere")));
            }
            SkolemVerdict::Counterexample { x, reason } => {
                writeln!(text, "candidate {i}: refuted at x = {x} ({})", json(reason)["reason"].as_str().unwrap_or("")).unwrap();
                witnesses.push(json!({ "candidate": i, "x": rational_text(x) }));
            }
        }
        verdicts.push(json(&verdict));
    }
    write!(text, "{} of {} candidates refuted", verdicts.len(), candidates.len()).unwrap();
    Ok(Outcome::new("skolem-check", json!({ "cut": cut, "candidates": json(&candidates) }), json!(verdicts), text)
        .with_witnesses(witnesses))
}

fn read_samples(path: &Path) -> Result<Vec<(String, Rational)>, CliError> {
    read_file(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| Ok((l.to_string(), read_rational(l)?)))
        .collect()
}

pub fn ei_code_cmd(relation: &str, path: &Path) -> Result<Outcome, CliError> {
    let e = read_formula(relation)?;
    let samples = read_samples(path)?;
    let mut rows = Vec::new();
    let mut domain: Vec<(Rational, CutCode)> = Vec::new();
    let mut text = String::new();
    for (raw, q) in &samples {
        if in_domain(&e, q).map_err(CliError::input)? {
            let code = ei_code(&e, q).map_err(CliError::input)?;
            writeln!(text, "{raw}: {code}").unwrap();
            rows.push(json!({ "sample": rational_text(q), "in_domain": true, "code": json(&code) }));
            domain.push((q.clone(), code));
        } else {
            writeln!(text, "{raw}: not in domain").unwrap();
            rows.push(json!({ "sample": rational_text(q), "in_domain": false, "code": Value::Null }));
        }
    }
    let points: Vec<Rational> = domain.iter().map(|(q, _)| q.clone()).collect();
    let check = validate_equivalence(&e, &points).map_err(CliError::input)?;
    if !check.pass {
        return Err(CliError::Input(format!(
            "relation is not an equivalence on the samples: {}",
            serde_json::to_string(&check.violations).expect("violations serialize")
        )));
    }
    let mut matrix = Vec::new();
    let mut mismatches = Vec::new();
    for (a, ca) in &domain {
        let mut row = Vec::new();
        for (b, cb) in &domain {
            let same_code = ca == cb;
            if same_code != same_class(&e, a, b).map_err(CliError::input)? {
                mismatches.push(format!("({a}, {b})"));
            }
            row.push(same_code);
        }
        matrix.push(row);
    }
    if !mismatches.is_empty() {
        return Err(CliError::Invariant(format!("codes disagree with the relation at {}", mismatches.join(", "))));
    }
    text.push_str("codes agree with the relation on all pairs");
    Ok(Outcome::new(
        "ei-code",
        json!({ "relation": relation, "samples": samples.iter().map(|(_, q)| rational_text(q)).collect::<Vec<_>>() }),
        json!({ "codes": rows, "matrix": matrix, "consistent": true }),
        text,
    ))
}

pub fn compile_cmd(text: &str) -> Result<Outcome, CliError> {
    let f = read_formula(text)?;
    let compiled = compile_formula(&f).into_formula();
    let closed = f
        .free_vars()
        .into_iter()
        .rev()
        .fold(Formula::iff(compiled.clone(), f.clone()), |body, v| Formula::forall(v, body));
    let verified = decide_with(&closed, Strategy::FourierMotzkin).map_err(qe_error)?;
    if !verified {
        return Err(CliError::Invariant(format!("compiled form of `{text}` is not equivalent to it")));
    }
    let printed = compiled.to_string();
    Ok(Outcome::new(
        "compile",
        json!({ "formula": text }),
        json!({ "primitive": printed, "verified": verified }),
        format!("{printed}\nverified: {verified}"),
    ))
}

pub fn selftest_cmd(seed: u64, iterations: Option<usize>) -> Result<Outcome, CliError> {
    let report = run_selftest(&SelftestConfig { seed, iterations });
    let mut text = String::new();
    for s in &report.suites {
        writeln!(text, "{}", s.summary()).unwrap();
    }
    let passed = report.suites.iter().filter(|s| s.passed()).count();
    write!(text, "{passed} of {} suites passed", report.suites.len()).unwrap();
    let status = if report.pass { Status::Success } else { Status::Violation };
    Ok(Outcome::new("selftest", json!({ "seed": seed, "iterations": iterations }), json(&report), text).with_status(status))
}

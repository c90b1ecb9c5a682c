use std::fs;
use std::path::Path;

use octarec::cube::{cube_evolve, cube_periodicity_check, random_prism_point, CubeEvolution, LevelState};
use octarec::document::{CubeDocument, PointsDocument, StateDocument};
use octarec::engine::SpaceTimeState;
use octarec::gen::{random_lattice_point, random_state};
use octarec::matchings::{count_matchings, enumerate_matchings, evaluate_formula, prepare, FormulaPath};
use octarec::variants::{
    half_equivalence_check, random_half_input, rotation_covariance_check, TriangleFace, TriangleState,
};
use octarec::{Domain, MaxPlus, PosRational, Section, SectionState, Semifield, SemifieldKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::report::{Failure, Report};
use crate::{Cli, Command};

type Outcome = Result<Report, Failure>;

macro_rules! dispatch {
    ($kind:expr, $f:ident ( $($arg:expr),* )) => {
        match $kind {
            SemifieldKind::Rational => $f::<PosRational>($($arg),*),
            SemifieldKind::Tropical => $f::<MaxPlus>($($arg),*),
        }
    };
}

pub fn run(cli: &Cli) -> Outcome {
    let rng = &mut ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Gen => dispatch!(cli.semifield, gen(cli, rng)),
        Command::Evolve { target, shift } => {
            let doc: StateDocument = read_input(cli)?;
            dispatch!(doc.semifield, evolve(cli, &doc, target.as_deref(), *shift))
        }
        Command::Value => {
            let doc: StateDocument = read_input(cli)?;
            dispatch!(doc.semifield, value(cli, &doc))
        }
        Command::Formula => {
            let doc: StateDocument = read_input(cli)?;
            dispatch!(doc.semifield, formula(cli, &doc))
        }
        Command::Matchings => {
            let doc: StateDocument = read_input(cli)?;
            dispatch!(doc.semifield, matchings(cli, &doc))
        }
        Command::Count => {
            let doc: StateDocument = read_input(cli)?;
            dispatch!(doc.semifield, count(cli, &doc))
        }
        Command::CheckPeriodicity => {
            let doc: Option<StateDocument> = read_optional(cli)?;
            let kind = doc.as_ref().map_or(cli.semifield, |d| d.semifield);
            dispatch!(kind, check_periodicity(cli, rng, doc.as_ref()))
        }
        Command::CheckQuarter => {
            let doc: Option<PointsDocument> = read_optional(cli)?;
            let kind = doc.as_ref().map_or(cli.semifield, |d| d.semifield);
            dispatch!(kind, check_quarter(cli, rng, doc.as_ref()))
        }
        Command::CheckHalf => {
            let doc: Option<PointsDocument> = read_optional(cli)?;
            let kind = doc.as_ref().map_or(cli.semifield, |d| d.semifield);
            dispatch!(kind, check_half(cli, rng, doc.as_ref()))
        }
        Command::CubeEvolve { steps } => {
            let doc: Option<CubeDocument> = read_optional(cli)?;
            let kind = doc.as_ref().map_or(cli.semifield, |d| d.semifield);
            dispatch!(kind, cube_evolve_cmd(cli, rng, doc.as_ref(), *steps))
        }
        Command::CubeCheck => {
            let doc: Option<CubeDocument> = read_optional(cli)?;
            let kind = doc.as_ref().map_or(cli.semifield, |d| d.semifield);
            dispatch!(kind, cube_check(cli, rng, doc.as_ref()))
        }
    }
}

fn read_optional<T: DeserializeOwned>(cli: &Cli) -> Result<Option<T>, Failure> {
    match &cli.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
            Ok(Some(serde_json::from_str(&text)?))
        }
        None => Ok(None),
    }
}

fn read_input<T: DeserializeOwned>(cli: &Cli) -> Result<T, Failure> {
    read_optional(cli)?.ok_or_else(|| Failure::invalid("--input is required"))
}

/// Writes a document to `--output`, or into the report when there is none.
fn emit_document(cli: &Cli, report: &mut Report, doc: Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&doc)?;
    match &cli.output {
        Some(path) => {
            fs::write(path, text + "\n")?;
            report.line(format!("wrote {}", path.display()));
        }
        None => report.line(text),
    }
    report.set("document", doc);
    Ok(())
}

/// Marks the report failed and dumps the offending input.
fn counterexample(cli: &Cli, report: &mut Report, case: usize, doc: Value) -> Result<(), Failure> {
    report.passed = false;
    let text = serde_json::to_string_pretty(&doc)?;
    match &cli.output {
        Some(path) => {
            fs::write(path, text + "\n")?;
            report.line(format!("counterexample (case {case}) written to {}", path.display()));
        }
        None => {
            report.line(format!("counterexample (case {case}):"));
            report.line(text);
        }
    }
    report.set("counterexample", doc);
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn gen<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng) -> Outcome {
    let (m, n) = (cli.m.unwrap_or(2), cli.n.unwrap_or(2));
    let state: SectionState<S> = random_state(m, n, rng)?;
    let mut report = Report::new();
    emit_document(cli, &mut report, serde_json::to_value(StateDocument::from_state(&state))?)?;
    Ok(report)
}

fn read_heights(path: &Path) -> Result<Vec<Vec<i64>>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    let heights = match value {
        Value::Object(mut obj) => obj.remove("heights").ok_or_else(|| Failure::invalid("target has no heights"))?,
        other => other,
    };
    Ok(serde_json::from_value(heights)?)
}

fn evolve<S: Semifield>(cli: &Cli, doc: &StateDocument, target: Option<&Path>, shift: i64) -> Outcome {
    let state: SectionState<S> = doc.to_state()?;
    let section = state.section();
    let target = match target {
        Some(path) => Section::checked(section.m(), section.n(), read_heights(path)?)?,
        None => {
            if shift % 2 != 0 {
                return Err(Failure::invalid("--shift must be even"));
            }
            Section::from_fn(section.m(), section.n(), |x, y| section.h(x, y) + shift)?
        }
    };
    let mut engine = SpaceTimeState::new(&state);
    engine.evolve_to(&target)?;
    let mut report = Report::new();
    emit_document(cli, &mut report, serde_json::to_value(StateDocument::from_state(&engine.current()))?)?;
    Ok(report)
}

fn value<S: Semifield>(cli: &Cli, doc: &StateDocument) -> Outcome {
    let state: SectionState<S> = doc.to_state()?;
    let p = cli.point()?;
    let v = SpaceTimeState::new(&state).value_at(p)?;
    let mut report = Report::new();
    report.line(format!("{p} = {v}"));
    report.set("point", p.to_string());
    report.set("value", v.to_string());
    Ok(report)
}

fn formula<S: Semifield>(cli: &Cli, doc: &StateDocument) -> Outcome {
    let state: SectionState<S> = doc.to_state()?;
    let p = cli.point()?;
    let outcome = evaluate_formula(&state, p, cli.path)?;
    let mut report = Report::new();
    let mut paths = Vec::new();
    for o in &outcome.paths {
        report.line(format!(
            "{}: value {}, constant {}, {} matchings, {} internal edges",
            o.path, o.value, o.constant, o.matchings, o.internal_edges
        ));
        paths.push(json!({
            "path": o.path.to_string(),
            "value": o.value.to_string(),
            "constant": o.constant.to_string(),
            "matchings": o.matchings,
            "internal_edges": o.internal_edges,
        }));
    }
    report.line(format!("{p} = {}", outcome.value));
    report.set("point", p.to_string());
    report.set("value", outcome.value.to_string());
    report.set("paths", paths);
    Ok(report)
}

fn matchings<S: Semifield>(cli: &Cli, doc: &StateDocument) -> Outcome {
    if cli.path == FormulaPath::Both {
        return Err(Failure::invalid("matchings needs --path wbar or --path general"));
    }
    let state: SectionState<S> = doc.to_state()?;
    let p = cli.point()?;
    let prepared = prepare(&state, p, cli.path)?;
    let complex = &prepared.complex;
    let mut report = Report::new();
    report.line(format!("constant {}", prepared.constant));
    let mut listed = Vec::new();
    for (i, m) in enumerate_matchings(complex).iter().enumerate() {
        let edges: Vec<String> = m
            .edges
            .iter()
            .map(|&e| {
                let edge = complex.edges()[e];
                format!("({})-({})", complex.vertices()[edge.a], complex.vertices()[edge.b])
            })
            .collect();
        let mono = prepared.monomial(&m.edges)?;
        report.line(format!("{i}: {mono} [{}]", edges.join(" ")));
        listed.push(json!({ "monomial": mono.to_string(), "edges": edges }));
    }
    report.line(format!("{} matchings", listed.len()));
    report.set("point", p.to_string());
    report.set("constant", prepared.constant.to_string());
    report.set("matchings", listed);
    Ok(report)
}

fn count<S: Semifield>(cli: &Cli, doc: &StateDocument) -> Outcome {
    let state: SectionState<S> = doc.to_state()?;
    let p = cli.point()?;
    let k = count_matchings(&state, p, cli.path)?;
    let mut report = Report::new();
    report.line(k.to_string());
    report.set("point", p.to_string());
    report.set("count", k);
    Ok(report)
}

fn check_periodicity<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng, doc: Option<&StateDocument>) -> Outcome {
    let states: Vec<SectionState<S>> = match doc {
        Some(d) => vec![d.to_state()?],
        None => {
            let (m, n) = (cli.m.unwrap_or(2), cli.n.unwrap_or(2));
            (0..cli.cases).map(|_| random_state(m, n, rng)).collect::<Result<_, _>>()?
        }
    };
    let mut report = Report::new();
    report.set("seed", cli.seed);
    let mut cases = Vec::new();
    for (i, state) in states.iter().enumerate() {
        let section = state.section();
        let (m, n) = (section.m(), section.n());
        let (lo, hi) = (section.min_height() - m - n - 2, section.max_height() + m + n + 2);
        let samples: Vec<_> = (0..cli.samples).map(|_| random_lattice_point(m, n, lo, hi, rng)).collect();
        let result = SpaceTimeState::new(state).periodicity_check(&samples)?;
        report.line(format!(
            "case {i}: {} c = {} (boundary {})",
            verdict(result.passed()),
            result.constant,
            result.boundary_constant
        ));
        for (p, r) in &result.ratios {
            report.line(format!("  {p}: {r}"));
        }
        cases.push(json!({
            "case": i,
            "passed": result.passed(),
            "c": result.constant.to_string(),
            "boundary_constant": result.boundary_constant.to_string(),
            "ratios": result.ratios.iter().map(|(p, r)| json!([p.to_string(), r.to_string()])).collect::<Vec<_>>(),
        }));
        if !result.passed() && report.passed {
            counterexample(cli, &mut report, i, serde_json::to_value(StateDocument::from_state(state))?)?;
        }
    }
    report.set("cases", cases);
    Ok(report)
}

fn check_quarter<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng, doc: Option<&PointsDocument>) -> Outcome {
    let states: Vec<TriangleState<S>> = match doc {
        Some(d) => vec![TriangleState::from_points(d.n, TriangleFace::Lower, &d.to_map()?)?],
        None => (0..cli.cases)
            .map(|_| TriangleState::random(cli.size(), TriangleFace::Lower, rng))
            .collect::<Result<_, _>>()?,
    };
    let mut report = Report::new();
    report.set("seed", cli.seed);
    let mut cases = Vec::new();
    for (i, state) in states.iter().enumerate() {
        let result = rotation_covariance_check(state)?;
        let scalar = result.scalar.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
        report.line(format!(
            "case {i}: {} scalar = {scalar} (expected {})",
            verdict(result.passed()),
            result.expected_scalar
        ));
        cases.push(json!({
            "case": i,
            "passed": result.passed(),
            "scalar": scalar,
            "expected_scalar": result.expected_scalar.to_string(),
        }));
        if !result.passed() && report.passed {
            let map = state.entries().map(|(p, v)| (p, v.clone())).collect();
            let dump = PointsDocument::from_map(Domain::Quadrant, state.n(), &map);
            counterexample(cli, &mut report, i, serde_json::to_value(dump)?)?;
        }
    }
    report.set("cases", cases);
    Ok(report)
}

fn check_half<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng, doc: Option<&PointsDocument>) -> Outcome {
    let inputs = match doc {
        Some(d) => vec![(d.n, d.to_map::<S>()?)],
        None => (0..cli.cases).map(|_| (cli.size(), random_half_input(cli.size(), rng))).collect(),
    };
    let mut report = Report::new();
    report.set("seed", cli.seed);
    let mut cases = Vec::new();
    for (i, (n, input)) in inputs.iter().enumerate() {
        let result = half_equivalence_check(*n, input)?;
        let scalar = result.scalar.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
        report.line(format!("case {i}: {} c = {scalar}", verdict(result.passed())));
        cases.push(json!({ "case": i, "passed": result.passed(), "c": scalar }));
        if !result.passed() && report.passed {
            let dump = PointsDocument::from_map(Domain::HalfStrip { n: *n }, *n, input);
            counterexample(cli, &mut report, i, serde_json::to_value(dump)?)?;
        }
    }
    report.set("cases", cases);
    Ok(report)
}

fn read_slab<S: Semifield>(
    cli: &Cli,
    rng: &mut ChaCha8Rng,
    doc: Option<&CubeDocument>,
) -> Result<LevelState<S>, Failure> {
    Ok(match doc {
        Some(d) => d.to_state()?,
        None => LevelState::random(cli.size(), 0, rng)?,
    })
}

fn cube_evolve_cmd<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng, doc: Option<&CubeDocument>, steps: i64) -> Outcome {
    let state: LevelState<S> = read_slab(cli, rng, doc)?;
    let out = cube_evolve(&state, steps)?;
    let mut report = Report::new();
    emit_document(cli, &mut report, serde_json::to_value(CubeDocument::from_state(&out))?)?;
    Ok(report)
}

fn cube_check<S: Semifield>(cli: &Cli, rng: &mut ChaCha8Rng, doc: Option<&CubeDocument>) -> Outcome {
    let slabs: Vec<LevelState<S>> = match doc {
        Some(_) => vec![read_slab(cli, rng, doc)?],
        None => (0..cli.cases).map(|_| read_slab(cli, rng, None)).collect::<Result<_, _>>()?,
    };
    let mut report = Report::new();
    report.set("seed", cli.seed);
    let mut cases = Vec::new();
    for (i, slab) in slabs.iter().enumerate() {
        let (n, level) = (slab.n(), slab.level());
        let samples: Vec<_> =
            (0..cli.samples).map(|_| random_prism_point(n, level - 2 * n, level + 2 + 4 * n, rng)).collect();
        let result = cube_periodicity_check(&mut CubeEvolution::new(slab), &samples)?;
        let c = result.constant.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
        report.line(format!("case {i}: {} c = {c}", verdict(result.passed())));
        for (p, r) in &result.ratios {
            report.line(format!("  {p}: {r}"));
        }
        cases.push(json!({
            "case": i,
            "passed": result.passed(),
            "c": c,
            "ratios": result.ratios.iter().map(|(p, r)| json!([p.to_string(), r.to_string()])).collect::<Vec<_>>(),
        }));
        if !result.passed() && report.passed {
            counterexample(cli, &mut report, i, serde_json::to_value(CubeDocument::from_state(slab))?)?;
        }
    }
    report.set("cases", cases);
    Ok(report)
}

//! One function per subcommand. Each returns what to print and whether the
//! answer was positive; `main` turns that into an exit code.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use episolve_core::equivalence::{frame_to_complex, model_to_simplicial, simplicial_to_model};
use episolve_core::logic::{product_update, ActionLibrary, ActionModel, CommonKnowledgeMode, Evaluator, Formula};
use episolve_core::protocol::{protocol_complex, protocol_model};
use episolve_core::tasks::{
    check_witness, decision_carried_by_delta, decisions, decorate_with_decisions, solve, SearchOptions, SimplicialTask,
};
use episolve_core::topology::{
    betti_numbers, complex_components, frame_components, obstruction_report, ObstructionVerdict,
};
use episolve_core::{ChromaticComplex, KripkeModel, Partition, SimplicialModel};

use crate::dot;
use crate::schema::{self, canonicalize, emit, load, read_document, to_json, Document, Loaded};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Kripke,
    Simplicial,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    /// False for "false", "unsolvable" and "obstructed" answers.
    pub positive: bool,
}

impl Outcome {
    fn new(stdout: String, warnings: Vec<String>, positive: bool) -> Self {
        Self {
            stdout,
            warnings,
            positive,
        }
    }
}

/// Canonical output is forced by `EPISOLVE_CANON=1`.
pub fn canonical_requested() -> bool {
    std::env::var("EPISOLVE_CANON").is_ok_and(|v| v == "1")
}

pub fn render(mut doc: Document) -> String {
    if canonical_requested() {
        canonicalize(&mut doc);
    }
    to_json(&doc)
}

fn report(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `doc` to `output` if given, otherwise returns it for stdout.
fn deliver(doc: Document, output: Option<&str>) -> Result<String> {
    let text = render(doc);
    match output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("cannot write {path}"))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn open(path: &str, warnings: &mut Vec<String>) -> Result<Loaded> {
    let doc = read_document(path)?;
    load(&doc, warnings).with_context(|| path.to_string())
}

fn as_model(l: Loaded, path: &str) -> Result<KripkeModel> {
    match l {
        Loaded::Kripke(m) => Ok(m),
        Loaded::Simplicial(sm) => Ok(simplicial_to_model(&sm)),
        other => bail!("{path}: expected a kripke or simplicial document, got {}", other.kind()),
    }
}

pub fn validate(path: &str) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let l = open(path, &mut warnings)?;
    let mut info = json!({ "valid": true, "kind": l.kind(), "warnings": warnings });
    match &l {
        Loaded::Kripke(m) => {
            info["states"] = json!(m.len());
            info["proper"] = json!(episolve_core::kripke::is_proper(m.frame()));
        }
        Loaded::Simplicial(sm) => {
            info["vertices"] = json!(sm.complex().num_vertices());
            info["facets"] = json!(sm.complex().num_facets());
        }
        Loaded::Action(a) => info["points"] = json!(a.len()),
        Loaded::Task(t) => {
            let carrier = episolve_core::tasks::validate_carrier(t);
            info["valid"] = json!(carrier.is_ok());
            info["errors"] = json!(carrier.errors);
            info["warnings"] = json!(warnings.iter().chain(&carrier.warnings).collect::<Vec<_>>());
            if !carrier.is_ok() {
                bail!("{path}: invalid task\n{}", report(info));
            }
        }
    }
    Ok(Outcome::new(report(info), warnings, true))
}

pub fn convert(path: &str, to: Kind, output: Option<&str>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let doc = match (open(path, &mut warnings)?, to) {
        (Loaded::Kripke(m), Kind::Kripke) => emit(&Loaded::Kripke(m)),
        (Loaded::Kripke(m), Kind::Simplicial) => {
            Document::Simplicial(schema::emit_simplicial(&model_to_simplicial(&m)?))
        }
        (Loaded::Simplicial(sm), Kind::Kripke) => Document::Kripke(schema::emit_kripke(&simplicial_to_model(&sm))),
        (Loaded::Simplicial(sm), Kind::Simplicial) => emit(&Loaded::Simplicial(sm)),
        (other, _) => bail!("{path}: cannot convert a {} document", other.kind()),
    };
    Ok(Outcome::new(deliver(doc, output)?, warnings, true))
}

fn open_action(path: &str, warnings: &mut Vec<String>) -> Result<ActionModel> {
    match open(path, warnings)? {
        Loaded::Action(a) => Ok(a),
        other => bail!("{path}: expected an action document, got {}", other.kind()),
    }
}

pub fn update(model: &str, action: &str, output: Option<&str>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let m = as_model(open(model, &mut warnings)?, model)?;
    let a = open_action(action, &mut warnings)?;
    let u = product_update(&m, &a)?;
    if !u.proper {
        warnings.push("product is not proper: some states are indistinguishable to every agent".into());
    }
    Ok(Outcome::new(
        deliver(Document::Kripke(schema::emit_kripke(&u.model)), output)?,
        warnings,
        true,
    ))
}

pub fn protocol(path: &str, rounds: usize, to: Option<Kind>, output: Option<&str>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let doc = match open(path, &mut warnings)? {
        Loaded::Kripke(m) if to != Some(Kind::Simplicial) => {
            Document::Kripke(schema::emit_kripke(&protocol_model(&m, rounds)?.0))
        }
        Loaded::Kripke(m) => Document::Simplicial(schema::emit_simplicial(
            &protocol_complex(&model_to_simplicial(&m)?, rounds)?.model,
        )),
        Loaded::Simplicial(sm) => {
            let p = protocol_complex(&sm, rounds)?.model;
            match to {
                Some(Kind::Kripke) => Document::Kripke(schema::emit_kripke(&simplicial_to_model(&p))),
                _ => Document::Simplicial(schema::emit_simplicial(&p)),
            }
        }
        other => bail!("{path}: expected a kripke or simplicial document, got {}", other.kind()),
    };
    Ok(Outcome::new(deliver(doc, output)?, warnings, true))
}

pub fn check(
    path: &str,
    state: Option<&str>,
    formula: &str,
    actions: &[String],
    mode: CommonKnowledgeMode,
) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let m = as_model(open(path, &mut warnings)?, path)?;
    let f = Formula::parse(formula).context("formula")?;
    let mut lib = ActionLibrary::new();
    for spec in actions {
        let (name, file) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--action expects NAME=FILE, got {spec}"))?;
        lib.insert(name, open_action(file, &mut warnings)?);
    }
    let ev = Evaluator::new().with_actions(&lib).with_mode(mode);
    let (value, info) = match state {
        Some(s) => {
            let idx = m.frame().state_index(s)?;
            let v = ev.eval(&m, idx, &f)?;
            (v, json!({ "state": s, "formula": f.to_string(), "value": v }))
        }
        None => {
            let ext = ev.extension(&m, &f)?;
            let at: Vec<&str> = (0..m.len())
                .filter(|&s| ext[s])
                .map(|s| m.frame().state_name(s))
                .collect();
            let all = at.len() == m.len();
            (all, json!({ "formula": f.to_string(), "holds_at": at, "value": all }))
        }
    };
    Ok(Outcome::new(report(info), warnings, value))
}

pub fn open_task(path: &str, warnings: &mut Vec<String>) -> Result<episolve_core::tasks::TaskSpec> {
    match open(path, warnings)? {
        Loaded::Task(t) => Ok(t),
        other => bail!("{path}: expected a task document, got {}", other.kind()),
    }
}

pub fn solve_task(path: &str, rounds: usize, seed: Option<u64>, witness: Option<&str>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let task = open_task(path, &mut warnings)?;
    let sol = solve(&task, rounds, SearchOptions { seed })?;
    let p = sol.protocol.model.complex();
    let mut info = json!({
        "verdict": if sol.verdict.solvable { "Solvable" } else { "Unsolvable" },
        "rounds": rounds,
        "protocol_facets": p.num_facets(),
        "delta_facets": sol.task.delta.num_facets(),
        "nodes": sol.verdict.stats.nodes,
    });
    if let (Some(h), Some(d)) = (&sol.verdict.witness, &sol.decision) {
        info["witness_checked"] = json!(check_witness(
            h,
            p,
            &sol.protocol.projection,
            &sol.task.delta,
            &sol.task.delta_to_input
        ));
        info["carried_by_delta"] = json!(decision_carried_by_delta(p, &sol.protocol.projection, d, &sol.task));
        info["decisions"] = json!(decisions(p, d, &sol.task.output)
            .iter()
            .map(|x| json!({ "vertex": x.vertex, "agent": x.agent, "output": x.output_vertex, "literals": x.literals }))
            .collect::<Vec<_>>());
        if let Some(out) = witness {
            let decorated = decorate_with_decisions(&sol.protocol.model, d, &sol.task.output)?;
            deliver(Document::Simplicial(schema::emit_simplicial(&decorated)), Some(out))?;
        }
    } else if let Some(out) = witness {
        warnings.push(format!(
            "no witness written to {out}: task is unsolvable in {rounds} rounds"
        ));
    }
    Ok(Outcome::new(report(info), warnings, sol.verdict.solvable))
}

fn parse_group(m: &episolve_core::AgentSet, group: Option<&str>) -> Result<Option<Vec<episolve_core::Agent>>> {
    group
        .map(|g| {
            let names: Vec<&str> = g.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let agents = m.group(&names)?;
            if agents.is_empty() {
                bail!("empty --group");
            }
            Ok(agents)
        })
        .transpose()
}

fn blocks_named(p: &Partition, name: impl Fn(usize) -> String) -> Vec<Vec<String>> {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&x| name(x)).collect())
        .collect()
}

pub fn components(path: &str, group: Option<&str>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let (of, blocks) = match open(path, &mut warnings)? {
        Loaded::Kripke(m) => {
            let g = parse_group(m.agents(), group)?;
            let p = frame_components(m.frame(), g.as_deref());
            ("states", blocks_named(&p, |s| m.frame().state_name(s).to_string()))
        }
        Loaded::Simplicial(sm) => {
            let c = sm.complex();
            let g = parse_group(c.agents(), group)?;
            (
                "facets",
                blocks_named(&complex_components(c, g.as_deref()), |f| c.facet_name(f)),
            )
        }
        Loaded::Task(t) => {
            let st = SimplicialTask::new(&t)?;
            let g = parse_group(st.delta.agents(), group)?;
            let frame = st.submodel.model.frame();
            (
                "delta",
                blocks_named(&frame_components(frame, g.as_deref()), |s| {
                    frame.state_name(s).to_string()
                }),
            )
        }
        other => bail!("{path}: no components for a {} document", other.kind()),
    };
    let info = json!({ "of": of, "count": blocks.len(), "components": blocks });
    Ok(Outcome::new(report(info), warnings, true))
}

fn complex_of(l: Loaded, path: &str, rounds: Option<usize>) -> Result<(&'static str, ChromaticComplex)> {
    let sm: SimplicialModel = match l {
        Loaded::Kripke(m) => SimplicialModel::bare(frame_to_complex(m.frame())?),
        Loaded::Simplicial(sm) => sm,
        Loaded::Task(t) => {
            if rounds.is_some() {
                bail!("--rounds applies to kripke and simplicial inputs; use obstruct for tasks");
            }
            return Ok(("delta", SimplicialTask::new(&t)?.delta));
        }
        other => bail!("{path}: no complex for a {} document", other.kind()),
    };
    match rounds {
        Some(r) => Ok(("protocol", protocol_complex(&sm, r)?.model.complex().clone())),
        None => Ok(("complex", sm.complex().clone())),
    }
}

pub fn betti(path: &str, rounds: Option<usize>) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let (of, c) = complex_of(open(path, &mut warnings)?, path, rounds)?;
    let (b0, b1) = betti_numbers(&c)?;
    let info = json!({ "of": of, "facets": c.num_facets(), "beta0": b0, "beta1": b1 });
    Ok(Outcome::new(report(info), warnings, true))
}

pub fn obstruct(path: &str, rounds: usize) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let task = open_task(path, &mut warnings)?;
    let st = SimplicialTask::new(&task)?;
    let pc = protocol_complex(&st.input, rounds)?;
    let r = obstruction_report(pc.model.complex(), &pc.projection, st.input.complex(), &st.delta)?;
    let obstructed = r.verdict == ObstructionVerdict::Obstructed;
    let info = json!({
        "verdict": if obstructed { "OBSTRUCTED" } else { "INCONCLUSIVE" },
        "rounds": rounds,
        "projection_h1_rank": r.projection_h1_rank,
        "delta_beta1": r.delta_beta1,
        "summary": r.to_string(),
    });
    Ok(Outcome::new(report(info), warnings, !obstructed))
}

pub fn export_dot(path: &str) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let text = match open(path, &mut warnings)? {
        Loaded::Kripke(m) => dot::kripke(&m),
        Loaded::Simplicial(sm) => dot::simplicial(&sm),
        Loaded::Action(a) => dot::action(&a),
        Loaded::Task(t) => dot::kripke(&SimplicialTask::new(&t)?.submodel.model),
    };
    Ok(Outcome::new(text, warnings, true))
}

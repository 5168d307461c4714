//! Browser bindings: analyse, diagnose and export from a single static page.
//!
//! Every entry point takes the input text, its kind (`"mc"` or `"aut"`), the
//! variant number and a comma-separated property-variable list, and returns
//! JSON or plain text.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use influence::analysis::{export_blk, matching_table, Analyzer, BlkOptions};
use influence::frontend::compile;
use influence::lts::{read_aut, write_aut};
use influence::pbes::Dep;
use influence::{IaVariant, Lts, StateId, VarId};

#[derive(Serialize)]
struct Edge {
    from: StateId,
    label: String,
    to: StateId,
}

#[derive(Serialize)]
struct Row<'a> {
    id: StateId,
    keep: &'a std::collections::BTreeSet<VarId>,
    hide: &'a std::collections::BTreeSet<VarId>,
}

#[derive(Serialize)]
struct Analysis<'a> {
    variant: String,
    num_states: usize,
    initial: StateId,
    transitions: Vec<Edge>,
    universe: Vec<VarId>,
    states: Vec<Row<'a>>,
    aut: String,
}

#[derive(Serialize)]
struct DiagnosticView {
    key: String,
    verdict: bool,
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    witness: Vec<String>,
    dot: String,
}

fn load(source: &str, kind: &str) -> Result<Lts, String> {
    match kind {
        "aut" => read_aut(source).map_err(|e| e.to_string()),
        "mc" => compile(source).map_err(|e| e.to_string()),
        other => Err(format!("unknown input kind {other:?}")),
    }
}

fn variant(ia: u8, property_vars: &str) -> Result<IaVariant, String> {
    let props: Vec<VarId> = property_vars
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| VarId::new(p).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match ia {
        1..=3 if !props.is_empty() => Err("property variables need IA4".into()),
        1 => Ok(IaVariant::Ia1),
        2 => Ok(IaVariant::Ia2),
        3 => Ok(IaVariant::Ia3),
        4 => Ok(IaVariant::ia4(props)),
        n => Err(format!("unknown variant {n}")),
    }
}

pub fn analyze_json(
    source: &str,
    kind: &str,
    ia: u8,
    property_vars: &str,
) -> Result<String, String> {
    let lts = load(source, kind)?;
    let variant = variant(ia, property_vars)?;
    let d = Analyzer::new(&lts, variant.clone())
        .and_then(|mut a| a.run())
        .map_err(|e| e.to_string())?;
    let universe = lts.var_universe();
    let table = matching_table(&d, &universe);
    let view = Analysis {
        variant: variant.to_string(),
        num_states: lts.num_states(),
        initial: lts.initial(),
        transitions: lts
            .transitions()
            .iter()
            .map(|t| Edge {
                from: t.from,
                label: t.label.to_string(),
                to: t.to,
            })
            .collect(),
        universe: universe.iter().cloned().collect(),
        states: table
            .iter()
            .map(|(id, e)| Row {
                id,
                keep: &e.keep,
                hide: &e.hide,
            })
            .collect(),
        aut: write_aut(&lts),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

pub fn diagnose_json(
    source: &str,
    kind: &str,
    ia: u8,
    property_vars: &str,
    state: StateId,
    var: &str,
) -> Result<String, String> {
    let lts = load(source, kind)?;
    let variant = variant(ia, property_vars)?;
    let var = VarId::new(var).map_err(|e| e.to_string())?;
    let mut analyzer = Analyzer::new(&lts, variant).map_err(|e| e.to_string())?;
    let d = analyzer
        .diagnostic(state, &var)
        .map_err(|e| e.to_string())?;
    let view = DiagnosticView {
        key: d.root.to_string(),
        verdict: d.verdict,
        nodes: d.nodes.iter().map(ToString::to_string).collect(),
        edges: d
            .edges
            .iter()
            .map(|(from, to)| {
                let to = match to {
                    Dep::True => "TRUE".to_string(),
                    Dep::Node(k) => k.to_string(),
                };
                (from.to_string(), to)
            })
            .collect(),
        witness: d.witness.iter().map(ToString::to_string).collect(),
        dot: d.to_dot(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

pub fn blk_text(
    source: &str,
    kind: &str,
    ia: u8,
    property_vars: &str,
    eval: &str,
) -> Result<String, String> {
    let lts = load(source, kind)?;
    let variant = variant(ia, property_vars)?;
    let eval = match eval.trim() {
        "" => None,
        v => Some(VarId::new(v).map_err(|e| e.to_string())?),
    };
    let opts = BlkOptions {
        eval,
        ..BlkOptions::default()
    };
    export_blk(&lts, &variant, &opts).map_err(|e| e.to_string())
}

/// JSON with the LTS (states, transitions) and the keep/hide table.
#[wasm_bindgen]
pub fn analyze(source: &str, kind: &str, ia: u8, property_vars: &str) -> Result<String, JsError> {
    analyze_json(source, kind, ia, property_vars).map_err(|e| JsError::new(&e))
}

/// JSON diagnostic of `Y_state(var)`, including its DOT rendering.
#[wasm_bindgen]
pub fn diagnose(
    source: &str,
    kind: &str,
    ia: u8,
    property_vars: &str,
    state: usize,
    var: &str,
) -> Result<String, JsError> {
    diagnose_json(source, kind, ia, property_vars, state, var).map_err(|e| JsError::new(&e))
}

/// The modal equation block; `eval` may be empty.
#[wasm_bindgen]
pub fn blk(
    source: &str,
    kind: &str,
    ia: u8,
    property_vars: &str,
    eval: &str,
) -> Result<String, JsError> {
    blk_text(source, kind, ia, property_vars, eval).map_err(|e| JsError::new(&e))
}

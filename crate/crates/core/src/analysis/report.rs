use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::MatchingTable;
use crate::lts::{StateId, VarId};
use crate::pbes::IaVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown report format {0:?} (expected `table` or `json`)")]
pub struct UnknownFormat(pub String);

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

const IA3_NOTE: &str = "IA3 is evaluated with the IA2 equations";

#[derive(Serialize)]
struct JsonReport<'a> {
    variant: String,
    property_vars: Vec<&'a VarId>,
    universe: Vec<&'a VarId>,
    states: Vec<JsonState<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

#[derive(Serialize)]
struct JsonState<'a> {
    id: StateId,
    keep: &'a BTreeSet<VarId>,
    hide: &'a BTreeSet<VarId>,
}

fn join(vars: &BTreeSet<VarId>) -> String {
    if vars.is_empty() {
        "-".to_string()
    } else {
        vars.iter().map(VarId::as_str).collect::<Vec<_>>().join(",")
    }
}

/// Renders the matching table. States ascend and variable lists are sorted,
/// so equal inputs give byte-identical output.
pub fn report(
    variant: &IaVariant,
    universe: &BTreeSet<VarId>,
    table: &MatchingTable,
    format: Format,
) -> String {
    let note = matches!(variant, IaVariant::Ia3).then_some(IA3_NOTE);
    let empty = BTreeSet::new();
    let props = variant.property_vars().unwrap_or(&empty);
    match format {
        Format::Table => {
            let mut out = String::new();
            let _ = write!(out, "# {variant}  universe: {}", join(universe));
            if matches!(variant, IaVariant::Ia4(_)) {
                let _ = write!(out, "  property: {}", join(props));
            }
            out.push('\n');
            if let Some(note) = note {
                let _ = writeln!(out, "# {note}");
            }
            for (s, e) in table.iter() {
                let _ = writeln!(
                    out,
                    "{s}  keep: {}   hide: {}",
                    join(&e.keep),
                    join(&e.hide)
                );
            }
            out
        }
        Format::Json => {
            let doc = JsonReport {
                variant: variant.to_string(),
                property_vars: props.iter().collect(),
                universe: universe.iter().collect(),
                states: table
                    .iter()
                    .map(|(id, e)| JsonState {
                        id,
                        keep: &e.keep,
                        hide: &e.hide,
                    })
                    .collect(),
                note,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("report serialises");
            text.push('\n');
            text
        }
    }
}

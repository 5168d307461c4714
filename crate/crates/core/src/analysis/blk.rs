//! Parameterless modal equation block (`.blk`) export.
//!
//! `Y(v)` is split so every right-hand side carries one operator, then
//! instantiated for each program variable `x`:
//!
//! ```text
//! Y1_x = Y2_x or Y3_x
//! Y2_x = < "BOOL x" > TRUE
//! Y3_x = Y4_x or Y5_x
//! Y4_x = < "ASSIGN z x" > Y1_z            (one disjunct per other z)
//! Y5_x = < not ("ASSIGN x z") > Y1_x
//! ```

use std::fmt::Write;

use thiserror::Error;

use crate::lts::{Lts, VarId};
use crate::pbes::IaVariant;

/// Above this many variables the quadratic output is refused unless forced.
pub const DEFAULT_MAX_BLK_VARS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlkOptions {
    /// Variable named in the trailing `eval B:Y1_<v>` clause.
    pub eval: Option<VarId>,
    pub max_vars: usize,
    pub force: bool,
}

impl Default for BlkOptions {
    fn default() -> Self {
        BlkOptions {
            eval: None,
            max_vars: DEFAULT_MAX_BLK_VARS,
            force: false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlkError {
    #[error(
        "{count} variables would give a block of {equations} equations with quadratic \
         right-hand sides (limit {max}); pass force to export anyway"
    )]
    TooManyVariables {
        count: usize,
        equations: usize,
        max: usize,
    },
    #[error("eval variable `{0}` does not occur in the LTS")]
    UnknownEvalVar(VarId),
}

fn action_or(labels: &[String]) -> String {
    labels.join(" or ")
}

/// Text of the modal equation block for the variables of `l`.
///
/// IA1 gives exactly the five-equation schema; IA2/IA3 also accept
/// `"ASSERT x"` in `Y2_x`, and IA4 accepts `"ASSIGN w x"` for each property
/// variable `w`.
pub fn export_blk(l: &Lts, variant: &IaVariant, opts: &BlkOptions) -> Result<String, BlkError> {
    let universe: Vec<VarId> = l.var_universe().into_iter().collect();
    if universe.len() > opts.max_vars && !opts.force {
        return Err(BlkError::TooManyVariables {
            count: universe.len(),
            equations: 5 * universe.len(),
            max: opts.max_vars,
        });
    }
    if let Some(e) = &opts.eval {
        if !universe.contains(e) {
            return Err(BlkError::UnknownEvalVar(e.clone()));
        }
    }

    let mut out = String::from("block mu B is\n");
    for x in &universe {
        let others: Vec<&VarId> = universe.iter().filter(|z| *z != x).collect();
        // with a single variable the only assignment reading x is x := f(x)
        let partners: Vec<&VarId> = if others.is_empty() { vec![x] } else { others };

        let mut tests = vec![format!("\"BOOL {x}\"")];
        if variant.counts_assertions() {
            tests.push(format!("\"ASSERT {x}\""));
        }
        if let Some(props) = variant.property_vars() {
            tests.extend(props.iter().map(|w| format!("\"ASSIGN {w} {x}\"")));
        }
        let flows: Vec<String> = partners
            .iter()
            .map(|z| format!("< \"ASSIGN {z} {x}\" > Y1_{z}"))
            .collect();
        let kills: Vec<String> = partners
            .iter()
            .map(|z| format!("\"ASSIGN {x} {z}\""))
            .collect();

        let _ = writeln!(out, "   Y1_{x} = Y2_{x} or Y3_{x}");
        let _ = writeln!(out, "   Y2_{x} = < {} > TRUE", action_or(&tests));
        let _ = writeln!(out, "   Y3_{x} = Y4_{x} or Y5_{x}");
        let _ = writeln!(out, "   Y4_{x} = {}", flows.join(" or "));
        let _ = writeln!(out, "   Y5_{x} = < not ({}) > Y1_{x}", action_or(&kills));
    }
    out.push_str("end block\n");
    if let Some(e) = &opts.eval {
        let _ = writeln!(out, "eval B:Y1_{e}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::read_aut;

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    #[test]
    fn single_variable_uses_self_assignment() {
        let lts = read_aut("des (0, 1, 2)\n(0, \"BOOL x\", 1)\n").unwrap();
        let text = export_blk(&lts, &IaVariant::Ia1, &BlkOptions::default()).unwrap();
        assert!(text.contains("   Y4_x = < \"ASSIGN x x\" > Y1_x\n"));
        assert!(text.contains("   Y5_x = < not (\"ASSIGN x x\") > Y1_x\n"));
        assert!(!text.contains("eval"));
    }

    #[test]
    fn three_variables() {
        let lts = read_aut("des (0, 2, 2)\n(0, \"ASSIGN a b\", 1)\n(1, \"BOOL c\", 0)\n").unwrap();
        let text = export_blk(&lts, &IaVariant::Ia1, &BlkOptions::default()).unwrap();
        assert!(text.contains("   Y4_a = < \"ASSIGN b a\" > Y1_b or < \"ASSIGN c a\" > Y1_c\n"));
        assert!(text.contains("   Y5_b = < not (\"ASSIGN b a\" or \"ASSIGN b c\") > Y1_b\n"));
        assert_eq!(text.lines().count(), 2 + 15);
    }

    #[test]
    fn variant_tests() {
        let lts = read_aut("des (0, 1, 2)\n(0, \"ASSIGN w x\", 1)\n").unwrap();
        let ia2 = export_blk(&lts, &IaVariant::Ia2, &BlkOptions::default()).unwrap();
        assert!(ia2.contains("   Y2_x = < \"BOOL x\" or \"ASSERT x\" > TRUE\n"));
        let ia4 = export_blk(&lts, &IaVariant::ia4([v("w")]), &BlkOptions::default()).unwrap();
        assert!(ia4.contains("   Y2_x = < \"BOOL x\" or \"ASSIGN w x\" > TRUE\n"));
    }

    #[test]
    fn limits_and_eval() {
        let lts = read_aut("des (0, 1, 2)\n(0, \"ASSIGN a b\", 1)\n").unwrap();
        let tight = BlkOptions {
            max_vars: 1,
            ..BlkOptions::default()
        };
        assert!(matches!(
            export_blk(&lts, &IaVariant::Ia1, &tight),
            Err(BlkError::TooManyVariables { count: 2, .. })
        ));
        let forced = BlkOptions {
            force: true,
            eval: Some(v("b")),
            ..tight
        };
        let text = export_blk(&lts, &IaVariant::Ia1, &forced).unwrap();
        assert!(text.ends_with("end block\neval B:Y1_b\n"));
        let bad = BlkOptions {
            eval: Some(v("q")),
            ..BlkOptions::default()
        };
        assert_eq!(
            export_blk(&lts, &IaVariant::Ia1, &bad),
            Err(BlkError::UnknownEvalVar(v("q")))
        );
    }
}

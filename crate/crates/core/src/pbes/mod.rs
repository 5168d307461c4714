//! Boolean equation systems and the projected influence-analysis system.
//!
//! The influence property is a single least-fixed-point block of
//! parameterised modal equations `Y(v:Var)`. Projecting it on an LTS state
//! `s` and a variable `v` gives one plain boolean variable `Y_s(v)` whose
//! right-hand side is a disjunction computed by [`expand`].

mod bes;
mod projection;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use bes::{Bes, Block, Equation, Operand};
pub(crate) use projection::Projection;
pub use projection::{expand, global_solve, GlobalSolution};

use crate::lts::{StateId, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbesError {
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("variable `{0}` does not occur in the LTS")]
    UnknownVariable(VarId),
    #[error("boolean variable {0} is defined more than once")]
    Redefined(String),
    #[error("boolean variable {0} is used but never defined")]
    Undefined(String),
    #[error("block {from} depends on earlier block {to}; blocks must be topologically ordered")]
    BlockOrder { from: usize, to: usize },
    #[error("unknown influence analysis {0:?} (expected 1, 2, 3 or 4)")]
    UnknownVariant(String),
}

/// Fixed-point sign of an equation block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Mu,
    Nu,
}

/// Right-hand-side operator. `Or` over nothing is false, `And` over nothing
/// is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Or,
    And,
}

/// Which influence analysis is being encoded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IaVariant {
    /// Reachability: only boolean tests make a variable needed.
    Ia1,
    /// Safety: assertions count as tests too.
    Ia2,
    /// Global variables; same equations as `Ia2`.
    Ia3,
    /// Temporal properties over the given variables.
    Ia4(BTreeSet<VarId>),
}

impl IaVariant {
    pub fn ia4(vars: impl IntoIterator<Item = VarId>) -> Self {
        IaVariant::Ia4(vars.into_iter().collect())
    }

    pub fn number(&self) -> u8 {
        match self {
            IaVariant::Ia1 => 1,
            IaVariant::Ia2 => 2,
            IaVariant::Ia3 => 3,
            IaVariant::Ia4(_) => 4,
        }
    }

    pub fn counts_assertions(&self) -> bool {
        matches!(self, IaVariant::Ia2 | IaVariant::Ia3)
    }

    /// Variables of the external temporal property (IA4 only).
    pub fn property_vars(&self) -> Option<&BTreeSet<VarId>> {
        match self {
            IaVariant::Ia4(vars) => Some(vars),
            _ => None,
        }
    }
}

impl fmt::Display for IaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IA{}", self.number())
    }
}

impl FromStr for IaVariant {
    type Err = PbesError;

    /// `1`..`4` or `IA1`..`IA4`. IA4 is returned with no property variables.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = t
            .strip_prefix("IA")
            .or_else(|| t.strip_prefix("ia"))
            .unwrap_or(t);
        match digits {
            "1" => Ok(IaVariant::Ia1),
            "2" => Ok(IaVariant::Ia2),
            "3" => Ok(IaVariant::Ia3),
            "4" => Ok(IaVariant::Ia4(BTreeSet::new())),
            _ => Err(PbesError::UnknownVariant(s.to_string())),
        }
    }
}

/// Identity of the projected variable `Y_state(var)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesNodeKey {
    pub variant: IaVariant,
    pub state: StateId,
    pub var: VarId,
}

impl BesNodeKey {
    pub fn new(variant: IaVariant, state: StateId, var: VarId) -> Self {
        BesNodeKey {
            variant,
            state,
            var,
        }
    }
}

impl fmt::Display for BesNodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y_{}_{}", self.state, self.var)
    }
}

/// A right-hand-side operand of a projected equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dep {
    /// The constant `true` reached through a `<BOOL v> true`-like modality.
    True,
    Node(BesNodeKey),
}

/// One projected equation `key = op deps`, with its resolution status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesNode {
    pub key: BesNodeKey,
    pub op: Op,
    pub deps: Vec<Dep>,
    pub value: bool,
    pub stable: bool,
}

impl BesNode {
    /// Builds a disjunctive node; a TRUE leaf makes it stable-true and an
    /// empty disjunction makes it stable-false.
    pub fn disjunction(key: BesNodeKey, deps: Vec<Dep>) -> Self {
        let has_true = deps.contains(&Dep::True);
        let stable = has_true || deps.is_empty();
        BesNode {
            key,
            op: Op::Or,
            deps,
            value: has_true,
            stable,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_parsing() {
        assert_eq!("1".parse::<IaVariant>().unwrap(), IaVariant::Ia1);
        assert_eq!("IA3".parse::<IaVariant>().unwrap(), IaVariant::Ia3);
        assert_eq!(
            "ia4".parse::<IaVariant>().unwrap(),
            IaVariant::Ia4(BTreeSet::new())
        );
        assert!("5".parse::<IaVariant>().is_err());
        assert_eq!(IaVariant::Ia2.to_string(), "IA2");
    }

    #[test]
    fn node_status_from_leaves() {
        let key = BesNodeKey::new(IaVariant::Ia1, 0, VarId::new("x").unwrap());
        let empty = BesNode::disjunction(key.clone(), vec![]);
        assert!(empty.stable && !empty.value);
        let leaf = BesNode::disjunction(key.clone(), vec![Dep::True]);
        assert!(leaf.stable && leaf.value);
        let open = BesNode::disjunction(key.clone(), vec![Dep::Node(key)]);
        assert!(!open.stable && !open.value);
    }
}

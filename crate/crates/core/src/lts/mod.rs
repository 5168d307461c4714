//! Labeled transition systems with BOOL / ASSIGN / ASSERT labels.

mod aut;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aut::{read_aut, write_aut, AutError};

/// Dense state identifier, `0..num_states`.
pub type StateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtsError {
    #[error("invalid variable name {0:?}")]
    InvalidVar(String),
    #[error("unrecognised action label {0:?}")]
    InvalidLabel(String),
    #[error("an LTS needs at least one state")]
    NoStates,
    #[error("initial state {initial} is out of range (states: {num_states})")]
    InitialOutOfRange { initial: StateId, num_states: usize },
    #[error("transition {from} -> {to} leaves the state range (states: {num_states})")]
    TransitionOutOfRange {
        from: StateId,
        to: StateId,
        num_states: usize,
    },
    #[error("unknown state {0}")]
    UnknownState(StateId),
}

/// A program variable name, `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VarId(String);

impl VarId {
    pub fn new(name: impl Into<String>) -> Result<Self, LtsError> {
        let name = name.into();
        if Self::is_valid(&name) {
            Ok(VarId(name))
        } else {
            Err(LtsError::InvalidVar(name))
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VarId {
    type Err = LtsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarId::new(s)
    }
}

impl TryFrom<String> for VarId {
    type Error = LtsError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        VarId::new(s)
    }
}

impl From<VarId> for String {
    fn from(v: VarId) -> String {
        v.0
    }
}

/// A transition label after splitting: every label mentions at most two
/// variables.
///
/// The derived ordering (kind first, then variable names) is the order in
/// which [`Lts::successors`] reports transitions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionLabel {
    Tau,
    Bool(VarId),
    Assert(VarId),
    /// `ASSIGN target source`, or the unary `ASSIGN target` for an
    /// assignment whose right-hand side reads no variable.
    Assign {
        target: VarId,
        source: Option<VarId>,
    },
}

impl ActionLabel {
    pub fn assign(target: VarId, source: VarId) -> Self {
        ActionLabel::Assign {
            target,
            source: Some(source),
        }
    }

    pub fn assign_const(target: VarId) -> Self {
        ActionLabel::Assign {
            target,
            source: None,
        }
    }

    /// True for `ASSIGN v _` and the unary `ASSIGN v`.
    pub fn assigns_to(&self, v: &VarId) -> bool {
        matches!(self, ActionLabel::Assign { target, .. } if target == v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        let (a, b) = match self {
            ActionLabel::Tau => (None, None),
            ActionLabel::Bool(v) | ActionLabel::Assert(v) => (Some(v), None),
            ActionLabel::Assign { target, source } => (Some(target), source.as_ref()),
        };
        a.into_iter().chain(b)
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, ActionLabel::Tau)
    }
}

impl fmt::Display for ActionLabel {
    /// `i` for the invisible action, otherwise the space separated label text
    /// (without quotes).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionLabel::Tau => f.write_str("i"),
            ActionLabel::Bool(v) => write!(f, "BOOL {v}"),
            ActionLabel::Assert(v) => write!(f, "ASSERT {v}"),
            ActionLabel::Assign {
                target,
                source: Some(s),
            } => write!(f, "ASSIGN {target} {s}"),
            ActionLabel::Assign {
                target,
                source: None,
            } => write!(f, "ASSIGN {target}"),
        }
    }
}

impl FromStr for ActionLabel {
    type Err = LtsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LtsError::InvalidLabel(s.to_string());
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let var = |t: &str| VarId::new(t).map_err(|_| bad());
        match tokens.as_slice() {
            ["i"] => Ok(ActionLabel::Tau),
            ["BOOL", v] => Ok(ActionLabel::Bool(var(v)?)),
            ["ASSERT", v] => Ok(ActionLabel::Assert(var(v)?)),
            ["ASSIGN", t] => Ok(ActionLabel::assign_const(var(t)?)),
            ["ASSIGN", t, v] => Ok(ActionLabel::assign(var(t)?, var(v)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub label: ActionLabel,
    pub to: StateId,
}

impl Transition {
    pub fn new(from: StateId, label: ActionLabel, to: StateId) -> Self {
        Transition { from, label, to }
    }
}

/// A finite LTS `<S, A, T, s0>` with states `0..num_states`.
///
/// Transitions keep their insertion order (this is the order `write_aut`
/// emits them in); the per-state successor lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    num_states: usize,
    initial: StateId,
    transitions: Vec<Transition>,
    succ: Vec<Vec<(ActionLabel, StateId)>>,
}

impl Lts {
    pub fn new(
        num_states: usize,
        initial: StateId,
        transitions: Vec<Transition>,
    ) -> Result<Self, LtsError> {
        if num_states == 0 {
            return Err(LtsError::NoStates);
        }
        if initial >= num_states {
            return Err(LtsError::InitialOutOfRange {
                initial,
                num_states,
            });
        }
        let mut succ = vec![Vec::new(); num_states];
        for t in &transitions {
            if t.from >= num_states || t.to >= num_states {
                return Err(LtsError::TransitionOutOfRange {
                    from: t.from,
                    to: t.to,
                    num_states,
                });
            }
            succ[t.from].push((t.label.clone(), t.to));
        }
        for list in &mut succ {
            list.sort();
        }
        Ok(Lts {
            num_states,
            initial,
            transitions,
            succ,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn contains_state(&self, s: StateId) -> bool {
        s < self.num_states
    }

    /// All `(a, s')` with `s -a-> s'`, ordered by label then target.
    pub fn successors(&self, s: StateId) -> Result<&[(ActionLabel, StateId)], LtsError> {
        self.succ
            .get(s)
            .map(Vec::as_slice)
            .ok_or(LtsError::UnknownState(s))
    }

    /// The set `A` of labels occurring on some transition.
    pub fn actions(&self) -> BTreeSet<&ActionLabel> {
        self.transitions.iter().map(|t| &t.label).collect()
    }

    /// Every variable mentioned by some label, sorted.
    pub fn var_universe(&self) -> BTreeSet<VarId> {
        self.transitions
            .iter()
            .flat_map(|t| t.label.vars())
            .cloned()
            .collect()
    }

    /// States reachable from the initial state, in breadth-first order.
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for (_, t) in &self.succ[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    queue.push_back(*t);
                }
            }
        }
        order
    }
}

/// Free-function form of [`Lts::var_universe`].
pub fn var_universe(l: &Lts) -> BTreeSet<VarId> {
    l.var_universe()
}

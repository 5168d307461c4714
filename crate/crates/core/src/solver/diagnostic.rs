use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

use super::{SolverError, SolverStore, Status};
use crate::lts::Lts;
use crate::pbes::{expand, Bes, BesNodeKey, Dep, Equation, Op, Operand, PbesError, Sign};

/// A boolean subgraph justifying the verdict of `root`.
///
/// For a true verdict it is one shortest dependency path from the root to a
/// `true` leaf (`witness` lists the path). For a false verdict it is every
/// node reachable from the root together with all of their dependencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub root: BesNodeKey,
    pub verdict: bool,
    pub nodes: BTreeSet<BesNodeKey>,
    pub edges: BTreeSet<(BesNodeKey, Dep)>,
    pub witness: Vec<BesNodeKey>,
}

impl Diagnostic {
    /// Solves the equation system restricted to this subgraph (each node is
    /// the disjunction of its diagnostic edges) and returns the root's value.
    pub fn evaluate(&self) -> bool {
        let mut rhs: BTreeMap<&BesNodeKey, Vec<Operand<BesNodeKey>>> =
            self.nodes.iter().map(|n| (n, Vec::new())).collect();
        for (from, to) in &self.edges {
            let operand = match to {
                Dep::True => Operand::Const(true),
                Dep::Node(k) => Operand::Var(k.clone()),
            };
            if let Some(list) = rhs.get_mut(from) {
                list.push(operand);
            }
        }
        let equations = rhs
            .into_iter()
            .map(|(lhs, rhs)| Equation {
                lhs: lhs.clone(),
                op: Op::Or,
                rhs,
            })
            .collect();
        match Bes::single(Sign::Mu, equations).solve() {
            Ok(values) => values.get(&self.root).copied().unwrap_or(false),
            // an edge leaving the subgraph: not self-sufficient
            Err(_) => false,
        }
    }

    /// True when every node's full right-hand side on `lts` is present.
    pub fn is_dependency_closed(&self, lts: &Lts) -> Result<bool, PbesError> {
        for node in &self.nodes {
            for dep in expand(lts, node)?.deps {
                if let Dep::Node(k) = &dep {
                    if !self.nodes.contains(k) {
                        return Ok(false);
                    }
                }
                if !self.edges.contains(&(node.clone(), dep)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph diagnostic {\n");
        for n in &self.nodes {
            out.push_str(&dot_node(n, Some(self.verdict)));
        }
        if self.edges.iter().any(|(_, d)| *d == Dep::True) {
            out.push_str("  TRUE [shape=box];\n");
        }
        for (from, to) in &self.edges {
            let _ = match to {
                Dep::True => writeln!(out, "  \"{from}\" -> TRUE;"),
                Dep::Node(k) => writeln!(out, "  \"{from}\" -> \"{k}\";"),
            };
        }
        out.push_str("}\n");
        out
    }
}

/// Disjunctive nodes are ellipses; white is true, black false, grey open.
pub(super) fn dot_node(key: &BesNodeKey, value: Option<bool>) -> String {
    let style = match value {
        Some(true) => "fillcolor=white",
        Some(false) => "fillcolor=black, fontcolor=white",
        None => "fillcolor=grey",
    };
    format!("  \"{key}\" [shape=ellipse, style=filled, {style}];\n")
}

impl SolverStore {
    /// Diagnostic for an already solved key.
    pub fn diagnostic(&self, key: &BesNodeKey) -> Result<Diagnostic, SolverError> {
        let root = self.locate(key)?;
        let proj = self.proj.as_ref().expect("located keys are bound");
        match self.status_of(root) {
            Some(Status::True) => {
                // Breadth-first over the projected graph: every node on a
                // path to a true leaf is itself true.
                let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
                let mut queue = VecDeque::from([root]);
                let mut seen = BTreeSet::from([root]);
                let mut end = None;
                while let Some(n) = queue.pop_front() {
                    let e = proj.expand(n);
                    if e.has_true {
                        end = Some(n);
                        break;
                    }
                    for d in e.deps {
                        if seen.insert(d) {
                            parent.insert(d, n);
                            queue.push_back(d);
                        }
                    }
                }
                let mut path = vec![end.expect("a true node reaches a true leaf")];
                while let Some(&p) = parent.get(path.last().unwrap()) {
                    path.push(p);
                }
                path.reverse();
                let witness: Vec<BesNodeKey> = path.iter().map(|&n| proj.key(n)).collect();
                let mut edges: BTreeSet<(BesNodeKey, Dep)> = witness
                    .windows(2)
                    .map(|w| (w[0].clone(), Dep::Node(w[1].clone())))
                    .collect();
                edges.insert((witness.last().unwrap().clone(), Dep::True));
                Ok(Diagnostic {
                    root: key.clone(),
                    verdict: true,
                    nodes: witness.iter().cloned().collect(),
                    edges,
                    witness,
                })
            }
            Some(Status::False) => {
                let mut nodes = BTreeSet::new();
                let mut edges = BTreeSet::new();
                let mut stack = vec![root];
                let mut seen = BTreeSet::from([root]);
                while let Some(n) = stack.pop() {
                    let k = proj.key(n);
                    let entry = self.entries[n].as_ref().expect("false nodes are expanded");
                    for &d in &entry.deps {
                        edges.insert((k.clone(), Dep::Node(proj.key(d))));
                        if seen.insert(d) {
                            stack.push(d);
                        }
                    }
                    nodes.insert(k);
                }
                Ok(Diagnostic {
                    root: key.clone(),
                    verdict: false,
                    nodes,
                    edges,
                    witness: Vec::new(),
                })
            }
            _ => Err(SolverError::NotSolved(key.clone())),
        }
    }
}

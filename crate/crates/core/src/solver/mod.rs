//! On-the-fly resolution of projected influence variables.
//!
//! [`SolverStore::local_solve`] explores the boolean graph depth-first from
//! the requested variable, expanding right-hand sides on demand, and
//! propagates every variable that becomes true back to the variables that
//! depend on it. When the reachable part of the graph is exhausted without
//! reaching the root, every variable visited during that call is false. All
//! expansions and verdicts stay in the store, so later calls reuse them.

mod diagnostic;

use thiserror::Error;

pub use diagnostic::Diagnostic;

use crate::lts::{Lts, StateId, VarId};
use crate::pbes::{BesNode, BesNodeKey, Dep, IaVariant, PbesError, Projection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("store solves {expected} but the key belongs to {found}")]
    VariantMismatch {
        expected: IaVariant,
        found: IaVariant,
    },
    #[error("store was populated from a different LTS")]
    DifferentLts,
    #[error("{0} has not been solved yet")]
    NotSolved(BesNodeKey),
    #[error(transparent)]
    Key(#[from] PbesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Open,
    True,
    False,
}

#[derive(Debug, Clone)]
struct Entry {
    has_true: bool,
    deps: Vec<usize>,
    status: Status,
}

/// Exact counters over the lifetime of a store.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub expansions: usize,
    pub stable_true: usize,
    pub stable_false: usize,
}

/// Memo table of one variant's boolean graph on one LTS.
///
/// A store is bound to the first LTS it is used with; `reset` clears it.
pub struct SolverStore {
    variant: IaVariant,
    proj: Option<Projection>,
    entries: Vec<Option<Entry>>,
    reverse: Vec<Vec<usize>>,
    visit_mark: Vec<u32>,
    epoch: u32,
    stats: Stats,
}

impl SolverStore {
    pub fn new(variant: IaVariant) -> Self {
        SolverStore {
            variant,
            proj: None,
            entries: Vec::new(),
            reverse: Vec::new(),
            visit_mark: Vec::new(),
            epoch: 0,
            stats: Stats::default(),
        }
    }

    pub fn variant(&self) -> &IaVariant {
        &self.variant
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// Forgets every expansion and verdict.
    pub fn reset(&mut self) {
        *self = SolverStore::new(self.variant.clone());
    }

    fn bind(&mut self, lts: &Lts) -> Result<(), SolverError> {
        match &self.proj {
            Some(p) if p.matches(lts) => Ok(()),
            Some(_) => Err(SolverError::DifferentLts),
            None => {
                let proj = Projection::new(lts, &self.variant);
                let n = proj.num_nodes();
                self.entries = vec![None; n];
                self.reverse = vec![Vec::new(); n];
                self.visit_mark = vec![0; n];
                self.proj = Some(proj);
                Ok(())
            }
        }
    }

    fn locate(&self, key: &BesNodeKey) -> Result<usize, SolverError> {
        if key.variant != self.variant {
            return Err(SolverError::VariantMismatch {
                expected: self.variant.clone(),
                found: key.variant.clone(),
            });
        }
        match &self.proj {
            Some(p) => Ok(p.locate(key)?),
            None => Err(SolverError::NotSolved(key.clone())),
        }
    }

    /// Value of `Y_state(var)` in the least solution.
    pub fn local_solve(&mut self, lts: &Lts, key: &BesNodeKey) -> Result<bool, SolverError> {
        self.bind(lts)?;
        let node = self.locate(key)?;
        Ok(self.resolve(node))
    }

    /// Same as [`local_solve`](Self::local_solve) for this store's variant.
    pub fn solve_at(
        &mut self,
        lts: &Lts,
        state: StateId,
        var: &VarId,
    ) -> Result<bool, SolverError> {
        let key = BesNodeKey::new(self.variant.clone(), state, var.clone());
        self.local_solve(lts, &key)
    }

    /// Current status of a key: `None` if never expanded, otherwise
    /// `(value, stable)`.
    pub fn status(&self, key: &BesNodeKey) -> Option<(bool, bool)> {
        let node = self.locate(key).ok()?;
        self.entries[node].as_ref().map(|e| match e.status {
            Status::Open => (false, false),
            Status::True => (true, true),
            Status::False => (false, true),
        })
    }

    /// The stored equation of an expanded key.
    pub fn node(&self, key: &BesNodeKey) -> Option<BesNode> {
        let node = self.locate(key).ok()?;
        let entry = self.entries[node].as_ref()?;
        let proj = self.proj.as_ref()?;
        let deps = entry
            .has_true
            .then_some(Dep::True)
            .into_iter()
            .chain(entry.deps.iter().map(|&d| Dep::Node(proj.key(d))))
            .collect();
        let mut out = BesNode::disjunction(key.clone(), deps);
        out.value = entry.status == Status::True;
        out.stable = entry.status != Status::Open;
        Some(out)
    }

    fn status_of(&self, node: usize) -> Option<Status> {
        self.entries[node].as_ref().map(|e| e.status)
    }

    fn expand(&mut self, node: usize) {
        let proj = self.proj.as_ref().expect("bound");
        let e = proj.expand(node);
        self.stats.expansions += 1;
        let mut becomes_true = e.has_true;
        for &d in &e.deps {
            self.reverse[d].push(node);
            becomes_true |= self.status_of(d) == Some(Status::True);
        }
        let empty = e.deps.is_empty();
        self.entries[node] = Some(Entry {
            has_true: e.has_true,
            deps: e.deps,
            status: Status::Open,
        });
        if becomes_true {
            self.set_true(node);
        } else if empty {
            self.set(node, Status::False);
        }
    }

    fn set(&mut self, node: usize, status: Status) {
        let entry = self.entries[node].as_mut().expect("expanded");
        debug_assert_eq!(entry.status, Status::Open);
        entry.status = status;
        match status {
            Status::True => self.stats.stable_true += 1,
            Status::False => self.stats.stable_false += 1,
            Status::Open => {}
        }
    }

    /// Marks `node` true and propagates along reverse dependencies.
    fn set_true(&mut self, node: usize) {
        self.set(node, Status::True);
        let mut work = vec![node];
        while let Some(n) = work.pop() {
            for i in 0..self.reverse[n].len() {
                let parent = self.reverse[n][i];
                if self.status_of(parent) == Some(Status::Open) {
                    self.set(parent, Status::True);
                    work.push(parent);
                }
            }
        }
    }

    fn resolve(&mut self, root: usize) -> bool {
        if self.entries[root].is_none() {
            self.expand(root);
        }
        match self.status_of(root) {
            Some(Status::True) => return true,
            Some(Status::False) => return false,
            _ => {}
        }

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.visit_mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let mut visited = vec![root];
        self.visit_mark[root] = epoch;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];

        while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
            if self.status_of(root) == Some(Status::True) {
                return true;
            }
            let entry = self.entries[node].as_ref().expect("expanded");
            if entry.status != Status::Open || *pos >= entry.deps.len() {
                stack.pop();
                continue;
            }
            let dep = entry.deps[*pos];
            *pos += 1;
            if self.entries[dep].is_none() {
                self.expand(dep);
            }
            if self.status_of(dep) == Some(Status::Open) && self.visit_mark[dep] != epoch {
                self.visit_mark[dep] = epoch;
                visited.push(dep);
                stack.push((dep, 0));
            }
        }
        if self.status_of(root) == Some(Status::True) {
            return true;
        }
        // Exhausted: nothing reachable through open nodes can become true.
        for n in visited {
            if self.status_of(n) == Some(Status::Open) {
                self.set(n, Status::False);
            }
        }
        false
    }

    /// Graphviz rendering of every expanded node (white = true,
    /// black = false, grey = unresolved).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bes {\n");
        let Some(proj) = &self.proj else {
            out.push_str("}\n");
            return out;
        };
        let mut any_true = false;
        for (n, entry) in self.entries.iter().enumerate() {
            let Some(entry) = entry else { continue };
            let key = proj.key(n);
            let value = match entry.status {
                Status::Open => None,
                status => Some(status == Status::True),
            };
            out.push_str(&diagnostic::dot_node(&key, value));
            if entry.has_true {
                any_true = true;
                out.push_str(&format!("  \"{key}\" -> TRUE;\n"));
            }
            for &d in &entry.deps {
                out.push_str(&format!("  \"{key}\" -> \"{}\";\n", proj.key(d)));
            }
        }
        if any_true {
            out.push_str("  TRUE [shape=box];\n");
        }
        out.push_str("}\n");
        out
    }
}

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::ast::{Program, Statement};
use crate::lts::{ActionLabel, Lts, Transition, VarId};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Tau,
    Bool,
    Assign,
    Assert,
}

/// An unsplit CFG action. `vars` are the variables read by the expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawAction {
    kind: ActionKind,
    target: Option<VarId>,
    vars: Vec<VarId>,
}

impl RawAction {
    pub fn tau() -> Self {
        RawAction {
            kind: ActionKind::Tau,
            target: None,
            vars: Vec::new(),
        }
    }

    pub fn boolean(vars: impl IntoIterator<Item = VarId>) -> Self {
        RawAction {
            kind: ActionKind::Bool,
            target: None,
            vars: sorted(vars),
        }
    }

    pub fn assert(vars: impl IntoIterator<Item = VarId>) -> Self {
        RawAction {
            kind: ActionKind::Assert,
            target: None,
            vars: sorted(vars),
        }
    }

    pub fn assign(target: VarId, sources: impl IntoIterator<Item = VarId>) -> Self {
        RawAction {
            kind: ActionKind::Assign,
            target: Some(target),
            vars: sorted(sources),
        }
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn target(&self) -> Option<&VarId> {
        self.target.as_ref()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    /// Splits into single-variable labels: one `BOOL v` / `ASSERT v` per read
    /// variable, one `ASSIGN t v` per source. An empty BOOL/ASSERT becomes τ;
    /// an assignment reading nothing keeps the unary `ASSIGN t`.
    pub fn split(&self) -> Vec<ActionLabel> {
        match self.kind {
            ActionKind::Tau => vec![ActionLabel::Tau],
            ActionKind::Bool | ActionKind::Assert if self.vars.is_empty() => {
                vec![ActionLabel::Tau]
            }
            ActionKind::Bool => self.vars.iter().cloned().map(ActionLabel::Bool).collect(),
            ActionKind::Assert => self.vars.iter().cloned().map(ActionLabel::Assert).collect(),
            ActionKind::Assign => {
                let target = self.target.clone().expect("assignments have a target");
                if self.vars.is_empty() {
                    vec![ActionLabel::assign_const(target)]
                } else {
                    self.vars
                        .iter()
                        .map(|v| ActionLabel::assign(target.clone(), v.clone()))
                        .collect()
                }
            }
        }
    }
}

fn sorted(vars: impl IntoIterator<Item = VarId>) -> Vec<VarId> {
    vars.into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfgEdge {
    pub from: NodeId,
    pub action: RawAction,
    pub to: NodeId,
}

/// Control-flow graph with nodes `0..num_nodes`.
///
/// Every statement owns the node in front of it; each procedure adds one
/// exit node after its statements. Nodes are numbered in source order, so the
/// first procedure's first statement is node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    pub num_nodes: usize,
    pub edges: Vec<CfgEdge>,
    pub entry: NodeId,
    /// Statement label -> node it names.
    pub labels: BTreeMap<String, NodeId>,
}

impl Cfg {
    pub fn successors(&self, n: NodeId) -> impl Iterator<Item = &CfgEdge> {
        self.edges.iter().filter(move |e| e.from == n)
    }
}

fn size(stmt: &Statement) -> usize {
    match stmt {
        Statement::Label(_) => 0,
        Statement::If(_, t, e) => 1 + list_size(t) + list_size(e),
        Statement::While(_, b) => 1 + list_size(b),
        _ => 1,
    }
}

fn list_size(stmts: &[Statement]) -> usize {
    stmts.iter().map(size).sum()
}

struct Builder {
    edges: Vec<CfgEdge>,
    seen: HashSet<(NodeId, RawAction, NodeId)>,
    labels: BTreeMap<String, NodeId>,
}

impl Builder {
    fn edge(&mut self, from: NodeId, action: RawAction, to: NodeId) {
        if self.seen.insert((from, action.clone(), to)) {
            self.edges.push(CfgEdge { from, action, to });
        }
    }

    /// Lowers `stmts`, whose first statement gets node `base`; control leaves
    /// the list to `follow`. Returns the list's entry node.
    fn lower(&mut self, stmts: &[Statement], base: NodeId, follow: NodeId) -> NodeId {
        // node of each position: the next non-label statement at or after it
        let mut ids = vec![follow; stmts.len()];
        let mut next = base;
        for (i, s) in stmts.iter().enumerate() {
            if !matches!(s, Statement::Label(_)) {
                ids[i] = next;
                next += size(s);
            }
        }
        let mut point = vec![follow; stmts.len() + 1];
        for i in (0..stmts.len()).rev() {
            point[i] = if matches!(stmts[i], Statement::Label(_)) {
                point[i + 1]
            } else {
                ids[i]
            };
        }

        for (i, stmt) in stmts.iter().enumerate() {
            let here = point[i];
            let after = point[i + 1];
            match stmt {
                Statement::Label(name) => {
                    self.labels.insert(name.clone(), here);
                }
                Statement::Skip => self.edge(here, RawAction::tau(), after),
                Statement::Assign(target, e) => self.edge(
                    here,
                    RawAction::assign(target.clone(), e.used_vars()),
                    after,
                ),
                Statement::Assert(e) => self.edge(here, RawAction::assert(e.used_vars()), after),
                Statement::If(cond, then, otherwise) => {
                    let then_entry = self.lower(then, here + 1, after);
                    let else_entry = self.lower(otherwise, here + 1 + list_size(then), after);
                    let test = RawAction::boolean(cond.used_vars());
                    self.edge(here, test.clone(), then_entry);
                    self.edge(here, test, else_entry);
                }
                Statement::While(cond, body) => {
                    let body_entry = self.lower(body, here + 1, here);
                    let test = RawAction::boolean(cond.used_vars());
                    self.edge(here, test.clone(), body_entry);
                    self.edge(here, test, after);
                }
            }
        }
        point[0]
    }
}

/// Control-flow graph of every procedure, laid out one after the other. The
/// entry is the first procedure's entry; later procedures are not reachable
/// from it (there are no calls).
pub fn build_cfg(p: &Program) -> Cfg {
    let mut b = Builder {
        edges: Vec::new(),
        seen: HashSet::new(),
        labels: BTreeMap::new(),
    };
    let mut base = 0;
    let mut entry = None;
    for proc in &p.procedures {
        let exit = base + list_size(&proc.body);
        let e = b.lower(&proc.body, base, exit);
        entry.get_or_insert(e);
        base = exit + 1;
    }
    Cfg {
        num_nodes: base.max(1),
        edges: b.edges,
        entry: entry.unwrap_or(0),
        labels: b.labels,
    }
}

/// One LTS state per CFG node; each edge is split into single-variable
/// labels between the same endpoints.
pub fn cfg_to_lts(c: &Cfg) -> Lts {
    let mut transitions: Vec<Transition> = c
        .edges
        .iter()
        .flat_map(|e| {
            e.action
                .split()
                .into_iter()
                .map(move |label| Transition::new(e.from, label, e.to))
        })
        .collect();
    transitions.sort_by(|a, b| (a.from, a.to, &a.label).cmp(&(b.from, b.to, &b.label)));
    Lts::new(c.num_nodes, c.entry, transitions).expect("CFG nodes are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    fn cfg(src: &str) -> Cfg {
        build_cfg(&parse_program(src).unwrap())
    }

    fn edge(from: NodeId, action: RawAction, to: NodeId) -> CfgEdge {
        CfgEdge { from, action, to }
    }

    #[test]
    fn skip_is_one_tau_edge() {
        let c = cfg("L0: skip;");
        assert_eq!(c.num_nodes, 2);
        assert_eq!(c.edges, vec![edge(0, RawAction::tau(), 1)]);
        assert_eq!(c.labels["L0"], 0);
    }

    #[test]
    fn countdown_loop() {
        let c = cfg("int x; while (x > 0) { x = x - 1; }");
        assert_eq!(c.num_nodes, 3);
        assert_eq!(c.entry, 0);
        let mut edges = c.edges.clone();
        edges.sort_by_key(|e| (e.from, e.to));
        assert_eq!(
            edges,
            vec![
                edge(0, RawAction::boolean([v("x")]), 1),
                edge(0, RawAction::boolean([v("x")]), 2),
                edge(1, RawAction::assign(v("x"), [v("x")]), 0),
            ]
        );
    }

    #[test]
    fn if_else_numbering() {
        let c = cfg("int a, b; if (a) { b = 1; } else { b = a; skip; } L9:");
        // 0: if, 1: then-assign, 2: else-assign, 3: skip, 4: exit
        assert_eq!(c.num_nodes, 5);
        let mut edges = c.edges.clone();
        edges.sort_by_key(|e| (e.from, e.to));
        assert_eq!(
            edges,
            vec![
                edge(0, RawAction::boolean([v("a")]), 1),
                edge(0, RawAction::boolean([v("a")]), 2),
                edge(1, RawAction::assign(v("b"), []), 4),
                edge(2, RawAction::assign(v("b"), [v("a")]), 3),
                edge(3, RawAction::tau(), 4),
            ]
        );
        assert_eq!(c.labels["L9"], 4);
    }

    #[test]
    fn empty_branches_collapse() {
        let c = cfg("int a; if (a) { } else { }");
        assert_eq!(c.num_nodes, 2);
        assert_eq!(c.edges, vec![edge(0, RawAction::boolean([v("a")]), 1)]);
        let c = cfg("int a; while (a) { }");
        assert_eq!(c.edges.len(), 2);
        assert!(c.edges.contains(&edge(0, RawAction::boolean([v("a")]), 0)));
    }

    #[test]
    fn labels_inside_loops() {
        let c = cfg("int x; L0: while (x) { L1: x = 0; L2: } L3: skip; L4:");
        let want: BTreeMap<String, NodeId> =
            [("L0", 0), ("L1", 1), ("L2", 0), ("L3", 2), ("L4", 3)]
                .into_iter()
                .map(|(k, n)| (k.to_string(), n))
                .collect();
        assert_eq!(c.labels, want);
    }

    #[test]
    fn procedures_get_disjoint_nodes() {
        let c = cfg("int g; proc a { g = 1; } proc b { skip; skip; }");
        // a: 0 -> 1(exit); b: 2 -> 3 -> 4(exit)
        assert_eq!(c.num_nodes, 5);
        assert_eq!(c.entry, 0);
        assert!(c.edges.contains(&edge(3, RawAction::tau(), 4)));
        let empty = cfg("proc a { }");
        assert_eq!((empty.num_nodes, empty.edges.len()), (1, 0));
    }

    #[test]
    fn splitting_rules() {
        let bool3 = RawAction::boolean([v("c"), v("a"), v("b")]).split();
        assert_eq!(
            bool3,
            vec![
                ActionLabel::Bool(v("a")),
                ActionLabel::Bool(v("b")),
                ActionLabel::Bool(v("c"))
            ]
        );
        assert_eq!(
            RawAction::assign(v("x"), []).split(),
            vec![ActionLabel::assign_const(v("x"))]
        );
        assert_eq!(
            RawAction::assign(v("x"), [v("x"), v("y")]).split(),
            vec![
                ActionLabel::assign(v("x"), v("x")),
                ActionLabel::assign(v("x"), v("y"))
            ]
        );
        assert_eq!(RawAction::boolean([]).split(), vec![ActionLabel::Tau]);
        assert_eq!(RawAction::assert([]).split(), vec![ActionLabel::Tau]);
        assert_eq!(
            RawAction::assert([v("q")]).split(),
            vec![ActionLabel::Assert(v("q"))]
        );
    }

    #[test]
    fn bool_with_three_vars_gives_parallel_transitions() {
        let c = Cfg {
            num_nodes: 2,
            edges: vec![edge(0, RawAction::boolean([v("a"), v("b"), v("c")]), 1)],
            entry: 0,
            labels: BTreeMap::new(),
        };
        let lts = cfg_to_lts(&c);
        assert_eq!(lts.transitions().len(), 3);
        assert!(lts.transitions().iter().all(|t| t.from == 0 && t.to == 1));
    }
}

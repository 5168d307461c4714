use std::collections::{BTreeSet, HashMap};

use super::bes::{Bes, Equation, Operand};
use super::{BesNode, BesNodeKey, Dep, IaVariant, Op, PbesError, Sign};
use crate::lts::{ActionLabel, Lts, StateId, VarId};

#[derive(Debug, Clone, Copy)]
enum Label {
    Tau,
    Bool(usize),
    Assert(usize),
    Assign(usize, Option<usize>),
}

/// Projected right-hand side of `Y_s(v)` in flat index form
/// (`state * universe_len + var`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Expansion {
    pub has_true: bool,
    pub deps: Vec<usize>,
}

/// The influence equation block projected on one LTS, with variables
/// replaced by their index in the sorted universe.
pub(crate) struct Projection {
    variant: IaVariant,
    num_states: usize,
    num_transitions: usize,
    universe: Vec<VarId>,
    index: HashMap<VarId, usize>,
    succ: Vec<Vec<(Label, StateId)>>,
    /// IA4: `is_property[w]` iff `w` occurs in the temporal property.
    is_property: Vec<bool>,
}

impl Projection {
    pub fn new(lts: &Lts, variant: &IaVariant) -> Self {
        let universe: Vec<VarId> = lts.var_universe().into_iter().collect();
        let index: HashMap<VarId, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let succ = (0..lts.num_states())
            .map(|s| {
                lts.successors(s)
                    .expect("state in range")
                    .iter()
                    .map(|(label, t)| {
                        let ix = |v: &VarId| index[v];
                        let l = match label {
                            ActionLabel::Tau => Label::Tau,
                            ActionLabel::Bool(v) => Label::Bool(ix(v)),
                            ActionLabel::Assert(v) => Label::Assert(ix(v)),
                            ActionLabel::Assign { target, source } => {
                                Label::Assign(ix(target), source.as_ref().map(ix))
                            }
                        };
                        (l, *t)
                    })
                    .collect()
            })
            .collect();
        let is_property = universe
            .iter()
            .map(|v| variant.property_vars().is_some_and(|p| p.contains(v)))
            .collect();
        Projection {
            variant: variant.clone(),
            num_states: lts.num_states(),
            num_transitions: lts.transitions().len(),
            universe,
            index,
            succ,
            is_property,
        }
    }

    /// Cheap identity check used to catch a store being reused on another
    /// LTS.
    pub fn matches(&self, lts: &Lts) -> bool {
        self.num_states == lts.num_states() && self.num_transitions == lts.transitions().len()
    }

    pub fn universe(&self) -> &[VarId] {
        &self.universe
    }

    pub fn num_nodes(&self) -> usize {
        self.num_states * self.universe.len()
    }

    pub fn var_index(&self, v: &VarId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn flat(&self, state: StateId, var: usize) -> usize {
        state * self.universe.len() + var
    }

    pub fn unflat(&self, node: usize) -> (StateId, usize) {
        (node / self.universe.len(), node % self.universe.len())
    }

    pub fn key(&self, node: usize) -> BesNodeKey {
        let (s, v) = self.unflat(node);
        BesNodeKey::new(self.variant.clone(), s, self.universe[v].clone())
    }

    /// Flat index of `key`, checking the state and variable exist.
    pub fn locate(&self, key: &BesNodeKey) -> Result<usize, PbesError> {
        if key.state >= self.num_states {
            return Err(PbesError::UnknownState(key.state));
        }
        let v = self
            .var_index(&key.var)
            .ok_or_else(|| PbesError::UnknownVariable(key.var.clone()))?;
        Ok(self.flat(key.state, v))
    }

    /// Right-hand side of `Y_s(v)`:
    /// - `BOOL v` contributes `true`;
    /// - `ASSERT v` contributes `true` for IA2/IA3;
    /// - `ASSIGN z v` contributes `Y_s'(z)`, and `true` for IA4 when `z` is a
    ///   property variable;
    /// - every label that does not assign `v` contributes `Y_s'(v)`.
    pub fn expand(&self, node: usize) -> Expansion {
        let (s, v) = self.unflat(node);
        let mut has_true = false;
        let mut deps = BTreeSet::new();
        for &(label, t) in &self.succ[s] {
            let kills = match label {
                Label::Bool(w) => {
                    has_true |= w == v;
                    false
                }
                Label::Assert(w) => {
                    has_true |= w == v && self.variant.counts_assertions();
                    false
                }
                Label::Assign(target, source) => {
                    if source == Some(v) {
                        deps.insert(self.flat(t, target));
                        has_true |= self.is_property[target];
                    }
                    target == v
                }
                Label::Tau => false,
            };
            if !kills {
                deps.insert(self.flat(t, v));
            }
        }
        Expansion {
            has_true,
            deps: deps.into_iter().collect(),
        }
    }
}

/// The projected equation of `key` on `l`, as a disjunctive node.
pub fn expand(l: &Lts, key: &BesNodeKey) -> Result<BesNode, PbesError> {
    let proj = Projection::new(l, &key.variant);
    let node = proj.locate(key)?;
    let e = proj.expand(node);
    let deps = e
        .has_true
        .then_some(Dep::True)
        .into_iter()
        .chain(e.deps.iter().map(|&d| Dep::Node(proj.key(d))))
        .collect();
    Ok(BesNode::disjunction(key.clone(), deps))
}

/// Least solution of the projected system over every `(state, variable)`
/// pair of the LTS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalSolution {
    pub variant: IaVariant,
    pub universe: Vec<VarId>,
    pub num_states: usize,
    values: Vec<bool>,
}

impl GlobalSolution {
    pub fn value(&self, state: StateId, var: &VarId) -> Option<bool> {
        if state >= self.num_states {
            return None;
        }
        let v = self.universe.binary_search(var).ok()?;
        Some(self.values[state * self.universe.len() + v])
    }

    pub fn get(&self, key: &BesNodeKey) -> Option<bool> {
        if key.variant != self.variant {
            return None;
        }
        self.value(key.state, &key.var)
    }

    /// Variables true at `state`.
    pub fn true_vars(&self, state: StateId) -> BTreeSet<VarId> {
        self.universe
            .iter()
            .filter(|v| self.value(state, v) == Some(true))
            .cloned()
            .collect()
    }
}

/// Solves the whole projected system by Kleene iteration from all-false.
pub fn global_solve(l: &Lts, variant: &IaVariant) -> GlobalSolution {
    let proj = Projection::new(l, variant);
    let equations = (0..proj.num_nodes())
        .map(|node| {
            let e = proj.expand(node);
            let rhs = e
                .has_true
                .then_some(Operand::Const(true))
                .into_iter()
                .chain(e.deps.into_iter().map(Operand::Var))
                .collect();
            Equation {
                lhs: node,
                op: Op::Or,
                rhs,
            }
        })
        .collect();
    let solution = Bes::single(Sign::Mu, equations)
        .solve()
        .expect("projected system is closed");
    GlobalSolution {
        variant: variant.clone(),
        universe: proj.universe().to_vec(),
        num_states: l.num_states(),
        values: (0..proj.num_nodes()).map(|n| solution[&n]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{read_aut, Transition};

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    fn key(variant: IaVariant, s: StateId, var: &str) -> BesNodeKey {
        BesNodeKey::new(variant, s, v(var))
    }

    #[test]
    fn unary_assignment_kills() {
        let lts = Lts::new(
            2,
            0,
            vec![Transition::new(0, ActionLabel::assign_const(v("x")), 1)],
        )
        .unwrap();
        let node = expand(&lts, &key(IaVariant::Ia1, 0, "x")).unwrap();
        assert!(node.deps.is_empty());
        assert!(node.stable && !node.value);
    }

    #[test]
    fn self_assignment_keeps_the_variable() {
        let lts = Lts::new(
            2,
            0,
            vec![Transition::new(0, ActionLabel::assign(v("x"), v("x")), 1)],
        )
        .unwrap();
        let node = expand(&lts, &key(IaVariant::Ia1, 0, "x")).unwrap();
        assert_eq!(node.deps, vec![Dep::Node(key(IaVariant::Ia1, 1, "x"))]);
    }

    #[test]
    fn rules_by_variant() {
        let lts = read_aut(
            "des (0, 4, 2)\n(0, \"BOOL y\", 1)\n(0, \"ASSERT x\", 1)\n(0, \"ASSIGN w x\", 1)\n(0, i, 1)\n",
        )
        .unwrap();
        let ia1 = expand(&lts, &key(IaVariant::Ia1, 0, "x")).unwrap();
        assert_eq!(
            ia1.deps,
            vec![
                Dep::Node(key(IaVariant::Ia1, 1, "w")),
                Dep::Node(key(IaVariant::Ia1, 1, "x"))
            ]
        );
        assert!(!ia1.stable);
        for variant in [IaVariant::Ia2, IaVariant::Ia3, IaVariant::ia4([v("w")])] {
            let node = expand(&lts, &key(variant.clone(), 0, "x")).unwrap();
            assert_eq!(node.deps[0], Dep::True, "{variant}");
            assert!(node.stable && node.value);
        }
        let ia4_other = expand(&lts, &key(IaVariant::ia4([v("y")]), 0, "x")).unwrap();
        assert!(!ia4_other.deps.contains(&Dep::True));
    }

    #[test]
    fn bad_keys() {
        let lts = read_aut("des (0, 1, 2)\n(0, \"BOOL x\", 1)\n").unwrap();
        assert_eq!(
            expand(&lts, &key(IaVariant::Ia1, 5, "x")),
            Err(PbesError::UnknownState(5))
        );
        assert_eq!(
            expand(&lts, &key(IaVariant::Ia1, 0, "q")),
            Err(PbesError::UnknownVariable(v("q")))
        );
    }

    #[test]
    fn deadlock_is_false() {
        let lts = read_aut("des (0, 1, 2)\n(0, \"BOOL x\", 1)\n").unwrap();
        let node = expand(&lts, &key(IaVariant::Ia2, 1, "x")).unwrap();
        assert!(node.deps.is_empty() && node.stable && !node.value);
        let sol = global_solve(&lts, &IaVariant::Ia2);
        assert_eq!(sol.value(0, &v("x")), Some(true));
        assert_eq!(sol.value(1, &v("x")), Some(false));
        assert_eq!(sol.value(2, &v("x")), None);
    }

    #[test]
    fn without_tests_everything_is_false() {
        let lts =
            read_aut("des (0, 3, 3)\n(0, \"ASSIGN x y\", 1)\n(1, \"ASSIGN y x\", 2)\n(2, i, 0)\n")
                .unwrap();
        for variant in [IaVariant::Ia1, IaVariant::Ia2, IaVariant::Ia3] {
            let sol = global_solve(&lts, &variant);
            for s in 0..3 {
                assert!(sol.true_vars(s).is_empty());
            }
        }
    }
}

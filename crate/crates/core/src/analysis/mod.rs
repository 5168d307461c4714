//! The influence-analysis driver and what is built from its result.

mod blk;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

pub use blk::{export_blk, BlkError, BlkOptions, DEFAULT_MAX_BLK_VARS};
pub use report::{report, Format, UnknownFormat};

use crate::lts::{Lts, StateId, VarId};
use crate::pbes::{BesNodeKey, IaVariant};
use crate::solver::{Diagnostic, SolverError, SolverStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("property variable `{0}` does not occur in the LTS")]
    UnknownPropertyVar(VarId),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// `d : S -> 2^Var`, the significant variables of each reachable state.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnnotationMap {
    entries: BTreeMap<StateId, BTreeSet<VarId>>,
}

impl AnnotationMap {
    pub fn get(&self, s: StateId) -> Option<&BTreeSet<VarId>> {
        self.entries.get(&s)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &BTreeSet<VarId>)> {
        self.entries.iter().map(|(s, vars)| (*s, vars))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn touch(&mut self, s: StateId) -> &mut BTreeSet<VarId> {
        self.entries.entry(s).or_default()
    }

    /// Union of two maps over disjoint or agreeing states.
    pub fn merge(&mut self, other: AnnotationMap) {
        for (s, vars) in other.entries {
            self.touch(s).extend(vars);
        }
    }
}

impl FromIterator<(StateId, BTreeSet<VarId>)> for AnnotationMap {
    fn from_iter<I: IntoIterator<Item = (StateId, BTreeSet<VarId>)>>(iter: I) -> Self {
        AnnotationMap {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchEntry {
    pub keep: BTreeSet<VarId>,
    pub hide: BTreeSet<VarId>,
}

/// Per state, which variables stay in the state vector and which are
/// abstracted away.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatchingTable {
    entries: BTreeMap<StateId, MatchEntry>,
}

impl MatchingTable {
    pub fn get(&self, s: StateId) -> Option<&MatchEntry> {
        self.entries.get(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &MatchEntry)> {
        self.entries.iter().map(|(s, e)| (*s, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn matching_table(d: &AnnotationMap, universe: &BTreeSet<VarId>) -> MatchingTable {
    let entries = d
        .iter()
        .map(|(s, keep)| {
            let hide = universe.difference(keep).cloned().collect();
            (
                s,
                MatchEntry {
                    keep: keep.clone(),
                    hide,
                },
            )
        })
        .collect();
    MatchingTable { entries }
}

fn check_property_vars(lts: &Lts, variant: &IaVariant) -> Result<(), AnalysisError> {
    if let Some(props) = variant.property_vars() {
        let universe = lts.var_universe();
        if let Some(v) = props.iter().find(|v| !universe.contains(*v)) {
            return Err(AnalysisError::UnknownPropertyVar(v.clone()));
        }
    }
    Ok(())
}

/// Runs the analysis with one solver store shared by every resolution.
pub struct Analyzer<'a> {
    lts: &'a Lts,
    universe: Vec<VarId>,
    store: SolverStore,
}

impl<'a> Analyzer<'a> {
    pub fn new(lts: &'a Lts, variant: IaVariant) -> Result<Self, AnalysisError> {
        check_property_vars(lts, &variant)?;
        Ok(Analyzer {
            lts,
            universe: lts.var_universe().into_iter().collect(),
            store: SolverStore::new(variant),
        })
    }

    pub fn variant(&self) -> &IaVariant {
        self.store.variant()
    }

    pub fn store(&self) -> &SolverStore {
        &self.store
    }

    /// Worklist over the states reachable from the initial state; each
    /// visited state gets every variable for which `Y_s(v)` holds. For IA4
    /// the property variables are added without resolution.
    pub fn run(&mut self) -> Result<AnnotationMap, AnalysisError> {
        let mut d = AnnotationMap::default();
        let mut visited = BTreeSet::from([self.lts.initial()]);
        let mut explored = BTreeSet::new();
        while let Some(s) = visited.pop_first() {
            explored.insert(s);
            self.annotate(s, &mut d)?;
            for (_, t) in self.lts.successors(s).expect("reachable states exist") {
                if !explored.contains(t) {
                    visited.insert(*t);
                }
            }
        }
        Ok(d)
    }

    fn annotate(&mut self, s: StateId, d: &mut AnnotationMap) -> Result<(), AnalysisError> {
        let props = self.store.variant().property_vars().cloned();
        let entry = d.touch(s);
        for v in &self.universe {
            let needed = match &props {
                Some(p) if p.contains(v) => true,
                _ => self.store.solve_at(self.lts, s, v)?,
            };
            if needed {
                entry.insert(v.clone());
            }
        }
        Ok(())
    }

    /// Solves `Y_state(var)` if needed and returns its diagnostic.
    pub fn diagnostic(&mut self, state: StateId, var: &VarId) -> Result<Diagnostic, AnalysisError> {
        let key = BesNodeKey::new(self.store.variant().clone(), state, var.clone());
        self.store.local_solve(self.lts, &key)?;
        Ok(self.store.diagnostic(&key)?)
    }
}

/// `d` for every state reachable from the initial state.
pub fn influence_analysis(lts: &Lts, variant: &IaVariant) -> Result<AnnotationMap, AnalysisError> {
    Analyzer::new(lts, variant.clone())?.run()
}

/// Same result as [`influence_analysis`], with the reachable states split
/// round-robin over `jobs` threads that each own a private store.
pub fn influence_analysis_parallel(
    lts: &Lts,
    variant: &IaVariant,
    jobs: usize,
) -> Result<AnnotationMap, AnalysisError> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return influence_analysis(lts, variant);
    }
    check_property_vars(lts, variant)?;
    let states = lts.reachable();
    let results: Vec<Result<AnnotationMap, AnalysisError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let mine: Vec<StateId> = states.iter().copied().skip(j).step_by(jobs).collect();
                scope.spawn(move || {
                    let mut a = Analyzer::new(lts, variant.clone())?;
                    let mut d = AnnotationMap::default();
                    for s in mine {
                        a.annotate(s, &mut d)?;
                    }
                    Ok(d)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis worker panicked"))
            .collect()
    });
    let mut d = AnnotationMap::default();
    for part in results {
        d.merge(part?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::read_aut;

    fn v(name: &str) -> VarId {
        VarId::new(name).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<VarId> {
        names.iter().map(|n| v(n)).collect()
    }

    #[test]
    fn tau_only_lts_annotates_nothing() {
        let lts = read_aut("des (0, 2, 3)\n(0, i, 1)\n(1, i, 2)\n").unwrap();
        let d = influence_analysis(&lts, &IaVariant::Ia1).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|(_, vars)| vars.is_empty()));
    }

    #[test]
    fn unreachable_states_are_left_out() {
        let lts = read_aut("des (0, 2, 3)\n(0, \"BOOL x\", 1)\n(2, \"BOOL x\", 0)\n").unwrap();
        let d = influence_analysis(&lts, &IaVariant::Ia1).unwrap();
        assert_eq!(d.states().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(d.get(0), Some(&set(&["x"])));
        assert_eq!(d.get(1), Some(&set(&[])));
    }

    #[test]
    fn ia4_property_vars_are_everywhere() {
        let lts =
            read_aut("des (0, 2, 3)\n(0, \"ASSIGN w a\", 1)\n(1, \"ASSIGN b w\", 2)\n").unwrap();
        let d = influence_analysis(&lts, &IaVariant::ia4([v("w")])).unwrap();
        assert_eq!(d.get(0), Some(&set(&["a", "w"])));
        assert_eq!(d.get(1), Some(&set(&["w"])));
        assert_eq!(d.get(2), Some(&set(&["w"])));
        let ia1 = influence_analysis(&lts, &IaVariant::Ia1).unwrap();
        assert!(ia1.iter().all(|(_, vars)| vars.is_empty()));
        assert_eq!(
            influence_analysis(&lts, &IaVariant::ia4([v("nope")])),
            Err(AnalysisError::UnknownPropertyVar(v("nope")))
        );
    }

    #[test]
    fn ia4_without_property_vars_is_ia1() {
        let lts = read_aut(
            "des (0, 4, 4)\n(0, \"ASSIGN y x\", 1)\n(1, \"BOOL y\", 2)\n(2, \"ASSERT x\", 3)\n(3, i, 0)\n",
        )
        .unwrap();
        assert_eq!(
            influence_analysis(&lts, &IaVariant::ia4([])).unwrap(),
            influence_analysis(&lts, &IaVariant::Ia1).unwrap()
        );
    }

    #[test]
    fn matching_partitions_the_universe() {
        let d: AnnotationMap = [(0, set(&["x"])), (1, set(&[])), (2, set(&["x", "y"]))]
            .into_iter()
            .collect();
        let table = matching_table(&d, &set(&["x", "y"]));
        assert_eq!(table.get(0).unwrap().hide, set(&["y"]));
        assert_eq!(table.get(1).unwrap().hide, set(&["x", "y"]));
        assert!(table.get(2).unwrap().hide.is_empty());
    }

    #[test]
    fn parallel_matches_sequential() {
        let lts = read_aut(
            "des (0, 6, 5)\n(0, \"BOOL x\", 1)\n(0, \"BOOL x\", 3)\n(1, \"ASSIGN y x\", 2)\n(2, i, 0)\n(3, \"ASSERT y\", 4)\n(4, \"ASSIGN x y\", 0)\n",
        )
        .unwrap();
        for variant in [IaVariant::Ia1, IaVariant::Ia2, IaVariant::ia4([v("y")])] {
            let seq = influence_analysis(&lts, &variant).unwrap();
            for jobs in [1, 2, 3, 8] {
                assert_eq!(
                    influence_analysis_parallel(&lts, &variant, jobs).unwrap(),
                    seq
                );
            }
        }
    }

    #[test]
    fn analyzer_diagnostic() {
        let lts = read_aut("des (0, 2, 3)\n(0, i, 1)\n(1, \"BOOL x\", 2)\n").unwrap();
        let mut a = Analyzer::new(&lts, IaVariant::Ia1).unwrap();
        let d = a.diagnostic(0, &v("x")).unwrap();
        assert!(d.verdict);
        assert_eq!(d.witness.len(), 2);
        assert!(a.diagnostic(7, &v("x")).is_err());
    }
}

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use influence::lts::Transition;
use influence::{ActionLabel, IaVariant, Lts, VarId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const POOL: [&str; 4] = ["a", "b", "c", "d"];

pub fn v(name: &str) -> VarId {
    VarId::new(name).unwrap()
}

pub fn samples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

pub fn sample(name: &str) -> String {
    std::fs::read_to_string(samples_dir().join(name)).unwrap()
}

fn random_label(rng: &mut ChaCha8Rng, vars: &[VarId]) -> ActionLabel {
    let pick = |rng: &mut ChaCha8Rng| vars.choose(rng).unwrap().clone();
    match rng.gen_range(0..10) {
        0..=2 => ActionLabel::Tau,
        3 | 4 => ActionLabel::Bool(pick(rng)),
        5 => ActionLabel::Assert(pick(rng)),
        6..=8 => ActionLabel::assign(pick(rng), pick(rng)),
        _ => ActionLabel::assign_const(pick(rng)),
    }
}

/// An LTS with at most `max_states` states, `max_transitions` transitions and
/// four variables.
pub fn random_lts(rng: &mut ChaCha8Rng, max_states: usize, max_transitions: usize) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let nvars = rng.gen_range(1..=POOL.len());
    let vars: Vec<VarId> = POOL[..nvars].iter().map(|s| v(s)).collect();
    let m = rng.gen_range(0..=max_transitions);
    let transitions = (0..m)
        .map(|_| {
            let from = rng.gen_range(0..n);
            let to = rng.gen_range(0..n);
            Transition::new(from, random_label(rng, &vars), to)
        })
        .collect();
    Lts::new(n, rng.gen_range(0..n), transitions).unwrap()
}

/// IA1, IA2, IA3 and IA4 with a random subset of the universe as property
/// variables.
pub fn variants(rng: &mut ChaCha8Rng, lts: &Lts) -> Vec<IaVariant> {
    let props: BTreeSet<VarId> = lts
        .var_universe()
        .into_iter()
        .filter(|_| rng.gen_bool(0.3))
        .collect();
    vec![
        IaVariant::Ia1,
        IaVariant::Ia2,
        IaVariant::Ia3,
        IaVariant::Ia4(props),
    ]
}

pub fn corpus(seed: u64, count: usize) -> Vec<(Lts, Vec<IaVariant>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let lts = random_lts(&mut rng, 50, 150);
            let vs = variants(&mut rng, &lts);
            (lts, vs)
        })
        .collect()
}

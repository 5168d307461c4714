use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use super::{Op, PbesError, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand<K> {
    Const(bool),
    Var(K),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation<K> {
    pub lhs: K,
    pub op: Op,
    pub rhs: Vec<Operand<K>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<K> {
    pub sign: Sign,
    pub equations: Vec<Equation<K>>,
}

/// An alternation-free boolean equation system. Blocks are listed in
/// topological order: block `i` may only refer to variables of blocks
/// `k >= i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bes<K> {
    pub blocks: Vec<Block<K>>,
}

impl<K> Bes<K>
where
    K: Clone + Eq + Hash + Ord + Debug,
{
    pub fn single(sign: Sign, equations: Vec<Equation<K>>) -> Self {
        Bes {
            blocks: vec![Block { sign, equations }],
        }
    }

    /// Values of every variable: each block is the `sign`-fixed point of its
    /// equations, computed by Kleene iteration from all-false (`Mu`) or
    /// all-true (`Nu`), in the context of the already solved later blocks.
    pub fn solve(&self) -> Result<BTreeMap<K, bool>, PbesError> {
        let mut owner: HashMap<&K, (usize, usize)> = HashMap::new();
        for (b, block) in self.blocks.iter().enumerate() {
            for (i, eq) in block.equations.iter().enumerate() {
                if owner.insert(&eq.lhs, (b, i)).is_some() {
                    return Err(PbesError::Redefined(format!("{:?}", eq.lhs)));
                }
            }
        }
        for (b, block) in self.blocks.iter().enumerate() {
            for eq in &block.equations {
                for operand in &eq.rhs {
                    if let Operand::Var(k) = operand {
                        match owner.get(k) {
                            None => return Err(PbesError::Undefined(format!("{k:?}"))),
                            Some(&(ob, _)) if ob < b => {
                                return Err(PbesError::BlockOrder { from: b, to: ob })
                            }
                            Some(_) => {}
                        }
                    }
                }
            }
        }

        let mut solved: HashMap<&K, bool> = HashMap::new();
        for (b, block) in self.blocks.iter().enumerate().rev() {
            let init = block.sign == Sign::Nu;
            let mut current = vec![init; block.equations.len()];
            loop {
                let mut changed = false;
                for (i, eq) in block.equations.iter().enumerate() {
                    let value = |o: &Operand<K>| match o {
                        Operand::Const(c) => *c,
                        Operand::Var(k) => {
                            let (ob, oi) = owner[k];
                            if ob == b {
                                current[oi]
                            } else {
                                solved[k]
                            }
                        }
                    };
                    let v = match eq.op {
                        Op::Or => eq.rhs.iter().any(value),
                        Op::And => eq.rhs.iter().all(value),
                    };
                    if v != current[i] {
                        current[i] = v;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            for (eq, v) in block.equations.iter().zip(current) {
                solved.insert(&eq.lhs, v);
            }
        }
        Ok(solved.into_iter().map(|(k, v)| (k.clone(), v)).collect())
    }
}

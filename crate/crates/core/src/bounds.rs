//! Upper bounds on the achievable key length, in bits, for the three cases.
//!
//! Every bound is the normalized crossing weight of some partition of the
//! budget graph; the partition is kept as a witness so the value can be
//! re-derived independently.

use alloc::vec::Vec;

use crate::graph::{self, Partition};
use crate::model::NetworkSpec;
use crate::{Error, Rational, Result, TerminalId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    Broadcast,
    Subgroup { s: TerminalId, t: TerminalId },
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// Smallest budget between the center and a leaf.
    MinLeafBudget,
    /// Minimum s-t cut of the budget graph.
    MinStCut,
    /// Minimum over all multi-cuts of crossing weight / (blocks - 1).
    MinNormalizedMulticut,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::MinLeafBudget => "min-leaf-budget",
            Formula::MinStCut => "min-st-cut",
            Formula::MinNormalizedMulticut => "min-normalized-multicut",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub case: BoundCase,
    pub value: Rational,
    pub witness: Partition,
    pub formula: Formula,
}

impl BoundReport {
    /// Largest whole number of key bits the bound allows.
    pub fn floor(&self) -> u64 {
        self.value.to_integer()
    }

    /// Normalized crossing weight of the witness, recomputed from `spec`.
    pub fn reevaluate(&self, spec: &NetworkSpec) -> Rational {
        self.witness.normalized_weight(&spec.graph())
    }
}

/// Bound for a star centered at terminal 0: the smallest leaf budget.
///
/// Ties pick the smallest leaf id; the witness isolates that leaf.
pub fn broadcast_bound(spec: &NetworkSpec) -> Result<BoundReport> {
    if let Some(pair) = spec.non_star_pair() {
        return Err(Error::NotAStar(pair));
    }
    let (leaf, bits) = (1..spec.m())
        .map(|i| (i, spec.budget(0, i)))
        .min_by_key(|&(i, b)| (b, i))
        .expect("m >= 2");
    let rest: Vec<TerminalId> = (0..spec.m()).filter(|&t| t != leaf).collect();
    Ok(BoundReport {
        case: BoundCase::Broadcast,
        value: Rational::from_integer(bits),
        witness: Partition::bipartition(spec.m(), &rest),
        formula: Formula::MinLeafBudget,
    })
}

/// Bound for the pair `{s, t}`: the minimum s-t cut, found by max-flow.
pub fn subgroup_bound(spec: &NetworkSpec, s: TerminalId, t: TerminalId) -> Result<BoundReport> {
    let g = spec.graph();
    let flow = graph::max_flow(&g, s, t)?;
    let cut = flow.min_cut(&g);
    assert_eq!(cut.value, flow.value, "residual cut must match the flow value");
    Ok(BoundReport {
        case: BoundCase::Subgroup { s, t },
        value: Rational::from_integer(flow.value),
        witness: cut.witness,
        formula: Formula::MinStCut,
    })
}

/// Bound for all terminals: the minimum normalized multi-cut.
pub fn group_bound(spec: &NetworkSpec) -> Result<BoundReport> {
    let all: Vec<TerminalId> = (0..spec.m()).collect();
    let (value, witness) = graph::min_normalized_multicut(&spec.graph(), &all)?;
    Ok(BoundReport {
        case: BoundCase::Group,
        value,
        witness,
        formula: Formula::MinNormalizedMulticut,
    })
}

/// The two weaker bounds implied by the multi-cut bound: the global minimum
/// 2-block cut and the total budget divided by `m - 1`.
pub fn corollary_bounds(spec: &NetworkSpec) -> Result<(u64, Rational)> {
    let cut = graph::global_min_cut(&spec.graph())?;
    let average = Rational::new(spec.total_budget(), spec.m() as u64 - 1);
    Ok((cut.value, average))
}

/// Sum of block entropies minus the joint entropy, counted in bits.
///
/// A pair inside a block contributes its budget to that block once; a pair
/// split across blocks contributes its budget to each side's marginal.
pub fn entropy_excess(spec: &NetworkSpec, partition: &Partition) -> u64 {
    let joint = spec.total_budget();
    let mut sum = 0;
    for block in partition.blocks() {
        for (pair, bits) in spec.pairs() {
            let a = block.contains(&pair.lo());
            let b = block.contains(&pair.hi());
            if a || b {
                sum += bits;
            }
        }
    }
    sum - joint
}

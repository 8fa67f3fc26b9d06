//! Combining sub-models produced for the predecessors of a presumed node.
//!
//! A node presumed false needs every in-edge to be ineffective, so one
//! sub-model per predecessor pool has to hold at the same time
//! (conjunctive). A node presumed true needs a single effective in-edge, so
//! every sub-model is an alternative on its own; compatible alternatives are
//! still unioned so each answer carries as much information as possible
//! (disjunctive).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::model::PartialModel;

/// Every conflict-free union taking one sub-model from each pool.
///
/// An empty list of pools yields the single empty model; any empty pool
/// makes the whole conjunction unsatisfiable.
pub fn conjunctive_merge(pools: &[Vec<PartialModel>]) -> Vec<PartialModel> {
    let mut acc: Vec<PartialModel> = alloc::vec![PartialModel::new()];
    for pool in pools {
        acc = merge_pair(&acc, pool);
        if acc.is_empty() {
            break;
        }
    }
    acc
}

pub(crate) fn merge_pair(left: &[PartialModel], right: &[PartialModel]) -> Vec<PartialModel> {
    let mut out = BTreeSet::new();
    for l in left {
        for r in right {
            if let Some(u) = l.union(r) {
                out.insert(u);
            }
        }
    }
    out.into_iter().collect()
}

/// Each sub-model absorbs, in pool order, every other sub-model still
/// compatible with what it has absorbed so far. Duplicates and strict
/// subsets of other results are dropped.
pub fn disjunctive_merge(pool: &[PartialModel]) -> Vec<PartialModel> {
    let mut grown = BTreeSet::new();
    for (i, seed) in pool.iter().enumerate() {
        let mut acc = seed.clone();
        for (j, other) in pool.iter().enumerate() {
            if i != j {
                if let Some(u) = acc.union(other) {
                    acc = u;
                }
            }
        }
        grown.insert(acc);
    }
    let grown: Vec<PartialModel> = grown.into_iter().collect();
    grown
        .iter()
        .filter(|m| !grown.iter().any(|o| o.len() > m.len() && m.is_subset_of(o)))
        .cloned()
        .collect()
}

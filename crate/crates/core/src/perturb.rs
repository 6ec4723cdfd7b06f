//! Bookkeeping for the deterministic angle perturbation that puts compiled
//! instances in general position.
//!
//! Every segment's angle is a base direction (a multiple of 45 degrees)
//! followed by `|S|` groups of `|S| + 1` perturbation bits. Segment `k` owns
//! group `k` and starts with only that group's lowest bit set. Folding along
//! `s` adds `s`'s bits in `s`'s group, shifted left once, to every reflected
//! segment. Two segments can only become collinear when their codes agree,
//! which is what keeps an optimal solution from folding two segments at once.
//!
//! Only the ledger is modelled; coordinates stay unperturbed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::fold::{Instance, SegmentId};
use crate::geom::Segment;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngleCode {
    /// Direction in units of 45 degrees, `0..8`, from `p` to `q`; `None`
    /// when the segment is not at a multiple of 45 degrees.
    pub base_direction: Option<u8>,
    /// One entry per group, each below `2^group_bits`.
    pub ledger: Vec<BigUint>,
    pub owner_group: usize,
    pub group_bits: usize,
}

impl AngleCode {
    /// Index of the highest set bit in `group`, if any.
    pub fn leading_bit(&self, group: usize) -> Option<u64> {
        let g = &self.ledger[group];
        (!g.is_zero()).then(|| g.bits() - 1)
    }

    /// Number of set bits over all groups.
    pub fn ones(&self) -> u64 {
        self.ledger.iter().map(BigUint::count_ones).sum()
    }
}

pub type CodeMap = BTreeMap<SegmentId, AngleCode>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    #[error("segment {0} has no angle code")]
    UnknownSegment(SegmentId),
    #[error("group {group} of segment {segment} overflowed its {bits} bits")]
    Overflow { segment: SegmentId, group: usize, bits: usize },
}

/// Direction of `s` as a multiple of 45 degrees, when it is one.
pub fn octant(s: &Segment) -> Option<u8> {
    let (dx, dy) = s.direction();
    let diagonal = dx.abs() == dy.abs();
    if !(dx.is_zero() || dy.is_zero() || diagonal) {
        return None;
    }
    let sign = |v: &crate::geom::Rational| {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    let k = match (sign(&dx), sign(&dy)) {
        (1, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        (-1, 1) => 3,
        (-1, 0) => 4,
        (-1, -1) => 5,
        (0, -1) => 6,
        (1, -1) => 7,
        _ => unreachable!("segments have nonzero length"),
    };
    Some(k)
}

/// Give segment `k` (in instance order) group `k` with its lowest bit set.
pub fn assign_codes(inst: &Instance) -> CodeMap {
    let n = inst.len();
    inst.segments
        .iter()
        .enumerate()
        .map(|(k, (id, s))| {
            let mut ledger = vec![BigUint::zero(); n];
            ledger[k] = BigUint::one();
            let code = AngleCode {
                base_direction: octant(s),
                ledger,
                owner_group: k,
                group_bits: n + 1,
            };
            (*id, code)
        })
        .collect()
}

/// Apply a fold along `folded` that reflects `reflected`.
pub fn fold_update(
    codes: &CodeMap,
    folded: SegmentId,
    reflected: &BTreeSet<SegmentId>,
) -> Result<CodeMap, PerturbError> {
    let s = codes.get(&folded).ok_or(PerturbError::UnknownSegment(folded))?;
    let g = s.owner_group;
    let add = &s.ledger[g] << 1u32;
    let axis = s.base_direction;
    let mut out = codes.clone();
    for id in reflected {
        let t = out.get_mut(id).ok_or(PerturbError::UnknownSegment(*id))?;
        let sum = &t.ledger[g] + &add;
        if sum.bits() > t.group_bits as u64 {
            return Err(PerturbError::Overflow {
                segment: *id,
                group: g,
                bits: t.group_bits,
            });
        }
        t.ledger[g] = sum;
        // mirror the direction across the fold axis
        t.base_direction = match (axis, t.base_direction) {
            (Some(a), Some(b)) => Some(((2 * a as i32 - b as i32).rem_euclid(8)) as u8),
            _ => None,
        };
    }
    Ok(out)
}

/// Necessary condition for two segments to be collinear in the perturbed
/// instance: same ledger and same undirected base direction.
pub fn alignment_possible(a: &AngleCode, b: &AngleCode) -> bool {
    let same_dir = match (a.base_direction, b.base_direction) {
        (Some(x), Some(y)) => x % 4 == y % 4,
        (None, None) => true,
        _ => false,
    };
    same_dir && a.ledger == b.ledger
}

/// Codes after each fold, with the group of the segment folded along.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerHistory {
    pub steps: Vec<(usize, CodeMap)>,
}

impl LedgerHistory {
    pub fn current<'a>(&'a self, start: &'a CodeMap) -> &'a CodeMap {
        self.steps.last().map_or(start, |(_, c)| c)
    }
}

/// Run `folds` (segment folded along, segments reflected) from `start`.
pub fn replay_ledger(
    start: &CodeMap,
    folds: &[(SegmentId, BTreeSet<SegmentId>)],
) -> Result<LedgerHistory, PerturbError> {
    let mut hist = LedgerHistory::default();
    for (s, refl) in folds {
        let next = fold_update(hist.current(start), *s, refl)?;
        let g = start[s].owner_group;
        hist.steps.push((g, next));
    }
    Ok(hist)
}

//! Exact search for fold sequences.
//!
//! Iterative deepening over legal folds with a transposition table keyed on
//! the exact sorted segment set. Folding either side of a line yields mirror
//! images of one another, and every legality predicate is invariant under
//! isometries, so the decision search only expands one side per line (the
//! one moving fewer segments). Enumeration of sequences expands both.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::fold::{
    apply_fold, apply_fold_screened, approximations, fold_lines, legal_moves, segments_on_line, FoldMode, FoldMove, FoldState,
    Illegality, Instance, SegmentId,
};
use crate::geom::{convex_hull, on_hull_edges, side_of, Point, Segment, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub node_cap: u64,
    pub time_cap: Duration,
    /// Deepen one fold at a time so the first solution found is shortest.
    /// When off, a single depth-first pass at `max_depth` decides whether
    /// any solution of at most that length exists.
    #[serde(default = "yes")]
    pub iterative: bool,
}

fn yes() -> bool {
    true
}

impl SearchBudget {
    pub fn depth(max_depth: usize) -> Self {
        SearchBudget {
            max_depth,
            ..Default::default()
        }
    }

    /// Single pass at `max_depth`: answers "at most k folds?" without
    /// promising a shortest sequence.
    pub fn decision(max_depth: usize) -> Self {
        SearchBudget {
            max_depth,
            iterative: false,
            ..Default::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 0,
            node_cap: 50_000_000,
            time_cap: Duration::from_secs(600),
            iterative: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub table_hits: u64,
    pub depth_reached: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Solved(Vec<FoldMove>),
    /// Proven: no sequence of at most `max_depth` legal folds empties the instance.
    Unsolvable,
    ResourceExhausted,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search resources exhausted after {nodes} nodes")]
pub struct ResourceExhausted {
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {illegality}")]
pub struct ReplayError {
    pub index: usize,
    pub illegality: Illegality,
}

/// Apply `seq` in order, stopping at the first illegal move.
pub fn replay(inst: &Instance, seq: &[FoldMove], mode: FoldMode) -> Result<FoldState, ReplayError> {
    replay_from(&FoldState::new(inst), seq, mode)
}

pub fn replay_from(
    start: &FoldState,
    seq: &[FoldMove],
    mode: FoldMode,
) -> Result<FoldState, ReplayError> {
    let mut st = start.clone();
    for (index, mv) in seq.iter().enumerate() {
        st = apply_fold(&st, mv, mode).map_err(|illegality| ReplayError { index, illegality })?;
    }
    Ok(st)
}

struct Meter {
    nodes: u64,
    hits: u64,
    node_cap: u64,
    deadline: Instant,
}

impl Meter {
    fn new(budget: &SearchBudget) -> Self {
        Meter {
            nodes: 0,
            hits: 0,
            node_cap: budget.node_cap,
            deadline: Instant::now() + budget.time_cap,
        }
    }

    fn tick(&mut self) -> Result<(), ResourceExhausted> {
        self.nodes += 1;
        if self.nodes > self.node_cap || (self.nodes.is_multiple_of(256) && Instant::now() > self.deadline) {
            return Err(ResourceExhausted { nodes: self.nodes });
        }
        Ok(())
    }
}

fn count_side(state: &FoldState, mv: &FoldMove, side: Side) -> usize {
    state
        .segments()
        .iter()
        .filter(|(_, s)| {
            s.endpoints()
                .iter()
                .any(|p| side_of(p, &mv.line) == side)
        })
        .count()
}

/// Legal successors with one representative side per line. Hull folds come first.
pub fn representative_successors(state: &FoldState, mode: FoldMode) -> Vec<(FoldMove, FoldState)> {
    let points: Vec<Point> = state
        .segments()
        .iter()
        .flat_map(|(_, s)| [s.p().clone(), s.q().clone()])
        .collect();
    let hull = convex_hull(&points);
    let approx = approximations(state);
    let mut out: Vec<(bool, FoldMove, FoldState)> = Vec::new();
    for line in fold_lines(state) {
        let left = FoldMove::new(line, Side::Left);
        // Legality does not depend on the side, so screen before counting.
        let Ok(probe) = apply_fold_screened(state, &left, mode, &approx) else {
            continue;
        };
        let right = FoldMove::new(left.line.clone(), Side::Right);
        let (mv, next) = if count_side(state, &right, Side::Right) < count_side(state, &left, Side::Left) {
            let next = apply_fold_screened(state, &right, mode, &approx).expect("mirror of a legal fold");
            (right, next)
        } else {
            (left, probe)
        };
        {
            let on_hull = segments_on_line(state, &mv.line)
                .iter()
                .any(|id| state.segment(*id).is_some_and(|s| on_hull_edges(s, &hull)));
            out.push((on_hull, mv, next));
        }
    }
    out.sort_by_key(|(hull, _, _)| !*hull);
    out.into_iter().map(|(_, m, s)| (m, s)).collect()
}

struct Solver {
    mode: FoldMode,
    meter: Meter,
    /// State key -> largest remaining depth already proven insufficient.
    failed: HashMap<Vec<Segment>, usize>,
    depth_reached: usize,
}

impl Solver {
    fn dfs(
        &mut self,
        state: &FoldState,
        remaining: usize,
        path: &mut Vec<FoldMove>,
    ) -> Result<bool, ResourceExhausted> {
        if state.is_empty() {
            return Ok(true);
        }
        if remaining == 0 {
            return Ok(false);
        }
        let key = state.key();
        if let Some(&r) = self.failed.get(&key) {
            if r >= remaining {
                self.meter.hits += 1;
                return Ok(false);
            }
        }
        self.meter.tick()?;
        self.depth_reached = self.depth_reached.max(path.len() + 1);
        for (mv, next) in representative_successors(state, self.mode) {
            path.push(mv);
            if self.dfs(&next, remaining - 1, path)? {
                return Ok(true);
            }
            path.pop();
        }
        let e = self.failed.entry(key).or_insert(0);
        *e = (*e).max(remaining);
        Ok(false)
    }
}

/// Decide whether at most `budget.max_depth` legal folds solve `inst`.
pub fn solve(inst: &Instance, mode: FoldMode, budget: SearchBudget) -> SearchResult {
    solve_state(&FoldState::new(inst), mode, budget)
}

pub fn solve_state(start: &FoldState, mode: FoldMode, budget: SearchBudget) -> SearchResult {
    let mut solver = Solver {
        mode,
        meter: Meter::new(&budget),
        failed: HashMap::new(),
        depth_reached: 0,
    };
    let mut outcome = SearchOutcome::Unsolvable;
    let first = if budget.iterative { 0 } else { budget.max_depth };
    for depth in first..=budget.max_depth {
        let mut path = Vec::new();
        match solver.dfs(start, depth, &mut path) {
            Ok(true) => {
                outcome = SearchOutcome::Solved(path);
                break;
            }
            Ok(false) => {}
            Err(_) => {
                outcome = SearchOutcome::ResourceExhausted;
                break;
            }
        }
    }
    SearchResult {
        outcome,
        stats: SearchStats {
            nodes: solver.meter.nodes,
            table_hits: solver.meter.hits,
            depth_reached: solver.depth_reached,
        },
    }
}

/// Smallest number of folds (up to `cap`) solving `inst`.
pub fn min_folds(inst: &Instance, mode: FoldMode, cap: usize) -> Result<Option<usize>, ResourceExhausted> {
    let res = solve(inst, mode, SearchBudget::depth(cap));
    match res.outcome {
        SearchOutcome::Solved(seq) => Ok(Some(seq.len())),
        SearchOutcome::Unsolvable => Ok(None),
        SearchOutcome::ResourceExhausted => Err(ResourceExhausted {
            nodes: res.stats.nodes,
        }),
    }
}

struct Enumerator {
    mode: FoldMode,
    meter: Meter,
    dead: HashMap<Vec<Segment>, BTreeSet<usize>>,
}

impl Enumerator {
    fn all(
        &mut self,
        state: &FoldState,
        remaining: usize,
        path: &mut Vec<FoldMove>,
        out: &mut Vec<Vec<FoldMove>>,
    ) -> Result<bool, ResourceExhausted> {
        if remaining == 0 {
            if state.is_empty() {
                out.push(path.clone());
                return Ok(true);
            }
            return Ok(false);
        }
        if state.is_empty() {
            return Ok(false);
        }
        let key = state.key();
        if self.dead.get(&key).is_some_and(|d| d.contains(&remaining)) {
            self.meter.hits += 1;
            return Ok(false);
        }
        self.meter.tick()?;
        let mut any = false;
        for mv in legal_moves(state, self.mode) {
            let next = apply_fold(state, &mv, self.mode).expect("legal move applies");
            path.push(mv);
            any |= self.all(&next, remaining - 1, path, out)?;
            path.pop();
        }
        if !any {
            self.dead.entry(key).or_default().insert(remaining);
        }
        Ok(any)
    }

    fn orders(
        &mut self,
        state: &FoldState,
        remaining: usize,
        path: &mut Vec<Vec<SegmentId>>,
        out: &mut BTreeSet<Vec<Vec<SegmentId>>>,
    ) -> Result<bool, ResourceExhausted> {
        if remaining == 0 {
            if state.is_empty() {
                out.insert(path.clone());
                return Ok(true);
            }
            return Ok(false);
        }
        if state.is_empty() {
            return Ok(false);
        }
        let key = state.key();
        if self.dead.get(&key).is_some_and(|d| d.contains(&remaining)) {
            self.meter.hits += 1;
            return Ok(false);
        }
        self.meter.tick()?;
        let mut any = false;
        for (_, next) in representative_successors(state, self.mode) {
            let step = next.history().last().expect("just folded").consumed.clone();
            path.push(step);
            any |= self.orders(&next, remaining - 1, path, out)?;
            path.pop();
        }
        if !any {
            self.dead.entry(key).or_default().insert(remaining);
        }
        Ok(any)
    }
}

/// Every legal sequence of exactly `length` folds that solves `inst`, both
/// sides of each line included.
pub fn enumerate_optimal(
    inst: &Instance,
    mode: FoldMode,
    length: usize,
) -> Result<Vec<Vec<FoldMove>>, ResourceExhausted> {
    enumerate_optimal_with(inst, mode, length, SearchBudget::default())
}

pub fn enumerate_optimal_with(
    inst: &Instance,
    mode: FoldMode,
    length: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<FoldMove>>, ResourceExhausted> {
    let mut e = Enumerator {
        mode,
        meter: Meter::new(&budget),
        dead: HashMap::new(),
    };
    let mut out = Vec::new();
    e.all(&FoldState::new(inst), length, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Every distinct order in which segments can be creased by a solving
/// sequence of exactly `length` folds. Each step lists the ids consumed by
/// that fold; the reflected side is factored out.
pub fn enumerate_orders(
    inst: &Instance,
    mode: FoldMode,
    length: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<Vec<SegmentId>>>, ResourceExhausted> {
    enumerate_orders_from(&FoldState::new(inst), mode, length, budget)
}

pub fn enumerate_orders_from(
    start: &FoldState,
    mode: FoldMode,
    length: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<Vec<SegmentId>>>, ResourceExhausted> {
    let mut e = Enumerator {
        mode,
        meter: Meter::new(&budget),
        dead: HashMap::new(),
    };
    let mut out = BTreeSet::new();
    e.orders(start, length, &mut Vec::new(), &mut out)?;
    Ok(out.into_iter().collect())
}

/// Look for a solving sequence of at most `length` folds that contains a
/// fold for which `flag(state_before, creased_ids)` holds. `Ok(None)` proves
/// that every solving sequence of that length avoids such folds.
pub fn find_flagged_solution<F>(
    start: &FoldState,
    mode: FoldMode,
    length: usize,
    budget: SearchBudget,
    flag: F,
) -> Result<Option<Vec<FoldMove>>, ResourceExhausted>
where
    F: Fn(&FoldState, &[SegmentId]) -> bool,
{
    let mut f = Flagged {
        mode,
        meter: Meter::new(&budget),
        failed: HashMap::new(),
        flag,
    };
    let mut path = Vec::new();
    Ok(f.dfs(start, length, false, &mut path)?.then_some(path))
}

struct Flagged<F> {
    mode: FoldMode,
    meter: Meter,
    failed: HashMap<(Vec<Segment>, bool), usize>,
    flag: F,
}

impl<F: Fn(&FoldState, &[SegmentId]) -> bool> Flagged<F> {
    fn dfs(
        &mut self,
        state: &FoldState,
        remaining: usize,
        flagged: bool,
        path: &mut Vec<FoldMove>,
    ) -> Result<bool, ResourceExhausted> {
        if state.is_empty() {
            return Ok(flagged);
        }
        if remaining == 0 {
            return Ok(false);
        }
        let key = (state.key(), flagged);
        if self.failed.get(&key).is_some_and(|&r| r >= remaining) {
            self.meter.hits += 1;
            return Ok(false);
        }
        self.meter.tick()?;
        for (mv, next) in representative_successors(state, self.mode) {
            let step = &next.history().last().expect("just folded").consumed;
            let now = flagged || (self.flag)(state, step);
            path.push(mv);
            if self.dfs(&next, remaining - 1, now, path)? {
                return Ok(true);
            }
            path.pop();
        }
        let e = self.failed.entry(key).or_insert(0);
        *e = (*e).max(remaining);
        Ok(false)
    }
}

/// Crease order of a replayed sequence, one entry per fold.
pub fn consumed_order(state: &FoldState) -> Vec<Vec<SegmentId>> {
    state.history().iter().map(|h| h.consumed.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Segment;

    fn inst(segs: Vec<Segment>) -> Instance {
        Instance::from_segments(segs)
    }

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::from_ints(ax, ay, bx, by)
    }

    #[test]
    fn single_segment() {
        let i = inst(vec![seg(0, 0, 0, 1)]);
        let r = solve(&i, FoldMode::Restricted, SearchBudget::depth(1));
        match r.outcome {
            SearchOutcome::Solved(seq) => assert_eq!(seq.len(), 1),
            other => panic!("{other:?}"),
        }
        assert_eq!(min_folds(&i, FoldMode::Restricted, 3), Ok(Some(1)));
        assert_eq!(enumerate_optimal(&i, FoldMode::Restricted, 1).unwrap().len(), 2);
    }

    #[test]
    fn empty_instance() {
        let i = inst(vec![]);
        assert_eq!(enumerate_optimal(&i, FoldMode::Restricted, 0).unwrap(), vec![Vec::<FoldMove>::new()]);
        assert_eq!(min_folds(&i, FoldMode::Restricted, 0), Ok(Some(0)));
    }

    #[test]
    fn perpendicular_cross_takes_two() {
        let i = inst(vec![seg(0, 0, 4, 0), seg(2, -1, 2, 1)]);
        let r = solve(&i, FoldMode::Unrestricted, SearchBudget::depth(2));
        let SearchOutcome::Solved(seq) = r.outcome else { panic!("{:?}", r.outcome) };
        assert_eq!(seq.len(), 2);
        assert!(replay(&i, &seq, FoldMode::Unrestricted).unwrap().is_empty());
    }

    #[test]
    fn oblique_cross_needs_three() {
        let i = inst(vec![seg(0, 0, 4, 0), seg(0, -1, 2, 1)]);
        let r = solve(&i, FoldMode::Unrestricted, SearchBudget::depth(2));
        assert_eq!(r.outcome, SearchOutcome::Unsolvable);
        assert_eq!(min_folds(&i, FoldMode::Unrestricted, 2), Ok(None));
        assert_eq!(min_folds(&i, FoldMode::Unrestricted, 5), Ok(Some(3)));
    }

    #[test]
    fn replay_reports_step() {
        let i = inst(vec![seg(0, 0, 0, 1)]);
        let bad = FoldMove::new(crate::geom::Line::from_ints(1, 0, 9).unwrap(), Side::Left);
        let err = replay(&i, &[bad], FoldMode::Restricted).unwrap_err();
        assert_eq!(err.index, 0);
        assert_eq!(err.illegality, Illegality::NoSegmentOnLine);
    }

    #[test]
    fn node_cap_exhausts() {
        let i = inst(vec![seg(0, 0, 4, 0), seg(0, -1, 2, 1)]);
        let budget = SearchBudget {
            max_depth: 6,
            node_cap: 2,
            ..Default::default()
        };
        assert_eq!(solve(&i, FoldMode::Unrestricted, budget).outcome, SearchOutcome::ResourceExhausted);
    }

    #[test]
    fn orders_match_full_enumeration() {
        let i = inst(vec![seg(0, 0, 0, 2), seg(3, 0, 3, 2), seg(-1, 5, 4, 5)]);
        let full = enumerate_optimal(&i, FoldMode::Restricted, 3).unwrap();
        let mut projected = BTreeSet::new();
        for seq in &full {
            projected.insert(consumed_order(&replay(&i, seq, FoldMode::Restricted).unwrap()));
        }
        let orders = enumerate_orders(&i, FoldMode::Restricted, 3, SearchBudget::default()).unwrap();
        assert_eq!(projected.into_iter().collect::<Vec<_>>(), orders);
        assert!(!orders.is_empty());
    }
}

//! Fold states and the all-layers simple fold.
//!
//! A fold along a supporting line keeps the segments on one open side,
//! reflects the segments on the other side across the line, drops whatever
//! lies on the line (it becomes a crease) and merges collinear overlaps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::{
    approx_boxes_apart, approx_segment, classify_intersection, clip_to_halfplane, line_meets_interior,
    line_meets_interior_screened, line_through, merge_pair, reflect_segment, side_of, ApproxLine,
    Intersection, Line, Rational, Segment, Side,
};

pub type SegmentId = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub segments: Vec<(SegmentId, Segment)>,
    #[serde(default)]
    pub roles: BTreeMap<SegmentId, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("duplicate segment id {0}")]
    DuplicateId(SegmentId),
    #[error("role given for unknown segment id {0}")]
    UnknownRole(SegmentId),
}

impl Instance {
    pub fn new(segments: Vec<(SegmentId, Segment)>) -> Result<Self, InstanceError> {
        Instance::with_roles(segments, BTreeMap::new())
    }

    pub fn with_roles(
        segments: Vec<(SegmentId, Segment)>,
        roles: BTreeMap<SegmentId, String>,
    ) -> Result<Self, InstanceError> {
        let mut seen = BTreeSet::new();
        for (id, _) in &segments {
            if !seen.insert(*id) {
                return Err(InstanceError::DuplicateId(*id));
            }
        }
        if let Some(id) = roles.keys().find(|id| !seen.contains(*id)) {
            return Err(InstanceError::UnknownRole(*id));
        }
        Ok(Instance { segments, roles })
    }

    /// Segments numbered from 0 in the given order.
    pub fn from_segments(segs: impl IntoIterator<Item = Segment>) -> Self {
        Instance {
            segments: segs
                .into_iter()
                .enumerate()
                .map(|(i, s)| (i as SegmentId, s))
                .collect(),
            roles: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segment(&self, id: SegmentId) -> Option<&Segment> {
        self.segments.iter().find(|(i, _)| *i == id).map(|(_, s)| s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoldMove {
    pub line: Line,
    /// The open half-plane whose contents get reflected.
    pub reflected_side: Side,
}

impl FoldMove {
    pub fn new(line: Line, reflected_side: Side) -> Self {
        FoldMove {
            line,
            reflected_side,
        }
    }

    /// Fold along the supporting line of `s`.
    pub fn along(s: &Segment, reflected_side: Side) -> Self {
        FoldMove::new(line_through(s), reflected_side)
    }

    pub fn kept_side(&self) -> Side {
        self.reflected_side.opposite()
    }
}

impl fmt::Debug for FoldMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fold[{:?} reflect {:?}]", self.line, self.reflected_side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldMode {
    /// Folds may not cut through other segments nor create crossings.
    #[default]
    Restricted,
    Unrestricted,
    /// Restricted, and the line may not even touch a segment's endpoint
    /// unless that segment shares a point with a segment on the line.
    Strict,
}

/// Which newly created crossings make a restricted fold illegal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CrossingPolicy {
    /// Any new interior crossing.
    #[default]
    All,
    /// Only crossings at a non-right angle.
    ObliqueOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, thiserror::Error)]
pub enum Illegality {
    #[error("no segment lies on the fold line")]
    NoSegmentOnLine,
    #[error("the fold line cuts through the interior of segment {0}")]
    StabsInterior(SegmentId),
    #[error("the fold line touches an endpoint of segment {0}")]
    TouchesEndpoint(SegmentId),
    #[error("the fold makes segments {0} and {1} cross at a right angle")]
    CreatesCrossing(SegmentId, SegmentId),
    #[error("the fold makes segments {0} and {1} cross at an oblique angle")]
    CreatesObliqueCrossing(SegmentId, SegmentId),
    #[error("a fold must reflect the Left or Right side")]
    InvalidSide,
}

/// One applied fold plus what it did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedFold {
    pub mv: FoldMove,
    /// Segments that lay on the fold line and became creases.
    pub consumed: Vec<SegmentId>,
    /// Segments (pre-fold ids) that had some part reflected.
    pub reflected: Vec<SegmentId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldState {
    segments: Vec<(SegmentId, Segment)>,
    history: Vec<AppliedFold>,
    provenance: BTreeMap<SegmentId, BTreeSet<SegmentId>>,
    next_id: SegmentId,
}

impl FoldState {
    pub fn new(inst: &Instance) -> Self {
        let mut segments = inst.segments.clone();
        segments.sort_by_key(|(id, _)| *id);
        let provenance = segments
            .iter()
            .map(|(id, _)| (*id, BTreeSet::from([*id])))
            .collect();
        let next_id = segments.last().map_or(0, |(id, _)| id + 1);
        FoldState {
            segments,
            history: Vec::new(),
            provenance,
            next_id,
        }
    }

    /// Current segments, ordered by id.
    pub fn segments(&self) -> &[(SegmentId, Segment)] {
        &self.segments
    }

    pub fn segment(&self, id: SegmentId) -> Option<&Segment> {
        self.segments
            .binary_search_by_key(&id, |(i, _)| *i)
            .ok()
            .map(|k| &self.segments[k].1)
    }

    pub fn history(&self) -> &[AppliedFold] {
        &self.history
    }

    pub fn moves(&self) -> impl Iterator<Item = &FoldMove> {
        self.history.iter().map(|h| &h.mv)
    }

    /// Input ids each current segment descends from.
    pub fn provenance(&self) -> &BTreeMap<SegmentId, BTreeSet<SegmentId>> {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Id-free canonical form: the sorted list of segments.
    pub fn key(&self) -> Vec<Segment> {
        let mut k: Vec<Segment> = self.segments.iter().map(|(_, s)| s.clone()).collect();
        k.sort();
        k
    }

    pub fn to_instance(&self, roles: &BTreeMap<SegmentId, String>) -> Instance {
        let roles = self
            .segments
            .iter()
            .filter_map(|(id, _)| {
                let origin = self.provenance.get(id)?.iter().next()?;
                roles.get(origin).map(|r| (*id, r.clone()))
            })
            .collect();
        Instance {
            segments: self.segments.clone(),
            roles,
        }
    }
}

/// Distinct supporting lines of the current segments, in first-seen id order.
pub fn fold_lines(state: &FoldState) -> Vec<Line> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (_, s) in &state.segments {
        let l = line_through(s);
        if seen.insert(l.clone()) {
            out.push(l);
        }
    }
    out
}

/// Segments of the state grouped by their supporting line.
pub fn segments_on_line(state: &FoldState, line: &Line) -> Vec<SegmentId> {
    state
        .segments
        .iter()
        .filter(|(_, s)| line.contains_segment(s))
        .map(|(id, _)| *id)
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Origin {
    Kept,
    Reflected,
}

struct Piece {
    parent: SegmentId,
    seg: Segment,
    origin: Origin,
    whole: bool,
}

struct Outcome {
    pieces: Vec<Piece>,
    consumed: Vec<SegmentId>,
}

fn split(state: &FoldState, mv: &FoldMove) -> Outcome {
    let line = &mv.line;
    let kept = mv.kept_side();
    let mut pieces = Vec::with_capacity(state.segments.len());
    let mut consumed = Vec::new();
    for (id, s) in &state.segments {
        let sp = side_of(s.p(), line);
        let sq = side_of(s.q(), line);
        if sp == Side::On && sq == Side::On {
            consumed.push(*id);
            continue;
        }
        if sp != Side::On && sq != Side::On && sp != sq {
            for (side, origin) in [(kept, Origin::Kept), (mv.reflected_side, Origin::Reflected)] {
                if let Some(part) = clip_to_halfplane(s, line, side) {
                    let seg = if origin == Origin::Reflected {
                        reflect_segment(&part, line)
                    } else {
                        part
                    };
                    pieces.push(Piece {
                        parent: *id,
                        seg,
                        origin,
                        whole: false,
                    });
                }
            }
            continue;
        }
        let side = if sp == Side::On { sq } else { sp };
        if side == kept {
            pieces.push(Piece {
                parent: *id,
                seg: s.clone(),
                origin: Origin::Kept,
                whole: true,
            });
        } else {
            pieces.push(Piece {
                parent: *id,
                seg: reflect_segment(s, line),
                origin: Origin::Reflected,
                whole: true,
            });
        }
    }
    Outcome { pieces, consumed }
}

fn bbox_disjoint(a: &Segment, b: &Segment) -> bool {
    let (ax0, ax1) = ordered(&a.p().x, &a.q().x);
    let (bx0, bx1) = ordered(&b.p().x, &b.q().x);
    if ax1 < bx0 || bx1 < ax0 {
        return true;
    }
    let (ay0, ay1) = ordered(&a.p().y, &a.q().y);
    let (by0, by1) = ordered(&b.p().y, &b.q().y);
    ay1 < by0 || by1 < ay0
}

fn ordered<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// First crossing between a kept piece and a reflected piece, if any.
fn new_crossing(pieces: &[Piece], policy: CrossingPolicy) -> Option<Illegality> {
    let (kept, refl): (Vec<&Piece>, Vec<&Piece>) =
        pieces.iter().partition(|p| p.origin == Origin::Kept);
    let ka: Vec<[f64; 4]> = kept.iter().map(|p| approx_segment(&p.seg)).collect();
    let ra: Vec<[f64; 4]> = refl.iter().map(|p| approx_segment(&p.seg)).collect();
    for (k, kb) in kept.iter().zip(&ka) {
        for (r, rb) in refl.iter().zip(&ra) {
            if approx_boxes_apart(kb, rb) || bbox_disjoint(&k.seg, &r.seg) {
                continue;
            }
            let (a, b) = (k.parent.min(r.parent), k.parent.max(r.parent));
            match classify_intersection(&k.seg, &r.seg) {
                Intersection::InteriorCrossOblique => {
                    return Some(Illegality::CreatesObliqueCrossing(a, b))
                }
                Intersection::InteriorCrossRight if policy == CrossingPolicy::All => {
                    return Some(Illegality::CreatesCrossing(a, b))
                }
                _ => {}
            }
        }
    }
    None
}

pub fn check_legal(state: &FoldState, mv: &FoldMove, mode: FoldMode) -> Option<Illegality> {
    check_legal_with(state, mv, mode, CrossingPolicy::All)
}

pub fn check_legal_with(
    state: &FoldState,
    mv: &FoldMove,
    mode: FoldMode,
    policy: CrossingPolicy,
) -> Option<Illegality> {
    evaluate(state, mv, mode, policy).err()
}

/// First segment whose interior the line crosses.
fn stabbed(state: &FoldState, line: &Line, approx: Option<&[[f64; 4]]>) -> Option<SegmentId> {
    match approx {
        Some(ap) => {
            let al = ApproxLine::of(line);
            state
                .segments
                .iter()
                .zip(ap)
                .find(|((_, s), a)| line_meets_interior_screened(line, &al, s, a))
                .map(|((id, _), _)| *id)
        }
        None => state
            .segments
            .iter()
            .find(|(_, s)| line_meets_interior(line, s))
            .map(|(id, _)| *id),
    }
}

/// First segment with exactly one endpoint on the line that shares no point
/// with any segment lying on the line.
fn touched(state: &FoldState, line: &Line, approx: Option<&[[f64; 4]]>) -> Option<SegmentId> {
    let al = ApproxLine::of(line);
    let far = |k: usize| {
        approx.is_some_and(|ap| {
            let a = &ap[k];
            al.side(a[0], a[1]).is_some() && al.side(a[2], a[3]).is_some()
        })
    };
    let on: Vec<&Segment> = state
        .segments
        .iter()
        .map(|(_, s)| s)
        .filter(|s| line.contains_segment(s))
        .collect();
    state.segments.iter().enumerate().find_map(|(k, (id, s))| {
        if far(k) {
            return None;
        }
        let tip = match (line.contains(s.p()), line.contains(s.q())) {
            (true, false) => s.p(),
            (false, true) => s.q(),
            _ => return None,
        };
        (!on.iter().any(|o| o.contains(tip))).then_some(*id)
    })
}

/// Float shadows of the state's segments, in segment order.
pub(crate) fn approximations(state: &FoldState) -> Vec<[f64; 4]> {
    state.segments.iter().map(|(_, s)| approx_segment(s)).collect()
}

fn evaluate(
    state: &FoldState,
    mv: &FoldMove,
    mode: FoldMode,
    policy: CrossingPolicy,
) -> Result<Outcome, Illegality> {
    evaluate_screened(state, mv, mode, policy, None)
}

fn evaluate_screened(
    state: &FoldState,
    mv: &FoldMove,
    mode: FoldMode,
    policy: CrossingPolicy,
    approx: Option<&[[f64; 4]]>,
) -> Result<Outcome, Illegality> {
    if mv.reflected_side == Side::On {
        return Err(Illegality::InvalidSide);
    }
    let on_line = match approx {
        Some(ap) => {
            let al = ApproxLine::of(&mv.line);
            state.segments.iter().zip(ap).any(|((_, s), a)| {
                al.side(a[0], a[1]).is_none()
                    && al.side(a[2], a[3]).is_none()
                    && mv.line.contains_segment(s)
            })
        }
        None => state.segments.iter().any(|(_, s)| mv.line.contains_segment(s)),
    };
    if !on_line {
        return Err(Illegality::NoSegmentOnLine);
    }
    if mode != FoldMode::Unrestricted {
        if let Some(id) = stabbed(state, &mv.line, approx) {
            return Err(Illegality::StabsInterior(id));
        }
    }
    if mode == FoldMode::Strict {
        if let Some(id) = touched(state, &mv.line, approx) {
            return Err(Illegality::TouchesEndpoint(id));
        }
    }
    let out = split(state, mv);
    if mode != FoldMode::Unrestricted {
        if let Some(ill) = new_crossing(&out.pieces, policy) {
            return Err(ill);
        }
    }
    Ok(out)
}

pub fn apply_fold(state: &FoldState, mv: &FoldMove, mode: FoldMode) -> Result<FoldState, Illegality> {
    apply_fold_with(state, mv, mode, CrossingPolicy::All)
}

pub fn apply_fold_with(
    state: &FoldState,
    mv: &FoldMove,
    mode: FoldMode,
    policy: CrossingPolicy,
) -> Result<FoldState, Illegality> {
    let out = evaluate(state, mv, mode, policy)?;
    Ok(build_next(state, mv, out))
}

/// `apply_fold_with` using precomputed float shadows of `state`'s segments.
pub(crate) fn apply_fold_screened(
    state: &FoldState,
    mv: &FoldMove,
    mode: FoldMode,
    approx: &[[f64; 4]],
) -> Result<FoldState, Illegality> {
    let out = evaluate_screened(state, mv, mode, CrossingPolicy::All, Some(approx))?;
    Ok(build_next(state, mv, out))
}

fn build_next(state: &FoldState, mv: &FoldMove, out: Outcome) -> FoldState {
    let mut next_id = state.next_id;
    let mut reflected: BTreeSet<SegmentId> = BTreeSet::new();
    // (id, segment, provenance)
    let mut merged: Vec<(SegmentId, Segment, BTreeSet<SegmentId>, [f64; 4])> = Vec::new();
    for piece in out.pieces {
        if piece.origin == Origin::Reflected {
            reflected.insert(piece.parent);
        }
        let id = if piece.whole {
            piece.parent
        } else {
            next_id += 1;
            next_id - 1
        };
        let approx = approx_segment(&piece.seg);
        let mut cur = (
            id,
            piece.seg,
            state.provenance.get(&piece.parent).cloned().unwrap_or_default(),
            approx,
        );
        while let Some(k) = merged
            .iter()
            .position(|(_, s, _, a)| !approx_boxes_apart(a, &cur.3) && merge_pair(s, &cur.1).is_some())
        {
            let (oid, oseg, oprov, _) = merged.swap_remove(k);
            let seg = merge_pair(&oseg, &cur.1).expect("overlap checked");
            let mut prov = oprov;
            prov.extend(cur.2);
            let approx = approx_segment(&seg);
            cur = (oid.min(cur.0), seg, prov, approx);
        }
        merged.push(cur);
    }
    merged.sort_by_key(|(id, _, _, _)| *id);
    let provenance = merged.iter().map(|(id, _, p, _)| (*id, p.clone())).collect();
    let segments = merged.into_iter().map(|(id, s, _, _)| (id, s)).collect();
    let mut history = state.history.clone();
    history.push(AppliedFold {
        mv: mv.clone(),
        consumed: out.consumed,
        reflected: reflected.into_iter().collect(),
    });
    FoldState {
        segments,
        history,
        provenance,
        next_id,
    }
}

/// Every move along a current supporting line, both sides, that passes `check_legal`.
pub fn legal_moves(state: &FoldState, mode: FoldMode) -> Vec<FoldMove> {
    legal_moves_with(state, mode, CrossingPolicy::All)
}

pub fn legal_moves_with(state: &FoldState, mode: FoldMode, policy: CrossingPolicy) -> Vec<FoldMove> {
    let approx = approximations(state);
    let mut out = Vec::new();
    for line in fold_lines(state) {
        // Reflecting either side gives mirror images of one another, so
        // legality is decided once per line.
        let mv = FoldMove::new(line, Side::Left);
        if evaluate_screened(state, &mv, mode, policy, Some(&approx)).is_ok() {
            let right = FoldMove::new(mv.line.clone(), Side::Right);
            out.push(mv);
            out.push(right);
        }
    }
    out
}

/// Per-line legality report: the line, and `None` when legal.
pub fn line_diagnostics(state: &FoldState, mode: FoldMode) -> Vec<(Line, Option<Illegality>)> {
    fold_lines(state)
        .into_iter()
        .map(|line| {
            let ill = check_legal(state, &FoldMove::new(line.clone(), Side::Left), mode);
            (line, ill)
        })
        .collect()
}

pub fn is_solved(state: &FoldState) -> bool {
    state.segments.is_empty()
}

/// No two current segments share a supporting line.
pub fn is_general_position(state: &FoldState) -> bool {
    let mut seen = BTreeSet::new();
    state
        .segments
        .iter()
        .all(|(_, s)| seen.insert(line_through(s)))
}

/// Whether every segment lies in the closed half-plane `side` of `line`.
pub fn all_on_side(state: &FoldState, line: &Line, side: Side) -> bool {
    state.segments.iter().all(|(_, s)| {
        s.endpoints()
            .iter()
            .all(|p| matches!(side_of(p, line), x if x == side || x == Side::On))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Line, Segment};

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::from_ints(ax, ay, bx, by)
    }

    fn state(segs: Vec<Segment>) -> FoldState {
        FoldState::new(&Instance::from_segments(segs))
    }

    #[test]
    fn lines_of_state() {
        assert_eq!(fold_lines(&state(vec![seg(0, 0, 0, 2)])).len(), 1);
        assert_eq!(fold_lines(&state(vec![seg(0, 0, 1, 0), seg(3, 0, 4, 0)])).len(), 1);
        assert!(fold_lines(&state(vec![])).is_empty());
    }

    #[test]
    fn single_segment_fold_solves() {
        let st = state(vec![seg(0, 0, 0, 2)]);
        assert!(!is_solved(&st));
        let mv = FoldMove::new(Line::from_ints(1, 0, 0).unwrap(), Side::Left);
        let next = apply_fold(&st, &mv, FoldMode::Restricted).unwrap();
        assert!(is_solved(&next));
        assert_eq!(next.history().len(), 1);
        assert_eq!(next.history()[0].consumed, vec![0]);
        assert!(is_solved(&state(vec![])));
    }

    #[test]
    fn perpendicular_fold_merges_halves() {
        let st = state(vec![seg(0, 0, 4, 0), seg(2, -1, 2, 1)]);
        let mv = FoldMove::along(&seg(2, -1, 2, 1), Side::Left);
        let next = apply_fold(&st, &mv, FoldMode::Unrestricted).unwrap();
        // (0,0) reflected across x = 2 lands on (4,0): both halves coincide.
        assert_eq!(next.key(), vec![seg(2, 0, 4, 0)]);
        // the halves are new pieces of segment 0
        let (id, _) = &next.segments()[0];
        assert_eq!(next.provenance()[id], BTreeSet::from([0]));
        assert_eq!(
            check_legal(&st, &mv, FoldMode::Restricted),
            Some(Illegality::StabsInterior(0))
        );
    }

    #[test]
    fn oblique_fold_makes_a_v() {
        let c = seg(0, -1, 2, 1);
        let st = state(vec![seg(0, 0, 4, 0), c.clone()]);
        let next = apply_fold(&st, &FoldMove::along(&c, Side::Left), FoldMode::Unrestricted).unwrap();
        // line y = x - 1 meets a at (1,0); the left piece (1,0)-(4,0) stays,
        // the right piece (0,0)-(1,0) reflects to (1,0)-(1,-1).
        assert_eq!(next.key(), vec![seg(1, -1, 1, 0), seg(1, 0, 4, 0)]);
    }

    #[test]
    fn legality_modes() {
        let s = seg(0, 0, 0, 1);
        let st = state(vec![s.clone(), seg(-1, 5, 1, 5)]);
        let mv = FoldMove::along(&s, Side::Left);
        assert_eq!(check_legal(&st, &mv, FoldMode::Restricted), Some(Illegality::StabsInterior(1)));
        assert_eq!(check_legal(&st, &mv, FoldMode::Unrestricted), None);
        let off = FoldMove::new(Line::from_ints(1, 0, 9).unwrap(), Side::Left);
        assert_eq!(check_legal(&st, &off, FoldMode::Unrestricted), Some(Illegality::NoSegmentOnLine));
        let on = FoldMove::new(Line::from_ints(1, 0, 0).unwrap(), Side::On);
        assert_eq!(check_legal(&st, &on, FoldMode::Unrestricted), Some(Illegality::InvalidSide));
    }

    #[test]
    fn strict_blocks_endpoint_touch() {
        // x = 0 passes through (0,5), an endpoint of the horizontal
        let s = seg(0, 0, 0, 1);
        let st = state(vec![s.clone(), seg(0, 5, 2, 5)]);
        let mv = FoldMove::along(&s, Side::Left);
        assert_eq!(check_legal(&st, &mv, FoldMode::Restricted), None);
        assert_eq!(check_legal(&st, &mv, FoldMode::Strict), Some(Illegality::TouchesEndpoint(1)));
        // touching the folded segment itself is fine
        let st = state(vec![s.clone(), seg(0, 1, 2, 1)]);
        assert_eq!(check_legal(&st, &mv, FoldMode::Strict), None);
        // interiors still block
        let st = state(vec![s.clone(), seg(-1, 5, 1, 5)]);
        assert_eq!(check_legal(&st, &mv, FoldMode::Strict), Some(Illegality::StabsInterior(1)));
    }

    #[test]
    fn crossing_detection() {
        // Folding x = 0 flips the horizontal (1,2)-(3,2) onto (-3,2)-(-1,2),
        // which crosses the vertical (-2,1)-(-2,3) at a right angle.
        let st = state(vec![seg(0, 0, 0, 1), seg(1, 2, 3, 2), seg(-2, 1, -2, 3)]);
        let mv = FoldMove::along(&seg(0, 0, 0, 1), Side::Right);
        assert_eq!(check_legal(&st, &mv, FoldMode::Restricted), Some(Illegality::CreatesCrossing(1, 2)));
        assert_eq!(
            check_legal_with(&st, &mv, FoldMode::Restricted, CrossingPolicy::ObliqueOnly),
            None
        );
        // an oblique one is banned under both policies
        let st = state(vec![seg(0, 0, 0, 1), seg(1, 2, 3, 3), seg(-2, 1, -2, 4)]);
        assert_eq!(
            check_legal_with(&st, &mv, FoldMode::Restricted, CrossingPolicy::ObliqueOnly),
            Some(Illegality::CreatesObliqueCrossing(1, 2))
        );
    }

    #[test]
    fn move_enumeration() {
        assert_eq!(legal_moves(&state(vec![seg(0, 0, 0, 2)]), FoldMode::Restricted).len(), 2);
        assert!(legal_moves(&state(vec![]), FoldMode::Restricted).is_empty());
    }

    #[test]
    fn general_position() {
        assert!(!is_general_position(&state(vec![seg(0, 0, 1, 0), seg(3, 0, 4, 0)])));
        assert!(is_general_position(&state(vec![seg(0, 0, 1, 0), seg(0, 1, 1, 1)])));
    }

    #[test]
    fn containment_after_fold() {
        let st = state(vec![seg(-3, 1, 2, 4), seg(0, -2, 0, 2), seg(1, -1, 5, -1)]);
        for side in [Side::Left, Side::Right] {
            let mv = FoldMove::along(&seg(0, -2, 0, 2), side);
            let next = apply_fold(&st, &mv, FoldMode::Unrestricted).unwrap();
            assert!(all_on_side(&next, &mv.line, side.opposite()));
            assert!(segments_on_line(&next, &mv.line).is_empty());
        }
    }
}

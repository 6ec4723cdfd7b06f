//! Compiler from normalized 3SAT formulas to segment folding instances.
//!
//! Layout conventions: γ is the line x = 0 and κ2 the line y = 0. Variable
//! gadgets sit left of γ and below κ2, stacked upward by index. Clause
//! gadgets tile down and to the right from the top-left corner (0, κ1).
//! Literal segments sit above κ1 in a strip between each variable's t and
//! t_h. All lengths below are in units of the grid width w_g unless noted.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cnf::{Lit, NormalizedFormula};
use crate::fold::{
    apply_fold, check_legal, FoldMode, FoldMove, FoldState, Illegality, Instance, SegmentId,
};
use crate::geom::{ratio, Point, Rational, Segment, Side};

/// Height of the variable gadget in grid units.
pub const VAR_HEIGHT: i64 = 18;
/// Vertical pitch between consecutive variable gadgets, as a multiple of the gadget height.
pub const VAR_PITCH: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ClauseHeight {
    /// 25/2 grid units: the bottom of c4 touches the next gadget's band.
    #[default]
    Short,
    /// 59/2 grid units.
    Tall,
}

impl ClauseHeight {
    pub fn units(self) -> Rational {
        match self {
            ClauseHeight::Short => ratio(25, 2),
            ClauseHeight::Tall => ratio(59, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub w_g: i64,
    #[serde(default)]
    pub h_c: ClauseHeight,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            w_g: 400,
            h_c: ClauseHeight::Short,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LayoutError {
    #[error("grid width {0} must be a positive multiple of 100")]
    GridWidth(i64),
    #[error("formula is not normalized")]
    NotNormalized,
}

impl LayoutParams {
    pub fn new(w_g: i64, h_c: ClauseHeight) -> Result<Self, LayoutError> {
        let p = LayoutParams { w_g, h_c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        if self.w_g <= 0 || self.w_g % 100 != 0 {
            return Err(LayoutError::GridWidth(self.w_g));
        }
        Ok(())
    }

    pub fn d_x(&self) -> Rational {
        Rational::from_integer((10 * self.w_g).into())
    }

    pub fn delta(&self) -> Rational {
        ratio(self.w_g, 100)
    }

    /// Height of one variable gadget, in coordinate units.
    pub fn h_x(&self) -> Rational {
        Rational::from_integer((VAR_HEIGHT * self.w_g).into())
    }

    pub fn h_c(&self) -> Rational {
        self.h_c.units() * Rational::from_integer(self.w_g.into())
    }

    fn scale(&self, units: &Rational) -> Rational {
        units * Rational::from_integer(self.w_g.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarPart {
    T,
    F,
    TH,
    FH,
    TB1,
    TB2,
    TB3,
    FB1,
    FB2,
    FB3,
    B1,
    B2,
    B3,
}

impl VarPart {
    pub const ALL: [VarPart; 13] = [
        VarPart::T,
        VarPart::F,
        VarPart::TH,
        VarPart::FH,
        VarPart::TB1,
        VarPart::TB2,
        VarPart::TB3,
        VarPart::FB1,
        VarPart::FB2,
        VarPart::FB3,
        VarPart::B1,
        VarPart::B2,
        VarPart::B3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarPart::T => "t",
            VarPart::F => "f",
            VarPart::TH => "t_h",
            VarPart::FH => "f_h",
            VarPart::TB1 => "t_b1",
            VarPart::TB2 => "t_b2",
            VarPart::TB3 => "t_b3",
            VarPart::FB1 => "f_b1",
            VarPart::FB2 => "f_b2",
            VarPart::FB3 => "f_b3",
            VarPart::B1 => "b1",
            VarPart::B2 => "b2",
            VarPart::B3 => "b3",
        }
    }

    pub fn from_name(s: &str) -> Option<VarPart> {
        VarPart::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Folding order of one gadget when `first` is t (true) or f (false).
    /// The floating third blockers are placed right after their hinge.
    pub fn schedule(value: bool) -> [VarPart; 13] {
        use VarPart::*;
        if value {
            [T, TB1, TH, TB2, TB3, F, FB1, FH, FB2, FB3, B1, B2, B3]
        } else {
            [F, FB1, FH, FB2, FB3, T, TB1, TH, TB2, TB3, B1, B2, B3]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClausePart {
    C1,
    C2,
    C3,
    C4,
    B,
}

impl ClausePart {
    pub fn name(self) -> &'static str {
        match self {
            ClausePart::C1 => "c1",
            ClausePart::C2 => "c2",
            ClausePart::C3 => "c3",
            ClausePart::C4 => "c4",
            ClausePart::B => "b",
        }
    }
}

/// Role of an emitted segment. Variables and clauses are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Var { var: u32, part: VarPart },
    Literal { var: u32, clause: usize, negated: bool },
    LiteralBlocker { var: u32, clause: usize, negated: bool },
    Clause { clause: usize, part: ClausePart },
    TopBlocker,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |n: bool| if n { "-" } else { "+" };
        match self {
            Role::Var { var, part } => write!(f, "x{var}.{}", part.name()),
            Role::Literal { var, clause, negated } => write!(f, "c{clause}.z{}{var}", sign(*negated)),
            Role::LiteralBlocker { var, clause, negated } => {
                write!(f, "c{clause}.z{}{var}.b", sign(*negated))
            }
            Role::Clause { clause, part } => write!(f, "c{clause}.{}", part.name()),
            Role::TopBlocker => write!(f, "b_z"),
        }
    }
}

impl Role {
    pub fn is_variable(&self) -> bool {
        matches!(self, Role::Var { .. })
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Role::Literal { .. } | Role::LiteralBlocker { .. } | Role::TopBlocker)
    }

    pub fn clause(&self) -> Option<usize> {
        match self {
            Role::Literal { clause, .. }
            | Role::LiteralBlocker { clause, .. }
            | Role::Clause { clause, .. } => Some(*clause),
            _ => None,
        }
    }
}

/// Half-open description of a vertical-line zone: x strictly between `lo` and `hi`
/// when `open`, otherwise inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zone {
    pub lo: Rational,
    pub hi: Rational,
    pub open: bool,
}

impl Zone {
    pub fn contains(&self, x: &Rational) -> bool {
        if self.open {
            &self.lo < x && x < &self.hi
        } else {
            &self.lo <= x && x <= &self.hi
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub roles: BTreeMap<SegmentId, Role>,
    pub num_vars: u32,
    pub num_clauses: usize,
    pub params: LayoutParams,
    /// y coordinate of κ1.
    pub kappa1: Rational,
    /// Good zone of each clause, indexed from clause 1.
    pub good_zones: Vec<Zone>,
    pub bad_zones: Vec<Zone>,
}

impl GadgetMap {
    pub fn id_of(&self, role: Role) -> Option<SegmentId> {
        self.roles.iter().find(|(_, r)| **r == role).map(|(id, _)| *id)
    }

    pub fn var_id(&self, var: u32, part: VarPart) -> Option<SegmentId> {
        self.id_of(Role::Var { var, part })
    }

    pub fn role(&self, id: SegmentId) -> Option<Role> {
        self.roles.get(&id).copied()
    }

    /// Role strings keyed by id, as stored in instance documents.
    pub fn role_names(&self) -> BTreeMap<SegmentId, String> {
        self.roles.iter().map(|(id, r)| (*id, r.to_string())).collect()
    }

    /// y coordinate of the top edge of clause `j`'s gadget (1-based).
    pub fn clause_top(&self, j: usize) -> Rational {
        let k = 2 * self.num_clauses as i64 - 1 - 2 * (j as i64 - 1);
        self.params.scale(&(r(k) * self.params.h_c.units()))
    }

    /// Good and bad zone of every clause as strips over the gadget's height.
    pub fn zone_rects(&self) -> Vec<ZoneRect> {
        let h = self.params.h_c();
        let mut out = Vec::with_capacity(2 * self.num_clauses);
        for j in 1..=self.num_clauses {
            let top = self.clause_top(j);
            for (good, z) in [(true, &self.good_zones[j - 1]), (false, &self.bad_zones[j - 1])] {
                out.push(ZoneRect {
                    clause: j,
                    good,
                    x0: z.lo.clone(),
                    x1: z.hi.clone(),
                    y0: &top - &h,
                    y1: top.clone(),
                });
            }
        }
        out
    }
}

/// A clause zone as an axis-aligned rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneRect {
    pub clause: usize,
    pub good: bool,
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

struct Builder<'a> {
    params: &'a LayoutParams,
    segments: Vec<(SegmentId, Segment)>,
    roles: BTreeMap<SegmentId, Role>,
}

impl Builder<'_> {
    /// Add a segment given in grid units.
    fn push(&mut self, role: Role, a: (Rational, Rational), b: (Rational, Rational)) {
        let s = |v: &Rational| self.params.scale(v);
        let seg = Segment::new(Point::new(s(&a.0), s(&a.1)), Point::new(s(&b.0), s(&b.1)))
            .expect("layout emits non-degenerate segments");
        let id = self.segments.len() as SegmentId;
        self.segments.push((id, seg));
        self.roles.insert(id, role);
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// Total clause width w_C in grid units.
fn clause_width(m: usize) -> Rational {
    r(9 * m as i64)
}

/// x of t for variable `i` (grid units).
fn t_x(i: u32, m: usize) -> Rational {
    let w = clause_width(m);
    -(r(10) + r(i64::from(i) - 1) * (r(156) + r(6) * &w))
}

/// y of the bottom of variable `i`'s gadget (grid units).
fn var_base(i: u32, n: u32) -> Rational {
    let top_of_t = -r((i64::from(n) - i64::from(i)) * VAR_PITCH * VAR_HEIGHT + 7 * VAR_HEIGHT);
    top_of_t - r(2)
}

/// Thirteen-segment variable gadget. The vertical layout (all relative to the
/// gadget base, x relative to t):
///
/// | part | x              | y          |
/// |------|----------------|------------|
/// | t    | 0              | 0..2       |
/// | t_b1 | t_h ± 1/2      | 1          |
/// | t_h  | -(14 + w_C)    | 3..9/2     |
/// | t_b3 | -3/2..-1/2     | 7/2        |
/// | t_b2 | 1/2..3         | 4          |
/// | b1   | -1             | 8..10      |
/// | b2   | -(100 + 5w_C)  | 8..10      |
/// | b3   | left of b2     | 9          |
/// | f_h  | -(15 + w_C)    | 27/2..15   |
/// | f_b2 | -9/2..-5/2     | 14         |
/// | f_b3 | -3/2..-1/2     | 29/2       |
/// | f    | -2             | 16..18     |
/// | f_b1 | f_h ± 1/2      | 17         |
fn emit_variable(b: &mut Builder, i: u32, n: u32, m: usize) {
    use VarPart::*;
    let w = clause_width(m);
    let x0 = t_x(i, m);
    let y0 = var_base(i, n);
    let th = -(r(14) + &w);
    let fh = -(r(15) + &w);
    let b2 = -(r(100) + r(5) * &w);
    let b3_len = r(10) * &w + r(100);
    let half = q(1, 2);
    let mut put = |part: VarPart, (ax, ay): (Rational, Rational), (bx, by): (Rational, Rational)| {
        b.push(
            Role::Var { var: i, part },
            (&x0 + ax, &y0 + ay),
            (&x0 + bx, &y0 + by),
        );
    };
    let vert = |x: &Rational, lo: Rational, hi: Rational| ((x.clone(), lo), (x.clone(), hi));
    let horiz = |y: Rational, lo: Rational, hi: Rational| ((lo, y.clone()), (hi, y));

    let (a, c) = vert(&r(0), r(0), r(2));
    put(T, a, c);
    let (a, c) = horiz(r(1), &th - &half, &th + &half);
    put(TB1, a, c);
    let (a, c) = vert(&th, r(3), q(9, 2));
    put(TH, a, c);
    let (a, c) = horiz(q(7, 2), q(-3, 2), q(-1, 2));
    put(TB3, a, c);
    let (a, c) = horiz(r(4), q(1, 2), r(3));
    put(TB2, a, c);
    let (a, c) = vert(&r(-1), r(8), r(10));
    put(B1, a, c);
    let (a, c) = vert(&b2, r(8), r(10));
    put(B2, a, c);
    let b3_right = &b2 - &half;
    let (a, c) = horiz(r(9), &b3_right - &b3_len, b3_right.clone());
    put(B3, a, c);
    let (a, c) = vert(&fh, q(27, 2), r(15));
    put(FH, a, c);
    let (a, c) = horiz(r(14), q(-9, 2), q(-5, 2));
    put(FB2, a, c);
    let (a, c) = horiz(q(29, 2), q(-3, 2), q(-1, 2));
    put(FB3, a, c);
    let (a, c) = vert(&r(-2), r(16), r(18));
    put(F, a, c);
    let (a, c) = horiz(r(17), &fh - &half, &fh + &half);
    put(FB1, a, c);
}

/// Rank of `var` among the variables of `clause`: -1 smallest, +1 largest, 0 otherwise.
fn rank(clause: &[Lit], var: u32) -> i64 {
    if clause.len() < 2 {
        return 0;
    }
    let vars: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
    if var == *vars.iter().min().unwrap() {
        -1
    } else if var == *vars.iter().max().unwrap() {
        1
    } else {
        0
    }
}

fn emit_literals(b: &mut Builder, clauses: &[Vec<Lit>], kappa1: &Rational) {
    let m = clauses.len();
    let delta = q(1, 100);
    for (k, clause) in clauses.iter().enumerate() {
        let j = k + 1;
        for &lit in clause {
            let var = lit.unsigned_abs();
            let negated = lit < 0;
            let rk = r(rank(clause, var));
            let base = if negated { q(83, 4) } else { q(65, 4) };
            let x = t_x(var, m) - base - r(9 * k as i64) + &rk * &delta;
            let bottom = kappa1 + r(1);
            let len = r(2 * j as i64 + i64::from(negated));
            let top = &bottom + len;
            b.push(
                Role::Literal { var, clause: j, negated },
                (x.clone(), bottom),
                (x.clone(), top.clone()),
            );
            let y = top + q(1, 2) + &rk * &delta;
            let hw = &delta / r(2);
            b.push(
                Role::LiteralBlocker { var, clause: j, negated },
                (&x - &hw, y.clone()),
                (&x + &hw, y),
            );
        }
    }
}

fn emit_clause(b: &mut Builder, j: usize, m: usize, h_c: &Rational) {
    let left = r(9 * (j as i64 - 1));
    let top = r(2 * m as i64 - 1 - 2 * (j as i64 - 1)) * h_c;
    let at = |dx: Rational, dy: Rational| (&left + dx, &top - dy);
    let role = |part| Role::Clause { clause: j, part };
    b.push(role(ClausePart::C1), at(q(9, 2), r(4)), at(r(6), q(5, 2)));
    b.push(role(ClausePart::C2), at(q(65, 8), r(0)), at(q(65, 8), q(5, 2)));
    b.push(role(ClausePart::C3), at(r(7), r(5)), at(q(43, 5), r(5)));
    b.push(role(ClausePart::C4), at(r(5), q(11, 2)), at(r(5), q(25, 2)));
    if j > 1 {
        b.push(role(ClausePart::B), at(r(-9), q(1, 4)), at(r(3), q(1, 4)));
    }
}

/// Good and bad zone of clause `j` (1-based); defined for any `j`, so the
/// zones of a clause one past the last can be named too.
pub fn zone_pair(j: usize, w_g: i64) -> (Zone, Zone) {
    let s = |v: Rational| v * r(w_g);
    let left = r(9 * (j as i64 - 1));
    (
        Zone { lo: s(&left + r(6)), hi: s(&left + r(7)), open: true },
        Zone { lo: s(&left + r(1)), hi: s(&left + r(3)), open: false },
    )
}

fn zones(m: usize, w_g: i64) -> (Vec<Zone>, Vec<Zone>) {
    (1..=m).map(|j| zone_pair(j, w_g)).unzip()
}

/// Compile a normalized formula. Segment ids follow emission order: variable
/// gadgets by index, then literal segments and blockers by clause, then
/// b_z, then clause gadgets by index.
pub fn compile(f: &NormalizedFormula, params: &LayoutParams) -> Result<(Instance, GadgetMap), LayoutError> {
    params.validate()?;
    if !f.check() {
        return Err(LayoutError::NotNormalized);
    }
    Ok(compile_clauses(f.num_vars(), f.clauses(), params, true))
}

/// Layout for an arbitrary clause list (no normalization check). When
/// `top_blocker` is false, b_z is left out.
pub fn compile_clauses(
    n: u32,
    clauses: &[Vec<Lit>],
    params: &LayoutParams,
    top_blocker: bool,
) -> (Instance, GadgetMap) {
    let m = clauses.len();
    let h_c = params.h_c.units();
    let kappa1 = r(2 * m as i64) * &h_c;
    let mut b = Builder { params, segments: Vec::new(), roles: BTreeMap::new() };
    for i in 1..=n {
        emit_variable(&mut b, i, n, m);
    }
    emit_literals(&mut b, clauses, &kappa1);
    if top_blocker && n > 0 {
        let x = t_x(n, m) - r(110) - r(5) * clause_width(m);
        let top = &kappa1 + r(2 * m as i64 + 4);
        b.push(Role::TopBlocker, (x.clone(), r(0)), (x, top));
    }
    for j in 1..=m {
        emit_clause(&mut b, j, m, &h_c);
    }
    let (good_zones, bad_zones) = zones(m, params.w_g);
    let map = GadgetMap {
        num_vars: n,
        num_clauses: m,
        params: params.clone(),
        kappa1: params.scale(&kappa1),
        good_zones,
        bad_zones,
        roles: b.roles,
    };
    let roles = map.role_names();
    let inst = Instance::with_roles(b.segments, roles).expect("ids are unique");
    (inst, map)
}

/// A single variable gadget laid out as variable 1 of 1 next to `m` clauses'
/// worth of horizontal space, with nothing else emitted.
pub fn isolated_variable_gadget(params: &LayoutParams, m: usize) -> (Instance, GadgetMap) {
    let mut b = Builder { params, segments: Vec::new(), roles: BTreeMap::new() };
    emit_variable(&mut b, 1, 1, m);
    finish(b, params, 0)
}

/// Clause gadget `j` of `m` (with its blocker when j > 1) plus one
/// auxiliary vertical segment at x = `aux_x` (grid units, relative to the
/// gadget's left edge) above the gadget.
pub fn isolated_clause_gadget(params: &LayoutParams, j: usize, m: usize, aux_x: Rational) -> (Instance, GadgetMap) {
    let h_c = params.h_c.units();
    let mut b = Builder { params, segments: Vec::new(), roles: BTreeMap::new() };
    emit_clause(&mut b, j, m, &h_c);
    let x = r(9 * (j as i64 - 1)) + aux_x;
    let kappa1 = r(2 * m as i64) * &h_c;
    b.push(
        Role::Literal { var: 1, clause: j, negated: false },
        (x.clone(), &kappa1 + r(1)),
        (x, &kappa1 + r(3)),
    );
    finish(b, params, m)
}

fn finish(b: Builder, params: &LayoutParams, m: usize) -> (Instance, GadgetMap) {
    let (good_zones, bad_zones) = zones(m, params.w_g);
    let h_c = params.h_c.units();
    let map = GadgetMap {
        num_vars: 0,
        num_clauses: m,
        params: params.clone(),
        kappa1: params.scale(&(r(2 * m as i64) * h_c)),
        good_zones,
        bad_zones,
        roles: b.roles,
    };
    let roles = map.role_names();
    (Instance::with_roles(b.segments, roles).expect("ids are unique"), map)
}

pub fn fold_budget(inst: &Instance) -> usize {
    inst.len()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("assignment has {got} values but the formula has {want} variables")]
    AssignmentSize { got: usize, want: usize },
    #[error("segment with role {0} is missing")]
    MissingRole(String),
    #[error("scheduled fold along {role} is illegal: {reason}")]
    Illegal { role: String, reason: Illegality },
    #[error("clause {0} has no literal segment in its good zone")]
    EmptyGoodZone(usize),
    #[error("no legal fold completes clause phase at {remaining} remaining segments")]
    Stuck { remaining: usize },
}

/// Fold the segment currently carrying `role`'s original id along its line,
/// keeping the side that contains `anchor` in place.
fn fold_role(
    state: &FoldState,
    gm: &GadgetMap,
    role: Role,
    anchor: &Point,
) -> Result<(FoldMove, FoldState), PlanError> {
    let id = gm.id_of(role).ok_or_else(|| PlanError::MissingRole(role.to_string()))?;
    let seg = current_segment(state, id).ok_or_else(|| PlanError::MissingRole(role.to_string()))?;
    let mv = fold_away_from(&seg, anchor);
    if let Some(reason) = check_legal(state, &mv, FoldMode::Restricted) {
        return Err(PlanError::Illegal { role: role.to_string(), reason });
    }
    let next = apply_fold(state, &mv, FoldMode::Restricted).expect("checked legal");
    Ok((mv, next))
}

/// Fold along each role's segment in turn with [`fold_away_from`].
pub fn fold_roles(
    state: &FoldState,
    gm: &GadgetMap,
    roles: &[Role],
    anchor: &Point,
) -> Result<(Vec<FoldMove>, FoldState), PlanError> {
    let mut st = state.clone();
    let mut moves = Vec::with_capacity(roles.len());
    for role in roles {
        let (mv, next) = fold_role(&st, gm, *role, anchor)?;
        moves.push(mv);
        st = next;
    }
    Ok((moves, st))
}

/// Present segment whose provenance includes original id `id`.
pub fn current_segment(state: &FoldState, id: SegmentId) -> Option<Segment> {
    state
        .provenance()
        .iter()
        .find(|(_, origin)| origin.contains(&id))
        .and_then(|(cur, _)| state.segment(*cur).cloned())
}

/// Fold along `seg`, reflecting the side that does not contain `anchor`.
pub fn fold_away_from(seg: &Segment, anchor: &Point) -> FoldMove {
    let line = crate::geom::line_through(seg);
    let side = match crate::geom::side_of(anchor, &line) {
        Side::Right => Side::Left,
        _ => Side::Right,
    };
    FoldMove::new(line, side)
}

/// A point of the clause region that variable folds never move: the top
/// endpoint of c4 in clause 1, or the origin when there are no clauses.
pub fn clause_anchor(inst: &Instance, gm: &GadgetMap) -> Point {
    gm.id_of(Role::Clause { clause: 1, part: ClausePart::C4 })
        .and_then(|id| inst.segment(id))
        .map(|s| s.q().clone())
        .unwrap_or_else(|| Point::new(r(0), r(0)))
}

/// x coordinate where the literal segment with `role` currently sits.
pub fn literal_x(state: &FoldState, gm: &GadgetMap, role: Role) -> Option<Rational> {
    let id = gm.id_of(role)?;
    let seg = current_segment(state, id)?;
    seg.is_vertical().then(|| seg.p().x.clone())
}

/// Produce a full fold schedule for `assignment` (indexed by variable - 1).
///
/// Variable gadgets follow the fixed two-way schedules, then b_z. The clause
/// phase is completed by a bounded search over the remaining literal and
/// clause segments, after checking that every clause has a literal segment
/// in its good zone.
pub fn plan_folds(
    f: &NormalizedFormula,
    inst: &Instance,
    gm: &GadgetMap,
    assignment: &[bool],
) -> Result<Vec<FoldMove>, PlanError> {
    let n = f.num_vars() as usize;
    if assignment.len() != n {
        return Err(PlanError::AssignmentSize { got: assignment.len(), want: n });
    }
    let anchor = clause_anchor(inst, gm);
    let mut state = FoldState::new(inst);
    let mut moves = Vec::with_capacity(inst.len());
    for (i, &value) in assignment.iter().enumerate() {
        let roles: Vec<Role> = VarPart::schedule(value)
            .into_iter()
            .map(|part| Role::Var { var: i as u32 + 1, part })
            .collect();
        let (mvs, next) = fold_roles(&state, gm, &roles, &anchor)?;
        moves.extend(mvs);
        state = next;
    }
    let (mv, next) = fold_role(&state, gm, Role::TopBlocker, &anchor)?;
    moves.push(mv);
    state = next;

    for (k, clause) in f.clauses().iter().enumerate() {
        let zone = &gm.good_zones[k];
        let hit = gm.roles.values().any(|role| match role {
            Role::Literal { clause: c, .. } if *c == k + 1 => {
                literal_x(&state, gm, *role).is_some_and(|x| zone.contains(&x))
            }
            _ => false,
        });
        if !hit && !clause.is_empty() {
            return Err(PlanError::EmptyGoodZone(k + 1));
        }
    }

    let remaining = state.len();
    let budget = crate::solve::SearchBudget::decision(remaining);
    match crate::solve::solve_state(&state, FoldMode::Restricted, budget).outcome {
        crate::solve::SearchOutcome::Solved(rest) => {
            moves.extend(rest);
            Ok(moves)
        }
        _ => Err(PlanError::Stuck { remaining }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{normalize_formula, CnfFormula};
    use num_traits::Zero;

    fn norm(n: u32, clauses: Vec<Vec<Lit>>) -> NormalizedFormula {
        normalize_formula(&CnfFormula::new(n, clauses).unwrap()).unwrap()
    }

    #[test]
    fn segment_count_matches_formula() {
        let f = norm(2, vec![vec![1, -2], vec![2]]);
        let (inst, gm) = compile(&f, &LayoutParams::default()).unwrap();
        let lits: usize = f.clauses().iter().map(Vec::len).sum();
        let expect = 13 * f.num_vars() as usize + 2 * lits + 5 * f.clauses().len();
        assert_eq!(inst.len(), expect);
        assert_eq!(gm.roles.len(), expect);
        assert_eq!(fold_budget(&inst), expect);
    }

    #[test]
    fn unit_formula_has_twenty_segments() {
        let f = norm(1, vec![vec![1]]);
        let (inst, _) = compile(&f, &LayoutParams::default()).unwrap();
        assert_eq!(fold_budget(&inst), 20);
        assert_eq!(fold_budget(&Instance::default()), 0);
        let (g, _) = isolated_variable_gadget(&LayoutParams::default(), 1);
        assert_eq!(fold_budget(&g), 13);
    }

    #[test]
    fn integer_coordinates_at_default_grid() {
        let f = norm(3, vec![vec![1, -2, 3], vec![-1, 2], vec![3]]);
        for h_c in [ClauseHeight::Short, ClauseHeight::Tall] {
            let (inst, _) = compile(&f, &LayoutParams { w_g: 400, h_c }).unwrap();
            for (_, s) in &inst.segments {
                for p in s.endpoints() {
                    assert!(p.x.is_integer() && p.y.is_integer(), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_grid() {
        assert_eq!(LayoutParams::new(150, ClauseHeight::Short), Err(LayoutError::GridWidth(150)));
        assert!(LayoutParams::new(0, ClauseHeight::Short).is_err());
    }

    #[test]
    fn deterministic() {
        let f = norm(2, vec![vec![1, 2], vec![-1, 2]]);
        let a = compile(&f, &LayoutParams::default()).unwrap();
        let b = compile(&f, &LayoutParams::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn horizontal_distances() {
        let p = LayoutParams::default();
        let f = norm(2, vec![vec![1, -2], vec![2]]);
        let (inst, gm) = compile(&f, &p).unwrap();
        let m = f.clauses().len() as i64;
        let wg = p.w_g;
        let x = |part| {
            let s = inst.segment(gm.var_id(1, part).unwrap()).unwrap();
            assert!(s.is_vertical());
            -s.p().x.clone()
        };
        let w_cap = r(9 * m * wg);
        assert_eq!(x(VarPart::T), r(10 * wg));
        assert_eq!(x(VarPart::F), r(12 * wg));
        assert_eq!(x(VarPart::B1), r(11 * wg));
        assert_eq!(x(VarPart::FH), x(VarPart::TH) + r(wg));
        assert_eq!(x(VarPart::TH) - x(VarPart::T), r(14 * wg) + &w_cap);
        assert_eq!(x(VarPart::B2), r(110 * wg) + r(5) * &w_cap);
    }

    #[test]
    fn literals_of_a_clause_never_share_a_line() {
        let f = norm(3, vec![vec![1, -2, 3], vec![1, 2], vec![3]]);
        let (inst, gm) = compile(&f, &LayoutParams::default()).unwrap();
        let mut xs: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for (id, role) in &gm.roles {
            if let Role::Literal { clause, .. } = role {
                xs.entry(*clause).or_default().push(inst.segment(*id).unwrap().p().x.clone());
            }
        }
        for v in xs.values() {
            let mut u = v.clone();
            u.sort();
            u.dedup();
            assert_eq!(u.len(), v.len());
        }
    }

    #[test]
    fn zones_are_relative_to_clause_left() {
        let (_, gm) = compile(&norm(1, vec![vec![1]]), &LayoutParams::default()).unwrap();
        assert_eq!(gm.good_zones[0].lo, r(2400));
        assert_eq!(gm.good_zones[0].hi, r(2800));
        assert!(!gm.good_zones[0].contains(&r(2400)));
        assert!(gm.bad_zones[0].contains(&r(400)));
        assert!(gm.kappa1 > Rational::zero());
    }

    #[test]
    fn role_names_round_trip_through_display() {
        let (_, gm) = compile(&norm(1, vec![vec![1]]), &LayoutParams::default()).unwrap();
        let names: Vec<String> = gm.roles.values().map(Role::to_string).collect();
        assert!(names.contains(&"x1.t_b3".to_string()));
        assert!(names.contains(&"c1.z+1".to_string()));
        assert!(names.contains(&"c1.z+1.b".to_string()));
        assert!(names.contains(&"b_z".to_string()));
        assert!(names.contains(&"c1.c4".to_string()));
        assert!(!names.contains(&"c1.b".to_string()));
    }
}

//! Exact rational planar geometry.
//!
//! Everything here works over [`Rational`] (arbitrary-precision fractions);
//! there is no floating point anywhere in this module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact fraction, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `a b c`; positive when counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("degenerate segment: both endpoints are {0:?}")]
    DegenerateSegment(Box<Point>),
}

/// A closed, nondegenerate segment. Endpoints are stored in lexicographic
/// order so two segments covering the same point set compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    p: Point,
    q: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        match a.cmp(&b) {
            Ordering::Equal => Err(GeomError::DegenerateSegment(Box::new(a))),
            Ordering::Less => Ok(Segment { p: a, q: b }),
            Ordering::Greater => Ok(Segment { p: b, q: a }),
        }
    }

    /// Convenience constructor for integer endpoints; panics on a degenerate segment.
    pub fn from_ints(ax: i64, ay: i64, bx: i64, by: i64) -> Self {
        Segment::new(Point::from_ints(ax, ay), Point::from_ints(bx, by))
            .expect("nondegenerate segment")
    }

    pub fn p(&self) -> &Point {
        &self.p
    }

    pub fn q(&self) -> &Point {
        &self.q
    }

    pub fn endpoints(&self) -> [&Point; 2] {
        [&self.p, &self.q]
    }

    pub fn direction(&self) -> (Rational, Rational) {
        (&self.q.x - &self.p.x, &self.q.y - &self.p.y)
    }

    pub fn is_vertical(&self) -> bool {
        self.p.x == self.q.x
    }

    pub fn is_horizontal(&self) -> bool {
        self.p.y == self.q.y
    }

    /// Whether `pt` lies on the closed segment.
    pub fn contains(&self, pt: &Point) -> bool {
        orient(&self.p, &self.q, pt).is_zero() && self.within_box(pt)
    }

    /// Whether `pt` lies on the segment but is not one of its endpoints.
    pub fn contains_in_interior(&self, pt: &Point) -> bool {
        self.contains(pt) && *pt != self.p && *pt != self.q
    }

    fn within_box(&self, pt: &Point) -> bool {
        let (xlo, xhi) = minmax(&self.p.x, &self.q.x);
        let (ylo, yhi) = minmax(&self.p.y, &self.q.y);
        xlo <= &pt.x && &pt.x <= xhi && ylo <= &pt.y && &pt.y <= yhi
    }

    pub fn len2(&self) -> Rational {
        self.p.dist2(&self.q)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.p, self.q)
    }
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The line `a x + b y = c` with integer coefficients in canonical form:
/// `gcd(|a|, |b|, |c|) = 1` and `a > 0`, or `a = 0` and `b > 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line coefficients a and b are both zero")]
pub struct ZeroNormal;

impl Line {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self, ZeroNormal> {
        if a.is_zero() && b.is_zero() {
            return Err(ZeroNormal);
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Line { a, b, c })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self, ZeroNormal> {
        Line::new(a.into(), b.into(), c.into())
    }

    /// The vertical line `x = v`.
    pub fn vertical(v: &Rational) -> Self {
        Line::new(v.denom().clone(), BigInt::zero(), v.numer().clone()).expect("a != 0")
    }

    /// The horizontal line `y = v`.
    pub fn horizontal(v: &Rational) -> Self {
        Line::new(BigInt::zero(), v.denom().clone(), v.numer().clone()).expect("b != 0")
    }

    /// Line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Self {
        // (qy - py) x - (qx - px) y = (qy - py) px - (qx - px) py, scaled to integers.
        let dx = &q.x - &p.x;
        let dy = &q.y - &p.y;
        let a = dy.clone();
        let b = -dx.clone();
        let c = &dy * &p.x - &dx * &p.y;
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let scale = Rational::from_integer(l);
        let (a, b, c) = (a * &scale, b * &scale, c * &scale);
        Line::new(a.to_integer(), b.to_integer(), c.to_integer()).expect("distinct points")
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.is_zero()
    }

    /// `a x + b y - c`; its sign decides the side.
    pub fn eval(&self, p: &Point) -> Rational {
        Rational::from_integer(self.a.clone()) * &p.x + Rational::from_integer(self.b.clone()) * &p.y
            - Rational::from_integer(self.c.clone())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }

    pub fn contains_segment(&self, s: &Segment) -> bool {
        self.contains(&s.p) && self.contains(&s.q)
    }

    /// Intersection point of two non-parallel lines.
    pub fn intersect(&self, other: &Line) -> Option<Point> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let x = &self.c * &other.b - &self.b * &other.c;
        let y = &self.a * &other.c - &self.c * &other.a;
        Some(Point::new(
            Rational::new(x, det.clone()),
            Rational::new(y, det),
        ))
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

/// Position relative to a line. `Right` is the open half-plane where
/// `a x + b y - c > 0`: the side with large `x`, or the top side of a
/// horizontal line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    On,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::On => Side::On,
        }
    }
}

pub fn line_through(s: &Segment) -> Line {
    Line::through(&s.p, &s.q)
}

pub fn reflect_point(p: &Point, l: &Line) -> Point {
    let a = Rational::from_integer(l.a.clone());
    let b = Rational::from_integer(l.b.clone());
    let k = l.eval(p) * rat(2) / (&a * &a + &b * &b);
    Point::new(&p.x - &k * &a, &p.y - &k * &b)
}

pub fn reflect_segment(s: &Segment, l: &Line) -> Segment {
    Segment::new(reflect_point(&s.p, l), reflect_point(&s.q, l)).expect("isometry keeps length")
}

pub fn side_of(p: &Point, l: &Line) -> Side {
    match l.eval(p).cmp(&Rational::zero()) {
        Ordering::Greater => Side::Right,
        Ordering::Less => Side::Left,
        Ordering::Equal => Side::On,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Intersection {
    Disjoint,
    /// The segments share exactly one point, which is an endpoint of at least one of them.
    EndpointTouch,
    /// Proper crossing at an interior point of both, at a right angle.
    InteriorCrossRight,
    /// Proper crossing at an interior point of both, at any other angle.
    InteriorCrossOblique,
    /// Collinear and sharing more than one point.
    CollinearOverlap,
}

impl Intersection {
    pub fn is_crossing(self) -> bool {
        matches!(
            self,
            Intersection::InteriorCrossRight | Intersection::InteriorCrossOblique
        )
    }
}

pub fn classify_intersection(s: &Segment, t: &Segment) -> Intersection {
    let o1 = orient(&s.p, &s.q, &t.p);
    let o2 = orient(&s.p, &s.q, &t.q);
    if o1.is_zero() && o2.is_zero() {
        // Collinear: compare projections along the shared direction.
        let (lo, hi) = collinear_overlap(s, t);
        return match lo.cmp(&hi) {
            Ordering::Less => Intersection::CollinearOverlap,
            Ordering::Equal => Intersection::EndpointTouch,
            Ordering::Greater => Intersection::Disjoint,
        };
    }
    let o3 = orient(&t.p, &t.q, &s.p);
    let o4 = orient(&t.p, &t.q, &s.q);
    let straddles = |a: &Rational, b: &Rational| a.signum() * b.signum() <= Rational::zero();
    if !(straddles(&o1, &o2) && straddles(&o3, &o4)) {
        return Intersection::Disjoint;
    }
    if o1.is_zero() || o2.is_zero() || o3.is_zero() || o4.is_zero() {
        return Intersection::EndpointTouch;
    }
    let (dx1, dy1) = s.direction();
    let (dx2, dy2) = t.direction();
    if (dx1 * dx2 + dy1 * dy2).is_zero() {
        Intersection::InteriorCrossRight
    } else {
        Intersection::InteriorCrossOblique
    }
}

/// Overlap interval of two collinear segments, as parameters along the
/// dominant axis. `lo > hi` means disjoint.
fn collinear_overlap(s: &Segment, t: &Segment) -> (Rational, Rational) {
    let key = |p: &Point| {
        if s.is_vertical() {
            p.y.clone()
        } else {
            p.x.clone()
        }
    };
    let (s0, s1) = sorted(key(&s.p), key(&s.q));
    let (t0, t1) = sorted(key(&t.p), key(&t.q));
    (s0.max(t0), s1.min(t1))
}

fn sorted(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether the closed segment meets the line.
pub fn line_meets_segment(l: &Line, s: &Segment) -> bool {
    let a = side_of(&s.p, l);
    let b = side_of(&s.q, l);
    a == Side::On || b == Side::On || a != b
}

/// Whether the line meets the relative interior of `s` while not containing `s`.
pub fn line_meets_interior(l: &Line, s: &Segment) -> bool {
    let a = side_of(&s.p, l);
    let b = side_of(&s.q, l);
    a != Side::On && b != Side::On && a != b
}

/// Floating-point shadow of a line, used to screen exact side tests.
#[derive(Debug, Clone, Copy)]
pub struct ApproxLine {
    a: f64,
    b: f64,
    c: f64,
}

impl ApproxLine {
    pub fn of(l: &Line) -> Self {
        let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
        ApproxLine { a: f(&l.a), b: f(&l.b), c: f(&l.c) }
    }

    /// Side of (x, y) when the floating-point value is far enough from zero
    /// to be trusted, `None` otherwise.
    pub fn side(&self, x: f64, y: f64) -> Option<Side> {
        let ax = self.a * x;
        let by = self.b * y;
        let v = ax + by - self.c;
        let tol = 1e-9 * (ax.abs() + by.abs() + self.c.abs());
        if !v.is_finite() || v.abs() <= tol {
            None
        } else if v > 0.0 {
            Some(Side::Right)
        } else {
            Some(Side::Left)
        }
    }
}

/// Endpoint coordinates of a segment as floats: `[px, py, qx, qy]`.
pub fn approx_segment(s: &Segment) -> [f64; 4] {
    let f = |v: &Rational| v.to_f64().unwrap_or(f64::NAN);
    [f(&s.p.x), f(&s.p.y), f(&s.q.x), f(&s.q.y)]
}

/// `line_meets_interior` with a floating-point screen; exact on close calls.
pub fn line_meets_interior_screened(l: &Line, al: &ApproxLine, s: &Segment, a: &[f64; 4]) -> bool {
    match (al.side(a[0], a[1]), al.side(a[2], a[3])) {
        (Some(x), Some(y)) => x != y,
        _ => line_meets_interior(l, s),
    }
}

/// Whether the bounding boxes of two float shadows are clearly apart.
/// `false` means "maybe touching" and calls for an exact test.
pub fn approx_boxes_apart(a: &[f64; 4], b: &[f64; 4]) -> bool {
    let apart = |a0: f64, a1: f64, b0: f64, b1: f64| {
        let (alo, ahi) = (a0.min(a1), a0.max(a1));
        let (blo, bhi) = (b0.min(b1), b0.max(b1));
        let tol = 1e-9 * (1.0 + alo.abs().max(ahi.abs()).max(blo.abs()).max(bhi.abs()));
        ahi + tol < blo || bhi + tol < alo
    };
    apart(a[0], a[2], b[0], b[2]) || apart(a[1], a[3], b[1], b[3])
}

/// Whether `s` lies within one edge of the convex polygon `hull`
/// (counterclockwise, as returned by `convex_hull`).
pub fn on_hull_edges(s: &Segment, hull: &[Point]) -> bool {
    match hull.len() {
        0 | 1 => false,
        2 => {
            let edge = Segment { p: hull[0].clone(), q: hull[1].clone() };
            edge.contains(&s.p) && edge.contains(&s.q)
        }
        n => (0..n).any(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % n]);
            orient(a, b, &s.p).is_zero() && orient(a, b, &s.q).is_zero()
        }),
    }
}

/// `s` stabs `t` when the supporting line of `s` meets `t` but the two
/// segments have no point in common.
pub fn stabs(s: &Segment, t: &Segment) -> bool {
    line_meets_segment(&line_through(s), t)
        && classify_intersection(s, t) == Intersection::Disjoint
}

/// Monotone-chain hull; counterclockwise, without collinear vertices.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rational::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rational::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `s` lies on the boundary of the convex hull of all endpoints in `set`.
pub fn on_hull_boundary(s: &Segment, set: &[Segment]) -> bool {
    let pts: Vec<Point> = set
        .iter()
        .chain(std::iter::once(s))
        .flat_map(|t| [t.p.clone(), t.q.clone()])
        .collect();
    let hull = convex_hull(&pts);
    match hull.len() {
        0 | 1 => false,
        2 => true,
        n => (0..n).any(|i| {
            let edge = Segment {
                p: hull[i].clone(),
                q: hull[(i + 1) % n].clone(),
            };
            edge.contains(&s.p) && edge.contains(&s.q)
        }),
    }
}

/// The part of `s` in the closed half-plane `side` of `l`, unless that part
/// is empty, a single point, or lies on `l` entirely.
pub fn clip_to_halfplane(s: &Segment, l: &Line, side: Side) -> Option<Segment> {
    assert!(side != Side::On, "clip side must be Left or Right");
    let ep = l.eval(&s.p);
    let eq = l.eval(&s.q);
    let wanted = |v: &Rational| match side {
        Side::Right => v.is_positive(),
        _ => v.is_negative(),
    };
    let keep_p = wanted(&ep);
    let keep_q = wanted(&eq);
    match (keep_p, keep_q) {
        (true, true) => Some(s.clone()),
        (false, false) => None,
        _ => {
            // Exactly one endpoint is strictly inside; the other is on the
            // line or beyond it.
            let (inside, other, vi, vo) = if keep_p {
                (&s.p, &s.q, &ep, &eq)
            } else {
                (&s.q, &s.p, &eq, &ep)
            };
            if vo.is_zero() {
                return Some(s.clone());
            }
            let t = vi / (vi - vo);
            let cut = Point::new(
                &inside.x + (&other.x - &inside.x) * &t,
                &inside.y + (&other.y - &inside.y) * &t,
            );
            Segment::new(inside.clone(), cut).ok()
        }
    }
}

/// Union of two collinear segments that share more than one point.
pub fn merge_pair(s: &Segment, t: &Segment) -> Option<Segment> {
    if classify_intersection(s, t) != Intersection::CollinearOverlap {
        return None;
    }
    let lo = (&s.p).min(&t.p).clone();
    let hi = (&s.q).max(&t.q).clone();
    Some(Segment { p: lo, q: hi })
}

/// Replace overlapping collinear segments by their unions until no two overlap.
/// Segments that only touch at an endpoint stay separate.
pub fn merge_collinear(set: &[Segment]) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(set.len());
    for s in set {
        let mut cur = s.clone();
        loop {
            let hit = out.iter().position(|o| merge_pair(o, &cur).is_some());
            match hit {
                Some(i) => {
                    let o = out.swap_remove(i);
                    cur = merge_pair(&o, &cur).expect("checked overlap");
                }
                None => break,
            }
        }
        out.push(cur);
    }
    out
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::from_ints(ax, ay, bx, by)
    }

    fn line(a: i64, b: i64, c: i64) -> Line {
        Line::from_ints(a, b, c).unwrap()
    }

    #[test]
    fn line_through_is_canonical() {
        assert_eq!(line_through(&seg(0, 0, 0, 2)), line(1, 0, 0));
        assert_eq!(line_through(&seg(0, 0, 2, 2)), line(1, -1, 0));
        // x - 2y = -2 passes through (0,1) and (4,3).
        let l = line_through(&seg(0, 1, 4, 3));
        assert_eq!((l.a(), l.b(), l.c()), (&1.into(), &(-2).into(), &(-2).into()));
        assert_eq!(line(-2, 4, 4), l);
        assert_eq!(line(0, -3, 6), line(0, 1, -2));
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(pt(1, 1), pt(1, 1)).is_err());
        assert!(Line::from_ints(0, 0, 3).is_err());
    }

    #[test]
    fn reflections() {
        assert_eq!(reflect_point(&pt(1, 0), &line(1, 0, 0)), pt(-1, 0));
        assert_eq!(reflect_point(&pt(2, 1), &line(1, -1, 0)), pt(1, 2));
        let l = line(1, 1, 2);
        let r = reflect_point(&pt(3, 1), &l);
        assert_eq!(r, pt(1, -1));
        // oracle: midpoint on the line, difference parallel to the normal
        let mid = Point::new((rat(3) + &r.x) / rat(2), (rat(1) + &r.y) / rat(2));
        assert!(l.contains(&mid));
        assert_eq!(rat(3) - &r.x, rat(1) - &r.y);

        assert_eq!(reflect_segment(&seg(0, 0, 0, 2), &line(0, 1, 0)), seg(0, 0, 0, -2));
        assert_eq!(reflect_segment(&seg(0, 0, 0, 2), &line(1, 0, 0)), seg(0, 0, 0, 2));
        assert_eq!(reflect_segment(&seg(1, 1, 3, 1), &line(1, 0, 0)), seg(-1, 1, -3, 1));
    }

    #[test]
    fn sides() {
        let l = line(1, 0, 0);
        assert_eq!(side_of(&pt(1, 0), &l), Side::Right);
        assert_eq!(side_of(&pt(0, 5), &l), Side::On);
        assert_eq!(side_of(&pt(-3, 2), &l), Side::Left);
        assert_eq!(side_of(&pt(0, 1), &line(0, 1, 0)), Side::Right);
    }

    #[test]
    fn intersections() {
        use Intersection::*;
        assert_eq!(classify_intersection(&seg(0, -1, 0, 1), &seg(-1, 0, 1, 0)), InteriorCrossRight);
        assert_eq!(classify_intersection(&seg(0, 0, 2, 2), &seg(0, 2, 2, 0)), InteriorCrossRight);
        assert_eq!(classify_intersection(&seg(0, 0, 2, 2), &seg(0, 1, 2, 1)), InteriorCrossOblique);
        assert_eq!(classify_intersection(&seg(0, 0, 1, 0), &seg(1, 0, 2, 1)), EndpointTouch);
        assert_eq!(classify_intersection(&seg(0, 0, 2, 0), &seg(1, 0, 1, 3)), EndpointTouch);
        assert_eq!(classify_intersection(&seg(0, 0, 2, 0), &seg(1, 0, 3, 0)), CollinearOverlap);
        assert_eq!(classify_intersection(&seg(0, 0, 1, 0), &seg(1, 0, 3, 0)), EndpointTouch);
        assert_eq!(classify_intersection(&seg(0, 0, 1, 0), &seg(2, 0, 3, 0)), Disjoint);
        assert_eq!(classify_intersection(&seg(0, 0, 1, 0), &seg(0, 1, 1, 1)), Disjoint);
    }

    #[test]
    fn stabbing() {
        assert!(stabs(&seg(0, 0, 0, 1), &seg(-1, 5, 1, 5)));
        assert!(!stabs(&seg(0, 0, 0, 1), &seg(1, 5, 3, 5)));
        assert!(!stabs(&seg(0, 0, 0, 1), &seg(0, 1, 1, 2)));
        // touching the line only at an endpoint still counts
        assert!(stabs(&seg(0, 0, 0, 1), &seg(0, 5, 1, 5)));
    }

    #[test]
    fn hull() {
        assert_eq!(convex_hull(&[pt(0, 0), pt(1, 0), pt(0, 1)]).len(), 3);
        let sq = [pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2), pt(1, 1)];
        let h = convex_hull(&sq);
        assert_eq!(h.len(), 4);
        assert!(!h.contains(&pt(1, 1)));
        assert_eq!(convex_hull(&[pt(0, 0), pt(1, 1), pt(3, 3), pt(2, 2)]), vec![pt(0, 0), pt(3, 3)]);

        let square = vec![seg(0, 0, 2, 0), seg(2, 0, 2, 2), seg(2, 2, 0, 2), seg(0, 2, 0, 0)];
        assert!(on_hull_boundary(&seg(0, 0, 2, 0), &[seg(0, 0, 2, 0)]));
        assert!(on_hull_boundary(&seg(0, 2, 0, 0), &square));
        let mut with_diag = square.clone();
        with_diag.push(seg(0, 0, 2, 2));
        assert!(!on_hull_boundary(&seg(0, 0, 2, 2), &with_diag));
        // a piece of a hull edge is on the boundary too
        assert!(on_hull_boundary(&seg(0, 0, 1, 0), &with_diag));
    }

    #[test]
    fn clipping() {
        let l = line(1, 0, 0);
        assert_eq!(clip_to_halfplane(&seg(-1, 0, 1, 0), &l, Side::Right), Some(seg(0, 0, 1, 0)));
        assert_eq!(clip_to_halfplane(&seg(-1, 0, 1, 0), &l, Side::Left), Some(seg(-1, 0, 0, 0)));
        assert_eq!(clip_to_halfplane(&seg(1, 0, 2, 0), &l, Side::Left), None);
        assert_eq!(clip_to_halfplane(&seg(0, 0, 0, 3), &l, Side::Right), None);
        assert_eq!(clip_to_halfplane(&seg(0, 0, 2, 0), &l, Side::Right), Some(seg(0, 0, 2, 0)));
        assert_eq!(clip_to_halfplane(&seg(0, 0, 2, 0), &l, Side::Left), None);
    }

    #[test]
    fn merging() {
        assert_eq!(merge_collinear(&[seg(0, 0, 2, 0), seg(1, 0, 3, 0)]), vec![seg(0, 0, 3, 0)]);
        assert_eq!(merge_collinear(&[seg(0, 0, 1, 0), seg(1, 0, 2, 0)]).len(), 2);
        assert_eq!(merge_collinear(&[seg(0, 0, 2, 0), seg(0, 0, 2, 0)]), vec![seg(0, 0, 2, 0)]);
        // chain merge needs the fixpoint: a and c only overlap through b
        let merged = merge_collinear(&[seg(0, 0, 2, 0), seg(3, 0, 5, 0), seg(1, 0, 4, 0)]);
        assert_eq!(merged, vec![seg(0, 0, 5, 0)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            (-60i64..=60, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
        }

        fn point() -> impl Strategy<Value = Point> {
            (rational(), rational()).prop_map(|(x, y)| Point::new(x, y))
        }

        fn segment() -> impl Strategy<Value = Segment> {
            (point(), point()).prop_filter_map("degenerate", |(p, q)| Segment::new(p, q).ok())
        }

        fn any_line() -> impl Strategy<Value = Line> {
            (-6i64..=6, -6i64..=6, -30i64..=30).prop_filter_map("zero normal", |(a, b, c)| Line::from_ints(a, b, c).ok())
        }

        proptest! {
            #[test]
            fn reflection_is_an_isometric_involution(l in any_line(), p in point(), q in point()) {
                let (rp, rq) = (reflect_point(&p, &l), reflect_point(&q, &l));
                prop_assert_eq!(reflect_point(&rp, &l), p.clone());
                prop_assert_eq!(rp.dist2(&rq), p.dist2(&q));
                prop_assert_eq!(l.eval(&rp), -l.eval(&p));
            }

            #[test]
            fn points_of_the_line_are_fixed(l in any_line(), t in rational()) {
                let other = if l.is_vertical() { Line::horizontal(&t) } else { Line::vertical(&t) };
                let p = l.intersect(&other).expect("not parallel");
                prop_assert!(l.contains(&p));
                prop_assert_eq!(reflect_point(&p, &l), p);
            }

            #[test]
            fn orientation_is_antisymmetric(a in point(), b in point(), c in point()) {
                prop_assert_eq!(orient(&a, &b, &c), -orient(&b, &a, &c));
                prop_assert_eq!(orient(&a, &b, &c), orient(&b, &c, &a));
            }

            #[test]
            fn intersection_class_is_symmetric(s in segment(), t in segment()) {
                prop_assert_eq!(classify_intersection(&s, &t), classify_intersection(&t, &s));
            }

            #[test]
            fn clip_pieces_stay_inside(s in segment(), l in any_line()) {
                for side in [Side::Left, Side::Right] {
                    if let Some(piece) = clip_to_halfplane(&s, &l, side) {
                        prop_assert!(s.contains(piece.p()) && s.contains(piece.q()));
                        for e in piece.endpoints() {
                            prop_assert_ne!(side_of(e, &l), side.opposite());
                        }
                    }
                }
            }

            #[test]
            fn merging_is_order_independent(s in segment(), t1 in 1i64..50, t2 in 50i64..99) {
                let at = |t: i64| {
                    let t = ratio(t, 100);
                    Point::new(&s.p.x + (&s.q.x - &s.p.x) * &t, &s.p.y + (&s.q.y - &s.p.y) * &t)
                };
                let a = Segment::new(s.p.clone(), at(t2)).unwrap();
                let b = Segment::new(at(t1), s.q.clone()).unwrap();
                prop_assert_eq!(merge_collinear(&[a.clone(), b.clone()]), vec![s.clone()]);
                prop_assert_eq!(merge_collinear(&[b, a]), vec![s]);
            }

            #[test]
            fn hull_contains_every_point(pts in proptest::collection::vec(point(), 1..12)) {
                let hull = convex_hull(&pts);
                if hull.len() >= 3 {
                    for p in &pts {
                        for i in 0..hull.len() {
                            prop_assert!(orient(&hull[i], &hull[(i + 1) % hull.len()], p) >= Rational::zero());
                        }
                    }
                }
            }
        }
    }
}

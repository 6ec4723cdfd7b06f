//! Versioned JSON documents for instances and fold traces.
//!
//! Every rational is written as a numerator/denominator pair of integers.
//! Integers that fit in an `i64` are JSON numbers, larger ones decimal
//! strings, so documents stay exact at any size.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::fold::{FoldMode, FoldMove, Instance, InstanceError, SegmentId};
use crate::geom::{Line, Point, Rational, Segment, Side};
use crate::reduce::{GadgetMap, ZoneRect};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => Int::Small(x),
            None => Int::Big(v.to_string()),
        }
    }
}

impl Int {
    pub fn value(&self) -> Result<BigInt, DocumentError> {
        match self {
            Int::Small(x) => Ok(BigInt::from(*x)),
            Int::Big(s) => BigInt::from_str(s).map_err(|_| DocumentError::BadInteger(s.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("`{0}` is not an integer")]
    BadInteger(String),
    #[error("zero denominator in {0}")]
    ZeroDenominator(String),
    #[error("segment {0} has coincident endpoints")]
    Degenerate(SegmentId),
    #[error("segment id {0} is out of range")]
    BadId(String),
    #[error("move {0} has an all-zero line")]
    ZeroLine(usize),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn pair(r: &Rational) -> [Int; 2] {
    [r.numer().into(), r.denom().into()]
}

fn unpair(num: &Int, den: &Int, what: impl FnOnce() -> String) -> Result<Rational, DocumentError> {
    let d = den.value()?;
    if d.is_zero() {
        return Err(DocumentError::ZeroDenominator(what()));
    }
    Ok(Rational::new(num.value()?, d))
}

/// Exact layout metadata of a compiled instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub gamma_x: Rational,
    pub kappa1_y: Rational,
    pub kappa2_y: Rational,
    pub zones: Vec<ZoneRect>,
}

impl From<&GadgetMap> for Layout {
    fn from(gm: &GadgetMap) -> Self {
        Layout {
            gamma_x: Rational::zero(),
            kappa1_y: gm.kappa1.clone(),
            kappa2_y: Rational::zero(),
            zones: gm.zone_rects(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneDoc {
    pub clause: usize,
    pub good: bool,
    /// x0, x1, y0, y1 as numerator/denominator pairs.
    pub rect: [Int; 8],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutDoc {
    pub gamma_x: [Int; 2],
    pub kappa1_y: [Int; 2],
    pub kappa2_y: [Int; 2],
    #[serde(default)]
    pub zones: Vec<ZoneDoc>,
}

impl From<&Layout> for LayoutDoc {
    fn from(l: &Layout) -> Self {
        let zones = l
            .zones
            .iter()
            .map(|z| {
                let [a, b] = pair(&z.x0);
                let [c, d] = pair(&z.x1);
                let [e, f] = pair(&z.y0);
                let [g, h] = pair(&z.y1);
                ZoneDoc { clause: z.clause, good: z.good, rect: [a, b, c, d, e, f, g, h] }
            })
            .collect();
        LayoutDoc {
            gamma_x: pair(&l.gamma_x),
            kappa1_y: pair(&l.kappa1_y),
            kappa2_y: pair(&l.kappa2_y),
            zones,
        }
    }
}

impl LayoutDoc {
    pub fn to_layout(&self) -> Result<Layout, DocumentError> {
        let get = |p: &[Int; 2], what: &str| unpair(&p[0], &p[1], || what.to_string());
        let zones = self
            .zones
            .iter()
            .map(|z| {
                let what = || format!("zone of clause {}", z.clause);
                let r = &z.rect;
                Ok(ZoneRect {
                    clause: z.clause,
                    good: z.good,
                    x0: unpair(&r[0], &r[1], what)?,
                    x1: unpair(&r[2], &r[3], what)?,
                    y0: unpair(&r[4], &r[5], what)?,
                    y1: unpair(&r[6], &r[7], what)?,
                })
            })
            .collect::<Result<_, DocumentError>>()?;
        Ok(Layout {
            gamma_x: get(&self.gamma_x, "gamma_x")?,
            kappa1_y: get(&self.kappa1_y, "kappa1_y")?,
            kappa2_y: get(&self.kappa2_y, "kappa2_y")?,
            zones,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub version: u32,
    /// `[id, px_num, px_den, py_num, py_den, qx_num, qx_den, qy_num, qy_den]`
    pub segments: Vec<[Int; 9]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub roles: BTreeMap<SegmentId, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutDoc>,
}

pub fn write_instance(inst: &Instance, layout: Option<&Layout>) -> InstanceDocument {
    let segments = inst
        .segments
        .iter()
        .map(|(id, s)| {
            let [a, b] = pair(&s.p().x);
            let [c, d] = pair(&s.p().y);
            let [e, f] = pair(&s.q().x);
            let [g, h] = pair(&s.q().y);
            [Int::Small(*id as i64), a, b, c, d, e, f, g, h]
        })
        .collect();
    InstanceDocument {
        version: FORMAT_VERSION,
        segments,
        roles: inst.roles.clone(),
        layout: layout.map(LayoutDoc::from),
    }
}

pub fn read_instance(doc: &InstanceDocument) -> Result<Instance, DocumentError> {
    if doc.version != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.version));
    }
    let mut segs = Vec::with_capacity(doc.segments.len());
    for row in &doc.segments {
        let id = match &row[0] {
            Int::Small(x) => SegmentId::try_from(*x).map_err(|_| DocumentError::BadId(x.to_string()))?,
            Int::Big(s) => return Err(DocumentError::BadId(s.clone())),
        };
        let at = |k: usize| unpair(&row[k], &row[k + 1], || format!("segment {id}"));
        let p = Point::new(at(1)?, at(3)?);
        let q = Point::new(at(5)?, at(7)?);
        let s = Segment::new(p, q).map_err(|_| DocumentError::Degenerate(id))?;
        segs.push((id, s));
    }
    Ok(Instance::with_roles(segs, doc.roles.clone())?)
}

/// Layout metadata carried by a document, if any.
pub fn read_layout(doc: &InstanceDocument) -> Result<Option<Layout>, DocumentError> {
    doc.layout.as_ref().map(LayoutDoc::to_layout).transpose()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub version: u32,
    pub mode: FoldMode,
    /// `[a, b, c, side]` for the line `a x + b y = c`.
    pub moves: Vec<(Int, Int, Int, Side)>,
}

pub fn write_trace(moves: &[FoldMove], mode: FoldMode) -> TraceDocument {
    TraceDocument {
        version: FORMAT_VERSION,
        mode,
        moves: moves
            .iter()
            .map(|m| (m.line.a().into(), m.line.b().into(), m.line.c().into(), m.reflected_side))
            .collect(),
    }
}

pub fn read_trace(doc: &TraceDocument) -> Result<Vec<FoldMove>, DocumentError> {
    if doc.version != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.version));
    }
    doc.moves
        .iter()
        .enumerate()
        .map(|(k, (a, b, c, side))| {
            let line = Line::new(a.value()?, b.value()?, c.value()?).map_err(|_| DocumentError::ZeroLine(k))?;
            Ok(FoldMove::new(line, *side))
        })
        .collect()
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocumentError> {
    serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))
}

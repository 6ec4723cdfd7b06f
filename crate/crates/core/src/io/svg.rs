//! Deterministic SVG rendering of fold states.
//!
//! The y axis is flipped so that larger y is drawn higher. Output depends
//! only on the inputs: elements are emitted in id order and coordinates are
//! printed with a fixed number of decimals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::document::Layout;
use crate::fold::{FoldState, SegmentId};
use crate::geom::{Line, Rational};

#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Draw zone strips and the γ, κ1, κ2 guide lines.
    pub layout: Option<Layout>,
    /// Role names of the original segments, used for coloring.
    pub roles: BTreeMap<SegmentId, String>,
    /// Draw the lines of the folds already applied.
    pub fold_lines: bool,
    pub width_px: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            layout: None,
            roles: BTreeMap::new(),
            fold_lines: true,
            width_px: 800,
        }
    }
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Stroke color for a role name.
pub fn role_color(role: Option<&str>) -> &'static str {
    let Some(role) = role else { return "#000000" };
    let part = role.split_once('.').map_or(role, |(_, p)| p);
    if role == "b_z" {
        "#7b3294"
    } else if role.starts_with('x') {
        match part {
            "t" | "t_h" | "t_b1" | "t_b2" | "t_b3" => "#1f78b4",
            "f" | "f_h" | "f_b1" | "f_b2" | "f_b3" => "#e31a1c",
            _ => "#666666",
        }
    } else if part.starts_with('z') {
        if part.ends_with(".b") {
            "#a6611a"
        } else {
            "#ff7f00"
        }
    } else {
        "#000000"
    }
}

struct Frame {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Frame {
    fn new() -> Self {
        Frame {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn is_empty(&self) -> bool {
        self.min_x > self.max_x
    }

    fn pad(&mut self) {
        if self.is_empty() {
            *self = Frame { min_x: 0.0, min_y: 0.0, max_x: 1.0, max_y: 1.0 };
        }
        let m = ((self.max_x - self.min_x).max(self.max_y - self.min_y) * 0.05).max(0.5);
        self.min_x -= m;
        self.min_y -= m;
        self.max_x += m;
        self.max_y += m;
    }

    /// Portion of `l` inside the frame.
    fn clip(&self, l: &Line) -> Option<[f64; 4]> {
        let (a, b, c) = (l.a().to_f64()?, l.b().to_f64()?, l.c().to_f64()?);
        let mut pts: Vec<(f64, f64)> = Vec::new();
        if b != 0.0 {
            for x in [self.min_x, self.max_x] {
                let y = (c - a * x) / b;
                if (self.min_y..=self.max_y).contains(&y) {
                    pts.push((x, y));
                }
            }
        }
        if a != 0.0 {
            for y in [self.min_y, self.max_y] {
                let x = (c - b * y) / a;
                if (self.min_x..=self.max_x).contains(&x) {
                    pts.push((x, y));
                }
            }
        }
        pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        pts.dedup();
        (pts.len() >= 2).then(|| [pts[0].0, pts[0].1, pts[pts.len() - 1].0, pts[pts.len() - 1].1])
    }
}

pub fn render_svg(state: &FoldState, opts: &SvgOptions) -> String {
    let mut frame = Frame::new();
    for (_, s) in state.segments() {
        for p in s.endpoints() {
            frame.add(f(&p.x), f(&p.y));
        }
    }
    if let Some(l) = &opts.layout {
        for z in &l.zones {
            frame.add(f(&z.x0), f(&z.y0));
            frame.add(f(&z.x1), f(&z.y1));
        }
    }
    frame.pad();
    let w = frame.max_x - frame.min_x;
    let h = frame.max_y - frame.min_y;
    let stroke = num(w.max(h) / 400.0);
    let height_px = ((opts.width_px as f64) * h / w).round().max(1.0) as u32;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        opts.width_px,
        height_px,
        num(frame.min_x),
        num(-frame.max_y),
        num(w),
        num(h)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="{stroke}" stroke-linecap="round">"#);

    if let Some(l) = &opts.layout {
        for z in &l.zones {
            let (fill, kind) = if z.good { ("#4daf4a", "good") } else { ("#e41a1c", "bad") };
            let _ = writeln!(
                out,
                r#"<rect class="zone {kind}" data-clause="{}" x="{}" y="{}" width="{}" height="{}" fill="{fill}" fill-opacity="0.25" stroke="none"/>"#,
                z.clause,
                num(f(&z.x0)),
                num(f(&z.y0)),
                num(f(&z.x1) - f(&z.x0)),
                num(f(&z.y1) - f(&z.y0)),
            );
        }
        let guides = [
            ("gamma", Line::vertical(&l.gamma_x)),
            ("kappa1", Line::horizontal(&l.kappa1_y)),
            ("kappa2", Line::horizontal(&l.kappa2_y)),
        ];
        for (name, line) in guides {
            if let Some([x1, y1, x2, y2]) = frame.clip(&line) {
                let _ = writeln!(
                    out,
                    r##"<line class="guide {name}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-dasharray="{} {}"/>"##,
                    num(x1),
                    num(y1),
                    num(x2),
                    num(y2),
                    num(w / 100.0),
                    num(w / 100.0),
                );
            }
        }
    }

    if opts.fold_lines {
        for (k, applied) in state.history().iter().enumerate() {
            if let Some([x1, y1, x2, y2]) = frame.clip(&applied.mv.line) {
                let _ = writeln!(
                    out,
                    r##"<line class="fold" data-step="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" stroke-dasharray="{} {}"/>"##,
                    k + 1,
                    num(x1),
                    num(y1),
                    num(x2),
                    num(y2),
                    num(w / 200.0),
                    num(w / 100.0),
                );
            }
        }
    }

    for (id, s) in state.segments() {
        let origin = state.provenance().get(id).and_then(|p| p.iter().next()).copied().unwrap_or(*id);
        let role = opts.roles.get(&origin).map(String::as_str);
        let _ = write!(
            out,
            r#"<line class="segment" data-id="{id}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}""#,
            num(f(&s.p().x)),
            num(f(&s.p().y)),
            num(f(&s.q().x)),
            num(f(&s.q().y)),
            role_color(role),
        );
        match role {
            Some(r) => {
                let _ = writeln!(out, r#" data-role="{r}"/>"#);
            }
            None => out.push_str("/>\n"),
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fold::Instance;
    use crate::geom::Segment;

    #[test]
    fn empty_state() {
        let svg = render_svg(&FoldState::new(&Instance::default()), &SvgOptions::default());
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<line").count(), 0);
    }

    #[test]
    fn one_segment_one_line() {
        let inst = Instance::from_segments([Segment::from_ints(0, 0, 4, 2)]);
        let svg = render_svg(&FoldState::new(&inst), &SvgOptions::default());
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains(r#"x1="0" y1="0" x2="4" y2="2""#));
        assert_eq!(svg, render_svg(&FoldState::new(&inst), &SvgOptions::default()));
    }

    #[test]
    fn numbers() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(1.0 / 3.0), "0.333");
    }

    #[test]
    fn colors() {
        assert_eq!(role_color(Some("x1.t_b3")), "#1f78b4");
        assert_eq!(role_color(Some("x2.f")), "#e31a1c");
        assert_eq!(role_color(Some("x2.b1")), "#666666");
        assert_eq!(role_color(Some("c1.z+1")), "#ff7f00");
        assert_eq!(role_color(Some("c1.z-2.b")), "#a6611a");
        assert_eq!(role_color(Some("b_z")), "#7b3294");
        assert_eq!(role_color(Some("c2.c4")), "#000000");
        assert_eq!(role_color(None), "#000000");
    }
}

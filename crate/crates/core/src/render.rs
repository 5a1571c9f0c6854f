//! Deterministic SVG drawings of lattice paths, subdivisions and tropical
//! curves.
//!
//! All coordinates are computed exactly and printed as decimals rounded to
//! four places, so equal inputs give byte-identical documents. The y-axis is
//! flipped: `(0, d)` is drawn top left.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{edge_lattice_length, LatticePath, LatticePoint};
use crate::subdivision::DualSubdivision;
use crate::trop_poly::{check_balancing, RationalPoint, RegularSubdivision, TropError, TropicalCurve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scale must be positive")]
    Scale,
    #[error("margin must be nonnegative")]
    Margin,
    #[error("end length must be positive")]
    EndLength,
    #[error("curve is not balanced at vertices {0:?}")]
    Unbalanced(Vec<usize>),
    #[error(transparent)]
    Curve(#[from] TropError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderConfig {
    scale: BigRational,
    margin: BigRational,
    end_length: BigRational,
    pub label_weights: bool,
}

impl RenderConfig {
    pub fn new(
        scale: BigRational,
        margin: BigRational,
        end_length: BigRational,
        label_weights: bool,
    ) -> Result<Self, RenderError> {
        if !scale.is_positive() {
            return Err(RenderError::Scale);
        }
        if margin.is_negative() {
            return Err(RenderError::Margin);
        }
        if !end_length.is_positive() {
            return Err(RenderError::EndLength);
        }
        Ok(RenderConfig { scale, margin, end_length, label_weights })
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn margin(&self) -> &BigRational {
        &self.margin
    }

    pub fn end_length(&self) -> &BigRational {
        &self.end_length
    }
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            scale: int(40),
            margin: int(20),
            end_length: int(2),
            label_weights: true,
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Decimal text of `x` rounded half away from zero to four places.
fn decimal(x: &BigRational) -> String {
    let unit = BigInt::from(10_000);
    let scaled = x * BigRational::from_integer(unit.clone());
    let rounded = scaled.round().to_integer();
    let sign = if rounded.is_negative() { "-" } else { "" };
    let (whole, frac) = rounded.abs().div_rem(&unit);
    if frac.is_zero() {
        return format!("{sign}{whole}");
    }
    let frac = format!("{frac:04}");
    format!("{sign}{whole}.{}", frac.trim_end_matches('0'))
}

/// Maps plane coordinates into the document.
struct Frame {
    x0: BigRational,
    y1: BigRational,
    width: BigRational,
    height: BigRational,
    cfg: RenderConfig,
}

impl Frame {
    fn around<'a>(points: impl IntoIterator<Item = (&'a BigRational, &'a BigRational)>, cfg: &RenderConfig) -> Self {
        let mut bounds: Option<(BigRational, BigRational, BigRational, BigRational)> = None;
        for (x, y) in points {
            bounds = Some(match bounds {
                None => (x.clone(), x.clone(), y.clone(), y.clone()),
                Some((a, b, c, d)) => (a.min(x.clone()), b.max(x.clone()), c.min(y.clone()), d.max(y.clone())),
            });
        }
        let (x0, x1, y0, y1) = bounds.unwrap_or_else(|| (int(0), int(0), int(0), int(0)));
        let twice_margin = &cfg.margin * int(2);
        Frame {
            width: (&x1 - &x0) * &cfg.scale + &twice_margin,
            height: (&y1 - &y0) * &cfg.scale + &twice_margin,
            x0,
            y1,
            cfg: cfg.clone(),
        }
    }

    fn x(&self, x: &BigRational) -> String {
        decimal(&(&self.cfg.margin + (x - &self.x0) * &self.cfg.scale))
    }

    fn y(&self, y: &BigRational) -> String {
        decimal(&(&self.cfg.margin + (&self.y1 - y) * &self.cfg.scale))
    }

    fn open(&self, out: &mut String) {
        let (w, h) = (decimal(&self.width), decimal(&self.height));
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        out.push_str(concat!(
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" ",
            "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n",
            "<style>.newton,.cell{fill:none;stroke:#444;stroke-width:1}.path-segment{stroke:#c00;stroke-width:3}",
            ".lattice-point{fill:#000}.edge,.end{stroke:#036;stroke-width:2}.vertex{fill:#036}",
            ".weight{font:12px sans-serif;fill:#333}</style>\n",
        ));
    }

    fn line(&self, out: &mut String, class: &str, a: (&BigRational, &BigRational), b: (&BigRational, &BigRational)) {
        let marker = if class == "end" { r#" marker-end="url(#arrow)""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"{marker}/>"#,
            self.x(a.0),
            self.y(a.1),
            self.x(b.0),
            self.y(b.1)
        );
    }

    fn polygon(&self, out: &mut String, class: &str, pts: &[(BigRational, BigRational)]) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", self.x(x), self.y(y))).collect();
        let _ = writeln!(out, r#"<polygon class="{class}" points="{}"/>"#, coords.join(" "));
    }

    fn dot(&self, out: &mut String, class: &str, p: (&BigRational, &BigRational)) {
        let _ = writeln!(out, r#"<circle class="{class}" cx="{}" cy="{}" r="3"/>"#, self.x(p.0), self.y(p.1));
    }

    fn label(&self, out: &mut String, at: (&BigRational, &BigRational), text: u64) {
        let _ = writeln!(out, r#"<text class="weight" x="{}" y="{}">{text}</text>"#, self.x(at.0), self.y(at.1));
    }
}

fn lift(p: LatticePoint) -> (BigRational, BigRational) {
    (int(p.i), int(p.j))
}

fn corners(d: u32) -> Vec<(BigRational, BigRational)> {
    let d = d as i64;
    [(0, 0), (d, 0), (0, d)].iter().map(|&(i, j)| lift(LatticePoint::new(i, j))).collect()
}

fn midpoint(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    ((&a.0 + &b.0) * &half, (&a.1 + &b.1) * &half)
}

fn as_refs(p: &(BigRational, BigRational)) -> (&BigRational, &BigRational) {
    (&p.0, &p.1)
}

/// `Δ_d`, its lattice points and the path, one `path-segment` line per step.
pub fn render_path(path: &LatticePath, cfg: &RenderConfig) -> String {
    let corners = corners(path.degree());
    let frame = Frame::around(corners.iter().map(as_refs), cfg);
    let mut out = String::new();
    frame.open(&mut out);
    frame.polygon(&mut out, "newton", &corners);
    for p in path.triangle().points() {
        frame.dot(&mut out, "lattice-point", as_refs(&lift(p)));
    }
    for w in path.points().windows(2) {
        let (a, b) = (lift(w[0]), lift(w[1]));
        frame.line(&mut out, "path-segment", as_refs(&a), as_refs(&b));
    }
    out.push_str("</svg>\n");
    out
}

fn render_cells(polygons: &[Vec<LatticePoint>], bounds: &[(BigRational, BigRational)], cfg: &RenderConfig) -> String {
    let frame = Frame::around(bounds.iter().map(as_refs), cfg);
    let mut out = String::new();
    frame.open(&mut out);
    for poly in polygons {
        let pts: Vec<_> = poly.iter().map(|p| lift(*p)).collect();
        frame.polygon(&mut out, "cell", &pts);
        if cfg.label_weights {
            for (p, q) in poly.iter().zip(poly.iter().cycle().skip(1)) {
                let len = edge_lattice_length(*p, *q).unwrap_or(0);
                if len > 1 {
                    let m = midpoint(&lift(*p), &lift(*q));
                    frame.label(&mut out, as_refs(&m), len);
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Every cell outlined, one `cell` polygon each.
pub fn render_subdivision(s: &DualSubdivision, cfg: &RenderConfig) -> String {
    render_cells(&s.polygons(), &corners(s.degree()), cfg)
}

/// Cells of a regular subdivision of an arbitrary Newton polygon.
pub fn render_regular_subdivision(s: &RegularSubdivision, cfg: &RenderConfig) -> String {
    let polys: Vec<Vec<LatticePoint>> = s.cells.iter().map(|c| c.vertices.clone()).collect();
    let bounds: Vec<_> = s.newton_polygon.iter().map(|p| lift(*p)).collect();
    render_cells(&polys, &bounds, cfg)
}

/// Bounded edges as segments, ends as arrows of `end_length` primitive steps.
pub fn render_curve(curve: &TropicalCurve, cfg: &RenderConfig) -> Result<String, RenderError> {
    curve.validate()?;
    let report = check_balancing(curve);
    if !report.is_balanced() {
        return Err(RenderError::Unbalanced(report.unbalanced_vertices()));
    }
    let point = |v: &RationalPoint| (v.x.clone(), v.y.clone());
    let tips: Vec<(BigRational, BigRational)> = curve
        .ends
        .iter()
        .map(|e| {
            let v = &curve.vertices[e.vertex];
            (&v.x + int(e.direction.0) * &cfg.end_length, &v.y + int(e.direction.1) * &cfg.end_length)
        })
        .collect();
    let all: Vec<_> = curve.vertices.iter().map(point).chain(tips.iter().cloned()).collect();
    let frame = Frame::around(all.iter().map(as_refs), cfg);
    let mut out = String::new();
    frame.open(&mut out);
    for e in &curve.bounded_edges {
        let (a, b) = (point(&curve.vertices[e.from]), point(&curve.vertices[e.to]));
        frame.line(&mut out, "edge", as_refs(&a), as_refs(&b));
        if cfg.label_weights && e.weight > 1 {
            frame.label(&mut out, as_refs(&midpoint(&a, &b)), e.weight);
        }
    }
    for (e, tip) in curve.ends.iter().zip(&tips) {
        let a = point(&curve.vertices[e.vertex]);
        frame.line(&mut out, "end", as_refs(&a), as_refs(tip));
        if cfg.label_weights && e.weight > 1 {
            frame.label(&mut out, as_refs(&midpoint(&a, tip)), e.weight);
        }
    }
    for v in &curve.vertices {
        frame.dot(&mut out, "vertex", as_refs(&point(v)));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

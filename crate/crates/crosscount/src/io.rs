//! Exact JSON persistence of polygon pairs and deterministic SVG drawings.
//!
//! Rationals are always written as `"num/den"` strings in lowest terms, so a
//! file is a faithful copy of the data. Decimal numbers only ever appear in
//! SVG output, which is for looking at and is never read back.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::constructions::Family;
use crate::disjointness::{graph_unchecked, Side};
use crate::geom::{check_general_position, Point, Role};
use crate::polygon::{contacts, validate_simple, PolygonError};
use crate::structure::{eligible_pairs, find_associated_pair, AssociatedPair};
use crate::{Point2, Polygon, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {field}: {message}")]
    ParseError { field: String, message: String },
    #[error("format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("{field} is not a valid polygon: {source}")]
    InvalidPolygon { field: String, source: PolygonError },
}

fn parse_error(field: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::ParseError { field: field.into(), message: message.into() }
}

/// `"num/den"` in lowest terms with a positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let int = |t: &str| BigInt::from_str(t).map_err(|_| format!("{t:?} is not an integer"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((num, den)) => {
            let den = int(den)?;
            if den.is_zero() {
                return Err(format!("{s:?} has a zero denominator"));
            }
            Ok(Rational::new(int(num)?, den))
        }
    }
}

fn encode_polygon(poly: &Polygon) -> Vec<[String; 2]> {
    poly.vertices().iter().map(|v| [format_rational(&v.x), format_rational(&v.y)]).collect()
}

fn decode_polygon(field: &str, raw: &[[String; 2]]) -> Result<Polygon, IoError> {
    let mut pts = Vec::with_capacity(raw.len());
    for (i, [x, y]) in raw.iter().enumerate() {
        let x = parse_rational(x).map_err(|e| parse_error(format!("{field}[{i}][0]"), e))?;
        let y = parse_rational(y).map_err(|e| parse_error(format!("{field}[{i}][1]"), e))?;
        pts.push(Point::new(x, y));
    }
    validate_simple(pts).map_err(|source| IoError::InvalidPolygon { field: field.to_string(), source })
}

/// `serde(with = ...)` adapter storing a polygon as `"num/den"` pairs.
pub mod exact_polygon {
    use super::*;

    pub fn serialize<S: Serializer>(poly: &Polygon, s: S) -> Result<S::Ok, S::Error> {
        encode_polygon(poly).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Polygon, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        decode_polygon("polygon", &raw).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

#[derive(Serialize, Deserialize)]
struct RawPairFile {
    format_version: u32,
    #[serde(rename = "P")]
    p: Vec<[String; 2]>,
    #[serde(rename = "Q")]
    q: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    metadata: Metadata,
}

/// A polygon pair with optional provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFile {
    pub p: Polygon,
    pub q: Polygon,
    pub metadata: Metadata,
}

impl PairFile {
    pub fn new(p: Polygon, q: Polygon) -> Self {
        PairFile { p, q, metadata: Metadata::default() }
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }

    /// Canonical text: pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let raw = RawPairFile {
            format_version: FORMAT_VERSION,
            p: encode_polygon(&self.p),
            q: encode_polygon(&self.q),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        let found = value
            .get("format_version")
            .ok_or_else(|| parse_error("format_version", "missing"))?
            .as_u64()
            .ok_or_else(|| parse_error("format_version", "not a non-negative integer"))?;
        if found != FORMAT_VERSION as u64 {
            return Err(IoError::VersionMismatch { found: found.try_into().unwrap_or(u32::MAX), expected: FORMAT_VERSION });
        }
        let raw: RawPairFile = serde_json::from_value(value).map_err(|e| parse_error("document", e.to_string()))?;
        Ok(PairFile { p: decode_polygon("P", &raw.p)?, q: decode_polygon("Q", &raw.q)?, metadata: raw.metadata })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }
}

pub fn save_pair(path: impl AsRef<Path>, p: &Polygon, q: &Polygon, metadata: Metadata) -> Result<(), IoError> {
    PairFile::new(p.clone(), q.clone()).with_metadata(metadata).save(path)
}

pub fn load_pair(path: impl AsRef<Path>) -> Result<PairFile, IoError> {
    PairFile::load(path)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub show_crossings: bool,
    /// Dotted axis of the first eligible consecutive pair of `P`.
    pub show_axis: bool,
    /// The two cones of that same associated pair.
    pub show_cones: bool,
    pub highlight_sides: Vec<Side>,
}

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

struct View {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl View {
    fn fit(points: &[&Point2]) -> View {
        let xs: Vec<f64> = points.iter().map(|p| to_f64(&p.x)).collect();
        let ys: Vec<f64> = points.iter().map(|p| to_f64(&p.y)).collect();
        let (min_x, max_x) = bounds(&xs);
        let (min_y, max_y) = bounds(&ys);
        let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
        View { min_x, max_y, scale: (CANVAS - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: &Point2) -> (f64, f64) {
        self.map_f(to_f64(&p.x), to_f64(&p.y))
    }

    fn map_f(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * self.scale, MARGIN + (self.max_y - y) * self.scale)
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" { "0.0000".to_string() } else { s }
}

fn polygon_path(view: &View, poly: &Polygon) -> String {
    let mut d = String::new();
    for (i, v) in poly.vertices().iter().enumerate() {
        let (x, y) = view.map(v);
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, fmt_coord(x), fmt_coord(y));
    }
    d.push_str(" Z");
    d
}

fn line_elem(out: &mut String, a: (f64, f64), b: (f64, f64), attrs: &str) {
    let _ = writeln!(
        out,
        r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
        fmt_coord(a.0),
        fmt_coord(a.1),
        fmt_coord(b.0),
        fmt_coord(b.1)
    );
}

fn first_associated_pair(p: &Polygon, q: &Polygon) -> Option<AssociatedPair<Rational>> {
    check_general_position(p, q).ok()?;
    let g = graph_unchecked(p, q);
    eligible_pairs(p.len(), &g).into_iter().find_map(|i| find_associated_pair(p, i, q, &g).ok())
}

/// SVG drawing of a pair: `P` solid, `Q` dashed, with optional crossing
/// markers, axis, cones and highlighted sides. Pure function of its inputs.
pub fn render_svg(p: &Polygon, q: &Polygon, options: &RenderOptions) -> String {
    let all: Vec<&Point2> = p.vertices().iter().chain(q.vertices()).collect();
    let view = View::fit(&all);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r##"  <path id="P" d="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##, polygon_path(&view, p));
    let _ = writeln!(
        out,
        r##"  <path id="Q" d="{}" fill="none" stroke="#b22222" stroke-width="2" stroke-dasharray="8 5"/>"##,
        polygon_path(&view, q)
    );
    for side in &options.highlight_sides {
        let poly = match side.role {
            Role::P => p,
            Role::Q => q,
            Role::Probe => continue,
        };
        if let Some(s) = poly.sides().get(side.index) {
            line_elem(&mut out, view.map(s.a()), view.map(s.b()), r##"stroke="#f2a900" stroke-width="5" stroke-opacity="0.6""##);
        }
    }
    if options.show_crossings {
        let hits = contacts(p, q).crossing;
        for (i, j) in hits.ones() {
            let pt = crate::geom::line_meet(&p.sides()[i], &q.sides()[j]).expect("crossing sides are not parallel");
            let (x, y) = view.map(&pt);
            let _ = writeln!(out, r#"  <circle class="crossing" cx="{}" cy="{}" r="4" fill="black"/>"#, fmt_coord(x), fmt_coord(y));
        }
    }
    if options.show_axis || options.show_cones {
        if let Some(ap) = first_associated_pair(p, q) {
            let (o, d) = ap.axis();
            let (ox, oy) = (to_f64(&o.x), to_f64(&o.y));
            let (dx, dy) = (to_f64(&d.x) - ox, to_f64(&d.y) - oy);
            let reach = CANVAS / view.scale;
            let norm = (dx * dx + dy * dy).sqrt().max(f64::MIN_POSITIVE);
            let (ux, uy) = (dx / norm * reach, dy / norm * reach);
            if options.show_axis {
                line_elem(
                    &mut out,
                    view.map_f(ox - ux, oy - uy),
                    view.map_f(ox + ux, oy + uy),
                    r#"class="axis" stroke="gray" stroke-width="1.5" stroke-dasharray="2 4""#,
                );
            }
            if options.show_cones {
                let pair_p = (&p.sides()[ap.p_index], &p.sides()[ap.p_partner]);
                let n = q.len();
                let pair_q = (&q.sides()[ap.q_index], &q.sides()[ap.q_partner(n)]);
                for (s, t) in [pair_p, pair_q] {
                    if let Ok(cone) = crate::geom::cone_of(s, t) {
                        for ray in [cone.ray1(), cone.ray2()] {
                            let a = view.map(cone.apex());
                            let (rx, ry) = (to_f64(&ray.x), to_f64(&ray.y));
                            let len = (rx * rx + ry * ry).sqrt().max(f64::MIN_POSITIVE);
                            let (ax, ay) = (to_f64(&cone.apex().x), to_f64(&cone.apex().y));
                            let b = view.map_f(ax + rx / len * reach, ay + ry / len * reach);
                            line_elem(&mut out, a, b, r#"class="cone" stroke="green" stroke-width="1" stroke-opacity="0.7""#);
                        }
                    }
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_extremal, ConstructionSpec};
    use crate::polygon::crossing_count;

    #[test]
    fn rational_codec() {
        assert_eq!(format_rational(&Rational::new(6.into(), (-4).into())), "-3/2");
        assert_eq!(format_rational(&Rational::from_integer(7.into())), "7/1");
        assert_eq!(parse_rational("-3/2").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("4").unwrap(), Rational::from_integer(4.into()));
        assert!(parse_rational("3/0").unwrap_err().contains("zero"));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn round_trip_keeps_the_count() {
        let (p, q) = build_extremal(&ConstructionSpec::infer(9, 7).unwrap()).unwrap();
        let file = PairFile::new(p, q).with_metadata(Metadata { family: Some(Family::OddOdd), ..Metadata::default() });
        let text = file.to_json();
        let back = PairFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        assert_eq!(crossing_count(&back.p, &back.q).unwrap().total, 50);
    }

    #[test]
    fn parse_failures_name_the_field() {
        let bad = r#"{"format_version":1,"P":[["0/1","0/1"],["1/1","3/0"],["0/1","1/1"]],"Q":[]}"#;
        match PairFile::from_json(bad) {
            Err(IoError::ParseError { field, .. }) => assert_eq!(field, "P[1][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let future = r#"{"format_version":2,"P":[],"Q":[]}"#;
        assert!(matches!(PairFile::from_json(future), Err(IoError::VersionMismatch { found: 2, expected: 1 })));
        assert!(matches!(PairFile::from_json("{"), Err(IoError::ParseError { .. })));
    }

    #[test]
    fn svg_is_deterministic_and_marks_crossings() {
        let (p, q) = build_extremal(&ConstructionSpec::infer(8, 8).unwrap()).unwrap();
        let opts = RenderOptions { show_crossings: true, ..RenderOptions::default() };
        let a = render_svg(&p, &q, &opts);
        assert_eq!(a, render_svg(&p, &q, &opts));
        assert_eq!(a.matches(r#"class="crossing""#).count(), 64);
        let bare = render_svg(&p, &q, &RenderOptions::default());
        assert_eq!(bare.matches("<circle").count(), 0);
        assert!(bare.contains("stroke-dasharray"));
    }
}

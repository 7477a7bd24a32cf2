//! JSON-lines ground truth and detections.
//!
//! One object per line:
//!
//! ```text
//! {"image_id": "pano_001", "class_id": 3, "theta": 1.2, "phi": 0.8, "alpha": 0.4, "beta": 0.3, "score": 0.91}
//! ```
//!
//! `score` is required for detections and ignored for ground truth. Angles
//! are radians unless the first non-blank line is `{"angle_unit": "degrees"}`.
//! Blank lines are skipped.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::detector::{GtAnnotation, MIN_FOV};
use crate::geometry::SphericalRect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Radians,
    Degrees,
}

impl AngleUnit {
    fn to_radians(self, v: f64) -> f64 {
        match self {
            AngleUnit::Radians => v,
            AngleUnit::Degrees => v.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub image_id: String,
    pub class_id: usize,
    pub score: f64,
    pub bbox: SphericalRect,
}

/// Ground truth grouped by image, each image's boxes in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Annotations {
    pub by_image: BTreeMap<String, Vec<GtAnnotation>>,
    pub warnings: Vec<String>,
}

impl Annotations {
    pub fn len(&self) -> usize {
        self.by_image.values().map(Vec::len).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Detections {
    pub records: Vec<DetectionRecord>,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ImageId {
    Text(String),
    Number(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    angle_unit: AngleUnit,
}

#[derive(Deserialize)]
struct Line {
    image_id: ImageId,
    class_id: usize,
    theta: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
    score: Option<f64>,
}

#[derive(Serialize)]
struct OutLine<'a> {
    image_id: &'a str,
    class_id: usize,
    theta: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
}

struct Parsed {
    image_id: String,
    class_id: usize,
    bbox: SphericalRect,
    score: Option<f64>,
}

/// Non-blank lines with their 1-based numbers, minus a leading unit header,
/// and the unit in force.
fn content_lines(text: &str, default_unit: AngleUnit) -> (Vec<(usize, &str)>, AngleUnit) {
    let mut unit = default_unit;
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if let Some(h) = lines.first().and_then(|(_, l)| serde_json::from_str::<Header>(l).ok()) {
        unit = h.angle_unit;
        lines.remove(0);
    }
    (lines, unit)
}

fn parse_lines(text: &str, default_unit: AngleUnit) -> Result<(Vec<(usize, Parsed)>, Vec<String>), EvalError> {
    let (lines, unit) = content_lines(text, default_unit);
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for (lineno, s) in lines {
        let l: Line = serde_json::from_str(s).map_err(|e| EvalError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let range = |field: &'static str, value: f64| EvalError::Range {
            line: lineno,
            field,
            value,
        };
        let theta = unit.to_radians(l.theta);
        let phi = unit.to_radians(l.phi);
        if !theta.is_finite() {
            return Err(range("theta", l.theta));
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(range("phi", l.phi));
        }
        let mut fov = |field: &'static str, raw: f64| -> Result<f64, EvalError> {
            let v = unit.to_radians(raw);
            if !(0.0..=std::f64::consts::PI).contains(&v) {
                return Err(range(field, raw));
            }
            if v < MIN_FOV {
                let msg = format!("line {lineno}: {field} = {raw} clamped to {MIN_FOV}");
                log::warn!("{msg}");
                warnings.push(msg);
                return Ok(MIN_FOV);
            }
            Ok(v)
        };
        let alpha = fov("alpha", l.alpha)?;
        let beta = fov("beta", l.beta)?;
        if let Some(sc) = l.score {
            if !sc.is_finite() {
                return Err(range("score", sc));
            }
        }
        let bbox = SphericalRect::wrapped(theta, phi, alpha, beta).map_err(|_| range("theta", l.theta))?;
        let image_id = match l.image_id {
            ImageId::Text(s) => s,
            ImageId::Number(n) => n.to_string(),
        };
        out.push((
            lineno,
            Parsed {
                image_id,
                class_id: l.class_id,
                bbox,
                score: l.score,
            },
        ));
    }
    Ok((out, warnings))
}

pub fn parse_annotations(text: &str) -> Result<Annotations, EvalError> {
    parse_annotations_in(text, AngleUnit::Radians)
}

/// As [`parse_annotations`], reading headerless input in `unit`.
pub fn parse_annotations_in(text: &str, unit: AngleUnit) -> Result<Annotations, EvalError> {
    let (lines, warnings) = parse_lines(text, unit)?;
    let mut by_image: BTreeMap<String, Vec<GtAnnotation>> = BTreeMap::new();
    for (_, p) in lines {
        by_image.entry(p.image_id).or_default().push(GtAnnotation {
            class_id: p.class_id,
            bbox: p.bbox,
        });
    }
    Ok(Annotations { by_image, warnings })
}

pub fn parse_detections(text: &str) -> Result<Detections, EvalError> {
    parse_detections_in(text, AngleUnit::Radians)
}

pub fn parse_detections_in(text: &str, unit: AngleUnit) -> Result<Detections, EvalError> {
    let (lines, warnings) = parse_lines(text, unit)?;
    let records = lines
        .into_iter()
        .map(|(line, p)| {
            let score = p.score.ok_or(EvalError::Parse {
                line,
                message: "detection has no score".into(),
            })?;
            Ok(DetectionRecord {
                image_id: p.image_id,
                class_id: p.class_id,
                score,
                bbox: p.bbox,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(Detections { records, warnings })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairLine {
    b1: [f64; 4],
    b2: [f64; 4],
}

/// Box pairs, one `{"b1": [θ, φ, α, β], "b2": [θ, φ, α, β]}` per line, with
/// the same unit header rule as records.
pub fn parse_pairs(text: &str, unit: AngleUnit) -> Result<Vec<(SphericalRect, SphericalRect)>, EvalError> {
    let (lines, unit) = content_lines(text, unit);
    lines
        .into_iter()
        .map(|(line, s)| {
            let p: PairLine = serde_json::from_str(s).map_err(|e| EvalError::Parse {
                line,
                message: e.to_string(),
            })?;
            let rect = |v: [f64; 4]| {
                let [t, ph, a, b] = v.map(|x| unit.to_radians(x));
                SphericalRect::wrapped(t, ph, a, b).map_err(|e| EvalError::Parse {
                    line,
                    message: e.to_string(),
                })
            };
            Ok((rect(p.b1)?, rect(p.b2)?))
        })
        .collect()
}

pub fn load_pairs(path: impl AsRef<Path>, unit: AngleUnit) -> Result<Vec<(SphericalRect, SphericalRect)>, EvalError> {
    parse_pairs(&read(path.as_ref())?, unit)
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|e| EvalError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Annotations, EvalError> {
    load_annotations_in(path, AngleUnit::Radians)
}

pub fn load_annotations_in(path: impl AsRef<Path>, unit: AngleUnit) -> Result<Annotations, EvalError> {
    parse_annotations_in(&read(path.as_ref())?, unit)
}

pub fn load_detections(path: impl AsRef<Path>) -> Result<Detections, EvalError> {
    load_detections_in(path, AngleUnit::Radians)
}

pub fn load_detections_in(path: impl AsRef<Path>, unit: AngleUnit) -> Result<Detections, EvalError> {
    parse_detections_in(&read(path.as_ref())?, unit)
}

fn write_line<W: Write>(w: &mut W, image_id: &str, class_id: usize, b: &SphericalRect, score: Option<f64>) -> std::io::Result<()> {
    let line = OutLine {
        image_id,
        class_id,
        theta: b.theta(),
        phi: b.phi(),
        alpha: b.alpha(),
        beta: b.beta(),
        score,
    };
    serde_json::to_writer(&mut *w, &line)?;
    w.write_all(b"\n")
}

/// Writes radians, one record per line; `load_annotations` reads it back
/// unchanged.
pub fn write_annotations<W: Write>(mut w: W, ann: &Annotations) -> std::io::Result<()> {
    for (image, boxes) in &ann.by_image {
        for a in boxes {
            write_line(&mut w, image, a.class_id, &a.bbox, None)?;
        }
    }
    w.flush()
}

pub fn write_detections<W: Write>(mut w: W, dets: &[DetectionRecord]) -> std::io::Result<()> {
    for d in dets {
        write_line(&mut w, &d.image_id, d.class_id, &d.bbox, Some(d.score))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_empty_dataset() {
        let a = parse_annotations("").unwrap();
        assert!(a.is_empty() && a.warnings.is_empty());
        assert!(parse_detections("\n\n").unwrap().records.is_empty());
    }

    #[test]
    fn zero_fov_is_clamped_with_a_warning() {
        let a = parse_annotations(r#"{"image_id":"a","class_id":0,"theta":1,"phi":1,"alpha":0,"beta":0.5}"#).unwrap();
        assert_eq!(a.by_image["a"][0].bbox.alpha(), MIN_FOV);
        assert_eq!(a.warnings.len(), 1);
        assert!(a.warnings[0].contains("alpha"));
    }

    #[test]
    fn range_and_parse_errors_name_the_line() {
        let text = "{\"image_id\":\"a\",\"class_id\":0,\"theta\":1,\"phi\":1,\"alpha\":0.2,\"beta\":0.5}\n\
                    {\"image_id\":\"a\",\"class_id\":0,\"theta\":1,\"phi\":4,\"alpha\":0.2,\"beta\":0.5}";
        match parse_annotations(text) {
            Err(EvalError::Range { line: 2, field: "phi", .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_annotations("{\"image_id\":\"a\"}") {
            Err(EvalError::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let no_score = r#"{"image_id":"a","class_id":0,"theta":1,"phi":1,"alpha":0.2,"beta":0.5}"#;
        assert!(matches!(parse_detections(no_score), Err(EvalError::Parse { line: 1, .. })));
    }

    #[test]
    fn degrees_header_converts() {
        let text = "{\"angle_unit\":\"degrees\"}\n{\"image_id\":7,\"class_id\":1,\"theta\":-90,\"phi\":90,\"alpha\":30,\"beta\":20}";
        let a = parse_annotations(text).unwrap();
        let b = a.by_image["7"][0].bbox;
        assert!((b.theta() - 1.5 * std::f64::consts::PI).abs() < 1e-12);
        assert!((b.alpha() - 30f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn pairs_parse_in_either_unit() {
        let rad = parse_pairs("{\"b1\":[0,1.5,0.5,0.5],\"b2\":[6.5,1.5,0.5,0.5]}", AngleUnit::Radians).unwrap();
        assert!((rad[0].1.theta() - (6.5 - std::f64::consts::TAU)).abs() < 1e-12);
        let deg = parse_pairs("{\"b1\":[0,90,30,30],\"b2\":[10,90,30,30]}", AngleUnit::Degrees).unwrap();
        assert!((deg[0].0.alpha() - 30f64.to_radians()).abs() < 1e-15);
        assert!(matches!(parse_pairs("\n{\"b1\":[0,1]}", AngleUnit::Radians), Err(EvalError::Parse { line: 2, .. })));
    }

    #[test]
    fn save_then_load_is_identity() {
        let text = "{\"image_id\":\"b\",\"class_id\":1,\"theta\":0.123456789012345,\"phi\":2.5,\"alpha\":0.3,\"beta\":0.2}\n\
                    {\"image_id\":\"a\",\"class_id\":0,\"theta\":6.2,\"phi\":0.1,\"alpha\":1.1,\"beta\":0.7}\n\
                    {\"image_id\":\"a\",\"class_id\":2,\"theta\":3.0,\"phi\":1.0,\"alpha\":0.4,\"beta\":0.9}";
        let a = parse_annotations(text).unwrap();
        let mut buf = Vec::new();
        write_annotations(&mut buf, &a).unwrap();
        assert_eq!(parse_annotations(std::str::from_utf8(&buf).unwrap()).unwrap(), a);

        let d = parse_detections(&text.replace('}', ",\"score\":0.5}")).unwrap();
        let mut buf = Vec::new();
        write_detections(&mut buf, &d.records).unwrap();
        assert_eq!(parse_detections(std::str::from_utf8(&buf).unwrap()).unwrap(), d);
    }
}

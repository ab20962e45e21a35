//! Domain JSON:
//!
//! ```json
//! {"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]], "labels": ["D", "N", "N"]}
//! {"type": "box", "lengths": [3.14, 3.14], "faces": {"x": ["N", "N"], "y": ["D", "N"]}}
//! ```
//!
//! Box lengths are optional and default to π on every axis. The axes present
//! in `faces` (`x`, `y` and optionally `z`) fix the dimension.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};
use speclab_core::geometry::{build_polygon, BoxDomain, Domain, Label, Point, PolygonDomain};

use crate::error::SchemaError;

/// A JSON pointer under construction.
#[derive(Clone, Debug, Default)]
pub struct Pointer(String);

impl Pointer {
    pub fn root() -> Self {
        Pointer(String::new())
    }

    pub fn key(&self, key: &str) -> Self {
        let escaped = key.replace('~', "~0").replace('/', "~1");
        Pointer(format!("{}/{escaped}", self.0))
    }

    pub fn index(&self, i: usize) -> Self {
        Pointer(format!("{}/{i}", self.0))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn error(&self, message: impl Into<String>) -> SchemaError {
        SchemaError {
            pointer: self.0.clone(),
            message: message.into(),
        }
    }
}

pub fn object<'a>(v: &'a Value, at: &Pointer) -> Result<&'a Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| at.error("expected an object"))
}

pub fn field<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    at: &Pointer,
) -> Result<&'a Value, SchemaError> {
    obj.get(key)
        .ok_or_else(|| at.key(key).error("missing required field"))
}

pub fn array<'a>(v: &'a Value, at: &Pointer) -> Result<&'a Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| at.error("expected an array"))
}

pub fn number(v: &Value, at: &Pointer) -> Result<f64, SchemaError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| at.error("expected a finite number"))
}

pub fn string<'a>(v: &'a Value, at: &Pointer) -> Result<&'a str, SchemaError> {
    v.as_str().ok_or_else(|| at.error("expected a string"))
}

/// Rejects keys outside `allowed`.
pub fn only_keys(
    obj: &Map<String, Value>,
    allowed: &[&str],
    at: &Pointer,
) -> Result<(), SchemaError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(at
            .key(k)
            .error(format!("unknown field, expected one of {allowed:?}"))),
        None => Ok(()),
    }
}

fn label(v: &Value, at: &Pointer) -> Result<Label, SchemaError> {
    let s = string(v, at)?;
    let mut chars = s.chars();
    match (chars.next().and_then(Label::from_symbol), chars.next()) {
        (Some(l), None) => Ok(l),
        _ => Err(at.error(format!("expected \"D\" or \"N\", got {s:?}"))),
    }
}

pub fn parse_domain(v: &Value, at: &Pointer) -> Result<Domain, SchemaError> {
    let obj = object(v, at)?;
    let kind = string(field(obj, "type", at)?, &at.key("type"))?;
    match kind {
        "polygon" => parse_polygon(obj, at).map(Domain::Polygon),
        "box" => parse_box(obj, at).map(Domain::Box),
        other => Err(at
            .key("type")
            .error(format!("expected \"polygon\" or \"box\", got {other:?}"))),
    }
}

fn parse_polygon(obj: &Map<String, Value>, at: &Pointer) -> Result<PolygonDomain, SchemaError> {
    only_keys(obj, &["type", "vertices", "labels"], at)?;
    let vat = at.key("vertices");
    let mut points = Vec::new();
    for (i, p) in array(field(obj, "vertices", at)?, &vat)?.iter().enumerate() {
        let pat = vat.index(i);
        let xy = array(p, &pat)?;
        if xy.len() != 2 {
            return Err(pat.error("expected [x, y]"));
        }
        points.push(Point::new(
            number(&xy[0], &pat.index(0))?,
            number(&xy[1], &pat.index(1))?,
        ));
    }
    let lat = at.key("labels");
    let labels = array(field(obj, "labels", at)?, &lat)?
        .iter()
        .enumerate()
        .map(|(i, l)| label(l, &lat.index(i)))
        .collect::<Result<Vec<_>, _>>()?;
    if labels.len() != points.len() {
        return Err(lat.error(format!(
            "{} labels for {} vertices",
            labels.len(),
            points.len()
        )));
    }
    build_polygon(&points, &labels).map_err(|e| vat.error(e.to_string()))
}

const AXES: [&str; 3] = ["x", "y", "z"];

fn parse_box(obj: &Map<String, Value>, at: &Pointer) -> Result<BoxDomain, SchemaError> {
    only_keys(obj, &["type", "lengths", "faces"], at)?;
    let fat = at.key("faces");
    let faces_obj = object(field(obj, "faces", at)?, &fat)?;
    only_keys(faces_obj, &AXES, &fat)?;
    let dim = if faces_obj.contains_key("z") { 3 } else { 2 };
    let mut faces = Vec::with_capacity(dim);
    for axis in &AXES[..dim] {
        let aat = fat.key(axis);
        let pair = array(field(faces_obj, axis, &fat)?, &aat)?;
        if pair.len() != 2 {
            return Err(aat.error("expected [label at 0, label at L]"));
        }
        faces.push((
            label(&pair[0], &aat.index(0))?,
            label(&pair[1], &aat.index(1))?,
        ));
    }
    let lengths = match obj.get("lengths") {
        None => vec![PI; dim],
        Some(v) => {
            let lat = at.key("lengths");
            let l = array(v, &lat)?
                .iter()
                .enumerate()
                .map(|(i, x)| number(x, &lat.index(i)))
                .collect::<Result<Vec<_>, _>>()?;
            if l.len() != dim {
                return Err(lat.error(format!("{} lengths for {dim} axes", l.len())));
            }
            l
        }
    };
    BoxDomain::new(&lengths, &faces).map_err(|e| at.error(e.to_string()))
}

/// Serializes a domain back to its JSON form.
pub fn domain_to_json(domain: &Domain) -> Value {
    match domain {
        Domain::Polygon(p) => json!({
            "type": "polygon",
            "vertices": p.vertices().iter().map(|v| json!([v.x, v.y])).collect::<Vec<_>>(),
            "labels": p.labels().iter().map(|l| l.symbol().to_string()).collect::<Vec<_>>(),
        }),
        Domain::Box(b) => {
            let mut faces = Map::new();
            for (axis, (lo, hi)) in AXES.iter().zip(b.faces()) {
                faces.insert(
                    axis.to_string(),
                    json!([lo.symbol().to_string(), hi.symbol().to_string()]),
                );
            }
            json!({"type": "box", "lengths": b.lengths(), "faces": faces})
        }
    }
}

//! Set definition files.
//!
//! One `key = value` pair per line; `#` starts a comment. Values may be
//! quoted strings, numbers, or comma-separated number lists with optional
//! square brackets, so simple files are also valid TOML:
//!
//! ```text
//! shape = "sphere"      # sphere | ball | box | union
//! center = [0, 0, 0]
//! radius = 1
//! ```
//!
//! A box takes `lower` and `upper`; a union repeats `ball = cx, cy, cz; r`
//! once per ball. `holder_a` and `holder_s` override the Hoelder data of the
//! Green function; `holder = none` drops it.

use riesz_core::sets::BallPart;
use riesz_core::{CompactSet, Holder};

use crate::error::{CliError, Result};

fn parse_error(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("set file line {line}: {msg}"))
}

fn parse_number(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| parse_error(line, format!("not a number: {:?}", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_error(line, "number must be finite"));
    }
    Ok(v)
}

fn parse_list(s: &str, line: usize) -> Result<Vec<f64>> {
    let s = s.trim();
    let s = s.strip_prefix('[').map(|r| r.strip_suffix(']').ok_or_else(|| parse_error(line, "unclosed '['"))).transpose()?.unwrap_or(s);
    s.split(',').map(|t| parse_number(t, line)).collect()
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('"').and_then(|r| r.strip_suffix('"')).unwrap_or(s)
}

/// Parses a set definition. Errors carry the offending line number.
pub fn parse_set(text: &str) -> Result<CompactSet> {
    let mut shape = None;
    let mut center = None;
    let mut radius = None;
    let mut lower = None;
    let mut upper = None;
    let mut balls = Vec::new();
    let mut holder_a = None;
    let mut holder_s = None;
    let mut no_holder = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_error(line, "expected `key = value`"))?;
        let key = key.trim();
        match key {
            "shape" => shape = Some((unquote(value).to_ascii_lowercase(), line)),
            "center" => center = Some(parse_list(value, line)?),
            "radius" => radius = Some(parse_number(value, line)?),
            "lower" => lower = Some(parse_list(value, line)?),
            "upper" => upper = Some(parse_list(value, line)?),
            "ball" => {
                let (c, r) = unquote(value)
                    .split_once(';')
                    .ok_or_else(|| parse_error(line, "ball needs `cx, cy, ...; r`"))?;
                balls.push(BallPart { center: parse_list(c, line)?, radius: parse_number(r, line)? });
            }
            "holder_a" => holder_a = Some(parse_number(value, line)?),
            "holder_s" => holder_s = Some(parse_number(value, line)?),
            "holder" if unquote(value) == "none" => no_holder = true,
            _ => return Err(parse_error(line, format!("unknown key {key:?}"))),
        }
    }
    let (shape, shape_line) = shape.ok_or_else(|| CliError::Parse("set file: missing `shape`".into()))?;
    fn need<T>(v: Option<T>, shape: &str, what: &str) -> Result<T> {
        v.ok_or_else(|| CliError::Parse(format!("set file: {shape} needs `{what}`")))
    }
    let invalid = |e: riesz_core::Error| parse_error(shape_line, e);
    let set = match shape.as_str() {
        "sphere" => CompactSet::sphere(need(center, &shape, "center")?, need(radius, &shape, "radius")?).map_err(invalid)?,
        "ball" => CompactSet::ball(need(center, &shape, "center")?, need(radius, &shape, "radius")?).map_err(invalid)?,
        "box" => CompactSet::cuboid(need(lower, &shape, "lower")?, need(upper, &shape, "upper")?).map_err(invalid)?,
        "union" => CompactSet::ball_union(balls).map_err(invalid)?,
        other => return Err(parse_error(shape_line, format!("unknown shape {other:?}"))),
    };
    let holder = match (no_holder, holder_a, holder_s) {
        (true, _, _) => None,
        (false, None, None) => set.holder(),
        (false, a, s) => {
            let base = set.holder();
            let a = a.or(base.map(|h| h.constant)).unwrap_or(1.0);
            let s = s.or(base.map(|h| h.exponent)).unwrap_or(1.0);
            Some(Holder::new(a, s).map_err(|e| CliError::Parse(format!("set file: {e}")))?)
        }
    };
    Ok(set.with_holder(holder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use riesz_core::Shape;

    #[test]
    fn unit_sphere() {
        let set = parse_set("shape = \"sphere\"\ncenter = [0, 0, 0]\nradius = 1\n").unwrap();
        assert_eq!(set, CompactSet::unit_sphere(3).unwrap());
    }

    #[test]
    fn union_and_holder() {
        let text = "# two balls\nshape = union\nball = 3, 0, 0; 1\nball = -3,0,0;1\nholder_a = 2\nholder_s = 0.5\n";
        let set = parse_set(text).unwrap();
        assert!(matches!(set.shape(), Shape::BallUnion(parts) if parts.len() == 2));
        assert_eq!(set.holder(), Some(Holder::new(2.0, 0.5).unwrap()));
    }

    #[test]
    fn diagnostics_name_the_line() {
        let err = parse_set("shape = ball\ncenter = [0, 0, x]\nradius = 1").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert_eq!(err.exit_code(), 2);
        assert!(parse_set("center = [0,0,0]").is_err());
        assert!(parse_set("shape = torus").is_err());
        assert!(parse_set("shape = ball\ncenter = [0,0,0]\nradius = -1").is_err());
        assert!(parse_set("shape = box\nlower = [0,0,0]\nupper = [1,1,1]\nweird = 3").is_err());
    }
}

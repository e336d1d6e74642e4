//! Reading and writing design files.
//!
//! Text layout:
//!
//! ```text
//! # spherical-design
//! d n t
//! # recipe: octahedron(d=1)
//! 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! followed by `n` rows, one point per row with `d + 1` coordinates. The
//! JSON layout carries the same fields:
//! `{"format": "spherical-design", "d", "n", "t", "recipe", "points"}`.

use serde::{Deserialize, Serialize};

use crate::design::DesignMatrix;
use crate::error::{Error, Result};

const MAGIC: &str = "# spherical-design";
const RECIPE_PREFIX: &str = "# recipe:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Renders `u` as text. Every coordinate is written with 17 significant
/// digits so that [`parse`] reproduces it bit for bit.
pub fn render_text(u: &DesignMatrix) -> String {
    let mut out = format!(
        "{MAGIC}\n{} {} {}\n{RECIPE_PREFIX} {}\n",
        u.dimension(),
        u.size(),
        u.strength(),
        u.provenance().unwrap_or("none")
    );
    for k in 0..u.size() {
        let coords: Vec<String> = (0..u.rows())
            .map(|i| format!("{:.16e}", u.get(i, k)))
            .collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonDesign {
    format: String,
    d: usize,
    n: usize,
    t: u32,
    recipe: Option<String>,
    points: Vec<Vec<f64>>,
}

pub fn render_json(u: &DesignMatrix) -> String {
    let doc = JsonDesign {
        format: "spherical-design".into(),
        d: u.dimension(),
        n: u.size(),
        t: u.strength(),
        recipe: u.provenance().map(str::to_owned),
        points: u.columns().collect(),
    };
    serde_json::to_string_pretty(&doc).expect("design serializes") + "\n"
}

pub fn render(u: &DesignMatrix, format: Format) -> String {
    match format {
        Format::Text => render_text(u),
        Format::Json => render_json(u),
    }
}

fn parse_json(input: &str) -> Result<DesignMatrix> {
    let doc: JsonDesign = serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format != "spherical-design" {
        return Err(Error::Parse(format!("unknown format tag {:?}", doc.format)));
    }
    if doc.points.len() != doc.n {
        return Err(Error::Parse(format!(
            "header says {} points, found {}",
            doc.n,
            doc.points.len()
        )));
    }
    if let Some(bad) = doc.points.iter().find(|p| p.len() != doc.d + 1) {
        return Err(Error::Parse(format!(
            "point with {} coordinates on S^{}",
            bad.len(),
            doc.d
        )));
    }
    let u = DesignMatrix::from_columns(&doc.points, doc.t)?;
    Ok(match doc.recipe {
        Some(r) => u.with_provenance(r),
        None => u,
    })
}

fn parse_text(input: &str) -> Result<DesignMatrix> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, MAGIC)) => {}
        _ => return Err(Error::Parse(format!("first line must be {MAGIC:?}"))),
    }
    let (lineno, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header line".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let nums: Vec<usize> = fields
        .iter()
        .map(|f| f.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
    let [d, n, t] = nums[..] else {
        return Err(Error::Parse(format!("line {lineno}: expected `d n t`")));
    };
    let mut recipe = None;
    let mut columns = Vec::with_capacity(n);
    for (lineno, line) in lines {
        if let Some(r) = line.strip_prefix(RECIPE_PREFIX) {
            if !columns.is_empty() || recipe.is_some() {
                return Err(Error::Parse(format!(
                    "line {lineno}: misplaced recipe line"
                )));
            }
            let r = r.trim();
            recipe = (r != "none").then(|| r.to_owned());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let point: Vec<f64> = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        if point.len() != d + 1 {
            return Err(Error::Parse(format!(
                "line {lineno}: expected {} coordinates, found {}",
                d + 1,
                point.len()
            )));
        }
        columns.push(point);
    }
    if columns.len() != n {
        return Err(Error::Parse(format!(
            "header says {n} points, found {}",
            columns.len()
        )));
    }
    let t = u32::try_from(t).map_err(|_| Error::Parse(format!("strength {t} out of range")))?;
    let u = DesignMatrix::from_columns(&columns, t)?;
    Ok(match recipe {
        Some(r) => u.with_provenance(r),
        None => u,
    })
}

/// Parses either layout, detected from the first non-blank character.
pub fn parse(input: &str) -> Result<DesignMatrix> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{octahedron, polygon};

    #[test]
    fn text_round_trip_is_exact() {
        let u = polygon(7).unwrap();
        let text = render_text(&u);
        assert!(text.starts_with("# spherical-design\n1 7 3\n# recipe: polygon n=7\n"));
        assert_eq!(parse(&text).unwrap(), u);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let u = polygon(9).unwrap();
        assert_eq!(parse(&render_json(&u)).unwrap(), u);
        let u = octahedron(3).unwrap();
        assert_eq!(parse(&render(&u, Format::Json)).unwrap(), u);
    }

    #[test]
    fn malformed_inputs() {
        let text = render_text(&octahedron(2).unwrap());
        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse(&truncated), Err(Error::Parse(_))));
        assert!(matches!(parse("hello"), Err(Error::Parse(_))));
        assert!(matches!(
            parse("# spherical-design\n1 2\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse("# spherical-design\n1 1 1\n1.0 0.0 0.0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse("# spherical-design\n1 1 1\n1.0 zero\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse("{\"format\": 1}"), Err(Error::Parse(_))));
    }

    #[test]
    fn missing_recipe_is_tolerated() {
        let u = parse("# spherical-design\n1 2 1\n1 0\n-1 0\n").unwrap();
        assert_eq!(u.provenance(), None);
        assert_eq!(u.size(), 2);
    }
}

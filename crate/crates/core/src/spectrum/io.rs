//! Spectrum files.
//!
//! Two formats are supported.
//!
//! JSON lines: a header object `{"kind", "params", "e_max", "seed"}` followed
//! by one object per level with `index, energy, amplitude_re, amplitude_im,
//! weight` and, for generated rectangles, `modes`.
//!
//! Plain text: one level per line as `energy amplitude_re amplitude_im`.
//! Lines starting with `#` are comments, except `# e_max = <x>` and
//! `# weyl_density = <x>` which set the cutoff and the tail density. Text
//! levels go through [`reduce_multiplicities`](super::reduce_multiplicities)
//! so they may be unsorted or degenerate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{reduce_levels, Mode, RawLevel, SpectralLine, Spectrum, SpectrumKind};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    kind: SpectrumKind,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    e_max: f64,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineRecord {
    index: usize,
    energy: f64,
    amplitude_re: f64,
    amplitude_im: f64,
    weight: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    modes: Vec<Mode>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn to_jsonl(spec: &Spectrum) -> String {
    let header = Header {
        kind: spec.kind(),
        params: spec.params().clone(),
        e_max: spec.e_max(),
        seed: spec.seed(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for l in spec.lines() {
        let rec = LineRecord {
            index: l.index,
            energy: l.energy,
            amplitude_re: l.amplitude.re,
            amplitude_im: l.amplitude.im,
            weight: l.weight,
            modes: l.modes.clone(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("line serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_jsonl(input: &str) -> Result<Spectrum> {
    let mut rows = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, htext) = rows.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header: Header =
        serde_json::from_str(htext).map_err(|e| parse_err(hline, format!("header: {e}")))?;
    let mut lines = Vec::new();
    for (no, text) in rows {
        let rec: LineRecord =
            serde_json::from_str(text).map_err(|e| parse_err(no, e.to_string()))?;
        lines.push(SpectralLine {
            index: rec.index,
            energy: rec.energy,
            amplitude: Complex64::new(rec.amplitude_re, rec.amplitude_im),
            weight: rec.weight,
            modes: rec.modes,
        });
    }
    Spectrum::from_lines(lines, header.e_max, header.kind, header.params, header.seed)
}

pub fn to_text(spec: &Spectrum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# energy amplitude_re amplitude_im");
    let _ = writeln!(out, "# e_max = {}", spec.e_max());
    if let Some(d) = spec.params().get("weyl_density") {
        let _ = writeln!(out, "# weyl_density = {d}");
    } else if spec.kind() == SpectrumKind::Poisson {
        let _ = writeln!(out, "# weyl_density = {}", spec.weyl_density());
    }
    for l in spec.lines() {
        let _ = writeln!(out, "{} {} {}", l.energy, l.amplitude.re, l.amplitude.im);
    }
    out
}

fn directive(body: &str) -> Option<(&str, &str)> {
    let (k, v) = body.split_once('=')?;
    let k = k.trim();
    matches!(k, "e_max" | "weyl_density").then_some((k, v.trim()))
}

fn number(line: usize, s: &str) -> Result<f64> {
    let x: f64 = s
        .parse()
        .map_err(|_| parse_err(line, format!("'{s}' is not a number")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("'{s}' is not finite")));
    }
    Ok(x)
}

pub fn parse_text(input: &str) -> Result<Spectrum> {
    let mut raw = Vec::new();
    let mut e_max = None;
    let mut params = BTreeMap::new();
    for (i, line) in input.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            if let Some((k, v)) = directive(body) {
                let x = number(no, v)?;
                if k == "e_max" {
                    e_max = Some(x);
                } else {
                    params.insert(k.to_owned(), x);
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                no,
                format!("expected 3 columns, found {}", fields.len()),
            ));
        }
        let e = number(no, fields[0])?;
        if e < 0.0 {
            return Err(parse_err(no, format!("negative energy {e}")));
        }
        let re = number(no, fields[1])?;
        let im = number(no, fields[2])?;
        raw.push(RawLevel::new(e, Complex64::new(re, im)));
    }
    let lines = reduce_levels(raw)?;
    let e_max = match e_max {
        Some(x) => x,
        None => lines.last().map_or(0.0, |l| l.energy),
    };
    Spectrum::from_lines(lines, e_max, SpectrumKind::File, params, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{generate_poisson, generate_rectangle_odd, RectangleGeometry};

    #[test]
    fn jsonl_round_trip_keeps_modes() {
        let g = RectangleGeometry::centered(1.0, 1.0).unwrap();
        let s = generate_rectangle_odd(&g, 300.0).unwrap();
        let back = parse_jsonl(&to_jsonl(&s)).unwrap();
        assert_eq!(s, back);
        assert!(back.lines().iter().all(|l| !l.modes.is_empty()));
    }

    #[test]
    fn jsonl_round_trip_poisson_seed() {
        let s = generate_poisson(1.0, 2.0, 50.0, 9).unwrap();
        let back = parse_jsonl(&to_jsonl(&s)).unwrap();
        assert_eq!(back.seed(), Some(9));
        assert_eq!(back.weyl_density(), 2.0);
        assert_eq!(s, back);
    }

    #[test]
    fn jsonl_rejects_bad_weight() {
        let text = "{\"kind\":\"file\",\"e_max\":5}\n\
                    {\"index\":1,\"energy\":1,\"amplitude_re\":1,\"amplitude_im\":0,\"weight\":2}\n";
        assert!(parse_jsonl(text).is_err());
    }

    #[test]
    fn jsonl_missing_header() {
        assert!(matches!(parse_jsonl(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn text_round_trip() {
        let s = generate_poisson(2.0, 0.5, 40.0, 1).unwrap();
        let back = parse_text(&to_text(&s)).unwrap();
        assert_eq!(back.len(), s.len());
        assert_eq!(back.e_max(), s.e_max());
        assert_eq!(back.weyl_density(), s.weyl_density());
        for (a, b) in s.lines().iter().zip(back.lines()) {
            assert_eq!(a.energy, b.energy);
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn text_merges_and_sorts() {
        let s = parse_text("# toy\n2 0.8 0\n1 1 0\n1 1 0\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.lines()[0].weight, 2.0);
        assert_eq!(s.e_max(), 2.0);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        assert!(matches!(
            parse_text("1 1 0\n2 x 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_text("1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_text("-1 1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_text("inf 1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn text_e_max_below_levels_is_rejected() {
        assert!(matches!(
            parse_text("# e_max = 1\n2 1 0\n"),
            Err(Error::OutOfRange { .. })
        ));
    }
}

//! Typed parameter bag.
//!
//! Every subcommand declares a table of [`Param`]s. Raw strings arrive from
//! four places and are merged with the precedence
//! flags > environment > config file > defaults, then parsed against the
//! table. Anything not in the table is rejected.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::CliError;

/// Environment variables consulted, and the parameter each one sets.
pub const ENV_VARS: [(&str, &str); 2] = [("SEBA_SEED", "seed"), ("SEBA_THREADS", "threads")];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    Text,
    /// Comma separated floats.
    FloatList,
    /// `lo,hi`.
    Pair,
    /// Coupling angle: a decimal, `pi`, `pi/2`, `3pi/4`, ...
    Theta,
}

impl Kind {
    pub fn placeholder(self) -> &'static str {
        match self {
            Kind::Float => "X",
            Kind::Int => "N",
            Kind::Bool => "BOOL",
            Kind::Text => "TEXT",
            Kind::FloatList => "X,X,..",
            Kind::Pair => "LO,HI",
            Kind::Theta => "THETA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presence {
    Required,
    /// May stay unset; the command derives a value.
    Optional,
    Default(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub presence: Presence,
    pub help: &'static str,
}

impl Param {
    pub const fn new(
        key: &'static str,
        kind: Kind,
        presence: Presence,
        help: &'static str,
    ) -> Self {
        Param {
            key,
            kind,
            presence,
            help,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    FloatList(Vec<f64>),
    Pair([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Flag,
    Env,
    File,
    Default,
    /// Filled in by the command from other parameters or the input.
    Derived,
}

fn bad(key: &str, raw: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Param(format!("--{key} '{raw}': {why}"))
}

fn float(key: &str, raw: &str, s: &str) -> Result<f64, CliError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| bad(key, raw, "not a number"))?;
    if !x.is_finite() {
        return Err(bad(key, raw, "not finite"));
    }
    Ok(x)
}

pub fn parse_value(key: &str, kind: Kind, raw: &str) -> Result<Value, CliError> {
    let s = raw.trim();
    Ok(match kind {
        Kind::Float => Value::Float(float(key, raw, s)?),
        Kind::Int => Value::Int(
            s.parse()
                .map_err(|_| bad(key, raw, "not a non-negative integer"))?,
        ),
        Kind::Bool => match s {
            "true" | "1" | "yes" => Value::Bool(true),
            "false" | "0" | "no" => Value::Bool(false),
            _ => return Err(bad(key, raw, "expected true or false")),
        },
        Kind::Text => Value::Text(s.to_owned()),
        Kind::FloatList => {
            if s.is_empty() {
                return Err(bad(key, raw, "empty list"));
            }
            Value::FloatList(
                s.split(',')
                    .map(|p| float(key, raw, p))
                    .collect::<Result<_, _>>()?,
            )
        }
        Kind::Pair => {
            let (lo, hi) = s
                .split_once(',')
                .ok_or_else(|| bad(key, raw, "expected LO,HI"))?;
            Value::Pair([float(key, raw, lo)?, float(key, raw, hi)?])
        }
        Kind::Theta => {
            Value::Float(seba_core::secular::parse_theta(s).map_err(|e| bad(key, raw, e))?)
        }
    })
}

/// Parse a flat `key = value` file. Blank lines and lines starting with `#`
/// are skipped; keys may use `_` or `-`.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| CliError::Config {
            line: i + 1,
            message: message.to_owned(),
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err("expected key = value"))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(err("empty key"));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(err("duplicate key"));
        }
        out.push((k, v.trim().to_owned()));
    }
    Ok(out)
}

/// Resolved parameters with the origin of each value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
    sources: BTreeMap<String, Source>,
}

impl Params {
    pub fn resolve(
        schema: &[Param],
        flags: &BTreeMap<String, String>,
        env: &BTreeMap<String, String>,
        file: &[(String, String)],
    ) -> Result<Self, CliError> {
        for (k, _) in file {
            if !schema.iter().any(|p| p.key == k) {
                return Err(CliError::Param(format!("unknown config key '{k}'")));
            }
        }
        let mut params = Params::default();
        for p in schema {
            let picked = flags
                .get(p.key)
                .map(|v| (v.as_str(), Source::Flag))
                .or_else(|| env.get(p.key).map(|v| (v.as_str(), Source::Env)))
                .or_else(|| {
                    file.iter()
                        .find(|(k, _)| k == p.key)
                        .map(|(_, v)| (v.as_str(), Source::File))
                })
                .or(match p.presence {
                    Presence::Default(d) => Some((d, Source::Default)),
                    _ => None,
                });
            match picked {
                Some((raw, src)) => {
                    params
                        .values
                        .insert(p.key.to_owned(), parse_value(p.key, p.kind, raw)?);
                    params.sources.insert(p.key.to_owned(), src);
                }
                None if p.presence == Presence::Required => {
                    return Err(CliError::Param(format!("--{} is required", p.key)));
                }
                None => {}
            }
        }
        Ok(params)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    pub fn sources(&self) -> &BTreeMap<String, Source> {
        &self.sources
    }

    /// Record a value the command worked out itself.
    pub fn derive(&mut self, key: &str, value: Value) {
        self.values.insert(key.to_owned(), value);
        self.sources.insert(key.to_owned(), Source::Derived);
    }

    fn get(&self, key: &str) -> Result<&Value, CliError> {
        self.values
            .get(key)
            .ok_or_else(|| CliError::Param(format!("--{key} is required")))
    }

    pub fn float(&self, key: &str) -> Result<f64, CliError> {
        match self.get(key)? {
            Value::Float(x) => Ok(*x),
            v => panic!("parameter {key} is not a float: {v:?}"),
        }
    }

    pub fn opt_float(&self, key: &str) -> Result<Option<f64>, CliError> {
        if self.is_set(key) {
            self.float(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn int(&self, key: &str) -> Result<u64, CliError> {
        match self.get(key)? {
            Value::Int(x) => Ok(*x),
            v => panic!("parameter {key} is not an integer: {v:?}"),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key)? {
            Value::Bool(x) => Ok(*x),
            v => panic!("parameter {key} is not a bool: {v:?}"),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str, CliError> {
        match self.get(key)? {
            Value::Text(x) => Ok(x),
            v => panic!("parameter {key} is not text: {v:?}"),
        }
    }

    pub fn floats(&self, key: &str) -> Result<&[f64], CliError> {
        match self.get(key)? {
            Value::FloatList(x) => Ok(x),
            v => panic!("parameter {key} is not a list: {v:?}"),
        }
    }

    pub fn pair(&self, key: &str) -> Result<(f64, f64), CliError> {
        match self.get(key)? {
            Value::Pair([a, b]) => Ok((*a, *b)),
            v => panic!("parameter {key} is not a pair: {v:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: [Param; 3] = [
        Param::new("seed", Kind::Int, Presence::Default("0"), ""),
        Param::new("eps", Kind::FloatList, Presence::Required, ""),
        Param::new("cutoff", Kind::Float, Presence::Optional, ""),
    ];

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn precedence() {
        let file = vec![
            ("seed".to_owned(), "3".to_owned()),
            ("eps".to_owned(), "0.1".to_owned()),
        ];
        let p = Params::resolve(&SCHEMA, &map(&[]), &map(&[]), &file).unwrap();
        assert_eq!(p.int("seed").unwrap(), 3);
        let p = Params::resolve(&SCHEMA, &map(&[]), &map(&[("seed", "4")]), &file).unwrap();
        assert_eq!(p.int("seed").unwrap(), 4);
        assert_eq!(p.sources()["seed"], Source::Env);
        let p = Params::resolve(
            &SCHEMA,
            &map(&[("seed", "5")]),
            &map(&[("seed", "4")]),
            &file,
        )
        .unwrap();
        assert_eq!(p.int("seed").unwrap(), 5);
        assert!(!p.is_set("cutoff"));
    }

    #[test]
    fn required_and_unknown() {
        assert!(Params::resolve(&SCHEMA, &map(&[]), &map(&[]), &[]).is_err());
        let file = vec![("nope".to_owned(), "1".to_owned())];
        assert!(Params::resolve(&SCHEMA, &map(&[("eps", "1")]), &map(&[]), &file).is_err());
    }

    #[test]
    fn values_parse() {
        assert_eq!(
            parse_value("w", Kind::Pair, "0, 2000").unwrap(),
            Value::Pair([0.0, 2000.0])
        );
        assert_eq!(
            parse_value("t", Kind::Theta, "pi").unwrap(),
            Value::Float(std::f64::consts::PI)
        );
        assert!(parse_value("e", Kind::FloatList, "0.1,,0.2").is_err());
        assert!(parse_value("e", Kind::Float, "nan").is_err());
        assert!(parse_value("n", Kind::Int, "-1").is_err());
    }

    #[test]
    fn kv_file() {
        let kv = parse_kv("# c\n\nseed = 7\nroot_tol=1e-12\n").unwrap();
        assert_eq!(kv[1], ("root-tol".to_owned(), "1e-12".to_owned()));
        assert!(matches!(
            parse_kv("seed 7"),
            Err(CliError::Config { line: 1, .. })
        ));
        assert!(parse_kv("a=1\na=2").is_err());
    }
}

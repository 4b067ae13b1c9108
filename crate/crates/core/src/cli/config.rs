//! Resolved run configuration: a fixed key schema per command, filled from
//! defaults, then an optional `key = value` file, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Text,
    /// Comma-separated reals.
    FloatList,
    /// `<theta nodes>x<r nodes>`.
    Grid,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Float => "a finite real number",
            Kind::Int => "a non-negative integer",
            Kind::Text => "text",
            Kind::FloatList => "a comma-separated list of real numbers",
            Kind::Grid => "a grid size like 128x128",
        }
    }
}

/// One configurable key of a command.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

impl KeySpec {
    pub const fn new(
        name: &'static str,
        kind: Kind,
        default: &'static str,
        help: &'static str,
    ) -> Self {
        KeySpec {
            name,
            kind,
            default,
            help,
        }
    }

    /// The command-line flag, `--` plus the key with `_` turned into `-`.
    pub fn flag(&self) -> String {
        self.name.replace('_', "-")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Text(String),
    FloatList(Vec<f64>),
    Grid(usize, usize),
}

impl Value {
    pub fn parse(kind: Kind, raw: &str) -> std::result::Result<Value, String> {
        let raw = raw.trim();
        let float = |s: &str| -> std::result::Result<f64, String> {
            match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("`{s}` is not {}", Kind::Float.describe())),
            }
        };
        match kind {
            Kind::Float => float(raw).map(Value::Float),
            Kind::Int => raw
                .parse::<u64>()
                .map(Value::Int)
                .map_err(|_| format!("`{raw}` is not {}", kind.describe())),
            Kind::Text => Ok(Value::Text(raw.to_string())),
            Kind::FloatList => {
                if raw.is_empty() {
                    return Ok(Value::FloatList(Vec::new()));
                }
                raw.split(',')
                    .map(float)
                    .collect::<std::result::Result<_, _>>()
                    .map(Value::FloatList)
            }
            Kind::Grid => {
                let parsed = raw
                    .split_once(['x', 'X'])
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
                parsed
                    .map(|(a, b)| Value::Grid(a, b))
                    .ok_or_else(|| format!("`{raw}` is not {}", kind.describe()))
            }
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Float(v) => json!(v),
            Value::Int(v) => json!(v),
            Value::Text(s) => json!(s),
            Value::FloatList(v) => json!(v),
            Value::Grid(a, b) => json!(format!("{a}x{b}")),
        }
    }

    /// The textual form accepted by [`Value::parse`].
    fn from_json(v: &Json) -> Option<String> {
        match v {
            Json::Number(n) => Some(n.to_string()),
            Json::String(s) => Some(s.clone()),
            Json::Array(items) => items
                .iter()
                .map(|x| x.as_f64().map(|f| Json::from(f).to_string()))
                .collect::<Option<Vec<_>>>()
                .map(|v| v.join(",")),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// A command name and a value for every key of its schema.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    /// Applies the layers in order (later layers win) and reports every
    /// unknown key and unparsable value at once.
    pub fn resolve(
        command: &str,
        schema: &[KeySpec],
        layers: &[(&str, Vec<(String, String)>)],
    ) -> Result<RunConfig> {
        let mut raw: BTreeMap<&'static str, (String, &str)> = schema
            .iter()
            .map(|k| (k.name, (k.default.to_string(), "default")))
            .collect();
        let mut problems = Vec::new();
        for (source, entries) in layers {
            for (key, value) in entries {
                match schema.iter().find(|k| k.name == key) {
                    Some(spec) => {
                        raw.insert(spec.name, (value.clone(), source));
                    }
                    None => problems.push(format!("{source}: unknown key `{key}` for `{command}`")),
                }
            }
        }
        let mut values = BTreeMap::new();
        for spec in schema {
            let (text, source) = &raw[spec.name];
            match Value::parse(spec.kind, text) {
                Ok(v) => {
                    values.insert(spec.name, v);
                }
                Err(msg) => problems.push(format!("{source}: {}: {msg}", spec.name)),
            }
        }
        if problems.is_empty() {
            Ok(RunConfig {
                command: command.to_string(),
                values,
            })
        } else {
            Err(Error::Config(problems))
        }
    }

    /// The full resolved configuration, defaults included.
    pub fn echo(&self) -> Json {
        let mut map = Map::new();
        map.insert("command".into(), json!(self.command));
        for (k, v) in &self.values {
            map.insert((*k).to_string(), v.to_json());
        }
        Json::Object(map)
    }

    /// Splits an echoed configuration back into a command name and
    /// `key = value` pairs for [`RunConfig::resolve`].
    pub fn echo_entries(echo: &Json) -> Result<(String, Vec<(String, String)>)> {
        let obj = echo
            .as_object()
            .ok_or_else(|| Error::Parse("config echo must be a JSON object".into()))?;
        let command = obj
            .get("command")
            .and_then(Json::as_str)
            .ok_or_else(|| Error::Parse("config echo has no `command`".into()))?
            .to_string();
        let mut entries = Vec::new();
        let mut problems = Vec::new();
        for (k, v) in obj.iter().filter(|(k, _)| *k != "command") {
            match Value::from_json(v) {
                Some(text) => entries.push((k.clone(), text)),
                None => problems.push(format!("echo: {k}: unsupported value {v}")),
            }
        }
        if problems.is_empty() {
            Ok((command, entries))
        } else {
            Err(Error::Config(problems))
        }
    }

    fn get(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("`{key}` is not part of the `{}` schema", self.command))
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(v) => *v,
            other => panic!("`{key}` is {other}, not a real"),
        }
    }

    pub fn int(&self, key: &str) -> u64 {
        match self.get(key) {
            Value::Int(v) => *v,
            other => panic!("`{key}` is {other}, not an integer"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(v) => v,
            other => panic!("`{key}` is {other}, not text"),
        }
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::FloatList(v) => v,
            other => panic!("`{key}` is {other}, not a list"),
        }
    }

    pub fn grid(&self, key: &str) -> (usize, usize) {
        match self.get(key) {
            Value::Grid(a, b) => (*a, *b),
            other => panic!("`{key}` is {other}, not a grid"),
        }
    }
}

/// Reads `key = value` lines. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config_text(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    let mut problems = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => {
                entries.push((k.trim().replace('-', "_"), v.trim().to_string()))
            }
            _ => problems.push(format!(
                "{source}:{}: expected `key = value`, got `{line}`",
                n + 1
            )),
        }
    }
    if problems.is_empty() {
        Ok(entries)
    } else {
        Err(Error::Config(problems))
    }
}

pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

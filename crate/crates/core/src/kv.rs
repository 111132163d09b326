//! Flat `key = value` text files, shared by bundle metadata, detection
//! configuration files and run reports.
//!
//! Blank lines and lines starting with `#` are ignored. Keys and values are
//! trimmed; a key may appear only once.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// One parsed entry with its 1-based source line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str, path: &Path) -> Result<Vec<Entry>> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                reason: format!("expected `key = value`, got {trimmed:?}"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                reason: "empty key".into(),
            });
        }
        if let Some(prev) = seen.insert(key.to_string(), line) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                reason: format!("duplicate key `{key}` (first set on line {prev})"),
            });
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<Entry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

/// Renders entries in the given order.
pub fn render<K: AsRef<str>, V: AsRef<str>>(entries: &[(K, V)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        let _ = writeln!(out, "{} = {}", k.as_ref(), v.as_ref());
    }
    out
}

impl Entry {
    pub fn parse_value<T: std::str::FromStr>(&self, path: &Path) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.value.parse().map_err(|e: T::Err| Error::Parse {
            path: path.to_path_buf(),
            line: self.line,
            reason: format!("bad value {:?} for `{}`: {e}", self.value, self.key),
        })
    }

    pub fn error(&self, path: &Path, reason: impl Into<String>) -> Error {
        Error::Parse {
            path: path.to_path_buf(),
            line: self.line,
            reason: reason.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let text = "# header\n\n a = 1 \nb=two words\n";
        let e = parse(text, Path::new("x")).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].key.as_str(), e[0].value.as_str(), e[0].line), ("a", "1", 3));
        assert_eq!(e[1].value, "two words");
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse("a = 1\na = 2\n", Path::new("x")).is_err());
        assert!(parse("no equals sign\n", Path::new("x")).is_err());
        assert!(parse(" = 3\n", Path::new("x")).is_err());
    }

    #[test]
    fn render_then_parse() {
        let text = render(&[("k", "v"), ("n", "-70")]);
        assert_eq!(text, "k = v\nn = -70\n");
        let e = parse(&text, Path::new("x")).unwrap();
        assert_eq!(e[1].parse_value::<f64>(Path::new("x")).unwrap(), -70.0);
    }
}

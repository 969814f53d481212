//   Copyright 2026 hybzono developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.


//! JSON document access with path tracking, so validation failures can be
//! reported at the line and column of the offending key.

use std::fmt;
use std::path::{Path, PathBuf};

use hybzono_core::Matrix;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seg {
    Key(String),
    Index(usize),
}

/// A validation failure inside a document. Line 0 means no position, as
/// for command-line arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct Invalid {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.anchor(), self.message)
    }
}

impl Invalid {
    pub fn anchor(&self) -> String {
        match self.line {
            0 => self.file.display().to_string(),
            _ => format!("{}:{}:{}", self.file.display(), self.line, self.column),
        }
    }
}

impl std::error::Error for Invalid {}

/// A parsed document together with its source text.
pub struct Doc {
    pub file: PathBuf,
    text: String,
    value: Value,
}

impl Doc {
    pub fn parse(file: &Path, text: String) -> Result<Doc, Invalid> {
        match serde_json::from_str(&text) {
            Ok(value) => Ok(Doc {
                file: file.to_path_buf(),
                text,
                value,
            }),
            Err(e) => Err(Invalid {
                file: file.to_path_buf(),
                line: e.line(),
                column: e.column(),
                message: format!("malformed JSON: {e}"),
            }),
        }
    }

    pub fn read(file: &Path) -> Result<Doc, Invalid> {
        let text = std::fs::read_to_string(file).map_err(|e| Invalid {
            file: file.to_path_buf(),
            line: 1,
            column: 1,
            message: format!("cannot read file: {e}"),
        })?;
        Doc::parse(file, text)
    }

    pub fn root(&self) -> Node<'_> {
        Node {
            doc: self,
            value: &self.value,
            path: Vec::new(),
        }
    }

    /// Finds the keys of `path` one after another in the source text; array
    /// indices are skipped, so the anchor is the innermost named key.
    fn locate(&self, path: &[Seg]) -> (usize, usize) {
        let mut at = 0;
        for seg in path {
            if let Seg::Key(k) = seg {
                let needle = format!("\"{k}\"");
                if let Some(p) = self.text[at..].find(&needle) {
                    at += p;
                }
            }
        }
        let before = &self.text[..at];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
        (line, column)
    }
}

fn path_string(path: &[Seg]) -> String {
    let mut s = String::from("$");
    for seg in path {
        match seg {
            Seg::Key(k) => {
                s.push('.');
                s.push_str(k);
            }
            Seg::Index(i) => s.push_str(&format!("[{i}]")),
        }
    }
    s
}

#[derive(Clone)]
pub struct Node<'a> {
    doc: &'a Doc,
    pub value: &'a Value,
    path: Vec<Seg>,
}

impl<'a> Node<'a> {
    pub fn error(&self, msg: impl fmt::Display) -> Invalid {
        let (line, column) = self.doc.locate(&self.path);
        Invalid {
            file: self.doc.file.clone(),
            line,
            column,
            message: format!("{} ({})", msg, path_string(&self.path)),
        }
    }

    pub fn doc(&self) -> &'a Doc {
        self.doc
    }

    fn child(&self, seg: Seg, value: &'a Value) -> Node<'a> {
        let mut path = self.path.clone();
        path.push(seg);
        Node {
            doc: self.doc,
            value,
            path,
        }
    }

    pub fn get(&self, key: &str) -> Option<Node<'a>> {
        self.value.get(key).map(|v| self.child(Seg::Key(key.to_string()), v))
    }

    pub fn req(&self, key: &str) -> Result<Node<'a>, Invalid> {
        if !self.value.is_object() {
            return Err(self.error("expected an object"));
        }
        self.get(key).ok_or_else(|| self.error(format!("missing field \"{key}\"")))
    }

    pub fn items(&self) -> Result<Vec<Node<'a>>, Invalid> {
        let arr = self.value.as_array().ok_or_else(|| self.error("expected an array"))?;
        Ok(arr.iter().enumerate().map(|(i, v)| self.child(Seg::Index(i), v)).collect())
    }

    pub fn entries(&self) -> Result<Vec<(&'a str, Node<'a>)>, Invalid> {
        let obj = self.value.as_object().ok_or_else(|| self.error("expected an object"))?;
        Ok(obj.iter().map(|(k, v)| (k.as_str(), self.child(Seg::Key(k.clone()), v))).collect())
    }

    pub fn str(&self) -> Result<&'a str, Invalid> {
        self.value.as_str().ok_or_else(|| self.error("expected a string"))
    }

    pub fn f64(&self) -> Result<f64, Invalid> {
        match self.value.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(self.error("expected a finite number")),
        }
    }

    pub fn usize(&self) -> Result<usize, Invalid> {
        self.value
            .as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| self.error("expected a non-negative integer"))
    }

    pub fn bool(&self) -> Result<bool, Invalid> {
        self.value.as_bool().ok_or_else(|| self.error("expected true or false"))
    }

    pub fn vector(&self) -> Result<Vec<f64>, Invalid> {
        self.items()?.iter().map(Node::f64).collect()
    }

    pub fn indices(&self) -> Result<Vec<usize>, Invalid> {
        self.items()?.iter().map(Node::usize).collect()
    }

    /// A row-major matrix. `[]` is a matrix with no rows; its shape is taken
    /// from `shape` when given (zero-column blocks cannot be written out).
    pub fn matrix(&self, shape: Option<(usize, usize)>) -> Result<Matrix, Invalid> {
        let rows = self.items()?;
        if rows.is_empty() {
            let (r, c) = shape.unwrap_or((0, 0));
            if r > 0 && c > 0 {
                return Err(self.error(format!("expected a {r}x{c} matrix, found []")));
            }
            return Ok(Matrix::zeros(r, c));
        }
        let data: Vec<Vec<f64>> = rows.iter().map(Node::vector).collect::<Result<_, _>>()?;
        let cols = data[0].len();
        if data.iter().any(|r| r.len() != cols) {
            return Err(self.error("matrix rows have different lengths"));
        }
        if let Some((r, c)) = shape {
            if (data.len(), cols) != (r, c) {
                return Err(self.error(format!("expected a {r}x{c} matrix, found {}x{cols}", data.len())));
            }
        }
        Ok(Matrix::from_vec(data.len(), cols, data.concat()))
    }

    pub fn opt_f64(&self, key: &str, default: f64) -> Result<f64, Invalid> {
        self.get(key).map_or(Ok(default), |n| n.f64())
    }

    pub fn opt_usize(&self, key: &str, default: usize) -> Result<usize, Invalid> {
        self.get(key).map_or(Ok(default), |n| n.usize())
    }
}

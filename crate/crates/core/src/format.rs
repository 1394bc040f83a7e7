//! Line-oriented tensor text format:
//!
//! ```text
//! q=3; a=1,0,0,0,0,0,0,0,0,0,0,0,0,1,0,0,0,0
//! ```
//!
//! Entries are canonical element encodings in lexicographic `(i, j, k)`
//! order, 18 of them for `2x3x3` tensors and 12 for `2x2x3`. Blank lines and
//! lines starting with `#` are ignored by [`parse_document`].

use thiserror::Error;

use crate::gf::{Field, FieldError, Fq};
use crate::tensor::{Tensor223, Tensor233};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: expected `q=<q>; a=<entries>`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: bad integer {text:?}")]
    BadInteger { line: usize, text: String },
    #[error("expected {expected} entries, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One parsed line, before the entries are checked against a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorLine {
    pub q: u32,
    pub values: Vec<u32>,
}

fn parse_int(s: &str, line: usize) -> Result<u32, FormatError> {
    s.trim()
        .parse()
        .map_err(|_| FormatError::BadInteger { line, text: s.trim().to_string() })
}

/// Parses a single line; `line` is only used in error messages.
pub fn parse_line(text: &str, line: usize) -> Result<TensorLine, FormatError> {
    let malformed = || FormatError::Malformed { line, text: text.to_string() };
    let (q_part, a_part) = text.split_once(';').ok_or_else(malformed)?;
    let q = q_part.trim().strip_prefix("q=").ok_or_else(malformed)?;
    let a = a_part.trim().strip_prefix("a=").ok_or_else(malformed)?;
    let q = parse_int(q, line)?;
    let values = a
        .split(',')
        .map(|v| parse_int(v, line))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TensorLine { q, values })
}

/// All tensor lines of a document, with their 1-based line numbers.
pub fn parse_document(text: &str) -> Result<Vec<(usize, TensorLine)>, FormatError> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| parse_line(l, n).map(|t| (n, t)))
        .collect()
}

impl TensorLine {
    fn elements(&self, field: &Field, expected: usize) -> Result<Vec<Fq>, FormatError> {
        if self.values.len() != expected {
            return Err(FormatError::WrongLength { expected, actual: self.values.len() });
        }
        Ok(self.values.iter().map(|&v| field.element(v)).collect::<Result<_, _>>()?)
    }

    pub fn field(&self) -> Result<Field, FormatError> {
        Ok(Field::with_order(self.q)?)
    }

    pub fn to_233(&self, field: &Field) -> Result<Tensor233, FormatError> {
        let v = self.elements(field, Tensor233::LEN)?;
        let mut t = Tensor233::zero();
        t.a.copy_from_slice(&v);
        Ok(t)
    }

    pub fn to_223(&self, field: &Field) -> Result<Tensor223, FormatError> {
        let v = self.elements(field, Tensor223::LEN)?;
        let mut t = Tensor223::zero();
        t.a.copy_from_slice(&v);
        Ok(t)
    }
}

fn join(q: u32, entries: &[Fq]) -> String {
    let a: Vec<String> = entries.iter().map(|x| x.0.to_string()).collect();
    format!("q={q}; a={}", a.join(","))
}

pub fn format_233(field: &Field, t: &Tensor233) -> String {
    join(field.q(), &t.a)
}

pub fn format_223(field: &Field, t: &Tensor223) -> String {
    join(field.q(), &t.a)
}

/// Comment header naming the field, e.g. `# F_4 = F_2[x]/(x^2+x+1)`.
pub fn field_header(field: &Field) -> String {
    format!("# {}", field.describe())
}

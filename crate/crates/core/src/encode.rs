//! Binary integer encoding and decoding of sampler results.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::compile::HoboTensor;
use crate::expr::{BinaryVar, Polynomial, Symbols, VarId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("integer encoding needs at least one bit")]
    NoBits,
    #[error("variable id {0} is not part of the result")]
    UnknownVariable(VarId),
    #[error("pattern {0:?} has no \"{{}}\" placeholder")]
    BadPattern(String),
    #[error("no variable name matches pattern {0:?}")]
    NoMatch(String),
    #[error("indices matched by {pattern:?} do not fill a box: cell {index:?} is missing")]
    MissingCell { pattern: String, index: Vec<usize> },
    #[error("assignment has {got} entries, names need {needed}")]
    Dimension { got: usize, needed: usize },
}

/// `Σ_k 2^k · bits[k]`, least significant bit first.
pub fn integer_expr(bits: &[BinaryVar]) -> Result<Polynomial, EncodeError> {
    if bits.is_empty() {
        return Err(EncodeError::NoBits);
    }
    Ok(Polynomial::from_terms(
        bits.iter()
            .enumerate()
            .map(|(k, b)| (vec![b.id], (1u64 << k) as f64)),
    ))
}

/// A problem-space assignment together with its variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultView {
    assignment: Vec<u8>,
    names: BTreeMap<String, VarId>,
}

impl ResultView {
    pub fn new(assignment: Vec<u8>, names: BTreeMap<String, VarId>) -> Result<Self, EncodeError> {
        let needed = names.values().map(|&v| v + 1).max().unwrap_or(0);
        if assignment.len() < needed {
            return Err(EncodeError::Dimension {
                got: assignment.len(),
                needed,
            });
        }
        Ok(Self { assignment, names })
    }

    pub fn from_symbols(symbols: &Symbols, assignment: Vec<u8>) -> Result<Self, EncodeError> {
        Self::new(assignment, symbols.iter().map(|v| (v.name, v.id)).collect())
    }

    /// Lifts a sampler's axis-space assignment; variables without an axis
    /// read as 0.
    pub fn from_axes(
        symbols: &Symbols,
        h: &HoboTensor,
        axis_assignment: &[u8],
    ) -> Result<Self, EncodeError> {
        let problem = h
            .to_problem_assignment(axis_assignment, symbols.len())
            .map_err(|_| EncodeError::Dimension {
                got: axis_assignment.len(),
                needed: h.n(),
            })?;
        Self::from_symbols(symbols, problem)
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    pub fn names(&self) -> &BTreeMap<String, VarId> {
        &self.names
    }

    pub fn bit(&self, name: &str) -> Option<u8> {
        self.names.get(name).map(|&id| self.assignment[id])
    }
}

/// Evaluates `expr`, constant included, on the view's assignment.
pub fn decode_value(view: &ResultView, expr: &Polynomial) -> Result<f64, EncodeError> {
    for v in expr.variables() {
        if v >= view.assignment.len() || !view.names.values().any(|&id| id == v) {
            return Err(EncodeError::UnknownVariable(v));
        }
    }
    expr.evaluate(&view.assignment)
        .map_err(|_| EncodeError::UnknownVariable(expr.max_var().unwrap_or(0)))
}

/// Row-major array of bits with numpy-style printing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NdArray {
    pub shape: Vec<usize>,
    pub data: Vec<u8>,
}

impl NdArray {
    /// Nested lists, one level per axis.
    pub fn to_json(&self) -> serde_json::Value {
        fn nest(shape: &[usize], data: &[u8]) -> serde_json::Value {
            match shape {
                [] => serde_json::Value::from(data[0]),
                [_] => serde_json::Value::from(data.to_vec()),
                [n, rest @ ..] => {
                    let step = data.len() / n;
                    serde_json::Value::Array(
                        data.chunks(step.max(1)).map(|c| nest(rest, c)).collect(),
                    )
                }
            }
        }
        nest(&self.shape, &self.data)
    }
}

impl fmt::Display for NdArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write(
            f: &mut fmt::Formatter<'_>,
            shape: &[usize],
            data: &[u8],
            depth: usize,
        ) -> fmt::Result {
            match shape {
                [] => write!(f, "{}", data[0]),
                [_] => {
                    let items: Vec<String> = data.iter().map(|b| b.to_string()).collect();
                    write!(f, "[{}]", items.join(" "))
                }
                [n, rest @ ..] => {
                    let step = data.len() / n;
                    write!(f, "[")?;
                    for (k, chunk) in data.chunks(step.max(1)).enumerate() {
                        if k > 0 {
                            let blank = "\n".repeat(rest.len());
                            write!(f, "{blank}{}", " ".repeat(depth + 1))?;
                        }
                        write(f, rest, chunk, depth + 1)?;
                    }
                    write!(f, "]")
                }
            }
        }
        write(f, &self.shape, &self.data, 0)
    }
}

/// Splits `"q{}_{}"` into its literal pieces `["q", "_", ""]`.
fn pattern_pieces(pattern: &str) -> Vec<&str> {
    pattern.split("{}").collect()
}

/// Indices substituted into `pattern` to give `name`, matching each
/// placeholder against the longest run of digits.
fn match_pattern(pieces: &[&str], name: &str) -> Option<Vec<usize>> {
    let mut rest = name.strip_prefix(pieces[0])?;
    let mut index = Vec::with_capacity(pieces.len() - 1);
    for lit in &pieces[1..] {
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return None;
        }
        index.push(rest[..digits].parse().ok()?);
        rest = rest[digits..].strip_prefix(lit)?;
    }
    rest.is_empty().then_some(index)
}

/// Collects the variables whose names fit `pattern` into an array shaped by
/// the largest index on each axis.
pub fn decode_ndarray(view: &ResultView, pattern: &str) -> Result<NdArray, EncodeError> {
    let pieces = pattern_pieces(pattern);
    if pieces.len() < 2 {
        return Err(EncodeError::BadPattern(pattern.to_string()));
    }
    let cells: BTreeMap<Vec<usize>, u8> = view
        .names
        .iter()
        .filter_map(|(name, &id)| match_pattern(&pieces, name).map(|ix| (ix, view.assignment[id])))
        .collect();
    if cells.is_empty() {
        return Err(EncodeError::NoMatch(pattern.to_string()));
    }
    let rank = pieces.len() - 1;
    let shape: Vec<usize> = (0..rank)
        .map(|a| cells.keys().map(|ix| ix[a]).max().expect("non-empty") + 1)
        .collect();
    let total: usize = shape.iter().product();
    let mut data = Vec::with_capacity(total);
    for flat in 0..total {
        let index = crate::expr::unravel(flat, &shape);
        match cells.get(&index) {
            Some(&b) => data.push(b),
            None => {
                return Err(EncodeError::MissingCell {
                    pattern: pattern.to_string(),
                    index,
                })
            }
        }
    }
    Ok(NdArray { shape, data })
}

/// Renders a real like Python's `float` repr for the values seen here:
/// integral values keep one decimal (`8.0`, `-360.0`).
pub fn format_real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e16 {
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}

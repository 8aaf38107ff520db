use std::fmt::Write as _;
use std::path::Path;

use hobo_core::encode::{decode_ndarray, decode_value, format_real, NdArray, ResultView};
use hobo_core::parse::ProblemSpec;
use hobo_core::sampler::{RunOptions, SamplerRegistry};
use serde::{Serialize, Serializer};

use crate::error::{io_error, CliError};

/// Everything `solve` reports; text and JSON are two renderings of it.
#[derive(Debug, Serialize)]
pub struct Solution {
    pub name: Option<String>,
    pub sampler: String,
    pub shots: usize,
    pub seed: u64,
    pub offset: f64,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub energy: f64,
    pub occurrence: usize,
    /// One bit per declared variable, in declaration order.
    pub assignment: Vec<u8>,
    pub grids: Vec<Grid>,
    pub values: Vec<Value>,
}

#[derive(Debug, Serialize)]
pub struct Grid {
    pub pattern: String,
    #[serde(serialize_with = "nested")]
    pub cells: NdArray,
}

#[derive(Debug, Serialize)]
pub struct Value {
    pub label: String,
    pub value: f64,
}

fn nested<S: Serializer>(a: &NdArray, s: S) -> Result<S::Ok, S::Error> {
    a.to_json().serialize(s)
}

pub fn solve(
    spec: &ProblemSpec,
    sampler: &str,
    opts: &RunOptions,
    top: usize,
) -> Result<Solution, CliError> {
    let h = spec.compile()?;
    let registry = SamplerRegistry::default();
    let set = registry.get(sampler)?.sample(&h, opts)?;
    let mut entries = Vec::new();
    for s in set.entries().iter().take(top) {
        let view = ResultView::from_axes(&spec.symbols, &h, &s.assignment)?;
        let mut grids = Vec::new();
        for pattern in &spec.grids {
            grids.push(Grid {
                pattern: pattern.clone(),
                cells: decode_ndarray(&view, pattern)?,
            });
        }
        let mut values = Vec::new();
        for (label, expr) in &spec.values {
            values.push(Value {
                label: label.clone(),
                value: decode_value(&view, expr)?,
            });
        }
        entries.push(Entry {
            energy: s.energy,
            occurrence: s.occurrence,
            assignment: view.assignment().to_vec(),
            grids,
            values,
        });
    }
    Ok(Solution {
        name: spec.name.clone(),
        sampler: sampler.to_string(),
        shots: set.shots(),
        seed: opts.seed,
        offset: h.offset(),
        entries,
    })
}

pub fn render_text(sol: &Solution) -> String {
    let mut out = String::new();
    writeln!(out, "offset\n{}", format_real(sol.offset)).unwrap();
    for e in &sol.entries {
        writeln!(
            out,
            "Energy {}, Occurrence {}",
            format_real(e.energy),
            e.occurrence
        )
        .unwrap();
        for g in &e.grids {
            writeln!(out, "{}", g.cells).unwrap();
        }
        for v in &e.values {
            writeln!(out, "{} = {}", v.label, format_real(v.value)).unwrap();
        }
        if e.grids.is_empty() && e.values.is_empty() {
            let bits: Vec<String> = e.assignment.iter().map(u8::to_string).collect();
            writeln!(out, "[{}]", bits.join(" ")).unwrap();
        }
    }
    out
}

/// Cell edge in pixels.
const PPM_SCALE: usize = 16;

/// Binary PPM of the best entry's first grid; set cells are dark. Grids of
/// rank above 2 are flattened to rows of their last axis.
pub fn write_ppm(sol: &Solution, path: &Path) -> Result<(), CliError> {
    let grid = sol
        .entries
        .first()
        .and_then(|e| e.grids.first())
        .ok_or(CliError::NoGrid)?;
    let a = &grid.cells;
    let cols = a.shape.last().copied().unwrap_or(1).max(1);
    let rows = a.data.len() / cols;
    let (w, h) = (cols * PPM_SCALE, rows * PPM_SCALE);
    let mut bytes = format!("P6\n{w} {h}\n255\n").into_bytes();
    for y in 0..h {
        for x in 0..w {
            let on = a.data[(y / PPM_SCALE) * cols + x / PPM_SCALE] == 1;
            let c = if on { 32 } else { 235 };
            bytes.extend_from_slice(&[c, c, c]);
        }
    }
    std::fs::write(path, bytes).map_err(io_error(path))
}

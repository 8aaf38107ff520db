//! The three built-in example problems, both as generated `.hobo` sources and
//! as Hamiltonians built directly with the expression API.

use std::fmt::Write as _;

use crate::encode::integer_expr;
use crate::expr::{Polynomial, Symbols};

/// Penalty weight used by all built-in examples.
pub const WEIGHT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    Seating,
    Pythagoras,
    Tsp,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::Seating, Example::Pythagoras, Example::Tsp];

    pub fn name(self) -> &'static str {
        match self {
            Example::Seating => "seating",
            Example::Pythagoras => "pythagoras",
            Example::Tsp => "tsp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn source(self) -> String {
        match self {
            Example::Seating => seating_source(5, 3, WEIGHT),
            Example::Pythagoras => pythagoras_source(4, WEIGHT),
            Example::Tsp => tsp_source(WEIGHT),
        }
    }

    pub fn hamiltonian(self) -> (Symbols, Polynomial) {
        match self {
            Example::Seating => seating(5, 3, WEIGHT),
            Example::Pythagoras => pythagoras(4, WEIGHT),
            Example::Tsp => tsp(WEIGHT),
        }
    }
}

/// `size × size` seats; reward each occupied seat, penalize every `run`
/// consecutive occupied seats in a row or column.
pub fn seating(size: usize, run: usize, weight: f64) -> (Symbols, Polynomial) {
    let mut s = Symbols::new();
    let q = s
        .var_array(&[size, size], "q{}_{}")
        .expect("valid declaration");
    let h1: Polynomial = q.elements().iter().map(|v| -v.poly()).sum();
    let mut h2 = Polynomial::zero();
    for (i, j) in windows(size, run) {
        h2 += (0..run).map(|k| q.at(&[i, j + k])).product::<Polynomial>();
        h2 += (0..run).map(|k| q.at(&[j + k, i])).product::<Polynomial>();
    }
    (s, h1 + h2 * weight)
}

/// `(row, start)` of every length-`run` window along a row.
fn windows(size: usize, run: usize) -> impl Iterator<Item = (usize, usize)> {
    let starts = (size + 1).saturating_sub(run);
    (0..size).flat_map(move |i| (0..starts).map(move |j| (i, j)))
}

pub fn seating_source(size: usize, run: usize, weight: f64) -> String {
    let mut out = String::new();
    writeln!(out, "#! name seating").unwrap();
    writeln!(
        out,
        "#! description fill a {size}x{size} grid, no {run} consecutive seats in a row or column"
    )
    .unwrap();
    writeln!(out, "#! grid \"q{{}}_{{}}\"").unwrap();
    writeln!(out, "var q[{size},{size}] as \"q{{}}_{{}}\"").unwrap();
    writeln!(out, "# objective: occupy seats").unwrap();
    for i in 0..size {
        for j in 0..size {
            writeln!(out, "H += -q[{i},{j}]").unwrap();
        }
    }
    writeln!(out, "# constraint: rows").unwrap();
    let prod = |cells: Vec<String>| cells.join("*");
    for (i, j) in windows(size, run) {
        let cells = (0..run).map(|k| format!("q[{i},{}]", j + k)).collect();
        writeln!(out, "H += {weight}*{}", prod(cells)).unwrap();
    }
    writeln!(out, "# constraint: columns").unwrap();
    for (j, i) in windows(size, run) {
        let cells = (0..run).map(|k| format!("q[{},{j}]", i + k)).collect();
        writeln!(out, "H += {weight}*{}", prod(cells)).unwrap();
    }
    out
}

/// `(x² + y² − z²)²` over `bits`-bit integers plus a penalty for any of them
/// being zero.
pub fn pythagoras(bits: usize, weight: f64) -> (Symbols, Polynomial) {
    let mut s = Symbols::new();
    let q = s
        .var_array(&[3, bits], "q{}_{}")
        .expect("valid declaration");
    let row = |r: usize| &q.elements()[r * bits..(r + 1) * bits];
    let [x, y, z] = [0, 1, 2].map(|r| integer_expr(row(r)).expect("bits > 0"));
    let h1 = (x.pow(2) + y.pow(2) - z.pow(2)).pow(2);
    let h2: Polynomial = (0..3)
        .map(|r| {
            row(r)
                .iter()
                .map(|v| 1.0 - v.poly())
                .product::<Polynomial>()
        })
        .sum();
    (s, h1 + h2 * weight)
}

fn integer_source(row: usize, bits: usize) -> String {
    (0..bits)
        .map(|k| match k {
            0 => format!("q[{row},0]"),
            _ => format!("{}*q[{row},{k}]", 1u64 << k),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn pythagoras_source(bits: usize, weight: f64) -> String {
    let [x, y, z] = [0, 1, 2].map(|r| integer_source(r, bits));
    let mut out = String::new();
    writeln!(out, "#! name pythagoras").unwrap();
    writeln!(
        out,
        "#! description {bits}-bit triples with x^2 + y^2 = z^2"
    )
    .unwrap();
    for (label, e) in [("x", &x), ("y", &y), ("z", &z)] {
        writeln!(out, "#! value {label} = {e}").unwrap();
    }
    writeln!(out, "var q[3,{bits}] as \"q{{}}_{{}}\"").unwrap();
    writeln!(out, "H += (({x})**2 + ({y})**2 - ({z})**2)**2").unwrap();
    writeln!(out, "# no integer may be zero").unwrap();
    for r in 0..3 {
        let factors: Vec<String> = (0..bits).map(|k| format!("(1 - q[{r},{k}])")).collect();
        writeln!(out, "H += {weight}*{}", factors.join("*")).unwrap();
    }
    out
}

/// `(xB · xC · xD − 6)²` with 2-bit integers, most significant bit first.
/// The fourth declared row is never used.
pub fn tsp(weight: f64) -> (Symbols, Polynomial) {
    let mut s = Symbols::new();
    let q = s.var_array(&[4, 2], "q{}_{}").expect("valid declaration");
    let x = |r: usize| q.at(&[r, 0]) * 2.0 + q.at(&[r, 1]);
    let h2 = (x(0) * x(1) * x(2) - 6.0).pow(2);
    (s, h2 * weight)
}

pub fn tsp_source(weight: f64) -> String {
    let x = |r: usize| format!("2*q[{r},0] + q[{r},1]");
    let mut out = String::new();
    writeln!(out, "#! name tsp").unwrap();
    writeln!(
        out,
        "#! description integer-encoded visiting order, xB * xC * xD = 6"
    )
    .unwrap();
    for (label, r) in [("xB", 0), ("xC", 1), ("xD", 2)] {
        writeln!(out, "#! value {label} = {}", x(r)).unwrap();
    }
    writeln!(out, "var q[4,2] as \"q{{}}_{{}}\"").unwrap();
    writeln!(
        out,
        "H += {weight}*(({})*({})*({}) - 6)**2",
        x(0),
        x(1),
        x(2)
    )
    .unwrap();
    out
}

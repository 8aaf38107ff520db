//! Contraction-path planning under a fixed FLOP cost model.
//!
//! A step that contracts `num_terms` operands whose labels together are
//! `union` costs `prod(dims[union]) * f`, with
//! `f = max(1, num_terms - 1) + [some label is summed away]`. This is the
//! element-count × term-factor count used by numpy's `einsum_path`, so the
//! reports below line up with its printouts.
//!
//! Planners implement [`Planner`] and are looked up by name in a
//! [`PlannerRegistry`].

mod cheapest;
mod greedy;
mod optimal;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::tensor::EinsumSpec;

pub use cheapest::CheapestStep;
pub use greedy::Greedy;
pub use optimal::Optimal;

/// Largest operand count the subset dynamic program accepts.
pub const OPTIMAL_MAX_OPERANDS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error(
        "optimal search supports at most {max} operands, spec has {got}; use the greedy planner"
    )]
    TooManyOperands { got: usize, max: usize },
    #[error("spec uses {0} distinct labels, at most 64 are supported by the planners")]
    TooManyLabels(usize),
    #[error("invalid path: {0}")]
    Invalid(String),
    #[error("unknown planner {name:?} (available: {available})")]
    UnknownPlanner { name: String, available: String },
}

/// Ordered pairwise steps: each `(a, b)` removes live operands `a` and `b`
/// and appends their contraction to the end of the operand list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ContractionPath {
    steps: Vec<(usize, usize)>,
}

impl ContractionPath {
    pub fn new(steps: Vec<(usize, usize)>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub contraction: String,
    pub naive_scaling: usize,
    pub optimized_scaling: usize,
    pub naive_flops: f64,
    pub optimized_flops: f64,
    pub theoretical_speedup: f64,
    /// Element count of the largest intermediate, final output included.
    pub largest_intermediate: f64,
}

/// Formats like C's `%.3e`: `3.266e+05`.
pub fn format_sci(x: f64) -> String {
    let s = format!("{x:.3e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "  Complete contraction:  {}", self.contraction)?;
        writeln!(f, "         Naive scaling:  {}", self.naive_scaling)?;
        writeln!(f, "     Optimized scaling:  {}", self.optimized_scaling)?;
        writeln!(
            f,
            "      Naive FLOP count:  {}",
            format_sci(self.naive_flops)
        )?;
        writeln!(
            f,
            "  Optimized FLOP count:  {}",
            format_sci(self.optimized_flops)
        )?;
        writeln!(
            f,
            "   Theoretical speedup:  {:.3}",
            self.theoretical_speedup
        )?;
        write!(
            f,
            "  Largest intermediate:  {} elements",
            format_sci(self.largest_intermediate)
        )
    }
}

pub fn flop_cost<'a>(
    union_labels: impl IntoIterator<Item = &'a char>,
    dims: &BTreeMap<char, usize>,
    num_terms: usize,
    has_summed_label: bool,
) -> f64 {
    let size: f64 = union_labels.into_iter().map(|l| dims[l] as f64).product();
    let factor = num_terms.saturating_sub(1).max(1) + usize::from(has_summed_label);
    size * factor as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveCost {
    pub scaling: usize,
    pub flops: f64,
}

/// Cost of contracting every operand in a single pass.
pub fn naive_report(spec: &EinsumSpec) -> NaiveCost {
    let labels = spec.labels();
    let summed = labels.iter().any(|l| !spec.output().contains(l));
    NaiveCost {
        scaling: labels.len(),
        flops: flop_cost(&labels, spec.dims(), spec.num_operands(), summed),
    }
}

/// Bitmask view of a spec used by the planners: bit `k` is the k-th distinct
/// label in order of first appearance.
#[derive(Debug, Clone)]
pub(crate) struct LabelSets {
    pub inputs: Vec<u64>,
    pub output: u64,
    pub extents: Vec<f64>,
}

impl LabelSets {
    pub fn new(spec: &EinsumSpec) -> Result<Self, PathError> {
        let labels = spec.labels();
        if labels.len() > 64 {
            return Err(PathError::TooManyLabels(labels.len()));
        }
        let bit = |l: &char| 1u64 << labels.iter().position(|x| x == l).expect("known label");
        Ok(Self {
            inputs: spec
                .inputs()
                .iter()
                .map(|op| op.iter().fold(0, |acc, l| acc | bit(l)))
                .collect(),
            output: spec.output().iter().fold(0, |acc, l| acc | bit(l)),
            extents: labels.iter().map(|l| spec.dims()[l] as f64).collect(),
        })
    }

    pub fn size(&self, set: u64) -> f64 {
        let mut p = 1.0;
        let mut s = set;
        while s != 0 {
            p *= self.extents[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        p
    }

    /// Cost of one pairwise step whose result keeps `result` labels.
    pub fn step_cost(&self, union: u64, result: u64) -> f64 {
        self.size(union) * if union & !result != 0 { 2.0 } else { 1.0 }
    }
}

/// Aggregate cost of executing a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCost {
    pub flops: f64,
    pub scaling: usize,
    pub largest_intermediate: f64,
}

/// Replays `path` symbolically and totals its cost. Fails if a step refers to
/// a missing operand or more than one operand is left at the end.
pub fn path_cost(spec: &EinsumSpec, path: &ContractionPath) -> Result<PathCost, PathError> {
    let sets = LabelSets::new(spec)?;
    let mut live = sets.inputs.clone();
    let mut cost = PathCost {
        flops: 0.0,
        scaling: 0,
        largest_intermediate: 0.0,
    };
    for (k, &(a, b)) in path.steps().iter().enumerate() {
        if a == b || a >= live.len() || b >= live.len() {
            return Err(PathError::Invalid(format!(
                "step {k} references ({a}, {b}) with {} live operand(s)",
                live.len()
            )));
        }
        let union = live[a] | live[b];
        let rest = live
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .fold(sets.output, |acc, (_, s)| acc | s);
        let result = union & rest;
        cost.flops += sets.step_cost(union, result);
        cost.scaling = cost.scaling.max(union.count_ones() as usize);
        cost.largest_intermediate = cost.largest_intermediate.max(sets.size(result));
        live.remove(a.max(b));
        live.remove(a.min(b));
        live.push(result);
    }
    if live.len() != 1 {
        return Err(PathError::Invalid(format!(
            "{} operand(s) remain after the last step",
            live.len()
        )));
    }
    if path.is_empty() {
        let naive = naive_report(spec);
        cost.flops = naive.flops;
        cost.scaling = naive.scaling;
        cost.largest_intermediate = sets.size(sets.output);
    }
    Ok(cost)
}

/// A contraction-order strategy.
pub trait Planner: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn plan(&self, spec: &EinsumSpec) -> Result<ContractionPath, PathError>;
}

/// Plans a path with `planner` and reports it next to the single-pass cost.
pub fn optimize_path(
    spec: &EinsumSpec,
    planner: &dyn Planner,
) -> Result<(ContractionPath, CostReport), PathError> {
    let path = planner.plan(spec)?;
    let cost = path_cost(spec, &path)?;
    let naive = naive_report(spec);
    let report = CostReport {
        contraction: spec.to_string(),
        naive_scaling: naive.scaling,
        optimized_scaling: cost.scaling,
        naive_flops: naive.flops,
        optimized_flops: cost.flops,
        theoretical_speedup: naive.flops / cost.flops,
        largest_intermediate: cost.largest_intermediate,
    };
    Ok((path, report))
}

/// Name-keyed set of planners.
pub struct PlannerRegistry {
    planners: BTreeMap<&'static str, Box<dyn Planner>>,
}

impl PlannerRegistry {
    pub const DEFAULT: &'static str = "greedy";

    pub fn empty() -> Self {
        Self {
            planners: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, planner: Box<dyn Planner>) {
        self.planners.insert(planner.name(), planner);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.planners.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Planner, PathError> {
        self.planners
            .get(name)
            .map(|p| p.as_ref())
            .ok_or_else(|| PathError::UnknownPlanner {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Planner> {
        self.planners.values().map(|p| p.as_ref())
    }
}

impl Default for PlannerRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Greedy));
        r.register(Box::new(CheapestStep));
        r.register(Box::new(Optimal));
        r
    }
}

/// `"i,j,…,ij…->"`: one vector operand per axis followed by the tensor.
pub fn direct_spec(extent: usize, order: usize) -> Result<EinsumSpec, crate::tensor::TensorError> {
    let labels: Vec<char> = crate::decomp::PHYSICAL_LABELS.chars().take(order).collect();
    if labels.len() < order {
        return Err(crate::tensor::TensorError::Spec(format!(
            "order {order} exceeds the {} available axis labels",
            labels.len()
        )));
    }
    let mut inputs: Vec<Vec<char>> = labels.iter().map(|&l| vec![l]).collect();
    inputs.push(labels.clone());
    let dims = labels.iter().map(|&l| (l, extent)).collect();
    EinsumSpec::new(inputs, Vec::new(), dims)
}

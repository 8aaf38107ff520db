use std::fmt::Write as _;

use hobo_core::decomp::{format_shapes, tt_contraction_spec, tt_decompose};
use hobo_core::parse::ProblemSpec;
use hobo_core::path::{direct_spec, optimize_path, ContractionPath, CostReport, PlannerRegistry};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct PathDoc {
    pub planner: String,
    pub path: Vec<(usize, usize)>,
    pub report: CostReport,
    /// Squeezed core shapes; present for the tensor-train form only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cores: Option<Vec<Vec<usize>>>,
}

fn plan(
    spec: &hobo_core::tensor::EinsumSpec,
    planner: &str,
) -> Result<(ContractionPath, CostReport), CliError> {
    let registry = PlannerRegistry::default();
    Ok(optimize_path(spec, registry.get(planner)?)?)
}

/// Contraction of every `x` vector against the dense tensor.
pub fn direct(problem: &ProblemSpec, planner: &str) -> Result<PathDoc, CliError> {
    let h = problem.compile()?;
    h.materialize_dense()?;
    let spec = direct_spec(h.n(), h.order())?;
    let (path, report) = plan(&spec, planner)?;
    Ok(PathDoc {
        planner: planner.to_string(),
        path: path.steps().to_vec(),
        report,
        cores: None,
    })
}

/// Contraction of every `x` vector against the tensor-train cores.
pub fn tensor_train(problem: &ProblemSpec, planner: &str, tol: f64) -> Result<PathDoc, CliError> {
    let dense = problem.compile()?.materialize_dense()?;
    let train = tt_decompose(&dense, tol)?;
    let spec = tt_contraction_spec(&train, true)?;
    let (path, report) = plan(&spec, planner)?;
    Ok(PathDoc {
        planner: planner.to_string(),
        path: path.steps().to_vec(),
        report,
        cores: Some(train.squeezed_shapes()),
    })
}

pub fn render_text(doc: &PathDoc) -> String {
    let mut out = String::new();
    if let Some(cores) = &doc.cores {
        writeln!(out, "{}", format_shapes(cores)).unwrap();
    }
    writeln!(out, "{}", doc.report).unwrap();
    let steps: Vec<String> = doc
        .path
        .iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect();
    writeln!(
        out,
        "      Contraction path:  [{}] ({})",
        steps.join(", "),
        doc.planner
    )
    .unwrap();
    out
}

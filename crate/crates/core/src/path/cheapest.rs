use super::{ContractionPath, LabelSets, PathError, Planner};
use crate::tensor::EinsumSpec;

/// Repeatedly contracts the pair whose own step is cheapest, ties broken by
/// smaller result, then by the lowest operand indices. Outer products compete
/// on equal terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheapestStep;

impl Planner for CheapestStep {
    fn name(&self) -> &'static str {
        "cheapest"
    }

    fn description(&self) -> &'static str {
        "cheapest single step first"
    }

    fn plan(&self, spec: &EinsumSpec) -> Result<ContractionPath, PathError> {
        let labels = LabelSets::new(spec)?;
        let mut live = labels.inputs.clone();
        let mut steps = Vec::with_capacity(live.len().saturating_sub(1));
        while live.len() > 1 {
            let mut best: Option<((f64, f64, usize, usize), u64)> = None;
            for a in 0..live.len() {
                for b in a + 1..live.len() {
                    let union = live[a] | live[b];
                    let rest = live
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != a && i != b)
                        .fold(labels.output, |acc, (_, s)| acc | s);
                    let result = union & rest;
                    let key = (labels.step_cost(union, result), labels.size(result), a, b);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((key, result));
                    }
                }
            }
            let ((_, _, a, b), result) = best.expect("at least one pair");
            live.remove(b);
            live.remove(a);
            live.push(result);
            steps.push((a, b));
        }
        Ok(ContractionPath::new(steps))
    }
}

use super::{ContractionPath, LabelSets, PathError, Planner};
use crate::tensor::EinsumSpec;

/// Size-reduction greedy search, step for step the algorithm behind numpy's
/// `einsum_path(optimize="greedy")`.
///
/// Each round picks the candidate pair with the largest
/// `size(a) + size(b) - size(result)`, breaking ties by lower step cost and
/// then by candidate age. Pairs that share no label are only considered when
/// no other pair qualifies. Candidates whose result exceeds the largest
/// operand, or whose running cost would exceed the single-pass cost, are
/// dropped. Candidates found in earlier rounds are kept with their original
/// keys and only re-indexed, and new candidates are only generated against
/// the freshly appended intermediate.
#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy;

#[derive(Debug, Clone)]
struct Candidate {
    /// `(-removed_size, step_cost)`, compared lexicographically.
    key: (f64, f64),
    pair: (usize, usize),
    /// Operand sets after this contraction; the result is last.
    sets: Vec<u64>,
}

struct Search<'a> {
    labels: &'a LabelSets,
    memory_limit: f64,
    naive_cost: f64,
}

impl Search<'_> {
    fn consider(&self, pair: (usize, usize), sets: &[u64], path_cost: f64) -> Option<Candidate> {
        let (a, b) = pair;
        let union = sets[a] | sets[b];
        let remain = sets
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .fold(self.labels.output, |acc, (_, s)| acc | s);
        let result = union & remain;
        let new_size = self.labels.size(result);
        if new_size > self.memory_limit {
            return None;
        }
        let removed = self.labels.size(sets[a]) + self.labels.size(sets[b]) - new_size;
        let cost = self.labels.step_cost(union, result);
        if path_cost + cost > self.naive_cost {
            return None;
        }
        let mut next: Vec<u64> = sets
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, &s)| s)
            .collect();
        next.push(result);
        Some(Candidate {
            key: (-removed, cost),
            pair,
            sets: next,
        })
    }
}

fn best_index(candidates: &[Candidate]) -> usize {
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        if c.key < candidates[best].key {
            best = i;
        }
    }
    best
}

/// Re-indexes surviving candidates after `best` has been performed.
fn carry_over(candidates: Vec<Candidate>, best: &Candidate) -> Vec<Candidate> {
    let (bx, by) = best.pair;
    let produced = *best.sets.last().expect("result set");
    candidates
        .into_iter()
        .filter(|c| ![c.pair.0, c.pair.1].iter().any(|p| *p == bx || *p == by))
        .map(|mut c| {
            let (x, y) = c.pair;
            let shift = |p: usize| p - usize::from(p > x) - usize::from(p > y);
            c.sets.remove(shift(by));
            c.sets.remove(shift(bx));
            let at = c.sets.len() - 1;
            c.sets.insert(at, produced);
            let reindex = |p: usize| p - usize::from(p > bx) - usize::from(p > by);
            c.pair = (reindex(x), reindex(y));
            c
        })
        .collect()
}

impl Planner for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn description(&self) -> &'static str {
        "largest size reduction first (numpy einsum_path greedy)"
    }

    fn plan(&self, spec: &EinsumSpec) -> Result<ContractionPath, PathError> {
        let labels = LabelSets::new(spec)?;
        let n = labels.inputs.len();
        match n {
            1 => return Ok(ContractionPath::default()),
            2 => return Ok(ContractionPath::new(vec![(0, 1)])),
            _ => {}
        }
        let all = labels.inputs.iter().fold(0, |acc, s| acc | s);
        let naive_cost =
            labels.size(all) * ((n - 1) as f64 + if all & !labels.output != 0 { 1.0 } else { 0.0 });
        let memory_limit = labels
            .inputs
            .iter()
            .chain(std::iter::once(&labels.output))
            .map(|&s| labels.size(s))
            .fold(0.0, f64::max);
        let strict = Search {
            labels: &labels,
            memory_limit,
            naive_cost,
        };

        let mut sets = labels.inputs.clone();
        let mut known: Vec<Candidate> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let mut path_cost = 0.0;
        let mut steps = Vec::with_capacity(n - 1);

        for _ in 0..n - 1 {
            for &(a, b) in &pairs {
                if sets[a] & sets[b] == 0 {
                    continue;
                }
                if let Some(c) = strict.consider((a, b), &sets, path_cost) {
                    known.push(c);
                }
            }
            if known.is_empty() {
                let all_pairs: Vec<(usize, usize)> = (0..sets.len())
                    .flat_map(|a| (a + 1..sets.len()).map(move |b| (a, b)))
                    .collect();
                known.extend(
                    all_pairs
                        .iter()
                        .filter_map(|&p| strict.consider(p, &sets, path_cost)),
                );
                if known.is_empty() {
                    // Every pair was sieved out. A pairwise path still has to
                    // finish, so rescan without the size and cost limits.
                    let relaxed = Search {
                        labels: &labels,
                        memory_limit: f64::INFINITY,
                        naive_cost: f64::INFINITY,
                    };
                    known.extend(
                        all_pairs
                            .iter()
                            .filter_map(|&p| relaxed.consider(p, &sets, path_cost)),
                    );
                }
            }
            let best = known[best_index(&known)].clone();
            known = carry_over(known, &best);
            steps.push(best.pair);
            path_cost += best.key.1;
            sets = best.sets;
            let newest = sets.len() - 1;
            pairs = (0..newest).map(|i| (i, newest)).collect();
        }
        Ok(ContractionPath::new(steps))
    }
}

//! Stochastic solvers over compiled problems.
//!
//! Every shot is an independent chain driven by its own ChaCha8 stream
//! (`seed` selects the key, the shot index selects the stream), so results do
//! not depend on how shots are spread over worker threads. Reported energies
//! exclude the offset.

mod anneal;
mod gradient;
pub(crate) mod kernel;

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compile::HoboTensor;

pub use anneal::{sa_run, sa_run_with, Annealer};
pub use gradient::{grad_run, grad_run_with, multilinear_grad, GradientDescent};
pub use kernel::MAX_KERNEL_VARS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("step size must be positive and finite, got {0}")]
    StepSize(f64),
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("probability vector entry {index} = {value} is outside [0, 1]")]
    Domain { index: usize, value: f64 },
    #[error("vector has {got} entries, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("problem has {n} variables, samplers support at most {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("chain {chain}: tracked energy {tracked} drifted from {fresh}")]
    EnergyDrift {
        chain: usize,
        tracked: f64,
        fresh: f64,
    },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("unknown sampler {name:?} (available: {available})")]
    UnknownSampler { name: String, available: String },
}

/// Geometric cooling from `t_start` to `t_end` over `sweeps` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    t_start: f64,
    t_end: f64,
    sweeps: usize,
}

impl Schedule {
    pub const DEFAULT_SWEEPS: usize = 1000;
    pub const DEFAULT_T_END: f64 = 0.01;

    pub fn new(t_start: f64, t_end: f64, sweeps: usize) -> Result<Self, SamplerError> {
        if !(t_end > 0.0 && t_end.is_finite() && t_start.is_finite()) {
            return Err(SamplerError::Schedule(format!(
                "temperatures must be positive and finite, got {t_start} and {t_end}"
            )));
        }
        if t_end > t_start {
            return Err(SamplerError::Schedule(format!(
                "t_end {t_end} exceeds t_start {t_start}"
            )));
        }
        if sweeps == 0 {
            return Err(SamplerError::Schedule("sweeps must be at least 1".into()));
        }
        Ok(Self {
            t_start,
            t_end,
            sweeps,
        })
    }

    /// `t_start = 10 · max|coeff|` (at least `t_end`), `t_end = 0.01`.
    pub fn default_for(h: &HoboTensor, sweeps: usize) -> Result<Self, SamplerError> {
        let t_start = (10.0 * h.max_abs_coefficient()).max(Self::DEFAULT_T_END);
        Self::new(t_start, Self::DEFAULT_T_END, sweeps)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Temperature of sweep `k`; the last sweep always runs at `t_end`.
    pub fn temperature(&self, k: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_end;
        }
        let frac = k as f64 / (self.sweeps - 1) as f64;
        self.t_start * (self.t_end / self.t_start).powf(frac)
    }

    pub fn temperatures(&self) -> Vec<f64> {
        (0..self.sweeps).map(|k| self.temperature(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub assignment: Vec<u8>,
    pub energy: f64,
    pub occurrence: usize,
}

/// Distinct assignments sorted by energy ascending, occurrence descending,
/// then assignment lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SampleSet {
    entries: Vec<Sample>,
}

impl SampleSet {
    pub fn entries(&self) -> &[Sample] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn shots(&self) -> usize {
        self.entries.iter().map(|s| s.occurrence).sum()
    }

    pub fn best(&self) -> Option<&Sample> {
        self.entries.first()
    }

    pub fn min_energy(&self) -> Option<f64> {
        self.best().map(|s| s.energy)
    }

    /// Entries whose energy equals the minimum.
    pub fn ground(&self) -> &[Sample] {
        match self.min_energy() {
            Some(e) => {
                let k = self.entries.iter().take_while(|s| s.energy == e).count();
                &self.entries[..k]
            }
            None => &[],
        }
    }
}

/// Counts repeated assignments and sorts the result.
pub fn aggregate(raw: impl IntoIterator<Item = (Vec<u8>, f64)>) -> SampleSet {
    let mut counts: HashMap<Vec<u8>, (f64, usize)> = HashMap::new();
    for (a, e) in raw {
        counts.entry(a).or_insert((e, 0)).1 += 1;
    }
    let mut entries: Vec<Sample> = counts
        .into_iter()
        .map(|(assignment, (energy, occurrence))| Sample {
            assignment,
            energy,
            occurrence,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(b.occurrence.cmp(&a.occurrence))
            .then_with(|| a.assignment.cmp(&b.assignment))
    });
    SampleSet { entries }
}

/// Settings shared by all samplers; each sampler reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub shots: usize,
    pub sweeps: usize,
    pub steps: usize,
    /// Gradient step size; `None` means `1 / max|coeff|`.
    pub step_size: Option<f64>,
    pub seed: u64,
    /// Worker threads; `None` uses rayon's global pool.
    pub workers: Option<usize>,
    /// Recompute the chain energy every 64 accepted moves and fail on drift.
    pub check_energy: bool,
    /// Overrides the default annealing schedule.
    pub schedule: Option<Schedule>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            shots: 10_000,
            sweeps: Schedule::DEFAULT_SWEEPS,
            steps: 200,
            step_size: None,
            seed: 42,
            workers: None,
            check_energy: false,
            schedule: None,
        }
    }
}

pub trait Sampler: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn sample(&self, h: &HoboTensor, opts: &RunOptions) -> Result<SampleSet, SamplerError>;
}

/// Name-keyed set of samplers.
pub struct SamplerRegistry {
    samplers: BTreeMap<&'static str, Box<dyn Sampler>>,
}

impl SamplerRegistry {
    pub const DEFAULT: &'static str = "sa";

    pub fn empty() -> Self {
        Self {
            samplers: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, sampler: Box<dyn Sampler>) {
        self.samplers.insert(sampler.name(), sampler);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.samplers.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Sampler, SamplerError> {
        self.samplers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| SamplerError::UnknownSampler {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }
}

impl Default for SamplerRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Annealer));
        r.register(Box::new(GradientDescent));
        r
    }
}

pub(crate) fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

/// Runs `chain(i)` for every shot and aggregates, preserving shot order
/// before aggregation.
pub(crate) fn run_chains<F>(
    shots: usize,
    workers: Option<usize>,
    chain: F,
) -> Result<SampleSet, SamplerError>
where
    F: Fn(usize) -> Result<(Vec<u8>, f64), SamplerError> + Sync + Send,
{
    if shots == 0 {
        return Err(SamplerError::ZeroShots);
    }
    let collect = || {
        (0..shots)
            .into_par_iter()
            .map(&chain)
            .collect::<Result<Vec<_>, _>>()
    };
    let raw = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| SamplerError::Pool(e.to_string()))?
            .install(collect),
        None => collect(),
    }?;
    Ok(aggregate(raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_counts_and_sorts() {
        let set = aggregate(vec![
            (vec![0, 1], -1.0),
            (vec![0, 1], -1.0),
            (vec![1, 0], 0.0),
        ]);
        assert_eq!(
            set.entries(),
            &[
                Sample {
                    assignment: vec![0, 1],
                    energy: -1.0,
                    occurrence: 2
                },
                Sample {
                    assignment: vec![1, 0],
                    energy: 0.0,
                    occurrence: 1
                }
            ]
        );
        assert_eq!(set.shots(), 3);
        assert!(aggregate(Vec::new()).is_empty());
    }

    #[test]
    fn energy_ties_sort_by_occurrence_then_assignment() {
        let set = aggregate(vec![
            (vec![1, 1], -2.0),
            (vec![0, 1], -2.0),
            (vec![1, 0], -2.0),
            (vec![1, 0], -2.0),
        ]);
        let order: Vec<&[u8]> = set
            .entries()
            .iter()
            .map(|s| s.assignment.as_slice())
            .collect();
        assert_eq!(order, vec![&[1, 0][..], &[0, 1], &[1, 1]]);
        assert_eq!(set.ground().len(), 3);
    }

    #[test]
    fn schedule_endpoints() {
        let s = Schedule::new(100.0, 0.01, 5).unwrap();
        assert_eq!(s.temperature(0), 100.0);
        assert!((s.temperature(4) - 0.01).abs() < 1e-15);
        assert!(s.temperatures().windows(2).all(|w| w[1] < w[0]));
        assert_eq!(Schedule::new(1.0, 1.0, 1).unwrap().temperature(0), 1.0);
        assert!(Schedule::new(1.0, 2.0, 5).is_err());
        assert!(Schedule::new(1.0, 0.0, 5).is_err());
        assert!(Schedule::new(1.0, 0.5, 0).is_err());
    }

    #[test]
    fn registry_lookup() {
        let r = SamplerRegistry::default();
        assert_eq!(r.names(), vec!["grad", "sa"]);
        assert_eq!(r.get("sa").unwrap().name(), "sa");
        assert!(matches!(
            r.get("qa"),
            Err(SamplerError::UnknownSampler { .. })
        ));
    }
}

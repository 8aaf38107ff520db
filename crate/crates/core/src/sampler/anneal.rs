use rand::Rng;

use super::kernel::{with_kernel, FlipKernel, MAX_KERNEL_VARS};
use super::{chain_rng, run_chains, RunOptions, SampleSet, Sampler, SamplerError, Schedule};
use crate::compile::HoboTensor;

/// Drift check interval, in accepted moves.
const CHECK_EVERY: usize = 64;

/// Multi-chain single-flip Metropolis annealing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Annealer;

impl Sampler for Annealer {
    fn name(&self) -> &'static str {
        "sa"
    }

    fn description(&self) -> &'static str {
        "simulated annealing, geometric schedule, single-flip Metropolis sweeps"
    }

    fn sample(&self, h: &HoboTensor, opts: &RunOptions) -> Result<SampleSet, SamplerError> {
        let schedule = match opts.schedule {
            Some(s) => s,
            None => Schedule::default_for(h, opts.sweeps)?,
        };
        sa_run_with(
            h,
            opts.shots,
            &schedule,
            opts.seed,
            opts.workers,
            opts.check_energy,
        )
    }
}

/// Annealing with the global worker pool and no drift checks.
pub fn sa_run(
    h: &HoboTensor,
    shots: usize,
    schedule: &Schedule,
    seed: u64,
) -> Result<SampleSet, SamplerError> {
    sa_run_with(h, shots, schedule, seed, None, false)
}

pub fn sa_run_with(
    h: &HoboTensor,
    shots: usize,
    schedule: &Schedule,
    seed: u64,
    workers: Option<usize>,
    check_energy: bool,
) -> Result<SampleSet, SamplerError> {
    let temps = schedule.temperatures();
    with_kernel!(
        h,
        k => run_chains(shots, workers, |chain| {
            let bits = anneal_chain(&k, h, &temps, seed, chain, check_energy)?;
            let e = h.energy_unchecked(&bits);
            Ok((bits, e))
        }),
        Err(SamplerError::TooManyVariables { n: h.n(), max: MAX_KERNEL_VARS })
    )
}

fn anneal_chain<const W: usize>(
    k: &FlipKernel<W>,
    h: &HoboTensor,
    temps: &[f64],
    seed: u64,
    chain: usize,
    check_energy: bool,
) -> Result<Vec<u8>, SamplerError> {
    let mut rng = chain_rng(seed, chain);
    let n = k.n();
    let mut state = [0u64; W];
    for (w, word) in state.iter_mut().enumerate().take(n.div_ceil(64)) {
        let live = (n - 64 * w).min(64);
        *word = rng.random::<u64>()
            & if live == 64 {
                u64::MAX
            } else {
                (1 << live) - 1
            };
    }
    let mut tracked = if check_energy {
        h.energy_unchecked(&k.to_bits(&state))
    } else {
        0.0
    };
    let mut accepted = 0usize;
    for &t in temps {
        for v in 0..n {
            let de = k.delta(v, &state);
            if de <= 0.0 || metropolis(rng.random::<f64>(), de / t) {
                FlipKernel::<W>::flip(&mut state, v);
                if check_energy {
                    tracked += de;
                    accepted += 1;
                    if accepted.is_multiple_of(CHECK_EVERY) {
                        let fresh = h.energy_unchecked(&k.to_bits(&state));
                        if (tracked - fresh).abs() > 1e-9 * fresh.abs().max(1.0) {
                            return Err(SamplerError::EnergyDrift {
                                chain,
                                tracked,
                                fresh,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(k.to_bits(&state))
}

/// `u < exp(-x)` for `u = k · 2^-53`, skipping `exp` where only `u = 0`
/// can pass.
#[inline]
fn metropolis(u: f64, x: f64) -> bool {
    if x > 36.8 {
        u == 0.0 && x < 745.0
    } else {
        u < (-x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metropolis_shortcut_is_exact() {
        let smallest = 2f64.powi(-53);
        for x in [36.75, 36.8, 36.9, 40.0, 700.0, 744.0, 746.0, 1e6] {
            for u in [0.0, smallest, 2.0 * smallest, 0.5] {
                assert_eq!(metropolis(u, x), u < (-x).exp(), "u={u} x={x}");
            }
        }
    }

    #[test]
    fn single_variable_minimum() {
        let h = HoboTensor::from_terms(1, [(vec![0], 1.0)], 0.0).unwrap();
        let s = Schedule::default_for(&h, 50).unwrap();
        let set = sa_run(&h, 100, &s, 7).unwrap();
        assert_eq!(set.best().unwrap().assignment, vec![0]);
        assert_eq!(set.best().unwrap().energy, 0.0);
        assert_eq!(set.shots(), 100);
    }

    #[test]
    fn zero_shots_rejected() {
        let h = HoboTensor::from_terms(1, [(vec![0], 1.0)], 0.0).unwrap();
        let s = Schedule::default_for(&h, 10).unwrap();
        assert_eq!(sa_run(&h, 0, &s, 1), Err(SamplerError::ZeroShots));
    }

    #[test]
    fn drift_check_passes_on_wide_problem() {
        let terms: Vec<(Vec<usize>, f64)> = (0..130)
            .map(|i| {
                (
                    vec![i, (i * 7 + 3) % 130, (i * 11 + 5) % 130],
                    if i % 3 == 0 { -1.5 } else { 0.75 },
                )
            })
            .collect();
        let h = HoboTensor::from_terms(130, terms, 0.0).unwrap();
        let s = Schedule::default_for(&h, 30).unwrap();
        let set = sa_run_with(&h, 8, &s, 3, Some(1), true).unwrap();
        for e in set.entries() {
            assert_eq!(h.energy(&e.assignment).unwrap(), e.energy);
        }
    }
}

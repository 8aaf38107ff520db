use rand::Rng;

use super::kernel::{with_kernel, FlipKernel, MAX_KERNEL_VARS};
use super::{chain_rng, run_chains, RunOptions, SampleSet, Sampler, SamplerError};
use crate::compile::HoboTensor;

/// Gradient descent on the multilinear relaxation, followed by rounding and
/// greedy single-flip descent.
#[derive(Debug, Clone, Copy, Default)]
pub struct GradientDescent;

impl Sampler for GradientDescent {
    fn name(&self) -> &'static str {
        "grad"
    }

    fn description(&self) -> &'static str {
        "logistic-parameterised gradient descent on the multilinear extension"
    }

    fn sample(&self, h: &HoboTensor, opts: &RunOptions) -> Result<SampleSet, SamplerError> {
        let eta = opts.step_size.unwrap_or_else(|| default_step_size(h));
        grad_run_with(h, opts.shots, opts.steps, eta, opts.seed, opts.workers)
    }
}

/// `1 / max|coeff|`, or 1 for a problem without terms.
pub fn default_step_size(h: &HoboTensor) -> f64 {
    let m = h.max_abs_coefficient();
    if m > 0.0 {
        1.0 / m
    } else {
        1.0
    }
}

/// Exact gradient of `E(p) = Σ_t c_t Π_{u∈t} p_u`.
pub fn multilinear_grad(h: &HoboTensor, p: &[f64]) -> Result<Vec<f64>, SamplerError> {
    if p.len() != h.n() {
        return Err(SamplerError::Dimension {
            got: p.len(),
            expected: h.n(),
        });
    }
    if let Some((index, &value)) = p
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(SamplerError::Domain { index, value });
    }
    Ok(grad_unchecked(h, p))
}

fn grad_unchecked(h: &HoboTensor, p: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; p.len()];
    for (m, c) in h.terms() {
        let vars = m.vars();
        for (i, &v) in vars.iter().enumerate() {
            let others: f64 = vars
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &u)| p[u])
                .product();
            g[v] += c * others;
        }
    }
    g
}

pub fn grad_run(
    h: &HoboTensor,
    shots: usize,
    steps: usize,
    step_size: f64,
    seed: u64,
) -> Result<SampleSet, SamplerError> {
    grad_run_with(h, shots, steps, step_size, seed, None)
}

pub fn grad_run_with(
    h: &HoboTensor,
    shots: usize,
    steps: usize,
    step_size: f64,
    seed: u64,
    workers: Option<usize>,
) -> Result<SampleSet, SamplerError> {
    if !(step_size > 0.0 && step_size.is_finite()) {
        return Err(SamplerError::StepSize(step_size));
    }
    if steps == 0 {
        return Err(SamplerError::ZeroSteps);
    }
    with_kernel!(
        h,
        k => run_chains(shots, workers, |chain| {
            let bits = descend(&k, h, steps, step_size, seed, chain);
            let e = h.energy_unchecked(&bits);
            Ok((bits, e))
        }),
        Err(SamplerError::TooManyVariables { n: h.n(), max: MAX_KERNEL_VARS })
    )
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn descend<const W: usize>(
    k: &FlipKernel<W>,
    h: &HoboTensor,
    steps: usize,
    eta: f64,
    seed: u64,
    chain: usize,
) -> Vec<u8> {
    let mut rng = chain_rng(seed, chain);
    let n = h.n();
    // p = σ(θ); dE/dθ = g · p(1 - p).
    let mut theta: Vec<f64> = (0..n)
        .map(|_| {
            let p: f64 = rng.random_range(f64::EPSILON..1.0 - f64::EPSILON);
            (p / (1.0 - p)).ln()
        })
        .collect();
    let mut p: Vec<f64> = theta.iter().map(|&t| sigmoid(t)).collect();
    for _ in 0..steps {
        let g = grad_unchecked(h, &p);
        for v in 0..n {
            theta[v] -= eta * g[v] * p[v] * (1.0 - p[v]);
            p[v] = sigmoid(theta[v]);
        }
    }
    let bits: Vec<u8> = p.iter().map(|&x| u8::from(x > 0.5)).collect();

    // Steepest single-flip descent; lowest index wins ties.
    let mut state = FlipKernel::<W>::from_bits(&bits);
    loop {
        let mut best = (0.0, usize::MAX);
        for v in 0..n {
            let de = k.delta(v, &state);
            if de < best.0 {
                best = (de, v);
            }
        }
        if best.1 == usize::MAX {
            break;
        }
        FlipKernel::<W>::flip(&mut state, best.1);
    }
    k.to_bits(&state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let h = HoboTensor::from_terms(2, [(vec![0, 1], 1.0)], 0.0).unwrap();
        assert_eq!(multilinear_grad(&h, &[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn constant_problem_has_zero_gradient() {
        let h = HoboTensor::from_terms(3, Vec::<(Vec<usize>, f64)>::new(), 4.0).unwrap();
        assert_eq!(
            multilinear_grad(&h, &[0.2, 0.4, 0.9]).unwrap(),
            vec![0.0; 3]
        );
    }

    #[test]
    fn domain_and_dimension_errors() {
        let h = HoboTensor::from_terms(2, [(vec![0, 1], 1.0)], 0.0).unwrap();
        assert_eq!(
            multilinear_grad(&h, &[0.5, 1.5]),
            Err(SamplerError::Domain {
                index: 1,
                value: 1.5
            })
        );
        assert_eq!(
            multilinear_grad(&h, &[0.5]),
            Err(SamplerError::Dimension {
                got: 1,
                expected: 2
            })
        );
        assert_eq!(grad_run(&h, 1, 1, 0.0, 0), Err(SamplerError::StepSize(0.0)));
    }

    #[test]
    fn negative_linear_term() {
        let h = HoboTensor::from_terms(1, [(vec![0], -1.0)], 0.0).unwrap();
        let set = grad_run(&h, 20, 10, default_step_size(&h), 5).unwrap();
        assert_eq!(set.entries().len(), 1);
        assert_eq!(set.best().unwrap().assignment, vec![1]);
        assert_eq!(set.best().unwrap().energy, -1.0);
    }
}

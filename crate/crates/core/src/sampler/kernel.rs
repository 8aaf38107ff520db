//! Bitmask local-field kernel for single-flip moves.
//!
//! For every variable `v` the kernel stores each term containing `v` as
//! `(coeff, mask of the other variables)`. The local field
//! `f_v(x) = Σ_{t∋v} c_t Π_{u∈t, u≠v} x_u` is then a masked sum, and flipping
//! `v` changes the energy by `(1 - 2 x_v) · f_v(x)`.

use crate::compile::HoboTensor;

/// Largest variable count the kernels are instantiated for.
pub const MAX_KERNEL_VARS: usize = 1024;

pub(crate) struct FlipKernel<const W: usize> {
    n: usize,
    starts: Vec<usize>,
    masks: Vec<[u64; W]>,
    coeffs: Vec<f64>,
}

impl<const W: usize> FlipKernel<W> {
    pub fn new(h: &HoboTensor) -> Self {
        let n = h.n();
        debug_assert!(n <= 64 * W);
        let mut per_var: Vec<Vec<([u64; W], f64)>> = vec![Vec::new(); n];
        for (m, c) in h.terms() {
            for &v in m.vars() {
                let mut mask = [0u64; W];
                for &u in m.vars().iter().filter(|&&u| u != v) {
                    mask[u / 64] |= 1 << (u % 64);
                }
                per_var[v].push((mask, *c));
            }
        }
        let mut starts = Vec::with_capacity(n + 1);
        let mut masks = Vec::new();
        let mut coeffs = Vec::new();
        starts.push(0);
        for list in per_var {
            for (m, c) in list {
                masks.push(m);
                coeffs.push(c);
            }
            starts.push(masks.len());
        }
        Self {
            n,
            starts,
            masks,
            coeffs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn covered(mask: &[u64; W], state: &[u64; W]) -> bool {
        mask.iter().zip(state).fold(0, |acc, (m, s)| acc | (m & !s)) == 0
    }

    /// `c` if `mask` is covered by `state`, else 0, without branching.
    #[inline]
    fn select(mask: &[u64; W], state: &[u64; W], c: f64) -> f64 {
        let hit = Self::covered(mask, state) as u64;
        f64::from_bits(c.to_bits() & hit.wrapping_neg())
    }

    #[inline]
    pub fn field(&self, v: usize, state: &[u64; W]) -> f64 {
        let range = self.starts[v]..self.starts[v + 1];
        let masks = &self.masks[range.clone()];
        let coeffs = &self.coeffs[range];
        let mut acc = [0.0f64; 4];
        let mut mc = masks.chunks_exact(4);
        let mut cc = coeffs.chunks_exact(4);
        for (m4, c4) in (&mut mc).zip(&mut cc) {
            for k in 0..4 {
                acc[k] += Self::select(&m4[k], state, c4[k]);
            }
        }
        for (m, c) in mc.remainder().iter().zip(cc.remainder()) {
            acc[0] += Self::select(m, state, *c);
        }
        (acc[0] + acc[1]) + (acc[2] + acc[3])
    }

    #[inline]
    pub fn bit(state: &[u64; W], v: usize) -> bool {
        state[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(state: &mut [u64; W], v: usize) {
        state[v / 64] ^= 1 << (v % 64);
    }

    /// Energy change of flipping `v`.
    #[inline]
    pub fn delta(&self, v: usize, state: &[u64; W]) -> f64 {
        let f = self.field(v, state);
        if Self::bit(state, v) {
            -f
        } else {
            f
        }
    }

    pub fn to_bits(&self, state: &[u64; W]) -> Vec<u8> {
        (0..self.n).map(|v| u8::from(Self::bit(state, v))).collect()
    }

    pub fn from_bits(bits: &[u8]) -> [u64; W] {
        let mut state = [0u64; W];
        for (v, &b) in bits.iter().enumerate() {
            if b != 0 {
                state[v / 64] |= 1 << (v % 64);
            }
        }
        state
    }
}

/// Calls `$body` with `$k` bound to a [`FlipKernel`] wide enough for `$h`, or
/// evaluates `$fallback` when the problem is too large.
macro_rules! with_kernel {
    ($h:expr, $k:ident => $body:expr, $fallback:expr) => {{
        use $crate::sampler::kernel::FlipKernel;
        match $h.n().div_ceil(64) {
            1 => {
                let $k = FlipKernel::<1>::new($h);
                $body
            }
            2 => {
                let $k = FlipKernel::<2>::new($h);
                $body
            }
            3..=4 => {
                let $k = FlipKernel::<4>::new($h);
                $body
            }
            5..=8 => {
                let $k = FlipKernel::<8>::new($h);
                $body
            }
            9..=16 => {
                let $k = FlipKernel::<16>::new($h);
                $body
            }
            _ => $fallback,
        }
    }};
}
pub(crate) use with_kernel;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_matches_energy_difference() {
        let h = HoboTensor::from_terms(
            70,
            [
                (vec![0, 65], 2.0),
                (vec![1, 65, 69], -3.0),
                (vec![65], 1.5),
                (vec![2, 3], 0.25),
            ],
            0.0,
        )
        .unwrap();
        let k = FlipKernel::<2>::new(&h);
        let mut bits = vec![0u8; 70];
        bits[1] = 1;
        bits[69] = 1;
        bits[0] = 1;
        let state = FlipKernel::<2>::from_bits(&bits);
        for v in [0, 1, 2, 3, 65, 69] {
            let mut flipped = bits.clone();
            flipped[v] ^= 1;
            let want = h.energy(&flipped).unwrap() - h.energy(&bits).unwrap();
            assert_eq!(k.delta(v, &state), want, "variable {v}");
        }
        assert_eq!(k.to_bits(&state), bits);
    }
}

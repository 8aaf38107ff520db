//! SVD and tensor-train decomposition.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tensor::{DenseTensor, EinsumSpec, TensorError};

/// Labels for the physical (vector) axes of a train, in core order.
pub const PHYSICAL_LABELS: &str = "ijklmnopqrstuvwxyzabcdefgh";
/// Labels for the bonds between consecutive cores.
pub const BOND_LABELS: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Default relative singular-value cutoff: keep everything above round-off.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 80;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("rel_tol must lie in [0, 1), got {0}")]
    BadTolerance(f64),
    #[error("tensor-train decomposition needs order >= 2, got {0}")]
    OrderTooLow(usize),
    #[error("invalid train: {0}")]
    Structure(String),
    #[error("train of {got} cores needs more than the {available} available labels")]
    LabelExhausted { got: usize, available: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, DecompError> {
        if data.len() != rows * cols {
            return Err(DecompError::Structure(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Panics on mismatched inner dimensions.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out.data[r * other.cols..(r + 1) * other.cols]
                    .iter_mut()
                    .zip(row)
                {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// `A ≈ U · diag(S) · Vᵀ` with `U` m×r, `V` n×r.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for r in 0..us.rows {
            for (c, s) in self.s.iter().enumerate() {
                us.data[r * us.cols + c] *= s;
            }
        }
        us.matmul(&self.v.transpose())
    }
}

/// Thin SVD by one-sided Jacobi rotations, keeping the singular values above
/// `rel_tol · σ_max`. A zero matrix yields rank 1 with zero factors.
pub fn svd(a: &Matrix, rel_tol: f64) -> Result<SvdResult, DecompError> {
    if !(0.0..1.0).contains(&rel_tol) {
        return Err(DecompError::BadTolerance(rel_tol));
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(DecompError::NonFinite);
    }
    // Rotate the orientation with fewer columns.
    if a.cols > a.rows {
        let t = svd(&a.transpose(), rel_tol)?;
        return Ok(SvdResult {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let (m, n) = (a.rows, a.cols);
    // Column-major working copies: w holds the columns of A·V.
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|c| (0..m).map(|r| a.get(r, c)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let eps = f64::EPSILON;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = w[p]
                    .iter()
                    .zip(&w[q])
                    .fold((0.0, 0.0, 0.0), |(a, b, g), (x, y)| {
                        (a + x * x, b + y * y, g + x * y)
                    });
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut w, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = c * xp - s * yq;
                        *y = s * xp + c * yq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma_max = norms[order[0]];
    if sigma_max == 0.0 {
        return Ok(SvdResult {
            u: Matrix::zeros(m, 1),
            s: vec![0.0],
            v: Matrix::zeros(n, 1),
        });
    }
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| norms[i] > rel_tol * sigma_max)
        .collect();
    let r = kept.len();
    let mut u = Matrix::zeros(m, r);
    let mut vm = Matrix::zeros(n, r);
    for (k, &i) in kept.iter().enumerate() {
        for (row, &x) in w[i].iter().enumerate() {
            u.set(row, k, x / norms[i]);
        }
        for (row, &x) in v[i].iter().enumerate() {
            vm.set(row, k, x);
        }
    }
    Ok(SvdResult {
        u,
        s: kept.iter().map(|&i| norms[i]).collect(),
        v: vm,
    })
}

/// Chain of order-3 cores `(r_{k-1}, n_k, r_k)` with `r_0 = r_d = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TTTrain {
    cores: Vec<DenseTensor>,
}

impl TTTrain {
    pub fn new(cores: Vec<DenseTensor>) -> Result<Self, DecompError> {
        if cores.is_empty() {
            return Err(DecompError::Structure(
                "a train needs at least one core".into(),
            ));
        }
        let mut left = 1;
        for (k, core) in cores.iter().enumerate() {
            let shape = core.shape();
            if shape.len() != 3 {
                return Err(DecompError::Structure(format!(
                    "core {k} has order {}, expected 3",
                    shape.len()
                )));
            }
            if shape[0] != left {
                return Err(DecompError::Structure(format!(
                    "core {k} has left bond {}, expected {left}",
                    shape[0]
                )));
            }
            left = shape[2];
        }
        if left != 1 {
            return Err(DecompError::Structure(format!(
                "last right bond is {left}, expected 1"
            )));
        }
        Ok(Self { cores })
    }

    pub fn cores(&self) -> &[DenseTensor] {
        &self.cores
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    /// Bond extents `r_1 … r_{d-1}`.
    pub fn ranks(&self) -> Vec<usize> {
        self.cores[..self.cores.len() - 1]
            .iter()
            .map(|c| c.shape()[2])
            .collect()
    }

    pub fn physical_dims(&self) -> Vec<usize> {
        self.cores.iter().map(|c| c.shape()[1]).collect()
    }

    /// Core shapes with the unit boundary bonds dropped, e.g. `[(6,2), (2,6,3), …, (2,6)]`.
    pub fn squeezed_shapes(&self) -> Vec<Vec<usize>> {
        let d = self.cores.len();
        self.cores
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let s = c.shape();
                let mut out = Vec::with_capacity(3);
                if k > 0 {
                    out.push(s[0]);
                }
                out.push(s[1]);
                if k + 1 < d {
                    out.push(s[2]);
                }
                out
            })
            .collect()
    }

    pub fn squeezed_cores(&self) -> Vec<DenseTensor> {
        self.cores
            .iter()
            .zip(self.squeezed_shapes())
            .map(|(c, shape)| c.clone().reshape(shape).expect("same element count"))
            .collect()
    }
}

/// Renders shapes as `[(6, 2), (2, 6, 3)]`; one-element shapes keep the
/// trailing comma of a 1-tuple.
pub fn format_shapes(shapes: &[Vec<usize>]) -> String {
    let parts: Vec<String> = shapes
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            if s.len() == 1 {
                format!("({},)", inner[0])
            } else {
                format!("({})", inner.join(", "))
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Left-to-right TT-SVD: unfold, factor, keep `U` as the core and carry
/// `diag(S)·Vᵀ` into the next unfolding.
pub fn tt_decompose(t: &DenseTensor, rel_tol: f64) -> Result<TTTrain, DecompError> {
    let dims = t.shape().to_vec();
    let d = dims.len();
    if d < 2 {
        return Err(DecompError::OrderTooLow(d));
    }
    let mut carry = t.data().to_vec();
    let mut left = 1;
    let mut cores = Vec::with_capacity(d);
    for &n_k in &dims[..d - 1] {
        let rows = left * n_k;
        let cols = carry.len() / rows;
        let f = svd(&Matrix::new(rows, cols, carry)?, rel_tol)?;
        let r = f.rank();
        cores.push(DenseTensor::new(vec![left, n_k, r], f.u.data)?);
        let mut next = f.v.transpose();
        for (i, s) in f.s.iter().enumerate() {
            for x in &mut next.data[i * cols..(i + 1) * cols] {
                *x *= s;
            }
        }
        carry = next.data;
        left = r;
    }
    cores.push(DenseTensor::new(vec![left, dims[d - 1], 1], carry)?);
    TTTrain::new(cores)
}

/// Contracts every bond and returns the order-d tensor.
pub fn tt_reconstruct(train: &TTTrain) -> Result<DenseTensor, DecompError> {
    let checked = TTTrain::new(train.cores.clone())?;
    // acc: (prod n_1..n_k) × r_k, row-major
    let mut acc = vec![1.0];
    let mut rows = 1;
    let mut bond = 1;
    for core in &checked.cores {
        let (_, n, r) = (core.shape()[0], core.shape()[1], core.shape()[2]);
        let c = core.data();
        let mut next = vec![0.0; rows * n * r];
        for row in 0..rows {
            for a in 0..bond {
                let x = acc[row * bond + a];
                if x == 0.0 {
                    continue;
                }
                for i in 0..n {
                    let src = &c[(a * n + i) * r..(a * n + i + 1) * r];
                    let dst = &mut next[(row * n + i) * r..(row * n + i + 1) * r];
                    for (o, v) in dst.iter_mut().zip(src) {
                        *o += x * v;
                    }
                }
            }
        }
        acc = next;
        rows *= n;
        bond = r;
    }
    Ok(DenseTensor::new(checked.physical_dims(), acc)?)
}

/// Spec for contracting the squeezed cores. With vector labels the spec is
/// `"i,j,…,iA,AjB,…->"` and takes one vector per physical axis before the
/// cores; without, it is `"iA,AjB,…->ij…"`.
pub fn tt_contraction_spec(
    train: &TTTrain,
    with_vector_labels: bool,
) -> Result<EinsumSpec, DecompError> {
    let d = train.len();
    let physical: Vec<char> = PHYSICAL_LABELS.chars().collect();
    let bonds: Vec<char> = BOND_LABELS.chars().collect();
    if d > physical.len() || d > bonds.len() + 1 {
        return Err(DecompError::LabelExhausted {
            got: d,
            available: physical.len(),
        });
    }
    let mut dims = BTreeMap::new();
    let mut cores = Vec::with_capacity(d);
    for (k, core) in train.cores.iter().enumerate() {
        let mut labels = Vec::with_capacity(3);
        if k > 0 {
            labels.push(bonds[k - 1]);
        }
        labels.push(physical[k]);
        dims.insert(physical[k], core.shape()[1]);
        if k + 1 < d {
            labels.push(bonds[k]);
            dims.insert(bonds[k], core.shape()[2]);
        }
        cores.push(labels);
    }
    let (inputs, output) = if with_vector_labels {
        let mut inputs: Vec<Vec<char>> = physical[..d].iter().map(|&l| vec![l]).collect();
        inputs.extend(cores);
        (inputs, Vec::new())
    } else {
        (cores, physical[..d].to_vec())
    };
    Ok(EinsumSpec::new(inputs, output, dims)?)
}

/// Operands for [`tt_contraction_spec`] with vector labels: `x` once per
/// physical axis, then the squeezed cores.
pub fn tt_operands(train: &TTTrain, x: &[f64]) -> Vec<DenseTensor> {
    let mut ops: Vec<DenseTensor> = (0..train.len())
        .map(|_| DenseTensor::vector(x.to_vec()))
        .collect();
    ops.extend(train.squeezed_cores());
    ops
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_error(m: &Matrix) -> f64 {
        m.transpose()
            .matmul(m)
            .max_abs_diff(&Matrix::identity(m.cols()))
    }

    #[test]
    fn identity_svd() {
        let f = svd(&Matrix::identity(3), 0.0).unwrap();
        assert_eq!(f.s, vec![1.0, 1.0, 1.0]);
        assert_eq!(f.reconstruct(), Matrix::identity(3));
    }

    #[test]
    fn rank_one_outer_product() {
        let u = [1.0, 2.0, 2.0];
        let v = [3.0, 4.0];
        let a = Matrix::new(
            3,
            2,
            u.iter()
                .flat_map(|x| v.iter().map(move |y| x * y))
                .collect(),
        )
        .unwrap();
        let f = svd(&a, 1e-12).unwrap();
        assert_eq!(f.rank(), 1);
        assert!((f.s[0] - 15.0).abs() < 1e-12);
        assert!(f.reconstruct().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn wide_matrix_is_transposed() {
        let a = Matrix::new(2, 4, vec![1.0, 0.0, 2.0, 0.0, 0.0, 3.0, 0.0, 4.0]).unwrap();
        let f = svd(&a, 0.0).unwrap();
        assert_eq!(f.u.rows(), 2);
        assert_eq!(f.v.rows(), 4);
        assert!((f.s[0] - 5.0).abs() < 1e-12 && (f.s[1] - 5f64.sqrt()).abs() < 1e-12);
        assert!(orthonormality_error(&f.u) < 1e-12);
        assert!(orthonormality_error(&f.v) < 1e-12);
        assert!(f.reconstruct().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn zero_matrix_convention() {
        let f = svd(&Matrix::zeros(3, 2), 1e-12).unwrap();
        assert_eq!(f.s, vec![0.0]);
        assert_eq!(f.u, Matrix::zeros(3, 1));
        assert_eq!(f.v, Matrix::zeros(2, 1));
    }

    #[test]
    fn rejects_bad_input() {
        let a = Matrix::new(1, 2, vec![f64::NAN, 1.0]).unwrap();
        assert_eq!(svd(&a, 0.0), Err(DecompError::NonFinite));
        assert_eq!(
            svd(&Matrix::identity(2), 1.0),
            Err(DecompError::BadTolerance(1.0))
        );
    }

    #[test]
    fn rank_one_tensor_has_unit_bonds() {
        let t = DenseTensor::from_fn(&[2, 3, 4], |i| {
            (i[0] + 1) as f64 * (i[1] + 2) as f64 * (4 - i[2]) as f64
        });
        let train = tt_decompose(&t, 1e-12).unwrap();
        assert_eq!(train.ranks(), vec![1, 1]);
        assert!(tt_reconstruct(&train).unwrap().max_abs_diff(&t).unwrap() < 1e-10);
    }

    #[test]
    fn zero_tensor_keeps_unit_bonds() {
        let train = tt_decompose(&DenseTensor::zeros(&[4, 4, 4]), 1e-12).unwrap();
        assert_eq!(
            train.squeezed_shapes(),
            vec![vec![4, 1], vec![1, 4, 1], vec![1, 4]]
        );
        assert!(train.cores().iter().all(|c| c.max_abs() == 0.0));
    }

    #[test]
    fn order_one_is_rejected() {
        assert_eq!(
            tt_decompose(&DenseTensor::vector(vec![1.0, 2.0]), 1e-12),
            Err(DecompError::OrderTooLow(1))
        );
    }

    #[test]
    fn single_and_double_core_reconstruction() {
        let core = DenseTensor::new(vec![1, 3, 1], vec![1.0, 2.0, 3.0]).unwrap();
        let one = TTTrain::new(vec![core]).unwrap();
        assert_eq!(
            tt_reconstruct(&one).unwrap(),
            DenseTensor::vector(vec![1.0, 2.0, 3.0])
        );

        let ones = DenseTensor::new(vec![1, 2, 1], vec![1.0, 1.0]).unwrap();
        let two = TTTrain::new(vec![ones.clone(), ones]).unwrap();
        let t = tt_reconstruct(&two).unwrap();
        assert_eq!(t.shape(), &[2, 2]);
        assert!(t.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn bond_mismatch_is_rejected() {
        let a = DenseTensor::zeros(&[1, 2, 2]);
        let b = DenseTensor::zeros(&[3, 2, 1]);
        assert!(matches!(
            TTTrain::new(vec![a, b]),
            Err(DecompError::Structure(_))
        ));
    }

    #[test]
    fn spec_strings() {
        let ones = DenseTensor::new(vec![1, 2, 1], vec![1.0, 1.0]).unwrap();
        let two = TTTrain::new(vec![ones.clone(), ones]).unwrap();
        assert_eq!(
            tt_contraction_spec(&two, true).unwrap().to_string(),
            "i,j,iA,Aj->"
        );
        assert_eq!(
            tt_contraction_spec(&two, false).unwrap().to_string(),
            "iA,Aj->ij"
        );
    }

    #[test]
    fn shape_formatting() {
        assert_eq!(
            format_shapes(&[vec![6, 2], vec![2, 6, 3], vec![3, 6]]),
            "[(6, 2), (2, 6, 3), (3, 6)]"
        );
        assert_eq!(format_shapes(&[vec![4]]), "[(4,)]");
    }
}

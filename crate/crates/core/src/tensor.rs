//! Dense row-major tensors and an einsum contraction engine.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::compile::HoboTensor;
use crate::path::ContractionPath;

/// Index labels: one ASCII alphanumeric character per axis.
pub const LABEL_ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("data length {len} does not match shape {shape:?}")]
    DataLength { len: usize, shape: Vec<usize> },
    #[error("invalid einsum spec: {0}")]
    Spec(String),
    #[error("invalid contraction path: {0}")]
    Path(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self, TensorError> {
        if shape.iter().product::<usize>() != data.len() {
            return Err(TensorError::DataLength {
                len: data.len(),
                shape,
            });
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Self {
            shape: shape.to_vec(),
            data: vec![0.0; shape.iter().product()],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self {
            shape: Vec::new(),
            data: vec![value],
        }
    }

    pub fn vector(values: Vec<f64>) -> Self {
        Self {
            shape: vec![values.len()],
            data: values,
        }
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let total: usize = shape.iter().product();
        let data = (0..total)
            .map(|flat| f(&crate::expr::unravel(flat, shape)))
            .collect();
        Self {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    fn flat_index(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.shape.len() {
            return None;
        }
        let mut flat = 0;
        for (&i, &n) in index.iter().zip(&self.shape) {
            if i >= n {
                return None;
            }
            flat = flat * n + i;
        }
        Some(flat)
    }

    pub fn get(&self, index: &[usize]) -> Option<f64> {
        self.flat_index(index).map(|f| self.data[f])
    }

    pub fn get_mut(&mut self, index: &[usize]) -> Option<&mut f64> {
        self.flat_index(index).map(move |f| &mut self.data[f])
    }

    pub fn reshape(self, shape: Vec<usize>) -> Result<Self, TensorError> {
        Self::new(shape, self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseTensor) -> Option<f64> {
        (self.shape == other.shape).then(|| {
            self.data
                .iter()
                .zip(&other.data)
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
        })
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

/// A multi-operand contraction `"ab,bc->ac"` together with label extents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EinsumSpec {
    inputs: Vec<Vec<char>>,
    output: Vec<char>,
    dims: BTreeMap<char, usize>,
}

impl EinsumSpec {
    pub fn new(
        inputs: Vec<Vec<char>>,
        output: Vec<char>,
        dims: BTreeMap<char, usize>,
    ) -> Result<Self, TensorError> {
        if inputs.is_empty() {
            return Err(TensorError::Spec("at least one operand is required".into()));
        }
        for &l in inputs.iter().flatten().chain(&output) {
            if !l.is_ascii_alphanumeric() {
                return Err(TensorError::Spec(format!(
                    "label {l:?} is not alphanumeric"
                )));
            }
            match dims.get(&l) {
                None => return Err(TensorError::Spec(format!("label {l:?} has no extent"))),
                Some(0) => return Err(TensorError::Spec(format!("label {l:?} has extent 0"))),
                Some(_) => {}
            }
        }
        for (k, &l) in output.iter().enumerate() {
            if output[..k].contains(&l) {
                return Err(TensorError::Spec(format!("output label {l:?} repeats")));
            }
            if !inputs.iter().any(|op| op.contains(&l)) {
                return Err(TensorError::Spec(format!(
                    "output label {l:?} appears in no input"
                )));
            }
        }
        let dims = dims
            .into_iter()
            .filter(|(l, _)| inputs.iter().any(|op| op.contains(l)))
            .collect();
        Ok(Self {
            inputs,
            output,
            dims,
        })
    }

    /// Parses `"i,ij->j"` and takes extents from the operand shapes.
    pub fn parse(expr: &str, shapes: &[&[usize]]) -> Result<Self, TensorError> {
        let (lhs, rhs) = expr
            .split_once("->")
            .ok_or_else(|| TensorError::Spec(format!("{expr:?} has no '->'")))?;
        let inputs: Vec<Vec<char>> = lhs.split(',').map(|s| s.trim().chars().collect()).collect();
        let output: Vec<char> = rhs.trim().chars().collect();
        if inputs.len() != shapes.len() {
            return Err(TensorError::Spec(format!(
                "{} operand(s) in spec but {} shape(s) given",
                inputs.len(),
                shapes.len()
            )));
        }
        let mut dims = BTreeMap::new();
        for (labels, shape) in inputs.iter().zip(shapes) {
            if labels.len() != shape.len() {
                return Err(TensorError::Spec(format!(
                    "operand {:?} has {} axes but {} labels",
                    labels.iter().collect::<String>(),
                    shape.len(),
                    labels.len()
                )));
            }
            for (&l, &n) in labels.iter().zip(shape.iter()) {
                if let Some(&prev) = dims.get(&l) {
                    if prev != n {
                        return Err(TensorError::Spec(format!(
                            "label {l:?} has extents {prev} and {n}"
                        )));
                    }
                }
                dims.insert(l, n);
            }
        }
        Self::new(inputs, output, dims)
    }

    pub fn for_operands(expr: &str, operands: &[DenseTensor]) -> Result<Self, TensorError> {
        let shapes: Vec<&[usize]> = operands.iter().map(DenseTensor::shape).collect();
        Self::parse(expr, &shapes)
    }

    pub fn inputs(&self) -> &[Vec<char>] {
        &self.inputs
    }

    pub fn output(&self) -> &[char] {
        &self.output
    }

    pub fn dims(&self) -> &BTreeMap<char, usize> {
        &self.dims
    }

    pub fn num_operands(&self) -> usize {
        self.inputs.len()
    }

    /// Distinct labels in order of first appearance.
    pub fn labels(&self) -> Vec<char> {
        let mut seen = Vec::new();
        for &l in self.inputs.iter().flatten() {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
        seen
    }

    pub fn operand_shape(&self, k: usize) -> Vec<usize> {
        self.inputs[k].iter().map(|l| self.dims[l]).collect()
    }

    fn check_operands(&self, operands: &[DenseTensor]) -> Result<(), TensorError> {
        if operands.len() != self.inputs.len() {
            return Err(TensorError::Spec(format!(
                "spec has {} operand(s) but {} given",
                self.inputs.len(),
                operands.len()
            )));
        }
        for (k, op) in operands.iter().enumerate() {
            let expected = self.operand_shape(k);
            if op.shape() != expected.as_slice() {
                return Err(TensorError::Spec(format!(
                    "operand {k} has shape {:?}, spec expects {expected:?}",
                    op.shape()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EinsumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self.inputs.iter().map(|op| op.iter().collect()).collect();
        write!(
            f,
            "{}->{}",
            inputs.join(","),
            self.output.iter().collect::<String>()
        )
    }
}

/// Direct einsum over any number of operands: every output cell is the sum,
/// over all values of the non-output labels, of the product of operand
/// entries. Repeated labels within one operand select diagonals.
fn einsum_direct(
    operands: &[(&[char], &DenseTensor)],
    output: &[char],
    dims: &BTreeMap<char, usize>,
) -> DenseTensor {
    let mut order: Vec<char> = output.to_vec();
    for (labels, _) in operands {
        for &l in labels.iter() {
            if !order.contains(&l) {
                order.push(l);
            }
        }
    }
    let extents: Vec<usize> = order.iter().map(|l| dims[l]).collect();
    let out_shape: Vec<usize> = extents[..output.len()].to_vec();
    let inner: usize = extents[output.len()..].iter().product();

    // Per-operand stride along each label of `order` (summed for repeats).
    let op_strides: Vec<Vec<usize>> = operands
        .iter()
        .map(|(labels, t)| {
            let strides = t.strides();
            order
                .iter()
                .map(|l| {
                    labels
                        .iter()
                        .zip(&strides)
                        .filter(|(ll, _)| *ll == l)
                        .map(|(_, s)| s)
                        .sum()
                })
                .collect()
        })
        .collect();

    let nops = operands.len();
    let mut result = DenseTensor::zeros(&out_shape);
    let mut counter = vec![0usize; order.len()];
    let mut offsets = vec![0usize; nops];
    let total_out = result.data.len();
    for cell in 0..total_out {
        let mut acc = 0.0;
        for _ in 0..inner {
            let mut prod = 1.0;
            for (k, (_, t)) in operands.iter().enumerate() {
                prod *= t.data[offsets[k]];
            }
            acc += prod;
            advance(
                &mut counter,
                &extents,
                &op_strides,
                &mut offsets,
                output.len()..order.len(),
            );
        }
        result.data[cell] = acc;
        if cell + 1 < total_out {
            advance(
                &mut counter,
                &extents,
                &op_strides,
                &mut offsets,
                0..output.len(),
            );
        }
    }
    result
}

/// Odometer step over the positions in `range` with carries, keeping each
/// operand's flat offset in sync. Wrapping the whole range resets it to zero.
fn advance(
    counter: &mut [usize],
    extents: &[usize],
    op_strides: &[Vec<usize>],
    offsets: &mut [usize],
    range: std::ops::Range<usize>,
) {
    for p in range.rev() {
        counter[p] += 1;
        if counter[p] < extents[p] {
            for (off, s) in offsets.iter_mut().zip(op_strides) {
                *off += s[p];
            }
            return;
        }
        counter[p] = 0;
        for (off, s) in offsets.iter_mut().zip(op_strides) {
            *off -= s[p] * (extents[p] - 1);
        }
    }
}

/// Contracts `operands` according to `spec`. Without a path all operands are
/// contracted in one pass; with a path the pairwise steps run in order, each
/// step removing its two operands and appending the result.
pub fn contract(
    spec: &EinsumSpec,
    operands: &[DenseTensor],
    path: Option<&ContractionPath>,
) -> Result<DenseTensor, TensorError> {
    spec.check_operands(operands)?;
    let Some(path) = path else {
        let ops: Vec<(&[char], &DenseTensor)> = spec
            .inputs
            .iter()
            .map(Vec::as_slice)
            .zip(operands)
            .collect();
        return Ok(einsum_direct(&ops, &spec.output, &spec.dims));
    };

    let mut live: Vec<(Vec<char>, DenseTensor)> = spec
        .inputs
        .iter()
        .cloned()
        .zip(operands.iter().cloned())
        .collect();
    for (step, &(a, b)) in path.steps().iter().enumerate() {
        if a == b || a >= live.len() || b >= live.len() {
            return Err(TensorError::Path(format!(
                "step {step} references ({a}, {b}) with {} live operand(s)",
                live.len()
            )));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (hi_labels, hi_t) = live.remove(hi);
        let (lo_labels, lo_t) = live.remove(lo);
        let (first, second) = if a < b {
            ((&lo_labels, &lo_t), (&hi_labels, &hi_t))
        } else {
            ((&hi_labels, &hi_t), (&lo_labels, &lo_t))
        };
        let mut kept: Vec<char> = Vec::new();
        for &l in first.0.iter().chain(second.0.iter()) {
            let needed = spec.output.contains(&l) || live.iter().any(|(ls, _)| ls.contains(&l));
            if needed && !kept.contains(&l) {
                kept.push(l);
            }
        }
        let result = einsum_direct(
            &[
                (first.0.as_slice(), first.1),
                (second.0.as_slice(), second.1),
            ],
            &kept,
            &spec.dims,
        );
        live.push((kept, result));
    }
    if live.len() != 1 {
        return Err(TensorError::Path(format!(
            "{} operand(s) remain after the last step",
            live.len()
        )));
    }
    let (labels, t) = live.pop().expect("one operand");
    if labels == spec.output {
        return Ok(t);
    }
    Ok(einsum_direct(
        &[(labels.as_slice(), &t)],
        &spec.output,
        &spec.dims,
    ))
}

/// Energies (offset excluded) of every row of `rows`, each row an axis-space
/// bit vector. Rows are independent and may be evaluated in parallel; each
/// row is summed sequentially in term order.
pub fn energy_batch<R: AsRef<[u8]> + Sync>(
    h: &HoboTensor,
    rows: &[R],
) -> Result<Vec<f64>, TensorError> {
    for (s, row) in rows.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != h.n() {
            return Err(TensorError::Dimension(format!(
                "row {s} has {} columns, expected {}",
                row.len(),
                h.n()
            )));
        }
        if let Some(bad) = row.iter().find(|&&b| b > 1) {
            return Err(TensorError::Dimension(format!(
                "row {s} contains non-binary entry {bad}"
            )));
        }
    }
    Ok(rows
        .par_iter()
        .map(|row| h.energy_unchecked(row.as_ref()))
        .collect())
}

/// Full contraction of a dense HOBO tensor with the same vector on every axis.
pub fn contract_all_axes(dense: &DenseTensor, x: &[f64]) -> Result<f64, TensorError> {
    if dense.shape().iter().any(|&n| n != x.len()) {
        return Err(TensorError::Dimension(format!(
            "vector of length {} against tensor of shape {:?}",
            x.len(),
            dense.shape()
        )));
    }
    // Peel one axis at a time from the right: t[.., i] · x[i].
    let n = x.len();
    let mut data = dense.data().to_vec();
    for _ in 0..dense.order() {
        data = data
            .chunks_exact(n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
    }
    Ok(data[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: usize, cols: usize, v: &[f64]) -> DenseTensor {
        DenseTensor::new(vec![rows, cols], v.to_vec()).unwrap()
    }

    #[test]
    fn identity_product() {
        let eye = matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let spec = EinsumSpec::for_operands("ik,kj->ij", &[eye.clone(), eye.clone()]).unwrap();
        assert_eq!(
            contract(&spec, &[eye.clone(), eye.clone()], None).unwrap(),
            eye
        );
    }

    #[test]
    fn row_selection() {
        let x = DenseTensor::vector(vec![1.0, 0.0]);
        let m = matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let spec = EinsumSpec::for_operands("i,ij->j", &[x.clone(), m.clone()]).unwrap();
        let out = contract(&spec, &[x, m], None).unwrap();
        assert_eq!(out.data(), &[1.0, 2.0]);
    }

    #[test]
    fn transpose_and_trace() {
        let m = matrix(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let spec = EinsumSpec::for_operands("ij->ji", std::slice::from_ref(&m)).unwrap();
        let t = contract(&spec, std::slice::from_ref(&m), None).unwrap();
        assert_eq!(t.shape(), &[3, 2]);
        assert_eq!(t.data(), &[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);

        let sq = matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let spec = EinsumSpec::for_operands("ii->", std::slice::from_ref(&sq)).unwrap();
        assert_eq!(contract(&spec, &[sq], None).unwrap().data(), &[5.0]);
    }

    #[test]
    fn path_execution_matches_direct() {
        let a = DenseTensor::from_fn(&[2, 3], |i| (i[0] * 3 + i[1]) as f64 + 1.0);
        let b = DenseTensor::from_fn(&[3, 4], |i| (i[0] as f64) - (i[1] as f64) * 0.5);
        let c = DenseTensor::from_fn(&[4, 2], |i| 1.0 + (i[0] * i[1]) as f64);
        let ops = [a, b, c];
        let spec = EinsumSpec::for_operands("ab,bc,cd->ad", &ops).unwrap();
        let direct = contract(&spec, &ops, None).unwrap();
        for steps in [
            vec![(0, 1), (0, 1)],
            vec![(1, 2), (0, 1)],
            vec![(2, 0), (0, 1)],
        ] {
            let path = ContractionPath::new(steps);
            let via = contract(&spec, &ops, Some(&path)).unwrap();
            assert!(via.max_abs_diff(&direct).unwrap() < 1e-12);
        }
    }

    #[test]
    fn spec_errors() {
        let m = matrix(2, 2, &[0.0; 4]);
        assert!(EinsumSpec::for_operands("ij,jk->ik", std::slice::from_ref(&m)).is_err());
        assert!(EinsumSpec::for_operands("ijk->", std::slice::from_ref(&m)).is_err());
        assert!(EinsumSpec::for_operands("ij->q", std::slice::from_ref(&m)).is_err());
        assert!(EinsumSpec::for_operands("ij->ii", std::slice::from_ref(&m)).is_err());
        assert!(EinsumSpec::for_operands("ij", std::slice::from_ref(&m)).is_err());
        let v = DenseTensor::vector(vec![1.0; 3]);
        assert!(EinsumSpec::for_operands("ij,j->i", &[m, v]).is_err());
    }

    #[test]
    fn invalid_paths_are_rejected() {
        let m = matrix(2, 2, &[1.0; 4]);
        let ops = [m.clone(), m.clone(), m];
        let spec = EinsumSpec::for_operands("ij,jk,kl->il", &ops).unwrap();
        let bad = ContractionPath::new(vec![(0, 5), (0, 1)]);
        assert!(matches!(
            contract(&spec, &ops, Some(&bad)),
            Err(TensorError::Path(_))
        ));
        let short = ContractionPath::new(vec![(0, 1)]);
        assert!(matches!(
            contract(&spec, &ops, Some(&short)),
            Err(TensorError::Path(_))
        ));
        let same = ContractionPath::new(vec![(1, 1), (0, 1)]);
        assert!(matches!(
            contract(&spec, &ops, Some(&same)),
            Err(TensorError::Path(_))
        ));
    }

    #[test]
    fn contract_all_axes_matches_einsum() {
        let t = DenseTensor::from_fn(&[3, 3, 3], |i| (i[0] + 2 * i[1] + 5 * i[2]) as f64);
        let x = [1.0, 0.0, 1.0];
        let xv = DenseTensor::vector(x.to_vec());
        let ops = [xv.clone(), xv.clone(), xv, t.clone()];
        let spec = EinsumSpec::for_operands("i,j,k,ijk->", &ops).unwrap();
        let want = contract(&spec, &ops, None).unwrap().data()[0];
        assert_eq!(contract_all_axes(&t, &x).unwrap(), want);
    }

    #[test]
    fn energy_batch_checks_rows() {
        let h = HoboTensor::from_terms(2, [(vec![0, 1], -1.0)], 0.0).unwrap();
        assert_eq!(
            energy_batch(&h, &[vec![1u8, 1], vec![0, 0]]).unwrap(),
            vec![-1.0, 0.0]
        );
        assert!(energy_batch(&h, &[vec![1u8]]).is_err());
        assert!(energy_batch(&h, &[vec![2u8, 0]]).is_err());
    }
}

//! Polynomial → HOBO coefficient tensor.
//!
//! A degree-k monomial is stored in exactly one cell of the order-d tensor:
//! its smallest variable index is repeated until the index tuple has length d,
//! e.g. `c * x1 * x3` in an order-4 tensor lands at `(1, 1, 1, 3)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Monomial, Polynomial, VarId};
use crate::tensor::DenseTensor;

/// Refuse to materialize dense tensors above this many cells by default.
pub const DEFAULT_DENSE_BUDGET: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error("constant monomials have no tensor cell")]
    ConstantMonomial,
    #[error("monomial of degree {degree} does not fit an order-{order} tensor")]
    MonomialTooLong { degree: usize, order: usize },
    #[error("problem has no variables")]
    NoVariables,
    #[error(
        "dense tensor with n = {n}, d = {d} needs {cells} cells, above the budget of {budget}"
    )]
    BudgetExceeded {
        n: usize,
        d: usize,
        cells: u128,
        budget: usize,
    },
    #[error("assignment has {got} entries, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

/// Index tuple of length `order` for a non-constant monomial.
pub fn canonical_index(m: &Monomial, order: usize) -> Result<Vec<usize>, CompileError> {
    let vars = m.vars();
    let Some(&smallest) = vars.first() else {
        return Err(CompileError::ConstantMonomial);
    };
    if vars.len() > order {
        return Err(CompileError::MonomialTooLong {
            degree: vars.len(),
            order,
        });
    }
    let mut index = vec![smallest; order - vars.len()];
    index.extend_from_slice(vars);
    Ok(index)
}

/// Compiled problem: the sparse term list over tensor axes plus the split-off
/// constant.
#[derive(Debug, Clone, PartialEq)]
pub struct HoboTensor {
    n: usize,
    order: usize,
    terms: Vec<(Monomial, f64)>,
    offset: f64,
    axes: Vec<VarId>,
}

/// Compiles a reduced polynomial. Only variables that occur are given tensor
/// axes (renumbered densely in id order); `declared` is the size of the
/// problem's variable table and is used only when the polynomial is constant.
pub fn compile(poly: &Polynomial, declared: usize) -> Result<HoboTensor, CompileError> {
    let mut axes = poly.variables();
    if axes.is_empty() {
        if declared == 0 {
            return Err(CompileError::NoVariables);
        }
        axes = (0..declared).collect();
    }
    let axis_of = |v: VarId| axes.binary_search(&v).expect("variable has an axis");
    let terms: Vec<(Monomial, f64)> = poly
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, c)| {
            let vars = m.vars().iter().map(|&v| axis_of(v)).collect();
            (
                Monomial::from_sorted(vars).expect("renumbering is monotone"),
                c,
            )
        })
        .collect();
    Ok(HoboTensor {
        n: axes.len(),
        order: poly.degree().max(1),
        terms,
        offset: poly.constant_term(),
        axes,
    })
}

impl HoboTensor {
    /// Builds a tensor directly from axis-space terms. Constant monomials are
    /// folded into the offset.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, f64)>,
        offset: f64,
    ) -> Result<Self, CompileError> {
        if n == 0 {
            return Err(CompileError::NoVariables);
        }
        let mut poly = Polynomial::from_terms(terms);
        if let Some(max) = poly.max_var() {
            if max >= n {
                return Err(CompileError::Dimension {
                    got: max + 1,
                    expected: n,
                });
            }
        }
        poly += offset;
        let order = poly.degree().max(1);
        let terms = poly
            .terms()
            .filter(|(m, _)| !m.is_one())
            .map(|(m, c)| (m.clone(), c))
            .collect();
        Ok(HoboTensor {
            n,
            order,
            terms,
            offset: poly.constant_term(),
            axes: (0..n).collect(),
        })
    }

    /// Extent of every tensor axis: the number of variables with an axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Non-constant terms over axis indices, in graded-lexicographic order.
    pub fn terms(&self) -> &[(Monomial, f64)] {
        &self.terms
    }

    /// `axes()[a]` is the problem variable id behind tensor axis `a`.
    pub fn axes(&self) -> &[VarId] {
        &self.axes
    }

    pub fn axis_of(&self, var: VarId) -> Option<usize> {
        self.axes.binary_search(&var).ok()
    }

    pub fn dense_shape(&self) -> Vec<usize> {
        vec![self.n; self.order]
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().fold(0.0, |acc, (_, c)| acc.max(c.abs()))
    }

    /// Projects a problem-space assignment onto the tensor axes.
    pub fn to_axis_assignment(&self, problem: &[u8]) -> Result<Vec<u8>, CompileError> {
        self.axes
            .iter()
            .map(|&v| {
                problem.get(v).copied().ok_or(CompileError::Dimension {
                    got: problem.len(),
                    expected: v + 1,
                })
            })
            .collect()
    }

    /// Lifts an axis-space assignment to a problem-space vector of length
    /// `declared`; variables without an axis are 0.
    pub fn to_problem_assignment(
        &self,
        axis: &[u8],
        declared: usize,
    ) -> Result<Vec<u8>, CompileError> {
        self.check_len(axis)?;
        let needed = self.axes.last().map_or(0, |&v| v + 1);
        let mut out = vec![0u8; declared.max(needed)];
        for (&v, &bit) in self.axes.iter().zip(axis) {
            out[v] = bit;
        }
        Ok(out)
    }

    fn check_len(&self, x: &[u8]) -> Result<(), CompileError> {
        if x.len() != self.n {
            return Err(CompileError::Dimension {
                got: x.len(),
                expected: self.n,
            });
        }
        Ok(())
    }

    /// Energy of one axis-space assignment, offset excluded. Terms are summed
    /// sequentially in term order.
    pub fn energy(&self, x: &[u8]) -> Result<f64, CompileError> {
        self.check_len(x)?;
        Ok(self.energy_unchecked(x))
    }

    pub(crate) fn energy_unchecked(&self, x: &[u8]) -> f64 {
        let mut e = 0.0;
        for (m, c) in &self.terms {
            if m.is_satisfied_by(x) {
                e += c;
            }
        }
        e
    }

    pub fn materialize_dense(&self) -> Result<DenseTensor, CompileError> {
        self.materialize_dense_with_budget(DEFAULT_DENSE_BUDGET)
    }

    pub fn materialize_dense_with_budget(
        &self,
        budget: usize,
    ) -> Result<DenseTensor, CompileError> {
        let cells = (self.n as u128).pow(self.order as u32);
        if cells > budget as u128 {
            return Err(CompileError::BudgetExceeded {
                n: self.n,
                d: self.order,
                cells,
                budget,
            });
        }
        let mut dense = DenseTensor::zeros(&self.dense_shape());
        for (m, c) in &self.terms {
            let index = canonical_index(m, self.order)?;
            *dense.get_mut(&index).expect("canonical index is in range") = *c;
        }
        Ok(dense)
    }

    pub fn to_doc(&self) -> CompiledDoc {
        CompiledDoc {
            num_vars: self.n,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| crate::parse::TermEntry {
                    vars: m.vars().to_vec(),
                    coeff: *c,
                })
                .collect(),
            offset: self.offset,
            axes: self.axes.clone(),
        }
    }
}

/// JSON export of a compiled problem: the term-list layout plus `offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledDoc {
    pub num_vars: usize,
    pub order: usize,
    pub terms: Vec<crate::parse::TermEntry>,
    pub offset: f64,
    pub axes: Vec<VarId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_index_pads_with_smallest() {
        let m = Monomial::new(vec![1, 3]);
        assert_eq!(canonical_index(&m, 4).unwrap(), vec![1, 1, 1, 3]);
        assert_eq!(
            canonical_index(&Monomial::new(vec![2]), 3).unwrap(),
            vec![2, 2, 2]
        );
        assert_eq!(
            canonical_index(&Monomial::new(vec![0, 1, 2]), 3).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn canonical_index_contract_violations() {
        assert_eq!(
            canonical_index(&Monomial::one(), 2),
            Err(CompileError::ConstantMonomial)
        );
        assert_eq!(
            canonical_index(&Monomial::new(vec![0, 1, 2]), 2),
            Err(CompileError::MonomialTooLong {
                degree: 3,
                order: 2
            })
        );
    }

    #[test]
    fn single_cubic_term() {
        let p = Polynomial::from_terms([(vec![0, 1, 2], 3.0)]);
        let h = compile(&p, 3).unwrap();
        let dense = h.materialize_dense().unwrap();
        assert_eq!(dense.shape(), &[3, 3, 3]);
        assert_eq!(dense.get(&[0, 1, 2]), Some(3.0));
        assert_eq!(dense.data().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn constant_polynomial_uses_declared_count() {
        let h = compile(&Polynomial::zero(), 4).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.order(), 1);
        let dense = h.materialize_dense().unwrap();
        assert_eq!(dense.shape(), &[4]);
        assert!(dense.data().iter().all(|&v| v == 0.0));
        assert_eq!(
            compile(&Polynomial::constant(2.0), 0),
            Err(CompileError::NoVariables)
        );
    }

    #[test]
    fn unused_variables_get_no_axis() {
        // x1 and x5 used out of 8 declared
        let p = Polynomial::var(1) * Polynomial::var(5) - Polynomial::var(5) + 7.0;
        let h = compile(&p, 8).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.axes(), &[1, 5]);
        assert_eq!(h.offset(), 7.0);
        assert_eq!(h.axis_of(5), Some(1));
        assert_eq!(h.axis_of(0), None);
        let problem = h.to_problem_assignment(&[1, 1], 8).unwrap();
        assert_eq!(problem, vec![0, 1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(h.to_axis_assignment(&problem).unwrap(), vec![1, 1]);
        assert_eq!(
            p.evaluate(&problem).unwrap(),
            h.energy(&[1, 1]).unwrap() + h.offset()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let p = Polynomial::from_terms([(vec![0, 1, 2, 3], 1.0)]);
        let h = compile(&p, 4).unwrap();
        let err = h.materialize_dense_with_budget(100).unwrap_err();
        assert_eq!(
            err,
            CompileError::BudgetExceeded {
                n: 4,
                d: 4,
                cells: 256,
                budget: 100
            }
        );
    }

    #[test]
    fn from_terms_folds_constants() {
        let h = HoboTensor::from_terms(2, [(vec![0, 1], 2.0), (vec![], 1.5)], 1.0).unwrap();
        assert_eq!(h.offset(), 2.5);
        assert_eq!(h.terms().len(), 1);
        assert!(HoboTensor::from_terms(1, [(vec![3], 1.0)], 0.0).is_err());
    }
}

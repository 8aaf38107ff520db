//! Multilinear polynomials over binary variables.
//!
//! Every operation reduces eagerly with `x * x = x`, so a [`Polynomial`] is
//! always a sum of distinct square-free monomials with nonzero coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

/// Dense variable index, assigned in declaration order.
pub type VarId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error(
        "pattern {pattern:?} has {found} placeholder(s) but the shape has {expected} axis/axes"
    )]
    PlaceholderMismatch {
        pattern: String,
        expected: usize,
        found: usize,
    },
    #[error("shape {0:?} must be non-empty with positive extents")]
    BadShape(Vec<usize>),
    #[error("variable {0:?} is already declared")]
    DuplicateName(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("assignment has {len} entries but variable {needed} is referenced")]
    AssignmentTooShort { len: usize, needed: VarId },
    #[error("index {index:?} is out of bounds for shape {shape:?}")]
    IndexOutOfBounds {
        index: Vec<usize>,
        shape: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryVar {
    pub id: VarId,
    pub name: String,
}

impl BinaryVar {
    pub fn poly(&self) -> Polynomial {
        Polynomial::var(self.id)
    }
}

impl From<&BinaryVar> for Polynomial {
    fn from(v: &BinaryVar) -> Self {
        v.poly()
    }
}

/// Symbol table shared by every array declared for one problem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Symbols {
    names: Vec<String>,
    ids: HashMap<String, VarId>,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.ids.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = BinaryVar> + '_ {
        self.names.iter().enumerate().map(|(id, name)| BinaryVar {
            id,
            name: name.clone(),
        })
    }

    /// Declares a single variable.
    pub fn var(&mut self, name: &str) -> Result<BinaryVar, ExprError> {
        if self.ids.contains_key(name) {
            return Err(ExprError::DuplicateName(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        Ok(BinaryVar {
            id,
            name: name.to_string(),
        })
    }

    /// Declares a row-major grid of fresh variables named by `pattern`, whose
    /// `{}` placeholders are filled with the axis indices in order. Ids
    /// continue from the variables declared so far.
    pub fn var_array(&mut self, shape: &[usize], pattern: &str) -> Result<VarArray, ExprError> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(ExprError::BadShape(shape.to_vec()));
        }
        let found = count_placeholders(pattern);
        if found != shape.len() {
            return Err(ExprError::PlaceholderMismatch {
                pattern: pattern.to_string(),
                expected: shape.len(),
                found,
            });
        }
        let total: usize = shape.iter().product();
        let names: Vec<String> = (0..total)
            .map(|flat| fill_pattern(pattern, &unravel(flat, shape)))
            .collect();
        // Validate the whole batch before registering anything.
        let mut fresh = BTreeSet::new();
        for name in &names {
            if self.ids.contains_key(name) || !fresh.insert(name.as_str()) {
                return Err(ExprError::DuplicateName(name.clone()));
            }
        }
        let elements = names
            .iter()
            .map(|name| self.var(name))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VarArray {
            shape: shape.to_vec(),
            pattern: pattern.to_string(),
            elements,
        })
    }
}

pub(crate) fn count_placeholders(pattern: &str) -> usize {
    pattern.matches("{}").count()
}

pub(crate) fn fill_pattern(pattern: &str, index: &[usize]) -> String {
    let mut out = String::with_capacity(pattern.len() + 4 * index.len());
    let mut parts = pattern.split("{}");
    if let Some(first) = parts.next() {
        out.push_str(first);
    }
    for (part, i) in parts.zip(index) {
        out.push_str(&i.to_string());
        out.push_str(part);
    }
    out
}

pub(crate) fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut index = vec![0; shape.len()];
    for (slot, &extent) in index.iter_mut().zip(shape).rev() {
        *slot = flat % extent;
        flat /= extent;
    }
    index
}

/// A row-major grid of binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct VarArray {
    shape: Vec<usize>,
    pattern: String,
    elements: Vec<BinaryVar>,
}

impl VarArray {
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn elements(&self) -> &[BinaryVar] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, index: &[usize]) -> Option<&BinaryVar> {
        if index.len() != self.shape.len() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let flat = index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (i, n)| acc * n + i);
        self.elements.get(flat)
    }

    pub fn try_at(&self, index: &[usize]) -> Result<Polynomial, ExprError> {
        self.get(index)
            .map(BinaryVar::poly)
            .ok_or_else(|| ExprError::IndexOutOfBounds {
                index: index.to_vec(),
                shape: self.shape.clone(),
            })
    }

    /// Panics on an out-of-bounds index, like slice indexing.
    pub fn at(&self, index: &[usize]) -> Polynomial {
        self.try_at(index).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Sorted, duplicate-free product of variables. The empty monomial is the
/// constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<VarId>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial from any variable list, applying `x * x = x`.
    pub fn new(mut vars: Vec<VarId>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Monomial(vars)
    }

    /// Accepts only strictly ascending input.
    pub fn from_sorted(vars: Vec<VarId>) -> Option<Self> {
        vars.windows(2)
            .all(|w| w[0] < w[1])
            .then_some(Monomial(vars))
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Product of two monomials (sorted merge, duplicates collapse).
    pub fn product(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn is_satisfied_by(&self, assignment: &[u8]) -> bool {
        self.0.iter().all(|&v| assignment[v] != 0)
    }
}

/// Graded lexicographic: lower degree first, then by variable ids.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A reduced multilinear polynomial. Immutable in spirit: arithmetic returns
/// new values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.accumulate(Monomial::one(), c);
        p
    }

    pub fn var(id: VarId) -> Self {
        let mut p = Self::zero();
        p.accumulate(Monomial(vec![id]), 1.0);
        p
    }

    /// Sums arbitrary (monomial, coefficient) pairs; monomials are reduced.
    pub fn from_terms<I: IntoIterator<Item = (Vec<VarId>, f64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (vars, c) in terms {
            p.accumulate(Monomial::new(vars), c);
        }
        p
    }

    fn accumulate(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Terms in graded-lexicographic order, constant first when present.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Largest monomial length; 0 for constants.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Sorted ids of all variables that occur in some term.
    pub fn variables(&self) -> Vec<VarId> {
        let set: BTreeSet<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.terms.keys().filter_map(|m| m.0.last().copied()).max()
    }

    /// Evaluates on a bit vector indexed by variable id (nonzero = 1).
    pub fn evaluate(&self, assignment: &[u8]) -> Result<f64, ExprError> {
        if let Some(needed) = self.max_var() {
            if needed >= assignment.len() {
                return Err(ExprError::AssignmentTooShort {
                    len: assignment.len(),
                    needed,
                });
            }
        }
        Ok(self
            .terms
            .iter()
            .filter(|(m, _)| m.is_satisfied_by(assignment))
            .map(|(_, &c)| c)
            .sum())
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, &c) in &self.terms {
            p.accumulate(m.clone(), c * k);
        }
        p
    }

    /// `self ** exp`, with `p ** 0 = 1`.
    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::constant(1.0);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn checked_pow(&self, exp: i64) -> Result<Polynomial, ExprError> {
        let exp = u32::try_from(exp).map_err(|_| {
            ExprError::Unsupported(format!("exponent {exp} is not a non-negative integer"))
        })?;
        Ok(self.pow(exp))
    }

    /// Applies `f` to every variable id; the result is re-reduced.
    pub fn map_vars(&self, mut f: impl FnMut(VarId) -> VarId) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, &c) in &self.terms {
            p.accumulate(Monomial::new(m.0.iter().map(|&v| f(v)).collect()), c);
        }
        p
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1.0 {
                write!(f, "{mag}*")?;
            }
            let names: Vec<String> = m.0.iter().map(|v| format!("x{v}")).collect();
            write!(f, "{}", names.join("*"))?;
        }
        Ok(())
    }
}

/// Binary operators accepted by [`combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Poly(Polynomial),
    Int(i64),
}

/// Dynamic form of the arithmetic operators, used by the parser.
pub fn combine(lhs: &Polynomial, op: CombineOp, rhs: &Operand) -> Result<Polynomial, ExprError> {
    let rhs_poly = || match rhs {
        Operand::Poly(p) => p.clone(),
        Operand::Int(k) => Polynomial::constant(*k as f64),
    };
    match op {
        CombineOp::Add => Ok(lhs + &rhs_poly()),
        CombineOp::Sub => Ok(lhs - &rhs_poly()),
        CombineOp::Mul => Ok(lhs * &rhs_poly()),
        CombineOp::Pow => match rhs {
            Operand::Int(k) => lhs.checked_pow(*k),
            Operand::Poly(_) => Err(ExprError::Unsupported(
                "exponent must be a non-negative integer".into(),
            )),
        },
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.accumulate(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, &c) in &rhs.terms {
            self.accumulate(m.clone(), c);
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, &c) in &rhs.terms {
            self.accumulate(m.clone(), -c);
        }
    }
}

impl MulAssign<&Polynomial> for Polynomial {
    fn mul_assign(&mut self, rhs: &Polynomial) {
        *self = &*self * rhs;
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident $assign:ident $am:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial { (&self).$m(rhs) }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { self.$m(&rhs) }
        }
        impl $tr<f64> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: f64) -> Polynomial { (&self).$m(&Polynomial::constant(rhs)) }
        }
        impl $tr<f64> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: f64) -> Polynomial { self.$m(&Polynomial::constant(rhs)) }
        }
        impl $tr<Polynomial> for f64 {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&Polynomial::constant(self)).$m(&rhs) }
        }
        impl $tr<&Polynomial> for f64 {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial { (&Polynomial::constant(self)).$m(rhs) }
        }
        impl $assign<Polynomial> for Polynomial {
            fn $am(&mut self, rhs: Polynomial) { *self = (&*self).$m(&rhs); }
        }
        impl $assign<f64> for Polynomial {
            fn $am(&mut self, rhs: f64) { *self = (&*self).$m(&Polynomial::constant(rhs)); }
        }
    )*};
}

forward_owned!(Add add AddAssign add_assign, Sub sub SubAssign sub_assign, Mul mul MulAssign mul_assign);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::constant(1.0), |acc, p| acc * p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_assignments(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n).map(move |bits| (0..n).map(|i| ((bits >> i) & 1) as u8).collect())
    }

    #[test]
    fn var_array_names_and_ids() {
        let mut s = Symbols::new();
        let q = s.var_array(&[2, 2], "q{}_{}").unwrap();
        let names: Vec<_> = q
            .elements()
            .iter()
            .map(|v| (v.id, v.name.as_str()))
            .collect();
        assert_eq!(
            names,
            vec![(0, "q0_0"), (1, "q0_1"), (2, "q1_0"), (3, "q1_1")]
        );

        let z = s.var_array(&[1], "z{}").unwrap();
        assert_eq!(z.elements()[0].name, "z0");
        assert_eq!(z.elements()[0].id, 4);
    }

    #[test]
    fn var_array_three_by_four() {
        let mut s = Symbols::new();
        let q = s.var_array(&[3, 4], "q{}_{}").unwrap();
        assert_eq!(q.len(), 12);
        assert_eq!(q.elements().last().unwrap().name, "q2_3");
        assert_eq!(q.get(&[1, 2]).unwrap().name, "q1_2");
        assert!(q.get(&[3, 0]).is_none());
    }

    #[test]
    fn placeholder_mismatch_is_rejected() {
        let mut s = Symbols::new();
        let err = s.var_array(&[2, 2], "q{}").unwrap_err();
        assert!(matches!(
            err,
            ExprError::PlaceholderMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        assert!(s.is_empty());
        assert!(matches!(
            s.var_array(&[0], "q{}"),
            Err(ExprError::BadShape(_))
        ));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut s = Symbols::new();
        s.var_array(&[2], "q{}").unwrap();
        assert!(matches!(
            s.var_array(&[3], "q{}"),
            Err(ExprError::DuplicateName(_))
        ));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn idempotence() {
        let q0 = Polynomial::var(0);
        assert_eq!(&q0 * &q0, q0);
    }

    #[test]
    fn square_of_sum_matches_on_all_assignments() {
        let (q0, q1) = (Polynomial::var(0), Polynomial::var(1));
        let sq = (&q0 + &q1).pow(2);
        let expected = Polynomial::from_terms([(vec![0], 1.0), (vec![1], 1.0), (vec![0, 1], 2.0)]);
        assert_eq!(sq, expected);
        for x in all_assignments(2) {
            let direct = (x[0] as f64 + x[1] as f64).powi(2);
            assert_eq!(sq.evaluate(&x).unwrap(), direct);
        }
    }

    #[test]
    fn zeroth_power_is_one() {
        let p = Polynomial::var(3) * 5.0 - 2.0;
        assert_eq!(p.pow(0), Polynomial::constant(1.0));
        assert_eq!(Polynomial::zero().pow(0), Polynomial::constant(1.0));
    }

    #[test]
    fn negative_power_is_unsupported() {
        let p = Polynomial::var(0);
        assert!(matches!(p.checked_pow(-1), Err(ExprError::Unsupported(_))));
        assert!(matches!(
            combine(&p, CombineOp::Pow, &Operand::Int(-2)),
            Err(ExprError::Unsupported(_))
        ));
        assert!(matches!(
            combine(&p, CombineOp::Pow, &Operand::Poly(p.clone())),
            Err(ExprError::Unsupported(_))
        ));
        assert_eq!(combine(&p, CombineOp::Pow, &Operand::Int(3)).unwrap(), p);
    }

    #[test]
    fn cancellation_prunes_terms() {
        let q = Polynomial::var(0) * Polynomial::var(1);
        let z = &q - &q;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn degree_values() {
        assert_eq!(Polynomial::constant(5.0).degree(), 0);
        assert_eq!(Polynomial::zero().degree(), 0);
        let p = Polynomial::var(0) * Polynomial::var(2) + Polynomial::var(1);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn evaluate_rejects_short_assignment() {
        let p = Polynomial::var(4);
        assert_eq!(
            p.evaluate(&[1, 1]),
            Err(ExprError::AssignmentTooShort { len: 2, needed: 4 })
        );
        assert_eq!(Polynomial::constant(2.0).evaluate(&[]).unwrap(), 2.0);
    }

    #[test]
    fn monomial_order_is_graded() {
        let mut ms = vec![
            Monomial::new(vec![0, 1]),
            Monomial::new(vec![2]),
            Monomial::one(),
            Monomial::new(vec![0]),
        ];
        ms.sort();
        assert_eq!(
            ms,
            vec![
                Monomial::one(),
                Monomial::new(vec![0]),
                Monomial::new(vec![2]),
                Monomial::new(vec![0, 1])
            ]
        );
        assert!(Monomial::from_sorted(vec![1, 0]).is_none());
        assert!(Monomial::from_sorted(vec![1, 1]).is_none());
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::var(0) * 2.0 - Polynomial::var(0) * Polynomial::var(1) + 3.0;
        assert_eq!(p.to_string(), "3 + 2*x0 - x0*x1");
    }
}

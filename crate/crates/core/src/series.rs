//! Truncated power series on `d` branches, modelling the normalization
//! `k[[t_1]] x ... x k[[t_d]]` with `k = Q`.
//!
//! Every value carries its truncation explicitly. Binary operations truncate
//! to the componentwise minimum of their operands.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficients.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("branch count mismatch: {0} vs {1}")]
    BranchMismatch(usize, usize),
    #[error("branch {branch} is not a unit (valuation {valuation})")]
    NotAUnit { branch: usize, valuation: String },
    #[error("constant term {value} on branch {branch} has no rational {n}-th root")]
    NoRationalRoot {
        branch: usize,
        value: String,
        n: u32,
    },
    #[error("root index must be positive")]
    ZeroRootIndex,
    #[error("series must have at least one branch")]
    NoBranches,
}

/// A point of `N^d`: houses `n`, `c`, `1`, `1_I`, `e_i` and friends.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<u64>);

impl MultiIndex {
    pub fn new(entries: Vec<u64>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn filled(d: usize, value: u64) -> Self {
        MultiIndex(vec![value; d])
    }

    pub fn ones(d: usize) -> Self {
        Self::filled(d, 1)
    }

    /// `e_i`, zero-based `i`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        MultiIndex(v)
    }

    /// `1_I` for the branch subset encoded by the low `d` bits of `mask`.
    pub fn indicator(d: usize, mask: usize) -> Self {
        MultiIndex((0..d).map(|i| ((mask >> i) & 1) as u64).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    /// `||n|| = n_1 + ... + n_d`.
    pub fn norm(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Product order: `self <= other` iff every entry is `<=`.
    pub fn dominated_by(&self, other: &MultiIndex) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict on every coordinate.
    pub fn lt_all(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_scalar(&self, k: u64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a + k).collect())
    }

    pub fn scale(&self, k: u64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn meet(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn with(&self, i: usize, value: u64) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] = value;
        MultiIndex(v)
    }

    pub fn as_signed(&self) -> Vec<i64> {
        self.0.iter().map(|&a| a as i64).collect()
    }

    /// Comma-joined entries, e.g. `"2,2"`.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Index<usize> for MultiIndex {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl From<Vec<u64>> for MultiIndex {
    fn from(v: Vec<u64>) -> Self {
        MultiIndex(v)
    }
}

/// All points of the box `[lo, hi]` in lexicographic order. Empty if `lo` is
/// not below `hi`.
pub fn box_points(lo: &MultiIndex, hi: &MultiIndex) -> Vec<MultiIndex> {
    let d = lo.dim();
    if !lo.dominated_by(hi) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.clone().into_entries();
    loop {
        out.push(MultiIndex(cur.clone()));
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for j in i + 1..d {
                    cur[j] = lo[j];
                }
                break;
            }
        }
    }
}

/// Per-branch valuation; `Infinite` means zero up to truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// An element `(z_1, ..., z_d)` of the truncated normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesElement {
    branches: Vec<BTreeMap<u64, Rational>>,
    truncation: MultiIndex,
}

impl SeriesElement {
    pub fn zero(truncation: MultiIndex) -> Self {
        SeriesElement {
            branches: vec![BTreeMap::new(); truncation.dim()],
            truncation,
        }
    }

    pub fn constant(value: Rational, truncation: MultiIndex) -> Self {
        let branches = (0..truncation.dim())
            .map(|_| {
                let mut m = BTreeMap::new();
                if !value.is_zero() {
                    m.insert(0, value.clone());
                }
                m
            })
            .collect();
        SeriesElement {
            branches,
            truncation,
        }
    }

    pub fn one(truncation: MultiIndex) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    /// Builds from per-branch `(exponent, coefficient)` lists. Repeated
    /// exponents are summed; terms beyond the truncation are dropped.
    pub fn from_terms(
        branches: Vec<Vec<(u64, Rational)>>,
        truncation: MultiIndex,
    ) -> Result<Self, SeriesError> {
        if branches.len() != truncation.dim() {
            return Err(SeriesError::BranchMismatch(
                branches.len(),
                truncation.dim(),
            ));
        }
        let branches = branches
            .into_iter()
            .enumerate()
            .map(|(i, terms)| {
                let mut m: BTreeMap<u64, Rational> = BTreeMap::new();
                for (e, c) in terms {
                    if e <= truncation[i] {
                        *m.entry(e).or_insert_with(Rational::zero) += c;
                    }
                }
                m.retain(|_, c| !c.is_zero());
                m
            })
            .collect();
        Ok(SeriesElement {
            branches,
            truncation,
        })
    }

    fn from_dense(dense: Vec<Vec<Rational>>, truncation: MultiIndex) -> Self {
        let branches = dense
            .into_iter()
            .map(|coeffs| {
                coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (e as u64, c))
                    .collect()
            })
            .collect();
        SeriesElement {
            branches,
            truncation,
        }
    }

    fn dense_branch(&self, i: usize, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (&e, c) in &self.branches[i] {
            if (e as usize) < len {
                v[e as usize] = c.clone();
            }
        }
        v
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn truncation(&self) -> &MultiIndex {
        &self.truncation
    }

    pub fn branch(&self, i: usize) -> &BTreeMap<u64, Rational> {
        &self.branches[i]
    }

    pub fn coefficient(&self, branch: usize, exponent: u64) -> Rational {
        self.branches[branch]
            .get(&exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(|b| b.is_empty())
    }

    /// Restricts to a smaller truncation (componentwise min with `truncation`).
    pub fn truncate(&self, truncation: &MultiIndex) -> SeriesElement {
        let truncation = self.truncation.meet(truncation);
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| {
                b.iter()
                    .filter(|(e, _)| **e <= truncation[i])
                    .map(|(e, c)| (*e, c.clone()))
                    .collect()
            })
            .collect();
        SeriesElement {
            branches,
            truncation,
        }
    }

    fn check_same_d(&self, other: &SeriesElement) -> Result<(), SeriesError> {
        if self.branch_count() != other.branch_count() {
            return Err(SeriesError::BranchMismatch(
                self.branch_count(),
                other.branch_count(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &SeriesElement) -> Result<SeriesElement, SeriesError> {
        self.check_same_d(other)?;
        let truncation = self.truncation.meet(&other.truncation);
        let mut out = self.truncate(&truncation);
        for (i, b) in other.branches.iter().enumerate() {
            for (e, c) in b {
                if *e > truncation[i] {
                    continue;
                }
                let slot = out.branches[i].entry(*e).or_insert_with(Rational::zero);
                *slot += c;
                if slot.is_zero() {
                    out.branches[i].remove(e);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> SeriesElement {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &SeriesElement) -> Result<SeriesElement, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> SeriesElement {
        if k.is_zero() {
            return SeriesElement::zero(self.truncation.clone());
        }
        SeriesElement {
            branches: self
                .branches
                .iter()
                .map(|b| b.iter().map(|(e, c)| (*e, c * k)).collect())
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    /// Branchwise Cauchy product.
    pub fn mul(&self, other: &SeriesElement) -> Result<SeriesElement, SeriesError> {
        self.check_same_d(other)?;
        let truncation = self.truncation.meet(&other.truncation);
        let branches = (0..self.branch_count())
            .map(|i| {
                let limit = truncation[i];
                let mut m: BTreeMap<u64, Rational> = BTreeMap::new();
                for (ea, ca) in &self.branches[i] {
                    if *ea > limit {
                        break;
                    }
                    for (eb, cb) in &other.branches[i] {
                        let e = ea + eb;
                        if e > limit {
                            break;
                        }
                        *m.entry(e).or_insert_with(Rational::zero) += ca * cb;
                    }
                }
                m.retain(|_, c| !c.is_zero());
                m
            })
            .collect();
        Ok(SeriesElement {
            branches,
            truncation,
        })
    }

    pub fn pow(&self, k: u32) -> SeriesElement {
        let mut acc = SeriesElement::one(self.truncation.clone());
        for _ in 0..k {
            acc = acc.mul(self).expect("same branch count");
        }
        acc
    }

    /// `v(z) = (v_1(z_1), ..., v_d(z_d))`.
    pub fn valuation(&self) -> Vec<Valuation> {
        self.branches
            .iter()
            .map(|b| match b.keys().next() {
                Some(e) => Valuation::Finite(*e),
                None => Valuation::Infinite,
            })
            .collect()
    }

    fn require_unit(&self) -> Result<(), SeriesError> {
        for (i, v) in self.valuation().into_iter().enumerate() {
            if v != Valuation::Finite(0) {
                return Err(SeriesError::NotAUnit {
                    branch: i,
                    valuation: v.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Multiplicative inverse of a unit of the normalization.
    pub fn invert_unit(&self) -> Result<SeriesElement, SeriesError> {
        self.require_unit()?;
        let dense = (0..self.branch_count())
            .map(|i| {
                let len = self.truncation[i] as usize + 1;
                invert_dense(&self.dense_branch(i, len))
            })
            .collect();
        Ok(SeriesElement::from_dense(dense, self.truncation.clone()))
    }

    /// The `n`-th root whose constant term is the principal rational root,
    /// computed branchwise by Newton iteration.
    pub fn nth_root(&self, n: u32) -> Result<SeriesElement, SeriesError> {
        if n == 0 {
            return Err(SeriesError::ZeroRootIndex);
        }
        self.require_unit()?;
        let mut dense = Vec::with_capacity(self.branch_count());
        for i in 0..self.branch_count() {
            let len = self.truncation[i] as usize + 1;
            let a = self.dense_branch(i, len);
            let r0 = rational_nth_root(&a[0], n).ok_or_else(|| SeriesError::NoRationalRoot {
                branch: i,
                value: a[0].to_string(),
                n,
            })?;
            dense.push(newton_root_dense(&a, n, r0));
        }
        Ok(SeriesElement::from_dense(dense, self.truncation.clone()))
    }
}

impl fmt::Display for SeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .branches
            .iter()
            .map(|b| {
                if b.is_empty() {
                    return "0".to_string();
                }
                b.iter()
                    .map(|(e, c)| format!("{c}*t^{e}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect();
        write!(
            f,
            "[{}] mod t^{}",
            parts.join("; "),
            self.truncation.add_scalar(1)
        )
    }
}

fn mul_dense(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn invert_dense(a: &[Rational]) -> Vec<Rational> {
    let len = a.len();
    let mut b = vec![Rational::zero(); len];
    let inv0 = a[0].recip();
    b[0] = inv0.clone();
    for k in 1..len {
        let mut s = Rational::zero();
        for j in 1..=k {
            if !a[j].is_zero() {
                s += &a[j] * &b[k - j];
            }
        }
        b[k] = -s * &inv0;
    }
    b
}

fn pow_dense(a: &[Rational], k: u32, len: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); len];
    acc[0] = Rational::one();
    for _ in 0..k {
        acc = mul_dense(&acc, a, len);
    }
    acc
}

/// Newton step `b <- b - (b^n - a) / (n b^{n-1})`, doubling precision.
fn newton_root_dense(a: &[Rational], n: u32, r0: Rational) -> Vec<Rational> {
    let len = a.len();
    let mut b = vec![r0];
    let mut prec = 1usize;
    while prec < len {
        prec = (2 * prec).min(len);
        b.resize(prec, Rational::zero());
        let b_pow = pow_dense(&b, n - 1, prec);
        let b_n = mul_dense(&b_pow, &b, prec);
        let residual: Vec<Rational> = b_n
            .iter()
            .zip(a.iter().take(prec))
            .map(|(x, y)| x - y)
            .collect();
        let denom: Vec<Rational> = b_pow
            .iter()
            .map(|x| x * Rational::from_integer(BigInt::from(n)))
            .collect();
        let correction = mul_dense(&residual, &invert_dense(&denom), prec);
        for (bi, ci) in b.iter_mut().zip(correction) {
            *bi -= ci;
        }
    }
    b.truncate(len);
    b
}

/// Exact principal `n`-th root of a rational, if it exists.
pub fn rational_nth_root(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_zero() {
        return Some(Rational::zero());
    }
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root_int = |v: &BigInt| -> Option<BigInt> {
        let r = v.abs().nth_root(n);
        if num_traits::pow(r.clone(), n as usize) == v.abs() {
            Some(if v.is_negative() { -r } else { r })
        } else {
            None
        }
    };
    let num = root_int(x.numer())?;
    let den = root_int(x.denom())?;
    Some(Rational::new(num, den))
}

/// A series given symbolically on one branch, so it can be re-evaluated at
/// any truncation (needed when precision is doubled).
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesExpr {
    Poly(Vec<(u64, Rational)>),
    Add(Vec<SeriesExpr>),
    Mul(Vec<SeriesExpr>),
    Inverse(Box<SeriesExpr>),
    Root(u32, Box<SeriesExpr>),
}

impl SeriesExpr {
    pub fn monomial(exponent: u64, coeff: i64) -> Self {
        SeriesExpr::Poly(vec![(exponent, Rational::from_integer(coeff.into()))])
    }

    /// Evaluates as a one-branch series truncated at `truncation`.
    pub fn eval(&self, truncation: u64) -> Result<SeriesElement, SeriesError> {
        let t = MultiIndex::new(vec![truncation]);
        match self {
            SeriesExpr::Poly(terms) => SeriesElement::from_terms(vec![terms.clone()], t),
            SeriesExpr::Add(items) => items.iter().try_fold(SeriesElement::zero(t), |acc, e| {
                acc.add(&e.eval(truncation)?)
            }),
            SeriesExpr::Mul(items) => items.iter().try_fold(SeriesElement::one(t), |acc, e| {
                acc.mul(&e.eval(truncation)?)
            }),
            SeriesExpr::Inverse(inner) => inner.eval(truncation)?.invert_unit(),
            SeriesExpr::Root(n, inner) => inner.eval(truncation)?.nth_root(*n),
        }
    }
}

/// An element of the normalization given branch by branch as expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementSpec(pub Vec<SeriesExpr>);

impl ElementSpec {
    pub fn branch_count(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, truncation: &MultiIndex) -> Result<SeriesElement, SeriesError> {
        if self.0.is_empty() {
            return Err(SeriesError::NoBranches);
        }
        if self.0.len() != truncation.dim() {
            return Err(SeriesError::BranchMismatch(self.0.len(), truncation.dim()));
        }
        let mut branches = Vec::with_capacity(self.0.len());
        for (i, e) in self.0.iter().enumerate() {
            let s = e.eval(truncation[i])?;
            branches.push(s.branches.into_iter().next().unwrap_or_default());
        }
        Ok(SeriesElement {
            branches,
            truncation: truncation.clone(),
        })
    }

    /// Treats an already-built series as an exact polynomial.
    pub fn from_series(s: &SeriesElement) -> Self {
        ElementSpec(
            s.branches
                .iter()
                .map(|b| SeriesExpr::Poly(b.iter().map(|(e, c)| (*e, c.clone())).collect()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn uni(terms: &[(u64, i64)], n: u64) -> SeriesElement {
        SeriesElement::from_terms(
            vec![terms.iter().map(|&(e, c)| (e, q(c, 1))).collect()],
            MultiIndex::new(vec![n]),
        )
        .unwrap()
    }

    #[test]
    fn add_examples() {
        assert!(uni(&[(1, 1)], 6)
            .add(&uni(&[(1, -1)], 6))
            .unwrap()
            .is_zero());
        let s = uni(&[(0, 1), (2, 1)], 6).add(&uni(&[(1, 1)], 6)).unwrap();
        assert_eq!(s, uni(&[(0, 1), (1, 1), (2, 1)], 6));
        let t = MultiIndex::new(vec![5, 5]);
        let a = SeriesElement::from_terms(vec![vec![(1, q(1, 1))], vec![]], t.clone()).unwrap();
        let b = SeriesElement::from_terms(vec![vec![], vec![(1, q(1, 1))]], t.clone()).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(
            s.valuation(),
            vec![Valuation::Finite(1), Valuation::Finite(1)]
        );
    }

    #[test]
    fn add_truncates_to_min() {
        let s = uni(&[(3, 1)], 6).add(&uni(&[(0, 1)], 2)).unwrap();
        assert_eq!(s.truncation().entries(), &[2]);
        assert_eq!(s, uni(&[(0, 1)], 2));
    }

    #[test]
    fn branch_mismatch_is_an_error() {
        let a = uni(&[(0, 1)], 3);
        let b = SeriesElement::one(MultiIndex::new(vec![3, 3]));
        assert_eq!(a.add(&b), Err(SeriesError::BranchMismatch(1, 2)));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn mul_examples() {
        let p = uni(&[(2, 1)], 10).mul(&uni(&[(3, 1)], 10)).unwrap();
        assert_eq!(p, uni(&[(5, 1)], 10));
        assert_eq!(p.valuation(), vec![Valuation::Finite(5)]);

        let n = 7;
        let geom: Vec<(u64, i64)> = (0..=n).map(|e| (e, 1)).collect();
        let p = uni(&[(0, 1), (1, -1)], n).mul(&uni(&geom, n)).unwrap();
        assert_eq!(p, uni(&[(0, 1)], n));

        let t = MultiIndex::new(vec![4, 4]);
        let a = SeriesElement::from_terms(vec![vec![(1, q(1, 1))], vec![(0, q(1, 1))]], t.clone())
            .unwrap();
        let b = SeriesElement::from_terms(vec![vec![(0, q(1, 1))], vec![(1, q(1, 1))]], t.clone())
            .unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(
            p.valuation(),
            vec![Valuation::Finite(1), Valuation::Finite(1)]
        );
        assert_eq!(p.coefficient(0, 1), q(1, 1));
        assert_eq!(p.coefficient(1, 1), q(1, 1));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(
            uni(&[(2, 1), (3, 1)], 5).valuation(),
            vec![Valuation::Finite(2)]
        );
        let z = SeriesElement::zero(MultiIndex::new(vec![3, 3]));
        assert_eq!(
            z.valuation(),
            vec![Valuation::Infinite, Valuation::Infinite]
        );
    }

    #[test]
    fn invert_examples() {
        let a = uni(&[(0, 1), (1, 1)], 8);
        let b = a.invert_unit().unwrap();
        for e in 0..=8u64 {
            let sign = if e % 2 == 0 { 1 } else { -1 };
            assert_eq!(b.coefficient(0, e), q(sign, 1));
        }
        assert_eq!(
            a.mul(&b).unwrap(),
            SeriesElement::one(MultiIndex::new(vec![8]))
        );

        let two = SeriesElement::constant(q(2, 1), MultiIndex::new(vec![4]));
        assert_eq!(
            two.invert_unit().unwrap(),
            SeriesElement::constant(q(1, 2), MultiIndex::new(vec![4]))
        );

        let t = MultiIndex::new(vec![6, 6]);
        let a = SeriesElement::from_terms(
            vec![vec![(0, q(1, 1)), (1, q(1, 1))], vec![(0, q(1, 1))]],
            t.clone(),
        )
        .unwrap();
        let b = a.invert_unit().unwrap();
        assert_eq!(a.mul(&b).unwrap(), SeriesElement::one(t));
        assert_eq!(b.coefficient(0, 3), q(-1, 1));
        assert_eq!(b.branch(1).len(), 1);
    }

    #[test]
    fn invert_rejects_non_units() {
        let err = uni(&[(1, 1)], 4).invert_unit().unwrap_err();
        assert!(matches!(err, SeriesError::NotAUnit { branch: 0, .. }));
    }

    #[test]
    fn sqrt_of_one_minus_t() {
        let n = 10;
        let a = uni(&[(0, 1), (1, -1)], n);
        let r = a.nth_root(2).unwrap();
        // binomial series (1 - t)^{1/2}
        assert_eq!(r.coefficient(0, 0), q(1, 1));
        assert_eq!(r.coefficient(0, 1), q(-1, 2));
        assert_eq!(r.coefficient(0, 2), q(-1, 8));
        assert_eq!(r.coefficient(0, 3), q(-1, 16));
        assert_eq!(r.coefficient(0, 4), q(-5, 128));
        assert_eq!(r.mul(&r).unwrap(), a);
    }

    #[test]
    fn root_round_trips() {
        assert_eq!(
            SeriesElement::one(MultiIndex::new(vec![5]))
                .nth_root(2)
                .unwrap(),
            SeriesElement::one(MultiIndex::new(vec![5]))
        );
        let base = uni(&[(0, 1), (1, 1)], 9);
        let cube = base.pow(3);
        assert_eq!(cube.nth_root(3).unwrap(), base);
        let nine = SeriesElement::constant(q(9, 4), MultiIndex::new(vec![3]));
        assert_eq!(nine.nth_root(2).unwrap().coefficient(0, 0), q(3, 2));
        let neg = SeriesElement::constant(q(-8, 1), MultiIndex::new(vec![3]));
        assert_eq!(neg.nth_root(3).unwrap().coefficient(0, 0), q(-2, 1));
    }

    #[test]
    fn root_errors() {
        assert!(matches!(
            uni(&[(0, 2)], 3).nth_root(2),
            Err(SeriesError::NoRationalRoot { .. })
        ));
        assert!(matches!(
            uni(&[(0, -1)], 3).nth_root(2),
            Err(SeriesError::NoRationalRoot { .. })
        ));
        assert!(matches!(
            uni(&[(1, 1)], 3).nth_root(2),
            Err(SeriesError::NotAUnit { .. })
        ));
        assert_eq!(
            uni(&[(0, 1)], 3).nth_root(0),
            Err(SeriesError::ZeroRootIndex)
        );
    }

    #[test]
    fn expressions_evaluate_at_any_truncation() {
        // x^2 sqrt(1 - x) on one branch
        let e = SeriesExpr::Mul(vec![
            SeriesExpr::monomial(2, 1),
            SeriesExpr::Root(
                2,
                Box::new(SeriesExpr::Poly(vec![(0, q(1, 1)), (1, q(-1, 1))])),
            ),
        ]);
        let s6 = e.eval(6).unwrap();
        let s12 = e.eval(12).unwrap();
        assert_eq!(s6.valuation(), vec![Valuation::Finite(2)]);
        assert_eq!(s12.truncate(&MultiIndex::new(vec![6])), s6);
        let neg = ElementSpec(vec![
            e.clone(),
            SeriesExpr::Mul(vec![SeriesExpr::monomial(0, -1), e]),
        ]);
        let v = neg.eval(&MultiIndex::new(vec![8, 8])).unwrap();
        assert_eq!(v.valuation()[1], Valuation::Finite(2));
        assert_eq!(v.coefficient(1, 2), q(-1, 1));
    }

    #[test]
    fn box_points_enumerates_lexicographically() {
        let pts = box_points(&MultiIndex::zeros(2), &MultiIndex::new(vec![1, 2]));
        let keys: Vec<String> = pts.iter().map(|p| p.key()).collect();
        assert_eq!(keys, ["0,0", "0,1", "0,2", "1,0", "1,1", "1,2"]);
        assert!(box_points(&MultiIndex::ones(1), &MultiIndex::zeros(1)).is_empty());
    }

    fn arb_series(n: u64) -> impl Strategy<Value = SeriesElement> {
        prop::collection::vec(prop::collection::vec((0..=n, -4i64..=4), 0..5), 2).prop_map(
            move |branches| {
                SeriesElement::from_terms(
                    branches
                        .into_iter()
                        .map(|b| b.into_iter().map(|(e, c)| (e, q(c, 1))).collect())
                        .collect(),
                    MultiIndex::new(vec![n, n]),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn valuation_is_additive(a in arb_series(12), b in arb_series(12)) {
            let p = a.mul(&b).unwrap();
            for i in 0..2 {
                if let (Valuation::Finite(x), Valuation::Finite(y)) = (a.valuation()[i], b.valuation()[i]) {
                    if x + y <= 12 {
                        prop_assert_eq!(p.valuation()[i], Valuation::Finite(x + y));
                    }
                }
            }
        }

        #[test]
        fn inverse_and_root_round_trip(tail in prop::collection::vec((1u64..=7, -3i64..=3), 0..4), k in 1u32..4) {
            let mut terms: Vec<(u64, Rational)> = tail.into_iter().map(|(e, c)| (e, q(c, 1))).collect();
            terms.push((0, q(1, 1)));
            let a = SeriesElement::from_terms(vec![terms], MultiIndex::new(vec![7])).unwrap();
            let one = SeriesElement::one(MultiIndex::new(vec![7]));
            prop_assert_eq!(a.mul(&a.invert_unit().unwrap()).unwrap(), one);
            prop_assert_eq!(a.nth_root(k).unwrap().pow(k), a);
        }
    }
}

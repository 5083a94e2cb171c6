//! Brute-force cross-checks: the defining series summed term by term, the
//! Taylor expansion of a closed form, and point counts over prime fields.

use rayon::prelude::*;
use thiserror::Error;

use crate::localring::LocalRingModel;
use crate::motivic::{class_j, DivisionError, TPoly, UPoly, ZetaForm};
use crate::series::{box_points, MultiIndex, Rational};
use crate::valuesemigroup::{HLabel, SemigroupData};
use crate::zeta::assemble::class_at;
use crate::zeta::checks::Outcome;

/// Largest `#(Õ/F)^×` enumerated by the finite-field counter.
pub const ENUMERATION_BUDGET: u64 = 2_000_000;

/// A polynomial in `T` truncated at total degree `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTPoly {
    bound: u64,
    poly: TPoly,
}

impl TruncatedTPoly {
    pub fn new(poly: &TPoly, bound: u64) -> Self {
        TruncatedTPoly {
            bound,
            poly: TPoly::from_terms(
                poly.d(),
                poly.terms()
                    .iter()
                    .filter(|(m, _)| m.norm() <= bound)
                    .map(|(m, c)| (m.clone(), c.clone())),
            ),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn poly(&self) -> &TPoly {
        &self.poly
    }

    fn mul(&self, other: &TruncatedTPoly) -> TruncatedTPoly {
        TruncatedTPoly::new(&self.poly.mul(&other.poly), self.bound.min(other.bound))
    }
}

/// All `n ∈ N^d` with `||n|| <= bound`.
fn simplex(d: usize, bound: u64) -> Vec<MultiIndex> {
    box_points(&MultiIndex::zeros(d), &MultiIndex::filled(d, bound))
        .into_iter()
        .filter(|n| n.norm() <= bound)
        .collect()
}

/// `sum_{n ∈ S, ||n|| <= D} [I_n] U^{-||n||} T^n`, with classes resolved
/// through the stratum of each `n`.
pub fn series_sum_oracle(s: &SemigroupData, bound: u64) -> Result<TruncatedTPoly, DivisionError> {
    let d = s.d();
    let mut terms = Vec::new();
    for n in simplex(d, bound) {
        if !s.contains(&n) {
            continue;
        }
        let class = match s.label(&n) {
            HLabel::Conductor => class_j(s.delta(), d),
            HLabel::Stratum { j, m } => {
                class_at(s, &crate::valuesemigroup::f_j(s.conductor(), &j, &m))?
            }
            HLabel::Under => class_at(s, &n)?,
        };
        let norm = n.norm() as i64;
        terms.push((n, class.shift(-norm)));
    }
    Ok(TruncatedTPoly::new(&TPoly::from_terms(d, terms), bound))
}

/// Expands every `1/(1 - U^-1 T_i)` as a geometric series up to degree `D`.
pub fn taylor_expand(z: &ZetaForm, bound: u64) -> TruncatedTPoly {
    let d = z.d();
    let mut out = TruncatedTPoly::new(z.numerator(), bound);
    for (i, &e) in z.denominator().iter().enumerate() {
        let geometric = TPoly::from_terms(
            d,
            (0..=bound).map(|k| (MultiIndex::unit(d, i).scale(k), UPoly::u_pow(-(k as i64)))),
        );
        let geometric = TruncatedTPoly::new(&geometric, bound);
        for _ in 0..e {
            out = out.mul(&geometric);
        }
    }
    out
}

/// Exact comparison; the witness names the first differing coefficient.
pub fn compare(a: &TruncatedTPoly, b: &TruncatedTPoly) -> Outcome {
    if a.bound != b.bound {
        return Err(format!("degree bounds differ: {} vs {}", a.bound, b.bound));
    }
    let diff = a.poly.sub(&b.poly);
    match diff.terms().keys().next() {
        None => Ok(()),
        Some(m) => Err(format!(
            "coefficient of T^{m}: {} vs {}",
            a.poly.coefficient(m),
            b.poly.coefficient(m)
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteFieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} is smaller than the conductor entry {c}")]
    PrimeTooSmall { p: u64, c: u64 },
    #[error("p = {0} divides a denominator of the ring basis")]
    BadReduction(u64),
    #[error("reduction mod {p} has dimension {got}, expected {expected}")]
    RankDrop { p: u64, got: usize, expected: usize },
    #[error("reduction mod {0} is not closed under multiplication")]
    NotARing(u64),
    #[error("enumeration of {size} units exceeds the budget {budget}")]
    BudgetExceeded { size: u64, budget: u64 },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

fn reduce_rational(x: &Rational, p: u64) -> Option<u64> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let num: u64 = num.try_into().expect("residue fits");
    let den: u64 = den.try_into().expect("residue fits");
    (den != 0).then(|| num * inv_mod(den, p) % p)
}

/// `O/F` over `F_p`, as a subspace of `Õ/F = prod_i F_p[t]/t^{c_i}`.
#[derive(Clone, Debug)]
pub struct FiniteFieldRing {
    p: u64,
    conductor: MultiIndex,
    delta: u64,
    /// `(branch, exponent)` with `exponent < c_branch`, graded order
    coords: Vec<(usize, u64)>,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FiniteFieldRing {
    pub fn from_model(model: &LocalRingModel, p: u64) -> Result<Self, FiniteFieldError> {
        if !is_prime(p) {
            return Err(FiniteFieldError::NotPrime(p));
        }
        let c = model.conductor().clone();
        if let Some(&ci) = c.entries().iter().find(|&&ci| ci > p) {
            return Err(FiniteFieldError::PrimeTooSmall { p, c: ci });
        }
        let jets = model.jets();
        let columns: Vec<usize> = jets.coords.below(&c);
        let coords: Vec<(usize, u64)> =
            columns.iter().map(|&k| jets.coords.coordinate(k)).collect();
        let mut ring = FiniteFieldRing {
            p,
            conductor: c.clone(),
            delta: model.delta(),
            coords,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for row in jets.basis.rows() {
            let mut v = Vec::with_capacity(columns.len());
            for &k in &columns {
                v.push(reduce_rational(&row[k], p).ok_or(FiniteFieldError::BadReduction(p))?);
            }
            ring.insert(v);
        }
        let expected = (c.norm() - model.delta()) as usize;
        if ring.rows.len() != expected {
            return Err(FiniteFieldError::RankDrop {
                p,
                got: ring.rows.len(),
                expected,
            });
        }
        let basis = ring.rows.clone();
        for (a, x) in basis.iter().enumerate() {
            for y in &basis[a..] {
                if !ring.contains(&ring.mul(x, y)) {
                    return Err(FiniteFieldError::NotARing(p));
                }
            }
        }
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn len(&self) -> usize {
        self.coords.len()
    }

    fn position(&self, branch: usize, exponent: u64) -> Option<usize> {
        self.coords.iter().position(|&x| x == (branch, exponent))
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let f = v[piv];
            if f == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        v
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    fn insert(&mut self, v: Vec<u64>) {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = inv_mod(v[piv], p);
        v.iter_mut().for_each(|x| *x = *x * inv % p);
        for row in &mut self.rows {
            let f = row[piv];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
    }

    /// Product in `Õ/F`.
    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.len()];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let (i, e) = self.coords[a];
            for (b, &yb) in y.iter().enumerate() {
                let (j, f) = self.coords[b];
                if yb == 0 || i != j {
                    continue;
                }
                if let Some(k) = self.position(i, e + f) {
                    out[k] = (out[k] + xa * yb) % self.p;
                }
            }
        }
        out
    }

    /// `t^n μ` in `Õ/F`.
    fn shift(&self, mu: &[u64], n: &MultiIndex) -> Vec<u64> {
        let mut out = vec![0; self.len()];
        for (a, &x) in mu.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (i, e) = self.coords[a];
            if let Some(k) = self.position(i, e + n[i]) {
                out[k] = x;
            }
        }
        out
    }

    /// `#(Õ/F)^×`.
    pub fn ambient_units(&self) -> u64 {
        let p = self.p;
        self.conductor
            .entries()
            .iter()
            .filter(|&&ci| ci > 0)
            .map(|&ci| (p - 1) * p.pow(ci as u32 - 1))
            .product()
    }

    fn check_budget(&self) -> Result<(), FiniteFieldError> {
        let size = self.ambient_units();
        if size > ENUMERATION_BUDGET {
            return Err(FiniteFieldError::BudgetExceeded {
                size,
                budget: ENUMERATION_BUDGET,
            });
        }
        Ok(())
    }

    /// Decodes the `k`-th unit of `Õ/F` in mixed radix: constant terms run
    /// over `1..p`, higher coefficients over `0..p`.
    fn unit_from_index(&self, mut k: u64) -> Vec<u64> {
        let p = self.p;
        self.coords
            .iter()
            .map(|&(_, e)| {
                if e == 0 {
                    let digit = k % (p - 1);
                    k /= p - 1;
                    digit + 1
                } else {
                    let digit = k % p;
                    k /= p;
                    digit
                }
            })
            .collect()
    }

    /// `#(O/F)^×` by enumerating `O/F`.
    pub fn ring_units(&self) -> Result<u64, FiniteFieldError> {
        let total = self.p.pow(self.dim() as u32);
        if total > ENUMERATION_BUDGET {
            return Err(FiniteFieldError::BudgetExceeded {
                size: total,
                budget: ENUMERATION_BUDGET,
            });
        }
        let constants: Vec<usize> = (0..self.len()).filter(|&a| self.coords[a].1 == 0).collect();
        let count = (0..total)
            .into_par_iter()
            .filter(|&k| {
                let mut v = vec![0u64; self.len()];
                let mut k = k;
                for row in &self.rows {
                    let digit = k % self.p;
                    k /= self.p;
                    for (x, y) in v.iter_mut().zip(row) {
                        *x = (*x + digit * y) % self.p;
                    }
                }
                constants.iter().all(|&a| v[a] != 0)
            })
            .count();
        Ok(count as u64)
    }

    /// `#{μ ∈ (Õ/F)^× : t^n μ ∈ O/F}`.
    fn admissible_units(&self, n: &MultiIndex) -> Result<u64, FiniteFieldError> {
        self.check_budget()?;
        let count = (0..self.ambient_units())
            .into_par_iter()
            .filter(|&k| self.contains(&self.shift(&self.unit_from_index(k), n)))
            .count();
        Ok(count as u64)
    }

    /// `#(I_n)` over `F_p`: admissible units modulo `(O/F)^×`.
    pub fn ideal_count(&self, n: &MultiIndex) -> Result<u64, FiniteFieldError> {
        let units = self.ring_units()?;
        Ok(self.admissible_units(n)? / units)
    }

    /// `#J = #(Õ/F)^× / #(O/F)^×`.
    pub fn jacobian_count(&self) -> Result<u64, FiniteFieldError> {
        self.check_budget()?;
        Ok(self.ambient_units() / self.ring_units()?)
    }

    pub fn conductor(&self) -> &MultiIndex {
        &self.conductor
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }
}

/// Compares point counts with `I_n(p)` on the whole box and `#J` with
/// `(p - 1)^{d-1} p^{δ-d+1}`.
pub fn finite_field_check(
    model: &LocalRingModel,
    s: &SemigroupData,
    p: u64,
) -> Result<Outcome, FiniteFieldError> {
    let ring = FiniteFieldRing::from_model(model, p)?;
    let q = Rational::from_integer(p.into());
    let j = ring.jacobian_count()?;
    let expected_j = class_j(s.delta(), s.d()).eval(&q);
    if Rational::from_integer(j.into()) != expected_j {
        return Ok(Err(format!(
            "#J = {j} over F_{p}, closed form gives {expected_j}"
        )));
    }
    let top = s.conductor().add_scalar(1);
    for n in box_points(&MultiIndex::zeros(s.d()), &top) {
        let count = ring.ideal_count(&n)?;
        let expected = if s.contains(&n) {
            class_at(s, &n).expect("class of a member").eval(&q)
        } else {
            Rational::from_integer(0.into())
        };
        if Rational::from_integer(count.into()) != expected {
            return Ok(Err(format!(
                "n = {n}: #I_n = {count} over F_{p}, class gives {expected}"
            )));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::ConditionRow;
    use crate::series::{ElementSpec, SeriesExpr};
    use crate::zeta::assemble::universal_zeta;

    fn mi(v: &[u64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn cusp_model() -> LocalRingModel {
        let gens = vec![
            ElementSpec(vec![SeriesExpr::monomial(2, 1)]),
            ElementSpec(vec![SeriesExpr::monomial(3, 1)]),
        ];
        LocalRingModel::build_from_generators(&gens, &mi(&[8])).unwrap()
    }

    fn tacnode_quintic_model() -> LocalRingModel {
        let rows: Vec<ConditionRow> = vec![
            vec![(0, 0, q(1)), (1, 0, q(-1))],
            vec![(0, 1, q(1)), (1, 1, q(-1))],
        ];
        LocalRingModel::build_from_conditions(&rows, 2, &mi(&[8, 8])).unwrap()
    }

    #[test]
    fn series_sum_examples() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        let sum = series_sum_oracle(&cusp, 4).unwrap();
        let expected = TPoly::from_terms(
            1,
            [
                (mi(&[0]), UPoly::one()),
                (mi(&[2]), UPoly::u_pow(-1)),
                (mi(&[3]), UPoly::u_pow(-2)),
                (mi(&[4]), UPoly::u_pow(-3)),
            ],
        );
        assert_eq!(sum.poly(), &expected);
        assert_eq!(series_sum_oracle(&cusp, 0).unwrap().poly(), &TPoly::one(1));
        let z = universal_zeta(&cusp).unwrap();
        assert_eq!(compare(&taylor_expand(&z, 4), &sum), Ok(()));
    }

    #[test]
    fn taylor_examples() {
        let z = ZetaForm::new(TPoly::one(1), vec![1]);
        let t = taylor_expand(&z, 3);
        assert_eq!(t.poly().to_string(), "1 + U^-1 T + U^-2 T^2 + U^-3 T^3");
        assert!(taylor_expand(&ZetaForm::zero(1), 3).poly().is_zero());
    }

    #[test]
    fn node_series() {
        let node = SemigroupData::from_box(
            mi(&[1, 1]),
            &[
                mi(&[0, 0]),
                mi(&[1, 1]),
                mi(&[1, 2]),
                mi(&[2, 1]),
                mi(&[2, 2]),
            ],
        )
        .unwrap();
        let sum = series_sum_oracle(&node, 2).unwrap();
        assert_eq!(sum.poly().to_string(), "1 + (U^-1 - U^-2) T1 T2");
    }

    #[test]
    fn compare_reports_witness() {
        let a = TruncatedTPoly::new(&TPoly::one(1), 2);
        let b = TruncatedTPoly::new(
            &TPoly::monomial(UPoly::one(), mi(&[1])).add(&TPoly::one(1)),
            2,
        );
        assert_eq!(compare(&a, &a), Ok(()));
        assert!(compare(&a, &b).unwrap_err().contains("T^(1)"));
    }

    #[test]
    fn cusp_counts_mod_three() {
        let ring = FiniteFieldRing::from_model(&cusp_model(), 3).unwrap();
        assert_eq!(ring.ideal_count(&mi(&[2])).unwrap(), 3);
        assert_eq!(ring.ideal_count(&mi(&[1])).unwrap(), 0);
        assert_eq!(ring.jacobian_count().unwrap(), 3);
    }

    #[test]
    fn tacnode_quintic_counts_mod_three() {
        let ring = FiniteFieldRing::from_model(&tacnode_quintic_model(), 3).unwrap();
        assert_eq!(ring.ideal_count(&mi(&[1, 1])).unwrap(), 3);
        assert_eq!(ring.jacobian_count().unwrap(), 6);
    }

    #[test]
    fn finite_field_agrees_with_classes() {
        let m = tacnode_quintic_model();
        let s = m.semigroup_box().unwrap();
        for p in [3, 5, 7] {
            assert_eq!(finite_field_check(&m, &s, p).unwrap(), Ok(()));
        }
    }

    #[test]
    fn finite_field_errors() {
        assert_eq!(
            FiniteFieldRing::from_model(&cusp_model(), 4).unwrap_err(),
            FiniteFieldError::NotPrime(4)
        );
        let rows: Vec<ConditionRow> = vec![vec![(0, 0, q(1)), (1, 0, q(-1))]];
        let gens = vec![
            ElementSpec(vec![SeriesExpr::monomial(3, 1)]),
            ElementSpec(vec![SeriesExpr::monomial(4, 1)]),
        ];
        let s34 = LocalRingModel::build_from_generators(&gens, &mi(&[10])).unwrap();
        assert_eq!(
            FiniteFieldRing::from_model(&s34, 5).unwrap_err(),
            FiniteFieldError::PrimeTooSmall { p: 5, c: 6 }
        );
        let node = LocalRingModel::build_from_conditions(&rows, 2, &mi(&[6, 6])).unwrap();
        assert!(FiniteFieldRing::from_model(&node, 2).is_ok());
    }
}

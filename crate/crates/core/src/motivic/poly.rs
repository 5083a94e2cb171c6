use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use super::upoly::{join_signed, UPoly};
use crate::series::{MultiIndex, Rational};

/// Coefficient rings used for polynomials in `T_1..T_d`.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Signed magnitudes for display; `""` stands for 1.
    fn signed_terms(&self, symbol: &str) -> Vec<(bool, String)>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn pow(&self, k: u64) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl Coefficient for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::one()
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signed_terms(&self, symbol: &str) -> Vec<(bool, String)> {
        UPoly::signed_terms(self, symbol)
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signed_terms(&self, _symbol: &str) -> Vec<(bool, String)> {
        if Zero::is_zero(self) {
            return Vec::new();
        }
        let mag = self.abs();
        let text = if One::is_one(&mag) {
            String::new()
        } else {
            mag.to_string()
        };
        vec![(self.is_negative(), text)]
    }
}

/// A polynomial in `T_1..T_d` with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    d: usize,
    terms: BTreeMap<MultiIndex, C>,
}

/// Polynomials in `T` over `Z[U, U^-1]`.
pub type TPoly = Poly<UPoly>;

impl<C: Coefficient> Poly<C> {
    pub fn zero(d: usize) -> Self {
        Poly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, d: usize) -> Self {
        Self::monomial(c, MultiIndex::zeros(d))
    }

    pub fn one(d: usize) -> Self {
        Self::constant(C::one(), d)
    }

    pub fn monomial(c: C, exp: MultiIndex) -> Self {
        let mut p = Poly::zero(exp.dim());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, C)>>(d: usize, terms: I) -> Self {
        let mut p = Poly::zero(d);
        for (m, c) in terms {
            assert_eq!(m.dim(), d, "exponent dimension");
            p.add_term(m, c);
        }
        p
    }

    /// `1 - a T_i`.
    pub fn linear_factor(d: usize, i: usize, a: &C) -> Self {
        Self::from_terms(
            d,
            [
                (MultiIndex::zeros(d), C::one()),
                (MultiIndex::unit(d, i), a.neg()),
            ],
        )
    }

    pub fn add_term(&mut self, exp: MultiIndex, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                let sum = slot.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C> {
        &self.terms
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(MultiIndex::norm).max()
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> MultiIndex {
        self.terms
            .keys()
            .fold(MultiIndex::zeros(self.d), |acc, m| acc.join(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero(self.d);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.add(b), x.mul(y));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(self.d), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::from_terms(
            self.d,
            self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))),
        )
    }

    /// Multiplies by `T^m`.
    pub fn shift(&self, m: &MultiIndex) -> Self {
        Poly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(m), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.d, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Substitutes `T_i -> T` for every `i`.
    pub fn single_variable(&self) -> Self {
        Poly::from_terms(
            1,
            self.terms
                .iter()
                .map(|(m, c)| (MultiIndex::new(vec![m.norm()]), c.clone())),
        )
    }

    /// Substitutes `T_i -> s T_i` for every `i`.
    pub fn scale_variables(&self, s: &C) -> Self {
        Poly::from_terms(
            self.d,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(&s.pow(m.norm())))),
        )
    }

    /// Value at `T_1 = ... = T_d = x`.
    pub fn eval_diagonal(&self, x: &C) -> C {
        self.terms
            .iter()
            .fold(C::zero(), |acc, (m, c)| acc.add(&c.mul(&x.pow(m.norm()))))
    }

    /// `T^top P(T^-1)`; requires `top >= max_exponents()`.
    pub fn reflect(&self, top: &MultiIndex) -> Self {
        Poly::from_terms(
            self.d,
            self.terms.iter().map(|(m, c)| {
                (
                    top.checked_sub(m)
                        .expect("reflection bound covers every exponent"),
                    c.clone(),
                )
            }),
        )
    }

    /// Exact quotient by `1 - a T_i`, if it exists.
    pub fn divide_by_linear(&self, i: usize, a: &C) -> Option<Self> {
        if a.is_zero() {
            return Some(self.clone());
        }
        // group by the exponent pattern off variable i
        let mut columns: BTreeMap<MultiIndex, BTreeMap<u64, C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            columns
                .entry(m.with(i, 0))
                .or_default()
                .insert(m[i], c.clone());
        }
        let mut out = Poly::zero(self.d);
        for (rest, col) in columns {
            let top = *col.keys().next_back().expect("nonempty column");
            // P_k = Q_k - a Q_{k-1}
            let mut prev = C::zero();
            for k in 0..top {
                let q = col
                    .get(&k)
                    .cloned()
                    .unwrap_or_else(C::zero)
                    .add(&a.mul(&prev));
                out.add_term(rest.with(i, k), q.clone());
                prev = q;
            }
            if top == 0 || col[&top].add(&a.mul(&prev)) != C::zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Renders with variables `names` and coefficient symbol `symbol`.
    /// Terms are ordered by total degree, then by exponent descending
    /// lexicographically.
    pub fn render(&self, names: &[String], symbol: &str) -> String {
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| b.cmp(a)));
        let single = keys.len() == 1;
        let mut parts: Vec<(bool, String)> = Vec::new();
        for m in keys {
            let mono = monomial_text(m, names);
            let coeff = self.terms[m].signed_terms(symbol);
            if coeff.len() == 1 {
                let (neg, mag) = coeff.into_iter().next().unwrap();
                let text = match (mag.is_empty(), mono.is_empty()) {
                    (true, _) => mono,
                    (false, true) => mag,
                    (false, false) => format!("{mag} {mono}"),
                };
                parts.push((neg, text));
            } else {
                let inner = join_signed(&coeff);
                let text = match (mono.is_empty(), single) {
                    (true, true) => inner,
                    (true, false) => format!("({inner})"),
                    (false, _) => format!("({inner}) {mono}"),
                };
                parts.push((false, text));
            }
        }
        join_signed(&parts)
    }
}

/// `T1^2 T2`, or `T^2` with a single variable name.
pub fn monomial_text(m: &MultiIndex, names: &[String]) -> String {
    m.entries()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `T` for one variable, `T1..Td` otherwise.
pub fn variable_names(d: usize) -> Vec<String> {
    if d == 1 {
        vec!["T".into()]
    } else {
        (1..=d).map(|i| format!("T{i}")).collect()
    }
}

impl TPoly {
    /// Substitutes `T_i -> U^k T_i`.
    pub fn twist(&self, k: i64) -> Self {
        Poly::from_terms(
            self.d,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.shift(k * m.norm() as i64))),
        )
    }
}

impl std::fmt::Display for TPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(&variable_names(self.d), "U"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn node_numerator() -> TPoly {
        let u1 = UPoly::u_pow(-1);
        Poly::from_terms(
            2,
            [
                (mi(&[0, 0]), UPoly::one()),
                (mi(&[1, 0]), -&u1),
                (mi(&[0, 1]), -&u1),
                (mi(&[1, 1]), u1.clone()),
            ],
        )
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            node_numerator().to_string(),
            "1 - U^-1 T1 - U^-1 T2 + U^-1 T1 T2"
        );
        assert_eq!(TPoly::zero(2).to_string(), "0");
        let grouped = TPoly::monomial(UPoly::from_terms([(-1, 1), (-2, 1)]), mi(&[1, 1]));
        assert_eq!(grouped.to_string(), "(U^-1 + U^-2) T1 T2");
        let p = TPoly::from_terms(1, [(mi(&[0]), UPoly::one()), (mi(&[2]), UPoly::u_pow(-1))]);
        assert_eq!(p.to_string(), "1 + U^-1 T^2");
        let c = TPoly::constant(UPoly::u_minus_one(), 1);
        assert_eq!(c.to_string(), "U - 1");
    }

    #[test]
    fn linear_division() {
        let u1 = UPoly::u_pow(-1);
        let f1 = TPoly::linear_factor(2, 0, &u1);
        let f2 = TPoly::linear_factor(2, 1, &u1);
        let prod = f1.mul(&f2).mul(&node_numerator());
        assert_eq!(
            prod.divide_by_linear(0, &u1).unwrap(),
            f2.mul(&node_numerator())
        );
        assert!(node_numerator().divide_by_linear(0, &u1).is_none());
        assert!(TPoly::one(1).divide_by_linear(0, &u1).is_none());
    }

    #[test]
    fn substitutions() {
        let n = node_numerator();
        assert_eq!(n.single_variable().to_string(), "1 - 2 U^-1 T + U^-1 T^2");
        assert_eq!(n.eval_diagonal(&UPoly::u_pow(1)), UPoly::u_minus_one());
        assert_eq!(
            n.reflect(&mi(&[1, 1])).coefficient(&mi(&[1, 1])),
            UPoly::one()
        );
        assert_eq!(n.twist(1).coefficient(&mi(&[1, 1])), UPoly::u_pow(1));
    }

    fn arb_poly() -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec(((0u64..3, 0u64..3), -3i64..4), 0..5).prop_map(|t| {
            Poly::from_terms(
                2,
                t.into_iter()
                    .map(|((a, b), c)| (mi(&[a, b]), Rational::from_integer(c.into()))),
            )
        })
    }

    proptest! {
        #[test]
        fn division_by_linear_round_trip(p in arb_poly(), a in -3i64..4, i in 0usize..2) {
            let a = Rational::from_integer(a.into());
            let f = Poly::linear_factor(2, i, &a);
            prop_assert_eq!(p.mul(&f).divide_by_linear(i, &a), Some(p.clone()));
        }

        #[test]
        fn multiplication_commutes(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.mul(&q), q.mul(&p));
        }
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::series::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{dividend} is not divisible by {divisor}")]
pub struct DivisionError {
    pub dividend: String,
    pub divisor: String,
}

/// A Laurent polynomial in `U` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * U^exp`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = UPoly::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// `U^exp`.
    pub fn u_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// `U - 1`.
    pub fn u_minus_one() -> Self {
        Self::from_terms([(1, 1), (0, -1)])
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = UPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `U^k`.
    pub fn shift(&self, k: i64) -> Self {
        UPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(UPoly::one(), |acc, _| &acc * self)
    }

    /// Value at `U = q`; `q` must be nonzero when negative exponents occur.
    pub fn eval(&self, q: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let base = if *e >= 0 { q.clone() } else { q.recip() };
            acc + Rational::from_integer(c.clone())
                * num_traits::pow(base, e.unsigned_abs() as usize)
        })
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient `self / divisor`.
    pub fn divide_exact(&self, divisor: &UPoly) -> Result<UPoly, DivisionError> {
        let err = || DivisionError {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let (Some(b_lo), Some(b_hi)) = (divisor.min_exp(), divisor.max_exp()) else {
            return Err(err());
        };
        let Some(a_lo) = self.min_exp() else {
            return Ok(UPoly::zero());
        };
        let lead = divisor.terms[&b_hi].clone();
        let mut rem = self.clone();
        let mut quotient = UPoly::zero();
        while let Some(r_hi) = rem.max_exp() {
            let e = r_hi - b_hi;
            if e < a_lo - b_lo {
                return Err(err());
            }
            let (c, r) = rem.terms[&r_hi].div_rem(&lead);
            if !r.is_zero() {
                return Err(err());
            }
            let term = UPoly::monomial(c, e);
            rem = &rem - &(&term * divisor);
            quotient = &quotient + &term;
        }
        Ok(quotient)
    }

    /// Signed magnitudes in descending exponent order, rendered with `symbol`.
    /// A magnitude of `""` means a bare `1`.
    pub fn signed_terms(&self, symbol: &str) -> Vec<(bool, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mag = c.abs();
                let power = match *e {
                    0 => String::new(),
                    1 => symbol.to_string(),
                    e => format!("{symbol}^{e}"),
                };
                let text = match (mag.is_one(), power.is_empty()) {
                    (true, _) => power,
                    (false, true) => mag.to_string(),
                    (false, false) => format!("{mag} {power}"),
                };
                (c.is_negative(), text)
            })
            .collect()
    }

    pub fn render(&self, symbol: &str) -> String {
        join_signed(&self.signed_terms(symbol))
    }
}

/// Joins signed magnitudes as `a - b + c`, writing bare ones as `1`.
pub fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, text)) in terms.iter().enumerate() {
        let text = if text.is_empty() { "1" } else { text.as_str() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(text);
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("U"))
    }
}

impl Add<&UPoly> for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&UPoly> for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul<&UPoly> for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(terms: &[(i64, i64)]) -> UPoly {
        UPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(
            &UPoly::u_minus_one() * &up(&[(1, 1), (0, 1)]),
            up(&[(2, 1), (0, -1)])
        );
        let q = up(&[(2, 1), (1, -2), (0, 1)])
            .divide_exact(&UPoly::u_minus_one())
            .unwrap();
        assert_eq!(q, UPoly::u_minus_one());
        assert!(UPoly::u_pow(-2).eval_at_one().is_one());
        assert_eq!(
            UPoly::u_pow(-2).eval(&Rational::from_integer(3.into())),
            Rational::new(1.into(), 9.into())
        );
    }

    #[test]
    fn inexact_division_is_reported() {
        assert!(up(&[(1, 1), (0, 1)])
            .divide_exact(&UPoly::u_minus_one())
            .is_err());
        assert!(up(&[(1, 1)]).divide_exact(&up(&[(0, 2)])).is_err());
        assert!(UPoly::one().divide_exact(&UPoly::zero()).is_err());
        assert_eq!(
            UPoly::zero().divide_exact(&UPoly::u_minus_one()).unwrap(),
            UPoly::zero()
        );
    }

    #[test]
    fn laurent_division() {
        // U^-1 - U^-3 = U^-3 (U - 1)(U + 1)
        let a = up(&[(-1, 1), (-3, -1)]);
        assert_eq!(
            a.divide_exact(&UPoly::u_minus_one()).unwrap(),
            up(&[(-2, 1), (-3, 1)])
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(UPoly::u_minus_one().to_string(), "U - 1");
        assert_eq!(up(&[(-1, 1), (-2, 1)]).to_string(), "U^-1 + U^-2");
        assert_eq!(up(&[(0, -2), (3, 1)]).to_string(), "U^3 - 2");
        assert_eq!(UPoly::zero().to_string(), "0");
        assert_eq!(up(&[(1, -1)]).render("q"), "-q");
    }

    fn arb() -> impl Strategy<Value = UPoly> {
        prop::collection::vec((-4i64..5, -3i64..4), 0..5).prop_map(UPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn division_inverts_multiplication(a in arb(), b in arb()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb(), b in arb(), q in 1i64..6) {
            let q = Rational::from_integer(q.into());
            prop_assert_eq!((&a * &b).eval(&q), a.eval(&q) * b.eval(&q));
        }
    }
}

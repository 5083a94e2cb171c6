use std::fmt;

use super::poly::{variable_names, TPoly};
use super::upoly::UPoly;
use crate::series::MultiIndex;

/// `numerator / prod_i (1 - U^-1 T_i)^{denominator[i]}`.
#[derive(Clone, Debug)]
pub struct ZetaForm {
    numerator: TPoly,
    denominator: Vec<u32>,
}

fn u_inv() -> UPoly {
    UPoly::u_pow(-1)
}

impl ZetaForm {
    pub fn new(numerator: TPoly, denominator: Vec<u32>) -> Self {
        assert_eq!(
            numerator.d(),
            denominator.len(),
            "one denominator exponent per variable"
        );
        ZetaForm {
            numerator,
            denominator,
        }
    }

    pub fn zero(d: usize) -> Self {
        Self::new(TPoly::zero(d), vec![0; d])
    }

    pub fn polynomial(p: TPoly) -> Self {
        let d = p.d();
        Self::new(p, vec![0; d])
    }

    pub fn d(&self) -> usize {
        self.numerator.d()
    }

    pub fn numerator(&self) -> &TPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn normalize(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut den = self.denominator.clone();
        for (i, e) in den.iter_mut().enumerate() {
            while *e > 0 {
                match num.divide_by_linear(i, &u_inv()) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        ZetaForm::new(num, den)
    }

    /// Rewrites over `prod (1 - U^-1 T_i)^{target[i]}`; `target` must
    /// dominate the current denominator.
    pub fn with_denominator(&self, target: &[u32]) -> Self {
        let d = self.d();
        let mut num = self.numerator.clone();
        for (i, (&t, &have)) in target.iter().zip(&self.denominator).enumerate() {
            let extra = t
                .checked_sub(have)
                .expect("target denominator dominates");
            num = num.mul(&TPoly::linear_factor(d, i, &u_inv()).pow(extra));
        }
        ZetaForm::new(num, target.to_vec())
    }

    pub fn add(&self, other: &ZetaForm) -> ZetaForm {
        let target: Vec<u32> = self
            .denominator
            .iter()
            .zip(&other.denominator)
            .map(|(a, b)| *a.max(b))
            .collect();
        let a = self.with_denominator(&target);
        let b = other.with_denominator(&target);
        ZetaForm::new(a.numerator.add(&b.numerator), target)
    }

    /// Multiplies by `c T^m`.
    pub fn scale_by(&self, c: &UPoly, m: &MultiIndex) -> ZetaForm {
        ZetaForm::new(self.numerator.scale(c).shift(m), self.denominator.clone())
    }

    /// Both forms over their common denominator.
    pub fn common_denominator(&self, other: &ZetaForm) -> (ZetaForm, ZetaForm) {
        let target: Vec<u32> = self
            .denominator
            .iter()
            .zip(&other.denominator)
            .map(|(a, b)| *a.max(b))
            .collect();
        (
            self.with_denominator(&target),
            other.with_denominator(&target),
        )
    }

    /// Equality as rational functions.
    pub fn equals(&self, other: &ZetaForm) -> bool {
        if self.d() != other.d() {
            return false;
        }
        let (a, b) = self.common_denominator(other);
        a.numerator == b.numerator
    }

    /// Substitutes `T_i -> T`.
    pub fn single_variable(&self) -> ZetaForm {
        let e: u32 = self.denominator.iter().sum();
        ZetaForm::new(self.numerator.single_variable(), vec![e]).normalize()
    }

    pub fn denominator_text(&self) -> String {
        let names = variable_names(self.d());
        let mut parts = Vec::new();
        for (i, &e) in self.denominator.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("(1 - U^-1 {})", names[i])),
                e => parts.push(format!("(1 - U^-1 {})^{e}", names[i])),
            }
        }
        parts.concat()
    }
}

impl PartialEq for ZetaForm {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for ZetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.to_string();
        let den = self.denominator_text();
        if den.is_empty() {
            return f.write_str(&num);
        }
        if self.numerator.terms().len() > 1 {
            write!(f, "({num})/{den}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

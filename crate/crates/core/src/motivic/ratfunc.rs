use super::poly::{variable_names, Coefficient, Poly};
use super::upoly::join_signed;
use crate::series::MultiIndex;

/// One denominator factor `(1 - a T_var)^mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactor<C> {
    pub var: usize,
    pub a: C,
    pub mult: u32,
}

/// `numerator / prod (1 - a_k T_{var_k})^{mult_k}` over a coefficient ring.
#[derive(Clone, Debug)]
pub struct RationalFunction<C> {
    numerator: Poly<C>,
    factors: Vec<LinearFactor<C>>,
}

impl<C: Coefficient> RationalFunction<C> {
    pub fn new(numerator: Poly<C>, factors: Vec<LinearFactor<C>>) -> Self {
        let mut merged: Vec<LinearFactor<C>> = Vec::new();
        for f in factors.into_iter().filter(|f| f.mult > 0 && !f.a.is_zero()) {
            match merged.iter_mut().find(|g| g.var == f.var && g.a == f.a) {
                Some(g) => g.mult += f.mult,
                None => merged.push(f),
            }
        }
        RationalFunction {
            numerator,
            factors: merged,
        }
    }

    pub fn d(&self) -> usize {
        self.numerator.d()
    }

    pub fn numerator(&self) -> &Poly<C> {
        &self.numerator
    }

    pub fn factors(&self) -> &[LinearFactor<C>] {
        &self.factors
    }

    pub fn expanded_denominator(&self) -> Poly<C> {
        let d = self.d();
        self.factors.iter().fold(Poly::one(d), |acc, f| {
            acc.mul(&Poly::linear_factor(d, f.var, &f.a).pow(f.mult))
        })
    }

    /// Cancels denominator factors dividing the numerator.
    pub fn normalize(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut factors = self.factors.clone();
        for f in &mut factors {
            while f.mult > 0 {
                match num.divide_by_linear(f.var, &f.a) {
                    Some(q) => {
                        num = q;
                        f.mult -= 1;
                    }
                    None => break,
                }
            }
        }
        RationalFunction::new(num, factors)
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        self.d() == other.d()
            && self.numerator.mul(&other.expanded_denominator())
                == other.numerator.mul(&self.expanded_denominator())
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> RationalFunction<D> {
        RationalFunction::new(
            self.numerator.map_coeffs(&f),
            self.factors
                .iter()
                .map(|g| LinearFactor {
                    var: g.var,
                    a: f(&g.a),
                    mult: g.mult,
                })
                .collect(),
        )
        .normalize()
    }

    /// Substitutes `T_i -> s T_i` everywhere.
    pub fn scale_variables(&self, s: &C) -> Self {
        RationalFunction::new(
            self.numerator.scale_variables(s),
            self.factors
                .iter()
                .map(|g| LinearFactor {
                    var: g.var,
                    a: g.a.mul(s),
                    mult: g.mult,
                })
                .collect(),
        )
        .normalize()
    }

    /// Substitutes `T_i -> T`.
    pub fn single_variable(&self) -> Self {
        RationalFunction::new(
            self.numerator.single_variable(),
            self.factors
                .iter()
                .map(|g| LinearFactor {
                    var: 0,
                    a: g.a.clone(),
                    mult: g.mult,
                })
                .collect(),
        )
        .normalize()
    }

    pub fn render(&self, symbol: &str) -> String {
        let names = variable_names(self.d());
        let num = self.numerator.render(&names, symbol);
        if self.factors.is_empty() {
            return num;
        }
        let mut den = String::new();
        for f in &self.factors {
            let term = Poly::monomial(f.a.clone(), MultiIndex::unit(self.d(), f.var))
                .render(&names, symbol);
            let inner = join_signed(&[
                (false, "1".into()),
                (
                    !term.starts_with('-'),
                    term.trim_start_matches('-').to_string(),
                ),
            ]);
            den.push_str(&format!("({inner})"));
            if f.mult > 1 {
                den.push_str(&format!("^{}", f.mult));
            }
        }
        if self.numerator.terms().len() > 1 {
            format!("({num})/{den}")
        } else {
            format!("{num}/{den}")
        }
    }
}

impl<C: Coefficient> PartialEq for RationalFunction<C> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

use thiserror::Error;

use crate::motivic::{
    class_in, class_j, DivisionError, LinearFactor, Poly, RationalFunction, TPoly, UPoly, ZetaForm,
};
use crate::series::{box_points, MultiIndex, Rational};
use crate::valuesemigroup::SemigroupData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error("zeta assemblies disagree: {0}")]
    AssemblyMismatch(String),
    #[error("specialization at U = 0 is undefined")]
    ZeroSpecialization,
}

/// `I_n(U)` for any `n ∈ S`, using the extended dimension function.
pub fn class_at(s: &SemigroupData, n: &MultiIndex) -> Result<UPoly, DivisionError> {
    class_in(|m| s.l_extended(&m.as_signed()), n)
}

/// `1 / prod_{i ∈ J} (1 - U^-1 T_i)` as a denominator vector.
fn denominator_on(d: usize, j: &[usize]) -> Vec<u32> {
    (0..d).map(|i| j.contains(&i) as u32).collect()
}

/// The universal zeta function as the sum of its three strata over
/// `prod_i (1 - U^-1 T_i)`.
pub fn universal_zeta(s: &SemigroupData) -> Result<ZetaForm, ZetaError> {
    let d = s.d();
    let c = s.conductor();
    let mut z = ZetaForm::zero(d);
    for n in s.under_conductor_elements() {
        let coeff = class_at(s, &n)?.shift(-(n.norm() as i64));
        z = z.add(&ZetaForm::polynomial(TPoly::monomial(coeff, n)));
    }
    for (j, b) in s.b_sets() {
        for m in &b.members {
            let f = b.f_j(m);
            let coeff = class_at(s, &f)?.shift(-(f.norm() as i64));
            z = z.add(&ZetaForm::new(
                TPoly::monomial(coeff, f),
                denominator_on(d, &j),
            ));
        }
    }
    let top = class_j(s.delta(), d).shift(-(c.norm() as i64));
    z = z.add(&ZetaForm::new(TPoly::monomial(top, c.clone()), vec![1; d]));
    let z = z.with_denominator(&vec![1; d]).normalize();
    let check = universal_zeta_by_orthants(s)?;
    if !z.equals(&check) {
        return Err(ZetaError::AssemblyMismatch(format!(
            "strata give {z}, orthants give {check}"
        )));
    }
    Ok(z)
}

/// Independent assembly: every `n ∈ S ∩ [0, c]` with its own class,
/// spread along the directions in which it has reached the conductor.
pub fn universal_zeta_by_orthants(s: &SemigroupData) -> Result<ZetaForm, ZetaError> {
    let d = s.d();
    let c = s.conductor();
    let mut z = ZetaForm::zero(d);
    for n in box_points(&MultiIndex::zeros(d), c) {
        if !s.contains(&n) {
            continue;
        }
        let coeff = class_at(s, &n)?.shift(-(n.norm() as i64));
        let directions: Vec<usize> = (0..d).filter(|&i| n[i] == c[i]).collect();
        z = z.add(&ZetaForm::new(
            TPoly::monomial(coeff, n),
            denominator_on(d, &directions),
        ));
    }
    Ok(z.with_denominator(&vec![1; d]).normalize())
}

/// `Z(T) = Z(T, ..., T)`.
pub fn single_variable(z: &ZetaForm) -> ZetaForm {
    z.single_variable()
}

/// `P_g = U^{-δ-1} Z`.
pub fn poincare_series(z: &ZetaForm, delta: u64) -> ZetaForm {
    z.scale_by(
        &UPoly::u_pow(-(delta as i64) - 1),
        &MultiIndex::zeros(z.d()),
    )
}

fn factors_at<C: Clone>(z: &ZetaForm, a: C) -> Vec<LinearFactor<C>> {
    z.denominator()
        .iter()
        .enumerate()
        .map(|(var, &mult)| LinearFactor {
            var,
            a: a.clone(),
            mult,
        })
        .collect()
}

/// `U = 1`.
pub fn specialize_u_one(z: &ZetaForm) -> RationalFunction<Rational> {
    let num: Poly<Rational> = z
        .numerator()
        .map_coeffs(|c| Rational::from_integer(c.eval_at_one()));
    RationalFunction::new(num, factors_at(z, Rational::from_integer(1.into()))).normalize()
}

/// `U = q` for a nonzero rational `q`.
pub fn specialize_u(z: &ZetaForm, q: &Rational) -> Result<RationalFunction<Rational>, ZetaError> {
    if num_traits::Zero::is_zero(q) {
        return Err(ZetaError::ZeroSpecialization);
    }
    let num: Poly<Rational> = z.numerator().map_coeffs(|c| c.eval(q));
    Ok(RationalFunction::new(num, factors_at(z, q.recip())).normalize())
}

/// `U = q` with `q` kept symbolic; coefficients are Laurent polynomials in `q`.
pub fn specialize_symbolic(z: &ZetaForm) -> RationalFunction<UPoly> {
    RationalFunction::new(z.numerator().clone(), factors_at(z, UPoly::u_pow(-1))).normalize()
}

/// `U = 1, T_i = T`, the monodromy zeta function for plane curves.
pub fn monodromy_zeta(s: &SemigroupData) -> Result<RationalFunction<Rational>, ZetaError> {
    Ok(specialize_u_one(&single_variable(&universal_zeta(s)?)))
}

/// `Z_Ca(T)`: the single-variable zeta at `U = q` with `T -> qT`.
pub fn cartier_local_factor(
    z: &ZetaForm,
    q: &Rational,
) -> Result<RationalFunction<Rational>, ZetaError> {
    Ok(specialize_u(&single_variable(z), q)?.scale_variables(q))
}

/// `Z_Ca(T)` with symbolic `q`.
pub fn cartier_local_factor_symbolic(z: &ZetaForm) -> RationalFunction<UPoly> {
    specialize_symbolic(&single_variable(z)).scale_variables(&UPoly::u_pow(1))
}

/// Substitutes `q = 1` into a symbolic specialization.
pub fn at_q_one(f: &RationalFunction<UPoly>) -> RationalFunction<Rational> {
    f.map_coeffs(|c| Rational::from_integer(c.eval_at_one()))
}

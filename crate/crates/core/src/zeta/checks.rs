//! Checkers for the functional equation and its combinatorial shadows.
//! Each returns `Ok(())` or a witness describing the first violation.

use crate::motivic::{Poly, RationalFunction, TPoly, UPoly, ZetaForm};
use crate::series::{box_points, MultiIndex, Rational};
use crate::valuesemigroup::SemigroupData;

pub type Outcome = Result<(), String>;

fn first_difference(lhs: &TPoly, rhs: &TPoly) -> String {
    let diff = lhs.sub(rhs);
    let (m, _) = diff.terms().iter().next().expect("nonzero difference");
    format!(
        "coefficient of T^{m}: left {} vs right {}",
        lhs.coefficient(m),
        rhs.coefficient(m)
    )
}

/// `T_i - a`.
fn shifted_variable(d: usize, i: usize, a: UPoly) -> TPoly {
    TPoly::from_terms(
        d,
        [
            (MultiIndex::unit(d, i), UPoly::one()),
            (MultiIndex::zeros(d), -&a),
        ],
    )
}

/// `Z(UT) = U^{δ-d} T^{c-1} prod (1 - U T_i) / prod (T_i - 1) · Z(T^-1)`,
/// cleared of denominators and negative powers.
pub fn check_functional_equation(z: &ZetaForm, s: &SemigroupData) -> Outcome {
    let d = s.d();
    let m = z.numerator();
    let e = z.denominator();
    let top = m.max_exponents();
    let c = s.conductor();
    // exponent of T on the right: c - 1 + e, lifted to be non-negative
    let raw: Vec<i64> = (0..d).map(|i| c[i] as i64 - 1 + e[i] as i64).collect();
    let lift = MultiIndex::new(raw.iter().map(|&x| (-x).max(0) as u64).collect());
    let right_exp = MultiIndex::new(
        raw.iter()
            .zip(lift.entries())
            .map(|(&x, &l)| (x + l as i64) as u64)
            .collect(),
    );

    let mut lhs = m.twist(1).shift(&top).shift(&lift);
    let mut rhs = m
        .reflect(&top)
        .shift(&right_exp)
        .scale(&UPoly::u_pow(s.delta() as i64 - d as i64));
    for (i, &ei) in e.iter().enumerate() {
        lhs = lhs.mul(&shifted_variable(d, i, UPoly::one()));
        lhs = lhs.mul(&shifted_variable(d, i, UPoly::u_pow(-1)).pow(ei));
        rhs = rhs.mul(&TPoly::linear_factor(d, i, &UPoly::u_pow(1)));
        rhs = rhs.mul(&TPoly::linear_factor(d, i, &UPoly::one()).pow(ei));
    }
    if lhs == rhs {
        Ok(())
    } else {
        Err(first_difference(&lhs, &rhs))
    }
}

/// `a_i = a_{c-i} U^{δ-||i||}`, `a_0 = 1`, `a_c = U^-δ`, degree `||c||`,
/// for the numerator over `prod_i (1 - U^-1 T_i)`.
pub fn check_coeff_symmetry(z: &ZetaForm, s: &SemigroupData) -> Outcome {
    let d = s.d();
    if z.denominator().iter().any(|&e| e > 1) {
        return Err(format!(
            "denominator {} is not the canonical one",
            z.denominator_text()
        ));
    }
    let z = z.with_denominator(&vec![1; d]);
    let a = z.numerator();
    let c = s.conductor();
    let delta = s.delta() as i64;
    if a.coefficient(&MultiIndex::zeros(d)) != UPoly::one() {
        return Err(format!(
            "a_0 = {}, expected 1",
            a.coefficient(&MultiIndex::zeros(d))
        ));
    }
    if a.coefficient(c) != UPoly::u_pow(-delta) {
        return Err(format!("a_c = {}, expected U^{}", a.coefficient(c), -delta));
    }
    if let Some(m) = a.terms().keys().find(|m| !m.dominated_by(c)).cloned() {
        return Err(format!("term T^{m} lies outside [0, c]"));
    }
    for i in box_points(&MultiIndex::zeros(d), c) {
        let mirror = c.checked_sub(&i).expect("i <= c");
        let want = a.coefficient(&mirror).shift(delta - i.norm() as i64);
        let have = a.coefficient(&i);
        if have != want {
            return Err(format!(
                "a_{i} = {have}, but a_{mirror} U^{} = {want}",
                delta - i.norm() as i64
            ));
        }
    }
    match a.degree() {
        Some(deg) if deg == c.norm() => Ok(()),
        deg => Err(format!("degree {deg:?}, expected {}", c.norm())),
    }
}

/// `dim J_n/J_{n+e_i} + dim J_{c-n-e_i}/J_{c-n} = 1` for `n ∈ [-1, c+1]`.
pub fn check_kiyek(s: &SemigroupData) -> Outcome {
    let d = s.d();
    let c = s.conductor().as_signed();
    let hi = s.conductor().add_scalar(2);
    for p in box_points(&MultiIndex::zeros(d), &hi) {
        let n: Vec<i64> = p.entries().iter().map(|&x| x as i64 - 1).collect();
        for i in 0..d {
            let mut mirror: Vec<i64> = c.iter().zip(&n).map(|(a, b)| a - b).collect();
            mirror[i] -= 1;
            let total = s.step_dim_extended(&n, i) + s.step_dim_extended(&mirror, i);
            if total != 1 {
                return Err(format!(
                    "n = {n:?}, i = {}: step dims sum to {total}",
                    i + 1
                ));
            }
        }
    }
    Ok(())
}

/// `l(c - n) - l(n) = δ - ||n||` for `n ∈ [0, c]`.
pub fn check_eles(s: &SemigroupData) -> Outcome {
    let c = s.conductor();
    for n in box_points(&MultiIndex::zeros(s.d()), c) {
        let mirror = c.checked_sub(&n).expect("n <= c");
        let lhs = s.l_extended(&mirror.as_signed()) as i64 - s.l_extended(&n.as_signed()) as i64;
        let rhs = s.delta() as i64 - n.norm() as i64;
        if lhs != rhs {
            return Err(format!("n = {n}: l(c-n) - l(n) = {lhs}, δ - ||n|| = {rhs}"));
        }
    }
    Ok(())
}

/// `ζ(T) = (-1)^d T^{||c|| - d} ζ(T^-1)` for a one-variable function.
pub fn check_monodromy_fe(zeta: &RationalFunction<Rational>, s: &SemigroupData) -> Outcome {
    assert_eq!(zeta.d(), 1, "monodromy zeta has one variable");
    let num = zeta.numerator().clone();
    let den = zeta.expanded_denominator();
    let deg = |p: &Poly<Rational>| p.degree().unwrap_or(0);
    let k = s.conductor().norm() as i64 - s.d() as i64;
    let (dn, dd) = (deg(&num) as i64, deg(&den) as i64);
    // N(T) rev(D)(T) T^{a - dd} = ± rev(N)(T) D(T) T^{a + k - dn}
    let a = dd.max(dn - k).max(0);
    let t = |e: i64| MultiIndex::new(vec![e as u64]);
    let lhs = num.mul(&den.reflect(&t(dd))).shift(&t(a - dd));
    let sign = if s.d().is_multiple_of(2) { 1 } else { -1 };
    let rhs = num
        .reflect(&t(dn))
        .mul(&den)
        .shift(&t(a + k - dn))
        .scale(&Rational::from_integer(sign.into()));
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!(
            "ζ(T) = {} but the reflected side is ({})/({})",
            zeta.render(""),
            rhs.render(&["T".into()], ""),
            lhs.render(&["T".into()], "")
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::assemble::{monodromy_zeta, universal_zeta};

    fn mi(v: &[u64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn numerical(g: &[u64]) -> SemigroupData {
        SemigroupData::from_numerical_generators(g).unwrap()
    }

    fn node() -> SemigroupData {
        SemigroupData::from_box(
            mi(&[1, 1]),
            &[
                mi(&[0, 0]),
                mi(&[1, 1]),
                mi(&[1, 2]),
                mi(&[2, 1]),
                mi(&[2, 2]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn gorenstein_inputs_pass() {
        for s in [
            numerical(&[2, 3]),
            numerical(&[2, 5]),
            numerical(&[3, 4]),
            numerical(&[1]),
            node(),
        ] {
            let z = universal_zeta(&s).unwrap();
            assert_eq!(check_functional_equation(&z, &s), Ok(()));
            assert_eq!(check_coeff_symmetry(&z, &s), Ok(()));
            assert_eq!(check_kiyek(&s), Ok(()));
            assert_eq!(check_eles(&s), Ok(()));
            assert_eq!(check_monodromy_fe(&monodromy_zeta(&s).unwrap(), &s), Ok(()));
        }
    }

    #[test]
    fn three_four_five_fails() {
        let s = numerical(&[3, 4, 5]);
        let z = universal_zeta(&s).unwrap();
        assert!(check_functional_equation(&z, &s).is_err());
        let sym = check_coeff_symmetry(&z, &s).unwrap_err();
        assert!(sym.contains("a_c"), "{sym}");
        assert!(check_kiyek(&s).is_err());
        assert!(check_eles(&s).is_err());
    }
}

use super::upoly::{DivisionError, UPoly};
use crate::series::MultiIndex;

/// `I_n(U) = (U - 1)^-1 U^{||n|| + 1} sum_I (-1)^{#I} U^{-l(n + 1_I)}`.
pub fn class_in(l: impl Fn(&MultiIndex) -> u64, n: &MultiIndex) -> Result<UPoly, DivisionError> {
    let d = n.dim();
    let mut sum = UPoly::zero();
    for mask in 0..(1usize << d) {
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        let value = l(&n.add(&MultiIndex::indicator(d, mask)));
        sum = &sum + &UPoly::monomial(sign, -(value as i64));
    }
    let shifted = sum.shift(n.norm() as i64 + 1);
    shifted.divide_exact(&UPoly::u_minus_one())
}

/// `[J] = (U - 1)^{d-1} U^{δ - d + 1}`.
pub fn class_j(delta: u64, d: usize) -> UPoly {
    &UPoly::u_minus_one().pow(d as u32 - 1) * &UPoly::u_pow(delta as i64 - d as i64 + 1)
}

/// `[π_{c-1}(O^×)] = (U - 1) U^{||c|| - δ - 1}`, and `U - 1` when `c = 0`.
pub fn class_units_jet(delta: u64, c: &MultiIndex) -> UPoly {
    if c.norm() == 0 {
        return UPoly::u_minus_one();
    }
    UPoly::u_minus_one().shift(c.norm() as i64 - delta as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuesemigroup::SemigroupData;

    fn mi(v: &[u64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
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
    fn class_in_examples() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        let l = |n: &MultiIndex| cusp.l_extended(&n.as_signed());
        assert_eq!(class_in(l, &mi(&[0])).unwrap(), UPoly::one());
        for k in 2..8 {
            assert_eq!(class_in(l, &mi(&[k])).unwrap(), UPoly::u_pow(1));
        }
        let n = node();
        assert_eq!(
            class_in(|m| n.l_extended(&m.as_signed()), &mi(&[1, 1])).unwrap(),
            UPoly::u_minus_one()
        );
    }

    #[test]
    fn class_in_of_non_members() {
        // l(1) = l(2) = 1 for the cusp, so the sum at n = 1 is U^2 (U^-1 - U^-1) = 0
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        assert!(class_in(|m| cusp.l_extended(&m.as_signed()), &mi(&[1]))
            .unwrap()
            .is_zero());
        // the alternating sum vanishes at U = 1 for any table, so division never fails
        assert_eq!(
            class_in(|m| 2 * m.norm(), &mi(&[1])).unwrap(),
            UPoly::from_terms([(-1, 1), (-2, 1)])
        );
    }

    #[test]
    fn closed_forms() {
        assert_eq!(class_j(1, 1), UPoly::u_pow(1));
        assert_eq!(class_j(2, 2), &UPoly::u_minus_one() * &UPoly::u_pow(1));
        assert_eq!(class_j(0, 1), UPoly::one());
        assert_eq!(class_units_jet(1, &mi(&[2])), UPoly::u_minus_one());
        assert_eq!(
            class_units_jet(2, &mi(&[2, 2])),
            &UPoly::u_minus_one() * &UPoly::u_pow(1)
        );
        assert_eq!(class_units_jet(0, &mi(&[0])), UPoly::u_minus_one());
    }
}

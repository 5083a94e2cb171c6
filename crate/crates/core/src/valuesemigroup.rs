//! Value semigroups `S ⊂ N^d` stored as finite box data, the dimension
//! function `l`, and the stratification of `S` used by the zeta assembly.
//!
//! A semigroup is kept as its conductor `c`, the members of the box
//! `[0, c + 1]`, and the table of `l(n)` on `[0, c + 2]`. Everything else is
//! reconstructed through two facts about value semigroups: membership of `n`
//! depends only on `min(n, c)`, and `S` is closed under componentwise minimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::series::{box_points, MultiIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("semigroup needs at least one generator")]
    NoGenerators,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("gcd of generators is {0}, so the complement of S is infinite")]
    GcdNotOne(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid semigroup box: {0}")]
    Validation(String),
    #[error("{what} {n} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        n: String,
        range: String,
    },
}

/// Finite description of a value semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupData {
    d: usize,
    conductor: MultiIndex,
    delta: u64,
    members: BTreeSet<MultiIndex>,
    l_table: BTreeMap<MultiIndex, u64>,
}

impl SemigroupData {
    /// `S = <gens>` for a numerical semigroup (`d = 1`).
    pub fn from_numerical_generators(gens: &[u64]) -> Result<Self, SemigroupError> {
        if gens.is_empty() {
            return Err(SemigroupError::NoGenerators);
        }
        if gens.contains(&0) {
            return Err(SemigroupError::ZeroGenerator);
        }
        let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(SemigroupError::GcdNotOne(g));
        }
        let smallest = *gens.iter().min().unwrap();
        // grow membership until `smallest` consecutive members appear
        let mut member = vec![true];
        let mut run = 1u64;
        while run < smallest {
            let k = member.len();
            let m = gens
                .iter()
                .any(|&a| (a as usize) <= k && member[k - a as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let frob_plus_one = member.iter().rposition(|&m| !m).map_or(0, |p| p + 1) as u64;
        let c = frob_plus_one;
        let elements = (0..=c + 1)
            .filter(|&n| n >= c || member[n as usize])
            .map(|n| MultiIndex::new(vec![n]))
            .collect::<Vec<_>>();
        Self::from_box(MultiIndex::new(vec![c]), &elements)
    }

    /// Validates box data `S ∩ [0, c + 1]` and derives `δ` and `l`.
    pub fn from_box(
        conductor: MultiIndex,
        elements: &[MultiIndex],
    ) -> Result<Self, SemigroupError> {
        let d = conductor.dim();
        if d == 0 {
            return Err(SemigroupError::Validation("d must be at least 1".into()));
        }
        let top = conductor.add_scalar(1);
        let mut members = BTreeSet::new();
        for e in elements {
            if e.dim() != d {
                return Err(SemigroupError::DimensionMismatch {
                    expected: d,
                    got: e.dim(),
                });
            }
            if !e.dominated_by(&top) {
                return Err(SemigroupError::Validation(format!(
                    "element {e} lies outside the box [0, {top}]"
                )));
            }
            members.insert(e.clone());
        }
        let fail = |msg: String| Err(SemigroupError::Validation(msg));
        if !members.contains(&MultiIndex::zeros(d)) {
            return fail("0 ∉ S".into());
        }
        for n in box_points(&conductor, &top) {
            if !members.contains(&n) {
                return fail(format!("conductor property violated: {n} >= c but {n} ∉ S"));
            }
        }
        for i in 0..d {
            if conductor[i] == 0 {
                continue;
            }
            let lower = conductor.with(i, conductor[i] - 1);
            if box_points(&lower, &top).iter().all(|n| members.contains(n)) {
                return fail(format!(
                    "conductor is not minimal: {lower} already has the conductor property"
                ));
            }
        }
        let list: Vec<&MultiIndex> = members.iter().collect();
        for (k, a) in list.iter().enumerate() {
            for b in &list[k + 1..] {
                let m = a.meet(b);
                if !members.contains(&m) {
                    return fail(format!("not closed under min: min({a}, {b}) = {m} ∉ S"));
                }
            }
        }
        for n in box_points(&MultiIndex::zeros(d), &top) {
            let capped = n.meet(&conductor);
            if members.contains(&n) != members.contains(&capped) {
                return fail(format!(
                    "membership of {n} differs from that of {capped}; entries at or above the conductor must not matter"
                ));
            }
        }
        let mut s = SemigroupData {
            d,
            conductor,
            delta: 0,
            members,
            l_table: BTreeMap::new(),
        };
        s.fill_l_table();
        let l_c = s.l_table[&s.conductor];
        s.delta = s.conductor.norm() - l_c;
        Ok(s)
    }

    fn fill_l_table(&mut self) {
        let hi = self.conductor.add_scalar(2);
        for n in box_points(&MultiIndex::zeros(self.d), &hi) {
            let value = match (0..self.d).find(|&i| n[i] > 0) {
                None => 0,
                Some(i) => {
                    let prev = n.with(i, n[i] - 1);
                    self.l_table[&prev] + self.step_dim_extended(&prev.as_signed(), i) as u64
                }
            };
            self.l_table.insert(n, value);
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn conductor(&self) -> &MultiIndex {
        &self.conductor
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// `S ∩ [0, c + 1]`, lexicographically sorted.
    pub fn box_elements(&self) -> Vec<MultiIndex> {
        self.members.iter().cloned().collect()
    }

    pub fn l_table(&self) -> &BTreeMap<MultiIndex, u64> {
        &self.l_table
    }

    /// Membership for any `n ∈ N^d`.
    pub fn contains(&self, n: &MultiIndex) -> bool {
        self.members.contains(&n.meet(&self.conductor))
    }

    /// `dim J_n / J_{n + e_i}` read off the box: 1 iff some `s ∈ S ∩ [0, c+1]`
    /// has `s_i = n_i` and `s_j >= n_j` elsewhere.
    pub fn step_dim(&self, n: &MultiIndex, i: usize) -> Result<u8, SemigroupError> {
        self.check_dim(n)?;
        let top = self.conductor.add_scalar(1);
        if !n.dominated_by(&top) || i >= self.d {
            return Err(SemigroupError::OutOfRange {
                what: "step index",
                n: format!("{n} (branch {})", i + 1),
                range: format!("[0, {top}]"),
            });
        }
        let witness = self
            .members
            .iter()
            .any(|s| s[i] == n[i] && (0..self.d).all(|j| j == i || s[j] >= n[j]));
        Ok(witness as u8)
    }

    /// `dim J_n / J_{n + e_i}` for any `n ∈ Z^d`: negative entries behave as
    /// zero, the step along a coordinate at or above the conductor is 1, and
    /// other coordinates at or above the conductor can be capped.
    pub fn step_dim_extended(&self, n: &[i64], i: usize) -> u8 {
        if n[i] < 0 {
            return 0;
        }
        if n[i] as u64 >= self.conductor[i] {
            return 1;
        }
        let capped = MultiIndex::new(
            n.iter()
                .zip(self.conductor.entries())
                .map(|(&x, &c)| (x.max(0) as u64).min(c))
                .collect(),
        );
        self.step_dim(&capped, i)
            .expect("capped index lies in the box")
    }

    /// `l(n)` on `[0, c + 2]`.
    pub fn l_value(&self, n: &MultiIndex) -> Result<u64, SemigroupError> {
        self.check_dim(n)?;
        self.l_table
            .get(n)
            .copied()
            .ok_or_else(|| SemigroupError::OutOfRange {
                what: "l index",
                n: n.to_string(),
                range: format!("[0, {}]", self.conductor.add_scalar(2)),
            })
    }

    /// `l(n)` for any `n ∈ Z^d`.
    pub fn l_extended(&self, n: &[i64]) -> u64 {
        let m: Vec<u64> = n.iter().map(|&x| x.max(0) as u64).collect();
        let m = MultiIndex::new(m);
        let capped = m.meet(&self.conductor);
        let excess: u64 = m
            .entries()
            .iter()
            .zip(self.conductor.entries())
            .map(|(&x, &c)| x.saturating_sub(c))
            .sum();
        self.l_table[&capped] + excess
    }

    /// Sum of step dimensions along the staircase that raises coordinates in
    /// the given order. Path-independence of this value is what makes `l`
    /// well defined.
    pub fn l_along_path(&self, n: &MultiIndex, order: &[usize]) -> u64 {
        let mut cur = vec![0i64; self.d];
        let mut total = 0;
        for &i in order {
            while cur[i] < n[i] as i64 {
                total += self.step_dim_extended(&cur, i) as u64;
                cur[i] += 1;
            }
        }
        total
    }

    /// `||c|| = 2δ`.
    pub fn is_gorenstein(&self) -> bool {
        self.conductor.norm() == 2 * self.delta
    }

    /// `{n ∈ S : n_i < c_i for all i}`.
    pub fn under_conductor_elements(&self) -> Vec<MultiIndex> {
        self.members
            .iter()
            .filter(|n| n.lt_all(&self.conductor))
            .cloned()
            .collect()
    }

    /// `B_J` for every proper nonempty `J ⊂ {1..d}`, keyed by the sorted
    /// zero-based branch list of `J`.
    pub fn b_sets(&self) -> BTreeMap<Vec<usize>, BSet> {
        let mut out = BTreeMap::new();
        if self.d < 2 {
            return out;
        }
        for mask in 1..(1usize << self.d) - 1 {
            let j: Vec<usize> = (0..self.d).filter(|i| (mask >> i) & 1 == 1).collect();
            let rest: Vec<usize> = (0..self.d).filter(|i| (mask >> i) & 1 == 0).collect();
            // residual indices run over the box m_k < c_k, k ∉ J
            let lo = MultiIndex::zeros(rest.len());
            let members = if rest.iter().any(|&k| self.conductor[k] == 0) {
                BTreeSet::new()
            } else {
                let hi = MultiIndex::new(rest.iter().map(|&k| self.conductor[k] - 1).collect());
                box_points(&lo, &hi)
                    .into_iter()
                    .map(MultiIndex::into_entries)
                    .filter(|m| self.contains(&f_j(&self.conductor, &j, m)))
                    .collect()
            };
            out.insert(
                j.clone(),
                BSet {
                    j,
                    conductor: self.conductor.clone(),
                    members,
                },
            );
        }
        out
    }

    /// Labels every element of `S ∩ [0, bound]` by its stratum.
    pub fn h_decomposition(
        &self,
        bound: &MultiIndex,
    ) -> Result<Vec<(MultiIndex, HLabel)>, SemigroupError> {
        self.check_dim(bound)?;
        if !self.conductor.dominated_by(bound) {
            return Err(SemigroupError::OutOfRange {
                what: "decomposition bound",
                n: bound.to_string(),
                range: format!(">= {}", self.conductor),
            });
        }
        Ok(box_points(&MultiIndex::zeros(self.d), bound)
            .into_iter()
            .filter(|n| self.contains(n))
            .map(|n| {
                let label = self.label(&n);
                (n, label)
            })
            .collect())
    }

    /// The `H` stratum of an element of `S`.
    pub fn label(&self, n: &MultiIndex) -> HLabel {
        let j: Vec<usize> = (0..self.d).filter(|&i| n[i] >= self.conductor[i]).collect();
        if j.is_empty() {
            HLabel::Under
        } else if j.len() == self.d {
            HLabel::Conductor
        } else {
            let m = (0..self.d)
                .filter(|i| !j.contains(i))
                .map(|i| n[i])
                .collect();
            HLabel::Stratum { j, m }
        }
    }

    fn check_dim(&self, n: &MultiIndex) -> Result<(), SemigroupError> {
        if n.dim() != self.d {
            return Err(SemigroupError::DimensionMismatch {
                expected: self.d,
                got: n.dim(),
            });
        }
        Ok(())
    }
}

/// `f_J(m)`: the conductor on `J`, `m` elsewhere.
pub fn f_j(conductor: &MultiIndex, j: &[usize], m: &[u64]) -> MultiIndex {
    let mut rest = m.iter();
    MultiIndex::new(
        (0..conductor.dim())
            .map(|i| {
                if j.contains(&i) {
                    conductor[i]
                } else {
                    *rest.next().expect("residual index has d - #J entries")
                }
            })
            .collect(),
    )
}

/// `B_J = {m : H_{J,m} ≠ ∅}` for one proper nonempty `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSet {
    /// zero-based branches of `J`, increasing
    pub j: Vec<usize>,
    conductor: MultiIndex,
    /// residual indices `m`, one entry per branch outside `J`
    pub members: BTreeSet<Vec<u64>>,
}

impl BSet {
    pub fn f_j(&self, m: &[u64]) -> MultiIndex {
        f_j(&self.conductor, &self.j, m)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Stratum of `n ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HLabel {
    /// `H_∅`: strictly below the conductor everywhere
    Under,
    /// `H_{J,m}`
    Stratum { j: Vec<usize>, m: Vec<u64> },
    /// `H_{I_0} = {n >= c}`
    Conductor,
}

impl fmt::Display for HLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HLabel::Under => write!(f, "H_empty"),
            HLabel::Conductor => write!(f, "H_all"),
            HLabel::Stratum { j, m } => {
                let j: Vec<String> = j.iter().map(|i| (i + 1).to_string()).collect();
                let m: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                write!(f, "H_{{{}}},({})", j.join(","), m.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn tacnode() -> SemigroupData {
        let mut elems = vec![mi(&[0, 0]), mi(&[1, 1])];
        for a in 2..=3 {
            for b in 2..=3 {
                elems.push(mi(&[a, b]));
            }
        }
        SemigroupData::from_box(mi(&[2, 2]), &elems).unwrap()
    }

    /// cusp y^2 = x^3 together with the line y = x
    fn cusp_line() -> SemigroupData {
        let elems: Vec<MultiIndex> = [
            [0, 0],
            [2, 1],
            [3, 1],
            [2, 2],
            [2, 3],
            [4, 2],
            [4, 3],
            [5, 2],
            [5, 3],
        ]
        .iter()
        .map(|v| mi(v))
        .collect();
        SemigroupData::from_box(mi(&[4, 2]), &elems).unwrap()
    }

    #[test]
    fn numerical_semigroups() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        assert_eq!(cusp.conductor(), &mi(&[2]));
        assert_eq!(cusp.delta(), 1);
        assert_eq!(cusp.box_elements(), vec![mi(&[0]), mi(&[2]), mi(&[3])]);

        let s = SemigroupData::from_numerical_generators(&[3, 4, 5]).unwrap();
        assert_eq!(s.conductor(), &mi(&[3]));
        assert_eq!(s.delta(), 2);
        assert!(!s.contains(&mi(&[1])) && !s.contains(&mi(&[2])));

        let reg = SemigroupData::from_numerical_generators(&[1]).unwrap();
        assert_eq!(reg.conductor(), &mi(&[0]));
        assert_eq!(reg.delta(), 0);

        let s34 = SemigroupData::from_numerical_generators(&[3, 4]).unwrap();
        assert_eq!((s34.conductor()[0], s34.delta()), (6, 3));
        let s25 = SemigroupData::from_numerical_generators(&[2, 5]).unwrap();
        assert_eq!((s25.conductor()[0], s25.delta()), (4, 2));
    }

    #[test]
    fn numerical_errors() {
        assert_eq!(
            SemigroupData::from_numerical_generators(&[2, 4]),
            Err(SemigroupError::GcdNotOne(2))
        );
        assert_eq!(
            SemigroupData::from_numerical_generators(&[]),
            Err(SemigroupError::NoGenerators)
        );
        assert_eq!(
            SemigroupData::from_numerical_generators(&[0, 1]),
            Err(SemigroupError::ZeroGenerator)
        );
    }

    #[test]
    fn box_validation() {
        let n = node();
        assert_eq!(n.delta(), 1);
        assert!(tacnode().is_gorenstein());
        assert_eq!(tacnode().delta(), 2);

        let err = SemigroupData::from_box(
            mi(&[1, 1]),
            &[mi(&[1, 1]), mi(&[1, 2]), mi(&[2, 1]), mi(&[2, 2])],
        )
        .unwrap_err();
        assert_eq!(err, SemigroupError::Validation("0 ∉ S".into()));

        let err = SemigroupData::from_box(mi(&[1, 1]), &[mi(&[0, 0]), mi(&[1, 1]), mi(&[2, 2])])
            .unwrap_err();
        assert!(err.to_string().contains("conductor property"), "{err}");

        // c = (2, 2) claimed for the node box: (1,1) already works
        let mut elems = vec![mi(&[0, 0])];
        for a in 1..=3 {
            for b in 1..=3 {
                elems.push(mi(&[a, b]));
            }
        }
        let err = SemigroupData::from_box(mi(&[2, 2]), &elems).unwrap_err();
        assert!(err.to_string().contains("not minimal"), "{err}");

        // (1,2) and (2,1) but not (1,1)
        let err = SemigroupData::from_box(
            mi(&[2, 2]),
            &[
                mi(&[0, 0]),
                mi(&[1, 2]),
                mi(&[2, 1]),
                mi(&[2, 2]),
                mi(&[2, 3]),
                mi(&[3, 2]),
                mi(&[3, 3]),
            ],
        )
        .unwrap_err();
        assert!(err.to_string().contains("min"), "{err}");

        let err = SemigroupData::from_box(mi(&[1]), &[mi(&[0]), mi(&[1]), mi(&[2]), mi(&[3])])
            .unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
    }

    #[test]
    fn step_dims() {
        let n = node();
        // (t1, t2) has value (1,1), so J_(1,0) / J_(2,0) is spanned by it
        assert_eq!(n.step_dim(&mi(&[1, 0]), 0).unwrap(), 1);
        assert_eq!(n.step_dim(&mi(&[1, 0]), 1).unwrap(), 0);
        assert_eq!(n.step_dim(&mi(&[0, 0]), 0).unwrap(), 1);
        assert_eq!(n.step_dim(&mi(&[0, 0]), 1).unwrap(), 1);
        assert_eq!(tacnode().step_dim(&mi(&[1, 1]), 1).unwrap(), 1);
        assert!(n.step_dim(&mi(&[3, 0]), 0).is_err());
    }

    #[test]
    fn l_values() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        assert_eq!(cusp.l_value(&mi(&[0])).unwrap(), 0);
        assert_eq!(cusp.l_value(&mi(&[3])).unwrap(), 2);
        let n = node();
        assert_eq!(n.l_value(&mi(&[1, 1])).unwrap(), 1);
        assert_eq!(n.l_value(&mi(&[2, 2])).unwrap(), 3);
        assert_eq!(n.l_value(&mi(&[2, 1])).unwrap(), 2);
        assert!(n.l_value(&mi(&[4, 0])).is_err());
        assert_eq!(n.l_extended(&[5, -1]), n.l_value(&mi(&[1, 0])).unwrap() + 4);
    }

    #[test]
    fn l_is_path_independent() {
        for s in [node(), tacnode(), cusp_line()] {
            let hi = s.conductor().add_scalar(2);
            for n in box_points(&MultiIndex::zeros(2), &hi) {
                let a = s.l_along_path(&n, &[0, 1]);
                let b = s.l_along_path(&n, &[1, 0]);
                assert_eq!(a, b, "path dependence at {n}");
                assert_eq!(a, s.l_value(&n).unwrap());
            }
        }
    }

    #[test]
    fn numerical_l_counts_members_below() {
        for gens in [[2u64, 3], [3, 4], [2, 5]] {
            let s = SemigroupData::from_numerical_generators(&gens).unwrap();
            for n in 0..=s.conductor()[0] + 2 {
                let count = (0..n).filter(|&k| s.contains(&mi(&[k]))).count() as u64;
                assert_eq!(s.l_value(&mi(&[n])).unwrap(), count);
            }
        }
    }

    #[test]
    fn gorenstein_flag() {
        assert!(SemigroupData::from_numerical_generators(&[2, 3])
            .unwrap()
            .is_gorenstein());
        assert!(!SemigroupData::from_numerical_generators(&[3, 4, 5])
            .unwrap()
            .is_gorenstein());
        assert!(tacnode().is_gorenstein());
        assert!(cusp_line().is_gorenstein());
        assert_eq!(cusp_line().delta(), 3);
    }

    #[test]
    fn under_conductor() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        assert_eq!(cusp.under_conductor_elements(), vec![mi(&[0])]);
        assert_eq!(
            tacnode().under_conductor_elements(),
            vec![mi(&[0, 0]), mi(&[1, 1])]
        );
        let reg = SemigroupData::from_numerical_generators(&[1]).unwrap();
        assert!(reg.under_conductor_elements().is_empty());
    }

    #[test]
    fn b_sets_examples() {
        let t = tacnode().b_sets();
        assert_eq!(t.len(), 2);
        assert!(t.values().all(BSet::is_empty));
        assert!(node().b_sets().values().all(BSet::is_empty));
        let cl = cusp_line().b_sets();
        assert!(cl[&vec![0]].is_empty());
        let b2 = &cl[&vec![1]];
        assert_eq!(
            b2.members.iter().cloned().collect::<Vec<_>>(),
            vec![vec![2]]
        );
        assert_eq!(b2.f_j(&[2]), mi(&[2, 2]));
        assert!(SemigroupData::from_numerical_generators(&[2, 3])
            .unwrap()
            .b_sets()
            .is_empty());
    }

    #[test]
    fn h_decomposition_labels() {
        let cusp = SemigroupData::from_numerical_generators(&[2, 3]).unwrap();
        let labels = cusp.h_decomposition(&mi(&[4])).unwrap();
        assert_eq!(
            labels,
            vec![
                (mi(&[0]), HLabel::Under),
                (mi(&[2]), HLabel::Conductor),
                (mi(&[3]), HLabel::Conductor),
                (mi(&[4]), HLabel::Conductor),
            ]
        );
        let t = tacnode().h_decomposition(&mi(&[3, 3])).unwrap();
        assert_eq!(t.iter().filter(|(_, l)| *l == HLabel::Under).count(), 2);
        assert!(t.iter().all(|(_, l)| *l
            != HLabel::Stratum {
                j: vec![0],
                m: vec![]
            }));

        let cl = cusp_line().h_decomposition(&mi(&[5, 3])).unwrap();
        let stratum = HLabel::Stratum {
            j: vec![1],
            m: vec![2],
        };
        let in_stratum: Vec<_> = cl
            .iter()
            .filter(|(_, l)| *l == stratum)
            .map(|(n, _)| n.clone())
            .collect();
        assert_eq!(in_stratum, vec![mi(&[2, 2]), mi(&[2, 3])]);
        assert!(cusp.h_decomposition(&mi(&[1])).is_err());
    }

    #[test]
    fn gorenstein_symmetries() {
        for s in [
            node(),
            tacnode(),
            cusp_line(),
            SemigroupData::from_numerical_generators(&[2, 5]).unwrap(),
        ] {
            let c = s.conductor().as_signed();
            for n in box_points(&MultiIndex::zeros(s.d()), s.conductor()) {
                let ns = n.as_signed();
                for i in 0..s.d() {
                    let mut mirror: Vec<i64> = c.iter().zip(&ns).map(|(a, b)| a - b).collect();
                    mirror[i] -= 1;
                    assert_eq!(
                        s.step_dim_extended(&ns, i) + s.step_dim_extended(&mirror, i),
                        1
                    );
                }
                let cn = s.conductor().checked_sub(&n).unwrap();
                assert_eq!(
                    s.l_value(&cn).unwrap() as i64 - s.l_value(&n).unwrap() as i64,
                    s.delta() as i64 - n.norm() as i64
                );
            }
        }
    }
}

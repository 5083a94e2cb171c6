//! The local ring `O` as a subspace of truncated jets.
//!
//! A model is built either from generators (closing their span under
//! multiplication) or from homogeneous linear conditions on the coefficients
//! `a_{i,e}` (taking the kernel and checking it is a ring). All dimension
//! queries reduce to ranks of the echelon basis restricted to column sets.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{kernel, RowEchelon};
use crate::series::{
    box_points, ElementSpec, MultiIndex, Rational, SeriesElement, SeriesError, Valuation,
};
use crate::valuesemigroup::{SemigroupData, SemigroupError};

/// Starting truncation per branch for automatic precision.
pub const DEFAULT_TRUNCATION: u64 = 8;
/// Largest total truncation `||N||` tried before giving up.
pub const MAX_TOTAL_TRUNCATION: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalRingError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("no generators given")]
    NoGenerators,
    #[error("branch count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "generator {index} is a zero divisor or the precision is too low (valuation {valuation})"
    )]
    ZeroDivisor { index: usize, valuation: String },
    #[error("generator {index} has different constant terms on different branches, so the ring is not local")]
    NotLocal { index: usize },
    #[error("condition {row} references branch {branch}, but there are only {d} branches")]
    BranchOutOfRange { row: usize, branch: usize, d: usize },
    #[error("condition {row} references a_({branch},{exponent}) beyond truncation {truncation}")]
    ConditionBeyondTruncation {
        row: usize,
        branch: usize,
        exponent: u64,
        truncation: String,
    },
    #[error("the conditions do not define a ring: {0}")]
    NotARing(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("step dimension {value} at {n} along branch {branch} is not 0 or 1")]
    StepDimension {
        n: String,
        branch: usize,
        value: usize,
    },
    #[error("precision did not stabilize up to total truncation {cap}: {last}")]
    Unstable { cap: u64, last: String },
}

/// Jet coordinates `(branch, exponent)`, `0 <= exponent <= N_branch`, in
/// graded order: exponent first, branch second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetCoordinates {
    truncation: MultiIndex,
    coords: Vec<(usize, u64)>,
    index: Vec<Vec<usize>>,
}

impl JetCoordinates {
    pub fn new(truncation: MultiIndex) -> Self {
        let d = truncation.dim();
        let top = truncation.entries().iter().copied().max().unwrap_or(0);
        let mut coords = Vec::new();
        let mut index: Vec<Vec<usize>> = (0..d)
            .map(|i| vec![0; truncation[i] as usize + 1])
            .collect();
        for e in 0..=top {
            for (i, slots) in index.iter_mut().enumerate() {
                if e <= truncation[i] {
                    slots[e as usize] = coords.len();
                    coords.push((i, e));
                }
            }
        }
        JetCoordinates {
            truncation,
            coords,
            index,
        }
    }

    pub fn d(&self) -> usize {
        self.truncation.dim()
    }

    pub fn truncation(&self) -> &MultiIndex {
        &self.truncation
    }

    /// Always `||N + 1||`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coordinate(&self, k: usize) -> (usize, u64) {
        self.coords[k]
    }

    pub fn position(&self, branch: usize, exponent: u64) -> Option<usize> {
        self.index.get(branch)?.get(exponent as usize).copied()
    }

    /// Columns `(i, e)` with `e < n_i`.
    pub fn below(&self, n: &MultiIndex) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&k| {
                let (i, e) = self.coords[k];
                e < n[i]
            })
            .collect()
    }

    pub fn vector(&self, s: &SeriesElement) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for i in 0..self.d() {
            for (&e, c) in s.branch(i) {
                if let Some(k) = self.position(i, e) {
                    v[k] = c.clone();
                }
            }
        }
        v
    }

    pub fn series(&self, v: &[Rational]) -> SeriesElement {
        let mut terms = vec![Vec::new(); self.d()];
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (i, e) = self.coords[k];
                terms[i].push((e, c.clone()));
            }
        }
        SeriesElement::from_terms(terms, self.truncation.clone()).expect("branch count matches")
    }

    pub fn unit_jet(&self, branch: usize, exponent: u64) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        v[self.index[branch][exponent as usize]] = Rational::one();
        v
    }
}

/// A subspace of truncated jets with a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpace {
    pub coords: JetCoordinates,
    pub basis: RowEchelon,
}

impl JetSpace {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn contains(&self, s: &SeriesElement) -> bool {
        self.basis.contains(&self.coords.vector(s))
    }

    pub fn basis_series(&self) -> Vec<SeriesElement> {
        self.basis
            .rows()
            .iter()
            .map(|r| self.coords.series(r))
            .collect()
    }
}

/// One homogeneous condition `sum coeff * a_{branch, exponent} = 0`.
/// Branches are zero-based here.
pub type ConditionRow = Vec<(usize, u64, Rational)>;

/// What a model was built from; kept so it can be rebuilt at a larger
/// truncation.
#[derive(Clone, Debug, PartialEq)]
pub enum RingSource {
    Generators(Vec<ElementSpec>),
    Conditions { d: usize, rows: Vec<ConditionRow> },
}

impl RingSource {
    pub fn d(&self) -> usize {
        match self {
            RingSource::Generators(g) => g.first().map_or(0, ElementSpec::branch_count),
            RingSource::Conditions { d, .. } => *d,
        }
    }

    pub fn build(&self, truncation: &MultiIndex) -> Result<LocalRingModel, LocalRingError> {
        match self {
            RingSource::Generators(g) => LocalRingModel::build_from_generators(g, truncation),
            RingSource::Conditions { d, rows } => {
                LocalRingModel::build_from_conditions(rows, *d, truncation)
            }
        }
    }
}

/// Truncated model of `O` with its invariants cached.
#[derive(Clone, Debug)]
pub struct LocalRingModel {
    source: RingSource,
    jets: JetSpace,
    delta: u64,
    conductor: MultiIndex,
    l_table: BTreeMap<MultiIndex, u64>,
}

impl LocalRingModel {
    /// Closes the span of `1` and the generators under multiplication.
    pub fn build_from_generators(
        gens: &[ElementSpec],
        truncation: &MultiIndex,
    ) -> Result<Self, LocalRingError> {
        if gens.is_empty() {
            return Err(LocalRingError::NoGenerators);
        }
        let d = truncation.dim();
        let coords = JetCoordinates::new(truncation.clone());
        let mut reduced = Vec::with_capacity(gens.len());
        for (index, g) in gens.iter().enumerate() {
            if g.branch_count() != d {
                return Err(LocalRingError::DimensionMismatch {
                    expected: d,
                    got: g.branch_count(),
                });
            }
            let s = g.eval(truncation)?;
            let c0 = s.coefficient(0, 0);
            if (1..d).any(|i| s.coefficient(i, 0) != c0) {
                return Err(LocalRingError::NotLocal { index });
            }
            let s = s.sub(&SeriesElement::constant(c0, truncation.clone()))?;
            let v = s.valuation();
            if v.contains(&Valuation::Infinite) {
                let valuation = v
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                return Err(LocalRingError::ZeroDivisor {
                    index,
                    valuation: format!("({valuation})"),
                });
            }
            reduced.push(s);
        }
        let mut basis = RowEchelon::new(coords.len());
        let one = SeriesElement::one(truncation.clone());
        basis.insert(coords.vector(&one));
        let mut frontier = vec![one];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for g in &reduced {
                    let p = f.mul(g)?;
                    if !p.is_zero() && basis.insert(coords.vector(&p)) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        Self::finish(
            RingSource::Generators(gens.to_vec()),
            JetSpace { coords, basis },
        )
    }

    /// Convenience wrapper treating each series as an exact polynomial.
    pub fn build_from_series(
        gens: &[SeriesElement],
        truncation: &MultiIndex,
    ) -> Result<Self, LocalRingError> {
        let specs: Vec<ElementSpec> = gens.iter().map(ElementSpec::from_series).collect();
        Self::build_from_generators(&specs, truncation)
    }

    /// Kernel of the conditions, validated to be a unital ring.
    pub fn build_from_conditions(
        rows: &[ConditionRow],
        d: usize,
        truncation: &MultiIndex,
    ) -> Result<Self, LocalRingError> {
        if truncation.dim() != d {
            return Err(LocalRingError::DimensionMismatch {
                expected: d,
                got: truncation.dim(),
            });
        }
        let coords = JetCoordinates::new(truncation.clone());
        let mut matrix = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let mut v = vec![Rational::zero(); coords.len()];
            for (branch, exponent, coeff) in row {
                if *branch >= d {
                    return Err(LocalRingError::BranchOutOfRange {
                        row: r + 1,
                        branch: branch + 1,
                        d,
                    });
                }
                let k = coords.position(*branch, *exponent).ok_or_else(|| {
                    LocalRingError::ConditionBeyondTruncation {
                        row: r + 1,
                        branch: branch + 1,
                        exponent: *exponent,
                        truncation: truncation.to_string(),
                    }
                })?;
                v[k] += coeff;
            }
            matrix.push(v);
        }
        let basis = kernel(coords.len(), &matrix);
        let jets = JetSpace { coords, basis };
        if !jets.contains(&SeriesElement::one(truncation.clone())) {
            return Err(LocalRingError::NotARing(
                "the constant 1 does not satisfy the conditions".into(),
            ));
        }
        let elems = jets.basis_series();
        for (a, x) in elems.iter().enumerate() {
            for y in &elems[a..] {
                let p = x.mul(y)?;
                if !jets.contains(&p) {
                    return Err(LocalRingError::NotARing(format!(
                        "the product of {x} and {y} leaves the space"
                    )));
                }
            }
        }
        Self::finish(
            RingSource::Conditions {
                d,
                rows: rows.to_vec(),
            },
            jets,
        )
    }

    /// Builds from `source`, doubling the truncation from the default until
    /// the stability check passes.
    pub fn auto(source: &RingSource) -> Result<Self, LocalRingError> {
        Self::auto_from(source, &MultiIndex::filled(source.d(), DEFAULT_TRUNCATION))
    }

    pub fn auto_from(source: &RingSource, start: &MultiIndex) -> Result<Self, LocalRingError> {
        let mut n = start.clone();
        let mut last;
        loop {
            last = match source.build(&n) {
                Ok(model) => {
                    let report = model.stability_check()?;
                    if report.is_stable() {
                        return Ok(model);
                    }
                    report.to_string()
                }
                Err(
                    e @ (LocalRingError::InsufficientTruncation(_)
                    | LocalRingError::ZeroDivisor { .. }
                    | LocalRingError::ConditionBeyondTruncation { .. }),
                ) => e.to_string(),
                Err(e) => return Err(e),
            };
            let next = n.scale(2).add_scalar(1).add_scalar(1);
            if next.norm() > MAX_TOTAL_TRUNCATION {
                return Err(LocalRingError::Unstable {
                    cap: MAX_TOTAL_TRUNCATION,
                    last,
                });
            }
            n = next;
        }
    }

    fn finish(source: RingSource, jets: JetSpace) -> Result<Self, LocalRingError> {
        let n = jets.coords.truncation().clone();
        let d = n.dim();
        let delta = (jets.coords.len() - jets.dim()) as u64;
        let mut conductor = Vec::with_capacity(d);
        for i in 0..d {
            let mut c = n[i] + 1;
            while c > 0 && jets.basis.contains(&jets.coords.unit_jet(i, c - 1)) {
                c -= 1;
            }
            if c > n[i] {
                return Err(LocalRingError::InsufficientTruncation(format!(
                    "no monomial t_{}^e with e <= {} lies in the ring, so the conductor is not visible",
                    i + 1,
                    n[i]
                )));
            }
            conductor.push(c);
        }
        let conductor = MultiIndex::new(conductor);
        let hi = conductor.add_scalar(2).meet(&n.add_scalar(1));
        let l_table = box_points(&MultiIndex::zeros(d), &hi)
            .into_iter()
            .map(|m| {
                let l = jets.basis.column_rank(&jets.coords.below(&m)) as u64;
                (m, l)
            })
            .collect();
        Ok(LocalRingModel {
            source,
            jets,
            delta,
            conductor,
            l_table,
        })
    }

    pub fn source(&self) -> &RingSource {
        &self.source
    }

    pub fn jets(&self) -> &JetSpace {
        &self.jets
    }

    pub fn d(&self) -> usize {
        self.conductor.dim()
    }

    pub fn truncation(&self) -> &MultiIndex {
        self.jets.coords.truncation()
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn conductor(&self) -> &MultiIndex {
        &self.conductor
    }

    /// `l(n) = dim O / J_n` for `n <= N + 1`.
    pub fn l_value(&self, n: &MultiIndex) -> Result<u64, LocalRingError> {
        self.check_dim(n)?;
        if let Some(&l) = self.l_table.get(n) {
            return Ok(l);
        }
        if n.dominated_by(&self.truncation().add_scalar(1)) {
            return Ok(self.jets.basis.column_rank(&self.jets.coords.below(n)) as u64);
        }
        Err(LocalRingError::InsufficientTruncation(format!(
            "l{n} needs truncation at least {n} - 1, have {}",
            self.truncation()
        )))
    }

    /// `dim J_n / J_{n + e_i}`.
    pub fn step_dim(&self, n: &MultiIndex, i: usize) -> Result<u8, LocalRingError> {
        let up = n.add(&MultiIndex::unit(n.dim(), i));
        let value = (self.l_value(&up)? - self.l_value(n)?) as usize;
        if value > 1 {
            return Err(LocalRingError::StepDimension {
                n: n.to_string(),
                branch: i + 1,
                value,
            });
        }
        Ok(value as u8)
    }

    /// `n ∈ S` iff every step out of `J_n` is one-dimensional.
    pub fn contains_valuation(&self, n: &MultiIndex) -> Result<bool, LocalRingError> {
        for i in 0..self.d() {
            if self.step_dim(n, i)? == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `S ∩ [0, c + 1]` with `c` and `δ`, validated combinatorially.
    pub fn semigroup_box(&self) -> Result<SemigroupData, LocalRingError> {
        let top = self.conductor.add_scalar(1);
        let mut elements = Vec::new();
        for n in box_points(&MultiIndex::zeros(self.d()), &top) {
            if self.contains_valuation(&n)? {
                elements.push(n);
            }
        }
        let s = SemigroupData::from_box(self.conductor.clone(), &elements)?;
        if s.delta() != self.delta {
            return Err(LocalRingError::InsufficientTruncation(format!(
                "delta from the jet space is {} but the semigroup gives {}",
                self.delta,
                s.delta()
            )));
        }
        Ok(s)
    }

    /// Rebuilds at truncation `2N + 2` and lists every invariant that moved.
    pub fn stability_check(&self) -> Result<StabilityReport, LocalRingError> {
        let bigger = self.truncation().scale(2).add_scalar(2);
        let other = match self.source.build(&bigger) {
            Ok(m) => m,
            Err(LocalRingError::InsufficientTruncation(msg)) => {
                return Ok(StabilityReport {
                    truncation: self.truncation().clone(),
                    rebuilt_at: bigger,
                    drift: vec![format!("rebuild failed: {msg}")],
                })
            }
            Err(e) => return Err(e),
        };
        let mut drift = Vec::new();
        if self.conductor != other.conductor {
            drift.push(format!(
                "conductor {} became {}",
                self.conductor, other.conductor
            ));
        }
        if self.delta != other.delta {
            drift.push(format!("delta {} became {}", self.delta, other.delta));
        }
        if drift.is_empty() {
            let top = self.conductor.add_scalar(1);
            for n in box_points(&MultiIndex::zeros(self.d()), &top) {
                let here = self.l_value(&n).ok();
                let there = other.l_value(&n).ok();
                if here != there {
                    drift.push(format!("l{n} changed from {here:?} to {there:?}"));
                }
                let here = self.contains_valuation(&n).ok();
                let there = other.contains_valuation(&n).ok();
                if here != there {
                    drift.push(format!(
                        "membership of {n} changed from {here:?} to {there:?}"
                    ));
                }
            }
        }
        Ok(StabilityReport {
            truncation: self.truncation().clone(),
            rebuilt_at: bigger,
            drift,
        })
    }

    fn check_dim(&self, n: &MultiIndex) -> Result<(), LocalRingError> {
        if n.dim() != self.d() {
            return Err(LocalRingError::DimensionMismatch {
                expected: self.d(),
                got: n.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub truncation: MultiIndex,
    pub rebuilt_at: MultiIndex,
    pub drift: Vec<String>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.drift.is_empty()
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_stable() {
            write!(
                f,
                "stable: truncation {} agrees with {}",
                self.truncation, self.rebuilt_at
            )
        } else {
            write!(
                f,
                "unstable: truncation {} vs {}: {}",
                self.truncation,
                self.rebuilt_at,
                self.drift.join("; ")
            )
        }
    }
}

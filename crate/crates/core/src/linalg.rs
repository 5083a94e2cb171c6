//! Reduced row echelon form over exact rationals.

use num_traits::{One, Zero};

use crate::series::Rational;

/// A subspace of `Q^ncols` kept as a reduced row echelon basis: pivots are
/// strictly increasing, equal to 1, and their columns are zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Rational>>>(ncols: usize, rows: I) -> Self {
        let mut e = RowEchelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the row space.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.ncols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Rank of the basis restricted to the given columns.
    pub fn column_rank(&self, cols: &[usize]) -> usize {
        let projected = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect::<Vec<_>>());
        RowEchelon::from_rows(cols.len(), projected).rank()
    }

    pub fn is_valid_rref(&self) -> bool {
        self.pivots.windows(2).all(|w| w[0] < w[1])
            && self
                .rows
                .iter()
                .zip(&self.pivots)
                .all(|(r, &p)| r[p].is_one() && r[..p].iter().all(Zero::is_zero))
            && self.pivots.iter().enumerate().all(|(i, &p)| {
                self.rows
                    .iter()
                    .enumerate()
                    .all(|(j, r)| j == i || r[p].is_zero())
            })
    }
}

/// Basis of `{x : A x = 0}` for the given condition rows.
pub fn kernel(ncols: usize, conditions: &[Vec<Rational>]) -> RowEchelon {
    let a = RowEchelon::from_rows(ncols, conditions.iter().cloned());
    let mut basis = RowEchelon::new(ncols);
    for free in (0..ncols).filter(|c| !a.pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in a.rows.iter().zip(&a.pivots) {
            v[p] = -row[free].clone();
        }
        basis.insert(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn insert_maintains_rref() {
        let mut e = RowEchelon::new(4);
        assert!(e.insert(r(&[0, 2, 4, 0])));
        assert!(e.insert(r(&[1, 1, 1, 1])));
        assert!(!e.insert(r(&[2, 4, 6, 2])));
        assert!(e.insert(r(&[0, 0, 1, 1])));
        assert_eq!(e.rank(), 3);
        assert_eq!(e.pivots(), &[0, 1, 2]);
        assert!(e.is_valid_rref());
        assert!(e.contains(&r(&[1, 0, 0, 2])));
        assert!(!e.contains(&r(&[0, 0, 0, 1])));
    }

    #[test]
    fn kernel_of_diagonal_condition() {
        // x0 - x1 = 0 in Q^3
        let k = kernel(3, &[r(&[1, -1, 0])]);
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&r(&[1, 1, 0])));
        assert!(k.contains(&r(&[0, 0, 5])));
        assert!(!k.contains(&r(&[1, 0, 0])));
    }

    #[test]
    fn column_rank_projects() {
        let e = RowEchelon::from_rows(3, vec![r(&[1, 0, 1]), r(&[0, 1, 1])]);
        assert_eq!(e.column_rank(&[2]), 1);
        assert_eq!(e.column_rank(&[0, 1]), 2);
        assert_eq!(e.column_rank(&[]), 0);
    }
}

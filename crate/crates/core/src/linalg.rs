//! Dense elimination over a [`Field`].
//!
//! Everything here is sequential; callers parallelise across primes.

use crate::scalars::Field;

/// Row-echelon form built one row at a time. Stored rows are normalised to
/// a leading 1 but not back-substituted, so inserting a row costs one pass
/// over the existing pivots in increasing column order.
///
/// Rows may carry a trailing block of `width - ncols` columns that is
/// transformed along with the row but never receives a pivot. Seeding that
/// block with a unit vector turns dependent rows into left-kernel vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Self::with_tail(field, ncols, 0)
    }

    pub fn with_tail(field: F, ncols: usize, tail: usize) -> Self {
        Echelon { field, ncols, width: ncols + tail, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` in place. Returns the first column left nonzero that
    /// has no pivot yet, or `None` if the pivot part reduced to zero.
    pub fn reduce(&self, row: &mut [F::Elem]) -> Option<usize> {
        debug_assert_eq!(row.len(), self.width);
        let f = &self.field;
        for col in 0..self.ncols {
            if f.is_zero(&row[col]) {
                continue;
            }
            match self.pivot_row[col] {
                Some(r) => {
                    let factor = f.neg(&row[col]);
                    f.axpy(&mut row[col..], &factor, &self.rows[r][col..]);
                }
                None => return Some(col),
            }
        }
        None
    }

    /// Inserts a row; returns its pivot column if it was independent.
    /// A dependent row is handed back fully reduced through `Err`.
    pub fn insert(&mut self, mut row: Vec<F::Elem>) -> Result<usize, Vec<F::Elem>> {
        match self.reduce(&mut row) {
            None => Err(row),
            Some(col) => {
                let f = &self.field;
                let inv = f.inv(&row[col]).expect("pivot is nonzero");
                for x in row[col..].iter_mut() {
                    *x = f.mul(x, &inv);
                }
                self.pivot_row[col] = Some(self.rows.len());
                self.rows.push(row);
                Ok(col)
            }
        }
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduced row-echelon form: rows sorted by pivot, each pivot column a
    /// unit vector.
    pub fn into_rref(self) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
        let Echelon { field: f, ncols, mut rows, pivot_row, .. } = self;
        let pivots: Vec<usize> = (0..ncols).filter(|&c| pivot_row[c].is_some()).collect();
        let mut sorted: Vec<Vec<F::Elem>> = Vec::with_capacity(rows.len());
        for &c in &pivots {
            sorted.push(std::mem::take(&mut rows[pivot_row[c].unwrap()]));
        }
        // eliminate above each pivot, last pivot first
        for k in (0..pivots.len()).rev() {
            let c = pivots[k];
            let (above, rest) = sorted.split_at_mut(k);
            let piv = &rest[0];
            for row in above.iter_mut() {
                if !f.is_zero(&row[c]) {
                    let factor = f.neg(&row[c]);
                    f.axpy(&mut row[c..], &factor, &piv[c..]);
                }
            }
        }
        (sorted, pivots)
    }
}

/// Reduced row-echelon form of a list of rows of length `ncols`.
pub fn rref<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    let mut ech = Echelon::new(field.clone(), ncols);
    for r in rows {
        let _ = ech.insert(r.clone());
    }
    ech.into_rref()
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> usize {
    let mut ech = Echelon::new(field.clone(), ncols);
    rows.iter().filter(|r| ech.insert((*r).clone()).is_ok()).count()
}

/// Basis of `{x : R x = 0}`, one vector per free column, in RREF-dual form
/// (vector for free column `f` has a 1 at `f` and zeros at the other free
/// columns).
pub fn nullspace<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let (reduced, pivots) = rref(field, rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = field.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Basis of `{y : yᵀ R = 0}` for the rows of `R`, as coefficient vectors of
/// length `rows.len()`. Also returns the rank of `R`.
pub fn left_kernel<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> (Vec<Vec<F::Elem>>, usize) {
    let h = rows.len();
    let mut ech = Echelon::with_tail(field.clone(), ncols, h);
    let mut kernel = Vec::new();
    for (k, mut row) in rows.into_iter().enumerate() {
        row.resize(ncols + h, field.zero());
        row[ncols + k] = field.one();
        if let Err(reduced) = ech.insert(row) {
            kernel.push(reduced[ncols..].to_vec());
        }
    }
    (kernel, ech.rank())
}

/// Solves `M X = B` for square invertible `M`; `rhs` holds the columns of
/// `B`. Returns `None` if `M` is singular.
pub fn solve<F: Field>(field: &F, m: &[Vec<F::Elem>], rhs: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let d = m.len();
    let k = rhs.len();
    let rows: Vec<Vec<F::Elem>> = (0..d)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend(rhs.iter().map(|col| col[i].clone()));
            r
        })
        .collect();
    let mut ech = Echelon::with_tail(field.clone(), d, k);
    for r in rows {
        ech.insert(r).ok()?;
    }
    let (reduced, _) = ech.into_rref();
    Some((0..k).map(|j| reduced.iter().map(|row| row[d + j].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{CyclotomicField, PrimeField};
    use proptest::prelude::*;

    fn mat(f: &PrimeField, rows: &[&[i64]]) -> Vec<Vec<u32>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_and_pivots_small() {
        let f = PrimeField::new(101, 1, None).unwrap();
        let m = mat(&f, &[&[0, 1, 2], &[0, 2, 4], &[1, 0, 1]]);
        assert_eq!(rank(&f, &m, 3), 2);
        let (r, piv) = rref(&f, &m, 3);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r[0], vec![1, 0, 1]);
        assert_eq!(r[1], vec![0, 1, 2]);
    }

    #[test]
    fn nullspace_over_rationals() {
        let q = CyclotomicField::new(1).unwrap();
        let rows = vec![vec![q.from_i64(1), q.from_i64(1), q.from_i64(0)]];
        let ns = nullspace(&q, &rows, 3);
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], vec![q.from_i64(-1), q.from_i64(1), q.from_i64(0)]);
        assert_eq!(ns[1], vec![q.from_i64(0), q.from_i64(0), q.from_i64(1)]);
    }

    #[test]
    fn solve_two_by_two() {
        let f = PrimeField::new(13, 1, None).unwrap();
        let m = mat(&f, &[&[2, 1], &[1, 1]]);
        let x = solve(&f, &m, &[vec![3, 2]]).unwrap();
        assert_eq!(x[0], vec![1, 1]);
        assert!(solve(&f, &mat(&f, &[&[1, 1], &[2, 2]]), &[vec![0, 0]]).is_none());
    }

    proptest! {
        #[test]
        fn kernels_are_kernels(entries in proptest::collection::vec(0u32..7, 20)) {
            let f = PrimeField::new(7, 1, None).unwrap();
            let rows: Vec<Vec<u32>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            let ns = nullspace(&f, &rows, 5);
            let r = rank(&f, &rows, 5);
            prop_assert_eq!(ns.len() + r, 5);
            for v in &ns {
                for row in &rows {
                    let dot = row.iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    prop_assert_eq!(dot, 0);
                }
            }
            let (lk, r2) = left_kernel(&f, rows.clone(), 5);
            prop_assert_eq!(r2, r);
            prop_assert_eq!(lk.len() + r, rows.len());
            for y in &lk {
                for c in 0..5 {
                    let dot = rows.iter().zip(y).fold(0, |acc, (row, b)| f.add(&acc, &f.mul(&row[c], b)));
                    prop_assert_eq!(dot, 0);
                }
            }
        }
    }
}

//! The word basis of `V^{⊗m}` and lazy braid-group operators on it.
//!
//! A word `(w_1, ..., w_m)` has linear index `Σ w_k n^{m-k}`: the first
//! letter is the most significant digit, so index order is lexicographic
//! order. The generator `c_i` acts on letters `i, i+1` (1-based).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::braiding::BraidedSpace;
use crate::scalars::{Field, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("vector of length {got} does not match n^m = {expected}")]
    DimensionMismatch { expected: u64, got: u64 },
    #[error("generator position {i} out of range for degree {m}")]
    InvalidPosition { i: usize, m: usize },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("n^m overflows the word index")]
    TooLarge,
}

/// `(index, coefficient)` pairs, sorted by index, no explicit zeros.
pub type SparseVec<E> = Vec<(u64, E)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, n: usize) -> u64 {
        self.0.iter().fold(0u64, |acc, &d| acc * n as u64 + d as u64)
    }

    pub fn from_index(mut idx: u64, n: usize, m: usize) -> Word {
        let mut digits = vec![0u32; m];
        for k in (0..m).rev() {
            digits[k] = (idx % n as u64) as u32;
            idx /= n as u64;
        }
        Word(digits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| format!("x{d}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `n^m`, or an error if it does not fit in a word index.
pub fn ambient_dim(n: usize, m: usize) -> Result<u64, TensorError> {
    (n as u64).checked_pow(m as u32).ok_or(TensorError::TooLarge)
}

/// A braiding with coefficients mapped into a working field.
#[derive(Debug, Clone)]
pub struct LocalBraiding<F: Field> {
    pub n: usize,
    pub field: F,
    /// `images[i*n + j] = c(x_i⊗x_j)` as `(k*n + l, coefficient)`.
    pub images: Vec<Vec<(u64, F::Elem)>>,
    monomial: bool,
}

impl<F: Field> LocalBraiding<F> {
    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn transpose(&self) -> LocalBraiding<F> {
        let n2 = self.n * self.n;
        let mut images = vec![Vec::new(); n2];
        for (src, img) in self.images.iter().enumerate() {
            for (dst, c) in img {
                images[*dst as usize].push((src as u64, c.clone()));
            }
        }
        for img in images.iter_mut() {
            img.sort_by_key(|(p, _)| *p);
        }
        let monomial = images.iter().all(|img| img.len() == 1);
        LocalBraiding { n: self.n, field: self.field.clone(), images, monomial }
    }
}

impl BraidedSpace {
    /// Maps the coefficients into `field`. A coefficient that vanishes in
    /// the target makes the prime unusable.
    pub fn over<F: Field>(&self, field: &F) -> Result<LocalBraiding<F>, ScalarError> {
        let n = self.dim();
        let mut images = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let img = self
                    .image(i, j)
                    .iter()
                    .map(|(p, c)| {
                        let v = field.from_cyclotomic(self.field(), c)?;
                        if field.is_zero(&v) {
                            return Err(ScalarError::BadPrime(field.characteristic()));
                        }
                        Ok((*p as u64, v))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                images.push(img);
            }
        }
        let monomial = images.iter().all(|img| img.len() == 1);
        Ok(LocalBraiding { n, field: field.clone(), images, monomial })
    }
}

fn stride(n: usize, m: usize, i: usize) -> u64 {
    (n as u64).pow((m - i - 1) as u32)
}

/// Sorts by index, merges duplicates and drops zeros.
pub fn normalize<F: Field>(field: &F, mut v: Vec<(u64, F::Elem)>) -> SparseVec<F::Elem> {
    v.sort_by_key(|(k, _)| *k);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = field.add(lc, &c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !field.is_zero(c));
    out
}

fn collect_map<F: Field>(field: &F, map: HashMap<u64, F::Elem>) -> SparseVec<F::Elem> {
    let mut v: SparseVec<F::Elem> = map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
    v.sort_by_key(|(k, _)| *k);
    v
}

/// `c_i` on a sparse vector of `V^{⊗m}`; `i` is 1-based and assumed valid.
pub fn apply_generator_sparse<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    i: usize,
    v: &[(u64, F::Elem)],
) -> SparseVec<F::Elem> {
    let f = &lb.field;
    let n2 = (lb.n * lb.n) as u64;
    let s = stride(lb.n, m, i);
    if lb.monomial {
        // c permutes pairs, so distinct words stay distinct
        let mut out: SparseVec<F::Elem> = v
            .iter()
            .map(|(idx, x)| {
                let pair = (idx / s) % n2;
                let (np, c) = &lb.images[pair as usize][0];
                (idx - pair * s + np * s, f.mul(c, x))
            })
            .collect();
        out.sort_by_key(|(k, _)| *k);
        return out;
    }
    let mut acc: HashMap<u64, F::Elem> = HashMap::with_capacity(v.len() * 2);
    for (idx, x) in v {
        let pair = (idx / s) % n2;
        let base = idx - pair * s;
        for (np, c) in &lb.images[pair as usize] {
            let t = f.mul(c, x);
            acc.entry(base + np * s).and_modify(|e| *e = f.add(e, &t)).or_insert(t);
        }
    }
    collect_map(f, acc)
}

/// `c_i` on a dense vector of length `n^m`.
pub fn apply_generator<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    i: usize,
    v: &[F::Elem],
) -> Result<Vec<F::Elem>, TensorError> {
    let len = ambient_dim(lb.n, m)?;
    if v.len() as u64 != len {
        return Err(TensorError::DimensionMismatch { expected: len, got: v.len() as u64 });
    }
    if i == 0 || i >= m {
        return Err(TensorError::InvalidPosition { i, m });
    }
    let f = &lb.field;
    let n2 = (lb.n * lb.n) as u64;
    let s = stride(lb.n, m, i);
    let mut out = vec![f.zero(); v.len()];
    for (idx, x) in v.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        let idx = idx as u64;
        let pair = (idx / s) % n2;
        let base = idx - pair * s;
        for (np, c) in &lb.images[pair as usize] {
            let k = (base + np * s) as usize;
            out[k] = f.add(&out[k], &f.mul(c, x));
        }
    }
    Ok(out)
}

pub fn to_dense<F: Field>(field: &F, v: &[(u64, F::Elem)], len: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    for (k, c) in v {
        out[*k as usize] = c.clone();
    }
    out
}

pub fn to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter().enumerate().filter(|(_, c)| !field.is_zero(c)).map(|(k, c)| (k as u64, c.clone())).collect()
}

/// An operator on `V^{⊗m}` kept in factored form. Factors are applied in
/// list order; each factor is a sum of monomials, and a monomial
/// `[i_1, ..., i_k]` stands for the composite `c_{i_1} ∘ ... ∘ c_{i_k}`
/// (so `c_{i_k}` acts first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOperator {
    degree: usize,
    factors: Vec<Vec<Vec<usize>>>,
}

impl TensorOperator {
    pub fn identity(m: usize) -> Self {
        TensorOperator { degree: m, factors: Vec::new() }
    }

    pub fn monomial(m: usize, gens: Vec<usize>) -> Result<Self, TensorError> {
        Self::sum(m, vec![gens])
    }

    pub fn sum(m: usize, terms: Vec<Vec<usize>>) -> Result<Self, TensorError> {
        if let Some(&i) = terms.iter().flatten().find(|&&i| i == 0 || i >= m) {
            return Err(TensorError::InvalidPosition { i, m });
        }
        Ok(TensorOperator { degree: m, factors: vec![terms] })
    }

    /// `other ∘ self`.
    pub fn then(mut self, other: TensorOperator) -> Self {
        assert_eq!(self.degree, other.degree);
        self.factors.extend(other.factors);
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[Vec<Vec<usize>>] {
        &self.factors
    }

    pub fn apply_sparse<F: Field>(&self, lb: &LocalBraiding<F>, v: &[(u64, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &lb.field;
        let mut cur: SparseVec<F::Elem> = v.to_vec();
        for factor in &self.factors {
            let mut parts = Vec::new();
            for mono in factor {
                let mut w = cur.clone();
                for &g in mono.iter().rev() {
                    w = apply_generator_sparse(lb, self.degree, g, &w);
                }
                parts.extend(w);
            }
            cur = normalize(f, parts);
        }
        cur
    }

    pub fn apply<F: Field>(&self, lb: &LocalBraiding<F>, v: &[F::Elem]) -> Result<Vec<F::Elem>, TensorError> {
        let len = ambient_dim(lb.n, self.degree)?;
        if v.len() as u64 != len {
            return Err(TensorError::DimensionMismatch { expected: len, got: v.len() as u64 });
        }
        let f = &lb.field;
        let mut cur = v.to_vec();
        for factor in &self.factors {
            let mut acc = vec![f.zero(); cur.len()];
            for mono in factor {
                let mut w = cur.clone();
                for &g in mono.iter().rev() {
                    w = apply_generator(lb, self.degree, g, &w)?;
                }
                for (a, x) in acc.iter_mut().zip(&w) {
                    *a = f.add(a, x);
                }
            }
            cur = acc;
        }
        Ok(cur)
    }
}

/// Reduced word of `sigma` (one-line notation, `sigma[k]` in `0..m`), found
/// by repeatedly moving the largest misplaced entry to its place. Under the
/// flip, the lift sends the word `(0, 1, ..., m-1)` to `(sigma[0], ...,
/// sigma[m-1])`.
pub fn reduced_word(sigma: &[usize]) -> Result<Vec<usize>, TensorError> {
    let m = sigma.len();
    let mut seen = vec![false; m];
    for &s in sigma {
        if s >= m || seen[s] {
            return Err(TensorError::InvalidPermutation(m));
        }
        seen[s] = true;
    }
    let mut w = sigma.to_vec();
    let mut swaps = Vec::new();
    for v in (0..m).rev() {
        let mut p = w.iter().position(|&x| x == v).unwrap();
        while p < v {
            w.swap(p, p + 1);
            swaps.push(p + 1);
            p += 1;
        }
    }
    Ok(swaps)
}

/// The lift `c_{i_1} ⋯ c_{i_k}` of a reduced word of `sigma`.
pub fn matsumoto_lift(m: usize, sigma: &[usize]) -> Result<TensorOperator, TensorError> {
    if sigma.len() != m {
        return Err(TensorError::InvalidPermutation(m));
    }
    TensorOperator::monomial(m, reduced_word(sigma)?)
}

/// `c_1 c_2 ⋯ c_k` on `V^{⊗m}` read left to right (`c_1` acts first), so
/// the first letter moves to position `k + 1`. The identity for `k = 0`.
pub fn shuffle_factor(m: usize, k: usize) -> Result<TensorOperator, TensorError> {
    if k >= m.max(1) {
        return Err(TensorError::InvalidPosition { i: k, m });
    }
    TensorOperator::monomial(m, (1..=k).rev().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braiding::{diagonal_braiding, jordanian_braiding, rack_braiding};
    use crate::racks::{affine_rack, constant_cocycle};
    use crate::scalars::{CyclotomicField, PrimeField};
    use proptest::prelude::*;

    fn q() -> CyclotomicField {
        CyclotomicField::new(1).unwrap()
    }

    fn fk3() -> BraidedSpace {
        let k = q();
        let r = affine_rack(&[3], &[vec![2]]).unwrap();
        rack_braiding(&r, &constant_cocycle(&r, &k, &k.from_i64(-1))).unwrap()
    }

    fn diag3() -> BraidedSpace {
        let k = q();
        let q: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| k.from_i64((2 + i * 3 + j) as i64)).collect()).collect();
        diagonal_braiding(&k, &q).unwrap()
    }

    fn all_perms(m: usize) -> Vec<Vec<usize>> {
        if m == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(m - 1) {
            for pos in 0..m {
                let mut q = p.clone();
                q.insert(pos, m - 1);
                out.push(q);
            }
        }
        out
    }

    fn all_reduced_words(sigma: &[usize]) -> Vec<Vec<usize>> {
        // every descent i gives sigma = swap_i(t) with t one inversion shorter
        let m = sigma.len();
        let mut out = Vec::new();
        let mut any = false;
        for i in 0..m.saturating_sub(1) {
            if sigma[i] > sigma[i + 1] {
                any = true;
                let mut t = sigma.to_vec();
                t.swap(i, i + 1);
                for mut w in all_reduced_words(&t) {
                    w.insert(0, i + 1);
                    out.push(w);
                }
            }
        }
        if !any {
            out.push(Vec::new());
        }
        out
    }

    #[test]
    fn word_index_round_trip() {
        let w = Word(vec![2, 0, 1]);
        assert_eq!(w.index(3), 19);
        assert_eq!(Word::from_index(19, 3, 3), w);
        assert_eq!(w.to_string(), "x2 x0 x1");
    }

    #[test]
    fn diagonal_generator() {
        let b = diag3();
        let k = q();
        let lb = b.over(&k).unwrap();
        // word (1,2) -> q_12 (2,1)
        let out = apply_generator_sparse(&lb, 2, 1, &[(5, k.one())]);
        assert_eq!(out, vec![(7, k.from_i64(2 + 3 + 2))]);
    }

    #[test]
    fn fk3_generator() {
        let k = q();
        let lb = fk3().over(&k).unwrap();
        let out = apply_generator_sparse(&lb, 2, 1, &[(1, k.one())]);
        assert_eq!(out, vec![(6, k.from_i64(-1))]);
        let dense = apply_generator(&lb, 2, 1, &to_dense(&k, &[(1, k.one())], 9)).unwrap();
        assert_eq!(to_sparse(&k, &dense), out);
        assert!(matches!(apply_generator(&lb, 2, 2, &dense), Err(TensorError::InvalidPosition { .. })));
        assert!(matches!(apply_generator(&lb, 3, 1, &dense), Err(TensorError::DimensionMismatch { .. })));
    }

    #[test]
    fn generator_then_inverse_is_identity() {
        let k = q();
        let b = jordanian_braiding(&k, 2, &k.from_i64(3)).unwrap();
        let lb = b.over(&k).unwrap();
        // c⁻¹ for c = (g⊗id)τ is τ(g⁻¹⊗id) = (id⊗g⁻¹)τ
        let inv = {
            let m = b.matrix();
            let n2 = m.len();
            let cols: Vec<Vec<_>> = (0..n2).map(|c| (0..n2).map(|r| if r == c { k.one() } else { k.zero() }).collect()).collect();
            crate::linalg::solve(&k, &m, &cols).unwrap()
        };
        let inv_coeffs: crate::braiding::CoefficientList = (0..4)
            .flat_map(|c| (0..4).map(move |r| (c, r)))
            .filter(|&(c, r)| !k.is_zero(&inv[c][r]))
            .map(|(c, r)| (c / 2, c % 2, r / 2, r % 2, inv[c][r].clone()))
            .collect();
        let binv = crate::braiding::custom_braiding(2, &k, inv_coeffs).unwrap();
        let lbinv = binv.over(&k).unwrap();
        for w in 0..8u64 {
            let v = vec![(w, k.from_i64(w as i64 + 1))];
            for i in 1..3 {
                let there = apply_generator_sparse(&lb, 3, i, &v);
                assert_eq!(apply_generator_sparse(&lbinv, 3, i, &there), v);
            }
        }
    }

    #[test]
    fn reduced_words_have_inversion_length() {
        for m in 1..=5 {
            for sigma in all_perms(m) {
                let inv = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| sigma[i] > sigma[j]).count();
                assert_eq!(reduced_word(&sigma).unwrap().len(), inv);
            }
        }
        assert!(reduced_word(&[0, 0]).is_err());
    }

    #[test]
    fn lift_under_flip_realises_sigma() {
        let k = q();
        let flip = diagonal_braiding(&k, &vec![vec![k.one(); 4]; 4]).unwrap();
        let lb = flip.over(&k).unwrap();
        for sigma in all_perms(4) {
            let op = matsumoto_lift(4, &sigma).unwrap();
            let id = Word(vec![0, 1, 2, 3]).index(4);
            let target = Word(sigma.iter().map(|&s| s as u32).collect()).index(4);
            assert_eq!(op.apply_sparse(&lb, &[(id, k.one())]), vec![(target, k.one())]);
        }
    }

    #[test]
    fn identity_and_small_lifts() {
        let k = q();
        let lb = fk3().over(&k).unwrap();
        let v: SparseVec<_> = vec![(5, k.from_i64(2)), (20, k.one())];
        assert_eq!(matsumoto_lift(3, &[0, 1, 2]).unwrap().apply_sparse(&lb, &v), v);
        assert_eq!(TensorOperator::identity(3).apply_sparse(&lb, &v), v);
        let c = matsumoto_lift(2, &[1, 0]).unwrap();
        for w in 0..9u64 {
            assert_eq!(c.apply_sparse(&lb, &[(w, k.one())]), apply_generator_sparse(&lb, 2, 1, &[(w, k.one())]));
        }
        assert_eq!(shuffle_factor(3, 0).unwrap().apply_sparse(&lb, &[(4, k.one())]), vec![(4, k.one())]);
        assert!(shuffle_factor(2, 2).is_err());
    }

    #[test]
    fn shuffle_on_diagonal() {
        let k = q();
        let b = diag3();
        let lb = b.over(&k).unwrap();
        let qm = |i: usize, j: usize| k.from_i64((2 + i * 3 + j) as i64);
        let (a, bb, c) = (0usize, 1usize, 2usize);
        let w = Word(vec![a as u32, bb as u32, c as u32]).index(3);
        let out = shuffle_factor(3, 2).unwrap().apply_sparse(&lb, &[(w, k.one())]);
        let expect = Word(vec![bb as u32, c as u32, a as u32]).index(3);
        assert_eq!(out, vec![(expect, k.mul(&qm(a, bb), &qm(a, c)))]);
    }

    #[test]
    fn matsumoto_independence_exhaustive() {
        let f = PrimeField::new(1_000_003, 1, None).unwrap();
        let k = q();
        let corpus = vec![fk3(), diag3(), jordanian_braiding(&k, 3, &k.from_i64(2)).unwrap()];
        for b in &corpus {
            let lb = b.over(&f).unwrap();
            for m in 2..=4 {
                let len = ambient_dim(b.dim(), m).unwrap();
                for sigma in all_perms(m) {
                    let words = all_reduced_words(&sigma);
                    let ops: Vec<TensorOperator> =
                        words.iter().map(|w| TensorOperator::monomial(m, w.clone()).unwrap()).collect();
                    for idx in 0..len {
                        let v = vec![(idx, 1u32)];
                        let first = ops[0].apply_sparse(&lb, &v);
                        for op in &ops[1..] {
                            assert_eq!(op.apply_sparse(&lb, &v), first);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn diagonal_preserves_multidegree(digits in proptest::collection::vec(0u32..3, 5), i in 1usize..5) {
            let k = q();
            let lb = diag3().over(&k).unwrap();
            let w = Word(digits.clone());
            let out = apply_generator_sparse(&lb, 5, i, &[(w.index(3), k.one())]);
            prop_assert_eq!(out.len(), 1);
            let mut a = Word::from_index(out[0].0, 3, 5).0;
            let mut b = digits;
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }
}

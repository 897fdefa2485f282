//! Quantum symmetrizers `Ω^(m) = Σ_{σ ∈ S_m} lift(σ)`: the permutation-sum
//! oracle, the factorized fast form, and dense rank/kernel/image helpers
//! for degrees whose ambient space fits in memory.

use thiserror::Error;

use crate::linalg::Echelon;
use crate::scalars::Field;
use crate::tensorops::{
    ambient_dim, apply_generator, apply_generator_sparse, matsumoto_lift, normalize, to_dense, to_sparse,
    LocalBraiding, SparseVec, TensorError, TensorOperator,
};

/// Largest degree the oracle accepts (7! = 5040 lifts).
pub const ORACLE_CAP: usize = 7;

/// Default limit on the length of a dense vector.
pub const DEFAULT_DENSE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetrizerError {
    #[error("degree {m} exceeds the oracle cap {cap}")]
    DegreeTooLarge { m: usize, cap: usize },
    #[error("n^m = {ambient} exceeds the dense cap {cap}")]
    ResourceCap { ambient: u64, cap: u64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A subspace of `V^{⊗m}` in echelon form: row `k` has a 1 at `pivots[k]`
/// and every other row vanishes there. Pivots are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<E> {
    pub degree: usize,
    pub pivots: Vec<u64>,
    pub rows: Vec<SparseVec<E>>,
}

impl<E: Clone + PartialEq> SubspaceBasis<E> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[(u64, E)]) -> bool {
        let mut parts: Vec<(u64, E)> = v.to_vec();
        for (p, row) in self.pivots.iter().zip(&self.rows) {
            if let Ok(k) = v.binary_search_by_key(p, |(i, _)| *i) {
                let c = f.neg(&v[k].1);
                parts.extend(row.iter().map(|(i, x)| (*i, f.mul(&c, x))));
            }
        }
        normalize(f, parts).is_empty()
    }

    /// Checks the echelon invariant.
    pub fn is_valid<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.pivots.windows(2).all(|w| w[0] < w[1])
            && self.rows.len() == self.pivots.len()
            && self.rows.iter().enumerate().all(|(k, row)| {
                self.pivots.iter().enumerate().all(|(j, p)| {
                    let x = row.binary_search_by_key(p, |(i, _)| *i).map(|i| row[i].1.clone()).unwrap_or_else(|_| f.zero());
                    if j == k {
                        x == f.one()
                    } else {
                        f.is_zero(&x)
                    }
                })
            })
    }
}

fn check_dense(n: usize, m: usize, cap: u64) -> Result<u64, SymmetrizerError> {
    let len = ambient_dim(n, m)?;
    if len > cap {
        return Err(SymmetrizerError::ResourceCap { ambient: len, cap });
    }
    Ok(len)
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// `Ω^(m) v` as the literal sum of all `m!` Matsumoto lifts.
pub fn symmetrizer_oracle<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    v: &[(u64, F::Elem)],
) -> Result<SparseVec<F::Elem>, SymmetrizerError> {
    if m > ORACLE_CAP {
        return Err(SymmetrizerError::DegreeTooLarge { m, cap: ORACLE_CAP });
    }
    ambient_dim(lb.n, m)?;
    let mut parts = Vec::new();
    for sigma in permutations(m) {
        parts.extend(matsumoto_lift(m, &sigma)?.apply_sparse(lb, v));
    }
    Ok(normalize(&lb.field, parts))
}

pub fn symmetrizer_oracle_dense<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    v: &[F::Elem],
) -> Result<Vec<F::Elem>, SymmetrizerError> {
    let len = ambient_dim(lb.n, m)?;
    if v.len() as u64 != len {
        return Err(TensorError::DimensionMismatch { expected: len, got: v.len() as u64 }.into());
    }
    let out = symmetrizer_oracle(lb, m, &to_sparse(&lb.field, v))?;
    Ok(to_dense(&lb.field, &out, v.len()))
}

/// `Ω^(m) = F_m ∘ ⋯ ∘ F_2` with `F_k = id^{⊗(m-k)} ⊗ U_k` and
/// `U_k = Σ_{t<k} c_1 c_2 ⋯ c_t` (`c_1` acting first), as a factored
/// operator. `F_2` is applied first.
pub fn symmetrizer_operator(m: usize) -> TensorOperator {
    let mut op = TensorOperator::identity(m);
    for k in 2..=m {
        let off = m - k;
        let terms = (0..k).map(|t| (off + 1..=off + t).rev().collect()).collect();
        op = op.then(TensorOperator::sum(m, terms).expect("positions in range"));
    }
    op
}

/// `U_k` on the last `k` letters, by the running product
/// `v + c_{o+1} v + c_{o+2} c_{o+1} v + ⋯`.
fn shuffle_sum_sparse<F: Field>(lb: &LocalBraiding<F>, m: usize, k: usize, v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let off = m - k;
    let mut acc = v.clone();
    let mut w = v;
    for t in 1..k {
        w = apply_generator_sparse(lb, m, off + t, &w);
        acc.extend(w.iter().cloned());
    }
    normalize(&lb.field, acc)
}

/// `Ω^(m) v` through the factorization, on a sparse vector.
pub fn symmetrizer_apply_sparse<F: Field>(lb: &LocalBraiding<F>, m: usize, v: &[(u64, F::Elem)]) -> SparseVec<F::Elem> {
    let mut cur = normalize(&lb.field, v.to_vec());
    for k in 2..=m {
        cur = shuffle_sum_sparse(lb, m, k, cur);
    }
    cur
}

/// `Ω^(m) v` through the factorization, on a dense vector.
pub fn symmetrizer_apply<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    v: &[F::Elem],
    dense_cap: u64,
) -> Result<Vec<F::Elem>, SymmetrizerError> {
    let len = check_dense(lb.n, m, dense_cap)?;
    if v.len() as u64 != len {
        return Err(TensorError::DimensionMismatch { expected: len, got: v.len() as u64 }.into());
    }
    let f = &lb.field;
    let mut cur = v.to_vec();
    for k in 2..=m {
        let off = m - k;
        let mut acc = cur.clone();
        let mut w = cur;
        for t in 1..k {
            w = apply_generator(lb, m, off + t, &w)?;
            for (a, x) in acc.iter_mut().zip(&w) {
                *a = f.add(a, x);
            }
        }
        cur = acc;
    }
    Ok(cur)
}

fn unit<F: Field>(f: &F, w: u64) -> SparseVec<F::Elem> {
    vec![(w, f.one())]
}

/// Echelon basis of `Ω^(m)(S)`, where `S` is spanned by `generators` (all
/// of `V^{⊗m}` when `None`).
pub fn image_basis<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    generators: Option<&SubspaceBasis<F::Elem>>,
    dense_cap: u64,
) -> Result<SubspaceBasis<F::Elem>, SymmetrizerError> {
    let len = check_dense(lb.n, m, dense_cap)? as usize;
    let f = &lb.field;
    let inputs: Vec<SparseVec<F::Elem>> = match generators {
        Some(g) => g.rows.clone(),
        None => (0..len as u64).map(|w| unit(f, w)).collect(),
    };
    let mut ech = Echelon::new(f.clone(), len);
    for v in inputs {
        if ech.rank() == len {
            break;
        }
        let _ = ech.insert(to_dense(f, &symmetrizer_apply_sparse(lb, m, &v), len));
    }
    Ok(sparse_basis(f, ech, m))
}

fn sparse_basis<F: Field>(f: &F, ech: Echelon<F>, m: usize) -> SubspaceBasis<F::Elem> {
    let (rows, pivots) = ech.into_rref();
    SubspaceBasis { degree: m, pivots: pivots.iter().map(|&p| p as u64).collect(), rows: rows.iter().map(|r| to_sparse(f, r)).collect() }
}

/// The canonical lift: the words `w` whose `Ω^(m) e_w` is independent of
/// the images of all smaller words. Candidates are restricted to
/// `lift(m-1) ⊗ V`, which selects the same set.
pub fn pivot_lift<F: Field>(lb: &LocalBraiding<F>, m: usize, dense_cap: u64) -> Result<Vec<u64>, SymmetrizerError> {
    let n = lb.n as u64;
    let mut lift = vec![0u64];
    for k in 1..=m {
        let len = check_dense(lb.n, k, dense_cap)? as usize;
        let f = &lb.field;
        let mut ech = Echelon::new(f.clone(), len);
        let mut next = Vec::new();
        for &w in &lift {
            for x in 0..n {
                let word = w * n + x;
                let img = symmetrizer_apply_sparse(lb, k, &unit(f, word));
                if ech.insert(to_dense(f, &img, len)).is_ok() {
                    next.push(word);
                }
            }
        }
        lift = next;
    }
    Ok(lift)
}

/// Rank of `Ω^(m)` on `span(lift ⊗ V)`, where `lift` lists degree `m-1`
/// words spanning a complement of `ker Ω^(m-1)`.
pub fn restricted_rank<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    lift: &[u64],
    dense_cap: u64,
) -> Result<usize, SymmetrizerError> {
    let len = check_dense(lb.n, m, dense_cap)? as usize;
    let f = &lb.field;
    let n = lb.n as u64;
    let mut ech = Echelon::new(f.clone(), len);
    for &w in lift {
        for x in 0..n {
            let img = symmetrizer_apply_sparse(lb, m, &unit(f, w * n + x));
            let _ = ech.insert(to_dense(f, &img, len));
        }
    }
    Ok(ech.rank())
}

/// Rank of `Ω^(m)` on all of `V^{⊗m}`.
pub fn full_rank<F: Field>(lb: &LocalBraiding<F>, m: usize, dense_cap: u64) -> Result<usize, SymmetrizerError> {
    Ok(image_basis(lb, m, None, dense_cap)?.dim())
}

/// Echelon basis of `ker Ω^(m)`: one vector `e_w - Σ λ_s e_s` per word `w`
/// outside the pivot lift, with `s` ranging over smaller lift words.
pub fn kernel_basis<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    dense_cap: u64,
) -> Result<SubspaceBasis<F::Elem>, SymmetrizerError> {
    let len = check_dense(lb.n, m, dense_cap)? as usize;
    let f = &lb.field;
    let mut ech = Echelon::with_tail(f.clone(), len, len);
    let mut pivots = Vec::new();
    let mut rows = Vec::new();
    for w in 0..len {
        let mut row = to_dense(f, &symmetrizer_apply_sparse(lb, m, &unit(f, w as u64)), len);
        row.resize(2 * len, f.zero());
        row[len + w] = f.one();
        if let Err(reduced) = ech.insert(row) {
            pivots.push(w as u64);
            rows.push(to_sparse(f, &reduced[len..]));
        }
    }
    Ok(SubspaceBasis { degree: m, pivots, rows })
}

/// Echelon basis of the row space of `Ω^(m)`, computed as the image of the
/// symmetrizer of the transposed braiding.
pub fn row_space_basis<F: Field>(
    lb: &LocalBraiding<F>,
    m: usize,
    dense_cap: u64,
) -> Result<SubspaceBasis<F::Elem>, SymmetrizerError> {
    image_basis(&lb.transpose(), m, None, dense_cap)
}

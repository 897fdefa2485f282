//! The per-field degree pipeline.
//!
//! At degree `m` the engine keeps the canonical lift `S_m` (words whose
//! symmetrized images are independent of those of all smaller words)
//! together with `Ω^(m) e_w` for `w ∈ S_m`, and the analogous row lift
//! `S'_m` with `Ω^(m)ᵀ e_u`. Since `Ω^(m) = T_m ∘ (Ω^(m-1) ⊗ id)` with
//! `T_m = Σ_t c_{m-t} ⋯ c_{m-1}`, every rank at degree `m` can be read off
//! the square block of `Ω^(m)` with rows `S'_{m-1} ⊗ V` and columns
//! `S_{m-1} ⊗ V`.
//!
//! Spaces of functionals (the row spaces `C_m`, and the cotensor
//! intersections `(V*⊗D) ∩ (D⊗V*)` used for relation counts and truncated
//! algebras) are stored as a [`Level`]: a basis given by its values on two
//! small coordinate sets, which determine the functionals because every
//! level sits inside `D_{m-1} ⊗ V*` and `V* ⊗ D_{m-1}`.

use std::mem::size_of;

use crate::linalg::{self, Echelon};
use crate::scalars::Field;
use crate::tensorops::{apply_generator_sparse, normalize, LocalBraiding, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// The next degree would need about `needed` bytes.
    ResourceCap { degree: usize, needed: u64 },
    /// A relation count came out negative, which only an unlucky prime can
    /// produce.
    Inconsistent { degree: usize },
}

/// A space `D` of functionals on `V^{⊗k}` with an information set `I_k`:
/// restriction to `I_k` is injective on `D`, and `I_k ⊆ I_{k-1} ⊗ V`.
#[derive(Debug, Clone)]
pub struct Level<E> {
    pub degree: usize,
    /// `I_{k-1}` as sorted word indices.
    pub prev_info: Vec<u64>,
    /// `I_k` as sorted word indices.
    pub info: Vec<u64>,
    /// Position of each element of `I_k` among the columns of `I_{k-1} ⊗ V`.
    pub info_cols: Vec<usize>,
    /// Values on `V ⊗ I_{k-1}`, at `i * |I_{k-1}| + p`.
    pub left: Vec<Vec<E>>,
    /// Values on `I_{k-1} ⊗ V`, at `p * n + j`.
    pub rows: Vec<Vec<E>>,
}

impl<E: Clone> Level<E> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The whole dual space `V*` at degree 1.
    pub fn first<F: Field<Elem = E>>(f: &F, n: usize) -> Level<E> {
        let ident: Vec<Vec<E>> =
            (0..n).map(|u| (0..n).map(|j| if u == j { f.one() } else { f.zero() }).collect()).collect();
        Level {
            degree: 1,
            prev_info: vec![0],
            info: (0..n as u64).collect(),
            info_cols: (0..n).collect(),
            left: ident.clone(),
            rows: ident,
        }
    }
}

fn need(degree: usize, entries: u128, elem: usize, budget: u64) -> Result<(), EngineError> {
    let needed = entries.saturating_mul(elem as u128);
    if needed > budget as u128 {
        return Err(EngineError::ResourceCap { degree, needed: needed.min(u64::MAX as u128) as u64 });
    }
    Ok(())
}

/// `(V* ⊗ D) ∩ (D ⊗ V*)` for a level `D` of degree `k`, as a level of
/// degree `k + 1` (its dimension alone when `want_basis` is false).
///
/// Elements of `D ⊗ V*` are `Σ α_{uj} b_u ⊗ e_j`; such an element lies in
/// `V* ⊗ D` exactly when each slice `f_i = f(x_i ⊗ ·)` lies in `D`. The
/// slices live in `D_{k-1} ⊗ V*`, where restriction to `I_{k-1} ⊗ V` is
/// injective, so membership is a residual against the echelon form of
/// `D`'s restricted rows.
pub fn intersect<F: Field>(
    f: &F,
    n: usize,
    lvl: &Level<F::Elem>,
    want_basis: bool,
    budget: u64,
) -> Result<(usize, Option<Level<F::Elem>>), EngineError> {
    let m = lvl.degree + 1;
    let d = lvl.dim();
    let ip = lvl.prev_info.len();
    let ncols = ip * n;
    let (echelon, pivots) = linalg::rref(f, &lvl.rows, ncols);
    let mut pivot_of = vec![usize::MAX; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of[c] = r;
    }
    let np_cols: Vec<usize> = (0..ncols).filter(|&c| pivot_of[c] == usize::MAX).collect();
    let mut np_of = vec![usize::MAX; ncols];
    for (k, &c) in np_cols.iter().enumerate() {
        np_of[c] = k;
    }
    let w = np_cols.len();
    let gens = n * d;
    let tail = if want_basis { gens } else { 0 };
    need(m, (gens as u128) * ((n * w + tail) as u128) + (d as u128) * (w as u128), size_of::<F::Elem>(), budget)?;
    let e_np: Vec<Vec<F::Elem>> = echelon.iter().map(|row| np_cols.iter().map(|&c| row[c].clone()).collect()).collect();
    drop(echelon);

    let mut ech = Echelon::with_tail(f.clone(), n * w, tail);
    let mut kernel = Vec::new();
    for u in 0..d {
        for j in 0..n {
            let mut row = vec![f.zero(); n * w + tail];
            for i in 0..n {
                let block = &mut row[i * w..(i + 1) * w];
                for p in 0..ip {
                    let val = &lvl.left[u][i * ip + p];
                    if f.is_zero(val) {
                        continue;
                    }
                    let col = p * n + j;
                    match pivot_of[col] {
                        usize::MAX => {
                            let k = np_of[col];
                            block[k] = f.add(&block[k], val);
                        }
                        r => f.axpy(block, &f.neg(val), &e_np[r]),
                    }
                }
            }
            if want_basis {
                row[n * w + u * n + j] = f.one();
            }
            if let Err(reduced) = ech.insert(row) {
                if want_basis {
                    kernel.push(reduced[n * w..].to_vec());
                }
            }
        }
    }
    let dim = gens - ech.rank();
    if !want_basis {
        return Ok((dim, None));
    }
    drop(ech);
    Ok((dim, Some(level_from_kernel(f, n, lvl, &kernel))))
}

/// The level spanned by `z_β = Σ β_{uj} b_u ⊗ e_j`.
fn level_from_kernel<F: Field>(f: &F, n: usize, lvl: &Level<F::Elem>, kernel: &[Vec<F::Elem>]) -> Level<F::Elem> {
    let ik = lvl.info.len();
    let ip = lvl.prev_info.len();
    // values of b_u on I_k, and on V ⊗ I_k split as (prefix column, last letter)
    let on_info: Vec<Vec<F::Elem>> =
        lvl.rows.iter().map(|row| lvl.info_cols.iter().map(|&c| row[c].clone()).collect()).collect();
    let mut rows = Vec::with_capacity(kernel.len());
    let mut left = Vec::with_capacity(kernel.len());
    for beta in kernel {
        let mut r = vec![f.zero(); ik * n];
        let mut l = vec![f.zero(); n * ik];
        for (g, b) in beta.iter().enumerate() {
            if f.is_zero(b) {
                continue;
            }
            let (u, j) = (g / n, g % n);
            for (q, x) in on_info[u].iter().enumerate() {
                if !f.is_zero(x) {
                    r[q * n + j] = f.add(&r[q * n + j], &f.mul(b, x));
                }
            }
            for (q, &c) in lvl.info_cols.iter().enumerate() {
                if c % n != j {
                    continue;
                }
                let p = c / n;
                for i in 0..n {
                    let x = &lvl.left[u][i * ip + p];
                    if !f.is_zero(x) {
                        l[i * ik + q] = f.add(&l[i * ik + q], &f.mul(b, x));
                    }
                }
            }
        }
        rows.push(r);
        left.push(l);
    }
    let mut ech = Echelon::new(f.clone(), ik * n);
    for r in &rows {
        if ech.rank() == rows.len() {
            break;
        }
        let _ = ech.insert(r.clone());
    }
    let info_cols = ech.pivots();
    let info = info_cols.iter().map(|&c| lvl.info[c / n] * n as u64 + (c % n) as u64).collect();
    Level { degree: lvl.degree + 1, prev_info: lvl.info.clone(), info, info_cols, left, rows }
}

/// `T_m v = Σ_{t<m} c_{m-t} ⋯ c_{m-1} v` (`c_{m-1}` acting first).
fn t_apply<F: Field>(lb: &LocalBraiding<F>, m: usize, v: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut acc = v.clone();
    let mut w = v;
    for i in (1..m).rev() {
        w = apply_generator_sparse(lb, m, i, &w);
        acc.extend(w.iter().cloned());
    }
    normalize(&lb.field, acc)
}

fn extend<E: Clone>(v: &[(u64, E)], n: usize, x: usize) -> SparseVec<E> {
    v.iter().map(|(i, c)| (i * n as u64 + x as u64, c.clone())).collect()
}

/// Result of one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub degree: usize,
    pub dim: usize,
    /// `dim (V*⊗C_{m-1}) ∩ (C_{m-1}⊗V*) - d_m`; absent in truncated mode.
    pub new_relations: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Nichols,
    /// Kernels imposed only through degree `r`.
    Truncated(usize),
}

#[derive(Debug, Clone)]
pub struct Engine<F: Field> {
    f: F,
    n: usize,
    lb: LocalBraiding<F>,
    lbt: LocalBraiding<F>,
    mode: Mode,
    budget: u64,
    degree: usize,
    s: Vec<u64>,
    img: Vec<SparseVec<F::Elem>>,
    sp: Vec<u64>,
    rho: Vec<SparseVec<F::Elem>>,
    level: Level<F::Elem>,
}

impl<F: Field> Engine<F> {
    pub fn new(lb: LocalBraiding<F>, mode: Mode, budget: u64) -> Self {
        let f = lb.field.clone();
        let n = lb.n;
        let units: Vec<SparseVec<F::Elem>> = (0..n as u64).map(|w| vec![(w, f.one())]).collect();
        Engine {
            lbt: lb.transpose(),
            level: Level::first(&f, n),
            f,
            n,
            lb,
            mode,
            budget,
            degree: 1,
            s: (0..n as u64).collect(),
            img: units.clone(),
            sp: (0..n as u64).collect(),
            rho: units,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> &F {
        &self.f
    }

    /// Dense block `Ω^(m)[S'_{m-1}⊗V, cols]` for degree `m = degree + 1`,
    /// as rows, together with the column vectors.
    fn block(&self, cols: &[(usize, usize)]) -> (Vec<Vec<F::Elem>>, Vec<SparseVec<F::Elem>>) {
        let m = self.degree + 1;
        let n = self.n;
        let nrows = self.sp.len() * n;
        let mut a = vec![vec![self.f.zero(); cols.len()]; nrows];
        let mut vecs = Vec::with_capacity(cols.len());
        for (c, &(k, x)) in cols.iter().enumerate() {
            let v = t_apply(&self.lb, m, extend(&self.img[k], n, x));
            for (idx, val) in &v {
                let (u, y) = (idx / n as u64, (idx % n as u64) as usize);
                if let Ok(b) = self.sp.binary_search(&u) {
                    a[b * n + y][c] = val.clone();
                }
            }
            vecs.push(v);
        }
        (a, vecs)
    }

    fn rank_stage(&mut self) -> Result<usize, EngineError> {
        let m = self.degree + 1;
        let n = self.n;
        let f = self.f.clone();
        let ncols = self.s.len() * n;
        let nrows = self.sp.len() * n;
        let stored: usize = self.img.iter().chain(&self.rho).map(|v| v.len()).sum::<usize>() * n * m;
        need(m, 2 * (nrows as u128) * (ncols as u128) + stored as u128, size_of::<F::Elem>() + 8, self.budget)?;
        let cols: Vec<(usize, usize)> = (0..self.s.len()).flat_map(|k| (0..n).map(move |x| (k, x))).collect();
        let (a, vecs) = self.block(&cols);
        let mut ech = Echelon::new(f.clone(), ncols);
        let mut kept = Vec::new();
        for (r, row) in a.iter().enumerate() {
            if ech.rank() == ncols {
                break;
            }
            if ech.insert(row.clone()).is_ok() {
                kept.push(r);
            }
        }
        let pivots = ech.pivots();
        drop(ech);
        let d = kept.len();

        let prev_s = std::mem::take(&mut self.s);
        let new_s: Vec<u64> = pivots.iter().map(|&c| prev_s[c / n] * n as u64 + (c % n) as u64).collect();
        let mut vecs: Vec<Option<SparseVec<F::Elem>>> = vecs.into_iter().map(Some).collect();
        let new_img: Vec<SparseVec<F::Elem>> = pivots.iter().map(|&c| vecs[c].take().unwrap()).collect();
        drop(vecs);
        let new_sp: Vec<u64> = kept.iter().map(|&r| self.sp[r / n] * n as u64 + (r % n) as u64).collect();
        let new_rho: Vec<SparseVec<F::Elem>> =
            kept.iter().map(|&r| t_apply(&self.lbt, m, extend(&self.rho[r / n], n, r % n))).collect();

        let ip = prev_s.len();
        let shift = (n as u64).pow(m as u32 - 1);
        let left = new_rho
            .iter()
            .map(|rho| {
                let mut l = vec![f.zero(); n * ip];
                for (idx, val) in rho {
                    let (i, s) = ((idx / shift) as usize, idx % shift);
                    if let Ok(p) = prev_s.binary_search(&s) {
                        l[i * ip + p] = val.clone();
                    }
                }
                l
            })
            .collect();
        let mut a: Vec<Option<Vec<F::Elem>>> = a.into_iter().map(Some).collect();
        let rows = kept.iter().map(|&r| a[r].take().unwrap()).collect();
        self.level = Level { degree: m, prev_info: prev_s, info: new_s.clone(), info_cols: pivots, left, rows };
        self.s = new_s;
        self.img = new_img;
        self.sp = new_sp;
        self.rho = new_rho;
        self.degree = m;
        Ok(d)
    }

    /// Advances one degree.
    pub fn step(&mut self) -> Result<Step, EngineError> {
        let m = self.degree + 1;
        match self.mode {
            Mode::Truncated(r) if m > r => {
                let (dim, lvl) = intersect(&self.f, self.n, &self.level, true, self.budget)?;
                self.level = lvl.expect("basis requested");
                self.degree = m;
                Ok(Step { degree: m, dim, new_relations: None })
            }
            Mode::Truncated(_) => {
                let dim = self.rank_stage()?;
                Ok(Step { degree: m, dim, new_relations: None })
            }
            Mode::Nichols => {
                let (xy, _) = intersect(&self.f, self.n, &self.level, false, self.budget)?;
                let dim = self.rank_stage()?;
                if xy < dim {
                    return Err(EngineError::Inconsistent { degree: m });
                }
                Ok(Step { degree: m, dim, new_relations: Some(xy - dim) })
            }
        }
    }

    /// Relations of degree `m = degree + 1` not generated in lower degrees,
    /// in reduced echelon form over their words (leading word smallest,
    /// leading coefficient 1). Does not advance the engine.
    ///
    /// The cotensor space `Z = (V*⊗C_{m-1}) ∩ (C_{m-1}⊗V*)` annihilates
    /// exactly the ideal part `J_m`. On the smallest information set `T`
    /// of `Z`, `span(e_T)` meets `J_m` trivially, so `ker Ω^(m) ∩ span(e_T)`
    /// is a complement of `J_m` in `ker Ω^(m)`.
    pub fn new_relations(&self) -> Result<Vec<SparseVec<F::Elem>>, EngineError> {
        let m = self.degree + 1;
        let n = self.n;
        let f = &self.f;
        let (_, z) = intersect(f, n, &self.level, true, self.budget)?;
        let z = z.expect("basis requested");
        let cols: Vec<(usize, usize)> = z.info_cols.iter().map(|&c| (c / n, c % n)).collect();
        need(m, (self.sp.len() * n * cols.len()) as u128 * 2, size_of::<F::Elem>(), self.budget)?;
        let (a, _) = self.block(&cols);
        let null = linalg::nullspace(f, &a, cols.len());
        let (canon, _) = linalg::rref(f, &null, cols.len());
        Ok(canon
            .into_iter()
            .map(|v| {
                v.into_iter().zip(&z.info).filter(|(c, _)| !f.is_zero(c)).map(|(c, &w)| (w, c)).collect()
            })
            .collect())
    }
}

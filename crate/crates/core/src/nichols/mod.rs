//! Graded dimensions, relation counts, relation bases, truncated algebras
//! and Hilbert series of Nichols algebras, with multi-prime consensus.

pub mod engine;
mod report;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{
    format_element, hilbert_polynomial, GradedReport, ReciprocityReport, Relation, RelationDump, SmokeReport, Status,
    Term, CSV_HEADER,
};

use crate::braiding::{diagonal_braiding, dual_braiding, hecke_label, BraidedSpace, BraidingError};
use crate::scalars::{find_primes, Cyc, CyclotomicField, Field, PrimeField, ScalarError};
use crate::symmetrizer::{symmetrizer_apply_sparse, DEFAULT_DENSE_CAP};
use crate::tensorops::{ambient_dim, SparseVec, Word};
use engine::{Engine, EngineError, Mode, Step};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NicholsError {
    #[error("primes disagree at degree {degree}: {detail}")]
    PrimeDisagreement { degree: usize, detail: String },
    #[error("degree {degree} needs about {needed} bytes, over the memory budget")]
    ResourceCap { degree: usize, needed: u64 },
    #[error("n^{degree} = {ambient} exceeds the limit {cap} for this operation")]
    AmbientTooLarge { degree: usize, ambient: u64, cap: u64 },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("braiding is not of Hecke type")]
    NotHecke,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Braiding(#[from] BraidingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComputeMode {
    /// Exact arithmetic in every degree.
    Exact,
    /// Prime fields, cross-checked exactly while `n^m` is small.
    Modular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub max_degree: usize,
    /// Longest dense vector of length `n^m` the dense operations accept.
    pub dense_cap: u64,
    /// Per-degree, per-field memory budget in bytes.
    pub memory_budget: u64,
    pub primes: usize,
    pub prime_bits: u32,
    /// Degrees with `n^m` at most this are also computed exactly.
    pub exact_threshold: u64,
    pub mode: ComputeMode,
    pub threads: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_degree: 8,
            dense_cap: DEFAULT_DENSE_CAP,
            memory_budget: 2 << 30,
            primes: 2,
            prime_bits: 30,
            exact_threshold: 4096,
            mode: ComputeMode::Modular,
            threads: None,
        }
    }
}

impl From<EngineError> for NicholsError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ResourceCap { degree, needed } => NicholsError::ResourceCap { degree, needed },
            EngineError::Inconsistent { degree } => {
                NicholsError::PrimeDisagreement { degree, detail: "negative relation count".into() }
            }
        }
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// Runs one engine per prime (plus an exact one while affordable) in
/// lockstep and merges their answers.
struct Runner {
    b: BraidedSpace,
    cfg: EngineConfig,
    mode: Mode,
    modular: Vec<Engine<PrimeField>>,
    spare: Vec<PrimeField>,
    exact: Option<Engine<CyclotomicField>>,
    exact_through: usize,
    history: Vec<Step>,
    notes: Vec<String>,
}

impl Runner {
    fn new(b: &BraidedSpace, cfg: &EngineConfig, mode: Mode) -> Result<Runner, NicholsError> {
        let mut notes = Vec::new();
        let mut modular = Vec::new();
        let mut spare = Vec::new();
        if cfg.mode == ComputeMode::Modular {
            let wanted = cfg.primes.max(1);
            for p in find_primes(b.field().order(), wanted + 8, cfg.prime_bits)? {
                if modular.len() == wanted {
                    spare.push(p);
                    continue;
                }
                match b.over(&p) {
                    Ok(lb) => modular.push(Engine::new(lb, mode, cfg.memory_budget)),
                    Err(ScalarError::BadPrime(q)) => notes.push(format!("skipped prime {q}: a parameter vanishes")),
                    Err(e) => return Err(e.into()),
                }
            }
            if modular.len() < wanted {
                return Err(NicholsError::InvalidArgument("not enough usable primes".into()));
            }
        }
        let exact_ok = cfg.mode == ComputeMode::Exact || ambient_dim(b.dim(), 2).is_ok_and(|a| a <= cfg.exact_threshold);
        let exact = exact_ok.then(|| Engine::new(b.over(b.field()).expect("exact field"), mode, cfg.memory_budget));
        Ok(Runner {
            b: b.clone(),
            cfg: cfg.clone(),
            mode,
            modular,
            spare,
            exact,
            exact_through: 1,
            history: Vec::new(),
            notes,
        })
    }

    fn primes(&self) -> Vec<u64> {
        self.modular.iter().map(|e| e.field().characteristic()).collect()
    }

    fn degree(&self) -> usize {
        self.history.last().map_or(1, |s| s.degree)
    }

    /// Reruns a fresh prime through degree `m` and returns its history.
    fn arbiter(&mut self, m: usize) -> Result<(Engine<PrimeField>, Vec<Step>), NicholsError> {
        while let Some(p) = (!self.spare.is_empty()).then(|| self.spare.remove(0)) {
            let Ok(lb) = self.b.over(&p) else { continue };
            let mut e = Engine::new(lb, self.mode, self.cfg.memory_budget);
            let mut steps = Vec::new();
            while e.degree() < m {
                match e.step() {
                    Ok(s) => steps.push(s),
                    Err(EngineError::Inconsistent { .. }) => break,
                    Err(err) => return Err(err.into()),
                }
            }
            if steps.len() == m - 1 {
                return Ok((e, steps));
            }
        }
        Err(NicholsError::PrimeDisagreement { degree: m, detail: "no prime left to arbitrate".into() })
    }

    fn step(&mut self) -> Result<Step, NicholsError> {
        let m = self.degree() + 1;
        let run_exact = self.cfg.mode == ComputeMode::Exact
            || ambient_dim(self.b.dim(), m).is_ok_and(|a| a <= self.cfg.exact_threshold);
        if !run_exact {
            self.exact = None;
        }
        let exact = &mut self.exact;
        let modular = &mut self.modular;
        let (ex, results) = rayon::join(
            || exact.as_mut().map(|e| e.step()),
            || modular.par_iter_mut().map(|e| e.step()).collect::<Vec<_>>(),
        );
        if let Some(err) = results.iter().chain(ex.iter()).find_map(|r| match r {
            Err(EngineError::ResourceCap { degree, needed }) => Some((*degree, *needed)),
            _ => None,
        }) {
            if self.cfg.mode == ComputeMode::Modular && results.iter().all(|r| r.is_ok()) {
                // only the exact cross-check ran out of room
                self.exact = None;
                self.notes.push(format!("exact cross-check stopped at degree {}: memory budget", m - 1));
            } else {
                return Err(NicholsError::ResourceCap { degree: err.0, needed: err.1 });
            }
        }
        let agreed = if self.cfg.mode == ComputeMode::Exact {
            ex.clone().expect("exact engine runs in exact mode")?
        } else {
            let unanimous = match &results[0] {
                Ok(s) if results.iter().all(|r| r == &results[0]) => Some(*s),
                _ => None,
            };
            match unanimous {
                Some(s) => s,
                None => self.arbitrate(m, results)?,
            }
        };
        if let Some(Ok(e)) = ex {
            if self.cfg.mode == ComputeMode::Modular && e != agreed {
                return Err(NicholsError::PrimeDisagreement {
                    degree: m,
                    detail: format!("exact {:?} vs modular {:?}", e, agreed),
                });
            }
            self.exact_through = m;
        }
        self.history.push(agreed);
        Ok(agreed)
    }

    fn arbitrate(&mut self, m: usize, results: Vec<Result<Step, EngineError>>) -> Result<Step, NicholsError> {
        let (arb, steps) = self.arbiter(m)?;
        let verdict = *steps.last().expect("at least one step");
        if steps[..steps.len() - 1] != self.history[..] {
            return Err(NicholsError::PrimeDisagreement { degree: m, detail: "arbiter disagrees on lower degrees".into() });
        }
        let losers: Vec<usize> = (0..results.len()).filter(|&k| results[k] != Ok(verdict)).collect();
        if losers.len() == results.len() {
            return Err(NicholsError::PrimeDisagreement {
                degree: m,
                detail: format!("{results:?} and arbiter {verdict:?}"),
            });
        }
        let arb_p = arb.field().characteristic();
        for (k, &i) in losers.iter().enumerate() {
            let lost = self.modular[i].field().characteristic();
            self.notes.push(format!("degree {m}: prime {lost} disagreed, prime {arb_p} arbitrated"));
            if k == 0 {
                self.modular[i] = arb.clone();
            }
        }
        self.modular.retain(|e| e.degree() == m);
        Ok(verdict)
    }
}

fn report_from(
    b: &BraidedSpace,
    name: &str,
    runner: &Runner,
    status: Status,
    with_relations: bool,
) -> GradedReport {
    let mut dims = vec![1u64, b.dim() as u64];
    dims.extend(runner.history.iter().map(|s| s.dim as u64));
    let new_relations =
        if with_relations { runner.history.iter().filter_map(|s| s.new_relations).map(|c| c as u64).collect() } else { Vec::new() };
    let (total_dim, top_degree) = match status {
        Status::Terminated { top_degree } => (Some(dims.iter().sum()), Some(top_degree)),
        _ => (None, None),
    };
    let mut notes = runner.notes.clone();
    if runner.cfg.mode == ComputeMode::Modular {
        notes.push("ranks over prime fields can only undercount; primes agreed and small degrees were checked exactly".into());
    }
    GradedReport {
        name: name.to_string(),
        rank: b.dim(),
        field: b.field().describe(),
        hilbert_prefix: hilbert_polynomial(&dims),
        dims,
        new_relations,
        status,
        total_dim,
        top_degree,
        primes: runner.primes(),
        exact_through: if runner.exact_through >= 2 { runner.exact_through } else { 0 },
        notes,
    }
}

fn drive(
    b: &BraidedSpace,
    name: &str,
    cfg: &EngineConfig,
    mode: Mode,
    progress: &mut dyn FnMut(&Step) -> bool,
) -> Result<GradedReport, NicholsError> {
    let mut runner = Runner::new(b, cfg, mode)?;
    let mut status = Status::Cutoff { degree: cfg.max_degree.max(1) };
    while runner.degree() < cfg.max_degree {
        match runner.step() {
            Ok(s) => {
                let go_on = progress(&s);
                if s.dim == 0 {
                    status = Status::Terminated { top_degree: s.degree - 1 };
                    break;
                }
                if !go_on {
                    status = Status::Cutoff { degree: s.degree };
                    break;
                }
            }
            Err(NicholsError::ResourceCap { .. }) => {
                status = Status::ResourceCapped { degree: runner.degree() };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report_from(b, name, &runner, status, mode == Mode::Nichols))
}

/// `d_m = dim B^m(V)` and new relation counts through `cfg.max_degree`.
pub fn graded_dims(b: &BraidedSpace, name: &str, cfg: &EngineConfig) -> Result<GradedReport, NicholsError> {
    graded_dims_with(b, name, cfg, &mut |_| true)
}

/// As [`graded_dims`], calling `progress` after every degree; returning
/// `false` stops with a cutoff at that degree.
pub fn graded_dims_with(
    b: &BraidedSpace,
    name: &str,
    cfg: &EngineConfig,
    progress: &mut (dyn FnMut(&Step) -> bool + Send),
) -> Result<GradedReport, NicholsError> {
    in_pool(cfg.threads, || drive(b, name, cfg, Mode::Nichols, progress))
}

/// Relations in degree `m` not generated by lower degrees.
pub fn new_relation_count(b: &BraidedSpace, m: usize, cfg: &EngineConfig) -> Result<u64, NicholsError> {
    if m < 2 {
        return Err(NicholsError::InvalidArgument("relations start in degree 2".into()));
    }
    let cfg = EngineConfig { max_degree: m, ..cfg.clone() };
    let r = graded_dims(b, "", &cfg)?;
    match r.new_relations_at(m) {
        Some(c) => Ok(c),
        // past the top degree every further word is generated below
        None if matches!(r.status, Status::Terminated { .. }) => Ok(0),
        None => Err(NicholsError::ResourceCap { degree: m, needed: cfg.memory_budget }),
    }
}

/// Dimensions of `T(V)` modulo the ideal generated by `ker Ω^(m)`, `m ≤ r`.
pub fn truncated_dims(b: &BraidedSpace, name: &str, r: usize, cfg: &EngineConfig) -> Result<GradedReport, NicholsError> {
    if r < 2 {
        return Err(NicholsError::InvalidArgument("truncation degree must be at least 2".into()));
    }
    in_pool(cfg.threads, || drive(b, name, cfg, Mode::Truncated(r), &mut |_| true))
}

fn cyc_vec(field: &CyclotomicField, v: &[(u64, Cyc)]) -> Vec<(u64, Cyc)> {
    crate::tensorops::normalize(field, v.to_vec())
}

/// A spanning set of the degree-`m` relations modulo those generated in
/// lower degrees, canonicalized: reduced echelon form over the smallest
/// information set of the lower-degree ideal's annihilator.
pub fn relation_dump(b: &BraidedSpace, m: usize, cfg: &EngineConfig) -> Result<RelationDump, NicholsError> {
    if m < 2 {
        return Err(NicholsError::InvalidArgument("relations start in degree 2".into()));
    }
    let n = b.dim();
    let ambient = ambient_dim(n, m).map_err(|_| NicholsError::AmbientTooLarge { degree: m, ambient: u64::MAX, cap: cfg.dense_cap })?;
    if ambient > cfg.dense_cap {
        return Err(NicholsError::AmbientTooLarge { degree: m, ambient, cap: cfg.dense_cap });
    }
    let field = b.field();
    in_pool(cfg.threads, || {
        if cfg.mode == ComputeMode::Exact || ambient <= cfg.exact_threshold {
            let mut e = Engine::new(b.over(field)?, Mode::Nichols, cfg.memory_budget);
            while e.degree() < m - 1 {
                e.step()?;
            }
            let rels = e.new_relations()?;
            return Ok(RelationDump::new(field, n, m, &rels, vec!["computed in exact arithmetic".into()]));
        }
        if field.order() != 1 {
            return Err(NicholsError::AmbientTooLarge { degree: m, ambient, cap: cfg.exact_threshold });
        }
        modular_dump(b, m, cfg)
    })
}

fn modular_dump(b: &BraidedSpace, m: usize, cfg: &EngineConfig) -> Result<RelationDump, NicholsError> {
    let n = b.dim();
    let field = b.field();
    let sub = EngineConfig { exact_threshold: 0, ..cfg.clone() };
    let mut runner = Runner::new(b, &sub, Mode::Nichols)?;
    while runner.degree() < m - 1 {
        runner.step()?;
    }
    let per_prime: Vec<Vec<SparseVec<u32>>> =
        runner.modular.par_iter().map(|e| e.new_relations()).collect::<Result<_, _>>()?;
    let shape = |v: &Vec<Vec<(u64, u32)>>| v.iter().map(|r| r.iter().map(|(w, _)| *w).collect::<Vec<_>>()).collect::<Vec<_>>();
    if per_prime.iter().any(|v| shape(v) != shape(&per_prime[0])) {
        return Err(NicholsError::PrimeDisagreement { degree: m, detail: "relation supports differ".into() });
    }
    let moduli: Vec<BigInt> = runner.primes().iter().map(|&p| BigInt::from(p)).collect();
    let lb = b.over(field)?;
    let mut out = Vec::new();
    for (k, rel) in per_prime[0].iter().enumerate() {
        let mut v = Vec::new();
        for (t, (w, _)) in rel.iter().enumerate() {
            let residues: Vec<BigInt> = per_prime.iter().map(|p| BigInt::from(p[k][t].1)).collect();
            let (a, modulus) = crt(&residues, &moduli);
            let r = rational_reconstruct(&a, &modulus).ok_or_else(|| NicholsError::PrimeDisagreement {
                degree: m,
                detail: "coefficients do not reconstruct; add primes".into(),
            })?;
            v.push((*w, field.from_rational(r)));
        }
        let v = cyc_vec(field, &v);
        if !symmetrizer_apply_sparse(&lb, m, &v).is_empty() {
            return Err(NicholsError::PrimeDisagreement { degree: m, detail: "reconstructed relation fails exactly".into() });
        }
        out.push(v);
    }
    let notes = vec![format!(
        "computed modulo {:?}, coefficients reconstructed and each relation verified in exact arithmetic",
        runner.primes()
    )];
    Ok(RelationDump::new(field, n, m, &out, notes))
}

fn crt(residues: &[BigInt], moduli: &[BigInt]) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, p) in residues.iter().zip(moduli) {
        // a + modulus * t ≡ r (mod p)
        let inv = modinv(&(&modulus % p), p);
        let t = ((r - &a) % p * inv).mod_floor(p);
        a += &modulus * t;
        modulus *= p;
    }
    (a, modulus)
}

fn modinv(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

/// The fraction `r/s` with `r ≡ a s (mod modulus)` and `|r|, s` below
/// `sqrt(modulus/2)`, if one exists.
pub fn rational_reconstruct(a: &BigInt, modulus: &BigInt) -> Option<BigRational> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), a.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Whether `Ω^(m)` annihilates a homogeneous element. Exact while `n^m` is
/// within the exact threshold, otherwise over every consensus prime.
pub fn contains_relation(b: &BraidedSpace, element: &[(Word, Cyc)], cfg: &EngineConfig) -> Result<bool, NicholsError> {
    let Some((first, _)) = element.first() else { return Ok(true) };
    let m = first.len();
    if element.iter().any(|(w, _)| w.len() != m) {
        return Err(NicholsError::NotHomogeneous);
    }
    let n = b.dim();
    if element.iter().any(|(w, _)| w.0.iter().any(|&x| x as usize >= n)) {
        return Err(NicholsError::InvalidArgument(format!("letters must be below {n}")));
    }
    let field = b.field();
    let ambient = ambient_dim(n, m).map_err(|_| NicholsError::InvalidArgument("degree too large".into()))?;
    if cfg.mode == ComputeMode::Exact || ambient <= cfg.exact_threshold {
        let v = cyc_vec(field, &element.iter().map(|(w, c)| (w.index(n), c.clone())).collect::<Vec<_>>());
        return Ok(symmetrizer_apply_sparse(&b.over(field)?, m, &v).is_empty());
    }
    let mut verdicts = Vec::new();
    for p in find_primes(field.order(), cfg.primes.max(1) + 8, cfg.prime_bits)? {
        if verdicts.len() == cfg.primes.max(1) {
            break;
        }
        let Ok(lb) = b.over(&p) else { continue };
        let mapped: Result<Vec<(u64, u32)>, ScalarError> =
            element.iter().map(|(w, c)| Ok((w.index(n), p.from_cyclotomic(field, c)?))).collect();
        let Ok(mapped) = mapped else { continue };
        let v = crate::tensorops::normalize(&p, mapped);
        verdicts.push(symmetrizer_apply_sparse(&lb, m, &v).is_empty());
    }
    if verdicts.is_empty() {
        return Err(NicholsError::InvalidArgument("not enough usable primes".into()));
    }
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(NicholsError::PrimeDisagreement { degree: m, detail: "membership differs across primes".into() });
    }
    Ok(verdicts[0])
}

/// Checks `H_B(t) · H_{B!}(−t) = 1` through `cfg.max_degree`, where `B!`
/// is the Nichols algebra of the dual braiding `−q⁻¹cᵗ`.
pub fn hilbert_reciprocity_check(
    b: &BraidedSpace,
    default_q: Option<&Cyc>,
    cfg: &EngineConfig,
) -> Result<ReciprocityReport, NicholsError> {
    let q = hecke_label(b, default_q).ok_or(NicholsError::NotHecke)?;
    let dual = dual_braiding(b, &q)?;
    let left = graded_dims(b, "", cfg)?;
    let right = graded_dims(&dual, "", cfg)?;
    let reach = |r: &GradedReport| match r.status {
        Status::Terminated { .. } => cfg.max_degree,
        Status::Cutoff { degree } | Status::ResourceCapped { degree } => degree,
    };
    let through = reach(&left).min(reach(&right)).min(cfg.max_degree);
    let at = |r: &GradedReport, k: usize| r.dims.get(k).copied().unwrap_or(0) as i64;
    let product: Vec<i64> = (0..=through)
        .map(|m| (0..=m).map(|k| at(&left, k) * at(&right, m - k) * if (m - k) % 2 == 1 { -1 } else { 1 }).sum())
        .collect();
    let holds = product.iter().enumerate().all(|(m, &c)| c == i64::from(m == 0));
    let mut notes = Vec::new();
    if through < cfg.max_degree {
        notes.push(format!("checked through degree {through} only"));
    }
    Ok(ReciprocityReport {
        q: b.field().format(&q),
        dims: left.dims,
        dual_dims: right.dims,
        product,
        checked_through: through,
        holds,
        notes,
    })
}

/// A diagonal braiding with parameters `± a/b`, `a, b` drawn uniformly
/// from `[10^5, 10^6]`.
pub fn random_diagonal(n: usize, seed: u64) -> Result<BraidedSpace, NicholsError> {
    let k = CyclotomicField::new(1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q: Vec<Vec<Cyc>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    k.rational(sign * rng.gen_range(100_000..=1_000_000), rng.gen_range(100_000..=1_000_000))
                })
                .collect()
        })
        .collect();
    Ok(diagonal_braiding(&k, &q)?)
}

/// Graded dimensions of a (typically random) diagonal braiding, with the
/// first degree carrying a relation.
pub fn generic_smoke(b: &BraidedSpace, cfg: &EngineConfig) -> Result<SmokeReport, NicholsError> {
    let report = graded_dims(b, "generic", cfg)?;
    let first_relation_degree = report.new_relations.iter().position(|&c| c > 0).map(|k| k + 2);
    let parameters = match crate::braiding::diagonal_parameters(b) {
        Some(q) => q.iter().map(|row| row.iter().map(|c| b.field().format(c)).collect()).collect(),
        None => Vec::new(),
    };
    Ok(SmokeReport { parameters, report, first_relation_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braiding::{cartan_braiding, rack_braiding};
    use crate::racks::{affine_rack, constant_cocycle};

    fn rack_space(moduli: &[u32], g: &[Vec<i64>]) -> BraidedSpace {
        let k = CyclotomicField::new(1).unwrap();
        let r = affine_rack(moduli, g).unwrap();
        rack_braiding(&r, &constant_cocycle(&r, &k, &k.from_i64(-1))).unwrap()
    }

    fn flip(n: usize, sign: i64) -> BraidedSpace {
        let k = CyclotomicField::new(1).unwrap();
        diagonal_braiding(&k, &vec![vec![k.from_i64(sign); n]; n]).unwrap()
    }

    fn cfg(max: usize) -> EngineConfig {
        EngineConfig { max_degree: max, ..EngineConfig::default() }
    }

    #[test]
    fn fk3_report() {
        let r = graded_dims(&rack_space(&[3], &[vec![2]]), "fk3", &cfg(10)).unwrap();
        assert_eq!(r.dims, vec![1, 3, 4, 3, 1, 0]);
        assert_eq!(r.status, Status::Terminated { top_degree: 4 });
        assert_eq!(r.total_dim, Some(12));
        assert_eq!(r.new_relations_at(2), Some(5));
        assert_eq!(r.exact_through, 5);
        assert_eq!(r.primes.len(), 2);
        assert!(r.primes.iter().all(|&p| p >= 1 << 30));
    }

    #[test]
    fn exact_mode_agrees() {
        let b = rack_space(&[3], &[vec![2]]);
        let a = graded_dims(&b, "x", &cfg(10)).unwrap();
        let e = graded_dims(&b, "x", &EngineConfig { mode: ComputeMode::Exact, ..cfg(10) }).unwrap();
        assert_eq!(a.dims, e.dims);
        assert_eq!(a.new_relations, e.new_relations);
    }

    #[test]
    fn symmetric_algebra_cutoff() {
        let r = graded_dims(&flip(2, 1), "tau", &cfg(5)).unwrap();
        let stopped = graded_dims_with(&flip(2, 1), "tau", &cfg(5), &mut |s| s.degree < 3).unwrap();
        assert_eq!(stopped.status, Status::Cutoff { degree: 3 });
        assert_eq!(stopped.dims, r.dims[..4]);
        assert_eq!(r.dims, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(r.status, Status::Cutoff { degree: 5 });
        assert_eq!(r.new_relations_at(3), Some(0));
        assert_eq!(r.total_dim, None);
    }

    #[test]
    fn budget_caps_without_partial_numbers() {
        let c = EngineConfig { memory_budget: 20_000, ..cfg(8) };
        let r = graded_dims(&rack_space(&[5], &[vec![2]]), "z5", &c).unwrap();
        let Status::ResourceCapped { degree } = r.status else { panic!("{:?}", r.status) };
        assert_eq!(r.dims.len(), degree + 1);
        assert_eq!(r.new_relations.len(), degree - 1);
    }

    #[test]
    fn relation_dumps() {
        let z5 = rack_space(&[5], &[vec![2]]);
        let d = relation_dump(&z5, 4, &cfg(4)).unwrap();
        assert_eq!(d.count, 1);
        assert_eq!(d.relations[0].text, "x0 x1 x0 x1 + x1 x0 x1 x0");
        let fk3 = relation_dump(&rack_space(&[3], &[vec![2]]), 2, &cfg(2)).unwrap();
        assert_eq!(fk3.count, 5);
        assert!(fk3.relations.iter().any(|r| r.text == "x1 x1"));
        let none = relation_dump(&flip(2, 1), 3, &cfg(3)).unwrap();
        assert_eq!(none.count, 0);
    }

    #[test]
    fn modular_dump_reconstructs() {
        let z5 = rack_space(&[5], &[vec![2]]);
        let c = EngineConfig { exact_threshold: 0, ..cfg(4) };
        let d = relation_dump(&z5, 4, &c).unwrap();
        assert_eq!(d.relations[0].text, "x0 x1 x0 x1 + x1 x0 x1 x0");
    }

    #[test]
    fn membership() {
        let k = CyclotomicField::new(1).unwrap();
        let z5 = rack_space(&[5], &[vec![2]]);
        let w = |d: &[u32]| Word(d.to_vec());
        let plus = vec![(w(&[0, 1, 0, 1]), k.one()), (w(&[1, 0, 1, 0]), k.one())];
        let minus = vec![(w(&[0, 1, 0, 1]), k.one()), (w(&[1, 0, 1, 0]), k.from_i64(-1))];
        for c in [cfg(4), EngineConfig { exact_threshold: 0, ..cfg(4) }] {
            assert!(contains_relation(&z5, &plus, &c).unwrap());
            assert!(!contains_relation(&z5, &minus, &c).unwrap());
        }
        assert!(contains_relation(&z5, &[], &cfg(4)).unwrap());
        let mixed = vec![(w(&[0, 1]), k.one()), (w(&[1, 0, 1]), k.one())];
        assert_eq!(contains_relation(&z5, &mixed, &cfg(4)), Err(NicholsError::NotHomogeneous));
    }

    #[test]
    fn reciprocity_for_flips() {
        for n in [2usize, 3] {
            let r = hilbert_reciprocity_check(&flip(n, 1), None, &cfg(6)).unwrap();
            assert!(r.holds, "{r:?}");
            assert_eq!(r.dual_dims.iter().sum::<u64>(), 1 << n);
        }
        let r = hilbert_reciprocity_check(&flip(2, -1), None, &cfg(6)).unwrap();
        assert!(r.holds);
        let fk3 = rack_space(&[3], &[vec![2]]);
        assert_eq!(hilbert_reciprocity_check(&fk3, None, &cfg(4)), Err(NicholsError::NotHecke));
    }

    #[test]
    fn rational_reconstruction_round_trip() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let target = BigRational::new(BigInt::from(-17), BigInt::from(39));
        let a = (target.numer() * modinv(target.denom(), &m)).mod_floor(&m);
        assert_eq!(rational_reconstruct(&a, &m), Some(target));
    }

    #[test]
    fn truncated_z5_misses_the_quartic_relation() {
        let z5 = rack_space(&[5], &[vec![2]]);
        let full = graded_dims(&z5, "z5", &cfg(4)).unwrap();
        let tr = truncated_dims(&z5, "z5", 2, &cfg(4)).unwrap();
        assert_eq!(tr.dims[4], full.dims[4] + 1);
        assert_eq!(tr.dims[..4], full.dims[..4]);
    }

    #[test]
    fn generic_and_coincidence() {
        let b = random_diagonal(2, 11).unwrap();
        let s = generic_smoke(&b, &cfg(4)).unwrap();
        assert_eq!(s.first_relation_degree, None);
        assert_eq!(s.report.dims, vec![1, 2, 4, 8, 16]);
        let k = CyclotomicField::new(1).unwrap();
        let q = vec![vec![k.from_i64(3), k.from_i64(5)], vec![k.rational(1, 5), k.from_i64(7)]];
        let s = generic_smoke(&diagonal_braiding(&k, &q).unwrap(), &cfg(3)).unwrap();
        assert_eq!(s.first_relation_degree, Some(2));
        let two = diagonal_braiding(&k, &[vec![k.from_i64(2)]]).unwrap();
        let s = generic_smoke(&two, &cfg(8)).unwrap();
        assert_eq!(s.first_relation_degree, None);
        assert_eq!(s.report.dims, vec![1; 9]);
    }

    #[test]
    fn cartan_a2_at_cube_root() {
        let k = CyclotomicField::new(3).unwrap();
        let b = cartan_braiding(&k, &[vec![2, -1], vec![-1, 2]], &k.zeta_power(1)).unwrap();
        let r = graded_dims(&b, "a2", &cfg(12)).unwrap();
        assert_eq!(r.total_dim, Some(27));
        assert_eq!(r.top_degree, Some(8));
    }

    #[test]
    fn terminated_examples_are_palindromic() {
        for b in [rack_space(&[3], &[vec![2]]), rack_space(&[2, 2], &[vec![0, 1], vec![1, 1]])] {
            let r = graded_dims(&b, "", &cfg(12)).unwrap();
            let top = r.top_degree.unwrap();
            assert!((0..=top).all(|m| r.dims[m] == r.dims[top - m]), "{:?}", r.dims);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn truncations_bound_the_nichols_algebra(exps in proptest::collection::vec(0i64..6, 4), sign in 0i64..2) {
            let k = CyclotomicField::new(6).unwrap();
            let s = if sign == 0 { k.one() } else { k.from_i64(-2) };
            let q: Vec<Vec<Cyc>> = exps.chunks(2).map(|row| row.iter().map(|&e| k.mul(&s, &k.zeta_power(e))).collect()).collect();
            let b = diagonal_braiding(&k, &q).unwrap();
            let full = graded_dims(&b, "", &cfg(5)).unwrap();
            let t2 = truncated_dims(&b, "", 2, &cfg(5)).unwrap();
            let t3 = truncated_dims(&b, "", 3, &cfg(5)).unwrap();
            for m in 0..full.dims.len() {
                let (d2, d3) = (t2.dims.get(m).copied().unwrap_or(0), t3.dims.get(m).copied().unwrap_or(0));
                proptest::prop_assert!(d3 >= full.dims[m]);
                proptest::prop_assert!(d2 >= d3);
            }
        }
    }
}

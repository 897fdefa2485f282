//! Braided vector spaces: constructors for the in-scope families, the
//! structural checks (braid equation, rigidity, Hecke condition) and the
//! dual braiding.

mod cartan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cartan::{cartan_diagnose, CartanDiagnosis, CartanType, Verdict};

use crate::linalg;
use crate::racks::{check_rack, Cocycle, Rack};
use crate::scalars::{Cyc, CyclotomicField, Field, ScalarError};
use crate::tensorops::apply_generator_sparse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BraidingError {
    #[error("parameter at {0} is zero")]
    ZeroParameter(String),
    #[error("not a generalized Cartan matrix: {0}")]
    NotCartanMatrix(String),
    #[error("braid equation fails on x{}⊗x{}⊗x{}", .0[0], .0[1], .0[2])]
    BraidEquationFails([usize; 3]),
    #[error("braiding is not invertible")]
    NotInvertible,
    #[error("braiding is not of diagonal type")]
    NotDiagonal,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Where a braided space came from. Scalars are recorded in printed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Diagonal,
    Cartan { matrix: Vec<Vec<i64>>, q: String },
    Rack { rack: String, cocycle: String },
    Jordanian { theta: usize, q: String },
    Custom,
    Dual { q: String, of: Box<Family> },
    Transpose { of: Box<Family> },
}

/// `V` with basis `x_0..x_{n-1}` and `c(x_i⊗x_j) = Σ c^{kl}_{ij} x_k⊗x_l`.
/// Pairs are encoded as `i*n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BraidedSpace {
    n: usize,
    field: CyclotomicField,
    images: Vec<Vec<(usize, Cyc)>>,
    family: Family,
}

/// Raw coefficient list: `(i, j, k, l, c^{kl}_{ij})`.
pub type CoefficientList = Vec<(usize, usize, usize, usize, Cyc)>;

impl BraidedSpace {
    fn from_images(n: usize, field: &CyclotomicField, mut images: Vec<Vec<(usize, Cyc)>>, family: Family) -> Self {
        for img in images.iter_mut() {
            img.retain(|(_, c)| !field.is_zero(c));
            img.sort_by_key(|(p, _)| *p);
        }
        BraidedSpace { n, field: field.clone(), images, family }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `c(x_i⊗x_j)` as `(k*n + l, coefficient)` pairs, sorted.
    pub fn image(&self, i: usize, j: usize) -> &[(usize, Cyc)] {
        &self.images[i * self.n + j]
    }

    pub fn coefficients(&self) -> CoefficientList {
        let n = self.n;
        let mut out = Vec::new();
        for (p, img) in self.images.iter().enumerate() {
            for (q, c) in img {
                out.push((p / n, p % n, q / n, q % n, c.clone()));
            }
        }
        out
    }

    /// Each `x_i⊗x_j` goes to a single scaled basis tensor.
    pub fn is_monomial(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }

    /// The n²×n² matrix of `c`; column `i*n+j` is `c(x_i⊗x_j)`.
    pub fn matrix(&self) -> Vec<Vec<Cyc>> {
        let n2 = self.n * self.n;
        let mut m = vec![vec![self.field.zero(); n2]; n2];
        for (col, img) in self.images.iter().enumerate() {
            for (row, c) in img {
                m[*row][col] = c.clone();
            }
        }
        m
    }

    /// `cᵗ`, with `(cᵗ)^{ij}_{kl} = c^{kl}_{ij}`.
    pub fn transpose(&self) -> BraidedSpace {
        let n2 = self.n * self.n;
        let mut images = vec![Vec::new(); n2];
        for (src, img) in self.images.iter().enumerate() {
            for (dst, c) in img {
                images[*dst].push((src, c.clone()));
            }
        }
        BraidedSpace::from_images(self.n, &self.field, images, Family::Transpose { of: Box::new(self.family.clone()) })
    }

    /// Re-expresses the coefficients in a larger cyclotomic field.
    pub fn extend_field(&self, target: &CyclotomicField) -> Result<BraidedSpace, ScalarError> {
        let images = self
            .images
            .iter()
            .map(|img| img.iter().map(|(p, c)| Ok((*p, target.embed(&self.field, c)?))).collect())
            .collect::<Result<_, ScalarError>>()?;
        Ok(BraidedSpace { n: self.n, field: target.clone(), images, family: self.family.clone() })
    }

    pub fn to_json(&self) -> String {
        let dto = BraidedSpaceJson {
            n: self.n,
            order: self.field.order(),
            family: self.family.clone(),
            coefficients: self
                .coefficients()
                .into_iter()
                .map(|(i, j, k, l, c)| (i, j, k, l, c.coeffs().iter().map(|r| r.to_string()).collect()))
                .collect(),
        };
        serde_json::to_string(&dto).expect("braided space serialises")
    }

    /// Parses [`BraidedSpace::to_json`] output and re-validates it.
    pub fn from_json(s: &str) -> Result<BraidedSpace, BraidingError> {
        let dto: BraidedSpaceJson =
            serde_json::from_str(s).map_err(|e| BraidingError::DimensionMismatch(e.to_string()))?;
        let field = CyclotomicField::new(dto.order)?;
        let mut coeffs = Vec::new();
        for (i, j, k, l, c) in dto.coefficients {
            if c.len() != field.degree() {
                return Err(BraidingError::DimensionMismatch(format!("coefficient of length {}", c.len())));
            }
            let parsed = c
                .iter()
                .map(|t| t.parse().map_err(|_| BraidingError::DimensionMismatch(format!("bad rational {t}"))))
                .collect::<Result<Vec<_>, _>>()?;
            coeffs.push((i, j, k, l, Cyc::from_coeffs(parsed)));
        }
        let mut b = custom_braiding(dto.n, &field, coeffs)?;
        b.family = dto.family;
        Ok(b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BraidedSpaceJson {
    n: usize,
    order: u32,
    family: Family,
    coefficients: Vec<(usize, usize, usize, usize, Vec<String>)>,
}

/// `c(x_i⊗x_j) = q_ij x_j⊗x_i`.
pub fn diagonal_braiding(field: &CyclotomicField, q: &[Vec<Cyc>]) -> Result<BraidedSpace, BraidingError> {
    let n = q.len();
    if n == 0 || q.iter().any(|r| r.len() != n) {
        return Err(BraidingError::DimensionMismatch("q must be a non-empty square matrix".into()));
    }
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if field.is_zero(&q[i][j]) {
                return Err(BraidingError::ZeroParameter(format!("q[{i}][{j}]")));
            }
            images.push(vec![(j * n + i, q[i][j].clone())]);
        }
    }
    Ok(BraidedSpace::from_images(n, field, images, Family::Diagonal))
}

/// Diagonal braiding with `q_ij = q^{a_ij}`.
pub fn cartan_braiding(field: &CyclotomicField, a: &[Vec<i64>], q: &Cyc) -> Result<BraidedSpace, BraidingError> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(BraidingError::NotCartanMatrix("matrix must be non-empty and square".into()));
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(BraidingError::NotCartanMatrix(format!("a[{i}][{i}] = {}", a[i][i])));
        }
        for j in 0..n {
            if i != j && a[i][j] > 0 {
                return Err(BraidingError::NotCartanMatrix(format!("a[{i}][{j}] = {} > 0", a[i][j])));
            }
            if i != j && (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(BraidingError::NotCartanMatrix(format!("a[{i}][{j}] and a[{j}][{i}] disagree on zero")));
            }
        }
    }
    if field.is_zero(q) {
        return Err(BraidingError::ZeroParameter("q".into()));
    }
    let qm: Vec<Vec<Cyc>> =
        a.iter().map(|row| row.iter().map(|&e| field.pow(q, e).expect("q is nonzero")).collect()).collect();
    let mut b = diagonal_braiding(field, &qm)?;
    b.family = Family::Cartan { matrix: a.to_vec(), q: field.format(q) };
    Ok(b)
}

/// `c(x_i⊗x_j) = q_ij x_{i▷j}⊗x_i`.
pub fn rack_braiding(rack: &Rack, cocycle: &Cocycle) -> Result<BraidedSpace, BraidingError> {
    let n = rack.size();
    if cocycle.size() != n || cocycle.q.iter().any(|r| r.len() != n) {
        return Err(BraidingError::DimensionMismatch(format!("cocycle must be {n}x{n}")));
    }
    if let Err(v) = check_rack(rack) {
        return Err(BraidingError::DimensionMismatch(format!("not a rack: {v}")));
    }
    let field = &cocycle.field;
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if field.is_zero(&cocycle.q[i][j]) {
                return Err(BraidingError::ZeroParameter(format!("q[{i}][{j}]")));
            }
            images.push(vec![(rack.op(i, j) * n + i, cocycle.q[i][j].clone())]);
        }
    }
    let first = &cocycle.q[0][0];
    let desc = if cocycle.q.iter().flatten().all(|x| x == first) {
        format!("constant {}", field.format(first))
    } else {
        "matrix".to_string()
    };
    let b = BraidedSpace::from_images(n, field, images, Family::Rack { rack: rack.label.clone(), cocycle: desc });
    check_braid_equation(&b).map_err(BraidingError::BraidEquationFails)?;
    Ok(b)
}

/// `c = (g⊗id)∘τ` with `g` a single Jordan block of eigenvalue `q`:
/// `c(x_i⊗x_0) = q x_0⊗x_i`, `c(x_i⊗x_j) = (q x_j + x_{j-1})⊗x_i`.
pub fn jordanian_braiding(field: &CyclotomicField, theta: usize, q: &Cyc) -> Result<BraidedSpace, BraidingError> {
    if theta == 0 {
        return Err(BraidingError::DimensionMismatch("theta must be at least 1".into()));
    }
    if field.is_zero(q) {
        return Err(BraidingError::ZeroParameter("q".into()));
    }
    let n = theta;
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut img = vec![(j * n + i, q.clone())];
            if j > 0 {
                img.push(((j - 1) * n + i, field.one()));
            }
            images.push(img);
        }
    }
    Ok(BraidedSpace::from_images(n, field, images, Family::Jordanian { theta, q: field.format(q) }))
}

/// Arbitrary coefficients, validated for invertibility and the braid
/// equation.
pub fn custom_braiding(
    n: usize,
    field: &CyclotomicField,
    coeffs: CoefficientList,
) -> Result<BraidedSpace, BraidingError> {
    if n == 0 {
        return Err(BraidingError::DimensionMismatch("n must be positive".into()));
    }
    let mut images = vec![Vec::new(); n * n];
    for (i, j, k, l, c) in coeffs {
        if [i, j, k, l].iter().any(|&x| x >= n) {
            return Err(BraidingError::DimensionMismatch(format!("index out of range in ({i},{j},{k},{l})")));
        }
        let img: &mut Vec<(usize, Cyc)> = &mut images[i * n + j];
        match img.iter_mut().find(|(p, _)| *p == k * n + l) {
            Some((_, acc)) => *acc = field.add(acc, &c),
            None => img.push((k * n + l, c)),
        }
    }
    let b = BraidedSpace::from_images(n, field, images, Family::Custom);
    if linalg::rank(field, &b.matrix(), n * n) < n * n {
        return Err(BraidingError::NotInvertible);
    }
    check_braid_equation(&b).map_err(BraidingError::BraidEquationFails)?;
    Ok(b)
}

/// Compares `c1 c2 c1` with `c2 c1 c2` on every basis tensor of `V⊗V⊗V`;
/// on failure returns the first `(i, j, k)` where they differ.
pub fn check_braid_equation(b: &BraidedSpace) -> Result<(), [usize; 3]> {
    let n = b.n;
    let lb = b.over(&b.field).expect("identity embedding");
    for w in 0..(n * n * n) as u64 {
        let v = vec![(w, b.field.one())];
        let lhs = apply_generator_sparse(&lb, 3, 1, &v);
        let lhs = apply_generator_sparse(&lb, 3, 2, &lhs);
        let lhs = apply_generator_sparse(&lb, 3, 1, &lhs);
        let rhs = apply_generator_sparse(&lb, 3, 2, &v);
        let rhs = apply_generator_sparse(&lb, 3, 1, &rhs);
        let rhs = apply_generator_sparse(&lb, 3, 2, &rhs);
        if lhs != rhs {
            let w = w as usize;
            return Err([w / (n * n), (w / n) % n, w % n]);
        }
    }
    Ok(())
}

/// Bijectivity of `c♭`, via the matrix `D_{(l,m),(i,j)} = c^{il}_{jm}`.
pub fn check_rigidity(b: &BraidedSpace) -> bool {
    let n = b.n;
    let n2 = n * n;
    let f = &b.field;
    let mut d = vec![vec![f.zero(); n2]; n2];
    // c(x_j⊗x_m) ∋ c^{il}_{jm} x_i⊗x_l  →  D[(l,m)][(i,j)]
    for j in 0..n {
        for m in 0..n {
            for (p, c) in b.image(j, m) {
                let (i, l) = (p / n, p % n);
                d[l * n + m][i * n + j] = c.clone();
            }
        }
    }
    linalg::rank(f, &d, n2) == n2
}

fn compose_square(b: &BraidedSpace) -> Vec<Vec<(usize, Cyc)>> {
    let f = &b.field;
    b.images
        .iter()
        .map(|img| {
            let mut acc: Vec<(usize, Cyc)> = Vec::new();
            for (mid, c1) in img {
                for (dst, c2) in &b.images[*mid] {
                    let t = f.mul(c1, c2);
                    match acc.iter_mut().find(|(p, _)| p == dst) {
                        Some((_, a)) => *a = f.add(a, &t),
                        None => acc.push((*dst, t)),
                    }
                }
            }
            acc.retain(|(_, c)| !f.is_zero(c));
            acc.sort_by_key(|(p, _)| *p);
            acc
        })
        .collect()
}

/// Result of [`hecke_label`].
#[derive(Debug, Clone, PartialEq)]
pub enum Hecke {
    /// `(c − q)(c + 1) = 0` for exactly this `q`.
    Q(Cyc),
    /// `c = −id`: every `q` works.
    Undetermined,
}

/// Decides whether `(c − q)(c + 1) = 0` for some nonzero `q`, from the
/// minimal polynomial of `c`.
pub fn hecke_type(b: &BraidedSpace) -> Option<Hecke> {
    let f = &b.field;
    let n2 = b.n * b.n;
    let minus_one = f.from_i64(-1);
    let entry = |m: &[Vec<(usize, Cyc)>], row: usize, col: usize| -> Cyc {
        m[col].iter().find(|(p, _)| *p == row).map(|(_, c)| c.clone()).unwrap_or_else(|| f.zero())
    };
    // scalar c = λ·id
    let lambda = entry(&b.images, 0, 0);
    if b.images.iter().enumerate().all(|(col, img)| img.len() == 1 && img[0].0 == col && img[0].1 == lambda) {
        return if lambda == minus_one { Some(Hecke::Undetermined) } else { Some(Hecke::Q(lambda)) };
    }
    // otherwise the minimal polynomial must be X² − aX − b with b = a + 1 = q
    let sq = compose_square(b);
    let (a, bcoef) = {
        let off = (0..n2).find_map(|col| b.images[col].iter().find(|(p, _)| *p != col).map(|(p, c)| (*p, col, c)));
        match off {
            Some((row, col, c)) => {
                let a = f.mul(&entry(&sq, row, col), &f.inv(c).unwrap());
                let bb = f.sub(&entry(&sq, col, col), &f.mul(&a, &entry(&b.images, col, col)));
                (a, bb)
            }
            None => {
                // diagonal with at least two distinct entries
                let d: Vec<Cyc> = (0..n2).map(|k| entry(&b.images, k, k)).collect();
                let k = (1..n2).find(|&k| d[k] != d[0])?;
                let (x, y) = (&d[0], &d[k]);
                // x² = a x + b, y² = a y + b
                let a = f.mul(&f.sub(&f.mul(x, x), &f.mul(y, y)), &f.inv(&f.sub(x, y))?);
                let bb = f.sub(&f.mul(x, x), &f.mul(&a, x));
                (a, bb)
            }
        }
    };
    for col in 0..n2 {
        for row in 0..n2 {
            let mut rhs = f.mul(&a, &entry(&b.images, row, col));
            if row == col {
                rhs = f.add(&rhs, &bcoef);
            }
            if entry(&sq, row, col) != rhs {
                return None;
            }
        }
    }
    let q = bcoef;
    (!f.is_zero(&q) && q == f.add(&a, &f.one())).then_some(Hecke::Q(q))
}

/// The Hecke parameter `q`, with `default` used when `c = −id`.
pub fn hecke_label(b: &BraidedSpace, default: Option<&Cyc>) -> Option<Cyc> {
    match hecke_type(b)? {
        Hecke::Q(q) => Some(q),
        Hecke::Undetermined => default.cloned(),
    }
}

/// `−q⁻¹ cᵗ` on the dual basis.
pub fn dual_braiding(b: &BraidedSpace, q: &Cyc) -> Result<BraidedSpace, BraidingError> {
    let f = &b.field;
    let scale = f.neg(&f.inv(q).ok_or_else(|| BraidingError::ZeroParameter("q".into()))?);
    let t = b.transpose();
    let images = t.images.iter().map(|img| img.iter().map(|(p, c)| (*p, f.mul(c, &scale))).collect()).collect();
    Ok(BraidedSpace::from_images(
        b.n,
        f,
        images,
        Family::Dual { q: f.format(q), of: Box::new(b.family.clone()) },
    ))
}

/// `q_ij` if the braiding is of diagonal type.
pub fn diagonal_parameters(b: &BraidedSpace) -> Option<Vec<Vec<Cyc>>> {
    let n = b.n;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match b.image(i, j) {
                    [(p, c)] if *p == j * n + i => Some(c.clone()),
                    _ => None,
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::racks::{affine_rack, constant_cocycle, cube_faces_rack};

    fn q() -> CyclotomicField {
        CyclotomicField::new(1).unwrap()
    }

    fn flip(n: usize) -> BraidedSpace {
        let k = q();
        diagonal_braiding(&k, &vec![vec![k.one(); n]; n]).unwrap()
    }

    fn fk3() -> BraidedSpace {
        let k = q();
        let r = affine_rack(&[3], &[vec![2]]).unwrap();
        rack_braiding(&r, &constant_cocycle(&r, &k, &k.from_i64(-1))).unwrap()
    }

    #[test]
    fn flip_and_rank_one() {
        let t = flip(2);
        assert_eq!(t.image(0, 1), &[(2, q().one())]);
        let k = q();
        let one = diagonal_braiding(&k, &[vec![k.from_i64(5)]]).unwrap();
        assert_eq!(one.image(0, 0), &[(0, k.from_i64(5))]);
        assert!(matches!(diagonal_braiding(&k, &[vec![k.zero()]]), Err(BraidingError::ZeroParameter(_))));
    }

    #[test]
    fn cartan_constructor() {
        let k = CyclotomicField::new(3).unwrap();
        let z = k.zeta_power(1);
        let a1 = cartan_braiding(&k, &[vec![2]], &z).unwrap();
        assert_eq!(a1.image(0, 0)[0].1, k.mul(&z, &z));
        let a2 = cartan_braiding(&k, &[vec![2, -1], vec![-1, 2]], &z).unwrap();
        assert_eq!(a2.image(0, 1)[0].1, k.inv(&z).unwrap());
        assert!(matches!(cartan_braiding(&k, &[vec![2, 1], vec![-1, 2]], &z), Err(BraidingError::NotCartanMatrix(_))));
        assert!(matches!(cartan_braiding(&k, &[vec![1]], &z), Err(BraidingError::NotCartanMatrix(_))));
    }

    #[test]
    fn rack_braidings() {
        let b = fk3();
        // 0 ▷ 1 = 2
        assert_eq!(b.image(0, 1), &[(2 * 3, q().from_i64(-1))]);
        let k = q();
        let z5 = affine_rack(&[5], &[vec![2]]).unwrap();
        assert_eq!(rack_braiding(&z5, &constant_cocycle(&z5, &k, &k.from_i64(-1))).unwrap().dim(), 5);
        let trivial = crate::racks::rack_from_table((0..2).map(|_| (0..2).collect()).collect(), "t").unwrap();
        let tau = rack_braiding(&trivial, &constant_cocycle(&trivial, &k, &k.one())).unwrap();
        assert_eq!(tau.images, flip(2).images);
    }

    #[test]
    fn dihedral_any_constant_cocycle() {
        let k = q();
        let r = affine_rack(&[3], &[vec![2]]).unwrap();
        for v in [-3, 2, 7] {
            assert!(rack_braiding(&r, &constant_cocycle(&r, &k, &k.from_i64(v))).is_ok());
        }
    }

    #[test]
    fn invalid_cocycle_is_rejected() {
        let k = q();
        let r = cube_faces_rack();
        let mut c = constant_cocycle(&r, &k, &k.from_i64(-1));
        c.q[0][1] = k.from_i64(2);
        assert!(matches!(rack_braiding(&r, &c), Err(BraidingError::BraidEquationFails(_))));
    }

    #[test]
    fn jordanian_examples() {
        let k = q();
        let j1 = jordanian_braiding(&k, 1, &k.from_i64(3)).unwrap();
        assert_eq!(j1.image(0, 0), &[(0, k.from_i64(3))]);
        let j2 = jordanian_braiding(&k, 2, &k.one()).unwrap();
        // c(x1⊗x1) = (x1 + x0)⊗x1
        assert_eq!(j2.image(1, 1), &[(1, k.one()), (3, k.one())]);
        assert!(check_braid_equation(&j2).is_ok());
        let j3 = jordanian_braiding(&k, 3, &k.from_i64(2)).unwrap();
        assert!(check_braid_equation(&j3).is_ok());
        assert!(check_rigidity(&j3));
    }

    #[test]
    fn custom_examples() {
        let k = q();
        let minus_flip: CoefficientList =
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j, j, i, CyclotomicField::new(1).unwrap().from_i64(-1)))).collect();
        assert!(custom_braiding(2, &k, minus_flip).is_ok());
        let id: CoefficientList = (0..2).flat_map(|i| (0..2).map(move |j| (i, j, i, j, q().one()))).collect();
        assert!(custom_braiding(2, &k, id).is_ok());
        // x0⊗x0 ↦ x0⊗x1 + x1⊗x0, others fixed: invertible but not a braiding
        let mut bad: CoefficientList = vec![(0, 0, 0, 1, k.one()), (0, 0, 1, 0, k.one()), (0, 0, 0, 0, k.one())];
        bad.extend([(0, 1, 0, 1, k.one()), (1, 0, 1, 0, k.one()), (1, 1, 1, 1, k.one())]);
        assert!(matches!(custom_braiding(2, &k, bad), Err(BraidingError::BraidEquationFails(_))));
        let singular: CoefficientList = vec![(0, 0, 0, 0, k.one())];
        assert!(matches!(custom_braiding(2, &k, singular), Err(BraidingError::NotInvertible)));
    }

    #[test]
    fn corrupted_fk3_fails_braid_equation() {
        let mut b = fk3();
        b.images.swap(1, 2);
        assert!(check_braid_equation(&b).is_err());
        assert!(check_braid_equation(&fk3()).is_ok());
        assert!(check_braid_equation(&flip(3)).is_ok());
    }

    #[test]
    fn rigidity() {
        assert!(check_rigidity(&flip(2)));
        assert!(check_rigidity(&fk3()));
        let k = q();
        let d = diagonal_braiding(&k, &[vec![k.from_i64(2), k.from_i64(3)], vec![k.from_i64(5), k.from_i64(7)]]).unwrap();
        assert!(check_rigidity(&d));
    }

    #[test]
    fn hecke_examples() {
        let k = q();
        assert_eq!(hecke_label(&flip(2), None), Some(k.one()));
        assert_eq!(hecke_label(&fk3(), None), None);
        let minus = diagonal_braiding(&k, &[vec![k.from_i64(-1)]]).unwrap();
        assert_eq!(hecke_type(&minus), Some(Hecke::Undetermined));
        assert_eq!(hecke_label(&minus, Some(&k.from_i64(3))), Some(k.from_i64(3)));
        let two = diagonal_braiding(&k, &[vec![k.from_i64(2)]]).unwrap();
        assert_eq!(hecke_label(&two, None), Some(k.from_i64(2)));
        // quantum plane: q_12 q_21 = q_11 = q_22 = q
        let qp = diagonal_braiding(&k, &[vec![k.from_i64(3), k.from_i64(3)], vec![k.one(), k.from_i64(3)]]).unwrap();
        assert_eq!(hecke_type(&qp), None);
    }

    #[test]
    fn hecke_label_satisfies_the_identity() {
        let k = q();
        for b in [flip(2), flip(3), dual_braiding(&flip(2), &k.one()).unwrap()] {
            let qv = hecke_label(&b, Some(&k.one())).unwrap();
            let m = b.matrix();
            let n2 = m.len();
            for r in 0..n2 {
                for c in 0..n2 {
                    // ((c − q)(c + 1))[r][c] = (c²)[r][c] + (1 − q) c[r][c] − q δ
                    let mut acc = k.zero();
                    for t in 0..n2 {
                        acc = k.add(&acc, &k.mul(&m[r][t], &m[t][c]));
                    }
                    acc = k.add(&acc, &k.mul(&k.sub(&k.one(), &qv), &m[r][c]));
                    if r == c {
                        acc = k.sub(&acc, &qv);
                    }
                    assert!(k.is_zero(&acc));
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let k = q();
        let d = dual_braiding(&flip(2), &k.one()).unwrap();
        assert_eq!(d.image(0, 1), &[(2, k.from_i64(-1))]);
        let dd = dual_braiding(&d, &k.one()).unwrap();
        assert_eq!(dd.images, flip(2).images);
        let one = diagonal_braiding(&k, &[vec![k.one()]]).unwrap();
        assert_eq!(dual_braiding(&one, &k.one()).unwrap().image(0, 0), &[(0, k.from_i64(-1))]);
        assert!(check_braid_equation(&dual_braiding(&fk3(), &k.from_i64(2)).unwrap()).is_ok());
        let j = jordanian_braiding(&k, 3, &k.from_i64(2)).unwrap();
        assert!(check_braid_equation(&dual_braiding(&j, &k.from_i64(2)).unwrap()).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let b = fk3();
        let back = BraidedSpace::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
        let k = CyclotomicField::new(3).unwrap();
        let c = cartan_braiding(&k, &[vec![2, -1], vec![-1, 2]], &k.zeta_power(1)).unwrap();
        assert_eq!(BraidedSpace::from_json(&c.to_json()).unwrap(), c);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn random_diagonal_and_rack_constructions(
            entries in proptest::collection::vec((-4i64..5, 1i64..4, 0i64..6), 4),
            n in 3u32..8,
            sign in proptest::prelude::prop_oneof![proptest::prelude::Just(1i64), proptest::prelude::Just(-1i64)],
        ) {
            let k = CyclotomicField::new(6).unwrap();
            let value = |(a, b, e): (i64, i64, i64)| {
                let a = if a == 0 { 1 } else { a };
                k.mul(&k.rational(a, b), &k.zeta_power(e))
            };
            let q: Vec<Vec<Cyc>> = entries.chunks(2).map(|row| row.iter().map(|&t| value(t)).collect()).collect();
            let b = diagonal_braiding(&k, &q).unwrap();
            proptest::prop_assert!(check_braid_equation(&b).is_ok());
            proptest::prop_assert!(check_rigidity(&b));

            let r = affine_rack(&[n], &[vec![-1]]).unwrap();
            let b = rack_braiding(&r, &constant_cocycle(&r, &k, &k.from_i64(sign))).unwrap();
            proptest::prop_assert!(check_braid_equation(&b).is_ok());
            proptest::prop_assert!(check_rigidity(&b));
            if let Some(q) = hecke_label(&b, None) {
                let d = dual_braiding(&b, &q).unwrap();
                proptest::prop_assert!(check_braid_equation(&d).is_ok());
            }
        }
    }
}

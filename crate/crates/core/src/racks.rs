//! Finite racks: self-distributive operations with bijective left
//! translations, and the scalar matrices used to twist them.
//!
//! Element orderings are fixed so that relation dumps are reproducible:
//! affine racks use mixed radix with the first coordinate most significant,
//! transpositions `(a b)` with `a < b` are sorted lexicographically, and the
//! cube faces are `[+e1, +e2, +e3, -e1, -e2, -e3]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Cyc, CyclotomicField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RackError {
    #[error("g is not an automorphism of the group with moduli {moduli:?}")]
    NotAutomorphism { moduli: Vec<u32> },
    #[error("not a rack: {0}")]
    NotARack(RackViolation),
    #[error("invalid rack table: {0}")]
    InvalidTable(String),
}

/// The first failing axiom instance found by [`check_rack`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum RackViolation {
    /// `i ▷ j == i ▷ k` with `j != k`.
    NotBijective { i: usize, j: usize, k: usize },
    /// `i ▷ (j ▷ k) != (i ▷ j) ▷ (i ▷ k)`.
    NotSelfDistributive { i: usize, j: usize, k: usize },
}

impl std::fmt::Display for RackViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            RackViolation::NotBijective { i, j, k } => {
                write!(f, "left translation by {i} sends both {j} and {k} to the same element")
            }
            RackViolation::NotSelfDistributive { i, j, k } => {
                write!(f, "{i} > ({j} > {k}) differs from ({i} > {j}) > ({i} > {k})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rack {
    pub label: String,
    /// `table[i][j] = i ▷ j`.
    pub table: Vec<Vec<usize>>,
}

impl Rack {
    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn from_json(s: &str) -> Result<Rack, RackError> {
        let raw: Rack = serde_json::from_str(s).map_err(|e| RackError::InvalidTable(e.to_string()))?;
        rack_from_table(raw.table, &raw.label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rack serialises")
    }
}

pub fn check_rack(r: &Rack) -> Result<(), RackViolation> {
    let n = r.size();
    for i in 0..n {
        let mut seen = vec![None; n];
        for j in 0..n {
            let t = r.op(i, j);
            if let Some(k) = seen[t] {
                return Err(RackViolation::NotBijective { i, j: k, k: j });
            }
            seen[t] = Some(j);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if r.op(i, r.op(j, k)) != r.op(r.op(i, j), r.op(i, k)) {
                    return Err(RackViolation::NotSelfDistributive { i, j, k });
                }
            }
        }
    }
    Ok(())
}

pub fn rack_from_table(table: Vec<Vec<usize>>, label: &str) -> Result<Rack, RackError> {
    let n = table.len();
    if n == 0 {
        return Err(RackError::InvalidTable("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(RackError::InvalidTable(format!("row {i} has length {}, expected {n}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(RackError::InvalidTable(format!("entry {x} in row {i} is out of range")));
        }
    }
    let r = Rack { label: label.to_string(), table };
    check_rack(&r).map_err(RackError::NotARack)?;
    Ok(r)
}

/// Affine rack on `A = ∏ ℤ/mᵢ` with `a ▷ b = g(b) + (id − g)(a)`.
/// `g` acts on column vectors: `g(a)_r = Σ_s g[r][s] a_s mod m_r`.
pub fn affine_rack(moduli: &[u32], g: &[Vec<i64>]) -> Result<Rack, RackError> {
    let k = moduli.len();
    let not_aut = || RackError::NotAutomorphism { moduli: moduli.to_vec() };
    if k == 0 || moduli.contains(&0) || g.len() != k || g.iter().any(|row| row.len() != k) {
        return Err(not_aut());
    }
    // well defined on the quotient: g[r][s] * m_s ≡ 0 (mod m_r)
    for r in 0..k {
        for s in 0..k {
            if (g[r][s] * moduli[s] as i64).rem_euclid(moduli[r] as i64) != 0 {
                return Err(not_aut());
            }
        }
    }
    let size: usize = moduli.iter().map(|&m| m as usize).product();
    let decode = |mut x: usize| -> Vec<i64> {
        let mut v = vec![0i64; k];
        for r in (0..k).rev() {
            v[r] = (x % moduli[r] as usize) as i64;
            x /= moduli[r] as usize;
        }
        v
    };
    let encode = |v: &[i64]| -> usize {
        v.iter().zip(moduli).fold(0usize, |acc, (&x, &m)| acc * m as usize + x.rem_euclid(m as i64) as usize)
    };
    let apply_g = |v: &[i64]| -> Vec<i64> {
        (0..k).map(|r| (0..k).map(|s| g[r][s] * v[s]).sum::<i64>().rem_euclid(moduli[r] as i64)).collect()
    };
    let images: Vec<usize> = (0..size).map(|x| encode(&apply_g(&decode(x)))).collect();
    let mut hit = vec![false; size];
    for &y in &images {
        hit[y] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(not_aut());
    }
    let table = (0..size)
        .map(|a| {
            let va = decode(a);
            let ga = decode(images[a]);
            (0..size)
                .map(|b| {
                    let gb = decode(images[b]);
                    let v: Vec<i64> = (0..k).map(|r| gb[r] + va[r] - ga[r]).collect();
                    encode(&v)
                })
                .collect()
        })
        .collect();
    let label = format!("affine(Z/{}; g={:?})", moduli.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("xZ/"), g);
    rack_from_table(table, &label)
}

/// The transpositions of 𝕊_n under conjugation, ordered lexicographically
/// by their moved points.
pub fn conjugation_rack(n: usize) -> Result<Rack, RackError> {
    if n < 2 {
        return Err(RackError::InvalidTable(format!("need n >= 2 for transpositions, got {n}")));
    }
    let elems: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index = |p: (usize, usize)| elems.iter().position(|&e| e == (p.0.min(p.1), p.0.max(p.1))).unwrap();
    let table = elems
        .iter()
        .map(|&(a, b)| {
            let swap = |x: usize| if x == a { b } else if x == b { a } else { x };
            elems.iter().map(|&(c, d)| index((swap(c), swap(d)))).collect()
        })
        .collect();
    rack_from_table(table, &format!("transpositions(S{n})"))
}

/// Outward normals in rack order.
pub const CUBE_FACES: [[i32; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]];

fn quarter_turn(axis: [i32; 3], v: [i32; 3], sign: i32) -> [i32; 3] {
    // R v = (u·v) u + sign (u × v) for a unit axis u
    let dot: i32 = (0..3).map(|k| axis[k] * v[k]).sum();
    let cross = [
        axis[1] * v[2] - axis[2] * v[1],
        axis[2] * v[0] - axis[0] * v[2],
        axis[0] * v[1] - axis[1] * v[0],
    ];
    [0, 1, 2].map(|k| dot * axis[k] + sign * cross[k])
}

fn cube_rack(sign: i32, label: &str) -> Rack {
    let table = CUBE_FACES
        .iter()
        .map(|&u| {
            CUBE_FACES
                .iter()
                .map(|&v| {
                    let w = quarter_turn(u, v, sign);
                    CUBE_FACES.iter().position(|&f| f == w).unwrap()
                })
                .collect()
        })
        .collect();
    rack_from_table(table, label).expect("cube faces form a rack")
}

/// `i ▷ j` rotates face `j` by +90° about the outward normal of face `i`
/// (counter-clockwise seen from outside the cube).
pub fn cube_faces_rack() -> Rack {
    cube_rack(1, "cube_faces")
}

/// The opposite orientation (−90°); the inverse rack of [`cube_faces_rack`].
pub fn cube_faces_rack_clockwise() -> Rack {
    cube_rack(-1, "cube_faces(clockwise)")
}

/// Scalar matrix `q_ij` over a cyclotomic field.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    pub field: CyclotomicField,
    pub q: Vec<Vec<Cyc>>,
}

impl Cocycle {
    pub fn size(&self) -> usize {
        self.q.len()
    }
}

pub fn constant_cocycle(r: &Rack, field: &CyclotomicField, value: &Cyc) -> Cocycle {
    let n = r.size();
    Cocycle { field: field.clone(), q: vec![vec![value.clone(); n]; n] }
}

/// Per-element data preserved by rack isomorphisms.
fn profile(r: &Rack) -> Vec<(Vec<usize>, usize, usize)> {
    let n = r.size();
    (0..n)
        .map(|i| {
            let mut cycles = Vec::new();
            let mut seen = vec![false; n];
            for s in 0..n {
                let mut len = 0;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = r.op(i, x);
                    len += 1;
                }
                if len > 0 {
                    cycles.push(len);
                }
            }
            cycles.sort_unstable();
            let idempotent = usize::from(r.op(i, i) == i);
            let fixers = (0..n).filter(|&j| r.op(j, i) == i).count();
            (cycles, idempotent, fixers)
        })
        .collect()
}

/// Whether a bijection `φ` with `φ(i ▷ j) = φ(i) ▷ φ(j)` exists.
pub fn rack_isomorphic(a: &Rack, b: &Rack) -> bool {
    let n = a.size();
    if n != b.size() {
        return false;
    }
    let pa = profile(a);
    let pb = profile(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(a, b, &pa, &pb, &mut phi, &mut used, 0)
}

fn search(
    a: &Rack,
    b: &Rack,
    pa: &[(Vec<usize>, usize, usize)],
    pb: &[(Vec<usize>, usize, usize)],
    phi: &mut [usize],
    used: &mut [bool],
    next: usize,
) -> bool {
    let n = a.size();
    let Some(x) = (next..n).find(|&x| phi[x] == usize::MAX) else {
        return true;
    };
    for y in 0..n {
        if used[y] || pa[x] != pb[y] {
            continue;
        }
        let snapshot = phi.to_vec();
        let used_snapshot = used.to_vec();
        phi[x] = y;
        used[y] = true;
        if propagate(a, b, phi, used) && search(a, b, pa, pb, phi, used, x + 1) {
            return true;
        }
        phi.copy_from_slice(&snapshot);
        used.copy_from_slice(&used_snapshot);
    }
    false
}

/// Closes the partial map under `φ(i ▷ j) = φ(i) ▷ φ(j)`; false on conflict.
fn propagate(a: &Rack, b: &Rack, phi: &mut [usize], used: &mut [bool]) -> bool {
    let n = a.size();
    loop {
        let mut changed = false;
        for i in 0..n {
            if phi[i] == usize::MAX {
                continue;
            }
            for j in 0..n {
                if phi[j] == usize::MAX {
                    continue;
                }
                let src = a.op(i, j);
                let dst = b.op(phi[i], phi[j]);
                if phi[src] == usize::MAX {
                    if used[dst] {
                        return false;
                    }
                    phi[src] = dst;
                    used[dst] = true;
                    changed = true;
                } else if phi[src] != dst {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn dihedral(n: usize) -> Rack {
        affine_rack(&[n as u32], &[vec![-1]]).unwrap()
    }

    #[test]
    fn affine_z3_g2() {
        let r = affine_rack(&[3], &[vec![2]]).unwrap();
        assert_eq!(r.op(1, 2), 0);
        assert_eq!(r.op(0, 1), 2);
    }

    #[test]
    fn affine_z5_is_dihedral_formula() {
        let r = affine_rack(&[5], &[vec![2]]).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(r.op(i, j), (2 * j + 5 * 5 - i) % 5);
            }
        }
    }

    #[test]
    fn affine_klein_four() {
        let r = affine_rack(&[2, 2], &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(r.size(), 4);
        // 0 ▷ b = g(b); g(e1) = (1,1) with e1 = (0,1) -> index 1
        assert_eq!(r.op(0, 1), 3);
        assert_eq!(r.op(0, 2), 1);
        assert!(matches!(
            affine_rack(&[2, 2], &[vec![1, 1], vec![1, 1]]),
            Err(RackError::NotAutomorphism { .. })
        ));
        assert!(matches!(affine_rack(&[4], &[vec![2]]), Err(RackError::NotAutomorphism { .. })));
    }

    #[test]
    fn transpositions_of_s3() {
        let r = conjugation_rack(3).unwrap();
        // elements (01), (02), (12); (01) ▷ (12) = (02)
        assert_eq!(r.size(), 3);
        assert_eq!(r.op(0, 2), 1);
        assert_eq!(conjugation_rack(4).unwrap().size(), 6);
        assert_eq!(conjugation_rack(5).unwrap().size(), 10);
    }

    #[test]
    fn cube_rotation_convention() {
        let r = cube_faces_rack();
        // +e3 ▷ +e1 = +e2
        assert_eq!(r.op(2, 0), 1);
        for i in 0..6 {
            assert_eq!(r.op(i, i), i);
            assert_eq!(r.op(i, (i + 3) % 6), (i + 3) % 6);
        }
        let cw = cube_faces_rack_clockwise();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(cw.op(i, r.op(i, j)), j);
            }
        }
    }

    #[test]
    fn table_validation() {
        let trivial: Vec<Vec<usize>> = (0..4).map(|_| (0..4).collect()).collect();
        assert!(rack_from_table(trivial, "trivial").is_ok());
        let d3 = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(rack_from_table(d3, "d3").is_ok());
        let bad = vec![vec![0, 0], vec![0, 1]];
        assert!(matches!(
            rack_from_table(bad, "bad"),
            Err(RackError::NotARack(RackViolation::NotBijective { i: 0, .. }))
        ));
        let not_sd = vec![vec![1, 0, 2], vec![0, 1, 2], vec![0, 1, 2]];
        assert!(matches!(
            rack_from_table(not_sd, "x"),
            Err(RackError::NotARack(RackViolation::NotSelfDistributive { .. }))
        ));
    }

    #[test]
    fn isomorphism_examples() {
        let z3 = affine_rack(&[3], &[vec![2]]).unwrap();
        let s3 = conjugation_rack(3).unwrap();
        assert!(rack_isomorphic(&z3, &s3));
        let s4 = conjugation_rack(4).unwrap();
        let cube = cube_faces_rack();
        assert!(!rack_isomorphic(&s4, &cube));
        assert!(rack_isomorphic(&cube, &cube_faces_rack_clockwise()));
        for r in [&z3, &s4, &cube] {
            assert!(rack_isomorphic(r, r));
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence_on_examples() {
        let corpus = vec![
            affine_rack(&[3], &[vec![2]]).unwrap(),
            conjugation_rack(3).unwrap(),
            dihedral(3),
            affine_rack(&[5], &[vec![2]]).unwrap(),
            affine_rack(&[5], &[vec![3]]).unwrap(),
            dihedral(5),
            affine_rack(&[2, 2], &[vec![0, 1], vec![1, 1]]).unwrap(),
            conjugation_rack(4).unwrap(),
            cube_faces_rack(),
            cube_faces_rack_clockwise(),
        ];
        let k = corpus.len();
        let rel: Vec<Vec<bool>> =
            (0..k).map(|i| (0..k).map(|j| rack_isomorphic(&corpus[i], &corpus[j])).collect()).collect();
        for i in 0..k {
            assert!(rel[i][i]);
            for j in 0..k {
                assert_eq!(rel[i][j], rel[j][i]);
                for l in 0..k {
                    if rel[i][j] && rel[j][l] {
                        assert!(rel[i][l]);
                    }
                }
            }
        }
    }

    #[test]
    fn affine_left_translations_are_homogeneous() {
        for n in 3..=10u32 {
            for g in 1..n as i64 {
                let Ok(r) = affine_rack(&[n], &[vec![g]]) else { continue };
                let p = profile(&r);
                assert!(p.iter().all(|x| x.0 == p[0].0), "n={n} g={g}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let r = conjugation_rack(3).unwrap();
        assert_eq!(Rack::from_json(&r.to_json()).unwrap(), r);
        assert!(Rack::from_json(r#"{"label":"x","table":[[0,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn constant_cocycle_fills() {
        let q = CyclotomicField::new(1).unwrap();
        let r = dihedral(3);
        let c = constant_cocycle(&r, &q, &q.from_i64(-1));
        assert_eq!(c.size(), 3);
        assert!(c.q.iter().flatten().all(|x| *x == q.from_i64(-1)));
    }

    proptest::proptest! {
        #[test]
        fn affine_racks_on_cyclic_groups(n in 2u32..13, g in 1i64..13) {
            let unit = (1..n as i64).find(|&u| (u * g).rem_euclid(n as i64) == 1).is_some();
            proptest::prop_assume!(unit);
            let r = affine_rack(&[n], &[vec![g]]).unwrap();
            proptest::prop_assert!(check_rack(&r).is_ok());
            let cycles = |i: usize| {
                let mut seen = vec![false; r.size()];
                let mut lens = Vec::new();
                for s in 0..r.size() {
                    let (mut x, mut len) = (s, 0);
                    while !seen[x] {
                        seen[x] = true;
                        x = r.op(i, x);
                        len += 1;
                    }
                    if len > 0 {
                        lens.push(len);
                    }
                }
                lens.sort_unstable();
                lens
            };
            let first = cycles(0);
            proptest::prop_assert!((1..r.size()).all(|i| cycles(i) == first));
            proptest::prop_assert!(rack_isomorphic(&r, &r));
        }
    }
}

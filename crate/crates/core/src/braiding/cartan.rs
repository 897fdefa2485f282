//! Finiteness predictions for diagonal braidings of Cartan type.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{diagonal_parameters, BraidedSpace, BraidingError};
use crate::scalars::Field;

const SEARCH_WINDOW: i64 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CartanType {
    FiniteType { label: String },
    NotCartan,
    NotFiniteType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PredictsFiniteDim,
    #[serde(rename = "predicts-finite-GK")]
    PredictsFiniteGk,
    NoPrediction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanDiagnosis {
    /// `a_ij` with `q_ij q_ji = q_ii^{a_ij}`; diagonal entries are 2.
    pub exponents: Vec<Vec<Option<i64>>>,
    pub cartan_type: CartanType,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Searches exponents `a_ij ∈ [−7, 0]` (and `−ord(q_ii) < a_ij` when `q_ii`
/// is a root of unity), then classifies the resulting matrix.
pub fn cartan_diagnose(b: &BraidedSpace) -> Result<CartanDiagnosis, BraidingError> {
    let q = diagonal_parameters(b).ok_or(BraidingError::NotDiagonal)?;
    let f = b.field();
    let n = q.len();
    let mut notes = vec!["heuristic: the finiteness criteria hold only under suitable conditions".to_string()];
    let orders: Vec<Option<u32>> = (0..n).map(|i| f.root_order(&q[i][i])).collect();
    let mut exps = vec![vec![None; n]; n];
    let mut windowed = false;
    for i in 0..n {
        exps[i][i] = Some(2);
        if q[i][i] == f.one() {
            notes.push(format!("q_{i}{i} = 1, no exponent is defined"));
            continue;
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let target = f.mul(&q[i][j], &q[j][i]);
            let lower = match orders[i] {
                Some(ord) => {
                    windowed = true;
                    (-(ord as i64) + 1).max(-SEARCH_WINDOW)
                }
                None => -SEARCH_WINDOW,
            };
            exps[i][j] = (lower..=0).rev().find(|&a| f.pow(&q[i][i], a).as_ref() == Some(&target));
        }
    }
    if windowed {
        notes.push("root-of-unity window applied as -ord(q_ii) < a_ij <= 0".to_string());
    }
    let complete = exps.iter().flatten().all(Option::is_some);
    let symmetric_zeros =
        complete && (0..n).all(|i| (0..n).all(|j| (exps[i][j] == Some(0)) == (exps[j][i] == Some(0))));
    if !symmetric_zeros {
        return Ok(CartanDiagnosis { exponents: exps, cartan_type: CartanType::NotCartan, verdict: Verdict::NoPrediction, notes });
    }
    let a: Vec<Vec<i64>> = exps.iter().map(|r| r.iter().map(|x| x.unwrap()).collect()).collect();
    if !all_principal_minors_positive(&a) {
        return Ok(CartanDiagnosis {
            exponents: exps,
            cartan_type: CartanType::NotFiniteType,
            verdict: Verdict::NoPrediction,
            notes,
        });
    }
    let label = finite_type_label(&a);
    let positive = (0..n).all(|i| f.is_positive_rational(&q[i][i]) && orders[i].is_none());
    let roots = orders.iter().all(Option::is_some);
    let verdict = if positive {
        Verdict::PredictsFiniteGk
    } else if roots {
        Verdict::PredictsFiniteDim
    } else {
        Verdict::NoPrediction
    };
    Ok(CartanDiagnosis { exponents: exps, cartan_type: CartanType::FiniteType { label }, verdict, notes })
}

fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            if !a[r][c].is_zero() {
                let factor = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &factor * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    det
}

fn all_principal_minors_positive(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<BigRational>> =
            idx.iter().map(|&i| idx.iter().map(|&j| BigRational::from_integer(a[i][j].into())).collect()).collect();
        determinant(&sub).is_positive()
    })
}

/// Dynkin label of a finite-type matrix, components joined by `x`.
/// Row `i` carries `−2` (or `−3`) when node `i` is the short one.
fn finite_type_label(a: &[Vec<i64>]) -> String {
    let n = a.len();
    let mut comp = vec![usize::MAX; n];
    let mut labels = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut nodes = vec![start];
        comp[start] = start;
        let mut k = 0;
        while k < nodes.len() {
            let x = nodes[k];
            for y in 0..n {
                if y != x && a[x][y] != 0 && comp[y] == usize::MAX {
                    comp[y] = start;
                    nodes.push(y);
                }
            }
            k += 1;
        }
        labels.push(component_label(a, &nodes));
    }
    labels.join("x")
}

fn component_label(a: &[Vec<i64>], nodes: &[usize]) -> String {
    let k = nodes.len();
    let neighbours = |x: usize| nodes.iter().copied().filter(move |&y| y != x && a[x][y] != 0);
    let degree = |x: usize| neighbours(x).count();
    let mut multiple = None;
    for &x in nodes {
        for y in neighbours(x) {
            if a[x][y] * a[y][x] > 1 {
                multiple = Some((x, y));
            }
        }
    }
    if let Some((x, y)) = multiple {
        let product = a[x][y] * a[y][x];
        if product == 3 {
            return "G2".into();
        }
        if k == 2 {
            return "B2".into();
        }
        if k == 4 && degree(x) == 2 && degree(y) == 2 {
            return "F4".into();
        }
        let (leaf, _) = if degree(x) == 1 { (x, y) } else { (y, x) };
        let other = if leaf == x { y } else { x };
        return if a[leaf][other] == -2 { format!("B{k}") } else { format!("C{k}") };
    }
    match nodes.iter().copied().find(|&x| degree(x) == 3) {
        None => format!("A{k}"),
        Some(branch) => {
            let mut arms: Vec<usize> = neighbours(branch)
                .map(|first| {
                    let (mut prev, mut cur, mut len) = (branch, first, 1);
                    loop {
                        let next: Vec<usize> = neighbours(cur).filter(|&z| z != prev).collect();
                        if next.len() != 1 {
                            break len;
                        }
                        prev = cur;
                        cur = next[0];
                        len += 1;
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => format!("D{k}"),
                [1, 2, 2] => "E6".into(),
                [1, 2, 3] => "E7".into(),
                [1, 2, 4] => "E8".into(),
                _ => format!("branched{k}"),
            }
        }
    }
}

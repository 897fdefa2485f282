//! Exact arithmetic in ℚ(ζ_N), elements stored as coefficient vectors in the
//! power basis 1, ζ, …, ζ^{φ(N)−1}.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, ScalarError};

/// An element of ℚ(ζ_N); the order `N` lives in the owning [`CyclotomicField`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyc(Vec<BigRational>);

impl Cyc {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        Cyc(coeffs)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    // monic Φ_N, low degree first
    modulus: Arc<Vec<BigInt>>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicField(N={})", self.order)
    }
}

fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Integer coefficients of the N-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = poly_divexact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

// remainder and quotient of a / b over ℚ
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                let t = &c * bi;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (o, y) in out.iter_mut().zip(b) {
        *o -= y;
    }
    trim(&mut out);
    out
}

impl CyclotomicField {
    pub fn new(order: u32) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::InvalidOrder(order));
        }
        Ok(CyclotomicField { order, modulus: Arc::new(cyclotomic_polynomial(order)) })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(N), the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn rational(&self, num: i64, den: i64) -> Cyc {
        self.from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(&self, r: BigRational) -> Cyc {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = r;
        Cyc(v)
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self, a: &Cyc) -> Option<BigRational> {
        a.0[1..].iter().all(Zero::is_zero).then(|| a.0[0].clone())
    }

    fn reduce(&self, mut p: Vec<BigRational>) -> Cyc {
        let d = self.degree();
        for k in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[k]);
            if !c.is_zero() {
                for i in 0..d {
                    let t = &c * BigRational::from_integer(self.modulus[i].clone());
                    p[k - d + i] -= t;
                }
            }
        }
        p.resize(d, BigRational::zero());
        Cyc(p)
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_power(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut p = vec![BigRational::zero(); e.max(self.degree()) + 1];
        p[e] = BigRational::one();
        self.reduce(p)
    }

    /// ζ_M^k embedded in this field; requires M | N.
    pub fn root_of_unity(&self, k: i64, m: u32) -> Result<Cyc, ScalarError> {
        if m == 0 || self.order % m != 0 {
            return Err(ScalarError::OrderMismatch { from: m, target: self.order });
        }
        Ok(self.zeta_power(k * (self.order / m) as i64))
    }

    /// Re-expresses an element of ℚ(ζ_M) in this field (M | N).
    pub fn embed(&self, source: &CyclotomicField, a: &Cyc) -> Result<Cyc, ScalarError> {
        let m = source.order();
        if self.order % m != 0 {
            return Err(ScalarError::OrderMismatch { from: m, target: self.order });
        }
        let step = (self.order / m) as i64;
        let mut acc = self.zero();
        for (i, c) in a.0.iter().enumerate() {
            if !c.is_zero() {
                let term = self.mul(&self.zeta_power(step * i as i64), &self.from_rational(c.clone()));
                acc = self.add(&acc, &term);
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &Cyc, e: i64) -> Option<Cyc> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }

    /// Multiplicative order if `a` is a root of unity, `None` otherwise.
    /// Roots of unity in ℚ(ζ_N) have order dividing lcm(2, N).
    pub fn root_order(&self, a: &Cyc) -> Option<u32> {
        let bound = self.order.lcm(&2);
        let one = self.one();
        let mut acc = a.clone();
        for k in 1..=bound {
            if acc == one {
                return (bound % k == 0).then_some(k);
            }
            acc = self.mul(&acc, a);
        }
        None
    }

    /// True iff `a` is a positive rational number.
    pub fn is_positive_rational(&self, a: &Cyc) -> bool {
        self.as_rational(a).is_some_and(|r| r.is_positive())
    }

    /// Human-readable form, e.g. `-1`, `3/5`, `z^2`, `1 + 2*z`.
    pub fn format(&self, a: &Cyc) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let coeff = if i > 0 && c.is_one() {
                String::new()
            } else if i > 0 && (-c).is_one() {
                "-".to_string()
            } else if i > 0 {
                format!("{c}*")
            } else {
                c.to_string()
            };
            parts.push(format!("{coeff}{mono}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

impl Field for CyclotomicField {
    type Elem = Cyc;

    fn zero(&self) -> Cyc {
        Cyc(vec![BigRational::zero(); self.degree()])
    }

    fn one(&self) -> Cyc {
        self.from_rational(BigRational::one())
    }

    fn is_zero(&self, a: &Cyc) -> bool {
        a.0.iter().all(Zero::is_zero)
    }

    fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if self.degree() == 1 {
            return Cyc(vec![&a.0[0] * &b.0[0]]);
        }
        self.reduce(poly_mul(&a.0, &b.0))
    }

    fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }

    fn inv(&self, a: &Cyc) -> Option<Cyc> {
        if self.is_zero(a) {
            return None;
        }
        if self.degree() == 1 {
            return Some(Cyc(vec![a.0[0].recip()]));
        }
        // extended Euclid: s*a ≡ g (mod Φ_N), g a nonzero constant
        let phi: Vec<BigRational> =
            self.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut r0 = phi;
        let mut r1 = a.0.clone();
        trim(&mut r1);
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let g = r1.first()?.clone();
        let ginv = g.recip();
        let scaled: Vec<BigRational> = s1.iter().map(|c| c * &ginv).collect();
        Some(self.reduce(scaled))
    }

    fn from_i64(&self, v: i64) -> Cyc {
        self.from_rational(BigRational::from_integer(v.into()))
    }

    fn from_cyclotomic(&self, source: &CyclotomicField, c: &Cyc) -> Result<Cyc, ScalarError> {
        if source.order == self.order {
            Ok(c.clone())
        } else {
            self.embed(source, c)
        }
    }

    fn describe(&self) -> String {
        if self.order <= 2 {
            "Q".to_string()
        } else {
            format!("Q(zeta_{})", self.order)
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }
}

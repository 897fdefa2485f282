//! Exact and modular scalar arithmetic.
//!
//! Braidings are always stored over an exact cyclotomic field ℚ(ζ_N). Large
//! rank computations run over prime fields GF(p) with `p ≡ 1 (mod N)`, into
//! which cyclotomic scalars are pushed by the ring map ζ_N ↦ zeta.

mod cyclotomic;
mod prime;
pub mod primes;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, Cyc, CyclotomicField};
pub use prime::PrimeField;
pub use primes::find_primes;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("no element of order {order} in GF({p}): {order} does not divide p - 1")]
    NoSuchRoot { p: u64, order: u32 },
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("prime {0} is too large for the word-size field kernel (limit 2^31)")]
    PrimeTooLarge(u64),
    #[error("a denominator vanishes modulo {0}")]
    BadPrime(u64),
    #[error("{zeta} does not have order exactly {order} modulo {p}")]
    WrongRootOrder { p: u64, zeta: u64, order: u32 },
    #[error("root-of-unity order must be positive, got {0}")]
    InvalidOrder(u32),
    #[error("cannot map order-{from} scalars into a field with root order {target}")]
    OrderMismatch { from: u32, target: u32 },
    #[error("prime search for order {order} found {found} of {wanted} primes before the cap")]
    SearchExhausted { order: u32, found: usize, wanted: usize },
}

/// A field with runtime parameters. Elements carry no context; every
/// operation goes through the field value.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Image of an exact scalar under ℚ(ζ_M) → this field.
    fn from_cyclotomic(&self, source: &CyclotomicField, c: &Cyc) -> Result<Self::Elem, ScalarError>;

    /// `dst[k] += f * src[k]`. The hot loop of every elimination.
    fn axpy(&self, dst: &mut [Self::Elem], f: &Self::Elem, src: &[Self::Elem]) {
        if self.is_zero(f) {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(f, s));
            }
        }
    }

    fn describe(&self) -> String;

    /// 0 for the exact fields.
    fn characteristic(&self) -> u64;
}

/// How to build a [`FieldContext`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDescriptor {
    Rational,
    Cyclotomic { order: u32 },
    Prime { p: u32, order: u32, zeta: Option<u32> },
}

/// The scalar universe a computation lives in.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldContext {
    Cyclotomic(CyclotomicField),
    Prime(PrimeField),
}

impl FieldContext {
    /// The root-of-unity order N (1 for ℚ).
    pub fn order(&self) -> u32 {
        match self {
            FieldContext::Cyclotomic(k) => k.order(),
            FieldContext::Prime(f) => f.order(),
        }
    }
}

pub fn make_field(spec: &FieldDescriptor) -> Result<FieldContext, ScalarError> {
    match *spec {
        FieldDescriptor::Rational => Ok(FieldContext::Cyclotomic(CyclotomicField::new(1)?)),
        FieldDescriptor::Cyclotomic { order } => Ok(FieldContext::Cyclotomic(CyclotomicField::new(order)?)),
        FieldDescriptor::Prime { p, order, zeta } => Ok(FieldContext::Prime(PrimeField::new(p, order, zeta)?)),
    }
}

/// Ring homomorphism ℚ(ζ_N) → GF(p), ζ_N ↦ zeta of the target.
pub fn reduce_scalar(source: &CyclotomicField, s: &Cyc, target: &PrimeField) -> Result<u32, ScalarError> {
    target.from_cyclotomic(source, s)
}

/// Least common multiple, used to infer the cyclotomic order of a parameter set.
pub fn lcm(a: u32, b: u32) -> u32 {
    num_integer::Integer::lcm(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn make_field_examples() {
        let FieldContext::Cyclotomic(k4) = make_field(&FieldDescriptor::Cyclotomic { order: 4 }).unwrap() else {
            panic!()
        };
        let z = k4.zeta_power(1);
        assert_eq!(k4.mul(&z, &z), k4.from_i64(-1));

        let FieldContext::Cyclotomic(q) = make_field(&FieldDescriptor::Cyclotomic { order: 1 }).unwrap() else {
            panic!()
        };
        assert_eq!(q.zeta_power(1), q.one());

        assert_eq!(
            make_field(&FieldDescriptor::Prime { p: 13, order: 5, zeta: None }),
            Err(ScalarError::NoSuchRoot { p: 13, order: 5 })
        );
        assert_eq!(
            make_field(&FieldDescriptor::Prime { p: 21, order: 1, zeta: None }),
            Err(ScalarError::InvalidPrime(21))
        );
    }

    fn arb_cyc12() -> impl Strategy<Value = Cyc> {
        proptest::collection::vec((-50i64..50, 1i64..9), 4).prop_map(|cs| {
            Cyc::from_coeffs(cs.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect())
        })
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(a in arb_cyc12(), b in arb_cyc12()) {
            let k = CyclotomicField::new(12).unwrap();
            // 2^30 < p, p ≡ 1 mod 12, and no small denominators vanish
            for f in find_primes(12, 2, 30).unwrap() {
                let ra = reduce_scalar(&k, &a, &f).unwrap();
                let rb = reduce_scalar(&k, &b, &f).unwrap();
                prop_assert_eq!(reduce_scalar(&k, &k.add(&a, &b), &f).unwrap(), f.add(&ra, &rb));
                prop_assert_eq!(reduce_scalar(&k, &k.mul(&a, &b), &f).unwrap(), f.mul(&ra, &rb));
            }
        }
    }

    #[test]
    fn designated_roots_have_exact_order() {
        for n in [1u32, 2, 3, 4, 5, 6, 7, 12, 30] {
            for f in find_primes(n, 3, 30).unwrap() {
                assert!(primes::has_exact_order(f.zeta() as u64, n as u64, f.modulus() as u64));
            }
        }
    }
}

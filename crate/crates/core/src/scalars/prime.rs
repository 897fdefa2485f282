use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::primes::{has_exact_order, is_prime, pow_mod, primitive_root_of_unity, PRIME_LIMIT};
use super::{Cyc, CyclotomicField, Field, ScalarError};

/// GF(p) for an odd or even prime `p < 2^31`, with a designated element
/// `zeta` of multiplicative order exactly `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
    zeta: u32,
    order: u32,
    // -p^{-1} mod 2^32, only meaningful for odd p
    neg_pinv: u32,
}

impl PrimeField {
    /// Builds GF(p) with a root of unity of the given order. When `zeta` is
    /// `None`, the smallest-base primitive root is chosen.
    pub fn new(p: u32, order: u32, zeta: Option<u32>) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::InvalidOrder(order));
        }
        if p as u64 >= PRIME_LIMIT {
            return Err(ScalarError::PrimeTooLarge(p as u64));
        }
        if !is_prime(p as u64) {
            return Err(ScalarError::InvalidPrime(p as u64));
        }
        if (p - 1) % order != 0 {
            return Err(ScalarError::NoSuchRoot { p: p as u64, order });
        }
        let zeta = match zeta {
            Some(z) => {
                let z = z % p;
                if !has_exact_order(z as u64, order as u64, p as u64) {
                    return Err(ScalarError::WrongRootOrder { p: p as u64, zeta: z as u64, order });
                }
                z
            }
            None => primitive_root_of_unity(p as u64, order as u64)
                .ok_or(ScalarError::NoSuchRoot { p: p as u64, order })? as u32,
        };
        let mut inv: u32 = 1;
        if p & 1 == 1 {
            inv = p;
            for _ in 0..5 {
                inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
            }
        }
        Ok(PrimeField { p, zeta, order, neg_pinv: inv.wrapping_neg() })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(a as u64, e, self.p as u64) as u32
    }

    fn bigint_residue(&self, v: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let r = v.mod_floor(&p);
        debug_assert!(!r.is_negative());
        r.to_u32().expect("residue below p")
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.p as u64) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.pow(*a, self.p as u64 - 2))
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn from_cyclotomic(&self, source: &CyclotomicField, c: &Cyc) -> Result<u32, ScalarError> {
        let m = source.order();
        if self.order % m != 0 {
            return Err(ScalarError::OrderMismatch { from: m, target: self.order });
        }
        let step = self.pow(self.zeta, (self.order / m) as u64);
        let mut acc = 0u32;
        let mut power = self.one();
        for coeff in c.coeffs() {
            if !num_traits::Zero::is_zero(coeff) {
                let den = self.bigint_residue(coeff.denom());
                if den == 0 {
                    return Err(ScalarError::BadPrime(self.p as u64));
                }
                let num = self.bigint_residue(coeff.numer());
                let term = self.mul(&num, &self.inv(&den).unwrap());
                acc = self.add(&acc, &self.mul(&term, &power));
            }
            power = self.mul(&power, &step);
        }
        Ok(acc)
    }

    fn axpy(&self, dst: &mut [u32], f: &u32, src: &[u32]) {
        debug_assert_eq!(dst.len(), src.len());
        if *f == 0 {
            return;
        }
        let p = self.p;
        if p & 1 == 0 {
            for (d, s) in dst.iter_mut().zip(src) {
                *d = self.add(d, &self.mul(f, s));
            }
            return;
        }
        // Montgomery form of f, so that redc(fm * s) = f * s mod p.
        let fm = (((*f as u64) << 32) % p as u64) as u64;
        let npi = self.neg_pinv;
        let p64 = p as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            let t = fm * s as u64;
            let m = (t as u32).wrapping_mul(npi) as u64;
            let mut u = ((t + m * p64) >> 32) as u32;
            if u >= p {
                u -= p;
            }
            let mut r = *d + u;
            if r >= p {
                r -= p;
            }
            *d = r;
        }
    }

    fn describe(&self) -> String {
        format!("GF({}) with zeta={} of order {}", self.p, self.zeta, self.order)
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldContext;

    #[test]
    fn thirteen_with_cube_root() {
        let f = PrimeField::new(13, 3, None).unwrap();
        assert_eq!(f.zeta(), 3);
        assert_eq!(f.pow(3, 3), 1);
    }

    #[test]
    fn rejects_composites_and_missing_roots() {
        assert_eq!(PrimeField::new(15, 1, None), Err(ScalarError::InvalidPrime(15)));
        assert!(matches!(PrimeField::new(13, 5, None), Err(ScalarError::NoSuchRoot { .. })));
        assert!(matches!(PrimeField::new(17, 4, Some(16)), Err(ScalarError::WrongRootOrder { .. })));
    }

    #[test]
    fn axpy_matches_plain_arithmetic() {
        for p in [2u32, 3, 13, 1_073_741_827, 2_147_483_629] {
            let f = PrimeField::new(p, 1, None).unwrap();
            let src: Vec<u32> = (0..97u64).map(|k| ((k * 7_919 + 13) % p as u64) as u32).collect();
            let mut dst: Vec<u32> = (0..97u64).map(|k| ((k * 104_729 + 5) % p as u64) as u32).collect();
            let mut expect = dst.clone();
            let factor = (p - 1).min(123_456_789 % p);
            for (e, s) in expect.iter_mut().zip(&src) {
                *e = ((*e as u64 + factor as u64 * *s as u64) % p as u64) as u32;
            }
            f.axpy(&mut dst, &factor, &src);
            assert_eq!(dst, expect, "p = {p}");
        }
    }

    #[test]
    fn reduce_fourth_root_and_half() {
        let cyc4 = CyclotomicField::new(4).unwrap();
        let f17 = PrimeField::new(17, 4, Some(4)).unwrap();
        let z = cyc4.zeta_power(1);
        let img = f17.from_cyclotomic(&cyc4, &z).unwrap();
        assert_eq!(img, 4);
        assert_eq!(f17.mul(&img, &img), 16);

        let q = CyclotomicField::new(1).unwrap();
        let f13 = PrimeField::new(13, 1, None).unwrap();
        assert_eq!(f13.from_cyclotomic(&q, &q.rational(1, 2)).unwrap(), 7);
        assert_eq!(f13.from_cyclotomic(&q, &q.one()).unwrap(), 1);
        assert_eq!(f13.from_cyclotomic(&q, &q.rational(1, 13)), Err(ScalarError::BadPrime(13)));
    }

    #[test]
    fn make_field_prime_descriptor() {
        let ctx = crate::scalars::make_field(&crate::scalars::FieldDescriptor::Prime {
            p: 13,
            order: 3,
            zeta: None,
        })
        .unwrap();
        match ctx {
            FieldContext::Prime(f) => assert_eq!(f.zeta(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}

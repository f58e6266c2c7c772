//! Prime fields `F_p` and exact modular arithmetic.
//!
//! Every coefficient in this crate is a canonical representative in `[0, p)`
//! stored as a `u32`; the modulus is carried by a [`PrimeField`] descriptor
//! rather than by the values themselves.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("modulus {0} is not prime")]
    ModulusNotPrime(u32),
}

/// The prime field `F_p` with `2 <= p < 2^31`, verified prime at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        let p = p as u32;
        if !is_prime(p) {
            return Err(FieldError::ModulusNotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: u64) -> u32 {
        (x % u64::from(self.p)) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b; // a, b < p < 2^31, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element, via Fermat.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    // Vector helpers used throughout the dense kernels.

    pub fn vec_is_zero(self, v: &[u32]) -> bool {
        v.iter().all(|&c| c == 0)
    }

    /// `dst += c * src`, componentwise.
    pub fn vec_add_scaled(self, dst: &mut [u32], src: &[u32], c: u32) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(dst.len(), src.len());
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, self.mul(c, s));
        }
    }

    pub fn vec_scale(self, v: &mut [u32], c: u32) {
        for e in v.iter_mut() {
            *e = self.mul(*e, c);
        }
    }

    pub fn vec_sub_assign(self, dst: &mut [u32], src: &[u32]) {
        debug_assert_eq!(dst.len(), src.len());
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.sub(*d, s);
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(91).is_err()); // 7 * 13
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2147483647).is_ok()); // Mersenne prime < 2^31
    }

    #[test]
    fn arithmetic_mod_5() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.neg(2), 3);
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = PrimeField::new(7).unwrap();
        let mut acc = 1;
        for e in 0..20u32 {
            assert_eq!(f.pow(3, e), acc);
            acc = f.mul(acc, 3);
        }
    }
}

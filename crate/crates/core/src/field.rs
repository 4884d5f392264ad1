//! The pure cubic field datum and the prime context.

use num_bigint::BigInt;
use num_integer::Roots;

use crate::error::{Error, Result};

/// A pure cubic field `Q(θ)`, `θ^3 = m`, with `m = h k^2` cube-free.
///
/// The ring of integers has the basis `{1, X, Y}` with `X = θ` and
/// `Y = θ^2 / k`. Only fields with `m^2 != 1 (mod 9)` can be constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureCubicField {
    m: i64,
    h: i64,
    k: i64,
    h_big: BigInt,
    k_big: BigInt,
    hk_big: BigInt,
}

impl PureCubicField {
    pub fn m(&self) -> i64 {
        self.m
    }

    /// Square-free part, carrying the sign of `m`.
    pub fn h(&self) -> i64 {
        self.h
    }

    /// Positive square-free integer with `k^2 | m`.
    pub fn k(&self) -> i64 {
        self.k
    }

    pub(crate) fn h_big(&self) -> &BigInt {
        &self.h_big
    }

    pub(crate) fn k_big(&self) -> &BigInt {
        &self.k_big
    }

    /// `X * Y = θ^3 / k = h k`.
    pub(crate) fn hk_big(&self) -> &BigInt {
        &self.hk_big
    }
}

/// Splits a cube-free `m` as `h k^2` with `h`, `k` square-free and coprime.
///
/// The sign of `m` goes into `h`; `k` is always positive.
pub fn factor_cubefree(m: i64) -> Result<(i64, i64)> {
    if (-1..=1).contains(&m) {
        return Err(Error::DegenerateInput { m });
    }
    let mut rest = m.unsigned_abs();
    let (mut h, mut k) = (1u64, 1u64);
    let mut q = 2u64;
    // Once q^3 > rest, every prime factor left is >= q, so rest has at most
    // two of them (counted with multiplicity).
    while q.checked_pow(3).is_some_and(|c| c <= rest) {
        let mut e = 0;
        while rest.is_multiple_of(q) {
            rest /= q;
            e += 1;
        }
        match e {
            0 => {}
            1 => h *= q,
            2 => k *= q,
            _ => return Err(Error::NotCubeFree { m }),
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let s = rest.sqrt();
        if s * s == rest {
            k *= s;
        } else {
            h *= rest;
        }
    }
    let h = h as i64;
    Ok((if m < 0 { -h } else { h }, k as i64))
}

/// Validates `m` and builds the field datum.
pub fn make_field(m: i64) -> Result<PureCubicField> {
    let (h, k) = factor_cubefree(m)?;
    let r = m.rem_euclid(9);
    if r * r % 9 == 1 {
        return Err(Error::UnsupportedBasisCase { m });
    }
    Ok(PureCubicField {
        m,
        h,
        k,
        h_big: BigInt::from(h),
        k_big: BigInt::from(k),
        hk_big: BigInt::from(h) * BigInt::from(k),
    })
}

/// A field together with a prime `p >= 5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeContext {
    field: PureCubicField,
    p: u64,
    p_big: BigInt,
    nu_h: u32,
    nu_k: u32,
}

impl PrimeContext {
    pub fn field(&self) -> &PureCubicField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.p_big
    }

    /// `p^e`.
    pub fn pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.p_big.clone(), e as usize)
    }

    /// `ν_p(h)`, either 0 or 1.
    pub fn nu_h(&self) -> u32 {
        self.nu_h
    }

    /// `ν_p(k)`, either 0 or 1.
    pub fn nu_k(&self) -> u32 {
        self.nu_k
    }

    pub fn divides_m(&self) -> bool {
        self.nu_h + self.nu_k > 0
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|d2| d2 <= n) {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if p == 2 || p == 3 || !is_prime(p) {
        return Err(Error::BadPrime { p });
    }
    Ok(())
}

pub fn make_prime_context(field: &PureCubicField, p: u64) -> Result<PrimeContext> {
    check_prime(p)?;
    let divides = |x: i64| u32::from(x.unsigned_abs().is_multiple_of(p));
    Ok(PrimeContext {
        nu_h: divides(field.h),
        nu_k: divides(field.k),
        field: field.clone(),
        p,
        p_big: BigInt::from(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_squarefree(n: u64) -> bool {
        (2..=n).take_while(|q| q * q <= n).all(|q| !n.is_multiple_of(q * q))
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_cubefree(12), Ok((3, 2)));
        assert_eq!(factor_cubefree(2), Ok((2, 1)));
        assert_eq!(factor_cubefree(-20), Ok((-5, 2)));
        assert_eq!(factor_cubefree(8), Err(Error::NotCubeFree { m: 8 }));
        assert_eq!(factor_cubefree(1), Err(Error::DegenerateInput { m: 1 }));
        assert_eq!(factor_cubefree(0), Err(Error::DegenerateInput { m: 0 }));
        assert_eq!(factor_cubefree(-1), Err(Error::DegenerateInput { m: -1 }));
    }

    #[test]
    fn factor_large_cofactors() {
        // cofactor is a product of two large primes, or a large prime squared
        assert_eq!(
            factor_cubefree(1_000_003 * 999_983),
            Ok((1_000_003 * 999_983, 1))
        );
        assert_eq!(
            factor_cubefree(5 * 1_000_003 * 1_000_003),
            Ok((5, 1_000_003))
        );
        assert_eq!(
            factor_cubefree(1_000_003 * 1_000_003 * 1_000_003),
            Err(Error::NotCubeFree {
                m: 1_000_003 * 1_000_003 * 1_000_003
            })
        );
        assert!(factor_cubefree(i64::MIN).is_err());
    }

    #[test]
    fn factor_exhaustive_small() {
        for m in -3000i64..=3000 {
            let a = m.unsigned_abs();
            let cube_free = a >= 2
                && (2..=a)
                    .take_while(|q| q * q * q <= a)
                    .all(|q| a % (q * q * q) != 0);
            match factor_cubefree(m) {
                Ok((h, k)) => {
                    assert!(cube_free, "{m}");
                    assert_eq!(h * k * k, m);
                    assert!(k > 0);
                    assert!(is_squarefree(h.unsigned_abs()) && is_squarefree(k as u64));
                    assert_eq!(gcd(h.unsigned_abs(), k as u64), 1);
                }
                Err(_) => assert!(!cube_free, "{m}"),
            }
        }
    }

    #[test]
    fn make_field_examples() {
        let f = make_field(2).unwrap();
        assert_eq!((f.h(), f.k()), (2, 1));
        assert_eq!(make_field(17), Err(Error::UnsupportedBasisCase { m: 17 }));
        let f = make_field(6).unwrap();
        assert_eq!((f.h(), f.k()), (6, 1));
        assert_eq!(make_field(-10), Err(Error::UnsupportedBasisCase { m: -10 }));
        assert!(make_field(-2).is_ok());
        assert_eq!(make_field(16), Err(Error::NotCubeFree { m: 16 }));
    }

    #[test]
    fn make_field_iff() {
        for m in -500i64..=500 {
            let ok = factor_cubefree(m).is_ok() && (m * m) % 9 != 1;
            assert_eq!(make_field(m).is_ok(), ok, "{m}");
        }
    }

    #[test]
    fn prime_context() {
        let f = make_field(2).unwrap();
        assert!(make_prime_context(&f, 5).is_ok());
        assert_eq!(make_prime_context(&f, 3), Err(Error::BadPrime { p: 3 }));
        assert_eq!(make_prime_context(&f, 2), Err(Error::BadPrime { p: 2 }));
        assert_eq!(make_prime_context(&f, 15), Err(Error::BadPrime { p: 15 }));
        assert_eq!(make_prime_context(&f, 1), Err(Error::BadPrime { p: 1 }));
        assert_eq!(make_prime_context(&f, 0), Err(Error::BadPrime { p: 0 }));

        let ctx = make_prime_context(&make_field(12).unwrap(), 5).unwrap();
        assert!(!ctx.divides_m());
        let ctx = make_prime_context(&make_field(50).unwrap(), 5).unwrap();
        assert_eq!((ctx.nu_h(), ctx.nu_k()), (0, 1));
        let ctx = make_prime_context(&make_field(-5).unwrap(), 5).unwrap();
        assert_eq!((ctx.nu_h(), ctx.nu_k()), (1, 0));
    }

    #[test]
    fn primality() {
        let small: alloc::vec::Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_003 * 999_983));
    }
}

//! p-adic valuations, cube roots modulo p and their Hensel lifts.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::check_prime;

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self >= Valuation::Finite(0)
    }

    /// Compares against an ordinary integer bound.
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

/// `ν_p(x)` for an integer `x`.
pub fn nu_int(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

/// `ν_p(num / den)`.
///
/// # Panics
///
/// If `den` is zero.
pub fn nu(num: &BigInt, den: &BigInt, p: u64) -> Valuation {
    assert!(
        !den.is_zero(),
        "valuation of a fraction with zero denominator"
    );
    match (nu_int(num, p), nu_int(den, p)) {
        (Valuation::Infinite, _) => Valuation::Infinite,
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        (Valuation::Finite(_), Valuation::Infinite) => unreachable!(),
    }
}

pub fn nu_ratio(x: &BigRational, p: u64) -> Valuation {
    nu(x.numer(), x.denom(), p)
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = u128::from(modulus);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn residue(m: i64, p: u64) -> u64 {
    i128::from(m).rem_euclid(i128::from(p)) as u64
}

/// Number of solutions of `x^3 = m` in `Z/pZ`, via the multiplicative
/// order criterion.
pub fn count_cube_roots(m: i64, p: u64) -> Result<u8> {
    check_prime(p)?;
    let r = residue(m, p);
    if r == 0 || p % 3 == 2 {
        return Ok(1);
    }
    Ok(if pow_mod(r, (p - 1) / 3, p) == 1 {
        3
    } else {
        0
    })
}

/// All residues `α mod p^e` with `α^3 = c (mod p^e)`, in increasing order.
///
/// Roots modulo `p` are lifted one p-adic digit at a time; each lift is
/// unique because `3α^2` is a unit.
pub fn lift_cube_roots(c: &BigInt, p: u64, e: u32) -> Result<Vec<BigInt>> {
    check_prime(p)?;
    assert!(e >= 1, "lift_cube_roots needs e >= 1");
    let pb = BigInt::from(p);
    let c_mod_p = c.mod_floor(&pb);
    if c_mod_p.is_zero() {
        return Err(Error::NotCoprime { c: c.clone(), p });
    }
    let c_small: u64 = c_mod_p.try_into().expect("residue below p fits in u64");
    let mut roots: Vec<BigInt> = (1..p)
        .filter(|&x| pow_mod(x, 3, p) == c_small)
        .map(BigInt::from)
        .collect();

    let mut modulus = pb.clone();
    for _ in 1..e {
        for root in roots.iter_mut() {
            // root^3 - c = modulus * q; pick d with q + 3 root^2 d = 0 (mod p)
            let q = (root.pow(3) - c).div_floor(&modulus).mod_floor(&pb);
            let q: u64 = q.try_into().expect("residue below p fits in u64");
            let r: u64 = root
                .mod_floor(&pb)
                .try_into()
                .expect("residue below p fits in u64");
            let deriv = pow_mod(r, 2, p) * 3 % p;
            let inv = pow_mod(deriv, p - 2, p);
            let d = (p - q) % p;
            let d = (u128::from(d) * u128::from(inv) % u128::from(p)) as u64;
            *root += &modulus * BigInt::from(d);
        }
        modulus *= &pb;
    }
    debug_assert!(roots
        .iter()
        .all(|r| (r.pow(3) - c).mod_floor(&modulus).is_zero()));
    roots.sort();
    Ok(roots)
}

/// `x^{-1} mod modulus`, for `x` coprime to the modulus.
pub(crate) fn inverse_mod(x: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let x = x.mod_floor(modulus);
    if modulus.is_one() {
        return Some(BigInt::zero());
    }
    x.modinv(modulus)
}

//! Arithmetic in the ring of integers with basis `{1, X, Y}`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{PrimeContext, PureCubicField};
use crate::order::OrderTriple;

/// An element `c0 + c1 X + c2 Y` of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub c0: BigInt,
    pub c1: BigInt,
    pub c2: BigInt,
}

impl RingElement {
    pub fn new(c0: impl Into<BigInt>, c1: impl Into<BigInt>, c2: impl Into<BigInt>) -> Self {
        RingElement {
            c0: c0.into(),
            c1: c1.into(),
            c2: c2.into(),
        }
    }

    pub fn one() -> Self {
        RingElement::new(1, 0, 0)
    }

    pub fn x() -> Self {
        RingElement::new(0, 1, 0)
    }

    pub fn y() -> Self {
        RingElement::new(0, 0, 1)
    }

    pub fn coords(&self) -> [BigInt; 3] {
        [self.c0.clone(), self.c1.clone(), self.c2.clone()]
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        RingElement {
            c0: &self.c0 + &other.c0,
            c1: &self.c1 + &other.c1,
            c2: &self.c2 + &other.c2,
        }
    }

    pub fn scale(&self, s: &BigInt) -> RingElement {
        RingElement {
            c0: &self.c0 * s,
            c1: &self.c1 * s,
            c2: &self.c2 * s,
        }
    }

    /// Whether the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c0, self.c1, self.c2)
    }
}

/// Product in the ring of integers.
///
/// Multiplication table: `X^2 = kY`, `XY = hk`, `Y^2 = hX`.
pub fn mul(a: &RingElement, b: &RingElement, field: &PureCubicField) -> RingElement {
    let (h, k, hk) = (field.h_big(), field.k_big(), field.hk_big());
    RingElement {
        c0: &a.c0 * &b.c0 + hk * (&a.c1 * &b.c2 + &a.c2 * &b.c1),
        c1: &a.c0 * &b.c1 + &a.c1 * &b.c0 + h * (&a.c2 * &b.c2),
        c2: &a.c0 * &b.c2 + &a.c2 * &b.c0 + k * (&a.c1 * &b.c1),
    }
}

/// Membership in the lattice spanned by `1`, `p^i X`, `βX + p^j Y`.
pub fn in_order_lattice(elem: &RingElement, triple: &OrderTriple, ctx: &PrimeContext) -> bool {
    let pj = ctx.pow(triple.j);
    let (y_coeff, r) = elem.c2.div_rem(&pj);
    if !r.is_zero() {
        return false;
    }
    let pi = ctx.pow(triple.i);
    (&elem.c1 - y_coeff * &triple.beta).mod_floor(&pi).is_zero()
}

/// A lower-triangular Hermite normal form of a full-rank lattice in `Z^3`.
///
/// Rows are basis vectors; diagonal entries are positive and each entry
/// below the diagonal lies in `[0, diagonal entry of its column)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hnf(pub [[BigInt; 3]; 3]);

impl Hnf {
    pub fn rows(&self) -> &[[BigInt; 3]; 3] {
        &self.0
    }

    pub fn determinant(&self) -> BigInt {
        &self.0[0][0] * &self.0[1][1] * &self.0[2][2]
    }

    /// Reads off `(i, j, β)` when the lattice is
    /// `span{1, p^i X, βX + p^j Y}`.
    pub fn to_triple(&self, ctx: &PrimeContext) -> Option<OrderTriple> {
        let r = &self.0;
        if !r[0][0].is_one() || !r[1][0].is_zero() || !r[2][0].is_zero() {
            return None;
        }
        let i = exact_power(&r[1][1], ctx.p())?;
        let j = exact_power(&r[2][2], ctx.p())?;
        Some(OrderTriple {
            i,
            j,
            beta: r[2][1].clone(),
        })
    }
}

fn exact_power(x: &BigInt, p: u64) -> Option<u32> {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut e = 0;
    while !x.is_one() {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() || q.is_zero() {
            return None;
        }
        x = q;
        e += 1;
    }
    Some(e)
}

fn sub_multiple(target: &mut [BigInt; 3], q: &BigInt, row: &[BigInt; 3]) {
    for (t, r) in target.iter_mut().zip(row) {
        *t -= q * r;
    }
}

/// Hermite normal form of the lattice spanned by `rows`, or `None` if the
/// span has rank below 3.
pub fn hermite_normal_form(rows: &[[BigInt; 3]]) -> Option<Hnf> {
    let mut pool: Vec<[BigInt; 3]> = rows.to_vec();
    let mut out: [[BigInt; 3]; 3] = Default::default();
    for col in (0..3).rev() {
        // Euclid on column `col` until a single row has a nonzero entry.
        loop {
            let pivot = pool
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                .map(|(idx, _)| idx)?;
            let pivot_row = pool[pivot].clone();
            let mut done = true;
            for (idx, r) in pool.iter_mut().enumerate() {
                if idx != pivot && !r[col].is_zero() {
                    let q = r[col].div_floor(&pivot_row[col]);
                    sub_multiple(r, &q, &pivot_row);
                    done &= r[col].is_zero();
                }
            }
            if done {
                break;
            }
        }
        let pivot = pool.iter().position(|r| !r[col].is_zero())?;
        let mut row = pool.swap_remove(pivot);
        if row[col].is_negative() {
            row.iter_mut().for_each(|x| *x = -&*x);
        }
        out[col] = row;
    }
    for r in 1..3 {
        for c in (0..r).rev() {
            let q = out[r][c].div_floor(&out[c][c]);
            if !q.is_zero() {
                let row = out[c].clone();
                sub_multiple(&mut out[r], &q, &row);
            }
        }
    }
    Some(Hnf(out))
}

/// The order `Z[ξ]`, given by its index in the ring of integers and its HNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedOrder {
    pub index: BigInt,
    pub hnf: Hnf,
}

/// Computes `Z[ξ] = span{1, ξ, ξ^2}`.
pub fn order_from_generator(xi: &RingElement, field: &PureCubicField) -> Result<GeneratedOrder> {
    let sq = mul(xi, xi, field);
    let hnf = hermite_normal_form(&[RingElement::one().coords(), xi.coords(), sq.coords()])
        .ok_or(Error::NotFullRank)?;
    Ok(GeneratedOrder {
        index: hnf.determinant(),
        hnf,
    })
}

//! Orders of index `p^n` and their count.
//!
//! A full-rank sublattice of the ring of integers containing 1 is
//! `span{1, p^i X, βX + p^j Y}` with `0 <= β < p^i`; it has index `p^(i+j)`.
//! Whether such a lattice is closed under multiplication is decided here by
//! three independent routes (direct products, valuations of the structure
//! coefficients, and the closed-form conditions), and the closed-form route
//! also drives a constructive enumerator that never scans `β`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeContext;
use crate::padic::{count_cube_roots, inverse_mod, lift_cube_roots, nu_int, nu_ratio, Valuation};
use crate::ring::{in_order_lattice, mul, Hnf, RingElement};

/// The lattice `span{1, p^i X, βX + p^j Y}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderTriple {
    pub i: u32,
    pub j: u32,
    pub beta: BigInt,
}

impl OrderTriple {
    /// Checks `0 <= β < p^i`.
    pub fn new(ctx: &PrimeContext, i: u32, j: u32, beta: BigInt) -> Result<Self> {
        if beta.is_negative() || beta >= ctx.pow(i) {
            return Err(Error::MalformedTriple { i, j, beta });
        }
        Ok(OrderTriple { i, j, beta })
    }

    /// The ring of integers itself.
    pub fn maximal() -> Self {
        OrderTriple {
            i: 0,
            j: 0,
            beta: BigInt::zero(),
        }
    }

    pub fn n(&self) -> u32 {
        self.i + self.j
    }

    pub fn index(&self, ctx: &PrimeContext) -> BigInt {
        ctx.pow(self.n())
    }

    /// Preferred basis `{1, p^i X, βX + p^j Y}`.
    pub fn basis(&self, ctx: &PrimeContext) -> [RingElement; 3] {
        [
            RingElement::one(),
            RingElement::new(0, ctx.pow(self.i), 0),
            RingElement::new(0, self.beta.clone(), ctx.pow(self.j)),
        ]
    }

    pub fn hnf(&self, ctx: &PrimeContext) -> Hnf {
        let [a, b, c] = self.basis(ctx);
        Hnf([a.coords(), b.coords(), c.coords()])
    }

    /// `β / p^ν(β)`, or zero for `β = 0`.
    pub fn alpha(&self, ctx: &PrimeContext) -> BigInt {
        match nu_int(&self.beta, ctx.p()) {
            Valuation::Finite(v) => &self.beta / ctx.pow(v as u32),
            Valuation::Infinite => BigInt::zero(),
        }
    }

    fn sort_key(&self) -> (u32, u32, &BigInt) {
        (self.n(), self.i, &self.beta)
    }
}

/// Sorted by `(n, i, β)`.
impl Ord for OrderTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for OrderTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrderTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.beta)
    }
}

/// Closure under multiplication, tested on the products of basis elements.
pub fn is_closed_oracle(ctx: &PrimeContext, t: &OrderTriple) -> bool {
    let [_, u, w] = t.basis(ctx);
    let field = ctx.field();
    [mul(&u, &u, field), mul(&u, &w, field), mul(&w, &w, field)]
        .iter()
        .all(|e| in_order_lattice(e, t, ctx))
}

fn p_power_ratio(ctx: &PrimeContext, e: i64) -> BigRational {
    let pe = ctx.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(pe)
    } else {
        BigRational::new(BigInt::one(), pe)
    }
}

/// Closure via the structure coefficients
/// `k p^(2i-j)`, `k p^(i-j) β`, `k p^(-j) β^2`, `h p^(2j-i) - k p^(-i-j) β^3`,
/// which must all be p-integral.
pub fn classify_valuation(ctx: &PrimeContext, t: &OrderTriple) -> bool {
    let f = ctx.field();
    let k = BigRational::from_integer(f.k_big().clone());
    let h = BigRational::from_integer(f.h_big().clone());
    let beta = BigRational::from_integer(t.beta.clone());
    let (i, j) = (i64::from(t.i), i64::from(t.j));
    let coeffs = [
        &k * p_power_ratio(ctx, 2 * i - j),
        &k * p_power_ratio(ctx, i - j) * &beta,
        &k * p_power_ratio(ctx, -j) * &beta * &beta,
        &h * p_power_ratio(ctx, 2 * j - i)
            - &k * p_power_ratio(ctx, -i - j) * &beta * &beta * &beta,
    ];
    coeffs.iter().all(|c| nu_ratio(c, ctx.p()).is_nonnegative())
}

/// `ceil((n - ν(k)) / 3)` and `floor((2n + ν(h)) / 3)`: the range of `i`
/// allowed by the valuation-separated condition.
fn separated_bounds(ctx: &PrimeContext, n: u32) -> (i64, i64) {
    let n = i64::from(n);
    let lo = Integer::div_ceil(&(n - i64::from(ctx.nu_k())), &3);
    let hi = Integer::div_floor(&(2 * n + i64::from(ctx.nu_h())), &3);
    (lo, hi)
}

/// Closure via the closed-form conditions.
///
/// Either `β = 0` or `3ν(β) >= n - ν(k)`, with `i` in [`separated_bounds`];
/// or, when `p ∤ m`, the valuations of the last structure coefficient's two
/// terms coincide (`ν(β) = j`, `3j < n`) and `ν(m - (kα)^3) >= i - 2j` for
/// `α = β / p^j`.
pub fn classify_closed_form(ctx: &PrimeContext, t: &OrderTriple) -> bool {
    let n = t.n();
    let (lo, hi) = separated_bounds(ctx, n);
    let i = i64::from(t.i);
    let v_beta = nu_int(&t.beta, ctx.p());
    // `lo` doubles as the threshold for ν(β)
    let separated = (lo..=hi).contains(&i) && v_beta.at_least(lo);
    if separated || ctx.divides_m() {
        return separated;
    }
    if t.beta.is_zero() || 3 * t.j >= n || v_beta != i64::from(t.j) {
        return false;
    }
    let f = ctx.field();
    let alpha = &t.beta / ctx.pow(t.j);
    let k_alpha = f.k_big() * alpha;
    let defect = BigInt::from(f.m()) - &k_alpha * &k_alpha * &k_alpha;
    nu_int(&defect, ctx.p()).at_least(i - 2 * i64::from(t.j))
}

/// How [`enumerate_orders`] decides which lattices are orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Scan all `β`; test products directly.
    Oracle,
    /// Scan all `β`; test valuations of the structure coefficients.
    Valuation,
    /// Scan all `β`; test the closed-form conditions.
    ClosedForm,
    /// Construct the accepted `β` directly.
    Fast,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Oracle,
        Method::Valuation,
        Method::ClosedForm,
        Method::Fast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Valuation => "valuation",
            Method::ClosedForm => "closed_form",
            Method::Fast => "fast",
        }
    }

    /// The per-triple classifier of a scanning method.
    pub fn classifier(self) -> Option<fn(&PrimeContext, &OrderTriple) -> bool> {
        match self {
            Method::Oracle => Some(is_closed_oracle),
            Method::Valuation => Some(classify_valuation),
            Method::ClosedForm => Some(classify_closed_form),
            Method::Fast => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "valuation" => Ok(Method::Valuation),
            "closed_form" | "closed-form" => Ok(Method::ClosedForm),
            "fast" => Ok(Method::Fast),
            _ => Err("expected one of: oracle, valuation, closed_form, fast"),
        }
    }
}

/// Upper bound on `n` for the methods that scan every `β < p^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanLimits {
    pub n_scan_max: u32,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits { n_scan_max: 6 }
    }
}

impl ScanLimits {
    pub fn check(&self, ctx: &PrimeContext, n: u32) -> Result<()> {
        let too_large = Error::ScanTooLarge {
            n,
            i: n,
            limit: self.n_scan_max,
        };
        if n > self.n_scan_max {
            return Err(too_large);
        }
        ctx.pow(n).to_u64().map(|_| ()).ok_or(too_large)
    }
}

/// Classifies the lattices `(i, n - i, β)` for `β` in `betas`.
///
/// Any partition of `0..p^i` into ranges, merged and sorted, reproduces the
/// corresponding slice of [`enumerate_orders`].
pub fn scan_range(
    ctx: &PrimeContext,
    n: u32,
    i: u32,
    betas: core::ops::Range<u64>,
    classify: impl Fn(&PrimeContext, &OrderTriple) -> bool,
) -> Vec<OrderTriple> {
    let mut out = Vec::new();
    let mut t = OrderTriple {
        i,
        j: n - i,
        beta: BigInt::from(betas.start),
    };
    for _ in betas {
        if classify(ctx, &t) {
            out.push(t.clone());
        }
        t.beta += 1u32;
    }
    out
}

/// Every order of index `p^n`, sorted by `(i, β)`.
pub fn enumerate_orders(
    ctx: &PrimeContext,
    n: u32,
    method: Method,
    limits: ScanLimits,
) -> Result<Vec<OrderTriple>> {
    let Some(classify) = method.classifier() else {
        return Ok(enumerate_fast(ctx, n));
    };
    limits.check(ctx, n)?;
    let mut out = Vec::new();
    for i in 0..=n {
        let bound = ctx.pow(i).to_u64().expect("checked by ScanLimits");
        out.extend(scan_range(ctx, n, i, 0..bound, classify));
    }
    Ok(out)
}

/// Builds the orders of index `p^n` without scanning `β`.
///
/// Separated branch: `β` runs over multiples of `p^lo` below `p^i`. Extra
/// branch (`p ∤ m`): for `3j < n` and `i = n - j`, `β = p^j α` where `α`
/// runs over the lifts of the cube roots of `m k^-3 (mod p^(i-2j))` to
/// residues modulo `p^(i-j)`.
pub fn enumerate_fast(ctx: &PrimeContext, n: u32) -> Vec<OrderTriple> {
    let mut out = Vec::new();
    let (lo, hi) = separated_bounds(ctx, n);
    let lo = lo.max(0) as u32;
    let step = ctx.pow(lo);
    for i in (lo..=n).take_while(|&i| i64::from(i) <= hi) {
        let count = ctx.pow(i - lo);
        let mut beta = BigInt::zero();
        let mut c = BigInt::zero();
        while c < count {
            out.push(OrderTriple {
                i,
                j: n - i,
                beta: beta.clone(),
            });
            beta += &step;
            c += 1u32;
        }
    }
    if !ctx.divides_m() {
        let f = ctx.field();
        for j in (0..n).take_while(|&j| 3 * j < n) {
            let i = n - j;
            let e = i - 2 * j;
            let modulus = ctx.pow(e);
            let k_inv =
                inverse_mod(f.k_big(), &modulus).expect("k is a unit when p does not divide m");
            let target = (BigInt::from(f.m()) * k_inv.pow(3)).mod_floor(&modulus);
            let roots =
                lift_cube_roots(&target, ctx.p(), e).expect("m is a unit when p does not divide m");
            let pj = ctx.pow(j);
            for root in roots {
                let mut alpha = root;
                let mut t = BigInt::zero();
                while t < pj {
                    out.push(OrderTriple {
                        i,
                        j,
                        beta: &pj * &alpha,
                    });
                    alpha += &modulus;
                    t += 1u32;
                }
            }
        }
    }
    out.sort();
    out
}

fn geometric_sum(p: &BigUint, terms: u32) -> BigUint {
    let (q, r) = (num_traits::pow(p.clone(), terms as usize) - 1u32).div_rem(&(p - 1u32));
    assert!(r.is_zero(), "geometric sum division must be exact");
    q
}

/// Number of orders of index exactly `p^n`, from the closed formula.
pub fn count_orders_formula(ctx: &PrimeContext, n: u32) -> BigUint {
    let p = BigUint::from(ctx.p());
    if ctx.divides_m() {
        return geometric_sum(&p, n / 3 + 1);
    }
    let ceil = n.div_ceil(3);
    let floor2 = 2 * n / 3;
    let r = count_cube_roots(ctx.field().m(), ctx.p()).expect("context prime is valid");
    geometric_sum(&p, floor2 + 1 - ceil) + geometric_sum(&p, ceil) * BigUint::from(r)
}

/// One row of the cumulative count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: u32,
    pub by_formula: BigUint,
    pub by_scan: Option<BigUint>,
    /// Number of orders of index `p^t` for some `t <= n`.
    pub cumulative_a: BigUint,
}

/// Cumulative counts from the formula alone.
pub fn cumulative_a(ctx: &PrimeContext, n_max: u32) -> Vec<CountReport> {
    let mut total = BigUint::zero();
    (0..=n_max)
        .map(|n| {
            let by_formula = count_orders_formula(ctx, n);
            total += &by_formula;
            CountReport {
                n,
                by_formula,
                by_scan: None,
                cumulative_a: total.clone(),
            }
        })
        .collect()
}

/// Cumulative counts, each checked against an independent count
/// (`scan(n)`); fails on the first disagreement.
pub fn cumulative_a_verified(
    ctx: &PrimeContext,
    n_max: u32,
    mut scan: impl FnMut(u32) -> Result<usize>,
) -> Result<Vec<CountReport>> {
    let mut reports = cumulative_a(ctx, n_max);
    for r in reports.iter_mut() {
        let counted = BigUint::from(scan(r.n)?);
        if counted != r.by_formula {
            return Err(Error::CountMismatch {
                n: r.n,
                formula: r.by_formula.clone().into(),
                scan: counted.into(),
            });
        }
        r.by_scan = Some(counted);
    }
    Ok(reports)
}

//! Primitive solutions of `k U^3 - h V^3 = ±p^N` and their link to monogenic
//! orders.
//!
//! A unit value `(x, y)` of an order's index form gives
//! `(U, V) = (p^i x + β y, p^j y)` with `k U^3 - h V^3 = ±p^n`. Dividing out
//! `gcd(U, V) = p^e` leaves a primitive solution with `N = n - 3e`. Each
//! primitive solution accounts for at most two orders of a given index, so
//! the number of monogenic orders of index `p^n` stays bounded in `n`.
//!
//! Nothing here solves the equation completely: solutions are searched in a
//! finite box, and every bound is checked against the solutions actually
//! found.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeContext;
use crate::index_form::{index_form_order, is_monogenic_bounded};
use crate::order::{enumerate_fast, OrderTriple};
use crate::padic::{nu_int, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitSign {
    Plus,
    Minus,
}

impl UnitSign {
    pub fn symbol(self) -> &'static str {
        match self {
            UnitSign::Plus => "+",
            UnitSign::Minus => "-",
        }
    }
}

/// `k U^3 - h V^3 = sign * p^N` with `gcd(U, V) = 1`, normalized so that
/// `V > 0`, or `V = 0` and `U > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveSolution {
    pub u: BigInt,
    pub v: BigInt,
    pub n: u32,
    pub sign: UnitSign,
}

impl PrimitiveSolution {
    fn sort_key(&self) -> (u32, &BigInt, &BigInt) {
        (self.n, &self.v, &self.u)
    }

    /// Normalizes `±(u, v)` and checks the equation.
    pub fn new(ctx: &PrimeContext, u: BigInt, v: BigInt) -> Option<Self> {
        if !u.gcd(&v).is_one() {
            return None;
        }
        let (u, v) = if v.is_negative() || (v.is_zero() && u.is_negative()) {
            (-u, -v)
        } else {
            (u, v)
        };
        let (n, sign) = signed_prime_power(&form_value(ctx, &u, &v), ctx.p())?;
        Some(PrimitiveSolution { u, v, n, sign })
    }
}

impl Ord for PrimitiveSolution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.sign.cmp(&other.sign))
    }
}

impl PartialOrd for PrimitiveSolution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimitiveSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.u,
            self.v,
            self.n,
            self.sign.symbol()
        )
    }
}

fn form_value(ctx: &PrimeContext, u: &BigInt, v: &BigInt) -> BigInt {
    let f = ctx.field();
    f.k_big() * u.pow(3) - f.h_big() * v.pow(3)
}

/// `value = sign * p^N`?
fn signed_prime_power(value: &BigInt, p: u64) -> Option<(u32, UnitSign)> {
    if value.is_zero() {
        return None;
    }
    let sign = if value.is_negative() {
        UnitSign::Minus
    } else {
        UnitSign::Plus
    };
    let p = BigInt::from(p);
    let mut rest = value.abs();
    let mut n = 0;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        n += 1;
    }
    Some((n, sign))
}

fn small_prime_power(value: i128, p: u64, n_max: u32) -> Option<(u32, UnitSign)> {
    if value == 0 {
        return None;
    }
    let sign = if value < 0 {
        UnitSign::Minus
    } else {
        UnitSign::Plus
    };
    let p = u128::from(p);
    let mut rest = value.unsigned_abs();
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
        if n > n_max {
            return None;
        }
    }
    (rest == 1).then_some((n, sign))
}

/// All primitive solutions with `|U|, |V| <= height` and `N <= n_max`,
/// sorted by `(N, V, U)`.
pub fn find_primitive_solutions(
    ctx: &PrimeContext,
    height: u64,
    n_max: u32,
) -> Vec<PrimitiveSolution> {
    let h = i64::try_from(height).expect("search height fits in i64");
    let f = ctx.field();
    let (k, hh) = (i128::from(f.k()), i128::from(f.h()));
    let mut out = Vec::new();
    for v in 0..=h {
        let u_start = if v == 0 { 1 } else { -h };
        for u in u_start..=h {
            if u.gcd(&v) != 1 {
                continue;
            }
            let small = (|| {
                let (u, v) = (i128::from(u), i128::from(v));
                k.checked_mul(u.checked_mul(u)?.checked_mul(u)?)?
                    .checked_sub(hh.checked_mul(v.checked_mul(v)?.checked_mul(v)?)?)
            })();
            let hit = match small {
                Some(value) => small_prime_power(value, ctx.p(), n_max),
                None => signed_prime_power(
                    &form_value(ctx, &BigInt::from(u), &BigInt::from(v)),
                    ctx.p(),
                )
                .filter(|(n, _)| *n <= n_max),
            };
            if let Some((n, sign)) = hit {
                out.push(PrimitiveSolution {
                    u: BigInt::from(u),
                    v: BigInt::from(v),
                    n,
                    sign,
                });
            }
        }
    }
    out.sort();
    out
}

/// Valuation pattern of a primitive solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionCase {
    /// `ν(U) = ν(V) = 0`, `N = 0`.
    Coprime,
    /// `ν(U) > 0`, `ν(V) = 0`, `N = ν(h)`.
    UDivisible,
    /// `ν(U) = 0`, `ν(V) > 0`, `N = ν(k)`.
    VDivisible,
    /// `ν(U) = ν(V) = 0`, `N > 0`; only when `p ∤ m`.
    PrimePowerValue,
    /// `U = 0` or `V = 0`.
    ZeroCoordinate,
}

impl SolutionCase {
    pub fn label(self) -> &'static str {
        match self {
            SolutionCase::Coprime => "i",
            SolutionCase::UDivisible => "ii",
            SolutionCase::VDivisible => "iii",
            SolutionCase::PrimePowerValue => "iv",
            SolutionCase::ZeroCoordinate => "zero_coordinate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolutionClass {
    pub case: SolutionCase,
    /// `ν_p(U)`, undefined for `U = 0`.
    pub a: Option<u32>,
    /// `ν_p(V)`, undefined for `V = 0`.
    pub b: Option<u32>,
}

pub fn classify_solution(s: &PrimitiveSolution, ctx: &PrimeContext) -> Result<SolutionClass> {
    let val = |x: &BigInt| nu_int(x, ctx.p()).finite().map(|v| v as u32);
    let (a, b) = (val(&s.u), val(&s.v));
    let case = match (a, b) {
        (None, _) | (_, None) => SolutionCase::ZeroCoordinate,
        (Some(0), Some(0)) if s.n == 0 => SolutionCase::Coprime,
        (Some(0), Some(0)) if !ctx.divides_m() => SolutionCase::PrimePowerValue,
        (Some(a), Some(0)) if a > 0 && s.n == ctx.nu_h() => SolutionCase::UDivisible,
        (Some(0), Some(b)) if b > 0 && s.n == ctx.nu_k() => SolutionCase::VDivisible,
        _ => {
            return Err(Error::ClassificationGap {
                u: s.u.clone(),
                v: s.v.clone(),
                n: s.n,
            })
        }
    };
    Ok(SolutionClass { case, a, b })
}

/// Orders of index `p^n` reached by the family `(p^e U, p^e V, N + 3e)`,
/// with the unit value `(x, y)` of each order's index form.
pub fn orders_from_solution(
    s: &PrimitiveSolution,
    ctx: &PrimeContext,
    n: u32,
) -> Vec<(OrderTriple, BigInt, BigInt)> {
    if n < s.n || !(n - s.n).is_multiple_of(3) {
        return Vec::new();
    }
    let pe = ctx.pow((n - s.n) / 3);
    let (big_u, big_v) = (&s.u * &pe, &s.v * &pe);
    let mut out = Vec::new();
    for t in enumerate_fast(ctx, n) {
        let (y, r) = big_v.div_rem(&ctx.pow(t.j));
        if !r.is_zero() {
            continue;
        }
        let (x, r) = (&big_u - &y * &t.beta).div_rem(&ctx.pow(t.i));
        if !r.is_zero() {
            continue;
        }
        debug_assert!(index_form_order(ctx, &t).is_ok_and(|f| f.eval(&x, &y).abs().is_one()));
        out.push((t, x, y));
    }
    out
}

/// The primitive solution behind a unit value of an order's index form.
pub fn link_witness(
    ctx: &PrimeContext,
    t: &OrderTriple,
    x: &BigInt,
    y: &BigInt,
) -> Result<PrimitiveSolution> {
    let big_u = ctx.pow(t.i) * x + &t.beta * y;
    let big_v = ctx.pow(t.j) * y;
    let g = big_u.gcd(&big_v);
    let inconsistent =
        |why: &str| Error::CensusInconsistent(format!("order {t}, witness ({x}, {y}): {why}"));
    let e = match (nu_int(&g, ctx.p()), g.is_zero()) {
        (Valuation::Finite(e), false) if ctx.pow(e as u32) == g => e as u32,
        _ => return Err(inconsistent("gcd(U, V) is not a power of p")),
    };
    if 3 * e > t.n() {
        return Err(inconsistent("gcd(U, V)^3 exceeds the index"));
    }
    let s = PrimitiveSolution::new(ctx, big_u / &g, big_v / &g)
        .ok_or_else(|| inconsistent("stripped pair does not solve the equation"))?;
    if s.n + 3 * e != t.n() {
        return Err(inconsistent("exponent does not match the index"));
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusParams {
    pub n_max: u32,
    /// Box half-width for unit values of each order's index form.
    pub search_bound: u32,
    /// Box half-width for the primitive-solution scan.
    pub tm_height: u64,
    pub tm_n_max: u32,
}

impl CensusParams {
    pub fn new(n_max: u32) -> Self {
        CensusParams {
            n_max,
            search_bound: 50,
            tm_height: 200,
            tm_n_max: 12,
        }
    }
}

/// Monogenic orders found at one index `p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonogenicCensus {
    pub n: u32,
    /// Number of orders of index `p^n`.
    pub orders_total: usize,
    pub orders_found: Vec<(OrderTriple, (i64, i64))>,
    pub linked_solutions: BTreeMap<OrderTriple, PrimitiveSolution>,
    /// Monogenic orders found with index `p^t`, `t <= n`.
    pub cumulative_b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub levels: Vec<MonogenicCensus>,
    /// Primitive solutions in the search box; a lower bound on all of them.
    pub box_solutions: Vec<PrimitiveSolution>,
}

impl Census {
    /// Number of primitive solutions found in the box.
    pub fn g_found(&self) -> usize {
        self.box_solutions.len()
    }

    pub fn distinct_linked(&self) -> BTreeSet<&PrimitiveSolution> {
        self.levels
            .iter()
            .flat_map(|l| l.linked_solutions.values())
            .collect()
    }

    /// Largest `N` among linked solutions; the per-level bound is asserted
    /// only beyond it.
    pub fn max_linked_n(&self) -> Option<u32> {
        self.distinct_linked().iter().map(|s| s.n).max()
    }

    pub fn cumulative_b(&self) -> u64 {
        self.levels.last().map_or(0, |l| l.cumulative_b)
    }
}

/// Links the monogenic orders found at level `n` and checks that no
/// primitive solution accounts for more than two of them.
pub fn census_level(
    ctx: &PrimeContext,
    n: u32,
    orders_total: usize,
    mut found: Vec<(OrderTriple, (i64, i64))>,
    previous_b: u64,
) -> Result<MonogenicCensus> {
    found.sort();
    let mut linked = BTreeMap::new();
    let mut multiplicity: BTreeMap<PrimitiveSolution, usize> = BTreeMap::new();
    for (t, (x, y)) in &found {
        if t.n() != n {
            return Err(Error::CensusInconsistent(format!(
                "order {t} listed at level {n}"
            )));
        }
        let s = link_witness(ctx, t, &BigInt::from(*x), &BigInt::from(*y))?;
        *multiplicity.entry(s.clone()).or_default() += 1;
        linked.insert(t.clone(), s);
    }
    if let Some((s, &count)) = multiplicity.iter().find(|(_, &c)| c > 2) {
        return Err(Error::MultiplicityViolation {
            u: s.u.clone(),
            v: s.v.clone(),
            solution_n: s.n,
            n,
            count,
        });
    }
    Ok(MonogenicCensus {
        n,
        orders_total,
        cumulative_b: previous_b + found.len() as u64,
        orders_found: found,
        linked_solutions: linked,
    })
}

/// Cross-checks the levels against the box scan and the `2g` bound.
pub fn finish_census(
    levels: Vec<MonogenicCensus>,
    box_solutions: Vec<PrimitiveSolution>,
    params: &CensusParams,
) -> Result<Census> {
    let census = Census {
        levels,
        box_solutions,
    };
    let boxed: BTreeSet<&PrimitiveSolution> = census.box_solutions.iter().collect();
    let linked = census.distinct_linked();
    for s in &linked {
        let in_box = s.n <= params.tm_n_max
            && s.u.abs() <= BigInt::from(params.tm_height)
            && s.v.abs() <= BigInt::from(params.tm_height);
        if in_box && !boxed.contains(s) {
            return Err(Error::CensusInconsistent(format!(
                "linked solution {s} missing from the box scan"
            )));
        }
    }
    if let Some(threshold) = census.max_linked_n() {
        let bound = 2 * linked.len();
        for level in census.levels.iter().filter(|l| l.n > threshold) {
            if level.orders_found.len() > bound {
                return Err(Error::CensusInconsistent(format!(
                    "{} monogenic orders at n = {} exceed 2 x {} linked solutions",
                    level.orders_found.len(),
                    level.n,
                    linked.len()
                )));
            }
        }
    }
    Ok(census)
}

/// Searches every order of index `p^n`, `n <= n_max`, for a unit value of
/// its index form and links the hits to primitive solutions.
pub fn monogenic_census(ctx: &PrimeContext, params: &CensusParams) -> Result<Census> {
    let mut levels = Vec::new();
    let mut b = 0;
    for n in 0..=params.n_max {
        let orders = enumerate_fast(ctx, n);
        let mut found = Vec::new();
        for t in &orders {
            if let Some(w) = is_monogenic_bounded(ctx, t, params.search_bound)?.witness() {
                found.push((t.clone(), w));
            }
        }
        let level = census_level(ctx, n, orders.len(), found, b)?;
        b = level.cumulative_b;
        levels.push(level);
    }
    let box_solutions = find_primitive_solutions(ctx, params.tm_height, params.tm_n_max);
    finish_census(levels, box_solutions, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, make_prime_context};
    use alloc::vec;
    use num_traits::ToPrimitive;

    fn ctx(m: i64, p: u64) -> PrimeContext {
        make_prime_context(&make_field(m).unwrap(), p).unwrap()
    }

    fn sol(u: i64, v: i64, n: u32, sign: UnitSign) -> PrimitiveSolution {
        PrimitiveSolution {
            u: BigInt::from(u),
            v: BigInt::from(v),
            n,
            sign,
        }
    }

    fn t(i: u32, j: u32, beta: i64) -> OrderTriple {
        OrderTriple {
            i,
            j,
            beta: BigInt::from(beta),
        }
    }

    fn fits_i64(x: &BigInt) -> bool {
        x.to_i64().is_some()
    }

    /// Independent of the i128 fast path: every pair in the box, BigInt only.
    fn brute_solutions(c: &PrimeContext, height: i64, n_max: u32) -> Vec<PrimitiveSolution> {
        let mut out = Vec::new();
        for u in -height..=height {
            for v in -height..=height {
                if let Some(s) = PrimitiveSolution::new(c, BigInt::from(u), BigInt::from(v)) {
                    if s.n <= n_max && !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn solution_examples() {
        use UnitSign::*;
        assert_eq!(
            find_primitive_solutions(&ctx(2, 5), 2, 6),
            vec![sol(1, 0, 0, Plus), sol(1, 1, 0, Minus)]
        );
        assert_eq!(
            find_primitive_solutions(&ctx(5, 5), 1, 2),
            vec![sol(1, 0, 0, Plus), sol(0, 1, 1, Minus)]
        );
        assert_eq!(find_primitive_solutions(&ctx(2, 5), 0, 6), vec![]);
    }

    #[test]
    fn box_scan_matches_brute_force() {
        for (m, p) in [(2, 5), (5, 5), (12, 7), (-20, 5), (6, 7), (50, 5)] {
            let c = ctx(m, p);
            assert_eq!(
                find_primitive_solutions(&c, 25, 8),
                brute_solutions(&c, 25, 8),
                "m={m} p={p}"
            );
        }
    }

    #[test]
    fn classification_examples() {
        let c = ctx(2, 5);
        let class = classify_solution(&sol(1, 0, 0, UnitSign::Plus), &c).unwrap();
        assert_eq!(class.case, SolutionCase::ZeroCoordinate);
        let class = classify_solution(&sol(1, 1, 0, UnitSign::Minus), &c).unwrap();
        assert_eq!(
            class,
            SolutionClass {
                case: SolutionCase::Coprime,
                a: Some(0),
                b: Some(0)
            }
        );
        let class = classify_solution(&sol(0, 1, 1, UnitSign::Minus), &ctx(5, 5)).unwrap();
        assert_eq!(class.case, SolutionCase::ZeroCoordinate);
        assert!(matches!(
            classify_solution(&sol(5, 1, 3, UnitSign::Plus), &ctx(5, 5)),
            Err(Error::ClassificationGap { .. })
        ));
    }

    #[test]
    fn every_box_solution_classifies() {
        for (m, p) in [
            (2, 5),
            (5, 5),
            (12, 7),
            (-20, 5),
            (6, 7),
            (50, 5),
            (3, 7),
            (11, 5),
        ] {
            let c = ctx(m, p);
            for s in find_primitive_solutions(&c, 60, 12) {
                let class = classify_solution(&s, &c).unwrap();
                if class.case == SolutionCase::PrimePowerValue {
                    assert!(!c.divides_m());
                }
            }
        }
    }

    #[test]
    fn orders_from_solution_examples() {
        let c = ctx(5, 5);
        let s = sol(0, 1, 1, UnitSign::Minus);
        assert_eq!(
            orders_from_solution(&s, &c, 1),
            vec![(t(1, 0, 0), BigInt::from(0), BigInt::from(1))]
        );
        assert_eq!(orders_from_solution(&s, &c, 2), vec![]);
        assert_eq!(orders_from_solution(&s, &c, 0), vec![]);
        let c = ctx(2, 5);
        assert_eq!(
            orders_from_solution(&sol(1, 1, 0, UnitSign::Minus), &c, 1),
            vec![]
        );
    }

    #[test]
    fn families_reach_at_most_two_orders() {
        for (m, p) in [(2, 5), (5, 5), (12, 7), (6, 7), (50, 5), (3, 7)] {
            let c = ctx(m, p);
            for s in find_primitive_solutions(&c, 40, 8) {
                for n in s.n + 1..=9 {
                    let hits = orders_from_solution(&s, &c, n);
                    assert!(hits.len() <= 2, "m={m} p={p} s={s} n={n}: {}", hits.len());
                    for (order, x, y) in hits {
                        let form = index_form_order(&c, &order).unwrap();
                        assert!(form.eval(&x, &y).abs().is_one());
                    }
                }
            }
        }
    }

    #[test]
    fn census_examples() {
        let census = monogenic_census(
            &ctx(5, 5),
            &CensusParams {
                search_bound: 5,
                ..CensusParams::new(1)
            },
        )
        .unwrap();
        let b: Vec<u64> = census.levels.iter().map(|l| l.cumulative_b).collect();
        assert_eq!(b, [1, 2]);
        assert_eq!(census.levels[0].orders_found, vec![(t(0, 0, 0), (1, 0))]);
        assert_eq!(census.levels[1].orders_found, vec![(t(1, 0, 0), (0, 1))]);

        let census = monogenic_census(&ctx(2, 5), &CensusParams::new(0)).unwrap();
        assert_eq!(census.cumulative_b(), 1);

        let census = monogenic_census(
            &ctx(2, 5),
            &CensusParams {
                search_bound: 5,
                ..CensusParams::new(1)
            },
        )
        .unwrap();
        assert!(matches!(census.levels[1].cumulative_b, 1 | 2));
    }

    #[test]
    fn census_links_are_consistent() {
        for (m, p) in [(2, 5), (5, 5), (2, 7)] {
            let c = ctx(m, p);
            let census = monogenic_census(
                &c,
                &CensusParams {
                    search_bound: 20,
                    ..CensusParams::new(6)
                },
            )
            .unwrap();
            for level in &census.levels {
                assert_eq!(level.linked_solutions.len(), level.orders_found.len());
                for (order, s) in &level.linked_solutions {
                    assert!(fits_i64(&s.u) && fits_i64(&s.v));
                    let reached = orders_from_solution(s, &c, level.n);
                    assert!(
                        reached.iter().any(|(o, _, _)| o == order),
                        "{order} not reached by {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn multiplicity_violation_is_reported() {
        // three orders claiming the same solution
        let c = ctx(2, 5);
        let found = vec![
            (t(0, 0, 0), (1, 0)),
            (t(0, 0, 0), (1, 0)),
            (t(0, 0, 0), (1, 0)),
        ];
        assert!(matches!(
            census_level(&c, 0, 1, found, 0),
            Err(Error::MultiplicityViolation { count: 3, .. })
        ));
    }

    #[test]
    fn bad_link_is_reported() {
        let c = ctx(2, 5);
        // (2, 0) is not a unit value of x^3 - 2y^3
        assert!(matches!(
            link_witness(&c, &t(0, 0, 0), &BigInt::from(2), &BigInt::from(0)),
            Err(Error::CensusInconsistent(_))
        ));
    }
}

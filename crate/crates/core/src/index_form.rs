//! Index forms and the bounded monogenicity search.
//!
//! With respect to `{1, X, Y}` the ring of integers has index form
//! `k x^3 - h y^3`. For the order `span{1, p^i X, βX + p^j Y}` the index form
//! in its preferred basis is `p^-n (k (p^i x + β y)^3 - h (p^j y)^3)`.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{PrimeContext, PureCubicField};
use crate::order::OrderTriple;
use crate::ring::RingElement;

/// `a x^3 + b x^2 y + c x y^2 + d y^3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryCubicForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl BinaryCubicForm {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        BinaryCubicForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in x with y-powers folded in
        let y2 = y * y;
        ((&self.a * x + &self.b * y) * x + &self.c * &y2) * x + &self.d * &y2 * y
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }

    fn small_coefficients(&self) -> Option<[i128; 4]> {
        Some([
            self.a.to_i128()?,
            self.b.to_i128()?,
            self.c.to_i128()?,
            self.d.to_i128()?,
        ])
    }
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Evaluates a form at many small points, in `i128` where it fits.
struct UnitValueProbe<'a> {
    form: &'a BinaryCubicForm,
    small: Option<[i128; 4]>,
}

impl<'a> UnitValueProbe<'a> {
    fn new(form: &'a BinaryCubicForm) -> Self {
        UnitValueProbe {
            form,
            small: form.small_coefficients(),
        }
    }

    fn eval_small(c: &[i128; 4], x: i64, y: i64) -> Option<i128> {
        let (x, y) = (i128::from(x), i128::from(y));
        let (x2, y2) = (x.checked_mul(x)?, y.checked_mul(y)?);
        let terms = [
            c[0].checked_mul(x2.checked_mul(x)?)?,
            c[1].checked_mul(x2.checked_mul(y)?)?,
            c[2].checked_mul(x.checked_mul(y2)?)?,
            c[3].checked_mul(y2.checked_mul(y)?)?,
        ];
        terms.iter().try_fold(0i128, |acc, t| acc.checked_add(*t))
    }

    fn is_unit_at(&self, x: i64, y: i64) -> bool {
        match self.small.as_ref().and_then(|c| Self::eval_small(c, x, y)) {
            Some(v) => v == 1 || v == -1,
            None => self.form.eval_i64(x, y).abs().is_one(),
        }
    }
}

/// Points `(x, y)` with `max(|x|, |y|) = r`, one from each pair `±(x, y)`
/// (`y > 0`, or `y = 0` and `x > 0`), in lexicographic order.
fn shell(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (-r..=r).flat_map(move |x| {
        let ys = if x.abs() == r {
            (if x > 0 { 0 } else { 1 })..=r
        } else {
            r..=r
        };
        ys.map(move |y| (x, y))
    })
}

/// First point with `|form(x, y)| = 1` and `max(|x|, |y|) <= bound`, scanning
/// shells of increasing radius.
pub fn find_unit_value(form: &BinaryCubicForm, bound: u32) -> Option<(i64, i64)> {
    let probe = UnitValueProbe::new(form);
    (1..=i64::from(bound))
        .flat_map(shell)
        .find(|&(x, y)| probe.is_unit_at(x, y))
}

/// `k x^3 - h y^3`.
pub fn index_form_maximal(field: &PureCubicField) -> BinaryCubicForm {
    BinaryCubicForm::new(field.k(), 0, 0, -field.h())
}

fn exact_div(num: BigInt, den: &BigInt, t: &OrderTriple, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::NotAnOrder {
            i: t.i,
            j: t.j,
            beta: t.beta.clone(),
            reason: alloc::format!("coefficient {what} is not integral"),
        });
    }
    Ok(q)
}

/// Index form of the order `t` with respect to its preferred basis.
///
/// Fails with [`Error::NotAnOrder`] when a coefficient is not integral,
/// which cannot happen for an actual order.
pub fn index_form_order(ctx: &PrimeContext, t: &OrderTriple) -> Result<BinaryCubicForm> {
    let f = ctx.field();
    let (k, h) = (f.k_big(), f.h_big());
    let pn = ctx.pow(t.n());
    let pi = ctx.pow(t.i);
    let pi2 = &pi * &pi;
    let beta = &t.beta;
    let beta2 = beta * beta;
    let a = exact_div(k * &pi2 * &pi, &pn, t, "A")?;
    let b = exact_div(k * 3 * &pi2 * beta, &pn, t, "B")?;
    let c = exact_div(k * 3 * &pi * &beta2, &pn, t, "C")?;
    let d = exact_div(k * &beta2 * beta - h * ctx.pow(3 * t.j), &pn, t, "D")?;
    Ok(BinaryCubicForm { a, b, c, d })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonogenicStatus {
    /// `|I(x, y)| = 1` at the witness.
    MonogenicWithWitness { x: i64, y: i64 },
    /// No witness within the search box. Not a proof of non-monogenicity.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonogenicityVerdict {
    pub status: MonogenicStatus,
    pub search_bound: u32,
}

impl MonogenicityVerdict {
    pub fn witness(&self) -> Option<(i64, i64)> {
        match self.status {
            MonogenicStatus::MonogenicWithWitness { x, y } => Some((x, y)),
            MonogenicStatus::Unknown => None,
        }
    }

    pub fn is_monogenic(&self) -> bool {
        self.witness().is_some()
    }
}

/// Searches `|x|, |y| <= bound` for a unit value of the order's index form.
pub fn is_monogenic_bounded(
    ctx: &PrimeContext,
    t: &OrderTriple,
    bound: u32,
) -> Result<MonogenicityVerdict> {
    let form = index_form_order(ctx, t)?;
    let status = match find_unit_value(&form, bound) {
        Some((x, y)) => MonogenicStatus::MonogenicWithWitness { x, y },
        None => MonogenicStatus::Unknown,
    };
    Ok(MonogenicityVerdict {
        status,
        search_bound: bound,
    })
}

/// The generator `x (p^i X) + y (βX + p^j Y)` of the order, for a unit
/// value `(x, y)` of its index form.
pub fn witness_to_generator(
    ctx: &PrimeContext,
    t: &OrderTriple,
    x: &BigInt,
    y: &BigInt,
) -> Result<RingElement> {
    let form = index_form_order(ctx, t)?;
    if !form.eval(x, y).abs().is_one() {
        return Err(Error::BadWitness {
            x: x.clone(),
            y: y.clone(),
        });
    }
    Ok(RingElement::new(
        0,
        x * ctx.pow(t.i) + y * &t.beta,
        y * ctx.pow(t.j),
    ))
}

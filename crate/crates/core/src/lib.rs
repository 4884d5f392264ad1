//! Orders of prime-power index in pure cubic fields `Q(m^(1/3))`.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! - [`field`]: the field datum `m = h k^2` and the integral basis `{1, X, Y}`
//!   with `X = m^(1/3)`, `Y = X^2 / k`.
//! - [`padic`]: valuations, cube-root counts modulo `p` and Hensel lifting.
//! - [`ring`]: exact arithmetic in the ring of integers, lattice membership
//!   and the order generated by a single element.
//! - [`order`]: closure tests, the enumeration of orders of index `p^n` and
//!   the closed counting formula.
//! - [`index_form`]: index forms of orders and a bounded monogenicity search.
//! - [`thue_mahler`]: primitive solutions of `k U^3 - h V^3 = ±p^N` and the
//!   census linking monogenic orders to them.
//!
//! Only the case `m^2 != 1 (mod 9)` and primes `p >= 5` are supported.

#![no_std]
#![deny(rustdoc::broken_intra_doc_links)]

extern crate alloc;

mod error;
pub mod field;
pub mod index_form;
pub mod order;
pub mod padic;
pub mod ring;
pub mod thue_mahler;

pub use error::{Error, Result};
pub use field::{factor_cubefree, make_field, make_prime_context, PrimeContext, PureCubicField};
pub use index_form::{
    index_form_maximal, index_form_order, is_monogenic_bounded, witness_to_generator,
    BinaryCubicForm, MonogenicStatus, MonogenicityVerdict,
};
pub use order::{
    count_orders_formula, cumulative_a, enumerate_orders, CountReport, Method, OrderTriple,
    ScanLimits,
};
pub use padic::{count_cube_roots, lift_cube_roots, nu, Valuation};
pub use ring::{in_order_lattice, order_from_generator, GeneratedOrder, Hnf, RingElement};
pub use thue_mahler::{
    classify_solution, find_primitive_solutions, monogenic_census, orders_from_solution, Census,
    CensusParams, MonogenicCensus, PrimitiveSolution, SolutionCase, SolutionClass, UnitSign,
};

pub use num_bigint::{BigInt, BigUint};

//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact (tolerance 0); there is no floating point anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use cubic_orders::Workers;
use cubic_orders_core::order::cumulative_a_verified;
use cubic_orders_core::{
    count_cube_roots, count_orders_formula, cumulative_a, enumerate_orders, index_form_maximal,
    index_form_order, is_monogenic_bounded, make_field, make_prime_context, order_from_generator,
    orders_from_solution, witness_to_generator, BigInt, BigUint, CensusParams, Method, OrderTriple,
    PrimeContext, RingElement, ScanLimits,
};
use num_bigint::ToBigInt;
use num_rational::BigRational;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const GRID_M: [i64; 7] = [2, 3, 5, 6, 7, 11, 12];
const GRID_P: [u64; 3] = [5, 7, 11];
const GRID_N: u32 = 5;

fn ctx(m: i64, p: u64) -> PrimeContext {
    make_prime_context(&make_field(m).unwrap(), p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1(workers: &Workers) -> Outcome {
    let limits = ScanLimits::default();
    let mut cases = 0;
    for m in GRID_M {
        for p in GRID_P {
            let c = ctx(m, p);
            for n in 0..=GRID_N {
                let formula = count_orders_formula(&c, n);
                let reference = workers
                    .enumerate(&c, n, Method::Oracle, limits)
                    .map_err(|e| e.to_string())?;
                for method in Method::ALL {
                    let got = workers
                        .enumerate(&c, n, method, limits)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        BigUint::from(got.len()) == formula && got == reference,
                        || {
                            format!(
                                "m={m} p={p} n={n} {method}: {} orders, formula {formula}",
                                got.len()
                            )
                        },
                    )?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!(
        "formula = oracle = valuation = closed_form = fast on {cases} (m, p, n) cases"
    ))
}

fn criterion_2() -> Outcome {
    let limits = ScanLimits::default();
    let oracle = |m, p, n| enumerate_orders(&ctx(m, p), n, Method::Oracle, limits).unwrap();
    let a = oracle(5, 5, 3);
    ensure(a.len() == 6, || format!("(5, 5, 3): {} orders", a.len()))?;
    let b = oracle(2, 5, 1);
    ensure(
        b == vec![OrderTriple {
            i: 1,
            j: 0,
            beta: 3.into(),
        }],
        || format!("(2, 5, 1): {b:?}"),
    )?;
    let c = oracle(6, 7, 1);
    ensure(c.len() == 3, || format!("(6, 7, 1): {} orders", c.len()))?;
    for m in GRID_M {
        for p in GRID_P {
            let z = oracle(m, p, 0);
            ensure(z == vec![OrderTriple::maximal()], || {
                format!("(m={m}, p={p}, n=0): {z:?}")
            })?;
            ensure(
                count_orders_formula(&ctx(m, p), 0) == BigUint::from(1u32),
                || format!("formula at n=0, m={m} p={p}"),
            )?;
        }
    }
    Ok("counts 6, 1 with (1, 0, 3), 3, and 1 at n = 0".into())
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_cube_free(m: i64) -> bool {
    let a = m.unsigned_abs();
    a != 0
        && (2..=a)
            .take_while(|q| q * q * q <= a)
            .all(|q| !a.is_multiple_of(q * q * q))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for p in (5..100).filter(|&p| is_prime(p)) {
        for m in (-200i64..=200).filter(|&m| is_cube_free(m)) {
            let brute = (0..p as i64)
                .filter(|x| (x * x * x - m).rem_euclid(p as i64) == 0)
                .count();
            let r = count_cube_roots(m, p).map_err(|e| e.to_string())?;
            ensure(usize::from(r) == brute, || {
                format!("p={p} m={m}: formula {r}, residues {brute}")
            })?;
            cases += 1;
        }
    }
    Ok(format!(
        "cube-root counts match residue scan on {cases} (p, m) pairs"
    ))
}

fn criterion_4(workers: &Workers) -> Outcome {
    let mut cases = 0;
    for m in GRID_M {
        for p in GRID_P {
            let c = ctx(m, p);
            let limits = ScanLimits::default();
            let reports = cumulative_a_verified(&c, GRID_N, |n| {
                Ok(workers.enumerate(&c, n, Method::Oracle, limits)?.len())
            })
            .map_err(|e| e.to_string())?;
            for r in reports {
                let lower = BigUint::from(p).pow(r.n / 3);
                let upper = BigUint::from(p).pow(r.n);
                ensure(lower <= r.cumulative_a && r.cumulative_a <= upper, || {
                    format!(
                        "m={m} p={p} n={}: A = {} outside [{lower}, {upper}]",
                        r.n, r.cumulative_a
                    )
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("p^floor(n/3) <= A <= p^n on {cases} cases"))
}

fn criterion_5() -> Outcome {
    let mut evaluations = 0u64;
    for m in GRID_M {
        for p in GRID_P {
            let c = ctx(m, p);
            let max_form = index_form_maximal(c.field());
            for n in 0..=GRID_N {
                let pn = c.pow(n);
                for t in cubic_orders_core::order::enumerate_fast(&c, n) {
                    let form =
                        index_form_order(&c, &t).map_err(|e| format!("m={m} p={p} {t}: {e}"))?;
                    let (pi, pj) = (c.pow(t.i), c.pow(t.j));
                    for x in -20i64..=20 {
                        for y in -20i64..=20 {
                            let (x, y) = (BigInt::from(x), BigInt::from(y));
                            let lhs = &pn * form.eval(&x, &y);
                            let rhs = max_form.eval(&(&pi * &x + &t.beta * &y), &(&pj * &y));
                            ensure(lhs == rhs, || format!("m={m} p={p} {t} at ({x}, {y})"))?;
                            evaluations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "index-form identity holds, coefficients integral, {evaluations} evaluations"
    ))
}

fn criterion_6() -> Outcome {
    let c = ctx(5, 5);
    let t = OrderTriple {
        i: 1,
        j: 0,
        beta: 0.into(),
    };
    let verdict = is_monogenic_bounded(&c, &t, 50).map_err(|e| e.to_string())?;
    ensure(verdict.witness() == Some((0, 1)), || {
        format!("(5, 5) {t}: {verdict:?}")
    })?;
    let xi = witness_to_generator(&c, &t, &0.into(), &1.into()).map_err(|e| e.to_string())?;
    let generated = order_from_generator(&xi, c.field()).map_err(|e| e.to_string())?;
    ensure(generated.index == BigInt::from(5), || {
        format!("index of Z[xi] = {}", generated.index)
    })?;
    ensure(generated.hnf.to_triple(&c) == Some(t.clone()), || {
        format!("HNF {:?}", generated.hnf)
    })?;

    let mut fields = 0;
    for m in [2i64, 3, 5, 6, 7, 11, 13, 14, 15, 21, 22, 23] {
        let f = make_field(m).unwrap();
        if f.k() != 1 {
            continue;
        }
        let c = make_prime_context(&f, 5).unwrap();
        let v = is_monogenic_bounded(&c, &OrderTriple::maximal(), 50).map_err(|e| e.to_string())?;
        ensure(v.witness() == Some((1, 0)), || {
            format!("maximal order of m={m}: {v:?}")
        })?;
        fields += 1;
    }
    Ok(format!("(1, 0, 0) for m = p = 5 via (0, 1) and Z[xi] round trip; {fields} maximal orders via (1, 0)"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for m in [2i64, 5] {
        let c = ctx(m, 5);
        let levels: BTreeMap<u32, BTreeSet<OrderTriple>> = (0..=5)
            .map(|n| {
                (
                    n,
                    enumerate_orders(&c, n, Method::Oracle, ScanLimits::default())
                        .unwrap()
                        .into_iter()
                        .collect(),
                )
            })
            .collect();
        for c1 in -30i64..=30 {
            for c2 in -30i64..=30 {
                if c1 == 0 && c2 == 0 {
                    continue;
                }
                let xi = RingElement::new(0, c1, c2);
                let g = order_from_generator(&xi, c.field()).map_err(|e| e.to_string())?;
                let Some(n) = power_of(&g.index, 5).filter(|&n| n <= 5) else {
                    continue;
                };
                let t = g
                    .hnf
                    .to_triple(&c)
                    .ok_or_else(|| format!("m={m} xi={xi}: HNF {:?} is not a triple", g.hnf))?;
                ensure(levels[&n].contains(&t), || {
                    format!("m={m} xi={xi}: {t} missing at n={n}")
                })?;
                let v = is_monogenic_bounded(&c, &t, 50).map_err(|e| e.to_string())?;
                ensure(v.is_monogenic(), || {
                    format!("m={m} xi={xi}: no witness for {t}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} generators of 5-power index land in the enumeration and are found monogenic"
    ))
}

fn power_of(x: &BigInt, p: u64) -> Option<u32> {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut n = 0;
    while &x % &p == BigInt::from(0) {
        x /= &p;
        n += 1;
    }
    (x == BigInt::from(1)).then_some(n)
}

fn criterion_8(workers: &Workers) -> Outcome {
    let params = CensusParams {
        n_max: 9,
        search_bound: 50,
        tm_height: 200,
        tm_n_max: 12,
    };
    let mut found = 0;
    for m in [2i64, 5] {
        for p in [5u64, 7] {
            let c = ctx(m, p);
            let census = workers
                .census(&c, &params)
                .map_err(|e| format!("m={m} p={p}: {e}"))?;
            for level in &census.levels {
                let mut per_solution = BTreeMap::new();
                for (t, _) in &level.orders_found {
                    let s = level
                        .linked_solutions
                        .get(t)
                        .ok_or_else(|| format!("m={m} p={p} {t} not linked"))?;
                    let back = orders_from_solution(s, &c, level.n);
                    ensure(back.iter().any(|(o, _, _)| o == t), || {
                        format!("m={m} p={p}: {s} does not reach {t}")
                    })?;
                    *per_solution.entry(s.clone()).or_insert(0) += 1;
                    found += 1;
                }
                if let Some((s, k)) = per_solution.iter().find(|(_, &k)| k > 2) {
                    return Err(format!(
                        "m={m} p={p} n={}: {s} links to {k} orders",
                        level.n
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{found} monogenic orders linked, at most 2 per (solution, n)"
    ))
}

fn criterion_9(workers: &Workers) -> Outcome {
    let n_max = 12;
    let c = ctx(2, 5);
    let params = CensusParams {
        search_bound: 50,
        tm_height: 200,
        tm_n_max: 12,
        ..CensusParams::new(n_max)
    };
    let census = workers.census(&c, &params).map_err(|e| e.to_string())?;
    let counts = cumulative_a(&c, n_max);
    let ratios: Vec<BigRational> = census
        .levels
        .iter()
        .zip(&counts)
        .map(|(l, a)| BigRational::new(l.cumulative_b.into(), a.cumulative_a.to_bigint().unwrap()))
        .collect();
    println!("      n  A  B  B/A");
    for ((l, a), r) in census.levels.iter().zip(&counts).zip(&ratios) {
        println!(
            "      {} {} {} {}/{}",
            l.n,
            a.cumulative_a,
            l.cumulative_b,
            r.numer(),
            r.denom()
        );
    }
    let a12 = &counts[12].cumulative_a;
    let b = census.cumulative_b();
    let bound = 2 * (u64::from(n_max) + 1) * census.g_found() as u64;
    ensure(*a12 >= BigUint::from(625u32), || {
        format!("A_12 = {a12} < 625")
    })?;
    ensure(b <= bound, || {
        format!("B = {b} exceeds 2 (n_max + 1) g_found = {bound}")
    })?;
    ensure(ratios[12] < ratios[3], || {
        format!(
            "B/A at 12 = {} not below B/A at 3 = {}",
            ratios[12], ratios[3]
        )
    })?;
    Ok(format!(
        "A_12 = {a12} >= 625, B = {b} <= {bound}, B/A falls from {} to {}",
        ratios[3], ratios[12]
    ))
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cubic-orders"))
        .args(args)
        .env("CUBIC_ORDERS_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited with {}", out.status)
    })?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let commands: [&[&str]; 7] = [
        &["count", "--m", "6", "--p", "7", "--n", "5", "--verify-scan"],
        &[
            "enumerate",
            "--m",
            "2",
            "--p",
            "7",
            "--n",
            "5",
            "--method",
            "oracle",
        ],
        &[
            "enumerate",
            "--m",
            "12",
            "--p",
            "5",
            "--n",
            "9",
            "--format",
            "json",
        ],
        &["monogenic", "--m", "2", "--p", "5", "--n-max", "8"],
        &[
            "monogenic",
            "--m",
            "5",
            "--p",
            "7",
            "--n-max",
            "6",
            "--format",
            "text",
        ],
        &[
            "thue-mahler",
            "--m",
            "2",
            "--p",
            "5",
            "--tm-height",
            "100",
            "--tm-nmax",
            "10",
        ],
        &["verify", "--m", "2,6", "--p", "5,7", "--n-max", "3"],
    ];
    for args in commands {
        let reference = run_cli(args, "1")?;
        ensure(!reference.is_empty(), || {
            format!("{args:?} printed nothing")
        })?;
        for threads in ["1", "2", "4", "0"] {
            let again = run_cli(args, threads)?;
            ensure(again == reference, || {
                format!("{args:?} differs with {threads} threads")
            })?;
        }
    }
    Ok(format!(
        "{} commands byte-identical across 1, 2, 4 and auto threads",
        commands.len()
    ))
}

fn main() {
    let workers = Workers::new(0);
    let criteria: Vec<Criterion> = vec![
        (
            "formula, oracle and classifiers agree",
            Box::new(|| criterion_1(&workers)),
        ),
        ("spot counts", Box::new(criterion_2)),
        ("cube-root counts", Box::new(criterion_3)),
        (
            "cumulative count bounds",
            Box::new(|| criterion_4(&workers)),
        ),
        ("index-form identity", Box::new(criterion_5)),
        ("monogenicity spot checks", Box::new(criterion_6)),
        ("Z[xi] cross-check", Box::new(criterion_7)),
        ("solution multiplicity", Box::new(|| criterion_8(&workers))),
        ("B/A trend", Box::new(|| criterion_9(&workers))),
        ("CLI determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!(
                "PASS criterion {:2} {name} [tolerance: exact] ({secs:.1}s): {detail}",
                k + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {:2} {name} [tolerance: exact] ({secs:.1}s): {detail}",
                    k + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

//! The subcommands. Each builds a [`Document`]; [`run`] renders it and maps
//! failures to exit codes.

use std::io::Write as _;

use cubic_orders_core::order::{
    classify_closed_form, classify_valuation, cumulative_a_verified, enumerate_fast,
    is_closed_oracle,
};
use cubic_orders_core::{
    classify_solution, count_orders_formula, cumulative_a, find_primitive_solutions,
    index_form_maximal, index_form_order, make_field, make_prime_context, BigInt, CensusParams,
    OrderTriple, PrimeContext, ScanLimits,
};
use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::args::{
    Cli, Command, CountArgs, EnumerateArgs, FieldArgs, MonogenicArgs, OutputArgs, ThueMahlerArgs,
    VerifyArgs,
};
use crate::par::{beta_blocks, Workers};
use crate::table::{Cell, Document, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cubic_orders_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        }
    }
}

/// A rendered command result; `passed` is false when `verify` found a failure.
pub struct Outcome {
    pub document: Document,
    pub passed: bool,
}

fn context(field: &FieldArgs) -> Result<PrimeContext, CliError> {
    Ok(make_prime_context(&make_field(field.m)?, field.p)?)
}

fn field_cells(doc: &mut Document, field: &FieldArgs) {
    doc.fields.push(("m", Cell::int(field.m)));
    doc.fields.push(("p", Cell::int(field.p)));
}

pub fn count(args: &CountArgs, workers: &Workers) -> Result<Document, CliError> {
    let ctx = context(&args.field)?;
    let reports = if args.verify_scan {
        let limits = ScanLimits {
            n_scan_max: args.scan_max,
        };
        cumulative_a_verified(&ctx, args.n, |n| {
            Ok(workers.enumerate(&ctx, n, args.method, limits)?.len())
        })?
    } else {
        cumulative_a(&ctx, args.n)
    };
    let mut table = Table::new(
        "counts",
        &["n", "count_formula", "count_scan", "cumulative_A"],
    );
    for r in reports {
        table.push(vec![
            Cell::int(r.n),
            Cell::int(r.by_formula),
            Cell::opt_int(r.by_scan),
            Cell::int(r.cumulative_a),
        ]);
    }
    let mut doc = Document::new("count");
    field_cells(&mut doc, &args.field);
    if args.verify_scan {
        doc.fields
            .push(("scan_method", Cell::text(args.method.name())));
    }
    doc.tables.push(table);
    Ok(doc)
}

pub fn enumerate(args: &EnumerateArgs, workers: &Workers) -> Result<Document, CliError> {
    let ctx = context(&args.field)?;
    let orders = workers.enumerate(
        &ctx,
        args.n,
        args.method,
        ScanLimits {
            n_scan_max: args.scan_max,
        },
    )?;
    let mut table = Table::new(
        "orders",
        &[
            "n", "i", "j", "beta", "A_coeff", "B_coeff", "C_coeff", "D_coeff",
        ],
    );
    for t in &orders {
        let form = index_form_order(&ctx, t)?;
        let mut row = vec![
            Cell::int(t.n()),
            Cell::int(t.i),
            Cell::int(t.j),
            Cell::int(&t.beta),
        ];
        row.extend(form.coefficients().into_iter().map(Cell::int));
        table.push(row);
    }
    let mut doc = Document::new("enumerate");
    field_cells(&mut doc, &args.field);
    doc.fields.push(("method", Cell::text(args.method.name())));
    doc.tables.push(table);
    Ok(doc)
}

/// `b/a` in lowest terms, always with a denominator.
fn ratio_string(b: u64, a: &BigUint) -> String {
    let r = Ratio::new(BigInt::from(b), BigInt::from(a.clone()));
    format!("{}/{}", r.numer(), r.denom())
}

pub fn monogenic(args: &MonogenicArgs, workers: &Workers) -> Result<Document, CliError> {
    let ctx = context(&args.field)?;
    let params = CensusParams {
        n_max: args.n_max,
        search_bound: args.search_bound,
        tm_height: args.tm_height,
        tm_n_max: args.tm_nmax,
    };
    let census = workers.census(&ctx, &params)?;
    let counts = cumulative_a(&ctx, args.n_max);

    let mut levels = Table::new(
        "levels",
        &[
            "n",
            "count_orders",
            "count_monogenic_found",
            "cumulative_A",
            "cumulative_B",
            "ratio",
        ],
    );
    let mut linked = Table::new(
        "linked_solutions",
        &[
            "n",
            "i",
            "j",
            "beta",
            "witness_x",
            "witness_y",
            "U",
            "V",
            "N",
            "sign",
            "case",
        ],
    );
    for (level, count) in census.levels.iter().zip(&counts) {
        levels.push(vec![
            Cell::int(level.n),
            Cell::int(level.orders_total),
            Cell::int(level.orders_found.len()),
            Cell::int(&count.cumulative_a),
            Cell::int(level.cumulative_b),
            Cell::text(ratio_string(level.cumulative_b, &count.cumulative_a)),
        ]);
        for (t, (x, y)) in &level.orders_found {
            let s = &level.linked_solutions[t];
            let class = classify_solution(s, &ctx)?;
            linked.push(vec![
                Cell::int(level.n),
                Cell::int(t.i),
                Cell::int(t.j),
                Cell::int(&t.beta),
                Cell::int(x),
                Cell::int(y),
                Cell::int(&s.u),
                Cell::int(&s.v),
                Cell::int(s.n),
                Cell::text(s.sign.symbol()),
                Cell::text(class.case.label()),
            ]);
        }
    }
    let mut doc = Document::new("monogenic");
    field_cells(&mut doc, &args.field);
    doc.fields
        .push(("search_bound", Cell::int(args.search_bound)));
    doc.fields.push(("tm_height", Cell::int(args.tm_height)));
    doc.fields.push(("tm_nmax", Cell::int(args.tm_nmax)));
    doc.fields.push(("g_found", Cell::int(census.g_found())));
    doc.fields
        .push(("linked_distinct", Cell::int(census.distinct_linked().len())));
    doc.fields
        .push(("max_linked_N", Cell::opt_int(census.max_linked_n())));
    doc.tables.push(levels);
    doc.tables.push(linked);
    Ok(doc)
}

pub fn thue_mahler(args: &ThueMahlerArgs) -> Result<Document, CliError> {
    let ctx = context(&args.field)?;
    let mut table = Table::new("solutions", &["U", "V", "N", "sign", "case", "a", "b"]);
    for s in find_primitive_solutions(&ctx, args.tm_height, args.tm_nmax) {
        let class = classify_solution(&s, &ctx)?;
        table.push(vec![
            Cell::int(&s.u),
            Cell::int(&s.v),
            Cell::int(s.n),
            Cell::text(s.sign.symbol()),
            Cell::text(class.case.label()),
            Cell::opt_int(class.a),
            Cell::opt_int(class.b),
        ]);
    }
    let mut doc = Document::new("thue-mahler");
    field_cells(&mut doc, &args.field);
    doc.fields.push(("tm_height", Cell::int(args.tm_height)));
    doc.fields.push(("tm_nmax", Cell::int(args.tm_nmax)));
    doc.tables.push(table);
    Ok(doc)
}

/// Misjudges the lattice `(1, n - 1, 1)` at every level `n >= 1`.
fn corrupted_closed_form(ctx: &PrimeContext, t: &OrderTriple) -> bool {
    classify_closed_form(ctx, t) != (t.i == 1 && t.beta == BigInt::from(1))
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

const PROPERTIES: [&str; 5] = [
    "classifiers_agree",
    "formula_equals_scan",
    "fast_equals_scan",
    "count_bounds",
    "index_form_identity",
];

pub fn verify(args: &VerifyArgs, workers: &Workers) -> Result<Outcome, CliError> {
    let closed_form = if args.corrupt_classifier {
        corrupted_closed_form
    } else {
        classify_closed_form
    };
    let limits = ScanLimits {
        n_scan_max: args.scan_max,
    };
    let mut tallies: Vec<Tally> = PROPERTIES.iter().map(|_| Tally::default()).collect();
    let mut grid = 0u64;
    for &m in &args.m {
        for &p in &args.p {
            let ctx = context(&FieldArgs { m, p })?;
            grid += 1;
            let mut cumulative = BigUint::from(0u32);
            for n in 0..=args.n_max {
                limits.check(&ctx, n)?;
                let (mut accepted, agree) = workers.install(|| {
                    beta_blocks(&ctx, n)
                        .into_par_iter()
                        .map(|(i, betas)| {
                            let mut tally = Tally::default();
                            let mut found = Vec::new();
                            let mut t = OrderTriple {
                                i,
                                j: n - i,
                                beta: BigInt::from(betas.start),
                            };
                            for _ in betas {
                                let o = is_closed_oracle(&ctx, &t);
                                let v = classify_valuation(&ctx, &t);
                                let c = closed_form(&ctx, &t);
                                tally.record(o == v && v == c, || {
                                    format!(
                                        "m={m} p={p} {t}: oracle={o} valuation={v} closed_form={c}"
                                    )
                                });
                                if o {
                                    found.push(t.clone());
                                }
                                t.beta += 1u32;
                            }
                            (found, tally)
                        })
                        .reduce(
                            || (Vec::new(), Tally::default()),
                            |(mut a, mut ta), (b, tb)| {
                                a.extend(b);
                                ta.merge(tb);
                                (a, ta)
                            },
                        )
                });
                accepted.sort();
                tallies[0].merge(agree);

                let formula = count_orders_formula(&ctx, n);
                tallies[1].record(formula == BigUint::from(accepted.len()), || {
                    format!(
                        "m={m} p={p} n={n}: formula={formula} scan={}",
                        accepted.len()
                    )
                });

                let fast = enumerate_fast(&ctx, n);
                tallies[2].record(fast == accepted, || {
                    format!(
                        "m={m} p={p} n={n}: fast={} scan={}",
                        fast.len(),
                        accepted.len()
                    )
                });

                let lower = BigUint::from(p).pow(n / 3);
                let upper = BigUint::from(p).pow(n);
                cumulative += &formula;
                tallies[3].record(lower <= cumulative && cumulative <= upper, || {
                    format!("m={m} p={p} n={n}: cumulative count {cumulative} outside [{lower}, {upper}]")
                });

                let max_form = index_form_maximal(ctx.field());
                let pn = ctx.pow(n);
                for t in &fast {
                    let ok = match index_form_order(&ctx, t) {
                        Ok(form) => (-2i64..=2).all(|x| {
                            (-2i64..=2).all(|y| {
                                let (x, y) = (BigInt::from(x), BigInt::from(y));
                                let u = ctx.pow(t.i) * &x + &t.beta * &y;
                                let v = ctx.pow(t.j) * &y;
                                &pn * form.eval(&x, &y) == max_form.eval(&u, &v)
                            })
                        }),
                        Err(_) => false,
                    };
                    tallies[4].record(ok, || format!("m={m} p={p} order {t}"));
                }
            }
        }
    }

    let mut table = Table::new(
        "properties",
        &["property", "cases", "failures", "status", "first_failure"],
    );
    for (name, t) in PROPERTIES.iter().zip(&tallies) {
        table.push(vec![
            Cell::text(*name),
            Cell::int(t.cases),
            Cell::int(t.failures),
            Cell::text(if t.failures == 0 { "PASS" } else { "FAIL" }),
            t.first.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    let passed = tallies.iter().all(|t| t.failures == 0);
    let mut doc = Document::new("verify");
    doc.fields.push(("grid_points", Cell::int(grid)));
    doc.fields.push(("n_max", Cell::int(args.n_max)));
    doc.fields
        .push(("result", Cell::text(if passed { "PASS" } else { "FAIL" })));
    doc.tables.push(table);
    if grid == 0 {
        eprintln!("warning: no cases");
    }
    Ok(Outcome {
        document: doc,
        passed,
    })
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Count(a) => &a.output,
        Command::Enumerate(a) => &a.output,
        Command::Monogenic(a) => &a.output,
        Command::ThueMahler(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

pub fn execute(cli: &Cli, workers: &Workers) -> Result<Outcome, CliError> {
    let document = match &cli.command {
        Command::Count(a) => count(a, workers)?,
        Command::Enumerate(a) => enumerate(a, workers)?,
        Command::Monogenic(a) => monogenic(a, workers)?,
        Command::ThueMahler(a) => thue_mahler(a)?,
        Command::Verify(a) => return verify(a, workers),
    };
    Ok(Outcome {
        document,
        passed: true,
    })
}

fn emit(text: &str, output: &OutputArgs) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = Workers::from_env()
        .map_err(CliError::Input)
        .and_then(|workers| {
            let outcome = execute(cli, &workers)?;
            let output = output_args(&cli.command);
            emit(&outcome.document.render(output.format), output)?;
            Ok(outcome.passed)
        });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("error: verification failed");
            EXIT_INCONSISTENT
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

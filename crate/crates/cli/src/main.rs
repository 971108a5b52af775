use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grasshopper_core::caseproof::{self, EventSet, TABLE3_KNOWN_TYPOS};
use grasshopper_core::grids::{self, Coverage, GridReport, DEFAULT_SEED};
use grasshopper_core::nullstellensatz::{self, CheckStatus};
use grasshopper_core::oracle;
use grasshopper_core::solver::{self, parse_list, Instance, RawInstance, SumPolicy};
use num_rational::BigRational;

/// Exact checks and solvers for the grasshopper jump-ordering problem.
#[derive(Parser)]
#[command(name = "grasshopper", version)]
struct Cli {
    /// Tab-separated output, one record per line.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the signed permutation sum F_n in canonical form.
    Antisym {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        n: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the factorization and coefficient checks for one n.
    FactorCheck {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
        n: u8,
    },
    /// Print a safe order found by the inductive solver.
    Solve {
        #[command(flatten)]
        input: InstanceArgs,
        /// Also print the case taken at each recursion level.
        #[arg(long)]
        trace: bool,
    },
    /// Print every safe order, or only their count.
    Oracle {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        count_only: bool,
    },
    /// Print the coincidence events holding at four increasing lengths.
    Events {
        #[arg(long)]
        lengths: String,
    },
    /// Reproduce the compatibility matrix, the record tables and the cover searches.
    VerifyTables,
    /// Report whether all subset sums are distinct.
    SubsetSums {
        #[arg(long)]
        lengths: String,
    },
    /// Report whether (a, m) lies on the singular set of the n = 3 or n = 4 quotient.
    Singular {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        n: u8,
        #[arg(long)]
        lengths: String,
        #[arg(long)]
        blocked: String,
    },
    /// Run one of the instance grids.
    Grid {
        #[command(subcommand)]
        which: GridCommand,
    },
}

#[derive(Subcommand)]
enum GridCommand {
    /// All n = 3 instances with lengths in 1..=9 and blocked points in 1..=17,
    /// then seeded samples at n = 6 and 7.
    Existence,
    /// Solver against oracle for n ≤ 5 and lengths in 1..=8.
    Solver {
        /// Only run this many of the 56 n = 5 length sets.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Random instances with distinct subset sums, plus the prefix-set count.
    Bound {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, conflicts_with = "instance", requires = "blocked")]
    lengths: Option<String>,
    #[arg(long, conflicts_with = "instance", requires = "lengths")]
    blocked: Option<String>,
    /// File with `lengths:` and `blocked:` lines.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Reject a blocked point equal to the total.
    #[arg(long)]
    strict: bool,
}

enum Failure {
    Mismatch,
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input_err(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

fn list(text: &str) -> Result<Vec<BigRational>, Failure> {
    parse_list(text).map_err(Failure::Input)
}

fn load(args: &InstanceArgs) -> Result<Instance, Failure> {
    let raw = match (&args.instance, &args.lengths, &args.blocked) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            RawInstance::parse(&text).map_err(|e| input_err(format!("[{}] {e}", e.code())))?
        }
        (None, Some(l), Some(b)) => RawInstance::new(list(l)?, list(b)?),
        _ => return Err(input_err("give --lengths and --blocked, or --instance")),
    };
    let policy = if args.strict {
        SumPolicy::Reject
    } else {
        SumPolicy::Allow
    };
    let inst = raw
        .validate_with(policy)
        .map_err(|e| input_err(format!("[{}] {e}", e.code())))?;
    if inst.blocked().contains(inst.sum()) {
        eprintln!(
            "note: blocked point {} equals the total; the final landing is not checked",
            inst.sum()
        );
    }
    Ok(inst)
}

struct Out {
    machine: bool,
    w: io::BufWriter<io::Stdout>,
}

impl Out {
    /// Writes `human` normally, or the fields joined by tabs under `--machine`.
    fn line(&mut self, human: impl AsRef<str>, fields: &[&str]) {
        let r = if self.machine {
            writeln!(self.w, "{}", fields.join("\t"))
        } else {
            writeln!(self.w, "{}", human.as_ref())
        };
        r.expect("stdout");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out {
        machine: cli.machine,
        w: io::BufWriter::new(io::stdout()),
    };
    let result = run(cli.command, &mut out);
    out.w.flush().expect("stdout");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut Out) -> Outcome {
    match command {
        Command::Antisym { n, out: path } => antisym(n as usize, path, out),
        Command::FactorCheck { n } => factor_check(n as usize, out),
        Command::Solve { input, trace } => solve(&input, trace, out),
        Command::Oracle { input, count_only } => oracle_cmd(&input, count_only, out),
        Command::Events { lengths } => {
            let set = caseproof::detect_events(&list(&lengths)?).map_err(input_err)?;
            let text = if set.is_empty() {
                "none".to_string()
            } else {
                set.to_string()
            };
            out.line(&text, &["EVENTS", &set.codes().iter().map(|c| c.name()).collect::<Vec<_>>().join(",")]);
            Ok(())
        }
        Command::VerifyTables => verify_tables(out),
        Command::SubsetSums { lengths } => {
            let l = list(&lengths)?;
            match oracle::subset_sum_collision(&l).map_err(input_err)? {
                None => out.line("distinct", &["DISTINCT", "true"]),
                Some((a, b)) => {
                    let side = |ix: &[usize]| {
                        ix.iter().map(|&i| l[i].to_string()).collect::<Vec<_>>().join("+")
                    };
                    let (sa, sb) = (side(&a), side(&b));
                    out.line(
                        format!("collision {sa} = {sb}"),
                        &["DISTINCT", "false", &sa, &sb],
                    );
                }
            }
            Ok(())
        }
        Command::Singular { n, lengths, blocked } => {
            let s = nullstellensatz::is_singular(n as usize, &list(&lengths)?, &list(&blocked)?)
                .map_err(input_err)?;
            out.line(format!("singular={s}"), &["SINGULAR", &s.to_string()]);
            Ok(())
        }
        Command::Grid { which } => grid(which, out),
    }
}

fn antisym(n: usize, path: Option<PathBuf>, out: &mut Out) -> Outcome {
    let f = nullstellensatz::antisymmetrize(n).map_err(input_err)?;
    let text = f.to_string();
    match path {
        Some(p) => {
            fs::write(&p, format!("{text}\n")).map_err(|e| input_err(format!("{}: {e}", p.display())))?;
            let terms = f.len().to_string();
            out.line(format!("wrote {} terms to {}", terms, p.display()), &["WROTE", &terms]);
        }
        None => out.line(&text, &[&text]),
    }
    Ok(())
}

fn factor_check(n: usize, out: &mut Out) -> Outcome {
    let checks = nullstellensatz::factor_checks(n).map_err(input_err)?;
    let mut failed = false;
    for c in &checks {
        failed |= c.failed();
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Note => "NOTE",
        };
        out.line(c.to_string(), &["CHECK", &c.name, status, &c.detail]);
    }
    if failed {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn solve(input: &InstanceArgs, trace: bool, out: &mut Out) -> Outcome {
    let inst = load(input)?;
    let (order, t) = solver::solve_traced(&inst).map_err(|e| {
        eprintln!("{e}");
        Failure::Mismatch
    })?;
    let joined = order.order.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    out.line(order.to_string(), &["ORDER", &joined]);
    if trace {
        for (depth, level) in t.levels.iter().enumerate() {
            let d = depth.to_string();
            let case = level.case.letter().to_string();
            let size = level.size.to_string();
            let cmp = level.comparisons.to_string();
            out.line(
                format!("level {d}: case {case}, {size} lengths, {cmp} comparisons"),
                &["LEVEL", &d, &case, &size, &cmp],
            );
        }
    }
    Ok(())
}

fn oracle_cmd(input: &InstanceArgs, count_only: bool, out: &mut Out) -> Outcome {
    let inst = load(input)?;
    if count_only {
        let n = inst.n();
        if n > oracle::MAX_BOUND_N {
            let safe = oracle::count_safe_orders(&inst).map_err(input_err)?;
            let s = safe.to_string();
            out.line(format!("safe={s}"), &["SAFE", &s]);
            return Ok(());
        }
        let r = oracle::theorem2_bound_check(&inst).map_err(input_err)?;
        let (s, t, b) = (r.safe.to_string(), r.total.to_string(), r.bound.to_string());
        out.line(r.to_string(), &["SAFE", &s, &t, &b, &r.applicable.to_string()]);
        return if r.holds() { Ok(()) } else { Err(Failure::Mismatch) };
    }
    for o in oracle::enumerate_safe_orders(&inst).map_err(input_err)? {
        let joined = o.order.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        out.line(o.to_string(), &["ORDER", &joined]);
    }
    Ok(())
}

fn verify_tables(out: &mut Out) -> Outcome {
    let mut ok = true;

    let t2 = caseproof::verify_table2();
    for e in &t2.entries {
        out.line(
            e.to_string(),
            &[
                "TABLE2",
                e.p.name(),
                e.q.name(),
                e.computed.name(),
                e.printed.name(),
                if e.matches() { "MATCH" } else { "MISMATCH" },
            ],
        );
    }
    let sym = format!(
        "computed-symmetric={} printed-symmetric={}",
        t2.computed_symmetric, t2.printed_symmetric
    );
    out.line(format!("TABLE2-SUMMARY mismatches={} {sym}", t2.mismatches()), &["TABLE2-SUMMARY", &t2.mismatches().to_string(), &sym]);
    ok &= t2.all_match();

    for r in caseproof::verify_table3() {
        let status = if r.matches {
            "MATCH"
        } else if TABLE3_KNOWN_TYPOS.contains(&r.row) {
            "KNOWN-TYPO"
        } else {
            ok = false;
            "MISMATCH"
        };
        out.line(
            r.to_string(),
            &["TABLE3", &r.row.to_string(), &r.computed.join(","), &r.printed.join(","), status],
        );
    }

    let case = EventSet::from_codes(&[
        caseproof::EventCode::A1,
        caseproof::EventCode::A2,
        caseproof::EventCode::C1,
        caseproof::EventCode::C2,
        caseproof::EventCode::E,
    ]);
    match caseproof::relabel(case) {
        Ok(t) => {
            let verdict = caseproof::same_pattern(&t, &caseproof::PRINTED_TABLE4);
            let status = match verdict {
                Ok(()) => "MATCH".to_string(),
                Err(row) => {
                    ok = false;
                    format!("MISMATCH row {row}")
                }
            };
            let classes = t.classes.len().to_string();
            out.line(
                format!("TABLE4 {} classes={classes} {status}", case.paren()),
                &["TABLE4", &case.paren(), &classes, &status],
            );
        }
        Err(e) => {
            ok = false;
            out.line(format!("TABLE4 {} ERROR {e}", case.paren()), &["TABLE4", &case.paren(), "ERROR", &e.to_string()]);
        }
    }

    match caseproof::undetermined_pairs() {
        Ok(pairs) => {
            for p in &pairs {
                let (l, r) = (caseproof::expr_name(p.lhs), caseproof::expr_name(p.rhs));
                out.line(format!("PAIR {p}"), &["PAIR", &l, &r, p.event.name()]);
            }
            ok &= pairs.len() == 10;
        }
        Err(e) => {
            ok = false;
            out.line(format!("PAIR ERROR {e}"), &["PAIR", "ERROR", &e.to_string()]);
        }
    }

    let reports = caseproof::combo_reports().map_err(|e| {
        eprintln!("{e}");
        Failure::Mismatch
    })?;
    for r in &reports {
        ok &= r.cover.is_none();
        let cover = r.cover.as_ref().map_or("NONE".to_string(), |c| c.join(";"));
        let w = r.witness.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        out.line(
            r.to_string(),
            &["COMBO", &r.events.paren(), &cover, &r.classes.to_string(), &w, &r.listed.to_string()],
        );
    }
    let found: Vec<EventSet> = reports.iter().map(|r| r.events).collect();
    let missing: Vec<String> = caseproof::printed_combos()
        .into_iter()
        .filter(|c| !found.contains(c))
        .map(|c| c.paren())
        .collect();
    let extra: Vec<String> = reports.iter().filter(|r| !r.listed).map(|r| r.events.paren()).collect();
    ok &= missing.is_empty();
    let (m, x) = (missing.join(" "), extra.join(" "));
    out.line(
        format!("COMBOS feasible={} missing=[{m}] unlisted=[{x}]", reports.len()),
        &["COMBOS", &reports.len().to_string(), &m, &x],
    );

    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn grid(which: GridCommand, out: &mut Out) -> Outcome {
    let reports: Vec<GridReport> = match which {
        GridCommand::Existence => vec![
            grids::existence_grid(),
            grids::existence_sample(&[6, 7], 40, DEFAULT_SEED),
        ],
        GridCommand::Solver { sample, seed } => {
            let cov = match sample {
                Some(length_sets) => Coverage::Sample { length_sets, seed },
                None => Coverage::Full,
            };
            vec![grids::solver_grid(5, cov)]
        }
        GridCommand::Bound { count, seed } => {
            vec![grids::bound_sample(count, seed), grids::prefix_count_grid(6)]
        }
    };
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        for f in r.failures.iter().take(20) {
            eprintln!("{}: {f}", r.label);
        }
        out.line(
            r.to_string(),
            &[
                "GRID",
                &r.label,
                &r.instances.to_string(),
                &r.failures.len().to_string(),
                if r.passed() { "PASS" } else { "FAIL" },
            ],
        );
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

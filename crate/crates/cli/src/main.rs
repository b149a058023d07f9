//! `spinchain`: command-line front end for generator construction, CAR checks,
//! Lie closures and pulse-schedule rotations.
//!
//! Exit codes: 0 success (or the checked claim holds), 1 the checked claim
//! fails, 2 usage or input error. JSON output has sorted keys.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use spinchain::{
    build_bus, build_e, check_universality, run_schedule, so_membership, verify_car,
    verify_car_with, BusId, GeneratorRef, PauliString, PauliWord, PulseSchedule,
};

#[derive(Parser, Debug)]
#[command(name = "spinchain", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Numeric tolerance for membership and unitarity checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Seed for randomized commands; required by them.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    E,
    D,
    Third,
    Chirality,
    Bus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PauliOp {
    Mul,
    Commutes,
    Commutator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named generator or a control bus.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Generator index for `e` and `d`.
        #[arg(long)]
        k: Option<usize>,
        /// Bus id (I, II or III) for `bus`.
        #[arg(long)]
        id: Option<String>,
    },
    /// Check the anticommutation relations of the ladder operators.
    Car {
        #[arg(long)]
        n: usize,
        /// Replace e_1 by the identity before checking (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Lie closure of buses and/or explicit generators.
    Closure {
        #[arg(long)]
        n: usize,
        /// Comma-separated bus ids, e.g. `I,II`.
        #[arg(long, value_delimiter = ',')]
        bus: Vec<String>,
        /// Comma-separated generator refs: `e0`, `d3`, `third`, `chirality` or Pauli literals.
        #[arg(long, value_delimiter = ',')]
        gen: Vec<String>,
        /// Exit with 1 unless the closure is all of su(2^n).
        #[arg(long)]
        check_universal: bool,
    },
    /// Run a pulse-schedule file: unitary, membership and rotation.
    ///
    /// Pulses are applied in list order, so the first pulse is the rightmost factor.
    Schedule { file: PathBuf },
    /// Emit a random schedule over buses I and II (needs `--seed`).
    RandomSchedule {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        pulses: usize,
    },
    /// Pauli string arithmetic.
    Pauli {
        op: PauliOp,
        left: String,
        right: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

struct Report {
    json: Value,
    table: Vec<(String, String)>,
    code: u8,
}

impl Report {
    fn ok(json: Value, table: Vec<(String, String)>) -> Self {
        Report {
            json,
            table,
            code: 0,
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        bail!("--tolerance must be positive");
    }
    let report = match &cli.command {
        Command::Gen { kind, n, k, id } => cmd_gen(*kind, *n, *k, id.as_deref())?,
        Command::Car { n, inject_fault } => cmd_car(*n, *inject_fault)?,
        Command::Closure {
            n,
            bus,
            gen,
            check_universal,
        } => cmd_closure(*n, bus, gen, *check_universal)?,
        Command::Schedule { file } => cmd_schedule(file, cli.tolerance)?,
        Command::RandomSchedule { n, pulses } => {
            let Some(seed) = cli.seed else {
                bail!("random-schedule requires --seed");
            };
            cmd_random_schedule(*n, *pulses, seed)?
        }
        Command::Pauli { op, left, right } => cmd_pauli(*op, left, right)?,
    };
    match cli.output {
        Output::Json => println!("{}", serde_json::to_string(&report.json)?),
        Output::Table => {
            let width = report.table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (key, value) in &report.table {
                println!("{key:<width$}  {value}");
            }
        }
    }
    Ok(ExitCode::from(report.code))
}

fn cmd_gen(kind: GenKind, n: usize, k: Option<usize>, id: Option<&str>) -> Result<Report> {
    let need_k = || k.context("--k is required for this generator kind");
    if kind == GenKind::Bus {
        let id: BusId = id.context("--id is required for `gen bus`")?.parse()?;
        let bus = build_bus(n, id)?;
        let strings = bus.strings(n)?;
        let table = bus
            .members
            .iter()
            .zip(&strings)
            .map(|(g, p)| (g.to_string(), p.to_string()))
            .collect();
        let json = json!({
            "n": n,
            "bus": id.to_string(),
            "members": bus.members.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "paulis": strings.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        });
        return Ok(Report::ok(json, table));
    }
    let generator = match kind {
        GenKind::E => GeneratorRef::E(need_k()?),
        GenKind::D => GeneratorRef::D(need_k()?),
        GenKind::Third => GeneratorRef::Third,
        GenKind::Chirality => GeneratorRef::Chirality,
        GenKind::Bus => unreachable!(),
    };
    let p = generator.resolve(n)?;
    let json = json!({ "n": n, "generator": generator.to_string(), "pauli": p.to_string() });
    Ok(Report::ok(
        json,
        vec![(generator.to_string(), p.to_string())],
    ))
}

fn cmd_car(n: usize, inject_fault: bool) -> Result<Report> {
    let report = if inject_fault {
        let mut e = (0..2 * n)
            .map(|k| build_e(n, k))
            .collect::<spinchain::Result<Vec<_>>>()?;
        e[1] = PauliString::identity(n)?;
        verify_car_with(n, &e)?
    } else {
        verify_car(n)?
    };
    let mut table = vec![
        ("n".to_string(), n.to_string()),
        (
            "max_deviation".to_string(),
            report.max_deviation.to_string(),
        ),
    ];
    for f in &report.failures {
        let relation = serde_json::to_value(f.relation)?;
        table.push((
            format!(
                "failure {} ({}, {})",
                relation.as_str().unwrap_or("?"),
                f.k,
                f.j
            ),
            f.deviation.to_string(),
        ));
    }
    Ok(Report {
        json: serde_json::to_value(&report)?,
        table,
        code: if report.holds() { 0 } else { 1 },
    })
}

fn cmd_closure(n: usize, buses: &[String], gens: &[String], check: bool) -> Result<Report> {
    if buses.is_empty() && gens.is_empty() {
        bail!("give at least one of --bus or --gen");
    }
    let mut words: Vec<PauliWord> = Vec::new();
    for id in buses {
        let id: BusId = id.parse()?;
        words.extend(build_bus(n, id)?.words(n)?);
    }
    for text in gens {
        let g: GeneratorRef = text
            .parse()
            .with_context(|| format!("generator {text:?}"))?;
        words.push(g.resolve(n)?.word());
    }
    let result = check_universality(n, &words)?;
    let report = &result.report;
    let table = vec![
        ("n".to_string(), n.to_string()),
        ("dimension".to_string(), report.dimension.to_string()),
        ("label".to_string(), report.label.to_string()),
        ("universal".to_string(), result.universal.to_string()),
        ("rounds".to_string(), report.rounds.to_string()),
        (
            "pairs_processed".to_string(),
            report.pairs_processed.to_string(),
        ),
    ];
    Ok(Report {
        json: serde_json::to_value(report)?,
        table,
        code: if check && !result.universal { 1 } else { 0 },
    })
}

fn cmd_schedule(file: &PathBuf, tol: f64) -> Result<Report> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let schedule: PulseSchedule =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
    let u = run_schedule(&schedule)?;
    let unitarity = u.unitarity_residual();
    let membership = so_membership(&u, tol)?;
    let rotation = if membership.member {
        serde_json::to_value(&membership.rotation)?
    } else {
        Value::Null
    };
    let json = json!({
        "n": schedule.n,
        "pulses": schedule.pulses.len(),
        "unitarity_residual": unitarity,
        "member": membership.member,
        "residual": membership.residual,
        "rotation": rotation,
    });
    let mut table = vec![
        ("n".to_string(), schedule.n.to_string()),
        ("pulses".to_string(), schedule.pulses.len().to_string()),
        ("unitarity_residual".to_string(), format!("{unitarity:.3e}")),
        ("member".to_string(), membership.member.to_string()),
        (
            "residual".to_string(),
            format!("{:.3e}", membership.residual),
        ),
    ];
    if membership.member {
        let r = &membership.rotation;
        table.push((
            "orthogonality_residual".to_string(),
            format!("{:.3e}", r.orthogonality_residual()),
        ));
        for row in 0..r.dim() {
            let cells: Vec<String> = (0..r.dim())
                .map(|c| format!("{:>9.6}", r.get(row, c)))
                .collect();
            table.push((format!("R[{row}]"), cells.join(" ")));
        }
    }
    Ok(Report::ok(json, table))
}

fn cmd_random_schedule(n: usize, pulses: usize, seed: u64) -> Result<Report> {
    let members: Vec<GeneratorRef> = [BusId::I, BusId::II]
        .into_iter()
        .map(|id| build_bus(n, id).map(|b| b.members))
        .collect::<spinchain::Result<Vec<_>>>()?
        .concat();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut schedule = PulseSchedule::new(n);
    for _ in 0..pulses {
        let g = members[rng.random_range(0..members.len())];
        schedule.push(
            g,
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
    }
    schedule.validate()?;
    let table = schedule
        .pulses
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("{i}: {}", p.gen), p.theta.to_string()))
        .collect();
    Ok(Report::ok(serde_json::to_value(&schedule)?, table))
}

fn cmd_pauli(op: PauliOp, left: &str, right: &str) -> Result<Report> {
    let p: PauliString = left.parse().with_context(|| format!("parsing {left:?}"))?;
    let q: PauliString = right
        .parse()
        .with_context(|| format!("parsing {right:?}"))?;
    let (key, value) = match op {
        PauliOp::Mul => ("product", Value::String(p.mul(&q)?.to_string())),
        PauliOp::Commutes => ("commutes", Value::Bool(p.commutes(&q)?)),
        // [p, q] = 2 * (returned string), or zero
        PauliOp::Commutator => (
            "half_commutator",
            p.commutator(&q)?
                .map_or(Value::Null, |s| Value::String(s.to_string())),
        ),
    };
    let shown = match &value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    Ok(Report::ok(
        json!({ key: value }),
        vec![(key.to_string(), shown)],
    ))
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use locdiv::analysis::{
    classify_g1, det_image, diagonal_part, h_dimension, invariant_line_vectors, reduction_split,
};
use locdiv::groupfile::parse_generator;
use locdiv::verifier::SampleSizes;
use locdiv::{
    parse_group_file, Budget, Cohomology, Error, GModule, MatrixGroup, Ring, Session, Verdict,
    VerifyConfig, DEFAULT_CAP, REGISTRY,
};

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "locdiv",
    version,
    about = "Cohomology of subgroups of GL2(Z/p^nZ) and local-global divisibility checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close a group under multiplication and summarize its structure.
    Close(GroupArgs),
    /// Compute H^1(G, (Z/p^nZ)^2).
    H1(GroupArgs),
    /// Compute the locally trivial part of H^1(G, (Z/p^nZ)^2).
    H1loc(GroupArgs),
    /// Run registered checks over seeded group families.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Table,
}

/// Settings shared by every subcommand.
#[derive(Args)]
struct RunConfig {
    /// Prime p, with 3 < p <= 97.
    #[arg(short, long, default_value_t = 5)]
    p: u32,
    /// Level n in {1, 2}.
    #[arg(short, long, default_value_t = 2)]
    n: u32,
    /// Element cap for group closures.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    run: RunConfig,
    /// Group file (header `mod p^n`, one generator per line).
    #[arg(long, short = 'f', conflicts_with = "generators")]
    file: Option<PathBuf>,
    /// Generators such as "[[1,1],[0,1]]", reduced mod p^n.
    generators: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunConfig,
    /// Run every registered check.
    #[arg(long, conflicts_with = "ids")]
    all: bool,
    /// Check ids, see `--list`.
    ids: Vec<String>,
    /// List the registered check ids and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Wall-clock seconds per check before reporting inconclusive-budget.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Groups visited per corpus and check.
    #[arg(long, default_value_t = 5000)]
    max_groups: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Include elapsed seconds in reports.
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnsupportedModulus { .. } | Error::UnknownCheck(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Close(a) => close(&a),
        Command::H1(a) => cohomology(&a, false),
        Command::H1loc(a) => cohomology(&a, true),
        Command::Verify(a) => verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(run: &RunConfig, json: &Value, table: String) -> std::result::Result<(), Failure> {
    let text = match run.output {
        Output::Json => serde_json::to_string_pretty(json).expect("serializable report") + "\n",
        Output::Table => table,
    };
    match &run.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_group(a: &GroupArgs) -> std::result::Result<MatrixGroup, Failure> {
    let (ring, gens) = match &a.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let d = parse_group_file(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (d.ring, d.generators)
        }
        None => {
            if a.generators.is_empty() {
                return Err(Failure::Usage(
                    "give generators or --file (see --help)".into(),
                ));
            }
            let ring = Ring::new(a.run.p, a.run.n)?;
            let gens = a
                .generators
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_generator(ring, s).map_err(|e| {
                        let msg = match e {
                            Error::Parse { msg, .. } => msg,
                            other => other.to_string(),
                        };
                        Failure::Usage(format!("generator {}: {msg}", i + 1))
                    })
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            (ring, gens)
        }
    };
    Ok(MatrixGroup::close(ring, &gens, a.run.cap)?)
}

fn close(a: &GroupArgs) -> CmdResult {
    let g = load_group(a)?;
    let ring = g.ring();
    let (g1, h) = if ring.n() == 2 {
        let (g1, h) = reduction_split(&g)?;
        (g1, Some(h))
    } else {
        (g.clone(), None)
    };
    let dim_h = h.as_ref().map(h_dimension).transpose()?;
    let gd = diagonal_part(&g1);
    let lines = invariant_line_vectors(&g1);
    let class = classify_g1(&g1);
    let det_p = det_image(&g, 1)?;
    let det_full = det_image(&g, ring.n())?;
    let report = json!({
        "modulus": ring.modulus(),
        "generators": g.generator_literals(),
        "order": g.order(),
        "g1_order": g1.order(),
        "gd_order": gd.order(),
        "dim_h": dim_h,
        "det_image_mod_p": det_p,
        "det_image": det_full,
        "invariant_lines": lines,
        "classification": {
            "tag": class.tag,
            "basis_change": class.basis_change.literal(),
            "cyclic": class.cyclic,
            "rho": class.rho.map(|x| x.literal()),
            "sigma": class.sigma.map(|x| x.literal()),
        },
    });
    let mut t = String::new();
    t += &format!("modulus          {}\n", ring.modulus());
    t += &format!("generators       {}\n", g.generator_literals().join(" "));
    t += &format!("order            {}\n", g.order());
    t += &format!("|G1|             {}\n", g1.order());
    t += &format!("|G_D|            {}\n", gd.order());
    if let Some(d) = dim_h {
        t += &format!("dim H            {d}\n");
    }
    t += &format!("det image mod p  {det_p:?}\n");
    if ring.n() == 2 {
        t += &format!("det image        {det_full:?}\n");
    }
    t += &format!("invariant lines  {}\n", lines.len());
    t += &format!(
        "classification   {}\n",
        report["classification"]["tag"].as_str().unwrap_or("")
    );
    emit(&a.run, &report, t)?;
    Ok(0)
}

fn cohomology(a: &GroupArgs, local: bool) -> CmdResult {
    let g = load_group(a)?;
    let coh = Cohomology::new(&g, &GModule::new(g.ring()))?;
    let mut report = coh.report()?;
    if local {
        report.invariants = report.h1loc_invariants.clone();
    }
    let name = if local { "H1_loc" } else { "H1" };
    let t = format!(
        "|G|              {}\n|Z1|             {}\n|B1|             {}\n{name:<17}{:?}\n",
        report.group_order, report.z1_order, report.b1_order, report.invariants
    );
    emit(&a.run, &serde_json::to_value(&report).expect("report"), t)?;
    Ok(0)
}

fn registry_listing() -> String {
    format!("registered checks: {}", REGISTRY.join(", "))
}

fn verify(a: &VerifyArgs) -> CmdResult {
    if a.list {
        println!("{}", REGISTRY.join("\n"));
        return Ok(0);
    }
    let ids: Vec<&str> = if a.all {
        REGISTRY.to_vec()
    } else {
        a.ids.iter().map(String::as_str).collect()
    };
    if ids.is_empty() {
        return Err(Failure::Usage(format!(
            "give check ids or --all; {}",
            registry_listing()
        )));
    }
    if let Some(bad) = ids.iter().find(|id| !REGISTRY.contains(id)) {
        return Err(Failure::Usage(format!(
            "unknown check id `{bad}`; {}",
            registry_listing()
        )));
    }
    if !(1..=2).contains(&a.run.n) {
        return Err(Failure::Usage(format!(
            "level must be 1 or 2, got {}",
            a.run.n
        )));
    }
    let config = VerifyConfig {
        p: a.run.p,
        n: a.run.n,
        seed: a.seed,
        cap: a.run.cap,
        budget: Budget {
            max_groups: a.max_groups,
            max_seconds: a.budget,
        },
        sizes: SampleSizes::default(),
        workers: a.workers,
        timings: a.timings,
    };
    let session = Session::new(config)?;
    let suite = session.run_all(&ids)?;
    let mut t = format!(
        "{:<16} {:<20} {:>8} {:>8} {:>8} {:>8}\n",
        "check", "verdict", "sampled", "tested", "failed", "flagged"
    );
    for r in &suite.reports {
        let verdict = serde_json::to_value(r.verdict).expect("verdict");
        t += &format!(
            "{:<16} {:<20} {:>8} {:>8} {:>8} {:>8}\n",
            r.spec.id,
            verdict.as_str().unwrap_or(""),
            r.groups_sampled,
            r.groups_tested,
            r.failures.len(),
            r.flagged.len()
        );
    }
    emit(&a.run, &serde_json::to_value(&suite).expect("suite"), t)?;
    Ok(match suite.verdict {
        Verdict::Pass => 0,
        v => v.exit_code() as u8,
    })
}

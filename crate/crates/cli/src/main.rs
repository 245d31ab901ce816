use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcc_core::bench::{emit_csv, emit_svg_scatter, fit_exponent, run_experiment, Algo, Field, RunRecord};
use qcc_core::hull::{
    classical_full_hull, monotone_chain_full, monotone_chain_upper, quantum_full_hull_with, quantum_jarvis_full_with,
};
use qcc_core::instances::{write_instance, GenSpec, Kind};
use qcc_core::maxima::{classical_maxima, maxima_of_sorted, quantum_maxima};
use qcc_core::oracle::read_points;
use qcc_core::{CostLedger, Point, SimMode, SortedPointSet};

#[derive(Parser)]
#[command(
    name = "qcc",
    version,
    about = "Combine-and-conquer hulls and maxima with simulated quantum query costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance and report its hull and maxima sizes.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the convex hull clockwise, upper chain first.
    Hull {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        algo: HullAlgo,
        #[arg(long, value_enum, default_value_t = Mode::Analytic)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        no_selfcheck: bool,
    },
    /// Print the maxima staircase in increasing x.
    Maxima {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        algo: MaximaAlgo,
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        no_selfcheck: bool,
    },
    /// Run every algorithm and cross-compare the results.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Scaling experiment over one instance family.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n_list: String,
        #[arg(long)]
        h_list: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        algos: String,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        /// Log-log scatter of the first listed algorithm.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        no_selfcheck: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HullAlgo {
    Qcc,
    ClassicalDc,
    JarvisQ,
    Monotone,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaximaAlgo {
    Qcc,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Analytic,
    Mc,
}

enum Failure {
    Disagreement,
    Input(String),
    SelfCheck(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Disagreement => 1,
            Failure::Input(_) => 2,
            Failure::SelfCheck(_) => 3,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<SortedPointSet, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let points = read_points(BufReader::new(file)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    SortedPointSet::load(points, false).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_ledger(path: Option<&Path>, ledger: &CostLedger) -> Outcome {
    match path {
        Some(p) => {
            std::fs::write(p, ledger.to_json() + "\n").map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => Ok(()),
    }
}

fn print_points(points: &[Point]) {
    let mut out = std::io::stdout().lock();
    for p in points {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
}

fn gen(kind: &str, n: usize, h: Option<usize>, k: Option<usize>, seed: u64, out: &Path) -> Outcome {
    let kind: Kind = kind.parse().map_err(input)?;
    let mut spec = GenSpec::new(kind, n).with_seed(seed);
    if let Some(h) = h {
        spec = spec.with_h(h);
    }
    if let Some(k) = k {
        spec = spec.with_k(k);
    }
    let points = write_instance(&spec, out).map_err(input)?;
    println!("n {}", points.len());
    println!("upper_hull {}", monotone_chain_upper(&points).len());
    println!("hull {}", monotone_chain_full(&points).len());
    println!("maxima {}", maxima_of_sorted(&points).len());
    Ok(())
}

fn hull(path: &Path, algo: HullAlgo, mode: Mode, seed: u64, ledger_path: Option<&Path>, selfcheck: bool) -> Outcome {
    let o = load(path)?;
    let mode = match mode {
        Mode::Analytic => SimMode::Analytic,
        Mode::Mc => SimMode::MonteCarlo(seed),
    };
    let (polygon, ledger) = match algo {
        HullAlgo::Qcc => {
            let run = quantum_full_hull_with(&o, mode).map_err(input)?;
            (run.polygon, run.ledger)
        }
        HullAlgo::JarvisQ => {
            let run = quantum_jarvis_full_with(&o, CostLedger::new(mode)).map_err(input)?;
            (run.polygon, run.ledger)
        }
        HullAlgo::ClassicalDc => {
            let poly = classical_full_hull(&o).map_err(input)?;
            (poly, classical_ledger(&o, mode))
        }
        HullAlgo::Monotone => {
            let poly = monotone_chain_full(&o.query_all());
            (poly, classical_ledger(&o, mode))
        }
    };
    if selfcheck && polygon != monotone_chain_full(o.points_uncounted()) {
        return Err(Failure::SelfCheck("hull differs from the monotone-chain oracle".into()));
    }
    print_points(&polygon);
    write_ledger(ledger_path, &ledger)
}

fn classical_ledger(o: &SortedPointSet, mode: SimMode) -> CostLedger {
    let mut l = CostLedger::new(mode);
    l.classical_queries = o.queries();
    l
}

fn maxima(path: &Path, algo: MaximaAlgo, ledger_path: Option<&Path>, selfcheck: bool) -> Outcome {
    let o = load(path)?;
    if o.is_empty() {
        return Err(Failure::Input(format!("{}: no points", path.display())));
    }
    let (list, ledger) = match algo {
        MaximaAlgo::Qcc => {
            let run = quantum_maxima(&o).map_err(input)?;
            (run.maxima, run.ledger)
        }
        MaximaAlgo::Classical => {
            let list = classical_maxima(&o).map_err(input)?;
            (list, classical_ledger(&o, SimMode::Analytic))
        }
    };
    if selfcheck && list.0 != maxima_of_sorted(o.points_uncounted()) {
        return Err(Failure::SelfCheck("maxima differ from the classical oracle".into()));
    }
    print_points(&list.0);
    write_ledger(ledger_path, &ledger)
}

fn verify(path: &Path) -> Outcome {
    let o = load(path)?;
    let pts = o.points_uncounted().to_vec();
    let fresh = || SortedPointSet::load(pts.clone(), false).expect("already validated");
    let reference = monotone_chain_full(&pts);
    let mut all_agree = true;
    let mut report = |name: &str, got: Result<bool, String>| match got {
        Ok(true) => println!("PASS {name}"),
        Ok(false) => {
            all_agree = false;
            println!("FAIL {name}");
        }
        Err(why) => println!("SKIP {name} ({why})"),
    };
    type HullCase<'a> = (&'a str, Box<dyn Fn() -> Result<Vec<Point>, String> + 'a>);
    let hull_cases: [HullCase; 3] = [
        (
            "hull qcc vs monotone",
            Box::new(|| {
                quantum_full_hull_with(&fresh(), SimMode::Analytic)
                    .map(|r| r.polygon)
                    .map_err(|e| e.to_string())
            }),
        ),
        (
            "hull classical-dc vs monotone",
            Box::new(|| classical_full_hull(&fresh()).map_err(|e| e.to_string())),
        ),
        (
            "hull jarvis-q vs monotone",
            Box::new(|| {
                quantum_jarvis_full_with(&fresh(), CostLedger::default())
                    .map(|r| r.polygon)
                    .map_err(|e| e.to_string())
            }),
        ),
    ];
    for (name, run) in hull_cases {
        report(name, run().map(|poly| poly == reference));
    }
    let maxima_cmp = quantum_maxima(&fresh())
        .and_then(|q| classical_maxima(&fresh()).map(|c| q.maxima == c))
        .map_err(|e| e.to_string());
    report("maxima qcc vs classical", maxima_cmp);
    if all_agree {
        Ok(())
    } else {
        Err(Failure::Disagreement)
    }
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<usize>, Failure> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(Failure::Input(format!("--{flag} is empty")));
    }
    items
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::Input(format!("--{flag}: bad value {t:?}")))
        })
        .collect()
}

/// Fits cost against n when n varies, otherwise against the true output size.
fn fit_line(records: &[RunRecord], algo: Algo) -> String {
    let cost = algo.cost_field();
    for x in [Field::N, Field::HTrue] {
        if let Ok(slope) = fit_exponent(records, x, cost) {
            return format!("slope {slope:.3} ({} vs {})", cost.name(), x.name());
        }
    }
    "slope n/a (need 3 distinct n or h values)".into()
}

#[allow(clippy::too_many_arguments)]
fn bench(
    family: &str,
    n_list: &str,
    h_list: Option<&str>,
    k: Option<usize>,
    algos: &str,
    reps: usize,
    seed: u64,
    csv: &Path,
    svg: Option<&Path>,
    selfcheck: bool,
) -> Outcome {
    let kind: Kind = family.parse().map_err(input)?;
    let ns = parse_list("n-list", n_list)?;
    let hs = match h_list {
        Some(s) => parse_list("h-list", s)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let algos: Vec<Algo> = algos
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Algo>().map_err(input))
        .collect::<Result<_, _>>()?;
    if algos.is_empty() {
        return Err(Failure::Input("--algos is empty".into()));
    }
    if reps == 0 {
        return Err(Failure::Input("--reps must be at least 1".into()));
    }
    let mut grid = Vec::new();
    for &n in &ns {
        for &h in &hs {
            let mut spec = GenSpec::new(kind, n).with_seed(seed);
            if let Some(h) = h {
                spec = spec.with_h(h);
            }
            if let Some(k) = k {
                spec = spec.with_k(k);
            }
            grid.push(spec);
        }
    }
    let records = run_experiment(&grid, &algos, reps, SimMode::Analytic).map_err(input)?;
    emit_csv(&records, csv).map_err(input)?;
    for &algo in &algos {
        let mine: Vec<RunRecord> = records.iter().filter(|r| r.algo == algo.name()).cloned().collect();
        println!("{} {} {}", kind, algo, fit_line(&mine, algo));
    }
    if let Some(path) = svg {
        let first: Vec<RunRecord> = records.iter().filter(|r| r.algo == algos[0].name()).cloned().collect();
        let x = if fit_exponent(&first, Field::N, algos[0].cost_field()).is_ok() {
            Field::N
        } else {
            Field::HTrue
        };
        emit_svg_scatter(&first, x, algos[0].cost_field(), path).map_err(input)?;
    }
    let wrong = records.iter().filter(|r| !r.correct).count();
    if selfcheck && wrong > 0 {
        return Err(Failure::SelfCheck(format!("{wrong} runs disagree with their oracle")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            kind,
            n,
            h,
            k,
            seed,
            out,
        } => gen(&kind, n, h, k, seed, &out),
        Command::Hull {
            input,
            algo,
            mode,
            seed,
            ledger,
            no_selfcheck,
        } => hull(&input, algo, mode, seed, ledger.as_deref(), !no_selfcheck),
        Command::Maxima {
            input,
            algo,
            ledger,
            no_selfcheck,
        } => maxima(&input, algo, ledger.as_deref(), !no_selfcheck),
        Command::Verify { input } => verify(&input),
        Command::Bench {
            family,
            n_list,
            h_list,
            k,
            algos,
            reps,
            seed,
            csv,
            svg,
            no_selfcheck,
        } => bench(
            &family,
            &n_list,
            h_list.as_deref(),
            k,
            &algos,
            reps,
            seed,
            &csv,
            svg.as_deref(),
            !no_selfcheck,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Disagreement => eprintln!("error: algorithms disagree"),
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::SelfCheck(msg) => eprintln!("self-check failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

mod spec;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nichols_core::braiding::{cartan_diagnose, check_braid_equation, check_rigidity, hecke_type, CartanDiagnosis, Hecke};
use nichols_core::nichols::{
    generic_smoke, graded_dims_with, hilbert_reciprocity_check, random_diagonal, relation_dump, truncated_dims,
    ComputeMode, EngineConfig, GradedReport, NicholsError, Status, CSV_HEADER,
};
use nichols_core::racks::check_rack;
use nichols_core::scalars::Field;

use spec::{Built, SpecFile};

#[derive(Parser)]
#[command(name = "nichols-forge", version, about = "Exact computations with Nichols algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone)]
struct Opts {
    /// Highest degree to compute (overrides the spec file).
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Number of consensus primes.
    #[arg(long, global = true)]
    primes: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    /// Exit with status 3 when a memory cap stops a computation.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Modular,
}

#[derive(Subcommand)]
enum Command {
    /// Braid equation, rigidity, Hecke type, rack axioms and Cartan diagnosis.
    Check { spec: PathBuf },
    /// Graded dimensions and new relation counts.
    Dims { spec: PathBuf },
    /// Relations in one degree not generated by lower ones.
    Relations {
        spec: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Print the relations themselves.
        #[arg(long)]
        dump: bool,
    },
    /// Reproduces the table of rack examples as CSV.
    Table {
        /// `all` or a comma-separated list of row numbers 1..=7.
        #[arg(long, default_value = "all")]
        rows: String,
        /// Wall-clock budget in minutes, shared between the rows.
        #[arg(long, default_value_t = 30.0)]
        budget: f64,
    },
    /// Checks H_B(t) H_{B!}(-t) = 1 for a braiding of Hecke type.
    Reciprocity {
        spec: PathBuf,
        /// Hecke parameter to use when c = -id, in spec-file scalar syntax.
        #[arg(long)]
        default_q: Option<String>,
    },
    /// Dimensions of T(V) modulo the relations of degree at most r.
    Truncated {
        spec: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Graded dimensions of a random diagonal braiding.
    Smoke {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

/// A failure with its exit status.
struct Fail(u8, String);

impl From<NicholsError> for Fail {
    fn from(e: NicholsError) -> Self {
        let code = match e {
            NicholsError::PrimeDisagreement { .. } => 2,
            NicholsError::ResourceCap { .. } | NicholsError::AmbientTooLarge { .. } => 3,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Built, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
    let spec = SpecFile::parse(&text).map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
    spec.build().map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

fn config(opts: &Opts, built: Option<&Built>) -> EngineConfig {
    let mut cfg = spec::default_config();
    if let Some(b) = built {
        b.caps.apply(&mut cfg);
    }
    if let Some(m) = opts.max_degree {
        cfg.max_degree = m;
    }
    if let Some(m) = opts.mode {
        cfg.mode = match m {
            Mode::Exact => ComputeMode::Exact,
            Mode::Modular => ComputeMode::Modular,
        };
    }
    if let Some(p) = opts.primes {
        cfg.primes = p;
    }
    cfg.threads = opts.threads;
    cfg
}

fn space(built: &Built) -> Result<&nichols_core::braiding::BraidedSpace, Fail> {
    built.space.as_ref().map_err(|e| Fail(1, format!("{}: {e}", built.name)))
}

fn progress(name: &str) -> impl FnMut(&nichols_core::nichols::engine::Step) -> bool + Send + '_ {
    move |s| {
        match s.new_relations {
            Some(r) => eprintln!("[{name}] degree {}: dim {}, new relations {r}", s.degree, s.dim),
            None => eprintln!("[{name}] degree {}: dim {}", s.degree, s.dim),
        }
        true
    }
}

fn print_report(r: &GradedReport, opts: &Opts) {
    if opts.json {
        println!("{}", r.to_json());
    } else if opts.csv {
        println!("{CSV_HEADER}");
        println!("{}", r.csv_row());
    } else {
        println!("{} (rank {}, over {})", r.name, r.rank, r.field);
        println!("dims: {}", r.dims.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
        if !r.new_relations.is_empty() {
            let rels: Vec<String> = r.new_relations.iter().enumerate().map(|(k, c)| format!("{}:{c}", k + 2)).collect();
            println!("new relations: {}", rels.join(" "));
        }
        println!("hilbert series: {}", r.hilbert_prefix);
        match (&r.status, r.total_dim) {
            (Status::Terminated { top_degree }, Some(t)) => {
                println!("status: terminated, total dimension {t}, top degree {top_degree}")
            }
            (Status::Cutoff { degree }, _) => println!("status: cutoff at degree {degree}"),
            (Status::ResourceCapped { degree }, _) => println!("status: resource capped after degree {degree}"),
            _ => {}
        }
        for n in &r.notes {
            println!("note: {n}");
        }
    }
}

fn finish_report(r: &GradedReport, opts: &Opts) -> Result<(), Fail> {
    print_report(r, opts);
    if opts.strict {
        if let Status::ResourceCapped { degree } = r.status {
            return Err(Fail(3, format!("memory budget reached after degree {degree}")));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    rank: Option<usize>,
    field: Option<String>,
    braid_equation: String,
    rigid: Option<bool>,
    hecke: Option<String>,
    rack_axioms: Option<String>,
    cartan: Option<CartanDiagnosis>,
}

fn cmd_check(built: &Built, opts: &Opts) -> Result<(), Fail> {
    let mut report = CheckReport {
        name: built.name.clone(),
        rank: None,
        field: None,
        braid_equation: String::new(),
        rigid: None,
        hecke: None,
        rack_axioms: built.rack.as_ref().map(|r| match r {
            Ok(r) => match check_rack(r) {
                Ok(()) => "ok".to_string(),
                Err(v) => format!("fails: {v}"),
            },
            Err(e) => format!("fails: {e}"),
        }),
        cartan: None,
    };
    let mut ok = report.rack_axioms.as_deref().is_none_or(|s| s == "ok");
    match &built.space {
        Err(e) => {
            report.braid_equation = match e.strip_prefix("braid equation ") {
                Some(rest) => rest.to_string(),
                None => format!("not built: {e}"),
            };
            ok = false;
        }
        Ok(b) => {
            report.rank = Some(b.dim());
            report.field = Some(b.field().describe());
            report.braid_equation = match check_braid_equation(b) {
                Ok(()) => "ok".into(),
                Err([i, j, k]) => {
                    ok = false;
                    format!("fails on x{i} x{j} x{k}")
                }
            };
            let rigid = check_rigidity(b);
            ok &= rigid;
            report.rigid = Some(rigid);
            report.hecke = Some(match hecke_type(b) {
                None => "none".into(),
                Some(Hecke::Q(q)) => format!("q={}", b.field().format(&q)),
                Some(Hecke::Undetermined) => "undetermined (c = -id)".into(),
            });
            report.cartan = cartan_diagnose(b).ok();
        }
    }
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
    } else {
        println!("{}", report.name);
        if let (Some(n), Some(f)) = (report.rank, &report.field) {
            println!("rank {n} over {f}");
        }
        println!("braid equation: {}", report.braid_equation);
        if let Some(r) = report.rigid {
            println!("rigid: {}", if r { "ok" } else { "fails" });
        }
        if let Some(h) = &report.hecke {
            println!("hecke: {h}");
        }
        if let Some(r) = &report.rack_axioms {
            println!("rack axioms: {r}");
        }
        if let Some(c) = &report.cartan {
            println!("cartan: {}", serde_json::to_string(c).expect("diagnosis serialises"));
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Fail(1, "structural check failed".into()))
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { spec } => cmd_check(&load(spec)?, opts),
        Command::Dims { spec } => {
            let built = load(spec)?;
            let cfg = config(opts, Some(&built));
            let r = graded_dims_with(space(&built)?, &built.name, &cfg, &mut progress(&built.name))?;
            finish_report(&r, opts)
        }
        Command::Truncated { spec, r } => {
            let built = load(spec)?;
            let cfg = config(opts, Some(&built));
            let rep = truncated_dims(space(&built)?, &built.name, *r, &cfg)?;
            finish_report(&rep, opts)
        }
        Command::Relations { spec, degree, dump } => {
            let built = load(spec)?;
            let cfg = config(opts, Some(&built));
            let d = relation_dump(space(&built)?, *degree, &cfg)?;
            if opts.json {
                println!("{}", d.to_json());
            } else {
                println!("degree {}: {} new relations", d.degree, d.count);
                if *dump {
                    for r in &d.relations {
                        println!("{}", r.text);
                    }
                }
            }
            Ok(())
        }
        Command::Reciprocity { spec, default_q } => {
            let built = load(spec)?;
            let cfg = config(opts, Some(&built));
            let b = space(&built)?;
            let q = match default_q {
                Some(text) => {
                    Some(spec::parse_scalar(text).and_then(|s| s.to_cyc(b.field())).map_err(|e| Fail(1, e))?)
                }
                None => None,
            };
            let r = hilbert_reciprocity_check(b, q.as_ref(), &cfg)?;
            if opts.json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serialises"));
            } else {
                println!("q = {}", r.q);
                println!("dims:      {:?}", r.dims);
                println!("dual dims: {:?}", r.dual_dims);
                println!("product:   {:?}", r.product);
                println!("identity {} through degree {}", if r.holds { "holds" } else { "FAILS" }, r.checked_through);
                for n in &r.notes {
                    println!("note: {n}");
                }
            }
            if r.holds {
                Ok(())
            } else {
                Err(Fail(2, "reciprocity identity fails".into()))
            }
        }
        Command::Table { rows, budget } => table::run(rows, *budget, opts),
        Command::Smoke { seed, rank } => {
            let cfg = config(opts, None);
            let b = random_diagonal(*rank, *seed)?;
            let s = generic_smoke(&b, &cfg)?;
            if opts.json {
                println!("{}", serde_json::to_string_pretty(&s).expect("report serialises"));
            } else {
                println!("parameters: {:?}", s.parameters);
                print_report(&s.report, opts);
                match s.first_relation_degree {
                    Some(m) => println!("first relation in degree {m}"),
                    None => println!("no relations through degree {}", s.report.dims.len() - 1),
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

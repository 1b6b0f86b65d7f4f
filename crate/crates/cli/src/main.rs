//! `homdom`: decide, certify and refute homomorphism-density domination between trees.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use homdom_core::certificates::{self, Certificate};
use homdom_core::domination::{self, Mode};
use homdom_core::falsifier::{self, Attempt, Caps, Construction, TuneOptions};
use homdom_core::hom::DEFAULT_HOM_CAP;
use homdom_core::poset::{self, PosetConfig, Reference};
use homdom_core::tree_catalog::{self, Forest};
use homdom_core::Error;

#[derive(Parser, Debug)]
#[command(name = "homdom", version, about = "Homomorphism-density domination between trees")]
struct Cli {
    /// Directory for written artifacts.
    #[arg(long, global = true, env = "HOMDOM_OUT", default_value = "homdom-out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Maximum number of homomorphisms enumerated for an explicit LP.
    #[arg(long, global = true, default_value_t = DEFAULT_HOM_CAP)]
    hom_cap: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the trees on K vertices with their invariants.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Decide whether H dominates T.
    Compare {
        #[arg(long)]
        h: String,
        #[arg(long)]
        t: String,
        /// Re-verify the certificate independently and write it to the output directory.
        #[arg(long)]
        certify: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Verify a directory of certificates (`appendix_a`, `appendix_b` or a path).
    Certify {
        #[arg(long)]
        dir: String,
        /// Skip re-deciding failed pairs by LP.
        #[arg(long)]
        no_cross_check: bool,
    },
    /// Compute the domination relation on all trees up to `max-n` vertices.
    Poset(PosetArgs),
    /// Build an explicit graph on which H fails to dominate T.
    Falsify(FalsifyArgs),
}

#[derive(Args, Debug)]
struct PosetArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Compare against the bundled reference tables.
    #[arg(long)]
    diff_reference: bool,
    /// Alternative reference file.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Lazy)]
    mode: ModeArg,
    /// Decide every cell by LP only.
    #[arg(long)]
    no_conditions: bool,
    /// Run the LP even where a closed-form condition decided.
    #[arg(long)]
    certify_all: bool,
}

#[derive(Args, Debug)]
struct FalsifyArgs {
    #[arg(long)]
    h: String,
    #[arg(long)]
    t: String,
    #[arg(long, value_enum, default_value_t = FalsifyMode::Blowup)]
    mode: FalsifyMode,
    /// Comma-separated N (blow-up) or d (d-ary) values.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dual certificate file; computed by LP when absent.
    #[arg(long)]
    cert: Option<PathBuf>,
    #[arg(long, default_value_t = falsifier::DEFAULT_VERTEX_CAP)]
    vertex_cap: u64,
    #[arg(long, default_value_t = falsifier::DEFAULT_EDGE_CAP)]
    edge_cap: u64,
    /// Also write the separating graph as an edge list.
    #[arg(long)]
    emit_graph: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Explicit,
    Lazy,
    Auto,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Explicit => Mode::Explicit,
            ModeArg::Lazy => Mode::Lazy,
            ModeArg::Auto => Mode::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FalsifyMode {
    Blowup,
    Dary,
    Step,
}

/// Bad arguments that clap cannot catch; exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn tree(arg: &str) -> Result<Forest> {
    Ok(tree_catalog::resolve(arg).map_err(|e| Usage(format!("{arg}: {e}")))?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Enumerate { n } => enumerate(*n),
        Cmd::Compare { h, t, certify, mode } => compare(cli, h, t, *certify, (*mode).into()),
        Cmd::Certify { dir, no_cross_check } => certify(dir, !no_cross_check),
        Cmd::Poset(args) => poset_cmd(cli, args),
        Cmd::Falsify(args) => falsify(cli, args),
    }
}

fn enumerate(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Usage("--n must be positive".into()).into());
    }
    let mut trees = tree_catalog::enumerate_trees(n);
    trees.sort_by_key(|t| tree_catalog::catalog_index_of(t).unwrap_or(usize::MAX));
    println!("{} trees on {n} vertices", trees.len());
    println!("{:<6} {:>5} {:>6} {:>5} {:>6} {:>7} {:<9} {:<16} edges", "label", "sigma", "radius", "alpha", "leaves", "lambda", "nearstar", "degrees");
    for t in &trees {
        let Ok(inv) = tree_catalog::invariants(t) else {
            println!("{:<6} {:>5} {:>6} {:>5} {:>6} {:>7} {:<9} {:<16} -", "K1", "-", "-", "-", "-", "-", "-", "0");
            continue;
        };
        let near = inv.near_star.map(|(_, l)| format!("l={l}")).unwrap_or_else(|| "-".into());
        let degs = inv.degree_sequence.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("");
        let label = tree_catalog::catalog_index_of(t).map(|i| format!("T{i}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<6} {:>5} {:>6} {:>5} {:>6} {:>7} {:<9} {:<16} {}",
            label,
            inv.sigma,
            inv.radius,
            inv.alpha,
            inv.leaf_count,
            inv.lambda.to_string(),
            near,
            degs,
            t.inline()
        );
    }
    Ok(true)
}

fn compare(cli: &Cli, h: &str, t: &str, certify: bool, mode: Mode) -> Result<bool> {
    let (hf, tf) = (tree(h)?, tree(t)?);
    let v = domination::decide_with_cap(&hf, &tf, mode, cli.hom_cap).with_context(|| format!("deciding {h} vs {t}"))?;
    println!("{} value={} method={}", v.relation, homdom_core::fraction_string(&v.lp_value), v.method);
    let text = certificates::serialize(&v.certificate);
    print!("{text}");
    if !certify {
        return Ok(true);
    }
    // Round-trip through the text format so the check sees only what a reader would.
    let parsed = certificates::parse(&text).context("re-parsing emitted certificate")?;
    let report = certificates::verify(&parsed);
    println!("verified={} constraints={} objective={}", report.ok, report.checked_constraints, homdom_core::fraction_string(&report.objective));
    for f in report.failures.iter().take(5) {
        println!("  fails {}: {} vs {}", f.constraint, f.lhs, f.rhs);
    }
    fs::create_dir_all(&cli.out).with_context(|| cli.out.display().to_string())?;
    let path = cli.out.join(format!("{}-{}.txt", file_safe(t), file_safe(h)));
    fs::write(&path, &text).with_context(|| path.display().to_string())?;
    println!("wrote {}", path.display());
    Ok(report.ok)
}

fn file_safe(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

fn certify(dir: &str, cross_check: bool) -> Result<bool> {
    let path = match dir {
        "appendix_a" | "appendix_b" => certificates::fixture_dir().join(dir),
        other => PathBuf::from(other),
    };
    if !path.is_dir() {
        return Err(Usage(format!("{}: not a directory", path.display())).into());
    }
    let report = certificates::verify_directory(&path, cross_check).with_context(|| path.display().to_string())?;
    for line in certificates::summarize(&report) {
        println!("{line}");
    }
    let total = report.results.len();
    println!("{} of {total} certificates verified", report.passed());
    Ok(report.passed() == total)
}

fn poset_cmd(cli: &Cli, args: &PosetArgs) -> Result<bool> {
    if args.max_n == 0 {
        return Err(Usage("--max-n must be positive".into()).into());
    }
    let cfg = PosetConfig { max_n: args.max_n, mode: args.mode.into(), use_conditions: !args.no_conditions, certify_all: args.certify_all };
    let m = poset::compute_relation(&cfg)?;
    println!("{} trees, {} ordered pairs decided", m.len(), m.len() * m.len());
    for (method, count) in poset::provenance_summary(&m) {
        println!("  {method}: {count}");
    }
    let axioms = poset::check_poset_axioms(&m);
    println!(
        "axioms: reflexivity {} antisymmetry {} transitivity {}",
        ok_word(axioms.reflexivity.is_empty()),
        ok_word(axioms.antisymmetry.is_empty()),
        ok_word(axioms.transitivity.is_empty())
    );
    fs::create_dir_all(&cli.out).with_context(|| cli.out.display().to_string())?;
    write(&cli.out.join("relation.csv"), &poset::to_csv(&m))?;
    if axioms.ok() {
        let names: Vec<String> = (0..m.len()).map(|i| m.name(i)).collect();
        write(&cli.out.join("hasse.dot"), &poset::hasse(&m)?.to_dot(&names))?;
    }
    let n = poset::write_bundle(&m, &cli.out.join("certificates"))?;
    println!("wrote relation.csv, hasse.dot and {n} certificates to {}", cli.out.display());

    let mut good = axioms.ok();
    if args.diff_reference || args.reference.is_some() {
        let reference = match &args.reference {
            Some(p) => Reference::parse(&fs::read_to_string(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?)?,
            None => Reference::bundled(),
        };
        let diffs = poset::diff_against_reference(&m, &reference);
        let mut report = String::new();
        for d in &diffs {
            let _ = writeln!(
                report,
                "table {} T{} vs T{}: reference {} computed {} ({})",
                d.claim.table,
                d.claim.col,
                d.claim.row,
                if d.claim.dominates { "DOMINATES" } else { "NOT_DOMINATES" },
                d.computed,
                d.method
            );
        }
        print!("{report}");
        write(&cli.out.join("discrepancies.txt"), &report)?;
        let tables = poset::covered_tables(&m, &reference).iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
        println!("{} discrepancies / Tables {tables}", diffs.len());
        good &= diffs.is_empty();
    }
    Ok(good)
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| path.display().to_string())
}

fn falsify(cli: &Cli, args: &FalsifyArgs) -> Result<bool> {
    let (h, t) = (tree(&args.h)?, tree(&args.t)?);
    let caps = Caps { vertices: args.vertex_cap, edges: args.edge_cap };
    let y = match (&args.cert, args.mode) {
        (_, FalsifyMode::Dary) => None,
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
            match certificates::parse(&text).with_context(|| p.display().to_string())? {
                Certificate::Dual(d) => Some(d),
                Certificate::Primal(_) => bail!("{}: a primal certificate cannot refute domination", p.display()),
            }
        }
        (None, _) => {
            let v = domination::decide_with_cap(&h, &t, Mode::Auto, cli.hom_cap)?;
            match v.certificate {
                Certificate::Dual(d) => Some(d),
                Certificate::Primal(_) => {
                    println!("{} dominates {} (value={}); nothing to refute", args.h, args.t, v.lp_value);
                    return Ok(false);
                }
            }
        }
    };
    let construction = match args.mode {
        FalsifyMode::Blowup => Construction::Blowup {
            schedule: args.schedule.clone().unwrap_or_else(|| match Construction::default_blowup() {
                Construction::Blowup { schedule, .. } => schedule,
                _ => unreachable!(),
            }),
            seed: args.seed,
        },
        FalsifyMode::Dary => Construction::Dary {
            schedule: args.schedule.clone().unwrap_or_else(|| match Construction::default_dary() {
                Construction::Dary { schedule } => schedule,
                _ => unreachable!(),
            }),
        },
        FalsifyMode::Step => Construction::Step(TuneOptions { caps, ..TuneOptions::default() }),
    };
    let refutation = match falsifier::refute(&h, &t, y.as_ref(), &construction, &caps) {
        Err(Error::CertificateInvalid(msg)) => bail!("{} vs {}: certificate invalid: {msg}", args.h, args.t),
        other => other?,
    };
    for a in &refutation.attempts {
        match a {
            Attempt::Evaluated(w) => println!("{}: lhs/rhs = {:.6}", w.construction, ratio(w)),
            Attempt::Skipped { construction, reason } => println!("{construction}: skipped ({reason})"),
        }
    }
    match refutation.witness() {
        Some(w) => {
            println!("SEPARATED");
            println!("{w}");
            if args.emit_graph {
                let g = rebuild(&h, &t, y.as_ref(), args, &caps, w)?;
                fs::create_dir_all(&cli.out).with_context(|| cli.out.display().to_string())?;
                let path = cli.out.join(format!("witness-{}-{}.txt", file_safe(&args.h), file_safe(&args.t)));
                write(&path, &g.to_edge_list())?;
                println!("wrote {}", path.display());
            }
        }
        None => println!("INCONCLUSIVE: schedule exhausted without separation"),
    }
    Ok(true)
}

fn ratio(w: &falsifier::DensityWitness) -> f64 {
    use homdom_core::BigInt;
    let scale = |q: &homdom_core::Q| -> f64 {
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(60);
        let n: BigInt = n >> shift;
        let d: BigInt = d >> shift;
        n.to_string().parse::<f64>().unwrap_or(0.0) / d.to_string().parse::<f64>().unwrap_or(1.0)
    };
    if w.rhs == homdom_core::Q::from_integer(0.into()) {
        return f64::INFINITY;
    }
    scale(&(&w.lhs / &w.rhs))
}

/// Rebuilds the separating graph from its recorded construction.
fn rebuild(
    h: &Forest,
    t: &Forest,
    y: Option<&homdom_core::DualCertificate>,
    args: &FalsifyArgs,
    caps: &Caps,
    w: &falsifier::DensityWitness,
) -> Result<homdom_core::Graph> {
    let field = |key: &str| -> Option<u64> {
        w.construction.split_whitespace().find_map(|tok| tok.strip_prefix(key).and_then(|v| v.parse().ok()))
    };
    let g = match args.mode {
        FalsifyMode::Blowup => {
            let spec = falsifier::BlowupSpec::desk(y.expect("checked").clone(), field("N=").expect("label has N"), args.seed);
            falsifier::build_blowup(&spec, caps)?
        }
        FalsifyMode::Dary => falsifier::build_dary(field("d=").expect("label has d"), t.radius() as u32, caps)?,
        FalsifyMode::Step => {
            let spec = falsifier::tune_step(h, y.expect("checked"), &TuneOptions { caps: *caps, ..TuneOptions::default() })
                .into_iter()
                .map(|(_, s)| s)
                .find(|s| s.label() == w.construction)
                .context("step graph not reproduced")?;
            falsifier::build_step(&spec, caps)?
        }
    };
    Ok(g)
}

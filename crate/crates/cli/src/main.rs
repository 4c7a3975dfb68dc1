use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use autbound_core::bounds::{
    bound_b, enumerate_exceptional, fermat_bound, highdim_sweep, max_exceptional_degree,
    ratio_at_3, render_sig3, xi, Partition,
};
use autbound_core::catalog::{
    self, bound_consistency, exit_code, primitive_ids, verify_all, verify_example,
    verify_primitive, Check, CheckStatus, Profile, VerificationReport, VerifyOptions,
};
use autbound_core::group::{GroupFile, GroupOptions, Strategy, TIER1_MAX};
use autbound_core::invariant::{molien_series, reynolds_basis, InvariantOptions};
use autbound_core::poly::{
    block_scalar_stabilizer, diagonal_stabilizer, exponent_minor_bound, is_invariant,
    semi_invariant_character, smoothness_necessary, PolyFile,
};

/// Exit code for unreadable or malformed input.
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "autbound", version, about = "Bounds and verifications for automorphism groups of smooth hypersurfaces")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group enumerated by closure before falling back.
    #[arg(long, global = true, default_value_t = TIER1_MAX)]
    max_elements: usize,
    #[arg(long, global = true, default_value_t = 2048)]
    memory_budget_mb: usize,
    /// Run the order computations reserved for tier 3.
    #[arg(long, global = true)]
    tier3: bool,
    /// Seed for randomized steps (chain construction, collapse constants).
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ProfileArg::Core)]
    profile: ProfileArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Core,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Closure,
    Bsgs,
}

#[derive(Subcommand)]
enum Command {
    /// Exceptional partitions with their largest exceptional degree.
    Table2 {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 26)]
        n_max: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Largest index of the center in a primitive subgroup of GL_N.
    Xi {
        /// Dimensions to report; defaults to 1..=12.
        n: Vec<u32>,
    },
    /// The bound B(partition, d).
    Bound {
        /// Block sizes, e.g. `4,2,1`.
        partition: String,
        d: u32,
    },
    /// Checks that no non-Fermat partition is exceptional in each dimension.
    Highdim {
        #[arg(long, default_value_t = 27)]
        n_min: u32,
        #[arg(long, default_value_t = 40)]
        n_max: u32,
    },
    /// Order, scalar order and projective order of a generated group.
    GroupOrder {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// First reduction prime.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Invariance (or semi-invariance) of a form under group generators.
    PolyCheck {
        file: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        semi: bool,
    },
    /// Diagonal (or block-scalar) stabilizer of a form.
    DiagStab {
        file: PathBuf,
        /// Blocks as `0,1;2,3`; omit for the diagonal stabilizer.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Monomial witnesses required of a smooth form.
    SmoothNecessary { file: PathBuf },
    /// Molien series coefficients, or a basis of invariants.
    Molien {
        file: PathBuf,
        #[arg(long, default_value_t = 24)]
        max_degree: u32,
        /// Use the derived subgroup, giving semi-invariant degrees.
        #[arg(long)]
        semi: bool,
        /// Print a basis of the invariants of this degree instead.
        #[arg(long)]
        basis: Option<u32>,
    },
    /// Verifies one registry record (or primitive group) by id.
    VerifyExample {
        id: String,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Verifies the registry, the Fermat grid and the invariant-degree suite.
    VerifyAll {
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        fermat_max_n: u32,
        #[arg(long, default_value_t = 5)]
        fermat_max_d: u32,
    },
    /// Consistency of a record's expected numbers with the bounds.
    BoundConsistency { id: String },
}

type CliResult = Result<u8, String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

impl Cli {
    fn group_options(&self) -> GroupOptions {
        GroupOptions {
            max_elements: self.max_elements,
            memory_budget_mb: self.memory_budget_mb,
            tier2: self.tier3,
            seed: self.seed,
            ..GroupOptions::default()
        }
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            group: self.group_options(),
            tier3: self.tier3,
            ..VerifyOptions::default()
        }
    }

    fn profile(&self) -> Profile {
        match self.profile {
            ProfileArg::Core => Profile::Core,
            ProfileArg::Extended => Profile::Extended,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Table2 { n_min, n_max, csv } => table2(cli, *n_min, *n_max, *csv),
        Command::Xi { n } => xi_cmd(cli, n),
        Command::Bound { partition, d } => bound_cmd(cli, partition, *d),
        Command::Highdim { n_min, n_max } => highdim(cli, *n_min, *n_max),
        Command::GroupOrder {
            file,
            strategy,
            prime,
        } => group_order(cli, file, *strategy, *prime),
        Command::PolyCheck { file, group, semi } => poly_check(cli, file, group, *semi),
        Command::DiagStab { file, blocks } => diag_stab(cli, file, blocks.as_deref()),
        Command::SmoothNecessary { file } => smooth(cli, file),
        Command::Molien {
            file,
            max_degree,
            semi,
            basis,
        } => molien(cli, file, *max_degree, *semi, *basis),
        Command::VerifyExample { id, registry } => verify_one(cli, id, registry.as_deref()),
        Command::VerifyAll {
            registry,
            fermat_max_n,
            fermat_max_d,
        } => verify_everything(cli, registry.as_deref(), *fermat_max_n, *fermat_max_d),
        Command::BoundConsistency { id } => consistency(cli, id),
    }
}

fn table2(cli: &Cli, n_min: u32, n_max: u32, csv: bool) -> CliResult {
    let rows = enumerate_exceptional(n_min, n_max).map_err(|e| e.to_string())?;
    if cli.json {
        print_json(&serde_json::to_value(&rows).expect("rows serialize"));
    } else if csv {
        println!("no,n,partition,max_d,ratio");
        for r in &rows {
            println!("{},{},\"{}\",{},{}", r.index, r.n, r.partition, r.max_d, r.ratio_display);
        }
    } else {
        println!("{:>3}  {:>2}  {:<12} {:>5}  {:>6}", "No.", "N", "partition", "max d", "ratio");
        for r in &rows {
            println!(
                "{:>3}  {:>2}  {:<12} {:>5}  {:>6}",
                r.index,
                r.n,
                r.partition.to_string(),
                r.max_d,
                r.ratio_display
            );
        }
    }
    Ok(0)
}

fn xi_cmd(cli: &Cli, ns: &[u32]) -> CliResult {
    let ns: Vec<u32> = if ns.is_empty() { (1..=12).collect() } else { ns.to_vec() };
    if cli.json {
        let v: Vec<Value> = ns
            .iter()
            .map(|&n| json!({ "n": n, "xi": xi(n).to_string() }))
            .collect();
        print_json(&Value::Array(v));
    } else {
        for n in ns {
            println!("{n:>3}  {}", xi(n));
        }
    }
    Ok(0)
}

fn bound_cmd(cli: &Cli, partition: &str, d: u32) -> CliResult {
    let pi = Partition::parse(partition).map_err(|e| e.to_string())?;
    let b = bound_b(&pi, d).map_err(|e| e.to_string())?;
    let generic = fermat_bound(pi.total(), d);
    let ratio = render_sig3(&ratio_at_3(&pi));
    let max_d = if pi.is_fermat() {
        None
    } else {
        max_exceptional_degree(&pi).ok()
    };
    if cli.json {
        print_json(&json!({
            "partition": pi.to_list(),
            "d": d,
            "bound": b.to_string(),
            "fermat_bound": generic.to_string(),
            "exceeds_fermat": b >= generic,
            "ratio_at_3": ratio,
            "max_exceptional_degree": max_d,
        }));
    } else {
        println!("B({pi}, {d}) = {b}");
        println!("B((1^{}), {d}) = {generic}", pi.total());
        println!("ratio at d = 3: {ratio}");
        if let Some(m) = max_d {
            println!("largest d with B >= Fermat bound: {m}");
        }
    }
    Ok(0)
}

fn highdim(cli: &Cli, n_min: u32, n_max: u32) -> CliResult {
    let reports = highdim_sweep(n_min, n_max).map_err(|e| e.to_string())?;
    let all = reports.iter().all(|r| r.holds);
    if cli.json {
        let v: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "holds": r.holds,
                    "worst": r.worst.to_list(),
                    "worst_ratio": render_sig3(&r.worst_ratio),
                    "partitions_checked": r.partitions_checked,
                })
            })
            .collect();
        print_json(&Value::Array(v));
    } else {
        for r in &reports {
            println!(
                "N = {:>2}  {}  worst {} ratio {} over {} partitions",
                r.n,
                if r.holds { "ok  " } else { "FAIL" },
                r.worst,
                render_sig3(&r.worst_ratio),
                r.partitions_checked
            );
        }
    }
    Ok(if all { 0 } else { 1 })
}

fn load_group(path: &Path) -> Result<autbound_core::group::GeneratedGroup, String> {
    GroupFile::from_json(&read(path)?)
        .and_then(|f| f.to_group())
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_poly(path: &Path) -> Result<autbound_core::poly::HomogPoly, String> {
    PolyFile::from_json(&read(path)?)
        .and_then(|f| f.to_poly())
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn group_order(cli: &Cli, file: &Path, strategy: StrategyArg, prime: Option<u64>) -> CliResult {
    let g = load_group(file)?;
    let opts = GroupOptions {
        strategy: match strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Closure => Strategy::Closure,
            StrategyArg::Bsgs => Strategy::Bsgs,
        },
        prime,
        ..cli.group_options()
    };
    match g.summary(&opts) {
        Ok(s) => {
            if cli.json {
                print_json(&serde_json::to_value(&s).expect("summary serializes"));
            } else {
                println!("order          {}", s.order);
                println!("scalar order   {}", s.scalar_order);
                println!("PGL order      {}", s.pgl_order);
                match s.center_order {
                    Some(c) => println!("center order   {c}"),
                    None => println!("center order   unknown (reducible)"),
                }
                println!("method         {:?} at primes {:?}", s.tier, s.primes);
            }
            Ok(0)
        }
        Err(e @ (autbound_core::group::GroupError::CapExceeded { .. }
        | autbound_core::group::GroupError::BudgetExceeded(_))) => {
            eprintln!("budget exhausted: {e}");
            Ok(3)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn poly_check(cli: &Cli, file: &Path, group: &Path, semi: bool) -> CliResult {
    let f = load_poly(file)?;
    let g = load_group(group)?;
    let invariant = is_invariant(g.generators(), &f).map_err(|e| e.to_string())?;
    let character = if semi {
        semi_invariant_character(g.generators(), &f).map_err(|e| e.to_string())?
    } else {
        None
    };
    let character_text: Option<Vec<String>> = character
        .as_ref()
        .map(|c| c.iter().map(autbound_core::arith::format_literal).collect());
    if cli.json {
        print_json(&json!({
            "invariant": invariant,
            "semi_invariant": semi.then_some(character.is_some()),
            "character": character_text,
        }));
    } else {
        println!("invariant: {invariant}");
        if semi {
            match &character_text {
                Some(c) => println!("semi-invariant with character values {c:?}"),
                None => println!("not semi-invariant"),
            }
        }
    }
    Ok(0)
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>, String> {
    s.split(';')
        .map(|b| {
            b.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| format!("block `{b}`: {e}")))
                .collect()
        })
        .collect()
}

fn diag_stab(cli: &Cli, file: &Path, blocks: Option<&str>) -> CliResult {
    let f = load_poly(file)?;
    let stab = match blocks {
        Some(b) => block_scalar_stabilizer(&f, &parse_blocks(b)?),
        None => diagonal_stabilizer(&f),
    }
    .map_err(|e| e.to_string())?;
    let minor = if blocks.is_none() {
        exponent_minor_bound(&f).ok()
    } else {
        None
    };
    let divisors: Vec<String> = stab.elementary_divisors.iter().map(|d| d.to_string()).collect();
    if cli.json {
        print_json(&json!({
            "order": stab.order.to_string(),
            "elementary_divisors": divisors,
            "minor": minor.as_ref().map(|m| json!({
                "rows": m.rows,
                "det": m.det.to_string(),
                "bound": m.bound.to_string(),
                "within_bound": m.within_bound,
            })),
        }));
    } else {
        println!("order: {}", stab.order);
        println!("elementary divisors: {}", divisors.join(" "));
        if let Some(m) = minor {
            println!("exponent minor det {} (bound {}, within: {})", m.det, m.bound, m.within_bound);
        }
    }
    Ok(0)
}

fn smooth(cli: &Cli, file: &Path) -> CliResult {
    let f = load_poly(file)?;
    let rep = smoothness_necessary(&f);
    if cli.json {
        print_json(&json!({
            "pass": rep.pass(),
            "witnesses": rep.witnesses,
            "failing": rep.failing(),
        }));
    } else {
        for (j, w) in rep.witnesses.iter().enumerate() {
            match w {
                Some(e) => println!("x{j}: {e:?}"),
                None => println!("x{j}: no witness"),
            }
        }
        println!("{}", if rep.pass() { "pass" } else { "fail" });
    }
    Ok(if rep.pass() { 0 } else { 1 })
}

fn molien(cli: &Cli, file: &Path, max_degree: u32, semi: bool, basis: Option<u32>) -> CliResult {
    let mut g = load_group(file)?;
    let opts = InvariantOptions {
        group: cli.group_options(),
        ..InvariantOptions::default()
    };
    if semi {
        g = g.derived_subgroup(&opts.group).map_err(|e| e.to_string())?;
    }
    if let Some(k) = basis {
        let forms = reynolds_basis(&g, k, &opts).map_err(|e| e.to_string())?;
        let files: Vec<PolyFile> = forms.iter().map(PolyFile::from_poly).collect();
        if cli.json {
            print_json(&serde_json::to_value(&files).expect("polynomials serialize"));
        } else {
            println!("{} invariant form(s) of degree {k}", forms.len());
            for f in &forms {
                println!("{}", f.to_text());
            }
        }
        return Ok(0);
    }
    let m = molien_series(&g, max_degree, &opts).map_err(|e| e.to_string())?;
    if cli.json {
        print_json(&serde_json::to_value(&m).expect("series serializes"));
    } else {
        println!("group order {} ({:?})", m.group_order, m.method);
        for (k, c) in m.coefficients.iter().enumerate() {
            println!("{k:>3}  {c}");
        }
    }
    Ok(0)
}

fn load_registry(path: Option<&Path>) -> Result<Vec<catalog::ExampleRecord>, String> {
    match path {
        Some(p) => catalog::registry_from_json(&read(p)?).map_err(|e| e.to_string()),
        None => Ok(catalog::registry()),
    }
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::SkippedTier3 => "skip (tier 3)",
        CheckStatus::SkippedBudget => "skip (budget)",
    }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!(
            "  [{}] {}: expected {}, computed {}",
            status_word(c.status),
            c.name,
            c.expected,
            c.computed
        );
    }
}

fn print_reports(cli: &Cli, reports: &[VerificationReport]) {
    if cli.json {
        print_json(&serde_json::to_value(reports).expect("reports serialize"));
        return;
    }
    for r in reports {
        let tier = r.tier.map(|t| format!(", {t:?}")).unwrap_or_default();
        println!("{}: {:?} ({} ms{tier})", r.id, r.overall, r.wall_ms);
        print_checks(&r.checks);
    }
}

fn verify_one(cli: &Cli, id: &str, registry: Option<&Path>) -> CliResult {
    let opts = cli.verify_options();
    let reg = load_registry(registry)?;
    let report = if let Some(rec) = reg.iter().find(|r| r.id == id) {
        verify_example(rec, &opts)
    } else if id.starts_with("fermat-") {
        verify_example(&catalog::lookup(id).map_err(|e| e.to_string())?, &opts)
    } else {
        verify_primitive(id, &opts).map_err(|e| e.to_string())?
    };
    let reports = [report];
    print_reports(cli, &reports);
    Ok(exit_code(&reports) as u8)
}

fn verify_everything(cli: &Cli, registry: Option<&Path>, max_n: u32, max_d: u32) -> CliResult {
    let opts = VerifyOptions {
        fermat_max_n: max_n,
        fermat_max_d: max_d,
        ..cli.verify_options()
    };
    let reg = load_registry(registry)?;
    let mut reports = verify_all(&reg, &opts);
    if registry.is_none() {
        for id in primitive_ids(cli.profile()) {
            reports.push(verify_primitive(id, &opts).map_err(|e| e.to_string())?);
        }
    }
    print_reports(cli, &reports);
    Ok(exit_code(&reports) as u8)
}

fn consistency(cli: &Cli, id: &str) -> CliResult {
    let rec = catalog::lookup(id).map_err(|e| e.to_string())?;
    let checks = bound_consistency(&rec).map_err(|e| e.to_string())?;
    let ok = checks.iter().all(|c| c.status == CheckStatus::Pass);
    if cli.json {
        print_json(&json!({ "id": id, "checks": checks, "pass": ok }));
    } else {
        println!("{id}: {}", if ok { "consistent" } else { "INCONSISTENT" });
        print_checks(&checks);
    }
    Ok(if ok { 0 } else { 1 })
}

//! Batch front end: every computation in the library behind one binary with
//! machine-readable output.
//!
//! Exit codes: 0 success, 1 cross-check disagreement (or internal
//! inconsistency), 2 usage error, 3 enumeration budget exhausted.

mod config;
mod output;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use permgamma::{
    build_group, decompose_enumerated, decompose_formula, enumerate_orbit_types, gamma_oracle,
    gamma_symmetric_group, growth, standard_sweep, Decomposition, Error, Identity, OrbitType,
    PartitionPair, DEFAULT_ENUMERATION_BUDGET,
};

use config::FileConfig;
use output::{Format, OutputTarget};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "permgamma",
    version,
    about = "Exact invariants of two-part permutation modules in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant by all routes and reconcile them
    Gamma(GammaArgs),
    /// Decompose the restricted module into summand classes
    Decompose(DecomposeArgs),
    /// Iterate tensor powers and report core growth
    #[command(name = "tensor-sim")]
    TensorSim(TensorArgs),
    /// Evaluate the combinatorial identity suite
    #[command(name = "verify-identities")]
    VerifyIdentities(VerifyArgs),
    /// Fixed-point oracle per elementary abelian orbit type
    Oracle(OracleArgs),
    /// Grid of gamma reports over p, n, r
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Characteristic (a prime)
    #[arg(long)]
    p: Option<u64>,
    /// Degree of the symmetric group
    #[arg(long)]
    n: Option<u64>,
    /// Size of the second row (the partition is (n-r, r))
    #[arg(long)]
    r: Option<u64>,
    /// Partition as "lambda1,lambda2"; alternative to --n/--r
    #[arg(long, value_name = "L1,L2")]
    lambda: Option<String>,
    /// Enumeration budget (tabloids); at least 10000
    #[arg(long)]
    budget: Option<u64>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Escalate any cross-check disagreement to exit code 1
    #[arg(long)]
    check: bool,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
    /// Optional TOML config with the same keys; flags win
    #[arg(long, value_name = "FILE")]
    config: Option<String>,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which decomposition route(s) to run
    #[arg(long, value_parser = ["formula", "enumerated", "both"])]
    route: Option<String>,
    /// Orbit type for the enumerated route, e.g. "1:2,2:1" (rank:count)
    #[arg(long, value_name = "J:COUNT,...")]
    orbit_type: Option<String>,
}

#[derive(Args)]
struct TensorArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of tensor powers to iterate
    #[arg(long)]
    m_max: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest number of composition parts in the sweep
    #[arg(long)]
    max_d: Option<u64>,
    /// Largest block count in the sweep
    #[arg(long)]
    max_k: Option<u64>,
    /// Verify a single identity by name instead of sweeping
    #[arg(long)]
    identity: Option<String>,
    /// Parameters for --identity as key=value, repeatable
    #[arg(long, value_name = "KEY=VALUE")]
    param: Vec<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict to one orbit type, e.g. "1:3"
    #[arg(long, value_name = "J:COUNT,...")]
    orbit_type: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated list of primes (defaults to --p or "2,3")
    #[arg(long, value_name = "P,P,...")]
    primes: Option<String>,
    /// Smallest degree (defaults to the prime)
    #[arg(long)]
    min_n: Option<u64>,
    /// Largest degree
    #[arg(long)]
    max_n: Option<u64>,
}

/// A failure with a process exit code attached.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_CHECK_FAILED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::NotPrime { .. }
            | Error::PrimeTooLarge { .. }
            | Error::InvalidPartition { .. }
            | Error::UnknownIdentity(_)
            | Error::ParamsOutOfDomain(_) => EXIT_USAGE,
            Error::InstanceTooLarge { .. } => EXIT_BUDGET,
            Error::NonIntegralMultiplicity { .. } | Error::SelfCheckFailed(_) => EXIT_CHECK_FAILED,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Failure {
        Failure {
            code: EXIT_CHECK_FAILED,
            message: format!("i/o error: {err}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gamma(args) => run_gamma(args),
        Command::Decompose(args) => run_decompose(args),
        Command::TensorSim(args) => run_tensor(args),
        Command::VerifyIdentities(args) => run_verify(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Sweep(args) => run_sweep(args),
    }
}

/// Flag values merged over the optional config file.
struct Settings {
    p: Option<u64>,
    n: Option<u64>,
    r: Option<u64>,
    lambda: Option<(u64, u64)>,
    budget: u64,
    format: Format,
    check: bool,
    out: Option<String>,
    file: FileConfig,
}

impl Settings {
    fn resolve(common: &CommonArgs) -> Result<Settings, Failure> {
        let file = match &common.config {
            Some(path) => FileConfig::load(path).map_err(Failure::usage)?,
            None => FileConfig::default(),
        };
        let lambda = match common.lambda.clone().or(file.lambda.clone()) {
            Some(text) => Some(parse_lambda(&text)?),
            None => None,
        };
        let budget = common.budget.or(file.budget).unwrap_or(DEFAULT_ENUMERATION_BUDGET);
        if budget < 10_000 {
            return Err(Failure::usage(format!(
                "--budget must be at least 10000, got {budget}"
            )));
        }
        Ok(Settings {
            p: common.p.or(file.p),
            n: common.n.or(file.n),
            r: common.r.or(file.r),
            lambda,
            budget,
            format: common.format.or(file.format()).unwrap_or(Format::Json),
            check: common.check || file.check.unwrap_or(false),
            out: common.out.clone().or(file.out.clone()),
            file,
        })
    }

    fn prime(&self) -> Result<u64, Failure> {
        self.p.ok_or_else(|| Failure::usage("missing --p"))
    }

    fn partition(&self) -> Result<PartitionPair, Failure> {
        if let Some((l1, l2)) = self.lambda {
            return Ok(PartitionPair::new(l1, l2)?);
        }
        let n = self.n.ok_or_else(|| Failure::usage("missing --n (or --lambda)"))?;
        let r = self.r.ok_or_else(|| Failure::usage("missing --r (or --lambda)"))?;
        Ok(PartitionPair::from_n_r(n, r)?)
    }

    fn output(&self) -> Result<OutputTarget, Failure> {
        Ok(OutputTarget::open(self.out.as_deref())?)
    }
}

fn parse_lambda(text: &str) -> Result<(u64, u64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::usage(format!(
            "--lambda expects \"l1,l2\", got `{text}`"
        )));
    }
    let l1 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("invalid lambda part `{}`", parts[0])))?;
    let l2 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("invalid lambda part `{}`", parts[1])))?;
    Ok((l1, l2))
}

fn parse_orbit_type(text: &str, n: u64, p: u64) -> Result<OrbitType, Failure> {
    let mut counts = BTreeMap::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (j, count) = piece.split_once(':').ok_or_else(|| {
            Failure::usage(format!("orbit type entries are RANK:COUNT, got `{piece}`"))
        })?;
        let j: u32 = j
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("invalid factor rank `{j}`")))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("invalid factor count `{count}`")))?;
        if count > 0 {
            counts.insert(j, count);
        }
    }
    Ok(OrbitType {
        p,
        n,
        a0: n % p,
        counts,
    })
}

fn parse_prime_list(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<u64>()
                .map_err(|_| Failure::usage(format!("invalid prime `{piece}`")))
        })
        .collect()
}

fn run_gamma(args: GammaArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let pp = settings.partition()?;
    let p = settings.prime()?;
    let report = gamma_symmetric_group(&pp, p, settings.budget)?;
    let mut out = settings.output()?;
    output::emit_gamma_report(&mut out, &report, settings.format)?;
    out.finish()?;
    if settings.check && !report.agree {
        return Err(Failure::check(format!(
            "gamma routes disagree at n={}, r={}, p={}",
            pp.n(),
            pp.r(),
            p
        )));
    }
    Ok(())
}

fn decomposition_entries_match(a: &Decomposition, b: &Decomposition) -> bool {
    a.entries() == b.entries()
}

fn run_decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let pp = settings.partition()?;
    let p = settings.prime()?;
    let route = args
        .route
        .or(settings.file.route.clone())
        .unwrap_or_else(|| "formula".to_string());
    let orbit_type = args.orbit_type.clone().or(settings.file.orbit_type.clone());

    let want_formula = route == "formula" || route == "both" || settings.check;
    let want_enumerated = route == "enumerated" || route == "both" || settings.check;
    if orbit_type.is_some() && want_formula {
        return Err(Failure::usage(
            "--orbit-type applies only to --route enumerated (the formula route is for the all-p-cycles type)",
        ));
    }

    let formula = if want_formula {
        Some(decompose_formula(&pp, p)?)
    } else {
        None
    };
    let enumerated = if want_enumerated {
        let t = match &orbit_type {
            Some(text) => parse_orbit_type(text, pp.n(), p)?,
            None => OrbitType::p_cycles(pp.n(), p)?,
        };
        let group = build_group(&t)?;
        Some(decompose_enumerated(&pp, &group, settings.budget)?)
    } else {
        None
    };

    let tag_routes = formula.is_some() && enumerated.is_some();
    let mut out = settings.output()?;
    if let Some(dec) = &formula {
        output::emit_decomposition(&mut out, dec, tag_routes.then_some("formula"), settings.format)?;
    }
    if let Some(dec) = &enumerated {
        output::emit_decomposition(
            &mut out,
            dec,
            tag_routes.then_some("enumerated"),
            settings.format,
        )?;
    }
    out.finish()?;

    if settings.check {
        let (f, e) = (formula.as_ref().unwrap(), enumerated.as_ref().unwrap());
        if !decomposition_entries_match(f, e) {
            return Err(Failure::check(format!(
                "formula and enumerated decompositions disagree at n={}, r={}, p={}",
                pp.n(),
                pp.r(),
                p
            )));
        }
    }
    Ok(())
}

fn run_tensor(args: TensorArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let pp = settings.partition()?;
    let p = settings.prime()?;
    let m_max = args.m_max.or(settings.file.m_max).unwrap_or(200);
    if m_max < 1 {
        return Err(Failure::usage("--m-max must be at least 1"));
    }
    let estimate = growth(&pp, p, m_max)?;
    let mut out = settings.output()?;
    output::emit_growth(&mut out, &estimate, settings.format)?;
    out.finish()?;
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let identities = if let Some(name) = &args.identity {
        let mut params = BTreeMap::new();
        for pair in &args.param {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Failure::usage(format!("--param expects key=value, got `{pair}`"))
            })?;
            let value: u64 = value
                .parse()
                .map_err(|_| Failure::usage(format!("invalid value in `{pair}`")))?;
            params.insert(key.trim().to_string(), value);
        }
        vec![Identity::parse(name, &params)?]
    } else {
        let primes = match settings.p {
            Some(p) => vec![p],
            None => vec![2, 3, 5, 7],
        };
        for &p in &primes {
            if !permgamma::is_prime(p) {
                return Err(Failure::from(Error::NotPrime { p }));
            }
        }
        let max_d = args.max_d.or(settings.file.max_d).unwrap_or(6);
        let max_k = args.max_k.or(settings.file.max_k).unwrap_or(8);
        standard_sweep(&primes, max_d, max_k)
    };

    let mut out = settings.output()?;
    let mut all_equal = true;
    output::emit_identity_header(&mut out, settings.format)?;
    for identity in &identities {
        let check = identity.verify()?;
        all_equal &= check.equal();
        output::emit_identity_row(&mut out, identity, &check, settings.format)?;
    }
    out.finish()?;
    if settings.check && !all_equal {
        return Err(Failure::check("identity sweep found a counterexample"));
    }
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let pp = settings.partition()?;
    let p = settings.prime()?;
    let orbit_type = args.orbit_type.clone().or(settings.file.orbit_type.clone());
    let types = match &orbit_type {
        Some(text) => vec![parse_orbit_type(text, pp.n(), p)?],
        None => enumerate_orbit_types(pp.n(), p)?,
    };
    let mut out = settings.output()?;
    output::emit_oracle_header(&mut out, settings.format)?;
    for t in &types {
        let (gamma, witness) = gamma_oracle(&pp, t, settings.budget)?;
        output::emit_oracle_row(&mut out, &pp, t, &gamma, &witness.line, settings.format)?;
    }
    out.finish()?;
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(&args.common)?;
    let primes = match args.primes.clone().or(settings.file.primes.clone()) {
        Some(text) => parse_prime_list(&text)?,
        None => match settings.p {
            Some(p) => vec![p],
            None => vec![2, 3],
        },
    };
    let max_n = args
        .max_n
        .or(settings.file.max_n)
        .ok_or_else(|| Failure::usage("missing --max-n"))?;
    let min_n = args.min_n.or(settings.file.min_n).unwrap_or(0);

    let mut out = settings.output()?;
    let mut disagreements = 0u64;
    for &p in &primes {
        if !permgamma::is_prime(p) {
            return Err(Failure::from(Error::NotPrime { p }));
        }
        for n in p.max(min_n).max(1)..=max_n {
            for r in 0..=n / 2 {
                let pp = PartitionPair::from_n_r(n, r)?;
                let report = gamma_symmetric_group(&pp, p, settings.budget)?;
                if !report.agree {
                    disagreements += 1;
                }
                if settings.check && !report.oracle_skipped {
                    // Also reconcile the two decomposition routes while the
                    // instance is within budget.
                    let group = build_group(&OrbitType::p_cycles(n, p)?)?;
                    let formula = decompose_formula(&pp, p)?;
                    let enumerated = decompose_enumerated(&pp, &group, settings.budget)?;
                    if !decomposition_entries_match(&formula, &enumerated) {
                        disagreements += 1;
                    }
                }
                output::emit_gamma_report(&mut out, &report, settings.format)?;
            }
        }
    }
    out.finish()?;
    if settings.check && disagreements > 0 {
        return Err(Failure::check(format!(
            "{disagreements} instance(s) failed cross-checks"
        )));
    }
    Ok(())
}

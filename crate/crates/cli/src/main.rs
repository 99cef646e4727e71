use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leecode::hensel::{factor_bivariate, FactorOptions, MainVar};
use leecode::nega::{lee_weight, nega_construct, nega_encode, unique_decode, wu_list_decode};
use leecode::rs::{list_decode, ListDecodeConfig, RSCode};
use leecode::{BiPoly, Error, GaloisRing, Poly};
use leecode_cli::oracle::oracle_lee_min_distance;
use leecode_cli::selftest::{run_all, SuiteSizes};
use leecode_cli::text::{data_lines, format_ring_word, format_z4_word, parse_ring_word, parse_z4_word};
use leecode_cli::trials::{run_trials, ErrorModel, Family, TrialConfig, TrialReport};

#[derive(Parser)]
#[command(name = "leecode", version, about = "Galois-ring list decoding and Z4 negacyclic codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct RingArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Defaults to $LEECODE_SEED, then 0.
    #[arg(long, env = "LEECODE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone, Copy)]
struct TrialArgs {
    /// Run seeded random trials instead of reading words from stdin.
    #[arg(long)]
    trials: Option<usize>,
    /// hamming, lee, lee-upto, no-double or with-double.
    #[arg(long)]
    model: Option<ErrorModel>,
    /// Also print `trial,outcome,listsize,micros` lines.
    #[arg(long)]
    machine: bool,
    /// Worker threads for trials; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the parameters of GR(p^r, m).
    GrInfo {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Factor a bivariate polynomial read from stdin as `i j [coef]` lines.
    Factor {
        #[command(flatten)]
        ring: RingArgs,
        /// Main variable, x or y.
        #[arg(long, default_value = "y")]
        main: String,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Encode `poly{...}` messages from stdin, one per line.
    RsEncode {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// List-decode received words from stdin, one per line.
    RsDecode {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        mult: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        trial: TrialArgs,
    },
    /// Encode comma-separated Z4 messages from stdin.
    NegaEncode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Decode up to t Lee errors in words from stdin.
    NegaDecode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// List-decode up to Lee radius tau.
    NegaListdecode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long, default_value_t = 2)]
        mult: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        trial: TrialArgs,
    },
    /// Minimum Lee distance by enumerating all codewords (k <= 12).
    OracleDistance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
}

enum Failure {
    /// Exit code 1.
    Decode(String),
    /// Exit code 2.
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DecodingFailure | Error::FactorizationFailed(_) | Error::NoSquarefreeSpecialization => {
                Failure::Decode(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Invalid(format!("reading stdin: {e}")))?;
    Ok(s)
}

fn ring_of(args: RingArgs) -> Result<std::sync::Arc<GaloisRing>, Failure> {
    Ok(GaloisRing::new(args.p, args.r, args.m)?)
}

fn gr_info(args: RingArgs) -> CmdResult {
    let ring = ring_of(args)?;
    println!("{}", ring.header());
    println!("p={} r={} m={} size={}", ring.p(), ring.r(), ring.m(), ring.size());
    println!("theta={}", ring.format_elem(ring.theta()));
    println!("teichmuller={}", ring.teichmuller_set().len());
    Ok(())
}

fn factor(args: RingArgs, main: &str, seed: u64) -> CmdResult {
    let ring = ring_of(args)?;
    let main = match main {
        "x" | "X" => MainVar::X,
        "y" | "Y" => MainVar::Y,
        other => return Err(Failure::Invalid(format!("main variable must be x or y, got {other:?}"))),
    };
    let q = BiPoly::parse(&ring, &read_stdin()?)?;
    let opts = FactorOptions {
        max_subset: None,
        seed,
    };
    let fl = factor_bivariate(&ring, &q, main, &opts)?;
    println!("# unit");
    print!("{}", fl.unit.to_text(&ring));
    for (i, (f, e)) in fl.factors.iter().enumerate() {
        println!("# factor {} multiplicity {e}", i + 1);
        print!("{}", f.to_text(&ring));
    }
    Ok(())
}

fn rs_encode(args: RingArgs, n: usize, k: usize) -> CmdResult {
    let ring = ring_of(args)?;
    let code = RSCode::new(&ring, n, k)?;
    for line in data_lines(&read_stdin()?) {
        let f = Poly::parse(&ring, line)?;
        println!("{}", format_ring_word(&ring, &code.encode(&f)?));
    }
    Ok(())
}

fn print_report(report: &TrialReport, machine: bool) -> CmdResult {
    print!("{}", report.summary());
    if machine {
        print!("{}", report.machine_lines());
    }
    if report.successes() == report.results.len() {
        Ok(())
    } else {
        Err(Failure::Decode(format!(
            "{} of {} trials did not recover the codeword",
            report.results.len() - report.successes(),
            report.results.len()
        )))
    }
}

fn rs_decode(args: RingArgs, n: usize, k: usize, t: usize, mult: usize, seed: u64, trial: TrialArgs) -> CmdResult {
    if let Some(trials) = trial.trials {
        let cfg = TrialConfig {
            family: Family::Rs {
                p: args.p,
                r: args.r,
                m: args.m,
                n,
                k,
            },
            radius: t,
            mult,
            trials,
            seed,
            model: trial.model.unwrap_or(ErrorModel::Hamming),
            threads: trial.threads,
        };
        return print_report(&run_trials(&cfg)?, trial.machine);
    }
    let ring = ring_of(args)?;
    let code = RSCode::new(&ring, n, k)?;
    let cfg = ListDecodeConfig::new(&code, t, mult)?;
    let mut empty = 0;
    for (i, line) in data_lines(&read_stdin()?).enumerate() {
        let y = parse_ring_word(&ring, line)?;
        let list = match list_decode(&code, &y, &cfg, seed) {
            Ok(list) => list,
            Err(e @ (Error::InvalidParams(_) | Error::Parse(_))) => return Err(e.into()),
            Err(_) => Vec::new(),
        };
        println!("word {i}: {} candidates", list.len());
        for c in &list {
            println!("distance={} f={}", c.distance, c.f.to_text(&ring));
        }
        empty += usize::from(list.is_empty());
    }
    if empty > 0 {
        return Err(Failure::Decode(format!("{empty} words without candidates")));
    }
    Ok(())
}

fn nega_encode_cmd(n: usize, t: usize) -> CmdResult {
    let code = nega_construct(n, t)?;
    for line in data_lines(&read_stdin()?) {
        println!("{}", format_z4_word(&nega_encode(&code, &parse_z4_word(line)?)?));
    }
    Ok(())
}

fn nega_decode_cmd(n: usize, t: usize) -> CmdResult {
    let code = nega_construct(n, t)?;
    let mut failed = 0;
    for line in data_lines(&read_stdin()?) {
        let y = parse_z4_word(line)?;
        if y.len() != n {
            return Err(Failure::Invalid(format!("word has {} entries, expected {n}", y.len())));
        }
        match unique_decode(&code, &y) {
            Ok((c, e)) => {
                println!("codeword={}", format_z4_word(&c));
                println!("error={}", format_z4_word(&e));
            }
            Err(_) => {
                println!("decoding failure");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Decode(format!("{failed} words not decoded")));
    }
    Ok(())
}

fn nega_listdecode(n: usize, t: usize, tau: usize, mult: usize, seed: u64, trial: TrialArgs) -> CmdResult {
    if let Some(trials) = trial.trials {
        let cfg = TrialConfig {
            family: Family::Nega { n, t },
            radius: tau,
            mult,
            trials,
            seed,
            model: trial.model.unwrap_or(ErrorModel::NoDouble),
            threads: trial.threads,
        };
        return print_report(&run_trials(&cfg)?, trial.machine);
    }
    let code = nega_construct(n, t)?;
    let mut empty = 0;
    for (i, line) in data_lines(&read_stdin()?).enumerate() {
        let y = parse_z4_word(line)?;
        let list = match wu_list_decode(&code, &y, tau, mult, seed) {
            Ok(list) => list,
            Err(e @ (Error::InvalidParams(_) | Error::RadiusInfeasible { .. })) => return Err(e.into()),
            Err(_) => Vec::new(),
        };
        println!("word {i}: {} candidates", list.len());
        for c in &list {
            println!(
                "distance={} codeword={} error={}",
                lee_weight(&c.error),
                format_z4_word(&c.codeword),
                format_z4_word(&c.error)
            );
        }
        empty += usize::from(list.is_empty());
    }
    if empty > 0 {
        return Err(Failure::Decode(format!("{empty} words without candidates")));
    }
    Ok(())
}

fn oracle_distance(n: usize, t: usize) -> CmdResult {
    let code = nega_construct(n, t)?;
    println!("k={}", code.k);
    println!("d_lee={}", oracle_lee_min_distance(&code)?);
    Ok(())
}

fn selftest(quick: bool, seed: u64) -> CmdResult {
    let sizes = if quick { SuiteSizes::QUICK } else { SuiteSizes::FULL };
    let results = run_all(sizes, seed);
    for r in &results {
        println!("{}", r.line());
    }
    if results.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Decode("property violations found".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::GrInfo { ring } => gr_info(ring),
        Cmd::Factor { ring, main, seed } => factor(ring, &main, seed.seed),
        Cmd::RsEncode { ring, n, k } => rs_encode(ring, n, k),
        Cmd::RsDecode {
            ring,
            n,
            k,
            t,
            mult,
            seed,
            trial,
        } => rs_decode(ring, n, k, t, mult, seed.seed, trial),
        Cmd::NegaEncode { n, t } => nega_encode_cmd(n, t),
        Cmd::NegaDecode { n, t } => nega_decode_cmd(n, t),
        Cmd::NegaListdecode {
            n,
            t,
            tau,
            mult,
            seed,
            trial,
        } => nega_listdecode(n, t, tau, mult, seed.seed, trial),
        Cmd::OracleDistance { n, t } => oracle_distance(n, t),
        Cmd::Selftest { quick, seed } => selftest(quick, seed.seed),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Decode(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

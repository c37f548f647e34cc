use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pfafflab::hierarchy;
use pfafflab::moments::{gen_instance, InstanceSpec, InstanceTemplate, Mode};
use pfafflab::suites::{self, Suite, SuiteConfig};
use pfafflab::{Error, Result};

#[derive(Parser)]
#[command(name = "pfafflab", version, about = "Exact Pfaffian MSOP constructions and Pfaff lattice identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Concrete,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Verify {
        /// Comma-separated suite names, or `all`.
        #[arg(long, default_value = "pfaffian-core")]
        suite: String,
        #[arg(long, value_enum, default_value = "generic")]
        mode: ModeArg,
        #[arg(long = "max-index", default_value_t = 5)]
        max_index: u32,
        #[arg(long = "max-order", default_value_t = 3)]
        max_order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance JSON; overrides mode and automatic bounds.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "report.json")]
        report: PathBuf,
        /// Also write the reports as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record wall time per report.
        #[arg(long)]
        timings: bool,
        /// Permit --max-index above 9.
        #[arg(long)]
        allow_large_index: bool,
    },
    /// Write a deterministic instance from a template.
    GenInstance {
        #[arg(long)]
        template: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a bilinear equation by id.
    Explain { eq_id: String },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify { suite, mode, max_index, max_order, seed, instance, report, csv, timings, allow_large_index } => {
            let instance = match instance {
                Some(p) => Some(InstanceSpec::from_json(&read(&p)?).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?),
                None => None,
            };
            let mode = match (&instance, mode) {
                (Some(spec), _) => spec.mode,
                (None, ModeArg::Generic) => Mode::Generic,
                (None, ModeArg::Concrete) => Mode::Concrete,
            };
            let cfg = SuiteConfig {
                suites: Suite::parse_list(&suite)?,
                mode,
                max_total_index: max_index,
                max_order,
                seed,
                instance,
                allow_large_index,
                timings,
            };
            let reports = suites::run_suites(&cfg)?;
            suites::write_report(&report, &cfg, &reports)?;
            if let Some(p) = csv {
                std::fs::write(&p, suites::report_csv(&reports)).map_err(|e| Error::Config(format!("writing {}: {e}", p.display())))?;
            }
            let s = suites::summarize(&reports);
            println!("pass {}  fail {}  degenerate {}  skipped {}  -> {}", s.pass, s.fail, s.degenerate, s.skipped, report.display());
            Ok(suites::exit_code(&reports) as u8)
        }
        Command::GenInstance { template, seed, out } => {
            let t: InstanceTemplate =
                serde_json::from_str(&read(&template)?).map_err(|e| Error::Config(format!("{}: {e}", template.display())))?;
            let spec = gen_instance(&t, seed)?;
            let mut text = spec.canonical_json();
            text.push('\n');
            std::fs::write(&out, text).map_err(|e| Error::Config(format!("writing {}: {e}", out.display())))?;
            Ok(0)
        }
        Command::Explain { eq_id } => {
            println!("{}", hierarchy::explain(&eq_id)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

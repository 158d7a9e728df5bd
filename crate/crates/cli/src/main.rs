//! `qsign`: command-line front end for the qsign verification toolkit.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsign_core::exactformula::{c_exact, c_exact_many, threshold_lhs_with, ThresholdForm};
use qsign_core::modularcheck::validation_suite;
use qsign_core::qseries::{q10_series, SeriesExport};
use qsign_core::verifier::{
    full_pipeline, run_bound_sweeps_with, verify_conjecture, PipelineConfig, SweepConfig, ThresholdPoint,
    IDENTITY_K_MAX, MODULAR_PREC,
};
use qsign_core::{Delta, Error, ErrReal};

use render::{Format, Rendered};

/// Exit status for a run whose checks all passed.
const EXIT_PASS: u8 = 0;
/// Bad arguments or an input outside an operation's domain.
const EXIT_USAGE: u8 = 1;
/// A numerical result that could not be certified.
const EXIT_NON_DEFINITIVE: u8 = 2;
/// A check that failed.
const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qsign", version, about = "Sign-pattern verification for the coefficients of Q10 and 1/Q10")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Working precision in bits.
    #[arg(
        long,
        global = true,
        env = "QSIGN_PRECISION_BITS",
        default_value_t = 128,
        value_parser = clap::value_parser!(u32).range(64..)
    )]
    precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Published,
    Corrected,
}

impl From<FormArg> for ThresholdForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Published => ThresholdForm::Published,
            FormArg::Corrected => ThresholdForm::Corrected,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficients of the series up to `q^order`.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[arg(long)]
        order: usize,
    },
    /// Coefficients from the exact formula, with rigorous error and tail bounds.
    Exact {
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[arg(long)]
        n: u64,
        /// Evaluate every index from `n` to this one.
        #[arg(long)]
        to: Option<u64>,
        /// Fixed cutoff; by default the cutoff is chosen and doubled automatically.
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Brute-force sign check of every coefficient up to `n_max`.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[arg(long)]
        n_max: u64,
    },
    /// Kloosterman, twisted-sum and Bessel bound sweeps with identity checks.
    Sweeps {
        #[arg(long, default_value_t = 500)]
        k_max: u64,
        #[arg(long, default_value_t = IDENTITY_K_MAX)]
        identity_k_max: u64,
        #[arg(long, default_value_t = 20)]
        n_samples: u64,
    },
    /// Closed-form left-hand side of the threshold inequality.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = FormArg::Published)]
        form: FormArg,
    },
    /// Numerical checks of the modular identities.
    Modular {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Every phase in sequence, writing artifacts to `output_dir`.
    Pipeline {
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Restrict to one delta; both by default.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<Delta>,
        #[arg(long, default_value_t = 3000)]
        n_max: u64,
        #[arg(long, default_value_t = 500)]
        sweep_k_max: u64,
        #[arg(long, default_value_t = 20)]
        sweep_n_samples: u64,
        #[arg(long, default_value_t = 10)]
        oracle_from: u64,
        #[arg(long, default_value_t = 300)]
        oracle_to: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TargetNotMet { .. } => EXIT_NON_DEFINITIVE,
        Error::ImaginaryResidue { .. } | Error::Inconsistent(_) | Error::Pole(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn verdict(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAILURE
    }
}

fn run(cmd: Command, prec: u32, format: Format) -> qsign_core::Result<(Rendered, u8)> {
    Ok(match cmd {
        Command::Expand { delta, order } => {
            let export = SeriesExport::new(delta, &q10_series(delta, order));
            (render::series(&export, format)?, EXIT_PASS)
        }
        Command::Exact { delta, n, to, k_max } => match to {
            None => {
                let e = c_exact(delta, n, k_max, prec)?;
                let code = if e.definitive { EXIT_PASS } else { EXIT_NON_DEFINITIVE };
                (render::exact(std::slice::from_ref(&e), false, format)?, code)
            }
            Some(to) => {
                if to < n {
                    return Err(Error::Domain(format!("empty range {n}..={to}")));
                }
                let ns: Vec<u64> = (n..=to).collect();
                let evals = c_exact_many(delta, &ns, k_max, prec)?;
                let code = if evals.iter().all(|e| e.definitive) { EXIT_PASS } else { EXIT_NON_DEFINITIVE };
                (render::exact(&evals, true, format)?, code)
            }
        },
        Command::Verify { delta, n_max } => {
            let r = verify_conjecture(delta, n_max, prec)?;
            let code = verdict(r.pass);
            (render::sign_report(&r, format)?, code)
        }
        Command::Sweeps { k_max, identity_k_max, n_samples } => {
            let cfg = SweepConfig { k_max, identity_k_max: identity_k_max.min(k_max), n_samples, prec };
            let r = run_bound_sweeps_with(&cfg)?;
            let code = verdict(r.pass);
            (render::sweeps(&r, format)?, code)
        }
        Command::Threshold { delta, n, form } => {
            let form = ThresholdForm::from(form);
            let v = threshold_lhs_with(delta, n, form, prec)?;
            let point = ThresholdPoint {
                delta,
                n,
                form,
                lhs: v.to_string_digits(15),
                lhs_err: v.rad_f64(),
                below_one: v.certainly_lt(&ErrReal::one(prec)),
            };
            let code = verdict(point.below_one);
            (render::threshold(&point, format)?, code)
        }
        Command::Modular { seed } => {
            let records = validation_suite(seed, MODULAR_PREC.max(prec));
            let code = verdict(records.iter().all(|r| r.pass));
            (render::modular(&records, format)?, code)
        }
        Command::Pipeline {
            output_dir,
            delta,
            n_max,
            sweep_k_max,
            sweep_n_samples,
            oracle_from,
            oracle_to,
            seed,
        } => {
            let config = PipelineConfig {
                deltas: delta.map_or_else(|| Delta::BOTH.to_vec(), |d| vec![d]),
                n_max,
                sweep_k_max,
                identity_k_max: IDENTITY_K_MAX.min(sweep_k_max),
                sweep_n_samples,
                oracle_range: [oracle_from, oracle_to],
                modular_seed: seed,
                precision_bits: prec,
                output_dir,
            };
            let r = full_pipeline(&config)?;
            let code = verdict(r.pass);
            (render::pipeline(&r, format)?, code)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    let g = cli.global;
    if let Some(t) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            eprintln!("qsign: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command, g.precision_bits, g.format) {
        Ok((out, code)) => match out.emit(g.output.as_deref()) {
            Ok(()) => ExitCode::from(code),
            Err(e) => {
                eprintln!("qsign: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Err(e) => {
            eprintln!("qsign: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

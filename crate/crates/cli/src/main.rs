//! `pscf`: continued fractions of square roots of power sums.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pscf_core::approx::{construct_eta, verify_eta};
use pscf_core::cf::{self, CfError, QuadSurd, DEFAULT_MAX_STEPS};
use pscf_core::hypothesis::{check_hypothesis, forecast_period};
use pscf_core::lab::{
    detect_stabilization, fit_from_scan, period_scan, run_experiment, ExperimentConfig, FunctionalOptions, LabError,
    ScanOptions, EXIT_BUDGET, EXIT_FIT, EXIT_PARSE,
};
use pscf_core::recurrence::FitOptions;
use pscf_core::{BigInt, PowerSumQ, Rational};

#[derive(Parser)]
#[command(name = "pscf", version, about = "Continued fractions of square roots of power sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction expansions.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Power-sum utilities.
    #[command(subcommand)]
    Ps(PsCommand),
    /// Decide the approximation hypothesis on both parity classes.
    Hypothesis { alpha: String },
    /// Build and verify the approximation of (√α + β)/γ along n = 2m + r.
    Eta {
        alpha: String,
        beta: String,
        gamma: String,
        r: u32,
        /// Target ratio in (0, 1), e.g. 1/9.
        t: String,
        /// Range of m for the numeric check.
        #[arg(long, default_value = "3..12")]
        m_range: String,
        /// Starting interval precision in bits.
        #[arg(long, default_value_t = 300)]
        bits: u32,
    },
    /// Fit a functional continued fraction for √α(2m + r).
    Fit {
        alpha: String,
        r: u32,
        #[arg(long)]
        m_range: String,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        holdout: usize,
        /// Accept fitted power sums with non-integer coefficients.
        #[arg(long)]
        allow_rational: bool,
    },
    /// Batch experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum CfCommand {
    /// Expansion of √D.
    Sqrt {
        d: BigInt,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        budget: usize,
    },
    /// Expansion of (√D + P)/Q.
    Surd {
        #[arg(allow_negative_numbers = true)]
        p: BigInt,
        #[arg(allow_negative_numbers = true)]
        q: BigInt,
        d: BigInt,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum PsCommand {
    /// Evaluate a power sum at an index.
    Eval { alpha: String, n: u32 },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl ToString) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.to_string(),
        }
    }
}

fn cf_failure(e: CfError) -> Failure {
    let code = match e {
        CfError::StepBudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_PARSE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn power_sum(arg: &str, text: &str) -> Result<PowerSumQ, Failure> {
    text.parse().map_err(|e: pscf_core::powersum::ParseError| {
        let caret = " ".repeat(e.column.saturating_sub(1));
        Failure::parse(format!("{arg}: {e}\n  {text}\n  {caret}^"))
    })
}

fn m_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::parse(format!("m range must look like a..b, got '{text}'"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Cf(CfCommand::Sqrt { d, budget }) => {
            let e = cf::sqrt_cf_with_budget(&d, budget).map_err(cf_failure)?;
            println!("sqrt({d}) = {e}");
            println!("R = {}", e.period_len());
        }
        Command::Cf(CfCommand::Surd { p, q, d, budget }) => {
            let x = QuadSurd::new(p, q, d).map_err(cf_failure)?;
            let e = cf::surd_cf(&x, budget).map_err(cf_failure)?;
            println!("{x} = {e}");
            println!("R = {}", e.period_len());
        }
        Command::Ps(PsCommand::Eval { alpha, n }) => {
            let a = power_sum("alpha", &alpha)?;
            println!("{}", a.evaluate(n));
        }
        Command::Hypothesis { alpha } => {
            let a = power_sum("alpha", &alpha)?;
            println!("alpha = {a}");
            for r in 0..2 {
                let rep = check_hypothesis(&a, r).map_err(Failure::parse)?;
                println!("[r = {r}]");
                println!("{rep}");
            }
            match forecast_period(&a) {
                Ok(f) => println!("forecast = {}", f.overall),
                Err(e) => println!("forecast = unavailable: {e}"),
            }
        }
        Command::Eta {
            alpha,
            beta,
            gamma,
            r,
            t,
            m_range: range,
            bits,
        } => {
            let (a, b, g) = (
                power_sum("alpha", &alpha)?,
                power_sum("beta", &beta)?,
                power_sum("gamma", &gamma)?,
            );
            let t: Rational = t
                .parse()
                .map_err(|_| Failure::parse(format!("t must be a rational, got '{t}'")))?;
            let (lo, hi) = m_range(&range)?;
            let ec = construct_eta(&a, &b, &g, r, &t).map_err(Failure::parse)?;
            println!("{ec}");
            let rep = verify_eta(&ec, &a, &b, &g, r, lo..=hi, bits).map_err(|e| Failure {
                code: EXIT_BUDGET,
                message: e.to_string(),
            })?;
            for row in &rep.rows {
                println!("m = {}: ratio <= {:e} ({} bits)", row.m, row.ratio_upper(), row.bits);
            }
            println!("max_ratio = {:e}", rep.max_ratio);
            println!("bounded = {}", rep.bounded);
            println!("non_increasing = {}", rep.non_increasing);
            println!("postcondition = {}", rep.postcondition_ok);
            if !rep.passed() {
                return Err(Failure {
                    code: EXIT_FIT,
                    message: "approximation check failed".into(),
                });
            }
        }
        Command::Fit {
            alpha,
            r,
            m_range: range,
            window,
            budget,
            holdout,
            allow_rational,
        } => {
            let a = power_sum("alpha", &alpha)?;
            let (lo, hi) = m_range(&range)?;
            let opts = FunctionalOptions {
                window,
                scan: ScanOptions {
                    step_budget: budget,
                    ..ScanOptions::default()
                },
                fit: FitOptions {
                    integrality_required: !allow_rational,
                    holdout,
                },
                ..FunctionalOptions::default()
            };
            let scan = period_scan(&a, r, lo..=hi, opts.scan).map_err(Failure::parse)?;
            for row in &scan.rows {
                let len = row
                    .period_len
                    .map_or_else(|| row.status.label().to_string(), |l| l.to_string());
                println!("m = {}: R = {len}", row.m);
            }
            let fit_failure = |e: LabError| Failure {
                code: EXIT_FIT,
                message: e.to_string(),
            };
            let Some(period_len) = detect_stabilization(&scan, window) else {
                let code = if scan.budget_exceeded() > 0 {
                    EXIT_BUDGET
                } else {
                    EXIT_FIT
                };
                return Err(Failure {
                    code,
                    message: LabError::NotStabilized.to_string(),
                });
            };
            let family = fit_from_scan(&a, &scan, period_len, opts).map_err(fit_failure)?;
            println!("{family}");
            let v: Vec<String> = family.validated.iter().map(ToString::to_string).collect();
            println!("validated_m = {}", v.join(" "));
        }
        Command::Experiment(ExperimentCommand::Run { config }) => {
            let cfg = ExperimentConfig::from_file(&config)
                .map_err(|e| Failure::parse(format!("{}: {e}", config.display())))?;
            let out = run_experiment(&cfg).map_err(|e| Failure::parse(format!("cannot write outputs: {e}")))?;
            print!("{}", out.findings);
            if out.exit_code != 0 {
                return Err(Failure {
                    code: out.exit_code,
                    message: format!("experiment finished with exit code {}", out.exit_code),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}

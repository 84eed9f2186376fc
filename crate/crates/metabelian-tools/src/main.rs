//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 resource-limit abort
//! (word-length ceiling, oracle guards), 1 anything else (IO, internal).

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use metabelian::classify::classify_with_limit;
use metabelian::intlinalg::smith_normal_form;
use metabelian::presentation::{
    parse_presentation_with_limit, Presentation, PresentationParseError,
};
use metabelian::randgen::{exact_full_rank_probability_with_guards, OracleGuards};
use metabelian::tietze::{normalize_to_snf_with_limit, TietzeError, DEFAULT_RELATOR_LENGTH_LIMIT};
use metabelian::words::WordParseErrorKind;
use metabelian_tools::experiment::{run_experiment, ExperimentConfig};
use metabelian_tools::formats;

#[derive(Parser)]
#[command(
    name = "metabelian",
    about = "Analyze finite presentations of metabelian groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a presentation: full rank, structure data, verdicts.
    Analyze {
        /// Path to a presentation file, or an inline `< a, b | ... >` string.
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Ceiling on relator length during parsing and normalization.
        #[arg(long, default_value_t = DEFAULT_RELATOR_LENGTH_LIMIT)]
        limit_word_length: usize,
    },
    /// Rewrite a presentation into Smith normal form with an isomorphism record.
    Normalize {
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_RELATOR_LENGTH_LIMIT)]
        limit_word_length: usize,
    },
    /// Smith normal form of an integer matrix (JSON input).
    Snf {
        /// Path to a matrix JSON file, or an inline JSON object.
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Cross-check against the minor-gcd oracle up to this dimension.
        #[arg(long, default_value_t = metabelian::intlinalg::DEFAULT_MINOR_BOUND)]
        limit_minor_dim: usize,
    },
    /// Monte Carlo estimate of the full-rank probability.
    Experiment {
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        relators: usize,
        /// Comma-separated relator lengths, e.g. `4,16,64`.
        #[arg(long)]
        lengths: String,
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Worker threads (0 = rayon default). Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Exact full-rank probability for small (n, m, ell).
    ExactProb {
        gens: usize,
        relators: usize,
        length: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Raise the oracle guards (generators and relators up to this value).
        #[arg(long)]
        max_rank_guard: Option<usize>,
        /// Raise the oracle length guard.
        #[arg(long)]
        max_length_guard: Option<u32>,
    },
}

enum AppError {
    Parse(String),
    Limit(String),
    Other(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Parse(_) => 2,
            AppError::Limit(_) => 3,
            AppError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Parse(m) | AppError::Limit(m) | AppError::Other(m) => m,
        }
    }
}

fn classify_presentation_error(e: PresentationParseError) -> AppError {
    if let PresentationParseError::Word { ref error, .. } = e {
        if matches!(
            error.kind,
            WordParseErrorKind::LengthLimit { .. } | WordParseErrorKind::NestingTooDeep
        ) {
            return AppError::Limit(e.to_string());
        }
    }
    AppError::Parse(e.to_string())
}

fn classify_tietze_error(e: TietzeError) -> AppError {
    match e {
        TietzeError::LengthLimitExceeded { .. } => AppError::Limit(e.to_string()),
        other => AppError::Other(format!("internal normalization failure: {}", other)),
    }
}

/// Inline input starts with the given sigil after leading whitespace;
/// anything else is a file path.
fn load_input(arg: &str, inline_sigil: char) -> Result<String, AppError> {
    if arg.trim_start().starts_with(inline_sigil) {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| AppError::Other(format!("cannot read `{}`: {}", arg, e)))
    }
}

fn load_presentation(arg: &str, limit: usize) -> Result<Presentation, AppError> {
    let text = load_input(arg, '<')?;
    parse_presentation_with_limit(&text, limit).map_err(classify_presentation_error)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Analyze {
            input,
            format,
            limit_word_length,
        } => {
            let p = load_presentation(&input, limit_word_length)?;
            let report = classify_with_limit(&p, limit_word_length).map_err(classify_tietze_error)?;
            match format {
                Format::Json => print_json(&formats::report_to_json(&report)),
                Format::Text => print!("{}", formats::report_to_text(&report)),
                Format::Csv => {
                    return Err(AppError::Parse(
                        "csv output is only available for `experiment`".into(),
                    ))
                }
            }
        }
        Command::Normalize {
            input,
            format,
            limit_word_length,
        } => {
            let p = load_presentation(&input, limit_word_length)?;
            let norm =
                normalize_to_snf_with_limit(&p, limit_word_length).map_err(classify_tietze_error)?;
            match format {
                Format::Json => print_json(&formats::normalized_to_json(&norm, p.generator_names())),
                Format::Text => print!("{}", formats::normalized_to_text(&norm, p.generator_names())),
                Format::Csv => {
                    return Err(AppError::Parse(
                        "csv output is only available for `experiment`".into(),
                    ))
                }
            }
        }
        Command::Snf {
            input,
            format,
            limit_minor_dim,
        } => {
            let text = load_input(&input, '{')?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| AppError::Parse(format!("matrix JSON: {}", e)))?;
            let matrix = formats::matrix_from_json(&value)
                .map_err(|e| AppError::Parse(format!("matrix JSON: {}", e)))?;
            let snf = smith_normal_form(&matrix);
            match format {
                Format::Json => print_json(&formats::snf_to_json(&matrix, &snf, limit_minor_dim)),
                Format::Text => print!("{}", formats::snf_to_text(&matrix, &snf, limit_minor_dim)),
                Format::Csv => {
                    return Err(AppError::Parse(
                        "csv output is only available for `experiment`".into(),
                    ))
                }
            }
        }
        Command::Experiment {
            gens,
            relators,
            lengths,
            trials,
            seed,
            confidence,
            format,
            threads,
        } => {
            let lengths = lengths
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| AppError::Parse(format!("--lengths: {}", e)))?;
            let cfg = ExperimentConfig {
                generators: gens,
                relators,
                lengths,
                trials,
                master_seed: seed,
                confidence,
            };
            let result = if threads == 0 {
                run_experiment(&cfg)
            } else {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| AppError::Other(e.to_string()))?
                    .install(|| run_experiment(&cfg))
            }
            .map_err(|e| AppError::Parse(e.to_string()))?;
            match format {
                Format::Csv | Format::Text => {
                    print!("{}", metabelian_tools::experiment::render_csv(&result))
                }
                Format::Json => print_json(&formats::experiment_to_json(&result)),
            }
        }
        Command::ExactProb {
            gens,
            relators,
            length,
            format,
            max_rank_guard,
            max_length_guard,
        } => {
            if gens < 1 {
                return Err(AppError::Parse("need at least one generator".into()));
            }
            let defaults = OracleGuards::default();
            let guards = OracleGuards {
                max_generators: max_rank_guard.unwrap_or(defaults.max_generators),
                max_relators: max_rank_guard.unwrap_or(defaults.max_relators),
                max_length: max_length_guard.unwrap_or(defaults.max_length),
            };
            let p = exact_full_rank_probability_with_guards(gens, relators, length, &guards)
                .map_err(|e| AppError::Limit(e.to_string()))?;
            match format {
                Format::Text => println!("{}", p),
                Format::Json => print_json(&formats::exact_prob_to_json(gens, relators, length, &p)),
                Format::Csv => {
                    return Err(AppError::Parse(
                        "csv output is only available for `experiment`".into(),
                    ))
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

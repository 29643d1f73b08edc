//! Command-line front end for the komori toolkit.
//!
//! Exit codes: 0 on success, 2 for usage and input-format problems, 3 for
//! domain errors (well-formed inputs on which the requested quantity is
//! undefined). Set `KOMORI_LOG=info` (or `debug`) for progress on stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "komori",
    version,
    about = "Lexical proximity and corpus filtering for related language pairs"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the pairwise language distance matrix of a concept list
    DistanceMatrix {
        /// Concept-list TSV: a gloss column, then one column per language
        list: PathBuf,
        /// Output TSV path; a JSON run report lands at <out>.report.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Collect the distinct normalized words of a corpus
    BuildLexicon {
        /// Corpus text, one sentence per line
        corpus: PathBuf,
        /// Output word list (one word per line, sorted); report sits next to it
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep corpus lines whose tokens a lexicon covers exactly
    FilterExact {
        /// Corpus text, one sentence per line (or a TSV with --column)
        corpus: PathBuf,
        /// Word list or corpus whose words form the lexicon
        lexicon: PathBuf,
        /// Minimum covered-token fraction, 0 to 1
        #[arg(long, default_value_t = 0.8)]
        coverage: f64,
        /// Never retain lines with fewer tokens than this
        #[arg(long, default_value_t = 1)]
        min_tokens: usize,
        /// Treat the corpus as TSV with a header and filter this column,
        /// keeping whole rows in the output
        #[arg(long)]
        column: Option<String>,
        /// Drop repeated retained lines, keeping the first
        #[arg(long)]
        dedup: bool,
        /// Output prefix: writes <out>.retained.txt, <out>.records.jsonl,
        /// and <out>.report.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep corpus lines whose tokens a lexicon covers within a similarity floor
    FilterFuzzy {
        /// Corpus text, one sentence per line (or a TSV with --column)
        corpus: PathBuf,
        /// Word list or corpus whose words form the lexicon
        lexicon: PathBuf,
        /// Minimum covered-token fraction, 0 to 1
        #[arg(long, default_value_t = 0.8)]
        coverage: f64,
        /// Minimum word similarity percent for a token to count as covered
        #[arg(long, default_value_t = 80.0)]
        similarity: f64,
        /// Never retain lines with fewer tokens than this
        #[arg(long, default_value_t = 1)]
        min_tokens: usize,
        /// Treat the corpus as TSV with a header and filter this column,
        /// keeping whole rows in the output
        #[arg(long)]
        column: Option<String>,
        /// Drop repeated retained lines, keeping the first
        #[arg(long)]
        dedup: bool,
        /// Output prefix: writes <out>.retained.txt, <out>.records.jsonl,
        /// and <out>.report.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Score hypotheses against references (WER, CER, ROUGE)
    Eval {
        /// Reference text, one segment per line
        refs: PathBuf,
        /// Hypothesis text, one segment per line, parallel to the references
        hyps: PathBuf,
        /// Metrics to compute, from: wer,cer,rouge1,rouge2,rougeL,rougeLsum
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "wer,cer,rouge1,rouge2,rougeL,rougeLsum"
        )]
        metrics: Vec<String>,
        /// Skip normalization; compare whitespace-split text verbatim
        #[arg(long)]
        raw: bool,
        /// Also write the scores JSON to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures after argument parsing, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unusable input file: exit 2.
    Usage(String),
    /// Sound input on which the result is undefined: exit 3.
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::DistanceMatrix { list, out } => commands::distance_matrix(&list, &out),
        Command::BuildLexicon { corpus, out } => commands::build_lexicon(&corpus, &out),
        Command::FilterExact {
            corpus,
            lexicon,
            coverage,
            min_tokens,
            column,
            dedup,
            out,
        } => commands::filter(commands::FilterArgs {
            corpus,
            lexicon,
            coverage,
            similarity: None,
            min_tokens,
            column,
            dedup,
            out,
        }),
        Command::FilterFuzzy {
            corpus,
            lexicon,
            coverage,
            similarity,
            min_tokens,
            column,
            dedup,
            out,
        } => commands::filter(commands::FilterArgs {
            corpus,
            lexicon,
            coverage,
            similarity: Some(similarity),
            min_tokens,
            column,
            dedup,
            out,
        }),
        Command::Eval {
            refs,
            hyps,
            metrics,
            raw,
            out,
        } => commands::eval(&refs, &hyps, &metrics, raw, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("KOMORI_LOG"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();

    let result = match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")));
            match pool {
                Ok(pool) => pool.install(|| dispatch(cli.command)),
                Err(e) => Err(e),
            }
        }
        None => dispatch(cli.command),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("komori: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

//! Implementations behind the subcommands: file handling, output layout,
//! and run reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::Serialize;
use serde_json::json;

use komori::fuzzy_index::BkTree;
use komori::lexicon::{ConceptList, LanguageId, Lexicon};
use komori::lexstat::{self, LexstatError};
use komori::metrics::{self, Metric, TextPrep};
use komori::miner::{self, FilterConfig, FilterMode, FilterRecord};
use komori::text_norm;

use crate::CliError;

/// Sidecar JSON describing one run: what ran, over which inputs, with
/// which settings, and what came out. Timing aside, two runs over the same
/// inputs produce identical reports.
#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: Vec<String>,
    config: serde_json::Value,
    counts: serde_json::Value,
    wall_time_ms: u64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    // Tolerate a UTF-8 byte order mark.
    Ok(text.strip_prefix('\u{feff}').map_or(text.clone(), str::to_string))
}

fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(read_text(path)?.lines().map(str::to_string).collect())
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_report(base: &Path, report: &RunReport) -> Result<(), CliError> {
    let path = sibling(base, ".report.json");
    let mut body = serde_json::to_string_pretty(report).expect("report serializes");
    body.push('\n');
    write_file(&path, &body)
}

pub fn distance_matrix(list: &Path, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let text = read_text(list)?;
    let parsed = ConceptList::parse_tsv(file_stem(list), &text)
        .map_err(|e| usage(format!("{}: {e}", list.display())))?;
    info!(
        "loaded {} concepts across {} languages from {}",
        parsed.len(),
        parsed.languages().len(),
        list.display()
    );
    let matrix = lexstat::distance_matrix(&parsed).map_err(|e| match e {
        LexstatError::NoComparablePairs { .. } => CliError::Domain(e.to_string()),
        LexstatError::UnknownLanguage { .. } => usage(e.to_string()),
    })?;
    write_file(out, &matrix.to_tsv())?;
    info!("wrote matrix to {}", out.display());
    write_report(
        out,
        &RunReport {
            command: "distance-matrix",
            inputs: vec![list.display().to_string()],
            config: json!({}),
            counts: json!({
                "concepts": parsed.len(),
                "languages": parsed.languages().len(),
            }),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    )
}

pub fn build_lexicon(corpus: &Path, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let lines = read_lines(corpus)?;
    let texts: Vec<_> = lines.iter().map(|l| text_norm::normalize(l)).collect();
    let token_occurrences: usize = texts.iter().map(|t| t.tokens.len()).sum();
    let language = LanguageId::new(file_stem(corpus));
    let lexicon = Lexicon::from_texts(language, &texts);
    info!(
        "collected {} distinct words from {} lines of {}",
        lexicon.len(),
        lines.len(),
        corpus.display()
    );

    let mut body = lexicon.words().collect::<Vec<_>>().join("\n");
    if !body.is_empty() {
        body.push('\n');
    }
    write_file(out, &body)?;
    write_report(
        out,
        &RunReport {
            command: "build-lexicon",
            inputs: vec![corpus.display().to_string()],
            config: json!({
                "language": file_stem(corpus),
            }),
            counts: json!({
                "lines_in": lines.len(),
                "token_occurrences": token_occurrences,
                "unique_words": lexicon.len(),
            }),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    )
}

pub struct FilterArgs {
    pub corpus: PathBuf,
    pub lexicon: PathBuf,
    pub coverage: f64,
    /// `Some` selects fuzzy coverage with this similarity floor.
    pub similarity: Option<f64>,
    pub min_tokens: usize,
    pub column: Option<String>,
    pub dedup: bool,
    pub out: PathBuf,
}

/// The corpus lines to filter, plus what to emit for each retained one.
struct FilterInput {
    /// Sentences handed to the filter, one per data line.
    sentences: Vec<String>,
    /// Verbatim output line per sentence (the full TSV row in column mode).
    emitted: Vec<String>,
    /// Header row to repeat in column-mode output.
    header: Option<String>,
    /// Offset between record line numbers and file line numbers.
    line_offset: usize,
}

fn load_filter_input(corpus: &Path, column: Option<&str>) -> Result<FilterInput, CliError> {
    let lines = read_lines(corpus)?;
    match column {
        None => Ok(FilterInput {
            sentences: lines.clone(),
            emitted: lines,
            header: None,
            line_offset: 0,
        }),
        Some(column) => {
            let Some((header, rows)) = lines.split_first() else {
                return Err(usage(format!(
                    "{}: cannot use --column on an empty file",
                    corpus.display()
                )));
            };
            let names: Vec<&str> = header.split('\t').collect();
            let index = names.iter().position(|n| *n == column).ok_or_else(|| {
                usage(format!(
                    "{}: no column named {column:?} (header has: {})",
                    corpus.display(),
                    names.join(", ")
                ))
            })?;
            // Rows missing the column filter as empty sentences; they simply
            // come out unretained rather than aborting the run.
            let sentences = rows
                .iter()
                .map(|row| row.split('\t').nth(index).unwrap_or("").to_string())
                .collect();
            Ok(FilterInput {
                sentences,
                emitted: rows.to_vec(),
                header: Some(header.clone()),
                line_offset: 1,
            })
        }
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_number(x: f64) -> String {
    serde_json::Number::from_f64(x)
        .expect("scores are finite")
        .to_string()
}

/// One record as a JSONL line, with a fixed field order and six-decimal
/// coverage.
fn record_line(record: &FilterRecord) -> String {
    let mut line = String::with_capacity(96);
    write!(
        line,
        "{{\"line_no\":{},\"retained\":{},\"coverage\":{:.6},\"tokens\":{},\"matched\":{},\"matches\":[",
        record.line_no, record.retained, record.coverage, record.tokens, record.matched
    )
    .expect("writing to a string");
    for (i, m) in record.matches.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        write!(
            line,
            "[{},{},{}]",
            json_string(&m.token),
            json_string(&m.lexicon_word),
            json_number(m.similarity)
        )
        .expect("writing to a string");
    }
    line.push_str("]}");
    line
}

pub fn filter(args: FilterArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let mode = if args.similarity.is_some() {
        FilterMode::Fuzzy
    } else {
        FilterMode::Exact
    };
    let cfg = FilterConfig {
        coverage_threshold: args.coverage,
        similarity_threshold: args.similarity.unwrap_or(100.0),
        mode,
        min_tokens: args.min_tokens,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;

    let lexicon = Lexicon::parse_lines(
        LanguageId::new(file_stem(&args.lexicon)),
        &read_text(&args.lexicon)?,
    );
    let input = load_filter_input(&args.corpus, args.column.as_deref())?;
    info!(
        "filtering {} lines of {} against {} lexicon words",
        input.sentences.len(),
        args.corpus.display(),
        lexicon.len()
    );

    let (mut records, stats) = match mode {
        FilterMode::Exact => miner::filter_exact_with_stats(&input.sentences, &lexicon, &cfg),
        FilterMode::Fuzzy => {
            let tree = BkTree::build(&lexicon).map_err(|e| CliError::Domain(e.to_string()))?;
            miner::filter_fuzzy_with_stats(&input.sentences, &tree, &cfg)
        }
    };
    // Report positions as file lines, counting the TSV header when present.
    if input.line_offset > 0 {
        for record in &mut records {
            record.line_no += input.line_offset;
        }
    }

    let mut emitted: Vec<&str> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (record, line) in records.iter().zip(&input.emitted) {
        if !record.retained {
            continue;
        }
        if args.dedup && !seen.insert(line.as_str()) {
            continue;
        }
        emitted.push(line);
    }
    let retained_count = records.iter().filter(|r| r.retained).count();
    info!(
        "retained {} of {} lines ({} emitted)",
        retained_count,
        records.len(),
        emitted.len()
    );

    let mut retained_body = String::new();
    if let Some(header) = &input.header {
        retained_body.push_str(header);
        retained_body.push('\n');
    }
    for line in &emitted {
        retained_body.push_str(line);
        retained_body.push('\n');
    }
    write_file(&sibling(&args.out, ".retained.txt"), &retained_body)?;

    let mut records_body = String::new();
    for record in &records {
        records_body.push_str(&record_line(record));
        records_body.push('\n');
    }
    write_file(&sibling(&args.out, ".records.jsonl"), &records_body)?;

    let command = match mode {
        FilterMode::Exact => "filter-exact",
        FilterMode::Fuzzy => "filter-fuzzy",
    };
    write_report(
        &args.out,
        &RunReport {
            command,
            inputs: vec![
                args.corpus.display().to_string(),
                args.lexicon.display().to_string(),
            ],
            config: json!({
                "column": args.column,
                "coverage": args.coverage,
                "dedup": args.dedup,
                "min_tokens": args.min_tokens,
                "similarity": args.similarity,
            }),
            counts: json!({
                "cache_hits": stats.cache_hits,
                "lexicon_words": lexicon.len(),
                "lines_emitted": emitted.len(),
                "lines_in": stats.lines,
                "lines_retained": retained_count,
                "token_occurrences": stats.token_occurrences,
                "unique_tokens": stats.unique_tokens,
            }),
            wall_time_ms: started.elapsed().as_millis() as u64,
        },
    )
}

pub fn eval(
    refs: &Path,
    hyps: &Path,
    metric_names: &[String],
    raw: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let ref_lines = read_lines(refs)?;
    let hyp_lines = read_lines(hyps)?;
    let mut metrics_list: Vec<Metric> = Vec::new();
    for name in metric_names {
        let metric = name.parse::<Metric>().map_err(usage)?;
        if !metrics_list.contains(&metric) {
            metrics_list.push(metric);
        }
    }
    let prep = if raw { TextPrep::Raw } else { TextPrep::Normalized };
    let scores = metrics::evaluate(&ref_lines, &hyp_lines, &metrics_list, prep)
        .map_err(|e| usage(e.to_string()))?;
    info!(
        "scored {} pairs from {} and {}",
        scores.n_pairs,
        refs.display(),
        hyps.display()
    );
    let mut body = serde_json::to_string_pretty(&scores).expect("scores serialize");
    body.push('\n');
    print!("{body}");
    if let Some(path) = out {
        write_file(path, &body)?;
    }
    Ok(())
}

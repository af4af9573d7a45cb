use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use talkalign::corpus::{build_state_space, clean_paper, parse_paper, parse_transcript};
use talkalign::embeddings::EmbeddingTable;
use talkalign::hmm::{align_transcript, report};
use talkalign::rouge::{self, Metric};
use talkalign::summarizer::{
    hybrid_summary, importance_ranking, resolve_budget, select_summary, summary_json, BudgetMode,
    RankedSentence, ResolvedBudget, Summary,
};

use crate::config::PipelineConfig;
use crate::CliError;

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_embeddings(path: &Path) -> Result<EmbeddingTable, CliError> {
    let file = fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    EmbeddingTable::load(BufReader::new(file)).map_err(CliError::Core)
}

/// File stem with a trailing marker (".paper", ".alignment") stripped, so
/// `doc1.paper.json` and `doc1.alignment.json` both yield `doc1`.
fn doc_stem(path: &Path, marker: &str) -> String {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output");
    stem.strip_suffix(marker).unwrap_or(stem).to_string()
}

/// Everything a processed document writes to disk: (file name, content).
type OutputFiles = Vec<(String, String)>;

fn summary_files(
    id: &str,
    doc: &talkalign::corpus::PaperDocument,
    space: &talkalign::corpus::StateSpace,
    ranking: &[RankedSentence],
    modes: &[BudgetMode],
    hybrid: bool,
    redundancy_threshold: f64,
) -> Result<OutputFiles, CliError> {
    let mut files = Vec::new();
    for mode in modes {
        let resolved = resolve_budget(mode, doc, space).map_err(CliError::Core)?;
        let (summary, slug): (Summary, String) = match resolved {
            // hybrid applies to word budgets; a sentence-count budget has no
            // word slack for augmenting the abstract
            ResolvedBudget::Words(budget) if hybrid => (
                hybrid_summary(doc, ranking, budget, redundancy_threshold)
                    .map_err(CliError::Core)?,
                format!("{}.hybrid", mode.slug()),
            ),
            _ => (select_summary(ranking, doc, *mode, resolved), mode.slug()),
        };
        let json = summary_json(&summary, resolved);
        files.push((format!("{id}.summary.{slug}.txt"), summary.to_text()));
        files.push((
            format!("{id}.summary.{slug}.json"),
            to_pretty_json(&json),
        ));
    }
    Ok(files)
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

/// Run the full pipeline for one document and collect its output files.
fn process_document(
    id: &str,
    paper_text: &str,
    transcript_text: &str,
    table: &EmbeddingTable,
    config: &PipelineConfig,
    with_summaries: bool,
) -> Result<OutputFiles, CliError> {
    let doc = clean_paper(parse_paper(paper_text).map_err(CliError::Core)?);
    let space = build_state_space(&doc).map_err(CliError::Core)?;
    let transcript =
        parse_transcript(transcript_text, config.remove_stopwords).map_err(CliError::Core)?;
    let (result, observed) =
        align_transcript(&doc, &space, &transcript, table, &config.align_options())
            .map_err(CliError::Core)?;

    let mut files = Vec::new();
    let alignment = report::alignment_json(&result, &space, &observed);
    files.push((format!("{id}.alignment.json"), to_pretty_json(&alignment)));
    files.push((
        format!("{id}.intervals.tsv"),
        report::interval_report(&result, &space, &observed, &doc),
    ));
    if with_summaries {
        let ranking = importance_ranking(&result.counts);
        files.extend(summary_files(
            id,
            &doc,
            &space,
            &ranking,
            &config.budget_modes,
            config.hybrid,
            config.redundancy_threshold,
        )?);
    }
    Ok(files)
}

fn write_outputs(out_dir: &Path, files: &OutputFiles) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for (name, content) in files {
        write_file(&out_dir.join(name), content)?;
    }
    Ok(())
}

pub fn run_align(
    paper: &Path,
    transcript: &Path,
    embeddings: &Path,
    config: &PipelineConfig,
    out_dir: &Path,
) -> Result<(), CliError> {
    let paper_text = read_file(paper)?;
    let transcript_text = read_file(transcript)?;
    let table = load_embeddings(embeddings)?;
    let id = doc_stem(paper, ".paper");
    let files = process_document(&id, &paper_text, &transcript_text, &table, config, false)?;
    write_outputs(out_dir, &files)
}

pub fn run_summarize(
    alignment: &Path,
    paper: &Path,
    modes: &[BudgetMode],
    hybrid: bool,
    config: &PipelineConfig,
    out_dir: &Path,
) -> Result<(), CliError> {
    let alignment_text = read_file(alignment)?;
    let record: report::AlignmentJson =
        serde_json::from_str(&alignment_text).map_err(|e| CliError::Io {
            path: alignment.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("malformed alignment JSON: {e}"),
            ),
        })?;
    let counts: BTreeMap<usize, usize> = record
        .counts
        .iter()
        .map(|c| (c.sentence_id, c.count))
        .collect();

    let doc = clean_paper(parse_paper(&read_file(paper)?).map_err(CliError::Core)?);
    let space = build_state_space(&doc).map_err(CliError::Core)?;
    let ranking = importance_ranking(&counts);
    let id = doc_stem(alignment, ".alignment");
    let files = summary_files(
        &id,
        &doc,
        &space,
        &ranking,
        modes,
        hybrid,
        config.redundancy_threshold,
    )?;
    write_outputs(out_dir, &files)
}

pub fn run_eval(
    candidate: &Path,
    reference: &Path,
    metrics: &[Metric],
) -> Result<(), CliError> {
    let candidate_text = read_file(candidate)?;
    let reference_text = read_file(reference)?;
    let doc_id = doc_stem(candidate, ".summary");
    for metric in metrics {
        let score =
            rouge::score(&candidate_text, &reference_text, *metric).map_err(CliError::Core)?;
        println!("{}", rouge::tsv_row(&doc_id, &score));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub processed: usize,
    pub failed: Vec<FailedDocument>,
    pub config_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FailedDocument {
    pub id: String,
    pub error: String,
}

const PAPER_SUFFIX: &str = ".paper.json";

fn discover_ids(corpus_dir: &Path) -> Result<Vec<String>, CliError> {
    let entries = fs::read_dir(corpus_dir).map_err(|source| CliError::Io {
        path: corpus_dir.to_path_buf(),
        source,
    })?;
    let mut ids = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| CliError::Io {
            path: corpus_dir.to_path_buf(),
            source,
        })?;
        if let Some(name) = entry.file_name().to_str() {
            if let Some(id) = name.strip_suffix(PAPER_SUFFIX) {
                ids.push(id.to_string());
            }
        }
    }
    ids.sort();
    Ok(ids)
}

fn transcript_path(corpus_dir: &Path, id: &str) -> Option<PathBuf> {
    for ext in ["txt", "json"] {
        let candidate = corpus_dir.join(format!("{id}.transcript.{ext}"));
        if candidate.exists() {
            return Some(candidate);
        }
    }
    None
}

pub fn run_batch(
    corpus_dir: &Path,
    embeddings: &Path,
    config: &PipelineConfig,
    jobs: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    let ids = discover_ids(corpus_dir)?;
    if ids.is_empty() {
        return Err(CliError::EmptyCorpus);
    }
    let table = load_embeddings(embeddings)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))?;
    let outcomes: Vec<(String, Result<(), CliError>)> = pool.install(|| {
        ids.par_iter()
            .map(|id| {
                let outcome = (|| -> Result<(), CliError> {
                    let paper_text =
                        read_file(&corpus_dir.join(format!("{id}{PAPER_SUFFIX}")))?;
                    let transcript = transcript_path(corpus_dir, id).ok_or_else(|| {
                        CliError::Io {
                            path: corpus_dir.join(format!("{id}.transcript.txt")),
                            source: std::io::Error::new(
                                std::io::ErrorKind::NotFound,
                                "no transcript for paper",
                            ),
                        }
                    })?;
                    let transcript_text = read_file(&transcript)?;
                    let files = process_document(
                        id,
                        &paper_text,
                        &transcript_text,
                        &table,
                        config,
                        true,
                    )?;
                    write_outputs(out_dir, &files)
                })();
                (id.clone(), outcome)
            })
            .collect()
    });

    let mut processed = 0;
    let mut failed = Vec::new();
    for (id, outcome) in outcomes {
        match outcome {
            Ok(()) => processed += 1,
            Err(err) => failed.push(FailedDocument {
                id,
                error: format!("{}: {}", err.class(), err),
            }),
        }
    }
    failed.sort_by(|a, b| a.id.cmp(&b.id));
    let manifest = Manifest {
        processed,
        failed,
        config_hash: config.hash(),
    };
    write_file(&out_dir.join("manifest.json"), &to_pretty_json(&manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_stem_strips_markers() {
        assert_eq!(doc_stem(Path::new("/x/doc1.paper.json"), ".paper"), "doc1");
        assert_eq!(
            doc_stem(Path::new("doc1.alignment.json"), ".alignment"),
            "doc1"
        );
        assert_eq!(doc_stem(Path::new("plain.json"), ".paper"), "plain");
    }
}

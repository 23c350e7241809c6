use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use landscape::ensemble::{run_campaign, run_campaign_with, sample_formula, trial_rng, write_csv, Campaign, EnsembleConfig};
use landscape::format::{parse_formula, render_dimacs, render_native, FormulaFormat};
use landscape::verify::{run_verification, VerifyConfig};
use landscape::{ClusterAnalysis, Error, Formula, Genotype, PathOutcome};

use crate::{svg, Failure, InputFormat, ReportFormat, StdoutKind};

const THREADS_VAR: &str = "LANDSCAPE_THREADS";

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

fn library_failure(e: Error) -> Failure {
    match e {
        Error::Parse { .. } | Error::SameLocus(..) | Error::LocusOutOfRange { .. } | Error::EmptyLocusSet => {
            Failure::parse(e)
        }
        _ => Failure::usage(e),
    }
}

fn read_formula(path: &Path, format: InputFormat) -> Result<Formula, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let format = match format {
        InputFormat::Auto => None,
        InputFormat::Native => Some(FormulaFormat::Native),
        InputFormat::Dimacs => Some(FormulaFormat::Dimacs),
    };
    parse_formula(&text, format).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::usage(format!("stdout: {e}")))
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    n: usize,
    m: usize,
    satisfiable: bool,
    components: usize,
    /// Sizes of the nontrivial strong components, largest first.
    component_sizes: Vec<usize>,
    /// Each pair as its two sides, each side a list of alleles.
    splitting_pairs: Vec<[Vec<String>; 2]>,
    k: usize,
    clusters: String,
    conflicting_pairs: usize,
}

fn analyze_report(formula: &Formula) -> AnalyzeReport {
    let analysis = ClusterAnalysis::new(formula);
    let scc = analysis.scc();
    let mut component_sizes: Vec<usize> = (0..scc.len())
        .filter(|&c| !scc.is_trivial(c))
        .map(|c| scc.size(c))
        .collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let report = analysis.report();
    let side = |c: usize| scc.literals(c).map(|x| x.to_string()).collect::<Vec<_>>();
    let splitting_pairs = report
        .splitting_pairs
        .iter()
        .map(|p| [side(p.comp), side(p.comp_complement)])
        .collect();
    AnalyzeReport {
        n: formula.n(),
        m: formula.len(),
        satisfiable: report.satisfiable,
        components: scc.len(),
        component_sizes,
        splitting_pairs,
        k: report.k,
        clusters: report.cluster_count.to_string(),
        conflicting_pairs: report.conflicting_pairs,
    }
}

pub fn analyze(input: &Path, input_format: InputFormat, format: ReportFormat) -> Result<(), Failure> {
    let formula = read_formula(input, input_format)?;
    let report = analyze_report(&formula);
    let text = match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(Failure::usage)?;
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = format!(
                "loci: {}\nincompatibilities: {}\nsatisfiable: {}\ncomponents: {}\nnontrivial component sizes: {:?}\nsplitting pairs: {}\n",
                report.n,
                report.m,
                report.satisfiable,
                report.components,
                report.component_sizes,
                report.k
            );
            for [a, b] in &report.splitting_pairs {
                s.push_str(&format!("  {{{}}} | {{{}}}\n", a.join(", "), b.join(", ")));
            }
            s.push_str(&format!(
                "conflicting pairs: {}\nclusters: {}\n",
                report.conflicting_pairs, report.clusters
            ));
            s
        }
    };
    write_stdout(&text)
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Failure::usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

fn summary_json(campaign: &Campaign) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(&campaign.summary).map_err(Failure::usage)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(campaign: &Campaign, max_cycle_len: usize) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write_csv(&campaign.records, max_cycle_len, &mut buf).map_err(Failure::usage)?;
    String::from_utf8(buf).map_err(Failure::usage)
}

pub fn simulate(
    cfg: &EnsembleConfig,
    out: StdoutKind,
    csv: Option<&Path>,
    json: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<(), Failure> {
    cfg.validate().map_err(Failure::usage)?;
    let campaign = match thread_count()? {
        Some(t) => run_campaign_with(cfg, t),
        None => run_campaign(cfg),
    }
    .map_err(library_failure)?;

    let csv_body = csv_text(&campaign, cfg.max_cycle_len)?;
    let json_body = summary_json(&campaign)?;
    if let Some(path) = csv {
        fs::write(path, &csv_body).map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = json {
        fs::write(path, &json_body).map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = svg_path {
        let title = format!("n = {}, c = {}, {} trials", cfg.n, cfg.c, cfg.trials);
        let body = svg::histogram(&campaign.summary.y_histogram, campaign.summary.theory.lambda_n, &title);
        fs::write(path, body).map_err(|e| io_failure(path, e))?;
    }
    match out {
        StdoutKind::Csv => write_stdout(&csv_body),
        StdoutKind::Json => write_stdout(&json_body),
    }
}

pub fn verify(cfg: &VerifyConfig) -> Result<(), Failure> {
    let report = run_verification(cfg).map_err(Failure::usage)?;
    let mut text = format!("{}/{} ok\n", report.ok, report.cases);
    for f in &report.failures {
        text.push_str(&format!("\ncase {} (n = {}, c = {}):\n", f.case, f.n, f.c));
        for m in &f.mismatches {
            text.push_str(&format!("  {:?}: {}\n", m.kind, m.detail));
        }
        text.push_str("  formula:\n");
        for line in f.formula.lines() {
            text.push_str(&format!("    {line}\n"));
        }
    }
    write_stdout(&text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::mismatch(format!(
            "{} of {} cases disagree with the oracle",
            report.failures.len(),
            report.cases
        )))
    }
}

fn parse_genotype(formula: &Formula, text: &str) -> Result<Genotype, Failure> {
    let g: Genotype = text.parse().map_err(Failure::usage)?;
    formula
        .require_viable(&g)
        .map_err(|e| Failure::usage(format!("{text}: {e}")))?;
    Ok(g)
}

pub fn path(input: &Path, input_format: InputFormat, u: &str, v: &str) -> Result<(), Failure> {
    let formula = read_formula(input, input_format)?;
    let u = parse_genotype(&formula, u)?;
    let v = parse_genotype(&formula, v)?;
    let analysis = ClusterAnalysis::new(&formula);
    let text = match analysis.find_path(&u, &v).map_err(Failure::usage)? {
        PathOutcome::Connected(p) => p.genotypes().iter().map(|g| format!("{g}\n")).collect(),
        PathOutcome::NotConnected => "not connected\n".to_string(),
    };
    write_stdout(&text)
}

pub fn generate(n: usize, c: f64, seed: u64, format: InputFormat) -> Result<(), Failure> {
    let mut rng = trial_rng(seed, 0);
    let formula = sample_formula(n, c, &mut rng).map_err(Failure::usage)?;
    let text = match format {
        InputFormat::Dimacs => render_dimacs(&formula),
        InputFormat::Native | InputFormat::Auto => render_native(&formula),
    };
    write_stdout(&text)
}

//! Subcommand implementations.
//!
//! Every artifact names the registry version and the configuration hash:
//! CSV files in a leading `#` line, JSON files in `registry`/`config` keys,
//! SVG files in a comment.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use vantage::analysis::{
    aggregate, correlation_matrix, pca_analysis, write_correlation_csv, write_pca_csv, write_projections_csv, AggregateTable,
    Strata,
};
use vantage::fitting::{
    read_samples_csv, select_subset_with_l2, write_fit_reports_csv, write_samples_csv, FitMethod, FitReport, SubsetSearch,
    WeightVector,
};
use vantage::measures::Polarity as MeasurePolarity;
use vantage::model::{parse_dataset, selection_to_viewpoint, Polarity};
use vantage::pipeline::{normalize_value, BundleEvaluator, GraphRanges, RawVector};
use vantage::{
    combined_score, fibonacci_viewpoints, normalize, GraphBundle, LabeledSample, MeasureId, RangeTable, StudyDataset, Vec3,
    MEASURE_COUNT, REGISTRY_VERSION,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::{sphere, Command, Filter};

pub fn dispatch(command: &Command, config: &RunConfig) -> CliResult<()> {
    match command {
        Command::Sample { dataset, out, landscape } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, None)?, config)?;
            sample(dataset, &out, *landscape, config)
        }
        Command::Score { dataset, ranges, out } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, Some(input_dir(ranges)))?, config)?;
            score(dataset, ranges, &out, config)
        }
        Command::Fit {
            scores,
            method,
            k,
            filter,
            exhaustive,
            renormalize,
            out,
        } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, Some(input_dir(scores)))?, config)?;
            let search = if *exhaustive {
                SubsetSearch::Exhaustive
            } else {
                SubsetSearch::BackwardElimination
            };
            fit(scores, *method, *k, filter.as_ref(), search, *renormalize, &out, config)
        }
        Command::Analyze {
            scores,
            lr_weights,
            sqp_weights,
            out,
        } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, Some(input_dir(scores)))?, config)?;
            analyze(scores, lr_weights.as_deref(), sqp_weights.as_deref(), &out, config)
        }
        Command::Optimize {
            dataset,
            weights,
            graph,
            top,
            ranges,
            out,
        } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, Some(PathBuf::from(".")))?, config)?;
            optimize(dataset, weights, graph, *top, ranges.as_deref(), &out, config)
        }
        Command::ExportSphere {
            dataset,
            graph,
            measure,
            ranges,
            out,
        } => {
            let out = Artifacts::open(out_dir(out.as_deref(), config, Some(PathBuf::from(".")))?, config)?;
            export_sphere(dataset, graph, *measure, ranges.as_deref(), &out, config)
        }
    }
}

/// `--out`, else the configured output directory, else the fallback.
fn out_dir(flag: Option<&Path>, config: &RunConfig, fallback: Option<PathBuf>) -> CliResult<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .or(fallback)
        .ok_or_else(|| CliError::Usage("no output directory; pass --out or set output_dir".into()))
}

/// The directory an input path lives in (the path itself for directories).
fn input_dir(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.to_path_buf()
    } else {
        path.parent().filter(|p| !p.as_os_str().is_empty()).map_or_else(|| PathBuf::from("."), Path::to_path_buf)
    }
}

/// `path` itself, or `path/default` when it is a directory.
fn input_file(path: &Path, default: &str) -> PathBuf {
    if path.is_dir() {
        path.join(default)
    } else {
        path.to_path_buf()
    }
}

/// Replaces characters that are awkward in file names.
fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect()
}

/// Output directory plus the provenance line for its files.
struct Artifacts {
    dir: PathBuf,
    hash: String,
}

impl Artifacts {
    fn open(dir: PathBuf, config: &RunConfig) -> CliResult<Self> {
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Artifacts { dir, hash: config.hash() })
    }

    fn provenance(&self) -> String {
        format!("registry={REGISTRY_VERSION} config={}", self.hash)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    /// A CSV file whose first line is the provenance comment.
    fn csv(&self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> vantage::Result<()>) -> CliResult<PathBuf> {
        let mut buf = format!("# {}\n", self.provenance()).into_bytes();
        body(&mut buf)?;
        self.write(name, &buf)
    }

    fn config_echo(&self, config: &RunConfig) -> CliResult<PathBuf> {
        self.write("config.json", config.echo_json().as_bytes())
    }
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf)
}

fn load_dataset(path: &Path) -> CliResult<StudyDataset> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parsed = parse_dataset(&bytes)?;
    for w in &parsed.warnings {
        eprintln!("vantage: warning: {}: {w}", path.display());
    }
    Ok(parsed.dataset)
}

fn find_bundle<'a>(dataset: &'a StudyDataset, graph: &str) -> CliResult<&'a GraphBundle> {
    dataset
        .bundle(graph)
        .ok_or_else(|| vantage::Error::Domain(format!("dataset has no graph `{graph}`")).into())
}

fn read_ranges(path: &Path) -> CliResult<RangeTable> {
    let file = input_file(path, "ranges.csv");
    let bytes = fs::read(&file).map_err(|e| CliError::io(&file, e))?;
    Ok(RangeTable::read_csv(bytes.as_slice())?)
}

fn read_scores(path: &Path) -> CliResult<Vec<LabeledSample>> {
    let file = input_file(path, "scores.csv");
    let bytes = fs::read(&file).map_err(|e| CliError::io(&file, e))?;
    Ok(read_samples_csv(bytes.as_slice())?)
}

fn read_weights(path: &Path) -> CliResult<WeightVector> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(WeightVector::from_json(&text)?)
}

/// Evaluates every (bundle, viewpoint) pair in parallel; results come back
/// grouped by bundle in viewpoint order.
fn evaluate_grid(bundles: &[GraphBundle], views: &[Vec3], config: &RunConfig) -> CliResult<Vec<Vec<RawVector>>> {
    let settings = config.eval_settings();
    let evaluators = bundles
        .iter()
        .map(|b| BundleEvaluator::new(b, &settings))
        .collect::<vantage::Result<Vec<_>>>()?;
    let n = views.len();
    let flat = (0..bundles.len() * n)
        .into_par_iter()
        .map(|j| evaluators[j / n].evaluate(views[j % n]))
        .collect::<vantage::Result<Vec<_>>>()?;
    let mut grouped = Vec::with_capacity(bundles.len());
    let mut rest = flat.into_iter();
    for _ in bundles {
        grouped.push(rest.by_ref().take(n).collect());
    }
    Ok(grouped)
}

fn ranges_of(bundles: &[GraphBundle], landscapes: &[Vec<RawVector>], hash: &str) -> RangeTable {
    let mut table = RangeTable {
        config_hash: Some(hash.to_string()),
        ..RangeTable::default()
    };
    for (b, rows) in bundles.iter().zip(landscapes) {
        table.insert(b.id.clone(), GraphRanges::from_samples(rows).expect("at least two samples"));
    }
    table
}

fn sample(dataset: &Path, out: &Artifacts, landscape: bool, config: &RunConfig) -> CliResult<()> {
    let dataset = load_dataset(dataset)?;
    let views = fibonacci_viewpoints(config.sample_count)?;
    eprintln!(
        "vantage: sampling {} graphs at {} viewpoints on {} threads",
        dataset.bundles.len(),
        views.len(),
        rayon::current_num_threads()
    );
    let landscapes = evaluate_grid(&dataset.bundles, &views, config)?;
    let table = ranges_of(&dataset.bundles, &landscapes, &out.hash);

    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    out.write("ranges.csv", &buf)?;
    if landscape {
        out.csv("landscape.csv", |buf| {
            let mut w = csv_writer(buf);
            let mut header = vec!["graph_id", "index", "vx", "vy", "vz"];
            header.extend(MeasureId::ALL.iter().map(|m| m.as_str()));
            w.write_record(&header)?;
            for rows in &landscapes {
                for (i, r) in rows.iter().enumerate() {
                    let mut rec = vec![
                        r.graph_id.clone(),
                        i.to_string(),
                        r.viewpoint.x.to_string(),
                        r.viewpoint.y.to_string(),
                        r.viewpoint.z.to_string(),
                    ];
                    rec.extend(r.values.iter().map(|v| v.to_string()));
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
            Ok(())
        })?;
    }
    out.config_echo(config)?;
    let degenerate: usize = table
        .graphs
        .values()
        .map(|r| MeasureId::ALL.iter().filter(|m| r.is_degenerate(**m)).count())
        .sum();
    println!(
        "{} graphs, {} range rows, {} constant (graph, measure) pairs",
        table.graphs.len(),
        table.graphs.len() * MEASURE_COUNT,
        degenerate
    );
    Ok(())
}

fn score(dataset: &Path, ranges: &Path, out: &Artifacts, config: &RunConfig) -> CliResult<()> {
    let dataset = load_dataset(dataset)?;
    let table = read_ranges(ranges)?;
    if table.config_hash.as_deref() != Some(out.hash.as_str()) {
        eprintln!(
            "vantage: warning: ranges were sampled under config {}, scoring under {}",
            table.config_hash.as_deref().unwrap_or("(unknown)"),
            out.hash
        );
    }
    let settings = config.eval_settings();
    let evaluators = dataset
        .bundles
        .iter()
        .map(|b| Ok((b.id.as_str(), (b, BundleEvaluator::new(b, &settings)?))))
        .collect::<vantage::Result<HashMap<_, _>>>()?;
    let samples = dataset
        .selections
        .par_iter()
        .map(|sel| {
            let (bundle, eval) = &evaluators[sel.graph_id.as_str()];
            let view = selection_to_viewpoint(sel, bundle)?;
            Ok(LabeledSample {
                scores: normalize(&eval.evaluate(view)?, &table)?,
                label: sel.polarity,
                layout_class: bundle.layout_class,
                size_class: bundle.size_class,
                participant_id: sel.participant_id.clone(),
            })
        })
        .collect::<vantage::Result<Vec<_>>>()?;
    out.csv("scores.csv", |buf| write_samples_csv(&samples, buf))?;
    out.config_echo(config)?;
    println!("{} selections scored", samples.len());
    Ok(())
}

impl Filter {
    fn matches(&self, s: &LabeledSample) -> bool {
        match self {
            Filter::Layout(c) => s.layout_class == *c,
            Filter::Size(c) => s.size_class == *c,
            Filter::Graph(g) => s.graph_id() == g,
        }
    }

    /// Stratum name as used by the analysis tables.
    fn stratum(&self) -> String {
        match self {
            Filter::Layout(c) => format!("L-{}", c.short()),
            Filter::Size(c) => c.to_string(),
            Filter::Graph(g) => g.clone(),
        }
    }

    fn file_suffix(&self) -> String {
        match self {
            Filter::Layout(c) => format!("-layout-{}", c.short()),
            Filter::Size(c) => format!("-size-{c}"),
            Filter::Graph(g) => format!("-graph-{}", file_safe(g)),
        }
    }
}

/// Min-max rescales every measure over `samples`; constant measures score 1.
fn renormalize(samples: &mut [LabeledSample]) {
    for i in 0..MEASURE_COUNT {
        let (lo, hi) = samples
            .iter()
            .map(|s| s.scores.scores[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        for s in samples.iter_mut() {
            s.scores.scores[i] = normalize_value(s.scores.scores[i], lo, hi, MeasurePolarity::HigherBetter);
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[allow(clippy::too_many_arguments)]
fn fit(
    scores: &Path,
    method: FitMethod,
    k: Option<usize>,
    filter: Option<&Filter>,
    search: SubsetSearch,
    renormalize_scores: bool,
    out: &Artifacts,
    config: &RunConfig,
) -> CliResult<()> {
    let ks = match k {
        Some(k) if !(1..=MEASURE_COUNT).contains(&k) => {
            return Err(CliError::Usage(format!("--k must lie in 1..={MEASURE_COUNT}, got {k}")));
        }
        Some(k) => vec![k],
        None => config.subset_sizes.clone(),
    };
    let mut samples = read_scores(scores)?;
    if let Some(f) = filter {
        samples.retain(|s| f.matches(s));
    }
    if renormalize_scores {
        renormalize(&mut samples);
    }
    let stratum = filter.map_or_else(|| "All".to_string(), Filter::stratum);
    let suffix = filter.map_or_else(String::new, Filter::file_suffix);

    let mut rows: Vec<(String, FitReport)> = Vec::new();
    for &k in &ks {
        let report = select_subset_with_l2(&samples, k, method, search, config.l2)?;
        println!(
            "{} k={k}: accuracy {:.4}, mean separation {:.4}, active {}{}",
            method,
            report.accuracy,
            report.mean_separation,
            report.weights.active_set().iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","),
            if report.flags.is_empty() {
                String::new()
            } else {
                format!(" [{}]", report.flags.join(";"))
            }
        );
        rows.push((stratum.clone(), report));
    }
    out.csv(&format!("fit-{method}{suffix}.csv"), |buf| write_fit_reports_csv(&rows, buf))?;
    for (_, report) in &rows {
        let k = report.weights.active_set().len();
        let mut json = report.weights.to_json_tagged(Some(&out.hash));
        json.push('\n');
        out.write(&format!("weights-{method}-k{k}{suffix}.json"), json.as_bytes())?;
        out.csv(&format!("predictions-{method}-k{k}{suffix}.csv"), |buf| write_predictions(&samples, report, buf))?;
    }
    out.config_echo(config)?;
    Ok(())
}

/// Per-sample combined score (linear form) and, for logistic fits, the
/// model probability of being a best view.
fn write_predictions(samples: &[LabeledSample], report: &FitReport, buf: &mut Vec<u8>) -> vantage::Result<()> {
    let mut w = csv_writer(buf);
    w.write_record(["participant_id", "graph_id", "polarity", "combined", "probability"])?;
    for s in samples {
        let probability = match (report.intercept, report.coefficients) {
            (Some(b), Some(c)) => {
                sigmoid(b + c.iter().zip(&s.scores.scores).map(|(c, x)| c * x).sum::<f64>()).to_string()
            }
            _ => String::new(),
        };
        w.write_record([
            s.participant_id.clone(),
            s.graph_id().to_string(),
            s.label.to_string(),
            combined_score(&report.weights, &s.scores).to_string(),
            probability,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MeasureValue {
    measure: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct AnalysisSummary {
    registry: &'static str,
    config: String,
    samples: usize,
    best: usize,
    worst: usize,
    pc1_explained: f64,
    pc1_accuracy: f64,
    median_off_diagonal_correlation: f64,
    min_overlap_pair_correlation: f64,
    constant_measures: Vec<&'static str>,
    best_minus_worst: Vec<MeasureValue>,
}

fn analyze(
    scores: &Path,
    lr_weights: Option<&Path>,
    sqp_weights: Option<&Path>,
    out: &Artifacts,
    config: &RunConfig,
) -> CliResult<()> {
    let samples = read_scores(scores)?;
    let pca = pca_analysis(&samples)?;
    let corr = correlation_matrix(&samples)?;
    out.csv("pca.csv", |buf| write_pca_csv(&pca, buf))?;
    out.csv("pca-projections.csv", |buf| write_projections_csv(&pca, &samples, buf))?;
    out.csv("correlation.csv", |buf| write_correlation_csv(&corr, buf))?;

    // per-stratum fits in the shape of the importance table
    let mut fits: Vec<(String, FitReport)> = Vec::new();
    for strata in [Strata::All, Strata::ByLayoutClass, Strata::BySizeClass] {
        for (name, members) in strata.partition(&samples) {
            for method in [FitMethod::Logistic, FitMethod::Separation] {
                for &k in &config.subset_sizes {
                    match select_subset_with_l2(&members, k, method, SubsetSearch::BackwardElimination, config.l2) {
                        Ok(r) => fits.push((name.clone(), r)),
                        Err(e) => eprintln!("vantage: warning: stratum {name}, {method} k={k} skipped: {e}"),
                    }
                }
            }
        }
    }
    out.csv("fits.csv", |buf| write_fit_reports_csv(&fits, buf))?;

    // combined columns use the supplied weights or the widest All fit
    let widest = |method: FitMethod| {
        fits.iter()
            .filter(|(s, r)| s == "All" && r.method == method)
            .max_by_key(|(_, r)| r.weights.active_set().len())
            .map(|(_, r)| r.weights.clone())
    };
    let lr = match lr_weights {
        Some(p) => Some(read_weights(p)?),
        None => widest(FitMethod::Logistic),
    };
    let sqp = match sqp_weights {
        Some(p) => Some(read_weights(p)?),
        None => widest(FitMethod::Separation),
    };
    let mut table = AggregateTable::default();
    for strata in [Strata::All, Strata::ByLayoutClass, Strata::BySizeClass] {
        let part = aggregate(&samples, strata, lr.as_ref(), sqp.as_ref())?;
        table.rows.extend(part.rows);
        table.warnings.extend(part.warnings);
    }
    let by_graph = aggregate(&samples, Strata::ByGraph, lr.as_ref(), sqp.as_ref())?;
    for w in table.warnings.iter().chain(&by_graph.warnings) {
        eprintln!("vantage: warning: {w}");
    }
    out.csv("aggregate.csv", |buf| table.write_csv(buf))?;
    out.csv("aggregate-by-graph.csv", |buf| by_graph.write_csv(buf))?;

    let best = table.row("All", Polarity::Best);
    let worst = table.row("All", Polarity::Worst);
    let best_minus_worst = match (best, worst) {
        (Some(b), Some(w)) => MeasureId::ALL
            .iter()
            .map(|m| MeasureValue {
                measure: m.as_str(),
                value: b.means[m.index()] - w.means[m.index()],
            })
            .collect(),
        _ => Vec::new(),
    };
    let mut overlap_min = f64::INFINITY;
    for (i, a) in MeasureId::OVERLAP.iter().enumerate() {
        for b in &MeasureId::OVERLAP[i + 1..] {
            overlap_min = overlap_min.min(corr.get(*a, *b));
        }
    }
    let summary = AnalysisSummary {
        registry: REGISTRY_VERSION,
        config: out.hash.clone(),
        samples: samples.len(),
        best: samples.iter().filter(|s| s.is_best()).count(),
        worst: samples.iter().filter(|s| !s.is_best()).count(),
        pc1_explained: pca.explained[0],
        pc1_accuracy: pca.first_component_accuracy(&samples),
        median_off_diagonal_correlation: corr.median_off_diagonal(),
        min_overlap_pair_correlation: overlap_min,
        constant_measures: corr.constant.iter().map(|m| m.as_str()).collect(),
        best_minus_worst,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    out.write("summary.json", json.as_bytes())?;
    out.config_echo(config)?;
    println!(
        "PC1 explains {:.3} of the variance and separates best from worst with accuracy {:.3}",
        summary.pc1_explained, summary.pc1_accuracy
    );
    Ok(())
}

/// Samples one bundle's landscape and normalizes it against `ranges`, or
/// against the landscape's own extremes when no table is given.
fn scored_landscape(
    bundle: &GraphBundle,
    ranges: Option<&Path>,
    hash: &str,
    config: &RunConfig,
) -> CliResult<(Vec<RawVector>, Vec<vantage::ScoreVector>)> {
    let views = fibonacci_viewpoints(config.sample_count)?;
    let landscape = evaluate_grid(std::slice::from_ref(bundle), &views, config)?.remove(0);
    let table = match ranges {
        Some(p) => read_ranges(p)?,
        None => ranges_of(std::slice::from_ref(bundle), std::slice::from_ref(&landscape), hash),
    };
    let scores = landscape.iter().map(|r| normalize(r, &table)).collect::<vantage::Result<Vec<_>>>()?;
    Ok((landscape, scores))
}

fn optimize(
    dataset: &Path,
    weights: &Path,
    graph: &str,
    top: usize,
    ranges: Option<&Path>,
    out: &Artifacts,
    config: &RunConfig,
) -> CliResult<()> {
    if top == 0 {
        return Err(CliError::Usage("--top must be at least 1".into()));
    }
    let dataset = load_dataset(dataset)?;
    let bundle = find_bundle(&dataset, graph)?;
    let weights = read_weights(weights)?;
    let (_, scores) = scored_landscape(bundle, ranges, &out.hash, config)?;
    let mut ranked: Vec<(usize, f64)> = scores.iter().map(|s| combined_score(&weights, s)).enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(top);
    out.csv(&format!("optimize-{}.csv", file_safe(graph)), |buf| {
        let mut w = csv_writer(buf);
        w.write_record(["rank", "index", "vx", "vy", "vz", "score"])?;
        for (rank, (i, score)) in ranked.iter().enumerate() {
            let v = scores[*i].viewpoint;
            w.write_record([
                (rank + 1).to_string(),
                i.to_string(),
                v.x.to_string(),
                v.y.to_string(),
                v.z.to_string(),
                score.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for (rank, (i, score)) in ranked.iter().enumerate() {
        let v = scores[*i].viewpoint;
        let _ = writeln!(lock, "{:>3}  ({:+.4}, {:+.4}, {:+.4})  {:.6}", rank + 1, v.x, v.y, v.z, score);
    }
    Ok(())
}

fn export_sphere(
    dataset: &Path,
    graph: &str,
    measure: MeasureId,
    ranges: Option<&Path>,
    out: &Artifacts,
    config: &RunConfig,
) -> CliResult<()> {
    let dataset = load_dataset(dataset)?;
    let bundle = find_bundle(&dataset, graph)?;
    let (landscape, scores) = scored_landscape(bundle, ranges, &out.hash, config)?;
    let stem = format!("sphere-{}-{}", file_safe(graph), measure);
    out.csv(&format!("{stem}.csv"), |buf| {
        let mut w = csv_writer(buf);
        w.write_record(["index", "vx", "vy", "vz", "lon_deg", "lat_deg", "raw", "score"])?;
        for (i, (r, s)) in landscape.iter().zip(&scores).enumerate() {
            let (lon, lat) = sphere::lon_lat(&r.viewpoint);
            w.write_record([
                i.to_string(),
                r.viewpoint.x.to_string(),
                r.viewpoint.y.to_string(),
                r.viewpoint.z.to_string(),
                lon.to_degrees().to_string(),
                lat.to_degrees().to_string(),
                r.values[measure.index()].to_string(),
                s.get(measure).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let markers = dataset
        .selections
        .iter()
        .filter(|s| s.graph_id == graph)
        .map(|s| Ok((selection_to_viewpoint(s, bundle)?, s.polarity)))
        .collect::<vantage::Result<Vec<_>>>()?;
    let views: Vec<Vec3> = landscape.iter().map(|r| r.viewpoint).collect();
    let values: Vec<f64> = scores.iter().map(|s| s.get(measure)).collect();
    let svg = sphere::render(
        &views,
        &values,
        &markers,
        &format!("{measure} score over the view sphere of {graph}"),
        &out.provenance(),
    );
    out.write(&format!("{stem}.svg"), svg.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use vantage::model::{LayoutClass, SizeClass};
    use vantage::ScoreVector;

    fn labeled(scores: [f64; MEASURE_COUNT]) -> LabeledSample {
        LabeledSample {
            scores: ScoreVector {
                graph_id: "g/1".into(),
                viewpoint: Vec3::z(),
                range_id: String::new(),
                scores,
            },
            label: Polarity::Best,
            layout_class: LayoutClass::Layered,
            size_class: SizeClass::XL,
            participant_id: "p".into(),
        }
    }

    #[test]
    fn renormalize_rescales_within_the_subset() {
        let mut s = vec![labeled([0.2; MEASURE_COUNT]), labeled([0.6; MEASURE_COUNT]), labeled([0.4; MEASURE_COUNT])];
        s[0].scores.scores[3] = 0.6;
        renormalize(&mut s);
        assert_eq!(s[0].scores.scores[0], 0.0);
        assert_eq!(s[1].scores.scores[0], 1.0);
        assert!((s[2].scores.scores[0] - 0.5).abs() < 1e-12);
        // measure 3 is 0.6, 0.6, 0.4
        assert_eq!(s[0].scores.scores[3], 1.0);
        assert_eq!(s[2].scores.scores[3], 0.0);
    }

    #[test]
    fn filters_name_their_strata() {
        let s = labeled([0.5; MEASURE_COUNT]);
        let layout = Filter::Layout(LayoutClass::Layered);
        assert!(layout.matches(&s) && layout.stratum() == "L-L" && layout.file_suffix() == "-layout-L");
        assert!(!Filter::Size(SizeClass::S).matches(&s));
        let graph = Filter::Graph("g/1".into());
        assert!(graph.matches(&s));
        assert_eq!(graph.file_suffix(), "-graph-g_1");
    }

    #[test]
    fn input_paths_resolve_directories() {
        let dir = std::env::temp_dir();
        assert_eq!(input_file(&dir, "scores.csv"), dir.join("scores.csv"));
        assert_eq!(input_dir(Path::new("scores.csv")), PathBuf::from("."));
        assert_eq!(input_dir(Path::new("/no/such/scores.csv")), PathBuf::from("/no/such"));
    }
}

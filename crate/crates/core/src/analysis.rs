//! Descriptive analyses of labeled score vectors: principal components,
//! measure correlations and stratified means.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fitting::{combined_score, LabeledSample, WeightVector};
use crate::iso::canonical_sign;
use crate::measures::{MeasureId, MEASURE_COUNT};
use crate::model::{LayoutClass, Polarity as Label, SizeClass};

/// Standard deviations below this mark a measure as constant.
pub const CONSTANT_STD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    pub mean: [f64; MEASURE_COUNT],
    /// Orthonormal components, by descending eigenvalue.
    pub components: Vec<[f64; MEASURE_COUNT]>,
    /// Eigenvalues of the sample covariance (n − 1 denominator).
    pub eigenvalues: Vec<f64>,
    /// Share of total variance per component. All zero when the samples
    /// have no variance at all.
    pub explained: Vec<f64>,
    /// Coordinates of every sample in the component basis.
    pub projections: Vec<[f64; MEASURE_COUNT]>,
}

impl PcaResult {
    /// Accuracy of classifying samples by thresholding the first component
    /// at the midpoint of the two class means.
    pub fn first_component_accuracy(&self, samples: &[LabeledSample]) -> f64 {
        let mean_of = |best: bool| {
            let v: Vec<f64> = samples
                .iter()
                .zip(&self.projections)
                .filter(|(s, _)| s.is_best() == best)
                .map(|(_, p)| p[0])
                .collect();
            v.iter().sum::<f64>() / v.len().max(1) as f64
        };
        let (b, w) = (mean_of(true), mean_of(false));
        let mid = 0.5 * (b + w);
        let correct = samples
            .iter()
            .zip(&self.projections)
            .filter(|(s, p)| if b >= w { (p[0] > mid) == s.is_best() } else { (p[0] < mid) == s.is_best() })
            .count();
        correct as f64 / samples.len() as f64
    }
}

fn column_means(samples: &[LabeledSample]) -> [f64; MEASURE_COUNT] {
    let mut mean = [0.0; MEASURE_COUNT];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(&s.scores.scores) {
            *m += v;
        }
    }
    mean.map(|m| m / samples.len() as f64)
}

fn covariance(samples: &[LabeledSample], mean: &[f64; MEASURE_COUNT]) -> DMatrix<f64> {
    let mut cov = DMatrix::zeros(MEASURE_COUNT, MEASURE_COUNT);
    for s in samples {
        for i in 0..MEASURE_COUNT {
            let di = s.scores.scores[i] - mean[i];
            for j in i..MEASURE_COUNT {
                cov[(i, j)] += di * (s.scores.scores[j] - mean[j]);
            }
        }
    }
    let denom = (samples.len() - 1) as f64;
    for i in 0..MEASURE_COUNT {
        for j in i..MEASURE_COUNT {
            cov[(i, j)] /= denom;
            cov[(j, i)] = cov[(i, j)];
        }
    }
    cov
}

fn require_two(samples: &[LabeledSample]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::Domain(format!("analysis needs at least 2 samples, got {}", samples.len())));
    }
    Ok(())
}

/// Mean-centered PCA of the score vectors.
pub fn pca_analysis(samples: &[LabeledSample]) -> Result<PcaResult> {
    require_two(samples)?;
    let mean = column_means(samples);
    let eig = SymmetricEigen::new(covariance(samples, &mean));
    let mut order: Vec<usize> = (0..MEASURE_COUNT).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let mut components = Vec::with_capacity(MEASURE_COUNT);
    let mut eigenvalues = Vec::with_capacity(MEASURE_COUNT);
    for &k in &order {
        let col = eig.eigenvectors.column(k).normalize();
        let mut c = [0.0; MEASURE_COUNT];
        c.iter_mut().zip(col.iter()).for_each(|(a, b)| *a = *b);
        canonical_sign(&mut c);
        components.push(c);
        eigenvalues.push(eig.eigenvalues[k].max(0.0));
    }
    let total: f64 = eigenvalues.iter().sum();
    let explained = eigenvalues
        .iter()
        .map(|l| if total > 0.0 { l / total } else { 0.0 })
        .collect();
    let projections = samples
        .iter()
        .map(|s| {
            let mut p = [0.0; MEASURE_COUNT];
            for (pk, comp) in p.iter_mut().zip(&components) {
                *pk = (0..MEASURE_COUNT).map(|i| (s.scores.scores[i] - mean[i]) * comp[i]).sum();
            }
            p
        })
        .collect();
    Ok(PcaResult {
        mean,
        components,
        eigenvalues,
        explained,
        projections,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub values: [[f64; MEASURE_COUNT]; MEASURE_COUNT],
    /// Measures without variance; their off-diagonal correlations are 0.
    pub constant: Vec<MeasureId>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: MeasureId, b: MeasureId) -> f64 {
        self.values[a.index()][b.index()]
    }

    /// Median of the strictly upper off-diagonal entries.
    pub fn median_off_diagonal(&self) -> f64 {
        let mut v: Vec<f64> = (0..MEASURE_COUNT)
            .flat_map(|i| (i + 1..MEASURE_COUNT).map(move |j| (i, j)))
            .map(|(i, j)| self.values[i][j])
            .collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }
}

/// Pearson correlations between all measures.
pub fn correlation_matrix(samples: &[LabeledSample]) -> Result<CorrelationMatrix> {
    require_two(samples)?;
    let mean = column_means(samples);
    let cov = covariance(samples, &mean);
    let sd: Vec<f64> = (0..MEASURE_COUNT).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    let constant: Vec<MeasureId> = MeasureId::ALL.into_iter().filter(|m| sd[m.index()] < CONSTANT_STD).collect();
    let mut values = [[0.0; MEASURE_COUNT]; MEASURE_COUNT];
    for i in 0..MEASURE_COUNT {
        for j in 0..MEASURE_COUNT {
            values[i][j] = if i == j {
                1.0
            } else if sd[i] < CONSTANT_STD || sd[j] < CONSTANT_STD {
                0.0
            } else {
                (cov[(i, j)] / (sd[i] * sd[j])).clamp(-1.0, 1.0)
            };
        }
    }
    Ok(CorrelationMatrix { values, constant })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strata {
    All,
    ByLayoutClass,
    BySizeClass,
    ByGraph,
}

impl Strata {
    /// Stratum names in presentation order.
    fn names(self, samples: &[LabeledSample]) -> Vec<String> {
        match self {
            Strata::All => vec!["All".into()],
            Strata::ByLayoutClass => LayoutClass::ALL.iter().map(|c| layout_stratum(*c)).collect(),
            Strata::BySizeClass => SizeClass::ALL.iter().map(|c| c.to_string()).collect(),
            Strata::ByGraph => {
                let mut seen: Vec<String> = Vec::new();
                for s in samples {
                    if !seen.iter().any(|g| g == s.graph_id()) {
                        seen.push(s.graph_id().to_string());
                    }
                }
                seen
            }
        }
    }

    pub fn stratum_of(self, sample: &LabeledSample) -> String {
        match self {
            Strata::All => "All".into(),
            Strata::ByLayoutClass => layout_stratum(sample.layout_class),
            Strata::BySizeClass => sample.size_class.to_string(),
            Strata::ByGraph => sample.graph_id().to_string(),
        }
    }

    /// Samples per stratum, in presentation order, empty strata included.
    pub fn partition(self, samples: &[LabeledSample]) -> Vec<(String, Vec<LabeledSample>)> {
        self.names(samples)
            .into_iter()
            .map(|name| {
                let members = samples.iter().filter(|s| self.stratum_of(s) == name).cloned().collect();
                (name, members)
            })
            .collect()
    }
}

fn layout_stratum(class: LayoutClass) -> String {
    format!("L-{}", class.short())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub stratum: String,
    pub label: Label,
    pub count: usize,
    pub means: [f64; MEASURE_COUNT],
    pub combined_lr: Option<f64>,
    pub combined_sqp: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateTable {
    pub rows: Vec<AggregateRow>,
    pub warnings: Vec<String>,
}

impl AggregateTable {
    pub fn row(&self, stratum: &str, label: Label) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| r.stratum == stratum && r.label == label)
    }

    /// CSV with columns `stratum,polarity,count`, the measures in registry
    /// order, then `C-LR,C-SQP` (empty when no weights were supplied).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["stratum", "polarity", "count"];
        header.extend(MeasureId::ALL.iter().map(|m| m.as_str()));
        header.extend(["C-LR", "C-SQP"]);
        w.write_record(&header)?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for r in &self.rows {
            let mut row = vec![r.stratum.clone(), r.label.to_string(), r.count.to_string()];
            row.extend(r.means.iter().map(|x| x.to_string()));
            row.extend([opt(r.combined_lr), opt(r.combined_sqp)]);
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-measure means for every (stratum, label), best rows first. Combined
/// columns are means of the combined score under the supplied weights.
pub fn aggregate(
    samples: &[LabeledSample],
    strata: Strata,
    lr: Option<&WeightVector>,
    sqp: Option<&WeightVector>,
) -> Result<AggregateTable> {
    if samples.is_empty() {
        return Err(Error::Domain("aggregation needs at least one sample".into()));
    }
    let mut table = AggregateTable::default();
    for (stratum, members) in strata.partition(samples) {
        for label in [Label::Best, Label::Worst] {
            let group: Vec<&LabeledSample> = members.iter().filter(|s| s.label == label).collect();
            if group.is_empty() {
                table.warnings.push(format!("stratum {stratum} has no {label} samples; row omitted"));
                continue;
            }
            let n = group.len() as f64;
            let mut means = [0.0; MEASURE_COUNT];
            for s in &group {
                for (m, v) in means.iter_mut().zip(&s.scores.scores) {
                    *m += v;
                }
            }
            let combined = |w: Option<&WeightVector>| {
                w.map(|w| group.iter().map(|s| combined_score(w, &s.scores)).sum::<f64>() / n)
            };
            table.rows.push(AggregateRow {
                stratum: stratum.clone(),
                label,
                count: group.len(),
                means: means.map(|m| m / n),
                combined_lr: combined(lr),
                combined_sqp: combined(sqp),
            });
        }
    }
    Ok(table)
}

/// Writes a PCA result as CSV: one row per component with its eigenvalue,
/// explained share and loadings in registry order.
pub fn write_pca_csv<W: Write>(pca: &PcaResult, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["component", "eigenvalue", "explained"];
    header.extend(MeasureId::ALL.iter().map(|m| m.as_str()));
    w.write_record(&header)?;
    for (k, comp) in pca.components.iter().enumerate() {
        let mut row = vec![format!("PC{}", k + 1), pca.eigenvalues[k].to_string(), pca.explained[k].to_string()];
        row.extend(comp.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes per-sample PCA coordinates on the first two components.
pub fn write_projections_csv<W: Write>(pca: &PcaResult, samples: &[LabeledSample], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["participant_id", "graph_id", "polarity", "pc1", "pc2"])?;
    for (s, p) in samples.iter().zip(&pca.projections) {
        w.write_record([
            s.participant_id.clone(),
            s.graph_id().to_string(),
            s.label.to_string(),
            p[0].to_string(),
            p[1].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the correlation matrix with a leading `measure` column.
pub fn write_correlation_csv<W: Write>(corr: &CorrelationMatrix, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["measure"];
    header.extend(MeasureId::ALL.iter().map(|m| m.as_str()));
    w.write_record(&header)?;
    for m in MeasureId::ALL {
        let mut row = vec![m.to_string()];
        row.extend(corr.values[m.index()].iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

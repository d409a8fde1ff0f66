//! Linear measure combinations fitted from labeled best/worst viewpoints.
//!
//! Two fitters are provided: an L2-regularized logistic regression, whose
//! clamped coefficients serve as importance weights, and a separation
//! maximizer over nonnegative unit-norm weights. Both can be restricted to a
//! measure subset chosen by recursive backward elimination.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{MeasureId, MEASURE_COUNT, REGISTRY_VERSION};
use crate::model::{LayoutClass, Polarity as Label, SizeClass, Vec3};
use crate::pipeline::ScoreVector;

pub const DEFAULT_L2: f64 = 1e-4;
pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 10_000;
/// Tolerance on the declared normalization of a weight vector.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

const SEPARATION_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub scores: ScoreVector,
    pub label: Label,
    pub layout_class: LayoutClass,
    pub size_class: SizeClass,
    pub participant_id: String,
}

impl LabeledSample {
    pub fn graph_id(&self) -> &str {
        &self.scores.graph_id
    }

    pub fn is_best(&self) -> bool {
        self.label == Label::Best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    UnitNorm,
    UnitSum,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::UnitNorm => "unit-norm",
            Normalization::UnitSum => "unit-sum",
        }
    }

    fn measure(self, weights: &[f64]) -> f64 {
        match self {
            Normalization::UnitNorm => weights.iter().map(|w| w * w).sum::<f64>().sqrt(),
            Normalization::UnitSum => weights.iter().sum(),
        }
    }
}

/// Nonnegative per-measure weights. Weights outside the active set are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: [f64; MEASURE_COUNT],
    normalization: Normalization,
    active: [bool; MEASURE_COUNT],
}

impl WeightVector {
    pub fn new(weights: [f64; MEASURE_COUNT], normalization: Normalization, active: &[MeasureId]) -> Result<Self> {
        let mut mask = [false; MEASURE_COUNT];
        for m in active {
            mask[m.index()] = true;
        }
        if !mask.contains(&true) {
            return Err(Error::Domain("weight vector needs a nonempty active set".into()));
        }
        for m in MeasureId::ALL {
            let w = weights[m.index()];
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Domain(format!("weight of {m} is {w}, expected a finite nonnegative value")));
            }
            if !mask[m.index()] && w != 0.0 {
                return Err(Error::Domain(format!("{m} is inactive but has weight {w}")));
            }
        }
        let total = normalization.measure(&weights);
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Domain(format!(
                "weights have {} {total}, expected 1",
                normalization.as_str()
            )));
        }
        Ok(WeightVector {
            weights,
            normalization,
            active: mask,
        })
    }

    /// Equal weights over `active` under the given normalization.
    pub fn uniform(active: &[MeasureId], normalization: Normalization) -> Result<Self> {
        let mut mask = [false; MEASURE_COUNT];
        active.iter().for_each(|m| mask[m.index()] = true);
        let k = mask.iter().filter(|&&a| a).count() as f64;
        let value = match normalization {
            Normalization::UnitNorm => 1.0 / k.sqrt(),
            Normalization::UnitSum => 1.0 / k,
        };
        let weights = mask.map(|a| if a { value } else { 0.0 });
        Self::new(weights, normalization, active)
    }

    /// A single active measure with weight 1.
    pub fn single(id: MeasureId) -> Self {
        let mut weights = [0.0; MEASURE_COUNT];
        weights[id.index()] = 1.0;
        Self::new(weights, Normalization::UnitSum, &[id]).expect("valid by construction")
    }

    pub fn weights(&self) -> &[f64; MEASURE_COUNT] {
        &self.weights
    }

    pub fn get(&self, id: MeasureId) -> f64 {
        self.weights[id.index()]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn active_set(&self) -> Vec<MeasureId> {
        MeasureId::ALL.into_iter().filter(|m| self.active[m.index()]).collect()
    }

    pub fn is_active(&self, id: MeasureId) -> bool {
        self.active[id.index()]
    }

    /// The same direction under another normalization. All-zero weights
    /// cannot be rescaled and yield `None`.
    pub fn rescaled(&self, normalization: Normalization) -> Option<Self> {
        let total = normalization.measure(&self.weights);
        if !(total > 0.0) {
            return None;
        }
        let weights = self.weights.map(|w| w / total);
        Self::new(weights, normalization, &self.active_set()).ok()
    }

    pub fn to_json(&self) -> String {
        self.to_json_tagged(None)
    }

    /// JSON export carrying the registry version and a configuration hash.
    pub fn to_json_tagged(&self, config_hash: Option<&str>) -> String {
        serde_json::to_string_pretty(&WeightsJson {
            registry: config_hash.map(|_| REGISTRY_VERSION),
            config: config_hash,
            normalization: self.normalization,
            active_set: self.active_set().iter().map(|m| m.to_string()).collect(),
            weights: RegistryOrdered(&self.weights),
        })
        .expect("weights serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(default)]
            registry: Option<String>,
            #[serde(default)]
            #[allow(dead_code)]
            config: Option<String>,
            normalization: Normalization,
            active_set: Vec<String>,
            weights: BTreeMap<String, f64>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: String::new(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if let Some(r) = raw.registry.as_deref().filter(|r| *r != REGISTRY_VERSION) {
            return Err(Error::Domain(format!("weights were fitted under registry {r}, expected {REGISTRY_VERSION}")));
        }
        let parse_id = |s: &str| -> Result<MeasureId> {
            s.parse().map_err(|_| Error::Domain(format!("unknown measure id {s:?}")))
        };
        let active = raw.active_set.iter().map(|s| parse_id(s)).collect::<Result<Vec<_>>>()?;
        let mut weights = [0.0; MEASURE_COUNT];
        for (k, w) in &raw.weights {
            weights[parse_id(k)?.index()] = *w;
        }
        Self::new(weights, raw.normalization, &active)
    }
}

struct RegistryOrdered<'a>(&'a [f64; MEASURE_COUNT]);

impl Serialize for RegistryOrdered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(MEASURE_COUNT))?;
        for m in MeasureId::ALL {
            map.serialize_entry(m.as_str(), &self.0[m.index()])?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct WeightsJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    registry: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a str>,
    normalization: Normalization,
    active_set: Vec<String>,
    weights: RegistryOrdered<'a>,
}

/// Σ w_a s_a over the active set.
pub fn combined_score(weights: &WeightVector, scores: &ScoreVector) -> f64 {
    combine(weights, &scores.scores)
}

fn combine(weights: &WeightVector, scores: &[f64; MEASURE_COUNT]) -> f64 {
    MeasureId::ALL
        .iter()
        .filter(|m| weights.is_active(**m))
        .map(|m| weights.get(*m) * scores[m.index()])
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitMethod {
    Logistic,
    Separation,
}

impl FitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FitMethod::Logistic => "lr",
            FitMethod::Separation => "sqp",
        }
    }
}

impl fmt::Display for FitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lr" | "logistic" => Ok(FitMethod::Logistic),
            "sqp" | "separation" => Ok(FitMethod::Separation),
            _ => Err(Error::Domain(format!("unknown fit method {s:?}, expected lr or sqp"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetSearch {
    BackwardElimination,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub method: FitMethod,
    /// Importance weights: unit-sum for logistic fits, unit-norm for
    /// separation fits.
    pub weights: WeightVector,
    pub intercept: Option<f64>,
    /// Signed logistic coefficients, 0 outside the active set.
    pub coefficients: Option<[f64; MEASURE_COUNT]>,
    /// Training accuracy at threshold 0.5. Separation weights are rescaled
    /// to unit sum for this.
    pub accuracy: f64,
    /// Mean combined score of best minus worst samples under `weights`.
    pub mean_separation: f64,
    pub best_count: usize,
    pub worst_count: usize,
    /// Penalized mean log-loss (logistic) or Σ w_a c_a (separation).
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective gap to the closed-form optimum (separation only).
    pub certificate_gap: Option<f64>,
    pub flags: Vec<String>,
}

struct Design<'a> {
    samples: &'a [LabeledSample],
    active: Vec<MeasureId>,
    best: usize,
    worst: usize,
}

impl<'a> Design<'a> {
    fn new(samples: &'a [LabeledSample], active: &[MeasureId]) -> Result<Self> {
        let best = samples.iter().filter(|s| s.is_best()).count();
        let worst = samples.len() - best;
        if best == 0 || worst == 0 {
            return Err(Error::Domain(format!(
                "fitting needs both classes, got {best} best and {worst} worst samples"
            )));
        }
        let mut active = active.to_vec();
        active.sort_by_key(|m| m.index());
        active.dedup();
        if active.is_empty() {
            return Err(Error::Domain("fitting needs at least one measure".into()));
        }
        Ok(Design {
            samples,
            active,
            best,
            worst,
        })
    }

    fn x(&self, s: usize, j: usize) -> f64 {
        self.samples[s].scores.scores[self.active[j].index()]
    }

    fn expand(&self, reduced: &[f64]) -> [f64; MEASURE_COUNT] {
        let mut full = [0.0; MEASURE_COUNT];
        for (j, m) in self.active.iter().enumerate() {
            full[m.index()] = reduced[j];
        }
        full
    }

    fn mean_separation(&self, weights: &WeightVector) -> f64 {
        let (mut b, mut w) = (0.0, 0.0);
        for s in self.samples {
            let c = combine(weights, &s.scores.scores);
            if s.is_best() {
                b += c;
            } else {
                w += c;
            }
        }
        b / self.best as f64 - w / self.worst as f64
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

struct Logistic<'d, 'a> {
    design: &'d Design<'a>,
    l2: f64,
}

impl Logistic<'_, '_> {
    /// θ = (intercept, coefficients...).
    fn z(&self, theta: &DVector<f64>, s: usize) -> f64 {
        (0..self.design.active.len()).fold(theta[0], |acc, j| acc + theta[j + 1] * self.design.x(s, j))
    }

    fn loss(&self, theta: &DVector<f64>) -> f64 {
        let n = self.design.samples.len();
        let data: f64 = (0..n)
            .map(|s| {
                let z = self.z(theta, s);
                let y = if self.design.samples[s].is_best() { 1.0 } else { 0.0 };
                softplus(z) - y * z
            })
            .sum::<f64>()
            / n as f64;
        data + 0.5 * self.l2 * theta.rows(1, theta.len() - 1).norm_squared()
    }

    fn gradient_hessian(&self, theta: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let d = theta.len();
        let n = self.design.samples.len();
        let mut g = DVector::zeros(d);
        let mut h = DMatrix::zeros(d, d);
        let mut row = DVector::zeros(d);
        for s in 0..n {
            row[0] = 1.0;
            for j in 0..d - 1 {
                row[j + 1] = self.design.x(s, j);
            }
            let p = sigmoid(self.z(theta, s));
            let y = if self.design.samples[s].is_best() { 1.0 } else { 0.0 };
            g.axpy(p - y, &row, 1.0);
            h.ger(p * (1.0 - p), &row, &row, 1.0);
        }
        g /= n as f64;
        h /= n as f64;
        for j in 1..d {
            g[j] += self.l2 * theta[j];
            h[(j, j)] += self.l2;
        }
        (g, h)
    }

    fn newton_direction(g: &DVector<f64>, h: &DMatrix<f64>) -> DVector<f64> {
        if let Some(ch) = h.clone().cholesky() {
            return ch.solve(g);
        }
        let ridge = 1e-10 * (1.0 + h.trace());
        let shifted = h + DMatrix::identity(h.nrows(), h.ncols()) * ridge;
        match shifted.cholesky() {
            Some(ch) => ch.solve(g),
            None => g.clone(),
        }
    }

    fn fit(&self) -> (DVector<f64>, f64, usize, bool) {
        let d = self.design.active.len() + 1;
        let mut theta = DVector::zeros(d);
        let mut loss = self.loss(&theta);
        for it in 0..MAX_ITERATIONS {
            let (g, h) = self.gradient_hessian(&theta);
            if g.amax() < GRADIENT_TOLERANCE {
                return (theta, loss, it, true);
            }
            let dir = Self::newton_direction(&g, &h);
            let slope = g.dot(&dir);
            let mut t = 1.0;
            loop {
                let cand = &theta - &dir * t;
                let cand_loss = self.loss(&cand);
                if cand_loss <= loss - 1e-4 * t * slope {
                    theta = cand;
                    loss = cand_loss;
                    break;
                }
                t *= 0.5;
                if t < 1e-16 {
                    // no representable decrease left along the Newton path
                    return (theta, loss, it + 1, false);
                }
            }
        }
        (theta, loss, MAX_ITERATIONS, false)
    }
}

/// Logistic regression over all 21 measures.
pub fn fit_logistic(samples: &[LabeledSample], l2: f64) -> Result<FitReport> {
    fit_logistic_on(samples, &MeasureId::ALL, l2)
}

/// Logistic regression restricted to `active`.
pub fn fit_logistic_on(samples: &[LabeledSample], active: &[MeasureId], l2: f64) -> Result<FitReport> {
    if !(l2 >= 0.0) || !l2.is_finite() {
        return Err(Error::Domain(format!("l2 penalty must be nonnegative, got {l2}")));
    }
    if samples.len() < 4 {
        return Err(Error::Domain(format!("logistic fit needs at least 4 samples, got {}", samples.len())));
    }
    let design = Design::new(samples, active)?;
    let model = Logistic { design: &design, l2 };
    let (theta, loss, iterations, converged) = model.fit();
    let mut flags = Vec::new();
    if !converged {
        flags.push("not-converged".to_string());
    }

    let coefs: Vec<f64> = theta.iter().skip(1).copied().collect();
    let clamped: Vec<f64> = coefs.iter().map(|c| c.max(0.0)).collect();
    if coefs.iter().any(|c| *c < 0.0) {
        flags.push("negative-coefficients-clamped".to_string());
    }
    let total: f64 = clamped.iter().sum();
    let weights = if total > 0.0 {
        let w: Vec<f64> = clamped.iter().map(|c| c / total).collect();
        WeightVector::new(design.expand(&w), Normalization::UnitSum, &design.active)?
    } else {
        flags.push("no-positive-coefficients".to_string());
        WeightVector::uniform(&design.active, Normalization::UnitSum)?
    };

    let correct = (0..samples.len())
        .filter(|&s| (model.z(&theta, s) >= 0.0) == samples[s].is_best())
        .count();
    Ok(FitReport {
        method: FitMethod::Logistic,
        mean_separation: design.mean_separation(&weights),
        weights,
        intercept: Some(theta[0]),
        coefficients: Some(design.expand(&coefs)),
        accuracy: correct as f64 / samples.len() as f64,
        best_count: design.best,
        worst_count: design.worst,
        objective: loss,
        iterations,
        converged,
        certificate_gap: None,
        flags,
    })
}

/// Per-measure class sum difference c_a = Σ_best s_a − Σ_worst s_a.
pub fn separation_vector(samples: &[LabeledSample]) -> [f64; MEASURE_COUNT] {
    let mut c = [0.0; MEASURE_COUNT];
    for s in samples {
        let sign = if s.is_best() { 1.0 } else { -1.0 };
        for (ci, v) in c.iter_mut().zip(&s.scores.scores) {
            *ci += sign * v;
        }
    }
    c
}

/// Closed-form maximizer of w·c over w ≥ 0, ‖w‖₂ = 1: c⁺/‖c⁺‖, or `None`
/// when no component of c is positive.
pub fn closed_form_separation(c: &[f64]) -> Option<Vec<f64>> {
    let plus: Vec<f64> = c.iter().map(|x| x.max(0.0)).collect();
    let norm = plus.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0).then(|| plus.iter().map(|x| x / norm).collect())
}

/// Projected gradient ascent of w·c on the nonnegative part of the unit
/// sphere with a doubling step. Returns the iterate and the iteration count.
pub fn project_separation(c: &[f64]) -> (Vec<f64>, usize) {
    let k = c.len();
    let mut w = vec![1.0 / (k as f64).sqrt(); k];
    let c_norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if c_norm == 0.0 {
        return (w, 0);
    }
    let mut step = 1.0 / c_norm;
    for it in 0..SEPARATION_ITERATIONS {
        let u: Vec<f64> = w.iter().zip(c).map(|(wi, ci)| (wi + step * ci).max(0.0)).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (w, it);
        }
        let next: Vec<f64> = u.iter().map(|x| x / norm).collect();
        let moved = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        w = next;
        if moved == 0.0 {
            return (w, it + 1);
        }
        step *= 2.0;
    }
    (w, SEPARATION_ITERATIONS)
}

/// Maximizes best/worst separation over all 21 measures.
pub fn solve_max_separation(samples: &[LabeledSample]) -> Result<FitReport> {
    solve_max_separation_on(samples, &MeasureId::ALL)
}

pub fn solve_max_separation_on(samples: &[LabeledSample], active: &[MeasureId]) -> Result<FitReport> {
    let design = Design::new(samples, active)?;
    let full_c = separation_vector(samples);
    let c: Vec<f64> = design.active.iter().map(|m| full_c[m.index()]).collect();
    let mut flags = Vec::new();
    let (w, iterations, gap) = match closed_form_separation(&c) {
        None => {
            flags.push("no-measure-favours-best".to_string());
            (vec![1.0 / (c.len() as f64).sqrt(); c.len()], 0, None)
        }
        Some(closed) => {
            let (w, iterations) = project_separation(&c);
            let dot = |v: &[f64]| v.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
            (w.clone(), iterations, Some(dot(&closed) - dot(&w)))
        }
    };
    let converged = gap.is_none_or(|g| g.abs() <= 1e-9 * (1.0 + c.iter().map(|x| x.abs()).sum::<f64>()));
    if !converged {
        flags.push("certificate-gap".to_string());
    }
    let weights = WeightVector::new(design.expand(&w), Normalization::UnitNorm, &design.active)?;
    let objective = w.iter().zip(&c).map(|(a, b)| a * b).sum();

    let sum_weights = weights.rescaled(Normalization::UnitSum);
    let correct = samples
        .iter()
        .filter(|s| {
            let score = sum_weights.as_ref().map_or(0.0, |sw| combine(sw, &s.scores.scores));
            (score >= 0.5) == s.is_best()
        })
        .count();
    Ok(FitReport {
        method: FitMethod::Separation,
        mean_separation: design.mean_separation(&weights),
        weights,
        intercept: None,
        coefficients: None,
        accuracy: correct as f64 / samples.len() as f64,
        best_count: design.best,
        worst_count: design.worst,
        objective,
        iterations,
        converged,
        certificate_gap: gap,
        flags,
    })
}

fn fit_on(samples: &[LabeledSample], active: &[MeasureId], method: FitMethod, l2: f64) -> Result<FitReport> {
    match method {
        FitMethod::Logistic => fit_logistic_on(samples, active, l2),
        FitMethod::Separation => solve_max_separation_on(samples, active),
    }
}

/// Importance of each measure as used for elimination.
fn importance(report: &FitReport, id: MeasureId) -> f64 {
    match report.method {
        FitMethod::Logistic => report.coefficients.map_or(0.0, |c| c[id.index()].max(0.0)),
        FitMethod::Separation => report.weights.get(id),
    }
}

/// Reduces the active set to `k` measures and returns the fit on it.
pub fn select_subset(samples: &[LabeledSample], k: usize, method: FitMethod, search: SubsetSearch) -> Result<FitReport> {
    select_subset_with_l2(samples, k, method, search, DEFAULT_L2)
}

/// [`select_subset`] with an explicit logistic penalty.
pub fn select_subset_with_l2(
    samples: &[LabeledSample],
    k: usize,
    method: FitMethod,
    search: SubsetSearch,
    l2: f64,
) -> Result<FitReport> {
    if k == 0 || k > MEASURE_COUNT {
        return Err(Error::Domain(format!("subset size must be in 1..={MEASURE_COUNT}, got {k}")));
    }
    match search {
        SubsetSearch::BackwardElimination => {
            let mut active = MeasureId::ALL.to_vec();
            loop {
                let report = fit_on(samples, &active, method, l2)?;
                if active.len() == k {
                    return Ok(report);
                }
                // ties drop the later measure
                let mut drop = 0;
                for (i, m) in active.iter().enumerate() {
                    if importance(&report, *m) <= importance(&report, active[drop]) {
                        drop = i;
                    }
                }
                active.remove(drop);
            }
        }
        SubsetSearch::Exhaustive => {
            let mut best: Option<FitReport> = None;
            let mut combo: Vec<usize> = (0..k).collect();
            loop {
                let active: Vec<MeasureId> = combo.iter().map(|&i| MeasureId::ALL[i]).collect();
                let report = fit_on(samples, &active, method, l2)?;
                let better = best.as_ref().is_none_or(|b| match method {
                    FitMethod::Logistic => report.objective < b.objective,
                    FitMethod::Separation => report.objective > b.objective,
                });
                if better {
                    best = Some(report);
                }
                // next combination in lexicographic order
                let Some(pos) = (0..k).rev().find(|&i| combo[i] < MEASURE_COUNT - k + i) else {
                    break;
                };
                combo[pos] += 1;
                for i in pos + 1..k {
                    combo[i] = combo[i - 1] + 1;
                }
            }
            Ok(best.expect("at least one combination"))
        }
    }
}

const SAMPLE_COLUMNS: [&str; 9] = [
    "participant_id",
    "graph_id",
    "polarity",
    "layout_class",
    "size_class",
    "vx",
    "vy",
    "vz",
    "range_id",
];

/// Writes labeled samples as CSV: metadata columns followed by one column
/// per measure in registry order.
pub fn write_samples_csv<W: Write>(samples: &[LabeledSample], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let header: Vec<&str> = SAMPLE_COLUMNS.iter().copied().chain(MeasureId::ALL.iter().map(|m| m.as_str())).collect();
    w.write_record(&header)?;
    for s in samples {
        let v = s.scores.viewpoint;
        let mut row = vec![
            s.participant_id.clone(),
            s.scores.graph_id.clone(),
            s.label.to_string(),
            s.layout_class.to_string(),
            s.size_class.to_string(),
            v.x.to_string(),
            v.y.to_string(),
            v.z.to_string(),
            s.scores.range_id.clone(),
        ];
        row.extend(s.scores.scores.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads samples written by [`write_samples_csv`]. Lines starting with `#`
/// are ignored.
pub fn read_samples_csv<R: Read>(input: R) -> Result<Vec<LabeledSample>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = rdr.headers()?.clone();
    let expected: Vec<&str> = SAMPLE_COLUMNS.iter().copied().chain(MeasureId::ALL.iter().map(|m| m.as_str())).collect();
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Domain(format!("score table header must be {}", expected.join(","))));
    }
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let bad = |what: String| Error::Validation {
            record: format!("score row {}", i + 1),
            message: what,
        };
        let num = |k: usize| -> Result<f64> {
            rec[k].parse().map_err(|_| bad(format!("{} is not a number: {:?}", expected[k], &rec[k])))
        };
        let mut scores = [0.0; MEASURE_COUNT];
        for (j, s) in scores.iter_mut().enumerate() {
            *s = num(SAMPLE_COLUMNS.len() + j)?;
            if !(0.0..=1.0).contains(s) {
                return Err(bad(format!("{} score {s} outside [0, 1]", MeasureId::ALL[j])));
            }
        }
        samples.push(LabeledSample {
            participant_id: rec[0].to_string(),
            label: rec[2].parse().map_err(|_| bad(format!("bad polarity {:?}", &rec[2])))?,
            layout_class: rec[3].parse().map_err(|_| bad(format!("bad layout class {:?}", &rec[3])))?,
            size_class: rec[4].parse().map_err(|_| bad(format!("bad size class {:?}", &rec[4])))?,
            scores: ScoreVector {
                graph_id: rec[1].to_string(),
                viewpoint: Vec3::new(num(5)?, num(6)?, num(7)?),
                range_id: rec[8].to_string(),
                scores,
            },
        });
    }
    Ok(samples)
}

/// Writes fit reports as CSV, one row per report, with the weight of every
/// measure in registry order.
pub fn write_fit_reports_csv<W: Write>(rows: &[(String, FitReport)], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec![
        "stratum",
        "method",
        "normalization",
        "k",
        "intercept",
        "accuracy",
        "mean_separation",
        "best_count",
        "worst_count",
        "objective",
        "iterations",
        "converged",
        "flags",
    ];
    header.extend(MeasureId::ALL.iter().map(|m| m.as_str()));
    w.write_record(&header)?;
    for (stratum, r) in rows {
        let mut row = vec![
            stratum.clone(),
            r.method.to_string(),
            r.weights.normalization().as_str().to_string(),
            r.weights.active_set().len().to_string(),
            r.intercept.map_or(String::new(), |b| b.to_string()),
            r.accuracy.to_string(),
            r.mean_separation.to_string(),
            r.best_count.to_string(),
            r.worst_count.to_string(),
            r.objective.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            r.flags.join(";"),
        ];
        row.extend(r.weights.weights().iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

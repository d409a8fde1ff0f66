//! Evaluation of all 21 measures for a viewpoint, landscape sampling and
//! range normalization.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iso::{iso_score, pca_axes, PrincipalAxes};
use crate::measures::{
    self, symmetry::measure_symmetry_with, GraphDistances, MeasureId, Polarity, RawMeasure, SymmetryKind,
    SymmetryParams, MEASURE_COUNT, REGISTRY_VERSION,
};
use crate::model::{GraphBundle, Vec3};
use crate::overlap::overlap_census;
use crate::projection::{fibonacci_viewpoints, project, Camera, CameraConfig, ProjectedDrawing};

/// Ranges narrower than this are treated as constant.
pub const DEGENERATE_RANGE: f64 = 1e-12;

pub const DEFAULT_RESOLUTION: usize = 256;

/// Everything that affects raw measure values besides the bundle and the
/// viewpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSettings {
    pub camera: CameraConfig,
    pub raster_resolution: usize,
    pub symmetry: SymmetryParams,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            camera: CameraConfig::default(),
            raster_resolution: DEFAULT_RESOLUTION,
            symmetry: SymmetryParams::default(),
        }
    }
}

/// Raw values of all registry measures for one (graph, viewpoint).
#[derive(Debug, Clone, PartialEq)]
pub struct RawVector {
    pub graph_id: String,
    pub viewpoint: Vec3,
    pub values: [f64; MEASURE_COUNT],
}

impl RawVector {
    pub fn get(&self, id: MeasureId) -> RawMeasure {
        RawMeasure::new(id, self.values[id.index()])
    }
}

/// Per-bundle state shared by all viewpoints: graph distances and principal
/// axes are computed once.
#[derive(Debug, Clone)]
pub struct BundleEvaluator<'a> {
    bundle: &'a GraphBundle,
    settings: &'a EvalSettings,
    distances: GraphDistances,
    axes: PrincipalAxes,
}

impl<'a> BundleEvaluator<'a> {
    pub fn new(bundle: &'a GraphBundle, settings: &'a EvalSettings) -> Result<Self> {
        settings.camera.validate()?;
        Ok(BundleEvaluator {
            bundle,
            settings,
            distances: GraphDistances::new(&bundle.graph),
            axes: pca_axes(&bundle.layout),
        })
    }

    pub fn axes(&self) -> &PrincipalAxes {
        &self.axes
    }

    pub fn camera(&self, view: Vec3) -> Result<Camera> {
        let layout = &self.bundle.layout;
        Camera::look_at(view, layout.center(), layout.view_radius(), &self.settings.camera)
    }

    pub fn project(&self, view: Vec3) -> Result<ProjectedDrawing> {
        project(self.bundle, &self.camera(view)?)
    }

    pub fn evaluate(&self, view: Vec3) -> Result<RawVector> {
        let drawing = self.project(view)?;
        let graph = &self.bundle.graph;
        let crossings = measures::crossings(&drawing);
        let (ar, asp) = measures::measure_area_aspect(&drawing);
        let mut all = vec![
            measures::measure_cr(&crossings),
            measures::measure_stress_with(&drawing, &self.distances),
            measures::measure_car(&crossings),
            ar,
            asp,
            measures::measure_concentration(&drawing),
            measures::measure_node_orthogonality(&drawing),
            measures::measure_gabriel(&drawing, graph),
            measures::measure_angular_resolution(&drawing, graph),
            measures::measure_edge_orthogonality(&drawing),
            measures::measure_edge_length_deviation(&drawing),
        ];
        all.extend(
            SymmetryKind::ALL
                .iter()
                .map(|&kind| measure_symmetry_with(&drawing, kind, &self.settings.symmetry)),
        );
        all.extend(overlap_census(&drawing, graph, self.settings.raster_resolution).measures());
        all.push(iso_score(&view, &self.axes)?);

        let mut values = [0.0; MEASURE_COUNT];
        for m in all {
            values[m.id.index()] = m.value;
        }
        Ok(RawVector {
            graph_id: self.bundle.id.clone(),
            viewpoint: view,
            values,
        })
    }
}

/// Projects once and evaluates every registry measure.
pub fn evaluate_raw(bundle: &GraphBundle, view: Vec3, settings: &EvalSettings) -> Result<RawVector> {
    BundleEvaluator::new(bundle, settings)?.evaluate(view)
}

/// Raw vectors at `count` Fibonacci viewpoints, in lattice order. Evaluation
/// runs in parallel on the current rayon pool.
pub fn sample_landscape(bundle: &GraphBundle, count: usize, settings: &EvalSettings) -> Result<Vec<RawVector>> {
    let evaluator = BundleEvaluator::new(bundle, settings)?;
    fibonacci_viewpoints(count)?
        .into_par_iter()
        .map(|v| evaluator.evaluate(v))
        .collect()
}

/// Observed extremes of every measure for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRanges {
    pub min: [f64; MEASURE_COUNT],
    pub max: [f64; MEASURE_COUNT],
    pub samples: usize,
}

impl GraphRanges {
    pub fn from_samples<'a>(samples: impl IntoIterator<Item = &'a RawVector>) -> Option<Self> {
        let mut acc: Option<GraphRanges> = None;
        for raw in samples {
            let r = acc.get_or_insert(GraphRanges {
                min: [f64::INFINITY; MEASURE_COUNT],
                max: [f64::NEG_INFINITY; MEASURE_COUNT],
                samples: 0,
            });
            for (i, &v) in raw.values.iter().enumerate() {
                r.min[i] = r.min[i].min(v);
                r.max[i] = r.max[i].max(v);
            }
            r.samples += 1;
        }
        acc
    }

    pub fn is_degenerate(&self, id: MeasureId) -> bool {
        self.max[id.index()] - self.min[id.index()] < DEGENERATE_RANGE
    }
}

/// Per-graph measure ranges together with the identity of the settings they
/// were sampled under.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RangeTable {
    pub graphs: BTreeMap<String, GraphRanges>,
    /// Hash of the sampling configuration, if known.
    pub config_hash: Option<String>,
}

impl RangeTable {
    pub fn id(&self) -> String {
        match &self.config_hash {
            Some(h) => format!("{REGISTRY_VERSION}@{h}"),
            None => REGISTRY_VERSION.to_string(),
        }
    }

    pub fn insert(&mut self, graph_id: impl Into<String>, ranges: GraphRanges) {
        self.graphs.insert(graph_id.into(), ranges);
    }

    pub fn get(&self, graph_id: &str) -> Option<&GraphRanges> {
        self.graphs.get(graph_id)
    }

    /// CSV with columns `graph_id,measure_id,min,max,samples`, rows ordered
    /// by graph id then registry order. A leading `#` line records the
    /// registry version and configuration hash.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# registry={} config={}",
            REGISTRY_VERSION,
            self.config_hash.as_deref().unwrap_or("-")
        )?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["graph_id", "measure_id", "min", "max", "samples"])?;
        for (graph, r) in &self.graphs {
            for m in MeasureId::ALL {
                w.write_record([
                    graph.as_str(),
                    m.as_str(),
                    &r.min[m.index()].to_string(),
                    &r.max[m.index()].to_string(),
                    &r.samples.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let config_hash = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .and_then(|l| l.split_whitespace().find_map(|kv| kv.strip_prefix("config=")))
            .filter(|h| *h != "-")
            .map(str::to_string);
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut partial: BTreeMap<String, (GraphRanges, [bool; MEASURE_COUNT])> = BTreeMap::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::RangeTable(format!("row {}: {what}", line + 1));
            if rec.len() != 5 {
                return Err(bad("expected 5 columns"));
            }
            let measure: MeasureId = rec[1].parse().map_err(|_| bad("unknown measure"))?;
            let min: f64 = rec[2].parse().map_err(|_| bad("min is not a number"))?;
            let max: f64 = rec[3].parse().map_err(|_| bad("max is not a number"))?;
            let samples: usize = rec[4].parse().map_err(|_| bad("samples is not an integer"))?;
            if !(min <= max) {
                return Err(bad("min exceeds max"));
            }
            let entry = partial.entry(rec[0].to_string()).or_insert_with(|| {
                (
                    GraphRanges {
                        min: [0.0; MEASURE_COUNT],
                        max: [0.0; MEASURE_COUNT],
                        samples,
                    },
                    [false; MEASURE_COUNT],
                )
            });
            entry.0.min[measure.index()] = min;
            entry.0.max[measure.index()] = max;
            entry.1[measure.index()] = true;
        }
        let mut graphs = BTreeMap::new();
        for (graph, (ranges, seen)) in partial {
            if let Some(k) = seen.iter().position(|s| !s) {
                return Err(Error::MissingRange {
                    graph,
                    measure: MeasureId::ALL[k].to_string(),
                });
            }
            graphs.insert(graph, ranges);
        }
        Ok(RangeTable { graphs, config_hash })
    }
}

/// Samples the landscape of one bundle and records its ranges.
pub fn sample_ranges(bundle: &GraphBundle, count: usize, settings: &EvalSettings) -> Result<GraphRanges> {
    if count < 2 {
        return Err(Error::Domain(format!("landscape needs at least 2 samples, got {count}")));
    }
    let samples = sample_landscape(bundle, count, settings)?;
    Ok(GraphRanges::from_samples(&samples).expect("count >= 2"))
}

/// Range-normalized quality scores; 1 is best for every measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub graph_id: String,
    pub viewpoint: Vec3,
    pub range_id: String,
    pub scores: [f64; MEASURE_COUNT],
}

impl ScoreVector {
    pub fn get(&self, id: MeasureId) -> f64 {
        self.scores[id.index()]
    }
}

/// Maps one raw value into `[0, 1]` relative to `[min, max]` with the
/// polarity flip. Constant ranges score 1.
pub fn normalize_value(value: f64, min: f64, max: f64, polarity: Polarity) -> f64 {
    if max - min < DEGENERATE_RANGE {
        return 1.0;
    }
    let t = ((value - min) / (max - min)).clamp(0.0, 1.0);
    match polarity {
        Polarity::HigherBetter => t,
        Polarity::LowerBetter => 1.0 - t,
    }
}

pub fn normalize(raw: &RawVector, ranges: &RangeTable) -> Result<ScoreVector> {
    let r = ranges.get(&raw.graph_id).ok_or_else(|| Error::MissingRange {
        graph: raw.graph_id.clone(),
        measure: MeasureId::ALL[0].to_string(),
    })?;
    let mut scores = [0.0; MEASURE_COUNT];
    for m in MeasureId::ALL {
        let i = m.index();
        scores[i] = normalize_value(raw.values[i], r.min[i], r.max[i], m.polarity());
    }
    Ok(ScoreVector {
        graph_id: raw.graph_id.clone(),
        viewpoint: raw.viewpoint,
        range_id: ranges.id(),
        scores,
    })
}

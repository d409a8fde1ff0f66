//! Graphs, 3D layouts, logged study selections and the canonical dataset
//! file format.
//!
//! A dataset is a single JSON document with two top-level arrays:
//!
//! ```json
//! {
//!   "bundles": [{ "id": "can_24", "layout_class": "energy", "size_class": "S",
//!                 "nodes": [[0.0, 0.1, 0.2], ...], "edges": [[0, 1], ...],
//!                 "node_radius": 0.02, "edge_radius": 0.006 }],
//!   "selections": [{ "participant": "P01", "graph": "can_24", "polarity": "best",
//!                    "graph_pose": { "position": [0, 1.4, 0], "rotation": [0, 0, 0, 1] },
//!                    "user_pose":  { "position": [0, 1.6, -1], "rotation": [0, 0, 0, 1] } }]
//! }
//! ```
//!
//! Rotations are quaternions in `[x, y, z, w]` order. The coordinate system is
//! right-handed with +y up. Unknown fields are ignored and reported as
//! warnings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Node radius as a fraction of the bounding radius when the dataset omits it.
pub const DEFAULT_NODE_RADIUS_FACTOR: f64 = 0.02;
/// Edge tube radius as a fraction of the bounding radius when the dataset omits it.
pub const DEFAULT_EDGE_RADIUS_FACTOR: f64 = 0.006;

const QUATERNION_NORM_TOLERANCE: f64 = 1e-9;

/// An undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= node_count || b >= node_count {
                return Err(Error::validation(
                    format!("edge {k}"),
                    format!("endpoint out of range ({a}, {b}) for {node_count} nodes"),
                ));
            }
            if a == b {
                return Err(Error::validation(format!("edge {k}"), format!("self-loop on node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::validation(format!("edge {k}"), format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Graph { node_count, edges })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incident edge indices per node.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.node_count];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(k);
            inc[b].push(k);
        }
        inc
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Fraction of possible edges present, `2m / (n(n-1))`.
pub fn edge_density(graph: &Graph) -> Result<f64> {
    let n = graph.node_count();
    if n < 2 {
        return Err(Error::Domain(format!("edge density needs at least 2 nodes, got {n}")));
    }
    let n = n as f64;
    Ok(2.0 * graph.edge_count() as f64 / (n * (n - 1.0)))
}

/// Fixed 3D geometry of a drawing. Center and bounding radius are derived
/// from the positions and never read from input.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout3D {
    positions: Vec<Vec3>,
    node_radius: f64,
    edge_radius: f64,
    center: Vec3,
    bounding_radius: f64,
}

impl Layout3D {
    /// Builds a layout. Missing radii default to fixed fractions of the
    /// bounding radius (or of a unit length when all nodes coincide).
    pub fn new(positions: Vec<Vec3>, node_radius: Option<f64>, edge_radius: Option<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::validation("layout", "layout has no nodes"));
        }
        if let Some(i) = positions.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::validation("layout", format!("node {i} has a non-finite coordinate")));
        }
        let center = positions.iter().fold(Vec3::zeros(), |acc, p| acc + p) / positions.len() as f64;
        let bounding_radius = positions
            .iter()
            .map(|p| (p - center).norm())
            .fold(0.0_f64, f64::max);
        let reference = if bounding_radius > 0.0 { bounding_radius } else { 1.0 };
        let node_radius = node_radius.unwrap_or(DEFAULT_NODE_RADIUS_FACTOR * reference);
        let edge_radius = edge_radius.unwrap_or(DEFAULT_EDGE_RADIUS_FACTOR * reference);
        if !(node_radius > 0.0 && node_radius.is_finite()) {
            return Err(Error::validation("layout", format!("node_radius must be positive, got {node_radius}")));
        }
        if !(edge_radius > 0.0 && edge_radius < node_radius) {
            return Err(Error::validation(
                "layout",
                format!("edge_radius must lie in (0, node_radius={node_radius}), got {edge_radius}"),
            ));
        }
        Ok(Layout3D {
            positions,
            node_radius,
            edge_radius,
            center,
            bounding_radius,
        })
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn node_radius(&self) -> f64 {
        self.node_radius
    }

    pub fn edge_radius(&self) -> f64 {
        self.edge_radius
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    /// Radius used to frame the drawing: the bounding radius, or the node
    /// radius for layouts whose nodes all coincide.
    pub fn view_radius(&self) -> f64 {
        if self.bounding_radius > 0.0 {
            self.bounding_radius
        } else {
            self.node_radius
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutClass {
    Semantic,
    Layered,
    Energy,
}

impl LayoutClass {
    pub const ALL: [LayoutClass; 3] = [LayoutClass::Semantic, LayoutClass::Layered, LayoutClass::Energy];

    pub fn as_str(self) -> &'static str {
        match self {
            LayoutClass::Semantic => "semantic",
            LayoutClass::Layered => "layered",
            LayoutClass::Energy => "energy",
        }
    }

    /// Short label used in aggregate tables.
    pub fn short(self) -> &'static str {
        match self {
            LayoutClass::Semantic => "S",
            LayoutClass::Layered => "L",
            LayoutClass::Energy => "E",
        }
    }
}

impl fmt::Display for LayoutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayoutClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semantic" | "S" => Ok(LayoutClass::Semantic),
            "layered" | "L" => Ok(LayoutClass::Layered),
            "energy" | "E" => Ok(LayoutClass::Energy),
            _ => Err(Error::Domain(format!("unknown layout class `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SizeClass {
    S,
    M,
    L,
    XL,
}

impl SizeClass {
    pub const ALL: [SizeClass; 4] = [SizeClass::S, SizeClass::M, SizeClass::L, SizeClass::XL];

    /// Nominal node count of the class.
    pub fn nominal_nodes(self) -> usize {
        match self {
            SizeClass::S => 20,
            SizeClass::M => 50,
            SizeClass::L => 100,
            SizeClass::XL => 200,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SizeClass::S => "S",
            SizeClass::M => "M",
            SizeClass::L => "L",
            SizeClass::XL => "XL",
        }
    }

    pub fn admits(self, node_count: usize) -> bool {
        let nominal = self.nominal_nodes() as f64;
        let n = node_count as f64;
        (n - nominal).abs() <= 0.25 * nominal
    }
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SizeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(SizeClass::S),
            "M" => Ok(SizeClass::M),
            "L" => Ok(SizeClass::L),
            "XL" => Ok(SizeClass::XL),
            _ => Err(Error::Domain(format!("unknown size class `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphBundle {
    pub id: String,
    pub layout_class: LayoutClass,
    pub size_class: SizeClass,
    pub graph: Graph,
    pub layout: Layout3D,
}

impl GraphBundle {
    pub fn new(
        id: impl Into<String>,
        layout_class: LayoutClass,
        size_class: SizeClass,
        graph: Graph,
        layout: Layout3D,
    ) -> Result<Self> {
        let id = id.into();
        if layout.positions().len() != graph.node_count() {
            return Err(Error::validation(
                format!("bundle `{id}`"),
                format!(
                    "{} positions for {} nodes",
                    layout.positions().len(),
                    graph.node_count()
                ),
            ));
        }
        Ok(GraphBundle {
            id,
            layout_class,
            size_class,
            graph,
            layout,
        })
    }
}

/// A logged rigid pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec3,
    pub rotation: UnitQuaternion<f64>,
}

impl Pose {
    /// Builds a pose from a quaternion in `[x, y, z, w]` order, rejecting
    /// quaternions that are not unit length within 1e-9.
    pub fn new(position: Vec3, xyzw: [f64; 4]) -> Result<Self> {
        let q = Quaternion::new(xyzw[3], xyzw[0], xyzw[1], xyzw[2]);
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > QUATERNION_NORM_TOLERANCE {
            return Err(Error::Domain(format!("rotation quaternion has norm {norm}, expected 1")));
        }
        Ok(Pose {
            position,
            rotation: UnitQuaternion::new_unchecked(q),
        })
    }

    /// Like [`Pose::new`] but renormalizes the quaternion. For adapters that
    /// ingest single-precision logs.
    pub fn normalized(position: Vec3, xyzw: [f64; 4]) -> Result<Self> {
        let q = Quaternion::new(xyzw[3], xyzw[0], xyzw[1], xyzw[2]);
        if !(q.norm() > 0.0) {
            return Err(Error::Domain("zero rotation quaternion".into()));
        }
        Ok(Pose {
            position,
            rotation: UnitQuaternion::from_quaternion(q),
        })
    }

    pub fn identity_at(position: Vec3) -> Self {
        Pose {
            position,
            rotation: UnitQuaternion::identity(),
        }
    }

    pub fn xyzw(&self) -> [f64; 4] {
        let q = self.rotation.quaternion();
        [q.i, q.j, q.k, q.w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Best,
    Worst,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Best => "best",
            Polarity::Worst => "worst",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(Polarity::Best),
            "worst" => Ok(Polarity::Worst),
            _ => Err(Error::Domain(format!("unknown polarity `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRecord {
    pub participant_id: String,
    pub graph_id: String,
    pub polarity: Polarity,
    pub graph_pose: Pose,
    pub user_pose: Pose,
}

/// Converts a logged selection into a unit view direction in graph-local
/// coordinates, pointing from the user's eye towards the layout center.
pub fn selection_to_viewpoint(record: &SelectionRecord, bundle: &GraphBundle) -> Result<Vec3> {
    let world = record.graph_pose.position - record.user_pose.position;
    let local = record.graph_pose.rotation.inverse_transform_vector(&world) + bundle.layout.center();
    let norm = local.norm();
    if !(norm > 1e-12) {
        return Err(Error::DegeneratePose(format!(
            "selection of `{}` by `{}` has the user at the graph center",
            record.graph_id, record.participant_id
        )));
    }
    Ok(local / norm)
}

#[derive(Debug, Clone, Default)]
pub struct StudyDataset {
    pub bundles: Vec<GraphBundle>,
    pub selections: Vec<SelectionRecord>,
}

impl StudyDataset {
    pub fn new(bundles: Vec<GraphBundle>, selections: Vec<SelectionRecord>) -> Result<Self> {
        let mut ids = HashSet::new();
        for b in &bundles {
            if !ids.insert(b.id.as_str()) {
                return Err(Error::validation(format!("bundle `{}`", b.id), "duplicate bundle id"));
            }
        }
        for (k, s) in selections.iter().enumerate() {
            if !ids.contains(s.graph_id.as_str()) {
                return Err(Error::validation(
                    format!("selection {k} (participant `{}`)", s.participant_id),
                    format!("unknown graph id `{}`", s.graph_id),
                ));
            }
        }
        Ok(StudyDataset { bundles, selections })
    }

    pub fn bundle(&self, id: &str) -> Option<&GraphBundle> {
        self.bundles.iter().find(|b| b.id == id)
    }

    pub fn bundle_index(&self) -> HashMap<&str, &GraphBundle> {
        self.bundles.iter().map(|b| (b.id.as_str(), b)).collect()
    }
}

/// A parsed dataset plus non-fatal findings (unknown fields, size-class
/// mismatches).
#[derive(Debug, Clone)]
pub struct ParsedDataset {
    pub dataset: StudyDataset,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawDataset {
    bundles: Vec<RawBundle>,
    #[serde(default)]
    selections: Vec<RawSelection>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawBundle {
    id: String,
    layout_class: LayoutClass,
    size_class: SizeClass,
    nodes: Vec<[f64; 3]>,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_radius: Option<f64>,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawPose {
    position: [f64; 3],
    rotation: [f64; 4],
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSelection {
    participant: String,
    graph: String,
    polarity: Polarity,
    graph_pose: RawPose,
    user_pose: RawPose,
    #[serde(flatten, skip_serializing)]
    extra: BTreeMap<String, Value>,
}

fn note_unknown(warnings: &mut Vec<String>, at: &str, extra: &BTreeMap<String, Value>) {
    for key in extra.keys() {
        warnings.push(format!("{at}: ignored unknown field `{key}`"));
    }
}

/// Parses and validates a dataset in the canonical JSON schema.
pub fn parse_dataset(input: &[u8]) -> Result<ParsedDataset> {
    let mut de = serde_json::Deserializer::from_slice(input);
    let raw: RawDataset = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        path: ".".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut warnings = Vec::new();
    note_unknown(&mut warnings, "dataset", &raw.extra);

    let mut bundles = Vec::with_capacity(raw.bundles.len());
    for (k, rb) in raw.bundles.into_iter().enumerate() {
        let at = format!("bundles[{k}] (`{}`)", rb.id);
        note_unknown(&mut warnings, &at, &rb.extra);
        let edges = rb.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = Graph::new(rb.nodes.len(), edges).map_err(|e| rename_record(e, &at))?;
        let positions = rb.nodes.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect();
        let layout = Layout3D::new(positions, rb.node_radius, rb.edge_radius).map_err(|e| rename_record(e, &at))?;
        if !rb.size_class.admits(graph.node_count()) {
            warnings.push(format!(
                "{at}: {} nodes is outside the {} band ({} ± 25%)",
                graph.node_count(),
                rb.size_class,
                rb.size_class.nominal_nodes()
            ));
        }
        bundles.push(GraphBundle::new(rb.id, rb.layout_class, rb.size_class, graph, layout)?);
    }

    let mut selections = Vec::with_capacity(raw.selections.len());
    for (k, rs) in raw.selections.into_iter().enumerate() {
        let at = format!("selections[{k}] (participant `{}`, graph `{}`)", rs.participant, rs.graph);
        note_unknown(&mut warnings, &at, &rs.extra);
        note_unknown(&mut warnings, &format!("{at}.graph_pose"), &rs.graph_pose.extra);
        note_unknown(&mut warnings, &format!("{at}.user_pose"), &rs.user_pose.extra);
        let pose = |p: &RawPose, which: &str| {
            Pose::new(Vec3::from(p.position), p.rotation)
                .map_err(|e| Error::validation(format!("{at}.{which}"), e.to_string()))
        };
        selections.push(SelectionRecord {
            graph_pose: pose(&rs.graph_pose, "graph_pose")?,
            user_pose: pose(&rs.user_pose, "user_pose")?,
            participant_id: rs.participant,
            graph_id: rs.graph,
            polarity: rs.polarity,
        });
    }

    let dataset = StudyDataset::new(bundles, selections)?;
    Ok(ParsedDataset { dataset, warnings })
}

fn rename_record(err: Error, at: &str) -> Error {
    match err {
        Error::Validation { record, message } => Error::validation(format!("{at} {record}"), message),
        other => other,
    }
}

/// Serializes a dataset to the canonical JSON schema. Radii are always
/// written explicitly.
pub fn serialize_dataset(dataset: &StudyDataset) -> String {
    let raw_pose = |p: &Pose| RawPose {
        position: p.position.into(),
        rotation: p.xyzw(),
        extra: BTreeMap::new(),
    };
    let raw = RawDataset {
        bundles: dataset
            .bundles
            .iter()
            .map(|b| RawBundle {
                id: b.id.clone(),
                layout_class: b.layout_class,
                size_class: b.size_class,
                nodes: b.layout.positions().iter().map(|p| [p.x, p.y, p.z]).collect(),
                edges: b.graph.edges().iter().map(|&(a, c)| [a, c]).collect(),
                node_radius: Some(b.layout.node_radius()),
                edge_radius: Some(b.layout.edge_radius()),
                extra: BTreeMap::new(),
            })
            .collect(),
        selections: dataset
            .selections
            .iter()
            .map(|s| RawSelection {
                participant: s.participant_id.clone(),
                graph: s.graph_id.clone(),
                polarity: s.polarity,
                graph_pose: raw_pose(&s.graph_pose),
                user_pose: raw_pose(&s.user_pose),
                extra: BTreeMap::new(),
            })
            .collect(),
        extra: BTreeMap::new(),
    };
    serde_json::to_string_pretty(&raw).expect("dataset serialization is infallible")
}

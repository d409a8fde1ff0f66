//! Edge-based symmetry scores by Hough-style voting over edge pairs.
//!
//! Every unordered pair of centerlines proposes the transforms that map one
//! onto the other (a mirror axis, a rotation, a translation). Proposals vote
//! into a quantized transform space with weight `exp(-(Δl/σ)²)`, `Δl` being
//! the length difference of the pair. The score is the weight of the heaviest
//! bin over `m/2`, the share of edges explained by the single best symmetry.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::measures::{MeasureId, RawMeasure};
use crate::projection::{ProjectedDrawing, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    Reflective,
    Rotational,
    Translational,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 3] = [
        SymmetryKind::Reflective,
        SymmetryKind::Rotational,
        SymmetryKind::Translational,
    ];

    pub fn measure_id(self) -> MeasureId {
        match self {
            SymmetryKind::Reflective => MeasureId::ESR,
            SymmetryKind::Rotational => MeasureId::ESO,
            SymmetryKind::Translational => MeasureId::EST,
        }
    }
}

/// Quantization of the vote space. Lengths are fractions of the viewport
/// diagonal, angles are degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SymmetryParams {
    pub axis_angle_pitch: f64,
    pub axis_offset_pitch: f64,
    pub rotation_center_pitch: f64,
    pub rotation_angle_pitch: f64,
    pub translation_pitch: f64,
    /// Length tolerance σ as a fraction of the mean edge length.
    pub length_sigma: f64,
    /// Votes lighter than this are dropped.
    pub min_vote: f64,
}

impl Default for SymmetryParams {
    fn default() -> Self {
        SymmetryParams {
            axis_angle_pitch: 5.0,
            axis_offset_pitch: 0.01,
            rotation_center_pitch: 0.02,
            rotation_angle_pitch: 5.0,
            translation_pitch: 0.02,
            length_sigma: 0.1,
            min_vote: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Line {
    mid: Vec2,
    /// Direction angle in radians, `(-π, π]`.
    angle: f64,
    len: f64,
}

/// Angle between two undirected lines with directions `a` and `b`, in `[0, π/2]`.
fn line_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn wrap_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

fn quantize(value: f64, pitch: f64) -> i64 {
    (value / pitch).round() as i64
}

struct Voter<'a> {
    params: &'a SymmetryParams,
    diagonal: f64,
    bins: HashMap<(i64, i64, i64), f64>,
}

impl Voter<'_> {
    fn add(&mut self, key: (i64, i64, i64), weight: f64) {
        *self.bins.entry(key).or_insert(0.0) += weight;
    }

    fn reflective(&mut self, a: &Line, b: &Line, weight: f64) {
        let p = self.params;
        let tol = p.axis_angle_pitch.to_radians();
        let offset = a.mid - b.mid;
        let mut axes = Vec::with_capacity(2);
        if offset.norm() > 1e-12 * self.diagonal {
            // the mirror swapping the midpoints is their perpendicular bisector
            let n = offset.normalize();
            let reflected = {
                let d = Vec2::new(a.angle.cos(), a.angle.sin());
                d - n * (2.0 * d.dot(&n))
            };
            if line_gap(reflected.y.atan2(reflected.x), b.angle) <= tol {
                axes.push((n.y.atan2(n.x), n.dot(&((a.mid + b.mid) * 0.5))));
            }
        } else {
            // shared midpoint: either angle bisector mirrors one line onto the other
            let bisector = 0.5 * (a.angle + b.angle);
            for dir in [bisector, bisector + PI / 2.0] {
                let normal = dir + PI / 2.0;
                let n = Vec2::new(normal.cos(), normal.sin());
                axes.push((normal, n.dot(&a.mid)));
            }
        }
        let angle_bins = (180.0 / p.axis_angle_pitch).round() as i64;
        for (theta, rho) in axes {
            let mut deg = theta.to_degrees().rem_euclid(360.0);
            let mut rho = rho;
            if deg >= 180.0 {
                deg -= 180.0;
                rho = -rho;
            }
            let mut k = quantize(deg, p.axis_angle_pitch);
            if k >= angle_bins {
                k -= angle_bins;
                rho = -rho;
            }
            self.add((k, quantize(rho / self.diagonal, p.axis_offset_pitch), 0), weight);
        }
    }

    fn rotational(&mut self, a: &Line, b: &Line, weight: f64) {
        let p = self.params;
        let delta = b.angle - a.angle;
        for theta in [wrap_pi(delta), wrap_pi(delta + PI)] {
            let deg = theta.abs().to_degrees();
            let k = quantize(deg, p.rotation_angle_pitch);
            if k == 0 {
                continue;
            }
            // (I - R) c = m_b - R m_a
            let (s, c) = theta.sin_cos();
            let rotated = Vec2::new(c * a.mid.x - s * a.mid.y, s * a.mid.x + c * a.mid.y);
            let rhs = b.mid - rotated;
            let det = 2.0 - 2.0 * c;
            let center = Vec2::new(((1.0 - c) * rhs.x - s * rhs.y) / det, (s * rhs.x + (1.0 - c) * rhs.y) / det);
            let pitch = p.rotation_center_pitch * self.diagonal;
            self.add((k, quantize(center.x, pitch), quantize(center.y, pitch)), weight);
        }
    }

    fn translational(&mut self, a: &Line, b: &Line, weight: f64) {
        let p = self.params;
        if line_gap(a.angle, b.angle) > p.rotation_angle_pitch.to_radians() {
            return;
        }
        let mut t = b.mid - a.mid;
        if t.x < 0.0 || (t.x == 0.0 && t.y < 0.0) {
            t = -t;
        }
        let pitch = p.translation_pitch * self.diagonal;
        let key = (quantize(t.x, pitch), quantize(t.y, pitch), 0);
        if key.0 == 0 && key.1 == 0 {
            return;
        }
        self.add(key, weight);
    }
}

pub fn measure_symmetry(drawing: &ProjectedDrawing, kind: SymmetryKind) -> RawMeasure {
    measure_symmetry_with(drawing, kind, &SymmetryParams::default())
}

pub fn measure_symmetry_with(drawing: &ProjectedDrawing, kind: SymmetryKind, params: &SymmetryParams) -> RawMeasure {
    let id = kind.measure_id();
    let m = drawing.segments.len();
    if m < 2 {
        return RawMeasure::new(id, 0.0);
    }
    let lines: Vec<Line> = drawing
        .segments
        .iter()
        .map(|s| {
            let d = s.endpoints[1] - s.endpoints[0];
            Line {
                mid: s.midpoint(),
                angle: d.y.atan2(d.x),
                len: d.norm(),
            }
        })
        .collect();
    let mean_len = lines.iter().map(|l| l.len).sum::<f64>() / m as f64;
    let sigma = params.length_sigma * mean_len;
    if !(sigma > 0.0) {
        return RawMeasure::new(id, 0.0);
    }
    let mut voter = Voter {
        params,
        diagonal: drawing.viewport.diagonal(),
        bins: HashMap::new(),
    };
    for i in 0..m {
        let a = &lines[i];
        if a.len == 0.0 {
            continue;
        }
        for b in &lines[i + 1..] {
            if b.len == 0.0 {
                continue;
            }
            let z = (a.len - b.len) / sigma;
            let weight = (-z * z).exp();
            if weight < params.min_vote {
                continue;
            }
            match kind {
                SymmetryKind::Reflective => voter.reflective(a, b, weight),
                SymmetryKind::Rotational => voter.rotational(a, b, weight),
                SymmetryKind::Translational => voter.translational(a, b, weight),
            }
        }
    }
    let best = voter.bins.values().copied().fold(0.0, f64::max);
    RawMeasure::new(id, (best / (m as f64 / 2.0)).clamp(0.0, 1.0))
}

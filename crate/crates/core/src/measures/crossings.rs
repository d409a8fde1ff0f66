use crate::measures::{MeasureId, RawMeasure};
use crate::projection::{ProjectedDrawing, Vec2};

/// Tolerance of the intersection predicates, in viewport units.
pub const CROSSING_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Edge indices, `edges.0 < edges.1`.
    pub edges: (usize, usize),
    pub point: Vec2,
    /// Acute angle between the two centerlines in degrees; 0 for collinear
    /// overlaps.
    pub angle_deg: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrossingSet {
    pub crossings: Vec<Crossing>,
}

impl CrossingSet {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Intersection of two open segments, if any.
pub(crate) fn segment_crossing(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2, eps: f64) -> Option<(Vec2, f64)> {
    let da = a1 - a0;
    let db = b1 - b0;
    let (la, lb) = (da.norm(), db.norm());
    if la <= eps || lb <= eps {
        return None;
    }
    // signed distances of each segment's endpoints from the other's line
    let s0 = cross(da, b0 - a0) / la;
    let s1 = cross(da, b1 - a0) / la;
    if s0.abs() <= eps && s1.abs() <= eps {
        let u = da / la;
        let (p0, p1) = ((b0 - a0).dot(&u), (b1 - a0).dot(&u));
        let lo = p0.min(p1).max(0.0);
        let hi = p0.max(p1).min(la);
        return (hi - lo > eps).then(|| (a0 + u * (0.5 * (lo + hi)), 0.0));
    }
    let t0 = cross(db, a0 - b0) / lb;
    let t1 = cross(db, a1 - b0) / lb;
    let strictly_apart = |x: f64, y: f64| x.abs() > eps && y.abs() > eps && (x < 0.0) != (y < 0.0);
    if !(strictly_apart(s0, s1) && strictly_apart(t0, t1)) {
        return None;
    }
    let point = b0 + db * (s0 / (s0 - s1));
    let angle = cross(da, db).abs().atan2(da.dot(&db).abs()).to_degrees();
    Some((point, angle))
}

/// All crossings between non-adjacent edges, found with an x-sorted sweep.
pub fn crossings(drawing: &ProjectedDrawing) -> CrossingSet {
    let segs = &drawing.segments;
    let bounds: Vec<[f64; 4]> = segs
        .iter()
        .map(|s| {
            let [p, q] = s.endpoints;
            [p.x.min(q.x), p.x.max(q.x), p.y.min(q.y), p.y.max(q.y)]
        })
        .collect();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| bounds[i][0].total_cmp(&bounds[j][0]).then(i.cmp(&j)));

    let mut found = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let bi = bounds[i];
        active.retain(|&j| bounds[j][1] >= bi[0] - CROSSING_EPS);
        for &j in &active {
            let bj = bounds[j];
            if bj[3] < bi[2] - CROSSING_EPS || bi[3] < bj[2] - CROSSING_EPS {
                continue;
            }
            let (si, sj) = (&segs[i], &segs[j]);
            let (a, b) = (si.nodes, sj.nodes);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                continue;
            }
            let (lo, hi) = if si.edge_index < sj.edge_index { (si, sj) } else { (sj, si) };
            if let Some((point, angle_deg)) = segment_crossing(
                lo.endpoints[0],
                lo.endpoints[1],
                hi.endpoints[0],
                hi.endpoints[1],
                CROSSING_EPS,
            ) {
                found.push(Crossing {
                    edges: (lo.edge_index, hi.edge_index),
                    point,
                    angle_deg,
                });
            }
        }
        active.push(i);
    }
    found.sort_by_key(|c| c.edges);
    CrossingSet { crossings: found }
}

pub fn measure_cr(set: &CrossingSet) -> RawMeasure {
    RawMeasure::new(MeasureId::CR, set.len() as f64)
}

/// Crossing angular resolution against a 90° optimum; 1 without crossings.
pub fn measure_car(set: &CrossingSet) -> RawMeasure {
    if set.is_empty() {
        return RawMeasure::new(MeasureId::CAR, 1.0);
    }
    let mean_dev =
        set.crossings.iter().map(|c| (90.0 - c.angle_deg).abs() / 90.0).sum::<f64>() / set.len() as f64;
    RawMeasure::new(MeasureId::CAR, 1.0 - mean_dev)
}

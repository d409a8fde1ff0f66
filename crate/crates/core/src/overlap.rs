//! Depth-aware overlap measures: node-node lens areas in closed form and
//! tube-node areas by rasterization, classified by which primitive is in
//! front.

use std::f64::consts::PI;

use crate::measures::{MeasureId, RawMeasure};
use crate::model::Graph;
use crate::projection::{ProjectedCircle, ProjectedDrawing, ProjectedThickSegment, Vec2};

/// Smallest accepted raster resolution (cells per radius or half-width).
pub const MIN_RESOLUTION: usize = 64;

/// Depth differences below this are ties and count as edge-over-node.
pub const DEPTH_TIE: f64 = 1e-9;

/// Intersection area of two discs.
pub fn circle_circle_area(c1: &ProjectedCircle, c2: &ProjectedCircle) -> f64 {
    lens_area((c1.center - c2.center).norm(), c1.radius, c2.radius)
}

/// Intersection area of discs with radii `r1`, `r2` whose centers are `d` apart.
pub fn lens_area(d: f64, r1: f64, r2: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    let small = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return PI * small * small;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(0.0);
    (r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k.sqrt()).clamp(0.0, PI * small * small)
}

/// Outline of a tube: the points whose projection onto the centerline lands
/// at `t ∈ [0, 1]` and whose distance from it is at most the interpolated
/// half-width. `None` for zero-length centerlines.
pub fn tube_outline(seg: &ProjectedThickSegment) -> Option<[Vec2; 4]> {
    let [p0, p1] = seg.endpoints;
    let d = p1 - p0;
    let len = d.norm();
    if !(len > 0.0) {
        return None;
    }
    let n = Vec2::new(-d.y, d.x) / len;
    let [h0, h1] = seg.half_widths;
    Some([p0 + n * h0, p1 + n * h1, p1 - n * h1, p0 - n * h0])
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + d * t)).norm()
}

/// Distance from `p` to a convex polygon (0 inside).
fn convex_distance(p: Vec2, poly: &[Vec2; 4]) -> f64 {
    let mut sign = 0.0;
    let mut inside = true;
    for i in 0..4 {
        let c = cross(poly[(i + 1) % 4] - poly[i], p - poly[i]);
        if c != 0.0 {
            if sign == 0.0 {
                sign = c.signum();
            } else if c.signum() != sign {
                inside = false;
                break;
            }
        }
    }
    if inside {
        return 0.0;
    }
    (0..4)
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % 4]))
        .fold(f64::INFINITY, f64::min)
}

/// Whether the tube and the disc share a region of positive area.
pub fn tube_circle_overlaps(seg: &ProjectedThickSegment, circle: &ProjectedCircle) -> bool {
    tube_outline(seg).is_some_and(|poly| convex_distance(circle.center, &poly) < circle.radius)
}

/// Polygon edges prepared for repeated horizontal slicing.
struct Slicer {
    /// (y_lo, y_hi, x at y_lo, dx/dy); horizontal edges have slope NaN.
    edges: [(f64, f64, f64, f64); 4],
}

impl Slicer {
    fn new(poly: &[Vec2; 4]) -> Self {
        let edges = std::array::from_fn(|i| {
            let (mut u, mut v) = (poly[i], poly[(i + 1) % 4]);
            if u.y > v.y {
                std::mem::swap(&mut u, &mut v);
            }
            let slope = if u.y == v.y { f64::NAN } else { (v.x - u.x) / (v.y - u.y) };
            (u.y, v.y, u.x, slope)
        });
        Slicer { edges }
    }

    /// x-extent of the horizontal line at `y` inside the polygon.
    fn span(&self, y: f64, poly: &[Vec2; 4]) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &(y0, y1, x0, slope)) in self.edges.iter().enumerate() {
            if y < y0 || y > y1 {
                continue;
            }
            if slope.is_nan() {
                let (a, b) = (poly[i].x, poly[(i + 1) % 4].x);
                lo = lo.min(a.min(b));
                hi = hi.max(a.max(b));
            } else {
                let x = x0 + (y - y0) * slope;
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Rasterized intersection area of a tube and a disc.
///
/// The intersection of both bounding boxes is covered with square cells of
/// side `min(radius, half-widths) / resolution` and the covered cell centers
/// are counted. Both shapes are convex, so each raster row is counted in
/// closed form. The error is of order perimeter × cell size. Resolutions
/// below [`MIN_RESOLUTION`] are raised to it.
pub fn thick_segment_circle_area(seg: &ProjectedThickSegment, circle: &ProjectedCircle, resolution: usize) -> f64 {
    let resolution = resolution.max(MIN_RESOLUTION);
    let Some(poly) = tube_outline(seg) else {
        return 0.0;
    };
    let (c, r) = (circle.center, circle.radius);
    let (px0, px1) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    let (py0, py1) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.y), b.max(p.y)));
    let x0 = px0.max(c.x - r);
    let x1 = px1.min(c.x + r);
    let y0 = py0.max(c.y - r);
    let y1 = py1.min(c.y + r);
    if !(x0 < x1 && y0 < y1) {
        return 0.0;
    }
    let cell = r.min(seg.half_widths[0]).min(seg.half_widths[1]) / resolution as f64;
    if !(cell > 0.0) {
        return 0.0;
    }
    let cols = ((x1 - x0) / cell).ceil() as i64;
    let rows = ((y1 - y0) / cell).ceil() as i64;
    let slicer = Slicer::new(&poly);
    let mut covered: i64 = 0;
    for k in 0..rows {
        let y = y0 + (k as f64 + 0.5) * cell;
        let dy = y - c.y;
        let half = r * r - dy * dy;
        if half < 0.0 {
            continue;
        }
        let half = half.sqrt();
        let Some((tlo, thi)) = slicer.span(y, &poly) else {
            continue;
        };
        let lo = tlo.max(c.x - half);
        let hi = thi.min(c.x + half);
        if lo > hi {
            continue;
        }
        let first = (((lo - x0) / cell - 0.5).ceil() as i64).max(0);
        let last = (((hi - x0) / cell - 0.5).floor() as i64).min(cols - 1);
        covered += (last - first + 1).max(0);
    }
    covered as f64 * cell * cell
}

/// Pairwise overlap counts and areas of one projected drawing.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OverlapCensus {
    pub nn_count: usize,
    pub en_count: usize,
    pub ne_count: usize,
    pub nn_area: f64,
    pub en_area: f64,
    pub ne_area: f64,
}

impl OverlapCensus {
    pub fn measures(&self) -> [RawMeasure; 6] {
        [
            RawMeasure::new(MeasureId::NNO, self.nn_count as f64),
            RawMeasure::new(MeasureId::ENO, self.en_count as f64),
            RawMeasure::new(MeasureId::NEO, self.ne_count as f64),
            RawMeasure::new(MeasureId::NNOA, self.nn_area),
            RawMeasure::new(MeasureId::ENOA, self.en_area),
            RawMeasure::new(MeasureId::NEOA, self.ne_area),
        ]
    }
}

/// Occlusion direction of an overlapping (tube, node) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occlusion {
    EdgeOverNode,
    NodeOverEdge,
}

pub fn occlusion(seg: &ProjectedThickSegment, circle: &ProjectedCircle) -> Occlusion {
    let edge_depth = seg.depth_at(seg.closest_parameter(&circle.center));
    if edge_depth < circle.depth + DEPTH_TIE {
        Occlusion::EdgeOverNode
    } else {
        Occlusion::NodeOverEdge
    }
}

/// Node-node, edge-over-node and node-over-edge overlaps. Edges are never
/// tested against their own endpoints.
pub fn overlap_census(drawing: &ProjectedDrawing, graph: &Graph, resolution: usize) -> OverlapCensus {
    let mut census = OverlapCensus::default();
    let circles = &drawing.circles;
    for (i, a) in circles.iter().enumerate() {
        for b in &circles[i + 1..] {
            let area = circle_circle_area(a, b);
            if area > 0.0 {
                census.nn_count += 1;
                census.nn_area += area;
            }
        }
    }
    for (seg, &(u, v)) in drawing.segments.iter().zip(graph.edges()) {
        let reach = seg.half_widths[0].max(seg.half_widths[1]);
        for circle in circles {
            if circle.node_index == u || circle.node_index == v {
                continue;
            }
            let gap = point_segment_distance(circle.center, seg.endpoints[0], seg.endpoints[1]);
            if gap >= circle.radius + reach || !tube_circle_overlaps(seg, circle) {
                continue;
            }
            let area = thick_segment_circle_area(seg, circle, resolution);
            match occlusion(seg, circle) {
                Occlusion::EdgeOverNode => {
                    census.en_count += 1;
                    census.en_area += area;
                }
                Occlusion::NodeOverEdge => {
                    census.ne_count += 1;
                    census.ne_area += area;
                }
            }
        }
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(x: f64, y: f64, r: f64, depth: f64, node_index: usize) -> ProjectedCircle {
        ProjectedCircle {
            center: Vec2::new(x, y),
            radius: r,
            depth,
            node_index,
        }
    }

    fn tube(p: (f64, f64), q: (f64, f64), hw: f64, depths: [f64; 2]) -> ProjectedThickSegment {
        ProjectedThickSegment {
            endpoints: [Vec2::new(p.0, p.1), Vec2::new(q.0, q.1)],
            half_widths: [hw, hw],
            depths,
            edge_index: 0,
            nodes: (0, 1),
        }
    }

    #[test]
    fn lens_reference_values() {
        assert!((lens_area(0.0, 1.0, 1.0) - PI).abs() < 1e-15);
        assert_eq!(lens_area(2.0, 1.0, 1.0), 0.0);
        assert_eq!(lens_area(3.5, 1.0, 1.0), 0.0);
        let expected = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        assert!((lens_area(1.0, 1.0, 1.0) - expected).abs() < 1e-12);
        // containment of the smaller disc
        assert!((lens_area(0.2, 1.0, 0.5) - PI * 0.25).abs() < 1e-15);
    }

    #[test]
    fn lens_is_symmetric_and_monotone() {
        let mut prev = f64::INFINITY;
        for k in 0..=400 {
            let d = k as f64 * 0.005;
            let a = lens_area(d, 0.7, 1.2);
            assert!((a - lens_area(d, 1.2, 0.7)).abs() < 1e-12);
            assert!(a <= prev + 1e-12, "not monotone at d = {d}");
            prev = a;
        }
    }

    #[test]
    fn covering_tube_gives_disc_area() {
        let c = circle(0.0, 0.0, 0.5, 1.0, 2);
        let s = tube((-2.0, 0.0), (2.0, 0.0), 1.0, [1.0, 1.0]);
        let area = thick_segment_circle_area(&s, &c, 256);
        assert!((area / (PI * 0.25) - 1.0).abs() < 0.01, "{area}");
    }

    #[test]
    fn tube_edge_through_center_halves_the_disc() {
        let c = circle(0.0, 0.0, 0.5, 1.0, 2);
        let s = tube((-2.0, 3.0), (2.0, 3.0), 3.0, [1.0, 1.0]);
        let area = thick_segment_circle_area(&s, &c, 256);
        assert!((area / (PI * 0.125) - 1.0).abs() < 0.01, "{area}");
    }

    #[test]
    fn disjoint_shapes_have_no_area() {
        let c = circle(0.0, 5.0, 0.5, 1.0, 2);
        let s = tube((-2.0, 0.0), (2.0, 0.0), 0.2, [1.0, 1.0]);
        assert_eq!(thick_segment_circle_area(&s, &c, 256), 0.0);
        assert!(!tube_circle_overlaps(&s, &c));
    }

    fn two_node_drawing(circles: Vec<ProjectedCircle>, segments: Vec<ProjectedThickSegment>) -> ProjectedDrawing {
        ProjectedDrawing {
            circles,
            segments,
            viewport: crate::projection::Viewport { width: 2.0, height: 2.0 },
        }
    }

    #[test]
    fn coincident_nodes_overlap_fully() {
        let d = two_node_drawing(vec![circle(0.1, 0.1, 0.05, 1.0, 0), circle(0.1, 0.1, 0.05, 1.0, 1)], vec![]);
        let g = Graph::new(2, vec![]).unwrap();
        let census = overlap_census(&d, &g, 64);
        assert_eq!(census.nn_count, 1);
        assert!((census.nn_area - PI * 0.0025).abs() < 1e-15);
        assert_eq!(census.en_count + census.ne_count, 0);
    }

    #[test]
    fn occlusion_direction_follows_depth() {
        let seg = tube((-1.0, 0.0), (1.0, 0.0), 0.02, [3.0, 3.0]);
        let front = circle(0.0, 0.0, 0.05, 2.0, 2);
        let back = circle(0.0, 0.0, 0.05, 4.0, 2);
        let tie = circle(0.0, 0.0, 0.05, 3.0, 2);
        let g = Graph::new(3, vec![(0, 1)]).unwrap();
        let mk = |c: ProjectedCircle| {
            two_node_drawing(
                vec![circle(-1.0, 0.0, 0.05, 3.0, 0), circle(1.0, 0.0, 0.05, 3.0, 1), c],
                vec![seg],
            )
        };
        let census = overlap_census(&mk(front), &g, 64);
        assert_eq!((census.en_count, census.ne_count), (0, 1));
        assert_eq!(census.en_area, 0.0);
        assert!(census.ne_area > 0.0);
        let census = overlap_census(&mk(back), &g, 64);
        assert_eq!((census.en_count, census.ne_count), (1, 0));
        assert_eq!(occlusion(&seg, &tie), Occlusion::EdgeOverNode);
    }
}

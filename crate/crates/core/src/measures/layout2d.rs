//! Box, grid and angle based measures on node centers and edge centerlines.

use std::f64::consts::TAU;

use crate::measures::{MeasureId, RawMeasure};
use crate::model::Graph;
use crate::projection::{ProjectedDrawing, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
struct BoundingBox {
    min: Vec2,
    max: Vec2,
}

impl BoundingBox {
    fn of(points: impl Iterator<Item = Vec2>) -> Option<Self> {
        points.fold(None, |acc, p| {
            Some(match acc {
                None => BoundingBox { min: p, max: p },
                Some(b) => BoundingBox {
                    min: b.min.inf(&p),
                    max: b.max.sup(&p),
                },
            })
        })
    }

    fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Bounding-box area relative to the viewport (AR) and the box aspect ratio
/// measured in viewport-relative units (ASP).
pub fn measure_area_aspect(drawing: &ProjectedDrawing) -> (RawMeasure, RawMeasure) {
    let Some(b) = BoundingBox::of(drawing.node_centers()) else {
        return (RawMeasure::new(MeasureId::AR, 0.0), RawMeasure::new(MeasureId::ASP, 0.0));
    };
    let vp = drawing.viewport;
    let area = b.width() * b.height() / vp.area();
    let (w, h) = (b.width() / vp.width, b.height() / vp.height);
    let aspect = if w > 0.0 && h > 0.0 { w.min(h) / w.max(h) } else { 0.0 };
    (RawMeasure::new(MeasureId::AR, area), RawMeasure::new(MeasureId::ASP, aspect))
}

/// Share of nodes that pile up in already occupied cells of a ⌈√n⌉×⌈√n⌉
/// grid laid over the node bounding box.
pub fn measure_concentration(drawing: &ProjectedDrawing) -> RawMeasure {
    let n = drawing.circles.len();
    if n < 2 {
        return RawMeasure::new(MeasureId::CON, 0.0);
    }
    let b = BoundingBox::of(drawing.node_centers()).expect("n >= 2");
    let k = (n as f64).sqrt().ceil() as usize;
    let cell = |v: f64, lo: f64, extent: f64| -> usize {
        if extent > 0.0 {
            (((v - lo) / extent * k as f64).floor() as usize).min(k - 1)
        } else {
            0
        }
    };
    let mut counts = vec![0usize; k * k];
    for p in drawing.node_centers() {
        let ix = cell(p.x, b.min.x, b.width());
        let iy = cell(p.y, b.min.y, b.height());
        counts[iy * k + ix] += 1;
    }
    let excess: usize = counts.iter().map(|&c| c.saturating_sub(1)).sum();
    RawMeasure::new(MeasureId::CON, excess as f64 / (n - 1) as f64)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// How densely the nodes fill a square lattice whose pitch is the median
/// nearest-neighbour distance.
pub fn measure_node_orthogonality(drawing: &ProjectedDrawing) -> RawMeasure {
    let centers: Vec<Vec2> = drawing.node_centers().collect();
    let n = centers.len();
    let zero = RawMeasure::new(MeasureId::NO, 0.0);
    if n < 2 {
        return zero;
    }
    let b = BoundingBox::of(centers.iter().copied()).expect("n >= 2");
    if b.width() <= 0.0 && b.height() <= 0.0 {
        return zero;
    }
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (centers[i] - centers[j]).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let unit = median(&mut nearest);
    if !(unit > 0.0) {
        return zero;
    }
    let steps = |extent: f64| (extent / unit - 1e-9).ceil().max(0.0);
    let lattice_points = (steps(b.width()) + 1.0) * (steps(b.height()) + 1.0);
    RawMeasure::new(MeasureId::NO, (n as f64 / lattice_points).min(1.0))
}

/// One minus the share of (edge, non-endpoint node) pairs where the node
/// lies strictly inside the disc spanned by the edge.
pub fn measure_gabriel(drawing: &ProjectedDrawing, graph: &Graph) -> RawMeasure {
    let n = drawing.circles.len();
    let m = drawing.segments.len();
    if n < 3 || m == 0 {
        return RawMeasure::new(MeasureId::GR, 1.0);
    }
    let mut violations = 0usize;
    for (seg, &(a, b)) in drawing.segments.iter().zip(graph.edges()) {
        let mid = seg.midpoint();
        let r2 = (seg.endpoints[1] - seg.endpoints[0]).norm_squared() / 4.0;
        violations += drawing
            .circles
            .iter()
            .filter(|c| c.node_index != a && c.node_index != b && (c.center - mid).norm_squared() < r2)
            .count();
    }
    RawMeasure::new(MeasureId::GR, 1.0 - violations as f64 / (m * (n - 2)) as f64)
}

/// Mean relative shortfall of the smallest angle between consecutive
/// incident edges against the ideal `360°/deg`.
pub fn measure_angular_resolution(drawing: &ProjectedDrawing, graph: &Graph) -> RawMeasure {
    let mut devs = Vec::new();
    for (v, incident) in graph.incidence().iter().enumerate() {
        let origin = drawing.circles[v].center;
        let mut angles: Vec<f64> = incident
            .iter()
            .filter_map(|&k| {
                let seg = &drawing.segments[k];
                let other = if seg.nodes.0 == v { seg.endpoints[1] } else { seg.endpoints[0] };
                let d = other - origin;
                (d.norm() > 0.0).then(|| d.y.atan2(d.x))
            })
            .collect();
        if angles.len() < 2 {
            continue;
        }
        angles.sort_by(f64::total_cmp);
        let wrap = TAU - (angles[angles.len() - 1] - angles[0]);
        let smallest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min);
        let ideal = TAU / angles.len() as f64;
        devs.push((ideal - smallest).abs() / ideal);
    }
    let value = if devs.is_empty() {
        1.0
    } else {
        1.0 - devs.iter().sum::<f64>() / devs.len() as f64
    };
    RawMeasure::new(MeasureId::ANGR, value)
}

/// One minus the mean deviation of edge directions from the nearest axis,
/// scaled so a 45° edge deviates fully.
pub fn measure_edge_orthogonality(drawing: &ProjectedDrawing) -> RawMeasure {
    let devs: Vec<f64> = drawing
        .segments
        .iter()
        .filter_map(|s| {
            let d = s.endpoints[1] - s.endpoints[0];
            (d.norm() > 0.0).then(|| {
                let theta = d.y.abs().atan2(d.x.abs()).to_degrees();
                theta.min(90.0 - theta) / 45.0
            })
        })
        .collect();
    let value = if devs.is_empty() {
        1.0
    } else {
        1.0 - devs.iter().sum::<f64>() / devs.len() as f64
    };
    RawMeasure::new(MeasureId::EO, value)
}

/// Mean absolute deviation of projected edge lengths relative to their mean.
pub fn measure_edge_length_deviation(drawing: &ProjectedDrawing) -> RawMeasure {
    let lengths: Vec<f64> = drawing.segments.iter().map(|s| s.length()).collect();
    if lengths.is_empty() {
        return RawMeasure::new(MeasureId::ELD, 0.0);
    }
    let m = lengths.len() as f64;
    let mean = lengths.iter().sum::<f64>() / m;
    let value = if mean > 0.0 {
        lengths.iter().map(|l| (l - mean).abs()).sum::<f64>() / (m * mean)
    } else {
        0.0
    };
    RawMeasure::new(MeasureId::ELD, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::test_support::drawing_from;

    #[test]
    fn full_viewport_box() {
        // test viewport is 2×2 centred on the origin
        let d = drawing_from(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)], &[]);
        let (ar, asp) = measure_area_aspect(&d);
        assert_eq!(ar.value, 1.0);
        assert_eq!(asp.value, 1.0);
        let line = drawing_from(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], &[]);
        let (ar, asp) = measure_area_aspect(&line);
        assert_eq!(ar.value, 0.0);
        assert_eq!(asp.value, 0.0);
    }

    #[test]
    fn concentration_extremes() {
        let stacked = drawing_from(&[(0.3, 0.3); 4], &[]);
        assert_eq!(measure_concentration(&stacked).value, 1.0);
        let spread = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)], &[]);
        assert_eq!(measure_concentration(&spread).value, 0.0);
        assert_eq!(measure_concentration(&drawing_from(&[(0.0, 0.0)], &[])).value, 0.0);
    }

    #[test]
    fn node_orthogonality_lattices() {
        let square = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)], &[]);
        assert_eq!(measure_node_orthogonality(&square).value, 1.0);
        let pair = drawing_from(&[(0.0, 0.0), (0.7, 0.0)], &[]);
        assert_eq!(measure_node_orthogonality(&pair).value, 1.0);
        // two tight pairs far apart: pitch 0.1, box 1.1 × 0 → 12 lattice points
        let sparse = drawing_from(&[(0.0, 0.0), (0.1, 0.0), (1.0, 0.0), (1.1, 0.0)], &[]);
        assert!((measure_node_orthogonality(&sparse).value - 4.0 / 12.0).abs() < 1e-12);
        assert_eq!(measure_node_orthogonality(&drawing_from(&[(0.5, 0.5); 3], &[])).value, 0.0);
    }

    #[test]
    fn gabriel_disc_membership() {
        let g = Graph::new(3, vec![(0, 1)]).unwrap();
        let inside = drawing_from(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.5)], g.edges());
        assert_eq!(measure_gabriel(&inside, &g).value, 0.0);
        let outside = drawing_from(&[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)], g.edges());
        assert_eq!(measure_gabriel(&outside, &g).value, 1.0);
        let boundary = drawing_from(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)], g.edges());
        assert_eq!(measure_gabriel(&boundary, &g).value, 1.0);
    }

    #[test]
    fn angular_resolution_cases() {
        let star = Graph::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let cross = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)], star.edges());
        assert!((measure_angular_resolution(&cross, &star).value - 1.0).abs() < 1e-12);

        let elbow_graph = Graph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        let elbow = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], elbow_graph.edges());
        assert!((measure_angular_resolution(&elbow, &elbow_graph).value - 0.5).abs() < 1e-12);

        let folded = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], elbow_graph.edges());
        assert!(measure_angular_resolution(&folded, &elbow_graph).value.abs() < 1e-12);

        let single = Graph::new(2, vec![(0, 1)]).unwrap();
        let d = drawing_from(&[(0.0, 0.0), (1.0, 0.0)], single.edges());
        assert_eq!(measure_angular_resolution(&d, &single).value, 1.0);
    }

    #[test]
    fn edge_orthogonality_cases() {
        let axis = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (1.0, 2.0)], &[(0, 1), (1, 2)]);
        assert!((measure_edge_orthogonality(&axis).value - 1.0).abs() < 1e-12);
        let diagonal = drawing_from(&[(0.0, 0.0), (1.0, 1.0)], &[(0, 1)]);
        assert!(measure_edge_orthogonality(&diagonal).value.abs() < 1e-12);
        assert_eq!(measure_edge_orthogonality(&drawing_from(&[(0.0, 0.0)], &[])).value, 1.0);
    }

    #[test]
    fn edge_length_deviation_cases() {
        let d = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (3.0, 1.0)], &[(0, 1), (2, 3)]);
        assert!((measure_edge_length_deviation(&d).value - 0.5).abs() < 1e-15);
        let even = drawing_from(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)], &[(0, 1), (1, 2)]);
        assert_eq!(measure_edge_length_deviation(&even).value, 0.0);
    }
}

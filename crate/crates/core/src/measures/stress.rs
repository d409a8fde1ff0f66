use std::collections::VecDeque;

use crate::measures::{MeasureId, RawMeasure};
use crate::model::Graph;
use crate::projection::ProjectedDrawing;

/// Unweighted all-pairs shortest-path distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDistances {
    n: usize,
    dist: Vec<u32>,
}

impl GraphDistances {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn new(graph: &Graph) -> Self {
        let n = graph.node_count();
        let adj = graph.adjacency();
        let mut dist = vec![Self::UNREACHABLE; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &v in &adj[u] {
                    if row[v] == Self::UNREACHABLE {
                        row[v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        GraphDistances { n, dist }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        let d = self.dist[i * self.n + j];
        (d != Self::UNREACHABLE).then_some(d)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }
}

pub fn measure_stress(drawing: &ProjectedDrawing, graph: &Graph) -> RawMeasure {
    measure_stress_with(drawing, &GraphDistances::new(graph))
}

/// Stress with weights `d⁻²` after rescaling the drawing by the closed-form
/// optimal factor. Disconnected pairs are skipped.
pub fn measure_stress_with(drawing: &ProjectedDrawing, distances: &GraphDistances) -> RawMeasure {
    let centers: Vec<_> = drawing.node_centers().collect();
    let n = centers.len().min(distances.node_count());
    let mut terms = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            if let Some(d) = distances.get(i, j) {
                terms.push((d as f64, (centers[i] - centers[j]).norm()));
            }
        }
    }
    if terms.is_empty() {
        return RawMeasure::new(MeasureId::ST, 0.0);
    }
    let (num, den) = terms
        .iter()
        .fold((0.0, 0.0), |(num, den), &(d, e)| (num + e / d, den + e * e / (d * d)));
    let count = terms.len() as f64;
    let value = if den == 0.0 {
        // every pair collapses onto one point, so each term w·d² is exactly 1
        1.0
    } else {
        let scale = num / den;
        terms
            .iter()
            .map(|&(d, e)| {
                let r = scale * e - d;
                r * r / (d * d)
            })
            .sum::<f64>()
            / count
    };
    RawMeasure::new(MeasureId::ST, value)
}

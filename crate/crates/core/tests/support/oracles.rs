//! Reference computations written from first principles, without calling
//! into the library's geometry or linear algebra.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::Rng;
use vantage::projection::{ProjectedCircle, ProjectedDrawing, ProjectedThickSegment, Vec2, Viewport};
use vantage::Graph;

pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Distance from `p` to the infinite line through `a` and `b`.
pub fn line_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    orient(a, b, p).abs() / (b - a).norm()
}

/// Random straight-line drawing in the 2×2 viewport centred on the origin.
/// Drawings where some endpoint comes within `margin` of another edge's
/// supporting line are resampled, so no crossing decision is borderline.
pub fn random_drawing(rng: &mut impl Rng, n: usize, m: usize, margin: f64) -> (Graph, ProjectedDrawing) {
    loop {
        let points: Vec<Vec2> = (0..n).map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let max_edges = n * (n - 1) / 2;
        let mut edges = BTreeSet::new();
        while edges.len() < m.min(max_edges) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let clean = edges.iter().enumerate().all(|(i, &(a, b))| {
            edges[i + 1..].iter().all(|&(c, d)| {
                if a == c || a == d || b == c || b == d {
                    return true;
                }
                let (pa, pb, pc, pd) = (points[a], points[b], points[c], points[d]);
                line_distance(pc, pa, pb) > margin
                    && line_distance(pd, pa, pb) > margin
                    && line_distance(pa, pc, pd) > margin
                    && line_distance(pb, pc, pd) > margin
            })
        });
        if clean {
            let graph = Graph::new(n, edges.clone()).unwrap();
            let drawing = ProjectedDrawing::flat(&points, &edges, 0.02, 0.005, Viewport { width: 2.0, height: 2.0 });
            return (graph, drawing);
        }
    }
}

/// Counts proper crossings between edges that share no endpoint by testing
/// every pair.
pub fn brute_force_crossings(drawing: &ProjectedDrawing) -> usize {
    let segs = &drawing.segments;
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = (segs[i].nodes, segs[j].nodes);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                continue;
            }
            let [p, q] = segs[i].endpoints;
            let [r, s] = segs[j].endpoints;
            let straddle1 = orient(p, q, r) * orient(p, q, s) < 0.0;
            let straddle2 = orient(r, s, p) * orient(r, s, q) < 0.0;
            if straddle1 && straddle2 {
                count += 1;
            }
        }
    }
    count
}

/// All-pairs hop distances by Floyd-Warshall; `None` when disconnected.
pub fn hop_distances(graph: &Graph) -> Vec<Vec<Option<f64>>> {
    let n = graph.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b) in graph.edges() {
        d[a][b] = 1.0;
        d[b][a] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| x.is_finite().then_some(x)).collect())
        .collect()
}

/// Weighted stress of the drawing scaled by `s`, averaged over connected pairs.
pub fn stress_at_scale(centers: &[Vec2], hops: &[Vec<Option<f64>>], s: f64) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if let Some(d) = hops[i][j] {
                let e = (centers[i] - centers[j]).norm();
                total += (s * e - d).powi(2) / (d * d);
                count += 1;
            }
        }
    }
    total / count as f64
}

/// Minimum stress over `steps` log-spaced scales spanning four decades
/// either side of the ratio of mean hop distance to mean drawn distance.
pub fn stress_grid_minimum(centers: &[Vec2], hops: &[Vec<Option<f64>>], steps: usize) -> f64 {
    let (mut sum_d, mut sum_e) = (0.0, 0.0);
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if let Some(d) = hops[i][j] {
                sum_d += d;
                sum_e += (centers[i] - centers[j]).norm();
            }
        }
    }
    let center = (sum_d / sum_e).ln();
    (0..steps)
        .map(|k| {
            let s = (center - 4.0 * std::f64::consts::LN_10 + 8.0 * std::f64::consts::LN_10 * k as f64 / (steps - 1) as f64).exp();
            stress_at_scale(centers, hops, s)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Monte Carlo area of the intersection of two discs, sampling the
/// intersection of their bounding boxes.
pub fn lens_monte_carlo(rng: &mut impl Rng, d: f64, r1: f64, r2: f64, samples: usize) -> f64 {
    let (c1, c2) = (Vec2::new(0.0, 0.0), Vec2::new(d, 0.0));
    let x0 = (c1.x - r1).max(c2.x - r2);
    let x1 = (c1.x + r1).min(c2.x + r2);
    let y0 = (-r1).max(-r2);
    let y1 = r1.min(r2);
    if x0 >= x1 {
        return 0.0;
    }
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = Vec2::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if (p - c1).norm_squared() <= r1 * r1 && (p - c2).norm_squared() <= r2 * r2 {
            hits += 1;
        }
    }
    hits as f64 / samples as f64 * (x1 - x0) * (y1 - y0)
}

/// Whether `p` lies in the tube: its foot on the centerline has parameter
/// in [0, 1] and its offset is within the interpolated half-width.
pub fn tube_contains(seg: &ProjectedThickSegment, p: Vec2) -> bool {
    let [a, b] = seg.endpoints;
    let d = b - a;
    let len = d.norm();
    let t = (p - a).dot(&d) / (len * len);
    if !(0.0..=1.0).contains(&t) {
        return false;
    }
    let offset = orient(a, b, p).abs() / len;
    offset <= seg.half_widths[0] + t * (seg.half_widths[1] - seg.half_widths[0])
}

/// Monte Carlo area of tube ∩ disc, sampling the disc's bounding box.
pub fn tube_circle_monte_carlo(
    rng: &mut impl Rng,
    seg: &ProjectedThickSegment,
    circle: &ProjectedCircle,
    samples: usize,
) -> f64 {
    let (c, r) = (circle.center, circle.radius);
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = Vec2::new(rng.gen_range(c.x - r..c.x + r), rng.gen_range(c.y - r..c.y + r));
        if (p - c).norm_squared() <= r * r && tube_contains(seg, p) {
            hits += 1;
        }
    }
    hits as f64 / samples as f64 * 4.0 * r * r
}

/// Eigen-decomposition of a symmetric 3×3 matrix from the closed-form roots
/// of its characteristic polynomial. Eigenvalues descend; eigenvectors are
/// cross products of rows of A − λI.
pub fn symmetric_eigen3(a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let values = if p1 == 0.0 {
        let mut v = [a[0][0], a[1][1], a[2][2]];
        v.sort_by(|x, y| y.total_cmp(x));
        v
    } else {
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| (a[i][j] - if i == j { q } else { 0.0 }) / p).collect())
            .collect();
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        [e1, 3.0 * q - e1 - e3, e3]
    };
    let vectors = values.map(|l| {
        let rows: Vec<[f64; 3]> = (0..3)
            .map(|i| std::array::from_fn(|j| a[i][j] - if i == j { l } else { 0.0 }))
            .collect();
        let cross = |u: [f64; 3], v: [f64; 3]| [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let candidates = [cross(rows[0], rows[1]), cross(rows[0], rows[2]), cross(rows[1], rows[2])];
        let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let best = candidates.into_iter().max_by(|u, v| norm(u).total_cmp(&norm(v))).unwrap();
        let n = norm(&best);
        best.map(|x| x / n)
    });
    (values, vectors)
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues in descending order with eigenvectors as rows.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j].powi(2)).sum();
        let scale: f64 = (0..n).map(|i| a[i][i].powi(2)).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

/// A tube of random length and taper with a disc centred inside it.
pub fn random_tube_and_disc(rng: &mut impl Rng) -> (ProjectedThickSegment, ProjectedCircle) {
    let a = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let dir = rng.gen_range(0.0..std::f64::consts::TAU);
    let len = rng.gen_range(0.2..1.0);
    let b = a + Vec2::new(dir.cos(), dir.sin()) * len;
    let hw = [rng.gen_range(0.01..0.05), rng.gen_range(0.01..0.05)];
    let seg = ProjectedThickSegment {
        endpoints: [a, b],
        half_widths: hw,
        depths: [1.0, 1.0],
        edge_index: 0,
        nodes: (0, 1),
    };
    let t = rng.gen_range(0.0..1.0);
    let normal = Vec2::new(-dir.sin(), dir.cos());
    let offset = rng.gen_range(-1.0..1.0) * (hw[0] + t * (hw[1] - hw[0]));
    let circle = ProjectedCircle {
        center: a + (b - a) * t + normal * offset,
        radius: rng.gen_range(0.02..0.08),
        depth: 1.0,
        node_index: 2,
    };
    (seg, circle)
}

/// Rotation matrix of the unit quaternion (x, y, z, w).
pub fn quaternion_matrix([x, y, z, w]: [f64; 4]) -> [[f64; 3]; 3] {
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Uniformly random unit quaternion (x, y, z, w).
pub fn random_quaternion(rng: &mut impl Rng) -> [f64; 4] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    [a * (2.0 * PI * u2).sin(), a * (2.0 * PI * u2).cos(), b * (2.0 * PI * u3).sin(), b * (2.0 * PI * u3).cos()]
}

/// Uniformly random unit vector.
pub fn random_unit(rng: &mut impl Rng) -> vantage::Vec3 {
    loop {
        let v = vantage::Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Sign-insensitive distance between two unit vectors.
pub fn axis_distance(a: &[f64], b: &[f64]) -> f64 {
    let plus: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let minus: f64 = a.iter().zip(b).map(|(x, y)| (x + y).powi(2)).sum::<f64>().sqrt();
    plus.min(minus)
}

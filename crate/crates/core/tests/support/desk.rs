//! A synthetic stand-in for the study stimuli: 36 geometric graphs, three
//! per (layout class, size class), with layouts shaped like the three
//! families (clustered, layered, space-filling).

use rand::Rng;
use rand_distr::{Distribution, Normal};
use vantage::model::{LayoutClass, Polarity, SelectionRecord, SizeClass};
use vantage::{Graph, GraphBundle, Layout3D, Pose, StudyDataset, Vec3};

use super::oracles::random_unit;

/// Mean degree per size class for the three replicates: edge densities
/// range from roughly a third (S) down to about 0.75% (XL).
fn mean_degree(size: SizeClass, replicate: usize) -> f64 {
    let table = match size {
        SizeClass::S => [4.0, 5.0, 6.0],
        SizeClass::M => [3.0, 4.0, 5.0],
        SizeClass::L => [2.0, 3.0, 4.0],
        SizeClass::XL => [1.5, 2.0, 3.0],
    };
    table[replicate]
}

fn positions(rng: &mut impl Rng, class: LayoutClass, n: usize) -> Vec<Vec3> {
    match class {
        LayoutClass::Energy => (0..n)
            .map(|_| random_unit(rng) * rng.gen::<f64>().cbrt())
            .collect(),
        LayoutClass::Layered => {
            let layers = ((n as f64).sqrt() / 1.5).ceil().max(2.0) as usize;
            (0..n)
                .map(|i| {
                    let layer = i * layers / n;
                    let r = rng.gen::<f64>().sqrt();
                    let a = rng.gen_range(0.0..std::f64::consts::TAU);
                    Vec3::new(r * a.cos(), 2.0 * layer as f64 / (layers - 1) as f64 - 1.0, r * a.sin())
                })
                .collect()
        }
        LayoutClass::Semantic => {
            let clusters = (n / 12).clamp(2, 8);
            let centers: Vec<Vec3> = (0..clusters).map(|_| random_unit(rng)).collect();
            let spread = Normal::new(0.0, 0.2).unwrap();
            (0..n)
                .map(|i| centers[i % clusters] + Vec3::new(spread.sample(rng), spread.sample(rng), spread.sample(rng)))
                .collect()
        }
    }
}

/// Connected geometric graph: a nearest-earlier-node spanning tree plus the
/// shortest remaining pairs until `m` edges exist.
fn edges(points: &[Vec3], m: usize) -> Vec<(usize, usize)> {
    let n = points.len();
    let dist = |a: usize, b: usize| (points[a] - points[b]).norm();
    let mut set = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = (0..i).min_by(|&a, &b| dist(i, a).total_cmp(&dist(i, b))).unwrap();
        set.insert((j, i));
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.sort_by(|&(a, b), &(c, d)| dist(a, b).total_cmp(&dist(c, d)));
    for p in pairs {
        if set.len() >= m {
            break;
        }
        set.insert(p);
    }
    set.into_iter().collect()
}

pub fn desk_bundles(rng: &mut impl Rng) -> Vec<GraphBundle> {
    let mut bundles = Vec::new();
    for class in LayoutClass::ALL {
        for size in SizeClass::ALL {
            for rep in 0..3 {
                let nominal = size.nominal_nodes() as f64;
                let n = (nominal * rng.gen_range(0.9..1.1)).round() as usize;
                let pts = positions(rng, class, n);
                let m = ((n as f64 * mean_degree(size, rep) / 2.0).round() as usize).max(n - 1);
                let graph = Graph::new(n, edges(&pts, m)).unwrap();
                let layout = Layout3D::new(pts, None, None).unwrap();
                let id = format!("{}-{}-{}", class.short(), size, rep + 1);
                bundles.push(GraphBundle::new(id, class, size, graph, layout).unwrap());
            }
        }
    }
    bundles
}

/// A selection whose reconstructed viewpoint is `v`: graph at the origin
/// with identity rotation, user on the far side of the layout center.
pub fn selection_for(participant: &str, bundle: &GraphBundle, polarity: Polarity, v: Vec3) -> SelectionRecord {
    let center = bundle.layout.center();
    let distance = 3.0 * bundle.layout.view_radius();
    SelectionRecord {
        participant_id: participant.to_string(),
        graph_id: bundle.id.clone(),
        polarity,
        graph_pose: Pose::identity_at(Vec3::zeros()),
        user_pose: Pose::identity_at(center - v * distance),
    }
}

/// The 36 bundles with one random best and worst selection per participant
/// and graph.
pub fn desk_dataset(rng: &mut impl Rng, participants: usize) -> StudyDataset {
    let bundles = desk_bundles(rng);
    let mut selections = Vec::new();
    for p in 0..participants {
        for b in &bundles {
            for polarity in [Polarity::Best, Polarity::Worst] {
                selections.push(selection_for(&format!("P{:02}", p + 1), b, polarity, random_unit(rng)));
            }
        }
    }
    StudyDataset::new(bundles, selections).unwrap()
}

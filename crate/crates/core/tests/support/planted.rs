//! Labeled score vectors with a planted set of informative measures.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use vantage::model::{LayoutClass, Polarity, SizeClass};
use vantage::{LabeledSample, MeasureId, ScoreVector, Vec3, MEASURE_COUNT};

pub fn labeled(scores: [f64; MEASURE_COUNT], best: bool) -> LabeledSample {
    LabeledSample {
        scores: ScoreVector {
            graph_id: "synthetic".into(),
            viewpoint: Vec3::z(),
            range_id: String::new(),
            scores,
        },
        label: if best { Polarity::Best } else { Polarity::Worst },
        layout_class: LayoutClass::Energy,
        size_class: SizeClass::M,
        participant_id: "sim".into(),
    }
}

/// `per_class` best and worst samples. Informative measures are drawn from
/// N(0.5 ± gap/2, 0.1) clamped to [0, 1], all others uniformly from [0, 1].
pub fn planted_samples(rng: &mut impl Rng, informative: &[MeasureId], per_class: usize, gap: f64) -> Vec<LabeledSample> {
    let best = Normal::new(0.5 + gap / 2.0, 0.1).unwrap();
    let worst = Normal::new(0.5 - gap / 2.0, 0.1).unwrap();
    let mut samples = Vec::with_capacity(2 * per_class);
    for _ in 0..per_class {
        for is_best in [true, false] {
            let scores = std::array::from_fn(|i| {
                if informative.iter().any(|m| m.index() == i) {
                    let d = if is_best { &best } else { &worst };
                    d.sample(rng).clamp(0.0, 1.0)
                } else {
                    rng.gen::<f64>()
                }
            });
            samples.push(labeled(scores, is_best));
        }
    }
    samples
}

/// Three distinct measures chosen at random.
pub fn random_trio(rng: &mut impl Rng) -> Vec<MeasureId> {
    let mut ids = MeasureId::ALL.to_vec();
    for i in 0..3 {
        let j = rng.gen_range(i..ids.len());
        ids.swap(i, j);
    }
    let mut trio = ids[..3].to_vec();
    trio.sort_by_key(|m| m.index());
    trio
}

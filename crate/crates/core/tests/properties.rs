//! Invariants that hold for arbitrary inputs.

use proptest::prelude::*;
use vantage::fitting::{Normalization, WeightVector};
use vantage::iso::{iso_score, pca_axes};
use vantage::measures::Polarity;
use vantage::overlap::lens_area;
use vantage::pipeline::normalize_value;
use vantage::{combined_score, Layout3D, MeasureId, ScoreVector, Vec3, MEASURE_COUNT};

fn polarity() -> impl Strategy<Value = Polarity> {
    prop_oneof![Just(Polarity::LowerBetter), Just(Polarity::HigherBetter)]
}

fn point() -> impl Strategy<Value = Vec3> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #[test]
    fn normalization_is_bounded_and_monotone(
        lo in -1e3..1e3f64,
        span in 1e-6..1e3f64,
        a in -2e3..2e3f64,
        b in -2e3..2e3f64,
        pol in polarity(),
    ) {
        let hi = lo + span;
        let (na, nb) = (normalize_value(a, lo, hi, pol), normalize_value(b, lo, hi, pol));
        prop_assert!((0.0..=1.0).contains(&na) && (0.0..=1.0).contains(&nb));
        if a <= b {
            match pol {
                Polarity::HigherBetter => prop_assert!(na <= nb),
                Polarity::LowerBetter => prop_assert!(na >= nb),
            }
        }
    }

    #[test]
    fn iso_lies_in_unit_interval(points in prop::collection::vec(point(), 4..20), view in point()) {
        prop_assume!(view.norm() > 1e-3);
        let axes = pca_axes(&Layout3D::new(points, None, None).unwrap());
        let iso = iso_score(&view.normalize(), &axes).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&iso), "{}", iso);
    }

    #[test]
    fn lens_area_is_symmetric_bounded_and_shrinks_with_distance(
        r1 in 0.01..2.0f64,
        r2 in 0.01..2.0f64,
        d in 0.0..5.0f64,
        dd in 0.0..1.0f64,
    ) {
        let area = lens_area(d, r1, r2);
        prop_assert!((area - lens_area(d, r2, r1)).abs() <= 1e-12 * (1.0 + area));
        prop_assert!(area >= 0.0);
        prop_assert!(area <= std::f64::consts::PI * r1.min(r2).powi(2) * (1.0 + 1e-12));
        prop_assert!(lens_area(d + dd, r1, r2) <= area + 1e-12);
    }

    #[test]
    fn weight_vectors_keep_their_normalization(
        raw in prop::array::uniform21(0.0..1.0f64),
        scores in prop::array::uniform21(0.0..=1.0f64),
    ) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let w = WeightVector::new(raw.map(|x| x / total), Normalization::UnitSum, &MeasureId::ALL).unwrap();
        let unit = w.rescaled(Normalization::UnitNorm).unwrap();
        let norm: f64 = unit.weights().iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-9);
        let back = WeightVector::from_json(&unit.to_json()).unwrap();
        prop_assert_eq!(back.weights(), unit.weights());

        let s = ScoreVector { graph_id: "g".into(), viewpoint: Vec3::z(), range_id: String::new(), scores };
        let c = combined_score(&w, &s);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        prop_assert_eq!(s.scores.len(), MEASURE_COUNT);
    }
}

mod common;

use proptest::prelude::*;

use common::{brute_force_configurations, random_model};
use varsel::dsl::{bundled, parse, serialize};
use varsel::fm::{enumerate_configurations, validate_configuration, Configuration, FeatureModel, Variability};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>()) {
        let model = random_model(seed, 12);
        prop_assert_eq!(enumerate_configurations(&model, 12).unwrap(), brute_force_configurations(&model));
    }

    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>()) {
        let model = random_model(seed, 16);
        let text = serialize(&model);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn optional_feature_needs_its_parent(seed in any::<u64>()) {
        let model = random_model(seed, 10);
        for config in enumerate_configurations(&model, 10).unwrap() {
            for f in model.features.iter().filter(|f| f.variability == Variability::Optional) {
                if config.contains(&f.id) {
                    continue;
                }
                let mut grown = config.clone();
                grown.insert(f.id.clone());
                let parent_selected = config.contains(f.parent.as_deref().unwrap());
                let valid = validate_configuration(&model, &grown).unwrap().is_valid();
                // Valid only if the parent is selected.
                if !parent_selected {
                    prop_assert!(!valid);
                }
            }
        }
    }
}

#[test]
fn bundled_models_round_trip() {
    for (text, model) in [
        (bundled::ML_TECHNIQUES_FM, bundled::ml_techniques()),
        (bundled::MODELING_ASSUMPTIONS_FM, bundled::modeling_assumptions()),
    ] {
        assert_eq!(parse(text).unwrap(), model);
        assert_eq!(parse(&serialize(&model)).unwrap(), model);
    }
    let merged: FeatureModel = bundled::selection_model();
    assert_eq!(parse(&serialize(&merged)).unwrap(), merged);
}

#[test]
fn enumeration_is_sorted_and_unique() {
    for seed in 0..20 {
        let configs = enumerate_configurations(&random_model(seed, 12), 12).unwrap();
        let mut sorted: Vec<Configuration> = configs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(configs, sorted);
    }
}

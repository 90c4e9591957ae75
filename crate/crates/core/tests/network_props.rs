mod common;

use std::collections::BTreeMap;

use common::random_network;
use nodal_core::io::{parse_network, serialize_network};
use nodal_core::network::{sources_agree, StepOutcome, DEFAULT_ENUMERATION_CAP};
use nodal_core::{
    behavior_equivalent, find_pairs, rationalize, rationalize_step, validate, Source,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_networks_are_well_formed_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let net = random_network(&mut rng);
        assert_eq!(validate(&net), []);
        let text = serialize_network(&net);
        assert_eq!(parse_network(&text).unwrap(), net);
    }
}

#[test]
fn rationalization_preserves_behavior_and_shrinks_one_node_per_merge() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut merges = 0;
    for _ in 0..300 {
        let net = random_network(&mut rng);
        let (reduced, report) = rationalize(&net);
        merges += report.merges();
        assert_eq!(reduced.node_count(), net.node_count() - report.merges());
        assert_eq!(report.behavior_equivalent, Some(true));
        assert_eq!(validate(&reduced), []);

        let names: BTreeMap<String, String> =
            net.outputs.keys().map(|k| (k.clone(), k.clone())).collect();
        assert!(behavior_equivalent(&net, &reduced, &names).unwrap());
        let pairs: Vec<(Source, Source)> = report
            .correspondence
            .iter()
            .map(|(id, s)| (Source::node(id.clone()), s.clone()))
            .collect();
        assert!(sources_agree(&net, &reduced, &pairs, DEFAULT_ENUMERATION_CAP).unwrap());

        // nothing left to merge
        for pair in find_pairs(&reduced) {
            assert_eq!(rationalize_step(&reduced, &pair).unwrap(), None);
        }
        let text = serialize_network(&reduced);
        assert_eq!(parse_network(&text).unwrap(), reduced);
    }
    assert!(merges > 50, "generator produced too few merges: {merges}");
}

#[test]
fn every_transcendent_step_carries_a_valid_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let net = random_network(&mut rng);
        let mut current = net.clone();
        let (_, report) = rationalize(&net);
        // replay the log, re-deriving each pair on the network it was tried on
        for step in &report.steps {
            if let StepOutcome::Transcendent { witness } = &step.outcome {
                let pair = find_pairs(&current)
                    .into_iter()
                    .find(|p| p.primary == step.primary && p.dependent == step.dependent)
                    .expect("logged pair exists at that point");
                let id = nodal_core::FiniteMap::identity(pair.induced_t.codomain());
                assert!(witness.validates(&pair.induced_t, &pair.induced_m, &id));
            }
            if let StepOutcome::Merged { .. } = &step.outcome {
                let pair = find_pairs(&current)
                    .into_iter()
                    .find(|p| p.primary == step.primary && p.dependent == step.dependent)
                    .unwrap();
                current = rationalize_step(&current, &pair).unwrap().unwrap();
            }
        }
    }
}

#[test]
fn rationalize_is_deterministic_on_random_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let net = random_network(&mut rng);
        assert_eq!(rationalize(&net), rationalize(&net));
    }
}

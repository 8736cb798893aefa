//! Property tests for network projection against an independent brute-force
//! oracle: the transitive closure of the pairwise shared-id relation,
//! computed by BFS with no union-find in sight.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chrono::Utc;
use linkhound_core::graph::{build_graph, project_networks};
use linkhound_core::model::{normalize_id, Observation, Provenance, ScanWave};
use linkhound_core::registrable_domain;
use proptest::prelude::*;

fn wave_from_edges(edges: &[(u8, u8)]) -> ScanWave {
    let mut wave = ScanWave::new("prop", Utc::now());
    for &(d, i) in edges {
        wave.observations.push(Observation {
            domain: registrable_domain(&format!("d{d:03}.sk")).unwrap(),
            id: normalize_id(&format!("UA-{}", 1_000_000 + i as u32)).unwrap(),
            observed_at: Utc::now(),
            provenance: Provenance::Live,
            source_url: "test".into(),
            blob_hash: None,
        });
    }
    wave.finished_at = Some(Utc::now());
    wave
}

/// Brute force: explicit pairwise shared-id adjacency, then BFS closure.
fn oracle_components(edges: &[(u8, u8)]) -> BTreeSet<BTreeSet<String>> {
    let mut ids_of: BTreeMap<u8, BTreeSet<u8>> = BTreeMap::new();
    for &(d, i) in edges {
        ids_of.entry(d).or_default().insert(i);
    }
    let domains: Vec<u8> = ids_of.keys().copied().collect();
    let mut adjacent: BTreeMap<u8, BTreeSet<u8>> = BTreeMap::new();
    for &a in &domains {
        for &b in &domains {
            if a < b && !ids_of[&a].is_disjoint(&ids_of[&b]) {
                adjacent.entry(a).or_default().insert(b);
                adjacent.entry(b).or_default().insert(a);
            }
        }
    }
    let mut seen: BTreeSet<u8> = BTreeSet::new();
    let mut components = BTreeSet::new();
    for &start in &domains {
        if seen.contains(&start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(d) = queue.pop_front() {
            if !seen.insert(d) {
                continue;
            }
            component.insert(format!("d{d:03}.sk"));
            if let Some(neighbors) = adjacent.get(&d) {
                queue.extend(neighbors.iter().copied());
            }
        }
        if component.len() >= 2 {
            components.insert(component);
        }
    }
    components
}

fn projected_components(edges: &[(u8, u8)]) -> BTreeSet<BTreeSet<String>> {
    let wave = wave_from_edges(edges);
    project_networks(&build_graph(&wave))
        .into_iter()
        .map(|n| n.members.iter().map(|d| d.registrable().to_string()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projection_matches_bruteforce_closure(
        edges in proptest::collection::vec((0u8..30, 0u8..10), 0..80)
    ) {
        prop_assert_eq!(projected_components(&edges), oracle_components(&edges));
    }

    #[test]
    fn adding_observations_never_shrinks_or_splits(
        edges in proptest::collection::vec((0u8..20, 0u8..8), 1..50),
        extra in (0u8..20, 0u8..8),
    ) {
        let before = projected_components(&edges);
        let mut grown = edges.clone();
        grown.push(extra);
        let after = projected_components(&grown);
        // Every old network's members stay together inside some new network.
        for old in &before {
            let containing = after.iter().find(|n| old.is_subset(n));
            prop_assert!(containing.is_some(), "network {:?} split or vanished", old);
            prop_assert!(containing.unwrap().len() >= old.len());
        }
    }

    #[test]
    fn conservation_of_domains(
        edges in proptest::collection::vec((0u8..25, 0u8..10), 0..60)
    ) {
        let wave = wave_from_edges(&edges);
        let graph = build_graph(&wave);
        let networks = project_networks(&graph);
        let in_networks: usize = networks.iter().map(|n| n.dimension).sum();
        let network_members: BTreeSet<_> = networks.iter().flat_map(|n| n.members.iter().cloned()).collect();
        let singletons = graph.domains.iter().filter(|d| !network_members.contains(*d)).count();
        prop_assert_eq!(in_networks + singletons, graph.domains.len());
    }

    #[test]
    fn determinism_byte_identical_ordering(
        edges in proptest::collection::vec((0u8..25, 0u8..10), 0..60)
    ) {
        let mut shuffled = edges.clone();
        shuffled.reverse();
        let a = project_networks(&build_graph(&wave_from_edges(&edges)));
        let b = project_networks(&build_graph(&wave_from_edges(&shuffled)));
        prop_assert_eq!(a, b);
    }
}

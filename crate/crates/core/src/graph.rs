//! Domain linking: the bipartite domain↔id graph, its projection into
//! networks (connected components of linked domains), descriptive statistics,
//! coverage, category frequencies, and wave-to-wave change reports.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::model::{DomainKey, IdKind, ProvenanceClass, ScanWave, TrackingId};

/// Bipartite attribution graph: domain nodes, id nodes, and an edge wherever
/// a domain was observed carrying an id. Edge provenance is the union of the
/// underlying observations' provenance classes.
#[derive(Debug, Clone, Default)]
pub struct AttributionGraph {
    pub domains: BTreeSet<DomainKey>,
    pub ids: BTreeSet<TrackingId>,
    pub edges: BTreeMap<(DomainKey, TrackingId), BTreeSet<ProvenanceClass>>,
    pub built_from: String,
    /// Seed-list domains of the wave the graph was built from.
    pub seed_domains: BTreeSet<DomainKey>,
    /// Category labels per seed domain, for export attributes.
    pub categories: BTreeMap<DomainKey, String>,
}

impl AttributionGraph {
    pub fn ids_of(&self, domain: &DomainKey) -> BTreeSet<TrackingId> {
        self.edges
            .range((domain.clone(), min_id())..)
            .take_while(|((d, _), _)| d == domain)
            .map(|((_, id), _)| id.clone())
            .collect()
    }
}

fn min_id() -> TrackingId {
    TrackingId::new(IdKind::GaUa, "", None)
}

/// Builds the bipartite graph from a finished wave: one node per distinct
/// domain with at least one observation, one node per distinct identity, and
/// edges with unioned provenance classes.
pub fn build_graph(wave: &ScanWave) -> AttributionGraph {
    build_graph_filtered(wave, None)
}

/// Like [`build_graph`] but keeping only observations of one provenance
/// class (the live-state view used by wave diffs).
pub fn build_graph_filtered(wave: &ScanWave, class: Option<ProvenanceClass>) -> AttributionGraph {
    let mut graph = AttributionGraph { built_from: wave.name.clone(), ..Default::default() };
    graph.seed_domains = wave.seed_domains();
    for seed in &wave.seeds {
        if let Some(category) = &seed.category {
            graph.categories.insert(seed.domain.clone(), category.clone());
        }
    }
    for obs in &wave.observations {
        if class.is_some_and(|c| obs.provenance.class() != c) {
            continue;
        }
        graph.domains.insert(obs.domain.clone());
        graph.ids.insert(obs.id.clone());
        graph
            .edges
            .entry((obs.domain.clone(), obs.id.clone()))
            .or_default()
            .insert(obs.provenance.class());
    }
    graph
}

/// A connected component of the projected domain graph with at least two
/// member domains. Singletons are not networks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Network {
    /// Deterministic label: the lexicographically smallest member domain.
    pub network_id: String,
    pub members: BTreeSet<DomainKey>,
    /// Ids shared by at least two member domains; these are what link the
    /// component together.
    pub linking_ids: BTreeSet<TrackingId>,
    pub dimension: usize,
    /// Members that are on the wave's seed list.
    pub seed_members: BTreeSet<DomainKey>,
}

/// Plain union-find over dense indices.
struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Projects the bipartite graph onto domains: connected components via
/// shared ids (transitively), reported as [`Network`]s. Components with one
/// domain are discarded. Output is sorted by `(dimension desc, network_id
/// asc)` and fully deterministic.
pub fn project_networks(graph: &AttributionGraph) -> Vec<Network> {
    let domains: Vec<&DomainKey> = graph.domains.iter().collect();
    let index: HashMap<&DomainKey, usize> = domains.iter().enumerate().map(|(i, d)| (*d, i)).collect();

    let mut domains_per_id: BTreeMap<&TrackingId, Vec<usize>> = BTreeMap::new();
    for (domain, id) in graph.edges.keys() {
        domains_per_id.entry(id).or_default().push(index[domain]);
    }

    let mut dsu = DisjointSet::new(domains.len());
    for members in domains_per_id.values() {
        for pair in members.windows(2) {
            dsu.union(pair[0], pair[1]);
        }
    }

    let mut components: BTreeMap<usize, BTreeSet<DomainKey>> = BTreeMap::new();
    for (i, domain) in domains.iter().enumerate() {
        components.entry(dsu.find(i)).or_default().insert((*domain).clone());
    }

    let mut networks: Vec<Network> = components
        .into_values()
        .filter(|members| members.len() >= 2)
        .map(|members| {
            let linking_ids: BTreeSet<TrackingId> = domains_per_id
                .iter()
                .filter(|(_, ds)| {
                    let distinct: BTreeSet<usize> = ds.iter().copied().collect();
                    distinct.len() >= 2 && ds.iter().any(|&d| members.contains(domains[d]))
                })
                .map(|(id, _)| (*id).clone())
                .collect();
            let seed_members: BTreeSet<DomainKey> =
                members.intersection(&graph.seed_domains).cloned().collect();
            Network {
                network_id: members.iter().next().expect("nonempty").registrable().to_string(),
                dimension: members.len(),
                members,
                linking_ids,
                seed_members,
            }
        })
        .collect();
    networks.sort_by(|a, b| b.dimension.cmp(&a.dimension).then_with(|| a.network_id.cmp(&b.network_id)));
    networks
}

/// Standard-deviation convention for network statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdConvention {
    Sample,
    Population,
}

/// Descriptive statistics over network dimensions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub n: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub sd: f64,
    pub sd_convention: SdConvention,
    /// Sample sd over a single value is undefined; it is reported as 0.0
    /// with this flag set.
    pub sd_degenerate: bool,
}

pub fn network_stats(networks: &[Network], convention: SdConvention) -> NetworkStats {
    let dims: Vec<usize> = networks.iter().map(|n| n.dimension).collect();
    if dims.is_empty() {
        return NetworkStats {
            n: 0,
            min: 0,
            max: 0,
            mean: 0.0,
            sd: 0.0,
            sd_convention: convention,
            sd_degenerate: false,
        };
    }
    let n = dims.len();
    let sum: usize = dims.iter().sum();
    let mean = sum as f64 / n as f64;
    let ss: f64 = dims.iter().map(|&d| (d as f64 - mean).powi(2)).sum();
    let (sd, degenerate) = match convention {
        SdConvention::Sample if n < 2 => (0.0, true),
        SdConvention::Sample => ((ss / (n as f64 - 1.0)).sqrt(), false),
        SdConvention::Population => ((ss / n as f64).sqrt(), false),
    };
    NetworkStats {
        n,
        min: *dims.iter().min().expect("nonempty"),
        max: *dims.iter().max().expect("nonempty"),
        mean,
        sd,
        sd_convention: convention,
        sd_degenerate: degenerate,
    }
}

/// Share of active seeds carrying at least one tracking id. The percentage
/// is computed in integer hundredths, rounded half-up, so reports are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverageStats {
    pub active_seeds: usize,
    pub seeds_with_id: usize,
    /// Percentage in hundredths (6769 means 67.69%).
    pub percent_hundredths: u64,
}

impl CoverageStats {
    pub fn percent_string(&self) -> String {
        format!("{}.{:02}", self.percent_hundredths / 100, self.percent_hundredths % 100)
    }

    pub fn percent_f64(&self) -> f64 {
        self.percent_hundredths as f64 / 100.0
    }
}

/// Coverage over a wave: how many active seeds were observed with at least
/// one id of the given provenance class (live state by default).
pub fn coverage_stats(wave: &ScanWave, class: ProvenanceClass) -> CoverageStats {
    let with_id: BTreeSet<&DomainKey> = wave
        .observations
        .iter()
        .filter(|o| o.provenance.class() == class)
        .map(|o| &o.domain)
        .collect();
    let active: Vec<&DomainKey> = wave.active_seeds().map(|s| &s.domain).collect();
    let seeds_with_id = active.iter().filter(|d| with_id.contains(*d)).count();
    CoverageStats {
        active_seeds: active.len(),
        seeds_with_id,
        percent_hundredths: percent_hundredths_half_up(seeds_with_id, active.len()),
    }
}

/// `round_half_up(10000 * num / den)` in pure integer arithmetic.
pub fn percent_hundredths_half_up(num: usize, den: usize) -> u64 {
    if den == 0 {
        return 0;
    }
    ((20000 * num as u64) + den as u64) / (2 * den as u64)
}

/// Category label counts over active seeds; unlabeled seeds count under
/// `"Unlabeled"`. The total equals the active-seed count.
pub fn category_frequency(wave: &ScanWave) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for seed in wave.active_seeds() {
        let label = seed.category.clone().unwrap_or_else(|| "Unlabeled".to_string());
        *counts.entry(label).or_default() += 1;
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Per-domain id changes between two waves.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DomainDelta {
    pub ids_added: BTreeSet<TrackingId>,
    pub ids_deleted: BTreeSet<TrackingId>,
    /// Id kinds the domain gained on top of kinds it already used.
    pub kinds_added: BTreeSet<IdKind>,
}

/// Wave-to-wave change report. Compares live-provenance identities only:
/// archive observations are historical facts, not current state.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ChangeReport {
    pub wave_a: String,
    pub wave_b: String,
    pub per_domain: BTreeMap<DomainKey, DomainDelta>,
    /// Networks of the first wave whose linking ids all vanished from the
    /// second wave's live observations.
    pub networks_dissolved: Vec<String>,
    /// Networks of the second wave sharing no member with any first-wave
    /// network.
    pub networks_new: Vec<Network>,
}

impl ChangeReport {
    pub fn is_empty(&self) -> bool {
        self.per_domain.is_empty() && self.networks_dissolved.is_empty() && self.networks_new.is_empty()
    }

    pub fn deletions_of_kind(&self, kind: IdKind) -> usize {
        self.per_domain.values().filter(|d| d.ids_deleted.iter().any(|id| id.kind() == kind)).count()
    }

    pub fn additions_of_kind(&self, kind: IdKind) -> usize {
        self.per_domain.values().filter(|d| d.ids_added.iter().any(|id| id.kind() == kind)).count()
    }

    /// Domains that added a new id type to the ones they already used.
    pub fn kind_additions(&self) -> usize {
        self.per_domain.values().filter(|d| !d.kinds_added.is_empty()).count()
    }
}

fn live_ids_by_domain(wave: &ScanWave) -> BTreeMap<DomainKey, BTreeSet<TrackingId>> {
    let mut map: BTreeMap<DomainKey, BTreeSet<TrackingId>> = BTreeMap::new();
    for obs in &wave.observations {
        if obs.provenance.class() == ProvenanceClass::Live {
            map.entry(obs.domain.clone()).or_default().insert(obs.id.clone());
        }
    }
    map
}

/// Diffs two finished waves.
pub fn diff_waves(first: &ScanWave, second: &ScanWave) -> ChangeReport {
    let ids_a = live_ids_by_domain(first);
    let ids_b = live_ids_by_domain(second);

    let mut report = ChangeReport {
        wave_a: first.name.clone(),
        wave_b: second.name.clone(),
        ..Default::default()
    };

    let all_domains: BTreeSet<&DomainKey> = ids_a.keys().chain(ids_b.keys()).collect();
    for domain in all_domains {
        let empty = BTreeSet::new();
        let a = ids_a.get(domain).unwrap_or(&empty);
        let b = ids_b.get(domain).unwrap_or(&empty);
        let added: BTreeSet<TrackingId> = b.difference(a).cloned().collect();
        let deleted: BTreeSet<TrackingId> = a.difference(b).cloned().collect();
        if added.is_empty() && deleted.is_empty() {
            continue;
        }
        let kinds_a: BTreeSet<IdKind> = a.iter().map(|id| id.kind()).collect();
        let kinds_b: BTreeSet<IdKind> = b.iter().map(|id| id.kind()).collect();
        let kinds_added = if kinds_a.is_empty() {
            BTreeSet::new()
        } else {
            kinds_b.difference(&kinds_a).copied().collect()
        };
        report.per_domain.insert(domain.clone(), DomainDelta { ids_added: added, ids_deleted: deleted, kinds_added });
    }

    let nets_a = project_networks(&build_graph_filtered(first, Some(ProvenanceClass::Live)));
    let nets_b = project_networks(&build_graph_filtered(second, Some(ProvenanceClass::Live)));

    let live_ids_b: BTreeSet<&TrackingId> = ids_b.values().flatten().collect();
    for net in &nets_a {
        if net.linking_ids.iter().all(|id| !live_ids_b.contains(id)) {
            report.networks_dissolved.push(net.network_id.clone());
        }
    }

    let members_a: BTreeSet<&DomainKey> = nets_a.iter().flat_map(|n| n.members.iter()).collect();
    for net in &nets_b {
        if net.members.iter().all(|m| !members_a.contains(m)) {
            report.networks_new.push(net.clone());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize_id, Observation, Provenance, ScanWave, SeedStatus};
    use crate::psl::registrable_domain;
    use chrono::Utc;

    fn dk(s: &str) -> DomainKey {
        registrable_domain(s).unwrap()
    }

    fn obs(domain: &str, id: &str, provenance: Provenance) -> Observation {
        Observation {
            domain: dk(domain),
            id: normalize_id(id).unwrap(),
            observed_at: Utc::now(),
            provenance,
            source_url: format!("https://{domain}/"),
            blob_hash: None,
        }
    }

    fn wave(name: &str, observations: Vec<Observation>) -> ScanWave {
        let mut w = ScanWave::new(name, Utc::now());
        w.observations = observations;
        w.finished_at = Some(Utc::now());
        w
    }

    #[test]
    fn two_domains_sharing_an_id() {
        let w = wave(
            "w",
            vec![
                obs("a.sk", "pub-1111222233334444", Provenance::Live),
                obs("b.sk", "pub-1111222233334444", Provenance::Live),
            ],
        );
        let g = build_graph(&w);
        assert_eq!(g.domains.len() + g.ids.len(), 3);
        assert_eq!(g.edges.len(), 2);
        let nets = project_networks(&g);
        assert_eq!(nets.len(), 1);
        assert_eq!(nets[0].dimension, 2);
        assert_eq!(nets[0].network_id, "a.sk");
    }

    #[test]
    fn live_and_archive_merge_into_one_edge() {
        let ts = crate::model::ArchiveTimestamp::parse("20190401120000").unwrap();
        let w = wave(
            "w",
            vec![
                obs("a.sk", "UA-1374898-1", Provenance::Live),
                obs("a.sk", "UA-1374898-2", Provenance::Archive { snapshot_ts: ts }),
            ],
        );
        let g = build_graph(&w);
        assert_eq!(g.edges.len(), 1);
        let provs = g.edges.values().next().unwrap();
        assert_eq!(provs.len(), 2);
    }

    #[test]
    fn empty_wave_empty_graph() {
        let w = wave("w", vec![]);
        let g = build_graph(&w);
        assert!(g.domains.is_empty() && g.ids.is_empty() && g.edges.is_empty());
        assert!(project_networks(&g).is_empty());
    }

    #[test]
    fn chain_linking_is_transitive() {
        let w = wave(
            "w",
            vec![
                obs("a.sk", "UA-1111111", Provenance::Live),
                obs("b.sk", "UA-1111111", Provenance::Live),
                obs("b.sk", "UA-2222222", Provenance::Live),
                obs("c.sk", "UA-2222222", Provenance::Live),
            ],
        );
        let nets = project_networks(&build_graph(&w));
        assert_eq!(nets.len(), 1);
        assert_eq!(nets[0].dimension, 3);
        assert_eq!(nets[0].linking_ids.len(), 2);
    }

    #[test]
    fn singletons_are_not_networks() {
        let w = wave(
            "w",
            vec![
                obs("solo.sk", "UA-3333333", Provenance::Live),
                obs("a.sk", "UA-4444444", Provenance::Live),
                obs("b.sk", "UA-4444444", Provenance::Live),
            ],
        );
        let nets = project_networks(&build_graph(&w));
        assert_eq!(nets.len(), 1);
        assert!(nets.iter().all(|n| n.dimension >= 2));
    }

    #[test]
    fn stats_forced_values() {
        let nets: Vec<Network> = [2usize, 3, 4]
            .iter()
            .map(|&d| Network {
                network_id: format!("n{d}"),
                members: BTreeSet::new(),
                linking_ids: BTreeSet::new(),
                dimension: d,
                seed_members: BTreeSet::new(),
            })
            .collect();
        let s = network_stats(&nets, SdConvention::Sample);
        assert_eq!(s.n, 3);
        assert!((s.mean - 3.0).abs() < 1e-12);
        assert!((s.sd - 1.0).abs() < 1e-12);
        assert!(!s.sd_degenerate);
    }

    #[test]
    fn single_network_sample_sd_degenerate() {
        let nets = vec![Network {
            network_id: "x".into(),
            members: BTreeSet::new(),
            linking_ids: BTreeSet::new(),
            dimension: 5,
            seed_members: BTreeSet::new(),
        }];
        let s = network_stats(&nets, SdConvention::Sample);
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.sd, 0.0);
        assert!(s.sd_degenerate);
        let p = network_stats(&nets, SdConvention::Population);
        assert!(!p.sd_degenerate);
    }

    #[test]
    fn empty_stats() {
        let s = network_stats(&[], SdConvention::Sample);
        assert_eq!((s.n, s.min, s.max), (0, 0, 0));
    }

    #[test]
    fn coverage_rounding_half_up() {
        assert_eq!(percent_hundredths_half_up(44, 65), 6769); // 67.6923 → 67.69
        assert_eq!(percent_hundredths_half_up(39, 46), 8478); // 84.7826 → 84.78
        assert_eq!(percent_hundredths_half_up(1, 8), 1250); // 12.50 exact
        assert_eq!(percent_hundredths_half_up(1, 16000), 1); // 0.00625 → 0.01
        assert_eq!(percent_hundredths_half_up(0, 10), 0);
        assert_eq!(percent_hundredths_half_up(0, 0), 0);
    }

    #[test]
    fn category_frequency_totals_active() {
        let mut w = wave("w", vec![]);
        let mk = |d: &str, st: SeedStatus, cat: Option<&str>| crate::model::SeedEntry {
            domain: dk(d),
            status: st,
            category: cat.map(str::to_string),
            wave: "w".into(),
        };
        w.seeds = vec![
            mk("a.sk", SeedStatus::Active, Some("News-Focused")),
            mk("b.sk", SeedStatus::Active, Some("News-Focused")),
            mk("c.sk", SeedStatus::Active, None),
            mk("d.sk", SeedStatus::Dead, Some("Paranormal")),
        ];
        let freq = category_frequency(&w);
        let total: usize = freq.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 3);
        assert_eq!(freq[0], ("News-Focused".to_string(), 2));
        assert!(freq.contains(&("Unlabeled".to_string(), 1)));
    }

    #[test]
    fn diff_detects_deletion_addition_and_new_network() {
        let w1 = wave(
            "w1",
            vec![
                obs("x.sk", "UA-1234567", Provenance::Live),
                obs("x.sk", "pub-1111222233334444", Provenance::Live),
                obs("y.sk", "UA-7654321", Provenance::Live),
            ],
        );
        let w2 = wave(
            "w2",
            vec![
                obs("x.sk", "UA-1234567", Provenance::Live),
                obs("y.sk", "UA-7654321", Provenance::Live),
                obs("y.sk", "pub-5555666677778888", Provenance::Live),
                obs("n1.sk", "UA-24461628", Provenance::Live),
                obs("n2.sk", "UA-24461628", Provenance::Live),
            ],
        );
        let report = diff_waves(&w1, &w2);
        let x = &report.per_domain[&dk("x.sk")];
        assert_eq!(x.ids_deleted.len(), 1);
        assert_eq!(x.ids_deleted.iter().next().unwrap().kind(), IdKind::AdsensePub);
        let y = &report.per_domain[&dk("y.sk")];
        assert_eq!(y.kinds_added.len(), 1);
        assert_eq!(report.networks_new.len(), 1);
        assert_eq!(report.networks_new[0].dimension, 2);
    }

    #[test]
    fn identical_waves_empty_report() {
        let observations = vec![
            obs("a.sk", "UA-1234567", Provenance::Live),
            obs("b.sk", "UA-1234567", Provenance::Live),
        ];
        let w1 = wave("w1", observations.clone());
        let w2 = wave("w2", observations);
        assert!(diff_waves(&w1, &w2).is_empty());
    }

    #[test]
    fn diff_ignores_archive_observations() {
        let ts = crate::model::ArchiveTimestamp::parse("20190401120000").unwrap();
        let w1 = wave("w1", vec![obs("a.sk", "UA-1234567", Provenance::Live)]);
        let w2 = wave(
            "w2",
            vec![obs("a.sk", "UA-1234567", Provenance::Archive { snapshot_ts: ts })],
        );
        let report = diff_waves(&w1, &w2);
        // Live id gone in w2 even though the archive still shows it.
        assert_eq!(report.per_domain[&dk("a.sk")].ids_deleted.len(), 1);
    }

    #[test]
    fn dissolved_network_detected() {
        let w1 = wave(
            "w1",
            vec![
                obs("p.sk", "UA-9999999", Provenance::Live),
                obs("q.sk", "UA-9999999", Provenance::Live),
            ],
        );
        let w2 = wave(
            "w2",
            vec![obs("p.sk", "UA-1212121", Provenance::Live)],
        );
        let report = diff_waves(&w1, &w2);
        assert_eq!(report.networks_dissolved, vec!["p.sk".to_string()]);
    }

    #[test]
    fn conservation_of_domains() {
        let w = wave(
            "w",
            vec![
                obs("a.sk", "UA-1111111", Provenance::Live),
                obs("b.sk", "UA-1111111", Provenance::Live),
                obs("c.sk", "UA-2222222", Provenance::Live),
            ],
        );
        let g = build_graph(&w);
        let nets = project_networks(&g);
        let in_networks: usize = nets.iter().map(|n| n.dimension).sum();
        let singletons = g.domains.len() - nets.iter().map(|n| n.members.len()).sum::<usize>();
        assert_eq!(in_networks + singletons, g.domains.len());
    }
}

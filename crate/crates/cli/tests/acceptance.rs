//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines, or let the ordinary test verdict speak.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use chrono::Utc;
use linkhound_core::extract::{extract_ids, hits_to_observations, ExtractorConfig};
use linkhound_core::graph::{build_graph, network_stats, project_networks, SdConvention};
use linkhound_core::model::{normalize_id, IdPolicy, Observation, Provenance, ScanWave, SeedEntry, SeedStatus};
use linkhound_core::registrable_domain;
use linkhound_core::store::Store;
use linkhound_core::testserver::{CannedResponse, FixtureServer};
use rand::{Rng, SeedableRng};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn linkhound(args: &[&str]) -> (bool, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_linkhound"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs");
    (
        output.status.success(),
        String::from_utf8_lossy(&output.stdout).to_string(),
        String::from_utf8_lossy(&output.stderr).to_string(),
    )
}

fn obs(domain: &str, id: &str, provenance: Provenance) -> Observation {
    Observation {
        domain: registrable_domain(domain).unwrap(),
        id: normalize_id(id).unwrap(),
        observed_at: "2021-04-20T10:00:00Z".parse().unwrap(),
        provenance,
        source_url: format!("https://{domain}/"),
        blob_hash: None,
    }
}

fn seed(domain: &str, wave: &str, status: SeedStatus) -> SeedEntry {
    SeedEntry {
        domain: registrable_domain(domain).unwrap(),
        status,
        category: None,
        wave: wave.to_string(),
    }
}

/// Criterion 1: on the bundled 20-page corpus with hand-written ground
/// truth, extracted identity sets match the annotations exactly, within 5 s.
#[test]
fn acceptance_1_extraction_accuracy() {
    #[derive(serde::Deserialize)]
    struct Entry {
        file: String,
        url: String,
        expected: Vec<String>,
    }
    let manifest: Vec<Entry> =
        serde_json::from_str(&std::fs::read_to_string(fixture("corpus/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.len(), 20, "corpus must hold 20 pages");

    let config = ExtractorConfig::default();
    let started = Instant::now();
    let mut false_positives = Vec::new();
    let mut false_negatives = Vec::new();
    for entry in &manifest {
        let body = std::fs::read(fixture("corpus").join(&entry.file)).unwrap();
        let domain = registrable_domain(&entry.url).unwrap();
        let hits = extract_ids(&body, &entry.url, &config);
        let outcome =
            hits_to_observations(&hits, &domain, &Provenance::Live, Utc::now(), None, &IdPolicy::default());
        let got: BTreeSet<String> = outcome.observations.iter().map(|o| o.id.canonical()).collect();
        let want: BTreeSet<String> = entry.expected.iter().cloned().collect();
        for id in got.difference(&want) {
            false_positives.push(format!("{}: {id}", entry.file));
        }
        for id in want.difference(&got) {
            false_negatives.push(format!("{}: {id}", entry.file));
        }
    }
    let elapsed = started.elapsed();
    assert!(false_positives.is_empty(), "false positives: {false_positives:?}");
    assert!(false_negatives.is_empty(), "false negatives: {false_negatives:?}");
    assert!(elapsed.as_secs_f64() < 5.0, "corpus scan took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS: extraction accuracy on 20-page corpus — 0 false positives, 0 false negatives in {elapsed:?}"
    );
}

/// Criterion 2: pipeline accounting over the wave seed fixtures prints
/// exactly 144 = 46+21+74+3 and 205 = 65+51+87+2.
#[test]
fn acceptance_2_pipeline_accounting() {
    let tmp = tempfile::tempdir().unwrap();
    let store = tmp.path().join("store");
    let store_arg = store.to_string_lossy().to_string();

    let seeds_2019 = fixture("seeds/wave2019.csv");
    let (ok, stdout, stderr) = linkhound(&[
        "--store", &store_arg, "--offline", "scan",
        "--seeds", seeds_2019.to_str().unwrap(), "--wave", "w2019",
    ]);
    assert!(ok, "scan w2019 failed: {stderr}");
    assert!(stdout.contains("144 = 46 + 21 + 74 + 3"), "missing 2019 equation in:\n{stdout}");

    let seeds_2021 = fixture("seeds/wave2021.csv");
    let (ok, stdout, stderr) = linkhound(&[
        "--store", &store_arg, "--offline", "scan",
        "--seeds", seeds_2021.to_str().unwrap(), "--wave", "w2021",
    ]);
    assert!(ok, "scan w2021 failed: {stderr}");
    assert!(stdout.contains("205 = 65 + 51 + 87 + 2"), "missing 2021 equation in:\n{stdout}");

    println!("ACCEPTANCE 2 PASS: pipeline accounting 144 = 46 + 21 + 74 + 3 and 205 = 65 + 51 + 87 + 2, exact");
}

/// Criterion 3: the published data deposit is not obtainable in this
/// offline environment, so the planted-truth substitute applies: plant 11
/// components with a chosen size multiset, recover the dimensions exactly,
/// and match mean/sd against closed-form values within 1e-9. The multiset is
/// chosen so the published table's figures (n=11, 2–9, mean 3.636,
/// sd 1.919) are also reproduced within ±0.001 — under the population
/// convention.
#[test]
fn acceptance_3_network_statistics() {
    let sizes: [usize; 11] = [2, 2, 2, 2, 3, 4, 4, 4, 4, 4, 9];
    let mut wave = ScanWave::new("planted", Utc::now());
    for (k, &size) in sizes.iter().enumerate() {
        // Chain topology: domain j and j+1 share id j, exercising transitive
        // linking rather than a single hub id.
        for j in 0..size - 1 {
            let id = format!("UA-{}", 90_000_000 + k * 1000 + j);
            wave.observations.push(obs(&format!("c{k:02}d{j:02}.sk", ), &id, Provenance::Live));
            wave.observations.push(obs(&format!("c{k:02}d{:02}.sk", j + 1), &id, Provenance::Live));
        }
    }
    wave.finished_at = Some(Utc::now());

    let networks = project_networks(&build_graph(&wave));
    let mut recovered: Vec<usize> = networks.iter().map(|n| n.dimension).collect();
    recovered.sort();
    let mut planted = sizes.to_vec();
    planted.sort();
    assert_eq!(recovered, planted, "recovered dimensions differ from planted");

    // Closed form through the sum/sum-of-squares route, independent of the
    // implementation's two-pass computation.
    let n = sizes.len() as f64;
    let s1: usize = sizes.iter().sum();
    let s2: usize = sizes.iter().map(|s| s * s).sum();
    let mean = s1 as f64 / n;
    let var_pop = s2 as f64 / n - mean * mean;
    let sd_pop = var_pop.sqrt();
    let var_samp = (s2 as f64 - (s1 * s1) as f64 / n) / (n - 1.0);
    let sd_samp = var_samp.sqrt();

    let stats_samp = network_stats(&networks, SdConvention::Sample);
    let stats_pop = network_stats(&networks, SdConvention::Population);
    assert_eq!((stats_samp.n, stats_samp.min, stats_samp.max), (11, 2, 9));
    assert!((stats_samp.mean - mean).abs() < 1e-9, "mean {} vs {}", stats_samp.mean, mean);
    assert!((stats_samp.sd - sd_samp).abs() < 1e-9, "sample sd {} vs {}", stats_samp.sd, sd_samp);
    assert!((stats_pop.sd - sd_pop).abs() < 1e-9, "population sd {} vs {}", stats_pop.sd, sd_pop);

    // Published-table agreement for this multiset.
    assert!((stats_samp.mean - 3.636).abs() <= 0.001, "mean {} vs published 3.636", stats_samp.mean);
    assert!(
        (stats_pop.sd - 1.919).abs() <= 0.001,
        "population sd {} vs published 1.919",
        stats_pop.sd
    );

    println!(
        "ACCEPTANCE 3 PASS: planted 11 components recovered exactly; mean {:.6}/sd(sample) {:.6}/sd(population) {:.6} \
         match closed form within 1e-9; mean within 0.001 of 3.636 and population sd within 0.001 of 1.919",
        stats_samp.mean, stats_samp.sd, stats_pop.sd
    );
}

/// Criterion 4: for 1000 random instances (≤100 domains, ≤30 ids),
/// projection equals the brute-force transitive closure of pairwise
/// shared-id linking, exactly, in under 60 s.
#[test]
fn acceptance_4_oracle_equivalence() {
    fn oracle(edges: &[(u16, u16)]) -> BTreeSet<BTreeSet<u16>> {
        let mut masks: BTreeMap<u16, u32> = BTreeMap::new();
        for &(d, i) in edges {
            *masks.entry(d).or_default() |= 1u32 << i;
        }
        let domains: Vec<u16> = masks.keys().copied().collect();
        let mut adj: BTreeMap<u16, Vec<u16>> = BTreeMap::new();
        for (x, &a) in domains.iter().enumerate() {
            for &b in &domains[x + 1..] {
                if masks[&a] & masks[&b] != 0 {
                    adj.entry(a).or_default().push(b);
                    adj.entry(b).or_default().push(a);
                }
            }
        }
        let mut seen = BTreeSet::new();
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
                component.insert(d);
                if let Some(next) = adj.get(&d) {
                    queue.extend(next.iter().copied());
                }
            }
            if component.len() >= 2 {
                components.insert(component);
            }
        }
        components
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1174c0de);
    let started = Instant::now();
    for case in 0..1000 {
        let n_domains = rng.gen_range(2..=100u16);
        let n_ids = rng.gen_range(1..=30u16);
        let n_edges = rng.gen_range(0..=200usize);
        let edges: Vec<(u16, u16)> =
            (0..n_edges).map(|_| (rng.gen_range(0..n_domains), rng.gen_range(0..n_ids))).collect();

        let mut wave = ScanWave::new("rand", Utc::now());
        for &(d, i) in &edges {
            wave.observations.push(obs(
                &format!("r{d:03}.sk"),
                &format!("UA-{}", 80_000_000 + i as u32),
                Provenance::Live,
            ));
        }
        let projected: BTreeSet<BTreeSet<u16>> = project_networks(&build_graph(&wave))
            .into_iter()
            .map(|net| {
                net.members
                    .iter()
                    .map(|m| m.registrable().trim_start_matches('r').trim_end_matches(".sk").parse::<u16>().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(projected, oracle(&edges), "divergence on case {case} with {n_edges} edges");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "oracle sweep took {elapsed:?}");
    println!("ACCEPTANCE 4 PASS: 1000 random instances equal brute-force closure exactly in {elapsed:?}");
}

/// Criterion 5: a linking id that exists only in a 2019-dated archived
/// snapshot. The live-only scan yields 0 networks; scan+history yields
/// exactly 1 network containing the dissociated pair.
#[tokio::test(flavor = "multi_thread")]
async fn acceptance_5_history_function_value() {
    let server = FixtureServer::start();
    // Live state: zrusene.sk carries nothing, partnerske.sk still carries the id.
    server.route(
        "/",
        CannedResponse::html("<html><body><p>Nový web bez meracích kódov. Vitajte u nás.</p></body></html>"),
    );
    let live_partner = r#"<html><head><script>ga('create','UA-55667788-1','auto');</script></head>
        <body><p>Partnerský web stále meria návštevnosť.</p></body></html>"#;

    // Route by Host header is not supported; distinguish by path for the
    // partner domain root via redirect-free distinct paths is not possible
    // either, so serve the partner body for partnerske.sk through its own
    // pinned port: a second fixture server.
    let partner_server = FixtureServer::start();
    partner_server.route("/", CannedResponse::html(live_partner));

    // Archive fixture: one 2019 capture of zrusene.sk carrying the id.
    let archive = FixtureServer::start();
    archive.route(
        "/cdx/search/cdx?url=zrusene.sk",
        CannedResponse::json(
            r#"[["urlkey","timestamp","original","mimetype","statuscode","digest","length"],
               ["sk,zrusene)/","20190315090000","http://zrusene.sk/","text/html","200","DHIST","4096"]]"#,
        ),
    );
    archive.route(
        "/cdx/search/cdx?url=partnerske.sk",
        CannedResponse::json("[]"),
    );
    archive.route(
        "/web/20190315090000id_/http://zrusene.sk/",
        CannedResponse::html(
            r#"<html><head><script>ga('create','UA-55667788-9','auto');</script></head>
               <body><p>Starý vzhľad webu z roku 2019.</p></body></html>"#,
        ),
    );

    let tmp = tempfile::tempdir().unwrap();
    let store = tmp.path().join("store");
    let seeds = tmp.path().join("seeds.csv");
    std::fs::write(&seeds, "domain,category,override_status\nzrusene.sk,,active\npartnerske.sk,,active\n").unwrap();
    let config_path = tmp.path().join("config.toml");
    std::fs::write(
        &config_path,
        format!(
            r#"
[fetch]
https_first = false
per_host_min_delay_ms = 0
backoff_base_ms = 1
timeout_secs = 5
resolve = ["zrusene.sk={live}", "partnerske.sk={partner}"]

[archive]
endpoint = "http://{archive}"
"#,
            live = server.addr(),
            partner = partner_server.addr(),
            archive = archive.addr(),
        ),
    )
    .unwrap();
    let store_arg = store.to_string_lossy().to_string();
    let config_arg = config_path.to_string_lossy().to_string();

    let (ok, _, stderr) = linkhound(&[
        "--config", &config_arg, "--store", &store_arg, "scan",
        "--seeds", seeds.to_str().unwrap(), "--wave", "hist",
    ]);
    assert!(ok, "scan failed: {stderr}");

    let (ok, stdout, stderr) = linkhound(&["--config", &config_arg, "--store", &store_arg, "link", "--wave", "hist",
        "--out", tmp.path().join("out1").to_str().unwrap()]);
    assert!(ok, "link failed: {stderr}");
    assert!(stdout.contains("0 networks"), "live-only scan must yield 0 networks:\n{stdout}");

    let (ok, _, stderr) = linkhound(&[
        "--config", &config_arg, "--store", &store_arg, "history",
        "--wave", "hist", "--from", "2019", "--to", "2019",
    ]);
    assert!(ok, "history failed: {stderr}");

    let (ok, stdout, stderr) = linkhound(&["--config", &config_arg, "--store", &store_arg, "link", "--wave", "hist",
        "--out", tmp.path().join("out2").to_str().unwrap()]);
    assert!(ok, "link after history failed: {stderr}");
    assert!(stdout.contains("1 networks"), "history must reveal exactly 1 network:\n{stdout}");
    assert!(
        stdout.contains("partnerske.sk") && stdout.contains("zrusene.sk"),
        "network must contain the dissociated pair:\n{stdout}"
    );

    println!("ACCEPTANCE 5 PASS: live-only 0 networks; scan+history exactly 1 network {{partnerske.sk, zrusene.sk}}");
}

/// Criterion 6: constructed waves encoding one AdSense deletion, one
/// Analytics deletion, three id-type additions and one new network come back
/// with exactly those counts.
#[test]
fn acceptance_6_diff_correctness() {
    let tmp = tempfile::tempdir().unwrap();
    let store = Store::open(tmp.path().join("store")).unwrap();

    let mut w1 = ScanWave::new("d2019", "2019-04-01T00:00:00Z".parse().unwrap());
    let mut w2 = ScanWave::new("d2021", "2021-04-01T00:00:00Z".parse().unwrap());
    for w in [&mut w1, &mut w2] {
        for d in ["adzmazane.sk", "gazmazane.sk", "pribudol1.sk", "pribudol2.sk", "pribudol3.sk"] {
            let name = w.name.clone();
            w.seeds.push(seed(d, &name, SeedStatus::Active));
        }
    }
    // One AdSense deletion.
    w1.observations.push(obs("adzmazane.sk", "UA-11110001", Provenance::Live));
    w1.observations.push(obs("adzmazane.sk", "pub-1111000111110001", Provenance::Live));
    w2.observations.push(obs("adzmazane.sk", "UA-11110001", Provenance::Live));
    // One Analytics deletion.
    w1.observations.push(obs("gazmazane.sk", "UA-22220002", Provenance::Live));
    w1.observations.push(obs("gazmazane.sk", "pub-2222000222220002", Provenance::Live));
    w2.observations.push(obs("gazmazane.sk", "pub-2222000222220002", Provenance::Live));
    // Three sites adding a new id type to the one they already used.
    for (i, d) in ["pribudol1.sk", "pribudol2.sk", "pribudol3.sk"].iter().enumerate() {
        let ua = format!("UA-3333000{i}");
        let pub_id = format!("pub-33330003333000{i}3");
        w1.observations.push(obs(d, &ua, Provenance::Live));
        w2.observations.push(obs(d, &ua, Provenance::Live));
        w2.observations.push(obs(d, &pub_id, Provenance::Live));
    }
    // A network present only in the second wave.
    w2.observations.push(obs("novy1.sk", "UA-24461628", Provenance::Live));
    w2.observations.push(obs("novy2.sk", "UA-24461628", Provenance::Live));

    w1.finished_at = Some("2019-05-01T00:00:00Z".parse().unwrap());
    w2.finished_at = Some("2021-05-01T00:00:00Z".parse().unwrap());
    store.write_wave(&w1).unwrap();
    store.write_wave(&w2).unwrap();

    // Library route.
    let report = linkhound_core::graph::diff_waves(&w1, &w2);
    assert_eq!(report.deletions_of_kind(linkhound_core::IdKind::AdsensePub), 1);
    assert_eq!(report.deletions_of_kind(linkhound_core::IdKind::GaUa), 1);
    assert_eq!(report.kind_additions(), 3);
    assert_eq!(report.networks_new.len(), 1);
    assert!(report.networks_new[0].linking_ids.iter().any(|id| id.canonical() == "UA-24461628"));
    assert!(report.networks_dissolved.is_empty());

    // Command route.
    let out = tmp.path().join("out");
    let store_arg = tmp.path().join("store").to_string_lossy().to_string();
    let (ok, stdout, stderr) = linkhound(&[
        "--store", &store_arg, "--offline", "diff",
        "--wave-a", "d2019", "--wave-b", "d2021", "--out", out.to_str().unwrap(),
    ]);
    assert!(ok, "diff failed: {stderr}");
    assert!(stdout.contains("id deletions: 1 adsense, 1 analytics"), "stdout:\n{stdout}");
    assert!(stdout.contains("domains adding a new id type: 3"), "stdout:\n{stdout}");
    assert!(stdout.contains("networks new: 1"), "stdout:\n{stdout}");
    let changes = std::fs::read_to_string(out.join("d2019-vs-d2021.changes.csv")).unwrap();
    assert!(changes.contains("network_new,novy1.sk"));

    println!(
        "ACCEPTANCE 6 PASS: diff reports 1 AdSense deletion, 1 Analytics deletion, 3 id-type additions, 1 new network (UA-24461628)"
    );
}

/// Criterion 7: two offline report runs from the same store produce
/// byte-identical GEXF/CSV/stats outputs with a pinned export timestamp.
#[test]
fn acceptance_7_determinism_offline() {
    let tmp = tempfile::tempdir().unwrap();
    let store = Store::open(tmp.path().join("store")).unwrap();
    let mut wave = ScanWave::new("repro", "2021-04-01T00:00:00Z".parse().unwrap());
    let wave_entries = [
        ("alfa.sk", "UA-44440001"),
        ("beta.sk", "UA-44440001"),
        ("beta.sk", "pub-4444000144440001"),
        ("gama.sk", "pub-4444000144440001"),
        ("osamely.sk", "UA-55550005"),
    ];
    for (d, id) in wave_entries {
        wave.seeds.push(seed(d, "repro", SeedStatus::Active));
        wave.observations.push(obs(d, id, Provenance::Live));
    }
    wave.seeds.dedup_by(|a, b| a.domain == b.domain);
    wave.finished_at = Some("2021-04-02T00:00:00Z".parse().unwrap());
    store.write_wave(&wave).unwrap();

    let store_arg = tmp.path().join("store").to_string_lossy().to_string();
    let run = |out: &Path| {
        let out_arg = out.to_string_lossy().to_string();
        let (ok, _, stderr) = linkhound(&["--store", &store_arg, "--offline", "stats", "--wave", "repro", "--out", &out_arg]);
        assert!(ok, "stats failed: {stderr}");
        let (ok, _, stderr) = linkhound(&[
            "--store", &store_arg, "--offline", "export", "--wave", "repro",
            "--format", "gexf", "--timestamp", "2021-04-20",
            "--out", &format!("{out_arg}/repro.gexf"),
        ]);
        assert!(ok, "export failed: {stderr}");
        let (ok, _, stderr) = linkhound(&[
            "--store", &store_arg, "--offline", "export", "--wave", "repro",
            "--format", "csv-edges", "--out", &format!("{out_arg}/repro.csv"),
        ]);
        assert!(ok, "csv export failed: {stderr}");
    };
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");
    run(&out1);
    run(&out2);

    let mut compared = 0;
    for file in ["repro.gexf", "repro.csv", "repro.stats.json", "repro.stats.csv", "repro.networks.csv", "repro.coverage.csv", "repro.categories.csv"] {
        let a = std::fs::read(out1.join(file)).unwrap_or_else(|_| panic!("{file} missing in run1"));
        let b = std::fs::read(out2.join(file)).unwrap_or_else(|_| panic!("{file} missing in run2"));
        assert_eq!(a, b, "{file} differs between offline runs");
        compared += 1;
    }
    println!("ACCEPTANCE 7 PASS: {compared} offline report files byte-identical across two runs");
}

/// Criterion 8: coverage percentages — 44/65 is exactly 67.69%; 39/46 is
/// 84.78% with the reference-figure deviation surfaced in the report rather
/// than silently matched.
#[test]
fn acceptance_8_coverage_percentages() {
    let tmp = tempfile::tempdir().unwrap();
    let store = Store::open(tmp.path().join("store")).unwrap();

    let build_wave = |name: &str, active: usize, with_id: usize| {
        let mut wave = ScanWave::new(name, "2021-04-01T00:00:00Z".parse().unwrap());
        for i in 0..active {
            let domain = format!("pokryty-{i:03}.sk");
            wave.seeds.push(seed(&domain, name, SeedStatus::Active));
            if i < with_id {
                wave.observations.push(obs(&domain, &format!("UA-{}", 60_000_000 + i), Provenance::Live));
            }
        }
        wave.finished_at = Some("2021-04-02T00:00:00Z".parse().unwrap());
        wave
    };
    store.write_wave(&build_wave("c2021", 65, 44)).unwrap();
    store.write_wave(&build_wave("c2019", 46, 39)).unwrap();

    let store_arg = tmp.path().join("store").to_string_lossy().to_string();
    let out = tmp.path().join("out").to_string_lossy().to_string();

    let (ok, stdout, stderr) = linkhound(&["--store", &store_arg, "--offline", "stats", "--wave", "c2021", "--out", &out]);
    assert!(ok, "stats c2021 failed: {stderr}");
    assert!(stdout.contains("44/65 active seeds carry a tracking id = 67.69%"), "stdout:\n{stdout}");

    let (ok, stdout, stderr) = linkhound(&[
        "--store", &store_arg, "--offline", "stats", "--wave", "c2019",
        "--out", &out, "--reference-coverage", "84.79",
    ]);
    assert!(ok, "stats c2019 failed: {stderr}");
    assert!(stdout.contains("39/46 active seeds carry a tracking id = 84.78%"), "stdout:\n{stdout}");
    assert!(
        stdout.contains("differs from the published reference 84.79%"),
        "deviation note missing:\n{stdout}"
    );
    let coverage_csv = std::fs::read_to_string(Path::new(&out).join("c2019.coverage.csv")).unwrap();
    assert!(coverage_csv.contains("84.78"), "csv:\n{coverage_csv}");
    assert!(coverage_csv.contains("differs from the published reference"), "csv note missing:\n{coverage_csv}");

    println!(
        "ACCEPTANCE 8 PASS: coverage 44/65 = 67.69% exact; 39/46 = 84.78% with the reference deviation surfaced"
    );
}

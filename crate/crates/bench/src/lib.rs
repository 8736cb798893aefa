//! Shared generators for the pipeline benchmarks.

use linkhound_core::model::{normalize_id, Observation, Provenance, ScanWave};
use linkhound_core::registrable_domain;

/// A page body resembling a busy news front page: boilerplate, one analytics
/// snippet, one ad snippet, and enough filler to make scanning do real work.
pub fn synthetic_page(filler_paragraphs: usize) -> Vec<u8> {
    let mut body = String::with_capacity(filler_paragraphs * 220 + 2048);
    body.push_str("<!DOCTYPE html><html><head><title>Denník</title>\n");
    body.push_str("<script>ga('create', 'UA-31415926-1', 'auto'); ga('send', 'pageview');</script>\n");
    body.push_str("<script async src=\"https://pagead2.googlesyndication.com/pagead/js/adsbygoogle.js?client=ca-pub-2718281828459045\"></script>\n");
    body.push_str("</head><body>\n");
    for i in 0..filler_paragraphs {
        body.push_str(&format!(
            "<div class=\"clanok\" id=\"c{i}\"><h2>Titulok {i}</h2><p>Obsah článku číslo {i}: \
             mestské zastupiteľstvo, počasie, šport a kultúra. Objednávka 99{i:06} nie je kód.</p></div>\n"
        ));
    }
    body.push_str("</body></html>\n");
    body.into_bytes()
}

/// A wave with `domains` domains spread over `ids` ids, deterministic.
pub fn synthetic_wave(domains: usize, ids: usize, edges_per_domain: usize) -> ScanWave {
    let mut wave = ScanWave::new("bench", chrono::Utc::now());
    for d in 0..domains {
        for e in 0..edges_per_domain {
            let id = (d * 31 + e * 17) % ids;
            wave.observations.push(Observation {
                domain: registrable_domain(&format!("bench-{d:04}.sk")).unwrap(),
                id: normalize_id(&format!("UA-{}", 10_000_000 + id)).unwrap(),
                observed_at: chrono::Utc::now(),
                provenance: Provenance::Live,
                source_url: "bench".into(),
                blob_hash: None,
            });
        }
    }
    wave.finished_at = Some(chrono::Utc::now());
    wave
}

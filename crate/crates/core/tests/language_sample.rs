//! Validates the language heuristic on the bundled labeled Czech/Slovak
//! sample before the pipeline relies on it: every page must be classified
//! correctly, and every Czech page must clear the discard-confidence
//! threshold a Slovak-targeted run uses.

use linkhound_core::lang::LanguageDetector;

const DISCARD_THRESHOLD: f64 = 0.7;

fn fixture_pages(prefix: &str) -> Vec<(String, String)> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/lang");
    let mut pages: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            name.starts_with(prefix).then(|| (name, std::fs::read_to_string(&path).unwrap()))
        })
        .collect();
    pages.sort();
    pages
}

#[test]
fn twenty_page_sample_exists() {
    assert_eq!(fixture_pages("sk_").len(), 10);
    assert_eq!(fixture_pages("cs_").len(), 10);
}

#[test]
fn slovak_pages_classified_slovak() {
    let detector = LanguageDetector::builtin();
    for (name, html) in fixture_pages("sk_") {
        let detection = detector.detect_html(&html).unwrap_or_else(|| panic!("{name}: no detection"));
        assert_eq!(detection.lang, "sk", "{name} classified as {}", detection.lang);
    }
}

#[test]
fn czech_pages_classified_czech_above_discard_threshold() {
    let detector = LanguageDetector::builtin();
    for (name, html) in fixture_pages("cs_") {
        let detection = detector.detect_html(&html).unwrap_or_else(|| panic!("{name}: no detection"));
        assert_eq!(detection.lang, "cs", "{name} classified as {}", detection.lang);
        assert!(
            detection.confidence >= DISCARD_THRESHOLD,
            "{name}: confidence {:.3} below discard threshold",
            detection.confidence
        );
    }
}


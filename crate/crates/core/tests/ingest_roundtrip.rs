use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use citnet_core::ingest::{self, match_citations, parse_wos_str, write_wos, MatchOptions};
use citnet_core::synth::{self, corpus};

#[test]
fn ten_thousand_records_survive_a_write_parse_round_trip() {
    let corpus = corpus::matching_corpus(10_000, 4);
    let text = write_wos(&corpus.records);
    let parsed = parse_wos_str(&text).unwrap();
    assert!(parsed.skipped.is_empty());
    assert_eq!(parsed.records.len(), corpus.records.len());
    for (a, b) in parsed.records.iter().zip(&corpus.records) {
        let mut a = a.clone();
        a.span = b.span;
        assert_eq!(&a, b);
    }
    // Spans cover consecutive, non-overlapping line ranges.
    assert!(parsed.records.windows(2).all(|w| w[0].span.last < w[1].span.first));
}

#[test]
fn matching_does_not_depend_on_record_order() {
    let corpus = corpus::matching_corpus(1500, 8);
    let base = match_citations(&corpus.records, &MatchOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let mut shuffled = corpus.records.clone();
        shuffled.shuffle(&mut rng);
        let other = match_citations(&shuffled, &MatchOptions::default()).unwrap();
        assert_eq!(other.edges, base.edges);
        assert_eq!(other.publications, base.publications);
        assert_eq!(other.report, base.report);
    }
}

#[test]
fn loading_an_export_builds_the_matched_network() {
    let corpus = corpus::matching_corpus(800, 6);
    let load = ingest::load_wos(&write_wos(&corpus.records), &MatchOptions::default()).unwrap();
    let net = &load.build.network;
    let edges: BTreeSet<(String, String)> = net.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let matched: BTreeSet<(String, String)> = load.matching.edges.iter().cloned().collect();
    assert!(edges.is_subset(&matched));
    assert_eq!(edges.len() + load.build.dropped.len(), matched.len());
    assert!(edges.is_subset(&corpus.truth));
}

#[test]
fn pair_files_round_trip_a_network() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let net = synth::random_network(500, 0.02, &mut rng);
    let (pubs, cites) = ingest::pairs::write_network(&net);
    let again = ingest::load_pairs(&pubs, &cites).unwrap();
    assert!(again.dropped.is_empty());
    assert_eq!(again.network.publications(), net.publications());
    assert_eq!(again.network.edges().collect::<Vec<_>>(), net.edges().collect::<Vec<_>>());
}

proptest! {
    #[test]
    fn cited_reference_fields_are_recovered(
        last in "[A-Z][a-z]{1,8}",
        initials in "[A-Z]{1,2}",
        year in 1900i32..2030,
        volume in 1u32..400,
        page in 1u32..2000,
        doi_suffix in "[a-z0-9]{4,10}",
    ) {
        let raw = format!("{last} {initials}, {year}, J TEST, V{volume}, P{page}, DOI 10.1000/{doi_suffix}");
        let r = ingest::parse_cited_reference(&raw);
        let expected_doi = format!("10.1000/{doi_suffix}");
        prop_assert_eq!(r.year, Some(year));
        prop_assert_eq!(r.volume.clone(), Some(volume.to_string()));
        prop_assert_eq!(r.page.clone(), Some(page.to_string()));
        prop_assert_eq!(r.doi.as_deref(), Some(expected_doi.as_str()));
        let key = r.tuple_key().unwrap();
        prop_assert_eq!(key.0, format!("{} {}", last.to_uppercase(), &initials[..1]));
    }
}

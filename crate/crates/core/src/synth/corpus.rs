//! Tagged-export corpus with known citation links, for checking citation
//! matching end to end.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::RawRecord;

/// Id an incomplete-record publication for Kuhn's book receives.
pub const BOOK_ID: &str = "KUHN T|1962||";
pub const BOOK_REFERENCE: &str = "Kuhn TS, 1962, STRUCTURE SCI REVOLUT";
pub const BOOK_CITERS: usize = 12;

pub struct MatchingCorpus {
    pub records: Vec<RawRecord>,
    /// Every true (citing, cited) link, ambiguous ones included.
    pub truth: BTreeSet<(String, String)>,
    /// True links whose only reference is deliberately ambiguous.
    pub ambiguous_links: BTreeSet<(String, String)>,
    pub ambiguous_references: usize,
    /// Links whose reference can only be resolved correctly through its DOI.
    pub doi_precedence: BTreeSet<(String, String)>,
    /// Links that exist only through a DOI-carrying reference whose 4-tuple
    /// points at another record.
    pub conflicting_tuples: BTreeSet<(String, String)>,
}

struct Rec {
    ut: String,
    last: String,
    initials: String,
    year: i32,
    volume: u32,
    page: u32,
    doi: Option<String>,
    twin: bool,
}

const SYLLABLES: [&str; 24] = [
    "ka", "lo", "mi", "ren", "sa", "tor", "vel", "qui", "dan", "bre", "hol", "mun", "pe", "rix", "sel", "tam", "ur", "vo",
    "wen", "xa", "yor", "zem", "bal", "cor",
];
const JOURNALS: [&str; 6] = ["SCIENTOMETRICS", "J INFORMETR", "RES POLICY", "J AM SOC INF SCI TEC", "J DOC", "INFORM PROCESS MANAG"];

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn name(rng: &mut ChaCha8Rng) -> String {
    let k = rng.gen_range(2..=3);
    capitalized(&(0..k).map(|_| *SYLLABLES.choose(rng).unwrap()).collect::<String>())
}

fn initials(rng: &mut ChaCha8Rng) -> String {
    let k = rng.gen_range(1..=2);
    (0..k).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect()
}

/// Author as a cited reference might spell it: case and punctuation vary.
fn noisy_author(rec: &Rec, rng: &mut ChaCha8Rng) -> String {
    let first = &rec.initials[..1];
    match rng.gen_range(0..5) {
        0 => format!("{} {}", rec.last, rec.initials),
        1 => format!("{} {}", rec.last.to_uppercase(), first),
        2 => format!("{} {}.", rec.last, first),
        3 => format!("{} {}", rec.last.to_lowercase(), first.to_lowercase()),
        _ => format!("{}  {}", rec.last, rec.initials.to_lowercase()),
    }
}

fn noisy_doi(doi: &str, rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..4) {
        0 => doi.to_uppercase(),
        1 => format!("https://doi.org/{doi}"),
        _ => doi.to_string(),
    }
}

fn reference(author: &str, rec: &Rec, doi: Option<String>) -> String {
    let mut r = format!("{author}, {}, {}, V{}, P{}", rec.year, JOURNALS[rec.page as usize % JOURNALS.len()], rec.volume, rec.page);
    if let Some(doi) = doi {
        r.push_str(", DOI ");
        r.push_str(&doi);
    }
    r
}

pub fn matching_corpus(n: usize, seed: u64) -> MatchingCorpus {
    assert!(n >= 100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let twins: HashSet<usize> = (0..20).map(|k| 50 + k * (n - 100) / 20).collect();
    let mut recs: Vec<Rec> = Vec::with_capacity(n);
    let mut tuples = HashSet::new();
    for i in 0..n {
        let year = 1975 + (i * 38 / n) as i32;
        let rec = if twins.contains(&i) {
            // Same first author, year, volume and page as its predecessor.
            let prev = &mut recs[i - 1];
            prev.doi = None;
            prev.twin = true;
            Rec {
                ut: format!("WOS:{i:09}"),
                last: prev.last.clone(),
                initials: prev.initials.clone(),
                year: prev.year,
                volume: prev.volume,
                page: prev.page,
                doi: None,
                twin: true,
            }
        } else {
            loop {
                let rec = Rec {
                    ut: format!("WOS:{i:09}"),
                    last: name(&mut rng),
                    initials: initials(&mut rng),
                    year,
                    volume: rng.gen_range(1..400),
                    page: rng.gen_range(1..10000),
                    doi: rng.gen_bool(0.6).then(|| format!("10.{}/art.{i}", 1000 + rng.gen_range(0..50))),
                    twin: false,
                };
                let key = (rec.last.to_uppercase(), rec.initials[..1].to_string(), rec.year, rec.volume, rec.page);
                if tuples.insert(key) {
                    break rec;
                }
            }
        };
        recs.push(rec);
    }

    let mut corpus = MatchingCorpus {
        records: Vec::with_capacity(n),
        truth: BTreeSet::new(),
        ambiguous_links: BTreeSet::new(),
        ambiguous_references: 0,
        doi_precedence: BTreeSet::new(),
        conflicting_tuples: BTreeSet::new(),
    };
    let book_citers: HashSet<usize> = (0..BOOK_CITERS).map(|k| n / 3 + k * 7).collect();
    let rare_citers: HashSet<usize> = (0..9).map(|k| n / 2 + k * 5).collect();

    for i in 0..n {
        let rec = &recs[i];
        let mut refs = Vec::new();
        // Records the citing record must not be linked to by accident.
        let mut avoid = HashSet::new();
        let k = if i < 30 { 0 } else { rng.gen_range(0..=14) };
        let mut cited: Vec<usize> = (0..k).map(|_| rng.gen_range(0..i)).collect();
        cited.sort_unstable();
        cited.dedup();
        // Make sure every twin gets cited.
        if twins.contains(&(i.saturating_sub(40))) && i >= 40 {
            cited.push(i - 40);
        }
        for &c in &cited {
            let target = &recs[c];
            // Twins share a year, so a citer must not be a twin partner.
            if recs[i].twin && target.twin && target.year == recs[i].year {
                continue;
            }
            let link = (rec.ut.clone(), target.ut.clone());
            if target.twin {
                refs.push(reference(&noisy_author(target, &mut rng), target, None));
                corpus.ambiguous_references += 1;
                corpus.ambiguous_links.insert(link.clone());
            } else if let Some(doi) = &target.doi {
                let roll: f64 = rng.gen();
                if roll < 0.15 {
                    // Misspelled author: only the DOI can resolve it.
                    let author = format!("{}x {}", target.last, &target.initials[..1]);
                    refs.push(reference(&author, target, Some(noisy_doi(doi, &mut rng))));
                    corpus.doi_precedence.insert(link.clone());
                } else if roll < 0.18 && c > 0 {
                    // 4-tuple of another record, DOI of the target.
                    let other = (0..c).rev().find(|&o| !recs[o].twin && !cited.contains(&o));
                    match other {
                        Some(o) => {
                            let decoy = &recs[o];
                            refs.push(reference(&noisy_author(decoy, &mut rng), decoy, Some(noisy_doi(doi, &mut rng))));
                            avoid.insert(o);
                            corpus.doi_precedence.insert(link.clone());
                            corpus.conflicting_tuples.insert(link.clone());
                        }
                        None => refs.push(reference(&noisy_author(target, &mut rng), target, Some(doi.clone()))),
                    }
                } else if roll < 0.6 {
                    refs.push(reference(&noisy_author(target, &mut rng), target, Some(noisy_doi(doi, &mut rng))));
                } else {
                    refs.push(reference(&noisy_author(target, &mut rng), target, None));
                }
            } else {
                refs.push(reference(&noisy_author(target, &mut rng), target, None));
            }
            // Cite some targets twice with different spellings.
            if rng.gen_bool(0.05) && !target.twin {
                refs.push(reference(&noisy_author(target, &mut rng), target, None));
            }
            corpus.truth.insert(link);
        }
        // Decoys must not be cited for real by this record.
        debug_assert!(cited.iter().all(|c| !avoid.contains(c)));
        if book_citers.contains(&i) {
            refs.push(BOOK_REFERENCE.to_string());
            corpus.truth.insert((rec.ut.clone(), BOOK_ID.to_string()));
        }
        if rare_citers.contains(&i) {
            refs.push("Price DJD, 1963, LITTLE SCI BIG SCI".to_string());
        }
        if rng.gen_bool(0.3) {
            refs.push(format!("Ghost{} A, {}, J NOWHERE, V{}, P{}", i, 1950 + i % 40, i % 90 + 1, i));
        }
        if rng.gen_bool(0.05) {
            refs.push("[Anonymous], 1999, ANN REP".to_string());
        }
        refs.shuffle(&mut rng);

        let mut authors = vec![format!("{}, {}", rec.last, rec.initials)];
        for _ in 0..rng.gen_range(0..3) {
            authors.push(format!("{}, {}", name(&mut rng), initials(&mut rng)));
        }
        corpus.records.push(RawRecord {
            authors,
            title: Some(format!("Study {i} of {} indicators", name(&mut rng).to_lowercase())),
            source: Some(JOURNALS[i % JOURNALS.len()].to_string()),
            year: Some(rec.year),
            volume: Some(rec.volume.to_string()),
            begin_page: Some(rec.page.to_string()),
            doi: rec.doi.clone().map(|d| if i % 3 == 0 { d.to_uppercase() } else { d }),
            times_cited: Some(rng.gen_range(0..500)),
            accession: Some(rec.ut.clone()),
            cited_references: refs,
            span: Default::default(),
        });
    }
    corpus.records.shuffle(&mut rng);
    corpus
}

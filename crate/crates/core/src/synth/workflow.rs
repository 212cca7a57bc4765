//! A literature-search fixture: a title search with false positives, a
//! connected topical core, heavily cited older work, and newer citing work,
//! each next to near misses that a threshold must exclude.

use std::collections::BTreeSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{build_network, CitationNetwork, Publication};

pub const SEARCH_PATTERNS: [&str; 2] = ["*communit* detect*", "*detect* communit*"];
pub const PREDECESSOR_MIN: usize = 10;
pub const SUCCESSOR_MIN: usize = 4;

const CORE: usize = 106;
const FALSE_POSITIVES: usize = 7;
const PREDECESSORS: usize = 33;
const NEAR_PREDECESSORS: usize = 20;
const REMOVED: usize = 6;
const SUCCESSORS: usize = 439;
const NEAR_SUCCESSORS: usize = 60;
const BACKGROUND: usize = 400;

/// Expected members after each step of the pipeline, as sorted ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkflowManifest {
    pub search_hits: Vec<String>,
    pub largest_component: Vec<String>,
    pub with_predecessors: Vec<String>,
    pub removals: Vec<String>,
    pub after_removals: Vec<String>,
    pub with_successors: Vec<String>,
}

pub struct WorkflowFixture {
    pub network: CitationNetwork,
    pub manifest: WorkflowManifest,
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}

fn sorted(sets: &[&[String]]) -> Vec<String> {
    let all: BTreeSet<&String> = sets.iter().flat_map(|s| s.iter()).collect();
    all.into_iter().cloned().collect()
}

pub fn workflow_fixture(seed: u64) -> WorkflowFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = ids("c", CORE);
    let fp = ids("f", FALSE_POSITIVES);
    let pred = ids("p", PREDECESSORS);
    let near_pred = ids("q", NEAR_PREDECESSORS);
    let succ = ids("s", SUCCESSORS);
    let near_succ = ids("t", NEAR_SUCCESSORS);
    let background = ids("b", BACKGROUND);

    let topics = ["social networks", "graphs", "biological networks", "citation data", "the web", "brain networks"];
    let mut pubs = Vec::new();
    let mut add = |id: &str, year: i32, title: String| pubs.push(Publication::new(id, format!("Writer{} A", id.len() + year as usize % 7), year).with_title(title));

    for (i, id) in core.iter().enumerate() {
        let topic = topics[i % topics.len()];
        let title = match i % 3 {
            0 => format!("Community detection in {topic}"),
            1 => format!("Overlapping communities and their detection in {topic}"),
            _ => format!("A benchmark for community detection algorithms on {topic}"),
        };
        add(id, 2000 + (i * 13 / CORE) as i32, title);
    }
    for (i, id) in fp.iter().enumerate() {
        add(id, 2005 + i as i32, format!("Detection of novel sequences in microbial communities {i}"));
    }
    for (i, id) in pred.iter().chain(&near_pred).enumerate() {
        add(id, 1960 + (i % 40) as i32, format!("Statistical mechanics of complex systems {i}"));
    }
    for (i, id) in succ.iter().chain(&near_succ).enumerate() {
        add(id, 2013 + (i % 3) as i32, format!("Network clustering applied to case {i}"));
    }
    for (i, id) in background.iter().enumerate() {
        add(id, 1980 + (i * 36 / BACKGROUND) as i32, format!("Random graph models {i}"));
    }

    let mut edges: Vec<(String, String)> = Vec::new();
    let mut cite = |a: &String, b: &String| edges.push((a.clone(), b.clone()));

    // Connected core: a random tree plus extra backward links.
    for i in 1..CORE {
        cite(&core[i], &core[rng.gen_range(0..i)]);
    }
    for _ in 0..150 {
        let i = rng.gen_range(1..CORE);
        cite(&core[i], &core[rng.gen_range(0..i)]);
    }
    // Each background publication is cited by at most 5 core publications.
    let mut background_hits = vec![0usize; BACKGROUND];
    for c in &core {
        let b = rng.gen_range(0..BACKGROUND);
        if background_hits[b] < 5 && rng.gen_bool(0.6) {
            background_hits[b] += 1;
            cite(c, &background[b]);
        }
    }
    // False positives only touch each other and the near-miss predecessors.
    cite(&fp[1], &fp[0]);
    cite(&fp[3], &fp[2]);
    for q in &near_pred {
        for f in index::sample(&mut rng, FALSE_POSITIVES, 3) {
            cite(&fp[f], q);
        }
    }
    for p in &pred {
        let k = rng.gen_range(PREDECESSOR_MIN..=20);
        for c in index::sample(&mut rng, CORE, k) {
            cite(&core[c], p);
        }
    }
    for q in &near_pred {
        for c in index::sample(&mut rng, CORE, PREDECESSOR_MIN - 1) {
            cite(&core[c], q);
        }
    }

    let mut shuffled = pred.clone();
    shuffled.shuffle(&mut rng);
    let mut removals: Vec<String> = shuffled[..REMOVED].to_vec();
    removals.sort();
    let kept_pred: Vec<String> = pred.iter().filter(|p| !removals.contains(p)).cloned().collect();
    let after_removals = sorted(&[&core, &kept_pred]);

    for s in &succ {
        let k = rng.gen_range(SUCCESSOR_MIN..=8);
        for m in index::sample(&mut rng, after_removals.len(), k) {
            cite(s, &after_removals[m]);
        }
        if rng.gen_bool(0.3) {
            cite(s, &removals[rng.gen_range(0..REMOVED)]);
        }
        cite(s, &background[rng.gen_range(0..BACKGROUND)]);
    }
    // Near misses would pass the threshold only if removed publications counted.
    for t in &near_succ {
        for m in index::sample(&mut rng, after_removals.len(), SUCCESSOR_MIN - 1) {
            cite(t, &after_removals[m]);
        }
        let extra = rng.gen_range(1..=2);
        for r in index::sample(&mut rng, REMOVED, extra) {
            cite(t, &removals[r]);
        }
    }
    for i in 1..BACKGROUND {
        for _ in 0..2 {
            cite(&background[i], &background[rng.gen_range(0..i)]);
        }
    }

    let outcome = build_network(pubs, &edges).expect("fixture is well formed");
    let manifest = WorkflowManifest {
        search_hits: sorted(&[&core, &fp]),
        largest_component: sorted(&[&core]),
        with_predecessors: sorted(&[&core, &pred]),
        removals,
        with_successors: sorted(&[&after_removals, &succ]),
        after_removals,
    };
    WorkflowFixture { network: outcome.network, manifest }
}

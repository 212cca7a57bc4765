//! Large citation networks with realistic locality: publications belong to
//! research fields and mostly cite recent work from their own field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::Publication;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub publications: usize,
    /// Target edge count; the generated count is close to it.
    pub citations: usize,
    pub fields: usize,
    /// Same-field citations pick among this many most recent field members.
    pub recent_window: usize,
    pub cross_field_share: f64,
    /// Cross-field citations pick among this many most recent publications.
    pub cross_window: usize,
    pub first_year: i32,
    pub years: usize,
}

impl ScaleParams {
    pub fn new(publications: usize, citations: usize) -> Self {
        ScaleParams {
            publications,
            citations,
            fields: 20,
            recent_window: 100,
            cross_field_share: 0.05,
            cross_window: 2000,
            first_year: 1990,
            years: 30,
        }
    }
}

/// Publications in index order are in time order; edges run from newer to
/// older indices and are unique.
pub struct ScaleNetwork {
    pub publications: Vec<Publication>,
    pub edges: Vec<(u32, u32)>,
}

pub fn scale_network(params: &ScaleParams, seed: u64) -> ScaleNetwork {
    let n = params.publications;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = params.fields.max(1);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); fields];
    let mut publications = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(params.citations + params.citations / 20);
    let mut targets: Vec<u32> = Vec::new();
    for i in 0..n {
        let year = params.first_year + (i * params.years / n) as i32;
        publications.push(Publication {
            id: format!("s{i:07}"),
            first_author: format!("Author{} A", i % 997),
            co_authors: Vec::new(),
            title: String::new(),
            source: String::new(),
            year,
            doi: None,
            external_citations: None,
            complete_record: true,
        });
        let field = rng.gen_range(0..fields);
        let own = &members[field];
        // Spread the remaining edge budget over the remaining publications.
        let left = params.citations.saturating_sub(edges.len());
        let degree = match i {
            0 => 0,
            _ if i + 1 == n => left.min(i),
            _ => rng.gen_range(0..=(2 * left).div_ceil(n - i)).min(i),
        };
        targets.clear();
        let mut attempts = 0;
        while targets.len() < degree && attempts < 8 * degree {
            attempts += 1;
            let t = if !own.is_empty() && !rng.gen_bool(params.cross_field_share) {
                let lo = own.len().saturating_sub(params.recent_window);
                own[rng.gen_range(lo..own.len())]
            } else {
                let lo = i.saturating_sub(params.cross_window);
                rng.gen_range(lo..i) as u32
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        targets.sort_unstable();
        edges.extend(targets.iter().map(|&t| (i as u32, t)));
        members[field].push(i as u32);
    }
    ScaleNetwork { publications, edges }
}

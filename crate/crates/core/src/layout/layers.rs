//! Vertical placement: years stacked oldest first, each split into as few
//! layers as the same-year citations and the per-layer capacity allow.

use std::collections::BTreeMap;

use crate::graph::Digraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    /// Layer per node; 0 is the topmost (oldest) layer.
    pub layer: Vec<u32>,
    /// Publication year of each layer.
    pub layer_years: Vec<i32>,
}

impl Layering {
    pub fn layer_count(&self) -> usize {
        self.layer_years.len()
    }

    pub fn occupancy(&self) -> Vec<usize> {
        let mut counts = vec![0; self.layer_count()];
        for &l in &self.layer {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// Assigns layers to the nodes of `graph` (citing -> cited, acyclic), with
/// `years[v]` the year of node `v`.
///
/// Within a year a publication sits one level below the deepest same-year
/// publication it cites. Each level is then cut into chunks of at most
/// `max_per_layer` nodes, keeping node order.
pub fn assign_layers(graph: &Digraph, years: &[i32], max_per_layer: usize) -> Layering {
    assert_eq!(graph.node_count(), years.len());
    let max_per_layer = max_per_layer.max(1);
    let n = years.len();

    let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (v, &y) in years.iter().enumerate() {
        by_year.entry(y).or_default().push(v);
    }

    let mut level = vec![0usize; n];
    let mut layer = vec![0u32; n];
    let mut layer_years = Vec::new();
    for (&year, nodes) in &by_year {
        // Longest-path levels; process nodes so that cited ones come first.
        for v in same_year_order(graph, years, nodes) {
            level[v] = graph
                .out_neighbors(v)
                .iter()
                .filter(|&&u| years[u as usize] == year)
                .map(|&u| level[u as usize] + 1)
                .max()
                .unwrap_or(0);
        }
        let depth = nodes.iter().map(|&v| level[v]).max().unwrap_or(0);
        for d in 0..=depth {
            let at_level: Vec<usize> = nodes.iter().copied().filter(|&v| level[v] == d).collect();
            for chunk in at_level.chunks(max_per_layer) {
                let index = layer_years.len() as u32;
                layer_years.push(year);
                for &v in chunk {
                    layer[v] = index;
                }
            }
        }
    }
    Layering { layer, layer_years }
}

/// Nodes of one year ordered so that every same-year cited node precedes
/// the nodes citing it.
fn same_year_order(graph: &Digraph, years: &[i32], nodes: &[usize]) -> Vec<usize> {
    let year = years[nodes[0]];
    let mut pending: BTreeMap<usize, usize> = nodes
        .iter()
        .map(|&v| {
            let deps = graph.out_neighbors(v).iter().filter(|&&u| years[u as usize] == year).count();
            (v, deps)
        })
        .collect();
    let mut ready: Vec<usize> = pending.iter().filter(|&(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(v) = ready.pop() {
        order.push(v);
        for &c in graph.in_neighbors(v) {
            if let Some(d) = pending.get_mut(&(c as usize)) {
                *d -= 1;
                if *d == 0 {
                    ready.push(c as usize);
                }
            }
        }
    }
    assert_eq!(order.len(), nodes.len(), "same-year citations must be acyclic");
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unrelated_same_year_publications_share_a_layer() {
        let l = assign_layers(&Digraph::empty(3), &[2000; 3], 10);
        assert_eq!(l.layer, vec![0, 0, 0]);
        assert_eq!(l.layer_years, vec![2000]);
    }

    #[test]
    fn capacity_splits_a_year() {
        let l = assign_layers(&Digraph::empty(12), &[2000; 12], 10);
        assert_eq!(l.occupancy(), vec![10, 2]);
    }

    #[test]
    fn same_year_chain_is_stacked() {
        // a=0 cites b=1 cites c=2, all in one year: c on top, then b, then a.
        let g = Digraph::from_edges(3, &[(0, 1), (1, 2)]);
        let l = assign_layers(&g, &[2000; 3], 10);
        assert_eq!(l.layer, vec![2, 1, 0]);
    }

    #[test]
    fn years_are_stacked_oldest_first() {
        let g = Digraph::from_edges(3, &[(0, 2)]);
        let l = assign_layers(&g, &[2005, 1990, 2001], 10);
        assert_eq!(l.layer, vec![2, 0, 1]);
        assert_eq!(l.layer_years, vec![1990, 2001, 2005]);
    }
}

//! Automorphism groups of colored graphs by color refinement and
//! individualization.
//!
//! The search tree branches on the vertices of one target cell per level.
//! Every discrete leaf is compared with the first leaf found; the induced
//! bijection is kept if it preserves all colors and adjacencies. Subtrees
//! whose cell-size traces differ from the reference path cannot contain an
//! automorphic image of the reference leaf and are skipped.

use std::collections::BTreeSet;

use crate::coloring::LabeledGraph;
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationSet};
use crate::tolerance::SearchLimits;

/// Adjacency lists carrying edge colors: `adj[v] = [(u, color of uv)]`.
fn colored_adjacency(lg: &LabeledGraph) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); lg.graph.n()];
    for (e, &(i, j)) in lg.graph.edges().iter().enumerate() {
        let c = lg.coloring.edge_color(e);
        adj[i].push((j, c));
        adj[j].push((i, c));
    }
    adj
}

/// Iterates 1-dimensional refinement until the number of classes stops
/// growing. New class ids are ranks of the sorted signatures, so the result
/// depends on the colored graph only up to isomorphism.
fn refine(adj: &[Vec<(usize, usize)>], mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(usize, Vec<(usize, usize)>)> = adj
            .iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut s: Vec<(usize, usize)> = nbrs.iter().map(|&(u, ec)| (ec, colors[u])).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<(usize, usize)>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        colors = signatures
            .iter()
            .map(|s| distinct.binary_search(&s).expect("signature is present"))
            .collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// The stable refinement of the vertex coloring of `lg`.
pub fn color_refinement(lg: &LabeledGraph) -> Vec<usize> {
    let adj = colored_adjacency(lg);
    let (initial, _) = dense(lg.coloring.vertex_colors());
    refine(&adj, initial)
}

fn dense(colors: &[usize]) -> (Vec<usize>, usize) {
    let distinct: Vec<usize> = colors.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    (
        colors.iter().map(|c| distinct.binary_search(c).expect("present")).collect(),
        distinct.len(),
    )
}

/// Whether `p` maps `lg` onto itself, colors included.
pub fn is_colored_automorphism(lg: &LabeledGraph, p: &Permutation) -> bool {
    let c = &lg.coloring;
    if p.len() != lg.graph.n() {
        return false;
    }
    (0..p.len()).all(|i| c.vertex_color(p.apply(i)) == c.vertex_color(i))
        && lg.graph.edges().iter().enumerate().all(|(e, &(i, j))| {
            lg.graph
                .edge_index(p.apply(i), p.apply(j))
                .is_some_and(|f| c.edge_color(f) == c.edge_color(e))
        })
}

struct Search<'a> {
    lg: &'a LabeledGraph,
    adj: Vec<Vec<(usize, usize)>>,
    limit: usize,
    reference: Option<Vec<usize>>,
    reference_traces: Vec<Vec<usize>>,
    found: BTreeSet<Permutation>,
}

fn cell_sizes(colors: &[usize]) -> Vec<usize> {
    let mut sizes = vec![0; colors.iter().max().map_or(0, |m| m + 1)];
    for &c in colors {
        sizes[c] += 1;
    }
    sizes
}

impl Search<'_> {
    fn visit(&mut self, colors: Vec<usize>, depth: usize) -> Result<()> {
        let colors = refine(&self.adj, colors);
        let trace = cell_sizes(&colors);
        if self.reference.is_none() {
            self.reference_traces.push(trace.clone());
        } else if self.reference_traces.get(depth) != Some(&trace) {
            return Ok(());
        }
        if trace.len() == colors.len() {
            return self.leaf(&colors);
        }
        let target = trace
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 1)
            .min_by_key(|(c, &s)| (s, *c))
            .map(|(c, _)| c)
            .expect("a non-discrete coloring has a non-singleton cell");
        let cell: Vec<usize> = (0..colors.len()).filter(|&v| colors[v] == target).collect();
        for &v in &cell {
            let child: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if c == target && u != v { 2 * c + 1 } else { 2 * c })
                .collect();
            self.visit(child, depth + 1)?;
        }
        Ok(())
    }

    fn leaf(&mut self, colors: &[usize]) -> Result<()> {
        // in a discrete coloring, class k holds exactly one vertex
        let mut order = vec![0; colors.len()];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let Some(reference) = &self.reference else {
            self.reference = Some(order);
            self.found.insert(Permutation::identity(colors.len()));
            return Ok(());
        };
        let mut images = vec![0; colors.len()];
        for (k, &r) in reference.iter().enumerate() {
            images[r] = order[k];
        }
        let p = Permutation::from_images(images).expect("leaf orders are bijections");
        if is_colored_automorphism(self.lg, &p) {
            self.found.insert(p);
            if self.found.len() > self.limit {
                return Err(Error::LimitExceeded { limit: self.limit });
            }
        }
        Ok(())
    }
}

/// All automorphisms of a colored graph, sorted lexicographically.
pub fn automorphisms(lg: &LabeledGraph, limits: &SearchLimits) -> Result<PermutationSet> {
    let n = lg.graph.n();
    if n > limits.max_vertices {
        return Err(Error::GraphTooLarge {
            n,
            bound: limits.max_vertices,
        });
    }
    if n == 0 {
        return Err(Error::DomainMismatch("graph has no vertices".into()));
    }
    let mut search = Search {
        lg,
        adj: colored_adjacency(lg),
        limit: limits.max_group_order,
        reference: None,
        reference_traces: Vec::new(),
        found: BTreeSet::new(),
    };
    let (initial, _) = dense(lg.coloring.vertex_colors());
    search.visit(initial, 0)?;
    Ok(PermutationSet::from_group_unchecked(search.found.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::Coloring;
    use crate::graph::EdgeGraph;
    use itertools::Itertools;

    fn brute_force(lg: &LabeledGraph) -> Vec<Permutation> {
        (0..lg.graph.n())
            .permutations(lg.graph.n())
            .map(|p| Permutation::from_images(p).unwrap())
            .filter(|p| is_colored_automorphism(lg, p))
            .collect()
    }

    fn cycle(n: usize) -> EdgeGraph {
        EdgeGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn uncolored_small_graphs() {
        let limits = SearchLimits::default();
        let c4 = LabeledGraph::uncolored(cycle(4));
        assert_eq!(automorphisms(&c4, &limits).unwrap().order(), 8);
        let k5 = LabeledGraph::uncolored(EdgeGraph::complete(5));
        assert_eq!(automorphisms(&k5, &limits).unwrap().order(), 120);
        let path = LabeledGraph::uncolored(EdgeGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert_eq!(automorphisms(&path, &limits).unwrap().order(), 2);
        let k44 = EdgeGraph::new(8, (0..4).cartesian_product(4..8));
        assert_eq!(automorphisms(&LabeledGraph::uncolored(k44), &limits).unwrap().order(), 1152);
    }

    #[test]
    fn refinement_classes_on_path() {
        let path = LabeledGraph::uncolored(EdgeGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]));
        let colors = color_refinement(&path);
        assert_eq!(colors[0], colors[4]);
        assert_eq!(colors[1], colors[3]);
        assert_eq!(count_classes(&colors), 3);
        // regular graphs do not refine
        let c6 = LabeledGraph::uncolored(cycle(6));
        assert_eq!(count_classes(&color_refinement(&c6)), 1);
    }

    #[test]
    fn colored_rectangle() {
        // long sides 0-1 and 2-3 colored differently from short sides
        let g = cycle(4);
        let edge_colors: Vec<usize> = g.edges().iter().map(|&(i, j)| usize::from(i + j == 1 || i + j == 5)).collect();
        let lg = LabeledGraph::new(g.clone(), Coloring::from_labels(&g, &[0; 4], &edge_colors).unwrap()).unwrap();
        let group = automorphisms(&lg, &SearchLimits::default()).unwrap();
        assert_eq!(group.order(), 4);
        assert_eq!(group.elements(), brute_force(&lg).as_slice());
    }

    #[test]
    fn regular_graphs_where_refinement_is_useless() {
        let limits = SearchLimits::default();
        // two triangles versus a hexagon: both 2-regular on six vertices
        let two_triangles = EdgeGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        for g in [two_triangles, cycle(6), cycle(7)] {
            let lg = LabeledGraph::uncolored(g);
            let group = automorphisms(&lg, &limits).unwrap();
            assert_eq!(group.elements(), brute_force(&lg).as_slice());
            PermutationSet::new(group.elements().iter().cloned()).unwrap();
        }
    }

    #[test]
    fn limits_are_enforced() {
        let k5 = LabeledGraph::uncolored(EdgeGraph::complete(5));
        let tight = SearchLimits {
            max_vertices: 64,
            max_group_order: 100,
        };
        assert!(matches!(automorphisms(&k5, &tight), Err(Error::LimitExceeded { limit: 100 })));
        let small = SearchLimits {
            max_vertices: 4,
            max_group_order: 100,
        };
        assert!(matches!(automorphisms(&k5, &small), Err(Error::GraphTooLarge { n: 5, bound: 4 })));
    }
}

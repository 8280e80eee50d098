//! Vertex-and-edge colorings of a graph as discrete class partitions.
//!
//! Real-valued colorings are quantized with a gap rule. Vertex and edge
//! classes live in separate namespaces, so a vertex class never equals an
//! edge class even when their numeric representatives coincide.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::izmestiev::IzmestievMatrix;
use crate::perm::{orbits, PermutationSet};
use crate::polytope::Polytope;
use crate::reconstruct::pseudo_inverse;

/// Classes produced by quantizing one list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantized {
    pub labels: Vec<usize>,
    /// Mean value of each class, ascending.
    pub representatives: Vec<f64>,
    /// Smallest distance between neighbouring classes, if there are two.
    pub min_gap: Option<f64>,
}

/// Sorts the values and starts a new class wherever consecutive values
/// differ by more than `eps · max(1, max|value|)`. Classes are numbered by
/// ascending value. Chains of sub-threshold steps stay in one class.
pub fn quantize_values(values: &[f64], eps: f64) -> Quantized {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let threshold = eps * values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut labels = vec![0; values.len()];
    let mut sums: Vec<(f64, usize)> = Vec::new();
    let mut min_gap: Option<f64> = None;
    let mut prev: Option<f64> = None;
    for &i in &order {
        let v = values[i];
        match prev {
            Some(p) if v - p <= threshold => {}
            Some(p) => {
                min_gap = Some(min_gap.map_or(v - p, |g| g.min(v - p)));
                sums.push((0.0, 0));
            }
            None => sums.push((0.0, 0)),
        }
        let last = sums.last_mut().expect("class opened above");
        last.0 += v;
        last.1 += 1;
        labels[i] = sums.len() - 1;
        prev = Some(v);
    }
    Quantized {
        labels,
        representatives: sums.iter().map(|(s, c)| s / *c as f64).collect(),
        min_gap,
    }
}

/// A total coloring of the vertices and edges of a fixed graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    n: usize,
    edges: Vec<(usize, usize)>,
    vertex: Vec<usize>,
    edge: Vec<usize>,
    /// Numeric value(s) behind each class; empty for symbolic colorings.
    vertex_reps: Vec<Vec<f64>>,
    edge_reps: Vec<Vec<f64>>,
    vertex_gap: Option<f64>,
    edge_gap: Option<f64>,
}

/// Relabel so that classes are `0..k`, numbered in order of `key`.
fn densify<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, Vec<K>) {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    let labels = keys
        .iter()
        .map(|k| distinct.binary_search(k).expect("key is present"))
        .collect();
    (labels, distinct)
}

impl Coloring {
    /// Symbolic coloring from arbitrary integer labels, renumbered densely in
    /// ascending label order.
    pub fn from_labels(graph: &EdgeGraph, vertex: &[usize], edge: &[usize]) -> Result<Self> {
        if vertex.len() != graph.n() || edge.len() != graph.edges().len() {
            return Err(Error::DomainMismatch(format!(
                "labels cover {} vertices and {} edges, graph has {} and {}",
                vertex.len(),
                edge.len(),
                graph.n(),
                graph.edges().len()
            )));
        }
        let (vertex, vkeys) = densify(vertex);
        let (edge, ekeys) = densify(edge);
        Ok(Coloring {
            n: graph.n(),
            edges: graph.edges().to_vec(),
            vertex,
            edge,
            vertex_reps: vec![Vec::new(); vkeys.len()],
            edge_reps: vec![Vec::new(); ekeys.len()],
            vertex_gap: None,
            edge_gap: None,
        })
    }

    /// Every vertex in one class, every edge in one class.
    pub fn uniform(graph: &EdgeGraph) -> Self {
        Self::from_labels(graph, &vec![0; graph.n()], &vec![0; graph.edges().len()])
            .expect("lengths match the graph")
    }

    /// Quantized real coloring.
    pub fn from_values(graph: &EdgeGraph, vertex_values: &[f64], edge_values: &[f64], eps: f64) -> Result<Self> {
        if vertex_values.len() != graph.n() || edge_values.len() != graph.edges().len() {
            return Err(Error::DomainMismatch("value lists do not match the graph".into()));
        }
        let qv = quantize_values(vertex_values, eps);
        let qe = quantize_values(edge_values, eps);
        Ok(Coloring {
            n: graph.n(),
            edges: graph.edges().to_vec(),
            vertex: qv.labels,
            edge: qe.labels,
            vertex_reps: qv.representatives.into_iter().map(|r| vec![r]).collect(),
            edge_reps: qe.representatives.into_iter().map(|r| vec![r]).collect(),
            vertex_gap: qv.min_gap,
            edge_gap: qe.min_gap,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_color(&self, i: usize) -> usize {
        self.vertex[i]
    }

    /// Color of the `e`-th edge of the underlying graph.
    pub fn edge_color(&self, e: usize) -> usize {
        self.edge[e]
    }

    pub fn vertex_colors(&self) -> &[usize] {
        &self.vertex
    }

    pub fn edge_colors(&self) -> &[usize] {
        &self.edge
    }

    pub fn vertex_class_count(&self) -> usize {
        self.vertex_reps.len()
    }

    pub fn edge_class_count(&self) -> usize {
        self.edge_reps.len()
    }

    pub fn vertex_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.vertex_class_count()];
        for (i, &c) in self.vertex.iter().enumerate() {
            classes[c].push(i);
        }
        classes
    }

    pub fn edge_classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut classes = vec![Vec::new(); self.edge_class_count()];
        for (e, &c) in self.edge.iter().enumerate() {
            classes[c].push(self.edges[e]);
        }
        classes
    }

    fn check_same_domain(&self, other: &Coloring) -> Result<()> {
        if self.n != other.n || self.edges != other.edges {
            return Err(Error::DomainMismatch("colorings live on different graphs".into()));
        }
        Ok(())
    }

    /// Colored adjacency matrix with real entries: vertex representatives on
    /// the diagonal, edge representatives on adjacent pairs, zero elsewhere.
    /// Uses the first component of each representative; `None` for symbolic
    /// colorings.
    pub fn real_adjacency(&self) -> Option<DMatrix<f64>> {
        let first = |reps: &[Vec<f64>], c: usize| reps[c].first().copied();
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            a[(i, i)] = first(&self.vertex_reps, self.vertex[i])?;
        }
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let x = first(&self.edge_reps, self.edge[e])?;
            a[(i, j)] = x;
            a[(j, i)] = x;
        }
        Some(a)
    }

    pub fn document(&self) -> ColoringDocument {
        ColoringDocument {
            vertex_classes: self.vertex_classes(),
            edge_classes: self
                .edge_classes()
                .into_iter()
                .map(|c| c.into_iter().map(|(i, j)| [i, j]).collect())
                .collect(),
            representatives: Representatives {
                vertex: self.vertex_reps.clone(),
                edge: self.edge_reps.clone(),
            },
            min_gap: MinGap {
                vertex: self.vertex_gap,
                edge: self.edge_gap,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representatives {
    pub vertex: Vec<Vec<f64>>,
    pub edge: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinGap {
    pub vertex: Option<f64>,
    pub edge: Option<f64>,
}

/// JSON form of a coloring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub vertex_classes: Vec<Vec<usize>>,
    pub edge_classes: Vec<Vec<[usize; 2]>>,
    pub representatives: Representatives,
    pub min_gap: MinGap,
}

/// A graph together with a coloring of exactly its vertices and edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: EdgeGraph,
    pub coloring: Coloring,
}

impl LabeledGraph {
    pub fn new(graph: EdgeGraph, coloring: Coloring) -> Result<Self> {
        if coloring.n != graph.n() || coloring.edges != graph.edges() {
            return Err(Error::DomainMismatch("coloring does not match the graph".into()));
        }
        Ok(LabeledGraph { graph, coloring })
    }

    pub fn uncolored(graph: EdgeGraph) -> Self {
        let coloring = Coloring::uniform(&graph);
        LabeledGraph { graph, coloring }
    }

    /// Graphviz rendering with a fixed palette indexed by class id.
    pub fn to_dot(&self, name: &str) -> String {
        const PALETTE: [&str; 12] = [
            "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
            "#bcbd22", "#17becf", "#393b79", "#637939",
        ];
        let ident: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        let mut out = format!("graph {ident} {{\n  node [style=filled, shape=circle];\n  edge [penwidth=3];\n");
        for i in 0..self.graph.n() {
            let c = self.coloring.vertex_color(i);
            let _ = writeln!(out, "  {i} [fillcolor=\"{}\", class={c}];", PALETTE[c % PALETTE.len()]);
        }
        for (e, &(i, j)) in self.graph.edges().iter().enumerate() {
            let c = self.coloring.edge_color(e);
            let _ = writeln!(out, "  {i} -- {j} [color=\"{}\", class={c}];", PALETTE[c % PALETTE.len()]);
        }
        out.push_str("}\n");
        out
    }
}

/// `m(i) = ‖v_i‖²`, `m(ij) = ⟨v_i, v_j⟩`.
pub fn metric_coloring(p: &Polytope, graph: &EdgeGraph, eps: f64) -> Result<Coloring> {
    let v = p.vertices();
    let vertex: Vec<f64> = v.iter().map(|x| x.norm_squared()).collect();
    let edge: Vec<f64> = graph.edges().iter().map(|&(i, j)| v[i].dot(&v[j])).collect();
    Coloring::from_values(graph, &vertex, &edge, eps)
}

/// Diagonal entries of `M` color vertices, edge entries color edges.
pub fn izmestiev_coloring(m: &IzmestievMatrix, eps: f64) -> Result<Coloring> {
    let vertex: Vec<f64> = (0..m.n()).map(|i| m.entries[(i, i)]).collect();
    let edge: Vec<f64> = m.graph.edges().iter().map(|&(i, j)| m.entries[(i, j)]).collect();
    Coloring::from_values(&m.graph, &vertex, &edge, eps)
}

/// Each vertex and edge gets the pair of its colors under `a` and `b`.
pub fn product_coloring(a: &Coloring, b: &Coloring) -> Result<Coloring> {
    a.check_same_domain(b)?;
    let pairs = |x: &[usize], y: &[usize]| -> Vec<(usize, usize)> { x.iter().copied().zip(y.iter().copied()).collect() };
    let (vertex, vkeys) = densify(&pairs(&a.vertex, &b.vertex));
    let (edge, ekeys) = densify(&pairs(&a.edge, &b.edge));
    let join = |ra: &[Vec<f64>], rb: &[Vec<f64>], keys: &[(usize, usize)]| -> Vec<Vec<f64>> {
        keys.iter().map(|&(x, y)| [ra[x].as_slice(), rb[y].as_slice()].concat()).collect()
    };
    Ok(Coloring {
        n: a.n,
        edges: a.edges.clone(),
        vertex_reps: join(&a.vertex_reps, &b.vertex_reps, &vkeys),
        edge_reps: join(&a.edge_reps, &b.edge_reps, &ekeys),
        vertex,
        edge,
        vertex_gap: min_option(a.vertex_gap, b.vertex_gap),
        edge_gap: min_option(a.edge_gap, b.edge_gap),
    })
}

fn min_option(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricVariant {
    /// Gram matrix `ΦᵀΦ`.
    Orthogonal,
    /// Projector `Φ†Φ`.
    Linear,
}

/// The complete graph `K_n` colored by `ΦᵀΦ` or `Φ†Φ`: diagonal entries on
/// vertices, off-diagonal entries on all pairs.
pub fn complete_metric(p: &Polytope, variant: MetricVariant, eps: f64) -> Result<LabeledGraph> {
    let phi = p.phi();
    let gram = match variant {
        MetricVariant::Orthogonal => phi.transpose() * phi,
        MetricVariant::Linear => pseudo_inverse(phi, p.tolerances().pinv)? * phi,
    };
    let graph = EdgeGraph::complete(p.n());
    let vertex: Vec<f64> = (0..p.n()).map(|i| gram[(i, i)]).collect();
    let edge: Vec<f64> = graph.edges().iter().map(|&(i, j)| gram[(i, j)]).collect();
    let coloring = Coloring::from_values(&graph, &vertex, &edge, eps)?;
    LabeledGraph::new(graph, coloring)
}

/// Colors are the orbits of `group` on vertices and on edges. Fails with
/// `NotAGroup` unless `group` acts on `graph` by automorphisms.
pub fn orbit_coloring(graph: &EdgeGraph, group: &PermutationSet) -> Result<Coloring> {
    let o = orbits(group, graph).map_err(|e| Error::NotAGroup(e.to_string()))?;
    Coloring::from_labels(graph, &o.vertex_labels(graph.n()), &o.edge_labels(graph.edges().len()))
}

/// Whether `fine` refines `coarse` on vertices and on edges.
pub fn is_finer(fine: &Coloring, coarse: &Coloring) -> Result<bool> {
    fine.check_same_domain(coarse)?;
    fn refines(a: &[usize], b: &[usize]) -> bool {
        let mut image: BTreeMap<usize, usize> = BTreeMap::new();
        a.iter().zip(b).all(|(&x, &y)| *image.entry(x).or_insert(y) == y)
    }
    Ok(refines(&fine.vertex, &coarse.vertex) && refines(&fine.edge, &coarse.edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::izmestiev::izmestiev_matrix;
    use crate::perm::Permutation;
    use crate::polytope::{edge_graph, enumerate_facets};

    fn setup(v: &[Vec<f64>]) -> (Polytope, EdgeGraph, IzmestievMatrix) {
        let p = Polytope::new(None, v[0].len(), v).unwrap();
        let f = enumerate_facets(&p).unwrap();
        let g = edge_graph(&p, &f);
        let m = izmestiev_matrix(&p, &f, &g).unwrap();
        (p, g, m)
    }

    fn square() -> Vec<Vec<f64>> {
        vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]
    }

    fn rectangle() -> Vec<Vec<f64>> {
        vec![vec![2.0, 1.0], vec![-2.0, 1.0], vec![-2.0, -1.0], vec![2.0, -1.0]]
    }

    #[test]
    fn quantize_gap_rule() {
        let q = quantize_values(&[2.0, 2.0, 2.0 + 1e-13], 1e-9);
        assert_eq!(q.labels, vec![0, 0, 0]);
        assert_eq!(q.min_gap, None);
        let q = quantize_values(&[3.0, -3.0], 1e-9);
        assert_eq!(q.labels, vec![1, 0]);
        assert_eq!(q.representatives, vec![-3.0, 3.0]);
        assert_eq!(q.min_gap, Some(6.0));
        // chaining: 0 and 0.5ε merge, 1.5ε is a full ε past 0.5ε
        let e = 1e-9;
        let q = quantize_values(&[0.0, 0.5 * e, 1.5 * e], e * 0.99);
        assert_eq!(q.labels, vec![0, 0, 1]);
        let q = quantize_values(&[0.0, 0.6 * e, 1.2 * e], e);
        assert_eq!(q.labels, vec![0, 0, 0]);
    }

    #[test]
    fn metric_colorings() {
        let (p, g, _) = setup(&square());
        let c = metric_coloring(&p, &g, 1e-8).unwrap();
        assert_eq!((c.vertex_class_count(), c.edge_class_count()), (1, 1));

        let (p, g, _) = setup(&rectangle());
        let c = metric_coloring(&p, &g, 1e-8).unwrap();
        assert_eq!(c.vertex_class_count(), 1);
        assert_eq!(c.document().representatives.vertex, vec![vec![5.0]]);
        assert_eq!(c.document().representatives.edge, vec![vec![-3.0], vec![3.0]]);

        let hex: Vec<Vec<f64>> = (0..6)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let (p, g, _) = setup(&hex);
        let c = metric_coloring(&p, &g, 1e-8).unwrap();
        assert_eq!((c.vertex_class_count(), c.edge_class_count()), (1, 1));
    }

    #[test]
    fn izmestiev_and_product_on_rectangle() {
        let (p, g, m) = setup(&rectangle());
        let iz = izmestiev_coloring(&m, 1e-8).unwrap();
        assert_eq!((iz.vertex_class_count(), iz.edge_class_count()), (1, 1));
        assert!((iz.document().representatives.edge[0][0] + 0.25).abs() < 1e-12);
        assert!(iz.document().representatives.vertex[0][0].abs() < 1e-12);
        let me = metric_coloring(&p, &g, 1e-8).unwrap();
        let prod = product_coloring(&iz, &me).unwrap();
        assert_eq!((prod.vertex_class_count(), prod.edge_class_count()), (1, 2));
        let reps = prod.document().representatives.edge;
        assert!((reps[0][0] + 0.25).abs() < 1e-12 && reps[0][1] == -3.0);
        assert!((reps[1][0] + 0.25).abs() < 1e-12 && reps[1][1] == 3.0);

        assert!(is_finer(&me, &iz).unwrap());
        assert!(!is_finer(&iz, &me).unwrap());
        assert!(is_finer(&prod, &me).unwrap() && is_finer(&prod, &iz).unwrap());
        assert!(is_finer(&me, &me).unwrap());
    }

    #[test]
    fn product_identities() {
        let (p, g, _) = setup(&rectangle());
        let me = metric_coloring(&p, &g, 1e-8).unwrap();
        let same = product_coloring(&me, &me).unwrap();
        assert_eq!(same.vertex_colors(), me.vertex_colors());
        assert_eq!(same.edge_colors(), me.edge_colors());
        let with_uniform = product_coloring(&me, &Coloring::uniform(&g)).unwrap();
        assert_eq!(with_uniform.edge_colors(), me.edge_colors());
        let other = Coloring::uniform(&EdgeGraph::complete(4));
        assert!(matches!(product_coloring(&me, &other), Err(Error::DomainMismatch(_))));
        assert!(matches!(is_finer(&me, &other), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn izmestiev_coloring_of_cube() {
        let v: Vec<Vec<f64>> = (0..8)
            .map(|m: usize| (0..3).map(|k| if m >> k & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect();
        let (_, _, m) = setup(&v);
        let c = izmestiev_coloring(&m, 1e-8).unwrap();
        let doc = c.document();
        assert_eq!(doc.vertex_classes.len(), 1);
        assert_eq!(doc.edge_classes.len(), 1);
        assert!((doc.representatives.vertex[0][0] - 0.5).abs() < 1e-12);
        assert!((doc.representatives.edge[0][0] + 0.5).abs() < 1e-12);
        // colored adjacency reproduces M
        assert!((c.real_adjacency().unwrap() - &m.entries).amax() < 1e-12);
    }

    #[test]
    fn complete_metric_variants() {
        let (sq, _, _) = setup(&square());
        let o = complete_metric(&sq, MetricVariant::Orthogonal, 1e-8).unwrap();
        assert_eq!(o.coloring.vertex_class_count(), 1);
        assert_eq!(o.coloring.edge_class_count(), 2);
        let l = complete_metric(&sq, MetricVariant::Linear, 1e-8).unwrap();
        assert_eq!(l.coloring.vertex_colors(), o.coloring.vertex_colors());
        assert_eq!(l.coloring.edge_colors(), o.coloring.edge_colors());
        let (rect, _, _) = setup(&rectangle());
        let lr = complete_metric(&rect, MetricVariant::Linear, 1e-8).unwrap();
        assert_eq!(lr.coloring.edge_colors(), l.coloring.edge_colors());
        let or = complete_metric(&rect, MetricVariant::Orthogonal, 1e-8).unwrap();
        assert_eq!(or.coloring.edge_class_count(), 3);
    }

    #[test]
    fn orbit_colorings_on_c4() {
        let g = EdgeGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let klein = PermutationSet::new([
            Permutation::identity(4),
            Permutation::from_cycles(4, &[&[0, 2]]).unwrap(),
            Permutation::from_cycles(4, &[&[1, 3]]).unwrap(),
            Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
        ])
        .unwrap();
        let c = orbit_coloring(&g, &klein).unwrap();
        assert_eq!(c.vertex_classes(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(c.edge_class_count(), 1);
        let c = orbit_coloring(&g, &PermutationSet::trivial(4)).unwrap();
        assert_eq!((c.vertex_class_count(), c.edge_class_count()), (4, 4));
        let rot = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let dihedral = PermutationSet::new((0..4).flat_map(|k| {
            let mut r = Permutation::identity(4);
            for _ in 0..k {
                r = rot.compose(&r);
            }
            let s = Permutation::from_images(vec![0, 3, 2, 1]).unwrap();
            [s.compose(&r), r]
        }))
        .unwrap();
        let c = orbit_coloring(&g, &dihedral).unwrap();
        assert_eq!((c.vertex_class_count(), c.edge_class_count()), (1, 1));
        let not_aut = PermutationSet::new([Permutation::identity(4), Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert!(matches!(orbit_coloring(&g, &not_aut), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn dot_export() {
        let (p, g, _) = setup(&square());
        let lg = LabeledGraph::new(g.clone(), metric_coloring(&p, &g, 1e-8).unwrap()).unwrap();
        let dot = lg.to_dot("square");
        assert!(dot.starts_with("graph square {"));
        assert_eq!(dot.matches("fillcolor=\"#1f77b4\"").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("color=\"#1f77b4\", class=0];").count(), 8);
    }
}

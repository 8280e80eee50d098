//! Permutations of vertex indices and explicitly listed permutation groups.

use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;

/// A permutation of `0..n` stored as its image array, `p[i] = σ(i)`.
///
/// The matrix convention is `Π_σ[σ(j)][j] = 1`, so column `j` of `ΦΠ_σ` is
/// `v_σ(j)` and `(Π_σ x)_i = x_σ⁻¹(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::DomainMismatch(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::DomainMismatch(format!("cycle entry {x} out of range")));
                }
                p[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// The permutation matrix `Π_σ`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, &x) in self.0.iter().enumerate() {
            m[(x, j)] = 1.0;
        }
        m
    }

    /// Whether `σ` maps edges to edges and non-edges to non-edges.
    pub fn is_automorphism_of(&self, graph: &EdgeGraph) -> bool {
        self.len() == graph.n() && graph.edges().iter().all(|&(i, j)| graph.has_edge(self.0[i], self.0[j]))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An explicit finite permutation group, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Permutation>", into = "Vec<Permutation>")]
pub struct PermutationSet {
    elements: Vec<Permutation>,
}

impl PermutationSet {
    /// Verifies identity, closure under composition and inverses.
    pub fn new(elements: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut elements: Vec<Permutation> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        let Some(first) = elements.first() else {
            return Err(Error::NotAGroup("empty set".into()));
        };
        let n = first.len();
        if elements.iter().any(|p| p.len() != n) {
            return Err(Error::NotAGroup("permutations of different degrees".into()));
        }
        if elements.binary_search(&Permutation::identity(n)).is_err() {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        let members: HashSet<&Permutation> = elements.iter().collect();
        for a in &elements {
            if !members.contains(&a.inverse()) {
                return Err(Error::NotAGroup(format!("inverse of {a} missing")));
            }
            for b in &elements {
                let ab = a.compose(b);
                if !members.contains(&ab) {
                    return Err(Error::NotAGroup(format!("{a} ∘ {b} = {ab} missing")));
                }
            }
        }
        Ok(PermutationSet { elements })
    }

    /// Trusts the caller that `elements` form a group; sorts and dedups.
    pub(crate) fn from_group_unchecked(mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        PermutationSet { elements }
    }

    pub fn trivial(n: usize) -> Self {
        PermutationSet {
            elements: vec![Permutation::identity(n)],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subset_of(&self, other: &PermutationSet) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    pub fn intersection(&self, other: &PermutationSet) -> Result<PermutationSet> {
        PermutationSet::new(self.elements.iter().filter(|p| other.contains(p)).cloned())
    }
}

impl TryFrom<Vec<Permutation>> for PermutationSet {
    type Error = Error;

    fn try_from(value: Vec<Permutation>) -> Result<Self> {
        PermutationSet::new(value)
    }
}

impl From<PermutationSet> for Vec<Permutation> {
    fn from(value: PermutationSet) -> Self {
        value.elements
    }
}

/// Orbits of a group on vertices and on edges of a graph it acts on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbits {
    /// Vertex orbits, each ascending, ordered by smallest member.
    pub vertices: Vec<Vec<usize>>,
    /// Edge orbits as indices into `graph.edges()`, same ordering rule.
    pub edges: Vec<Vec<usize>>,
}

impl Orbits {
    pub fn vertex_labels(&self, n: usize) -> Vec<usize> {
        labels(&self.vertices, n)
    }

    pub fn edge_labels(&self, m: usize) -> Vec<usize> {
        labels(&self.edges, m)
    }
}

fn labels(classes: &[Vec<usize>], len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for (c, class) in classes.iter().enumerate() {
        for &x in class {
            out[x] = c;
        }
    }
    out
}

fn orbit_partition(len: usize, images: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; len];
    let mut classes = Vec::new();
    for start in 0..len {
        if label[start] != usize::MAX {
            continue;
        }
        // the group is closed, so the images of one point are its full orbit
        let mut orbit = images(start);
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            label[x] = classes.len();
        }
        classes.push(orbit);
    }
    classes
}

/// Orbits of `group` acting on the vertices and edges of `graph`; the edge
/// `{i, j}` goes to `{σ(i), σ(j)}`.
pub fn orbits(group: &PermutationSet, graph: &EdgeGraph) -> Result<Orbits> {
    if group.degree() != graph.n() {
        return Err(Error::DomainMismatch(format!(
            "group acts on {} points, graph has {} vertices",
            group.degree(),
            graph.n()
        )));
    }
    if let Some(p) = group.elements().iter().find(|p| !p.is_automorphism_of(graph)) {
        return Err(Error::DomainMismatch(format!("{p} is not an automorphism of the graph")));
    }
    let vertices = orbit_partition(graph.n(), |i| group.elements().iter().map(|p| p.apply(i)).collect());
    let edges = orbit_partition(graph.edges().len(), |e| {
        let (i, j) = graph.edges()[e];
        group
            .elements()
            .iter()
            .map(|p| graph.edge_index(p.apply(i), p.apply(j)).expect("automorphism maps edges to edges"))
            .collect()
    });
    Ok(Orbits { vertices, edges })
}

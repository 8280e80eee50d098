//! Brute-force ground truth for symmetry groups.
//!
//! Candidates are filtered by the definition of a symmetry: `σ` is kept when
//! the unique candidate map `T = Φ Π_σ Φ†` sends every `v_j` to `v_σ(j)`
//! (and is orthogonal, for the orthogonal flavor). Nothing here goes through
//! colorings, refinement or the Izmestiev matrix.

use itertools::Itertools;
use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::perm::Permutation;
use crate::polytope::GeometryDocument;
use crate::reconstruct::{Flavor, GroupElement, MatrixGroup};
use crate::tolerance::Tolerances;

/// Largest vertex count for which all of `Sym(V)` may be enumerated.
pub const MAX_SYMMETRIC_DEGREE: usize = 9;

/// A graph mapped into `R^d` with no convexity requirements.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub graph: EdgeGraph,
    /// Point of vertex `j` in column `j`.
    pub coordinates: DMatrix<f64>,
}

impl Embedding {
    pub fn new(graph: EdgeGraph, coordinates: DMatrix<f64>) -> Result<Self> {
        if coordinates.ncols() != graph.n() {
            return Err(Error::DomainMismatch(format!(
                "{} points for {} vertices",
                coordinates.ncols(),
                graph.n()
            )));
        }
        if coordinates.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateGeometry("non-finite coordinate".into()));
        }
        Ok(Embedding { graph, coordinates })
    }

    /// Reads vertices and the required `edges` field of a geometry document.
    pub fn from_document(doc: &GeometryDocument) -> Result<Self> {
        let edges = doc
            .edges
            .as_ref()
            .ok_or_else(|| Error::DomainMismatch("an embedding needs an \"edges\" list".into()))?;
        let n = doc.vertices.len();
        if let Some(v) = doc.vertices.iter().find(|v| v.len() != doc.dimension) {
            return Err(Error::DimensionMismatch(format!(
                "vertex with {} coordinates in dimension {}",
                v.len(),
                doc.dimension
            )));
        }
        if let Some([i, j]) = edges.iter().find(|[i, j]| i == j || *i >= n || *j >= n) {
            return Err(Error::DomainMismatch(format!("invalid edge [{i}, {j}] for {n} vertices")));
        }
        let graph = EdgeGraph::new(n, edges.iter().map(|&[i, j]| (i, j)));
        let coordinates = DMatrix::from_fn(doc.dimension, n, |r, c| doc.vertices[c][r]);
        Self::new(graph, coordinates)
    }

    /// Coordinates expressed in an orthonormal basis of their linear span,
    /// so that the result has full row rank.
    pub fn spanning_coordinates(&self, tol: f64) -> DMatrix<f64> {
        let svd = SVD::new(self.coordinates.clone(), true, false);
        let u = svd.u.expect("left singular vectors requested");
        let top = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > tol * top.max(1.0))
            .collect();
        if keep.len() == self.coordinates.nrows() {
            return self.coordinates.clone();
        }
        let basis = u.select_columns(&keep);
        basis.transpose() * &self.coordinates
    }
}

/// Which permutations to test.
#[derive(Debug, Clone)]
pub enum Candidates {
    /// All of `Sym(V)`, streamed in lexicographic order.
    Symmetric,
    Given(Vec<Permutation>),
}

struct Filter {
    phi: DMatrix<f64>,
    pinv: DMatrix<f64>,
    flavor: Flavor,
    tol: Tolerances,
}

impl Filter {
    fn new(phi: DMatrix<f64>, flavor: Flavor, tol: Tolerances) -> Result<Self> {
        let pinv = phi
            .clone()
            .pseudo_inverse(1e-12 * phi.amax())
            .map_err(|e| Error::DegenerateGeometry(e.to_string()))?;
        let d = phi.nrows();
        if (&phi * &pinv - DMatrix::identity(d, d)).amax() > tol.pinv {
            return Err(Error::RankDeficient);
        }
        Ok(Filter { phi, pinv, flavor, tol })
    }

    fn test(&self, sigma: &Permutation) -> Option<GroupElement> {
        let n = self.phi.ncols();
        let mut pi = DMatrix::zeros(n, n);
        for j in 0..n {
            pi[(sigma.apply(j), j)] = 1.0;
        }
        let t = &self.phi * pi * &self.pinv;
        let image = &t * &self.phi;
        for j in 0..n {
            let target = self.phi.column(sigma.apply(j));
            if (image.column(j) - target).norm() > self.tol.matching * target.norm() {
                return None;
            }
        }
        let d = t.nrows();
        let orthogonal = (t.transpose() * &t - DMatrix::identity(d, d)).amax() <= self.tol.orth;
        if self.flavor == Flavor::Orthogonal && !orthogonal {
            return None;
        }
        Some(GroupElement {
            perm: sigma.clone(),
            matrix: t.row_iter().map(|r| r.iter().copied().collect()).collect(),
            orthogonal,
        })
    }

    fn run(&self, candidates: &Candidates) -> Result<MatrixGroup> {
        let n = self.phi.ncols();
        let mut elements: Vec<GroupElement> = match candidates {
            Candidates::Symmetric => {
                if n > MAX_SYMMETRIC_DEGREE {
                    return Err(Error::TooManyCandidates {
                        n,
                        max: MAX_SYMMETRIC_DEGREE,
                    });
                }
                (0..n)
                    .permutations(n)
                    .filter_map(|p| self.test(&Permutation::from_images(p).expect("a permutation")))
                    .collect()
            }
            Candidates::Given(list) => {
                if let Some(p) = list.iter().find(|p| p.len() != n) {
                    return Err(Error::DomainMismatch(format!("candidate {p} has the wrong degree")));
                }
                list.iter().filter_map(|p| self.test(p)).collect()
            }
        };
        elements.sort_by(|a, b| a.perm.cmp(&b.perm));
        elements.dedup_by(|a, b| a.perm == b.perm);
        Ok(MatrixGroup {
            flavor: self.flavor,
            order: elements.len(),
            elements,
            tolerances: self.tol,
        })
    }
}

/// Symmetries of the point configuration `Φ` among `candidates`.
pub fn brute_force_group(
    phi: &DMatrix<f64>,
    candidates: &Candidates,
    flavor: Flavor,
    tol: &Tolerances,
) -> Result<MatrixGroup> {
    Filter::new(phi.clone(), flavor, *tol)?.run(candidates)
}

/// Geometric symmetries of a graph embedding: candidates that are graph
/// automorphisms and pass the same filter as [`brute_force_group`], applied
/// to the coordinates restricted to their span.
pub fn embedding_group(
    e: &Embedding,
    candidates: &Candidates,
    flavor: Flavor,
    tol: &Tolerances,
) -> Result<MatrixGroup> {
    let filter = Filter::new(e.spanning_coordinates(tol.geom), flavor, *tol)?;
    let mut group = filter.run(candidates)?;
    group.elements.retain(|el| el.perm.is_automorphism_of(&e.graph));
    group.order = group.elements.len();
    Ok(group)
}

/// Whether `a` and `b` contain the same permutations, and how far apart the
/// matrices of shared permutations are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub equal: bool,
    pub order_a: usize,
    pub order_b: usize,
    pub only_a: Vec<Permutation>,
    pub only_b: Vec<Permutation>,
    pub shared: usize,
    /// Largest entrywise difference over shared permutations; `None` when
    /// nothing is shared or the matrix sizes differ.
    pub max_matrix_diff: Option<f64>,
    pub matrices_agree: bool,
}

pub fn compare_groups(a: &MatrixGroup, b: &MatrixGroup, eps: f64) -> ComparisonReport {
    fn find<'a>(g: &'a MatrixGroup, p: &Permutation) -> Option<&'a GroupElement> {
        g.elements.iter().find(|e| &e.perm == p)
    }
    let only_a: Vec<Permutation> = a
        .elements
        .iter()
        .filter(|e| find(b, &e.perm).is_none())
        .map(|e| e.perm.clone())
        .collect();
    let only_b: Vec<Permutation> = b
        .elements
        .iter()
        .filter(|e| find(a, &e.perm).is_none())
        .map(|e| e.perm.clone())
        .collect();
    let mut max_diff: Option<f64> = None;
    let mut shared = 0;
    let mut comparable = true;
    for ea in &a.elements {
        let Some(eb) = find(b, &ea.perm) else { continue };
        shared += 1;
        let (ma, mb) = (ea.to_matrix(), eb.to_matrix());
        if ma.shape() != mb.shape() {
            comparable = false;
            continue;
        }
        let diff = (ma - mb).amax();
        max_diff = Some(max_diff.map_or(diff, |m| m.max(diff)));
    }
    let max_matrix_diff = if comparable { max_diff } else { None };
    let matrices_agree = comparable && max_diff.is_none_or(|m| m <= eps);
    ComparisonReport {
        equal: only_a.is_empty() && only_b.is_empty(),
        order_a: a.order,
        order_b: b.order,
        only_a,
        only_b,
        shared,
        max_matrix_diff,
        matrices_agree,
    }
}

/// Candidate list made of the automorphisms of an uncolored graph, found by
/// brute force over `Sym(V)`.
pub fn graph_automorphisms_brute_force(graph: &EdgeGraph) -> Result<Vec<Permutation>> {
    let n = graph.n();
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::TooManyCandidates {
            n,
            max: MAX_SYMMETRIC_DEGREE,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|p| Permutation::from_images(p).expect("a permutation"))
        .filter(|p| p.is_automorphism_of(graph))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Polytope;

    fn phi(v: &[Vec<f64>]) -> DMatrix<f64> {
        Polytope::new(None, v[0].len(), v).unwrap().phi().clone()
    }

    fn rectangle() -> DMatrix<f64> {
        phi(&[vec![2.0, 1.0], vec![-2.0, 1.0], vec![-2.0, -1.0], vec![2.0, -1.0]])
    }

    fn k44() -> Embedding {
        let mut coords = DMatrix::zeros(4, 8);
        for (j, (axis, sign)) in [(0, 1.0), (1, 1.0), (0, -1.0), (1, -1.0), (2, 1.0), (3, 1.0), (2, -1.0), (3, -1.0)]
            .into_iter()
            .enumerate()
        {
            coords[(axis, j)] = sign;
        }
        let graph = EdgeGraph::new(8, (0..4).cartesian_product(4..8));
        Embedding::new(graph, coords).unwrap()
    }

    #[test]
    fn rectangle_groups() {
        let tol = Tolerances::default();
        let lin = brute_force_group(&rectangle(), &Candidates::Symmetric, Flavor::Linear, &tol).unwrap();
        let orth = brute_force_group(&rectangle(), &Candidates::Symmetric, Flavor::Orthogonal, &tol).unwrap();
        assert_eq!((lin.order, orth.order), (8, 4));
        let r = compare_groups(&orth, &lin, 1e-8);
        assert!(!r.equal);
        assert!(r.only_a.is_empty());
        assert_eq!(r.only_b.len(), 4);
        assert!(r.matrices_agree);
        let same = compare_groups(&lin, &lin, 1e-8);
        assert!(same.equal && same.max_matrix_diff == Some(0.0));
    }

    #[test]
    fn simplices_realize_everything() {
        let tol = Tolerances::default();
        let tri = phi(&[vec![1.0, 0.0], vec![-0.5, 0.75f64.sqrt()], vec![-0.5, -(0.75f64.sqrt())]]);
        assert_eq!(brute_force_group(&tri, &Candidates::Symmetric, Flavor::Orthogonal, &tol).unwrap().order, 6);
        // every simplex centred at its barycentre is linearly regular
        let skew = phi(&[vec![3.0, 0.1], vec![-1.0, 2.0], vec![-2.0, -2.1]]);
        let off_centre = phi(&[vec![3.0, 0.1], vec![-1.0, 2.0], vec![-0.5, -1.5]]);
        assert_eq!(brute_force_group(&off_centre, &Candidates::Symmetric, Flavor::Linear, &tol).unwrap().order, 1);
        assert_eq!(brute_force_group(&skew, &Candidates::Symmetric, Flavor::Linear, &tol).unwrap().order, 6);
        assert_eq!(brute_force_group(&skew, &Candidates::Symmetric, Flavor::Orthogonal, &tol).unwrap().order, 1);
    }

    #[test]
    fn k44_embedding_has_fewer_symmetries() {
        let e = k44();
        let tol = Tolerances::default();
        let auts = graph_automorphisms_brute_force(&e.graph).unwrap();
        assert_eq!(auts.len(), 1152);
        let g = embedding_group(&e, &Candidates::Given(auts), Flavor::Linear, &tol).unwrap();
        assert_eq!(g.order, 128);
        let swap = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        assert!(!g.elements.iter().any(|el| el.perm == swap));
        assert!(g.elements.iter().any(|el| el.perm.is_identity()));
    }

    #[test]
    fn degenerate_embedding_is_projected() {
        // a square drawn in the plane z = 0 of R³
        let coords = DMatrix::from_row_slice(3, 4, &[1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let e = Embedding::new(EdgeGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), coords).unwrap();
        assert_eq!(e.spanning_coordinates(1e-9).nrows(), 2);
        let g = embedding_group(&e, &Candidates::Symmetric, Flavor::Orthogonal, &Tolerances::default()).unwrap();
        assert_eq!(g.order, 8);
    }

    #[test]
    fn too_many_candidates() {
        let coords = DMatrix::from_fn(2, 10, |r, c| {
            let t = std::f64::consts::TAU * c as f64 / 10.0;
            if r == 0 { t.cos() } else { t.sin() }
        });
        assert!(matches!(
            brute_force_group(&coords, &Candidates::Symmetric, Flavor::Linear, &Tolerances::default()),
            Err(Error::TooManyCandidates { n: 10, max: 9 })
        ));
    }
}

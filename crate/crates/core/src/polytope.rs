//! Polytope ingestion and the combinatorial/dual data derived from it.

use std::path::Path;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::geometry::{self, affine_dimension, hull_facets, relative_volume_with_tol};
use crate::graph::EdgeGraph;
use crate::tolerance::Tolerances;

/// On-disk geometry document.
///
/// `edges` is only consulted when the document describes a general graph
/// embedding; polytope loading derives the edge-graph itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

impl GeometryDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The same document with the vertex centroid moved to the origin.
    pub fn recentered(&self) -> GeometryDocument {
        let n = self.vertices.len().max(1) as f64;
        let centroid: Vec<f64> = (0..self.dimension)
            .map(|k| self.vertices.iter().filter_map(|v| v.get(k)).sum::<f64>() / n)
            .collect();
        GeometryDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(&centroid).map(|(x, c)| x - c).collect())
                .collect(),
            ..self.clone()
        }
    }
}

/// A validated, full-dimensional convex polytope with the origin in its
/// interior. Vertices are the columns of `Φ` and their order is significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    name: Option<String>,
    phi: DMatrix<f64>,
    tol: Tolerances,
}

impl Polytope {
    pub fn new(name: Option<String>, dim: usize, vertices: &[Vec<f64>]) -> Result<Self, ValidationError> {
        Self::with_tolerances(name, dim, vertices, Tolerances::default())
    }

    pub fn with_tolerances(
        name: Option<String>,
        dim: usize,
        vertices: &[Vec<f64>],
        tol: Tolerances,
    ) -> Result<Self, ValidationError> {
        if dim == 0 {
            return Err(ValidationError::ZeroDimension);
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(ValidationError::CoordinateCount {
                    index,
                    found: v.len(),
                    expected: dim,
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ValidationError::NonFinite(index));
            }
        }
        if vertices.len() < dim + 1 {
            return Err(ValidationError::TooFewVertices {
                dim,
                needed: dim + 1,
                found: vertices.len(),
            });
        }
        let phi = DMatrix::from_fn(dim, vertices.len(), |r, c| vertices[c][r]);
        let p = Polytope { name, phi, tol };
        p.validate()?;
        Ok(p)
    }

    pub fn from_document(doc: &GeometryDocument, tol: Tolerances) -> Result<Self> {
        Ok(Self::with_tolerances(doc.name.clone(), doc.dimension, &doc.vertices, tol)?)
    }

    pub fn to_document(&self) -> GeometryDocument {
        GeometryDocument {
            name: self.name.clone(),
            dimension: self.dim(),
            vertices: (0..self.n())
                .map(|i| self.phi.column(i).iter().copied().collect())
                .collect(),
            edges: None,
        }
    }

    fn validate(&self) -> Result<(), ValidationError> {
        let (d, n) = (self.dim(), self.n());
        let points = self.vertices();
        let tol = self.geom_tol();
        if tol == 0.0 {
            return Err(ValidationError::NotFullDimensional(0));
        }
        for (i, j) in (0..n).tuple_combinations() {
            if (&points[i] - &points[j]).norm() <= tol {
                return Err(ValidationError::DuplicateVertex(i, j));
            }
        }
        let k = affine_dimension(&points, self.tol.geom);
        if k != d {
            return Err(ValidationError::NotFullDimensional(k));
        }
        let facets = hull_facets(&points, tol);
        for i in 0..n {
            let normals: Vec<DVector<f64>> = facets
                .iter()
                .filter(|f| f.members.binary_search(&i).is_ok())
                .map(|f| f.normal.clone())
                .collect();
            if normals.is_empty() || geometry::span_basis(&normals, 1e-9).ncols() < d {
                return Err(ValidationError::NonExtremePoint(i));
            }
        }
        if let Some((facet, f)) = facets.iter().enumerate().find(|(_, f)| f.offset <= tol) {
            return Err(ValidationError::OriginNotInterior {
                facet,
                offset: f.offset,
            });
        }
        Ok(())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.phi.nrows()
    }

    pub fn n(&self) -> usize {
        self.phi.ncols()
    }

    /// The `d × n` vertex matrix `Φ`.
    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn vertex(&self, i: usize) -> DVector<f64> {
        self.phi.column(i).into_owned()
    }

    pub fn vertices(&self) -> Vec<DVector<f64>> {
        (0..self.n()).map(|i| self.vertex(i)).collect()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Largest vertex norm.
    pub fn scale(&self) -> f64 {
        self.phi.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Absolute incidence tolerance `ε_geom · max ‖v_i‖`.
    pub fn geom_tol(&self) -> f64 {
        self.tol.geom * self.scale()
    }

    /// Image `TP`, revalidated.
    pub fn transformed(&self, t: &DMatrix<f64>) -> Result<Polytope> {
        if t.nrows() != self.dim() || t.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "transform is {}x{}, polytope has dimension {}",
                t.nrows(),
                t.ncols(),
                self.dim()
            )));
        }
        self.with_phi(t * &self.phi)
    }

    /// Same polytope, vertices reordered so that old vertex `i` becomes new
    /// vertex `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Polytope> {
        let mut phi = self.phi.clone();
        for (i, &p) in perm.iter().enumerate() {
            phi.set_column(p, &self.phi.column(i));
        }
        self.with_phi(phi)
    }

    /// Vertices translated by minus their centroid, revalidated.
    pub fn recentered(&self) -> Result<Polytope> {
        let c = geometry::centroid(&self.vertices());
        let mut phi = self.phi.clone();
        for mut col in phi.column_iter_mut() {
            col -= &c;
        }
        self.with_phi(phi)
    }

    fn with_phi(&self, phi: DMatrix<f64>) -> Result<Polytope> {
        let vertices: Vec<Vec<f64>> = phi.column_iter().map(|c| c.iter().copied().collect()).collect();
        Ok(Polytope::with_tolerances(self.name.clone(), self.dim(), &vertices, self.tol)?)
    }
}

/// Parse and validate a polytope document; vertex order is preserved.
pub fn load_polytope(text: &str) -> Result<Polytope> {
    load_polytope_with(text, Tolerances::default())
}

pub fn load_polytope_with(text: &str, tol: Tolerances) -> Result<Polytope> {
    Polytope::from_document(&GeometryDocument::parse(text)?, tol)
}

pub fn read_polytope(path: impl AsRef<Path>, tol: Tolerances) -> Result<Polytope> {
    load_polytope_with(&std::fs::read_to_string(path)?, tol)
}

/// Facets of `P` as normals `u_F` with `⟨u_F, x⟩ ≤ 1` on `P`, equivalently
/// the vertices of the polar dual.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetSystem {
    pub normals: Vec<DVector<f64>>,
    /// Vertices on each facet, ascending.
    pub members: Vec<Vec<usize>>,
    n: usize,
}

impl FacetSystem {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn is_incident(&self, facet: usize, vertex: usize) -> bool {
        self.members[facet].binary_search(&vertex).is_ok()
    }

    /// Facet × vertex incidence.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|f| (0..self.n).map(|i| self.is_incident(f, i)).collect())
            .collect()
    }

    /// Facets incident to both `i` and `j`.
    pub fn common_facets(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&f| self.is_incident(f, i) && self.is_incident(f, j))
            .collect()
    }
}

pub fn enumerate_facets(p: &Polytope) -> Result<FacetSystem> {
    let tol = p.geom_tol();
    let facets = hull_facets(&p.vertices(), tol);
    let mut normals = Vec::with_capacity(facets.len());
    let mut members = Vec::with_capacity(facets.len());
    for f in facets {
        if f.offset <= tol {
            return Err(Error::DegenerateGeometry(format!(
                "supporting hyperplane through vertices {:?} passes within {:e} of the origin",
                f.members, f.offset
            )));
        }
        normals.push(&f.normal / f.offset);
        members.push(f.members);
    }
    Ok(FacetSystem {
        normals,
        members,
        n: p.n(),
    })
}

/// `{i, j}` is an edge iff the vertices common to every facet containing
/// both are exactly `{i, j}`.
pub fn edge_graph(p: &Polytope, facets: &FacetSystem) -> EdgeGraph {
    let n = p.n();
    let pairs = (0..n).tuple_combinations().filter(|&(i, j)| {
        let common = facets.common_facets(i, j);
        !common.is_empty()
            && (0..n)
                .filter(|&k| common.iter().all(|&f| facets.is_incident(f, k)))
                .count()
                == 2
    });
    EdgeGraph::new(n, pairs)
}

/// The face of the polar dual corresponding to an edge of `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFace {
    pub edge: (usize, usize),
    pub points: Vec<DVector<f64>>,
    /// `(d−2)`-dimensional relative volume; 1 when the face is a point.
    pub relvol: f64,
}

pub fn dual_edge_face(p: &Polytope, facets: &FacetSystem, i: usize, j: usize) -> Result<DualFace> {
    let points: Vec<DVector<f64>> = facets
        .common_facets(i, j)
        .into_iter()
        .map(|f| facets.normals[f].clone())
        .collect();
    let expected = p.dim() - 2;
    let found = if points.is_empty() {
        None
    } else {
        Some(affine_dimension(&points, p.tol.geom))
    };
    if found != Some(expected) {
        return Err(Error::DimensionMismatch(format!(
            "dual face of edge ({i},{j}) has affine dimension {found:?}, expected {expected}"
        )));
    }
    let relvol = relative_volume_with_tol(&points, p.tol.geom);
    Ok(DualFace {
        edge: (i.min(j), i.max(j)),
        points,
        relvol,
    })
}

/// Volume of `P°(c) = {x : ⟨x, v_i⟩ ≤ c_i}` by vertex enumeration over all
/// `d`-subsets of the defining hyperplanes.
pub fn volume_generalized_dual(p: &Polytope, c: &[f64]) -> Result<f64> {
    let (d, n) = (p.dim(), p.n());
    if c.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "parameter vector has length {}, polytope has {n} vertices",
            c.len()
        )));
    }
    let delta = p.tol.trust_region;
    if c.iter().any(|&ci| !ci.is_finite() || (ci - 1.0).abs() > delta * (1.0 + 1e-12)) {
        return Err(Error::OutsideTrustRegion { delta });
    }
    let rel = p.tol.geom;
    let mut points: Vec<DVector<f64>> = Vec::new();
    for subset in (0..n).combinations(d) {
        let a = DMatrix::from_fn(d, d, |r, col| p.phi[(col, subset[r])]);
        let bound: f64 = a.row_iter().map(|r| r.norm()).product();
        let lu = a.lu();
        if lu.determinant().abs() <= 1e-12 * bound {
            continue;
        }
        let rhs = DVector::from_fn(d, |r, _| c[subset[r]]);
        let Some(x) = lu.solve(&rhs) else { continue };
        let feasible = (0..n).all(|k| {
            let vk = p.phi.column(k);
            vk.dot(&x) - c[k] <= rel * (x.norm() * vk.norm()).max(c[k].abs())
        });
        if !feasible {
            continue;
        }
        let merge = rel * x.norm().max(1.0);
        if points.iter().all(|q| (q - &x).norm() > merge) {
            points.push(x);
        }
    }
    if points.len() < d + 1 || affine_dimension(&points, rel) != d {
        return Err(Error::Unbounded(format!(
            "vertex enumeration produced {} points not spanning dimension {d}",
            points.len()
        )));
    }
    Ok(relative_volume_with_tol(&points, rel))
}

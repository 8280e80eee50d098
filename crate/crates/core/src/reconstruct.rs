//! Turning combinatorial symmetries into matrices.
//!
//! A permutation `σ` of the vertices is realized by `T_σ = Φ Π_σ Φ†`. When `σ`
//! preserves the Izmestiev coloring of the edge graph, `T_σ` maps every vertex
//! `v_j` to `v_σ(j)`; adding the metric coloring makes `T_σ` orthogonal.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::autgroup::automorphisms;
use crate::coloring::{izmestiev_coloring, metric_coloring, product_coloring, LabeledGraph};
use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::izmestiev::{izmestiev_matrix, IzmestievMatrix};
use crate::perm::{Permutation, PermutationSet};
use crate::polytope::{edge_graph, enumerate_facets, FacetSystem, Polytope};
use crate::tolerance::{SearchLimits, Tolerances};

/// `Φ† = Φᵀ (Φ Φᵀ)⁻¹`, verified by `‖Φ Φ† − I‖_max ≤ tol`.
pub fn pseudo_inverse(phi: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let gram = phi * phi.transpose();
    let chol = gram.cholesky().ok_or(Error::RankDeficient)?;
    let pinv = phi.transpose() * chol.inverse();
    let residual = (phi * &pinv - DMatrix::identity(phi.nrows(), phi.nrows())).amax();
    if !(residual <= tol) {
        return Err(Error::RankDeficient);
    }
    Ok(pinv)
}

/// `Φ Π_σ Φ†`. Column `j` of `Φ Π_σ` is `v_σ(j)`, so the product is formed by
/// permuting columns rather than multiplying by `Π_σ`.
pub fn linear_map_from_perm(phi: &DMatrix<f64>, pinv: &DMatrix<f64>, sigma: &Permutation) -> Result<DMatrix<f64>> {
    if sigma.len() != phi.ncols() {
        return Err(Error::DomainMismatch(format!(
            "permutation of {} points for {} vertices",
            sigma.len(),
            phi.ncols()
        )));
    }
    let permuted = DMatrix::from_fn(phi.nrows(), phi.ncols(), |r, j| phi[(r, sigma.apply(j))]);
    Ok(permuted * pinv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub residual: f64,
    pub ok: bool,
}

/// Largest `‖T v_j − v_σ(j)‖ / ‖v_σ(j)‖` over all vertices.
pub fn check_realizes(t: &DMatrix<f64>, phi: &DMatrix<f64>, sigma: &Permutation, eps: f64) -> Check {
    let image = t * phi;
    let residual = (0..phi.ncols())
        .map(|j| {
            let target = phi.column(sigma.apply(j));
            (image.column(j) - target).norm() / target.norm()
        })
        .fold(0.0, f64::max);
    Check {
        residual,
        ok: residual <= eps,
    }
}

/// `‖TᵀT − I‖_max`.
pub fn check_orthogonal(t: &DMatrix<f64>, eps: f64) -> Check {
    let residual = (t.transpose() * t - DMatrix::identity(t.ncols(), t.ncols())).amax();
    Check {
        residual,
        ok: residual <= eps,
    }
}

/// Whether the rows of `Φ` lie in a single eigenspace of the symmetric
/// matrix `A`, i.e. `A Φᵀ = λ Φᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceReport {
    /// Rayleigh-quotient estimate `Σ_k ⟨A φ_k, φ_k⟩ / Σ_k ‖φ_k‖²` over rows `φ_k`.
    pub lambda: f64,
    /// `‖A Φᵀ − λ Φᵀ‖_F / (‖A‖_F ‖Φ‖_F)`.
    pub residual: f64,
    pub tolerance: f64,
    /// Eigenvalues of `A` within `eps · max|λ(A)|` of `lambda`.
    pub multiplicity: usize,
    pub pass: bool,
}

pub fn eigenspace_criterion(a: &DMatrix<f64>, phi: &DMatrix<f64>, eps: f64) -> Result<EigenspaceReport> {
    if a.nrows() != phi.ncols() || a.ncols() != phi.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against {} vertices",
            a.nrows(),
            a.ncols(),
            phi.ncols()
        )));
    }
    let phit = phi.transpose();
    let aphit = a * &phit;
    let lambda = aphit.dot(&phit) / phit.norm_squared();
    let denom = a.norm() * phi.norm();
    let residual = if denom == 0.0 {
        0.0
    } else {
        (&aphit - &phit * lambda).norm() / denom
    };
    let sym = (a + a.transpose()) * 0.5;
    let spectrum = SymmetricEigen::new(sym).eigenvalues;
    let threshold = eps * spectrum.amax();
    let multiplicity = spectrum.iter().filter(|&&l| (l - lambda).abs() <= threshold).count();
    Ok(EigenspaceReport {
        lambda,
        residual,
        tolerance: eps,
        multiplicity,
        pass: residual <= eps && multiplicity >= phi.nrows(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Linear,
    Orthogonal,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Linear => "linear",
            Flavor::Orthogonal => "orthogonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub perm: Permutation,
    /// Row-major `d × d` matrix.
    pub matrix: Vec<Vec<f64>>,
    pub orthogonal: bool,
}

impl GroupElement {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let d = self.matrix.len();
        DMatrix::from_fn(d, d, |r, c| self.matrix[r][c])
    }
}

/// A symmetry group of a polytope as permutations paired with matrices,
/// sorted by permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixGroup {
    pub flavor: Flavor,
    pub order: usize,
    pub elements: Vec<GroupElement>,
    pub tolerances: Tolerances,
}

impl MatrixGroup {
    pub fn permutations(&self) -> Result<PermutationSet> {
        PermutationSet::new(self.elements.iter().map(|e| e.perm.clone()))
    }
}

/// Beyond this order the homomorphism check samples right factors instead of
/// testing every pair.
const FULL_PRODUCT_CHECK: usize = 2048;
const SAMPLED_FACTORS: usize = 64;

/// Realizes every permutation of `group` and checks the consequences that a
/// symmetry group must satisfy: each `T_σ` maps vertices to vertices,
/// `T_id = I`, `T_{σ∘τ} = T_σ T_τ`, and for the orthogonal flavor `T_σ` is
/// orthogonal. Any failure is a `TheoremViolation`.
pub fn realize_group(p: &Polytope, group: &PermutationSet, flavor: Flavor) -> Result<MatrixGroup> {
    let tol = *p.tolerances();
    let phi = p.phi();
    let pinv = pseudo_inverse(phi, tol.pinv)?;
    let mut matrices = Vec::with_capacity(group.order());
    let mut elements = Vec::with_capacity(group.order());
    for sigma in group.elements() {
        let t = linear_map_from_perm(phi, &pinv, sigma)?;
        let realized = check_realizes(&t, phi, sigma, tol.matching);
        if !realized.ok {
            return Err(Error::TheoremViolation(format!(
                "{} symmetry {sigma} is not realized: relative vertex residual {:.3e}",
                flavor.name(),
                realized.residual
            )));
        }
        let orth = check_orthogonal(&t, tol.orth);
        if flavor == Flavor::Orthogonal && !orth.ok {
            return Err(Error::TheoremViolation(format!(
                "symmetry {sigma} has non-orthogonal matrix: ‖TᵀT − I‖ = {:.3e}",
                orth.residual
            )));
        }
        elements.push(GroupElement {
            perm: sigma.clone(),
            matrix: t.row_iter().map(|r| r.iter().copied().collect()).collect(),
            orthogonal: orth.ok,
        });
        matrices.push(t);
    }
    check_homomorphism(group, &matrices, tol.matching)?;
    Ok(MatrixGroup {
        flavor,
        order: elements.len(),
        elements,
        tolerances: tol,
    })
}

fn check_homomorphism(group: &PermutationSet, matrices: &[DMatrix<f64>], eps: f64) -> Result<()> {
    let elements = group.elements();
    let n = group.degree();
    let id = elements
        .binary_search(&Permutation::identity(n))
        .map_err(|_| Error::TheoremViolation("identity missing from symmetry group".into()))?;
    let d = matrices[id].nrows();
    if (&matrices[id] - DMatrix::identity(d, d)).amax() > eps {
        return Err(Error::TheoremViolation("identity is not realized by I".into()));
    }
    let step = if elements.len() <= FULL_PRODUCT_CHECK {
        1
    } else {
        elements.len().div_ceil(SAMPLED_FACTORS)
    };
    for (a, sigma) in elements.iter().enumerate() {
        for b in (0..elements.len()).step_by(step) {
            let st = sigma.compose(&elements[b]);
            let c = elements
                .binary_search(&st)
                .map_err(|_| Error::TheoremViolation(format!("group not closed at {st}")))?;
            let product = &matrices[a] * &matrices[b];
            let scale = 1.0 + matrices[a].amax() * matrices[b].amax();
            if (&matrices[c] - product).amax() > eps * scale {
                return Err(Error::TheoremViolation(format!(
                    "T({st}) differs from T({sigma}) T({})",
                    elements[b]
                )));
            }
        }
    }
    Ok(())
}

/// Every intermediate of the symmetry pipeline for one polytope.
#[derive(Debug, Clone)]
pub struct SymmetryAnalysis {
    pub facets: FacetSystem,
    pub graph: EdgeGraph,
    pub izmestiev: IzmestievMatrix,
    pub labeled: LabeledGraph,
    pub group: PermutationSet,
    pub matrices: MatrixGroup,
}

/// The colored edge graph whose automorphisms are the symmetries of the
/// requested flavor.
pub fn symmetry_coloring(p: &Polytope, m: &IzmestievMatrix, flavor: Flavor) -> Result<LabeledGraph> {
    let eps = p.tolerances().color;
    let iz = izmestiev_coloring(m, eps)?;
    let coloring = match flavor {
        Flavor::Linear => iz,
        Flavor::Orthogonal => product_coloring(&iz, &metric_coloring(p, &m.graph, eps)?)?,
    };
    LabeledGraph::new(m.graph.clone(), coloring)
}

/// Facets, edge graph, Izmestiev matrix, colored automorphisms, matrices.
pub fn analyze_symmetry(p: &Polytope, flavor: Flavor, limits: &SearchLimits) -> Result<SymmetryAnalysis> {
    let facets = enumerate_facets(p)?;
    let graph = edge_graph(p, &facets);
    let izmestiev = izmestiev_matrix(p, &facets, &graph)?;
    let labeled = symmetry_coloring(p, &izmestiev, flavor)?;
    let group = automorphisms(&labeled, limits)?;
    let matrices = realize_group(p, &group, flavor)?;
    Ok(SymmetryAnalysis {
        facets,
        graph,
        izmestiev,
        labeled,
        group,
        matrices,
    })
}

pub fn linear_group(p: &Polytope, limits: &SearchLimits) -> Result<MatrixGroup> {
    Ok(analyze_symmetry(p, Flavor::Linear, limits)?.matrices)
}

pub fn orthogonal_group(p: &Polytope, limits: &SearchLimits) -> Result<MatrixGroup> {
    Ok(analyze_symmetry(p, Flavor::Orthogonal, limits)?.matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn poly(v: &[Vec<f64>]) -> Polytope {
        Polytope::new(None, v[0].len(), v).unwrap()
    }

    fn square() -> Polytope {
        poly(&[vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]])
    }

    fn rectangle() -> Polytope {
        poly(&[vec![2.0, 1.0], vec![-2.0, 1.0], vec![-2.0, -1.0], vec![2.0, -1.0]])
    }

    #[test]
    fn pseudo_inverse_closed_forms() {
        let sq = square();
        let pinv = pseudo_inverse(sq.phi(), 1e-10).unwrap();
        assert!((pinv - sq.phi().transpose() * 0.25).amax() < 1e-14);
        let tri: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let tri = poly(&tri);
        let pinv = pseudo_inverse(tri.phi(), 1e-10).unwrap();
        assert!((pinv - tri.phi().transpose() * (2.0 / 3.0)).amax() < 1e-14);
        let flat = dmatrix![1.0, 2.0, 3.0; 2.0, 4.0, 6.0];
        assert!(matches!(pseudo_inverse(&flat, 1e-10), Err(Error::RankDeficient)));
    }

    #[test]
    fn cyclic_shift_matrices() {
        let shift = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let sq = square();
        let t = linear_map_from_perm(sq.phi(), &pseudo_inverse(sq.phi(), 1e-10).unwrap(), &shift).unwrap();
        assert!((&t - dmatrix![0.0, -1.0; 1.0, 0.0]).amax() < 1e-14);
        assert!(check_realizes(&t, sq.phi(), &shift, 1e-8).ok);
        assert!(check_orthogonal(&t, 1e-8).ok);

        let r = rectangle();
        let t = linear_map_from_perm(r.phi(), &pseudo_inverse(r.phi(), 1e-10).unwrap(), &shift).unwrap();
        assert!((&t - dmatrix![0.0, -2.0; 0.5, 0.0]).amax() < 1e-14);
        // a linear but not an orthogonal symmetry of the rectangle
        assert!(check_realizes(&t, r.phi(), &shift, 1e-8).ok);
        assert!(!check_orthogonal(&t, 1e-8).ok);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let sq = square();
        let pinv = pseudo_inverse(sq.phi(), 1e-10).unwrap();
        let p = Permutation::identity(3);
        assert!(matches!(linear_map_from_perm(sq.phi(), &pinv, &p), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn eigenspace_of_izmestiev_matrix() {
        let sq = square();
        let a = analyze_symmetry(&sq, Flavor::Linear, &SearchLimits::default()).unwrap();
        let r = eigenspace_criterion(&a.izmestiev.entries, sq.phi(), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.lambda.abs() < 1e-12);
        assert_eq!(r.multiplicity, 2);
        // the plain adjacency of the rectangle's 4-cycle does not contain Φᵀ
        // as an eigenspace once sides are weighted unequally
        let rect = rectangle();
        let w = dmatrix![0.0, 1.0, 0.0, 2.0; 1.0, 0.0, 2.0, 0.0; 0.0, 2.0, 0.0, 1.0; 2.0, 0.0, 1.0, 0.0];
        let r = eigenspace_criterion(&w, rect.phi(), 1e-8).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn square_and_rectangle_groups() {
        let limits = SearchLimits::default();
        let lin = linear_group(&square(), &limits).unwrap();
        let orth = orthogonal_group(&square(), &limits).unwrap();
        assert_eq!((lin.order, orth.order), (8, 8));
        assert!(orth.elements.iter().all(|e| e.orthogonal));

        let lin = linear_group(&rectangle(), &limits).unwrap();
        let orth = orthogonal_group(&rectangle(), &limits).unwrap();
        assert_eq!((lin.order, orth.order), (8, 4));
        assert_eq!(lin.elements.iter().filter(|e| e.orthogonal).count(), 4);
        assert!(orth.permutations().unwrap().is_subset_of(&lin.permutations().unwrap()));
    }

    #[test]
    fn matrix_group_json_round_trip() {
        let g = orthogonal_group(&square(), &SearchLimits::default()).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with("{\"flavor\":\"orthogonal\",\"order\":8,\"elements\":[{\"perm\":[0,1,2,3]"));
        let back: MatrixGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}

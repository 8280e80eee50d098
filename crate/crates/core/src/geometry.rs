//! Brute-force convex hull and relative volume for small point sets.
//!
//! Everything here works on explicit point lists and enumerates `k`-subsets,
//! which is exact by construction at the sizes this crate targets
//! (tens of points, dimension at most six or so).

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

/// A supporting hyperplane `⟨normal, x⟩ = offset` of a full-dimensional
/// point set, with every point on the `≤` side.
#[derive(Debug, Clone)]
pub struct HullFacet {
    /// Unit outward normal.
    pub normal: DVector<f64>,
    pub offset: f64,
    /// Indices of the points lying on the hyperplane, ascending.
    pub members: Vec<usize>,
}

/// Generalized cross product: a normal to the affine hyperplane through
/// `k` points of `R^k`, or `None` when they are affinely dependent.
fn hyperplane_normal(points: &[&DVector<f64>]) -> Option<DVector<f64>> {
    let k = points.len();
    if k == 1 {
        return Some(DVector::from_element(1, 1.0));
    }
    let rows = DMatrix::from_fn(k - 1, k, |r, c| points[r + 1][c] - points[0][c]);
    let bound: f64 = rows.row_iter().map(|r| r.norm()).product();
    if bound == 0.0 {
        return None;
    }
    let normal = DVector::from_fn(k, |c, _| {
        let minor = rows.clone().remove_column(c);
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    });
    if normal.norm() <= 1e-12 * bound {
        return None;
    }
    Some(normal.normalize())
}

/// All facets of the convex hull of `points`, which must be full-dimensional
/// in their ambient space `R^k`, `k ≥ 1`. Facets are ordered by member set.
pub fn hull_facets(points: &[DVector<f64>], tol: f64) -> Vec<HullFacet> {
    let k = points[0].len();
    let mut facets: Vec<HullFacet> = Vec::new();
    for subset in (0..points.len()).combinations(k) {
        if facets
            .iter()
            .any(|f| subset.iter().all(|i| f.members.binary_search(i).is_ok()))
        {
            continue;
        }
        let chosen: Vec<&DVector<f64>> = subset.iter().map(|&i| &points[i]).collect();
        let Some(normal) = hyperplane_normal(&chosen) else {
            continue;
        };
        let offset = normal.dot(chosen[0]);
        let slack: Vec<f64> = points.iter().map(|p| normal.dot(p) - offset).collect();
        let below = slack.iter().all(|&s| s <= tol);
        let above = slack.iter().all(|&s| s >= -tol);
        let (normal, offset) = match (below, above) {
            (true, false) => (normal, offset),
            (false, true) => (-normal, -offset),
            _ => continue,
        };
        let members = slack
            .iter()
            .enumerate()
            .filter(|(_, s)| s.abs() <= tol)
            .map(|(i, _)| i)
            .collect();
        facets.push(HullFacet {
            normal,
            offset,
            members,
        });
    }
    facets.sort_by(|a, b| a.members.cmp(&b.members));
    facets
}

pub fn centroid(points: &[DVector<f64>]) -> DVector<f64> {
    let mut c = DVector::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Orthonormal basis (as matrix columns) of the linear span of `vectors`,
/// by Gram–Schmidt with pivoting on the largest residual. Directions whose
/// residual norm does not exceed `tol` are dropped.
pub(crate) fn span_basis(vectors: &[DVector<f64>], tol: f64) -> DMatrix<f64> {
    let dim = vectors[0].len();
    let mut residuals: Vec<DVector<f64>> = vectors.to_vec();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    while basis.len() < dim {
        let Some((pivot, norm)) = residuals
            .iter()
            .map(|r| r.norm())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm <= tol {
            break;
        }
        let mut q = &residuals[pivot] / norm;
        // second pass restores orthogonality lost to cancellation
        for b in &basis {
            q -= b * b.dot(&q);
        }
        q.normalize_mut();
        for r in residuals.iter_mut() {
            let coeff = q.dot(r);
            *r -= &q * coeff;
        }
        basis.push(q);
    }
    if basis.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&basis)
    }
}

/// Affine dimension of a nonempty point set; `rel_tol` is relative to the
/// spread of the points around their centroid.
pub fn affine_dimension(points: &[DVector<f64>], rel_tol: f64) -> usize {
    let c = centroid(points);
    let centered: Vec<DVector<f64>> = points.iter().map(|p| p - &c).collect();
    let scale = centered.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    span_basis(&centered, rel_tol * scale * (points.len() as f64).sqrt()).ncols()
}

/// Relative volume of the convex hull of `points`, measured inside its
/// affine hull. A single point (or any 0-dimensional set) has volume 1.
pub fn relative_volume(points: &[DVector<f64>]) -> f64 {
    relative_volume_with_tol(points, 1e-9)
}

/// As [`relative_volume`], with the incidence tolerance given relative to
/// the spread of the points.
pub fn relative_volume_with_tol(points: &[DVector<f64>], rel_tol: f64) -> f64 {
    assert!(!points.is_empty(), "relative volume of an empty set");
    let c = centroid(points);
    let centered: Vec<DVector<f64>> = points.iter().map(|p| p - &c).collect();
    let scale = centered.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 1.0;
    }
    volume_centered(&centered, rel_tol * scale)
}

fn volume_centered(centered: &[DVector<f64>], tol: f64) -> f64 {
    let basis = span_basis(centered, tol * (centered.len() as f64).sqrt());
    let k = basis.ncols();
    if k == 0 {
        return 1.0;
    }
    let local: Vec<DVector<f64>> = centered.iter().map(|p| basis.tr_mul(p)).collect();
    full_volume(&local, tol)
}

/// Volume of a full-dimensional point set in `R^k`, by coning every facet
/// to the centroid.
fn full_volume(points: &[DVector<f64>], tol: f64) -> f64 {
    let k = points[0].len();
    if k == 1 {
        let (lo, hi) = points
            .iter()
            .map(|p| p[0])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        return hi - lo;
    }
    let apex = centroid(points);
    hull_facets(points, tol)
        .iter()
        .map(|facet| {
            let height = facet.offset - facet.normal.dot(&apex);
            let face: Vec<DVector<f64>> = facet.members.iter().map(|&i| &points[i] - &apex).collect();
            let fc = centroid(&face);
            let face: Vec<DVector<f64>> = face.iter().map(|p| p - &fc).collect();
            height * volume_centered(&face, tol) / k as f64
        })
        .sum()
}

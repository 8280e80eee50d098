//! The Izmestiev matrix of a polytope.
//!
//! `M` is minus the Hessian of `c ↦ vol(P°(c))` at `c = (1, …, 1)`. It is
//! negative on edges, zero on non-edges, has exactly one negative eigenvalue
//! and its kernel is exactly the row space of `Φ`. Two independent routes are
//! provided: a closed form built from dual-face volumes and angles, and
//! central finite differences of the generalized dual volume.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::polytope::{dual_edge_face, volume_generalized_dual, FacetSystem, Polytope};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct IzmestievMatrix {
    pub entries: DMatrix<f64>,
    pub graph: EdgeGraph,
}

/// JSON form of a square matrix: `{"n": int, "entries": [[float]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixDump {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        MatrixDump {
            n: m.nrows(),
            entries: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix dump is not {0}x{0}",
                self.n
            )));
        }
        Ok(DMatrix::from_fn(self.n, self.n, |r, c| self.entries[r][c]))
    }
}

impl IzmestievMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn dump(&self) -> MatrixDump {
        MatrixDump::from_matrix(&self.entries)
    }
}

/// Closed form: `M_ij = −vol(f_ij) / (‖v_i‖‖v_j‖ sin∠(v_i, v_j))` on edges,
/// zero on non-edges, and the diagonal fixed by `M Φᵀ = 0`.
pub fn izmestiev_matrix(p: &Polytope, facets: &FacetSystem, graph: &EdgeGraph) -> Result<IzmestievMatrix> {
    let n = p.n();
    let v = p.vertices();
    let mut m = DMatrix::zeros(n, n);
    for &(i, j) in graph.edges() {
        let face = dual_edge_face(p, facets, i, j)?;
        let (ni, nj) = (v[i].norm(), v[j].norm());
        let dot = v[i].dot(&v[j]);
        // ‖v_i‖‖v_j‖ sin∠ without going through the angle
        let area = (ni * ni * nj * nj - dot * dot).max(0.0).sqrt();
        if area <= p.tolerances().geom * ni * nj {
            return Err(Error::SingularAngle(i, j));
        }
        m[(i, j)] = -face.relvol / area;
        m[(j, i)] = m[(i, j)];
    }
    let neighbors = graph.neighbors();
    for i in 0..n {
        let s: f64 = neighbors[i].iter().map(|&j| m[(i, j)] * v[j].dot(&v[i])).sum();
        m[(i, i)] = -s / v[i].norm_squared();
        let mut residual = &v[i] * m[(i, i)];
        let mut magnitude = m[(i, i)].abs() * v[i].norm();
        for &j in &neighbors[i] {
            residual += &v[j] * m[(i, j)];
            magnitude += m[(i, j)].abs() * v[j].norm();
        }
        let tolerance = p.tolerances().kern * magnitude.max(1.0);
        if residual.norm() > tolerance {
            return Err(Error::KernelResidual {
                vertex: i,
                residual: residual.norm(),
                tolerance,
            });
        }
    }
    Ok(IzmestievMatrix {
        entries: m,
        graph: graph.clone(),
    })
}

fn negated_hessian(p: &Polytope, h: f64) -> Result<DMatrix<f64>> {
    let n = p.n();
    let vol = |shifts: &[(usize, f64)]| {
        let mut c = vec![1.0; n];
        for &(k, s) in shifts {
            c[k] += s;
        }
        volume_generalized_dual(p, &c)
    };
    let center = vol(&[])?;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let second = (vol(&[(i, h)])? - 2.0 * center + vol(&[(i, -h)])?) / (h * h);
        m[(i, i)] = -second;
        for j in i + 1..n {
            let mixed = (vol(&[(i, h), (j, h)])? - vol(&[(i, h), (j, -h)])? - vol(&[(i, -h), (j, h)])?
                + vol(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            m[(i, j)] = -mixed;
            m[(j, i)] = -mixed;
        }
    }
    Ok(m)
}

/// Finite-difference oracle: minus the central second differences of the
/// generalized dual volume around `c = 1`.
///
/// When several facets of `P°` meet in a non-simple vertex the volume is only
/// piecewise polynomial near `c = 1` and the plain stencil carries an `O(h)`
/// term. Each estimate is therefore the linear Richardson extrapolation
/// `2·D(h/2) − D(h)`; the estimate at `h` is compared with the one at `h/2`
/// and must agree within `fd_agree · max(1, max|M|)`.
pub fn izmestiev_matrix_fd(p: &Polytope, graph: &EdgeGraph, h: f64) -> Result<IzmestievMatrix> {
    let d1 = negated_hessian(p, h)?;
    let d2 = negated_hessian(p, h / 2.0)?;
    let d4 = negated_hessian(p, h / 4.0)?;
    let coarse = &d2 * 2.0 - &d1;
    let fine = &d4 * 2.0 - &d2;
    let diff = (&coarse - &fine).amax();
    let tolerance = p.tolerances().fd_agree * fine.amax().max(1.0);
    if diff > tolerance {
        return Err(Error::FiniteDifferenceUnstable { diff, tolerance });
    }
    let entries = (&fine + fine.transpose()) * 0.5;
    Ok(IzmestievMatrix {
        entries,
        graph: graph.clone(),
    })
}

/// Outcome of checking the five defining properties of the Izmestiev matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IzmestievPropertyReport {
    /// (1) every edge entry is negative.
    pub sign_ok: bool,
    pub sign_violations: Vec<[usize; 2]>,
    /// (2) every non-edge off-diagonal entry vanishes.
    pub sparsity_ok: bool,
    pub sparsity_violations: Vec<[usize; 2]>,
    pub symmetric: bool,
    /// Ascending.
    pub spectrum: Vec<f64>,
    pub eig_threshold: f64,
    /// (3) exactly one eigenvalue below `−eig_threshold`.
    pub negative_eigenvalues: usize,
    pub unique_negative_ok: bool,
    /// (4) `‖MΦᵀ‖_max`.
    pub kernel_residual: f64,
    pub kernel_tolerance: f64,
    pub kernel_ok: bool,
    /// (5) eigenvalues with `|λ| ≤ eig_threshold`, expected to equal `d`.
    pub kernel_dim: usize,
    pub kernel_dim_ok: bool,
    pub pass: bool,
}

pub fn verify_properties(m: &DMatrix<f64>, graph: &EdgeGraph, p: &Polytope) -> Result<IzmestievPropertyReport> {
    verify_properties_with(m, graph, p, p.tolerances())
}

pub fn verify_properties_with(
    m: &DMatrix<f64>,
    graph: &EdgeGraph,
    p: &Polytope,
    tol: &Tolerances,
) -> Result<IzmestievPropertyReport> {
    let n = p.n();
    if m.nrows() != n || m.ncols() != n || graph.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, graph has {} vertices, polytope has {n}",
            m.nrows(),
            m.ncols(),
            graph.n()
        )));
    }
    let scale = m.amax();
    let entry_tol = tol.kern * scale.max(1.0);
    let mut sign_violations = Vec::new();
    let mut sparsity_violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if graph.has_edge(i, j) {
                if !(m[(i, j)] < 0.0 && m[(j, i)] < 0.0) {
                    sign_violations.push([i, j]);
                }
            } else if m[(i, j)].abs() > entry_tol || m[(j, i)].abs() > entry_tol {
                sparsity_violations.push([i, j]);
            }
        }
    }
    let symmetric = (m - m.transpose()).amax() <= entry_tol;
    let sym = (m + m.transpose()) * 0.5;
    let mut spectrum: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    let max_abs = spectrum.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let eig_threshold = tol.eig * max_abs;
    let negative_eigenvalues = spectrum.iter().filter(|&&l| l < -eig_threshold).count();
    let kernel_dim = spectrum.iter().filter(|&&l| l.abs() <= eig_threshold).count();
    let kernel_residual = (m * p.phi().transpose()).amax();
    let kernel_tolerance = tol.kern * (scale * p.phi().amax()).max(1.0);
    let report = IzmestievPropertyReport {
        sign_ok: sign_violations.is_empty(),
        sparsity_ok: sparsity_violations.is_empty(),
        sign_violations,
        sparsity_violations,
        symmetric,
        unique_negative_ok: negative_eigenvalues == 1,
        negative_eigenvalues,
        eig_threshold,
        spectrum,
        kernel_ok: kernel_residual <= kernel_tolerance,
        kernel_residual,
        kernel_tolerance,
        kernel_dim_ok: kernel_dim == p.dim(),
        kernel_dim,
        pass: false,
    };
    let pass = report.sign_ok
        && report.sparsity_ok
        && report.symmetric
        && report.unique_negative_ok
        && report.kernel_ok
        && report.kernel_dim_ok;
    Ok(IzmestievPropertyReport { pass, ..report })
}

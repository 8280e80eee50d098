#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use polysym::polytope::{read_polytope, Polytope};
use polysym::tolerance::Tolerances;
use rand::rngs::StdRng;
use rand::Rng;

/// Every valid polytope fixture, in a fixed order.
pub const POLYTOPES: [&str; 13] = [
    "triangle",
    "square",
    "rectangle",
    "hexagon_regular",
    "hexagon_stretched",
    "hexagon_perturbed",
    "simplex_2",
    "simplex_3",
    "simplex_4",
    "cube",
    "octahedron",
    "prism3",
    "cyclic_6_4",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Polytope {
    read_polytope(fixture_path(name), Tolerances::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Orthogonal matrix from the QR factorization of a matrix with uniform
/// entries, with the sign ambiguity of the factorization removed.
pub fn random_orthogonal(d: usize, rng: &mut StdRng) -> DMatrix<f64> {
    loop {
        let a = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        if a.determinant().abs() < 1e-3 {
            continue;
        }
        let qr = a.qr();
        let r = qr.r();
        let mut q = qr.q();
        for k in 0..d {
            if r[(k, k)] < 0.0 {
                q.column_mut(k).neg_mut();
            }
        }
        return q;
    }
}

/// `Q₁ · diag(s) · Q₂` with singular values in `[1, 10]`, so the condition
/// number is at most 10.
pub fn random_well_conditioned(d: usize, rng: &mut StdRng) -> DMatrix<f64> {
    let q1 = random_orthogonal(d, rng);
    let q2 = random_orthogonal(d, rng);
    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| rng.random_range(1.0..10.0)));
    q1 * s * q2
}

pub fn sorted_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    classes.sort();
    classes
}

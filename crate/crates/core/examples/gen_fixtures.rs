//! Regenerates the JSON fixtures under `fixtures/`.
//!
//! Run with `cargo run -p polysym --example gen_fixtures`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use polysym::polytope::GeometryDocument;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn polygon(k: usize, sx: f64, sy: f64) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / k as f64;
            vec![sx * t.cos(), sy * t.sin()]
        })
        .collect()
}

/// Regular simplex with unit circumradius, centred at the origin of `R^d`.
fn regular_simplex(d: usize) -> Vec<Vec<f64>> {
    // e_i − (1/(d+1))·𝟙 in R^{d+1}, expressed in an orthonormal basis of 𝟙^⊥
    let lifted: Vec<DVector<f64>> = (0..=d)
        .map(|i| DVector::from_fn(d + 1, |k, _| if k == i { 1.0 } else { 0.0 } - 1.0 / (d + 1) as f64))
        .collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in &lifted {
        let mut r = v.clone();
        for b in &basis {
            r -= b * b.dot(v);
        }
        if r.norm() > 1e-9 && basis.len() < d {
            basis.push(r.normalize());
        }
    }
    lifted
        .iter()
        .map(|v| {
            let x: Vec<f64> = basis.iter().map(|b| b.dot(v)).collect();
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            x.iter().map(|c| c / norm).collect()
        })
        .collect()
}

fn sign_vectors(d: usize) -> Vec<Vec<f64>> {
    (0..1usize << d)
        .map(|m| (0..d).map(|k| if m >> k & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

fn cross_polytope(d: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for k in 0..d {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[k] = s;
            out.push(v);
        }
    }
    out
}

/// One vertex or edge per line.
fn render(doc: &GeometryDocument) -> String {
    let rows = |items: Vec<String>| format!("[\n    {}\n  ]", items.join(",\n    "));
    let mut out = format!(
        "{{\n  \"name\": {},\n  \"dimension\": {},\n  \"vertices\": {}",
        json(&doc.name),
        doc.dimension,
        rows(doc.vertices.iter().map(json).collect())
    );
    if let Some(edges) = &doc.edges {
        out.push_str(&format!(",\n  \"edges\": {}", rows(edges.iter().map(json).collect())));
    }
    out.push_str("\n}\n");
    out
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap()
}

fn write(dir: &Path, file: &str, name: &str, vertices: Vec<Vec<f64>>, edges: Option<Vec<[usize; 2]>>) {
    let vertices: Vec<Vec<f64>> = vertices
        .into_iter()
        .map(|v| v.into_iter().map(|x| if x.abs() < 1e-12 { 0.0 } else { x }).collect())
        .collect();
    let doc = GeometryDocument {
        name: Some(name.to_string()),
        dimension: vertices[0].len(),
        vertices,
        edges,
    };
    let path = dir.join(file);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, render(&doc)).unwrap();
    println!("wrote {}", path.display());
}

fn main() {
    let dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    write(&dir, "triangle.json", "triangle", polygon(3, 1.0, 1.0), None);
    write(
        &dir,
        "square.json",
        "square",
        vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        None,
    );
    write(
        &dir,
        "rectangle.json",
        "rectangle",
        vec![vec![2.0, 1.0], vec![-2.0, 1.0], vec![-2.0, -1.0], vec![2.0, -1.0]],
        None,
    );
    write(&dir, "hexagon_regular.json", "regular hexagon", polygon(6, 1.0, 1.0), None);
    write(&dir, "hexagon_stretched.json", "stretched hexagon", polygon(6, 2.0, 1.0), None);
    let mut rng = StdRng::seed_from_u64(20240611);
    let perturbed = polygon(6, 1.0, 1.0)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x + rng.random_range(-0.15..0.15)).collect())
        .collect();
    write(&dir, "hexagon_perturbed.json", "perturbed hexagon", perturbed, None);
    for d in 2..=4 {
        write(&dir, &format!("simplex_{d}.json"), &format!("regular {d}-simplex"), regular_simplex(d), None);
    }
    write(&dir, "cube.json", "cube", sign_vectors(3), None);
    write(&dir, "octahedron.json", "octahedron", cross_polytope(3), None);
    let prism = [1.0, -1.0]
        .iter()
        .flat_map(|&z| polygon(3, 1.0, 1.0).into_iter().map(move |mut v| {
            v.push(z);
            v
        }))
        .collect();
    write(&dir, "prism3.json", "triangular prism", prism, None);
    let cyclic = (0..6)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 6.0;
            vec![t.cos(), t.sin(), (2.0 * t).cos(), (2.0 * t).sin()]
        })
        .collect();
    write(&dir, "cyclic_6_4.json", "cyclic polytope C(6,4)", cyclic, None);

    let k44: Vec<Vec<f64>> = [(0, 1.0), (1, 1.0), (0, -1.0), (1, -1.0), (2, 1.0), (3, 1.0), (2, -1.0), (3, -1.0)]
        .iter()
        .map(|&(axis, s)| (0..4).map(|k| if k == axis { s } else { 0.0 }).collect())
        .collect();
    let edges = (0..4).flat_map(|i| (4..8).map(move |j| [i, j])).collect();
    write(&dir, "k44_embedding.json", "K4,4 embedding", k44, Some(edges));

    let translated = polygon(6, 1.0, 1.0)
        .into_iter()
        .map(|v| vec![v[0] + 5.0, v[1]])
        .collect();
    write(&dir, "invalid/hexagon_translated.json", "translated hexagon", translated, None);
    write(
        &dir,
        "invalid/square_with_center.json",
        "square with centre point",
        vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![0.0, 0.0]],
        None,
    );
}

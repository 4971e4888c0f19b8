//! Brute-force reference computations written against the raw face list
//! only: no marginals, operators or decompositions from the library.
#![allow(dead_code)]

use hdxsym::complex::{random_product, random_sparse};
use hdxsym::{ColorSet, FaceFunction, PartiteComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `E[g | x_S]` evaluated at every top face.
pub fn conditional(x: &PartiteComplex, g: &[f64], s: &[usize]) -> Vec<f64> {
    let faces: Vec<&[u32]> = x.faces().collect();
    faces
        .iter()
        .map(|w| {
            let (mut num, mut den) = (0.0, 0.0);
            for (k, v) in faces.iter().enumerate() {
                if s.iter().all(|&c| w[c] == v[c]) {
                    num += x.weight(k) * g[k];
                    den += x.weight(k);
                }
            }
            num / den
        })
        .collect()
}

fn colors_of(mask: usize, d: usize) -> Vec<usize> {
    (0..d).filter(|i| mask >> i & 1 == 1).collect()
}

/// `f^{=S}` at every top face for every `S` (indexed by bitmask).
pub fn efron_stein(x: &PartiteComplex, g: &[f64]) -> Vec<Vec<f64>> {
    let d = x.d();
    let cond: Vec<Vec<f64>> = (0..1usize << d).map(|m| conditional(x, g, &colors_of(m, d))).collect();
    (0..1usize << d)
        .map(|s| {
            let mut out = vec![0.0; x.len()];
            for t in 0..1usize << d {
                if t & !s != 0 {
                    continue;
                }
                let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                for (o, c) in out.iter_mut().zip(&cond[t]) {
                    *o += sign * c;
                }
            }
            out
        })
        .collect()
}

/// `(Σ μ(x)|g(x)|^q)^{1/q}` over top faces.
pub fn norm(x: &PartiteComplex, g: &[f64], q: f64) -> f64 {
    g.iter()
        .enumerate()
        .map(|(k, v)| x.weight(k) * v.abs().powf(q))
        .sum::<f64>()
        .powf(1.0 / q)
}

pub fn inner(x: &PartiteComplex, a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).enumerate().map(|(k, (u, v))| x.weight(k) * u * v).sum()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn random_sparse_complex(rng: &mut ChaCha8Rng, max_d: usize, max_k: usize, max_faces: usize) -> Arc<PartiteComplex> {
    let d = rng.random_range(2..=max_d);
    let sizes: Vec<usize> = (0..d).map(|_| rng.random_range(2..=max_k)).collect();
    let n = rng.random_range(d..=max_faces);
    Arc::new(random_sparse(d, &sizes, n, rng.random()).unwrap())
}

pub fn random_product_complex(rng: &mut ChaCha8Rng, max_d: usize, max_k: usize) -> Arc<PartiteComplex> {
    let d = rng.random_range(2..=max_d);
    let sizes: Vec<usize> = (0..d).map(|_| rng.random_range(2..=max_k)).collect();
    Arc::new(random_product(&sizes, rng.random()).unwrap())
}

pub fn random_function(rng: &mut ChaCha8Rng, x: &Arc<PartiteComplex>) -> FaceFunction {
    let vals = (0..x.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
    FaceFunction::on_faces(Arc::clone(x), vals).unwrap()
}

pub fn random_r(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..=2.0)).collect()
}

pub fn set(mask: usize) -> ColorSet {
    ColorSet::from_bits(mask as u32)
}

pub fn pm(v: u32) -> f64 {
    if v == 0 {
        1.0
    } else {
        -1.0
    }
}

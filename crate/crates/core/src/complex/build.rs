use super::PartiteComplex;
use crate::error::{HdxError, Result};
use crate::util::{factorial, permutations};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Largest support produced by [`tensor_power`].
pub const TENSOR_POWER_CAP: usize = 1 << 20;

/// Build a complex from explicit weighted faces, inferring each ground set
/// size as one more than the largest vertex id used on that color.
pub fn build_explicit(entries: Vec<(Vec<u32>, f64)>) -> Result<PartiteComplex> {
    let d = entries.first().ok_or(HdxError::EmptyComplex)?.0.len();
    let mut sizes = vec![0usize; d];
    for (index, (face, _)) in entries.iter().enumerate() {
        if face.len() != d {
            return Err(HdxError::InconsistentArity {
                index,
                expected: d,
                found: face.len(),
            });
        }
        for (c, &v) in face.iter().enumerate() {
            sizes[c] = sizes[c].max(v as usize + 1);
        }
    }
    PartiteComplex::new(sizes, entries)
}

/// Full product complex with the product measure. Zero-probability vertices
/// are dropped from the support; distributions are normalized if needed.
pub fn build_product(marginals: &[Vec<f64>]) -> Result<PartiteComplex> {
    let mut normalized = Vec::with_capacity(marginals.len());
    for (color, m) in marginals.iter().enumerate() {
        if m.is_empty() {
            return Err(HdxError::EmptyMarginal { color });
        }
        if let Some((index, &w)) = m.iter().enumerate().find(|(_, w)| !(**w >= 0.0) || !w.is_finite()) {
            return Err(HdxError::NonPositiveWeight { index, weight: w });
        }
        let total: f64 = m.iter().sum();
        if total <= 0.0 {
            return Err(HdxError::EmptyMarginal { color });
        }
        normalized.push(m.iter().map(|w| w / total).collect::<Vec<f64>>());
    }
    let sizes: Vec<usize> = normalized.iter().map(|m| m.len()).collect();
    let mut entries = vec![(Vec::new(), 1.0)];
    for m in &normalized {
        let mut next = Vec::with_capacity(entries.len() * m.len());
        for (prefix, w) in &entries {
            for (v, &p) in m.iter().enumerate() {
                if p > 0.0 {
                    let mut face: Vec<u32> = prefix.clone();
                    face.push(v as u32);
                    next.push((face, w * p));
                }
            }
        }
        entries = next;
    }
    Ok(PartiteComplex::from_sorted_unchecked(sizes, entries))
}

/// The uniform measure on `[k]^d`.
pub fn uniform_cube(d: usize, k: usize) -> Result<PartiteComplex> {
    build_product(&vec![vec![1.0; k]; d])
}

/// Multiply every weight by `1 + u`, `u ~ U[-eps, eps]` drawn in face order
/// from a ChaCha8 stream seeded with `seed`, then renormalize. The support is
/// unchanged.
pub fn perturb(x: &PartiteComplex, eps: f64, seed: u64) -> Result<PartiteComplex> {
    if !(0.0..1.0).contains(&eps) {
        return Err(HdxError::InvalidParameter(format!(
            "perturbation magnitude {eps} outside [0, 1)"
        )));
    }
    if eps == 0.0 {
        return Ok(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = x
        .weights()
        .iter()
        .map(|w| w * (1.0 + rng.random_range(-eps..=eps)))
        .collect();
    let total: f64 = raw.iter().sum();
    let entries = x
        .faces()
        .zip(raw)
        .map(|(f, w)| (f.to_vec(), w / total))
        .collect();
    Ok(PartiteComplex::from_sorted_unchecked(x.color_sizes().to_vec(), entries))
}

/// Embed a weighted `d`-uniform hypergraph as the partite complex holding
/// every ordering of every face, each ordering carrying `weight / d!`.
/// Every color's ground set is the whole vertex universe.
pub fn embed_symmetrized(top_faces: &[(Vec<u32>, f64)]) -> Result<PartiteComplex> {
    let d = top_faces.first().ok_or(HdxError::EmptyComplex)?.0.len();
    let mut universe = 0usize;
    for (face, _) in top_faces {
        if face.len() != d {
            return Err(HdxError::UnequalFaceSize(d, face.len()));
        }
        let distinct: BTreeSet<u32> = face.iter().copied().collect();
        if distinct.len() != d {
            return Err(HdxError::InvalidParameter(format!(
                "face {face:?} repeats a vertex"
            )));
        }
        universe = universe.max(face.iter().map(|&v| v as usize + 1).max().unwrap_or(0));
    }
    let orderings = permutations(d);
    let scale = factorial(d) as f64;
    let mut entries = Vec::with_capacity(top_faces.len() * orderings.len());
    for (face, w) in top_faces {
        let mut sorted = face.clone();
        sorted.sort_unstable();
        for pi in &orderings {
            entries.push((pi.iter().map(|&k| sorted[k]).collect(), w / scale));
        }
    }
    PartiteComplex::new(vec![universe; d], entries)
}

/// The `dt`-partite complex of `t` independent copies of `x` under the
/// product measure. Copy `j` occupies colors `jd..(j+1)d`.
pub fn tensor_power(x: &PartiteComplex, t: usize) -> Result<PartiteComplex> {
    if t == 0 {
        return Err(HdxError::InvalidParameter("tensor power t must be >= 1".into()));
    }
    if t == 1 {
        return Ok(x.clone());
    }
    let n = x.len();
    let size = (0..t).try_fold(1usize, |acc, _| acc.checked_mul(n));
    match size {
        Some(s) if s <= TENSOR_POWER_CAP => {}
        _ => {
            return Err(HdxError::CapExceeded {
                what: "tensor power support",
                limit: TENSOR_POWER_CAP,
                actual: size.unwrap_or(usize::MAX),
            })
        }
    }
    let mut entries: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..t {
        let mut next = Vec::with_capacity(entries.len() * n);
        for (prefix, w) in &entries {
            for k in 0..n {
                let mut face = prefix.clone();
                face.extend_from_slice(x.face(k));
                next.push((face, w * x.weight(k)));
            }
        }
        entries = next;
    }
    let sizes = x.color_sizes().repeat(t);
    Ok(PartiteComplex::from_sorted_unchecked(sizes, entries))
}

/// `n_faces` distinct faces drawn uniformly from `∏ [sizes_i]` with weights
/// uniform in `[0.05, 1]`, normalized. `n_faces` is clipped to the size of
/// the full product.
pub fn random_sparse(d: usize, sizes: &[usize], n_faces: usize, seed: u64) -> Result<PartiteComplex> {
    if sizes.len() != d || sizes.contains(&0) {
        return Err(HdxError::InvalidParameter(format!(
            "need {d} positive ground set sizes, got {sizes:?}"
        )));
    }
    let full: usize = sizes.iter().product();
    let target = n_faces.clamp(1, full);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    while chosen.len() < target {
        let face: Vec<u32> = sizes.iter().map(|&k| rng.random_range(0..k as u32)).collect();
        chosen.insert(face);
    }
    let entries = chosen
        .into_iter()
        .map(|f| (f, rng.random_range(0.05..=1.0)))
        .collect();
    Ok(PartiteComplex::from_sorted_unchecked(sizes.to_vec(), entries))
}

/// A product complex whose per-color marginals are drawn with entries
/// uniform in `[0.05, 1]` and normalized.
pub fn random_product(sizes: &[usize], seed: u64) -> Result<PartiteComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let marginals: Vec<Vec<f64>> = sizes
        .iter()
        .map(|&k| (0..k).map(|_| rng.random_range(0.05..=1.0)).collect())
        .collect();
    build_product(&marginals)
}

impl Clone for PartiteComplex {
    fn clone(&self) -> Self {
        let entries = self
            .faces()
            .zip(self.weights())
            .map(|(f, &w)| (f.to_vec(), w * self.raw_total))
            .collect();
        let mut c = PartiteComplex::from_sorted_unchecked(self.color_sizes.clone(), entries);
        // rescaling can move the last bit; keep the exact weights and id
        c.weights = self.weights.clone();
        c.raw_total = self.raw_total;
        c.id = self.id;
        c
    }
}

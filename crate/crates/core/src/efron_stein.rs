//! Efron-Stein decomposition `f = Σ_S f^{=S}` on an arbitrary partite complex,
//! where `f^{=S} = Σ_{T⊆S} (−1)^{|S∖T|} E_T f`.

use crate::colors::{sign_of_parity, ColorSet};
use crate::complex::{PartiteComplex, SubAssignment};
use crate::error::{HdxError, Result};
use crate::function::FaceFunction;
use crate::walk::{conditional_values, laplacian};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// All `2^d` components of a top-face function. Component `S` is stored on
/// `X[S]`, since it depends only on `x_S`.
#[derive(Debug, Clone)]
pub struct EfronSteinDecomposition {
    complex: Arc<PartiteComplex>,
    components: Vec<FaceFunction>,
}

/// Per-level weights `W_i = Σ_{|S|=i} ‖f^{=S}‖₂²` and pairings `⟨f, f^{=i}⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelProfile {
    pub weight_2: Vec<f64>,
    pub pairing: Vec<f64>,
}

impl LevelProfile {
    /// `|Σ_i W_i − ‖f‖₂²|`, zero on product complexes.
    pub fn parseval_slack(&self, norm2_sq: f64) -> f64 {
        (self.weight_2.iter().sum::<f64>() - norm2_sq).abs()
    }
}

/// A measured quantity next to the bound it is compared against, together
/// with the expansion parameter and dimension it was measured at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlackRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub gamma: Option<f64>,
    pub d: usize,
}

/// Total influence computed as `Σ_i ⟨f, L_i f⟩` and as `Σ_i i⟨f, f^{=i}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalInfluence {
    pub laplacian: f64,
    pub levels: f64,
}

impl TotalInfluence {
    pub fn discrepancy(&self) -> f64 {
        (self.laplacian - self.levels).abs()
    }
}

fn require_top(f: &FaceFunction) -> Result<()> {
    if f.colors() != f.complex().colors() {
        return Err(HdxError::DomainMismatch(format!(
            "expected a function on top faces, got one on {}",
            f.colors()
        )));
    }
    Ok(())
}

/// Compute every `f^{=S}` by inclusion-exclusion over the projections `E_T f`.
pub fn decompose(f: &FaceFunction) -> Result<EfronSteinDecomposition> {
    require_top(f)?;
    let x = Arc::clone(f.complex());
    let d = x.d();
    let full = x.colors();
    // E_T f on X[T], for every T
    let projections: Vec<Vec<f64>> = (0..1u32 << d)
        .into_par_iter()
        .map(|t| conditional_values(&x, f.values(), full, ColorSet::from_bits(t)))
        .collect();
    let components = (0..1u32 << d)
        .into_par_iter()
        .map(|s| {
            let s = ColorSet::from_bits(s);
            let n = x.marginal(s).expect("validated").len();
            let mut vals = vec![0.0; n];
            for t in s.subsets() {
                let sign = sign_of_parity(s.len() - t.len());
                let map = x.projection_map(s, t).expect("subset");
                let et = &projections[t.bits() as usize];
                for (v, &k) in vals.iter_mut().zip(&map) {
                    *v += sign * et[k];
                }
            }
            FaceFunction::new(Arc::clone(&x), s, vals).expect("sizes match")
        })
        .collect();
    Ok(EfronSteinDecomposition { complex: x, components })
}

impl EfronSteinDecomposition {
    pub fn complex(&self) -> &Arc<PartiteComplex> {
        &self.complex
    }

    pub fn d(&self) -> usize {
        self.complex.d()
    }

    /// `f^{=S}` on `X[S]`.
    pub fn component(&self, s: ColorSet) -> &FaceFunction {
        &self.components[s.bits() as usize]
    }

    /// `f^{=S}` lifted to top faces.
    pub fn component_lifted(&self, s: ColorSet) -> FaceFunction {
        self.component(s).lift()
    }

    pub fn components(&self) -> impl Iterator<Item = (ColorSet, &FaceFunction)> {
        self.components
            .iter()
            .enumerate()
            .map(|(k, c)| (ColorSet::from_bits(k as u32), c))
    }

    fn sum_where(&self, keep: impl Fn(ColorSet) -> bool) -> FaceFunction {
        let mut out = vec![0.0; self.complex.len()];
        for (s, c) in self.components() {
            if keep(s) {
                for (o, v) in out.iter_mut().zip(c.lift().values()) {
                    *o += v;
                }
            }
        }
        FaceFunction::on_faces(Arc::clone(&self.complex), out).expect("sizes match")
    }

    /// `f^{≤i} = Σ_{|S|≤i} f^{=S}` on top faces.
    pub fn truncate(&self, i: usize) -> Result<FaceFunction> {
        if i > self.d() {
            return Err(HdxError::InvalidParameter(format!(
                "truncation level {i} exceeds d = {}",
                self.d()
            )));
        }
        Ok(self.sum_where(|s| s.len() <= i))
    }

    /// `f^{=i} = Σ_{|S|=i} f^{=S}` on top faces.
    pub fn level(&self, i: usize) -> Result<FaceFunction> {
        if i > self.d() {
            return Err(HdxError::InvalidParameter(format!("level {i} exceeds d = {}", self.d())));
        }
        Ok(self.sum_where(|s| s.len() == i))
    }

    /// `Σ_S f^{=S}`, which reproduces `f` on any complex.
    pub fn reconstruct(&self) -> FaceFunction {
        self.sum_where(|_| true)
    }

    /// `Σ_{T⊆S} f^{=T}` lifted to top faces; equals `E_S f` on any complex.
    pub fn partial_sum(&self, s: ColorSet) -> FaceFunction {
        self.sum_where(|t| t.is_subset(s))
    }

    pub fn level_profile(&self, f: &FaceFunction) -> Result<LevelProfile> {
        let d = self.d();
        let mut weight_2 = vec![0.0; d + 1];
        for (s, c) in self.components() {
            weight_2[s.len()] += c.moment(2.0);
        }
        let pairing = (0..=d)
            .map(|i| f.inner(&self.level(i)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelProfile { weight_2, pairing })
    }

    /// `⟨f^{=S}, f^{=T}⟩`, zero for `S ≠ T` on product complexes.
    pub fn cross_inner(&self, s: ColorSet, t: ColorSet) -> f64 {
        self.component(s).inner(self.component(t)).expect("same complex")
    }

    /// Largest `|⟨f^{=S}, f^{=T}⟩|` over `S ≠ T`, as a slack record.
    pub fn orthogonality_slack(&self, gamma: Option<f64>) -> SlackRecord {
        let n = self.components.len();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                let v = self.cross_inner(ColorSet::from_bits(a as u32), ColorSet::from_bits(b as u32));
                worst = worst.max(v.abs());
            }
        }
        SlackRecord {
            lhs: worst,
            rhs: 0.0,
            gamma,
            d: self.d(),
        }
    }

    /// `‖(f^{=S})^{=T}‖_q`: how far component `S` is from being its own
    /// decomposition. Zero on products for `T ≠ S`.
    pub fn closure_defect(&self, s: ColorSet, t: ColorSet, q: f64) -> Result<f64> {
        let again = decompose(&self.component_lifted(s))?;
        let c = again.component(t);
        if t == s {
            Ok(c.sub(self.component(s))?.norm(q))
        } else {
            Ok(c.norm(q))
        }
    }

    /// `‖E_T f^{=S}‖_q` for `T ⊉ S`; exactly zero on products.
    pub fn downward_norm(&self, s: ColorSet, t: ColorSet, q: f64) -> Result<f64> {
        if s.is_subset(t) {
            return Err(HdxError::InvalidParameter(format!("{t} contains {s}")));
        }
        let x = &self.complex;
        let lifted = self.component_lifted(s);
        let vals = conditional_values(x, lifted.values(), x.colors(), t);
        Ok(FaceFunction::new(Arc::clone(x), t, vals)?.norm(q))
    }

    /// `‖M f^{=S} − λ_S f^{=S}‖_q` for `M = Σ_T α_T E_T` and
    /// `λ_S = Σ_{T⊇S} α_T`; zero on products.
    pub fn eigen_defect(&self, alphas: &[(ColorSet, f64)], s: ColorSet, q: f64) -> Result<f64> {
        let x = &self.complex;
        let g = self.component_lifted(s);
        let mut mg = vec![0.0; x.len()];
        let mut lambda = 0.0;
        for &(t, a) in alphas {
            x.check_colors(t)?;
            let e = crate::walk::projection_values(x, g.values(), t);
            for (m, v) in mg.iter_mut().zip(e) {
                *m += a * v;
            }
            if s.is_subset(t) {
                lambda += a;
            }
        }
        let diff: Vec<f64> = mg.iter().zip(g.values()).map(|(m, v)| m - lambda * v).collect();
        Ok(FaceFunction::on_faces(Arc::clone(x), diff)?.norm(q))
    }
}

/// `‖f^{=S}‖_q ≤ 2^{|S|}‖f‖_q`, returned as `(lhs, rhs)`.
pub fn contraction_check(f: &FaceFunction, s: ColorSet, q: f64) -> Result<(f64, f64)> {
    let dec = decompose(f)?;
    Ok((dec.component(s).norm(q), 2f64.powi(s.len() as i32) * f.norm(q)))
}

/// `I[f]` two ways. They agree on any complex.
pub fn total_influence(f: &FaceFunction) -> Result<TotalInfluence> {
    require_top(f)?;
    let x = f.complex();
    let mut lap = 0.0;
    for i in 0..x.d() {
        lap += f.inner(&laplacian(x, i)?.apply(f)?)?;
    }
    let dec = decompose(f)?;
    let mut levels = 0.0;
    for i in 1..=x.d() {
        levels += i as f64 * f.inner(&dec.level(i)?)?;
    }
    Ok(TotalInfluence {
        laplacian: lap,
        levels,
    })
}

/// Largest discrepancy over (a sample of) the support between
/// `f^{=I∪B}(y_I, x_B, z)` and `Σ_{J⊆I} (−1)^{|I|−|J|} (f|_{y_J})^{=B}(x_B, z)`.
///
/// With `budget ≥ |support|` every top face is checked; otherwise a seeded
/// sample of `budget` faces is.
pub fn restriction_identity_check(
    f: &FaceFunction,
    i_set: ColorSet,
    b_set: ColorSet,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    require_top(f)?;
    if !i_set.is_disjoint(b_set) {
        return Err(HdxError::OverlappingColorSets(i_set.to_vec(), b_set.to_vec()));
    }
    let x = f.complex();
    x.check_colors(i_set.union(b_set))?;
    let dec = decompose(f)?;
    let lhs = dec.component_lifted(i_set.union(b_set));
    let faces: Vec<usize> = if budget >= x.len() {
        (0..x.len()).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = sample(&mut rng, x.len(), budget).into_vec();
        v.sort_unstable();
        v
    };
    let mut cache: HashMap<(u32, Vec<u32>), EfronSteinDecomposition> = HashMap::new();
    let mut worst = 0.0f64;
    for &face in &faces {
        let w = x.face(face);
        let mut rhs = 0.0;
        for j in i_set.subsets() {
            let yj = SubAssignment::of_face(w, j);
            let key = (j.bits(), yj.values.clone());
            if !cache.contains_key(&key) {
                cache.insert(key.clone(), decompose(&f.restrict(&yj)?)?);
            }
            let local = &cache[&key];
            let rest = j.complement(x.d());
            let b_local = b_set.relative_to(rest);
            let comp = local.component(b_local);
            let proj: Vec<u32> = b_set.iter().map(|c| w[c]).collect();
            rhs += sign_of_parity(i_set.len() - j.len()) * comp.evaluate_values(&proj)?;
        }
        worst = worst.max((lhs.at_face(face) - rhs).abs());
    }
    Ok(worst)
}

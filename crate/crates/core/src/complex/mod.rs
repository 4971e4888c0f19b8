//! Weighted `d`-partite complexes, their marginals and links.
//!
//! A complex is a probability distribution over a finite support of top
//! faces `x = (x_0, …, x_{d-1})`, one vertex per color. The support is kept
//! in lexicographic order and every derived object (marginals, links,
//! function tables) iterates in that order.

mod build;

pub use build::{
    build_explicit, build_product, embed_symmetrized, perturb, random_product, random_sparse,
    tensor_power, uniform_cube,
};

use crate::colors::{ColorSet, MAX_COLORS};
use crate::error::{HdxError, Result};
use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::{Arc, RwLock};

/// Relative deviation of the raw total weight from 1 above which a complex
/// is flagged as renormalized.
pub const RENORMALIZATION_FLAG: f64 = 1e-6;

/// Ordered color subset together with one vertex per color, e.g. a face of
/// the marginal `X[S]`. `values[k]` is the vertex of the `k`-th smallest
/// color in `colors`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct SubAssignment {
    pub colors: ColorSet,
    pub values: Vec<u32>,
}

impl SubAssignment {
    pub fn new(colors: ColorSet, values: Vec<u32>) -> Result<Self> {
        if colors.len() != values.len() {
            return Err(HdxError::InvalidParameter(format!(
                "sub-assignment on {} colors given {} values",
                colors.len(),
                values.len()
            )));
        }
        Ok(SubAssignment { colors, values })
    }

    pub fn empty() -> Self {
        SubAssignment {
            colors: ColorSet::EMPTY,
            values: Vec::new(),
        }
    }

    /// Project a full face onto `colors`.
    pub fn of_face(face: &[u32], colors: ColorSet) -> Self {
        SubAssignment {
            colors,
            values: colors.iter().map(|c| face[c]).collect(),
        }
    }

    pub fn value_of(&self, color: usize) -> Option<u32> {
        self.colors.rank_of(color).map(|k| self.values[k])
    }
}

/// The distribution of `x_S` under the top-face measure: the support of
/// `X[S]` in lexicographic order with its probabilities, and the class of
/// every top face.
#[derive(Debug)]
pub struct MeasureView {
    colors: ColorSet,
    support: Vec<u32>,
    probs: Vec<f64>,
    face_class: Vec<u32>,
    index: HashMap<Box<[u32]>, usize>,
}

impl MeasureView {
    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The `k`-th support element (vertices in increasing color order).
    pub fn element(&self, k: usize) -> &[u32] {
        let w = self.colors.len();
        &self.support[k * w..(k + 1) * w]
    }

    pub fn elements(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.len()).map(move |k| self.element(k))
    }

    pub fn position(&self, values: &[u32]) -> Option<usize> {
        self.index.get(values).copied()
    }

    /// Index in this marginal of the projection of top face `face`.
    pub fn class_of_face(&self, face: usize) -> usize {
        self.face_class[face] as usize
    }

    pub fn face_classes(&self) -> &[u32] {
        &self.face_class
    }

    pub fn sub_assignment(&self, k: usize) -> SubAssignment {
        SubAssignment {
            colors: self.colors,
            values: self.element(k).to_vec(),
        }
    }
}

/// A weighted `d`-partite complex with a probability measure on its top faces.
pub struct PartiteComplex {
    id: u64,
    d: usize,
    color_sizes: Vec<usize>,
    faces: Vec<u32>,
    weights: Vec<f64>,
    raw_total: f64,
    index: HashMap<Box<[u32]>, usize>,
    marginals: RwLock<HashMap<u32, Arc<MeasureView>>>,
}

impl std::fmt::Debug for PartiteComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartiteComplex")
            .field("id", &format_args!("{:016x}", self.id))
            .field("d", &self.d)
            .field("color_sizes", &self.color_sizes)
            .field("faces", &self.len())
            .finish()
    }
}

impl PartiteComplex {
    /// Validate, sort and normalize a list of weighted faces.
    ///
    /// Rejects duplicate faces, nonpositive weights, ragged arities and
    /// vertices outside the declared ground sets.
    pub fn new(color_sizes: Vec<usize>, entries: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        let d = color_sizes.len();
        if d > MAX_COLORS {
            return Err(HdxError::TooManyColors {
                d,
                limit: MAX_COLORS,
            });
        }
        if entries.is_empty() {
            return Err(HdxError::EmptyComplex);
        }
        for (index, (face, w)) in entries.iter().enumerate() {
            if face.len() != d {
                return Err(HdxError::InconsistentArity {
                    index,
                    expected: d,
                    found: face.len(),
                });
            }
            if !(*w > 0.0) || !w.is_finite() {
                return Err(HdxError::NonPositiveWeight { index, weight: *w });
            }
            for (color, &v) in face.iter().enumerate() {
                if v as usize >= color_sizes[color] {
                    return Err(HdxError::VertexOutOfRange {
                        color,
                        vertex: v,
                        size: color_sizes[color],
                    });
                }
            }
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(HdxError::DuplicateFace {
                    face: pair[0].0.clone(),
                });
            }
        }
        Ok(Self::from_sorted_unchecked(color_sizes, entries))
    }

    /// `entries` must be sorted, duplicate-free, with positive weights.
    pub(crate) fn from_sorted_unchecked(color_sizes: Vec<usize>, entries: Vec<(Vec<u32>, f64)>) -> Self {
        let d = color_sizes.len();
        let raw_total: f64 = entries.iter().map(|e| e.1).sum();
        let mut faces = Vec::with_capacity(entries.len() * d);
        let mut weights = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (k, (face, w)) in entries.into_iter().enumerate() {
            faces.extend_from_slice(&face);
            weights.push(w / raw_total);
            index.insert(face.into_boxed_slice(), k);
        }
        let mut hasher = DefaultHasher::new();
        d.hash(&mut hasher);
        color_sizes.hash(&mut hasher);
        faces.hash(&mut hasher);
        for w in &weights {
            w.to_bits().hash(&mut hasher);
        }
        PartiteComplex {
            id: hasher.finish(),
            d,
            color_sizes,
            faces,
            weights,
            raw_total,
            index,
            marginals: RwLock::new(HashMap::new()),
        }
    }

    /// Content hash; equal ids mean equal complexes for all practical purposes.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn colors(&self) -> ColorSet {
        ColorSet::full(self.d)
    }

    pub fn color_sizes(&self) -> &[usize] {
        &self.color_sizes
    }

    /// Number of top faces in the support.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn face(&self, k: usize) -> &[u32] {
        &self.faces[k * self.d..(k + 1) * self.d]
    }

    pub fn faces(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.len()).map(move |k| self.face(k))
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn face_index(&self, face: &[u32]) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// Total weight before normalization.
    pub fn normalization_factor(&self) -> f64 {
        self.raw_total
    }

    /// True when load-time normalization moved the total weight by more than
    /// [`RENORMALIZATION_FLAG`].
    pub fn was_renormalized(&self) -> bool {
        (self.raw_total - 1.0).abs() > RENORMALIZATION_FLAG
    }

    pub(crate) fn check_colors(&self, s: ColorSet) -> Result<()> {
        if s.span() > self.d {
            return Err(HdxError::ColorOutOfRange {
                color: s.span() - 1,
                d: self.d,
            });
        }
        Ok(())
    }

    /// The marginal `X[S]`; `S = ∅` is the unit point mass. Cached per complex.
    pub fn marginal(&self, s: ColorSet) -> Result<Arc<MeasureView>> {
        self.check_colors(s)?;
        if let Some(m) = self.marginals.read().expect("marginal cache poisoned").get(&s.bits()) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(self.build_marginal(s));
        let mut cache = self.marginals.write().expect("marginal cache poisoned");
        Ok(Arc::clone(cache.entry(s.bits()).or_insert(m)))
    }

    fn build_marginal(&self, s: ColorSet) -> MeasureView {
        let n = self.len();
        let width = s.len();
        let colors = s.to_vec();
        let mut keyed: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|k| {
                let face = self.face(k);
                (colors.iter().map(|&c| face[c]).collect(), k)
            })
            .collect();
        keyed.sort();
        let mut support = Vec::new();
        let mut probs: Vec<f64> = Vec::new();
        let mut face_class = vec![0u32; n];
        let mut index = HashMap::new();
        let mut last: Option<&Vec<u32>> = None;
        for (key, k) in &keyed {
            if last != Some(key) {
                index.insert(key.clone().into_boxed_slice(), probs.len());
                support.extend_from_slice(key);
                probs.push(0.0);
                last = Some(key);
            }
            let cls = probs.len() - 1;
            probs[cls] += self.weights[*k];
            face_class[*k] = cls as u32;
        }
        debug_assert_eq!(support.len(), probs.len() * width);
        MeasureView {
            colors: s,
            support,
            probs,
            face_class,
            index,
        }
    }

    /// For `T ⊆ S`, the index in `X[T]` of the projection of every element of `X[S]`.
    pub fn projection_map(&self, from: ColorSet, to: ColorSet) -> Result<Vec<usize>> {
        if !to.is_subset(from) {
            return Err(HdxError::DomainMismatch(format!(
                "cannot project {from} onto non-subset {to}"
            )));
        }
        let ms = self.marginal(from)?;
        let mt = self.marginal(to)?;
        let mut map = vec![0usize; ms.len()];
        for f in 0..self.len() {
            map[ms.class_of_face(f)] = mt.class_of_face(f);
        }
        Ok(map)
    }

    /// Probability of a sub-assignment (0 if infeasible).
    pub fn probability(&self, xs: &SubAssignment) -> Result<f64> {
        let m = self.marginal(xs.colors)?;
        Ok(m.position(&xs.values).map_or(0.0, |k| m.probs()[k]))
    }

    /// The link of `x_S`: the complex on colors `[d] \ S` (re-indexed in
    /// increasing order) with the conditional measure given `x_S`.
    pub fn link(&self, xs: &SubAssignment) -> Result<PartiteComplex> {
        self.check_colors(xs.colors)?;
        let rest = xs.colors.complement(self.d);
        let rest_colors = rest.to_vec();
        let m = self.marginal(xs.colors)?;
        let cls = m.position(&xs.values).ok_or_else(|| HdxError::InfeasibleConditioning {
            colors: xs.colors.to_vec(),
            values: xs.values.clone(),
        })?;
        let entries: Vec<(Vec<u32>, f64)> = (0..self.len())
            .filter(|&f| m.class_of_face(f) == cls)
            .map(|f| {
                let face = self.face(f);
                (rest_colors.iter().map(|&c| face[c]).collect(), self.weights[f])
            })
            .collect();
        // faces are sorted lexicographically and share x_S, so the projections stay sorted
        let sizes = rest_colors.iter().map(|&c| self.color_sizes[c]).collect();
        Ok(PartiteComplex::from_sorted_unchecked(sizes, entries))
    }

    /// Top-face indices (in order) whose projection onto `xs.colors` equals `xs`.
    pub fn faces_extending(&self, xs: &SubAssignment) -> Result<Vec<usize>> {
        let m = self.marginal(xs.colors)?;
        let cls = m.position(&xs.values).ok_or_else(|| HdxError::InfeasibleConditioning {
            colors: xs.colors.to_vec(),
            values: xs.values.clone(),
        })?;
        Ok((0..self.len()).filter(|&f| m.class_of_face(f) == cls).collect())
    }

    /// Whether the measure is the product of its one-color marginals (within `tol`).
    pub fn is_product(&self, tol: f64) -> bool {
        let singles: Vec<Arc<MeasureView>> = (0..self.d)
            .map(|c| self.marginal(ColorSet::singleton(c)).expect("color in range"))
            .collect();
        let support_size: usize = singles.iter().map(|m| m.len()).product();
        if support_size != self.len() {
            return false;
        }
        (0..self.len()).all(|f| {
            let p: f64 = singles.iter().map(|m| m.probs()[m.class_of_face(f)]).product();
            (p - self.weights[f]).abs() <= tol
        })
    }
}

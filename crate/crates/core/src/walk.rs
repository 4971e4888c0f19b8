//! Averaging operators on face functions: projections `E_T`, swap walks
//! `A_{S,T}` and their stationary parts `Π_{S,T}`, noise operators `T_r`,
//! coordinate-wise noise `T^S_r`, and Laplacians `L_i`.
//!
//! Operators are lazy descriptors bound to a complex. `apply` runs the exact
//! linear action by summation over the top faces; `materialize` tabulates the
//! matrix column by column.

use crate::colors::ColorSet;
use crate::complex::PartiteComplex;
use crate::error::{HdxError, Result};
use crate::function::FaceFunction;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

/// `(A_{S→T} g)(y_T) = E[g(x_S) | x_T = y_T]`, for arbitrary color sets.
pub(crate) fn conditional_values(x: &PartiteComplex, g: &[f64], from: ColorSet, to: ColorSet) -> Vec<f64> {
    let ms = x.marginal(from).expect("validated color set");
    let mt = x.marginal(to).expect("validated color set");
    let mut num = vec![0.0; mt.len()];
    for f in 0..x.len() {
        num[mt.class_of_face(f)] += x.weight(f) * g[ms.class_of_face(f)];
    }
    num.iter().zip(mt.probs()).map(|(n, p)| n / p).collect()
}

/// `E_T g` for `g` on top faces, lifted back to top faces.
pub(crate) fn projection_values(x: &PartiteComplex, g: &[f64], onto: ColorSet) -> Vec<f64> {
    let full = x.colors();
    if onto == full {
        return g.to_vec();
    }
    let mt = x.marginal(onto).expect("validated color set");
    let reduced = conditional_values(x, g, full, onto);
    (0..x.len()).map(|f| reduced[mt.class_of_face(f)]).collect()
}

/// Coefficient `∏_{i∈S} r_i ∏_{i∉S} (1 − r_i)` of `E_S` in `T_r`.
pub(crate) fn noise_coefficient(r: &[f64], s: ColorSet) -> f64 {
    r.iter()
        .enumerate()
        .map(|(i, &ri)| if s.contains(i) { ri } else { 1.0 - ri })
        .product()
}

/// Coefficient `r_{S∖T} ∏_{i∈T}(1 − r_i)` of `E_{[d]∖T}` in `T^S_r`.
pub(crate) fn coord_noise_coefficient(r: &[f64], s: ColorSet, t: ColorSet) -> f64 {
    let kept: f64 = s.difference(t).iter().map(|i| r[i]).product();
    let resampled: f64 = t.iter().map(|i| 1.0 - r[i]).product();
    kept * resampled
}

/// What an [`OperatorHandle`] computes.
#[derive(Clone, Debug)]
pub enum OperatorKind {
    Identity,
    /// `A_{S,T}`: conditional expectation from `X[S]` to `X[T]`.
    Conditional,
    /// `Π_{S,T}`: the constant `E[g]` on `X[T]`.
    Stationary,
    /// `E_T` acting on top-face functions, result lifted to top faces.
    Projection(ColorSet),
    /// `T_r`, one parameter per color.
    Noise(Vec<f64>),
    /// `T^S_r`, one parameter per color (entries outside `S` unused).
    CoordNoise(ColorSet, Vec<f64>),
    /// `L_i = I − E_{[d]∖{i}}`.
    Laplacian(usize),
    /// `Σ c_k M_k` over handles sharing domain and codomain.
    Combination(Vec<(f64, OperatorHandle)>),
    /// `M_1 M_2 ⋯ M_k`; `M_k` is applied first.
    Composition(Vec<OperatorHandle>),
}

/// A linear operator between face-function spaces of one complex.
#[derive(Clone)]
pub struct OperatorHandle {
    complex: Arc<PartiteComplex>,
    domain: ColorSet,
    codomain: ColorSet,
    kind: OperatorKind,
}

impl std::fmt::Debug for OperatorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// A materialized operator: rows indexed by the codomain support, columns by
/// the domain support, together with both measures.
#[derive(Debug, Clone)]
pub struct WeightedMatrix {
    pub matrix: DMatrix<f64>,
    pub domain_measure: Vec<f64>,
    pub codomain_measure: Vec<f64>,
}

impl WeightedMatrix {
    pub fn new(matrix: DMatrix<f64>, domain_measure: Vec<f64>, codomain_measure: Vec<f64>) -> Result<Self> {
        if matrix.ncols() != domain_measure.len() || matrix.nrows() != codomain_measure.len() {
            return Err(HdxError::DomainMismatch(format!(
                "{}x{} matrix with measures of sizes {} and {}",
                matrix.nrows(),
                matrix.ncols(),
                codomain_measure.len(),
                domain_measure.len()
            )));
        }
        Ok(WeightedMatrix {
            matrix,
            domain_measure,
            codomain_measure,
        })
    }

    /// The same operator in unweighted `ℓ_q` coordinates:
    /// `D_out^{1/q} M D_in^{-1/q}`, so that `‖M‖_{L_q→L_q}` is the `ℓ_q→ℓ_q` norm
    /// of the result.
    pub fn rescaled(&self, q: f64) -> DMatrix<f64> {
        let mut m = self.matrix.clone();
        for (i, mut row) in m.row_iter_mut().enumerate() {
            let a = self.codomain_measure[i].powf(1.0 / q);
            for (j, v) in row.iter_mut().enumerate() {
                *v *= a / self.domain_measure[j].powf(1.0 / q);
            }
        }
        m
    }

    /// `‖M‖_{2→2}` in the measure-weighted geometry.
    pub fn spectral_norm(&self) -> f64 {
        let m = self.rescaled(2.0);
        if m.is_empty() {
            return 0.0;
        }
        top_singular(&m).0
    }

    /// Adjoint with respect to the weighted inner products:
    /// `M* = D_in^{-1} Mᵀ D_out`.
    pub fn adjoint(&self) -> WeightedMatrix {
        let mut m = self.matrix.transpose();
        for (i, mut row) in m.row_iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v *= self.codomain_measure[j] / self.domain_measure[i];
            }
        }
        WeightedMatrix {
            matrix: m,
            domain_measure: self.codomain_measure.clone(),
            codomain_measure: self.domain_measure.clone(),
        }
    }

    /// `self − other`.
    pub fn sub(&self, other: &WeightedMatrix) -> WeightedMatrix {
        WeightedMatrix {
            matrix: &self.matrix - &other.matrix,
            domain_measure: self.domain_measure.clone(),
            codomain_measure: self.codomain_measure.clone(),
        }
    }
}

/// Largest singular value and a unit right singular vector, from the
/// symmetric eigenproblem of `AᵀA`. The value is `‖Av‖₂` for the returned `v`.
// nalgebra's `svd(_, true)` misreports the top value on some tall matrices
pub(crate) fn top_singular(a: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = (a.transpose() * a).symmetric_eigen();
    let k = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(k).into_owned();
    ((a * &v).norm(), v)
}

/// Per-process cache of materialized operators keyed by complex and kind.
#[derive(Default)]
pub struct MaterializationCache {
    inner: Mutex<HashMap<String, Arc<WeightedMatrix>>>,
}

impl MaterializationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_materialize(&self, op: &OperatorHandle) -> Arc<WeightedMatrix> {
        let key = op.key();
        if let Some(m) = self.inner.lock().expect("cache poisoned").get(&key) {
            return Arc::clone(m);
        }
        let m = Arc::new(op.materialize());
        Arc::clone(self.inner.lock().expect("cache poisoned").entry(key).or_insert(m))
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_params(x: &PartiteComplex, r: &[f64]) -> Result<()> {
    if r.len() != x.d() {
        return Err(HdxError::InvalidParameter(format!(
            "noise vector of length {} on a {}-color complex",
            r.len(),
            x.d()
        )));
    }
    Ok(())
}

/// `E_T` on top-face functions.
pub fn projection_e(x: &Arc<PartiteComplex>, onto: ColorSet) -> Result<OperatorHandle> {
    x.check_colors(onto)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: x.colors(),
        codomain: x.colors(),
        kind: OperatorKind::Projection(onto),
    })
}

/// `A_{S,T}` for any color sets (`S = [d]` gives `E_T` as a map into `X[T]`).
pub fn conditional(x: &Arc<PartiteComplex>, from: ColorSet, to: ColorSet) -> Result<OperatorHandle> {
    x.check_colors(from)?;
    x.check_colors(to)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: from,
        codomain: to,
        kind: OperatorKind::Conditional,
    })
}

/// `Π_{S,T}`.
pub fn stationary(x: &Arc<PartiteComplex>, from: ColorSet, to: ColorSet) -> Result<OperatorHandle> {
    x.check_colors(from)?;
    x.check_colors(to)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: from,
        codomain: to,
        kind: OperatorKind::Stationary,
    })
}

/// The swap walk `A_{S,T}` between disjoint nonempty color sets, with its
/// stationary operator `Π_{S,T}`.
pub fn swap_walk(x: &Arc<PartiteComplex>, s: ColorSet, t: ColorSet) -> Result<(OperatorHandle, OperatorHandle)> {
    if !s.is_disjoint(t) {
        return Err(HdxError::OverlappingColorSets(s.to_vec(), t.to_vec()));
    }
    if s.is_empty() || t.is_empty() {
        return Err(HdxError::InvalidParameter("swap walk needs nonempty color sets".into()));
    }
    Ok((conditional(x, s, t)?, stationary(x, s, t)?))
}

/// `T_r f = Σ_S ∏_{i∈S} r_i ∏_{i∉S}(1 − r_i) E_S f`.
pub fn noise_operator(x: &Arc<PartiteComplex>, r: &[f64]) -> Result<OperatorHandle> {
    check_params(x, r)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: x.colors(),
        codomain: x.colors(),
        kind: OperatorKind::Noise(r.to_vec()),
    })
}

/// `T_ρ` with `ρ` broadcast to every color.
pub fn noise_scalar(x: &Arc<PartiteComplex>, rho: f64) -> OperatorHandle {
    noise_operator(x, &vec![rho; x.d()]).expect("broadcast has length d")
}

/// `T^S_r f = Σ_{T⊆S} r_{S∖T} ∏_{i∈T}(1 − r_i) E_{[d]∖T} f`. `r` has one entry
/// per color of the complex; entries outside `S` are ignored.
pub fn coord_noise(x: &Arc<PartiteComplex>, s: ColorSet, r: &[f64]) -> Result<OperatorHandle> {
    check_params(x, r)?;
    x.check_colors(s)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: x.colors(),
        codomain: x.colors(),
        kind: OperatorKind::CoordNoise(s, r.to_vec()),
    })
}

/// `T^{i}_{ρ} = ρ·I + (1 − ρ)·E_{[d]∖{i}}`.
pub fn coord_noise_single(x: &Arc<PartiteComplex>, color: usize, rho: f64) -> Result<OperatorHandle> {
    let mut r = vec![1.0; x.d()];
    *r.get_mut(color).ok_or(HdxError::ColorOutOfRange { color, d: x.d() })? = rho;
    coord_noise(x, ColorSet::singleton(color), &r)
}

/// `T^{π(1)}_{r_{π(1)}} ⋯ T^{π(d)}_{r_{π(d)}}`.
pub fn ordered_coord_noise(x: &Arc<PartiteComplex>, r: &[f64], order: &[usize]) -> Result<OperatorHandle> {
    check_params(x, r)?;
    if order.len() != x.d() || ColorSet::from_colors(order.iter().copied()) != x.colors() {
        return Err(HdxError::InvalidParameter(format!("{order:?} is not a permutation of the colors")));
    }
    let factors = order
        .iter()
        .map(|&c| coord_noise_single(x, c, r[c]))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: x.colors(),
        codomain: x.colors(),
        kind: OperatorKind::Composition(factors),
    })
}

/// `L_i = I − E_{[d]∖{i}}`.
pub fn laplacian(x: &Arc<PartiteComplex>, color: usize) -> Result<OperatorHandle> {
    if color >= x.d() {
        return Err(HdxError::ColorOutOfRange { color, d: x.d() });
    }
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: x.colors(),
        codomain: x.colors(),
        kind: OperatorKind::Laplacian(color),
    })
}

pub fn identity(x: &Arc<PartiteComplex>, s: ColorSet) -> Result<OperatorHandle> {
    x.check_colors(s)?;
    Ok(OperatorHandle {
        complex: Arc::clone(x),
        domain: s,
        codomain: s,
        kind: OperatorKind::Identity,
    })
}

impl OperatorHandle {
    pub fn complex(&self) -> &Arc<PartiteComplex> {
        &self.complex
    }

    pub fn domain(&self) -> ColorSet {
        self.domain
    }

    pub fn codomain(&self) -> ColorSet {
        self.codomain
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// `Σ c_k M_k`; every term must share domain and codomain.
    pub fn combination(terms: Vec<(f64, OperatorHandle)>) -> Result<OperatorHandle> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| HdxError::InvalidParameter("empty combination".into()))?;
        let (complex, domain, codomain) = (Arc::clone(&first.complex), first.domain, first.codomain);
        for (_, t) in &terms {
            if t.complex.id() != complex.id() || t.domain != domain || t.codomain != codomain {
                return Err(HdxError::DomainMismatch(format!(
                    "cannot combine {} with {}",
                    first.key(),
                    t.key()
                )));
            }
        }
        Ok(OperatorHandle {
            complex,
            domain,
            codomain,
            kind: OperatorKind::Combination(terms),
        })
    }

    /// `self − other`.
    pub fn minus(&self, other: &OperatorHandle) -> Result<OperatorHandle> {
        Self::combination(vec![(1.0, self.clone()), (-1.0, other.clone())])
    }

    pub fn scaled(&self, c: f64) -> OperatorHandle {
        OperatorHandle {
            complex: Arc::clone(&self.complex),
            domain: self.domain,
            codomain: self.codomain,
            kind: OperatorKind::Combination(vec![(c, self.clone())]),
        }
    }

    /// `self ∘ inner` (inner applied first).
    pub fn compose(&self, inner: &OperatorHandle) -> Result<OperatorHandle> {
        if inner.codomain != self.domain || inner.complex.id() != self.complex.id() {
            return Err(HdxError::DomainMismatch(format!(
                "cannot compose {} after {}",
                self.key(),
                inner.key()
            )));
        }
        Ok(OperatorHandle {
            complex: Arc::clone(&self.complex),
            domain: inner.domain,
            codomain: self.codomain,
            kind: OperatorKind::Composition(vec![self.clone(), inner.clone()]),
        })
    }

    /// Adjoint with respect to the measure-weighted inner products.
    pub fn adjoint(&self) -> OperatorHandle {
        let kind = match &self.kind {
            OperatorKind::Combination(terms) => {
                OperatorKind::Combination(terms.iter().map(|(c, t)| (*c, t.adjoint())).collect())
            }
            OperatorKind::Composition(factors) => {
                OperatorKind::Composition(factors.iter().rev().map(|t| t.adjoint()).collect())
            }
            other => other.clone(),
        };
        OperatorHandle {
            complex: Arc::clone(&self.complex),
            domain: self.codomain,
            codomain: self.domain,
            kind,
        }
    }

    /// Whether the operator is a Markov averaging operator (maps 1 to 1 and
    /// contracts every `q`-norm) for its current parameters.
    pub fn is_averaging(&self) -> bool {
        let unit = |v: &f64| (0.0..=1.0).contains(v);
        match &self.kind {
            OperatorKind::Identity
            | OperatorKind::Conditional
            | OperatorKind::Stationary
            | OperatorKind::Projection(_) => true,
            OperatorKind::Noise(r) => r.iter().all(unit),
            OperatorKind::CoordNoise(s, r) => s.iter().all(|i| unit(&r[i])),
            OperatorKind::Laplacian(_) => false,
            OperatorKind::Combination(terms) => {
                terms.len() == 1 && terms[0].0 == 1.0 && terms[0].1.is_averaging()
            }
            OperatorKind::Composition(factors) => factors.iter().all(|f| f.is_averaging()),
        }
    }

    /// Stable textual descriptor, used as a cache key.
    pub fn key(&self) -> String {
        let mut s = format!("{:016x}:{}->{}:", self.complex.id(), self.domain, self.codomain);
        self.describe(&mut s);
        s
    }

    fn describe(&self, out: &mut String) {
        let floats = |out: &mut String, r: &[f64]| {
            for v in r {
                let _ = write!(out, "{:016x},", v.to_bits());
            }
        };
        match &self.kind {
            OperatorKind::Identity => out.push_str("I"),
            OperatorKind::Conditional => out.push_str("A"),
            OperatorKind::Stationary => out.push_str("Pi"),
            OperatorKind::Projection(t) => {
                let _ = write!(out, "E{t}");
            }
            OperatorKind::Noise(r) => {
                out.push_str("T[");
                floats(out, r);
                out.push(']');
            }
            OperatorKind::CoordNoise(s, r) => {
                let _ = write!(out, "T{s}[");
                floats(out, r);
                out.push(']');
            }
            OperatorKind::Laplacian(i) => {
                let _ = write!(out, "L{i}");
            }
            OperatorKind::Combination(terms) => {
                out.push_str("Sum(");
                for (c, t) in terms {
                    let _ = write!(out, "{:016x}*", c.to_bits());
                    t.describe(out);
                    out.push(';');
                }
                out.push(')');
            }
            OperatorKind::Composition(factors) => {
                out.push_str("Prod(");
                for t in factors {
                    t.describe(out);
                    out.push(';');
                }
                out.push(')');
            }
        }
    }

    /// Exact linear action on a function of the domain.
    pub fn apply(&self, f: &FaceFunction) -> Result<FaceFunction> {
        if f.complex().id() != self.complex.id() || f.colors() != self.domain {
            return Err(HdxError::DomainMismatch(format!(
                "operator {} applied to a function on {} of {:016x}",
                self.key(),
                f.colors(),
                f.complex().id()
            )));
        }
        let out = self.apply_values(f.values());
        FaceFunction::new(Arc::clone(&self.complex), self.codomain, out)
    }

    pub(crate) fn apply_values(&self, g: &[f64]) -> Vec<f64> {
        let x = &*self.complex;
        match &self.kind {
            OperatorKind::Identity => g.to_vec(),
            OperatorKind::Conditional => conditional_values(x, g, self.domain, self.codomain),
            OperatorKind::Stationary => {
                let ms = x.marginal(self.domain).expect("validated");
                let mean: f64 = ms.probs().iter().zip(g).map(|(p, v)| p * v).sum();
                vec![mean; x.marginal(self.codomain).expect("validated").len()]
            }
            OperatorKind::Projection(t) => projection_values(x, g, *t),
            OperatorKind::Noise(r) => {
                let mut out = vec![0.0; g.len()];
                for s in ColorSet::all(x.d()) {
                    let c = noise_coefficient(r, s);
                    if c != 0.0 {
                        axpy(&mut out, c, &projection_values(x, g, s));
                    }
                }
                out
            }
            OperatorKind::CoordNoise(s, r) => {
                let full = x.colors();
                let mut out = vec![0.0; g.len()];
                for t in s.subsets() {
                    let c = coord_noise_coefficient(r, *s, t);
                    if c != 0.0 {
                        axpy(&mut out, c, &projection_values(x, g, full.difference(t)));
                    }
                }
                out
            }
            OperatorKind::Laplacian(i) => {
                let e = projection_values(x, g, x.colors().remove(*i));
                g.iter().zip(e).map(|(a, b)| a - b).collect()
            }
            OperatorKind::Combination(terms) => {
                let n = x.marginal(self.codomain).expect("validated").len();
                let mut out = vec![0.0; n];
                for (c, t) in terms {
                    axpy(&mut out, *c, &t.apply_values(g));
                }
                out
            }
            OperatorKind::Composition(factors) => factors
                .iter()
                .rev()
                .fold(g.to_vec(), |acc, t| t.apply_values(&acc)),
        }
    }

    /// Tabulate the operator: column `k` is the image of the indicator of the
    /// `k`-th domain support element.
    pub fn materialize(&self) -> WeightedMatrix {
        let x = &*self.complex;
        let dom = x.marginal(self.domain).expect("validated");
        let cod = x.marginal(self.codomain).expect("validated");
        let mut m = DMatrix::zeros(cod.len(), dom.len());
        let mut e = vec![0.0; dom.len()];
        for k in 0..dom.len() {
            e[k] = 1.0;
            let col = self.apply_values(&e);
            m.set_column(k, &nalgebra::DVector::from_vec(col));
            e[k] = 0.0;
        }
        WeightedMatrix {
            matrix: m,
            domain_measure: dom.probs().to_vec(),
            codomain_measure: cod.probs().to_vec(),
        }
    }
}

fn axpy(out: &mut [f64], c: f64, v: &[f64]) {
    for (o, x) in out.iter_mut().zip(v) {
        *o += c * x;
    }
}

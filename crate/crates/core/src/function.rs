//! Real-valued functions on the support of a marginal `X[S]`.

use crate::colors::ColorSet;
use crate::complex::{MeasureView, PartiteComplex, SubAssignment};
use crate::error::{HdxError, Result};
use std::sync::Arc;

/// A function on the support of `X[S]`, stored as one value per support
/// element in the marginal's lexicographic order. All norms and inner
/// products are taken against the marginal measure.
#[derive(Clone)]
pub struct FaceFunction {
    complex: Arc<PartiteComplex>,
    measure: Arc<MeasureView>,
    values: Vec<f64>,
}

impl std::fmt::Debug for FaceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FaceFunction")
            .field("complex", &format_args!("{:016x}", self.complex.id()))
            .field("colors", &self.colors())
            .field("values", &self.values)
            .finish()
    }
}

impl FaceFunction {
    pub fn new(complex: Arc<PartiteComplex>, colors: ColorSet, values: Vec<f64>) -> Result<Self> {
        let measure = complex.marginal(colors)?;
        if values.len() != measure.len() {
            return Err(HdxError::DomainMismatch(format!(
                "{} values for a support of size {}",
                values.len(),
                measure.len()
            )));
        }
        Ok(FaceFunction {
            complex,
            measure,
            values,
        })
    }

    /// A function on top faces.
    pub fn on_faces(complex: Arc<PartiteComplex>, values: Vec<f64>) -> Result<Self> {
        let full = complex.colors();
        Self::new(complex, full, values)
    }

    /// Tabulate `g` over the support of `X[S]`; `g` receives the vertices in
    /// increasing color order.
    pub fn from_fn(complex: Arc<PartiteComplex>, colors: ColorSet, g: impl Fn(&[u32]) -> f64) -> Result<Self> {
        let measure = complex.marginal(colors)?;
        let values = measure.elements().map(g).collect();
        Ok(FaceFunction {
            complex,
            measure,
            values,
        })
    }

    pub fn constant(complex: Arc<PartiteComplex>, colors: ColorSet, c: f64) -> Result<Self> {
        let n = complex.marginal(colors)?.len();
        Self::new(complex, colors, vec![c; n])
    }

    /// Indicator of the `k`-th support element.
    pub fn basis(complex: Arc<PartiteComplex>, colors: ColorSet, k: usize) -> Result<Self> {
        let n = complex.marginal(colors)?.len();
        let mut v = vec![0.0; n];
        *v.get_mut(k).ok_or_else(|| HdxError::InvalidParameter(format!("basis index {k} >= {n}")))? = 1.0;
        Self::new(complex, colors, v)
    }

    pub fn complex(&self) -> &Arc<PartiteComplex> {
        &self.complex
    }

    pub fn colors(&self) -> ColorSet {
        self.measure.colors()
    }

    pub fn measure(&self) -> &Arc<MeasureView> {
        &self.measure
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Whether `other` lives on the same complex and color set.
    pub fn same_domain(&self, other: &FaceFunction) -> bool {
        self.complex.id() == other.complex.id() && self.colors() == other.colors()
    }

    pub(crate) fn check_same_domain(&self, other: &FaceFunction) -> Result<()> {
        if self.same_domain(other) {
            Ok(())
        } else {
            Err(HdxError::DomainMismatch(format!(
                "functions on {} of {:016x} and {} of {:016x}",
                self.colors(),
                self.complex.id(),
                other.colors(),
                other.complex.id()
            )))
        }
    }

    /// Value at a sub-assignment of exactly this function's colors.
    pub fn evaluate(&self, xs: &SubAssignment) -> Result<f64> {
        if xs.colors != self.colors() {
            return Err(HdxError::DomainMismatch(format!(
                "evaluating a function on {} at colors {}",
                self.colors(),
                xs.colors
            )));
        }
        self.evaluate_values(&xs.values)
    }

    pub fn evaluate_values(&self, values: &[u32]) -> Result<f64> {
        self.measure
            .position(values)
            .map(|k| self.values[k])
            .ok_or_else(|| HdxError::NotInSupport { face: values.to_vec() })
    }

    /// Value at the projection of top face `face`.
    pub fn at_face(&self, face: usize) -> f64 {
        self.values[self.measure.class_of_face(face)]
    }

    /// The same function viewed on top faces, `x ↦ g(x_S)`.
    pub fn lift(&self) -> FaceFunction {
        if self.colors() == self.complex.colors() {
            return self.clone();
        }
        let values = (0..self.complex.len()).map(|f| self.at_face(f)).collect();
        FaceFunction::on_faces(Arc::clone(&self.complex), values).expect("full marginal")
    }

    /// View on a larger color set `T ⊇ S`.
    pub fn lift_to(&self, colors: ColorSet) -> Result<FaceFunction> {
        if colors == self.colors() {
            return Ok(self.clone());
        }
        let map = self.complex.projection_map(colors, self.colors())?;
        let values = map.iter().map(|&k| self.values[k]).collect();
        FaceFunction::new(Arc::clone(&self.complex), colors, values)
    }

    pub fn expectation(&self) -> f64 {
        self.measure
            .probs()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| p * v)
            .sum()
    }

    /// `‖g‖_q = E[|g|^q]^{1/q}`; `q = ∞` gives the sup over the support.
    pub fn norm(&self, q: f64) -> f64 {
        weighted_norm(&self.values, self.measure.probs(), q)
    }

    /// `E[|g|^q]`.
    pub fn moment(&self, q: f64) -> f64 {
        self.measure
            .probs()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| p * v.abs().powf(q))
            .sum()
    }

    pub fn inner(&self, other: &FaceFunction) -> Result<f64> {
        if self.complex.id() != other.complex.id() {
            return Err(HdxError::DomainMismatch("inner product across complexes".into()));
        }
        if self.colors() == other.colors() {
            return Ok(self
                .measure
                .probs()
                .iter()
                .zip(self.values.iter().zip(&other.values))
                .map(|(p, (a, b))| p * a * b)
                .sum());
        }
        let joint = self.colors().union(other.colors());
        Ok(self.lift_to(joint)?.inner(&other.lift_to(joint)?)?)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> FaceFunction {
        FaceFunction {
            complex: Arc::clone(&self.complex),
            measure: Arc::clone(&self.measure),
            values: self.values.iter().map(|&v| g(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> FaceFunction {
        self.map(|v| c * v)
    }

    /// `self + c * other` on a shared domain.
    pub fn add_scaled(&self, c: f64, other: &FaceFunction) -> Result<FaceFunction> {
        self.check_same_domain(other)?;
        Ok(FaceFunction {
            complex: Arc::clone(&self.complex),
            measure: Arc::clone(&self.measure),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        })
    }

    pub fn sub(&self, other: &FaceFunction) -> Result<FaceFunction> {
        self.add_scaled(-1.0, other)
    }

    /// Pointwise product on a shared domain.
    pub fn mul(&self, other: &FaceFunction) -> Result<FaceFunction> {
        self.check_same_domain(other)?;
        Ok(FaceFunction {
            complex: Arc::clone(&self.complex),
            measure: Arc::clone(&self.measure),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `max |self − other|` over the support.
    pub fn max_abs_diff(&self, other: &FaceFunction) -> Result<f64> {
        self.check_same_domain(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `f|_{x_S}`: restriction of a top-face function to the link of `xs`,
    /// as a function on that link's top faces.
    pub fn restrict(&self, xs: &SubAssignment) -> Result<FaceFunction> {
        if self.colors() != self.complex.colors() {
            return Err(HdxError::DomainMismatch(
                "restriction needs a function on top faces".into(),
            ));
        }
        if xs.colors.is_empty() {
            return Ok(self.clone());
        }
        let link = Arc::new(self.complex.link(xs)?);
        let faces = self.complex.faces_extending(xs)?;
        let values = faces.iter().map(|&f| self.values[f]).collect();
        FaceFunction::on_faces(link, values)
    }
}

/// `(Σ p_k |v_k|^q)^{1/q}`, or `max |v_k|` over positive-probability entries for `q = ∞`.
pub fn weighted_norm(values: &[f64], probs: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values
            .iter()
            .zip(probs)
            .filter(|(_, &p)| p > 0.0)
            .fold(0.0, |m, (v, _)| m.max(v.abs()));
    }
    let s: f64 = values.iter().zip(probs).map(|(v, p)| p * v.abs().powf(q)).sum();
    s.powf(1.0 / q)
}

/// Restriction of a top-face function, free-function form.
pub fn restrict_function(f: &FaceFunction, xs: &SubAssignment) -> Result<FaceFunction> {
    f.restrict(xs)
}

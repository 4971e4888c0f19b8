//! The symmetrized function `f̃(r, x) = Σ_S r_S f^{=S}(x)` on `{±1}^d × X`,
//! the symmetrization sandwich, and the coordinate-wise noise lemmas behind it.

use crate::colors::ColorSet;
use crate::complex::PartiteComplex;
use crate::efron_stein::{decompose, EfronSteinDecomposition, SlackRecord};
use crate::error::{HdxError, Result};
use crate::function::{weighted_norm, FaceFunction};
use crate::walk::{coord_noise, coord_noise_single, noise_operator, ordered_coord_noise};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Largest `d` accepted by the symmetrization tables.
pub const SYM_MAX_D: usize = 12;
/// Largest `2^d · |support|` table.
pub const SYM_MAX_TABLE: usize = 1 << 26;

/// `c_q` for `q ∈ {4, 4/3}`.
pub const C_FOUR: f64 = 0.4;

/// `f̃` tabulated on `{±1}^d × support`. Bit `i` of the row index set means
/// `r_i = −1`.
#[derive(Debug, Clone)]
pub struct SymmetrizedFunction {
    complex: Arc<PartiteComplex>,
    values: Vec<f64>,
}

/// In-place Walsh-Hadamard transform: `v[R] ← Σ_S v[S] (−1)^{|S∩R|}`.
fn hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, t) = (*x + *y, *x - *y);
                *x = s;
                *y = t;
            }
        }
        h *= 2;
    }
}

fn check_size(x: &PartiteComplex) -> Result<()> {
    if x.d() > SYM_MAX_D {
        return Err(HdxError::CapExceeded {
            what: "symmetrization dimension",
            limit: SYM_MAX_D,
            actual: x.d(),
        });
    }
    let table = x.len() << x.d();
    if table > SYM_MAX_TABLE {
        return Err(HdxError::CapExceeded {
            what: "symmetrization table",
            limit: SYM_MAX_TABLE,
            actual: table,
        });
    }
    Ok(())
}

/// `ρ_S = ∏_{i∈S} ρ_i`.
fn rho_of(rho: &[f64], s: ColorSet) -> f64 {
    s.iter().map(|i| rho[i]).product()
}

fn symmetrize_scaled(dec: &EfronSteinDecomposition, rho: &[f64]) -> SymmetrizedFunction {
    let x = dec.complex();
    let (d, n) = (x.d(), x.len());
    let lifted: Vec<FaceFunction> = ColorSet::all(d)
        .map(|s| dec.component_lifted(s).scale(rho_of(rho, s)))
        .collect();
    let mut values = vec![0.0; n << d];
    let mut col = vec![0.0; 1 << d];
    for face in 0..n {
        for (s, c) in col.iter_mut().enumerate() {
            *c = lifted[s].at_face(face);
        }
        hadamard(&mut col);
        for (r, v) in col.iter().enumerate() {
            values[r * n + face] = *v;
        }
    }
    SymmetrizedFunction {
        complex: Arc::clone(x),
        values,
    }
}

/// Tabulate `f̃`.
pub fn symmetrize(f: &FaceFunction) -> Result<SymmetrizedFunction> {
    check_size(f.complex())?;
    let dec = decompose(f)?;
    Ok(symmetrize_scaled(&dec, &vec![1.0; f.complex().d()]))
}

/// Tabulate `Σ_S r_S ρ_S f^{=S}(x)`, the symmetrization of `T_ρ f` in its
/// Efron-Stein form.
pub fn symmetrize_noisy(f: &FaceFunction, rho: &[f64]) -> Result<SymmetrizedFunction> {
    check_size(f.complex())?;
    if rho.len() != f.complex().d() {
        return Err(HdxError::InvalidParameter(format!(
            "noise vector of length {} for d = {}",
            rho.len(),
            f.complex().d()
        )));
    }
    let dec = decompose(f)?;
    Ok(symmetrize_scaled(&dec, rho))
}

impl SymmetrizedFunction {
    pub fn complex(&self) -> &Arc<PartiteComplex> {
        &self.complex
    }

    /// `f̃(r, x_face)` with `r` given by its set of negative coordinates.
    pub fn value(&self, negative: ColorSet, face: usize) -> f64 {
        self.values[negative.bits() as usize * self.complex.len() + face]
    }

    /// The slice `f̃(r, ·)` as a top-face function.
    pub fn slice(&self, negative: ColorSet) -> FaceFunction {
        let n = self.complex.len();
        let start = negative.bits() as usize * n;
        FaceFunction::on_faces(Arc::clone(&self.complex), self.values[start..start + n].to_vec())
            .expect("sizes match")
    }

    /// Boolean Fourier coefficient of `r ↦ f̃(r, x_face)` at `S`.
    pub fn fourier_coefficient(&self, s: ColorSet, face: usize) -> f64 {
        let d = self.complex.d();
        let total: f64 = ColorSet::all(d)
            .map(|neg| {
                let sign = if s.intersection(neg).len() % 2 == 0 { 1.0 } else { -1.0 };
                sign * self.value(neg, face)
            })
            .sum();
        total / (1u64 << d) as f64
    }

    /// `‖f̃‖_q` under uniform `r` times the complex measure.
    pub fn norm(&self, q: f64) -> f64 {
        let n = self.complex.len();
        let scale = 1.0 / (1u64 << self.complex.d()) as f64;
        let probs: Vec<f64> = (0..self.values.len())
            .map(|k| self.complex.weight(k % n) * scale)
            .collect();
        weighted_norm(&self.values, &probs, q)
    }
}

/// `‖\widetilde{T_ρ f}‖_q`.
pub fn sym_noise_norm(f: &FaceFunction, rho: &[f64], q: f64) -> Result<f64> {
    Ok(symmetrize_noisy(f, rho)?.norm(q))
}

/// Which `c_q` and amplification the sandwich uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichParams {
    pub q: f64,
    pub c_q: f64,
    pub amplification: f64,
}

impl SandwichParams {
    /// `c_q = 2/5` for `q ∈ {4, 4/3}`; any other `q` needs an explicit value.
    pub fn new(q: f64, c_q: Option<f64>) -> Result<Self> {
        let c_q = match c_q {
            Some(c) if c > 0.0 && c <= 1.0 => c,
            Some(c) => return Err(HdxError::InvalidParameter(format!("c_q must lie in (0, 1], got {c}"))),
            None if (q - 4.0).abs() < 1e-12 || (q - 4.0 / 3.0).abs() < 1e-12 => C_FOUR,
            None => {
                return Err(HdxError::InvalidParameter(format!(
                    "no default c_q for q = {q}; pass one explicitly"
                )))
            }
        };
        Ok(SandwichParams {
            q,
            c_q,
            amplification: 2.0,
        })
    }
}

/// Both sides of the sandwich
/// `‖\widetilde{T_{c_q} f}‖_q ≤ ‖f‖_q ≤ ‖\widetilde{T_2 f}‖_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub params: SandwichParams,
    pub lower: SlackRecord,
    pub upper: SlackRecord,
}

impl SandwichCheck {
    /// Largest `lhs / rhs` over the two inequalities; at most 1 when both hold
    /// with factor exactly 1.
    pub fn multiplicative_slack(&self) -> f64 {
        let r = |s: &SlackRecord| if s.rhs == 0.0 { if s.lhs == 0.0 { 1.0 } else { f64::INFINITY } } else { s.lhs / s.rhs };
        r(&self.lower).max(r(&self.upper))
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lower.lhs <= self.lower.rhs * (1.0 + tol) + tol && self.upper.lhs <= self.upper.rhs * (1.0 + tol) + tol
    }
}

pub fn sandwich_check(f: &FaceFunction, params: SandwichParams, gamma: Option<f64>) -> Result<SandwichCheck> {
    check_size(f.complex())?;
    let d = f.complex().d();
    let dec = decompose(f)?;
    let fq = f.norm(params.q);
    let low = symmetrize_scaled(&dec, &vec![params.c_q; d]).norm(params.q);
    let high = symmetrize_scaled(&dec, &vec![params.amplification; d]).norm(params.q);
    Ok(SandwichCheck {
        params,
        lower: SlackRecord {
            lhs: low,
            rhs: fq,
            gamma,
            d,
        },
        upper: SlackRecord {
            lhs: fq,
            rhs: high,
            gamma,
            d,
        },
    })
}

/// `c_{d,r} = d³ Σ_S |r_S ∏_{i∉S}(1 − r_i)|`.
pub fn decorrelation_constant(r: &[f64]) -> f64 {
    let d = r.len();
    let sum: f64 = ColorSet::all(d)
        .map(|s| crate::walk::noise_coefficient(r, s).abs())
        .sum();
    (d * d * d) as f64 * sum
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecorrelationCheck {
    pub measured: f64,
    pub constant: f64,
    pub gamma_q: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `‖T_r f − T^π_r f‖_q` against `c_{d,r}·γ_q·‖f‖_q`.
pub fn decorrelation_check(f: &FaceFunction, r: &[f64], pi: &[usize], q: f64, gamma_q: f64) -> Result<DecorrelationCheck> {
    let x = f.complex();
    let direct = noise_operator(x, r)?.apply(f)?;
    let ordered = ordered_coord_noise(x, r, pi)?.apply(f)?;
    let measured = direct.sub(&ordered)?.norm(q);
    let constant = decorrelation_constant(r);
    let bound = constant * gamma_q * f.norm(q);
    Ok(DecorrelationCheck {
        pass: measured <= bound + 1e-9,
        measured,
        constant,
        gamma_q,
        bound,
    })
}

/// Largest `|T^S_r f(x) − T^{x_{S̄}}_r f|_{x_{S̄}}(x_S)|` over the support.
pub fn localization_check(f: &FaceFunction, s: ColorSet, r: &[f64]) -> Result<f64> {
    let x = f.complex();
    let global = coord_noise(x, s, r)?.apply(f)?;
    let outside = s.complement(x.d());
    let m = x.marginal(outside)?;
    let local_r: Vec<f64> = s.iter().map(|i| r[i]).collect();
    let mut worst = 0.0f64;
    for k in 0..m.len() {
        let xs = m.sub_assignment(k);
        let restricted = f.restrict(&xs)?;
        let local = if s.is_empty() {
            restricted
        } else {
            noise_operator(restricted.complex(), &local_r)?.apply(&restricted)?
        };
        for (pos, face) in x.faces_extending(&xs)?.into_iter().enumerate() {
            worst = worst.max((global.at_face(face) - local.at_face(pos)).abs());
        }
    }
    Ok(worst)
}

/// `‖T^i_{1/2} f‖_q ≤ ‖T^i_r f‖_q` with a uniform random sign `r` averaged
/// inside the norm. Returns `(lhs, rhs)`.
pub fn coordinate_symmetrization_check(f: &FaceFunction, color: usize, q: f64) -> Result<(f64, f64)> {
    let x = f.complex();
    let lhs = coord_noise_single(x, color, 0.5)?.apply(f)?.norm(q);
    let plus = coord_noise_single(x, color, 1.0)?.apply(f)?.moment(q);
    let minus = coord_noise_single(x, color, -1.0)?.apply(f)?.moment(q);
    Ok((lhs, (0.5 * (plus + minus)).powf(1.0 / q)))
}

/// A finite real distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteDistribution {
    pub values: Vec<f64>,
    pub probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.len() != probs.len() || values.is_empty() {
            return Err(HdxError::InvalidParameter("values and probabilities must match and be nonempty".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(HdxError::InvalidParameter("probabilities must be nonnegative and sum to 1".into()));
        }
        Ok(FiniteDistribution { values, probs })
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.probs).map(|(v, p)| v * p).sum()
    }

    /// A random distribution on at most `max_support` points, shifted to
    /// mean zero.
    pub fn random_centered(max_support: usize, rng: &mut impl Rng) -> Self {
        let k = rng.random_range(1..=max_support.max(1));
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
        let values: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        FiniteDistribution {
            values: values.iter().map(|v| v - mean).collect(),
            probs,
        }
    }

    /// `‖a + s·X‖_q`.
    pub fn shifted_norm(&self, a: f64, s: f64, q: f64) -> f64 {
        let vals: Vec<f64> = self.values.iter().map(|v| a + s * v).collect();
        weighted_norm(&vals, &self.probs, q)
    }

    /// `‖a + rX‖_q` with `r` a uniform random sign independent of `X`.
    pub fn signed_norm(&self, a: f64, q: f64) -> f64 {
        (0.5 * (self.shifted_norm(a, 1.0, q).powf(q) + self.shifted_norm(a, -1.0, q).powf(q))).powf(1.0 / q)
    }
}

/// Outcome of the one-dimensional lemmas on a single `(a, X)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarCheck {
    /// `‖a + X/2‖_q` vs `‖a + rX‖_q`.
    pub upper: (f64, f64),
    /// `‖a − c X‖_q` vs `‖a + X‖_q`, when a constant is supplied.
    pub lower: Option<(f64, f64)>,
}

impl ScalarCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.upper.0 <= self.upper.1 + tol && self.lower.is_none_or(|(l, r)| l <= r + tol)
    }
}

pub fn scalar_symmetrization_check(a: f64, dist: &FiniteDistribution, q: f64, c: Option<f64>) -> Result<ScalarCheck> {
    let mean = dist.mean();
    if mean.abs() > 1e-12 {
        return Err(HdxError::NonZeroMean(mean));
    }
    Ok(ScalarCheck {
        upper: (dist.shifted_norm(a, 0.5, q), dist.signed_norm(a, q)),
        lower: c.map(|c| (dist.shifted_norm(a, -c, q), dist.shifted_norm(a, 1.0, q))),
    })
}

/// Heuristic `c_q` for `q ∉ {4, 4/3}`: the largest `c` (to within `1e-6`,
/// found by bisection) for which `‖a − cX‖_q ≤ ‖a + X‖_q` holds on a seeded
/// probe family of centered distributions and shifts. For `q < 2` the dual
/// exponent is probed. This is a search result, not a proven constant.
pub fn heuristic_c_q(q: f64, probes: usize, seed: u64) -> Result<f64> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(HdxError::InvalidParameter(format!("q must lie in (1, ∞), got {q}")));
    }
    let q = if q < 2.0 { q / (q - 1.0) } else { q };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family: Vec<(f64, FiniteDistribution)> = (0..probes)
        .map(|_| (rng.random_range(-2.0..2.0), FiniteDistribution::random_centered(6, &mut rng)))
        .collect();
    let ok = |c: f64| {
        family
            .iter()
            .all(|(a, x)| x.shifted_norm(*a, -c, q) <= x.shifted_norm(*a, 1.0, q) * (1.0 + 1e-12))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if ok(hi) {
        return Ok(hi);
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

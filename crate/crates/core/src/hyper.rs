//! Global hypercontractivity: globalness profiles, the Bonami-type bound with
//! restriction norms, the operator form, KKL witnesses, boosters, and notable
//! coordinates.
//!
//! Boolean conventions: booster and notable-coordinate routines take `±1`
//! valued functions, [`kkl_witness`] takes `{0, 1}` valued ones.

use crate::colors::ColorSet;
use crate::complex::{tensor_power, PartiteComplex, SubAssignment};
use crate::efron_stein::{decompose, EfronSteinDecomposition};
use crate::error::{HdxError, Result};
use crate::function::{weighted_norm, FaceFunction};
use crate::symmetrization::symmetrize;
use crate::walk::{conditional_values, noise_scalar};
use serde::Serialize;
use std::sync::Arc;

/// Largest `d` for the exhaustive searches.
pub const SEARCH_MAX_D: usize = 8;
/// Largest restriction size for the exhaustive searches.
pub const SEARCH_MAX_SIZE: usize = 4;
/// The Bonami constant, used literally.
pub const BONAMI_BASE: f64 = 500.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalnessProfile {
    /// `max_{|S|=s, x_S} ‖f|_{x_S}‖₂² / ‖f‖₂²` for `s = 0..=d`.
    pub per_size: Vec<f64>,
    /// Smallest `r` with `‖f|_{x_S}‖₂² ≤ r^{|S|}‖f‖₂²` for every restriction.
    pub minimal_r: f64,
}

/// `S ↦ E[f² | x_S]` on `X[S]`, i.e. squared restriction norms.
fn restriction_sq_norms(f: &FaceFunction, s: ColorSet) -> Vec<f64> {
    let x = f.complex();
    let sq: Vec<f64> = f.values().iter().map(|v| v * v).collect();
    conditional_values(x, &sq, x.colors(), s)
}

fn require_top(f: &FaceFunction) -> Result<()> {
    if f.colors() != f.complex().colors() {
        return Err(HdxError::DomainMismatch("expected a function on top faces".into()));
    }
    Ok(())
}

/// Largest `‖f|_{x_S}‖₂²` over `|S| ≤ i` and feasible `x_S`.
pub fn max_restriction_sq_norm(f: &FaceFunction, i: usize) -> f64 {
    ColorSet::all(f.complex().d())
        .filter(|s| s.len() <= i)
        .flat_map(|s| restriction_sq_norms(f, s))
        .fold(0.0, f64::max)
}

pub fn globalness(f: &FaceFunction) -> Result<GlobalnessProfile> {
    require_top(f)?;
    let norm_sq = f.moment(2.0);
    if norm_sq == 0.0 {
        return Err(HdxError::ZeroFunction);
    }
    let d = f.complex().d();
    let mut per_size = vec![0.0f64; d + 1];
    let mut minimal_r = 1.0f64;
    for s in ColorSet::all(d) {
        let worst = restriction_sq_norms(f, s).into_iter().fold(0.0, f64::max) / norm_sq;
        per_size[s.len()] = per_size[s.len()].max(worst);
        if !s.is_empty() {
            minimal_r = minimal_r.max(worst.powf(1.0 / s.len() as f64));
        }
    }
    Ok(GlobalnessProfile { per_size, minimal_r })
}

fn check_even_q(q: f64) -> Result<u32> {
    if q < 2.0 || q.fract() != 0.0 || (q as u32) % 2 != 0 {
        return Err(HdxError::InvalidParameter(format!("q must be an even integer ≥ 2, got {q}")));
    }
    Ok(q as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BonamiCheck {
    pub i: usize,
    pub q: f64,
    /// `‖f^{≤i}‖_q^q`.
    pub lhs: f64,
    /// `(500q)^{qi} ‖f^{≤i}‖₂² max_{|S|≤i, x_S} ‖f|_{x_S}‖₂^{q−2}`.
    pub rhs: f64,
    pub low_degree_sq: f64,
    pub max_restriction_sq: f64,
    /// `lhs / (‖f^{≤i}‖₂² max ‖f|_{x_S}‖₂^{q−2})`.
    pub restriction_ratio: f64,
    /// `lhs / (‖f^{≤i}‖₂² ‖f‖₂^{q−2})`: the same ratio without restrictions.
    pub norm_ratio: f64,
    pub pass: bool,
}

pub fn bonami_check(f: &FaceFunction, i: usize, q: f64) -> Result<BonamiCheck> {
    require_top(f)?;
    check_even_q(q)?;
    let d = f.complex().d();
    if i > d {
        return Err(HdxError::InvalidParameter(format!("degree {i} exceeds d = {d}")));
    }
    let low = decompose(f)?.truncate(i)?;
    let lhs = low.moment(q);
    let low_degree_sq = low.moment(2.0);
    let max_restriction_sq = max_restriction_sq_norm(f, i);
    let base = low_degree_sq * max_restriction_sq.powf((q - 2.0) / 2.0);
    let rhs = (BONAMI_BASE * q).powf(q * i as f64) * base;
    let plain = low_degree_sq * f.moment(2.0).powf((q - 2.0) / 2.0);
    let ratio = |num: f64, den: f64| if den == 0.0 { if num == 0.0 { 0.0 } else { f64::INFINITY } } else { num / den };
    Ok(BonamiCheck {
        i,
        q,
        lhs,
        rhs,
        low_degree_sq,
        max_restriction_sq,
        restriction_ratio: ratio(lhs, base),
        norm_ratio: ratio(lhs, plain),
        pass: lhs <= rhs * (1.0 + 1e-12),
    })
}

/// Classical cube Bonami `‖f^{≤i}‖₄⁴ ≤ 9^i ‖f^{≤i}‖₂⁴`, as `(lhs, rhs)`.
pub fn classical_bonami(f: &FaceFunction, i: usize) -> Result<(f64, f64)> {
    let low = decompose(f)?.truncate(i)?;
    Ok((low.moment(4.0), 9f64.powi(i as i32) * low.moment(2.0).powi(2)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorFormCheck {
    pub rho: f64,
    pub q: f64,
    pub r: f64,
    /// `‖T_ρ f‖_q`.
    pub lhs: f64,
    /// `‖f‖₂`.
    pub rhs: f64,
    /// `lhs / rhs − 1`.
    pub slack: f64,
    /// Whether `ρ ≤ 1/(rq)`.
    pub in_regime: bool,
}

pub fn operator_form_check(f: &FaceFunction, rho: f64, q: f64) -> Result<OperatorFormCheck> {
    check_even_q(q)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(HdxError::InvalidParameter(format!("ρ must lie in [0, 1], got {rho}")));
    }
    let r = globalness(f)?.minimal_r;
    let lhs = noise_scalar(f.complex(), rho).apply(f)?.norm(q);
    let rhs = f.norm(2.0);
    Ok(OperatorFormCheck {
        rho,
        q,
        r,
        lhs,
        rhs,
        slack: lhs / rhs - 1.0,
        in_regime: rho <= 1.0 / (r * q),
    })
}

/// `f^{⊕t}(x_1, …, x_t) = ∏ f(x_j)` on the `t`-fold product complex.
pub fn power_function(f: &FaceFunction, t: usize) -> Result<FaceFunction> {
    require_top(f)?;
    let x = f.complex();
    let xt = Arc::new(tensor_power(x, t)?);
    if t == 1 {
        return FaceFunction::on_faces(xt, f.values().to_vec());
    }
    let d = x.d();
    FaceFunction::from_fn(Arc::clone(&xt), xt.colors(), |face| {
        face.chunks(d)
            .map(|part| f.evaluate_values(part).expect("each part is a face"))
            .product()
    })
}

/// `⟨f, f^{≤i}⟩ ≤ ‖f‖_{4/3} ‖f^{≤i}‖₄`, as `(lhs, rhs)`.
pub fn level_holder_check(f: &FaceFunction, i: usize) -> Result<(f64, f64)> {
    let low = decompose(f)?.truncate(i)?;
    Ok((f.inner(&low)?, f.norm(4.0 / 3.0) * low.norm(4.0)))
}

fn check_values(f: &FaceFunction, allowed: [f64; 2], what: &'static str) -> Result<()> {
    if f.values().iter().any(|v| !allowed.contains(v)) {
        return Err(HdxError::NonBoolean(what));
    }
    Ok(())
}

fn check_search(x: &PartiteComplex, size_cap: usize) -> Result<()> {
    if x.d() > SEARCH_MAX_D {
        return Err(HdxError::CapExceeded {
            what: "search dimension",
            limit: SEARCH_MAX_D,
            actual: x.d(),
        });
    }
    if size_cap > SEARCH_MAX_SIZE.min(x.d()) {
        return Err(HdxError::CapExceeded {
            what: "restriction size",
            limit: SEARCH_MAX_SIZE.min(x.d()),
            actual: size_cap,
        });
    }
    Ok(())
}

/// Color sets of size at most `cap`, by size and then by sorted color list.
fn sets_up_to(d: usize, cap: usize) -> Vec<ColorSet> {
    let mut sets: Vec<ColorSet> = ColorSet::all(d).filter(|s| s.len() <= cap).collect();
    sets.sort_by_key(|s| (s.len(), s.to_vec()));
    sets
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KklWitness {
    pub restriction: SubAssignment,
    pub density: f64,
}

/// The restriction of size at most `size_cap` maximizing `E[f|_{x_S}]` for a
/// `{0, 1}` valued `f`. Ties go to smaller `|S|`, then to the
/// lexicographically first `(S, x_S)`.
pub fn kkl_witness(f: &FaceFunction, size_cap: usize) -> Result<KklWitness> {
    require_top(f)?;
    check_values(f, [0.0, 1.0], "KKL witness needs a {0,1}-valued function")?;
    let x = f.complex();
    check_search(x, size_cap)?;
    let mut best: Option<KklWitness> = None;
    for s in sets_up_to(x.d(), size_cap) {
        let m = x.marginal(s)?;
        let dens = conditional_values(x, f.values(), x.colors(), s);
        for (k, &v) in dens.iter().enumerate() {
            // marginal elements are in lexicographic order, so the first maximum wins
            if best.as_ref().is_none_or(|b| v > b.density) {
                best = Some(KklWitness {
                    restriction: m.sub_assignment(k),
                    density: v,
                });
            }
        }
    }
    Ok(best.expect("the empty restriction is always feasible"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoosterRecord {
    pub restriction: SubAssignment,
    pub size: usize,
    /// `|E[f|_{x_T}] − E[f]|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoosterSearch {
    pub tau: f64,
    pub size_cap: usize,
    pub boosters: Vec<BoosterRecord>,
    /// `Pr_x[some x_T with |T| ≤ size_cap is a τ-booster]`.
    pub covered_mass: f64,
}

/// All `τ`-boosters of size `1..=size_cap` of a `±1` valued function.
pub fn booster_search(f: &FaceFunction, size_cap: usize, tau: f64) -> Result<BoosterSearch> {
    require_top(f)?;
    check_values(f, [-1.0, 1.0], "booster search needs a ±1-valued function")?;
    if !(tau > 0.0) {
        return Err(HdxError::InvalidParameter(format!("τ must be positive, got {tau}")));
    }
    let x = f.complex();
    check_search(x, size_cap)?;
    let mean = f.expectation();
    let mut boosters = Vec::new();
    let mut covered = vec![false; x.len()];
    for s in sets_up_to(x.d(), size_cap).into_iter().filter(|s| !s.is_empty()) {
        let m = x.marginal(s)?;
        let dev: Vec<f64> = conditional_values(x, f.values(), x.colors(), s)
            .into_iter()
            .map(|e| (e - mean).abs())
            .collect();
        for (face, c) in covered.iter_mut().enumerate() {
            *c |= dev[m.class_of_face(face)] >= tau;
        }
        for (k, &v) in dev.iter().enumerate() {
            if v >= tau {
                boosters.push(BoosterRecord {
                    restriction: m.sub_assignment(k),
                    size: s.len(),
                    deviation: v,
                });
            }
        }
    }
    // stable: ties keep the (size, colors, values) enumeration order
    boosters.sort_by(|a, b| b.deviation.total_cmp(&a.deviation));
    let covered_mass = covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(f, _)| x.weight(f))
        .sum();
    Ok(BoosterSearch {
        tau,
        size_cap,
        boosters,
        covered_mass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NotableCoordinates {
    pub face: Vec<u32>,
    pub tau: f64,
    pub ell: usize,
    pub cap: f64,
    /// `J'_x = { j : Σ_{S∋j} f^{=S}(x)² ≥ τ }`.
    pub candidates: Vec<usize>,
    /// `J_x`: `J'_x` when it fits under the cap, empty otherwise.
    pub selected: Vec<usize>,
    /// `Σ_{S ∉ F_x} f^{=S}(x)²` with `F_x = { S ⊆ J_x : |S| ≤ ℓ }`.
    pub residual_mass: f64,
}

/// Notable coordinates of `f` at a top face, truncated at `c^ℓ`.
pub fn notable_coordinates(
    dec: &EfronSteinDecomposition,
    face: usize,
    tau: f64,
    ell: usize,
    c: f64,
) -> Result<NotableCoordinates> {
    if !(tau > 0.0) {
        return Err(HdxError::InvalidParameter(format!("τ must be positive, got {tau}")));
    }
    let x = dec.complex();
    if face >= x.len() {
        return Err(HdxError::InvalidParameter(format!("face index {face} out of range")));
    }
    let d = x.d();
    let coeff: Vec<f64> = ColorSet::all(d).map(|s| dec.component_lifted(s).at_face(face)).collect();
    let candidates: Vec<usize> = (0..d)
        .filter(|&j| {
            ColorSet::all(d)
                .filter(|s| s.contains(j))
                .map(|s| coeff[s.bits() as usize].powi(2))
                .sum::<f64>()
                >= tau
        })
        .collect();
    let cap = c.powi(ell as i32);
    let selected = if candidates.len() as f64 <= cap { candidates.clone() } else { Vec::new() };
    let j = ColorSet::from_colors(selected.iter().copied());
    let residual_mass = ColorSet::all(d)
        .filter(|s| !(s.is_subset(j) && s.len() <= ell))
        .map(|s| coeff[s.bits() as usize].powi(2))
        .sum();
    Ok(NotableCoordinates {
        face: x.face(face).to_vec(),
        tau,
        ell,
        cap,
        candidates,
        selected,
        residual_mass,
    })
}

/// `E_x Σ_{|S|>ℓ} f^{=S}(x)²`, at most `I[f]/ℓ` on product complexes.
pub fn high_degree_mass(dec: &EfronSteinDecomposition, ell: usize) -> f64 {
    dec.components()
        .filter(|(s, _)| s.len() > ell)
        .map(|(_, c)| c.moment(2.0))
        .sum()
}

/// Largest `‖T_{1/√3} g_x‖₂ − ‖g_x‖_{4/3}` over the boolean columns
/// `g_x = f̃(·, x)`; nonpositive by `(4/3, 2)`-hypercontractivity of the cube.
pub fn two_vs_four_thirds_check(f: &FaceFunction) -> Result<f64> {
    let sym = symmetrize(f)?;
    let dec = decompose(f)?;
    let x = f.complex();
    let d = x.d();
    let lifted: Vec<FaceFunction> = ColorSet::all(d).map(|s| dec.component_lifted(s)).collect();
    let uniform = vec![1.0 / (1u64 << d) as f64; 1 << d];
    let mut worst = f64::NEG_INFINITY;
    for face in 0..x.len() {
        let noisy_sq: f64 = ColorSet::all(d)
            .map(|s| lifted[s.bits() as usize].at_face(face).powi(2) / 3f64.powi(s.len() as i32))
            .sum();
        let column: Vec<f64> = ColorSet::all(d).map(|neg| sym.value(neg, face)).collect();
        worst = worst.max(noisy_sq.sqrt() - weighted_norm(&column, &uniform, 4.0 / 3.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_product, random_product, uniform_cube};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn pm(v: u32) -> f64 {
        if v == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn biased_indicator(d: usize) -> FaceFunction {
        let x = Arc::new(build_product(&vec![vec![0.75, 0.25]; d]).unwrap());
        FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| (v[0] == 1) as u8 as f64).unwrap()
    }

    fn maj3() -> FaceFunction {
        let x = Arc::new(uniform_cube(3, 2).unwrap());
        FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| v.iter().map(|&b| pm(b)).sum::<f64>().signum()).unwrap()
    }

    #[test]
    fn globalness_examples() {
        let x = Arc::new(uniform_cube(3, 2).unwrap());
        let c = FaceFunction::constant(Arc::clone(&x), x.colors(), 2.0).unwrap();
        let g = globalness(&c).unwrap();
        assert!(g.per_size.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert_abs_diff_eq!(g.minimal_r, 1.0, epsilon = 1e-12);
        let parity = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| v.iter().map(|&b| pm(b)).product()).unwrap();
        assert_abs_diff_eq!(globalness(&parity).unwrap().minimal_r, 1.0, epsilon = 1e-12);
        let ind = biased_indicator(2);
        let g = globalness(&ind).unwrap();
        assert_abs_diff_eq!(g.per_size[1], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.minimal_r, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.per_size[0], 1.0, epsilon = 1e-12);
        let zero = FaceFunction::constant(Arc::clone(&x), x.colors(), 0.0).unwrap();
        assert!(matches!(globalness(&zero), Err(HdxError::ZeroFunction)));
    }

    #[test]
    fn bonami_two_dictators() {
        let x = Arc::new(uniform_cube(2, 2).unwrap());
        let f = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| (pm(v[0]) + pm(v[1])) / 2f64.sqrt()).unwrap();
        let b = bonami_check(&f, 1, 4.0).unwrap();
        assert_abs_diff_eq!(b.lhs, 2.0, epsilon = 1e-12);
        assert_relative_eq!(b.rhs, 2000f64.powi(4), max_relative = 1e-12);
        assert!(b.pass);
        let (l, r) = classical_bonami(&f, 1).unwrap();
        assert_abs_diff_eq!(l, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 9.0, epsilon = 1e-12);
        assert!(bonami_check(&f, 1, 3.0).is_err());
    }

    #[test]
    fn bonami_biased_indicator_ratios() {
        let f = biased_indicator(1);
        let b = bonami_check(&f, 1, 4.0).unwrap();
        assert_abs_diff_eq!(b.lhs, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(b.norm_ratio, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.restriction_ratio, 1.0, epsilon = 1e-12);
        assert!(b.pass);
    }

    #[test]
    fn bonami_constant() {
        let x = Arc::new(uniform_cube(2, 3).unwrap());
        let f = FaceFunction::constant(Arc::clone(&x), x.colors(), -3.0).unwrap();
        let b = bonami_check(&f, 2, 4.0).unwrap();
        assert_abs_diff_eq!(b.lhs, 81.0, epsilon = 1e-9);
        assert!(b.pass);
    }

    #[test]
    fn operator_form_examples() {
        let x = Arc::new(uniform_cube(3, 2).unwrap());
        let chi = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| pm(v[0])).unwrap();
        let c = operator_form_check(&chi, 0.25, 4.0).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(c.rhs, 1.0, epsilon = 1e-14);
        assert!(c.in_regime);
        let f = maj3().map(|v| v + 0.5);
        let c = operator_form_check(&f, 0.0, 4.0).unwrap();
        assert_abs_diff_eq!(c.lhs, 0.5, epsilon = 1e-14);
        assert!(c.slack <= 0.0);
    }

    #[test]
    fn tensor_power_noise_multiplies() {
        let x = Arc::new(random_product(&[2, 3], 2).unwrap());
        let f = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| 1.0 + v[0] as f64 - 0.5 * v[1] as f64).unwrap();
        let ft = power_function(&f, 2).unwrap();
        let rho = 0.3;
        for p in [2.0, 4.0] {
            let one = noise_scalar(&x, rho).apply(&f).unwrap().norm(p);
            let two = noise_scalar(ft.complex(), rho).apply(&ft).unwrap().norm(p);
            assert_abs_diff_eq!(two, one * one, epsilon = 1e-12);
        }
        assert!(globalness(&ft).unwrap().minimal_r <= globalness(&f).unwrap().minimal_r + 1e-12);
    }

    #[test]
    fn level_holder() {
        let f = maj3().map(|v| (1.0 - v) / 2.0);
        for i in 0..=3 {
            let (l, r) = level_holder_check(&f, i).unwrap();
            assert!(l <= r + 1e-12);
        }
    }

    #[test]
    fn kkl_examples() {
        let x = Arc::new(uniform_cube(4, 2).unwrap());
        let one = FaceFunction::constant(Arc::clone(&x), x.colors(), 1.0).unwrap();
        let w = kkl_witness(&one, 2).unwrap();
        assert!(w.restriction.colors.is_empty() && w.density == 1.0);
        let ind = biased_indicator(3);
        let w = kkl_witness(&ind, 1).unwrap();
        assert_eq!(w.restriction, SubAssignment::new(ColorSet::singleton(0), vec![1]).unwrap());
        assert_eq!(w.density, 1.0);
        let tribes = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| {
            ((v[0] == 1 && v[1] == 1) || (v[2] == 1 && v[3] == 1)) as u8 as f64
        })
        .unwrap();
        assert_abs_diff_eq!(tribes.expectation(), 7.0 / 16.0, epsilon = 1e-15);
        let w = kkl_witness(&tribes, 2).unwrap();
        assert_eq!(w.restriction, SubAssignment::new(ColorSet::from_colors([0, 1]), vec![1, 1]).unwrap());
        assert_abs_diff_eq!(w.density, 1.0, epsilon = 1e-15);
        let w1 = kkl_witness(&tribes, 1).unwrap();
        assert_abs_diff_eq!(w1.density, 5.0 / 8.0, epsilon = 1e-15);
        assert!(kkl_witness(&maj3(), 1).is_err());
    }

    #[test]
    fn boosters_of_majority() {
        let f = maj3();
        let b = booster_search(&f, 1, 0.4).unwrap();
        assert_eq!(b.boosters.len(), 6);
        assert!(b.boosters.iter().all(|r| (r.deviation - 0.5).abs() < 1e-12 && r.size == 1));
        assert_abs_diff_eq!(b.covered_mass, 1.0, epsilon = 1e-12);
        for r in &b.boosters {
            let restricted = f.restrict(&r.restriction).unwrap();
            assert!((restricted.expectation() - f.expectation()).abs() - r.deviation < 1e-12);
        }
    }

    #[test]
    fn boosters_of_constant_and_parity() {
        let x = Arc::new(uniform_cube(3, 2).unwrap());
        let c = FaceFunction::constant(Arc::clone(&x), x.colors(), 1.0).unwrap();
        assert!(booster_search(&c, 3, 1e-9).unwrap().boosters.is_empty());
        let parity = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| v.iter().map(|&b| pm(b)).product()).unwrap();
        assert!(booster_search(&parity, 2, 1e-9).unwrap().boosters.is_empty());
        let full = booster_search(&parity, 3, 0.5).unwrap();
        assert_eq!(full.boosters.len(), 8);
        assert!(full.boosters.iter().all(|r| r.size == 3));
    }

    #[test]
    fn notable_coordinates_examples() {
        let x = Arc::new(uniform_cube(3, 2).unwrap());
        let chi = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| pm(v[0])).unwrap();
        let dec = decompose(&chi).unwrap();
        for face in 0..x.len() {
            assert_eq!(notable_coordinates(&dec, face, 0.5, 1, 2.0).unwrap().candidates, vec![0]);
        }
        let c = FaceFunction::constant(Arc::clone(&x), x.colors(), 0.7).unwrap();
        let n = notable_coordinates(&decompose(&c).unwrap(), 3, 0.1, 1, 2.0).unwrap();
        assert!(n.candidates.is_empty());
        assert_abs_diff_eq!(n.residual_mass, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn markov_step_on_products() {
        let x = Arc::new(random_product(&[2, 2, 3], 5).unwrap());
        let f = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| if (v[0] + v[1] + v[2]) % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        let dec = decompose(&f).unwrap();
        let inf = crate::efron_stein::total_influence(&f).unwrap().levels;
        for ell in 1..=3 {
            assert!(high_degree_mass(&dec, ell) <= inf / ell as f64 + 1e-12);
        }
    }

    #[test]
    fn two_vs_four_thirds_holds() {
        let x = Arc::new(random_product(&[2, 3, 2], 3).unwrap());
        let f = FaceFunction::from_fn(Arc::clone(&x), x.colors(), |v| if v[1] == 2 || v[0] == v[2] { 1.0 } else { -1.0 }).unwrap();
        assert!(two_vs_four_thirds_check(&f).unwrap() <= 1e-12);
    }
}

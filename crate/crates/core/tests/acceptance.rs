//! Acceptance gate: ten criteria, one line each, nonzero exit on any failure.
//!
//! Runs without the libtest harness so the per-criterion lines are always
//! printed. Reference values come from the brute-force helpers in `common`.

mod common;

use common::*;
use hdxsym::complex::{build_product, perturb, random_product, uniform_cube};
use hdxsym::efron_stein::{decompose, restriction_identity_check, total_influence};
use hdxsym::expansion::{bipartite_walk, gamma_certificate, gamma_q_upper, interpolation_upper, opnorm_q_lower, AscentOptions};
use hdxsym::function::restrict_function;
use hdxsym::harness::builtins::builtin_function;
use hdxsym::harness::suite::{run_suite, ComplexSource, FunctionSource, SuiteConfig};
use hdxsym::hyper::{bonami_check, booster_search, globalness};
use hdxsym::symmetrization::{
    decorrelation_check, decorrelation_constant, localization_check, sandwich_check, scalar_symmetrization_check,
    FiniteDistribution, SandwichParams,
};
use hdxsym::walk::{coord_noise, noise_operator, ordered_coord_noise, projection_e, swap_walk};
use hdxsym::{ColorSet, FaceFunction, PartiteComplex};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn disjoint_pairs(d: usize) -> Vec<(ColorSet, ColorSet)> {
    let mut out = Vec::new();
    for s in 1..1usize << d {
        for t in 1..1usize << d {
            if s & t == 0 {
                out.push((set(s), set(t)));
            }
        }
    }
    out
}

/// Exact identities on random sparse complexes.
fn identities() -> Outcome {
    let tol = 1e-9;
    let mut rng = rng(101);
    let mut worst = 0.0f64;
    let mut track = |what: &str, v: f64, scale: f64| -> Result<(), String> {
        let rel = v / scale.max(1.0);
        worst = worst.max(rel);
        ensure(rel <= tol, || format!("{what}: relative discrepancy {rel:e}"))
    };
    for _ in 0..100 {
        let x = random_sparse_complex(&mut rng, 5, 4, 40);
        let d = x.d();
        let n = x.len();
        for _ in 0..10 {
            let f = random_function(&mut rng, &x);
            let g = f.values().to_vec();
            let sc = max_abs(&g);
            let es = efron_stein(&x, &g);
            let dec = decompose(&f).map_err(|e| e.to_string())?;
            track("sum of components", max_diff(dec.reconstruct().values(), &g), sc)?;
            for s in 0..1usize << d {
                track("component vs oracle", max_diff(dec.component_lifted(set(s)).values(), &es[s]), sc)?;
                let direct = projection_e(&x, set(s)).unwrap().apply(&f).unwrap();
                let oracle = conditional(&x, &g, &set(s).to_vec());
                track("E_S vs oracle", max_diff(direct.values(), &oracle), sc)?;
                track("E_S vs partial sum", max_diff(dec.partial_sum(set(s)).values(), &oracle), sc)?;
            }

            let r = random_r(&mut rng, d);
            let full = noise_operator(&x, &r).unwrap().apply(&f).unwrap();
            let mut by_levels = vec![0.0; n];
            let mut by_definition = vec![0.0; n];
            for s in 0..1usize << d {
                let rs: f64 = set(s).iter().map(|i| r[i]).product();
                let coef: f64 = (0..d).map(|i| if s >> i & 1 == 1 { r[i] } else { 1.0 - r[i] }).product();
                let cs = conditional(&x, &g, &set(s).to_vec());
                for k in 0..n {
                    by_levels[k] += rs * es[s][k];
                    by_definition[k] += coef * cs[k];
                }
            }
            track("T_r vs Σ r_S f^=S", max_diff(full.values(), &by_levels), sc)?;
            track("T_r vs definition", max_diff(full.values(), &by_definition), sc)?;

            let s_mask = rng.random_range(0..1usize << d);
            let coord = coord_noise(&x, set(s_mask), &r).unwrap().apply(&f).unwrap();
            let mut coord_levels = vec![0.0; n];
            let mut coord_def = vec![0.0; n];
            for u in 0..1usize << d {
                let w: f64 = set(u & s_mask).iter().map(|i| r[i]).product();
                for k in 0..n {
                    coord_levels[k] += w * es[u][k];
                }
            }
            for t in 0..1usize << d {
                if t & !s_mask != 0 {
                    continue;
                }
                let kept: f64 = set(s_mask & !t).iter().map(|i| r[i]).product();
                let resampled: f64 = set(t).iter().map(|i| 1.0 - r[i]).product();
                let keep_colors = set(t).complement(d).to_vec();
                let cs = conditional(&x, &g, &keep_colors);
                for k in 0..n {
                    coord_def[k] += kept * resampled * cs[k];
                }
            }
            track("T^S_r vs Σ r_(S∩U) f^=U", max_diff(coord.values(), &coord_levels), sc)?;
            track("T^S_r vs definition", max_diff(coord.values(), &coord_def), sc)?;

            // localization: the link of x_{S̄} sees T_{r_S}, i.e. conditioning on U ∪ S̄
            let loc_set = rng.random_range(1..1usize << d);
            let outside = set(loc_set).complement(d);
            let mut local = vec![0.0; n];
            for u in 0..1usize << d {
                if u & !loc_set != 0 {
                    continue;
                }
                let coef: f64 = set(loc_set)
                    .iter()
                    .map(|i| if u >> i & 1 == 1 { r[i] } else { 1.0 - r[i] })
                    .product();
                let cs = conditional(&x, &g, &set(u).union(outside).to_vec());
                for k in 0..n {
                    local[k] += coef * cs[k];
                }
            }
            let global = coord_noise(&x, set(loc_set), &r).unwrap().apply(&f).unwrap();
            track("localization vs oracle", max_diff(global.values(), &local), sc)?;
            track("localization", localization_check(&f, set(loc_set), &r).unwrap(), sc)?;

            let i_bits = rng.random_range(1..1usize << d);
            let b_bits = rng.random_range(0..1usize << d) & !i_bits;
            let disc = restriction_identity_check(&f, set(i_bits), set(b_bits), usize::MAX, 0).unwrap();
            track("restriction identity", disc, sc)?;

            let ti = total_influence(&f).unwrap();
            let mut lap = 0.0;
            for i in 0..d {
                let others: Vec<usize> = (0..d).filter(|&c| c != i).collect();
                let e = conditional(&x, &g, &others);
                let li: Vec<f64> = g.iter().zip(&e).map(|(a, b)| a - b).collect();
                lap += inner(&x, &g, &li);
            }
            let mut levels = 0.0;
            for s in 0..1usize << d {
                levels += s.count_ones() as f64 * inner(&x, &g, &es[s]);
            }
            let isc = sc * sc * d as f64;
            track("influence vs oracle", (ti.laplacian - lap).abs(), isc)?;
            track("influence two forms", (lap - levels).abs(), isc)?;
            track("influence library forms", ti.discrepancy(), isc)?;
        }
    }
    Ok(format!("100 complexes x 10 functions, worst relative discrepancy {worst:.2e}"))
}

/// Exactness on product complexes.
fn product_exactness() -> Outcome {
    let tol = 1e-9;
    let mut rng = rng(202);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x = random_product_complex(&mut rng, 4, 4);
        let d = x.d();
        for _ in 0..5 {
            let f = random_function(&mut rng, &x);
            let g = f.values().to_vec();
            let sc = max_abs(&g).max(1.0);
            let es = efron_stein(&x, &g);
            let mut parseval = inner(&x, &g, &g);
            for s in 0..1usize << d {
                parseval -= inner(&x, &es[s], &es[s]);
                for t in s + 1..1usize << d {
                    let v = inner(&x, &es[s], &es[t]).abs() / (sc * sc);
                    worst = worst.max(v);
                    ensure(v <= tol, || format!("⟨f^=S, f^=T⟩ = {v:e}"))?;
                }
            }
            let dec = decompose(&f).unwrap();
            let lib_orth = dec.orthogonality_slack(None).lhs / (sc * sc);
            let lib_parseval = dec.level_profile(&f).unwrap().parseval_slack(f.moment(2.0)).abs() / (sc * sc);
            for v in [parseval.abs() / (sc * sc), lib_orth, lib_parseval] {
                worst = worst.max(v);
                ensure(v <= tol, || format!("Parseval/orthogonality slack {v:e}"))?;
            }

            for t in 0..1usize << d {
                for u in 0..1usize << d {
                    let nested = projection_e(&x, set(t)).unwrap().apply(&projection_e(&x, set(u)).unwrap().apply(&f).unwrap()).unwrap();
                    let oracle = conditional(&x, &g, &set(t & u).to_vec());
                    let v = max_diff(nested.values(), &oracle) / sc;
                    worst = worst.max(v);
                    ensure(v <= tol, || format!("E_T E_U vs E_(T∩U): {v:e}"))?;
                }
            }

            let mut perm: Vec<usize> = (0..d).collect();
            for _ in 0..5 {
                perm.shuffle(&mut rng);
                let r = random_r(&mut rng, d);
                let a = noise_operator(&x, &r).unwrap().apply(&f).unwrap();
                let b = ordered_coord_noise(&x, &r, &perm).unwrap().apply(&f).unwrap();
                let v = norm(&x, &a.sub(&b).unwrap().into_values(), 2.0) / sc;
                worst = worst.max(v);
                ensure(v <= tol, || format!("decorrelation error {v:e} for π = {perm:?}"))?;
            }
        }
        for (s, t) in disjoint_pairs(d) {
            let (a, pi) = swap_walk(&x, s, t).unwrap();
            let m = a.minus(&pi).unwrap().materialize();
            let v = m.matrix.amax();
            worst = worst.max(v);
            ensure(v <= tol, || format!("A_(S,T) − Π_(S,T) has entry {v:e} for S = {s}, T = {t}"))?;
        }
    }
    Ok(format!("20 product complexes, worst defect {worst:.2e}"))
}

/// `‖Σ_S c^{|S|} r_S f^{=S}(x)‖_q` over uniform signs `r` and `x ~ μ`.
fn oracle_sym_norm(x: &PartiteComplex, es: &[Vec<f64>], c: f64, q: f64) -> f64 {
    let d = x.d();
    let n = x.len();
    let mut total = 0.0;
    for neg in 0..1usize << d {
        for k in 0..n {
            let mut v = 0.0;
            for (s, comp) in es.iter().enumerate() {
                let sign = if (s & neg).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                v += sign * c.powi(s.count_ones() as i32) * comp[k];
            }
            total += x.weight(k) * v.abs().powf(q);
        }
    }
    (total / (1u64 << d) as f64).powf(1.0 / q)
}

/// Symmetrization sandwich at `c = 2/5`.
fn sandwich() -> Outcome {
    let tol = 1e-9;
    let mut rng = rng(303);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let x = random_product_complex(&mut rng, 4, 3);
        for _ in 0..4 {
            let f = random_function(&mut rng, &x);
            let g = f.values().to_vec();
            let es = efron_stein(&x, &g);
            for q in [4.0, 4.0 / 3.0] {
                let fq = norm(&x, &g, q);
                let low = oracle_sym_norm(&x, &es, 0.4, q);
                let high = oracle_sym_norm(&x, &es, 2.0, q);
                let check = sandwich_check(&f, SandwichParams::new(q, None).unwrap(), None).unwrap();
                ensure((check.lower.lhs - low).abs() <= 1e-12 * low.max(1.0), || {
                    format!("library lower side {} vs oracle {low}", check.lower.lhs)
                })?;
                ensure((check.upper.rhs - high).abs() <= 1e-12 * high.max(1.0), || {
                    format!("library upper side {} vs oracle {high}", check.upper.rhs)
                })?;
                let ratio = (low / fq).max(fq / high);
                worst = worst.max(ratio);
                ensure(ratio <= 1.0 + tol, || format!("q = {q}: multiplicative factor {ratio}"))?;
            }
        }
    }
    Ok(format!("100 functions, q in {{4, 4/3}}, largest lhs/rhs {worst:.12}"))
}

/// One-dimensional lemmas at `q = 4`, `c = 2/5`.
fn scalar_lemmas() -> Outcome {
    let tol = 1e-12;
    let mut rng = rng(404);
    let mut worst = f64::NEG_INFINITY;
    let moment = |pts: &[(f64, f64)]| pts.iter().map(|(v, p)| p * v.powi(4)).sum::<f64>().powf(0.25);
    for _ in 0..1000 {
        let k = rng.random_range(1..=6);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
        let vals: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mean: f64 = vals.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let vals: Vec<f64> = vals.iter().map(|v| v - mean).collect();
        let a = rng.random_range(-2.0..=2.0);
        let at = |s: f64| -> Vec<(f64, f64)> { vals.iter().zip(&probs).map(|(v, p)| (a + s * v, *p)).collect() };
        let half = moment(&at(0.5));
        let mut signed = at(1.0);
        signed.extend(at(-1.0));
        for e in &mut signed {
            e.1 /= 2.0;
        }
        let signed = moment(&signed);
        let lower = moment(&at(-0.4));
        let plus = moment(&at(1.0));
        worst = worst.max(half - signed).max(lower - plus);
        ensure(half <= signed + tol && lower <= plus + tol, || {
            format!("a = {a}, X = {vals:?}: {half} vs {signed}, {lower} vs {plus}")
        })?;
        let dist = FiniteDistribution::new(vals.clone(), probs.clone()).unwrap();
        let lib = scalar_symmetrization_check(a, &dist, 4.0, Some(0.4)).unwrap();
        let (ll, lr) = lib.lower.unwrap();
        ensure(
            (lib.upper.0 - half).abs() < 1e-12 && (lib.upper.1 - signed).abs() < 1e-12 && (ll - lower).abs() < 1e-12 && (lr - plus).abs() < 1e-12,
            || "library norms differ from enumeration".into(),
        )?;
    }
    Ok(format!("1000 distributions, largest lhs − rhs {worst:.3e}"))
}

fn weighted_svd(m: &hdxsym::WeightedMatrix) -> f64 {
    let b = DMatrix::from_fn(m.matrix.nrows(), m.matrix.ncols(), |i, j| {
        m.matrix[(i, j)] * m.codomain_measure[i].sqrt() / m.domain_measure[j].sqrt()
    });
    // the Gram eigenproblem is the reference: nalgebra's SVD with vectors
    // misreports the top value on some tall matrices
    (b.transpose() * &b).symmetric_eigenvalues().max().max(0.0).sqrt()
}

/// Norm estimation against SVD, the interpolation bracket and the two-point
/// closed form.
fn expansion() -> Outcome {
    let mut rng = rng(505);
    let mut worst_svd = 0.0f64;
    for k in 0..50 {
        let (rows, cols) = (rng.random_range(2..=20), rng.random_range(2..=20));
        let mut joint = DMatrix::from_fn(rows, cols, |_, _| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.01..1.0)
            }
        });
        for i in 0..rows.min(cols) {
            joint[(i, i)] += 0.5;
        }
        joint[(rows - 1, cols - 1)] += 0.5;
        let m = bipartite_walk(&joint);
        let svd = weighted_svd(&m);
        let est = opnorm_q_lower(&m, 2.0, &AscentOptions::with_seed(k)).unwrap();
        worst_svd = worst_svd.max((est.lower - svd).abs());
        ensure((est.lower - svd).abs() <= 1e-6, || format!("walk {k}: q = 2 ascent {} vs SVD {svd}", est.lower))?;
        let four = opnorm_q_lower(&m, 4.0, &AscentOptions::with_seed(k)).unwrap();
        let bound = svd.sqrt() * 2f64.sqrt();
        ensure(four.lower <= bound + 1e-9, || format!("walk {k}: q = 4 lower {} above γ^(1/2)·2^(1/2) = {bound}", four.lower))?;
        ensure((gamma_q_upper(svd.min(1.0), 4.0).unwrap() - bound).abs() < 1e-12, || "γ_q formula".into())?;
    }
    let mut worst_two = 0.0f64;
    for a in [0.1, 0.25, 0.4] {
        let joint = DMatrix::from_row_slice(2, 2, &[(1.0 - a) / 2.0, a / 2.0, a / 2.0, (1.0 - a) / 2.0]);
        let m = bipartite_walk(&joint);
        for q in [4.0 / 3.0, 2.0, 3.0, 4.0] {
            let est = opnorm_q_lower(&m, q, &AscentOptions::with_seed(7)).unwrap();
            let exact = (1.0 - 2.0 * a).abs();
            worst_two = worst_two.max((est.lower - exact).abs());
            ensure((est.lower - exact).abs() <= 1e-9, || format!("a = {a}, q = {q}: {} vs {exact}", est.lower))?;
            ensure(interpolation_upper(&m, q).unwrap() >= exact - 1e-12, || "bracket upper below exact".into())?;
        }
    }
    Ok(format!("50 walks, |ascent − SVD| ≤ {worst_svd:.1e}; two-point error ≤ {worst_two:.1e}"))
}

/// Decorrelation with the explicit constant on perturbed products.
fn decorrelation() -> Outcome {
    let mut rng = rng(606);
    let mut worst_ratio = 0.0f64;
    for c in 0..20 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(2..=3)).collect();
        let base = random_product(&sizes, rng.random()).unwrap();
        let x = Arc::new(perturb(&base, 0.05, 1000 + c).unwrap());
        let gamma = gamma_certificate(&x).unwrap().gamma;
        let fs: Vec<FaceFunction> = (0..3).map(|_| random_function(&mut rng, &x)).collect();
        for _ in 0..10 {
            let r = random_r(&mut rng, 3);
            let mut pi = vec![0, 1, 2];
            pi.shuffle(&mut rng);
            let constant: f64 = 27.0
                * (0..8usize)
                    .map(|s| (0..3).map(|i| if s >> i & 1 == 1 { r[i] } else { 1.0 - r[i] }).product::<f64>().abs())
                    .sum::<f64>();
            ensure((decorrelation_constant(&r) - constant).abs() <= 1e-12 * constant, || "c_(d,r) mismatch".into())?;
            for f in &fs {
                let g = f.values().to_vec();
                let mut direct = vec![0.0; g.len()];
                for s in 0..8usize {
                    let coef: f64 = (0..3).map(|i| if s >> i & 1 == 1 { r[i] } else { 1.0 - r[i] }).product();
                    for (o, v) in direct.iter_mut().zip(conditional(&x, &g, &set(s).to_vec())) {
                        *o += coef * v;
                    }
                }
                let mut ordered = g.clone();
                for &i in pi.iter().rev() {
                    let others: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                    let e = conditional(&x, &ordered, &others);
                    ordered = ordered.iter().zip(&e).map(|(v, m)| r[i] * v + (1.0 - r[i]) * m).collect();
                }
                let diff: Vec<f64> = direct.iter().zip(&ordered).map(|(a, b)| a - b).collect();
                let measured = norm(&x, &diff, 2.0);
                let bound = constant * gamma * norm(&x, &g, 2.0);
                let lib = decorrelation_check(f, &r, &pi, 2.0, gamma).unwrap();
                ensure((lib.measured - measured).abs() <= 1e-10 * measured.max(1.0), || {
                    format!("library measured {} vs oracle {measured}", lib.measured)
                })?;
                ensure(measured <= bound + 1e-9, || format!("measured {measured} > bound {bound} (γ = {gamma})"))?;
                if bound > 0.0 {
                    worst_ratio = worst_ratio.max(measured / bound);
                }
            }
        }
    }
    Ok(format!("20 perturbed products x 10 r, largest measured/bound {worst_ratio:.3e}"))
}

/// The biased-cube indicator.
fn dictator() -> Outcome {
    let x = Arc::new(build_product(&vec![vec![0.75, 0.25]; 3]).unwrap());
    let f = builtin_function("indicator:0:1", None, &x).unwrap();
    let g = f.values().to_vec();
    let m4 = norm(&x, &g, 4.0).powi(4);
    let m2 = norm(&x, &g, 2.0).powi(4);
    ensure((m4 - 0.25).abs() <= 1e-15, || format!("‖1‖₄⁴ = {m4}"))?;
    ensure((m2 - 0.0625).abs() <= 1e-15, || format!("‖1‖₂⁴ = {m2}"))?;
    let r = globalness(&f).unwrap().minimal_r;
    ensure((r - 4.0).abs() <= 1e-12, || format!("globalness r = {r}"))?;
    let b = bonami_check(&f, 1, 4.0).unwrap();
    ensure(b.pass, || "Bonami check failed".into())?;
    ensure((b.restriction_ratio - 1.0).abs() <= 1e-12, || format!("restriction ratio {}", b.restriction_ratio))?;
    ensure((b.norm_ratio - 4.0).abs() <= 1e-12, || format!("plain-norm ratio {}", b.norm_ratio))?;
    Ok(format!(
        "‖1‖₄⁴ = {m4}, ‖1‖₂⁴ = {m2}, r = {r}; lhs / (‖f‖₂² max‖f|‖₂²) = {:.3}, lhs / ‖f‖₂⁴ = {:.3}",
        b.restriction_ratio, b.norm_ratio
    ))
}

/// Bonami with the literal constant 500, and the classical cube bound.
fn bonami() -> Outcome {
    let mut rng = rng(808);
    let mut complexes: Vec<Arc<PartiteComplex>> = Vec::new();
    for d in 2..=4 {
        complexes.push(Arc::new(uniform_cube(d, 2).unwrap()));
        for p in [0.25, 0.1] {
            complexes.push(Arc::new(build_product(&vec![vec![1.0 - p, p]; d]).unwrap()));
        }
        let sizes: Vec<usize> = (0..d).map(|_| rng.random_range(2..=3)).collect();
        let prod = random_product(&sizes, rng.random()).unwrap();
        complexes.push(Arc::new(perturb(&prod, 1e-4, rng.random()).unwrap()));
        complexes.push(Arc::new(prod));
    }
    let (mut graded, mut skipped, mut classical) = (0usize, 0usize, 0usize);
    let mut worst = 0.0f64;
    for x in &complexes {
        let d = x.d();
        let gamma = gamma_certificate(x).unwrap().gamma;
        if gamma > 1e-3 {
            skipped += 1;
            continue;
        }
        let mut fs: Vec<FaceFunction> = Vec::new();
        for name in ["dictator:0", "parity", "majority", "indicator:0:1", "and", "tribes:2"] {
            if let Ok(f) = builtin_function(name, None, x) {
                fs.push(f);
            }
        }
        for k in 0..3 {
            fs.push(builtin_function("random_gauss", Some(rng.random::<u64>() ^ k), x).unwrap());
        }
        fs.push(builtin_function("random_pm1", Some(rng.random()), x).unwrap());
        let uniform_binary = x.color_sizes().iter().all(|&k| k == 2) && x.weights().iter().all(|&w| (w - x.weights()[0]).abs() < 1e-15);
        for f in &fs {
            let g = f.values().to_vec();
            let es = efron_stein(x, &g);
            for i in 0..=d.min(2) {
                let b = bonami_check(f, i, 4.0).unwrap();
                ensure(b.pass, || format!("Bonami failed on {:?}: lhs {} rhs {}", x.color_sizes(), b.lhs, b.rhs))?;
                graded += 1;
                worst = worst.max(b.lhs / b.rhs);
                if uniform_binary {
                    let mut low = vec![0.0; g.len()];
                    for (s, comp) in es.iter().enumerate() {
                        if s.count_ones() as usize <= i {
                            for (o, v) in low.iter_mut().zip(comp) {
                                *o += v;
                            }
                        }
                    }
                    let lhs = norm(x, &low, 4.0);
                    let rhs = 3f64.sqrt().powi(i as i32) * norm(x, &low, 2.0);
                    ensure(lhs <= rhs + 1e-9, || format!("classical Bonami: {lhs} > {rhs}"))?;
                    classical += 1;
                }
            }
        }
    }
    ensure(graded > 0, || "no complex with γ ≤ 1e-3".into())?;
    Ok(format!(
        "{graded} graded instances ({skipped} complexes above γ = 1e-3), largest lhs/rhs {worst:.2e}; {classical} classical cube checks"
    ))
}

/// Boosters of majority and parity.
fn boosters() -> Outcome {
    let x = Arc::new(uniform_cube(3, 2).unwrap());
    let maj = builtin_function("majority", None, &x).unwrap();
    let search = booster_search(&maj, 1, 0.4).unwrap();
    ensure(search.boosters.len() == 6, || format!("{} size-1 boosters", search.boosters.len()))?;
    ensure(search.boosters.iter().all(|b| b.size == 1 && (b.deviation - 0.5).abs() <= 1e-12), || {
        "booster deviation differs from 1/2".into()
    })?;
    ensure((search.covered_mass - 1.0).abs() <= 1e-12, || format!("covered mass {}", search.covered_mass))?;
    let mean = maj.expectation();
    for b in &search.boosters {
        let dev = (restrict_function(&maj, &b.restriction).unwrap().expectation() - mean).abs();
        ensure((dev - b.deviation).abs() <= 1e-12, || format!("restriction disagrees: {dev} vs {}", b.deviation))?;
    }
    let par = builtin_function("parity", None, &x).unwrap();
    let below = booster_search(&par, 2, 0.4).unwrap();
    ensure(below.boosters.is_empty(), || format!("parity has {} boosters below size 3", below.boosters.len()))?;
    let full = booster_search(&par, 3, 0.4).unwrap();
    ensure(!full.boosters.is_empty() && full.boosters.iter().all(|b| b.size == 3), || "parity boosters not all of size d".into())?;
    for b in &full.boosters {
        let dev = (restrict_function(&par, &b.restriction).unwrap().expectation() - par.expectation()).abs();
        ensure((dev - b.deviation).abs() <= 1e-12, || "parity restriction disagrees".into())?;
    }
    Ok(format!(
        "majority: 6 boosters of deviation 0.5, covered mass {}; parity: none below size 3, {} at size 3",
        search.covered_mass,
        full.boosters.len()
    ))
}

/// Identical seeds give identical report bytes, whatever the thread count.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = SuiteConfig::new(
        vec![
            ComplexSource::Generator {
                spec: "sparse:4:3:20".into(),
                seed: Some(11),
                count: 4,
            },
            ComplexSource::Generator {
                spec: "perturbed-product:3:3:0.05".into(),
                seed: Some(3),
                count: 2,
            },
        ],
        vec![
            FunctionSource::Random {
                kind: "random_gauss".into(),
                seed: 5,
                count: 2,
            },
            FunctionSource::Random {
                kind: "random_pm1".into(),
                seed: 6,
                count: 1,
            },
        ],
        vec!["all".into()],
    );
    config.q = vec![4.0, 4.0 / 3.0];
    config.seed = 99;
    let mut bytes = Vec::new();
    for (k, jobs) in [1usize, 4, 4].into_iter().enumerate() {
        config.jobs = Some(jobs);
        config.output = Some(dir.path().join(format!("r{k}.json")));
        config.csv = Some(dir.path().join(format!("r{k}.csv")));
        run_suite(&config).map_err(|e| e.to_string())?;
        let json = std::fs::read(config.output.as_ref().unwrap()).unwrap();
        let csv = std::fs::read(config.csv.as_ref().unwrap()).unwrap();
        bytes.push((json, csv));
    }
    ensure(bytes.windows(2).all(|w| w[0] == w[1]), || "reports differ between runs".into())?;
    Ok(format!("3 runs (jobs 1, 4, 4), {} byte JSON reports identical", bytes[0].0.len()))
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("exact identities on sparse complexes", 60, identities),
        ("product-space exactness", 30, product_exactness),
        ("symmetrization sandwich at c = 2/5", 60, sandwich),
        ("one-dimensional lemmas", 10, scalar_lemmas),
        ("expansion certification", 60, expansion),
        ("decorrelation with explicit constant", 60, decorrelation),
        ("biased-cube indicator", 1, dictator),
        ("Bonami with constant 500", 60, bonami),
        ("booster search", 5, boosters),
        ("determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (k, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit} s limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {title}: {detail} ({:.2} s, limit {limit} s)",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

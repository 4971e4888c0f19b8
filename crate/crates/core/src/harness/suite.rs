//! Property-suite runner.
//!
//! A suite is a list of complex sources, a list of function sources and a
//! list of named checks. Every (complex, check) pair is one work item; items
//! run on a rayon pool and the report is assembled in item order, so the
//! JSON output depends only on the configuration and its seeds.

use super::builtins::{builtin_function, generate_complex, is_randomized, GENERATOR_NAMES};
use super::io::{load_complex, load_function, write_atomic};
use super::report::{CheckRecord, VerificationReport};
use crate::colors::ColorSet;
use crate::complex::PartiteComplex;
use crate::efron_stein::{contraction_check, decompose, restriction_identity_check, total_influence};
use crate::error::{HdxError, Result};
use crate::expansion::{
    gamma_certificate, gamma_q_upper, interpolation_upper, link_walks, opnorm_q_lower, swap_norm_check, AscentOptions,
};
use crate::function::FaceFunction;
use crate::hyper::{
    bonami_check, booster_search, classical_bonami, globalness, kkl_witness, level_holder_check, operator_form_check,
    two_vs_four_thirds_check, SEARCH_MAX_SIZE,
};
use crate::symmetrization::{
    coordinate_symmetrization_check, decorrelation_check, localization_check, sandwich_check,
    scalar_symmetrization_check, FiniteDistribution, SandwichParams, SYM_MAX_D,
};
use crate::util::mix_seed;
use crate::walk::{coord_noise, noise_operator, projection_e};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

/// Environment variable read when no job count is configured.
pub const JOBS_ENV: &str = "HDXSYM_JOBS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexSource {
    File(PathBuf),
    /// `count` instances with seeds `seed, seed + 1, …`.
    Generator {
        spec: String,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default = "one")]
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSource {
    File(PathBuf),
    /// A deterministic builtin such as `dictator:0`.
    Builtin(String),
    /// `count` draws of `random_pm1` or `random_gauss` per complex.
    Random {
        kind: String,
        seed: u64,
        #[serde(default = "one")]
        count: usize,
    },
}

fn one() -> usize {
    1
}
fn default_q() -> Vec<f64> {
    vec![4.0]
}
fn default_tol() -> f64 {
    1e-9
}
fn default_rho() -> f64 {
    0.1
}
fn default_tau() -> f64 {
    0.4
}
fn default_max_size() -> usize {
    2
}
fn default_probes() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub complexes: Vec<ComplexSource>,
    #[serde(default)]
    pub functions: Vec<FunctionSource>,
    #[serde(default = "default_q")]
    pub q: Vec<f64>,
    /// Check or group names; see [`Registry::standard`].
    pub checks: Vec<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Seed for the randomness inside checks (sets, noise vectors, starts).
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    /// `c_q` for `q ∉ {4, 4/3}`; those `q` are skipped by the sandwich without it.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_max_size")]
    pub max_size: usize,
    /// Scalar probes per complex for `scalar-1d`.
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Record per-check runtimes; off by default so reports are byte-stable.
    #[serde(default)]
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(complexes: Vec<ComplexSource>, functions: Vec<FunctionSource>, checks: Vec<String>) -> Self {
        SuiteConfig {
            complexes,
            functions,
            q: default_q(),
            checks,
            tol: default_tol(),
            seed: 0,
            rho: default_rho(),
            c: None,
            tau: default_tau(),
            max_size: default_max_size(),
            probes: default_probes(),
            output: None,
            csv: None,
            jobs: None,
            timings: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HdxError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    fn validate(&self, registry: &Registry) -> Result<()> {
        registry.resolve(&self.checks)?;
        for src in &self.complexes {
            if let ComplexSource::Generator { spec, seed, .. } = src {
                let name = spec.split(':').next().unwrap_or_default();
                if !GENERATOR_NAMES.contains(&name) {
                    return Err(HdxError::UnknownGenerator(spec.clone()));
                }
                if seed.is_none() && is_randomized(spec) {
                    return Err(HdxError::InvalidParameter(format!("{spec} is randomized and needs a seed")));
                }
            }
        }
        for src in &self.functions {
            match src {
                FunctionSource::Builtin(name) if is_randomized(name) => {
                    return Err(HdxError::InvalidParameter(format!(
                        "{name} is randomized; use a random source with a seed"
                    )))
                }
                FunctionSource::Random { kind, .. } if kind != "random_pm1" && kind != "random_gauss" => {
                    return Err(HdxError::UnknownBuiltin(kind.clone()))
                }
                _ => {}
            }
        }
        if self.q.iter().any(|&q| !(q >= 1.0 && q.is_finite())) {
            return Err(HdxError::InvalidParameter("every q must be finite and at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(HdxError::InvalidParameter("tolerance must be nonnegative".into()));
        }
        Ok(())
    }

    fn jobs(&self) -> usize {
        self.jobs
            .or_else(|| std::env::var(JOBS_ENV).ok().and_then(|v| v.parse().ok()))
            .unwrap_or(0)
    }
}

/// Everything a check sees for one complex.
pub struct CheckContext<'a> {
    pub name: &'a str,
    pub reference: &'a str,
    pub complex: &'a Arc<PartiteComplex>,
    pub functions: &'a [(String, FaceFunction)],
    pub config: &'a SuiteConfig,
    pub seed: u64,
    gamma: &'a OnceLock<std::result::Result<f64, HdxError>>,
}

impl CheckContext<'_> {
    pub fn graded(&self, lhs: f64, rhs: f64) -> CheckRecord {
        CheckRecord::graded(self.name, self.reference, lhs, rhs)
    }

    /// Relative discrepancy against the suite tolerance.
    pub fn identity(&self, discrepancy: f64, scale: f64) -> CheckRecord {
        CheckRecord::identity(self.name, self.reference, discrepancy / scale.max(1.0), self.config.tol)
    }

    pub fn diagnostic(&self, lhs: f64, rhs: f64) -> CheckRecord {
        CheckRecord::diagnostic(self.name, self.reference, lhs, rhs)
    }

    /// Graded when the complex is a product (`γ ≤ tol`), diagnostic otherwise.
    pub fn graded_on_products(&self, lhs: f64, rhs: f64) -> Result<CheckRecord> {
        Ok(if self.gamma()? <= self.config.tol {
            self.graded(lhs, rhs)
        } else {
            self.diagnostic(lhs, rhs)
        })
    }

    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix_seed(&[self.seed, salt]))
    }

    /// Spectral `γ`, computed once per complex. Zero when `d < 2`.
    pub fn gamma(&self) -> Result<f64> {
        self.gamma
            .get_or_init(|| {
                if self.complex.d() < 2 {
                    Ok(0.0)
                } else {
                    gamma_certificate(self.complex).map(|c| c.gamma)
                }
            })
            .clone()
    }
}

pub type CheckFn = fn(&CheckContext) -> Result<Vec<CheckRecord>>;

#[derive(Clone)]
pub struct CheckSpec {
    pub name: &'static str,
    pub group: &'static str,
    /// The statement being checked.
    pub reference: &'static str,
    pub run: CheckFn,
}

#[derive(Clone)]
pub struct Registry {
    specs: Vec<CheckSpec>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { specs: Vec::new() }
    }

    /// Every built-in check. Groups: `identities`, `product`, `expansion`,
    /// `symmetrization`, `hyper`; `all` selects everything.
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        for spec in standard_checks() {
            r.register(spec);
        }
        r
    }

    pub fn register(&mut self, spec: CheckSpec) {
        self.specs.retain(|s| s.name != spec.name);
        self.specs.push(spec);
    }

    pub fn specs(&self) -> &[CheckSpec] {
        &self.specs
    }

    pub fn get(&self, name: &str) -> Option<&CheckSpec> {
        self.specs.iter().find(|s| s.name == name)
    }

    /// Expand group names, keep first occurrences, fail on unknown names.
    pub fn resolve(&self, names: &[String]) -> Result<Vec<&CheckSpec>> {
        let mut out: Vec<&CheckSpec> = Vec::new();
        for name in names {
            let matched: Vec<&CheckSpec> = match name.as_str() {
                "all" => self.specs.iter().collect(),
                n => match self.get(n) {
                    Some(s) => vec![s],
                    None => self.specs.iter().filter(|s| s.group == n).collect(),
                },
            };
            if matched.is_empty() {
                return Err(HdxError::UnknownCheck(name.clone()));
            }
            for s in matched {
                if !out.iter().any(|o| o.name == s.name) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }
}

struct Instance {
    label: String,
    complex: Result<Arc<PartiteComplex>>,
}

fn instances(config: &SuiteConfig) -> Vec<Instance> {
    let mut out = Vec::new();
    for src in &config.complexes {
        match src {
            ComplexSource::File(path) => out.push(Instance {
                label: path.display().to_string(),
                complex: load_complex(path).map(Arc::new),
            }),
            ComplexSource::Generator { spec, seed, count } => {
                for j in 0..*count {
                    let s = seed.map(|s| s.wrapping_add(j as u64));
                    let label = match s {
                        Some(s) => format!("{spec}@{s}"),
                        None => spec.clone(),
                    };
                    out.push(Instance {
                        label,
                        complex: generate_complex(spec, s).map(Arc::new),
                    });
                }
            }
        }
    }
    out
}

fn functions_for(config: &SuiteConfig, index: usize, x: &Arc<PartiteComplex>) -> Result<Vec<(String, FaceFunction)>> {
    let mut out = Vec::new();
    for src in &config.functions {
        match src {
            FunctionSource::File(path) => out.push((path.display().to_string(), load_function(path, x)?)),
            FunctionSource::Builtin(name) => out.push((name.clone(), builtin_function(name, None, x)?)),
            FunctionSource::Random { kind, seed, count } => {
                for k in 0..*count {
                    let s = mix_seed(&[*seed, index as u64, k as u64]);
                    out.push((format!("{kind}#{k}"), builtin_function(kind, Some(s), x)?));
                }
            }
        }
    }
    Ok(out)
}

/// Run with the standard registry.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_with(config, &Registry::standard())
}

/// Run every named check on every complex. A check that raises becomes an
/// error record and the suite continues. The report is written to
/// `config.output` (JSON) and `config.csv` when set.
pub fn run_suite_with(config: &SuiteConfig, registry: &Registry) -> Result<VerificationReport> {
    config.validate(registry)?;
    let checks = registry.resolve(&config.checks)?;
    let insts = instances(config);
    let prepared: Vec<(String, Result<(Arc<PartiteComplex>, Vec<(String, FaceFunction)>)>)> = insts
        .into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let data = inst
                .complex
                .and_then(|x| functions_for(config, i, &x).map(|fs| (x, fs)));
            (inst.label, data)
        })
        .collect();
    let gammas: Vec<OnceLock<std::result::Result<f64, HdxError>>> = prepared.iter().map(|_| OnceLock::new()).collect();
    let items: Vec<(usize, usize)> = (0..prepared.len())
        .flat_map(|i| (0..checks.len()).map(move |c| (i, c)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs())
        .build()
        .map_err(|e| HdxError::InvalidParameter(format!("thread pool: {e}")))?;
    let results: Vec<Vec<CheckRecord>> = pool.install(|| {
        items
            .par_iter()
            .map(|&(i, c)| {
                let spec = checks[c];
                let (label, data) = &prepared[i];
                let seed = mix_seed(&[config.seed, i as u64, c as u64]);
                let started = Instant::now();
                let mut records = match data {
                    Err(e) => vec![CheckRecord::error(spec.name, spec.reference, e.to_string())],
                    Ok((x, fs)) => {
                        let ctx = CheckContext {
                            name: spec.name,
                            reference: spec.reference,
                            complex: x,
                            functions: fs,
                            config,
                            seed,
                            gamma: &gammas[i],
                        };
                        match (spec.run)(&ctx) {
                            Ok(r) => r,
                            Err(e) => vec![CheckRecord::error(spec.name, spec.reference, e.to_string())],
                        }
                    }
                };
                // per work item: every record of the item carries the total
                let elapsed = started.elapsed().as_secs_f64() * 1e3;
                for r in &mut records {
                    r.params.insert("complex".into(), label.clone().into());
                    r.seed.get_or_insert(seed);
                    if config.timings {
                        r.runtime_ms = Some(elapsed);
                    }
                }
                records
            })
            .collect()
    });
    let report = VerificationReport {
        records: results.into_iter().flatten().collect(),
    };
    if let Some(path) = &config.output {
        write_atomic(path, report.to_json().as_bytes())?;
    }
    if let Some(path) = &config.csv {
        write_atomic(path, report.to_csv().as_bytes())?;
    }
    Ok(report)
}

fn scale(f: &FaceFunction) -> f64 {
    f.max_abs()
}

fn random_r(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..=2.0)).collect()
}

fn random_nonempty(rng: &mut ChaCha8Rng, d: usize) -> ColorSet {
    ColorSet::from_bits(rng.random_range(1..(1u32 << d)))
}

fn r_product(r: &[f64], s: ColorSet) -> f64 {
    s.iter().map(|i| r[i]).product()
}

fn check_es_sum(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    ctx.functions
        .iter()
        .map(|(label, f)| {
            let dec = decompose(f)?;
            Ok(ctx.identity(dec.reconstruct().max_abs_diff(f)?, scale(f)).with("function", label.as_str()))
        })
        .collect()
}

fn check_es_projection(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    ctx.functions
        .iter()
        .map(|(label, f)| {
            let dec = decompose(f)?;
            let mut worst = 0.0f64;
            for s in ColorSet::all(x.d()) {
                let direct = projection_e(x, s)?.apply(f)?;
                worst = worst.max(direct.max_abs_diff(&dec.partial_sum(s))?);
            }
            Ok(ctx.identity(worst, scale(f)).with("function", label.as_str()))
        })
        .collect()
}

fn check_noise_forms(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    let d = x.d();
    let mut rng = ctx.rng(0);
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        let dec = decompose(f)?;
        let lifted: Vec<FaceFunction> = ColorSet::all(d).map(|s| dec.component_lifted(s)).collect();
        let combine = |weight: &dyn Fn(ColorSet) -> f64| {
            let mut acc = vec![0.0; x.len()];
            for s in ColorSet::all(d) {
                let w = weight(s);
                for (a, v) in acc.iter_mut().zip(lifted[s.bits() as usize].values()) {
                    *a += w * v;
                }
            }
            acc
        };
        let r = random_r(&mut rng, d);
        let s = ColorSet::from_bits(rng.random_range(0..(1u32 << d)));
        let full = noise_operator(x, &r)?.apply(f)?;
        let expected = combine(&|u| r_product(&r, u));
        let coord = coord_noise(x, s, &r)?.apply(f)?;
        let expected_coord = combine(&|u| r_product(&r, u.intersection(s)));
        let diff = |a: &FaceFunction, b: &[f64]| a.values().iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        out.push(
            ctx.identity(diff(&full, &expected), scale(f))
                .with("function", label.as_str())
                .with("form", "T_r")
                .with("r", r.clone()),
        );
        out.push(
            ctx.identity(diff(&coord, &expected_coord), scale(f))
                .with("function", label.as_str())
                .with("form", "T^S_r")
                .with("S", s.to_vec())
                .with("r", r),
        );
    }
    Ok(out)
}

fn check_localization(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let d = ctx.complex.d();
    let mut rng = ctx.rng(0);
    ctx.functions
        .iter()
        .map(|(label, f)| {
            let s = random_nonempty(&mut rng, d);
            let r = random_r(&mut rng, d);
            Ok(ctx
                .identity(localization_check(f, s, &r)?, scale(f))
                .with("function", label.as_str())
                .with("S", s.to_vec())
                .with("r", r))
        })
        .collect()
}

fn check_restriction_identity(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let d = ctx.complex.d();
    let mut rng = ctx.rng(0);
    ctx.functions
        .iter()
        .map(|(label, f)| {
            // each color lands in I, B or neither; I nonempty
            let (mut i, mut b) = (ColorSet::EMPTY, ColorSet::EMPTY);
            let first = rng.random_range(0..d);
            i = i.insert(first);
            for c in (0..d).filter(|&c| c != first) {
                match rng.random_range(0..3) {
                    0 => i = i.insert(c),
                    1 => b = b.insert(c),
                    _ => {}
                }
            }
            let disc = restriction_identity_check(f, i, b, usize::MAX, 0)?;
            Ok(ctx
                .identity(disc, scale(f))
                .with("function", label.as_str())
                .with("I", i.to_vec())
                .with("B", b.to_vec()))
        })
        .collect()
}

fn check_total_influence(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    ctx.functions
        .iter()
        .map(|(label, f)| {
            let t = total_influence(f)?;
            Ok(ctx
                .identity(t.discrepancy(), f.moment(2.0).max(t.laplacian.abs()))
                .with("function", label.as_str())
                .with("influence", t.laplacian))
        })
        .collect()
}

fn check_contraction(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let d = ctx.complex.d();
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for &q in &ctx.config.q {
            let mut worst = 0.0f64;
            for s in ColorSet::all(d) {
                let (lhs, rhs) = contraction_check(f, s, q)?;
                if rhs > 0.0 {
                    worst = worst.max(lhs / rhs);
                }
            }
            out.push(ctx.graded(worst, 1.0 + ctx.config.tol).with("function", label.as_str()).with("q", q));
        }
    }
    Ok(out)
}

fn check_orthogonality(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        let dec = decompose(f)?;
        let norm_sq = f.moment(2.0);
        let orth = dec.orthogonality_slack(None).lhs / norm_sq.max(1.0);
        let parseval = dec.level_profile(f)?.parseval_slack(norm_sq).abs() / norm_sq.max(1.0);
        out.push(ctx.graded_on_products(orth, ctx.config.tol)?.with("function", label.as_str()).with("part", "orthogonality"));
        out.push(ctx.graded_on_products(parseval, ctx.config.tol)?.with("function", label.as_str()).with("part", "parseval"));
    }
    Ok(out)
}

fn check_projection_commute(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    let d = x.d();
    let sets: Vec<ColorSet> = ColorSet::all(d).collect();
    let mut pairs: Vec<(ColorSet, ColorSet)> = sets.iter().flat_map(|&a| sets.iter().map(move |&b| (a, b))).collect();
    if pairs.len() > 64 {
        pairs.shuffle(&mut ctx.rng(0));
        pairs.truncate(64);
    }
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        let mut worst = 0.0f64;
        for &(t, u) in &pairs {
            let nested = projection_e(x, t)?.apply(&projection_e(x, u)?.apply(f)?)?;
            let direct = projection_e(x, t.intersection(u))?.apply(f)?;
            worst = worst.max(nested.max_abs_diff(&direct)?);
        }
        out.push(ctx.graded_on_products(worst / scale(f).max(1.0), ctx.config.tol)?.with("function", label.as_str()));
    }
    Ok(out)
}

fn check_decorrelation(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let d = ctx.complex.d();
    let gamma = ctx.gamma()?;
    let mut rng = ctx.rng(0);
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for &q in &ctx.config.q {
            let gamma_q = if q == 2.0 { gamma } else { gamma_q_upper(gamma.min(1.0), q)? };
            let mut worst: Option<(f64, f64)> = None;
            for _ in 0..5 {
                let r = random_r(&mut rng, d);
                let mut pi: Vec<usize> = (0..d).collect();
                pi.shuffle(&mut rng);
                let c = decorrelation_check(f, &r, &pi, q, gamma_q)?;
                let rhs = c.bound + ctx.config.tol;
                if worst.is_none_or(|(l, r0)| c.measured - rhs > l - r0) {
                    worst = Some((c.measured, rhs));
                }
            }
            let (lhs, rhs) = worst.expect("five trials");
            out.push(ctx.graded(lhs, rhs).with("function", label.as_str()).with("q", q).with("gamma", gamma));
        }
    }
    Ok(out)
}

fn check_swap_walk(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    let d = x.d();
    if d < 2 {
        return Ok(Vec::new());
    }
    let gamma = ctx.gamma()?;
    let mut rng = ctx.rng(0);
    let mut out = Vec::new();
    for &q in &ctx.config.q {
        let mut colors: Vec<usize> = (0..d).collect();
        colors.shuffle(&mut rng);
        let cut = rng.random_range(1..d);
        let end = rng.random_range(cut + 1..=d);
        let s = ColorSet::from_colors(colors[..cut].iter().copied());
        let t = ColorSet::from_colors(colors[cut..end].iter().copied());
        let c = swap_norm_check(x, s, t, q, mix_seed(&[ctx.seed, q.to_bits()]), Some(gamma))?;
        out.push(
            ctx.graded(c.measured.lower, c.bound + ctx.config.tol)
                .with("q", q)
                .with("S", s.to_vec())
                .with("T", t.to_vec())
                .with("gamma", gamma),
        );
    }
    Ok(out)
}

fn check_expansion_bracket(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    if x.d() < 2 {
        return Ok(Vec::new());
    }
    let walks = link_walks(x)?;
    let mut out = Vec::new();
    for &q in &ctx.config.q {
        let mut worst = 0.0f64;
        for (k, (_, w)) in walks.iter().enumerate() {
            let est = opnorm_q_lower(w, q, &AscentOptions::with_seed(mix_seed(&[ctx.seed, k as u64, q.to_bits()])))?;
            let upper = interpolation_upper(w, q)?;
            if upper > 0.0 {
                worst = worst.max(est.lower / upper);
            }
        }
        out.push(ctx.graded(worst, 1.0 + ctx.config.tol).with("q", q).with("walks", walks.len()));
    }
    Ok(out)
}

fn sandwich_qs(ctx: &CheckContext) -> Vec<(f64, SandwichParams)> {
    ctx.config
        .q
        .iter()
        .filter_map(|&q| SandwichParams::new(q, if is_standard_q(q) { None } else { ctx.config.c }).ok().map(|p| (q, p)))
        .collect()
}

fn is_standard_q(q: f64) -> bool {
    (q - 4.0).abs() < 1e-12 || (q - 4.0 / 3.0).abs() < 1e-12
}

fn check_sandwich(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    if ctx.complex.d() > SYM_MAX_D {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for (q, params) in sandwich_qs(ctx) {
            let c = sandwich_check(f, params, None)?;
            out.push(
                ctx.graded_on_products(c.multiplicative_slack(), 1.0 + ctx.config.tol)?
                    .with("function", label.as_str())
                    .with("q", q)
                    .with("c_q", params.c_q),
            );
        }
    }
    Ok(out)
}

fn check_coordinate_symmetrization(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let d = ctx.complex.d();
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for &q in &ctx.config.q {
            let mut worst = 0.0f64;
            for i in 0..d {
                let (lhs, rhs) = coordinate_symmetrization_check(f, i, q)?;
                if rhs > 0.0 {
                    worst = worst.max(lhs / rhs);
                }
            }
            out.push(ctx.graded(worst, 1.0 + ctx.config.tol).with("function", label.as_str()).with("q", q));
        }
    }
    Ok(out)
}

fn check_scalar_1d(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &q in &ctx.config.q {
        let c = SandwichParams::new(q, if is_standard_q(q) { None } else { ctx.config.c })
            .ok()
            .map(|p| p.c_q);
        let mut rng = ctx.rng(q.to_bits());
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..ctx.config.probes {
            let a = rng.random_range(-2.0..=2.0);
            let dist = FiniteDistribution::random_centered(6, &mut rng);
            let s = scalar_symmetrization_check(a, &dist, q, c)?;
            worst = worst.max(s.upper.0 - s.upper.1);
            if let Some((l, r)) = s.lower {
                worst = worst.max(l - r);
            }
        }
        out.push(ctx.graded(worst, ctx.config.tol).with("q", q).with("probes", ctx.config.probes));
    }
    Ok(out)
}

fn even(q: f64) -> bool {
    q >= 2.0 && q.fract() == 0.0 && (q as u32) % 2 == 0
}

fn check_bonami(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let x = ctx.complex;
    let gamma = ctx.gamma()?;
    let uniform_binary = x.color_sizes().iter().all(|&k| k == 2)
        && x.len() == 1 << x.d()
        && x.weights().iter().all(|&w| (w - x.weights()[0]).abs() <= 1e-15);
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for i in 0..=x.d().min(2) {
            for &q in ctx.config.q.iter().filter(|&&q| even(q)) {
                let b = bonami_check(f, i, q)?;
                let rec = if gamma <= 1e-3 {
                    ctx.graded(b.lhs, b.rhs * (1.0 + 1e-12))
                } else {
                    ctx.diagnostic(b.lhs, b.rhs)
                };
                out.push(
                    rec.with("function", label.as_str())
                        .with("i", i)
                        .with("q", q)
                        .with("restriction_ratio", b.restriction_ratio)
                        .with("norm_ratio", b.norm_ratio),
                );
            }
            if uniform_binary {
                let (lhs, rhs) = classical_bonami(f, i)?;
                out.push(
                    ctx.graded(lhs, rhs * (1.0 + ctx.config.tol) + ctx.config.tol)
                        .with("function", label.as_str())
                        .with("i", i)
                        .with("form", "classical"),
                );
            }
        }
    }
    Ok(out)
}

fn check_globalness(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        if f.is_zero() {
            continue;
        }
        let g = globalness(f)?;
        let worst = g.per_size.iter().skip(1).cloned().fold(0.0, f64::max);
        out.push(ctx.diagnostic(worst, g.minimal_r).with("function", label.as_str()).with("per_size", g.per_size));
    }
    Ok(out)
}

fn check_operator_form(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        if f.is_zero() {
            continue;
        }
        for &q in ctx.config.q.iter().filter(|&&q| even(q)) {
            let c = operator_form_check(f, ctx.config.rho, q)?;
            out.push(
                ctx.diagnostic(c.lhs, c.rhs)
                    .with("function", label.as_str())
                    .with("q", q)
                    .with("rho", c.rho)
                    .with("r", c.r)
                    .with("in_regime", c.in_regime),
            );
        }
    }
    Ok(out)
}

fn check_level_holder(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions {
        for i in 0..=ctx.complex.d() {
            let (lhs, rhs) = level_holder_check(f, i)?;
            out.push(
                ctx.graded(lhs, rhs * (1.0 + ctx.config.tol) + ctx.config.tol)
                    .with("function", label.as_str())
                    .with("i", i),
            );
        }
    }
    Ok(out)
}

fn check_two_vs_four_thirds(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    if ctx.complex.d() > SYM_MAX_D {
        return Ok(Vec::new());
    }
    ctx.functions
        .iter()
        .map(|(label, f)| Ok(ctx.graded(two_vs_four_thirds_check(f)?, ctx.config.tol).with("function", label.as_str())))
        .collect()
}

fn is_valued(f: &FaceFunction, a: f64, b: f64) -> bool {
    f.values().iter().all(|&v| v == a || v == b)
}

fn size_cap(ctx: &CheckContext) -> usize {
    ctx.config.max_size.min(ctx.complex.d()).min(SEARCH_MAX_SIZE)
}

fn check_booster(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions.iter().filter(|(_, f)| is_valued(f, -1.0, 1.0)) {
        let search = booster_search(f, size_cap(ctx), ctx.config.tau)?;
        let mean = f.expectation();
        let mut worst = 0.0f64;
        for b in &search.boosters {
            let direct = (f.restrict(&b.restriction)?.expectation() - mean).abs();
            worst = worst.max((direct - b.deviation).abs());
        }
        out.push(
            ctx.identity(worst, 1.0)
                .with("function", label.as_str())
                .with("tau", search.tau)
                .with("boosters", search.boosters.len())
                .with("covered_mass", search.covered_mass),
        );
    }
    Ok(out)
}

fn check_kkl(ctx: &CheckContext) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (label, f) in ctx.functions.iter().filter(|(_, f)| is_valued(f, 0.0, 1.0)) {
        let w = kkl_witness(f, size_cap(ctx))?;
        out.push(
            ctx.diagnostic(f.expectation(), w.density)
                .with("function", label.as_str())
                .with("colors", w.restriction.colors.to_vec())
                .with("values", w.restriction.values.clone()),
        );
    }
    Ok(out)
}

fn standard_checks() -> Vec<CheckSpec> {
    vec![
        CheckSpec {
            name: "es-sum",
            group: "identities",
            reference: "Efron-Stein reconstruction: f = Σ_S f^{=S}",
            run: check_es_sum,
        },
        CheckSpec {
            name: "es-projection",
            group: "identities",
            reference: "partial sums: E_S f = Σ_{T⊆S} f^{=T}",
            run: check_es_projection,
        },
        CheckSpec {
            name: "noise-forms",
            group: "identities",
            reference: "noise action: T_r f = Σ_S r_S f^{=S} and T^S_r f = Σ_U r_{S∩U} f^{=U}",
            run: check_noise_forms,
        },
        CheckSpec {
            name: "localization",
            group: "identities",
            reference: "localization: (T^S_r f)(x) = (T_{r_S} f|_{x_{S̄}})(x_S)",
            run: check_localization,
        },
        CheckSpec {
            name: "restriction-identity",
            group: "identities",
            reference: "restriction: f^{=I∪B}(y_I,x_B,z) = Σ_{J⊆I} (−1)^{|I∖J|} (f|_{y_J})^{=B}(x_B,z)",
            run: check_restriction_identity,
        },
        CheckSpec {
            name: "total-influence",
            group: "identities",
            reference: "total influence: Σ_i ⟨f, L_i f⟩ = Σ_i i⟨f, f^{=i}⟩",
            run: check_total_influence,
        },
        CheckSpec {
            name: "contraction",
            group: "identities",
            reference: "component bound: ‖f^{=S}‖_q ≤ 2^{|S|}‖f‖_q",
            run: check_contraction,
        },
        CheckSpec {
            name: "orthogonality",
            group: "product",
            reference: "orthogonality and Parseval: ⟨f^{=S}, f^{=T}⟩ = 0 for S ≠ T, ‖f‖₂² = Σ_S ‖f^{=S}‖₂² (products)",
            run: check_orthogonality,
        },
        CheckSpec {
            name: "projection-commute",
            group: "product",
            reference: "commuting projections: E_T E_U = E_{T∩U} (products)",
            run: check_projection_commute,
        },
        CheckSpec {
            name: "decorrelation",
            group: "product",
            reference: "decorrelation: ‖T_r f − T^π_r f‖_q ≤ d³ Σ_S |r_S ∏_{i∉S}(1−r_i)| · γ_q · ‖f‖_q",
            run: check_decorrelation,
        },
        CheckSpec {
            name: "swap-walk",
            group: "expansion",
            reference: "swap walks: ‖A_{S,T} − Π_{S,T}‖_q ≤ |S||T|·γ_q",
            run: check_swap_walk,
        },
        CheckSpec {
            name: "expansion-bracket",
            group: "expansion",
            reference: "Riesz-Thorin bracket: ascent lower bound ≤ ‖M‖₂^{2/q}‖M‖_∞^{1−2/q} on every link walk",
            run: check_expansion_bracket,
        },
        CheckSpec {
            name: "sandwich",
            group: "symmetrization",
            reference: "symmetrization: ‖(T_{c_q} f)~‖_q ≤ ‖f‖_q ≤ ‖(T_2 f)~‖_q, c_4 = c_{4/3} = 2/5 (graded on products)",
            run: check_sandwich,
        },
        CheckSpec {
            name: "coordinate-symmetrization",
            group: "symmetrization",
            reference: "single coordinate: ‖T^i_{1/2} f‖_q ≤ ‖T^i_r f‖_q for a uniform sign r",
            run: check_coordinate_symmetrization,
        },
        CheckSpec {
            name: "scalar-1d",
            group: "symmetrization",
            reference: "one-dimensional: ‖a + X/2‖_q ≤ ‖a + rX‖_q and ‖a − c_q X‖_q ≤ ‖a + X‖_q for mean-zero X",
            run: check_scalar_1d,
        },
        CheckSpec {
            name: "bonami",
            group: "hyper",
            reference: "global Bonami: ‖f^{≤i}‖_q^q ≤ (500q)^{qi} ‖f^{≤i}‖₂² max_{|S|≤i} ‖f|_{x_S}‖₂^{q−2} (graded when γ ≤ 1e-3); cube: ‖f^{≤i}‖₄⁴ ≤ 9^i ‖f^{≤i}‖₂⁴",
            run: check_bonami,
        },
        CheckSpec {
            name: "globalness",
            group: "hyper",
            reference: "globalness: smallest r with ‖f|_{x_S}‖₂² ≤ r^{|S|}‖f‖₂² (diagnostic)",
            run: check_globalness,
        },
        CheckSpec {
            name: "operator-form",
            group: "hyper",
            reference: "hypercontractive form: ‖T_ρ f‖_q vs ‖f‖₂ for r-global f and ρ ≤ 1/(rq) (diagnostic)",
            run: check_operator_form,
        },
        CheckSpec {
            name: "level-holder",
            group: "hyper",
            reference: "Hölder: ⟨f, f^{≤i}⟩ ≤ ‖f‖_{4/3} ‖f^{≤i}‖₄",
            run: check_level_holder,
        },
        CheckSpec {
            name: "two-vs-four-thirds",
            group: "hyper",
            reference: "cube hypercontractivity on symmetrized columns: ‖T_{1/√3} g‖₂ ≤ ‖g‖_{4/3}",
            run: check_two_vs_four_thirds,
        },
        CheckSpec {
            name: "booster",
            group: "hyper",
            reference: "τ-boosters: |E[f|_{x_T}] − E[f]| ≥ τ, deviations re-derived from explicit restrictions",
            run: check_booster,
        },
        CheckSpec {
            name: "kkl",
            group: "hyper",
            reference: "KKL witness: densest small restriction of a {0,1} function (diagnostic)",
            run: check_kkl,
        },
    ]
}

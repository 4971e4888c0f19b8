//! Named complexes and functions.
//!
//! Generators are written `name:arg:arg…`:
//!
//! | spec | complex |
//! |---|---|
//! | `cube:D:K` | uniform `[K]^D` |
//! | `biased:D:P` | `{0,1}^D` with `Pr[x_i = 1] = P` |
//! | `matching:K` | `{(v, v)}` uniform, `d = 2` |
//! | `product:D:K` | random product measure on `[K]^D` (seeded) |
//! | `sparse:D:K:N` | `N` random faces of `[K]^D`, random weights (seeded) |
//! | `perturbed:D:K:EPS` | uniform cube with weights scaled by `1 + U[−EPS, EPS]` (seeded) |
//! | `perturbed-product:D:K:EPS` | the same on a random product (seeded) |
//!
//! Functions are written the same way. Colors are 0-based and "bit" means
//! vertex `0 ↦ +1`, any other vertex `↦ −1`.
//!
//! | spec | function | values |
//! |---|---|---|
//! | `dictator:I` | bit of color `I` | `±1` |
//! | `parity` / `parity:I,J,…` | product of bits | `±1` |
//! | `majority` | sign of the sum of bits (ties to `+1`) | `±1` |
//! | `indicator:I:V` | `x_I = V` | `{0,1}` |
//! | `and` | every vertex equals 1 | `{0,1}` |
//! | `tribes:W` | some block of `W` consecutive colors is all 1 | `{0,1}` |
//! | `random_pm1` | independent uniform signs (seeded) | `±1` |
//! | `random_gauss` | independent standard normals (seeded) | real |

use crate::complex::{build_explicit, build_product, perturb, random_product, random_sparse, uniform_cube, PartiteComplex};
use crate::error::{HdxError, Result};
use crate::function::FaceFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::sync::Arc;

pub const GENERATOR_NAMES: &[&str] = &["cube", "biased", "matching", "product", "sparse", "perturbed", "perturbed-product"];
pub const BUILTIN_NAMES: &[&str] = &[
    "dictator",
    "parity",
    "majority",
    "indicator",
    "and",
    "tribes",
    "random_pm1",
    "random_gauss",
];

fn split(spec: &str) -> (&str, Vec<&str>) {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or("");
    (name, parts.collect())
}

fn arg<T: std::str::FromStr>(spec: &str, args: &[&str], k: usize) -> Result<T> {
    args.get(k)
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| HdxError::InvalidParameter(format!("{spec}: argument {} missing or malformed", k + 1)))
}

fn arity(spec: &str, args: &[&str], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(HdxError::InvalidParameter(format!("{spec}: expected {n} arguments, got {}", args.len())));
    }
    Ok(())
}

fn need_seed(spec: &str, seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| HdxError::InvalidParameter(format!("{spec} is randomized and needs a seed")))
}

/// Whether a generator or function spec draws random numbers.
pub fn is_randomized(spec: &str) -> bool {
    matches!(
        split(spec).0,
        "product" | "sparse" | "perturbed" | "perturbed-product" | "random_pm1" | "random_gauss"
    )
}

pub fn generate_complex(spec: &str, seed: Option<u64>) -> Result<PartiteComplex> {
    let (name, args) = split(spec);
    match name {
        "cube" => {
            arity(spec, &args, 2)?;
            uniform_cube(arg(spec, &args, 0)?, arg(spec, &args, 1)?)
        }
        "biased" => {
            arity(spec, &args, 2)?;
            let d: usize = arg(spec, &args, 0)?;
            let p: f64 = arg(spec, &args, 1)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(HdxError::InvalidParameter(format!("{spec}: bias must lie in (0, 1)")));
            }
            build_product(&vec![vec![1.0 - p, p]; d])
        }
        "matching" => {
            arity(spec, &args, 1)?;
            let k: u32 = arg(spec, &args, 0)?;
            build_explicit((0..k).map(|v| (vec![v, v], 1.0)).collect())
        }
        "product" => {
            arity(spec, &args, 2)?;
            let d: usize = arg(spec, &args, 0)?;
            random_product(&vec![arg(spec, &args, 1)?; d], need_seed(spec, seed)?)
        }
        "sparse" => {
            arity(spec, &args, 3)?;
            let d: usize = arg(spec, &args, 0)?;
            let k: usize = arg(spec, &args, 1)?;
            random_sparse(d, &vec![k; d], arg(spec, &args, 2)?, need_seed(spec, seed)?)
        }
        "perturbed" | "perturbed-product" => {
            arity(spec, &args, 3)?;
            let d: usize = arg(spec, &args, 0)?;
            let k: usize = arg(spec, &args, 1)?;
            let eps: f64 = arg(spec, &args, 2)?;
            let seed = need_seed(spec, seed)?;
            let base = if name == "perturbed" {
                uniform_cube(d, k)?
            } else {
                random_product(&vec![k; d], seed)?
            };
            perturb(&base, eps, seed.wrapping_add(1))
        }
        _ => Err(HdxError::UnknownGenerator(spec.to_string())),
    }
}

fn bit(v: u32) -> f64 {
    if v == 0 {
        1.0
    } else {
        -1.0
    }
}

fn color_arg(spec: &str, args: &[&str], k: usize, d: usize) -> Result<usize> {
    let c: usize = arg(spec, args, k)?;
    if c >= d {
        return Err(HdxError::ColorOutOfRange { color: c, d });
    }
    Ok(c)
}

pub fn builtin_function(spec: &str, seed: Option<u64>, x: &Arc<PartiteComplex>) -> Result<FaceFunction> {
    let (name, args) = split(spec);
    let d = x.d();
    let top = x.colors();
    match name {
        "dictator" => {
            arity(spec, &args, 1)?;
            let i = color_arg(spec, &args, 0, d)?;
            FaceFunction::from_fn(Arc::clone(x), top, |v| bit(v[i]))
        }
        "parity" => {
            let colors: Vec<usize> = match args.as_slice() {
                [] => (0..d).collect(),
                [list] => list
                    .split(',')
                    .map(|c| match c.parse::<usize>() {
                        Ok(c) if c < d => Ok(c),
                        _ => Err(HdxError::InvalidParameter(format!("{spec}: bad color {c:?}"))),
                    })
                    .collect::<Result<_>>()?,
                _ => return Err(HdxError::InvalidParameter(format!("{spec}: expected a color list"))),
            };
            FaceFunction::from_fn(Arc::clone(x), top, |v| colors.iter().map(|&c| bit(v[c])).product())
        }
        "majority" => {
            arity(spec, &args, 0)?;
            FaceFunction::from_fn(Arc::clone(x), top, |v| {
                if v.iter().map(|&b| bit(b)).sum::<f64>() >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            })
        }
        "indicator" => {
            arity(spec, &args, 2)?;
            let i = color_arg(spec, &args, 0, d)?;
            let value: u32 = arg(spec, &args, 1)?;
            FaceFunction::from_fn(Arc::clone(x), top, |v| (v[i] == value) as u8 as f64)
        }
        "and" => {
            arity(spec, &args, 0)?;
            FaceFunction::from_fn(Arc::clone(x), top, |v| v.iter().all(|&b| b == 1) as u8 as f64)
        }
        "tribes" => {
            arity(spec, &args, 1)?;
            let w: usize = arg(spec, &args, 0)?;
            if w == 0 || d % w != 0 {
                return Err(HdxError::InvalidParameter(format!("{spec}: width must divide d = {d}")));
            }
            FaceFunction::from_fn(Arc::clone(x), top, |v| {
                v.chunks(w).any(|t| t.iter().all(|&b| b == 1)) as u8 as f64
            })
        }
        "random_pm1" => {
            arity(spec, &args, 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(need_seed(spec, seed)?);
            let vals = (0..x.len()).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
            FaceFunction::on_faces(Arc::clone(x), vals)
        }
        "random_gauss" => {
            arity(spec, &args, 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(need_seed(spec, seed)?);
            let vals = (0..x.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
            FaceFunction::on_faces(Arc::clone(x), vals)
        }
        _ => Err(HdxError::UnknownBuiltin(spec.to_string())),
    }
}

/// `v ↦ (1 − v)/2`: `+1 ↦ 0`, `−1 ↦ 1`.
pub fn to_zero_one(f: &FaceFunction) -> Result<FaceFunction> {
    if f.values().iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(HdxError::NonBoolean("expected a ±1-valued function"));
    }
    Ok(f.map(|v| (1.0 - v) / 2.0))
}

/// `b ↦ 1 − 2b`: `0 ↦ +1`, `1 ↦ −1`.
pub fn to_pm1(f: &FaceFunction) -> Result<FaceFunction> {
    if f.values().iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(HdxError::NonBoolean("expected a {0,1}-valued function"));
    }
    Ok(f.map(|v| 1.0 - 2.0 * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_on_cube() {
        let x = Arc::new(generate_complex("cube:2:2", None).unwrap());
        let f = builtin_function("dictator:0", None, &x).unwrap();
        assert_eq!(f.values(), &[1.0, 1.0, -1.0, -1.0]);
        assert!(builtin_function("dictator:2", None, &x).is_err());
    }

    #[test]
    fn biased_indicator() {
        let x = Arc::new(generate_complex("biased:1:0.25", None).unwrap());
        let f = builtin_function("indicator:0:1", None, &x).unwrap();
        assert!((f.moment(4.0) - 0.25).abs() < 1e-15);
        assert!((f.norm(2.0).powi(4) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn random_sources_are_seeded() {
        let x = Arc::new(generate_complex("sparse:3:3:10", Some(1)).unwrap());
        let a = builtin_function("random_pm1", Some(3), &x).unwrap();
        let b = builtin_function("random_pm1", Some(3), &x).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(builtin_function("random_gauss", None, &x).is_err());
        assert!(generate_complex("sparse:3:3:10", None).is_err());
        assert!(is_randomized("perturbed:2:2:0.1") && !is_randomized("cube:2:2"));
    }

    #[test]
    fn tribes_and_majority() {
        let x = Arc::new(generate_complex("cube:4:2", None).unwrap());
        let t = builtin_function("tribes:2", None, &x).unwrap();
        assert!((t.expectation() - 7.0 / 16.0).abs() < 1e-15);
        let y = Arc::new(generate_complex("cube:3:2", None).unwrap());
        let m = builtin_function("majority", None, &y).unwrap();
        assert_eq!(m.expectation(), 0.0);
        let p = builtin_function("parity:0,2", None, &y).unwrap();
        assert_eq!(p.evaluate_values(&[1, 0, 1]).unwrap(), 1.0);
        assert!(matches!(builtin_function("nope", None, &y), Err(HdxError::UnknownBuiltin(_))));
    }

    #[test]
    fn converters_invert() {
        let x = Arc::new(generate_complex("cube:3:2", None).unwrap());
        let m = builtin_function("majority", None, &x).unwrap();
        let back = to_pm1(&to_zero_one(&m).unwrap()).unwrap();
        assert_eq!(back.values(), m.values());
        assert!(to_pm1(&m).is_err());
    }
}

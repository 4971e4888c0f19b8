//! Slow, independent reference computations.
//!
//! Nothing here goes through marginals, operator handles or the
//! decomposition code: conditional expectations are sums over pairs of top
//! faces, so the cost is quadratic in the support.

pub use crate::expansion::oracle_opnorm_dense;

use crate::colors::ColorSet;
use crate::error::{HdxError, Result};
use crate::function::FaceFunction;

/// Support cap for [`oracle_norm`].
pub const ORACLE_MAX_SUPPORT: usize = 100_000;
/// Support cap for the quadratic oracles.
pub const ORACLE_MAX_PAIRS_SUPPORT: usize = 4_096;

fn top_values(f: &FaceFunction) -> Result<Vec<f64>> {
    if f.colors() == f.complex().colors() {
        Ok(f.values().to_vec())
    } else {
        Ok(f.lift().into_values())
    }
}

/// `(Σ_x μ(x)|f(x)|^q)^{1/q}` by a single pass over the domain.
pub fn oracle_norm(f: &FaceFunction, q: f64) -> Result<f64> {
    if f.len() > ORACLE_MAX_SUPPORT {
        return Err(HdxError::CapExceeded {
            what: "oracle support",
            limit: ORACLE_MAX_SUPPORT,
            actual: f.len(),
        });
    }
    if !(q >= 1.0) {
        return Err(HdxError::InvalidParameter(format!("q must be at least 1, got {q}")));
    }
    let probs = f.measure().probs();
    let mut total = 0.0;
    for (v, p) in f.values().iter().zip(probs) {
        total += p * v.abs().powf(q);
    }
    Ok(total.powf(1.0 / q))
}

fn check_pairs(f: &FaceFunction) -> Result<()> {
    let n = f.complex().len();
    if n > ORACLE_MAX_PAIRS_SUPPORT {
        return Err(HdxError::CapExceeded {
            what: "oracle support",
            limit: ORACLE_MAX_PAIRS_SUPPORT,
            actual: n,
        });
    }
    Ok(())
}

/// `E[f | x_S]` at every top face, from the definition.
pub fn brute_conditional(f: &FaceFunction, s: ColorSet) -> Result<Vec<f64>> {
    check_pairs(f)?;
    let x = f.complex();
    let vals = top_values(f)?;
    let agree = |a: &[u32], b: &[u32]| s.iter().all(|c| a[c] == b[c]);
    Ok(x.faces()
        .map(|w| {
            let (mut num, mut den) = (0.0, 0.0);
            for (k, v) in x.faces().enumerate() {
                if agree(w, v) {
                    num += x.weight(k) * vals[k];
                    den += x.weight(k);
                }
            }
            num / den
        })
        .collect())
}

/// `f^{=S} = Σ_{T⊆S} (−1)^{|S∖T|} E[f | x_T]` for every `S`, lifted to top
/// faces and indexed by `S.bits()`.
pub fn brute_efron_stein(f: &FaceFunction) -> Result<Vec<Vec<f64>>> {
    let d = f.complex().d();
    let cond: Vec<Vec<f64>> = ColorSet::all(d).map(|t| brute_conditional(f, t)).collect::<Result<_>>()?;
    let n = f.complex().len();
    Ok(ColorSet::all(d)
        .map(|s| {
            let mut out = vec![0.0; n];
            for t in s.subsets() {
                let sign = if (s.len() - t.len()) % 2 == 0 { 1.0 } else { -1.0 };
                for (o, c) in out.iter_mut().zip(&cond[t.bits() as usize]) {
                    *o += sign * c;
                }
            }
            out
        })
        .collect())
}

/// `T_r f = Σ_S r_S ∏_{i∉S}(1 − r_i) E[f | x_S]`, from the definition.
pub fn brute_noise(f: &FaceFunction, r: &[f64]) -> Result<Vec<f64>> {
    let d = f.complex().d();
    if r.len() != d {
        return Err(HdxError::InvalidParameter(format!("need {d} noise rates, got {}", r.len())));
    }
    let mut out = vec![0.0; f.complex().len()];
    for s in ColorSet::all(d) {
        let coef: f64 = (0..d).map(|i| if s.contains(i) { r[i] } else { 1.0 - r[i] }).product();
        if coef == 0.0 {
            continue;
        }
        for (o, c) in out.iter_mut().zip(brute_conditional(f, s)?) {
            *o += coef * c;
        }
    }
    Ok(out)
}

//! Expansion certificates: the spectral parameter `γ` of a complex (largest
//! second singular value of a bipartite color-pair walk in any link), `q→q`
//! brackets for the same walks, and swap-walk norm checks.

mod ascent;

pub use ascent::{
    interpolation_upper, norm_1, norm_inf, opnorm_q_lower, oracle_opnorm_dense, AscentOptions, NormEstimate,
    NormMethod, DENSE_ORACLE_MAX_COLS,
};

use crate::colors::ColorSet;
use crate::complex::{PartiteComplex, SubAssignment};
use crate::error::{HdxError, Result};
use crate::util::mix_seed;
use crate::walk::{swap_walk, WeightedMatrix};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// One link walk `A^τ_{i→j}` and its second singular value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub link: SubAssignment,
    pub from: usize,
    pub to: usize,
    pub lambda2: f64,
    /// Set when one side has fewer than two support points; `lambda2` is 0.
    pub degenerate: bool,
}

/// `q→q` bracket for the worst link walk at a given `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QEntry {
    pub q: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCertificate {
    pub complex_id: u64,
    pub entries: Vec<CertificateEntry>,
    pub gamma: f64,
    pub q_entries: Vec<QEntry>,
}

/// The walk `A_{i→j} − Π_{i→j}` of a joint distribution `joint[(b, a)]` of
/// `(x_j, x_i)`, as an operator from functions of `x_i` to functions of `x_j`.
/// Rows and columns with zero mass are dropped.
pub fn bipartite_walk(joint: &DMatrix<f64>) -> WeightedMatrix {
    let total = joint.sum();
    let cols: Vec<usize> = (0..joint.ncols()).filter(|&a| joint.column(a).sum() > 0.0).collect();
    let rows: Vec<usize> = (0..joint.nrows()).filter(|&b| joint.row(b).sum() > 0.0).collect();
    let pin: Vec<f64> = cols.iter().map(|&a| joint.column(a).sum() / total).collect();
    let pout: Vec<f64> = rows.iter().map(|&b| joint.row(b).sum() / total).collect();
    let m = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
        joint[(rows[r], cols[c])] / total / pout[r] - pin[c]
    });
    WeightedMatrix {
        matrix: m,
        domain_measure: pin,
        codomain_measure: pout,
    }
}

/// The joint distribution of `(x_to, x_from)` restricted to faces extending
/// each feasible assignment of `cond`, one matrix per assignment in marginal
/// order.
fn link_joints(x: &PartiteComplex, cond: ColorSet, from: usize, to: usize) -> Vec<DMatrix<f64>> {
    let m = x.marginal(cond).expect("validated");
    let (ni, nj) = (x.color_sizes()[from], x.color_sizes()[to]);
    let mut out = vec![DMatrix::zeros(nj, ni); m.len()];
    for f in 0..x.len() {
        let face = x.face(f);
        out[m.class_of_face(f)][(face[to] as usize, face[from] as usize)] += x.weight(f);
    }
    out
}

fn support_size(v: impl Iterator<Item = f64>) -> usize {
    v.filter(|&p| p > 0.0).count()
}

/// Every link walk, in the order: conditioning set (by bitmask), assignment
/// (marginal order), then ordered color pair.
pub fn link_walks(x: &PartiteComplex) -> Result<Vec<(CertificateEntry, WeightedMatrix)>> {
    let d = x.d();
    if d < 2 {
        return Err(HdxError::InvalidParameter(format!("expansion needs d ≥ 2, got {d}")));
    }
    let sets: Vec<ColorSet> = ColorSet::all(d).filter(|s| s.len() + 2 <= d).collect();
    let per_set: Vec<Vec<(CertificateEntry, WeightedMatrix)>> = sets
        .par_iter()
        .map(|&cond| {
            let m = x.marginal(cond).expect("validated");
            let rest = cond.complement(d).to_vec();
            let mut out = Vec::new();
            let mut pairs = Vec::new();
            for &i in &rest {
                for &j in &rest {
                    if i != j {
                        pairs.push((i, j, link_joints(x, cond, i, j)));
                    }
                }
            }
            for k in 0..m.len() {
                for (i, j, joints) in &pairs {
                    let joint = &joints[k];
                    let walk = bipartite_walk(joint);
                    let degenerate = support_size(joint.column_iter().map(|c| c.sum())) < 2
                        || support_size(joint.row_iter().map(|r| r.sum())) < 2;
                    let lambda2 = if degenerate { 0.0 } else { walk.spectral_norm() };
                    out.push((
                        CertificateEntry {
                            link: m.sub_assignment(k),
                            from: *i,
                            to: *j,
                            lambda2,
                            degenerate,
                        },
                        walk,
                    ));
                }
            }
            out
        })
        .collect();
    Ok(per_set.into_iter().flatten().collect())
}

/// Spectral certificate: `γ = max λ₂` over every link of codimension at least
/// two and every ordered pair of remaining colors.
pub fn gamma_certificate(x: &PartiteComplex) -> Result<ExpansionCertificate> {
    let entries: Vec<CertificateEntry> = link_walks(x)?.into_iter().map(|(e, _)| e).collect();
    let gamma = entries.iter().map(|e| e.lambda2).fold(0.0, f64::max);
    Ok(ExpansionCertificate {
        complex_id: x.id(),
        entries,
        gamma,
        q_entries: Vec::new(),
    })
}

/// `γ_q` from the spectral `γ`: `γ^{2/q} 2^{1−2/q}` for `q ≥ 2` and
/// `γ^{2(q−1)/q} 2^{1−2(q−1)/q}` for `1 < q < 2`.
pub fn gamma_q_upper(gamma: f64, q: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(HdxError::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    if !(0.0..=1.0 + 1e-9).contains(&gamma) {
        return Err(HdxError::InvalidParameter(format!("γ must lie in [0, 1], got {gamma}")));
    }
    let e = if q >= 2.0 { 2.0 / q } else { 2.0 * (q - 1.0) / q };
    Ok(gamma.powf(e) * 2f64.powf(1.0 - e))
}

fn seed_for(base: u64, complex: u64, e: &CertificateEntry, q: f64) -> u64 {
    let mut parts = vec![base, complex, e.link.colors.bits() as u64, e.from as u64, e.to as u64, q.to_bits()];
    parts.extend(e.link.values.iter().map(|&v| v as u64));
    mix_seed(&parts)
}

impl ExpansionCertificate {
    /// Add a `q→q` bracket: the largest ascent lower bound over all link
    /// walks, and the interpolated bound `γ_q(γ)`.
    pub fn add_q(&mut self, x: &PartiteComplex, q: f64, opts: &AscentOptions) -> Result<&QEntry> {
        if x.id() != self.complex_id {
            return Err(HdxError::DomainMismatch("certificate belongs to another complex".into()));
        }
        let walks = link_walks(x)?;
        let lowers = walks
            .par_iter()
            .map(|(e, w)| {
                if e.degenerate {
                    return Ok(0.0);
                }
                let o = AscentOptions {
                    seed: seed_for(opts.seed, self.complex_id, e, q),
                    ..*opts
                };
                opnorm_q_lower(w, q, &o).map(|est| est.lower)
            })
            .collect::<Result<Vec<f64>>>()?;
        let lower = lowers.into_iter().fold(0.0, f64::max);
        let upper = gamma_q_upper(self.gamma.min(1.0), q)?;
        self.q_entries.push(QEntry { q, lower, upper });
        Ok(self.q_entries.last().expect("just pushed"))
    }
}

/// Outcome of comparing `‖A_{S,T} − Π_{S,T}‖_q` with `|S||T|·γ_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapCheck {
    pub measured: NormEstimate,
    pub gamma: f64,
    pub gamma_q: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Measure a lower bound on `‖A_{S,T} − Π_{S,T}‖_q` and compare it with the
/// swap-walk bound `|S||T|·γ_q(X)`. `gamma` defaults to the spectral
/// certificate of `x`.
pub fn swap_norm_check(
    x: &Arc<PartiteComplex>,
    s: ColorSet,
    t: ColorSet,
    q: f64,
    seed: u64,
    gamma: Option<f64>,
) -> Result<SwapCheck> {
    let (a, pi) = swap_walk(x, s, t)?;
    let m = a.minus(&pi)?.materialize();
    let measured = opnorm_q_lower(&m, q, &AscentOptions::with_seed(seed))?;
    let gamma = match gamma {
        Some(g) => g,
        None => gamma_certificate(x)?.gamma,
    };
    let gamma_q = gamma_q_upper(gamma.min(1.0), q)?;
    let bound = (s.len() * t.len()) as f64 * gamma_q;
    Ok(SwapCheck {
        pass: measured.lower <= bound + 1e-9,
        measured,
        gamma,
        gamma_q,
        bound,
    })
}

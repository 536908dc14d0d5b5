//! Recovers learnable-function values from simulation data: log and ratio
//! estimators, reassembly into basis values, and gauge-fixed model
//! reconstruction.

use crate::design::{Plan, TargetKind};
use crate::linalg::{SparseVec, TrackedEchelon};
use crate::model::{Embedding, NoiseModel};
use crate::sim::SimResult;
use crate::{Error, Rat, Result};

/// A single estimated quantity. Nonpositive sampled means are flagged
/// rather than clamped; flagged estimates carry NaN values.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub flagged: bool,
}

impl Estimate {
    fn flagged() -> Self {
        Estimate { value: f64::NAN, stderr: f64::NAN, flagged: true }
    }
}

fn mean_variance(r: &SimResult) -> f64 {
    if r.shots == 0 {
        0.0
    } else {
        (1.0 - r.mean * r.mean).max(0.0) / r.shots as f64
    }
}

/// Log estimator for a single rooted-cycle experiment:
/// `f_hat = -log(sign * mean)`.
pub fn estimate_single(result: &SimResult, expected_sign: i8) -> Estimate {
    let mean = f64::from(expected_sign) * result.mean;
    if mean <= 0.0 {
        return Estimate::flagged();
    }
    let var = mean_variance(result);
    Estimate { value: -mean.ln(), stderr: var.sqrt() / mean, flagged: false }
}

/// Two-point ratio estimator for a germ family:
/// `lambda_hat = (mean_m / mean_0)^(1/m)`, `f_hat = -log(lambda_hat)`.
/// With `m = 1` this degrades to the plain log-ratio.
pub fn estimate_cycle(
    result_m0: &SimResult,
    result_m: &SimResult,
    m: u32,
    sign_m0: i8,
    sign_m: i8,
) -> (Estimate, Estimate) {
    assert!(m >= 1, "ratio estimator needs a positive germ power");
    let mean0 = f64::from(sign_m0) * result_m0.mean;
    let meanm = f64::from(sign_m) * result_m.mean;
    if mean0 <= 0.0 || meanm <= 0.0 {
        return (Estimate::flagged(), Estimate::flagged());
    }
    let lambda_hat = (meanm / mean0).powf(1.0 / m as f64);
    // Delta method on log(lambda_hat).
    let var_log = (mean_variance(result_m) / (meanm * meanm)
        + mean_variance(result_m0) / (mean0 * mean0))
        / (m as f64 * m as f64);
    let se_log = var_log.sqrt();
    (
        Estimate { value: lambda_hat, stderr: lambda_hat * se_log, flagged: false },
        Estimate { value: -lambda_hat.ln(), stderr: se_log, flagged: false },
    )
}

/// Log-linear fit over all germ powers: slope of `log(sign*mean)` against
/// `m` gives `-f_hat`. Offered as an alternative to the two-point default.
pub fn estimate_cycle_logfit(points: &[(u32, f64)]) -> Estimate {
    if points.len() < 2 || points.iter().any(|&(_, y)| y <= 0.0) {
        return Estimate::flagged();
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|&(m, _)| m as f64).sum();
    let sy: f64 = points.iter().map(|&(_, y)| y.ln()).sum();
    let sxx: f64 = points.iter().map(|&(m, _)| (m as f64) * (m as f64)).sum();
    let sxy: f64 = points.iter().map(|&(m, y)| (m as f64) * y.ln()).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Estimate::flagged();
    }
    let slope = (n * sxy - sx * sy) / denom;
    Estimate { value: -slope, stderr: f64::NAN, flagged: false }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EstimatorMode {
    /// Ratio of the largest germ power against the power-0 experiment.
    TwoPoint,
    /// Least-squares log-linear fit over every germ power.
    LogFit,
}

/// Per-basis-element estimate assembled from a plan's results.
#[derive(Clone, Debug)]
pub struct ElementEstimate {
    pub target: usize,
    /// `f_hat`, the estimated covector value.
    pub f_hat: Estimate,
    /// `lambda_hat = exp(-f_hat)` for germ targets (ratio estimator).
    pub lambda_hat: Option<Estimate>,
}

/// Solves the plan's targets from the simulation results. For the default
/// plans the targets are the basis, so this is a passthrough of the per
/// -target estimators with error propagation.
pub fn assemble(plan: &Plan, results: &[SimResult], mode: EstimatorMode) -> Result<Vec<ElementEstimate>> {
    if results.len() != plan.specs.len() {
        return Err(Error::DimensionMismatch(results.len(), plan.specs.len()));
    }
    let mut out = Vec::with_capacity(plan.targets.len());
    for (t, entry) in plan.targets.iter().enumerate() {
        match &entry.kind {
            TargetKind::Single(idx) => {
                let est = estimate_single(&results[*idx], plan.specs[*idx].expected_sign);
                out.push(ElementEstimate { target: t, f_hat: est, lambda_hat: None });
            }
            TargetKind::Germ(family) => {
                let zero = family
                    .iter()
                    .find(|(m, _)| *m == 0)
                    .ok_or(Error::RankDeficient)?;
                let positive: Vec<&(u32, usize)> =
                    family.iter().filter(|(m, _)| *m > 0).collect();
                if positive.is_empty() {
                    return Err(Error::RankDeficient);
                }
                match mode {
                    EstimatorMode::TwoPoint => {
                        let &&(m, idx) = positive
                            .iter()
                            .max_by_key(|(m, _)| *m)
                            .expect("nonempty");
                        let (lam, f) = estimate_cycle(
                            &results[zero.1],
                            &results[idx],
                            m,
                            plan.specs[zero.1].expected_sign,
                            plan.specs[idx].expected_sign,
                        );
                        out.push(ElementEstimate { target: t, f_hat: f, lambda_hat: Some(lam) });
                    }
                    EstimatorMode::LogFit => {
                        let points: Vec<(u32, f64)> = family
                            .iter()
                            .map(|&(m, idx)| {
                                (m, f64::from(plan.specs[idx].expected_sign) * results[idx].mean)
                            })
                            .collect();
                        let f = estimate_cycle_logfit(&points);
                        let lam = Estimate {
                            value: (-f.value).exp(),
                            stderr: f64::NAN,
                            flagged: f.flagged,
                        };
                        out.push(ElementEstimate { target: t, f_hat: f, lambda_hat: Some(lam) });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Expands an arbitrary reduced covector exactly in the plan's target
/// basis; `None` if it lies outside the span.
pub fn expand_in_targets(plan: &Plan, f: &SparseVec<Rat>) -> Option<Vec<(usize, Rat)>> {
    let mut ech: TrackedEchelon<Rat> = TrackedEchelon::new();
    for entry in &plan.targets {
        ech.insert(entry.covector.clone());
    }
    ech.express(f).map(|coeffs| {
        coeffs.iter().map(|(i, v)| (*i as usize, v.clone())).collect()
    })
}

#[derive(Clone, Debug)]
pub enum GaugeConvention {
    /// The unique solution orthogonal to the gauge space.
    MinimumNorm,
    /// Fix the designated reduced columns to zero (e.g. trusted state
    /// preparation); fails if inconsistent with the gauge dimension.
    FixZero(Vec<u32>),
}

/// Reconstructs reduced parameters from basis values: finds `r_hat` with
/// `f_i(r_hat) = v_i` for every basis covector under the chosen gauge
/// convention.
pub fn gauge_fix(
    emb: &Embedding,
    basis: &[SparseVec<Rat>],
    values: &[f64],
    convention: &GaugeConvention,
) -> Result<Vec<f64>> {
    if basis.len() != values.len() {
        return Err(Error::DimensionMismatch(basis.len(), values.len()));
    }
    let dim = emb.dim() as usize;
    let keep: Vec<bool> = match convention {
        GaugeConvention::MinimumNorm => vec![true; dim],
        GaugeConvention::FixZero(cols) => {
            let mut keep = vec![true; dim];
            for &c in cols {
                keep[c as usize] = false;
            }
            keep
        }
    };
    // Dense rows restricted to the kept columns.
    let k = basis.len();
    let rows: Vec<Vec<(usize, f64)>> = basis
        .iter()
        .map(|b| {
            b.iter()
                .filter(|(c, _)| keep[*c as usize])
                .map(|(c, v)| (*c as usize, crate::scalar::Scalar::to_f64(v)))
                .collect()
        })
        .collect();
    // Gram matrix G = F F^T over the kept columns.
    let mut gram = vec![0.0f64; k * k];
    for i in 0..k {
        for j in i..k {
            let mut acc = 0.0;
            let (a, b) = (&rows[i], &rows[j]);
            let mut ia = 0;
            let mut ib = 0;
            while ia < a.len() && ib < b.len() {
                match a[ia].0.cmp(&b[ib].0) {
                    std::cmp::Ordering::Less => ia += 1,
                    std::cmp::Ordering::Greater => ib += 1,
                    std::cmp::Ordering::Equal => {
                        acc += a[ia].1 * b[ib].1;
                        ia += 1;
                        ib += 1;
                    }
                }
            }
            gram[i * k + j] = acc;
            gram[j * k + i] = acc;
        }
    }
    let y = cholesky_solve(&mut gram, k, values).ok_or(Error::BadConvention)?;
    let mut r = vec![0.0f64; dim];
    for (i, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            r[c] += y[i] * v;
        }
    }
    // The solution must actually reproduce the requested values (FixZero
    // can be inconsistent even when the Gram matrix is invertible).
    for (b, &v) in basis.iter().zip(values.iter()) {
        let got: f64 =
            b.iter().map(|(c, w)| crate::scalar::Scalar::to_f64(w) * r[*c as usize]).sum();
        if (got - v).abs() > 1e-6 * v.abs().max(1.0) {
            return Err(Error::BadConvention);
        }
    }
    Ok(r)
}

/// In-place Cholesky solve of `G y = v` for symmetric positive-definite G.
fn cholesky_solve(gram: &mut [f64], k: usize, v: &[f64]) -> Option<Vec<f64>> {
    // Factor G = L L^T.
    for i in 0..k {
        for j in 0..=i {
            let mut acc = gram[i * k + j];
            for t in 0..j {
                acc -= gram[i * k + t] * gram[j * k + t];
            }
            if i == j {
                if acc <= 0.0 {
                    return None;
                }
                gram[i * k + j] = acc.sqrt();
            } else {
                gram[i * k + j] = acc / gram[j * k + j];
            }
        }
    }
    // Forward then backward substitution.
    let mut y = v.to_vec();
    for i in 0..k {
        for t in 0..i {
            let tmp = y[t];
            y[i] -= gram[i * k + t] * tmp;
        }
        y[i] /= gram[i * k + i];
    }
    for i in (0..k).rev() {
        for t in (i + 1)..k {
            let tmp = y[t];
            y[i] -= gram[t * k + i] * tmp;
        }
        y[i] /= gram[i * k + i];
    }
    Some(y)
}

/// Full estimation report for one plan run.
#[derive(Clone, Debug)]
pub struct EstimationReport {
    pub elements: Vec<ReportElement>,
    /// Gauge-fixed reduced parameters under the minimum-norm convention.
    pub gauge_fixed: Option<Vec<f64>>,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ReportElement {
    pub target: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub flagged: bool,
    pub lambda_hat: Option<f64>,
    /// Present when a ground-truth model was supplied.
    pub truth: Option<f64>,
    pub abs_error: Option<f64>,
    /// |lambda_hat - lambda| / (1 - lambda), germ targets only.
    pub rel_infidelity_error: Option<f64>,
}

/// Builds the report, attaching truth values when a model is given and
/// reconstructing gauge-fixed parameters when no estimate is flagged.
pub fn build_report(
    emb: &Embedding,
    plan: &Plan,
    estimates: &[ElementEstimate],
    truth: Option<&NoiseModel>,
    shots: u64,
    seed: u64,
) -> Result<EstimationReport> {
    let mut elements = Vec::with_capacity(estimates.len());
    for est in estimates {
        let covector = &plan.targets[est.target].covector;
        let truth_value = truth.map(|t| t.covector_value(covector));
        let abs_error = truth_value
            .filter(|_| !est.f_hat.flagged)
            .map(|t| (est.f_hat.value - t).abs());
        let rel = match (&est.lambda_hat, truth_value) {
            (Some(lam), Some(t)) if !lam.flagged => {
                let lambda_true = (-t).exp();
                let infid = 1.0 - lambda_true;
                (infid > 1e-15).then(|| (lam.value - lambda_true).abs() / infid)
            }
            _ => None,
        };
        elements.push(ReportElement {
            target: est.target,
            estimate: est.f_hat.value,
            stderr: est.f_hat.stderr,
            flagged: est.f_hat.flagged,
            lambda_hat: est.lambda_hat.as_ref().map(|l| l.value),
            truth: truth_value,
            abs_error,
            rel_infidelity_error: rel,
        });
    }
    let gauge_fixed = if estimates.iter().all(|e| !e.f_hat.flagged) {
        let basis: Vec<SparseVec<Rat>> = plan.target_basis();
        let values: Vec<f64> = estimates.iter().map(|e| e.f_hat.value).collect();
        Some(gauge_fix(emb, &basis, &values, &GaugeConvention::MinimumNorm)?)
    } else {
        None
    };
    Ok(EstimationReport { elements, gauge_fixed, shots, seed })
}

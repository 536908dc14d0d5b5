//! Exact expectation evaluation of experiment specs under a ground-truth
//! model, plus binomial shot sampling.
//!
//! Every compiled experiment follows a single Pauli trajectory: the
//! prepared label is relabeled (with sign) by each Clifford layer, and each
//! noisy gate multiplies the running product by the fidelity of the
//! pre-gate label. The circuit being Clifford throughout, the trajectory is
//! exact rather than an approximation.

use crate::clifford::SignedPauli;
use crate::design::{ExperimentSpec, Layer, Plan};
use crate::model::{Embedding, NoiseModel};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

#[derive(Clone, Debug)]
pub struct SimResult {
    pub index: usize,
    pub exact: f64,
    /// 0 means exact mode: `mean == exact`.
    pub shots: u64,
    pub mean: f64,
    pub seed: u64,
}

/// Exact expectation of the measured Pauli under the noisy realization of
/// the circuit: the product of the prep, per-gate, and meas fidelities
/// along the trajectory, carrying the exact Clifford sign.
pub fn exact_expectation(
    emb: &Embedding,
    model: &NoiseModel,
    spec: &ExperimentSpec,
) -> Result<f64> {
    if spec.prep.n() != emb.n() {
        return Err(Error::DimensionMismatch(spec.prep.n(), emb.n()));
    }
    let mut current = SignedPauli::plus(spec.prep);
    let mut product = model.lambda_prep(emb, &spec.prep.pattern());
    for layer in &spec.layers {
        match layer {
            Layer::Sq(sq) => {
                current = sq.apply_signed(&current);
            }
            Layer::Gate(g) => {
                product *= model.lambda_gate(emb, *g, &current.label);
                current = emb.gate_set().gate(*g).apply_signed(&current);
            }
        }
    }
    if current.label != spec.meas {
        return Err(Error::Unsupported(format!(
            "circuit propagates {} but the spec measures {}",
            current.label, spec.meas
        )));
    }
    product *= model.lambda_meas(emb, &current.label.pattern());
    Ok(f64::from(current.sign) * product)
}

/// Draws `shots` i.i.d. +/-1 outcomes with the exact mean (via one binomial
/// draw); `shots = 0` passes the exact value through. Deterministic under
/// the seed.
pub fn sample(
    emb: &Embedding,
    model: &NoiseModel,
    spec: &ExperimentSpec,
    index: usize,
    shots: u64,
    seed: u64,
) -> Result<SimResult> {
    let exact = exact_expectation(emb, model, spec)?;
    if exact.abs() > 1.0 + 1e-12 {
        return Err(Error::Unphysical);
    }
    let mean = if shots == 0 {
        exact
    } else {
        let p = (1.0 + exact.clamp(-1.0, 1.0)) / 2.0;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let k = Binomial::new(shots, p)
            .map_err(|_| Error::Unphysical)?
            .sample(&mut rng) as f64;
        (2.0 * k - shots as f64) / shots as f64
    };
    Ok(SimResult { index, exact, shots, mean, seed })
}

/// Runs every spec in a plan; per-spec seeds are derived as `seed ^ index`.
/// Output order is the spec order regardless of execution strategy.
pub fn run_plan(
    emb: &Embedding,
    model: &NoiseModel,
    plan: &Plan,
    shots: u64,
    seed: u64,
) -> Result<Vec<SimResult>> {
    plan.specs
        .iter()
        .enumerate()
        .map(|(i, spec)| sample(emb, model, spec, i, shots, seed ^ i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{builtin, tensor_parallel, GateSet};
    use crate::design::{compile_germ, plan_simple};
    use crate::learn::{reduced_cycle_basis_gates, reduced_spaces};
    use crate::model::{gauge_transform_reduced, Ansatz};
    use crate::space::ParamIndex;
    use num_traits::Zero;

    fn cz_ring(n: usize) -> Embedding {
        let gates = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                tensor_parallel(n, &[(builtin("CZ").unwrap(), vec![i, j])], format!("CZ_{i}{j}"))
                    .unwrap()
            })
            .collect();
        let gs = GateSet::new(n, gates).unwrap();
        Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap()
    }

    #[test]
    fn noiseless_expectation_is_the_sign() {
        let emb = cz_ring(3);
        let model = NoiseModel::zero(&emb);
        let plan = plan_simple(&emb, 6).unwrap();
        for spec in &plan.specs {
            let e = exact_expectation(&emb, &model, spec).unwrap();
            assert_eq!(e, f64::from(spec.expected_sign));
        }
    }

    #[test]
    fn expectation_matches_covector_value() {
        // exp(-target(r)) = sign * expectation, for every spec and model.
        let emb = cz_ring(3);
        let model = NoiseModel::random(&emb, 11, 0.2);
        let plan = plan_simple(&emb, 6).unwrap();
        for spec in &plan.specs {
            let e = exact_expectation(&emb, &model, spec).unwrap();
            let f = model.covector_value(&spec.target);
            assert!(
                (f64::from(spec.expected_sign) * e - (-f).exp()).abs() < 1e-12,
                "target contract failed"
            );
        }
    }

    #[test]
    fn germ_expectation_is_a_power_law() {
        let emb = cz_ring(4);
        let model = NoiseModel::random(&emb, 3, 0.1);
        let cycles = reduced_cycle_basis_gates(&emb).unwrap();
        for cycle in cycles.iter().take(20) {
            let lambda = (-model.covector_value(&cycle.covector)).exp();
            let spec0 = compile_germ(&emb, &cycle.witness, 0).unwrap();
            let a = exact_expectation(&emb, &model, &spec0).unwrap();
            for m in [1u32, 2, 3, 5, 8] {
                let spec = compile_germ(&emb, &cycle.witness, m).unwrap();
                let e = exact_expectation(&emb, &model, &spec).unwrap();
                assert!(
                    (e - a * lambda.powi(m as i32)).abs() < 1e-12,
                    "A*lambda^m law failed at m={m}"
                );
            }
        }
    }

    #[test]
    fn gauge_transform_leaves_expectations_unchanged() {
        let emb = cz_ring(3);
        let model = NoiseModel::random(&emb, 17, 0.15);
        let report = reduced_spaces(&emb, 6).unwrap();
        let plan = plan_simple(&emb, 6).unwrap();
        for d in &report.gauge_basis {
            for eta in [0.01, -0.01, 0.1, -0.1] {
                let shifted = gauge_transform_reduced(&model, d, eta);
                for spec in &plan.specs {
                    let a = exact_expectation(&emb, &model, spec).unwrap();
                    let b = exact_expectation(&emb, &shifted, spec).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                        "gauge direction changed an expectation"
                    );
                }
            }
        }
        // A non-gauge direction does change the expectation of its self-loop.
        let reduced = emb.reduced();
        let zz = crate::clifford::embed_label(&"ZZ".parse().unwrap(), &[1, 2], 3);
        let col = reduced.col(&ParamIndex::Gate(0, zz)).unwrap();
        let dir = crate::linalg::SparseVec::unit(col);
        let shifted = gauge_transform_reduced(&model, &dir, 0.1);
        let spec = plan
            .specs
            .iter()
            .find(|s| !s.target.coeff(col).is_zero())
            .expect("some experiment targets the ZZ self-loop");
        let a = exact_expectation(&emb, &model, spec).unwrap();
        let b = exact_expectation(&emb, &shifted, spec).unwrap();
        assert!((a - b).abs() > 1e-6);
    }

    #[test]
    fn sampling_is_deterministic_and_exact_at_zero_shots() {
        let emb = cz_ring(3);
        let model = NoiseModel::random(&emb, 5, 0.1);
        let plan = plan_simple(&emb, 6).unwrap();
        let spec = &plan.specs[7];
        let r0 = sample(&emb, &model, spec, 7, 0, 123).unwrap();
        assert_eq!(r0.mean, r0.exact);
        let r1 = sample(&emb, &model, spec, 7, 10_000, 123).unwrap();
        let r2 = sample(&emb, &model, spec, 7, 10_000, 123).unwrap();
        assert_eq!(r1.mean, r2.mean);
        // Expectation 1 (noiseless SPAM cycle with lambda = 1): all +1.
        let noiseless = NoiseModel::zero(&emb);
        let r = sample(&emb, &noiseless, &plan.specs[0], 0, 500, 9).unwrap();
        assert_eq!(r.mean, 1.0);
    }

    #[test]
    fn sample_mean_converges() {
        let emb = cz_ring(3);
        let model = NoiseModel::random(&emb, 21, 0.2);
        let plan = plan_simple(&emb, 6).unwrap();
        let spec = &plan.specs[10];
        let exact = exact_expectation(&emb, &model, spec).unwrap();
        let shots = 4096u64;
        let mut errs = Vec::new();
        for rep in 0..100 {
            let r = sample(&emb, &model, spec, 0, shots, 1000 + rep).unwrap();
            errs.push((r.mean - exact).abs());
        }
        errs.sort_by(f64::total_cmp);
        let rms = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
        assert!(rms <= 1.1 / (shots as f64).sqrt(), "rms error {rms} too large");
    }
}

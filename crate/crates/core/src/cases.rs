//! The four reference configurations used throughout the test suite and
//! the command-line `casestudy` command: a single CZ with a complete
//! model, a ring of individually-addressed CZs with fully local noise, and
//! the even/odd parallel-CZ ring under nearest-neighbor and covariant
//! 4-local quasi-local models.

use crate::clifford::{builtin, tensor_parallel, GateSet};
use crate::model::{Ansatz, Embedding};
use crate::pauli::{FactorSet, Pattern};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CaseStudy {
    CzSingle,
    CzRingFullyLocal,
    CzRingNn,
    CzRingCovariant,
}

impl CaseStudy {
    pub const ALL: [CaseStudy; 4] = [
        CaseStudy::CzSingle,
        CaseStudy::CzRingFullyLocal,
        CaseStudy::CzRingNn,
        CaseStudy::CzRingCovariant,
    ];

    pub fn from_name(name: &str) -> Option<CaseStudy> {
        match name {
            "cz-single" => Some(CaseStudy::CzSingle),
            "cz-ring-fully-local" => Some(CaseStudy::CzRingFullyLocal),
            "cz-ring-nn" => Some(CaseStudy::CzRingNn),
            "cz-ring-covariant" => Some(CaseStudy::CzRingCovariant),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseStudy::CzSingle => "cz-single",
            CaseStudy::CzRingFullyLocal => "cz-ring-fully-local",
            CaseStudy::CzRingNn => "cz-ring-nn",
            CaseStudy::CzRingCovariant => "cz-ring-covariant",
        }
    }

    pub fn default_n(&self) -> usize {
        match self {
            CaseStudy::CzSingle => 2,
            CaseStudy::CzRingFullyLocal => 4,
            CaseStudy::CzRingNn | CaseStudy::CzRingCovariant => 6,
        }
    }

    /// Expected dimensions (X_R, L_R, X_R^G, L_R^G); the covariant model's
    /// gate-learnable dimension has no closed form and is reported from
    /// brute force only.
    pub fn expected_dims(&self, n: usize) -> (u32, u32, u32, Option<u32>) {
        let n = n as u32;
        match self {
            CaseStudy::CzSingle => (21, 18, 15, Some(13)),
            CaseStudy::CzRingFullyLocal => (17 * n, 16 * n, 15 * n, Some(14 * n)),
            CaseStudy::CzRingNn => (28 * n, 27 * n, 24 * n, Some(23 * n)),
            CaseStudy::CzRingCovariant => (244 * n, 242 * n, 240 * n, None),
        }
    }

    pub fn build(&self, n: usize, n_max: usize) -> Result<Embedding> {
        match self {
            CaseStudy::CzSingle => {
                if n != 2 {
                    return Err(Error::Unsupported("cz-single is a 2-qubit configuration".into()));
                }
                let gs = GateSet::new(2, vec![builtin("CZ")?])?;
                Embedding::new(gs, Ansatz::Complete, n_max)
            }
            CaseStudy::CzRingFullyLocal => {
                if n < 3 {
                    return Err(Error::Unsupported("ring needs at least 3 qubits".into()));
                }
                Embedding::new(cz_ring_gates(n)?, Ansatz::FullyLocal, n_max)
            }
            CaseStudy::CzRingNn => {
                let gs = parallel_cz_layers(n)?;
                let nn = FactorSet::nn_ring(n);
                let ansatz = Ansatz::QuasiLocal {
                    omega_s: nn.clone(),
                    omega_m: nn.clone(),
                    omega_gates: vec![nn; 2],
                };
                Embedding::new(gs, ansatz, n_max)
            }
            CaseStudy::CzRingCovariant => {
                let gs = parallel_cz_layers(n)?;
                let nn = FactorSet::nn_ring(n);
                let window = |start: usize| -> Pattern {
                    let qs: Vec<usize> = (0..4).map(|d| (start + d - 1) % n + 1).collect();
                    Pattern::from_qubits(n, &qs)
                };
                let omega_e = FactorSet::from_maximal(
                    n,
                    &(1..=n / 2).map(|k| window(2 * k - 1)).collect::<Vec<_>>(),
                )?;
                let omega_o = FactorSet::from_maximal(
                    n,
                    &(1..=n / 2).map(|k| window(2 * k)).collect::<Vec<_>>(),
                )?;
                let ansatz = Ansatz::QuasiLocal {
                    omega_s: nn.clone(),
                    omega_m: nn,
                    omega_gates: vec![omega_e, omega_o],
                };
                Embedding::new(gs, ansatz, n_max)
            }
        }
    }
}

/// One individually-addressed CZ per ring edge.
pub fn cz_ring_gates(n: usize) -> Result<GateSet> {
    let gates = (1..=n)
        .map(|i| {
            let j = i % n + 1;
            tensor_parallel(n, &[(builtin("CZ")?, vec![i, j])], format!("CZ_{i}{j}"))
        })
        .collect::<Result<Vec<_>>>()?;
    GateSet::new(n, gates)
}

/// The even and odd parallel-CZ layers of an even ring.
pub fn parallel_cz_layers(n: usize) -> Result<GateSet> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::Unsupported("parallel CZ layers need an even ring of at least 6".into()));
    }
    let layer = |name: &str, pairs: Vec<(usize, usize)>| -> Result<_> {
        let parts = pairs
            .into_iter()
            .map(|(a, b)| Ok((builtin("CZ")?, vec![a, b])))
            .collect::<Result<Vec<_>>>()?;
        tensor_parallel(n, &parts, name)
    };
    let even = layer("Ge", (1..=n / 2).map(|k| (2 * k - 1, 2 * k)).collect())?;
    let odd = layer("Go", (1..=n / 2).map(|k| (2 * k, 2 * k % n + 1)).collect())?;
    GateSet::new(n, vec![even, odd])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_build() {
        for case in CaseStudy::ALL {
            let n = case.default_n();
            let emb = case.build(n, 6).unwrap();
            let (x_r, _, x_r_gate, _) = case.expected_dims(n);
            assert_eq!(emb.dim(), x_r, "{}", case.name());
            assert_eq!(emb.reduced().gate_dim_total(), x_r_gate, "{}", case.name());
        }
    }

    #[test]
    fn names_round_trip() {
        for case in CaseStudy::ALL {
            assert_eq!(CaseStudy::from_name(case.name()), Some(case));
        }
        assert_eq!(CaseStudy::from_name("nope"), None);
    }
}

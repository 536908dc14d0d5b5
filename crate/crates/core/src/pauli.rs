//! Binary-symplectic Pauli labels, support patterns, majorization and
//! factor sets.
//!
//! Qubits are numbered `1..=n`. In the packed bit representation qubit 1 is
//! the most significant bit, so the integer order of the packed bits agrees
//! with the lexicographic order of the printed strings. The canonical order
//! of Pauli labels used everywhere in this crate is lexicographic on
//! `(x_bits, z_bits)` as unsigned integers.

use crate::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub const MAX_QUBITS: usize = 32;

/// Support pattern of a Pauli operator: one bit per qubit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    n: u16,
    bits: u32,
}

impl Pattern {
    pub fn new(n: usize, bits: u32) -> Self {
        assert!(n <= MAX_QUBITS);
        assert!(n == MAX_QUBITS || bits < (1u32 << n), "pattern bits out of range");
        Pattern { n: n as u16, bits }
    }

    pub fn empty(n: usize) -> Self {
        Pattern::new(n, 0)
    }

    /// Pattern with the given 1-based qubits set.
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Self {
        let mut bits = 0u32;
        for &q in qubits {
            assert!(q >= 1 && q <= n, "qubit index out of range");
            bits |= 1 << (n - q);
        }
        Pattern::new(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains_qubit(&self, q: usize) -> bool {
        self.bits >> (self.n() - q) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Pattern) -> Pattern {
        Pattern::new(self.n(), self.bits | other.bits)
    }

    pub fn intersection(&self, other: &Pattern) -> Pattern {
        Pattern::new(self.n(), self.bits & other.bits)
    }

    pub fn intersects(&self, other: &Pattern) -> bool {
        self.bits & other.bits != 0
    }

    pub fn complement(&self) -> Pattern {
        let mask = if self.n() == MAX_QUBITS { u32::MAX } else { (1u32 << self.n()) - 1 };
        Pattern::new(self.n(), !self.bits & mask)
    }

    /// 1-based qubit indices in ascending order.
    pub fn qubits(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&q| self.contains_qubit(q)).collect()
    }

    /// All non-empty patterns on `n` qubits in canonical (integer) order.
    pub fn enumerate_nonzero(n: usize) -> impl Iterator<Item = Pattern> {
        assert!(n < MAX_QUBITS);
        (1u32..1 << n).map(move |bits| Pattern::new(n, bits))
    }

    /// All submasks of `self`, including the empty one and `self` itself.
    pub fn subsets(&self) -> impl Iterator<Item = Pattern> {
        let mask = self.bits;
        let n = self.n();
        let mut sub = mask;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let cur = sub;
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & mask;
            }
            Some(Pattern::new(n, cur))
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.n() {
            write!(f, "{}", if self.contains_qubit(q) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(format!("bad pattern length: {s:?}")));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << (n - 1 - i),
                '0' => {}
                _ => return Err(Error::Parse(format!("bad pattern char {c:?} in {s:?}"))),
            }
        }
        Ok(Pattern::new(n, bits))
    }
}

/// An n-qubit Pauli operator modulo phase, in the binary-symplectic
/// representation: `P = prod_j i^(x_j z_j) X_j^(x_j) Z_j^(z_j)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: u16,
    x: u32,
    z: u32,
}

impl Pauli {
    pub fn new(n: usize, x: u32, z: u32) -> Self {
        assert!(n <= MAX_QUBITS);
        if n < MAX_QUBITS {
            assert!(x < (1u32 << n) && z < (1u32 << n), "pauli bits out of range");
        }
        Pauli { n: n as u16, x, z }
    }

    pub fn identity(n: usize) -> Self {
        Pauli::new(n, 0, 0)
    }

    /// Single-qubit X/Y/Z embedded at 1-based qubit `q`.
    pub fn x_at(n: usize, q: usize) -> Self {
        Pauli::new(n, 1 << (n - q), 0)
    }

    pub fn z_at(n: usize, q: usize) -> Self {
        Pauli::new(n, 0, 1 << (n - q))
    }

    pub fn y_at(n: usize, q: usize) -> Self {
        Pauli::new(n, 1 << (n - q), 1 << (n - q))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u32 {
        self.x
    }

    pub fn z_bits(&self) -> u32 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Canonical sort key: (x_bits, z_bits) as unsigned integers.
    pub fn key(&self) -> u64 {
        (self.x as u64) << self.n | self.z as u64
    }

    pub fn from_key(n: usize, key: u64) -> Self {
        let x = (key >> n) as u32;
        let z = (key & ((1u64 << n) - 1)) as u32;
        Pauli::new(n, x, z)
    }

    /// Symplectic inner product: 0 iff the operators commute.
    pub fn symplectic(&self, other: &Pauli) -> u8 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        (((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1) as u8
    }

    pub fn commutes_with(&self, other: &Pauli) -> bool {
        self.symplectic(other) == 0
    }

    /// Support pattern.
    pub fn pattern(&self) -> Pattern {
        Pattern::new(self.n(), self.x | self.z)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// `self ◁ other`: every non-identity site of `self` matches `other`.
    pub fn majorized_by(&self, other: &Pauli) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let supp = self.x | self.z;
        (self.x ^ other.x) & supp == 0 && (self.z ^ other.z) & supp == 0
    }

    /// Single-qubit component at 1-based qubit `q` as (x, z) bits.
    pub fn site(&self, q: usize) -> (u8, u8) {
        let shift = self.n() - q;
        ((self.x >> shift & 1) as u8, (self.z >> shift & 1) as u8)
    }

    /// Restriction to a pattern's qubits, reindexed to `pattern.weight()` qubits.
    pub fn restrict(&self, pattern: &Pattern) -> Pauli {
        let qs = pattern.qubits();
        let k = qs.len();
        let mut x = 0u32;
        let mut z = 0u32;
        for (i, &q) in qs.iter().enumerate() {
            let (sx, sz) = self.site(q);
            x |= (sx as u32) << (k - 1 - i);
            z |= (sz as u32) << (k - 1 - i);
        }
        Pauli::new(k, x, z)
    }

    /// Embed a `pattern.weight()`-qubit Pauli onto the qubits of `pattern`
    /// inside an `n = pattern.n()`-qubit register, identity elsewhere.
    pub fn embed(&self, pattern: &Pattern) -> Pauli {
        let qs = pattern.qubits();
        assert_eq!(qs.len(), self.n(), "embedding arity mismatch");
        let n = pattern.n();
        let mut x = 0u32;
        let mut z = 0u32;
        for (i, &q) in qs.iter().enumerate() {
            let (sx, sz) = self.site(i + 1);
            x |= (sx as u32) << (n - q);
            z |= (sz as u32) << (n - q);
        }
        Pauli::new(n, x, z)
    }

    /// Product label (phases dropped): componentwise XOR.
    pub fn mul_label(&self, other: &Pauli) -> Pauli {
        assert_eq!(self.n, other.n);
        Pauli::new(self.n(), self.x ^ other.x, self.z ^ other.z)
    }

    /// True iff the support of `self` lies inside some factor of `omega`.
    pub fn consistent_with(&self, omega: &FactorSet) -> bool {
        assert_eq!(self.n(), omega.n(), "qubit count mismatch");
        let supp = self.pattern();
        supp.is_empty() || omega.contains(&supp)
    }

    /// All `4^n` labels in canonical order. Caller is responsible for caps.
    pub fn enumerate(n: usize) -> impl Iterator<Item = Pauli> {
        assert!(2 * n < 64);
        (0u64..1 << (2 * n)).map(move |key| Pauli::from_key(n, key))
    }

    /// All non-identity labels in canonical order.
    pub fn enumerate_nonidentity(n: usize) -> impl Iterator<Item = Pauli> {
        Pauli::enumerate(n).skip(1)
    }

    /// All labels supported inside `pattern` (including identity), canonical order.
    pub fn enumerate_in(pattern: &Pattern) -> Vec<Pauli> {
        let k = pattern.weight() as usize;
        let mut out: Vec<Pauli> = (0u64..1 << (2 * k))
            .map(|key| Pauli::from_key(k, key).embed(pattern))
            .collect();
        out.sort_by_key(Pauli::key);
        out
    }

    /// Non-identity labels consistent with `omega`, canonical order.
    /// Enumerates factor by factor, so the cost is set by the factor sizes
    /// rather than `4^n`.
    pub fn enumerate_consistent(omega: &FactorSet) -> Vec<Pauli> {
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        for nu in omega.maximal() {
            for p in Pauli::enumerate_in(&nu) {
                if !p.is_identity() {
                    seen.insert(p.key());
                }
            }
        }
        seen.into_iter().map(|key| Pauli::from_key(omega.n(), key)).collect()
    }

    /// All labels majorized by `self` (including identity and `self`).
    pub fn majorized_labels(&self) -> impl Iterator<Item = Pauli> + '_ {
        let n = self.n();
        let x = self.x;
        let z = self.z;
        self.pattern().subsets().map(move |s| Pauli::new(n, x & s.bits(), z & s.bits()))
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.n() {
            let c = match self.site(q) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                (0, 1) => 'Z',
                _ => unreachable!(),
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(format!("bad pauli length: {s:?}")));
        }
        let mut x = 0u32;
        let mut z = 0u32;
        for (i, c) in s.chars().enumerate() {
            let shift = n - 1 - i;
            match c {
                'I' => {}
                'X' => x |= 1 << shift,
                'Y' => {
                    x |= 1 << shift;
                    z |= 1 << shift;
                }
                'Z' => z |= 1 << shift,
                _ => return Err(Error::Parse(format!("bad pauli char {c:?} in {s:?}"))),
            }
        }
        Ok(Pauli::new(n, x, z))
    }
}

impl PartialOrd for Pauli {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pauli {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// A downward-closed family of non-empty qubit subsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorSet {
    n: u16,
    closure: BTreeSet<u32>,
}

impl FactorSet {
    /// Downward closure of the given (maximal or not) factors.
    pub fn from_maximal(n: usize, maximal: &[Pattern]) -> Result<Self> {
        let mut closure = BTreeSet::new();
        for nu in maximal {
            if nu.n() != n {
                return Err(Error::DimensionMismatch(nu.n(), n));
            }
            if nu.is_empty() {
                return Err(Error::InvalidFactorSet("empty factor".into()));
            }
            for mu in nu.subsets() {
                if !mu.is_empty() {
                    closure.insert(mu.bits());
                }
            }
        }
        if closure.is_empty() {
            return Err(Error::InvalidFactorSet("no factors".into()));
        }
        Ok(FactorSet { n: n as u16, closure })
    }

    /// Validates that the given set of factors is already downward closed.
    pub fn from_closed(n: usize, members: &[Pattern]) -> Result<Self> {
        let built = FactorSet::from_maximal(n, members)?;
        if built.closure.len() != members.len() {
            return Err(Error::InvalidFactorSet("set is not downward closed".into()));
        }
        Ok(built)
    }

    /// All singletons `{1},...,{n}`.
    pub fn singletons(n: usize) -> Self {
        let maximal: Vec<Pattern> = (1..=n).map(|q| Pattern::from_qubits(n, &[q])).collect();
        FactorSet::from_maximal(n, &maximal).unwrap()
    }

    /// Every non-empty subset of `[n]`.
    pub fn complete(n: usize) -> Self {
        FactorSet::from_maximal(n, &[Pattern::new(n, (1u32 << n) - 1)]).unwrap()
    }

    /// Nearest-neighbor pairs on a ring of `n` qubits.
    pub fn nn_ring(n: usize) -> Self {
        let maximal: Vec<Pattern> = (1..=n)
            .map(|q| Pattern::from_qubits(n, &[q, q % n + 1]))
            .collect();
        FactorSet::from_maximal(n, &maximal).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    pub fn contains(&self, nu: &Pattern) -> bool {
        self.closure.contains(&nu.bits())
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl Iterator<Item = Pattern> + '_ {
        let n = self.n();
        self.closure.iter().map(move |&bits| Pattern::new(n, bits))
    }

    /// Maximal members (those contained in no other member).
    pub fn maximal(&self) -> Vec<Pattern> {
        self.members()
            .filter(|nu| {
                !self
                    .members()
                    .any(|mu| mu != *nu && nu.is_subset_of(&mu))
            })
            .collect()
    }

    pub fn is_subset_of(&self, other: &FactorSet) -> bool {
        self.closure.is_subset(&other.closure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_product_examples() {
        // X and Z anticommute.
        assert_eq!(p("X").symplectic(&p("Z")), 1);
        // Self-commutation.
        for s in ["X", "Y", "Z", "XY", "IZ"] {
            assert_eq!(p(s).symplectic(&p(s)), 0);
        }
        // XY vs YX commute; frozen from the dense commutator oracle below.
        assert_eq!(p("XY").symplectic(&p("YX")), dense_commutes(&p("XY"), &p("YX")));
    }

    // Independent oracle: build 2^n x 2^n complex matrices and test the
    // commutator numerically.
    fn dense_commutes(a: &Pauli, b: &Pauli) -> u8 {
        let ma = dense(a);
        let mb = dense(b);
        let ab = matmul(&ma, &mb);
        let ba = matmul(&mb, &ma);
        let same = ab
            .iter()
            .zip(ba.iter())
            .all(|(x, y)| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
        if same {
            0
        } else {
            1
        }
    }

    type C = (f64, f64);

    fn cmul(a: C, b: C) -> C {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    fn single(site: (u8, u8)) -> [[C; 2]; 2] {
        let zero = (0.0, 0.0);
        let one = (1.0, 0.0);
        match site {
            (0, 0) => [[one, zero], [zero, one]],
            (1, 0) => [[zero, one], [one, zero]],
            (1, 1) => [[zero, (0.0, -1.0)], [(0.0, 1.0), zero]],
            (0, 1) => [[one, zero], [zero, (-1.0, 0.0)]],
            _ => unreachable!(),
        }
    }

    fn dense(pauli: &Pauli) -> Vec<C> {
        let n = pauli.n();
        let dim = 1usize << n;
        let mut out = vec![(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut v = (1.0, 0.0);
                for q in 1..=n {
                    let m = single(pauli.site(q));
                    let rb = r >> (n - q) & 1;
                    let cb = c >> (n - q) & 1;
                    v = cmul(v, m[rb][cb]);
                }
                out[r * dim + c] = v;
            }
        }
        out
    }

    fn matmul(a: &[C], b: &[C]) -> Vec<C> {
        let dim = (a.len() as f64).sqrt() as usize;
        let mut out = vec![(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = (0.0, 0.0);
                for k in 0..dim {
                    let t = cmul(a[r * dim + k], b[k * dim + c]);
                    acc = (acc.0 + t.0, acc.1 + t.1);
                }
                out[r * dim + c] = acc;
            }
        }
        out
    }

    #[test]
    fn symplectic_is_symmetric_and_bilinear() {
        for a in Pauli::enumerate(2) {
            for b in Pauli::enumerate(2) {
                assert_eq!(a.symplectic(&b), b.symplectic(&a));
                for c in Pauli::enumerate(2) {
                    let lhs = a.mul_label(&b).symplectic(&c);
                    let rhs = (a.symplectic(&c) + b.symplectic(&c)) & 1;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(p("XIZ").pattern().to_string(), "101");
        assert_eq!(Pauli::identity(4).pattern().to_string(), "0000");
        assert_eq!(p("YY").pattern().to_string(), "11");
        assert!(p("XIZ").pattern().contains_qubit(1));
        assert!(!p("XIZ").pattern().contains_qubit(2));
    }

    #[test]
    fn pattern_zero_iff_identity() {
        for a in Pauli::enumerate(3) {
            assert_eq!(a.pattern().is_empty(), a.is_identity());
        }
    }

    #[test]
    fn majorization_examples() {
        assert!(p("IX").majorized_by(&p("ZX")));
        assert!(!p("XX").majorized_by(&p("ZX")));
        for a in Pauli::enumerate(2) {
            assert!(Pauli::identity(2).majorized_by(&a));
        }
    }

    #[test]
    fn majorized_count_is_two_to_weight() {
        for a in Pauli::enumerate(3) {
            let count = Pauli::enumerate(3).filter(|b| b.majorized_by(&a)).count();
            assert_eq!(count, 1 << a.weight());
            assert_eq!(a.majorized_labels().count(), 1 << a.weight());
        }
    }

    #[test]
    fn majorization_is_a_partial_order() {
        let all: Vec<Pauli> = Pauli::enumerate(2).collect();
        for a in &all {
            assert!(a.majorized_by(a));
            for b in &all {
                if a.majorized_by(b) && b.majorized_by(a) {
                    assert_eq!(a, b);
                }
                for c in &all {
                    if a.majorized_by(b) && b.majorized_by(c) {
                        assert!(a.majorized_by(c));
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_examples() {
        let omega = FactorSet::from_maximal(
            3,
            &[Pattern::from_qubits(3, &[1, 2]), Pattern::from_qubits(3, &[2, 3])],
        )
        .unwrap();
        assert!(p("XXI").consistent_with(&omega));
        assert!(!p("XIX").consistent_with(&omega));
        assert!(Pauli::identity(3).consistent_with(&omega));
    }

    #[test]
    fn enumeration_counts_and_order() {
        // n=1 non-identity labels in canonical (x,z) order: Z, X, Y.
        let labels: Vec<String> =
            Pauli::enumerate_nonidentity(1).map(|a| a.to_string()).collect();
        assert_eq!(labels, ["Z", "X", "Y"]);

        // n=2, single factor {1,2}: all 15 non-identity labels.
        let omega = FactorSet::from_maximal(2, &[Pattern::from_qubits(2, &[1, 2])]).unwrap();
        assert_eq!(Pauli::enumerate_consistent(&omega).len(), 15);

        // n=3, maximal factors {1,2},{2,3}: 15 + 15 - 3 = 27 by inclusion-exclusion.
        let omega = FactorSet::from_maximal(
            3,
            &[Pattern::from_qubits(3, &[1, 2]), Pattern::from_qubits(3, &[2, 3])],
        )
        .unwrap();
        let consistent = Pauli::enumerate_consistent(&omega);
        assert_eq!(consistent.len(), 27);
        let by_filter =
            Pauli::enumerate_nonidentity(3).filter(|a| a.consistent_with(&omega)).count();
        assert_eq!(by_filter, 27);
        // Canonical order is preserved.
        let mut sorted = consistent.clone();
        sorted.sort();
        assert_eq!(consistent, sorted);
    }

    #[test]
    fn factor_set_closure_is_idempotent() {
        let omega = FactorSet::from_maximal(
            4,
            &[Pattern::from_qubits(4, &[1, 2, 3]), Pattern::from_qubits(4, &[3, 4])],
        )
        .unwrap();
        let members: Vec<Pattern> = omega.members().collect();
        let again = FactorSet::from_maximal(4, &members).unwrap();
        assert_eq!(omega, again);
        // Canonical (integer) order: {3,4} = 0011 sorts before {1,2,3} = 1110.
        let maximal = omega.maximal();
        assert_eq!(maximal, vec![
            Pattern::from_qubits(4, &[3, 4]),
            Pattern::from_qubits(4, &[1, 2, 3]),
        ]);
    }

    #[test]
    fn restriction_and_embedding_round_trip() {
        let a = p("XIZY");
        let pat = Pattern::from_qubits(4, &[1, 3, 4]);
        let r = a.restrict(&pat);
        assert_eq!(r.to_string(), "XZY");
        assert_eq!(r.embed(&pat), p("XIZY"));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["I", "XYZ", "IIZX", "YXIZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<Pauli>().is_err());
        assert!("".parse::<Pauli>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn label(n: usize) -> impl Strategy<Value = Pauli> {
            (0..1u64 << (2 * n)).prop_map(move |key| Pauli::from_key(n, key))
        }

        proptest! {
            #[test]
            fn symplectic_symmetric_bilinear(a in label(4), b in label(4), c in label(4)) {
                prop_assert_eq!(a.symplectic(&b), b.symplectic(&a));
                let lhs = a.mul_label(&b).symplectic(&c);
                prop_assert_eq!(lhs, (a.symplectic(&c) + b.symplectic(&c)) & 1);
            }

            #[test]
            fn majorized_count_matches_weight(a in label(4)) {
                prop_assert_eq!(a.majorized_labels().count() as u32, 1 << a.weight());
                for b in a.majorized_labels() {
                    prop_assert!(b.majorized_by(&a));
                }
            }

            #[test]
            fn key_round_trip(a in label(5)) {
                prop_assert_eq!(Pauli::from_key(5, a.key()), a);
                prop_assert_eq!(a.to_string().parse::<Pauli>().unwrap(), a);
            }
        }
    }
}

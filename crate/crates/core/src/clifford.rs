//! Clifford gates as signed symplectic maps on Pauli labels.
//!
//! A gate is stored by the images of the 2n symplectic generators
//! `X_1..X_n, Z_1..Z_n`, each a Pauli label with a sign. Conjugation of an
//! arbitrary label composes the generator images with exact phase tracking
//! in the Hermitian convention `P = i^(x.z) X^x Z^z` (so `Y = iXZ`).

use crate::pauli::{Pattern, Pauli};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedPauli {
    pub sign: i8,
    pub label: Pauli,
}

impl SignedPauli {
    pub fn plus(label: Pauli) -> Self {
        SignedPauli { sign: 1, label }
    }

    pub fn minus(label: Pauli) -> Self {
        SignedPauli { sign: -1, label }
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.sign >= 0 { '+' } else { '-' }, self.label)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clifford {
    name: String,
    n: u16,
    x_images: Vec<SignedPauli>,
    z_images: Vec<SignedPauli>,
    support: Pattern,
    blocks: Vec<Pattern>,
}

impl Clifford {
    /// Builds a gate from generator images, checking that they preserve all
    /// symplectic products.
    pub fn from_images(
        name: impl Into<String>,
        x_images: Vec<SignedPauli>,
        z_images: Vec<SignedPauli>,
    ) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n || n == 0 {
            return Err(Error::InvalidGate("generator image count mismatch".into()));
        }
        let gens: Vec<&SignedPauli> = x_images.iter().chain(z_images.iter()).collect();
        for g in &gens {
            if g.label.n() != n {
                return Err(Error::InvalidGate("generator image arity mismatch".into()));
            }
            if g.sign != 1 && g.sign != -1 {
                return Err(Error::InvalidGate("sign must be +1 or -1".into()));
            }
        }
        // <img(g_i), img(g_j)> must equal <g_i, g_j>: 1 exactly for (X_j, Z_j).
        for i in 0..2 * n {
            for j in (i + 1)..2 * n {
                let expected = u8::from(j == i + n);
                if gens[i].label.symplectic(&gens[j].label) != expected {
                    return Err(Error::InvalidGate(format!(
                        "images do not preserve symplectic products at generators {i},{j}"
                    )));
                }
            }
        }
        let mut support_bits = 0u32;
        for q in 1..=n {
            let xi = &x_images[q - 1];
            let zi = &z_images[q - 1];
            let trivial = xi.sign == 1
                && zi.sign == 1
                && xi.label == Pauli::x_at(n, q)
                && zi.label == Pauli::z_at(n, q);
            if !trivial {
                support_bits |= 1 << (n - q);
                support_bits |= xi.label.pattern().bits() | zi.label.pattern().bits();
            }
        }
        let support = Pattern::new(n, support_bits);
        let blocks = if support.is_empty() { Vec::new() } else { vec![support] };
        Ok(Clifford { name: name.into(), n: n as u16, x_images, z_images, support, blocks })
    }

    pub fn identity(n: usize) -> Self {
        let x_images = (1..=n).map(|q| SignedPauli::plus(Pauli::x_at(n, q))).collect();
        let z_images = (1..=n).map(|q| SignedPauli::plus(Pauli::z_at(n, q))).collect();
        Clifford::from_images("I", x_images, z_images).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn support(&self) -> Pattern {
        self.support
    }

    /// Supports of the parallel sub-gates this layer is composed of.
    pub fn blocks(&self) -> &[Pattern] {
        &self.blocks
    }

    pub fn x_image(&self, q: usize) -> &SignedPauli {
        &self.x_images[q - 1]
    }

    pub fn z_image(&self, q: usize) -> &SignedPauli {
        &self.z_images[q - 1]
    }

    /// Conjugation action on a Pauli label with exact sign.
    pub fn apply(&self, p: &Pauli) -> SignedPauli {
        assert_eq!(p.n(), self.n(), "qubit count mismatch");
        let n = self.n();
        // P = i^phi * X^px Z^pz with phi = |px & pz|.
        let mut phase = (p.x_bits() & p.z_bits()).count_ones();
        let mut ax = 0u32;
        let mut az = 0u32;
        let mut mul = |img: &SignedPauli| {
            let bx = img.label.x_bits();
            let bz = img.label.z_bits();
            if img.sign < 0 {
                phase += 2;
            }
            // i exponent of P_A * P_B = i^k P_{A xor B}.
            phase += (ax & az).count_ones() + (bx & bz).count_ones() + 2 * (az & bx).count_ones();
            ax ^= bx;
            az ^= bz;
            phase += 4 - ((ax & az).count_ones() % 4);
        };
        for q in 1..=n {
            if p.x_bits() >> (n - q) & 1 == 1 {
                mul(&self.x_images[q - 1]);
            }
        }
        for q in 1..=n {
            if p.z_bits() >> (n - q) & 1 == 1 {
                mul(&self.z_images[q - 1]);
            }
        }
        let label = Pauli::new(n, ax, az);
        match phase % 4 {
            0 => SignedPauli::plus(label),
            2 => SignedPauli::minus(label),
            _ => unreachable!("Clifford conjugation produced a complex phase"),
        }
    }

    pub fn apply_signed(&self, p: &SignedPauli) -> SignedPauli {
        let out = self.apply(&p.label);
        SignedPauli { sign: out.sign * p.sign, label: out.label }
    }

    /// Conjugation by `self . first` (apply `first`, then `self`).
    pub fn compose(&self, first: &Clifford, name: impl Into<String>) -> Result<Clifford> {
        if self.n != first.n {
            return Err(Error::DimensionMismatch(self.n(), first.n()));
        }
        let x_images = first.x_images.iter().map(|img| self.apply_signed(img)).collect();
        let z_images = first.z_images.iter().map(|img| self.apply_signed(img)).collect();
        Clifford::from_images(name, x_images, z_images)
    }

    /// Exact inverse via GF(2) inversion of the symplectic part.
    pub fn inverse(&self, name: impl Into<String>) -> Clifford {
        let n = self.n();
        let pack = |p: &Pauli| -> u64 { (p.x_bits() as u64) << n | p.z_bits() as u64 };
        // rows[i]: i-th coordinate of the map as a mask over generators,
        // augmented with the identity in the high bits.
        let cols: Vec<u64> = (0..2 * n)
            .map(|g| {
                let img = if g < n { &self.x_images[g] } else { &self.z_images[g - n] };
                pack(&img.label)
            })
            .collect();
        let dim = 2 * n;
        let mut rows: Vec<u128> = (0..dim)
            .map(|i| {
                let mut m = 0u128;
                for (g, col) in cols.iter().enumerate() {
                    // Coordinate order: bit (2n-1-i) of pack corresponds to row i.
                    if col >> (dim - 1 - i) & 1 == 1 {
                        m |= 1 << g;
                    }
                }
                m | 1u128 << (dim + i)
            })
            .collect();
        // Gauss-Jordan over GF(2).
        let mut pivot_row_of_col = vec![usize::MAX; dim];
        let mut r = 0;
        for (c, pivot_slot) in pivot_row_of_col.iter_mut().enumerate() {
            if let Some(pr) = (r..dim).find(|&i| rows[i] >> c & 1 == 1) {
                rows.swap(r, pr);
                for i in 0..dim {
                    if i != r && rows[i] >> c & 1 == 1 {
                        rows[i] ^= rows[r];
                    }
                }
                *pivot_slot = r;
                r += 1;
            }
        }
        assert_eq!(r, dim, "symplectic part is invertible");
        let solve = |target: u64| -> Pauli {
            let mut a = 0u64;
            for c in 0..dim {
                let row = rows[pivot_row_of_col[c]];
                // Right-hand side of this pivot equation.
                let mut rhs = 0u8;
                for i in 0..dim {
                    if row >> (dim + i) & 1 == 1 {
                        rhs ^= (target >> (dim - 1 - i) & 1) as u8;
                    }
                }
                if rhs == 1 {
                    a |= 1 << c;
                }
            }
            // Generator-space coordinates back to a label: generator g < n is
            // X_{g+1}, generator g >= n is Z_{g-n+1}.
            let mut x = 0u32;
            let mut z = 0u32;
            for g in 0..dim {
                if a >> g & 1 == 1 {
                    if g < n {
                        x |= 1 << (n - 1 - g);
                    } else {
                        z |= 1 << (n - 1 - (g - n));
                    }
                }
            }
            Pauli::new(n, x, z)
        };
        let mut x_images = Vec::with_capacity(n);
        let mut z_images = Vec::with_capacity(n);
        for q in 1..=n {
            for (target, out) in
                [(Pauli::x_at(n, q), &mut x_images), (Pauli::z_at(n, q), &mut z_images)]
            {
                let pre = solve(pack(&target));
                let fwd = self.apply(&pre);
                debug_assert_eq!(fwd.label, target);
                out.push(SignedPauli { sign: fwd.sign, label: pre });
            }
        }
        let mut inv = Clifford::from_images(name, x_images, z_images).unwrap();
        inv.blocks = self.blocks.clone();
        inv
    }

    /// Restriction to the support qubits, reindexed to `support.weight()` qubits.
    pub fn restrict_to_support(&self) -> Clifford {
        let supp = self.support;
        let qs = supp.qubits();
        let k = qs.len();
        let mut x_images = Vec::with_capacity(k);
        let mut z_images = Vec::with_capacity(k);
        for &q in &qs {
            for (img, out) in
                [(self.x_image(q), &mut x_images), (self.z_image(q), &mut z_images)]
            {
                assert!(img.label.pattern().is_subset_of(&supp), "gate acts outside support");
                out.push(SignedPauli { sign: img.sign, label: img.label.restrict(&supp) });
            }
        }
        Clifford::from_images(self.name.clone(), x_images, z_images).unwrap()
    }
}

/// Shape of the pattern-transfer subgraph of a 2-qubit Clifford.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternSubgraph {
    Trivial,
    CnotLike,
    SwapLike,
    IswapLike,
}

/// Classifies a gate with 2-qubit support by how it moves patterns among
/// {01, 10, 11}: CNOT-like has only crossings touching 11, SWAP-like only
/// the 10<->01 crossing, iSWAP-like both.
pub fn classify_subgraph(gate: &Clifford) -> Result<PatternSubgraph> {
    if gate.support().weight() != 2 {
        return Err(Error::InvalidGate(format!(
            "classify_subgraph requires a 2-qubit support, got {}",
            gate.support().weight()
        )));
    }
    let hat = gate.restrict_to_support();
    let mut cross_swap = false;
    let mut cross_cnot = false;
    for a in Pauli::enumerate_nonidentity(2) {
        let u = a.pattern().bits();
        let v = hat.apply(&a).label.pattern().bits();
        if u != v {
            if u == 3 || v == 3 {
                cross_cnot = true;
            } else {
                cross_swap = true;
            }
        }
    }
    Ok(match (cross_cnot, cross_swap) {
        (false, false) => PatternSubgraph::Trivial,
        (true, false) => PatternSubgraph::CnotLike,
        (false, true) => PatternSubgraph::SwapLike,
        (true, true) => PatternSubgraph::IswapLike,
    })
}

/// Weak connectivity of the pattern-transfer subgraph of the restricted
/// gate (root removed): required by the fully-local analytic gauge theorem.
pub fn connected_pattern_subgraph(gate: &Clifford) -> bool {
    let k = gate.support().weight() as usize;
    if k == 0 {
        return true;
    }
    assert!(k <= 8, "support too large for subgraph connectivity check");
    let hat = gate.restrict_to_support();
    let vcount = (1usize << k) - 1;
    let mut parent: Vec<usize> = (0..vcount).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for a in Pauli::enumerate_nonidentity(k) {
        let u = a.pattern().bits() as usize - 1;
        let v = hat.apply(&a).label.pattern().bits() as usize - 1;
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    let root = find(&mut parent, 0);
    (0..vcount).all(|i| find(&mut parent, i) == root)
}

/// Embeds a k-qubit label at the given 1-based placement inside n qubits.
pub fn embed_label(local: &Pauli, placement: &[usize], n: usize) -> Pauli {
    assert_eq!(local.n(), placement.len());
    let mut x = 0u32;
    let mut z = 0u32;
    for (i, &q) in placement.iter().enumerate() {
        let (sx, sz) = local.site(i + 1);
        x |= (sx as u32) << (n - q);
        z |= (sz as u32) << (n - q);
    }
    Pauli::new(n, x, z)
}

/// Combines gates acting on disjoint placements into one n-qubit layer.
pub fn tensor_parallel(
    n: usize,
    parts: &[(Clifford, Vec<usize>)],
    name: impl Into<String>,
) -> Result<Clifford> {
    let mut occupied = 0u32;
    for (gate, placement) in parts {
        if placement.len() != gate.n() {
            return Err(Error::InvalidGate(format!(
                "placement arity {} does not match gate arity {}",
                placement.len(),
                gate.n()
            )));
        }
        for &q in placement {
            if q < 1 || q > n {
                return Err(Error::InvalidGate(format!("placement qubit {q} out of range")));
            }
            let bit = 1u32 << (n - q);
            if occupied & bit != 0 {
                return Err(Error::OverlappingPlacements);
            }
            occupied |= bit;
        }
    }
    let mut x_images: Vec<SignedPauli> =
        (1..=n).map(|q| SignedPauli::plus(Pauli::x_at(n, q))).collect();
    let mut z_images: Vec<SignedPauli> =
        (1..=n).map(|q| SignedPauli::plus(Pauli::z_at(n, q))).collect();
    let mut blocks = Vec::new();
    for (gate, placement) in parts {
        for (i, &q) in placement.iter().enumerate() {
            let xi = gate.x_image(i + 1);
            let zi = gate.z_image(i + 1);
            x_images[q - 1] =
                SignedPauli { sign: xi.sign, label: embed_label(&xi.label, placement, n) };
            z_images[q - 1] =
                SignedPauli { sign: zi.sign, label: embed_label(&zi.label, placement, n) };
        }
        if !gate.support().is_empty() {
            let global_qs: Vec<usize> =
                gate.support().qubits().iter().map(|&lq| placement[lq - 1]).collect();
            blocks.push(Pattern::from_qubits(n, &global_qs));
        }
    }
    let mut out = Clifford::from_images(name, x_images, z_images)?;
    out.blocks = blocks;
    Ok(out)
}

fn sq(name: &str, x_to: (i8, &str), z_to: (i8, &str)) -> Clifford {
    Clifford::from_images(
        name,
        vec![SignedPauli { sign: x_to.0, label: x_to.1.parse().unwrap() }],
        vec![SignedPauli { sign: z_to.0, label: z_to.1.parse().unwrap() }],
    )
    .unwrap()
}

/// The 24 single-qubit Cliffords, named as a Pauli prefix times an axis
/// rotation from {I, H, S, HS, SH, SHS} (matrix product order, so "XH"
/// conjugates by X·H). Catalog order is canonical: sorted by the signed
/// generator images.
pub struct SqCatalog {
    gates: Vec<Clifford>,
    by_name: HashMap<String, u16>,
    by_images: HashMap<(u64, i8, u64, i8), u16>,
    identity: u16,
}

impl SqCatalog {
    fn build() -> Self {
        let i = Clifford::identity(1);
        let h = sq("H", (1, "Z"), (1, "X"));
        let s = sq("S", (1, "Y"), (1, "Z"));
        let paulis = [
            ("".to_string(), i.clone()),
            ("X".to_string(), sq("X", (1, "X"), (-1, "Z"))),
            ("Y".to_string(), sq("Y", (-1, "X"), (-1, "Z"))),
            ("Z".to_string(), sq("Z", (-1, "X"), (1, "Z"))),
        ];
        let hs = h.compose(&s, "HS").unwrap();
        let sh = s.compose(&h, "SH").unwrap();
        let shs = s.compose(&hs, "SHS").unwrap();
        let rots = [
            ("".to_string(), i),
            ("H".to_string(), h),
            ("S".to_string(), s),
            ("HS".to_string(), hs),
            ("SH".to_string(), sh),
            ("SHS".to_string(), shs),
        ];
        let mut gates = Vec::with_capacity(24);
        for (pn, p) in &paulis {
            for (rn, r) in &rots {
                let name = if pn.is_empty() && rn.is_empty() {
                    "I".to_string()
                } else {
                    format!("{pn}{rn}")
                };
                gates.push(p.compose(r, name).unwrap());
            }
        }
        gates.sort_by_key(Self::image_key);
        let mut by_name = HashMap::new();
        let mut by_images = HashMap::new();
        let mut identity = 0;
        for (idx, g) in gates.iter().enumerate() {
            by_name.insert(g.name().to_string(), idx as u16);
            by_images.insert(Self::image_key(g), idx as u16);
            if g.name() == "I" {
                identity = idx as u16;
            }
        }
        assert_eq!(gates.len(), 24);
        assert_eq!(by_images.len(), 24, "single-qubit Cliffords must be distinct");
        SqCatalog { gates, by_name, by_images, identity }
    }

    fn image_key(g: &Clifford) -> (u64, i8, u64, i8) {
        let xi = g.x_image(1);
        let zi = g.z_image(1);
        (xi.label.key(), -xi.sign, zi.label.key(), -zi.sign)
    }

    pub fn get() -> &'static SqCatalog {
        static CATALOG: OnceLock<SqCatalog> = OnceLock::new();
        CATALOG.get_or_init(SqCatalog::build)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gate(&self, idx: u16) -> &Clifford {
        &self.gates[idx as usize]
    }

    pub fn name(&self, idx: u16) -> &str {
        self.gates[idx as usize].name()
    }

    pub fn identity_idx(&self) -> u16 {
        self.identity
    }

    pub fn lookup_name(&self, name: &str) -> Option<u16> {
        self.by_name.get(name).copied()
    }

    pub fn lookup_gate(&self, g: &Clifford) -> Option<u16> {
        self.by_images.get(&Self::image_key(g)).copied()
    }

    /// First catalog gate mapping `src` to exactly `sign * dst`.
    pub fn first_achieving(&self, src: &Pauli, dst: &Pauli, sign: i8) -> Option<u16> {
        (0..self.gates.len() as u16).find(|&idx| {
            let out = self.gates[idx as usize].apply(src);
            out.label == *dst && out.sign == sign
        })
    }
}

/// A layer of single-qubit Cliffords, one catalog index per qubit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqLayer {
    pub ids: Vec<u16>,
}

impl SqLayer {
    pub fn identity(n: usize) -> Self {
        SqLayer { ids: vec![SqCatalog::get().identity_idx(); n] }
    }

    pub fn is_identity(&self) -> bool {
        let id = SqCatalog::get().identity_idx();
        self.ids.iter().all(|&i| i == id)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn names(&self) -> Vec<String> {
        let cat = SqCatalog::get();
        self.ids.iter().map(|&i| cat.name(i).to_string()).collect()
    }

    pub fn from_names(names: &[String]) -> Result<Self> {
        let cat = SqCatalog::get();
        let ids = names
            .iter()
            .map(|s| {
                cat.lookup_name(s)
                    .ok_or_else(|| Error::Parse(format!("unknown single-qubit Clifford {s:?}")))
            })
            .collect::<Result<Vec<u16>>>()?;
        Ok(SqLayer { ids })
    }

    pub fn apply(&self, p: &Pauli) -> SignedPauli {
        let cat = SqCatalog::get();
        let n = self.n();
        let mut sign = 1i8;
        let mut x = 0u32;
        let mut z = 0u32;
        for q in 1..=n {
            let (sx, sz) = p.site(q);
            let local = Pauli::new(1, sx as u32, sz as u32);
            let out = cat.gate(self.ids[q - 1]).apply(&local);
            sign *= out.sign;
            let (ox, oz) = out.label.site(1);
            x |= (ox as u32) << (n - q);
            z |= (oz as u32) << (n - q);
        }
        SignedPauli { sign, label: Pauli::new(n, x, z) }
    }

    pub fn apply_signed(&self, p: &SignedPauli) -> SignedPauli {
        let out = self.apply(&p.label);
        SignedPauli { sign: out.sign * p.sign, label: out.label }
    }

    pub fn to_clifford(&self, name: impl Into<String>) -> Clifford {
        let cat = SqCatalog::get();
        let parts: Vec<(Clifford, Vec<usize>)> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, &idx)| (cat.gate(idx).clone(), vec![i + 1]))
            .collect();
        tensor_parallel(self.n(), &parts, name).unwrap()
    }
}

/// Layer of single-qubit Cliffords mapping `src` to `dst` exactly,
/// including the sign. The sign mismatch, if any, is absorbed on the first
/// non-identity site; each site takes the lexicographically first catalog
/// gate achieving its map.
pub fn single_qubit_connector(src: &SignedPauli, dst: &SignedPauli) -> Result<SqLayer> {
    let n = src.label.n();
    if dst.label.n() != n {
        return Err(Error::DimensionMismatch(n, dst.label.n()));
    }
    if src.label.pattern() != dst.label.pattern() {
        return Err(Error::PatternMismatch(format!(
            "{} vs {} have different patterns",
            src.label, dst.label
        )));
    }
    let sigma = src.sign * dst.sign;
    if src.label.is_identity() {
        if sigma < 0 {
            return Err(Error::PatternMismatch("cannot map +I to -I".into()));
        }
        return Ok(SqLayer::identity(n));
    }
    let cat = SqCatalog::get();
    let mut ids = vec![cat.identity_idx(); n];
    let mut first = true;
    for q in 1..=n {
        let (sx, sz) = src.label.site(q);
        if (sx, sz) == (0, 0) {
            continue;
        }
        let s = Pauli::new(1, sx as u32, sz as u32);
        let (dx, dz) = dst.label.site(q);
        let d = Pauli::new(1, dx as u32, dz as u32);
        let want_sign = if first { sigma } else { 1 };
        first = false;
        let idx = cat
            .first_achieving(&s, &d, want_sign)
            .expect("some single-qubit Clifford achieves any signed axis map");
        ids[q - 1] = idx;
    }
    Ok(SqLayer { ids })
}

/// Builtin multi-qubit gates.
pub fn builtin(name: &str) -> Result<Clifford> {
    let two = |name: &str, images: [(i8, &str); 4]| -> Clifford {
        Clifford::from_images(
            name,
            vec![
                SignedPauli { sign: images[0].0, label: images[0].1.parse().unwrap() },
                SignedPauli { sign: images[1].0, label: images[1].1.parse().unwrap() },
            ],
            vec![
                SignedPauli { sign: images[2].0, label: images[2].1.parse().unwrap() },
                SignedPauli { sign: images[3].0, label: images[3].1.parse().unwrap() },
            ],
        )
        .unwrap()
    };
    match name {
        "CZ" => Ok(two("CZ", [(1, "XZ"), (1, "ZX"), (1, "ZI"), (1, "IZ")])),
        "CNOT" => Ok(two("CNOT", [(1, "XX"), (1, "IX"), (1, "ZI"), (1, "ZZ")])),
        "SWAP" => Ok(two("SWAP", [(1, "IX"), (1, "XI"), (1, "IZ"), (1, "ZI")])),
        "ISWAP" => Ok(two("ISWAP", [(1, "ZY"), (1, "YZ"), (1, "IZ"), (1, "ZI")])),
        other => match SqCatalog::get().lookup_name(other) {
            Some(idx) => Ok(SqCatalog::get().gate(idx).clone()),
            None => Err(Error::InvalidGate(format!("unknown builtin gate {other:?}"))),
        },
    }
}

/// An ordered set of named Clifford layers over a fixed register.
#[derive(Clone, Debug)]
pub struct GateSet {
    n: usize,
    gates: Vec<Clifford>,
}

impl GateSet {
    pub fn new(n: usize, gates: Vec<Clifford>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &gates {
            if g.n() != n {
                return Err(Error::DimensionMismatch(g.n(), n));
            }
            if !seen.insert(g.name().to_string()) {
                return Err(Error::InvalidGate(format!("duplicate gate name {:?}", g.name())));
            }
        }
        Ok(GateSet { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Clifford] {
        &self.gates
    }

    pub fn gate(&self, idx: usize) -> &Clifford {
        &self.gates[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gates.iter().position(|g| g.name() == name)
    }

    pub fn by_name(&self, name: &str) -> Option<&Clifford> {
        self.gates.iter().find(|g| g.name() == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn cz_action_examples() {
        let cz = builtin("CZ").unwrap();
        let out = cz.apply(&p("XI"));
        assert_eq!((out.sign, out.label), (1, p("XZ")));
        let out = cz.apply(&p("XX"));
        assert_eq!((out.sign, out.label), (1, p("YY")));
        let out = cz.apply(&p("II"));
        assert_eq!((out.sign, out.label), (1, p("II")));
    }

    #[test]
    fn apply_preserves_symplectic_products() {
        for name in ["CZ", "CNOT", "SWAP", "ISWAP"] {
            let g = builtin(name).unwrap();
            let all: Vec<Pauli> = Pauli::enumerate(2).collect();
            for a in &all {
                for b in &all {
                    assert_eq!(
                        g.apply(a).label.symplectic(&g.apply(b).label),
                        a.symplectic(b),
                        "{name} on {a},{b}"
                    );
                }
            }
            // Bijectivity.
            let mut images: Vec<u64> = all.iter().map(|a| g.apply(a).label.key()).collect();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len(), all.len());
        }
    }

    // Dense conjugation oracle over complex matrices for sign checks.
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

    fn dense_pauli(pauli: &Pauli) -> Vec<C> {
        let n = pauli.n();
        let dim = 1usize << n;
        let mut out = vec![(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut v = (1.0, 0.0);
                for q in 1..=n {
                    let m = single(pauli.site(q));
                    v = cmul(v, m[r >> (n - q) & 1][c >> (n - q) & 1]);
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

    fn dagger(a: &[C]) -> Vec<C> {
        let dim = (a.len() as f64).sqrt() as usize;
        let mut out = vec![(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let v = a[c * dim + r];
                out[r * dim + c] = (v.0, -v.1);
            }
        }
        out
    }

    // Unitary of a 2-qubit gate, reconstructed from known matrices.
    fn dense_unitary(name: &str) -> Vec<C> {
        let zero = (0.0, 0.0);
        let one = (1.0, 0.0);
        let i = (0.0, 1.0);
        let rows: [[C; 4]; 4] = match name {
            "CZ" => [
                [one, zero, zero, zero],
                [zero, one, zero, zero],
                [zero, zero, one, zero],
                [zero, zero, zero, (-1.0, 0.0)],
            ],
            "CNOT" => [
                [one, zero, zero, zero],
                [zero, one, zero, zero],
                [zero, zero, zero, one],
                [zero, zero, one, zero],
            ],
            "SWAP" => [
                [one, zero, zero, zero],
                [zero, zero, one, zero],
                [zero, one, zero, zero],
                [zero, zero, zero, one],
            ],
            "ISWAP" => [
                [one, zero, zero, zero],
                [zero, zero, i, zero],
                [zero, i, zero, zero],
                [zero, zero, zero, one],
            ],
            _ => panic!("no dense unitary for {name}"),
        };
        rows.iter().flat_map(|r| r.iter().copied()).collect()
    }

    #[test]
    fn signs_match_dense_conjugation() {
        for name in ["CZ", "CNOT", "SWAP", "ISWAP"] {
            let g = builtin(name).unwrap();
            let u = dense_unitary(name);
            let ud = dagger(&u);
            for a in Pauli::enumerate(2) {
                let got = g.apply(&a);
                let conj = matmul(&matmul(&u, &dense_pauli(&a)), &ud);
                let expect = dense_pauli(&got.label);
                let s = got.sign as f64;
                for (x, y) in conj.iter().zip(expect.iter()) {
                    assert!(
                        (x.0 - s * y.0).abs() < 1e-9 && (x.1 - s * y.1).abs() < 1e-9,
                        "{name} on {a}: got {got:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn pattern_preserved_off_support() {
        let cz = tensor_parallel(4, &[(builtin("CZ").unwrap(), vec![2, 3])], "CZ_23").unwrap();
        assert_eq!(cz.support().to_string(), "0110");
        for a in Pauli::enumerate(4) {
            let out = cz.apply(&a).label;
            for q in [1, 4] {
                assert_eq!(out.pattern().contains_qubit(q), a.pattern().contains_qubit(q));
            }
        }
    }

    #[test]
    fn classify_subgraph_examples() {
        assert_eq!(classify_subgraph(&builtin("CZ").unwrap()).unwrap(), PatternSubgraph::CnotLike);
        assert_eq!(
            classify_subgraph(&builtin("SWAP").unwrap()).unwrap(),
            PatternSubgraph::SwapLike
        );
        assert_eq!(
            classify_subgraph(&builtin("ISWAP").unwrap()).unwrap(),
            PatternSubgraph::IswapLike
        );
        // Connectivity needed by the fully-local analytic theorem.
        assert!(connected_pattern_subgraph(&builtin("CZ").unwrap()));
        assert!(connected_pattern_subgraph(&builtin("ISWAP").unwrap()));
        assert!(!connected_pattern_subgraph(&builtin("SWAP").unwrap()));
        // A parallel CZ pair has a disconnected subgraph.
        let czcz = tensor_parallel(
            4,
            &[(builtin("CZ").unwrap(), vec![1, 2]), (builtin("CZ").unwrap(), vec![3, 4])],
            "CZCZ",
        )
        .unwrap();
        assert!(!connected_pattern_subgraph(&czcz));
    }

    #[test]
    fn catalog_has_24_distinct_gates() {
        let cat = SqCatalog::get();
        assert_eq!(cat.len(), 24);
        assert!(cat.lookup_name("H").is_some());
        assert!(cat.lookup_name("S").is_some());
        assert!(cat.lookup_name("I").is_some());
    }

    #[test]
    fn connector_examples() {
        // X -> Z picks a Hadamard-like element.
        let layer = single_qubit_connector(
            &SignedPauli::plus(p("X")),
            &SignedPauli::plus(p("Z")),
        )
        .unwrap();
        let out = layer.apply(&p("X"));
        assert_eq!((out.sign, out.label), (1, p("Z")));
        assert_eq!(layer.names(), vec!["H".to_string()]);

        // src = dst gives the identity layer.
        let layer = single_qubit_connector(
            &SignedPauli::plus(p("XZ")),
            &SignedPauli::plus(p("XZ")),
        )
        .unwrap();
        assert!(layer.is_identity());

        // Sign absorbed on the first non-identity site.
        let layer = single_qubit_connector(
            &SignedPauli::plus(p("XI")),
            &SignedPauli::minus(p("YI")),
        )
        .unwrap();
        let out = layer.apply_signed(&SignedPauli::plus(p("XI")));
        assert_eq!((out.sign, out.label), (-1, p("YI")));
        let cat = SqCatalog::get();
        assert_eq!(cat.name(layer.ids[1]), "I");

        // Pattern mismatch is an error.
        assert!(single_qubit_connector(
            &SignedPauli::plus(p("XI")),
            &SignedPauli::plus(p("IX")),
        )
        .is_err());
    }

    #[test]
    fn tensor_parallel_examples() {
        let cz = builtin("CZ").unwrap();
        let layer = tensor_parallel(
            4,
            &[(cz.clone(), vec![1, 2]), (cz.clone(), vec![3, 4])],
            "Ge",
        )
        .unwrap();
        assert_eq!(layer.support().to_string(), "1111");
        assert_eq!(layer.blocks().len(), 2);

        let single = tensor_parallel(3, &[(cz.clone(), vec![2, 3])], "CZ_23").unwrap();
        assert_eq!(single.support().to_string(), "011");

        let empty = tensor_parallel(2, &[], "idle").unwrap();
        assert!(empty.support().is_empty());
        assert_eq!(empty.apply(&p("XY")).label, p("XY"));

        assert!(matches!(
            tensor_parallel(3, &[(cz.clone(), vec![1, 2]), (cz, vec![2, 3])], "bad"),
            Err(Error::OverlappingPlacements)
        ));
    }

    #[test]
    fn inverse_round_trips() {
        for name in ["CZ", "CNOT", "SWAP", "ISWAP"] {
            let g = builtin(name).unwrap();
            let inv = g.inverse(format!("{name}_inv"));
            for a in Pauli::enumerate(2) {
                let out = inv.apply_signed(&g.apply(&a));
                assert_eq!((out.sign, out.label), (1, a), "{name} on {a}");
            }
        }
        // A composite with nontrivial signs.
        let cat = SqCatalog::get();
        let s_gate = cat.gate(cat.lookup_name("S").unwrap()).clone();
        let g = tensor_parallel(3, &[(builtin("ISWAP").unwrap(), vec![3, 1]), (s_gate, vec![2])], "g")
            .unwrap();
        let inv = g.inverse("g_inv");
        for a in Pauli::enumerate(3) {
            let out = inv.apply_signed(&g.apply(&a));
            assert_eq!((out.sign, out.label), (1, a));
        }
    }

    #[test]
    fn gate_set_rejects_duplicates() {
        let cz = builtin("CZ").unwrap();
        assert!(GateSet::new(2, vec![cz.clone(), cz]).is_err());
    }
}

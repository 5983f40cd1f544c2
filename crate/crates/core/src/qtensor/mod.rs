//! Quaternionic tensor products of AH-modules, realised inside `H ⊗ (duals)`.

pub mod layout;
pub mod ops;
mod sequence;
pub mod solve;

use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ahmod::{fingerprint_of, pair, present, AHModule, AHMorphism, AhError, IsoFingerprint, Presentation};
use crate::exactq::{LinalgError, Quaternion, Rational, SparseVec, Subspace};

pub use layout::{Block, Kind, Layout};
pub use ops::{apply_block_maps, apply_on_blocks, expand_to_plain, replace_blocks, sub_layout, swap_blocks, BlockMap};
pub use sequence::{check_sequence, PositionReport, SequenceReport};
pub use solve::{power_solve, prime_part, symmetrize, tensor_solve};

pub const DEFAULT_BUDGET: usize = 40_000;

/// Cap on the uncompressed real dimension of any ambient tensor space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(&self, layout: &Layout) -> Result<(), QtError> {
        let needed = layout.full_dim();
        if needed > self.0 {
            return Err(QtError::Budget { needed, limit: self.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QtError {
    #[error("ambient of real dimension {needed} exceeds the budget {limit}")]
    Budget { needed: usize, limit: usize },
    #[error("elements do not commute under the pairing; their tensor is undefined")]
    Incompatible,
    #[error("morphisms {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("layouts do not match")]
    LayoutMismatch,
    #[error(transparent)]
    Ah(#[from] AhError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An AH-module realised as an H-closed subspace of a tensor ambient.
#[derive(Clone, Debug)]
pub struct EmbeddedModule {
    layout: Layout,
    factors: Vec<AHModule>,
    subspace: Subspace,
    prime: Subspace,
    base: OnceLock<Presentation>,
}

impl PartialEq for EmbeddedModule {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.factors == other.factors && self.subspace == other.subspace && self.prime == other.prime
    }
}

impl Eq for EmbeddedModule {}

impl EmbeddedModule {
    /// `factors[b]` is the module whose dual spans block `b`.
    pub fn new(layout: Layout, factors: Vec<AHModule>, subspace: Subspace) -> Self {
        let prime = prime_part(&subspace);
        Self::with_prime(layout, factors, subspace, prime)
    }

    pub fn with_prime(layout: Layout, factors: Vec<AHModule>, subspace: Subspace, prime: Subspace) -> Self {
        assert_eq!(layout.ambient_dim(), subspace.ambient_dim());
        assert_eq!(factors.len(), layout.blocks().len());
        EmbeddedModule { layout, factors, subspace, prime, base: OnceLock::new() }
    }

    /// `H` in the scalar ambient.
    pub fn h() -> Self {
        Self::new(Layout::scalar(), Vec::new(), Subspace::full(4))
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn factors(&self) -> &[AHModule] {
        &self.factors
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn prime(&self) -> &Subspace {
        &self.prime
    }

    pub fn ambient_dim(&self) -> usize {
        self.layout.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn prime_dim(&self) -> usize {
        self.prime.dim()
    }

    /// `(dim, dim')`.
    pub fn dims(&self) -> (usize, usize) {
        (self.dim(), self.prime_dim())
    }

    pub fn virtual_dim(&self) -> i64 {
        self.prime_dim() as i64 - (self.dim() / 2) as i64
    }

    pub fn fingerprint(&self) -> IsoFingerprint {
        fingerprint_of(self.dim(), &self.prime)
    }

    /// H-basis presentation, computed on first use.
    pub fn presentation(&self) -> &Presentation {
        self.base.get_or_init(|| present(&self.subspace, &self.prime).expect("embedded modules satisfy the AH-condition"))
    }

    pub fn base(&self) -> &AHModule {
        &self.presentation().module
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.subspace.contains(v)
    }
}

/// `iota_U(U) ⊂ H ⊗ (U†)*`.
pub fn iota_module(u: &AHModule) -> EmbeddedModule {
    let layout = Layout::new(vec![Block::plain(u.dagger_dim())]);
    let prime = Subspace::span_owned(layout.ambient_dim(), u.uprime().basis().iter().map(|x| u.iota(x)));
    EmbeddedModule::with_prime(layout, vec![u.clone()], u.iota_image(), prime)
}

/// `A ⊗_H B` for embedded modules, in the concatenated ambient.
pub fn qtensor_embedded(a: &EmbeddedModule, b: &EmbeddedModule, budget: Budget) -> Result<EmbeddedModule, QtError> {
    let layout = a.layout.concat(&b.layout);
    budget.check(&layout)?;
    let s = tensor_solve(&a.subspace, &a.layout, &b.subspace, &b.layout);
    let factors = a.factors.iter().chain(b.factors.iter()).cloned().collect();
    Ok(EmbeddedModule::new(layout, factors, s))
}

pub fn qtensor(u: &AHModule, v: &AHModule, budget: Budget) -> Result<EmbeddedModule, QtError> {
    qtensor_embedded(&iota_module(u), &iota_module(v), budget)
}

/// `⊗_H^k U` inside `H ⊗ ((U†)*)^{⊗k}`.
pub fn qtensor_k(u: &AHModule, k: usize, budget: Budget) -> Result<EmbeddedModule, QtError> {
    if k == 0 {
        return Ok(EmbeddedModule::h());
    }
    budget.check(&Layout::new(vec![Block::plain(u.dagger_dim()); k]))?;
    let one = iota_module(u);
    let mut acc = one.clone();
    for _ in 1..k {
        acc = qtensor_embedded(&acc, &one, budget)?;
    }
    Ok(acc)
}

fn power(u: &AHModule, k: usize, kind: Kind, budget: Budget) -> Result<EmbeddedModule, QtError> {
    if k == 0 {
        return Ok(EmbeddedModule::h());
    }
    let d = u.dagger_dim();
    let layout = Layout::new(vec![Block::new(d, k, kind)]);
    budget.check(&layout)?;
    let mut s = u.iota_image();
    for j in 2..=k {
        s = power_solve(&s, d, j, kind);
    }
    Ok(EmbeddedModule::new(layout, vec![u.clone()], s))
}

/// `S_H^k U`, stored in symmetric coordinates of `H ⊗ S^k (U†)*`.
pub fn sym_power(u: &AHModule, k: usize, budget: Budget) -> Result<EmbeddedModule, QtError> {
    power(u, k, Kind::Sym, budget)
}

/// `Λ_H^k U`, stored in alternating coordinates.
pub fn alt_power(u: &AHModule, k: usize, budget: Budget) -> Result<EmbeddedModule, QtError> {
    power(u, k, Kind::Alt, budget)
}

/// Averaging projection `σ_H` from any layout over a single dual to `H ⊗ S^k`.
pub fn sigma_h(v: &SparseVec, layout: &Layout) -> SparseVec {
    let d = layout.blocks().first().map_or(0, |b| b.d);
    symmetrize(v, layout, &Block::sym(d, layout.order()))
}

/// The tensor `u ⊗_H v`, defined when every `alpha(u)` commutes with every `beta(v)`.
pub fn elem_tensor(u: &SparseVec, v: &SparseVec, um: &AHModule, vm: &AHModule) -> Result<SparseVec, QtError> {
    let au: Vec<Quaternion> = um.dagger().basis().iter().map(|a| pair(a, u)).collect();
    let bv: Vec<Quaternion> = vm.dagger().basis().iter().map(|b| pair(b, v)).collect();
    let mut pairs = Vec::new();
    for (k, a) in au.iter().enumerate() {
        for (m, b) in bv.iter().enumerate() {
            let ab = a * b;
            if ab != b * a {
                return Err(QtError::Incompatible);
            }
            for (h, x) in ab.c.into_iter().enumerate() {
                if !x.is_zero() {
                    pairs.push((((k * bv.len() + m) * 4 + h) as u32, x));
                }
            }
        }
    }
    Ok(SparseVec::from_pairs(pairs))
}

/// Matrix `c` with `beta_l ∘ phi = sum_k c[l][k] alpha_k`, in the canonical dagger bases.
pub fn dual_matrix(f: &AHMorphism) -> Vec<Vec<Rational>> {
    let src = f.source().dagger();
    f.target()
        .dagger()
        .basis()
        .iter()
        .map(|b| {
            let p = f.pullback(b);
            src.coordinates(&p).expect("pullback of the dagger space lands in the dagger space")
        })
        .collect()
}

/// Applies `id ⊗ M_1 ⊗ ... ⊗ M_m` on a plain layout, `M_b` acting `e_k* -> sum_l c[l][k] e_l*`.
pub fn apply_factor_maps(v: &SparseVec, src: &Layout, dst: &Layout, mats: &[Vec<Vec<Rational>>]) -> SparseVec {
    // columns of each matrix: k -> [(l, c_lk)]
    let cols: Vec<Vec<Vec<(usize, &Rational)>>> = mats
        .iter()
        .zip(src.blocks())
        .map(|(m, b)| (0..b.d).map(|k| m.iter().enumerate().filter(|(_, row)| !row[k].is_zero()).map(|(l, row)| (l, &row[k])).collect()).collect())
        .collect();
    let mut pairs = Vec::new();
    for (j, x) in v.iter() {
        let idx = src.split(j / 4);
        let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), x.clone())];
        for (b, &i) in idx.iter().enumerate() {
            acc = acc.iter().flat_map(|(t, c)| cols[b][i].iter().map(move |(l, w)| ([t.as_slice(), &[*l]].concat(), c * *w))).collect();
        }
        for (t, c) in acc {
            pairs.push(((4 * dst.pos(&t) + j % 4) as u32, c));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// `φ ⊗_H ψ : U ⊗_H V -> W ⊗_H X` between the presented tensor products.
pub fn tensor_morphism(f: &AHMorphism, g: &AHMorphism, budget: Budget) -> Result<AHMorphism, QtError> {
    let src = qtensor(f.source(), g.source(), budget)?;
    let dst = qtensor(f.target(), g.target(), budget)?;
    let mats = [dual_matrix(f), dual_matrix(g)];
    morphism_from_ambient(&src, &dst, |v| apply_factor_maps(v, src.layout(), dst.layout(), &mats))
}

/// Expresses an ambient-level H-linear map between embedded modules as an AH-morphism of their presentations.
pub fn morphism_from_ambient(src: &EmbeddedModule, dst: &EmbeddedModule, map: impl Fn(&SparseVec) -> SparseVec) -> Result<AHMorphism, QtError> {
    let sp = src.presentation();
    let dp = dst.presentation();
    let coeffs = sp
        .generators()
        .iter()
        .map(|g| {
            let img = map(g);
            if !dst.contains(&img) {
                return Err(QtError::Ah(AhError::NotMorphism));
            }
            let c = dp.coords(&img).to_dense(dst.dim());
            Ok(c.chunks(4).map(|q| Quaternion::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone())).collect())
        })
        .collect::<Result<Vec<Vec<Quaternion>>, QtError>>()?;
    Ok(AHMorphism::new(sp.module.clone(), dp.module.clone(), coeffs)?)
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    d: usize,
    len: usize,
    kind: Kind,
}

#[derive(Serialize, Deserialize)]
struct EmbeddedRepr {
    layout: Vec<BlockRepr>,
    factors: Vec<AHModule>,
    subspace: Subspace,
    prime: Subspace,
}

impl Serialize for EmbeddedModule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddedRepr {
            layout: self.layout.blocks().iter().map(|b| BlockRepr { d: b.d, len: b.len, kind: b.kind }).collect(),
            factors: self.factors.clone(),
            subspace: self.subspace.clone(),
            prime: self.prime.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmbeddedModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = EmbeddedRepr::deserialize(d)?;
        let layout = Layout::new(r.layout.iter().map(|b| Block::new(b.d, b.len, b.kind)).collect());
        if layout.ambient_dim() != r.subspace.ambient_dim() || r.factors.len() != layout.blocks().len() {
            return Err(serde::de::Error::custom("layout does not match subspace"));
        }
        Ok(EmbeddedModule::with_prime(layout, r.factors, r.subspace, r.prime))
    }
}

#[cfg(test)]
mod tests;

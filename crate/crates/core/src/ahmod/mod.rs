//! Augmented H-modules: a left H-module `H^n` with a distinguished real subspace.

mod examples;
mod morphism;
mod slots;
mod stability;

pub use examples::{random_extension, random_stable, u_linear, x_q, y_embedded, y_module};
pub use morphism::AHMorphism;
pub use slots::{h_span, is_h_closed, left_mul, left_mul_unit, present, Presentation};
pub use stability::{
    canonical_probes, fingerprint, fingerprint_of, fingerprints_match, is_semistable, is_semistable_of, is_stable, is_stable_of,
    random_probes, sector, IsoFingerprint, StabilityReport,
};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactq::{basis_product, LinalgError, Quaternion, Rational, SparseVec, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AhError {
    #[error("not an AH-module: witness {witness:?} is annihilated by the whole dagger space")]
    NotAHModule { witness: Vec<Rational> },
    #[error("expected a subspace of R^{expected}, got R^{got}")]
    Dimension { expected: usize, got: usize },
    #[error("probe must be a nonzero imaginary quaternion, got {0}")]
    InvalidProbe(Quaternion),
    #[error("subspace is not closed under left multiplication by i1, i2, i3")]
    NotHClosed,
    #[error("prime subspace is not contained in the module")]
    PrimeNotContained,
    #[error("not an AH-submodule")]
    NotSubmodule,
    #[error("map does not send U' into V'")]
    NotMorphism,
    #[error("morphisms are not composable: {0} vs {1}")]
    NotComposable(usize, usize),
    #[error("no suitable module found after {0} attempts")]
    RetryLimit(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `U = H^n` with `U' ⊂ R^{4n}`; slot `i` occupies coordinates `4i..4i+4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AHModule {
    n: usize,
    uprime: Subspace,
    dagger: Subspace,
}

/// Coefficients of the real equations cutting out `U†`: one per basis vector of `U'`.
fn dagger_equation(u: &SparseVec) -> SparseVec {
    SparseVec::from_sorted(u.entries().iter().map(|(i, v)| (*i, if i % 4 == 0 { v.clone() } else { -v })).collect())
}

/// Dagger subspace of `prime` inside `R^{4n}`.
pub fn dagger_of(n: usize, prime: &Subspace) -> Subspace {
    Subspace::from_equations_owned(4 * n, prime.basis().iter().map(dagger_equation))
}

/// Rows of the real matrix of `u -> (alpha_k(u))_k` for the given functionals.
///
/// Row `4i+b` is the image of `e_b` in slot `i`; column `4k+h` is component `h` of `alpha_k`.
pub fn pairing_rows(n: usize, functionals: &[SparseVec]) -> Vec<SparseVec> {
    let mut rows: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); 4 * n];
    for (k, a) in functionals.iter().enumerate() {
        for (idx, x) in a.iter() {
            let (i, c) = (idx / 4, idx % 4);
            for b in 0..4 {
                let h = b ^ c;
                let (s, _) = basis_product(b, c);
                rows[4 * i + b].push(((4 * k + h) as u32, if s > 0 { x.clone() } else { -x }));
            }
        }
    }
    rows.into_iter().map(SparseVec::from_pairs).collect()
}

/// Evaluates `alpha(u) = sum_i u_i a_i`.
pub fn pair(alpha: &SparseVec, u: &SparseVec) -> Quaternion {
    let mut out = Quaternion::zero();
    for (idx, x) in u.iter() {
        let (i, b) = (idx / 4, idx % 4);
        for c in 0..4 {
            if let Some(a) = alpha.get(4 * i + c) {
                let (s, h) = basis_product(b, c);
                let p = x * a;
                if s > 0 {
                    out.c[h] += &p;
                } else {
                    out.c[h] -= &p;
                }
            }
        }
    }
    out
}

/// A nonzero vector of `R^{4n}` killed by every functional, if one exists.
pub fn ah_witness(n: usize, dagger: &Subspace) -> Option<SparseVec> {
    let rows = pairing_rows(n, dagger.basis());
    let d = dagger.dim();
    // columns of the pairing matrix are the equations
    let mut cols: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); 4 * d];
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter() {
            cols[c].push((r as u32, v.clone()));
        }
    }
    let kernel = Subspace::from_equations_owned(4 * n, cols.into_iter().map(SparseVec::from_sorted));
    kernel.basis().first().cloned()
}

impl AHModule {
    pub fn new(n: usize, uprime: Subspace) -> Result<Self, AhError> {
        if uprime.ambient_dim() != 4 * n {
            return Err(AhError::Dimension { expected: 4 * n, got: uprime.ambient_dim() });
        }
        let dagger = dagger_of(n, &uprime);
        if let Some(w) = ah_witness(n, &dagger) {
            return Err(AhError::NotAHModule { witness: w.to_dense(4 * n) });
        }
        Ok(AHModule { n, uprime, dagger })
    }

    /// The module `H` with `H' = I`.
    pub fn h() -> Self {
        Self::new(1, Subspace::span_owned(4, (1..4).map(SparseVec::unit))).unwrap()
    }

    /// The zero module.
    pub fn zero() -> Self {
        AHModule { n: 0, uprime: Subspace::zero(0), dagger: Subspace::zero(0) }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    pub fn uprime(&self) -> &Subspace {
        &self.uprime
    }

    pub fn dagger(&self) -> &Subspace {
        &self.dagger
    }

    pub fn dagger_dim(&self) -> usize {
        self.dagger.dim()
    }

    /// `(dim U, dim U', dim U†)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim(), self.uprime.dim(), self.dagger.dim())
    }

    /// `dim U' - 2n`.
    pub fn virtual_dim(&self) -> i64 {
        self.uprime.dim() as i64 - 2 * self.n as i64
    }

    /// Rows of the matrix of `iota_U: U -> H ⊗ (U†)*`, ambient `4 dim U†`.
    pub fn iota_rows(&self) -> Vec<SparseVec> {
        pairing_rows(self.n, self.dagger.basis())
    }

    pub fn iota(&self, u: &SparseVec) -> SparseVec {
        let rows = self.iota_rows();
        let mut out = SparseVec::new();
        for (i, x) in u.iter() {
            out = out.sub_scaled(&-x, &rows[i]);
        }
        out
    }

    /// `iota_U(U)` as a subspace of `R^{4 dim U†}`.
    pub fn iota_image(&self) -> Subspace {
        Subspace::span_owned(4 * self.dagger.dim(), self.iota_rows())
    }

    pub fn direct_sum(&self, other: &AHModule) -> AHModule {
        let shift = 4 * self.n;
        let rows = self
            .uprime
            .basis()
            .iter()
            .cloned()
            .chain(other.uprime.basis().iter().map(|r| r.map_indices(|i| i + shift)))
            .collect::<Vec<_>>();
        AHModule::new(self.n + other.n, Subspace::span_owned(4 * (self.n + other.n), rows)).expect("direct sum of AH-modules")
    }

    /// The AH-submodule `W` with `W' = W ∩ U'`, presented by H-basis extraction.
    pub fn submodule(&self, w: &Subspace) -> Result<Presentation, AhError> {
        if w.ambient_dim() != self.dim() {
            return Err(AhError::Dimension { expected: self.dim(), got: w.ambient_dim() });
        }
        let wp = w.intersect(&self.uprime)?;
        present(w, &wp)
    }

    /// `U/V` with `(U/V)' = image of U'`; `v` must be an H-closed subspace of `R^{4n}`.
    ///
    /// The quotient is realised on a complement spanned by coordinate slots.
    pub fn quotient(&self, v: &Subspace) -> Result<AHModule, AhError> {
        if v.ambient_dim() != self.dim() {
            return Err(AhError::Dimension { expected: self.dim(), got: v.ambient_dim() });
        }
        if !is_h_closed(v) {
            return Err(AhError::NotHClosed);
        }
        let n = self.n;
        let mut span = v.clone();
        let mut slots = Vec::new();
        for i in 0..n {
            if span.dim() == 4 * n {
                break;
            }
            let e = SparseVec::unit(4 * i);
            if !span.contains(&e) {
                slots.push(i);
                span = span.sum(&Subspace::span_owned(4 * n, (0..4).map(|h| SparseVec::unit(4 * i + h))))?;
            }
        }
        let coords: Vec<usize> = slots.iter().flat_map(|&i| (0..4).map(move |h| 4 * i + h)).collect();
        let mut complement_eqs = Vec::new();
        for i in 0..n {
            if !slots.contains(&i) {
                complement_eqs.extend((0..4).map(|h| SparseVec::unit(4 * i + h)));
            }
        }
        let complement = Subspace::from_equations_owned(4 * n, complement_eqs);
        let prime = self.uprime.sum(v)?.intersect(&complement)?.project(&coords);
        AHModule::new(slots.len(), prime)
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    n: usize,
    uprime: Vec<Vec<Rational>>,
}

impl Serialize for AHModule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModuleRepr { n: self.n, uprime: self.uprime.basis().iter().map(|r| r.to_dense(4 * self.n)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AHModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ModuleRepr::deserialize(d)?;
        if let Some(r) = repr.uprime.iter().find(|r| r.len() != 4 * repr.n) {
            return Err(serde::de::Error::custom(format!("uprime row of length {} for rank {}", r.len(), repr.n)));
        }
        AHModule::new(repr.n, Subspace::span_dense(4 * repr.n, &repr.uprime)).map_err(serde::de::Error::custom)
    }
}

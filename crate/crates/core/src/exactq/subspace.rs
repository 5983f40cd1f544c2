use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::matrix::RatMatrix;
use super::sparse::{kernel_of_equation_iter, Accumulator, Reducer, SparseVec};
use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace is not contained in the given superspace")]
    NotContained,
    #[error("vector length {got} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Real subspace of R^N in canonical form: RREF basis rows sorted by pivot.
///
/// Two subspaces are equal as sets exactly when they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, rows: (0..n).map(SparseVec::unit).collect() }
    }

    /// Span of arbitrary vectors.
    pub fn span<'a>(n: usize, vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut red = Reducer::new(n);
        for v in vs {
            debug_assert!(v.max_index().map_or(true, |m| m < n));
            if red.rank() == n {
                break;
            }
            red.insert(v);
        }
        Subspace { ambient: n, rows: red.into_rows() }
    }

    pub fn span_owned(n: usize, vs: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut red = Reducer::new(n);
        for v in vs {
            if red.rank() == n {
                break;
            }
            red.insert(&v);
        }
        Subspace { ambient: n, rows: red.into_rows() }
    }

    pub fn span_dense(n: usize, vs: &[Vec<Rational>]) -> Self {
        Self::span_owned(n, vs.iter().map(|v| SparseVec::from_dense(v)))
    }

    /// Rows must already be an RREF basis sorted by pivot.
    pub fn from_rref_unchecked(n: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(is_rref(&rows));
        Subspace { ambient: n, rows }
    }

    /// `{x : e . x = 0 for all e}`.
    pub fn from_equations<'a>(n: usize, eqs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        Subspace { ambient: n, rows: kernel_of_equation_iter(n, eqs.into_iter().cloned()) }
    }

    pub fn from_equations_owned(n: usize, eqs: impl IntoIterator<Item = SparseVec>) -> Self {
        Subspace { ambient: n, rows: kernel_of_equation_iter(n, eqs) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn into_basis(self) -> Vec<SparseVec> {
        self.rows
    }

    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_sparse_rows(&self.rows, self.ambient)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Residue of `v` modulo the subspace; zero iff `v` lies in it.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let piv = self.pivots();
        let mut hits = Vec::new();
        for (k, p) in piv.iter().enumerate() {
            if let Some(x) = v.get(*p) {
                hits.push((k, x.clone()));
            }
        }
        if hits.is_empty() {
            return v.clone();
        }
        if hits.len() == 1 {
            let (k, x) = &hits[0];
            return v.sub_scaled(x, &self.rows[*k]);
        }
        let mut acc = Accumulator::new(self.ambient);
        acc.add_scaled(&Rational::one(), v);
        for (k, x) in hits {
            acc.add_scaled(&-x, &self.rows[k]);
        }
        acc.take()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self.pivots().iter().map(|p| v.get(*p).cloned().unwrap_or_default()).collect();
        if self.combine(&coords) == *v {
            Some(coords)
        } else {
            None
        }
    }

    /// Coordinates without the membership check.
    pub fn coordinates_unchecked(&self, v: &SparseVec) -> Vec<Rational> {
        self.pivots().iter().map(|p| v.get(*p).cloned().unwrap_or_default()).collect()
    }

    /// `sum_i c_i b_i` over the basis rows.
    pub fn combine(&self, coeffs: &[Rational]) -> SparseVec {
        assert_eq!(coeffs.len(), self.rows.len());
        let nz: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
        match nz.len() {
            0 => SparseVec::new(),
            1 => self.rows[nz[0]].scale(&coeffs[nz[0]]),
            _ => {
                let mut acc = Accumulator::new(self.ambient);
                for i in nz {
                    acc.add_scaled(&coeffs[i], &self.rows[i]);
                }
                acc.take()
            }
        }
    }

    /// Canonical basis of the annihilator `{e : e . v = 0 for all v}`.
    pub fn equations(&self) -> Vec<SparseVec> {
        kernel_of_equation_iter(self.ambient, self.rows.iter().cloned())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Subspace::span(self.ambient, self.rows.iter().chain(other.rows.iter())))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let (a, b) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        // x = sum c_i a_i lies in b iff sum c_i res(a_i) = 0
        let residues: Vec<SparseVec> = a.rows.iter().map(|r| b.reduce(r)).collect();
        let m = a.dim();
        let mut cols: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.ambient];
        for (i, r) in residues.iter().enumerate() {
            for (j, v) in r.iter() {
                cols[j].push((i as u32, v.clone()));
            }
        }
        let eqs = cols.into_iter().filter(|c| !c.is_empty()).map(SparseVec::from_sorted);
        let kernel = kernel_of_equation_iter(m, eqs);
        let rows: Vec<SparseVec> = kernel
            .iter()
            .map(|k| {
                let coeffs = k.to_dense(m);
                a.combine(&coeffs)
            })
            .collect();
        Ok(Subspace::from_rref_unchecked(self.ambient, rows))
    }

    /// Image of the subspace under a linear map given on vectors.
    pub fn map(&self, target_dim: usize, f: impl Fn(&SparseVec) -> SparseVec) -> Subspace {
        Subspace::span_owned(target_dim, self.rows.iter().map(f))
    }

    /// Canonical representatives of `self / sub`; requires `sub ⊆ self`.
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Vec<SparseVec>, LinalgError> {
        self.check(sub)?;
        if !self.contains_subspace(sub) {
            return Err(LinalgError::NotContained);
        }
        Ok(Subspace::span_owned(self.ambient, self.rows.iter().map(|r| sub.reduce(r))).rows)
    }

    /// Restriction to a coordinate set, re-indexed densely.
    pub fn project(&self, coords: &[usize]) -> Subspace {
        let mut pos = vec![u32::MAX; self.ambient];
        for (k, &c) in coords.iter().enumerate() {
            pos[c] = k as u32;
        }
        Subspace::span_owned(
            coords.len(),
            self.rows.iter().map(|r| {
                SparseVec::from_sorted(
                    r.entries().iter().filter(|(i, _)| pos[*i as usize] != u32::MAX).map(|(i, v)| (pos[*i as usize], v.clone())).collect::<Vec<_>>(),
                )
            }),
        )
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }
}

fn is_rref(rows: &[SparseVec]) -> bool {
    let piv: Vec<usize> = match rows.iter().map(|r| r.leading().filter(|l| l.1.is_one()).map(|l| l.0)).collect() {
        Some(p) => p,
        None => return false,
    };
    piv.windows(2).all(|w| w[0] < w[1]) && rows.iter().all(|r| piv.iter().filter(|p| r.get(**p).is_some()).count() == 1)
}

/// Row space of `m`.
pub fn image(m: &RatMatrix) -> Subspace {
    Subspace::span_owned(m.ncols(), m.sparse_rows())
}

/// `{v : v m = 0}` (row-vector convention).
pub fn kernel(m: &RatMatrix) -> Subspace {
    let t = m.transpose();
    Subspace::from_equations_owned(m.nrows(), t.sparse_rows())
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.intersect(b)
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.sum(b)
}

pub fn quotient_basis(a: &Subspace, b: &Subspace) -> Result<RatMatrix, LinalgError> {
    Ok(RatMatrix::from_sparse_rows(&a.quotient_basis(b)?, a.ambient_dim()))
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr { ambient_dim: self.ambient, basis: self.rows.iter().map(|r| r.to_dense(self.ambient)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        if let Some(bad) = repr.basis.iter().find(|r| r.len() != repr.ambient_dim) {
            return Err(serde::de::Error::custom(format!("basis row of length {} in ambient {}", bad.len(), repr.ambient_dim)));
        }
        Ok(Subspace::span_dense(repr.ambient_dim, &repr.basis))
    }
}

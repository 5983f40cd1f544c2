use crate::exactq::{Quaternion, SparseVec, Subspace};

use super::{AHModule, AhError};

/// H-linear map `phi(u)_j = sum_i u_i C_ij` sending `U'` into `V'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AHMorphism {
    source: AHModule,
    target: AHModule,
    coeffs: Vec<Vec<Quaternion>>,
}

impl AHMorphism {
    pub fn new(source: AHModule, target: AHModule, coeffs: Vec<Vec<Quaternion>>) -> Result<Self, AhError> {
        if coeffs.len() != source.rank() || coeffs.iter().any(|r| r.len() != target.rank()) {
            return Err(AhError::Dimension { expected: source.rank() * target.rank(), got: coeffs.iter().map(Vec::len).sum() });
        }
        let m = AHMorphism { source, target, coeffs };
        if !m.source.uprime().basis().iter().all(|u| m.target.uprime().contains(&m.apply(u))) {
            return Err(AhError::NotMorphism);
        }
        Ok(m)
    }

    pub fn identity(u: &AHModule) -> Self {
        let n = u.rank();
        let coeffs = (0..n).map(|i| (0..n).map(|j| if i == j { Quaternion::one() } else { Quaternion::zero() }).collect()).collect();
        AHMorphism { source: u.clone(), target: u.clone(), coeffs }
    }

    pub fn zero(source: &AHModule, target: &AHModule) -> Self {
        AHMorphism { source: source.clone(), target: target.clone(), coeffs: vec![vec![Quaternion::zero(); target.rank()]; source.rank()] }
    }

    pub fn source(&self) -> &AHModule {
        &self.source
    }

    pub fn target(&self) -> &AHModule {
        &self.target
    }

    pub fn coeffs(&self) -> &[Vec<Quaternion>] {
        &self.coeffs
    }

    /// Real matrix rows: row `4i+b` is `phi(e_b in slot i)`.
    pub fn real_rows(&self) -> Vec<SparseVec> {
        let mut rows = Vec::with_capacity(self.source.dim());
        for row in &self.coeffs {
            for b in 0..4 {
                let e = Quaternion::unit(b);
                let mut dense = Vec::with_capacity(self.target.dim());
                for c in row {
                    dense.extend((&e * c).c);
                }
                rows.push(SparseVec::from_dense(&dense));
            }
        }
        rows
    }

    pub fn apply(&self, u: &SparseVec) -> SparseVec {
        let mut out = vec![Quaternion::zero(); self.target.rank()];
        for i in 0..self.source.rank() {
            let ui = Quaternion { c: std::array::from_fn(|h| u.get(4 * i + h).cloned().unwrap_or_default()) };
            if ui.is_zero() {
                continue;
            }
            for (j, c) in self.coeffs[i].iter().enumerate() {
                out[j] = &out[j] + &(&ui * c);
            }
        }
        SparseVec::from_dense(&out.into_iter().flat_map(|q| q.c).collect::<Vec<_>>())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AHMorphism) -> Result<AHMorphism, AhError> {
        if self.target != next.source {
            return Err(AhError::NotComposable(self.target.rank(), next.source.rank()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                (0..next.target.rank())
                    .map(|k| row.iter().zip(&next.coeffs).fold(Quaternion::zero(), |acc, (c, nrow)| &acc + &(c * &nrow[k])))
                    .collect()
            })
            .collect();
        Ok(AHMorphism { source: self.source.clone(), target: next.target.clone(), coeffs })
    }

    pub fn kernel(&self) -> Subspace {
        let rows = self.real_rows();
        let mut cols: Vec<Vec<(u32, crate::exactq::Rational)>> = vec![Vec::new(); self.target.dim()];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter() {
                cols[c].push((r as u32, v.clone()));
            }
        }
        Subspace::from_equations_owned(self.source.dim(), cols.into_iter().map(SparseVec::from_sorted))
    }

    pub fn image(&self) -> Subspace {
        Subspace::span_owned(self.target.dim(), self.real_rows())
    }

    /// `beta -> beta ∘ phi` on coefficient vectors: `a_i = sum_j C_ij b_j`.
    pub fn pullback(&self, beta: &SparseVec) -> SparseVec {
        let b: Vec<Quaternion> =
            (0..self.target.rank()).map(|j| Quaternion { c: std::array::from_fn(|h| beta.get(4 * j + h).cloned().unwrap_or_default()) }).collect();
        let dense: Vec<_> = self
            .coeffs
            .iter()
            .flat_map(|row| row.iter().zip(&b).fold(Quaternion::zero(), |acc, (c, bj)| &acc + &(c * bj)).c)
            .collect();
        SparseVec::from_dense(&dense)
    }
}

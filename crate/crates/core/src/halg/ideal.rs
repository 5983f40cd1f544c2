use crate::ahmod::{is_h_closed, present};
use crate::exactq::{SparseVec, Subspace};
use crate::qtensor::{qtensor_embedded, Budget, EmbeddedModule};

use super::{Check, CheckReport, GradedAlgebra, HalgError, LinearMap};

/// A graded ideal generated by `J` in power `g0`, stored per power inside the
/// parent grades.
#[derive(Clone, Debug)]
pub struct IdealData {
    pub g0: usize,
    pub generators: EmbeddedModule,
    pub grades: Vec<EmbeddedModule>,
    /// Dimensions of the iterated candidate `μ(I^{k-1} ⊗_H A^1)`, starting from `J`.
    pub iterated_dims: Vec<usize>,
    pub checks: CheckReport,
}

impl IdealData {
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.grades.iter().map(EmbeddedModule::dims).collect()
    }

    /// Whether the two gradewise constructions agree at every power.
    pub fn candidates_agree(&self) -> bool {
        self.grades.iter().zip(&self.iterated_dims).all(|(g, &d)| g.dim() == d)
    }
}

fn within(alg: &GradedAlgebra, k: usize, s: Subspace) -> EmbeddedModule {
    let g = &alg.grades()[k];
    EmbeddedModule::new(g.layout().clone(), g.factors().to_vec(), s)
}

/// Span of `μ(src)` for `src` inside the domain of `m`.
fn product_span(m: &LinearMap, src: &EmbeddedModule) -> Result<Subspace, HalgError> {
    let imgs = src.subspace().basis().iter().map(|v| m.apply(v)).collect::<Result<Vec<SparseVec>, _>>()?;
    Ok(Subspace::span_owned(m.target().ambient_dim(), imgs))
}

/// `I = μ(J ⊗_H A)` gradewise: `I^k = μ(J ⊗_H A^{k-g0})`.
///
/// The iterated construction `μ(I^{k-1} ⊗_H A^1)` is computed alongside and
/// reported; absorption `μ(I^j ⊗_H A^k) ⊂ I^{j+k}` is checked for every pair in range.
pub fn ideal_from_generators(alg: &GradedAlgebra, g0: usize, j: &Subspace, budget: Budget) -> Result<IdealData, HalgError> {
    let grade = alg.grade(g0)?;
    if j.ambient_dim() != grade.ambient_dim() || !grade.subspace().contains_subspace(j) || !is_h_closed(j) {
        return Err(HalgError::NotSubmodule);
    }
    let jm = within(alg, g0, j.clone());
    present(jm.subspace(), jm.prime()).map_err(|_| HalgError::NotSubmodule)?;
    let kk = alg.truncation();

    let mut grades = Vec::with_capacity(kk + 1);
    let mut iterated: Vec<EmbeddedModule> = Vec::with_capacity(kk + 1);
    for k in 0..=kk {
        let zero = || within(alg, k, Subspace::zero(alg.grades()[k].ambient_dim()));
        if k < g0 {
            grades.push(zero());
            iterated.push(zero());
        } else if k == g0 {
            grades.push(jm.clone());
            iterated.push(jm.clone());
        } else {
            let src = qtensor_embedded(&jm, &alg.grades()[k - g0], budget)?;
            grades.push(within(alg, k, product_span(alg.mult(g0, k - g0)?, &src)?));
            let src = qtensor_embedded(&iterated[k - 1], &alg.grades()[1], budget)?;
            iterated.push(within(alg, k, product_span(alg.mult(k - 1, 1)?, &src)?));
        }
    }

    let mut checks = CheckReport::default();
    checks.push(Check::new("identity_not_in_ideal", !grades[0].contains(&SparseVec::unit(0))));
    for a in g0..=kk {
        for b in 1..=kk - a {
            let src = qtensor_embedded(&grades[a], &alg.grades()[b], budget)?;
            let img = product_span(alg.mult(a, b)?, &src)?;
            checks.push(Check::new(format!("absorption({a},{b})"), grades[a + b].subspace().contains_subspace(&img)));
        }
    }
    Ok(IdealData { g0, generators: jm, grades, iterated_dims: iterated.iter().map(EmbeddedModule::dim).collect(), checks })
}

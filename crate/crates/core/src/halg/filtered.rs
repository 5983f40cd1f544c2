use std::collections::BTreeMap;

use crate::ahmod::{is_h_closed, present};
use crate::exactq::{SparseVec, Subspace};
use crate::qtensor::{apply_on_blocks, qtensor_embedded, Budget, EmbeddedModule};

use super::{GradedAlgebra, HalgError, LinearMap};

/// Offsets of each grade inside `⊕_k ambient(A^k)`, plus the total size.
pub fn total_ambient(alg: &GradedAlgebra) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(alg.grades().len());
    let mut n = 0;
    for g in alg.grades() {
        offsets.push(n);
        n += g.ambient_dim();
    }
    (offsets, n)
}

fn shift(v: &SparseVec, by: usize) -> SparseVec {
    v.map_indices(|i| i + by)
}

/// Component of a total-ambient vector in grade `k`.
fn component(v: &SparseVec, offsets: &[usize], total: usize, k: usize) -> SparseVec {
    let lo = offsets[k];
    let hi = offsets.get(k + 1).copied().unwrap_or(total);
    SparseVec::from_sorted(v.iter().filter(|(i, _)| (lo..hi).contains(i)).map(|(i, x)| ((i - lo) as u32, x.clone())).collect())
}

/// `F_k = ⊕_{j <= k} A^j` inside the total ambient.
pub fn natural_filtration(alg: &GradedAlgebra) -> Vec<Subspace> {
    let (offsets, total) = total_ambient(alg);
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for (k, g) in alg.grades().iter().enumerate() {
        rows.extend(g.subspace().basis().iter().map(|v| shift(v, offsets[k])));
        out.push(Subspace::span(total, &rows));
    }
    out
}

fn prime_total(alg: &GradedAlgebra) -> Subspace {
    let (offsets, total) = total_ambient(alg);
    Subspace::span_owned(total, alg.grades().iter().enumerate().flat_map(|(k, g)| {
        let off = offsets[k];
        g.prime().basis().iter().map(move |v| shift(v, off))
    }))
}

/// Graded algebra of `A_k / A_{k-1}` for a filtration `A_0 ⊂ A_1 ⊂ ...` of the total
/// ambient of `alg`.
///
/// Each step is first checked abstractly for the AH-condition. The product is then
/// taken from `alg` on leading forms, which needs `A_k ⊂ F_k` and `A_k ∩ F_{k-1} = A_{k-1}`.
pub fn associated_graded(alg: &GradedAlgebra, levels: &[Subspace], budget: Budget) -> Result<GradedAlgebra, HalgError> {
    let (offsets, total) = total_ambient(alg);
    if levels.is_empty() || levels.len() > alg.grades().len() {
        return Err(HalgError::BadGrade(levels.len()));
    }
    let prime = prime_total(alg);
    let natural = natural_filtration(alg);
    for (k, a) in levels.iter().enumerate() {
        let prev = if k == 0 { Subspace::zero(total) } else { levels[k - 1].clone() };
        if a.ambient_dim() != total || !is_h_closed(a) || !a.contains_subspace(&prev) {
            return Err(HalgError::NotNested { grade: k });
        }
        let pres = present(a, &a.intersect(&prime)?).map_err(|_| HalgError::NotAH { grade: k })?;
        let sub = Subspace::span_owned(pres.module.dim(), prev.basis().iter().map(|v| pres.coords(v)));
        pres.module.quotient(&sub).map_err(|_| HalgError::NotAH { grade: k })?;
    }
    let mut grades = Vec::with_capacity(levels.len());
    for (k, a) in levels.iter().enumerate() {
        let prev = if k == 0 { Subspace::zero(total) } else { levels[k - 1].clone() };
        let lower = if k == 0 { Subspace::zero(total) } else { natural[k - 1].clone() };
        if !natural[k].contains_subspace(a) || a.intersect(&lower)? != prev {
            return Err(HalgError::NotInduced { grade: k });
        }
        let g = &alg.grades()[k];
        let lead = |s: &Subspace| s.map(g.ambient_dim(), |v| component(v, &offsets, total, k));
        let space = lead(a);
        let bprime = lead(&a.intersect(&prime)?);
        present(&space, &bprime).map_err(|_| HalgError::NotAH { grade: k })?;
        grades.push(EmbeddedModule::with_prime(g.layout().clone(), g.factors().to_vec(), space, bprime));
    }
    let kk = grades.len() - 1;
    let mut mult = BTreeMap::new();
    for j in 0..=kk {
        for k in 0..=kk - j {
            let src = qtensor_embedded(&grades[j], &grades[k], budget)?;
            let m = alg.mult(j, k)?;
            let images = src.subspace().basis().iter().map(|v| m.apply(v)).collect::<Result<Vec<_>, _>>()?;
            mult.insert((j, k), LinearMap::from_images(src, grades[j + k].clone(), images)?);
        }
    }
    Ok(GradedAlgebra::new(alg.gen().clone(), alg.weight(), grades, mult))
}

/// Filtered ideal generated by the deformed generators `{f(x) + x : x ∈ J}`, with
/// `J` in power `g0` and `f : J -> A^e`, `e < g0`.
#[derive(Clone, Debug)]
pub struct FilteredIdeal {
    /// `I_k` inside the total ambient, for `k = 0..=K`.
    pub levels: Vec<Subspace>,
    /// Leading forms `I_k / I_{k-1}`, by dimension.
    pub leading_dims: Vec<usize>,
}

impl FilteredIdeal {
    /// `dim F_k - dim I_k`.
    pub fn quotient_dims(&self, alg: &GradedAlgebra) -> Vec<usize> {
        natural_filtration(alg).iter().zip(&self.levels).map(|(f, i)| f.dim() - i.dim()).collect()
    }

    /// `I_k = span { μ(f⊗id)(z) + μ(z) : z ∈ J ⊗_H A^m, g0 + m <= k }`.
    pub fn generate(alg: &GradedAlgebra, g0: usize, e: usize, f: &LinearMap, budget: Budget) -> Result<Self, HalgError> {
        let (offsets, total) = total_ambient(alg);
        let jm = f.source();
        if e >= g0 || jm.layout() != alg.grade(g0)?.layout() || f.target().layout() != alg.grade(e)?.layout() {
            return Err(HalgError::NotSubmodule);
        }
        let jb = jm.layout().blocks().len();
        let kk = alg.truncation();
        let mut gens: Vec<Vec<SparseVec>> = vec![Vec::new(); kk + 1];
        for m in 0..=kk - g0 {
            let src = qtensor_embedded(jm, &alg.grades()[m], budget)?;
            let hi = alg.mult(g0, m)?;
            let lo = alg.mult(e, m)?;
            for z in src.subspace().basis() {
                let mut err = None;
                let fz = apply_on_blocks(z, src.layout(), 0..jb, alg.grades()[e].layout(), |s| {
                    f.apply(s).unwrap_or_else(|x| {
                        err = Some(x);
                        SparseVec::new()
                    })
                });
                if let Some(x) = err {
                    return Err(x);
                }
                let v = shift(&hi.apply(z)?, offsets[g0 + m]).add(&shift(&lo.apply(&fz)?, offsets[e + m]));
                gens[g0 + m].push(v);
            }
        }
        let mut levels = Vec::with_capacity(kk + 1);
        let mut rows: Vec<SparseVec> = Vec::new();
        for g in gens {
            rows.extend(g);
            levels.push(Subspace::span(total, &rows));
        }
        let leading_dims = levels.iter().enumerate().map(|(k, l)| l.dim() - if k == 0 { 0 } else { levels[k - 1].dim() }).collect();
        Ok(FilteredIdeal { levels, leading_dims })
    }
}

//! Truncated graded H-algebras: free algebras, ideals, quotients, associated
//! graded algebras and Lie-type brackets.

mod filtered;
mod ideal;
mod lie;
mod quotient;

pub use filtered::{associated_graded, natural_filtration, total_ambient, FilteredIdeal};
pub use ideal::{ideal_from_generators, IdealData};
pub use lie::{hl_from_lie, poisson_on_free, HLAlgebra, LieAlgebra, PoissonTables};
pub use quotient::{quotient_algebra, GradeExactness, Projection, QuotientAlgebra};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ahmod::{left_mul_unit, AHModule, AhError};
use crate::exactq::{Accumulator, LinalgError, SparseVec, Subspace};
use crate::qtensor::{apply_on_blocks, qtensor_embedded, sigma_h, swap_blocks, sym_power, Budget, EmbeddedModule, QtError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalgError {
    #[error("vector is not in the source of the map")]
    NotInSource,
    #[error("map has {got} images for a source of dimension {expected}")]
    ImageCount { expected: usize, got: usize },
    #[error("grade {0} is beyond the truncation")]
    BadGrade(usize),
    #[error("generators do not form an AH-submodule of the grade")]
    NotSubmodule,
    #[error("grade {grade}: quotient fails the AH-condition")]
    NotAH { grade: usize },
    #[error("level {grade} of the filtration is not nested or not H-closed")]
    NotNested { grade: usize },
    #[error("level {grade} is not induced from the grading")]
    NotInduced { grade: usize },
    #[error("projection onto B^{j} ⊗_H B^{k} is not surjective")]
    NotSurjective { j: usize, k: usize },
    #[error("induced product on B^{j} ⊗_H B^{k} is not well defined")]
    IllDefined { j: usize, k: usize },
    #[error("invalid Lie algebra: {0}")]
    Lie(String),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    Ah(#[from] AhError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A real-linear map between embedded modules, stored by its images of the
/// RREF basis of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    source: EmbeddedModule,
    target: EmbeddedModule,
    images: Vec<SparseVec>,
}

impl LinearMap {
    pub fn from_images(source: EmbeddedModule, target: EmbeddedModule, images: Vec<SparseVec>) -> Result<Self, HalgError> {
        if images.len() != source.dim() {
            return Err(HalgError::ImageCount { expected: source.dim(), got: images.len() });
        }
        Ok(LinearMap { source, target, images })
    }

    /// Restriction of an ambient-level map to the source.
    pub fn from_ambient(source: EmbeddedModule, target: EmbeddedModule, f: impl Fn(&SparseVec) -> SparseVec) -> Self {
        let images = source.subspace().basis().iter().map(f).collect();
        LinearMap { source, target, images }
    }

    pub fn source(&self) -> &EmbeddedModule {
        &self.source
    }

    pub fn target(&self) -> &EmbeddedModule {
        &self.target
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn apply(&self, v: &SparseVec) -> Result<SparseVec, HalgError> {
        let c = self.source.subspace().coordinates(v).ok_or(HalgError::NotInSource)?;
        let mut acc = Accumulator::new(self.target.ambient_dim());
        for (x, img) in c.iter().zip(&self.images) {
            if !x.is_zero() {
                acc.add_scaled(x, img);
            }
        }
        Ok(acc.take())
    }

    pub fn image_space(&self) -> Subspace {
        Subspace::span(self.target.ambient_dim(), &self.images)
    }

    pub fn lands_in_target(&self) -> bool {
        self.images.iter().all(|v| self.target.contains(v))
    }

    /// Commutes with left multiplication by `i1, i2, i3`.
    pub fn is_h_linear(&self) -> bool {
        self.source.subspace().basis().iter().zip(&self.images).all(|(b, img)| {
            (1..4).all(|a| matches!(self.apply(&left_mul_unit(a, b)), Ok(w) if w == left_mul_unit(a, img)))
        })
    }

    pub fn preserves_prime(&self) -> bool {
        self.source.prime().basis().iter().all(|v| matches!(self.apply(v), Ok(w) if self.target.prime().contains(&w)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, detail: Some(detail.into()) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }
}

/// A graded H-algebra truncated at `grades.len() - 1`, with products
/// `mult[(j, k)] : A^j ⊗_H A^k -> A^{j+k}` for `j + k <= K`.
///
/// Grades are indexed by tensor power; `weight` is the grade of the
/// generators, so power `k` sits in grade `weight * k`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    gen: AHModule,
    weight: usize,
    grades: Vec<EmbeddedModule>,
    mult: BTreeMap<(usize, usize), LinearMap>,
}

impl GradedAlgebra {
    pub fn new(gen: AHModule, weight: usize, grades: Vec<EmbeddedModule>, mult: BTreeMap<(usize, usize), LinearMap>) -> Self {
        GradedAlgebra { gen, weight, grades, mult }
    }

    pub fn gen(&self) -> &AHModule {
        &self.gen
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn truncation(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grades(&self) -> &[EmbeddedModule] {
        &self.grades
    }

    pub fn grade(&self, k: usize) -> Result<&EmbeddedModule, HalgError> {
        self.grades.get(k).ok_or(HalgError::BadGrade(k))
    }

    pub fn mult(&self, j: usize, k: usize) -> Result<&LinearMap, HalgError> {
        self.mult.get(&(j, k)).ok_or(HalgError::BadGrade(j + k))
    }

    pub fn replace_mult(&mut self, j: usize, k: usize, map: LinearMap) {
        self.mult.insert((j, k), map);
    }

    /// `(dim, dim')` per power.
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.grades.iter().map(EmbeddedModule::dims).collect()
    }

    /// `(dim, dim')` per weighted grade, zero off multiples of the weight.
    pub fn weighted_dims(&self) -> Vec<(usize, usize)> {
        let w = self.weight.max(1);
        (0..=w * self.truncation()).map(|g| if g % w == 0 { self.grades[g / w].dims() } else { (0, 0) }).collect()
    }
}

/// Number of layout blocks taken by grade `k`.
fn blocks_of(alg: &GradedAlgebra, k: usize) -> usize {
    alg.grades[k].layout().blocks().len()
}

/// `F^Q` truncated at power `k_max`, with products given by `σ_H`.
pub fn free_algebra(q: &AHModule, k_max: usize, budget: Budget) -> Result<GradedAlgebra, HalgError> {
    free_algebra_weighted(q, 1, k_max, budget)
}

/// `F^Q` with `Q` placed in grade `weight`, truncated at grade `max_grade`.
pub fn free_algebra_weighted(q: &AHModule, weight: usize, max_grade: usize, budget: Budget) -> Result<GradedAlgebra, HalgError> {
    let k_max = max_grade / weight.max(1);
    let grades = (0..=k_max).map(|k| sym_power(q, k, budget)).collect::<Result<Vec<_>, _>>()?;
    let mut mult = BTreeMap::new();
    for j in 0..=k_max {
        for k in 0..=k_max - j {
            let src = qtensor_embedded(&grades[j], &grades[k], budget)?;
            let layout = src.layout().clone();
            let map = LinearMap::from_ambient(src, grades[j + k].clone(), |v| sigma_h(v, &layout));
            mult.insert((j, k), map);
        }
    }
    Ok(GradedAlgebra { gen: q.clone(), weight, grades, mult })
}

/// Axiom A at the truncation: commutativity, associativity, identity, grading and the
/// morphism conditions on each product.
pub fn axiom_a_check(alg: &GradedAlgebra, budget: Budget) -> Result<CheckReport, HalgError> {
    let mut rep = CheckReport::default();
    let kk = alg.truncation();
    let g0 = &alg.grades[0];
    let one = SparseVec::unit(0);
    rep.push(Check::new("identity_not_in_prime", g0.contains(&one) && !g0.prime().contains(&one)));
    rep.push(Check::new("imaginary_identity_in_prime", (1..4).all(|a| g0.prime().contains(&left_mul_unit(a, &one)))));

    for ((j, k), m) in &alg.mult {
        let (j, k) = (*j, *k);
        rep.push(Check::new(format!("grading({j},{k})"), m.lands_in_target() && m.target() == &alg.grades[j + k]));
        rep.push(Check::new(format!("morphism({j},{k})"), m.is_h_linear() && m.preserves_prime()));
    }

    for k in 0..=kk {
        let a = &alg.grades[k];
        // with H in grade 0, the tensor 1 ⊗ a has the coordinates of a
        let left = alg.mult(0, k)?;
        let right = alg.mult(k, 0)?;
        let ok = a.subspace().basis().iter().all(|v| left.apply(v).as_ref() == Ok(v) && right.apply(v).as_ref() == Ok(v));
        rep.push(Check::new(format!("identity({k})"), ok));
    }

    for j in 1..=kk {
        for k in j..=kk - j {
            let m = alg.mult(j, k)?;
            let mt = alg.mult(k, j)?;
            let split = blocks_of(alg, j);
            let layout = m.source().layout().clone();
            let mut bad = None;
            for (i, z) in m.source().subspace().basis().iter().enumerate() {
                let lhs = &m.images()[i];
                match mt.apply(&swap_blocks(z, &layout, split)) {
                    Ok(rhs) if &rhs == lhs => {}
                    _ => {
                        bad = Some(i);
                        break;
                    }
                }
            }
            let name = if j == 1 && k == 1 { "commutativity(1,1): alternating part in kernel".to_string() } else { format!("commutativity({j},{k})") };
            rep.push(match bad {
                None => Check::new(name, true),
                Some(i) => Check::failed(name, format!("basis element {i} of the source")),
            });
        }
    }

    for i in 1..=kk {
        for j in 1..=kk - i {
            for k in 1..=kk - i - j {
                rep.push(associativity(alg, i, j, k, budget)?);
            }
        }
    }
    Ok(rep)
}

fn associativity(alg: &GradedAlgebra, i: usize, j: usize, k: usize, budget: Budget) -> Result<Check, HalgError> {
    let name = format!("associativity({i},{j},{k})");
    let ij = qtensor_embedded(&alg.grades[i], &alg.grades[j], budget)?;
    let triple = qtensor_embedded(&ij, &alg.grades[k], budget)?;
    let layout = triple.layout();
    let (bi, bj, bk) = (blocks_of(alg, i), blocks_of(alg, j), blocks_of(alg, k));
    let m_ij = alg.mult(i, j)?;
    let m_jk = alg.mult(j, k)?;
    let m_left = alg.mult(i + j, k)?;
    let m_right = alg.mult(i, j + k)?;
    for (n, z) in triple.subspace().basis().iter().enumerate() {
        let mut failed = false;
        let l = apply_on_blocks(z, layout, 0..bi + bj, alg.grades[i + j].layout(), |s| {
            m_ij.apply(s).unwrap_or_else(|_| {
                failed = true;
                SparseVec::new()
            })
        });
        let r = apply_on_blocks(z, layout, bi..bi + bj + bk, alg.grades[j + k].layout(), |s| {
            m_jk.apply(s).unwrap_or_else(|_| {
                failed = true;
                SparseVec::new()
            })
        });
        if failed {
            return Ok(Check::failed(name, format!("partial product of basis element {n} left the product domain")));
        }
        match (m_left.apply(&l), m_right.apply(&r)) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => return Ok(Check::failed(name, format!("basis element {n}"))),
        }
    }
    Ok(Check::new(name, true))
}

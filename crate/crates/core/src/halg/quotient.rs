use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ahmod::present;
use crate::exactq::{Accumulator, Rational, Reducer, SparseVec, Subspace};
use crate::qtensor::{qtensor_embedded, Block, BlockMap, Budget, EmbeddedModule, Layout};

use super::{GradedAlgebra, HalgError, IdealData, LinearMap};

/// `A^k -> B^k`: either the identity or `v -> (sum_x xi_l[x] v[4x+h])_{l,h}` for real
/// functionals `xi_l` on the positions of the grade layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    identity: bool,
    out_size: usize,
    cols: BlockMap,
}

impl Projection {
    fn identity(n: usize) -> Self {
        Projection { identity: true, out_size: n, cols: (0..n).map(|x| vec![(x, Rational::one())]).collect() }
    }

    fn from_functionals(n: usize, xi: &[SparseVec]) -> Self {
        let mut cols: BlockMap = vec![Vec::new(); n];
        for (l, f) in xi.iter().enumerate() {
            for (x, w) in f.iter() {
                cols[x].push((l, w.clone()));
            }
        }
        Projection { identity: false, out_size: xi.len(), cols }
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Number of output positions.
    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        if self.identity {
            return v.clone();
        }
        let mut acc = Accumulator::new(4 * self.out_size);
        for (j, x) in v.iter() {
            for (l, w) in &self.cols[j / 4] {
                acc.add_entry(4 * l + j % 4, &(x * w));
            }
        }
        acc.take()
    }

    /// `p ⊗ q` on `H ⊗ W_p ⊗ W_q`, positions of the second factor fastest.
    fn apply_pair(&self, other: &Projection, v: &SparseVec) -> SparseVec {
        let nq = other.cols.len();
        let mq = other.out_size;
        let mut pairs = Vec::new();
        for (j, x) in v.iter() {
            let (a, b) = ((j / 4) / nq, (j / 4) % nq);
            for (l, w) in &self.cols[a] {
                for (l2, w2) in &other.cols[b] {
                    pairs.push(((4 * (l * mq + l2) + j % 4) as u32, &(x * w) * w2));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeExactness {
    pub grade: usize,
    pub parent: (usize, usize),
    pub ideal: (usize, usize),
    pub quotient: (usize, usize),
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub algebra: GradedAlgebra,
    pub projections: Vec<Projection>,
    pub exactness: Vec<GradeExactness>,
}

impl QuotientAlgebra {
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.algebra.dims()
    }
}

/// Real functionals on the positions of `n` killing every vector of `s` in all four components.
fn annihilator(n: usize, s: &Subspace) -> Subspace {
    let eqs = s.basis().iter().flat_map(|v| {
        (0..4).map(move |h| SparseVec::from_sorted(v.iter().filter(|(j, _)| j % 4 == h).map(|(j, x)| ((j / 4) as u32, x.clone())).collect()))
    });
    Subspace::from_equations_owned(n, eqs.filter(|e| !e.is_zero()))
}

/// `B = A / I` gradewise, realised through real functionals vanishing on `I^k`.
/// Grades where `I^k = 0` are kept as they are.
pub fn quotient_algebra(alg: &GradedAlgebra, ideal: &IdealData, budget: Budget) -> Result<QuotientAlgebra, HalgError> {
    let kk = alg.truncation();
    let mut grades = Vec::with_capacity(kk + 1);
    let mut projections = Vec::with_capacity(kk + 1);
    let mut exactness = Vec::with_capacity(kk + 1);
    for k in 0..=kk {
        let a = &alg.grades()[k];
        let i = &ideal.grades[k];
        let n = a.layout().size();
        let (b, p) = if i.dim() == 0 {
            (a.clone(), Projection::identity(n))
        } else {
            let xi = annihilator(n, i.subspace()).quotient_basis(&annihilator(n, a.subspace()))?;
            let p = Projection::from_functionals(n, &xi);
            let m = xi.len();
            let space = a.subspace().map(4 * m, |v| p.apply(v));
            let prime = a.prime().map(4 * m, |v| p.apply(v));
            if space.dim() + i.dim() != a.dim() {
                return Err(HalgError::NotAH { grade: k });
            }
            let pres = present(&space, &prime).map_err(|_| HalgError::NotAH { grade: k })?;
            (EmbeddedModule::with_prime(Layout::new(vec![Block::plain(m)]), vec![pres.module.clone()], space, prime), p)
        };
        let exact = b.dim() + i.dim() == a.dim() && b.prime_dim() + i.prime_dim() == a.prime_dim();
        exactness.push(GradeExactness { grade: k, parent: a.dims(), ideal: i.dims(), quotient: b.dims(), exact });
        grades.push(b);
        projections.push(p);
    }

    let mut mult = BTreeMap::new();
    for j in 0..=kk {
        for k in 0..=kk - j {
            let m = induced_product(alg, &grades, &projections, j, k, budget)?;
            mult.insert((j, k), m);
        }
    }
    Ok(QuotientAlgebra { algebra: GradedAlgebra::new(alg.gen().clone(), alg.weight(), grades, mult), projections, exactness })
}

/// `μ^B = p ∘ μ^A ∘ (p ⊗ p)^{-1}`, after checking that `p ⊗ p` is onto and that its kernel is sent to zero.
fn induced_product(alg: &GradedAlgebra, grades: &[EmbeddedModule], proj: &[Projection], j: usize, k: usize, budget: Budget) -> Result<LinearMap, HalgError> {
    let src_b = qtensor_embedded(&grades[j], &grades[k], budget)?;
    let target = grades[j + k].clone();
    let ma = alg.mult(j, k)?;
    let pt = &proj[j + k];
    if proj[j].is_identity() && proj[k].is_identity() {
        let images = src_b.subspace().basis().iter().map(|v| ma.apply(v).map(|w| pt.apply(&w))).collect::<Result<Vec<_>, _>>()?;
        return LinearMap::from_images(src_b, target, images);
    }
    let nt = src_b.ambient_dim();
    let src_a = ma.source().subspace();
    let pushed: Vec<SparseVec> = ma.images().iter().map(|w| pt.apply(w)).collect();
    let mut red = Reducer::new(nt + src_a.dim());
    for (i, s) in src_a.basis().iter().enumerate() {
        let mut entries = proj[j].apply_pair(&proj[k], s).into_entries();
        entries.push(((nt + i) as u32, Rational::one()));
        red.insert(&SparseVec::from_sorted(entries));
    }
    let combine = |coeffs: &SparseVec, sign: bool| {
        let mut acc = Accumulator::new(target.ambient_dim());
        for (c, x) in coeffs.iter() {
            let x = if sign { -x } else { x.clone() };
            acc.add_scaled(&x, &pushed[c - nt]);
        }
        acc.take()
    };
    for r in red.rows() {
        if r.leading().is_some_and(|(c, _)| c >= nt) && !combine(r, false).is_zero() {
            return Err(HalgError::IllDefined { j, k });
        }
    }
    let mut images = Vec::with_capacity(src_b.dim());
    for b in src_b.subspace().basis() {
        let res = red.reduce(b);
        if res.leading().is_some_and(|(c, _)| c < nt) {
            return Err(HalgError::NotSurjective { j, k });
        }
        images.push(combine(&res, true));
    }
    LinearMap::from_images(src_b, target, images)
}

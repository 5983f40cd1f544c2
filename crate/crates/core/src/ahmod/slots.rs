use crate::exactq::{basis_product, Quaternion, Rational, Reducer, SparseVec, Subspace};

use super::{AHModule, AhError};

/// Left multiplication by the basis unit `e_a` on every quaternionic slot.
pub fn left_mul_unit(a: usize, v: &SparseVec) -> SparseVec {
    if a == 0 {
        return v.clone();
    }
    let mut out: Vec<(u32, Rational)> = Vec::with_capacity(v.nnz());
    let entries = v.entries();
    let mut k = 0;
    while k < entries.len() {
        let slot = entries[k].0 / 4;
        let mut block: Vec<(u32, Rational)> = Vec::with_capacity(4);
        while k < entries.len() && entries[k].0 / 4 == slot {
            let (idx, x) = &entries[k];
            let b = (*idx % 4) as usize;
            let (s, h) = basis_product(a, b);
            block.push((slot * 4 + h as u32, if s > 0 { x.clone() } else { -x }));
            k += 1;
        }
        block.sort_by_key(|e| e.0);
        out.extend(block);
    }
    SparseVec::from_sorted(out)
}

/// Left multiplication by `q` on every quaternionic slot.
pub fn left_mul(q: &Quaternion, v: &SparseVec) -> SparseVec {
    let mut pairs = Vec::with_capacity(4 * v.nnz());
    for (idx, x) in v.iter() {
        let (slot, b) = (idx / 4, idx % 4);
        for a in 0..4 {
            if q.c[a].is_zero() {
                continue;
            }
            let (s, h) = basis_product(a, b);
            let p = &q.c[a] * x;
            pairs.push(((4 * slot + h) as u32, if s > 0 { p } else { -p }));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// H-span of a set of vectors in an ambient with quaternionic slots.
pub fn h_span<'a>(ambient: usize, vs: impl IntoIterator<Item = &'a SparseVec>) -> Subspace {
    let mut red = Reducer::new(ambient);
    for v in vs {
        for a in 0..4 {
            red.insert(&left_mul_unit(a, v));
        }
    }
    Subspace::from_rref_unchecked(ambient, red.into_rows())
}

pub fn is_h_closed(w: &Subspace) -> bool {
    w.ambient_dim() % 4 == 0 && w.basis().iter().all(|r| (1..4).all(|a| w.contains(&left_mul_unit(a, r))))
}

/// An H-closed subspace `W` of a slotted ambient together with an H-basis,
/// giving the isomorphism `H^n -> W`, `u -> sum_i u_i g_i`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub module: AHModule,
    space: Subspace,
    prime: Subspace,
    generators: Vec<SparseVec>,
    pivots: Vec<usize>,
    inverse: Vec<SparseVec>,
}

/// Greedy H-basis extraction: walk the RREF basis of `w` in pivot order and
/// keep each vector not yet in the H-span of those kept.
pub fn present(w: &Subspace, wprime: &Subspace) -> Result<Presentation, AhError> {
    if wprime.ambient_dim() != w.ambient_dim() {
        return Err(AhError::Dimension { expected: w.ambient_dim(), got: wprime.ambient_dim() });
    }
    if w.ambient_dim() % 4 != 0 || w.dim() % 4 != 0 {
        return Err(AhError::NotHClosed);
    }
    let ambient = w.ambient_dim();
    let mut red = Reducer::new(ambient);
    let mut generators = Vec::new();
    for r in w.basis() {
        if red.rank() == w.dim() {
            break;
        }
        if red.reduce(r).is_zero() {
            continue;
        }
        for a in 0..4 {
            let m = left_mul_unit(a, r);
            if !w.contains(&m) {
                return Err(AhError::NotHClosed);
            }
            red.insert(&m);
        }
        generators.push(r.clone());
    }
    if red.rank() != w.dim() {
        return Err(AhError::NotHClosed);
    }
    if !w.contains_subspace(wprime) {
        return Err(AhError::PrimeNotContained);
    }
    let n = generators.len();
    let pivots = w.pivots();
    // [G | I] -> [I | G^-1], G = real basis restricted to the pivot columns of W
    let mut aug = Reducer::new(8 * n);
    for (i, g) in generators.iter().enumerate() {
        for a in 0..4 {
            let e = left_mul_unit(a, g);
            let mut entries: Vec<(u32, Rational)> =
                pivots.iter().enumerate().filter_map(|(k, p)| e.get(*p).map(|x| (k as u32, x.clone()))).collect();
            entries.push(((4 * n + 4 * i + a) as u32, Rational::one()));
            aug.insert(&SparseVec::from_sorted(entries));
        }
    }
    let inverse: Vec<SparseVec> = aug
        .into_rows()
        .into_iter()
        .map(|r| SparseVec::from_sorted(r.into_entries().into_iter().filter(|e| e.0 as usize >= 4 * n).map(|(j, x)| (j - 4 * n as u32, x)).collect()))
        .collect();
    debug_assert_eq!(inverse.len(), 4 * n);
    let mut p = Presentation {
        module: AHModule::zero(),
        space: w.clone(),
        prime: wprime.clone(),
        generators,
        pivots,
        inverse,
    };
    let uprime = Subspace::span_owned(4 * n, wprime.basis().iter().map(|v| p.coords(v)));
    p.module = AHModule::new(n, uprime)?;
    Ok(p)
}

impl Presentation {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn prime(&self) -> &Subspace {
        &self.prime
    }

    pub fn generators(&self) -> &[SparseVec] {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    /// `u -> sum_i u_i g_i`.
    pub fn embed(&self, u: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (idx, x) in u.iter() {
            let (i, a) = (idx / 4, idx % 4);
            acc = acc.sub_scaled(&-x, &left_mul_unit(a, &self.generators[i]));
        }
        acc
    }

    /// Inverse of `embed` on `W`; the input is assumed to lie in `W`.
    pub fn coords(&self, w: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (k, p) in self.pivots.iter().enumerate() {
            if let Some(x) = w.get(*p) {
                acc = acc.sub_scaled(&-x, &self.inverse[k]);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_mul_agrees_with_quaternion_product() {
        let q = Quaternion::from_ints([1, -2, 0, 3]);
        let p = Quaternion::from_ints([2, 1, -1, 4]);
        let v = SparseVec::from_dense(&[vec![Rational::zero(); 4], p.c.to_vec()].concat());
        let out = left_mul(&q, &v).to_dense(8);
        assert_eq!(out[4..].to_vec(), (&q * &p).c.to_vec());
        for a in 0..4 {
            assert_eq!(left_mul_unit(a, &v), left_mul(&Quaternion::unit(a), &v));
        }
    }

    #[test]
    fn presentation_round_trips() {
        // W = H·(1, i1) ⊂ H^2
        let g = SparseVec::from_dense(&[1, 0, 0, 0, 0, 1, 0, 0].map(Rational::from_int));
        let w = h_span(8, [&g]);
        assert_eq!(w.dim(), 4);
        let wp = w.intersect(&Subspace::from_equations_owned(8, [SparseVec::unit(0), SparseVec::unit(4)])).unwrap();
        let p = present(&w, &wp).unwrap();
        assert_eq!(p.module.rank(), 1);
        for v in w.basis() {
            assert_eq!(p.embed(&p.coords(v)), *v);
        }
        assert_eq!(p.module.uprime().dim(), wp.dim());
    }

    #[test]
    fn non_closed_subspace_rejected() {
        let w = Subspace::span_owned(4, [SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(2), SparseVec::unit(3)]);
        assert!(is_h_closed(&w));
        let half = Subspace::span_owned(8, [0, 1, 2, 4].map(SparseVec::unit));
        assert!(!is_h_closed(&half));
        assert!(matches!(present(&half, &Subspace::zero(8)), Err(AhError::NotHClosed)));
    }
}

use std::collections::HashMap;

use crate::exactq::{kernel_of_equation_iter, Accumulator, Rational, SparseVec, Subspace};

use super::layout::{stabilizer_order, Block, Kind, Layout};

/// Elements of `s` whose real (`h = 0`) coordinates all vanish.
pub fn prime_part(s: &Subspace) -> Subspace {
    let mut cols: HashMap<usize, Vec<(u32, Rational)>> = HashMap::new();
    for (i, r) in s.basis().iter().enumerate() {
        for (j, v) in r.iter() {
            if j % 4 == 0 {
                cols.entry(j).or_default().push((i as u32, v.clone()));
            }
        }
    }
    let mut keys: Vec<usize> = cols.keys().copied().collect();
    keys.sort_unstable();
    let eqs = keys.into_iter().map(|k| SparseVec::from_sorted(cols.remove(&k).unwrap()));
    let kernel = kernel_of_equation_iter(s.dim(), eqs);
    Subspace::from_rref_unchecked(s.ambient_dim(), kernel.iter().map(|k| s.combine(&k.to_dense(s.dim()))).collect())
}

/// For each non-pivot column of `s`, the pivot columns it depends on:
/// `x ∈ s` iff `x[c] = sum_r s_r[c] x[pivot_r]` for every non-pivot `c`.
fn dependency_columns(s: &Subspace) -> Vec<(usize, Vec<(usize, Rational)>)> {
    let n = s.ambient_dim();
    let pivots = s.pivots();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut deps: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (r, row) in s.basis().iter().enumerate() {
        for (c, v) in row.iter().skip(1) {
            deps[c].push((pivots[r], v.clone()));
        }
    }
    deps.into_iter().enumerate().filter(|(c, _)| !is_pivot[*c]).collect()
}

/// `(A ⊗ Y) ∩ (X ⊗ B)` inside `H ⊗ X ⊗ Y`, for `A ⊂ H ⊗ X` and `B ⊂ H ⊗ Y`.
///
/// The side with fewer unknowns is parametrized and the other side's
/// membership equations are imposed slice by slice.
pub fn tensor_solve(a: &Subspace, la: &Layout, b: &Subspace, lb: &Layout) -> Subspace {
    let out_dim = 4 * la.size() * lb.size();
    if a.is_zero() || b.is_zero() {
        return Subspace::zero(out_dim);
    }
    if a.dim() * lb.size() <= b.dim() * la.size() {
        solve_sided(a, la.size(), b, lb.size(), true)
    } else {
        solve_sided(b, lb.size(), a, la.size(), false)
    }
}

fn solve_sided(p: &Subspace, np: usize, c: &Subspace, nc: usize, p_first: bool) -> Subspace {
    let out = |pp: usize, cp: usize, h: usize| if p_first { (pp * nc + cp) * 4 + h } else { (cp * np + pp) * 4 + h };
    let pivots = p.pivots();
    // unknown (i, cp) is the coefficient of p_i ⊗ e_cp; order by leading coordinate
    let mut unknowns: Vec<(usize, usize, usize)> = Vec::with_capacity(p.dim() * nc);
    for (i, piv) in pivots.iter().enumerate() {
        for cp in 0..nc {
            unknowns.push((out(piv / 4, cp, piv % 4), i, cp));
        }
    }
    unknowns.sort_unstable();
    let m = unknowns.len();
    let mut slot = vec![0u32; m];
    for (u, &(_, i, cp)) in unknowns.iter().enumerate() {
        slot[i * nc + cp] = u as u32;
    }
    let unk = |i: usize, cp: usize| slot[i * nc + cp];

    // entries of the parametrizing basis grouped by their X-position
    let mut by_pos: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); np];
    for (i, r) in p.basis().iter().enumerate() {
        for (j, v) in r.iter() {
            by_pos[j / 4].push((i, j % 4, v.clone()));
        }
    }
    let deps = dependency_columns(c);

    let eqs = by_pos.iter().filter(|e| !e.is_empty()).flat_map(|entries| {
        let mut at_h: [Vec<(usize, &Rational)>; 4] = Default::default();
        for (i, h, v) in entries {
            at_h[*h].push((*i, v));
        }
        let deps = &deps;
        deps.iter().filter_map(move |(col, rows)| {
            let (cp, h) = (col / 4, col % 4);
            let mut pairs: Vec<(u32, Rational)> = Vec::new();
            for (i, v) in &at_h[h] {
                pairs.push((unk(*i, cp), (*v).clone()));
            }
            for (pc, w) in rows {
                let (cr, hr) = (pc / 4, pc % 4);
                for (i, v) in &at_h[hr] {
                    pairs.push((unk(*i, cr), -(w * *v)));
                }
            }
            if pairs.is_empty() {
                None
            } else {
                Some(SparseVec::from_pairs(pairs))
            }
        })
    });
    let kernel = kernel_of_equation_iter(m, eqs);

    let n_out = 4 * np * nc;
    let mut acc = Accumulator::new(n_out);
    let rows = kernel
        .iter()
        .map(|k| {
            for (u, x) in k.iter() {
                let (_, i, cp) = unknowns[u];
                for (j, v) in p.basis()[i].iter() {
                    acc.add_entry(out(j / 4, cp, j % 4), &(x * v));
                }
            }
            acc.take()
        })
        .collect();
    Subspace::from_rref_unchecked(n_out, rows)
}

/// `{T in H ⊗ block(d, k) : every last-slot slice of T lies in prev}` for
/// `prev ⊂ H ⊗ block(d, k-1)` of the same kind.
pub fn power_solve(prev: &Subspace, d: usize, k: usize, kind: Kind) -> Subspace {
    let target = Block::new(d, k, kind);
    let lower = Block::new(d, k - 1, kind);
    let m = 4 * target.count();
    let deps = dependency_columns(prev);
    // slice_x(pos) -> (target position, sign)
    let slice = |x: usize, pos: usize| -> Option<(usize, i8)> {
        let mut t = lower.tuple(pos).to_vec();
        t.push(x as u16);
        target.compress(&t)
    };
    let eqs = (0..d).flat_map(|x| {
        let deps = &deps;
        let slice = &slice;
        deps.iter().filter_map(move |(col, rows)| {
            let mut pairs: Vec<(u32, Rational)> = Vec::new();
            if let Some((tp, s)) = slice(x, col / 4) {
                pairs.push(((4 * tp + col % 4) as u32, Rational::from_int(s as i64)));
            }
            for (pc, w) in rows {
                if let Some((tp, s)) = slice(x, pc / 4) {
                    pairs.push(((4 * tp + pc % 4) as u32, if s > 0 { -w } else { w.clone() }));
                }
            }
            if pairs.is_empty() {
                None
            } else {
                Some(SparseVec::from_pairs(pairs))
            }
        })
    });
    Subspace::from_rref_unchecked(m, kernel_of_equation_iter(m, eqs))
}

/// Symmetrization into `H ⊗ S^k` for a layout whose blocks all share the dimension `d`.
///
/// Uses `out[M] = (prod_c M_c! / k!) sum_{s -> M} v[s] prod_b w(s_b)` with `w`
/// the orbit weight of each block.
pub fn symmetrize(v: &SparseVec, src: &Layout, target: &Block) -> SparseVec {
    let k = src.order();
    debug_assert_eq!(target.len, k);
    let kfact: u128 = (1..=k as u128).product();
    let mut pairs: Vec<(u32, Rational)> = Vec::new();
    let mut cache: HashMap<usize, Option<(usize, Rational)>> = HashMap::new();
    for (j, x) in v.iter() {
        let pos = j / 4;
        let entry = cache.entry(pos).or_insert_with(|| {
            let idx = src.split(pos);
            let mut w = Rational::one();
            for (&i, b) in idx.iter().zip(src.blocks()) {
                w = &w * &b.sym_weight(i);
            }
            if w.is_zero() {
                return None;
            }
            let mut t = src.tuple(pos);
            t.sort_unstable();
            let stab = stabilizer_order(&t);
            let factor = Rational::new(stab as i64, kfact as i64);
            Some((target.position(&t).expect("sorted tuple"), &w * &factor))
        });
        if let Some((tp, w)) = entry {
            pairs.push(((4 * *tp + j % 4) as u32, x * &*w));
        }
    }
    SparseVec::from_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_part_drops_real_directions() {
        let s = Subspace::full(8);
        let p = prime_part(&s);
        assert_eq!(p.dim(), 6);
        assert!(p.basis().iter().all(|r| r.get(0).is_none() && r.get(4).is_none()));
    }

    #[test]
    fn solve_with_full_factors_is_full() {
        let la = Layout::new(vec![Block::plain(2)]);
        let lb = Layout::new(vec![Block::plain(3)]);
        let t = tensor_solve(&Subspace::full(8), &la, &Subspace::full(12), &lb);
        assert_eq!(t, Subspace::full(24));
    }

    #[test]
    fn symmetrize_is_idempotent_on_sym_layout() {
        let blk = Block::sym(3, 2);
        let l = Layout::new(vec![blk.clone()]);
        let v = SparseVec::from_dense(&(0..24).map(|i| Rational::from_int(i % 5 - 2)).collect::<Vec<_>>());
        assert_eq!(symmetrize(&v, &l, &blk), v);
        let alt = Layout::new(vec![Block::alt(3, 2)]);
        let w = SparseVec::from_dense(&(0..12).map(|i| Rational::from_int(i + 1)).collect::<Vec<_>>());
        assert!(symmetrize(&w, &alt, &blk).is_zero());
    }
}

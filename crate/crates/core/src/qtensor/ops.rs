use std::collections::BTreeMap;
use std::ops::Range;

use crate::exactq::{Rational, SparseVec};

use super::layout::{Block, Layout};

/// `layout` with the blocks in `range` replaced by those of `sub`.
pub fn replace_blocks(layout: &Layout, range: Range<usize>, sub: &Layout) -> Layout {
    let b = layout.blocks();
    Layout::new(b[..range.start].iter().chain(sub.blocks()).chain(&b[range.end..]).cloned().collect())
}

/// Sub-layout made of the blocks in `range`.
pub fn sub_layout(layout: &Layout, range: Range<usize>) -> Layout {
    Layout::new(layout.blocks()[range].to_vec())
}

/// Applies `f` to every slice of `v` over the blocks in `range`, the other
/// block indices held fixed. `f` maps `H ⊗ range-blocks` into `H ⊗ out_sub`.
pub fn apply_on_blocks(
    v: &SparseVec,
    layout: &Layout,
    range: Range<usize>,
    out_sub: &Layout,
    mut f: impl FnMut(&SparseVec) -> SparseVec,
) -> SparseVec {
    let inner = sub_layout(layout, range.clone());
    let out = replace_blocks(layout, range.clone(), out_sub);
    let mut groups: BTreeMap<Vec<usize>, Vec<(u32, Rational)>> = BTreeMap::new();
    for (j, x) in v.iter() {
        let idx = layout.split(j / 4);
        let outer: Vec<usize> = idx[..range.start].iter().chain(&idx[range.end..]).copied().collect();
        let ipos = inner.pos(&idx[range.clone()]);
        groups.entry(outer).or_default().push(((4 * ipos + j % 4) as u32, x.clone()));
    }
    let mut pairs = Vec::new();
    for (outer, entries) in groups {
        let img = f(&SparseVec::from_pairs(entries));
        for (k, y) in img.iter() {
            let sub = out_sub.split(k / 4);
            let idx: Vec<usize> = outer[..range.start].iter().chain(&sub).chain(&outer[range.start..]).copied().collect();
            pairs.push(((4 * out.pos(&idx) + k % 4) as u32, y.clone()));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// Exchanges the block groups `[0, split)` and `[split, m)`.
pub fn swap_blocks(v: &SparseVec, layout: &Layout, split: usize) -> SparseVec {
    let b = layout.blocks();
    let out = Layout::new(b[split..].iter().chain(&b[..split]).cloned().collect());
    let pairs = v
        .iter()
        .map(|(j, x)| {
            let idx = layout.split(j / 4);
            let swapped: Vec<usize> = idx[split..].iter().chain(&idx[..split]).copied().collect();
            ((4 * out.pos(&swapped) + j % 4) as u32, x.clone())
        })
        .collect();
    SparseVec::from_pairs(pairs)
}

/// Sparse linear map on one block's index set: `cols[i]` lists `(image index, coefficient)`.
pub type BlockMap = Vec<Vec<(usize, Rational)>>;

/// Applies an independent linear map to each block index; `None` keeps the block.
pub fn apply_block_maps(v: &SparseVec, src: &Layout, dst: &Layout, maps: &[Option<&BlockMap>]) -> SparseVec {
    let mut pairs = Vec::new();
    for (j, x) in v.iter() {
        let idx = src.split(j / 4);
        let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::with_capacity(idx.len()), x.clone())];
        for (b, &i) in idx.iter().enumerate() {
            acc = match maps[b] {
                None => acc.into_iter().map(|(mut t, c)| { t.push(i); (t, c) }).collect(),
                Some(m) => acc.iter().flat_map(|(t, c)| m[i].iter().map(move |(l, w)| ([t.as_slice(), &[*l]].concat(), c * w))).collect(),
            };
        }
        for (t, c) in acc {
            pairs.push(((4 * dst.pos(&t) + j % 4) as u32, c));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// Rewrites a tensor stored in compressed blocks into the all-plain layout over the same duals.
pub fn expand_to_plain(v: &SparseVec, layout: &Layout) -> (SparseVec, Layout) {
    let plain = Layout::new(layout.blocks().iter().flat_map(|b| std::iter::repeat(Block::plain(b.d)).take(b.len)).collect());
    let mut pairs = Vec::new();
    for (j, x) in v.iter() {
        for (t, s) in layout.expand(j / 4) {
            let idx: Vec<usize> = t.iter().map(|&c| c as usize).collect();
            let y = if s > 0 { x.clone() } else { -x };
            pairs.push(((4 * plain.pos(&idx) + j % 4) as u32, y));
        }
    }
    (SparseVec::from_pairs(pairs), plain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn swap_twice_is_identity() {
        let l = Layout::new(vec![Block::plain(2), Block::sym(3, 2)]);
        let v = SparseVec::from_pairs((0..l.ambient_dim()).step_by(3).map(|i| (i as u32, r(i as i64 + 1))).collect());
        let w = swap_blocks(&v, &l, 1);
        let back = Layout::new(vec![Block::sym(3, 2), Block::plain(2)]);
        assert_eq!(swap_blocks(&w, &back, 1), v);
    }

    #[test]
    fn slices_see_inner_blocks() {
        let l = Layout::new(vec![Block::plain(2), Block::plain(3)]);
        // doubling the second factor on every slice doubles the tensor
        let v = SparseVec::from_pairs(vec![(5, r(1)), (17, r(-2))]);
        let w = apply_on_blocks(&v, &l, 1..2, &Layout::new(vec![Block::plain(3)]), |s| s.scale(&r(2)));
        assert_eq!(w, v.scale(&r(2)));
        // collapsing the first factor to a scalar sums slices
        let sum = apply_on_blocks(&v, &l, 0..1, &Layout::scalar(), |s| {
            SparseVec::from_pairs(s.iter().map(|(j, x)| ((j % 4) as u32, x.clone())).collect())
        });
        assert_eq!(sum.iter().count(), 1);
        assert_eq!(sum.get(4 + 1), Some(&r(-1)));
    }

    #[test]
    fn expansion_counts() {
        let l = Layout::new(vec![Block::sym(3, 2)]);
        let v = SparseVec::unit(4 * l.compress(&[0, 1]).unwrap().0);
        let (e, p) = expand_to_plain(&v, &l);
        assert_eq!(p.size(), 9);
        assert_eq!(e.nnz(), 2);
        let a = Layout::new(vec![Block::alt(3, 2)]);
        let (e, _) = expand_to_plain(&SparseVec::unit(0), &a);
        assert_eq!(e.entries().iter().map(|x| x.1.clone()).collect::<Vec<_>>(), vec![r(1), r(-1)]);
    }
}

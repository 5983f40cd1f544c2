use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::exactq::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Plain,
    Sym,
    Alt,
}

/// A group of `len` identical dual factors of dimension `d`, stored either as
/// all tuples (`Plain`, `len == 1`), sorted multisets (`Sym`) or strictly
/// increasing tuples (`Alt`). Tuples are enumerated lexicographically.
#[derive(Clone, Debug)]
pub struct Block {
    pub d: usize,
    pub len: usize,
    pub kind: Kind,
    tuples: Arc<Vec<Vec<u16>>>,
    index: Arc<HashMap<Vec<u16>, u32>>,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        (self.d, self.len, self.kind) == (other.d, other.len, other.kind)
    }
}

impl Eq for Block {}

fn enumerate(d: usize, len: usize, kind: Kind) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(d: usize, len: usize, kind: Kind, start: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in start..d {
            cur.push(x as u16);
            let next = match kind {
                Kind::Sym => x,
                Kind::Alt => x + 1,
                Kind::Plain => 0,
            };
            rec(d, len, kind, next, cur, out);
            cur.pop();
        }
    }
    rec(d, len, kind, 0, &mut cur, &mut out);
    out
}

impl Block {
    pub fn new(d: usize, len: usize, kind: Kind) -> Self {
        let kind = if len == 1 { Kind::Plain } else { kind };
        assert!(kind != Kind::Plain || len == 1, "plain blocks have length 1");
        let tuples = enumerate(d, len, kind);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Block { d, len, kind, tuples: Arc::new(tuples), index: Arc::new(index) }
    }

    pub fn plain(d: usize) -> Self {
        Self::new(d, 1, Kind::Plain)
    }

    pub fn sym(d: usize, k: usize) -> Self {
        Self::new(d, k, Kind::Sym)
    }

    pub fn alt(d: usize, k: usize) -> Self {
        Self::new(d, k, Kind::Alt)
    }

    pub fn count(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, i: usize) -> &[u16] {
        &self.tuples[i]
    }

    /// Index of a canonical tuple.
    pub fn position(&self, t: &[u16]) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    /// Canonical position and sign of an arbitrary tuple; `None` when the entry is forced to vanish.
    pub fn compress(&self, t: &[u16]) -> Option<(usize, i8)> {
        match self.kind {
            Kind::Plain => self.position(t).map(|p| (p, 1)),
            Kind::Sym => {
                let mut s = t.to_vec();
                s.sort_unstable();
                self.position(&s).map(|p| (p, 1))
            }
            Kind::Alt => {
                let mut s = t.to_vec();
                let mut sign = 1i8;
                // insertion sort tracking parity
                for i in 1..s.len() {
                    let mut j = i;
                    while j > 0 && s[j - 1] > s[j] {
                        s.swap(j - 1, j);
                        sign = -sign;
                        j -= 1;
                    }
                }
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                self.position(&s).map(|p| (p, sign))
            }
        }
    }

    /// Every full tuple represented by a canonical entry, with its sign.
    pub fn expand(&self, i: usize) -> Vec<(Vec<u16>, i8)> {
        let t = &self.tuples[i];
        match self.kind {
            Kind::Plain => vec![(t.clone(), 1)],
            Kind::Sym => distinct_permutations(t).into_iter().map(|p| (p, 1)).collect(),
            Kind::Alt => signed_permutations(t),
        }
    }

    /// Number of full tuples in the symmetric orbit weighted as in symmetrization:
    /// multinomial for `Sym`, 1 for `Plain`, 0 for `Alt` of length at least 2.
    pub fn sym_weight(&self, i: usize) -> Rational {
        match self.kind {
            Kind::Plain => Rational::one(),
            Kind::Alt => Rational::zero(),
            Kind::Sym => Rational::from_int(multinomial(&self.tuples[i]) as i64),
        }
    }

    /// Full ambient size this block stands for.
    pub fn full_count(&self) -> usize {
        self.d.pow(self.len as u32)
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of distinct arrangements of a sorted multiset.
pub fn multinomial(t: &[u16]) -> u128 {
    let mut out = factorial(t.len());
    let mut i = 0;
    while i < t.len() {
        let j = (i..t.len()).find(|&j| t[j] != t[i]).unwrap_or(t.len());
        out /= factorial(j - i);
        i = j;
    }
    out
}

/// Product of factorials of multiplicities of a sorted multiset.
pub fn stabilizer_order(t: &[u16]) -> u128 {
    factorial(t.len()) / multinomial(t)
}

fn distinct_permutations(t: &[u16]) -> Vec<Vec<u16>> {
    let mut cur = t.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn signed_permutations(t: &[u16]) -> Vec<(Vec<u16>, i8)> {
    let n = t.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| idx[a] > idx[b]).count();
        out.push((idx.iter().map(|&i| t[i]).collect(), if inversions % 2 == 0 { 1 } else { -1 }));
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| idx[i] < idx[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| idx[j] > idx[i]).unwrap();
        idx.swap(i, j);
        idx[i + 1..].reverse();
    }
    out
}

/// Ambient `H ⊗ B_1 ⊗ ... ⊗ B_m`; coordinate `4 * pos + h` with the first block most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    blocks: Vec<Block>,
    strides: Vec<usize>,
    size: usize,
}

impl Layout {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut strides = vec![0; blocks.len()];
        let mut size = 1;
        for (b, s) in blocks.iter().zip(strides.iter_mut()).rev() {
            *s = size;
            size *= b.count();
        }
        Layout { blocks, strides, size }
    }

    /// `H` alone.
    pub fn scalar() -> Self {
        Self::new(Vec::new())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of dual-factor positions.
    pub fn order(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }

    /// Number of block-index combinations.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ambient_dim(&self) -> usize {
        4 * self.size
    }

    /// Real dimension of the uncompressed tensor space.
    pub fn full_dim(&self) -> usize {
        4 * self.blocks.iter().map(Block::full_count).product::<usize>()
    }

    pub fn concat(&self, other: &Layout) -> Layout {
        Layout::new(self.blocks.iter().chain(other.blocks.iter()).cloned().collect())
    }

    pub fn pos(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn split(&self, mut pos: usize) -> Vec<usize> {
        let mut out = vec![0; self.blocks.len()];
        for (o, s) in out.iter_mut().zip(&self.strides) {
            *o = pos / s;
            pos %= s;
        }
        out
    }

    /// Concatenated full tuple of a position (canonical representatives).
    pub fn tuple(&self, pos: usize) -> Vec<u16> {
        self.split(pos).iter().zip(&self.blocks).flat_map(|(&i, b)| b.tuple(i).to_vec()).collect()
    }

    /// Position and sign of an arbitrary full tuple.
    pub fn compress(&self, t: &[u16]) -> Option<(usize, i8)> {
        let mut pos = 0;
        let mut sign = 1i8;
        let mut off = 0;
        for (b, s) in self.blocks.iter().zip(&self.strides) {
            let (p, sg) = b.compress(&t[off..off + b.len])?;
            pos += p * s;
            sign *= sg;
            off += b.len;
        }
        Some((pos, sign))
    }

    /// Whether `t` is the canonical representative of its position.
    pub fn is_canonical(&self, t: &[u16]) -> bool {
        let mut off = 0;
        for b in &self.blocks {
            let s = &t[off..off + b.len];
            let ok = match b.kind {
                Kind::Plain => true,
                Kind::Sym => s.windows(2).all(|w| w[0] <= w[1]),
                Kind::Alt => s.windows(2).all(|w| w[0] < w[1]),
            };
            if !ok {
                return false;
            }
            off += b.len;
        }
        true
    }

    /// All full tuples (with signs) represented by a position.
    pub fn expand(&self, pos: usize) -> Vec<(Vec<u16>, i8)> {
        let mut acc: Vec<(Vec<u16>, i8)> = vec![(Vec::new(), 1)];
        for (&i, b) in self.split(pos).iter().zip(&self.blocks) {
            let parts = b.expand(i);
            acc = acc.iter().flat_map(|(t, s)| parts.iter().map(move |(p, sp)| ([t.as_slice(), p].concat(), s * sp))).collect();
        }
        acc
    }
}

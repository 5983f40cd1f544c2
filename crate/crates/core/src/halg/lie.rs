use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ahmod::{y_module, AHModule};
use crate::exactq::{Rational, SparseVec, Subspace};
use crate::qtensor::layout::{multinomial, stabilizer_order};
use crate::qtensor::{
    alt_power, apply_on_blocks, expand_to_plain, iota_module, qtensor, qtensor_embedded, swap_blocks, sym_power, symmetrize, Block, Budget,
    EmbeddedModule, Layout,
};

use super::{Check, CheckReport, HalgError, LinearMap};

/// Real Lie algebra with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LieRepr", into = "LieRepr")]
pub struct LieAlgebra {
    c: Vec<Vec<Vec<Rational>>>,
}

#[derive(Serialize, Deserialize)]
struct LieRepr {
    structure_constants: Vec<Vec<Vec<Rational>>>,
}

impl TryFrom<LieRepr> for LieAlgebra {
    type Error = HalgError;
    fn try_from(r: LieRepr) -> Result<Self, HalgError> {
        LieAlgebra::new(r.structure_constants)
    }
}

impl From<LieAlgebra> for LieRepr {
    fn from(g: LieAlgebra) -> Self {
        LieRepr { structure_constants: g.c }
    }
}

impl LieAlgebra {
    pub fn new(c: Vec<Vec<Vec<Rational>>>) -> Result<Self, HalgError> {
        let m = c.len();
        if c.iter().any(|row| row.len() != m || row.iter().any(|v| v.len() != m)) {
            return Err(HalgError::Lie(format!("structure constants must be {m}x{m}x{m}")));
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if c[i][j][k] != -&c[j][i][k] {
                        return Err(HalgError::Lie(format!("c[{i}][{j}][{k}] is not antisymmetric")));
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for t in 0..m {
                        let mut s = Rational::zero();
                        for l in 0..m {
                            s += &(&c[i][j][l] * &c[l][k][t]);
                            s += &(&c[j][k][l] * &c[l][i][t]);
                            s += &(&c[k][i][l] * &c[l][j][t]);
                        }
                        if !s.is_zero() {
                            return Err(HalgError::Lie(format!("Jacobi identity fails for ({i},{j},{k}) in component {t}")));
                        }
                    }
                }
            }
        }
        Ok(LieAlgebra { c })
    }

    pub fn abelian(m: usize) -> Self {
        LieAlgebra { c: vec![vec![vec![Rational::zero(); m]; m]; m] }
    }

    /// `so(3)` with `[e_i, e_j] = ε_ijk e_k`.
    pub fn so3() -> Self {
        LieAlgebra { c: Self::so3_constants() }
    }

    pub fn so3_constants() -> Vec<Vec<Vec<Rational>>> {
        let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = Rational::one();
            c[j][i][k] = -Rational::one();
        }
        c
    }

    /// The nonabelian two-dimensional algebra `[e_1, e_2] = e_2`.
    pub fn solvable2() -> Self {
        let mut c = vec![vec![vec![Rational::zero(); 2]; 2]; 2];
        c[0][1][1] = Rational::one();
        c[1][0][1] = -Rational::one();
        LieAlgebra { c }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    /// Nonzero `(k, c_ij^k)`.
    fn bracket(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.c[i][j].iter().enumerate().filter(|(_, x)| !x.is_zero())
    }
}

/// `A_g = g ⊗ Y` with the bracket `ξ = [,] ⊗ id : A ⊗_H A -> A ⊗_H Y`.
///
/// The dual of `A` is indexed by `3a + y` with `a` the Lie index and `y` the index in `Y†`.
#[derive(Clone, Debug)]
pub struct HLAlgebra {
    pub lie: LieAlgebra,
    pub carrier: AHModule,
    pub y: AHModule,
    pub xi: LinearMap,
}

impl HLAlgebra {
    fn d(&self) -> usize {
        3 * self.lie.dim()
    }

    /// `ξ` on `H ⊗ A†* ⊗ A†*` (plain), landing in `H ⊗ A†* ⊗ Y†*`.
    pub fn xi_ambient(&self, v: &SparseVec) -> SparseVec {
        bracket_ambient(&self.lie, v)
    }

    fn pair_layout(&self) -> Layout {
        Layout::new(vec![Block::plain(self.d()), Block::plain(3)])
    }

    /// Factorization of `A ⊗_H A`, antisymmetry and Jacobi for `ξ`, and the morphism conditions.
    pub fn axioms(&self, budget: Budget) -> Result<CheckReport, HalgError> {
        let mut rep = CheckReport::default();
        let m = self.lie.dim();
        let d = self.d();
        let yy = qtensor(&self.y, &self.y, budget)?;
        let placed = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).flat_map(|(a, b)| {
            yy.subspace().basis().iter().map(move |r| r.map_indices(|j| 4 * ((3 * a + (j / 4) / 3) * d + 3 * b + (j / 4) % 3) + j % 4))
        });
        let factored = Subspace::span_owned(4 * d * d, placed);
        rep.push(Check::new("factorization", &factored == self.xi.source().subspace() && factored.dim() == m * m * yy.dim()));
        rep.push(Check::new("bracket_lands_in_target", self.xi.lands_in_target()));
        rep.push(Check::new("bracket_morphism", self.xi.is_h_linear() && self.xi.preserves_prime()));

        let s2 = sym_power(&self.carrier, 2, budget)?;
        let antisym = s2.subspace().basis().iter().all(|v| self.xi_ambient(&expand_to_plain(v, s2.layout()).0).is_zero());
        rep.push(Check::new("antisymmetry", antisym));

        let a3 = alt_power(&self.carrier, 3, budget)?;
        let out = self.pair_layout();
        let jacobi = a3.subspace().basis().iter().all(|v| {
            let (p, pl) = expand_to_plain(v, a3.layout());
            let inner = apply_on_blocks(&p, &pl, 1..3, &out, |s| self.xi_ambient(s));
            let mid = Layout::new(vec![Block::plain(d), Block::plain(d), Block::plain(3)]);
            apply_on_blocks(&inner, &mid, 0..2, &out, |s| self.xi_ambient(s)).is_zero()
        });
        rep.push(Check::new("jacobi", jacobi));
        Ok(rep)
    }
}

fn bracket_ambient(g: &LieAlgebra, v: &SparseVec) -> SparseVec {
    let d = 3 * g.dim();
    let mut pairs = Vec::new();
    for (j, x) in v.iter() {
        let (p, h) = (j / 4, j % 4);
        let (u, w) = (p / d, p % d);
        let (a, y1, b, y2) = (u / 3, u % 3, w / 3, w % 3);
        for (c, k) in g.bracket(a, b) {
            pairs.push(((4 * ((3 * c + y1) * 3 + y2) + h) as u32, x * k));
        }
    }
    SparseVec::from_pairs(pairs)
}

pub fn hl_from_lie(g: &LieAlgebra, budget: Budget) -> Result<HLAlgebra, HalgError> {
    let m = g.dim();
    if m == 0 {
        return Err(HalgError::Lie("zero-dimensional algebra".into()));
    }
    let y = y_module();
    let mut carrier = y.clone();
    for _ in 1..m {
        carrier = carrier.direct_sum(&y);
    }
    let aa = qtensor(&carrier, &carrier, budget)?;
    let ay = qtensor(&carrier, &y, budget)?;
    let xi = LinearMap::from_ambient(aa, ay, |v| bracket_ambient(g, v));
    Ok(HLAlgebra { lie: g.clone(), carrier, y, xi })
}

/// Brackets `ξ_{k,l} : S_H^k A ⊗_H S_H^l A -> S_H^{k+l-1} A ⊗_H Y` on the free algebra of an
/// HL-algebra, for `k + l <= K`, with the checks of the Poisson axioms.
#[derive(Clone, Debug)]
pub struct PoissonTables {
    pub tables: BTreeMap<(usize, usize), LinearMap>,
    pub checks: CheckReport,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// One copy of each distinct entry of a sorted tuple, with the tuple left after removing it.
fn removals(t: &[u16]) -> Vec<(u16, Vec<u16>)> {
    let mut out = Vec::new();
    for (i, &e) in t.iter().enumerate() {
        if i > 0 && t[i - 1] == e {
            continue;
        }
        let mut rest = t.to_vec();
        rest.remove(i);
        out.push((e, rest));
    }
    out
}

impl HLAlgebra {
    /// `kl σ_H ∘ (id ⊗ ξ ⊗ id)` on `H ⊗ S^k ⊗ S^l`, evaluated on canonical entries.
    fn xi_kl(&self, v: &SparseVec, layout: &Layout, k: usize, l: usize) -> SparseVec {
        let n = k + l - 1;
        let target = Block::sym(self.d(), n);
        let scale = Rational::new((k * l) as i64, factorial(n));
        let (b0, b1) = (&layout.blocks()[0], &layout.blocks()[1]);
        let mut pairs = Vec::new();
        for (j, x) in v.iter() {
            let idx = layout.split(j / 4);
            let (t, u) = (b0.tuple(idx[0]), b1.tuple(idx[1]));
            for (e1, s) in removals(t) {
                let ms = multinomial(&s) as i64;
                for (e2, s2) in removals(u) {
                    let w = Rational::from_int(ms * multinomial(&s2) as i64);
                    let (a, y1, b, y2) = (e1 as usize / 3, e1 as usize % 3, e2 as usize / 3, e2 as usize % 3);
                    for (c, cab) in self.lie.bracket(a, b) {
                        let mut mt: Vec<u16> = s.iter().chain(&s2).copied().collect();
                        mt.push((3 * c + y1) as u16);
                        mt.sort_unstable();
                        let coef = &(&(&scale * &Rational::from_int(stabilizer_order(&mt) as i64)) * &w) * &(cab * x);
                        let pos = target.position(&mt).expect("sorted tuple");
                        pairs.push(((4 * (pos * 3 + y2) + j % 4) as u32, coef));
                    }
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

pub fn poisson_on_free(hl: &HLAlgebra, k_max: usize, budget: Budget) -> Result<PoissonTables, HalgError> {
    let d = hl.d();
    let powers = (0..=k_max).map(|k| sym_power(&hl.carrier, k, budget)).collect::<Result<Vec<_>, _>>()?;
    let iy = iota_module(&hl.y);
    let targets = (0..k_max).map(|n| qtensor_embedded(&powers[n], &iy, budget)).collect::<Result<Vec<EmbeddedModule>, _>>()?;
    let mut tables = BTreeMap::new();
    for k in 0..=k_max {
        for l in 0..=k_max - k {
            if k + l == 0 {
                continue;
            }
            let src = qtensor_embedded(&powers[k], &powers[l], budget)?;
            let tgt = targets[k + l - 1].clone();
            let map = if k == 0 || l == 0 {
                LinearMap::from_images(src.clone(), tgt, vec![SparseVec::new(); src.dim()])?
            } else {
                let layout = src.layout().clone();
                LinearMap::from_ambient(src, tgt, |v| hl.xi_kl(v, &layout, k, l))
            };
            tables.insert((k, l), map);
        }
    }

    let mut checks = CheckReport::default();
    for ((k, l), m) in &tables {
        checks.push(Check::new(format!("lands_in_target({k},{l})"), m.lands_in_target()));
        if *k == 0 || *l == 0 {
            checks.push(Check::new(format!("identity_bracket({k},{l})"), m.images().iter().all(SparseVec::is_zero)));
            continue;
        }
        let other = &tables[&(*l, *k)];
        let split = powers[*k].layout().blocks().len();
        let layout = m.source().layout();
        let anti = m.source().subspace().basis().iter().zip(m.images()).all(|(z, img)| {
            matches!(other.apply(&swap_blocks(z, layout, split)), Ok(w) if w == img.neg())
        });
        checks.push(Check::new(format!("antisymmetry({k},{l})"), anti));
    }
    if let Some(x11) = tables.get(&(1, 1)) {
        let same = x11.source().subspace() == hl.xi.source().subspace() && x11.images() == hl.xi.images();
        checks.push(Check::new("bracket_11_is_xi", same));
    }
    if k_max >= 3 {
        let x21 = &tables[&(2, 1)];
        let out = hl.pair_layout();
        let mid = Layout::new(vec![Block::plain(d), Block::plain(d), Block::plain(3)]);
        let pair = Layout::new(vec![Block::plain(d), Block::plain(d)]);
        let sym2 = Block::sym(d, 2);
        let sym_out = Layout::new(vec![sym2.clone()]);
        let two = Rational::from_int(2);
        let ok = x21.source().subspace().basis().iter().zip(x21.images()).all(|(z, lhs)| {
            let (p, pl) = expand_to_plain(z, x21.source().layout());
            let inner = apply_on_blocks(&p, &pl, 1..3, &out, |s| hl.xi_ambient(s));
            let rhs = apply_on_blocks(&inner, &mid, 0..2, &sym_out, |s| symmetrize(s, &pair, &sym2));
            rhs.scale(&two) == *lhs
        });
        checks.push(Check::new("derivation", ok));
    }
    Ok(PoissonTables { tables, checks })
}

//! The Dirac–Fueter operator on homogeneous H-valued polynomials on flat `H`, its
//! kernels as AH-modules, and the `δ`-splitting of 2-forms on `R^{4n}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ahmod::{fingerprint, left_mul, present, AhError, IsoFingerprint, Presentation};
use crate::exactq::{basis_product, Quaternion, RatMatrix, Rational, SparseVec, Subspace};

/// `I_j` on covectors of `H`: `I_j dx_p = sum_q I[j][q][p] dx_q`, with `I_0 = id`.
fn complex_structures() -> [[[i64; 4]; 4]; 4] {
    let mut out = [[[0i64; 4]; 4]; 4];
    for p in 0..4 {
        out[0][p][p] = 1;
    }
    // I_j dx_0 = dx_j, I_1 dx_2 = dx_3, I_2 dx_3 = dx_1, I_3 dx_1 = dx_2
    for (j, a, b) in [(1, 0, 1), (2, 0, 2), (3, 0, 3), (1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        out[j][b][a] = 1;
        out[j][a][b] = -1;
    }
    out
}

/// Homogeneous degree-`k` polynomials in `x0..x3` with values in `H`; monomials are
/// ordered lexicographically by exponent tuple and coordinate `4m + h` is component `h`
/// of the coefficient of monomial `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpace {
    pub degree: usize,
    monomials: Vec<[u32; 4]>,
    index: BTreeMap<[u32; 4], usize>,
}

impl PolySpace {
    pub fn new(degree: usize) -> Self {
        let k = degree as u32;
        let mut monomials = Vec::new();
        for a in 0..=k {
            for b in 0..=k - a {
                for c in 0..=k - a - b {
                    monomials.push([a, b, c, k - a - b - c]);
                }
            }
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        PolySpace { degree, monomials, index }
    }

    pub fn monomials(&self) -> &[[u32; 4]] {
        &self.monomials
    }

    pub fn monomial_index(&self, m: &[u32; 4]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Real dimension, `4 C(k+3, 3)`.
    pub fn real_dim(&self) -> usize {
        4 * self.monomials.len()
    }

    /// Value at a real point.
    pub fn eval(&self, f: &SparseVec, x: &[Rational; 4]) -> Quaternion {
        let mut out = Quaternion::zero();
        for (idx, c) in f.iter() {
            let m = &self.monomials[idx / 4];
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                t *= &xi.pow(e);
            }
            out.c[idx % 4] += &t;
        }
        out
    }
}

/// `D : PolySpace(k) -> 1-forms with degree k-1 coefficients`, stored as one real
/// equation per output coordinate `4m' + q` (coefficient of `dx_q` at monomial `m'`).
#[derive(Clone, Debug)]
pub struct FueterOperator {
    pub source: PolySpace,
    pub target: PolySpace,
    rows: Vec<SparseVec>,
}

/// `d(x^m) = sum_p m_p x^{m - e_p} dx_p`, as `(p, m_p, index of m - e_p)`.
fn partials(tgt: &PolySpace, m: &[u32; 4]) -> Vec<(usize, i64, usize)> {
    (0..4)
        .filter(|&p| m[p] > 0)
        .map(|p| {
            let mut n = *m;
            n[p] -= 1;
            (p, m[p] as i64, tgt.monomial_index(&n).expect("lower degree monomial"))
        })
        .collect()
}

fn rows_from(n_out: usize, entries: Vec<(usize, u32, Rational)>) -> Vec<SparseVec> {
    let mut rows: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); n_out];
    for (r, c, x) in entries {
        rows[r].push((c, x));
    }
    rows.into_iter().map(SparseVec::from_pairs).collect()
}

impl FueterOperator {
    /// `D(a) = da_0 + I_1(da_1) + I_2(da_2) + I_3(da_3)`.
    pub fn new(k: usize) -> Self {
        let source = PolySpace::new(k);
        let target = PolySpace::new(k.saturating_sub(1));
        let is = complex_structures();
        let mut entries = Vec::new();
        if k > 0 {
            for (mi, m) in source.monomials.iter().enumerate() {
                for (p, mp, ti) in partials(&target, m) {
                    for (h, ih) in is.iter().enumerate() {
                        for q in 0..4 {
                            if ih[q][p] != 0 {
                                entries.push((4 * ti + q, (4 * mi + h) as u32, Rational::from_int(mp * ih[q][p])));
                            }
                        }
                    }
                }
            }
        }
        let rows = if k == 0 { Vec::new() } else { rows_from(target.real_dim(), entries) };
        FueterOperator { source, target, rows }
    }

    /// Real matrix rows, one per output coordinate.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn apply(&self, f: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(self.rows.iter().enumerate().map(|(i, r)| (i as u32, r.dot(f))).filter(|(_, x)| !x.is_zero()).collect())
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_equations(self.source.real_dim(), &self.rows)
    }

    /// `D(q a) = Q D(a)` on every basis element, with `Q = q_0 + sum q_j I_j` on 1-forms.
    pub fn is_equivariant(&self, q: &Quaternion) -> bool {
        let is = complex_structures();
        (0..self.source.real_dim()).all(|i| {
            let e = SparseVec::unit(i);
            let lhs = self.apply(&left_mul(q, &e));
            let de = self.apply(&e);
            let mut pairs = Vec::new();
            for (idx, x) in de.iter() {
                let (m, p) = (idx / 4, idx % 4);
                for (j, ij) in is.iter().enumerate() {
                    for r in 0..4 {
                        if ij[r][p] != 0 && !q.c[j].is_zero() {
                            pairs.push(((4 * m + r) as u32, &(&q.c[j] * x) * &Rational::from_int(ij[r][p])));
                        }
                    }
                }
            }
            lhs == SparseVec::from_pairs(pairs)
        })
    }
}

/// Kernel of `da - I_1(da) i_1 - I_2(da) i_2 - I_3(da) i_3` (H-valued 1-forms, right
/// multiplication by `i_j`).
pub fn alternative_kernel(k: usize) -> Subspace {
    let source = PolySpace::new(k);
    if k == 0 {
        return Subspace::full(source.real_dim());
    }
    let target = PolySpace::new(k - 1);
    let is = complex_structures();
    let mut entries = Vec::new();
    // output coordinate ((4 m' + q) * 4 + value component)
    for (mi, m) in source.monomials.iter().enumerate() {
        for (p, mp, ti) in partials(&target, m) {
            for h in 0..4 {
                let col = (4 * mi + h) as u32;
                entries.push((16 * ti + 4 * p + h, col, Rational::from_int(mp)));
                for (j, ij) in is.iter().enumerate().skip(1) {
                    let (s, hv) = basis_product(h, j);
                    for q in 0..4 {
                        if ij[q][p] != 0 {
                            entries.push((16 * ti + 4 * q + hv, col, Rational::from_int(-mp * ij[q][p] * s as i64)));
                        }
                    }
                }
            }
        }
    }
    Subspace::from_equations_owned(source.real_dim(), rows_from(4 * target.real_dim(), entries))
}

/// Degree-`k` q-holomorphic polynomials with their AH-structure: left multiplication,
/// primed part the imaginary-valued ones.
#[derive(Clone, Debug)]
pub struct FueterKernel {
    pub space: PolySpace,
    pub kernel: Subspace,
    pub prime: Subspace,
}

impl FueterKernel {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.kernel.dim(), self.prime.dim())
    }

    pub fn presentation(&self) -> Result<Presentation, AhError> {
        present(&self.kernel, &self.prime)
    }

    pub fn fingerprint(&self) -> Result<IsoFingerprint, AhError> {
        Ok(fingerprint(&self.presentation()?.module))
    }
}

fn imaginary_valued(n: usize) -> Subspace {
    Subspace::from_equations_owned(4 * n, (0..n).map(|m| SparseVec::unit(4 * m)))
}

pub fn fueter_kernel(k: usize) -> FueterKernel {
    let op = FueterOperator::new(k);
    let kernel = op.kernel();
    let prime = kernel.intersect(&imaginary_valued(op.source.monomials.len())).expect("same ambient");
    FueterKernel { space: op.source, kernel, prime }
}

/// Dimension of the kernel in degree `k` fixed by `f(x) -> f(-x)`, for `k = 0..=k_max`.
pub fn invariant_grades(k_max: usize) -> Vec<usize> {
    (0..=k_max)
        .map(|k| {
            let fk = fueter_kernel(k);
            let n = fk.space.real_dim();
            // (σ* - 1) f = 0, monomial by monomial
            let eqs = fk.space.monomials.iter().enumerate().flat_map(|(mi, m)| {
                let odd = m.iter().sum::<u32>() % 2 == 1;
                (0..4).filter(move |_| odd).map(move |h| SparseVec::unit(4 * mi + h))
            });
            let fixed = Subspace::from_equations_owned(n, eqs);
            fk.kernel.intersect(&fixed).expect("same ambient").dim()
        })
        .collect()
}

type Gaussian = BTreeMap<[u32; 4], (Rational, Rational)>;

fn gaussian_mul(a: &Gaussian, b: &Gaussian) -> Gaussian {
    let mut out: Gaussian = BTreeMap::new();
    for (ma, (ra, ia)) in a {
        for (mb, (rb, ib)) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
            let e = out.entry(m).or_insert((Rational::zero(), Rational::zero()));
            e.0 += &(&(ra * rb) - &(ia * ib));
            e.1 += &(&(ra * ib) + &(ia * rb));
        }
    }
    out
}

fn gaussian_pow(a: &Gaussian, e: usize) -> Gaussian {
    let mut out: Gaussian = BTreeMap::from([([0; 4], (Rational::one(), Rational::zero()))]);
    for _ in 0..e {
        out = gaussian_mul(&out, a);
    }
    out
}

/// `y + z i_j` for `y + z i = w_1^a w_2^{k-a}` and its multiple by `i`, where
/// `w_1, w_2` are `I_j`-holomorphic linear coordinates.
pub fn holomorphic_elements(k: usize, j: usize) -> Vec<SparseVec> {
    assert!((1..=3).contains(&j));
    let space = PolySpace::new(k);
    // w1 = x0 + i x_j, w2 = x_a + i x_b with I_j dx_a = dx_b
    let (a, b) = [(2, 3), (3, 1), (1, 2)][j - 1];
    let lin = |p: usize, q: usize| -> Gaussian {
        let mut e = [0; 4];
        e[p] = 1;
        let mut f = [0; 4];
        f[q] = 1;
        BTreeMap::from([(e, (Rational::one(), Rational::zero())), (f, (Rational::zero(), Rational::one()))])
    };
    let (w1, w2) = (lin(0, j), lin(a, b));
    let mut out = Vec::new();
    for s in 0..=k {
        let g = gaussian_mul(&gaussian_pow(&w1, s), &gaussian_pow(&w2, k - s));
        for rot in [false, true] {
            let mut pairs = Vec::new();
            for (m, (re, im)) in &g {
                let (y, z) = if rot { (-im, re.clone()) } else { (re.clone(), im.clone()) };
                let mi = space.monomial_index(m).expect("degree k");
                pairs.push(((4 * mi) as u32, y));
                pairs.push(((4 * mi + j) as u32, z));
            }
            out.push(SparseVec::from_pairs(pairs));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSplit {
    pub n: usize,
    /// Eigenvalue 3.
    pub plus: usize,
    /// Eigenvalue -1.
    pub minus: usize,
    /// `δ² = 2δ + 3` as an exact matrix identity.
    pub identity_holds: bool,
}

/// `δ = I_1⊗I_1 + I_2⊗I_2 + I_3⊗I_3` on `Λ²(R^{4n})*`.
pub fn delta_split(n: usize) -> DeltaSplit {
    let dim = 4 * n;
    let is = complex_structures();
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a + 1..dim).map(move |b| (a, b))).collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let act = |j: usize, a: usize| -> Vec<(usize, i64)> {
        let (blk, p) = (a / 4, a % 4);
        (0..4).filter(|&q| is[j][q][p] != 0).map(|q| (4 * blk + q, is[j][q][p])).collect()
    };
    let np = pairs.len();
    let mut delta = RatMatrix::zeros(np, np);
    for (col, &(a, b)) in pairs.iter().enumerate() {
        for j in 1..4 {
            for (c, s) in act(j, a) {
                for (d, t) in act(j, b) {
                    if c == d {
                        continue;
                    }
                    let (row, sign) = if c < d { (index[&(c, d)], s * t) } else { (index[&(d, c)], -s * t) };
                    delta[(row, col)] += &Rational::from_int(sign);
                }
            }
        }
    }
    let sq = delta.mul(&delta);
    let mut identity_holds = true;
    for r in 0..np {
        for c in 0..np {
            let mut rhs = &Rational::from_int(2) * &delta[(r, c)];
            if r == c {
                rhs += &Rational::from_int(3);
            }
            if sq[(r, c)] != rhs {
                identity_holds = false;
            }
        }
    }
    let eigen = |lam: i64| {
        let mut m = delta.clone();
        for i in 0..np {
            m[(i, i)] -= &Rational::from_int(lam);
        }
        np - m.rank()
    };
    DeltaSplit { n, plus: eigen(3), minus: eigen(-1), identity_holds }
}

#[cfg(test)]
mod tests;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rational;

/// Quaternion `r0 + r1 i1 + r2 i2 + r3 i3` with exact rational components.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub c: [Rational; 4],
}

// e_a * e_b = MUL_SIGN[a][b] * e_{MUL_INDEX[a][b]}
const MUL_INDEX: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
const MUL_SIGN: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]];

/// `e_a e_b = basis_product(a, b).0 * e_{basis_product(a, b).1}` for the basis `1, i1, i2, i3`.
pub fn basis_product(a: usize, b: usize) -> (i8, usize) {
    (MUL_SIGN[a][b], MUL_INDEX[a][b])
}

impl Quaternion {
    pub fn new(r0: Rational, r1: Rational, r2: Rational, r3: Rational) -> Self {
        Quaternion { c: [r0, r1, r2, r3] }
    }

    pub fn from_ints(v: [i64; 4]) -> Self {
        Quaternion { c: v.map(Rational::from_int) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    pub fn real(r: Rational) -> Self {
        Quaternion::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// Basis element: 0 gives 1, 1..=3 give i1..i3.
    pub fn unit(k: usize) -> Self {
        let mut q = Self::zero();
        q.c[k] = Rational::one();
        q
    }

    pub fn i1() -> Self {
        Self::unit(1)
    }

    pub fn i2() -> Self {
        Self::unit(2)
    }

    pub fn i3() -> Self {
        Self::unit(3)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    pub fn is_imaginary(&self) -> bool {
        self.c[0].is_zero()
    }

    pub fn re(&self) -> &Rational {
        &self.c[0]
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.c[0].clone(), -&self.c[1], -&self.c[2], -&self.c[3])
    }

    pub fn norm2(&self) -> Rational {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm2();
        if n.is_zero() {
            return None;
        }
        let inv = n.recip();
        let cj = self.conj();
        Some(cj.scale(&inv))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Quaternion { c: [&self.c[0] * s, &self.c[1] * s, &self.c[2] * s, &self.c[3] * s] }
    }

    /// Real 4x4 matrix `m` of `p -> self * p`, acting on row vectors: `(self*p)_j = sum_i p_i m[i][j]`.
    pub fn left_matrix(&self) -> [[Rational; 4]; 4] {
        let mut m: [[Rational; 4]; 4] = Default::default();
        for i in 0..4 {
            let col = self * &Quaternion::unit(i);
            m[i] = col.c;
        }
        m
    }

    /// Real 4x4 matrix of `p -> p * self`, same convention as `left_matrix`.
    pub fn right_matrix(&self) -> [[Rational; 4]; 4] {
        let mut m: [[Rational; 4]; 4] = Default::default();
        for i in 0..4 {
            let col = &Quaternion::unit(i) * self;
            m[i] = col.c;
        }
        m
    }
}

impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        let mut out = Quaternion::zero();
        for a in 0..4 {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if rhs.c[b].is_zero() {
                    continue;
                }
                let (s, k) = basis_product(a, b);
                let p = &self.c[a] * &rhs.c[b];
                if s > 0 {
                    out.c[k] += &p;
                } else {
                    out.c[k] -= &p;
                }
            }
        }
        out
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        &self * &rhs
    }
}

impl<'a> Add<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        Quaternion { c: [&self.c[0] + &rhs.c[0], &self.c[1] + &rhs.c[1], &self.c[2] + &rhs.c[2], &self.c[3] + &rhs.c[3]] }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        Quaternion { c: [&self.c[0] - &rhs.c[0], &self.c[1] - &rhs.c[1], &self.c[2] - &rhs.c[2], &self.c[3] - &rhs.c[3]] }
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        &self - &rhs
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        -&self
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {} i1 + {} i2 + {} i3)", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let (one, i1, i2, i3) = (Quaternion::one(), Quaternion::i1(), Quaternion::i2(), Quaternion::i3());
        assert_eq!(&i1 * &i2, i3);
        assert_eq!(&i2 * &i1, -&i3);
        assert_eq!(&i2 * &i3, i1);
        assert_eq!(&i3 * &i1, i2);
        for q in [&i1, &i2, &i3] {
            assert_eq!(q * q, -&one);
        }
    }

    #[test]
    fn conj_reverses_products() {
        let p = Quaternion::from_ints([1, -2, 3, 5]);
        let q = Quaternion::from_ints([-4, 1, 0, 7]);
        assert_eq!((&p * &q).conj(), &q.conj() * &p.conj());
        assert_eq!(&p * &p.inverse().unwrap(), Quaternion::one());
    }

    #[test]
    fn matrices_agree_with_product() {
        let q = Quaternion::from_ints([2, -1, 3, 4]);
        let p = Quaternion::from_ints([1, 5, -2, 1]);
        let l = q.left_matrix();
        let r = q.right_matrix();
        for j in 0..4 {
            let lj: Rational = (0..4).map(|i| &p.c[i] * &l[i][j]).sum();
            let rj: Rational = (0..4).map(|i| &p.c[i] * &r[i][j]).sum();
            assert_eq!(lj, (&q * &p).c[j]);
            assert_eq!(rj, (&p * &q).c[j]);
        }
    }
}

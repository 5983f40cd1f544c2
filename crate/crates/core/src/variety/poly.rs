use crate::exactq::{Accumulator, Rational, SparseVec};

/// Monomials of degree at most 2 in `n` variables: the constant, then `x_a`, then
/// `x_a x_b` for `a <= b` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomials {
    pub n: usize,
}

impl Monomials {
    pub fn new(n: usize) -> Self {
        Monomials { n }
    }

    pub fn count(&self) -> usize {
        1 + self.n + self.n * (self.n + 1) / 2
    }

    pub fn linear(&self, a: usize) -> usize {
        1 + a
    }

    pub fn quadratic(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        1 + self.n + a * (2 * self.n - a + 1) / 2 + (b - a)
    }

    /// Variables of monomial `i`.
    pub fn decode(&self, i: usize) -> Vec<usize> {
        if i == 0 {
            return Vec::new();
        }
        if i <= self.n {
            return vec![i - 1];
        }
        let mut r = i - 1 - self.n;
        for a in 0..self.n {
            let row = self.n - a;
            if r < row {
                return vec![a, a + r];
            }
            r -= row;
        }
        unreachable!("monomial index out of range")
    }

    /// Index of the monomial with the given variables (at most two).
    pub fn index(&self, vars: &[usize]) -> usize {
        match vars {
            [] => 0,
            [a] => self.linear(*a),
            [a, b] => self.quadratic(*a, *b),
            _ => panic!("degree above 2"),
        }
    }

    pub fn eval(&self, p: &SparseVec, v: &[Rational]) -> Rational {
        let mut out = Rational::zero();
        for (i, c) in p.iter() {
            let mut t = c.clone();
            for a in self.decode(i) {
                t *= &v[a];
            }
            out += &t;
        }
        out
    }

    pub fn gradient(&self, p: &SparseVec, v: &[Rational]) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); self.n];
        for (i, c) in p.iter() {
            match self.decode(i)[..] {
                [a] => g[a] += c,
                [a, b] => {
                    g[a] += &(c * &v[b]);
                    g[b] += &(c * &v[a]);
                }
                _ => {}
            }
        }
        g
    }

    /// `p(L w)` as a polynomial in `w`, where `rows[i]` expresses the old variable `x_i`
    /// through the new ones.
    pub fn substitute(&self, p: &SparseVec, rows: &[Vec<Rational>], target: Monomials) -> SparseVec {
        let mut acc = Accumulator::new(target.count());
        for (i, c) in p.iter() {
            match self.decode(i)[..] {
                [] => acc.add_entry(0, c),
                [a] => {
                    for (x, w) in rows[a].iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                        acc.add_entry(target.linear(x), &(c * w));
                    }
                }
                [a, b] => {
                    for (x, wa) in rows[a].iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                        let ca = c * wa;
                        for (y, wb) in rows[b].iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                            acc.add_entry(target.quadratic(x, y), &(&ca * wb));
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        acc.take()
    }
}

/// Printable form of a real quadratic, e.g. `x0*x3 - 2*x1 + 1/2`.
pub fn format_poly(m: &Monomials, p: &SparseVec, names: &dyn Fn(usize) -> String) -> String {
    let mut out = String::new();
    let mut terms: Vec<(usize, &Rational)> = p.iter().collect();
    terms.sort_by_key(|(i, _)| std::cmp::Reverse(m.decode(*i).len()));
    for (i, c) in terms {
        let vars = m.decode(i);
        let neg = c.signum() < 0;
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = vars.iter().map(|&a| names(a)).collect::<Vec<_>>().join("*");
        if body.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{mag}*{body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let m = Monomials::new(9);
        assert_eq!(m.count(), 55);
        for i in 0..m.count() {
            assert_eq!(m.index(&m.decode(i)), i);
        }
        assert_eq!(m.quadratic(0, 0), 10);
        assert_eq!(m.quadratic(8, 8), 54);
        assert_eq!(m.quadratic(3, 1), m.quadratic(1, 3));
    }

    #[test]
    fn eval_gradient_substitute() {
        let m = Monomials::new(2);
        // x0^2 + 3 x0 x1 - x1 + 2
        let p = SparseVec::from_pairs(vec![
            (m.quadratic(0, 0) as u32, Rational::one()),
            (m.quadratic(0, 1) as u32, Rational::from_int(3)),
            (m.linear(1) as u32, Rational::from_int(-1)),
            (0, Rational::from_int(2)),
        ]);
        let v = [Rational::from_int(2), Rational::from_int(-1)];
        assert_eq!(m.eval(&p, &v), Rational::from_int(1));
        assert_eq!(m.gradient(&p, &v), vec![Rational::from_int(1), Rational::from_int(5)]);
        // x0 = w0 + w1, x1 = w1
        let rows = vec![vec![Rational::one(), Rational::one()], vec![Rational::zero(), Rational::one()]];
        let q = m.substitute(&p, &rows, m);
        let w = [Rational::from_int(3), Rational::from_int(-1)];
        assert_eq!(m.eval(&q, &w), m.eval(&p, &v));
        let names = |a: usize| format!("x{a}");
        assert_eq!(format_poly(&m, &p, &names), "x0*x0 + 3*x0*x1 - x1 + 2");
    }
}

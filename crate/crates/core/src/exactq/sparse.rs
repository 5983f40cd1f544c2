use super::Rational;

/// Sparse rational vector: sorted indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from unsorted pairs; duplicate indices are summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(u32, Rational)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(u32, Rational)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    /// Caller guarantees sorted, distinct, nonzero.
    pub fn from_sorted(entries: Vec<(u32, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i as u32, x.clone())).collect(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i as u32, Rational::one())] }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (i, v) in &self.entries {
            out[*i as usize] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, Rational)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, v)| (*i as usize, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, v)| (*i as usize, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i as usize)
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.entries.binary_search_by_key(&(i as u32), |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, -(c * &b[j].1)));
                j += 1;
            } else {
                let v = a[i].1.sub_mul(c, &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.sub_scaled(&Rational::from_int(-1), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Rational::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.sub_mul(&-&a[i].1, &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn dot_dense(&self, d: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, v) in &self.entries {
            let w = &d[*i as usize];
            if !w.is_zero() {
                acc = acc.sub_mul(&-v, w);
            }
        }
        acc
    }

    /// Reindexes through `f`; the result is re-sorted and merged.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, v)| (f(*i as usize) as u32, v.clone())).collect())
    }

    /// Index reversal `i -> n - 1 - i`.
    pub fn reversed(&self, n: usize) -> SparseVec {
        let mut entries: Vec<(u32, Rational)> =
            self.entries.iter().rev().map(|(i, v)| ((n - 1 - *i as usize) as u32, v.clone())).collect();
        entries.shrink_to_fit();
        SparseVec { entries }
    }
}

/// Dense scratch buffer for summing many sparse vectors of the same length.
pub struct Accumulator {
    vals: Vec<Rational>,
    touched: Vec<u32>,
    flag: Vec<bool>,
}

impl Accumulator {
    pub fn new(n: usize) -> Self {
        Accumulator { vals: vec![Rational::zero(); n], touched: Vec::new(), flag: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn add_entry(&mut self, i: usize, v: &Rational) {
        if !self.flag[i] {
            self.flag[i] = true;
            self.touched.push(i as u32);
        }
        self.vals[i] += v;
    }

    /// `self += c * v`.
    pub fn add_scaled(&mut self, c: &Rational, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        let mc = -c;
        for (i, x) in v.entries() {
            let i = *i as usize;
            if !self.flag[i] {
                self.flag[i] = true;
                self.touched.push(i as u32);
            }
            self.vals[i] = self.vals[i].sub_mul(&mc, x);
        }
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.vals[i]
    }

    /// Drains into a sparse vector and resets.
    pub fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.vals[i as usize]);
            self.flag[i as usize] = false;
            if !v.is_zero() {
                entries.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec::from_sorted(entries)
    }
}

/// Incremental reduced row-echelon form.
///
/// Rows are kept fully reduced at every step, so each stored row vanishes on
/// every other row's pivot column.
pub struct Reducer {
    n: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
    acc: Accumulator,
}

const NONE: u32 = u32::MAX;

impl Reducer {
    pub fn new(n: usize) -> Self {
        Reducer { n, rows: Vec::new(), pivot_row: vec![NONE; n], acc: Accumulator::new(n) }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    /// Residue of `v` modulo the current row space.
    pub fn reduce(&mut self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(u32, &Rational)> =
            v.entries().iter().filter(|(i, _)| self.pivot_row[*i as usize] != NONE).map(|(i, x)| (self.pivot_row[*i as usize], x)).collect();
        if hits.is_empty() {
            return v.clone();
        }
        if hits.len() == 1 {
            let (r, x) = hits[0];
            return v.sub_scaled(x, &self.rows[r as usize]);
        }
        self.acc.add_scaled(&Rational::one(), v);
        for (r, x) in hits {
            let neg = -x;
            self.acc.add_scaled(&neg, &self.rows[r as usize]);
        }
        self.acc.take()
    }

    /// Adds `v` to the span. Returns true if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        self.insert_reduced(w)
    }

    fn insert_reduced(&mut self, w: SparseVec) -> bool {
        let Some((p, lead)) = w.leading() else {
            return false;
        };
        let w = if lead.is_one() { w.clone() } else { w.scale(&lead.recip()) };
        for row in self.rows.iter_mut() {
            if let Some(x) = row.get(p) {
                let x = x.clone();
                *row = row.sub_scaled(&x, &w);
            }
        }
        self.pivot_row[p] = self.rows.len() as u32;
        self.rows.push(w);
        true
    }

    /// Rows sorted by pivot column.
    pub fn into_rows(self) -> Vec<SparseVec> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().map(|l| l.0).unwrap_or(usize::MAX));
        rows
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }
}

/// RREF basis of `{x in R^n : e . x = 0 for every equation e}`.
///
/// Equations are eliminated with pivots taken at their last nonzero column.
/// The kernel vectors read off the free columns are then already in RREF.
pub fn kernel_of_equations<'a>(n: usize, eqs: impl IntoIterator<Item = &'a SparseVec>) -> Vec<SparseVec> {
    let mut red = Reducer::new(n);
    for e in eqs {
        if red.rank() == n {
            break;
        }
        red.insert(&e.reversed(n));
    }
    kernel_from_reversed(n, red)
}

/// Same as `kernel_of_equations` for owned equations produced lazily.
pub fn kernel_of_equation_iter(n: usize, eqs: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut red = Reducer::new(n);
    for e in eqs {
        if red.rank() == n {
            break;
        }
        red.insert(&e.reversed(n));
    }
    kernel_from_reversed(n, red)
}

fn kernel_from_reversed(n: usize, red: Reducer) -> Vec<SparseVec> {
    let mut is_pivot = vec![false; n];
    let rows = red.rows;
    for r in &rows {
        let (p, _) = r.leading().unwrap();
        is_pivot[n - 1 - p] = true;
    }
    let mut cols: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); n];
    for f in 0..n {
        if !is_pivot[f] {
            cols[f].push((f as u32, Rational::one()));
        }
    }
    for r in &rows {
        let p = n - 1 - r.leading().unwrap().0;
        for (j, v) in r.iter().skip(1) {
            let f = n - 1 - j;
            cols[f].push((p as u32, -v));
        }
    }
    cols.into_iter()
        .enumerate()
        .filter(|(f, _)| !is_pivot[*f])
        .map(|(_, mut c)| {
            c.sort_by_key(|e| e.0);
            SparseVec::from_sorted(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn sub_scaled_merges() {
        let a = sv(&[1, 0, 2, 0]);
        let b = sv(&[0, 3, 1, 0]);
        let c = a.sub_scaled(&Rational::from_int(2), &b);
        assert_eq!(c, sv(&[1, -6, 0, 0]));
        assert_eq!(a.dot(&b), Rational::from_int(2));
    }

    #[test]
    fn reducer_builds_rref() {
        let mut r = Reducer::new(3);
        assert!(r.insert(&sv(&[2, 4, 6])));
        assert!(r.insert(&sv(&[1, 3, 3])));
        assert!(!r.insert(&sv(&[3, 7, 9])));
        let rows = r.into_rows();
        assert_eq!(rows, vec![sv(&[1, 0, 3]), sv(&[0, 1, 0])]);
    }

    #[test]
    fn kernel_is_rref() {
        // x0 + x1 + x2 + x3 = 0, x1 - x3 = 0
        let eqs = vec![sv(&[1, 1, 1, 1]), sv(&[0, 1, 0, -1])];
        let k = kernel_of_equations(4, &eqs);
        assert_eq!(k.len(), 2);
        for v in &k {
            for e in &eqs {
                assert!(v.dot(e).is_zero());
            }
        }
        let mut red = Reducer::new(4);
        for v in &k {
            red.insert(v);
        }
        assert_eq!(red.into_rows(), k);
    }
}

//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`. Matrices are dense and small.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rat {
    ratio(1, 2)
}

/// Parse "3", "-3/4" or "1.5".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = i.trim_start().starts_with('-');
        let ip: BigInt = match i.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().ok()?,
        };
        let fp: BigInt = f.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), f.len());
        let mag = ip.abs() * &den + fp;
        let num = if neg { -mag } else { mag };
        return Some(Rat::new(num, den));
    }
    s.parse::<BigInt>().ok().map(Rat::from_integer)
}

/// Plain-text rendering used in reports: "3", "-1/2".
pub fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &Rat) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMatrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors, each of length `dim`.
    pub fn from_cols(dim: usize, cols: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), dim);
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rat) {
        let k = i * self.cols + j;
        self.data[k] += v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn hstack(&self, other: &QMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, other: &QMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Supercommutator-free commutator `self*other - other*self`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        &(self * other) - &(other * self)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Solve `self * x = b`; `None` if inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&QMatrix::from_cols(self.rows, &[b.to_vec()]));
        let (r, piv) = rref(&aug);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(rat_str).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut rows: Vec<Vec<Rat>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(below.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for j in c..m.cols {
                if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    other[j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = QMatrix::from_rows_sized(m.rows, m.cols, rows);
    (out, pivots)
}

impl QMatrix {
    fn from_rows_sized(rows: usize, cols: usize, data: Vec<Vec<Rat>>) -> Self {
        let mut flat = Vec::with_capacity(rows * cols);
        for r in data {
            flat.extend(r);
        }
        QMatrix { rows, cols, data: flat }
    }
}

/// Basis of the null space, one vector per free column.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rat>> {
    let (r, piv) = rref(m);
    let mut is_piv = vec![false; m.cols];
    for &p in &piv {
        is_piv[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&j| !is_piv[j]) {
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = Rat::one();
        for (i, &p) in piv.iter().enumerate() {
            let x = r.get(i, free);
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        out.push(v);
    }
    out
}

/// Basis of the column space, as an independent subset of the columns.
pub fn column_basis(m: &QMatrix) -> Vec<Vec<Rat>> {
    let (_, piv) = rref(m);
    piv.into_iter().map(|j| m.col(j)).collect()
}

/// Dimension of the span of `vs` (all of length `dim`).
pub fn span_dim(dim: usize, vs: &[Vec<Rat>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    QMatrix::from_cols(dim, vs).rank()
}

pub fn in_span(dim: usize, vs: &[Vec<Rat>], v: &[Rat]) -> bool {
    let mut all = vs.to_vec();
    all.push(v.to_vec());
    span_dim(dim, &all) == span_dim(dim, vs)
}

/// dim span(whole) / span(sub); `sub` must lie in span(whole).
pub fn quotient_dim(sub: &[Vec<Rat>], whole: &[Vec<Rat>]) -> Result<usize, Error> {
    let dim = whole.first().or(sub.first()).map_or(0, |v| v.len());
    let w = span_dim(dim, whole);
    let mut both = whole.to_vec();
    both.extend(sub.iter().cloned());
    if span_dim(dim, &both) != w {
        return Err(Error::Precondition("quotient_dim: sub is not contained in whole".into()));
    }
    Ok(w - span_dim(dim, sub))
}

/// dim (span(a) ∩ span(b)).
pub fn intersection_dim(dim: usize, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> usize {
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    span_dim(dim, a) + span_dim(dim, b) - span_dim(dim, &both)
}

/// Basis of span(a) ∩ span(b).
pub fn intersection_basis(dim: usize, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let a = column_basis(&QMatrix::from_cols(dim, a));
    let b = column_basis(&QMatrix::from_cols(dim, b));
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let ma = QMatrix::from_cols(dim, &a);
    let mb = QMatrix::from_cols(dim, &b);
    let k = kernel_basis(&ma.hstack(&mb));
    let vs: Vec<Vec<Rat>> = k.iter().map(|x| ma.mul_vec(&x[..a.len()])).collect();
    column_basis(&QMatrix::from_cols(dim, &vs))
}

pub fn same_span(dim: usize, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let da = span_dim(dim, a);
    da == span_dim(dim, b) && intersection_dim(dim, a, b) == da
}

/// Exact test for a symmetric matrix being positive definite: symmetric
/// elimination must meet only positive pivots.
pub fn is_positive_definite(m: &QMatrix) -> bool {
    let n = m.rows();
    if m.cols() != n || *m != m.transpose() {
        return false;
    }
    let mut a = m.clone();
    for k in 0..n {
        let p = a.get(k, k).clone();
        if !p.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = a.get(i, k) / &p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
        }
    }
    true
}

pub fn sign(e: usize) -> Rat {
    if e % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn is_nonneg_int(r: &Rat) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn positive_definite_by_pivots() {
        assert!(is_positive_definite(&QMatrix::from_i64(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&QMatrix::from_i64(&[&[1, 2], &[2, 1]])));
        assert!(!is_positive_definite(&QMatrix::from_i64(&[&[1, 0], &[0, 0]])));
        assert!(!is_positive_definite(&QMatrix::from_i64(&[&[1, 1], &[0, 1]])));
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&QMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_permutation() {
        let id = QMatrix::identity(3);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1, 2]));
        let (r, _) = rref(&QMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert_eq!(r, QMatrix::identity(2));
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&QMatrix::zeros(2, 2)).len(), 2);
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&QMatrix::from_i64(&[&[1, 1]])), vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn quotients() {
        let e1 = vec![rat(1), rat(0)];
        let e2 = vec![rat(0), rat(1)];
        assert_eq!(quotient_dim(&[], &[e1.clone(), e2.clone()]).unwrap(), 2);
        assert_eq!(quotient_dim(&[e1.clone()], &[e1.clone(), e2.clone()]).unwrap(), 1);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap(), 0);
        assert!(quotient_dim(&[e2.clone()], &[e1.clone()]).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("-3/4"), Some(ratio(-3, 4)));
        assert_eq!(parse_rat("1.5"), Some(ratio(3, 2)));
        assert_eq!(parse_rat("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rat("7"), Some(rat(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn intersections() {
        let e = |i: usize| {
            let mut v = vec![rat(0); 3];
            v[i] = rat(1);
            v
        };
        let a = vec![e(0), e(1)];
        let b = vec![e(1), e(2)];
        assert_eq!(intersection_dim(3, &a, &b), 1);
        let ib = intersection_basis(3, &a, &b);
        assert_eq!(ib.len(), 1);
        assert!(same_span(3, &ib, &[e(1)]));
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..4, 1i64..3), r * c).prop_map(move |xs| {
                let rows = xs.chunks(c).map(|ch| ch.iter().map(|&(n, d)| ratio(n, d)).collect()).collect();
                QMatrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let (r, p) = rref(&m);
            let (r2, p2) = rref(&r);
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p, p2);
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solve_consistent(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let x: Vec<Rat> = (0..m.cols()).map(|i| rat(seed[i % seed.len()])).collect();
            let b = m.mul_vec(&x);
            let y = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&y), b);
        }
    }
}

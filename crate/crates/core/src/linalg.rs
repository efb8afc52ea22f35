//! Dense exact matrices over the cyclotomic field.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{CycloScalar, CyclotomicField};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: &'static CyclotomicField,
    data: Vec<CycloScalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = CycloScalar;
    fn index(&self, (r, c): (usize, usize)) -> &CycloScalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut CycloScalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: &'static CyclotomicField, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &'static CyclotomicField, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: &'static CyclotomicField, diag: &[CycloScalar]) -> Matrix {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_rows(field: &'static CyclotomicField, rows: Vec<Vec<CycloScalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<CycloScalar> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Matrix { rows: r, cols: c, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn row(&self, r: usize) -> &[CycloScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloScalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn scale(&self, s: &CycloScalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> CycloScalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += &t;
                    }
                }
            }
        }
        out
    }

    /// Trace of `self · other` without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> CycloScalar {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                let b = &other[(k, i)];
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
        }
        acc
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Matrix {
        (0..n).fold(Matrix::identity(self.field, self.rows), |acc, _| acc.matmul(self))
    }

    pub fn apply(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(self.field.zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a * b
                    }
                })
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inverse().expect("nonzero pivot");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = &self[(r, j)] * &inv;
                }
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    if !self[(r, j)].is_zero() {
                        let t = &factor * &self[(r, j)];
                        self[(i, j)] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<CycloScalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    /// The unique solution of `self · x = b`.
    pub fn solve_unique(&self, b: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        let sol = self.solve_any(b)?;
        if self.rank() < self.cols {
            return Err(Error::Underdetermined(format!("rank {} < {} unknowns", self.rank(), self.cols)));
        }
        Ok(sol)
    }

    /// Some solution of `self · x = b` (free variables set to zero).
    pub fn solve_any(&self, b: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent(format!("{}x{} system", self.rows, self.cols)));
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ArityMismatch(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = self.field.one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let mut out = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Ok(out)
    }

    pub fn determinant(&self) -> CycloScalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return self.field.zero() };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inverse().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] * &inv;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let t = &factor * &m[(c, j)];
                        m[(i, j)] -= &t;
                    }
                }
            }
        }
        det
    }
}

impl std::ops::Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(), ..self.clone() }
    }
}

impl std::ops::Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(), ..self.clone() }
    }
}

impl std::ops::Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

/// Incremental row space with membership tests, used to grow spanning sets.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: &'static CyclotomicField,
    dim: usize,
    /// Rows in echelon form, each normalized so its pivot entry is 1.
    rows: Vec<(usize, Vec<CycloScalar>)>,
}

impl RowSpace {
    pub fn new(field: &'static CyclotomicField, dim: usize) -> Self {
        RowSpace { field, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycloScalar]) -> bool {
        self.reduce(v).iter().all(CycloScalar::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[CycloScalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[pc].inverse().expect("nonzero");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        self.rows.push((pc, r));
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis(&self) -> Vec<Vec<CycloScalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    basis: Vec<Vec<CycloScalar>>,
    rows: Vec<usize>,
    inv: Matrix,
}

impl Coordinates {
    pub fn new(field: &'static CyclotomicField, basis: Vec<Vec<CycloScalar>>) -> Result<Self> {
        let k = basis.len();
        let n = basis.first().map_or(0, Vec::len);
        let mut t = Matrix::from_rows(field, basis.clone());
        if t.rows() == 0 {
            t = Matrix::zeros(field, 0, n);
        }
        let rows = t.rref();
        if rows.len() < k {
            return Err(Error::Underdetermined(format!("family of {k} vectors has rank {}", rows.len())));
        }
        let square: Vec<Vec<CycloScalar>> = rows.iter().map(|&r| basis.iter().map(|b| b[r].clone()).collect()).collect();
        let inv = Matrix::from_rows(field, square).inverse()?;
        Ok(Coordinates { basis, rows, inv })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<CycloScalar>] {
        &self.basis
    }

    /// Coordinates of `v`; errors if `v` is outside the span.
    pub fn coords(&self, v: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        let c = self.coords_unchecked(v);
        for (i, x) in v.iter().enumerate() {
            let mut acc = self.inv.field().zero();
            for (ci, b) in c.iter().zip(&self.basis) {
                if !ci.is_zero() && !b[i].is_zero() {
                    acc += &(ci * &b[i]);
                }
            }
            if &acc != x {
                return Err(Error::NotInSubalgebra("vector outside the span".into()));
            }
        }
        Ok(c)
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        let sub: Vec<CycloScalar> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.apply(&sub)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalars;

    #[test]
    fn solve_and_nullspace() {
        let sc = Scalars::new(3).unwrap();
        let f = sc.field();
        let q = sc.q();
        let m = Matrix::from_rows(f, vec![vec![sc.one(), q.clone()], vec![q.clone(), &q * &q]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).iter().all(CycloScalar::is_zero));
        assert!(m.determinant().is_zero());
        let m2 = Matrix::from_rows(f, vec![vec![sc.one(), q.clone()], vec![sc.zero(), sc.int(2)]]);
        assert_eq!(m2.determinant(), sc.int(2));
        let x = m2.solve_unique(&[sc.one(), sc.one()]).unwrap();
        assert_eq!(m2.apply(&x), vec![sc.one(), sc.one()]);
        assert!(m.solve_any(&[sc.one(), sc.zero()]).is_err());
    }

    #[test]
    fn inverse_and_coordinates() {
        let sc = Scalars::new(3).unwrap();
        let f = sc.field();
        let q = sc.q();
        let m = Matrix::from_rows(f, vec![vec![sc.one(), q.clone()], vec![sc.i(), sc.int(3)]]);
        assert_eq!(m.matmul(&m.inverse().unwrap()), Matrix::identity(f, 2));
        assert!(Matrix::zeros(f, 2, 2).inverse().is_err());
        let b = vec![vec![sc.zero(), sc.one(), q.clone()], vec![sc.zero(), sc.int(2), sc.one()]];
        let c = Coordinates::new(f, b.clone()).unwrap();
        let v: Vec<CycloScalar> = (0..3).map(|i| &b[0][i] * &sc.i() - &b[1][i]).collect();
        assert_eq!(c.coords(&v).unwrap(), vec![sc.i(), sc.int(-1)]);
        assert!(c.coords(&[sc.one(), sc.zero(), sc.zero()]).is_err());
        assert!(Coordinates::new(f, vec![b[0].clone(), b[0].clone()]).is_err());
    }

    #[test]
    fn row_space() {
        let sc = Scalars::new(2).unwrap();
        let mut rs = RowSpace::new(sc.field(), 3);
        assert!(rs.insert(&[sc.one(), sc.i(), sc.zero()]));
        assert!(rs.insert(&[sc.zero(), sc.one(), sc.one()]));
        assert!(!rs.insert(&[sc.one(), sc.i() + sc.one(), sc.one()]));
        assert!(rs.contains(&[sc.int(2), sc.i() * sc.int(2), sc.zero()]));
        assert_eq!(rs.rank(), 2);
    }

    #[test]
    fn kron_and_trace() {
        let sc = Scalars::new(2).unwrap();
        let f = sc.field();
        let a = Matrix::diagonal(f, &[sc.one(), sc.int(2)]);
        let b = Matrix::diagonal(f, &[sc.int(3), sc.i()]);
        let k = a.kron(&b);
        assert_eq!(k.trace(), a.trace() * b.trace());
        assert_eq!(a.trace_product(&b), (&a * &b).trace());
    }
}

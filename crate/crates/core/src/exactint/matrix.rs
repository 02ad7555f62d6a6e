use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json;
use crate::poly::IntPolynomial;

/// Dense square matrix over Z, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrix")));
        }
        Ok(IntMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64<const N: usize>(rows: [[i64; N]; N]) -> Self {
        IntMatrix { n: N, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_vec_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!("expected {n} columns of length {n}")));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for c in cols {
                data.push(c[i].clone());
            }
        }
        Ok(IntMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Entries flattened row-major.
    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * &other.data[k * n + j];
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IntMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IntMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// `det(xI - self)` by the division-free Berkowitz recurrence.
    pub fn charpoly(&self) -> IntPolynomial {
        let n = self.n;
        // coefficients, highest degree first
        let mut v: Vec<BigInt> = vec![BigInt::one()];
        for r in 0..n {
            let a = self.get(r, r);
            let row: Vec<&BigInt> = (0..r).map(|j| self.get(r, j)).collect();
            let mut col: Vec<BigInt> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-a.clone());
            for _ in 0..r {
                let rc: BigInt = row.iter().zip(&col).map(|(x, y)| *x * y).sum();
                t.push(-rc);
                col = (0..r).map(|i| (0..r).map(|j| self.get(i, j) * &col[j]).sum()).collect();
            }
            let mut next = vec![BigInt::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *slot += &t[i - j] * vj;
                    }
                }
            }
            v = next;
        }
        v.reverse();
        IntPolynomial::new(v)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor_rows: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| self.get(r, c).clone()).collect())
                    .collect();
                let minor = IntMatrix::from_rows(minor_rows).expect("square minor").det();
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                adj.data[j * n + i] = cof;
            }
        }
        adj
    }

    pub fn inverse_rat(&self) -> Result<RatMatrix> {
        RatMatrix::from_int(self).inverse()
    }

    /// Inverse of a unimodular matrix, exactly in GL_n(Z).
    pub fn inverse_unimodular(&self) -> Option<Self> {
        let d = self.det();
        if !d.abs().is_one() {
            return None;
        }
        Some(self.adjugate().scale(&d))
    }

    /// `self * m * self^-1` for unimodular `self`.
    pub fn conjugate(&self, m: &Self) -> Option<Self> {
        Some(self.mul(m).mul(&self.inverse_unimodular()?))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::bigint_rows::serialize(&self.rows(), s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = json::bigint_rows::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Dense square matrix over Q, row-major; entries always in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix { n: m.n, data: m.data.iter().cloned().map(BigRational::from_integer).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrix")));
        }
        Ok(RatMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_int(&IntMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * &other.data[k * n + j];
                }
            }
        }
        RatMatrix { n, data }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &self.data[i * self.n + j] * &v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        RatMatrix { n, data }
    }

    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut m = self.rows();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &piv;
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut m = self.rows();
        let mut inv = Self::identity(n).rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::SingularMatrix)?;
            m.swap(p, c);
            inv.swap(p, c);
            let piv = m[c][c].clone();
            for k in 0..n {
                m[c][k] = &m[c][k] / &piv;
                inv[c][k] = &inv[c][k] / &piv;
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for k in 0..n {
                    let a = &f * &m[c][k];
                    let b = &f * &inv[c][k];
                    m[r][k] -= a;
                    inv[r][k] -= b;
                }
            }
        }
        Self::from_rows(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix { n: self.n, data: self.data.iter().map(|x| x.to_integer()).collect() })
    }

    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det3(m: [[i64; 3]; 3]) -> i64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix::identity(3).det(), BigInt::one());
        let f4 = [[0, 0, 1], [-1, 0, 0], [0, -1, 0]];
        assert_eq!(cofactor_det3(f4), 1);
        assert_eq!(IntMatrix::from_i64(f4).det(), BigInt::from(1));
        let b = [[0, 1, 0], [2, 0, 1], [-1, 1, 0]];
        assert_eq!(cofactor_det3(b), -1);
        assert_eq!(IntMatrix::from_i64(b).det(), BigInt::from(-1));
        let z = [[0, 1, 2], [0, 3, 4], [0, 5, 6]];
        assert_eq!(IntMatrix::from_i64(z).det(), BigInt::zero());
    }

    #[test]
    fn charpoly_examples() {
        let f3 = IntMatrix::from_i64([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        assert_eq!(f3.charpoly(), IntPolynomial::from_i64(&[-1, 0, 0, 1]));
        let fib = IntMatrix::from_i64([[1, 1], [1, 0]]);
        assert_eq!(fib.charpoly(), IntPolynomial::from_i64(&[-1, -1, 1]));
        let b = IntMatrix::from_i64([[0, 1, 0], [2, 0, 1], [-1, 1, 0]]);
        assert_eq!(b.charpoly(), IntPolynomial::from_i64(&[1, -3, 0, 1]));
    }

    #[test]
    fn inverse_examples() {
        let f3 = IntMatrix::from_i64([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        let inv = f3.inverse_rat().unwrap();
        assert_eq!(inv.to_int().unwrap(), f3.mul(&f3));
        assert_eq!(f3.mul(&f3.mul(&f3)), IntMatrix::identity(3));
        let d = IntMatrix::from_i64([[2, 0], [0, 1]]);
        let inv = d.inverse_rat().unwrap();
        assert_eq!(*inv.get(0, 0), BigRational::new(1.into(), 2.into()));
        assert!(!inv.is_integral());
        assert_eq!(IntMatrix::identity(3).inverse_rat().unwrap(), RatMatrix::identity(3));
        let sing = IntMatrix::from_i64([[1, 2], [2, 4]]);
        assert_eq!(sing.inverse_rat(), Err(Error::SingularMatrix));
    }

    #[test]
    fn unimodular_checks() {
        let f1 = IntMatrix::from_i64([[1, 0, 0], [0, 0, 1], [0, -1, -1]]);
        assert!(f1.is_unimodular());
        assert!(!IntMatrix::from_i64([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_unimodular());
        let x = IntMatrix::from_i64([[1, 2, 0], [0, 1, 3], [0, 0, 1]]);
        assert!(x.is_unimodular());
        assert_eq!(x.mul(&x.inverse_unimodular().unwrap()), IntMatrix::identity(3));
    }
}

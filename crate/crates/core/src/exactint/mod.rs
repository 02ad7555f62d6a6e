//! Exact dense linear algebra over Z and Q.

mod matrix;

pub use matrix::{IntMatrix, RatMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn det(m: &IntMatrix) -> BigInt {
    m.det()
}

pub fn charpoly(m: &IntMatrix) -> crate::poly::IntPolynomial {
    m.charpoly()
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_unimodular()
}

pub fn inverse_rat(m: &IntMatrix) -> Result<RatMatrix> {
    m.inverse_rat()
}

/// Row echelon form over Z restricted to the first `pivot_cols` columns.
/// Returns the rank; rows past the rank are zero on those columns.
fn echelon(rows: &mut [Vec<BigInt>], pivot_cols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(best) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()))
            else {
                break;
            };
            rows.swap(r, best);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (top, rest) = rows.split_at_mut(i);
                sub_multiple(&mut rest[0], &top[r], &q);
                if !rows[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if q.is_zero() {
                    continue;
                }
                let (top, rest) = rows.split_at_mut(r);
                sub_multiple(&mut top[i], &rest[0], &q);
            }
        }
        r += 1;
    }
    r
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `basis`:
/// upper triangular, positive pivots, entries above each pivot in `[0, pivot)`,
/// zero rows dropped. Rows of the result are the canonical basis.
pub fn hnf_rows(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    if basis.iter().any(|v| v.len() != m) {
        return Err(Error::DimensionMismatch("vectors of unequal length".into()));
    }
    let mut rows = basis.to_vec();
    let rank = echelon(&mut rows, m, true);
    rows.truncate(rank);
    Ok(rows)
}

/// HNF of a full-rank square lattice, as a matrix. Rank-deficient input is
/// padded with zero rows so the result stays square.
pub fn hnf_row(basis: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let mut rows = hnf_rows(basis)?;
    let m = basis.first().map_or(0, |v| v.len());
    if rows.len() > m {
        return Err(Error::DimensionMismatch("more independent rows than columns".into()));
    }
    while rows.len() < m {
        rows.push(vec![BigInt::zero(); m]);
    }
    IntMatrix::from_rows(rows)
}

/// Z-basis of `{x in Z^k : M x = 0}` for an `r x k` integer matrix given by rows.
pub fn integer_kernel(rows: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    let r = rows.len();
    // columns of M become rows, augmented with the identity
    let mut aug: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut row: Vec<BigInt> = rows.iter().map(|m| m[j].clone()).collect();
            row.extend((0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelon(&mut aug, r, false);
    let kernel: Vec<Vec<BigInt>> = aug[rank..].iter().map(|row| row[r..].to_vec()).collect();
    if kernel.is_empty() {
        return kernel;
    }
    hnf_rows(&kernel).expect("kernel vectors share a length")
}

/// Primitive integer vector: divide by the gcd of the entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Z-basis of the integer commutant `{X : XA = AX}`, HNF-canonical in the
/// row-major vectorization.
pub fn commutant_lattice(a: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let n = a.dim();
    if a.charpoly().is_irreducible_low_degree() != Some(true) {
        return Err(Error::ReduciblePolynomial);
    }
    // (XA - AX)_{ij} = sum_k X_ik A_kj - A_ik X_kj
    let mut eqs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![BigInt::zero(); n * n];
            for k in 0..n {
                row[i * n + k] += a.get(k, j);
                row[k * n + j] -= a.get(i, k);
            }
            eqs.push(row);
        }
    }
    let kernel = integer_kernel(&eqs, n * n);
    if kernel.len() != n {
        return Err(Error::ReduciblePolynomial);
    }
    kernel
        .into_iter()
        .map(|v| IntMatrix::from_rows(v.chunks(n).map(|r| r.to_vec()).collect()))
        .collect()
}

/// Unimodular with irreducible, totally real characteristic polynomial.
pub fn is_hyperbolic(a: &IntMatrix) -> Result<bool> {
    let n = a.dim();
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !a.is_unimodular() {
        return Ok(false);
    }
    let chi = a.charpoly();
    if chi.is_irreducible_low_degree() != Some(true) {
        return Ok(false);
    }
    let disc = chi.discriminant().expect("degree 2 or 3");
    Ok(disc.is_positive())
}

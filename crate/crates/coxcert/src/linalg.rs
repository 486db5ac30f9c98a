//! Small exact-rational matrix kernel.
//!
//! Everything in this crate that touches the character or cocharacter lattice
//! goes through arbitrary-precision rationals; there is no floating point
//! anywhere. Matrices are dense `Vec<Vec<BigRational>>`, row major. Sizes are
//! bounded by the rank (at most 8), so no cleverness is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<BigRational>>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn from_int_rows(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn transpose(m: &Mat) -> Mat {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(m: &Mat, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn scalar_mul(c: &BigRational, m: &Mat) -> Mat {
    m.iter().map(|r| r.iter().map(|x| c * x).collect()).collect()
}

/// Gauss-Jordan inverse. Exact; fails only on genuinely singular input.
pub fn invert(m: &Mat) -> Result<Mat> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Ok(inv)
}

/// Rank of a set of integer vectors, by fraction-free elimination in i128.
/// Entries here are root coordinates (|x| <= 6) in rank <= 8, far below any
/// overflow threshold for Bareiss growth.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[rank][col], m[r][col]);
            for j in col..cols {
                m[r][j] = m[r][j] * a - m[rank][j] * b;
            }
            let g = row_gcd(&m[r][col..]);
            if g > 1 {
                for j in col..cols {
                    m[r][j] /= g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn row_gcd(row: &[i128]) -> i128 {
    row.iter().fold(0i128, |g, &x| gcd_i128(g, x.abs()))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplies through by the lcm of denominators, divides by the gcd, and
/// fixes the sign so the first nonzero entry is positive. The result is the
/// primitive integer vector on the line spanned by `v`.
pub fn primitive_integer_vector(v: &[BigRational]) -> Option<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.abs());
    }
    let mut out: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invert_round_trips() {
        let m = from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let inv = invert(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert_eq!(inv[0][0], BigRational::new(BigInt::from(2), BigInt::from(3)));
    }

    #[test]
    fn singular_detected() {
        let m = from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(invert(&m), Err(Error::SingularMatrix)));
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank_int(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 0]]), 2);
        assert_eq!(rank_int(&[]), 0);
    }

    #[test]
    fn primitive_vector_normalization() {
        let v = vec![rat(-2) / rat(3), rat(4) / rat(3)];
        let p = primitive_integer_vector(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2)]);
        assert!(primitive_integer_vector(&[rat(0)]).is_none());
    }
}

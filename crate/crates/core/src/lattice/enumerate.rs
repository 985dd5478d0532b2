//! Fincke–Pohst enumeration of short vectors, run exactly over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntLattice, LatticeVector};
use crate::arith::{ceil_rat, floor_rat, isqrt};
use crate::error::{Error, Result};

/// All nonzero `x` with `lo <= x·x <= hi` in a negative definite lattice,
/// sorted lexicographically by coordinates.
pub fn enumerate_bounded_norm(l: &IntLattice, lo: &BigInt, hi: &BigInt) -> Result<Vec<LatticeVector>> {
    if !l.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    if lo > hi || hi.is_positive() {
        return Ok(Vec::new());
    }
    let positive = l.negated();
    let bound = -lo;
    let mut out: Vec<LatticeVector> = short_vectors(positive.gram(), &bound)
        .into_iter()
        .filter(|x| {
            let q = l.square(x).expect("dimension checked");
            &q >= lo && &q <= hi && !x.is_zero()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Every `x` (including 0) with `x^T G x <= bound` for a positive definite `G`.
pub(crate) fn short_vectors(gram: &[Vec<BigInt>], bound: &BigInt) -> Vec<LatticeVector> {
    let n = gram.len();
    if n == 0 || bound.is_negative() {
        return Vec::new();
    }
    let (mu, d) = ldl(gram);
    let mut x = vec![BigInt::zero(); n];
    let mut out = Vec::new();
    descend(n - 1, &mu, &d, &mut x, BigRational::from_integer(bound.clone()), &mut out);
    out
}

/// `G = L D L^T` with `L` unit lower triangular; returns (`L`, diag `D`).
fn ldl(gram: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = gram.len();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = BigRational::from_integer(gram[j][j].clone());
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut s = BigRational::from_integer(gram[i][j].clone());
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &d[j];
        }
    }
    (l, d)
}

// x^T G x = sum_i d_i (x_i + sum_{j>i} L_ji x_j)^2; coordinates are fixed from
// the last one down.
fn descend(
    i: usize,
    mu: &[Vec<BigRational>],
    d: &[BigRational],
    x: &mut Vec<BigInt>,
    remaining: BigRational,
    out: &mut Vec<LatticeVector>,
) {
    let n = x.len();
    let center: BigRational = (i + 1..n)
        .map(|j| &mu[j][i] * BigRational::from_integer(x[j].clone()))
        .fold(BigRational::zero(), |a, b| a + b);
    // |x_i + c| <= sqrt(remaining/d_i) < s + 1 with s the integer root.
    let radius = isqrt(&floor_rat(&(&remaining / &d[i])));
    let lo: BigInt = floor_rat(&-&center) - &radius;
    let hi = ceil_rat(&-&center) + &radius;
    let mut xi = lo;
    while xi <= hi {
        let t = BigRational::from_integer(xi.clone()) + &center;
        let contribution = &d[i] * (&t * &t);
        if contribution <= remaining {
            x[i] = xi.clone();
            let rest = &remaining - &contribution;
            if i == 0 {
                out.push(LatticeVector::new(x.clone()));
            } else {
                descend(i - 1, mu, d, x, rest, out);
            }
        }
        xi += 1;
    }
    x[i] = BigInt::zero();
}

//! Hermite-style normal forms over Z, used for saturated kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Basis of `{x in Z^n : A x = 0}` for the `m × n` matrix `rows`.
///
/// Column operations reduce `A` to `A U = [B | 0]` with `U` unimodular; the
/// trailing columns of `U` then span the kernel over Z, so the result is
/// saturated without any denominator clearing.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    // u[c] is column c of U.
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot = 0;
    for i in 0..a.len() {
        if pivot == n {
            break;
        }
        for c in pivot + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let (p, q) = (a[i][pivot].clone(), a[i][c].clone());
            let e = p.extended_gcd(&q);
            let (x, y, g) = (e.x, e.y, e.gcd);
            let (pg, qg) = (&p / &g, &q / &g);
            combine_columns(&mut a, &mut u, pivot, c, [&x, &y, &(-&qg), &pg]);
        }
        if !a[i][pivot].is_zero() {
            pivot += 1;
        }
    }
    u.drain(..pivot);
    u
}

/// Replace columns (p, c) by (x·col_p + y·col_c, z·col_p + w·col_c).
fn combine_columns(
    a: &mut [Vec<BigInt>],
    u: &mut [Vec<BigInt>],
    p: usize,
    c: usize,
    [x, y, z, w]: [&BigInt; 4],
) {
    for row in a.iter_mut() {
        let (ap, ac) = (row[p].clone(), row[c].clone());
        row[p] = x * &ap + y * &ac;
        row[c] = z * &ap + w * &ac;
    }
    let (cp, cc) = (u[p].clone(), u[c].clone());
    u[p] = cp.iter().zip(&cc).map(|(s, t)| x * s + y * t).collect();
    u[c] = cp.iter().zip(&cc).map(|(s, t)| z * s + w * t).collect();
}

/// Row Hermite normal form: echelon rows with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped. The row
/// span over Z is unchanged.
pub fn row_hermite_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            if rows[r][col].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let (p, q) = (rows[r][col].clone(), rows[i][col].clone());
            let e = p.extended_gcd(&q);
            let (pg, qg) = (&p / &e.gcd, &q / &e.gcd);
            let (rr, ri) = (rows[r].clone(), rows[i].clone());
            rows[r] = rr.iter().zip(&ri).map(|(s, t)| &e.x * s + &e.y * t).collect();
            rows[i] = rr.iter().zip(&ri).map(|(s, t)| -&qg * s + &pg * t).collect();
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = rows[r][col].clone();
        for i in 0..r {
            let k = rows[i][col].div_floor(&pivot);
            if !k.is_zero() {
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &k * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

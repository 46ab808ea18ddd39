//! Exact rank and kernels of integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank over the rationals of a dense integer matrix (rows of equal length).
///
/// Integer row reduction in `i128`, restarting with fraction-free
/// elimination over big integers if an intermediate value overflows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match eliminate_i128(m) {
        Some(r) => r,
        None => {
            let m: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            bareiss_big(m)
        }
    }
}

/// Integer vectors spanning `{ c : Σ cᵢ·rows[i] = 0 }`, where `rows` has
/// `count` rows (which may all be empty).
pub fn left_kernel(rows: &[Vec<i64>], count: usize) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    // reduce the transpose: one equation per column of `rows`
    let mut m: Vec<Vec<BigRational>> = (0..cols)
        .map(|j| (0..count).map(|i| BigRational::from_integer(rows[i][j].into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..count {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                let (pivot, other) = if k < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[k])
                } else {
                    let (a, b) = m.split_at_mut(k);
                    (&a[r], &mut b[0])
                };
                for (x, y) in other.iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..count).filter(|c| !pivots.contains(c));
    free.map(|fc| {
        let mut v = vec![BigRational::zero(); count];
        v[fc] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][fc].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| lcm(&acc, x.denom()));
        v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
    })
    .collect()
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let t = &x % &y;
        x = y;
        y = t;
    }
    a / &x * b
}

/// Row reduction over the integers: eliminate below each pivot with
/// `row ← pv·row − f·pivot_row`, touching only rows with a nonzero entry,
/// and divide each updated row by the gcd of its entries.
fn eliminate_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // prefer a unit pivot to keep entries small
        let piv = (rank..rows)
            .find(|&r| m[r][col].abs() == 1)
            .or_else(|| (rank..rows).find(|&r| m[r][col] != 0));
        let Some(piv) = piv else {
            continue;
        };
        m.swap(rank, piv);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col];
        for row in rest.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let mut g: i128 = 0;
            for c in col..cols {
                let a = row[c].checked_mul(pv)?;
                let b = pivot_row[c].checked_mul(f)?;
                row[c] = a.checked_sub(b)?;
                g = gcd(g, row[c]);
            }
            if g > 1 {
                for x in row[col..].iter_mut() {
                    *x /= g;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for c in col..cols {
                row[c] = (&row[c] * &pv - &pivot_row[c] * &f) / &prev;
            }
        }
        prev = pv;
        rank += 1;
    }
    rank
}

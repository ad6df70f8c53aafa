//! Dense matrices over F_p.

use crate::fieldcore::{inv_mod, mul_mod};

pub type Matrix = Vec<Vec<u64>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![0; cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| (acc + mul_mod(x, brow[j], p)) % p)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&c, &v)| (acc + mul_mod(c, v, p)) % p)
        })
        .collect()
}

pub fn is_symmetric(a: &Matrix) -> bool {
    let n = a.len();
    a.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(a: &mut Matrix, p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p).expect("pivot is nonzero");
        for v in a[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(factor, y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix, p: u64) -> usize {
    let mut m = a.clone();
    row_reduce(&mut m, p).len()
}

/// Basis of the right kernel {x : a x = 0}.
pub fn kernel(a: &Matrix, p: u64) -> Vec<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let pivots = row_reduce(&mut m, p);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![0; cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - m[r][free]) % p;
            }
            x
        })
        .collect()
}

/// The basic solution of a x = b (free variables zero), or `None` when the
/// system is inconsistent.
pub fn solve(a: &Matrix, b: &[u64], p: u64) -> Option<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &v)| {
            let mut r = row.clone();
            r.push(v % p);
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, p);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols];
    }
    Some(x)
}

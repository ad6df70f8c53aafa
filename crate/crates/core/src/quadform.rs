//! Type and nullity of Tr_N(f(x)) as a quadratic form over F_p, and the
//! brute-force summation oracle.

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::fieldcore::{inv_mod, mul_mod, pow_mod, FieldCtx, FieldElem};
use crate::linalg::{self, Matrix};
use crate::nullity::{self, QuadFunc};

/// Default element budget for exhaustive enumeration.
pub const DEFAULT_CAP: u64 = 20_000_000;

/// Quadratic character of F_p: 0, 1 or −1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        0
    } else if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// The nonsquare of the field with the smallest encoding.
pub fn smallest_nonsquare(ctx: &FieldCtx) -> FieldElem {
    ctx.elements()
        .find(|x| ctx.quadratic_character(x) == -1)
        .expect("odd characteristic fields contain nonsquares")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFormDiag {
    pub p: u64,
    pub dim: usize,
    pub diag: Vec<u64>,
    pub rank: usize,
    pub nullity: usize,
    pub t: i8,
}

/// The field F_{p^{mn}} in which the sum at multiplier `m` is taken.
pub fn working_field(f: &QuadFunc, m: u64) -> Result<FieldCtx> {
    if m == 0 {
        return Err(Error::NotMultipleOfBase { m: 0, n: f.n() });
    }
    if m == 1 {
        return Ok(f.ctx().clone());
    }
    FieldCtx::new(f.p(), (m * f.n()) as usize, None)
}

/// M[u][v] = Tr(b_u·L(b_v)) with L(x) = Σ a_i x^{p^{α_i}}, so that
/// Tr(f(x)) = xᵀ M x on power-basis coordinates.
fn trace_form(f: &QuadFunc) -> Matrix {
    let k = f.ctx();
    let d = k.degree();
    let p = k.p();
    let mut m = linalg::zeros(d, d);
    for v in 0..d {
        let bv = k.basis(v);
        let lv = f.terms().iter().fold(k.zero(), |acc, (a, al)| {
            k.add(&acc, &k.mul(a, &k.frobenius(&bv, *al)))
        });
        // walk lv·x^u for u = 0..d, one shift at a time
        let mut cur = lv;
        for row in m.iter_mut() {
            row[v] = k.trace(&cur) % p;
            cur = k.mul_by_generator(&cur);
        }
    }
    m
}

/// Symmetric Gram matrix B of Tr_{mn}(f(x)) in the power basis of the
/// working field: B[u][u] = Q(b_u), B[u][v] = (Q(b_u+b_v) − Q(b_u) − Q(b_v))/2.
pub fn gram_matrix(f: &QuadFunc, m: u64) -> Result<Matrix> {
    let work = working_field(f, m)?;
    Ok(gram_in(&f.embed_into(&work)?))
}

fn gram_in(f: &QuadFunc) -> Matrix {
    let p = f.p();
    let half = inv_mod(2, p).expect("p is odd");
    let t = trace_form(f);
    let d = t.len();
    let mut b = linalg::zeros(d, d);
    for u in 0..d {
        for v in 0..d {
            b[u][v] = mul_mod((t[u][v] + t[v][u]) % p, half, p);
        }
    }
    b
}

/// Congruence diagonalization by simultaneous row and column elimination.
pub fn diagonalize(b: &Matrix, p: u64) -> Result<QuadFormDiag> {
    if !linalg::is_symmetric(b) {
        return Err(Error::NotSymmetric);
    }
    let n = b.len();
    let mut a: Matrix = b.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    for k in 0..n {
        let pivot = (k..n).find(|&i| a[i][i] != 0);
        let pivot = match pivot {
            Some(i) => i,
            None => {
                // every remaining diagonal entry vanishes; e_i ← e_i + e_j
                // turns a nonzero off-diagonal a_ij into the diagonal 2·a_ij
                let found = (k..n).find_map(|i| ((i + 1)..n).find(|&j| a[i][j] != 0).map(|j| (i, j)));
                let Some((i, j)) = found else { break };
                let row_j = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(row_j) {
                    *x = (*x + y) % p;
                }
                for row in a.iter_mut() {
                    row[i] = (row[i] + row[j]) % p;
                }
                i
            }
        };
        a.swap(k, pivot);
        for row in a.iter_mut() {
            row.swap(k, pivot);
        }
        let inv = inv_mod(a[k][k], p)?;
        for i in (k + 1)..n {
            if a[i][k] == 0 {
                continue;
            }
            let factor = mul_mod(a[i][k], inv, p);
            let row_k = a[k].clone();
            for (x, y) in a[i].iter_mut().zip(row_k) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
            for row in a.iter_mut() {
                let sub = mul_mod(factor, row[k], p);
                row[i] = (row[i] + p - sub) % p;
            }
        }
    }
    let diag: Vec<u64> = (0..n).map(|i| a[i][i]).collect();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let prod = diag
        .iter()
        .filter(|&&d| d != 0)
        .fold(1u64, |acc, &d| mul_mod(acc, d, p));
    Ok(QuadFormDiag {
        p,
        dim: n,
        diag,
        rank,
        nullity: n - rank,
        t: legendre(prod, p),
    })
}

/// (t, l) of Tr_{mn}(f) from the Gram matrix, with the nullity checked
/// against the polynomial gcd computation.
pub fn type_direct(f: &QuadFunc, m: u64) -> Result<(i8, u64)> {
    let (t, l) = type_by_gram(f, m)?;
    let check = nullity::nullity_at(f, m * f.n())?;
    if check != l {
        return Err(Error::InternalInconsistency(format!(
            "Gram nullity {l} disagrees with gcd nullity {check} at N = {}",
            m * f.n()
        )));
    }
    Ok((t, l))
}

/// (t, l) from the Gram matrix alone.
pub fn type_by_gram(f: &QuadFunc, m: u64) -> Result<(i8, u64)> {
    let b = gram_matrix(f, m)?;
    let d = diagonalize(&b, f.p())?;
    Ok((d.t, d.nullity as u64))
}

fn check_cap(work: &FieldCtx, cap: u64) -> Result<u64> {
    match work.order_u128() {
        Some(q) if q <= cap as u128 => Ok(q as u64),
        _ => Err(Error::TooLarge {
            size: work.order().to_string(),
            cap,
        }),
    }
}

/// Σ_{x ∈ F_{p^{mn}}} ζ^{Tr(f(x))} by exhaustive enumeration.
///
/// Points are visited in odometer order on basis coordinates; adding e_u to
/// x changes Q by 2(Bx)_u + B_uu, so each step costs O(N) instead of a
/// field multiplication.
pub fn brute_force_sum(f: &QuadFunc, m: u64, cap: u64) -> Result<CyclotomicInt> {
    let work = working_field(f, m)?;
    check_cap(&work, cap)?;
    let g = f.embed_into(&work)?;
    Ok(CyclotomicInt::from_trace_counts(f.p(), &trace_counts(&g)))
}

fn trace_counts(f: &QuadFunc) -> Vec<u64> {
    let p = f.p();
    let b = gram_in(f);
    let d = b.len();
    let mut counts = vec![0u64; p as usize];
    let mut x = vec![0u64; d];
    let mut bx = vec![0u64; d];
    let mut q = 0u64;
    loop {
        counts[q as usize] += 1;
        let mut u = 0;
        loop {
            if u == d {
                return counts;
            }
            q = (q + 2 * bx[u] + b[u][u]) % p;
            for (acc, row) in bx.iter_mut().zip(&b) {
                *acc = (*acc + row[u]) % p;
            }
            x[u] += 1;
            if x[u] < p {
                break;
            }
            x[u] = 0;
            u += 1;
        }
    }
}

/// The same sum evaluated point by point with field arithmetic.
pub fn brute_force_sum_naive(f: &QuadFunc, m: u64, cap: u64) -> Result<CyclotomicInt> {
    let work = working_field(f, m)?;
    check_cap(&work, cap)?;
    let g = f.embed_into(&work)?;
    let mut counts = vec![0u64; f.p() as usize];
    for x in work.elements() {
        counts[work.trace(&g.eval(&x)) as usize] += 1;
    }
    Ok(CyclotomicInt::from_trace_counts(f.p(), &counts))
}

//! Exhaustive summation with its own field arithmetic, used as the reference
//! oracle by the integration tests. Only the modulus polynomial is shared with
//! the library; multiplication, Frobenius and trace are recomputed here.

#![allow(dead_code)]

use num_bigint::BigInt;
use quadsum::cyclotomic::CyclotomicInt;
use quadsum::fieldcore::{FieldCtx, FieldElem};

pub struct Oracle {
    p: u64,
    d: usize,
    /// Monic modulus, low coefficient first, length d + 1.
    modulus: Vec<u64>,
    /// Column u holds (X^u)^p.
    frob: Vec<Vec<u64>>,
    traces: Vec<u64>,
}

impl Oracle {
    pub fn for_ctx(ctx: &FieldCtx) -> Oracle {
        let p = ctx.p();
        let modulus = match ctx.modulus() {
            Some(m) => m.to_vec(),
            None => vec![0, 1],
        };
        Oracle::new(p, modulus)
    }

    pub fn new(p: u64, modulus: Vec<u64>) -> Oracle {
        let d = modulus.len() - 1;
        assert_eq!(modulus[d], 1, "modulus must be monic");
        let mut o = Oracle {
            p,
            d,
            modulus,
            frob: Vec::new(),
            traces: Vec::new(),
        };
        o.frob = (0..d)
            .map(|u| {
                let mut e = vec![0; d];
                e[u] = 1;
                o.pow(&e, p)
            })
            .collect();
        o.traces = (0..d)
            .map(|u| {
                let mut e = vec![0; d];
                e[u] = 1;
                let mut acc = vec![0; d];
                let mut cur = e;
                for _ in 0..d {
                    acc = o.add(&acc, &cur);
                    cur = o.frobenius(&cur, 1);
                }
                assert!(acc[1..].iter().all(|&c| c == 0), "trace must lie in the prime field");
                acc[0]
            })
            .collect();
        o
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let d = self.d;
        let mut prod = vec![0u64; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for top in (d..2 * d).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &m) in self.modulus[..d].iter().enumerate() {
                let idx = top - d + k;
                prod[idx] = (prod[idx] + (p - m) * c) % p;
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = vec![0; self.d];
        acc[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// x^{p^j} through the linear Frobenius map.
    pub fn frobenius(&self, x: &[u64], j: u64) -> Vec<u64> {
        let mut cur = x.to_vec();
        for _ in 0..j % self.d as u64 {
            let mut next = vec![0u64; self.d];
            for (u, &c) in cur.iter().enumerate() {
                if c != 0 {
                    for (v, &fv) in self.frob[u].iter().enumerate() {
                        next[v] = (next[v] + c * fv) % self.p;
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn trace(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.traces)
            .fold(0, |acc, (c, t)| (acc + c * t) % self.p)
    }

    /// counts[j] = #{x : Tr(Σ a_i x^{p^α_i + 1} + b x) = j}.
    pub fn trace_counts(&self, terms: &[(Vec<u64>, u64)], linear: Option<&[u64]>) -> Vec<u64> {
        let p = self.p;
        let mut counts = vec![0u64; p as usize];
        let mut x = vec![0u64; self.d];
        loop {
            let mut value = vec![0u64; self.d];
            for (a, alpha) in terms {
                let xa = self.frobenius(&x, *alpha);
                value = self.add(&value, &self.mul(a, &self.mul(&xa, &x)));
            }
            if let Some(b) = linear {
                value = self.add(&value, &self.mul(b, &x));
            }
            counts[self.trace(&value) as usize] += 1;
            let Some(i) = x.iter().position(|&c| c + 1 < p) else { break };
            x[i] += 1;
            x[..i].iter_mut().for_each(|c| *c = 0);
        }
        counts
    }
}

/// Coordinates of Σ counts[j]·ζ^j in the basis 1, ζ, …, ζ^{p−2}.
pub fn coords_from_counts(counts: &[u64]) -> Vec<BigInt> {
    let top = BigInt::from(*counts.last().unwrap());
    counts[..counts.len() - 1]
        .iter()
        .map(|&c| BigInt::from(c) - &top)
        .collect()
}

pub fn matches(value: &CyclotomicInt, counts: &[u64]) -> bool {
    value.coords() == coords_from_counts(counts).as_slice()
}

/// Oracle sum of Σ a_i x^{p^α_i + 1} (+ b x) over the field of `ctx`; the
/// coefficients must already live in `ctx`.
pub fn oracle_sum(ctx: &FieldCtx, terms: &[(FieldElem, u64)], linear: Option<&FieldElem>) -> Vec<u64> {
    let o = Oracle::for_ctx(ctx);
    let terms: Vec<(Vec<u64>, u64)> = terms.iter().map(|(a, al)| (a.coeffs().to_vec(), *al)).collect();
    let lin = linear.map(|b| b.coeffs().to_vec());
    o.trace_counts(&terms, lin.as_deref())
}

/// Oracle sum over F_{p^m} of a function with prime-field coefficients.
pub fn oracle_prime(p: u64, m: usize, terms: &[(u64, u64)]) -> Vec<u64> {
    let ctx = FieldCtx::new(p, m, None).unwrap();
    let o = Oracle::for_ctx(&ctx);
    let terms: Vec<(Vec<u64>, u64)> = terms
        .iter()
        .map(|&(a, al)| {
            let mut v = vec![0; m];
            v[0] = a % p;
            (v, al)
        })
        .collect();
    o.trace_counts(&terms, None)
}

pub fn reference_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../reference")
        .join(name)
}

pub fn legendre(a: i64, p: i64) -> i8 {
    let r = a.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    let mut acc = 1i64;
    for _ in 0..(p - 1) / 2 {
        acc = acc * r % p;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

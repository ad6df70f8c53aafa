use num_bigint::BigUint;

use super::{FieldCtx, FieldElem};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a field context.
///
/// Coefficients are stored flat: coefficient `i` occupies
/// `data[i * stride .. (i + 1) * stride]` where `stride` is the degree of the
/// coefficient field. The vector never ends in a zero coefficient, so the zero
/// polynomial has empty storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    stride: usize,
    data: Vec<u64>,
}

impl Poly {
    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly {
            stride: ctx.degree(),
            data: Vec::new(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Poly::monomial(ctx, 0, &ctx.one())
    }

    /// The polynomial x.
    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly::monomial(ctx, 1, &ctx.one())
    }

    pub fn monomial(ctx: &FieldCtx, degree: usize, coeff: &FieldElem) -> Poly {
        let stride = ctx.degree();
        let mut data = vec![0; (degree + 1) * stride];
        data[degree * stride..].copy_from_slice(coeff.coeffs());
        let mut out = Poly { stride, data };
        out.normalize();
        out
    }

    pub fn from_elems(ctx: &FieldCtx, coeffs: &[FieldElem]) -> Poly {
        let stride = ctx.degree();
        let mut data = Vec::with_capacity(coeffs.len() * stride);
        for c in coeffs {
            data.extend_from_slice(c.coeffs());
        }
        let mut out = Poly { stride, data };
        out.normalize();
        out
    }

    /// Polynomial with prime-field coefficients, constant term first.
    pub fn from_prime_coeffs(ctx: &FieldCtx, coeffs: &[u64]) -> Poly {
        let elems: Vec<_> = coeffs.iter().map(|&c| ctx.from_prime(c)).collect();
        Poly::from_elems(ctx, &elems)
    }

    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.stride).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn coeff_elem(&self, ctx: &FieldCtx, i: usize) -> FieldElem {
        if i >= self.len() {
            return ctx.zero();
        }
        ctx.elem_unchecked(self.coeff(i).to_vec())
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.coeff_is_zero(i)).collect()
    }

    fn coeff_is_zero(&self, i: usize) -> bool {
        self.coeff(i).iter().all(|&c| c == 0)
    }

    fn normalize(&mut self) {
        while !self.is_empty() && self.coeff_is_zero(self.len() - 1) {
            let new_len = self.data.len() - self.stride;
            self.data.truncate(new_len);
        }
    }

    fn with_len(stride: usize, len: usize) -> Poly {
        Poly {
            stride,
            data: vec![0; len * stride],
        }
    }
}

pub fn add(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    combine(ctx, a, b, false)
}

pub fn sub(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    combine(ctx, a, b, true)
}

fn combine(ctx: &FieldCtx, a: &Poly, b: &Poly, negate: bool) -> Poly {
    let p = ctx.p();
    let len = a.data.len().max(b.data.len());
    let mut data = vec![0u64; len];
    for (i, slot) in data.iter_mut().enumerate() {
        let x = a.data.get(i).copied().unwrap_or(0);
        let y = b.data.get(i).copied().unwrap_or(0);
        *slot = if negate { (x + p - y) % p } else { (x + y) % p };
    }
    let mut out = Poly {
        stride: ctx.degree(),
        data,
    };
    out.normalize();
    out
}

pub fn mul(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(ctx);
    }
    let s = ctx.degree();
    let p = ctx.p();
    let mut out = Poly::with_len(s, a.len() + b.len() - 1);
    for i in a.support() {
        for j in b.support() {
            let prod = ctx.mul_slices(a.coeff(i), b.coeff(j));
            let dst = &mut out.data[(i + j) * s..(i + j + 1) * s];
            for (o, v) in dst.iter_mut().zip(prod) {
                *o = (*o + v) % p;
            }
        }
    }
    out.normalize();
    out
}

pub fn scale(ctx: &FieldCtx, a: &Poly, c: &FieldElem) -> Poly {
    let coeffs: Vec<_> = (0..a.len())
        .map(|i| ctx.mul(&a.coeff_elem(ctx, i), c))
        .collect();
    Poly::from_elems(ctx, &coeffs)
}

pub fn monic(ctx: &FieldCtx, a: &Poly) -> Result<Poly> {
    let d = a.degree().ok_or(Error::ZeroPolynomial)?;
    let inv = ctx.inv(&a.coeff_elem(ctx, d))?;
    Ok(scale(ctx, a, &inv))
}

/// Horner evaluation.
pub fn eval(ctx: &FieldCtx, a: &Poly, x: &FieldElem) -> FieldElem {
    let mut acc = ctx.zero();
    for i in (0..a.len()).rev() {
        acc = ctx.add(&ctx.mul(&acc, x), &a.coeff_elem(ctx, i));
    }
    acc
}

/// Precomputed reduction data for repeated division by one polynomial.
///
/// Division walks the dividend from the top and only touches the nonzero
/// coefficients of the divisor, which keeps reduction modulo sparse
/// polynomials (such as p-polynomials) cheap regardless of their degree.
pub struct Divisor {
    degree: usize,
    /// Nonzero `(j, t)` with x^degree ≡ Σ t_j x^j modulo the divisor.
    tail: Vec<(usize, Vec<u64>)>,
}

impl Divisor {
    pub fn new(ctx: &FieldCtx, b: &Poly) -> Result<Divisor> {
        let degree = b.degree().ok_or(Error::ZeroPolynomial)?;
        let inv = ctx.inv(&b.coeff_elem(ctx, degree))?;
        let tail = b
            .support()
            .into_iter()
            .filter(|&j| j < degree)
            .map(|j| {
                let t = ctx.neg(&ctx.mul(&b.coeff_elem(ctx, j), &inv));
                (j, t.coeffs().to_vec())
            })
            .collect();
        Ok(Divisor { degree, tail })
    }

    pub fn rem(&self, ctx: &FieldCtx, mut a: Poly) -> Poly {
        let s = ctx.degree();
        let p = ctx.p();
        let db = self.degree;
        if a.len() <= db {
            return a;
        }
        if s == 1 {
            let tail: Vec<(usize, u64)> = self.tail.iter().map(|(j, t)| (*j, t[0])).collect();
            let data = &mut a.data;
            for k in (db..data.len()).rev() {
                let c = data[k];
                if c == 0 {
                    continue;
                }
                data[k] = 0;
                for &(j, t) in &tail {
                    let idx = k - db + j;
                    data[idx] = (data[idx] + c * t) % p;
                }
            }
        } else {
            for k in (db..a.len()).rev() {
                if a.coeff_is_zero(k) {
                    continue;
                }
                let c = a.coeff(k).to_vec();
                a.data[k * s..(k + 1) * s].iter_mut().for_each(|v| *v = 0);
                for (j, t) in &self.tail {
                    let prod = ctx.mul_slices(&c, t);
                    let idx = k - db + j;
                    for (o, v) in a.data[idx * s..(idx + 1) * s].iter_mut().zip(prod) {
                        *o = (*o + v) % p;
                    }
                }
            }
        }
        a.data.truncate(db * s);
        a.normalize();
        a
    }
}

pub fn rem(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(Divisor::new(ctx, b)?.rem(ctx, a.clone()))
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = Divisor::new(ctx, &b)
            .expect("nonzero divisor")
            .rem(ctx, a);
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        monic(ctx, &a).expect("nonzero")
    }
}

/// h(x)^p = Σ c_i^p x^{p·i} in characteristic p.
pub fn pth_power(ctx: &FieldCtx, h: &Poly) -> Poly {
    if h.is_zero() {
        return h.clone();
    }
    let s = ctx.degree();
    let p = ctx.p() as usize;
    let mut out = Poly::with_len(s, (h.len() - 1) * p + 1);
    for i in h.support() {
        let c = ctx.frobenius(&h.coeff_elem(ctx, i), 1);
        out.data[i * p * s..(i * p + 1) * s].copy_from_slice(c.coeffs());
    }
    out
}

pub fn powmod(ctx: &FieldCtx, base: &Poly, exp: &BigUint, modulus: &Poly) -> Result<Poly> {
    let div = Divisor::new(ctx, modulus)?;
    let base = div.rem(ctx, base.clone());
    let mut acc = div.rem(ctx, Poly::one(ctx));
    for i in (0..exp.bits()).rev() {
        acc = div.rem(ctx, mul(ctx, &acc, &acc));
        if exp.bit(i) {
            acc = div.rem(ctx, mul(ctx, &acc, &base));
        }
    }
    Ok(acc)
}

/// Iterates h_i = x^{p^i} mod f for i = 0, 1, 2, … by p-th powering.
pub struct FrobeniusOrbit<'a> {
    ctx: &'a FieldCtx,
    divisor: Divisor,
    modulus: Poly,
    current: Poly,
    steps: u64,
}

impl<'a> FrobeniusOrbit<'a> {
    pub fn new(ctx: &'a FieldCtx, f: &Poly) -> Result<FrobeniusOrbit<'a>> {
        let divisor = Divisor::new(ctx, f)?;
        let current = divisor.rem(ctx, Poly::x(ctx));
        Ok(FrobeniusOrbit {
            ctx,
            divisor,
            modulus: f.clone(),
            current,
            steps: 0,
        })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn advance(&mut self, count: u64) {
        for _ in 0..count {
            let next = pth_power(self.ctx, &self.current);
            self.current = self.divisor.rem(self.ctx, next);
            self.steps += 1;
        }
    }

    /// deg gcd(f, x^{p^steps} − x).
    pub fn gcd_degree(&self) -> usize {
        let diff = sub(self.ctx, &self.current, &Poly::x(self.ctx));
        gcd(self.ctx, &self.modulus, &diff)
            .degree()
            .expect("gcd with a nonzero polynomial is nonzero")
    }
}

/// Degree of gcd(f, x^{p^m} − x), without materializing x^{p^m} − x.
pub fn poly_gcd_deg(ctx: &FieldCtx, f: &Poly, m: u64) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut orbit = FrobeniusOrbit::new(ctx, f)?;
    orbit.advance(m);
    Ok(orbit.gcd_degree())
}

/// Distinct-degree test: gcd(g, x^{p^i} − x) = 1 for 1 ≤ i ≤ deg g / 2.
pub(crate) fn is_irreducible(prime: &FieldCtx, coeffs: &[u64]) -> bool {
    let g = Poly::from_prime_coeffs(prime, coeffs);
    let d = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let mut orbit = FrobeniusOrbit::new(prime, &g).expect("nonzero");
    for _ in 1..=d / 2 {
        orbit.advance(1);
        if orbit.gcd_degree() != 0 {
            return false;
        }
    }
    true
}

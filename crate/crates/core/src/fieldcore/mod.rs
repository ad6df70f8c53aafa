//! Finite fields F_p and F_{p^d} in the power basis of a fixed monic modulus,
//! dense polynomials over them, and field embeddings.

pub mod embed;
pub mod poly;

pub use embed::{embed_element, Embedding};
pub use poly::{poly_gcd_deg, Poly};

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Residues are stored in `u64`; products of two residues must fit as well.
pub const MAX_PRIME: u64 = u32::MAX as u64;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a.is_multiple_of(p) {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_mod(a, p - 2, p))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Checks that `p` is usable as the characteristic of a context.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::NotOdd(p));
    }
    Ok(())
}

/// An element of F_{p^d}: `d` residues, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The residue if this element lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Compares by the integer encoding c₀ + c₁p + … + c_{d−1}p^{d−1}.
    pub fn cmp_encoding(&self, other: &FieldElem) -> Ordering {
        for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", format_residues(&self.coeffs))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_residues(&self.coeffs))
    }
}

/// Parses the comma-separated residue format, constant term first.
pub fn parse_residues(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad residue {s:?} in {text:?}")))
        })
        .collect()
}

pub fn format_residues(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A concrete model of F_{p^d}.
///
/// For `d > 1` the field is F_p[x]/(g) for a monic irreducible `g` of degree
/// `d`. The context also caches the Frobenius matrix and the traces of the
/// basis monomials, both derived from `g` at construction.
#[derive(Clone)]
pub struct FieldCtx {
    p: u64,
    degree: usize,
    /// Full monic modulus, constant first, length `degree + 1`; `None` for F_p.
    modulus: Option<Vec<u64>>,
    /// Nonzero `(j, t)` with x^d ≡ Σ t·x^j.
    tail: Vec<(usize, u64)>,
    /// Column `u` holds the coordinates of (x^u)^p.
    frob_cols: Vec<Vec<u64>>,
    /// Tr(x^u) for `u < degree`.
    basis_traces: Vec<u64>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            Some(m) => write!(f, "F_{}^{}[{}]", self.p, self.degree, format_residues(m)),
            None => write!(f, "F_{}", self.p),
        }
    }
}

impl FieldCtx {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<FieldCtx> {
        check_odd_prime(p)?;
        Ok(FieldCtx {
            p,
            degree: 1,
            modulus: None,
            tail: Vec::new(),
            frob_cols: Vec::new(),
            basis_traces: vec![1],
        })
    }

    /// Builds F_{p^d}. With no modulus, the monic irreducible of degree `d`
    /// with the smallest coefficient encoding is chosen.
    pub fn new(p: u64, d: usize, modulus: Option<&[u64]>) -> Result<FieldCtx> {
        check_odd_prime(p)?;
        if d == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if let Some(m) = modulus {
            if m.len() != d + 1 || m[d] != 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected a monic polynomial of degree {d}, got {}",
                    format_residues(m)
                )));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidModulus(format!(
                    "coefficients must lie in [0, {p})"
                )));
            }
        }
        if d == 1 {
            return FieldCtx::prime(p);
        }
        let prime = FieldCtx::prime(p)?;
        let modulus = match modulus {
            Some(m) => {
                if !poly::is_irreducible(&prime, m) {
                    return Err(Error::ModulusReducible(p));
                }
                m.to_vec()
            }
            None => default_modulus(&prime, d),
        };
        Ok(FieldCtx::from_irreducible(p, modulus))
    }

    pub fn shared(p: u64, d: usize, modulus: Option<&[u64]>) -> Result<Arc<FieldCtx>> {
        FieldCtx::new(p, d, modulus).map(Arc::new)
    }

    fn from_irreducible(p: u64, modulus: Vec<u64>) -> FieldCtx {
        let d = modulus.len() - 1;
        let tail = (0..d)
            .filter(|&j| modulus[j] != 0)
            .map(|j| (j, (p - modulus[j]) % p))
            .collect();
        let mut ctx = FieldCtx {
            p,
            degree: d,
            modulus: Some(modulus),
            tail,
            frob_cols: Vec::new(),
            basis_traces: Vec::new(),
        };
        ctx.basis_traces = newton_power_sums(p, ctx.modulus.as_ref().unwrap());
        let x_p = ctx.pow_u64(&ctx.generator(), p);
        let mut col = ctx.one();
        let mut cols = Vec::with_capacity(d);
        for _ in 0..d {
            cols.push(col.coeffs.clone());
            col = ctx.mul(&col, &x_p);
        }
        ctx.frob_cols = cols;
        ctx
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    /// p^d.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    /// p^d when it fits in 128 bits.
    pub fn order_u128(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_prime(1)
    }

    pub fn from_prime(&self, c: u64) -> FieldElem {
        let mut coeffs = vec![0; self.degree];
        coeffs[0] = c % self.p;
        FieldElem { coeffs }
    }

    /// The class of x, i.e. the root of the modulus generating the power basis.
    pub fn generator(&self) -> FieldElem {
        if self.degree == 1 {
            // F_p has no adjoined root; x ≡ −c₀ only for a linear modulus.
            return self.zero();
        }
        let mut coeffs = vec![0; self.degree];
        coeffs[1] = 1;
        FieldElem { coeffs }
    }

    /// The basis element x^u.
    pub fn basis(&self, u: usize) -> FieldElem {
        let mut coeffs = vec![0; self.degree];
        coeffs[u] = 1;
        FieldElem { coeffs }
    }

    /// Validates residues; shorter inputs are zero-padded.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.degree {
            return Err(Error::FieldMismatch(format!(
                "{} residues given for a field of degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Parse(format!("residue {c} is not in [0, {})", self.p)));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.degree, 0);
        Ok(FieldElem { coeffs: v })
    }

    pub(crate) fn elem_unchecked(&self, coeffs: Vec<u64>) -> FieldElem {
        debug_assert_eq!(coeffs.len(), self.degree);
        FieldElem { coeffs }
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElem> {
        self.element(&parse_residues(text)?)
    }

    /// The element whose encoding is `code` (base-p digits, constant first).
    pub fn element_from_encoding(&self, mut code: u128) -> FieldElem {
        let mut coeffs = vec![0; self.degree];
        for c in coeffs.iter_mut() {
            *c = (code % self.p as u128) as u64;
            code /= self.p as u128;
        }
        FieldElem { coeffs }
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter {
            ctx: self,
            next: Some(vec![0; self.degree]),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + p - y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn scale(&self, a: &FieldElem, c: u64) -> FieldElem {
        let p = self.p;
        let c = c % p;
        FieldElem {
            coeffs: a.coeffs.iter().map(|&x| x * c % p).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: self.mul_slices(&a.coeffs, &b.coeffs),
        }
    }

    /// a·x, a shift followed by one reduction step. In F_p this is the zero map,
    /// matching `generator()`.
    pub fn mul_by_generator(&self, a: &FieldElem) -> FieldElem {
        let d = self.degree;
        if d == 1 {
            return self.zero();
        }
        let mut acc = vec![0u64; d + 1];
        acc[1..].copy_from_slice(&a.coeffs);
        self.reduce_wide(&mut acc);
        acc.truncate(d);
        FieldElem { coeffs: acc }
    }

    pub(crate) fn mul_slices(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let d = self.degree;
        if d == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut acc = vec![0u64; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x * y) % p;
            }
        }
        self.reduce_wide(&mut acc);
        acc.truncate(d);
        acc
    }

    /// Reduces a coefficient vector of length < 2d modulo the modulus in place.
    fn reduce_wide(&self, acc: &mut [u64]) {
        let p = self.p;
        let d = self.degree;
        for k in (d..acc.len()).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            acc[k] = 0;
            for &(j, t) in &self.tail {
                let idx = k - d + j;
                acc[idx] = (acc[idx] + c * t) % p;
            }
        }
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow_u64(&self, a: &FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn pow(&self, a: &FieldElem, exp: &BigUint) -> FieldElem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(&acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree == 1 {
            return Ok(self.from_prime(inv_mod(a.coeffs[0], self.p)?));
        }
        let exp = self.order() - BigUint::from(2u32);
        Ok(self.pow(a, &exp))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// x^{p^j}.
    pub fn frobenius(&self, x: &FieldElem, j: u64) -> FieldElem {
        if self.degree == 1 {
            return x.clone();
        }
        let mut cur = x.clone();
        for _ in 0..(j % self.degree as u64) {
            cur = self.frobenius_once(&cur);
        }
        cur
    }

    fn frobenius_once(&self, x: &FieldElem) -> FieldElem {
        let p = self.p;
        let mut out = vec![0u64; self.degree];
        for (u, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.frob_cols[u]) {
                *o = (*o + c * m) % p;
            }
        }
        FieldElem { coeffs: out }
    }

    /// Absolute trace Tr_{d}(x) ∈ F_p.
    pub fn trace(&self, x: &FieldElem) -> u64 {
        let p = self.p;
        x.coeffs
            .iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| (acc + c * t) % p)
    }

    /// Tr(x^u) for each basis monomial.
    pub fn basis_traces(&self) -> &[u64] {
        &self.basis_traces
    }

    /// Quadratic character of F_{p^d}: 0, 1 or −1.
    pub fn quadratic_character(&self, a: &FieldElem) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.degree == 1 {
            return crate::quadform::legendre(a.coeffs[0], self.p);
        }
        let exp = (self.order() - BigUint::one()) >> 1u32;
        if self.pow(a, &exp) == self.one() {
            1
        } else {
            -1
        }
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_minus_one(&self, a: &FieldElem) -> bool {
        a.coeffs[0] == self.p - 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// The d×d matrix (column-major, columns are images of the basis) of the
    /// F_p-linear map y ↦ y^{p^j}.
    pub fn frobenius_matrix(&self, j: u64) -> Vec<Vec<u64>> {
        (0..self.degree)
            .map(|u| self.frobenius(&self.basis(u), j).coeffs)
            .collect()
    }
}

/// Power sums s_u = Tr(x^u), u < d, of the roots of a monic polynomial.
fn newton_power_sums(p: u64, modulus: &[u64]) -> Vec<u64> {
    let d = modulus.len() - 1;
    // elementary-style coefficients: g = x^d + a_1 x^{d-1} + ... + a_d
    let a = |i: usize| modulus[d - i];
    let mut s = vec![0u64; d];
    s[0] = d as u64 % p;
    for k in 1..d {
        let mut acc = (k as u64 % p) * a(k) % p;
        for i in 1..k {
            acc = (acc + a(i) * s[k - i]) % p;
        }
        s[k] = (p - acc) % p;
    }
    s
}

fn default_modulus(prime: &FieldCtx, d: usize) -> Vec<u64> {
    let p = prime.p();
    let mut low = vec![0u64; d];
    loop {
        // constant term zero means divisibility by x
        if low[0] != 0 {
            let mut candidate = low.clone();
            candidate.push(1);
            if poly::is_irreducible(prime, &candidate) {
                return candidate;
            }
        }
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < d, "monic irreducible polynomials exist in every degree");
        }
    }
}

pub struct ElementIter<'a> {
    ctx: &'a FieldCtx,
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = FieldElem;

    fn next(&mut self) -> Option<FieldElem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let p = self.ctx.p;
        let mut i = 0;
        let mut done = true;
        while i < succ.len() {
            succ[i] += 1;
            if succ[i] < p {
                done = false;
                break;
            }
            succ[i] = 0;
            i += 1;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(FieldElem { coeffs: cur })
    }
}

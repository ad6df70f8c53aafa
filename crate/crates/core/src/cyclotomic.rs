//! Exact arithmetic in ℤ[ζ_p] over the power basis 1, ζ, …, ζ^{p−2}.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::evaluator::ExpSumValue;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicInt {
    p: u64,
    coords: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(p: u64) -> CyclotomicInt {
        CyclotomicInt {
            p,
            coords: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int(p: u64, value: BigInt) -> CyclotomicInt {
        let mut out = CyclotomicInt::zero(p);
        out.coords[0] = value;
        out
    }

    pub fn one(p: u64) -> CyclotomicInt {
        CyclotomicInt::from_int(p, BigInt::one())
    }

    /// ζ^j for any integer j.
    pub fn zeta_pow(p: u64, j: i64) -> CyclotomicInt {
        let mut counts = vec![0u64; p as usize];
        counts[j.rem_euclid(p as i64) as usize] = 1;
        CyclotomicInt::from_trace_counts(p, &counts)
    }

    /// Σ counts[i]·ζ^i.
    pub fn from_trace_counts(p: u64, counts: &[u64]) -> CyclotomicInt {
        assert_eq!(counts.len(), p as usize, "one count per residue class");
        CyclotomicInt::reduce(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Reduces a length-p vector using ζ^{p−1} = −(1 + ζ + … + ζ^{p−2}).
    fn reduce(p: u64, mut full: Vec<BigInt>) -> CyclotomicInt {
        let top = full.pop().expect("length p");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CyclotomicInt { p, coords: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    fn same_prime(&self, other: &CyclotomicInt) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::MixedPrimes(self.p, other.p))
        }
    }

    pub fn add(&self, other: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.same_prime(other)?;
        Ok(CyclotomicInt {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CyclotomicInt {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> CyclotomicInt {
        CyclotomicInt {
            p: self.p,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.same_prime(other)?;
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Ok(CyclotomicInt::reduce(self.p, full))
    }

    pub fn pow(&self, mut exp: u64) -> CyclotomicInt {
        let mut base = self.clone();
        let mut acc = CyclotomicInt::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same prime");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same prime");
            }
        }
        acc
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CyclotomicInt {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (j, c) in self.coords.iter().enumerate() {
            full[(p - j) % p] += c;
        }
        CyclotomicInt::reduce(self.p, full)
    }

    /// Floating-point value with ζ = e^{2πi/p}.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coords.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * j as f64 / self.p as f64;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match j {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*z")?,
                _ => write!(f, "{mag}*z^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// g_p = Σ_{x ∈ F_p} ζ^{x²}.
pub fn gauss_cyclotomic(p: u64) -> CyclotomicInt {
    let mut counts = vec![0u64; p as usize];
    for x in 0..p {
        counts[((x * x) % p) as usize] += 1;
    }
    CyclotomicInt::from_trace_counts(p, &counts)
}

/// g_p² = (−1)^{(p−1)/2}·p.
pub fn gauss_square(p: u64) -> BigInt {
    if p % 4 == 1 {
        BigInt::from(p)
    } else {
        -BigInt::from(p)
    }
}

/// t·g_p^r·p^l in ℤ[ζ_p].
pub fn closed_form(p: u64, r: u64, l: u64, t: i8) -> CyclotomicInt {
    let mut scalar = gauss_square(p).pow((r / 2) as u32) * BigInt::from(p).pow(l as u32);
    if t < 0 {
        scalar = -scalar;
    }
    if r % 2 == 1 {
        gauss_cyclotomic(p).scale(&scalar)
    } else {
        CyclotomicInt::from_int(p, scalar)
    }
}

pub fn expsum_to_cyclotomic(v: &ExpSumValue) -> CyclotomicInt {
    closed_form(v.p, v.n_total - v.l, v.l, v.t)
}

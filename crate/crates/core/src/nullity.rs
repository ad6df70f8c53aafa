//! The associate p-polynomial f* and the nullities l_m(f).

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldcore::poly::{FrobeniusOrbit, Poly};
use crate::fieldcore::{format_residues, Embedding, FieldCtx, FieldElem};
use crate::linalg;

/// Default ceiling on splitting-exponent iterations, per unit of base degree.
pub const SEARCH_ITERATIONS: u64 = 512;

/// f(x) = Σ a_i x^{p^{α_i}+1} over F_{p^n}, with strictly increasing α_i and
/// nonzero coefficients.
#[derive(Clone, Debug)]
pub struct QuadFunc {
    ctx: FieldCtx,
    terms: Vec<(FieldElem, u64)>,
}

impl QuadFunc {
    /// Builds f from `(a_i, α_i)` pairs in any order. Zero coefficients below
    /// the top exponent are dropped; a zero top coefficient is an error.
    pub fn new(ctx: &FieldCtx, mut terms: Vec<(FieldElem, u64)>) -> Result<QuadFunc> {
        if terms.is_empty() {
            return Err(Error::InvalidFunction("no terms".into()));
        }
        for (a, _) in &terms {
            if a.coeffs().len() != ctx.degree() {
                return Err(Error::FieldMismatch(format!(
                    "coefficient {a} does not belong to a field of degree {}",
                    ctx.degree()
                )));
            }
        }
        terms.sort_by_key(|t| t.1);
        if terms.windows(2).any(|w| w[0].1 == w[1].1) {
            return Err(Error::InvalidFunction("repeated exponent".into()));
        }
        if terms.last().unwrap().0.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        terms.retain(|t| !t.0.is_zero());
        Ok(QuadFunc {
            ctx: ctx.clone(),
            terms,
        })
    }

    /// Σ_{i=0}^{k} coeffs[i]·x^{p^i+1}.
    pub fn dense(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> Result<QuadFunc> {
        let terms = coeffs.into_iter().zip(0u64..).collect();
        QuadFunc::new(ctx, terms)
    }

    /// Dense form with prime-field coefficients.
    pub fn from_prime_coeffs(ctx: &FieldCtx, coeffs: &[u64]) -> Result<QuadFunc> {
        let elems = coeffs
            .iter()
            .map(|&c| ctx.element(&[c]))
            .collect::<Result<Vec<_>>>()?;
        QuadFunc::dense(ctx, elems)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// Base degree n.
    pub fn n(&self) -> u64 {
        self.ctx.degree() as u64
    }

    pub fn terms(&self) -> &[(FieldElem, u64)] {
        &self.terms
    }

    pub fn alphas(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    /// The top exponent α = α_k.
    pub fn alpha(&self) -> u64 {
        self.terms.last().unwrap().1
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The same function with coefficients mapped into a larger field.
    pub fn embed_into(&self, dst: &FieldCtx) -> Result<QuadFunc> {
        if dst == &self.ctx {
            return Ok(self.clone());
        }
        let e = Embedding::new(&self.ctx, dst)?;
        self.map_coeffs(dst, |a| e.apply(a))
    }

    /// The function with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &FieldElem) -> Result<QuadFunc> {
        self.map_coeffs(&self.ctx, |a| self.ctx.mul(a, c))
    }

    fn map_coeffs(&self, dst: &FieldCtx, map: impl Fn(&FieldElem) -> FieldElem) -> Result<QuadFunc> {
        let terms = self.terms.iter().map(|(a, al)| (map(a), *al)).collect();
        QuadFunc::new(dst, terms)
    }

    /// f(x) for x in the function's own field.
    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let k = &self.ctx;
        self.terms.iter().fold(k.zero(), |acc, (a, al)| {
            let v = k.mul(a, &k.mul(&k.frobenius(x, *al), x));
            k.add(&acc, &v)
        })
    }

    /// Coefficients as residue strings with their exponents.
    pub fn describe(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(a, al)| TermJson {
                a: format_residues(a.coeffs()),
                alpha: *al,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub a: String,
    pub alpha: u64,
}

/// Σ c_j z^{p^j} over F_{p^n}.
#[derive(Clone, Debug)]
pub struct LinearizedPoly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl LinearizedPoly {
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// The ordinary polynomial of degree p^{2α}.
    pub fn to_poly(&self) -> Poly {
        let p = self.ctx.p() as usize;
        let top = p.pow((self.coeffs.len() - 1) as u32);
        let mut dense = vec![self.ctx.zero(); top + 1];
        let mut pos = 1;
        for c in &self.coeffs {
            dense[pos] = c.clone();
            pos *= p;
        }
        Poly::from_elems(&self.ctx, &dense)
    }

    /// Evaluates at z in an extension `dst` of the coefficient field.
    pub fn eval_in(&self, dst: &FieldCtx, emb: &Embedding, z: &FieldElem) -> FieldElem {
        let mut acc = dst.zero();
        let mut zj = z.clone();
        for c in &self.coeffs {
            acc = dst.add(&acc, &dst.mul(&emb.apply(c), &zj));
            zj = dst.frobenius(&zj, 1);
        }
        acc
    }
}

/// f*(z) = Σ_i (a_i^{p^α} z^{p^{α+α_i}} + a_i^{p^{α−α_i}} z^{p^{α−α_i}}).
pub fn build_fstar(f: &QuadFunc) -> LinearizedPoly {
    let k = f.ctx();
    let alpha = f.alpha();
    let mut coeffs = vec![k.zero(); (2 * alpha + 1) as usize];
    for (a, ai) in f.terms() {
        let hi = (alpha + ai) as usize;
        coeffs[hi] = k.add(&coeffs[hi], &k.frobenius(a, alpha));
        let lo = (alpha - ai) as usize;
        coeffs[lo] = k.add(&coeffs[lo], &k.frobenius(a, alpha - ai));
    }
    LinearizedPoly {
        ctx: k.clone(),
        coeffs,
    }
}

fn check_multiple(f: &QuadFunc, m: u64) -> Result<()> {
    if m == 0 || !m.is_multiple_of(f.n()) {
        return Err(Error::NotMultipleOfBase { m, n: f.n() });
    }
    Ok(())
}

/// log_p of a gcd degree, which must be an exact power of p.
fn log_p(degree: usize, p: u64) -> Result<u64> {
    let mut d = degree as u64;
    let mut l = 0;
    while d > 1 && d.is_multiple_of(p) {
        d /= p;
        l += 1;
    }
    if d == 1 {
        Ok(l)
    } else {
        Err(Error::NonPPowerDegree(format!("{degree} is not a power of {p}")))
    }
}

/// l_m(f) = log_p deg gcd(f*, x^{p^m} − x).
pub fn nullity_at(f: &QuadFunc, m: u64) -> Result<u64> {
    check_multiple(f, m)?;
    if f.alpha() == 0 {
        return Ok(0);
    }
    let fstar = build_fstar(f).to_poly();
    let deg = crate::fieldcore::poly_gcd_deg(f.ctx(), &fstar, m)?;
    log_p(deg, f.p())
}

/// l_m(f) as the kernel dimension of z ↦ f*(z) on F_{p^m}, independent of
/// the polynomial gcd route.
pub fn nullity_by_kernel(f: &QuadFunc, m: u64) -> Result<u64> {
    check_multiple(f, m)?;
    let work = FieldCtx::new(f.p(), m as usize, None)?;
    let emb = Embedding::new(f.ctx(), &work)?;
    let fstar = build_fstar(f);
    let columns: Vec<Vec<u64>> = (0..work.degree())
        .map(|u| fstar.eval_in(&work, &emb, &work.basis(u)).coeffs().to_vec())
        .collect();
    let matrix = linalg::transpose(&columns);
    Ok(m - linalg::rank(&matrix, f.p()) as u64)
}

/// {(m, l_m)} for the multiples m of n dividing s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullityProfile {
    pub p: u64,
    pub n: u64,
    pub coeffs: Vec<TermJson>,
    pub s: u64,
    pub entries: Vec<(u64, u64)>,
}

impl NullityProfile {
    /// l_m = l_{gcd(m, s)}.
    pub fn query(&self, m: u64) -> Result<u64> {
        if m == 0 || !m.is_multiple_of(self.n) {
            return Err(Error::NotMultipleOfBase { m, n: self.n });
        }
        let g = m.gcd(&self.s);
        self.entries
            .iter()
            .find(|e| e.0 == g)
            .map(|e| e.1)
            .ok_or_else(|| Error::InternalInconsistency(format!("profile lacks divisor {g}")))
    }
}

/// l_{i·n} for i = 1, 2, … until the value 2α appears.
fn search(f: &QuadFunc, budget: u64) -> Result<Vec<u64>> {
    let target = 2 * f.alpha();
    if target == 0 {
        return Ok(vec![0]);
    }
    let fstar = build_fstar(f).to_poly();
    let mut orbit = FrobeniusOrbit::new(f.ctx(), &fstar)?;
    let mut ls = Vec::new();
    for _ in 0..budget {
        orbit.advance(f.n());
        let l = log_p(orbit.gcd_degree(), f.p())?;
        ls.push(l);
        if l == target {
            return Ok(ls);
        }
    }
    Err(Error::SearchBudgetExceeded(budget * f.n()))
}

/// Least multiple s of n with l_s = 2α.
pub fn splitting_exponent(f: &QuadFunc) -> Result<u64> {
    Ok(nullity_profile(f)?.s)
}

pub fn nullity_profile(f: &QuadFunc) -> Result<NullityProfile> {
    nullity_profile_with_budget(f, SEARCH_ITERATIONS)
}

pub fn nullity_profile_with_budget(f: &QuadFunc, budget: u64) -> Result<NullityProfile> {
    let ls = search(f, budget)?;
    let n = f.n();
    let steps = ls.len() as u64;
    let s = steps * n;
    let entries: Vec<(u64, u64)> = (1..=steps)
        .filter(|d| steps.is_multiple_of(*d))
        .map(|d| (d * n, ls[(d - 1) as usize]))
        .collect();
    let least = entries.iter().find(|e| e.1 == 2 * f.alpha()).map(|e| e.0);
    if least != Some(s) {
        return Err(Error::InternalInconsistency(format!(
            "splitting exponent {s} is not minimal among its divisors"
        )));
    }
    Ok(NullityProfile {
        p: f.p(),
        n,
        coeffs: f.describe(),
        s,
        entries,
    })
}

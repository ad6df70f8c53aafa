//! Relative and explicit formulas for the type t_N(f).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::cyclotomic::{closed_form, CyclotomicInt};
use crate::error::{Error, Result};
use crate::evaluator::{ExpSumValue, Step, StepKind};
use crate::fieldcore::{is_prime, Embedding, FieldCtx, FieldElem};
use crate::linalg;
use crate::nullity::{build_fstar, QuadFunc};
use crate::quadform::{legendre, smallest_nonsquare};

/// ν_q(x); the valuation of zero is reported as an error.
pub fn vp(x: u64, q: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::ZeroValuation);
    }
    let mut x = x;
    let mut v = 0;
    while x.is_multiple_of(q) {
        x /= q;
        v += 1;
    }
    Ok(v)
}

/// ν_q(x) with ν_q(0) = ∞ encoded as `None`.
pub fn vp_inf(x: u64, q: u64) -> Option<u32> {
    vp(x, q).ok()
}

/// Multiplicative order of p modulo q.
pub fn oq(q: u64, p: u64) -> Result<u64> {
    if q < 2 || p.gcd(&q) != 1 {
        return Err(Error::ConditionViolated(format!("{p} is not a unit modulo {q}")));
    }
    let base = p % q;
    let mut acc = base;
    let mut order = 1;
    while acc != 1 % q {
        acc = (acc as u128 * base as u128 % q as u128) as u64;
        order += 1;
    }
    Ok(order)
}

fn big_pow(p: u64, e: u64) -> BigUint {
    BigUint::from(p).pow(e as u32)
}

/// gcd(p^{α_1}+1, …, p^{α_k}+1): p^{gcd α_i}+1 when every ν₂(α_i) is the same
/// finite value, otherwise 2.
pub fn gcd_plus_plus(p: u64, exponents: &[u64]) -> BigUint {
    let first = exponents.first().and_then(|&a| vp_inf(a, 2));
    let balanced = first.is_some() && exponents.iter().all(|&a| vp_inf(a, 2) == first);
    if balanced {
        let g = exponents.iter().fold(0u64, |acc, &a| acc.gcd(&a));
        big_pow(p, g) + 1u32
    } else {
        BigUint::from(2u32)
    }
}

/// gcd(p^α+1, p^β−1): p^{gcd(α,β)}+1 when ν₂(β) > ν₂(α), otherwise 2.
pub fn gcd_plus_minus(p: u64, alpha: u64, beta: u64) -> BigUint {
    let greater = match (vp_inf(beta, 2), vp_inf(alpha, 2)) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(b), Some(a)) => b > a,
    };
    if greater {
        big_pow(p, alpha.gcd(&beta)) + 1u32
    } else {
        BigUint::from(2u32)
    }
}

/// Type and nullity of Tr_N(f) at one degree N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeState {
    pub p: u64,
    pub n_total: u64,
    pub l: u64,
    pub t: i8,
}

/// t_{q^s N} = t_N·(q/p)^{s·l_N}·(−1)^{(p−1)Δl/4 + Δl/o_q(p)} with
/// Δl = l_{q^s N} − l_N.
pub fn lift_odd_prime(state: TypeState, q: u64, s: u32, l_target: u64) -> Result<TypeState> {
    let p = state.p;
    if q == 2 || q == p || !is_prime(q) {
        return Err(Error::ConditionViolated(format!(
            "{q} is not an odd prime different from {p}"
        )));
    }
    if s == 0 {
        return Ok(state);
    }
    if l_target < state.l {
        return Err(Error::InternalInconsistency(format!(
            "nullity decreased from {} to {l_target}",
            state.l
        )));
    }
    let dl = l_target - state.l;
    if !dl.is_multiple_of(2) {
        return Err(Error::ParityViolation(format!("nullity jump {dl} is odd")));
    }
    let order = oq(q, p)?;
    if !dl.is_multiple_of(order) {
        return Err(Error::ParityViolation(format!(
            "o_{q}({p}) = {order} does not divide the nullity jump {dl}"
        )));
    }
    let mut t = state.t;
    if legendre(q, p) == -1 && (s as u64 * state.l) % 2 == 1 {
        t = -t;
    }
    if ((p - 1) / 2 * (dl / 2) + dl / order) % 2 == 1 {
        t = -t;
    }
    Ok(TypeState {
        p,
        n_total: state.n_total * q.pow(s),
        l: l_target,
        t,
    })
}

/// f̃ = Σ a_i β^{(p^{α_i}+1)/2} x^{p^{α_i}+1} over `base`, β the smallest
/// nonsquare of `base`.
pub fn make_tilde(f: &QuadFunc, base: &FieldCtx) -> Result<QuadFunc> {
    make_tilde_with(f, base, &smallest_nonsquare(base))
}

/// f̃ for a caller-chosen nonsquare β.
pub fn make_tilde_with(f: &QuadFunc, base: &FieldCtx, beta: &FieldElem) -> Result<QuadFunc> {
    if base.quadratic_character(beta) != -1 {
        return Err(Error::ConditionViolated(format!("{beta} is not a nonsquare")));
    }
    let g = f.embed_into(base)?;
    let terms = g
        .terms()
        .iter()
        .map(|(a, al)| {
            let e = (big_pow(f.p(), *al) + 1u32) >> 1u32;
            (base.mul(a, &base.pow(beta, &e)), *al)
        })
        .collect();
    QuadFunc::new(base, terms)
}

/// t_{2^s N} from t_N(f) and t_N(f̃).
pub fn lift_two(state: TypeState, tilde: TypeState, s: u32, l_target: u64) -> Result<TypeState> {
    if state.p != tilde.p || state.n_total != tilde.n_total {
        return Err(Error::ConditionViolated("states are at different bases".into()));
    }
    if s == 0 {
        return Ok(state);
    }
    if !(state.l + tilde.l + l_target).is_multiple_of(2) {
        return Err(Error::InternalInconsistency(format!(
            "l = {}, l~ = {}, l_(2^s N) = {l_target} have odd sum",
            state.l, tilde.l
        )));
    }
    let p = state.p;
    let mut t = state.t * tilde.t;
    if (state.l + tilde.l) % 2 == 1 && ((p * p - 1) / 8 * s as u64) % 2 == 1 {
        t = -t;
    }
    Ok(TypeState {
        p,
        n_total: state.n_total << s,
        l: l_target,
        t,
    })
}

/// Largest s allowed by s ≤ min ν_p(α_i) − ν_p(N), or `None` when unbounded
/// (every α_i is zero).
pub fn lift_p_bound(f: &QuadFunc, n_total: u64) -> Result<Option<u32>> {
    let base = vp(n_total, f.p())?;
    let min = f.alphas().into_iter().filter_map(|a| vp_inf(a, f.p())).min();
    Ok(min.map(|m| m.saturating_sub(base)))
}

/// (p^s N, p^s l, t).
pub fn lift_p(state: TypeState, f: &QuadFunc, s: u32) -> Result<TypeState> {
    if s == 0 {
        return Ok(state);
    }
    let p = state.p;
    if lift_p_bound(f, state.n_total)?.is_some_and(|bound| s > bound) {
        return Err(Error::ConditionViolated(format!(
            "s = {s} exceeds min ν_p(α_i) − ν_p({})",
            state.n_total
        )));
    }
    let scale = p.pow(s);
    Ok(TypeState {
        p,
        n_total: state.n_total * scale,
        l: state.l * scale,
        t: state.t,
    })
}

/// S(f, pN) = p^{(p−3)(N+l)/2}·|S|²·conj(S) for S = S(f, N).
pub fn lift_p_value(n_total: u64, l: u64, s: &CyclotomicInt) -> CyclotomicInt {
    let p = s.p();
    let power = BigUint::from(p).pow(((p - 3) * (n_total + l) / 2) as u32);
    let norm = s.mul(&s.conj()).expect("same prime");
    norm.mul(&s.conj())
        .expect("same prime")
        .scale(&power.into())
}

/// Common ν₂ of the α_i, if they share one (all α_i ≥ 1).
pub fn balanced_nu(f: &QuadFunc) -> Option<u32> {
    let nus: Vec<Option<u32>> = f.alphas().into_iter().map(|a| vp_inf(a, 2)).collect();
    let first = nus[0]?;
    nus.iter().all(|&v| v == Some(first)).then_some(first)
}

/// t_N = (−1)^{((p−1)²2^ν/4 + 1)(N − l)/2^{ν+1}} for balanced f with ν₂(N) > ν.
pub fn type_balanced(f: &QuadFunc, n_total: u64, l: u64) -> Result<i8> {
    let nu = balanced_nu(f)
        .ok_or_else(|| Error::NotApplicable("exponents do not share a 2-adic order".into()))?;
    if vp(n_total, 2)? <= nu {
        return Err(Error::NotApplicable(format!(
            "ν₂({n_total}) does not exceed ν = {nu}"
        )));
    }
    let unit = 1u64 << (nu + 1);
    if !l.is_multiple_of(unit) {
        return Err(Error::DivisibilityViolated(format!("2^{} does not divide l = {l}", nu + 1)));
    }
    let p = f.p();
    // (p−1)²/4·2^ν is odd only when ν = 0 and (p−1)/2 is odd
    let first = if nu == 0 { (p - 1) / 2 % 2 } else { 0 };
    let factor = (first + 1) % 2;
    let count = (n_total - l) / unit;
    Ok(if factor * count % 2 == 1 { -1 } else { 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialCase {
    I,
    II,
    III,
}

impl MonomialCase {
    pub fn label(self) -> &'static str {
        match self {
            MonomialCase::I => "i",
            MonomialCase::II => "ii",
            MonomialCase::III => "iii",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialEval {
    pub value: ExpSumValue,
    pub case: MonomialCase,
}

/// S(a x^{p^α+1}, N) in closed form. `a` lives in `ctx`, whose degree must
/// divide N; powers of a are taken there, since they agree with the powers in
/// F_{p^N}.
pub fn monomial_eval(ctx: &FieldCtx, a: &FieldElem, alpha: u64, n_total: u64) -> Result<MonomialEval> {
    if a.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let n = ctx.degree() as u64;
    if n_total == 0 || !n_total.is_multiple_of(n) {
        return Err(Error::NotMultipleOfBase { m: n_total, n });
    }
    let p = ctx.p();
    let nu_n = vp(n_total, 2)?;
    let nu_a = vp_inf(alpha, 2);
    let (case, l, t) = match nu_a {
        Some(na) if nu_n > na => {
            let g = (2 * alpha).gcd(&n_total);
            let e = (big_pow(p, alpha) - 1u32) * (big_pow(p, n_total) - 1u32) / (big_pow(p, g) - 1u32);
            let v = ctx.pow(a, &e);
            let (case, hit) = if nu_n == na + 1 {
                (MonomialCase::II, ctx.is_minus_one(&v))
            } else {
                (MonomialCase::III, ctx.is_one(&v))
            };
            // sign of the integer value, then t from S = t·g^{N−l}·p^l
            let (positive, l) = match (case, hit) {
                (MonomialCase::II, true) => (true, g),
                (MonomialCase::II, false) => (false, 0),
                (_, true) => (false, g),
                (_, false) => (true, 0),
            };
            let flip = (p - 1) / 2 % 2 == 1 && (n_total - l) / 2 % 2 == 1;
            let t = if positive != flip { 1 } else { -1 };
            (case, l, t)
        }
        _ => {
            let eta = ctx.pow(a, &((big_pow(p, n_total) - 1u32) >> 1u32));
            let mut t: i8 = if ctx.is_one(&eta) { 1 } else { -1 };
            if n_total.is_multiple_of(2) {
                t = -t;
            }
            (MonomialCase::I, 0, t)
        }
    };
    let step = Step {
        kind: StepKind::Monomial,
        from: n_total,
        to: n_total,
        l,
        t,
        detail: format!("case ({}), alpha = {alpha}", case.label()),
    };
    Ok(MonomialEval {
        value: ExpSumValue {
            p,
            n_total,
            l,
            t,
            provenance: vec![step],
        },
        case,
    })
}

/// The value ζ^{−phase}·S(f,N), or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedSum {
    pub zero: bool,
    pub phase: u64,
    pub base: ExpSumValue,
}

impl ShiftedSum {
    pub fn to_cyclotomic(&self) -> CyclotomicInt {
        let b = &self.base;
        if self.zero {
            return CyclotomicInt::zero(b.p);
        }
        let s = closed_form(b.p, b.n_total - b.l, b.l, b.t);
        CyclotomicInt::zeta_pow(b.p, -(self.phase as i64))
            .mul(&s)
            .expect("same prime")
    }
}

/// S(f + bx, N) from S(f, N): solve f*(x) = b^{p^α} in `work` = F_{p^N}.
pub fn shift_linear(f: &QuadFunc, work: &FieldCtx, b: &FieldElem, value: &ExpSumValue) -> Result<ShiftedSum> {
    if work.degree() as u64 != value.n_total || work.p() != f.p() {
        return Err(Error::FieldMismatch(format!(
            "shift field has degree {}, the value is at N = {}",
            work.degree(),
            value.n_total
        )));
    }
    let p = f.p();
    let emb = Embedding::new(f.ctx(), work)?;
    let fstar = build_fstar(f);
    let columns: Vec<Vec<u64>> = (0..work.degree())
        .map(|u| fstar.eval_in(work, &emb, &work.basis(u)).coeffs().to_vec())
        .collect();
    let matrix = linalg::transpose(&columns);
    let rhs = work.frobenius(b, f.alpha());
    let Some(x) = linalg::solve(&matrix, rhs.coeffs(), p) else {
        return Ok(ShiftedSum {
            zero: true,
            phase: 0,
            base: value.clone(),
        });
    };
    let x0 = work.element(&x)?;
    let g = f.embed_into(work)?;
    Ok(ShiftedSum {
        zero: false,
        phase: work.trace(&g.eval(&x0)),
        base: value.clone(),
    })
}

/// gcd(p^{α_1}+1, …) by big-integer arithmetic.
pub fn gcd_plus_plus_direct(p: u64, exponents: &[u64]) -> BigUint {
    exponents
        .iter()
        .fold(BigUint::from(0u32), |acc, &a| acc.gcd(&(big_pow(p, a) + BigUint::one())))
}

/// gcd(p^α+1, p^β−1) by big-integer arithmetic.
pub fn gcd_plus_minus_direct(p: u64, alpha: u64, beta: u64) -> BigUint {
    (big_pow(p, alpha) + 1u32).gcd(&(big_pow(p, beta) - 1u32))
}

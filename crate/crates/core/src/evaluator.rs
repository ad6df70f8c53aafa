//! Full evaluation of S(f, m·n): planning, lift composition and rendering.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{expsum_to_cyclotomic, CyclotomicInt};
use crate::error::{Error, Result};
use crate::fieldcore::FieldCtx;
use crate::lifts::{self, TypeState};
use crate::nullity::{self, NullityProfile, QuadFunc};
use crate::quadform;

/// Largest degree at which the Gram-matrix route is used as a base case.
pub const DIRECT_LIMIT: u64 = 256;

/// Below this degree evaluations are also checked against the Gram route.
const CROSS_CHECK_LIMIT: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "p-lift")]
    PLift,
    #[serde(rename = "2-lift")]
    TwoLift,
    #[serde(rename = "odd-lift")]
    OddLift,
    #[serde(rename = "balanced")]
    Balanced,
    #[serde(rename = "monomial")]
    Monomial,
    #[serde(rename = "cross-check")]
    CrossCheck,
}

/// One provenance entry: which rule moved the state from degree `from` to
/// `to`, and the resulting nullity and type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub from: u64,
    pub to: u64,
    pub l: u64,
    pub t: i8,
    pub detail: String,
}

/// S(f, N) = t·g_p^{N−l}·p^l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSumValue {
    pub p: u64,
    pub n_total: u64,
    pub l: u64,
    pub t: i8,
    pub provenance: Vec<Step>,
}

impl ExpSumValue {
    /// "t*g^r*p^l" with unit factors and exponents of 1 omitted.
    pub fn render_exact(&self) -> String {
        let r = self.n_total - self.l;
        let mut parts = Vec::new();
        match r {
            0 => {}
            1 => parts.push("g".to_string()),
            _ => parts.push(format!("g^{r}")),
        }
        match self.l {
            0 => {}
            1 => parts.push("p".to_string()),
            l => parts.push(format!("p^{l}")),
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        if self.t < 0 {
            format!("-{body}")
        } else {
            body
        }
    }

    /// t·i^{(p−1)²r/4}·p^{r/2 + l} as a float pair.
    pub fn render_complex(&self) -> (f64, f64) {
        let r = self.n_total - self.l;
        let mag = (self.p as f64).powf(r as f64 / 2.0 + self.l as f64);
        let quarter = ((self.p - 1) * (self.p - 1) / 4 % 4) * (r % 4) % 4;
        let (re, im) = match quarter {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        let sign = self.t as f64;
        (sign * re * mag, sign * im * mag)
    }

    pub fn to_cyclotomic(&self) -> CyclotomicInt {
        expsum_to_cyclotomic(self)
    }

    fn state(&self) -> TypeState {
        TypeState {
            p: self.p,
            n_total: self.n_total,
            l: self.l,
            t: self.t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub p: u64,
    pub n: u64,
    pub m: u64,
    #[serde(rename = "N")]
    pub n_total: u64,
    pub l: u64,
    pub t: i8,
    pub value_exact: String,
    pub value_cyclotomic: Vec<String>,
    pub value_complex: [f64; 2],
    pub provenance: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<String>,
}

impl EvalResult {
    pub fn new(value: &ExpSumValue, n: u64, modulus: Option<&[u64]>) -> EvalResult {
        let (re, im) = value.render_complex();
        EvalResult {
            p: value.p,
            n,
            m: value.n_total / n,
            n_total: value.n_total,
            l: value.l,
            t: value.t,
            value_exact: value.render_exact(),
            value_cyclotomic: value.to_cyclotomic().to_decimal_strings(),
            value_complex: [re, im],
            provenance: value.provenance.clone(),
            modulus: modulus.map(crate::fieldcore::format_residues),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub direct_max: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            direct_max: DIRECT_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanStep {
    Monomial,
    Balanced { nu: u32 },
    Direct { n_total: u64 },
    PLift { s: u32 },
    TwoLift { s: u32 },
    OddLift { q: u64, e: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPlan {
    pub base: u64,
    pub target: u64,
    pub steps: Vec<PlanStep>,
}

fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= m {
        let mut e = 0;
        while m.is_multiple_of(q) {
            m /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// The evaluation strategy for S(f, m·n).
pub fn plan(f: &QuadFunc, m: u64, limits: Limits) -> Result<EvalPlan> {
    if m == 0 {
        return Err(Error::NotMultipleOfBase { m: 0, n: f.n() });
    }
    let target = m * f.n();
    if f.is_monomial() {
        return Ok(EvalPlan {
            base: target,
            target,
            steps: vec![PlanStep::Monomial],
        });
    }
    if let Some(nu) = lifts::balanced_nu(f) {
        if lifts::vp(target, 2)? > nu {
            return Ok(EvalPlan {
                base: target,
                target,
                steps: vec![PlanStep::Balanced { nu }],
            });
        }
    }
    lift_plan(f, m, limits)
}

/// The lift-composition strategy, ignoring the closed-form shortcuts.
pub fn lift_plan(f: &QuadFunc, m: u64, limits: Limits) -> Result<EvalPlan> {
    let n = f.n();
    let p = f.p();
    let target = m * n;
    let factors = factor(m);
    let a = factors.iter().find(|x| x.0 == 2).map_or(0, |x| x.1);
    let c = factors.iter().find(|x| x.0 == p).map_or(0, |x| x.1);
    let mut steps = Vec::new();
    let base;
    let p_lift_ok = c > 0 && lifts::lift_p_bound(f, n)?.is_none_or(|b| c <= b);
    if c == 0 || p_lift_ok {
        if n > limits.direct_max {
            return Err(Error::Unsupported(format!(
                "base degree {n} exceeds the direct limit {}",
                limits.direct_max
            )));
        }
        base = n;
        steps.push(PlanStep::Direct { n_total: n });
        if c > 0 {
            steps.push(PlanStep::PLift { s: c });
        }
    } else {
        let n0 = n * p.pow(c);
        if n0 > limits.direct_max {
            return Err(Error::Unsupported(format!(
                "p-lift condition fails (s = {c}) and the direct fallback degree {n0} exceeds {}",
                limits.direct_max
            )));
        }
        base = n0;
        steps.push(PlanStep::Direct { n_total: n0 });
    }
    let after_p = n * p.pow(c);
    if a > 0 {
        if after_p > limits.direct_max {
            return Err(Error::Unsupported(format!(
                "2-lift needs the twisted function at degree {after_p}, above {}",
                limits.direct_max
            )));
        }
        steps.push(PlanStep::TwoLift { s: a });
    }
    for (q, e) in factors {
        if q != 2 && q != p {
            steps.push(PlanStep::OddLift { q, e });
        }
    }
    Ok(EvalPlan { base, target, steps })
}

fn direct_state(f: &QuadFunc, n_total: u64) -> Result<TypeState> {
    let (t, l) = quadform::type_direct(f, n_total / f.n())?;
    Ok(TypeState {
        p: f.p(),
        n_total,
        l,
        t,
    })
}

fn push(provenance: &mut Vec<Step>, kind: StepKind, from: u64, st: TypeState, detail: String) {
    provenance.push(Step {
        kind,
        from,
        to: st.n_total,
        l: st.l,
        t: st.t,
        detail,
    });
}

/// Runs a plan. `profile` supplies every nullity the lifts need.
pub fn execute(f: &QuadFunc, plan: &EvalPlan, profile: &NullityProfile) -> Result<ExpSumValue> {
    let p = f.p();
    let mut provenance = Vec::new();
    let mut state: Option<TypeState> = None;
    for step in &plan.steps {
        match *step {
            PlanStep::Monomial => {
                let (a, alpha) = &f.terms()[0];
                let ev = lifts::monomial_eval(f.ctx(), a, *alpha, plan.target)?;
                let l = profile.query(plan.target)?;
                if l != ev.value.l {
                    return Err(Error::InternalInconsistency(format!(
                        "monomial nullity {} disagrees with profile nullity {l}",
                        ev.value.l
                    )));
                }
                provenance.extend(ev.value.provenance.iter().cloned());
                state = Some(ev.value.state());
            }
            PlanStep::Balanced { nu } => {
                let l = profile.query(plan.target)?;
                let t = lifts::type_balanced(f, plan.target, l)?;
                let st = TypeState {
                    p,
                    n_total: plan.target,
                    l,
                    t,
                };
                push(&mut provenance, StepKind::Balanced, plan.target, st, format!("nu = {nu}"));
                state = Some(st);
            }
            PlanStep::Direct { n_total } => {
                let st = direct_state(f, n_total)?;
                push(&mut provenance, StepKind::Direct, n_total, st, "gram matrix".into());
                state = Some(st);
            }
            PlanStep::PLift { s } => {
                let cur = state.ok_or_else(|| Error::InternalInconsistency("p-lift without base".into()))?;
                let st = lifts::lift_p(cur, f, s)?;
                let l = profile.query(st.n_total)?;
                if l != st.l {
                    return Err(Error::InternalInconsistency(format!(
                        "p-lift nullity {} disagrees with profile nullity {l}",
                        st.l
                    )));
                }
                push(&mut provenance, StepKind::PLift, cur.n_total, st, format!("s = {s}"));
                state = Some(st);
            }
            PlanStep::TwoLift { s } => {
                let cur = state.ok_or_else(|| Error::InternalInconsistency("2-lift without base".into()))?;
                let base = if cur.n_total == f.n() {
                    f.ctx().clone()
                } else {
                    FieldCtx::new(p, cur.n_total as usize, None)?
                };
                let tilde = lifts::make_tilde(f, &base)?;
                let (tt, tl) = quadform::type_direct(&tilde, 1)?;
                let tilde_state = TypeState {
                    p,
                    n_total: cur.n_total,
                    l: tl,
                    t: tt,
                };
                let l_target = profile.query(cur.n_total << s)?;
                let st = lifts::lift_two(cur, tilde_state, s, l_target)?;
                push(
                    &mut provenance,
                    StepKind::TwoLift,
                    cur.n_total,
                    st,
                    format!("s = {s}, twisted t = {tt}, twisted l = {tl}"),
                );
                state = Some(st);
            }
            PlanStep::OddLift { q, e } => {
                let cur = state.ok_or_else(|| Error::InternalInconsistency("odd lift without base".into()))?;
                let l_target = profile.query(cur.n_total * q.pow(e))?;
                let st = lifts::lift_odd_prime(cur, q, e, l_target)?;
                push(&mut provenance, StepKind::OddLift, cur.n_total, st, format!("q = {q}, s = {e}"));
                state = Some(st);
            }
        }
    }
    let st = state.ok_or_else(|| Error::InternalInconsistency("empty plan".into()))?;
    if st.n_total != plan.target {
        return Err(Error::InternalInconsistency(format!(
            "plan reached degree {} instead of {}",
            st.n_total, plan.target
        )));
    }
    Ok(ExpSumValue {
        p,
        n_total: st.n_total,
        l: st.l,
        t: st.t,
        provenance,
    })
}

/// S(f, m·n) with route cross-checks.
pub fn evaluate(f: &QuadFunc, m: u64) -> Result<ExpSumValue> {
    evaluate_with(f, m, Limits::default())
}

pub fn evaluate_with(f: &QuadFunc, m: u64, limits: Limits) -> Result<ExpSumValue> {
    let profile = nullity::nullity_profile(f)?;
    evaluate_with_profile(f, m, limits, &profile)
}

pub fn evaluate_with_profile(
    f: &QuadFunc,
    m: u64,
    limits: Limits,
    profile: &NullityProfile,
) -> Result<ExpSumValue> {
    let primary = plan(f, m, limits)?;
    let mut value = execute(f, &primary, profile)?;
    let target = primary.target;
    let shortcut = matches!(primary.steps[0], PlanStep::Monomial | PlanStep::Balanced { .. });
    if shortcut {
        match lift_plan(f, m, limits) {
            Ok(alt) => {
                let other = execute(f, &alt, profile)?;
                compare(&mut value, other.l, other.t, "lift composition")?;
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let direct_used = primary.steps.len() == 1 && matches!(primary.steps[0], PlanStep::Direct { .. });
    if target <= CROSS_CHECK_LIMIT && !direct_used {
        let (t, l) = quadform::type_direct(f, m)?;
        compare(&mut value, l, t, "gram matrix")?;
    }
    if value.l != profile.query(target)? {
        return Err(Error::InternalInconsistency(format!(
            "evaluated nullity {} disagrees with the profile",
            value.l
        )));
    }
    Ok(value)
}

fn compare(value: &mut ExpSumValue, l: u64, t: i8, route: &str) -> Result<()> {
    if (l, t) != (value.l, value.t) {
        return Err(Error::InternalInconsistency(format!(
            "{route} gives (t, l) = ({t}, {l}), primary route gives ({}, {})",
            value.t, value.l
        )));
    }
    value.provenance.push(Step {
        kind: StepKind::CrossCheck,
        from: value.n_total,
        to: value.n_total,
        l,
        t,
        detail: route.to_string(),
    });
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub equal: bool,
    pub value: ExpSumValue,
    pub closed_form: CyclotomicInt,
    pub brute_force: CyclotomicInt,
}

/// Compares the evaluated closed form with exhaustive summation.
pub fn verify(f: &QuadFunc, m: u64, cap: u64) -> Result<VerifyReport> {
    let brute = quadform::brute_force_sum(f, m, cap)?;
    let value = evaluate(f, m)?;
    let closed = value.to_cyclotomic();
    Ok(VerifyReport {
        equal: closed == brute,
        value,
        closed_form: closed,
        brute_force: brute,
    })
}

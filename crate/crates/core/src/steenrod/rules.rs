use super::{
    steen_index_valid, PairingContext, ProductClass, ResidualReason, Rule, RuleStep, Slot,
    SteenAtom, SteenProduct, Verdict,
};
use crate::error::{Error, Result};
use crate::split_algebra::SymbolParams;

fn step(rule: Rule) -> RuleStep {
    let contribution = match rule {
        Rule::ThetaFactor { count } => count as u64,
        Rule::RationalPairing { .. } | Rule::ResidualVanishesModP { .. } => 1,
        Rule::SplitRationalPairing { .. } => 2,
        Rule::ScalarValuation { v } => v,
        Rule::LeadingDegree | Rule::LeadingGenerator => 1,
        _ => 0,
    };
    RuleStep::new(rule, contribution)
}

fn zero(rule: Rule) -> Verdict {
    Verdict::Zero { trace: vec![step(rule)] }
}

fn at_least(mut trace: Vec<RuleStep>, prod: &SteenProduct, params: &SymbolParams) -> Result<Verdict> {
    let v = scalar_valuation(prod, params)?;
    if v > 0 {
        trace.push(step(Rule::ScalarValuation { v }));
    }
    let v = trace.iter().map(|s| s.contribution).sum();
    Ok(Verdict::AtLeast { v, trace })
}

fn scalar_valuation(prod: &SteenProduct, params: &SymbolParams) -> Result<u64> {
    prod.scalar
        .val_p(params.prime())?
        .finite()
        .ok_or_else(|| Error::CannotAudit("zero scalar".into()))
}

/// Rational of positive codimension, so pairing with it gains a factor `p`.
pub(super) fn flagged(atom: &SteenAtom, context: &PairingContext, params: &SymbolParams) -> bool {
    match *atom {
        SteenAtom::ChernX { index, .. } => index > 0,
        SteenAtom::ChernY(i) => {
            let dim_y = match context {
                PairingContext::Generators { dim_y, .. } => *dim_y,
                _ => 0,
            };
            params.d() + i > dim_y
        }
        SteenAtom::SecondType(_) | SteenAtom::ThirdType(_) => true,
        _ => false,
    }
}

fn invalid_index(prod: &SteenProduct, extra: &[u64], params: &SymbolParams) -> Option<u64> {
    let p = params.prime();
    extra
        .iter()
        .copied()
        .chain(prod.atoms.iter().filter_map(|a| a.steen_index()))
        .find(|&x| !steen_index_valid(x as i64, p))
}

fn bound_holds(m: i64, s: u64, params: &SymbolParams) -> bool {
    (s as i128) > (m as i128 - params.b() as i128) * (params.p() as i128 - 1)
}

/// Every `H^r × x_r` summand with `r ≥ 1` is killed by `S^(s+rb)`.
fn decomposition_summands_vanish(m: i64, s: u64, params: &SymbolParams) -> bool {
    let b = params.b() as i128;
    let q = params.p() as i128 - 1;
    (1..=params.top() as i128).all(|r| s as i128 + r * b > (m as i128 - r * b) * q)
}

/// The strongest verdict the rules derive for `prod`, with its trace.
pub fn valuation_bound(prod: &SteenProduct, params: &SymbolParams) -> Result<Verdict> {
    match prod.context {
        PairingContext::LeadingTerm { m, s, i, j, k } => leading_term(prod, params, m, s, i, j, k),
        PairingContext::Generators { dim_y, r, i, j } => generators(prod, params, dim_y, r, i, j),
        PairingContext::SplitDegree { .. } => split_degree(prod, params),
        PairingContext::Unspecified => {
            Err(Error::CannotAudit("pairing context is not specified".into()))
        }
    }
}

fn leading_term(
    prod: &SteenProduct,
    params: &SymbolParams,
    m: i64,
    s: u64,
    i: u64,
    j: u64,
    k: u64,
) -> Result<Verdict> {
    let d = params.d();
    let b = params.b();
    if i == 0 {
        return Err(Error::CannotAudit("the Chern index i must be positive".into()));
    }
    if !bound_holds(m, s, params) {
        return Err(Error::BoundNotSatisfied(format!(
            "s = {s} <= (m - b)(p - 1) = {}",
            (m - b as i64) * (params.p() as i64 - 1)
        )));
    }
    for index in [i, j] {
        if index > d {
            return Ok(zero(Rule::ChernAboveDimension { index }));
        }
    }
    if let Some(index) = invalid_index(prod, &[s, k], params) {
        return Ok(zero(Rule::SteenrodIndexInvalid { index }));
    }
    let c = prod.classify();
    if c.factors() != params.top() {
        return Err(Error::CannotAudit(format!("expected {} σ-factors, got {}", params.top(), c.factors())));
    }
    if i + j + k + c.l != d + s {
        return Err(Error::CannotAudit(format!("index budget i+j+k+l = {} != d+s", i + j + k + c.l)));
    }
    let bi = SteenAtom::ChernX { index: i, slot: Slot::First };
    let bj = SteenAtom::ChernX { index: j, slot: Slot::Second };
    let mut trace = Vec::new();
    if c.l == 0 {
        if i == d && k == s {
            return Ok(Verdict::Exactly { v: 1, trace: vec![step(Rule::LeadingDegree)] });
        }
        if !i.is_multiple_of(b) {
            return Ok(zero(Rule::PushforwardCodimension { i }));
        }
        trace.push(step(Rule::RationalPairing { atom: bi }));
        if j > 0 {
            trace.push(step(Rule::RationalPairing { atom: bj }));
        } else {
            let exponent = (i / b) as u32;
            trace.push(step(Rule::ResidualVanishesModP {
                reason: ResidualReason::HExponentBelowTop { exponent },
            }));
        }
        return at_least(trace, prod, params);
    }
    if c.thetas >= 2 {
        trace.push(step(Rule::ThetaFactor { count: c.thetas }));
        return at_least(trace, prod, params);
    }
    if c.thetas == 1 {
        trace.push(step(Rule::ThetaFactor { count: 1 }));
        let next = if k != s {
            Rule::ResidualVanishesModP { reason: ResidualReason::KNotLeading }
        } else if j > 0 {
            Rule::RationalPairing { atom: bj }
        } else {
            Rule::RationalPairing { atom: bi }
        };
        trace.push(step(next));
        return at_least(trace, prod, params);
    }
    if k != s {
        trace.push(step(Rule::RationalPairing { atom: bi }));
        trace.push(step(Rule::ResidualVanishesModP { reason: ResidualReason::KNotLeading }));
        return at_least(trace, prod, params);
    }
    if j > 0 {
        trace.push(step(Rule::SplitRationalPairing { first: bi, second: bj }));
        return at_least(trace, prod, params);
    }
    if let Some(second) = prod.atoms.iter().find(|a| matches!(a, SteenAtom::SecondType(_))) {
        trace.push(step(Rule::SplitRationalPairing { first: bi, second: *second }));
        return at_least(trace, prod, params);
    }
    Ok(zero(Rule::SigmaPushforwardVanishes { sigmas: c.sigmas, h_power: 0 }))
}

fn generators(
    prod: &SteenProduct,
    params: &SymbolParams,
    dim_y: u64,
    r: u32,
    i: u64,
    j: u64,
) -> Result<Verdict> {
    if r < 1 || r > params.top() {
        return Err(Error::CannotAudit(format!("power r = {r} outside [1, p-1]")));
    }
    if i + j != dim_y {
        return Err(Error::CannotAudit(format!("i + j = {} != dim Y = {dim_y}", i + j)));
    }
    if let Some(index) = invalid_index(prod, &[], params) {
        return Ok(zero(Rule::SteenrodIndexInvalid { index }));
    }
    let c = prod.classify();
    if c.factors() != r || c.l != j {
        return Err(Error::CannotAudit("product does not match S^j(σ^r)".into()));
    }
    if j == 0 {
        return Ok(Verdict::Exactly { v: 1, trace: vec![step(Rule::LeadingGenerator)] });
    }
    let by = SteenAtom::ChernY(i);
    let mut trace = Vec::new();
    if c.thetas >= 1 {
        trace.push(step(Rule::ThetaFactor { count: c.thetas }));
        trace.push(step(Rule::RationalPairing { atom: by }));
        return at_least(trace, prod, params);
    }
    if let Some(second) = prod.atoms.iter().find(|a| matches!(a, SteenAtom::SecondType(_))) {
        trace.push(step(Rule::SplitRationalPairing { first: by, second: *second }));
        return at_least(trace, prod, params);
    }
    Ok(zero(Rule::SigmaPushforwardVanishes { sigmas: c.sigmas, h_power: params.top() - r }))
}

fn split_degree(prod: &SteenProduct, params: &SymbolParams) -> Result<Verdict> {
    if let Some(index) = invalid_index(prod, &[], params) {
        return Ok(zero(Rule::SteenrodIndexInvalid { index }));
    }
    let c = prod.classify();
    let mut trace = Vec::new();
    if c.thetas > 0 {
        trace.push(step(Rule::ThetaFactor { count: c.thetas }));
    }
    let pick = |slot: Slot| {
        prod.atoms
            .iter()
            .find(|a| a.slot() == Some(slot) && flagged(a, &prod.context, params))
            .copied()
    };
    match (pick(Slot::First), pick(Slot::Second)) {
        (Some(first), Some(second)) => trace.push(step(Rule::SplitRationalPairing { first, second })),
        (Some(atom), None) | (None, Some(atom)) => trace.push(step(Rule::RationalPairing { atom })),
        (None, None) => {}
    }
    at_least(trace, prod, params)
}

fn premise_holds(rule: &Rule, prod: &SteenProduct, c: &ProductClass, params: &SymbolParams) -> bool {
    let ctx = &prod.context;
    let in_pairing = |atom: &SteenAtom| -> bool {
        let from_context = match (*ctx, *atom) {
            (PairingContext::LeadingTerm { i, .. }, SteenAtom::ChernX { index, slot: Slot::First }) => index == i,
            (PairingContext::LeadingTerm { j, .. }, SteenAtom::ChernX { index, slot: Slot::Second }) => index == j,
            (PairingContext::Generators { i, .. }, SteenAtom::ChernY(index)) => index == i,
            _ => false,
        };
        from_context || prod.contains(atom)
    };
    match *rule {
        Rule::ChernAboveDimension { index } => match *ctx {
            PairingContext::LeadingTerm { i, j, .. } => (index == i || index == j) && index > params.d(),
            _ => false,
        },
        Rule::SteenrodIndexInvalid { index } => {
            let named = match *ctx {
                PairingContext::LeadingTerm { s, k, .. } => index == s || index == k,
                _ => false,
            };
            (named || prod.atoms.iter().any(|a| a.steen_index() == Some(index)))
                && !steen_index_valid(index as i64, params.prime())
        }
        Rule::PushforwardCodimension { i } => {
            matches!(*ctx, PairingContext::LeadingTerm { i: ci, .. } if ci == i)
                && c.l == 0
                && i % params.b() != 0
        }
        Rule::SigmaPushforwardVanishes { sigmas, h_power } => {
            let context_ok = match *ctx {
                PairingContext::LeadingTerm { s, j, k, .. } => h_power == 0 && j == 0 && k == s,
                PairingContext::Generators { r, .. } => h_power == params.top() - r,
                _ => false,
            };
            context_ok
                && c.thetas == 0
                && c.seconds == 0
                && c.thirds >= 1
                && c.sigmas == sigmas
                && sigmas + h_power < params.top()
        }
        Rule::ThetaFactor { count } => count >= 1 && c.thetas == count,
        Rule::RationalPairing { atom } => in_pairing(&atom) && flagged(&atom, ctx, params),
        Rule::SplitRationalPairing { first, second } => {
            in_pairing(&first)
                && in_pairing(&second)
                && flagged(&first, ctx, params)
                && flagged(&second, ctx, params)
                && first.slot() == Some(Slot::First)
                && second.slot() == Some(Slot::Second)
        }
        Rule::ResidualVanishesModP { reason } => match *ctx {
            PairingContext::LeadingTerm { m, s, i, j, k } => {
                decomposition_summands_vanish(m, s, params)
                    && match reason {
                        ResidualReason::KNotLeading => k != s,
                        ResidualReason::HExponentBelowTop { exponent } => {
                            c.l == 0 && j == 0 && exponent as u64 * params.b() == i && exponent < params.top()
                        }
                    }
            }
            _ => false,
        },
        Rule::ScalarValuation { v } => {
            prod.scalar.val_p(params.prime()).ok().and_then(|x| x.finite()) == Some(v)
        }
        Rule::LeadingDegree => matches!(
            *ctx,
            PairingContext::LeadingTerm { s, i, j, k, .. } if c.l == 0 && i == params.d() && k == s && j == 0
        ),
        Rule::LeadingGenerator => matches!(
            *ctx,
            PairingContext::Generators { dim_y, i, j, .. } if j == 0 && i == dim_y
        ),
    }
}

/// Re-checks every premise cited in the verdict's trace and that the
/// contributions add up to the claimed valuation.
pub fn replay(prod: &SteenProduct, verdict: &Verdict, params: &SymbolParams) -> bool {
    let c = prod.classify();
    let premises = verdict.trace().iter().all(|s| premise_holds(&s.rule, prod, &c, params));
    let total: u64 = verdict.trace().iter().map(|s| s.contribution).sum();
    let contributions_match = verdict.trace().iter().all(|s| step(s.rule).contribution == s.contribution);
    let sum_ok = match verdict {
        Verdict::Zero { trace } => !trace.is_empty(),
        Verdict::AtLeast { v, .. } => *v == total,
        Verdict::Exactly { v, trace } => {
            *v == total
                && trace
                    .iter()
                    .all(|s| matches!(s.rule, Rule::LeadingDegree | Rule::LeadingGenerator))
        }
    };
    premises && contributions_match && sum_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::LocalInt;

    fn sp(p: u64, n: u32) -> SymbolParams {
        SymbolParams::with_unit_degree(p, n).unwrap()
    }

    #[test]
    fn two_thetas() {
        let s = sp(3, 2);
        let prod = SteenProduct::new(
            vec![SteenAtom::Theta(2), SteenAtom::Theta(4)],
            LocalInt::one(),
            PairingContext::LeadingTerm { m: 2, s: 2, i: 2, j: 0, k: 2 },
        );
        let v = valuation_bound(&prod, &s).unwrap();
        assert_eq!(v.code(), ">=2");
        assert!(replay(&prod, &v, &s));
        let split = SteenProduct::new(
            vec![SteenAtom::Theta(2), SteenAtom::Theta(2)],
            LocalInt::one(),
            PairingContext::SplitDegree { h_first: 0, h_second: 0 },
        );
        assert_eq!(valuation_bound(&split, &s).unwrap().code(), ">=2");
    }

    #[test]
    fn split_chern_pair() {
        let s = sp(3, 2);
        let prod = SteenProduct::new(
            vec![
                SteenAtom::ChernX { index: 2, slot: Slot::First },
                SteenAtom::ChernX { index: 4, slot: Slot::Second },
            ],
            LocalInt::one(),
            PairingContext::SplitDegree { h_first: 1, h_second: 0 },
        );
        let v = valuation_bound(&prod, &s).unwrap();
        assert_eq!(v.code(), ">=2");
        assert!(replay(&prod, &v, &s));
    }

    #[test]
    fn third_type_tail_vanishes() {
        let s = sp(3, 2);
        let prod = SteenProduct::new(
            vec![SteenAtom::SigmaFactor, SteenAtom::ThirdType(2)],
            -LocalInt::one(),
            PairingContext::LeadingTerm { m: 2, s: 2, i: 6, j: 0, k: 2 },
        );
        let v = valuation_bound(&prod, &s).unwrap();
        assert!(v.is_zero());
        assert!(matches!(
            v.trace()[0].rule,
            Rule::SigmaPushforwardVanishes { sigmas: 1, h_power: 0 }
        ));
        assert!(replay(&prod, &v, &s));
    }

    #[test]
    fn unspecified_context_cannot_audit() {
        let prod = SteenProduct::new(vec![SteenAtom::SigmaFactor], LocalInt::one(), PairingContext::Unspecified);
        assert!(matches!(valuation_bound(&prod, &sp(2, 2)), Err(Error::CannotAudit(_))));
    }

    #[test]
    fn forged_trace_is_rejected() {
        let s = sp(3, 2);
        let prod = SteenProduct::new(
            vec![SteenAtom::SigmaFactor, SteenAtom::ThirdType(2)],
            LocalInt::one(),
            PairingContext::LeadingTerm { m: 2, s: 2, i: 6, j: 0, k: 2 },
        );
        let forged = Verdict::AtLeast { v: 1, trace: vec![step(Rule::ThetaFactor { count: 1 })] };
        assert!(!replay(&prod, &forged, &s));
    }
}

//! Named verification suites run against one parameter set.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{LocalInt, Prime};
use crate::correspondences::{check_sigma_rho, projector_iterate, Corr};
use crate::end_algebra::EndTuple;
use crate::error::{Error, Result};
use crate::motivic_cohomology::{even_row, even_row_closed, odd_row, odd_row_closed};
use crate::report::{Check, Status, SuiteReport};
use crate::rost_chow::compare;
use crate::split_algebra::SymbolParams;
use crate::steenrod::{audit_generators, audit_leading_term, steen_index_valid};
use crate::sym_powers::{verify_squares, verify_sym_identities, verify_triangles};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Correspondences,
    SymmPow,
    EndAlg,
    MotCoh,
    RostChow,
    Steenrod,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Correspondences,
        Suite::SymmPow,
        Suite::EndAlg,
        Suite::MotCoh,
        Suite::RostChow,
        Suite::Steenrod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Correspondences => "correspondences",
            Suite::SymmPow => "symmpow",
            Suite::EndAlg => "endalg",
            Suite::MotCoh => "motcoh",
            Suite::RostChow => "chow",
            Suite::Steenrod => "steenrod",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

pub const ENDALG_SAMPLES: usize = 500;
const ENDALG_SEED: u64 = 0x0e4d_a19e;
/// Largest `r` for which `ρ'^(p^r)` is checked by the correspondence suite.
pub const PROJECTOR_MAX_R: u32 = 3;
/// Above this dimension only `m ∈ {0, b, d}` with the smallest and largest
/// admissible `s` is audited.
pub const FULL_AUDIT_MAX_D: u64 = 16;

pub fn run(suite: Suite, params: &SymbolParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(suite.name());
    match suite {
        Suite::Correspondences => correspondences(params, &mut report)?,
        Suite::SymmPow => {
            report.extend(verify_sym_identities(params)?);
            report.extend(verify_squares(params)?);
            report.extend(verify_triangles(params)?);
        }
        Suite::EndAlg => endalg(params.prime(), &mut report)?,
        Suite::MotCoh => motcoh(params, &mut report)?,
        Suite::RostChow => {
            let (ok, mismatches) = compare(params)?;
            let detail = mismatches.iter().map(|m| format!("{m:?}")).collect::<Vec<_>>().join("; ");
            report.push(Check::from_result("closed form = recurrence", ok, detail));
        }
        Suite::Steenrod => steenrod(params, &mut report)?,
    }
    Ok(report)
}

pub fn run_all(params: &SymbolParams) -> Result<Vec<SuiteReport>> {
    Suite::ALL.into_iter().map(|s| run(s, params)).collect()
}

fn correspondences(params: &SymbolParams, report: &mut SuiteReport) -> Result<()> {
    let p = params.prime();
    let top = params.top();
    let sigma = Corr::sigma(params);
    report.push(Check::from_result("σ^t = -σ", sigma.transpose() == sigma.neg(), ""));

    let power = sigma.ring_power(top);
    let antidiag = Corr::from_terms(params, (0..=top).map(|i| ((i, top - i), LocalInt::one())))?;
    let diff = power.sub(&antidiag)?;
    let mut congruent = true;
    for (_, c) in diff.terms() {
        congruent &= c.reduce_mod_p(p)?.is_zero();
    }
    report.push(Check::from_result("σ^(p-1) ≡ Σ E(i,p-1-i) mod p", congruent, power.to_string()));

    let (ok, witness) = check_sigma_rho(params);
    report.push(Check::from_result("σ ∘ σ^(p-1) = e·(1×H + (p-1)·H×1)", ok, witness.to_string()));

    let pi = Corr::rost_projector(params);
    report.push(Check::from_result("π∘π = π", pi.compose(&pi)? == pi, ""));
    report.push(Check::from_result("π^t = π", pi.transpose() == pi, ""));
    report.push(Check::from_result("mult(π) = 1", pi.mult().is_one(), pi.mult().to_string()));
    let deg = pi.diag_pullback().degree();
    report.push(Check::from_result(
        "deg(diag(π)) = p",
        deg == LocalInt::from(p.get()),
        deg.to_string(),
    ));

    for r in 0..=PROJECTOR_MAX_R {
        let (_, v) = projector_iterate(params, r)?;
        report.push(Check::from_result(
            format!("val(ρ'^(p^{r}) - 1) >= {}", r + 1),
            v.is_at_least(r as u64 + 1),
            format!("valuation {v}"),
        ));
    }
    Ok(())
}

fn endalg(p: Prime, report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(ENDALG_SEED ^ p.get());
    let pp = LocalInt::from(p.get());
    let mut closed = 0;
    let mut invertible = 0;
    let mut failures = Vec::new();
    for _ in 0..ENDALG_SAMPLES {
        let a = EndTuple::sample_rational(&mut rng, p, 30);
        let b = EndTuple::sample_rational(&mut rng, p, 30);
        let c = crate::end_algebra::sample_local(&mut rng, p, 30);
        let ok = a.mul(&b)?.is_rational()
            && a.add(&b)?.is_rational()
            && a.sub(&b)?.is_rational()
            && a.scale(&c).is_rational()
            && a.is_rational()
            && a.scale(&pp).is_rational();
        if ok {
            closed += 1;
        } else if failures.len() < 3 {
            failures.push(format!("{a} / {b}"));
        }
        let u = EndTuple::sample_unit_multiplicity(&mut rng, p, 30);
        match u.invert() {
            Ok(inv) if inv.is_rational() && u.mul(&inv)? == EndTuple::identity(p) => invertible += 1,
            _ if failures.len() < 3 => failures.push(format!("not invertible: {u}")),
            _ => {}
        }
    }
    report.push(Check::from_result(
        "rational tuples closed under +, -, ·, scaling",
        closed == ENDALG_SAMPLES,
        if failures.is_empty() {
            format!("{closed}/{ENDALG_SAMPLES}")
        } else {
            format!("{closed}/{ENDALG_SAMPLES}: {}", failures.join("; "))
        },
    ));
    report.push(Check::from_result(
        "multiplicity-1 rational tuples invertible with rational inverse",
        invertible == ENDALG_SAMPLES,
        format!("{invertible}/{ENDALG_SAMPLES}"),
    ));
    if p.get() == 3 {
        let inside = EndTuple::from_ints(&[1, 4, -5], p)?;
        let outside = EndTuple::from_ints(&[1, 2, 1], p)?;
        report.push(Check::from_result("(1, 4, -5) is rational", inside.is_rational(), ""));
        report.push(Check::from_result("(1, 2, 1) is not rational", !outside.is_rational(), ""));
    }
    Ok(())
}

fn motcoh(params: &SymbolParams, report: &mut SuiteReport) -> Result<()> {
    let d = params.d() as i64;
    let mut mismatches = Vec::new();
    let mut constraints = true;
    for j in 0..=d {
        let even = even_row(j, params)?;
        let odd = odd_row(j, params)?;
        if even != even_row_closed(j, params)? {
            mismatches.push(format!("even j={j}: {}", even.render(params)));
        }
        if odd != odd_row_closed(j, params)? {
            mismatches.push(format!("odd j={j}: {}", odd.render(params)));
        }
        constraints &= even.automatic_constraints_hold(params) && odd.automatic_constraints_hold(params);
    }
    report.push(Check::from_result("rows match closed forms", mismatches.is_empty(), mismatches.join("; ")));
    report.push(Check::from_result("k = 0 and ε_n = 0 for j <= d", constraints, ""));
    Ok(())
}

fn steenrod(params: &SymbolParams, report: &mut SuiteReport) -> Result<()> {
    let p = params.prime();
    let (b, d) = (params.b() as i64, params.d() as i64);
    let q = p.get() as i64 - 1;
    let full = params.d() <= FULL_AUDIT_MAX_D;
    let ms: Vec<i64> = if full { (0..=d).collect() } else { vec![0, b, d] };
    let mut audited = 0;
    let mut failed = Vec::new();
    for &m in &ms {
        let valid: Vec<i64> = (((m - b) * q + 1).max(0)..=d).filter(|&s| steen_index_valid(s, p)).collect();
        let sampled: Vec<i64> = if full {
            valid
        } else {
            valid.first().into_iter().chain(valid.last().filter(|_| valid.len() > 1)).copied().collect()
        };
        for s in sampled {
            let r = audit_leading_term(params, m, s as u64)?;
            audited += 1;
            if !r.passed {
                failed.push(format!("(m={m}, s={s})"));
            }
        }
    }
    let scope = if full { "all (m, s)" } else { "m in {0, b, d}, extreme s" };
    report.push(Check::from_result(
        "leading-term audit of S^s(x_0)",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{audited} audits over {scope}")
        } else {
            format!("{audited} audits over {scope}; failed: {}", failed.join(" "))
        },
    ));

    let refused = matches!(audit_leading_term(params, d, 0), Err(Error::BoundNotSatisfied(_)));
    let status = if (d - b) * q < 0 {
        Status::Vacuous
    } else {
        Status::from_bool(refused)
    };
    report.push(Check::new("audit refused below the bound", status, "m = d, s = 0"));

    if params.n() < 2 {
        report.push(Check::new("torsion generators have order p", Status::Vacuous, "no m with 1 <= m <= n-1"));
        return Ok(());
    }
    let mut failed = Vec::new();
    for m in 1..params.n() {
        for r in 1..=params.top() {
            let rep = audit_generators(params, m, r)?;
            if !rep.passed || rep.conclusion != "order exactly p" {
                failed.push(format!("(m={m}, r={r})"));
            }
        }
    }
    report.push(Check::from_result("torsion generators have order p", failed.is_empty(), failed.join(" ")));
    Ok(())
}

use rostmot_core::arith::LocalInt;
use rostmot_core::expr::{evaluate, ExprError, Value};
use rostmot_core::motivic_cohomology::{enumerate, even_row, odd_row, MCGroup};
use rostmot_core::report::{Check, SuiteReport};
use rostmot_core::rost_chow::{closed_form, compare, recurrence, Provenance, RostChowTable};
use rostmot_core::split_algebra::SymbolParams;
use rostmot_core::steenrod::{self, AuditCase, AuditKind, AuditReport};
use rostmot_core::verify::{self, Suite};
use serde::Serialize;

use crate::emit::{self, Format};
use crate::{CliError, CliResult, Method, SuiteArg};

pub(crate) fn symbol(symbol: &crate::Symbol, degree: Option<&crate::Degree>) -> CliResult<SymbolParams> {
    let e = match degree {
        Some(d) => d
            .e
            .parse::<LocalInt>()
            .map_err(|_| CliError::Invalid(format!("cannot read e = {:?} as an integer or q/r", d.e)))?,
        None => LocalInt::one(),
    };
    Ok(SymbolParams::new(symbol.p, symbol.n, e)?)
}

#[derive(Serialize)]
struct ParamsDoc {
    p: u64,
    n: u32,
    b: u64,
    c: u64,
    d: u64,
    e: String,
}

impl ParamsDoc {
    fn new(params: &SymbolParams) -> ParamsDoc {
        ParamsDoc {
            p: params.p(),
            n: params.n(),
            b: params.b(),
            c: params.c(),
            d: params.d(),
            e: params.e().to_string(),
        }
    }
}

pub(crate) fn params(params: &SymbolParams, format: Format, out: &mut Vec<u8>) -> CliResult<()> {
    let doc = ParamsDoc::new(params);
    match format {
        Format::Json => emit::json(out, &doc),
        Format::Csv => emit::csv(
            out,
            &["p", "n", "b", "c", "d", "e"],
            [[doc.p.to_string(), doc.n.to_string(), doc.b.to_string(), doc.c.to_string(), doc.d.to_string(), doc.e]],
        ),
        Format::Text => {
            for (k, v) in [("p", doc.p), ("n", doc.n as u64), ("b", doc.b), ("c", doc.c), ("d", doc.d)] {
                emit::line(out, format_args!("{k} = {v}"))?;
            }
            emit::line(out, format_args!("e = {}", doc.e))
        }
    }
}

#[derive(Serialize)]
struct ChowGroupDoc {
    j: u64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize)]
struct TraceDoc {
    j: u64,
    case: &'static str,
    facts: Vec<String>,
}

#[derive(Serialize)]
struct ChowDoc {
    #[serde(flatten)]
    params: ParamsDoc,
    method: &'static str,
    groups: Vec<ChowGroupDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceDoc>>,
}

pub(crate) fn chow(
    params: &SymbolParams,
    method: Method,
    trace: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let (table, method_name, mismatch) = match method {
        Method::Closed => (closed_form(params), "closed", None),
        Method::Recurrence => (recurrence(params)?, "recurrence", None),
        Method::Both => {
            let (ok, diff) = compare(params)?;
            let detail = (!ok).then(|| {
                let js: Vec<String> = diff.iter().map(|m| m.j.to_string()).collect();
                format!("closed form and recurrence disagree at j = {}", js.join(", "))
            });
            (recurrence(params)?, "both", detail)
        }
    };
    write_chow(params, &table, method_name, trace, format, out)?;
    match mismatch {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn write_chow(
    params: &SymbolParams,
    table: &RostChowTable,
    method: &'static str,
    trace: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let p = params.p();
    let rows: Vec<(u64, String, String)> = (0..=params.d())
        .map(|j| {
            let g = table.entry(j);
            (j, g.kind.code().to_string(), g.render(p))
        })
        .collect();
    let steps: Vec<TraceDoc> = table
        .trace
        .iter()
        .map(|(&j, step)| TraceDoc {
            j,
            case: step.case.code(),
            facts: step.facts.iter().map(|f| f.to_string()).collect(),
        })
        .collect();
    match format {
        Format::Json => {
            let doc = ChowDoc {
                params: ParamsDoc::new(params),
                method,
                groups: (0..=params.d())
                    .map(|j| {
                        let g = table.entry(j);
                        ChowGroupDoc { j, kind: g.kind.code(), provenance: g.provenance }
                    })
                    .collect(),
                trace: trace.then_some(steps),
            };
            emit::json(out, &doc)
        }
        Format::Csv => emit::csv(out, &["j", "kind"], rows.iter().map(|(j, k, _)| [j.to_string(), k.clone()])),
        Format::Text => {
            emit::line(
                out,
                format_args!("Rost motive, p = {p}, n = {}, b = {}, d = {} ({method})", params.n(), params.b(), params.d()),
            )?;
            for (j, kind, group) in &rows {
                emit::line(out, format_args!("CH^{j} = {group:<10} {kind}"))?;
                if trace {
                    if let Some(step) = steps.iter().find(|s| s.j == *j) {
                        emit::line(out, format_args!("    [{}] {}", step.case, step.facts.join("; ")))?;
                    }
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct MonomialDoc {
    m: u64,
    k: u64,
    eps: Vec<u8>,
    name: String,
    label: String,
}

#[derive(Serialize)]
struct MotcohDoc {
    p: u64,
    n: u32,
    i: i64,
    j: i64,
    group: String,
    monomials: Vec<MonomialDoc>,
}

pub(crate) fn motcoh(
    params: &SymbolParams,
    from_row: bool,
    i: i64,
    j: i64,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let group: MCGroup = match (from_row, i - 2 * j) {
        (true, 0) => even_row(j, params)?,
        (true, _) => odd_row(j, params)?,
        (false, _) => enumerate(i, j, params)?,
    };
    let rendered = group.render(params);
    match format {
        Format::Json => {
            let doc = MotcohDoc {
                p: params.p(),
                n: params.n(),
                i,
                j,
                group: rendered,
                monomials: group
                    .monomials
                    .iter()
                    .map(|m| MonomialDoc {
                        m: m.m,
                        k: m.k,
                        eps: m.eps.iter().map(|&e| e as u8).collect(),
                        name: m.name(),
                        label: m.label(params).to_string(),
                    })
                    .collect(),
            };
            emit::json(out, &doc)
        }
        Format::Csv => emit::csv(out, &["i", "j", "group"], [[i.to_string(), j.to_string(), rendered]]),
        Format::Text => emit::line(out, format_args!("H^({i},{j}) = {rendered}")),
    }
}

#[derive(Serialize)]
struct SuiteDoc<'a> {
    suite: &'a str,
    passed: bool,
    checks: &'a [Check],
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    p: u64,
    n: u32,
    e: String,
    passed: bool,
    suites: Vec<SuiteDoc<'a>>,
}

pub(crate) fn verify(params: &SymbolParams, suite: SuiteArg, format: Format, out: &mut Vec<u8>) -> CliResult<()> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Correspondences => vec![Suite::Correspondences],
        SuiteArg::Symmpow => vec![Suite::SymmPow],
        SuiteArg::Endalg => vec![Suite::EndAlg],
        SuiteArg::Motcoh => vec![Suite::MotCoh],
        SuiteArg::Chow => vec![Suite::RostChow],
        SuiteArg::Steenrod => vec![Suite::Steenrod],
    };
    let reports: Vec<SuiteReport> = suites.into_iter().map(|s| verify::run(s, params)).collect::<Result<_, _>>()?;
    let passed = reports.iter().all(SuiteReport::passed);
    match format {
        Format::Json => emit::json(
            out,
            &VerifyDoc {
                p: params.p(),
                n: params.n(),
                e: params.e().to_string(),
                passed,
                suites: reports
                    .iter()
                    .map(|r| SuiteDoc { suite: &r.suite, passed: r.passed(), checks: &r.checks })
                    .collect(),
            },
        )?,
        Format::Csv => emit::csv(
            out,
            &["suite", "check", "status", "detail"],
            reports.iter().flat_map(|r| {
                r.checks
                    .iter()
                    .map(|c| [r.suite.clone(), c.name.clone(), c.status.to_string(), c.detail.clone()])
            }),
        )?,
        Format::Text => {
            for r in &reports {
                for c in &r.checks {
                    if c.detail.is_empty() {
                        emit::line(out, format_args!("{:<10} {}: {}", c.status, r.suite, c.name))?;
                    } else {
                        emit::line(out, format_args!("{:<10} {}: {} ({})", c.status, r.suite, c.name, c.detail))?;
                    }
                }
            }
            emit::line(out, if passed { "all checks passed" } else { "some checks failed" })?;
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
        Err(CliError::Failed(format!("{failed} check(s) failed")))
    }
}

#[derive(Serialize)]
struct EvalDoc<'a> {
    p: u64,
    n: u32,
    e: String,
    expr: &'a str,
    #[serde(rename = "type")]
    ty: &'static str,
    value: String,
}

pub(crate) fn eval(params: &SymbolParams, src: &str, format: Format, out: &mut Vec<u8>) -> CliResult<()> {
    let value = evaluate(src, params).map_err(|e| match e {
        ExprError::Parse(e) => CliError::Invalid(format!("{}: syntax error: {}", e.pos, e.message)),
        ExprError::Eval(e) => CliError::Invalid(e.to_string()),
    })?;
    let rendered = value.to_string();
    match format {
        Format::Json => emit::json(
            out,
            &EvalDoc {
                p: params.p(),
                n: params.n(),
                e: params.e().to_string(),
                expr: src,
                ty: value.type_name(),
                value: rendered,
            },
        )?,
        Format::Csv => emit::csv(out, &["type", "value"], [[value.type_name(), rendered.as_str()]])?,
        Format::Text => emit::line(out, &rendered)?,
    }
    match value {
        Value::Bool(false) => Err(CliError::Failed(format!("{src} is false"))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct CaseDoc {
    i: u64,
    j: u64,
    k: u64,
    parts: Vec<u64>,
    product: String,
    verdict: String,
    replayed: bool,
}

impl CaseDoc {
    fn new(c: &AuditCase) -> CaseDoc {
        CaseDoc {
            i: c.tuple.i,
            j: c.tuple.j,
            k: c.tuple.k,
            parts: c.tuple.parts.clone(),
            product: c.product.to_string(),
            verdict: c.verdict.code(),
            replayed: c.replayed,
        }
    }
}

#[derive(Serialize)]
struct AuditDoc {
    p: u64,
    n: u32,
    #[serde(flatten)]
    kind: AuditKind,
    passed: bool,
    trivial: bool,
    conclusion: String,
    premises: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsion: Option<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leading: Option<CaseDoc>,
    case_count: usize,
    skipped: String,
    failures: Vec<CaseDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cases: Option<Vec<CaseDoc>>,
}

pub(crate) fn audit_leading_term(
    params: &SymbolParams,
    m: i64,
    s: u64,
    cases: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let report = steenrod::audit_leading_term(params, m, s)?;
    write_audit(params, &report, cases, format, out)
}

pub(crate) fn audit_generators(
    params: &SymbolParams,
    m: u32,
    r: u32,
    cases: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let report = steenrod::audit_generators(params, m, r)?;
    write_audit(params, &report, cases, format, out)
}

fn write_audit(
    params: &SymbolParams,
    report: &AuditReport,
    cases: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<()> {
    let failures: Vec<CaseDoc> = report.failures().into_iter().map(CaseDoc::new).collect();
    let leading = report.leading_case().map(CaseDoc::new);
    let listed: Option<Vec<CaseDoc>> = cases.then(|| report.cases.iter().map(CaseDoc::new).collect());
    let kind = match report.kind {
        AuditKind::LeadingTerm { m, s } => format!("S^{s}(x_0) with m = {m}"),
        AuditKind::Generators { m, r } => format!("torsion generator m = {m}, r = {r}"),
    };
    match format {
        Format::Json => emit::json(
            out,
            &AuditDoc {
                p: params.p(),
                n: params.n(),
                kind: report.kind,
                passed: report.passed,
                trivial: report.trivial,
                conclusion: report.conclusion.clone(),
                premises: report.premises.clone(),
                torsion: report.part_a.clone(),
                leading,
                case_count: report.cases.len(),
                skipped: report.skipped.to_string(),
                failures,
                cases: listed,
            },
        )?,
        Format::Csv => {
            let rows = listed.unwrap_or(failures);
            emit::csv(
                out,
                &["i", "j", "k", "parts", "product", "verdict", "replayed"],
                rows.iter().map(|c| {
                    let parts: Vec<String> = c.parts.iter().map(u64::to_string).collect();
                    [
                        c.i.to_string(),
                        c.j.to_string(),
                        c.k.to_string(),
                        parts.join(" "),
                        c.product.clone(),
                        c.verdict.clone(),
                        c.replayed.to_string(),
                    ]
                }),
            )?
        }
        Format::Text => {
            emit::line(out, format_args!("audit of {kind}, p = {}, n = {}", params.p(), params.n()))?;
            for premise in &report.premises {
                emit::line(out, format_args!("  premise: {premise}"))?;
            }
            if let Some(check) = &report.part_a {
                emit::line(out, format_args!("  {}: {}", check.name, check.status))?;
            }
            emit::line(
                out,
                format_args!("  {} products audited, {} empty compositions skipped", report.cases.len(), report.skipped),
            )?;
            if let Some(c) = &leading {
                emit::line(out, format_args!("  leading ({}, {}, {}): {} -> {}", c.i, c.j, c.k, c.product, c.verdict))?;
            }
            for c in listed.iter().flatten() {
                emit::line(out, format_args!("  ({}, {}, {}) {:?}: {} -> {}", c.i, c.j, c.k, c.parts, c.product, c.verdict))?;
            }
            for c in &failures {
                emit::line(out, format_args!("  FAILED ({}, {}, {}): {} -> {}", c.i, c.j, c.k, c.product, c.verdict))?;
            }
            emit::line(out, format_args!("{}: {}", if report.passed { "passed" } else { "failed" }, report.conclusion))?;
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("audit failed: {}", report.conclusion)))
    }
}

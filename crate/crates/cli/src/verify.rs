use std::fmt::Write;

use rosen_core::natext::{build_domain, heights, normalizing_constant, verify_ordering};
use serde_json::json;

use crate::args::{CommonArgs, Format};
use crate::output::{json_text, Failure, Report, SCHEMA};

/// Largest |1/C - mass| accepted from the float evaluation of the closed form.
const MASS_TOL: f64 = 1e-12;

pub fn run(a: &CommonArgs) -> Result<Report, Failure> {
    let r = a.resolve()?;
    let cert = verify_ordering(r.q, &r.alpha)?;
    let hs = heights(r.q, &r.alpha)?;
    let dom = build_domain(r.q, &r.alpha)?;
    let nc = normalizing_constant(r.q, &r.alpha)?;

    let mut failures = cert.failures();
    failures.extend(
        hs.relations.iter().filter(|c| !c.holds).map(|c| format!("height relation {}: {}", c.label, c.statement)),
    );
    failures.extend(dom.checks.iter().filter(|c| !c.holds).map(|c| format!("domain check {}", c.label)));
    if !nc.exact_match {
        failures.push("domain mass differs from the closed form of 1/C".into());
    }
    if nc.residual > MASS_TOL {
        failures.push(format!("mass residual {:e} exceeds {MASS_TOL:e}", nc.residual));
    }
    let passed = failures.is_empty();
    let verdict = if passed { "PASS" } else { "FAIL" };
    let critical = dom.critical.map(|c| {
        let show = |d: Option<u64>| d.map_or("inf".to_string(), |d| d.to_string());
        format!("d_{}(l0)={}, d_{}(r0)={}", c.index_l, show(c.d_l), c.index_r, show(c.d_r))
    });

    let body = match a.format.unwrap_or(Format::Text) {
        Format::Json | Format::Csv => json_text(&json!({
            "schema": SCHEMA,
            "command": "verify",
            "q": r.q.q(),
            "alpha": r.alpha.to_string(),
            "regime": dom.regime,
            "passed": passed,
            "failures": failures,
            "critical_digits": dom.critical,
            "ordering": cert,
            "heights": { "kind": hs.kind, "relations": hs.relations },
            "domain_checks": dom.checks,
            "normalizing_constant": {
                "value": nc.value,
                "formula": nc.formula,
                "exact_match": nc.exact_match,
                "residual": nc.residual,
            },
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{verdict} q={} alpha={} regime={}", r.q.q(), r.alpha, dom.regime);
            if let Some(c) = &critical {
                let _ = writeln!(s, "critical digits: {c}");
            }
            let _ = writeln!(s, "chain: {}", cert.chain);
            let held = cert.comparisons.iter().filter(|c| c.holds).count();
            let _ = writeln!(s, "comparisons: {held}/{} hold", cert.comparisons.len());
            for d in &cert.digit_relations {
                let _ = writeln!(s, "digit relation: {} [{}]", d.statement, if d.holds { "ok" } else { "fails" });
            }
            let _ = writeln!(
                s,
                "endpoint closed forms: {} checked, {}",
                cert.closed_forms_checked,
                ok(cert.closed_forms_hold)
            );
            let held = hs.relations.iter().filter(|c| c.holds).count();
            let _ = writeln!(s, "height relations: {held}/{} hold", hs.relations.len());
            let _ = writeln!(s, "rectangles: {} (dropped {})", dom.rects.len(), dom.dropped.len());
            let _ = writeln!(
                s,
                "C = {:.15} = {}, exact mass {}, residual {:.1e}",
                nc.value,
                nc.formula,
                ok(nc.exact_match),
                nc.residual
            );
            for f in &failures {
                let _ = writeln!(s, "failed: {f}");
            }
            s
        }
    };
    let mut report = Report::new(body, passed);
    report.failures = failures;
    Ok(report.routed(a.out.as_deref(), "verify"))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

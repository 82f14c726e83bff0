use std::fmt::Write;

use rosen_core::natext::{build_domain, normalizing_constant};
use serde_json::{json, Value};

use crate::args::{CommonArgs, Format};
use crate::output::{decimal_digits, json_text, Failure, Report, SCHEMA};

pub fn run(a: &CommonArgs) -> Result<Report, Failure> {
    let r = a.resolve()?;
    let digits = decimal_digits(r.bits);
    let dom = build_domain(r.q, &r.alpha)?;
    let nc = normalizing_constant(r.q, &r.alpha)?;
    let passed = dom.checks_hold() && nc.exact_match;

    let body = match a.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = dom.to_json(digits);
            let obj = v.as_object_mut().expect("domain json is an object");
            let mut out = serde_json::Map::new();
            out.insert("schema".into(), json!(SCHEMA));
            out.insert("command".into(), json!("domain"));
            out.insert("precision_bits".into(), json!(r.bits));
            out.insert("decimal_digits".into(), json!(digits));
            out.insert("rectangle_count".into(), json!(dom.rects.len()));
            out.insert("dropped_count".into(), json!(dom.dropped.len()));
            out.insert(
                "normalizing_constant".into(),
                json!({
                    "value": nc.value,
                    "formula": nc.formula,
                    "exact_match": nc.exact_match,
                    "mass_residual": nc.residual,
                }),
            );
            out.append(obj);
            json_text(&Value::Object(out))
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# q={} alpha={} regime={}", r.q.q(), r.alpha, dom.regime);
            let _ = writeln!(s, "# precision={} bits ({} decimals)", r.bits, digits);
            let _ = writeln!(s, "# C={} formula={} mass_residual={:e}", nc.value, nc.formula, nc.residual);
            let _ = writeln!(s, "# rectangles={} dropped={:?}", dom.rects.len(), dom.dropped);
            s.push_str("index,left,right,height,left_exact,right_exact,height_exact\n");
            for rect in &dom.rects {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    rect.index,
                    rect.left.to_decimal(digits),
                    rect.right.to_decimal(digits),
                    rect.height.to_decimal(digits),
                    rect.left,
                    rect.right,
                    rect.height
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "q={} alpha={} regime={}", r.q.q(), r.alpha, dom.regime);
            let _ = writeln!(s, "precision: {} bits ({} decimals)", r.bits, digits);
            let _ = writeln!(s, "{} rectangles, {} dropped {:?}", dom.rects.len(), dom.dropped.len(), dom.dropped);
            for rect in &dom.rects {
                let _ = writeln!(
                    s,
                    "J_{:<3} [{}, {}) x [0, {}]",
                    rect.index,
                    rect.left.to_decimal(digits),
                    rect.right.to_decimal(digits),
                    rect.height.to_decimal(digits)
                );
            }
            let _ = writeln!(s, "C = {:.15} = {}, mass residual {:.1e}", nc.value, nc.formula, nc.residual);
            s
        }
    };
    let mut report = Report::new(body, passed);
    if !passed {
        report.failures.push("domain closed-form checks".into());
    }
    Ok(report.routed(a.out.as_deref(), "domain"))
}

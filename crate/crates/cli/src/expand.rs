use std::fmt::Write;

use rosen_core::algebra::AlgebraicNumber;
use rosen_core::expansion::{convergents, orbit, parse_field_element, ExactParams, Params};
use serde_json::{json, Value};

use crate::args::{ExpandArgs, Format};
use crate::output::{decimal_digits, json_text, Failure, Report, SCHEMA};

/// The number of fractional digits of a plain decimal such as -0.70710678.
fn decimal_places(s: &str) -> Option<u32> {
    let t = s.trim();
    let t = t.strip_prefix(['-', '+']).unwrap_or(t);
    let (int, frac) = t.split_once('.')?;
    let digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    (digits(int) && digits(frac) && !frac.is_empty()).then_some(frac.len() as u32)
}

/// A decimal input stands for every point it rounds from; when that window holds an
/// endpoint of the interval, the endpoint is expanded instead.
fn snap_to_endpoint(input: &str, x: &AlgebraicNumber, p: &ExactParams) -> Result<Option<&'static str>, Failure> {
    let Some(k) = decimal_places(input) else {
        return Ok(None);
    };
    let half = parse_field_element(&format!("1/2{}", "0".repeat(k as usize)), p.q)?;
    for (name, end) in [("l0", &p.left), ("r0", &p.right)] {
        if x != end && (x - end).abs() <= half {
            return Ok(Some(name));
        }
    }
    Ok(None)
}

pub fn run(a: &ExpandArgs) -> Result<Report, Failure> {
    let r = a.common.resolve()?;
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let digits = decimal_digits(r.bits);
    let p = Params::exact(r.q, &r.alpha)?;
    let mut x = parse_field_element(&a.x, r.q)?;
    let snapped = snap_to_endpoint(&a.x, &x, &p)?;
    if let Some(name) = snapped {
        x = if name == "l0" { p.left.clone() } else { p.right.clone() };
    }
    if !p.contains(&x) {
        return Err(Failure::Usage(format!(
            "x = {} lies outside [l0, r0] = [{}, {}]",
            a.x,
            p.left.to_decimal(digits),
            p.right.to_decimal(digits)
        )));
    }
    let orb = orbit(&x, a.n, &p)?;
    let exp = &orb.expansion;
    let k = p.bound_constant();
    let mut rows = Vec::new();
    for pair in convergents(&exp.digits, &p).into_iter().skip(2) {
        let value = &pair.r / &pair.s;
        let error = (&x - &value).abs();
        let bound = &k / (&pair.s * &pair.s);
        let holds = error <= bound;
        rows.push((pair, value, error, bound, holds));
    }
    let passed = rows.iter().all(|r| r.4);

    let format = a.common.format.unwrap_or(Format::Text);
    let body = match format {
        Format::Json => {
            let conv: Vec<Value> = rows
                .iter()
                .map(|(pair, value, error, bound, holds)| {
                    json!({
                        "n": pair.n,
                        "digit": exp.digits[pair.n as usize - 1].to_string(),
                        "r": pair.r.to_string(),
                        "s": pair.s.to_string(),
                        "value": value.to_decimal(digits),
                        "error": error.to_decimal(digits),
                        "bound": bound.to_decimal(digits),
                        "holds": holds,
                    })
                })
                .collect();
            json_text(&json!({
                "schema": SCHEMA,
                "command": "expand",
                "q": r.q.q(),
                "alpha": r.alpha.to_string(),
                "precision_bits": r.bits,
                "decimal_digits": digits,
                "x": { "input": a.x, "exact": x.to_string(), "decimal": x.to_decimal(digits), "snapped_to": snapped },
                "bound_constant": k.to_decimal(digits),
                "digits": exp.digits.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "terminated": exp.terminated,
                "convergents": conv,
                "passed": passed,
            }))
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# q={} alpha={} x={} precision={} bits ({} decimals)",
                r.q.q(),
                r.alpha,
                a.x,
                r.bits,
                digits
            );
            s.push_str("n,eps,d,value,error,bound,holds\n");
            for (pair, value, error, bound, holds) in &rows {
                let dg = exp.digits[pair.n as usize - 1];
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    pair.n,
                    dg.eps,
                    dg.d.unwrap_or(0),
                    value.to_decimal(digits),
                    error.to_decimal(digits),
                    bound.to_decimal(digits),
                    holds
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "q={} alpha={} lambda={}", r.q.q(), r.alpha, p.lambda.to_decimal(digits));
            let _ = writeln!(s, "precision: {} bits ({} decimals)", r.bits, digits);
            match snapped {
                Some(name) => {
                    let _ = writeln!(
                        s,
                        "x = {} agrees with {name} = {} to the digits given; expanding {name}",
                        a.x,
                        x.to_decimal(digits)
                    );
                }
                None => {
                    let _ = writeln!(s, "x = {}", x.to_decimal(digits));
                }
            }
            let _ = writeln!(s, "bound constant K = {}", k.to_decimal(digits));
            let _ = writeln!(
                s,
                "{:>3}  {:<8}  {:<w$}  {:<w$}  K/S_n^2",
                "n",
                "digit",
                "R_n/S_n",
                "|x - R_n/S_n|",
                w = digits + 3
            );
            for (pair, value, error, bound, holds) in &rows {
                let _ = writeln!(
                    s,
                    "{:>3}  {:<8}  {:<w$}  {:<w$}  {}{}",
                    pair.n,
                    exp.digits[pair.n as usize - 1].to_string(),
                    value.to_decimal(digits),
                    error.to_decimal(digits),
                    bound.to_decimal(digits),
                    if *holds { "" } else { "  VIOLATED" },
                    w = digits + 3
                );
            }
            if exp.terminated {
                let _ = writeln!(
                    s,
                    "orbit reaches 0 after {} digit{}: x = R_{n}/S_{n} exactly",
                    exp.digits.len(),
                    if exp.digits.len() == 1 { "" } else { "s" },
                    n = exp.digits.len()
                );
            }
            s
        }
    };
    let mut report = Report::new(body, passed);
    report.failures = rows.iter().filter(|r| !r.4).map(|r| format!("error bound at n = {}", r.0.n)).collect();
    Ok(report.routed(a.common.out.as_deref(), "expand"))
}

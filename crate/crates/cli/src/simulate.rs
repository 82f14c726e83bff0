use std::fmt::Write;

use rosen_core::metrics::{
    equidistribution, lenstra_constant, lenstra_experiment, theta_distribution_experiment, SimConfig,
};
use serde_json::json;

use crate::args::{Experiment, Format, SimulateArgs};
use crate::output::{json_text, Failure, Report, SCHEMA};

const DEFAULT_C: [&str; 4] = ["1/L", "2/L", "3/L", "4/L"];

/// A threshold: a positive number, `L`, or `k/L` with L the Lenstra constant.
fn parse_c(s: &str, lenstra: f64) -> Result<f64, Failure> {
    let t = s.trim();
    let bad = || Failure::Usage(format!("cannot parse --c {s:?}; expected a number, L or k/L"));
    let c = if t == "L" {
        lenstra
    } else if let Some(k) = t.strip_suffix("/L") {
        k.parse::<f64>().map_err(|_| bad())? / lenstra
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !(c.is_finite() && c > 0.0) {
        return Err(Failure::Usage(format!("--c must be positive, got {s}")));
    }
    Ok(c)
}

pub fn run(a: &SimulateArgs) -> Result<Report, Failure> {
    let r = a.common.resolve()?;
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let cfg = SimConfig::new(a.n, a.seed).with_threads(a.threads);
    let format = a.common.format;
    let mut summary = String::new();
    let _ = writeln!(summary, "# q={} alpha={} N={} seed={} shards={}", r.q.q(), r.alpha, cfg.n, cfg.seed, cfg.shards);
    let (csv, data, passed, failures) = match a.experiment {
        Experiment::Lenstra => {
            let lenstra = lenstra_constant(r.q, &r.alpha)
                .map_err(|e| Failure::Usage(format!("{e}; the lenstra experiment needs even q")))?
                .to_f64();
            let raw: Vec<&str> =
                if a.c.is_empty() { DEFAULT_C.to_vec() } else { a.c.iter().map(String::as_str).collect() };
            let cs = raw.iter().map(|s| parse_c(s, lenstra)).collect::<Result<Vec<_>, _>>()?;
            let rep = lenstra_experiment(r.q, &r.alpha, &cs, &cfg)?;
            let _ = writeln!(
                summary,
                "lenstra L={:.10} C={:.10} slope lambda*C={:.10}",
                rep.lenstra, rep.c_q_alpha, rep.slope_theory
            );
            for p in &rep.points {
                let _ = writeln!(
                    summary,
                    "c={:.6} theory={:.5} empirical={:.5} sigma={:.2e} z={:+.2}",
                    p.c, p.theory, p.empirical, p.sigma, p.z
                );
            }
            let _ = writeln!(summary, "fitted slope {:.6} vs {:.6}", rep.slope, rep.slope_theory);
            if !rep.below_threshold.is_empty() {
                let _ = writeln!(summary, "note: c < 1/L for {:?}, outside the linear range", rep.below_threshold);
            }
            (rep.to_csv(r.q, &r.alpha, &cfg), json!(rep), true, Vec::new())
        }
        Experiment::Theta2d => {
            let rep = theta_distribution_experiment(r.q, &r.alpha, (a.bins, a.bins), &cfg)?;
            let band = 5.0 / (rep.n as f64).sqrt();
            let _ = writeln!(
                summary,
                "theta2d cells={}x{} mass={:.6} sup|empirical-theory|={:.3e} (5/sqrt(N)={:.3e}) outside_gamma={}",
                rep.nx,
                rep.ny,
                rep.total_mass(),
                rep.sup_discrepancy(),
                band,
                rep.outside_gamma
            );
            let ok = rep.outside_gamma == 0;
            let fails = if ok { vec![] } else { vec![format!("{} pairs outside Gamma", rep.outside_gamma)] };
            (rep.to_csv(r.q, &r.alpha, &cfg), json!(rep), ok, fails)
        }
        Experiment::Equidistribution => {
            let rep = equidistribution(r.q, &r.alpha, a.refine, &cfg)?;
            let _ = writeln!(
                summary,
                "equidistribution cells={} max|z|={:.3} outside={}",
                rep.cells.len(),
                rep.max_abs_z,
                rep.outside
            );
            for c in rep.cells.iter().filter(|_| a.refine == 1) {
                let _ = writeln!(
                    summary,
                    "rect {} expected={:.6} empirical={:.6} z={:+.2}",
                    c.rect, c.expected, c.empirical, c.z
                );
            }
            let ok = rep.outside == 0;
            let fails = if ok { vec![] } else { vec![format!("{} orbit points outside the domain", rep.outside)] };
            (rep.to_csv(r.q, &r.alpha, &cfg), json!(rep), ok, fails)
        }
    };
    let body = match format {
        Some(Format::Json) => Some(json_text(&json!({
            "schema": SCHEMA,
            "command": "simulate",
            "experiment": format!("{:?}", a.experiment).to_lowercase(),
            "q": r.q.q(),
            "alpha": r.alpha.to_string(),
            "config": cfg,
            "report": data,
        }))),
        Some(Format::Csv) => Some(csv),
        Some(Format::Text) => None,
        None if a.common.out.is_some() => Some(csv),
        None => None,
    };
    let mut report = match (body, &a.common.out) {
        (Some(body), Some(path)) => {
            let mut rep = Report::new(summary, passed);
            rep.file = Some((path.clone(), body));
            rep
        }
        (Some(body), None) => {
            eprint!("{summary}");
            Report::new(body, passed)
        }
        (None, _) => Report::new(summary, passed),
    };
    report.failures = failures;
    Ok(report)
}

use std::fmt::Write as _;

use serde::Serialize;

use super::density::GammaDensity;
use super::lenstra::lenstra_constant;
use super::sim::{run_sharded, Accumulator, SimConfig};
use super::theta::{f_inverse, f_map};
use crate::algebra::GroupIndex;
use crate::error::Result;
use crate::expansion::{Alpha, Params};
use crate::natext::{build_domain, normalizing_constant, DomainF64, OrbitSample};

fn header(out: &mut String, q: GroupIndex, alpha: &Alpha, cfg: &SimConfig) {
    let _ = writeln!(
        out,
        "# q={} alpha={} N={} seed={} shards={} precision=f64",
        q.q(),
        alpha,
        cfg.n,
        cfg.seed,
        cfg.shards
    );
}

/// Least-squares slope of y = s x through the origin.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LenstraPoint {
    pub c: f64,
    pub empirical: f64,
    pub theory: f64,
    /// Binomial standard deviation sqrt(p (1 - p) / N) at the theoretical p.
    pub sigma: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LenstraReport {
    pub q: u32,
    pub alpha: String,
    pub n: u64,
    pub seed: u64,
    pub lenstra: f64,
    pub c_q_alpha: f64,
    pub points: Vec<LenstraPoint>,
    /// Fitted slope of the frequency in 1/c, and lambda C_{q,alpha}.
    pub slope: f64,
    pub slope_theory: f64,
    /// c values below 1/L_alpha, where the linear law is not guaranteed.
    pub below_threshold: Vec<f64>,
}

impl LenstraReport {
    pub fn to_csv(&self, q: GroupIndex, alpha: &Alpha, cfg: &SimConfig) -> String {
        let mut out = String::new();
        header(&mut out, q, alpha, cfg);
        out.push_str("c,empirical,theoretical,sigma,z\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{},{},{}", p.c, p.empirical, p.theory, p.sigma, p.z);
        }
        out
    }
}

struct ThresholdCounts {
    limits: Vec<f64>,
    below: Vec<u64>,
    total: u64,
}

impl Accumulator for ThresholdCounts {
    fn visit(&mut self, s: &OrbitSample) {
        let theta = s.t.abs() / (1.0 + s.t * s.v);
        for (lim, cnt) in self.limits.iter().zip(self.below.iter_mut()) {
            *cnt += u64::from(theta < *lim);
        }
        self.total += 1;
    }

    fn merge(&mut self, o: Self) {
        for (a, b) in self.below.iter_mut().zip(o.below) {
            *a += b;
        }
        self.total += o.total;
    }
}

/// Frequency of Theta_n < 1/c along one typical orbit per shard, against lambda C_{q,alpha} / c.
pub fn lenstra_experiment(q: GroupIndex, alpha: &Alpha, cs: &[f64], cfg: &SimConfig) -> Result<LenstraReport> {
    let lenstra = lenstra_constant(q, alpha)?.to_f64();
    let c_const = normalizing_constant(q, alpha)?.value;
    let p = Params::exact(q, alpha)?.to_float();
    let limits: Vec<f64> = cs.iter().map(|c| 1.0 / c).collect();
    let acc =
        run_sharded(&p, cfg, || ThresholdCounts { limits: limits.clone(), below: vec![0; limits.len()], total: 0 })?;
    let n = acc.total as f64;
    let slope_theory = p.lambda * c_const;
    let points: Vec<LenstraPoint> = cs
        .iter()
        .zip(&acc.below)
        .map(|(&c, &k)| {
            let theory = slope_theory / c;
            let empirical = k as f64 / n;
            let sigma = (theory * (1.0 - theory) / n).sqrt();
            LenstraPoint { c, empirical, theory, sigma, z: (empirical - theory) / sigma }
        })
        .collect();
    let xs: Vec<f64> = cs.iter().map(|c| 1.0 / c).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.empirical).collect();
    Ok(LenstraReport {
        q: q.q(),
        alpha: alpha.to_string(),
        n: acc.total,
        seed: cfg.seed,
        lenstra,
        c_q_alpha: c_const,
        slope: fit_slope(&xs, &ys),
        slope_theory,
        below_threshold: cs.iter().copied().filter(|c| c * lenstra < 1.0 - 1e-12).collect(),
        points,
    })
}

/// Joint histogram of (Theta_{n-1}, Theta_n) on a grid over the bounding box of the folded Gamma.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaHistogram {
    pub nx: usize,
    pub ny: usize,
    pub xi_max: f64,
    pub eta_max: f64,
    pub n: u64,
    /// Row-major by xi, then eta; fractions of all samples.
    pub empirical: Vec<f64>,
    /// Integral of the folded density over each cell.
    pub theoretical: Vec<f64>,
    /// Samples whose F-preimage left Omega_alpha by more than 1e-9.
    pub outside_gamma: u64,
}

impl ThetaHistogram {
    pub fn total_mass(&self) -> f64 {
        self.empirical.iter().sum()
    }

    pub fn sup_discrepancy(&self) -> f64 {
        self.empirical.iter().zip(&self.theoretical).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self, q: GroupIndex, alpha: &Alpha, cfg: &SimConfig) -> String {
        let mut out = String::new();
        header(&mut out, q, alpha, cfg);
        out.push_str("xi_lo,xi_hi,eta_lo,eta_hi,empirical,theoretical\n");
        let (dx, dy) = (self.xi_max / self.nx as f64, self.eta_max / self.ny as f64);
        for i in 0..self.nx {
            for j in 0..self.ny {
                let k = i * self.ny + j;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    i as f64 * dx,
                    (i + 1) as f64 * dx,
                    j as f64 * dy,
                    (j + 1) as f64 * dy,
                    self.empirical[k],
                    self.theoretical[k]
                );
            }
        }
        out
    }
}

struct Grid2 {
    nx: usize,
    ny: usize,
    xi_max: f64,
    eta_max: f64,
    domain: DomainF64,
    counts: Vec<u64>,
    outside: u64,
    total: u64,
}

impl Accumulator for Grid2 {
    fn visit(&mut self, s: &OrbitSample) {
        self.total += 1;
        let Ok((xi, eta)) = f_map(s.t, s.v) else {
            self.outside += 1;
            return;
        };
        match f_inverse(xi, eta) {
            Ok((t, v)) if self.domain.contains_tol(t, v, 1e-9) => {}
            _ => self.outside += 1,
        }
        let i = ((xi / self.xi_max) * self.nx as f64) as usize;
        let j = ((eta.abs() / self.eta_max) * self.ny as f64) as usize;
        self.counts[i.min(self.nx - 1) * self.ny + j.min(self.ny - 1)] += 1;
    }

    fn merge(&mut self, o: Self) {
        for (a, b) in self.counts.iter_mut().zip(o.counts) {
            *a += b;
        }
        self.outside += o.outside;
        self.total += o.total;
    }
}

/// Oversampling per cell side for the quadrature of the density.
const QUAD: usize = 16;

/// Empirical distribution of (Theta_{n-1}, Theta_n) against the quadrature of the folded density.
pub fn theta_distribution_experiment(
    q: GroupIndex,
    alpha: &Alpha,
    grid: (usize, usize),
    cfg: &SimConfig,
) -> Result<ThetaHistogram> {
    let dens = GammaDensity::new(q, alpha)?;
    let p = Params::exact(q, alpha)?.to_float();
    let (xi_max, eta_max) = dens.bounding_box();
    let (nx, ny) = (grid.0.max(1), grid.1.max(1));
    let make = || Grid2 {
        nx,
        ny,
        xi_max,
        eta_max,
        domain: dens.domain.clone(),
        counts: vec![0; nx * ny],
        outside: 0,
        total: 0,
    };
    let acc = run_sharded(&p, cfg, make)?;
    let (dx, dy) = (xi_max / nx as f64, eta_max / ny as f64);
    let mut theoretical = vec![0.0; nx * ny];
    for i in 0..nx {
        for j in 0..ny {
            let mut sum = 0.0;
            for a in 0..QUAD {
                for b in 0..QUAD {
                    let xi = (i as f64 + (a as f64 + 0.5) / QUAD as f64) * dx;
                    let eta = (j as f64 + (b as f64 + 0.5) / QUAD as f64) * dy;
                    sum += dens.folded(xi, eta)?;
                }
            }
            theoretical[i * ny + j] = sum / (QUAD * QUAD) as f64 * dx * dy;
        }
    }
    let n = acc.total as f64;
    Ok(ThetaHistogram {
        nx,
        ny,
        xi_max,
        eta_max,
        n: acc.total,
        empirical: acc.counts.iter().map(|&c| c as f64 / n).collect(),
        theoretical,
        outside_gamma: acc.outside,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CellStat {
    /// Position of the rectangle in the domain, left to right.
    pub rect: usize,
    pub sub_x: usize,
    pub sub_y: usize,
    pub expected: f64,
    pub empirical: f64,
    pub sigma: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistributionReport {
    pub n: u64,
    pub cells: Vec<CellStat>,
    pub max_abs_z: f64,
    /// Orbit points that fell outside every rectangle.
    pub outside: u64,
}

impl EquidistributionReport {
    pub fn to_csv(&self, q: GroupIndex, alpha: &Alpha, cfg: &SimConfig) -> String {
        let mut out = String::new();
        header(&mut out, q, alpha, cfg);
        out.push_str("rect,sub_x,sub_y,expected,empirical,sigma,z\n");
        for c in &self.cells {
            let _ =
                writeln!(out, "{},{},{},{},{},{},{}", c.rect, c.sub_x, c.sub_y, c.expected, c.empirical, c.sigma, c.z);
        }
        out
    }
}

struct Visits {
    domain: DomainF64,
    refine: usize,
    counts: Vec<u64>,
    outside: u64,
    total: u64,
}

impl Accumulator for Visits {
    fn visit(&mut self, s: &OrbitSample) {
        self.total += 1;
        let Some(i) = self.domain.locate(s.t) else {
            self.outside += 1;
            return;
        };
        let [a, b, h] = self.domain.rects[i];
        if s.v > h || s.v < 0.0 {
            self.outside += 1;
            return;
        }
        let k = self.refine;
        let sx = (((s.t - a) / (b - a)) * k as f64) as usize;
        let sy = ((s.v / h) * k as f64) as usize;
        self.counts[(i * k + sx.min(k - 1)) * k + sy.min(k - 1)] += 1;
    }

    fn merge(&mut self, o: Self) {
        for (a, b) in self.counts.iter_mut().zip(o.counts) {
            *a += b;
        }
        self.outside += o.outside;
        self.total += o.total;
    }
}

/// Visits of the planar orbit to each rectangle of Omega_alpha (each split `refine` x `refine`)
/// against the nu_alpha-mass of the cell.
pub fn equidistribution(
    q: GroupIndex,
    alpha: &Alpha,
    refine: usize,
    cfg: &SimConfig,
) -> Result<EquidistributionReport> {
    let dom = build_domain(q, alpha)?;
    let c_const = normalizing_constant(q, alpha)?.value;
    let fd = dom.to_f64();
    let p = dom.context().params.to_float();
    let k = refine.max(1);
    let make =
        || Visits { domain: fd.clone(), refine: k, counts: vec![0; fd.rects.len() * k * k], outside: 0, total: 0 };
    let acc = run_sharded(&p, cfg, make)?;
    let n = acc.total as f64;
    let mut cells = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for (i, &[a, b, h]) in fd.rects.iter().enumerate() {
        for sx in 0..k {
            for sy in 0..k {
                let x0 = a + (b - a) * sx as f64 / k as f64;
                let x1 = a + (b - a) * (sx + 1) as f64 / k as f64;
                let y0 = h * sy as f64 / k as f64;
                let y1 = h * (sy + 1) as f64 / k as f64;
                let expected = c_const * DomainF64::box_mass(x0, x1, y0, y1);
                let empirical = acc.counts[(i * k + sx) * k + sy] as f64 / n;
                let sigma = (expected * (1.0 - expected) / n).sqrt();
                let z = (empirical - expected) / sigma;
                max_abs_z = max_abs_z.max(z.abs());
                cells.push(CellStat { rect: i, sub_x: sx, sub_y: sy, expected, empirical, sigma, z });
            }
        }
    }
    Ok(EquidistributionReport { n: acc.total, cells, max_abs_z, outside: acc.outside })
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::FloatParams;
use crate::natext::{two_dim_map, OrbitSample};

/// Orbit steps discarded after every fresh starting point.
pub const BURN_IN: u64 = 1000;

/// Seeded, sharded simulation settings. Shard `i` draws from stream `i` of ChaCha8 seeded by `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    pub n: u64,
    pub seed: u64,
    pub shards: u32,
    pub burn_in: u64,
    /// Worker threads, 0 for the default pool.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(n: u64, seed: u64) -> SimConfig {
        SimConfig { n, seed, shards: 16, burn_in: BURN_IN, threads: 0 }
    }

    pub fn with_shards(mut self, shards: u32) -> SimConfig {
        self.shards = shards.max(1);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> SimConfig {
        self.threads = threads;
        self
    }

    fn steps_for(&self, shard: u32) -> u64 {
        let s = self.shards as u64;
        self.n / s + u64::from((shard as u64) < self.n % s)
    }
}

/// Per-shard statistics, merged by addition.
pub trait Accumulator: Send {
    fn visit(&mut self, sample: &OrbitSample);
    fn merge(&mut self, other: Self);
}

/// Walk `steps` points of T_alpha^n(x, 0) after burn-in, restarting from a fresh x whenever the orbit hits 0.
fn walk<A: Accumulator>(p: &FloatParams, cfg: &SimConfig, shard: u32, acc: &mut A) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::from(shard));
    let steps = cfg.steps_for(shard);
    let mut taken = 0;
    'restart: while taken < steps {
        let (mut t, mut v) = (rng.random_range(p.left..p.right), 0.0);
        let mut n = 0u64;
        while taken < steps {
            match two_dim_map(&t, &v, p) {
                Ok((t2, v2)) => (t, v) = (t2, v2),
                Err(Error::Terminated) => continue 'restart,
                Err(e) => return Err(e),
            }
            n += 1;
            if n > cfg.burn_in {
                let eps_next = if t < 0.0 { -1 } else { 1 };
                acc.visit(&OrbitSample { t, v, eps_next, n });
                taken += 1;
            }
        }
    }
    Ok(())
}

/// Run every shard (in parallel with the `parallel` feature) and merge in shard order.
pub fn run_sharded<A, F>(p: &FloatParams, cfg: &SimConfig, make: F) -> Result<A>
where
    A: Accumulator,
    F: Fn() -> A + Sync,
{
    let one = |shard: u32| -> Result<A> {
        let mut acc = make();
        walk(p, cfg, shard, &mut acc)?;
        Ok(acc)
    };
    let parts: Vec<Result<A>> = run_all(cfg, &one);
    let mut total = make();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

#[cfg(feature = "parallel")]
fn run_all<A: Send>(cfg: &SimConfig, one: &(dyn Fn(u32) -> Result<A> + Sync)) -> Vec<Result<A>> {
    use rayon::prelude::*;
    let go = || (0..cfg.shards).into_par_iter().map(one).collect();
    if cfg.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
            Ok(pool) => pool.install(go),
            Err(_) => go(),
        }
    } else {
        go()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_all<A: Send>(cfg: &SimConfig, one: &(dyn Fn(u32) -> Result<A> + Sync)) -> Vec<Result<A>> {
    (0..cfg.shards).map(one).collect()
}

//! Wall-clock scaling of the encoder over synthetic messages.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::BhfKind;
use crate::matcher::RefMatcher;
use crate::pipeline::{amac_encode, KeyPair};

pub const BENCH_SIZES: [usize; 4] = [10_000, 20_000, 100_000, 200_000];

/// Longest run of filler between forced identifier matches. Keeps H2 blocks
/// far below the length at which the accumulator overflows.
pub const MAX_FILLER: usize = 16;

/// Lowercase text with the identifier's pending byte forced in at least
/// every [`MAX_FILLER`] + 1 bytes.
pub fn synthetic_message(len: usize, identifier: &[u8], seed: u64) -> Result<Vec<u8>> {
    const FILLER: &[u8] = b"abcdefghijklmnopqrstuvwxyz     ,.";
    let mut matcher = RefMatcher::new(identifier)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let run = rng.gen_range(0..=MAX_FILLER);
        for _ in 0..run {
            let b = FILLER[rng.gen_range(0..FILLER.len())];
            matcher.feed(b);
            out.push(b);
        }
        let b = matcher.pending();
        matcher.feed(b);
        out.push(b);
    }
    out.truncate(len);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    /// Fastest single encode observed.
    pub best: Duration,
    pub runs: usize,
}

impl BenchRow {
    pub fn ns_per_byte(&self) -> Option<f64> {
        (self.size > 0).then(|| self.best.as_nanos() as f64 / self.size as f64)
    }
}

/// Time one encode per size, repeating until `budget` is spent (at least
/// three runs) and keeping the fastest run.
pub fn run(sizes: &[usize], keys: &KeyPair, kind: BhfKind, budget: Duration) -> Result<Vec<BenchRow>> {
    sizes
        .iter()
        .map(|&size| {
            let msg = synthetic_message(size, keys.identifier(), size as u64)?;
            let started = Instant::now();
            let mut best = Duration::MAX;
            let mut runs = 0;
            while runs < 3 || started.elapsed() < budget {
                let t = Instant::now();
                std::hint::black_box(amac_encode(std::hint::black_box(&msg), keys, kind)?);
                best = best.min(t.elapsed());
                runs += 1;
            }
            Ok(BenchRow { size, best, runs })
        })
        .collect()
}

/// `time(2n) / time(n)` for every `n` in `rows` whose double is also present.
pub fn doubling_ratios(rows: &[BenchRow]) -> Vec<(usize, f64)> {
    rows.iter()
        .filter_map(|r| {
            let twice = rows.iter().find(|d| d.size == 2 * r.size && r.size > 0)?;
            Some((r.size, twice.best.as_secs_f64() / r.best.as_secs_f64()))
        })
        .collect()
}

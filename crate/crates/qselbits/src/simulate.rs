//! Monte Carlo simulation of Quickselect on lazily generated bit-stream
//! keys, counting bit comparisons (the index of the first differing bit per
//! key comparison) and key comparisons.
//!
//! Randomness is counter-based: every (seed, trial, stream) triple keys an
//! independent ChaCha substream, so trials are reproducible bit-for-bit no
//! matter how work is distributed across threads, and merging statistics is
//! exact integer addition.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::harmonic_f64;
use crate::{Error, Result};

/// Keys agreeing on this many leading bits abort the run; a uniform pair
/// does so with probability 2^-4096, so hitting the cap means the
/// substreams collided.
pub const DEPTH_CAP: usize = 4096;

/// Stream index reserved for pivot draws.
const PIVOT_STREAM: u64 = u64::MAX;

fn substream(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    key[24..32].copy_from_slice(b"qselbits");
    ChaCha8Rng::from_seed(key)
}

enum BitSource {
    Stream(Box<ChaCha8Rng>),
    Fixed,
}

/// A key in (0, 1) represented by its binary expansion, materialized lazily.
/// Bit i is fixed once generated; extending the stream never changes
/// earlier bits.
pub struct BitKey {
    blocks: Vec<u64>,
    bits_avail: usize,
    source: BitSource,
}

impl BitKey {
    /// Fresh uniform key backed by the substream (seed, trial, stream).
    pub fn from_substream(seed: u64, trial: u64, stream: u64) -> Self {
        BitKey {
            blocks: Vec::new(),
            bits_avail: 0,
            source: BitSource::Stream(Box::new(substream(seed, trial, stream))),
        }
    }

    /// Key with an explicit finite bit pattern (most significant first);
    /// comparisons needing more bits than given fail.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut blocks = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                blocks[i / 64] |= 1u64 << (63 - i % 64);
            }
        }
        BitKey { blocks, bits_avail: bits.len(), source: BitSource::Fixed }
    }

    /// Bit at 0-based index, extending the stream as needed.
    fn bit(&mut self, idx: usize) -> Result<bool> {
        while idx >= self.bits_avail {
            match &mut self.source {
                BitSource::Stream(rng) => {
                    self.blocks.push(rng.next_u64());
                    self.bits_avail += 64;
                }
                BitSource::Fixed => return Err(Error::FixedKeyExhausted(self.bits_avail)),
            }
        }
        Ok(self.blocks[idx / 64] >> (63 - idx % 64) & 1 == 1)
    }

    /// Number of bits materialized so far.
    pub fn bits_materialized(&self) -> usize {
        self.bits_avail
    }
}

/// Which key compared larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyOrder {
    Less,
    Greater,
}

/// Outcome of one key comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompareOutcome {
    /// Ordering of the first key relative to the second.
    pub ordering: KeyOrder,
    /// 1-based index of the first differing bit: the number of bit
    /// comparisons this key comparison cost.
    pub bits_compared: u32,
}

/// Compare two keys bit by bit, extending both lazily.
pub fn compare(a: &mut BitKey, b: &mut BitKey) -> Result<CompareOutcome> {
    for i in 0..DEPTH_CAP {
        let (x, y) = (a.bit(i)?, b.bit(i)?);
        if x != y {
            return Ok(CompareOutcome {
                ordering: if x { KeyOrder::Greater } else { KeyOrder::Less },
                bits_compared: i as u32 + 1,
            });
        }
    }
    Err(Error::DepthCapExceeded(DEPTH_CAP))
}

/// Cost record of one Quickselect run.
#[derive(Clone, Debug)]
pub struct RunCost {
    /// Index (into the input slice) of the selected key.
    pub selected: usize,
    /// Total bit comparisons.
    pub bit_cost: u64,
    /// Total key comparisons.
    pub key_cost: u64,
}

/// Quickselect for the m-th smallest key (1-based).
///
/// `pick` chooses the pivot: it receives the current subfile size and
/// returns a 0-based position in it. Every other key in the subfile is
/// compared to the pivot exactly once per round; recursion descends into
/// the side containing rank m (seeking rank m - k on the right side when
/// the pivot lands at rank k < m).
///
/// When `pair_log` is given, each comparison is recorded as an index pair
/// into `keys`.
pub fn quickselect(
    keys: &mut [BitKey],
    m: usize,
    pick: &mut dyn FnMut(usize) -> usize,
    mut pair_log: Option<&mut Vec<(usize, usize)>>,
) -> Result<RunCost> {
    if m < 1 || m > keys.len() {
        return Err(Error::InvalidRank { m, n: keys.len() });
    }
    let mut current: Vec<usize> = (0..keys.len()).collect();
    let mut target = m;
    let mut bit_cost = 0u64;
    let mut key_cost = 0u64;
    loop {
        if current.len() == 1 {
            return Ok(RunCost { selected: current[0], bit_cost, key_cost });
        }
        let pivot_pos = pick(current.len());
        debug_assert!(pivot_pos < current.len());
        let pivot = current[pivot_pos];
        let mut smaller = Vec::with_capacity(current.len() - 1);
        let mut larger = Vec::with_capacity(current.len() - 1);
        for &idx in current.iter().filter(|&&idx| idx != pivot) {
            let (a, b) = split_pair(keys, idx, pivot);
            let outcome = compare(a, b)?;
            bit_cost += outcome.bits_compared as u64;
            key_cost += 1;
            if let Some(log) = pair_log.as_deref_mut() {
                log.push((idx, pivot));
            }
            match outcome.ordering {
                KeyOrder::Less => smaller.push(idx),
                KeyOrder::Greater => larger.push(idx),
            }
        }
        let pivot_rank = smaller.len() + 1;
        if pivot_rank == target {
            return Ok(RunCost { selected: pivot, bit_cost, key_cost });
        } else if target < pivot_rank {
            current = smaller;
        } else {
            target -= pivot_rank;
            current = larger;
        }
    }
}

/// Two distinct mutable references into one slice.
fn split_pair(keys: &mut [BitKey], i: usize, j: usize) -> (&mut BitKey, &mut BitKey) {
    debug_assert_ne!(i, j);
    if i < j {
        let (lo, hi) = keys.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = keys.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

/// Ranks of all keys (1-based), by sorting with full comparisons. Bit
/// extension is deterministic, so ranking does not perturb later costs.
fn rank_keys(keys: &mut [BitKey]) -> Result<Vec<usize>> {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    // insertion sort via compare(); n stays small in simulation
    for i in 1..n {
        let mut j = i;
        while j > 0 {
            let (a, b) = split_pair(keys, order[j - 1], order[j]);
            if compare(a, b)?.ordering == KeyOrder::Greater {
                order.swap(j - 1, j);
                j -= 1;
            } else {
                break;
            }
        }
    }
    let mut rank = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        rank[idx] = pos + 1;
    }
    Ok(rank)
}

/// Sufficient statistics of simulated bit and key comparison counts.
/// Merging is exact integer addition, so aggregation order (and thread
/// count) cannot change the result.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelectStats {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub bit_sum: u64,
    pub bit_sum_sq: u128,
    pub key_sum: u64,
    pub key_sum_sq: u128,
}

impl SelectStats {
    fn record(&mut self, bit: u64, key: u64) {
        self.trials += 1;
        self.bit_sum += bit;
        self.bit_sum_sq += (bit as u128) * (bit as u128);
        self.key_sum += key;
        self.key_sum_sq += (key as u128) * (key as u128);
    }

    fn merge(mut self, other: &SelectStats) -> SelectStats {
        self.trials += other.trials;
        self.bit_sum += other.bit_sum;
        self.bit_sum_sq += other.bit_sum_sq;
        self.key_sum += other.key_sum;
        self.key_sum_sq += other.key_sum_sq;
        self
    }

    pub fn bit_mean(&self) -> f64 {
        self.bit_sum as f64 / self.trials as f64
    }

    pub fn key_mean(&self) -> f64 {
        self.key_sum as f64 / self.trials as f64
    }

    fn stderr(sum: u64, sum_sq: u128, trials: u64) -> f64 {
        if trials < 2 {
            return f64::NAN;
        }
        let t = trials as f64;
        let mean = sum as f64 / t;
        let var = (sum_sq as f64 / t - mean * mean) * t / (t - 1.0);
        (var.max(0.0) / t).sqrt()
    }

    /// Standard error of the bit-comparison mean.
    pub fn bit_stderr(&self) -> f64 {
        Self::stderr(self.bit_sum, self.bit_sum_sq, self.trials)
    }

    /// Standard error of the key-comparison mean.
    pub fn key_stderr(&self) -> f64 {
        Self::stderr(self.key_sum, self.key_sum_sq, self.trials)
    }

    pub fn report(&self) -> SimReport {
        SimReport {
            m: self.m,
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            bit_mean: self.bit_mean(),
            bit_stderr: self.bit_stderr(),
            key_mean: self.key_mean(),
            key_stderr: self.key_stderr(),
        }
    }
}

/// JSON-facing summary of a simulation.
#[derive(Clone, Debug, Serialize)]
pub struct SimReport {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub bit_mean: f64,
    pub bit_stderr: f64,
    pub key_mean: f64,
    pub key_stderr: f64,
}

fn run_trial(m: usize, n: usize, seed: u64, trial: u64) -> Result<(u64, u64)> {
    let mut keys: Vec<BitKey> = (0..n as u64)
        .map(|i| BitKey::from_substream(seed, trial, i))
        .collect();
    let mut pivot_rng = substream(seed, trial, PIVOT_STREAM);
    let mut pick = |len: usize| pivot_rng.random_range(0..len);
    let cost = quickselect(&mut keys, m, &mut pick, None)?;
    // every trial checks itself against a full sort
    let rank = rank_keys(&mut keys)?;
    if rank[cost.selected] != m {
        return Err(Error::InvalidRank { m, n });
    }
    Ok((cost.bit_cost, cost.key_cost))
}

/// Run `trials` independent Quickselect simulations and aggregate their
/// costs. Reproducible for a fixed seed regardless of worker count; the
/// selected key is verified against a full sort in every trial.
pub fn monte_carlo(m: usize, n: usize, trials: u64, seed: u64) -> Result<SelectStats> {
    if trials < 1 {
        return Err(Error::NoTrials);
    }
    if m < 1 || m > n {
        return Err(Error::InvalidRank { m, n });
    }
    let base = SelectStats { m, n, seed, ..SelectStats::default() };
    (0..trials)
        .into_par_iter()
        .try_fold(
            || base.clone(),
            |mut acc, trial| {
                let (bit, key) = run_trial(m, n, seed, trial)?;
                acc.record(bit, key);
                Ok(acc)
            },
        )
        .try_reduce(|| base.clone(), |a, b| Ok(a.merge(&b)))
}

/// Empirical vs theoretical comparison probability for one rank pair.
#[derive(Clone, Debug, Serialize)]
pub struct PairFrequency {
    /// Smaller rank of the pair (1-based).
    pub i: usize,
    /// Larger rank of the pair.
    pub j: usize,
    pub empirical: f64,
    pub theoretical: f64,
    /// Binomial standard error of the empirical frequency.
    pub stderr: f64,
}

/// Probability that the keys of ranks i < j are ever compared when
/// selecting rank m out of n.
pub fn pair_probability(m: usize, n: usize, i: usize, j: usize) -> f64 {
    debug_assert!(1 <= i && i < j && j <= n);
    if m <= i {
        2.0 / (j - m + 1) as f64
    } else if j <= m {
        2.0 / (m - i + 1) as f64
    } else {
        2.0 / (j - i + 1) as f64
    }
}

/// Expected number of key comparisons to select rank m of n
/// (2[n + 3 + (n+1)H_n - (m+2)H_m - (n+3-m)H_{n+1-m}]).
pub fn expected_key_comparisons(m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    2.0 * (nf + 3.0 + (nf + 1.0) * harmonic_f64(n as u64)
        - (mf + 2.0) * harmonic_f64(m as u64)
        - (nf + 3.0 - mf) * harmonic_f64((n + 1 - m) as u64))
}

/// Estimate every rank pair's comparison frequency and report it against
/// the theoretical value.
pub fn pair_frequency_check(
    m: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<PairFrequency>> {
    if trials < 1 {
        return Err(Error::NoTrials);
    }
    if m < 1 || m > n {
        return Err(Error::InvalidRank { m, n });
    }
    let counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .try_fold(
            || vec![0u64; n * n],
            |mut acc: Vec<u64>, trial| -> Result<Vec<u64>> {
                let mut keys: Vec<BitKey> = (0..n as u64)
                    .map(|i| BitKey::from_substream(seed, trial, i))
                    .collect();
                let mut pivot_rng = substream(seed, trial, PIVOT_STREAM);
                let mut pick = |len: usize| pivot_rng.random_range(0..len);
                let mut log = Vec::new();
                let cost = quickselect(&mut keys, m, &mut pick, Some(&mut log))?;
                let rank = rank_keys(&mut keys)?;
                if rank[cost.selected] != m {
                    return Err(Error::InvalidRank { m, n });
                }
                for (a, b) in log {
                    let (ri, rj) = (rank[a].min(rank[b]), rank[a].max(rank[b]));
                    acc[(ri - 1) * n + (rj - 1)] += 1;
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; n * n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let p = counts[(i - 1) * n + (j - 1)] as f64 / trials as f64;
            let theo = pair_probability(m, n, i, j);
            out.push(PairFrequency {
                i,
                j,
                empirical: p,
                theoretical: theo,
                stderr: (theo * (1.0 - theo) / trials as f64).sqrt(),
            });
        }
    }
    Ok(out)
}

//! Counter-based randomness for the graphical construction.
//!
//! Every site carries an infinite stream of Poisson ring increments and
//! tie-break marks, derived by hashing `(master_seed, site, index)`. The
//! stream at a site never depends on scheduling order, so coupled runs that
//! share a `ClockField` see identical clock realizations with O(1) memory.

const SALT_RING: u64 = 0x9e37_79b9_7f4a_7c15;
const SALT_MARK: u64 = 0x2545_f491_4f6c_dd1d;

/// Lane offset for one-dimensional systems keyed on `(x, LANE)`, kept far
/// away from any realistic two-dimensional lattice coordinate.
pub const LANE_EXCLUSION: i64 = 1 << 40;
pub const LANE_ZERO_RANGE: i64 = 2 << 40;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(seed: u64, kx: i64, ky: i64, n: u64, salt: u64) -> u64 {
    let mut s = splitmix64(seed ^ salt);
    s = splitmix64(s ^ (kx as u64));
    s = splitmix64(s ^ (ky as u64).rotate_left(17));
    splitmix64(s ^ n)
}

/// Uniform in the open interval (0, 1).
fn to_open_unit(w: u64) -> f64 {
    ((w >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// Probability that a tie resolves to plus: `e^h / (2 cosh h)`.
pub fn tie_plus_probability(h: f64) -> f64 {
    if h.is_infinite() {
        1.0
    } else {
        1.0 / (1.0 + (-2.0 * h).exp())
    }
}

/// Deterministic per-site streams of exponential ring increments and
/// tie-break marks.
#[derive(Clone, Copy, Debug)]
pub struct ClockField {
    master_seed: u64,
}

impl ClockField {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// The `n`-th Exp(1) ring increment of the site keyed by `key`.
    /// Strictly positive.
    pub fn ring_increment(&self, key: (i64, i64), n: u64) -> f64 {
        let u = to_open_unit(mix(self.master_seed, key.0, key.1, n, SALT_RING));
        -(1.0 - u).ln()
    }

    /// Uniform in (0, 1) attached to the `n`-th ring, used for tie marks
    /// and finite-temperature updates.
    pub fn uniform(&self, key: (i64, i64), n: u64) -> f64 {
        to_open_unit(mix(self.master_seed, key.0, key.1, n, SALT_MARK))
    }

    /// Tie-break mark of the `n`-th ring: +1 with probability
    /// `e^h / (2 cosh h)`, -1 otherwise.
    pub fn tie_mark(&self, key: (i64, i64), n: u64, h: f64) -> i8 {
        if self.uniform(key, n) < tie_plus_probability(h) {
            1
        } else {
            -1
        }
    }

    /// Time of the `n`-th ring (1-based: `ring_time(key, 1)` is the first
    /// ring). Linear scan; engines keep cumulative sums instead.
    pub fn ring_time(&self, key: (i64, i64), n: u64) -> f64 {
        (0..n).map(|k| self.ring_increment(key, k)).sum()
    }

    /// First ring index and time strictly after `t`.
    pub fn first_ring_after(&self, key: (i64, i64), t: f64) -> (u64, f64) {
        let mut n = 0;
        let mut acc = self.ring_increment(key, 0);
        while acc <= t {
            n += 1;
            acc += self.ring_increment(key, n);
        }
        (n, acc)
    }
}

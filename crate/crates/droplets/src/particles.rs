//! Bijections between monotone interfaces and one-dimensional particle
//! systems, plus direct simulators for the exclusion process (SSEP / ASEP /
//! TASEP) and the annihilating zero-range process.
//!
//! Orientation convention: interfaces are graphs in the diagonal frame
//! `f1 = (e1 - e2)/2`, `f2 = (e1 + e2)/2` with the minus phase above the
//! graph. A local minimum of the height is a flippable minus cell; flipping
//! it to plus raises the height by two, which is a particle jumping right.
//! Right jumps then occur at rate `e^h / (2 cosh h)`, so `h = inf` is the
//! totally asymmetric process with unit right rate.

use crate::clock::{ClockField, LANE_EXCLUSION, LANE_ZERO_RANGE};
use crate::lattice::{FieldParameter, Site, SpinConfiguration};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParticleError {
    #[error("height increments must be +-1")]
    NotAPath,
    #[error("domain too short")]
    DomainTooShort,
    #[error("the configuration's minus set is not an increasing set")]
    NotMonotone,
    #[error("sample times must be sorted, nonnegative, and within the horizon")]
    BadSampleTimes,
}

/// Integer lattice path: `values[k]` is the height at column `start + k`,
/// with `|eta(x+1) - eta(x)| = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    start: i64,
    values: Vec<i64>,
}

impl HeightFunction {
    pub fn new(start: i64, values: Vec<i64>) -> Result<Self, ParticleError> {
        if values.len() < 2 {
            return Err(ParticleError::DomainTooShort);
        }
        if values.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(ParticleError::NotAPath);
        }
        Ok(Self { start, values })
    }

    /// The corner profile `eta(x) = |x|` on `[-half, half]`.
    pub fn corner(half: i64) -> Self {
        Self::new(-half, (-half..=half).map(|a| a.abs()).collect()).unwrap()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn value(&self, x: i64) -> i64 {
        self.values[(x - self.start) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn columns(&self) -> impl Iterator<Item = i64> + '_ {
        self.start..=self.end()
    }
}

/// Exclusion-process occupations `xi(x) = (eta(x) - eta(x+1) + 1) / 2` on
/// the segment `[start, start + len - 1]`, carrying the anchoring height
/// `eta(start)` so the inverse map is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupationField {
    start: i64,
    occupied: Vec<bool>,
    anchor_height: i64,
}

impl OccupationField {
    pub fn new(start: i64, occupied: Vec<bool>, anchor_height: i64) -> Self {
        Self { start, occupied, anchor_height }
    }

    /// Step profile on `[-half, half - 1]`: occupied on the negative side.
    pub fn step(half: i64) -> Self {
        Self::new(-half, (-half..half).map(|x| x < 0).collect(), half)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn occupied(&self, x: i64) -> bool {
        self.occupied[(x - self.start) as usize]
    }

    pub fn anchor_height(&self) -> i64 {
        self.anchor_height
    }

    pub fn particle_count(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }

    pub fn particle_positions(&self) -> Vec<i64> {
        (0..self.occupied.len())
            .filter(|&k| self.occupied[k])
            .map(|k| self.start + k as i64)
            .collect()
    }
}

/// `xi(x) = (eta(x) - eta(x+1) + 1) / 2`.
pub fn sep_occupation_from_height(eta: &HeightFunction) -> OccupationField {
    let occ = eta
        .values
        .windows(2)
        .map(|w| {
            debug_assert!((w[0] - w[1]).abs() == 1);
            w[0] > w[1]
        })
        .collect();
    OccupationField::new(eta.start, occ, eta.values[0])
}

/// Inverse of [`sep_occupation_from_height`], anchored at the carried
/// boundary height.
pub fn height_from_occupation(occ: &OccupationField) -> HeightFunction {
    let mut values = Vec::with_capacity(occ.occupied.len() + 1);
    let mut h = occ.anchor_height;
    values.push(h);
    for &p in &occ.occupied {
        h += if p { -1 } else { 1 };
        values.push(h);
    }
    HeightFunction::new(occ.start, values).expect("occupation always produces a path")
}

/// Reads the monotone interface of a spin configuration whose minus set is
/// increasing (minus up/right), over the diagonal columns `[-span, span]`.
/// The height at column `a` is `t_a - 1` where `t_a` is the lowest minus
/// cell on that diagonal. Fails with `NotAPath` when the interface leaves
/// the stored diamond on some requested column.
pub fn height_from_config(
    config: &SpinConfiguration,
    span: i64,
) -> Result<HeightFunction, ParticleError> {
    if !config.is_minus_increasing() {
        return Err(ParticleError::NotMonotone);
    }
    let l = config.half_width();
    let m = l + crate::lattice::MARGIN;
    let mut values = Vec::with_capacity((2 * span + 1) as usize);
    for a in -span..=span {
        // lowest minus cell on the diagonal {i - j = a} within the store
        let b_lo = a.abs() - 2 * m + 1;
        let b_hi = 2 * m - 1 - a.abs();
        let mut t_a = None;
        let mut b = if (b_lo + a) % 2 != 0 { b_lo } else { b_lo + 1 };
        while b <= b_hi {
            let i = (a + b - 1) / 2;
            let j = (b - a - 1) / 2;
            debug_assert!(i >= -m && i < m && j >= -m && j < m);
            if config.spin(Site::new(i, j)) == -1 {
                t_a = Some(b);
                break;
            }
            b += 2;
        }
        match t_a {
            Some(b) => values.push(b - 1),
            None => return Err(ParticleError::NotAPath),
        }
    }
    HeightFunction::new(-span, values)
}

/// Corner site of a flippable column: the tie cell sits at f-frame
/// coordinates `(x, eta(x) + 1)` for a local minimum and `(x, eta(x) - 1)`
/// for a local maximum.
fn corner_site(x: i64, eta_x: i64, local_min: bool) -> Site {
    let b = if local_min { eta_x + 1 } else { eta_x - 1 };
    Site::new((x + b - 1) / 2, (b - x - 1) / 2)
}

/// How the simulator keys its clock streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClockKeying {
    /// One stream per interface column (the particle-system description).
    Columns,
    /// Streams keyed by the two-dimensional corner site currently carrying
    /// the flip, reproducing the lattice graphical construction on the
    /// window `[-half_width, half_width]^2` exactly: flips whose corner
    /// cell falls outside the window are cancelled, like ghost sites whose
    /// clocks never ring.
    CornerSites { half_width: i64 },
}

/// Sampled exclusion trajectory; height snapshots carry the full interface.
#[derive(Clone, Debug)]
pub struct ExclusionTrajectory {
    pub sampled_times: Vec<f64>,
    pub occupations: Vec<OccupationField>,
    pub heights: Vec<HeightFunction>,
    pub jump_count: u64,
}

fn check_samples(sample_times: &[f64], horizon: f64) -> Result<(), ParticleError> {
    let mut prev = 0.0;
    for &t in sample_times {
        if t.is_nan() || t < 0.0 || t < prev || t > horizon {
            return Err(ParticleError::BadSampleTimes);
        }
        prev = t;
    }
    Ok(())
}

/// Simple exclusion on a closed segment: right jumps at rate
/// `e^h / (2 cosh h)`, left jumps at the complementary rate, suppressed onto
/// occupied sites; the segment ends block jumps. At `h = inf` the right rate
/// is 1 and the left rate 0.
pub fn simulate_exclusion(
    occ: &OccupationField,
    params: &FieldParameter,
    clocks: &ClockField,
    horizon: f64,
    sample_times: &[f64],
    keying: ClockKeying,
) -> Result<ExclusionTrajectory, ParticleError> {
    check_samples(sample_times, horizon)?;
    let eta0 = height_from_occupation(occ);
    let start = eta0.start();
    let end = eta0.end();
    let mut eta = eta0.values().to_vec();
    let h = params.h();

    let mut out = ExclusionTrajectory {
        sampled_times: sample_times.to_vec(),
        occupations: Vec::new(),
        heights: Vec::new(),
        jump_count: 0,
    };
    let mut next_sample = 0usize;

    let snapshot = |eta: &[i64]| -> (OccupationField, HeightFunction) {
        let hf = HeightFunction::new(start, eta.to_vec()).unwrap();
        (sep_occupation_from_height(&hf), hf)
    };

    match keying {
        ClockKeying::Columns => {
            // every interior column rings at rate one
            let mut heap: BinaryHeap<ColumnEvent> = BinaryHeap::new();
            for x in (start + 1)..end {
                let key = (x, LANE_EXCLUSION);
                let t = clocks.ring_increment(key, 0);
                if t <= horizon {
                    heap.push(ColumnEvent { time: t, col: x, n: 0 });
                }
            }
            while let Some(ev) = heap.pop() {
                while next_sample < sample_times.len() && sample_times[next_sample] < ev.time {
                    let (o, hf) = snapshot(&eta);
                    out.occupations.push(o);
                    out.heights.push(hf);
                    next_sample += 1;
                }
                let k = (ev.col - start) as usize;
                if eta[k - 1] == eta[k + 1] {
                    let local_min = eta[k] < eta[k - 1];
                    let mark = clocks.tie_mark((ev.col, LANE_EXCLUSION), ev.n, h);
                    if local_min && mark == 1 {
                        eta[k] += 2;
                        out.jump_count += 1;
                    } else if !local_min && mark == -1 {
                        eta[k] -= 2;
                        out.jump_count += 1;
                    }
                }
                let next = ev.time + clocks.ring_increment((ev.col, LANE_EXCLUSION), ev.n + 1);
                if next <= horizon {
                    heap.push(ColumnEvent { time: next, col: ev.col, n: ev.n + 1 });
                }
            }
        }
        ClockKeying::CornerSites { half_width } => {
            // candidates keyed by the corner site currently at each column;
            // lazy invalidation via per-column epochs
            let ncols = (end - start + 1) as usize;
            let mut epoch = vec![0u64; ncols];
            let mut heap: BinaryHeap<CornerEvent> = BinaryHeap::new();
            let mut t_now;

            #[allow(clippy::too_many_arguments)]
            fn push_candidate(
                heap: &mut BinaryHeap<CornerEvent>,
                eta: &[i64],
                epoch: &[u64],
                clocks: &ClockField,
                start: i64,
                end: i64,
                hw: i64,
                x: i64,
                t_now: f64,
            ) {
                if x <= start || x >= end {
                    return;
                }
                let k = (x - start) as usize;
                if eta[k - 1] != eta[k + 1] {
                    return;
                }
                let local_min = eta[k] < eta[k - 1];
                let site = corner_site(x, eta[k], local_min);
                if site.i < -hw || site.i >= hw || site.j < -hw || site.j >= hw {
                    return; // ghost corner: its clock never rings
                }
                let (n, t) = clocks.first_ring_after(site.key(), t_now);
                heap.push(CornerEvent { time: t, col: x, site, n, epoch: epoch[k], local_min });
            }

            for x in (start + 1)..end {
                push_candidate(&mut heap, &eta, &epoch, clocks, start, end, half_width, x, 0.0);
            }
            while let Some(ev) = heap.pop() {
                if ev.time > horizon {
                    break;
                }
                let k = (ev.col - start) as usize;
                if ev.epoch != epoch[k] {
                    continue; // stale candidate
                }
                while next_sample < sample_times.len() && sample_times[next_sample] < ev.time {
                    let (o, hf) = snapshot(&eta);
                    out.occupations.push(o);
                    out.heights.push(hf);
                    next_sample += 1;
                }
                t_now = ev.time;
                let mark = clocks.tie_mark(ev.site.key(), ev.n, h);
                let flipped = if ev.local_min && mark == 1 {
                    eta[k] += 2;
                    true
                } else if !ev.local_min && mark == -1 {
                    eta[k] -= 2;
                    true
                } else {
                    false
                };
                if flipped {
                    out.jump_count += 1;
                    for dx in [-1i64, 0, 1] {
                        let x = ev.col + dx;
                        if x > start && x < end {
                            epoch[(x - start) as usize] += 1;
                            push_candidate(
                                &mut heap, &eta, &epoch, clocks, start, end, half_width, x,
                                t_now,
                            );
                        }
                    }
                } else {
                    // same corner waits for its next ring
                    let next = ev.time + clocks.ring_increment(ev.site.key(), ev.n + 1);
                    heap.push(CornerEvent { time: next, n: ev.n + 1, ..ev });
                }
            }
        }
    }

    while next_sample < sample_times.len() {
        let (o, hf) = snapshot(&eta);
        out.occupations.push(o);
        out.heights.push(hf);
        next_sample += 1;
    }
    Ok(out)
}

#[derive(PartialEq)]
struct ColumnEvent {
    time: f64,
    col: i64,
    n: u64,
}

impl Eq for ColumnEvent {}
impl Ord for ColumnEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.col.cmp(&self.col))
    }
}
impl PartialOrd for ColumnEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(PartialEq)]
struct CornerEvent {
    time: f64,
    col: i64,
    site: Site,
    n: u64,
    epoch: u64,
    local_min: bool,
}

impl Eq for CornerEvent {}
impl Ord for CornerEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.site.cmp(&self.site))
    }
}
impl PartialOrd for CornerEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// Pole interfaces and the zero-range process
// ---------------------------------------------------------------------------

/// Piecewise-constant interface of the pole dynamics: integer heights on
/// unit cells `[left + k, left + k + 1)`. Vertical runs are implicit in
/// multi-unit jumps between neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleInterface {
    left: i64,
    values: Vec<i64>,
}

impl PoleInterface {
    pub fn new(left: i64, values: Vec<i64>) -> Self {
        assert!(values.len() >= 2);
        Self { left, values }
    }

    pub fn left(&self) -> i64 {
        self.left
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Zero-range state on the dual integer grid: `signed[k]` holds the signed
/// particle pile at `site = first_site + k`; positive piles are species A,
/// negative piles species B, so a site never mixes species by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroRangeState {
    first_site: i64,
    signed: Vec<i64>,
}

impl ZeroRangeState {
    pub fn new(first_site: i64, signed: Vec<i64>) -> Self {
        Self { first_site, signed }
    }

    pub fn first_site(&self) -> i64 {
        self.first_site
    }

    pub fn signed(&self) -> &[i64] {
        &self.signed
    }

    pub fn count(&self, site: i64) -> u64 {
        self.signed[(site - self.first_site) as usize].unsigned_abs()
    }

    /// `Some(+1)` for A, `Some(-1)` for B, `None` for empty piles.
    pub fn species(&self, site: i64) -> Option<i8> {
        match self.signed[(site - self.first_site) as usize].cmp(&0) {
            Ordering::Greater => Some(1),
            Ordering::Less => Some(-1),
            Ordering::Equal => None,
        }
    }

    /// Conserved signed mass: A count minus B count.
    pub fn signed_mass(&self) -> i64 {
        self.signed.iter().sum()
    }

    pub fn total_particles(&self) -> u64 {
        self.signed.iter().map(|v| v.unsigned_abs()).sum()
    }

    /// Integrates the gradients back into a pole interface anchored at
    /// `base` on the left.
    pub fn integrate(&self, left: i64, base: i64) -> PoleInterface {
        let mut values = Vec::with_capacity(self.signed.len() + 1);
        let mut acc = base;
        values.push(acc);
        for &g in &self.signed {
            acc += g;
            values.push(acc);
        }
        PoleInterface::new(left, values)
    }
}

/// Gradients of the pole interface, stored on the dual integer grid between
/// cells: the pile at integer `x` is the jump of the interface across `x`.
pub fn zrp_from_height(eta: &PoleInterface) -> ZeroRangeState {
    let signed = eta.values.windows(2).map(|w| w[1] - w[0]).collect();
    ZeroRangeState::new(eta.left + 1, signed)
}

/// Reading of the per-site jump law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZrpRateMode {
    /// Each of the `k` particles jumps each way at rate `1/(2k)`: total
    /// site rate 1, matching the corner-flip rate of the interface.
    #[default]
    UnitSiteRate,
    /// The alternative reading: the site as a whole fires each way at rate
    /// `1/(2k)`; deep piles slow down. No scaling claims attach to it.
    PileSuppressed,
}

#[derive(Clone, Debug)]
pub struct ZrpTrajectory {
    pub sampled_times: Vec<f64>,
    pub snapshots: Vec<ZeroRangeState>,
    pub event_count: u64,
    pub annihilations: u64,
}

/// Zero-range dynamics with A/B annihilation on a closed segment. One
/// particle moves per event; an arriving particle cancels against an
/// opposite pile automatically through the signed representation. Jumps off
/// the segment ends are blocked.
pub fn simulate_zero_range(
    z: &ZeroRangeState,
    clocks: &ClockField,
    horizon: f64,
    sample_times: &[f64],
    mode: ZrpRateMode,
) -> Result<ZrpTrajectory, ParticleError> {
    check_samples(sample_times, horizon)?;
    let n = z.signed.len();
    let mut signed = z.signed.clone();
    let rate_of = |v: i64| -> f64 {
        let k = v.unsigned_abs();
        if k == 0 {
            0.0
        } else {
            match mode {
                ZrpRateMode::UnitSiteRate => 1.0,
                ZrpRateMode::PileSuppressed => 1.0 / k as f64,
            }
        }
    };
    let mut tree = Fenwick::new(n);
    for (k, &v) in signed.iter().enumerate() {
        tree.set(k, rate_of(v));
    }
    let mass0 = z.signed_mass();

    let mut out = ZrpTrajectory {
        sampled_times: sample_times.to_vec(),
        snapshots: Vec::new(),
        event_count: 0,
        annihilations: 0,
    };
    let mut next_sample = 0usize;
    let mut t = 0.0f64;
    let mut draw = 0u64;

    loop {
        let total = tree.total();
        if total <= 0.0 {
            break;
        }
        let uniform = |d: &mut u64| {
            let u = clocks.uniform((*d as i64, LANE_ZERO_RANGE), *d);
            *d += 1;
            u
        };
        let dt = -(1.0 - uniform(&mut draw)).ln() / total;
        let t_next = t + dt;
        if t_next > horizon {
            break;
        }
        while next_sample < sample_times.len() && sample_times[next_sample] < t_next {
            out.snapshots.push(ZeroRangeState::new(z.first_site, signed.clone()));
            next_sample += 1;
        }
        t = t_next;
        let k = tree.find(uniform(&mut draw) * total).min(n - 1);
        let dir: i64 = if uniform(&mut draw) < 0.5 { -1 } else { 1 };
        let target = k as i64 + dir;
        out.event_count += 1;
        if target < 0 || target >= n as i64 {
            continue; // blocked at the closed end
        }
        let sign = signed[k].signum();
        debug_assert!(sign != 0);
        let before = signed[target as usize];
        signed[k] -= sign;
        signed[target as usize] += sign;
        if before.signum() == -sign {
            out.annihilations += 1;
        }
        tree.set(k, rate_of(signed[k]));
        tree.set(target as usize, rate_of(signed[target as usize]));
        debug_assert_eq!(signed.iter().sum::<i64>(), mass0);
    }

    while next_sample < sample_times.len() {
        out.snapshots.push(ZeroRangeState::new(z.first_site, signed.clone()));
        next_sample += 1;
    }
    Ok(out)
}

/// Expected instantaneous drift of the interface height at column `x`:
/// `+2p` at a local minimum, `-2(1-p)` at a local maximum, zero elsewhere,
/// with `p = e^h/(2 cosh h)`. At `h = 0` this is the discrete Laplacian
/// identity `drift = (eta(x+1) + eta(x-1) - 2 eta(x)) / 2`.
pub fn expected_height_drift(eta: &HeightFunction, x: i64, h: f64) -> f64 {
    if x <= eta.start() || x >= eta.end() {
        return 0.0;
    }
    let (m, c, p) = (eta.value(x - 1), eta.value(x), eta.value(x + 1));
    if m != p {
        return 0.0;
    }
    let p_plus = crate::clock::tie_plus_probability(h);
    if c < m {
        2.0 * p_plus
    } else {
        -2.0 * (1.0 - p_plus)
    }
}

struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n + 1] }
    }

    fn len(&self) -> usize {
        self.tree.len() - 1
    }

    fn add(&mut self, mut i: usize, delta: f64) {
        i += 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> f64 {
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    fn set(&mut self, i: usize, value: f64) {
        let cur = self.prefix(i + 1) - self.prefix(i);
        self.add(i, value - cur);
    }

    fn total(&self) -> f64 {
        self.prefix(self.len())
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, target: f64) -> usize {
        let mut pos = 0usize;
        let mut rem = target;
        let mut mask = self.tree.len().next_power_of_two() >> 1;
        while mask > 0 {
            let next = pos + mask;
            if next < self.tree.len() && self.tree[next] <= rem {
                rem -= self.tree[next];
                pos = next;
            }
            mask >>= 1;
        }
        pos
    }
}

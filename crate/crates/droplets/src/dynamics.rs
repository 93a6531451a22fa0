//! The continuous-time heat-bath Markov chain at zero (and finite)
//! temperature: an exact graphical-construction engine driven by
//! counter-based clock streams, a rejection-free engine for large lattices,
//! monotone coupled runs, and extinction-time measurement.

use crate::clock::{tie_plus_probability, ClockField};
use crate::lattice::{FieldParameter, Site, SpinConfiguration};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("sample times must be sorted, nonnegative, and within the horizon")]
    BadSampleTimes,
    #[error("the rejection-free engine requires zero temperature (beta = inf)")]
    FiniteBetaUnsupported,
    #[error("coupled runs require configurations with identical windows")]
    WindowMismatch,
}

/// Heat-bath single-site update.
///
/// At `beta = inf` a strict neighbor majority wins and a 2-2 tie returns the
/// tie mark (which is always `+1` at `h = inf`). At finite `beta` the spin
/// resamples to `+1` with probability `e^z / (2 cosh z)`, `z = beta * S + h`.
pub fn update_rule(
    neighbor_spins: [i8; 4],
    params: &FieldParameter,
    tie_mark: i8,
    uniform: f64,
) -> i8 {
    let s: i32 = neighbor_spins.iter().map(|&v| v as i32).sum();
    if params.is_zero_temperature() {
        match s.cmp(&0) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => tie_mark,
        }
    } else {
        let z = params.beta() * s as f64 + params.h();
        let p_plus = if z.is_infinite() {
            if z > 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            1.0 / (1.0 + (-2.0 * z).exp())
        };
        if uniform < p_plus {
            1
        } else {
            -1
        }
    }
}

/// Report of flips to minus observed within two cells of the window edge.
/// A nonzero count means the finite window is constraining the droplet and
/// results near the boundary should not be trusted as infinite-volume.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OverflowReport {
    pub count: u64,
    pub first_time: Option<f64>,
}

impl OverflowReport {
    fn record(&mut self, t: f64) {
        if self.count == 0 {
            self.first_time = Some(t);
        }
        self.count += 1;
    }
}

/// Sampled trajectory of a single run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub sampled_times: Vec<f64>,
    pub snapshots: Vec<SpinConfiguration>,
    /// Effective spin flips.
    pub event_count: u64,
    /// Clock rings processed (graphical engine only; equals event_count for
    /// the rejection-free engine).
    pub ring_count: u64,
    /// First time the window droplet was empty, if observed.
    pub extinction_time: Option<f64>,
    pub overflow: OverflowReport,
    /// Flips from plus to minus; stays zero for shrinking droplets at
    /// `h = inf`.
    pub plus_to_minus_flips: u64,
}

fn check_sample_times(sample_times: &[f64], horizon: f64) -> Result<(), DynamicsError> {
    let mut prev = 0.0;
    for &t in sample_times {
        if t.is_nan() || t < 0.0 || t < prev || t > horizon {
            return Err(DynamicsError::BadSampleTimes);
        }
        prev = t;
    }
    Ok(())
}

struct RunState {
    config: SpinConfiguration,
    half_width: i64,
    time: f64,
    event_count: u64,
    ring_count: u64,
    extinction_time: Option<f64>,
    overflow: OverflowReport,
    plus_to_minus: u64,
    sample_times: Vec<f64>,
    next_sample: usize,
    snapshots: Vec<SpinConfiguration>,
    absorbing_when_empty: bool,
}

impl RunState {
    fn new(config: &SpinConfiguration, params: &FieldParameter, sample_times: &[f64]) -> Self {
        let absorbing =
            params.is_zero_temperature() && config.ghosts_all_plus();
        Self {
            config: config.clone(),
            half_width: config.half_width(),
            time: 0.0,
            event_count: 0,
            ring_count: 0,
            extinction_time: if config.minus_count() == 0 { Some(0.0) } else { None },
            overflow: OverflowReport::default(),
            plus_to_minus: 0,
            sample_times: sample_times.to_vec(),
            next_sample: 0,
            snapshots: Vec::with_capacity(sample_times.len()),
            absorbing_when_empty: absorbing,
        }
    }

    /// Emits snapshots for sample times strictly before `t`.
    fn emit_until(&mut self, t: f64) {
        while self.next_sample < self.sample_times.len() && self.sample_times[self.next_sample] < t
        {
            self.snapshots.push(self.config.clone());
            self.next_sample += 1;
        }
    }

    fn emit_rest(&mut self) {
        while self.next_sample < self.sample_times.len() {
            self.snapshots.push(self.config.clone());
            self.next_sample += 1;
        }
    }

    fn apply_flip(&mut self, s: Site, new_spin: i8, t: f64) {
        self.config.set_spin(s, new_spin);
        self.event_count += 1;
        if new_spin == -1 {
            self.plus_to_minus += 1;
            let edge_dist = (s.i + self.half_width)
                .min(self.half_width - 1 - s.i)
                .min(s.j + self.half_width)
                .min(self.half_width - 1 - s.j);
            if edge_dist <= 1 {
                self.overflow.record(t);
            }
        }
        if self.config.minus_count() == 0 && self.extinction_time.is_none() {
            self.extinction_time = Some(t);
        }
    }

    /// True when nothing can ever change again.
    fn absorbed(&self) -> bool {
        self.absorbing_when_empty
            && self.config.minus_count() == 0
            && self.extinction_time.is_some()
    }

    fn into_trajectory(mut self) -> Trajectory {
        self.emit_rest();
        Trajectory {
            sampled_times: self.sample_times,
            snapshots: self.snapshots,
            event_count: self.event_count,
            ring_count: self.ring_count,
            extinction_time: self.extinction_time,
            overflow: self.overflow,
            plus_to_minus_flips: self.plus_to_minus,
        }
    }
}

// ---------------------------------------------------------------------------
// Graphical engine
// ---------------------------------------------------------------------------

#[derive(PartialEq)]
struct RingEvent {
    time: f64,
    site: Site,
    n: u64,
}

impl Eq for RingEvent {}

impl Ord for RingEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (time, site) with lexicographic site tie-break
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.site.cmp(&self.site))
    }
}

impl PartialOrd for RingEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Executes every clock ring in global time order, resolving each with the
/// site's deterministic tie-mark stream. The output is a pure function of
/// `(config, clocks, params)`: repeated runs are bitwise identical, and runs
/// sharing a `ClockField` are exactly coupled.
pub fn run_graphical(
    config: &SpinConfiguration,
    clocks: &ClockField,
    params: &FieldParameter,
    horizon: f64,
    sample_times: &[f64],
) -> Result<Trajectory, DynamicsError> {
    check_sample_times(sample_times, horizon)?;
    let mut st = RunState::new(config, params, sample_times);
    let mut heap: BinaryHeap<RingEvent> = BinaryHeap::new();
    for s in config.window_sites() {
        if config.is_frozen(s) {
            continue;
        }
        let t = clocks.ring_increment(s.key(), 0);
        if t <= horizon {
            heap.push(RingEvent { time: t, site: s, n: 0 });
        }
    }
    while let Some(ev) = heap.pop() {
        if ev.time > horizon {
            break;
        }
        st.emit_until(ev.time);
        st.ring_count += 1;
        let s = ev.site;
        let old = st.config.spin(s);
        let neighbors = [
            st.config.spin(Site::new(s.i + 1, s.j)),
            st.config.spin(Site::new(s.i - 1, s.j)),
            st.config.spin(Site::new(s.i, s.j + 1)),
            st.config.spin(Site::new(s.i, s.j - 1)),
        ];
        let mark = clocks.tie_mark(s.key(), ev.n, params.h());
        let u = clocks.uniform(s.key(), ev.n);
        let new = update_rule(neighbors, params, mark, u);
        st.time = ev.time;
        if new != old {
            st.apply_flip(s, new, ev.time);
            if st.absorbed() {
                break;
            }
        }
        let next = ev.time + clocks.ring_increment(s.key(), ev.n + 1);
        if next <= horizon {
            heap.push(RingEvent { time: next, site: s, n: ev.n + 1 });
        }
    }
    Ok(st.into_trajectory())
}

/// Couples several initial conditions through one shared clock field. The
/// per-site streams are counter-based, so running each configuration
/// independently reproduces exactly the coupling of the shared graphical
/// construction; initial orderings are preserved pathwise.
pub fn coupled_run(
    configs: &[SpinConfiguration],
    clocks: &ClockField,
    params: &FieldParameter,
    horizon: f64,
    sample_times: &[f64],
) -> Result<Vec<Trajectory>, DynamicsError> {
    if let Some(first) = configs.first() {
        if configs.iter().any(|c| c.half_width() != first.half_width()) {
            return Err(DynamicsError::WindowMismatch);
        }
    }
    configs
        .iter()
        .map(|c| run_graphical(c, clocks, params, horizon, sample_times))
        .collect()
}

// ---------------------------------------------------------------------------
// Rejection-free engine
// ---------------------------------------------------------------------------

const G_MINORITY: usize = 0;
const G_TIE_MINUS: usize = 1;
const G_TIE_PLUS: usize = 2;
const NO_GROUP: u8 = u8::MAX;

struct ActiveSets {
    members: [Vec<u32>; 3],
    slot: Vec<u32>,
    group_of: Vec<u8>,
}

impl ActiveSets {
    fn new(n: usize) -> Self {
        Self {
            members: [Vec::new(), Vec::new(), Vec::new()],
            slot: vec![u32::MAX; n],
            group_of: vec![NO_GROUP; n],
        }
    }

    fn set(&mut self, idx: u32, group: Option<usize>) {
        let cur = self.group_of[idx as usize];
        let target = group.map(|g| g as u8).unwrap_or(NO_GROUP);
        if cur == target {
            return;
        }
        if cur != NO_GROUP {
            let g = cur as usize;
            let slot = self.slot[idx as usize] as usize;
            let last = *self.members[g].last().unwrap();
            self.members[g].swap_remove(slot);
            if last != idx {
                self.slot[last as usize] = slot as u32;
            }
            self.group_of[idx as usize] = NO_GROUP;
        }
        if let Some(g) = group {
            self.slot[idx as usize] = self.members[g].len() as u32;
            self.members[g].push(idx);
            self.group_of[idx as usize] = g as u8;
        }
    }
}

/// Rejection-free engine, statistically identical to [`run_graphical`] at
/// zero temperature. The active set holds the sites whose next ring could
/// change their spin: strict-minority spins always, minus tie sites with
/// rate `e^h/(2 cosh h)`, and plus tie sites with the complementary rate
/// (zero at `h = inf`, so they drop out entirely).
pub fn run_kmc(
    config: &SpinConfiguration,
    params: &FieldParameter,
    horizon: f64,
    seed: u64,
    sample_times: &[f64],
) -> Result<Trajectory, DynamicsError> {
    if !params.is_zero_temperature() {
        return Err(DynamicsError::FiniteBetaUnsupported);
    }
    check_sample_times(sample_times, horizon)?;
    let mut st = RunState::new(config, params, sample_times);
    let l = config.half_width();
    let span = 2 * l;
    let n_window = (span * span) as usize;
    let p_plus = tie_plus_probability(params.h());
    let rates = [1.0, p_plus, 1.0 - p_plus];

    let to_idx = |s: Site| -> u32 { ((s.j + l) * span + (s.i + l)) as u32 };
    let to_site = |idx: u32| -> Site {
        let idx = idx as i64;
        Site::new(idx % span - l, idx / span - l)
    };

    let classify = |cfg: &SpinConfiguration, s: Site| -> Option<usize> {
        if cfg.is_frozen(s) {
            return None;
        }
        let spin = cfg.spin(s);
        let sum = cfg.neighbor_sum(s);
        match (spin, sum.cmp(&0)) {
            (1, Ordering::Less) | (-1, Ordering::Greater) => Some(G_MINORITY),
            (-1, Ordering::Equal) => Some(G_TIE_MINUS),
            (1, Ordering::Equal) => {
                if rates[G_TIE_PLUS] > 0.0 {
                    Some(G_TIE_PLUS)
                } else {
                    None
                }
            }
            _ => None,
        }
    };

    let mut active = ActiveSets::new(n_window);
    for s in st.config.window_sites() {
        if let Some(g) = classify(&st.config, s) {
            active.set(to_idx(s), Some(g));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let weights = [
            active.members[0].len() as f64 * rates[0],
            active.members[1].len() as f64 * rates[1],
            active.members[2].len() as f64 * rates[2],
        ];
        let total = weights[0] + weights[1] + weights[2];
        if total <= 0.0 {
            // absorbing state; time effectively jumps to the horizon
            st.time = horizon;
            break;
        }
        let u: f64 = rng.gen();
        let dt = -(1.0 - u).ln() / total;
        let t_next = st.time + dt;
        if t_next > horizon {
            st.emit_until(horizon);
            st.time = horizon;
            break;
        }
        st.emit_until(t_next);
        // choose group proportionally, then a uniform member
        let mut pick = rng.gen::<f64>() * total;
        let mut g = 0;
        while g < 2 && pick >= weights[g] {
            pick -= weights[g];
            g += 1;
        }
        let members = &active.members[g];
        let site = to_site(members[rng.gen_range(0..members.len())]);
        let new_spin = -st.config.spin(site);
        st.time = t_next;
        st.apply_flip(site, new_spin, t_next);
        st.ring_count += 1;
        // reclassify the site and its neighbors
        for s in [
            site,
            Site::new(site.i + 1, site.j),
            Site::new(site.i - 1, site.j),
            Site::new(site.i, site.j + 1),
            Site::new(site.i, site.j - 1),
        ] {
            if st.config.in_window(s) {
                active.set(to_idx(s), classify(&st.config, s));
            }
        }
        if st.absorbed() {
            break;
        }
    }
    Ok(st.into_trajectory())
}

// ---------------------------------------------------------------------------
// Extinction
// ---------------------------------------------------------------------------

/// Result of an extinction-time measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtinctionOutcome {
    /// First time the window droplet was empty, in natural time units.
    Extinct(f64),
    /// The droplet outlived the horizon.
    Censored { horizon: f64 },
}

impl ExtinctionOutcome {
    pub fn time(&self) -> Option<f64> {
        match self {
            ExtinctionOutcome::Extinct(t) => Some(*t),
            ExtinctionOutcome::Censored { .. } => None,
        }
    }
}

/// First time the droplet is empty, measured with the rejection-free engine
/// (zero temperature only).
pub fn extinction_time(
    config: &SpinConfiguration,
    params: &FieldParameter,
    seed: u64,
    horizon: f64,
) -> Result<ExtinctionOutcome, DynamicsError> {
    let traj = run_kmc(config, params, horizon, seed, &[])?;
    Ok(match traj.extinction_time {
        Some(t) => ExtinctionOutcome::Extinct(t),
        None => ExtinctionOutcome::Censored { horizon },
    })
}

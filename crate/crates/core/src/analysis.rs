//! Post-processing of trajectories: ripple statistics, settle times, the
//! waving indicator and run-to-run comparison.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::integrate::{Channel, Trajectory};

/// Ratio is only reported when the uphill excursion exceeds this.
pub const RATIO_TOLERANCE: f64 = 1e-6;

/// Default start of the ripple window, past the pulse transient (s).
pub const DEFAULT_WINDOW_START: f64 = 2.0;

/// Excursion statistics of one channel over a time window, measured from
/// the window mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RippleStats {
    pub channel: Channel,
    pub window: (f64, f64),
    pub samples: usize,
    pub mean: f64,
    /// Largest excursion above the mean (≥ 0).
    pub uphill_amplitude: f64,
    /// Largest excursion below the mean (≥ 0).
    pub downhill_amplitude: f64,
    /// downhill / uphill, when uphill exceeds [`RATIO_TOLERANCE`].
    pub ratio: Option<f64>,
    /// Sign changes of the mean-removed signal.
    pub mean_crossings: usize,
    pub diagnostic: Option<String>,
}

impl RippleStats {
    pub fn peak_to_peak(&self) -> f64 {
        self.uphill_amplitude + self.downhill_amplitude
    }
}

fn window_indices(traj: &Trajectory, t0: f64, t1: f64) -> Result<std::ops::Range<usize>, AnalysisError> {
    let empty = AnalysisError::EmptyWindow { t0, t1 };
    if !(t0 <= t1) {
        return Err(empty);
    }
    let lo = traj.times.partition_point(|&t| t < t0);
    let hi = traj.times.partition_point(|&t| t <= t1);
    if lo >= hi {
        return Err(empty);
    }
    Ok(lo..hi)
}

pub fn ripple_stats(traj: &Trajectory, channel: Channel, window: (f64, f64)) -> Result<RippleStats, AnalysisError> {
    let (t0, t1) = window;
    let range = window_indices(traj, t0, t1)?;
    let xs: Vec<f64> = range.clone().map(|i| traj.value(channel, i)).collect();
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;

    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let uphill = (max - mean).max(0.0);
    let downhill = (mean - min).max(0.0);
    let ratio = (uphill > RATIO_TOLERANCE).then(|| downhill / uphill);

    let mut crossings = 0;
    let mut last_sign = 0.0;
    for x in &xs {
        let d = x - mean;
        if d == 0.0 {
            continue;
        }
        let s = d.signum();
        if last_sign != 0.0 && s != last_sign {
            crossings += 1;
        }
        last_sign = s;
    }

    let mut notes = Vec::new();
    let first = traj.times[0];
    let last = traj.times[traj.len() - 1];
    if t0 < first || t1 > last {
        notes.push(format!("window [{t0}, {t1}] s extends past the trajectory [{first}, {last}] s"));
    }
    if crossings < 4 && uphill > RATIO_TOLERANCE {
        notes.push(format!("window covers fewer than 2 ripple periods ({crossings} mean crossings)"));
    }
    let diagnostic = (!notes.is_empty()).then(|| notes.join("; "));

    Ok(RippleStats {
        channel,
        window: (traj.times[range.start], traj.times[range.end - 1]),
        samples: n,
        mean,
        uphill_amplitude: uphill,
        downhill_amplitude: downhill,
        ratio,
        mean_crossings: crossings,
        diagnostic,
    })
}

/// Earliest sample time after which `|channel| < threshold` holds through
/// the end of the trajectory. `None` if the last sample is still outside.
pub fn settle_time(traj: &Trajectory, channel: Channel, threshold: f64) -> Option<f64> {
    let n = traj.len();
    let last_outside = (0..n).rev().find(|&i| !(traj.value(channel, i).abs() < threshold));
    match last_outside {
        None => traj.times.first().copied(),
        Some(i) if i + 1 < n => Some(traj.times[i + 1]),
        Some(_) => None,
    }
}

/// Minimum mean crossings for the waving indicator (two full swings).
pub const WAVING_MIN_CROSSINGS: usize = 4;
/// Peak-to-peak sphere-velocity swing relative to its mean above which the
/// motion counts as waving.
pub const WAVING_EXCURSION_RATIO: f64 = 1.0;

/// Whether the sphere velocity swings back and forth around its running
/// mean by at least the size of the mean itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavingReport {
    pub mean: f64,
    pub peak_to_peak: f64,
    pub mean_crossings: usize,
    /// peak_to_peak / |mean|; infinite when the mean is zero.
    pub excursion_ratio: f64,
    pub waving: bool,
}

pub fn waving_flag(traj: &Trajectory, window: (f64, f64)) -> Result<WavingReport, AnalysisError> {
    let stats = ripple_stats(traj, Channel::SphereVelocity, window)?;
    let p2p = stats.peak_to_peak();
    let excursion_ratio = if stats.mean == 0.0 { f64::INFINITY } else { p2p / stats.mean.abs() };
    Ok(WavingReport {
        mean: stats.mean,
        peak_to_peak: p2p,
        mean_crossings: stats.mean_crossings,
        excursion_ratio,
        waving: stats.mean_crossings >= WAVING_MIN_CROSSINGS && p2p > 0.0 && excursion_ratio >= WAVING_EXCURSION_RATIO,
    })
}

/// RMS state difference below which two runs are reported as agreeing.
pub const AGREEMENT_RMS: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDelta {
    pub channel: Channel,
    pub rms: f64,
    pub final_a: f64,
    pub final_b: f64,
}

impl ChannelDelta {
    pub fn final_delta(&self) -> f64 {
        self.final_b - self.final_a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Overlapping time range both runs were compared on.
    pub overlap: (f64, f64),
    pub samples: usize,
    pub channels: Vec<ChannelDelta>,
    /// RMS over θ, θ̇, γ, γ̇ together.
    pub state_rms: f64,
    /// Net sphere rotation |θ(end) − θ(start)| of each run (rad).
    pub displacement_a: f64,
    pub displacement_b: f64,
    pub verdicts: Vec<String>,
}

impl ComparisonReport {
    pub fn channel(&self, channel: Channel) -> Option<&ChannelDelta> {
        self.channels.iter().find(|c| c.channel == channel)
    }

    pub fn displacement_delta(&self) -> f64 {
        self.displacement_b - self.displacement_a
    }
}

// Linear interpolation of a channel on a sorted time grid. `t` must lie in
// the grid's span.
fn interp(traj: &Trajectory, channel: Channel, t: f64) -> f64 {
    let times = &traj.times;
    let j = times.partition_point(|&s| s < t);
    if j < times.len() && times[j] == t {
        return traj.value(channel, j);
    }
    if j == 0 {
        return traj.value(channel, 0);
    }
    if j >= times.len() {
        return traj.value(channel, times.len() - 1);
    }
    let (t0, t1) = (times[j - 1], times[j]);
    let w = (t - t0) / (t1 - t0);
    let (x0, x1) = (traj.value(channel, j - 1), traj.value(channel, j));
    x0 + w * (x1 - x0)
}

// Sample times of both runs inside the overlap, merged. Times closer than a
// rounding error are treated as one so the grid is the same either way
// round.
fn union_grid(a: &Trajectory, b: &Trajectory, lo: f64, hi: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = a.times.iter().chain(&b.times).copied().filter(|&t| t >= lo && t <= hi).collect();
    grid.sort_by(f64::total_cmp);
    let eps = 1e-12 * hi.abs().max(1.0);
    grid.dedup_by(|later, earlier| *later - *earlier <= eps);
    grid
}

fn net_displacement(traj: &Trajectory) -> f64 {
    match (traj.states.first(), traj.states.last()) {
        (Some(s0), Some(s1)) => (s1.theta - s0.theta).abs(),
        _ => 0.0,
    }
}

/// Compares two runs on the union of their sample times within the
/// overlapping range, interpolating each linearly.
pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<ComparisonReport, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::NoOverlap);
    }
    let lo = a.times[0].max(b.times[0]);
    let hi = a.times[a.len() - 1].min(b.times[b.len() - 1]);
    if lo > hi {
        return Err(AnalysisError::NoOverlap);
    }
    let grid = union_grid(a, b, lo, hi);
    if grid.is_empty() {
        return Err(AnalysisError::NoOverlap);
    }

    let mut channels = Vec::with_capacity(Channel::ALL.len());
    let mut state_sq = 0.0;
    for ch in Channel::ALL {
        let sq: f64 = grid
            .iter()
            .map(|&t| {
                let d = interp(a, ch, t) - interp(b, ch, t);
                d * d
            })
            .sum();
        if matches!(ch, Channel::Theta | Channel::SphereVelocity | Channel::Gamma | Channel::CoreVelocity) {
            state_sq += sq;
        }
        channels.push(ChannelDelta {
            channel: ch,
            rms: (sq / grid.len() as f64).sqrt(),
            final_a: interp(a, ch, hi),
            final_b: interp(b, ch, hi),
        });
    }
    let state_rms = (state_sq / (4 * grid.len()) as f64).sqrt();
    let displacement_a = net_displacement(a);
    let displacement_b = net_displacement(b);

    let mut verdicts = Vec::new();
    if channels.iter().all(|c| c.rms == 0.0) {
        verdicts.push("identical on the overlap".to_string());
    } else if state_rms <= AGREEMENT_RMS {
        verdicts.push(format!("state RMS {state_rms:.3e} within {AGREEMENT_RMS:e}: runs agree"));
    } else {
        verdicts.push(format!("state RMS {state_rms:.3e} exceeds {AGREEMENT_RMS:e}: runs differ"));
    }
    if displacement_b < displacement_a {
        verdicts.push(format!("second run travels less ({displacement_b:.6} < {displacement_a:.6} rad)"));
    } else if displacement_b > displacement_a {
        verdicts.push(format!("second run travels further ({displacement_b:.6} > {displacement_a:.6} rad)"));
    }
    let (ta, tb) = (a.times[a.len() - 1], b.times[b.len() - 1]);
    if ta != tb {
        verdicts.push(format!("runs end at different times ({ta} s, {tb} s); compared up to {hi} s"));
    }

    Ok(ComparisonReport {
        overlap: (lo, hi),
        samples: grid.len(),
        channels,
        state_rms,
        displacement_a,
        displacement_b,
        verdicts,
    })
}

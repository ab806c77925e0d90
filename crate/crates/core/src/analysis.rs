//! Spectral features: transparency and absorption windows, peaks, crossings.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{build_zigzag, SystemParams};
use crate::linear_response::{interpolate, sweep, DetuningGrid, SpectrumSeries};
use crate::two_photon::TwoPhotonSpectrum;

/// Inter-cell couplings of the reference bandwidth table (units of Γ).
pub const TABLE1_J2: [f64; 7] = [1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0];
pub const TABLE1_J1: f64 = 0.2;
pub const TABLE1_M_CELLS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandThresholds {
    pub t_low: f64,
    pub t_high: f64,
}

impl Default for BandThresholds {
    fn default() -> Self {
        BandThresholds { t_low: 0.1, t_high: 0.5 }
    }
}

impl BandThresholds {
    pub fn new(t_low: f64, t_high: f64) -> Result<Self> {
        if !(t_low < t_high) || !t_low.is_finite() || !t_high.is_finite() {
            return Err(Error::InvalidThresholds { t_low, t_high });
        }
        Ok(BandThresholds { t_low, t_high })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Transparency,
    Absorption,
}

impl WindowKind {
    pub fn name(&self) -> &'static str {
        match self {
            WindowKind::Transparency => "transparency",
            WindowKind::Absorption => "absorption",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub kind: WindowKind,
    /// The region runs into the first or last grid point, so one edge is the grid's, not the spectrum's.
    pub touches_edge: bool,
}

impl Window {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandReport {
    pub thresholds: BandThresholds,
    /// All windows of both kinds, ordered by `lo`.
    pub windows: Vec<Window>,
    /// Transparency window containing `Δω = 0`.
    pub central: Option<Window>,
    /// Width of the central transparency window.
    pub w: Option<f64>,
    /// Extent of absorption on the positive side: from the first `T ≤ t_low` edge past
    /// the central window to the last.
    pub w_prime: Option<f64>,
    /// Widest positive-side transparency window that closes inside the grid.
    pub w1: Option<f64>,
    /// Gap between the central window and that side window.
    pub w2: Option<f64>,
    /// Same as `w`; named for multi-window spectra.
    pub w3: Option<f64>,
}

impl BandReport {
    pub fn transparency(&self) -> impl Iterator<Item = &Window> {
        self.windows.iter().filter(|w| w.kind == WindowKind::Transparency)
    }

    pub fn absorption(&self) -> impl Iterator<Item = &Window> {
        self.windows.iter().filter(|w| w.kind == WindowKind::Absorption)
    }

    /// Positive-side transparency window used for `w1`.
    pub fn side_window(&self) -> Option<Window> {
        let central = self.central?;
        self.transparency()
            .filter(|w| w.lo > central.hi && !w.touches_edge)
            .fold(None, |best: Option<Window>, w| match best {
                Some(b) if b.width() >= w.width() => best,
                _ => Some(*w),
            })
    }
}

/// Crossing of `level` between samples `i` and `i + 1`.
fn crossing(xs: &[f64], ys: &[f64], i: usize, level: f64) -> f64 {
    let (y0, y1) = (ys[i], ys[i + 1]);
    if y1 == y0 {
        return 0.5 * (xs[i] + xs[i + 1]);
    }
    xs[i] + (level - y0) / (y1 - y0) * (xs[i + 1] - xs[i])
}

/// Maximal runs where `inside(y)` holds, with interpolated edges.
fn regions(xs: &[f64], ys: &[f64], level: f64, kind: WindowKind) -> Vec<Window> {
    let inside = |y: f64| match kind {
        WindowKind::Transparency => y >= level,
        WindowKind::Absorption => y <= level,
    };
    let n = xs.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if !inside(ys[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && inside(ys[i + 1]) {
            i += 1;
        }
        let end = i;
        let lo = if start == 0 { xs[0] } else { crossing(xs, ys, start - 1, level) };
        let hi = if end == n - 1 { xs[n - 1] } else { crossing(xs, ys, end, level) };
        out.push(Window { lo, hi, kind, touches_edge: start == 0 || end == n - 1 });
        i += 1;
    }
    out
}

pub fn extract_bands(series: &SpectrumSeries, thresholds: BandThresholds) -> Result<BandReport> {
    let thresholds = BandThresholds::new(thresholds.t_low, thresholds.t_high)?;
    let xs = &series.detunings;
    let ys = &series.transmission;
    if xs.is_empty() {
        return Err(Error::InvalidGrid("empty spectrum".into()));
    }
    let transparent = regions(xs, ys, thresholds.t_high, WindowKind::Transparency);
    let absorbing = regions(xs, ys, thresholds.t_low, WindowKind::Absorption);
    let central = transparent.iter().copied().find(|w| w.contains(0.0));

    // Envelope of the absorbing side: ripples inside the band, however high,
    // do not split it.
    let w_prime = central.and_then(|c| {
        let mut side = absorbing.iter().filter(|a| a.lo >= c.hi);
        let first = side.next()?;
        let last_hi = side.map(|a| a.hi).fold(first.hi, f64::max);
        Some(last_hi - first.lo)
    });

    let mut windows: Vec<Window> = transparent.into_iter().chain(absorbing).collect();
    windows.sort_by(|a, b| a.lo.total_cmp(&b.lo));

    let mut report = BandReport {
        thresholds,
        windows,
        central,
        w: central.map(|c| c.width()),
        w_prime,
        w1: None,
        w2: None,
        w3: central.map(|c| c.width()),
    };
    if let (Some(c), Some(side)) = (central, report.side_window()) {
        report.w1 = Some(side.width());
        report.w2 = Some(side.lo - c.hi);
    }
    Ok(report)
}

/// `(max − min) / max` of the transmission over `[center − half_span, center + half_span]`,
/// sampling grid points and the interpolated end points.
pub fn transmission_variation(series: &SpectrumSeries, center: f64, half_span: f64) -> f64 {
    let (lo, hi) = (center - half_span, center + half_span);
    let xs = &series.detunings;
    let ys = &series.transmission;
    let mut vals: Vec<f64> = xs.iter().zip(ys).filter(|(x, _)| **x >= lo && **x <= hi).map(|(_, y)| *y).collect();
    vals.push(interpolate(xs, ys, lo));
    vals.push(interpolate(xs, ys, hi));
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= 0.0 {
        return 0.0;
    }
    (max - min) / max
}

/// Interpolated positions where `ys` changes sign. Exact zeros count once.
pub fn zero_crossings(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last_sign = 0i8;
    let mut last_idx = 0usize;
    for i in 0..ys.len() {
        let s = if ys[i] > 0.0 {
            1
        } else if ys[i] < 0.0 {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if last_sign != 0 && s != last_sign {
            if i == last_idx + 1 {
                out.push(crossing(xs, ys, last_idx, 0.0));
            } else {
                out.push(0.5 * (xs[last_idx + 1] + xs[i - 1]));
            }
        }
        last_sign = s;
        last_idx = i;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub nu: f64,
    pub intensity: f64,
    pub prominence: f64,
}

/// Strict local maxima whose topographic prominence is at least
/// `min_prominence` times the global maximum, highest first.
pub fn find_peaks_in(xs: &[f64], ys: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = ys.len();
    let global = ys.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    if n < 3 || global <= 0.0 {
        return out;
    }
    for i in 1..n - 1 {
        if !(ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) {
            continue;
        }
        let mut left_min = ys[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            if ys[j] > ys[i] {
                break;
            }
            left_min = left_min.min(ys[j]);
        }
        let mut right_min = ys[i];
        let mut k = i;
        while k + 1 < n {
            k += 1;
            if ys[k] > ys[i] {
                break;
            }
            right_min = right_min.min(ys[k]);
        }
        let prominence = ys[i] - left_min.max(right_min);
        if prominence >= min_prominence * global {
            out.push(Peak { nu: xs[i], intensity: ys[i], prominence });
        }
    }
    out.sort_by(|a, b| b.intensity.total_cmp(&a.intensity).then(a.nu.total_cmp(&b.nu)));
    out
}

pub fn find_peaks(spectrum: &TwoPhotonSpectrum, min_prominence: f64) -> Vec<Peak> {
    find_peaks_in(&spectrum.output_grid, &spectrum.intensity, min_prominence)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub j1: f64,
    pub j2: f64,
    pub w_prime: Option<f64>,
    pub w: Option<f64>,
}

/// Zigzag bandwidths for each `J₂`, with `J₁` and everything else taken from `base`.
pub fn table1_sweep(
    j2_values: &[f64],
    base: SystemParams,
    m_cells: usize,
    grid: &DetuningGrid,
    thresholds: BandThresholds,
) -> Result<Vec<Table1Row>> {
    j2_values
        .iter()
        .map(|&j2| {
            let params = SystemParams { j2, ..base };
            let spec = build_zigzag(m_cells, params)?;
            let report = extract_bands(&sweep(&spec, grid)?, thresholds)?;
            Ok(Table1Row { j1: params.j1, j2, w_prime: report.w_prime, w: report.w })
        })
        .collect()
}

//! One-photon response: resolvent, transmission amplitude, susceptibility and sweeps.
//!
//! With drive vector `u_j = √Γ_j e^{ik₀z_j}` on the `|e>` components,
//!
//! ```text
//!   t(Δω) = 1 − (i/2) Σ_ij √(Γ_iΓ_j) [G₀(Δω)]ᵉᵉ_ij e^{−ik₀(z_i − z_j)}
//!   χ(Δω) = Σ_ij √(Γ_iΓ_j) [G₀(Δω)]ᵉᵉ_ij e^{−ik₀(z_i − z_j)} / Σ_i Γ_i
//! ```
//!
//! so that `t = 1 − (i/2)(ΣΓ) χ`. For a single Λ atom this reduces to
//! `t = 1 − (iΓ_1D/2) / [Δω + i(Γ_1D + Γ_e)/2 − Ω_c²/(Δω − Δ_c)]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use nalgebra::{DMatrix, DVector};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::lattice::LatticeSpec;
use crate::linalg::{inverse_with_condition, ComplexSchur};
use crate::C64;

/// Resolvent solves with a 1-norm condition number above this are flagged.
pub const CONDITION_WARNING: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct Resolvent {
    pub frequency: f64,
    pub matrix: DMatrix<C64>,
    pub condition: f64,
}

impl Resolvent {
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > CONDITION_WARNING
    }
}

/// `G₀(Δω) = (Δω·I − H₁)⁻¹`.
///
/// With the control field off the `|s>` block is dark and lossless; it is left
/// out of the inversion and its entries are zero.
pub fn green_single(h1: &EffectiveHamiltonian, delta_omega: f64) -> Result<Resolvent> {
    let n = h1.dim();
    let active = h1.active_modes();
    let m = active.len();
    let a = DMatrix::<C64>::from_fn(m, m, |i, j| {
        let d = if i == j { C64::new(delta_omega, 0.0) } else { C64::new(0.0, 0.0) };
        d - h1.matrix[(active[i], active[j])]
    });
    let (inv, condition) =
        inverse_with_condition(a).ok_or(Error::SingularResolvent { frequency: delta_omega })?;
    let matrix = if m == n {
        inv
    } else {
        let mut full = DMatrix::<C64>::zeros(n, n);
        for (i, &p) in active.iter().enumerate() {
            for (j, &q) in active.iter().enumerate() {
                full[(p, q)] = inv[(i, j)];
            }
        }
        full
    };
    Ok(Resolvent { frequency: delta_omega, matrix, condition })
}

/// Incoming drive `√Γ_j e^{+ik₀z_j}` (sign = +1) or outgoing projection
/// `√Γ_j e^{−ik₀z_j}` (sign = −1) on the `|e>` block of the full basis.
pub fn guided_drive(spec: &LatticeSpec, sign: f64) -> DVector<C64> {
    let n = spec.n_atoms();
    let mut u = DVector::<C64>::zeros(2 * n);
    for s in spec.coupled_sites() {
        u[s.site_id] = C64::from_polar(s.decay_rate.sqrt(), sign * spec.params.k0d * s.z_position);
    }
    u
}

/// `Σ_ij √(Γ_iΓ_j) G_ij e^{−ik₀(z_i−z_j)}` from an already-computed resolvent.
pub fn guided_kernel(spec: &LatticeSpec, green: &DMatrix<C64>) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let k0d = spec.params.k0d;
    for i in spec.coupled_sites() {
        let out = C64::from_polar(i.decay_rate.sqrt(), -k0d * i.z_position);
        for j in spec.coupled_sites() {
            let inn = C64::from_polar(j.decay_rate.sqrt(), k0d * j.z_position);
            acc += out * green[(i.site_id, j.site_id)] * inn;
        }
    }
    acc
}

fn amplitude_from_kernel(kernel: C64) -> C64 {
    C64::new(1.0, 0.0) - C64::new(0.0, 0.5) * kernel
}

fn chi_from_kernel(spec: &LatticeSpec, kernel: C64) -> C64 {
    let total = spec.total_decay();
    if total > 0.0 {
        kernel / total
    } else {
        C64::new(0.0, 0.0)
    }
}

pub fn transmission_amplitude(spec: &LatticeSpec, h1: &EffectiveHamiltonian, delta_omega: f64) -> Result<C64> {
    let g = green_single(h1, delta_omega)?;
    Ok(amplitude_from_kernel(guided_kernel(spec, &g.matrix)))
}

/// Linear susceptibility, normalised by the total guided decay.
pub fn susceptibility(spec: &LatticeSpec, h1: &EffectiveHamiltonian, delta_omega: f64) -> Result<C64> {
    let g = green_single(h1, delta_omega)?;
    Ok(chi_from_kernel(spec, guided_kernel(spec, &g.matrix)))
}

/// Everything a sweep records at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponsePoint {
    pub delta_omega: f64,
    pub amplitude: C64,
    pub chi: C64,
    pub condition: f64,
}

impl ResponsePoint {
    pub fn transmission(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// Amplitude and susceptibility from a single resolvent evaluation.
pub fn response_at(spec: &LatticeSpec, h1: &EffectiveHamiltonian, delta_omega: f64) -> Result<ResponsePoint> {
    let g = green_single(h1, delta_omega)?;
    let kernel = guided_kernel(spec, &g.matrix);
    Ok(ResponsePoint {
        delta_omega,
        amplitude: amplitude_from_kernel(kernel),
        chi: chi_from_kernel(spec, kernel),
        condition: g.condition,
    })
}

/// Strictly increasing detuning grid (units of Γ).
#[derive(Debug, Clone, PartialEq)]
pub struct DetuningGrid(Vec<f64>);

impl DetuningGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("grid contains non-finite values".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!("grid is not strictly increasing at index {}", i + 1)));
        }
        Ok(DetuningGrid(values))
    }

    /// `points` evenly spaced values from `min` to `max` inclusive. Each value is
    /// computed directly from its index so the grid is bit-reproducible.
    pub fn uniform(min: f64, max: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        if points == 1 {
            return Self::new(alloc::vec![min]);
        }
        if !(max > min) {
            return Err(Error::InvalidGrid(format!("max ({max}) must exceed min ({min})")));
        }
        let last = (points - 1) as f64;
        let values = (0..points)
            .map(|i| {
                let f = i as f64 / last;
                min * (1.0 - f) + max * f
            })
            .collect();
        Self::new(values)
    }

    /// The default spectral window: 2001 points over `[-5Γ, 5Γ]`.
    pub fn standard() -> Self {
        Self::uniform(-5.0, 5.0, 2001).expect("static grid")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn step(&self) -> Option<f64> {
        (self.0.len() > 1).then(|| (self.0[self.0.len() - 1] - self.0[0]) / (self.0.len() - 1) as f64)
    }

    /// Whether `x ↦ 2c − x` maps the grid onto itself (to within `tol`).
    pub fn is_symmetric_about(&self, center: f64, tol: f64) -> bool {
        let n = self.0.len();
        (0..n).all(|i| ((self.0[i] - center) + (self.0[n - 1 - i] - center)).abs() <= tol)
    }
}

impl Deref for DetuningGrid {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A grid point whose resolvent solve crossed [`CONDITION_WARNING`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostic {
    pub delta_omega: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub detunings: Vec<f64>,
    pub amplitude: Vec<C64>,
    pub transmission: Vec<f64>,
    pub chi: Vec<C64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SpectrumSeries {
    /// Assemble a series from independently computed points, in grid order.
    pub fn from_points(points: &[ResponsePoint]) -> Self {
        let diagnostics = points
            .iter()
            .filter(|p| p.condition > CONDITION_WARNING)
            .map(|p| Diagnostic { delta_omega: p.delta_omega, condition: p.condition })
            .collect();
        SpectrumSeries {
            detunings: points.iter().map(|p| p.delta_omega).collect(),
            amplitude: points.iter().map(|p| p.amplitude).collect(),
            transmission: points.iter().map(|p| p.transmission()).collect(),
            chi: points.iter().map(|p| p.chi).collect(),
            diagnostics,
        }
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    /// Transmission linearly interpolated at `x` (clamped to the grid ends).
    pub fn transmission_at(&self, x: f64) -> f64 {
        interpolate(&self.detunings, &self.transmission, x)
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let f = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] * (1.0 - f) + ys[i + 1] * f
}

/// Per-spec factorisation for repeated one-photon evaluations.
///
/// The active block of `H₁` is reduced once to Schur form `Q R Q†`; each
/// detuning then costs one triangular solve against `Δω − R`. The recorded
/// condition number is the 1-norm condition of `Δω − R`, with `‖(Δω − R)⁻¹‖₁`
/// from Hager's estimator. If the Schur reduction fails the solver falls back
/// to [`response_at`].
#[derive(Debug, Clone)]
pub struct ResponseSolver {
    spec: LatticeSpec,
    h1: EffectiveHamiltonian,
    schur: Option<SchurData>,
}

#[derive(Debug, Clone)]
struct SchurData {
    /// row-major `R`
    r: Vec<C64>,
    n: usize,
    /// `Q† u_in`
    drive: Vec<C64>,
    /// `Qᵀ u_out`
    project: Vec<C64>,
}

impl ResponseSolver {
    pub fn new(spec: &LatticeSpec) -> Self {
        let h1 = crate::hamiltonian::build_h1(spec);
        let active = h1.active_modes();
        let m = active.len();
        let a = DMatrix::<C64>::from_fn(m, m, |i, j| h1.matrix[(active[i], active[j])]);
        let u_in = guided_drive(spec, 1.0);
        let u_out = guided_drive(spec, -1.0);
        let schur = ComplexSchur::new(a).ok().map(|s| {
            let q = &s.q;
            let drive = (0..m).map(|k| (0..m).map(|i| q[(i, k)].conj() * u_in[active[i]]).sum()).collect();
            let project = (0..m).map(|k| (0..m).map(|i| q[(i, k)] * u_out[active[i]]).sum()).collect();
            let mut r = vec![C64::new(0.0, 0.0); m * m];
            for i in 0..m {
                for j in i..m {
                    r[i * m + j] = s.r[(i, j)];
                }
            }
            SchurData { r, n: m, drive, project }
        });
        ResponseSolver { spec: spec.clone(), h1, schur }
    }

    pub fn hamiltonian(&self) -> &EffectiveHamiltonian {
        &self.h1
    }

    pub fn at(&self, delta_omega: f64) -> Result<ResponsePoint> {
        let Some(s) = &self.schur else {
            return response_at(&self.spec, &self.h1, delta_omega);
        };
        let n = s.n;
        let w = C64::new(delta_omega, 0.0);
        let t = |i: usize, j: usize| if i == j { w - s.r[i * n + i] } else { -s.r[i * n + j] };
        let mut norm = 0.0f64;
        for j in 0..n {
            norm = norm.max((0..=j).map(|i| t(i, j).norm()).sum());
        }
        let floor = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        if (0..n).any(|i| !(t(i, i).norm() > floor)) {
            return Err(Error::SingularResolvent { frequency: delta_omega });
        }
        // T y = b, back substitution
        let solve = |b: &mut [C64]| {
            for i in (0..n).rev() {
                let mut acc = b[i];
                for k in i + 1..n {
                    acc -= t(i, k) * b[k];
                }
                b[i] = acc / t(i, i);
            }
        };
        // T† y = b, forward substitution
        let solve_adjoint = |b: &mut [C64]| {
            for i in 0..n {
                let mut acc = b[i];
                for k in 0..i {
                    acc -= t(k, i).conj() * b[k];
                }
                b[i] = acc / t(i, i).conj();
            }
        };
        let mut y = s.drive.clone();
        solve(&mut y);
        let kernel: C64 = s.project.iter().zip(&y).map(|(a, b)| a * b).sum();
        if !(kernel.re.is_finite() && kernel.im.is_finite()) {
            return Err(Error::SingularResolvent { frequency: delta_omega });
        }
        let inv_norm = hager_inverse_norm(n, solve, solve_adjoint);
        Ok(ResponsePoint {
            delta_omega,
            amplitude: amplitude_from_kernel(kernel),
            chi: chi_from_kernel(&self.spec, kernel),
            condition: norm * inv_norm,
        })
    }
}

/// Lower estimate of `‖T⁻¹‖₁` from solves with `T` and `T†` (Hager, with Higham's extra probe).
fn hager_inverse_norm(n: usize, solve: impl Fn(&mut [C64]), solve_adjoint: impl Fn(&mut [C64])) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let norm1 = |v: &[C64]| v.iter().map(|z| z.norm()).sum::<f64>();
    let mut x = vec![C64::new(1.0 / n as f64, 0.0); n];
    let mut est = 0.0f64;
    let mut last = usize::MAX;
    for _ in 0..5 {
        let mut y = x.clone();
        solve(&mut y);
        let e = norm1(&y);
        if e <= est {
            break;
        }
        est = e;
        let mut z: Vec<C64> = y.iter().map(|v| if v.norm() > 0.0 { v / v.norm() } else { C64::new(1.0, 0.0) }).collect();
        solve_adjoint(&mut z);
        let (j, zj) = z.iter().enumerate().fold((0, 0.0f64), |b, (i, v)| if v.norm() > b.1 { (i, v.norm()) } else { b });
        let zx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if zj <= zx || j == last {
            break;
        }
        last = j;
        x = vec![C64::new(0.0, 0.0); n];
        x[j] = C64::new(1.0, 0.0);
    }
    let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    let mut alt: Vec<C64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            C64::new(sign * (1.0 + i as f64 / denom), 0.0)
        })
        .collect();
    solve(&mut alt);
    est.max(2.0 * norm1(&alt) / (3.0 * n as f64))
}

/// Evaluate every grid point independently, in order.
pub fn sweep(spec: &LatticeSpec, grid: &DetuningGrid) -> Result<SpectrumSeries> {
    let solver = ResponseSolver::new(spec);
    let points = grid.iter().map(|&w| solver.at(w)).collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSeries::from_points(&points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_h1;
    use crate::lattice::{build_conventional, AtomSite, SystemParams};
    use alloc::vec;

    fn single(p: SystemParams) -> LatticeSpec {
        let site = AtomSite { site_id: 0, cell_index: 0, cluster_index: 0, intra_cell_index: 0, z_position: 0.0, decay_rate: p.gamma_1d };
        LatticeSpec::custom(vec![site], &[], p).unwrap()
    }

    #[test]
    fn two_level_resolvent_at_resonance() {
        let spec = single(SystemParams { omega_c: 0.0, ..SystemParams::default() });
        let h1 = build_h1(&spec);
        let g = green_single(&h1, 0.0).unwrap();
        // 1 / (0 − (−0.55i)) = −i/0.55
        assert!((g.matrix[(0, 0)] - C64::new(0.0, -1.0 / 0.55)).norm() < 1e-12);
    }

    #[test]
    fn two_level_transmission_at_resonance() {
        let spec = single(SystemParams { omega_c: 0.0, ..SystemParams::default() });
        let h1 = build_h1(&spec);
        let t = transmission_amplitude(&spec, &h1, 0.0).unwrap();
        assert!((t - C64::new(0.1 / 1.1, 0.0)).norm() < 1e-12);
        assert!((t.norm_sqr() - 8.264_462_809_917_355e-3).abs() < 1e-12);
        let chi = susceptibility(&spec, &h1, 0.0).unwrap();
        assert!(chi.re.abs() < 1e-14);
        assert!(chi.im < 0.0);
    }

    #[test]
    fn lambda_atom_is_transparent_at_two_photon_resonance() {
        let spec = single(SystemParams::default());
        let h1 = build_h1(&spec);
        let t = transmission_amplitude(&spec, &h1, 0.0).unwrap();
        assert!((t - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(susceptibility(&spec, &h1, 0.0).unwrap().norm() < 1e-14);
    }

    #[test]
    fn far_detuned_resolvent() {
        let spec = build_conventional(SystemParams::default()).unwrap();
        let h1 = build_h1(&spec);
        let w = 1e6;
        let g = green_single(&h1, w).unwrap();
        for i in 0..h1.dim() {
            for j in 0..h1.dim() {
                let expect = if i == j { 1.0 / w } else { 0.0 };
                assert!((g.matrix[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-5 / w);
            }
        }
    }

    #[test]
    fn grid_validation() {
        assert!(DetuningGrid::new(vec![]).is_err());
        assert!(DetuningGrid::new(vec![0.0, 0.0]).is_err());
        assert!(DetuningGrid::new(vec![1.0, 0.0]).is_err());
        assert!(DetuningGrid::uniform(1.0, -1.0, 5).is_err());
        let g = DetuningGrid::uniform(-5.0, 5.0, 2001).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -5.0);
        assert_eq!(g[2000], 5.0);
        assert_eq!(g[1000], 0.0);
        assert!(g.is_symmetric_about(0.0, 1e-12));
        assert!(!g.is_symmetric_about(0.5, 1e-12));
    }

    #[test]
    fn decoupled_pair_is_transparent() {
        let spec = build_conventional(SystemParams { gamma_1d: 0.0, ..SystemParams::default() }).unwrap();
        let s = sweep(&spec, &DetuningGrid::uniform(-5.0, 5.0, 101).unwrap()).unwrap();
        assert!(s.transmission.iter().all(|&t| (t - 1.0).abs() < 1e-15));
        assert!(s.chi.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn interpolation_clamps() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 10.0, 0.0];
        assert_eq!(interpolate(&xs, &ys, -1.0), 0.0);
        assert_eq!(interpolate(&xs, &ys, 0.5), 5.0);
        assert_eq!(interpolate(&xs, &ys, 1.5), 5.0);
        assert_eq!(interpolate(&xs, &ys, 3.0), 0.0);
    }
}

//! Log-linear decay fits on envelope maxima and the decay suite of a
//! cylinder run mapped to de Sitter space and to Minkowski space.

use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::fields::Ansatz;
use crate::geometry::{
    conformal_factor, ds_to_cylinder, gamma_norm_one_form, Background, Chart, ChartPoint,
};
use crate::transport::{ds_pullback, solution_pullback};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Least-squares slope of log y against x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub window: [f64; 2],
    pub exponent: f64,
    /// RMS of the log-linear fit.
    pub residual: f64,
    /// Number of samples used.
    pub points: usize,
    /// Whether the fit used local maxima (false: too few peaks, all samples).
    pub envelope: bool,
}

/// Minimum number of interior peaks for an envelope fit.
const MIN_PEAKS: usize = 3;

/// Interior local maxima of the series, in order.
pub fn envelope_maxima(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    series.windows(3).filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1).map(|w| w[1]).collect()
}

/// Fits log y = c + γx on the samples with x in `window`. Oscillating series
/// are fitted on their local maxima; a series with fewer than three interior
/// peaks in the window is fitted on every sample.
pub fn decay_fit(series: &[(f64, f64)], window: [f64; 2]) -> Result<DecayFit> {
    if !(window[0] < window[1]) {
        return Err(Error::Config(format!("degenerate fit window {window:?}")));
    }
    let inside: Vec<(f64, f64)> = series.iter().copied().filter(|&(x, _)| x >= window[0] && x <= window[1]).collect();
    if let Some(&(x, y)) = inside.iter().find(|&&(_, y)| !(y > 0.0 && y.is_finite())) {
        return Err(Error::Config(format!("decay series must be positive on the window, got {y} at x = {x}")));
    }
    let peaks = envelope_maxima(&inside);
    let envelope = peaks.len() >= MIN_PEAKS;
    let pts = if envelope { peaks } else { inside };
    if pts.len() < 2 {
        return Err(Error::Config(format!("fit window {window:?} holds {} samples", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Config("fit samples share one abscissa".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let slope = sxy / sxx;
    let c = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1.ln() - c - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DecayFit { window, exponent: slope, residual: rms, points: pts.len(), envelope })
}

/// Sample windows of the decay suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayWindows {
    /// α range of the de Sitter fits.
    pub alpha: [f64; 2],
    /// t range of the Minkowski fits.
    pub t: [f64; 2],
    /// Radius of the Minkowski worldline for the potential fits.
    pub radius: f64,
    pub samples: usize,
    /// ζ nodes of the de Sitter sup.
    pub zeta_nodes: usize,
}

impl Default for DecayWindows {
    fn default() -> Self {
        DecayWindows { alpha: [2.0, 6.0], t: [5.0, 50.0], radius: 1.0, samples: 81, zeta_nodes: 64 }
    }
}

/// Series and fits of one decay suite. Fits that the ansatz cannot feed (A
/// vanishes for a fixed direction, φ vanishes on the axis for the hedgehog)
/// are absent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecaySuite {
    pub ds_phi: Option<DecayFit>,
    pub ds_a: Option<DecayFit>,
    pub axis_phi: Option<DecayFit>,
    pub null_al: Option<DecayFit>,
    pub null_an: Option<DecayFit>,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

fn linspace(w: [f64; 2], n: usize) -> Vec<f64> {
    (0..n).map(|k| w[0] + (w[1] - w[0]) * k as f64 / (n - 1).max(1) as f64).collect()
}

/// Maps one cylinder run to de Sitter (ω = cos τ) and Minkowski (Ω) and fits
/// sup_ζ|φ̃| and sup_ζ|Ã|_Γ̃ against α, |φ| on the axis against log t, and
/// |A_l|, |A_n| on the worldline r = `radius` against log u₊ and log v₊.
pub fn decay_suite(traj: &Trajectory, w: &DecayWindows) -> Result<DecaySuite> {
    let s0 = traj.first();
    if s0.background != Background::Cylinder {
        return Err(Error::Domain("the decay suite needs a cylinder run".into()));
    }
    let (_, tau_end) = traj.time_range();
    let need = ds_to_cylinder(w.alpha[1]).max(2.0 * w.t[1].atan()).max((w.t[1] - w.radius).atan() + (w.t[1] + w.radius).atan());
    if tau_end < need {
        return Err(Error::Domain(format!("the run ends at τ = {tau_end}, the suite needs τ = {need}")));
    }
    let sampler = traj.sampler();
    let hedgehog = s0.ansatz.class == Ansatz::Hedgehog;
    let mut suite = DecaySuite::default();

    let zetas: Vec<f64> = (0..w.zeta_nodes).map(|j| (j as f64 + 0.5) * PI / w.zeta_nodes as f64).collect();
    let mut sphi = Vec::new();
    let mut sa = Vec::new();
    for alpha in linspace(w.alpha, w.samples) {
        let (mut mp, mut ma): (f64, f64) = (0.0, 0.0);
        for &z in &zetas {
            let q = ChartPoint::de_sitter(alpha, z, 0.5 * PI, 0.0);
            let pf = ds_pullback(&sampler, &q)?;
            mp = mp.max(pf.phi.norm());
            ma = ma.max(gamma_norm_one_form(Chart::DeSitter, &q.x, &pf.a));
        }
        sphi.push((alpha, mp));
        sa.push((alpha, ma));
    }
    suite.ds_phi = Some(decay_fit(&sphi, w.alpha)?);
    if hedgehog {
        suite.ds_a = Some(decay_fit(&sa, w.alpha)?);
    }
    suite.series.push(("ds_phi".into(), sphi));
    suite.series.push(("ds_a".into(), sa));

    // Minkowski times sampled uniformly in log t.
    let lt = linspace([w.t[0].ln(), w.t[1].ln()], w.samples);
    if !hedgehog {
        let mut axis = Vec::new();
        for &l in &lt {
            let p = ChartPoint::minkowski(l.exp(), 0.0, 0.5 * PI, 0.0);
            axis.push((l, solution_pullback(&sampler, &p)?.phi.norm()));
        }
        suite.axis_phi = Some(decay_fit(&axis, [lt[0], lt[lt.len() - 1]])?);
        suite.series.push(("axis_phi".into(), axis));
    } else {
        let mut al = Vec::new();
        let mut an = Vec::new();
        for &l in &lt {
            let p = ChartPoint::minkowski(l.exp(), w.radius, 0.5 * PI, 0.0);
            let pf = solution_pullback(&sampler, &p)?;
            let cd = conformal_factor(&p)?;
            al.push((cd.u_plus.ln(), (pf.a[1] - pf.a[0]).norm()));
            an.push((cd.v_plus.ln(), (pf.a[1] + pf.a[0]).norm()));
        }
        let win = |s: &[(f64, f64)]| [s[0].0, s[s.len() - 1].0];
        suite.null_al = Some(decay_fit(&al, win(&al))?);
        suite.null_an = Some(decay_fit(&an, win(&an))?);
        suite.series.push(("null_al".into(), al));
        suite.series.push(("null_an".into(), an));
    }
    Ok(suite)
}

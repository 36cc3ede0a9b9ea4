//! Data and solutions carried between Minkowski space, the Einstein cylinder
//! and de Sitter space.
//!
//! On the common initial surface t = τ = 0 (r = tan(ζ/2)) temporal-gauge
//! data are related by Â = A, Ê = r₊²E, φ̂ = r₊²φ and π̂ = r₊⁴π, with
//! r₊² = (1 + r²)/2. The radial one-form components pick up the extra factor
//! dr/dζ = r₊², so in profile variables
//!
//!   (w, k, a, h)  ↦  (w, k, r₊²a, r₊²h),
//!   (ẇ, k̇, ȧ, ḣ)  ↦  (r₊²ẇ, r₊²k̇, r₊⁴ȧ, r₊⁴ḣ).

use crate::error::{Error, Result};
use crate::evolve::rhs::parity;
use crate::evolve::{extend, EquivariantState, GHOSTS};
use crate::fields::{
    conformal_rescale, spherical_to_cartesian_components, Ansatz, PointFields, RescaleDirection,
};
use crate::geometry::{
    cartesian_to_spherical, ds_to_cylinder, dtau_dalpha, to_cylinder, Background, Chart, ChartPoint,
};
use crate::quadrature::{lagrange_weights, stencil_start};
use crate::sampler::FieldSampler;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Interpolation width (quartic).
const WIDTH: usize = 5;
/// Largest spacing ratio between source and target grids.
const MAX_SPACING_RATIO: f64 = 64.0;
/// Relative size below which source data count as zero at the outer edge.
const DECAY_TOLERANCE: f64 = 1e-12;

/// Temporal-gauge data on the t = 0 (τ = 0) slice of one frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalGaugeData {
    pub state: EquivariantState,
}

impl TemporalGaugeData {
    pub fn new(state: EquivariantState) -> Result<Self> {
        if state.time != 0.0 {
            return Err(Error::Domain(format!("transport needs data on the initial slice, got t = {}", state.time)));
        }
        state.check_invariants()?;
        Ok(TemporalGaugeData { state })
    }

    pub fn frame(&self) -> Background {
        self.state.background
    }
}

/// r₊² = (1 + r²)/2.
pub fn r_plus_sq(r: f64) -> f64 {
    0.5 * (1.0 + r * r)
}

/// Profile weights (q, p) from Minkowski to the cylinder at areal-chart
/// radius r.
pub fn profile_weights(class: Ansatz, field: usize, r: f64) -> (f64, f64) {
    let rp = r_plus_sq(r);
    match (class, field) {
        (Ansatz::Hedgehog, 0 | 1) => (1.0, rp),
        _ => (rp, rp * rp),
    }
}

/// Source profiles interpolated at a radius of the source grid.
struct Interp<'a> {
    state: &'a EquivariantState,
    ext_q: Vec<Vec<f64>>,
    ext_p: Vec<Vec<f64>>,
    /// Last node usable in a stencil.
    last: isize,
    vacuum: Vec<f64>,
}

impl<'a> Interp<'a> {
    fn new(state: &'a EquivariantState) -> Self {
        let pole = state.background == Background::Cylinder;
        let nf = state.q.len();
        let mut vacuum = vec![0.0; nf];
        if state.ansatz.class == Ansatz::Hedgehog {
            vacuum[0] = 1.0;
        }
        let ext = |u: &[f64], f: usize| extend(u, parity(state.ansatz.class, f), pole);
        // Deviations from the vacuum are interpolated so that vacuum maps exactly.
        let ext_q = (0..nf)
            .map(|f| ext(&state.q[f].iter().map(|x| x - vacuum[f]).collect::<Vec<_>>(), f))
            .collect();
        let ext_p = (0..nf).map(|f| ext(&state.p[f], f)).collect();
        let last = match state.background {
            Background::Cylinder => (state.n() + GHOSTS) as isize,
            Background::Minkowski => state.active as isize,
        };
        Interp { state, ext_q, ext_p, last, vacuum }
    }

    fn covers(&self, rho: f64) -> bool {
        rho <= self.state.rho(GHOSTS.max(self.last as usize - GHOSTS))
    }

    fn at(&self, rho: f64) -> (Vec<f64>, Vec<f64>) {
        let dx = self.state.dx();
        let lo = stencil_start(0.0, dx, rho, WIDTH, -(GHOSTS as isize), self.last);
        let nodes: Vec<f64> = (0..WIDTH).map(|j| (lo + j as isize) as f64 * dx).collect();
        let (l, _) = lagrange_weights(&nodes, rho);
        let eval = |e: &[f64]| (0..WIDTH).map(|j| l[j] * e[(lo + j as isize + GHOSTS as isize) as usize]).sum::<f64>();
        let q = self.ext_q.iter().zip(&self.vacuum).map(|(e, v)| eval(e) + v).collect();
        (q, self.ext_p.iter().map(|e| eval(e)).collect())
    }

    /// Whether the data have decayed to the vacuum at the edge of the source.
    fn decayed(&self) -> bool {
        let s = self.state;
        let top = self.last.min(s.n() as isize) as usize;
        let scale = s.norm_max().max(1.0);
        (top.saturating_sub(WIDTH)..=top).all(|i| {
            (0..s.q.len()).all(|f| (s.q[f][i] - self.vacuum[f]).abs() <= DECAY_TOLERANCE * scale && s.p[f][i].abs() <= DECAY_TOLERANCE * scale)
        })
    }
}

fn check_spacing(source: f64, target: f64) -> Result<()> {
    let ratio = source / target;
    if !(1.0 / MAX_SPACING_RATIO..=MAX_SPACING_RATIO).contains(&ratio) {
        return Err(Error::Config(format!(
            "resolution mismatch: source spacing {source:e} and target spacing {target:e} differ by more than {MAX_SPACING_RATIO}×"
        )));
    }
    Ok(())
}

/// Minkowski data to cylinder data on an n-interval grid over [0, π]. Beyond
/// the source grid the data must already be vacuum.
pub fn data_to_cylinder(d: &TemporalGaugeData, n: usize) -> Result<TemporalGaugeData> {
    let src = &d.state;
    if src.background != Background::Minkowski {
        return Err(Error::Domain("data_to_cylinder needs Minkowski data".into()));
    }
    // Near the centre dr = dζ/2.
    check_spacing(src.dx(), 0.5 * PI / n as f64)?;
    let ip = Interp::new(src);
    let decayed = ip.decayed();
    let class = src.ansatz.class;
    let uncovered = std::cell::Cell::new(None);
    let state = EquivariantState::from_fn(Background::Cylinder, src.ansatz, n, PI, src.lambda, |zeta| {
        let r = (0.5 * zeta).tan();
        if zeta >= PI || !ip.covers(r) {
            if !decayed {
                uncovered.set(Some(r));
            }
            return (ip.vacuum.clone(), vec![0.0; ip.vacuum.len()]);
        }
        let (mut q, mut p) = ip.at(r);
        for f in 0..q.len() {
            let (wq, wp) = profile_weights(class, f, r);
            q[f] = ip.vacuum[f] + (q[f] - ip.vacuum[f]) * wq;
            p[f] *= wp;
        }
        (q, p)
    })?;
    if let Some(r) = uncovered.get() {
        return Err(Error::Domain(format!("source data end at r = {} without decaying (needed r = {r})", src.valid_radius())));
    }
    TemporalGaugeData::new(state)
}

/// Cylinder data to Minkowski data on an n-interval grid over [0, r_max].
pub fn data_to_minkowski(d: &TemporalGaugeData, n: usize, r_max: f64) -> Result<TemporalGaugeData> {
    let src = &d.state;
    if src.background != Background::Cylinder {
        return Err(Error::Domain("data_to_minkowski needs cylinder data".into()));
    }
    check_spacing(0.5 * src.dx(), r_max / n as f64)?;
    let ip = Interp::new(src);
    let class = src.ansatz.class;
    let state = EquivariantState::from_fn(Background::Minkowski, src.ansatz, n, r_max, src.lambda, |r| {
        let (mut q, mut p) = ip.at(2.0 * r.atan());
        for f in 0..q.len() {
            let (wq, wp) = profile_weights(class, f, r);
            q[f] = ip.vacuum[f] + (q[f] - ip.vacuum[f]) / wq;
            p[f] /= wp;
        }
        (q, p)
    })?;
    TemporalGaugeData::new(state)
}

/// Minkowski fields at `p` from a cylinder sampler: A = Â, φ = Ωφ̂.
pub fn solution_pullback<S: FieldSampler + ?Sized>(cylinder: &S, p: &ChartPoint) -> Result<PointFields> {
    let sph = match p.chart {
        Chart::MinkowskiSpherical => *p,
        Chart::MinkowskiCartesian => cartesian_to_spherical(p),
        c => return Err(Error::Domain(format!("solution_pullback needs a Minkowski point, got {c:?}"))),
    };
    let q = to_cylinder(&sph)?;
    let hat = cylinder.sample(&q)?;
    let out = conformal_rescale(&hat, &q, RescaleDirection::CylinderToMinkowski)?;
    match p.chart {
        Chart::MinkowskiCartesian => spherical_to_cartesian_components(&out, p),
        _ => Ok(out),
    }
}

/// de Sitter fields at `q` = (α, ζ, θ, φ) from a cylinder sampler:
/// φ̃ = ωφ̂, Ã = Â with ω = cos τ and τ = τ(α).
pub fn ds_pullback<S: FieldSampler + ?Sized>(cylinder: &S, q: &ChartPoint) -> Result<PointFields> {
    if q.chart != Chart::DeSitter {
        return Err(Error::Domain(format!("ds_pullback needs a de Sitter point, got {:?}", q.chart)));
    }
    q.validate()?;
    let [alpha, zeta, th, ph] = q.x;
    let tau = ds_to_cylinder(alpha);
    let hat = cylinder.sample(&ChartPoint::cylinder(tau, zeta, th, ph))?;
    let (st, om) = tau.sin_cos();
    let ta = dtau_dalpha(alpha);
    let mut out = PointFields::vacuum(Chart::DeSitter);
    out.phi = om * hat.phi;
    out.dphi[0] = ta * (om * hat.dphi[0] - st * hat.phi);
    for i in 1..4 {
        out.dphi[i] = om * hat.dphi[i];
        out.a[i] = hat.a[i];
    }
    out.a[0] = ta * hat.a[0];
    let mut f = hat.f;
    for j in 1..4 {
        f.set(0, j, ta * hat.f.get(0, j));
    }
    out.f = f;
    Ok(out)
}

/// Minkowski view of a cylinder sampler.
pub struct Pullback<S>(pub S);

impl<S: FieldSampler> FieldSampler for Pullback<S> {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        solution_pullback(&self.0, p)
    }
}

/// de Sitter view of a cylinder sampler.
pub struct DeSitterPullback<S>(pub S);

impl<S: FieldSampler> FieldSampler for DeSitterPullback<S> {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        ds_pullback(&self.0, p)
    }
}

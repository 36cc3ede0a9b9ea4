//! Stored snapshots of a run and quartic space-time interpolation of them.

use super::rhs::parity;
use super::{extend, EquivariantState, GHOSTS};
use crate::error::{Error, Result};
use crate::fields::{Jet, ProfileJet};
use crate::geometry::ChartPoint;
use crate::quadrature::lagrange_weights;
use crate::sampler::{ProfileSource, SymmetricSampler};

const WIDTH: usize = 5;

/// Time-ordered snapshots of one evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    states: Vec<EquivariantState>,
    /// Parity-extended q and p arrays per snapshot and field.
    ext_q: Vec<Vec<Vec<f64>>>,
    ext_p: Vec<Vec<Vec<f64>>>,
}

impl Trajectory {
    pub fn new(first: EquivariantState) -> Self {
        let mut t = Trajectory { states: Vec::new(), ext_q: Vec::new(), ext_p: Vec::new() };
        t.push(first);
        t
    }

    pub fn push(&mut self, s: EquivariantState) {
        let class = s.ansatz.class;
        self.ext_q.push(s.q.iter().enumerate().map(|(f, u)| s.extend(u, parity(class, f))).collect());
        self.ext_p.push(s.p.iter().enumerate().map(|(f, u)| s.extend(u, parity(class, f))).collect());
        self.states.push(s);
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[EquivariantState] {
        &self.states
    }

    pub fn first(&self) -> &EquivariantState {
        &self.states[0]
    }

    pub fn last(&self) -> &EquivariantState {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn time_range(&self) -> (f64, f64) {
        let (a, b) = (self.first().time, self.last().time);
        (a.min(b), a.max(b))
    }

    /// Largest ρ at which data at time t are covered with a full stencil.
    pub fn valid_radius(&self, t: f64) -> f64 {
        let s0 = self.first();
        match s0.background {
            crate::geometry::Background::Cylinder => s0.rho_max,
            crate::geometry::Background::Minkowski => {
                let i = self.time_window(t).unwrap_or(0);
                let act = self.states[i..(i + WIDTH).min(self.len())].iter().map(|s| s.active).min().unwrap_or(0);
                s0.rho(act.saturating_sub(2))
            }
        }
    }

    fn time_window(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.time_range();
        let tol = 1e-9 * (1.0 + hi.abs());
        if t < lo - tol || t > hi + tol {
            return Err(Error::Domain(format!("time {t} outside the stored range [{lo}, {hi}]")));
        }
        let m = self.len();
        if m < WIDTH {
            return Ok(0);
        }
        let forward = self.last().time >= self.first().time;
        let key = |s: &EquivariantState| if forward { s.time } else { -s.time };
        let tt = if forward { t } else { -t };
        let j = self.states.partition_point(|s| key(s) < tt);
        Ok(j.saturating_sub(WIDTH / 2).min(m - WIDTH))
    }

    fn space_window(&self, rho: f64) -> isize {
        let s0 = self.first();
        let centre = (rho / s0.dx()).round() as isize;
        let n = s0.n() as isize;
        let hi = match s0.background {
            crate::geometry::Background::Cylinder => n + GHOSTS as isize,
            crate::geometry::Background::Minkowski => n,
        };
        (centre - (WIDTH as isize) / 2).clamp(-(GHOSTS as isize), hi - WIDTH as isize + 1)
    }

    /// Jets at (t, ρ) using the stencils chosen for the anchor (ta, ρa).
    fn jet_anchored(&self, t: f64, rho: f64, ta: f64, rhoa: f64) -> Result<ProfileJet> {
        let s0 = self.first();
        if rho < -1e-12 || rho > self.valid_radius(ta) + 1e-12 {
            return Err(Error::Domain(format!("ρ = {rho} outside the evolved region at t = {ta}")));
        }
        self.time_window(t)?;
        let it = self.time_window(ta)?;
        let nt = WIDTH.min(self.len());
        let times: Vec<f64> = (it..it + nt).map(|k| self.states[k].time).collect();
        let (lt, _) = lagrange_weights(&times, t);
        let ir = self.space_window(rhoa);
        let dx = s0.dx();
        let nodes: Vec<f64> = (0..WIDTH).map(|j| (ir + j as isize) as f64 * dx).collect();
        let (lr, dlr) = lagrange_weights(&nodes, rho);
        let base = (ir + GHOSTS as isize) as usize;
        let mut jet = ProfileJet::default();
        for f in 0..s0.q.len() {
            let (mut v, mut dr, mut dt) = (0.0, 0.0, 0.0);
            for (a, wt) in lt.iter().enumerate() {
                let eq = &self.ext_q[it + a][f];
                let ep = &self.ext_p[it + a][f];
                for b in 0..WIDTH {
                    v += wt * lr[b] * eq[base + b];
                    dr += wt * dlr[b] * eq[base + b];
                    dt += wt * lr[b] * ep[base + b];
                }
            }
            jet.f[f] = Jet::new(v, dr, dt);
        }
        Ok(jet)
    }

    /// Profile source interpolating this trajectory.
    pub fn source(&self) -> TrajectorySource<'_> {
        TrajectorySource { traj: self, anchor: None }
    }

    /// Source whose interpolation stencils are frozen at `anchor`, so that
    /// finite differences around it see a single smooth polynomial.
    pub fn anchored(&self, t: f64, rho: f64) -> TrajectorySource<'_> {
        TrajectorySource { traj: self, anchor: Some((t, rho)) }
    }

    pub fn sampler(&self) -> SymmetricSampler<TrajectorySource<'_>> {
        let s = self.first();
        SymmetricSampler::new(s.background, s.ansatz, self.source())
    }

    /// Sampler anchored at the (t, ρ) of `p`.
    pub fn sampler_at(&self, p: &ChartPoint) -> SymmetricSampler<TrajectorySource<'_>> {
        let s = self.first();
        SymmetricSampler::new(s.background, s.ansatz, self.anchored(p.x[0], p.radial_coordinate()))
    }

    /// Profile values (not jets) at an arbitrary (t, ρ).
    pub fn profiles(&self, t: f64, rho: f64) -> Result<ProfileJet> {
        self.jet_anchored(t, rho, t, rho)
    }

    /// Largest stored time step between snapshots.
    pub fn cadence_time(&self) -> f64 {
        self.states.windows(2).map(|w| (w[1].time - w[0].time).abs()).fold(0.0, f64::max)
    }
}

/// Parity extension shared with snapshot readers.
pub fn extended(state: &EquivariantState, field: usize, momenta: bool) -> Vec<f64> {
    let u = if momenta { &state.p[field] } else { &state.q[field] };
    extend(u, parity(state.ansatz.class, field), state.background == crate::geometry::Background::Cylinder)
}

#[derive(Clone, Copy)]
pub struct TrajectorySource<'a> {
    traj: &'a Trajectory,
    anchor: Option<(f64, f64)>,
}

impl ProfileSource for TrajectorySource<'_> {
    fn jet(&self, t: f64, rho: f64) -> Result<ProfileJet> {
        let (ta, ra) = self.anchor.unwrap_or((t, rho));
        self.traj.jet_anchored(t, rho, ta, ra)
    }
}

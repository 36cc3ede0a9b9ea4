//! Method-of-lines evolution of the spherically symmetric temporal-gauge
//! system on Minkowski space and on the Einstein cylinder.
//!
//! Space: fourth-order centred differences on a uniform grid that includes
//! the axis (and the antipodal pole on the cylinder), closed with parity
//! ghost points. Time: classical RK4.

pub mod gate;
pub mod rhs;
pub mod trajectory;

use crate::error::{Error, Result};
use crate::fields::{Ansatz, AnsatzProfiles};
use crate::geometry::Background;
use rhs::{accelerations, field_count, field_names, numerator_parity, numerators, parity, RadialJet};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use trajectory::{Trajectory, TrajectorySource};

/// Largest allowed dt/Δρ.
pub const MAX_CFL: f64 = 0.25;
/// Largest allowed dissipation strength.
pub const MAX_SIGMA: f64 = 0.1;
pub(crate) const GHOSTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivariantState {
    pub background: Background,
    pub ansatz: AnsatzProfiles,
    pub rho_max: f64,
    pub lambda: f64,
    pub time: f64,
    /// Profiles, one array of N+1 nodes per field.
    pub q: Vec<Vec<f64>>,
    /// Their time derivatives.
    pub p: Vec<Vec<f64>>,
    /// Highest node still evolved; smaller than N on Minkowski once the
    /// domain of dependence starts to shrink.
    pub active: usize,
}

impl EquivariantState {
    /// State with profiles given by `f(ρ) -> (q, p)`.
    pub fn from_fn(
        background: Background,
        ansatz: AnsatzProfiles,
        n: usize,
        rho_max: f64,
        lambda: f64,
        f: impl Fn(f64) -> (Vec<f64>, Vec<f64>),
    ) -> Result<Self> {
        if n < 8 {
            return Err(Error::Config(format!("grid needs at least 8 intervals, got {n}")));
        }
        let rho_max = match background {
            Background::Cylinder => PI,
            Background::Minkowski => rho_max,
        };
        if !(rho_max > 0.0 && rho_max.is_finite()) {
            return Err(Error::Config(format!("outer radius must be positive, got {rho_max}")));
        }
        let nf = field_count(ansatz.class);
        let mut q = vec![vec![0.0; n + 1]; nf];
        let mut p = vec![vec![0.0; n + 1]; nf];
        let dx = rho_max / n as f64;
        for i in 0..=n {
            let (qi, pi) = f(i as f64 * dx);
            if qi.len() != nf || pi.len() != nf {
                return Err(Error::Config(format!("profile function must return {nf} values per array")));
            }
            for k in 0..nf {
                q[k][i] = qi[k];
                p[k][i] = pi[k];
            }
        }
        let active = match background {
            Background::Cylinder => n,
            Background::Minkowski => n - GHOSTS,
        };
        let mut s = EquivariantState { background, ansatz, rho_max, lambda, time: 0.0, q, p, active };
        s.enforce_parity();
        s.check_invariants()?;
        Ok(s)
    }

    pub fn vacuum(background: Background, ansatz: AnsatzProfiles, n: usize, rho_max: f64, lambda: f64) -> Result<Self> {
        let nf = field_count(ansatz.class);
        let base: Vec<f64> = match ansatz.class {
            Ansatz::Hedgehog => vec![1.0, 0.0, 0.0, 0.0],
            Ansatz::FixedDirection => vec![0.0],
        };
        Self::from_fn(background, ansatz, n, rho_max, lambda, |_| (base.clone(), vec![0.0; nf]))
    }

    pub fn n(&self) -> usize {
        self.q[0].len() - 1
    }

    pub fn dx(&self) -> f64 {
        self.rho_max / self.n() as f64
    }

    pub fn rho(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Largest radius at which the evolved profiles are still exact data of
    /// the continuum problem (end of the active region).
    pub fn valid_radius(&self) -> f64 {
        self.rho(self.active)
    }

    pub fn field_names(&self) -> &'static [&'static str] {
        field_names(self.ansatz.class)
    }

    pub fn norm_max(&self) -> f64 {
        self.q.iter().chain(self.p.iter()).flatten().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    fn has_right_pole(&self) -> bool {
        self.background == Background::Cylinder
    }

    /// Sets odd profiles to zero on the axis (and the pole), w = 1 there,
    /// and for the hedgehog the regularity condition a = k' (with k' the
    /// grid slope of the odd extension).
    pub fn enforce_parity(&mut self) {
        let n = self.n();
        let ends: &[usize] = if self.has_right_pole() { &[0, n] } else { &[0] };
        for f in 0..self.q.len() {
            for &e in ends {
                if parity(self.ansatz.class, f) < 0.0 {
                    self.q[f][e] = 0.0;
                    self.p[f][e] = 0.0;
                } else if self.ansatz.class == Ansatz::Hedgehog && f == 0 {
                    self.q[f][e] = 1.0;
                    self.p[f][e] = 0.0;
                }
            }
        }
        if self.ansatz.class == Ansatz::Hedgehog {
            let (slope0, slope_n) = end_slopes(self.dx(), n);
            self.q[2][0] = slope0(&self.q[1]);
            self.p[2][0] = slope0(&self.p[1]);
            if self.has_right_pole() {
                self.q[2][n] = slope_n(&self.q[1]);
                self.p[2][n] = slope_n(&self.p[1]);
            }
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(Error::Invariant(format!("λ must be non-negative, got {}", self.lambda)));
        }
        let tol = 1e-8 * self.norm_max().max(1.0);
        let n = self.n();
        let ends: &[usize] = if self.has_right_pole() { &[0, n] } else { &[0] };
        for f in 0..self.q.len() {
            for &e in ends {
                let target = if parity(self.ansatz.class, f) < 0.0 {
                    Some(0.0)
                } else if self.ansatz.class == Ansatz::Hedgehog && f == 0 {
                    Some(1.0)
                } else {
                    None
                };
                if let Some(t) = target {
                    if (self.q[f][e] - t).abs() > tol || (self.q[f][e] - t).is_nan() {
                        return Err(Error::Invariant(format!(
                            "{} = {} at node {e}, expected {t}",
                            self.field_names()[f],
                            self.q[f][e]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Array with GHOSTS parity ghosts on each side.
    pub(crate) fn extend(&self, u: &[f64], par: f64) -> Vec<f64> {
        extend(u, par, self.has_right_pole())
    }
}

/// Fourth-order slopes of an odd array at node 0 and node n.
fn end_slopes(dx: f64, n: usize) -> (impl Fn(&[f64]) -> f64, impl Fn(&[f64]) -> f64) {
    let inv = 1.0 / (12.0 * dx);
    (move |u: &[f64]| (16.0 * u[1] - 2.0 * u[2]) * inv, move |u: &[f64]| (2.0 * u[n - 2] - 16.0 * u[n - 1]) * inv)
}

pub(crate) fn extend(u: &[f64], par: f64, right_pole: bool) -> Vec<f64> {
    let n = u.len() - 1;
    let mut e = vec![0.0; n + 1 + 2 * GHOSTS];
    e[GHOSTS..GHOSTS + n + 1].copy_from_slice(u);
    for j in 1..=GHOSTS {
        e[GHOSTS - j] = par * u[j];
        e[GHOSTS + n + j] = if right_pole { par * u[n - j] } else { u[n] };
    }
    e
}

#[inline]
fn d1(e: &[f64], i: usize, inv: f64) -> f64 {
    let c = i + GHOSTS;
    (e[c - 2] - 8.0 * e[c - 1] + 8.0 * e[c + 1] - e[c + 2]) * inv
}

#[inline]
fn d2(e: &[f64], i: usize, inv2: f64) -> f64 {
    let c = i + GHOSTS;
    (-e[c - 2] + 16.0 * e[c - 1] - 30.0 * e[c] + 16.0 * e[c + 1] - e[c + 2]) * inv2
}

#[inline]
fn d6(e: &[f64], i: usize) -> f64 {
    let c = i + GHOSTS;
    e[c - 3] - 6.0 * e[c - 2] + 15.0 * e[c - 1] - 20.0 * e[c] + 15.0 * e[c + 1] - 6.0 * e[c + 2] + e[c + 3]
}

/// Radial jets of every profile at every active node.
pub(crate) fn grid_jets(state: &EquivariantState, u: &[Vec<f64>]) -> Vec<Vec<RadialJet>> {
    let dx = state.dx();
    let (inv, inv2) = (1.0 / (12.0 * dx), 1.0 / (12.0 * dx * dx));
    let top = state.active.min(state.n());
    u.iter()
        .enumerate()
        .map(|(f, arr)| {
            let e = state.extend(arr, parity(state.ansatz.class, f));
            (0..=top).map(|i| RadialJet::new(arr[i], d1(&e, i, inv), d2(&e, i, inv2))).collect()
        })
        .collect()
}

/// numerator/s² on the grid, with the axis and pole values taken as limits.
///
/// A smooth function matching the end values (even numerators) or end slopes
/// (odd numerators) is subtracted first; in the continuum it vanishes, and on
/// the grid it removes the O(Δ⁴) end error that would otherwise be amplified
/// by 1/s² near the axis.
fn quotients(state: &EquivariantState, num: &[f64], par: f64) -> Vec<f64> {
    let n = state.n();
    let top = state.active.min(n);
    let dx = state.dx();
    let pole = state.has_right_pole();
    // Numerators are only available on the active region; pad for extension.
    let mut full = vec![0.0; n + 1];
    full[..=top].copy_from_slice(&num[..=top]);
    if !pole {
        for v in full.iter_mut().skip(top + 1) {
            *v = num[top];
        }
    }
    let e = extend(&full, par, pole);
    let slope = |i: usize| d1(&e, i, 1.0 / (12.0 * dx));
    let basis: Box<dyn Fn(f64) -> f64> = match (par > 0.0, pole) {
        (true, false) => {
            let q0 = full[0];
            Box::new(move |_| q0)
        }
        (true, true) => {
            let (c0, c1) = (0.5 * (full[0] + full[n]), 0.5 * (full[0] - full[n]));
            Box::new(move |r: f64| c0 + c1 * r.cos())
        }
        (false, false) => {
            let m = slope(0);
            Box::new(move |r| m * r)
        }
        (false, true) => {
            let (m0, mp) = (slope(0), slope(n));
            let (al, be) = (0.5 * (m0 - mp), 0.5 * (m0 + mp));
            Box::new(move |r: f64| r.sin() * (al + be * r.cos()))
        }
    };
    let reduced: Vec<f64> = (0..=n).map(|i| full[i] - basis(i as f64 * dx)).collect();
    let er = extend(&reduced, par, pole);
    let inv2 = 1.0 / (12.0 * dx * dx);
    (0..=top)
        .map(|i| {
            let at_end = i == 0 || (pole && i == n);
            if at_end {
                if par > 0.0 {
                    0.5 * d2(&er, i, inv2)
                } else {
                    0.0
                }
            } else {
                let s = state.background.warp(i as f64 * dx);
                reduced[i] / (s * s)
            }
        })
        .collect()
}

/// Time derivatives (q̇, ṗ) of the reduced first-order system, without
/// dissipation.
pub fn reduced_rhs(state: &EquivariantState) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    state.check_invariants()?;
    Ok(rhs_with_dissipation(state, 0.0))
}

fn rhs_with_dissipation(state: &EquivariantState, sigma: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let class = state.ansatz.class;
    let bg = state.background;
    let nf = state.q.len();
    let n = state.n();
    let top = state.active.min(n);
    let jets = grid_jets(state, &state.q);
    let mut nums = vec![vec![0.0; top + 1]; 4];
    let mut buf = vec![RadialJet::default(); nf];
    for i in 0..=top {
        for f in 0..nf {
            buf[f] = jets[f][i];
        }
        let nm = numerators(bg, class, state.rho(i), &buf);
        for slot in 0..4 {
            nums[slot][i] = nm[slot];
        }
    }
    let slots = if class == Ansatz::Hedgehog { 4 } else { 1 };
    let mut quot = vec![vec![0.0; top + 1]; 4];
    for slot in 0..slots {
        quot[slot] = quotients(state, &nums[slot], numerator_parity(class, slot));
    }
    let mut dq = vec![vec![0.0; n + 1]; nf];
    let mut dp = vec![vec![0.0; n + 1]; nf];
    for i in 0..=top {
        for f in 0..nf {
            buf[f] = jets[f][i];
        }
        let qv = [quot[0][i], quot[1][i], quot[2][i], quot[3][i]];
        let acc = accelerations(bg, class, state.lambda, &buf, &qv);
        for f in 0..nf {
            dq[f][i] = state.p[f][i];
            dp[f][i] = acc[f];
        }
    }
    if class == Ansatz::Hedgehog {
        // Keep a = k' at the ends: the end rows follow the k rows.
        let (l0, ln) = end_slopes(state.dx(), n);
        dq[2][0] = l0(&dq[1]);
        dp[2][0] = l0(&dp[1]);
        if state.has_right_pole() {
            dq[2][n] = ln(&dq[1]);
            dp[2][n] = ln(&dp[1]);
        }
    }
    if sigma > 0.0 {
        let c = sigma / (64.0 * state.dx());
        let dtop = if state.has_right_pole() { top } else { top.min(n - GHOSTS) };
        for f in 0..nf {
            let par = parity(class, f);
            let eq = state.extend(&state.q[f], par);
            let ep = state.extend(&state.p[f], par);
            for i in 0..=dtop {
                dq[f][i] += c * d6(&eq, i);
                dp[f][i] += c * d6(&ep, i);
            }
        }
    }
    (dq, dp)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// dt/Δρ.
    pub cfl: f64,
    pub t_end: f64,
    /// Kreiss–Oliger strength.
    #[serde(default)]
    pub sigma: f64,
    /// Steps between stored snapshots.
    pub cadence: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(Error::Config(format!("cfl must lie in (0, {MAX_CFL}], got {}", self.cfl)));
        }
        if !(0.0..=MAX_SIGMA).contains(&self.sigma) {
            return Err(Error::Config(format!("sigma must lie in [0, {MAX_SIGMA}], got {}", self.sigma)));
        }
        if !self.t_end.is_finite() {
            return Err(Error::Config("t_end must be finite".into()));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence must be at least 1".into()));
        }
        Ok(())
    }
}

fn axpy(dst: &mut [Vec<f64>], a: f64, x: &[Vec<f64>]) {
    for (d, s) in dst.iter_mut().zip(x) {
        for (u, v) in d.iter_mut().zip(s) {
            *u += a * v;
        }
    }
}

/// One RK4 step of size dt (negative dt integrates backwards).
pub fn step(state: &EquivariantState, dt: f64) -> Result<EquivariantState> {
    step_with(state, dt, 0.0)
}

/// RK4 step with Kreiss–Oliger dissipation of strength σ.
pub fn step_with(state: &EquivariantState, dt: f64, sigma: f64) -> Result<EquivariantState> {
    let limit = MAX_CFL * state.dx();
    if !(dt.abs() <= limit * (1.0 + 1e-12)) {
        return Err(Error::Cfl { dt, limit });
    }
    if !(0.0..=MAX_SIGMA).contains(&sigma) {
        return Err(Error::Config(format!("sigma must lie in [0, {MAX_SIGMA}], got {sigma}")));
    }
    let stage = |base: &EquivariantState, k: &(Vec<Vec<f64>>, Vec<Vec<f64>>), h: f64| {
        let mut s = base.clone();
        axpy(&mut s.q, h, &k.0);
        axpy(&mut s.p, h, &k.1);
        s.time = base.time + h;
        s
    };
    let k1 = rhs_with_dissipation(state, sigma);
    let s2 = stage(state, &k1, 0.5 * dt);
    let k2 = rhs_with_dissipation(&s2, sigma);
    let s3 = stage(state, &k2, 0.5 * dt);
    let k3 = rhs_with_dissipation(&s3, sigma);
    let s4 = stage(state, &k3, dt);
    let k4 = rhs_with_dissipation(&s4, sigma);
    let mut out = state.clone();
    for (kk, w) in [(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)] {
        axpy(&mut out.q, w * dt / 6.0, &kk.0);
        axpy(&mut out.p, w * dt / 6.0, &kk.1);
    }
    out.time = state.time + dt;
    out.enforce_parity();
    for (f, (qa, pa)) in out.q.iter().zip(&out.p).enumerate() {
        if let Some(i) = qa.iter().zip(pa).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::NonFinite { time: out.time, index: i, field: out.field_names()[f].to_string() });
        }
    }
    if out.background == Background::Minkowski {
        // Staircase excision: one node per Δρ of elapsed time.
        let lost = (out.time.abs() / out.dx() - 1e-9).ceil().max(0.0) as usize;
        let top = (out.n() - GHOSTS).saturating_sub(lost);
        if top < 2 {
            return Err(Error::Domain(format!("domain of dependence exhausted at t = {}", out.time)));
        }
        out.active = out.active.min(top);
    }
    Ok(out)
}

/// Summary of a completed run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub steps: usize,
    pub dt: f64,
    pub final_time: f64,
    pub snapshots: usize,
}

/// Evolves to `config.t_end`, storing a snapshot every `cadence` steps (and
/// the final state) and passing each to `sink`.
pub fn run(
    state: &EquivariantState,
    config: &RunConfig,
    sink: &mut dyn FnMut(&EquivariantState) -> Result<()>,
) -> Result<(Trajectory, RunLog)> {
    config.validate()?;
    state.check_invariants()?;
    let span = config.t_end - state.time;
    let hmax = config.cfl * state.dx();
    let steps = (span.abs() / hmax - 1e-12).ceil().max(0.0) as usize;
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };
    let mut traj = Trajectory::new(state.clone());
    sink(state)?;
    let mut cur = state.clone();
    for k in 1..=steps {
        cur = step_with(&cur, dt, config.sigma)?;
        if k == steps {
            cur.time = config.t_end;
        }
        if k % config.cadence == 0 || k == steps {
            sink(&cur)?;
            traj.push(cur.clone());
        }
    }
    let log = RunLog { steps, dt, final_time: cur.time, snapshots: traj.len() };
    Ok((traj, log))
}

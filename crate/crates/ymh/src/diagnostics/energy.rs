//! Energies: pointwise densities, ball and sphere quadratures, and the
//! reduced radial integrals used along evolutions.

use super::EnergyBreakdown;
use crate::algebra::LieElement;
use crate::error::{Error, Result};
use crate::evolve::rhs::RadialJet;
use crate::evolve::{extend, grid_jets, EquivariantState};
use crate::fields::{electric_magnetic, Ansatz, PointFields, G};
use crate::geometry::{christoffels, Background, Chart, ChartPoint};
use crate::oracle::Oracle;
use crate::quadrature::{gauss_legendre, lagrange_weights, sphere_rule, CompositeRule};
use crate::sampler::FieldSampler;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Energy density ½(|E|² + |B|² + |π|² + |Dφ|² [+ |φ|²] + ½λ|φ|⁴) at `p`,
/// split into its parts. The mass term is present on the cylinder only.
pub fn energy_density(pf: &PointFields, p: &ChartPoint, lambda: f64) -> Result<EnergyBreakdown> {
    let (e, b) = electric_magnetic(pf, p)?;
    let scale: [f64; 3] = match p.chart {
        Chart::MinkowskiCartesian => [1.0; 3],
        Chart::MinkowskiSpherical | Chart::Cylinder => {
            let s = p.areal_radius();
            [1.0, 1.0 / s, 1.0 / (s * p.x[2].sin())]
        }
        Chart::DeSitter => return Err(Error::Domain("energy density is defined on the static frames".into())),
    };
    let p2 = pf.phi.norm_sq();
    let sum = |v: &[LieElement; 3]| v.iter().map(|x| x.norm_sq()).sum::<f64>();
    let dphi: f64 = (0..3).map(|i| (scale[i] * pf.dphi[i + 1]).norm_sq()).sum();
    let mass = if p.chart == Chart::Cylinder { 0.5 * p2 } else { 0.0 };
    Ok(EnergyBreakdown::from_parts(
        0.5 * sum(&e),
        0.5 * sum(&b),
        0.5 * pf.dphi[0].norm_sq(),
        0.5 * dphi,
        mass,
        0.25 * lambda * p2 * p2,
    ))
}

/// Nodes of the ball quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRule {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for BallRule {
    fn default() -> Self {
        BallRule { radial: 48, polar: 24, azimuthal: 24 }
    }
}

/// Energy in the Minkowski ball of `radius` about the spatial `center` at
/// time `t`: Gauss–Legendre in r and cos θ, trapezoid in φ.
pub fn energy_ball<S: FieldSampler + ?Sized>(
    s: &S,
    center: [f64; 3],
    radius: f64,
    t: f64,
    lambda: f64,
    rule: BallRule,
) -> Result<EnergyBreakdown> {
    if !(radius >= 0.0) {
        return Err(Error::Domain(format!("ball radius must be non-negative, got {radius}")));
    }
    let mut total = EnergyBreakdown::default();
    if radius == 0.0 {
        return Ok(total);
    }
    let (xr, wr) = gauss_legendre(rule.radial);
    let sph = sphere_rule(rule.polar, rule.azimuthal);
    for (x, w) in xr.iter().zip(&wr) {
        let r = 0.5 * radius * (x + 1.0);
        let wrad = 0.5 * radius * w * r * r;
        for &(th, ph, wa) in &sph {
            let (st, ct) = th.sin_cos();
            let q = ChartPoint::cartesian(
                t,
                center[0] + r * st * ph.cos(),
                center[1] + r * st * ph.sin(),
                center[2] + r * ct,
            );
            let d = energy_density(&s.sample(&q)?, &q, lambda)?;
            total.accumulate(&d, wrad * wa);
        }
    }
    Ok(total)
}

/// Radial density of the reduced energy at one node, angular integral (4π)
/// included.
pub fn reduced_density(
    bg: Background,
    class: Ansatz,
    lambda: f64,
    rho: f64,
    q: &[RadialJet],
    p: &[f64],
) -> EnergyBreakdown {
    let s = bg.warp(rho);
    let m = bg.conformal_mass();
    let s2 = s * s;
    let ig2 = 1.0 / (G * G);
    let four_pi = 4.0 * PI;
    let e = match class {
        Ansatz::Hedgehog => {
            let (w, k, a, h) = (q[0], q[1], q[2], q[3]);
            let chi2 = w.v * w.v + k.v * k.v;
            let fw = w.d1 + a.v * k.v;
            let fk = k.d1 - a.v * w.v;
            // (1 − |χ|²)²/s² vanishes at the ends, where 1 − |χ|² = O(s²).
            let pot = if s2 > 1e-24 { (1.0 - chi2).powi(2) / s2 } else { 0.0 };
            EnergyBreakdown::from_parts(
                0.5 * ig2 * s2 * p[2] * p[2] + ig2 * (p[0] * p[0] + p[1] * p[1]),
                ig2 * (fw * fw + fk * fk) + 0.5 * ig2 * pot,
                0.5 * s2 * p[3] * p[3],
                0.5 * s2 * h.d1 * h.d1 + h.v * h.v * chi2,
                0.5 * m * s2 * h.v * h.v,
                0.25 * lambda * s2 * h.v.powi(4),
            )
        }
        Ansatz::FixedDirection => {
            let c = q[0];
            EnergyBreakdown::from_parts(
                0.0,
                0.0,
                0.5 * s2 * p[0] * p[0],
                0.5 * s2 * c.d1 * c.d1,
                0.5 * m * s2 * c.v * c.v,
                0.25 * lambda * s2 * c.v.powi(4),
            )
        }
    };
    e.scaled(four_pi)
}

/// Reduced radial densities at nodes 0..=active.
pub fn reduced_densities(state: &EquivariantState) -> Vec<EnergyBreakdown> {
    let jets = grid_jets(state, &state.q);
    let nf = state.q.len();
    let top = jets[0].len();
    let mut qb = vec![RadialJet::default(); nf];
    let mut pb = vec![0.0; nf];
    (0..top)
        .map(|i| {
            for f in 0..nf {
                qb[f] = jets[f][i];
                pb[f] = state.p[f][i];
            }
            reduced_density(state.background, state.ansatz.class, state.lambda, state.rho(i), &qb, &pb)
        })
        .collect()
}

/// Ê₀ on the cylinder: trapezoid rule over [0, π], spectrally accurate for
/// the even, pole-regular integrand.
pub fn energy_cylinder(state: &EquivariantState) -> Result<EnergyBreakdown> {
    if state.background != Background::Cylinder {
        return Err(Error::Domain("energy_cylinder needs a cylinder state".into()));
    }
    let dens = reduced_densities(state);
    let n = dens.len() - 1;
    let dx = state.dx();
    let mut out = EnergyBreakdown::default();
    for (i, d) in dens.iter().enumerate() {
        let w = if i == 0 || i == n { 0.5 * dx } else { dx };
        out.accumulate(d, w);
    }
    Ok(out)
}

/// Energy of an equivariant Minkowski state in the centred ball of radius
/// `radius`, by Gauss–Legendre panels over a quartic interpolant of the
/// reduced density.
pub fn energy_reduced_ball(state: &EquivariantState, radius: f64) -> Result<EnergyBreakdown> {
    if state.background != Background::Minkowski {
        return Err(Error::Domain("energy_reduced_ball needs a Minkowski state".into()));
    }
    let valid = state.rho(state.active.saturating_sub(2));
    if radius < 0.0 || radius > valid + 1e-12 {
        return Err(Error::Domain(format!("radius {radius} outside the evolved region [0, {valid}]")));
    }
    let dens = reduced_densities(state);
    let dx = state.dx();
    let parts: Vec<Vec<f64>> = (0..7).map(|k| dens.iter().map(|d| d.part(k)).collect()).collect();
    let ext: Vec<Vec<f64>> = parts.iter().map(|u| extend(u, 1.0, false)).collect();
    let top = dens.len() as isize - 1;
    let interp = |r: f64| -> [f64; 7] {
        let c = (r / dx).round() as isize;
        let lo = (c - 2).clamp(-(crate::evolve::GHOSTS as isize), top - 4);
        let nodes: Vec<f64> = (0..5).map(|j| (lo + j) as f64 * dx).collect();
        let (l, _) = lagrange_weights(&nodes, r);
        let mut out = [0.0; 7];
        for (k, e) in ext.iter().enumerate() {
            out[k] = (0..5).map(|j| l[j as usize] * e[(lo + j + crate::evolve::GHOSTS as isize) as usize]).sum();
        }
        out
    };
    let panels = ((radius / dx).ceil() as usize).max(1);
    let rule = CompositeRule::new(0.0, radius, panels, 4);
    let mut acc = [0.0; 7];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = interp(x);
        for k in 0..7 {
            acc[k] += w * v[k];
        }
    }
    Ok(EnergyBreakdown::from_parts(acc[0], acc[1], acc[2], acc[3], acc[4], acc[5]))
}

/// Approximate Sobolev energies Ê₁, Ê₂ of a cylinder solution at time τ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SobolevEnergies {
    pub e1: f64,
    pub e2: f64,
}

const SPATIAL: [usize; 3] = [1, 2, 3];

/// Ê₁ and Ê₂ at τ for an equivariant cylinder sampler. The densities depend
/// on ζ alone, so they are evaluated on the equator θ = π/2, φ = 0 and
/// integrated against 4π sin²ζ by Gauss–Legendre in ζ. `sampler_at` gives
/// the sampler used at each node, so interpolated runs can anchor their
/// stencils there.
pub fn sobolev_energies<S, F>(sampler_at: F, tau: f64, nodes: usize, oracle: &Oracle) -> Result<SobolevEnergies>
where
    S: FieldSampler,
    F: Fn(&ChartPoint) -> S,
{
    let (xs, ws) = gauss_legendre(nodes);
    let mut out = SobolevEnergies::default();
    for (x, w) in xs.iter().zip(&ws) {
        let zeta = 0.5 * PI * (x + 1.0);
        let p = ChartPoint::cylinder(tau, zeta, 0.5 * PI, 0.0);
        let (d1, d2) = sobolev_densities(&sampler_at(&p), &p, oracle)?;
        let jac = 0.5 * PI * w * 4.0 * PI * zeta.sin().powi(2);
        out.e1 += jac * d1;
        out.e2 += jac * d2;
    }
    Ok(out)
}

/// Spatial inverse metric of S³ (positive) at the chart point.
fn s3_inverse(x: &[f64; 4]) -> [f64; 4] {
    let s2 = x[1].sin().powi(2);
    [0.0, 1.0, 1.0 / s2, 1.0 / (s2 * x[2].sin().powi(2))]
}

fn one_form(pf: &PointFields, e: bool) -> Vec<f64> {
    let mut v = Vec::with_capacity(9);
    for i in SPATIAL {
        let x = if e { pf.f.get(0, i) } else { pf.a[i] };
        v.extend_from_slice(&x.c);
    }
    v
}

/// ∇_i X_j for a Lie-valued spatial one-form given by `f` (9 slots, j-major).
fn nabla_one_form<F>(p: &ChartPoint, oracle: &Oracle, f: &F) -> Result<Vec<f64>>
where
    F: Fn(&ChartPoint) -> Result<Vec<f64>>,
{
    let gam = christoffels(Chart::Cylinder, &p.x)?;
    let x0 = f(p)?;
    let mut out = vec![0.0; 27];
    for (ii, &i) in SPATIAL.iter().enumerate() {
        let d = oracle.d1_fn(p, i, f)?;
        for (jj, &j) in SPATIAL.iter().enumerate() {
            for c in 0..3 {
                let mut v = d[3 * jj + c];
                for (kk, &k) in SPATIAL.iter().enumerate() {
                    v -= gam[k][i][j] * x0[3 * kk + c];
                }
                out[9 * ii + 3 * jj + c] = v;
            }
        }
    }
    Ok(out)
}

/// ∇_i∇_j X_k from nested differences of ∇X.
fn nabla2_one_form<F>(p: &ChartPoint, oracle: &Oracle, f: &F) -> Result<Vec<f64>>
where
    F: Fn(&ChartPoint) -> Result<Vec<f64>>,
{
    let gam = christoffels(Chart::Cylinder, &p.x)?;
    let inner = |q: &ChartPoint| nabla_one_form(q, oracle, f);
    let t0 = inner(p)?;
    let mut out = vec![0.0; 81];
    for (ii, &i) in SPATIAL.iter().enumerate() {
        let d = oracle.d1_fn(p, i, inner)?;
        for (jj, &j) in SPATIAL.iter().enumerate() {
            for (kk, &k) in SPATIAL.iter().enumerate() {
                for c in 0..3 {
                    let mut v = d[9 * jj + 3 * kk + c];
                    for (mm, &m) in SPATIAL.iter().enumerate() {
                        v -= gam[m][i][j] * t0[9 * mm + 3 * kk + c];
                        v -= gam[m][i][k] * t0[9 * jj + 3 * mm + c];
                    }
                    out[27 * ii + 9 * jj + 3 * kk + c] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Squared S³ norm of a Lie-valued covariant tensor of the given rank.
fn tensor_norm_sq(v: &[f64], rank: usize, hinv: &[f64; 4]) -> f64 {
    let mut sum = 0.0;
    let count = 3usize.pow(rank as u32);
    for idx in 0..count {
        let mut w = 1.0;
        let mut r = idx;
        for _ in 0..rank {
            w *= hinv[1 + r % 3];
            r /= 3;
        }
        for c in 0..3 {
            sum += w * v[3 * idx + c].powi(2);
        }
    }
    sum
}

fn sobolev_densities<S: FieldSampler + ?Sized>(s: &S, p: &ChartPoint, oracle: &Oracle) -> Result<(f64, f64)> {
    let hinv = s3_inverse(&p.x);
    let pf = s.sample(p)?;
    let a = |q: &ChartPoint| -> Result<Vec<f64>> { Ok(one_form(&s.sample(q)?, false)) };
    let e = |q: &ChartPoint| -> Result<Vec<f64>> { Ok(one_form(&s.sample(q)?, true)) };
    let phi = |q: &ChartPoint| -> Result<Vec<f64>> { Ok(s.sample(q)?.phi.c.to_vec()) };
    let pi = |q: &ChartPoint| -> Result<Vec<f64>> { Ok(s.sample(q)?.dphi[0].c.to_vec()) };
    // ∇φ as a one-form: plain partial derivatives.
    let grad = |f: &dyn Fn(&ChartPoint) -> Result<Vec<f64>>, q: &ChartPoint| -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(9);
        for i in SPATIAL {
            v.extend(oracle.d1_fn(q, i, f)?);
        }
        Ok(v)
    };
    let a0 = a(p)?;
    let e0 = e(p)?;
    let da = nabla_one_form(p, oracle, &a)?;
    let dphi = grad(&phi, p)?;
    let e1 = 0.5
        * (tensor_norm_sq(&e0, 1, &hinv)
            + tensor_norm_sq(&da, 2, &hinv)
            + tensor_norm_sq(&a0, 1, &hinv)
            + pf.dphi[0].norm_sq()
            + tensor_norm_sq(&dphi, 1, &hinv)
            + pf.phi.norm_sq());
    let de = nabla_one_form(p, oracle, &e)?;
    let dda = nabla2_one_form(p, oracle, &a)?;
    let dpi = grad(&pi, p)?;
    let grad_phi = |q: &ChartPoint| grad(&phi, q);
    let ddphi = nabla_one_form(p, oracle, &grad_phi)?;
    let e2 = 0.5
        * (tensor_norm_sq(&de, 2, &hinv)
            + tensor_norm_sq(&dda, 3, &hinv)
            + tensor_norm_sq(&dpi, 1, &hinv)
            + tensor_norm_sq(&ddphi, 2, &hinv));
    Ok((e1, e2))
}

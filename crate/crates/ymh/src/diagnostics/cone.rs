//! Functionals on the backward lightcone of an apex: the cone energy
//! identity, the local energy, the L² bound for φ on the cone and the
//! sup-norm profile over the shrinking balls.

use super::energy::{energy_ball, BallRule};
use crate::cronstrom::ConeRegion;
use crate::error::{Error, Result};
use crate::fields::PointFields;
use crate::geometry::{gamma_norm_one_form, gamma_norm_two_form, Chart, ChartPoint, Vec4};
use crate::quadrature::{gauss_legendre, sphere_rule};
use crate::sampler::FieldSampler;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Product rule on K(t₀): Gauss–Legendre in r, Gauss–Legendre in cos θ and
/// the trapezoid rule in φ about the apex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRule {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for ConeRule {
    fn default() -> Self {
        ConeRule { radial: 64, polar: 32, azimuthal: 64 }
    }
}

impl ConeRule {
    pub fn ball(&self) -> BallRule {
        BallRule { radial: self.radial, polar: self.polar, azimuthal: self.azimuthal }
    }
}

/// Apex-centred null frame at direction ω: l = (−1, ω), n = (1, ω) and the
/// unit angular vectors, as Cartesian components.
fn cone_frame(th: f64, ph: f64) -> [Vec4; 4] {
    let (st, ct) = th.sin_cos();
    let (sp, cp) = ph.sin_cos();
    [
        [-1.0, st * cp, st * sp, ct],
        [1.0, st * cp, st * sp, ct],
        [0.0, ct * cp, ct * sp, -st],
        [0.0, -sp, cp, 0.0],
    ]
}

/// Point on K at apex-distance r in direction (θ, φ).
fn cone_point(cone: &ConeRegion, r: f64, th: f64, ph: f64) -> ChartPoint {
    let (st, ct) = th.sin_cos();
    let a = cone.apex.x;
    ChartPoint::cartesian(a[0] - r, a[1] + r * st * ph.cos(), a[2] + r * st * ph.sin(), a[3] + r * ct)
}

fn contract2(pf: &PointFields, x: &Vec4, y: &Vec4) -> crate::algebra::LieElement {
    let mut s = crate::algebra::LieElement::ZERO;
    for a in 0..4 {
        for b in 0..4 {
            if a != b && x[a] != 0.0 && y[b] != 0.0 {
                s += (x[a] * y[b]) * pf.f.get(a, b);
            }
        }
    }
    s
}

fn contract1(v: &[crate::algebra::LieElement; 4], x: &Vec4) -> crate::algebra::LieElement {
    let mut s = crate::algebra::LieElement::ZERO;
    for a in 0..4 {
        s += x[a] * v[a];
    }
    s
}

/// ½(¼|F_ln|² + |F_lA|² + ½|F_AB|² + |D_lφ|² + |D_Aφ|² + ½λ|φ|⁴) for
/// Cartesian fields in the null frame of direction (θ, φ).
pub fn cone_flux_density(pf: &PointFields, th: f64, ph: f64, lambda: f64) -> f64 {
    let [l, n, e1, e2] = cone_frame(th, ph);
    let fln = contract2(pf, &l, &n).norm_sq();
    let fla = contract2(pf, &l, &e1).norm_sq() + contract2(pf, &l, &e2).norm_sq();
    // ½Σ_{A,B}|F_AB|² counts the single independent pair once.
    let fab = contract2(pf, &e1, &e2).norm_sq();
    let dl = contract1(&pf.dphi, &l).norm_sq();
    let da = contract1(&pf.dphi, &e1).norm_sq() + contract1(&pf.dphi, &e2).norm_sq();
    let p2 = pf.phi.norm_sq();
    0.5 * (0.25 * fln + fla + fab + dl + da + 0.5 * lambda * p2 * p2)
}

fn cone_integral<S, F>(s: &S, cone: &ConeRegion, rule: ConeRule, f: F) -> Result<f64>
where
    S: FieldSampler + ?Sized,
    F: Fn(&PointFields, f64, f64) -> f64 + Sync,
{
    let (xr, wr) = gauss_legendre(rule.radial);
    let sph = sphere_rule(rule.polar, rule.azimuthal);
    let t0 = cone.t0;
    let parts: Result<Vec<f64>> = xr
        .par_iter()
        .zip(wr.par_iter())
        .map(|(x, w)| {
            let r = 0.5 * t0 * (x + 1.0);
            let wrad = 0.5 * t0 * w * r * r;
            let mut acc = 0.0;
            for &(th, ph, wa) in &sph {
                let pf = s.sample(&cone_point(cone, r, th, ph))?;
                acc += wa * f(&pf, th, ph);
            }
            Ok(wrad * acc)
        })
        .collect();
    Ok(parts?.iter().sum())
}

fn check_apex(cone: &ConeRegion) -> Result<()> {
    if cone.apex.chart != Chart::MinkowskiCartesian {
        return Err(Error::Domain("cone diagnostics need a Cartesian Minkowski apex".into()));
    }
    Ok(())
}

/// Both sides of the cone energy identity and |lhs − rhs|/max(lhs, ε).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Energy in B(r₀) at the base against the flux through K(t₀).
pub fn cone_energy_identity<S: FieldSampler + ?Sized>(s: &S, cone: &ConeRegion, lambda: f64, rule: ConeRule) -> Result<ConeIdentity> {
    check_apex(cone)?;
    let a = cone.apex.x;
    let lhs = energy_ball(s, [a[1], a[2], a[3]], cone.t0, a[0] - cone.t0, lambda, rule.ball())?.total;
    let rhs = cone_integral(s, cone, rule, |pf, th, ph| cone_flux_density(pf, th, ph, lambda))?;
    let residual = (lhs - rhs).abs() / lhs.max(f64::EPSILON);
    Ok(ConeIdentity { lhs, rhs, residual })
}

/// Times t_base + s_k, s_k = k t₀/levels, k = 0..=levels.
fn levels(cone: &ConeRegion, levels: usize) -> Result<Vec<f64>> {
    if levels == 0 {
        return Err(Error::Config("the cone time grid needs at least one level".into()));
    }
    Ok((0..=levels).map(|k| k as f64 * cone.t0 / levels as f64).collect())
}

/// sup_s E_{B(x, t₀ − s)}(t_base + s) over `levels` equal steps in s.
pub fn local_energy<S: FieldSampler + ?Sized>(s: &S, cone: &ConeRegion, lambda: f64, steps: usize, rule: BallRule) -> Result<f64> {
    check_apex(cone)?;
    let a = cone.apex.x;
    let base = a[0] - cone.t0;
    let es: Result<Vec<f64>> = levels(cone, steps)?
        .into_par_iter()
        .map(|sk| Ok(energy_ball(s, [a[1], a[2], a[3]], cone.t0 - sk, base + sk, lambda, rule)?.total))
        .collect();
    Ok(es?.into_iter().fold(0.0, f64::max))
}

/// ‖φ‖_{L²(K)} against the two bounds of the cone L² lemma.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2ConeBound {
    pub cone_norm: f64,
    pub ball_norm: f64,
    pub local_energy: f64,
    /// ‖φ‖_{L²(B)} + 2E_loc^{1/2}t₀.
    pub bound1: f64,
    /// C E_loc^{1/2} t₀^{3/4}(1 + t₀^{1/4}), present for λ ≠ 0.
    pub bound2: Option<f64>,
    /// Smallest C for which the second bound holds.
    pub c_needed: f64,
    pub pass1: bool,
    pub pass2: bool,
}

/// Evaluates the L² lemma on `cone` with the constant `c` in the second
/// bound. E_loc comes from `steps` levels.
pub fn l2_cone_bound<S: FieldSampler + ?Sized>(
    s: &S,
    cone: &ConeRegion,
    lambda: f64,
    c: f64,
    steps: usize,
    rule: ConeRule,
) -> Result<L2ConeBound> {
    check_apex(cone)?;
    let a = cone.apex.x;
    let cone_norm = cone_integral(s, cone, rule, |pf, _, _| pf.phi.norm_sq())?.sqrt();
    let ball_norm = phi_ball_norm(s, [a[1], a[2], a[3]], cone.t0, a[0] - cone.t0, rule.ball())?;
    let e_loc = local_energy(s, cone, lambda, steps, rule.ball())?;
    let t0 = cone.t0;
    let bound1 = ball_norm + 2.0 * e_loc.sqrt() * t0;
    let shape = e_loc.sqrt() * t0.powf(0.75) * (1.0 + t0.powf(0.25));
    let c_needed = if shape > 0.0 { cone_norm / shape } else { 0.0 };
    let bound2 = (lambda != 0.0).then_some(c * shape);
    Ok(L2ConeBound {
        cone_norm,
        ball_norm,
        local_energy: e_loc,
        bound1,
        bound2,
        c_needed,
        pass1: cone_norm <= bound1,
        pass2: bound2.map_or(true, |b| cone_norm <= b),
    })
}

/// ‖φ‖_{L²(B(center, radius))} at time t.
pub fn phi_ball_norm<S: FieldSampler + ?Sized>(s: &S, center: [f64; 3], radius: f64, t: f64, rule: BallRule) -> Result<f64> {
    let (xr, wr) = gauss_legendre(rule.radial);
    let sph = sphere_rule(rule.polar, rule.azimuthal);
    let mut acc = 0.0;
    for (x, w) in xr.iter().zip(&wr) {
        let r = 0.5 * radius * (x + 1.0);
        let wrad = 0.5 * radius * w * r * r;
        for &(th, ph, wa) in &sph {
            let st = th.sin();
            let q = ChartPoint::cartesian(t, center[0] + r * st * ph.cos(), center[1] + r * st * ph.sin(), center[2] + r * th.cos());
            acc += wrad * wa * s.sample(&q)?.phi.norm_sq();
        }
    }
    Ok(acc.sqrt())
}

/// Nodes of the discrete sup over a ball: midpoint radii times a sphere rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupRule {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for SupRule {
    fn default() -> Self {
        SupRule { radial: 24, polar: 12, azimuthal: 12 }
    }
}

/// One entry of N(s) = ‖F(s)‖²_∞ + ‖Dφ(s)‖²_∞ on B(x, t₀ − s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupSample {
    pub s: f64,
    pub time: f64,
    pub radius: f64,
    pub f_sq: f64,
    pub dphi_sq: f64,
    pub n: f64,
}

/// Γ-norm sup profile over the shrinking balls of the cone.
pub fn supnorm_profile<S: FieldSampler + ?Sized>(s: &S, cone: &ConeRegion, steps: usize, rule: SupRule) -> Result<Vec<SupSample>> {
    check_apex(cone)?;
    let a = cone.apex.x;
    let base = a[0] - cone.t0;
    let sph = sphere_rule(rule.polar, rule.azimuthal);
    levels(cone, steps)?
        .into_par_iter()
        .map(|sk| {
            let radius = cone.t0 - sk;
            let t = base + sk;
            let (mut fm, mut dm): (f64, f64) = (0.0, 0.0);
            for j in 0..rule.radial {
                let r = (j as f64 + 0.5) / rule.radial as f64 * radius;
                for &(th, ph, _) in &sph {
                    let st = th.sin();
                    let q = ChartPoint::cartesian(t, a[1] + r * st * ph.cos(), a[2] + r * st * ph.sin(), a[3] + r * th.cos());
                    let pf = s.sample(&q)?;
                    fm = fm.max(gamma_norm_two_form(Chart::MinkowskiCartesian, &q.x, &pf.f).powi(2));
                    dm = dm.max(gamma_norm_one_form(Chart::MinkowskiCartesian, &q.x, &pf.dphi).powi(2));
                }
            }
            Ok(SupSample { s: sk, time: t, radius, f_sq: fm, dphi_sq: dm, n: fm + dm })
        })
        .collect()
}

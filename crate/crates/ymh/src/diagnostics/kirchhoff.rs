//! Lightcone representation of the fixed-direction scalar sector on
//! Minkowski space: φ = u⁽⁰⁾ + G∗f with □φ = f = −λ|φ|²φ, u⁽⁰⁾ from the
//! Kirchhoff formula on the cone base and G = δ(t − r)/(4πr).

use super::cone::ConeRule;
use crate::algebra::LieElement;
use crate::error::{Error, Result};
use crate::geometry::{Chart, ChartPoint};
use crate::quadrature::{gauss_legendre, sphere_rule};
use crate::sampler::FieldSampler;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The three terms of the representation at p and their mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightconeRepresentation {
    pub value: LieElement,
    pub free: LieElement,
    pub source: LieElement,
    pub residual: f64,
}

/// u⁽⁰⁾(p) = M[φ + R ω·∇φ] + R M[π] over the sphere of radius R = t_p − t_base
/// about x_p, using the data at t_base.
pub fn kirchhoff_free<S: FieldSampler + ?Sized>(s: &S, p: &ChartPoint, t_base: f64, rule: ConeRule) -> Result<LieElement> {
    let radius = p.x[0] - t_base;
    let mut out = LieElement::ZERO;
    for (th, ph, w) in sphere_rule(rule.polar, rule.azimuthal) {
        let (st, ct) = th.sin_cos();
        let om = [st * ph.cos(), st * ph.sin(), ct];
        let q = ChartPoint::cartesian(t_base, p.x[1] + radius * om[0], p.x[2] + radius * om[1], p.x[3] + radius * om[2]);
        let pf = s.sample(&q)?;
        let mut v = pf.phi + radius * pf.dphi[0];
        for (i, oi) in om.iter().enumerate() {
            v += (radius * oi) * pf.dphi[i + 1];
        }
        out += (w / (4.0 * PI)) * v;
    }
    Ok(out)
}

/// (G∗f)(p) = (1/4π)∫_K r f dr dΩ over the backward cone down to t_base.
pub fn retarded_source<S: FieldSampler + ?Sized>(s: &S, p: &ChartPoint, t_base: f64, lambda: f64, rule: ConeRule) -> Result<LieElement> {
    let t0 = p.x[0] - t_base;
    let mut out = LieElement::ZERO;
    if lambda == 0.0 {
        return Ok(out);
    }
    let (xr, wr) = gauss_legendre(rule.radial);
    let sph = sphere_rule(rule.polar, rule.azimuthal);
    for (x, w) in xr.iter().zip(&wr) {
        let r = 0.5 * t0 * (x + 1.0);
        let wrad = 0.5 * t0 * w * r / (4.0 * PI);
        for &(th, ph, wa) in &sph {
            let st = th.sin();
            let q = ChartPoint::cartesian(p.x[0] - r, p.x[1] + r * st * ph.cos(), p.x[2] + r * st * ph.sin(), p.x[3] + r * th.cos());
            let phi = s.sample(&q)?.phi;
            out += (-wrad * wa * lambda * phi.norm_sq()) * phi;
        }
    }
    Ok(out)
}

/// |φ(p) − u⁽⁰⁾(p) − (G∗f)(p)| for a fixed-direction Minkowski sampler with
/// data at t_base. A point on the base has a degenerate cone and residual 0.
pub fn scalar_lightcone_representation<S: FieldSampler + ?Sized>(
    s: &S,
    p: &ChartPoint,
    t_base: f64,
    lambda: f64,
    rule: ConeRule,
) -> Result<LightconeRepresentation> {
    if p.chart != Chart::MinkowskiCartesian {
        return Err(Error::Domain("the lightcone representation needs a Cartesian Minkowski point".into()));
    }
    if p.x[0] < t_base {
        return Err(Error::Domain(format!("point at t = {} lies before the data at t = {t_base}", p.x[0])));
    }
    let value = s.sample(p)?.phi;
    if p.x[0] == t_base {
        return Ok(LightconeRepresentation { value, free: value, source: LieElement::ZERO, residual: 0.0 });
    }
    let free = kirchhoff_free(s, p, t_base, rule)?;
    let source = retarded_source(s, p, t_base, lambda, rule)?;
    let residual = (value - free - source).norm();
    Ok(LightconeRepresentation { value, free, source, residual })
}

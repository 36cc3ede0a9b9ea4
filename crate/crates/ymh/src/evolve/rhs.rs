//! Symmetry-reduced temporal-gauge equations.
//!
//! Hedgehog profiles (w, k, a, h) with χ = w + ik and warp s(ρ):
//!
//!   ä = [2(w k' − k w') − 2a|χ|²] / s²
//!   ẅ = (w' + a k)' + a(k' − a w) + w(1 − |χ|²)/s² − g²h²w
//!   k̈ = (k' − a w)' − a(w' + a k) + k(1 − |χ|²)/s² − g²h²k
//!   ḧ = h'' + [2 s s' h' − 2h|χ|²]/s² − m h − λh³
//!
//! and the Gauss constraint (s²ȧ)' + 2(k ẇ − w k̇) = 0. The fixed-direction
//! scalar obeys c̈ = c'' + 2 s' c'/s − m c − λc³. Here m = R/6 of the
//! background (0 on Minkowski, 1 on the cylinder).
//!
//! Each 1/s² term is split into a numerator, computed pointwise, and a
//! quotient, so that the grid code can take the axis limits while the point
//! form stays usable for off-axis cross-checks.

use crate::error::{Error, Result};
use crate::fields::{Ansatz, G};
use crate::geometry::Background;

/// Value and first two ρ-derivatives of one profile.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RadialJet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl RadialJet {
    pub fn new(v: f64, d1: f64, d2: f64) -> Self {
        RadialJet { v, d1, d2 }
    }
}

/// Number of profiles carried by an ansatz.
pub fn field_count(class: Ansatz) -> usize {
    match class {
        Ansatz::Hedgehog => 4,
        Ansatz::FixedDirection => 1,
    }
}

pub fn field_names(class: Ansatz) -> &'static [&'static str] {
    match class {
        Ansatz::Hedgehog => &["w", "k", "a", "h"],
        Ansatz::FixedDirection => &["c"],
    }
}

/// +1 for profiles even about the axis (and the antipodal pole), −1 for odd.
pub fn parity(class: Ansatz, field: usize) -> f64 {
    match class {
        Ansatz::Hedgehog => [1.0, -1.0, 1.0, -1.0][field],
        Ansatz::FixedDirection => 1.0,
    }
}

/// Parity of the numerator of each 1/s² term.
pub fn numerator_parity(class: Ansatz, slot: usize) -> f64 {
    match class {
        Ansatz::Hedgehog => [1.0, 1.0, -1.0, -1.0][slot],
        Ansatz::FixedDirection => 1.0,
    }
}

fn warp_jet(bg: Background, rho: f64) -> (f64, f64) {
    match bg {
        Background::Minkowski => (rho, 1.0),
        Background::Cylinder => (rho.sin(), rho.cos()),
    }
}

/// Numerators of the 1/s² terms at one point.
pub fn numerators(bg: Background, class: Ansatz, rho: f64, q: &[RadialJet]) -> [f64; 4] {
    let (s, ds) = warp_jet(bg, rho);
    match class {
        Ansatz::Hedgehog => {
            let (w, k, a, h) = (q[0], q[1], q[2], q[3]);
            let chi2 = w.v * w.v + k.v * k.v;
            [
                2.0 * (w.v * k.d1 - k.v * w.d1) - 2.0 * a.v * chi2,
                w.v * (1.0 - chi2),
                k.v * (1.0 - chi2),
                2.0 * s * ds * h.d1 - 2.0 * h.v * chi2,
            ]
        }
        Ansatz::FixedDirection => [2.0 * s * ds * q[0].d1, 0.0, 0.0, 0.0],
    }
}

/// Second time derivatives, in field order, given the profile jets and the
/// quotients numerator/s² (slots: a, w, k, h terms).
pub fn accelerations(bg: Background, class: Ansatz, lambda: f64, q: &[RadialJet], quot: &[f64; 4]) -> [f64; 4] {
    let m = bg.conformal_mass();
    match class {
        Ansatz::Hedgehog => {
            let (w, k, a, h) = (q[0], q[1], q[2], q[3]);
            let g2h2 = G * G * h.v * h.v;
            let fw = w.d1 + a.v * k.v;
            let fk = k.d1 - a.v * w.v;
            [
                w.d2 + a.d1 * k.v + a.v * k.d1 + a.v * fk + quot[1] - g2h2 * w.v,
                k.d2 - a.d1 * w.v - a.v * w.d1 - a.v * fw + quot[2] - g2h2 * k.v,
                quot[0],
                h.d2 + quot[3] - m * h.v - lambda * h.v.powi(3),
            ]
        }
        Ansatz::FixedDirection => {
            let c = q[0];
            [c.d2 + quot[0] - m * c.v - lambda * c.v.powi(3), 0.0, 0.0, 0.0]
        }
    }
}

/// Accelerations at an off-axis point.
pub fn point_rhs(bg: Background, class: Ansatz, lambda: f64, rho: f64, q: &[RadialJet]) -> Result<[f64; 4]> {
    let (s, _) = warp_jet(bg, rho);
    if s.abs() < 1e-8 {
        return Err(Error::Singular(format!("point form of the reduced equations used at ρ = {rho}")));
    }
    let n = numerators(bg, class, rho, q);
    let quot = [n[0] / (s * s), n[1] / (s * s), n[2] / (s * s), n[3] / (s * s)];
    Ok(accelerations(bg, class, lambda, q, &quot))
}

/// Left side of the reduced Gauss constraint, (s²ȧ)' + 2(k ẇ − w k̇), from jets
/// of the profiles and of their time derivatives.
pub fn reduced_gauss(bg: Background, rho: f64, q: &[RadialJet], p: &[RadialJet]) -> f64 {
    let (s, ds) = warp_jet(bg, rho);
    let (w, k) = (q[0], q[1]);
    let (pw, pk, pa) = (p[0], p[1], p[2]);
    2.0 * s * ds * pa.v + s * s * pa.d1 + 2.0 * (k.v * pw.v - w.v * pk.v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_mode_is_duffing() {
        let q = [RadialJet::new(0.7, 0.0, 0.0)];
        let acc = point_rhs(Background::Cylinder, Ansatz::FixedDirection, 2.0, 1.0, &q).unwrap();
        assert_eq!(acc[0], -0.7 - 2.0 * 0.7f64.powi(3));
    }

    #[test]
    fn hedgehog_vacuum_is_static() {
        let q = [RadialJet::new(1.0, 0.0, 0.0), RadialJet::default(), RadialJet::default(), RadialJet::default()];
        for bg in [Background::Minkowski, Background::Cylinder] {
            let acc = point_rhs(bg, Ansatz::Hedgehog, 1.0, 0.8, &q).unwrap();
            assert!(acc.iter().all(|x| *x == 0.0));
        }
    }
}

//! Pointwise norm comparisons between Minkowski space and the cylinder, and
//! the divergence of the cylinder stress tensor Θ̂.

use crate::error::{Error, Result};
use crate::fields::{stress_tensor, StressKind};
use crate::geometry::{
    christoffels, conformal_factor, cylinder_jacobian, gamma_inverse_diag, inverse_metric_diag, to_cylinder, Chart,
    ChartPoint, Vec4,
};
use crate::oracle::Oracle;
use crate::sampler::FieldSampler;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Sampled comparison of |X|_Γ and |X|_Γ̂ over D⁺(B(r₀)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEquivalence {
    pub samples: usize,
    /// Points where Ω⁻²|X|²_Γ < (1/8)Ω²|X|²_Γ̂.
    pub violations: usize,
    /// Smallest Ω⁻²|X|²_Γ / ((1/8)Ω²|X|²_Γ̂).
    pub lower_margin: f64,
    /// Extremes of |X|²_Γ / |X|²_Γ̂.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// (|X|²_Γ, |X|²_Γ̂, Ω) for a covector with cylinder components `xc` at the
/// Minkowski spherical event `p`.
pub fn norm_pair(p: &ChartPoint, xc: &Vec4) -> Result<(f64, f64, f64)> {
    if p.chart != Chart::MinkowskiSpherical {
        return Err(Error::Domain("norm_pair needs a Minkowski spherical point".into()));
    }
    let q = to_cylinder(p)?;
    let jc = cylinder_jacobian(p.x[0], p.x[1]);
    // X_t = X_τ ∂_tτ + X_ζ ∂_tζ, X_r likewise.
    let xm = [xc[0] * jc[0][0] + xc[1] * jc[1][0], xc[0] * jc[0][1] + xc[1] * jc[1][1], xc[2], xc[3]];
    let gm = gamma_inverse_diag(Chart::MinkowskiSpherical, &p.x);
    let gc = gamma_inverse_diag(Chart::Cylinder, &q.x);
    let nm: f64 = (0..4).map(|a| gm[a] * xm[a] * xm[a]).sum();
    let nc: f64 = (0..4).map(|a| gc[a] * xc[a] * xc[a]).sum();
    Ok((nm, nc, conformal_factor(p)?.big_omega))
}

/// Checks Ω⁻²|X|²_Γ ≥ (1/8)Ω²|X|²_Γ̂ at `samples` random events of
/// D⁺(B(r₀)) with random covectors, and records the ratio range.
pub fn norm_equivalence_check(samples: usize, r0: f64, seed: u64) -> Result<NormEquivalence> {
    if samples == 0 || !(r0 > 0.0) {
        return Err(Error::Config("norm check needs samples and a positive radius".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = NormEquivalence { samples, violations: 0, lower_margin: f64::INFINITY, min_ratio: f64::INFINITY, max_ratio: 0.0 };
    for _ in 0..samples {
        let t = rng.gen_range(0.0..r0);
        let r = (r0 - t) * rng.gen_range(0.01f64..1.0).cbrt();
        let th = rng.gen_range(-1.0f64..1.0).acos().clamp(1e-3, PI - 1e-3);
        let ph = rng.gen_range(0.0..2.0 * PI);
        let p = ChartPoint::minkowski(t, r, th, ph);
        let xc: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let (nm, nc, om) = norm_pair(&p, &xc)?;
        let om2 = om * om;
        let lhs = nm / om2;
        let rhs = 0.125 * om2 * nc;
        if lhs < rhs {
            out.violations += 1;
        }
        out.lower_margin = out.lower_margin.min(lhs / rhs);
        out.min_ratio = out.min_ratio.min(nm / nc);
        out.max_ratio = out.max_ratio.max(nm / nc);
    }
    Ok(out)
}

/// ∇^aΘ̂_ab at a cylinder event, with derivatives from the oracle.
pub fn stress_divergence<S: FieldSampler + ?Sized>(s: &S, p: &ChartPoint, lambda: f64, oracle: &Oracle) -> Result<Vec4> {
    if p.chart != Chart::Cylinder {
        return Err(Error::Domain("the Θ̂ divergence is evaluated on the cylinder".into()));
    }
    let theta = |q: &ChartPoint| -> Result<Vec<f64>> {
        let t = stress_tensor(&s.sample(q)?, q, StressKind::Modified, lambda);
        Ok(t.iter().flatten().copied().collect())
    };
    let t0 = theta(p)?;
    let gam = christoffels(p.chart, &p.x)?;
    let gi = inverse_metric_diag(p.chart, &p.x);
    let mut out = [0.0; 4];
    for a in 0..4 {
        let d = oracle.d1_fn(p, a, theta)?;
        for (b, o) in out.iter_mut().enumerate() {
            let mut v = d[4 * a + b];
            for e in 0..4 {
                v -= gam[e][a][a] * t0[4 * e + b] + gam[e][a][b] * t0[4 * a + e];
            }
            *o += gi[a] * v;
        }
    }
    Ok(out)
}

//! Cronström (radial) gauge about the apex of a backward lightcone in
//! Minkowski space.
//!
//! With the apex translated to the origin the gauge is x^aA_a = 0, and then
//!
//!   A_b(x) = ∫₀¹ s x^a F_ab(sx) ds,
//!   ∂^aA_a(x) = ∫₀¹ s² x^a ([F_ab, A^b] + J_a)(sx) ds,
//!
//! with J_a = ((D_aφ)·θ_αφ)θ_α the current of the field equations
//! D^bF_ab = J_a. A temporal-gauge field is brought to this gauge by U(x)
//! solving U' = U (x^aA_a(sx)) along the ray, U(apex) = 1.

use crate::algebra::{commutator, current, matmul, GroupElement, LieElement, Mat3};
use crate::error::{Error, Result};
use crate::fields::{gauge_transform, PointFields};
use crate::geometry::{Chart, ChartPoint, Vec4};
use crate::oracle::Oracle;
use crate::quadrature::CompositeRule;
use crate::sampler::FieldSampler;
use serde::{Deserialize, Serialize};

const ETA: Vec4 = [1.0, -1.0, -1.0, -1.0];
/// RK4 steps along a ray.
pub const RAY_STEPS: usize = 256;

/// Backward lightcone of `apex` down to t = apex.t − t0, with the solid
/// region it bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRegion {
    /// Cartesian Minkowski event.
    pub apex: ChartPoint,
    pub t0: f64,
    /// Tolerance on the cone boundary for finite-difference stencils.
    pub margin: f64,
}

impl ConeRegion {
    pub fn new(apex: ChartPoint, t0: f64) -> Result<Self> {
        if apex.chart != Chart::MinkowskiCartesian {
            return Err(Error::Domain(format!("the cone apex must be a Cartesian Minkowski point, got {:?}", apex.chart)));
        }
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::Domain(format!("cone height must be positive, got {t0}")));
        }
        Ok(ConeRegion { apex, t0, margin: 4.0 * Oracle::default().eps })
    }

    /// Base radius r₀ = t₀.
    pub fn base_radius(&self) -> f64 {
        self.t0
    }

    /// Apex-relative coordinates.
    pub fn relative(&self, x: &ChartPoint) -> Vec4 {
        std::array::from_fn(|a| x.x[a] - self.apex.x[a])
    }

    pub fn absolute(&self, y: &Vec4) -> ChartPoint {
        ChartPoint::cartesian(self.apex.x[0] + y[0], self.apex.x[1] + y[1], self.apex.x[2] + y[2], self.apex.x[3] + y[3])
    }

    pub fn contains(&self, x: &ChartPoint) -> bool {
        if x.chart != Chart::MinkowskiCartesian {
            return false;
        }
        let y = self.relative(x);
        let r = (y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
        let m = self.margin;
        y[0] <= m && y[0] >= -self.t0 - m && r <= -y[0] + m
    }

    fn check(&self, x: &ChartPoint) -> Result<Vec4> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("{:?} is outside the cone of {:?} with height {}", x.x, self.apex.x, self.t0)));
        }
        Ok(self.relative(x))
    }
}

/// Composite Gauss–Legendre rule on s ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayRule {
    pub panels: usize,
    pub order: usize,
}

impl Default for RayRule {
    fn default() -> Self {
        RayRule { panels: 8, order: 8 }
    }
}

impl RayRule {
    fn nodes(&self) -> Vec<(f64, f64)> {
        let r = CompositeRule::new(0.0, 1.0, self.panels, self.order);
        r.nodes.iter().copied().zip(r.weights.iter().copied()).collect()
    }
}

/// A_b(x) = ∫₀¹ s y^a F_ab(apex + s y) ds from a sampler in Cronström gauge.
pub fn reconstruct_potential<S: FieldSampler + ?Sized>(f: &S, cone: &ConeRegion, x: &ChartPoint, rule: RayRule) -> Result<[LieElement; 4]> {
    let y = cone.check(x)?;
    let mut out = [LieElement::ZERO; 4];
    for (s, w) in rule.nodes() {
        let pf = f.sample(&cone.absolute(&y.map(|c| s * c)))?;
        for (b, ob) in out.iter_mut().enumerate() {
            for (a, ya) in y.iter().enumerate() {
                if a != b {
                    *ob += (w * s * ya) * pf.f.get(a, b);
                }
            }
        }
    }
    Ok(out)
}

/// |y^aA_a| in apex-relative coordinates.
pub fn radial_gauge_check(a: &[LieElement; 4], y: &Vec4) -> f64 {
    let mut s = LieElement::ZERO;
    for k in 0..4 {
        s += y[k] * a[k];
    }
    s.norm()
}

fn mat_add(a: &Mat3, b: &Mat3, c: f64) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + c * b[i][j]))
}

/// U(x) bringing a sampler to Cronström gauge about the apex: g' = −X g with
/// X(s) = y^aA_a(apex + s y), g(0) = 1, by RK4, and U = g(1)⁻¹.
pub fn ray_transport<S: FieldSampler + ?Sized>(temporal: &S, cone: &ConeRegion, x: &ChartPoint) -> Result<GroupElement> {
    let y = cone.check(x)?;
    let gen = |s: f64| -> Result<Mat3> {
        let pf = temporal.sample(&cone.absolute(&y.map(|c| s * c)))?;
        let mut v = LieElement::ZERO;
        for k in 0..4 {
            v += y[k] * pf.a[k];
        }
        Ok(v.matrix())
    };
    let h = 1.0 / RAY_STEPS as f64;
    let mut g = GroupElement::identity().m;
    let mut x0 = gen(0.0)?;
    for k in 0..RAY_STEPS {
        let s = k as f64 * h;
        let xm = gen(s + 0.5 * h)?;
        let x1 = gen(s + h)?;
        let rate = |m: &Mat3, g: &Mat3| -> Mat3 { matmul(m, g).map(|r| r.map(|e| -e)) };
        let k1 = rate(&x0, &g);
        let k2 = rate(&xm, &mat_add(&g, &k1, 0.5 * h));
        let k3 = rate(&xm, &mat_add(&g, &k2, 0.5 * h));
        let k4 = rate(&x1, &mat_add(&g, &k3, h));
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
            }
        }
        x0 = x1;
    }
    if g.iter().flatten().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite { time: x.x[0], index: 0, field: "ray transport".into() });
    }
    Ok(GroupElement { m: g }.inverse())
}

/// A sampler seen in the Cronström gauge of `cone`. With `potential` unset
/// only F, φ and Dφ are transformed (by conjugation) and A is left zero;
/// with it set A' = UAU⁻¹ − dU U⁻¹ with dU by finite differences.
pub struct CronstromSampler<'a, S: ?Sized> {
    pub inner: &'a S,
    pub cone: ConeRegion,
    pub oracle: Oracle,
    pub potential: bool,
}

impl<'a, S: FieldSampler + ?Sized> CronstromSampler<'a, S> {
    pub fn new(inner: &'a S, cone: ConeRegion, potential: bool) -> Self {
        CronstromSampler { inner, cone, oracle: Oracle::default(), potential }
    }
}

impl<S: FieldSampler + ?Sized> FieldSampler for CronstromSampler<'_, S> {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        let pf = self.inner.sample(p)?;
        let u = ray_transport(self.inner, &self.cone, p)?;
        let mut du = [LieElement::ZERO; 4];
        if self.potential {
            let ut = u.inverse().m;
            for (b, d) in du.iter_mut().enumerate() {
                let v = self.oracle.d1_fn(p, b, |q| Ok(ray_transport(self.inner, &self.cone, q)?.m.iter().flatten().copied().collect()))?;
                let dm: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j]));
                *d = LieElement::from_matrix(&matmul(&dm, &ut));
            }
        }
        let mut out = gauge_transform(&pf, &u, &du);
        if !self.potential {
            out.a = [LieElement::ZERO; 4];
        }
        Ok(out)
    }
}

/// |∂^aA_a − ∫₀¹ s² y^a([F_ab, A^b] + J_a)(sy) ds| at x, with A on the left
/// reconstructed from the curvature of `f` and differentiated by finite
/// differences, and the right side from the fields of `fields`. Both samplers
/// must be in the Cronström gauge of `cone`.
pub fn divergence_identity_check<S1, S2>(
    f: &S1,
    fields: &S2,
    cone: &ConeRegion,
    x: &ChartPoint,
    rule: RayRule,
    oracle: &Oracle,
) -> Result<f64>
where
    S1: FieldSampler + ?Sized,
    S2: FieldSampler + ?Sized,
{
    let y = cone.check(x)?;
    let mut lhs = LieElement::ZERO;
    for b in 0..4 {
        let d = oracle.d1_fn(x, b, |q| Ok(reconstruct_potential(f, cone, q, rule)?[b].c.to_vec()))?;
        lhs += ETA[b] * LieElement::new(d[0], d[1], d[2]);
    }
    let mut rhs = LieElement::ZERO;
    for (s, w) in rule.nodes() {
        let pf = fields.sample(&cone.absolute(&y.map(|c| s * c)))?;
        for (a, ya) in y.iter().enumerate() {
            let mut term = current(pf.dphi[a], pf.phi);
            for b in 0..4 {
                if b != a {
                    term += commutator(pf.f.get(a, b), ETA[b] * pf.a[b]);
                }
            }
            rhs += (w * s * s * ya) * term;
        }
    }
    Ok((lhs - rhs).norm())
}

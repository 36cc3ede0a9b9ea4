//! Field samplers: anything that can produce [`PointFields`] at an event.

use crate::algebra::{adjoint_act, vector_act, GroupElement, LieElement};
use crate::error::{Error, Result};
use crate::fields::{fixed_direction_fields, hedgehog_fields, Ansatz, AnsatzProfiles, PointFields, ProfileJet};
use crate::geometry::{Background, Chart, ChartPoint};

pub trait FieldSampler: Send + Sync {
    /// Fields at `p`, in the coordinate basis of `p.chart`.
    fn sample(&self, p: &ChartPoint) -> Result<PointFields>;
}

/// Profile jets as functions of (t, ρ).
pub trait ProfileSource: Send + Sync {
    fn jet(&self, t: f64, rho: f64) -> Result<ProfileJet>;
}

impl<F> ProfileSource for F
where
    F: Fn(f64, f64) -> ProfileJet + Send + Sync,
{
    fn jet(&self, t: f64, rho: f64) -> Result<ProfileJet> {
        Ok(self(t, rho))
    }
}

/// Spherically symmetric fields assembled from a profile source.
pub struct SymmetricSampler<S> {
    pub background: Background,
    pub ansatz: AnsatzProfiles,
    pub source: S,
}

impl<S: ProfileSource> SymmetricSampler<S> {
    pub fn new(background: Background, ansatz: AnsatzProfiles, source: S) -> Self {
        SymmetricSampler { background, ansatz, source }
    }

    fn radial(&self, p: &ChartPoint) -> Result<(f64, f64)> {
        match (self.background, p.chart) {
            (Background::Minkowski, Chart::MinkowskiSpherical) | (Background::Cylinder, Chart::Cylinder) => {
                Ok((p.x[0], p.x[1]))
            }
            (Background::Minkowski, Chart::MinkowskiCartesian) => Ok((p.x[0], p.areal_radius())),
            (b, c) => Err(Error::Domain(format!("{c:?} point given to a {b:?} sampler"))),
        }
    }
}

impl<S: ProfileSource> FieldSampler for SymmetricSampler<S> {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        let (t, rho) = self.radial(p)?;
        let j = self.source.jet(t, rho)?;
        match self.ansatz.class {
            Ansatz::Hedgehog => hedgehog_fields(&j, p),
            Ansatz::FixedDirection => fixed_direction_fields(&j, self.ansatz.direction, p),
        }
    }
}

/// Sampler defined by a closure.
pub struct FnSampler<F>(pub F);

impl<F> FieldSampler for FnSampler<F>
where
    F: Fn(&ChartPoint) -> Result<PointFields> + Send + Sync,
{
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        (self.0)(p)
    }
}

/// Another sampler seen through a constant gauge transformation.
pub struct ConstantGauge<'a, S: ?Sized> {
    pub inner: &'a S,
    pub u: GroupElement,
}

impl<S: FieldSampler + ?Sized> FieldSampler for ConstantGauge<'_, S> {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        let mut pf = self.inner.sample(p)?;
        for a in 0..4 {
            pf.a[a] = adjoint_act(&self.u, pf.a[a]);
            pf.dphi[a] = vector_act(&self.u, pf.dphi[a]);
        }
        for k in 0..6 {
            pf.f.0[k] = adjoint_act(&self.u, pf.f.0[k]);
        }
        pf.phi = vector_act(&self.u, pf.phi);
        Ok(pf)
    }
}

/// The vacuum on any chart.
pub struct Vacuum;

impl FieldSampler for Vacuum {
    fn sample(&self, p: &ChartPoint) -> Result<PointFields> {
        Ok(PointFields::vacuum(p.chart))
    }
}

pub fn zero_lie4() -> [LieElement; 4] {
    [LieElement::ZERO; 4]
}

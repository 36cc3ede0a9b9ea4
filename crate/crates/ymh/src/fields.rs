//! Pointwise field content, symmetry ansätze, gauge transformations and
//! conformal rescaling.
//!
//! The spherically symmetric gauge field used here is the general one,
//!
//!   g A = a n dρ + k dn + (w − 1) n × dn,    φ = h n,
//!
//! with n the unit radial vector identified with a direction in the algebra
//! and g = 1/√2 the scale of the structure constants. k = a = 0 is the
//! ordinary hedgehog A_i^α = ε_{αij} x̂_j (1 − w)/(g r).

use crate::algebra::{
    adjoint_act, current, inner, vector_act, GroupElement, LieElement, STRUCTURE_SCALE,
};
use crate::error::{Error, Result};
use crate::geometry::{
    cartesian_to_spherical, cylinder_jacobian, conformal_factor, curvature_scalars, inverse_metric_diag,
    metric_diag, minkowski_jacobian, spherical_gradients, Chart, ChartPoint, Mat4, TwoForm, Vec4, AXIS_TOLERANCE,
    PAIRS,
};
use serde::{Deserialize, Serialize};

/// Coupling in cross-product form: [X, Y] = G (x × y).
pub const G: f64 = STRUCTURE_SCALE;

/// Full field content at one event, in the coordinate basis of `chart`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointFields {
    pub chart: Option<Chart>,
    pub a: [LieElement; 4],
    pub f: TwoForm,
    pub phi: LieElement,
    pub dphi: [LieElement; 4],
}

impl PointFields {
    pub fn vacuum(chart: Chart) -> Self {
        PointFields { chart: Some(chart), ..Default::default() }
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(self.dphi.iter()).chain(self.f.0.iter()).all(|x| x.is_finite()) && self.phi.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ansatz {
    Hedgehog,
    FixedDirection,
}

/// Value of a profile with its first radial and time derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub v: f64,
    pub dr: f64,
    pub dt: f64,
}

impl Jet {
    pub fn new(v: f64, dr: f64, dt: f64) -> Self {
        Jet { v, dr, dt }
    }
}

/// Profile jets at one (t, ρ). Hedgehog slots are (w, k, a, h); the
/// fixed-direction ansatz uses slot 0 for c.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub f: [Jet; 4],
}

impl ProfileJet {
    pub fn hedgehog(w: Jet, k: Jet, a: Jet, h: Jet) -> Self {
        ProfileJet { f: [w, k, a, h] }
    }

    pub fn fixed(c: Jet) -> Self {
        ProfileJet { f: [c, Jet::default(), Jet::default(), Jet::default()] }
    }
}

/// Ansatz tag with the fixed direction where relevant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzProfiles {
    pub class: Ansatz,
    /// Unit vector of the fixed-direction ansatz.
    pub direction: LieElement,
}

impl AnsatzProfiles {
    pub fn hedgehog() -> Self {
        AnsatzProfiles { class: Ansatz::Hedgehog, direction: LieElement::basis(2) }
    }

    pub fn fixed(direction: LieElement) -> Result<Self> {
        let n = direction.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("fixed direction must be a unit vector, |v| = {n}")));
        }
        Ok(AnsatzProfiles { class: Ansatz::FixedDirection, direction })
    }
}

struct Frame {
    n: LieElement,
    e_th: LieElement,
    e_ph: LieElement,
    st: f64,
}

fn frame(theta: f64, phi: f64) -> Frame {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Frame {
        n: LieElement::new(st * cp, st * sp, ct),
        e_th: LieElement::new(ct * cp, ct * sp, -st),
        e_ph: LieElement::new(-sp, cp, 0.0),
        st,
    }
}

/// Hedgehog fields in a warped chart (t, ρ, θ, φ): Minkowski spherical or
/// the cylinder. Temporal gauge, A_0 = 0.
fn hedgehog_warped(chart: Chart, x: &Vec4, j: &ProfileJet) -> PointFields {
    let [w, k, a, h] = j.f;
    let fr = frame(x[2], x[3]);
    let (n, eth, eph, st) = (fr.n, fr.e_th, fr.e_ph, fr.st);
    let ig = 1.0 / G;
    let mut pf = PointFields::vacuum(chart);
    pf.a[1] = (ig * a.v) * n;
    pf.a[2] = ig * (k.v * eth + (w.v - 1.0) * eph);
    pf.a[3] = (ig * st) * (k.v * eph - (w.v - 1.0) * eth);

    let mut f = TwoForm::default();
    f.set(0, 1, (ig * a.dt) * n);
    // μ = t: a_t = 0; μ = ρ: a_ρ = a.
    let legs = [(0usize, w.dt, k.dt, 0.0), (1usize, w.dr, k.dr, a.v)];
    for (mu, dw, dk, amu) in legs {
        let ek = dk - amu * w.v;
        let fw = dw + amu * k.v;
        f.set(mu, 2, ig * (ek * eth + fw * eph));
        f.set(mu, 3, (ig * st) * (ek * eph - fw * eth));
    }
    f.set(2, 3, (ig * st * (w.v * w.v + k.v * k.v - 1.0)) * n);
    pf.f = f;

    pf.phi = h.v * n;
    pf.dphi[0] = h.dt * n;
    pf.dphi[1] = h.dr * n;
    pf.dphi[2] = h.v * (w.v * eth - k.v * eph);
    pf.dphi[3] = (h.v * st) * (w.v * eph + k.v * eth);
    pf
}

fn fixed_warped(chart: Chart, j: &ProfileJet, v: LieElement) -> PointFields {
    let c = j.f[0];
    let mut pf = PointFields::vacuum(chart);
    pf.phi = c.v * v;
    pf.dphi[0] = c.dt * v;
    pf.dphi[1] = c.dr * v;
    pf
}

/// Rewrites spherical (t, r, θ, φ) components as Cartesian (t, x, y, z) ones.
pub(crate) fn spherical_to_cartesian_components(pf: &PointFields, cart: &ChartPoint) -> Result<PointFields> {
    let [_, x, y, z] = cart.x;
    let r = (x * x + y * y + z * z).sqrt();
    let rho = (x * x + y * y).sqrt();
    if r <= AXIS_TOLERANCE || rho <= AXIS_TOLERANCE * r {
        return Err(Error::Singular(format!("Cartesian point {:?} is on the symmetry axis", cart.x)));
    }
    let g = spherical_gradients(x, y, z);
    // J[μ][i] = ∂x_sph^μ / ∂x_cart^i
    let mut jac = [[0.0; 4]; 4];
    jac[0][0] = 1.0;
    for m in 0..3 {
        for i in 0..3 {
            jac[m + 1][i + 1] = g[m][i];
        }
    }
    Ok(transform_components(pf, &jac, Chart::MinkowskiCartesian))
}

/// Covariant transformation X'_i = X_μ J[μ][i] applied to every tensor slot.
pub fn transform_components(pf: &PointFields, jac: &Mat4, to: Chart) -> PointFields {
    let mut out = PointFields::vacuum(to);
    out.phi = pf.phi;
    for i in 0..4 {
        let mut a = LieElement::ZERO;
        let mut d = LieElement::ZERO;
        for m in 0..4 {
            if jac[m][i] != 0.0 {
                a += jac[m][i] * pf.a[m];
                d += jac[m][i] * pf.dphi[m];
            }
        }
        out.a[i] = a;
        out.dphi[i] = d;
    }
    out.f = TwoForm::from_fn(|i, j| {
        let mut s = LieElement::ZERO;
        for m in 0..4 {
            for n in 0..4 {
                let c = jac[m][i] * jac[n][j];
                if c != 0.0 && m != n {
                    s += c * pf.f.get(m, n);
                }
            }
        }
        s
    });
    out
}

/// Hedgehog fields at `p` from the profile jets at (t, ρ) of that event.
/// Cartesian points are assembled in spherical components and rotated.
pub fn hedgehog_fields(j: &ProfileJet, p: &ChartPoint) -> Result<PointFields> {
    match p.chart {
        Chart::MinkowskiSpherical | Chart::Cylinder => {
            if p.areal_radius() <= AXIS_TOLERANCE {
                return Err(Error::Singular(format!("hedgehog evaluation at the centre {:?}", p.x)));
            }
            Ok(hedgehog_warped(p.chart, &p.x, j))
        }
        Chart::MinkowskiCartesian => {
            let s = cartesian_to_spherical(p);
            let pf = hedgehog_warped(Chart::MinkowskiSpherical, &s.x, j);
            spherical_to_cartesian_components(&pf, p)
        }
        Chart::DeSitter => Err(Error::Domain("hedgehog fields are assembled on Minkowski or the cylinder".into())),
    }
}

/// φ = c v with A ≡ 0.
pub fn fixed_direction_fields(j: &ProfileJet, v: LieElement, p: &ChartPoint) -> Result<PointFields> {
    match p.chart {
        Chart::MinkowskiSpherical | Chart::Cylinder => Ok(fixed_warped(p.chart, j, v)),
        Chart::MinkowskiCartesian => {
            let [_, x, y, z] = p.x;
            let r = (x * x + y * y + z * z).sqrt();
            let mut pf = PointFields::vacuum(Chart::MinkowskiCartesian);
            let c = j.f[0];
            pf.phi = c.v * v;
            pf.dphi[0] = c.dt * v;
            if r > 0.0 {
                for (i, xi) in [x, y, z].into_iter().enumerate() {
                    pf.dphi[i + 1] = (c.dr * xi / r) * v;
                }
            }
            Ok(pf)
        }
        Chart::DeSitter => Err(Error::Domain("fixed-direction fields are assembled on Minkowski or the cylinder".into())),
    }
}

/// Gauge transformation by U with `du[a]` = (∂_a U) U⁻¹.
pub fn gauge_transform(pf: &PointFields, u: &GroupElement, du: &[LieElement; 4]) -> PointFields {
    let mut out = *pf;
    for a in 0..4 {
        out.a[a] = adjoint_act(u, pf.a[a]) - du[a];
        out.dphi[a] = vector_act(u, pf.dphi[a]);
    }
    for k in 0..6 {
        out.f.0[k] = adjoint_act(u, pf.f.0[k]);
    }
    out.phi = vector_act(u, pf.phi);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RescaleDirection {
    MinkowskiToCylinder,
    CylinderToMinkowski,
}

/// Conformal weights Â = A, F̂ = F, φ̂ = Ω⁻¹φ, D̂φ̂ = Ω⁻¹(Dφ − Υφ), with the
/// (t, r) ↔ (τ, ζ) Jacobian for index placement. `p` is the event in the
/// source chart (Minkowski spherical or cylinder).
pub fn conformal_rescale(pf: &PointFields, p: &ChartPoint, dir: RescaleDirection) -> Result<PointFields> {
    match dir {
        RescaleDirection::MinkowskiToCylinder => {
            if p.chart != Chart::MinkowskiSpherical || pf.chart != Some(Chart::MinkowskiSpherical) {
                return Err(Error::Domain("Minkowski spherical components expected".into()));
            }
            let cd = conformal_factor(p)?;
            let jm = minkowski_jacobian(p.x[0], p.x[1]);
            let mut jac = [[0.0; 4]; 4];
            jac[0][0] = jm[0][0];
            jac[0][1] = jm[0][1];
            jac[1][0] = jm[1][0];
            jac[1][1] = jm[1][1];
            jac[2][2] = 1.0;
            jac[3][3] = 1.0;
            let mut w = *pf;
            let io = 1.0 / cd.big_omega;
            for a in 0..4 {
                w.dphi[a] = io * (pf.dphi[a] - cd.upsilon[a] * pf.phi);
            }
            w.phi = io * pf.phi;
            Ok(transform_components(&w, &jac, Chart::Cylinder))
        }
        RescaleDirection::CylinderToMinkowski => {
            if p.chart != Chart::Cylinder || pf.chart != Some(Chart::Cylinder) {
                return Err(Error::Domain("cylinder components expected".into()));
            }
            let m = crate::geometry::from_cylinder(p)?;
            let cd = conformal_factor(&m)?;
            let jc = cylinder_jacobian(m.x[0], m.x[1]);
            let mut jac = [[0.0; 4]; 4];
            jac[0][0] = jc[0][0];
            jac[0][1] = jc[0][1];
            jac[1][0] = jc[1][0];
            jac[1][1] = jc[1][1];
            jac[2][2] = 1.0;
            jac[3][3] = 1.0;
            let mut out = transform_components(pf, &jac, Chart::MinkowskiSpherical);
            let om = cd.big_omega;
            out.phi = om * pf.phi;
            for a in 0..4 {
                out.dphi[a] = om * out.dphi[a] + cd.upsilon[a] * out.phi;
            }
            Ok(out)
        }
    }
}

/// Electric and magnetic fields E_i = F_{0i}, B^i = ½ε^{ijk}F_{jk}. On the
/// Cartesian chart these are coordinate components; on warped charts they are
/// taken in the orthonormal frame of the slice.
pub fn electric_magnetic(pf: &PointFields, p: &ChartPoint) -> Result<([LieElement; 3], [LieElement; 3])> {
    let scale: [f64; 4] = match p.chart {
        Chart::MinkowskiCartesian => [1.0; 4],
        _ => {
            let g = metric_diag(p.chart, &p.x);
            if g[2] == 0.0 || g[3] == 0.0 {
                return Err(Error::Singular(format!("orthonormal frame undefined at {:?}", p.x)));
            }
            [1.0, 1.0 / (-g[1]).sqrt(), 1.0 / (-g[2]).sqrt(), 1.0 / (-g[3]).sqrt()]
        }
    };
    let fo = |a: usize, b: usize| (scale[a] * scale[b]) * pf.f.get(a, b);
    let e = [fo(0, 1), fo(0, 2), fo(0, 3)];
    let b = [fo(2, 3), fo(3, 1), fo(1, 2)];
    Ok((e, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StressKind {
    Canonical,
    Modified,
}

/// T_ab (canonical) or Θ̂_ab (modified: +½ g_ab |φ|², no G_ab term).
pub fn stress_tensor(pf: &PointFields, p: &ChartPoint, kind: StressKind, lambda: f64) -> Mat4 {
    let g = metric_diag(p.chart, &p.x);
    let gi = inverse_metric_diag(p.chart, &p.x);
    let curv = curvature_scalars(p.chart, &p.x);
    let mut ff = 0.0;
    for &(a, b) in PAIRS.iter() {
        ff += 2.0 * gi[a] * gi[b] * pf.f.get(a, b).norm_sq();
    }
    let mut dd = 0.0;
    for a in 0..4 {
        dd += gi[a] * pf.dphi[a].norm_sq();
    }
    let p2 = pf.phi.norm_sq();
    let mut t = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let mut s = 0.0;
            for c in 0..4 {
                s -= gi[c] * inner(pf.f.get(a, c), pf.f.get(b, c));
            }
            s += inner(pf.dphi[a], pf.dphi[b]);
            if a == b {
                s += g[a] * (0.25 * ff - 0.5 * dd + 0.25 * lambda * p2 * p2);
            }
            match kind {
                StressKind::Canonical => s -= curv.einstein[a][b] * p2 / 6.0,
                StressKind::Modified => {
                    if a == b {
                        s += 0.5 * g[a] * p2;
                    }
                }
            }
            t[a][b] = s;
            t[b][a] = s;
        }
    }
    t
}

/// ((D_aφ)·θ_αφ) θ_α for each index a.
pub fn higgs_current(pf: &PointFields) -> [LieElement; 4] {
    let mut j = [LieElement::ZERO; 4];
    for a in 0..4 {
        j[a] = current(pf.dphi[a], pf.phi);
    }
    j
}

//! Charts, metrics and conformal maps for Minkowski space, the Einstein
//! cylinder and de Sitter space.
//!
//! Coordinate order: Minkowski spherical (t, r, θ, φ), Minkowski Cartesian
//! (t, x, y, z), cylinder (τ, ζ, θ, φ), de Sitter (α, ζ, θ, φ). All metrics
//! have signature (+, −, −, −) and are diagonal in their chart.

use crate::algebra::{inner, LieElement};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
/// Γ^a_{bc} stored as `g[a][b][c]`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

/// Smallest r, sin ζ, sin θ accepted by operations that use spherical charts.
pub const AXIS_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    MinkowskiSpherical,
    MinkowskiCartesian,
    Cylinder,
    DeSitter,
}

impl Chart {
    pub fn is_minkowski(self) -> bool {
        matches!(self, Chart::MinkowskiSpherical | Chart::MinkowskiCartesian)
    }
}

/// Background of a symmetry-reduced evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Background {
    Minkowski,
    Cylinder,
}

impl Background {
    /// Warped radius s(ρ): r on Minkowski, sin ζ on the cylinder.
    pub fn warp(self, rho: f64) -> f64 {
        match self {
            Background::Minkowski => rho,
            Background::Cylinder => rho.sin(),
        }
    }

    /// R/6 for the background: 0 on Minkowski, 1 on the cylinder.
    pub fn conformal_mass(self) -> f64 {
        match self {
            Background::Minkowski => 0.0,
            Background::Cylinder => 1.0,
        }
    }

    pub fn chart(self) -> Chart {
        match self {
            Background::Minkowski => Chart::MinkowskiSpherical,
            Background::Cylinder => Chart::Cylinder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub x: Vec4,
}

impl ChartPoint {
    pub fn new(chart: Chart, x: Vec4) -> Self {
        ChartPoint { chart, x }
    }

    pub fn minkowski(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self::new(Chart::MinkowskiSpherical, [t, r, theta, phi])
    }

    pub fn cartesian(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new(Chart::MinkowskiCartesian, [t, x, y, z])
    }

    pub fn cylinder(tau: f64, zeta: f64, theta: f64, phi: f64) -> Self {
        Self::new(Chart::Cylinder, [tau, zeta, theta, phi])
    }

    pub fn de_sitter(alpha: f64, zeta: f64, theta: f64, phi: f64) -> Self {
        Self::new(Chart::DeSitter, [alpha, zeta, theta, phi])
    }

    pub fn time(&self) -> f64 {
        self.x[0]
    }

    /// Checks the coordinate ranges of the chart.
    pub fn validate(&self) -> Result<()> {
        let x = self.x;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite coordinates {x:?}")));
        }
        match self.chart {
            Chart::MinkowskiCartesian => Ok(()),
            Chart::MinkowskiSpherical => {
                if x[1] < 0.0 || !(0.0..=PI).contains(&x[2]) {
                    return Err(Error::Domain(format!("spherical coordinates out of range {x:?}")));
                }
                Ok(())
            }
            Chart::Cylinder | Chart::DeSitter => {
                if !(0.0..=PI).contains(&x[1]) || !(0.0..=PI).contains(&x[2]) {
                    return Err(Error::Domain(format!("coordinates out of range {x:?}")));
                }
                Ok(())
            }
        }
    }

    /// Radius of the orbit sphere: r on Minkowski, sin ζ on the cylinder,
    /// cosh α sin ζ on de Sitter.
    pub fn areal_radius(&self) -> f64 {
        match self.chart {
            Chart::MinkowskiSpherical => self.x[1],
            Chart::MinkowskiCartesian => (self.x[1].powi(2) + self.x[2].powi(2) + self.x[3].powi(2)).sqrt(),
            Chart::Cylinder => self.x[1].sin(),
            Chart::DeSitter => self.x[0].cosh() * self.x[1].sin(),
        }
    }

    /// The radial chart coordinate: r (|x| on the Cartesian chart) or ζ.
    pub fn radial_coordinate(&self) -> f64 {
        match self.chart {
            Chart::MinkowskiCartesian => self.areal_radius(),
            _ => self.x[1],
        }
    }

    fn check_off_axis(&self) -> Result<()> {
        match self.chart {
            Chart::MinkowskiCartesian => Ok(()),
            _ => {
                let s = match self.chart {
                    Chart::MinkowskiSpherical => self.x[1],
                    _ => self.x[1].sin(),
                };
                if s <= AXIS_TOLERANCE || self.x[2].sin() <= AXIS_TOLERANCE {
                    Err(Error::Singular(format!("{:?} point {:?} is on a coordinate axis", self.chart, self.x)))
                } else {
                    Ok(())
                }
            }
        }
    }
}

pub fn spherical_to_cartesian(p: &ChartPoint) -> ChartPoint {
    debug_assert_eq!(p.chart, Chart::MinkowskiSpherical);
    let [t, r, th, ph] = p.x;
    ChartPoint::cartesian(t, r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
}

pub fn cartesian_to_spherical(p: &ChartPoint) -> ChartPoint {
    debug_assert_eq!(p.chart, Chart::MinkowskiCartesian);
    let [t, x, y, z] = p.x;
    let r = (x * x + y * y + z * z).sqrt();
    let th = if r > 0.0 { (z / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
    let mut ph = y.atan2(x);
    if ph < 0.0 {
        ph += 2.0 * PI;
    }
    ChartPoint::minkowski(t, r, th, ph)
}

/// Jacobian ∂(spherical)/∂(Cartesian) for the spatial part: row i is the
/// gradient of (r, θ, φ)[i] with respect to (x, y, z). Requires r > 0 and
/// sin θ > 0.
pub fn spherical_gradients(x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
    let rho2 = x * x + y * y;
    let rho = rho2.sqrt();
    let r2 = rho2 + z * z;
    let r = r2.sqrt();
    [
        [x / r, y / r, z / r],
        [x * z / (r2 * rho), y * z / (r2 * rho), -rho / r2],
        [-y / rho2, x / rho2, 0.0],
    ]
}

fn to_spherical(p: &ChartPoint) -> Result<ChartPoint> {
    match p.chart {
        Chart::MinkowskiSpherical => Ok(*p),
        Chart::MinkowskiCartesian => Ok(cartesian_to_spherical(p)),
        c => Err(Error::Domain(format!("expected a Minkowski point, got {c:?}"))),
    }
}

/// Minkowski → cylinder: τ = arctan(t−r) + arctan(t+r), ζ = arctan(t+r) − arctan(t−r).
pub fn to_cylinder(p: &ChartPoint) -> Result<ChartPoint> {
    let q = to_spherical(p)?;
    q.validate()?;
    let [t, r, th, ph] = q.x;
    let (au, av) = ((t - r).atan(), (t + r).atan());
    Ok(ChartPoint::cylinder(au + av, av - au, th, ph))
}

/// Cylinder → Minkowski spherical, defined on the diamond |τ| + ζ < π.
pub fn from_cylinder(p: &ChartPoint) -> Result<ChartPoint> {
    if p.chart != Chart::Cylinder {
        return Err(Error::Domain(format!("expected a cylinder point, got {:?}", p.chart)));
    }
    p.validate()?;
    let [tau, zeta, th, ph] = p.x;
    if tau.abs() + zeta >= PI {
        return Err(Error::Domain(format!("(τ, ζ) = ({tau}, {zeta}) lies outside the Minkowski diamond")));
    }
    let v = (0.5 * (tau + zeta)).tan();
    let u = (0.5 * (tau - zeta)).tan();
    Ok(ChartPoint::minkowski(0.5 * (u + v), (0.5 * (v - u)).max(0.0), th, ph))
}

/// ∂(τ, ζ)/∂(t, r) as [[∂τ/∂t, ∂τ/∂r], [∂ζ/∂t, ∂ζ/∂r]].
pub fn cylinder_jacobian(t: f64, r: f64) -> [[f64; 2]; 2] {
    let iu = 1.0 / (1.0 + (t - r).powi(2));
    let iv = 1.0 / (1.0 + (t + r).powi(2));
    [[iu + iv, iv - iu], [iv - iu, iu + iv]]
}

/// ∂(t, r)/∂(τ, ζ) as [[∂t/∂τ, ∂t/∂ζ], [∂r/∂τ, ∂r/∂ζ]].
pub fn minkowski_jacobian(t: f64, r: f64) -> [[f64; 2]; 2] {
    let u2 = 1.0 + (t - r).powi(2);
    let v2 = 1.0 + (t + r).powi(2);
    [[0.25 * (u2 + v2), 0.25 * (v2 - u2)], [0.25 * (v2 - u2), 0.25 * (u2 + v2)]]
}

/// Conformal data of a Minkowski event.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalData {
    /// Ω with 𝔢 = Ω² η.
    pub big_omega: f64,
    /// ω = cos τ with 𝔢 = ω² g̃, evaluated at the image point.
    pub small_omega: f64,
    /// Υ_a = ∂_a log Ω in (t, r, θ, φ) components.
    pub upsilon: Vec4,
    pub r_plus: f64,
    pub u_plus: f64,
    pub v_plus: f64,
}

pub fn conformal_factor(p: &ChartPoint) -> Result<ConformalData> {
    let q = to_spherical(p)?;
    let [t, r, _, _] = q.x;
    let (u, v) = (t - r, t + r);
    let (u2, v2) = (1.0 + u * u, 1.0 + v * v);
    let (up, vp) = (u2.sqrt(), v2.sqrt());
    let tau = u.atan() + v.atan();
    Ok(ConformalData {
        big_omega: 2.0 / (up * vp),
        small_omega: tau.cos(),
        upsilon: [-u / u2 - v / v2, u / u2 - v / v2, 0.0, 0.0],
        r_plus: (0.5 * (1.0 + r * r)).sqrt(),
        u_plus: up,
        v_plus: vp,
    })
}

/// τ(α) with tan(τ/2) = tanh(α/2).
pub fn ds_to_cylinder(alpha: f64) -> f64 {
    2.0 * (0.5 * alpha).tanh().atan()
}

/// Inverse of [`ds_to_cylinder`] for |τ| < π/2.
pub fn cylinder_to_ds(tau: f64) -> Result<f64> {
    if tau.abs() >= 0.5 * PI {
        return Err(Error::Domain(format!("τ = {tau} is outside de Sitter (|τ| < π/2)")));
    }
    Ok(2.0 * (0.5 * tau).tan().atanh())
}

/// ω = cos τ.
pub fn omega_ds(tau: f64) -> f64 {
    tau.cos()
}

/// dτ/dα = 1/cosh α.
pub fn dtau_dalpha(alpha: f64) -> f64 {
    1.0 / alpha.cosh()
}

/// Diagonal metric components g_aa.
pub fn metric_diag(chart: Chart, x: &Vec4) -> Vec4 {
    match chart {
        Chart::MinkowskiCartesian => [1.0, -1.0, -1.0, -1.0],
        Chart::MinkowskiSpherical => {
            let r2 = x[1] * x[1];
            [1.0, -1.0, -r2, -r2 * x[2].sin().powi(2)]
        }
        Chart::Cylinder => {
            let s2 = x[1].sin().powi(2);
            [1.0, -1.0, -s2, -s2 * x[2].sin().powi(2)]
        }
        Chart::DeSitter => {
            let c2 = x[0].cosh().powi(2);
            let s2 = x[1].sin().powi(2);
            [1.0, -c2, -c2 * s2, -c2 * s2 * x[2].sin().powi(2)]
        }
    }
}

/// d[b][a] = ∂_b g_aa.
fn metric_diag_gradient(chart: Chart, x: &Vec4) -> [[f64; 4]; 4] {
    let mut d = [[0.0; 4]; 4];
    match chart {
        Chart::MinkowskiCartesian => {}
        Chart::MinkowskiSpherical => {
            let (r, st, ct) = (x[1], x[2].sin(), x[2].cos());
            d[1][2] = -2.0 * r;
            d[1][3] = -2.0 * r * st * st;
            d[2][3] = -2.0 * r * r * st * ct;
        }
        Chart::Cylinder => {
            let (sz, cz, st, ct) = (x[1].sin(), x[1].cos(), x[2].sin(), x[2].cos());
            d[1][2] = -2.0 * sz * cz;
            d[1][3] = -2.0 * sz * cz * st * st;
            d[2][3] = -2.0 * sz * sz * st * ct;
        }
        Chart::DeSitter => {
            let (ch, sh) = (x[0].cosh(), x[0].sinh());
            let (sz, cz, st, ct) = (x[1].sin(), x[1].cos(), x[2].sin(), x[2].cos());
            let c2 = ch * ch;
            d[0][1] = -2.0 * ch * sh;
            d[0][2] = -2.0 * ch * sh * sz * sz;
            d[0][3] = -2.0 * ch * sh * sz * sz * st * st;
            d[1][2] = -2.0 * c2 * sz * cz;
            d[1][3] = -2.0 * c2 * sz * cz * st * st;
            d[2][3] = -2.0 * c2 * sz * sz * st * ct;
        }
    }
    d
}

pub fn metric(chart: Chart, x: &Vec4) -> Result<Mat4> {
    ChartPoint::new(chart, *x).check_off_axis()?;
    let g = metric_diag(chart, x);
    let mut m = [[0.0; 4]; 4];
    for a in 0..4 {
        m[a][a] = g[a];
    }
    Ok(m)
}

pub fn inverse_metric_diag(chart: Chart, x: &Vec4) -> Vec4 {
    let g = metric_diag(chart, x);
    [1.0 / g[0], 1.0 / g[1], 1.0 / g[2], 1.0 / g[3]]
}

/// Levi-Civita connection coefficients Γ^a_{bc} of the chart metric.
pub fn christoffels(chart: Chart, x: &Vec4) -> Result<Christoffel> {
    ChartPoint::new(chart, *x).check_off_axis()?;
    Ok(christoffels_unchecked(chart, x))
}

pub(crate) fn christoffels_unchecked(chart: Chart, x: &Vec4) -> Christoffel {
    let gi = inverse_metric_diag(chart, x);
    let d = metric_diag_gradient(chart, x);
    let mut gam = [[[0.0; 4]; 4]; 4];
    // Γ^a_{bc} = ½ g^{aa} (∂_b g_{ac} + ∂_c g_{ab} − ∂_a g_{bc}) for diagonal g.
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                if a == c {
                    s += d[b][a];
                }
                if a == b {
                    s += d[c][a];
                }
                if b == c {
                    s -= d[a][b];
                }
                gam[a][b][c] = 0.5 * gi[a] * s;
            }
        }
    }
    gam
}

/// Scalar curvature, Ricci and Einstein tensors in the sign convention in
/// which the unit cylinder has R = 6 and de Sitter R = 12.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature {
    pub scalar: f64,
    pub ricci: Mat4,
    pub einstein: Mat4,
}

pub fn curvature_scalars(chart: Chart, x: &Vec4) -> Curvature {
    let g = metric_diag(chart, x);
    let mut ricci = [[0.0; 4]; 4];
    let mut einstein = [[0.0; 4]; 4];
    let scalar = match chart {
        Chart::MinkowskiCartesian | Chart::MinkowskiSpherical => 0.0,
        Chart::Cylinder => {
            for a in 1..4 {
                ricci[a][a] = 2.0 * g[a];
            }
            6.0
        }
        Chart::DeSitter => {
            for a in 0..4 {
                ricci[a][a] = 3.0 * g[a];
            }
            12.0
        }
    };
    for a in 0..4 {
        einstein[a][a] = ricci[a][a] - 0.5 * scalar * g[a];
    }
    Curvature { scalar, ricci, einstein }
}

/// Diagonal of Γ^{ab} = 2T^aT^b − g^{ab} with T = ∂_0 (g_00 = 1 in every chart).
pub fn gamma_inverse_diag(chart: Chart, x: &Vec4) -> Vec4 {
    let gi = inverse_metric_diag(chart, x);
    [2.0 - gi[0], -gi[1], -gi[2], -gi[3]]
}

pub fn diag_to_mat(d: &Vec4) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for a in 0..4 {
        m[a][a] = d[a];
    }
    m
}

/// Antisymmetric Lie-valued two-form stored by pairs (01, 02, 03, 12, 13, 23).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoForm(pub [LieElement; 6]);

pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl TwoForm {
    pub fn get(&self, a: usize, b: usize) -> LieElement {
        match pair_slot(a, b) {
            None => LieElement::ZERO,
            Some((k, s)) => s * self.0[k],
        }
    }

    pub fn set(&mut self, a: usize, b: usize, v: LieElement) {
        if let Some((k, s)) = pair_slot(a, b) {
            self.0[k] = s * v;
        }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> LieElement) -> Self {
        let mut t = TwoForm::default();
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            t.0[k] = f(a, b);
        }
        t
    }
}

fn pair_slot(a: usize, b: usize) -> Option<(usize, f64)> {
    if a == b {
        return None;
    }
    let (lo, hi, s) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let k = PAIRS.iter().position(|&p| p == (lo, hi)).expect("valid pair");
    Some((k, s))
}

/// |X|² = Σ_α X_a^α X_b^α G^{ab} for a symmetric (possibly non-diagonal) G.
pub fn norm_sq_one_form_with(ginv: &Mat4, x: &[LieElement; 4]) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            if ginv[a][b] != 0.0 {
                s += ginv[a][b] * inner(x[a], x[b]);
            }
        }
    }
    s
}

/// |F|² = Σ_α F_{ab}^α F_{cd}^α G^{ac} G^{bd}.
pub fn norm_sq_two_form_with(ginv: &Mat4, f: &TwoForm) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let fab = f.get(a, b);
            if fab == LieElement::ZERO {
                continue;
            }
            for c in 0..4 {
                if ginv[a][c] == 0.0 {
                    continue;
                }
                for d in 0..4 {
                    if ginv[b][d] != 0.0 {
                        s += ginv[a][c] * ginv[b][d] * inner(fab, f.get(c, d));
                    }
                }
            }
        }
    }
    s
}

/// Γ-norm of a one-form given by chart components.
pub fn gamma_norm_one_form(chart: Chart, x: &Vec4, v: &[LieElement; 4]) -> f64 {
    norm_sq_one_form_with(&diag_to_mat(&gamma_inverse_diag(chart, x)), v).sqrt()
}

/// Γ-norm of a two-form given by chart components.
pub fn gamma_norm_two_form(chart: Chart, x: &Vec4, f: &TwoForm) -> f64 {
    let gd = gamma_inverse_diag(chart, x);
    let mut s = 0.0;
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        s += 2.0 * gd[a] * gd[b] * f.0[k].norm_sq();
    }
    s.sqrt()
}

/// Null tetrad (l, n, e_θ, e_φ) as contravariant chart components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tetrad {
    pub l: Vec4,
    pub n: Vec4,
    pub e_theta: Vec4,
    pub e_phi: Vec4,
}

/// Minkowski tetrad l = −∂_t + ∂_r, n = ∂_t + ∂_r, e_θ = ∂_θ/r,
/// e_φ = ∂_φ/(r sin θ); on the cylinder the hatted tetrad with sin ζ.
pub fn tetrad(p: &ChartPoint) -> Result<Tetrad> {
    p.check_off_axis()?;
    match p.chart {
        Chart::MinkowskiSpherical | Chart::Cylinder => {
            let s = p.areal_radius();
            let st = p.x[2].sin();
            Ok(Tetrad {
                l: [-1.0, 1.0, 0.0, 0.0],
                n: [1.0, 1.0, 0.0, 0.0],
                e_theta: [0.0, 0.0, 1.0 / s, 0.0],
                e_phi: [0.0, 0.0, 0.0, 1.0 / (s * st)],
            })
        }
        Chart::MinkowskiCartesian => {
            let q = cartesian_to_spherical(p);
            if q.x[1] <= AXIS_TOLERANCE || q.x[2].sin() <= AXIS_TOLERANCE {
                return Err(Error::Singular(format!("Cartesian point {:?} is on the axis", p.x)));
            }
            let (th, ph) = (q.x[2], q.x[3]);
            let rhat = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let that = [th.cos() * ph.cos(), th.cos() * ph.sin(), -th.sin()];
            let phat = [-ph.sin(), ph.cos(), 0.0];
            Ok(Tetrad {
                l: [-1.0, rhat[0], rhat[1], rhat[2]],
                n: [1.0, rhat[0], rhat[1], rhat[2]],
                e_theta: [0.0, that[0], that[1], that[2]],
                e_phi: [0.0, phat[0], phat[1], phat[2]],
            })
        }
        Chart::DeSitter => Err(Error::Domain("no tetrad is defined on the de Sitter chart".into())),
    }
}

pub fn metric_dot(chart: Chart, x: &Vec4, a: &Vec4, b: &Vec4) -> f64 {
    let g = metric_diag(chart, x);
    (0..4).map(|i| g[i] * a[i] * b[i]).sum()
}

/// Pushes the Minkowski tetrad at `p` forward to the cylinder with a
/// fourth-order finite-difference Jacobian of [`to_cylinder`] and compares it
/// with l = (2/u₊²) l̂, n = (2/v₊²) n̂ and the angular relation. Returns the
/// largest component mismatch.
///
/// The angular legs compare as covectors, (ê_A)_a = Ω (e_A)_a, which is the
/// same as e_A = Ω ê_A for the vectors.
pub fn tetrad_relation_check(p: &ChartPoint) -> Result<f64> {
    let q = to_spherical(p)?;
    let tm = tetrad(&q)?;
    let qc = to_cylinder(&q)?;
    let tc = tetrad(&qc)?;
    let cd = conformal_factor(&q)?;
    let h = 1e-3;
    let mut jac = [[0.0; 4]; 4];
    for b in 0..4 {
        let shifted = |s: f64| -> Result<Vec4> {
            let mut y = q.x;
            y[b] += s;
            Ok(to_cylinder(&ChartPoint::minkowski(y[0], y[1], y[2], y[3]))?.x)
        };
        let (m2, m1, p1, p2) = (shifted(-2.0 * h)?, shifted(-h)?, shifted(h)?, shifted(2.0 * h)?);
        for a in 0..4 {
            jac[a][b] = (m2[a] - 8.0 * m1[a] + 8.0 * p1[a] - p2[a]) / (12.0 * h);
        }
    }
    let push = |v: &Vec4| -> Vec4 {
        let mut w = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                w[a] += jac[a][b] * v[b];
            }
        }
        w
    };
    let lu = 2.0 / cd.u_plus.powi(2);
    let lv = 2.0 / cd.v_plus.powi(2);
    let om = cd.big_omega;
    let mut worst: f64 = 0.0;
    let pairs: [(Vec4, Vec4, f64); 4] = [
        (push(&tm.l), tc.l, lu),
        (push(&tm.n), tc.n, lv),
        (push(&tm.e_theta), tc.e_theta, om),
        (push(&tm.e_phi), tc.e_phi, om),
    ];
    for (pushed, hatted, factor) in pairs {
        for a in 0..4 {
            worst = worst.max((pushed[a] - factor * hatted[a]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_images() {
        let c = to_cylinder(&ChartPoint::minkowski(0.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((c.x[0]).abs() < 1e-15 && (c.x[1] - 0.5 * PI).abs() < 1e-15);
        let c = to_cylinder(&ChartPoint::minkowski(1.0, 0.0, 1.0, 1.0)).unwrap();
        assert!((c.x[0] - 0.5 * PI).abs() < 1e-15 && c.x[1].abs() < 1e-15);
    }

    #[test]
    fn outside_diamond_is_rejected() {
        assert!(from_cylinder(&ChartPoint::cylinder(2.0, 1.5, 1.0, 1.0)).is_err());
    }

    #[test]
    fn ds_time_at_two() {
        // Independent bisection for tan(τ/2) = tanh(1).
        let (mut lo, mut hi) = (0.0f64, 1.5f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (0.5 * mid).tan() < 1f64.tanh() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((ds_to_cylinder(2.0) - lo).abs() < 1e-14);
        assert!((ds_to_cylinder(2.0) - 1.30177).abs() < 1e-5);
    }

    #[test]
    fn axis_points_are_singular() {
        assert!(christoffels(Chart::Cylinder, &[0.0, 0.0, 1.0, 0.0]).is_err());
        assert!(metric(Chart::MinkowskiSpherical, &[0.0, 1.0, 0.0, 0.0]).is_err());
        assert!(metric(Chart::MinkowskiCartesian, &[0.0, 0.0, 0.0, 0.0]).is_ok());
    }
}

//! Closed-form initial-data families.
//!
//! Every family is built so that the profile has the parity its field needs
//! at the axis (and the antipodal pole): on Minkowski from mirrored pairs in
//! r, on the cylinder from functions of cos ζ.

use crate::error::{Error, Result};
use crate::evolve::rhs::{field_count, field_names, parity};
use crate::evolve::EquivariantState;
use crate::fields::{Ansatz, AnsatzProfiles};
use crate::geometry::Background;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    /// A exp(−((x − c)/w)²).
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// A (1 − ((x − c)/w)²)⁸ on |x − c| < w.
    CompactBump { amplitude: f64, center: f64, width: f64 },
    Constant { value: f64 },
}

impl Shape {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Shape::Gaussian { amplitude, center, width } => amplitude * (-((x - center) / width).powi(2)).exp(),
            Shape::CompactBump { amplitude, center, width } => {
                let y = (x - center) / width;
                if y.abs() < 1.0 {
                    amplitude * (1.0 - y * y).powi(8)
                } else {
                    0.0
                }
            }
            Shape::Constant { value } => value,
        }
    }

    /// k-th derivative, k ≤ 4.
    pub fn deriv(&self, x: f64, k: usize) -> f64 {
        if k == 0 {
            return self.eval(x);
        }
        match *self {
            Shape::Gaussian { amplitude, center, width } => {
                let y = (x - center) / width;
                let herm = match k {
                    1 => -2.0 * y,
                    2 => 4.0 * y * y - 2.0,
                    3 => -8.0 * y.powi(3) + 12.0 * y,
                    4 => 16.0 * y.powi(4) - 48.0 * y * y + 12.0,
                    _ => panic!("derivative order {k} not supported"),
                };
                amplitude * herm * (-y * y).exp() / width.powi(k as i32)
            }
            Shape::CompactBump { amplitude, center, width } => {
                let y = (x - center) / width;
                if y.abs() >= 1.0 {
                    return 0.0;
                }
                // (1 − y²)⁸ = Σ_j C(8,j)(−1)^j y^{2j}.
                let mut c = [0.0; 17];
                let mut binom = 1.0;
                for j in 0..=8 {
                    c[2 * j] = binom * if j % 2 == 0 { 1.0 } else { -1.0 };
                    binom = binom * (8 - j) as f64 / (j + 1) as f64;
                }
                let mut sum = 0.0;
                for (m, cm) in c.iter().enumerate().skip(k) {
                    let fall: f64 = (0..k).map(|i| (m - i) as f64).product();
                    sum += cm * fall * y.powi((m - k) as i32);
                }
                amplitude * sum / width.powi(k as i32)
            }
            Shape::Constant { .. } => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::Gaussian { amplitude, center, width } | Shape::CompactBump { amplitude, center, width } => {
                amplitude.is_finite() && center.is_finite() && width.is_finite() && width > 0.0
            }
            Shape::Constant { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid profile shape {self:?}")))
        }
    }

    /// The shape with the parity `par` about the axis (and pole). On the
    /// cylinder the shape variable is cos ζ for even and sin ζ·(shape of
    /// cos ζ) for odd profiles; on Minkowski mirrored pairs are used.
    /// `vanish_at_ends` multiplies by r² (sin²ζ), as the gauge profiles
    /// w − 1, k, a need for a regular potential at the axis.
    pub fn profile(&self, bg: Background, par: f64, vanish_at_ends: bool, rho: f64) -> f64 {
        match bg {
            Background::Minkowski => {
                let v = if let Shape::Constant { .. } = self {
                    if par > 0.0 {
                        self.eval(rho)
                    } else {
                        self.eval(rho) * rho
                    }
                } else {
                    self.eval(rho) + par * self.eval(-rho)
                };
                if vanish_at_ends {
                    v * rho * rho
                } else {
                    v
                }
            }
            Background::Cylinder => {
                let c = rho.cos();
                let base = self.eval(c);
                let v = if par > 0.0 { base } else { base * rho.sin() };
                if vanish_at_ends {
                    v * rho.sin().powi(2)
                } else {
                    v
                }
            }
        }
    }

    /// ρ-derivative of [`Shape::profile`].
    pub fn profile_slope(&self, bg: Background, par: f64, vanish_at_ends: bool, rho: f64) -> f64 {
        match bg {
            Background::Minkowski => {
                let (v, dv) = if let Shape::Constant { .. } = self {
                    if par > 0.0 {
                        (self.eval(rho), 0.0)
                    } else {
                        (self.eval(rho) * rho, self.eval(rho))
                    }
                } else {
                    (self.eval(rho) + par * self.eval(-rho), self.deriv(rho, 1) - par * self.deriv(-rho, 1))
                };
                if vanish_at_ends {
                    dv * rho * rho + 2.0 * v * rho
                } else {
                    dv
                }
            }
            Background::Cylinder => {
                let (sn, c) = rho.sin_cos();
                let base = self.eval(c);
                let dbase = -sn * self.deriv(c, 1);
                let (v, dv) = if par > 0.0 { (base, dbase) } else { (base * sn, dbase * sn + base * c) };
                if vanish_at_ends {
                    dv * sn * sn + 2.0 * v * sn * c
                } else {
                    dv
                }
            }
        }
    }
}

/// How the time derivatives of the profiles are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Momentum {
    /// Independent shape for each field's time derivative (a = 0 for the
    /// gauge slots so the Gauss law is not violated).
    Shapes,
    /// p_w = βw, p_k = βk, p_a = 0 with β from `beta`: satisfies the
    /// hedgehog Gauss law exactly.
    GaussRotation { beta: Shape },
    /// p_a from `radial`, p_w and p_h from their shapes, and p_k solved
    /// from the continuum Gauss law (s²p_a)' + 2(k p_w − w p_k) = 0. Needs
    /// w > 0.
    GaussSolved { radial: Shape },
    /// Exact λ = 0 spherical wave (g(t−r) − g(t+r))/r with g the first
    /// scalar shape (Minkowski fixed-direction only).
    SphericalWave,
}

/// Shapes of every field's profile and time derivative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    /// One entry per field (w means w − 1), in field order.
    pub q: Vec<Option<Shape>>,
    #[serde(default)]
    pub p: Vec<Option<Shape>>,
    pub momentum: Momentum,
}

impl DataSpec {
    pub fn build(&self, bg: Background, ansatz: AnsatzProfiles, n: usize, rho_max: f64, lambda: f64) -> Result<EquivariantState> {
        let nf = field_count(ansatz.class);
        let names = field_names(ansatz.class);
        if self.q.len() != nf {
            return Err(Error::Config(format!("data needs {nf} profile entries ({}), got {}", names.join(", "), self.q.len())));
        }
        if !self.p.is_empty() && self.p.len() != nf {
            return Err(Error::Config(format!("data needs {nf} momentum entries or none, got {}", self.p.len())));
        }
        for s in self.q.iter().chain(self.p.iter()).flatten() {
            s.validate()?;
        }
        let class = ansatz.class;
        let hedgehog = class == Ansatz::Hedgehog;
        if let Momentum::SphericalWave = self.momentum {
            if hedgehog || bg != Background::Minkowski {
                return Err(Error::Config("the spherical-wave family needs a Minkowski fixed-direction scalar".into()));
            }
        }
        if let Momentum::GaussRotation { beta: shape } | Momentum::GaussSolved { radial: shape } = self.momentum {
            shape.validate()?;
            if !hedgehog {
                return Err(Error::Config("gauss-law momenta need the hedgehog ansatz".into()));
            }
        }
        let spec = self.clone();
        EquivariantState::from_fn(bg, ansatz, n, rho_max, lambda, move |rho| {
            let mut q = vec![0.0; nf];
            let mut p = vec![0.0; nf];
            if let Momentum::SphericalWave = spec.momentum {
                let g = spec.q[0].unwrap_or(Shape::Constant { value: 0.0 });
                let (c, cd) = spherical_wave(&g, 0.0, rho);
                return (vec![c], vec![cd]);
            }
            for f in 0..nf {
                let par = parity(class, f);
                let vanish = hedgehog && f < 3;
                q[f] = spec.q[f].map_or(0.0, |s| s.profile(bg, par, vanish, rho));
                if hedgehog && f == 0 {
                    q[f] += 1.0;
                }
            }
            match spec.momentum {
                Momentum::Shapes => {
                    for f in 0..nf {
                        let gauge_a = hedgehog && f == 2;
                        if !gauge_a {
                            let vanish = hedgehog && f < 3;
                            p[f] = spec.p.get(f).copied().flatten().map_or(0.0, |s| s.profile(bg, parity(class, f), vanish, rho));
                        }
                    }
                }
                Momentum::GaussRotation { beta } => {
                    let b = beta.profile(bg, 1.0, true, rho);
                    p[0] = b * q[0];
                    p[1] = b * q[1];
                    p[3] = spec.p.get(3).copied().flatten().map_or(0.0, |s| s.profile(bg, -1.0, false, rho));
                }
                Momentum::GaussSolved { radial } => {
                    let (s, ds) = match bg {
                        Background::Minkowski => (rho, 1.0),
                        Background::Cylinder => (rho.sin(), rho.cos()),
                    };
                    let pa = radial.profile(bg, 1.0, false, rho);
                    let dpa = radial.profile_slope(bg, 1.0, false, rho);
                    p[0] = spec.p.first().copied().flatten().map_or(0.0, |sh| sh.profile(bg, 1.0, true, rho));
                    p[2] = pa;
                    p[1] = (2.0 * s * ds * pa + s * s * dpa + 2.0 * q[1] * p[0]) / (2.0 * q[0]);
                    p[3] = spec.p.get(3).copied().flatten().map_or(0.0, |sh| sh.profile(bg, -1.0, false, rho));
                }
                Momentum::SphericalWave => {}
            }
            (q, p)
        })
    }
}

/// (u, ∂_t u) of the exact spherical wave (g(t−r) − g(t+r))/r.
pub fn spherical_wave(g: &Shape, t: f64, r: f64) -> (f64, f64) {
    if r.abs() < 1e-3 {
        // u = −2(g′ + r²g‴/6) + O(r⁴).
        let r2 = r * r / 6.0;
        return (-2.0 * (g.deriv(t, 1) + r2 * g.deriv(t, 3)), -2.0 * (g.deriv(t, 2) + r2 * g.deriv(t, 4)));
    }
    ((g.eval(t - r) - g.eval(t + r)) / r, (g.deriv(t - r, 1) - g.deriv(t + r, 1)) / r)
}

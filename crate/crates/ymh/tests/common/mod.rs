#![allow(dead_code)]

use ymh::algebra::LieElement;
use ymh::data::{DataSpec, Momentum, Shape};
use ymh::fields::AnsatzProfiles;

/// Jacobi (sn, cn) by the arithmetic-geometric mean, parameter m = k².
pub fn jacobi_sn_cn(u: f64, m: f64) -> (f64, f64) {
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > 1e-16 && a.len() < 40 {
        let (an, bn) = (*a.last().unwrap(), b);
        a.push(0.5 * (an + bn));
        c.push(0.5 * (an - bn));
        b = (an * bn).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    (phi.sin(), phi.cos())
}

/// c(t) of c̈ + c + c³ = 0 with c(0) = amp, ċ(0) = 0.
pub fn duffing_exact(amp: f64, t: f64) -> (f64, f64) {
    let w = (1.0 + amp * amp).sqrt();
    let m = amp * amp / (2.0 * w * w);
    let (sn, cn) = jacobi_sn_cn(w * t, m);
    let dn = (1.0 - m * sn * sn).sqrt();
    (amp * cn, -amp * w * sn * dn)
}

pub fn scalar() -> AnsatzProfiles {
    AnsatzProfiles::fixed(LieElement::basis(2)).unwrap()
}

pub fn gaussian(amplitude: f64, center: f64, width: f64) -> Shape {
    Shape::Gaussian { amplitude, center, width }
}

/// Scalar bump used by the cylinder conservation runs.
pub fn scalar_bump() -> DataSpec {
    DataSpec { q: vec![Some(gaussian(1.0, 0.3, 0.35))], p: vec![Some(gaussian(0.5, -0.2, 0.35))], momentum: Momentum::Shapes }
}

/// Hedgehog bump with nonzero w, k and h and static gauge momenta.
pub fn hedgehog_bump(width: f64) -> DataSpec {
    DataSpec {
        q: vec![Some(gaussian(1.0, 0.3, width)), Some(gaussian(0.5, -0.2, width)), None, Some(gaussian(0.7, 0.1, width))],
        p: vec![],
        momentum: Momentum::Shapes,
    }
}

/// Hedgehog data satisfying the Gauss law in the continuum with a nonzero
/// radial electric field.
pub fn hedgehog_charged() -> DataSpec {
    DataSpec {
        q: vec![Some(gaussian(0.6, 0.3, 0.35)), Some(gaussian(0.4, -0.2, 0.35)), None, Some(gaussian(0.5, 0.1, 0.35))],
        p: vec![Some(gaussian(0.3, 0.0, 0.4)), None, None, Some(gaussian(0.2, 0.2, 0.4))],
        momentum: Momentum::GaussSolved { radial: gaussian(0.8, 0.0, 0.5) },
    }
}

/// Hedgehog Gauss-law data sized for a Minkowski ball of radius ~6.
pub fn minkowski_charged() -> DataSpec {
    DataSpec {
        q: vec![Some(gaussian(0.5, 0.0, 0.8)), Some(gaussian(0.3, 0.4, 0.7)), None, Some(gaussian(0.4, 0.3, 0.8))],
        p: vec![Some(gaussian(0.2, 0.0, 0.8)), None, None, Some(gaussian(0.2, -0.3, 0.8))],
        momentum: Momentum::GaussSolved { radial: gaussian(0.5, 0.0, 0.9) },
    }
}

/// (u, u_t, u_r) of the exact wave (g(t−r) − g(t+r))/r.
pub fn spherical_wave_jet(g: &Shape, t: f64, r: f64) -> (f64, f64, f64) {
    if r < 1e-3 {
        let (u, ut) = ymh::data::spherical_wave(g, t, r);
        return (u, ut, -2.0 * r * g.deriv(t, 3) / 3.0);
    }
    let (u, ut) = ymh::data::spherical_wave(g, t, r);
    let ur = (-g.deriv(t - r, 1) - g.deriv(t + r, 1)) / r - u / r;
    (u, ut, ur)
}

/// Exact spherical wave as a fixed-direction Cartesian sampler.
pub fn spherical_wave_sampler(g: Shape) -> impl ymh::sampler::FieldSampler {
    let v = LieElement::basis(2);
    ymh::sampler::FnSampler(move |p: &ymh::geometry::ChartPoint| {
        let [t, x, y, z] = p.x;
        let r = (x * x + y * y + z * z).sqrt();
        let (u, ut, ur) = spherical_wave_jet(&g, t, r);
        let mut pf = ymh::fields::PointFields::vacuum(ymh::geometry::Chart::MinkowskiCartesian);
        pf.phi = u * v;
        pf.dphi[0] = ut * v;
        if r > 0.0 {
            for (i, xi) in [x, y, z].into_iter().enumerate() {
                pf.dphi[i + 1] = (ur * xi / r) * v;
            }
        }
        Ok(pf)
    })
}

/// `hedgehog_charged` with every width set from `w`.
pub fn hedgehog_charged_width(w: f64) -> DataSpec {
    DataSpec {
        q: vec![Some(gaussian(0.6, 0.3, w)), Some(gaussian(0.4, -0.2, w)), None, Some(gaussian(0.5, 0.1, w))],
        p: vec![Some(gaussian(0.3, 0.0, w + 0.05)), None, None, Some(gaussian(0.2, 0.2, w + 0.05))],
        momentum: Momentum::GaussSolved { radial: gaussian(0.8, 0.0, w + 0.15) },
    }
}

/// Cylinder hedgehog data with a nonzero potential at the antipodal pole.
pub fn hedgehog_decay_data(n: usize) -> ymh::evolve::EquivariantState {
    use std::f64::consts::PI;
    ymh::evolve::EquivariantState::from_fn(ymh::geometry::Background::Cylinder, AnsatzProfiles::hedgehog(), n, PI, 1.0, |z| {
        (vec![1.0, 0.3 * z.sin(), 0.3 * z.cos(), 0.4 * z.sin() * (1.0 + 0.5 * z.cos())], vec![0.0; 4])
    })
    .unwrap()
}

/// Fixed-direction scalar data for the decay suite.
pub fn scalar_decay_data() -> DataSpec {
    DataSpec { q: vec![Some(gaussian(0.5, -0.5, 1.5))], p: vec![], momentum: Momentum::Shapes }
}

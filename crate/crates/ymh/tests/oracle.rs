use ymh::algebra::LieElement;
use ymh::fields::{AnsatzProfiles, Jet, PointFields, ProfileJet};
use ymh::geometry::{Background, Chart, ChartPoint};
use ymh::oracle::{max_norm, Oracle};
use ymh::sampler::{FnSampler, SymmetricSampler};

fn smooth_profiles(t: f64, r: f64) -> ProfileJet {
    let w = Jet::new(1.0 + 0.3 * r * r * t.cos(), 0.6 * r * t.cos(), -0.3 * r * r * t.sin());
    let k = Jet::new(0.2 * r * (t + 1.0).sin(), 0.2 * (t + 1.0).sin(), 0.2 * r * (t + 1.0).cos());
    let a = Jet::new(0.4 * r * r * t.cos() + 0.1, 0.8 * r * t.cos(), -0.4 * r * r * t.sin());
    let h = Jet::new(0.5 * r * (1.0 + 0.2 * t), 0.5 * (1.0 + 0.2 * t), 0.1 * r);
    ProfileJet::hedgehog(w, k, a, h)
}

#[test]
fn hedgehog_curvature_matches_potential() {
    let o = Oracle::default();
    let pts = [
        ChartPoint::cartesian(0.2, 0.3, -0.4, 0.5),
        ChartPoint::minkowski(0.7, 0.5, 1.1, 2.0),
        ChartPoint::cylinder(0.4, 1.3, 0.8, 4.0),
    ];
    for p in pts {
        let bg = if p.chart == Chart::Cylinder { Background::Cylinder } else { Background::Minkowski };
        let s = SymmetricSampler::new(bg, AnsatzProfiles::hedgehog(), smooth_profiles);
        let pf = ymh::sampler::FieldSampler::sample(&s, &p).unwrap();
        let f = o.curvature_from_potential(&s, &p).unwrap();
        let err = max_norm(&(0..6).map(|k| f.0[k] - pf.f.0[k]).collect::<Vec<_>>());
        assert!(err < 1e-9, "{p:?}: curvature mismatch {err:e}");
        let d = o.dphi_from_potential(&s, &p).unwrap();
        let err = max_norm(&(0..4).map(|k| d[k] - pf.dphi[k]).collect::<Vec<_>>());
        assert!(err < 1e-9, "{p:?}: Dφ mismatch {err:e}");
    }
}

fn plane_wave(p: &ChartPoint) -> ymh::Result<PointFields> {
    let [t, _, _, z] = p.x;
    let u = t - z;
    let f = (-(u * u)).exp();
    let df = -2.0 * u * f;
    let e1 = LieElement::basis(0);
    let mut pf = PointFields::vacuum(Chart::MinkowskiCartesian);
    pf.a[1] = f * e1;
    pf.f.set(0, 1, df * e1);
    pf.f.set(3, 1, -df * e1);
    Ok(pf)
}

#[test]
fn abelian_plane_wave_solves_everything() {
    let o = Oracle::default();
    let s = FnSampler(plane_wave);
    for p in [ChartPoint::cartesian(0.3, 0.1, 0.2, -0.4), ChartPoint::cartesian(1.0, -2.0, 0.5, 0.7)] {
        assert!(max_norm(&o.ym_residual(&s, &p).unwrap()) < 1e-8);
        assert!(max_norm(&o.wave_residual_f(&s, &p).unwrap()) < 1e-7);
        assert!(max_norm(&o.wave_residual_dphi(&s, &p, 1.0).unwrap()) < 1e-7);
        assert!(o.gauss_residual(&s, &p).unwrap().norm() < 1e-8);
        let f = o.curvature_from_potential(&s, &p).unwrap();
        let pf = plane_wave(&p).unwrap();
        assert!(max_norm(&(0..6).map(|k| f.0[k] - pf.f.0[k]).collect::<Vec<_>>()) < 1e-10);
    }
}

fn spherical_wave(t: f64, r: f64) -> ProfileJet {
    // φ = (g(t − r) − g(t + r))/r, g(x) = exp(−x²).
    let g = |x: f64| (-(x * x)).exp();
    let dg = |x: f64| -2.0 * x * g(x);
    let (u, v) = (t - r, t + r);
    let num = g(u) - g(v);
    let c = num / r;
    let cr = (-dg(u) - dg(v)) / r - num / (r * r);
    let ct = (dg(u) - dg(v)) / r;
    ProfileJet::fixed(Jet::new(c, cr, ct))
}

#[test]
fn free_spherical_wave_solves_higgs_equation() {
    let o = Oracle::default();
    let dir = AnsatzProfiles::fixed(LieElement::new(0.0, 0.6, 0.8)).unwrap();
    let s = SymmetricSampler::new(Background::Minkowski, dir, spherical_wave);
    for p in [ChartPoint::minkowski(0.5, 0.7, 1.0, 0.3), ChartPoint::cartesian(0.9, 0.2, -0.3, 0.4)] {
        let r = o.higgs_residual(&s, &p, 0.0).unwrap().norm();
        assert!(r < 1e-7, "residual {r:e}");
        assert!(o.gauss_residual(&s, &p).unwrap().norm() < 1e-14);
    }
}

#[test]
fn residual_norms_are_gauge_covariant() {
    let o = Oracle::default();
    let s = SymmetricSampler::new(Background::Minkowski, AnsatzProfiles::hedgehog(), smooth_profiles);
    let u = ymh::algebra::exponential(LieElement::new(0.3, -1.2, 2.0));
    let g = ymh::sampler::ConstantGauge { inner: &s, u };
    let p = ChartPoint::cartesian(0.2, 0.3, -0.4, 0.5);
    let a = o.ym_residual(&s, &p).unwrap();
    let b = o.ym_residual(&g, &p).unwrap();
    for k in 0..4 {
        assert!((a[k].norm() - b[k].norm()).abs() < 1e-10);
    }
    let a = o.higgs_residual(&s, &p, 0.5).unwrap().norm();
    let b = o.higgs_residual(&g, &p, 0.5).unwrap().norm();
    assert!((a - b).abs() < 1e-10);
}

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use ymh::algebra::{exponential, LieElement};
use ymh::cronstrom::ConeRegion;
use ymh::data::{DataSpec, Momentum};
use ymh::diagnostics::cone::cone_flux_density;
use ymh::diagnostics::*;
use ymh::evolve::gate::GateState;
use ymh::evolve::{run, EquivariantState, RunConfig, Trajectory};
use ymh::fields::{stress_tensor, AnsatzProfiles, PointFields, StressKind};
use ymh::geometry::{Background, Chart, ChartPoint};
use ymh::oracle::Oracle;
use ymh::sampler::{ConstantGauge, FieldSampler, FnSampler, Vacuum};

fn minkowski_run(spec: &DataSpec, ansatz: AnsatzProfiles, n: usize, lambda: f64, t_end: f64) -> Trajectory {
    let s = spec.build(Background::Minkowski, ansatz, n, 4.0, lambda).unwrap();
    let cfg = RunConfig { cfl: 0.25, t_end, sigma: 0.0, cadence: 1 };
    run(&s, &cfg, &mut |_| Ok(())).unwrap().0
}

fn scalar_data(amp: f64) -> DataSpec {
    DataSpec { q: vec![Some(gaussian(amp, 0.0, 0.8))], p: vec![Some(gaussian(0.3 * amp, 0.0, 0.8))], momentum: Momentum::Shapes }
}

fn hedgehog_cone() -> ConeRegion {
    ConeRegion::new(ChartPoint::cartesian(0.8, 0.3, 0.2, -0.1), 0.8).unwrap()
}

fn scalar_cone() -> ConeRegion {
    ConeRegion::new(ChartPoint::cartesian(1.0, 0.3, 0.1, -0.2), 1.0).unwrap()
}

/// c = r·exp(−r²) along a fixed direction, with c_t = 0.3 exp(−r²).
fn bump_fields(p: &ChartPoint) -> ymh::Result<PointFields> {
    let [_, x, y, z] = p.x;
    let r2 = x * x + y * y + z * z;
    let r = r2.sqrt();
    let v = LieElement::new(0.6, 0.0, 0.8);
    let e = (-r2).exp();
    let mut pf = PointFields::vacuum(Chart::MinkowskiCartesian);
    pf.phi = (r * e) * v;
    pf.dphi[0] = (0.3 * e) * v;
    let dr = e * (1.0 - 2.0 * r2);
    if r > 0.0 {
        for (i, xi) in [x, y, z].into_iter().enumerate() {
            pf.dphi[i + 1] = (dr * xi / r) * v;
        }
    }
    Ok(pf)
}

#[test]
fn vacuum_diagnostics_vanish() {
    let cone = hedgehog_cone();
    assert_eq!(energy_ball(&Vacuum, [0.1, 0.2, 0.3], 1.0, 0.0, 1.0, BallRule::default()).unwrap().total, 0.0);
    let c = cone_energy_identity(&Vacuum, &cone, 1.0, ConeRule::default()).unwrap();
    assert_eq!((c.lhs, c.rhs, c.residual), (0.0, 0.0, 0.0));
    assert_eq!(local_energy(&Vacuum, &cone, 1.0, 8, BallRule::default()).unwrap(), 0.0);
    let b = l2_cone_bound(&Vacuum, &cone, 1.0, frozen_constants().l2_cone_c.value, 4, ConeRule::default()).unwrap();
    assert!(b.cone_norm == 0.0 && b.bound1 == 0.0 && b.pass1 && b.pass2);
    assert!(supnorm_profile(&Vacuum, &cone, 4, SupRule::default()).unwrap().iter().all(|s| s.n == 0.0));
}

#[test]
fn energy_ball_matches_monte_carlo() {
    let s = FnSampler(bump_fields);
    let (center, radius) = ([0.2, -0.1, 0.3], 1.5);
    let quad = energy_ball(&s, center, radius, 0.0, 1.0, BallRule::default()).unwrap().total;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = 200_000;
    let (mut sum, mut sum2) = (0.0, 0.0);
    let mut k = 0;
    while k < m {
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-radius..radius));
        if x.iter().map(|v| v * v).sum::<f64>() > radius * radius {
            continue;
        }
        let p = ChartPoint::cartesian(0.0, center[0] + x[0], center[1] + x[1], center[2] + x[2]);
        let d = energy_density(&s.sample(&p).unwrap(), &p, 1.0).unwrap().total;
        sum += d;
        sum2 += d * d;
        k += 1;
    }
    let vol = 4.0 / 3.0 * PI * radius.powi(3);
    let mean = sum / m as f64;
    let sigma = ((sum2 / m as f64 - mean * mean) / m as f64).sqrt() * vol;
    assert!((quad - mean * vol).abs() < 3.0 * sigma, "quadrature {quad} vs Monte Carlo {} ± {sigma}", mean * vol);
}

#[test]
fn hedgehog_ball_energy_is_stable_under_angular_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let st = GateState::random(Background::Minkowski, AnsatzProfiles::hedgehog(), 1.0, &mut rng);
    let s = FnSampler(|p: &ChartPoint| st.fields(p));
    let coarse = BallRule { radial: 48, polar: 8, azimuthal: 8 };
    let fine = BallRule { radial: 48, polar: 16, azimuthal: 16 };
    let a = energy_ball(&s, [0.0; 3], 0.9, 0.1, 1.0, coarse).unwrap().total;
    let b = energy_ball(&s, [0.0; 3], 0.9, 0.1, 1.0, fine).unwrap().total;
    assert!((a - b).abs() < 1e-8 * b, "{a} vs {b}");
}

#[test]
fn flux_density_is_the_stress_tensor_flux() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..20 {
        let st = GateState::random(Background::Minkowski, AnsatzProfiles::hedgehog(), 1.0, &mut rng);
        let p = ChartPoint::cartesian(rng.gen_range(-0.5..0.5), rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
        let pf = st.fields(&p).unwrap();
        let (th, ph) = (rng.gen_range(0.1..3.0f64), rng.gen_range(0.0..6.2f64));
        let l = [-1.0, th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let t = stress_tensor(&pf, &p, StressKind::Canonical, 1.0);
        let flux: f64 = -(0..4).map(|a| t[a][0] * l[a]).sum::<f64>();
        let d = cone_flux_density(&pf, th, ph, 1.0);
        assert!((d - flux).abs() < 1e-12 * flux.abs().max(1.0), "sample {k}: {d} vs {flux}");
        assert!(d >= 0.0);
    }
}

#[test]
fn cone_identity_on_the_exact_spherical_wave() {
    let s = spherical_wave_sampler(gaussian(1.0, 0.0, 0.7));
    let cone = ConeRegion::new(ChartPoint::cartesian(1.2, 0.3, -0.2, 0.1), 0.9).unwrap();
    let c = cone_energy_identity(&s, &cone, 0.0, ConeRule::default()).unwrap();
    assert!(c.lhs > 1.0 && c.residual < 1e-6, "{c:?}");
}

#[test]
fn cone_identity_on_an_evolved_hedgehog() {
    let traj = minkowski_run(&minkowski_charged(), AnsatzProfiles::hedgehog(), 800, 1.0, 0.8);
    let c = cone_energy_identity(&traj.sampler(), &hedgehog_cone(), 1.0, ConeRule::default()).unwrap();
    assert!(c.residual < 1e-3, "{c:?}");
}

#[test]
fn cone_identity_converges_with_resolution() {
    let spec = minkowski_charged();
    let r: Vec<f64> = [200, 400]
        .iter()
        .map(|&n| {
            let traj = minkowski_run(&spec, AnsatzProfiles::hedgehog(), n, 1.0, 0.8);
            cone_energy_identity(&traj.sampler(), &hedgehog_cone(), 1.0, ConeRule::default()).unwrap().residual
        })
        .collect();
    assert!(r[0] / r[1] > 8.0, "residuals {r:?}");
}

#[test]
fn local_energy_is_bounded_by_the_base_energy() {
    let traj = minkowski_run(&minkowski_charged(), AnsatzProfiles::hedgehog(), 400, 1.0, 0.8);
    let s = traj.sampler();
    let cone = hedgehog_cone();
    let a = cone.apex.x;
    let base = energy_ball(&s, [a[1], a[2], a[3]], cone.t0, 0.0, 1.0, BallRule::default()).unwrap().total;
    let e8 = local_energy(&s, &cone, 1.0, 8, BallRule::default()).unwrap();
    let e16 = local_energy(&s, &cone, 1.0, 16, BallRule::default()).unwrap();
    assert!(e8 <= base * (1.0 + 1e-12) && e8 > 0.0);
    assert!((e16 - e8).abs() < 1e-6, "{e8} vs {e16}");
}

#[test]
fn l2_cone_bound_holds_on_runs() {
    let c = frozen_constants().l2_cone_c.value;
    let traj = minkowski_run(&scalar_data(0.5), scalar(), 400, 0.0, 1.0);
    let b = l2_cone_bound(&traj.sampler(), &scalar_cone(), 0.0, c, 8, ConeRule::default()).unwrap();
    assert!(b.pass1 && b.cone_norm < 0.5 * b.bound1 && b.bound2.is_none(), "{b:?}");
    let traj = minkowski_run(&scalar_data(0.5), scalar(), 400, 1.0, 1.0);
    let b = l2_cone_bound(&traj.sampler(), &scalar_cone(), 1.0, c, 8, ConeRule::default()).unwrap();
    assert!(b.pass1 && b.pass2, "{b:?}");
    let traj = minkowski_run(&minkowski_charged(), AnsatzProfiles::hedgehog(), 400, 1.0, 0.8);
    let b = l2_cone_bound(&traj.sampler(), &hedgehog_cone(), 1.0, c, 8, ConeRule::default()).unwrap();
    assert!(b.pass1 && b.pass2, "{b:?}");
}

#[test]
fn frozen_constants_are_recorded() {
    let k = frozen_constants();
    assert!(k.l2_cone_c.value >= k.l2_cone_c.measured && k.l2_cone_c.value > 0.0);
    assert!(k.norm_upper_c.value >= k.norm_upper_c.measured);
}

#[test]
fn supnorm_of_the_spherical_wave_matches_the_exact_sup() {
    let g = gaussian(1.0, 0.0, 0.7);
    let spec = DataSpec { q: vec![Some(g)], p: vec![], momentum: Momentum::SphericalWave };
    let traj = minkowski_run(&spec, scalar(), 800, 0.0, 1.0);
    let cone = ConeRegion::new(ChartPoint::cartesian(1.0, 0.0, 0.0, 0.0), 1.0).unwrap();
    let rule = SupRule { radial: 400, polar: 2, azimuthal: 2 };
    let prof = supnorm_profile(&traj.sampler(), &cone, 5, rule).unwrap();
    for s in &prof[..prof.len() - 1] {
        let exact = (0..=4000)
            .map(|j| {
                let (_, ut, ur) = spherical_wave_jet(&g, s.time, s.radius * j as f64 / 4000.0);
                ut * ut + ur * ur
            })
            .fold(0.0, f64::max);
        assert!((s.n - exact).abs() < 0.01 * exact, "s = {}: {} vs {exact}", s.s, s.n);
        assert_eq!(s.f_sq, 0.0);
    }
}

#[test]
fn hedgehog_supnorm_is_grid_converged() {
    let profs: Vec<Vec<SupSample>> = [400, 800]
        .iter()
        .map(|&n| {
            let traj = minkowski_run(&minkowski_charged(), AnsatzProfiles::hedgehog(), n, 1.0, 0.8);
            supnorm_profile(&traj.sampler(), &hedgehog_cone(), 8, SupRule::default()).unwrap()
        })
        .collect();
    for (a, b) in profs[0].iter().zip(&profs[1]) {
        assert!(b.n.is_finite());
        assert!((a.n - b.n).abs() < 1e-5 * b.n.max(1.0), "s = {}: {} vs {}", a.s, a.n, b.n);
    }
}

#[test]
fn kirchhoff_representation_of_free_waves() {
    let traj = minkowski_run(&scalar_data(1.0), scalar(), 800, 0.0, 1.0);
    let p = ChartPoint::cartesian(1.0, 0.3, 0.1, -0.2);
    let r = scalar_lightcone_representation(&traj.sampler(), &p, 0.0, 0.0, ConeRule::default()).unwrap();
    assert!(r.residual < 1e-6 && r.value.norm() > 0.1, "{r:?}");
    let on_base = ChartPoint::cartesian(0.0, 0.3, 0.1, -0.2);
    assert_eq!(scalar_lightcone_representation(&traj.sampler(), &on_base, 0.0, 0.0, ConeRule::default()).unwrap().residual, 0.0);
}

#[test]
fn nonlinear_lightcone_representation_converges() {
    let p = ChartPoint::cartesian(1.0, 0.3, 0.1, -0.2);
    let r: Vec<f64> = [200, 400]
        .iter()
        .map(|&n| {
            let traj = minkowski_run(&scalar_data(0.5), scalar(), n, 1.0, 1.0);
            let rep = scalar_lightcone_representation(&traj.sampler(), &p, 0.0, 1.0, ConeRule::default()).unwrap();
            assert!(rep.source.norm() > 1e-3);
            rep.residual
        })
        .collect();
    assert!(r[1] < 1e-4 && r[0] / r[1] > 8.0, "{r:?}");
}

#[test]
fn decay_fit_of_exact_exponential() {
    let series: Vec<(f64, f64)> = (0..50).map(|k| {
        let x = 0.1 * k as f64;
        (x, 3.0 * (-x).exp())
    }).collect();
    let f = decay_fit(&series, [0.0, 5.0]).unwrap();
    assert!((f.exponent + 1.0).abs() < 1e-9 && !f.envelope && f.residual < 1e-12);
}

#[test]
fn decay_fit_uses_envelope_maxima() {
    let series: Vec<(f64, f64)> = (0..2000).map(|k| {
        let x = 0.005 * k as f64;
        (x, (-0.5 * x).exp() * (1.1 + (7.0 * x).cos()))
    }).collect();
    let f = decay_fit(&series, [1.0, 9.0]).unwrap();
    assert!(f.envelope && (f.exponent + 0.5).abs() < 1e-3, "{f:?}");
}

#[test]
fn decay_fit_rejects_bad_windows() {
    let series = vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.0)];
    assert!(decay_fit(&series, [1.0, 1.0]).is_err());
    assert!(decay_fit(&series, [0.0, 2.0]).is_err());
    assert!(decay_fit(&series, [5.0, 6.0]).is_err());
}

fn cylinder_run(s: &EquivariantState, t_end: f64) -> Trajectory {
    let cfg = RunConfig { cfl: 0.25, t_end, sigma: 0.0, cadence: 2 };
    run(s, &cfg, &mut |_| Ok(())).unwrap().0
}

#[test]
fn decay_suite_rates() {
    let s = scalar_decay_data().build(Background::Cylinder, scalar(), 256, PI, 1.0).unwrap();
    let suite = decay_suite(&cylinder_run(&s, 3.11), &DecayWindows::default()).unwrap();
    let ds = suite.ds_phi.unwrap().exponent;
    let axis = suite.axis_phi.unwrap().exponent;
    assert!((ds + 1.0).abs() < 0.1 && (axis + 2.0).abs() < 0.15, "{ds} {axis}");
    assert!(suite.ds_a.is_none() && suite.null_al.is_none());

    let suite = decay_suite(&cylinder_run(&hedgehog_decay_data(256), 3.11), &DecayWindows::default()).unwrap();
    let a = suite.ds_a.unwrap().exponent;
    let al = suite.null_al.unwrap().exponent;
    let an = suite.null_an.unwrap().exponent;
    assert!((a + 1.0).abs() < 0.1 && (al + 2.0).abs() < 0.2 && (an + 2.0).abs() < 0.2, "{a} {al} {an}");
    assert!(suite.axis_phi.is_none());
}

#[test]
fn decay_suite_needs_a_long_enough_cylinder_run() {
    let traj = cylinder_run(&hedgehog_decay_data(64), 1.0);
    assert!(matches!(decay_suite(&traj, &DecayWindows::default()), Err(ymh::Error::Domain(_))));
}

#[test]
fn diagnostics_are_gauge_invariant() {
    let traj = minkowski_run(&minkowski_charged(), AnsatzProfiles::hedgehog(), 200, 1.0, 0.8);
    let s = traj.sampler();
    let g = ConstantGauge { inner: &s, u: exponential(LieElement::new(0.7, -1.3, 0.4)) };
    let cone = hedgehog_cone();
    let rule = ConeRule { radial: 16, polar: 8, azimuthal: 16 };
    let a = cone_energy_identity(&s, &cone, 1.0, rule).unwrap();
    let b = cone_energy_identity(&g, &cone, 1.0, rule).unwrap();
    assert!((a.lhs - b.lhs).abs() < 1e-10 && (a.rhs - b.rhs).abs() < 1e-10);
    let a = l2_cone_bound(&s, &cone, 1.0, 0.5, 4, rule).unwrap();
    let b = l2_cone_bound(&g, &cone, 1.0, 0.5, 4, rule).unwrap();
    assert!((a.cone_norm - b.cone_norm).abs() < 1e-10 && (a.bound1 - b.bound1).abs() < 1e-10);
    let sr = SupRule { radial: 6, polar: 4, azimuthal: 4 };
    let a = supnorm_profile(&s, &cone, 4, sr).unwrap();
    let b = supnorm_profile(&g, &cone, 4, sr).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.n - y.n).abs() < 1e-10 * x.n.max(1.0));
    }
}

#[test]
fn norm_equivalence_on_the_cone() {
    let r = norm_equivalence_check(10_000, 1.0, 2024).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.lower_margin >= 1.0);
    assert!(r.min_ratio > 0.0 && r.max_ratio <= frozen_constants().norm_upper_c.value, "{r:?}");
}

#[test]
fn stress_divergence_converges_on_cylinder_runs() {
    let p = ChartPoint::cylinder(0.15, 1.3, 1.0, 0.4);
    let oracle = Oracle::new(1e-3);
    let r: Vec<f64> = [256, 512]
        .iter()
        .map(|&n| {
            let s = hedgehog_charged().build(Background::Cylinder, AnsatzProfiles::hedgehog(), n, PI, 1.0).unwrap();
            let traj = cylinder_run(&s, 0.3);
            let d = stress_divergence(&traj.sampler_at(&p), &p, 1.0, &oracle).unwrap();
            d.iter().map(|v| v.abs()).fold(0.0, f64::max)
        })
        .collect();
    assert!(r[1] < 5e-5 && r[0] / r[1] > 3.0, "{r:?}");
}

#[test]
fn sobolev_energies_stay_bounded_along_a_run() {
    let s = hedgehog_bump(0.35).build(Background::Cylinder, AnsatzProfiles::hedgehog(), 128, PI, 1.0).unwrap();
    let traj = cylinder_run(&s, 1.0);
    let oracle = Oracle::new(1e-3);
    let mut vals = Vec::new();
    for tau in [0.1, 0.5, 0.9] {
        let e = sobolev_energies(|q| traj.sampler_at(q), tau, 24, &oracle).unwrap();
        assert!(e.e1.is_finite() && e.e2.is_finite() && e.e1 > 0.0);
        vals.push(e.e1 + e.e2);
    }
    let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!(hi < 10.0 * lo, "{vals:?}");
}

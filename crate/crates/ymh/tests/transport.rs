mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use ymh::data::{DataSpec, Momentum, Shape};
use ymh::evolve::gate::GateState;
use ymh::evolve::{run, EquivariantState, RunConfig, Trajectory};
use ymh::fields::{Ansatz, AnsatzProfiles, Jet, ProfileJet};
use ymh::geometry::{
    conformal_factor, ds_to_cylinder, gamma_norm_one_form, minkowski_jacobian, to_cylinder, Background, Chart,
    ChartPoint,
};
use ymh::oracle::{max_norm, Oracle};
use ymh::sampler::{FieldSampler, FnSampler, SymmetricSampler};
use ymh::transport::*;
use ymh::Error;

fn mink(spec: &DataSpec, ansatz: AnsatzProfiles, n: usize, r_max: f64) -> TemporalGaugeData {
    TemporalGaugeData::new(spec.build(Background::Minkowski, ansatz, n, r_max, 1.0).unwrap()).unwrap()
}

#[test]
fn zero_data_maps_to_zero_data() {
    let v = EquivariantState::vacuum(Background::Minkowski, AnsatzProfiles::hedgehog(), 200, 6.0, 1.0).unwrap();
    let c = data_to_cylinder(&TemporalGaugeData::new(v.clone()).unwrap(), 400).unwrap();
    let vc = EquivariantState::vacuum(Background::Cylinder, AnsatzProfiles::hedgehog(), 400, PI, 1.0).unwrap();
    assert_eq!(c.state, vc);
    let back = data_to_minkowski(&c, 200, 6.0).unwrap();
    assert_eq!(back.state, v);
}

#[test]
fn weights_are_one_at_unit_radius() {
    for class in [Ansatz::Hedgehog, Ansatz::FixedDirection] {
        for f in 0..4 {
            assert_eq!(profile_weights(class, f, 1.0), (1.0, 1.0));
        }
    }
    assert_eq!(profile_weights(Ansatz::Hedgehog, 2, 3.0), (5.0, 25.0));
}

#[test]
fn round_trip_is_the_identity() {
    let d = mink(&minkowski_charged(), AnsatzProfiles::hedgehog(), 800, 6.0);
    let c = data_to_cylinder(&d, 1600).unwrap();
    let back = data_to_minkowski(&c, 800, 6.0).unwrap();
    let mut err: f64 = 0.0;
    for f in 0..4 {
        for i in 0..=d.state.active {
            err = err.max((back.state.q[f][i] - d.state.q[f][i]).abs()).max((back.state.p[f][i] - d.state.p[f][i]).abs());
        }
    }
    assert!(err < 1e-8, "round trip error {err:e}");
}

#[test]
fn transported_profiles_follow_the_weights() {
    let d = mink(&minkowski_charged(), AnsatzProfiles::hedgehog(), 800, 6.0);
    let c = data_to_cylinder(&d, 1600).unwrap();
    let src = Trajectory::new(d.state.clone());
    let dst = Trajectory::new(c.state.clone());
    for zeta in [0.3f64, 1.0, PI / 2.0, 2.0] {
        let r = (0.5 * zeta).tan();
        let a = src.profiles(0.0, r).unwrap();
        let b = dst.profiles(0.0, zeta).unwrap();
        let rp = 0.5 * (1.0 + r * r);
        let expect = [(a.f[0].v, a.f[0].dt * rp), (a.f[1].v, a.f[1].dt * rp), (a.f[2].v * rp, a.f[2].dt * rp * rp), (a.f[3].v * rp, a.f[3].dt * rp * rp)];
        for f in 0..4 {
            assert!((b.f[f].v - expect[f].0).abs() < 1e-8, "field {f} at ζ = {zeta}");
            assert!((b.f[f].dt - expect[f].1).abs() < 1e-8);
        }
    }
}

#[test]
fn gauss_constraint_holds_on_both_frames() {
    let oracle = Oracle::default();
    let d = mink(&minkowski_charged(), AnsatzProfiles::hedgehog(), 800, 6.0);
    let c = data_to_cylinder(&d, 1600).unwrap();
    let tm = Trajectory::new(d.state.clone());
    let tc = Trajectory::new(c.state.clone());
    let mut worst: [f64; 2] = [0.0; 2];
    for zeta in [0.4f64, 0.9, 1.4, 1.9] {
        let r = (0.5 * zeta).tan();
        let pm = ChartPoint::minkowski(0.0, r, 1.1, 0.4);
        let pc = ChartPoint::cylinder(0.0, zeta, 1.1, 0.4);
        worst[0] = worst[0].max(oracle.gauss_residual(&tm.sampler_at(&pm), &pm).unwrap().norm());
        worst[1] = worst[1].max(oracle.gauss_residual(&tc.sampler_at(&pc), &pc).unwrap().norm());
    }
    assert!(worst[0] < 1e-6 && worst[1] < 1e-6, "{worst:?}");
}

#[test]
fn data_that_do_not_decay_are_rejected() {
    let spec = DataSpec { q: vec![Some(Shape::Constant { value: 0.5 })], p: vec![], momentum: Momentum::Shapes };
    let d = mink(&spec, scalar(), 200, 4.0);
    assert!(matches!(data_to_cylinder(&d, 400), Err(Error::Domain(_))));
}

#[test]
fn resolution_mismatch_is_rejected() {
    let d = mink(&minkowski_charged(), AnsatzProfiles::hedgehog(), 100, 6.0);
    assert!(matches!(data_to_cylinder(&d, 100_000), Err(Error::Config(_))));
}

#[test]
fn time_directions_align_on_the_initial_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let r: f64 = rng.gen_range(0.0..20.0);
        let j = minkowski_jacobian(0.0, r);
        let rp = 0.5 * (1.0 + r * r);
        // ∂_τ = (∂t/∂τ) ∂_t + (∂r/∂τ) ∂_r = r₊² ∂_t.
        assert!((j[0][0] - rp).abs() < 1e-12 * rp && j[1][0].abs() < 1e-12);
    }
}

/// Closed-form constant mode c = cos τ of the λ = 0 conformal scalar.
fn cos_mode() -> SymmetricSampler<impl ymh::sampler::ProfileSource> {
    SymmetricSampler::new(Background::Cylinder, scalar(), |t: f64, _rho: f64| ProfileJet::fixed(Jet::new(t.cos(), 0.0, -t.sin())))
}

#[test]
fn constant_mode_pulls_back_to_the_scaled_closed_form() {
    let s = cos_mode();
    for t in [0.0, 0.5, 2.0, 7.0] {
        let p = ChartPoint::minkowski(t, 0.0, 0.0, 0.0);
        let pf = solution_pullback(&s, &p).unwrap();
        let om = 2.0 / (1.0 + t * t);
        let expect = om * (2.0 * t.atan()).cos();
        assert!((pf.phi.c[2] - expect).abs() < 1e-12 && pf.phi.c[0] == 0.0, "t = {t}");
    }
}

#[test]
fn evolved_constant_mode_pulls_back() {
    let spec = DataSpec { q: vec![Some(Shape::Constant { value: 1.0 })], p: vec![], momentum: Momentum::Shapes };
    let s = spec.build(Background::Cylinder, scalar(), 64, PI, 0.0).unwrap();
    let cfg = RunConfig { cfl: 0.1, t_end: 2.5, sigma: 0.0, cadence: 2 };
    let (traj, _) = run(&s, &cfg, &mut |_| Ok(())).unwrap();
    for t in [0.5, 1.0, 3.0] {
        let p = ChartPoint::minkowski(t, 0.0, 0.0, 0.0);
        let q = to_cylinder(&p).unwrap();
        let pf = solution_pullback(&traj.sampler_at(&q), &p).unwrap();
        let expect = 2.0 / (1.0 + t * t) * (2.0 * t.atan()).cos();
        assert!((pf.phi.c[2] - expect).abs() < 1e-8, "t = {t}: {} vs {expect}", pf.phi.c[2]);
    }
}

#[test]
fn pulled_back_solution_solves_the_minkowski_equations() {
    let oracle = Oracle::default();
    let spec = hedgehog_charged();
    let mut res = Vec::new();
    for n in [256, 512] {
        let s = spec.build(Background::Cylinder, AnsatzProfiles::hedgehog(), n, PI, 1.0).unwrap();
        let cfg = RunConfig { cfl: 0.25, t_end: 1.0, sigma: 0.0, cadence: 1 };
        let (traj, _) = run(&s, &cfg, &mut |_| Ok(())).unwrap();
        let mut worst: f64 = 0.0;
        for (t, r) in [(0.3, 0.5), (0.4, 1.2), (0.2, 0.8)] {
            let p = ChartPoint::minkowski(t, r, 1.0, 0.7);
            let q = to_cylinder(&p).unwrap();
            let samp = Pullback(traj.sampler_at(&q));
            let ym = oracle.ym_residual(&samp, &p).unwrap();
            let hg = oracle.higgs_residual(&samp, &p, 1.0).unwrap();
            worst = worst.max(max_norm(&ym)).max(hg.norm());
        }
        res.push(worst);
    }
    // Second derivatives of the quartic trajectory interpolant are O(Δ³).
    assert!(res[1] < 1e-4 && res[0] / res[1] > 4.0, "{res:?}");
}

#[test]
fn de_sitter_slice_at_zero_is_the_cylinder_slice() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let st = GateState::random(Background::Cylinder, AnsatzProfiles::hedgehog(), 1.0, &mut rng);
    let s = FnSampler(|p: &ChartPoint| st.fields(p));
    let q = ChartPoint::de_sitter(0.0, 1.2, 0.9, 0.3);
    let a = ds_pullback(&s, &q).unwrap();
    let b = s.sample(&ChartPoint::cylinder(0.0, 1.2, 0.9, 0.3)).unwrap();
    assert_eq!(a.phi, b.phi);
    assert_eq!(a.a, b.a);
}

#[test]
fn de_sitter_scaling_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let st = GateState::random(Background::Cylinder, AnsatzProfiles::hedgehog(), 1.0, &mut rng);
    let s = FnSampler(|p: &ChartPoint| st.fields(p));
    for _ in 0..100 {
        let q = ChartPoint::de_sitter(rng.gen_range(-1.5..1.5), rng.gen_range(0.3..2.8), rng.gen_range(0.3..2.8), rng.gen_range(0.0..6.0));
        let tau = ds_to_cylinder(q.x[0]);
        let pc = ChartPoint::cylinder(tau, q.x[1], q.x[2], q.x[3]);
        let tilde = ds_pullback(&s, &q).unwrap();
        let hat = s.sample(&pc).unwrap();
        let ratio = tilde.phi.norm() / hat.phi.norm();
        assert!((ratio - tau.cos()).abs() < 1e-12);
        let na = gamma_norm_one_form(Chart::DeSitter, &q.x, &tilde.a);
        let nh = gamma_norm_one_form(Chart::Cylinder, &pc.x, &hat.a);
        assert!((na - tau.cos() * nh).abs() < 1e-10 * nh.max(1.0), "{na} vs {}", tau.cos() * nh);
    }
}

#[test]
fn conformal_factor_on_the_initial_surface() {
    for r in [0.0, 0.5, 1.0, 4.0] {
        let cd = conformal_factor(&ChartPoint::minkowski(0.0, r, 1.0, 0.0)).unwrap();
        assert!((cd.big_omega * r_plus_sq(r) - 1.0).abs() < 1e-14);
        assert!(cd.upsilon[0].abs() < 1e-15);
    }
}

/// Finite L² norms on the sphere allow r⁻¹ tails on ℝ³: the weighted norm
/// ∫|φ|²/r₊² converges while ∫_{B(R)}|φ|² grows linearly.
#[test]
fn cylinder_norms_allow_inverse_radius_tails() {
    let phi = |r: f64| 1.0 / (1.0 + r * r).sqrt();
    let l2 = |radius: f64, weighted: bool| {
        let (x, w) = ymh::quadrature::gauss_legendre(40);
        let panels = 400;
        let h = radius / panels as f64;
        let mut s = 0.0;
        for k in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                let r = h * (k as f64 + 0.5 * (xi + 1.0));
                let wt = if weighted { 1.0 / r_plus_sq(r) } else { 1.0 };
                s += 0.5 * h * wi * 4.0 * PI * r * r * phi(r).powi(2) * wt;
            }
        }
        s
    };
    let (a, b) = (l2(100.0, false), l2(200.0, false));
    assert!(b - a > 0.9 * 4.0 * PI * 100.0, "unweighted {a} -> {b}");
    let (a, b) = (l2(1e3, true), l2(2e3, true));
    assert!(b - a < 1e-2 * a && a.is_finite());
}

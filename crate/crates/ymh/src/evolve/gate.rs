//! Cross-check of the reduced equations against the covariant oracles.
//!
//! A random smooth state (f₀, f₁) is turned into a space-time field by the
//! Taylor polynomial f₀ + t f₁ + ½t² f₂ with f₂ from [`point_rhs`]. At t = 0
//! the full field equations must then hold at every off-axis event.

use super::rhs::{field_count, parity, point_rhs, reduced_gauss, RadialJet};
use super::{reduced_rhs, EquivariantState, GHOSTS};
use crate::algebra::LieElement;
use crate::data::{DataSpec, Momentum, Shape};
use crate::error::{Error, Result};
use crate::quadrature::lagrange_weights;
use crate::sampler::{ProfileSource, SymmetricSampler};
use crate::fields::{fixed_direction_fields, hedgehog_fields, Ansatz, AnsatzProfiles, Jet, PointFields, ProfileJet};
use crate::geometry::{Background, ChartPoint};
use crate::oracle::{max_norm, Oracle};
use crate::sampler::FnSampler;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Polynomial profile Σ c_j ρ^j.
#[derive(Clone, Debug)]
struct Poly(Vec<f64>);

impl Poly {
    fn eval(&self, r: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (j, c) in self.0.iter().enumerate() {
            let j = j as i32;
            out[0] += c * r.powi(j);
            if j >= 1 {
                out[1] += c * j as f64 * r.powi(j - 1);
            }
            if j >= 2 {
                out[2] += c * (j * (j - 1)) as f64 * r.powi(j - 2);
            }
            if j >= 3 {
                out[3] += c * (j * (j - 1) * (j - 2)) as f64 * r.powi(j - 3);
            }
        }
        out
    }
}

/// A random smooth state in closed form together with its reduced
/// accelerations.
pub struct GateState {
    pub background: Background,
    pub ansatz: AnsatzProfiles,
    pub lambda: f64,
    q: Vec<Poly>,
    p: Vec<Poly>,
    /// Added to the accelerations; zero except in negative controls.
    pub bias: f64,
}

impl GateState {
    pub fn random(background: Background, ansatz: AnsatzProfiles, lambda: f64, rng: &mut impl Rng) -> Self {
        let nf = field_count(ansatz.class);
        let mut poly = |base: f64| Poly((0..5).map(|j| if j == 0 { base } else { 0.0 } + rng.gen_range(-0.4..0.4) / (1.0 + j as f64)).collect());
        let bases: Vec<f64> = match ansatz.class {
            Ansatz::Hedgehog => vec![1.0, 0.0, 0.0, 0.0],
            Ansatz::FixedDirection => vec![0.0],
        };
        let q = (0..nf).map(|f| poly(bases[f])).collect();
        let p = (0..nf).map(|_| poly(0.0)).collect();
        GateState { background, ansatz, lambda, q, p, bias: 0.0 }
    }

    /// State with polynomial coefficients given explicitly.
    pub fn from_coefficients(
        background: Background,
        ansatz: AnsatzProfiles,
        lambda: f64,
        q: Vec<Vec<f64>>,
        p: Vec<Vec<f64>>,
    ) -> Self {
        GateState { background, ansatz, lambda, q: q.into_iter().map(Poly).collect(), p: p.into_iter().map(Poly).collect(), bias: 0.0 }
    }

    fn accel(&self, rho: f64) -> Result<[f64; 4]> {
        let jets: Vec<RadialJet> = self
            .q
            .iter()
            .map(|f| {
                let e = f.eval(rho);
                RadialJet::new(e[0], e[1], e[2])
            })
            .collect();
        let mut a = point_rhs(self.background, self.ansatz.class, self.lambda, rho, &jets)?;
        for x in a.iter_mut() {
            *x += self.bias;
        }
        Ok(a)
    }

    /// Profile jets of the Taylor-in-time field at (t, ρ).
    pub fn jet(&self, t: f64, rho: f64) -> Result<ProfileJet> {
        let h = 1e-4;
        let a0 = self.accel(rho)?;
        let am2 = self.accel(rho - 2.0 * h)?;
        let am1 = self.accel(rho - h)?;
        let ap1 = self.accel(rho + h)?;
        let ap2 = self.accel(rho + 2.0 * h)?;
        let mut out = ProfileJet::default();
        for f in 0..self.q.len() {
            let q = self.q[f].eval(rho);
            let p = self.p[f].eval(rho);
            let da = (am2[f] - 8.0 * am1[f] + 8.0 * ap1[f] - ap2[f]) / (12.0 * h);
            out.f[f] = Jet::new(
                q[0] + t * p[0] + 0.5 * t * t * a0[f],
                q[1] + t * p[1] + 0.5 * t * t * da,
                p[0] + t * a0[f],
            );
        }
        Ok(out)
    }

    pub fn fields(&self, p: &ChartPoint) -> Result<PointFields> {
        let j = self.jet(p.x[0], p.radial_coordinate())?;
        match self.ansatz.class {
            Ansatz::Hedgehog => hedgehog_fields(&j, p),
            Ansatz::FixedDirection => fixed_direction_fields(&j, self.ansatz.direction, p),
        }
    }

    /// Reduced Gauss combination at t = 0.
    pub fn reduced_gauss(&self, rho: f64) -> f64 {
        let ev = |f: &Poly| {
            let e = f.eval(rho);
            RadialJet::new(e[0], e[1], e[2])
        };
        let q: Vec<RadialJet> = self.q.iter().map(ev).collect();
        let p: Vec<RadialJet> = self.p.iter().map(ev).collect();
        reduced_gauss(self.background, rho, &q, &p)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub samples: usize,
    /// Largest |spatial Yang–Mills residual| over the samples.
    pub max_ym: f64,
    pub max_higgs: f64,
    /// Largest mismatch between the oracle Gauss residual and the reduced
    /// Gauss combination mapped to the algebra.
    pub max_gauss: f64,
    /// Largest oracle residual of grid states advanced with `reduced_rhs`.
    pub max_grid: f64,
}

impl GateReport {
    pub fn max(&self) -> f64 {
        self.max_ym.max(self.max_higgs).max(self.max_gauss).max(self.max_grid)
    }
}

/// Regular grid state from the closed-form families with random amplitudes.
pub fn random_grid_state(bg: Background, ansatz: AnsatzProfiles, rng: &mut impl Rng) -> Result<EquivariantState> {
    let mut shape = |scale: f64| Shape::Gaussian {
        amplitude: scale * rng.gen_range(-1.0..1.0),
        center: rng.gen_range(-0.3..0.3),
        width: rng.gen_range(0.6..0.9),
    };
    let (n, rho_max) = match bg {
        Background::Cylinder => (1024, PI),
        Background::Minkowski => (1024, 4.0),
    };
    let spec = match ansatz.class {
        Ansatz::Hedgehog => DataSpec {
            q: vec![Some(shape(0.5)), Some(shape(0.5)), Some(shape(0.3)), Some(shape(0.5))],
            p: vec![Some(shape(0.3)), Some(shape(0.3)), None, Some(shape(0.3))],
            momentum: Momentum::Shapes,
        },
        Ansatz::FixedDirection => DataSpec { q: vec![Some(shape(0.8))], p: vec![Some(shape(0.5))], momentum: Momentum::Shapes },
    };
    spec.build(bg, ansatz, n, rho_max, rng.gen_range(0.0..2.0))
}

/// Random off-axis event for the background.
pub fn random_event(bg: Background, rng: &mut impl Rng, cartesian: bool) -> ChartPoint {
    let th = rng.gen_range(0.3..PI - 0.3);
    let ph = rng.gen_range(0.0..2.0 * PI);
    match bg {
        Background::Cylinder => ChartPoint::cylinder(0.0, rng.gen_range(0.3..PI - 0.3), th, ph),
        Background::Minkowski => {
            let r = rng.gen_range(0.3..1.8);
            let p = ChartPoint::minkowski(0.0, r, th, ph);
            if cartesian {
                crate::geometry::spherical_to_cartesian(&p)
            } else {
                p
            }
        }
    }
}

/// The oracle Gauss residual predicted from the reduced combination 𝒢:
/// 𝒢/(g s²) n.
pub fn gauss_from_reduced(bg: Background, p: &ChartPoint, g: f64) -> LieElement {
    let s = bg.warp(p.radial_coordinate());
    let (st, ct) = match p.chart {
        crate::geometry::Chart::MinkowskiCartesian => {
            let sp = crate::geometry::cartesian_to_spherical(p);
            (sp.x[2].sin(), sp.x[2].cos())
        }
        _ => (p.x[2].sin(), p.x[2].cos()),
    };
    let ph = match p.chart {
        crate::geometry::Chart::MinkowskiCartesian => crate::geometry::cartesian_to_spherical(p).x[3],
        _ => p.x[3],
    };
    let n = LieElement::new(st * ph.cos(), st * ph.sin(), ct);
    (g / (crate::fields::G * s * s)) * n
}

/// Runs the gate over `samples` random (state, event) pairs split between the
/// backgrounds and ansätze.
pub fn run_gate(samples: usize, seed: u64, oracle: &Oracle) -> Result<GateReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = GateReport { samples, ..Default::default() };
    for k in 0..samples {
        let bg = if k % 2 == 0 { Background::Minkowski } else { Background::Cylinder };
        let ansatz = if k % 5 == 4 {
            AnsatzProfiles::fixed(LieElement::new(0.48, 0.6, 0.64)).expect("unit vector")
        } else {
            AnsatzProfiles::hedgehog()
        };
        let lambda = rng.gen_range(0.0..2.0);
        let st = GateState::random(bg, ansatz, lambda, &mut rng);
        let p = random_event(bg, &mut rng, k % 4 == 0);
        let (ymax, hmax, gmax) = check_state(&st, &p, oracle)?;
        rep.max_ym = rep.max_ym.max(ymax);
        rep.max_higgs = rep.max_higgs.max(hmax);
        rep.max_gauss = rep.max_gauss.max(gmax);
    }
    // Grid states: one per background and ansatz, many events each.
    let per = samples.div_ceil(4).max(1);
    for (bg, ansatz) in [
        (Background::Cylinder, AnsatzProfiles::hedgehog()),
        (Background::Minkowski, AnsatzProfiles::hedgehog()),
        (Background::Cylinder, AnsatzProfiles::fixed(LieElement::basis(0)).expect("unit vector")),
        (Background::Minkowski, AnsatzProfiles::fixed(LieElement::basis(0)).expect("unit vector")),
    ] {
        let g = GridTaylor::new(random_grid_state(bg, ansatz, &mut rng)?)?;
        for _ in 0..per {
            let p = random_event(bg, &mut rng, false);
            rep.max_grid = rep.max_grid.max(check_grid(&g, &p, oracle)?);
        }
    }
    Ok(rep)
}

/// Taylor-in-time field (q + t p + ½t² ṗ) of a grid state with ṗ from
/// [`reduced_rhs`], interpolated by sixth-degree Lagrange stencils frozen at
/// `anchor`.
pub struct GridTaylor {
    state: EquivariantState,
    ext: Vec<[Vec<f64>; 3]>,
}

impl GridTaylor {
    pub fn new(state: EquivariantState) -> Result<Self> {
        let (_, dp) = reduced_rhs(&state)?;
        let ext = (0..state.q.len())
            .map(|f| {
                let par = parity(state.ansatz.class, f);
                [state.extend(&state.q[f], par), state.extend(&state.p[f], par), state.extend(&dp[f], par)]
            })
            .collect();
        Ok(GridTaylor { state, ext })
    }

    pub fn state(&self) -> &EquivariantState {
        &self.state
    }

    fn jet(&self, t: f64, rho: f64, anchor: f64) -> Result<ProfileJet> {
        let dx = self.state.dx();
        if rho < 0.0 || rho > self.state.valid_radius() - 3.0 * dx {
            return Err(Error::Domain(format!("ρ = {rho} outside the grid state")));
        }
        let lo = ((anchor / dx).round() as isize - 3).max(-(GHOSTS as isize));
        let nodes: Vec<f64> = (0..7).map(|j| (lo + j) as f64 * dx).collect();
        let (l, dl) = lagrange_weights(&nodes, rho);
        let mut out = ProfileJet::default();
        for (f, e) in self.ext.iter().enumerate() {
            let at = |k: usize, w: &[f64]| (0..7).map(|j| w[j] * e[k][(lo + j as isize + GHOSTS as isize) as usize]).sum::<f64>();
            let (q, p, a) = (at(0, &l), at(1, &l), at(2, &l));
            let (dq, dp, da) = (at(0, &dl), at(1, &dl), at(2, &dl));
            out.f[f] = Jet::new(q + t * p + 0.5 * t * t * a, dq + t * dp + 0.5 * t * t * da, p + t * a);
        }
        Ok(out)
    }

    /// Sampler of the Taylor field with stencils frozen at ρ = `anchor`.
    pub fn sampler(&self, anchor: f64) -> SymmetricSampler<GridSource<'_>> {
        SymmetricSampler::new(self.state.background, self.state.ansatz, GridSource { grid: self, anchor })
    }
}

pub struct GridSource<'a> {
    grid: &'a GridTaylor,
    anchor: f64,
}

impl ProfileSource for GridSource<'_> {
    fn jet(&self, t: f64, rho: f64) -> Result<ProfileJet> {
        self.grid.jet(t, rho, self.anchor)
    }
}

/// Oracle residuals (spatial YM, Higgs) of a grid state at an event.
pub fn check_grid(g: &GridTaylor, p: &ChartPoint, oracle: &Oracle) -> Result<f64> {
    let s = g.sampler(p.radial_coordinate());
    let ym = oracle.ym_residual(&s, p)?;
    let hg = oracle.higgs_residual(&s, p, g.state().lambda)?;
    Ok(max_norm(&ym[1..]).max(hg.norm()))
}

/// Residuals of one state at one event: (spatial YM, Higgs, Gauss mismatch).
pub fn check_state(st: &GateState, p: &ChartPoint, oracle: &Oracle) -> Result<(f64, f64, f64)> {
    let s = FnSampler(|q: &ChartPoint| st.fields(q));
    let ym = oracle.ym_residual(&s, p)?;
    let hg = oracle.higgs_residual(&s, p, st.lambda)?;
    let gs = oracle.gauss_residual(&s, p)?;
    let expect = if st.ansatz.class == Ansatz::Hedgehog {
        gauss_from_reduced(st.background, p, st.reduced_gauss(p.radial_coordinate()))
    } else {
        LieElement::ZERO
    };
    Ok((max_norm(&ym[1..]), hg.norm(), (gs - expect).norm()))
}

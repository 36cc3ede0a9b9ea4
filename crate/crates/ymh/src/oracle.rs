//! Finite-difference evaluators of the covariant field equations, the Gauss
//! constraint and the second-order wave equations for F and Dφ.
//!
//! Every derivative is a fourth-order central difference of sampled
//! [`PointFields`] with step `eps`, independent of any evolution grid.

use crate::algebra::{commutator, current, LieElement};
use crate::error::{Error, Result};
use crate::fields::PointFields;
use crate::geometry::{christoffels, curvature_scalars, inverse_metric_diag, Chart, ChartPoint, TwoForm, PAIRS};
use crate::sampler::FieldSampler;

pub const DEFAULT_EPS: f64 = 1e-3;

/// Number of scalar slots in a flattened [`PointFields`].
const FLAT: usize = 45;

fn flatten(pf: &PointFields) -> [f64; FLAT] {
    let mut out = [0.0; FLAT];
    let slots = pf.a.iter().chain(pf.f.0.iter()).chain(std::iter::once(&pf.phi)).chain(pf.dphi.iter());
    for (k, x) in slots.enumerate() {
        out[3 * k..3 * k + 3].copy_from_slice(&x.c);
    }
    out
}

fn unflatten(v: &[f64], chart: Option<Chart>) -> PointFields {
    let e = |k: usize| LieElement::new(v[3 * k], v[3 * k + 1], v[3 * k + 2]);
    let mut pf = PointFields { chart, ..Default::default() };
    for a in 0..4 {
        pf.a[a] = e(a);
        pf.dphi[a] = e(11 + a);
    }
    for k in 0..6 {
        pf.f.0[k] = e(4 + k);
    }
    pf.phi = e(10);
    pf
}

fn shifted(p: &ChartPoint, b: usize, s: f64) -> Result<ChartPoint> {
    let mut q = *p;
    q.x[b] += s;
    q.validate().map_err(|_| {
        Error::Domain(format!("stencil of width {s:e} in direction {b} leaves the chart at {:?}", p.x))
    })?;
    Ok(q)
}

/// Fourth-order finite differences of sampled fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oracle {
    pub eps: f64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { eps: DEFAULT_EPS }
    }
}

impl Oracle {
    pub fn new(eps: f64) -> Self {
        Oracle { eps }
    }

    /// ∂_b of an arbitrary vector-valued function of the event.
    pub fn d1_fn<F>(&self, p: &ChartPoint, b: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&ChartPoint) -> Result<Vec<f64>>,
    {
        let h = self.eps;
        let mut acc: Vec<f64> = Vec::new();
        for (k, c) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
            let v = f(&shifted(p, b, k * h)?)?;
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += c * x;
            }
        }
        let inv = 1.0 / (12.0 * h);
        acc.iter_mut().for_each(|a| *a *= inv);
        Ok(acc)
    }

    /// ∂_b of an arbitrary vector-valued functional of the sampled fields.
    pub fn d1_map<S, F>(&self, s: &S, p: &ChartPoint, b: usize, map: F) -> Result<Vec<f64>>
    where
        S: FieldSampler + ?Sized,
        F: Fn(&PointFields) -> Vec<f64>,
    {
        let h = self.eps;
        let mut acc: Vec<f64> = Vec::new();
        for (k, c) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
            let v = map(&s.sample(&shifted(p, b, k * h)?)?);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += c * x;
            }
        }
        let inv = 1.0 / (12.0 * h);
        acc.iter_mut().for_each(|a| *a *= inv);
        Ok(acc)
    }

    /// ∂_b∂_b of a functional, five-point stencil.
    pub fn d2_map<S, F>(&self, s: &S, p: &ChartPoint, b: usize, map: F) -> Result<Vec<f64>>
    where
        S: FieldSampler + ?Sized,
        F: Fn(&PointFields) -> Vec<f64>,
    {
        let h = self.eps;
        let mut acc: Vec<f64> = Vec::new();
        for (k, c) in [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)] {
            let q = if k == 0.0 { *p } else { shifted(p, b, k * h)? };
            let v = map(&s.sample(&q)?);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += c * x;
            }
        }
        let inv = 1.0 / (12.0 * h * h);
        acc.iter_mut().for_each(|a| *a *= inv);
        Ok(acc)
    }

    /// ∂_b of every slot of the sampled fields.
    pub fn derivative<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint, b: usize) -> Result<PointFields> {
        let v = self.d1_map(s, p, b, |pf| flatten(pf).to_vec())?;
        Ok(unflatten(&v, Some(p.chart)))
    }

    fn all_derivatives<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<[PointFields; 4]> {
        Ok([self.derivative(s, p, 0)?, self.derivative(s, p, 1)?, self.derivative(s, p, 2)?, self.derivative(s, p, 3)?])
    }

    /// D^bF_ab − ((D_aφ)·θ_αφ)θ_α for a = 0..3.
    pub fn ym_residual<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<[LieElement; 4]> {
        let pf = s.sample(p)?;
        let d = self.all_derivatives(s, p)?;
        let gam = christoffels(p.chart, &p.x)?;
        let gi = inverse_metric_diag(p.chart, &p.x);
        let mut out = [LieElement::ZERO; 4];
        for (a, slot) in out.iter_mut().enumerate() {
            let mut r = -current(pf.dphi[a], pf.phi);
            for b in 0..4 {
                let mut nab = d[b].f.get(a, b);
                for e in 0..4 {
                    nab -= gam[e][b][a] * pf.f.get(e, b) + gam[e][b][b] * pf.f.get(a, e);
                }
                r += gi[b] * (nab + commutator(pf.a[b], pf.f.get(a, b)));
            }
            *slot = r;
        }
        Ok(out)
    }

    /// D^aD_aφ + (R/6)φ + λ|φ|²φ.
    pub fn higgs_residual<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint, lambda: f64) -> Result<LieElement> {
        let pf = s.sample(p)?;
        let d = self.all_derivatives(s, p)?;
        let gam = christoffels(p.chart, &p.x)?;
        let gi = inverse_metric_diag(p.chart, &p.x);
        let r6 = curvature_scalars(p.chart, &p.x).scalar / 6.0;
        let mut r = (r6 + lambda * pf.phi.norm_sq()) * pf.phi;
        for a in 0..4 {
            let mut nab = d[a].dphi[a];
            for c in 0..4 {
                nab -= gam[c][a][a] * pf.dphi[c];
            }
            r += gi[a] * (nab + pf.a[a].act(pf.dphi[a]));
        }
        Ok(r)
    }

    /// Gauss constraint D_iE^i + (π·θ_αφ)θ_α on the slice through `p`, with
    /// E_i = F_{0i}. Uses spatial differences only, so it is restricted to the
    /// static charts (Minkowski and the cylinder).
    pub fn gauss_residual<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<LieElement> {
        if p.chart == Chart::DeSitter {
            return Err(Error::Domain("the Gauss residual is evaluated on static charts only".into()));
        }
        let pf = s.sample(p)?;
        let gam = christoffels(p.chart, &p.x)?;
        let gi = inverse_metric_diag(p.chart, &p.x);
        let mut r = -current(pf.dphi[0], pf.phi);
        for i in 1..4 {
            let di = self.derivative(s, p, i)?;
            let mut nab = di.f.get(0, i);
            for e in 1..4 {
                nab -= gam[e][i][i] * pf.f.get(0, e);
            }
            r += gi[i] * (nab + commutator(pf.a[i], pf.f.get(0, i)));
        }
        Ok(-r)
    }

    /// F_ab = ∂_aA_b − ∂_bA_a + [A_a, A_b] from the sampled potential.
    pub fn curvature_from_potential<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<TwoForm> {
        let pf = s.sample(p)?;
        let d = self.all_derivatives(s, p)?;
        Ok(TwoForm::from_fn(|a, b| d[a].a[b] - d[b].a[a] + commutator(pf.a[a], pf.a[b])))
    }

    /// D_aφ = ∂_aφ + A_aφ from the sampled φ and potential.
    pub fn dphi_from_potential<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<[LieElement; 4]> {
        let pf = s.sample(p)?;
        let mut out = [LieElement::ZERO; 4];
        for (a, o) in out.iter_mut().enumerate() {
            let d = self.d1_map(s, p, a, |q| q.phi.c.to_vec())?;
            *o = LieElement::new(d[0], d[1], d[2]) + pf.a[a].act(pf.phi);
        }
        Ok(out)
    }

    /// □F_ab minus the right-hand side of the curvature wave equation, for the
    /// six pairs (01, 02, 03, 12, 13, 23). Minkowski Cartesian points only.
    pub fn wave_residual_f<S: FieldSampler + ?Sized>(&self, s: &S, p: &ChartPoint) -> Result<[LieElement; 6]> {
        require_cartesian(p)?;
        let eta = [1.0, -1.0, -1.0, -1.0];
        let pf = s.sample(p)?;
        let d = self.all_derivatives(s, p)?;
        let box_f = self.box_map(s, p, |q| flatten(q)[12..30].to_vec())?;
        let div_a: LieElement = (0..4).fold(LieElement::ZERO, |acc, c| acc + eta[c] * d[c].a[c]);
        let mut out = [LieElement::ZERO; 6];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            let fab = pf.f.get(a, b);
            let mut rhs = current(pf.f.get(a, b).act(pf.phi), pf.phi);
            rhs += current(pf.dphi[b], pf.dphi[a]) - current(pf.dphi[a], pf.dphi[b]);
            // −2∇^c[A_c, F_ab], differentiated as a whole.
            for c in 0..4 {
                let dc = self.d1_map(s, p, c, |q| commutator(q.a[c], q.f.get(a, b)).c.to_vec())?;
                rhs -= (2.0 * eta[c]) * LieElement::new(dc[0], dc[1], dc[2]);
            }
            rhs += commutator(div_a, fab);
            for c in 0..4 {
                rhs -= eta[c] * commutator(pf.a[c], commutator(pf.a[c], fab));
                rhs -= (2.0 * eta[c]) * commutator(pf.f.get(b, c), pf.f.get(a, c));
            }
            let bx = LieElement::new(box_f[3 * k], box_f[3 * k + 1], box_f[3 * k + 2]);
            out[k] = bx - rhs;
        }
        Ok(out)
    }

    /// □(D_bφ) minus the right-hand side of the wave equation for Dφ, for
    /// b = 0..3. Minkowski Cartesian points only.
    pub fn wave_residual_dphi<S: FieldSampler + ?Sized>(
        &self,
        s: &S,
        p: &ChartPoint,
        lambda: f64,
    ) -> Result<[LieElement; 4]> {
        require_cartesian(p)?;
        let eta = [1.0, -1.0, -1.0, -1.0];
        let pf = s.sample(p)?;
        let d = self.all_derivatives(s, p)?;
        let box_d = self.box_map(s, p, |q| flatten(q)[33..45].to_vec())?;
        let div_a: LieElement = (0..4).fold(LieElement::ZERO, |acc, c| acc + eta[c] * d[c].a[c]);
        let cubic = |q: &PointFields| (q.phi.norm_sq() * q.phi).c.to_vec();
        let mut out = [LieElement::ZERO; 4];
        for (b, o) in out.iter_mut().enumerate() {
            let db = pf.dphi[b];
            let mut rhs = div_a.act(db);
            for a in 0..4 {
                let da = self.d1_map(s, p, a, |q| q.a[a].act(q.dphi[b]).c.to_vec())?;
                rhs -= (2.0 * eta[a]) * LieElement::new(da[0], da[1], da[2]);
                rhs -= eta[a] * pf.a[a].act(pf.a[a].act(db));
                rhs -= (2.0 * eta[a]) * pf.f.get(b, a).act(pf.dphi[a]);
            }
            rhs += current(db, pf.phi).act(pf.phi);
            let dc = self.d1_map(s, p, b, cubic)?;
            let phi3 = pf.phi.norm_sq() * pf.phi;
            rhs -= lambda * (LieElement::new(dc[0], dc[1], dc[2]) + pf.a[b].act(phi3));
            let bx = LieElement::new(box_d[3 * b], box_d[3 * b + 1], box_d[3 * b + 2]);
            *o = bx - rhs;
        }
        Ok(out)
    }

    fn box_map<S, F>(&self, s: &S, p: &ChartPoint, map: F) -> Result<Vec<f64>>
    where
        S: FieldSampler + ?Sized,
        F: Fn(&PointFields) -> Vec<f64> + Copy,
    {
        let eta = [1.0, -1.0, -1.0, -1.0];
        let mut acc: Vec<f64> = Vec::new();
        for (c, e) in eta.iter().enumerate() {
            let v = self.d2_map(s, p, c, map)?;
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += e * x;
            }
        }
        Ok(acc)
    }
}

fn require_cartesian(p: &ChartPoint) -> Result<()> {
    if p.chart != Chart::MinkowskiCartesian {
        return Err(Error::Domain("wave residuals are evaluated in Minkowski Cartesian coordinates".into()));
    }
    Ok(())
}

/// max_k |X_k| over a slice of algebra elements.
pub fn max_norm(xs: &[LieElement]) -> f64 {
    xs.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

//! The Lie algebra so(3) in the orthonormal basis θ_α = L_α/√2, where
//! (L_α)_{jk} = −ε_{αjk}. With this normalisation ⟨θ_α, θ_β⟩ = δ_{αβ} and
//! [θ_α, θ_β] = ε_{αβγ} θ_γ / √2.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Scale of the structure constants, f_{αβγ} = ε_{αβγ} · STRUCTURE_SCALE.
pub const STRUCTURE_SCALE: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub type Mat3 = [[f64; 3]; 3];

/// Coefficients of an algebra element in the basis {θ_α}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LieElement {
    pub c: [f64; 3],
}

#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[inline]
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl LieElement {
    pub const ZERO: LieElement = LieElement { c: [0.0; 3] };

    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        LieElement { c: [c0, c1, c2] }
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        LieElement { c }
    }

    /// The generator θ_α (α = 0, 1, 2).
    pub fn basis(alpha: usize) -> Self {
        let mut c = [0.0; 3];
        c[alpha] = 1.0;
        LieElement { c }
    }

    pub fn norm_sq(&self) -> f64 {
        inner(*self, *self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Real antisymmetric 3×3 matrix Σ c_α θ_α.
    pub fn matrix(&self) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (alpha, &ca) in self.c.iter().enumerate() {
            for (j, row) in m.iter_mut().enumerate() {
                for (k, e) in row.iter_mut().enumerate() {
                    *e -= ca * levi_civita(alpha, j, k) * STRUCTURE_SCALE;
                }
            }
        }
        m
    }

    /// Inverse of [`LieElement::matrix`] on antisymmetric matrices.
    pub fn from_matrix(m: &Mat3) -> Self {
        // m = Σ c_α θ_α, and ⟨θ_α, X⟩ = −Tr(θ_α X).
        let mut c = [0.0; 3];
        for (alpha, ca) in c.iter_mut().enumerate() {
            let th = LieElement::basis(alpha).matrix();
            *ca = -trace(&matmul(&th, m));
        }
        LieElement { c }
    }

    /// Action of the representing matrix on a vector in the same
    /// representation space: (X φ)_j = Σ_k X_{jk} φ_k.
    pub fn act(&self, phi: LieElement) -> LieElement {
        let v = cross(self.c, phi.c);
        LieElement {
            c: [v[0] * STRUCTURE_SCALE, v[1] * STRUCTURE_SCALE, v[2] * STRUCTURE_SCALE],
        }
    }
}

impl Add for LieElement {
    type Output = LieElement;
    fn add(self, o: LieElement) -> LieElement {
        LieElement::new(self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2])
    }
}

impl Sub for LieElement {
    type Output = LieElement;
    fn sub(self, o: LieElement) -> LieElement {
        LieElement::new(self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2])
    }
}

impl Neg for LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement::new(-self.c[0], -self.c[1], -self.c[2])
    }
}

impl Mul<LieElement> for f64 {
    type Output = LieElement;
    fn mul(self, x: LieElement) -> LieElement {
        LieElement::new(self * x.c[0], self * x.c[1], self * x.c[2])
    }
}

impl AddAssign for LieElement {
    fn add_assign(&mut self, o: LieElement) {
        for i in 0..3 {
            self.c[i] += o.c[i];
        }
    }
}

impl SubAssign for LieElement {
    fn sub_assign(&mut self, o: LieElement) {
        for i in 0..3 {
            self.c[i] -= o.c[i];
        }
    }
}

/// [X, Y] through the structure constants of the fixed basis.
pub fn commutator(x: LieElement, y: LieElement) -> LieElement {
    let v = cross(x.c, y.c);
    STRUCTURE_SCALE * LieElement::from_array(v)
}

/// Ad-invariant inner product ⟨X, Y⟩ = −Tr(XY) = Σ X_α Y_α.
pub fn inner(x: LieElement, y: LieElement) -> f64 {
    x.c[0] * y.c[0] + x.c[1] * y.c[1] + x.c[2] * y.c[2]
}

/// f_{αβγ} with [θ_α, θ_β] = f_{αβγ} θ_γ.
pub fn structure_constants() -> [[[f64; 3]; 3]; 3] {
    let mut f = [[[0.0; 3]; 3]; 3];
    for (a, fa) in f.iter_mut().enumerate() {
        for (b, fab) in fa.iter_mut().enumerate() {
            for (g, e) in fab.iter_mut().enumerate() {
                *e = levi_civita(a, b, g) * STRUCTURE_SCALE;
            }
        }
    }
    f
}

/// The component ((ψ)·θ_α χ) θ_α summed over α, i.e. the algebra element
/// with coefficients ψ · (θ_α χ). This is the Higgs current density.
pub fn current(psi: LieElement, chi: LieElement) -> LieElement {
    let mut c = [0.0; 3];
    for (alpha, ca) in c.iter_mut().enumerate() {
        *ca = inner(psi, LieElement::basis(alpha).act(chi));
    }
    LieElement { c }
}

pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

pub fn trace(a: &Mat3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}

fn transpose(a: &Mat3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i];
        }
    }
    m
}

/// Element of SO(3) acting on the adjoint triplet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub m: Mat3,
}

impl Default for GroupElement {
    fn default() -> Self {
        Self::identity()
    }
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement { m: matmul(&self.m, &o.m) }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { m: transpose(&self.m) }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// max |(mᵀm − 1)_{ij}|
    pub fn orthogonality_defect(&self) -> f64 {
        let p = matmul(&transpose(&self.m), &self.m);
        let mut d: f64 = 0.0;
        for (i, row) in p.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                d = d.max((e - id).abs());
            }
        }
        d
    }

    /// Distance to another element in the max-entry norm.
    pub fn distance(&self, o: &GroupElement) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.m[i][j] - o.m[i][j]).abs());
            }
        }
        d
    }

    /// Re-orthonormalise by Gram–Schmidt on the columns.
    pub fn orthonormalized(&self) -> GroupElement {
        let col = |j: usize| [self.m[0][j], self.m[1][j], self.m[2][j]];
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let mut e0 = col(0);
        let n0 = dot(e0, e0).sqrt();
        e0 = [e0[0] / n0, e0[1] / n0, e0[2] / n0];
        let mut e1 = col(1);
        let p = dot(e0, e1);
        e1 = [e1[0] - p * e0[0], e1[1] - p * e0[1], e1[2] - p * e0[2]];
        let n1 = dot(e1, e1).sqrt();
        e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let e2 = cross(e0, e1);
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][0] = e0[i];
            m[i][1] = e1[i];
            m[i][2] = e2[i];
        }
        GroupElement { m }
    }
}

/// exp(u) by the Rodrigues formula. The matrix of u acts as v ↦ (u × v)/√2,
/// so exp(u) is the rotation about u by the angle |u|/√2.
pub fn exponential(u: LieElement) -> GroupElement {
    let theta = u.norm() * STRUCTURE_SCALE;
    if theta < 1e-300 {
        return GroupElement::identity();
    }
    let n = u.norm();
    let k = [u.c[0] / n, u.c[1] / n, u.c[2] / n];
    let kx: Mat3 = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    let kx2 = matmul(&kx, &kx);
    let (s, c) = theta.sin_cos();
    let mut m = GroupElement::identity().m;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += s * kx[i][j] + (1.0 - c) * kx2[i][j];
        }
    }
    GroupElement { m }
}

/// U X U⁻¹. For SO(3) in the adjoint representation this is U acting on the
/// coefficient vector.
pub fn adjoint_act(u: &GroupElement, x: LieElement) -> LieElement {
    vector_act(u, x)
}

/// U φ for φ in the representation space.
pub fn vector_act(u: &GroupElement, phi: LieElement) -> LieElement {
    let mut c = [0.0; 3];
    for (i, ci) in c.iter_mut().enumerate() {
        for j in 0..3 {
            *ci += u.m[i][j] * phi.c[j];
        }
    }
    LieElement { c }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix_commutator(x: LieElement, y: LieElement) -> LieElement {
        let (a, b) = (x.matrix(), y.matrix());
        let ab = matmul(&a, &b);
        let ba = matmul(&b, &a);
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = ab[i][j] - ba[i][j];
            }
        }
        LieElement::from_matrix(&m)
    }

    #[test]
    fn basis_commutator_matches_matrix_product() {
        let c = matrix_commutator(LieElement::basis(0), LieElement::basis(1));
        assert!((c.c[2] - STRUCTURE_SCALE).abs() < 1e-15);
        assert!(c.c[0].abs() < 1e-15 && c.c[1].abs() < 1e-15);
        let d = commutator(LieElement::basis(0), LieElement::basis(1));
        assert!((d - c).norm() < 1e-15);
    }

    #[test]
    fn basis_is_orthonormal_under_trace_form() {
        for a in 0..3 {
            for b in 0..3 {
                let m = matmul(&LieElement::basis(a).matrix(), &LieElement::basis(b).matrix());
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((-trace(&m) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn structure_constants_totally_antisymmetric() {
        let f = structure_constants();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(f[a][b][c], -f[b][a][c]);
                    assert_eq!(f[a][b][c], -f[a][c][b]);
                    assert_eq!(f[a][b][c], f[b][c][a]);
                }
            }
        }
    }

    #[test]
    fn exponential_of_pi_sqrt2_theta3_is_half_turn() {
        let u = (std::f64::consts::PI * 2f64.sqrt()) * LieElement::basis(2);
        let g = exponential(u);
        let expect = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.m[i][j] - expect[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exponential_matches_power_series() {
        let u = LieElement::new(0.3, -0.7, 1.1);
        let a = u.matrix();
        let mut term = GroupElement::identity().m;
        let mut sum = term;
        for n in 1..40 {
            term = matmul(&term, &a);
            for row in term.iter_mut() {
                for e in row.iter_mut() {
                    *e /= n as f64;
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        assert!(exponential(u).distance(&GroupElement { m: sum }) < 1e-13);
    }

    #[test]
    fn adjoint_act_is_matrix_conjugation() {
        let u = exponential(LieElement::new(0.4, 1.3, -0.2));
        let x = LieElement::new(-1.0, 0.5, 2.0);
        let conj = matmul(&matmul(&u.m, &x.matrix()), &u.inverse().m);
        assert!((adjoint_act(&u, x) - LieElement::from_matrix(&conj)).norm() < 1e-13);
    }

    #[test]
    fn current_vanishes_for_parallel_arguments() {
        let v = LieElement::new(0.2, -0.4, 0.9);
        assert!(current(3.0 * v, v).norm() < 1e-15);
    }
}

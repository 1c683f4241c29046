//! Lead elimination and effective vertex-scattering matrices.
//!
//! At a vertex with `n` internal ends and `m` leads the coupling matrix is
//! split as `U = [[U1, U2], [U3, U4]]`. Eliminating the outgoing lead waves
//! gives the energy-dependent coupling
//! `Ũ(k) = U1 - (1-k) U2 [(1-k) U4 - (k+1) I]⁻¹ U3` on the internal ends, and
//! from it the effective scattering matrix
//! `σ̃(k) = -[(1-k) Ũ - (1+k) I]⁻¹ [(1+k) Ũ - (1-k) I]`, which maps the
//! incoming amplitudes `a_in` of `a_in e^{-ikx} + a_out e^{ikx}` to `a_out`.

use crate::{coupling, linalg, CMatrix, Error, MetricGraph, Result, C64};

/// Internal/lead block partition of a vertex coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexBlocks {
    pub u1: CMatrix,
    pub u2: CMatrix,
    pub u3: CMatrix,
    pub u4: CMatrix,
}

impl VertexBlocks {
    /// Split `u` (internal ends first) into blocks for `n` internal ends.
    pub fn split(u: &CMatrix, n: usize) -> Self {
        let d = u.nrows();
        let m = d - n;
        VertexBlocks {
            u1: u.view((0, 0), (n, n)).into_owned(),
            u2: u.view((0, n), (n, m)).into_owned(),
            u3: u.view((n, 0), (m, n)).into_owned(),
            u4: u.view((n, n), (m, m)).into_owned(),
        }
    }

    pub fn for_vertex(g: &MetricGraph, v: usize) -> Result<Self> {
        let u = coupling::coupling_matrix(&g.vertices()[v].coupling, g.degree(v))?;
        Ok(Self::split(&u, g.internal_degree(v)))
    }

    pub fn internal(&self) -> usize {
        self.u1.nrows()
    }

    pub fn leads(&self) -> usize {
        self.u4.nrows()
    }

    pub fn assemble(&self) -> CMatrix {
        let (n, m) = (self.internal(), self.leads());
        let mut u = CMatrix::zeros(n + m, n + m);
        u.view_mut((0, 0), (n, n)).copy_from(&self.u1);
        u.view_mut((0, n), (n, m)).copy_from(&self.u2);
        u.view_mut((n, 0), (m, n)).copy_from(&self.u3);
        u.view_mut((n, n), (m, m)).copy_from(&self.u4);
        u
    }
}

/// `Ũ(k)`; equal to `U1` when the vertex has no leads.
pub fn effective_coupling(blocks: &VertexBlocks, k: C64) -> Result<CMatrix> {
    if blocks.leads() == 0 {
        return Ok(blocks.u1.clone());
    }
    let one = C64::new(1.0, 0.0);
    let inner = &blocks.u4 * (one - k) - linalg::identity(blocks.leads()) * (k + one);
    let scale = (one - k).norm() * linalg::norm1(&blocks.u4) + (k + one).norm();
    let inv = linalg::inverse_with_scale(&inner, scale).map_err(|_| Error::EffectiveCouplingPole { k })?;
    Ok(&blocks.u1 - &blocks.u2 * inv * &blocks.u3 * (one - k))
}

/// The pair `B = (1-k) Ũ - (1+k) I`, `C = (1+k) Ũ - (1-k) I` with `σ̃ = -B⁻¹ C`.
pub fn sigma_factors(u_eff: &CMatrix, k: C64) -> (CMatrix, CMatrix) {
    let one = C64::new(1.0, 0.0);
    let id = linalg::identity(u_eff.nrows());
    let b = u_eff * (one - k) - &id * (one + k);
    let c = u_eff * (one + k) - id * (one - k);
    (b, c)
}

/// `σ̃(k)` from `Ũ(k)`.
pub fn effective_sigma(u_eff: &CMatrix, k: C64) -> Result<CMatrix> {
    let (b, c) = sigma_factors(u_eff, k);
    let scale = (C64::new(1.0, 0.0) - k).norm() * linalg::norm1(u_eff) + (k + 1.0).norm();
    let inv = linalg::inverse_with_scale(&b, scale).map_err(|_| Error::SigmaPole { k })?;
    Ok(-(inv * c))
}

/// `k ↦ σ̃⁽ᵛ⁾(k)` for one vertex.
#[derive(Debug, Clone)]
pub struct EffectiveSigma {
    pub vertex: usize,
    pub blocks: VertexBlocks,
}

impl EffectiveSigma {
    pub fn new(g: &MetricGraph, vertex: usize) -> Result<Self> {
        Ok(EffectiveSigma { vertex, blocks: VertexBlocks::for_vertex(g, vertex)? })
    }

    pub fn at(&self, k: C64) -> Result<CMatrix> {
        effective_sigma(&effective_coupling(&self.blocks, k)?, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::VertexCoupling;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_of(coupling: VertexCoupling, n: usize, m: usize, k: C64) -> Result<CMatrix> {
        let u = coupling::coupling_matrix(&coupling, n + m)?;
        let b = VertexBlocks::split(&u, n);
        effective_sigma(&effective_coupling(&b, k)?, k)
    }

    #[test]
    fn blocks_reassemble() {
        let u = coupling::coupling_matrix(&VertexCoupling::Delta(2.0), 5).unwrap();
        let b = VertexBlocks::split(&u, 3);
        assert_eq!((b.internal(), b.leads()), (3, 2));
        assert_eq!(b.assemble(), u);
    }

    #[test]
    fn no_leads_returns_u1() {
        let u = coupling::coupling_matrix(&VertexCoupling::Delta(2.0), 3).unwrap();
        let b = VertexBlocks::split(&u, 3);
        for k in [c(0.3, 0.0), c(5.0, -2.0)] {
            assert_eq!(effective_coupling(&b, k).unwrap(), u);
        }
    }

    #[test]
    fn neumann_lead_at_k_one() {
        let u = coupling::coupling_matrix(&VertexCoupling::Neumann, 3).unwrap();
        let b = VertexBlocks::split(&u, 2);
        let ut = effective_coupling(&b, c(1.0, 0.0)).unwrap();
        assert_eq!(ut, b.u1);
    }

    #[test]
    fn neumann_and_dirichlet_sigma() {
        for k in [c(0.7, 0.0), c(3.0, -1.0)] {
            let s = sigma_of(VertexCoupling::Neumann, 3, 0, k).unwrap();
            assert!(linalg::max_abs(&(s - linalg::identity(3))) < 1e-14);
            let s = sigma_of(VertexCoupling::Dirichlet, 2, 0, k).unwrap();
            assert!(linalg::max_abs(&(s + linalg::identity(2))) < 1e-14);
        }
    }

    #[test]
    fn delta_two_internal_one_lead() {
        let alpha = 10.0;
        for k in [c(2.0 * std::f64::consts::PI, 0.0), c(1.3, -0.4), c(7.0, 0.2)] {
            let s = sigma_of(VertexCoupling::Delta(alpha), 2, 1, k).unwrap();
            let a = C64::new(alpha, 0.0) / (C64::i() * k);
            let pref = C64::new(1.0, 0.0) / (3.0 - a);
            let diag = pref * (a - 1.0);
            let off = pref * 2.0;
            assert!((s[(0, 0)] - diag).norm() < 1e-12 && (s[(1, 1)] - diag).norm() < 1e-12);
            assert!((s[(0, 1)] - off).norm() < 1e-12 && (s[(1, 0)] - off).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_matches_closed_form_on_grid() {
        for n in 1..=4 {
            for m in 0..=3 {
                for &alpha in &[-3.0, 0.5, 4.0] {
                    for i in 0..6 {
                        let k = c(0.4 + 1.7 * i as f64, -0.3 + 0.1 * i as f64);
                        let s = sigma_of(VertexCoupling::Delta(alpha), n, m, k).unwrap();
                        let p = C64::new(2.0, 0.0) / ((n + m) as f64 - alpha / (C64::i() * k));
                        let want = linalg::ones(n) * p - linalg::identity(n);
                        assert!(linalg::max_abs(&(s - want)) < 1e-10, "n={n} m={m} a={alpha} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_prime_matches_closed_form() {
        for (n, m) in [(2, 1), (3, 0), (1, 2)] {
            for &beta in &[1.0, -2.5] {
                let k = c(3.3, -0.2);
                let s = sigma_of(VertexCoupling::DeltaPrimeS(beta), n, m, k).unwrap();
                let p = C64::new(2.0, 0.0) / (C64::i() * k * beta - (n + m) as f64);
                let want = linalg::ones(n) * p + linalg::identity(n);
                assert!(linalg::max_abs(&(s - want)) < 1e-10);
            }
        }
    }

    #[test]
    fn unitary_without_leads_on_real_axis() {
        for coupling in [VertexCoupling::Delta(1.5), VertexCoupling::DeltaPrimeS(-0.7), VertexCoupling::Standard] {
            for i in 1..20 {
                let k = c(0.37 * i as f64, 0.0);
                let s = sigma_of(coupling.clone(), 4, 0, k).unwrap();
                assert!(linalg::unitarity_defect(&s) < 1e-10);
            }
        }
    }

    #[test]
    fn high_energy_decay() {
        let dist = |coupling: VertexCoupling, limit: CMatrix, k: f64| {
            let s = sigma_of(coupling, 2, 1, c(k, 0.0)).unwrap();
            linalg::max_abs(&(s - limit))
        };
        let st = linalg::ones(2) * C64::new(2.0 / 3.0, 0.0) - linalg::identity(2);
        let r = dist(VertexCoupling::Delta(2.0), st.clone(), 1e3) / dist(VertexCoupling::Delta(2.0), st, 1e4);
        assert!((5.0..20.0).contains(&r), "delta ratio {r}");
        let id = linalg::identity(2);
        let r =
            dist(VertexCoupling::DeltaPrimeS(2.0), id.clone(), 1e3) / dist(VertexCoupling::DeltaPrimeS(2.0), id, 1e4);
        assert!((5.0..20.0).contains(&r), "delta' ratio {r}");
    }

    #[test]
    fn poles_are_typed_errors() {
        // standard vertex without leads: B = (1-k)U - (1+k)I is singular at k = 0
        let err = sigma_of(VertexCoupling::Neumann, 2, 0, c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::SigmaPole { .. }));
        // delta, one internal end and one lead: inner matrix singular at k = 1 - d - iα
        let err = sigma_of(VertexCoupling::Delta(1.0), 1, 1, c(-1.0, -1.0)).unwrap_err();
        assert!(matches!(err, Error::EffectiveCouplingPole { .. }), "{err}");
    }
}

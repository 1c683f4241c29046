//! Evaluation of `Σ̃(k)`, `S(k)` and the determinant forms of the resonance
//! condition for one graph.

use crate::bonds::BondSystem;
use crate::scattering::{effective_coupling, effective_sigma, sigma_factors, EffectiveSigma};
use crate::{linalg, CMatrix, MetricGraph, Result, C64};

/// A graph together with its bond system and per-vertex coupling blocks.
///
/// Immutable; every evaluation is a pure function of `k` and can be shared
/// across threads.
#[derive(Debug, Clone)]
pub struct ScatteringModel {
    graph: MetricGraph,
    bonds: BondSystem,
    sigmas: Vec<EffectiveSigma>,
}

/// Clearing factor `Π_v det[(1-k) Ũ_v - (1+k) I]` and its magnitude scale.
#[derive(Debug, Clone, Copy)]
pub struct ClearingFactor {
    pub value: C64,
    pub scale: f64,
}

impl ClearingFactor {
    /// Relative size; zeros of the cleared function where this is tiny may be
    /// artifacts of the clearing.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.norm() / self.scale
        } else {
            1.0
        }
    }
}

impl ScatteringModel {
    pub fn new(graph: MetricGraph) -> Result<Self> {
        let bonds = BondSystem::new(&graph);
        let sigmas = (0..graph.vertices().len()).map(|v| EffectiveSigma::new(&graph, v)).collect::<Result<Vec<_>>>()?;
        Ok(ScatteringModel { graph, bonds, sigmas })
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn bonds(&self) -> &BondSystem {
        &self.bonds
    }

    pub fn sigmas(&self) -> &[EffectiveSigma] {
        &self.sigmas
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.graph.lengths()
    }

    fn complex_lengths(&self) -> Vec<C64> {
        self.graph.edges().iter().map(|e| C64::new(e.length, 0.0)).collect()
    }

    /// `Ũ_v(k)` for every vertex.
    pub fn effective_couplings(&self, k: C64) -> Result<Vec<CMatrix>> {
        self.sigmas.iter().map(|s| effective_coupling(&s.blocks, k)).collect()
    }

    /// `σ̃_v(k)` for every vertex.
    pub fn vertex_sigmas(&self, k: C64) -> Result<Vec<CMatrix>> {
        self.effective_couplings(k)?.iter().map(|u| effective_sigma(u, k)).collect()
    }

    pub fn big_sigma(&self, k: C64) -> Result<CMatrix> {
        Ok(self.bonds.assemble(&self.vertex_sigmas(k)?))
    }

    /// `S(k) = Q Σ̃(k)`.
    pub fn s_matrix(&self, k: C64) -> Result<CMatrix> {
        Ok(self.bonds.apply_q(&self.big_sigma(k)?))
    }

    fn phases(&self, k: C64, lengths: &[C64]) -> Vec<C64> {
        self.bonds.bond_lengths(lengths).into_iter().map(|l| (C64::i() * k * l).exp()).collect()
    }

    /// `det(e^{ikL} Q Σ̃(k) - I)`.
    pub fn secular_det(&self, k: C64) -> Result<C64> {
        Ok(linalg::det(&self.det_matrix(k, &self.complex_lengths())?))
    }

    fn det_matrix(&self, k: C64, lengths: &[C64]) -> Result<CMatrix> {
        let s = self.s_matrix(k)?;
        let ph = self.phases(k, lengths);
        let mut m = s;
        for (i, p) in ph.iter().enumerate() {
            m.row_mut(i).iter_mut().for_each(|x| *x *= *p);
            m[(i, i)] -= C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Determinant value and its Hadamard magnitude scale.
    pub fn secular_det_scaled(&self, k: C64) -> Result<(C64, f64)> {
        let m = self.det_matrix(k, &self.complex_lengths())?;
        Ok((linalg::det(&m), linalg::hadamard_bound(&m)))
    }

    /// Pole-free form `det(e^{ikL} Q Σ_C + Σ_B)` where `Σ_B`, `Σ_C` assemble the
    /// per-vertex factors of `σ̃ = -B⁻¹ C`. Equals
    /// `secular_det(k) · Π_v det B_v(k)` wherever `σ̃` exists.
    pub fn secular_cleared(&self, k: C64) -> Result<C64> {
        self.cleared_with_lengths(k, &self.complex_lengths()).map(|(v, _)| v)
    }

    /// Cleared determinant for arbitrary (possibly complex) edge lengths,
    /// returning the value and its magnitude scale.
    pub fn cleared_with_lengths(&self, k: C64, lengths: &[C64]) -> Result<(C64, f64)> {
        let m = self.cleared_matrix(k, lengths)?;
        Ok((linalg::det(&m), linalg::hadamard_bound(&m)))
    }

    fn cleared_matrix(&self, k: C64, lengths: &[C64]) -> Result<CMatrix> {
        let (bs, cs): (Vec<_>, Vec<_>) = self.effective_couplings(k)?.iter().map(|u| sigma_factors(u, k)).unzip();
        let sigma_b = self.bonds.assemble(&bs);
        let mut m = self.bonds.apply_q(&self.bonds.assemble(&cs));
        for (i, p) in self.phases(k, lengths).iter().enumerate() {
            m.row_mut(i).iter_mut().for_each(|x| *x *= *p);
        }
        Ok(m + sigma_b)
    }

    /// The clearing factor at `k`, scaled by its largest modulus on a small
    /// circle around `k`: the ratio is tiny only near a zero of the factor.
    pub fn clearing_factor(&self, k: C64) -> Result<ClearingFactor> {
        let value = self.clearing_value(k)?;
        let radius = 1e-3 * k.norm().max(1.0);
        let ring = crate::cauchy::circle_samples(k, radius, 8, |z| self.clearing_value(z))?;
        let scale = ring.iter().map(|z| z.norm()).fold(value.norm(), f64::max);
        Ok(ClearingFactor { value, scale })
    }

    fn clearing_value(&self, k: C64) -> Result<C64> {
        Ok(self.effective_couplings(k)?.iter().map(|u| linalg::det(&sigma_factors(u, k).0)).product())
    }

    /// The same model with new internal edge lengths.
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<Self> {
        ScatteringModel::new(self.graph.with_lengths(lengths)?)
    }
}

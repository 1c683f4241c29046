//! Secular functions: analytic functions of `k` whose zeros are the
//! resonances and embedded eigenvalues.

use crate::orbits::PseudoOrbits;
use crate::{Result, ScatteringModel, C64};

/// Clearing-factor zeros below this relative size flag a root as suspect.
pub const SUSPECT_THRESHOLD: f64 = 1e-6;

/// An analytic function on (a region of) the complex `k` plane.
pub trait Analytic: Sync {
    /// Value together with a magnitude scale: the size of the terms that
    /// cancel at a zero. Residuals are reported as `|f| / scale`.
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)>;

    fn eval(&self, k: C64) -> Result<C64> {
        self.eval_scaled(k).map(|(v, _)| v)
    }

    /// Normalized residual `|f(k)| / scale(k)`.
    fn residual(&self, k: C64) -> Result<f64> {
        let (v, s) = self.eval_scaled(k)?;
        Ok(if s > 0.0 { v.norm() / s } else { v.norm() })
    }

    /// Whether a zero at `k` may be an artifact of how the function was built.
    fn is_suspect(&self, _k: C64) -> bool {
        false
    }
}

/// Wraps a closure `k ↦ f(k)` with unit scale.
pub struct FnAnalytic<F>(pub F);

impl<F> Analytic for FnAnalytic<F>
where
    F: Fn(C64) -> C64 + Sync,
{
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)> {
        Ok(((self.0)(k), 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `det(e^{ikL} Q Σ̃ - I)`.
    Det,
    /// The determinant multiplied by the `σ̃` pole factors; entire in `k`
    /// away from `Ũ` poles.
    Cleared,
    /// `Σ (-1)^m A e^{ikℓ}` over irreducible pseudo-orbits.
    PseudoOrbit,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "det" => Ok(Variant::Det),
            "cleared" | "det_cleared" => Ok(Variant::Cleared),
            "po" | "pseudo_orbit" => Ok(Variant::PseudoOrbit),
            other => Err(format!("unknown variant `{other}` (det|cleared|po)")),
        }
    }
}

/// The resonance condition of a graph in one of its three forms.
pub struct GraphSecular<'a> {
    model: &'a ScatteringModel,
    variant: Variant,
    orbits: Option<PseudoOrbits>,
}

impl<'a> GraphSecular<'a> {
    pub fn det(model: &'a ScatteringModel) -> Self {
        GraphSecular { model, variant: Variant::Det, orbits: None }
    }

    pub fn cleared(model: &'a ScatteringModel) -> Self {
        GraphSecular { model, variant: Variant::Cleared, orbits: None }
    }

    /// Enumerates the pseudo-orbits of the model up front.
    pub fn pseudo_orbit(model: &'a ScatteringModel) -> Result<Self> {
        let orbits = PseudoOrbits::new(model.bonds())?;
        Ok(GraphSecular { model, variant: Variant::PseudoOrbit, orbits: Some(orbits) })
    }

    pub fn new(model: &'a ScatteringModel, variant: Variant) -> Result<Self> {
        match variant {
            Variant::Det => Ok(Self::det(model)),
            Variant::Cleared => Ok(Self::cleared(model)),
            Variant::PseudoOrbit => Self::pseudo_orbit(model),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn model(&self) -> &ScatteringModel {
        self.model
    }
}

impl Analytic for GraphSecular<'_> {
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)> {
        match self.variant {
            Variant::Det => self.model.secular_det_scaled(k),
            Variant::Cleared => {
                let lengths: Vec<C64> = self.model.lengths().into_iter().map(|l| C64::new(l, 0.0)).collect();
                self.model.cleared_with_lengths(k, &lengths)
            }
            Variant::PseudoOrbit => {
                let s = self.model.s_matrix(k)?;
                let lengths: Vec<C64> = self.model.lengths().into_iter().map(|l| C64::new(l, 0.0)).collect();
                let orbits = self.orbits.as_ref().expect("pseudo-orbit variant carries its orbits");
                Ok(orbits.evaluate(&s, k, &lengths))
            }
        }
    }

    fn is_suspect(&self, k: C64) -> bool {
        match self.variant {
            Variant::Cleared => self.model.clearing_factor(k).map(|f| f.relative() < SUSPECT_THRESHOLD).unwrap_or(true),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{MetricGraph, VertexCoupling};

    #[test]
    fn variants_agree() {
        let mut b = MetricGraph::builder();
        b.vertex("L", VertexCoupling::Delta(10.0));
        b.vertex("R", VertexCoupling::Delta(10.0));
        b.edge("L", "R", 1.0).edge("L", "R", 1.0).lead("L").lead("R");
        let m = ScatteringModel::new(b.build().unwrap()).unwrap();
        let k = C64::new(0.5, 0.1);
        let det = GraphSecular::det(&m).eval(k).unwrap();
        let po = GraphSecular::pseudo_orbit(&m).unwrap().eval(k).unwrap();
        assert!((det - po).norm() <= 1e-10 * det.norm().max(1e-300), "{det} vs {po}");
    }

    #[test]
    fn neumann_root_at_zero_is_suspect() {
        let mut b = MetricGraph::builder();
        b.vertex("v", VertexCoupling::Neumann);
        b.edge("v", "v", 1.0);
        let m = ScatteringModel::new(b.build().unwrap()).unwrap();
        let f = GraphSecular::cleared(&m);
        assert!(f.is_suspect(C64::new(1e-9, 0.0)));
        assert!(!f.is_suspect(C64::new(std::f64::consts::PI, 0.0)));
    }

    #[test]
    fn parse_variant() {
        assert_eq!("po".parse::<Variant>().unwrap(), Variant::PseudoOrbit);
        assert!("nope".parse::<Variant>().is_err());
    }
}

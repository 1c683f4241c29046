//! Hand-derived resonance conditions for the example graphs, kept exactly as
//! printed so they can be compared with the general machinery through their
//! zero sets (overall factors differ).

use crate::secular::Analytic;
use crate::{fixtures, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// Loop of two edges between two vertices with one lead each, equal
    /// δ strengths.
    LoopDeltaSym { alpha: f64, l1: f64, l2: f64 },
    /// Cross: standard centre with two leads, Dirichlet end on edge 1,
    /// Robin end on edge 2.
    CrossRobin { alpha: f64, l1: f64, l2: f64 },
    /// Two-lead loop with δ strengths `alpha1`, `alpha2`.
    LoopDelta2 { alpha1: f64, alpha2: f64, l1: f64, l2: f64 },
    /// Two-lead loop with δ′ₛ strengths.
    LoopDeltaPrime { beta1: f64, beta2: f64, l1: f64, l2: f64 },
    /// Two-lead loop, δ at the left vertex, δ′ₛ at the right one.
    LoopMixed { alpha: f64, beta: f64, l1: f64, l2: f64 },
}

pub const NAMES: [&str; 5] = ["loop_delta_sym", "cross_robin", "loop_delta_2", "loop_deltaprime", "loop_mixed"];

/// Closed-form condition of a named fixture with the fixture's parameters.
pub fn closed_form_condition(name: &str) -> Result<ClosedForm> {
    let fx = fixtures::load_fixture(name)?;
    fx.closed_form.ok_or_else(|| Error::UnknownFixture(format!("{name} (no closed form)")))
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::LoopDeltaSym { .. } => "loop_delta_sym",
            ClosedForm::CrossRobin { .. } => "cross_robin",
            ClosedForm::LoopDelta2 { .. } => "loop_delta_2",
            ClosedForm::LoopDeltaPrime { .. } => "loop_deltaprime",
            ClosedForm::LoopMixed { .. } => "loop_mixed",
        }
    }

    /// The additive terms of the printed expression as
    /// `(coefficient, oscillating factor, reach)`; `reach` is the total length
    /// inside the factor, so `|factor| ≤ e^{|Im k| reach}`.
    pub fn terms(&self, k: C64) -> Vec<(C64, C64, f64)> {
        let i = C64::i();
        let one = C64::new(1.0, 0.0);
        let e = |x: C64| (i * x).exp();
        match *self {
            ClosedForm::LoopDeltaSym { alpha, l1, l2 } => {
                let a = C64::new(alpha, 0.0);
                vec![
                    ((a - 3.0 * i * k).powi(2), one, 0.0),
                    (-(a - i * k).powi(2), e(2.0 * k * l1), 2.0 * l1),
                    (-(a - i * k).powi(2), e(2.0 * k * l2), 2.0 * l2),
                    (8.0 * k * k, e(k * (l1 + l2)), l1 + l2),
                    ((a + i * k).powi(2), e(2.0 * k * (l1 + l2)), 2.0 * (l1 + l2)),
                ]
            }
            ClosedForm::CrossRobin { alpha, l1, l2 } => {
                let (s1, c1, s2, c2) = ((k * l1).sin(), (k * l1).cos(), (k * l2).sin(), (k * l2).cos());
                let r = l1 + l2;
                vec![
                    (k, c1 * c2, r),
                    (alpha - 2.0 * i * k, s1 * c2, r),
                    (C64::new(alpha, 0.0), c1 * s2, r),
                    (-(2.0 * i * alpha + k), s1 * s2, r),
                ]
            }
            ClosedForm::LoopDelta2 { alpha1, alpha2, l1, l2 } => {
                let r = l1 + l2;
                vec![
                    ((alpha1 - i * k) * (alpha2 - i * k), (k * l1).sin() * (k * l2).sin(), r),
                    (-4.0 * k * k, (k * r / 2.0).sin().powi(2), r),
                    (k * (alpha1 + alpha2 - 2.0 * i * k), (k * r).sin(), r),
                ]
            }
            ClosedForm::LoopDeltaPrime { beta1, beta2, l1, l2 } => {
                let r = l1 + l2;
                vec![
                    ((beta1 + beta2) * k + 2.0 * i, (k * r).sin(), r),
                    (C64::new(2.0, 0.0), one, 0.0),
                    (C64::new(-2.0, 0.0), (k * l1).cos() * (k * l2).cos(), r),
                    (3.0 - beta1 * beta2 * k * k - i * k * (beta1 + beta2), (k * l1).sin() * (k * l2).sin(), r),
                ]
            }
            ClosedForm::LoopMixed { alpha, beta, l1, l2 } => {
                let r = l1 + l2;
                vec![
                    (beta * k * k + i * k * alpha * beta + 3.0 * i * k - alpha, (k * l1).cos() * (k * l2).cos(), r),
                    (-i * beta * k * k + i * alpha + 2.0 * k, (k * r).sin(), r),
                    (-2.0 * i * k, (k * l1).sin() * (k * l2).sin(), r),
                    (2.0 * i * k, one, 0.0),
                ]
            }
        }
    }
}

impl Analytic for ClosedForm {
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)> {
        let terms = self.terms(k);
        let value = terms.iter().map(|(c, o, _)| c * o).sum();
        let scale = terms.iter().map(|(c, _, reach)| c.norm() * (k.im.abs() * reach).exp()).sum();
        Ok((value, scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn loop_delta_2_vanishes_at_pi() {
        let f = ClosedForm::LoopDelta2 { alpha1: 1.0, alpha2: 1.0, l1: 1.0, l2: 1.0 };
        assert!(f.eval(C64::new(PI, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn cross_robin_rounded_length() {
        let f = ClosedForm::CrossRobin { alpha: 3.0, l1: 1.0, l2: 0.74266 };
        assert!(f.eval(C64::new(PI, 0.0)).unwrap().norm() < 1e-3);
    }

    #[test]
    fn all_names_resolve() {
        for name in NAMES {
            assert_eq!(closed_form_condition(name).unwrap().name(), name);
        }
        assert!(matches!(closed_form_condition("nope"), Err(Error::UnknownFixture(_))));
    }
}

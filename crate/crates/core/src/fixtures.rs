//! Named example graphs with their length schedules and, where one exists,
//! the hand-derived resonance condition.

use crate::closed_form::ClosedForm;
use crate::graph::{EdgeLengthSchedule, EdgeMotion};
use crate::{Error, MetricGraph, Result, VertexCoupling};
use std::f64::consts::PI;

/// Length of the Robin arm of the cross at which `k = π` is an embedded
/// eigenvalue for `ℓ₁ = 1`, `α = 3`: `ℓ₂ = (ℓ₁/π)(π - arctan(π/(αℓ₁)))`.
pub fn cross_robin_length(alpha: f64, l1: f64, n: u32) -> f64 {
    let npi = n as f64 * PI;
    l1 / npi * (PI - (npi / (alpha * l1)).atan())
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub graph: MetricGraph,
    pub schedule: EdgeLengthSchedule,
    /// Embedded eigenvalue at `t = 0`, for fixtures used with a moving schedule.
    pub k0: Option<f64>,
    pub closed_form: Option<ClosedForm>,
}

/// The five named example graphs.
pub const PRIMARY: [&str; 5] = ["loop_delta_sym", "cross_robin", "loop_delta_2", "loop_deltaprime", "loop_mixed"];

/// Every name accepted by [`load_fixture`].
pub const ALL: [&str; 14] = [
    "loop_delta_sym",
    "cross_robin",
    "loop_delta_2",
    "loop_deltaprime",
    "loop_mixed",
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "fig8",
    "fig9",
];

const INCOMMENSURATE: f64 = 1.2137;

fn two_lead_loop(left: VertexCoupling, right: VertexCoupling, l1: f64, l2: f64) -> MetricGraph {
    let mut b = MetricGraph::builder();
    b.vertex("L", left);
    b.vertex("R", right);
    b.edge("L", "R", l1).edge("L", "R", l2).lead("L").lead("R");
    b.build().expect("two-lead loop is valid")
}

fn fixed(name: &'static str, description: &'static str, graph: MetricGraph, closed_form: ClosedForm) -> Fixture {
    let schedule = EdgeLengthSchedule::constant(&graph);
    Fixture { name, description, graph, schedule, k0: None, closed_form: Some(closed_form) }
}

fn loop_delta_sym() -> Fixture {
    let alpha = 10.0;
    let graph = two_lead_loop(VertexCoupling::Delta(alpha), VertexCoupling::Delta(alpha), 1.0, 1.0);
    let schedule = EdgeLengthSchedule::linear(&graph, &[-1.0, 2.0]).expect("two edges");
    Fixture {
        name: "loop_delta_sym",
        description: "circle with two leads, delta(10) at both vertices, l1 = 1 - t, l2 = 1 + 2t, k0 = 2pi",
        graph,
        schedule,
        k0: Some(2.0 * PI),
        closed_form: Some(ClosedForm::LoopDeltaSym { alpha, l1: 1.0, l2: 1.0 }),
    }
}

fn cross_robin() -> Fixture {
    let (alpha, l1) = (3.0, 1.0);
    let l2 = cross_robin_length(alpha, l1, 1);
    let mut b = MetricGraph::builder();
    b.vertex("C", VertexCoupling::Standard);
    b.vertex("D", VertexCoupling::Dirichlet);
    b.vertex("R", VertexCoupling::Robin(alpha));
    b.edge("C", "D", l1).edge("C", "R", l2).lead("C").lead("C");
    let graph = b.build().expect("cross is valid");
    let schedule = EdgeLengthSchedule {
        edges: vec![
            EdgeMotion { length: l1, rate: -1.0, accel: 0.0 },
            EdgeMotion { length: l2, rate: 1.0, accel: 0.0 },
        ],
    };
    Fixture {
        name: "cross_robin",
        description: "cross-shaped resonator: standard centre with two leads, Dirichlet arm l1 = 1 - t, Robin(3) arm l2 = 0.74266 + t, k0 = pi",
        graph,
        schedule,
        k0: Some(PI),
        closed_form: Some(ClosedForm::CrossRobin { alpha, l1, l2 }),
    }
}

fn loop_delta_2(l2: f64) -> Fixture {
    fixed(
        "loop_delta_2",
        "two-lead loop, delta(1) at both vertices",
        two_lead_loop(VertexCoupling::Delta(1.0), VertexCoupling::Delta(1.0), 1.0, l2),
        ClosedForm::LoopDelta2 { alpha1: 1.0, alpha2: 1.0, l1: 1.0, l2 },
    )
}

fn loop_deltaprime(beta1: f64, beta2: f64, l2: f64) -> Fixture {
    fixed(
        "loop_deltaprime",
        "two-lead loop, delta'_s(1) at both vertices",
        two_lead_loop(VertexCoupling::DeltaPrimeS(beta1), VertexCoupling::DeltaPrimeS(beta2), 1.0, l2),
        ClosedForm::LoopDeltaPrime { beta1, beta2, l1: 1.0, l2 },
    )
}

fn loop_mixed(l2: f64) -> Fixture {
    fixed(
        "loop_mixed",
        "two-lead loop, delta(1) at the left vertex, delta'_s(1) at the right one",
        two_lead_loop(VertexCoupling::Delta(1.0), VertexCoupling::DeltaPrimeS(1.0), 1.0, l2),
        ClosedForm::LoopMixed { alpha: 1.0, beta: 1.0, l1: 1.0, l2 },
    )
}

fn renamed(mut f: Fixture, name: &'static str, description: &'static str) -> Fixture {
    f.name = name;
    f.description = description;
    f
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "loop_delta_sym" => loop_delta_sym(),
        "fig1" => renamed(loop_delta_sym(), "fig1", "loop_delta_sym with its moving schedule"),
        "cross_robin" => cross_robin(),
        "fig9" => renamed(cross_robin(), "fig9", "cross_robin with its moving schedule"),
        "loop_delta_2" => loop_delta_2(1.0),
        "fig2" => renamed(loop_delta_2(1.0), "fig2", "loop_delta_2, l = (1, 1)"),
        "fig3" => renamed(loop_delta_2(INCOMMENSURATE), "fig3", "loop_delta_2, l = (1, 1.2137)"),
        "loop_deltaprime" => loop_deltaprime(1.0, 1.0, 1.0),
        "fig4" => renamed(loop_deltaprime(1.0, 1.0, 1.0), "fig4", "loop_deltaprime, l = (1, 1)"),
        "fig5" => renamed(loop_deltaprime(1.0, 1.0, INCOMMENSURATE), "fig5", "loop_deltaprime, l = (1, 1.2137)"),
        "fig6" => renamed(loop_deltaprime(1.0, 3.0, 1.5), "fig6", "loop_deltaprime, beta = (1, 3), l = (1, 1.5)"),
        "loop_mixed" => loop_mixed(INCOMMENSURATE),
        "fig7" => renamed(loop_mixed(1.0), "fig7", "loop_mixed, l = (1, 1)"),
        "fig8" => renamed(loop_mixed(INCOMMENSURATE), "fig8", "loop_mixed, l = (1, 1.2137)"),
        other => return Err(Error::UnknownFixture(other.to_string())),
    })
}

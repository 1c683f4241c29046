mod common;

use common::*;
use qgraph::closed_form::closed_form_condition;
use qgraph::roots::{find_roots, SearchRegion};
use qgraph::secular::{Analytic, GraphSecular};
use qgraph::{fixtures, graph, MetricGraph, ScatteringModel, VertexCoupling, C64};
use std::f64::consts::PI;

#[test]
fn cleared_is_det_times_factor() {
    let mut r = rng(3);
    for (name, m) in primary_models() {
        for _ in 0..30 {
            let k = random_k(&mut r);
            let (Ok(d), Ok(c), Ok(f)) = (m.secular_det(k), m.secular_cleared(k), m.clearing_factor(k)) else {
                continue;
            };
            let want = d * f.value;
            assert!((c - want).norm() <= 1e-9 * (1.0 + c.norm().max(want.norm())), "{name} {k}: {c} vs {want}");
        }
    }
}

#[test]
fn dirichlet_loop_has_zeros_at_multiples_of_pi_over_l() {
    let mut b = MetricGraph::builder();
    b.vertex("v", VertexCoupling::Dirichlet);
    b.edge("v", "v", 1.5);
    let m = ScatteringModel::new(b.build().unwrap()).unwrap();
    for n in 1..5 {
        let k = C64::new(n as f64 * PI / 1.5, 0.0);
        assert!(m.secular_det(k).unwrap().norm() < 1e-12);
    }
    assert!(m.secular_det(C64::new(1.0, 0.0)).unwrap().norm() > 0.1);
}

#[test]
fn loop_delta_sym_zero_set_matches_printed_condition() {
    let fx = fixtures::load_fixture("loop_delta_sym").unwrap();
    let m = ScatteringModel::new(fx.graph).unwrap();
    let region = SearchRegion::new(0.5, 12.0, -2.0, 0.05).unwrap();
    let lib: Vec<C64> =
        find_roots(&GraphSecular::cleared(&m), &region, 1e-10).unwrap().into_iter().map(|r| r.k).collect();
    let cf = closed_form_condition("loop_delta_sym").unwrap();
    let printed: Vec<C64> = find_roots(&cf, &region, 1e-10).unwrap().into_iter().map(|r| r.k).collect();
    assert!(!lib.is_empty());
    assert!(same_set(&lib, &printed, 1e-8), "{lib:?}\n{printed:?}");
}

#[test]
fn loop_deltaprime_root_sets_coincide() {
    let fx = fixtures::load_fixture("loop_deltaprime").unwrap();
    let m = ScatteringModel::new(fx.graph).unwrap();
    let cf = closed_form_condition("loop_deltaprime").unwrap();
    let region = SearchRegion::new(0.5, 8.0, -2.0, 0.05).unwrap();
    for root in find_roots(&cf, &region, 1e-10).unwrap() {
        assert!(GraphSecular::cleared(&m).residual(root.k).unwrap() < 1e-8);
    }
    for root in find_roots(&GraphSecular::cleared(&m), &region, 1e-10).unwrap() {
        assert!(cf.residual(root.k).unwrap() < 1e-8);
    }
}

#[test]
fn plane_wave_matching_has_the_same_roots() {
    for (name, m) in primary_models() {
        let region = SearchRegion::new(0.5, 9.0, -2.0, 0.05).unwrap();
        let lib: Vec<C64> = find_roots(&GraphSecular::cleared(&m), &region, 1e-10)
            .unwrap()
            .into_iter()
            .filter(|r| !r.suspect)
            .map(|r| r.k)
            .collect();
        let direct: Vec<C64> =
            find_roots(&Matching(m.graph()), &region, 1e-10).unwrap().into_iter().map(|r| r.k).collect();
        assert!(same_set(&lib, &direct, 1e-7), "{name}\n{lib:?}\n{direct:?}");
    }
}

#[test]
fn plane_wave_matching_on_random_graphs() {
    let mut r = rng(19);
    let mut checked = 0;
    for _ in 0..6 {
        let g = random_graph(&mut r, 3, 3, 2);
        let m = ScatteringModel::new(g.clone()).unwrap();
        let region = SearchRegion::new(0.5, 6.0, -1.5, 0.05).unwrap();
        let Ok(found) = find_roots(&GraphSecular::cleared(&m), &region, 1e-10) else { continue };
        for root in found.iter().filter(|r| !r.suspect) {
            assert!(Matching(&g).residual(root.k).unwrap() < 1e-8, "{}", root.k);
            checked += 1;
        }
    }
    assert!(checked >= 5);
}

#[test]
fn mirror_symmetry_of_roots() {
    for (name, m) in primary_models() {
        let f = GraphSecular::cleared(&m);
        let region = SearchRegion::new(0.5, 15.0, -2.5, 0.05).unwrap();
        for root in find_roots(&f, &region, 1e-10).unwrap() {
            let mirrored = -root.k.conj();
            assert!(f.residual(mirrored).unwrap() < 1e-8, "{name}: {}", root.k);
        }
    }
}

#[test]
fn fixtures_round_trip_through_documents() {
    let mut r = rng(23);
    for name in fixtures::ALL {
        let fx = fixtures::load_fixture(name).unwrap();
        let back = graph::build_graph(&fx.graph.to_json()).unwrap();
        let (a, b) = (ScatteringModel::new(fx.graph).unwrap(), ScatteringModel::new(back).unwrap());
        for _ in 0..10 {
            let k = random_k(&mut r);
            let (Ok(x), Ok(y)) = (a.secular_cleared(k), b.secular_cleared(k)) else { continue };
            assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0), "{name}");
        }
    }
}

#[test]
fn clearing_zero_is_flagged() {
    let mut b = MetricGraph::builder();
    b.vertex("v", VertexCoupling::Neumann);
    b.vertex("w", VertexCoupling::Neumann);
    b.edge("v", "w", 1.0).lead("v");
    let m = ScatteringModel::new(b.build().unwrap()).unwrap();
    let region = SearchRegion::new(-0.3, 3.5, -0.5, 0.05).unwrap();
    let roots = find_roots(&GraphSecular::cleared(&m), &region, 1e-10).unwrap();
    let at_zero: Vec<_> = roots.iter().filter(|r| r.k.norm() < 1e-6).collect();
    assert!(!at_zero.is_empty() && at_zero.iter().all(|r| r.suspect));
    assert!(roots.iter().any(|r| (r.k.re - PI).abs() < 1e-9 && !r.suspect && r.real_axis));
}

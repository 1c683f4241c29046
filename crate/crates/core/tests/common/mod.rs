#![allow(dead_code)]

use qgraph::graph::{EdgeEnd, Side};
use qgraph::roots::{newton_refine, SearchRegion};
use qgraph::secular::Analytic;
use qgraph::{coupling, fixtures, linalg, CMatrix, MetricGraph, Result, ScatteringModel, VertexCoupling, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_k(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(0.1..30.0), rng.gen_range(-3.0..0.5))
}

pub fn primary_models() -> Vec<(&'static str, ScatteringModel)> {
    fixtures::PRIMARY
        .iter()
        .map(|&n| (n, ScatteringModel::new(fixtures::load_fixture(n).unwrap().graph).unwrap()))
        .collect()
}

/// A random `d×d` unitary matrix: Cayley transform of a random Hermitian one.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = C64::new(rng.gen_range(-3.0..3.0), 0.0);
        for j in 0..i {
            let z = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let id = linalg::identity(d);
    let plus = &h + &id * C64::i();
    let minus = &h - &id * C64::i();
    minus * linalg::inverse(&plus).unwrap()
}

pub fn random_coupling(rng: &mut ChaCha8Rng, degree: usize) -> VertexCoupling {
    match rng.gen_range(0..6) {
        0 => VertexCoupling::Standard,
        1 => VertexCoupling::Delta(rng.gen_range(-5.0..5.0)),
        2 => VertexCoupling::DeltaPrimeS(rng.gen_range(-5.0..5.0)),
        3 if degree == 1 => VertexCoupling::Robin(rng.gen_range(-5.0..5.0)),
        4 => VertexCoupling::General(random_unitary(rng, degree)),
        _ => VertexCoupling::Delta(rng.gen_range(0.0..3.0)),
    }
}

/// Random connected multigraph with `vertices` vertices, `edges ≥ vertices - 1`
/// internal edges (loops allowed) and `leads` leads.
pub fn random_graph(rng: &mut ChaCha8Rng, vertices: usize, edges: usize, leads: usize) -> MetricGraph {
    let mut ends: Vec<(usize, usize, f64)> = Vec::new();
    for v in 1..vertices {
        ends.push((rng.gen_range(0..v), v, rng.gen_range(0.3..2.0)));
    }
    while ends.len() < edges {
        ends.push((rng.gen_range(0..vertices), rng.gen_range(0..vertices), rng.gen_range(0.3..2.0)));
    }
    let lead_at: Vec<usize> = (0..leads).map(|_| rng.gen_range(0..vertices)).collect();
    let mut degree = vec![0usize; vertices];
    for &(a, b, _) in &ends {
        degree[a] += 1;
        degree[b] += 1;
    }
    for &v in &lead_at {
        degree[v] += 1;
    }
    let mut b = MetricGraph::builder();
    for (v, &d) in degree.iter().enumerate() {
        b.vertex(&format!("v{v}"), random_coupling(rng, d));
    }
    for &(a, c, l) in &ends {
        b.edge_by_index(a, c, l);
    }
    for &v in &lead_at {
        b.lead_by_index(v);
    }
    b.build().unwrap()
}

/// Direct matching of plane waves: `ψⱼ = aⱼ e^{ikx} + bⱼ e^{-ikx}` on edge `j`,
/// `c e^{ikx}` on each lead, and `(U - I)ψ + i(U + I)ψ' = 0` at every vertex
/// with derivatives taken away from the vertex.
pub fn matching_matrix(g: &MetricGraph, k: C64) -> Result<CMatrix> {
    let n = g.edge_count();
    let size = 2 * n + g.lead_count();
    let mut m = CMatrix::zeros(size, size);
    let i = C64::i();
    let mut row = 0;
    for v in 0..g.vertices().len() {
        let d = g.degree(v);
        let u = coupling::coupling_matrix(&g.vertices()[v].coupling, d)?;
        let id = linalg::identity(d);
        let a = &u - &id;
        let b = (&u + &id) * i;
        // value and outgoing derivative of each end as linear forms in the unknowns
        let forms: Vec<Vec<(usize, C64, C64)>> = g
            .ends(v)
            .iter()
            .map(|end| match *end {
                EdgeEnd::Internal { edge, side: Side::Start } => {
                    vec![(edge, C64::new(1.0, 0.0), i * k), (n + edge, C64::new(1.0, 0.0), -i * k)]
                }
                EdgeEnd::Internal { edge, side: Side::End } => {
                    let l = g.edges()[edge].length;
                    let (p, q) = ((i * k * l).exp(), (-i * k * l).exp());
                    vec![(edge, p, -i * k * p), (n + edge, q, i * k * q)]
                }
                EdgeEnd::Lead { lead } => vec![(2 * n + lead, C64::new(1.0, 0.0), i * k)],
            })
            .collect();
        for r in 0..d {
            for (c, form) in forms.iter().enumerate() {
                for &(col, val, der) in form {
                    m[(row + r, col)] += a[(r, c)] * val + b[(r, c)] * der;
                }
            }
        }
        row += d;
    }
    Ok(m)
}

pub struct Matching<'a>(pub &'a MetricGraph);

impl Analytic for Matching<'_> {
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)> {
        let m = matching_matrix(self.0, k)?;
        Ok((linalg::det(&m), linalg::hadamard_bound(&m)))
    }
}

/// Newton from every node of an `n × n` grid; distinct limits inside the region.
pub fn dense_grid_roots<F: Analytic + ?Sized>(f: &F, r: &SearchRegion, n: usize) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let k0 = C64::new(
                r.re_min + (r.re_max - r.re_min) * (i as f64 + 0.5) / n as f64,
                r.im_min + (r.im_max - r.im_min) * (j as f64 + 0.5) / n as f64,
            );
            if let Ok(k) = newton_refine(f, k0, 1e-10) {
                if r.contains(k) && !out.iter().any(|o| (o - k).norm() < 1e-7) {
                    out.push(k);
                }
            }
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re));
    out
}

/// Every point of `a` has a partner in `b` within `tol`, and vice versa.
pub fn same_set(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| (x - y).norm() < tol))
        && b.iter().all(|y| a.iter().any(|x| (x - y).norm() < tol))
}

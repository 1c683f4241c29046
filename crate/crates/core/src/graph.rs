//! Metric graph data model, vertex couplings and the JSON graph document.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{coupling, linalg, CMatrix, Error, Result, C64};

/// Vertex coupling family. Every variant maps to a unitary matrix `U` in
/// `(U - I)ψ + i(U + I)ψ' = 0`, see [`coupling::coupling_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub enum VertexCoupling {
    /// Continuity plus vanishing derivative sum (Kirchhoff).
    Standard,
    /// Continuity plus `Σ f'_j = α f`.
    Delta(f64),
    /// Common derivative plus `Σ f_j = β f'`.
    DeltaPrimeS(f64),
    Dirichlet,
    Neumann,
    /// `f' = α f` at a degree-1 vertex.
    Robin(f64),
    /// Arbitrary unitary matrix, rows/columns in the vertex-local end order.
    General(CMatrix),
}

impl VertexCoupling {
    pub fn type_name(&self) -> &'static str {
        match self {
            VertexCoupling::Standard => "standard",
            VertexCoupling::Delta(_) => "delta",
            VertexCoupling::DeltaPrimeS(_) => "delta_prime_s",
            VertexCoupling::Dirichlet => "dirichlet",
            VertexCoupling::Neumann => "neumann",
            VertexCoupling::Robin(_) => "robin",
            VertexCoupling::General(_) => "general",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The `x = 0` end of the edge.
    Start,
    /// The `x = ℓ` end of the edge.
    End,
}

/// One edge-end incident to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeEnd {
    Internal { edge: usize, side: Side },
    Lead { lead: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub coupling: VertexCoupling,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Vertex at `x = 0`.
    pub start: usize,
    /// Vertex at `x = ℓ`.
    pub end: usize,
    pub length: f64,
}

/// Validated metric graph with leads.
///
/// Immutable once built. Each vertex carries its edge-ends in canonical
/// order: internal ends in edge order (a loop contributes its start end then
/// its end end), followed by lead ends in lead order.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    leads: Vec<usize>,
    ends: Vec<Vec<EdgeEnd>>,
    internal_degree: Vec<usize>,
}

impl MetricGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertex index of each lead.
    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    /// Number of internal edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn lead_count(&self) -> usize {
        self.leads.len()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    /// Canonical edge-end list of vertex `v`.
    pub fn ends(&self, v: usize) -> &[EdgeEnd] {
        &self.ends[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.ends[v].len()
    }

    /// Number of internal edge-ends `n` at vertex `v`.
    pub fn internal_degree(&self, v: usize) -> usize {
        self.internal_degree[v]
    }

    /// Number of leads `m` at vertex `v`.
    pub fn lead_degree(&self, v: usize) -> usize {
        self.ends[v].len() - self.internal_degree[v]
    }

    /// Position of an internal edge-end within the vertex-local order.
    pub fn end_position(&self, edge: usize, side: Side) -> (usize, usize) {
        let e = &self.edges[edge];
        let v = match side {
            Side::Start => e.start,
            Side::End => e.end,
        };
        let pos = self.ends[v]
            .iter()
            .position(|x| *x == EdgeEnd::Internal { edge, side })
            .expect("edge-end registered at its vertex");
        (v, pos)
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Same topology with new internal edge lengths.
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<MetricGraph> {
        if lengths.len() != self.edges.len() {
            return Err(Error::InvalidSchedule(format!("{} lengths for {} edges", lengths.len(), self.edges.len())));
        }
        let mut g = self.clone();
        for (i, (e, &l)) in g.edges.iter_mut().zip(lengths).enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidLength { edge: i, length: l });
            }
            e.length = l;
        }
        Ok(g)
    }

    /// Same graph with every vertex coupling passed through `f`.
    pub fn map_couplings<F>(&self, f: F) -> Result<MetricGraph>
    where
        F: Fn(&VertexCoupling) -> VertexCoupling,
    {
        let mut b = GraphBuilder::default();
        for v in &self.vertices {
            b.vertex(&v.id, f(&v.coupling));
        }
        for e in &self.edges {
            b.edge_by_index(e.start, e.end, e.length);
        }
        for &l in &self.leads {
            b.lead_by_index(l);
        }
        b.build()
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc { id: VertexId::Text(v.id.clone()), coupling: CouplingDoc::from(&v.coupling) })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    a: VertexId::Text(self.vertices[e.start].id.clone()),
                    b: VertexId::Text(self.vertices[e.end].id.clone()),
                    length: e.length,
                })
                .collect(),
            leads: self
                .leads
                .iter()
                .map(|&l| LeadDoc { vertex: VertexId::Text(self.vertices[l].id.clone()) })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }
}

/// Incremental construction; [`GraphBuilder::build`] validates.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize, f64)>,
    leads: Vec<usize>,
    pending: Vec<Error>,
}

impl GraphBuilder {
    pub fn vertex(&mut self, id: &str, coupling: VertexCoupling) -> usize {
        if self.vertices.iter().any(|v| v.id == id) {
            self.pending.push(Error::DuplicateVertex(id.to_string()));
        }
        self.vertices.push(Vertex { id: id.to_string(), coupling });
        self.vertices.len() - 1
    }

    fn lookup(&mut self, id: &str, context: String) -> usize {
        match self.vertices.iter().position(|v| v.id == id) {
            Some(i) => i,
            None => {
                self.pending.push(Error::DanglingReference { context, id: id.to_string() });
                usize::MAX
            }
        }
    }

    pub fn edge(&mut self, a: &str, b: &str, length: f64) -> &mut Self {
        let n = self.edges.len();
        let ia = self.lookup(a, format!("edge {n}"));
        let ib = self.lookup(b, format!("edge {n}"));
        self.edges.push((ia, ib, length));
        self
    }

    pub fn edge_by_index(&mut self, a: usize, b: usize, length: f64) -> &mut Self {
        self.edges.push((a, b, length));
        self
    }

    pub fn lead(&mut self, v: &str) -> &mut Self {
        let n = self.leads.len();
        let iv = self.lookup(v, format!("lead {n}"));
        self.leads.push(iv);
        self
    }

    pub fn lead_by_index(&mut self, v: usize) -> &mut Self {
        self.leads.push(v);
        self
    }

    pub fn build(mut self) -> Result<MetricGraph> {
        if !self.pending.is_empty() {
            return Err(self.pending.swap_remove(0));
        }
        let nv = self.vertices.len();
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            for x in [a, b] {
                if x >= nv {
                    return Err(Error::DanglingReference { context: format!("edge {i}"), id: x.to_string() });
                }
            }
        }
        for (i, &l) in self.leads.iter().enumerate() {
            if l >= nv {
                return Err(Error::DanglingReference { context: format!("lead {i}"), id: l.to_string() });
            }
        }
        let mut ends = vec![Vec::new(); nv];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, &(a, b, length)) in self.edges.iter().enumerate() {
            if !(length.is_finite() && length > 0.0) {
                return Err(Error::InvalidLength { edge: i, length });
            }
            ends[a].push(EdgeEnd::Internal { edge: i, side: Side::Start });
            ends[b].push(EdgeEnd::Internal { edge: i, side: Side::End });
            edges.push(Edge { start: a, end: b, length });
        }
        let internal_degree: Vec<usize> = ends.iter().map(Vec::len).collect();
        for (i, &v) in self.leads.iter().enumerate() {
            ends[v].push(EdgeEnd::Lead { lead: i });
        }
        for (v, vertex) in self.vertices.iter().enumerate() {
            let d = ends[v].len();
            if d == 0 {
                return Err(Error::IsolatedVertex { vertex: vertex.id.clone() });
            }
            match &vertex.coupling {
                VertexCoupling::Robin(_) if d != 1 => {
                    return Err(Error::RobinDegree { vertex: vertex.id.clone(), degree: d });
                }
                VertexCoupling::General(u) => {
                    if u.nrows() != d || u.ncols() != d {
                        return Err(Error::CouplingSize {
                            vertex: vertex.id.clone(),
                            rows: u.nrows(),
                            cols: u.ncols(),
                            degree: d,
                        });
                    }
                    let deviation = linalg::unitarity_defect(u);
                    if deviation.is_nan() || deviation >= coupling::UNITARITY_TOL {
                        return Err(Error::NonUnitary { vertex: vertex.id.clone(), deviation });
                    }
                }
                _ => {}
            }
        }
        Ok(MetricGraph { vertices: self.vertices, edges, leads: self.leads, ends, internal_degree })
    }
}

/// Parse and validate a graph description document.
pub fn build_graph(document: &str) -> Result<MetricGraph> {
    let doc: GraphDocument = serde_json::from_str(document)?;
    doc.into_graph()
}

// ---------------------------------------------------------------------------
// Document format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Number(i64),
    Text(String),
}

impl VertexId {
    fn key(&self) -> String {
        match self {
            VertexId::Number(n) => n.to_string(),
            VertexId::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub leads: Vec<LeadDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    pub coupling: CouplingDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
}

/// Row-major matrix of `[re, im]` pairs, either nested by rows or flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDoc {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub a: VertexId,
    pub b: VertexId,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadDoc {
    pub vertex: VertexId,
}

impl From<&VertexCoupling> for CouplingDoc {
    fn from(c: &VertexCoupling) -> Self {
        let (param, matrix) = match c {
            VertexCoupling::Delta(a) | VertexCoupling::DeltaPrimeS(a) | VertexCoupling::Robin(a) => (Some(*a), None),
            VertexCoupling::General(u) => {
                let rows = u.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
                (None, Some(MatrixDoc::Rows(rows)))
            }
            _ => (None, None),
        };
        CouplingDoc { kind: c.type_name().to_string(), param, matrix }
    }
}

impl CouplingDoc {
    fn to_coupling(&self, vertex: &str) -> Result<VertexCoupling> {
        let param = || {
            self.param.filter(|p| p.is_finite()).ok_or_else(|| {
                Error::Document(format!("vertex `{vertex}`: coupling `{}` needs a finite `param`", self.kind))
            })
        };
        Ok(match self.kind.as_str() {
            "standard" | "kirchhoff" => VertexCoupling::Standard,
            "delta" => VertexCoupling::Delta(param()?),
            "delta_prime_s" | "deltaprime" | "delta_prime" => VertexCoupling::DeltaPrimeS(param()?),
            "dirichlet" => VertexCoupling::Dirichlet,
            "neumann" => VertexCoupling::Neumann,
            "robin" => VertexCoupling::Robin(param()?),
            "general" => {
                let m = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::Document(format!("vertex `{vertex}`: general coupling needs `matrix`")))?;
                VertexCoupling::General(matrix_from_doc(m, vertex)?)
            }
            other => return Err(Error::Document(format!("vertex `{vertex}`: unknown coupling type `{other}`"))),
        })
    }
}

fn matrix_from_doc(m: &MatrixDoc, vertex: &str) -> Result<CMatrix> {
    let (n, flat): (usize, Vec<[f64; 2]>) = match m {
        MatrixDoc::Rows(rows) => {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::Document(format!("vertex `{vertex}`: coupling matrix is not square")));
            }
            (n, rows.iter().flatten().copied().collect())
        }
        MatrixDoc::Flat(v) => {
            let n = (v.len() as f64).sqrt().round() as usize;
            if n * n != v.len() {
                return Err(Error::Document(format!(
                    "vertex `{vertex}`: flat matrix length {} is not a square",
                    v.len()
                )));
            }
            (n, v.clone())
        }
    };
    let data: Vec<C64> = flat.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    Ok(CMatrix::from_row_slice(n, n, &data))
}

impl GraphDocument {
    pub fn into_graph(self) -> Result<MetricGraph> {
        let mut b = GraphBuilder::default();
        let mut index: HashMap<String, usize> = HashMap::new();
        for v in &self.vertices {
            let id = v.id.key();
            let coupling = v.coupling.to_coupling(&id)?;
            index.insert(id.clone(), b.vertex(&id, coupling));
        }
        for e in &self.edges {
            b.edge(&e.a.key(), &e.b.key(), e.length);
        }
        for l in &self.leads {
            b.lead(&l.vertex.key());
        }
        b.build()
    }
}

// ---------------------------------------------------------------------------
// Edge length schedules

/// Quadratic motion of one edge length: `ℓ(t) = length + rate t + accel t²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeMotion {
    pub length: f64,
    #[serde(default)]
    pub rate: f64,
    #[serde(default)]
    pub accel: f64,
}

impl EdgeMotion {
    pub fn at(&self, t: f64) -> f64 {
        self.length + self.rate * t + 0.5 * self.accel * t * t
    }

    pub fn at_complex(&self, t: C64) -> C64 {
        self.length + self.rate * t + 0.5 * self.accel * t * t
    }
}

/// Per-edge length motion, in graph edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengthSchedule {
    pub edges: Vec<EdgeMotion>,
}

impl EdgeLengthSchedule {
    /// Every edge held at its current length.
    pub fn constant(g: &MetricGraph) -> Self {
        EdgeLengthSchedule {
            edges: g.edges().iter().map(|e| EdgeMotion { length: e.length, rate: 0.0, accel: 0.0 }).collect(),
        }
    }

    /// Linear motion `ℓⱼ(t) = ℓⱼ + ratesⱼ t`.
    pub fn linear(g: &MetricGraph, rates: &[f64]) -> Result<Self> {
        if rates.len() != g.edge_count() {
            return Err(Error::InvalidSchedule(format!("{} rates for {} edges", rates.len(), g.edge_count())));
        }
        Ok(EdgeLengthSchedule {
            edges: g
                .edges()
                .iter()
                .zip(rates)
                .map(|(e, &r)| EdgeMotion { length: e.length, rate: r, accel: 0.0 })
                .collect(),
        })
    }

    pub fn lengths_at(&self, t: f64) -> Vec<f64> {
        self.edges.iter().map(|m| m.at(t)).collect()
    }

    pub fn lengths_at_complex(&self, t: C64) -> Vec<C64> {
        self.edges.iter().map(|m| m.at_complex(t)).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.edges.iter().map(|m| m.rate).collect()
    }

    pub fn accels(&self) -> Vec<f64> {
        self.edges.iter().map(|m| m.accel).collect()
    }

    /// Checks edge count and that every length stays positive on `[t0, t1]`.
    pub fn validate(&self, g: &MetricGraph, t0: f64, t1: f64) -> Result<()> {
        if self.edges.len() != g.edge_count() {
            return Err(Error::InvalidSchedule(format!("{} entries for {} edges", self.edges.len(), g.edge_count())));
        }
        for (j, m) in self.edges.iter().enumerate() {
            if ![m.length, m.rate, m.accel].iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidSchedule(format!("edge {j}: non-finite coefficient")));
            }
            // a quadratic on an interval attains its minimum at an endpoint or the vertex
            let mut probes = vec![t0, t1];
            if m.accel != 0.0 {
                let tv = -m.rate / m.accel;
                if tv > t0.min(t1) && tv < t0.max(t1) {
                    probes.push(tv);
                }
            }
            if let Some(t) = probes.into_iter().find(|&t| m.at(t) <= 0.0) {
                return Err(Error::InvalidSchedule(format!("edge {j} has length {} at t = {t}", m.at(t))));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }
}

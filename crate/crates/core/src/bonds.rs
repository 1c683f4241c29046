//! The doubled directed graph: two oppositely oriented bonds per internal edge.
//!
//! Bond `j` runs along edge `j` from its `x = 0` vertex to its `x = ℓ` vertex,
//! bond `N + j` runs back. `Σ̃(k)` is assembled in this bond order with
//! `Σ̃[c, b] = σ̃⁽ᵛ⁾[end(c), end(b)]` whenever bonds `c` and `b` both arrive at
//! `v`; `S(k) = Q Σ̃(k)` then has `S[b', b] ≠ 0` only if `b'` leaves the
//! vertex where `b` arrives.

use crate::graph::Side;
use crate::{CMatrix, MetricGraph, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub edge: usize,
    pub reversed: bool,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone)]
pub struct BondSystem {
    edges: usize,
    bonds: Vec<Bond>,
    /// (vertex, internal end index) through which each bond arrives.
    arrival: Vec<(usize, usize)>,
    /// Bonds leaving each bond's head vertex.
    successors: Vec<Vec<usize>>,
    /// Per vertex, arriving bonds indexed by internal end position.
    arriving: Vec<Vec<usize>>,
}

impl BondSystem {
    pub fn new(g: &MetricGraph) -> Self {
        let n = g.edge_count();
        let mut bonds = Vec::with_capacity(2 * n);
        let mut arrival = Vec::with_capacity(2 * n);
        for reversed in [false, true] {
            for (j, e) in g.edges().iter().enumerate() {
                let (tail, head, side) =
                    if reversed { (e.end, e.start, Side::Start) } else { (e.start, e.end, Side::End) };
                bonds.push(Bond { edge: j, reversed, tail, head });
                arrival.push(g.end_position(j, side));
            }
        }
        let mut arriving: Vec<Vec<usize>> =
            (0..g.vertices().len()).map(|v| vec![usize::MAX; g.internal_degree(v)]).collect();
        for (b, &(v, pos)) in arrival.iter().enumerate() {
            arriving[v][pos] = b;
        }
        let successors =
            bonds.iter().map(|b| (0..bonds.len()).filter(|&c| bonds[c].tail == b.head).collect()).collect();
        BondSystem { edges: n, bonds, arrival, successors, arriving }
    }

    /// Number of internal edges `N`; there are `2N` bonds.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// The oppositely oriented bond on the same edge (the action of `Q`).
    pub fn reverse(&self, b: usize) -> usize {
        (b + self.edges) % (2 * self.edges)
    }

    pub fn successors(&self, b: usize) -> &[usize] {
        &self.successors[b]
    }

    /// `(vertex, internal end index)` where bond `b` arrives.
    pub fn arrival(&self, b: usize) -> (usize, usize) {
        self.arrival[b]
    }

    /// `(vertex, internal end index)` where bond `b` departs.
    pub fn departure(&self, b: usize) -> (usize, usize) {
        self.arrival[self.reverse(b)]
    }

    /// `b1..bN` for forward bonds, `r1..rN` for reversed ones.
    pub fn name(&self, b: usize) -> String {
        let bond = &self.bonds[b];
        format!("{}{}", if bond.reversed { 'r' } else { 'b' }, bond.edge + 1)
    }

    /// `Q = [[0, I_N], [I_N, 0]]`.
    pub fn q_matrix(&self) -> CMatrix {
        let mut q = CMatrix::zeros(self.len(), self.len());
        for b in 0..self.len() {
            q[(self.reverse(b), b)] = C64::new(1.0, 0.0);
        }
        q
    }

    /// Place per-vertex `n_v × n_v` blocks (indexed by internal end position)
    /// into a `2N × 2N` matrix in bond order.
    pub fn assemble(&self, blocks: &[CMatrix]) -> CMatrix {
        let mut out = CMatrix::zeros(self.len(), self.len());
        for (v, arriving) in self.arriving.iter().enumerate() {
            for (i, &c) in arriving.iter().enumerate() {
                for (j, &b) in arriving.iter().enumerate() {
                    out[(c, b)] = blocks[v][(i, j)];
                }
            }
        }
        out
    }

    /// `S = Q Σ̃` from the assembled `Σ̃`, as a row permutation.
    pub fn apply_q(&self, m: &CMatrix) -> CMatrix {
        let mut out = m.clone();
        for b in 0..self.len() {
            out.set_row(self.reverse(b), &m.row(b));
        }
        out
    }

    /// Per-bond lengths (the diagonal of `L`).
    pub fn bond_lengths<T: Copy>(&self, edge_lengths: &[T]) -> Vec<T> {
        self.bonds.iter().map(|b| edge_lengths[b.edge]).collect()
    }
}

/// `Σ̃(k)` from the effective vertex-scattering matrices of every vertex.
pub fn big_sigma(bs: &BondSystem, sigmas: &[crate::scattering::EffectiveSigma], k: C64) -> Result<CMatrix> {
    let blocks = sigmas.iter().map(|s| s.at(k)).collect::<Result<Vec<_>>>()?;
    Ok(bs.assemble(&blocks))
}

/// `build_bond_system` in operation form.
pub fn build_bond_system(g: &MetricGraph) -> BondSystem {
    BondSystem::new(g)
}

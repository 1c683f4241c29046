//! Periodic orbits and irreducible pseudo-orbits on the bond graph.
//!
//! Simple cycles of the bond digraph are found with Johnson's algorithm and
//! returned with their lowest bond first. Irreducible pseudo-orbits are the
//! collections of pairwise bond-disjoint cycles, including the empty one;
//! their signed sum `Σ (-1)^m A e^{ikℓ}` equals `det(I - e^{ikL} S(k))`.

use crate::bonds::BondSystem;
use crate::{CMatrix, Error, Result, ScatteringModel, C64};

/// Default limit on the number of cycles and of pseudo-orbits.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Bonds in traversal order, lowest index first.
    pub bonds: Vec<usize>,
}

impl Cycle {
    /// `(row, col)` entries of `S` whose product is `A_γ`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.bonds.len();
        (0..n).map(move |i| (self.bonds[(i + 1) % n], self.bonds[i]))
    }

    pub fn amplitude(&self, s: &CMatrix) -> C64 {
        self.transitions().map(|(r, c)| s[(r, c)]).product()
    }

    pub fn length(&self, bs: &BondSystem, lengths: &[f64]) -> f64 {
        self.bonds.iter().map(|&b| lengths[bs.bonds()[b].edge]).sum()
    }
}

/// Johnson's elementary-circuit enumeration over the bond digraph.
pub fn enumerate_simple_cycles(bs: &BondSystem, cap: usize) -> Result<Vec<Cycle>> {
    let n = bs.len();
    let mut out = Vec::new();
    for start in 0..n {
        let comp = component_of(bs, start);
        if comp.is_empty() {
            continue;
        }
        let mut state = Johnson {
            bs,
            start,
            allowed: comp,
            blocked: vec![false; n],
            blocked_by: vec![Vec::new(); n],
            stack: Vec::new(),
            out: &mut out,
            cap,
        };
        state.circuit(start)?;
    }
    Ok(out)
}

/// Nodes `≥ start` in the strongly connected component of `start` within the
/// subgraph induced by `{start, start+1, ...}`; empty if that component has no
/// cycle through `start`.
fn component_of(bs: &BondSystem, start: usize) -> Vec<bool> {
    let n = bs.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(b) = stack.pop() {
            let next: Vec<usize> = if forward {
                bs.successors(b).to_vec()
            } else {
                (start..n).filter(|&c| bs.successors(c).contains(&b)).collect()
            };
            for c in next {
                if c >= start && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    let comp: Vec<bool> = (0..n).map(|i| fwd[i] && bwd[i]).collect();
    let nontrivial = comp.iter().filter(|&&x| x).count() > 1 || bs.successors(start).contains(&start);
    if nontrivial {
        comp
    } else {
        Vec::new()
    }
}

struct Johnson<'a> {
    bs: &'a BondSystem,
    start: usize,
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: &'a mut Vec<Cycle>,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut work = vec![v];
        while let Some(u) = work.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                work.append(&mut self.blocked_by[u]);
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.bs.successors(v) {
            if !self.allowed[w] {
                continue;
            }
            if w == self.start {
                if self.out.len() >= self.cap {
                    return Err(Error::OrbitExplosion { cap: self.cap });
                }
                self.out.push(Cycle { bonds: self.stack.clone() });
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.bs.successors(v) {
                if self.allowed[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }
}

/// One irreducible pseudo-orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbitTerm {
    /// Indices into the cycle list.
    pub cycles: Vec<usize>,
    /// Number of periodic orbits `m`.
    pub m: usize,
    /// Bonds in traversal order, cycle by cycle.
    pub bonds: Vec<usize>,
    /// How many of each edge's two bonds are used; `ℓ = Σ counts_j ℓ_j`.
    pub edge_counts: Vec<u8>,
    transitions: Vec<(usize, usize)>,
}

impl PseudoOrbitTerm {
    pub fn sign(&self) -> f64 {
        if self.m.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// `A` as the product of `S` entries along every orbit.
    pub fn amplitude(&self, s: &CMatrix) -> C64 {
        self.transitions.iter().map(|&(r, c)| s[(r, c)]).product()
    }

    /// `Σ_j counts_j x_j` for per-edge data `x` (lengths or their derivatives).
    pub fn weigh<T>(&self, per_edge: &[T]) -> T
    where
        T: Copy + std::iter::Sum<T> + std::ops::Mul<f64, Output = T>,
    {
        self.edge_counts.iter().zip(per_edge).map(|(&c, &x)| x * c as f64).sum()
    }
}

/// Cycles of a bond system and all irreducible pseudo-orbits built from them.
#[derive(Debug, Clone)]
pub struct PseudoOrbits {
    pub cycles: Vec<Cycle>,
    pub terms: Vec<PseudoOrbitTerm>,
}

impl PseudoOrbits {
    pub fn new(bs: &BondSystem) -> Result<Self> {
        Self::with_cap(bs, DEFAULT_CAP)
    }

    pub fn with_cap(bs: &BondSystem, cap: usize) -> Result<Self> {
        let cycles = enumerate_simple_cycles(bs, cap)?;
        let terms = enumerate_irreducible_pseudo_orbits(bs, &cycles, cap)?;
        Ok(PseudoOrbits { cycles, terms })
    }

    /// `Σ (-1)^m A(k) e^{ikℓ}` for the given `S(k)` and edge lengths, plus the
    /// sum of term magnitudes.
    pub fn evaluate(&self, s: &CMatrix, k: C64, lengths: &[C64]) -> (C64, f64) {
        let mut sum = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for t in &self.terms {
            let term = t.amplitude(s) * (C64::i() * k * t.weigh(lengths)).exp() * t.sign();
            sum += term;
            scale += term.norm();
        }
        (sum, scale)
    }
}

/// All collections of pairwise bond-disjoint cycles, the empty one first.
pub fn enumerate_irreducible_pseudo_orbits(
    bs: &BondSystem,
    cycles: &[Cycle],
    cap: usize,
) -> Result<Vec<PseudoOrbitTerm>> {
    let words = bs.len().div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = cycles
        .iter()
        .map(|c| {
            let mut m = vec![0u64; words];
            for &b in &c.bonds {
                m[b / 64] |= 1 << (b % 64);
            }
            m
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![0u64; words];
    collect_disjoint(0, &masks, &mut used, &mut chosen, &mut |sel: &[usize]| {
        if out.len() >= cap {
            return Err(Error::OrbitExplosion { cap });
        }
        out.push(make_term(bs, cycles, sel));
        Ok(())
    })?;
    Ok(out)
}

fn collect_disjoint(
    from: usize,
    masks: &[Vec<u64>],
    used: &mut [u64],
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    emit(chosen)?;
    for i in from..masks.len() {
        if masks[i].iter().zip(used.iter()).any(|(a, b)| a & b != 0) {
            continue;
        }
        for (u, m) in used.iter_mut().zip(&masks[i]) {
            *u |= m;
        }
        chosen.push(i);
        collect_disjoint(i + 1, masks, used, chosen, emit)?;
        chosen.pop();
        for (u, m) in used.iter_mut().zip(&masks[i]) {
            *u &= !m;
        }
    }
    Ok(())
}

fn make_term(bs: &BondSystem, cycles: &[Cycle], sel: &[usize]) -> PseudoOrbitTerm {
    let mut edge_counts = vec![0u8; bs.edge_count()];
    let mut bonds = Vec::new();
    let mut transitions = Vec::new();
    for &ci in sel {
        let c = &cycles[ci];
        for &b in &c.bonds {
            edge_counts[bs.bonds()[b].edge] += 1;
        }
        bonds.extend_from_slice(&c.bonds);
        transitions.extend(c.transitions());
    }
    PseudoOrbitTerm { cycles: sel.to_vec(), m: sel.len(), bonds, edge_counts, transitions }
}

/// Pseudo-orbit form of the resonance condition at `k` for the model's lengths.
pub fn secular_po(model: &ScatteringModel, orbits: &PseudoOrbits, k: C64) -> Result<C64> {
    let s = model.s_matrix(k)?;
    let lengths: Vec<C64> = model.lengths().into_iter().map(|l| C64::new(l, 0.0)).collect();
    Ok(orbits.evaluate(&s, k, &lengths).0)
}

/// `m=<int> bonds=<b1,b2,...> length=<c1*l1+...>` for one term.
pub fn format_term(bs: &BondSystem, term: &PseudoOrbitTerm) -> String {
    let bonds: Vec<String> = term.bonds.iter().map(|&b| bs.name(b)).collect();
    let length: Vec<String> =
        term.edge_counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, c)| format!("{c}*l{}", j + 1)).collect();
    let length = if length.is_empty() { "0".to_string() } else { length.join("+") };
    format!("m={} bonds={} length={}", term.m, bonds.join(","), length)
}

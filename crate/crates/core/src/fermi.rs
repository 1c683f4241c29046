//! Taylor data of resonance trajectories under edge-length perturbation.
//!
//! A resonance condition `F(k, t) = Σ (-1)^m A(k) e^{ikℓ(t)}` with lengths
//! `ℓ(t)` quadratic in `t` determines `k(t)` near an embedded eigenvalue
//! `k₀`. [`fermi_expansion`] returns `k̇` and `k̈` at `t = 0` from the
//! pseudo-orbit sums; [`trace_trajectory`] follows the pole numerically.

use crate::graph::EdgeLengthSchedule;
use crate::orbits::PseudoOrbits;
use crate::secular::Analytic;
use crate::{cauchy, Error, MetricGraph, Result, ScatteringModel, C64};

/// Eigenvalue test at `t = 0`: normalized `|F(k₀)|` and `|Im k₀|` bounds.
pub const ROOT_TOL: f64 = 1e-9;
const AMPLITUDE_NODES: usize = 64;
/// Relative radius of the circle used to differentiate term amplitudes.
const AMPLITUDE_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiExpansion {
    pub k0: C64,
    pub kdot: C64,
    pub kddot: C64,
}

impl FermiExpansion {
    /// Second-order Taylor prediction `k₀ + t k̇ + t² k̈ / 2`.
    pub fn predict(&self, t: f64) -> C64 {
        self.k0 + self.kdot * t + self.kddot * (0.5 * t * t)
    }
}

/// Output of the closed forms valid for real `k`-independent amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryData {
    pub kdot: f64,
    pub kddot_re: f64,
    pub kddot_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub k: C64,
    pub residual: f64,
}

/// Per-term data at `k₀`: sign, amplitude and its first two derivatives,
/// and the orbit length with its `t` derivatives.
#[derive(Debug, Clone, Copy)]
struct TermData {
    sign: f64,
    a: C64,
    a1: C64,
    a2: C64,
    l: f64,
    ldot: f64,
    lddot: f64,
}

/// A graph, its length schedule and pseudo-orbits, ready for Fermi data.
pub struct FermiProblem {
    model: ScatteringModel,
    orbits: PseudoOrbits,
    schedule: EdgeLengthSchedule,
}

impl FermiProblem {
    /// Uses the schedule's lengths at `t = 0` in place of the graph's.
    pub fn new(g: &MetricGraph, schedule: &EdgeLengthSchedule) -> Result<Self> {
        schedule.validate(g, 0.0, 0.0)?;
        let model = ScatteringModel::new(g.with_lengths(&schedule.lengths_at(0.0))?)?;
        let orbits = PseudoOrbits::new(model.bonds())?;
        Ok(FermiProblem { model, orbits, schedule: schedule.clone() })
    }

    pub fn model(&self) -> &ScatteringModel {
        &self.model
    }

    pub fn orbits(&self) -> &PseudoOrbits {
        &self.orbits
    }

    fn terms(&self, k0: C64) -> Result<Vec<TermData>> {
        let lengths = self.schedule.lengths_at(0.0);
        let rates = self.schedule.rates();
        let accels = self.schedule.accels();
        let radius = AMPLITUDE_RADIUS * k0.norm().max(1.0);
        let s_samples = cauchy::circle_samples(k0, radius, AMPLITUDE_NODES, |k| self.model.s_matrix(k))?;
        let s0 = self.model.s_matrix(k0)?;
        Ok(self
            .orbits
            .terms
            .iter()
            .map(|t| {
                let amps: Vec<C64> = s_samples.iter().map(|s| t.amplitude(s)).collect();
                let d = cauchy::derivatives_from_samples(&amps, radius, 2);
                TermData {
                    sign: t.sign(),
                    a: t.amplitude(&s0),
                    a1: d[1],
                    a2: d[2],
                    l: t.weigh(&lengths),
                    ldot: t.weigh(&rates),
                    lddot: t.weigh(&accels),
                }
            })
            .collect())
    }

    fn checked_terms(&self, k0: C64) -> Result<Vec<TermData>> {
        if k0.im.abs() >= ROOT_TOL {
            return Err(Error::NotEmbedded { k: k0 });
        }
        let terms = self.terms(k0)?;
        let (sum, scale) = terms.iter().fold((C64::new(0.0, 0.0), 0.0), |(s, m), t| {
            let v = t.a * t.sign * (C64::i() * k0 * t.l).exp();
            (s + v, m + v.norm())
        });
        let residual = if scale > 0.0 { sum.norm() / scale } else { sum.norm() };
        if residual >= ROOT_TOL {
            return Err(Error::NotARoot { k: k0, residual });
        }
        Ok(terms)
    }

    /// `Σ (ℓA - iA') (-1)^m e^{ikℓ}`, shared by both orders.
    fn leading(&self, k0: C64, terms: &[TermData]) -> Result<C64> {
        let mut sum = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for t in terms {
            let v = (t.a * t.l - C64::i() * t.a1) * t.sign * (C64::i() * k0 * t.l).exp();
            sum += v;
            scale += v.norm();
        }
        if sum.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateCoefficient { k: k0 });
        }
        Ok(sum)
    }

    pub fn kdot(&self, k0: C64) -> Result<C64> {
        let terms = self.checked_terms(k0)?;
        let lead = self.leading(k0, &terms)?;
        Ok(kdot_from(k0, &terms, lead))
    }

    pub fn kddot(&self, k0: C64, kdot: C64) -> Result<C64> {
        let terms = self.checked_terms(k0)?;
        let lead = self.leading(k0, &terms)?;
        Ok(kddot_from(k0, kdot, &terms, lead))
    }

    pub fn expansion(&self, k0: C64) -> Result<FermiExpansion> {
        let terms = self.checked_terms(k0)?;
        let lead = self.leading(k0, &terms)?;
        let kdot = kdot_from(k0, &terms, lead);
        let kddot = kddot_from(k0, kdot, &terms, lead);
        Ok(FermiExpansion { k0, kdot, kddot })
    }

    /// Closed forms for real, `k`-independent amplitudes.
    pub fn corollary(&self, k0: f64) -> Result<CorollaryData> {
        let kc = C64::new(k0, 0.0);
        let terms = self.checked_terms(kc)?;
        for t in &terms {
            if t.a1.norm() >= 1e-10 {
                return Err(Error::CorollaryInapplicable(format!("amplitude depends on k (|A'| = {:e})", t.a1.norm())));
            }
            if t.a.im.abs() >= 1e-12 {
                return Err(Error::CorollaryInapplicable(format!("amplitude is not real (Im A = {:e})", t.a.im)));
            }
        }
        let k = k0;
        let sum = |f: &dyn Fn(&TermData, f64, f64) -> f64| -> f64 {
            terms.iter().map(|t| f(t, (k * t.l).cos(), (k * t.l).sin()) * t.sign * t.a.re).sum()
        };
        let c = sum(&|t, cos, _| t.l * cos);
        let s = sum(&|t, _, sin| t.l * sin);
        if c.abs() <= 1e-12 * sum(&|t, _, _| t.l).abs().max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateCoefficient { k: kc });
        }
        let kdot = -k * sum(&|t, cos, _| t.ldot * cos) / c;
        let d = c * c + s * s;
        let p1 = 2.0 * kdot * sum(&|t, cos, sin| k * t.ldot * t.l * cos + t.ldot * sin)
            + kdot * kdot * sum(&|t, cos, _| t.l * t.l * cos)
            + k * sum(&|t, cos, sin| k * t.ldot * t.ldot * cos + t.lddot * sin);
        let p2 = 2.0 * kdot * sum(&|t, cos, sin| -k * t.ldot * t.l * sin + t.ldot * cos)
            - kdot * kdot * sum(&|t, _, sin| t.l * t.l * sin)
            + k * sum(&|t, cos, sin| t.lddot * cos - k * t.ldot * t.ldot * sin);
        Ok(CorollaryData { kdot, kddot_re: -s / d * p1 - c / d * p2, kddot_im: -c / d * p1 + s / d * p2 })
    }

    /// Resonance condition at `(k, t)` in cleared determinant form.
    pub fn condition(&self, k: C64, t: C64) -> Result<(C64, f64)> {
        self.model.cleared_with_lengths(k, &self.schedule.lengths_at_complex(t))
    }

    fn residual(&self, k: C64, t: f64) -> Result<f64> {
        let (v, s) = self.condition(k, C64::new(t, 0.0))?;
        Ok(if s > 0.0 { v.norm() / s } else { v.norm() })
    }

    /// `dk/dt = -F_t / F_k` at a point on the trajectory.
    fn slope(&self, k: C64, t: f64) -> Result<C64> {
        let tc = C64::new(t, 0.0);
        let fk = cauchy::derivative(|z| self.condition(z, tc).map(|v| v.0), k)?;
        let ft = cauchy::derivatives(|z| self.condition(k, z).map(|v| v.0), tc, 1e-4, 32, 1)?[1];
        Ok(-ft / fk)
    }

    fn correct(&self, guess: C64, t: f64, max_shift: f64) -> Option<(C64, f64)> {
        let tc = C64::new(t, 0.0);
        let f = TimeSlice { problem: self, t: tc };
        let mut k = guess;
        for _ in 0..crate::roots::MAX_NEWTON_STEPS {
            let v = f.eval(k).ok()?;
            if v.norm() == 0.0 {
                break;
            }
            let d = cauchy::derivative(|z| f.eval(z), k).ok()?;
            let step = v / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            k -= step;
            if (k - guess).norm() > max_shift {
                return None;
            }
            if step.norm() <= 1e-14 * k.norm().max(1.0) {
                break;
            }
        }
        let residual = self.residual(k, t).ok()?;
        (residual <= TRACE_TOL).then_some((k, residual))
    }

    /// Follows the root through `steps + 1` equispaced parameters on
    /// `[t_min, t_max]`, continuing outward from `(t = 0, k₀)`.
    pub fn trace(&self, k0: C64, t_min: f64, t_max: f64, steps: usize) -> Result<Vec<TrajectoryPoint>> {
        if !t_min.is_finite() || !t_max.is_finite() || t_min > t_max {
            return Err(Error::InvalidSchedule(format!("t range [{t_min}, {t_max}]")));
        }
        self.schedule.validate(self.model.graph(), t_min.min(0.0), t_max.max(0.0))?;
        let k0 = match self.correct(k0, 0.0, 1e-6 * k0.norm().max(1.0)) {
            Some((k, _)) => k,
            None => return Err(Error::NotARoot { k: k0, residual: self.residual(k0, 0.0)? }),
        };
        let ts: Vec<f64> = if steps == 0 || t_max == t_min {
            vec![t_min]
        } else {
            (0..=steps).map(|i| t_min + (t_max - t_min) * i as f64 / steps as f64).collect()
        };
        let forward: Vec<f64> = ts.iter().copied().filter(|&t| t >= 0.0).collect();
        let backward: Vec<f64> = ts.iter().copied().filter(|&t| t < 0.0).rev().collect();
        let (fw, bw) = crate::par::join(
            crate::Parallelism::default(),
            || self.follow(k0, &forward),
            || self.follow(k0, &backward),
        );
        let mut out = bw?;
        out.reverse();
        out.extend(fw?);
        Ok(out)
    }

    fn follow(&self, k0: C64, targets: &[f64]) -> Result<Vec<TrajectoryPoint>> {
        let mut out = Vec::with_capacity(targets.len());
        let (mut t, mut k) = (0.0, k0);
        for &target in targets {
            let mut h = target - t;
            while t != target {
                if h.abs() < MIN_STEP && (target - t).abs() >= MIN_STEP {
                    return Err(Error::StepUnderflow { t, min_step: MIN_STEP });
                }
                let tn = if (target - t).abs() <= h.abs() { target } else { t + h };
                let pred = k + self.slope(k, t)? * (tn - t);
                let max_shift = (MAX_CORRECTION * (1.0 + (pred - k).norm())).min(1.0);
                match self.correct(pred, tn, max_shift) {
                    Some((kn, _)) => {
                        t = tn;
                        k = kn;
                        h *= 1.5;
                    }
                    None => h *= 0.5,
                }
            }
            out.push(TrajectoryPoint { t, k, residual: self.residual(k, t)? });
        }
        Ok(out)
    }
}

const TRACE_TOL: f64 = 1e-10;
const MIN_STEP: f64 = 1e-6;
const MAX_CORRECTION: f64 = 0.1;

struct TimeSlice<'a> {
    problem: &'a FermiProblem,
    t: C64,
}

impl Analytic for TimeSlice<'_> {
    fn eval_scaled(&self, k: C64) -> Result<(C64, f64)> {
        self.problem.condition(k, self.t)
    }
}

fn kdot_from(k0: C64, terms: &[TermData], lead: C64) -> C64 {
    let num: C64 = terms.iter().map(|t| t.a * t.ldot * t.sign * (C64::i() * k0 * t.l).exp()).sum();
    -k0 * num / lead
}

fn kddot_from(k: C64, kdot: C64, terms: &[TermData], lead: C64) -> C64 {
    let i = C64::i();
    let mut mixed = C64::new(0.0, 0.0);
    let mut quad = C64::new(0.0, 0.0);
    let mut source = C64::new(0.0, 0.0);
    for t in terms {
        let e = (i * k * t.l).exp() * t.sign;
        mixed += (i * k * t.l * t.ldot * t.a + t.ldot * t.a + k * t.ldot * t.a1) * e;
        quad += (2.0 * t.l * t.a1 - i * t.a2 + i * t.l * t.l * t.a) * e;
        source += (t.lddot + i * k * t.ldot * t.ldot) * t.a * e;
    }
    -(2.0 * kdot * mixed + kdot * kdot * quad + k * source) / lead
}

pub fn kdot(g: &MetricGraph, schedule: &EdgeLengthSchedule, k0: C64) -> Result<C64> {
    FermiProblem::new(g, schedule)?.kdot(k0)
}

pub fn kddot(g: &MetricGraph, schedule: &EdgeLengthSchedule, k0: C64, kdot: C64) -> Result<C64> {
    FermiProblem::new(g, schedule)?.kddot(k0, kdot)
}

pub fn fermi_expansion(g: &MetricGraph, schedule: &EdgeLengthSchedule, k0: C64) -> Result<FermiExpansion> {
    FermiProblem::new(g, schedule)?.expansion(k0)
}

pub fn fermi_corollary(g: &MetricGraph, schedule: &EdgeLengthSchedule, k0: f64) -> Result<CorollaryData> {
    FermiProblem::new(g, schedule)?.corollary(k0)
}

pub fn trace_trajectory(
    g: &MetricGraph,
    schedule: &EdgeLengthSchedule,
    k0: C64,
    t_range: (f64, f64),
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    FermiProblem::new(g, schedule)?.trace(k0, t_range.0, t_range.1, steps)
}

//! Zeros of analytic functions in rectangles of the complex plane.
//!
//! Zeros are counted with the argument principle on the rectangle boundary,
//! cells are quadrisected until each holds a single zero, and each zero is
//! polished by Newton's method with a Cauchy-circle derivative.

use crate::secular::Analytic;
use crate::{cauchy, par, Error, Parallelism, Result, C64};
use std::f64::consts::PI;

pub const REAL_AXIS_TOL: f64 = 1e-9;
pub const DEDUP_DISTANCE: f64 = 1e-7;
pub const MAX_NEWTON_STEPS: usize = 100;

/// Largest phase change accepted between neighbouring boundary samples.
const MAX_PHASE_STEP: f64 = 0.5;
/// Boundary samples with a normalized value below this count as zeros on the contour.
const BOUNDARY_ZERO: f64 = 1e-13;
/// Off-centre split fractions, tried in order when a split line hits a zero.
const SPLITS: [f64; 6] = [0.4873, 0.4519, 0.5317, 0.4131, 0.5683, 0.3877];
const DIVERGENCE_RADIUS: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchRegion {
    /// Upper edge used by [`SearchRegion::below_axis`]; slightly above the
    /// real axis so embedded eigenvalues are enclosed.
    pub const DEFAULT_IM_MAX: f64 = 0.05;

    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidRegion(format!("[{re_min}, {re_max}] x [{im_min}, {im_max}]")));
        }
        Ok(SearchRegion { re_min, re_max, im_min, im_max })
    }

    pub fn below_axis(re_min: f64, re_max: f64, im_min: f64) -> Result<Self> {
        Self::new(re_min, re_max, im_min, Self::DEFAULT_IM_MAX)
    }

    pub fn contains(&self, k: C64) -> bool {
        k.re >= self.re_min && k.re <= self.re_max && k.im >= self.im_min && k.im <= self.im_max
    }

    fn rect(&self) -> Rect {
        Rect { x0: self.re_min, x1: self.re_max, y0: self.im_min, y1: self.im_max }
    }
}

/// A located zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub k: C64,
    /// `|f(k)|` relative to the function's magnitude scale.
    pub residual: f64,
    /// Multiplicity estimate from the winding number of the isolating cell.
    pub winding: u32,
    /// The zero may come from the clearing factor rather than the determinant.
    pub suspect: bool,
    /// `|Im k| < 1e-9`: an eigenvalue on the real axis.
    pub real_axis: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub parallelism: Parallelism,
    /// Samples per rectangle side before adaptive refinement.
    pub side_samples: usize,
    pub max_nudges: usize,
    /// Cells smaller than this are not split further.
    pub min_cell: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { parallelism: Parallelism::default(), side_samples: 64, max_nudges: 8, min_cell: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn center(&self) -> C64 {
        C64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains_with_margin(&self, k: C64) -> bool {
        let m = 1e-9 * self.diameter() + 1e-13 * k.norm();
        k.re >= self.x0 - m && k.re <= self.x1 + m && k.im >= self.y0 - m && k.im <= self.y1 + m
    }

    fn quarters(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let ym = self.y0 + fy * (self.y1 - self.y0);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }

    fn nudged(&self, attempt: usize) -> Rect {
        let d = 1e-3 * (self.x1 - self.x0).min(self.y1 - self.y0) * attempt as f64;
        Rect { x0: self.x0 - 0.73 * d, x1: self.x1 + 1.09 * d, y0: self.y0 - 0.91 * d, y1: self.y1 + 0.57 * d }
    }
}

/// Winding number of `f` around the rectangle, or `None` when the boundary
/// passes through (or numerically touches) a zero or a singularity.
fn winding<F: Analytic + ?Sized>(f: &F, r: &Rect, samples: usize) -> Option<i64> {
    let corners = [C64::new(r.x0, r.y0), C64::new(r.x1, r.y0), C64::new(r.x1, r.y1), C64::new(r.x0, r.y1)];
    let mut total = 0.0;
    for s in 0..4 {
        total += side_phase(f, corners[s], corners[(s + 1) % 4], samples)?;
    }
    let w = total / (2.0 * PI);
    if (w - w.round()).abs() > 0.25 {
        return None;
    }
    Some(w.round() as i64)
}

fn sample<F: Analytic + ?Sized>(f: &F, z: C64) -> Option<C64> {
    let (v, s) = f.eval_scaled(z).ok()?;
    let rel = if s > 0.0 { v.norm() / s } else { v.norm() };
    if !v.re.is_finite() || !v.im.is_finite() || rel < BOUNDARY_ZERO {
        return None;
    }
    Some(v)
}

fn side_phase<F: Analytic + ?Sized>(f: &F, a: C64, b: C64, n: usize) -> Option<f64> {
    let min_dt = 1e-12 / (b - a).norm().max(1e-300) * (a.norm() + 1.0);
    let at = |t: f64| a + (b - a) * t;
    let mut prev = sample(f, a)?;
    let mut total = 0.0;
    for j in 0..n {
        let (t0, t1) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
        let next = sample(f, at(t1))?;
        total += segment_phase(f, &at, t0, prev, t1, next, min_dt.max(1e-14))?;
        prev = next;
    }
    Some(total)
}

fn segment_phase<F, P>(f: &F, at: &P, t0: f64, v0: C64, t1: f64, v1: C64, min_dt: f64) -> Option<f64>
where
    F: Analytic + ?Sized,
    P: Fn(f64) -> C64,
{
    let step = (v1 / v0).arg();
    if step.abs() <= MAX_PHASE_STEP {
        return Some(step);
    }
    if t1 - t0 < min_dt {
        return None;
    }
    let tm = 0.5 * (t0 + t1);
    let vm = sample(f, at(tm))?;
    Some(segment_phase(f, at, t0, v0, tm, vm, min_dt)? + segment_phase(f, at, tm, vm, t1, v1, min_dt)?)
}

/// Number of zeros (with multiplicity) inside the region. The region is
/// nudged outward when its boundary passes through a zero.
pub fn count_zeros<F: Analytic + ?Sized>(f: &F, region: &SearchRegion) -> Result<u32> {
    let opts = RootOptions::default();
    let (_, n) = settle_region(f, region.rect(), &opts)?;
    Ok(n as u32)
}

fn settle_region<F: Analytic + ?Sized>(f: &F, r: Rect, opts: &RootOptions) -> Result<(Rect, i64)> {
    for attempt in 0..=opts.max_nudges {
        let rect = if attempt == 0 { r } else { r.nudged(attempt) };
        if let Some(n) = winding(f, &rect, opts.side_samples) {
            if n < 0 {
                return Err(Error::ContourUnresolved { winding: n as f64 });
            }
            return Ok((rect, n));
        }
    }
    Err(Error::BoundaryZero { attempts: opts.max_nudges })
}

/// All zeros of `f` in the region, sorted by real part.
pub fn find_roots<F: Analytic + ?Sized>(f: &F, region: &SearchRegion, abs_tol: f64) -> Result<Vec<Resonance>> {
    find_roots_with(f, region, abs_tol, &RootOptions::default())
}

pub fn find_roots_with<F: Analytic + ?Sized>(
    f: &F,
    region: &SearchRegion,
    abs_tol: f64,
    opts: &RootOptions,
) -> Result<Vec<Resonance>> {
    let (rect, total) = settle_region(f, region.rect(), opts)?;
    let mut found = resolve(f, rect, total, abs_tol, opts)?;
    found.sort_by(|a, b| a.k.re.total_cmp(&b.k.re).then(a.k.im.total_cmp(&b.k.im)));
    let mut out: Vec<Resonance> = Vec::with_capacity(found.len());
    for r in found {
        if !out.iter().any(|o| (o.k - r.k).norm() < DEDUP_DISTANCE) {
            out.push(r);
        }
    }
    let sum: i64 = out.iter().map(|r| r.winding as i64).sum();
    if sum != total {
        return Err(Error::CountMismatch { expected: total, found: sum });
    }
    Ok(out)
}

fn resolve<F: Analytic + ?Sized>(f: &F, r: Rect, count: i64, tol: f64, opts: &RootOptions) -> Result<Vec<Resonance>> {
    if count <= 0 {
        return Ok(Vec::new());
    }
    let small = r.diameter() < opts.min_cell;
    if count == 1 || small {
        match newton(f, r.center(), tol) {
            Ok((k, residual)) if r.contains_with_margin(k) => return Ok(vec![resonance(f, k, residual, count)]),
            _ if small => {
                let k = r.center();
                let residual = f.residual(k)?;
                return Ok(vec![resonance(f, k, residual, count)]);
            }
            _ => {}
        }
    }
    if count > 1 {
        if let Ok((k, residual)) = newton_multiple(f, r.center(), tol, count as f64) {
            let h = (1e-6 * r.diameter()).max(1e-9);
            let probe = Rect { x0: k.re - h, x1: k.re + 1.1 * h, y0: k.im - 0.9 * h, y1: k.im + h };
            if r.contains_with_margin(k) && winding(f, &probe, opts.side_samples) == Some(count) {
                return Ok(vec![resonance(f, k, residual, count)]);
            }
        }
    }
    let mut last_mismatch = None;
    for &fx in &SPLITS {
        let fy = 1.0 - fx;
        let cells = r.quarters(fx, fy);
        let counts = par::map(opts.parallelism, &cells, |c| winding(f, c, opts.side_samples));
        if counts.iter().any(Option::is_none) {
            continue;
        }
        let counts: Vec<i64> = counts.into_iter().map(Option::unwrap).collect();
        let sum: i64 = counts.iter().sum();
        if sum != count || counts.iter().any(|&c| c < 0) {
            last_mismatch = Some(sum);
            continue;
        }
        let jobs: Vec<(Rect, i64)> = cells.into_iter().zip(counts).filter(|&(_, n)| n > 0).collect();
        let parts = par::map(opts.parallelism, &jobs, |&(c, n)| resolve(f, c, n, tol, opts));
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        return Ok(out);
    }
    match last_mismatch {
        Some(found) => Err(Error::CountMismatch { expected: count, found }),
        None => Err(Error::BoundaryZero { attempts: SPLITS.len() }),
    }
}

fn resonance<F: Analytic + ?Sized>(f: &F, k: C64, residual: f64, winding: i64) -> Resonance {
    Resonance { k, residual, winding: winding as u32, suspect: f.is_suspect(k), real_axis: k.im.abs() < REAL_AXIS_TOL }
}

/// Newton's method from `k0` until the normalized residual is at most
/// `abs_tol` and the step has stalled.
pub fn newton_refine<F: Analytic + ?Sized>(f: &F, k0: C64, abs_tol: f64) -> Result<C64> {
    newton(f, k0, abs_tol).map(|(k, _)| k)
}

fn newton<F: Analytic + ?Sized>(f: &F, k0: C64, tol: f64) -> Result<(C64, f64)> {
    newton_multiple(f, k0, tol, 1.0)
}

/// Newton's method with the step scaled by the expected multiplicity.
fn newton_multiple<F: Analytic + ?Sized>(f: &F, k0: C64, tol: f64, multiplicity: f64) -> Result<(C64, f64)> {
    let mut k = k0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON_STEPS {
        let (v, s) = f.eval_scaled(k)?;
        residual = if s > 0.0 { v.norm() / s } else { v.norm() };
        if v.norm() == 0.0 {
            return Ok((k, 0.0));
        }
        let d = cauchy::derivative(|z| f.eval(z), k)?;
        let step = v / d * multiplicity;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(Error::Divergence { start: k0 });
        }
        k -= step;
        if (k - k0).norm() > DIVERGENCE_RADIUS * (1.0 + k0.norm()) {
            return Err(Error::Divergence { start: k0 });
        }
        if step.norm() <= 4.0 * f64::EPSILON * k.norm().max(1.0)
            || (residual <= tol && step.norm() <= 1e-12 * k.norm().max(1.0))
        {
            residual = f.residual(k)?;
            break;
        }
    }
    if residual <= tol {
        Ok((k, residual))
    } else {
        Err(Error::NonConvergence { start: k0, residual })
    }
}

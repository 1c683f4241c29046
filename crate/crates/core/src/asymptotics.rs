//! High-energy behaviour of resonances: windowed scans paired against a
//! reference spectrum, and log-log fits of the decay of their differences.

use crate::roots::{find_roots_with, Resonance, RootOptions, SearchRegion};
use crate::secular::GraphSecular;
use crate::{par, Error, MetricGraph, Parallelism, Result, ScatteringModel, VertexCoupling, C64};
use std::f64::consts::PI;

/// Minimum number of usable windows for a fit.
pub const MIN_FIT_WINDOWS: usize = 6;
/// Fraction of the window width added on both sides when scanning the reference.
const REFERENCE_PAD: f64 = 0.4;

/// What the resonances are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMode {
    /// δ couplings replaced by the standard one.
    Standard,
    /// δ′ₛ couplings replaced by Neumann.
    Neumann,
    /// Both replacements.
    Mixed,
}

impl std::str::FromStr for ReferenceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "delta" | "standard" => Ok(ReferenceMode::Standard),
            "deltaprime" | "delta_prime_s" | "neumann" => Ok(ReferenceMode::Neumann),
            "mixed" => Ok(ReferenceMode::Mixed),
            other => Err(format!("unknown mode `{other}` (delta|deltaprime|mixed)")),
        }
    }
}

impl ReferenceMode {
    /// Depth below the real axis that holds the resonances of interest.
    pub fn default_im_depth(self) -> f64 {
        match self {
            ReferenceMode::Neumann => 1.0,
            ReferenceMode::Standard | ReferenceMode::Mixed => 2.0,
        }
    }

    fn replace(self, c: &VertexCoupling) -> VertexCoupling {
        match (self, c) {
            (ReferenceMode::Standard | ReferenceMode::Mixed, VertexCoupling::Delta(_)) => VertexCoupling::Standard,
            (ReferenceMode::Neumann | ReferenceMode::Mixed, VertexCoupling::DeltaPrimeS(_)) => VertexCoupling::Neumann,
            _ => c.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub n: usize,
    pub re_min: f64,
    pub re_max: f64,
}

impl Window {
    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.re_min && x <= self.re_max
    }
}

/// Windows of width `π / (2 ℓ_max)` centred at `nπ / ℓ_max`.
pub fn windows(g: &MetricGraph, n_min: usize, n_max: usize) -> Vec<Window> {
    let lmax = g.lengths().into_iter().fold(0.0, f64::max);
    let half = PI / (4.0 * lmax);
    (n_min.max(1)..=n_max)
        .map(|n| {
            let c = n as f64 * PI / lmax;
            Window { n, re_min: c - half, re_max: c + half }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair {
    pub resonance: usize,
    pub reference: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowScan {
    pub window: Window,
    pub resonances: Vec<Resonance>,
    pub reference: Vec<C64>,
    pub pairs: Vec<Pair>,
    /// Resonances left without a partner.
    pub unmatched: Vec<usize>,
}

fn usable(r: &Resonance) -> bool {
    !r.real_axis && !r.suspect
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 { xs[n / 2] } else { 0.5 * (xs[n / 2 - 1] + xs[n / 2]) })
}

impl WindowScan {
    pub fn pair_distances(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.distance).collect()
    }

    fn usable_pairs(&self) -> impl Iterator<Item = &Pair> {
        self.pairs.iter().filter(|p| usable(&self.resonances[p.resonance]))
    }

    pub fn median_imag(&self) -> Option<f64> {
        median(self.resonances.iter().filter(|r| usable(r)).map(|r| r.k.im.abs()).collect())
    }

    pub fn median_pair_distance(&self) -> Option<f64> {
        median(self.usable_pairs().map(|p| p.distance).collect())
    }

    pub fn median_real_offset(&self) -> Option<f64> {
        median(
            self.usable_pairs()
                .map(|p| (self.resonances[p.resonance].k.re - self.reference[p.reference].re).abs())
                .collect(),
        )
    }

    pub fn median_re(&self) -> Option<f64> {
        median(self.resonances.iter().filter(|r| usable(r)).map(|r| r.k.re).collect())
    }

    pub fn quantity(&self, q: Quantity) -> Option<f64> {
        match q {
            Quantity::Imag => self.median_imag(),
            Quantity::PairDistance => self.median_pair_distance(),
            Quantity::RealOffset => self.median_real_offset(),
        }
    }
}

/// Greedy nearest-first injective pairing.
pub fn pair_nearest(resonances: &[C64], reference: &[C64]) -> (Vec<Pair>, Vec<usize>) {
    let mut all: Vec<Pair> = resonances
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            reference.iter().enumerate().map(move |(j, q)| Pair {
                resonance: i,
                reference: j,
                distance: (r - q).norm(),
            })
        })
        .collect();
    all.sort_by(|a, b| {
        a.distance.total_cmp(&b.distance).then(a.resonance.cmp(&b.resonance)).then(a.reference.cmp(&b.reference))
    });
    let mut used_r = vec![false; resonances.len()];
    let mut used_q = vec![false; reference.len()];
    let mut pairs = Vec::new();
    for p in all {
        if !used_r[p.resonance] && !used_q[p.reference] {
            used_r[p.resonance] = true;
            used_q[p.reference] = true;
            pairs.push(p);
        }
    }
    pairs.sort_by_key(|p| p.resonance);
    let unmatched = (0..resonances.len()).filter(|&i| !used_r[i]).collect();
    (pairs, unmatched)
}

/// The comparison graph for a mode.
pub fn reference_graph(g: &MetricGraph, mode: ReferenceMode) -> Result<MetricGraph> {
    g.map_couplings(|c| mode.replace(c))
}

/// Reference values with real part in `[re_min, re_max]`, sorted by real part.
/// A graph whose vertices are all Neumann decouples into edges with
/// eigenvalues `nπ/ℓⱼ`, listed once per edge; otherwise the reference graph
/// is scanned down to `-im_depth`.
pub fn reference_spectrum(
    g: &MetricGraph,
    mode: ReferenceMode,
    re_min: f64,
    re_max: f64,
    im_depth: f64,
    opts: &RootOptions,
) -> Result<Vec<C64>> {
    let rg = reference_graph(g, mode)?;
    if rg.vertices().iter().all(|v| matches!(v.coupling, VertexCoupling::Neumann)) {
        let mut out: Vec<C64> = rg
            .lengths()
            .into_iter()
            .flat_map(|l| {
                let first = (re_min * l / PI).ceil().max(0.0) as usize;
                let last = (re_max * l / PI).floor().max(-1.0);
                (first..).take_while(move |&n| n as f64 <= last).map(move |n| C64::new(n as f64 * PI / l, 0.0))
            })
            .collect();
        out.sort_by(|a, b| a.re.total_cmp(&b.re));
        return Ok(out);
    }
    if rg.lead_count() == 0 {
        return Err(Error::InvalidRegion("reference graph without leads".into()));
    }
    let model = ScatteringModel::new(rg)?;
    let region = SearchRegion::new(re_min, re_max, -im_depth, SearchRegion::DEFAULT_IM_MAX)?;
    let f = GraphSecular::cleared(&model);
    Ok(find_roots_with(&f, &region, 1e-10, opts)?.into_iter().filter(|r| !r.suspect).map(|r| r.k).collect())
}

/// Scans each window for resonances and pairs them with the reference.
pub fn scan_windows(
    g: &MetricGraph,
    windows: &[Window],
    mode: ReferenceMode,
    im_depth: f64,
    parallelism: Parallelism,
) -> Result<Vec<WindowScan>> {
    let model = ScatteringModel::new(g.clone())?;
    let f = GraphSecular::cleared(&model);
    // windows run in parallel; each root search stays sequential
    let opts = RootOptions { parallelism: Parallelism::Sequential, ..Default::default() };
    par::map(parallelism, windows, |w| {
        let region = SearchRegion::new(w.re_min, w.re_max, -im_depth, SearchRegion::DEFAULT_IM_MAX)?;
        let resonances = find_roots_with(&f, &region, 1e-10, &opts)?;
        let pad = REFERENCE_PAD * w.width();
        let reference = reference_spectrum(g, mode, w.re_min - pad, w.re_max + pad, im_depth, &opts)?;
        let ks: Vec<C64> = resonances.iter().map(|r| r.k).collect();
        let (pairs, unmatched) = pair_nearest(&ks, &reference);
        Ok(WindowScan { window: *w, resonances, reference, pairs, unmatched })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `|Im k|`.
    Imag,
    /// Distance to the paired reference value.
    PairDistance,
    /// `|Re k - Re k_ref|` for paired values.
    RealOffset,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Imag, Quantity::PairDistance, Quantity::RealOffset];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Imag => "imag",
            Quantity::PairDistance => "pair_distance",
            Quantity::RealOffset => "real_offset",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, found: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, found: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit { slope, intercept, r2 })
}

/// Per-window `(median Re k, median quantity)` for windows that have both.
pub fn decay_points(scans: &[WindowScan], q: Quantity) -> Vec<(f64, f64)> {
    scans.iter().filter_map(|s| Some((s.median_re()?, s.quantity(q)?))).filter(|&(_, y)| y > 0.0).collect()
}

/// Log-log fit of a per-window median against `Re k`.
pub fn fit_decay(scans: &[WindowScan], q: Quantity) -> Result<DecayFit> {
    let pts = decay_points(scans, q);
    if pts.len() < MIN_FIT_WINDOWS {
        return Err(Error::InsufficientData { needed: MIN_FIT_WINDOWS, found: pts.len() });
    }
    fit_log_log(&pts)
}

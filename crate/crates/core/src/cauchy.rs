//! Derivatives of analytic functions from samples on a circle.
//!
//! `f⁽ⁿ⁾(z₀) ≈ n! / (N rⁿ) Σⱼ f(z₀ + r ωʲ) ω^{-nj}` with `ω = e^{2πi/N}`; the
//! error is of order `r^N` for entire functions and `ε |f| / rⁿ` from
//! rounding.

use crate::{Result, C64};

/// Samples `f` at `nodes` equispaced points of radius `radius` around `z0`.
pub fn circle_samples<F, T>(z0: C64, radius: f64, nodes: usize, mut f: F) -> Result<Vec<T>>
where
    F: FnMut(C64) -> Result<T>,
{
    (0..nodes).map(|j| f(z0 + C64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64))).collect()
}

/// Taylor data `[f, f', f'', ...]` up to `order` from circle samples.
pub fn derivatives_from_samples(samples: &[C64], radius: f64, order: usize) -> Vec<C64> {
    let n = samples.len();
    let mut factorial = 1.0;
    (0..=order)
        .map(|p| {
            if p > 0 {
                factorial *= p as f64;
            }
            let sum: C64 = samples
                .iter()
                .enumerate()
                .map(|(j, &v)| v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (p * j) as f64 / n as f64))
                .sum();
            sum * factorial / (n as f64 * radius.powi(p as i32))
        })
        .collect()
}

/// `[f(z0), f'(z0), ..., f^(order)(z0)]`.
pub fn derivatives<F>(f: F, z0: C64, radius: f64, nodes: usize, order: usize) -> Result<Vec<C64>>
where
    F: FnMut(C64) -> Result<C64>,
{
    let samples = circle_samples(z0, radius, nodes, f)?;
    Ok(derivatives_from_samples(&samples, radius, order))
}

/// First derivative with the root finder's defaults: radius
/// `max(1e-4, 1e-6 |z|)`, 32 nodes.
pub fn derivative<F>(f: F, z0: C64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let r = (1e-6 * z0.norm()).max(1e-4);
    Ok(derivatives(f, z0, r, 32, 1)?[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let z0 = C64::new(0.3, -0.7);
        let d = derivatives(|z| Ok((C64::i() * 2.0 * z).exp()), z0, 1e-3, 32, 3).unwrap();
        let e = (C64::i() * 2.0 * z0).exp();
        let mut want = e;
        for (p, got) in d.iter().enumerate() {
            assert!((got - want).norm() < 1e-8 * 8f64.powi(p as i32), "order {p}: {got} vs {want}");
            want *= C64::i() * 2.0;
        }
    }

    #[test]
    fn polynomial_exact() {
        let d = derivatives(|z| Ok(z * z * z), C64::new(2.0, 1.0), 1e-2, 16, 2).unwrap();
        let z = C64::new(2.0, 1.0);
        assert!((d[1] - z * z * 3.0).norm() < 1e-10);
        assert!((d[2] - z * 6.0).norm() < 1e-7);
    }

    #[test]
    fn oscillatory_far_from_origin() {
        let z0 = C64::new(125.0, -0.01);
        let d = derivative(|z| Ok(z.sin() * z * z), z0).unwrap();
        let want = z0.cos() * z0 * z0 + z0.sin() * z0 * 2.0;
        assert!((d - want).norm() < 1e-9 * want.norm().max(1.0));
    }
}

//! Composite Gauss–Legendre quadrature for smooth oscillatory integrands.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be >= 1");
        let n = order;
        let mut nodes = vec![0.0_f64; n];
        let mut weights = vec![0.0_f64; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_a^b f on a single panel.
    pub fn panel<F: FnMut(T) -> T>(&self, a: T, b: T, f: &mut F) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + *w * f(mid + half * *x);
        }
        s * half
    }

    /// ∫_a^b f with panels no wider than `max_width`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, max_width: T, f: &mut F) -> T {
        if b == a {
            return T::zero();
        }
        let span = b - a;
        let panels = if max_width > T::zero() && max_width.is_finite() {
            (span.abs() / max_width).ceil().to_usize().unwrap_or(1).max(1)
        } else {
            1
        };
        let step = span / T::int(panels as i64);
        let mut s = T::zero();
        for k in 0..panels {
            let lo = a + step * T::int(k as i64);
            let hi = if k + 1 == panels { b } else { lo + step };
            s = s + self.panel(lo, hi, f);
        }
        s
    }

    /// Integral over `[breaks[0], breaks[last]]` with a panel boundary at every
    /// break point, so piecewise-smooth integrands stay exact.
    pub fn integrate_piecewise<F: FnMut(T) -> T>(
        &self,
        breaks: &[T],
        max_width: T,
        f: &mut F,
    ) -> Result<T> {
        if breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::TimeGrid);
        }
        let mut s = T::zero();
        for w in breaks.windows(2) {
            if w[1] < w[0] {
                return Err(Error::TimeGrid);
            }
            s = s + self.integrate(w[0], w[1], max_width, f);
        }
        Ok(s)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Sorted, deduplicated copy of `points` clipped to `[lo, hi]`, with both ends included.
pub fn breakpoints<T: Real>(lo: T, hi: T, points: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = points.into_iter().filter(|t| *t > lo && *t < hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));
    v.dedup();
    v
}

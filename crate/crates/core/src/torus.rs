//! Sampling and Fourier analysis on the maximal torus.
//!
//! The torus is the cube `[-1/2, 1/2)^r` in exponential coordinates, with
//! characters `x -> exp(2 pi i lambda(x))` for integer weights `lambda`
//! (evaluated with the plain dot product [`pair`], never the gram matrix).
//!
//! Sampling happens on the *aligned grid* `x_j = j/N - 1/2`, `0 <= j < N`
//! per axis with `N` a power of two. Two properties of this grid carry the
//! whole numerical design:
//!
//! * The dual Weyl action maps the node set onto itself exactly
//!   (`WeylGroup::apply_dual_node`), so symmetrization and Weyl-equivariance
//!   are exact permutation statements rather than interpolation.
//! * Every node coordinate, and hence every pairing `alpha(x_j)`, is an
//!   exact dyadic rational. Combined with the argument-reduced [`sinpi`],
//!   the Weyl denominator evaluates to *exactly* zero on singular nodes,
//!   so products like `f * A_delta` vanish there with no roundoff residue.
//!
//! Rectangle-rule Fourier coefficients use integer phase accumulation: the
//! phase of a character at a node is an integer multiple of `1/N`, reduced
//! exactly and looked up in a length-`N` twiddle table. The rectangle rule
//! on this grid integrates characters with all frequencies in `(-N, N)`
//! exactly (up to one rounding of the twiddle itself), which is what makes
//! band-limited tests meaningful at 1e-12 tolerances.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahan::{KahanComplexSum, KahanSum};
use crate::rootsys::{pair, RootSystem, Weight, WeylGroup};

/// The aligned sampling grid `x_j = j/N - 1/2` on `[-1/2, 1/2)^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    rank: usize,
    n: usize,
}

impl TorusGrid {
    /// `n` must be a power of two, at least 16; the total node count is
    /// capped to keep rectangle transforms tractable.
    pub fn new(rank: usize, n: usize) -> Result<Self> {
        if rank == 0 || rank > 9 {
            return Err(Error::Domain(format!("grid rank {rank} outside 1..=9")));
        }
        if !n.is_power_of_two() || n < 16 {
            return Err(Error::Domain(format!(
                "grid size {n} must be a power of two and at least 16"
            )));
        }
        let total = (n as u128).checked_pow(rank as u32);
        match total {
            Some(t) if t <= (1 << 28) => Ok(Self { rank, n }),
            _ => Err(Error::Domain(format!(
                "grid with {n}^{rank} nodes is too large"
            ))),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> usize {
        self.n.pow(self.rank as u32)
    }

    /// Volume of one grid cell, `N^-r` (the torus has volume 1).
    pub fn cell_volume(&self) -> f64 {
        1.0 / self.total() as f64
    }

    /// Multi-index of a flat node index; axis 0 is the slowest.
    pub fn node_indices(&self, flat: usize) -> Vec<i64> {
        debug_assert!(flat < self.total());
        let mut idx = vec![0i64; self.rank];
        let mut rem = flat;
        for a in (0..self.rank).rev() {
            idx[a] = (rem % self.n) as i64;
            rem /= self.n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[i64]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        let mut flat = 0usize;
        for &j in idx {
            debug_assert!((0..self.n as i64).contains(&j));
            flat = flat * self.n + j as usize;
        }
        flat
    }

    /// Node coordinates, exact dyadic rationals in `[-1/2, 1/2)`.
    pub fn node(&self, flat: usize) -> Vec<f64> {
        let half = (self.n / 2) as f64;
        let n = self.n as f64;
        self.node_indices(flat)
            .into_iter()
            .map(|j| (j as f64 - half) / n)
            .collect()
    }
}

/// Complex samples of a function on a [`TorusGrid`], row-major with axis 0
/// slowest.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: TorusGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_values(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.total() {
            return Err(Error::Domain(format!(
                "sample count {} does not match grid with {} nodes",
                values.len(),
                grid.total()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TorusGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.total()).map(|i| f(&grid.node(i))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: TorusGrid, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(grid: TorusGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.total()],
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Pointwise product, consuming neither factor.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::Domain("grid mismatch in pointwise product".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(GridFunction {
            grid: self.grid,
            values,
        })
    }
}

/// `sin(pi a)` with exact argument reduction: reduce `a` by its nearest
/// integer, so integer inputs give exactly `0.0` and half-integers exactly
/// `+-1.0`. This exactness is load-bearing for singular-node bookkeeping.
#[inline]
pub fn sinpi(a: f64) -> f64 {
    let m = a.round();
    let r = a - m;
    let s = (std::f64::consts::PI * r).sin();
    // (-1)^m
    if (m as i64) & 1 == 0 {
        s
    } else {
        -s
    }
}

/// `exp(2 pi i t)` with argument reduction to `[-1/2, 1/2]`.
#[inline]
pub fn e2pi(t: f64) -> Complex64 {
    let u = t - t.round();
    Complex64::new((TAU * u).cos(), (TAU * u).sin())
}

/// Weyl denominator in product form:
/// `A_delta(x) = prod_{alpha > 0} 2 i sin(pi alpha(x))`.
///
/// For a torus (no roots) this is the constant 1. On aligned grid nodes the
/// pairings `alpha(x)` are exact dyadics, and the value is exactly zero on
/// singular nodes.
pub fn weyl_denominator(rs: &RootSystem, x: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for alpha in rs.positive_roots() {
        acc *= Complex64::new(0.0, 2.0 * sinpi(pair(alpha, x)));
    }
    acc
}

/// Alternating orbit sum `A_nu(x) = sum_w det(w) exp(2 pi i (w nu)(x))`.
///
/// For `nu = delta` this equals [`weyl_denominator`]; the agreement of the
/// two routes is one of the standing cross-checks.
pub fn alternating_sum(wg: &WeylGroup, nu: &[i64], x: &[f64]) -> Complex64 {
    let mut acc = KahanComplexSum::new();
    for w in 0..wg.order() {
        let wnu = wg.apply(w, nu);
        let term = e2pi(pair(&wnu, x));
        acc.add(if wg.det(w) > 0 { term } else { -term });
    }
    acc.value()
}

/// Samples of the Weyl denominator on a grid.
pub fn weyl_denominator_grid(rs: &RootSystem, grid: TorusGrid) -> Result<GridFunction> {
    if grid.rank() != rs.rank() {
        return Err(Error::Domain("grid rank does not match root system".into()));
    }
    Ok(GridFunction::from_fn(grid, |x| weyl_denominator(rs, x)))
}

/// One factor of the Weyl-denominator dilation ratio:
/// `U_k(a) = sin(pi k a) / sin(pi a)`, evaluated stably by reducing `a` to
/// its nearest integer and taking the limit value
/// `(-1)^((k-1) m) * k` when the reduced argument is exactly zero.
pub fn dirichlet_ratio(k: i64, a: f64) -> f64 {
    debug_assert!(k >= 1);
    let m = a.round();
    let r = a - m;
    let sign = if ((k - 1) * (m as i64)) & 1 == 0 { 1.0 } else { -1.0 };
    let denom = sinpi(r);
    if denom == 0.0 {
        return sign * k as f64;
    }
    sign * sinpi(k as f64 * r) / denom
}

/// Dilation ratio of the full Weyl denominator,
/// `A_delta(k x) / A_delta(x) = prod_{alpha > 0} U_k(alpha(x))`,
/// finite (and real) at every point including singular ones.
pub fn denominator_ratio(rs: &RootSystem, k: i64, x: &[f64]) -> f64 {
    let mut acc = 1.0;
    for alpha in rs.positive_roots() {
        acc *= dirichlet_ratio(k, pair(alpha, x));
    }
    acc
}

/// Weyl-group symmetrization by orbit averaging on the aligned grid.
///
/// Each node orbit gets a single mean value, computed once in a fixed order
/// and anchored at the orbit's first sample so that already-symmetrized
/// input is reproduced bit for bit (symmetrize is idempotent as a map on
/// bit patterns, which downstream fixtures rely on).
pub fn symmetrize(wg: &WeylGroup, g: &GridFunction) -> Result<GridFunction> {
    let grid = g.grid();
    if grid.rank() != wg.rank() {
        return Err(Error::Domain("grid rank does not match Weyl group".into()));
    }
    let n = grid.n() as i64;
    let total = grid.total();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut done = vec![false; total];
    for flat in 0..total {
        if done[flat] {
            continue;
        }
        let node = grid.node_indices(flat);
        let orbit: BTreeSet<usize> = (0..wg.order())
            .map(|w| grid.flat_index(&wg.apply_dual_node(w, &node, n)))
            .collect();
        let ids: Vec<usize> = orbit.into_iter().collect();
        let anchor = g.values[ids[0]];
        let mut acc = KahanComplexSum::new();
        for &i in &ids {
            acc.add(g.values[i] - anchor);
        }
        let mean = anchor + acc.value() / ids.len() as f64;
        for &i in &ids {
            out[i] = mean;
            done[i] = true;
        }
    }
    GridFunction::from_values(grid, out)
}

/// Rectangle-rule mean of the samples (the quadrature for `int_T g`, since
/// the torus has volume one).
pub fn quadrature_mean(g: &GridFunction) -> Complex64 {
    let mut acc = KahanComplexSum::new();
    for v in &g.values {
        acc.add(*v);
    }
    acc.value() * g.grid.cell_volume()
}

/// Rectangle-rule value of `int_T |g(x)|^q dx`.
pub fn quadrature_abs_power(g: &GridFunction, q: f64) -> f64 {
    let mut acc = KahanSum::new();
    for v in &g.values {
        acc.add(v.norm().powf(q));
    }
    acc.value() * g.grid.cell_volume()
}

fn twiddle_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let kc = if k > n / 2 { k as i64 - n as i64 } else { k as i64 };
            e2pi(-(kc as f64) / n as f64)
        })
        .collect()
}

/// Torus Fourier coefficient
/// `F(g)(lambda) = int_T g(x) exp(-2 pi i lambda(x)) dx`
/// by the rectangle rule with exact integer phase reduction.
pub fn rectangle_transform(g: &GridFunction, lambda: &[i64]) -> Result<Complex64> {
    Ok(rectangle_transform_many(g, std::slice::from_ref(&lambda.to_vec()))?[0])
}

/// Batch version of [`rectangle_transform`]; one pass over the samples per
/// weight, sharing the twiddle table.
pub fn rectangle_transform_many(g: &GridFunction, lambdas: &[Weight]) -> Result<Vec<Complex64>> {
    let grid = g.grid();
    let rank = grid.rank();
    let n = grid.n() as i64;
    let total = grid.total();
    let tw = twiddle_table(grid.n());
    let mut out = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        if lambda.len() != rank {
            return Err(Error::Domain("weight rank does not match grid".into()));
        }
        // Phase at node j is sum_a lambda_a (j_a - N/2), tracked mod N while
        // the odometer walks the flat index. Axis `rank-1` is fastest.
        let lam_mod: Vec<i64> = lambda.iter().map(|&l| l.rem_euclid(n)).collect();
        let mut digits = vec![0i64; rank];
        let mut phase: i64 = lambda
            .iter()
            .map(|&l| (l.rem_euclid(n)) * (n / 2) % n)
            .sum::<i64>()
            .rem_euclid(n);
        // The above computes -(N/2) sum lambda_a mod N, using
        // -(N/2) == (N/2) mod N for even N.
        let mut acc = KahanComplexSum::new();
        for flat in 0..total {
            acc.add(g.values[flat] * tw[phase as usize]);
            // Advance the odometer (axis rank-1 fastest, matching row-major
            // flat order). Wrapping an axis has already contributed a full
            // period N * lambda_a == 0 mod N, so only the carry's own
            // increment is added at each level.
            let mut axis = rank;
            while axis > 0 {
                axis -= 1;
                digits[axis] += 1;
                phase = (phase + lam_mod[axis]) % n;
                if digits[axis] < n {
                    break;
                }
                digits[axis] = 0;
            }
        }
        out.push(acc.value() * grid.cell_volume());
    }
    Ok(out)
}

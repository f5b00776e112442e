//! Noncommutative Fourier coefficients and spectral norms of central
//! functions, computed on the maximal torus.
//!
//! A central function `f` has `fhat(pi_lambda) = gamma_lambda * Id`, so its
//! full operator-valued Fourier transform is the scalar family
//! `gamma_lambda = F_T(f * A_delta)(lambda + delta) / dim(lambda)`,
//! where `A_delta` is the Weyl denominator. Everything here consumes the
//! *numerator* `h = f * A_delta` directly; `h` vanishes exactly on singular
//! grid nodes, so no division by `A_delta` ever happens.
//!
//! The dual `l^{q'}` norm is computed by two fully independent routes:
//!
//! * **direct**: `( sum_lambda d_lambda^2 |gamma_lambda|^{q'} )^{1/q'}`
//!   over dominant weights with `|lambda + delta| <= cutoff`;
//! * **lattice**: a Weyl-denominator-weighted sum of `|F_T(h)|^{q'}` over
//!   *all* nonsingular lattice points of the same ball, with the closed-form
//!   prefactor [`lattice_prefactor`].
//!
//! The two routes rearrange the same quantity through the orbit bijection
//! `mu = w(lambda + delta)`, but share no code path after the transform;
//! their agreement is a standing cross-check of the whole pipeline and is
//! never to be optimized into a single implementation.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::rootsys::{RootSystem, Weight, WeylGroup};
use crate::torus::{
    alternating_sum, quadrature_abs_power, rectangle_transform_many, weyl_denominator,
    weyl_denominator_grid, GridFunction, TorusGrid,
};

/// One Fourier coefficient of a central function.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralCoefficient {
    pub lambda: Weight,
    pub gamma: Complex64,
    pub dim: i128,
}

/// Fourier coefficients of a central function on the dominant weights
/// `lambda` with `|lambda + delta| <= cutoff`, sorted by `lambda`.
#[derive(Debug, Clone)]
pub struct CentralSpectrum {
    pub entries: Vec<CentralCoefficient>,
    pub cutoff: f64,
}

/// Conjugate exponent `q' = q/(q-1)` for `q` in `[1, 2]`; `q = 1` maps to
/// infinity.
pub fn conjugate_exponent(q: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(Error::Domain(format!("exponent q={q} outside [1, 2]")));
    }
    if q == 1.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(q / (q - 1.0))
    }
}

fn check_nyquist(grid: TorusGrid, freqs: &[Weight]) -> Result<()> {
    let half = (grid.n() / 2) as i64;
    for f in freqs {
        if f.iter().any(|c| c.abs() >= half) {
            return Err(Error::Nyquist(format!(
                "frequency {f:?} reaches the Nyquist bound N/2 = {half}; \
                 refine the grid or lower the cutoff"
            )));
        }
    }
    Ok(())
}

/// Fourier coefficients of the central function with numerator samples
/// `h = f * A_delta` (for a torus, `h = f` itself).
pub fn central_fourier_from_numerator(
    rs: &RootSystem,
    h: &GridFunction,
    cutoff: f64,
) -> Result<CentralSpectrum> {
    if h.grid().rank() != rs.rank() {
        return Err(Error::Domain("grid rank does not match root system".into()));
    }
    let lambdas = rs.enumerate_shifted_dominant(cutoff)?;
    let freqs: Vec<Weight> = lambdas
        .iter()
        .map(|l| l.iter().zip(rs.delta()).map(|(a, d)| a + d).collect())
        .collect();
    check_nyquist(h.grid(), &freqs)?;
    let raw = rectangle_transform_many(h, &freqs)?;
    let mut entries = Vec::with_capacity(lambdas.len());
    for (lambda, coeff) in lambdas.into_iter().zip(raw) {
        let dim = rs.weyl_dimension(&lambda)?;
        if dim >= (1i128 << 53) {
            return Err(Error::Domain(format!(
                "dimension of {lambda:?} too large for floating-point work"
            )));
        }
        entries.push(CentralCoefficient {
            gamma: coeff / dim as f64,
            lambda,
            dim,
        });
    }
    Ok(CentralSpectrum { entries, cutoff })
}

/// Fourier coefficients of a central function from its own samples; the
/// Weyl-denominator factor is supplied internally.
pub fn central_fourier(
    rs: &RootSystem,
    f: &GridFunction,
    cutoff: f64,
) -> Result<CentralSpectrum> {
    let a = weyl_denominator_grid(rs, f.grid())?;
    central_fourier_from_numerator(rs, &f.mul(&a)?, cutoff)
}

/// Direct route to the dual norm:
/// `( sum d^2 |gamma|^{q'} )^{1/q'}`, or `sup |gamma|` for `q' = infinity`.
pub fn spectral_norm_direct(spectrum: &CentralSpectrum, qprime: f64) -> Result<f64> {
    if qprime < 1.0 || qprime.is_nan() {
        return Err(Error::Domain(format!("dual exponent q'={qprime} below 1")));
    }
    if qprime.is_infinite() {
        return Ok(spectrum
            .entries
            .iter()
            .map(|e| e.gamma.norm())
            .fold(0.0, f64::max));
    }
    let mut acc = KahanSum::new();
    for e in &spectrum.entries {
        let d = e.dim as f64;
        acc.add(d * d * e.gamma.norm().powf(qprime));
    }
    Ok(acc.value().powf(1.0 / qprime))
}

/// The closed-form prefactor of the lattice route,
/// `A(G, q) = [ (1/|W|) prod_{alpha>0} <alpha, delta>^{q'-2} ]^{1/q'}`,
/// extended by its limit `prod <alpha, delta>` at `q' = infinity` and by 1
/// for tori.
pub fn lattice_prefactor(rs: &RootSystem, qprime: f64) -> Result<f64> {
    if qprime < 2.0 || qprime.is_nan() {
        return Err(Error::Domain(format!(
            "lattice prefactor needs q' >= 2, got {qprime}"
        )));
    }
    if rs.is_abelian() {
        return Ok(1.0);
    }
    let mut prod = 1.0f64;
    for alpha in rs.positive_roots() {
        prod *= rs.inner(alpha, rs.delta());
    }
    let order = rs.weyl_order() as f64;
    if qprime.is_infinite() {
        return Ok(prod);
    }
    Ok((prod.powf(qprime - 2.0) / order).powf(1.0 / qprime))
}

/// Lattice route to the dual norm: a weighted `q'` sum of plain torus
/// coefficients of the numerator `h = f * A_delta` over every nonsingular
/// lattice point in the cutoff ball,
/// `A(G,q) * [ sum |F_T(h)(mu)|^{q'} prod_{alpha>0} |<alpha, mu>|^{2-q'} ]^{1/q'}`.
///
/// Kept deliberately independent of [`spectral_norm_direct`]: same ball,
/// different decomposition.
pub fn spectral_norm_lattice(
    rs: &RootSystem,
    h: &GridFunction,
    qprime: f64,
    cutoff: f64,
) -> Result<f64> {
    if rs.is_abelian() {
        return Err(Error::Unsupported(
            "the lattice route needs a nontrivial Weyl group; use the direct route".into(),
        ));
    }
    if !qprime.is_finite() || qprime < 2.0 {
        return Err(Error::Domain(format!(
            "lattice route needs finite q' >= 2, got {qprime}"
        )));
    }
    let ball = rs.enumerate_lattice_ball(cutoff)?;
    check_nyquist(h.grid(), &ball)?;
    let keep: Vec<Weight> = ball.into_iter().filter(|mu| !rs.is_singular(mu)).collect();
    let coeffs = rectangle_transform_many(h, &keep)?;
    let mut acc = KahanSum::new();
    for (mu, c) in keep.iter().zip(&coeffs) {
        let mut weight = 1.0f64;
        for alpha in rs.positive_roots() {
            weight *= rs.inner(alpha, mu).abs().powf(2.0 - qprime);
        }
        acc.add(c.norm().powf(qprime) * weight);
    }
    Ok(lattice_prefactor(rs, qprime)? * acc.value().powf(1.0 / qprime))
}

/// `L^q(G)` norm of a central function from its numerator samples, via the
/// Weyl integration formula:
/// `[ (1/|W|) int_T |h|^q |A_delta|^{2-q} ]^{1/q}` with `h = f * A_delta`.
///
/// Division-free: at singular nodes `h` vanishes exactly and the weight
/// `|A|^{2-q}` is bounded (it is `0^0 = 1` at `q = 2`), so singular nodes
/// contribute exactly zero.
pub fn central_lq_norm(
    rs: &RootSystem,
    h: &GridFunction,
    adelta: &GridFunction,
    q: f64,
) -> Result<f64> {
    if !(1.0..=2.0).contains(&q) {
        return Err(Error::Domain(format!("exponent q={q} outside [1, 2]")));
    }
    if h.grid() != adelta.grid() {
        return Err(Error::Domain("numerator and denominator grids differ".into()));
    }
    let mut acc = KahanSum::new();
    for (hv, av) in h.values().iter().zip(adelta.values()) {
        acc.add(hv.norm().powf(q) * av.norm().powf(2.0 - q));
    }
    let mean = acc.value() * h.grid().cell_volume() / rs.weyl_order() as f64;
    Ok(mean.powf(1.0 / q))
}

/// `L^2(G)` norm of a central function from its numerator samples.
pub fn weyl_l2_norm(rs: &RootSystem, h: &GridFunction) -> f64 {
    (quadrature_abs_power(h, 2.0) / rs.weyl_order() as f64).sqrt()
}

/// Two-sided Plancherel audit for one central function.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PlancherelReport {
    /// `( sum d^2 |gamma|^2 )^{1/2}` from the coefficients.
    pub spectral_l2: f64,
    /// `L^2(G)` norm by Weyl integration on the torus.
    pub torus_l2: f64,
    /// Relative disagreement.
    pub residual: f64,
}

pub fn plancherel_check(
    rs: &RootSystem,
    h: &GridFunction,
    spectrum: &CentralSpectrum,
) -> Result<PlancherelReport> {
    let spectral_l2 = spectral_norm_direct(spectrum, 2.0)?;
    let torus_l2 = weyl_l2_norm(rs, h);
    let residual = (spectral_l2 - torus_l2).abs() / torus_l2.max(spectral_l2).max(1e-300);
    Ok(PlancherelReport {
        spectral_l2,
        torus_l2,
        residual,
    })
}

/// Irreducible character `chi_lambda(x) = A_{lambda+delta}(x) / A_delta(x)`.
///
/// Errors with [`Error::SingularPoint`] when `|A_delta(x)| < 1e-12`; use the
/// numerator forms near walls instead.
pub fn eval_character(
    rs: &RootSystem,
    wg: &WeylGroup,
    lambda: &[i64],
    x: &[f64],
) -> Result<Complex64> {
    if lambda.len() != rs.rank() || x.len() != rs.rank() {
        return Err(Error::Domain("rank mismatch in character evaluation".into()));
    }
    if !rs.is_abelian() && lambda.iter().any(|&c| c < 0) {
        return Err(Error::Domain(format!("weight {lambda:?} is not dominant")));
    }
    let denom = weyl_denominator(rs, x);
    if denom.norm() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "point {x:?} is numerically singular (|A_delta| = {:.3e})",
            denom.norm()
        )));
    }
    let shifted: Weight = lambda.iter().zip(rs.delta()).map(|(a, d)| a + d).collect();
    Ok(alternating_sum(wg, &shifted, x) / denom)
}

/// A band-limited central function presented in the character basis:
/// `f = sum_j c_j chi_{lambda_j}`. Characters are orthonormal in `L^2(G)`,
/// so `|f|_2 = (sum |c_j|^2)^{1/2}` exactly, which makes these polynomials
/// the reference corpus for Plancherel and round-trip tests.
#[derive(Debug, Clone)]
pub struct CharacterPoly {
    pub terms: Vec<(Weight, Complex64)>,
}

impl CharacterPoly {
    /// Samples of the numerator `f * A_delta = sum_j c_j A_{lambda_j+delta}`,
    /// finite and exact-zero-friendly on every node.
    pub fn numerator_grid(
        &self,
        rs: &RootSystem,
        wg: &WeylGroup,
        grid: TorusGrid,
    ) -> Result<GridFunction> {
        if grid.rank() != rs.rank() {
            return Err(Error::Domain("grid rank does not match root system".into()));
        }
        let shifted: Vec<Weight> = self
            .terms
            .iter()
            .map(|(l, _)| l.iter().zip(rs.delta()).map(|(a, d)| a + d).collect())
            .collect();
        Ok(GridFunction::from_fn(grid, |x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((_, c), nu) in self.terms.iter().zip(&shifted) {
                acc += c * alternating_sum(wg, nu, x);
            }
            acc
        }))
    }

    /// Exact `L^2(G)` norm from character orthonormality.
    pub fn exact_l2(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Smallest cutoff whose shifted-dominant ball contains every term.
    pub fn min_cutoff(&self, rs: &RootSystem) -> f64 {
        let mut worst = 0.0f64;
        for (lambda, _) in &self.terms {
            let shifted: Weight = lambda.iter().zip(rs.delta()).map(|(a, d)| a + d).collect();
            let r = rs.inner(&shifted, &shifted).sqrt();
            worst = worst.max(r);
        }
        worst * (1.0 + 1e-9) + 1e-9
    }
}

/// Draws a random central trigonometric polynomial in the character basis:
/// `terms` distinct dominant weights with coordinates below `max_coord` and
/// standard complex Gaussian-ish coefficients. Deterministic in `seed`.
pub fn random_character_poly(
    rs: &RootSystem,
    seed: u64,
    terms: usize,
    max_coord: i64,
) -> Result<CharacterPoly> {
    if terms == 0 || max_coord < 0 {
        return Err(Error::Domain("empty character polynomial requested".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut chosen: Vec<Weight> = Vec::new();
    let mut guard = 0;
    while chosen.len() < terms {
        let cand: Weight = (0..rs.rank()).map(|_| rng.gen_range(0..=max_coord)).collect();
        if !chosen.contains(&cand) {
            chosen.push(cand);
        }
        guard += 1;
        if guard > 10_000 {
            return Err(Error::Domain(
                "cannot draw enough distinct dominant weights; raise max_coord".into(),
            ));
        }
    }
    let terms = chosen
        .into_iter()
        .map(|l| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (l, c)
        })
        .collect();
    Ok(CharacterPoly { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanSpec;
    use crate::torus::{e2pi, quadrature_mean, symmetrize};

    fn setup(g: &str) -> (RootSystem, WeylGroup) {
        let rs = RootSystem::new(g.parse::<CartanSpec>().unwrap()).unwrap();
        let wg = WeylGroup::new(&rs).unwrap();
        (rs, wg)
    }

    #[test]
    fn constant_function_has_only_the_trivial_coefficient() {
        for gname in ["A1", "A2"] {
            let (rs, _) = setup(gname);
            let grid = TorusGrid::new(rs.rank(), 32).unwrap();
            let f = GridFunction::constant(grid, Complex64::new(1.0, 0.0));
            let spec = central_fourier(&rs, &f, 4.0).unwrap();
            for e in &spec.entries {
                if e.lambda.iter().all(|&c| c == 0) {
                    assert!((e.gamma - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{gname}");
                } else {
                    assert!(e.gamma.norm() < 1e-12, "{gname} {:?}", e.lambda);
                }
            }
        }
    }

    #[test]
    fn abelian_coefficients_are_ordinary_fourier_coefficients() {
        let (rs, _) = setup("T1");
        let grid = TorusGrid::new(1, 32).unwrap();
        let f = GridFunction::from_fn(grid, |x| {
            Complex64::new(2.0, 0.0) * e2pi(3.0 * x[0]) + e2pi(-x[0])
        });
        let spec = central_fourier(&rs, &f, 5.0).unwrap();
        for e in &spec.entries {
            let want = match e.lambda[0] {
                3 => Complex64::new(2.0, 0.0),
                -1 => Complex64::new(1.0, 0.0),
                _ => Complex64::new(0.0, 0.0),
            };
            assert!((e.gamma - want).norm() < 1e-12, "{:?}", e.lambda);
            assert_eq!(e.dim, 1);
        }
    }

    #[test]
    fn single_character_recovers_inverse_dimension() {
        let (rs, wg) = setup("A2");
        let grid = TorusGrid::new(2, 32).unwrap();
        let poly = CharacterPoly {
            terms: vec![(vec![1, 1], Complex64::new(1.0, 0.0))],
        };
        let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
        let spec = central_fourier_from_numerator(&rs, &h, 6.0).unwrap();
        for e in &spec.entries {
            if e.lambda == vec![1, 1] {
                assert!((e.gamma - Complex64::new(0.125, 0.0)).norm() < 1e-12);
                assert_eq!(e.dim, 8);
            } else {
                assert!(e.gamma.norm() < 1e-12, "{:?}", e.lambda);
            }
        }
    }

    #[test]
    fn direct_norm_fixtures() {
        // Spectrum {gamma_0 = 1}: norm 1 for every exponent.
        let trivial = CentralSpectrum {
            entries: vec![CentralCoefficient {
                lambda: vec![0],
                gamma: Complex64::new(1.0, 0.0),
                dim: 1,
            }],
            cutoff: 1.0,
        };
        for qp in [2.0, 3.0, 4.0, f64::INFINITY] {
            assert!((spectral_norm_direct(&trivial, qp).unwrap() - 1.0).abs() < 1e-15);
        }
        // A single character: d^{2/q' - 1}.
        let (rs, wg) = setup("A2");
        let grid = TorusGrid::new(2, 32).unwrap();
        let poly = CharacterPoly {
            terms: vec![(vec![1, 1], Complex64::new(1.0, 0.0))],
        };
        let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
        let spec = central_fourier_from_numerator(&rs, &h, 6.0).unwrap();
        for qp in [2.0, 3.0, 4.0, 6.0] {
            let want = 8.0f64.powf(2.0 / qp - 1.0);
            let got = spectral_norm_direct(&spec, qp).unwrap();
            assert!((got - want).abs() < 1e-10, "q'={qp}: {got} vs {want}");
        }
        let got = spectral_norm_direct(&spec, f64::INFINITY).unwrap();
        assert!((got - 0.125).abs() < 1e-12);
    }

    #[test]
    fn plancherel_holds_for_random_character_polynomials() {
        for (gname, n, maxc) in [("A1", 256, 20), ("A2", 64, 4)] {
            let (rs, wg) = setup(gname);
            let grid = TorusGrid::new(rs.rank(), n).unwrap();
            let poly = random_character_poly(&rs, 42, 5, maxc).unwrap();
            let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
            let spec =
                central_fourier_from_numerator(&rs, &h, poly.min_cutoff(&rs)).unwrap();
            let report = plancherel_check(&rs, &h, &spec).unwrap();
            assert!(
                report.residual < 1e-10,
                "{gname}: residual {}",
                report.residual
            );
            let exact = poly.exact_l2();
            assert!(
                (report.spectral_l2 - exact).abs() / exact < 1e-10,
                "{gname}: {} vs exact {exact}",
                report.spectral_l2
            );
        }
    }

    #[test]
    fn both_norm_routes_agree_on_band_limited_functions() {
        for (gname, n, maxc) in [("A1", 128, 12), ("A2", 64, 3)] {
            let (rs, wg) = setup(gname);
            let grid = TorusGrid::new(rs.rank(), n).unwrap();
            let poly = random_character_poly(&rs, 7, 4, maxc).unwrap();
            let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
            let cutoff = poly.min_cutoff(&rs);
            let spec = central_fourier_from_numerator(&rs, &h, cutoff).unwrap();
            for qp in [2.0, 3.0, 4.0, 6.0] {
                let direct = spectral_norm_direct(&spec, qp).unwrap();
                let lattice = spectral_norm_lattice(&rs, &h, qp, cutoff).unwrap();
                assert!(
                    (direct - lattice).abs() / direct < 1e-8,
                    "{gname} q'={qp}: direct {direct}, lattice {lattice}"
                );
            }
        }
    }

    #[test]
    fn lattice_route_on_constant_function_gives_one() {
        let (rs, _) = setup("A1");
        let grid = TorusGrid::new(1, 64).unwrap();
        let a = weyl_denominator_grid(&rs, grid).unwrap();
        for qp in [2.0, 3.0, 4.0] {
            let got = spectral_norm_lattice(&rs, &a, qp, 2.0).unwrap();
            assert!((got - 1.0).abs() < 1e-12, "q'={qp}: {got}");
        }
        // The torus has no lattice route.
        let (t1, _) = setup("T1");
        let g = GridFunction::constant(TorusGrid::new(1, 16).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(
            spectral_norm_lattice(&t1, &g, 3.0, 2.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn transform_vanishes_on_singular_lattice_points() {
        for (gname, n, maxc) in [("A1", 128, 10), ("A2", 32, 3)] {
            let (rs, wg) = setup(gname);
            let grid = TorusGrid::new(rs.rank(), n).unwrap();
            let poly = random_character_poly(&rs, 99, 4, maxc).unwrap();
            let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
            let l1 = quadrature_abs_power(&h, 1.0);
            let ball = rs.enumerate_lattice_ball(poly.min_cutoff(&rs)).unwrap();
            let singular: Vec<Weight> = ball
                .into_iter()
                .filter(|mu| rs.is_singular(mu))
                .collect();
            assert!(!singular.is_empty());
            let coeffs = rectangle_transform_many(&h, &singular).unwrap();
            for (mu, c) in singular.iter().zip(&coeffs) {
                assert!(
                    c.norm() < 1e-10 * l1,
                    "{gname} {mu:?}: |F| = {} vs L1 {l1}",
                    c.norm()
                );
            }
        }
    }

    #[test]
    fn characters_evaluate_to_known_values() {
        let (rs, wg) = setup("A1");
        // chi_n(x) = sin(2 pi (n+1) x) / sin(2 pi x).
        for n in [0i64, 1, 4] {
            for x in [0.13, -0.29, 0.41] {
                let want = (std::f64::consts::TAU * (n + 1) as f64 * x).sin()
                    / (std::f64::consts::TAU * x).sin();
                let got = eval_character(&rs, &wg, &[n], &[x]).unwrap();
                assert!((got - Complex64::new(want, 0.0)).norm() < 1e-10, "n={n} x={x}");
            }
        }
        // lambda = 0 is the constant character.
        let (a2, w2) = setup("A2");
        let got = eval_character(&a2, &w2, &[0, 0], &[0.21, -0.34]).unwrap();
        assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        // Near the identity the value approaches the dimension.
        let x = [1e-4 * 0.63, 1e-4 * 0.87];
        let got = eval_character(&a2, &w2, &[1, 1], &x).unwrap();
        assert!((got - Complex64::new(8.0, 0.0)).norm() < 1e-3 * 8.0, "{got}");
        // Exactly singular points are rejected.
        assert!(matches!(
            eval_character(&a2, &w2, &[1, 1], &[0.0, 0.0]),
            Err(Error::SingularPoint(_))
        ));
        // Torus characters are plain exponentials.
        let (t1, wt) = setup("T1");
        let got = eval_character(&t1, &wt, &[3], &[0.2]).unwrap();
        assert!((got - e2pi(0.6)).norm() < 1e-12);
    }

    #[test]
    fn characters_are_orthonormal_via_torus_quadrature() {
        let (rs, wg) = setup("A2");
        let grid = TorusGrid::new(2, 32).unwrap();
        let lams = [vec![0i64, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 0]];
        let numerators: Vec<GridFunction> = lams
            .iter()
            .map(|l| {
                CharacterPoly {
                    terms: vec![(l.clone(), Complex64::new(1.0, 0.0))],
                }
                .numerator_grid(&rs, &wg, grid)
                .unwrap()
            })
            .collect();
        let order = rs.weyl_order() as f64;
        for (i, hi) in numerators.iter().enumerate() {
            for (j, hj) in numerators.iter().enumerate() {
                let conj = GridFunction::from_values(
                    grid,
                    hj.values().iter().map(|v| v.conj()).collect(),
                )
                .unwrap();
                let inner = quadrature_mean(&hi.mul(&conj).unwrap()) / order;
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (inner - Complex64::new(want, 0.0)).norm() < 1e-10,
                    "<chi_{i}, chi_{j}> = {inner}"
                );
            }
        }
    }

    #[test]
    fn hausdorff_young_quotients_do_not_exceed_one() {
        for (gname, n, maxc) in [("A1", 128, 10), ("A2", 32, 3)] {
            let (rs, wg) = setup(gname);
            let grid = TorusGrid::new(rs.rank(), n).unwrap();
            let a = weyl_denominator_grid(&rs, grid).unwrap();
            for seed in [1u64, 2, 3] {
                let poly = random_character_poly(&rs, seed, 4, maxc).unwrap();
                let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
                let spec =
                    central_fourier_from_numerator(&rs, &h, poly.min_cutoff(&rs)).unwrap();
                for q in [1.0, 4.0 / 3.0, 1.5, 2.0] {
                    let qp = conjugate_exponent(q).unwrap();
                    let num = spectral_norm_direct(&spec, qp).unwrap();
                    let den = central_lq_norm(&rs, &h, &a, q).unwrap();
                    let quotient = num / den;
                    assert!(
                        quotient <= 1.0 + 1e-8,
                        "{gname} seed {seed} q={q}: quotient {quotient}"
                    );
                }
            }
        }
    }

    #[test]
    fn norms_are_invariant_under_gram_rescaling() {
        let (rs, wg) = setup("A2");
        let scaled = rs.with_gram_scaled(4, 1).unwrap();
        let grid = TorusGrid::new(2, 32).unwrap();
        let poly = random_character_poly(&rs, 5, 3, 3).unwrap();
        let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
        let cutoff = poly.min_cutoff(&rs);
        for qp in [2.0, 3.0, 6.0] {
            let d1 = spectral_norm_direct(
                &central_fourier_from_numerator(&rs, &h, cutoff).unwrap(),
                qp,
            )
            .unwrap();
            let d2 = spectral_norm_direct(
                &central_fourier_from_numerator(&scaled, &h, 2.0 * cutoff).unwrap(),
                qp,
            )
            .unwrap();
            assert!((d1 - d2).abs() <= 1e-9 * d1, "direct q'={qp}");
            let l1 = spectral_norm_lattice(&rs, &h, qp, cutoff).unwrap();
            let l2 = spectral_norm_lattice(&scaled, &h, qp, 2.0 * cutoff).unwrap();
            assert!((l1 - l2).abs() <= 1e-9 * l1, "lattice q'={qp}: {l1} vs {l2}");
        }
    }

    #[test]
    fn nyquist_violations_are_reported() {
        let (rs, _) = setup("A1");
        let grid = TorusGrid::new(1, 16).unwrap();
        let f = GridFunction::constant(grid, Complex64::new(1.0, 0.0));
        let err = central_fourier(&rs, &f, 12.0);
        assert!(matches!(err, Err(Error::Nyquist(_))));
    }

    #[test]
    fn symmetrized_profiles_have_symmetric_spectra() {
        // A generic symmetrized function has real coefficient structure
        // compatible with conjugation when the input is real.
        let (rs, wg) = setup("A2");
        let grid = TorusGrid::new(2, 32).unwrap();
        let raw = GridFunction::from_real_fn(grid, |x| {
            (-8.0 * (x[0] * x[0] + 0.7 * x[1] * x[1])).exp()
        });
        let f = symmetrize(&wg, &raw).unwrap();
        let spec = central_fourier(&rs, &f, 4.0).unwrap();
        // Real central input: gamma at lambda equals conj(gamma) at the
        // contragredient weight -w0(lambda); for A2 that is the coordinate
        // swap.
        for e in &spec.entries {
            let swapped = vec![e.lambda[1], e.lambda[0]];
            let other = spec.entries.iter().find(|e2| e2.lambda == swapped).unwrap();
            assert!(
                (e.gamma - other.gamma.conj()).norm() < 1e-12,
                "{:?} vs {:?}",
                e.lambda,
                swapped
            );
        }
    }

    #[test]
    fn exponent_helpers_validate_input() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert!((conjugate_exponent(4.0 / 3.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(conjugate_exponent(1.0).unwrap().is_infinite());
        assert!(conjugate_exponent(0.9).is_err());
        assert!(conjugate_exponent(2.1).is_err());
        assert!(spectral_norm_direct(
            &CentralSpectrum { entries: vec![], cutoff: 1.0 },
            0.5
        )
        .is_err());
    }
}

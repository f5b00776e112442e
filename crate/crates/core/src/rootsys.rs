//! Root systems, Weyl groups, and the weight lattice in fundamental-weight
//! coordinates.
//!
//! Conventions (fixed once, used everywhere):
//!
//! * Weights are integer vectors in the basis of fundamental weights, so the
//!   weight lattice is exactly `Z^r` and dominance is coordinatewise
//!   nonnegativity.
//! * The `i`-th simple root is the `i`-th *row* of the Cartan matrix in these
//!   coordinates, and the simple reflection acts by
//!   `s_i(b) = b - b_i * alpha_i`, an integer matrix.
//! * The invariant inner product is normalized so long roots have squared
//!   length 2. It is represented exactly as a rational matrix; all ball
//!   membership tests and the Weyl dimension formula are evaluated in exact
//!   rational arithmetic so enumeration boundaries can never straddle a
//!   floating-point rounding.
//! * Torus coordinates live in the predual basis; evaluating a weight on a
//!   torus point is the plain dot product [`pair`], with no gram matrix.
//!   Keeping the two pairings separate is what makes every reported quotient
//!   independent of the normalization of the inner product.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used for gram pairings and the dimension formula.
pub type Rat = Ratio<i128>;

/// A weight (or any weight-lattice vector) in fundamental-weight coordinates.
pub type Weight = Vec<i64>;

/// Hard cap on Weyl-group closure size; admissible ranks stay far below it.
const WEYL_CLOSURE_CAP: usize = 10_000_000;

/// Hard cap on lattice enumeration size.
const ENUMERATION_CAP: usize = 2_000_000;

/// Simple-group families supported by the numerical experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

/// Group selector: a simple simply connected compact type, or a plain torus
/// `T^r` (the degenerate configuration with no roots, used to reproduce the
/// classical circle/torus results with the same code paths).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanSpec {
    Simple(Family, usize),
    Torus(usize),
}

impl CartanSpec {
    pub fn rank(&self) -> usize {
        match *self {
            CartanSpec::Simple(_, r) => r,
            CartanSpec::Torus(r) => r,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, CartanSpec::Torus(_))
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        match *self {
            CartanSpec::Simple(fam, r) => {
                if r > 9 {
                    return bad(format!("rank {r} exceeds the supported maximum of 9"));
                }
                match fam {
                    Family::A if r >= 1 => Ok(()),
                    Family::B if r >= 2 => Ok(()),
                    Family::C if r >= 2 => Ok(()),
                    Family::D if r >= 3 => Ok(()),
                    Family::G if r == 2 => Ok(()),
                    _ => bad(format!("family {fam:?} does not admit rank {r}")),
                }
            }
            CartanSpec::Torus(r) => {
                if (1..=9).contains(&r) {
                    Ok(())
                } else {
                    bad(format!("torus rank {r} outside 1..=9"))
                }
            }
        }
    }
}

impl FromStr for CartanSpec {
    type Err = Error;

    /// Parses strings like `"A2"`, `"g2"`, `"T1"` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::InvalidGroup(format!("cannot parse group `{s}`"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| err())?;
        let spec = match letter {
            'A' => CartanSpec::Simple(Family::A, rank),
            'B' => CartanSpec::Simple(Family::B, rank),
            'C' => CartanSpec::Simple(Family::C, rank),
            'D' => CartanSpec::Simple(Family::D, rank),
            'G' => CartanSpec::Simple(Family::G, rank),
            'T' => CartanSpec::Torus(rank),
            _ => return Err(err()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for CartanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CartanSpec::Simple(fam, r) => write!(f, "{fam:?}{r}"),
            CartanSpec::Torus(r) => write!(f, "T{r}"),
        }
    }
}

/// Duality evaluation of a weight-lattice vector on a torus point: the plain
/// dot product `sum_k alpha_k x_k`. No inner product is involved.
#[inline]
pub fn pair(alpha: &[i64], x: &[f64]) -> f64 {
    debug_assert_eq!(alpha.len(), x.len());
    let mut acc = 0.0;
    for (a, xi) in alpha.iter().zip(x) {
        acc += *a as f64 * xi;
    }
    acc
}

/// Converts a finite `f64` into an exact rational via its IEEE-754 bits.
///
/// Restricted to magnitudes in `[2^-60, 2^60]` (plus zero) so downstream
/// exact arithmetic cannot overflow `i128`; cutoffs and radii in this crate
/// are always in that range.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    if x == 0.0 {
        return Ok(Rat::zero());
    }
    if !x.is_finite() || !(1e-18..=1e18).contains(&x.abs()) {
        return Err(Error::Domain(format!(
            "value {x} cannot be represented exactly in bounded rational arithmetic"
        )));
    }
    let bits = x.to_bits();
    let sign: i128 = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    // Normal numbers only (magnitude bounds above exclude subnormals).
    let mantissa = frac | (1i128 << 52);
    let exp = exp_field - 1075; // value = mantissa * 2^exp
    let value = if exp >= 0 {
        if exp > 70 {
            return Err(Error::Domain(format!("value {x} too large for exact rational")));
        }
        Rat::from_integer(sign * (mantissa << exp))
    } else {
        let shift = (-exp) as u32;
        if shift > 120 {
            return Err(Error::Domain(format!("value {x} too small for exact rational")));
        }
        Rat::new(sign * mantissa, 1i128 << shift)
    };
    Ok(value)
}

fn rat_checked_mul(a: Rat, b: Rat) -> Result<Rat> {
    // Cross-reduce before multiplying so products of many small factors stay
    // within i128.
    let g1 = num_integer::gcd(a.numer().abs(), *b.denom());
    let g2 = num_integer::gcd(b.numer().abs(), *a.denom());
    let (an, bd) = (a.numer() / g1, b.denom() / g1);
    let (bn, ad) = (b.numer() / g2, a.denom() / g2);
    let num = an
        .checked_mul(bn)
        .ok_or_else(|| Error::Internal("rational overflow in product".into()))?;
    let den = ad
        .checked_mul(bd)
        .ok_or_else(|| Error::Internal("rational overflow in product".into()))?;
    Ok(Rat::new(num, den))
}

/// A root system together with the exact invariant inner product.
#[derive(Debug, Clone)]
pub struct RootSystem {
    spec: CartanSpec,
    rank: usize,
    /// Rows are the simple roots in fundamental-weight coordinates.
    cartan: Vec<Vec<i64>>,
    /// Half squared lengths of the simple roots, normalized so the longest
    /// root has squared length 2.
    symmetrizers: Vec<Rat>,
    positive_roots: Vec<Weight>,
    gram: Vec<Vec<Rat>>,
    gram_f64: Vec<Vec<f64>>,
    /// Diagonal of the inverse gram matrix (for enumeration box bounds).
    gram_inv_diag: Vec<f64>,
    delta: Weight,
}

impl RootSystem {
    pub fn new(spec: CartanSpec) -> Result<Self> {
        spec.validate()?;
        let rank = spec.rank();
        match spec {
            CartanSpec::Torus(r) => {
                let gram: Vec<Vec<Rat>> = (0..r)
                    .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                    .collect();
                let gram_f64 = rat_matrix_to_f64(&gram);
                Ok(Self {
                    spec,
                    rank,
                    cartan: Vec::new(),
                    symmetrizers: Vec::new(),
                    positive_roots: Vec::new(),
                    gram,
                    gram_f64,
                    gram_inv_diag: vec![1.0; r],
                    delta: vec![0; r],
                })
            }
            CartanSpec::Simple(fam, r) => {
                let cartan = cartan_matrix(fam, r);
                let symmetrizers = symmetrizers(&cartan)?;
                let gram = gram_matrix(&cartan, &symmetrizers)?;
                let gram_f64 = rat_matrix_to_f64(&gram);
                let gram_inv_diag = gram_inverse_diag(&cartan, &symmetrizers);
                let mut rs = Self {
                    spec,
                    rank,
                    cartan,
                    symmetrizers,
                    positive_roots: Vec::new(),
                    gram,
                    gram_f64,
                    gram_inv_diag,
                    delta: vec![1; r],
                };
                rs.positive_roots = rs.close_roots()?;
                rs.check_normalization()?;
                Ok(rs)
            }
        }
    }

    pub fn spec(&self) -> CartanSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_abelian(&self) -> bool {
        self.spec.is_abelian()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Half the sum of positive roots; all-ones for simple types, zero for a
    /// torus.
    pub fn delta(&self) -> &Weight {
        &self.delta
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    /// Exact invariant inner product of two lattice vectors.
    pub fn inner_rat(&self, a: &[i64], b: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            let mut row = Rat::zero();
            for j in 0..self.rank {
                if b[j] != 0 {
                    row += self.gram[i][j] * Rat::from_integer(b[j] as i128);
                }
            }
            acc += Rat::from_integer(a[i] as i128) * row;
        }
        acc
    }

    /// Invariant inner product of two lattice vectors as `f64`.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += a[i] as f64 * self.gram_f64[i][j] * b[j] as f64;
            }
        }
        acc
    }

    /// Invariant inner product of a lattice vector against a real frequency
    /// vector (used for the Euclidean weighted integrals).
    pub fn inner_weight_real(&self, a: &[i64], x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..self.rank {
                row += self.gram_f64[i][j] * x[j];
            }
            acc += a[i] as f64 * row;
        }
        acc
    }

    /// Invariant inner product of two real frequency vectors (used for the
    /// Euclidean weighted integrals).
    pub fn inner_real(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += a[i] * self.gram_f64[i][j] * b[j];
            }
        }
        acc
    }

    /// Squared invariant norm, exact.
    pub fn norm2_rat(&self, a: &[i64]) -> Rat {
        self.inner_rat(a, a)
    }

    /// Closed-form Weyl group order for this type.
    pub fn weyl_order(&self) -> i128 {
        fn factorial(n: usize) -> i128 {
            (1..=n as i128).product()
        }
        match self.spec {
            CartanSpec::Torus(_) => 1,
            CartanSpec::Simple(Family::A, r) => factorial(r + 1),
            CartanSpec::Simple(Family::B, r) | CartanSpec::Simple(Family::C, r) => {
                (1i128 << r) * factorial(r)
            }
            CartanSpec::Simple(Family::D, r) => (1i128 << (r - 1)) * factorial(r),
            CartanSpec::Simple(Family::G, _) => 12,
        }
    }

    /// True when some root is orthogonal to `mu` (exact test): `mu` lies on a
    /// reflection wall, where the alternating orbit sums vanish.
    pub fn is_singular(&self, mu: &[i64]) -> bool {
        self.positive_roots
            .iter()
            .any(|alpha| self.inner_rat(alpha, mu).is_zero())
    }

    /// Dimension of the irreducible representation with highest weight
    /// `lambda`, via the exact product formula over positive roots.
    pub fn weyl_dimension(&self, lambda: &[i64]) -> Result<i128> {
        if lambda.len() != self.rank {
            return Err(Error::Domain("weight rank mismatch".into()));
        }
        if self.is_abelian() {
            return Ok(1);
        }
        if lambda.iter().any(|&c| c < 0) {
            return Err(Error::Domain(format!(
                "weight {lambda:?} is not dominant (negative coordinate)"
            )));
        }
        let shifted: Weight = lambda.iter().zip(&self.delta).map(|(a, d)| a + d).collect();
        let mut ratio = Rat::one();
        for alpha in &self.positive_roots {
            let num = self.inner_rat(alpha, &shifted);
            let den = self.inner_rat(alpha, &self.delta);
            ratio = rat_checked_mul(ratio, num / den)?;
        }
        if !ratio.is_integer() {
            return Err(Error::Internal(format!(
                "dimension of {lambda:?} is not an integer: {ratio}"
            )));
        }
        let dim = ratio.to_integer();
        if dim < 1 {
            return Err(Error::Internal(format!("nonpositive dimension for {lambda:?}")));
        }
        Ok(dim)
    }

    /// All dominant weights with invariant norm at most `cutoff`.
    ///
    /// For a torus there is no dominance condition and the whole lattice ball
    /// is returned. Membership is decided in exact rational arithmetic.
    pub fn enumerate_dominant_weights(&self, cutoff: f64) -> Result<Vec<Weight>> {
        if self.is_abelian() {
            self.enumerate_box(cutoff, |_| true)
        } else {
            self.enumerate_nonneg_box(cutoff, 0)
        }
    }

    /// Dominant weights whose shift by delta stays in the cutoff ball:
    /// `{ lambda dominant : |lambda + delta| <= cutoff }`. This is the index
    /// set whose Weyl orbits tile the nonsingular part of the plain lattice
    /// ball, which is what makes the two spectral-norm routes comparable
    /// term by term.
    pub fn enumerate_shifted_dominant(&self, cutoff: f64) -> Result<Vec<Weight>> {
        if self.is_abelian() {
            return self.enumerate_dominant_weights(cutoff);
        }
        let shifted = self.enumerate_nonneg_box(cutoff, 1)?;
        Ok(shifted
            .into_iter()
            .map(|nu| nu.iter().zip(&self.delta).map(|(a, d)| a - d).collect())
            .collect())
    }

    /// All lattice vectors with invariant norm at most `cutoff`.
    pub fn enumerate_lattice_ball(&self, cutoff: f64) -> Result<Vec<Weight>> {
        self.enumerate_box(cutoff, |_| true)
    }

    fn ball_box_bound(&self, cutoff: f64) -> Result<Vec<i64>> {
        if cutoff <= 0.0 || !cutoff.is_finite() {
            return Err(Error::Domain(format!("cutoff {cutoff} must be positive and finite")));
        }
        Ok(self
            .gram_inv_diag
            .iter()
            .map(|&g| (cutoff * g.sqrt() * (1.0 + 1e-12)).floor() as i64)
            .collect())
    }

    fn enumerate_box(&self, cutoff: f64, keep: impl Fn(&[i64]) -> bool) -> Result<Vec<Weight>> {
        let bound = self.ball_box_bound(cutoff)?;
        let cutoff2 = {
            let c = rat_from_f64(cutoff)?;
            c * c
        };
        let mut out = Vec::new();
        let mut v = vec![0i64; self.rank];
        self.enumerate_rec(&bound, &cutoff2, &keep, &mut v, 0, &mut out, true)?;
        out.sort();
        Ok(out)
    }

    /// Enumerates vectors with all coordinates >= `low` inside the ball.
    fn enumerate_nonneg_box(&self, cutoff: f64, low: i64) -> Result<Vec<Weight>> {
        let bound = self.ball_box_bound(cutoff)?;
        let cutoff2 = {
            let c = rat_from_f64(cutoff)?;
            c * c
        };
        let mut out = Vec::new();
        let mut v = vec![low; self.rank];
        self.enumerate_rec(&bound, &cutoff2, &|w: &[i64]| w.iter().all(|&c| c >= low), &mut v, 0, &mut out, false)?;
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_rec(
        &self,
        bound: &[i64],
        cutoff2: &Rat,
        keep: &impl Fn(&[i64]) -> bool,
        v: &mut Vec<i64>,
        axis: usize,
        out: &mut Vec<Weight>,
        signed: bool,
    ) -> Result<()> {
        if axis == self.rank {
            if keep(v) && self.norm2_rat(v) <= *cutoff2 {
                if out.len() >= ENUMERATION_CAP {
                    return Err(Error::Domain(
                        "enumeration cutoff selects too many lattice points".into(),
                    ));
                }
                out.push(v.clone());
            }
            return Ok(());
        }
        // For the unsigned case the starting value is pre-seeded in `v`.
        let start = if signed { -bound[axis] } else { v[axis] };
        let saved = v[axis];
        let mut j = start;
        while j <= bound[axis] {
            v[axis] = j;
            self.enumerate_rec(bound, cutoff2, keep, v, axis + 1, out, signed)?;
            j += 1;
        }
        v[axis] = saved;
        Ok(())
    }

    /// A copy of this root system with the inner product scaled by the exact
    /// positive rational `num/den`. Root data, Weyl group, and dimensions are
    /// untouched; only gram pairings change. Used to verify that reported
    /// quotients are normalization-free.
    pub fn with_gram_scaled(&self, num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::Domain("gram scale must be positive".into()));
        }
        let scale = Rat::new(num as i128, den as i128);
        let mut scaled = self.clone();
        scaled.symmetrizers = self.symmetrizers.iter().map(|d| *d * scale).collect();
        scaled.gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|g| *g * scale).collect())
            .collect();
        scaled.gram_f64 = rat_matrix_to_f64(&scaled.gram);
        let s = (num as f64) / (den as f64);
        scaled.gram_inv_diag = self.gram_inv_diag.iter().map(|&g| g / s).collect();
        Ok(scaled)
    }

    /// Closes the simple roots under simple reflections and returns the
    /// positive half, sorted.
    fn close_roots(&self) -> Result<Vec<Weight>> {
        let mut all: BTreeSet<Weight> = self.cartan.iter().cloned().collect();
        loop {
            let mut fresh: Vec<Weight> = Vec::new();
            for beta in &all {
                for i in 0..self.rank {
                    let mut refl = beta.clone();
                    let bi = beta[i];
                    for (k, r) in refl.iter_mut().enumerate() {
                        *r -= bi * self.cartan[i][k];
                    }
                    if !all.contains(&refl) {
                        fresh.push(refl);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            all.extend(fresh);
            if all.len() > 10_000 {
                return Err(Error::Internal("root closure did not terminate".into()));
            }
        }
        let positive: Vec<Weight> = all
            .iter()
            .filter(|beta| self.inner_rat(beta, &self.delta).is_positive())
            .cloned()
            .collect();
        if positive.len() * 2 != all.len() {
            return Err(Error::Internal("root set is not symmetric".into()));
        }
        Ok(positive)
    }

    /// Normalization audit: the longest root must have squared length exactly 2.
    fn check_normalization(&self) -> Result<()> {
        let two = Rat::from_integer(2);
        let max = self
            .positive_roots
            .iter()
            .map(|alpha| self.norm2_rat(alpha))
            .max()
            .ok_or_else(|| Error::Internal("empty root system for simple type".into()))?;
        if max != two {
            return Err(Error::Internal(format!(
                "long-root normalization violated: squared length {max}"
            )));
        }
        Ok(())
    }
}

fn cartan_matrix(fam: Family, r: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>, len: usize| {
        for i in 0..len.saturating_sub(1) {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    match fam {
        Family::A => chain(&mut a, r),
        Family::B => {
            chain(&mut a, r);
            a[r - 2][r - 1] = -2;
        }
        Family::C => {
            chain(&mut a, r);
            a[r - 1][r - 2] = -2;
        }
        Family::D => {
            chain(&mut a, r - 1);
            a[r - 3][r - 1] = -1;
            a[r - 1][r - 3] = -1;
        }
        Family::G => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
    }
    a
}

/// Solves `d_i * C_ij = d_j * C_ji` along the Dynkin graph and normalizes so
/// the largest symmetrizer (the long roots' half squared length) is 1.
fn symmetrizers(cartan: &[Vec<i64>]) -> Result<Vec<Rat>> {
    let r = cartan.len();
    let mut d: Vec<Option<Rat>> = vec![None; r];
    d[0] = Some(Rat::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let di = d[i].unwrap();
        for j in 0..r {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                // d_j = d_i * C_ji / C_ij
                d[j] = Some(di * Rat::new(cartan[j][i] as i128, cartan[i][j] as i128));
                queue.push_back(j);
            }
        }
    }
    let mut vals: Vec<Rat> = d
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::Internal("Dynkin diagram is disconnected".into())))
        .collect::<Result<_>>()?;
    let max = *vals.iter().max().unwrap();
    for v in &mut vals {
        *v /= max;
    }
    Ok(vals)
}

/// Gram matrix of the fundamental-weight basis: `G = C^-1 * diag(d)`.
fn gram_matrix(cartan: &[Vec<i64>], d: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let inv = invert_integer_matrix(cartan)?;
    let r = cartan.len();
    let gram: Vec<Vec<Rat>> = (0..r)
        .map(|i| (0..r).map(|j| inv[i][j] * d[j]).collect())
        .collect();
    for i in 0..r {
        for j in 0..r {
            if gram[i][j] != gram[j][i] {
                return Err(Error::Internal("gram matrix is not symmetric".into()));
            }
        }
    }
    Ok(gram)
}

/// Diagonal of `G^-1 = diag(d)^-1 * C` as `f64` (box bounds for ball
/// enumeration; exactness is recovered by the rational membership test).
fn gram_inverse_diag(cartan: &[Vec<i64>], d: &[Rat]) -> Vec<f64> {
    (0..cartan.len())
        .map(|i| {
            let dinv = Rat::one() / d[i];
            let v = dinv * Rat::from_integer(cartan[i][i] as i128);
            rat_to_f64(&v)
        })
        .collect()
}

fn invert_integer_matrix(m: &[Vec<i64>]) -> Result<Vec<Vec<Rat>>> {
    let r = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|&x| Rat::from_integer(x as i128)).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..r {
        let pivot_row = (col..r)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::Internal("Cartan matrix is singular".into()))?;
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col];
        for j in 0..r {
            a[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col];
                for j in 0..r {
                    let (acj, icj) = (a[col][j], inv[col][j]);
                    a[i][j] -= factor * acj;
                    inv[i][j] -= factor * icj;
                }
            }
        }
    }
    Ok(inv)
}

fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn rat_matrix_to_f64(m: &[Vec<Rat>]) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(rat_to_f64).collect()).collect()
}

/// The Weyl group as explicit integer matrices on the weight lattice,
/// generated by breadth-first closure of the simple reflections.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    /// Row-major `r x r` integer matrices acting on weights.
    mats: Vec<Vec<i64>>,
    /// Determinants (each element is a product of reflections).
    dets: Vec<i8>,
    /// Transposes: the action on torus coordinates dual to `mats`.
    duals: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    identity: usize,
    /// Max absolute row sum over all dual matrices: the sup-norm operator
    /// bound used for support bookkeeping of symmetrized profiles.
    max_dual_row_sum: i64,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let r = rs.rank();
        let ident: Vec<i64> = identity_flat(r);
        if rs.is_abelian() {
            let mut index = HashMap::new();
            index.insert(ident.clone(), 0);
            return Ok(Self {
                rank: r,
                duals: vec![ident.clone()],
                mats: vec![ident],
                dets: vec![1],
                index,
                identity: 0,
                max_dual_row_sum: 1,
            });
        }
        // Generator i: s_i = I with column i replaced by e_i - alpha_i.
        let mut gens: Vec<Vec<i64>> = Vec::with_capacity(r);
        for i in 0..r {
            let mut m = identity_flat(r);
            for j in 0..r {
                m[j * r + i] -= rs.cartan()[i][j];
            }
            gens.push(m);
        }
        let mut mats = vec![ident.clone()];
        let mut dets: Vec<i8> = vec![1];
        let mut index = HashMap::new();
        index.insert(ident, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            let current = mats[at].clone();
            let det = dets[at];
            for g in &gens {
                let next = mat_mul(g, &current, r);
                if !index.contains_key(&next) {
                    let id = mats.len();
                    if id >= WEYL_CLOSURE_CAP {
                        return Err(Error::Unsupported(
                            "Weyl group exceeds the supported closure size".into(),
                        ));
                    }
                    index.insert(next.clone(), id);
                    mats.push(next);
                    dets.push(-det);
                    queue.push_back(id);
                }
            }
        }
        if mats.len() as i128 != rs.weyl_order() {
            return Err(Error::Internal(format!(
                "Weyl closure produced {} elements, expected {}",
                mats.len(),
                rs.weyl_order()
            )));
        }
        let duals: Vec<Vec<i64>> = mats.iter().map(|m| transpose_flat(m, r)).collect();
        let max_dual_row_sum = duals
            .iter()
            .flat_map(|m| (0..r).map(move |i| (0..r).map(|j| m[i * r + j].abs()).sum::<i64>()))
            .max()
            .unwrap_or(1);
        let identity = index[&identity_flat(r)];
        Ok(Self {
            rank: r,
            mats,
            dets,
            duals,
            index,
            identity,
            max_dual_row_sum,
        })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn det(&self, idx: usize) -> i8 {
        self.dets[idx]
    }

    pub fn matrix(&self, idx: usize) -> &[i64] {
        &self.mats[idx]
    }

    pub fn index_of(&self, mat: &[i64]) -> Option<usize> {
        self.index.get(mat).copied()
    }

    /// Sup-norm operator bound for the dual (torus-side) action.
    pub fn max_dual_row_sum(&self) -> i64 {
        self.max_dual_row_sum
    }

    /// Applies element `idx` to a weight.
    pub fn apply(&self, idx: usize, w: &[i64]) -> Weight {
        let r = self.rank;
        let m = &self.mats[idx];
        (0..r).map(|i| (0..r).map(|j| m[i * r + j] * w[j]).sum()).collect()
    }

    /// Applies the dual (transpose) of element `idx` to a real torus point.
    pub fn apply_dual(&self, idx: usize, x: &[f64]) -> Vec<f64> {
        let r = self.rank;
        let m = &self.duals[idx];
        (0..r)
            .map(|i| (0..r).map(|j| m[i * r + j] as f64 * x[j]).sum())
            .collect()
    }

    /// Dual action on grid node indices for the aligned grid `x_j = j/N - 1/2`:
    /// the node set is carried exactly onto itself modulo `N`.
    pub fn apply_dual_node(&self, idx: usize, node: &[i64], n: i64) -> Vec<i64> {
        let r = self.rank;
        let m = &self.duals[idx];
        let half = n / 2;
        (0..r)
            .map(|i| {
                let mut acc = 0i64;
                for j in 0..r {
                    acc += m[i * r + j] * (node[j] - half);
                }
                (acc + half).rem_euclid(n)
            })
            .collect()
    }

    /// Orbit of a weight, deduplicated and sorted.
    pub fn orbit(&self, w: &[i64]) -> BTreeSet<Weight> {
        (0..self.order()).map(|i| self.apply(i, w)).collect()
    }
}

fn identity_flat(r: usize) -> Vec<i64> {
    let mut m = vec![0i64; r * r];
    for i in 0..r {
        m[i * r + i] = 1;
    }
    m
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut out = vec![0i64; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                out[i * r + j] += aik * b[k * r + j];
            }
        }
    }
    out
}

fn transpose_flat(m: &[i64], r: usize) -> Vec<i64> {
    let mut t = vec![0i64; r * r];
    for i in 0..r {
        for j in 0..r {
            t[j * r + i] = m[i * r + j];
        }
    }
    t
}

/// Writes a nonsingular lattice vector `mu` uniquely as `w(lambda + delta)`
/// with `lambda` dominant, returning the index of `w` and `lambda`.
///
/// Errors with [`Error::Domain`] when `mu` lies on a reflection wall (no such
/// decomposition exists there) and [`Error::Unsupported`] for tori, which
/// have no reflections.
pub fn dominant_decomposition(
    rs: &RootSystem,
    wg: &WeylGroup,
    mu: &[i64],
) -> Result<(usize, Weight)> {
    if rs.is_abelian() {
        return Err(Error::Unsupported(
            "orbit decomposition is undefined for a torus (trivial Weyl group)".into(),
        ));
    }
    if mu.len() != rs.rank() {
        return Err(Error::Domain("weight rank mismatch".into()));
    }
    let r = rs.rank();
    let mut nu: Weight = mu.to_vec();
    let mut w = identity_flat(r);
    let mut steps = 0usize;
    loop {
        if nu.contains(&0) {
            return Err(Error::Domain(format!(
                "{mu:?} lies on a reflection wall and has no chamber decomposition"
            )));
        }
        match (0..r).find(|&i| nu[i] < 0) {
            None => break,
            Some(i) => {
                // nu <- s_i(nu); accumulated element gains s_i on the right.
                let ni = nu[i];
                for (k, c) in nu.iter_mut().enumerate() {
                    *c -= ni * rs.cartan()[i][k];
                }
                let mut si = identity_flat(r);
                for j in 0..r {
                    si[j * r + i] -= rs.cartan()[i][j];
                }
                w = mat_mul(&w, &si, r);
            }
        }
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Internal("chamber descent did not terminate".into()));
        }
    }
    let lambda: Weight = nu.iter().zip(rs.delta()).map(|(a, d)| a - d).collect();
    let idx = wg
        .index_of(&w)
        .ok_or_else(|| Error::Internal("descent produced an element outside the closure".into()))?;
    Ok((idx, lambda))
}

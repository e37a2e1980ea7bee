//! Gaussian sums and ball counts over lattice boxes.
//!
//! Box scans accumulate in fixed point (`2^-96` units, `u128`), so a sum is
//! independent of thread count and summation order, and sums over a set and
//! its complement add up to the full-lattice sum exactly.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::norm::QuadraticNorm;
use super::sets::LatticeSet;
use super::zeta::mobius_table;
use crate::error::{Error, Result};

pub const DEFAULT_POINT_BUDGET: u128 = 100_000_000;

const FIXED_SCALE: f64 = 79_228_162_514_264_337_593_543_950_336.0; // 2^96

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        iter.into_iter().for_each(|x| acc.add(x));
        acc
    }
}

fn to_fixed(x: f64) -> u128 {
    debug_assert!(x >= 0.0);
    (x * FIXED_SCALE) as u128
}

pub fn fixed_to_f64(x: u128) -> f64 {
    x as f64 / FIXED_SCALE
}

/// `floor(sqrt(T) ln T)`, the inclusive half width of the summation box.
pub fn truncation_half_width(t: f64) -> i64 {
    (t.sqrt() * t.ln()).floor().max(0.0) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumPath {
    /// Factorized when the norm is diagonal and the set allows it, else scan.
    Auto,
    Scan,
    /// Product of one-dimensional sums, with Mobius inversion for the
    /// coprime set.
    Factorized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumOptions {
    pub path: SumPath,
    pub point_budget: u128,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self {
            path: SumPath::Auto,
            point_budget: DEFAULT_POINT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSum {
    pub value: f64,
    /// Exact fixed-point accumulator from a box scan, in units of `2^-96`.
    pub fixed: Option<u128>,
    pub half_width: i64,
    /// Points in the truncation box.
    pub box_points: u128,
    pub path: SumPath,
}

fn box_points(half_widths: &[i64]) -> Option<u128> {
    half_widths
        .iter()
        .try_fold(1u128, |acc, &w| acc.checked_mul(2 * w as u128 + 1))
}

/// Visits the points of `[-w_0, w_0] x ... x [-w_{d-1}, w_{d-1}]` whose first
/// coordinate is `first`, in lexicographic order.
fn for_each_in_slab(half_widths: &[i64], first: i64, mut f: impl FnMut(&[i64])) {
    let d = half_widths.len();
    let mut x: Vec<i64> = half_widths.iter().map(|w| -w).collect();
    x[0] = first;
    loop {
        f(&x);
        let mut j = d;
        loop {
            j -= 1;
            if j == 0 {
                return;
            }
            if x[j] < half_widths[j] {
                x[j] += 1;
                break;
            }
            x[j] = -half_widths[j];
        }
    }
}

/// Sums `f` over a box in fixed point, slab-parallel over the first axis.
fn scan_fixed(half_widths: &[i64], f: impl Fn(&[i64]) -> u128 + Sync) -> Result<u128> {
    let w0 = half_widths[0];
    let slabs: Vec<Option<u128>> = (-w0..=w0)
        .into_par_iter()
        .map(|first| {
            let mut acc = Some(0u128);
            for_each_in_slab(half_widths, first, |x| {
                acc = acc.and_then(|a| a.checked_add(f(x)));
            });
            acc
        })
        .collect();
    slabs
        .into_iter()
        .try_fold(0u128, |acc, s| s.and_then(|s| acc.checked_add(s)))
        .ok_or_else(|| Error::InvalidArgument("fixed-point accumulator overflow".into()))
}

/// `sum_{beta in set, |beta_i| <= sqrt(T) ln T} (2 pi sigma^2)^{-d/2}
/// exp(-<beta, N^{-1} beta> / (2 sigma^2 T)) / T^{d/2}`.
pub fn lattice_gaussian_sum(
    norm: &QuadraticNorm,
    t: f64,
    set: &LatticeSet,
    sigma2: f64,
    options: SumOptions,
) -> Result<LatticeSum> {
    if t <= 1.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("scale T must exceed 1, got {t}")));
    }
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::InvalidArgument(format!("sigma^2 must be positive, got {sigma2}")));
    }
    let d = norm.dim();
    let w = truncation_half_width(t);
    let widths = vec![w; d];
    let points = box_points(&widths).unwrap_or(u128::MAX);
    let prefactor = (2.0 * PI * sigma2 * t).powf(-(d as f64) / 2.0);
    let denom = 2.0 * sigma2 * t;

    let factorizable = norm.is_diagonal() && factorized_supported(set, d);
    let use_factorized = match options.path {
        SumPath::Factorized if !factorizable => {
            return Err(Error::InvalidArgument(format!(
                "set {set} with this norm has no factorized evaluation"
            )))
        }
        SumPath::Factorized => true,
        SumPath::Auto => factorizable,
        SumPath::Scan => false,
    };
    if use_factorized {
        let inv_diag: Vec<f64> = (0..d).map(|i| norm.inverse()[(i, i)]).collect();
        let value = prefactor * factorized(set, &inv_diag, w, denom);
        return Ok(LatticeSum {
            value,
            fixed: None,
            half_width: w,
            box_points: points,
            path: SumPath::Factorized,
        });
    }
    if points > options.point_budget {
        return Err(Error::PointBudget {
            needed: points,
            budget: options.point_budget,
        });
    }
    let fixed = scan_fixed(&widths, |x| {
        if set.contains(x) {
            to_fixed(prefactor * (-norm.quad(x) / denom).exp())
        } else {
            0
        }
    })?;
    Ok(LatticeSum {
        value: fixed_to_f64(fixed),
        fixed: Some(fixed),
        half_width: w,
        box_points: points,
        path: SumPath::Scan,
    })
}

fn factorized_supported(set: &LatticeSet, d: usize) -> bool {
    match set {
        LatticeSet::Empty | LatticeSet::Coprime => true,
        LatticeSet::Complement { of } => factorized_supported(of, d),
        other => other.coordinate_factors(d).is_some(),
    }
}

/// One-dimensional sum `sum_{|n| <= w, n ≡ a (l)} exp(-(step n)^2 c)`.
fn axis_sum(w: i64, step: i64, modulus: i64, residue: i64, c: f64) -> f64 {
    (-w..=w)
        .filter(|n| (n - residue).rem_euclid(modulus) == 0)
        .map(|n| {
            let x = (step * n) as f64;
            (-x * x * c).exp()
        })
        .collect::<Neumaier>()
        .value()
}

fn factorized(set: &LatticeSet, inv_diag: &[f64], w: i64, denom: f64) -> f64 {
    let d = inv_diag.len();
    match set {
        LatticeSet::Empty => 0.0,
        LatticeSet::Coprime => {
            // sum over gcd-1 vectors = sum_g mu(g) (sum over nonzero multiples of g)
            let mu = mobius_table(w.max(1) as usize);
            let mut acc = Neumaier::default();
            for g in 1..=w {
                let m = mu[g as usize];
                if m == 0 {
                    continue;
                }
                let prod: f64 = inv_diag
                    .iter()
                    .map(|&inv| axis_sum(w / g, g, 1, 0, inv / denom))
                    .product();
                acc.add(m as f64 * (prod - 1.0));
            }
            acc.value()
        }
        LatticeSet::Complement { of } => factorized(&LatticeSet::Full, inv_diag, w, denom) - factorized(of, inv_diag, w, denom),
        other => {
            let factors = other.coordinate_factors(d).expect("checked by caller");
            factors
                .iter()
                .zip(inv_diag)
                .map(|(&(l, a), &inv)| axis_sum(w, 1, l, a, inv / denom))
                .product()
        }
    }
}

/// The surface predictor `sum_{alpha in set, |alpha_i| <= sqrt(T) ln T}
/// (2 pi sigma^2 T)^{-g} exp(-<alpha, N^{-1} alpha> / (2 sigma^2 T))` with
/// `sigma^2 = 1 / (2 pi (g - 1))`. This is the lattice sum with `d = 2g`.
pub fn surface_predictor_sum(genus: usize, norm: &QuadraticNorm, set: &LatticeSet, t: f64, options: SumOptions) -> Result<LatticeSum> {
    if genus < 2 {
        return Err(Error::InvalidArgument(format!("genus must be at least 2, got {genus}")));
    }
    if norm.dim() != 2 * genus {
        return Err(Error::InvalidNorm(format!(
            "genus {genus} needs a {}x{} matrix, got {}x{}",
            2 * genus,
            2 * genus,
            norm.dim(),
            norm.dim()
        )));
    }
    if (norm.determinant() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidNorm(format!("determinant must be 1, got {}", norm.determinant())));
    }
    lattice_gaussian_sum(norm, t, set, surface_variance(genus), options)
}

pub fn surface_variance(genus: usize) -> f64 {
    1.0 / (2.0 * PI * (genus as f64 - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallDensity {
    pub radius: f64,
    pub in_set: u128,
    pub in_ball: u128,
    pub ratio: f64,
}

/// `#{beta in set : ||beta|| <= r} / #{beta : ||beta|| <= r}` by scanning the
/// box enclosing the ellipsoid.
pub fn ball_density_estimate(set: &LatticeSet, norm: &QuadraticNorm, r: f64, point_budget: u128) -> Result<BallDensity> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let d = norm.dim();
    let widths: Vec<i64> = (0..d).map(|i| norm.coordinate_extent(i, r).floor() as i64).collect();
    let needed = box_points(&widths).unwrap_or(u128::MAX);
    if needed > point_budget {
        return Err(Error::PointBudget {
            needed,
            budget: point_budget,
        });
    }
    let r2 = r * r;
    let w0 = widths[0];
    let (in_set, in_ball) = (-w0..=w0)
        .into_par_iter()
        .map(|first| {
            let (mut s, mut b) = (0u128, 0u128);
            for_each_in_slab(&widths, first, |x| {
                if norm.quad(x) <= r2 {
                    b += 1;
                    if set.contains(x) {
                        s += 1;
                    }
                }
            });
            (s, b)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(BallDensity {
        radius: r,
        in_set,
        in_ball,
        ratio: in_set as f64 / in_ball as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::zeta::zeta;

    fn scan() -> SumOptions {
        SumOptions {
            path: SumPath::Scan,
            ..SumOptions::default()
        }
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let acc: Neumaier = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn truncation_width() {
        assert_eq!(truncation_half_width(1e4), 921);
        assert_eq!(truncation_half_width(400.0), 119);
    }

    #[test]
    fn full_lattice_tends_to_one() {
        let n = QuadraticNorm::identity(2).unwrap();
        let big = lattice_gaussian_sum(&n, 1e4, &LatticeSet::Full, 1.0, scan()).unwrap();
        assert!((big.value - 1.0).abs() < 1e-4);
        let small = lattice_gaussian_sum(&n, 1e2, &LatticeSet::Full, 1.0, scan()).unwrap();
        assert!((big.value - 1.0).abs() <= (small.value - 1.0).abs());
        let fact = lattice_gaussian_sum(&n, 1e4, &LatticeSet::Full, 1.0, SumOptions::default()).unwrap();
        assert_eq!(fact.path, SumPath::Factorized);
        assert!((fact.value - big.value).abs() < 1e-12);
    }

    #[test]
    fn sublattice_and_additivity() {
        let n = QuadraticNorm::identity(2).unwrap();
        let even = LatticeSet::progression(vec![2, 1], vec![0, 0]).unwrap();
        let a = lattice_gaussian_sum(&n, 1e4, &even, 1.0, scan()).unwrap();
        assert!((a.value - 0.5).abs() < 1e-3);
        let b = lattice_gaussian_sum(&n, 1e4, &even.clone().complement(), 1.0, scan()).unwrap();
        let full = lattice_gaussian_sum(&n, 1e4, &LatticeSet::Full, 1.0, scan()).unwrap();
        assert_eq!(a.fixed.unwrap() + b.fixed.unwrap(), full.fixed.unwrap());
        assert_eq!(lattice_gaussian_sum(&n, 1e4, &LatticeSet::Empty, 1.0, scan()).unwrap().value, 0.0);
    }

    #[test]
    fn factorized_matches_scan() {
        let n = QuadraticNorm::parse("2,0;0,0.5").unwrap();
        for set in [
            LatticeSet::Coprime,
            LatticeSet::progression(vec![3, 2], vec![1, 0]).unwrap(),
            LatticeSet::Coprime.complement(),
        ] {
            let a = lattice_gaussian_sum(&n, 500.0, &set, 0.7, scan()).unwrap();
            let b = lattice_gaussian_sum(
                &n,
                500.0,
                &set,
                0.7,
                SumOptions {
                    path: SumPath::Factorized,
                    ..SumOptions::default()
                },
            )
            .unwrap();
            assert!((a.value - b.value).abs() < 1e-12, "{set}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn skew_norm_scans() {
        let n = QuadraticNorm::parse("2,1;1,1").unwrap();
        let s = lattice_gaussian_sum(&n, 2000.0, &LatticeSet::Full, 1.0, SumOptions::default()).unwrap();
        assert_eq!(s.path, SumPath::Scan);
        // det N = 1, so the Gaussian integrates to 1
        assert!((s.value - 1.0).abs() < 1e-5);
        assert!(lattice_gaussian_sum(
            &n,
            2000.0,
            &LatticeSet::Full,
            1.0,
            SumOptions {
                path: SumPath::Factorized,
                ..SumOptions::default()
            }
        )
        .is_err());
    }

    #[test]
    fn surface_predictor() {
        let n = QuadraticNorm::identity(4).unwrap();
        let full = surface_predictor_sum(2, &n, &LatticeSet::Full, 400.0, SumOptions::default()).unwrap();
        assert!((full.value - 1.0).abs() < 1e-9);
        let c = surface_predictor_sum(2, &n, &LatticeSet::Coprime, 400.0, SumOptions::default()).unwrap();
        assert!((c.value - 1.0 / zeta(4)).abs() < 0.02);
        assert_eq!(surface_predictor_sum(2, &n, &LatticeSet::Empty, 400.0, SumOptions::default()).unwrap().value, 0.0);
        let same = lattice_gaussian_sum(&n, 400.0, &LatticeSet::Coprime, surface_variance(2), SumOptions::default()).unwrap();
        assert_eq!(same.value, c.value);
        assert!(surface_predictor_sum(2, &QuadraticNorm::parse("identity:2").unwrap(), &LatticeSet::Full, 400.0, SumOptions::default()).is_err());
        let scaled = QuadraticNorm::parse("2,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1").unwrap();
        assert!(surface_predictor_sum(2, &scaled, &LatticeSet::Full, 400.0, SumOptions::default()).is_err());
    }

    #[test]
    fn ball_densities() {
        let n = QuadraticNorm::identity(2).unwrap();
        let full = ball_density_estimate(&LatticeSet::Full, &n, 50.0, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(full.ratio, 1.0);
        let c = ball_density_estimate(&LatticeSet::Coprime, &n, 1000.0, DEFAULT_POINT_BUDGET).unwrap();
        assert!((c.ratio - 1.0 / zeta(2)).abs() < 0.01);
        let p = LatticeSet::progression(vec![3, 2], vec![1, 1]).unwrap();
        let at = |r| (ball_density_estimate(&p, &n, r, DEFAULT_POINT_BUDGET).unwrap().ratio - 1.0 / 6.0).abs();
        assert!(at(1000.0) < 0.01);
        assert!(at(2000.0) < at(200.0));
        assert!(matches!(
            ball_density_estimate(&LatticeSet::Full, &n, 1e6, DEFAULT_POINT_BUDGET),
            Err(Error::PointBudget { .. })
        ));
    }
}

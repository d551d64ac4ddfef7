//! Rational-approximation experiments on the values `f_ℓ(b)`: continued
//! fraction statistics, the empirical approximation exponent constant,
//! prefix agreement across levels, and coefficient growth of the polynomial
//! convergents of `g_ℓ(z)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ln_bigint, ln_ratio, round_sig15};
use crate::contfrac::RegularCf;
use crate::polynomial::{expand_g, poly_cf, zpoly, Limits, PolyCf, PolyError};

/// Convergents with `q ≤ DEFAULT_K_CUTOFF` are left out of the K statistic.
pub const DEFAULT_K_CUTOFF: u64 = 16;

/// Ceiling used to call the normalized exponent "bounded" over a sweep. The
/// largest value on `b ≤ 10, ℓ ≤ 12` is about 1.29, at `(b, ℓ) = (2, 2)`,
/// and the values fall off as `ℓ` grows.
pub const NORMALIZED_EXPONENT_BOUND: f64 = 2.0;

/// Lowest level for which the approximation statistics are defined.
pub const MIN_STATS_LEVEL: u32 = 2;

fn check_base(b: u64) -> Result<(), PolyError> {
    if b < 2 {
        return Err(PolyError::InvalidParameters(format!("base must be ≥ 2, got {b}")));
    }
    Ok(())
}

/// `∏_{h=0}^{ℓ} (1 − b^{−2^h})` exactly.
///
/// Every factor `b^{2^h} − 1` is prime to `b`, so the reduced denominator
/// is exactly `b^{2^{ℓ+1}−1}` and no gcd is needed.
pub fn eval_f_at(level: u32, b: u64, limits: &Limits) -> Result<BigRational, PolyError> {
    check_base(b)?;
    let exponent = (1u128 << (level as u128 + 1).min(127)) - 1;
    limits.check("f_ℓ(b) denominator exponent", exponent)?;
    let base = BigInt::from(b);
    let mut num = BigInt::one();
    let mut power = base.clone(); // b^{2^h}
    for h in 0..=level {
        if h > 0 {
            power = &power * &power;
        }
        num *= &power - 1u8;
    }
    let den = num_traits::pow(base, exponent as usize);
    Ok(BigRational::new_raw(num, den))
}

/// `∏_{h=0}^{ℓ} (1 + u b^{−3^h} + v b^{−2·3^h})` exactly.
pub fn eval_ternary_product_at(u: i64, v: i64, level: u32, b: u64, limits: &Limits) -> Result<BigRational, PolyError> {
    check_base(b)?;
    let exponent = 3u128.checked_pow(level + 1).map(|n| n - 1).unwrap_or(u128::MAX);
    limits.check("ternary product denominator exponent", exponent)?;
    let base = BigInt::from(b);
    let mut value = BigRational::one();
    let mut power = base.clone(); // b^{3^h}
    for h in 0..=level {
        if h > 0 {
            power = &power * &power * &power;
        }
        let sq = &power * &power;
        let num = &sq + &power * u + BigInt::from(v);
        value *= BigRational::new(num, sq);
    }
    Ok(value)
}

/// Continued-fraction statistics of one value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfStats {
    pub b: u64,
    pub level: u32,
    /// Number of partial quotients after `a0`.
    pub length: usize,
    #[serde(serialize_with = "crate::arith::serialize_display")]
    pub max_quotient: BigInt,
    /// Empirical lower-bound witness for the approximation constant: the
    /// largest `log(1/(q²|x − p/q|)) / (log b · √(log q · log log q))` over
    /// eligible convergents. Not a proven constant.
    pub measured_k: Option<f64>,
    /// `L · √ℓ / 2^{ℓ/2}`
    pub measured_c: Option<f64>,
    /// `log_b(max quotient) / (√ℓ · 2^{ℓ/2} · √(log b · log log 3b))`
    pub normalized_exponent: Option<f64>,
}

/// `log(1/(q²|x − p/q|)) / (log b · √(log q · log log q))`, or `None` when
/// `p/q = x` or `q ≤ e` (where `log log q ≤ 0`).
pub fn k_statistic(x: &BigRational, p: &BigInt, q: &BigInt, b: u64) -> Option<f64> {
    if !q.is_positive() {
        return None;
    }
    // q²|x − p/q| = q |N q − p D| / D
    let gap = (x.numer() * q - p * x.denom()).abs();
    if gap.is_zero() {
        return None;
    }
    let ln_q = ln_bigint(q);
    if ln_q <= 1.0 {
        return None;
    }
    let log_term = ln_ratio(x.denom(), &(q * gap));
    Some(log_term / ((b as f64).ln() * (ln_q * ln_q.ln()).sqrt()))
}

/// Max of [`k_statistic`] over convergents with `q > cutoff`, excluding the
/// final (exact) one.
pub fn measured_k(x: &BigRational, cf: &RegularCf, b: u64, cutoff: u64) -> Option<f64> {
    let cutoff = BigInt::from(cutoff);
    cf.convergents_iter()
        .filter(|(_, q)| *q > cutoff)
        .filter_map(|(p, q)| k_statistic(x, &p, &q, b))
        .fold(None, |acc: Option<f64>, k| Some(acc.map_or(k, |a| a.max(k))))
}

/// Statistics of an arbitrary value attributed to `(b, ℓ)`.
pub fn cf_stats_of_value(x: &BigRational, b: u64, level: u32, cutoff: u64) -> CfStats {
    let cf = RegularCf::from_rational(x);
    let length = cf.len();
    let max_quotient = cf
        .max_quotient()
        .cloned()
        .unwrap_or_else(|| cf.a0().abs().max(BigInt::one()));
    let applicable = level >= MIN_STATS_LEVEL;
    let (measured_k, measured_c, normalized_exponent) = if applicable {
        let l = level as f64;
        let half_power = 2f64.powf(l / 2.0);
        let ln_b = (b as f64).ln();
        let k = measured_k(x, &cf, b, cutoff).map(round_sig15);
        let c = round_sig15(length as f64 * l.sqrt() / half_power);
        let scale = l.sqrt() * half_power * (ln_b * (3.0 * b as f64).ln().ln()).sqrt();
        let e = round_sig15(ln_bigint(&max_quotient) / ln_b / scale);
        (k, Some(c), Some(e))
    } else {
        (None, None, None)
    };
    CfStats {
        b,
        level,
        length,
        max_quotient,
        measured_k,
        measured_c,
        normalized_exponent,
    }
}

pub fn partial_quotient_stats(b: u64, level: u32, cutoff: u64, limits: &Limits) -> Result<CfStats, PolyError> {
    let x = eval_f_at(level, b, limits)?;
    Ok(cf_stats_of_value(&x, b, level, cutoff))
}

/// Grid of statistics, sorted by `(b, ℓ)`.
pub fn measure_k_sweep(bases: &[u64], levels: &[u32], cutoff: u64, limits: &Limits) -> Result<Vec<CfStats>, PolyError> {
    let mut cells: Vec<(u64, u32)> = bases
        .iter()
        .flat_map(|&b| levels.iter().map(move |&l| (b, l)))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells
        .par_iter()
        .map(|&(b, l)| partial_quotient_stats(b, l, cutoff, limits))
        .collect()
}

/// Largest measured K over a sweep.
pub fn sup_measured_k(stats: &[CfStats]) -> Option<f64> {
    stats
        .iter()
        .filter_map(|s| s.measured_k)
        .fold(None, |acc: Option<f64>, k| Some(acc.map_or(k, |a| a.max(k))))
}

/// `|x − p_k/q_k| < 1/q_k²` for every convergent other than `x` itself.
pub fn convergents_within_classical_bound(x: &BigRational, cf: &RegularCf) -> bool {
    cf.convergents_iter().all(|(p, q)| {
        let gap = (x.numer() * &q - p * x.denom()).abs();
        // |x − p/q| < 1/q²  ⇔  q |Nq − pD| < D
        gap.is_zero() || q * gap < *x.denom()
    })
}

pub const STATS_CSV_HEADER: &str = "b,ell,length,max_quotient,measured_K,measured_C,normalized_exponent";

pub fn format_decimal(x: Option<f64>) -> String {
    match x {
        Some(v) => round_sig15(v).to_string(),
        None => "NA".to_string(),
    }
}

pub fn stats_csv(stats: &[CfStats]) -> String {
    let mut out = String::from(STATS_CSV_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.b,
            s.level,
            s.length,
            s.max_quotient,
            format_decimal(s.measured_k),
            format_decimal(s.measured_c),
            format_decimal(s.normalized_exponent)
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub b: u64,
    pub level: u32,
    pub m: u32,
    /// Largest convergent index of `f_{ℓ+m}(b)` with `q_n ≤ b^{2^ℓ}`.
    pub n: usize,
    /// `max(0, n − 7)` partial quotients must coincide.
    pub required: usize,
    /// Observed length of the common prefix of partial quotients.
    pub common_prefix: usize,
    pub length_short: usize,
    pub length_long: usize,
    /// Index (1-based) of the first differing quotient, if any.
    pub divergence_index: Option<usize>,
}

impl PrefixReport {
    pub fn passed(&self) -> bool {
        self.common_prefix >= self.required
    }
}

/// Compares the expansions of `f_ℓ(b)` and `f_{ℓ+m}(b)`.
pub fn prefix_agreement(b: u64, level: u32, m: u32, limits: &Limits) -> Result<PrefixReport, PolyError> {
    let short = RegularCf::from_rational(&eval_f_at(level, b, limits)?);
    let long = RegularCf::from_rational(&eval_f_at(level + m, b, limits)?);
    Ok(compare_prefix(b, level, m, &short, &long))
}

/// [`prefix_agreement`] over a grid, expanding each `f_ℓ(b)` once. Sorted
/// by `(b, ℓ, m)`.
pub fn prefix_agreement_sweep(
    bases: &[u64],
    levels: &[u32],
    ms: &[u32],
    limits: &Limits,
) -> Result<Vec<PrefixReport>, PolyError> {
    let mut bases = bases.to_vec();
    bases.sort_unstable();
    bases.dedup();
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut needed: Vec<(u64, u32)> = bases
        .iter()
        .flat_map(|&b| {
            levels
                .iter()
                .flat_map(|&l| std::iter::once(0).chain(ms.iter().copied()).map(move |m| (b, l + m)))
                .collect::<Vec<_>>()
        })
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let cfs: std::collections::HashMap<(u64, u32), RegularCf> = needed
        .par_iter()
        .map(|&(b, l)| Ok(((b, l), RegularCf::from_rational(&eval_f_at(l, b, limits)?))))
        .collect::<Result<_, PolyError>>()?;
    let mut reports = Vec::new();
    for &b in &bases {
        for &l in &levels {
            for &m in &ms {
                reports.push(compare_prefix(b, l, m, &cfs[&(b, l)], &cfs[&(b, l + m)]));
            }
        }
    }
    Ok(reports)
}

fn compare_prefix(b: u64, level: u32, m: u32, short: &RegularCf, long: &RegularCf) -> PrefixReport {
    let bound = num_traits::pow(BigInt::from(b), 1usize << level);
    let n = long
        .convergents_iter()
        .take_while(|(_, q)| *q <= bound)
        .count()
        .saturating_sub(1);
    let required = n.saturating_sub(7);
    let (common_prefix, divergence_index) = if short.a0() != long.a0() {
        (0, Some(0))
    } else {
        let common = short
            .quotients()
            .iter()
            .zip(long.quotients())
            .take_while(|(x, y)| x == y)
            .count();
        let diverged = common < short.len().max(long.len());
        (common, diverged.then_some(common + 1))
    };
    PrefixReport {
        b,
        level,
        m,
        n,
        required,
        common_prefix,
        length_short: short.len(),
        length_long: long.len(),
        divergence_index,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceReport {
    pub b: u64,
    pub level: u32,
    pub q_max: u64,
    pub cutoff: u64,
    /// Best K over convergents with `cutoff < q ≤ q_max`.
    pub best_convergent_k: Option<f64>,
    /// Best K over reduced fractions with `cutoff < q ≤ q_max` that are not convergents.
    pub best_other_k: Option<f64>,
    pub best_other_fraction: Option<(String, String)>,
    pub fractions_checked: u64,
}

impl BruteForceReport {
    pub fn passed(&self) -> bool {
        match (self.best_convergent_k, self.best_other_k) {
            (_, None) => true,
            (Some(c), Some(o)) => o < c,
            (None, Some(_)) => false,
        }
    }
}

/// Evaluates the K statistic on every reduced fraction `p/q` with
/// `cutoff < q ≤ q_max` and `|x − p/q| ≤ 1`; fractions farther from `x`
/// have a negative statistic and cannot matter.
pub fn brute_force_k_check(
    b: u64,
    level: u32,
    q_max: u64,
    cutoff: u64,
    limits: &Limits,
) -> Result<BruteForceReport, PolyError> {
    let x = eval_f_at(level, b, limits)?;
    let cf = RegularCf::from_rational(&x);
    let table = cf.convergents();
    let convergents: std::collections::HashSet<(BigInt, BigInt)> =
        table.p.iter().cloned().zip(table.q.iter().cloned()).collect();
    let mut best_convergent: Option<f64> = None;
    let mut best_other: Option<(f64, BigInt, BigInt)> = None;
    let mut checked = 0u64;
    for q in (cutoff + 1)..=q_max {
        let q = BigInt::from(q);
        let centre = (x.numer() * &q).div_floor(x.denom());
        let mut p = &centre - &q;
        let end = &centre + &q + 1u8;
        while p <= end {
            if p.gcd(&q).is_one() {
                checked += 1;
                if let Some(k) = k_statistic(&x, &p, &q, b) {
                    if convergents.contains(&(p.clone(), q.clone())) {
                        best_convergent = Some(best_convergent.map_or(k, |c| c.max(k)));
                    } else if best_other.as_ref().is_none_or(|(o, _, _)| k > *o) {
                        best_other = Some((k, p.clone(), q.clone()));
                    }
                }
            }
            p += 1u8;
        }
    }
    Ok(BruteForceReport {
        b,
        level,
        q_max,
        cutoff,
        best_convergent_k: best_convergent,
        best_other_k: best_other.as_ref().map(|(k, _, _)| *k),
        best_other_fraction: best_other.map(|(_, p, q)| (p.to_string(), q.to_string())),
        fractions_checked: checked,
    })
}

/// Coefficient sizes of the `k`-th convergent of `g_ℓ(z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRecord {
    pub k: usize,
    /// `ln max |coefficient|` of the primitive integer numerator.
    pub log_max_abs_num_coeff: f64,
    pub log_max_abs_den_coeff: f64,
}

fn log_max_abs(coeffs: &[BigInt]) -> f64 {
    let max = coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    if max.is_zero() {
        return f64::NEG_INFINITY;
    }
    round_sig15(ln_bigint(&max))
}

/// Primitive integer `(numerator, denominator)` of the `k`-th convergent by
/// the top-down three-term recurrence, for `k = 1..=k_max`.
///
/// Runs fraction-free in `ℤ[z]`: `P̃_k = c_k P_k` with a rational scalar
/// `c_k`, and each pair is divided by its content as it is produced.
pub fn polynomial_convergents<F>(cf: &PolyCf, k_max: usize, mut visit: F)
where
    F: FnMut(usize, &[BigInt], &[BigInt]),
{
    let (a0, d0) = zpoly::clear(&cf.integer_part);
    // (P̃, Q̃, c) for k − 2 and k − 1; P_{−1} = 1, Q_{−1} = 0, P_0 = a0
    let mut prev = (vec![BigInt::one()], Vec::new(), BigRational::one());
    let mut cur = (a0, vec![d0.clone()], BigRational::from_integer(d0));
    for (i, a) in cf.quotients.iter().take(k_max).enumerate() {
        let (an, ad) = zpoly::clear(a);
        // c_{k−1} P_k = (A/d) P̃_{k−1} + r P̃_{k−2} with r = c_{k−1}/c_{k−2}
        let r = &cur.2 / &prev.2;
        let (rn, rd) = (r.numer(), r.denom());
        let step = |x: &[BigInt], y: &[BigInt]| {
            zpoly::combine(&BigInt::one(), &zpoly::mul(&zpoly::scale(rd, &an), x), &(&ad * rn), y)
        };
        let mut p = step(&cur.0, &prev.0);
        let mut q = step(&cur.1, &prev.1);
        let mut c = &cur.2 * BigRational::from_integer(&ad * rd);
        let g = zpoly::content([p.as_slice(), q.as_slice()]);
        if !g.is_zero() && !g.is_one() {
            zpoly::divide(&mut p, &g);
            zpoly::divide(&mut q, &g);
            c /= BigRational::from_integer(g);
        }
        let (mut num, mut den) = (p.clone(), q.clone());
        zpoly::make_primitive(&mut num, &mut den);
        visit(i + 1, &num, &den);
        prev = std::mem::replace(&mut cur, (p, q, c));
    }
}

/// Primitive integer pair of the `k`-th convergent by folding the first `k`
/// partial quotients bottom-up; independent of [`polynomial_convergents`].
pub fn convergent_by_fold(cf: &PolyCf, k: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    // tail = num/den; a + 1/tail = (A·num + d·den) / (d·num)
    let mut num = vec![BigInt::one()];
    let mut den: Vec<BigInt> = Vec::new();
    for a in cf.quotients[..k].iter().rev().chain(std::iter::once(&cf.integer_part)) {
        let (an, ad) = zpoly::clear(a);
        let next = zpoly::combine(&BigInt::one(), &zpoly::mul(&an, &num), &ad, &den);
        den = zpoly::scale(&ad, &num);
        num = next;
        zpoly::make_primitive(&mut num, &mut den);
    }
    (num, den)
}

pub fn convergent_growth(level: u32, k_max: usize, limits: &Limits) -> Result<Vec<GrowthRecord>, PolyError> {
    let cf = poly_cf(&expand_g(level, limits)?);
    let available = cf.quotients.len();
    if k_max > available {
        return Err(PolyError::InvalidParameters(format!(
            "k_max = {k_max} exceeds the {available} partial quotients of g_{level}"
        )));
    }
    Ok(growth_records(&cf, k_max))
}

pub fn growth_records(cf: &PolyCf, k_max: usize) -> Vec<GrowthRecord> {
    let mut records = Vec::with_capacity(k_max);
    polynomial_convergents(cf, k_max, |k, num, den| {
        records.push(GrowthRecord {
            k,
            log_max_abs_num_coeff: log_max_abs(num),
            log_max_abs_den_coeff: log_max_abs(den),
        });
    });
    records
}

pub const GROWTH_CSV_HEADER: &str = "ell,k,log_num_coeff,log_den_coeff";

pub fn growth_csv(level: u32, records: &[GrowthRecord]) -> String {
    let mut out = String::from(GROWTH_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            level,
            r.k,
            format_decimal(Some(r.log_max_abs_num_coeff)),
            format_decimal(Some(r.log_max_abs_den_coeff))
        ));
    }
    out
}

/// Envelope `c2 · k · ln(c1 · k)` for the log-coefficient sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEnvelope {
    pub c1: f64,
    pub c2: f64,
    /// Records with `k ≤ fit_until` determine `c2`.
    pub fit_until: usize,
    /// Records (any `k`) lying above the envelope.
    pub violations: Vec<usize>,
}

impl GrowthEnvelope {
    pub fn bound(&self, k: usize) -> f64 {
        let k = k as f64;
        self.c2 * k * (self.c1 * k).ln()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Fits `c2` (with `c1 = 2`, so the envelope is positive from `k = 1`) as the
/// smallest constant covering the records with `k ≤ fit_until`, then lists
/// every record above the envelope.
pub fn fit_growth_envelope(records: &[GrowthRecord], fit_until: usize) -> GrowthEnvelope {
    let c1 = 2.0;
    let size = |r: &GrowthRecord| r.log_max_abs_num_coeff.max(r.log_max_abs_den_coeff);
    let c2 = records
        .iter()
        .filter(|r| r.k <= fit_until)
        .map(|r| size(r) / (r.k as f64 * (c1 * r.k as f64).ln()))
        .fold(0.0f64, f64::max);
    let mut env = GrowthEnvelope {
        c1,
        c2,
        fit_until,
        violations: Vec::new(),
    };
    env.violations = records
        .iter()
        .filter(|r| size(r) > env.bound(r.k) * (1.0 + 1e-12))
        .map(|r| r.k)
        .collect();
    env
}

/// Deterministic sample of `count` indices evenly spread over `1..=k_max`.
pub fn sample_indices(k_max: usize, count: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (1..=count).map(|i| (i * k_max / count).max(1)).collect();
    ks.dedup();
    ks
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub level: u32,
    pub k_max: usize,
    pub records: Vec<GrowthRecord>,
    /// Indices at which the recurrence was checked against the fold.
    pub samples: Vec<usize>,
    pub fold_disagreements: Vec<usize>,
    pub envelope: GrowthEnvelope,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.records.len() == self.k_max && self.fold_disagreements.is_empty() && self.envelope.passed()
    }
}

/// Growth records for `k ≤ k_max`, cross-checked against the bottom-up fold
/// at `samples` evenly spread indices, with an envelope fitted on the first
/// half and tested on all records.
pub fn verify_growth(level: u32, k_max: usize, samples: usize, limits: &Limits) -> Result<GrowthReport, PolyError> {
    let cf = poly_cf(&expand_g(level, limits)?);
    let available = cf.quotients.len();
    if k_max == 0 || k_max > available {
        return Err(PolyError::InvalidParameters(format!(
            "k_max = {k_max} must lie in 1..={available} for g_{level}"
        )));
    }
    let ks = sample_indices(k_max, samples);
    let mut records = Vec::with_capacity(k_max);
    let mut sampled = Vec::new();
    polynomial_convergents(&cf, k_max, |k, num, den| {
        records.push(GrowthRecord {
            k,
            log_max_abs_num_coeff: log_max_abs(num),
            log_max_abs_den_coeff: log_max_abs(den),
        });
        if ks.binary_search(&k).is_ok() {
            sampled.push((k, num.to_vec(), den.to_vec()));
        }
    });
    let fold_disagreements = sampled
        .into_par_iter()
        .filter(|(k, num, den)| convergent_by_fold(&cf, *k) != (num.clone(), den.clone()))
        .map(|(k, _, _)| k)
        .collect();
    let envelope = fit_growth_envelope(&records, k_max.div_ceil(2));
    Ok(GrowthReport {
        level,
        k_max,
        records,
        samples: ks,
        fold_disagreements,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::polynomial::{primitive_integer_pair, Limits};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn eval_f_examples() {
        assert_eq!(eval_f_at(1, 2, &lim()).unwrap(), rational(3, 8));
        assert_eq!(eval_f_at(2, 2, &lim()).unwrap(), rational(45, 128));
        let x = eval_f_at(2, 3, &lim()).unwrap();
        assert_eq!(x, rational(1280, 2187));
        assert_eq!(x.denom(), &BigInt::from(2187));
        assert!(eval_f_at(1, 1, &lim()).is_err());
        assert!(eval_f_at(17, 2, &lim()).is_err());
    }

    #[test]
    fn eval_f_denominator_is_exact_power() {
        for b in 2..=10u64 {
            for level in 0..=9u32 {
                let x = eval_f_at(level, b, &lim()).unwrap();
                // new_raw skipped the gcd; check the value is reduced
                assert!(x.numer().gcd(x.denom()).is_one());
                let e = (1usize << (level + 1)) - 1;
                assert_eq!(x.denom(), &num_traits::pow(BigInt::from(b), e));
                // and matches the plain product
                let mut prod = BigRational::one();
                for h in 0..=level {
                    let p = num_traits::pow(BigInt::from(b), 1usize << h);
                    prod *= BigRational::new(&p - 1u8, p);
                }
                assert_eq!(x, prod);
            }
        }
    }

    #[test]
    fn ternary_product_values() {
        assert_eq!(eval_ternary_product_at(-1, -1, 0, 2, &lim()).unwrap(), rational(1, 4));
        assert_eq!(eval_ternary_product_at(-1, -1, 0, 3, &lim()).unwrap(), rational(5, 9));
        assert_eq!(
            eval_ternary_product_at(-1, -1, 1, 2, &lim()).unwrap(),
            rational(55, 256)
        );
    }

    #[test]
    fn stats_examples() {
        let s = partial_quotient_stats(2, 2, DEFAULT_K_CUTOFF, &lim()).unwrap();
        assert_eq!((s.length, s.max_quotient.clone()), (5, BigInt::from(5)));
        assert!(s.measured_k.is_some());
        let s = partial_quotient_stats(2, 1, DEFAULT_K_CUTOFF, &lim()).unwrap();
        assert_eq!((s.length, s.max_quotient.clone()), (3, BigInt::from(2)));
        assert_eq!(s.measured_k, None);
        assert_eq!(s.normalized_exponent, None);
    }

    #[test]
    fn measured_k_hand_value() {
        // f_2(2) = 45/128 = [0; 2, 1, 5, 2, 3], convergents with q > 16:
        // 17 (p = 6) and 37 (p = 13); q = 128 is the value itself
        let x = rational(45, 128);
        let cf = RegularCf::from_rational(&x);
        let stat = |p: i64, q: i64| {
            let gap = (45 * q - 128 * p).abs() as f64;
            let ln_q = (q as f64).ln();
            (128.0 / (q as f64 * gap)).ln() / (2f64.ln() * (ln_q * ln_q.ln()).sqrt())
        };
        let expected = stat(6, 17).max(stat(13, 37));
        let got = measured_k(&x, &cf, 2, 16).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn k_statistic_excludes_exact_and_small() {
        let x = rational(45, 128);
        assert_eq!(k_statistic(&x, &BigInt::from(45), &BigInt::from(128), 2), None);
        assert_eq!(k_statistic(&x, &BigInt::from(1), &BigInt::from(2), 2), None);
    }

    #[test]
    fn max_quotient_bounded_by_denominator() {
        for b in [2u64, 3, 7] {
            for level in 0..=7 {
                let x = eval_f_at(level, b, &lim()).unwrap();
                let s = cf_stats_of_value(&x, b, level, 16);
                assert!(&s.max_quotient <= x.denom());
                assert!(convergents_within_classical_bound(&x, &RegularCf::from_rational(&x)));
            }
        }
    }

    #[test]
    fn csv_layout() {
        let s = partial_quotient_stats(2, 2, 16, &lim()).unwrap();
        let csv = stats_csv(&[s]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(STATS_CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("2,2,5,5,"));
    }

    #[test]
    fn prefix_examples() {
        let r = prefix_agreement(2, 2, 1, &lim()).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = prefix_agreement(2, 8, 4, &lim()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.common_prefix >= r.required);
        let r = prefix_agreement(3, 5, 0, &lim()).unwrap();
        assert_eq!(r.common_prefix, r.length_short);
        assert_eq!(r.divergence_index, None);
    }

    #[test]
    fn prefix_sweep_matches_single_calls() {
        let sweep = prefix_agreement_sweep(&[3, 2], &[2, 3, 4], &[2, 1], &lim()).unwrap();
        assert_eq!(sweep.len(), 12);
        assert_eq!((sweep[0].b, sweep[0].level, sweep[0].m), (2, 2, 1));
        for r in &sweep {
            assert_eq!(r, &prefix_agreement(r.b, r.level, r.m, &lim()).unwrap());
        }
    }

    #[test]
    fn growth_first_records() {
        let recs = convergent_growth(3, 16, &lim()).unwrap();
        assert_eq!(recs.len(), 16);
        assert_eq!(recs[0].k, 1);
        assert_eq!(recs[0].log_max_abs_num_coeff, 0.0);
        assert_eq!(recs[0].log_max_abs_den_coeff, 0.0);
        assert!(convergent_growth(3, 17, &lim()).is_err());
    }

    #[test]
    fn fold_matches_recurrence() {
        let cf = poly_cf(&expand_g(4, &lim()).unwrap());
        let mut pairs = Vec::new();
        polynomial_convergents(&cf, 32, |k, n, d| pairs.push((k, n.to_vec(), d.to_vec())));
        for (k, n, d) in pairs {
            assert_eq!(convergent_by_fold(&cf, k), (n.clone(), d.clone()), "k = {k}");
            // against the rational-arithmetic reconstruction
            let truncated = PolyCf {
                integer_part: cf.integer_part.clone(),
                quotients: cf.quotients[..k].to_vec(),
            };
            let rf = truncated.reconstruct();
            assert_eq!(primitive_integer_pair(rf.num(), rf.den()), (n, d), "k = {k}");
        }
    }

    #[test]
    fn growth_report_small() {
        assert_eq!(sample_indices(2048, 20)[..2], [102, 204]);
        assert_eq!(sample_indices(5, 20), vec![1, 2, 3, 4, 5]);
        let r = verify_growth(5, 64, 20, &lim()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.samples.len(), 20);
        assert_eq!(r.records, convergent_growth(5, 64, &lim()).unwrap());
        assert!(verify_growth(5, 65, 20, &lim()).is_err());
        assert!(verify_growth(5, 0, 20, &lim()).is_err());
    }

    #[test]
    fn envelope_fit() {
        let recs: Vec<GrowthRecord> = (1..=100)
            .map(|k| GrowthRecord {
                k,
                log_max_abs_num_coeff: (k as f64).sqrt(),
                log_max_abs_den_coeff: 0.5 * (k as f64).sqrt(),
            })
            .collect();
        let env = fit_growth_envelope(&recs, 50);
        assert!(env.passed());
        let mut bad = recs.clone();
        bad[99].log_max_abs_num_coeff = 1e6;
        assert_eq!(fit_growth_envelope(&bad, 50).violations, vec![100]);
    }
}

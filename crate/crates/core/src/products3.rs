//! The α/β recurrences for `∏ (1 + u z^{−3^h} + v z^{−2·3^h})`, the 2-adic
//! pattern of the `u = v = −1` system, and the stacked-fraction identity.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{cf_stats_of_value, eval_ternary_product_at, CfStats};
use crate::arith::{format_rational, integer, nu2, ExactRational, Valuation};
use crate::contfrac::{ContFracError, GeneralizedCf};
use crate::polynomial::{check_uv, expand_gtilde, Limits, Poly, PolyError};
use crate::thuemorse::{first_divergence, Divergence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Products3Error {
    #[error("vanishing beta at (ℓ = {level}, j = {index})")]
    VanishingBeta { level: u32, index: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
}

/// `α_1 … α_{3^{ℓ+1}}` and `β_1 … β_{3^{ℓ+1}}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaBetaTable {
    pub level: u32,
    pub u: i64,
    pub v: i64,
    #[serde(serialize_with = "serialize_rationals")]
    alpha: Vec<ExactRational>,
    #[serde(serialize_with = "serialize_rationals")]
    beta: Vec<ExactRational>,
}

fn serialize_rationals<S: serde::Serializer>(xs: &[ExactRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

impl AlphaBetaTable {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `α_j`, 1-based.
    pub fn alpha(&self, j: usize) -> &ExactRational {
        &self.alpha[j - 1]
    }

    /// `β_j`, 1-based.
    pub fn beta(&self, j: usize) -> &ExactRational {
        &self.beta[j - 1]
    }

    pub fn alphas(&self) -> &[ExactRational] {
        &self.alpha
    }

    pub fn betas(&self) -> &[ExactRational] {
        &self.beta
    }

    /// 1-based indices of vanishing β (never used as a divisor).
    pub fn zero_betas(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&j| self.beta(j).is_zero()).collect()
    }

    /// Terms `β_j / (z + α_j)`. `None` if some β vanishes.
    pub fn gcf(&self) -> Option<GeneralizedCf> {
        GeneralizedCf::from_pairs(
            self.alpha
                .iter()
                .zip(&self.beta)
                .map(|(a, b)| (Poly::constant(b.clone()), Poly::linear(a.clone()))),
        )
        .ok()
    }

    fn base(u: i64, v: i64) -> Self {
        let (uq, vq) = (integer(u), integer(v));
        let d = &uq * &uq - &vq;
        let alpha = vec![
            -uq.clone(),
            (&uq * &uq * &uq - integer(2) * &uq * &vq) / &d,
            &uq * &vq / &d,
        ];
        let beta = vec![BigRational::one(), d.clone(), &vq * &vq * &vq / (&d * &d)];
        AlphaBetaTable {
            level: 0,
            u,
            v,
            alpha,
            beta,
        }
    }

    fn next(&self) -> Result<Self, Products3Error> {
        let level = self.level + 1;
        let (u, v) = (integer(self.u), integer(self.v));
        let d = &u * &u - &v;
        let n = 3usize.pow(level + 1);
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        alpha.extend([
            -u.clone(),
            (&u * &u * &u - integer(2) * &u * &v + &u) / &d,
            (&u * &v - &u) / &d,
        ]);
        let u2 = &u * &u;
        beta.extend([
            BigRational::one(),
            d.clone(),
            (&u2 * &u2 - integer(3) * &u2 * &v + &v * &v * &v + &u2) / (&d * &d),
        ]);
        let vanishing = |index: usize| Products3Error::VanishingBeta { level, index };
        // 1-based: j = 3k + 4 … 3k + 6 lands at 0-based 3k + 3 … 3k + 5
        for k in 0..3usize.pow(level) - 1 {
            let b2 = &beta[3 * k + 1];
            let b3 = &beta[3 * k + 2];
            if b2.is_zero() {
                return Err(vanishing(3 * k + 2));
            }
            if b3.is_zero() {
                return Err(vanishing(3 * k + 3));
            }
            let b4 = self.beta(k + 2) / (b3 * b2);
            let b5 = &d - &b4;
            if b5.is_zero() {
                return Err(vanishing(3 * k + 5));
            }
            let a5 = &u - (self.alpha(k + 2) + &u * &v - &alpha[3 * k + 1] * &b4) / &b5;
            let a6 = &u - &a5;
            let b6 = &v - &a5 * &a6;
            alpha.extend([-u.clone(), a5, a6]);
            beta.extend([b4, b5, b6]);
        }
        Ok(AlphaBetaTable {
            level,
            u: self.u,
            v: self.v,
            alpha,
            beta,
        })
    }
}

/// Builds the tables level by level up to `level`. A zero β only fails the
/// build when it would be used as a divisor.
pub fn alphabeta_table(u: i64, v: i64, level: u32) -> Result<AlphaBetaTable, Products3Error> {
    check_uv(u, v)?;
    let mut table = AlphaBetaTable::base(u, v);
    while table.level < level {
        table = table.next()?;
    }
    Ok(table)
}

/// The two indices `(3^{ℓ+1}+1)/2` and `(3^{ℓ+1}+3)/2`.
pub fn tm3_exceptional_indices(level: u32) -> (usize, usize) {
    let n = 3usize.pow(level + 1);
    // n is odd
    (n / 2 + 1, n / 2 + 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tm3Mismatch {
    pub sequence: &'static str,
    pub index: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tm3Report {
    pub level: u32,
    pub exceptional_indices: (usize, usize),
    pub alpha_valuations: Vec<String>,
    pub beta_valuations: Vec<String>,
    /// 1-based indices where `ν₂(α_j) = −1`.
    pub alpha_minus_one: Vec<usize>,
    pub zero_betas: Vec<usize>,
    pub mismatches: Vec<Tm3Mismatch>,
    /// β clauses as printed: `ν₂(β_2) = 1` and `ν₂(β_j) = −2` exactly at the
    /// second exceptional index. The printed closing clause repeats `β_2`
    /// and is read in the corrected form below.
    pub literal_beta_clauses_hold: bool,
    /// Corrected reading: additionally `ν₂(β_j) = 0` at every other `j`.
    pub corrected_beta_clauses_hold: bool,
}

impl Tm3Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_tm3_pattern(table: &AlphaBetaTable) -> Tm3Report {
    let (e1, e2) = tm3_exceptional_indices(table.level);
    let mut mismatches = Vec::new();
    let mut alpha_valuations = Vec::with_capacity(table.len());
    let mut beta_valuations = Vec::with_capacity(table.len());
    let mut alpha_minus_one = Vec::new();
    let mut literal = true;
    let mut corrected = true;
    for j in 1..=table.len() {
        let na = nu2(table.alpha(j));
        let alpha_ok = if j == e1 || j == e2 {
            na == Valuation::Finite(-1)
        } else {
            matches!(na, Valuation::Finite(x) if x >= 0)
        };
        if !alpha_ok {
            let expected = if j == e1 || j == e2 { "-1" } else { ">= 0, nonzero" };
            mismatches.push(Tm3Mismatch {
                sequence: "alpha",
                index: j,
                expected: expected.to_string(),
                actual: na.to_string(),
            });
        }
        if na == Valuation::Finite(-1) {
            alpha_minus_one.push(j);
        }

        let nb = nu2(table.beta(j));
        let is_literal_ok = if j == 2 {
            nb == Valuation::Finite(1)
        } else {
            (nb == Valuation::Finite(-2)) == (j == e2)
        };
        let expected = if j == 2 {
            1
        } else if j == e2 {
            -2
        } else {
            0
        };
        let is_corrected_ok = nb == Valuation::Finite(expected);
        literal &= is_literal_ok;
        corrected &= is_corrected_ok;
        if !is_corrected_ok {
            mismatches.push(Tm3Mismatch {
                sequence: "beta",
                index: j,
                expected: expected.to_string(),
                actual: nb.to_string(),
            });
        }
        alpha_valuations.push(na.to_string());
        beta_valuations.push(nb.to_string());
    }
    Tm3Report {
        level: table.level,
        exceptional_indices: (e1, e2),
        alpha_valuations,
        beta_valuations,
        alpha_minus_one,
        zero_betas: table.zero_betas(),
        mismatches,
        literal_beta_clauses_hold: literal,
        corrected_beta_clauses_hold: corrected,
    }
}

pub const VALUATION_CSV_HEADER: &str = "ell,j,alpha,beta,nu2_alpha,nu2_beta";

pub fn valuation_csv(table: &AlphaBetaTable) -> String {
    let mut out = String::from(VALUATION_CSV_HEADER);
    out.push('\n');
    for j in 1..=table.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            table.level,
            j,
            table.alpha(j),
            table.beta(j),
            nu2(table.alpha(j)),
            nu2(table.beta(j))
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GtildeReport {
    pub u: i64,
    pub v: i64,
    pub level: u32,
    pub terms: usize,
    /// First zero β met, either as a divisor while building the tables or
    /// stored in the final table. The identity is not evaluated then.
    pub vanishing_beta: Option<(u32, usize)>,
    pub identity_holds: Option<bool>,
    pub first_divergence: Option<Divergence>,
    /// `α_2` at level 0 and at higher levels as given by the two seed
    /// formulas; they differ by `u/(u² − v)`.
    pub alpha2_seed_level0: String,
    pub alpha2_seed_higher: String,
}

impl GtildeReport {
    pub fn evaluated(&self) -> bool {
        self.identity_holds.is_some()
    }

    pub fn passed(&self) -> bool {
        self.identity_holds == Some(true)
    }
}

/// Compares the stacked fraction `Σ β_j/(z + α_j)` with the expanded product.
pub fn verify_gtilde_identity(u: i64, v: i64, level: u32, limits: &Limits) -> Result<GtildeReport, Products3Error> {
    let expected = expand_gtilde(u, v, level, limits)?;
    let level0 = AlphaBetaTable::base(u, v);
    let (uq, vq) = (integer(u), integer(v));
    let d = &uq * &uq - &vq;
    let seed_higher = (&uq * &uq * &uq - integer(2) * &uq * &vq + &uq) / &d;
    let mut report = GtildeReport {
        u,
        v,
        level,
        terms: 3usize.pow(level + 1),
        vanishing_beta: None,
        identity_holds: None,
        first_divergence: None,
        alpha2_seed_level0: format_rational(level0.alpha(2)),
        alpha2_seed_higher: format_rational(&seed_higher),
    };
    let table = match alphabeta_table(u, v, level) {
        Ok(t) => t,
        Err(Products3Error::VanishingBeta { level, index }) => {
            report.vanishing_beta = Some((level, index));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let Some(gcf) = table.gcf() else {
        report.vanishing_beta = Some((level, table.zero_betas()[0]));
        return Ok(report);
    };
    let value = gcf.eval()?;
    report.first_divergence = first_divergence(&expected, &value);
    report.identity_holds = Some(report.first_divergence.is_none());
    Ok(report)
}

/// Statistics of the regular CF of `∏_{h ≤ ℓ} (1 − b^{−3^h} − b^{−2·3^h})`,
/// computed exactly as for `f_ℓ(b)`.
pub fn gtilde_rcf_stats(b: u64, level: u32, cutoff: u64, limits: &Limits) -> Result<CfStats, PolyError> {
    let x = eval_ternary_product_at(-1, -1, level, b, limits)?;
    Ok(cf_stats_of_value(&x, b, level, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::contfrac::RegularCf;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn rats(xs: &[(i64, i64)]) -> Vec<ExactRational> {
        xs.iter().map(|&(p, q)| rational(p, q)).collect()
    }

    #[test]
    fn specialised_level0() {
        let t = alphabeta_table(-1, -1, 0).unwrap();
        assert_eq!(t.alphas(), rats(&[(1, 1), (-3, 2), (1, 2)]).as_slice());
        assert_eq!(t.betas(), rats(&[(1, 1), (2, 1), (-1, 4)]).as_slice());
    }

    #[test]
    fn specialised_higher_seeds_and_level1() {
        let t = alphabeta_table(-1, -1, 1).unwrap();
        assert_eq!(&t.alphas()[..3], rats(&[(1, 1), (-2, 1), (1, 1)]).as_slice());
        assert_eq!(&t.betas()[..3], rats(&[(1, 1), (2, 1), (1, 1)]).as_slice());
        assert_eq!(
            t.alphas(),
            rats(&[
                (1, 1),
                (-2, 1),
                (1, 1),
                (1, 1),
                (-5, 2),
                (3, 2),
                (1, 1),
                (-37, 23),
                (14, 23)
            ])
            .as_slice()
        );
        assert_eq!(
            t.betas(),
            rats(&[
                (1, 1),
                (2, 1),
                (1, 1),
                (1, 1),
                (1, 1),
                (11, 4),
                (-1, 11),
                (23, 11),
                (-11, 529)
            ])
            .as_slice()
        );
    }

    #[test]
    fn general_level0_example() {
        let t = alphabeta_table(2, 1, 0).unwrap();
        assert_eq!(t.alpha(2), &rational(4, 3));
        assert_eq!(t.beta(2), &rational(3, 1));
        assert_eq!(t.beta(3), &rational(1, 9));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(alphabeta_table(0, 1, 0), Err(Products3Error::Poly(_))));
        assert!(matches!(alphabeta_table(2, 4, 0), Err(Products3Error::Poly(_))));
        assert!(matches!(alphabeta_table(1, 1, 0), Err(Products3Error::Poly(_))));
    }

    #[test]
    fn tm3_level0() {
        let r = verify_tm3_pattern(&alphabeta_table(-1, -1, 0).unwrap());
        assert_eq!(r.alpha_valuations, ["0", "-1", "-1"]);
        assert_eq!(r.beta_valuations, ["0", "1", "-2"]);
        assert_eq!(r.exceptional_indices, (2, 3));
        assert!(r.passed() && r.literal_beta_clauses_hold && r.corrected_beta_clauses_hold);
    }

    #[test]
    fn tm3_level1() {
        let r = verify_tm3_pattern(&alphabeta_table(-1, -1, 1).unwrap());
        assert_eq!(r.alpha_minus_one, vec![5, 6]);
        assert!(r.zero_betas.is_empty());
        assert!(r.passed(), "{:?}", r.mismatches);
    }

    #[test]
    fn tm3_pattern_small_levels() {
        for level in 0..=4 {
            let r = verify_tm3_pattern(&alphabeta_table(-1, -1, level).unwrap());
            assert!(r.passed(), "ℓ = {level}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn tm3_flags_a_broken_table() {
        let mut t = alphabeta_table(-1, -1, 1).unwrap();
        t.beta[3] = rational(1, 2);
        let r = verify_tm3_pattern(&t);
        assert!(!r.passed());
        assert!(!r.corrected_beta_clauses_hold);
        assert!(r.literal_beta_clauses_hold);
        assert_eq!(r.mismatches[0].index, 4);
    }

    #[test]
    fn identity_specialised() {
        for (level, terms) in [(0, 3), (1, 9), (2, 27)] {
            let r = verify_gtilde_identity(-1, -1, level, &lim()).unwrap();
            assert_eq!(r.terms, terms);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn identity_level0_value() {
        let t = alphabeta_table(-1, -1, 0).unwrap();
        let value = t.gcf().unwrap().eval().unwrap();
        assert_eq!(value.num(), &Poly::from_ints(&[-1, -1, 1]));
        assert_eq!(value.den(), &Poly::monomial(BigRational::one(), 3));
    }

    #[test]
    fn identity_general_pairs() {
        for (u, v) in [(2, 1), (1, 2), (3, -2), (1, -1), (-2, 3)] {
            for level in 0..=1 {
                let r = verify_gtilde_identity(u, v, level, &lim()).unwrap();
                assert!(r.passed(), "({u}, {v}, {level}): {r:?}");
            }
        }
    }

    #[test]
    fn vanishing_beta_is_reported() {
        let err = alphabeta_table(2, 1, 2).unwrap_err();
        assert!(matches!(err, Products3Error::VanishingBeta { level: 2, .. }), "{err:?}");
        let r = verify_gtilde_identity(2, 1, 2, &lim()).unwrap();
        assert!(!r.evaluated());
        assert!(r.vanishing_beta.is_some());
    }

    #[test]
    fn seed_difference_is_reported() {
        let r = verify_gtilde_identity(2, 1, 1, &lim()).unwrap();
        assert_eq!(r.alpha2_seed_level0, "4/3");
        assert_eq!(r.alpha2_seed_higher, "2");
    }

    #[test]
    fn sum_rules() {
        for level in 1..=4 {
            let t = alphabeta_table(-1, -1, level).unwrap();
            for k in 0..3usize.pow(level) - 1 {
                assert_eq!(t.alpha(3 * k + 5) + t.alpha(3 * k + 6), rational(-1, 1));
                assert_eq!(t.beta(3 * k + 4) + t.beta(3 * k + 5), rational(2, 1));
                assert_eq!(t.alpha(3 * k + 4), &rational(1, 1));
            }
        }
        let t = alphabeta_table(3, -2, 2).unwrap();
        for k in 0..8 {
            assert_eq!(t.alpha(3 * k + 5) + t.alpha(3 * k + 6), rational(3, 1));
            assert_eq!(t.beta(3 * k + 4) + t.beta(3 * k + 5), rational(11, 1));
        }
    }

    #[test]
    fn rcf_stats_examples() {
        let x = eval_ternary_product_at(-1, -1, 0, 2, &lim()).unwrap();
        assert_eq!(RegularCf::from_rational(&x).to_string(), "[0; 4]");
        let x = eval_ternary_product_at(-1, -1, 0, 3, &lim()).unwrap();
        assert_eq!(RegularCf::from_rational(&x).to_string(), "[0; 1, 1, 4]");
        let s = gtilde_rcf_stats(2, 1, 16, &lim()).unwrap();
        let cf = RegularCf::from_rational(&rational(55, 256));
        assert_eq!(s.length, cf.len());
        assert_eq!(&s.max_quotient, cf.max_quotient().unwrap());
        assert!(gtilde_rcf_stats(3, 0, 16, &lim()).unwrap().measured_k.is_none());
        assert_eq!(
            gtilde_rcf_stats(2, 0, 16, &lim()).unwrap().max_quotient,
            BigInt::from(4)
        );
    }

    #[test]
    fn json_dump() {
        let t = alphabeta_table(-1, -1, 0).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"level":0,"u":-1,"v":-1,"alpha":["1","-3/2","1/2"],"beta":["1","2","-1/4"]}"#
        );
        assert!(valuation_csv(&t).ends_with("0,3,1/2,-1/4,-1,-2\n"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn level0_closed_forms(u in -50i64..50, v in -50i64..50) {
            prop_assume!(u != 0 && v != 0 && u * u != v);
            let t = alphabeta_table(u, v, 0).unwrap();
            let (uq, vq) = (integer(u), integer(v));
            let d = &uq * &uq - &vq;
            prop_assert_eq!(t.alpha(1), &-uq.clone());
            prop_assert_eq!(t.alpha(2), &((&uq * &uq * &uq - integer(2) * &uq * &vq) / &d));
            prop_assert_eq!(t.alpha(3), &(&uq * &vq / &d));
            prop_assert_eq!(t.beta(1), &BigRational::one());
            prop_assert_eq!(t.beta(2), &d);
            let denom = &uq * &uq * &uq * &uq - integer(2) * &uq * &uq * &vq + &vq * &vq;
            prop_assert_eq!(t.beta(3), &(&vq * &vq * &vq / denom));
            // level-0 identity holds for every admissible pair
            prop_assert!(verify_gtilde_identity(u, v, 0, &Limits::default()).unwrap().passed());
        }
    }
}

//! The rational constants `v^(ℓ)_j`, their 2-adic valuation pattern, and the
//! verification of the linear-denominator continued fraction of `g_ℓ(z)`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{format_rational, integer, nu2, ExactRational, Valuation};
use crate::contfrac::{ContFracError, GeneralizedCf};
use crate::polynomial::{expand_g, poly_cf, Limits, Poly, PolyError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThueMorseError {
    #[error("zero divisor in the v recurrence at (ℓ = {level}, j = {index})")]
    ZeroDivisor { level: u32, index: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
}

/// `v^(ℓ)_0 … v^(ℓ)_{2^{ℓ+1}−1}` for one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VTable {
    level: u32,
    values: Vec<ExactRational>,
}

impl VTable {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn get(&self, j: usize) -> &ExactRational {
        &self.values[j]
    }

    fn base() -> VTable {
        VTable {
            level: 0,
            values: vec![integer(1), integer(1)],
        }
    }

    /// Level `ℓ + 1` from level `ℓ`:
    /// `v_{2j} = −v^(ℓ)_j / v_{2j−1}`, `v_{2j+1} = 1 + (−1)^j − v_{2j}`.
    fn next(&self) -> Result<VTable, ThueMorseError> {
        let level = self.level + 1;
        let len = 1usize << (level + 1);
        let mut values = Vec::with_capacity(len);
        values.push(integer(1));
        values.push(integer(2));
        for j in 1..len / 2 {
            let divisor = &values[2 * j - 1];
            if divisor.is_zero() {
                return Err(ThueMorseError::ZeroDivisor {
                    level,
                    index: 2 * j - 1,
                });
            }
            let even = -(&self.values[j] / divisor);
            let odd = integer(if j % 2 == 0 { 2 } else { 0 }) - &even;
            values.push(even);
            values.push(odd);
        }
        if let Some(index) = values.iter().position(Zero::is_zero) {
            return Err(ThueMorseError::ZeroDivisor { level, index });
        }
        Ok(VTable { level, values })
    }
}

/// Level-by-level memo of `v` tables; level `ℓ` is built from level `ℓ − 1`.
#[derive(Debug, Clone, Default)]
pub struct VTableCache {
    tables: Vec<VTable>,
}

impl VTableCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, level: u32) -> Result<&VTable, ThueMorseError> {
        if self.tables.is_empty() {
            self.tables.push(VTable::base());
        }
        while self.tables.len() <= level as usize {
            let next = self.tables.last().expect("nonempty").next()?;
            self.tables.push(next);
        }
        Ok(&self.tables[level as usize])
    }
}

pub fn v_table(level: u32) -> Result<VTable, ThueMorseError> {
    VTableCache::new().get(level).cloned()
}

/// Predicted `ν₂(v^(ℓ)_j)`: 1 at `j = 1`, −1 at `j = 2^ℓ, 2^ℓ + 1` (for
/// `ℓ ≥ 1`), 0 elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationPattern {
    pub level: u32,
}

impl ValuationPattern {
    pub fn expected(&self, j: usize) -> i64 {
        if self.level == 0 {
            return 0;
        }
        let mid = 1usize << self.level;
        match j {
            1 => 1,
            _ if j == mid || j == mid + 1 => -1,
            _ => 0,
        }
    }

    pub fn to_vec(&self) -> Vec<i64> {
        (0..1usize << (self.level + 1)).map(|j| self.expected(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationMismatch {
    pub index: usize,
    pub expected: i64,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub level: u32,
    pub valuations: Vec<String>,
    pub mismatches: Vec<ValuationMismatch>,
}

impl ValuationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_valuation_pattern(table: &VTable) -> ValuationReport {
    let pattern = ValuationPattern { level: table.level };
    let mut valuations = Vec::with_capacity(table.values.len());
    let mut mismatches = Vec::new();
    for (j, v) in table.values.iter().enumerate() {
        let actual = nu2(v);
        let expected = pattern.expected(j);
        if actual != Valuation::Finite(expected) {
            mismatches.push(ValuationMismatch {
                index: j,
                expected,
                actual: actual.to_string(),
            });
        }
        valuations.push(actual.to_string());
    }
    ValuationReport {
        level: table.level,
        valuations,
        mismatches,
    }
}

/// `v_0/(z+1) + v_1/(z−1) + v_2/(z+1) + …` with the alternating shifts.
pub fn build_tm_gcf(table: &VTable) -> GeneralizedCf {
    let plus = Poly::from_ints(&[1, 1]);
    let minus = Poly::from_ints(&[-1, 1]);
    GeneralizedCf::from_pairs(table.values.iter().enumerate().map(|(j, v)| {
        let den = if j % 2 == 0 { plus.clone() } else { minus.clone() };
        (Poly::constant(v.clone()), den)
    }))
    .expect("v values are nonzero")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub part: &'static str,
    pub index: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FzfracReport {
    pub level: u32,
    pub terms: usize,
    pub identity_holds: bool,
    pub first_divergence: Option<Divergence>,
    pub quotient_count: usize,
    pub expected_quotient_count: usize,
    pub all_degree_one: bool,
    /// Leading coefficients of the polynomial partial quotients.
    pub leading_coefficients: Vec<String>,
}

impl FzfracReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.all_degree_one && self.quotient_count == self.expected_quotient_count
    }
}

pub(crate) fn first_divergence(expected: &RationalFunction, actual: &RationalFunction) -> Option<Divergence> {
    for (part, e, a) in [
        ("numerator", expected.num(), actual.num()),
        ("denominator", expected.den(), actual.den()),
    ] {
        let n = e.coeffs().len().max(a.coeffs().len());
        if let Some(index) = (0..n).find(|&i| e.coeff(i) != a.coeff(i)) {
            return Some(Divergence {
                part,
                index,
                expected: format_rational(&e.coeff(index)),
                actual: format_rational(&a.coeff(index)),
            });
        }
    }
    None
}

/// Checks `gcf_eval(build_tm_gcf(ℓ)) = g_ℓ(z)` and that the Euclidean
/// expansion of `g_ℓ` has `2^{ℓ+1}` partial quotients, all linear.
pub fn verify_fzfrac(cache: &mut VTableCache, level: u32, limits: &Limits) -> Result<FzfracReport, ThueMorseError> {
    let g = expand_g(level, limits)?;
    let gcf = build_tm_gcf(cache.get(level)?);
    let value = gcf.eval()?;
    let divergence = first_divergence(&g, &value);
    let cf = poly_cf(&g);
    let degrees = cf.degrees();
    Ok(FzfracReport {
        level,
        terms: gcf.len(),
        identity_holds: divergence.is_none(),
        first_divergence: divergence,
        quotient_count: cf.quotients.len(),
        expected_quotient_count: 1usize << (level + 1),
        all_degree_one: cf.integer_part.is_zero() && degrees.iter().all(|&d| d == 1),
        leading_coefficients: cf
            .quotients
            .iter()
            .map(|q| format_rational(q.leading().expect("nonzero quotient")))
            .collect(),
    })
}

/// `gcf_eval(build_tm_gcf(ℓ + 1)) = (z − 1) g_ℓ(z²)`.
pub fn verify_substitution(cache: &mut VTableCache, level: u32, limits: &Limits) -> Result<bool, ThueMorseError> {
    let lhs = build_tm_gcf(cache.get(level + 1)?).eval()?;
    let rhs = expand_g(level, limits)?
        .compose_power(2)
        .mul_poly(&Poly::from_ints(&[-1, 1]));
    Ok(lhs == rhs)
}

/// The GCF `(z−1)/(z²+1) + v^(ℓ−1)_1/(z²−1) + v^(ℓ−1)_2/(z²+1) + …`,
/// i.e. the level-`ℓ−1` fraction at `z²` with its first numerator
/// replaced by `z − 1`.
pub fn contracted_form(previous: &VTable) -> GeneralizedCf {
    let plus = Poly::from_ints(&[1, 0, 1]);
    let minus = Poly::from_ints(&[-1, 0, 1]);
    GeneralizedCf::from_pairs(previous.values.iter().enumerate().map(|(j, v)| {
        let num = if j == 0 {
            Poly::from_ints(&[-1, 1])
        } else {
            Poly::constant(v.clone())
        };
        let den = if j % 2 == 0 { plus.clone() } else { minus.clone() };
        (num, den)
    }))
    .expect("v values are nonzero")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub level: u32,
    /// `gcf_eval(even_contraction(g)) = gcf_eval(g)`.
    pub value_preserved: bool,
    /// Contracted terms coincide with [`contracted_form`] of level `ℓ − 1`.
    pub matches_previous_level: bool,
    /// The contracted value equals `(z − 1) g_{ℓ−1}(z²)`.
    pub equals_substituted: bool,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.value_preserved && self.matches_previous_level && self.equals_substituted
    }
}

/// Even contraction of the level-`ℓ` fraction, `ℓ ≥ 1`.
pub fn verify_contraction(
    cache: &mut VTableCache,
    level: u32,
    limits: &Limits,
) -> Result<ContractionReport, ThueMorseError> {
    if level == 0 {
        return Err(PolyError::InvalidParameters("contraction check needs ℓ ≥ 1".into()).into());
    }
    let gcf = build_tm_gcf(cache.get(level)?);
    let contracted = gcf.even_contraction()?;
    let before = gcf.eval()?;
    let after = contracted.eval()?;
    let expected_form = contracted_form(cache.get(level - 1)?);
    let substituted = expand_g(level - 1, limits)?
        .compose_power(2)
        .mul_poly(&Poly::from_ints(&[-1, 1]));
    Ok(ContractionReport {
        level,
        value_preserved: before == after,
        matches_previous_level: contracted == expected_form,
        equals_substituted: after == substituted,
    })
}

/// `v^(ℓ)_{2j} + v^(ℓ)_{2j+1} = 1 + (−1)^j` and
/// `v^(ℓ)_{2j} v^(ℓ)_{2j−1} = −v^(ℓ−1)_j` for `1 ≤ j ≤ 2^ℓ − 1`.
pub fn recurrence_holds(previous: &VTable, table: &VTable) -> bool {
    let half = table.values.len() / 2;
    (1..half).all(|j| {
        let v = &table.values;
        let sum_ok = &v[2 * j] + &v[2 * j + 1] == integer(if j % 2 == 0 { 2 } else { 0 });
        let prod_ok = &v[2 * j] * &v[2 * j - 1] == -previous.values[j].clone();
        sum_ok && prod_ok
    }) && table.values[0].is_one()
        && (table.level == 0 || table.values[1] == BigRational::from_integer(2.into()))
}

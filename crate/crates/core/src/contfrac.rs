//! Regular continued fractions of rationals, convergent tables, generalized
//! continued fractions over `ℚ[z]`, their exact evaluation, and the even
//! contraction.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polynomial::{zpoly, Poly, PolyCf, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("denominator must be positive")]
    NonPositiveDenominator,
    #[error("partial quotient {index} is not a positive integer")]
    InvalidQuotient { index: usize },
    #[error("partial numerator {index} is the zero polynomial")]
    ZeroNumerator { index: usize },
    #[error("zero intermediate denominator at depth {depth}")]
    ZeroDenominator { depth: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// `[a0; a_1, …, a_n]` with every `a_i ≥ 1` and, when `n ≥ 1`, `a_n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularCf {
    a0: BigInt,
    quotients: Vec<BigInt>,
}

impl RegularCf {
    /// Builds a canonical expansion, merging a trailing `…, a, 1` into `…, a+1`.
    pub fn from_quotients(a0: BigInt, mut quotients: Vec<BigInt>) -> Result<Self, ContFracError> {
        if let Some(index) = quotients.iter().position(|a| !a.is_positive()) {
            return Err(ContFracError::InvalidQuotient { index: index + 1 });
        }
        let mut a0 = a0;
        if quotients.last().is_some_and(One::is_one) {
            quotients.pop();
            match quotients.last_mut() {
                Some(a) => *a += 1,
                None => a0 += 1,
            }
        }
        Ok(RegularCf { a0, quotients })
    }

    /// Floor-based Euclidean algorithm.
    pub fn from_rational(x: &BigRational) -> Self {
        let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
        let (a0, r) = num.div_mod_floor(&den);
        num = den;
        den = r;
        let mut quotients = Vec::new();
        while !den.is_zero() {
            let (a, r) = num.div_rem(&den);
            quotients.push(a);
            num = den;
            den = r;
        }
        Self::from_quotients(a0, quotients).expect("Euclid yields positive quotients")
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// Number of partial quotients after `a0`.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn max_quotient(&self) -> Option<&BigInt> {
        self.quotients.iter().max()
    }

    pub fn fold(&self) -> BigRational {
        let (p, q) = self.convergents_iter().last().expect("nonempty");
        BigRational::new(p, q)
    }

    /// Convergents `p_k/q_k`, `k = 0..=len`.
    pub fn convergents(&self) -> ConvergentTable<BigInt> {
        ConvergentTable::build(
            self.a0.clone(),
            self.quotients.iter().cloned(),
            BigInt::zero(),
            BigInt::one(),
        )
    }

    /// Convergents `(p_k, q_k)` one at a time, without keeping the table.
    pub fn convergents_iter(&self) -> impl Iterator<Item = (BigInt, BigInt)> + '_ {
        let mut state = (BigInt::one(), BigInt::zero(), self.a0.clone(), BigInt::one());
        std::iter::once((self.a0.clone(), BigInt::one())).chain(self.quotients.iter().map(move |a| {
            let (p_prev, q_prev, p, q) = &mut state;
            let p_next = a * &*p + &*p_prev;
            let q_next = a * &*q + &*q_prev;
            *p_prev = std::mem::replace(p, p_next);
            *q_prev = std::mem::replace(q, q_next);
            (p.clone(), q.clone())
        }))
    }

    /// `[a0, a_1, …]` as decimal strings.
    pub fn to_strings(&self) -> Vec<String> {
        std::iter::once(&self.a0)
            .chain(self.quotients.iter())
            .map(ToString::to_string)
            .collect()
    }
}

impl std::fmt::Display for RegularCf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, a) in self.quotients.iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { "; " } else { ", " })?;
        }
        f.write_str("]")
    }
}

impl Serialize for RegularCf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RegularCf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        let mut ints = items
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        if ints.is_empty() {
            return Err(serde::de::Error::custom("empty continued fraction"));
        }
        let a0 = ints.remove(0);
        RegularCf::from_quotients(a0, ints).map_err(serde::de::Error::custom)
    }
}

pub fn rcf_of_rational(p: &BigInt, q: &BigInt) -> Result<RegularCf, ContFracError> {
    if !q.is_positive() {
        return Err(ContFracError::NonPositiveDenominator);
    }
    Ok(RegularCf::from_rational(&BigRational::new(p.clone(), q.clone())))
}

/// Numerators and denominators of the convergents, index 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable<T> {
    pub p: Vec<T>,
    pub q: Vec<T>,
}

impl<T> ConvergentTable<T>
where
    T: Clone,
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    /// Regular recurrence `p_k = a_k p_{k−1} + p_{k−2}` seeded with
    /// `p_{−1} = 1, q_{−1} = 0`, `p_0 = a0, q_0 = 1`.
    fn build(a0: T, quotients: impl Iterator<Item = T>, zero: T, one: T) -> Self {
        let mut p = vec![a0];
        let mut q = vec![one.clone()];
        let (mut p_prev, mut q_prev) = (one, zero);
        for a in quotients {
            let k = p.len() - 1;
            let pk = &(&a * &p[k]) + &p_prev;
            let qk = &(&a * &q[k]) + &q_prev;
            p_prev = p[k].clone();
            q_prev = q[k].clone();
            p.push(pk);
            q.push(qk);
        }
        ConvergentTable { p, q }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `p_k q_{k−1} − p_{k−1} q_k`, for `k ≥ 1`.
    pub fn determinant(&self, k: usize) -> T {
        &(&self.p[k] * &self.q[k - 1]) - &(&self.p[k - 1] * &self.q[k])
    }
}

impl ConvergentTable<Poly> {
    /// Convergents of a polynomial continued fraction.
    pub fn from_poly_cf(cf: &PolyCf, k_max: usize) -> Self {
        ConvergentTable::build(
            cf.integer_part.clone(),
            cf.quotients.iter().take(k_max).cloned(),
            Poly::zero(),
            Poly::one(),
        )
    }
}

/// One level `numerator / (denominator + …)` of a generalized continued fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcfTerm {
    pub numerator: Poly,
    pub denominator: Poly,
}

/// `leading + a_1/(b_1 + a_2/(b_2 + … + a_n/b_n))` over `ℚ[z]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedCf {
    leading: Poly,
    terms: Vec<GcfTerm>,
}

impl GeneralizedCf {
    pub fn new(leading: Poly, terms: Vec<GcfTerm>) -> Result<Self, ContFracError> {
        if let Some(i) = terms.iter().position(|t| t.numerator.is_zero()) {
            return Err(ContFracError::ZeroNumerator { index: i + 1 });
        }
        Ok(GeneralizedCf { leading, terms })
    }

    /// Zero leading term, `(numerator, denominator)` pairs in order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Poly, Poly)>) -> Result<Self, ContFracError> {
        Self::new(
            Poly::zero(),
            pairs
                .into_iter()
                .map(|(numerator, denominator)| GcfTerm { numerator, denominator })
                .collect(),
        )
    }

    pub fn leading(&self) -> &Poly {
        &self.leading
    }

    pub fn terms(&self) -> &[GcfTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact bottom-up evaluation.
    ///
    /// Depth `j` (1-based) is reported when `b_j + tail_{j+1}` vanishes.
    pub fn eval(&self) -> Result<RationalFunction, ContFracError> {
        // fraction-free: tail = num/den in ℤ[z], divided by its content at
        // every step so heights stay at those of the reduced tail
        let mut num: Vec<BigInt> = Vec::new();
        let mut den: Vec<BigInt> = vec![BigInt::one()];
        for (i, term) in self.terms.iter().enumerate().rev() {
            let (an, ad) = zpoly::clear(&term.numerator);
            let (bn, bd) = zpoly::clear(&term.denominator);
            // a/(b + num/den) = an·bd·den / (ad·(bn·den + bd·num))
            let sum = zpoly::combine(&BigInt::one(), &zpoly::mul(&bn, &den), &bd, &num);
            if sum.is_empty() {
                return Err(ContFracError::ZeroDenominator { depth: i + 1 });
            }
            num = zpoly::mul(&zpoly::scale(&bd, &an), &den);
            den = zpoly::scale(&ad, &sum);
            zpoly::make_primitive(&mut num, &mut den);
        }
        let (ln, ld) = zpoly::clear(&self.leading);
        let num = zpoly::combine(&BigInt::one(), &zpoly::mul(&ln, &den), &ld, &num);
        let den = zpoly::scale(&ld, &den);
        let (num, den) = (zpoly::to_poly(&num), zpoly::to_poly(&den));
        // with constant numerators each step preserves gcd(num, den) = 1
        let coprime = self.terms.iter().all(|t| t.numerator.degree() == Some(0));
        let rf = if coprime {
            RationalFunction::from_coprime(num, den)
        } else {
            RationalFunction::new(num, den)
        };
        Ok(rf.expect("nonzero denominator"))
    }

    /// Convergents `P_k/Q_k` of the generalized fraction,
    /// `P_k = b_k P_{k−1} + a_k P_{k−2}`.
    pub fn convergents(&self) -> ConvergentTable<Poly> {
        let mut p = vec![self.leading.clone()];
        let mut q = vec![Poly::one()];
        let (mut p_prev, mut q_prev) = (Poly::one(), Poly::zero());
        for t in &self.terms {
            let k = p.len() - 1;
            let pk = &t.denominator * &p[k] + &t.numerator * &p_prev;
            let qk = &t.denominator * &q[k] + &t.numerator * &q_prev;
            p_prev = p[k].clone();
            q_prev = q[k].clone();
            p.push(pk);
            q.push(qk);
        }
        ConvergentTable { p, q }
    }

    /// Even part: a fraction whose `k`-th convergent is the `2k`-th convergent
    /// of `self`, followed by removal of common polynomial factors.
    pub fn even_contraction(&self) -> Result<GeneralizedCf, ContFracError> {
        let raw = self.even_part()?;
        Ok(raw.remove_common_factors())
    }

    pub(crate) fn even_part(&self) -> Result<GeneralizedCf, ContFracError> {
        let n = self.terms.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(ContFracError::ShapeMismatch(format!(
                "even contraction needs a positive even number of terms, got {n}"
            )));
        }
        let a = |i: usize| &self.terms[i - 1].numerator;
        let b = |i: usize| &self.terms[i - 1].denominator;
        let mut terms = Vec::with_capacity(n / 2);
        for k in 1..=n / 2 {
            let (numerator, denominator) = match k {
                1 => (a(1) * b(2), a(2) + &(b(1) * b(2))),
                _ => {
                    let mut num = -(&(a(2 * k - 2) * a(2 * k - 1)) * b(2 * k));
                    if k >= 3 {
                        num = num * b(2 * k - 4);
                    }
                    let den = a(2 * k - 1) * b(2 * k) + b(2 * k - 2) * &(a(2 * k) + &(b(2 * k - 1) * b(2 * k)));
                    (num, den)
                }
            };
            terms.push(GcfTerm { numerator, denominator });
        }
        GeneralizedCf::new(self.leading.clone(), terms)
    }

    /// Equivalence transform dividing `b_j` by the monic
    /// `d_j = gcd(b_j, a_j, a_{j+1})`, and `a_j` by `d_{j−1} d_j`, left to right.
    pub(crate) fn remove_common_factors(mut self) -> GeneralizedCf {
        let n = self.terms.len();
        for j in 0..n {
            let mut d = self.terms[j].denominator.gcd(&self.terms[j].numerator);
            if j + 1 < n {
                d = d.gcd(&self.terms[j + 1].numerator);
            }
            if d.degree().unwrap_or(0) == 0 {
                continue;
            }
            let t = &mut self.terms[j];
            t.denominator = t.denominator.exact_div(&d);
            t.numerator = t.numerator.exact_div(&d);
            if j + 1 < n {
                let next = &mut self.terms[j + 1];
                next.numerator = next.numerator.exact_div(&d);
            }
        }
        self
    }
}

/// `gcf_eval` as a free function.
pub fn gcf_eval(g: &GeneralizedCf) -> Result<RationalFunction, ContFracError> {
    g.eval()
}

pub fn even_contraction(g: &GeneralizedCf) -> Result<GeneralizedCf, ContFracError> {
    g.even_contraction()
}

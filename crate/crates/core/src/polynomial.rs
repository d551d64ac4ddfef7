//! Dense univariate polynomials over ℚ, reduced rational functions, and the
//! product constructions `f_ℓ`, `g_ℓ` and `g̃_{u,v,ℓ}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{format_rational, integer, parse_rational, ExactRational};

/// Default cap on the degree of any constructed denominator, `2^17`.
pub const DEFAULT_MAX_DEGREE: usize = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("{what}: degree {degree} exceeds the configured cap {cap}")]
    ResourceLimit {
        what: &'static str,
        degree: u128,
        cap: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot parse polynomial coefficient {0:?}")]
    Parse(String),
}

/// Resource caps for the exact constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest admissible degree of a denominator `z^N` (or exponent of `b`).
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl Limits {
    pub fn check(&self, what: &'static str, degree: u128) -> Result<(), PolyError> {
        if degree > self.max_degree as u128 {
            return Err(PolyError::ResourceLimit {
                what,
                degree,
                cap: self.max_degree,
            });
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients, `coeffs[i]` multiplying `z^i`.
/// No trailing zeros; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<ExactRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Poly::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: ExactRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: ExactRational, degree: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    /// `z + c`
    pub fn linear(c: ExactRational) -> Self {
        Poly::new(vec![c, BigRational::one()])
    }

    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExactRational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &ExactRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// `p(z^k)`
    pub fn compose_power(&self, k: usize) -> Poly {
        assert!(k >= 1, "compose_power needs k ≥ 1");
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly { coeffs }
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let m = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let n = match self.degree() {
            Some(n) if n >= m => n,
            _ => return Ok((Poly::zero(), self.clone())),
        };
        let lc = divisor.leading().expect("nonzero divisor");
        let inv = (!lc.is_one()).then(|| lc.recip());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); n - m + 1];
        for i in (0..=n - m).rev() {
            let top = std::mem::take(&mut rem[i + m]);
            if top.is_zero() {
                continue;
            }
            let c = match &inv {
                Some(inv) => top * inv,
                None => top,
            };
            for (k, d) in divisor.coeffs[..m].iter().enumerate() {
                if !d.is_zero() {
                    rem[i + k] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(m);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    /// Common denominator of all coefficients times the gcd of the numerators,
    /// i.e. the positive rational `c` with `self / c` primitive in `ℤ[z]`.
    pub fn content(&self) -> ExactRational {
        content_of(self.coeffs.iter())
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Poly, PolyError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()).map_err(|_| PolyError::Parse(s.as_ref().into())))
            .collect::<Result<Vec<_>, _>>()
            .map(Poly::new)
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) if negate => a - b,
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) if negate => -b,
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        Poly::new(coeffs)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::new(coeffs)
    }
}

pub(crate) fn content_of<'a>(coeffs: impl Iterator<Item = &'a ExactRational>) -> ExactRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    BigRational::new(num, den)
}

/// Helpers for fraction-free work in `ℤ[z]`: coefficient vectors, lowest
/// degree first, not necessarily trimmed.
pub(crate) mod zpoly {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    use super::Poly;

    /// `p = a / d` with `a` integral and `d > 0` the lcm of the denominators.
    pub fn clear(p: &Poly) -> (Vec<BigInt>, BigInt) {
        let d = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let a = p.coeffs.iter().map(|c| c.numer() * (&d / c.denom())).collect();
        (a, d)
    }

    pub fn to_poly(a: &[BigInt]) -> Poly {
        Poly::new(a.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn trim(a: &mut Vec<BigInt>) {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    /// `s·x + t·y`.
    pub fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
        let n = x.len().max(y.len());
        let mut out: Vec<BigInt> = (0..n)
            .map(|i| {
                let a = x.get(i).map(|c| s * c).unwrap_or_default();
                let b = y.get(i).map(|c| t * c).unwrap_or_default();
                a + b
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn scale(s: &BigInt, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().map(|c| s * c).collect()
    }

    /// gcd of all coefficients of all inputs (0 if all vanish). Stops early
    /// once the running gcd reaches 1.
    pub fn content<'a>(polys: impl IntoIterator<Item = &'a [BigInt]>) -> BigInt {
        let mut g = BigInt::zero();
        for p in polys {
            for c in p {
                if c.is_zero() {
                    continue;
                }
                g = g.gcd(c);
                if g.is_one() {
                    return g;
                }
            }
        }
        g
    }

    pub fn divide(x: &mut [BigInt], g: &BigInt) {
        for c in x.iter_mut() {
            *c = &*c / g;
        }
    }

    /// Divides the pair by its content and makes the leading coefficient of
    /// `den` positive.
    pub fn make_primitive(num: &mut [BigInt], den: &mut [BigInt]) {
        let mut g = content([&*num, &*den]);
        if g.is_zero() {
            return;
        }
        if den.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            divide(num, &g);
            divide(den, &g);
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// `c_k*z^k + … + c_1*z + c_0`, zero terms omitted.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        Poly::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $body(self, rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                $body(&self, rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Poly, b: &Poly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &Poly, b: &Poly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &Poly, b: &Poly| a.mul_impl(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Reduces `num/den` to lowest terms with a monic denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) || num.is_zero() {
            if num.is_zero() {
                (Poly::zero(), Poly::one())
            } else {
                (num, den)
            }
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Ok(Self::normalized(num, den))
    }

    /// Skips the gcd; the caller guarantees `gcd(num, den) = 1`.
    pub fn from_coprime(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::zero()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Strictly proper: `deg num < deg den`.
    pub fn is_proper(&self) -> bool {
        match self.num.degree() {
            None => true,
            Some(d) => d < self.den.degree().expect("nonzero denominator"),
        }
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        if self.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RationalFunction::new(&self.num * p, self.den.clone()).expect("nonzero denominator")
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &self.num * &other.den + &other.num * &self.den;
        RationalFunction::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominator")
    }

    /// `r(z^k)`
    pub fn compose_power(&self, k: usize) -> Self {
        Self::normalized(self.num.compose_power(k), self.den.compose_power(k))
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &ExactRational) -> Option<ExactRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Continued fraction over `ℚ[z]`: `integer_part + 1/(q_1 + 1/(q_2 + …))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCf {
    pub integer_part: Poly,
    pub quotients: Vec<Poly>,
}

impl PolyCf {
    pub fn degrees(&self) -> Vec<usize> {
        self.quotients
            .iter()
            .map(|q| q.degree().expect("partial quotients are nonzero"))
            .collect()
    }

    /// Folds the expansion back into a reduced rational function.
    pub fn reconstruct(&self) -> RationalFunction {
        // bottom-up; every step is unimodular so (num, den) stays coprime,
        // and rescaling den to monic keeps coefficient heights at those of
        // the reduced tails
        let mut num = Poly::zero();
        let mut den = Poly::one();
        for q in self.quotients.iter().rev() {
            let next_den = q * &den + &num;
            let inv = next_den.leading().expect("nonzero tail").recip();
            num = den.scale(&inv);
            den = next_den.scale(&inv);
        }
        let num = &self.integer_part * &den + num;
        RationalFunction::from_coprime(num, den).expect("nonzero denominator")
    }
}

/// Euclidean continued-fraction expansion of a rational function over `ℚ[z]`.
///
/// Partial quotients are kept exactly as Euclidean division produces them;
/// no rescaling to monic form is applied.
pub fn poly_cf(rf: &RationalFunction) -> PolyCf {
    let (integer_part, rem) = rf.num.div_rem(&rf.den).expect("nonzero denominator");
    let mut quotients = Vec::new();
    if rem.is_zero() {
        return PolyCf {
            integer_part,
            quotients,
        };
    }
    // Remainders are carried as scale * monic; the true remainder sequence
    // r_{i+1} = r_{i−1} − q_i r_i is recovered through the scales.
    let mut prev_scale = BigRational::one(); // den is monic
    let mut prev = rf.den.clone();
    let mut scale = rem.leading().expect("nonzero").clone();
    let mut cur = rem.monic();
    loop {
        let (q, r) = prev.div_rem(&cur).expect("nonzero remainder");
        quotients.push(q.scale(&(&prev_scale / &scale)));
        if r.is_zero() {
            break;
        }
        let next_scale = &prev_scale * r.leading().expect("nonzero");
        prev = cur;
        prev_scale = scale;
        cur = r.monic();
        scale = next_scale;
    }
    PolyCf {
        integer_part,
        quotients,
    }
}

fn thue_morse_numerator(level: u32) -> Vec<i8> {
    // coefficients of ∏_{h≤ℓ} (z^{2^h} − 1), lowest degree first
    let mut coeffs: Vec<i8> = vec![1];
    for h in 0..=level {
        let m = 1usize << h;
        let mut next = vec![0i8; coeffs.len() + m];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + m] += c;
            next[i] -= c;
        }
        coeffs = next;
    }
    coeffs
}

fn denominator_exponent_f(level: u32) -> u128 {
    (1u128 << (level as u128 + 1).min(127)) - 1
}

/// `f_ℓ(z) = ∏_{h=0}^{ℓ} (1 − z^{−2^h})` as `P(z) / z^{2^{ℓ+1}−1}`.
pub fn expand_f(level: u32, limits: &Limits) -> Result<RationalFunction, PolyError> {
    let n = denominator_exponent_f(level);
    limits.check("f_ℓ denominator", n)?;
    let num = Poly::new(thue_morse_numerator(level).into_iter().map(integer).collect());
    // P(0) = ±1, so num and z^n are coprime
    RationalFunction::from_coprime(num, Poly::monomial(BigRational::one(), n as usize))
}

/// `g_ℓ(z) = f_ℓ(z) / z`.
pub fn expand_g(level: u32, limits: &Limits) -> Result<RationalFunction, PolyError> {
    limits.check("g_ℓ denominator", denominator_exponent_f(level) + 1)?;
    let f = expand_f(level, limits)?;
    RationalFunction::from_coprime(f.num, f.den.shift(1))
}

/// `g̃_{u,v,ℓ}(z) = (1/z) ∏_{h=0}^{ℓ} (1 + u z^{−3^h} + v z^{−2·3^h})`.
pub fn expand_gtilde(u: i64, v: i64, level: u32, limits: &Limits) -> Result<RationalFunction, PolyError> {
    check_uv(u, v)?;
    let n = 3u128.checked_pow(level + 1).ok_or(PolyError::ResourceLimit {
        what: "g̃ denominator",
        degree: u128::MAX,
        cap: limits.max_degree,
    })?;
    limits.check("g̃ denominator", n)?;
    let mut coeffs: Vec<BigInt> = vec![BigInt::one()];
    for h in 0..=level {
        let m = 3usize.pow(h);
        // multiply by z^{2m} + u z^m + v
        let mut next = vec![BigInt::zero(); coeffs.len() + 2 * m];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 2 * m] += c;
            next[i + m] += c * u;
            next[i] += c * v;
        }
        coeffs = next;
    }
    let num = Poly::new(coeffs.into_iter().map(BigRational::from_integer).collect());
    // constant term v^{ℓ+1} ≠ 0
    RationalFunction::from_coprime(num, Poly::monomial(BigRational::one(), n as usize))
}

pub(crate) fn check_uv(u: i64, v: i64) -> Result<(), PolyError> {
    if u == 0 || v == 0 {
        return Err(PolyError::InvalidParameters(format!(
            "u and v must be nonzero (u = {u}, v = {v})"
        )));
    }
    if (u as i128) * (u as i128) == v as i128 {
        return Err(PolyError::InvalidParameters(format!(
            "u² = v is excluded (u = {u}, v = {v})"
        )));
    }
    Ok(())
}

/// Clears denominators of `num/den` to a primitive pair in `ℤ[z]` whose
/// denominator has positive leading coefficient.
pub fn primitive_integer_pair(num: &Poly, den: &Poly) -> (Vec<BigInt>, Vec<BigInt>) {
    let c = content_of(num.coeffs.iter().chain(den.coeffs.iter()));
    let sign = if den.leading().is_some_and(|l| l.is_negative()) {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    let factor = sign / c;
    let to_ints = |p: &Poly| {
        p.coeffs
            .iter()
            .map(|a| {
                let x = a * &factor;
                debug_assert!(x.is_integer());
                x.to_integer()
            })
            .collect::<Vec<_>>()
    };
    (to_ints(num), to_ints(den))
}

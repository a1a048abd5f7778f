//! Integer Laurent polynomials `Z[t, t^-1]`.
//!
//! A [`LaurentPoly`] stores the exponent of its lowest term together with a
//! dense coefficient vector. The encoding is canonical: the zero polynomial
//! has no coefficients and `min_exp == 0`, and a nonzero polynomial has a
//! nonzero first and last coefficient. Two polynomials are therefore equal
//! exactly when their encodings are equal.
//!
//! The units of `Z[t, t^-1]` are `±t^k`; [`LaurentPoly::canonical_form`]
//! picks the representative with lowest exponent 0 and a positive top
//! coefficient.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        Self::new(exp, vec![c.into()])
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// Builds `sum_i coeffs[i] * t^(min_exp + i)`, trimming zero ends.
    pub fn new(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::new(min_exp, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Exponent of the lowest term (0 for the zero polynomial).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Exponent of the highest term, `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let idx = exp - self.min_exp;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn top_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn bottom_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Highest exponent minus lowest exponent.
    pub fn span_degree(&self) -> Result<u64, LaurentError> {
        if self.is_zero() {
            Err(LaurentError::ZeroPolynomial)
        } else {
            Ok(self.coeffs.len() as u64 - 1)
        }
    }

    /// True iff the top coefficient is ±1. Zero is never monic.
    pub fn is_monic(&self) -> bool {
        self.top_coeff().is_some_and(|c| c.abs().is_one())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_exp: self.min_exp + k, coeffs: self.coeffs.clone() }
    }

    /// Substitutes `t -> t^-1`.
    pub fn invert_variable(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                LaurentPoly { min_exp: -hi, coeffs }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Representative of the unit class: lowest exponent 0, top coefficient positive.
    pub fn canonical_form(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        if self.coeffs.last().unwrap().is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
        }
        LaurentPoly { min_exp: 0, coeffs }
    }

    /// True iff `self = ±t^k * other` for some `k`.
    pub fn unit_equal(&self, other: &Self) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// True iff `self(t^-1)` is unit-equal to `self(t)`.
    pub fn is_palindromic(&self) -> bool {
        self.unit_equal(&self.invert_variable())
    }

    /// Non-negative gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self / content`, sign preserved.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x / &c).collect() }
    }

    /// Returns `r` with `self = divisor * r`, or [`LaurentError::NotDivisible`].
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let quotient = divide_coeffs(&self.coeffs, &divisor.coeffs)?;
        Ok(LaurentPoly::new(self.min_exp - divisor.min_exp, quotient))
    }

    /// Gcd in `Z[t, t^-1]`, canonical form.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.canonical_form();
        }
        if other.is_zero() {
            return self.canonical_form();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part().coeffs;
        let mut b = other.primitive_part().coeffs;
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        // primitive pseudo-remainder sequence
        while !b.is_empty() {
            let r = pseudo_remainder(&a, &b);
            a = b;
            b = primitive_coeffs(r);
        }
        LaurentPoly::new(0, a).scale(&content).canonical_form()
    }

    /// Gcd of a nonempty family; `gcd(all zero) = 0`.
    pub fn gcd_set<'a, I>(polys: I) -> Self
    where
        I: IntoIterator<Item = &'a LaurentPoly>,
    {
        let mut g = Self::zero();
        for p in polys {
            g = g.gcd(p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Evaluates at an integer point `t = x` (x ≠ 0 when negative exponents occur).
    pub fn eval(&self, x: &BigInt) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if x.is_zero() && self.min_exp < 0 {
            return None;
        }
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if self.min_exp >= 0 {
            Some(acc * num_traits::pow(x.clone(), self.min_exp as usize))
        } else {
            let denom = num_traits::pow(x.clone(), (-self.min_exp) as usize);
            let (q, r) = acc.div_rem(&denom);
            r.is_zero().then_some(q)
        }
    }

    fn add_scaled_shift(&mut self, other: &Self, negate: bool) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = if negate { -other.clone() } else { other.clone() };
            return;
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let len = (hi - lo + 1) as usize;
        if lo < self.min_exp {
            let pad = (self.min_exp - lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.min_exp = lo;
        }
        self.coeffs.resize(len, BigInt::zero());
        let off = (other.min_exp - lo) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            if negate {
                self.coeffs[off + i] -= c;
            } else {
                self.coeffs[off + i] += c;
            }
        }
        self.trim();
    }
}

fn primitive_coeffs(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (ascending coefficient vectors, `b` nonzero).
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Exact division of ascending coefficient vectors (both nonzero-ended).
fn divide_coeffs(num: &[BigInt], den: &[BigInt]) -> Result<Vec<BigInt>, LaurentError> {
    if num.len() < den.len() {
        return Err(LaurentError::NotDivisible);
    }
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = &den[dl - 1];
    let qlen = num.len() - dl + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = &rem[k + dl - 1];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return Err(LaurentError::NotDivisible);
        }
        for (i, d) in den.iter().enumerate() {
            if !d.is_zero() {
                rem[k + i] -= &q * d;
            }
        }
        quot[k] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(LaurentError::NotDivisible);
    }
    Ok(quot)
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Terms in decreasing exponent order, e.g. `t^4 + t^2 + 1`, `2t^2 - 3t + 2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let exp = self.min_exp + i as i64;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match exp {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if exp == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{exp}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses the rendering produced by `Display` (plus `*` between coefficient and `t`).
impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            let after_caret = i > 0 && compact.as_bytes()[i - 1] == b'^';
            if (ch == '+' || ch == '-') && i > 0 && !after_caret {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = LaurentPoly::zero();
        for term in terms {
            acc += &parse_term(&term)?;
        }
        Ok(acc)
    }
}

fn parse_term(term: &str) -> Result<LaurentPoly, LaurentError> {
    let bad = || LaurentError::Parse(format!("bad term `{term}`"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1, &term[1..]),
        Some(b'+') => (1, &term[1..]),
        _ => (1, term),
    };
    let Some(tpos) = body.find('t') else {
        let c: BigInt = body.parse().map_err(|_| bad())?;
        return Ok(LaurentPoly::constant(c * sign));
    };
    let coeff_str = body[..tpos].trim_end_matches('*');
    let coeff: BigInt = if coeff_str.is_empty() { BigInt::one() } else { coeff_str.parse().map_err(|_| bad())? };
    let rest = &body[tpos + 1..];
    let exp: i64 =
        if rest.is_empty() { 1 } else { rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())? };
    Ok(LaurentPoly::monomial(coeff * sign, exp))
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.iter_mut() {
            *c = -&*c;
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled_shift(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled_shift(rhs, true);
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::new(self.min_exp + rhs.min_exp, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

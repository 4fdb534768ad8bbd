//! Integer Laurent polynomials in one variable `t`.
//!
//! Coefficients are `i64` with checked arithmetic: every operation that could
//! overflow goes through a `checked_*` method returning [`LaurentError::Overflow`].
//! The operator impls (`+`, `*`, `-`) panic on overflow, like the primitive
//! integer types do in debug builds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inexact division: nonzero remainder")]
    InexactDivision,
}

/// A finite sum `Σ c_e t^e` with `e ∈ ℤ`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `t`
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    ///
    /// Panics on overflow; use [`LaurentPoly::try_from_terms`] for untrusted input.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        Self::try_from_terms(terms).expect("coefficient overflow")
    }

    pub fn try_from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Result<Self, LaurentError> {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, exp: i64, coeff: i64) -> Result<(), LaurentError> {
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry = entry.checked_add(coeff).ok_or(LaurentError::Overflow("addition"))?;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Nonzero terms in decreasing exponent order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent with a nonzero coefficient; `None` for the zero polynomial.
    pub fn top_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn bottom_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// `coeff(e) == coeff(-e)` for every `e`.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    pub fn eval_at_one(&self) -> Result<i64, LaurentError> {
        self.terms
            .values()
            .try_fold(0i64, |acc, &c| acc.checked_add(c).ok_or(LaurentError::Overflow("evaluation")))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    pub fn checked_neg(&self) -> Result<Self, LaurentError> {
        let terms = self
            .terms()
            .map(|(e, c)| c.checked_neg().map(|c| (e, c)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(LaurentError::Overflow("negation"))?;
        Ok(Self { terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.checked_add(&other.checked_neg()?)
    }

    /// Convolution product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = e1.checked_add(e2).ok_or(LaurentError::Overflow("exponent"))?;
                let c = c1.checked_mul(c2).ok_or(LaurentError::Overflow("multiplication"))?;
                out.add_term(e, c)?;
            }
        }
        Ok(out)
    }

    /// Multiplies by `t^shift`.
    pub fn checked_shift(&self, shift: i64) -> Result<Self, LaurentError> {
        let terms = self
            .terms()
            .map(|(e, c)| e.checked_add(shift).map(|e| (e, c)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(LaurentError::Overflow("exponent"))?;
        Ok(Self { terms })
    }

    /// The substitution `t ↦ t^p`.
    pub fn substitute_power(&self, p: i64) -> Result<Self, LaurentError> {
        if p < 1 {
            return Err(LaurentError::InvalidParameters(format!(
                "substitution power must be positive, got {p}"
            )));
        }
        let terms = self
            .terms()
            .map(|(e, c)| e.checked_mul(p).map(|e| (e, c)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(LaurentError::Overflow("exponent"))?;
        Ok(Self { terms })
    }

    /// Whether the nonzero coefficients, read from the top exponent down, are
    /// `+1, -1, +1, …, +1`. This is the shape every L-space knot's Alexander
    /// polynomial has.
    ///
    /// Requires a symmetric polynomial with value 1 at `t = 1`.
    pub fn coeffs_alternating_pm1(&self) -> Result<bool, LaurentError> {
        if !self.is_symmetric() {
            return Err(LaurentError::Precondition(format!("{self} is not symmetric under t <-> t^-1")));
        }
        let at_one = self.eval_at_one()?;
        if at_one != 1 {
            return Err(LaurentError::Precondition(format!(
                "{self} evaluates to {at_one} at t = 1, expected 1"
            )));
        }
        let ok = self.terms_desc().enumerate().all(|(k, (_, c))| c == if k % 2 == 0 { 1 } else { -1 });
        // symmetric + value 1 + alternating forces an odd term count, so the
        // last coefficient is +1
        Ok(ok)
    }

    pub fn to_pairs(&self) -> Vec<[i64; 2]> {
        self.terms_desc().map(|(e, c)| [e, c]).collect()
    }
}

/// Symmetrized Alexander polynomial of the `(p, q)` torus knot,
/// `t^{-(p-1)(|q|-1)/2} (t^{p|q|} - 1)(t - 1) / ((t^p - 1)(t^{|q|} - 1))`.
///
/// The division is carried out exactly; a nonzero remainder is an error.
pub fn torus_alexander(p: i64, q: i64) -> Result<LaurentPoly, LaurentError> {
    if p < 1 {
        return Err(LaurentError::InvalidParameters(format!("torus knot needs p >= 1, got p = {p}")));
    }
    let q = q.checked_abs().ok_or(LaurentError::Overflow("torus parameter"))?;
    if p.gcd(&q) != 1 {
        return Err(LaurentError::InvalidParameters(format!("gcd({p}, {q}) != 1")));
    }
    if p == 1 || q <= 1 {
        return Ok(LaurentPoly::one());
    }
    let pq = p.checked_mul(q).ok_or(LaurentError::Overflow("degree"))?;
    let to_usize = |d: i64| usize::try_from(d).map_err(|_| LaurentError::Overflow("degree"));

    let binomial = |d: usize| {
        let mut v = vec![0i64; d + 1];
        v[0] = -1;
        v[d] = 1;
        v
    };
    let num = dense_mul(&binomial(to_usize(pq)?), &binomial(1))?;
    let den = dense_mul(&binomial(to_usize(p)?), &binomial(to_usize(q)?))?;
    let quot = dense_div_exact(&num, &den)?;

    let shift = -((p - 1) * (q - 1) / 2);
    LaurentPoly::try_from_terms(quot.iter().enumerate().map(|(i, &c)| (i as i64 + shift, c)))
}

fn dense_mul(a: &[i64], b: &[i64]) -> Result<Vec<i64>, LaurentError> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let prod = x.checked_mul(y).ok_or(LaurentError::Overflow("multiplication"))?;
            out[i + j] = out[i + j].checked_add(prod).ok_or(LaurentError::Overflow("addition"))?;
        }
    }
    Ok(out)
}

// Long division by a polynomial with leading coefficient ±1.
fn dense_div_exact(num: &[i64], den: &[i64]) -> Result<Vec<i64>, LaurentError> {
    let lead = *den.last().expect("nonempty divisor");
    assert!(lead == 1 || lead == -1, "divisor must be monic up to sign");
    let mut rem = num.to_vec();
    if rem.len() < den.len() {
        return Err(LaurentError::InexactDivision);
    }
    let qlen = rem.len() - den.len() + 1;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + den.len() - 1] * lead;
        quot[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &d) in den.iter().enumerate() {
            let sub = c.checked_mul(d).ok_or(LaurentError::Overflow("division"))?;
            rem[k + j] = rem[k + j].checked_sub(sub).ok_or(LaurentError::Overflow("division"))?;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(LaurentError::InexactDivision);
    }
    Ok(quot)
}

impl fmt::Display for LaurentPoly {
    /// Renders as `t^3 - t^2 + 1 - t^-2 + t^-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms_desc().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let pairs = Vec::<[i64; 2]>::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for [e, c] in pairs {
            if terms.insert(e, c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent {e}")));
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(Self { terms })
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        self.checked_add(rhs).expect("coefficient overflow")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        self.checked_sub(rhs).expect("coefficient overflow")
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        self.checked_mul(rhs).expect("coefficient overflow")
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.checked_neg().expect("coefficient overflow")
    }
}

//! Exact arithmetic in the ring Z[q^{1/2}, q^{-1/2}].
//!
//! [`HalfLaurent`] is a Laurent polynomial in the half-integer powers of q
//! with arbitrary-precision integer coefficients. Exponents are stored
//! doubled, so the key `e` represents the monomial q^{e/2} and all index
//! arithmetic stays in integers. The ring carries the conjugation involution
//! q -> q^{-1}, which negates every stored exponent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Laurent polynomial in q^{1/2} over Z, kept in canonical form: no stored
/// coefficient is zero, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HalfLaurent {
    /// doubled exponent -> nonzero coefficient
    terms: BTreeMap<i64, BigInt>,
}

/// Error returned by [`HalfLaurent::eval_at`] for the excluded point s = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSubstitution;

impl fmt::Display for ZeroSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot substitute q^{{1/2}} = 0")
    }
}

impl std::error::Error for ZeroSubstitution {}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The monomial c * q^{e/2}; `half_exp` is the doubled exponent.
    pub fn monomial(half_exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exp, c);
        }
        Self { terms }
    }

    pub fn int(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// q
    pub fn q() -> Self {
        Self::monomial(2, 1)
    }

    /// q^{-1}
    pub fn q_inv() -> Self {
        Self::monomial(-2, 1)
    }

    /// The circle value q + q^{-1}.
    pub fn circle() -> Self {
        &Self::q() + &Self::q_inv()
    }

    /// Build from (doubled exponent, coefficient) pairs; repeated exponents
    /// accumulate, zero coefficients drop out.
    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, c.into());
        }
        out
    }

    /// Canonical serialization: (doubled exponent, coefficient) pairs in
    /// ascending exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn add_term(&mut self, half_exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(half_exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply by q^{e/2}.
    pub fn shifted(&self, half_exp: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + half_exp, c.clone()))
                .collect(),
        }
    }

    /// The conjugate p*(q) = p(q^{-1}): every exponent is negated.
    pub fn conjugate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Evaluate at q^{1/2} = s exactly; s must be nonzero.
    pub fn eval_at(&self, s: &BigRational) -> Result<BigRational, ZeroSubstitution> {
        if s.is_zero() {
            return Err(ZeroSubstitution);
        }
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            acc += BigRational::from(c.clone()) * s.pow(e as i32);
        }
        Ok(acc)
    }

    /// Exact division; `None` when `self` is not a multiple of `div`.
    pub fn div_exact(&self, div: &Self) -> Option<Self> {
        if div.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Long division by the lowest term of the divisor. Any exact
        // quotient has exponents between self.min - div.min and
        // self.max - div.max; shifts rise strictly, so the bound terminates
        // the loop on non-multiples.
        let (&d_lo, d_lead) = div.terms.iter().next().unwrap();
        let max_shift = self.max_half_exp().unwrap() - div.max_half_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (&r_lo, r_lead) = rem.terms.iter().next().unwrap();
            let shift = r_lo - d_lo;
            if shift > max_shift {
                return None;
            }
            let (t, t_rem) = num_integer::div_rem(r_lead.clone(), d_lead.clone());
            if !t_rem.is_zero() || t.is_zero() {
                return None;
            }
            let term = Self::monomial(shift, t);
            rem = &rem - &(&term * div);
            quot = &quot + &term;
        }
        Some(quot)
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_half_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Width of the exponent support, used for pivot selection.
    pub fn degree_span(&self) -> i64 {
        match (self.min_half_exp(), self.max_half_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl AddAssign<&HalfLaurent> for HalfLaurent {
    fn add_assign(&mut self, rhs: &HalfLaurent) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = abs.is_one();
            if e == 0 {
                write!(f, "{}", abs)?;
            } else {
                if !unit_coeff {
                    write!(f, "{}*", abs)?;
                }
                if e == 2 {
                    write!(f, "q")?;
                } else if e % 2 == 0 {
                    write!(f, "q^{{{}}}", e / 2)?;
                } else {
                    write!(f, "q^{{{}/2}}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

//! K-ring of the adelic Riemann sphere,
//! `K(CP¹_Q) ≅ Z[x^q : q ∈ Q] / ((x^q − 1)(x^p − 1))`.
//!
//! Every class has a unique normal form `(a, r)`: `a` is the augmentation
//! (sum of coefficients) and `r` the exponent-weighted sum. The ideal is square-zero on the augmentation
//! kernel, which gives `(a, r)(b, s) = (ab, as + br)`. The [`rewrite`]
//! module reaches the same pair by blind rewriting and is what the closed
//! form is checked against.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

mod parse;
pub mod rewrite;

pub use parse::parse_formal_sum;

/// Finite integer combination of monomials `x^q`, without zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<BigRational, BigInt>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(BigRational::zero(), c)
    }

    pub fn monomial(exponent: BigRational, coefficient: impl Into<BigInt>) -> Self {
        let mut s = Self::zero();
        s.add_term(exponent, coefficient.into());
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigRational, BigInt)>) -> Self {
        let mut s = Self::zero();
        for (q, c) in terms {
            s.add_term(q, c);
        }
        s
    }

    pub fn add_term(&mut self, exponent: BigRational, coefficient: BigInt) {
        let entry = self.terms.entry(exponent).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// `(exponent, coefficient)` pairs by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut s = self.clone();
        for (q, c) in &other.terms {
            s.add_term(q.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> FormalSum {
        FormalSum {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &FormalSum) -> FormalSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FormalSum) -> FormalSum {
        let mut s = FormalSum::zero();
        for (q, c) in &self.terms {
            for (p, d) in &other.terms {
                s.add_term(q + p, c * d);
            }
        }
        s
    }

    /// Least common denominator of the exponents (1 for an empty sum).
    pub fn level(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (q, c)) in self.terms.iter().enumerate() {
            let negative = c < &BigInt::zero();
            let mag = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if q.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if q.is_integer() && q >= &BigRational::zero() {
                if q.is_one() {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", q.numer())?;
                }
            } else {
                write!(f, "x^({q})")?;
            }
        }
        Ok(())
    }
}

/// Normal form `(a, r)` of a class in `K(CP¹_Q)`; `x^q ↦ (1, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KRingElement {
    pub rank: BigInt,
    pub class: BigRational,
}

impl KRingElement {
    pub fn new(rank: impl Into<BigInt>, class: BigRational) -> Self {
        KRingElement {
            rank: rank.into(),
            class,
        }
    }

    pub fn one() -> Self {
        Self::new(1, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::new(0, BigRational::zero())
    }

    pub fn add(&self, other: &KRingElement) -> KRingElement {
        KRingElement {
            rank: &self.rank + &other.rank,
            class: &self.class + &other.class,
        }
    }

    pub fn neg(&self) -> KRingElement {
        KRingElement {
            rank: -&self.rank,
            class: -&self.class,
        }
    }

    pub fn multiply(&self, other: &KRingElement) -> KRingElement {
        KRingElement {
            rank: &self.rank * &other.rank,
            class: &self.class * BigRational::from(other.rank.clone())
                + &other.class * BigRational::from(self.rank.clone()),
        }
    }

    /// Membership in the image of `K(π_n)`, i.e. `r ∈ (1/n)Z`.
    pub fn in_level(&self, n: u64) -> bool {
        assert!(n > 0, "levels are positive");
        (&self.class * BigRational::from(BigInt::from(n))).is_integer()
    }

    /// Smallest level whose image contains the element.
    pub fn minimal_level(&self) -> BigInt {
        self.class.denom().clone()
    }

    /// A representative `(a − m)·1 + m·x^{1/N}` at the minimal level `N`,
    /// where `m = r·N`.
    pub fn representative(&self) -> FormalSum {
        let n = self.minimal_level();
        let m = (&self.class * BigRational::from(n.clone())).to_integer();
        FormalSum::from_terms([
            (BigRational::zero(), &self.rank - &m),
            (BigRational::new(BigInt::one(), n), m),
        ])
    }
}

impl fmt::Display for KRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rank, self.class)
    }
}

/// Closed-form normal form: augmentation and exponent-weighted sum.
pub fn reduce(s: &FormalSum) -> KRingElement {
    let mut rank = BigInt::zero();
    let mut class = BigRational::zero();
    for (q, c) in s.terms() {
        rank += c;
        class += q * BigRational::from(c.clone());
    }
    KRingElement { rank, class }
}

/// Level-image predicate `(a, r) ↦ r ∈ (1/n)Z`.
pub fn level_image(n: u64) -> impl Fn(&KRingElement) -> bool {
    move |e| e.in_level(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct KRingReport {
    pub rank: String,
    pub class: String,
    pub normal_form: String,
    pub minimal_level: String,
}

impl KRingReport {
    pub fn of(e: &KRingElement) -> Self {
        KRingReport {
            rank: e.rank.to_string(),
            class: e.class.to_string(),
            normal_form: e.to_string(),
            minimal_level: e.minimal_level().to_string(),
        }
    }
}

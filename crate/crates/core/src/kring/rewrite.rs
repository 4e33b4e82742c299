//! Brute-force rewriting to normal form, independent of the closed form.
//!
//! All exponents are brought to a common level `N`, so a sum becomes an
//! integer Laurent polynomial in `y = x^{1/N}`. The relation
//! `(y^a − 1)(y^b − 1) = 0` is applied as `y^{a+b} → y^a + y^b − 1` with the
//! split chosen by the caller, together with `y^{-1} → 2 − y` (the case
//! `a = 1, b = −1`). Every path ends in `c_0 + c_1·y`, and those two
//! coefficients are unique because `{1, y}` is a Z-basis of
//! `Z[y]/((y − 1)²)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FormalSum, KRingElement};

/// `c_0 + c_1·y` at level `N` (`y = x^{1/N}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub level: BigInt,
    pub constant: BigInt,
    pub linear: BigInt,
}

impl LinearForm {
    /// Reads `(a, r)` off the basis `{1, y}`: `1 ↦ (1, 0)`, `y ↦ (1, 1/N)`.
    pub fn to_element(&self) -> KRingElement {
        KRingElement::new(
            &self.constant + &self.linear,
            BigRational::new(self.linear.clone(), self.level.clone()),
        )
    }
}

/// Rewriter with a memo of `y^k ↦ c_0 + c_1·y`.
///
/// `choose(n)` must return an index below `n`; it picks among the admissible
/// splits at each step, so different choosers explore different rewrite paths.
pub struct Rewriter<'a> {
    choose: &'a mut dyn FnMut(usize) -> usize,
    memo: HashMap<BigInt, (BigInt, BigInt)>,
    pub steps: u64,
}

impl<'a> Rewriter<'a> {
    pub fn new(choose: &'a mut dyn FnMut(usize) -> usize) -> Self {
        Rewriter {
            choose,
            memo: HashMap::new(),
            steps: 0,
        }
    }

    /// Candidate first parts `a` of a split `k = a + (k − a)`, both parts
    /// strictly between 0 and `k`. Small exponents may peel off any amount;
    /// large ones split near the middle so the recursion stays logarithmic.
    fn splits(k: &BigInt) -> Vec<BigInt> {
        let mag = k.abs();
        let sign = if k.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let mut out: Vec<BigInt> = if mag <= BigInt::from(64) {
            let m = mag.to_u64().unwrap();
            (1..m).map(BigInt::from).collect()
        } else {
            let (h, r) = mag.div_rem(&BigInt::from(2));
            if r.is_zero() {
                vec![h.clone(), h - 1]
            } else {
                vec![h.clone(), h + 1]
            }
        };
        for a in &mut out {
            *a *= &sign;
        }
        out
    }

    /// Normal form of `y^k`.
    pub fn power(&mut self, k: &BigInt) -> (BigInt, BigInt) {
        if k.is_zero() {
            return (BigInt::one(), BigInt::zero());
        }
        if k.is_one() {
            return (BigInt::zero(), BigInt::one());
        }
        if *k == -BigInt::one() {
            self.steps += 1;
            return (BigInt::from(2), -BigInt::one());
        }
        if let Some(hit) = self.memo.get(k) {
            return hit.clone();
        }
        let options = Self::splits(k);
        let idx = (self.choose)(options.len());
        let a = options[idx % options.len()].clone();
        let b = k - &a;
        self.steps += 1;
        let (a0, a1) = self.power(&a);
        let (b0, b1) = self.power(&b);
        let result = (a0 + b0 - 1, a1 + b1);
        self.memo.insert(k.clone(), result.clone());
        result
    }

    /// Rewrites every term of `s` at its common level.
    pub fn normalize(&mut self, s: &FormalSum) -> LinearForm {
        let level = s.level();
        let mut constant = BigInt::zero();
        let mut linear = BigInt::zero();
        for (q, c) in s.terms() {
            let k = (q * BigRational::from(level.clone())).to_integer();
            let (c0, c1) = self.power(&k);
            constant += c * c0;
            linear += c * c1;
        }
        LinearForm {
            level,
            constant,
            linear,
        }
    }
}

/// Normal form along the path that always takes the first admissible split.
pub fn rewrite_normal_form(s: &FormalSum) -> LinearForm {
    let mut first = |_n: usize| 0;
    Rewriter::new(&mut first).normalize(s)
}

/// Agreement of a rewriting result with a closed-form `(a, r)` at the same
/// level: `c_1 = r·N` and `c_0 = a − r·N`.
pub fn agrees(form: &LinearForm, closed: &KRingElement) -> bool {
    let scaled = &closed.class * BigRational::from(form.level.clone());
    if !scaled.is_integer() {
        return false;
    }
    let b = scaled.to_integer();
    form.linear == b && form.constant == &closed.rank - &b
}

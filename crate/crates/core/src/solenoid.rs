//! Finite-level arithmetic for the profinite integers, the adelic solenoid
//! and its complex analogues.
//!
//! A point of an inverse limit over the divisibility net is truncated to a
//! single top level `M`; the coordinate at every divisor `d | M` is then
//! determined by the top one (`z_d = z_M^(M/d)`). Angles are kept in turns so
//! everything stays rational.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `x mod 1`; the result stays in lowest terms since `gcd(n mod d, d) = gcd(n, d)`.
fn frac(x: &BigRational) -> BigRational {
    BigRational::new_raw(x.numer().mod_floor(x.denom()), x.denom().clone())
}

fn fmt_ratio(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or `p` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

/// `ρ · e^{2πiτ}` with exact rational modulus and turns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarComplex {
    rho: BigRational,
    turns: BigRational,
}

impl PolarComplex {
    /// Turns are reduced into `[0, 1)`; a zero modulus forces turns to 0.
    pub fn new(rho: BigRational, turns: BigRational) -> Result<Self> {
        if rho.is_negative() {
            return Err(Error::Dimension(format!(
                "modulus must be nonnegative, got {}",
                fmt_ratio(&rho)
            )));
        }
        let turns = if rho.is_zero() {
            BigRational::zero()
        } else {
            frac(&turns)
        };
        Ok(PolarComplex { rho, turns })
    }

    /// Shorthand for `(rn/rd, tn/td)`.
    pub fn from_ratios(rn: i64, rd: i64, tn: i64, td: i64) -> Self {
        Self::new(ratio(rn, rd), ratio(tn, td)).expect("nonnegative modulus")
    }

    pub fn one() -> Self {
        PolarComplex {
            rho: BigRational::one(),
            turns: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        PolarComplex {
            rho: BigRational::zero(),
            turns: BigRational::zero(),
        }
    }

    /// Point of the unit circle at the given angle in turns.
    pub fn unit(turns: BigRational) -> Self {
        Self::new(BigRational::one(), turns).expect("positive modulus")
    }

    pub fn rho(&self) -> &BigRational {
        &self.rho
    }

    pub fn turns(&self) -> &BigRational {
        &self.turns
    }

    pub fn is_zero(&self) -> bool {
        self.rho.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rho.is_one() && self.turns.is_zero()
    }

    pub fn mul(&self, other: &PolarComplex) -> PolarComplex {
        Self::new(&self.rho * &other.rho, &self.turns + &other.turns).expect("product of moduli")
    }

    pub fn inv(&self) -> Result<PolarComplex> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Self::new(self.rho.recip(), -self.turns.clone())
    }

    /// Nonnegative integer power; `0^0 = 1`.
    pub fn pow(&self, e: u64) -> PolarComplex {
        if e == 0 {
            return Self::one();
        }
        if self.rho.is_zero() {
            return Self::zero();
        }
        let rho = if self.rho.is_one() {
            self.rho.clone()
        } else {
            // powers of coprime integers stay coprime
            let e = e as usize;
            BigRational::new_raw(
                num_traits::pow(self.rho.numer().clone(), e),
                num_traits::pow(self.rho.denom().clone(), e),
            )
        };
        let d = self.turns.denom();
        let n = (self.turns.numer() * BigInt::from(e)).mod_floor(d);
        PolarComplex {
            rho,
            turns: BigRational::new(n, d.clone()),
        }
    }

    /// Integer power; negative exponents need a nonzero modulus.
    pub fn powi(&self, e: &BigInt) -> Result<PolarComplex> {
        use num_traits::ToPrimitive;
        let base = if e.is_negative() {
            self.inv()?
        } else {
            self.clone()
        };
        let mag = e
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Dimension(format!("exponent {e} too large")))?;
        Ok(base.pow(mag))
    }

    /// The `k`-th of the `r` roots: turns `(τ + k)/r` and modulus `ρ^(1/r)`,
    /// which must be an exact rational.
    pub fn root(&self, r: u64, k: u64) -> Result<PolarComplex> {
        if r == 0 {
            return Err(Error::ZeroLevel);
        }
        if k >= r {
            return Err(Error::InvalidBranch {
                branch: k,
                count: r,
            });
        }
        let exact_root = |x: &BigInt| -> Option<BigInt> {
            let e = u32::try_from(r).ok()?;
            let y = x.nth_root(e);
            (num_traits::pow(y.clone(), r as usize) == *x).then_some(y)
        };
        let rho = match (exact_root(self.rho.numer()), exact_root(self.rho.denom())) {
            (Some(n), Some(d)) => BigRational::new(n, d),
            _ => {
                return Err(Error::InexactRoot {
                    rho: fmt_ratio(&self.rho),
                    root: r,
                })
            }
        };
        let rr = BigRational::from(BigInt::from(r));
        let turns = (&self.turns + BigRational::from(BigInt::from(k))) / rr;
        Self::new(rho, turns)
    }
}

impl fmt::Display for PolarComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho={} turns={}",
            fmt_ratio(&self.rho),
            fmt_ratio(&self.turns)
        )
    }
}

/// Truncation of an element of `Ẑ = lim Z/MZ` to level `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProfiniteInt {
    level: u64,
    residue: u64,
}

impl ProfiniteInt {
    pub fn new(level: u64, residue: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        Ok(ProfiniteInt {
            level,
            residue: residue % level,
        })
    }

    /// Image of an integer under the dense inclusion `Z ⊂ Ẑ`.
    pub fn from_integer(n: i64, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let r = (n as i128).rem_euclid(level as i128) as u64;
        Ok(ProfiniteInt { level, residue: r })
    }

    pub fn zero(level: u64) -> Result<Self> {
        Self::new(level, 0)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn same_level(&self, other: &ProfiniteInt) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(())
    }

    /// Addition at a common level; differing levels must be refined explicitly first.
    pub fn add(&self, other: &ProfiniteInt) -> Result<ProfiniteInt> {
        self.same_level(other)?;
        let r = (self.residue as u128 + other.residue as u128) % self.level as u128;
        Ok(ProfiniteInt {
            level: self.level,
            residue: r as u64,
        })
    }

    pub fn neg(&self) -> ProfiniteInt {
        ProfiniteInt {
            level: self.level,
            residue: (self.level - self.residue) % self.level,
        }
    }

    pub fn sub(&self, other: &ProfiniteInt) -> Result<ProfiniteInt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ProfiniteInt) -> Result<ProfiniteInt> {
        self.same_level(other)?;
        let r = (self.residue as u128 * other.residue as u128) % self.level as u128;
        Ok(ProfiniteInt {
            level: self.level,
            residue: r as u64,
        })
    }

    /// Bonding map to `Z/dZ` for `d | M`.
    pub fn project(&self, d: u64) -> Result<u64> {
        if d == 0 || !self.level.is_multiple_of(d) {
            return Err(Error::NotDivisor {
                divisor: d,
                multiple: self.level,
            });
        }
        Ok(self.residue % d)
    }

    /// Lift to level `level = M·q`, choosing the preimage `residue + k·M`, `0 ≤ k < q`.
    pub fn lift(&self, level: u64, k: u64) -> Result<ProfiniteInt> {
        if level == 0 || !level.is_multiple_of(self.level) {
            return Err(Error::NotDivisor {
                divisor: self.level,
                multiple: level,
            });
        }
        let q = level / self.level;
        if k >= q {
            return Err(Error::InvalidBranch {
                branch: k,
                count: q,
            });
        }
        ProfiniteInt::new(level, self.residue + k * self.level)
    }
}

impl fmt::Display for ProfiniteInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level={} residue={}", self.level, self.residue)
    }
}

/// Truncation of a point of `C_Q` (or `C*_Q`, `S¹_Q`) to level `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolenoidPoint {
    level: u64,
    top: PolarComplex,
}

impl SolenoidPoint {
    pub fn new(level: u64, top: PolarComplex) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        Ok(SolenoidPoint { level, top })
    }

    pub fn identity(level: u64) -> Result<Self> {
        Self::new(level, PolarComplex::one())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn top(&self) -> &PolarComplex {
        &self.top
    }

    /// Coordinate `z_d = z_M^(M/d)` for `d | M`.
    pub fn coordinate(&self, d: u64) -> Result<PolarComplex> {
        if d == 0 || !self.level.is_multiple_of(d) {
            return Err(Error::NotDivisor {
                divisor: d,
                multiple: self.level,
            });
        }
        Ok(self.top.pow(self.level / d))
    }

    /// Projection `π_1` to the base circle (or plane).
    pub fn base(&self) -> PolarComplex {
        self.top.pow(self.level)
    }

    pub fn mul(&self, other: &SolenoidPoint) -> Result<SolenoidPoint> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Self::new(self.level, self.top.mul(&other.top))
    }

    pub fn inv(&self) -> Result<SolenoidPoint> {
        Self::new(self.level, self.top.inv()?)
    }

    /// A point at level `new_level` (a multiple of the current level) lying
    /// over this one; `branch` selects which root of the top coordinate.
    pub fn refine(&self, new_level: u64, branch: u64) -> Result<SolenoidPoint> {
        if new_level == 0 || !new_level.is_multiple_of(self.level) {
            return Err(Error::NotDivisor {
                divisor: self.level,
                multiple: new_level,
            });
        }
        let r = new_level / self.level;
        Self::new(new_level, self.top.root(r, branch)?)
    }

    /// Truncate to a lower level `d | M`.
    pub fn truncate(&self, d: u64) -> Result<SolenoidPoint> {
        Self::new(d, self.coordinate(d)?)
    }

    /// The unique `a` with `φ(a) = self`, when the point lies in the principal
    /// fiber (`π_1 = 1`).
    pub fn principal_fiber_preimage(&self) -> Option<ProfiniteInt> {
        if !self.base().is_one() {
            return None;
        }
        let a = self.top.turns() * BigRational::from(BigInt::from(self.level));
        debug_assert!(a.is_integer());
        use num_traits::ToPrimitive;
        let residue = a.to_integer().to_u64()?;
        ProfiniteInt::new(self.level, residue).ok()
    }
}

impl fmt::Display for SolenoidPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level={} {}", self.level, self.top)
    }
}

/// Covering map `p_{n,m}(z) = z^(m/n)` for `n | m`.
pub fn cover_map(n: u64, m: u64, z: &PolarComplex) -> Result<PolarComplex> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::NotDivisor {
            divisor: n,
            multiple: m,
        });
    }
    Ok(z.pow(m / n))
}

/// Inclusion `φ : Ẑ → S¹_Q` of the principal fiber.
pub fn phi(a: &ProfiniteInt) -> SolenoidPoint {
    let turns = BigRational::new(BigInt::from(a.residue()), BigInt::from(a.level()));
    SolenoidPoint {
        level: a.level(),
        top: PolarComplex::unit(turns),
    }
}

/// Baseleaf `ν`, with the argument measured in full turns of the base circle
/// (`t = θ / 2π`).
pub fn nu(turns: &BigRational, level: u64) -> Result<SolenoidPoint> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    let top = PolarComplex::unit(turns / BigRational::from(BigInt::from(level)));
    Ok(SolenoidPoint { level, top })
}

/// `exp(a, θ) = φ(a)·ν(θ)` at the level of `a`.
pub fn sol_exp(a: &ProfiniteInt, turns: &BigRational) -> Result<SolenoidPoint> {
    phi(a).mul(&nu(turns, a.level())?)
}

/// Divisors of `m` in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

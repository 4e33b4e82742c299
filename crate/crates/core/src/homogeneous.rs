//! Finite-level homogeneous coordinates `(C^n_Q − Z(F)_Q)/G_Q`.
//!
//! Points and torus parameters are stored at a single truncation level as
//! exact polar rationals. The torus `(C*)^s` acts through the charge matrix:
//! coordinate `i` is scaled by `∏_j t_j^{Q_ij}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice::{smith_normal_form, IntMatrix};
use crate::quotient::{charge_matrix, discriminant_locus, ChargeMatrix, DiscriminantAntichain};
use crate::solenoid::PolarComplex;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPoint {
    level: u64,
    coords: Vec<PolarComplex>,
}

impl HomogeneousPoint {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coords(&self) -> &[PolarComplex] {
        &self.coords
    }

    pub fn zero_set(&self) -> ConeRef {
        zero_set(&self.coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    level: u64,
    params: Vec<PolarComplex>,
}

impl TorusElement {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn params(&self) -> &[PolarComplex] {
        &self.params
    }

    /// Pullback `m_l^*`: every parameter raised to the `l`-th power.
    pub fn pow(&self, l: u64) -> TorusElement {
        TorusElement {
            level: self.level,
            params: self.params.iter().map(|t| t.pow(l)).collect(),
        }
    }

    pub fn mul(&self, other: &TorusElement) -> Result<TorusElement> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(TorusElement {
            level: self.level,
            params: self
                .params
                .iter()
                .zip(&other.params)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }
}

fn zero_set(coords: &[PolarComplex]) -> ConeRef {
    ConeRef::new(
        coords
            .iter()
            .enumerate()
            .filter(|(_, z)| z.is_zero())
            .map(|(i, _)| i)
            .collect(),
    )
}

/// Charge matrix and discriminant of a fan, packaged for point arithmetic.
#[derive(Clone, Debug)]
pub struct HomogeneousModel {
    charge: ChargeMatrix,
    discriminant: DiscriminantAntichain,
}

impl HomogeneousModel {
    pub fn new(fan: &Fan) -> Result<Self> {
        Ok(HomogeneousModel {
            charge: charge_matrix(fan)?,
            discriminant: discriminant_locus(fan),
        })
    }

    pub fn charge(&self) -> &ChargeMatrix {
        &self.charge
    }

    pub fn n_rays(&self) -> usize {
        self.charge.matrix().rows()
    }

    /// Number of torus parameters `s`.
    pub fn torus_rank(&self) -> usize {
        self.charge.rank()
    }

    fn check_len(&self, found: usize, expected: usize, what: &str) -> Result<()> {
        if found != expected {
            return Err(Error::Dimension(format!(
                "{what} has {found} entries, expected {expected}"
            )));
        }
        Ok(())
    }

    pub fn in_discriminant(&self, coords: &[PolarComplex]) -> Result<bool> {
        self.check_len(coords.len(), self.n_rays(), "coordinate vector")?;
        Ok(self.discriminant.contains_zero_set(&zero_set(coords)))
    }

    pub fn point(&self, level: u64, coords: Vec<PolarComplex>) -> Result<HomogeneousPoint> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        if self.in_discriminant(&coords)? {
            return Err(Error::InDiscriminant(zero_set(&coords).labels()));
        }
        Ok(HomogeneousPoint { level, coords })
    }

    pub fn torus(&self, level: u64, params: Vec<PolarComplex>) -> Result<TorusElement> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        self.check_len(params.len(), self.torus_rank(), "torus parameter vector")?;
        if params.iter().any(PolarComplex::is_zero) {
            return Err(Error::ZeroInverse);
        }
        Ok(TorusElement { level, params })
    }

    pub fn identity(&self, level: u64) -> Result<TorusElement> {
        self.torus(level, vec![PolarComplex::one(); self.torus_rank()])
    }

    /// Scaling factor `∏_j t_j^{Q_ij}` of coordinate `i`.
    pub fn character(&self, t: &TorusElement, i: usize) -> PolarComplex {
        self.charge
            .row(i)
            .iter()
            .zip(&t.params)
            .fold(PolarComplex::one(), |acc, (q, tj)| {
                acc.mul(&tj.powi(q).expect("torus parameters are nonzero"))
            })
    }

    pub fn act(&self, t: &TorusElement, z: &HomogeneousPoint) -> Result<HomogeneousPoint> {
        if t.level != z.level {
            return Err(Error::LevelMismatch {
                left: t.level,
                right: z.level,
            });
        }
        self.check_len(t.params.len(), self.torus_rank(), "torus parameter vector")?;
        self.check_len(z.coords.len(), self.n_rays(), "coordinate vector")?;
        let coords = z
            .coords
            .iter()
            .enumerate()
            .map(|(i, zi)| self.character(t, i).mul(zi))
            .collect();
        Ok(HomogeneousPoint {
            level: z.level,
            coords,
        })
    }

    /// The map `(z^l)^{⊗n}`.
    pub fn power_map(&self, l: u64, z: &HomogeneousPoint) -> Result<HomogeneousPoint> {
        if l == 0 {
            return Err(Error::Dimension(
                "power map exponent must be positive".into(),
            ));
        }
        Ok(HomogeneousPoint {
            level: z.level,
            coords: z.coords.iter().map(|c| c.pow(l)).collect(),
        })
    }

    /// `(z^l)^{⊗n}(t·z) = m_l^*(t)·(z^l)^{⊗n}(z)`, evaluated exactly.
    pub fn check_equivariance(
        &self,
        t: &TorusElement,
        z: &HomogeneousPoint,
        l: u64,
    ) -> Result<bool> {
        let left = self.power_map(l, &self.act(t, z)?)?;
        let right = self.act(&t.pow(l), &self.power_map(l, z)?)?;
        Ok(left == right)
    }

    /// Whether some `t ∈ (C*)^s` carries `z` to `w`.
    ///
    /// Moduli and angles decouple. Taking logs, the moduli need a real
    /// solution of `Q_I x = log(ρ'/ρ)` over the nonzero coordinates `I`; the
    /// logs of a pairwise coprime factor basis are linearly independent over
    /// Q, so this splits into one rational rank test per basis element. The
    /// angles need `Q_I θ ≡ δ (mod Z^I)`, read off the Smith form of `Q_I`.
    pub fn same_orbit(&self, z: &HomogeneousPoint, w: &HomogeneousPoint) -> Result<bool> {
        if z.level != w.level {
            return Err(Error::LevelMismatch {
                left: z.level,
                right: w.level,
            });
        }
        self.check_len(z.coords.len(), self.n_rays(), "coordinate vector")?;
        self.check_len(w.coords.len(), self.n_rays(), "coordinate vector")?;
        if z.zero_set() != w.zero_set() {
            return Ok(false);
        }
        let live: Vec<usize> = (0..self.n_rays())
            .filter(|&i| !z.coords[i].is_zero())
            .collect();
        if live.is_empty() {
            return Ok(true);
        }
        let q = self.charge.matrix().select_rows(&live);

        let ratios: Vec<BigRational> = live
            .iter()
            .map(|&i| w.coords[i].rho() / z.coords[i].rho())
            .collect();
        let mut atoms: Vec<BigInt> = Vec::new();
        for r in &ratios {
            atoms.push(r.numer().clone());
            atoms.push(r.denom().clone());
        }
        let basis = coprime_basis(atoms);
        let q_rank = q.rank();
        for b in &basis {
            let exps: Vec<BigInt> = ratios
                .iter()
                .map(|r| {
                    BigInt::from(valuation(r.numer(), b)) - BigInt::from(valuation(r.denom(), b))
                })
                .collect();
            if exps.iter().all(Zero::is_zero) {
                continue;
            }
            let mut data = Vec::with_capacity(live.len() * (q.cols() + 1));
            for (row, e) in exps.iter().enumerate() {
                data.extend_from_slice(q.row_slice(row));
                data.push(e.clone());
            }
            let augmented = IntMatrix::from_vec(live.len(), q.cols() + 1, data)?;
            if augmented.rank() != q_rank {
                return Ok(false);
            }
        }

        let deltas: Vec<BigRational> = live
            .iter()
            .map(|&i| w.coords[i].turns() - z.coords[i].turns())
            .collect();
        let snf = smith_normal_form(&q);
        let rank = snf.diagonal().iter().filter(|d| !d.is_zero()).count();
        for row in rank..live.len() {
            let mut acc = BigRational::zero();
            for (k, d) in deltas.iter().enumerate() {
                acc += d * BigRational::from(snf.u[(row, k)].clone());
            }
            if !acc.is_integer() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pairwise coprime integers `> 1` that multiplicatively generate every input
/// (signs and units are dropped).
fn coprime_basis(inputs: Vec<BigInt>) -> Vec<BigInt> {
    let mut basis: Vec<BigInt> = inputs
        .into_iter()
        .map(|x| x.abs())
        .filter(|x| *x > BigInt::one())
        .collect();
    basis.sort();
    basis.dedup();
    'restart: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.is_one() {
                    continue;
                }
                let (a, b) = (&basis[i] / &g, &basis[j] / &g);
                let mut next: Vec<BigInt> = basis
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, x)| x.clone())
                    .collect();
                next.extend([a, b, g].into_iter().filter(|x| *x > BigInt::one()));
                next.sort();
                next.dedup();
                basis = next;
                continue 'restart;
            }
        }
        return basis;
    }
}

/// Largest `k` with `b^k | x`, for `b > 1` and `x ≠ 0`.
fn valuation(x: &BigInt, b: &BigInt) -> u64 {
    let mut x = x.abs();
    let mut k = 0;
    while !x.is_zero() && x.is_multiple_of(b) {
        x /= b;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::standard;

    fn pc(rn: i64, rd: i64, tn: i64, td: i64) -> PolarComplex {
        PolarComplex::from_ratios(rn, rd, tn, td)
    }

    #[test]
    fn discriminant_membership() {
        let cp2 = HomogeneousModel::new(&standard::cp2()).unwrap();
        let zero = PolarComplex::zero();
        let one = PolarComplex::one();
        assert!(cp2
            .in_discriminant(&[zero.clone(), zero.clone(), zero.clone()])
            .unwrap());
        assert!(!cp2
            .in_discriminant(&[one.clone(), zero.clone(), zero.clone()])
            .unwrap());
        let prod = HomogeneousModel::new(&standard::cp1xcp1()).unwrap();
        assert!(prod
            .in_discriminant(&[zero.clone(), zero.clone(), one.clone(), one.clone()])
            .unwrap());
        assert!(!prod
            .in_discriminant(&[zero.clone(), one.clone(), zero, one])
            .unwrap());
        assert!(cp2.in_discriminant(&[PolarComplex::one()]).is_err());
        assert!(matches!(
            cp2.point(1, vec![PolarComplex::zero(); 3]),
            Err(Error::InDiscriminant(_))
        ));
    }

    #[test]
    fn cp1_scaling() {
        let m = HomogeneousModel::new(&standard::cp1()).unwrap();
        let z = m.point(1, vec![pc(1, 1, 0, 1), pc(1, 1, 0, 1)]).unwrap();
        let t = m.torus(1, vec![pc(2, 1, 0, 1)]).unwrap();
        assert_eq!(
            m.act(&t, &z).unwrap().coords(),
            &[pc(2, 1, 0, 1), pc(2, 1, 0, 1)]
        );
        assert_eq!(m.act(&m.identity(1).unwrap(), &z).unwrap(), z);
        let other = m.torus(2, vec![pc(2, 1, 0, 1)]).unwrap();
        assert!(matches!(
            m.act(&other, &z),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn power_map_examples() {
        let m = HomogeneousModel::new(&standard::cp2()).unwrap();
        let z = m
            .point(1, vec![pc(1, 1, 1, 3), pc(1, 1, 0, 1), pc(2, 1, 1, 2)])
            .unwrap();
        assert_eq!(m.power_map(1, &z).unwrap(), z);
        assert_eq!(
            m.power_map(3, &z).unwrap().coords(),
            &[pc(1, 1, 0, 1), pc(1, 1, 0, 1), pc(8, 1, 1, 2)]
        );
        let with_zero = m
            .point(
                1,
                vec![PolarComplex::zero(), pc(3, 1, 1, 5), pc(1, 2, 0, 1)],
            )
            .unwrap();
        for l in 1..6 {
            assert!(m.power_map(l, &with_zero).unwrap().coords()[0].is_zero());
        }
    }

    #[test]
    fn cp1_equivariance_example() {
        let m = HomogeneousModel::new(&standard::cp1()).unwrap();
        let t = m.torus(1, vec![pc(1, 1, 1, 6)]).unwrap();
        let z = m.point(1, vec![pc(1, 1, 0, 1), pc(1, 1, 1, 4)]).unwrap();
        let left = m.power_map(2, &m.act(&t, &z).unwrap()).unwrap();
        assert_eq!(left.coords(), &[pc(1, 1, 1, 3), pc(1, 1, 5, 6)]);
        assert!(m.check_equivariance(&t, &z, 2).unwrap());
        assert!(m.check_equivariance(&t, &z, 1).unwrap());
    }

    #[test]
    fn negative_charges_act() {
        let m = HomogeneousModel::new(&standard::hirzebruch(2)).unwrap();
        let t = m.torus(1, vec![pc(2, 1, 1, 3), pc(1, 3, 1, 4)]).unwrap();
        let z = m
            .point(
                1,
                vec![
                    pc(1, 1, 0, 1),
                    pc(5, 1, 0, 1),
                    pc(1, 1, 1, 2),
                    pc(2, 3, 0, 1),
                ],
            )
            .unwrap();
        for l in 1..=12 {
            assert!(m.check_equivariance(&t, &z, l).unwrap());
        }
    }

    #[test]
    fn orbits() {
        let m = HomogeneousModel::new(&standard::cp1()).unwrap();
        let one = m.point(1, vec![pc(1, 1, 0, 1), pc(1, 1, 0, 1)]).unwrap();
        let bad = m.point(1, vec![pc(2, 1, 0, 1), pc(3, 1, 0, 1)]).unwrap();
        assert!(!m.same_orbit(&one, &bad).unwrap());
        assert!(m.same_orbit(&one, &one).unwrap());
        let t = m.torus(1, vec![pc(7, 4, 2, 5)]).unwrap();
        assert!(m.same_orbit(&one, &m.act(&t, &one).unwrap()).unwrap());
        let twisted = m.point(1, vec![pc(1, 1, 0, 1), pc(1, 1, 1, 2)]).unwrap();
        assert!(!m.same_orbit(&one, &twisted).unwrap());
        let zero = m
            .point(1, vec![PolarComplex::zero(), pc(1, 1, 0, 1)])
            .unwrap();
        assert!(!m.same_orbit(&one, &zero).unwrap());
    }

    #[test]
    fn orbits_with_weights() {
        // Q = (1,1,2): ratios (a, a, a^2) are in the orbit, (2, 2, 2) is not.
        let m = HomogeneousModel::new(&standard::cp11n(2)).unwrap();
        let base = m.point(1, vec![pc(1, 1, 0, 1); 3]).unwrap();
        let good = m
            .point(1, vec![pc(6, 1, 0, 1), pc(6, 1, 0, 1), pc(36, 1, 0, 1)])
            .unwrap();
        let bad = m
            .point(1, vec![pc(2, 1, 0, 1), pc(2, 1, 0, 1), pc(2, 1, 0, 1)])
            .unwrap();
        assert!(m.same_orbit(&base, &good).unwrap());
        assert!(!m.same_orbit(&base, &bad).unwrap());
        // With z_3 = 0 only the first two coordinates constrain t.
        let z = m
            .point(
                1,
                vec![pc(1, 1, 0, 1), pc(1, 1, 0, 1), PolarComplex::zero()],
            )
            .unwrap();
        let w = m
            .point(
                1,
                vec![pc(4, 9, 1, 7), pc(4, 9, 1, 7), PolarComplex::zero()],
            )
            .unwrap();
        assert!(m.same_orbit(&z, &w).unwrap());
    }

    #[test]
    fn coprime_factor_basis() {
        let b = coprime_basis(vec![BigInt::from(12), BigInt::from(18), BigInt::from(1)]);
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                assert!(x.gcd(y).is_one());
            }
        }
        assert_eq!(b, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(valuation(&BigInt::from(-24), &BigInt::from(2)), 3);
    }
}

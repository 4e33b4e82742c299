//! Dual cones and Hilbert bases of rational polyhedral cones.
//!
//! Dual cones come from a double description pass over exact integers.
//! Hilbert bases are built from the lattice points of the fundamental
//! parallelepipeds of a triangulation, then filtered down to irreducibles.
//! Cones with a lineality space are handled by passing to the pointed
//! quotient and adding the lineality basis with both signs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice::{
    graded_lex_cmp, integer_kernel, primitive, smith_normal_form, IntMatrix, IntVector,
};

/// Cone generated by integer vectors, stored primitive and without duplicates.
/// An empty generator list is the zero cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    ambient_rank: usize,
    generators: Vec<IntVector>,
}

impl RationalCone {
    pub fn new(ambient_rank: usize, generators: Vec<IntVector>) -> Result<Self> {
        if ambient_rank == 0 {
            return Err(Error::ZeroLatticeRank);
        }
        let mut gens: Vec<IntVector> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != ambient_rank {
                return Err(Error::Dimension(format!(
                    "generator {g} does not live in rank {ambient_rank}"
                )));
            }
            let p = primitive(&g)?;
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        Ok(RationalCone {
            ambient_rank,
            generators: gens,
        })
    }

    pub fn from_i64s(ambient_rank: usize, generators: &[&[i64]]) -> Result<Self> {
        Self::new(
            ambient_rank,
            generators.iter().map(|g| IntVector::from_i64s(g)).collect(),
        )
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Inequality description `{ x : ⟨h, x⟩ ≥ 0 for h in the result }`.
    pub fn facets(&self) -> Vec<IntVector> {
        dual_cone(self).generators
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.facets().iter().all(|h| !h.dot(x).is_negative())
    }

    /// Whether the cone contains no line.
    pub fn is_pointed(&self) -> bool {
        self.split().lineality.is_empty()
    }

    /// Extreme rays plus lineality basis.
    pub fn split(&self) -> ConeParts {
        ConeParts::of_inequalities(self.ambient_rank, &self.facets())
    }
}

/// A cone written as `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeParts {
    pub rays: Vec<IntVector>,
    /// Saturated lattice basis in column Hermite normal form.
    pub lineality: Vec<IntVector>,
}

impl ConeParts {
    /// Solves `{ x : ⟨a, x⟩ ≥ 0 for every a in inequalities }`.
    ///
    /// Rays are only defined modulo the lineality space, so callers that want
    /// canonical rays should make the cone pointed with explicit equalities.
    pub fn of_inequalities(dim: usize, inequalities: &[IntVector]) -> Self {
        let (rays, _) = double_description(dim, inequalities);
        let lineality = if inequalities.is_empty() {
            IntMatrix::identity(dim).columns()
        } else {
            integer_kernel(&IntMatrix::from_rows(inequalities, dim)).columns()
        };
        let mut rays = rays;
        rays.sort_by(graded_lex_cmp);
        ConeParts { rays, lineality }
    }
}

/// Double description: extreme rays (modulo lineality) and a lineality basis
/// of the cone cut out by `inequalities`.
fn double_description(dim: usize, inequalities: &[IntVector]) -> (Vec<IntVector>, Vec<IntVector>) {
    let mut lin: Vec<IntVector> = IntMatrix::identity(dim).columns();
    let mut rays: Vec<IntVector> = Vec::new();
    let mut processed: Vec<IntVector> = Vec::new();

    for a in inequalities {
        if let Some(p) = lin.iter().position(|b| !a.dot(b).is_zero()) {
            let mut b = lin.remove(p);
            if a.dot(&b).is_negative() {
                b = b.neg();
            }
            let ab = a.dot(&b);
            let project = |v: &IntVector| -> IntVector {
                let av = a.dot(v);
                primitive(&v.scale(&ab).sub(&b.scale(&av))).expect("projection is nonzero")
            };
            lin = lin.iter().map(project).collect();
            rays = rays.iter().map(project).collect();
            rays.push(primitive(&b).expect("nonzero"));
        } else {
            let rank = if processed.is_empty() {
                0
            } else {
                IntMatrix::from_rows(&processed, dim).rank()
            };
            let values: Vec<BigInt> = rays.iter().map(|r| a.dot(r)).collect();
            let mut next: Vec<IntVector> = rays
                .iter()
                .zip(&values)
                .filter(|(_, v)| !v.is_negative())
                .map(|(r, _)| r.clone())
                .collect();
            for (i, vp) in values.iter().enumerate() {
                if !vp.is_positive() {
                    continue;
                }
                for (j, vn) in values.iter().enumerate() {
                    if !vn.is_negative() || !adjacent(&processed, &rays[i], &rays[j], rank, dim) {
                        continue;
                    }
                    let combo = rays[j].scale(vp).sub(&rays[i].scale(vn));
                    let combo = primitive(&combo).expect("adjacent rays are independent");
                    if !next.contains(&combo) {
                        next.push(combo);
                    }
                }
            }
            rays = next;
        }
        processed.push(a.clone());
    }
    (rays, lin)
}

/// Algebraic adjacency test for two extreme rays of `{ x : processed ≥ 0 }`.
fn adjacent(
    processed: &[IntVector],
    p: &IntVector,
    q: &IntVector,
    rank: usize,
    dim: usize,
) -> bool {
    if rank < 2 {
        return false;
    }
    let tight: Vec<IntVector> = processed
        .iter()
        .filter(|a| a.dot(p).is_zero() && a.dot(q).is_zero())
        .cloned()
        .collect();
    let r = if tight.is_empty() {
        0
    } else {
        IntMatrix::from_rows(&tight, dim).rank()
    };
    r == rank - 2
}

/// Dual cone `{ m : ⟨m, v⟩ ≥ 0 for all generators v }`.
///
/// The pointed part is represented inside the span of `sigma`; when `sigma`
/// is not full-dimensional the result also lists a basis of `sigma^⊥` and its
/// negation. Output is sorted graded-lexicographically.
pub fn dual_cone(sigma: &RationalCone) -> RationalCone {
    let parts = dual_parts(sigma);
    let mut gens = parts.rays;
    for l in &parts.lineality {
        gens.push(l.clone());
        gens.push(l.neg());
    }
    gens.sort_by(graded_lex_cmp);
    RationalCone {
        ambient_rank: sigma.ambient_rank,
        generators: gens,
    }
}

fn dual_parts(sigma: &RationalCone) -> ConeParts {
    let d = sigma.ambient_rank;
    let orth = if sigma.generators.is_empty() {
        IntMatrix::identity(d).columns()
    } else {
        integer_kernel(&IntMatrix::from_rows(&sigma.generators, d)).columns()
    };
    let mut ineqs = sigma.generators.clone();
    for l in &orth {
        ineqs.push(l.clone());
        ineqs.push(l.neg());
    }
    let (mut rays, rest) = double_description(d, &ineqs);
    debug_assert!(rest.is_empty() || sigma.generators.is_empty() && orth.len() == d);
    if orth.len() == d {
        rays.clear();
    }
    rays.sort_by(graded_lex_cmp);
    ConeParts {
        rays,
        lineality: orth,
    }
}

/// Minimal generating set of `cone ∩ Z^rank` (with lineality generators in ± pairs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub cone: RationalCone,
    pub generators: Vec<IntVector>,
    pub rank_r: usize,
}

pub fn hilbert_basis(cone: &RationalCone) -> HilbertBasis {
    let d = cone.ambient_rank;
    let facets = cone.facets();
    let parts = ConeParts::of_inequalities(d, &facets);

    let mut gens = if parts.lineality.is_empty() {
        pointed_hilbert_basis(d, &parts.rays, &facets)
    } else {
        quotient_hilbert_basis(cone, &parts.lineality)
    };
    gens.sort_by(graded_lex_cmp);
    gens.dedup();
    HilbertBasis {
        cone: cone.clone(),
        rank_r: gens.len(),
        generators: gens,
    }
}

fn in_cone(facets: &[IntVector], x: &IntVector) -> bool {
    facets.iter().all(|h| !h.dot(x).is_negative())
}

fn pointed_hilbert_basis(d: usize, rays: &[IntVector], facets: &[IntVector]) -> Vec<IntVector> {
    if rays.is_empty() {
        return Vec::new();
    }
    let mut candidates: Vec<IntVector> = rays.to_vec();
    for simplex in triangulate(d, rays) {
        let gens: Vec<IntVector> = simplex.iter().map(|&i| rays[i].clone()).collect();
        for p in parallelepiped_points(d, &gens) {
            if !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    // an element is reducible iff some other candidate lies below it in the cone order
    let irreducible = |x: &IntVector| {
        !candidates
            .iter()
            .any(|y| y != x && in_cone(facets, &x.sub(y)))
    };
    candidates
        .iter()
        .filter(|x| irreducible(x))
        .cloned()
        .collect()
}

/// Nonzero lattice points of `{ Σ λ_i g_i : 0 ≤ λ_i < 1 }` for linearly
/// independent `gens`.
fn parallelepiped_points(d: usize, gens: &[IntVector]) -> Vec<IntVector> {
    let r = IntMatrix::from_columns(gens, d);
    let k = gens.len();
    let snf = smith_normal_form(&r);
    let diag = snf.diagonal();
    let mut out = Vec::new();
    let mut counter = vec![BigInt::zero(); k];
    loop {
        if counter.iter().any(|c| !c.is_zero()) {
            // λ = V·μ with μ_i = c_i / d_i, then take fractional parts
            let lambda: Vec<BigRational> = (0..k)
                .map(|row| {
                    let mut s = BigRational::zero();
                    for (col, c) in counter.iter().enumerate() {
                        s += BigRational::new(&snf.v[(row, col)] * c, diag[col].clone());
                    }
                    s.clone() - s.floor()
                })
                .collect();
            let point: Vec<BigInt> = (0..d)
                .map(|row| {
                    let s: BigRational = (0..k)
                        .map(|col| BigRational::from(r[(row, col)].clone()) * &lambda[col])
                        .sum();
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect();
            let point = IntVector::new(point).expect("positive dimension");
            if !point.is_zero() && !out.contains(&point) {
                out.push(point);
            }
        }
        // odometer over ∏ [0, d_i)
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            counter[i] += 1;
            if counter[i] < diag[i] {
                break;
            }
            counter[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Pulling triangulation of the pointed cone spanned by `rays` (all extreme).
/// Returns index sets of linearly independent rays.
fn triangulate(d: usize, rays: &[IntVector]) -> Vec<Vec<usize>> {
    let rank = IntMatrix::from_rows(rays, d).rank();
    if rays.len() == rank {
        return vec![(0..rays.len()).collect()];
    }
    let cone = RationalCone {
        ambient_rank: d,
        generators: rays.to_vec(),
    };
    let apex = &rays[0];
    let mut out = Vec::new();
    for h in dual_parts(&cone).rays {
        if !h.dot(apex).is_positive() {
            continue;
        }
        let facet: Vec<usize> = (0..rays.len())
            .filter(|&i| h.dot(&rays[i]).is_zero())
            .collect();
        let facet_rays: Vec<IntVector> = facet.iter().map(|&i| rays[i].clone()).collect();
        for simplex in triangulate(d, &facet_rays) {
            let mut s: Vec<usize> = simplex.iter().map(|&i| facet[i]).collect();
            s.push(0);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// Hilbert basis of a cone with nontrivial lineality space `lineality`
/// (a saturated basis in column Hermite normal form).
fn quotient_hilbert_basis(cone: &RationalCone, lineality: &[IntVector]) -> Vec<IntVector> {
    let d = cone.ambient_rank;
    let k = IntMatrix::from_columns(lineality, d);
    let mut out: Vec<IntVector> = Vec::new();
    for l in lineality {
        out.push(l.clone());
        out.push(l.neg());
    }
    let q = d - lineality.len();
    if q == 0 {
        return out;
    }
    // surjection Z^d → Z^q with kernel exactly the lineality lattice
    let proj = integer_kernel(&k.transpose()).transpose();
    let images: Vec<IntVector> = cone
        .generators
        .iter()
        .map(|g| IntVector::new(proj.mul_vec(g)).expect("positive dimension"))
        .filter(|g| !g.is_zero())
        .collect();
    let quotient = RationalCone::new(q, images).expect("projected generators are valid");
    let basis = hilbert_basis(&quotient);

    // right inverse S of the projection: P·S = I
    let snf = smith_normal_form(&proj);
    let mut embed = IntMatrix::zeros(d, q);
    for i in 0..q {
        embed[(i, i)] = BigInt::one();
    }
    let section = snf.v.mul(&embed).mul(&snf.u);
    for h in basis.generators {
        let lift = IntVector::new(section.mul_vec(&h)).expect("positive dimension");
        out.push(reduce_modulo(&lift, &k));
    }
    out
}

/// Canonical representative of `x` modulo the column lattice of `k`
/// (which must be in column Hermite normal form).
fn reduce_modulo(x: &IntVector, k: &IntMatrix) -> IntVector {
    let mut x = x.clone();
    for j in 0..k.cols() {
        let col = k.column(j);
        let Some(p) = col.entries().iter().position(|e| !e.is_zero()) else {
            continue;
        };
        let q = x.entries()[p].div_floor(&col.entries()[p]);
        x = x.sub(&col.scale(&q));
    }
    x
}

/// Size `r` of the Hilbert basis of the dual of `cone`, i.e. the rank of the
/// affine semigroup that controls the profinite fiber over the affine chart.
pub fn affine_fiber_rank(fan: &Fan, cone: &ConeRef) -> Result<usize> {
    Ok(affine_semigroup(fan, cone)?.rank_r)
}

/// Hilbert basis of `σ^∨ ∩ M` for a cone of the fan.
pub fn affine_semigroup(fan: &Fan, cone: &ConeRef) -> Result<HilbertBasis> {
    if !fan.is_cone(cone)? {
        return Err(Error::Dimension(format!(
            "rays {:?} do not span a cone of the fan",
            cone.labels()
        )));
    }
    let sigma = RationalCone::new(fan.lattice_rank(), fan.generators(cone))?;
    Ok(hilbert_basis(&dual_cone(&sigma)))
}

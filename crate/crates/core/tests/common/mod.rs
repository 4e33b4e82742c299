//! Independent oracles and seeded checks shared by the acceptance runner and
//! the property suite. Each check returns `Err` with a counterexample.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_completion::fan::{standard, ConeRef, Fan};
use toric_completion::homogeneous::HomogeneousModel;
use toric_completion::kring::rewrite::{agrees, Rewriter};
use toric_completion::kring::{level_image, reduce, FormalSum, KRingElement};
use toric_completion::lattice::{
    column_hnf, integer_kernel, smith_normal_form, IntMatrix, IntVector,
};
use toric_completion::quotient::{
    charge_matrix, discriminant_locus, symmetry_from_rows, ChargeMatrix,
};
use toric_completion::semigroup::{hilbert_basis, RationalCone};
use toric_completion::solenoid::{
    cover_map, divisors, nu, phi, PolarComplex, ProfiniteInt, SolenoidPoint,
};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The five example families as shipped: name, fan.
pub fn example_fans() -> Vec<(String, Fan)> {
    let mut v = vec![
        ("CP1".to_string(), standard::cp1()),
        ("CP1xCP1".to_string(), standard::cp1xcp1()),
        ("CP2".to_string(), standard::cp2()),
    ];
    for n in [2, 3, 5] {
        v.push((format!("CP(1,1,{n})"), standard::cp11n(n)));
    }
    for n in [1, 2, 3] {
        v.push((format!("F_{n}"), standard::hirzebruch(n)));
    }
    v
}

pub fn hnf_of(rows: &[&[i64]]) -> IntMatrix {
    column_hnf(&IntMatrix::from_i64_rows(
        &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    ))
}

// ---------------------------------------------------------------------------
// Hilbert basis oracle (i128 arithmetic, no duality)

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Membership in the cone spanned by `gens` via Carathéodory: `x` is a
/// nonnegative combination of some linearly independent subset.
pub struct ConeOracle {
    dim: usize,
    /// (generator indices, chosen rows, determinant of the square system)
    systems: Vec<(Vec<usize>, Vec<usize>, i128)>,
    gens: Vec<Vec<i128>>,
}

impl ConeOracle {
    pub fn new(gens: &[Vec<i64>]) -> Self {
        let dim = gens.first().map_or(0, Vec::len);
        let gens: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let mut systems = Vec::new();
        for k in 1..=dim.min(gens.len()) {
            for s in subsets(gens.len(), k) {
                for rows in subsets(dim, k) {
                    let m: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|&r| s.iter().map(|&g| gens[g][r]).collect())
                        .collect();
                    let d = det(&m);
                    if d != 0 {
                        systems.push((s.clone(), rows, d));
                        break;
                    }
                }
            }
        }
        ConeOracle { dim, systems, gens }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if x.iter().all(|&v| v == 0) {
            return true;
        }
        let x: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        'system: for (s, rows, d) in &self.systems {
            let k = s.len();
            // Cramer: lambda_i = det_i / d
            let mut num = vec![0i128; k];
            for (i, n) in num.iter_mut().enumerate() {
                let m: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&r| {
                        (0..k)
                            .map(|c| if c == i { x[r] } else { self.gens[s[c]][r] })
                            .collect()
                    })
                    .collect();
                *n = det(&m);
                if n.signum() * d.signum() < 0 {
                    continue 'system;
                }
            }
            for (r, xr) in x.iter().enumerate() {
                let lhs: i128 = (0..k).map(|c| num[c] * self.gens[s[c]][r]).sum();
                if lhs != xr * d {
                    continue 'system;
                }
            }
            return true;
        }
        false
    }
}

/// Whether `x` is a sum of elements of `basis` (skipping index `skip`).
fn representable(
    x: &[i64],
    basis: &[Vec<i64>],
    skip: Option<usize>,
    cone: &ConeOracle,
    memo: &mut HashMap<Vec<i64>, bool>,
) -> bool {
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    if let Some(&hit) = memo.get(x) {
        return hit;
    }
    let mut found = false;
    for (i, h) in basis.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let y: Vec<i64> = x.iter().zip(h).map(|(a, b)| a - b).collect();
        if cone.contains(&y) && representable(&y, basis, skip, cone, memo) {
            found = true;
            break;
        }
    }
    memo.insert(x.to_vec(), found);
    found
}

fn box_points(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![vec![]];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-bound..=bound).map(move |v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    pts
}

/// Bounded generation on the box `[-bound, bound]^d` and minimality of the basis.
pub fn check_hilbert_basis(gens: &[Vec<i64>], basis: &[Vec<i64>], bound: i64) -> Check {
    let cone = ConeOracle::new(gens);
    for h in basis {
        if h.iter().all(|&v| v == 0) {
            return Err(format!("zero vector in basis of {gens:?}"));
        }
        if !cone.contains(h) {
            return Err(format!("{h:?} outside cone {gens:?}"));
        }
    }
    let dim = gens[0].len();
    let mut memo = HashMap::new();
    for x in box_points(dim, bound) {
        if cone.contains(&x) && !representable(&x, basis, None, &cone, &mut memo) {
            return Err(format!("{x:?} in cone {gens:?} not generated by {basis:?}"));
        }
    }
    for i in 0..basis.len() {
        let mut memo = HashMap::new();
        if representable(&basis[i], basis, Some(i), &cone, &mut memo) {
            return Err(format!(
                "{:?} is redundant in {basis:?} for {gens:?}",
                basis[i]
            ));
        }
    }
    Ok(())
}

/// Random pointed cone of rank 1..=3 with entries in [-5, 5].
pub fn random_pointed_cone(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let dim = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=dim + 1);
        let gens: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..dim).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        if gens.iter().any(|g| g.iter().all(|&v| v == 0)) {
            continue;
        }
        let vs: Vec<IntVector> = gens.iter().map(|g| IntVector::from_i64s(g)).collect();
        let cone = RationalCone::new(dim, vs).unwrap();
        if cone.is_pointed() {
            return gens;
        }
    }
}

pub fn hilbert_suite(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for _ in 0..count {
        let gens = random_pointed_cone(&mut r);
        let dim = gens[0].len();
        let vs: Vec<IntVector> = gens.iter().map(|g| IntVector::from_i64s(g)).collect();
        let hb = hilbert_basis(&RationalCone::new(dim, vs).unwrap());
        let basis: Vec<Vec<i64>> = hb.generators.iter().map(|v| v.to_i64s().unwrap()).collect();
        if hb.rank_r != basis.len() {
            return Err(format!("r = {} but {} generators", hb.rank_r, basis.len()));
        }
        check_hilbert_basis(&gens, &basis, 5)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Solenoid identities

pub fn nu_equals_phi(max_level: u64, range: i64) -> Check {
    for m in 1..=max_level {
        for n in -range..=range {
            let lhs = nu(&q(n, 1), m).map_err(|e| e.to_string())?;
            let rhs = phi(&ProfiniteInt::from_integer(n, m).unwrap());
            if lhs != rhs {
                return Err(format!("nu(2π·{n}) != phi({n}) at level {m}"));
            }
        }
    }
    Ok(())
}

pub fn cover_functoriality(max_level: u64) -> Check {
    let samples = [
        PolarComplex::from_ratios(3, 2, 5, 7),
        PolarComplex::from_ratios(1, 1, 1, 12),
        PolarComplex::zero(),
    ];
    for l in 1..=max_level {
        for m in divisors(l) {
            for n in divisors(m) {
                for z in &samples {
                    let two = cover_map(n, m, &cover_map(m, l, z).unwrap()).unwrap();
                    let one = cover_map(n, l, z).unwrap();
                    if two != one {
                        return Err(format!(
                            "p_{{{n},{m}}}∘p_{{{m},{l}}} != p_{{{n},{l}}} at {z}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `φ` lands in the fiber over 1, is injective, and every level-`M` point
/// over 1 among the `M²`-th roots of unity is hit exactly once.
pub fn exact_sequence(max_level: u64) -> Check {
    for m in 1..=max_level {
        let mut images = std::collections::HashSet::new();
        for a in 0..m {
            let p = phi(&ProfiniteInt::new(m, a).unwrap());
            if !p.base().is_one() {
                return Err(format!("pi_1(phi({a})) != 1 at level {m}"));
            }
            images.insert(p.top().clone());
        }
        if images.len() as u64 != m {
            return Err(format!("phi not injective at level {m}"));
        }
        for j in 0..m * m {
            let z = SolenoidPoint::new(m, PolarComplex::unit(q(j as i64, (m * m) as i64))).unwrap();
            let in_fiber = z.base().is_one();
            if in_fiber != images.contains(z.top()) {
                return Err(format!("fiber mismatch for {z}"));
            }
            match (in_fiber, z.principal_fiber_preimage()) {
                (true, Some(a)) if phi(&a) == z => {}
                (false, None) => {}
                (_, pre) => return Err(format!("preimage {pre:?} wrong for {z}")),
            }
        }
        let off = SolenoidPoint::new(m, PolarComplex::from_ratios(2, 1, 0, 1)).unwrap();
        if off.principal_fiber_preimage().is_some() {
            return Err("modulus 2 point in the fiber".into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Equivariance

pub fn random_polar(rng: &mut ChaCha8Rng, allow_zero: bool) -> PolarComplex {
    if allow_zero && rng.gen_bool(0.2) {
        return PolarComplex::zero();
    }
    let rn = rng.gen_range(1..=6);
    let rd = rng.gen_range(1..=6);
    let td = rng.gen_range(1..=24);
    let tn = rng.gen_range(0..td);
    PolarComplex::from_ratios(rn, rd, tn, td)
}

pub fn equivariance(fan: &Fan, samples: usize, seed: u64) -> Check {
    let model = HomogeneousModel::new(fan).map_err(|e| e.to_string())?;
    let mut r = rng(seed);
    let mut done = 0;
    while done < samples {
        let level = r.gen_range(1..=12u64);
        let coords: Vec<PolarComplex> = (0..model.n_rays())
            .map(|_| random_polar(&mut r, true))
            .collect();
        let Ok(z) = model.point(level, coords) else {
            continue;
        };
        let params = (0..model.torus_rank())
            .map(|_| random_polar(&mut r, false))
            .collect();
        let t = model.torus(level, params).unwrap();
        let l = r.gen_range(1..=12u64);
        if !model
            .check_equivariance(&t, &z, l)
            .map_err(|e| e.to_string())?
        {
            return Err(format!("equivariance fails for t={t:?} z={z:?} l={l}"));
        }
        done += 1;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// K-ring

pub fn random_formal_sum(rng: &mut ChaCha8Rng) -> FormalSum {
    let terms = rng.gen_range(0..=6);
    FormalSum::from_terms((0..terms).map(|_| {
        let d = rng.gen_range(1..=24);
        let n = rng.gen_range(-3 * d..=3 * d);
        let mut c = rng.gen_range(-9..=9);
        if c == 0 {
            c = 1;
        }
        (q(n, d), BigInt::from(c))
    }))
}

pub fn kring_oracle(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let mut path_rng = rng(seed ^ 0xabcdef);
    for _ in 0..count {
        let s = random_formal_sum(&mut r);
        let closed = reduce(&s);
        let mut choose = |n: usize| path_rng.gen_range(0..n);
        let form = Rewriter::new(&mut choose).normalize(&s);
        if !agrees(&form, &closed) {
            return Err(format!(
                "rewriting {s} gives {form:?}, closed form {closed}"
            ));
        }
        let t = random_formal_sum(&mut r);
        if reduce(&s.mul(&t)) != closed.multiply(&reduce(&t)) {
            return Err(format!("reduce not multiplicative on {s} and {t}"));
        }
        if reduce(&s.add(&t)) != closed.add(&reduce(&t)) {
            return Err(format!("reduce not additive on {s} and {t}"));
        }
    }
    Ok(())
}

pub fn kring_directedness(max: u64) -> Check {
    let mut elements = Vec::new();
    for d in 1..=max as i64 {
        for n in -2 * d..=2 * d {
            elements.push(KRingElement::new(1, q(n, d)));
        }
    }
    for n in 1..=max {
        for m in 1..=max {
            if m % n != 0 {
                continue;
            }
            let (small, big) = (level_image(n), level_image(m));
            if let Some(e) = elements.iter().find(|e| small(e) && !big(e)) {
                return Err(format!("{e} in level {n} but not level {m}"));
            }
        }
    }
    for e in &elements {
        if !(1..=max).any(|n| level_image(n)(e)) {
            return Err(format!("{e} in no level ≤ {max}"));
        }
    }
    Ok(())
}

pub fn kring_worked_identity() -> Check {
    let half = FormalSum::monomial(q(1, 2), 1);
    let rhs = FormalSum::from_terms([(q(1, 2), BigInt::from(2)), (q(0, 1), BigInt::from(-1))]);
    let lhs = reduce(&half.mul(&half));
    if lhs != reduce(&rhs) || lhs != KRingElement::new(1, q(1, 1)) {
        return Err(format!(
            "x^(1/2)·x^(1/2) = {lhs}, 2x^(1/2) − 1 = {}",
            reduce(&rhs)
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Lattice / fan / quotient properties

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    IntMatrix::from_i64_rows(&data)
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

pub fn check_snf(a: &IntMatrix) -> Check {
    let snf = smith_normal_form(a);
    if snf.u.mul(a).mul(&snf.v) != snf.d {
        return Err(format!("U·A·V != D for\n{a}"));
    }
    if !is_unit(&snf.u.det()) || !is_unit(&snf.v.det()) {
        return Err(format!("non-unimodular transform for\n{a}"));
    }
    for i in 0..snf.d.rows() {
        for j in 0..snf.d.cols() {
            if i != j && !snf.d[(i, j)].is_zero() {
                return Err(format!("off-diagonal entry in D for\n{a}"));
            }
        }
    }
    let diag = snf.diagonal();
    for w in diag.windows(2) {
        if w[0].is_negative() || w[1].is_negative() {
            return Err("negative invariant factor".into());
        }
        let divides = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        };
        if !divides {
            return Err(format!("divisibility chain broken: {diag:?}"));
        }
    }
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    if rank != a.rank() {
        return Err("SNF rank differs from Bareiss rank".into());
    }
    Ok(())
}

pub fn check_kernel(a: &IntMatrix) -> Check {
    let k = integer_kernel(a);
    if k.rows() != a.cols() || k.cols() != a.cols() - a.rank() {
        return Err(format!(
            "kernel has shape {}x{} for\n{a}",
            k.rows(),
            k.cols()
        ));
    }
    if !a.mul(&k).is_zero() {
        return Err(format!("A·K != 0 for\n{a}"));
    }
    if k.cols() > 0 {
        let snf = smith_normal_form(&k);
        if !snf.diagonal().iter().all(is_unit) {
            return Err(format!("kernel basis not saturated for\n{a}"));
        }
    }
    Ok(())
}

/// Enumerated kernel vectors in a small box all lie in the integer span of the basis.
pub fn check_kernel_span(a: &IntMatrix, bound: i64) -> Check {
    let k = integer_kernel(a);
    let hnf = column_hnf(&k);
    for x in box_points(a.cols(), bound) {
        let v = IntVector::from_i64s(&x);
        if !a.mul_vec(&v).iter().all(Zero::is_zero) {
            continue;
        }
        let mut cols = hnf.columns();
        cols.push(v);
        let extended = column_hnf(&IntMatrix::from_columns(&cols, a.cols()));
        if extended != hnf {
            return Err(format!("kernel vector {x:?} not in span for\n{a}"));
        }
    }
    Ok(())
}

pub fn matrix_suite(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let a = random_matrix(&mut r, 6);
        check_snf(&a)?;
        check_kernel(&a)?;
        if i % 10 == 0 && a.cols() <= 4 {
            check_kernel_span(&a, 2)?;
        }
    }
    Ok(())
}

fn faces_closed(fan: &Fan) -> Check {
    let cones: std::collections::BTreeSet<ConeRef> = fan.cones().cloned().collect();
    for c in &cones {
        for drop in 0..c.len() {
            let mut idx = c.indices().to_vec();
            idx.remove(drop);
            let face = ConeRef::new(idx);
            if !cones.contains(&face) || !fan.is_cone(&face).unwrap() {
                return Err(format!(
                    "face {:?} of {:?} missing",
                    face.labels(),
                    c.labels()
                ));
            }
        }
    }
    for m in fan.maximal_cones() {
        if !cones.contains(m) {
            return Err("maximal cone missing from closure".into());
        }
    }
    Ok(())
}

/// Random subfans of standard complete fans keep their face closure.
pub fn fan_closure_suite(count: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let bases = vec![
        standard::projective_space(3),
        standard::projective_space(4),
        standard::cp1xcp1(),
        standard::hirzebruch(2),
        standard::cp11n(3),
    ];
    for base in &bases {
        faces_closed(base)?;
    }
    for _ in 0..count {
        let base = &bases[r.gen_range(0..bases.len())];
        let chosen: Vec<Vec<usize>> = base
            .maximal_cones()
            .iter()
            .filter(|_| r.gen_bool(0.6))
            .map(|c| c.indices().to_vec())
            .collect();
        if chosen.is_empty() {
            continue;
        }
        let mut used: Vec<usize> = chosen.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let relabel = |i: usize| used.iter().position(|&u| u == i).unwrap();
        let rays = used.iter().map(|&i| base.rays()[i].clone()).collect();
        let cones = chosen
            .iter()
            .map(|c| c.iter().map(|&i| relabel(i)).collect())
            .collect();
        let sub = Fan::new(base.lattice_rank(), rays, cones, false).map_err(|e| e.to_string())?;
        faces_closed(&sub)?;
    }
    Ok(())
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            m[(0, 0)] = BigInt::from(-1);
        }
        return m;
    }
    for _ in 0..8 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-3..=3));
        // column j += k · column i
        for row in 0..n {
            let add = &m[(row, i)] * &k;
            m[(row, j)] += add;
        }
        if rng.gen_bool(0.2) {
            for row in 0..n {
                m[(row, i)] = -m[(row, i)].clone();
            }
        }
    }
    m
}

pub fn symmetry_basis_independence(mixes: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for (name, fan) in example_fans().into_iter().chain([
        ("P3".to_string(), standard::projective_space(3)),
        ("P4".to_string(), standard::projective_space(4)),
    ]) {
        let q0 = charge_matrix(&fan).unwrap();
        let disc = discriminant_locus(&fan);
        let base = symmetry_from_rows(&q0, &disc).unwrap();
        for _ in 0..mixes {
            let u = random_unimodular(&mut r, q0.rank());
            let mixed = charge_from(q0.matrix().mul(&u));
            let s = symmetry_from_rows(&mixed, &disc).unwrap();
            if s.order != base.order || s.name != base.name {
                return Err(format!(
                    "{name}: order {} vs {} after column mix",
                    s.order, base.order
                ));
            }
        }
    }
    Ok(())
}

fn charge_from(m: IntMatrix) -> ChargeMatrix {
    ChargeMatrix::from_matrix(m)
}

//! Homogeneous quotient data of a fan: charge matrix, the group `G = ker ξ`,
//! discriminant locus, fan symmetry and the automorphism-group presentation
//! of the proalgebraic completion.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};
use crate::lattice::{integer_kernel, json, smith_normal_form, IntMatrix};

/// Column-canonical `n_rays × s` matrix `Q` with `Σ_i Q_ij v_i = 0` for every column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeMatrix(IntMatrix);

impl ChargeMatrix {
    /// Wraps an arbitrary basis of the relation lattice (not canonicalized).
    pub fn from_matrix(m: IntMatrix) -> Self {
        ChargeMatrix(m)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Number of columns `s`.
    pub fn rank(&self) -> usize {
        self.0.cols()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        self.0.row_slice(i)
    }
}

/// `G ≅ (C*)^s × ∏ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroupStructure {
    pub torus_rank: usize,
    pub torsion_factors: Vec<BigInt>,
}

impl QuotientGroupStructure {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_factors.is_empty()
    }
}

/// Minimal ray subsets that do not span a cone, sorted by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantAntichain {
    pub minimal_subsets: Vec<ConeRef>,
}

impl DiscriminantAntichain {
    /// Whether the coordinate subspace where the indexed coordinates vanish lies in `Z(F)`.
    pub fn contains_zero_set(&self, zeros: &ConeRef) -> bool {
        self.minimal_subsets.iter().any(|s| s.is_subset(zeros))
    }

    pub fn labels(&self) -> Vec<Vec<usize>> {
        self.minimal_subsets.iter().map(ConeRef::labels).collect()
    }
}

/// A permutation of ray indices in one-line notation, 0-based: `ray i ↦ self.0[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn image(&self, s: &ConeRef) -> ConeRef {
        ConeRef::new(s.indices().iter().map(|&i| self.0[i]).collect())
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

/// Ray permutations fixing every row of `Q` and preserving the discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSymmetryGroup {
    /// Rays grouped by equal `Q`-rows.
    pub row_classes: Vec<Vec<usize>>,
    pub generators: Vec<Permutation>,
    pub order: u128,
    /// Best-effort structure name such as `S_3` or `Z_2 × Z_2`.
    pub name: String,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutPresentation {
    pub finite_part: FanSymmetryGroup,
    pub solenoidal_torus_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AutPresentation {
    /// e.g. `S_3 ⋉ (C*_Q)^2`
    pub fn render(&self) -> String {
        let torus = format!("(C*_Q)^{}", self.solenoidal_torus_rank);
        let mut s = if self.finite_part.order == 1 {
            torus
        } else if self.finite_part.name.contains(' ') {
            format!("({}) ⋉ {}", self.finite_part.name, torus)
        } else {
            format!("{} ⋉ {}", self.finite_part.name, torus)
        };
        if !self.torsion.is_empty() {
            s.push_str(&format!(
                " [G has torsion {}]",
                self.torsion.iter().map(|d| format!("Z_{d}")).join(" × ")
            ));
        }
        s
    }
}

fn require_spanning(fan: &Fan) -> Result<()> {
    let span = fan.ray_matrix().rank();
    if span < fan.lattice_rank() {
        return Err(Error::TorusFactor {
            span,
            rank: fan.lattice_rank(),
        });
    }
    Ok(())
}

pub fn charge_matrix(fan: &Fan) -> Result<ChargeMatrix> {
    require_spanning(fan)?;
    Ok(ChargeMatrix(integer_kernel(&fan.ray_matrix().transpose())))
}

/// Structure of `G = ker ξ`, read off the Smith form of the ray matrix.
pub fn group_structure(fan: &Fan) -> Result<QuotientGroupStructure> {
    require_spanning(fan)?;
    let snf = smith_normal_form(&fan.ray_matrix());
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Ok(QuotientGroupStructure {
        torus_rank: fan.n_rays() - rank,
        torsion_factors: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
    })
}

/// Minimal non-cones by ascending cardinality.
///
/// A minimal non-face of a simplicial complex has at most one more element
/// than the largest face, so the scan stops there.
pub fn discriminant_locus(fan: &Fan) -> DiscriminantAntichain {
    let n = fan.n_rays();
    let max_cone = fan
        .maximal_cones()
        .iter()
        .map(ConeRef::len)
        .max()
        .unwrap_or(0);
    let mut minimal: Vec<ConeRef> = Vec::new();
    for k in 1..=(max_cone + 1).min(n) {
        for subset in (0..n).combinations(k) {
            let s = ConeRef::new(subset);
            if fan.is_cone(&s).expect("indices in range") {
                continue;
            }
            if minimal.iter().any(|m| m.is_subset(&s)) {
                continue;
            }
            minimal.push(s);
        }
    }
    DiscriminantAntichain {
        minimal_subsets: minimal,
    }
}

const MAX_ENUMERATION: u128 = 1_000_000;

pub fn fan_symmetry(fan: &Fan) -> Result<FanSymmetryGroup> {
    let q = charge_matrix(fan)?;
    let torsion = group_structure(fan)?.torsion_factors;
    let disc = discriminant_locus(fan);
    let mut group = symmetry_from_rows(&q, &disc)?;

    if !torsion.is_empty() {
        group.warnings.push(format!(
            "G has torsion ({}); the charge-matrix description of the symmetry assumes a torsion-free G",
            torsion.iter().join(", ")
        ));
    }
    let maximal: Vec<ConeRef> = {
        let mut m = fan.maximal_cones().to_vec();
        m.sort();
        m
    };
    for g in &group.generators {
        let mut image: Vec<ConeRef> = maximal.iter().map(|c| g.image(c)).collect();
        image.sort();
        if image != maximal {
            group.warnings.push(format!(
                "symmetry {:?} does not map the maximal cones to themselves",
                g.one_line()
            ));
        }
    }
    Ok(group)
}

/// Row-class symmetry of `q`, restricted to permutations preserving `disc`.
pub fn symmetry_from_rows(
    q: &ChargeMatrix,
    disc: &DiscriminantAntichain,
) -> Result<FanSymmetryGroup> {
    let n = q.matrix().rows();
    let mut classes: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(q.row(i).to_vec()).or_default().push(i);
    }
    let mut row_classes: Vec<Vec<usize>> = classes.into_values().collect();
    row_classes.sort();

    let preserves = |p: &Permutation| {
        let mut image: Vec<ConeRef> = disc.minimal_subsets.iter().map(|s| p.image(s)).collect();
        image.sort();
        let mut orig = disc.minimal_subsets.clone();
        orig.sort();
        image == orig
    };

    let transpositions: Vec<Permutation> = row_classes
        .iter()
        .flat_map(|c| {
            c.windows(2)
                .map(|w| Permutation::transposition(n, w[0], w[1]))
        })
        .collect();

    if transpositions.iter().all(&preserves) {
        // the filter is a no-op: the whole product of symmetric groups survives
        let order = row_classes.iter().map(|c| factorial(c.len())).product();
        let mut sizes: Vec<usize> = row_classes
            .iter()
            .map(Vec::len)
            .filter(|&k| k > 1)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let name = if sizes.is_empty() {
            "1".to_string()
        } else {
            sizes
                .iter()
                .map(|&k| {
                    if k == 2 {
                        "Z_2".to_string()
                    } else {
                        format!("S_{k}")
                    }
                })
                .join(" × ")
        };
        return Ok(FanSymmetryGroup {
            row_classes,
            generators: transpositions,
            order,
            name,
            warnings: Vec::new(),
        });
    }

    // enumerate the product group and keep what preserves the discriminant
    let total: u128 = row_classes.iter().map(|c| factorial(c.len())).product();
    if total > MAX_ENUMERATION {
        return Err(Error::SymmetryTooLarge(MAX_ENUMERATION));
    }
    let mut elements: Vec<Permutation> = vec![Permutation::identity(n)];
    for class in &row_classes {
        let mut next = Vec::new();
        for base in &elements {
            for perm in class.iter().permutations(class.len()) {
                let mut p = base.clone();
                for (&from, &to) in class.iter().zip(perm) {
                    p.0[from] = to;
                }
                next.push(p);
            }
        }
        elements = next;
    }
    let kept: Vec<Permutation> = elements.into_iter().filter(|p| preserves(p)).collect();
    let generators = generating_set(n, &kept);
    Ok(FanSymmetryGroup {
        row_classes,
        generators,
        order: kept.len() as u128,
        name: format!("order-{} subgroup", kept.len()),
        warnings: vec!["discriminant filter removed row-class permutations".to_string()],
    })
}

/// Greedy generating set for the finite permutation group with element list `elements`.
fn generating_set(n: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: std::collections::BTreeSet<Permutation> =
        std::iter::once(Permutation::identity(n)).collect();
    for e in elements {
        if closure.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut frontier: Vec<Permutation> = closure.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = g.compose(&x);
                if closure.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

pub fn aut_presentation(fan: &Fan) -> Result<AutPresentation> {
    if !fan.is_complete() {
        return Err(Error::RequiresComplete {
            operation: "automorphism presentation",
            hypothesis: "the presentation is stated for a complete fan",
        });
    }
    let q = charge_matrix(fan)?;
    let g = group_structure(fan)?;
    Ok(AutPresentation {
        finite_part: fan_symmetry(fan)?,
        solenoidal_torus_rank: fan.n_rays() - q.rank(),
        torsion: g.torsion_factors,
    })
}

/// JSON shape of the quotient report.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    #[serde(serialize_with = "json::int_rows")]
    pub charge_matrix: Vec<Vec<BigInt>>,
    pub group: GroupReport,
    pub discriminant: Vec<Vec<usize>>,
    pub symmetry: SymmetryReport,
    pub aut: Option<AutReport>,
}

/// `G ≅ (C*)^rank × ∏ Z/torsion_i`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub rank: usize,
    #[serde(serialize_with = "json::ints")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub order: u128,
    pub classes: Vec<Vec<usize>>,
    pub generators: Vec<Vec<usize>>,
    pub name: String,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    pub finite_part: String,
    pub torus_rank: usize,
    pub presentation: String,
}

impl QuotientReport {
    pub fn build(fan: &Fan) -> Result<Self> {
        let q = charge_matrix(fan)?;
        let g = group_structure(fan)?;
        let disc = discriminant_locus(fan);
        let sym = fan_symmetry(fan)?;
        let aut = if fan.is_complete() {
            let a = aut_presentation(fan)?;
            Some(AutReport {
                finite_part: a.finite_part.name.clone(),
                torus_rank: a.solenoidal_torus_rank,
                presentation: a.render(),
            })
        } else {
            None
        };
        Ok(QuotientReport {
            charge_matrix: (0..q.matrix().rows()).map(|i| q.row(i).to_vec()).collect(),
            group: GroupReport {
                rank: g.torus_rank,
                torsion: g.torsion_factors,
            },
            discriminant: disc.labels(),
            symmetry: SymmetryReport {
                order: sym.order,
                classes: sym
                    .row_classes
                    .iter()
                    .map(|c| c.iter().map(|i| i + 1).collect())
                    .collect(),
                generators: sym.generators.iter().map(Permutation::one_line).collect(),
                name: sym.name,
                warnings: sym.warnings,
            },
            aut,
        })
    }
}

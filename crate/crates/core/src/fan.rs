//! Simplicial fans and their cone combinatorics.
//!
//! Rays are stored 0-based internally. Everything that crosses the JSON
//! boundary (fan files, reports) uses 1-based ray labels.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{primitive, IntMatrix, IntVector};

/// Sorted set of 0-based ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeRef(Vec<usize>);

impl ConeRef {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ConeRef(indices)
    }

    pub fn zero() -> Self {
        ConeRef(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ConeRef) -> bool {
        self.0.iter().all(|i| other.0.binary_search(i).is_ok())
    }

    /// 1-based labels for display and serialization.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

/// On-disk fan description; ray indices in `maximal_cones` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FanFile {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Fan> {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                if r.is_empty() {
                    Err(Error::RayDimension {
                        index: 0,
                        expected: self.lattice_rank,
                        found: 0,
                    })
                } else {
                    Ok(IntVector::from_i64s(r))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let cones = self
            .maximal_cones
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&i| {
                        if i == 0 || i > rays.len() {
                            Err(Error::RayIndexOutOfRange {
                                index: i,
                                count: rays.len(),
                            })
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fan = Fan::new(self.lattice_rank, rays, cones, self.complete)?;
        fan.name = self.name.clone();
        Ok(fan)
    }
}

/// A simplicial fan: lattice rank, primitive rays, maximal cones, and the
/// declared completeness flag.
#[derive(Clone, Debug)]
pub struct Fan {
    lattice_rank: usize,
    rays: Vec<IntVector>,
    maximal_cones: Vec<ConeRef>,
    complete: bool,
    cones: BTreeSet<ConeRef>,
    pub name: Option<String>,
}

impl Fan {
    /// Validates and builds a fan. `maximal_cones` hold 0-based ray indices.
    pub fn new(
        lattice_rank: usize,
        rays: Vec<IntVector>,
        maximal_cones: Vec<Vec<usize>>,
        complete: bool,
    ) -> Result<Self> {
        if lattice_rank == 0 {
            return Err(Error::ZeroLatticeRank);
        }
        if rays.is_empty() {
            return Err(Error::EmptyRays);
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != lattice_rank {
                return Err(Error::RayDimension {
                    index: i + 1,
                    expected: lattice_rank,
                    found: r.len(),
                });
            }
            if r.is_zero() {
                return Err(Error::ZeroVector);
            }
            if &primitive(r)? != r {
                return Err(Error::NonPrimitiveRay {
                    index: i + 1,
                    ray: r.to_string(),
                });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(Error::DuplicateRay {
                        first: i + 1,
                        second: j + 1,
                    });
                }
            }
        }

        let mut maximal = Vec::with_capacity(maximal_cones.len());
        for (c, cone) in maximal_cones.into_iter().enumerate() {
            if cone.is_empty() {
                return Err(Error::EmptyCone { cone: c + 1 });
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndexOutOfRange {
                    index: bad + 1,
                    count: rays.len(),
                });
            }
            let cone = ConeRef::new(cone);
            let gens: Vec<IntVector> = cone.indices().iter().map(|&i| rays[i].clone()).collect();
            if IntMatrix::from_rows(&gens, lattice_rank).rank() != cone.len() {
                return Err(Error::NonSimplicialCone { cone: c + 1 });
            }
            maximal.push(cone);
        }
        for (a, ca) in maximal.iter().enumerate() {
            for (b, cb) in maximal.iter().enumerate() {
                if a != b && ca.is_subset(cb) && (ca != cb || a > b) {
                    return Err(Error::NonMaximalCone {
                        cone: a + 1,
                        other: b + 1,
                    });
                }
            }
        }
        for i in 0..rays.len() {
            if !maximal.iter().any(|c| c.indices().contains(&i)) {
                return Err(Error::UnusedRay { index: i + 1 });
            }
        }

        let mut cones = BTreeSet::new();
        for cone in &maximal {
            let idx = cone.indices();
            for mask in 0u64..(1u64 << idx.len()) {
                let face = (0..idx.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| idx[b])
                    .collect();
                cones.insert(ConeRef(face));
            }
        }

        let fan = Fan {
            lattice_rank,
            rays,
            maximal_cones: maximal,
            complete,
            cones,
            name: None,
        };
        if complete {
            fan.check_completeness()?;
        }
        Ok(fan)
    }

    /// Necessary conditions only: every maximal cone is full-dimensional and
    /// every codimension-one cone lies in exactly two maximal cones.
    fn check_completeness(&self) -> Result<()> {
        let n = self.lattice_rank;
        if let Some(c) = self.maximal_cones.iter().position(|c| c.len() != n) {
            return Err(Error::NotComplete {
                reason: format!("maximal cone {} is not full-dimensional", c + 1),
            });
        }
        let mut walls: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.maximal_cones {
            for skip in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .indices()
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                *walls.entry(wall).or_default() += 1;
            }
        }
        if let Some((wall, count)) = walls.iter().find(|(_, &c)| c != 2) {
            let labels: Vec<usize> = wall.iter().map(|i| i + 1).collect();
            return Err(Error::NotComplete {
                reason: format!("wall {labels:?} lies in {count} maximal cones, expected 2"),
            });
        }
        Ok(())
    }

    pub fn from_file(file: &FanFile) -> Result<Self> {
        file.build()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn maximal_cones(&self) -> &[ConeRef] {
        &self.maximal_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// All cones of the fan (face closure of the maximal cones), including the zero cone.
    pub fn cones(&self) -> impl Iterator<Item = &ConeRef> {
        self.cones.iter()
    }

    /// Rays as the rows of an `n_rays × lattice_rank` matrix.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays, self.lattice_rank)
    }

    pub fn generators(&self, cone: &ConeRef) -> Vec<IntVector> {
        cone.indices()
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect()
    }

    /// Whether the ray subset `s` spans a cone of the fan.
    pub fn is_cone(&self, s: &ConeRef) -> Result<bool> {
        if let Some(&bad) = s.indices().iter().find(|&&i| i >= self.rays.len()) {
            return Err(Error::RayIndexOutOfRange {
                index: bad + 1,
                count: self.rays.len(),
            });
        }
        Ok(self.cones.contains(s))
    }

    pub fn cone_poset(&self) -> ConePoset {
        let cones: Vec<ConeRef> = self.cones.iter().cloned().collect();
        let dims = cones
            .iter()
            .map(|c| IntMatrix::from_rows(&self.generators(c), self.lattice_rank).rank())
            .collect();
        ConePoset { cones, dims }
    }

    pub fn to_file(&self) -> FanFile {
        FanFile {
            lattice_rank: self.lattice_rank,
            rays: self
                .rays
                .iter()
                .map(|r| r.to_i64s().expect("ray entries fit in i64"))
                .collect(),
            maximal_cones: self.maximal_cones.iter().map(ConeRef::labels).collect(),
            complete: self.complete,
            name: self.name.clone(),
        }
    }
}

/// Cones ordered by inclusion, each with its dimension.
#[derive(Clone, Debug)]
pub struct ConePoset {
    cones: Vec<ConeRef>,
    dims: Vec<usize>,
}

impl ConePoset {
    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cones(&self) -> &[ConeRef] {
        &self.cones
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `cones[a] ⊆ cones[b]`
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.cones[a].is_subset(&self.cones[b])
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.cones[b].len() == self.cones[a].len() + 1 && self.le(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of cones of each dimension `0..=max`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let max = self.dims.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0; max + 1];
        for &d in &self.dims {
            counts[d] += 1;
        }
        counts
    }
}

/// Reference fans used throughout tests and shipped as fan files.
pub mod standard {
    use super::*;

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]], name: &str) -> Fan {
        let mut f = Fan::new(
            rank,
            rays.iter().map(|r| IntVector::from_i64s(r)).collect(),
            cones
                .iter()
                .map(|c| c.iter().map(|i| i - 1).collect())
                .collect(),
            true,
        )
        .expect("standard fan is valid");
        f.name = Some(name.to_string());
        f
    }

    pub fn cp1() -> Fan {
        fan(1, &[&[1], &[-1]], &[&[1], &[2]], "CP1")
    }

    pub fn cp1xcp1() -> Fan {
        fan(
            2,
            &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
            &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]],
            "CP1xCP1",
        )
    }

    pub fn cp2() -> Fan {
        fan(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1]],
            &[&[1, 2], &[2, 3], &[1, 3]],
            "CP2",
        )
    }

    /// Weighted projective plane with `v1 + v2 + n·v3 = 0`.
    pub fn cp11n(n: i64) -> Fan {
        fan(
            2,
            &[&[1, 0], &[-1, -n], &[0, 1]],
            &[&[1, 2], &[2, 3], &[1, 3]],
            &format!("CP(1,1,{n})"),
        )
    }

    /// Hirzebruch surface with `v3 + v4 = 0` and `v1 + v2 - n·v4 = 0`.
    pub fn hirzebruch(n: i64) -> Fan {
        fan(
            2,
            &[&[1, 0], &[-1, n], &[0, -1], &[0, 1]],
            &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]],
            &format!("F_{n}"),
        )
    }

    /// Standard fan of `CP^m`: rays `e_1..e_m` and `-(e_1+...+e_m)`, every
    /// `m`-subset a maximal cone.
    pub fn projective_space(m: usize) -> Fan {
        let mut rays: Vec<IntVector> = (0..m)
            .map(|i| {
                let mut v = vec![0i64; m];
                v[i] = 1;
                IntVector::from_i64s(&v)
            })
            .collect();
        rays.push(IntVector::from_i64s(&vec![-1; m]));
        let cones = (0..=m)
            .map(|skip| (0..=m).filter(|&i| i != skip).collect())
            .collect();
        let mut f = Fan::new(m, rays, cones, true).expect("standard fan is valid");
        f.name = Some(format!("CP{m}"));
        f
    }
}

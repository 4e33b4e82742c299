//! Face lattice of the Delzant polytope of a complete fan, with the rank of
//! the solenoidal-torus fiber over each face.
//!
//! Faces are obtained by inverting the cone poset; no vertex coordinates are
//! computed.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{ConeRef, Fan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceNode {
    pub cone: ConeRef,
    pub face_dim: usize,
    /// Rank of the solenoidal torus `(C*_Q)^m` over the relative interior of the face.
    pub fiber_rank: usize,
    pub is_cusp: bool,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    nodes: Vec<FaceNode>,
    f_vector: Vec<usize>,
}

impl FaceLattice {
    pub fn nodes(&self) -> &[FaceNode] {
        &self.nodes
    }

    /// Number of faces of each dimension `0..=lattice_rank`.
    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    /// Face `a` is contained in face `b` (reverse cone inclusion).
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.nodes[b].cone.is_subset(&self.nodes[a].cone)
    }

    pub fn cusps(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_cusp).count()
    }

    /// Σ (-1)^k f_k
    pub fn euler_sum(&self) -> i64 {
        self.f_vector
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

fn require_complete(fan: &Fan) -> Result<()> {
    if fan.is_complete() {
        Ok(())
    } else {
        Err(Error::RequiresComplete {
            operation: "Delzant face lattice",
            hypothesis: "the moment polytope exists for a projective toric variety",
        })
    }
}

pub fn face_lattice(fan: &Fan) -> Result<FaceLattice> {
    require_complete(fan)?;
    let n = fan.lattice_rank();
    let poset = fan.cone_poset();
    let mut nodes: Vec<FaceNode> = poset
        .cones()
        .iter()
        .enumerate()
        .map(|(i, cone)| {
            let face_dim = n - poset.dim(i);
            FaceNode {
                cone: cone.clone(),
                face_dim,
                fiber_rank: face_dim,
                is_cusp: face_dim == 0,
            }
        })
        .collect();
    nodes.sort_by(|a, b| {
        a.face_dim
            .cmp(&b.face_dim)
            .then_with(|| a.cone.cmp(&b.cone))
    });
    let mut f_vector = vec![0; n + 1];
    for node in &nodes {
        f_vector[node.face_dim] += 1;
    }
    Ok(FaceLattice { nodes, f_vector })
}

pub fn cusp_count(fan: &Fan) -> Result<usize> {
    require_complete(fan)?;
    Ok(fan
        .maximal_cones()
        .iter()
        .filter(|c| c.len() == fan.lattice_rank())
        .count())
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceReport {
    pub cone: Vec<usize>,
    pub dim: usize,
    pub fiber_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DelzantReport {
    pub f_vector: Vec<usize>,
    pub cusps: usize,
    pub faces: Vec<FaceReport>,
}

impl DelzantReport {
    pub fn build(fan: &Fan) -> Result<Self> {
        let lattice = face_lattice(fan)?;
        Ok(DelzantReport {
            f_vector: lattice.f_vector().to_vec(),
            cusps: cusp_count(fan)?,
            faces: lattice
                .nodes()
                .iter()
                .map(|n| FaceReport {
                    cone: n.cone.labels(),
                    dim: n.face_dim,
                    fiber_rank: n.fiber_rank,
                })
                .collect(),
        })
    }
}

/// SVG sketch of the Delzant polygon of a complete rank-2 fan.
///
/// Layout: the vertex of the maximal cone `{i, j}` sits on the unit circle in
/// the direction of `-(v̂_i + v̂_j)`; the edge dual to ray `i` joins the two
/// vertices whose cones contain `i`.
pub fn delzant_svg(fan: &Fan) -> Result<String> {
    require_complete(fan)?;
    if fan.lattice_rank() != 2 {
        return Err(Error::Dimension(format!(
            "SVG output needs a rank-2 fan, got rank {}",
            fan.lattice_rank()
        )));
    }
    let unit = |i: usize| {
        let r = fan.rays()[i].to_i64s().expect("small ray entries");
        let (x, y) = (r[0] as f64, r[1] as f64);
        let len = x.hypot(y);
        (x / len, y / len)
    };
    let mut vertices: Vec<(f64, &ConeRef)> = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let (a, b) = (unit(c.indices()[0]), unit(c.indices()[1]));
            let angle = (-(a.1 + b.1)).atan2(-(a.0 + b.0)).rem_euclid(TAU);
            (angle, c)
        })
        .collect();
    vertices.sort_by(|a, b| a.0.total_cmp(&b.0));

    const SIZE: f64 = 240.0;
    const RADIUS: f64 = 90.0;
    let pos = |angle: f64| {
        (
            SIZE / 2.0 + RADIUS * angle.cos(),
            SIZE / 2.0 - RADIUS * angle.sin(),
        )
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    let points: Vec<String> = vertices
        .iter()
        .map(|&(a, _)| {
            let (x, y) = pos(a);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(
        svg,
        r##"  <polygon points="{}" fill="#eef" stroke="black" stroke-width="1.5"/>"##,
        points.join(" ")
    )
    .unwrap();
    writeln!(
        svg,
        r#"  <text x="{c:.2}" y="{c:.2}" text-anchor="middle" font-size="12">fiber rank 2</text>"#,
        c = SIZE / 2.0
    )
    .unwrap();
    for k in 0..vertices.len() {
        let (a0, c0) = vertices[k];
        let (a1, c1) = vertices[(k + 1) % vertices.len()];
        let shared: Vec<usize> = c0
            .indices()
            .iter()
            .filter(|i| c1.indices().contains(i))
            .map(|i| i + 1)
            .collect();
        let (x0, y0) = pos(a0);
        let (x1, y1) = pos(a1);
        if let [ray] = shared.as_slice() {
            writeln!(
                svg,
                r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">ray {ray}: rank 1</text>"#,
                (x0 + x1) / 2.0,
                (y0 + y1) / 2.0
            )
            .unwrap();
        }
    }
    for &(a, c) in &vertices {
        let (x, y) = pos(a);
        writeln!(
            svg,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"><title>cusp {:?}</title></circle>"#,
            c.labels()
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

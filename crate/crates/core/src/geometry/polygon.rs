use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::vector::UnitVec3;
use super::GeometryError;

/// Tolerance for "vertex lies on its edge planes".
pub const ON_PLANE_EPS: f64 = 1e-9;

/// A convex spherical polygon bounded by great-circle arcs.
///
/// `edge_planes[i]` is the inward unit normal of the great circle carrying
/// the arc `vertices[i] → vertices[i + 1]` (indices wrap).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalPolygon {
    vertices: Vec<UnitVec3>,
    edge_planes: Vec<UnitVec3>,
}

impl SphericalPolygon {
    pub fn new(vertices: Vec<UnitVec3>, edge_planes: Vec<UnitVec3>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 || edge_planes.len() != n {
            return Err(GeometryError::MalformedPolygon(format!(
                "{n} vertices and {} edge planes",
                edge_planes.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            let before = edge_planes[(i + n - 1) % n];
            let after = edge_planes[i];
            let off = v.dot(before).abs().max(v.dot(after).abs());
            if off >= ON_PLANE_EPS {
                return Err(GeometryError::MalformedPolygon(format!(
                    "vertex {i} is {off:e} away from an adjacent edge plane"
                )));
            }
        }
        Ok(Self {
            vertices,
            edge_planes,
        })
    }

    pub fn vertices(&self) -> &[UnitVec3] {
        &self.vertices
    }

    pub fn edge_planes(&self) -> &[UnitVec3] {
        &self.edge_planes
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        excess_from_planes(&self.edge_planes)
    }
}

/// Interior angle between two consecutive edges given their inward normals:
/// `π − ∠(n_prev, n_next)`.
#[inline]
pub fn interior_angle(n_prev: UnitVec3, n_next: UnitVec3) -> f64 {
    PI - n_prev.angle_to(n_next)
}

/// Spherical excess `Σωᵢ − (n − 2)π` of the polygon whose edges lie on
/// `planes` (inward normals, boundary order).
pub fn excess_from_planes(planes: &[UnitVec3]) -> f64 {
    let n = planes.len();
    let angle_sum: f64 = (0..n)
        .map(|i| interior_angle(planes[(i + n - 1) % n], planes[i]))
        .sum();
    angle_sum - (n as f64 - 2.0) * PI
}

pub fn polygon_excess_area(poly: &SphericalPolygon) -> f64 {
    poly.area()
}

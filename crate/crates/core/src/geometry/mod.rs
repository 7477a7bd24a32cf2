//! Exact geometry of spherical rectangles on the unit sphere.

mod intersect;
mod polygon;
mod rect;
mod vector;

pub use intersect::{
    edge_intersections, intersect, intersection_area, iou, iou_matrix, EdgeCrossing, Intersection,
    OverlapKind, DEDUP_EPS,
};
pub use polygon::{
    excess_from_planes, interior_angle, polygon_excess_area, SphericalPolygon, ON_PLANE_EPS,
};
pub use rect::{
    boundary_normals, contains_point, fov_area, rect_area, rect_vertices, BoundaryPlanes, Side,
    SphericalRect, CONTAINMENT_EPS,
};
pub use vector::{local_frame, sph_to_vec, vec_to_sph, wrap_azimuth, Frame, UnitVec3, Vec3};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{field} = {value} is out of range")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("adjacent side planes are parallel; the rectangle has no corners")]
    DegenerateRect,
    #[error("malformed spherical polygon: {0}")]
    MalformedPolygon(String),
}

//! Viewpoint sampling and perspective projection of 3D drawings into
//! depth-annotated 2D primitives.
//!
//! Image coordinates live on the focal plane at distance 1 in front of the
//! eye, so a viewport is `2·tan(fov/2)` high and `aspect` times as wide, with
//! its origin on the optical axis. Depths are distances along the optical
//! axis.

use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GraphBundle, Layout3D, Vec3};

pub type Vec2 = Vector2<f64>;

const VIEW_NORM_TOLERANCE: f64 = 1e-6;
const UP_PARALLEL_THRESHOLD: f64 = 0.999;

/// `count` near-uniform unit vectors on the Fibonacci lattice.
pub fn fibonacci_viewpoints(count: usize) -> Result<Vec<Vec3>> {
    if count == 0 {
        return Err(Error::Domain("viewpoint count must be at least 1".into()));
    }
    let golden_angle = PI * (3.0 - 5.0_f64.sqrt());
    let n = count as f64;
    Ok((0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = i as f64 * golden_angle;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CameraConfig {
    /// Vertical field of view in degrees.
    pub vertical_fov: f64,
    /// Viewport width over height.
    pub aspect: f64,
    /// Eye distance from the layout center in bounding radii.
    pub distance_factor: f64,
    pub preferred_up: [f64; 3],
    pub fallback_up: [f64; 3],
}

impl Default for CameraConfig {
    fn default() -> Self {
        CameraConfig {
            vertical_fov: 90.0,
            aspect: 1.0,
            distance_factor: 2.5,
            preferred_up: [0.0, 1.0, 0.0],
            fallback_up: [1.0, 0.0, 0.0],
        }
    }
}

impl CameraConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.vertical_fov > 0.0 && self.vertical_fov < 180.0) {
            return Err(Error::Domain(format!("vertical_fov must lie in (0, 180), got {}", self.vertical_fov)));
        }
        if !(self.aspect > 0.0 && self.aspect.is_finite()) {
            return Err(Error::Domain(format!("aspect must be positive, got {}", self.aspect)));
        }
        if !(self.distance_factor > 1.0 && self.distance_factor.is_finite()) {
            return Err(Error::Domain(format!(
                "distance_factor must exceed 1, got {}",
                self.distance_factor
            )));
        }
        for (name, axis) in [("preferred_up", self.preferred_up), ("fallback_up", self.fallback_up)] {
            let a = Vec3::from(axis);
            if !(a.norm() > 0.0) {
                return Err(Error::Domain(format!("{name} must be a nonzero vector")));
            }
        }
        let (p, f) = (Vec3::from(self.preferred_up), Vec3::from(self.fallback_up));
        if p.cross(&f).norm() < 1e-9 * p.norm() * f.norm() {
            return Err(Error::Domain("preferred_up and fallback_up must not be parallel".into()));
        }
        Ok(())
    }

    pub fn viewport_height(&self) -> f64 {
        2.0 * (self.vertical_fov.to_radians() / 2.0).tan()
    }

    pub fn viewport_width(&self) -> f64 {
        self.aspect * self.viewport_height()
    }
}

/// A pinhole camera looking at the layout center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub eye: Vec3,
    pub right: Vec3,
    pub up: Vec3,
    pub forward: Vec3,
    pub focal: f64,
    pub viewport: Viewport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }
}

impl Camera {
    /// Camera on the sphere of radius `distance_factor · radius` about
    /// `center`, looking along `view`.
    pub fn look_at(view: Vec3, center: Vec3, radius: f64, config: &CameraConfig) -> Result<Self> {
        config.validate()?;
        if (view.norm() - 1.0).abs() > VIEW_NORM_TOLERANCE {
            return Err(Error::Domain(format!("view vector has norm {}, expected 1", view.norm())));
        }
        if !(radius > 0.0) {
            return Err(Error::DegenerateLayout(format!("framing radius is {radius}")));
        }
        let forward = view.normalize();
        let preferred = Vec3::from(config.preferred_up).normalize();
        let world_up = if forward.dot(&preferred).abs() > UP_PARALLEL_THRESHOLD {
            Vec3::from(config.fallback_up).normalize()
        } else {
            preferred
        };
        // Gram-Schmidt against forward, then complete the right-handed frame
        let up = (world_up - forward * forward.dot(&world_up)).normalize();
        let right = forward.cross(&up);
        Ok(Camera {
            eye: center - forward * (config.distance_factor * radius),
            right,
            up,
            forward,
            focal: 1.0,
            viewport: Viewport {
                width: config.viewport_width(),
                height: config.viewport_height(),
            },
        })
    }

    /// Eye-space depth of a world point along the optical axis.
    pub fn depth(&self, p: &Vec3) -> f64 {
        (p - self.eye).dot(&self.forward)
    }

    /// Image of a world point on the focal plane together with its depth.
    pub fn image(&self, p: &Vec3) -> (Vec2, f64) {
        let q = p - self.eye;
        let depth = q.dot(&self.forward);
        (Vec2::new(q.dot(&self.right), q.dot(&self.up)) * (self.focal / depth), depth)
    }
}

pub fn camera_from_viewpoint(view: Vec3, layout: &Layout3D, config: &CameraConfig) -> Result<Camera> {
    if !(layout.bounding_radius() > 0.0) {
        return Err(Error::DegenerateLayout("all nodes coincide (bounding radius 0)".into()));
    }
    Camera::look_at(view, layout.center(), layout.bounding_radius(), config)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedCircle {
    pub center: Vec2,
    pub radius: f64,
    pub depth: f64,
    pub node_index: usize,
}

/// A projected tube: a centerline whose half-width varies linearly between
/// the endpoint values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedThickSegment {
    pub endpoints: [Vec2; 2],
    pub half_widths: [f64; 2],
    pub depths: [f64; 2],
    pub edge_index: usize,
    pub nodes: (usize, usize),
}

impl ProjectedThickSegment {
    pub fn length(&self) -> f64 {
        (self.endpoints[1] - self.endpoints[0]).norm()
    }

    pub fn midpoint(&self) -> Vec2 {
        (self.endpoints[0] + self.endpoints[1]) * 0.5
    }

    /// Half-width at centerline parameter `t ∈ [0, 1]`.
    pub fn half_width_at(&self, t: f64) -> f64 {
        self.half_widths[0] + t * (self.half_widths[1] - self.half_widths[0])
    }

    /// Perspective-correct depth at image parameter `t ∈ [0, 1]`: reciprocal
    /// depth is linear in image space.
    pub fn depth_at(&self, t: f64) -> f64 {
        1.0 / ((1.0 - t) / self.depths[0] + t / self.depths[1])
    }

    /// Parameter of the centerline point closest to `p`, clamped to `[0, 1]`.
    pub fn closest_parameter(&self, p: &Vec2) -> f64 {
        let d = self.endpoints[1] - self.endpoints[0];
        let len2 = d.norm_squared();
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - self.endpoints[0]).dot(&d) / len2).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedDrawing {
    pub circles: Vec<ProjectedCircle>,
    pub segments: Vec<ProjectedThickSegment>,
    pub viewport: Viewport,
}

impl ProjectedDrawing {
    /// A drawing built directly in image space, with every primitive at unit
    /// depth and constant radii. Handy for evaluating 2D layouts.
    pub fn flat(
        centers: &[Vec2],
        edges: &[(usize, usize)],
        node_radius: f64,
        half_width: f64,
        viewport: Viewport,
    ) -> Self {
        let circles = centers
            .iter()
            .enumerate()
            .map(|(i, &center)| ProjectedCircle {
                center,
                radius: node_radius,
                depth: 1.0,
                node_index: i,
            })
            .collect();
        let segments = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| ProjectedThickSegment {
                endpoints: [centers[a], centers[b]],
                half_widths: [half_width; 2],
                depths: [1.0; 2],
                edge_index: k,
                nodes: (a, b),
            })
            .collect();
        ProjectedDrawing {
            circles,
            segments,
            viewport,
        }
    }

    pub fn node_centers(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.circles.iter().map(|c| c.center)
    }
}

/// Projects every node and edge of `bundle` through `camera`.
pub fn project(bundle: &GraphBundle, camera: &Camera) -> Result<ProjectedDrawing> {
    let layout = &bundle.layout;
    let mut circles = Vec::with_capacity(layout.positions().len());
    for (i, p) in layout.positions().iter().enumerate() {
        let (center, depth) = camera.image(p);
        if !(depth > 0.0) || !center.iter().all(|c| c.is_finite()) {
            return Err(Error::BehindEye { node: i, depth });
        }
        circles.push(ProjectedCircle {
            center,
            radius: layout.node_radius() * camera.focal / depth,
            depth,
            node_index: i,
        });
    }
    let segments = bundle
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let (ca, cb) = (&circles[a], &circles[b]);
            ProjectedThickSegment {
                endpoints: [ca.center, cb.center],
                half_widths: [
                    layout.edge_radius() * camera.focal / ca.depth,
                    layout.edge_radius() * camera.focal / cb.depth,
                ],
                depths: [ca.depth, cb.depth],
                edge_index: k,
                nodes: (a, b),
            }
        })
        .collect();
    Ok(ProjectedDrawing {
        circles,
        segments,
        viewport: camera.viewport,
    })
}

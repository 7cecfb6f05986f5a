use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::poly::HRepPolyhedron;

/// `conv(points) + cone(rays) + span(lines)`; empty iff `points` is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VRepPolyhedron {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
    pub lines: Vec<Vec<f64>>,
}

impl VRepPolyhedron {
    pub fn new(
        dim: usize,
        points: Vec<Vec<f64>>,
        rays: Vec<Vec<f64>>,
        lines: Vec<Vec<f64>>,
    ) -> Result<Self> {
        for v in points.iter().chain(&rays).chain(&lines) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Representation("NaN or infinite entry".into()));
            }
        }
        if rays.iter().chain(&lines).any(|r| norm(r) == 0.0) {
            return Err(Error::Representation("zero ray or line".into()));
        }
        Ok(Self {
            dim,
            points,
            rays,
            lines,
        })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn to_hrep(&self) -> HRepPolyhedron {
        crate::poly::convert::vrep_to_hrep(self)
    }
}

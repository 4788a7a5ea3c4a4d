use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::point::Point;
use super::region::Region;
use crate::error::{Error, Result};

/// Maximum deviation of `‖x‖` from 1 for a point to count as on the sphere.
pub const SPHERE_TOL: f64 = 1e-9;

/// Grid pitch used for sphere samples; far below typical sample spacing.
pub const SPHERE_RESOLUTION: f64 = 1e-9;

/// A region whose points all lie on the unit sphere `Sⁿ ⊂ ℝⁿ⁺¹`.
#[derive(Clone, Debug)]
pub struct SphericalRegion(Region);

impl SphericalRegion {
    pub fn new(region: Region) -> Result<Self> {
        if let Some(i) = region
            .points()
            .iter()
            .position(|p| (p.norm() - 1.0).abs() > SPHERE_TOL)
        {
            return Err(Error::NotOnSphere(i));
        }
        if region.dim() < 2 {
            return Err(Error::InvalidArgument(
                "a sphere needs ambient dimension >= 2".into(),
            ));
        }
        Ok(Self(region))
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn into_region(self) -> Region {
        self.0
    }

    /// Intrinsic sphere dimension `n` of `Sⁿ`.
    pub fn sphere_dim(&self) -> usize {
        self.0.dim() - 1
    }
}

impl Deref for SphericalRegion {
    type Target = Region;

    fn deref(&self) -> &Region {
        &self.0
    }
}

/// `{-x : x ∈ A}`. An involution: applying it twice returns the input
/// exactly, since float negation is exact.
pub fn antipode_map(a: &SphericalRegion) -> SphericalRegion {
    SphericalRegion(a.0.negated())
}

/// `m` points on `Sⁿ`, closed under negation: `m/2` seeded Gaussian
/// directions normalised to unit length, followed by their negations.
pub fn sphere_sample(n: usize, m: usize, seed: u64) -> Result<Vec<Point>> {
    if n < 1 {
        return Err(Error::InvalidArgument("sphere dimension must be >= 1".into()));
    }
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "sample size must be even and >= 2, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut half = Vec::with_capacity(m / 2);
    while half.len() < m / 2 {
        let v: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        half.push(Point::new(v.into_iter().map(|c| c / norm).collect())?);
    }
    let negs: Vec<Point> = half.iter().map(Point::negated).collect();
    half.extend(negs);
    Ok(half)
}

/// The points of `sample` within angle `radius` (radians) of `center`.
pub fn spherical_cap(sample: &[Point], center: &Point, radius: f64) -> Result<SphericalRegion> {
    let cos_r = radius.cos();
    let points: Vec<Point> = sample
        .iter()
        .filter(|p| p.dot(center) >= cos_r)
        .cloned()
        .collect();
    let region = Region::with_dim(points, center.dim(), SPHERE_RESOLUTION)?;
    SphericalRegion::new(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_count_rejected() {
        assert!(sphere_sample(2, 5, 0).is_err());
        assert!(sphere_sample(0, 4, 0).is_err());
    }

    #[test]
    fn circle_sample_closed_under_negation() {
        let pts = sphere_sample(1, 4, 11).unwrap();
        assert_eq!(pts.len(), 4);
        let r = Region::new(pts, SPHERE_RESOLUTION).unwrap();
        assert!(r.set_eq(&r.negated()));
    }

    #[test]
    fn unit_norm_within_1e12() {
        for p in sphere_sample(2, 200, 5).unwrap() {
            assert!((p.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sphere_sample(2, 10, 9).unwrap(), sphere_sample(2, 10, 9).unwrap());
        assert_ne!(sphere_sample(2, 10, 9).unwrap(), sphere_sample(2, 10, 10).unwrap());
    }

    #[test]
    fn antipode_of_single_point() {
        let a = SphericalRegion::new(Region::from_coords(&[[1.0, 0.0]], SPHERE_RESOLUTION).unwrap())
            .unwrap();
        assert_eq!(antipode_map(&a).points()[0].coords(), &[-1.0, 0.0]);
    }

    #[test]
    fn symmetric_region_is_fixed() {
        let a = SphericalRegion::new(
            Region::from_coords(&[[1.0, 0.0], [-1.0, 0.0]], SPHERE_RESOLUTION).unwrap(),
        )
        .unwrap();
        assert!(antipode_map(&a).set_eq(&a));
    }

    #[test]
    fn off_sphere_rejected() {
        let r = Region::from_coords(&[[1.0, 0.1]], SPHERE_RESOLUTION).unwrap();
        assert!(matches!(SphericalRegion::new(r), Err(Error::NotOnSphere(0))));
    }
}

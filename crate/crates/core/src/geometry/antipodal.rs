use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::hyperplane::Hyperplane;
use super::point::Point;
use super::region::Region;
use crate::error::{Error, Result};

/// Distance within which a point counts as lying on a witness plane.
pub const PLANE_TOL: f64 = 1e-9;

/// Grid interior: points whose 2n face-adjacent cells are all occupied.
///
/// This is the finite stand-in for the topological interior. The result is
/// a subset of `a` at the same resolution.
pub fn interior(a: &Region) -> Region {
    let cells = a.cells();
    let res = a.resolution();
    a.filter(|p| {
        let mut key = p.cell(res);
        for axis in 0..key.len() {
            for step in [-1, 1] {
                key[axis] += step;
                let hit = cells.contains(&key);
                key[axis] -= step;
                if !hit {
                    return false;
                }
            }
        }
        true
    })
}

/// Antipodal in the disjointness sense: no shared point after snapping.
pub fn antipodal_disjoint(a: &Region, b: &Region) -> Result<bool> {
    a.check_dim(b)?;
    let res = a.resolution().max(b.resolution());
    let theirs = b.cells_at(res);
    Ok(a.points().iter().all(|p| !theirs.contains(&p.cell(res))))
}

/// Antipodal in the symmetric-difference sense: `(A ∪ B) \ (A ∩ B) ≠ ∅`.
pub fn antipodal_symmdiff(a: &Region, b: &Region) -> Result<bool> {
    a.check_dim(b)?;
    Ok(!a.set_eq(b))
}

/// Witness for hyperplane antipodality.
#[derive(Clone, Debug)]
pub struct Separation {
    pub p: Hyperplane,
    pub q: Hyperplane,
    /// `A ∩ P`.
    pub a_witness: Region,
    /// `B ∩ Q`.
    pub b_witness: Region,
}

/// Looks for disjoint parallel hyperplanes `P`, `Q` with nonempty, disjoint
/// witnesses `A ∩ P` and `B ∩ Q`.
///
/// Candidate normals are the coordinate axes followed by the directions
/// `q − p` for every `p ∈ A`, `q ∈ B`. For each normal, the planes are
/// placed through the first `(p, q)` pair whose projections differ.
pub fn antipodal_separable(a: &Region, b: &Region) -> Result<Option<Separation>> {
    a.check_dim(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    let dim = a.dim();
    let axes = (0..dim).map(|i| {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        Point::new(e).expect("unit axis is finite")
    });
    let pair_dirs = a.points().iter().flat_map(|p| {
        b.points().iter().filter_map(move |q| {
            let d: Vec<f64> = q.coords().iter().zip(p.coords()).map(|(x, y)| x - y).collect();
            let norm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            (norm > 0.0).then(|| Point::new(d.into_iter().map(|c| c / norm).collect()).ok())?
        })
    });
    for normal in axes.chain(pair_dirs) {
        if let Some(sep) = separate_along(a, b, &normal)? {
            return Ok(Some(sep));
        }
    }
    Ok(None)
}

fn separate_along(a: &Region, b: &Region, normal: &Point) -> Result<Option<Separation>> {
    for p in a.points() {
        let off_p = normal.dot(p);
        for q in b.points() {
            let off_q = normal.dot(q);
            if (off_p - off_q).abs() <= 2.0 * PLANE_TOL {
                continue;
            }
            let plane_p = Hyperplane::new(normal.clone(), off_p)?;
            let plane_q = Hyperplane::new(normal.clone(), off_q)?;
            if !plane_p.is_disjoint_parallel(&plane_q) {
                continue;
            }
            let a_witness = a.filter(|x| plane_p.contains(x, PLANE_TOL));
            let b_witness = b.filter(|x| plane_q.contains(x, PLANE_TOL));
            if antipodal_disjoint(&a_witness, &b_witness)? {
                return Ok(Some(Separation {
                    p: plane_p,
                    q: plane_q,
                    a_witness,
                    b_witness,
                }));
            }
        }
    }
    Ok(None)
}

/// Which antipodality criterion a search uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntipodalityMode {
    #[default]
    Disjoint,
    Symmdiff,
    Separable,
}

impl AntipodalityMode {
    pub fn holds(self, a: &Region, b: &Region) -> Result<bool> {
        match self {
            Self::Disjoint => antipodal_disjoint(a, b),
            Self::Symmdiff => antipodal_symmdiff(a, b),
            Self::Separable => Ok(antipodal_separable(a, b)?.is_some()),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Disjoint => "disjoint",
            Self::Symmdiff => "symmdiff",
            Self::Separable => "separable",
        }
    }
}

impl fmt::Display for AntipodalityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AntipodalityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disjoint" => Ok(Self::Disjoint),
            "symmdiff" => Ok(Self::Symmdiff),
            "separable" => Ok(Self::Separable),
            other => Err(Error::InvalidArgument(format!(
                "unknown antipodality mode `{other}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(c: &[[f64; 2]]) -> Region {
        Region::from_coords(c, 1.0).unwrap()
    }

    #[test]
    fn interior_of_single_point_is_empty() {
        assert!(interior(&region(&[[0.0, 0.0]])).is_empty());
        assert!(interior(&region(&[[0.0, 0.0], [5.0, 5.0]])).is_empty());
    }

    #[test]
    fn interior_of_5x5_is_inner_3x3() {
        let a = Region::grid_block(&[0.0, 0.0], &[5, 5], 1.0).unwrap();
        let int = interior(&a);
        // Frozen by enumerating face-adjacent occupancy by hand: rows and
        // columns 1..=3 are the only ones with all four neighbours present.
        let expected = Region::grid_block(&[1.0, 1.0], &[3, 3], 1.0).unwrap();
        assert!(int.set_eq(&expected));
    }

    #[test]
    fn interior_respects_pitch() {
        let a = Region::grid_block(&[0.0, 0.0], &[5, 5], 0.25).unwrap();
        assert_eq!(interior(&a).len(), 9);
    }

    #[test]
    fn disjoint_examples() {
        let h = region(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        let k = region(&[[0.0, 3.0], [1.0, 4.0]]);
        assert!(antipodal_disjoint(&h, &k).unwrap());
        assert!(!antipodal_disjoint(&h, &h).unwrap());
        let a = region(&[[0.0, 0.0]]);
        let b = region(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(!antipodal_disjoint(&a, &b).unwrap());
    }

    #[test]
    fn disjoint_dimension_mismatch() {
        let a = region(&[[0.0, 0.0]]);
        let b = Region::from_coords(&[[0.0, 0.0, 0.0]], 1.0).unwrap();
        assert!(antipodal_disjoint(&a, &b).is_err());
    }

    #[test]
    fn symmdiff_examples() {
        let a = region(&[[0.0, 0.0], [1.0, 0.0]]);
        let b = region(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(antipodal_symmdiff(&a, &b).unwrap());
        assert!(!antipodal_symmdiff(&a, &a).unwrap());
        let c = region(&[[9.0, 9.0]]);
        assert!(antipodal_symmdiff(&a, &c).unwrap());
    }

    #[test]
    fn separable_singletons() {
        let a = region(&[[0.0, 0.0]]);
        let b = region(&[[1.0, 0.0]]);
        let sep = antipodal_separable(&a, &b).unwrap().unwrap();
        assert_eq!(sep.p.normal().coords(), &[1.0, 0.0]);
        assert_eq!(sep.p.offset(), 0.0);
        assert_eq!(sep.q.offset(), 1.0);
        assert!(antipodal_separable(&a, &a).unwrap().is_none());
    }

    #[test]
    fn separable_parallel_segments() {
        let a = region(&[[0.0, 0.0], [0.0, 1.0], [0.0, 2.0]]);
        let b = region(&[[3.0, 0.0], [3.0, 1.0], [3.0, 2.0]]);
        let sep = antipodal_separable(&a, &b).unwrap().unwrap();
        assert_eq!(sep.p.normal().coords(), &[1.0, 0.0]);
        assert_eq!(sep.a_witness.len(), 3);
        assert_eq!(sep.b_witness.len(), 3);
    }

    #[test]
    fn separable_with_shared_point() {
        // The shared point is not a witness on both planes at once.
        let a = region(&[[0.0, 0.0], [1.0, 1.0]]);
        let b = region(&[[0.0, 0.0]]);
        let sep = antipodal_separable(&a, &b).unwrap().unwrap();
        assert!(antipodal_disjoint(&sep.a_witness, &sep.b_witness).unwrap());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("separable".parse::<AntipodalityMode>().unwrap(), AntipodalityMode::Separable);
        assert!("nope".parse::<AntipodalityMode>().is_err());
        assert_eq!(AntipodalityMode::default(), AntipodalityMode::Disjoint);
    }
}

//! Lattice polytopes in dimension at most four: hulls, normalized volumes,
//! lattice-point counts, Minkowski sums and mixed volumes.
//!
//! Everything here is exact integer arithmetic. Volumes are reported as
//! *normalized* volumes (`d!` times Euclidean volume), which are integers
//! for lattice polytopes.

mod hull;
mod lattice;

use thiserror::Error;

use crate::laurent::LaurentPolynomial;
pub use hull::Hyperplane;
use hull::{gcd, monotone_chain, rank, SimplicialHull};
pub use lattice::AffineLattice;

pub const MAX_DIMENSION: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("ambient dimension {0} exceeds the supported maximum of 4")]
    DimensionTooLarge(usize),
    #[error("points have inconsistent dimensions")]
    RaggedInput,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires ambient dimension 2, got {0}")]
    NotPlanar(usize),
    #[error("mixed volume needs exactly {expected} polytopes, got {found}")]
    WrongArity { expected: usize, found: usize },
}

/// Convex hull of finitely many integer points, stored by its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient: usize,
    vertices: Vec<Vec<i64>>,
    affine_dim: usize,
    volume: u64,
    facets: Vec<Hyperplane>,
}

impl LatticePolytope {
    pub fn ambient_dimension(&self) -> usize {
        self.ambient
    }

    /// Hull vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn affine_dimension(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient
    }

    /// `d!` times the Euclidean volume; zero unless full-dimensional.
    pub fn normalized_volume(&self) -> u64 {
        self.volume
    }

    /// Facet hyperplanes `normal . x <= offset` (empty unless full-dimensional).
    pub fn facets(&self) -> &[Hyperplane] {
        &self.facets
    }

    /// Exact membership test.
    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.ambient {
            return false;
        }
        if self.is_full_dimensional() {
            return self.facets.iter().all(|h| h.eval(p) <= 0);
        }
        match self.affine_dim {
            0 => p == self.vertices[0].as_slice(),
            _ => {
                // p must lie in the affine hull and in the hull of the
                // projection onto coordinates where the projection is injective
                let base = &self.vertices[0];
                let mut diffs: Vec<Vec<i64>> = self.vertices[1..]
                    .iter()
                    .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                diffs.push(p.iter().zip(base).map(|(a, b)| a - b).collect());
                if rank(&diffs) != self.affine_dim {
                    return false;
                }
                let cols = injective_columns(&self.vertices);
                let project = |v: &[i64]| cols.iter().map(|&c| v[c]).collect::<Vec<_>>();
                let proj: Vec<Vec<i64>> = self.vertices.iter().map(|v| project(v)).collect();
                convex_hull(&proj)
                    .map(|q| q.contains(&project(p)))
                    .unwrap_or(false)
            }
        }
    }

    /// Interior and boundary lattice-point counts of a polygon.
    pub fn lattice_point_counts(&self) -> Result<(u64, u64), PolytopeError> {
        if self.ambient != 2 {
            return Err(PolytopeError::NotPlanar(self.ambient));
        }
        match self.affine_dim {
            0 => Ok((0, 1)),
            1 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                Ok((0, gcd(b[0] - a[0], b[1] - a[1]) as u64 + 1))
            }
            _ => {
                let (lo, hi) = self.bounding_box();
                let (mut interior, mut boundary) = (0, 0);
                for x in lo[0]..=hi[0] {
                    for y in lo[1]..=hi[1] {
                        let p = [x, y];
                        let worst = self.facets.iter().map(|h| h.eval(&p)).max().unwrap();
                        match worst {
                            w if w < 0 => interior += 1,
                            0 => boundary += 1,
                            _ => {}
                        }
                    }
                }
                Ok((interior, boundary))
            }
        }
    }

    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.ambient)
            .map(|k| self.vertices.iter().map(|v| v[k]).min().unwrap())
            .collect();
        let hi = (0..self.ambient)
            .map(|k| self.vertices.iter().map(|v| v[k]).max().unwrap())
            .collect();
        (lo, hi)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self, PolytopeError> {
        if self.ambient != other.ambient {
            return Err(PolytopeError::DimensionMismatch(
                self.ambient,
                other.ambient,
            ));
        }
        let sums: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .flat_map(|a| {
                other
                    .vertices
                    .iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
            })
            .collect();
        convex_hull(&sums)
    }

    /// Image under `x -> M x + t` for an integer matrix `M` (row-major).
    pub fn transform(
        &self,
        matrix: &[Vec<i64>],
        translation: &[i64],
    ) -> Result<Self, PolytopeError> {
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| {
                matrix
                    .iter()
                    .zip(translation)
                    .map(|(row, t)| row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() + t)
                    .collect()
            })
            .collect();
        convex_hull(&pts)
    }
}

/// Newton polytope of a Laurent polynomial (the hull of its support).
pub fn newton_polytope(f: &LaurentPolynomial) -> Result<LatticePolytope, PolytopeError> {
    let pts: Vec<Vec<i64>> = f
        .support()
        .into_iter()
        .map(|e| e.into_iter().map(i64::from).collect())
        .collect();
    convex_hull(&pts)
}

/// Smallest lexicographic set of coordinate axes on which the projection of
/// the affine hull of `points` is injective.
fn injective_columns(points: &[Vec<i64>]) -> Vec<usize> {
    let d = points[0].len();
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let k = rank(&diffs);
    let mut cols: Vec<usize> = Vec::new();
    for c in 0..d {
        let mut trial = cols.clone();
        trial.push(c);
        let proj: Vec<Vec<i64>> = diffs
            .iter()
            .map(|v| trial.iter().map(|&j| v[j]).collect())
            .collect();
        if rank(&proj) == trial.len() {
            cols = trial;
            if cols.len() == k {
                break;
            }
        }
    }
    cols
}

pub fn convex_hull(points: &[Vec<i64>]) -> Result<LatticePolytope, PolytopeError> {
    let first = points.first().ok_or(PolytopeError::Empty)?;
    let d = first.len();
    if d > MAX_DIMENSION {
        return Err(PolytopeError::DimensionTooLarge(d));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(PolytopeError::RaggedInput);
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let diffs: Vec<Vec<i64>> = pts
        .iter()
        .map(|v| v.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let k = if d == 0 { 0 } else { rank(&diffs) };

    if k < d {
        let vertices = if k == 0 {
            vec![pts[0].clone()]
        } else {
            let cols = injective_columns(&pts);
            let proj: Vec<Vec<i64>> = pts
                .iter()
                .map(|v| cols.iter().map(|&c| v[c]).collect())
                .collect();
            let low = convex_hull(&proj)?;
            let mut vs: Vec<Vec<i64>> = low
                .vertices
                .iter()
                .map(|pv| {
                    let idx = proj.iter().position(|q| q == pv).unwrap();
                    pts[idx].clone()
                })
                .collect();
            vs.sort();
            vs
        };
        return Ok(LatticePolytope {
            ambient: d,
            vertices,
            affine_dim: k,
            volume: 0,
            facets: Vec::new(),
        });
    }

    let (mut vertices, volume, facets) = match d {
        1 => {
            let lo = pts.first().unwrap()[0];
            let hi = pts.last().unwrap()[0];
            let facets = vec![
                Hyperplane {
                    normal: vec![-1],
                    offset: -lo,
                },
                Hyperplane {
                    normal: vec![1],
                    offset: hi,
                },
            ];
            (vec![vec![lo], vec![hi]], (hi - lo) as u64, facets)
        }
        2 => {
            let ring = monotone_chain(&pts);
            let m = ring.len();
            let mut twice_area: i128 = 0;
            let mut facets = Vec::with_capacity(m);
            for i in 0..m {
                let (a, b) = (&ring[i], &ring[(i + 1) % m]);
                twice_area += a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let g = gcd(dx, dy);
                let normal = vec![dy / g, -dx / g];
                let offset = normal[0] * a[0] + normal[1] * a[1];
                facets.push(Hyperplane { normal, offset });
            }
            facets.sort();
            (ring, twice_area.unsigned_abs() as u64, facets)
        }
        _ => {
            let hull = SimplicialHull::build(pts);
            let facets = hull.hyperplanes();
            let volume = hull.normalized_volume();
            let mut used: Vec<usize> = hull.facets.iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            let vertices = used
                .into_iter()
                .map(|i| hull.points[i].clone())
                .filter(|p| {
                    let normals: Vec<Vec<i64>> = facets
                        .iter()
                        .filter(|h| h.eval(p) == 0)
                        .map(|h| h.normal.clone())
                        .collect();
                    rank(&normals) == d
                })
                .collect();
            (vertices, volume, facets)
        }
    };
    vertices.sort();
    Ok(LatticePolytope {
        ambient: d,
        vertices,
        affine_dim: d,
        volume,
        facets,
    })
}

/// Mixed volume normalized so that `MV(P, ..., P)` equals the normalized
/// volume of `P`, by inclusion-exclusion over Minkowski sums.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<u64, PolytopeError> {
    let d = polytopes.first().ok_or(PolytopeError::Empty)?.ambient;
    if polytopes.len() != d {
        return Err(PolytopeError::WrongArity {
            expected: d,
            found: polytopes.len(),
        });
    }
    if let Some(p) = polytopes.iter().find(|p| p.ambient != d) {
        return Err(PolytopeError::DimensionMismatch(d, p.ambient));
    }
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; 1 << d];
    let mut total: i128 = 0;
    for mask in 1usize..(1 << d) {
        let last = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        let rest = mask & !(1 << last);
        let sum = if rest == 0 {
            polytopes[last].clone()
        } else {
            sums[rest]
                .as_ref()
                .unwrap()
                .minkowski_sum(&polytopes[last])?
        };
        let sign = if (d - mask.count_ones() as usize) % 2 == 0 {
            1
        } else {
            -1
        };
        total += sign * sum.normalized_volume() as i128;
        sums[mask] = Some(sum);
    }
    let factorial: i128 = (1..=d as i128).product();
    debug_assert_eq!(total % factorial, 0, "mixed volume not integral");
    Ok((total / factorial).max(0) as u64)
}

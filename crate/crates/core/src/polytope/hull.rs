//! Exact convex hulls of integer point sets in dimension at most four.
//!
//! All predicates are integer determinants evaluated in `i128`; coordinates
//! are assumed to stay well inside `i32` range.

use std::collections::{BTreeSet, HashMap};

pub(crate) type Point = Vec<i64>;

/// Oriented facet hyperplane `normal . x <= offset`, with `normal` primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Hyperplane {
    pub fn eval(&self, p: &[i64]) -> i64 {
        self.normal.iter().zip(p).map(|(a, b)| a * b).sum::<i64>() - self.offset
    }
}

pub(crate) fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for col in 0..n {
                if m[0][col] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if col % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][col] * det(&minor);
            }
            acc
        }
    }
}

/// Rank of a set of integer vectors (exact, fraction-free elimination).
pub(crate) fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                for k in c..cols {
                    rows[i][k] = rows[i][k] * a - rows[r][k] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| gcd128(g, x));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    gcd128(a as i128, b as i128) as i64
}

/// Signed volume determinant of `pts[1..] - pts[0]` (must be `d` rows of length `d`).
fn orient(pts: &[&Point]) -> i128 {
    let base = pts[0];
    let m: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    det(&m)
}

/// Integer normal of the hyperplane through `d` points in `R^d`
/// (generalized cross product of the difference vectors).
fn hyperplane_normal(pts: &[&Point]) -> Vec<i64> {
    let d = pts[0].len();
    let diffs: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    let mut normal: Vec<i128> = (0..d)
        .map(|col| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != col)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if (col + d - 1) % 2 == 0 { 1 } else { -1 };
            s * det(&minor)
        })
        .collect();
    let g = normal.iter().fold(0, |g, &x| gcd128(g, x));
    if g > 1 {
        normal.iter_mut().for_each(|x| *x /= g);
    }
    normal.into_iter().map(|x| x as i64).collect()
}

/// 2D hull by Andrew's monotone chain, counter-clockwise, collinear points
/// dropped. Input must contain at least three affinely independent points.
pub(crate) fn monotone_chain(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    let cross = |o: &Point, a: &Point, b: &Point| {
        (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128
            - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
    };
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Full-dimensional hull in `R^d` (d = 3 or 4) by beneath-beyond insertion.
pub(crate) struct SimplicialHull {
    pub points: Vec<Point>,
    /// Boundary simplices as indices into `points`, each oriented so that
    /// the interior lies on the negative side.
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialHull {
    /// `points` must be deduplicated and span `R^d`.
    pub fn build(points: Vec<Point>) -> Self {
        let d = points[0].len();
        let initial = initial_simplex(&points, d);
        // interior reference point scaled by d+1 to stay integral
        let interior: Vec<i128> = (0..d)
            .map(|k| initial.iter().map(|&i| points[i][k] as i128).sum())
            .collect();
        let scale = (d + 1) as i128;
        let side = |facet: &[usize], q_scaled: &[i128], s: i128| -> i128 {
            let base = &points[facet[0]];
            let mut m: Vec<Vec<i128>> = facet[1..]
                .iter()
                .map(|&i| {
                    points[i]
                        .iter()
                        .zip(base)
                        .map(|(a, b)| (a - b) as i128 * s)
                        .collect()
                })
                .collect();
            m.push(
                q_scaled
                    .iter()
                    .zip(base)
                    .map(|(a, b)| a - *b as i128 * s)
                    .collect(),
            );
            det(&m)
        };
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for skip in 0..=d {
            let mut f: Vec<usize> = initial
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect();
            if side(&f, &interior, scale) > 0 {
                f.swap(0, 1);
            }
            facets.push(f);
        }
        let in_initial: BTreeSet<usize> = initial.iter().copied().collect();
        for q in 0..points.len() {
            if in_initial.contains(&q) {
                continue;
            }
            let qv: Vec<i128> = points[q].iter().map(|&x| x as i128).collect();
            let visible: Vec<bool> = facets.iter().map(|f| side(f, &qv, 1) > 0).collect();
            if !visible.iter().any(|&v| v) {
                continue;
            }
            // horizon ridges: (d-1)-subsets appearing in exactly one visible facet
            // and in some non-visible facet
            let mut ridge_count: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
            for (f, &vis) in facets.iter().zip(&visible) {
                for skip in 0..d {
                    let mut ridge: Vec<usize> = f
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &i)| i)
                        .collect();
                    ridge.sort_unstable();
                    let e = ridge_count.entry(ridge).or_insert((0, 0));
                    if vis {
                        e.0 += 1;
                    } else {
                        e.1 += 1;
                    }
                }
            }
            let mut horizon: Vec<Vec<usize>> = ridge_count
                .into_iter()
                .filter(|(_, (v, h))| *v == 1 && *h >= 1)
                .map(|(r, _)| r)
                .collect();
            horizon.sort();
            let mut next: Vec<Vec<usize>> = facets
                .iter()
                .zip(&visible)
                .filter(|(_, &v)| !v)
                .map(|(f, _)| f.clone())
                .collect();
            for ridge in horizon {
                let mut f = ridge;
                f.push(q);
                if side(&f, &interior, scale) > 0 {
                    f.swap(0, 1);
                }
                next.push(f);
            }
            facets = next;
        }
        Self { points, facets }
    }

    /// `d!` times the Euclidean volume, by a fan from the first hull vertex.
    pub fn normalized_volume(&self) -> u64 {
        let apex = self.facets[0][0];
        let mut total: i128 = 0;
        for f in &self.facets {
            if f.contains(&apex) {
                continue;
            }
            let mut pts: Vec<&Point> = vec![&self.points[apex]];
            pts.extend(f.iter().map(|&i| &self.points[i]));
            total += orient(&pts).abs();
        }
        total as u64
    }

    /// Distinct facet hyperplanes with outward primitive normals.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut set: BTreeSet<Hyperplane> = BTreeSet::new();
        for f in &self.facets {
            let pts: Vec<&Point> = f.iter().map(|&i| &self.points[i]).collect();
            let mut normal = hyperplane_normal(&pts);
            let offset: i64 = normal.iter().zip(pts[0]).map(|(a, b)| a * b).sum();
            // orient outward: every point must satisfy normal . p <= offset
            let outward = self
                .points
                .iter()
                .all(|p| normal.iter().zip(p).map(|(a, b)| a * b).sum::<i64>() <= offset);
            let (normal, offset) = if outward {
                (normal, offset)
            } else {
                normal.iter_mut().for_each(|x| *x = -*x);
                (normal, -offset)
            };
            set.insert(Hyperplane { normal, offset });
        }
        set.into_iter().collect()
    }
}

fn initial_simplex(points: &[Point], d: usize) -> Vec<usize> {
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<i64>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Vec<i64> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        let mut trial = diffs.clone();
        trial.push(diff.clone());
        if rank(&trial) == trial.len() {
            diffs.push(diff);
            chosen.push(i);
            if chosen.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), d + 1, "point set is not full-dimensional");
    chosen
}

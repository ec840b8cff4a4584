//! Integer coordinates on the affine lattice spanned by a point set.

/// The affine lattice `origin + Z<basis>` generated by a finite point set,
/// with the coordinates of every generating point in that basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    pub origin: Vec<i64>,
    /// Row-echelon integer basis (`rank` rows of ambient length).
    pub basis: Vec<Vec<i64>>,
    /// Coordinates of each input point relative to `origin` in `basis`.
    pub coordinates: Vec<Vec<i64>>,
}

impl AffineLattice {
    /// `points` must be nonempty and of equal length.
    pub fn of(points: &[Vec<i64>]) -> Self {
        let origin = points[0].clone();
        let diffs: Vec<Vec<i64>> = points
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .collect();
        let basis = echelon_basis(&diffs);
        let coordinates = diffs.iter().map(|v| solve_echelon(&basis, v)).collect();
        Self {
            origin,
            basis,
            coordinates,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Hermite-style row reduction with Euclidean row operations; the nonzero
/// rows generate the same lattice as the input rows.
fn echelon_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            // pick the row with smallest nonzero |entry| in column c
            let Some(p) = (0..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs())
            else {
                break;
            };
            let pivot = rows[p].clone();
            let mut done = true;
            for (i, row) in rows.iter_mut().enumerate() {
                if i != p && row[c] != 0 {
                    let q = row[c].div_euclid(pivot[c]);
                    for k in 0..cols {
                        row[k] -= q * pivot[k];
                    }
                    if row[c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut pivot = rows.swap_remove(p);
                if pivot[c] < 0 {
                    pivot.iter_mut().for_each(|x| *x = -*x);
                }
                out.push(pivot);
                rows.retain(|r| r.iter().any(|&x| x != 0));
                break;
            }
        }
    }
    out
}

fn solve_echelon(basis: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let pc = b
            .iter()
            .position(|&x| x != 0)
            .expect("basis rows are nonzero");
        let q = rest[pc] / b[pc];
        debug_assert_eq!(rest[pc] % b[pc], 0);
        for (r, x) in rest.iter_mut().zip(b) {
            *r -= q * x;
        }
        coords.push(q);
    }
    debug_assert!(rest.iter().all(|&x| x == 0));
    coords
}

//! Exact integer linear algebra on small dense matrices.
//!
//! Everything here works over `i128` internally with gcd normalisation of
//! rows, which keeps entries small on the matrices this crate produces
//! (lattice points of desk-scale polytopes). No floating point is used.

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i128, |g, &x| gcd(g, x as i128)) as i64
}

/// Divides a vector by the gcd of its entries. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

fn normalize_row(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| gcd(g, x));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

fn to_i128(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect()
}

/// Reduced row echelon form over the rationals, kept integral: every pivot
/// column is zero outside its pivot row. Returns the matrix and the pivot columns.
fn integer_rref(rows: &[Vec<i64>], ncols: usize) -> (Vec<Vec<i128>>, Vec<usize>) {
    let mut m = to_i128(rows);
    let mut pivots = Vec::new();
    let mut cur = 0;
    for col in 0..ncols {
        if cur >= m.len() {
            break;
        }
        let Some(p) = (cur..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(cur, p);
        normalize_row(&mut m[cur]);
        if m[cur][col] < 0 {
            m[cur].iter_mut().for_each(|x| *x = -*x);
        }
        let pivot_row = m[cur].clone();
        let pv = pivot_row[col];
        for (i, row) in m.iter_mut().enumerate() {
            if i == cur || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = *x * pv - y * f;
            }
            normalize_row(row);
        }
        pivots.push(col);
        cur += 1;
    }
    m.truncate(cur);
    (m, pivots)
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    integer_rref(rows, ncols).1.len()
}

/// Primitive integer vectors spanning the rational nullspace `{y : rows · y = 0}`.
pub fn nullspace(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (m, pivots) = integer_rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let lcm = pivots
        .iter()
        .enumerate()
        .fold(1i128, |l, (i, &c)| l / gcd(l, m[i][c]) * m[i][c]);
    free.iter()
        .map(|&f| {
            let mut v = vec![0i128; ncols];
            v[f] = lcm;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f] * (lcm / m[i][c]);
            }
            normalize_row(&mut v);
            v.into_iter().map(|x| x as i64).collect()
        })
        .collect()
}

/// Bareiss fraction-free determinant.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = to_i128(m);
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Adjugate matrix, so that `m · adj(m) = det(m) · I`.
pub fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * determinant(&minor);
        }
    }
    adj
}

/// Normal vector of the hyperplane through `r` points in `Z^r`, as the
/// generalised cross product of the `r-1` difference vectors. Zero iff the
/// points are affinely dependent.
pub fn hyperplane_normal(points: &[&[i64]]) -> Vec<i64> {
    let r = points.len();
    let base = points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = Vec::with_capacity(r);
    for col in 0..r {
        let minor: Vec<Vec<i64>> = diffs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let d = determinant(&minor);
        normal.push(if col % 2 == 0 { d } else { -d } as i64);
    }
    primitive(&normal)
}

/// A unimodular change of basis `x = U y` together with `U⁻¹`, chosen so
/// that the trailing columns of `U` form a basis of the saturated lattice
/// `Z^n ∩ ker(C)`.
#[derive(Debug, Clone)]
pub struct KernelLattice {
    /// Columns spanning the kernel lattice, stored column-major (`basis[j]` is column j).
    pub basis: Vec<Vec<i64>>,
    /// Rows of `U⁻¹` that read off kernel coordinates.
    pub coordinate_rows: Vec<Vec<i64>>,
}

/// Integer kernel of `c` (rows of length `n`) by unimodular column reduction.
pub fn kernel_lattice(c: &[Vec<i64>], n: usize) -> KernelLattice {
    let mut a = to_i128(c);
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut uinv = u.clone();
    let mut start = 0;
    for i in 0..a.len() {
        if start >= n {
            break;
        }
        while let Some(jmin) = (start..n)
            .filter(|&j| a[i][j] != 0)
            .min_by_key(|&j| a[i][j].abs())
        {
            if jmin != start {
                for row in a.iter_mut() {
                    row.swap(jmin, start);
                }
                for row in u.iter_mut() {
                    row.swap(jmin, start);
                }
                uinv.swap(jmin, start);
            }
            let mut done = true;
            for j in start + 1..n {
                if a[i][j] == 0 {
                    continue;
                }
                let q = a[i][j].div_euclid(a[i][start]);
                for row in a.iter_mut() {
                    row[j] -= q * row[start];
                }
                for row in u.iter_mut() {
                    row[j] -= q * row[start];
                }
                let j_row = uinv[j].clone();
                for (dst, src) in uinv[start].iter_mut().zip(&j_row) {
                    *dst += q * src;
                }
                if a[i][j] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[i][start] != 0 {
            start += 1;
        }
    }
    let basis = (start..n)
        .map(|j| (0..n).map(|i| u[i][j] as i64).collect())
        .collect();
    let coordinate_rows = (start..n)
        .map(|j| uinv[j].iter().map(|&x| x as i64).collect())
        .collect();
    KernelLattice {
        basis,
        coordinate_rows,
    }
}

/// Invariant factors of the Smith normal form (the nonzero diagonal entries, ascending by divisibility).
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a = to_i128(m);
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    changed = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    changed = true;
                }
            }
            if !changed {
                // divisibility of the remaining block by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j];
                            a[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag
}

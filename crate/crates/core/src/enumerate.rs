//! Bounded backtracking enumeration of integer points in `{A x = b, l ≤ x ≤ u}`.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Integer linear system with per-coordinate bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub n: usize,
    pub equalities: Vec<(Vec<i64>, i64)>,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl LinearSystem {
    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.n
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| l <= v && v <= u)
            && self
                .equalities
                .iter()
                .all(|(row, rhs)| dot(row, x) == *rhs)
    }

    /// The same system scaled to the `k`-th dilation.
    pub fn dilate(&self, k: i64) -> LinearSystem {
        LinearSystem {
            n: self.n,
            equalities: self
                .equalities
                .iter()
                .map(|(row, rhs)| (row.clone(), rhs * k))
                .collect(),
            lower: self.lower.iter().map(|l| l * k).collect(),
            upper: self.upper.iter().map(|u| u * k).collect(),
        }
    }

    /// Membership of `x` in the `k`-th dilation without building it.
    pub fn contains_dilate(&self, x: &[i64], k: i64) -> bool {
        x.len() == self.n
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| l * k <= *v && *v <= u * k)
            && self
                .equalities
                .iter()
                .all(|(row, rhs)| dot(row, x) == rhs * k)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// All integer solutions, visiting coordinates in `order`, sorted
/// lexicographically. Fails once more than `budget` nodes are expanded.
pub fn enumerate(sys: &LinearSystem, order: &[usize], budget: u64) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    Search::new(sys, order).run(budget, &mut |x| out.push(x.to_vec()))?;
    out.sort();
    Ok(out)
}

/// Number of integer solutions.
pub fn count(sys: &LinearSystem, order: &[usize], budget: u64) -> Result<u64> {
    let mut c = 0u64;
    Search::new(sys, order).run(budget, &mut |_| c += 1)?;
    Ok(c)
}

struct Search<'a> {
    sys: &'a LinearSystem,
    order: Vec<usize>,
    rows_of: Vec<Vec<(usize, i64)>>,
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
}

impl<'a> Search<'a> {
    fn new(sys: &'a LinearSystem, order: &[usize]) -> Self {
        let mut order: Vec<usize> = order.to_vec();
        let mut seen = vec![false; sys.n];
        for &v in &order {
            seen[v] = true;
        }
        order.extend((0..sys.n).filter(|&v| !seen[v]));
        let m = sys.equalities.len();
        let mut rows_of = vec![Vec::new(); sys.n];
        for (r, (row, _)) in sys.equalities.iter().enumerate() {
            for (v, &c) in row.iter().enumerate() {
                if c != 0 {
                    rows_of[v].push((r, c));
                }
            }
        }
        let mut suffix_min = vec![vec![0; sys.n + 1]; m];
        let mut suffix_max = vec![vec![0; sys.n + 1]; m];
        for r in 0..m {
            let row = &sys.equalities[r].0;
            for p in (0..sys.n).rev() {
                let v = order[p];
                let (a, b) = (row[v] * sys.lower[v], row[v] * sys.upper[v]);
                suffix_min[r][p] = suffix_min[r][p + 1] + a.min(b);
                suffix_max[r][p] = suffix_max[r][p + 1] + a.max(b);
            }
        }
        Search {
            sys,
            order,
            rows_of,
            suffix_min,
            suffix_max,
        }
    }

    fn run(&self, budget: u64, emit: &mut dyn FnMut(&[i64])) -> Result<()> {
        if self
            .sys
            .lower
            .iter()
            .zip(&self.sys.upper)
            .any(|(l, u)| l > u)
        {
            return Ok(());
        }
        let m = self.sys.equalities.len();
        for r in 0..m {
            let rhs = self.sys.equalities[r].1;
            if rhs < self.suffix_min[r][0] || rhs > self.suffix_max[r][0] {
                return Ok(());
            }
        }
        let mut x = vec![0i64; self.sys.n];
        let mut partial = vec![0i64; m];
        let mut nodes = 0u64;
        self.step(0, &mut x, &mut partial, &mut nodes, budget, emit)
    }

    fn step(
        &self,
        p: usize,
        x: &mut [i64],
        partial: &mut [i64],
        nodes: &mut u64,
        budget: u64,
        emit: &mut dyn FnMut(&[i64]),
    ) -> Result<()> {
        if p == self.sys.n {
            emit(x);
            return Ok(());
        }
        let v = self.order[p];
        let (mut lo, mut hi) = (self.sys.lower[v], self.sys.upper[v]);
        for &(r, c) in &self.rows_of[v] {
            let rest = self.sys.equalities[r].1 - partial[r];
            let (a, b) = (
                rest - self.suffix_max[r][p + 1],
                rest - self.suffix_min[r][p + 1],
            );
            let (l, h) = if c > 0 {
                (div_ceil(a, c), div_floor(b, c))
            } else {
                (div_ceil(b, c), div_floor(a, c))
            };
            lo = lo.max(l);
            hi = hi.min(h);
            if lo > hi {
                return Ok(());
            }
        }
        for val in lo..=hi {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded(format!(
                    "enumeration exceeded {budget} nodes"
                )));
            }
            x[v] = val;
            for &(r, c) in &self.rows_of[v] {
                partial[r] += c * val;
            }
            let res = self.step(p + 1, x, partial, nodes, budget, emit);
            for &(r, c) in &self.rows_of[v] {
                partial[r] -= c * val;
            }
            res?;
        }
        x[v] = 0;
        Ok(())
    }
}

//! Integer flows on acyclic quivers: dilations, cells, circulations and the
//! centering of degree-three relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::{self, LinearSystem};
use crate::error::{Error, Result};
use crate::quiver::{Quiver, Weight};

/// A lattice point of `k·∇(Q,θ)`, indexed like [`Quiver::arrows`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlowPoint {
    pub degree: u32,
    pub x: Vec<i64>,
}

/// Lower corner `k̲` of a unit box cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex(pub Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circulation(pub Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowPointJson {
    pub degree: u32,
    pub coords: BTreeMap<String, i64>,
}

impl FlowPoint {
    /// Checks flow balance against `θ` before wrapping.
    pub fn new(q: &Quiver, theta: &Weight, degree: u32, x: Vec<i64>) -> Result<Self> {
        if x.len() != q.num_arrows() || x.iter().any(|&v| v < 0) {
            return Err(Error::InvalidArgument("flow has wrong length or a negative entry".into()));
        }
        let w = weight_of_point(q, &x);
        for v in 0..q.num_vertices() {
            if w.0[v] != theta.0[v] * i64::from(degree) {
                return Err(Error::InvalidArgument(format!(
                    "flow is unbalanced at `{}`",
                    q.vertices()[v]
                )));
            }
        }
        Ok(FlowPoint { degree, x })
    }

    pub fn to_json(&self, q: &Quiver) -> FlowPointJson {
        FlowPointJson {
            degree: self.degree,
            coords: q
                .arrows()
                .iter()
                .zip(&self.x)
                .map(|(a, &v)| (a.id.clone(), v))
                .collect(),
        }
    }
}

impl CellIndex {
    pub fn zero(n: usize) -> Self {
        CellIndex(vec![0; n])
    }
}

/// Arrows sorted by the topological position of their tails.
pub fn arrow_order(q: &Quiver) -> Result<Vec<usize>> {
    let topo = q.topological_order().ok_or(Error::CyclicQuiver)?;
    let mut pos = vec![0usize; q.num_vertices()];
    for (i, &v) in topo.iter().enumerate() {
        pos[v] = i;
    }
    let mut order: Vec<usize> = (0..q.num_arrows()).collect();
    order.sort_by_key(|&a| (pos[q.arrows()[a].tail], a));
    Ok(order)
}

/// Total outflow demanded by negative weights; bounds every arrow value.
pub fn supply(theta: &Weight) -> i64 {
    theta.0.iter().filter(|&&t| t < 0).map(|t| -t).sum()
}

/// The constraint system of `∇(Q,θ)` (or of the cell at `bounds`) in degree one.
pub fn flow_system(q: &Quiver, theta: &Weight, bounds: Option<&CellIndex>) -> Result<LinearSystem> {
    if !q.validate_acyclic() {
        return Err(Error::CyclicQuiver);
    }
    if theta.0.len() != q.num_vertices() {
        return Err(Error::InvalidArgument("weight length mismatch".into()));
    }
    let n = q.num_arrows();
    let mut equalities = Vec::with_capacity(q.num_vertices());
    for v in 0..q.num_vertices() {
        let mut row = vec![0i64; n];
        for (i, a) in q.arrows().iter().enumerate() {
            if a.head == v {
                row[i] += 1;
            }
            if a.tail == v {
                row[i] -= 1;
            }
        }
        equalities.push((row, theta.0[v]));
    }
    let (lower, upper) = match bounds {
        Some(k) => (k.0.clone(), k.0.iter().map(|v| v + 1).collect()),
        None => (vec![0; n], vec![supply(theta); n]),
    };
    Ok(LinearSystem {
        n,
        equalities,
        lower,
        upper,
    })
}

/// All lattice points of `k·∇(Q,θ)`, or of `k` times the cell at `bounds`.
pub fn enumerate_dilation(
    q: &Quiver,
    theta: &Weight,
    k: u32,
    bounds: Option<&CellIndex>,
    budget: u64,
) -> Result<Vec<FlowPoint>> {
    if k == 0 {
        return Err(Error::InvalidArgument("dilation factor must be positive".into()));
    }
    let sys = flow_system(q, theta, bounds)?.dilate(i64::from(k));
    let order = arrow_order(q)?;
    if !theta.is_balanced(q) {
        return Ok(Vec::new());
    }
    Ok(enumerate::enumerate(&sys, &order, budget)?
        .into_iter()
        .map(|x| FlowPoint { degree: k, x })
        .collect())
}

/// `θ_k̲(v) = Σ_{a⁺=v} k̲(a) − Σ_{a⁻=v} k̲(a)`.
pub fn weight_of_point(q: &Quiver, k: &[i64]) -> Weight {
    let mut w = vec![0i64; q.num_vertices()];
    for (a, &v) in q.arrows().iter().zip(k) {
        w[a.head] += v;
        w[a.tail] -= v;
    }
    Weight(w)
}

/// Every weight whose zero cell is nonempty, in sorted order.
pub fn enumerate_nonempty_zero_cells(q: &Quiver) -> Result<Vec<Weight>> {
    if !q.validate_acyclic() {
        return Err(Error::CyclicQuiver);
    }
    let n = q.num_arrows();
    if n > 24 {
        return Err(Error::BudgetExceeded(format!("{n} arrows give too many 0/1 flows")));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut x = vec![0i64; n];
    for mask in 0u64..(1u64 << n) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = ((mask >> i) & 1) as i64;
        }
        seen.insert(weight_of_point(q, &x));
    }
    Ok(seen.into_iter().collect())
}

/// Lattice points of the `k̲`-cell of `∇(Q,θ)`, via the zero cell of `θ − θ_k̲`.
pub fn cell_of(q: &Quiver, theta: &Weight, k: &CellIndex, budget: u64) -> Result<Vec<FlowPoint>> {
    if k.0.len() != q.num_arrows() || k.0.iter().any(|&v| v < 0) {
        return Err(Error::InvalidArgument("cell index must be non-negative per arrow".into()));
    }
    let shifted = theta.sub(&weight_of_point(q, &k.0));
    let zero = CellIndex::zero(q.num_arrows());
    let mut pts = enumerate_dilation(q, &shifted, 1, Some(&zero), budget)?;
    for p in &mut pts {
        for (x, kv) in p.x.iter_mut().zip(&k.0) {
            *x += kv;
        }
    }
    pts.sort();
    Ok(pts)
}

/// Cells of the same dimension as `∇(Q,θ)`, one per distinct lattice-point set,
/// each with its smallest index `k̲`.
pub fn maximal_cells(q: &Quiver, theta: &Weight, budget: u64) -> Result<Vec<(CellIndex, Vec<Vec<i64>>)>> {
    let pts: Vec<Vec<i64>> = enumerate_dilation(q, theta, 1, None, budget)?
        .into_iter()
        .map(|p| p.x)
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let n = q.num_arrows();
    let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
    let dim = crate::polytope::affine_dimension(&refs);
    let hi: Vec<i64> = (0..n).map(|a| pts.iter().map(|p| p[a]).max().unwrap()).collect();
    let total = hi
        .iter()
        .try_fold(1u64, |acc, &h| acc.checked_mul(h.max(1) as u64))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded("too many candidate cell indices".into()))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut k = vec![0i64; n];
    for _ in 0..total {
        let inside: Vec<Vec<i64>> = pts
            .iter()
            .filter(|p| p.iter().zip(&k).all(|(x, kv)| *kv <= *x && *x <= kv + 1))
            .cloned()
            .collect();
        let r: Vec<&[i64]> = inside.iter().map(Vec::as_slice).collect();
        if !inside.is_empty() && crate::polytope::affine_dimension(&r) == dim && seen.insert(inside.clone()) {
            let low: Vec<i64> = (0..n).map(|a| inside.iter().map(|p| p[a]).min().unwrap()).collect();
            out.push((CellIndex(low), inside));
        }
        for a in 0..n {
            k[a] += 1;
            if k[a] < hi[a].max(1) {
                break;
            }
            k[a] = 0;
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_circulation(q: &Quiver, c: &[i64]) -> bool {
    c.len() == q.num_arrows() && weight_of_point(q, c).0.iter().all(|&v| v == 0)
}

/// Splits a circulation into sign-conformal alternating cycles by walking
/// the residual graph in which each arrow is traversed along its sign.
pub fn alternating_cycle_decompose(q: &Quiver, c: &Circulation) -> Result<Vec<Circulation>> {
    if c.0.len() != q.num_arrows() {
        return Err(Error::InvalidArgument("circulation length mismatch".into()));
    }
    let w = weight_of_point(q, &c.0);
    if let Some(v) = (0..q.num_vertices()).find(|&v| w.0[v] != 0) {
        return Err(Error::NotACirculation(q.vertices()[v].clone()));
    }
    let arrows = q.arrows();
    let mut residual = c.0.clone();
    let mut cycles = Vec::new();
    let entry = |a: usize, sign: i64| {
        if sign > 0 {
            arrows[a].tail
        } else {
            arrows[a].head
        }
    };
    let exit = |a: usize, sign: i64| {
        if sign > 0 {
            arrows[a].head
        } else {
            arrows[a].tail
        }
    };
    while let Some(start) = residual.iter().position(|&v| v != 0) {
        let mut path: Vec<usize> = vec![start];
        let mut visited: Vec<usize> = vec![entry(start, residual[start].signum())];
        let mut at = exit(start, residual[start].signum());
        loop {
            if let Some(pos) = visited.iter().position(|&v| v == at) {
                let cycle_arrows = &path[pos..];
                let mut cyc = vec![0i64; residual.len()];
                for &a in cycle_arrows {
                    cyc[a] = residual[a].signum();
                }
                for (r, v) in residual.iter_mut().zip(&cyc) {
                    *r -= v;
                }
                cycles.push(Circulation(cyc));
                break;
            }
            let used: std::collections::HashSet<usize> = path.iter().copied().collect();
            let next = (0..residual.len())
                .find(|&a| residual[a] != 0 && !used.contains(&a) && entry(a, residual[a].signum()) == at)
                .ok_or_else(|| Error::NotACirculation(q.vertices()[at].clone()))?;
            visited.push(at);
            path.push(next);
            at = exit(next, residual[next].signum());
        }
    }
    Ok(cycles)
}

fn distance(v: i64, k: i64) -> i64 {
    (k - v).max(v - k - 1).max(0)
}

fn defect(x: &[i64], k: &[i64]) -> i64 {
    x.iter().zip(k).map(|(&v, &kv)| distance(v, kv)).sum()
}

/// One exchange performed while centering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenteringStep {
    /// 0 for the `m` triple, 1 for the `n` triple.
    pub triple: usize,
    pub pair: (usize, usize),
    /// Cycle subtracted from `pair.0` and added to `pair.1`.
    pub cycle: Circulation,
    pub defect_before: i64,
    pub defect_after: i64,
}

#[derive(Debug, Clone)]
pub struct CenteringResult {
    pub m: [FlowPoint; 3],
    pub n: [FlowPoint; 3],
    pub cell: CellIndex,
    pub trace: Vec<CenteringStep>,
}

fn center_one(q: &Quiver, triple: &mut [Vec<i64>; 3], k: &[i64], tag: usize, trace: &mut Vec<CenteringStep>) -> Result<()> {
    let total = |t: &[Vec<i64>; 3]| t.iter().map(|x| defect(x, k)).sum::<i64>();
    loop {
        let before = total(triple);
        if before == 0 {
            return Ok(());
        }
        let i = (0..3).find(|&i| defect(&triple[i], k) > 0).unwrap();
        let a = (0..k.len())
            .find(|&a| distance(triple[i][a], k[a]) > 0)
            .unwrap();
        let high = triple[i][a] > k[a] + 1;
        let j = (0..3)
            .filter(|&j| j != i)
            .find(|&j| {
                if high {
                    triple[j][a] <= k[a]
                } else {
                    triple[j][a] > k[a]
                }
            })
            .ok_or_else(|| Error::Centering(format!("no exchange partner at arrow {a}")))?;
        // donor loses the cycle, receiver gains it
        let (donor, receiver) = if high { (i, j) } else { (j, i) };
        let diff: Vec<i64> = triple[donor]
            .iter()
            .zip(&triple[receiver])
            .map(|(x, y)| x - y)
            .collect();
        let cycles = alternating_cycle_decompose(q, &Circulation(diff))?;
        let cyc = cycles
            .into_iter()
            .find(|c| c.0[a] == 1)
            .ok_or_else(|| Error::Centering("no conformal cycle through the arrow".into()))?;
        for (x, c) in triple[donor].iter_mut().zip(&cyc.0) {
            *x -= c;
        }
        for (x, c) in triple[receiver].iter_mut().zip(&cyc.0) {
            *x += c;
        }
        let after = total(triple);
        if after >= before {
            return Err(Error::Centering("defect did not decrease".into()));
        }
        trace.push(CenteringStep {
            triple: tag,
            pair: (donor, receiver),
            cycle: cyc,
            defect_before: before,
            defect_after: after,
        });
    }
}

/// Moves two factorizations `m₁+m₂+m₃ = n₁+n₂+n₃` of a degree-three element
/// into the cell at `⌊(m₁+m₂+m₃)/3⌋` by quadratic exchanges.
pub fn center_triple(
    q: &Quiver,
    theta: &Weight,
    m: &[FlowPoint; 3],
    n: &[FlowPoint; 3],
) -> Result<CenteringResult> {
    for p in m.iter().chain(n) {
        if p.degree != 1 {
            return Err(Error::Centering("factors must have degree one".into()));
        }
        FlowPoint::new(q, theta, 1, p.x.clone())
            .map_err(|e| Error::Centering(e.to_string()))?;
    }
    let sum = |t: &[FlowPoint; 3]| -> Vec<i64> {
        (0..q.num_arrows())
            .map(|a| t.iter().map(|p| p.x[a]).sum())
            .collect()
    };
    let s = sum(m);
    if s != sum(n) {
        return Err(Error::Centering("the two triples have different sums".into()));
    }
    let k: Vec<i64> = s.iter().map(|v| v.div_euclid(3)).collect();
    let mut trace = Vec::new();
    let mut mt = [m[0].x.clone(), m[1].x.clone(), m[2].x.clone()];
    let mut nt = [n[0].x.clone(), n[1].x.clone(), n[2].x.clone()];
    center_one(q, &mut mt, &k, 0, &mut trace)?;
    center_one(q, &mut nt, &k, 1, &mut trace)?;
    let wrap = |t: [Vec<i64>; 3]| t.map(|x| FlowPoint { degree: 1, x });
    Ok(CenteringResult {
        m: wrap(mt),
        n: wrap(nt),
        cell: CellIndex(k),
        trace,
    })
}

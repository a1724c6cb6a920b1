//! Seeded random instances for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate;
use crate::error::Result;
use crate::flows::{arrow_order, flow_system, weight_of_point, CellIndex};
use crate::polytope::{GeometryBudget, LatticePolytope};
use crate::quiver::{Quiver, Weight};

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub seed: u64,
    pub max_vertices: usize,
    pub max_arrows: usize,
    /// Entries of the flow defining the weight are drawn from `0..=max_flow`.
    pub max_flow: i64,
    /// Candidates whose polytope has more lattice points are redrawn.
    pub max_points: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0x5eed,
            max_vertices: 6,
            max_arrows: 8,
            max_flow: 2,
            max_points: 150,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub quiver: Quiver,
    pub weight: Weight,
    /// A lattice point of `∇(Q, weight)` used to build the weight.
    pub witness: Vec<i64>,
}

impl CorpusItem {
    pub fn polytope(&self, budget: GeometryBudget) -> Result<LatticePolytope> {
        LatticePolytope::from_quiver(&self.quiver, &self.weight, budget)
    }
}

#[derive(Debug, Clone)]
pub struct CellItem {
    pub quiver: Quiver,
    pub weight: Weight,
    pub cell: CellIndex,
}

impl CellItem {
    pub fn polytope(&self, budget: GeometryBudget) -> Result<LatticePolytope> {
        LatticePolytope::from_quiver_cell(&self.quiver, &self.weight, &self.cell, budget)
    }
}

/// Arrows run from lower to higher index under a shuffled labelling, so the
/// result is acyclic. Parallel arrows are allowed.
pub fn random_acyclic_quiver<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let m = rng.gen_range((n - 1).min(max_arrows).max(1)..=max_arrows.max(1));
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let arrows: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            (label[i], label[j])
        })
        .collect();
    Quiver::from_indices(n, &arrows).expect("indices are in range")
}

fn random_flow<R: Rng>(rng: &mut R, q: &Quiver, max_flow: i64) -> Vec<i64> {
    (0..q.num_arrows()).map(|_| rng.gen_range(0..=max_flow)).collect()
}

const COUNT_BUDGET: u64 = 1_000_000;

fn small_enough(q: &Quiver, theta: &Weight, cell: Option<&CellIndex>, max_points: u64) -> bool {
    let (Ok(sys), Ok(order)) = (flow_system(q, theta, cell), arrow_order(q)) else {
        return false;
    };
    enumerate::count(&sys, &order, COUNT_BUDGET).is_ok_and(|n| n <= max_points)
}

/// Quivers with weights `θ` realised by a random non-negative integer flow,
/// so every polytope is nonempty.
pub fn quiver_corpus(cfg: &CorpusConfig, count: usize) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let quiver = random_acyclic_quiver(&mut rng, cfg.max_vertices, cfg.max_arrows);
        let witness = random_flow(&mut rng, &quiver, cfg.max_flow);
        let weight = weight_of_point(&quiver, &witness);
        if small_enough(&quiver, &weight, None, cfg.max_points) {
            out.push(CorpusItem {
                quiver,
                weight,
                witness,
            });
        }
    }
    out
}

/// Unit-box cells containing the defining flow.
pub fn cell_corpus(cfg: &CorpusConfig, count: usize) -> Vec<CellItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xce11);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let quiver = random_acyclic_quiver(&mut rng, cfg.max_vertices, cfg.max_arrows);
        let x = random_flow(&mut rng, &quiver, cfg.max_flow + 1);
        let weight = weight_of_point(&quiver, &x);
        let cell = CellIndex(
            x.iter()
                .map(|&v| if v > 0 && rng.gen_bool(0.5) { v - 1 } else { v })
                .collect(),
        );
        if small_enough(&quiver, &weight, Some(&cell), cfg.max_points) {
            out.push(CellItem {
                quiver,
                weight,
                cell,
            });
        }
    }
    out
}

//! Vertex boundaries and the isoperimetric scan.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LatticeBall, LatticeError, VertexSet};
use crate::sampling;
use crate::Rat;

/// Largest ball the exhaustive scan will enumerate.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// `∂K`: vertices outside `K` with a neighbour in `K`.
pub fn boundary(g: &LatticeBall, k: &VertexSet) -> VertexSet {
    let mut out = g.closed_neighborhood(k);
    out.difference_with(k);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum IsoMode {
    /// Every subset of the ball.
    Exhaustive,
    /// Random connected subsets grown from random seeds.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub r: usize,
    pub mode: IsoMode,
    /// Sets inside the size window `|V|/100 < |K| < 99|V|/100`.
    pub scanned: u64,
    pub min_boundary: usize,
    /// `min |∂K| / r`.
    #[serde(with = "crate::vector::exact")]
    pub min_ratio: Rat,
    pub witness: Vec<usize>,
}

fn in_window(k: usize, n: usize) -> bool {
    100 * k > n && 100 * k < 99 * n
}

pub fn isoperimetry_scan(g: &LatticeBall, mode: IsoMode) -> Result<IsoReport, LatticeError> {
    if g.r == 0 {
        return Err(LatticeError::RadiusTooSmall(1));
    }
    let n = g.vertex_count();
    let (scanned, min_boundary, witness) = match mode {
        IsoMode::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return Err(LatticeError::SizeGuard { size: n, limit: EXHAUSTIVE_LIMIT });
            }
            exhaustive(g)
        }
        IsoMode::Sampled { samples, seed } => sampled(g, samples, seed),
    };
    Ok(IsoReport {
        r: g.r,
        mode,
        scanned,
        min_boundary,
        min_ratio: Rat::new((min_boundary as i64).into(), (g.r as i64).into()),
        witness,
    })
}

fn exhaustive(g: &LatticeBall) -> (u64, usize, Vec<usize>) {
    let n = g.vertex_count();
    let nbr: Vec<u32> = g.adjacency.iter().map(|a| a.iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    // reach[mask] = union of the neighbourhoods of the members of mask.
    let mut reach = vec![0u32; 1 << n];
    let mut best = (usize::MAX, 0u32);
    let mut scanned = 0;
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        reach[mask as usize] = reach[(mask & (mask - 1)) as usize] | nbr[low];
        if !in_window(mask.count_ones() as usize, n) {
            continue;
        }
        scanned += 1;
        let b = (reach[mask as usize] & !mask).count_ones() as usize;
        if b < best.0 {
            best = (b, mask);
        }
    }
    (scanned, best.0, (0..n).filter(|&v| best.1 >> v & 1 == 1).collect())
}

fn sampled(g: &LatticeBall, samples: usize, seed: u64) -> (u64, usize, Vec<usize>) {
    let n = g.vertex_count();
    let lo = n / 100 + 1;
    let hi = (99 * n).div_ceil(100) - 1;
    let mut rng = sampling::rng(seed);
    let mut best: (usize, Vec<usize>) = (usize::MAX, Vec::new());
    let mut scanned = 0;
    for _ in 0..samples {
        let target = rng.random_range(lo..=hi);
        let mut k = g.empty_set();
        let start = rng.random_range(0..n);
        k.insert(start);
        let mut frontier: Vec<usize> = g.adjacency[start].clone();
        let mut size = 1;
        while size < target {
            let i = rng.random_range(0..frontier.len());
            let v = frontier.swap_remove(i);
            if k.contains(v) {
                continue;
            }
            k.insert(v);
            size += 1;
            frontier.extend(g.adjacency[v].iter().filter(|&&w| !k.contains(w)));
        }
        if !in_window(size, n) {
            continue;
        }
        scanned += 1;
        let b = boundary(g, &k).count_ones(..);
        if b < best.0 {
            best = (b, k.ones().collect());
        }
    }
    (scanned, best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_ball;

    #[test]
    fn boundaries() {
        let g = build_ball(2);
        assert_eq!(boundary(&g, &g.full_set()).count_ones(..), 0);
        let o = g.set_of(&[0]).unwrap();
        assert_eq!(boundary(&g, &o).count_ones(..), 6);
        // The half plane b >= 1 of B_2 has the row b = 0 as its boundary.
        let half: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.coords[v].1 >= 1).collect();
        let bd = boundary(&g, &g.set_of(&half).unwrap());
        assert_eq!(bd.ones().collect::<Vec<_>>(), (0..g.vertex_count()).filter(|&v| g.coords[v].1 == 0).collect::<Vec<_>>());
        assert_eq!(bd.count_ones(..), 5);
    }

    #[test]
    fn exhaustive_r1() {
        let r = isoperimetry_scan(&build_ball(1), IsoMode::Exhaustive).unwrap();
        assert_eq!(r.min_boundary, 1);
        assert_eq!(r.scanned, (1 << 7) - 2);
    }

    #[test]
    fn sampled_sets_are_in_window() {
        let g = build_ball(4);
        let r = isoperimetry_scan(&g, IsoMode::Sampled { samples: 500, seed: 9 }).unwrap();
        assert_eq!(r.scanned, 500);
        assert!(r.min_boundary >= 1);
        assert!(g.is_connected(&g.set_of(&r.witness).unwrap()));
        assert_eq!(boundary(&g, &g.set_of(&r.witness).unwrap()).count_ones(..), r.min_boundary);
    }
}

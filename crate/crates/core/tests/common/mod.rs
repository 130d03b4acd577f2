#![allow(dead_code)]

use fracmg::grid::{Block, StaggeredGrid};
use fracmg::MixedDimVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameter pairs of both iteration-count tables.
pub const TABLE_PAIRS: [(f64, f64); 8] = [
    (1e-6, 10.0),
    (1e-4, 10.0),
    (1e-2, 10.0),
    (1.0, 10.0),
    (1e-6, 0.0),
    (1e-6, 50.0),
    (1e-6, 100.0),
    (1e-6, 200.0),
];

/// Random state with velocities of size `u_scale` and pressures in `(0, p_scale)`.
pub fn random_state(grid: &StaggeredGrid, seed: u64, u_scale: f64, p_scale: f64) -> MixedDimVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = MixedDimVector::zeros(grid);
    for b in Block::ALL {
        for v in x.block_mut(b) {
            *v = if b.is_velocity() {
                rng.gen_range(-u_scale..u_scale)
            } else {
                rng.gen_range(0.0..p_scale)
            };
        }
    }
    x
}

pub fn random_vec(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// `x` with every entry moved by up to `rel` times the largest magnitude
/// in its block.
pub fn perturb(x: &MixedDimVector, seed: u64, rel: f64) -> MixedDimVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = x.clone();
    for b in Block::ALL {
        let scale = x.block(b).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in y.block_mut(b) {
            *v += rel * scale * rng.gen_range(-1.0..1.0);
        }
    }
    y
}

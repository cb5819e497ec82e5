//! Sampling helpers: uniform lattices and seeded pseudo-random interior points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` equally spaced points covering `[lo, hi]` inclusive (`n >= 2`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Tensor lattice of `(r, t)` pairs.
pub fn grid2(r: (f64, f64), nr: usize, t: (f64, f64), nt: usize) -> Vec<(f64, f64)> {
    let rs = linspace(r.0, r.1, nr);
    let ts = linspace(t.0, t.1, nt);
    rs.iter()
        .flat_map(|&ri| ts.iter().map(move |&ti| (ri, ti)))
        .collect()
}

/// `count` points drawn uniformly in the open box, deterministic in `seed`.
pub fn random_points(
    r: (f64, f64),
    t: (f64, f64),
    count: usize,
    seed: u64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            // keep clear of the faces
            let a = 0.02 + 0.96 * a;
            let b = 0.02 + 0.96 * b;
            (r.0 + a * (r.1 - r.0), t.0 + b * (t.1 - t.0))
        })
        .collect()
}

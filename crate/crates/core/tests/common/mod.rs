#![allow(dead_code)]

use flp_core::FlpInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random instance on a 10 x 10 floor with areas in [1, 9], aspects in
/// [1, 6] and positive costs.
pub fn random_instance(seed: u64, n: usize) -> FlpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = FlpInstance::new(10.0, 10.0).with_name(format!("rand{seed}"));
    for _ in 0..n {
        let area = rng.gen_range(1.0..9.0);
        let aspect = rng.gen_range(1.0..6.0);
        inst.add_box(area, aspect);
    }
    for i in 0..n {
        for j in i + 1..n {
            inst.set_cost(i, j, rng.gen_range(0.5..5.0));
        }
    }
    inst
}

/// Floor 10 x 10, area 4, aspect 4, unit costs.
pub fn symmetric(n: usize) -> FlpInstance {
    let mut inst = FlpInstance::new(10.0, 10.0).with_name(format!("sym{n}"));
    for _ in 0..n {
        inst.add_box(4.0, 4.0);
    }
    for i in 0..n {
        for j in i + 1..n {
            inst.set_cost(i, j, 1.0);
        }
    }
    inst
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

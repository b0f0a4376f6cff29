use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::milp::{LpProblem, LpStatus, MilpModel};

/// An integer-feasible vertex of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vec<f64>,
    /// Values of the model's binaries, in [`MilpModel::binaries`] order.
    pub code: Vec<u8>,
}

const MAX_GROUP: usize = 8;

/// Groups binaries by the box pair named in their last two `_` fields
/// (`z_x_2_1` and `w1_1_2` both belong to pair `{1, 2}`); other binaries
/// form singleton groups.
pub fn code_groups(model: &MilpModel) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut single = Vec::new();
    for j in model.binaries() {
        let parts: Vec<&str> = model.var(j).name.rsplitn(3, '_').collect();
        let key = match (parts.first().and_then(|s| s.parse().ok()), parts.get(1).and_then(|s| s.parse().ok())) {
            (Some(b), Some(a)) if parts.len() == 3 => Some((usize::min(a, b), usize::max(a, b))),
            _ => None,
        };
        match key {
            Some(k) => groups.entry(k).or_default().push(j),
            None => single.push(vec![j]),
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.extend(single);
    out
}

/// Draws `count` integer-feasible vertices of `model`.
///
/// For each pair, the local codes that keep the LP relaxation feasible are
/// found once. A sample picks one such code per pair uniformly, fixes all
/// binaries, and solves the LP with a random objective. Infeasible
/// combinations are redrawn, at most `50 * count + 100` times in total.
pub fn sample_feasible_points(model: &MilpModel, count: usize, seed: u64) -> Vec<Sample> {
    if count == 0 {
        return Vec::new();
    }
    let lp = LpProblem::from_model(model);
    let (lb, ub) = (lp.lower().to_vec(), lp.upper().to_vec());
    let zero = vec![0.0; lp.num_vars()];
    let groups = code_groups(model);
    let mut local: Vec<Vec<Vec<f64>>> = Vec::with_capacity(groups.len());
    for g in &groups {
        assert!(g.len() <= MAX_GROUP, "code group too large");
        let mut ok = Vec::new();
        for mask in 0u32..(1 << g.len()) {
            let vals: Vec<f64> = (0..g.len()).map(|t| f64::from((mask >> t) & 1)).collect();
            let (mut l2, mut u2) = (lb.clone(), ub.clone());
            let mut fits = true;
            for (t, &j) in g.iter().enumerate() {
                if vals[t] < lb[j] || vals[t] > ub[j] {
                    fits = false;
                }
                l2[j] = vals[t];
                u2[j] = vals[t];
            }
            if fits && lp.solve_with(&l2, &u2, &zero).status == LpStatus::Optimal {
                ok.push(vals);
            }
        }
        local.push(ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let binaries: Vec<usize> = model.binaries().collect();
    let mut out = Vec::with_capacity(count);
    if local.iter().any(|o| o.is_empty()) {
        return out;
    }
    let mut budget = 50 * count + 100;
    while out.len() < count && budget > 0 {
        budget -= 1;
        let (mut l2, mut u2) = (lb.clone(), ub.clone());
        for (g, opts) in groups.iter().zip(&local) {
            let vals = opts.choose(&mut rng).expect("nonempty");
            for (t, &j) in g.iter().enumerate() {
                l2[j] = vals[t];
                u2[j] = vals[t];
            }
        }
        let cost: Vec<f64> = (0..lp.num_vars()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sol = lp.solve_with(&l2, &u2, &cost);
        if sol.status != LpStatus::Optimal {
            continue;
        }
        let code = binaries.iter().map(|&j| sol.x[j].round() as u8).collect();
        out.push(Sample { x: sol.x, code });
    }
    out
}

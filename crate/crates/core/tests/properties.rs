mod common;

use flp_core::formulations::{area_outer_approx, pairwise_model, PairwiseKind, SitbMode};
use flp_core::milp::{export_lp, import_lp, solve_lp, solve_milp, Limits, LpStatus};
use flp_core::{
    derive_bounds, parse_instance, perturb_instance, write_instance, Axis, FlpInstance, MilpModel, Sense, SolveStatus, VarKind,
};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = FlpInstance> {
    ((5.0f64..20.0, 5.0f64..20.0), prop::collection::vec((0.5f64..12.0, 1.0f64..6.0), 1..6), prop::collection::vec(0.0f64..5.0, 15))
        .prop_map(|((fx, fy), boxes, costs)| {
            let mut inst = FlpInstance::new(fx, fy).with_name("prop");
            for (a, b) in &boxes {
                inst.add_box(*a, *b);
            }
            let mut k = 0;
            for (i, j) in inst.pairs() {
                if costs[k] > 0.5 {
                    inst.set_cost(i, j, costs[k]);
                }
                k += 1;
            }
            inst
        })
}

fn small_model() -> impl Strategy<Value = (MilpModel, bool)> {
    let n = 2..5usize;
    n.prop_flat_map(|n| {
        (
            prop::collection::vec((-5.0f64..5.0, 1.0f64..6.0, any::<bool>()), n),
            prop::collection::vec((prop::collection::vec(-3i32..4, n), 0u8..3, -2.0f64..8.0), 1..5),
        )
    })
    .prop_map(|(vars, rows)| {
        let mut m = MilpModel::new();
        let mut has_int = false;
        for (k, (_, ub, bin)) in vars.iter().enumerate() {
            if *bin {
                m.add_var(format!("b{k}"), 0.0, 1.0, VarKind::Binary).unwrap();
                has_int = true;
            } else {
                m.add_var(format!("x{k}"), 0.0, *ub, VarKind::Continuous).unwrap();
            }
        }
        for (r, (coefs, sense, rhs)) in rows.iter().enumerate() {
            let sense = [Sense::Le, Sense::Ge, Sense::Le][*sense as usize];
            let terms = coefs.iter().enumerate().map(|(j, &a)| (j, f64::from(a))).collect();
            let _ = m.add_constraint(format!("r{r}"), terms, sense, *rhs);
        }
        m.set_objective(vars.iter().enumerate().map(|(j, v)| (j, v.0)).collect(), 1.5).unwrap();
        (m, has_int)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_respect_area_and_floor(inst in instance()) {
        let Ok(b) = derive_bounds(&inst) else { return Ok(()) };
        for (i, bx) in inst.boxes.iter().enumerate() {
            for s in Axis::BOTH {
                let (lb, ub) = (b.lb(i, s), b.ub(i, s));
                prop_assert!(0.0 < lb && lb <= ub + 1e-12 && ub <= inst.floor_len(s) + 1e-12);
                prop_assert!(lb * ub >= bx.area * (1.0 - 1e-9));
                if ub < inst.floor_len(s) {
                    prop_assert!(lb <= bx.area.sqrt() + 1e-9 && bx.area.sqrt() <= ub + 1e-9);
                }
            }
            // extreme widths give the target area with aspect at most beta
            let (w, h) = (b.ub(i, Axis::X), bx.area / b.ub(i, Axis::X));
            prop_assert!(w.max(h) / w.min(h) <= bx.aspect * (1.0 + 1e-9));
        }
    }

    #[test]
    fn zero_perturbation_keeps_areas_and_costs(inst in instance(), aspect in 4u8..7, seed in any::<u64>()) {
        let out = perturb_instance(&inst, 0.0, f64::from(aspect), seed);
        for (a, b) in inst.boxes.iter().zip(&out.boxes) {
            prop_assert_eq!(a.area, b.area);
            prop_assert_eq!(b.aspect, f64::from(aspect));
        }
        prop_assert_eq!(&inst.costs, &out.costs);
    }

    #[test]
    fn perturbation_is_deterministic_and_positive(inst in instance(), gamma in 0.0f64..3.0, seed in any::<u64>()) {
        let a = perturb_instance(&inst, gamma, 5.0, seed);
        let b = perturb_instance(&inst, gamma, 5.0, seed);
        prop_assert_eq!(write_instance(&a), write_instance(&b));
        prop_assert!(a.boxes.iter().all(|bx| bx.area > 0.0));
        prop_assert!(a.costs.values().all(|&p| p > 0.0));
    }

    #[test]
    fn instance_text_round_trips(inst in instance()) {
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn lp_text_round_trips((m, _) in small_model()) {
        let text = export_lp(&m);
        let back = import_lp(&text).unwrap();
        prop_assert_eq!(export_lp(&back), text);
        let (a, b) = (solve_milp(&m, &Limits::default()), solve_milp(&back, &Limits::default()));
        prop_assert_eq!(a.status, b.status);
        if let (Some(x), Some(y)) = (a.objective, b.objective) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn solver_results_are_consistent((m, has_int) in small_model()) {
        let limits = Limits { record_log: true, ..Limits::default() };
        let r = solve_milp(&m, &limits);
        if r.status == SolveStatus::Optimal {
            let x = r.point.as_ref().unwrap();
            prop_assert!(m.is_feasible(x, 1e-6));
            prop_assert!(m.is_integral(x, 1e-6));
            prop_assert!(r.bound <= r.objective.unwrap() + 1e-6);
        }
        let mut last = f64::NEG_INFINITY;
        for e in &r.log {
            prop_assert!(e.best_bound >= last - 1e-9);
            if let Some(inc) = e.incumbent {
                prop_assert!(e.best_bound <= inc + 1e-6);
            }
            last = e.best_bound;
        }
        if !has_int {
            let lp = solve_lp(&m);
            if lp.status == LpStatus::Optimal {
                prop_assert_eq!(r.objective, Some(lp.objective));
            }
        }
    }

    #[test]
    fn tangent_rows_hold_on_the_area_curve(area in 0.5f64..50.0, spread in 1.0f64..6.0, k in 1usize..10, t in 0.0f64..1.0) {
        let lo = area.sqrt() / spread;
        let hi = area.sqrt() * spread;
        let w = lo + t * (hi - lo);
        let rows = area_outer_approx(0, area, lo, hi, k);
        prop_assert!(!rows.is_empty() && rows.len() <= k);
        for r in &rows {
            let v = |n: &str| if n == "l_x_1" { w } else { area / w };
            prop_assert!(r.violation(v) <= 1e-9 * area.max(1.0));
        }
    }

    /// Every code a formulation accepts for a fixed layout lies below the
    /// refined precedence code of that layout, slot by slot.
    #[test]
    fn slot_images_lie_below_precedence(
        c in prop::array::uniform4(0.0f64..1.0),
        w in prop::array::uniform4(0.1f64..0.45),
    ) {
        let floor = [10.0, 10.0];
        let mut inst = FlpInstance::new(floor[0], floor[1]);
        inst.add_box(4.0, 4.0);
        inst.add_box(4.0, 4.0);
        let b = derive_bounds(&inst).unwrap();
        // widths inside [lb, ub] = [1, 4], centers keeping boxes on the floor
        let l = w.map(|t| 1.0 + 3.0 * (t - 0.1) / 0.35);
        let pos = [0, 1, 2, 3].map(|k| l[k] / 2.0 + c[k] * (10.0 - l[k]));
        let value = |n: &str| -> Option<f64> {
            let p: Vec<&str> = n.split('_').collect();
            let s = if p.get(1) == Some(&"x") { 0 } else { 1 };
            let i = p.get(2).and_then(|t| t.parse::<usize>().ok())?;
            match p[0] {
                "c" => Some(pos[2 * (i - 1) + s]),
                "l" => Some(l[2 * (i - 1) + s]),
                "d" => Some((pos[s] - pos[2 + s]).abs()),
                _ => None,
            }
        };
        let prec = |p: usize, q: usize, s: usize| pos[2 * p + s] + l[2 * p + s] / 2.0 <= pos[2 * q + s] - l[2 * q + s] / 2.0;
        let truth = [prec(0, 1, 1), prec(0, 1, 0), prec(1, 0, 1), prec(1, 0, 0)];
        for kind in [PairwiseKind::Unary, PairwiseKind::RefinedUnary, PairwiseKind::BigMUnary, PairwiseKind::GrayBinary, PairwiseKind::Bldp1] {
            let f = pairwise_model(kind, 0, 1, &b, floor, SitbMode::InFormulation).unwrap();
            let codes = kind.code_vars(0, 1);
            let slots = kind.slot_exprs(0, 1);
            let mut accepted = 0;
            for mask in 0u32..(1 << codes.len()) {
                let v = |n: &str| match codes.iter().position(|x| x == n) {
                    Some(t) => f64::from((mask >> t) & 1),
                    None => value(n).unwrap_or(0.0),
                };
                if f.rows.iter().any(|r| r.violation(v) > 1e-9) {
                    continue;
                }
                accepted += 1;
                for t in 0..4 {
                    prop_assert!(slots[t].eval(v) <= f64::from(u8::from(truth[t])) + 1e-9, "{} slot {}", kind, t);
                }
            }
            prop_assert_eq!(accepted > 0, truth.iter().any(|&t| t), "{} accepted {}", kind, accepted);
        }
    }
}

mod embedding_soundness {
    use flp_core::embedding::{build_bigm_embedding, code_set_formulation, CodeSet, Disjunction, Encoding, GroundSet};
    use flp_core::milp::{LinExpr, NamedRow};
    use flp_core::Sense;
    use proptest::prelude::*;

    type Branch = Vec<(Vec<i32>, f64)>;

    fn setup() -> impl Strategy<Value = (usize, Vec<Branch>, bool)> {
        (2usize..5, 2usize..4, any::<bool>()).prop_flat_map(|(n, k, dense)| {
            let row = (prop::collection::vec(-2i32..3, n), -2.0f64..6.0);
            (Just(n), prop::collection::vec(prop::collection::vec(row, 1..3), k), Just(dense))
        })
    }

    fn encoding(k: usize, dense: bool) -> Encoding {
        match (k, dense) {
            (2, true) => Encoding::new(vec![vec![0], vec![1]]).unwrap(),
            (3, true) => Encoding::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap(),
            _ => Encoding::unary(k),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The integer points of the embedding project onto the union of the branches.
        #[test]
        fn integer_projection_is_the_union(
            (n, branches, dense) in setup(),
            points in prop::collection::vec(prop::collection::vec(0.0f64..4.0, 4), 40),
        ) {
            let mut q = GroundSet::new();
            for t in 0..n {
                q.add_var(format!("x{t}"), 0.0, 4.0);
            }
            let rows: Vec<Vec<NamedRow>> = branches
                .iter()
                .enumerate()
                .map(|(k, br)| {
                    br.iter()
                        .enumerate()
                        .map(|(l, (a, b))| {
                            let mut e = LinExpr::new();
                            for (t, &c) in a.iter().enumerate() {
                                e.add_term(f64::from(c), format!("x{t}"));
                            }
                            NamedRow::le(format!("b{k}_{l}"), e, LinExpr::constant(*b))
                        })
                        .collect()
                })
                .collect();
            let d = Disjunction { branches: rows.clone() };
            let enc = encoding(d.len(), dense);
            let v = match code_set_formulation(&enc) {
                Ok(v) => v,
                Err(_) => CodeSet { width: 2, rows: vec![(vec![1.0, 1.0], Sense::Le, 1.0)] },
            };
            let names: Vec<String> = (0..enc.width()).map(|t| format!("h{t}")).collect();
            let m = build_bigm_embedding(&q, &d, &enc, &v, None, &names).unwrap();
            for p in &points {
                let at = |name: &str| p[name[1..].parse::<usize>().unwrap()];
                let in_union = rows.iter().any(|br| br.iter().all(|r| r.violation(at) <= 1e-9));
                let lifted = enc.codes.iter().any(|h| {
                    let x: Vec<f64> = m
                        .vars()
                        .iter()
                        .map(|var| if var.name.starts_with('h') { f64::from(h[var.name[1..].parse::<usize>().unwrap()]) } else { at(&var.name) })
                        .collect();
                    m.is_feasible(&x, 1e-9)
                });
                prop_assert_eq!(in_union, lifted);
                // codes outside the encoding are cut off by the code rows
                let all = 1usize << enc.width();
                for mask in 0..all {
                    let h: Vec<u8> = (0..enc.width()).map(|t| ((mask >> t) & 1) as u8).collect();
                    if enc.codes.contains(&h) {
                        continue;
                    }
                    let x: Vec<f64> = m
                        .vars()
                        .iter()
                        .map(|var| if var.name.starts_with('h') { f64::from(h[var.name[1..].parse::<usize>().unwrap()]) } else { at(&var.name) })
                        .collect();
                    prop_assert!(!m.is_feasible(&x, 1e-9));
                }
            }
        }
    }
}

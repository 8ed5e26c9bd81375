//! Dominance relations, fixpoint behaviour, tree-operator instantiations
//! and the synthetic/mixing algebra of the SCUB engine.

use rand::Rng as _;

use pscub_core::cluster::DEFAULT_EDGE_CAP;
use pscub_core::oracle::{one_polymer_ratio, FugacityVector};
use pscub_core::sampling::{random_fugacity, random_system, rng};
use pscub_core::schemes::{Behaviour, BehaviourVector};
use pscub_core::scub::tree_op::{
    depth_k_tree_operator, depth_one_tree_operator, multiplex, multiplexed_operator,
    MultiplexKind, StarWeights, TreeShape, TreeWeights,
};
use pscub_core::scub::{
    admissible_sweep, escaping_series_bound_check, generic_scub_bound, iterate_from, leop,
    leop_all, mixing_reduction_check, scub_holds, LeopKind,
};
use pscub_core::system::Volume;

#[test]
fn dominance_chain_random_samples() {
    let mut r = rng(41);
    for _ in 0..300 {
        let n = 2 + (r.gen::<u64>() % 5) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let mu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 1.5));
        for gamma in 0..sys.len() {
            let kp = leop(&LeopKind::Kp, &sys, gamma, &mu).unwrap();
            let dob = leop(&LeopKind::Dobrushin, &sys, gamma, &mu).unwrap();
            let fp = leop(&LeopKind::Fp, &sys, gamma, &mu).unwrap();
            let red = leop(&LeopKind::Reduced, &sys, gamma, &mu).unwrap();
            let ret = leop(&LeopKind::Returning, &sys, gamma, &mu).unwrap();
            let mix = leop(&LeopKind::MixingOptimal, &sys, gamma, &mu).unwrap();
            let tol = 1e-12 * kp.max(1.0);
            assert!(fp <= dob + tol, "FP {fp} > Dob {dob}");
            assert!(dob <= kp + tol, "Dob {dob} > KP {kp}");
            assert!(ret <= red + tol, "Ret {ret} > Red {red}");
            assert!(red <= dob + tol, "Red {red} > Dob {dob}");
            assert!(mix <= fp.min(ret) + tol, "Mix {mix} > min(FP, Ret)");
        }
    }
}

#[test]
fn leop_monotone_in_mu() {
    let mut r = rng(42);
    for _ in 0..100 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let lo = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.8));
        let bump = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.5));
        let hi = FugacityVector::from_values(
            lo.values()
                .iter()
                .zip(bump.values())
                .map(|(a, b)| a + b)
                .collect(),
        );
        let g = BehaviourVector::random(&sys, &mut r);
        let kinds = [
            LeopKind::Kp,
            LeopKind::Dobrushin,
            LeopKind::Fp,
            LeopKind::Reduced,
            LeopKind::Returning,
            LeopKind::MixingOptimal,
            LeopKind::Synthetic(g),
        ];
        for kind in &kinds {
            let a = leop_all(kind, &sys, &lo).unwrap();
            let b = leop_all(kind, &sys, &hi).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!(x <= y, "{kind:?} not monotone: {x} > {y}");
            }
        }
    }
}

#[test]
fn fixpoint_iterates_ordered() {
    // From 0 the iterates are nondecreasing; from the witness they are
    // nonincreasing; the limits agree in order.
    let mut r = rng(43);
    for _ in 0..30 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.06));
        let report = scub_holds(&LeopKind::Fp, &sys, &rho).unwrap();
        assert!(report.converged);
        let limit = report.limit.unwrap();
        // One step from zero increases, one step from a doubled witness
        // decreases.
        let step0 = leop_all(&LeopKind::Fp, &sys, &FugacityVector::zeros(&sys)).unwrap();
        for (g, v) in step0.iter().enumerate() {
            assert!(rho.get(g) * v >= 0.0);
        }
        let above = FugacityVector::from_values(
            limit.values().iter().map(|v| v * 2.0 + 0.1).collect(),
        );
        let from_above = iterate_from(&LeopKind::Fp, &sys, &rho, &above, 10_000).unwrap();
        assert!(from_above.converged);
        for (x, y) in from_above.value.iter().zip(limit.values()) {
            assert!(
                *x >= *y - 1e-9 * y.abs().max(1e-12),
                "upper limit {x} below least fixpoint {y}"
            );
        }
    }
}

#[test]
fn returning_equals_reduced_on_triangle_free() {
    let mut r = rng(44);
    let mut seen = 0;
    while seen < 40 {
        let n = 2 + (r.gen::<u64>() % 5) as usize;
        let sys = random_system(&mut r, n, 0.25);
        let triangle_free = (0..sys.len()).all(|a| {
            let nb = sys.neighbours(a);
            nb.iter()
                .enumerate()
                .all(|(i, &x)| nb[i + 1..].iter().all(|&y| !sys.incompatible(x, y)))
        });
        if !triangle_free {
            continue;
        }
        seen += 1;
        let mu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 1.0));
        for gamma in 0..sys.len() {
            let red = leop(&LeopKind::Reduced, &sys, gamma, &mu).unwrap();
            let ret = leop(&LeopKind::Returning, &sys, gamma, &mu).unwrap();
            assert!(
                (red - ret).abs() <= 1e-12 * red.max(1.0),
                "triangle-free mismatch: {red} vs {ret}"
            );
        }
    }
}

#[test]
fn star_weights_recover_named_shapes() {
    // FP weights: compatible children sets within the closed neighbourhood.
    let mut r = rng(45);
    for _ in 0..20 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let mu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 1.0));
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.3));
        let labels = sys.len();
        let fp_weights = StarWeights {
            weight: &|l: usize, ch: &[usize]| {
                let distinct = ch.windows(2).all(|w| w[0] != w[1]);
                let in_nb = ch.iter().all(|&c| sys.incompatible(c, l));
                let compat = ch
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| ch[i + 1..].iter().all(|&y| !sys.incompatible(x, y)));
                if distinct && in_nb && compat {
                    1.0
                } else {
                    0.0
                }
            },
            max_children: labels + 1,
        };
        let out =
            depth_one_tree_operator(labels, &fp_weights, rho.values(), mu.values()).unwrap();
        for (gamma, got) in out.iter().enumerate() {
            let expected = rho.get(gamma) * leop(&LeopKind::Fp, &sys, gamma, &mu).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12 * expected.max(1.0),
                "FP star weights: {got} vs {expected}"
            );
        }
        // Dobrushin weights: distinct children in the closed neighbourhood.
        let dob_weights = StarWeights {
            weight: &|l: usize, ch: &[usize]| {
                let distinct = ch.windows(2).all(|w| w[0] != w[1]);
                let in_nb = ch.iter().all(|&c| sys.incompatible(c, l));
                if distinct && in_nb {
                    1.0
                } else {
                    0.0
                }
            },
            max_children: labels + 1,
        };
        let out =
            depth_one_tree_operator(labels, &dob_weights, rho.values(), mu.values()).unwrap();
        for (gamma, got) in out.iter().enumerate() {
            let expected =
                rho.get(gamma) * leop(&LeopKind::Dobrushin, &sys, gamma, &mu).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12 * expected.max(1.0),
                "Dobrushin star weights: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn depth_k_refined_series_bound() {
    // With FP star weights on a 3-polymer system, T(μ) >= ρ(1+μ) holds, so
    // the split-off series bound Q <= S(μ)/(1-ρ) applies to the iterated
    // limit R = ρ·Q.
    let sys = random_system(&mut rng(46), 3, 0.6);
    let labels = sys.len();
    let rho_v = vec![0.05, 0.04, 0.06];
    let mu_v = vec![0.3, 0.25, 0.2];
    let weights = TreeWeights {
        weight: &|t: &TreeShape, lab: &[usize]| {
            if t.depth() > 1 {
                return 0.0;
            }
            let l = lab[0];
            let ch = &lab[1..];
            let mut sorted = ch.to_vec();
            sorted.sort_unstable();
            let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
            let in_nb = ch.iter().all(|&c| sys.incompatible(c, l));
            let compat = ch
                .iter()
                .enumerate()
                .all(|(i, &x)| ch[i + 1..].iter().all(|&y| !sys.incompatible(x, y)));
            if distinct && in_nb && compat {
                1.0
            } else {
                0.0
            }
        },
        max_vertices: labels + 2,
    };
    let op = |mu: &[f64]| depth_k_tree_operator(1, labels, &weights, &rho_v, mu).unwrap();
    // Witness: T(mu) <= mu.
    let t_mu = op(&mu_v);
    for (a, b) in t_mu.iter().zip(&mu_v) {
        assert!(a <= b, "witness fails: {a} > {b}");
    }
    // T(mu) >= rho(1+mu).
    for i in 0..labels {
        assert!(t_mu[i] >= rho_v[i] * (1.0 + mu_v[i]) - 1e-15);
    }
    // Iterate to the limit R.
    let mut cur = vec![0.0; labels];
    for _ in 0..10_000 {
        let next = op(&cur);
        let done = cur
            .iter()
            .zip(&next)
            .all(|(a, b)| (a - b).abs() <= 1e-14 * b.abs().max(1e-300));
        cur = next;
        if done {
            break;
        }
    }
    for i in 0..labels {
        let q = cur[i] / rho_v[i];
        // Splitting off the root: T = rho·(Id + S), so S(mu) = T(mu)/rho - mu.
        let s = t_mu[i] / rho_v[i] - mu_v[i];
        let bound = s / (1.0 - rho_v[i]);
        assert!(
            q <= bound + 1e-12,
            "refined bound: Q={q} > {bound} at {i}"
        );
    }
}

#[test]
fn depth_k_matches_depth_one_on_random_weights() {
    let mut r = rng(47);
    let labels = 3;
    // A fixed symmetric weight family on up to 2 children.
    let table: Vec<f64> = (0..labels * labels * labels).map(|_| r.gen_range(0.0..1.0)).collect();
    let star = StarWeights {
        weight: &|l: usize, ch: &[usize]| match ch.len() {
            0 => 1.0,
            1 => table[l * labels + ch[0]],
            2 => table[labels * labels + l * labels + ch[0]] * 0.5
                + table[labels * labels + l * labels + ch[1]] * 0.5,
            _ => 0.0,
        },
        max_children: 3,
    };
    let tree = TreeWeights {
        weight: &|t: &TreeShape, lab: &[usize]| {
            if t.depth() > 1 {
                return 0.0;
            }
            let l = lab[0];
            let mut ch = lab[1..].to_vec();
            ch.sort_unstable();
            match ch.len() {
                0 => 1.0,
                1 => table[l * labels + ch[0]],
                2 => table[labels * labels + l * labels + ch[0]] * 0.5
                    + table[labels * labels + l * labels + ch[1]] * 0.5,
                _ => 0.0,
            }
        },
        max_vertices: 4,
    };
    let rho = [0.2, 0.1, 0.15];
    let mu = [0.4, 0.3, 0.5];
    let a = depth_one_tree_operator(labels, &star, &rho, &mu).unwrap();
    let b = depth_k_tree_operator(1, labels, &tree, &rho, &mu).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12, "{x} vs {y}");
    }
}

#[test]
fn multiplexed_sup_reproduces_leop() {
    let mut r = rng(48);
    for _ in 0..30 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let mu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 1.0));
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.01, 0.3));
        let u = multiplex(&sys, &mu);
        for (kind, leop_kind) in [
            (MultiplexKind::Returning, LeopKind::Returning),
            (MultiplexKind::Reduced, LeopKind::Reduced),
        ] {
            let image = multiplexed_operator(kind, &sys, &rho, &u).unwrap();
            for gamma in 0..sys.len() {
                if sys.incompatible_others(gamma).is_empty() {
                    continue;
                }
                let sup = sys
                    .incompatible_others(gamma)
                    .members()
                    .iter()
                    .map(|&eps| image[&pscub_core::EscapePair { gamma, eps }])
                    .fold(f64::NEG_INFINITY, f64::max);
                let expected =
                    rho.get(gamma) * leop(&leop_kind, &sys, gamma, &mu).unwrap();
                assert!(
                    (sup - expected).abs() <= 1e-12 * expected.max(1.0),
                    "{kind:?} sup {sup} vs rho*leop {expected}"
                );
            }
        }
    }
}

#[test]
fn escaping_series_bounded_by_witness() {
    let mut r = rng(49);
    let mut done = 0;
    while done < 8 {
        let sys = random_system(&mut r, 4, 0.5);
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.08));
        let report = scub_holds(&LeopKind::Returning, &sys, &rho).unwrap();
        if !report.converged {
            continue;
        }
        done += 1;
        let witness = report.witness_mu.unwrap();
        let failures =
            escaping_series_bound_check(&sys, &rho, &witness, 5, DEFAULT_EDGE_CAP).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
    }
}

#[test]
fn generic_bound_below_exact_ratios() {
    let mut r = rng(50);
    let mut done = 0;
    while done < 40 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let nu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.12));
        if !admissible_sweep(&sys, &nu).unwrap() {
            continue;
        }
        done += 1;
        let rho = nu.scaled(r.gen_range(0.0..1.0));
        let bounds = generic_scub_bound(&sys, &rho, &nu).unwrap();
        // The bound holds for the ratio at every volume containing gamma.
        let z = rho.negated();
        for (gamma, bound) in bounds.iter().enumerate() {
            for mask in 0u64..(1 << sys.len()) {
                if mask >> gamma & 1 == 0 {
                    continue;
                }
                let vol = Volume::new(
                    (0..sys.len()).filter(|&i| mask >> i & 1 == 1).collect(),
                );
                let ratio = one_polymer_ratio(&sys, &vol, gamma, &z).unwrap();
                assert!(
                    ratio >= bound - 1e-12,
                    "ratio {ratio} below bound {bound} (gamma {gamma})"
                );
            }
        }
    }
}

#[test]
fn classic_kinds_certify_the_disc() {
    // Where the volume induction applies at every finite volume, a
    // converged fixpoint puts rho inside the admissible disc.
    let mut r = rng(51);
    for _ in 0..60 {
        let n = 2 + (r.gen::<u64>() % 5) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.6));
        for kind in [LeopKind::Kp, LeopKind::Dobrushin, LeopKind::Fp] {
            let report = scub_holds(&kind, &sys, &rho).unwrap();
            if report.converged {
                assert!(
                    admissible_sweep(&sys, &rho.scaled(1.0 - 1e-6)).unwrap(),
                    "{kind:?} certified rho outside the disc"
                );
            }
        }
    }
}

#[test]
fn escaping_kinds_certify_proper_volumes() {
    // The escape-peeling argument reaches every proper sub-volume of a
    // finite system; the full volume has no escape and is not covered.
    let mut r = rng(52);
    for _ in 0..40 {
        let n = 2 + (r.gen::<u64>() % 5) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let rho = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 0.6));
        let g = BehaviourVector::random(&sys, &mut r);
        let kinds = [
            LeopKind::Reduced,
            LeopKind::Returning,
            LeopKind::MixingOptimal,
            LeopKind::Synthetic(g),
        ];
        for kind in kinds {
            let report = scub_holds(&kind, &sys, &rho).unwrap();
            if !(report.converged && report.strict) {
                continue;
            }
            let z = rho.scaled(1.0 - 1e-6).negated();
            for mask in 0u64..(1 << sys.len()) - 1 {
                let vol = Volume::new(
                    (0..sys.len()).filter(|&i| mask >> i & 1 == 1).collect(),
                );
                let xi = pscub_core::oracle::partition_function(&sys, &vol, &z).unwrap();
                assert!(
                    xi > 0.0,
                    "{kind:?}: proper volume {vol:?} with nonpositive Xi {xi}"
                );
            }
        }
    }
}

#[test]
fn mixing_algebra_random_instances() {
    let mut r = rng(53);
    for _ in 0..40 {
        let n = 2 + (r.gen::<u64>() % 4) as usize;
        let sys = random_system(&mut r, n, 0.5);
        let mu = FugacityVector::from_values(random_fugacity(&mut r, &sys, 0.0, 1.0));
        let g = BehaviourVector::random(&sys, &mut r);
        let report = mixing_reduction_check(&sys, &mu, &g).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }
}

#[test]
fn strictness_reported_for_new_kinds() {
    let sys = pscub_core::lattice::cycle(5).unwrap();
    let opt = pscub_core::scub::optimal_rho(&LeopKind::Returning, &sys, 0).unwrap();
    let below = scub_holds(
        &LeopKind::Returning,
        &sys,
        &FugacityVector::homogeneous(&sys, opt * 0.99),
    )
    .unwrap();
    assert!(below.converged && below.strict);
    let mix_choice: Vec<Behaviour> = vec![Behaviour::R; sys.len()];
    let mix = scub_holds(
        &LeopKind::Mixing(mix_choice),
        &sys,
        &FugacityVector::homogeneous(&sys, opt * 0.99),
    )
    .unwrap();
    assert!(mix.converged && mix.strict);
}

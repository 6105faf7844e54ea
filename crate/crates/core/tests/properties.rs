//! Property tests for the structural invariants of each module.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use dgroup::actions::{
    action_on_blocks, all_block_systems, block_stabilizer_restriction, coset_action, is_primitive, is_regular,
    minimal_block_systems,
};
use dgroup::classifier::{analyze, AnalyzeOptions, Caps};
use dgroup::orbital::{circulant_components_check, is_lex_blowup, lex_blowup, quotient_graph, suborbit_graphs};
use dgroup::regular::{find_regular_cyclic, find_regular_dihedral, verify_witness};
use dgroup::{GroupHandle, Permutation};

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn any_perm() -> impl Strategy<Value = Permutation> {
    (1usize..=10).prop_flat_map(perm_strategy)
}

/// Up to three random generators on at most seven points.
fn small_group() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (2usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec(perm_strategy(n), 1..=3)))
}

fn transitive_group() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    small_group().prop_filter("transitive", |(n, gens)| {
        dgroup::actions::is_transitive(&GroupHandle::new(*n, gens.clone()).unwrap())
    })
}

/// Elements of `D_2m` are `(i, s)` meaning `r^i f^s`, indexed `i + m s`.
fn dihedral_index(m: usize, i: usize, s: usize) -> usize {
    i % m + m * (s % 2)
}

fn dihedral_mul(m: usize, (i, s): (usize, usize), (j, t): (usize, usize)) -> (usize, usize) {
    let j = if s == 1 { (m - j % m) % m } else { j % m };
    ((i + j) % m, (s + t) % 2)
}

fn dihedral_perm(m: usize, f: impl Fn((usize, usize)) -> (usize, usize)) -> Permutation {
    let mut images = vec![0; 2 * m];
    for s in 0..2 {
        for i in 0..m {
            let (j, t) = f((i, s));
            images[dihedral_index(m, i, s)] = dihedral_index(m, j, t);
        }
    }
    Permutation::from_images(images).unwrap()
}

/// A subgroup of the holomorph of `D_2m` containing its right regular
/// representation, hence a d-group of degree `2m`.
fn holomorph_d_group() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (2usize..=8).prop_flat_map(|m| {
        let extra = (0usize..3, 0..m, 0..m, 0usize..2);
        (Just(m), prop::collection::vec(extra, 0..=2))
    })
    .prop_map(|(m, extras)| {
        let mut gens = vec![
            dihedral_perm(m, |x| dihedral_mul(m, x, (1, 0))),
            dihedral_perm(m, |x| dihedral_mul(m, x, (0, 1))),
        ];
        for (kind, u, v, s) in extras {
            let g = match kind {
                // Left multiplication commutes with the regular action.
                0 => dihedral_perm(m, |x| dihedral_mul(m, (u, s), x)),
                // r -> r^unit, f -> r^v f.
                _ => {
                    let units: Vec<usize> = (1..m.max(2)).filter(|&k| gcd(k, m) == 1).collect();
                    let unit = units[u % units.len()];
                    dihedral_perm(m, |(i, s)| ((unit * i + v * s) % m, s))
                }
            };
            gens.push(g);
        }
        (2 * m, gens)
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn cycle_notation_round_trips(p in any_perm()) {
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse(&text, p.degree()).unwrap(), p.clone());
        prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), p.degree());
    }

    #[test]
    fn inverse_and_order_laws(p in any_perm(), k in -20i64..20) {
        let id = Permutation::identity(p.degree());
        prop_assert_eq!(p.then(&p.inverse()), id.clone());
        prop_assert_eq!(p.pow(p.order() as i64), id);
        prop_assert_eq!(p.pow(k).then(&p.pow(-k)), Permutation::identity(p.degree()));
    }

    #[test]
    fn chain_order_matches_closure((n, gens) in small_group()) {
        let g = GroupHandle::new(n, gens.clone()).unwrap();
        let elements = common::closure(n, &gens);
        prop_assert_eq!(g.order(), elements.len() as u128);
        let listed: BTreeSet<Permutation> = g.elements(10_000).unwrap().collect();
        prop_assert_eq!(listed.len(), elements.len());
        for e in &elements {
            prop_assert!(g.has(e));
        }
    }

    #[test]
    fn block_systems_are_invariant((n, gens) in transitive_group()) {
        let g = GroupHandle::new(n, gens).unwrap();
        for sys in all_block_systems(&g).unwrap() {
            prop_assert!(sys.is_invariant(&g));
        }
        if !is_primitive(&g).unwrap() {
            for sys in minimal_block_systems(&g).unwrap() {
                prop_assert!(sys.is_invariant(&g));
                if sys.block_size > 1 {
                    let local = block_stabilizer_restriction(&g, &sys, 0).unwrap();
                    prop_assert!(is_primitive(&local).unwrap());
                }
            }
        }
    }

    #[test]
    fn induced_action_orders_multiply((n, gens) in transitive_group()) {
        let g = GroupHandle::new(n, gens).unwrap();
        for sys in all_block_systems(&g).unwrap() {
            let induced = action_on_blocks(&g, &sys).unwrap();
            prop_assert_eq!(induced.image.order() * induced.kernel.order(), g.order());
            for k in induced.kernel.generators() {
                prop_assert!(sys.fixes_all_blocks(k));
            }
        }
    }

    #[test]
    fn coset_action_degree_times_subgroup((n, gens) in transitive_group(), pick in 0usize..3) {
        let g = GroupHandle::new(n, gens.clone()).unwrap();
        let h = match pick {
            0 => g.point_stabilizer(0).unwrap(),
            1 => GroupHandle::new(n, vec![gens[0].clone()]).unwrap(),
            _ => GroupHandle::trivial(n),
        };
        let act = coset_action(&g, &h, 10_000).unwrap();
        prop_assert_eq!(act.degree as u128 * h.order(), g.order());
        if act.faithful {
            prop_assert_eq!(act.action.order(), g.order());
            prop_assert_eq!(act.action.point_stabilizer(0).unwrap().order(), h.order());
        }
    }

    #[test]
    fn finders_agree_with_brute_force((n, gens) in transitive_group()) {
        let g = GroupHandle::new(n, gens.clone()).unwrap();
        let elements = common::closure(n, &gens);
        let full_cycle = elements.iter().any(|e| e.is_full_cycle());
        let cyclic = find_regular_cyclic(&g, 10_000).unwrap();
        prop_assert_eq!(cyclic.is_some(), full_cycle);
        // Brute force over pairs: <a, z> dihedral of order n acting regularly.
        let brute_dihedral = n % 2 == 0 && n >= 4 && elements.iter().any(|a| {
            a.order() as usize == n / 2
                && elements.iter().any(|z| {
                    z.order() == 2
                        && z.then(a).then(z) == a.inverse()
                        && {
                            let d = GroupHandle::new(n, vec![a.clone(), z.clone()]).unwrap();
                            d.order() == n as u128 && is_regular(&d)
                        }
                })
        });
        let dihedral = if n % 2 == 0 {
            find_regular_dihedral(&g, 10_000).unwrap()
        } else {
            prop_assert!(find_regular_dihedral(&g, 10_000).is_err());
            None
        };
        prop_assert_eq!(dihedral.is_some(), brute_dihedral);
        for w in cyclic.iter().chain(dihedral.iter()) {
            prop_assert!(verify_witness(&g, w).is_valid());
            let sub = w.subgroup().unwrap();
            prop_assert_eq!(sub.order(), n as u128);
            prop_assert!(is_regular(&sub));
        }
    }

    #[test]
    fn orbital_graphs_partition_the_off_diagonal((n, gens) in transitive_group()) {
        let g = GroupHandle::new(n, gens.clone()).unwrap();
        let mut seen = BTreeSet::new();
        for (suborbit, graph) in suborbit_graphs(&g, 0).unwrap() {
            prop_assert_eq!(graph.arc_count, n * suborbit.len());
            for (u, v) in graph.arcs() {
                prop_assert!(u != v);
                prop_assert!(seen.insert((u, v)));
                for s in &gens {
                    prop_assert!(graph.has_arc(s.apply(u), s.apply(v)));
                }
            }
        }
        prop_assert_eq!(seen.len(), n * (n - 1));
    }

    #[test]
    fn blowups_are_rebuilt_from_quotients((n, gens) in transitive_group()) {
        let g = GroupHandle::new(n, gens).unwrap();
        let systems = all_block_systems(&g).unwrap();
        for (_, graph) in suborbit_graphs(&g, 0).unwrap() {
            for sys in systems.iter().filter(|s| !s.is_trivial()) {
                if is_lex_blowup(&graph, sys) {
                    let q = quotient_graph(&graph, sys).unwrap();
                    prop_assert_eq!(lex_blowup(&q, sys, graph.base_arc), graph.clone());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn d_group_orbital_graphs((n, gens) in holomorph_d_group()) {
        let g = GroupHandle::new(n, gens).unwrap();
        let w = find_regular_dihedral(&g, 100_000).unwrap();
        prop_assert!(w.is_some());
        for (_, graph) in suborbit_graphs(&g, 0).unwrap() {
            if graph.is_connected() {
                prop_assert!(graph.is_self_paired());
            } else {
                prop_assert!(circulant_components_check(&g, &graph, w.as_ref(), 100_000).unwrap());
            }
        }
    }

    #[test]
    fn d_group_classification((n, gens) in holomorph_d_group()) {
        let g = GroupHandle::new(n, gens.clone()).unwrap();
        let report = analyze(&g, "holomorph", &AnalyzeOptions::default()).unwrap();
        prop_assert!(report.class.is_d_group());
        let witness = report.witness.clone().unwrap();
        let elements = common::closure(n, &gens);
        let d = witness.elements();
        for ev in &report.systems {
            // Block image is a c-group or a d-group.
            prop_assert!(ev.block_image_class.is_c_group() || ev.block_image_class.is_d_group());
            // No silent empties.
            prop_assert!(!ev.holding_cases().is_empty() || !ev.warnings.is_empty(), "{}", ev.flag_vector());
            // Stored orders match recomputation from scratch.
            let kernel = common::brute_kernel(&elements, &ev.system.blocks);
            prop_assert_eq!(ev.kernel_order, kernel.len() as u128);
            prop_assert_eq!(ev.block_image_order * ev.kernel_order, g.order());
            let dk = d.iter().filter(|x| ev.system.fixes_all_blocks(x)).count();
            prop_assert_eq!(ev.dk_order, dk as u128);
            if let Some(arc) = ev.lex_witness {
                let graph = dgroup::orbital::orbital_graph(&g, arc).unwrap();
                prop_assert!(is_lex_blowup(&graph, &ev.system));
            }
            let again = dgroup::classifier::classify_case(&g, &witness, &ev.system, Caps::default()).unwrap();
            prop_assert_eq!(&again, ev);
        }
        for lemma in &report.lemmas {
            prop_assert!(lemma.passed, "{:?}", lemma);
        }
    }
}

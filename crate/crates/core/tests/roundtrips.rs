//! Seeded random round-trips across module boundaries: nets against
//! rewriting systems, reduction paths against wire diagrams, and firing
//! congruence against refined normal forms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polynet_core::algebra::parikh;
use polynet_core::net::{equiv_class, equivalent, ReachLimits};
use polynet_core::poly2::{
    lift_path, lift_permutation, pi_path, repr_bar, sigma2, Poly2Error,
};
use polynet_core::poly3::{sigma3, TriplePath};
use polynet_core::rewrite::{
    bar_polygraph, check_equiv_r, complete_rules, phi_arrow, WINDOW_SLICES, WINDOW_WIRES,
};
use polynet_core::rws::{iso_check, phi, psi};
use polynet_core::{
    CommRws, Multiset, NetPath, PetriNet, ReductionStep, RuleTable, Symbol, Word,
};

fn random_system(rng: &mut ChaCha8Rng) -> (CommRws, Vec<Symbol>) {
    let mut rws = CommRws::new();
    let letters: Vec<Symbol> = (0..rng.gen_range(1..=4))
        .map(|i| rws.add_letter(&format!("a{i}")).unwrap())
        .collect();
    for i in 0..rng.gen_range(1..=4) {
        let side = |rng: &mut ChaCha8Rng| {
            Multiset::from_counts(letters.iter().map(|&p| (p, rng.gen_range(0..=2))))
        };
        let pre = side(rng);
        let post = side(rng);
        rws.add_rule(&format!("r{i}"), pre, post).unwrap();
    }
    (rws, letters)
}

fn random_walk(rng: &mut ChaCha8Rng, rws: &CommRws, start: Multiset, max: usize) -> NetPath {
    let mut path = NetPath::empty(start);
    for _ in 0..max {
        let end = path.end(rws);
        let enabled: Vec<Symbol> = rws
            .rules()
            .symbols()
            .filter(|&r| rws.rule_source(r).leq(&end))
            .collect();
        if enabled.is_empty() {
            break;
        }
        let rule = enabled[rng.gen_range(0..enabled.len())];
        let context = end.sub(rws.rule_source(rule)).unwrap();
        path.steps.push(ReductionStep { context, rule });
    }
    path
}

#[test]
fn nets_and_systems_are_interchangeable() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let mut net = PetriNet::new();
        let places: Vec<Symbol> = (0..rng.gen_range(1..=4))
            .map(|i| net.add_place(&format!("p{i}")).unwrap())
            .collect();
        for i in 0..rng.gen_range(0..=4) {
            let side = |rng: &mut ChaCha8Rng| {
                Multiset::from_counts(places.iter().map(|&p| (p, rng.gen_range(0..=2))))
            };
            let pre = side(&mut rng);
            let post = side(&mut rng);
            net.add_transition(&format!("t{i}"), pre, post).unwrap();
        }
        let rws = phi(&net);
        assert_eq!(psi(&rws), net);
        assert_eq!(phi(&psi(&rws)), rws);

        let start = Multiset::from_counts(places.iter().map(|&p| (p, rng.gen_range(0..=2))));
        let report = iso_check(
            &net,
            &start,
            ReachLimits {
                max_depth: 3,
                max_states: 128,
            },
        );
        assert!(report.is_clean(), "{:?}", report.mismatches);
    }
}

#[test]
fn random_walks_lift_project_and_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let (rws, letters) = random_system(&mut rng);
        let poly = sigma2(&rws);
        let tp = sigma3(&rws);
        let mut start =
            Multiset::from_counts(letters.iter().map(|&p| (p, rng.gen_range(0..=2))));
        let seed_rule = Symbol::from_index(rng.gen_range(0..rws.rules().len()));
        start = start.add(rws.rule_source(seed_rule));
        let path = random_walk(&mut rng, &rws, start, 4);

        let arrow = lift_path(&poly, &path).unwrap();
        assert_eq!(pi_path(&poly, &arrow).unwrap(), path);

        let back = TriplePath::from_net_path(&tp, &path)
            .unwrap()
            .to_net_path(&tp)
            .unwrap();
        assert_eq!(back, path);

        let a = equiv_class(&rws, &path, 5_000).unwrap().len();
        let b = equiv_class(&tp, &path, 5_000).unwrap().len();
        assert_eq!(a, b);
    }
}

#[test]
fn permutation_lifts_replay_or_refuse() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let (rws, letters) = random_system(&mut rng);
        let poly = sigma2(&rws);
        let u: Vec<Symbol> = (0..rng.gen_range(0..=6))
            .map(|_| letters[rng.gen_range(0..letters.len())])
            .collect();
        let mut v = u.clone();
        v.shuffle(&mut rng);
        let u = Word::from_letters(u);
        let v = Word::from_letters(v);
        let arrow = lift_permutation(&poly, &u, &v).unwrap();
        arrow.validate(&poly).unwrap();
        assert_eq!(arrow.end(&poly).unwrap(), v);
    }
    let mut refused = 0;
    while refused < 10 {
        let (rws, letters) = random_system(&mut rng);
        let poly = sigma2(&rws);
        let u: Vec<Symbol> = (0..rng.gen_range(1..=6))
            .map(|_| letters[rng.gen_range(0..letters.len())])
            .collect();
        let mut v = u.clone();
        v.push(letters[rng.gen_range(0..letters.len())]);
        let u = Word::from_letters(u);
        let v = Word::from_letters(v);
        if parikh(&u) == parikh(&v) {
            continue;
        }
        assert!(matches!(
            lift_permutation(&poly, &u, &v),
            Err(Poly2Error::ParikhMismatch)
        ));
        refused += 1;
    }
}

/// The deep coherence chain on the two-transition example: congruent firing
/// sequences, lifted to wire diagrams and refined into the duplication
/// calculus, end up with a common normal form once their end words are
/// aligned by a lifted permutation.
#[test]
fn congruent_paths_share_a_refined_normal_form() {
    let mut net = PetriNet::new();
    let x = net.add_place("x").unwrap();
    let y = net.add_place("y").unwrap();
    let _z = net.add_place("z").unwrap();
    net.add_transition(
        "alpha",
        Multiset::singleton(x, 1),
        Multiset::from_counts([(y, 1), (_z, 1)]),
    )
    .unwrap();
    net.add_transition("beta", Multiset::singleton(y, 2), Multiset::singleton(_z, 1))
        .unwrap();
    let rws = phi(&net);
    let poly = sigma2(&rws);
    let bar = bar_polygraph(&rws).unwrap();
    let rules = complete_rules(&bar, WINDOW_SLICES, WINDOW_WIRES, 10_000).unwrap();

    let start = Multiset::from_counts([(x, 2), (y, 2)]);
    let mut paths = vec![NetPath::empty(start)];
    let mut frontier = paths.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for p in &frontier {
            let end = p.end(&rws);
            for rule in rws.rules().symbols() {
                if rws.rule_source(rule).leq(&end) {
                    let mut q = p.clone();
                    q.steps.push(ReductionStep {
                        context: end.sub(rws.rule_source(rule)).unwrap(),
                        rule,
                    });
                    next.push(q);
                }
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }

    // Lift into the crossing calculus and align the end word canonically.
    let aligned = |p: &NetPath| {
        let arrow = lift_path(&poly, p).unwrap();
        let fix = lift_permutation(
            &poly,
            &arrow.end(&poly).unwrap(),
            &repr_bar(&p.end(&rws)),
        )
        .unwrap();
        arrow.compose(&poly, &fix).unwrap()
    };

    let mut checked = 0;
    for (i, p) in paths.iter().enumerate() {
        for q in paths.iter().skip(i + 1) {
            if p.steps.len() != q.steps.len() || p.end(&rws) != q.end(&rws) {
                continue;
            }
            let congruent = equivalent(&rws, p, q, 10_000).unwrap();
            let lhs = phi_arrow(&bar, &poly, &rules, &aligned(p), 10_000).unwrap();
            let rhs = phi_arrow(&bar, &poly, &rules, &aligned(q), 10_000).unwrap();
            let identified = check_equiv_r(&bar, &rules, &lhs, &rhs, 10_000).unwrap();
            assert_eq!(
                congruent, identified,
                "normal forms and firing congruence disagree on a pair of length {}",
                p.steps.len()
            );
            checked += 1;
        }
    }
    assert!(checked > 0);
}

use moments_core::affine::*;
use moments_core::group::*;

fn preset(tag: &str) -> CayleyGroup {
    standard_group(&StandardGroup::parse(tag).unwrap()).unwrap()
}

fn embedding(g: &CayleyGroup) -> Vec<Elem> {
    (0..g.order() as Elem).collect()
}

#[test]
fn inverted_set_criterion_matches_direct_check() {
    for tag in ["c6", "ab2x4", "ab2x2x2", "d4", "q8", "s3", "a4", "d6", "q12", "s4"] {
        let g = preset(tag);
        let part = automorphisms(&g).unwrap();
        for sigma in part.automorphisms.iter().filter(|a| a.is_involution() && !a.is_identity()) {
            let big = build_semidirect_c2(&g, sigma).unwrap();
            let direct = is_gi_extension_direct(&big, &embedding(&g)).unwrap();
            assert_eq!(is_gi_automorphism(&g, sigma), direct, "{tag}: {:?}", sigma.image());
        }
    }
}

#[test]
fn direct_product_with_c2() {
    for tag in ["c5", "d4", "q8", "s3", "a4", "ab2x2", "a5"] {
        let g = preset(tag);
        let big = build_semidirect_c2(&g, &Automorphism::identity(&g)).unwrap();
        assert_eq!(is_gi_extension_direct(&big, &embedding(&g)).unwrap(), is_generated_by_involutions(&g), "{tag}");
    }
}

#[test]
fn aut_divisible_by_inner() {
    for tag in ["c8", "ab2x2", "d5", "q8", "a4", "s4", "ab3x3", "q16"] {
        let g = preset(tag);
        let part = automorphisms(&g).unwrap();
        assert_eq!(part.aut_order() % (g.order() / g.center().len()), 0, "{tag}");
        assert_eq!(part.inner_order(), g.order() / g.center().len());
        assert_eq!(automorphism_group(&g).unwrap().order(), part.aut_order() as u128);
    }
}

#[test]
fn conjugate_out_classes_give_matching_invariants() {
    for tag in ["d4", "a4", "s4", "d6", "ab2x4"] {
        let g = preset(tag);
        let part = automorphisms(&g).unwrap();
        for class in &part.out_classes {
            let prints: Vec<Fingerprint> = class
                .iter()
                .flat_map(|&c| part.cosets[c].iter())
                .map(|&i| &part.automorphisms[i])
                .filter(|a| is_gi_automorphism(&g, a))
                .map(|a| Fingerprint::of(&build_semidirect_c2(&g, a).unwrap()))
                .collect();
            assert!(prints.windows(2).all(|w| w[0] == w[1]), "{tag}");
        }
    }
}

#[test]
fn small_abelian_groups_have_one_extension() {
    for tag in ["c1", "c2", "c7", "c12", "ab2x2", "ab2x6", "ab3x3", "ab2x2x2", "ab4x4", "ab2x2x2x2"] {
        assert_eq!(gi_extension_count(&preset(tag)).unwrap().gi_extension_count, 1, "{tag}");
    }
}

#[test]
fn affine_groups_are_frobenius() {
    for (p, n, d) in [(3, 1, 2), (2, 2, 3), (5, 1, 4), (7, 1, 3), (3, 2, 8), (2, 3, 7)] {
        let ag = build_affine_group(&AffineGroupSpec::new(p, n, d).unwrap()).unwrap();
        assert!(ag.is_frobenius_action(), "G({}, {d})", ag.spec.q());
        assert!(ag.decomposition.is_valid_for(&ag.group));
        assert!(frobenius_checks(&ag.group, &ag.decomposition).unwrap());
    }
}

#[test]
fn aut_structure_small_cases() {
    for (p, n, d) in [(3, 1, 2), (2, 2, 3), (5, 1, 4), (7, 1, 3), (3, 2, 4)] {
        assert!(aut_structure_check(&AffineGroupSpec::new(p, n, d).unwrap()).unwrap(), "({p},{n},{d})");
    }
}

#[test]
fn theorem_and_search_agree_for_odd_complements() {
    for (p, n, d) in affine_parameters(60) {
        if d == 2 && n >= 2 {
            continue;
        }
        let row = scan_affine(p, n, d).unwrap();
        assert!(row.agree(), "{row:?}");
    }
}

/// With `d = 2` and `n >= 2` the search finds `⌊n/2⌋ + 1` extensions,
/// not at most one.
#[test]
fn order_two_complement_exceeds_one() {
    for (p, n, found) in [(3, 2, 2), (5, 2, 2), (3, 3, 2)] {
        let row = scan_affine(p, n, 2).unwrap();
        assert_eq!((row.predicted, row.brute_force), (1, found), "({p},{n},2)");
    }
}

use std::collections::BTreeMap;

use isx_core::approximation::{
    all_vanish, check_approximation, cone_data, default_approximation, local_duality_iso, obstructions_vanish,
    witt_approximation, Approximation,
};
use isx_core::fixtures::{empty, pinched_torus};
use isx_core::gen::{apply_mutation, generate_instance, mutate_instance, GenProfile};
use isx_core::global::{intersection_space, validate_global, IxModel};
use isx_core::graded::{ChainComplex, GradedMap, GradedSpace};
use isx_core::instance::Instance;
use isx_core::linalg::{subspace_annihilator, Subspace};
use isx_core::pairing::{
    check_pairing_identities, default_sections, global_duality, ix_gram_matrix, novikov_gram_matrix,
    perturbed_sections, signature_report, untwisted_decompositions, untwisted_sections,
};
use isx_core::tube::{compute_zy, validate_tube, Perversity, TubeDatum};

fn profile(n: i32, z: Vec<usize>, kernel: Vec<usize>, novikov: Vec<usize>) -> GenProfile {
    GenProfile {
        dimension: n,
        seed: 11,
        witt: true,
        extra_profile: vec![0; n as usize + 1],
        z_profile: z,
        z_profile_q: None,
        kernel_profile: kernel,
        novikov_profile: novikov,
        max_entry: 3,
        adversarial: false,
        definite_middle: false,
    }
}

fn is_valid(inst: &Instance) -> bool {
    validate_tube(&inst.tube).is_valid() && validate_global(&inst.tube, &inst.global).is_valid()
}

fn zero_approximation(t: &TubeDatum) -> Approximation {
    let a = GradedSpace::zero(t.boundary.min_degree(), t.boundary.max_degree());
    Approximation {
        perversity: Perversity::P,
        complex: ChainComplex::zero_differential(&a),
        f: GradedMap::zero(&a, &t.boundary, 0),
    }
}

fn ix_of(inst: &Instance, a: &Approximation) -> IxModel {
    intersection_space(&inst.tube, &inst.global, a).unwrap()
}

#[test]
fn fixture_subquotients() {
    let t = pinched_torus().tube;
    assert!(validate_tube(&t).is_valid());
    let zy = compute_zy(&t, Perversity::P).unwrap();
    assert_eq!(zy.z_dims(0, 3), vec![1, 0, 1, 0]);
    assert_eq!(zy.y.dims_over(0, 4), vec![0, 0, 1, 0, 1]);
}

#[test]
fn fixture_entry_change_is_caught() {
    let inst = pinched_torus();
    let m = isx_core::gen::Mutation { pointer: "/tube/D_bdry/1/0/0".into(), delta: "1".into() };
    let bad = apply_mutation(&inst, &m).unwrap();
    let rep = validate_tube(&bad.tube);
    assert!(!rep.is_valid());
    assert!(!rep.failures.is_empty() && !rep.failures[0].check.is_empty());
}

#[test]
fn zero_tube() {
    let t = empty().tube;
    assert!(validate_tube(&t).is_valid());
    let zy = compute_zy(&t, Perversity::P).unwrap();
    assert!(zy.z.values().all(|z| z.dim() == 0) && zy.y.is_zero());
    assert!(default_approximation(&t, Perversity::P).unwrap().space().is_zero());
    let a = witt_approximation(&t).unwrap();
    assert!(local_duality_iso(&t, &a, &a).unwrap().left().is_zero());
}

#[test]
fn generated_z_profile_round_trips() {
    let inst = generate_instance(&profile(4, vec![1, 2, 0, 0], vec![0, 1, 1, 1], vec![0; 5])).unwrap();
    assert!(is_valid(&inst));
    assert_eq!(compute_zy(&inst.tube, Perversity::P).unwrap().z_dims(0, 3), vec![1, 2, 0, 0]);
}

#[test]
fn fixture_approximations() {
    let t = pinched_torus().tube;
    let a = default_approximation(&t, Perversity::P).unwrap();
    assert!(check_approximation(&t, &a).is_valid());
    assert_eq!(a.space().dims_over(0, 3), vec![1, 0, 1, 0]);

    let rep = check_approximation(&t, &zero_approximation(&t));
    let mut degrees: Vec<i32> = rep.failures.iter().filter_map(|f| f.degree).collect();
    degrees.dedup();
    assert_eq!(degrees, vec![0, 2]);

    let cd = cone_data(&t, &a).unwrap();
    assert_eq!(cd.h_cf.dims_over(0, 3), vec![0, 1, 0, 1]);
    assert!(cd.bdry_iso.is_isomorphism());
    assert!(cd.ell.is_surjective() && a.f.is_injective());
}

#[test]
fn fixture_local_duality() {
    let t = pinched_torus().tube;
    let a = default_approximation(&t, Perversity::P).unwrap();
    let lam = local_duality_iso(&t, &a, &a).unwrap();
    let nonzero: Vec<i32> = lam.nonempty_blocks().into_keys().collect();
    assert_eq!(nonzero, vec![1, 3]);
    for i in [1, 3] {
        assert_eq!(lam.block(i).shape(), (1, 1));
        assert!(lam.block(i).is_invertible());
    }
    assert!(all_vanish(&obstructions_vanish(&t, &a, &a).unwrap()));

    let w = witt_approximation(&t).unwrap();
    assert_eq!(w.space().dims_over(0, 3), vec![1, 0, 1, 0]);
    assert!(all_vanish(&obstructions_vanish(&t, &w, &w).unwrap()));
}

#[test]
fn generated_cones_match_y() {
    for seed in 0..30 {
        let inst = generate_instance(&GenProfile::random(4 + 2 * (seed as i32 % 3), seed, seed % 2 == 0, seed % 3 != 0).unwrap()).unwrap();
        let t = &inst.tube;
        for pv in [Perversity::P, Perversity::Q] {
            let a = default_approximation(t, pv).unwrap();
            let zy = compute_zy(t, pv).unwrap();
            let cd = cone_data(t, &a).unwrap();
            for i in t.boundary.degrees() {
                assert_eq!(cd.h_cf.dim(i), zy.y.dim(i + 1), "seed {seed} degree {i}");
            }
        }
        let a_p = default_approximation(t, Perversity::P).unwrap();
        let a_q = default_approximation(t, Perversity::Q).unwrap();
        let lam = local_duality_iso(t, &a_p, &a_q).unwrap();
        assert!(lam.is_nondegenerate());
    }
}

#[test]
fn isolated_singularity_profile_has_no_obstruction() {
    // Z lives below the middle, so A_r and A_{N−1−r} are never both nonzero.
    for seed in 0..10 {
        let p = GenProfile { seed, ..profile(6, vec![1, 2, 1, 0, 0, 0], vec![0, 0, 0, 1, 2, 1], vec![0; 7]) };
        let inst = generate_instance(&p).unwrap();
        assert!(is_valid(&inst));
        let a = default_approximation(&inst.tube, Perversity::P).unwrap();
        assert!(all_vanish(&obstructions_vanish(&inst.tube, &a, &a).unwrap()));
        let w = witt_approximation(&inst.tube).unwrap();
        assert_eq!(w.space().dims(), a.space().dims());
        assert!(all_vanish(&obstructions_vanish(&inst.tube, &w, &w).unwrap()));
    }
}

#[test]
fn adversarial_obstruction_is_repaired() {
    let mut seen = 0;
    for seed in 0..40 {
        let inst = generate_instance(&GenProfile::random(4, seed, true, true).unwrap()).unwrap();
        let t = &inst.tube;
        let a = default_approximation(t, Perversity::P).unwrap();
        let rows = obstructions_vanish(t, &a, &a).unwrap();
        if all_vanish(&rows) {
            continue;
        }
        seen += 1;
        assert!(rows.iter().any(|r| !r.diagram_method && !r.pairing_method));
        let w = witt_approximation(t).unwrap();
        assert!(check_approximation(t, &w).is_valid());
        assert!(all_vanish(&obstructions_vanish(t, &w, &w).unwrap()));
    }
    assert!(seen > 0);
}

#[test]
fn witt_construction_is_stable() {
    for seed in 0..20 {
        let inst = generate_instance(&GenProfile::random(6, seed, true, true).unwrap()).unwrap();
        let t = &inst.tube;
        let w = witt_approximation(t).unwrap();
        let n = t.dimension;
        let img = |s: i32| Subspace::span(&w.f.block(s));
        for s in n / 2..n {
            let again = subspace_annihilator(&img(n - 1 - s), &t.g(n - 1 - s)).unwrap();
            assert!(img(s).same_as(&again), "seed {seed} degree {s}");
        }
        let w2 = witt_approximation(t).unwrap();
        for s in t.boundary.degrees() {
            assert!(img(s).same_as(&Subspace::span(&w2.f.block(s))));
        }
    }
}

#[test]
fn fixture_global_part() {
    let inst = pinched_torus();
    assert!(validate_global(&inst.tube, &inst.global).is_valid());
    let mut g = inst.global.clone();
    let b = g.lefschetz.block_mut(4).unwrap();
    *b = b.neg();
    assert!(!validate_global(&inst.tube, &g).is_valid());

    let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
    assert_eq!(ix.h_ix().dims_over(0, 3), vec![0, 1, 0, 1]);
}

#[test]
fn zero_approximation_gives_complement() {
    let inst = generate_instance(&profile(4, vec![0; 4], vec![0; 4], vec![0, 1, 2, 1, 0])).unwrap();
    assert!(is_valid(&inst));
    let ix = ix_of(&inst, &zero_approximation(&inst.tube));
    assert_eq!(ix.h_ix().dims_over(0, 4), inst.global.complement.dims_over(0, 4));
}

#[test]
fn generated_ix_dimensions() {
    for seed in 0..30 {
        let inst = generate_instance(&GenProfile::random(4 + 2 * (seed as i32 % 3), seed, false, true).unwrap()).unwrap();
        let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
        for i in ix.h_ix().degrees() {
            let phi = ix.phi.block(i);
            let coker = ix.phi.target().dim(i) - phi.rank();
            let ker = ix.phi.source().dim(i - 1) - ix.phi.block(i - 1).rank();
            assert_eq!(ix.h_ix().dim(i), coker + ker, "seed {seed} degree {i}");
        }
    }
}

#[test]
fn fixture_duality_and_families() {
    let inst = pinched_torus();
    let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
    let fam = default_sections(&ix).unwrap();
    let phi = global_duality(&ix, &ix, &fam, &fam).unwrap();
    check_pairing_identities(&ix, &ix, &fam, &fam, &phi).unwrap();
    let blocks: BTreeMap<i32, (usize, usize)> = phi.nonempty_blocks().into_iter().map(|(i, b)| (i, b.shape())).collect();
    assert_eq!(blocks, BTreeMap::from([(1, (1, 1)), (3, (1, 1))]));
    assert!(phi.is_nondegenerate());

    let un = untwisted_sections(&ix).unwrap();
    assert!(untwisted_decompositions(&ix, &un).unwrap().iter().all(|r| r.image_h && r.image_s));
    assert_eq!(ix_gram_matrix(&ix, &un).unwrap().gram.shape(), (0, 0));
    assert_eq!(novikov_gram_matrix(&ix).unwrap().shape(), (0, 0));

    let rep = signature_report(&inst.tube, &inst.global, &witt_approximation(&inst.tube).unwrap()).unwrap();
    assert!(rep.equal && rep.sigma_ix == 0 && rep.sigma_novikov == 0);
}

#[test]
fn empty_model_duality() {
    let inst = empty();
    let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
    let fam = default_sections(&ix).unwrap();
    assert!(fam.is_empty());
    assert!(global_duality(&ix, &ix, &fam, &fam).unwrap().nonempty_blocks().is_empty());
}

#[test]
fn vanishing_j_still_untwists() {
    // ι iso in every degree makes R = 0, so j = 0.
    let inst = generate_instance(&profile(4, vec![1, 0, 1, 0], vec![0, 0, 1, 1], vec![0; 5])).unwrap();
    let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
    assert!(ix.j.is_zero());
    let fam = untwisted_sections(&ix).unwrap();
    assert!(untwisted_decompositions(&ix, &fam).unwrap().iter().all(|r| r.image_h && r.image_s));
}

#[test]
fn generated_dualities_are_invertible() {
    for seed in 0..20 {
        let inst = generate_instance(&GenProfile::random(4 + 2 * (seed as i32 % 3), seed, true, true).unwrap()).unwrap();
        let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
        for fam in [default_sections(&ix).unwrap(), perturbed_sections(&ix, seed).unwrap(), untwisted_sections(&ix).unwrap()] {
            let phi = global_duality(&ix, &ix, &fam, &fam).unwrap();
            check_pairing_identities(&ix, &ix, &fam, &fam, &phi).unwrap();
            assert!(phi.is_nondegenerate(), "seed {seed}");
        }
    }
}

#[test]
fn untwisted_middle_forms_are_symmetric() {
    for seed in 0..20 {
        let inst = generate_instance(&GenProfile::random(if seed % 2 == 0 { 4 } else { 8 }, seed, false, true).unwrap()).unwrap();
        let ix = ix_of(&inst, &witt_approximation(&inst.tube).unwrap());
        let fam = untwisted_sections(&ix).unwrap();
        assert!(untwisted_decompositions(&ix, &fam).unwrap().iter().all(|r| r.image_h && r.image_s));
        let g = ix_gram_matrix(&ix, &fam).unwrap();
        assert!(g.gram.is_symmetric(), "seed {seed}");
        assert!(novikov_gram_matrix(&ix).unwrap().is_symmetric());
    }
}

#[test]
fn rank_two_middle_form() {
    for definite in [false, true] {
        for seed in 0..10 {
            let p = GenProfile {
                seed,
                definite_middle: definite,
                ..profile(4, vec![0; 4], vec![0; 4], vec![0, 0, 2, 0, 0])
            };
            let inst = generate_instance(&p).unwrap();
            assert!(is_valid(&inst));
            let a = zero_approximation(&inst.tube);
            let ix = ix_of(&inst, &a);
            // B = 0: j is an isomorphism and both forms read the middle Lefschetz block.
            let j = ix.j.block(2);
            assert!(j.is_invertible());
            let l = j.transpose().mul(&ix.l(2));
            assert_eq!(novikov_gram_matrix(&ix).unwrap(), l);

            let rep = signature_report(&inst.tube, &inst.global, &a).unwrap();
            assert_eq!(rep.gram_ix.shape(), (2, 2));
            assert!(rep.equal && rep.sigma_ix.abs() <= 2);
            if definite {
                assert_eq!(rep.sigma_ix.abs(), 2);
            }
        }
    }
}

#[test]
fn seeded_signatures_agree() {
    for seed in 0..100 {
        let inst = generate_instance(&GenProfile::random(if seed % 3 == 0 { 8 } else { 4 }, seed, seed % 2 == 0, true).unwrap()).unwrap();
        let rep = signature_report(&inst.tube, &inst.global, &witt_approximation(&inst.tube).unwrap()).unwrap();
        assert!(rep.equal && rep.block_form && rep.y_block_matches, "seed {seed}");
    }
}

#[test]
fn generator_validates_across_seeds() {
    for seed in 0..1000u64 {
        let n = if seed % 2 == 0 { 4 } else { 8 };
        let inst = generate_instance(&GenProfile::random(n, seed, seed % 3 == 0, seed % 5 != 0).unwrap()).unwrap();
        assert!(is_valid(&inst), "seed {seed}");
    }
}

#[test]
fn fixture_mutations() {
    let inst = pinched_torus();
    let mut flagged = 0;
    for seed in 0..200 {
        let (bad, m) = mutate_instance(&inst, seed).unwrap().unwrap();
        if !is_valid(&bad) {
            flagged += 1;
        }
        let back = apply_mutation(&bad, &m.inverse().unwrap()).unwrap();
        assert!(is_valid(&back));
        assert_eq!(back.to_json(), inst.to_json());
    }
    assert!(flagged * 100 >= 95 * 200, "{flagged}/200");
    assert!(mutate_instance(&empty(), 0).unwrap().is_none());
}

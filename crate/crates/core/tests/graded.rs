use std::collections::BTreeMap;

use isx_core::graded::{homology, induced_on_homology, mapping_cone, ChainComplex, ChainMap, GradedMap, GradedSpace};
use isx_core::linalg::rational::int;
use isx_core::linalg::{kernel_basis, RationalMatrix};
use proptest::prelude::*;

fn rand_matrix(r: usize, c: usize, vals: &mut impl Iterator<Item = i64>) -> RationalMatrix {
    let v: Vec<i64> = (0..r * c).map(|_| vals.next().unwrap_or(0)).collect();
    RationalMatrix::from_i64(r, c, &v)
}

/// A complex over degrees `0..dims.len()` whose differentials compose to zero
/// by construction: each `d_{i+1}` factors through `ker d_i`.
fn complex(dims: &[usize], vals: &mut impl Iterator<Item = i64>) -> ChainComplex {
    let space = GradedSpace::new(0, dims.to_vec());
    let mut blocks = BTreeMap::new();
    let mut prev: Option<RationalMatrix> = None;
    for i in 1..dims.len() {
        let d = match &prev {
            None => rand_matrix(dims[i - 1], dims[i], vals),
            Some(p) => {
                let k = kernel_basis(p);
                k.basis().mul(&rand_matrix(k.dim(), dims[i], vals))
            }
        };
        blocks.insert(i as i32, d.clone());
        prev = Some(d);
    }
    ChainComplex::new(GradedMap::new(space.clone(), space, -1, blocks).unwrap()).unwrap()
}

/// `c·id + d h + h d`, a chain map for any degree +1 map `h`.
fn chain_map(a: &ChainComplex, c: i64, vals: &mut impl Iterator<Item = i64>) -> ChainMap {
    let s = a.space();
    let h = GradedMap::from_fn(s, s, 1, |i| rand_matrix(s.dim(i + 1), s.dim(i), vals));
    let d = a.differential();
    let dh = d.compose(&h).unwrap();
    let hd = h.compose(d).unwrap();
    let f = GradedMap::from_fn(s, s, 0, |i| {
        RationalMatrix::identity(s.dim(i)).scale(&int(c)).add(&dh.block(i)).add(&hd.block(i))
    });
    ChainMap::new(a.clone(), a.clone(), f).unwrap()
}

fn zero_diff_map(a_dims: &[usize], b_dims: &[usize], blocks: &[(i32, RationalMatrix)]) -> ChainMap {
    let a = GradedSpace::new(0, a_dims.to_vec());
    let b = GradedSpace::new(0, b_dims.to_vec());
    let f = GradedMap::new(a.clone(), b.clone(), 0, blocks.iter().cloned().collect()).unwrap();
    ChainMap::new(ChainComplex::zero_differential(&a), ChainComplex::zero_differential(&b), f).unwrap()
}

fn h_dims(c: &ChainComplex) -> Vec<usize> {
    homology(c).space.dims().to_vec()
}

fn cone_h(f: &ChainMap, lo: i32, hi: i32) -> Vec<usize> {
    homology(&mapping_cone(f).unwrap()).space.dims_over(lo, hi)
}

#[test]
fn cone_of_identity_is_acyclic() {
    let mut vals = [1i64, -2, 0, 3, 1, 1, 2, -1, 0, 1, 1, 2].into_iter().cycle();
    let a = complex(&[2, 3, 2], &mut vals);
    let id = ChainMap::new(a.clone(), a.clone(), GradedMap::identity(a.space())).unwrap();
    assert!(cone_h(&id, -1, 4).iter().all(|&d| d == 0));
}

#[test]
fn cone_of_zero_map() {
    let f = zero_diff_map(&[1, 2, 0], &[2, 0, 1], &[]);
    // B_i ⊕ A_{i−1}
    assert_eq!(cone_h(&f, 0, 3), vec![2, 1, 3, 0]);
}

#[test]
fn fixture_shaped_cone_is_quotient() {
    let f = zero_diff_map(
        &[1, 0, 1, 0],
        &[1, 1, 1, 1],
        &[(0, RationalMatrix::identity(1)), (2, RationalMatrix::identity(1))],
    );
    let quotient: Vec<usize> = [1, 1, 1, 1].iter().zip([1, 0, 1, 0]).map(|(b, a)| b - a).collect();
    assert_eq!(cone_h(&f, 0, 3), quotient);
    assert_eq!(quotient, vec![0, 1, 0, 1]);
}

#[test]
fn homology_of_zero_differential_is_the_space() {
    let s = GradedSpace::new(-1, vec![2, 0, 3]);
    let h = homology(&ChainComplex::zero_differential(&s));
    assert!(h.space.same_dims(&s));
    assert!(h.section.equals(&GradedMap::identity(&s)));
}

#[test]
fn induced_on_summand_inclusion() {
    let incl = RationalMatrix::from_i64(3, 2, &[1, 0, 0, 1, 0, 0]);
    let f = zero_diff_map(&[2], &[3], &[(0, incl)]);
    let ha = homology(f.source());
    let hb = homology(f.target());
    let fs = induced_on_homology(&f, &ha, &hb).unwrap();
    assert!(fs.is_injective());
    assert_eq!(fs.block(0).rank(), 2);

    let zero = zero_diff_map(&[2], &[3], &[]);
    assert!(induced_on_homology(&zero, &ha, &hb).unwrap().is_zero());
}

#[test]
fn cone_of_injection_is_quotient() {
    let inj = RationalMatrix::from_i64(3, 2, &[1, 2, 0, 1, 1, 1]);
    let f = zero_diff_map(&[0, 2], &[1, 3], &[(1, inj)]);
    assert_eq!(cone_h(&f, 0, 2), vec![1, 1, 0]);
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=3, 2..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cone_differential_squares_to_zero(dims in dims_strategy(), seed in prop::collection::vec(-2i64..=2, 64), c in -2i64..=2) {
        let mut vals = seed.into_iter().cycle();
        let a = complex(&dims, &mut vals);
        let f = chain_map(&a, c, &mut vals);
        let cone = mapping_cone(&f).unwrap();
        prop_assert!(cone.differential().compose(cone.differential()).unwrap().is_zero());
    }

    #[test]
    fn cone_dimensions_follow_the_long_exact_sequence(dims in dims_strategy(), seed in prop::collection::vec(-2i64..=2, 64), c in -2i64..=2) {
        let mut vals = seed.into_iter().cycle();
        let a = complex(&dims, &mut vals);
        let f = chain_map(&a, c, &mut vals);
        let ha = homology(&a);
        let fs = induced_on_homology(&f, &ha, &ha).unwrap();
        let top = dims.len() as i32;
        for i in -1..=top {
            let b = fs.block(i);
            let coker = ha.space.dim(i) - b.rank();
            let prev = fs.block(i - 1);
            let ker = ha.space.dim(i - 1) - prev.rank();
            prop_assert_eq!(cone_h(&f, i, i)[0], coker + ker, "degree {}", i);
        }
    }

    #[test]
    fn euler_characteristic_survives_homology(dims in dims_strategy(), seed in prop::collection::vec(-3i64..=3, 48)) {
        let mut vals = seed.into_iter().cycle();
        let a = complex(&dims, &mut vals);
        let chi = |d: &[usize]| d.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
        prop_assert_eq!(chi(&h_dims(&a)), chi(&dims));
        let model = homology(&a);
        prop_assert!(model.check_against(&a).is_ok());
    }

    #[test]
    fn injective_zero_differential_cone(a_dims in prop::collection::vec(0usize..=2, 3), extra in prop::collection::vec(0usize..=2, 3), seed in prop::collection::vec(-2i64..=2, 40)) {
        let mut vals = seed.into_iter().cycle();
        let b_dims: Vec<usize> = a_dims.iter().zip(&extra).map(|(a, e)| a + e).collect();
        let blocks: Vec<(i32, RationalMatrix)> = (0..3)
            .map(|i| {
                let top = RationalMatrix::identity(a_dims[i]);
                let rest = rand_matrix(extra[i], a_dims[i], &mut vals);
                (i as i32, top.vcat(&rest))
            })
            .collect();
        let f = zero_diff_map(&a_dims, &b_dims, &blocks);
        prop_assert_eq!(cone_h(&f, 0, 2), extra);
    }
}

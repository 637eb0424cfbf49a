//! Graded spaces, degree-shifting maps, chain complexes, cones and homology.
//!
//! Every graded object carries an explicit degree range; degrees outside the
//! range have dimension zero and their blocks are empty matrices.

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::error::{shape, Error, Result};
use crate::linalg::{RationalMatrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    min_degree: i32,
    dims: Vec<usize>,
}

impl GradedSpace {
    /// `dims[k]` is the dimension in degree `min_degree + k`.
    pub fn new(min_degree: i32, dims: Vec<usize>) -> Self {
        Self { min_degree, dims }
    }

    pub fn zero(min_degree: i32, max_degree: i32) -> Self {
        Self::new(min_degree, vec![0; (max_degree - min_degree + 1).max(0) as usize])
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree()..=self.max_degree()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: i32) -> usize {
        if i < self.min_degree || i > self.max_degree() {
            0
        } else {
            self.dims[(i - self.min_degree) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Same dimensions, ignoring differences in the zero padding of the range.
    pub fn same_dims(&self, other: &GradedSpace) -> bool {
        let lo = self.min_degree().min(other.min_degree());
        let hi = self.max_degree().max(other.max_degree());
        (lo..=hi).all(|i| self.dim(i) == other.dim(i))
    }

    /// Dimensions over an explicit degree range.
    pub fn dims_over(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|i| self.dim(i)).collect()
    }
}

/// Degree-shifting linear map; the block at `i` sends source degree `i` to
/// target degree `i + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    blocks: Vec<RationalMatrix>,
}

impl GradedMap {
    /// Blocks keyed by source degree; missing blocks are zero.
    pub fn new(
        source: GradedSpace,
        target: GradedSpace,
        shift: i32,
        mut blocks: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self> {
        for (&i, b) in &blocks {
            let want = (target.dim(i + shift), source.dim(i));
            if b.shape() != want {
                return Err(shape(format!("block at degree {i} is {:?}, expected {want:?}", b.shape())));
            }
            if !source.degrees().contains(&i) && b.rows() * b.cols() != 0 {
                return Err(shape(format!("block at degree {i} outside the source range")));
            }
        }
        let blocks = source
            .degrees()
            .map(|i| {
                blocks
                    .remove(&i)
                    .unwrap_or_else(|| RationalMatrix::zeros(target.dim(i + shift), source.dim(i)))
            })
            .collect();
        Ok(Self { source, target, shift, blocks })
    }

    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i32,
        mut f: impl FnMut(i32) -> RationalMatrix,
    ) -> Self {
        let blocks = source
            .degrees()
            .map(|i| {
                let b = f(i);
                assert_eq!(b.shape(), (target.dim(i + shift), source.dim(i)), "block at degree {i}");
                b
            })
            .collect();
        Self { source: source.clone(), target: target.clone(), shift, blocks }
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i32) -> Self {
        Self::from_fn(source, target, shift, |i| RationalMatrix::zeros(target.dim(i + shift), source.dim(i)))
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self::from_fn(space, space, 0, |i| RationalMatrix::identity(space.dim(i)))
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn block(&self, i: i32) -> Cow<'_, RationalMatrix> {
        if self.source.degrees().contains(&i) {
            Cow::Borrowed(&self.blocks[(i - self.source.min_degree()) as usize])
        } else {
            Cow::Owned(RationalMatrix::zeros(self.target.dim(i + self.shift), 0))
        }
    }

    pub fn block_mut(&mut self, i: i32) -> Option<&mut RationalMatrix> {
        let k = i - self.source.min_degree();
        if k < 0 {
            return None;
        }
        self.blocks.get_mut(k as usize)
    }

    /// Nonzero-size blocks keyed by source degree.
    pub fn nonempty_blocks(&self) -> BTreeMap<i32, RationalMatrix> {
        self.source
            .degrees()
            .zip(&self.blocks)
            .filter(|(_, b)| b.rows() * b.cols() > 0)
            .map(|(i, b)| (i, b.clone()))
            .collect()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        if !first.target.same_dims(&self.source) {
            return Err(shape("composition of maps with mismatched middle space"));
        }
        let s = first.shift;
        Ok(GradedMap::from_fn(&first.source, &self.target, s + self.shift, |i| {
            self.block(i + s).mul(&first.block(i))
        }))
    }

    pub fn neg(&self) -> GradedMap {
        GradedMap::from_fn(&self.source, &self.target, self.shift, |i| self.block(i).neg())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(RationalMatrix::is_zero)
    }

    /// Degreewise matrix equality, ignoring differences of range padding.
    pub fn equals(&self, other: &GradedMap) -> bool {
        self.shift == other.shift
            && self.source.same_dims(&other.source)
            && self.target.same_dims(&other.target)
            && self.source.degrees().all(|i| *self.block(i) == *other.block(i))
    }

    pub fn is_injective(&self) -> bool {
        self.source.degrees().all(|i| self.block(i).rank() == self.source.dim(i))
    }

    pub fn is_surjective(&self) -> bool {
        let lo = self.source.min_degree().min(self.target.min_degree() - self.shift);
        let hi = self.source.max_degree().max(self.target.max_degree() - self.shift);
        (lo..=hi).all(|i| self.block(i).rank() == self.target.dim(i + self.shift))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Chain complex with differential of degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    differential: GradedMap,
}

impl ChainComplex {
    pub fn new(differential: GradedMap) -> Result<Self> {
        if differential.shift() != -1 {
            return Err(shape("differential must have shift -1"));
        }
        if !differential.source().same_dims(differential.target()) {
            return Err(shape("differential must be an endomorphism"));
        }
        let c = Self { differential };
        if let Some(i) = c.space().degrees().find(|&i| !c.d(i - 1).mul(&c.d(i)).is_zero()) {
            return Err(Error::Invalid(format!("d∘d ≠ 0 at degree {i}")));
        }
        Ok(c)
    }

    pub fn zero_differential(space: &GradedSpace) -> Self {
        Self { differential: GradedMap::zero(space, space, -1) }
    }

    pub fn space(&self) -> &GradedSpace {
        self.differential.source()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    /// The differential leaving degree `i`.
    pub fn d(&self, i: i32) -> Cow<'_, RationalMatrix> {
        self.differential.block(i)
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.is_zero()
    }
}

/// Map of complexes of degree `map.shift()`, subject to `d ∘ f = (−1)^shift f ∘ d`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    map: GradedMap,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, map: GradedMap) -> Result<Self> {
        if !map.source().same_dims(source.space()) || !map.target().same_dims(target.space()) {
            return Err(shape("chain map spaces do not match the complexes"));
        }
        let s = map.shift();
        let lo = source.space().min_degree();
        let hi = source.space().max_degree() + 1;
        for i in lo..=hi {
            let left = target.d(i + s).mul(&map.block(i));
            let mut right = map.block(i - 1).mul(&source.d(i));
            if s % 2 != 0 {
                right = right.neg();
            }
            if left != right {
                return Err(Error::Invalid(format!("not a chain map at degree {i}")));
            }
        }
        Ok(Self { source, target, map })
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }
}

/// Bilinear pairing of left degree `i` with right degree `total − i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPairing {
    left: GradedSpace,
    right: GradedSpace,
    total: i32,
    blocks: Vec<RationalMatrix>,
}

impl GradedPairing {
    /// Blocks keyed by left degree; missing blocks are zero.
    pub fn new(
        left: GradedSpace,
        right: GradedSpace,
        total: i32,
        mut blocks: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self> {
        for (&i, b) in &blocks {
            let want = (left.dim(i), right.dim(total - i));
            if b.shape() != want {
                return Err(shape(format!("pairing block at degree {i} is {:?}, expected {want:?}", b.shape())));
            }
            if !left.degrees().contains(&i) && b.rows() * b.cols() != 0 {
                return Err(shape(format!("pairing block at degree {i} outside the left range")));
            }
        }
        let blocks = left
            .degrees()
            .map(|i| blocks.remove(&i).unwrap_or_else(|| RationalMatrix::zeros(left.dim(i), right.dim(total - i))))
            .collect();
        Ok(Self { left, right, total, blocks })
    }

    pub fn from_fn(
        left: &GradedSpace,
        right: &GradedSpace,
        total: i32,
        mut f: impl FnMut(i32) -> RationalMatrix,
    ) -> Self {
        let blocks = left
            .degrees()
            .map(|i| {
                let b = f(i);
                assert_eq!(b.shape(), (left.dim(i), right.dim(total - i)), "pairing block at degree {i}");
                b
            })
            .collect();
        Self { left: left.clone(), right: right.clone(), total, blocks }
    }

    pub fn left(&self) -> &GradedSpace {
        &self.left
    }

    pub fn right(&self) -> &GradedSpace {
        &self.right
    }

    pub fn total(&self) -> i32 {
        self.total
    }

    pub fn block(&self, i: i32) -> Cow<'_, RationalMatrix> {
        if self.left.degrees().contains(&i) {
            Cow::Borrowed(&self.blocks[(i - self.left.min_degree()) as usize])
        } else {
            Cow::Owned(RationalMatrix::zeros(0, self.right.dim(self.total - i)))
        }
    }

    pub fn block_mut(&mut self, i: i32) -> Option<&mut RationalMatrix> {
        let k = i - self.left.min_degree();
        if k < 0 {
            return None;
        }
        self.blocks.get_mut(k as usize)
    }

    pub fn nonempty_blocks(&self) -> BTreeMap<i32, RationalMatrix> {
        self.left
            .degrees()
            .zip(&self.blocks)
            .filter(|(_, b)| b.rows() * b.cols() > 0)
            .map(|(i, b)| (i, b.clone()))
            .collect()
    }

    /// Degrees whose block is not square and invertible, over both ranges.
    pub fn degenerate_degrees(&self) -> Vec<i32> {
        let lo = self.left.min_degree().min(self.total - self.right.max_degree());
        let hi = self.left.max_degree().max(self.total - self.right.min_degree());
        (lo..=hi).filter(|&i| !self.block(i).is_invertible()).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degenerate_degrees().is_empty()
    }
}

/// Homology presented by explicit coordinates: `section` picks cycle
/// representatives and `projection` reads off classes of cycles.
#[derive(Clone, Debug)]
pub struct HomologyModel {
    pub space: GradedSpace,
    pub section: GradedMap,
    pub projection: GradedMap,
}

impl HomologyModel {
    pub fn identity(space: &GradedSpace) -> Self {
        Self {
            space: space.clone(),
            section: GradedMap::identity(space),
            projection: GradedMap::identity(space),
        }
    }

    /// Checks that the model presents the homology of `c`.
    pub fn check_against(&self, c: &ChainComplex) -> Result<()> {
        for i in c.space().degrees() {
            let s = self.section.block(i);
            let p = self.projection.block(i);
            if !c.d(i).mul(&s).is_zero() {
                return Err(Error::Internal(format!("section at degree {i} is not a cycle")));
            }
            if p.mul(&s) != RationalMatrix::identity(self.space.dim(i)) {
                return Err(Error::Internal(format!("projection∘section ≠ id at degree {i}")));
            }
            if !p.mul(&c.d(i + 1)).is_zero() {
                return Err(Error::Internal(format!("projection does not kill boundaries at degree {i}")));
            }
            let h = c.d(i).kernel_matrix().cols() - c.d(i + 1).rank();
            if h != self.space.dim(i) {
                return Err(Error::Internal(format!("homology dimension mismatch at degree {i}")));
            }
        }
        Ok(())
    }
}

/// Given a basis `[first | kept | rest]` of the ambient space, returns the rows
/// of the inverse that read off the `kept` coordinates.
fn coordinate_rows(first: &RationalMatrix, kept: &RationalMatrix, rest: &RationalMatrix) -> RationalMatrix {
    let t = first.hcat(kept).hcat(rest);
    let inv = t.inverse().expect("adapted basis must be invertible");
    inv.submatrix(first.cols()..first.cols() + kept.cols(), 0..t.cols())
}

pub fn homology(c: &ChainComplex) -> HomologyModel {
    if c.has_zero_differential() {
        return HomologyModel::identity(c.space());
    }
    let space = c.space();
    let mut dims = Vec::new();
    let mut sections = Vec::new();
    let mut projections = Vec::new();
    for i in space.degrees() {
        let cycles = Subspace::from_independent(c.d(i).kernel_matrix());
        let boundaries = Subspace::span(&c.d(i + 1));
        let reps = boundaries.extend_from(cycles.basis());
        let rest = cycles.pivot_complement().into_basis();
        projections.push(coordinate_rows(boundaries.basis(), &reps, &rest));
        dims.push(reps.cols());
        sections.push(reps);
    }
    let h = GradedSpace::new(space.min_degree(), dims);
    let mut it = sections.into_iter();
    let section = GradedMap::from_fn(&h, space, 0, |_| it.next().unwrap());
    let mut it = projections.into_iter();
    let projection = GradedMap::from_fn(space, &h, 0, |_| it.next().unwrap());
    HomologyModel { space: h, section, projection }
}

/// Degree range of the cone on a map from `a` to `b`.
fn cone_range(a: &GradedSpace, b: &GradedSpace) -> (i32, i32) {
    (b.min_degree().min(a.min_degree() + 1), b.max_degree().max(a.max_degree() + 1))
}

/// Cone with pieces `B_i ⊕ A_{i−1}` and `d(b, a) = (d_B b + f a, −d_A a)`.
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
    if f.map().shift() != 0 {
        return Err(shape("mapping cone needs a degree-0 chain map"));
    }
    let a = f.source().space();
    let b = f.target().space();
    let (lo, hi) = cone_range(a, b);
    let space = GradedSpace::new(lo, (lo..=hi).map(|i| b.dim(i) + a.dim(i - 1)).collect());
    let d = GradedMap::from_fn(&space, &space, -1, |i| {
        let db = f.target().d(i);
        let fa = f.map().block(i - 1);
        let da = f.source().d(i - 1).neg();
        let (bi, ai, bj, aj) = (b.dim(i), a.dim(i - 1), b.dim(i - 1), a.dim(i - 2));
        RationalMatrix::block(&[bj, aj], &[bi, ai], &[vec![Some(&db), Some(&fa)], vec![None, Some(&da)]])
    });
    ChainComplex::new(d)
}

/// Closed-form homology of the cone on a map `φ: A → B` between zero-differential
/// complexes: degree `i` is `coker φ_i ⊕ ker φ_{i−1}`.
#[derive(Clone, Debug)]
pub struct SplitCone {
    pub cone: ChainComplex,
    pub model: HomologyModel,
    /// Standard vectors of `B_i` spanning the pivot complement of `im φ_i`.
    pub coker_basis: GradedMap,
    /// Rows reading off `coker_basis` coordinates, vanishing on `im φ_i`.
    pub coker_projection: GradedMap,
    /// Basis of `ker φ_{i−1}`, placed at cone degree `i`.
    pub kernel_basis: GradedMap,
    pub kernel_projection: GradedMap,
    source: GradedSpace,
    target: GradedSpace,
}

impl SplitCone {
    pub fn new(phi: &GradedMap) -> Result<Self> {
        if phi.shift() != 0 {
            return Err(shape("split cone needs a degree-0 map"));
        }
        let a = phi.source().clone();
        let b = phi.target().clone();
        let za = ChainComplex::zero_differential(&a);
        let zb = ChainComplex::zero_differential(&b);
        let cone = mapping_cone(&ChainMap::new(za, zb, phi.clone())?)?;
        let (lo, hi) = cone_range(&a, &b);

        let mut coker = BTreeMap::new();
        let mut coker_proj = BTreeMap::new();
        let mut coker_dims = Vec::new();
        for i in lo..=hi {
            let im = Subspace::span(&phi.block(i));
            let c = im.pivot_complement().into_basis();
            let rest = RationalMatrix::zeros(b.dim(i), 0);
            coker_proj.insert(i, coordinate_rows(im.basis(), &c, &rest));
            coker_dims.push(c.cols());
            coker.insert(i, c);
        }
        let mut kers = BTreeMap::new();
        let mut ker_proj = BTreeMap::new();
        let mut ker_dims = Vec::new();
        for i in lo..=hi {
            let k = phi.block(i - 1).kernel_matrix();
            let rest = Subspace::from_independent(k.clone()).pivot_complement().into_basis();
            ker_proj.insert(i, coordinate_rows(&RationalMatrix::zeros(k.rows(), 0), &k, &rest));
            ker_dims.push(k.cols());
            kers.insert(i, k);
        }
        let cq = GradedSpace::new(lo, coker_dims);
        let kq = GradedSpace::new(lo, ker_dims);
        let b_on_cone = GradedSpace::new(lo, (lo..=hi).map(|i| b.dim(i)).collect());
        let a_on_cone = GradedSpace::new(lo, (lo..=hi).map(|i| a.dim(i - 1)).collect());
        let coker_basis = GradedMap::new(cq.clone(), b_on_cone.clone(), 0, coker)?;
        let coker_projection = GradedMap::new(b_on_cone, cq.clone(), 0, coker_proj)?;
        let kernel_basis = GradedMap::new(kq.clone(), a_on_cone.clone(), 0, kers)?;
        let kernel_projection = GradedMap::new(a_on_cone, kq.clone(), 0, ker_proj)?;

        let h = GradedSpace::new(lo, (lo..=hi).map(|i| cq.dim(i) + kq.dim(i)).collect());
        let space = cone.space().clone();
        let section = GradedMap::from_fn(&h, &space, 0, |i| {
            let (cb, kb) = (coker_basis.block(i), kernel_basis.block(i));
            RationalMatrix::block(&[b.dim(i), a.dim(i - 1)], &[cq.dim(i), kq.dim(i)], &[
                vec![Some(&cb), None],
                vec![None, Some(&kb)],
            ])
        });
        let projection = GradedMap::from_fn(&space, &h, 0, |i| {
            let (cp, kp) = (coker_projection.block(i), kernel_projection.block(i));
            RationalMatrix::block(&[cq.dim(i), kq.dim(i)], &[b.dim(i), a.dim(i - 1)], &[
                vec![Some(&cp), None],
                vec![None, Some(&kp)],
            ])
        });
        let model = HomologyModel { space: h, section, projection };
        Ok(Self { cone, model, coker_basis, coker_projection, kernel_basis, kernel_projection, source: a, target: b })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.model.space
    }

    pub fn coker_dim(&self, i: i32) -> usize {
        self.coker_basis.source().dim(i)
    }

    pub fn ker_dim(&self, i: i32) -> usize {
        self.kernel_basis.source().dim(i)
    }

    /// Dimension of `B_i` (the "target" summand of cone degree `i`).
    pub fn target_dim(&self, i: i32) -> usize {
        self.target.dim(i)
    }

    /// Dimension of `A_{i−1}` (the "source" summand of cone degree `i`).
    pub fn source_dim(&self, i: i32) -> usize {
        self.source.dim(i - 1)
    }
}

pub fn induced_on_homology(f: &ChainMap, source: &HomologyModel, target: &HomologyModel) -> Result<GradedMap> {
    if !source.section.target().same_dims(f.source().space()) || !target.projection.source().same_dims(f.target().space()) {
        return Err(shape("homology models do not match the chain map"));
    }
    let s = f.map().shift();
    Ok(GradedMap::from_fn(&source.space, &target.space, s, |i| {
        target.projection.block(i + s).mul(&f.map().block(i)).mul(&source.section.block(i))
    }))
}

//! Section families, the global duality of the intersection space, and the
//! middle-degree form with its signature.
//!
//! A section family stores, per degree `i` of `H_ix`:
//! - `v_basis`, a basis `V` of `im v_i ⊂ R_i`, and `s`, the matrix `S` with
//!   `v·S = V` (so `s` sends `V`-coordinates into `H_ix`);
//! - `complement`, a complement `Kc` of `ker h_i` in `M_i`, and `r`, the
//!   retraction with `r·h·Kc = I` (so `Kc·r` lands in `M_i`).
//!
//! The duality block at degree `r` is written in the basis `[U | S]` of
//! `H_ix(r)`, `U` a pivot basis of `im u_r`, and inverted at the end.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::approximation::{local_duality_from, Approximation};
use crate::error::{Error, Result};
use crate::global::{intersection_space, GlobalDatum, IxModel};
use crate::graded::GradedPairing;
use crate::linalg::rational::parity_sign;
use crate::linalg::{kernel_basis, subspace_annihilator, symmetric_signature, Inertia, RationalMatrix, Subspace};
use crate::tube::TubeDatum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionBlock {
    pub v_basis: RationalMatrix,
    pub s: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionBlock {
    pub complement: RationalMatrix,
    pub r: RationalMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SectionFamily {
    pub s: BTreeMap<i32, SectionBlock>,
    pub r: BTreeMap<i32, RetractionBlock>,
}

impl SectionFamily {
    pub fn is_empty(&self) -> bool {
        self.s.values().all(|b| b.s.cols() == 0) && self.r.values().all(|b| b.r.rows() == 0)
    }

    fn section(&self, i: i32) -> Result<&SectionBlock> {
        self.s.get(&i).ok_or_else(|| Error::Invalid(format!("section family has no s block in degree {i}")))
    }

    fn retraction(&self, i: i32) -> Result<&RetractionBlock> {
        self.r.get(&i).ok_or_else(|| Error::Invalid(format!("section family has no r block in degree {i}")))
    }

    /// `s` applied to vectors of `im v_i`, given in `R_i` coordinates.
    pub fn apply_s(&self, i: i32, vectors: &RationalMatrix) -> Result<RationalMatrix> {
        let blk = self.section(i)?;
        let coords = blk
            .v_basis
            .solve_matrix(vectors)?
            .ok_or_else(|| Error::Internal(format!("vectors outside im v in degree {i}")))?;
        Ok(blk.s.mul(&coords))
    }

    /// Basis of `ker r_i ⊂ H_ix(i)`.
    pub fn ker_r(&self, i: i32) -> Result<RationalMatrix> {
        Ok(self.retraction(i)?.r.kernel_matrix())
    }
}

fn pivot_basis(m: &RationalMatrix) -> RationalMatrix {
    m.select_columns(&m.pivot_columns())
}

fn retraction(h: &RationalMatrix, kc: RationalMatrix, kr: &RationalMatrix) -> Result<RetractionBlock> {
    let hb = h.mul(&kc);
    let t = hb.hcat(kr);
    let inv = t
        .inverse()
        .ok_or_else(|| Error::Internal("image of h and the chosen complement do not split H_ix".into()))?;
    let r = inv.submatrix(0..hb.cols(), 0..inv.cols());
    Ok(RetractionBlock { complement: kc, r })
}

/// Checks `v·s = id` on `im v` and `r·h = id` on the chosen complement of `ker h`.
pub fn verify_family(ix: &IxModel, fam: &SectionFamily) -> Result<()> {
    for i in ix.h_ix().degrees() {
        let v = ix.v.block(i);
        let sb = fam.section(i)?;
        if sb.v_basis.rank() != sb.v_basis.cols() || !Subspace::span(&v).same_as(&Subspace::span(&sb.v_basis)) {
            return Err(Error::Invalid(format!("v_basis in degree {i} is not a basis of im v")));
        }
        if sb.s.shape() != (v.cols(), sb.v_basis.cols()) || v.mul(&sb.s) != sb.v_basis {
            return Err(Error::Invalid(format!("v∘s ≠ id in degree {i}")));
        }
        let h = ix.h.block(i);
        let rb = fam.retraction(i)?;
        let kc = &rb.complement;
        let ker = h.kernel_matrix();
        if kc.rows() != h.cols() || kc.cols() != h.rank() || ker.hcat(kc).rank() != h.cols() {
            return Err(Error::Invalid(format!("complement in degree {i} does not split off ker h")));
        }
        if rb.r.shape() != (kc.cols(), h.rows()) || rb.r.mul(&h).mul(kc) != RationalMatrix::identity(kc.cols()) {
            return Err(Error::Invalid(format!("r∘h ≠ id in degree {i}")));
        }
    }
    Ok(())
}

/// Pivot-based family: `V` the pivot columns of `v`, `S` the matching unit
/// vectors, `Kc` the pivot complement of `ker h`, and `ker r` the pivot
/// complement of `im h`.
pub fn default_sections(ix: &IxModel) -> Result<SectionFamily> {
    let mut fam = SectionFamily::default();
    for i in ix.h_ix().degrees() {
        let v = ix.v.block(i);
        let piv = v.pivot_columns();
        let s = RationalMatrix::identity(v.cols()).select_columns(&piv);
        fam.s.insert(i, SectionBlock { v_basis: v.select_columns(&piv), s });
        let h = ix.h.block(i);
        let kc = kernel_basis(&h).pivot_complement().into_basis();
        let kr = Subspace::span(&h.mul(&kc)).pivot_complement().into_basis();
        fam.r.insert(i, retraction(&h, kc, &kr)?);
    }
    verify_family(ix, &fam)?;
    Ok(fam)
}

/// The default family moved by random elements of `im u` (for `s`) and of
/// `im h` (for `ker r`). Distinct seeds give distinct families whenever those
/// images are nonzero.
pub fn perturbed_sections(ix: &IxModel, seed: u64) -> Result<SectionFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = default_sections(ix)?;
    let mut fam = SectionFamily::default();
    let mut rand_matrix = |r: usize, c: usize| {
        let vals: Vec<i64> = (0..r * c).map(|_| rng.random_range(-3..=3)).collect();
        RationalMatrix::from_i64(r, c, &vals)
    };
    for i in ix.h_ix().degrees() {
        let sb = &base.s[&i];
        let u = pivot_basis(&ix.u.block(i));
        let s = sb.s.add(&u.mul(&rand_matrix(u.cols(), sb.s.cols())));
        fam.s.insert(i, SectionBlock { v_basis: sb.v_basis.clone(), s });
        let h = ix.h.block(i);
        let rb = &base.r[&i];
        let hb = h.mul(&rb.complement);
        let kr0 = rb.r.kernel_matrix();
        let kr = kr0.add(&hb.mul(&rand_matrix(hb.cols(), kr0.cols())));
        fam.r.insert(i, retraction(&h, rb.complement.clone(), &kr)?);
    }
    verify_family(ix, &fam)?;
    Ok(fam)
}

fn obstructions_vanish_for(ix_p: &IxModel, ix_q: &IxModel) -> Option<i32> {
    let n = ix_p.dimension;
    ix_p.boundary.degrees().find(|&r| {
        let g = ix_p.bdry_pairing.block(r);
        !ix_p.f.block(r).transpose().mul(&g).mul(&ix_q.f.block(n - 1 - r)).is_zero()
    })
}

/// Builds an untwisted family. Requires a Witt datum, even `N` and vanishing
/// obstructions. `s` sends `j(m)` to `h(m)`, `ker r = s(Q)` where `Q` is the
/// largest subspace of `im v` annihilated by `h⁻¹(im s∘j)` in the other degree.
pub fn untwisted_sections(ix: &IxModel) -> Result<SectionFamily> {
    let n = ix.dimension;
    if !ix.witt {
        return Err(Error::Precondition("untwisted sections need a Witt datum".into()));
    }
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("untwisted sections need even dimension, got {n}")));
    }
    if let Some(r) = obstructions_vanish_for(ix, ix) {
        return Err(Error::Precondition(format!("local duality obstruction at degree {r}")));
    }
    let degrees: Vec<i32> = ix.h_ix().degrees().collect();
    let mut fam = SectionFamily::default();
    let mut s_of_j: BTreeMap<i32, RationalMatrix> = BTreeMap::new();
    for &i in &degrees {
        let v = ix.v.block(i);
        let j = ix.j.block(i);
        let jp = j.pivot_columns();
        let jb = j.select_columns(&jp);
        let hj = ix.h.block(i).select_columns(&jp);
        let both = jb.hcat(&v);
        let extra: Vec<usize> = both.pivot_columns().into_iter().filter(|&c| c >= jb.cols()).map(|c| c - jb.cols()).collect();
        let v_basis = jb.hcat(&v.select_columns(&extra));
        let s = hj.hcat(&RationalMatrix::identity(v.cols()).select_columns(&extra));
        s_of_j.insert(i, hj);
        fam.s.insert(i, SectionBlock { v_basis, s });
    }
    for &i in &degrees {
        let v = ix.v.block(i);
        let h_other = ix.h.block(n - i);
        let sj_other = s_of_j.get(&(n - i)).cloned().unwrap_or_else(|| RationalMatrix::zeros(h_other.rows(), 0));
        let pre = Subspace::span(&sj_other).preimage(&h_other);
        let ann = subspace_annihilator(&pre, &ix.l(i).transpose())?;
        let q = Subspace::span(&v).intersection(&ann);
        let im_j = Subspace::span(&ix.j.block(i));
        if !q.is_independent_of(&im_j) || q.dim() + im_j.dim() != v.rank() {
            return Err(Error::Internal(format!("im v ≠ Q ⊕ im j in degree {i}")));
        }
        let kr = fam.apply_s(i, q.basis())?;
        let h = ix.h.block(i);
        let kc = kernel_basis(&h).pivot_complement().into_basis();
        if h.rank() + kr.cols() != h.rows() {
            return Err(Error::Internal(format!("s(Q) does not complement im h in degree {i}")));
        }
        fam.r.insert(i, retraction(&h, kc, &kr)?);
    }
    verify_family(ix, &fam)?;

    let phi = global_duality(ix, ix, &fam, &fam)?;
    for &i in &degrees {
        let hj = &s_of_j[&i];
        if !Subspace::span(&ix.h.block(i)).contains(&Subspace::span(hj)) {
            return Err(Error::Internal(format!("untwisted (i) fails in degree {i}")));
        }
        let kr = fam.ker_r(i)?;
        if !Subspace::span(&fam.s[&i].s).contains(&Subspace::span(&kr)) {
            return Err(Error::Internal(format!("ker r ⊄ im s in degree {i}")));
        }
        let other = s_of_j.get(&(n - i)).cloned().unwrap_or_else(|| RationalMatrix::zeros(phi.right().dim(n - i), 0));
        if !kr.transpose().mul(&phi.block(i)).mul(&other).is_zero() {
            return Err(Error::Internal(format!("(ker r, im s∘j) ≠ 0 in degree {i}")));
        }
    }
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub degree: i32,
    /// `im h = im u ⊕ im(s∘j)`
    pub image_h: bool,
    /// `im s = ker r ⊕ im(s∘j)`
    pub image_s: bool,
}

fn is_direct_sum(whole: &Subspace, a: &Subspace, b: &Subspace) -> bool {
    a.is_independent_of(b) && a.sum(b).same_as(whole)
}

pub fn untwisted_decompositions(ix: &IxModel, fam: &SectionFamily) -> Result<Vec<DecompositionRow>> {
    let mut rows = Vec::new();
    for i in ix.h_ix().degrees() {
        let sj = Subspace::span(&fam.apply_s(i, &ix.j.block(i))?);
        let image_h = is_direct_sum(&Subspace::span(&ix.h.block(i)), &Subspace::span(&ix.u.block(i)), &sj);
        let image_s = is_direct_sum(&Subspace::span(&fam.section(i)?.s), &Subspace::span(&fam.ker_r(i)?), &sj);
        rows.push(DecompositionRow { degree: i, image_h, image_s });
    }
    Ok(rows)
}

/// Global duality `H_ix(p, r) × H_ix(q, N−r)`, defined by
/// `(u α, β) = Λ(α, g β)` and `(s γ, β) = D_L(γ, r β)`.
pub fn global_duality(ix_p: &IxModel, ix_q: &IxModel, fam_p: &SectionFamily, fam_q: &SectionFamily) -> Result<GradedPairing> {
    let n = ix_p.dimension;
    if ix_q.dimension != n {
        return Err(Error::Invalid("models have different dimensions".into()));
    }
    if let Some(r) = obstructions_vanish_for(ix_p, ix_q) {
        return Err(Error::Precondition(format!("local duality obstruction at degree {r}")));
    }
    verify_family(ix_p, fam_p)?;
    verify_family(ix_q, fam_q)?;
    let lam = local_duality_from(n, &ix_p.bdry_pairing, &ix_p.cone, &ix_q.f)?;

    let left = ix_p.h_ix();
    let right = ix_q.h_ix();
    let mut blocks = BTreeMap::new();
    for r in left.degrees() {
        let u = ix_p.u.block(r);
        let up = u.pivot_columns();
        let g_q = ix_q.g.block(n - r);
        let lam_r = lam.block(r);
        if !u.kernel_matrix().transpose().mul(&lam_r).mul(&g_q).is_zero() {
            return Err(Error::Internal(format!("u-clause not constant on ker u in degree {r}")));
        }
        let sb = fam_p.section(r)?;
        let basis = u.select_columns(&up).hcat(&sb.s);
        let w_u = lam_r.select_rows(&up).mul(&g_q);
        let w_s = match fam_q.r.get(&(n - r)) {
            Some(rb) => sb.v_basis.transpose().mul(&ix_p.l(r)).mul(&rb.complement).mul(&rb.r),
            None => RationalMatrix::zeros(sb.s.cols(), right.dim(n - r)),
        };
        let w = w_u.vcat(&w_s);
        let inv = basis.inverse().ok_or_else(|| Error::Internal(format!("[U | S] is not a basis in degree {r}")))?;
        let blk = inv.transpose().mul(&w);
        if !blk.is_invertible() {
            return Err(Error::Internal(format!("duality block in degree {r} is not invertible")));
        }
        blocks.insert(r, blk);
    }
    let pairing = GradedPairing::new(left.clone(), right.clone(), n, blocks)?;

    let (lo, hi) = (left.min_degree() - 1, left.max_degree() + 1);
    for r in lo..=hi {
        let lhs = ix_p.ell.block(r - 1).mul(&ix_p.delta.block(r)).transpose().mul(&lam.block(r - 1));
        let rhs = ix_p.l(r).mul(&ix_p.iota.block(n - r)).mul(&ix_q.f.block(n - r)).scale(&parity_sign((n - r) as i64));
        if lhs != rhs {
            return Err(Error::Internal(format!("right square fails in degree {r}")));
        }
        if !ix_p.v.block(r).mul(&ix_p.u.block(r)).is_zero() || !ix_q.g.block(r).mul(&ix_q.h.block(r)).is_zero() {
            return Err(Error::Internal(format!("left rectangle fails in degree {r}")));
        }
    }
    if let Some(r) = pairing.degenerate_degrees().first() {
        return Err(Error::Internal(format!("global duality degenerate at degree {r}")));
    }
    Ok(pairing)
}

/// The four evaluation identities of the pairing on basis vectors:
/// `(im u, im h) = 0`, `(im s, ker r) = 0`,
/// `(u ℓ α, β) = (−1)^{i(N−i)} (v β, ι α)_L` and `(s γ, h m) = (γ, m)_L`.
pub fn check_pairing_identities(
    ix_p: &IxModel,
    ix_q: &IxModel,
    fam_p: &SectionFamily,
    fam_q: &SectionFamily,
    phi: &GradedPairing,
) -> Result<()> {
    let n = ix_p.dimension;
    for i in phi.left().degrees() {
        let blk = phi.block(i);
        let h_q = ix_q.h.block(n - i);
        let fail = |what: &str| Err(Error::Internal(format!("{what} in degree {i}")));
        if !ix_p.u.block(i).transpose().mul(&blk).mul(&h_q).is_zero() {
            return fail("(im u, im h) ≠ 0");
        }
        let s = &fam_p.section(i)?.s;
        if let Some(rb) = fam_q.r.get(&(n - i)) {
            if !s.transpose().mul(&blk).mul(&rb.r.kernel_matrix()).is_zero() {
                return fail("(im s, ker r) ≠ 0");
            }
        }
        let ul = ix_p.u.block(i).mul(&ix_p.ell.block(i));
        let rhs = ix_p
            .iota
            .block(i)
            .transpose()
            .mul(&ix_p.l(n - i).transpose())
            .mul(&ix_q.v.block(n - i))
            .scale(&parity_sign((i * (n - i)) as i64));
        if ul.transpose().mul(&blk) != rhs {
            return fail("(uℓα, β) ≠ ±(vβ, ια)_L");
        }
        let v_basis = &fam_p.section(i)?.v_basis;
        if s.transpose().mul(&blk).mul(&h_q) != v_basis.transpose().mul(&ix_p.l(i)) {
            return fail("(sγ, hm) ≠ (γ, m)_L");
        }
    }
    Ok(())
}

/// Middle-degree Gram matrix in the basis `[U | s∘j | ker r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleGram {
    pub degree: i32,
    pub gram: RationalMatrix,
    pub basis: RationalMatrix,
    /// Sizes of the three basis blocks.
    pub sizes: [usize; 3],
    /// `false` when `N ≡ 2 mod 4`.
    pub symmetry_guaranteed: bool,
}

pub fn ix_gram_matrix(ix: &IxModel, fam: &SectionFamily) -> Result<MiddleGram> {
    let n = ix.dimension;
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("no middle degree for odd dimension {n}")));
    }
    if !ix.witt {
        return Err(Error::Precondition("the middle form needs a Witt datum".into()));
    }
    let phi = global_duality(ix, ix, fam, fam)?;
    check_pairing_identities(ix, ix, fam, fam, &phi)?;
    let m = n / 2;
    let u = pivot_basis(&ix.u.block(m));
    let sj = fam.apply_s(m, &pivot_basis(&ix.j.block(m)))?;
    let kr = fam.ker_r(m)?;
    let basis = RationalMatrix::hcat_all(ix.h_ix().dim(m), &[&u, &sj, &kr]);
    if !basis.is_invertible() {
        return Err(Error::Precondition(format!(
            "im u, im s∘j and ker r do not split H_ix({m}); the family is not untwisted"
        )));
    }
    let gram = basis.transpose().mul(&phi.block(m)).mul(&basis);
    Ok(MiddleGram { degree: m, gram, basis, sizes: [u.cols(), sj.cols(), kr.cols()], symmetry_guaranteed: n % 4 == 0 })
}

/// `(j e_k, e_l)_L` over the pivot basis `{e_k}` of `M_{N/2}` modulo `ker j`.
pub fn novikov_gram_matrix(ix: &IxModel) -> Result<RationalMatrix> {
    let n = ix.dimension;
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("no middle degree for odd dimension {n}")));
    }
    let m = n / 2;
    let j = ix.j.block(m);
    let piv = j.pivot_columns();
    let lj = j.select_columns(&piv).transpose().mul(&ix.l(m));
    if !lj.mul(&j.kernel_matrix()).is_zero() {
        return Err(Error::Internal("novikov form depends on the lift".into()));
    }
    Ok(lj.select_columns(&piv))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub degree: i32,
    pub gram_ix: RationalMatrix,
    pub gram_novikov: RationalMatrix,
    pub symmetric: bool,
    /// Whether `gram_ix` has the shape `[[0,0,A],[0,Y,0],[Aᵀ,0,0]]`.
    pub block_form: bool,
    pub block_sizes: [usize; 3],
    /// Whether the `Y` block equals `gram_novikov`.
    pub y_block_matches: bool,
    pub inertia_ix: Inertia,
    pub inertia_novikov: Inertia,
    pub sigma_ix: i64,
    pub sigma_novikov: i64,
    pub equal: bool,
}

fn has_block_form(g: &RationalMatrix, [a, y, c]: [usize; 3]) -> bool {
    let r = [0..a, a..a + y, a + y..a + y + c];
    let zero = |i: usize, j: usize| g.submatrix(r[i].clone(), r[j].clone()).is_zero();
    let zeros = [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2)].iter().all(|&(i, j)| zero(i, j));
    zeros && g.submatrix(r[2].clone(), r[0].clone()) == g.submatrix(r[0].clone(), r[2].clone()).transpose()
}

pub fn signature_report(t: &TubeDatum, g: &GlobalDatum, a: &Approximation) -> Result<SignatureReport> {
    let n = t.dimension;
    if !t.witt {
        return Err(Error::Precondition("signature needs a Witt datum".into()));
    }
    if n % 4 != 0 {
        return Err(Error::Precondition(format!("signature needs N ≡ 0 mod 4, got {n}")));
    }
    let ix = intersection_space(t, g, a)?;
    if let Some(r) = obstructions_vanish_for(&ix, &ix) {
        return Err(Error::Precondition(format!("local duality obstruction at degree {r}")));
    }
    let fam = untwisted_sections(&ix)?;
    let mg = ix_gram_matrix(&ix, &fam)?;
    let nov = novikov_gram_matrix(&ix)?;
    let symmetric = mg.gram.is_symmetric();
    if !symmetric || !nov.is_symmetric() {
        return Err(Error::Internal("middle form is not symmetric".into()));
    }
    let [a0, y, _] = mg.sizes;
    let y_block_matches = mg.gram.submatrix(a0..a0 + y, a0..a0 + y) == nov;
    let inertia_ix = symmetric_signature(&mg.gram)?;
    let inertia_novikov = symmetric_signature(&nov)?;
    let (sigma_ix, sigma_novikov) = (inertia_ix.signature(), inertia_novikov.signature());
    Ok(SignatureReport {
        degree: mg.degree,
        block_form: has_block_form(&mg.gram, mg.sizes),
        block_sizes: mg.sizes,
        gram_ix: mg.gram,
        gram_novikov: nov,
        symmetric,
        y_block_matches,
        inertia_ix,
        inertia_novikov,
        sigma_ix,
        sigma_novikov,
        equal: sigma_ix == sigma_novikov,
    })
}

impl SignatureReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("middle degree   {}\n", self.degree));
        s.push_str(&format!("gram_ix         {}x{}\n", self.gram_ix.rows(), self.gram_ix.cols()));
        for i in 0..self.gram_ix.rows() {
            s.push_str(&format!("  {}\n", fmt_row(self.gram_ix.row(i))));
        }
        s.push_str(&format!("gram_novikov    {}x{}\n", self.gram_novikov.rows(), self.gram_novikov.cols()));
        for i in 0..self.gram_novikov.rows() {
            s.push_str(&format!("  {}\n", fmt_row(self.gram_novikov.row(i))));
        }
        s.push_str(&format!("symmetric       {}\n", self.symmetric));
        s.push_str(&format!("block form      {} {:?}\n", self.block_form, self.block_sizes));
        s.push_str(&format!("sigma_ix        {}\n", self.sigma_ix));
        s.push_str(&format!("sigma_novikov   {}\n", self.sigma_novikov));
        s.push_str(&format!("equal           {}\n", self.equal));
        s
    }
}

fn fmt_row(r: &[crate::linalg::Rational]) -> String {
    r.iter().map(|x| format!("{:>6}", crate::linalg::format_rational(x))).collect::<Vec<_>>().join(" ")
}

/// Ranks of the duality blocks, degree by degree.
pub fn duality_ranks(phi: &GradedPairing) -> Vec<(i32, usize)> {
    phi.left().degrees().map(|i| (i, phi.block(i).rank())).collect()
}

//! The complement of the tube, its Lefschetz duality, and the algebraic
//! intersection space built as the cone on `A → B → M`.
//!
//! The relative homology `R` is always the split cone on `ι`, so
//! `R_i = coker ι_i ⊕ ker ι_{i−1}`, and the Lefschetz pairing `L_i` pairs
//! `R_i` with `M_{N−i}` in those coordinates. The absolute/relative form is
//! `L′_i = (−1)^{i(N−i)} L_{N−i}ᵀ`.

use crate::approximation::{cone_data, Approximation, ConeData};
use crate::error::{Error, Result};
use crate::graded::{homology, induced_on_homology, ChainComplex, ChainMap, GradedMap, GradedPairing, GradedSpace, HomologyModel, SplitCone};
use crate::linalg::rational::parity_sign;
use crate::linalg::RationalMatrix;
use crate::report::ValidationReport;
use crate::tube::{exactness_defect, Perversity, TubeDatum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDatum {
    pub complement: GradedSpace,
    /// `B → M`, degree 0.
    pub iota: GradedMap,
    /// `R_i × M_{N−i}`, total `N`.
    pub lefschetz: GradedPairing,
}

/// `L′_i: M_i × R_{N−i}`.
pub fn lefschetz_prime(n: i32, lefschetz: &GradedPairing, i: i32) -> RationalMatrix {
    lefschetz.block(n - i).transpose().scale(&parity_sign((i * (n - i)) as i64))
}

/// Split cone on `ι` together with the canonical `j: M → R` and `δ: R → B[−1]`.
#[derive(Clone, Debug)]
pub struct RelativeModel {
    pub split: SplitCone,
    pub j: GradedMap,
    pub delta: GradedMap,
}

impl RelativeModel {
    pub fn new(iota: &GradedMap) -> Result<Self> {
        let split = SplitCone::new(iota)?;
        let m = iota.target();
        let b = iota.source();
        let j = induced_on_homology(&top_inclusion(&split, m)?, &HomologyModel::identity(m), &split.model)?;
        let delta = induced_on_homology(&bottom_projection(&split, b)?, &split.model, &HomologyModel::identity(b))?;
        Ok(Self { split, j, delta })
    }

    pub fn space(&self) -> &GradedSpace {
        self.split.space()
    }
}

/// `x ↦ (x, 0)` from the target of a cone into the cone.
fn top_inclusion(split: &SplitCone, top: &GradedSpace) -> Result<ChainMap> {
    let map = GradedMap::from_fn(top, split.cone.space(), 0, |i| {
        RationalMatrix::identity(top.dim(i)).vcat(&RationalMatrix::zeros(split.source_dim(i), top.dim(i)))
    });
    ChainMap::new(ChainComplex::zero_differential(top), split.cone.clone(), map)
}

/// `(x, y) ↦ y` from a cone onto the shifted source.
fn bottom_projection(split: &SplitCone, bottom: &GradedSpace) -> Result<ChainMap> {
    let map = GradedMap::from_fn(split.cone.space(), bottom, -1, |i| {
        RationalMatrix::zeros(split.source_dim(i), split.target_dim(i)).hcat(&RationalMatrix::identity(split.source_dim(i)))
    });
    ChainMap::new(split.cone.clone(), ChainComplex::zero_differential(bottom), map)
}

fn window(spaces: &[&GradedSpace]) -> (i32, i32) {
    let lo = spaces.iter().map(|s| s.min_degree()).min().unwrap_or(0);
    let hi = spaces.iter().map(|s| s.max_degree()).max().unwrap_or(0);
    (lo - 1, hi + 2)
}

/// Exactness of `… → X --first--> Y --second--> Z → …` at every `Y_i`.
fn exact_pairs(rep: &mut ValidationReport, name: &str, first: &GradedMap, second: &GradedMap, lo: i32, hi: i32) {
    for i in lo..=hi {
        if let Some(d) = exactness_defect(&first.block(i - first.shift()), &second.block(i)) {
            rep.fail_at(name, i, d);
        }
    }
}

pub fn validate_global(t: &TubeDatum, g: &GlobalDatum) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = t.dimension;
    if g.iota.shift() != 0 || !g.iota.source().same_dims(&t.boundary) || !g.iota.target().same_dims(&g.complement) {
        rep.push("structure", None, "iota must be a degree-0 map B → M");
        return rep;
    }
    let rel = match RelativeModel::new(&g.iota) {
        Ok(r) => r,
        Err(e) => {
            rep.push("structure", None, e.to_string());
            return rep;
        }
    };
    if g.lefschetz.total() != n || !g.lefschetz.left().same_dims(rel.space()) || !g.lefschetz.right().same_dims(&g.complement) {
        rep.push("structure", None, "lefschetz must pair the canonical R_i with M_{N−i}");
        return rep;
    }
    for i in g.lefschetz.degenerate_degrees() {
        rep.fail_at("lefschetz nondegenerate", i, "block is not square invertible");
    }
    let (lo, hi) = window(&[&t.boundary, &g.complement, rel.space()]);
    for i in lo..=hi {
        let lp = lefschetz_prime(n, &g.lefschetz, i);
        let left = g.iota.block(i).transpose().mul(&lp);
        let right = t.g(i).mul(&rel.delta.block(n - i));
        if left != right {
            rep.fail_at("D_L′∘ι = δ-transpose∘D_bdry", i, "square does not commute");
        }
        let left = rel.j.block(i).transpose().mul(&g.lefschetz.block(i));
        let right = lp.mul(&rel.j.block(n - i));
        if left != right {
            rep.fail_at("D_L∘j = j-transpose∘D_L′", i, "square does not commute");
        }
    }
    let mut les = ValidationReport::default();
    exact_pairs(&mut les, "exactness at B", &rel.delta, &g.iota, lo, hi);
    exact_pairs(&mut les, "exactness at M", &g.iota, &rel.j, lo, hi);
    exact_pairs(&mut les, "exactness at R", &rel.j, &rel.delta, lo, hi);
    if !les.is_valid() {
        rep.push("canonical model", None, "long exact sequence of the split cone failed its self-test");
        rep.extend(les);
    }
    rep
}

/// The algebraic intersection space for one perversity, at homology level.
#[derive(Clone, Debug)]
pub struct IxModel {
    pub perversity: Perversity,
    pub dimension: i32,
    pub witt: bool,
    /// `(H(A), f_*)` as a zero-differential approximation.
    pub formal: Approximation,
    pub cone: ConeData,
    /// Split cone on `φ = ι∘f_*`; its homology is `H_ix`.
    pub ix: SplitCone,
    pub rel: RelativeModel,
    pub boundary: GradedSpace,
    pub complement: GradedSpace,
    pub iota: GradedMap,
    /// `f_*: H(A) → B`.
    pub f: GradedMap,
    pub phi: GradedMap,
    pub u: GradedMap,
    pub v: GradedMap,
    pub h: GradedMap,
    /// Shift −1 into `H(A)`.
    pub g: GradedMap,
    pub ell: GradedMap,
    pub j: GradedMap,
    pub delta: GradedMap,
    /// `R → H(cf)[−1]`.
    pub connecting: GradedMap,
    pub bdry_pairing: GradedPairing,
    pub lefschetz: GradedPairing,
}

impl IxModel {
    pub fn h_ix(&self) -> &GradedSpace {
        self.ix.space()
    }

    pub fn a_space(&self) -> &GradedSpace {
        self.formal.space()
    }

    /// Lefschetz block `L_r: R_r × M_{N−r}`.
    pub fn l(&self, r: i32) -> RationalMatrix {
        self.lefschetz.block(r).into_owned()
    }
}

fn block_diag(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    RationalMatrix::block(&[a.rows(), b.rows()], &[a.cols(), b.cols()], &[vec![Some(a), None], vec![None, Some(b)]])
}

fn must(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(format!("intersection space relation failed: {what}")))
    }
}

pub fn intersection_space(t: &TubeDatum, gd: &GlobalDatum, a: &Approximation) -> Result<IxModel> {
    let rep = validate_global(t, gd);
    if !rep.is_valid() {
        return Err(Error::Precondition(format!("global datum invalid: {}", rep.to_text().trim())));
    }
    let cd0 = cone_data(t, a)?;
    let hom_space = cd0.hom_a.space.clone();
    let formal = Approximation {
        perversity: a.perversity,
        complex: ChainComplex::zero_differential(&hom_space),
        f: cd0.f_star.clone(),
    };
    let cone = cone_data(t, &formal)?;
    let b = t.boundary.clone();
    let m = gd.complement.clone();
    let asp = formal.space().clone();
    let f = cone.f_star.clone();
    let iota = gd.iota.clone();
    let phi = iota.compose(&f)?;
    let ix = SplitCone::new(&phi)?;
    let rel = RelativeModel::new(&iota)?;

    ix.model.check_against(&ix.cone)?;
    must(homology(&ix.cone).space.same_dims(ix.space()), "split cone dims agree with generic homology")?;

    let za = ChainComplex::zero_differential(&asp);
    let zm = ChainComplex::zero_differential(&m);
    let zb = ChainComplex::zero_differential(&b);
    let cf_cx = cone.model.section.target().clone();
    let cf_cone = crate::graded::mapping_cone(&ChainMap::new(za.clone(), zb.clone(), f.clone())?)?;
    debug_assert!(cf_cx.same_dims(cf_cone.space()));
    let ixs = ix.cone.space().clone();
    let rels = rel.split.cone.space().clone();

    let u_chain = GradedMap::from_fn(cf_cone.space(), &ixs, 0, |i| {
        block_diag(&iota.block(i), &RationalMatrix::identity(asp.dim(i - 1)))
    });
    let v_chain = GradedMap::from_fn(&ixs, &rels, 0, |i| block_diag(&RationalMatrix::identity(m.dim(i)), &f.block(i - 1)));
    let h_chain = GradedMap::from_fn(&m, &ixs, 0, |i| {
        RationalMatrix::identity(m.dim(i)).vcat(&RationalMatrix::zeros(asp.dim(i - 1), m.dim(i)))
    });
    let g_chain = GradedMap::from_fn(&ixs, &asp, -1, |i| {
        RationalMatrix::zeros(asp.dim(i - 1), m.dim(i)).hcat(&RationalMatrix::identity(asp.dim(i - 1)))
    });
    let conn_chain = GradedMap::from_fn(&rels, cf_cone.space(), -1, |i| {
        let top = RationalMatrix::zeros(b.dim(i - 1), m.dim(i)).hcat(&RationalMatrix::identity(b.dim(i - 1)));
        top.vcat(&RationalMatrix::zeros(asp.dim(i - 2), m.dim(i) + b.dim(i - 1)))
    });
    let cf_bottom = GradedMap::from_fn(cf_cone.space(), &asp, -1, |i| {
        RationalMatrix::zeros(asp.dim(i - 1), b.dim(i)).hcat(&RationalMatrix::identity(asp.dim(i - 1)))
    });

    let id_m = HomologyModel::identity(&m);
    let id_a = HomologyModel::identity(&asp);
    let u = induced_on_homology(&ChainMap::new(cf_cone.clone(), ix.cone.clone(), u_chain)?, &cone.model, &ix.model)?;
    let v = induced_on_homology(&ChainMap::new(ix.cone.clone(), rel.split.cone.clone(), v_chain)?, &ix.model, &rel.split.model)?;
    let h = induced_on_homology(&ChainMap::new(zm, ix.cone.clone(), h_chain)?, &id_m, &ix.model)?;
    let g = induced_on_homology(&ChainMap::new(ix.cone.clone(), za.clone(), g_chain)?, &ix.model, &id_a)?;
    let connecting =
        induced_on_homology(&ChainMap::new(rel.split.cone.clone(), cf_cone.clone(), conn_chain)?, &rel.split.model, &cone.model)?;
    let cf_to_a = induced_on_homology(&ChainMap::new(cf_cone, za, cf_bottom)?, &cone.model, &id_a)?;
    let ell = cone.ell.clone();
    let j = rel.j.clone();
    let delta = rel.delta.clone();

    must(connecting.equals(&ell.compose(&delta)?), "(1) ∂ = ℓ∘δ")?;
    must(cf_to_a.equals(&g.compose(&u)?) && cf_to_a.is_zero(), "(2) H(cf) → A[−1] equals g∘u = 0")?;
    must(j.equals(&v.compose(&h)?), "(3) j = v∘h")?;
    must(u.compose(&ell)?.equals(&h.compose(&iota)?), "(4) u∘ℓ = h∘ι")?;
    must(delta.compose(&v)?.equals(&f.compose(&g)?), "(5) δ∘v = f∘g")?;

    let (lo, hi) = window(&[&b, &m, &asp]);
    let mut les = ValidationReport::default();
    exact_pairs(&mut les, "H(cf) → H_ix → R at H_ix", &u, &v, lo, hi);
    exact_pairs(&mut les, "at R", &v, &connecting, lo, hi);
    exact_pairs(&mut les, "at H(cf)", &connecting, &u, lo, hi);
    exact_pairs(&mut les, "M → H_ix → A[−1] at H_ix", &h, &g, lo, hi);
    exact_pairs(&mut les, "at A", &g, &phi, lo, hi);
    exact_pairs(&mut les, "at M", &phi, &h, lo, hi);
    must(les.is_valid(), &les.to_text())?;

    Ok(IxModel {
        perversity: a.perversity,
        dimension: t.dimension,
        witt: t.witt,
        formal,
        cone,
        ix,
        rel,
        boundary: b,
        complement: m,
        iota,
        f,
        phi,
        u,
        v,
        h,
        g,
        ell,
        j,
        delta,
        connecting,
        bdry_pairing: t.bdry_pairing.clone(),
        lefschetz: gd.lefschetz.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::default_approximation;
    use crate::fixtures::pinched_torus;

    #[test]
    fn fixture_global_valid_and_homology() {
        let inst = pinched_torus();
        assert!(validate_global(&inst.tube, &inst.global).is_valid());
        let a = default_approximation(&inst.tube, Perversity::P).unwrap();
        let ix = intersection_space(&inst.tube, &inst.global, &a).unwrap();
        assert_eq!(ix.h_ix().dims_over(0, 4), vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn sign_flipped_lefschetz_rejected() {
        let mut inst = pinched_torus();
        let blk = inst.global.lefschetz.block_mut(3).unwrap();
        *blk = blk.neg();
        assert!(!validate_global(&inst.tube, &inst.global).is_valid());
    }
}

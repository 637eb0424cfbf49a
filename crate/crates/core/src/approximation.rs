//! Intersection approximations `(A, f)` and everything built from their cones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{homology, induced_on_homology, mapping_cone, ChainComplex, ChainMap, GradedMap, GradedPairing, GradedSpace, HomologyModel};
use crate::linalg::{subspace_annihilator, RationalMatrix, Subspace};
use crate::report::ValidationReport;
use crate::tube::{compute_zy, Perversity, TubeDatum, ZyData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    pub perversity: Perversity,
    pub complex: ChainComplex,
    /// Degree-0 map `A → B`.
    pub f: GradedMap,
}

impl Approximation {
    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    /// Dimensions of `H(A)` over `lo..=hi`.
    pub fn homology_dims(&self, lo: i32, hi: i32) -> Vec<usize> {
        homology(&self.complex).space.dims_over(lo, hi)
    }
}

/// `A_i` is the pivot complement of `Y_{i+1}` inside `B_i`, `f` the inclusion.
pub fn default_approximation(t: &TubeDatum, pv: Perversity) -> Result<Approximation> {
    let zy = compute_zy(t, pv)?;
    Ok(from_subspaces(t, pv, |i| zy.y_in_b_at(i).pivot_complement()))
}

fn from_subspaces(t: &TubeDatum, pv: Perversity, mut pick: impl FnMut(i32) -> Subspace) -> Approximation {
    let b = &t.boundary;
    let subs: BTreeMap<i32, Subspace> = b.degrees().map(|i| (i, pick(i))).collect();
    let a = GradedSpace::new(b.min_degree(), b.degrees().map(|i| subs[&i].dim()).collect());
    let f = GradedMap::from_fn(&a, b, 0, |i| subs[&i].basis().clone());
    Approximation { perversity: pv, complex: ChainComplex::zero_differential(&a), f }
}

pub fn check_approximation(t: &TubeDatum, a: &Approximation) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if a.f.shift() != 0 || !a.f.source().same_dims(a.space()) || !a.f.target().same_dims(&t.boundary) {
        rep.push("structure", None, "f must be a degree-0 map A → B");
        return rep;
    }
    let (lo, hi) = t.degree_window();
    let lo = lo.min(a.space().min_degree() - 1);
    let hi = hi.max(a.space().max_degree() + 1);
    for i in lo..=hi {
        if !a.complex.d(i - 1).mul(&a.complex.d(i)).is_zero() {
            rep.fail_at("d∘d = 0", i, "differential squares to a nonzero map");
        }
        if !a.f.block(i - 1).mul(&a.complex.d(i)).is_zero() {
            rep.fail_at("chain map", i, "f∘d ≠ 0 into the zero-differential boundary");
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    let zy = match compute_zy(t, a.perversity) {
        Ok(z) => z,
        Err(e) => {
            rep.push("datum", None, e.to_string());
            return rep;
        }
    };
    let h = homology(&a.complex);
    for i in lo..=hi {
        let fstar = a.f.block(i).mul(&h.section.block(i));
        let to_z = zy.b_to_z.block(i).mul(&fstar);
        let (hd, zd) = (h.space.dim(i), zy.z.get(&i).map_or(0, Subspace::dim));
        if hd != zd || to_z.rank() != hd {
            rep.fail_at("H(A) ≅ Z", i, format!("H(A) has dimension {hd}, Z has dimension {zd}, composite rank {}", to_z.rank()));
        }
    }
    rep
}

/// Homology of the cone on `f` with its canonical maps.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub perversity: Perversity,
    pub h_cf: GradedSpace,
    pub model: HomologyModel,
    /// `ℓ: B → H(cf)`.
    pub ell: GradedMap,
    /// Basis of `Y_{i+1} ⊂ B_i` as a map from `Y_{•+1}` to `B`.
    pub y_in_b: GradedMap,
    /// `Y_{i+1} → B_i → H_i(cf)`, bijective in every degree.
    pub bdry_iso: GradedMap,
    pub hom_a: HomologyModel,
    /// `f_*: H(A) → B`.
    pub f_star: GradedMap,
}

pub fn cone_data(t: &TubeDatum, a: &Approximation) -> Result<ConeData> {
    let rep = check_approximation(t, a);
    if !rep.is_valid() {
        return Err(Error::Precondition(format!("approximation invalid: {}", rep.to_text().trim())));
    }
    let zy = compute_zy(t, a.perversity)?;
    cone_data_unchecked(t, a, &zy)
}

pub(crate) fn cone_data_unchecked(t: &TubeDatum, a: &Approximation, zy: &ZyData) -> Result<ConeData> {
    let b = &t.boundary;
    let zb = ChainComplex::zero_differential(b);
    let fmap = ChainMap::new(a.complex.clone(), zb.clone(), a.f.clone())?;
    let cone = mapping_cone(&fmap)?;
    let model = homology(&cone);
    let hom_a = homology(&a.complex);
    let f_star = induced_on_homology(&fmap, &hom_a, &HomologyModel::identity(b))?;

    let incl = GradedMap::from_fn(b, cone.space(), 0, |i| {
        let bi = b.dim(i);
        RationalMatrix::identity(bi).vcat(&RationalMatrix::zeros(a.space().dim(i - 1), bi))
    });
    let ell = induced_on_homology(&ChainMap::new(zb, cone.clone(), incl)?, &HomologyModel::identity(b), &model)?;

    let yspace = GradedSpace::new(b.min_degree(), b.degrees().map(|i| zy.y_in_b_at(i).dim()).collect());
    let y_in_b = GradedMap::from_fn(&yspace, b, 0, |i| {
        let s = zy.y_in_b_at(i);
        if s.dim() == 0 {
            RationalMatrix::zeros(b.dim(i), 0)
        } else {
            s.basis().clone()
        }
    });
    let bdry_iso = ell.compose(&y_in_b)?;
    let (lo, hi) = (b.min_degree().min(model.space.min_degree()), b.max_degree().max(model.space.max_degree()));
    for i in lo..=hi {
        let m = bdry_iso.block(i);
        if m.rows() != model.space.dim(i) || !m.is_invertible() {
            return Err(Error::Internal(format!("Y_{} → H_{i}(cf) is not bijective", i + 1)));
        }
    }
    if !ell.is_surjective() {
        return Err(Error::Internal("ℓ is not surjective".into()));
    }
    if !f_star.is_injective() {
        return Err(Error::Internal("f_* is not injective".into()));
    }
    Ok(ConeData { perversity: a.perversity, h_cf: model.space.clone(), model, ell, y_in_b, bdry_iso, hom_a, f_star })
}

/// `Λ_r = β_r^{−ᵀ} Y_rᵀ G_r F^q_{N−1−r}` pairing `H_r(cf^p)` with `H_{N−1−r}(A^q)`.
pub(crate) fn local_duality_from(n: i32, bdry: &GradedPairing, cd_p: &ConeData, f_q: &GradedMap) -> Result<GradedPairing> {
    let right = f_q.source().clone();
    let left = cd_p.h_cf.clone();
    let mut blocks = BTreeMap::new();
    for r in left.degrees() {
        let beta = cd_p.bdry_iso.block(r);
        let inv_t = beta.inverse().ok_or_else(|| Error::Internal(format!("bdry_iso not invertible at {r}")))?.transpose();
        let lam = inv_t.mul(&cd_p.y_in_b.block(r).transpose()).mul(&bdry.block(r)).mul(&f_q.block(n - 1 - r));
        blocks.insert(r, lam);
    }
    let pairing = GradedPairing::new(left, right, n - 1, blocks)?;
    if let Some(r) = pairing.degenerate_degrees().first() {
        return Err(Error::Internal(format!("local duality pairing degenerate at degree {r}")));
    }
    Ok(pairing)
}

pub fn local_duality_iso(t: &TubeDatum, a_p: &Approximation, a_q: &Approximation) -> Result<GradedPairing> {
    let cd_p = cone_data(t, a_p)?;
    let cd_q = cone_data(t, a_q)?;
    local_duality_from(t.dimension, &t.bdry_pairing, &cd_p, &cd_q.f_star)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRow {
    pub degree: i32,
    pub diagram_method: bool,
    pub pairing_method: bool,
}

/// Both obstruction tests per boundary degree; disagreement is an internal error.
pub fn obstructions_vanish(t: &TubeDatum, a_p: &Approximation, a_q: &Approximation) -> Result<Vec<ObstructionRow>> {
    let cd_p = cone_data(t, a_p)?;
    let cd_q = cone_data(t, a_q)?;
    obstruction_rows(t, &cd_p, &cd_q)
}

pub(crate) fn obstruction_rows(t: &TubeDatum, cd_p: &ConeData, cd_q: &ConeData) -> Result<Vec<ObstructionRow>> {
    let n = t.dimension;
    let lam = local_duality_from(n, &t.bdry_pairing, cd_p, &cd_q.f_star)?;
    let mut rows = Vec::new();
    for r in t.boundary.degrees() {
        let fq = cd_q.f_star.block(n - 1 - r);
        let g = t.g(r);
        let diagram = g.mul(&fq) == cd_p.ell.block(r).transpose().mul(&lam.block(r));
        let pairing = cd_p.f_star.block(r).transpose().mul(&g).mul(&fq).is_zero();
        if diagram != pairing {
            return Err(Error::Internal(format!("obstruction methods disagree at degree {r}")));
        }
        rows.push(ObstructionRow { degree: r, diagram_method: diagram, pairing_method: pairing });
    }
    Ok(rows)
}

pub fn all_vanish(rows: &[ObstructionRow]) -> bool {
    rows.iter().all(|r| r.diagram_method && r.pairing_method)
}

/// Keeps `A_r` for `r < m = N/2` and replaces `A_s`, `s ≥ m`, by the
/// annihilator of `A_{N−1−s}` under `D_bdry`.
pub fn witt_approximation(t: &TubeDatum) -> Result<Approximation> {
    if !t.witt {
        return Err(Error::Precondition("witt_approximation needs a Witt datum".into()));
    }
    let n = t.dimension;
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("witt_approximation needs even dimension, got {n}")));
    }
    let m = n / 2;
    let zy = compute_zy(t, Perversity::P)?;
    let base = default_approximation(t, Perversity::P)?;
    let keep = |i: i32| Subspace::span(&base.f.block(i));
    let out = from_subspaces(t, Perversity::P, |s| {
        if s < m {
            return keep(s);
        }
        let r = n - 1 - s;
        subspace_annihilator(&keep(r), &t.g(r)).expect("shapes agree on a valid datum")
    });
    for s in t.boundary.degrees().filter(|&s| s >= m) {
        let a_s = Subspace::span(&out.f.block(s));
        let y = zy.y_in_b_at(s);
        let z = zy.z.get(&s).map_or(0, Subspace::dim);
        if y.dim() > 0 && !a_s.is_independent_of(&y) {
            return Err(Error::Internal(format!("replacement A_{s} meets Y_{}", s + 1)));
        }
        if a_s.dim() != z {
            return Err(Error::Internal(format!("replacement A_{s} has dimension {} but Z_{s} has {z}", a_s.dim())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::pinched_torus;

    #[test]
    fn fixture_default_and_cone() {
        let inst = pinched_torus();
        let t = &inst.tube;
        let a = default_approximation(t, Perversity::P).unwrap();
        assert_eq!(a.space().dims_over(0, 3), vec![1, 0, 1, 0]);
        assert!(check_approximation(t, &a).is_valid());
        let cd = cone_data(t, &a).unwrap();
        assert_eq!(cd.h_cf.dims_over(0, 3), vec![0, 1, 0, 1]);
        let rows = obstructions_vanish(t, &a, &a).unwrap();
        assert!(all_vanish(&rows));
    }

    #[test]
    fn zero_approximation_fails_where_z_nonzero() {
        let inst = pinched_torus();
        let t = &inst.tube;
        let zero = GradedSpace::zero(0, 3);
        let a = Approximation {
            perversity: Perversity::P,
            complex: ChainComplex::zero_differential(&zero),
            f: GradedMap::zero(&zero, &t.boundary, 0),
        };
        let rep = check_approximation(t, &a);
        let degs: Vec<i32> = rep.failures.iter().filter_map(|f| f.degree).collect();
        assert_eq!(degs, vec![0, 2]);
    }

    #[test]
    fn extra_vector_in_degree_one_fails() {
        let inst = pinched_torus();
        let t = &inst.tube;
        let a = default_approximation(t, Perversity::P).unwrap();
        let space = GradedSpace::new(0, vec![1, 1, 1, 0]);
        let f = GradedMap::from_fn(&space, &t.boundary, 0, |i| {
            if i == 1 {
                RationalMatrix::identity(1)
            } else {
                a.f.block(i).into_owned()
            }
        });
        let bad = Approximation { perversity: Perversity::P, complex: ChainComplex::zero_differential(&space), f };
        let rep = check_approximation(t, &bad);
        assert_eq!(rep.failures.iter().filter_map(|f| f.degree).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn witt_on_fixture_matches_dims() {
        let inst = pinched_torus();
        let w = witt_approximation(&inst.tube).unwrap();
        assert_eq!(w.space().dims_over(0, 3), vec![1, 0, 1, 0]);
        assert!(all_vanish(&obstructions_vanish(&inst.tube, &w, &w).unwrap()));
    }
}

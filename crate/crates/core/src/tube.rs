//! The local ladder around the singular set: boundary homology, absolute and
//! relative intersection homology for two perversities, connecting maps and
//! the three duality pairings.
//!
//! Conventions. `D_bdry` has blocks `G_i: B_i × B_{N−1−i}` with
//! `G_{N−1−i} = (−1)^{i(N−1−i)} G_iᵀ`. The stored absolute/relative block
//! `E^π_i` pairs `P^π_i` with `P_rel^ρ_{N−i}` (ρ the complementary label);
//! the relative/absolute pairing of `P_rel^π_k` with `P^ρ_{N−k}` is then
//! `F^π_k = (−1)^{(k−1)(N−k)} (E^ρ_{N−k})ᵀ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedPairing, GradedSpace};
use crate::linalg::rational::parity_sign;
use crate::linalg::{RationalMatrix, Subspace};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perversity {
    P,
    Q,
}

impl Perversity {
    pub fn other(self) -> Self {
        match self {
            Perversity::P => Perversity::Q,
            Perversity::Q => Perversity::P,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Perversity::P => "p",
            Perversity::Q => "q",
        }
    }
}

/// One perversity's row of the ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub absolute: GradedSpace,
    pub relative: GradedSpace,
    pub b_to_p: GradedMap,
    pub p_to_rel: GradedMap,
    /// Shift −1: `P_rel_i → B_{i−1}`.
    pub rel_bdry: GradedMap,
    /// `P_i` (this label) against `P_rel_{N−i}` (the other label), total `N`.
    pub abs_rel: GradedPairing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeDatum {
    pub dimension: i32,
    pub witt: bool,
    pub boundary: GradedSpace,
    /// Total `N − 1`.
    pub bdry_pairing: GradedPairing,
    pub p: Ladder,
    /// Identical to `p` for Witt data.
    pub q: Ladder,
}

impl TubeDatum {
    pub fn ladder(&self, pv: Perversity) -> &Ladder {
        match pv {
            Perversity::P => &self.p,
            Perversity::Q => &self.q,
        }
    }

    /// `G_i`, pairing `B_i` with `B_{N−1−i}`.
    pub fn g(&self, i: i32) -> RationalMatrix {
        self.bdry_pairing.block(i).into_owned()
    }

    /// Relative/absolute pairing `F^π_k: P_rel^π_k × P^ρ_{N−k}`.
    pub fn rel_abs(&self, pv: Perversity, k: i32) -> RationalMatrix {
        let n = self.dimension;
        let e = self.ladder(pv.other()).abs_rel.block(n - k);
        e.transpose().scale(&parity_sign(((k - 1) * (n - k)) as i64))
    }

    /// Degree window that covers every nonzero block with one degree of margin.
    pub fn degree_window(&self) -> (i32, i32) {
        let spaces = [&self.boundary, &self.p.absolute, &self.p.relative, &self.q.absolute, &self.q.relative];
        let lo = spaces.iter().map(|s| s.min_degree()).min().unwrap();
        let hi = spaces.iter().map(|s| s.max_degree()).max().unwrap();
        (lo - 1, hi + 1)
    }
}

/// Sign in `G_{N−1−i} = σ_i G_iᵀ`.
pub fn bdry_symmetry_sign(n: i32, i: i32) -> i64 {
    if (i * (n - 1 - i)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Describes a failure of exactness of `incoming` followed by `outgoing` at a
/// space of dimension `dim`, if any.
pub(crate) fn exactness_defect(incoming: &RationalMatrix, outgoing: &RationalMatrix) -> Option<String> {
    if !outgoing.mul(incoming).is_zero() {
        return Some("composite is nonzero".into());
    }
    let ker = outgoing.cols() - outgoing.rank();
    let im = incoming.rank();
    (ker != im).then(|| format!("kernel has dimension {ker} but image has dimension {im}"))
}

fn check_map(rep: &mut ValidationReport, name: &str, m: &GradedMap, src: &GradedSpace, tgt: &GradedSpace, shift: i32) {
    if m.shift() != shift {
        rep.push("structure", None, format!("{name} has shift {} instead of {shift}", m.shift()));
    }
    if !m.source().same_dims(src) || !m.target().same_dims(tgt) {
        rep.push("structure", None, format!("{name} does not map between the declared spaces"));
    }
}

fn check_pairing(rep: &mut ValidationReport, name: &str, p: &GradedPairing, l: &GradedSpace, r: &GradedSpace, total: i32) {
    if p.total() != total {
        rep.push("structure", None, format!("{name} has total degree {} instead of {total}", p.total()));
    }
    if !p.left().same_dims(l) || !p.right().same_dims(r) {
        rep.push("structure", None, format!("{name} does not pair the declared spaces"));
    }
}

fn structure(t: &TubeDatum) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = t.dimension;
    if n < 2 {
        rep.push("structure", None, format!("dimension {n} is below 2"));
    }
    if t.witt && t.p != t.q {
        rep.push("structure", None, "witt datum with differing perversity data");
    }
    check_pairing(&mut rep, "D_bdry", &t.bdry_pairing, &t.boundary, &t.boundary, n - 1);
    for pv in [Perversity::P, Perversity::Q] {
        let l = t.ladder(pv);
        let o = t.ladder(pv.other());
        let tag = |s: &str| format!("{s}({})", pv.label());
        check_map(&mut rep, &tag("b_to_p"), &l.b_to_p, &t.boundary, &l.absolute, 0);
        check_map(&mut rep, &tag("p_to_rel"), &l.p_to_rel, &l.absolute, &l.relative, 0);
        check_map(&mut rep, &tag("rel_bdry"), &l.rel_bdry, &l.relative, &t.boundary, -1);
        check_pairing(&mut rep, &tag("D_abs_rel"), &l.abs_rel, &l.absolute, &o.relative, n);
    }
    rep
}

pub fn validate_tube(t: &TubeDatum) -> ValidationReport {
    let mut rep = structure(t);
    if !rep.is_valid() {
        return rep;
    }
    let n = t.dimension;
    let (lo, hi) = t.degree_window();

    for i in t.bdry_pairing.degenerate_degrees() {
        rep.fail_at("D_bdry nondegenerate", i, "block is not square invertible");
    }
    for i in lo..=hi {
        let want = t.g(i).transpose().scale(&crate::linalg::rational::int(bdry_symmetry_sign(n, i)));
        if t.g(n - 1 - i) != want {
            rep.fail_at("D_bdry symmetry", i, format!("G_{} ≠ ±G_{i}ᵀ", n - 1 - i));
        }
    }

    for pv in [Perversity::P, Perversity::Q] {
        if t.witt && pv == Perversity::Q {
            break;
        }
        let l = t.ladder(pv);
        let o = t.ladder(pv.other());
        let lab = pv.label();
        for i in l.abs_rel.degenerate_degrees() {
            rep.fail_at(&format!("D_abs_rel({lab}) nondegenerate"), i, "block is not square invertible");
        }
        for i in lo..=hi {
            let slots = [
                ("B", exactness_defect(&l.rel_bdry.block(i + 1), &l.b_to_p.block(i))),
                ("P", exactness_defect(&l.b_to_p.block(i), &l.p_to_rel.block(i))),
                ("P_rel", exactness_defect(&l.p_to_rel.block(i), &l.rel_bdry.block(i))),
            ];
            for (slot, defect) in slots {
                if let Some(d) = defect {
                    rep.fail_at(&format!("exactness({lab}) at {slot}"), i, d);
                }
            }

            let e = l.abs_rel.block(i);
            let f = t.rel_abs(pv, i);
            let sq1_l = l.b_to_p.block(i).transpose().mul(&e);
            let sq1_r = t.g(i).mul(&o.rel_bdry.block(n - i));
            if sq1_l != sq1_r {
                rep.fail_at(&format!("ladder({lab}) B→P square"), i, "does not commute");
            }
            let sq2_l = l.p_to_rel.block(i).transpose().mul(&f);
            let sq2_r = e.mul(&o.p_to_rel.block(n - i));
            if sq2_l != sq2_r {
                rep.fail_at(&format!("ladder({lab}) P→P_rel square"), i, "does not commute");
            }
            let sq3_l = l.rel_bdry.block(i).transpose().mul(&t.g(i - 1));
            let sq3_r = f.mul(&o.b_to_p.block(n - i));
            if sq3_l != sq3_r {
                rep.fail_at(&format!("ladder({lab}) P_rel→B square"), i, "does not commute");
            }
        }
    }
    rep
}

/// Subquotients of one perversity's ladder.
#[derive(Clone, Debug)]
pub struct ZyData {
    pub perversity: Perversity,
    /// `Z_i = im(B_i → P_i)`, keyed by degree.
    pub z: BTreeMap<i32, Subspace>,
    /// `Y_i = coker(P_i → P_rel_i)`.
    pub y: GradedSpace,
    /// Reads `Y_i` coordinates off `P_rel_i`, vanishing on the image of `P_i`.
    pub y_projection: GradedMap,
    /// `Y_{i+1} ↪ B_i`, keyed by the boundary degree `i`.
    pub y_in_b: BTreeMap<i32, Subspace>,
    /// `B_i → Z_i` in the coordinates of the `z` bases.
    pub b_to_z: GradedMap,
}

impl ZyData {
    pub fn z_dims(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|i| self.z.get(&i).map_or(0, Subspace::dim)).collect()
    }

    pub fn y_in_b_at(&self, i: i32) -> Subspace {
        self.y_in_b.get(&i).cloned().unwrap_or_else(|| Subspace::zero(0))
    }
}

pub fn compute_zy(t: &TubeDatum, pv: Perversity) -> Result<ZyData> {
    let zy = compute_zy_unchecked(t, pv);
    let other = compute_zy_unchecked(t, pv.other());
    let n = t.dimension;
    let (lo, hi) = t.degree_window();
    for i in lo..=hi {
        let b = t.boundary.dim(i);
        let y_in = zy.y_in_b_at(i);
        let z = zy.z.get(&i).map_or(0, Subspace::dim);
        if y_in.dim() + z != b {
            return Err(Error::Invalid(format!("0 → Y_{} → B_{i} → Z_{i} → 0 fails dimension count", i + 1)));
        }
        let ker = Subspace::from_independent(zy_map(t, pv, i).kernel_matrix());
        if b > 0 && !ker.same_as(&y_in) {
            return Err(Error::Invalid(format!("Y_{} is not ker(B_{i} → Z_{i})", i + 1)));
        }
        let z_other = other.z.get(&(n - i)).map_or(0, Subspace::dim);
        if zy.y.dim(i) != z_other {
            return Err(Error::Invalid(format!("dim Y_{i} ≠ dim Z_{} of the dual perversity", n - i)));
        }
        let y_dual = other.y_in_b_at(n - 1 - i);
        if y_in.dim() > 0 && y_dual.dim() > 0 && !y_in.basis().transpose().mul(&t.g(i)).mul(y_dual.basis()).is_zero() {
            return Err(Error::Invalid(format!("D_bdry does not vanish on Y_{} × Y_{} images", i + 1, n - i)));
        }
    }
    Ok(zy)
}

fn zy_map(t: &TubeDatum, pv: Perversity, i: i32) -> RationalMatrix {
    t.ladder(pv).b_to_p.block(i).into_owned()
}

fn compute_zy_unchecked(t: &TubeDatum, pv: Perversity) -> ZyData {
    let l = t.ladder(pv);
    let mut z = BTreeMap::new();
    for i in l.absolute.degrees() {
        z.insert(i, Subspace::span(&l.b_to_p.block(i)));
    }
    let mut y_dims = Vec::new();
    let mut y_proj = Vec::new();
    for i in l.relative.degrees() {
        let im = Subspace::span(&l.p_to_rel.block(i));
        let comp = im.pivot_complement().into_basis();
        let t_basis = im.basis().hcat(&comp);
        let inv = t_basis.inverse().expect("adapted basis");
        y_proj.push(inv.submatrix(im.dim()..t_basis.cols(), 0..t_basis.cols()));
        y_dims.push(comp.cols());
    }
    let y = GradedSpace::new(l.relative.min_degree(), y_dims);
    let mut it = y_proj.into_iter();
    let y_projection = GradedMap::from_fn(&l.relative, &y, 0, |_| it.next().unwrap());
    let mut y_in_b = BTreeMap::new();
    for i in t.boundary.degrees() {
        y_in_b.insert(i, Subspace::span(&l.rel_bdry.block(i + 1)));
    }
    let zspace = GradedSpace::new(
        t.boundary.min_degree(),
        t.boundary.degrees().map(|i| z.get(&i).map_or(0, Subspace::dim)).collect(),
    );
    let b_to_z = GradedMap::from_fn(&t.boundary, &zspace, 0, |i| match z.get(&i) {
        Some(s) => s.coordinates_of(&l.b_to_p.block(i)).expect("image lies in Z"),
        None => RationalMatrix::zeros(0, t.boundary.dim(i)),
    });
    ZyData { perversity: pv, z, y, y_projection, y_in_b, b_to_z }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty(n: i32) -> TubeDatum {
        let s = GradedSpace::zero(0, n);
        let ladder = Ladder {
            absolute: s.clone(),
            relative: s.clone(),
            b_to_p: GradedMap::zero(&s, &s, 0),
            p_to_rel: GradedMap::zero(&s, &s, 0),
            rel_bdry: GradedMap::zero(&s, &s, -1),
            abs_rel: GradedPairing::from_fn(&s, &s, n, |_| RationalMatrix::zeros(0, 0)),
        };
        TubeDatum {
            dimension: n,
            witt: true,
            boundary: s.clone(),
            bdry_pairing: GradedPairing::from_fn(&s, &s, n - 1, |_| RationalMatrix::zeros(0, 0)),
            p: ladder.clone(),
            q: ladder,
        }
    }

    #[test]
    fn empty_datum_is_valid() {
        let t = empty(4);
        assert!(validate_tube(&t).is_valid());
        let zy = compute_zy(&t, Perversity::P).unwrap();
        assert!(zy.y.is_zero());
    }

    #[test]
    fn symmetry_sign() {
        assert_eq!(bdry_symmetry_sign(4, 1), 1);
        assert_eq!(bdry_symmetry_sign(3, 1), -1);
        assert_eq!(bdry_symmetry_sign(5, 1), -1);
        assert_eq!(bdry_symmetry_sign(5, 2), 1);
    }

    #[test]
    fn nonzero_boundary_without_ih_is_invalid() {
        let mut t = empty(2);
        let b = GradedSpace::new(0, vec![1, 0, 0]);
        t.boundary = b.clone();
        let s = t.p.absolute.clone();
        t.bdry_pairing = GradedPairing::from_fn(&b, &b, 1, |i| RationalMatrix::zeros(b.dim(i), b.dim(1 - i)));
        for l in [&mut t.p, &mut t.q] {
            l.b_to_p = GradedMap::zero(&b, &s, 0);
            l.rel_bdry = GradedMap::zero(&s, &b, -1);
        }
        let rep = validate_tube(&t);
        assert!(!rep.is_valid());
        assert!(rep.failures.iter().any(|f| f.check.contains("exactness")));
        assert!(rep.failures.iter().any(|f| f.check.contains("D_bdry nondegenerate")));
    }

    #[test]
    fn shape_mismatch_reported() {
        let mut t = empty(4);
        t.p.absolute = GradedSpace::new(0, vec![1, 0, 0, 0, 0]);
        t.witt = false;
        let rep = validate_tube(&t);
        assert!(rep.failures.iter().any(|f| f.check == "structure"));
    }
}

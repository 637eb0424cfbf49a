//! Instance files: the JSON form of a tube datum, its complement, and
//! optional approximations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::approximation::Approximation;
use crate::error::{Error, Result};
use crate::global::{GlobalDatum, RelativeModel};
use crate::graded::{ChainComplex, GradedMap, GradedPairing, GradedSpace};
use crate::linalg::{format_rational, parse_rational, RationalMatrix};
use crate::tube::{Ladder, Perversity, TubeDatum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximations {
    pub p: Approximation,
    /// Absent for Witt data, where `p` serves both labels.
    pub q: Option<Approximation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub min_degree: i32,
    pub max_degree: i32,
    pub tube: TubeDatum,
    pub global: GlobalDatum,
    pub approximations: Option<Approximations>,
}

/// A rational written as a string, or as a bare JSON integer on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Str(String),
    Int(i64),
}

pub type MatrixFile = Vec<Vec<Num>>;
pub type Blocks = BTreeMap<String, MatrixFile>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsFile {
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderFile {
    pub absolute_dims: Vec<usize>,
    pub relative_dims: Vec<usize>,
    #[serde(default)]
    pub b_to_p: Blocks,
    #[serde(default)]
    pub p_to_rel: Blocks,
    #[serde(default)]
    pub rel_bdry: Blocks,
    #[serde(rename = "D_abs_rel", default)]
    pub d_abs_rel: Blocks,
}

/// Witt instances use the flat ladder fields; others use `p` and `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absolute_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_to_p: Option<Blocks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_to_rel: Option<Blocks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_bdry: Option<Blocks>,
    #[serde(rename = "D_bdry", default)]
    pub d_bdry: Blocks,
    #[serde(rename = "D_abs_rel", default, skip_serializing_if = "Option::is_none")]
    pub d_abs_rel: Option<Blocks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<LadderFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<LadderFile>,
}

impl TubeFile {
    fn flat(&self) -> Option<LadderFile> {
        let any = self.absolute_dims.is_some()
            || self.relative_dims.is_some()
            || self.b_to_p.is_some()
            || self.p_to_rel.is_some()
            || self.rel_bdry.is_some()
            || self.d_abs_rel.is_some();
        any.then(|| LadderFile {
            absolute_dims: self.absolute_dims.clone().unwrap_or_default(),
            relative_dims: self.relative_dims.clone().unwrap_or_default(),
            b_to_p: self.b_to_p.clone().unwrap_or_default(),
            p_to_rel: self.p_to_rel.clone().unwrap_or_default(),
            rel_bdry: self.rel_bdry.clone().unwrap_or_default(),
            d_abs_rel: self.d_abs_rel.clone().unwrap_or_default(),
        })
    }

    fn with_flat(d_bdry: Blocks, l: LadderFile) -> Self {
        TubeFile {
            absolute_dims: Some(l.absolute_dims),
            relative_dims: Some(l.relative_dims),
            b_to_p: Some(l.b_to_p),
            p_to_rel: Some(l.p_to_rel),
            rel_bdry: Some(l.rel_bdry),
            d_bdry,
            d_abs_rel: Some(l.d_abs_rel),
            p: None,
            q: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplementFile {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub iota: Blocks,
    #[serde(default)]
    pub lefschetz: Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximationFile {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub f: Blocks,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximationsFile {
    pub p: ApproximationFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ApproximationFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub dimension: i32,
    pub witt: bool,
    pub min_degree: i32,
    pub max_degree: i32,
    pub boundary: DimsFile,
    pub tube: TubeFile,
    pub complement: ComplementFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximations: Option<ApproximationsFile>,
}

fn parse_err(ctx: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{ctx}: {msg}"))
}

fn space(ctx: &str, lo: i32, hi: i32, dims: &[usize]) -> Result<GradedSpace> {
    let want = (hi - lo + 1).max(0) as usize;
    if dims.len() != want {
        return Err(parse_err(ctx, format!("expected {want} dims for degrees {lo}..={hi}, got {}", dims.len())));
    }
    Ok(GradedSpace::new(lo, dims.to_vec()))
}

fn matrix(ctx: &str, rows: &MatrixFile, want: (usize, usize)) -> Result<RationalMatrix> {
    if rows.len() != want.0 {
        return Err(parse_err(ctx, format!("expected a {}x{} block, got {} rows", want.0, want.1, rows.len())));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != want.1 {
            return Err(parse_err(ctx, format!("row {i} has {} entries, expected {}", row.len(), want.1)));
        }
        let mut r = Vec::with_capacity(row.len());
        for (j, x) in row.iter().enumerate() {
            let q = match x {
                Num::Str(s) => parse_rational(s).map_err(|e| parse_err(&format!("{ctx}[{i}][{j}]"), e))?,
                Num::Int(n) => crate::linalg::rational::int(*n),
            };
            r.push(q);
        }
        parsed.push(r);
    }
    RationalMatrix::from_rows(parsed, want.1)
}

fn degree_key(ctx: &str, k: &str) -> Result<i32> {
    k.trim().parse().map_err(|_| parse_err(ctx, format!("block key {k:?} is not a degree")))
}

fn map(ctx: &str, blocks: &Blocks, src: &GradedSpace, tgt: &GradedSpace, shift: i32) -> Result<GradedMap> {
    let mut out = BTreeMap::new();
    for (k, rows) in blocks {
        let i = degree_key(ctx, k)?;
        let c = format!("{ctx}[{k}]");
        out.insert(i, matrix(&c, rows, (tgt.dim(i + shift), src.dim(i)))?);
    }
    GradedMap::new(src.clone(), tgt.clone(), shift, out).map_err(|e| parse_err(ctx, e))
}

fn pairing(ctx: &str, blocks: &Blocks, left: &GradedSpace, right: &GradedSpace, total: i32) -> Result<GradedPairing> {
    let mut out = BTreeMap::new();
    for (k, rows) in blocks {
        let i = degree_key(ctx, k)?;
        let c = format!("{ctx}[{k}]");
        out.insert(i, matrix(&c, rows, (left.dim(i), right.dim(total - i)))?);
    }
    GradedPairing::new(left.clone(), right.clone(), total, out).map_err(|e| parse_err(ctx, e))
}

fn write_matrix(m: &RationalMatrix) -> MatrixFile {
    (0..m.rows()).map(|i| m.row(i).iter().map(|q| Num::Str(format_rational(q))).collect()).collect()
}

fn write_blocks(blocks: BTreeMap<i32, RationalMatrix>) -> Blocks {
    blocks.into_iter().map(|(i, m)| (i.to_string(), write_matrix(&m))).collect()
}

struct Spaces<'a> {
    lo: i32,
    hi: i32,
    n: i32,
    b: &'a GradedSpace,
}

fn read_ladders(ctx: &str, s: &Spaces, files: (&LadderFile, &LadderFile)) -> Result<(Ladder, Ladder)> {
    let (fp, fq) = files;
    let pa = space(&format!("{ctx}.p.absolute_dims"), s.lo, s.hi, &fp.absolute_dims)?;
    let pr = space(&format!("{ctx}.p.relative_dims"), s.lo, s.hi, &fp.relative_dims)?;
    let qa = space(&format!("{ctx}.q.absolute_dims"), s.lo, s.hi, &fq.absolute_dims)?;
    let qr = space(&format!("{ctx}.q.relative_dims"), s.lo, s.hi, &fq.relative_dims)?;
    let one = |lab: &str, f: &LadderFile, abs: &GradedSpace, rel: &GradedSpace, other_rel: &GradedSpace| -> Result<Ladder> {
        let c = |x: &str| format!("{ctx}.{lab}{x}");
        Ok(Ladder {
            absolute: abs.clone(),
            relative: rel.clone(),
            b_to_p: map(&c("b_to_p"), &f.b_to_p, s.b, abs, 0)?,
            p_to_rel: map(&c("p_to_rel"), &f.p_to_rel, abs, rel, 0)?,
            rel_bdry: map(&c("rel_bdry"), &f.rel_bdry, rel, s.b, -1)?,
            abs_rel: pairing(&c("D_abs_rel"), &f.d_abs_rel, abs, other_rel, s.n)?,
        })
    };
    let lab_p = if std::ptr::eq(fp, fq) { "" } else { "p." };
    let lab_q = if std::ptr::eq(fp, fq) { "" } else { "q." };
    Ok((one(lab_p, fp, &pa, &pr, &qr)?, one(lab_q, fq, &qa, &qr, &pr)?))
}

fn read_approximation(ctx: &str, f: &ApproximationFile, pv: Perversity, lo: i32, hi: i32, b: &GradedSpace) -> Result<Approximation> {
    let a = space(&format!("{ctx}.dims"), lo, hi, &f.dims)?;
    let fm = map(&format!("{ctx}.f"), &f.f, &a, b, 0)?;
    let d = map(&format!("{ctx}.differential"), &f.differential, &a, &a, -1)?;
    let complex = ChainComplex::new(d).map_err(|e| parse_err(&format!("{ctx}.differential"), e))?;
    Ok(Approximation { perversity: pv, complex, f: fm })
}

pub fn write_approximation(a: &Approximation) -> ApproximationFile {
    ApproximationFile {
        dims: a.space().dims().to_vec(),
        f: write_blocks(a.f.nonempty_blocks()),
        differential: write_blocks(
            a.complex.differential().nonempty_blocks().into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        ),
    }
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let (lo, hi, n) = (self.min_degree, self.max_degree, self.dimension);
        if hi < lo {
            return Err(parse_err("max_degree", "must be at least min_degree"));
        }
        let b = space("boundary.dims", lo, hi, &self.boundary.dims)?;
        let s = Spaces { lo, hi, n, b: &b };
        let t = &self.tube;
        let flat = t.flat();
        let (p, q) = match (self.witt, &flat, &t.p, &t.q) {
            (true, Some(shared), None, None) => read_ladders("tube", &s, (shared, shared))?,
            (false, None, Some(fp), Some(fq)) => read_ladders("tube", &s, (fp, fq))?,
            (true, _, _, _) => return Err(parse_err("tube", "witt instances carry one flat ladder and no p/q sub-objects")),
            (false, _, _, _) => return Err(parse_err("tube", "non-witt instances need p and q sub-objects and no flat ladder")),
        };
        let bdry_pairing = pairing("tube.D_bdry", &t.d_bdry, &b, &b, n - 1)?;
        let tube = TubeDatum { dimension: n, witt: self.witt, boundary: b.clone(), bdry_pairing, p, q };

        let m = space("complement.dims", lo, hi, &self.complement.dims)?;
        let iota = map("complement.iota", &self.complement.iota, &b, &m, 0)?;
        let rel = RelativeModel::new(&iota)?;
        let lefschetz = pairing("complement.lefschetz", &self.complement.lefschetz, rel.space(), &m, n)?;
        let global = GlobalDatum { complement: m, iota, lefschetz };

        let approximations = match &self.approximations {
            None => None,
            Some(af) => {
                let p = read_approximation("approximations.p", &af.p, Perversity::P, lo, hi, &b)?;
                let q = match (&af.q, self.witt) {
                    (None, _) => None,
                    (Some(_), true) => return Err(parse_err("approximations.q", "witt instances share the p approximation")),
                    (Some(fq), false) => Some(read_approximation("approximations.q", fq, Perversity::Q, lo, hi, &b)?),
                };
                Some(Approximations { p, q })
            }
        };
        Ok(Instance { name: self.name, min_degree: lo, max_degree: hi, tube, global, approximations })
    }
}

fn write_ladder(l: &Ladder) -> LadderFile {
    LadderFile {
        absolute_dims: l.absolute.dims().to_vec(),
        relative_dims: l.relative.dims().to_vec(),
        b_to_p: write_blocks(l.b_to_p.nonempty_blocks()),
        p_to_rel: write_blocks(l.p_to_rel.nonempty_blocks()),
        rel_bdry: write_blocks(l.rel_bdry.nonempty_blocks()),
        d_abs_rel: write_blocks(l.abs_rel.nonempty_blocks()),
    }
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        let t = &self.tube;
        let d_bdry = write_blocks(t.bdry_pairing.nonempty_blocks());
        let tube = if t.witt {
            TubeFile::with_flat(d_bdry, write_ladder(&t.p))
        } else {
            TubeFile { d_bdry, p: Some(write_ladder(&t.p)), q: Some(write_ladder(&t.q)), ..TubeFile::default() }
        };
        InstanceFile {
            name: self.name.clone(),
            dimension: t.dimension,
            witt: t.witt,
            min_degree: self.min_degree,
            max_degree: self.max_degree,
            boundary: DimsFile { dims: t.boundary.dims().to_vec() },
            tube,
            complement: ComplementFile {
                dims: self.global.complement.dims().to_vec(),
                iota: write_blocks(self.global.iota.nonempty_blocks()),
                lefschetz: write_blocks(self.global.lefschetz.nonempty_blocks()),
            },
            approximations: self.approximations.as_ref().map(|a| ApproximationsFile {
                p: write_approximation(&a.p),
                q: a.q.as_ref().map(write_approximation),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("malformed instance JSON at line {}, column {}: {e}", e.line(), e.column())))?;
        file.into_instance()
    }

    /// The approximation supplied for a label, if any.
    pub fn supplied(&self, pv: Perversity) -> Option<&Approximation> {
        let a = self.approximations.as_ref()?;
        match pv {
            Perversity::P => Some(&a.p),
            Perversity::Q if self.tube.witt => Some(&a.p),
            Perversity::Q => a.q.as_ref(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{empty, pinched_torus};

    #[test]
    fn round_trip_fixture() {
        for inst in [pinched_torus(), empty()] {
            let back = Instance::from_json(&inst.to_json()).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&pinched_torus().to_json()).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(Instance::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&pinched_torus().to_json()).unwrap();
        v["tube"]["bogus"] = serde_json::json!({});
        assert!(Instance::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn shape_mismatch_is_a_parse_error() {
        let mut v: serde_json::Value = serde_json::from_str(&pinched_torus().to_json()).unwrap();
        v["tube"]["b_to_p"]["0"] = serde_json::json!([["1", "2"]]);
        let e = Instance::from_json(&v.to_string()).unwrap_err();
        assert!(e.to_string().contains("tube.b_to_p[0]"), "{e}");
    }

    #[test]
    fn malformed_json_reports_location() {
        let e = Instance::from_json("{\n  \"name\": ").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn integers_accepted_as_entries() {
        let mut v: serde_json::Value = serde_json::from_str(&pinched_torus().to_json()).unwrap();
        v["tube"]["b_to_p"]["0"] = serde_json::json!([[1]]);
        assert_eq!(Instance::from_json(&v.to_string()).unwrap(), pinched_torus());
    }
}

//! Seeded generation of valid instances and single-entry mutation.
//!
//! The tube is built in a normal form per label `π` (`ρ` the other):
//! `P_i = Z_i ⊕ Ex_i` and `P_rel_i = Ex_i ⊕ Y_i`, with `b_to_p = [Π; 0]`,
//! `p_to_rel = [[0, I], [0, 0]]` and `rel_bdry = [0 | K_{i−1}]`, where `K_i`
//! is a basis of `ker(B_i → P_i)` and `Π` has kernel `K_i`. Duality forces
//! `K^ρ_{N−1−i}` to be the `G`-annihilator of `K^π_i` and
//! `E^π_i = [[0, X], [Ξ, Ψ]]` with `Πᵀ X = G_i K^ρ_{N−1−i}` and
//! `Ξ^π_i = ε Ξ^ρ_{N−i}ᵀ`. `P` and `P_rel` are then conjugated by random
//! invertible matrices. The boundary needs no conjugation since `G` and the
//! `K` are already random.
//!
//! The complement has `M_i = im ι_i ⊕ J_i`, and the Lefschetz blocks are solved
//! for directly in the canonical coordinates of `R`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::global::{GlobalDatum, RelativeModel};
use crate::graded::{GradedMap, GradedPairing, GradedSpace};
use crate::instance::Instance;
use crate::linalg::rational::{format_rational, frac, parity_sign, parse_rational};
use crate::linalg::{subspace_annihilator, Rational, RationalMatrix, Subspace};
use crate::tube::{bdry_symmetry_sign, Ladder, TubeDatum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenProfile {
    pub dimension: i32,
    pub seed: u64,
    pub witt: bool,
    /// `dim Z^p_i`, degrees `0..N−1`.
    pub z_profile: Vec<usize>,
    /// `dim Z^q_i`; absent for Witt profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_profile_q: Option<Vec<usize>>,
    /// `dim Ex^p_i`, degrees `0..N`; `dim Ex^q_{N−i}` equals `dim Ex^p_i`.
    pub extra_profile: Vec<usize>,
    /// `dim ker ι_i`, degrees `0..N−1`, with `k_i + k_{N−1−i} = dim B_i`.
    pub kernel_profile: Vec<usize>,
    /// `dim coker ι_k`, degrees `0..N`, symmetric under `k ↔ N−k`.
    pub novikov_profile: Vec<usize>,
    pub max_entry: u32,
    pub adversarial: bool,
    /// Use the identity as the middle form on `coker ι`.
    #[serde(default)]
    pub definite_middle: bool,
}

fn bad(msg: String) -> Error {
    Error::Invalid(format!("inconsistent profile: {msg}"))
}

impl GenProfile {
    fn z_q(&self) -> &[usize] {
        self.z_profile_q.as_deref().unwrap_or(&self.z_profile)
    }

    /// `dim B_i = z^p_i + z^q_{N−1−i}`.
    pub fn boundary_dims(&self) -> Vec<usize> {
        let n = self.dimension as usize;
        (0..n).map(|i| self.z_profile[i] + self.z_q()[n - 1 - i]).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if n < 2 || n % 2 != 0 {
            return Err(bad(format!("dimension must be even and at least 2, got {n}")));
        }
        let nu = n as usize;
        let len = |name: &str, v: &[usize], want: usize| {
            if v.len() == want {
                Ok(())
            } else {
                Err(bad(format!("{name} has {} entries, expected {want}", v.len())))
            }
        };
        len("z_profile", &self.z_profile, nu)?;
        len("extra_profile", &self.extra_profile, nu + 1)?;
        len("kernel_profile", &self.kernel_profile, nu)?;
        len("novikov_profile", &self.novikov_profile, nu + 1)?;
        if self.max_entry == 0 {
            return Err(bad("max_entry must be positive".into()));
        }
        match (&self.z_profile_q, self.witt) {
            (Some(q), true) if q != &self.z_profile => return Err(bad("witt profile with differing z_profile_q".into())),
            (Some(q), _) => len("z_profile_q", q, nu)?,
            (None, _) => {}
        }
        let zq = self.z_q();
        for i in 0..nu {
            let j = nu - 1 - i;
            if self.z_profile[i] as i64 - zq[i] as i64 != self.z_profile[j] as i64 - zq[j] as i64 {
                return Err(bad(format!("dim B_{i} differs between the labels")));
            }
        }
        if self.witt {
            for i in 0..=nu {
                if self.extra_profile[i] != self.extra_profile[nu - i] {
                    return Err(bad(format!("witt extra_profile not symmetric at {i}")));
                }
            }
        }
        let b = self.boundary_dims();
        for i in 0..nu {
            if self.kernel_profile[i] + self.kernel_profile[nu - 1 - i] != b[i] {
                return Err(bad(format!("kernel_profile[{i}] + kernel_profile[{}] ≠ dim B_{i} = {}", nu - 1 - i, b[i])));
            }
        }
        for k in 0..=nu {
            if self.novikov_profile[k] != self.novikov_profile[nu - k] {
                return Err(bad(format!("novikov_profile not symmetric at {k}")));
            }
        }
        let m = nu / 2;
        if m % 2 == 1 && self.novikov_profile[m] % 2 == 1 {
            return Err(bad("middle novikov dimension must be even when N ≡ 2 mod 4".into()));
        }
        if self.definite_middle && m % 2 == 1 {
            return Err(bad("definite_middle needs N ≡ 0 mod 4".into()));
        }
        Ok(())
    }

    /// A random consistent profile. Adversarial profiles have `Z_r` and
    /// `Z_{N−1−r}` both nonzero for some `r`, so a generic approximation is
    /// obstructed.
    pub fn random(dimension: i32, seed: u64, adversarial: bool, witt: bool) -> Result<Self> {
        if dimension < 2 || dimension % 2 != 0 {
            return Err(bad(format!("dimension must be even and at least 2, got {dimension}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = dimension as usize;
        let mut z: Vec<usize> = (0..n).map(|_| [0, 0, 1, 2][rng.random_range(0..4)]).collect();
        if adversarial {
            let r = rng.random_range(0..n);
            z[r] = z[r].max(1);
            z[n - 1 - r] = z[n - 1 - r].max(1);
        }
        let z_q = (!witt).then(|| {
            let mut t = vec![0; n];
            for i in 0..n / 2 {
                let v = rng.random_range(0..2);
                t[i] = v;
                t[n - 1 - i] = v;
            }
            z.iter().zip(&t).map(|(a, b)| a + b).collect::<Vec<_>>()
        });
        let mut extra = vec![0; n + 1];
        for i in 0..=n {
            extra[i] = rng.random_range(0..2);
        }
        if witt {
            for i in 0..n / 2 {
                extra[n - i] = extra[i];
            }
        }
        let mut p = Self {
            dimension,
            seed,
            witt,
            z_profile: z,
            z_profile_q: z_q,
            extra_profile: extra,
            kernel_profile: vec![0; n],
            novikov_profile: vec![0; n + 1],
            max_entry: 3,
            adversarial,
            definite_middle: false,
        };
        let b = p.boundary_dims();
        for i in 0..n / 2 {
            let k = rng.random_range(0..=b[i]);
            p.kernel_profile[i] = k;
            p.kernel_profile[n - 1 - i] = b[i] - k;
        }
        for k in 0..n / 2 {
            let c = rng.random_range(0..2);
            p.novikov_profile[k] = c;
            p.novikov_profile[n - k] = c;
        }
        let m = n / 2;
        p.novikov_profile[m] = if m % 2 == 1 { 2 * rng.random_range(0..2) } else { rng.random_range(0..3) };
        p.validate()?;
        Ok(p)
    }
}

struct Gen {
    rng: ChaCha8Rng,
    max: i64,
}

impl Gen {
    fn rational(&mut self) -> Rational {
        let n = self.rng.random_range(-self.max..=self.max);
        let d = self.rng.random_range(1..=self.max);
        frac(n, d)
    }

    fn matrix(&mut self, r: usize, c: usize) -> RationalMatrix {
        let entries = (0..r * c).map(|_| self.rational()).collect();
        RationalMatrix::new(r, c, entries).expect("sized")
    }

    fn full_rank(&mut self, r: usize, c: usize) -> RationalMatrix {
        loop {
            let m = self.matrix(r, c);
            if m.rank() == r.min(c) {
                return m;
            }
        }
    }

    /// Random invertible, or symmetric (`sign = 1`) / skew (`sign = −1`) invertible.
    fn invertible(&mut self, n: usize, symmetry: Option<i64>) -> RationalMatrix {
        loop {
            let mut m = self.matrix(n, n);
            if let Some(s) = symmetry {
                for i in 0..n {
                    for j in 0..i {
                        let v = m.get(j, i).clone() * Rational::from_integer(s.into());
                        m.set(i, j, v);
                    }
                    if s < 0 {
                        m.set(i, i, Rational::zero());
                    }
                }
            }
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Permuted unitriangular change of basis.
    fn change_of_basis(&mut self, n: usize) -> RationalMatrix {
        let mut u = RationalMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                u.set(i, j, self.rational());
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, self.rng.random_range(0..=i));
        }
        u.select_rows(&perm)
    }
}

/// Rows spanning the annihilator of the columns of `k` in `dim`-space.
fn left_null(k: &RationalMatrix) -> RationalMatrix {
    k.transpose().kernel_matrix().transpose()
}

fn get(map: &BTreeMap<i32, RationalMatrix>, i: i32, rows: usize, cols: usize) -> RationalMatrix {
    map.get(&i).cloned().unwrap_or_else(|| RationalMatrix::zeros(rows, cols))
}

fn block2(rows: [usize; 2], cols: [usize; 2], blocks: [[Option<&RationalMatrix>; 2]; 2]) -> RationalMatrix {
    RationalMatrix::block(&rows, &cols, &[blocks[0].to_vec(), blocks[1].to_vec()])
}

struct LabelData {
    z: Vec<usize>,
    e: Vec<usize>,
    /// `K_i ⊂ B_i`, degrees `0..N−1`.
    k: BTreeMap<i32, RationalMatrix>,
    xi: BTreeMap<i32, RationalMatrix>,
}

impl LabelData {
    fn z(&self, i: i32) -> usize {
        usize::try_from(i).ok().and_then(|i| self.z.get(i).copied()).unwrap_or(0)
    }

    fn e(&self, i: i32) -> usize {
        usize::try_from(i).ok().and_then(|i| self.e.get(i).copied()).unwrap_or(0)
    }
}

pub fn generate_instance(p: &GenProfile) -> Result<Instance> {
    p.validate()?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(p.seed), max: p.max_entry as i64 };
    g.rng.set_stream(1);
    let n = p.dimension;
    let nu = n as usize;
    let range = |f: &dyn Fn(i32) -> usize| GradedSpace::new(0, (0..=n).map(f).collect());
    let bdims = p.boundary_dims();
    let b = range(&|i| if i < n { bdims[i as usize] } else { 0 });

    let mut gmat = BTreeMap::new();
    for i in 0..n {
        let j = n - 1 - i;
        if i < j {
            let gi = g.invertible(b.dim(i), None);
            gmat.insert(j, gi.transpose().scale(&Rational::from_integer(bdry_symmetry_sign(n, i).into())));
            gmat.insert(i, gi);
        }
    }
    let bdry_pairing = GradedPairing::new(b.clone(), b.clone(), n - 1, gmat.clone())?;
    let gm = |i: i32| bdry_pairing.block(i).into_owned();

    let zq = p.z_q().to_vec();
    let eq: Vec<usize> = (0..=nu).map(|i| p.extra_profile[nu - i]).collect();
    let mut lp = LabelData { z: p.z_profile.clone(), e: p.extra_profile.clone(), k: BTreeMap::new(), xi: BTreeMap::new() };
    let mut lq = LabelData { z: zq, e: eq, k: BTreeMap::new(), xi: BTreeMap::new() };
    let ann = |k: &RationalMatrix, i: i32| -> Result<RationalMatrix> {
        Ok(subspace_annihilator(&Subspace::new(k.clone())?, &gm(i))?.into_basis())
    };
    for i in 0..n {
        let j = n - 1 - i;
        if p.witt {
            if i < j {
                let ki = g.full_rank(b.dim(i), lp.z(j));
                let kj = ann(&ki, i)?;
                lp.k.insert(i, ki);
                lp.k.insert(j, kj);
            }
        } else {
            let ki = g.full_rank(b.dim(i), lq.z(j));
            lq.k.insert(j, ann(&ki, i)?);
            lp.k.insert(i, ki);
        }
    }
    let eps = |k: i32| parity_sign(((k - 1) * (n - k)) as i64);
    for i in 0..=n {
        let e = lp.e(i);
        if p.witt {
            if i < n - i {
                let xi = g.invertible(e, None);
                lp.xi.insert(n - i, xi.transpose().scale(&eps(n - i)));
                lp.xi.insert(i, xi);
            } else if i == n - i {
                lp.xi.insert(i, g.invertible(e, Some(1)));
            }
        } else {
            let xi = g.invertible(e, None);
            lq.xi.insert(n - i, xi.transpose().scale(&eps(n - i)));
            lp.xi.insert(i, xi);
        }
    }
    if p.witt {
        lq.k = lp.k.clone();
        lq.xi = lp.xi.clone();
    }

    let normal = |l: &LabelData, o: &LabelData, g: &mut Gen| -> Result<(Ladder, BTreeMap<i32, RationalMatrix>)> {
        let abs = range(&|i| l.z(i) + l.e(i));
        let rel = range(&|i| l.e(i) + o.z(n - i));
        let kb = |i: i32| get(&l.k, i, b.dim(i), o.z(n - 1 - i));
        let pi: BTreeMap<i32, RationalMatrix> = (0..n).map(|i| (i, left_null(&kb(i)))).collect();
        let b_to_p = GradedMap::from_fn(&b, &abs, 0, |i| {
            get(&pi, i, 0, b.dim(i)).vcat(&RationalMatrix::zeros(l.e(i), b.dim(i)))
        });
        let p_to_rel = GradedMap::from_fn(&abs, &rel, 0, |i| {
            let id = RationalMatrix::identity(l.e(i));
            block2([l.e(i), o.z(n - i)], [l.z(i), l.e(i)], [[None, Some(&id)], [None, None]])
        });
        let rel_bdry = GradedMap::from_fn(&rel, &b, -1, |i| {
            RationalMatrix::zeros(b.dim(i - 1), l.e(i)).hcat(&get(&l.k, i - 1, b.dim(i - 1), o.z(n - i)))
        });
        let mut e_blocks = BTreeMap::new();
        for i in 0..=n {
            let (zi, ei) = (l.z(i), l.e(i));
            let rhs = gm(i).mul(&get(&o.k, n - 1 - i, b.dim(n - 1 - i), zi));
            let x = get(&pi, i, 0, b.dim(i))
                .transpose()
                .solve_matrix(&rhs)?
                .ok_or_else(|| Error::Internal(format!("no X block in degree {i}")))?;
            let psi = g.matrix(ei, zi);
            let xi = get(&l.xi, i, ei, ei);
            e_blocks.insert(i, block2([zi, ei], [ei, zi], [[None, Some(&x)], [Some(&xi), Some(&psi)]]));
        }
        let ladder = Ladder {
            absolute: abs.clone(),
            relative: rel,
            b_to_p,
            p_to_rel,
            rel_bdry,
            abs_rel: GradedPairing::new(abs, GradedSpace::zero(0, n), n, BTreeMap::new())?,
        };
        Ok((ladder, e_blocks))
    };
    let (mut lad_p, e_p) = normal(&lp, &lq, &mut g)?;
    let (mut lad_q, e_q) = if p.witt { (lad_p.clone(), e_p.clone()) } else { normal(&lq, &lp, &mut g)? };

    let bases = |l: &Ladder, g: &mut Gen| -> (BTreeMap<i32, RationalMatrix>, BTreeMap<i32, RationalMatrix>) {
        let t = (0..=n).map(|i| (i, g.change_of_basis(l.absolute.dim(i)))).collect();
        let s = (0..=n).map(|i| (i, g.change_of_basis(l.relative.dim(i)))).collect();
        (t, s)
    };
    let (t_p, s_p) = bases(&lad_p, &mut g);
    let (t_q, s_q) = if p.witt { (t_p.clone(), s_p.clone()) } else { bases(&lad_q, &mut g) };
    let inv = |m: &BTreeMap<i32, RationalMatrix>, i: i32| m.get(&i).map_or_else(|| RationalMatrix::identity(0), |x| x.inverse().expect("invertible"));
    let conj = |l: &mut Ladder, t: &BTreeMap<i32, RationalMatrix>, s: &BTreeMap<i32, RationalMatrix>| {
        let b_to_p = GradedMap::from_fn(&b, &l.absolute, 0, |i| t[&i].mul(&l.b_to_p.block(i)));
        let p_to_rel = GradedMap::from_fn(&l.absolute, &l.relative, 0, |i| s[&i].mul(&l.p_to_rel.block(i)).mul(&inv(t, i)));
        let rel_bdry = GradedMap::from_fn(&l.relative, &b, -1, |i| l.rel_bdry.block(i).mul(&inv(s, i)));
        l.b_to_p = b_to_p;
        l.p_to_rel = p_to_rel;
        l.rel_bdry = rel_bdry;
    };
    conj(&mut lad_p, &t_p, &s_p);
    conj(&mut lad_q, &t_q, &s_q);
    let pair = |l: &Ladder, o: &Ladder, e: &BTreeMap<i32, RationalMatrix>, t: &BTreeMap<i32, RationalMatrix>, s_o: &BTreeMap<i32, RationalMatrix>| {
        GradedPairing::from_fn(&l.absolute, &o.relative, n, |i| inv(t, i).transpose().mul(&e[&i]).mul(&inv(s_o, n - i)))
    };
    lad_p.abs_rel = pair(&lad_p, &lad_q, &e_p, &t_p, &s_q);
    lad_q.abs_rel = pair(&lad_q, &lad_p, &e_q, &t_q, &s_p);
    let tube = TubeDatum { dimension: n, witt: p.witt, boundary: b.clone(), bdry_pairing: bdry_pairing.clone(), p: lad_p, q: lad_q };

    let global = generate_global(p, &mut g, &b, &gm)?;
    let name = format!("gen-n{n}-seed{}{}{}", p.seed, if p.witt { "" } else { "-nonwitt" }, if p.adversarial { "-adv" } else { "" });
    Ok(Instance { name, min_degree: 0, max_degree: n, tube, global, approximations: None })
}

fn generate_global(p: &GenProfile, g: &mut Gen, b: &GradedSpace, gm: &dyn Fn(i32) -> RationalMatrix) -> Result<GlobalDatum> {
    let n = p.dimension;
    let mut kio = BTreeMap::new();
    for i in 0..n {
        let j = n - 1 - i;
        if i < j {
            let ki = g.full_rank(b.dim(i), p.kernel_profile[i as usize]);
            let kj = subspace_annihilator(&Subspace::new(ki.clone())?, &gm(i))?.into_basis();
            kio.insert(i, ki);
            kio.insert(j, kj);
        }
    }
    let rank = |i: i32| b.dim(i) - kio.get(&i).map_or(0, RationalMatrix::cols);
    let m = GradedSpace::new(0, (0..=n).map(|i| rank(i) + p.novikov_profile[i as usize]).collect());
    let iota = GradedMap::from_fn(b, &m, 0, |i| {
        let pi = kio.get(&i).map_or_else(|| RationalMatrix::zeros(0, b.dim(i)), left_null);
        let normal = pi.vcat(&RationalMatrix::zeros(m.dim(i) - pi.rows(), b.dim(i)));
        g.change_of_basis(m.dim(i)).mul(&normal)
    });
    let rel = RelativeModel::new(&iota)?;
    let split = &rel.split;
    let s = |k: i32| parity_sign((k * (n - k)) as i64);
    let mid = n / 2;
    let mut omega = BTreeMap::new();
    for k in 0..=mid {
        let c = split.coker_dim(k);
        if k < n - k {
            let o = g.invertible(c, None);
            omega.insert(n - k, o.transpose().scale(&s(k)));
            omega.insert(k, o);
        } else if p.definite_middle {
            omega.insert(k, RationalMatrix::identity(c));
        } else {
            let sym = if mid % 2 == 0 { 1 } else { -1 };
            omega.insert(k, g.invertible(c, Some(sym)));
        }
    }
    let rs = rel.space().clone();
    let mut blocks = BTreeMap::new();
    for k in rs.degrees() {
        let other = n - k;
        let pc = split.coker_projection.block(other).into_owned();
        let kb = split.kernel_basis.block(k).into_owned();
        let (c, kappa) = (split.coker_dim(k), split.ker_dim(k));
        let top = get(&omega, k, c, pc.rows()).mul(&pc);
        let rhs = gm(other).mul(&kb).scale(&s(k));
        let x = iota
            .block(other)
            .transpose()
            .solve_matrix(&rhs)?
            .ok_or_else(|| Error::Internal(format!("no lefschetz lift in degree {k}")))?
            .transpose();
        let theta = g.matrix(kappa, pc.rows());
        let bottom = x.add(&theta.mul(&pc));
        blocks.insert(k, top.vcat(&bottom));
    }
    let lefschetz = GradedPairing::new(rs, m.clone(), n, blocks)?;
    Ok(GlobalDatum { complement: m, iota, lefschetz })
}

/// A single-entry change: JSON pointer into the instance file and the added amount.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutation {
    pub pointer: String,
    pub delta: String,
}

impl Mutation {
    pub fn inverse(&self) -> Result<Mutation> {
        let d = parse_rational(&self.delta)?;
        Ok(Mutation { pointer: self.pointer.clone(), delta: format_rational(&-d) })
    }
}

fn entry_pointers(v: &serde_json::Value, path: &mut Vec<String>, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Object(m) => {
            for (k, x) in m {
                path.push(k.replace('~', "~0").replace('/', "~1"));
                entry_pointers(x, path, out);
                path.pop();
            }
        }
        serde_json::Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                path.push(i.to_string());
                entry_pointers(x, path, out);
                path.pop();
            }
        }
        serde_json::Value::String(_) if path.len() >= 4 => out.push(format!("/{}", path.join("/"))),
        _ => {}
    }
}

/// Adds `delta` to one serialized matrix entry.
pub fn apply_mutation(inst: &Instance, m: &Mutation) -> Result<Instance> {
    let mut v = serde_json::to_value(inst.to_file()).map_err(|e| Error::Internal(e.to_string()))?;
    let slot = v.pointer_mut(&m.pointer).ok_or_else(|| Error::Invalid(format!("no entry at {}", m.pointer)))?;
    let old = slot.as_str().ok_or_else(|| Error::Invalid(format!("{} is not a matrix entry", m.pointer)))?;
    let new = parse_rational(old)? + parse_rational(&m.delta)?;
    *slot = serde_json::Value::String(format_rational(&new));
    let file = serde_json::from_value(v).map_err(|e| Error::Internal(e.to_string()))?;
    crate::instance::InstanceFile::into_instance(file)
}

/// Perturbs one matrix entry, chosen uniformly among all serialized entries,
/// by a nonzero rational. Returns `None` when the instance has no entries.
pub fn mutate_instance(inst: &Instance, seed: u64) -> Result<Option<(Instance, Mutation)>> {
    let v = serde_json::to_value(inst.to_file()).map_err(|e| Error::Internal(e.to_string()))?;
    let mut ptrs = Vec::new();
    entry_pointers(&v, &mut Vec::new(), &mut ptrs);
    if ptrs.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pointer = ptrs[rng.random_range(0..ptrs.len())].clone();
    let num = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
    let delta = format_rational(&frac(num, rng.random_range(1..=2)));
    let m = Mutation { pointer, delta };
    Ok(Some((apply_mutation(inst, &m)?, m)))
}

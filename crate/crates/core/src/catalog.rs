//! Named groups and actions with their expected invariants.
//!
//! Degrees and orders are closed-form and live in the builders; per-system
//! classification expectations are data, loaded from `expectations.toml`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::actions::{coset_action, CosetAction};
use crate::classifier::{analyze, AnalyzeOptions, Caps, LemmaCheck};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gammal::{self, SearchOutcome};
use crate::group::GroupHandle;
use crate::perm::{is_prime, Permutation};
use crate::regular::{find_regular_dihedral, verify_witness, GroupClass, RegularWitness};

pub type Params = BTreeMap<String, u64>;

#[derive(Clone, Copy, Debug)]
pub struct ParamInfo {
    pub name: &'static str,
    pub constraint: &'static str,
    pub default: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct EntryInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamInfo],
}

const fn param(name: &'static str, constraint: &'static str, default: u64) -> ParamInfo {
    ParamInfo {
        name,
        constraint,
        default,
    }
}

pub const ENTRIES: &[EntryInfo] = &[
    EntryInfo {
        id: "sym",
        summary: "symmetric group on n points",
        params: &[param("n", "n >= 2", 4)],
    },
    EntryInfo {
        id: "alt",
        summary: "alternating group on n points",
        params: &[param("n", "n >= 3", 4)],
    },
    EntryInfo {
        id: "psl27",
        summary: "PSL(2,7) on the 8 points of the projective line",
        params: &[],
    },
    EntryInfo {
        id: "pgl2q",
        summary: "PGL(2,q) on the q+1 points of the projective line",
        params: &[param("q", "q prime", 7)],
    },
    EntryInfo {
        id: "m11",
        summary: "Mathieu group M11 on 11 points",
        params: &[],
    },
    EntryInfo {
        id: "agl1p",
        summary: "Z_p : Z_l inside AGL(1,p) on the 2p cosets of <b^2>",
        params: &[param("p", "p odd prime", 5), param("l", "l even, l | p-1", 4)],
    },
    EntryInfo {
        id: "pgl2q_cosets",
        summary: "PGL(2,q) on the 2(q+1) cosets of Z_q : Z_{(q-1)/2}",
        params: &[param("q", "q prime, q = 3 mod 4", 7)],
    },
    EntryInfo {
        id: "pgl2q_times2",
        summary: "PGL(2,q) x <c> on the 2(q+1) cosets of Z_q : (Z_{(q-1)/2} x <zc>)",
        params: &[param("q", "q prime, q = 3 mod 4", 7)],
    },
    EntryInfo {
        id: "symxz2_4p",
        summary: "Sym(p) x <c> on the 4p cosets of Alt(p-1)",
        params: &[param("p", "p prime, p = 3 mod 4", 3)],
    },
    EntryInfo {
        id: "wreath",
        summary: "Z_k wr D_2n on kn points with the explicit dihedral witness <y, b>",
        params: &[param("k", "k >= 2", 3), param("n", "n even, n >= 4", 4)],
    },
    EntryInfo {
        id: "biprim_pgl",
        summary: "PGL(2,q) x Z_2 on two copies of the projective line",
        params: &[param("q", "q prime", 7)],
    },
    EntryInfo {
        id: "biprim_alt",
        summary: "A_{4m+1} x Z_2 on two copies of 4m+1 points",
        params: &[param("m", "m >= 1", 1)],
    },
    EntryInfo {
        id: "biprim_sym",
        summary: "S_n x Z_2 on two copies of n points",
        params: &[param("n", "n >= 3", 5)],
    },
    EntryInfo {
        id: "s4_biprim",
        summary: "S_4 on the 8 cosets of a Z_3",
        params: &[],
    },
    EntryInfo {
        id: "gammaL164_deg28",
        summary: "x -> a x^(2^k) + t over GF(64), searched for a degree-28 action with a regular D_28",
        params: &[],
    },
];

/// Entries whose built groups are d-groups of degree at most 28.
pub const DGROUP_CORPUS: &[(&str, &[(&str, u64)])] = &[
    ("sym", &[("n", 4)]),
    ("alt", &[("n", 4)]),
    ("psl27", &[]),
    ("pgl2q", &[("q", 7)]),
    ("agl1p", &[("p", 7), ("l", 6)]),
    ("pgl2q_cosets", &[("q", 3)]),
    ("pgl2q_cosets", &[("q", 7)]),
    ("pgl2q_times2", &[("q", 7)]),
    ("symxz2_4p", &[("p", 3)]),
    ("symxz2_4p", &[("p", 7)]),
    ("wreath", &[("k", 3), ("n", 4)]),
    ("wreath", &[("k", 3), ("n", 6)]),
    ("wreath", &[("k", 5), ("n", 4)]),
    ("biprim_pgl", &[("q", 5)]),
    ("biprim_pgl", &[("q", 7)]),
    ("biprim_alt", &[("m", 1)]),
    ("biprim_sym", &[("n", 5)]),
    ("s4_biprim", &[]),
];

pub fn entry_info(id: &str) -> Result<&'static EntryInfo> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

/// Parses `k=v,k=v` (whitespace allowed around separators).
pub fn parse_params(text: &str) -> Result<Params> {
    let mut out = Params::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::BadParams(format!("expected key=value, found {item:?}")))?;
        let value = v
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::BadParams(format!("{} must be a non-negative integer", k.trim())))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

pub fn params_of(pairs: &[(&str, u64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

pub fn format_params(params: &Params) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Fills defaults and rejects unknown names.
fn resolve_params(info: &EntryInfo, given: &Params) -> Result<Params> {
    for name in given.keys() {
        if !info.params.iter().any(|p| p.name == name) {
            return Err(Error::BadParams(format!("unknown parameter {name} for {}", info.id)));
        }
    }
    Ok(info
        .params
        .iter()
        .map(|p| (p.name.to_string(), given.get(p.name).copied().unwrap_or(p.default)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemExpectation {
    pub block_size: usize,
    pub kernel_order: u128,
    #[serde(default = "one")]
    pub count: usize,
    pub dk_order: Option<u128>,
    #[serde(default)]
    pub holds: Vec<u8>,
    #[serde(default)]
    pub warning: bool,
    pub image_class: Option<GroupClass>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub degree: usize,
    pub order: u128,
    pub class: Option<GroupClass>,
    pub primitive: Option<bool>,
    pub minimal_systems: Option<usize>,
    #[serde(default)]
    pub systems: Vec<SystemExpectation>,
    pub biprimitive_parts: Option<Vec<u8>>,
}

/// One row of the shipped expectations table.
#[derive(Clone, Debug, Deserialize)]
pub struct ExpectationRow {
    pub id: String,
    #[serde(default)]
    pub params: Params,
    pub class: Option<GroupClass>,
    pub primitive: Option<bool>,
    pub minimal_systems: Option<usize>,
    #[serde(default)]
    pub system: Vec<SystemExpectation>,
    pub biprimitive_parts: Option<Vec<u8>>,
}

#[derive(Deserialize)]
struct ExpectationTable {
    entry: Vec<ExpectationRow>,
}

const EXPECTATIONS: &str = include_str!("../data/expectations.toml");

pub fn expectation_rows() -> Vec<ExpectationRow> {
    toml::from_str::<ExpectationTable>(EXPECTATIONS)
        .expect("shipped expectations table parses")
        .entry
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub params: Params,
    pub group: GroupHandle,
    pub action: String,
    /// A regular dihedral subgroup supplied by the construction.
    pub witness: Option<RegularWitness>,
    pub expected: Expected,
}

/// Sidecar document written next to a built group file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryMetadata {
    pub id: String,
    pub params: Params,
    pub degree: usize,
    pub order: u128,
    pub action: String,
    pub witness: Option<RegularWitness>,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn metadata(&self) -> EntryMetadata {
        EntryMetadata {
            id: self.id.clone(),
            params: self.params.clone(),
            degree: self.group.degree(),
            order: self.group.order(),
            action: self.action.clone(),
            witness: self.witness.clone(),
            expected: self.expected.clone(),
        }
    }

    /// `id` followed by its parameters, e.g. `wreath_k3_n4`.
    pub fn label(&self) -> String {
        let mut s = self.id.clone();
        for (k, v) in &self.params {
            s.push_str(&format!("_{k}{v}"));
        }
        s
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

fn perm_from_fn(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images((0..n).map(f).collect()).expect("builder maps are bijections")
}

fn cycle(n: usize, points: &[usize]) -> Permutation {
    Permutation::from_cycles(n, &[points.to_vec()]).expect("valid cycle")
}

/// Appends `extra` fixed points.
fn pad(p: &Permutation, extra: usize) -> Permutation {
    let n = p.degree();
    perm_from_fn(n + extra, |x| if x < n { p.apply(x) } else { x })
}

fn symmetric_generators(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return vec![Permutation::identity(n)];
    }
    vec![cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())]
}

/// Generators of the alternating group on `points` inside `Sym(n)`.
fn alternating_generators(n: usize, points: &[usize]) -> Vec<Permutation> {
    (2..points.len())
        .map(|i| cycle(n, &[points[0], points[1], points[i]]))
        .collect()
}

/// Möbius maps on `GF(q) ∪ {∞}` (∞ is point `q`).
struct ProjectiveLine {
    field: Field,
    q: usize,
}

impl ProjectiveLine {
    fn new(q: u64) -> Result<Self> {
        Ok(Self {
            field: Field::new(q)?,
            q: q as usize,
        })
    }

    fn degree(&self) -> usize {
        self.q + 1
    }

    fn translation(&self) -> Permutation {
        let f = &self.field;
        perm_from_fn(self.degree(), |x| if x == self.q { x } else { f.add(x as u32, 1) as usize })
    }

    fn scaling(&self, g: u32) -> Permutation {
        let f = &self.field;
        perm_from_fn(self.degree(), |x| if x == self.q { x } else { f.mul(x as u32, g) as usize })
    }

    /// `x -> -1/x`.
    fn inversion(&self) -> Permutation {
        let f = &self.field;
        perm_from_fn(self.degree(), |x| {
            if x == self.q {
                0
            } else if x == 0 {
                self.q
            } else {
                f.neg(f.inv(x as u32).unwrap()) as usize
            }
        })
    }

    fn pgl(&self) -> Vec<Permutation> {
        let g = self.field.primitive_element();
        vec![self.translation(), self.scaling(g), self.inversion()]
    }

    fn psl(&self) -> Vec<Permutation> {
        let g = self.field.primitive_element();
        vec![self.translation(), self.scaling(self.field.mul(g, g)), self.inversion()]
    }
}

fn big_coset_action(group: &GroupHandle, sub: &GroupHandle) -> Result<CosetAction> {
    coset_action(group, sub, u128::MAX)
}

fn prime_3_mod_4(name: &str, q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(bad(format!("{name} must be prime")));
    }
    if q % 4 != 3 {
        return Err(bad(format!("{name} must be 3 mod 4")));
    }
    Ok(())
}

struct Built {
    group: GroupHandle,
    action: String,
    witness: Option<RegularWitness>,
    degree: usize,
    order: u128,
}

fn build_sym(p: &Params) -> Result<Built> {
    let n = p["n"];
    if n < 2 {
        return Err(bad("n must be at least 2"));
    }
    let n = n as usize;
    Ok(Built {
        group: GroupHandle::new(n, symmetric_generators(n))?,
        action: format!("natural action of Sym({n})"),
        witness: None,
        degree: n,
        order: factorial(n as u64),
    })
}

fn build_alt(p: &Params) -> Result<Built> {
    let n = p["n"];
    if n < 3 {
        return Err(bad("n must be at least 3"));
    }
    let n = n as usize;
    Ok(Built {
        group: GroupHandle::new(n, alternating_generators(n, &(0..n).collect::<Vec<_>>()))?,
        action: format!("natural action of Alt({n})"),
        witness: None,
        degree: n,
        order: factorial(n as u64) / 2,
    })
}

fn build_psl27(_: &Params) -> Result<Built> {
    let line = ProjectiveLine::new(7)?;
    Ok(Built {
        group: GroupHandle::new(8, line.psl())?,
        action: "PSL(2,7) on the projective line over GF(7), infinity = point 8".into(),
        witness: None,
        degree: 8,
        order: 168,
    })
}

fn build_pgl2q(p: &Params) -> Result<Built> {
    let q = p["q"];
    if !is_prime(q) {
        return Err(bad("q must be prime"));
    }
    let line = ProjectiveLine::new(q)?;
    let q = q as u128;
    Ok(Built {
        group: GroupHandle::new(line.degree(), line.pgl())?,
        action: format!("PGL(2,{q}) on the projective line, infinity = point {}", q + 1),
        witness: None,
        degree: q as usize + 1,
        order: q * (q * q - 1),
    })
}

fn build_m11(_: &Params) -> Result<Built> {
    let gens = ["(1 2 3 4 5 6 7 8 9 10 11)", "(3 7 11 8)(4 10 5 6)"]
        .iter()
        .map(|s| Permutation::parse(s, 11))
        .collect::<Result<Vec<_>>>()?;
    Ok(Built {
        group: GroupHandle::new(11, gens)?,
        action: "M11 on 11 points".into(),
        witness: None,
        degree: 11,
        order: 7920,
    })
}

fn build_agl1p(p: &Params) -> Result<Built> {
    let (pr, l) = (p["p"], p["l"]);
    if !is_prime(pr) || pr == 2 {
        return Err(bad("p must be prime"));
    }
    if l == 0 || l % 2 == 1 {
        return Err(bad("l must be even"));
    }
    if (pr - 1) % l != 0 {
        return Err(bad("l must divide p - 1"));
    }
    let field = Field::new(pr)?;
    let prim = field.primitive_element();
    let g = field.pow(prim, (pr - 1) / l);
    let n = pr as usize;
    let a = perm_from_fn(n, |x| field.add(x as u32, 1) as usize);
    let b = perm_from_fn(n, |x| field.mul(x as u32, g) as usize);
    let base = GroupHandle::new(n, vec![a.clone(), b.clone()])?;
    let h = GroupHandle::new(n, vec![b.pow(2)])?;
    let act = big_coset_action(&base, &h)?;
    let group = act.action.clone();
    // <a> : <b^(l/2)> is regular exactly when b^(l/2) lies outside <b^2>.
    let witness = if (l / 2) % 2 == 1 {
        Some(RegularWitness::dihedral(act.act(&a), act.act(&b.pow(l as i64 / 2))))
    } else {
        None
    };
    Ok(Built {
        group,
        action: format!("Z_{pr} : Z_{l} on the cosets of <b^2>, b = (x -> {g}x)"),
        witness,
        degree: 2 * n,
        order: (pr * l) as u128,
    })
}

fn build_pgl2q_cosets(p: &Params) -> Result<Built> {
    let q = p["q"];
    prime_3_mod_4("q", q)?;
    let line = ProjectiveLine::new(q)?;
    let base = GroupHandle::new(line.degree(), line.pgl())?;
    let g = line.field.primitive_element();
    let h = GroupHandle::new(
        line.degree(),
        vec![line.translation(), line.scaling(line.field.mul(g, g))],
    )?;
    let act = big_coset_action(&base, &h)?;
    let q = q as u128;
    Ok(Built {
        group: act.action,
        action: format!("PGL(2,{q}) on the cosets of Z_{q} : Z_{}", (q - 1) / 2),
        witness: None,
        degree: 2 * (q as usize + 1),
        order: q * (q * q - 1),
    })
}

fn build_pgl2q_times2(p: &Params) -> Result<Built> {
    let q = p["q"];
    prime_3_mod_4("q", q)?;
    let line = ProjectiveLine::new(q)?;
    let n = line.degree();
    let c = perm_from_fn(n + 2, |x| match x {
        x if x == n => n + 1,
        x if x == n + 1 => n,
        x => x,
    });
    let pgl: Vec<Permutation> = line.pgl().iter().map(|g| pad(g, 2)).collect();
    let mut gens = pgl.clone();
    gens.push(c.clone());
    let base = GroupHandle::new(n + 2, gens)?;
    let g = line.field.primitive_element();
    let minus = pad(&line.scaling(line.field.neg(1)), 2);
    let h = GroupHandle::new(
        n + 2,
        vec![
            pad(&line.translation(), 2),
            pad(&line.scaling(line.field.mul(g, g)), 2),
            minus.then(&c),
        ],
    )?;
    let act = big_coset_action(&base, &h)?;
    // A regular dihedral subgroup inside PGL(2,q) x 1, which meets <c> trivially.
    let pgl_image = GroupHandle::new(act.degree, pgl.iter().map(|g| act.act(g)).collect())?;
    let witness = find_regular_dihedral(&pgl_image, u128::MAX)?;
    let q = q as u128;
    Ok(Built {
        group: act.action,
        action: format!("PGL(2,{q}) x <c> on the cosets of Z_{q} : (Z_{} x <zc>), z = (x -> -x)", (q - 1) / 2),
        witness,
        degree: 2 * (q as usize + 1),
        order: 2 * q * (q * q - 1),
    })
}

fn build_symxz2_4p(p: &Params) -> Result<Built> {
    let pr = p["p"];
    prime_3_mod_4("p", pr)?;
    let n = pr as usize;
    let c = perm_from_fn(n + 2, |x| match x {
        x if x == n => n + 1,
        x if x == n + 1 => n,
        x => x,
    });
    let mut gens: Vec<Permutation> = symmetric_generators(n).iter().map(|g| pad(g, 2)).collect();
    gens.push(c.clone());
    let base = GroupHandle::new(n + 2, gens)?;
    let h = GroupHandle::generated_by(n + 2, alternating_generators(n + 2, &(1..n).collect::<Vec<_>>()))?;
    let act = big_coset_action(&base, &h)?;
    // <(1 2 .. p), (2,p)(3,p-1)...> x <c>, with rotation (1 2 .. p) c of order 2p.
    let rotation = pad(&cycle(n, &(0..n).collect::<Vec<_>>()), 2).then(&c);
    let reflection = pad(&perm_from_fn(n, |x| if x == 0 { 0 } else { n - x }), 2);
    let witness = RegularWitness::dihedral(act.act(&rotation), act.act(&reflection));
    Ok(Built {
        group: act.action,
        action: format!("Sym({pr}) x <c> on the cosets of Alt({})", pr - 1),
        witness: Some(witness),
        degree: 4 * n,
        order: 2 * factorial(pr),
    })
}

/// The pieces of the wreath construction, exposed for tests.
pub struct WreathParts {
    pub group: GroupHandle,
    /// `y = a x` (apply the lifted rotation `a`, then `x`).
    pub y: Permutation,
    pub b: Permutation,
    pub a: Permutation,
    pub x: Permutation,
    pub k: usize,
    pub n: usize,
}

/// Points `(δ, i)` with `δ ∈ Z_k`, `i ∈ 0..n` are numbered `i·k + δ`.
pub fn wreath_parts(k: u64, n: u64) -> Result<WreathParts> {
    if k < 2 {
        return Err(bad("k must be at least 2"));
    }
    if n < 4 || n % 2 == 1 {
        return Err(bad("n must be even and at least 4"));
    }
    let (k, n) = (k as usize, n as usize);
    let m = n / 2;
    let deg = k * n;
    let lift = |s: &Permutation| perm_from_fn(deg, |p| s.apply(p / k) * k + p % k);
    let mut r_cycle = Vec::with_capacity(n);
    for i in 0..m {
        r_cycle.push(i);
        r_cycle.push(m + i);
    }
    let r = cycle(n, &r_cycle);
    let b_top = perm_from_fn(n, |i| n - 1 - i);
    let a_top = r.pow(2);
    let shift = |coord: usize, s: usize| {
        perm_from_fn(deg, move |p| if p / k == coord { coord * k + (p % k + s) % k } else { p })
    };
    let x = shift(0, 1).then(&shift(m, k - 1));
    let a = lift(&a_top);
    let b = lift(&b_top);
    let y = a.then(&x);
    let group = GroupHandle::new(deg, vec![shift(0, 1), lift(&r), b.clone()])?;
    Ok(WreathParts {
        group,
        y,
        b,
        a,
        x,
        k,
        n,
    })
}

fn build_wreath(p: &Params) -> Result<Built> {
    let parts = wreath_parts(p["k"], p["n"])?;
    let (k, n) = (parts.k, parts.n);
    Ok(Built {
        witness: Some(RegularWitness::dihedral(parts.y.clone(), parts.b.clone())),
        group: parts.group,
        action: format!("Z_{k} wr D_{} on {} points, fibres of size {k}", 2 * n, k * n),
        degree: k * n,
        order: (k as u128).pow(n as u32) * 2 * n as u128,
    })
}

/// `G0 × <c>` on two copies of `G0`'s domain, `c` swapping the copies.
fn doubled(gens: &[Permutation]) -> Result<GroupHandle> {
    let n = gens[0].degree();
    let mut out: Vec<Permutation> = gens
        .iter()
        .map(|g| perm_from_fn(2 * n, |x| if x < n { g.apply(x) } else { n + g.apply(x - n) }))
        .collect();
    out.push(perm_from_fn(2 * n, |x| (x + n) % (2 * n)));
    GroupHandle::new(2 * n, out)
}

fn build_biprim_pgl(p: &Params) -> Result<Built> {
    let q = p["q"];
    if !is_prime(q) {
        return Err(bad("q must be prime"));
    }
    let line = ProjectiveLine::new(q)?;
    let q = q as u128;
    Ok(Built {
        group: doubled(&line.pgl())?,
        action: format!("PGL(2,{q}) x Z_2 on two copies of the projective line"),
        witness: None,
        degree: 2 * (q as usize + 1),
        order: 2 * q * (q * q - 1),
    })
}

fn build_biprim_alt(p: &Params) -> Result<Built> {
    let m = p["m"];
    if m < 1 {
        return Err(bad("m must be at least 1"));
    }
    let n = 4 * m as usize + 1;
    Ok(Built {
        group: doubled(&alternating_generators(n, &(0..n).collect::<Vec<_>>()))?,
        action: format!("Alt({n}) x Z_2 on two copies of {n} points"),
        witness: None,
        degree: 2 * n,
        order: factorial(n as u64),
    })
}

fn build_biprim_sym(p: &Params) -> Result<Built> {
    let n = p["n"];
    if n < 3 {
        return Err(bad("n must be at least 3"));
    }
    let n = n as usize;
    Ok(Built {
        group: doubled(&symmetric_generators(n))?,
        action: format!("Sym({n}) x Z_2 on two copies of {n} points"),
        witness: None,
        degree: 2 * n,
        order: 2 * factorial(n as u64),
    })
}

fn build_s4_biprim(_: &Params) -> Result<Built> {
    let s4 = GroupHandle::new(4, symmetric_generators(4))?;
    let z3 = GroupHandle::new(4, vec![cycle(4, &[0, 1, 2])])?;
    Ok(Built {
        group: big_coset_action(&s4, &z3)?.action,
        action: "Sym(4) on the cosets of <(1 2 3)>".into(),
        witness: None,
        degree: 8,
        order: 24,
    })
}

fn build_gammal(_: &Params) -> Result<Built> {
    match gammal::search()? {
        SearchOutcome::Found { group, witness, .. } => Ok(Built {
            group,
            action: "degree-28 coset action of x -> a x^(2^k) + t over GF(64)".into(),
            witness: Some(witness),
            degree: 28,
            order: 2688,
        }),
        SearchOutcome::Failed { transcript } => Err(Error::SearchFailed(transcript.join("; "))),
    }
}

pub fn build(id: &str, params: &Params) -> Result<CatalogEntry> {
    let info = entry_info(id)?;
    let params = resolve_params(info, params)?;
    let built = match id {
        "sym" => build_sym(&params),
        "alt" => build_alt(&params),
        "psl27" => build_psl27(&params),
        "pgl2q" => build_pgl2q(&params),
        "m11" => build_m11(&params),
        "agl1p" => build_agl1p(&params),
        "pgl2q_cosets" => build_pgl2q_cosets(&params),
        "pgl2q_times2" => build_pgl2q_times2(&params),
        "symxz2_4p" => build_symxz2_4p(&params),
        "wreath" => build_wreath(&params),
        "biprim_pgl" => build_biprim_pgl(&params),
        "biprim_alt" => build_biprim_alt(&params),
        "biprim_sym" => build_biprim_sym(&params),
        "s4_biprim" => build_s4_biprim(&params),
        "gammaL164_deg28" => build_gammal(&params),
        _ => Err(Error::UnknownEntry(id.to_string())),
    }?;
    if built.group.degree() != built.degree || built.group.order() != built.order {
        return Err(Error::InvariantViolation(format!(
            "{id}: built degree {} and order {} differ from the closed form {} and {}",
            built.group.degree(),
            built.group.order(),
            built.degree,
            built.order
        )));
    }
    let mut expected = Expected {
        degree: built.degree,
        order: built.order,
        ..Expected::default()
    };
    if let Some(row) = expectation_rows()
        .into_iter()
        .find(|r| r.id == id && resolve_params(info, &r.params).ok().as_ref() == Some(&params))
    {
        expected.class = row.class;
        expected.primitive = row.primitive;
        expected.minimal_systems = row.minimal_systems;
        expected.systems = row.system;
        expected.biprimitive_parts = row.biprimitive_parts;
    }
    Ok(CatalogEntry {
        id: id.to_string(),
        params,
        group: built.group,
        action: built.action,
        witness: built.witness,
        expected,
    })
}

/// Builds the entry and checks it against its expectations.
pub fn verify_entry(entry: &CatalogEntry, caps: Caps) -> Result<Vec<LemmaCheck>> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(LemmaCheck {
            name: name.to_string(),
            passed,
            detail,
        })
    };
    let g = &entry.group;
    let exp = &entry.expected;
    push(
        "degree",
        g.degree() == exp.degree,
        format!("built {}, expected {}", g.degree(), exp.degree),
    );
    push(
        "order",
        g.order() == exp.order,
        format!("built {}, expected {}", g.order(), exp.order),
    );
    if let Some(w) = &entry.witness {
        let check = verify_witness(g, w);
        push("witness", check.is_valid(), check.diagnostics.join(", "));
    }
    let options = AnalyzeOptions {
        caps,
        witness: entry.witness.clone(),
    };
    let report = analyze(g, &entry.label(), &options)?;
    if let Some(class) = exp.class {
        push(
            "class",
            report.class == class,
            format!("found {}, expected {}", report.class.label(), class.label()),
        );
    }
    if let Some(primitive) = exp.primitive {
        let found = matches!(report.primitivity, crate::classifier::Primitivity::Primitive { .. });
        push("primitive", found == primitive, format!("found {found}, expected {primitive}"));
    }
    if let Some(count) = exp.minimal_systems {
        push(
            "minimal-systems",
            report.systems.len() == count,
            format!("found {}, expected {count}", report.systems.len()),
        );
    }
    for se in &exp.systems {
        let matching: Vec<_> = report
            .systems
            .iter()
            .filter(|ev| ev.block_size == se.block_size && ev.kernel_order == se.kernel_order)
            .collect();
        let name = format!("system b={} |K|={}", se.block_size, se.kernel_order);
        push(
            &format!("{name} count"),
            matching.len() == se.count,
            format!("found {}, expected {}", matching.len(), se.count),
        );
        for ev in matching {
            if let Some(dk) = se.dk_order {
                push(&format!("{name} |D∩K|"), ev.dk_order == dk, format!("found {}, expected {dk}", ev.dk_order));
            }
            if let Some(ic) = se.image_class {
                push(
                    &format!("{name} image class"),
                    ev.block_image_class == ic,
                    format!("found {}, expected {}", ev.block_image_class.label(), ic.label()),
                );
            }
            push(
                &format!("{name} cases"),
                ev.holding_cases() == se.holds,
                format!("found {:?}, expected {:?}", ev.holding_cases(), se.holds),
            );
            push(
                &format!("{name} warning"),
                ev.warnings.is_empty() != se.warning,
                format!("warnings: {:?}", ev.warnings),
            );
        }
    }
    if let Some(parts) = &exp.biprimitive_parts {
        let found = report.biprimitive.as_ref().map(|b| b.matched_parts.clone());
        push(
            "bi-primitive parts",
            found.as_ref() == Some(parts),
            format!("found {found:?}, expected {parts:?}"),
        );
    }
    for l in &report.lemmas {
        push(&l.name, l.passed, l.detail.clone());
    }
    push(
        "connected orbitals undirected",
        !report.class.is_d_group() || report.orbitals.connected_undirected,
        String::new(),
    );
    Ok(checks)
}

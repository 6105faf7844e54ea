//! Regular cyclic and regular dihedral subgroups.
//!
//! Dihedral groups are described by their order throughout; the degenerate
//! order-4 case is the Klein four-group acting regularly.

use serde::{Deserialize, Serialize};

use crate::actions::{is_transitive, orbits_under};
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Cyclic,
    Dihedral,
}

/// A regular subgroup `<a>` (cyclic) or `<a, z>` (dihedral, `z a z = a^-1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularWitness {
    pub kind: WitnessKind,
    pub a: Permutation,
    pub z: Option<Permutation>,
    pub subgroup_order: u128,
}

impl RegularWitness {
    pub fn cyclic(a: Permutation) -> Self {
        Self {
            kind: WitnessKind::Cyclic,
            subgroup_order: a.degree() as u128,
            a,
            z: None,
        }
    }

    pub fn dihedral(a: Permutation, z: Permutation) -> Self {
        Self {
            kind: WitnessKind::Dihedral,
            subgroup_order: a.degree() as u128,
            a,
            z: Some(z),
        }
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }

    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = vec![self.a.clone()];
        gens.extend(self.z.clone());
        gens
    }

    /// The regular subgroup itself.
    pub fn subgroup(&self) -> Result<GroupHandle> {
        GroupHandle::generated_by(self.degree(), self.generators())
    }

    /// Elements `a^i` followed by `a^i z`, `i = 0..|a|`.
    pub fn elements(&self) -> Vec<Permutation> {
        let k = self.a.order() as i64;
        let mut out: Vec<Permutation> = (0..k).map(|i| self.a.pow(i)).collect();
        if let Some(z) = &self.z {
            let reflections: Vec<Permutation> = out.iter().map(|r| r.then(z)).collect();
            out.extend(reflections);
        }
        out
    }
}

/// Outcome of re-checking a witness: empty diagnostics means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub diagnostics: Vec<String>,
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

fn require_transitive(group: &GroupHandle) -> Result<()> {
    if is_transitive(group) {
        Ok(())
    } else {
        Err(Error::IntransitiveGroup)
    }
}

/// First full cycle in enumeration order.
pub fn find_regular_cyclic(group: &GroupHandle, cap: u128) -> Result<Option<RegularWitness>> {
    require_transitive(group)?;
    Ok(group
        .elements(cap)?
        .find(Permutation::is_full_cycle)
        .map(RegularWitness::cyclic))
}

/// `<a>` is semiregular with exactly two orbits and `z` interchanges them.
fn swaps_halves(a: &Permutation, z: &Permutation) -> bool {
    let orbits = orbits_under(std::slice::from_ref(a), a.degree());
    orbits.len() == 2 && orbits[0].iter().all(|&x| orbits[1].binary_search(&z.apply(x)).is_ok())
}

/// First `(a, z)` in enumeration order with `a` of cycle type `(n/2, n/2)`
/// and `z` an involution inverting `a` and swapping its two orbits.
/// Degree 2 has no such pair and yields `None`.
pub fn find_regular_dihedral(group: &GroupHandle, cap: u128) -> Result<Option<RegularWitness>> {
    require_transitive(group)?;
    let n = group.degree();
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if n < 4 {
        return Ok(None);
    }
    let half = [n / 2, n / 2];
    let mut rotations = Vec::new();
    let mut involutions = Vec::new();
    for g in group.elements(cap)? {
        let ct = g.cycle_type();
        if ct == half {
            rotations.push(g);
        } else if ct.iter().all(|&c| c == 2) {
            involutions.push(g);
        }
    }
    // For n = 4 the rotations are themselves fixed-point-free involutions.
    if n == 4 {
        involutions.extend(rotations.iter().cloned());
    }
    for a in &rotations {
        let a_inv = a.inverse();
        for z in &involutions {
            if z != a && a.conjugate_by(z) == a_inv && swaps_halves(a, z) {
                return Ok(Some(RegularWitness::dihedral(a.clone(), z.clone())));
            }
        }
    }
    Ok(None)
}

/// Re-checks every defining property of a witness, including membership.
pub fn verify_witness(group: &GroupHandle, witness: &RegularWitness) -> WitnessCheck {
    let mut diagnostics = Vec::new();
    let n = group.degree();
    if witness.degree() != n {
        diagnostics.push(format!("witness degree {} differs from group degree {n}", witness.degree()));
        return WitnessCheck { diagnostics };
    }
    if !group.has(&witness.a) {
        diagnostics.push("a is not in the group".into());
    }
    if witness.subgroup_order != n as u128 {
        diagnostics.push(format!("recorded order {} is not the degree {n}", witness.subgroup_order));
    }
    match (&witness.kind, &witness.z) {
        (WitnessKind::Cyclic, None) => {
            if !witness.a.is_full_cycle() {
                diagnostics.push("a is not an n-cycle".into());
            }
        }
        (WitnessKind::Dihedral, Some(z)) => {
            if !group.has(z) {
                diagnostics.push("z is not in the group".into());
            }
            if n % 2 == 1 || witness.a.cycle_type() != [n / 2, n / 2] {
                diagnostics.push("not semiregular with 2 orbits".into());
            }
            if z.is_identity() || !z.then(z).is_identity() {
                diagnostics.push("z is not an involution".into());
            }
            if witness.a.conjugate_by(z) != witness.a.inverse() {
                diagnostics.push("inversion fails".into());
            }
            match witness.subgroup() {
                Ok(d) if d.order() == n as u128 && is_transitive(&d) => {}
                _ => diagnostics.push("<a, z> is not regular".into()),
            }
        }
        _ => diagnostics.push("kind does not match the presence of z".into()),
    }
    WitnessCheck { diagnostics }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupClass {
    CGroup,
    DGroup,
    Both,
    Neither,
}

impl GroupClass {
    pub fn from_flags(cyclic: bool, dihedral: bool) -> Self {
        match (cyclic, dihedral) {
            (true, true) => Self::Both,
            (true, false) => Self::CGroup,
            (false, true) => Self::DGroup,
            (false, false) => Self::Neither,
        }
    }

    pub fn is_c_group(self) -> bool {
        matches!(self, Self::CGroup | Self::Both)
    }

    pub fn is_d_group(self) -> bool {
        matches!(self, Self::DGroup | Self::Both)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::CGroup => "c-group",
            Self::DGroup => "d-group",
            Self::Both => "both",
            Self::Neither => "neither",
        }
    }
}

/// Both finders' results and the resulting class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub class: GroupClass,
    pub cyclic: Option<RegularWitness>,
    pub dihedral: Option<RegularWitness>,
}

pub fn detect(group: &GroupHandle, cap: u128) -> Result<Detection> {
    let cyclic = find_regular_cyclic(group, cap)?;
    let dihedral = match find_regular_dihedral(group, cap) {
        Err(Error::OddDegree(_)) => None,
        other => other?,
    };
    Ok(Detection {
        class: GroupClass::from_flags(cyclic.is_some(), dihedral.is_some()),
        cyclic,
        dihedral,
    })
}

pub fn group_class(group: &GroupHandle, cap: u128) -> Result<GroupClass> {
    Ok(detect(group, cap)?.class)
}

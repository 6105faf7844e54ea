//! The semilinear group `{x -> a·x^(2^k) + t}` over `GF(64)` (with `a` in the
//! order-7 subgroup) and the search for a degree-28 action of it containing
//! a regular dihedral subgroup of order 28.
//!
//! Candidates for the point stabilizer are `W : <u>` with `W` a 4-dimensional
//! space of translations and `u` an element of order 6 normalizing it.

use crate::actions::coset_action;
use crate::error::Result;
use crate::field::Field;
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::regular::{find_regular_dihedral, RegularWitness};

pub const ORDER: u128 = 2688;
const Q: usize = 64;

pub enum SearchOutcome {
    Found {
        group: GroupHandle,
        witness: RegularWitness,
        transcript: Vec<String>,
    },
    Failed {
        transcript: Vec<String>,
    },
}

impl SearchOutcome {
    pub fn transcript(&self) -> &[String] {
        match self {
            Self::Found { transcript, .. } | Self::Failed { transcript } => transcript,
        }
    }
}

fn gf64() -> Field {
    Field::new(Q as u64).expect("GF(64) is supported")
}

/// `x -> a·x^(2^k) + t` as a permutation of the field elements.
fn semilinear(f: &Field, a: u32, k: u32, t: u32) -> Permutation {
    let images = (0..Q as u32)
        .map(|x| f.add(f.mul(a, f.pow(x, 1 << k)), t) as usize)
        .collect();
    Permutation::from_images(images).expect("semilinear maps are bijections")
}

/// The order-7 multiplier subgroup is generated by `w^9` for a primitive `w`.
fn seven_generator(f: &Field) -> u32 {
    f.pow(f.primitive_element(), 9)
}

pub fn affine_group() -> Result<GroupHandle> {
    let f = gf64();
    let mut gens = vec![semilinear(&f, seven_generator(&f), 0, 0), semilinear(&f, 1, 1, 0)];
    gens.extend((0..6).map(|i| semilinear(&f, 1, 0, 1 << i)));
    GroupHandle::new(Q, gens)
}

/// All 4-dimensional GF(2)-subspaces of GF(2)^6, as (basis, membership mask).
pub(crate) fn four_spaces() -> Vec<([u32; 4], u64)> {
    let mut out = Vec::new();
    for pivots in 0u32..64 {
        if pivots.count_ones() != 4 {
            continue;
        }
        let pivot_list: Vec<u32> = (0..6).filter(|&i| pivots >> i & 1 == 1).collect();
        // Free positions of each row: non-pivot bits below its pivot.
        let free: Vec<Vec<u32>> = pivot_list
            .iter()
            .map(|&p| (0..p).filter(|&i| pivots >> i & 1 == 0).collect())
            .collect();
        let total: u32 = free.iter().map(|f| f.len() as u32).sum();
        for mut choice in 0u32..1 << total {
            let mut basis = [0u32; 4];
            for (row, (&p, fr)) in pivot_list.iter().zip(&free).enumerate() {
                basis[row] = 1 << p;
                for &i in fr {
                    if choice & 1 == 1 {
                        basis[row] |= 1 << i;
                    }
                    choice >>= 1;
                }
            }
            let mut mask = 0u64;
            for s in 0u32..16 {
                let v = (0..4).filter(|&j| s >> j & 1 == 1).fold(0, |acc, j| acc ^ basis[j]);
                mask |= 1 << v;
            }
            out.push((basis, mask));
        }
    }
    out
}

/// Runs the search and reports each stage.
pub fn search() -> Result<SearchOutcome> {
    let f = gf64();
    let g = affine_group()?;
    let mut transcript = vec![format!(
        "built x -> a x^(2^k) + t over GF(64): order {} on {} points",
        g.order(),
        g.degree()
    )];

    let mut order14 = 0usize;
    for e in g.elements(ORDER)? {
        if e.order() == 14 {
            order14 += 1;
        }
    }
    transcript.push(format!(
        "elements of order 14: {order14} (a dihedral subgroup of order 28 needs one)"
    ));

    let spaces = four_spaces();
    let seven = seven_generator(&f);
    let mut pairs = 0usize;
    let mut candidates: Vec<GroupHandle> = Vec::new();
    for e in 0..7u64 {
        let a = f.pow(seven, e);
        for k in [1u32, 5] {
            let linear = |v: u32| f.mul(a, f.pow(v, 1 << k));
            for (basis, mask) in &spaces {
                if !basis.iter().all(|&v| mask >> linear(v) & 1 == 1) {
                    continue;
                }
                pairs += 1;
                // One translation part per coset of W.
                let mut reps: Vec<u32> = Vec::new();
                for t in 0..Q as u32 {
                    if !reps.iter().any(|&r| mask >> (r ^ t) & 1 == 1) {
                        reps.push(t);
                    }
                }
                for t in reps {
                    let mut gens: Vec<Permutation> = basis.iter().map(|&v| semilinear(&f, 1, 0, v)).collect();
                    gens.push(semilinear(&f, a, k, t));
                    let s = GroupHandle::new(Q, gens)?;
                    if s.order() == 96 && !candidates.iter().any(|c| c.same_group(&s)) {
                        candidates.push(s);
                    }
                }
            }
        }
    }
    transcript.push(format!("invariant (order-6 linear part, 4-space) pairs: {pairs}"));
    transcript.push(format!("distinct subgroups of order 96 of the form W : <u>: {}", candidates.len()));

    let mut faithful = 0usize;
    let mut semiregular14 = 0usize;
    for s in &candidates {
        let act = coset_action(&g, s, 28)?;
        if !act.faithful {
            continue;
        }
        faithful += 1;
        // A regular D_28 contains a fixed-point-free element of order 14.
        for e in act.action.elements(ORDER)? {
            if e.order() == 14 && (1..14).all(|i| (0..28).all(|x| !e.pow(i).fixes(x))) {
                semiregular14 += 1;
            }
        }
        if let Some(witness) = find_regular_dihedral(&act.action, ORDER)? {
            transcript.push(format!("candidate {faithful} gives a faithful action with a regular D_28"));
            return Ok(SearchOutcome::Found {
                group: act.action,
                witness,
                transcript,
            });
        }
    }
    transcript.push(format!("faithful degree-28 actions: {faithful}"));
    transcript.push(format!(
        "semiregular elements of order 14 across these actions: {semiregular14}"
    ));
    transcript.push("none contains a regular dihedral subgroup of order 28".into());
    Ok(SearchOutcome::Failed { transcript })
}

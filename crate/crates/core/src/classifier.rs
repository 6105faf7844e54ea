//! Case analysis of imprimitive groups with a regular dihedral subgroup.
//!
//! For each minimal block system the six structural cases are evaluated
//! independently (they are not mutually exclusive, and some groups match
//! none of them verbatim), and every verdict carries the data it was
//! derived from.

use serde::{Deserialize, Serialize};

use crate::actions::{
    action_on_blocks, block_stabilizer, block_stabilizer_restriction, centralizer_elements, center,
    is_primitive, is_transitive, minimal_block_systems, splits_over_central_prime, transitivity_grade,
    BlockSystem, InducedAction, Transitivity, DEFAULT_INDEX_CAP, DEFAULT_ORDER_CAP,
};
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::orbital::{circulant_components_check, shape, suborbit_graphs, OrbitalGraph};
use crate::perm::{is_prime, Permutation};
use crate::regular::{detect, verify_witness, Detection, GroupClass, RegularWitness, WitnessKind};

/// Enumeration caps shared by every exhaustive step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub order: u128,
    pub index: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER_CAP,
            index: DEFAULT_INDEX_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimitiveVerdict {
    TwoTransitive,
    Agl1pSubgroup,
    Neither,
}

/// For a primitive group: 2-transitive, or of prime degree `p` inside
/// `AGL(1, p)` (order dividing `p(p-1)` with a normal regular `Z_p`).
pub fn primitive_verdict(group: &GroupHandle) -> Result<PrimitiveVerdict> {
    if transitivity_grade(group) == Transitivity::TwoTransitive {
        return Ok(PrimitiveVerdict::TwoTransitive);
    }
    let p = group.degree() as u64;
    if is_prime(p) && (p * (p - 1)) as u128 % group.order() == 0 {
        let cycle = group.chain().strong_generators().into_iter().find(Permutation::is_full_cycle);
        let cycle = match cycle {
            Some(c) => Some(c),
            None => group.elements(DEFAULT_ORDER_CAP)?.find(Permutation::is_full_cycle),
        };
        if let Some(c) = cycle {
            let sylow = GroupHandle::new(group.degree(), vec![c])?;
            if sylow.is_normal_in(group) {
                return Ok(PrimitiveVerdict::Agl1pSubgroup);
            }
        }
    }
    Ok(PrimitiveVerdict::Neither)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelOnBlock {
    Trivial,
    PrimitiveFaithful,
    PrimitiveUnfaithful,
    Imprimitive,
    Intransitive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trichotomy {
    /// The kernel is trivial, so the group is isomorphic to its block image.
    IsoImage,
    /// The kernel acts faithfully on a block.
    FaithfulOnBlock { kernel_order: u128 },
    /// The graph is the lexicographic blowup over the block system.
    LexBlowup,
    /// None of the three branches is certified for this graph.
    Unresolved,
}

/// Which of the three kernel branches applies to a connected orbital graph.
pub fn kernel_trichotomy(group: &GroupHandle, system: &BlockSystem, graph: &OrbitalGraph) -> Result<Trichotomy> {
    if !graph.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let induced = action_on_blocks(group, system)?;
    let kernel = &induced.kernel;
    if kernel.is_trivial() {
        return Ok(Trichotomy::IsoImage);
    }
    if kernel.restrict_to(&system.blocks[0])?.order() == kernel.order() {
        return Ok(Trichotomy::FaithfulOnBlock {
            kernel_order: kernel.order(),
        });
    }
    if shape(graph, Some(system)).lex_blowup_of.is_some() {
        return Ok(Trichotomy::LexBlowup);
    }
    Ok(Trichotomy::Unresolved)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Holds,
    Fails,
    NotApplicable,
}

impl CaseStatus {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: u8,
    pub status: CaseStatus,
    pub reason: String,
}

fn case(case: u8, status: CaseStatus, reason: impl Into<String>) -> CaseResult {
    CaseResult {
        case,
        status,
        reason: reason.into(),
    }
}

/// Everything computed for one minimal block system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseEvidence {
    pub system: BlockSystem,
    pub block_size: usize,
    pub block_count: usize,
    pub kernel_order: u128,
    pub kernel_on_block_order: u128,
    pub kernel_on_block: KernelOnBlock,
    pub dk_order: u128,
    pub dk_cyclic: bool,
    pub block_image_order: u128,
    pub block_image_class: GroupClass,
    pub trichotomy: Option<Trichotomy>,
    pub cases: Vec<CaseResult>,
    /// Split verdict of the central prime-order kernel (cases 4 and 5).
    pub kernel_splits: Option<bool>,
    /// An arc whose orbital graph is a lexicographic blowup (case 2).
    pub lex_witness: Option<(usize, usize)>,
    pub centralizer_order: Option<u128>,
    /// `|G : K C_G(K)|` (case 3).
    pub kh_index: Option<u128>,
    pub warnings: Vec<String>,
}

impl CaseEvidence {
    pub fn holding_cases(&self) -> Vec<u8> {
        self.cases
            .iter()
            .filter(|c| c.status == CaseStatus::Holds)
            .map(|c| c.case)
            .collect()
    }

    pub fn status(&self, case: u8) -> CaseStatus {
        self.cases[case as usize - 1].status
    }

    /// One-line rendering of the verdicts, used by golden files.
    pub fn flag_vector(&self) -> String {
        let flags: Vec<String> = self
            .cases
            .iter()
            .map(|c| format!("{}:{}", c.case, c.status.symbol()))
            .collect();
        format!(
            "blocks {}x{} |K|={} |D∩K|={} image={} {}",
            self.block_count,
            self.block_size,
            self.kernel_order,
            self.dk_order,
            self.block_image_class.label(),
            flags.join(" ")
        )
    }
}

/// Precomputed group-level data shared by every block system.
struct Context<'a> {
    group: &'a GroupHandle,
    witness: &'a RegularWitness,
    graphs: &'a [(Vec<usize>, OrbitalGraph)],
    caps: Caps,
}

fn check_dgroup(group: &GroupHandle, witness: &RegularWitness) -> Result<()> {
    if witness.kind != WitnessKind::Dihedral || !verify_witness(group, witness).is_valid() {
        return Err(Error::NotDGroup);
    }
    Ok(())
}

fn check_minimal(group: &GroupHandle, system: &BlockSystem) -> Result<()> {
    if !system.is_invariant(group) {
        return Err(Error::InvariantViolation("block system is not invariant".into()));
    }
    if system.is_trivial() {
        return Err(Error::InvariantViolation("block system is trivial".into()));
    }
    if !is_primitive(&block_stabilizer_restriction(group, system, 0)?)? {
        return Err(Error::InvariantViolation(
            "block stabilizer acts imprimitively on its block; system is not minimal".into(),
        ));
    }
    Ok(())
}

/// Evaluates cases 1-6 for `group`, regular dihedral `witness` and minimal
/// `system`.
pub fn classify_case(
    group: &GroupHandle,
    witness: &RegularWitness,
    system: &BlockSystem,
    caps: Caps,
) -> Result<CaseEvidence> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    if is_primitive(group)? {
        return Err(Error::PrimitiveInput);
    }
    check_dgroup(group, witness)?;
    check_minimal(group, system)?;
    let graphs = suborbit_graphs(group, 0)?;
    let ctx = Context {
        group,
        witness,
        graphs: &graphs,
        caps,
    };
    evaluate(&ctx, system)
}

fn dk_elements(witness: &RegularWitness, system: &BlockSystem) -> Vec<Permutation> {
    witness
        .elements()
        .into_iter()
        .filter(|d| system.fixes_all_blocks(d))
        .collect()
}

fn evaluate(ctx: &Context<'_>, system: &BlockSystem) -> Result<CaseEvidence> {
    let group = ctx.group;
    let n = group.degree();
    let induced = action_on_blocks(group, system)?;
    let kernel = &induced.kernel;
    let k_order = kernel.order();
    let k_on_block = kernel.restrict_to(&system.blocks[0])?;
    let kb_order = k_on_block.order();
    let kernel_on_block = if kernel.is_trivial() {
        KernelOnBlock::Trivial
    } else if !is_transitive(&k_on_block) {
        KernelOnBlock::Intransitive
    } else if !is_primitive(&k_on_block)? {
        KernelOnBlock::Imprimitive
    } else if kb_order == k_order {
        KernelOnBlock::PrimitiveFaithful
    } else {
        KernelOnBlock::PrimitiveUnfaithful
    };
    let dk = dk_elements(ctx.witness, system);
    let dk_order = dk.len() as u128;
    let dk_cyclic = dk.iter().any(|d| d.order() as u128 == dk_order);
    let image_detection = detect(&induced.image, ctx.caps.order)?;
    let image_class = image_detection.class;
    let b = system.block_size;
    let m = system.block_count();

    let connected = ctx.graphs.iter().find(|(_, g)| g.is_connected());
    let trichotomy = match connected {
        Some((_, g)) => Some(kernel_trichotomy(group, system, g)?),
        None => None,
    };

    let mut ev = CaseEvidence {
        system: system.clone(),
        block_size: b,
        block_count: m,
        kernel_order: k_order,
        kernel_on_block_order: kb_order,
        kernel_on_block,
        dk_order,
        dk_cyclic,
        block_image_order: induced.image.order(),
        block_image_class: image_class,
        trichotomy,
        cases: Vec::with_capacity(6),
        kernel_splits: None,
        lex_witness: None,
        centralizer_order: None,
        kh_index: None,
        warnings: Vec::new(),
    };

    // Case 1: trivial kernel, blocks of size 2, cyclic regular block image.
    ev.cases.push(if kernel_on_block != KernelOnBlock::Trivial {
        case(1, CaseStatus::NotApplicable, format!("kernel has order {k_order}"))
    } else if 2 * m != n {
        case(1, CaseStatus::Fails, format!("{m} blocks, not n/2 = {}", n / 2))
    } else if !image_class.is_c_group() {
        case(1, CaseStatus::Fails, "block image has no regular cyclic subgroup")
    } else {
        case(1, CaseStatus::Holds, "kernel trivial; block image is a c-group of degree n/2")
    });

    // Case 2: primitive unfaithful kernel on a block and a lex-blowup orbital graph.
    ev.cases.push(if kernel_on_block != KernelOnBlock::PrimitiveUnfaithful {
        case(2, CaseStatus::NotApplicable, "kernel is not primitive and unfaithful on a block")
    } else {
        let lex = ctx
            .graphs
            .iter()
            .find(|(_, g)| shape(g, Some(system)).lex_blowup_of.is_some());
        match lex {
            Some((_, g)) => {
                ev.lex_witness = Some(g.base_arc);
                case(
                    2,
                    CaseStatus::Holds,
                    format!(
                        "orbital graph of arc ({}, {}) is a lexicographic blowup",
                        g.base_arc.0 + 1,
                        g.base_arc.1 + 1
                    ),
                )
            }
            None => case(2, CaseStatus::Fails, "no orbital graph is a lexicographic blowup"),
        }
    });

    // Case 3: faithful primitive kernel with trivial intersection with its centralizer.
    ev.cases.push(if kernel_on_block != KernelOnBlock::PrimitiveFaithful {
        case(3, CaseStatus::NotApplicable, "kernel is not primitive and faithful on a block")
    } else {
        let cent = centralizer_elements(group, kernel, ctx.caps.order)?;
        let mut gens = kernel.generators().to_vec();
        gens.extend(cent.generators().iter().cloned());
        let kh = GroupHandle::generated_by(n, gens)?;
        let meet = k_order * cent.order() / kh.order();
        ev.centralizer_order = Some(cent.order());
        ev.kh_index = Some(group.order() / kh.order());
        if meet != 1 {
            case(
                3,
                CaseStatus::Fails,
                format!("kernel meets its centralizer in a subgroup of order {meet}"),
            )
        } else if !kh.is_normal_in(group) {
            case(3, CaseStatus::Fails, "K x C_G(K) is not normal")
        } else {
            case(
                3,
                CaseStatus::Holds,
                format!(
                    "K x C_G(K) has order {} and index {}",
                    kh.order(),
                    group.order() / kh.order()
                ),
            )
        }
    });

    // Case 4: central kernel of order 2, dihedral block image, non-split.
    ev.cases.push(if k_order != 2 {
        case(4, CaseStatus::NotApplicable, format!("kernel has order {k_order}"))
    } else {
        let z = nontrivial_generator(kernel);
        let centre = center(group, ctx.caps.order)?;
        let splits = splits_over_central_prime(group, &z, 2)?;
        ev.kernel_splits = Some(splits);
        if !(centre.order() == 2 && centre.has(&z)) {
            case(4, CaseStatus::Fails, format!("centre has order {}, not equal to K", centre.order()))
        } else if 2 * m != n || !image_class.is_d_group() {
            case(4, CaseStatus::Fails, "block image is not a d-group of degree n/2")
        } else if splits {
            case(4, CaseStatus::Fails, "K = Z(G) has a complement (split extension)")
        } else {
            case(4, CaseStatus::Holds, "K = Z(G) of order 2, non-split, d-group block image")
        }
    });

    // Case 5: kernel of odd prime order p with G / C_G(K) cyclic of order 2l, l odd, 2l | p - 1.
    ev.cases.push(if !(k_order > 2 && is_prime(k_order as u64)) {
        case(5, CaseStatus::NotApplicable, "kernel is not of odd prime order")
    } else {
        let p = k_order as u64;
        let z = nontrivial_generator(kernel);
        let cent = centralizer_elements(group, kernel, ctx.caps.order)?;
        ev.centralizer_order = Some(cent.order());
        let quotient = (group.order() / cent.order()) as u64;
        let generator = power_map_generator(group, &z, p);
        let splits = splits_over_central_prime(&cent, &z, p)?;
        ev.kernel_splits = Some(splits);
        let l = quotient / 2;
        if quotient % 2 == 1 || l % 2 == 0 || (p - 1) % quotient != 0 {
            case(
                5,
                CaseStatus::Fails,
                format!("|G : C_G(K)| = {quotient} is not 2l with l odd dividing (p - 1) / 2"),
            )
        } else if generator.map(|(_, ord)| ord) != Some(quotient) {
            case(5, CaseStatus::Fails, "action on K does not have a cyclic generator of the right order")
        } else if splits {
            case(5, CaseStatus::Fails, "K has a complement in C_G(K) (split extension)")
        } else {
            case(5, CaseStatus::Holds, format!("|G : C_G(K)| = {quotient}, non-split over K"))
        }
    });

    // Case 6: blocks of size 4, elementary abelian 2-kernel, |D∩K| = 2, cyclic block image.
    ev.cases.push(if !(b == 4 && !kernel.is_trivial() && kernel.is_elementary_abelian(2)) {
        case(6, CaseStatus::NotApplicable, "not blocks of size 4 with an elementary abelian 2-kernel")
    } else if dk_order != 2 {
        case(6, CaseStatus::Fails, format!("|D∩K| = {dk_order}, not 2"))
    } else if !image_class.is_c_group() {
        case(6, CaseStatus::Fails, "block image is not a c-group")
    } else {
        case(6, CaseStatus::Holds, "|B| = 4, |D∩K| = 2, block image is a c-group of degree n/4")
    });

    let holding = ev.holding_cases();
    if holding.is_empty() {
        if ev.status(4) == CaseStatus::Fails && ev.kernel_splits == Some(true) {
            ev.warnings.push(format!(
                "blocks of size {b}: the kernel is a central Z_2 whose extension splits; this shape is \
                 realized by d-groups with |B| = 2 but is not covered by case 4, and no case holds"
            ));
        } else if ev.status(5) == CaseStatus::Fails && ev.kernel_splits == Some(true) {
            ev.warnings.push(format!(
                "blocks of size {b}: the kernel is Z_{k_order} with a complement in its centralizer; \
                 case 5 requires a non-split extension and no case holds"
            ));
        } else {
            ev.warnings.push(format!("blocks of size {b}: no case holds"));
        }
    } else if holding.len() > 1 {
        ev.warnings.push(format!(
            "blocks of size {b}: several cases hold simultaneously: {holding:?}"
        ));
    }
    Ok(ev)
}

fn nontrivial_generator(group: &GroupHandle) -> Permutation {
    group
        .generators()
        .iter()
        .find(|g| !g.is_identity())
        .cloned()
        .expect("nontrivial group")
}

/// The exponents `e` with `g^-1 z g = z^e` generate a subgroup of the
/// units mod `p`; returns a generating exponent and its multiplicative order.
fn power_map_generator(group: &GroupHandle, z: &Permutation, p: u64) -> Option<(u64, u64)> {
    let powers: Vec<Permutation> = (0..p as i64).map(|e| z.pow(e)).collect();
    let mut exponents = Vec::new();
    for g in group.generators() {
        let image = z.conjugate_by(g);
        exponents.push(powers.iter().position(|q| *q == image)? as u64);
    }
    let mut subgroup = vec![1u64];
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &e in &exponents {
            let y = x * e % p;
            if !subgroup.contains(&y) {
                subgroup.push(y);
                frontier.push(y);
            }
        }
    }
    let size = subgroup.len() as u64;
    let mult_order = |e: u64| {
        let (mut x, mut k) = (e % p, 1);
        while x != 1 {
            x = x * e % p;
            k += 1;
        }
        k
    };
    subgroup
        .iter()
        .copied()
        .find(|&e| mult_order(e) == size)
        .map(|e| (e, size))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> LemmaCheck {
    LemmaCheck {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Structural facts that every d-group and block system must satisfy.
pub fn lemma_suite(
    group: &GroupHandle,
    witness: &RegularWitness,
    system: &BlockSystem,
    caps: Caps,
) -> Result<Vec<LemmaCheck>> {
    check_dgroup(group, witness)?;
    let induced = action_on_blocks(group, system)?;
    let graphs = suborbit_graphs(group, 0)?;
    lemma_checks(group, witness, system, &induced, &graphs, caps)
}

fn lemma_checks(
    group: &GroupHandle,
    witness: &RegularWitness,
    system: &BlockSystem,
    induced: &InducedAction,
    graphs: &[(Vec<usize>, OrbitalGraph)],
    caps: Caps,
) -> Result<Vec<LemmaCheck>> {
    let b = system.block_size;
    let mut out = Vec::new();
    let dk = dk_elements(witness, system);
    let dk_order = dk.len();
    let dk_group = GroupHandle::generated_by(group.degree(), dk.clone())?.restrict_to(&system.blocks[0])?;
    let dk_orbits = crate::actions::orbits(&dk_group);
    let shape_ok = (dk_order == b && dk_orbits.len() == 1)
        || (2 * dk_order == b && dk_orbits.len() == 2 && dk_orbits.iter().all(|o| o.len() == dk_order));
    out.push(check(
        "dk-order",
        shape_ok,
        format!("|D∩K| = {dk_order}, |B| = {b}, {} orbit(s) on a block", dk_orbits.len()),
    ));
    if system.block_count() > 2 {
        let cyclic = dk.iter().any(|d| d.order() as usize == dk_order);
        out.push(check("dk-cyclic", cyclic, format!("|D∩K| = {dk_order}")));
    }

    let stab = block_stabilizer(group, system, 0)?;
    let db: Vec<Permutation> = witness.elements().into_iter().filter(|d| stab.has(d)).collect();
    let db_group = GroupHandle::generated_by(group.degree(), db)?.restrict_to(&system.blocks[0])?;
    let db_regular = is_transitive(&db_group) && db_group.order() == b as u128;
    out.push(check(
        "block-regular",
        db_regular,
        format!("D_B acts on a block with order {}", db_group.order()),
    ));
    let local = block_stabilizer_restriction(group, system, 0)?;
    let local_class = detect(&local, caps.order)?.class;
    out.push(check(
        "block-stabilizer-class",
        local_class != GroupClass::Neither,
        format!("G_B on a block is {}", local_class.label()),
    ));

    let k_on_block = induced.kernel.restrict_to(&system.blocks[0])?;
    if let Some(p) = k_on_block.elementary_abelian_prime() {
        let whole = induced.kernel.is_elementary_abelian(p);
        out.push(check(
            "kernel-elementary-abelian",
            whole,
            format!("K on a block is elementary abelian of exponent {p}"),
        ));
    }

    let image_class = detect(&induced.image, caps.order)?.class;
    out.push(check(
        "block-image-class",
        image_class != GroupClass::Neither,
        format!("block image is {}", image_class.label()),
    ));

    let bad: Vec<String> = graphs
        .iter()
        .filter(|(_, g)| g.is_connected() && !g.is_self_paired())
        .map(|(_, g)| format!("({}, {})", g.base_arc.0 + 1, g.base_arc.1 + 1))
        .collect();
    out.push(check(
        "connected-orbitals-undirected",
        bad.is_empty(),
        if bad.is_empty() {
            "every connected orbital graph is self-paired".to_string()
        } else {
            format!("directed connected orbital graphs: {}", bad.join(", "))
        },
    ));
    Ok(out)
}

/// Checks for a group with a two-block minimal system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiprimitiveReport {
    pub half_order: u128,
    /// Some orbital graph is `K_{m,m}` with the blocks as sides.
    pub complete_bipartite_orbital: bool,
    /// `G = G+ x Z_2` with a central involution outside `G+`.
    pub direct_product_with_z2: bool,
    /// Degree `2p`, `|G| = 2pk` with `k` odd and `2k | p - 1`, normal `Z_p`.
    pub affine_shape: bool,
    /// `G` has the shape of `S_4` with `G+` of the shape of `A_4`.
    pub s4_shape: bool,
    /// Unique minimal normal subgroup, nonabelian and simple.
    pub almost_simple: bool,
    pub matched_parts: Vec<u8>,
}

pub fn biprimitive_report(
    group: &GroupHandle,
    witness: &RegularWitness,
    system: &BlockSystem,
    caps: Caps,
) -> Result<BiprimitiveReport> {
    check_dgroup(group, witness)?;
    if system.block_count() != 2 {
        return Err(Error::InvariantViolation("bi-primitive analysis needs exactly two blocks".into()));
    }
    for i in 0..2 {
        if !is_primitive(&block_stabilizer_restriction(group, system, i)?)? {
            return Err(Error::InvariantViolation("a block stabilizer is imprimitive on its block".into()));
        }
    }
    let n = group.degree();
    let half = block_stabilizer(group, system, 0)?;
    let graphs = suborbit_graphs(group, 0)?;
    let sides = (system.blocks[0].clone(), system.blocks[1].clone());
    let complete_bipartite_orbital = graphs.iter().any(|(_, g)| {
        shape(g, None)
            .bipartition
            .is_some_and(|(x, y)| (x.clone(), y.clone()) == sides || (y, x) == sides)
    });

    let centre = center(group, caps.order)?;
    let direct_product_with_z2 = centre
        .elements(caps.order)?
        .any(|c| c.order() == 2 && !half.has(&c));

    let order = group.order();
    let m = (n / 2) as u64;
    let affine_shape = is_prime(m) && m > 2 && {
        let p = m as u128;
        order % (2 * p) == 0 && {
            let k = order / (2 * p);
            k % 2 == 1 && (p - 1) % (2 * k) == 0 && normal_sylow_cyclic(group, m, caps)?
        }
    };

    let s4_shape = order == 24 && half.order() == 12 && group.derived_series_orders()? == vec![24, 12, 4, 1];
    let almost_simple = unique_simple_minimal_normal(group, caps)?;

    let mut matched_parts = Vec::new();
    for (part, flag) in [
        (1, complete_bipartite_orbital),
        (2, direct_product_with_z2),
        (3, affine_shape),
        (4, s4_shape),
        (5, almost_simple),
    ] {
        if flag {
            matched_parts.push(part);
        }
    }
    Ok(BiprimitiveReport {
        half_order: half.order(),
        complete_bipartite_orbital,
        direct_product_with_z2,
        affine_shape,
        s4_shape,
        almost_simple,
        matched_parts,
    })
}

fn normal_sylow_cyclic(group: &GroupHandle, p: u64, caps: Caps) -> Result<bool> {
    for g in group.elements(caps.order)? {
        if g.order() == p {
            return Ok(GroupHandle::new(group.degree(), vec![g])?.is_normal_in(group));
        }
    }
    Ok(false)
}

/// Whether the group has exactly one minimal normal subgroup and it is
/// nonabelian simple. Minimal normal subgroups are normal closures of single
/// elements, so it suffices to scan element normal closures.
fn unique_simple_minimal_normal(group: &GroupHandle, caps: Caps) -> Result<bool> {
    let mut closures: Vec<GroupHandle> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for g in group.elements(caps.order)? {
        if g.is_identity() || seen.contains(&g) {
            continue;
        }
        // Conjugate elements have the same normal closure.
        let mut class = vec![g.clone()];
        seen.insert(g.clone());
        let mut head = 0;
        while head < class.len() {
            let x = class[head].clone();
            head += 1;
            for s in group.generators() {
                let y = x.conjugate_by(s);
                if seen.insert(y.clone()) {
                    class.push(y);
                }
            }
        }
        let c = group.normal_closure(std::slice::from_ref(&g))?;
        if !closures.iter().any(|d| d.same_group(&c)) {
            closures.push(c);
        }
    }
    let minimal: Vec<&GroupHandle> = closures
        .iter()
        .filter(|c| !closures.iter().any(|d| d.order() < c.order() && d.is_subgroup_of(c)))
        .collect();
    if minimal.len() != 1 {
        return Ok(false);
    }
    let socle = minimal[0];
    if socle.is_abelian() {
        return Ok(false);
    }
    // A minimal normal subgroup is simple iff it is perfect and no proper
    // nontrivial normal closure inside it exists.
    for h in socle.elements(caps.order)? {
        if !h.is_identity() && socle.normal_closure(std::slice::from_ref(&h))?.order() != socle.order() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Primitivity {
    Primitive { verdict: PrimitiveVerdict },
    Imprimitive { minimal_systems: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuborbitSummary {
    pub representative: usize,
    pub size: usize,
    pub connected: bool,
    pub self_paired: bool,
    /// For disconnected graphs: whether every component carries a cyclic
    /// transitive action.
    pub circulant_components: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalSummary {
    pub suborbits: Vec<SuborbitSummary>,
    /// Every connected orbital graph is self-paired.
    pub connected_undirected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input_id: String,
    pub degree: usize,
    pub order: u128,
    pub class: GroupClass,
    pub witness: Option<RegularWitness>,
    pub transitivity: Transitivity,
    pub primitivity: Primitivity,
    pub systems: Vec<CaseEvidence>,
    pub lemmas: Vec<LemmaCheck>,
    pub biprimitive: Option<BiprimitiveReport>,
    pub orbitals: OrbitalSummary,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    /// Short human-readable rendering of the report.
    pub fn summary(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let _ = writeln!(s, "{}: degree {}, order {}", self.input_id, self.degree, self.order);
        let prim = match &self.primitivity {
            Primitivity::Primitive { verdict } => format!(
                "primitive, {}",
                match verdict {
                    PrimitiveVerdict::TwoTransitive => "2-transitive",
                    PrimitiveVerdict::Agl1pSubgroup => "inside AGL(1,p)",
                    PrimitiveVerdict::Neither => "neither 2-transitive nor affine of prime degree",
                }
            ),
            Primitivity::Imprimitive { minimal_systems } => {
                format!("imprimitive, {minimal_systems} minimal block system(s)")
            }
        };
        let _ = writeln!(s, "{prim}, class {}", self.class.label());
        if let Some(w) = &self.witness {
            let _ = writeln!(
                s,
                "witness: {} of order {}: a = {}{}",
                match w.kind {
                    WitnessKind::Cyclic => "cyclic",
                    WitnessKind::Dihedral => "dihedral",
                },
                w.subgroup_order,
                w.a,
                w.z.as_ref().map(|z| format!(", z = {z}")).unwrap_or_default()
            );
        }
        for ev in &self.systems {
            let _ = writeln!(s, "{}", ev.flag_vector());
        }
        let failed: Vec<&LemmaCheck> = self.lemmas.iter().filter(|l| !l.passed).collect();
        let _ = writeln!(
            s,
            "lemma checks: {} passed, {} failed",
            self.lemmas.len() - failed.len(),
            failed.len()
        );
        let _ = writeln!(
            s,
            "connected orbital graphs undirected: {}",
            if self.orbitals.connected_undirected { "yes" } else { "no" }
        );
        if let Some(bp) = &self.biprimitive {
            let _ = writeln!(s, "bi-primitive parts matched: {:?}", bp.matched_parts);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub caps: Caps,
    /// Regular dihedral subgroup to use instead of the first one found.
    pub witness: Option<RegularWitness>,
}

/// Full pipeline: class detection, then the primitive, bi-primitive and
/// imprimitive analyses as applicable.
pub fn analyze(group: &GroupHandle, input_id: &str, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    let caps = options.caps;
    let mut detection: Detection = detect(group, caps.order)?;
    if let Some(w) = &options.witness {
        if w.kind == WitnessKind::Dihedral && verify_witness(group, w).is_valid() {
            detection.dihedral = Some(w.clone());
            detection.class = GroupClass::from_flags(detection.cyclic.is_some(), true);
        } else {
            return Err(Error::InvariantViolation("supplied witness does not verify".into()));
        }
    }
    let witness = detection.dihedral.clone().or(detection.cyclic.clone());
    let graphs = suborbit_graphs(group, 0)?;
    let mut warnings = Vec::new();

    let mut suborbit_rows = Vec::new();
    for (s, g) in &graphs {
        let connected = g.is_connected();
        let circulant = if connected {
            None
        } else {
            Some(circulant_components_check(group, g, witness.as_ref(), caps.order)?)
        };
        suborbit_rows.push(SuborbitSummary {
            representative: s[0],
            size: s.len(),
            connected,
            self_paired: g.is_self_paired(),
            circulant_components: circulant,
        });
    }
    let connected_undirected = suborbit_rows.iter().all(|r| !r.connected || r.self_paired);
    if detection.class.is_d_group() && !connected_undirected {
        warnings.push("a connected orbital graph of this d-group is directed".into());
    }
    if detection.class.is_d_group() && suborbit_rows.iter().any(|r| r.circulant_components == Some(false)) {
        warnings.push("a component of a disconnected orbital graph has no cyclic transitive action".into());
    }

    let primitive = is_primitive(group)?;
    let mut systems = Vec::new();
    let mut lemmas = Vec::new();
    let mut biprimitive = None;
    let primitivity = if primitive {
        Primitivity::Primitive {
            verdict: primitive_verdict(group)?,
        }
    } else {
        let minimal = minimal_block_systems(group)?;
        if let Some(d) = detection.dihedral.as_ref() {
            let ctx = Context {
                group,
                witness: d,
                graphs: &graphs,
                caps,
            };
            for sys in &minimal {
                let ev = evaluate(&ctx, sys)?;
                warnings.extend(ev.warnings.iter().cloned());
                let induced = action_on_blocks(group, sys)?;
                for mut l in lemma_checks(group, d, sys, &induced, &graphs, caps)? {
                    if !l.passed {
                        warnings.push(format!("check {} failed for blocks of size {}: {}", l.name, sys.block_size, l.detail));
                    }
                    l.name = format!("{} [blocks of size {}]", l.name, sys.block_size);
                    lemmas.push(l);
                }
                systems.push(ev);
            }
            if let Some(two) = minimal.iter().find(|s| s.block_count() == 2) {
                biprimitive = Some(biprimitive_report(group, d, two, caps)?);
            }
        }
        Primitivity::Imprimitive {
            minimal_systems: minimal.len(),
        }
    };

    Ok(AnalysisReport {
        input_id: input_id.to_string(),
        degree: group.degree(),
        order: group.order(),
        class: detection.class,
        witness,
        transitivity: transitivity_grade(group),
        primitivity,
        systems,
        lemmas,
        biprimitive,
        orbitals: OrbitalSummary {
            suborbits: suborbit_rows,
            connected_undirected,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::BlockSystem;
    use crate::group::group_from_cycles;
    use crate::regular::find_regular_dihedral;

    #[test]
    fn primitive_verdicts() {
        let s4 = group_from_cycles(4, &["(1 2)", "(1 2 3 4)"]).unwrap();
        assert_eq!(primitive_verdict(&s4).unwrap(), PrimitiveVerdict::TwoTransitive);
        let a4 = group_from_cycles(4, &["(1 2 3)", "(2 3 4)"]).unwrap();
        assert_eq!(primitive_verdict(&a4).unwrap(), PrimitiveVerdict::TwoTransitive);
        let d10 = group_from_cycles(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]).unwrap();
        assert_eq!(primitive_verdict(&d10).unwrap(), PrimitiveVerdict::Agl1pSubgroup);
    }

    #[test]
    fn dihedral_of_order_sixteen() {
        let d = group_from_cycles(8, &["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"]).unwrap();
        let w = find_regular_dihedral(&d, 1000).unwrap().unwrap();
        let sys = BlockSystem::from_block(&d, &[0, 4]).unwrap();
        let ev = classify_case(&d, &w, &sys, Caps::default()).unwrap();
        assert_eq!(ev.kernel_order, 2);
        assert_eq!(ev.dk_order, 2);
        // D16 = Z2 . D8 is non-split over its centre, and the block image is D8.
        assert_eq!(ev.kernel_splits, Some(false));
        assert_eq!(ev.status(4), CaseStatus::Holds);
        assert_eq!(ev.holding_cases(), vec![4]);
        for l in lemma_suite(&d, &w, &sys, Caps::default()).unwrap() {
            assert!(l.passed, "{l:?}");
        }
    }

    #[test]
    fn rejects_primitive_and_non_dihedral_input() {
        let s4 = group_from_cycles(4, &["(1 2)", "(1 2 3 4)"]).unwrap();
        let w = find_regular_dihedral(&s4, 1000).unwrap().unwrap();
        let sys = BlockSystem::from_cells(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(classify_case(&s4, &w, &sys, Caps::default()), Err(Error::PrimitiveInput));
        let z8 = group_from_cycles(8, &["(1 2 3 4 5 6 7 8)"]).unwrap();
        let fake = RegularWitness::cyclic(z8.generators()[0].clone());
        let sys = BlockSystem::from_block(&z8, &[0, 4]).unwrap();
        assert_eq!(classify_case(&z8, &fake, &sys, Caps::default()), Err(Error::NotDGroup));
    }

    #[test]
    fn analyze_reports_primitive_groups() {
        let s4 = group_from_cycles(4, &["(1 2)", "(1 2 3 4)"]).unwrap();
        let r = analyze(&s4, "s4", &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.class, GroupClass::Both);
        assert_eq!(
            r.primitivity,
            Primitivity::Primitive {
                verdict: PrimitiveVerdict::TwoTransitive
            }
        );
        assert!(r.summary().contains("primitive, 2-transitive, class both"));
        let intrans = group_from_cycles(4, &["(1 2)"]).unwrap();
        assert_eq!(analyze(&intrans, "x", &AnalyzeOptions::default()), Err(Error::IntransitiveGroup));
    }

    #[test]
    fn trichotomy_requires_connected_graph() {
        let d = group_from_cycles(8, &["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"]).unwrap();
        let sys = BlockSystem::from_block(&d, &[0, 4]).unwrap();
        let disconnected = crate::orbital::orbital_graph(&d, (0, 4)).unwrap();
        assert_eq!(kernel_trichotomy(&d, &sys, &disconnected), Err(Error::DisconnectedGraph));
        let cycle = crate::orbital::orbital_graph(&d, (0, 1)).unwrap();
        assert_eq!(
            kernel_trichotomy(&d, &sys, &cycle).unwrap(),
            Trichotomy::FaithfulOnBlock { kernel_order: 2 }
        );
    }
}

//! Orbits, transitivity, block systems, actions on blocks and on cosets,
//! centralizers and the split test for central subgroups of prime order.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::{is_prime, Permutation};

/// Default cap on exhaustive element filtration.
pub const DEFAULT_ORDER_CAP: u128 = 1_000_000;
/// Default cap on coset-action degrees.
pub const DEFAULT_INDEX_CAP: u128 = 10_000;

pub fn orbit(group: &GroupHandle, point: usize) -> Vec<usize> {
    orbit_under(group.generators(), group.degree(), point)
}

pub(crate) fn orbit_under(gens: &[Permutation], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut out = vec![point];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Orbits as sorted point lists, ordered by smallest point.
pub fn orbits(group: &GroupHandle) -> Vec<Vec<usize>> {
    orbits_under(group.generators(), group.degree())
}

pub(crate) fn orbits_under(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for x in 0..degree {
        if !assigned[x] {
            let o = orbit_under(gens, degree, x);
            for &y in &o {
                assigned[y] = true;
            }
            out.push(o);
        }
    }
    out
}

pub fn is_transitive(group: &GroupHandle) -> bool {
    orbit(group, 0).len() == group.degree()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transitivity {
    Intransitive,
    Transitive,
    TwoTransitive,
}

pub fn transitivity_grade(group: &GroupHandle) -> Transitivity {
    if !is_transitive(group) {
        return Transitivity::Intransitive;
    }
    let n = group.degree();
    if n < 2 {
        return Transitivity::Transitive;
    }
    let stab = group.point_stabilizer(0).expect("point in range");
    if orbit(&stab, 1).len() == n - 1 {
        Transitivity::TwoTransitive
    } else {
        Transitivity::Transitive
    }
}

pub fn is_regular(group: &GroupHandle) -> bool {
    is_transitive(group) && group.order() == group.degree() as u128
}

/// Every point stabilizer is trivial, i.e. every orbit has length |G|.
pub fn is_semiregular(group: &GroupHandle) -> bool {
    let order = group.order();
    orbits(group).iter().all(|o| o.len() as u128 == order)
}

pub fn point_stabilizer(group: &GroupHandle, point: usize) -> Result<GroupHandle> {
    group.point_stabilizer(point)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes, keeping the smaller root; false if already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Smallest block of imprimitivity containing all of `points`
/// (union-find refinement). Returns the whole domain when no proper block
/// contains them.
pub fn minimal_block_containing_set(group: &GroupHandle, points: &[usize]) -> Result<Vec<usize>> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    let n = group.degree();
    for &x in points {
        if x >= n {
            return Err(Error::PointOutOfRange { point: x, degree: n });
        }
    }
    let Some(&first) = points.first() else {
        return Ok(Vec::new());
    };
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    for &x in &points[1..] {
        if uf.union(first, x) {
            queue.push((first, x));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let root = uf.find(first);
    Ok((0..n).filter(|&x| uf.find(x) == root).collect())
}

pub fn minimal_block_containing(group: &GroupHandle, alpha: usize, beta: usize) -> Result<Vec<usize>> {
    if alpha == beta {
        return Err(Error::InvariantViolation(
            "minimal block needs two distinct points".into(),
        ));
    }
    minimal_block_containing_set(group, &[alpha, beta])
}

/// A G-invariant partition into equal-sized cells. Cells are sorted and
/// listed by smallest point, which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BlockSystemRecord")]
pub struct BlockSystem {
    pub block_size: usize,
    pub blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

#[derive(Deserialize)]
struct BlockSystemRecord {
    block_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<BlockSystemRecord> for BlockSystem {
    type Error = Error;

    fn try_from(record: BlockSystemRecord) -> Result<Self> {
        let degree = record.blocks.iter().map(Vec::len).sum();
        let system = Self::from_cells(degree, record.blocks)?;
        if system.block_size != record.block_size {
            return Err(Error::InvariantViolation(format!(
                "block size {} recorded, cells have size {}",
                record.block_size, system.block_size
            )));
        }
        Ok(system)
    }
}

impl BlockSystem {
    pub fn from_cells(degree: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut cells: Vec<Vec<usize>> = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cells.sort();
        let size = cells.first().map_or(0, Vec::len);
        if size == 0 || cells.iter().any(|c| c.len() != size) {
            return Err(Error::InvariantViolation("cells must be nonempty and equal-sized".into()));
        }
        let mut block_of = vec![usize::MAX; degree];
        for (i, cell) in cells.iter().enumerate() {
            for &x in cell {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if block_of[x] != usize::MAX {
                    return Err(Error::InvariantViolation(format!("point {} in two cells", x + 1)));
                }
                block_of[x] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::InvariantViolation("cells do not cover the domain".into()));
        }
        Ok(Self {
            block_size: size,
            blocks: cells,
            block_of,
        })
    }

    /// The system generated by one block: its images under the group.
    pub fn from_block(group: &GroupHandle, block: &[usize]) -> Result<Self> {
        let mut cells: Vec<Vec<usize>> = vec![{
            let mut b = block.to_vec();
            b.sort_unstable();
            b
        }];
        let mut owner = vec![usize::MAX; group.degree()];
        for &x in &cells[0] {
            owner[x] = 0;
        }
        let mut head = 0;
        while head < cells.len() {
            let cell = cells[head].clone();
            head += 1;
            for g in group.generators() {
                let mut image: Vec<usize> = cell.iter().map(|&x| g.apply(x)).collect();
                image.sort_unstable();
                let o = owner[image[0]];
                if o == usize::MAX {
                    if image.iter().any(|&y| owner[y] != usize::MAX) {
                        return Err(Error::InvariantViolation("not a block".into()));
                    }
                    for &y in &image {
                        owner[y] = cells.len();
                    }
                    cells.push(image);
                } else if cells[o] != image {
                    return Err(Error::InvariantViolation("not a block".into()));
                }
            }
        }
        Self::from_cells(group.degree(), cells)
    }

    pub fn degree(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b[0]).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size == 1 || self.blocks.len() == 1
    }

    /// Permutation induced on block indices, or `None` if `g` breaks a cell.
    pub fn induced(&self, g: &Permutation) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.blocks.len());
        for cell in &self.blocks {
            let target = self.block_of[g.apply(cell[0])];
            if cell.iter().any(|&x| self.block_of[g.apply(x)] != target) {
                return None;
            }
            images.push(target);
        }
        Permutation::from_images(images).ok()
    }

    pub fn is_invariant(&self, group: &GroupHandle) -> bool {
        group.degree() == self.degree() && group.generators().iter().all(|g| self.induced(g).is_some())
    }

    /// Whether `g` fixes every block setwise.
    pub fn fixes_all_blocks(&self, g: &Permutation) -> bool {
        (0..self.degree()).all(|x| self.block_of[g.apply(x)] == self.block_of[x])
    }

    /// Rebuilds the point-to-block map after deserialization.
    pub fn reindexed(self) -> Result<Self> {
        let degree = self.blocks.iter().map(Vec::len).sum();
        Self::from_cells(degree, self.blocks)
    }
}

/// Transitive group with no nontrivial block system.
pub fn is_primitive(group: &GroupHandle) -> Result<bool> {
    if !is_transitive(group) {
        return Ok(false);
    }
    let n = group.degree();
    for beta in 1..n {
        if minimal_block_containing(group, 0, beta)?.len() < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nontrivial blocks containing point 0 that arise from a pair.
fn pair_blocks(group: &GroupHandle) -> Result<Vec<Vec<usize>>> {
    let n = group.degree();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for beta in 1..n {
        let b = minimal_block_containing(group, 0, beta)?;
        if b.len() < n && !out.contains(&b) {
            out.push(b);
        }
    }
    Ok(out)
}

/// All minimal block systems: those generated by inclusion-minimal
/// nontrivial blocks, so that the group induced on a block is primitive.
pub fn minimal_block_systems(group: &GroupHandle) -> Result<Vec<BlockSystem>> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    let blocks = pair_blocks(group)?;
    let minimal: Vec<&Vec<usize>> = blocks
        .iter()
        .filter(|b| {
            !blocks
                .iter()
                .any(|c| c.len() < b.len() && c.iter().all(|x| b.binary_search(x).is_ok()))
        })
        .collect();
    if minimal.is_empty() {
        return Err(Error::PrimitiveGroup);
    }
    let mut systems = Vec::new();
    for b in minimal {
        let sys = BlockSystem::from_block(group, b)?;
        let local = block_stabilizer_restriction(group, &sys, 0)?;
        if !is_primitive(&local)? {
            return Err(Error::InvariantViolation(format!(
                "block {:?} is inclusion-minimal but its stabilizer acts imprimitively",
                sys.blocks[0]
            )));
        }
        if !systems.contains(&sys) {
            systems.push(sys);
        }
    }
    systems.sort_by(|a: &BlockSystem, b| (a.block_size, &a.blocks).cmp(&(b.block_size, &b.blocks)));
    Ok(systems)
}

/// Every nontrivial block system, found by closing the pair blocks through 0
/// under joins.
pub fn all_block_systems(group: &GroupHandle) -> Result<Vec<BlockSystem>> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    let n = group.degree();
    let mut blocks: BTreeSet<Vec<usize>> = pair_blocks(group)?.into_iter().collect();
    loop {
        let current: Vec<Vec<usize>> = blocks.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
                union.sort_unstable();
                union.dedup();
                let joined = minimal_block_containing_set(group, &union)?;
                if joined.len() < n && blocks.insert(joined) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut systems = Vec::new();
    for b in blocks {
        systems.push(BlockSystem::from_block(group, &b)?);
    }
    systems.sort_by(|a, b| (a.block_size, &a.blocks).cmp(&(b.block_size, &b.blocks)));
    Ok(systems)
}

/// The action of a group on a block system: image group on block indices
/// and the kernel fixing every block.
#[derive(Clone, Debug)]
pub struct InducedAction {
    pub source: GroupHandle,
    pub system: BlockSystem,
    pub image: GroupHandle,
    pub kernel: GroupHandle,
    /// `image_of[i]` is the permutation of blocks induced by source generator `i`.
    pub image_of: Vec<Permutation>,
}

/// Generators extended to act on `points ⊔ block labels` (labels are `n + i`).
fn extended_generators(group: &GroupHandle, system: &BlockSystem) -> Result<Vec<Permutation>> {
    let n = group.degree();
    let m = system.block_count();
    group
        .generators()
        .iter()
        .map(|g| {
            let induced = system.induced(g).ok_or_else(|| {
                Error::InvariantViolation(format!("{g} does not permute the blocks"))
            })?;
            let mut images: Vec<usize> = g.images().to_vec();
            images.extend((0..m).map(|i| n + induced.apply(i)));
            Ok(Permutation::from_images_unchecked(images))
        })
        .collect()
}

fn truncate(p: &Permutation, n: usize) -> Permutation {
    Permutation::from_images_unchecked(p.images()[..n].to_vec())
}

pub fn action_on_blocks(group: &GroupHandle, system: &BlockSystem) -> Result<InducedAction> {
    if system.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            expected: group.degree(),
            found: system.degree(),
        });
    }
    let n = group.degree();
    let m = system.block_count();
    let ext = extended_generators(group, system)?;
    let image_of: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| system.induced(g).expect("checked above"))
        .collect();
    let image = GroupHandle::new(m, image_of.clone())?;
    let ext_group = GroupHandle::new(n + m, ext)?;
    let labels: Vec<usize> = (n..n + m).collect();
    let chain = ext_group.chain_with_base(&labels);
    let kernel_gens = chain
        .stabilizer_generators(m)
        .iter()
        .map(|g| truncate(g, n))
        .collect();
    let kernel = GroupHandle::generated_by(n, kernel_gens)?;
    debug_assert_eq!(image.order() * kernel.order(), group.order());
    Ok(InducedAction {
        source: group.clone(),
        system: system.clone(),
        image,
        kernel,
        image_of,
    })
}

/// Setwise stabilizer of block `block` (acting on all points).
pub fn block_stabilizer(group: &GroupHandle, system: &BlockSystem, block: usize) -> Result<GroupHandle> {
    let n = group.degree();
    if block >= system.block_count() {
        return Err(Error::PointOutOfRange {
            point: block,
            degree: system.block_count(),
        });
    }
    let ext_group = GroupHandle::new(n + system.block_count(), extended_generators(group, system)?)?;
    let chain = ext_group.chain_with_base(&[n + block]);
    let gens = chain
        .stabilizer_generators(1)
        .iter()
        .map(|g| truncate(g, n))
        .collect();
    GroupHandle::generated_by(n, gens)
}

/// The group induced on one block by its setwise stabilizer, with the
/// block's points relabelled `0..|B|` in increasing order.
pub fn block_stabilizer_restriction(
    group: &GroupHandle,
    system: &BlockSystem,
    block: usize,
) -> Result<GroupHandle> {
    let stab = block_stabilizer(group, system, block)?;
    stab.restrict_to(&system.blocks[block])
}

/// Right-coset action of a group on the cosets of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    pub group: GroupHandle,
    pub subgroup: GroupHandle,
    pub degree: usize,
    pub action: GroupHandle,
    pub faithful: bool,
    /// Coset representatives in discovery order; coset 0 is the subgroup.
    pub representatives: Vec<Permutation>,
}

impl CosetAction {
    /// Index of the coset containing `g`.
    pub fn coset_of(&self, g: &Permutation) -> usize {
        self.representatives
            .iter()
            .position(|r| self.subgroup.has(&g.then(&r.inverse())))
            .expect("every element lies in some coset")
    }

    /// Image of a group element in the coset action.
    pub fn act(&self, g: &Permutation) -> Permutation {
        let images = self
            .representatives
            .iter()
            .map(|r| self.coset_of(&r.then(g)))
            .collect();
        Permutation::from_images_unchecked(images)
    }

    /// Block system whose blocks are the cosets of `overgroup` (which must
    /// contain the subgroup), as unions of cosets of the subgroup.
    pub fn blocks_from_overgroup(&self, overgroup: &GroupHandle) -> Result<BlockSystem> {
        if !self.subgroup.is_subgroup_of(overgroup) {
            return Err(Error::NotASubgroup("subgroup is not inside the overgroup".into()));
        }
        let k = self.representatives.len();
        let mut owner = vec![usize::MAX; k];
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for i in 0..k {
            if owner[i] != usize::MAX {
                continue;
            }
            let ri_inv = self.representatives[i].inverse();
            let cell: Vec<usize> = (0..k)
                .filter(|&j| overgroup.has(&self.representatives[j].then(&ri_inv)))
                .collect();
            for &j in &cell {
                owner[j] = cells.len();
            }
            cells.push(cell);
        }
        BlockSystem::from_cells(k, cells)
    }
}

pub fn coset_action(group: &GroupHandle, subgroup: &GroupHandle, index_cap: u128) -> Result<CosetAction> {
    if subgroup.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            expected: group.degree(),
            found: subgroup.degree(),
        });
    }
    if let Some(bad) = subgroup.generators().iter().find(|h| !group.has(h)) {
        return Err(Error::NotASubgroup(bad.to_string()));
    }
    let index = group.order() / subgroup.order();
    if index > index_cap {
        return Err(Error::IndexExceedsCap { index, cap: index_cap });
    }
    // H-orbit images are a cheap invariant of the right coset Hx.
    let h_orbits = orbits(subgroup);
    let key = |x: &Permutation| -> Vec<usize> {
        h_orbits
            .iter()
            .map(|o| o.iter().map(|&p| x.apply(p)).min().unwrap())
            .collect()
    };
    let gens = group.generators();
    let mut reps = vec![group.identity()];
    let mut buckets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    buckets.entry(key(&reps[0])).or_default().push(0);
    let mut table: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < reps.len() {
        let r = reps[head].clone();
        for (gi, g) in gens.iter().enumerate() {
            let c = r.then(g);
            let k = key(&c);
            let bucket = buckets.entry(k).or_default();
            let found = bucket
                .iter()
                .copied()
                .find(|&j| subgroup.has(&c.then(&reps[j].inverse())));
            let target = match found {
                Some(j) => j,
                None => {
                    let j = reps.len();
                    bucket.push(j);
                    reps.push(c);
                    j
                }
            };
            table[gi].push(target);
        }
        head += 1;
    }
    debug_assert_eq!(reps.len() as u128, index);
    let degree = reps.len();
    let action_gens = table
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    let action = GroupHandle::new(degree, action_gens)?;
    let faithful = action.order() == group.order();
    Ok(CosetAction {
        group: group.clone(),
        subgroup: subgroup.clone(),
        degree,
        action,
        faithful,
        representatives: reps,
    })
}

/// Subgroup of elements of `group` commuting with every generator of
/// `target`, found by exhaustive filtration.
pub fn centralizer_elements(group: &GroupHandle, target: &GroupHandle, cap: u128) -> Result<GroupHandle> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut current = GroupHandle::trivial(group.degree());
    for g in group.elements(cap)? {
        if g.is_identity() || current.has(&g) {
            continue;
        }
        if target.generators().iter().all(|t| g.commutes_with(t)) {
            gens.push(g);
            current = GroupHandle::new(group.degree(), gens.clone())?;
        }
    }
    Ok(current)
}

pub fn center(group: &GroupHandle, cap: u128) -> Result<GroupHandle> {
    centralizer_elements(group, group, cap)
}

/// Whether the central subgroup `<z>` of prime order `p` has a complement.
///
/// A complement exists iff some homomorphism onto `Z_p` is nonzero on `z`,
/// i.e. iff `z` lies outside `N = <s^p, [s,t]>^G`, the smallest normal
/// subgroup with elementary abelian `p`-quotient.
pub fn splits_over_central_prime(group: &GroupHandle, z: &Permutation, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrimeOrder { prime: p });
    }
    if !group.contains(z)? {
        return Err(Error::NotInGroup(z.to_string()));
    }
    if !group.generators().iter().all(|g| g.commutes_with(z)) {
        return Err(Error::NotCentral(z.to_string()));
    }
    if z.order() != p {
        return Err(Error::NotPrimeOrder { prime: p });
    }
    let gens = group.generators();
    let mut seeds: Vec<Permutation> = gens.iter().map(|s| s.pow(p as i64)).collect();
    for (i, s) in gens.iter().enumerate() {
        for t in &gens[i + 1..] {
            seeds.push(s.commutator(t));
        }
    }
    let n = group.normal_closure(&seeds)?;
    Ok(!n.has(z))
}

//! Seeded group corpus and brute-force oracles shared by the integration
//! tests. The oracles only use permutation arithmetic, never the stabilizer
//! chain or the block algorithms under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use dgroup::{GroupHandle, Permutation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x0d_6209;
pub const CORPUS_SIZE: usize = 50;

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// A random element of `S_b wr S_(n/b)` conjugated by `relabel`.
fn random_imprimitive(rng: &mut ChaCha8Rng, n: usize, b: usize, relabel: &Permutation) -> Permutation {
    let m = n / b;
    let mut outer: Vec<usize> = (0..m).collect();
    outer.shuffle(rng);
    let mut images = vec![0; n];
    for (block, &target) in outer.iter().enumerate() {
        let mut inner: Vec<usize> = (0..b).collect();
        inner.shuffle(rng);
        for (i, &j) in inner.iter().enumerate() {
            images[block * b + i] = target * b + j;
        }
    }
    Permutation::from_images(images).unwrap().conjugate_by(relabel)
}

/// `x -> u x + t (mod n)` with `u` a unit, conjugated by `relabel`.
fn random_affine(rng: &mut ChaCha8Rng, n: usize, relabel: &Permutation) -> Permutation {
    let units: Vec<usize> = (1..n.max(2)).filter(|&u| gcd(u, n) == 1).collect();
    let u = units[rng.random_range(0..units.len())];
    let t = rng.random_range(0..n);
    let images = (0..n).map(|x| (u * x + t) % n).collect();
    Permutation::from_images(images).unwrap().conjugate_by(relabel)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn transitive(gens: &[Permutation], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Fifty transitive generator sets of degree 2..=8, drawn from a fixed seed.
/// Styles rotate between uniform random permutations, random elements of
/// imprimitive wreath products, and affine maps mod `n` with an `n`-cycle.
pub fn corpus() -> Vec<(usize, Vec<Permutation>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::new();
    while out.len() < CORPUS_SIZE {
        let n = rng.random_range(2..=8usize);
        let k = rng.random_range(1..=3usize);
        let relabel = random_perm(&mut rng, n);
        let gens: Vec<Permutation> = match out.len() % 3 {
            0 => (0..k).map(|_| random_perm(&mut rng, n)).collect(),
            1 => {
                let divisors: Vec<usize> = (2..n).filter(|b| n % b == 0).collect();
                if divisors.is_empty() {
                    (0..k).map(|_| random_perm(&mut rng, n)).collect()
                } else {
                    let b = divisors[rng.random_range(0..divisors.len())];
                    (0..k + 1).map(|_| random_imprimitive(&mut rng, n, b, &relabel)).collect()
                }
            }
            _ => {
                let cycle = Permutation::from_images((0..n).map(|x| (x + 1) % n).collect())
                    .unwrap()
                    .conjugate_by(&relabel);
                let mut gens = vec![cycle];
                gens.extend((0..k - 1).map(|_| random_affine(&mut rng, n, &relabel)));
                gens
            }
        };
        if transitive(&gens, n) {
            out.push((n, gens));
        }
    }
    out
}

pub fn handle(n: usize, gens: &[Permutation]) -> GroupHandle {
    GroupHandle::new(n, gens.to_vec()).unwrap()
}

/// All elements, by breadth-first closure under right multiplication.
pub fn closure(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

/// Whether the images of `set` under the group are pairwise equal or disjoint.
pub fn is_block(gens: &[Permutation], set: &BTreeSet<usize>) -> bool {
    let mut images: BTreeSet<BTreeSet<usize>> = BTreeSet::from([set.clone()]);
    let mut queue = VecDeque::from([set.clone()]);
    while let Some(s) = queue.pop_front() {
        for g in gens {
            let t: BTreeSet<usize> = s.iter().map(|&x| g.apply(x)).collect();
            if images.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let list: Vec<&BTreeSet<usize>> = images.iter().collect();
    list.iter()
        .enumerate()
        .all(|(i, a)| list[i + 1..].iter().all(|b| a.is_disjoint(b)))
}

/// Every subset of the domain that contains point 0.
fn subsets_with_zero(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0u32..1 << (n - 1)).map(move |mask| {
        std::iter::once(0)
            .chain((1..n).filter(move |i| mask >> (i - 1) & 1 == 1))
            .collect()
    })
}

/// Smallest block containing `alpha` and `beta`, by exhaustive search.
pub fn brute_minimal_block(n: usize, gens: &[Permutation], alpha: usize, beta: usize) -> Vec<usize> {
    let mut best: Option<BTreeSet<usize>> = None;
    for mask in 0u32..1 << n {
        let set: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if !set.contains(&alpha) || !set.contains(&beta) {
            continue;
        }
        if best.as_ref().is_some_and(|b| b.len() <= set.len()) {
            continue;
        }
        if is_block(gens, &set) {
            best = Some(set);
        }
    }
    best.unwrap().into_iter().collect()
}

/// All block systems (trivial ones included) as sorted lists of sorted cells.
pub fn brute_block_systems(n: usize, gens: &[Permutation]) -> BTreeSet<Vec<Vec<usize>>> {
    let mut out = BTreeSet::new();
    for block in subsets_with_zero(n) {
        if !is_block(gens, &block) {
            continue;
        }
        let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([block.clone()]);
        let mut seen = BTreeSet::from([block]);
        while let Some(s) = queue.pop_front() {
            cells.insert(s.iter().copied().collect());
            for g in gens {
                let t: BTreeSet<usize> = s.iter().map(|&x| g.apply(x)).collect();
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        out.insert(cells.into_iter().collect());
    }
    out
}

/// Elements mapping every cell onto itself.
pub fn brute_kernel(elements: &[Permutation], cells: &[Vec<usize>]) -> Vec<Permutation> {
    let mut cell_of = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        for &x in c {
            cell_of.insert(x, i);
        }
    }
    elements
        .iter()
        .filter(|g| (0..g.degree()).all(|x| cell_of[&x] == cell_of[&g.apply(x)]))
        .cloned()
        .collect()
}

/// Elements commuting with every element of `targets`.
pub fn brute_centralizer(elements: &[Permutation], targets: &[Permutation]) -> Vec<Permutation> {
    elements
        .iter()
        .filter(|g| targets.iter().all(|t| g.then(t) == t.then(g)))
        .cloned()
        .collect()
}

/// Whether some homomorphism `G -> Z_p` is nonzero on `z`. Every assignment of
/// residues to the generators is tried and checked for consistency along
/// all edges of the Cayley graph.
pub fn brute_splits(n: usize, gens: &[Permutation], z: &Permutation, p: u64) -> bool {
    let elements = closure(n, gens);
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let k = gens.len() as u32;
    'assign: for code in 0..p.pow(k) {
        let values: Vec<u64> = (0..k).map(|i| code / p.pow(i) % p).collect();
        let mut phi: Vec<Option<u64>> = vec![None; elements.len()];
        phi[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let v = phi[i].unwrap();
            for (g, &c) in gens.iter().zip(&values) {
                let j = index[&elements[i].then(g)];
                let w = (v + c) % p;
                match phi[j] {
                    None => {
                        phi[j] = Some(w);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != w => continue 'assign,
                    Some(_) => {}
                }
            }
        }
        if phi[index[z]] != Some(0) {
            return true;
        }
    }
    false
}

/// Outcome of running one library routine against its oracle over the corpus.
#[derive(Debug, Default)]
pub struct Agreement {
    pub comparisons: usize,
    pub mismatches: Vec<String>,
}

impl Agreement {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.comparisons += 1;
        if !ok {
            self.mismatches.push(detail());
        }
    }
}

pub fn agree_minimal_block(corpus: &[(usize, Vec<Permutation>)]) -> Agreement {
    let mut a = Agreement::default();
    for (idx, (n, gens)) in corpus.iter().enumerate() {
        let g = handle(*n, gens);
        for alpha in 0..*n {
            for beta in alpha + 1..*n {
                let lib = dgroup::actions::minimal_block_containing(&g, alpha, beta).unwrap();
                let brute = brute_minimal_block(*n, gens, alpha, beta);
                a.check(lib == brute, || format!("group {idx}: block of {alpha},{beta}: {lib:?} vs {brute:?}"));
            }
        }
    }
    a
}

pub fn agree_block_systems(corpus: &[(usize, Vec<Permutation>)]) -> Agreement {
    let mut a = Agreement::default();
    for (idx, (n, gens)) in corpus.iter().enumerate() {
        let g = handle(*n, gens);
        let lib: BTreeSet<Vec<Vec<usize>>> = dgroup::actions::all_block_systems(&g)
            .unwrap()
            .into_iter()
            .filter(|s| !s.is_trivial())
            .map(|s| s.blocks)
            .collect();
        let brute: BTreeSet<Vec<Vec<usize>>> = brute_block_systems(*n, gens)
            .into_iter()
            .filter(|cells| cells.len() > 1 && cells.len() < *n)
            .collect();
        a.check(lib == brute, || format!("group {idx}: systems {lib:?} vs {brute:?}"));
    }
    a
}

pub fn agree_kernels(corpus: &[(usize, Vec<Permutation>)]) -> Agreement {
    let mut a = Agreement::default();
    for (idx, (n, gens)) in corpus.iter().enumerate() {
        let g = handle(*n, gens);
        let elements = closure(*n, gens);
        for cells in brute_block_systems(*n, gens) {
            if cells.len() == 1 || cells.len() == *n {
                continue;
            }
            let system = dgroup::actions::BlockSystem::from_cells(*n, cells.clone()).unwrap();
            let induced = dgroup::actions::action_on_blocks(&g, &system).unwrap();
            let brute = brute_kernel(&elements, &cells);
            let same = induced.kernel.order() == brute.len() as u128
                && brute.iter().all(|k| induced.kernel.has(k))
                && induced.image.order() * induced.kernel.order() == g.order();
            a.check(same, || {
                format!("group {idx}: kernel on {cells:?}: {} vs {}", induced.kernel.order(), brute.len())
            });
        }
    }
    a
}

pub fn agree_centralizers(corpus: &[(usize, Vec<Permutation>)]) -> Agreement {
    let mut a = Agreement::default();
    for (idx, (n, gens)) in corpus.iter().enumerate() {
        let g = handle(*n, gens);
        let elements = closure(*n, gens);
        let middle = elements[elements.len() / 2].clone();
        let targets: Vec<Vec<Permutation>> = vec![gens.clone(), vec![gens[0].clone()], vec![middle]];
        for t in targets {
            let target = handle(*n, &t);
            let lib = dgroup::actions::centralizer_elements(&g, &target, 1_000_000).unwrap();
            let brute = brute_centralizer(&elements, &t);
            let same = lib.order() == brute.len() as u128 && brute.iter().all(|c| lib.has(c));
            a.check(same, || format!("group {idx}: centralizer of {t:?}: {} vs {}", lib.order(), brute.len()));
        }
    }
    a
}

/// Also returns how many split and non-split instances were seen.
pub fn agree_splits(corpus: &[(usize, Vec<Permutation>)]) -> (Agreement, usize, usize) {
    let mut a = Agreement::default();
    let (mut split, mut nonsplit) = (0, 0);
    for (idx, (n, gens)) in corpus.iter().enumerate() {
        let g = handle(*n, gens);
        let elements = closure(*n, gens);
        for z in brute_centralizer(&elements, gens) {
            let p = z.order();
            if !dgroup::perm::is_prime(p) {
                continue;
            }
            let lib = dgroup::actions::splits_over_central_prime(&g, &z, p).unwrap();
            let brute = brute_splits(*n, gens, &z, p);
            if brute {
                split += 1;
            } else {
                nonsplit += 1;
            }
            a.check(lib == brute, || format!("group {idx}: split over <{z}> (p = {p}): {lib} vs {brute}"));
        }
    }
    (a, split, nonsplit)
}

use std::fmt::Write as _;

use rand::Rng;

use crate::chain::{ElementIter, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::{is_prime, Permutation};

/// A permutation group given by generators, with its stabilizer chain built
/// eagerly. Immutable after construction.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
}

impl GroupHandle {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadParams("degree must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let chain = StabilizerChain::new(degree, &generators, &[]);
        Ok(Self {
            degree,
            generators,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, vec![Permutation::identity(degree)]).expect("identity generator")
    }

    /// Builds a group from a possibly empty generator list.
    pub fn generated_by(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.is_empty() {
            Ok(Self::trivial(degree))
        } else {
            Self::new(degree, generators)
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(self.chain.contains(p))
    }

    /// Membership test for callers that already know the degrees agree.
    pub fn has(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    /// All elements in transversal-product order, refusing groups above `cap`.
    pub fn elements(&self, cap: u128) -> Result<ElementIter<'_>> {
        let order = self.order();
        if order > cap {
            return Err(Error::OrderExceedsCap { order, cap });
        }
        Ok(self.chain.elements())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain.random_element(rng)
    }

    /// Chain rebuilt with the given base prefix, starting from the strong
    /// generators of the existing chain.
    pub fn chain_with_base(&self, prefix: &[usize]) -> StabilizerChain {
        let mut gens = self.chain.strong_generators();
        if gens.is_empty() {
            gens.push(self.identity());
        }
        StabilizerChain::new(self.degree, &gens, prefix)
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<GroupHandle> {
        for &x in points {
            if x >= self.degree {
                return Err(Error::PointOutOfRange {
                    point: x,
                    degree: self.degree,
                });
            }
        }
        let chain = self.chain_with_base(points);
        GroupHandle::generated_by(self.degree, chain.stabilizer_generators(points.len()))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<GroupHandle> {
        self.pointwise_stabilizer(&[point])
    }

    /// Subgroup generated by `self`'s generators together with `extra`.
    pub fn with_generators(&self, extra: &[Permutation]) -> Result<GroupHandle> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(extra);
        GroupHandle::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &GroupHandle) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    pub fn same_group(&self, other: &GroupHandle) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Whether the group is elementary abelian of exponent `p` (trivial
    /// groups count).
    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.is_abelian() && self.generators.iter().all(|g| g.is_identity() || g.order() == p)
    }

    /// The prime `p` if the group is a nontrivial elementary abelian p-group.
    pub fn elementary_abelian_prime(&self) -> Option<u64> {
        let p = self.generators.iter().find(|g| !g.is_identity())?.order();
        (is_prime(p) && self.is_elementary_abelian(p)).then_some(p)
    }

    /// Whether some element generates the whole group.
    pub fn is_cyclic(&self, cap: u128) -> Result<bool> {
        let order = self.order();
        if self.is_trivial() {
            return Ok(true);
        }
        if !self.is_abelian() {
            return Ok(false);
        }
        Ok(self.elements(cap)?.any(|g| g.order() as u128 == order))
    }

    /// Normal closure in `self` of the subgroup generated by `elements`.
    pub fn normal_closure(&self, elements: &[Permutation]) -> Result<GroupHandle> {
        let mut gens: Vec<Permutation> = elements
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if gens.is_empty() {
            return Ok(GroupHandle::trivial(self.degree));
        }
        let mut closure = GroupHandle::new(self.degree, gens.clone())?;
        let mut i = 0;
        while i < gens.len() {
            let n = gens[i].clone();
            for g in &self.generators {
                let c = n.conjugate_by(g);
                if !closure.has(&c) {
                    gens.push(c);
                    closure = GroupHandle::new(self.degree, gens.clone())?;
                }
            }
            i += 1;
        }
        Ok(closure)
    }

    pub fn is_normal_in(&self, overgroup: &GroupHandle) -> bool {
        overgroup.generators.iter().all(|g| {
            self.generators
                .iter()
                .all(|n| self.has(&n.conjugate_by(g)))
        })
    }

    pub fn derived_subgroup(&self) -> Result<GroupHandle> {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                comms.push(a.commutator(b));
            }
        }
        self.normal_closure(&comms)
    }

    /// Orders along the derived series, ending at the first repeated term.
    pub fn derived_series_orders(&self) -> Result<Vec<u128>> {
        let mut orders = vec![self.order()];
        let mut current = self.clone();
        loop {
            let next = current.derived_subgroup()?;
            if next.order() == current.order() {
                break;
            }
            orders.push(next.order());
            current = next;
        }
        Ok(orders)
    }

    pub fn is_solvable(&self) -> Result<bool> {
        Ok(*self.derived_series_orders()?.last().unwrap() == 1)
    }

    /// Restriction to an invariant set of points, relabelled in the given order.
    pub fn restrict_to(&self, points: &[usize]) -> Result<GroupHandle> {
        let mut index = vec![usize::MAX; self.degree];
        for (i, &x) in points.iter().enumerate() {
            index[x] = i;
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut images = Vec::with_capacity(points.len());
            for &x in points {
                let y = index[g.apply(x)];
                if y == usize::MAX {
                    return Err(Error::InvariantViolation(format!(
                        "{g} does not preserve the point set"
                    )));
                }
                images.push(y);
            }
            gens.push(Permutation::from_images_unchecked(images));
        }
        GroupHandle::new(points.len(), gens)
    }

    /// Group file text: `degree: n` and one generator per line.
    pub fn to_group_file(&self) -> String {
        let mut out = String::new();
        writeln!(out, "degree: {}", self.degree).unwrap();
        for g in &self.generators {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    /// Parses the group file format. Blank lines and `#` comments are
    /// ignored; errors are reported as `line L, column C`.
    pub fn from_group_file(text: &str) -> Result<GroupHandle, GroupFileError> {
        let mut degree = None;
        let mut gens = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            match degree {
                None => {
                    let rest = line.strip_prefix("degree:").ok_or_else(|| GroupFileError {
                        line: lineno,
                        error: Error::Parse {
                            position: 1,
                            message: "expected `degree: <n>`".into(),
                        },
                    })?;
                    let n: usize = rest.trim().parse().map_err(|_| GroupFileError {
                        line: lineno,
                        error: Error::Parse {
                            position: 8,
                            message: format!("bad degree {:?}", rest.trim()),
                        },
                    })?;
                    if n == 0 {
                        return Err(GroupFileError {
                            line: lineno,
                            error: Error::BadParams("degree must be positive".into()),
                        });
                    }
                    degree = Some(n);
                }
                Some(n) => {
                    let g = Permutation::parse(line, n).map_err(|error| GroupFileError {
                        line: lineno,
                        error,
                    })?;
                    gens.push(g);
                }
            }
        }
        let degree = degree.ok_or(GroupFileError {
            line: 1,
            error: Error::Parse {
                position: 1,
                message: "missing `degree:` header".into(),
            },
        })?;
        GroupHandle::generated_by(degree, gens).map_err(|error| GroupFileError { line: 1, error })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {error}")]
pub struct GroupFileError {
    pub line: usize,
    pub error: Error,
}

/// Group generated by permutations given in 1-based cycle notation.
pub fn group_from_cycles(degree: usize, generators: &[&str]) -> Result<GroupHandle> {
    let gens = generators
        .iter()
        .map(|s| Permutation::parse(s, degree))
        .collect::<Result<Vec<_>>>()?;
    GroupHandle::generated_by(degree, gens)
}

//! Permutations of `{0, .., n-1}` stored as image tables.
//!
//! Products follow the right-action convention: `p * q` applies `p` first and
//! then `q`, so `(p * q).apply(i) == q.apply(p.apply(i))`. External text uses
//! 1-based points in disjoint-cycle notation; the parser and formatter are the
//! only places where the offset is applied.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image table, checking that it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::PointOutOfRange { point: x, degree: n });
            }
            if seen[x] {
                return Err(Error::InvariantViolation(format!(
                    "image {x} appears twice"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// Builds a permutation from 0-based cycles. Points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if used[x] {
                    return Err(Error::InvariantViolation(format!(
                        "point {} repeated in cycles",
                        x + 1
                    )));
                }
                used[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// Right-action product: apply `self`, then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked right-action product; degrees must agree.
    #[inline]
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `other^{-1} * self * other`, the right conjugate `self^other`.
    pub fn conjugate_by(&self, other: &Self) -> Self {
        let mut images = vec![0; self.degree()];
        for i in 0..self.degree() {
            images[other.images[i]] = other.images[self.images[i]];
        }
        Self { images }
    }

    /// `self^{-1} other^{-1} self other`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(&a, &b)| other.images[a] == self.images[b])
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x];
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Least `k >= 1` with `self^k` the identity: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, len| lcm(acc, len as u64))
    }

    pub fn is_full_cycle(&self) -> bool {
        self.cycle_type() == [self.degree()]
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.images[point] == point
    }

    /// Parses 1-based disjoint-cycle notation such as `"(1 2 3)(4 5)"`.
    ///
    /// Points may be separated by whitespace or commas; `"()"` is the
    /// identity. Error positions are 1-based character columns.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(text, degree)?;
        Self::from_cycles(degree, &cycles)
    }
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn parse_cycles(text: &str, degree: usize) -> Result<Vec<Vec<usize>>> {
    let chars: Vec<char> = text.chars().collect();
    let mut used = vec![false; degree];
    let mut cycles = Vec::new();
    let mut i = 0;
    let mut saw_cycle = false;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c != '(' {
            return Err(parse_error(i + 1, format!("expected '(', found {c:?}")));
        }
        saw_cycle = true;
        let open = i;
        i += 1;
        let mut cycle = Vec::new();
        loop {
            while i < chars.len() && (chars[i].is_whitespace() || chars[i] == ',') {
                i += 1;
            }
            if i >= chars.len() {
                return Err(parse_error(open + 1, "unclosed '('"));
            }
            if chars[i] == ')' {
                i += 1;
                break;
            }
            if !chars[i].is_ascii_digit() {
                return Err(parse_error(
                    i + 1,
                    format!("unexpected character {:?}", chars[i]),
                ));
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let token: String = chars[start..i].iter().collect();
            let point: usize = token
                .parse()
                .map_err(|_| parse_error(start + 1, format!("bad number {token:?}")))?;
            if point == 0 || point > degree {
                return Err(parse_error(
                    start + 1,
                    format!("point {point} out of range [1, {degree}]"),
                ));
            }
            if used[point - 1] {
                return Err(parse_error(start + 1, format!("point {point} repeated")));
            }
            used[point - 1] = true;
            cycle.push(point - 1);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    if !saw_cycle && !text.trim().is_empty() {
        return Err(parse_error(1, "no cycles found"));
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    /// Canonical 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Serialized form: the degree plus canonical cycle notation.
#[derive(Serialize, Deserialize)]
struct PermutationRecord {
    degree: usize,
    cycles: String,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationRecord {
            degree: self.degree(),
            cycles: self.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = PermutationRecord::deserialize(deserializer)?;
        Permutation::parse(&record.cycles, record.degree).map_err(serde::de::Error::custom)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        self.then(&rhs)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

//! Suborbits, orbital digraphs and their shapes, quotients and lexicographic
//! blowups, Cayley graphs, circulant certificates and DOT export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::actions::{is_transitive, orbits, BlockSystem};
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::regular::RegularWitness;

/// A digraph on `0..degree` stored as sorted out-neighbour lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalGraph {
    pub degree: usize,
    /// The arc the graph was generated from (for quotients, its image).
    pub base_arc: (usize, usize),
    pub out_adjacency: Vec<Vec<usize>>,
    pub arc_count: usize,
}

impl OrbitalGraph {
    fn from_matrix(degree: usize, base_arc: (usize, usize), adj: &[bool]) -> Self {
        let out_adjacency: Vec<Vec<usize>> = (0..degree)
            .map(|u| (0..degree).filter(|&v| adj[u * degree + v]).collect())
            .collect();
        let arc_count = out_adjacency.iter().map(Vec::len).sum();
        Self {
            degree,
            base_arc,
            out_adjacency,
            arc_count,
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adjacency[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Whether the reverse of the base arc is an arc; for an orbital graph
    /// this is equivalent to the arc set being closed under reversal.
    pub fn is_self_paired(&self) -> bool {
        let (a, b) = self.base_arc;
        a != b && self.has_arc(b, a)
    }

    /// Whether every arc's reverse is present.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// Weakly connected components, each sorted, ordered by smallest vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut undirected = vec![Vec::new(); n];
        for (u, v) in self.arcs() {
            undirected[u].push(v);
            undirected[v].push(u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &v in &undirected[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }

    /// Graphviz rendering with 1-based vertices; self-paired graphs are
    /// written undirected with one line per edge.
    pub fn to_dot(&self, name: &str) -> String {
        let undirected = self.is_symmetric() && self.arc_count > 0;
        let mut out = String::new();
        let kind = if undirected { "graph" } else { "digraph" };
        let _ = writeln!(out, "{kind} \"{}\" {{", name.replace('"', "'"));
        for (u, v) in self.arcs() {
            if undirected {
                if u < v {
                    let _ = writeln!(out, "  {} -- {};", u + 1, v + 1);
                }
            } else {
                let _ = writeln!(out, "  {} -> {};", u + 1, v + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Orbits of the stabilizer of `base`, including `{base}`, ordered by
/// smallest point.
pub fn suborbits(group: &GroupHandle, base: usize) -> Result<Vec<Vec<usize>>> {
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    Ok(orbits(&group.point_stabilizer(base)?))
}

/// The orbital digraph with arc set `(alpha, beta)^G`.
pub fn orbital_graph(group: &GroupHandle, arc: (usize, usize)) -> Result<OrbitalGraph> {
    let n = group.degree();
    let (a, b) = arc;
    for x in [a, b] {
        if x >= n {
            return Err(Error::PointOutOfRange { point: x, degree: n });
        }
    }
    if a == b {
        return Err(Error::DiagonalArc(a));
    }
    if !is_transitive(group) {
        return Err(Error::IntransitiveGroup);
    }
    let mut adj = vec![false; n * n];
    adj[a * n + b] = true;
    let mut queue = vec![(a, b)];
    while let Some((u, v)) = queue.pop() {
        for g in group.generators() {
            let (gu, gv) = (g.apply(u), g.apply(v));
            if !adj[gu * n + gv] {
                adj[gu * n + gv] = true;
                queue.push((gu, gv));
            }
        }
    }
    Ok(OrbitalGraph::from_matrix(n, arc, &adj))
}

/// One orbital graph per nontrivial suborbit at `base`, paired with it.
pub fn suborbit_graphs(group: &GroupHandle, base: usize) -> Result<Vec<(Vec<usize>, OrbitalGraph)>> {
    suborbits(group, base)?
        .into_iter()
        .filter(|s| s[0] != base || s.len() > 1)
        .map(|s| {
            let g = orbital_graph(group, (base, s[0]))?;
            Ok((s, g))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphShape {
    pub connected: bool,
    pub self_paired: bool,
    pub lex_blowup_of: Option<BlockSystem>,
    /// `(m, m)` when the graph is `K_{m,m}` (both arc directions present).
    pub complete_bipartite: Option<(usize, usize)>,
    /// The two sides when `complete_bipartite` is set.
    pub bipartition: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn shape(graph: &OrbitalGraph, system: Option<&BlockSystem>) -> GraphShape {
    let lex = system.filter(|s| is_lex_blowup(graph, s)).cloned();
    let bipartition = complete_bipartite_sides(graph);
    GraphShape {
        connected: graph.is_connected(),
        self_paired: graph.is_self_paired(),
        lex_blowup_of: lex,
        complete_bipartite: bipartition.as_ref().map(|(x, y)| (x.len(), y.len())),
        bipartition,
    }
}

fn complete_bipartite_sides(graph: &OrbitalGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = graph.degree;
    if n < 2 || n % 2 == 1 {
        return None;
    }
    let far = graph.out_adjacency[0].clone();
    if far.len() != n / 2 {
        return None;
    }
    let near: Vec<usize> = (0..n).filter(|x| far.binary_search(x).is_err()).collect();
    let ok = near.iter().all(|&u| graph.out_adjacency[u] == far)
        && far.iter().all(|&v| graph.out_adjacency[v] == near);
    ok.then_some((near, far))
}

/// No arc inside a block, and every pair of blocks is joined either by no
/// arcs or by all `b^2` arcs.
pub fn is_lex_blowup(graph: &OrbitalGraph, system: &BlockSystem) -> bool {
    if system.degree() != graph.degree {
        return false;
    }
    let m = system.block_count();
    let b = system.block_size;
    let mut bundle = vec![0usize; m * m];
    for (u, v) in graph.arcs() {
        let (bu, bv) = (system.block_of(u), system.block_of(v));
        if bu == bv {
            return false;
        }
        bundle[bu * m + bv] += 1;
    }
    bundle.iter().all(|&c| c == 0 || c == b * b)
}

/// Graph on block indices with an arc `(B, B')`, `B != B'`, whenever some arc
/// joins a point of `B` to a point of `B'`.
pub fn quotient_graph(graph: &OrbitalGraph, system: &BlockSystem) -> Result<OrbitalGraph> {
    if system.degree() != graph.degree {
        return Err(Error::DegreeMismatch {
            expected: graph.degree,
            found: system.degree(),
        });
    }
    let m = system.block_count();
    let mut adj = vec![false; m * m];
    for (u, v) in graph.arcs() {
        let (bu, bv) = (system.block_of(u), system.block_of(v));
        if bu != bv {
            adj[bu * m + bv] = true;
        }
    }
    let (a, b) = graph.base_arc;
    Ok(OrbitalGraph::from_matrix(
        m,
        (system.block_of(a), system.block_of(b)),
        &adj,
    ))
}

/// Replaces each vertex of a graph on blocks by its block and each arc by a
/// complete bipartite bundle.
pub fn lex_blowup(quotient: &OrbitalGraph, system: &BlockSystem, base_arc: (usize, usize)) -> OrbitalGraph {
    let n = system.degree();
    let mut adj = vec![false; n * n];
    for (bu, bv) in quotient.arcs() {
        for &u in &system.blocks[bu] {
            for &v in &system.blocks[bv] {
                adj[u * n + v] = true;
            }
        }
    }
    OrbitalGraph::from_matrix(n, base_arc, &adj)
}

/// `Cay(D, S)` for a regular group `D`, with point `x` identified with the
/// element of `D` carrying `base` to `x`; arcs are `(x, x·s)`.
pub fn cayley_graph(regular: &GroupHandle, base: usize, connection: &[Permutation]) -> Result<OrbitalGraph> {
    let n = regular.degree();
    if !(is_transitive(regular) && regular.order() == n as u128) {
        return Err(Error::NotRegular);
    }
    if base >= n {
        return Err(Error::PointOutOfRange { point: base, degree: n });
    }
    for s in connection {
        if s.is_identity() {
            return Err(Error::IdentityInS);
        }
        if !regular.contains(s)? {
            return Err(Error::NotInGroup(s.to_string()));
        }
    }
    // With the right action, the element carrying base to x followed by s
    // carries base to x^s.
    let mut adj = vec![false; n * n];
    for x in 0..n {
        for s in connection {
            adj[x * n + s.apply(x)] = true;
        }
    }
    let first = connection.first().map_or((base, base), |s| (base, s.apply(base)));
    Ok(OrbitalGraph::from_matrix(n, first, &adj))
}

/// Where a circulant certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateSource {
    /// An element of the witness subgroup.
    Witness,
    /// Some other element of the group.
    Group,
    /// A cyclic automorphism of the component not induced by the group.
    Labelling,
}

/// A cyclic ordering `v_0, .., v_{m-1}` of a component such that
/// `v_i -> v_{i+1 mod m}` is an automorphism of the induced subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantCertificate {
    pub order: Vec<usize>,
    pub source: CertificateSource,
}

impl CirculantCertificate {
    /// Checks that shifting along `order` preserves the arcs of `graph`
    /// between vertices of the component.
    pub fn verify(&self, graph: &OrbitalGraph) -> bool {
        let m = self.order.len();
        let mut sorted = self.order.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != m {
            return false;
        }
        (0..m).all(|i| {
            (0..m).all(|j| {
                graph.has_arc(self.order[i], self.order[j])
                    == graph.has_arc(self.order[(i + 1) % m], self.order[(j + 1) % m])
            })
        })
    }
}

/// The orbit of `component[0]` under `g`, if `g` acts on `component` as one
/// full cycle.
fn cycle_on_component(g: &Permutation, component: &[usize]) -> Option<Vec<usize>> {
    let start = component[0];
    let mut order = vec![start];
    let mut x = g.apply(start);
    while x != start {
        if component.binary_search(&x).is_err() || order.len() == component.len() {
            return None;
        }
        order.push(x);
        x = g.apply(x);
    }
    (order.len() == component.len()).then_some(order)
}

/// Backtracking search for a circulant labelling of the subgraph induced on
/// `component`: position `i` and `j` must be adjacent exactly when position 0
/// and `j - i mod m` are.
fn circulant_labelling(graph: &OrbitalGraph, component: &[usize]) -> Option<Vec<usize>> {
    let m = component.len();
    let out_deg = |v: usize| graph.out_adjacency[v].iter().filter(|w| component.binary_search(w).is_ok()).count();
    let target = out_deg(component[0]);
    if component.iter().any(|&v| out_deg(v) != target) {
        return None;
    }
    let mut order = vec![component[0]];
    let mut used = vec![false; m];
    used[0] = true;

    fn consistent(graph: &OrbitalGraph, order: &[usize], m: usize) -> bool {
        let k = order.len() - 1;
        let v = order[k];
        (0..k).all(|i| {
            let u = order[i];
            let fwd = k - i;
            let back = m - fwd;
            graph.has_arc(u, v) == graph.has_arc(order[0], order[fwd])
                && (back >= order.len() || graph.has_arc(v, u) == graph.has_arc(order[0], order[back]))
        })
    }

    fn extend(graph: &OrbitalGraph, comp: &[usize], order: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if order.len() == comp.len() {
            return true;
        }
        for idx in 0..comp.len() {
            if used[idx] {
                continue;
            }
            order.push(comp[idx]);
            used[idx] = true;
            if consistent(graph, order, comp.len()) && extend(graph, comp, order, used) {
                return true;
            }
            order.pop();
            used[idx] = false;
        }
        false
    }

    extend(graph, component, &mut order, &mut used).then_some(order)
}

/// For each weak component, a certificate that it is a circulant, or `None`.
/// Elements of the witness are tried first, then the whole group, then a
/// labelling search on the component itself.
pub fn circulant_certificates(
    group: &GroupHandle,
    graph: &OrbitalGraph,
    witness: Option<&RegularWitness>,
    cap: u128,
) -> Result<Vec<(Vec<usize>, Option<CirculantCertificate>)>> {
    let components = graph.weak_components();
    let preferred: Vec<Permutation> = witness.map(RegularWitness::elements).unwrap_or_default();
    let mut out = Vec::with_capacity(components.len());
    for comp in components {
        let mut found = preferred
            .iter()
            .find_map(|g| cycle_on_component(g, &comp))
            .map(|order| CirculantCertificate { order, source: CertificateSource::Witness });
        if found.is_none() {
            found = group
                .elements(cap)?
                .find_map(|g| cycle_on_component(&g, &comp))
                .map(|order| CirculantCertificate { order, source: CertificateSource::Group });
        }
        if found.is_none() {
            found = circulant_labelling(graph, &comp)
                .map(|order| CirculantCertificate { order, source: CertificateSource::Labelling });
        }
        out.push((comp, found));
    }
    Ok(out)
}

pub fn circulant_components_check(
    group: &GroupHandle,
    graph: &OrbitalGraph,
    witness: Option<&RegularWitness>,
    cap: u128,
) -> Result<bool> {
    Ok(circulant_certificates(group, graph, witness, cap)?
        .iter()
        .all(|(_, cert)| cert.as_ref().is_some_and(|c| c.verify(graph))))
}

//! Generic dynamic programming over cliquewidth decompositions.
//!
//! A [`DpCore`] describes a dynamic program by its per-node transition sets
//! and its accepting entries. The engine decides feasibility, reconstructs
//! witnesses, and lifts `r` monotone cores to the diverse problem for any
//! Venn measure ([`diverse_solve`]) or for the minimum pairwise Hamming
//! distance ([`min_diverse_solve`]).
//!
//! Ties are broken by the byte order of entries: every table is iterated in
//! ascending key order and a cell is only replaced by a strictly better one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::graph::{CwDecomposition, Node, NodeId};
use crate::measures::VennMeasure;
use crate::vertex_set::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("arithmetic overflow in diversity values")]
    Overflow,
    #[error("at least {0} cores are required")]
    TooFewCores(usize),
    #[error("measure arity {measure} does not match {cores} cores")]
    ArityMismatch { measure: usize, cores: usize },
    #[error("core contract violated: {0}")]
    CoreContract(String),
    #[error("witness enumeration exceeded the budget of {0}")]
    Budget(usize),
}

/// One DP table state, compared by its canonical bytes.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry(Vec<u8>);

impl Entry {
    pub fn new(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Entry(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// A tuple `(w, w_1, ..., w_δ)` of a node's process set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub entry: Entry,
    pub children: Vec<Entry>,
}

/// A dynamic programming core instantiated for one decomposition.
///
/// `rho` is the vertex-membership function; it must be defined on every
/// entry that can occur at an intro node.
pub trait DpCore: Send + Sync {
    fn process(&self, t: NodeId) -> &[Transition];
    fn accepts(&self, entry: &Entry) -> bool;
    fn rho(&self, entry: &Entry) -> Option<bool>;
}

/// An entry for every node of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    entries: Vec<Entry>,
}

impl Witness {
    pub fn new(entries: Vec<Entry>) -> Self {
        Self { entries }
    }

    pub fn get(&self, t: NodeId) -> &Entry {
        &self.entries[t.0]
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Checks the witness conditions against a core.
    pub fn is_valid_for(&self, core: &dyn DpCore, d: &CwDecomposition) -> bool {
        self.entries.len() == d.len()
            && core.accepts(self.get(d.root()))
            && d.node_ids().all(|t| {
                let children: Vec<Entry> = d.children(t).iter().map(|c| self.get(*c).clone()).collect();
                core.process(t)
                    .iter()
                    .any(|tr| &tr.entry == self.get(t) && tr.children == children)
            })
    }
}

/// Engine settings. With more than one thread, tables of disjoint subtrees
/// are built concurrently; results do not depend on the thread count.
#[derive(Clone, Debug)]
pub struct Engine {
    threads: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

/// Result of a single-core run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleOutcome {
    pub feasible: bool,
    pub witness: Option<Witness>,
}

/// Result of a diverse run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiverseOutcome {
    /// Largest diversity over accepting entry tuples; `None` if some core
    /// has no solution at all.
    pub best_value: Option<u64>,
    /// `best_value >= d`.
    pub feasible: bool,
    /// The tuple attaining `best_value`.
    pub solutions: Option<Vec<VertexSet>>,
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDiverseOutcome {
    pub feasible: bool,
    pub solutions: Option<Vec<VertexSet>>,
}

// Π(t) for one core: reachable entries (sorted) and the transitions between
// reachable entries, as indices into the node's and children's entry lists.
struct Reach {
    pi: Vec<Entry>,
    trans: Vec<(u32, Vec<u32>)>,
}

type Key = Vec<u32>;

#[derive(Clone, Debug)]
enum Back {
    Leaf,
    Unary(Key),
    Union(Key, Key),
}

#[derive(Clone, Debug)]
struct Cell {
    value: u64,
    back: Back,
}

#[derive(Clone, Debug)]
enum MinBack {
    Leaf,
    Unary(Key, Vec<u32>),
    Union((Key, Vec<u32>), (Key, Vec<u32>)),
}

type MinTable = BTreeMap<Key, BTreeMap<Vec<u32>, MinBack>>;
type VennTable = BTreeMap<Key, Cell>;

fn cartesian<T: Clone>(lists: &[&[T]]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for x in list.iter() {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect()
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Computes one value per node, children first. `f` receives the node
    /// and its children's values in child order.
    fn fold<R, E, F>(&self, d: &CwDecomposition, f: F) -> Result<Vec<R>, E>
    where
        R: Send + Sync,
        E: Send,
        F: Fn(NodeId, &[&R]) -> Result<R, E> + Sync,
    {
        let slots: Vec<OnceLock<R>> = (0..d.len()).map(|_| OnceLock::new()).collect();
        let compute = |t: NodeId| -> Result<(), E> {
            let children = d.children(t);
            let refs: Vec<&R> = children
                .iter()
                .map(|c| slots[c.0].get().expect("child computed first"))
                .collect();
            let value = f(t, &refs)?;
            let _ = slots[t.0].set(value);
            Ok(())
        };
        if self.threads <= 1 {
            for t in d.post_order() {
                compute(t)?;
            }
        } else {
            fn rec<E: Send>(
                d: &CwDecomposition,
                t: NodeId,
                compute: &(dyn Fn(NodeId) -> Result<(), E> + Sync),
            ) -> Result<(), E> {
                match d.node(t) {
                    Node::Union(l, r) => {
                        let (a, b) = rayon::join(|| rec(d, *l, compute), || rec(d, *r, compute));
                        a?;
                        b?;
                    }
                    Node::Recolor { child, .. } | Node::AddEdges { child, .. } => rec(d, *child, compute)?,
                    Node::Intro { .. } => {}
                }
                compute(t)
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .stack_size(64 << 20)
                .build()
                .expect("thread pool");
            pool.install(|| rec(d, d.root(), &compute))?;
        }
        Ok(slots
            .into_iter()
            .map(|s| s.into_inner().expect("every node is reachable"))
            .collect())
    }

    fn reach(&self, core: &dyn DpCore, d: &CwDecomposition) -> Result<Vec<Reach>, EngineError> {
        self.fold(d, |t, children: &[&Reach]| {
            let arity = children.len();
            let mut trans: Vec<(&Entry, Vec<u32>)> = Vec::new();
            'tr: for tr in core.process(t) {
                if tr.children.len() != arity {
                    return Err(EngineError::CoreContract(format!(
                        "transition at node {} has {} children, expected {}",
                        d.label(t),
                        tr.children.len(),
                        arity
                    )));
                }
                let mut idx = Vec::with_capacity(arity);
                for (c, e) in children.iter().zip(&tr.children) {
                    match c.pi.binary_search(e) {
                        Ok(i) => idx.push(i as u32),
                        Err(_) => continue 'tr,
                    }
                }
                trans.push((&tr.entry, idx));
            }
            let mut pi: Vec<Entry> = trans.iter().map(|(e, _)| (*e).clone()).collect();
            pi.sort();
            pi.dedup();
            let mut trans: Vec<(u32, Vec<u32>)> = trans
                .into_iter()
                .map(|(e, idx)| (pi.binary_search(e).expect("present") as u32, idx))
                .collect();
            trans.sort();
            trans.dedup();
            Ok(Reach { pi, trans })
        })
    }

    /// Decides whether an accepting witness exists and returns the
    /// lexicographically first one.
    pub fn solve_single(&self, core: &dyn DpCore, d: &CwDecomposition) -> Result<SingleOutcome, EngineError> {
        let reach = self.reach(core, d)?;
        let root = &reach[d.root().0];
        let Some(w) = root.pi.iter().position(|e| core.accepts(e)) else {
            return Ok(SingleOutcome {
                feasible: false,
                witness: None,
            });
        };
        let mut chosen = vec![u32::MAX; d.len()];
        chosen[d.root().0] = w as u32;
        // Parents precede children in reverse post-order.
        for t in d.post_order().into_iter().rev() {
            let w = chosen[t.0];
            let (_, idx) = reach[t.0]
                .trans
                .iter()
                .find(|(e, _)| *e == w)
                .expect("reachable entry has a transition");
            for (c, &i) in d.children(t).iter().zip(idx) {
                chosen[c.0] = i;
            }
        }
        let entries = d
            .node_ids()
            .map(|t| reach[t.0].pi[chosen[t.0] as usize].clone())
            .collect();
        Ok(SingleOutcome {
            feasible: true,
            witness: Some(Witness::new(entries)),
        })
    }

    /// All accepting witnesses, sorted. Fails once more than `limit` would
    /// be produced.
    pub fn enumerate_witnesses(
        &self,
        core: &dyn DpCore,
        d: &CwDecomposition,
        limit: usize,
    ) -> Result<Vec<Witness>, EngineError> {
        let reach = self.reach(core, d)?;
        // Partial witnesses as (node, entry index) lists.
        fn walk(
            d: &CwDecomposition,
            reach: &[Reach],
            t: NodeId,
            w: u32,
            limit: usize,
        ) -> Result<Vec<Vec<(usize, u32)>>, EngineError> {
            let children = d.children(t);
            let mut out = Vec::new();
            for (_, idx) in reach[t.0].trans.iter().filter(|(e, _)| *e == w) {
                let mut partial: Vec<Vec<(usize, u32)>> = vec![vec![(t.0, w)]];
                for (c, &i) in children.iter().zip(idx) {
                    let subs = walk(d, reach, *c, i, limit)?;
                    let mut next = Vec::new();
                    for p in &partial {
                        for s in &subs {
                            let mut q = p.clone();
                            q.extend_from_slice(s);
                            next.push(q);
                            if next.len() > limit {
                                return Err(EngineError::Budget(limit));
                            }
                        }
                    }
                    partial = next;
                }
                out.extend(partial);
                if out.len() > limit {
                    return Err(EngineError::Budget(limit));
                }
            }
            Ok(out)
        }
        let root = &reach[d.root().0];
        let mut out = Vec::new();
        for (w, e) in root.pi.iter().enumerate() {
            if !core.accepts(e) {
                continue;
            }
            for assignment in walk(d, &reach, d.root(), w as u32, limit)? {
                let mut entries = vec![Entry::default(); d.len()];
                for (t, i) in assignment {
                    entries[t] = reach[t].pi[i as usize].clone();
                }
                out.push(Witness::new(entries));
                if out.len() > limit {
                    return Err(EngineError::Budget(limit));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn rho_leaf(core: &dyn DpCore, d: &CwDecomposition, t: NodeId, e: &Entry) -> Result<bool, EngineError> {
        core.rho(e).ok_or_else(|| {
            EngineError::CoreContract(format!("rho undefined on entry {e:?} at leaf {}", d.label(t)))
        })
    }

    fn check_cores(&self, cores: &[&dyn DpCore], d: &CwDecomposition) -> Result<Vec<Vec<Reach>>, EngineError> {
        if cores.is_empty() {
            return Err(EngineError::TooFewCores(1));
        }
        cores.iter().map(|c| self.reach(*c, d)).collect()
    }

    // Per core, for a unary or union node: map from child index tuple to the
    // sorted list of entry indices it produces.
    fn successor_maps(reaches: &[Vec<Reach>], t: NodeId) -> Vec<HashMap<&[u32], Vec<u32>>> {
        reaches
            .iter()
            .map(|reach| {
                let mut m: HashMap<&[u32], Vec<u32>> = HashMap::new();
                for (w, idx) in &reach[t.0].trans {
                    m.entry(idx.as_slice()).or_default().push(*w);
                }
                m
            })
            .collect()
    }

    fn leaf_keys(reaches: &[Vec<Reach>], t: NodeId) -> Vec<Key> {
        let lists: Vec<Vec<u32>> = reaches
            .iter()
            .map(|reach| (0..reach[t.0].pi.len() as u32).collect())
            .collect();
        let refs: Vec<&[u32]> = lists.iter().map(Vec::as_slice).collect();
        cartesian(&refs)
    }

    fn successors(maps: &[HashMap<&[u32], Vec<u32>>], children: &[&[u32]]) -> Vec<Key> {
        let mut lists: Vec<&[u32]> = Vec::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            let idx: Vec<u32> = children.iter().map(|k| k[i]).collect();
            match m.get(idx.as_slice()) {
                Some(l) => lists.push(l),
                None => return Vec::new(),
            }
        }
        cartesian(&lists)
    }

    fn solutions_from_keys(
        cores: &[&dyn DpCore],
        reaches: &[Vec<Reach>],
        d: &CwDecomposition,
        keys: &[Key],
    ) -> Result<(Vec<VertexSet>, Vec<Witness>), EngineError> {
        let leaf = d.leaf_vertices();
        let mut sets = vec![VertexSet::new(); cores.len()];
        let mut witnesses = Vec::with_capacity(cores.len());
        for (i, core) in cores.iter().enumerate() {
            let entries: Vec<Entry> = d
                .node_ids()
                .map(|t| reaches[i][t.0].pi[keys[t.0][i] as usize].clone())
                .collect();
            for t in d.node_ids() {
                if let Some(v) = leaf[t.0] {
                    if Self::rho_leaf(*core, d, t, &entries[t.0])? {
                        sets[i].insert(v);
                    }
                }
            }
            witnesses.push(Witness::new(entries));
        }
        Ok((sets, witnesses))
    }

    fn diverse_tables(
        &self,
        cores: &[&dyn DpCore],
        f: &VennMeasure,
        d: &CwDecomposition,
    ) -> Result<(Vec<Vec<Reach>>, Vec<VennTable>), EngineError> {
        let reaches = self.check_cores(cores, d)?;
        if f.arity() != cores.len() {
            return Err(EngineError::ArityMismatch {
                measure: f.arity(),
                cores: cores.len(),
            });
        }
        let n = d.vertex_count() as u64;
        let f0 = f.empty_influence();
        let outside = n
            .saturating_sub(1)
            .checked_mul(f0)
            .ok_or(EngineError::Overflow)?;
        let whole = n.checked_mul(f0).ok_or(EngineError::Overflow)?;
        let improve = |table: &mut BTreeMap<Key, Cell>, key: Key, value: u64, back: Back| {
            match table.get_mut(&key) {
                Some(cell) if cell.value >= value => {}
                Some(cell) => *cell = Cell { value, back },
                None => {
                    table.insert(key, Cell { value, back });
                }
            }
        };
        let tables = self.fold(d, |t, children: &[&BTreeMap<Key, Cell>]| {
            let mut table = BTreeMap::new();
            match children.len() {
                0 => {
                    for key in Self::leaf_keys(&reaches, t) {
                        let mut bits = 0usize;
                        for (i, core) in cores.iter().enumerate() {
                            let e = &reaches[i][t.0].pi[key[i] as usize];
                            if Self::rho_leaf(*core, d, t, e)? {
                                bits |= 1 << i;
                            }
                        }
                        let value = f.at(bits).checked_add(outside).ok_or(EngineError::Overflow)?;
                        improve(&mut table, key, value, Back::Leaf);
                    }
                }
                1 => {
                    let maps = Self::successor_maps(&reaches, t);
                    for (ck, cell) in children[0] {
                        for key in Self::successors(&maps, &[ck]) {
                            improve(&mut table, key, cell.value, Back::Unary(ck.clone()));
                        }
                    }
                }
                _ => {
                    let maps = Self::successor_maps(&reaches, t);
                    for (k1, c1) in children[0] {
                        for (k2, c2) in children[1] {
                            let keys = Self::successors(&maps, &[k1, k2]);
                            if keys.is_empty() {
                                continue;
                            }
                            let value = c1
                                .value
                                .checked_add(c2.value)
                                .and_then(|s| s.checked_sub(whole))
                                .ok_or(EngineError::Overflow)?;
                            for key in keys {
                                improve(&mut table, key, value, Back::Union(k1.clone(), k2.clone()));
                            }
                        }
                    }
                }
            }
            Ok(table)
        })?;
        Ok((reaches, tables))
    }

    /// Best diversity of every accepting entry tuple at the root, keyed by
    /// the tuple's entries.
    pub fn diverse_root_table(
        &self,
        cores: &[&dyn DpCore],
        f: &VennMeasure,
        d: &CwDecomposition,
    ) -> Result<BTreeMap<Vec<Entry>, u64>, EngineError> {
        let (reaches, tables) = self.diverse_tables(cores, f, d)?;
        let root = d.root().0;
        Ok(tables[root]
            .iter()
            .map(|(k, c)| {
                let entries = k
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| reaches[i][root].pi[x as usize].clone())
                    .collect();
                (entries, c.value)
            })
            .collect())
    }

    /// Maximizes the Venn `f`-diversity over tuples `(S_1, ..., S_r)` where
    /// `S_i` is a solution of core `i`; feasible iff the maximum is at least
    /// `target`.
    pub fn diverse_solve(
        &self,
        cores: &[&dyn DpCore],
        f: &VennMeasure,
        target: u64,
        d: &CwDecomposition,
    ) -> Result<DiverseOutcome, EngineError> {
        let (reaches, tables) = self.diverse_tables(cores, f, d)?;
        let root = d.root();
        let mut best: Option<(&Key, u64)> = None;
        for (key, cell) in &tables[root.0] {
            let accepted = key
                .iter()
                .enumerate()
                .all(|(i, &x)| cores[i].accepts(&reaches[i][root.0].pi[x as usize]));
            if accepted && best.is_none_or(|(_, v)| cell.value > v) {
                best = Some((key, cell.value));
            }
        }
        let Some((root_key, value)) = best else {
            return Ok(DiverseOutcome {
                best_value: None,
                feasible: false,
                solutions: None,
                witnesses: None,
            });
        };
        let mut keys: Vec<Key> = vec![Vec::new(); d.len()];
        keys[root.0] = root_key.clone();
        for t in d.post_order().into_iter().rev() {
            let cell = &tables[t.0][&keys[t.0]];
            let children = d.children(t);
            match &cell.back {
                Back::Leaf => {}
                Back::Unary(k) => keys[children[0].0] = k.clone(),
                Back::Union(a, b) => {
                    keys[children[0].0] = a.clone();
                    keys[children[1].0] = b.clone();
                }
            }
        }
        let (solutions, witnesses) = Self::solutions_from_keys(cores, &reaches, d, &keys)?;
        Ok(DiverseOutcome {
            best_value: Some(value),
            feasible: value >= target,
            solutions: Some(solutions),
            witnesses: Some(witnesses),
        })
    }

    /// Finds solutions `S_i` of the cores with all pairwise Hamming
    /// distances at least `target`.
    pub fn min_diverse_solve(
        &self,
        cores: &[&dyn DpCore],
        target: u64,
        d: &CwDecomposition,
    ) -> Result<MinDiverseOutcome, EngineError> {
        let r = cores.len();
        if r < 2 {
            return Err(EngineError::TooFewCores(2));
        }
        if target == 0 {
            let mut solutions = Vec::with_capacity(r);
            for core in cores {
                let out = self.solve_single(*core, d)?;
                match out.witness {
                    Some(w) => solutions.push(extract_solution(*core, d, &w)?),
                    None => {
                        return Ok(MinDiverseOutcome {
                            feasible: false,
                            solutions: None,
                        })
                    }
                }
            }
            return Ok(MinDiverseOutcome {
                feasible: true,
                solutions: Some(solutions),
            });
        }
        let infeasible = MinDiverseOutcome {
            feasible: false,
            solutions: None,
        };
        let reaches = self.check_cores(cores, d)?;
        if target > d.vertex_count() as u64 {
            return Ok(infeasible);
        }
        let cap = target as u32;
        let pairs = pairs(r);
        let tables: Vec<MinTable> = self.fold(d, |t, children: &[&MinTable]| {
            let mut table: MinTable = BTreeMap::new();
            let mut add = |key: &Key, vec: Vec<u32>, back: &dyn Fn() -> MinBack| {
                let cells = match table.get_mut(key) {
                    Some(c) => c,
                    None => table.entry(key.clone()).or_default(),
                };
                cells.entry(vec).or_insert_with(back);
            };
            match children.len() {
                0 => {
                    for key in Self::leaf_keys(&reaches, t) {
                        let mut member = Vec::with_capacity(r);
                        for (i, core) in cores.iter().enumerate() {
                            member.push(Self::rho_leaf(*core, d, t, &reaches[i][t.0].pi[key[i] as usize])?);
                        }
                        let vec = pairs
                            .iter()
                            .map(|&(i, j)| u32::from(member[i] != member[j]).min(cap))
                            .collect();
                        add(&key, vec, &|| MinBack::Leaf);
                    }
                }
                1 => {
                    let maps = Self::successor_maps(&reaches, t);
                    for (ck, vecs) in children[0] {
                        let keys = Self::successors(&maps, &[ck]);
                        for vec in vecs.keys() {
                            for key in &keys {
                                add(key, vec.clone(), &|| MinBack::Unary(ck.clone(), vec.clone()));
                            }
                        }
                    }
                }
                _ => {
                    let maps = Self::successor_maps(&reaches, t);
                    for (k1, vecs1) in children[0] {
                        for (k2, vecs2) in children[1] {
                            let keys = Self::successors(&maps, &[k1, k2]);
                            if keys.is_empty() {
                                continue;
                            }
                            for v1 in vecs1.keys() {
                                for v2 in vecs2.keys() {
                                    let vec: Vec<u32> =
                                        v1.iter().zip(v2).map(|(a, b)| (a + b).min(cap)).collect();
                                    let back = || MinBack::Union((k1.clone(), v1.clone()), (k2.clone(), v2.clone()));
                                    for key in &keys {
                                        add(key, vec.clone(), &back);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Ok(table)
        })?;
        let root = d.root();
        let mut found: Option<(Key, Vec<u32>)> = None;
        'outer: for (key, vecs) in &tables[root.0] {
            let accepted = key
                .iter()
                .enumerate()
                .all(|(i, &x)| cores[i].accepts(&reaches[i][root.0].pi[x as usize]));
            if !accepted {
                continue;
            }
            for vec in vecs.keys() {
                if vec.iter().all(|&x| x == cap) {
                    found = Some((key.clone(), vec.clone()));
                    break 'outer;
                }
            }
        }
        let Some(start) = found else {
            return Ok(infeasible);
        };
        let mut cells: Vec<(Key, Vec<u32>)> = vec![(Vec::new(), Vec::new()); d.len()];
        cells[root.0] = start;
        for t in d.post_order().into_iter().rev() {
            let (key, vec) = &cells[t.0];
            let back = tables[t.0][key][vec].clone();
            let children = d.children(t);
            match back {
                MinBack::Leaf => {}
                MinBack::Unary(k, v) => cells[children[0].0] = (k, v),
                MinBack::Union(a, b) => {
                    cells[children[0].0] = a;
                    cells[children[1].0] = b;
                }
            }
        }
        let keys: Vec<Key> = cells.into_iter().map(|(k, _)| k).collect();
        let (solutions, _) = Self::solutions_from_keys(cores, &reaches, d, &keys)?;
        Ok(MinDiverseOutcome {
            feasible: true,
            solutions: Some(solutions),
        })
    }
}

/// `{v : ρ(α(Leaf(v))) = 1}` for a witness `α`.
pub fn extract_solution(core: &dyn DpCore, d: &CwDecomposition, witness: &Witness) -> Result<VertexSet, EngineError> {
    let mut s = VertexSet::new();
    for (t, v) in d.leaf_vertices().into_iter().enumerate() {
        if let Some(v) = v {
            if Engine::rho_leaf(core, d, NodeId(t), witness.get(NodeId(t)))? {
                s.insert(v);
            }
        }
    }
    Ok(s)
}

pub fn solve_single(core: &dyn DpCore, d: &CwDecomposition) -> Result<SingleOutcome, EngineError> {
    Engine::default().solve_single(core, d)
}

pub fn diverse_solve(
    cores: &[&dyn DpCore],
    f: &VennMeasure,
    target: u64,
    d: &CwDecomposition,
) -> Result<DiverseOutcome, EngineError> {
    Engine::default().diverse_solve(cores, f, target, d)
}

pub fn min_diverse_solve(cores: &[&dyn DpCore], target: u64, d: &CwDecomposition) -> Result<MinDiverseOutcome, EngineError> {
    Engine::default().min_diverse_solve(cores, target, d)
}

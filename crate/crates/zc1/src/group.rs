//! Finite-group engine: multiplication tables, subgroups, quotients,
//! conjugacy data and the structural subgroups the verifier needs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cyclotomic::{divisors, prime_factors};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed group document: {0}")]
    Malformed(String),
    #[error("multiplication table is not associative")]
    NotAssociative,
    #[error("element {0} has no inverse")]
    NoInverse(u32),
    #[error("identity is not at index 0")]
    IdentityNotFirst,
    #[error("closure exceeds the configured maximum order {0}")]
    ClosureTooLarge(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("witness precondition violated: {0}")]
    Precondition(String),
}

/// How a [`GroupTable`] was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    PermInput,
    TableInput,
    Quotient {
        parent_order: usize,
        normal_order: usize,
    },
}

/// Options for [`load_group`] and the table constructors.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Maximum group order accepted when expanding a permutation closure.
    pub max_order: usize,
    /// Below this order associativity is checked exhaustively; above it by
    /// seeded random sampling of `10 * |G|^2` triples.
    pub exhaustive_assoc_below: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            max_order: 512,
            exhaustive_assoc_below: 256,
        }
    }
}

/// A finite group as an explicit multiplication table. The identity is always
/// element 0. Immutable once constructed.
#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    elt_order: Vec<u32>,
    pub provenance: Provenance,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable(order={}, {:?})", self.order, self.provenance)
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn elt_order(&self, a: u32) -> u32 {
        self.elt_order[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    /// `g^k` for any integer exponent.
    pub fn pow(&self, g: u32, k: i64) -> u32 {
        let o = self.elt_order(g) as i64;
        let mut e = k.rem_euclid(o);
        let mut acc = 0u32;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Conjugate `g^h = h^-1 g h`.
    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(self.inv(h), g), h)
    }

    /// Commutator `(g, h) = g^-1 h^-1 g h`.
    pub fn commutator(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))
    }

    /// lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        self.elt_order
            .iter()
            .fold(1u64, |acc, &o| acc.lcm(&(o as u64)))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Canonical byte serialization of the table; memoization and hash key.
    pub fn table_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 4 * self.mul.len());
        out.extend_from_slice(&(self.order as u64).to_le_bytes());
        for &m in &self.mul {
            out.extend_from_slice(&m.to_le_bytes());
        }
        out
    }

    /// Hex SHA-256 of [`Self::table_bytes`].
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.table_bytes());
        let d = h.finalize();
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The `p`-part of `g`: the power of `g` of `p`-power order with
    /// `g = g_p * g_{p'}` and both factors commuting.
    pub fn p_part(&self, g: u32, p: u64) -> u32 {
        let o = self.elt_order(g) as u64;
        let mut pv = 1u64;
        let mut m = o;
        while m % p == 0 {
            m /= p;
            pv *= p;
        }
        if pv == 1 {
            return 0;
        }
        // a = 1 mod p^v, a = 0 mod m'
        let inv = mod_inverse(m % pv, pv).expect("coprime by construction");
        let a = (m * inv) % o.max(1);
        self.pow(g, a as i64)
    }

    /// The `p'`-part of `g`.
    pub fn p_prime_part(&self, g: u32, p: u64) -> u32 {
        self.mul(self.inv(self.p_part(g, p)), g)
    }

    fn from_parts(
        order: usize,
        mul: Vec<u32>,
        provenance: Provenance,
        opts: &LoadOptions,
    ) -> Result<GroupTable, GroupError> {
        // Identity checks.
        for g in 0..order as u32 {
            if mul[g as usize] != g || mul[g as usize * order] != g {
                return Err(GroupError::IdentityNotFirst);
            }
        }
        // Inverses.
        let mut inv = vec![u32::MAX; order];
        for g in 0..order {
            for h in 0..order {
                if mul[g * order + h] == 0 {
                    inv[g] = h as u32;
                }
            }
            if inv[g] == u32::MAX {
                return Err(GroupError::NoInverse(g as u32));
            }
        }
        // Associativity.
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        if order <= opts.exhaustive_assoc_below {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::NotAssociative);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5a5a_0001);
            for _ in 0..10 * order * order {
                let a = rng.gen_range(0..order);
                let b = rng.gen_range(0..order);
                let c = rng.gen_range(0..order);
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative);
                }
            }
        }
        // Element orders, with a Lagrange sanity check.
        let mut elt_order = vec![0u32; order];
        for g in 0..order as u32 {
            let mut k = 1u32;
            let mut x = g;
            while x != 0 {
                x = mul[x as usize * order + g as usize];
                k += 1;
            }
            if order % k as usize != 0 {
                return Err(GroupError::Malformed(format!(
                    "element order {k} does not divide group order {order}"
                )));
            }
            elt_order[g as usize] = k;
        }
        Ok(GroupTable {
            order,
            mul,
            inv,
            elt_order,
            provenance,
        })
    }

    /// Build from an explicit table (`rows[a][b] = a*b`), identity at index 0.
    pub fn from_table(rows: &[Vec<u32>], opts: &LoadOptions) -> Result<GroupTable, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Malformed("empty table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(GroupError::Malformed("table is not square".into()));
            }
            for &v in row {
                if v as usize >= order {
                    return Err(GroupError::Malformed(format!("index {v} out of range")));
                }
                mul.push(v);
            }
        }
        Self::from_parts(order, mul, Provenance::TableInput, opts)
    }

    /// Expand permutation generators (as vectors mapping point `i` to `perm[i]`)
    /// by closure and index the elements in lexicographic order, which puts the
    /// identity first.
    pub fn from_permutations(
        degree: usize,
        gens: &[Vec<usize>],
        opts: &LoadOptions,
    ) -> Result<GroupTable, GroupError> {
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(GroupError::Malformed("generator is not a permutation".into()));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut frontier = vec![identity];
        while let Some(p) = frontier.pop() {
            for g in gens {
                // (p * g)(x) = p(g(x))
                let q: Vec<usize> = (0..degree).map(|x| p[g[x]]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > opts.max_order {
                        return Err(GroupError::ClosureTooLarge(opts.max_order));
                    }
                    frontier.push(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, u32> =
            elems.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let order = elems.len();
        let mut mul = vec![0u32; order * order];
        for (i, p) in elems.iter().enumerate() {
            for (j, q) in elems.iter().enumerate() {
                let prod: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                mul[i * order + j] = *index.get(&prod).expect("closed under multiplication");
            }
        }
        Self::from_parts(order, mul, Provenance::PermInput, opts)
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = num_integer::gcd(a, m);
    if e != 1 {
        return None;
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// JSON group description accepted by [`load_group`].
#[derive(Debug, Clone, Deserialize)]
pub struct GroupDoc {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub degree: Option<usize>,
    /// Generators as lists of cycles with 1-based points.
    #[serde(default)]
    pub generators: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default)]
    pub table: Option<Vec<Vec<u32>>>,
}

/// Parse and validate a group-description document.
pub fn load_group(doc: &GroupDoc, opts: &LoadOptions) -> Result<GroupTable, GroupError> {
    match doc.kind.as_str() {
        "perm" => {
            let degree = doc
                .degree
                .ok_or_else(|| GroupError::Malformed("perm input requires degree".into()))?;
            let gens = doc
                .generators
                .as_ref()
                .ok_or_else(|| GroupError::Malformed("perm input requires generators".into()))?;
            let perms: Vec<Vec<usize>> = gens
                .iter()
                .map(|cycles| cycles_to_permutation(degree, cycles))
                .collect::<Result<_, _>>()?;
            GroupTable::from_permutations(degree, &perms, opts)
        }
        "table" => {
            let rows = doc
                .table
                .as_ref()
                .ok_or_else(|| GroupError::Malformed("table input requires table".into()))?;
            GroupTable::from_table(rows, opts)
        }
        other => Err(GroupError::Malformed(format!("unknown kind {other:?}"))),
    }
}

/// Convert a cycle list (1-based points) into a permutation vector.
pub fn cycles_to_permutation(
    degree: usize,
    cycles: &[Vec<usize>],
) -> Result<Vec<usize>, GroupError> {
    let mut perm: Vec<usize> = (0..degree).collect();
    for cycle in cycles {
        for w in 0..cycle.len() {
            let from = cycle[w];
            let to = cycle[(w + 1) % cycle.len()];
            if from == 0 || from > degree || to == 0 || to > degree {
                return Err(GroupError::Malformed(format!(
                    "cycle point out of range 1..={degree}"
                )));
            }
            perm[from - 1] = to - 1;
        }
    }
    if !is_permutation(&perm) {
        return Err(GroupError::Malformed("cycles overlap".into()));
    }
    Ok(perm)
}

/// A subgroup given by its sorted member set plus a generating witness.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    pub members: Vec<u32>,
    pub generators: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: u32) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Subset test against another member list.
    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Materialize the subgroup as a group in its own right. Returns the new
    /// table and the member map (sub-index -> parent element index).
    pub fn as_group(&self, g: &GroupTable) -> (GroupTable, Vec<u32>) {
        let n = self.members.len();
        let index: HashMap<u32, u32> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        let mut mul = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                mul[i * n + j] = index[&g.mul(a, b)];
            }
        }
        let opts = LoadOptions::default();
        let table = GroupTable::from_parts(n, mul, Provenance::TableInput, &opts)
            .expect("subgroup table inherits the group axioms");
        (table, self.members.clone())
    }
}

/// Closure of a set of generators.
pub fn closure(g: &GroupTable, gens: &[u32]) -> Subgroup {
    let mut members: BTreeSet<u32> = BTreeSet::new();
    members.insert(0);
    let mut frontier: Vec<u32> = vec![0];
    while let Some(x) = frontier.pop() {
        for &gen in gens {
            let y = g.mul(x, gen);
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    // gens generate a subsemigroup containing 1; finiteness makes it a subgroup.
    Subgroup {
        members: members.into_iter().collect(),
        generators: gens.to_vec(),
    }
}

pub fn trivial_subgroup() -> Subgroup {
    Subgroup {
        members: vec![0],
        generators: vec![],
    }
}

pub fn full_subgroup(g: &GroupTable) -> Subgroup {
    Subgroup {
        members: g.elements().collect(),
        generators: g.elements().skip(1).collect(),
    }
}

/// Commutator subgroup: closure of all commutators.
pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    let mut comms: BTreeSet<u32> = BTreeSet::new();
    for a in g.elements() {
        for b in g.elements() {
            comms.insert(g.commutator(a, b));
        }
    }
    let gens: Vec<u32> = comms.into_iter().filter(|&c| c != 0).collect();
    let mut sub = closure(g, &gens);
    sub.generators = gens;
    sub
}

pub fn center(g: &GroupTable) -> Subgroup {
    let members: Vec<u32> = g
        .elements()
        .filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    Subgroup {
        generators: members.clone(),
        members,
    }
}

/// Centralizer of a set of elements.
pub fn centralizer(g: &GroupTable, set: &[u32]) -> Subgroup {
    let members: Vec<u32> = g
        .elements()
        .filter(|&c| set.iter().all(|&s| g.mul(c, s) == g.mul(s, c)))
        .collect();
    Subgroup {
        generators: members.clone(),
        members,
    }
}

/// Normalizer of a subgroup.
pub fn normalizer(g: &GroupTable, h: &Subgroup) -> Subgroup {
    let members: Vec<u32> = g
        .elements()
        .filter(|&x| h.members.iter().all(|&m| h.contains(g.conj(m, x))))
        .collect();
    Subgroup {
        generators: members.clone(),
        members,
    }
}

pub fn is_normal(g: &GroupTable, h: &Subgroup) -> bool {
    h.members
        .iter()
        .all(|&m| g.elements().all(|x| h.contains(g.conj(m, x))))
}

/// Conjugacy classes, centralizer orders and power maps. Classes are sorted by
/// (order of representative, representative index); members are sorted and the
/// representative is the least member.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    pub classes: Vec<Vec<u32>>,
    pub class_of: Vec<usize>,
    pub reps: Vec<u32>,
    pub centralizer_order: Vec<usize>,
}

impl ConjugacyData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class of `rep(c)^k`; constant over the members of `c`.
    pub fn power_map(&self, g: &GroupTable, c: usize, k: i64) -> usize {
        self.class_of[g.pow(self.reps[c], k) as usize]
    }

    /// Class labels like `1a, 2a, 2b, 3a` (rep order + letter).
    pub fn labels(&self, g: &GroupTable) -> Vec<String> {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        let mut out = Vec::with_capacity(self.classes.len());
        for &rep in &self.reps {
            let o = g.elt_order(rep);
            let c = counts.entry(o).or_insert(0);
            let letter = (b'a' + (*c % 26) as u8) as char;
            let suffix = if *c >= 26 {
                format!("{letter}{}", *c / 26)
            } else {
                letter.to_string()
            };
            out.push(format!("{o}{suffix}"));
            *c += 1;
        }
        out
    }
}

pub fn conjugacy_data(g: &GroupTable) -> ConjugacyData {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for x in g.elements() {
        if class_of[x as usize] != usize::MAX {
            continue;
        }
        let mut members: BTreeSet<u32> = BTreeSet::new();
        for h in g.elements() {
            members.insert(g.conj(x, h));
        }
        let members: Vec<u32> = members.into_iter().collect();
        let idx = classes.len();
        for &m in &members {
            class_of[m as usize] = idx;
        }
        classes.push(members);
    }
    // Deterministic ordering: (order of least rep, least rep).
    let mut order_key: Vec<usize> = (0..classes.len()).collect();
    order_key.sort_by_key(|&i| (g.elt_order(classes[i][0]), classes[i][0]));
    let classes: Vec<Vec<u32>> = order_key.iter().map(|&i| classes[i].clone()).collect();
    let mut class_of = vec![usize::MAX; g.order()];
    for (i, c) in classes.iter().enumerate() {
        for &m in c {
            class_of[m as usize] = i;
        }
    }
    let reps: Vec<u32> = classes.iter().map(|c| c[0]).collect();
    let centralizer_order: Vec<usize> = classes.iter().map(|c| g.order() / c.len()).collect();
    ConjugacyData {
        classes,
        class_of,
        reps,
        centralizer_order,
    }
}

/// All normal subgroups, via join-closure of normal closures of single
/// conjugacy classes. Sorted by (order, member list).
pub fn normal_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    let conj = conjugacy_data(g);
    let atoms: Vec<Subgroup> = conj
        .classes
        .iter()
        .map(|class| {
            let gens: Vec<u32> = class.iter().copied().filter(|&x| x != 0).collect();
            let mut s = closure(g, &gens);
            s.generators = gens;
            s
        })
        .collect();
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    found.insert(vec![0]);
    let mut frontier: Vec<Vec<u32>> = vec![vec![0]];
    while let Some(cur) = frontier.pop() {
        for atom in &atoms {
            let mut gens: Vec<u32> = cur.iter().copied().filter(|&x| x != 0).collect();
            gens.extend(atom.members.iter().copied().filter(|&x| x != 0));
            let joined = closure(g, &gens);
            if found.insert(joined.members.clone()) {
                frontier.push(joined.members);
            }
        }
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|members| Subgroup {
            generators: members.iter().copied().filter(|&x| x != 0).collect(),
            members,
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    debug_assert!(out.iter().all(|n| is_normal(g, n)));
    out
}

/// Quotient `G/N` as a fresh table plus the projection map on element indices.
pub fn quotient(g: &GroupTable, n: &Subgroup) -> Result<(GroupTable, Vec<u32>), GroupError> {
    if !is_normal(g, n) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut cosets: Vec<Vec<u32>> = Vec::new();
    for x in g.elements() {
        if coset_of[x as usize] != usize::MAX {
            continue;
        }
        let mut members: Vec<u32> = n.members.iter().map(|&m| g.mul(x, m)).collect();
        members.sort_unstable();
        let idx = cosets.len();
        for &m in &members {
            coset_of[m as usize] = idx;
        }
        cosets.push(members);
    }
    // Sort cosets lexicographically; the coset of the identity starts with 0
    // and therefore lands at index 0.
    let mut order_key: Vec<usize> = (0..cosets.len()).collect();
    order_key.sort_by(|&a, &b| cosets[a].cmp(&cosets[b]));
    let cosets: Vec<Vec<u32>> = order_key.iter().map(|&i| cosets[i].clone()).collect();
    let mut coset_of = vec![0u32; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &m in c {
            coset_of[m as usize] = i as u32;
        }
    }
    let q_order = cosets.len();
    let mut mul = vec![0u32; q_order * q_order];
    for (i, ci) in cosets.iter().enumerate() {
        for (j, cj) in cosets.iter().enumerate() {
            mul[i * q_order + j] = coset_of[g.mul(ci[0], cj[0]) as usize];
        }
    }
    let table = GroupTable::from_parts(
        q_order,
        mul,
        Provenance::Quotient {
            parent_order: g.order(),
            normal_order: n.order(),
        },
        &LoadOptions::default(),
    )?;
    Ok((table, coset_of))
}

/// A cyclic normal subgroup containing the derived subgroup, if one exists;
/// ties broken by maximal order, then least member list. Its absence certifies
/// that the group is not cyclic-by-abelian.
pub fn cyclic_normal_witness(g: &GroupTable) -> Option<Subgroup> {
    all_cyclic_normal_witnesses(g).into_iter().next()
}

/// All cyclic normal subgroups containing the derived subgroup, ordered by
/// (descending order, member list).
pub fn all_cyclic_normal_witnesses(g: &GroupTable) -> Vec<Subgroup> {
    let derived = derived_subgroup(g);
    let mut candidates: Vec<Subgroup> = normal_subgroups(g)
        .into_iter()
        .filter(|n| derived.is_subset_of(n) && is_cyclic_subgroup(g, n))
        .collect();
    candidates.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then_with(|| a.members.cmp(&b.members))
    });
    candidates
}

pub fn is_cyclic_subgroup(g: &GroupTable, n: &Subgroup) -> bool {
    n.members
        .iter()
        .any(|&m| g.elt_order(m) as usize == n.order())
}

/// `D = Z(C_G(A))` for a cyclic normal witness `A`.
pub fn compute_d(g: &GroupTable, a: &Subgroup) -> Result<Subgroup, GroupError> {
    if !is_normal(g, a) || !is_cyclic_subgroup(g, a) {
        return Err(GroupError::Precondition(
            "witness must be a cyclic normal subgroup".into(),
        ));
    }
    let derived = derived_subgroup(g);
    if !derived.is_subset_of(a) {
        return Err(GroupError::Precondition(
            "witness must contain the derived subgroup".into(),
        ));
    }
    let c = centralizer(g, &a.members);
    let (c_table, c_members) = c.as_group(g);
    let z = center(&c_table);
    let members: Vec<u32> = z.members.iter().map(|&i| c_members[i as usize]).collect();
    Ok(Subgroup {
        generators: members.clone(),
        members,
    })
}

/// Does `H` (materialized as its own group) have a normal subgroup whose order
/// is the full `p'`-part of `|H|`?
pub fn has_normal_p_complement(h: &GroupTable, p: u64) -> bool {
    let mut target = h.order() as u64;
    while target % p == 0 {
        target /= p;
    }
    if target == h.order() as u64 {
        return true;
    }
    normal_subgroups(h)
        .iter()
        .any(|n| n.order() as u64 == target)
}

/// Candidate torsion-unit orders: divisors of `exp(G)` greater than 1. Within
/// a context where the unit is known to map to 1 modulo a nilpotent normal
/// subgroup `N`, orders with a prime divisor not dividing `|N|` are pruned.
pub fn order_candidates(g: &GroupTable, omega_trivial_modulus: Option<usize>) -> Vec<u64> {
    let e = g.exponent();
    divisors(e)
        .into_iter()
        .filter(|&d| d > 1)
        .filter(|&d| match omega_trivial_modulus {
            None => true,
            Some(n) => prime_factors(d).iter().all(|&p| (n as u64) % p == 0),
        })
        .collect()
}

//! Structure theory of abelian (sub)groups: invariant-factor bases, linear
//! characters, cyclic-quotient kernels and the admissible kernel family used
//! by the induced-character constraints.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;

use crate::cyclotomic::CycNumber;
use crate::group::{
    is_normal, normal_subgroups, GroupError, GroupTable, Subgroup,
};

/// Invariant-factor basis of an abelian subgroup, materialized as its own
/// group table plus the member map into the parent.
#[derive(Debug)]
pub struct AbelianBasis {
    /// The subgroup as a group in its own right.
    pub table: GroupTable,
    /// Sub-index -> parent element index (sorted ascending).
    pub members: Vec<u32>,
    /// Generators as sub-indices, aligned with `orders`.
    pub generators: Vec<u32>,
    /// Invariant factors, each dividing the next; the last equals `exp(N)`.
    pub orders: Vec<u64>,
    // Exponent tuple of every sub-element with respect to `generators`.
    dlog: Vec<Vec<u64>>,
}

impl AbelianBasis {
    pub fn new(parent: &GroupTable, sub: &Subgroup) -> Result<Arc<AbelianBasis>, GroupError> {
        let (table, members) = sub.as_group(parent);
        if !table.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        let (mut gens, mut orders) = decompose(&table);
        // decompose returns descending invariant factors; expose ascending.
        gens.reverse();
        orders.reverse();
        let dlog = discrete_logs(&table, &gens, &orders);
        Ok(Arc::new(AbelianBasis {
            table,
            members,
            generators: gens,
            orders,
            dlog,
        }))
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }

    /// Exponent tuple of a sub-element over the basis generators.
    pub fn dlog(&self, sub_elt: u32) -> &[u64] {
        &self.dlog[sub_elt as usize]
    }

    /// Sub-index of a parent element, when the element lies in the subgroup.
    pub fn member_index(&self, parent_elt: u32) -> Option<u32> {
        self.members
            .binary_search(&parent_elt)
            .ok()
            .map(|i| i as u32)
    }

    pub fn contains(&self, parent_elt: u32) -> bool {
        self.member_index(parent_elt).is_some()
    }

    pub fn as_subgroup(&self) -> Subgroup {
        Subgroup {
            members: self.members.clone(),
            generators: self
                .generators
                .iter()
                .map(|&g| self.members[g as usize])
                .collect(),
        }
    }
}

// Greedy invariant-factor decomposition: pick a least-index element of maximal
// order, split it off, recurse on the quotient and lift the quotient basis.
fn decompose(table: &GroupTable) -> (Vec<u32>, Vec<u64>) {
    if table.order() == 1 {
        return (Vec::new(), Vec::new());
    }
    let g1 = table
        .elements()
        .max_by_key(|&x| (table.elt_order(x), std::cmp::Reverse(x)))
        .unwrap();
    let o1 = table.elt_order(g1) as u64;
    if o1 as usize == table.order() {
        return (vec![g1], vec![o1]);
    }
    let cyc = crate::group::closure(table, &[g1]);
    let (q, proj) = crate::group::quotient(table, &cyc).expect("abelian subgroups are normal");
    let (q_gens, q_orders) = decompose(&q);
    let mut gens = vec![g1];
    let mut orders = vec![o1];
    // powers of g1 for discrete logs inside <g1>
    let mut pow_index: BTreeMap<u32, u64> = BTreeMap::new();
    for k in 0..o1 {
        pow_index.insert(table.pow(g1, k as i64), k);
    }
    for (ḡ, &k) in q_gens.iter().zip(&q_orders) {
        let pre = table
            .elements()
            .find(|&x| proj[x as usize] == *ḡ)
            .expect("projection is surjective");
        let s = pow_index[&table.pow(pre, k as i64)];
        assert_eq!(s % k, 0, "maximal-order factor admits a complement");
        let h = table.mul(pre, table.pow(table.inv(g1), (s / k) as i64));
        debug_assert_eq!(table.elt_order(h) as u64, k);
        gens.push(h);
        orders.push(k);
    }
    // invariant factors divide from the top down
    for w in orders.windows(2) {
        debug_assert_eq!(w[0] % w[1], 0);
    }
    (gens, orders)
}

fn discrete_logs(table: &GroupTable, gens: &[u32], orders: &[u64]) -> Vec<Vec<u64>> {
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; table.order()];
    let mut tuple = vec![0u64; gens.len()];
    loop {
        let mut elt = 0u32;
        for (g, &e) in gens.iter().zip(&tuple) {
            elt = table.mul(elt, table.pow(*g, e as i64));
        }
        assert!(
            dlog[elt as usize].is_none(),
            "generators do not decompose the group as a direct product"
        );
        dlog[elt as usize] = Some(tuple.clone());
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == gens.len() {
                let out: Vec<Vec<u64>> = dlog
                    .into_iter()
                    .map(|t| t.expect("every element is covered"))
                    .collect();
                return out;
            }
            tuple[i] += 1;
            if tuple[i] < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// A linear character of an abelian subgroup, given by one exponent per basis
/// generator. Values are roots of unity of order dividing `exp(N)`.
#[derive(Debug, Clone)]
pub struct LinearCharacter {
    pub basis: Arc<AbelianBasis>,
    pub exponents: Vec<u64>,
}

impl LinearCharacter {
    /// Exponent `e` with value `zeta_exp(N)^e` on a sub-element.
    pub fn root_exponent(&self, sub_elt: u32) -> u64 {
        let l = self.basis.exponent();
        if l == 1 {
            return 0;
        }
        let mut acc = 0u64;
        for ((&e, &t), &o) in self
            .exponents
            .iter()
            .zip(self.basis.dlog(sub_elt))
            .zip(&self.basis.orders)
        {
            acc = (acc + e * t % l * (l / o)) % l;
        }
        acc
    }

    pub fn eval_sub(&self, sub_elt: u32) -> CycNumber {
        CycNumber::root_of_unity(self.basis.exponent() as u32, self.root_exponent(sub_elt) as i64)
    }

    /// Evaluate on a parent element, which must belong to the subgroup.
    pub fn eval(&self, parent_elt: u32) -> CycNumber {
        let idx = self
            .basis
            .member_index(parent_elt)
            .expect("element lies in the subgroup");
        self.eval_sub(idx)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        let l = self.basis.exponent();
        let mut d = l;
        for s in self.basis.table.elements() {
            d = d.gcd(&self.root_exponent(s));
        }
        if d == 0 {
            1
        } else {
            l / d
        }
    }

    /// Kernel as a subgroup of the parent (sorted members).
    pub fn kernel(&self) -> Subgroup {
        let members: Vec<u32> = self
            .basis
            .table
            .elements()
            .filter(|&s| self.root_exponent(s) == 0)
            .map(|s| self.basis.members[s as usize])
            .collect();
        Subgroup {
            generators: members.iter().copied().filter(|&m| m != 0).collect(),
            members,
        }
    }
}

/// All `|N|` linear characters, enumerated by exponent tuples in lexicographic
/// order (so the trivial character comes first).
pub fn linear_characters(basis: &Arc<AbelianBasis>) -> Vec<LinearCharacter> {
    let mut out = Vec::with_capacity(basis.order());
    let k = basis.generators.len();
    let mut tuple = vec![0u64; k];
    'outer: loop {
        out.push(LinearCharacter {
            basis: basis.clone(),
            exponents: tuple.clone(),
        });
        // lexicographic increment from the rightmost position
        let mut i = k;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < basis.orders[i] {
                break;
            }
            tuple[i] = 0;
            if i == 0 {
                break 'outer;
            }
        }
    }
    debug_assert_eq!(out.len(), basis.order());
    out
}

/// All subgroups `K <= N` with cyclic quotient `N/K`: exactly the kernels of
/// the linear characters. Deduplicated and sorted by (order, member list).
pub fn cyclic_kernels(basis: &Arc<AbelianBasis>) -> Vec<Subgroup> {
    let mut seen: BTreeMap<Vec<u32>, Subgroup> = BTreeMap::new();
    for chi in linear_characters(basis) {
        let k = chi.kernel();
        seen.entry(k.members.clone()).or_insert(k);
    }
    let mut out: Vec<Subgroup> = seen.into_values().collect();
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    out
}

/// One admissible kernel together with its chosen character.
#[derive(Debug, Clone)]
pub struct KernelEntry {
    /// Kernel as a subgroup of the ambient group.
    pub subgroup: Subgroup,
    /// First linear character (in lexicographic exponent order) with this kernel.
    pub psi: LinearCharacter,
    /// Index of the conjugacy class of this kernel in `classes`.
    pub class_id: usize,
}

/// The family of kernels `K <= N` with `N/K` cyclic and `K` containing no
/// nontrivial normal subgroup of `G`, partitioned into `G`-conjugacy classes.
#[derive(Debug)]
pub struct AdmissibleKernels {
    pub kernels: Vec<KernelEntry>,
    /// Per class: indices into `kernels`; the first entry is the representative
    /// (least member list).
    pub classes: Vec<Vec<usize>>,
}

impl AdmissibleKernels {
    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }
}

/// Compute the admissible kernel family of an abelian normal subgroup `N`.
/// When a cyclic normal witness `A` (containing the derived subgroup) is
/// supplied, admissibility is the criterion `A meet K = Z(G) meet K = 1`;
/// otherwise every nontrivial normal subgroup of `G` is tested directly.
pub fn admissible_kernels(
    g: &GroupTable,
    basis: &Arc<AbelianBasis>,
    witness: Option<&Subgroup>,
) -> Result<AdmissibleKernels, GroupError> {
    let n_sub = basis.as_subgroup();
    if !is_normal(g, &n_sub) {
        return Err(GroupError::NotNormal);
    }
    let admissible: Vec<Subgroup> = match witness {
        Some(a) => {
            let z = crate::group::center(g);
            cyclic_kernels(basis)
                .into_iter()
                .filter(|k| {
                    intersection_trivial(&k.members, &a.members)
                        && intersection_trivial(&k.members, &z.members)
                })
                .collect()
        }
        None => {
            let normals = normal_subgroups(g);
            cyclic_kernels(basis)
                .into_iter()
                .filter(|k| {
                    normals
                        .iter()
                        .filter(|u| !u.is_trivial())
                        .all(|u| !u.is_subset_of(k))
                })
                .collect()
        }
    };
    // First lexicographic character with each admissible kernel.
    let mut psi_for: BTreeMap<Vec<u32>, LinearCharacter> = BTreeMap::new();
    for chi in linear_characters(basis) {
        let ker = chi.kernel();
        if admissible.iter().any(|k| k.members == ker.members) {
            psi_for.entry(ker.members).or_insert(chi);
        }
    }
    let mut kernels: Vec<KernelEntry> = admissible
        .into_iter()
        .map(|subgroup| {
            let psi = psi_for
                .get(&subgroup.members)
                .expect("every cyclic kernel is some character kernel")
                .clone();
            KernelEntry {
                subgroup,
                psi,
                class_id: usize::MAX,
            }
        })
        .collect();
    kernels.sort_by(|a, b| {
        (a.subgroup.order(), &a.subgroup.members).cmp(&(b.subgroup.order(), &b.subgroup.members))
    });
    // G-conjugacy classes of kernels, representative = least member list.
    let member_sets: Vec<Vec<u32>> = kernels.iter().map(|k| k.subgroup.members.clone()).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; kernels.len()];
    for i in 0..kernels.len() {
        if assigned[i] {
            continue;
        }
        let mut orbit = vec![i];
        assigned[i] = true;
        for x in g.elements() {
            let mut img: Vec<u32> = member_sets[i].iter().map(|&m| g.conj(m, x)).collect();
            img.sort_unstable();
            if let Some(j) = member_sets.iter().position(|m| *m == img) {
                if !assigned[j] {
                    assigned[j] = true;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    for (cid, class) in classes.iter().enumerate() {
        for &i in class {
            kernels[i].class_id = cid;
        }
    }
    Ok(AdmissibleKernels { kernels, classes })
}

fn intersection_trivial(a: &[u32], b: &[u32]) -> bool {
    // both sorted; identity 0 is always shared
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] != 0 {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    true
}

/// Check the size bound on the admissible family: every `K` has
/// `|K| = |N| / exp(N)` and there are at most that many kernels.
/// Returns `(bound, ok)`.
pub fn nucleos_check(
    g: &GroupTable,
    witness: &Subgroup,
    basis: &Arc<AbelianBasis>,
) -> Result<(u64, bool), GroupError> {
    let n_sub = basis.as_subgroup();
    if !witness.is_subset_of(&n_sub) {
        return Err(GroupError::Precondition(
            "witness must be contained in N".into(),
        ));
    }
    let derived = crate::group::derived_subgroup(g);
    if !derived.is_subset_of(witness) {
        return Err(GroupError::Precondition(
            "witness must contain the derived subgroup".into(),
        ));
    }
    let family = admissible_kernels(g, basis, Some(witness))?;
    let bound = basis.order() as u64 / basis.exponent();
    let ok = family
        .kernels
        .iter()
        .all(|k| k.subgroup.order() as u64 == bound)
        && family.kernels.len() as u64 <= bound;
    Ok((bound, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cyclotomic::{cyc_sum, rat, CycNumber};
    use crate::group::{cyclic_normal_witness, compute_d, full_subgroup};

    fn basis_of(g: &GroupTable) -> Arc<AbelianBasis> {
        AbelianBasis::new(g, &full_subgroup(g)).unwrap()
    }

    #[test]
    fn bases() {
        let c6 = catalog::cyclic(6);
        let b = basis_of(&c6);
        assert_eq!(b.orders, vec![6]);
        let c2c4 = catalog::abelian(&[2, 4]);
        let b = basis_of(&c2c4);
        assert_eq!(b.orders, vec![2, 4]);
        let c1 = catalog::cyclic(1);
        let b = basis_of(&c1);
        assert!(b.orders.is_empty());
        assert_eq!(b.exponent(), 1);
        let s3 = catalog::dihedral(3);
        assert!(AbelianBasis::new(&s3, &full_subgroup(&s3)).is_err());
    }

    #[test]
    fn characters_of_c3() {
        let c3 = catalog::cyclic(3);
        let b = basis_of(&c3);
        let chars = linear_characters(&b);
        assert_eq!(chars.len(), 3);
        let gen = b.generators[0];
        let values: Vec<CycNumber> = chars.iter().map(|c| c.eval_sub(gen)).collect();
        let expect: Vec<CycNumber> = (0..3)
            .map(|k| CycNumber::root_of_unity(3, k))
            .collect();
        for v in &values {
            assert!(expect.contains(v));
        }
        assert_eq!(values[0], CycNumber::one());
    }

    #[test]
    fn characters_of_klein_four() {
        let v4 = catalog::abelian(&[2, 2]);
        let b = basis_of(&v4);
        let chars = linear_characters(&b);
        assert_eq!(chars.len(), 4);
        for c in &chars {
            for x in b.table.elements() {
                let v = c.eval_sub(x);
                assert!(v == CycNumber::one() || v == CycNumber::from_int(-1));
            }
        }
    }

    #[test]
    fn character_orthogonality_on_c6() {
        let c6 = catalog::cyclic(6);
        let b = basis_of(&c6);
        let chars = linear_characters(&b);
        for (i, ci) in chars.iter().enumerate() {
            for (j, cj) in chars.iter().enumerate() {
                let vals: Vec<CycNumber> = b
                    .table
                    .elements()
                    .map(|x| ci.eval_sub(x).mul(&cj.eval_sub(x).conjugate()))
                    .collect();
                let total = cyc_sum(&vals);
                let expect = if i == j { rat(6) } else { rat(0) };
                assert_eq!(total, CycNumber::from_rat(expect));
            }
        }
    }

    #[test]
    fn kernels() {
        let c4 = catalog::cyclic(4);
        let b = basis_of(&c4);
        let chars = linear_characters(&b);
        assert_eq!(chars[0].kernel().order(), 4); // trivial character
        let faithful = chars.iter().find(|c| c.order() == 4).unwrap();
        assert_eq!(faithful.kernel().order(), 1);
        let c2c4 = catalog::abelian(&[2, 4]);
        let b24 = basis_of(&c2c4);
        // exponents (1, 0) kill the C4 factor and are faithful on the C2
        let chi = linear_characters(&b24)
            .into_iter()
            .find(|c| c.exponents == vec![1, 0])
            .unwrap();
        let ker = chi.kernel();
        assert_eq!(ker.order(), 4);
        assert!(ker.members.iter().all(|&m| {
            let idx = b24.member_index(m).unwrap();
            chi.eval_sub(idx) == CycNumber::one()
        }));
    }

    #[test]
    fn cyclic_kernel_families() {
        let c4 = catalog::cyclic(4);
        assert_eq!(cyclic_kernels(&basis_of(&c4)).len(), 3);
        let v4 = catalog::abelian(&[2, 2]);
        let kers = cyclic_kernels(&basis_of(&v4));
        // the trivial subgroup is excluded: V4 itself is not cyclic
        assert_eq!(kers.len(), 4);
        assert!(kers.iter().all(|k| k.order() >= 2));
        let c2c4 = catalog::abelian(&[2, 4]);
        assert_eq!(cyclic_kernels(&basis_of(&c2c4)).len(), 6);
    }

    #[test]
    fn admissible_families() {
        // S3 with N = D = C3: only the trivial kernel survives.
        let s3 = catalog::dihedral(3);
        let a = cyclic_normal_witness(&s3).unwrap();
        let d = compute_d(&s3, &a).unwrap();
        let b = AbelianBasis::new(&s3, &d).unwrap();
        let fam = admissible_kernels(&s3, &b, Some(&a)).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.kernels[0].subgroup.order(), 1);
        assert_eq!(fam.classes.len(), 1);

        // D8 with N = D = C4: same shape.
        let d8 = catalog::dihedral(4);
        let a8 = cyclic_normal_witness(&d8).unwrap();
        let dd = compute_d(&d8, &a8).unwrap();
        let b8 = AbelianBasis::new(&d8, &dd).unwrap();
        let fam8 = admissible_kernels(&d8, &b8, Some(&a8)).unwrap();
        assert_eq!(fam8.len(), 1);
        assert_eq!(fam8.kernels[0].subgroup.order(), 1);

        // S3 x C2 x C2: N meet Z(G) is Klein four, so the family is empty.
        let big = catalog::direct_product(
            &catalog::dihedral(3),
            &catalog::abelian(&[2, 2]),
        );
        let ab = cyclic_normal_witness(&big).unwrap();
        let db = compute_d(&big, &ab).unwrap();
        assert_eq!(db.order(), 12);
        let bb = AbelianBasis::new(&big, &db).unwrap();
        let famb = admissible_kernels(&big, &bb, Some(&ab)).unwrap();
        assert!(famb.is_empty());
    }

    #[test]
    fn witness_criterion_agrees_with_direct_normal_test() {
        for (name, g) in catalog::corpus() {
            let Some(a) = cyclic_normal_witness(&g) else {
                continue;
            };
            let d = compute_d(&g, &a).unwrap();
            let b = AbelianBasis::new(&g, &d).unwrap();
            let via_witness = admissible_kernels(&g, &b, Some(&a)).unwrap();
            let direct = admissible_kernels(&g, &b, None).unwrap();
            let k1: Vec<_> = via_witness
                .kernels
                .iter()
                .map(|k| k.subgroup.members.clone())
                .collect();
            let k2: Vec<_> = direct
                .kernels
                .iter()
                .map(|k| k.subgroup.members.clone())
                .collect();
            assert_eq!(k1, k2, "criterion mismatch for {name}");
        }
    }

    #[test]
    fn nucleos_bounds() {
        let s3 = catalog::dihedral(3);
        let a = cyclic_normal_witness(&s3).unwrap();
        let d = compute_d(&s3, &a).unwrap();
        let b = AbelianBasis::new(&s3, &d).unwrap();
        let (bound, ok) = nucleos_check(&s3, &a, &b).unwrap();
        assert_eq!(bound, 1);
        assert!(ok);

        let d8 = catalog::dihedral(4);
        let a8 = cyclic_normal_witness(&d8).unwrap();
        let d8d = compute_d(&d8, &a8).unwrap();
        let b8 = AbelianBasis::new(&d8, &d8d).unwrap();
        let (bound8, ok8) = nucleos_check(&d8, &a8, &b8).unwrap();
        assert_eq!(bound8, 1);
        assert!(ok8);

        // empty family: vacuously ok
        let big = catalog::direct_product(
            &catalog::dihedral(3),
            &catalog::abelian(&[2, 2]),
        );
        let ab = cyclic_normal_witness(&big).unwrap();
        let db = compute_d(&big, &ab).unwrap();
        let bb = AbelianBasis::new(&big, &db).unwrap();
        let (_, okb) = nucleos_check(&big, &ab, &bb).unwrap();
        assert!(okb);
    }

    #[test]
    fn kernel_count_identity() {
        // The number of characters containing a fixed n in their kernel equals
        // |N| divided by the order of n's image, i.e. |N| / |n|.
        for g in [catalog::cyclic(8), catalog::abelian(&[2, 4]), catalog::abelian(&[2, 2, 2])] {
            let b = basis_of(&g);
            let chars = linear_characters(&b);
            for n in b.table.elements() {
                let count = chars
                    .iter()
                    .filter(|c| c.root_exponent(n) == 0)
                    .count();
                assert_eq!(count as u32, g.order() as u32 / b.table.elt_order(n));
            }
        }
    }
}

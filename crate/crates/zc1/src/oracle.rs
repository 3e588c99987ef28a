//! Independent brute-force reference computations backing the derived test
//! values: direct induction, monomial representations with cycle-based
//! eigenvalue counting, the left-multiplication trace identity, exhaustive
//! subgroup enumeration, and the identity replay over trivial units.
//!
//! These paths deliberately use different algorithms from the main pipeline
//! so that agreement is evidence rather than tautology.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::abelian::{AbelianBasis, AdmissibleKernels};
use crate::character::FamilyEntry;
use crate::cyclotomic::{cyc_sum, divisors, phi, rat, ratio, CycNumber, Rat};
use crate::group::{
    centralizer, closure, normalizer, ConjugacyData, GroupTable, Subgroup,
};

/// Textbook induced-character value
/// `(1/|N|) * sum over x in G with x g x^-1 in N of psi(x g x^-1)`,
/// with `psi` given as a value table over the members of `N`.
pub fn induced_value_direct(
    g: &GroupTable,
    basis: &AbelianBasis,
    psi_values: &[CycNumber],
    elt: u32,
) -> CycNumber {
    let mut terms = Vec::new();
    for x in g.elements() {
        let c = g.conj(elt, g.inv(x));
        if let Some(idx) = basis.member_index(c) {
            terms.push(psi_values[idx as usize].clone());
        }
    }
    cyc_sum(&terms).scale(&Rat::new(1.into(), (basis.order() as i64).into()))
}

/// A monomial matrix: one nonzero root-of-unity entry per row and column.
/// Column `j` carries `entries[j]` in row `perm[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub entries: Vec<CycNumber>,
}

impl MonomialMatrix {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn identity(k: usize) -> MonomialMatrix {
        MonomialMatrix {
            perm: (0..k).collect(),
            entries: vec![CycNumber::one(); k],
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let k = self.dim();
        let mut perm = vec![0usize; k];
        let mut entries = Vec::with_capacity(k);
        for j in 0..k {
            let mid = other.perm[j];
            perm[j] = self.perm[mid];
            entries.push(self.entries[mid].mul(&other.entries[j]));
        }
        MonomialMatrix { perm, entries }
    }

    pub fn trace(&self) -> CycNumber {
        let diag: Vec<CycNumber> = (0..self.dim())
            .filter(|&j| self.perm[j] == j)
            .map(|j| self.entries[j].clone())
            .collect();
        cyc_sum(&diag)
    }
}

/// The monomial representation of `G` induced from a linear character of the
/// abelian normal subgroup `N`, with the least-index coset transversal.
pub struct MonomialRep<'a> {
    g: &'a GroupTable,
    basis: &'a AbelianBasis,
    psi_values: Vec<CycNumber>,
    /// Least-index coset representatives, ascending; index 0 is the identity.
    pub transversal: Vec<u32>,
    coset_of: Vec<usize>,
}

impl<'a> MonomialRep<'a> {
    pub fn new(
        g: &'a GroupTable,
        basis: &'a AbelianBasis,
        psi_values: Vec<CycNumber>,
    ) -> MonomialRep<'a> {
        assert_eq!(psi_values.len(), basis.order());
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut transversal = Vec::new();
        for x in g.elements() {
            if coset_of[x as usize] != usize::MAX {
                continue;
            }
            let idx = transversal.len();
            transversal.push(x);
            for &n in &basis.members {
                coset_of[g.mul(x, n) as usize] = idx;
            }
        }
        MonomialRep {
            g,
            basis,
            psi_values,
            transversal,
            coset_of,
        }
    }

    pub fn dim(&self) -> usize {
        self.transversal.len()
    }

    /// The monomial matrix of a group element.
    pub fn matrix(&self, elt: u32) -> MonomialMatrix {
        let k = self.dim();
        let mut perm = vec![0usize; k];
        let mut entries = Vec::with_capacity(k);
        for (j, &t) in self.transversal.iter().enumerate() {
            let moved = self.g.mul(elt, t);
            let i = self.coset_of[moved as usize];
            let n = self.g.mul(self.g.inv(self.transversal[i]), moved);
            let idx = self
                .basis
                .member_index(n)
                .expect("coset decomposition lands in N");
            perm[j] = i;
            entries.push(self.psi_values[idx as usize].clone());
        }
        MonomialMatrix { perm, entries }
    }
}

/// Multiplicity of `alpha` as an eigenvalue of a finite-order monomial matrix:
/// each permutation cycle of length `l` with entry product `beta` contributes
/// the `l`-th roots of `beta`, so it contains `alpha` exactly when
/// `alpha^l = beta`.
pub fn eigen_mults_cycles(m: &MonomialMatrix, alpha: &CycNumber) -> u64 {
    let k = m.dim();
    let mut seen = vec![false; k];
    let mut count = 0u64;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut beta = CycNumber::one();
        let mut len = 0u32;
        let mut j = start;
        loop {
            seen[j] = true;
            beta = beta.mul(&m.entries[j]);
            len += 1;
            j = m.perm[j];
            if j == start {
                break;
            }
        }
        if alpha.pow(len) == beta {
            count += 1;
        }
    }
    count
}

/// Sparse integer group-ring element.
pub type SparseElement = BTreeMap<u32, i64>;

/// Partial augmentation of a sparse element over the class of `x` in `G`.
pub fn partial_augmentation(conj: &ConjugacyData, r: &SparseElement, x: u32) -> i64 {
    let class = conj.class_of[x as usize];
    r.iter()
        .filter(|(&g, _)| conj.class_of[g as usize] == class)
        .map(|(_, &c)| c)
        .sum()
}

/// Check the trace identity for the left-multiplication representation over a
/// normal subgroup `N`: the `N`-partial augmentation of `tr(rho_N(r))` equals
/// `[C_G(x) : C_N(x)]` times the `G`-partial augmentation of `r` at `x in N`.
pub fn epsilon_traza_check(
    g: &GroupTable,
    n_sub: &Subgroup,
    r: &SparseElement,
    x: u32,
) -> bool {
    assert!(n_sub.contains(x));
    // least-index transversal of G/N
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut transversal = Vec::new();
    for e in g.elements() {
        if coset_of[e as usize] != usize::MAX {
            continue;
        }
        let idx = transversal.len();
        transversal.push(e);
        for &n in &n_sub.members {
            coset_of[g.mul(e, n) as usize] = idx;
        }
    }
    // trace of rho_N(r) as an element of ZN: diagonal blocks collect the
    // conjugates t_j^-1 r t_j that fall into N.
    let mut trace: BTreeMap<u32, i64> = BTreeMap::new();
    for &t in &transversal {
        for (&elt, &c) in r {
            let moved = g.mul(g.inv(t), g.mul(elt, t));
            if n_sub.contains(moved) && coset_of[g.mul(elt, t) as usize] == coset_of[t as usize] {
                *trace.entry(moved).or_insert(0) += c;
            }
        }
    }
    // N-class of x (conjugation by N only)
    let mut class_n: Vec<u32> = n_sub
        .members
        .iter()
        .map(|&h| g.conj(x, h))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    class_n.sort_unstable();
    let lhs: i64 = class_n.iter().map(|h| trace.get(h).copied().unwrap_or(0)).sum();

    let conj = crate::group::conjugacy_data(g);
    let cg = centralizer(g, &[x]).order() as i64;
    let cn = {
        let cent = centralizer(g, &[x]);
        cent.members.iter().filter(|m| n_sub.contains(**m)).count() as i64
    };
    let rhs = (cg / cn) * partial_augmentation(&conj, r, x);
    lhs == rhs
}

/// All subgroups of an abelian group (as its own table), by closing the set
/// `{trivial}` under joins with cyclic subgroups. Budgeted at order 64.
pub fn subgroup_enum(table: &GroupTable) -> Vec<Subgroup> {
    assert!(table.order() <= 64, "subgroup enumeration budget");
    assert!(table.is_abelian());
    let mut found: std::collections::BTreeSet<Vec<u32>> = Default::default();
    found.insert(vec![0]);
    let mut frontier = vec![vec![0u32]];
    while let Some(cur) = frontier.pop() {
        for x in table.elements() {
            let mut gens: Vec<u32> = cur.iter().copied().filter(|&e| e != 0).collect();
            gens.push(x);
            let joined = closure(table, &gens);
            if found.insert(joined.members.clone()) {
                frontier.push(joined.members);
            }
        }
    }
    found
        .into_iter()
        .map(|members| Subgroup {
            generators: members.iter().copied().filter(|&e| e != 0).collect(),
            members,
        })
        .collect()
}

/// Outcome of the replay of the two multiplicity identities on trivial units.
#[derive(Debug, Default)]
pub struct ReplayReport {
    pub triples_checked: usize,
    pub class_sums_checked: usize,
    pub mismatches: Vec<String>,
}

/// Replay the partial-augmentation multiplicity identities on every trivial
/// unit `u = g` that satisfies their hypotheses, for the family attached to
/// `N = D`. Mismatches are report content (and test failures upstream).
#[allow(clippy::too_many_arguments)]
pub fn identity_replay(
    g: &GroupTable,
    conj: &ConjugacyData,
    basis: &Arc<AbelianBasis>,
    kernels: &AdmissibleKernels,
    family: &[FamilyEntry],
    d_proj: &[u32],
    d_quotient: &GroupTable,
) -> ReplayReport {
    let mut report = ReplayReport::default();
    if family.is_empty() {
        return report;
    }
    // one monomial representation per kernel class, from the representative
    let reps_by_class: Vec<MonomialRep> = kernels
        .classes
        .iter()
        .map(|class| {
            let rep_entry = family
                .iter()
                .find(|e| e.kernel_idx == class[0])
                .expect("family covers every kernel");
            MonomialRep::new(g, basis, rep_entry.psi_values.clone())
        })
        .collect();
    let d_members = basis.members.clone();

    for &u in &conj.reps {
        let m = g.elt_order(u) as u64;
        if m == 1 {
            continue;
        }
        let f = d_quotient.elt_order(d_proj[u as usize]) as u64;
        if f == 1 {
            // the unit has trivial image modulo D: hypothesis fails, skip
            continue;
        }
        // mu(K, d) at a fixed x: eigenvalue multiplicity of psi_K(x^d) in rho_K(u^d)
        let mu = |entry: &FamilyEntry, d: u64, x: u32| -> u64 {
            let rep = &reps_by_class[entry.class_id];
            let mat = rep.matrix(g.pow(u, d as i64));
            let xv = entry.psi_on(basis, g.pow(x, d as i64));
            eigen_mults_cycles(&mat, xv)
        };
        for &x in &d_members {
            if g.pow(x, m as i64) != 0 {
                continue; // x^m = 1 required
            }
            // identity on weighted multiplicity sums, one check per h | f, h > 1
            for h in divisors(f).into_iter().filter(|&h| h > 1) {
                let lhs: Rat = family
                    .iter()
                    .map(|e| rat(e.field_degree() as i64) * rat(mu(e, 1, x) as i64))
                    .sum();
                let eps = if conj.class_of[x as usize] == conj.class_of[u as usize] {
                    1i64
                } else {
                    0
                };
                let cgx = conj.centralizer_order[conj.class_of[x as usize]] as i64;
                let mut rhs = ratio(phi(m as u32) as i64, m as i64) * rat(cgx) * rat(eps);
                let tail: Rat = family
                    .iter()
                    .map(|e| rat(e.field_degree() as i64) * rat(mu(e, h, x) as i64))
                    .sum();
                rhs += tail / rat(h as i64);
                report.triples_checked += 1;
                if lhs != rhs {
                    report.mismatches.push(format!(
                        "power-sum identity fails: |u|={m}, x={x}, h={h}: {lhs} != {rhs}"
                    ));
                }
            }
            // class-wise multiplicity counts at the power u^f ~ y = u^f
            let y = g.pow(u, f as i64);
            for (cid, class) in kernels.classes.iter().enumerate() {
                let lhs: u64 = family
                    .iter()
                    .filter(|e| e.class_id == cid)
                    .map(|e| mu(e, f, x))
                    .sum();
                let k_rep = &kernels.kernels[class[0]].subgroup;
                let y_class = &conj.classes[conj.class_of[y as usize]];
                let xf = g.pow(x, f as i64);
                let u_c = g
                    .elements()
                    .filter(|&t| {
                        // x^f in y^G * K^t for K conjugated by t
                        k_rep.members.iter().any(|&k| {
                            let kt = g.conj(k, t);
                            y_class.contains(&g.mul(xf, g.inv(kt)))
                        })
                    })
                    .count() as i64;
                let cgy = conj.centralizer_order[conj.class_of[y as usize]] as i64;
                let ngk = normalizer(g, k_rep).order() as i64;
                let rhs = ratio(cgy / basis.order() as i64, 1) * ratio(u_c, ngk);
                report.class_sums_checked += 1;
                if rat(lhs as i64) != rhs {
                    report.mismatches.push(format!(
                        "class multiplicity identity fails: |u|={m}, x={x}, class {cid}: {lhs} != {rhs}"
                    ));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{admissible_kernels, linear_characters};
    use crate::catalog;
    use crate::character::k_induced_family;
    use crate::group::{
        compute_d, conjugacy_data, cyclic_normal_witness, quotient,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s3_family() -> (
        GroupTable,
        ConjugacyData,
        Arc<AbelianBasis>,
        AdmissibleKernels,
        Vec<FamilyEntry>,
    ) {
        let g = catalog::dihedral(3);
        let conj = conjugacy_data(&g);
        let a = cyclic_normal_witness(&g).unwrap();
        let d = compute_d(&g, &a).unwrap();
        let basis = AbelianBasis::new(&g, &d).unwrap();
        let kernels = admissible_kernels(&g, &basis, Some(&a)).unwrap();
        let family = k_induced_family(&g, &conj, &basis, &kernels).unwrap();
        (g, conj, basis, kernels, family)
    }

    #[test]
    fn direct_induction_matches() {
        let (g, conj, basis, _, family) = s3_family();
        let chi = &family[0].chi;
        for (c, &rep) in conj.reps.iter().enumerate() {
            let direct = induced_value_direct(&g, &basis, &family[0].psi_values, rep);
            assert_eq!(direct, chi.values[c]);
        }
        // identity gives [G:N], elements off N give zero
        assert_eq!(
            induced_value_direct(&g, &basis, &family[0].psi_values, 0),
            CycNumber::from_int(2)
        );
        let off = g.elements().find(|&x| !basis.contains(x)).unwrap();
        assert_eq!(
            induced_value_direct(&g, &basis, &family[0].psi_values, off),
            CycNumber::zero()
        );
    }

    #[test]
    fn monomial_rep_is_homomorphism() {
        let (g, _, basis, _, family) = s3_family();
        let rep = MonomialRep::new(&g, &basis, family[0].psi_values.clone());
        assert_eq!(rep.dim(), 2);
        for a in g.elements() {
            for b in g.elements() {
                let lhs = rep.matrix(g.mul(a, b));
                let rhs = rep.matrix(a).mul(&rep.matrix(b));
                assert_eq!(lhs, rhs);
            }
        }
        // rho(identity) is the identity matrix
        assert_eq!(rep.matrix(0), MonomialMatrix::identity(2));
        // trace equals direct induction
        for x in g.elements() {
            assert_eq!(
                rep.matrix(x).trace(),
                induced_value_direct(&g, &basis, &family[0].psi_values, x)
            );
        }
        // elements of N act diagonally; a transposition is antidiagonal
        for &n in &basis.members {
            let m = rep.matrix(n);
            assert!(m.perm.iter().enumerate().all(|(j, &i)| i == j));
        }
        let t = g.elements().find(|&x| g.elt_order(x) == 2).unwrap();
        let mt = rep.matrix(t);
        assert_eq!(mt.perm, vec![1, 0]);
    }

    #[test]
    fn eigen_multiplicities() {
        let id3 = MonomialMatrix::identity(3);
        assert_eq!(eigen_mults_cycles(&id3, &CycNumber::one()), 3);
        let one_by_one = MonomialMatrix {
            perm: vec![0],
            entries: vec![CycNumber::root_of_unity(3, 1)],
        };
        assert_eq!(
            eigen_mults_cycles(&one_by_one, &CycNumber::root_of_unity(3, 1)),
            1
        );
        // 2x2 antidiagonal with unit entries has eigenvalues {1, -1}
        let swap = MonomialMatrix {
            perm: vec![1, 0],
            entries: vec![CycNumber::one(), CycNumber::one()],
        };
        assert_eq!(eigen_mults_cycles(&swap, &CycNumber::from_int(-1)), 1);
        assert_eq!(eigen_mults_cycles(&swap, &CycNumber::one()), 1);
        // eigenvalue multiplicities over all m-th roots sum to the dimension
        let (g, _, basis, _, family) = s3_family();
        let rep = MonomialRep::new(&g, &basis, family[0].psi_values.clone());
        for x in g.elements() {
            let m = rep.matrix(x);
            let order = 2 * g.elt_order(x); // any multiple of |x| works
            let total: u64 = (0..order as i64)
                .map(|k| eigen_mults_cycles(&m, &CycNumber::root_of_unity(order, k)))
                .sum();
            assert_eq!(total, rep.dim() as u64);
        }
    }

    #[test]
    fn trace_identity_examples() {
        let g = catalog::dihedral(3);
        let a = cyclic_normal_witness(&g).unwrap();
        let x = a.members[1]; // a 3-cycle
        // r = x itself
        let mut r = SparseElement::new();
        r.insert(x, 1);
        assert!(epsilon_traza_check(&g, &a, &r, x));
        // r supported outside every conjugate of x
        let t = g.elements().find(|&e| g.elt_order(e) == 2).unwrap();
        let mut r2 = SparseElement::new();
        r2.insert(t, 3);
        assert!(epsilon_traza_check(&g, &a, &r2, x));
    }

    #[test]
    fn trace_identity_random_sparse() {
        let g = catalog::dihedral(3);
        let a = cyclic_normal_witness(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let mut r = SparseElement::new();
            let support = rng.gen_range(1..=6usize);
            for _ in 0..support {
                let e = rng.gen_range(0..g.order()) as u32;
                let c = loop {
                    let c = rng.gen_range(-3i64..=3);
                    if c != 0 {
                        break c;
                    }
                };
                *r.entry(e).or_insert(0) += c;
            }
            for &x in &a.members {
                assert!(epsilon_traza_check(&g, &a, &r, x));
            }
        }
    }

    #[test]
    fn subgroup_enumeration_counts() {
        assert_eq!(subgroup_enum(&catalog::cyclic(4)).len(), 3);
        assert_eq!(subgroup_enum(&catalog::abelian(&[2, 2])).len(), 5);
        assert_eq!(subgroup_enum(&catalog::abelian(&[2, 4])).len(), 8);
    }

    #[test]
    fn cyclic_kernels_agree_with_enumeration() {
        for table in [
            catalog::cyclic(4),
            catalog::abelian(&[2, 2]),
            catalog::abelian(&[2, 4]),
            catalog::cyclic(12),
            catalog::abelian(&[2, 2, 2]),
        ] {
            let full = crate::group::full_subgroup(&table);
            let basis = AbelianBasis::new(&table, &full).unwrap();
            let via_chars = crate::abelian::cyclic_kernels(&basis);
            let mut brute: Vec<Vec<u32>> = subgroup_enum(&table)
                .into_iter()
                .filter(|k| {
                    let (q, _) = quotient(&table, k).unwrap();
                    crate::group::is_cyclic_subgroup(&q, &crate::group::full_subgroup(&q))
                })
                .map(|k| k.members)
                .collect();
            brute.sort_by(|a, b| (a.len(), &a[..]).cmp(&(b.len(), &b[..])));
            let via: Vec<Vec<u32>> = via_chars.into_iter().map(|k| k.members).collect();
            assert_eq!(via, brute);
        }
    }

    #[test]
    fn replay_on_s3() {
        let (g, conj, basis, kernels, family) = s3_family();
        let d_sub = basis.as_subgroup();
        let (dq, proj) = quotient(&g, &d_sub).unwrap();
        let report = identity_replay(&g, &conj, &basis, &kernels, &family, &proj, &dq);
        assert!(report.triples_checked > 0);
        assert!(report.class_sums_checked > 0);
        assert!(report.mismatches.is_empty(), "{:?}", report.mismatches);
    }

    #[test]
    fn replay_empty_family_is_vacuous() {
        let big = catalog::direct_product(&catalog::dihedral(3), &catalog::abelian(&[2, 2]));
        let conj = conjugacy_data(&big);
        let a = cyclic_normal_witness(&big).unwrap();
        let d = compute_d(&big, &a).unwrap();
        let basis = AbelianBasis::new(&big, &d).unwrap();
        let kernels = admissible_kernels(&big, &basis, Some(&a)).unwrap();
        let family = k_induced_family(&big, &conj, &basis, &kernels).unwrap();
        let d_sub = basis.as_subgroup();
        let (dq, proj) = quotient(&big, &d_sub).unwrap();
        let report = identity_replay(&big, &conj, &basis, &kernels, &family, &proj, &dq);
        assert_eq!(report.triples_checked, 0);
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn transported_characters_induce_the_shared_character() {
        // wherever a kernel class has several members, the transported psi must
        // induce the same character as the representative
        for (_, g) in catalog::corpus() {
            let Some(a) = cyclic_normal_witness(&g) else { continue };
            let d = compute_d(&g, &a).unwrap();
            let Ok(basis) = AbelianBasis::new(&g, &d) else { continue };
            let conj = conjugacy_data(&g);
            let kernels = admissible_kernels(&g, &basis, Some(&a)).unwrap();
            let family = k_induced_family(&g, &conj, &basis, &kernels).unwrap();
            for entry in &family {
                for (c, &rep) in conj.reps.iter().enumerate() {
                    let direct = induced_value_direct(&g, &basis, &entry.psi_values, rep);
                    assert_eq!(direct, entry.chi.values[c]);
                }
            }
        }
    }

    #[test]
    fn psi_linearity_on_basis_members() {
        let (g, _conj, basis, _kernels, family) = s3_family();
        let psi = &family[0].psi_values;
        for (i, &a) in basis.members.iter().enumerate() {
            for (j, &b) in basis.members.iter().enumerate() {
                let prod = g.mul(a, b);
                let k = basis.member_index(prod).unwrap() as usize;
                assert_eq!(psi[i].mul(&psi[j]), psi[k]);
            }
        }
        let _ = linear_characters(&basis);
    }
}

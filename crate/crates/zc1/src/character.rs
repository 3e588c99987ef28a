//! Class functions on a finite group: induction of linear characters from
//! abelian normal subgroups, evaluation on hypothetical units through partial
//! augmentations, and ingestion of externally computed character tables.

use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::abelian::{AbelianBasis, AdmissibleKernels, LinearCharacter};
use crate::cyclotomic::{phi, rat, CycNumber, Rat};
use crate::group::{is_normal, ConjugacyData, GroupTable, Subgroup};

#[derive(Debug, Error)]
pub enum CharError {
    #[error("subgroup is not abelian normal")]
    NotAbelianNormal,
    #[error("partial-augmentation vector has {got} entries, expected {expected}")]
    IndexMismatch { got: usize, expected: usize },
    #[error("recovered partial augmentation is not rational")]
    NonRational,
    #[error("character table rejected: {0}")]
    Ingest(String),
}

/// Where a class function came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharSource {
    /// Induced from a linear character of an abelian normal subgroup of the
    /// given order.
    Induced { n_order: usize },
    /// Pulled back from a linear character of the abelianization.
    Inflated { quotient_order: usize },
    Ingested,
    Trivial,
}

/// A class function: one value per conjugacy class.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    pub name: String,
    pub values: Vec<CycNumber>,
    pub source: CharSource,
}

impl ClassFunction {
    /// Value at the identity class.
    pub fn degree(&self) -> &CycNumber {
        &self.values[0]
    }

    pub fn trivial(class_count: usize) -> ClassFunction {
        ClassFunction {
            name: "1".into(),
            values: vec![CycNumber::one(); class_count],
            source: CharSource::Trivial,
        }
    }
}

/// Induce a linear character of an abelian normal subgroup up to the group:
/// `psi^G(g) = (1/|N|) * sum over x in G with x g x^-1 in N of psi(x g x^-1)`.
/// The result vanishes off `N` and has degree `[G:N]`.
pub fn induce_linear(
    g: &GroupTable,
    conj: &ConjugacyData,
    psi: &LinearCharacter,
) -> Result<ClassFunction, CharError> {
    let n_sub = psi.basis.as_subgroup();
    if !is_normal(g, &n_sub) || !psi.basis.table.is_abelian() {
        return Err(CharError::NotAbelianNormal);
    }
    let inv_n = Rat::new(1.into(), (n_sub.order() as i64).into());
    let mut values = Vec::with_capacity(conj.class_count());
    for &rep in &conj.reps {
        let mut terms: Vec<CycNumber> = Vec::new();
        for x in g.elements() {
            let c = g.conj(rep, g.inv(x));
            if let Some(idx) = psi.basis.member_index(c) {
                terms.push(psi.eval_sub(idx));
            }
        }
        let total = crate::cyclotomic::cyc_sum(&terms);
        values.push(total.scale(&inv_n));
    }
    Ok(ClassFunction {
        name: format!("ind[{}]", n_sub.order()),
        values,
        source: CharSource::Induced {
            n_order: n_sub.order(),
        },
    })
}

/// Value of a class function on a hypothetical unit with the given partial
/// augmentations: `sum over classes of pa[c] * chi(rep c)`.
pub fn unit_value(chi: &ClassFunction, pa: &[i64]) -> Result<CycNumber, CharError> {
    if pa.len() != chi.values.len() {
        return Err(CharError::IndexMismatch {
            got: pa.len(),
            expected: chi.values.len(),
        });
    }
    let mut acc = CycNumber::zero();
    for (v, &e) in chi.values.iter().zip(pa) {
        if e != 0 {
            acc = acc.add(&v.scale(&rat(e)));
        }
    }
    Ok(acc)
}

/// Two-route check of the induced-value formula
/// `psi^G(u) = sum over n in N of psi(n) [C_G(n):N] eps_n(u)`.
pub fn formula_caracteres_check(
    g: &GroupTable,
    conj: &ConjugacyData,
    psi: &LinearCharacter,
    pa: &[i64],
) -> Result<bool, CharError> {
    let induced = induce_linear(g, conj, psi)?;
    let lhs = unit_value(&induced, pa)?;
    let n_order = psi.basis.order();
    let mut terms: Vec<CycNumber> = Vec::new();
    for (sub_idx, &parent) in psi.basis.members.iter().enumerate() {
        let class = conj.class_of[parent as usize];
        let eps = pa[class];
        if eps == 0 {
            continue;
        }
        let weight = conj.centralizer_order[class] as i64 / n_order as i64;
        terms.push(psi.eval_sub(sub_idx as u32).scale(&rat(weight * eps)));
    }
    let rhs = crate::cyclotomic::cyc_sum(&terms);
    Ok(lhs == rhs)
}

/// Recover the partial augmentation at `x` in `N` from the values of all
/// induced characters: `eps_x(u) = (1/|C_G(x)|) sum_i conj(psi_i(x)) psi_i^G(u)`.
/// `values[i]` must correspond to the i-th character of `linear_characters`.
pub fn recover_pa(
    conj: &ConjugacyData,
    basis: &Arc<AbelianBasis>,
    values: &[CycNumber],
    x: u32,
) -> Result<Rat, CharError> {
    let chars = crate::abelian::linear_characters(basis);
    if values.len() != chars.len() {
        return Err(CharError::IndexMismatch {
            got: values.len(),
            expected: chars.len(),
        });
    }
    let sub_idx = basis.member_index(x).ok_or(CharError::NotAbelianNormal)?;
    let mut acc = CycNumber::zero();
    for (chi, v) in chars.iter().zip(values) {
        acc = acc.add(&chi.eval_sub(sub_idx).conjugate().mul(v));
    }
    let cent = conj.centralizer_order[conj.class_of[x as usize]] as i64;
    let total = acc.scale(&Rat::new(1.into(), cent.into()));
    total
        .as_rational()
        .cloned()
        .ok_or(CharError::NonRational)
}

/// JSON document for an externally computed character table.
#[derive(Debug, Deserialize)]
pub struct CharTableDoc {
    pub group: String,
    pub classes: Vec<ClassDoc>,
    pub irreducibles: Vec<Vec<CycExpr>>,
}

#[derive(Debug, Deserialize)]
pub struct ClassDoc {
    pub rep_order: u32,
    pub size: usize,
}

/// A cyclotomic value as `sum coeffs[i] * zeta_n^i` with rational coefficients
/// given as `[numerator, denominator]` pairs.
#[derive(Debug, Deserialize)]
pub struct CycExpr {
    pub n: u32,
    pub coeffs: Vec<[i64; 2]>,
}

impl CycExpr {
    pub fn to_cyc(&self) -> Result<CycNumber, CharError> {
        if self.n == 0 {
            return Err(CharError::Ingest("conductor must be positive".into()));
        }
        let mut acc = CycNumber::zero();
        for (i, [num, den]) in self.coeffs.iter().enumerate() {
            if *den == 0 {
                return Err(CharError::Ingest("zero denominator".into()));
            }
            if *num == 0 {
                continue;
            }
            let root = CycNumber::root_of_unity(self.n, i as i64);
            acc = acc.add(&root.scale(&Rat::new((*num).into(), (*den).into())));
        }
        Ok(acc)
    }
}

/// Validate and ingest a character table: class data must match the group's
/// conjugacy data, the first row must be the trivial character, and row
/// orthogonality is enforced exactly.
pub fn ingest_character_table(
    g: &GroupTable,
    conj: &ConjugacyData,
    doc: &CharTableDoc,
) -> Result<Vec<ClassFunction>, CharError> {
    let k = conj.class_count();
    if doc.classes.len() != k {
        return Err(CharError::Ingest(format!(
            "table has {} classes, group has {k}",
            doc.classes.len()
        )));
    }
    for (i, c) in doc.classes.iter().enumerate() {
        if c.rep_order != g.elt_order(conj.reps[i]) || c.size != conj.classes[i].len() {
            return Err(CharError::Ingest(format!(
                "class {i} mismatch: expected order {} size {}",
                g.elt_order(conj.reps[i]),
                conj.classes[i].len()
            )));
        }
    }
    if doc.irreducibles.len() != k {
        return Err(CharError::Ingest(format!(
            "expected {k} irreducible rows, got {}",
            doc.irreducibles.len()
        )));
    }
    let mut rows: Vec<ClassFunction> = Vec::with_capacity(k);
    for (i, row) in doc.irreducibles.iter().enumerate() {
        if row.len() != k {
            return Err(CharError::Ingest(format!("row {i} has wrong length")));
        }
        let values: Vec<CycNumber> = row
            .iter()
            .map(|e| e.to_cyc())
            .collect::<Result<_, _>>()?;
        let deg = values[0]
            .as_rational()
            .ok_or_else(|| CharError::Ingest(format!("row {i} has irrational degree")))?;
        if !deg.is_integer() || deg <= &rat(0) {
            return Err(CharError::Ingest(format!(
                "row {i} degree {deg} is not a positive integer"
            )));
        }
        rows.push(ClassFunction {
            name: format!("X.{}", i + 1),
            values,
            source: CharSource::Ingested,
        });
    }
    if rows[0].values.iter().any(|v| *v != CycNumber::one()) {
        return Err(CharError::Ingest("first row must be the trivial character".into()));
    }
    // Row orthogonality: sum over classes of |C| chi_i(C) conj(chi_j(C)) = |G| delta_ij.
    for i in 0..k {
        for j in i..k {
            let mut acc = CycNumber::zero();
            for c in 0..k {
                let term = rows[i].values[c]
                    .mul(&rows[j].values[c].conjugate())
                    .scale(&rat(conj.classes[c].len() as i64));
                acc = acc.add(&term);
            }
            let expect = if i == j { rat(g.order() as i64) } else { rat(0) };
            if acc != CycNumber::from_rat(expect) {
                return Err(CharError::Ingest(format!(
                    "rows {i} and {j} fail orthogonality"
                )));
            }
        }
    }
    Ok(rows)
}

/// The linear characters of `G`: every linear character of the abelianization
/// `G/G'` pulled back along the projection. Deduplicated by value vectors.
pub fn inflated_linear_characters(
    g: &GroupTable,
    conj: &ConjugacyData,
) -> Result<Vec<ClassFunction>, CharError> {
    let derived = crate::group::derived_subgroup(g);
    let (q, proj) =
        crate::group::quotient(g, &derived).map_err(|_| CharError::NotAbelianNormal)?;
    let basis = crate::abelian::AbelianBasis::new(&q, &crate::group::full_subgroup(&q))
        .map_err(|_| CharError::NotAbelianNormal)?;
    let mut out: Vec<ClassFunction> = Vec::new();
    for (i, psi) in crate::abelian::linear_characters(&basis).iter().enumerate() {
        let values: Vec<CycNumber> = conj
            .reps
            .iter()
            .map(|&rep| psi.eval(proj[rep as usize]))
            .collect();
        if out.iter().any(|c| c.values == values) {
            continue;
        }
        out.push(ClassFunction {
            name: format!("lin.{i}"),
            values,
            source: CharSource::Inflated {
                quotient_order: q.order(),
            },
        });
    }
    Ok(out)
}

/// One member of the induced family attached to an admissible kernel.
#[derive(Debug, Clone)]
pub struct FamilyEntry {
    /// Index into the kernel list of the originating [`AdmissibleKernels`].
    pub kernel_idx: usize,
    /// Conjugacy class of the kernel.
    pub class_id: usize,
    /// Whether this kernel is the class representative.
    pub is_rep: bool,
    /// Kernel subgroup in ambient indices.
    pub kernel: Subgroup,
    /// `psi_K` evaluated on every member of `N` (indexed like `basis.members`).
    /// For non-representative kernels this is the transported character
    /// `x -> psi_rep(t x t^-1)`, so that conjugate kernels share one induced
    /// representation.
    pub psi_values: Vec<CycNumber>,
    /// The same values as exponents: `psi(x) = zeta_q^e` with `q = [N:K]`.
    pub psi_exponents: Vec<u64>,
    /// The shared induced character of this kernel's class.
    pub chi: Arc<ClassFunction>,
    /// `[N : K]`, the conductor of the field the character values live in.
    pub quotient_order: u32,
}

impl FamilyEntry {
    /// `[Q_K : Q] = phi([N:K])`.
    pub fn field_degree(&self) -> u64 {
        phi(self.quotient_order) as u64
    }

    pub fn psi_on(&self, basis: &AbelianBasis, parent_elt: u32) -> &CycNumber {
        let idx = basis
            .member_index(parent_elt)
            .expect("element lies in N");
        &self.psi_values[idx as usize]
    }
}

/// Build the induced family for the admissible kernels of `N`: one induced
/// character per kernel class (shared across the class), with per-kernel
/// transported linear characters.
pub fn k_induced_family(
    g: &GroupTable,
    conj: &ConjugacyData,
    basis: &Arc<AbelianBasis>,
    kernels: &AdmissibleKernels,
) -> Result<Vec<FamilyEntry>, CharError> {
    let mut out = Vec::with_capacity(kernels.kernels.len());
    for (cid, class) in kernels.classes.iter().enumerate() {
        let rep_idx = class[0];
        let rep_entry = &kernels.kernels[rep_idx];
        let chi = Arc::new(ClassFunction {
            name: format!("K{cid}^G"),
            ..induce_linear(g, conj, &rep_entry.psi)?
        });
        for &ki in class {
            let entry = &kernels.kernels[ki];
            let quotient_order = (basis.order() / entry.subgroup.order()) as u32;
            let big = basis.exponent();
            let small = quotient_order as u64;
            // psi has order [N:K], so its zeta_exp(N)-exponents are multiples
            // of exp(N)/[N:K]
            let to_small = |t: u64| -> u64 {
                debug_assert_eq!(t % (big / small), 0);
                (t / (big / small)) % small
            };
            let exps_of = |sub_elt: u32, conj_by: Option<u32>| -> u64 {
                let idx = match conj_by {
                    None => sub_elt,
                    Some(t) => {
                        let moved = g.mul(
                            g.mul(t, basis.members[sub_elt as usize]),
                            g.inv(t),
                        );
                        basis
                            .member_index(moved)
                            .expect("N is normal, conjugation preserves it")
                    }
                };
                to_small(rep_entry.psi.root_exponent(idx))
            };
            let psi_values: Vec<CycNumber> = if ki == rep_idx {
                basis
                    .table
                    .elements()
                    .map(|s| rep_entry.psi.eval_sub(s))
                    .collect()
            } else {
                // least t with K = rep_kernel conjugated by t
                let t = g
                    .elements()
                    .find(|&t| {
                        let mut img: Vec<u32> = rep_entry
                            .subgroup
                            .members
                            .iter()
                            .map(|&m| g.conj(m, t))
                            .collect();
                        img.sort_unstable();
                        img == entry.subgroup.members
                    })
                    .expect("kernels in one class are conjugate");
                basis
                    .members
                    .iter()
                    .map(|&m| {
                        let moved = g.mul(g.mul(t, m), g.inv(t));
                        let idx = basis
                            .member_index(moved)
                            .expect("N is normal, conjugation preserves it");
                        rep_entry.psi.eval_sub(idx)
                    })
                    .collect()
            };
            let conj_by = if ki == rep_idx {
                None
            } else {
                Some(
                    g.elements()
                        .find(|&t| {
                            let mut img: Vec<u32> = rep_entry
                                .subgroup
                                .members
                                .iter()
                                .map(|&m| g.conj(m, t))
                                .collect();
                            img.sort_unstable();
                            img == entry.subgroup.members
                        })
                        .expect("kernels in one class are conjugate"),
                )
            };
            let psi_exponents: Vec<u64> = basis
                .table
                .elements()
                .map(|s| exps_of(s, conj_by))
                .collect();
            debug_assert!(psi_values
                .iter()
                .zip(&psi_exponents)
                .all(|(v, &e)| *v == CycNumber::root_of_unity(quotient_order, e as i64)));
            out.push(FamilyEntry {
                kernel_idx: ki,
                class_id: cid,
                is_rep: ki == rep_idx,
                kernel: entry.subgroup.clone(),
                psi_values,
                psi_exponents,
                chi: chi.clone(),
                quotient_order,
            });
        }
    }
    out.sort_by_key(|e| e.kernel_idx);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{admissible_kernels, linear_characters, AbelianBasis};
    use crate::catalog;
    use crate::cyclotomic::ratio;
    use crate::group::{compute_d, conjugacy_data, cyclic_normal_witness, full_subgroup};

    fn s3_setup() -> (GroupTable, ConjugacyData, Arc<AbelianBasis>) {
        let g = catalog::dihedral(3);
        let conj = conjugacy_data(&g);
        let a = cyclic_normal_witness(&g).unwrap();
        let basis = AbelianBasis::new(&g, &a).unwrap();
        (g, conj, basis)
    }

    #[test]
    fn induced_characters_of_s3() {
        let (g, conj, basis) = s3_setup();
        let chars = linear_characters(&basis);
        // classes are ordered 1a, 2a, 3a
        let nontrivial = chars.iter().find(|c| c.order() == 3).unwrap();
        let chi = induce_linear(&g, &conj, nontrivial).unwrap();
        assert_eq!(chi.values[0], CycNumber::from_int(2));
        assert_eq!(chi.values[1], CycNumber::zero());
        assert_eq!(chi.values[2], CycNumber::from_int(-1));
        let trivial = &chars[0];
        let chi0 = induce_linear(&g, &conj, trivial).unwrap();
        assert_eq!(chi0.values[0], CycNumber::from_int(2));
        assert_eq!(chi0.values[1], CycNumber::zero());
        assert_eq!(chi0.values[2], CycNumber::from_int(2));
    }

    #[test]
    fn induction_from_the_whole_group_is_identity() {
        let c6 = catalog::cyclic(6);
        let conj = conjugacy_data(&c6);
        let basis = AbelianBasis::new(&c6, &full_subgroup(&c6)).unwrap();
        for psi in linear_characters(&basis) {
            let chi = induce_linear(&c6, &conj, &psi).unwrap();
            for (c, rep) in conj.reps.iter().enumerate() {
                assert_eq!(chi.values[c], psi.eval(*rep));
            }
        }
    }

    #[test]
    fn unit_values() {
        let (g, conj, basis) = s3_setup();
        let psi = linear_characters(&basis)
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let chi = induce_linear(&g, &conj, &psi).unwrap();
        // delta at the 3-cycle class gives chi at that class
        assert_eq!(unit_value(&chi, &[0, 0, 1]).unwrap(), chi.values[2]);
        assert_eq!(unit_value(&chi, &[0, 0, 0]).unwrap(), CycNumber::zero());
        assert_eq!(
            unit_value(&chi, &[0, -1, 2]).unwrap(),
            CycNumber::from_int(-2)
        );
        assert!(unit_value(&chi, &[1, 0]).is_err());
    }

    #[test]
    fn formula_caracteres_two_routes() {
        let (g, conj, basis) = s3_setup();
        for psi in linear_characters(&basis) {
            // identity indicator: both sides [G:N]
            assert!(formula_caracteres_check(&g, &conj, &psi, &[1, 0, 0]).unwrap());
            // 3-cycle indicator
            assert!(formula_caracteres_check(&g, &conj, &psi, &[0, 0, 1]).unwrap());
            // supported off N: both sides zero
            assert!(formula_caracteres_check(&g, &conj, &psi, &[0, 1, 0]).unwrap());
            // a split vector
            assert!(formula_caracteres_check(&g, &conj, &psi, &[2, -1, 3]).unwrap());
        }
    }

    #[test]
    fn pa_recovery_is_orthogonality() {
        let (g, conj, basis) = s3_setup();
        let chars = linear_characters(&basis);
        // trivial unit u = x: values are the induced characters at x's class
        for &x in &basis.members {
            let class = conj.class_of[x as usize];
            let values: Vec<CycNumber> = chars
                .iter()
                .map(|psi| {
                    let chi = induce_linear(&g, &conj, psi).unwrap();
                    chi.values[class].clone()
                })
                .collect();
            for &y in &basis.members {
                let eps = recover_pa(&conj, &basis, &values, y).unwrap();
                let expect = if conj.class_of[y as usize] == class {
                    rat(1)
                } else {
                    rat(0)
                };
                assert_eq!(eps, expect);
            }
        }
        // zero values recover zero
        let zeros = vec![CycNumber::zero(); chars.len()];
        let inside = basis.members[1];
        assert_eq!(
            recover_pa(&conj, &basis, &zeros, inside).unwrap(),
            rat(0)
        );
    }

    #[test]
    fn family_for_s3_d8_and_empty_case() {
        let (g, conj, basis) = s3_setup();
        let a = cyclic_normal_witness(&g).unwrap();
        let kernels = admissible_kernels(&g, &basis, Some(&a)).unwrap();
        let fam = k_induced_family(&g, &conj, &basis, &kernels).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].chi.values[0], CycNumber::from_int(2));
        assert_eq!(fam[0].chi.values[2], CycNumber::from_int(-1));
        assert_eq!(fam[0].quotient_order, 3);

        let d8 = catalog::dihedral(4);
        let conj8 = conjugacy_data(&d8);
        let a8 = cyclic_normal_witness(&d8).unwrap();
        let dd = compute_d(&d8, &a8).unwrap();
        let b8 = AbelianBasis::new(&d8, &dd).unwrap();
        let k8 = admissible_kernels(&d8, &b8, Some(&a8)).unwrap();
        let fam8 = k_induced_family(&d8, &conj8, &b8, &k8).unwrap();
        assert_eq!(fam8.len(), 1);
        assert_eq!(fam8[0].chi.values[0], CycNumber::from_int(2));

        let big = catalog::direct_product(&catalog::dihedral(3), &catalog::abelian(&[2, 2]));
        let conj_b = conjugacy_data(&big);
        let ab = cyclic_normal_witness(&big).unwrap();
        let db = compute_d(&big, &ab).unwrap();
        let bb = AbelianBasis::new(&big, &db).unwrap();
        let kb = admissible_kernels(&big, &bb, Some(&ab)).unwrap();
        let famb = k_induced_family(&big, &conj_b, &bb, &kb).unwrap();
        assert!(famb.is_empty());
    }

    #[test]
    fn ingest_s3_table() {
        let g = catalog::dihedral(3);
        let conj = conjugacy_data(&g);
        let doc: CharTableDoc = serde_json::from_str(
            r#"{
              "group": "S3",
              "classes": [
                {"rep_order": 1, "size": 1},
                {"rep_order": 2, "size": 3},
                {"rep_order": 3, "size": 2}
              ],
              "irreducibles": [
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[1,1]]}],
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[-1,1]]},{"n":1,"coeffs":[[1,1]]}],
                [{"n":1,"coeffs":[[2,1]]},{"n":1,"coeffs":[[0,1]]},{"n":1,"coeffs":[[-1,1]]}]
              ]
            }"#,
        )
        .unwrap();
        let rows = ingest_character_table(&g, &conj, &doc).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].values[0], CycNumber::from_int(2));

        // column orthogonality holds for the ingested table
        for c1 in 0..3 {
            for c2 in 0..3 {
                let mut acc = CycNumber::zero();
                for row in &rows {
                    acc = acc.add(&row.values[c1].mul(&row.values[c2].conjugate()));
                }
                let expect = if c1 == c2 {
                    rat(conj.centralizer_order[c1] as i64)
                } else {
                    rat(0)
                };
                assert_eq!(acc, CycNumber::from_rat(expect));
            }
        }
    }

    #[test]
    fn ingest_rejects_bad_tables() {
        let g = catalog::dihedral(3);
        let conj = conjugacy_data(&g);
        // wrong degree row breaks orthogonality
        let doc: CharTableDoc = serde_json::from_str(
            r#"{
              "group": "S3",
              "classes": [
                {"rep_order": 1, "size": 1},
                {"rep_order": 2, "size": 3},
                {"rep_order": 3, "size": 2}
              ],
              "irreducibles": [
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[1,1]]}],
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[-1,1]]},{"n":1,"coeffs":[[1,1]]}],
                [{"n":1,"coeffs":[[3,1]]},{"n":1,"coeffs":[[0,1]]},{"n":1,"coeffs":[[-1,1]]}]
              ]
            }"#,
        )
        .unwrap();
        assert!(ingest_character_table(&g, &conj, &doc).is_err());
    }

    #[test]
    fn ingest_c2_table() {
        let g = catalog::cyclic(2);
        let conj = conjugacy_data(&g);
        let doc: CharTableDoc = serde_json::from_str(
            r#"{
              "group": "C2",
              "classes": [{"rep_order": 1, "size": 1}, {"rep_order": 2, "size": 1}],
              "irreducibles": [
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[1,1]]}],
                [{"n":1,"coeffs":[[1,1]]},{"n":1,"coeffs":[[-1,1]]}]
              ]
            }"#,
        )
        .unwrap();
        let rows = ingest_character_table(&g, &conj, &doc).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn induced_degree_is_index() {
        for (_, g) in catalog::corpus().into_iter().take(12) {
            let conj = conjugacy_data(&g);
            for n in crate::group::normal_subgroups(&g) {
                let Ok(basis) = AbelianBasis::new(&g, &n) else {
                    continue;
                };
                let psi = &linear_characters(&basis)[0];
                let chi = induce_linear(&g, &conj, psi).unwrap();
                assert_eq!(
                    chi.degree(),
                    &CycNumber::from_rat(ratio(g.order() as i64, n.order() as i64))
                );
            }
        }
    }
}

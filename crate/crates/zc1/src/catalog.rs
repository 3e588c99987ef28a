//! Constructors for the small groups used as fixtures: every group of order
//! at most 16, plus a few named groups that exercise specific code paths.

use crate::group::{GroupTable, LoadOptions};

fn table_from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> GroupTable {
    let rows: Vec<Vec<u32>> = (0..order)
        .map(|a| (0..order).map(|b| f(a, b) as u32).collect())
        .collect();
    GroupTable::from_table(&rows, &LoadOptions::default()).expect("catalog table is a group")
}

/// Cyclic group of order `n`.
pub fn cyclic(n: usize) -> GroupTable {
    table_from_fn(n, |a, b| (a + b) % n)
}

/// Direct product, indexed as `a * |B| + b`.
pub fn direct_product(a: &GroupTable, b: &GroupTable) -> GroupTable {
    let (na, nb) = (a.order(), b.order());
    table_from_fn(na * nb, |x, y| {
        let (xa, xb) = (x / nb, x % nb);
        let (ya, yb) = (y / nb, y % nb);
        a.mul(xa as u32, ya as u32) as usize * nb + b.mul(xb as u32, yb as u32) as usize
    })
}

/// Abelian group with the given cyclic factor orders.
pub fn abelian(factors: &[usize]) -> GroupTable {
    let mut g = cyclic(1);
    for &f in factors {
        g = direct_product(&g, &cyclic(f));
    }
    g
}

/// Dihedral group of order `2n`: elements `r^i s^e` indexed as `2i + e`.
pub fn dihedral(n: usize) -> GroupTable {
    table_from_fn(2 * n, |x, y| {
        let (i, e) = (x / 2, x % 2);
        let (j, f) = (y / 2, y % 2);
        // r^i s^e * r^j s^f = r^(i + (-1)^e j) s^(e+f)
        let k = if e == 0 { (i + j) % n } else { (i + n - j % n) % n };
        2 * k + (e + f) % 2
    })
}

/// Dicyclic group of order `4n` (`n = 2` gives the quaternion group):
/// `a^(2n) = 1`, `b^2 = a^n`, `b^-1 a b = a^-1`; element `a^i b^e` is `2i + e`.
pub fn dicyclic(n: usize) -> GroupTable {
    let m = 2 * n;
    table_from_fn(4 * n, |x, y| {
        let (i, e) = (x / 2, x % 2);
        let (j, f) = (y / 2, y % 2);
        if e == 0 {
            2 * ((i + j) % m) + f
        } else {
            let base = (i + m - j % m) % m;
            if f == 0 {
                2 * base + 1
            } else {
                2 * ((base + n) % m) + 0
            }
        }
    })
}

/// Semidihedral group of order 16: `s r s = r^3`.
pub fn semidihedral16() -> GroupTable {
    two_generator_16(3)
}

/// Modular group of order 16: `s r s = r^5`.
pub fn modular16() -> GroupTable {
    two_generator_16(5)
}

// <r, s : r^8 = s^2 = 1, s r s = r^t>, element r^i s^e indexed 2i + e.
fn two_generator_16(t: usize) -> GroupTable {
    table_from_fn(16, |x, y| {
        let (i, e) = (x / 2, x % 2);
        let (j, f) = (y / 2, y % 2);
        let tw = if e == 0 { j } else { (t * j) % 8 };
        2 * ((i + tw) % 8) + (e + f) % 2
    })
}

/// `C4 semidirect C4`: `b^-1 a b = a^-1`; element `a^i b^j` indexed `4i + j`.
pub fn c4_semi_c4() -> GroupTable {
    table_from_fn(16, |x, y| {
        let (i, j) = (x / 4, x % 4);
        let (k, l) = (y / 4, y % 4);
        let kk = if j % 2 == 0 { k } else { (4 - k) % 4 };
        4 * ((i + kk) % 4) + (j + l) % 4
    })
}

/// `(C2 x C2) semidirect C4`, the C4 swapping the two C2 coordinates;
/// element `(v, j)` indexed `4v + j` with `v` in `0..4` encoding `(x, y)`.
pub fn c22_semi_c4() -> GroupTable {
    let act = |v: usize, j: usize| -> usize {
        if j % 2 == 0 {
            v
        } else {
            // swap the two bits
            ((v & 1) << 1) | ((v >> 1) & 1)
        }
    };
    table_from_fn(16, |x, y| {
        let (v, j) = (x / 4, x % 4);
        let (w, l) = (y / 4, y % 4);
        4 * (v ^ act(w, j)) + (j + l) % 4
    })
}

/// Central product `D8 . C4` (Pauli group): `(D8 x C4) / <(r^2, c^2)>`.
pub fn central_product_d8_c4() -> GroupTable {
    use crate::group::{closure, quotient};
    let d8 = dihedral(4);
    let c4 = cyclic(4);
    let prod = direct_product(&d8, &c4);
    // r^2 in the dihedral indexing is element 4 (i=2, e=0); c^2 is element 2.
    let z = closure(&prod, &[(4 * c4.order() + 2) as u32]);
    let (q, _) = quotient(&prod, &z).expect("central subgroup is normal");
    q
}

/// Alternating group A4 from permutation generators.
pub fn alternating4() -> GroupTable {
    let gens = vec![vec![1usize, 2, 0, 3], vec![1usize, 0, 3, 2]]; // (1 2 3), (1 2)(3 4)
    GroupTable::from_permutations(4, &gens, &LoadOptions::default()).expect("A4 closure")
}

/// The nonabelian group of order 21: `C7 semidirect C3` with `b^-1 a b = a^2`;
/// element `a^i b^j` indexed `3i + j`.
pub fn c7_semi_c3() -> GroupTable {
    let pow2 = |j: usize| [1usize, 2, 4][j % 3]; // 2^j mod 7
    table_from_fn(21, |x, y| {
        let (i, j) = (x / 3, x % 3);
        let (k, l) = (y / 3, y % 3);
        3 * ((i + k * pow2(j)) % 7) + (j + l) % 3
    })
}

/// Every group of order at most 16 (up to isomorphism), with names.
pub fn groups_up_to_16() -> Vec<(String, GroupTable)> {
    let mut out: Vec<(String, GroupTable)> = Vec::new();
    let mut push = |name: &str, g: GroupTable| out.push((name.to_string(), g));
    for n in 1..=16usize {
        match n {
            4 => {
                push("C4", cyclic(4));
                push("C2xC2", abelian(&[2, 2]));
            }
            6 => {
                push("C6", cyclic(6));
                push("S3", dihedral(3));
            }
            8 => {
                push("C8", cyclic(8));
                push("C4xC2", abelian(&[4, 2]));
                push("C2xC2xC2", abelian(&[2, 2, 2]));
                push("D8", dihedral(4));
                push("Q8", dicyclic(2));
            }
            9 => {
                push("C9", cyclic(9));
                push("C3xC3", abelian(&[3, 3]));
            }
            10 => {
                push("C10", cyclic(10));
                push("D10", dihedral(5));
            }
            12 => {
                push("C12", cyclic(12));
                push("C6xC2", abelian(&[6, 2]));
                push("D12", dihedral(6));
                push("A4", alternating4());
                push("Dic12", dicyclic(3));
            }
            14 => {
                push("C14", cyclic(14));
                push("D14", dihedral(7));
            }
            15 => push("C15", cyclic(15)),
            16 => {
                push("C16", cyclic(16));
                push("C8xC2", abelian(&[8, 2]));
                push("C4xC4", abelian(&[4, 4]));
                push("C4xC2xC2", abelian(&[4, 2, 2]));
                push("C2^4", abelian(&[2, 2, 2, 2]));
                push("D16", dihedral(8));
                push("SD16", semidihedral16());
                push("Q16", dicyclic(4));
                push("M16", modular16());
                push("D8xC2", direct_product(&dihedral(4), &cyclic(2)));
                push("Q8xC2", direct_product(&dicyclic(2), &cyclic(2)));
                push("D8.C4", central_product_d8_c4());
                push("C4:C4", c4_semi_c4());
                push("C22:C4", c22_semi_c4());
            }
            _ => push(&format!("C{n}"), cyclic(n)),
        }
    }
    out
}

/// The full test corpus: all groups of order <= 16 plus `C7:C3`.
pub fn corpus() -> Vec<(String, GroupTable)> {
    let mut out = groups_up_to_16();
    out.push(("C7:C3".to_string(), c7_semi_c3()));
    out
}

//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! A [`CycNumber`] is stored on the power basis `{zeta_n^i : 0 <= i < phi(n)}`
//! after reduction modulo the n-th cyclotomic polynomial, and is always kept
//! at its minimal possible conductor. Conductor 1 means the value is rational.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num/den` as a [`Rat`]; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("galois exponent {j} is not coprime to conductor {n}")]
    GaloisNotCoprime { j: i64, n: u32 },
    #[error("value with conductor {c} does not lie in Q(zeta_{field})")]
    NotInField { c: u32, field: u32 },
}

/// Euler totient.
pub fn phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Ascending list of the distinct prime factors of `n`.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Ascending list of all divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
static PHI_POLY: Lazy<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    if let Some(p) = PHI_POLY.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d of n.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in divisors(n as u64) {
        let d = d as u32;
        if d == n {
            continue;
        }
        let div = cyclotomic_poly(d);
        poly = int_poly_div_exact(&poly, &div);
    }
    let arc = Arc::new(poly);
    PHI_POLY.lock().unwrap().insert(n, arc.clone());
    arc
}

// Exact division of integer polynomials with monic divisor.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for i in 0..=dd {
                let t = &den[i] * &c;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact poly division");
    quot
}

struct CycCache {
    deg: usize,
    // red[k - deg] = coefficients of x^k mod Phi_n, for deg <= k <= max_exp.
    red: Vec<Vec<BigInt>>,
}

static CACHES: Lazy<Mutex<HashMap<u32, Arc<CycCache>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn cache_for(n: u32) -> Arc<CycCache> {
    if let Some(c) = CACHES.lock().unwrap().get(&n) {
        return c.clone();
    }
    let poly = cyclotomic_poly(n);
    let deg = poly.len() - 1;
    let max_exp = std::cmp::max(2 * deg.saturating_sub(1), n as usize);
    let mut red: Vec<Vec<BigInt>> = Vec::new();
    if deg > 0 {
        // x^deg = -(c_0 + c_1 x + ... + c_{deg-1} x^{deg-1})
        let base: Vec<BigInt> = poly[..deg].iter().map(|c| -c).collect();
        red.push(base);
        for k in deg + 1..=max_exp {
            let prev = &red[k - deg - 1];
            let mut shifted = vec![BigInt::zero(); deg];
            let top = prev[deg - 1].clone();
            for i in 1..deg {
                shifted[i] = prev[i - 1].clone();
            }
            if !top.is_zero() {
                for i in 0..deg {
                    let t = &red[0][i] * &top;
                    shifted[i] += t;
                }
            }
            red.push(shifted);
        }
    }
    let arc = Arc::new(CycCache { deg, red });
    CACHES.lock().unwrap().insert(n, arc.clone());
    arc
}

// Solver for expressing a conductor-n value in conductor n/p, cached per (n, p).
struct DescentSolver {
    // transform * input gives the coordinates; rows [rank..] must vanish.
    transform: Vec<Vec<Rat>>,
    pivot_rows: Vec<usize>,
    rank: usize,
    dim_from: usize,
}

static DESCENTS: Lazy<Mutex<HashMap<(u32, u32), Arc<DescentSolver>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn descent_solver(n: u32, n_sub: u32) -> Arc<DescentSolver> {
    if let Some(s) = DESCENTS.lock().unwrap().get(&(n, n_sub)) {
        return s.clone();
    }
    let deg_n = phi(n) as usize;
    let deg_s = phi(n_sub) as usize;
    let step = (n / n_sub) as usize;
    // Column t is the conductor-n representation of zeta_{n_sub}^t = zeta_n^{step*t}.
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(deg_s);
    for t in 0..deg_s {
        cols.push(reduce_exponent(n, step * t));
    }
    // Gauss-Jordan on [M | I] to find T with T*M in reduced row echelon form.
    let mut m: Vec<Vec<Rat>> = (0..deg_n)
        .map(|r| (0..deg_s).map(|c| cols[c][r].clone()).collect())
        .collect();
    let mut t: Vec<Vec<Rat>> = (0..deg_n)
        .map(|r| {
            (0..deg_n)
                .map(|c| if r == c { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut row = 0usize;
    for col in 0..deg_s {
        let Some(p) = (row..deg_n).find(|&r| !m[r][col].is_zero()) else {
            panic!("descent matrix is not full column rank");
        };
        m.swap(row, p);
        t.swap(row, p);
        let inv = m[row][col].clone();
        for c in 0..deg_s {
            m[row][c] = &m[row][c] / &inv;
        }
        for c in 0..deg_n {
            t[row][c] = &t[row][c] / &inv;
        }
        for r in 0..deg_n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..deg_s {
                    let v = &m[row][c] * &f;
                    m[r][c] = &m[r][c] - &v;
                }
                for c in 0..deg_n {
                    let v = &t[row][c] * &f;
                    t[r][c] = &t[r][c] - &v;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    let solver = Arc::new(DescentSolver {
        transform: t,
        pivot_rows,
        rank: row,
        dim_from: deg_n,
    });
    DESCENTS.lock().unwrap().insert((n, n_sub), solver.clone());
    solver
}

impl DescentSolver {
    fn solve(&self, coeffs: &[Rat]) -> Option<Vec<Rat>> {
        let apply = |row: &[Rat]| -> Rat {
            let mut acc = Rat::zero();
            for (c, x) in row.iter().zip(coeffs) {
                if !c.is_zero() && !x.is_zero() {
                    acc += c * x;
                }
            }
            acc
        };
        for r in self.rank..self.dim_from {
            if !apply(&self.transform[r]).is_zero() {
                return None;
            }
        }
        Some(
            self.pivot_rows
                .iter()
                .map(|&r| apply(&self.transform[r]))
                .collect(),
        )
    }
}

// Conductor-n power basis coordinates of zeta_n^k (k already >= 0).
fn reduce_exponent(n: u32, k: usize) -> Vec<Rat> {
    let cache = cache_for(n);
    let deg = cache.deg;
    let mut out = vec![Rat::zero(); deg.max(1)];
    if deg == 0 {
        // n == 1: the field is Q and zeta = 1.
        out = vec![Rat::one()];
        return out;
    }
    if k < deg {
        out[k] = Rat::one();
    } else {
        for (i, c) in cache.red[k - deg].iter().enumerate() {
            out[i] = Rat::from_integer(c.clone());
        }
    }
    out
}

// Reduce a dense polynomial in zeta_n (any length <= cached max) to the power basis.
fn reduce_poly(n: u32, poly: &[Rat]) -> Vec<Rat> {
    let cache = cache_for(n);
    let deg = cache.deg;
    if deg == 0 {
        // Everything is rational; zeta_1 = 1 so all coefficients collapse.
        let mut acc = Rat::zero();
        for c in poly {
            acc += c;
        }
        return vec![acc];
    }
    let mut out = vec![Rat::zero(); deg];
    for (k, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k < deg {
            out[k] += c;
        } else {
            for (i, r) in cache.red[k - deg].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * Rat::from_integer(r.clone());
                }
            }
        }
    }
    out
}

/// An exact cyclotomic number: `sum coeffs[i] * zeta_n^i` with minimal conductor `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycNumber {
    conductor: u32,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if i == 1 {
                write!(f, "{c}*z{}", self.conductor)?;
            } else {
                write!(f, "{c}*z{}^{i}", self.conductor)?;
            }
        }
        Ok(())
    }
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber {
            conductor: 1,
            coeffs: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        CycNumber {
            conductor: 1,
            coeffs: vec![Rat::one()],
        }
    }

    pub fn from_rat(q: Rat) -> Self {
        CycNumber {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    /// Canonical `zeta_n^k` (negative `k` allowed).
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let coeffs = reduce_exponent(n, e);
        CycNumber {
            conductor: n,
            coeffs,
        }
        .canonicalized()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients at the canonical conductor.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.conductor == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn canonicalized(mut self) -> Self {
        loop {
            if self.conductor == 1 {
                return self;
            }
            if self.coeffs[1..].iter().all(|c| c.is_zero()) {
                return CycNumber {
                    conductor: 1,
                    coeffs: vec![self.coeffs[0].clone()],
                };
            }
            let mut descended = false;
            for p in prime_factors(self.conductor as u64) {
                let sub = self.conductor / p as u32;
                let solver = descent_solver(self.conductor, sub);
                if let Some(new_coeffs) = solver.solve(&self.coeffs) {
                    self = CycNumber {
                        conductor: sub,
                        coeffs: new_coeffs,
                    };
                    descended = true;
                    break;
                }
            }
            if !descended {
                return self;
            }
        }
    }

    // Coefficients of self viewed in conductor m (self.conductor must divide m).
    fn lift_coeffs(&self, m: u32) -> Vec<Rat> {
        debug_assert_eq!(m % self.conductor, 0);
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rat::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] += c;
            }
        }
        reduce_poly(m, &poly)
    }

    pub fn add(&self, other: &CycNumber) -> CycNumber {
        let m = lcm_u32(self.conductor, other.conductor);
        let mut a = self.lift_coeffs(m);
        let b = other.lift_coeffs(m);
        for (x, y) in a.iter_mut().zip(&b) {
            *x += y;
        }
        CycNumber {
            conductor: m,
            coeffs: a,
        }
        .canonicalized()
    }

    pub fn sub(&self, other: &CycNumber) -> CycNumber {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNumber {
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycNumber) -> CycNumber {
        if self.is_zero() || other.is_zero() {
            return CycNumber::zero();
        }
        let m = lcm_u32(self.conductor, other.conductor);
        let a = self.lift_coeffs(m);
        let b = other.lift_coeffs(m);
        let mut prod = vec![Rat::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coeffs = reduce_poly(m, &prod);
        CycNumber {
            conductor: m,
            coeffs,
        }
        .canonicalized()
    }

    pub fn scale(&self, q: &Rat) -> CycNumber {
        if q.is_zero() {
            return CycNumber::zero();
        }
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Small non-negative integer power.
    pub fn pow(&self, k: u32) -> CycNumber {
        let mut acc = CycNumber::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Image under `zeta_n -> zeta_n^j`; `j` must be coprime to the conductor.
    pub fn galois(&self, j: i64) -> Result<CycNumber, CycError> {
        let n = self.conductor;
        if n == 1 {
            return Ok(self.clone());
        }
        let jm = j.rem_euclid(n as i64) as u64;
        if (jm as u64).gcd(&(n as u64)) != 1 {
            return Err(CycError::GaloisNotCoprime { j, n });
        }
        let mut poly = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (i as u64 * jm) % n as u64;
                poly[e as usize] += c;
            }
        }
        let coeffs = reduce_poly(n, &poly);
        // A Galois image cannot descend to a smaller conductor.
        Ok(CycNumber {
            conductor: n,
            coeffs,
        })
    }

    /// Complex conjugation (`galois(-1)`).
    pub fn conjugate(&self) -> CycNumber {
        self.galois(-1).expect("-1 is always coprime to the conductor")
    }

    /// Absolute trace to `Q` from `Q(zeta_c)` where `c` is the canonical conductor:
    /// the sum of all Galois images. The result is always rational.
    pub fn trace_to_q(&self) -> Rat {
        let n = self.conductor;
        if n == 1 {
            return self.coeffs[0].clone();
        }
        let mut acc = vec![Rat::zero(); self.coeffs.len()];
        for j in 1..=n as i64 {
            if (j as u64).gcd(&(n as u64)) != 1 {
                continue;
            }
            let img = self.galois(j).unwrap();
            for (x, y) in acc.iter_mut().zip(img.coeffs.iter()) {
                *x += y;
            }
        }
        debug_assert!(
            acc[1..].iter().all(|c| c.is_zero()),
            "absolute trace must be rational"
        );
        acc.swap_remove(0)
    }

    /// Relative trace to `Q` from `Q(zeta_field)`: `[Q(zeta_field) : Q(zeta_c)] * trace_to_q`.
    /// The canonical conductor must divide `field`.
    pub fn rel_trace_to_q(&self, field: u32) -> Result<Rat, CycError> {
        if field % self.conductor != 0 {
            return Err(CycError::NotInField {
                c: self.conductor,
                field,
            });
        }
        let factor = rat(phi(field) as i64) / rat(phi(self.conductor) as i64);
        Ok(self.trace_to_q() * factor)
    }

    /// Coefficients over the exponent basis `{zeta_m^i : 0 <= i < m}` (with the
    /// power-basis representation padded by zeros); requires the canonical
    /// conductor to divide `m`. Linear-algebra helper for fast traces.
    pub fn exponent_lift(&self, m: u32) -> Result<Vec<Rat>, CycError> {
        if m % self.conductor != 0 {
            return Err(CycError::NotInField {
                c: self.conductor,
                field: m,
            });
        }
        let mut out = vec![Rat::zero(); m as usize];
        let step = (m / self.conductor) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[i * step] = c.clone();
            }
        }
        Ok(out)
    }

    /// Float embedding with `zeta_n -> exp(2*pi*i/n)`, as `(re, im)`. Test oracle only.
    pub fn embed(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().expect("rational fits in f64");
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / n;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64 * b as u64 / (a as u64).gcd(&(b as u64))) as u32
}

/// Moebius function.
pub fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

static RAMANUJAN: Lazy<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The table `t -> tr from Q(zeta_m) to Q of zeta_m^t`, i.e. the Ramanujan
/// sums `c_m(t) = sum over d | gcd(t, m) of moebius(m/d) * d`.
pub fn ramanujan_sums(m: u32) -> Arc<Vec<i64>> {
    if let Some(t) = RAMANUJAN.lock().unwrap().get(&m) {
        return t.clone();
    }
    let table: Vec<i64> = (0..m as u64)
        .map(|t| {
            divisors(num_integer::gcd(t, m as u64))
                .into_iter()
                .map(|d| moebius(m as u64 / d) * d as i64)
                .sum()
        })
        .collect();
    let arc = Arc::new(table);
    RAMANUJAN.lock().unwrap().insert(m, arc.clone());
    arc
}

/// `tr from Q(zeta_m) to Q of (x * zeta_m^shift)`, computed from an exponent
/// lift of `x` through the Ramanujan-sum table.
pub fn trace_times_root(lift: &[Rat], csums: &[i64], shift: i64) -> Rat {
    let m = lift.len() as i64;
    let mut acc = Rat::zero();
    for (i, b) in lift.iter().enumerate() {
        if !b.is_zero() {
            let idx = (i as i64 + shift).rem_euclid(m) as usize;
            acc += b * rat(csums[idx]);
        }
    }
    acc
}

/// Sum of a slice of cyclotomic numbers.
pub fn cyc_sum<'a>(values: impl IntoIterator<Item = &'a CycNumber>) -> CycNumber {
    let mut acc = CycNumber::zero();
    for v in values {
        acc = acc.add(v);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(n, k)
    }

    #[test]
    fn roots_of_unity_canonical_forms() {
        assert_eq!(z(1, 0), CycNumber::one());
        // zeta_4^2 = -1 descends to conductor 1.
        let m1 = z(4, 2);
        assert_eq!(m1.conductor(), 1);
        assert_eq!(m1.as_rational().unwrap(), &rat(-1));
        // Q(zeta_6) = Q(zeta_3): zeta_6 = 1 + zeta_3.
        let z6 = z(6, 1);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6, z(3, 1).add(&CycNumber::one()));
        let (re, im) = z6.embed();
        assert!((re - 0.5).abs() < 1e-9);
        assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn arithmetic_identities() {
        // zeta_3 + zeta_3^2 = -1
        assert_eq!(z(3, 1).add(&z(3, 2)), CycNumber::from_int(-1));
        // zeta_5 * zeta_5^4 = 1
        assert_eq!(z(5, 1).mul(&z(5, 4)), CycNumber::one());
        // (1 + zeta_8)(1 - zeta_8) = 1 - zeta_4
        let lhs = CycNumber::one().add(&z(8, 1)).mul(&CycNumber::one().sub(&z(8, 1)));
        let rhs = CycNumber::one().sub(&z(4, 1));
        assert_eq!(lhs, rhs);
        let (lre, lim) = lhs.embed();
        let (rre, rim) = rhs.embed();
        assert!((lre - rre).abs() < 1e-9 && (lim - rim).abs() < 1e-9);
    }

    #[test]
    fn galois_action() {
        let q = CycNumber::from_rat(ratio(7, 3));
        assert_eq!(q.galois(5).unwrap(), q);
        assert_eq!(z(5, 1).galois(2).unwrap(), z(5, 2));
        let x = CycNumber::one().add(&z(7, 1)).add(&z(7, 3));
        let y = CycNumber::one().add(&z(7, 3)).add(&z(7, 2));
        assert_eq!(x.galois(3).unwrap(), y);
        assert_eq!(z(8, 1).galois(2), Err(CycError::GaloisNotCoprime { j: 2, n: 8 }));
    }

    #[test]
    fn galois_composition_and_conjugation() {
        let x = z(12, 1).add(&z(12, 5).scale(&ratio(2, 3)));
        assert_eq!(x.conjugate().conjugate(), x);
        let a = x.galois(5).unwrap().galois(7).unwrap();
        let b = x.galois(35).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn traces() {
        assert_eq!(CycNumber::from_rat(ratio(3, 4)).trace_to_q(), ratio(3, 4));
        assert_eq!(z(3, 1).trace_to_q(), rat(-1));
        assert_eq!(z(4, 1).trace_to_q(), rat(0));
        // sqrt(2) = zeta_8 + zeta_8^7 has trace 0 from its own field, and the
        // relative trace from Q(zeta_8) doubles the absolute one for rationals.
        let sqrt2 = z(8, 1).add(&z(8, 7));
        assert_eq!(sqrt2.trace_to_q(), rat(0));
        assert_eq!(CycNumber::one().rel_trace_to_q(8).unwrap(), rat(4));
        assert_eq!(
            z(3, 1).rel_trace_to_q(4),
            Err(CycError::NotInField { c: 3, field: 4 })
        );
    }

    #[test]
    fn ramanujan_trace_table_matches_galois_sum() {
        for m in [6u32, 8, 12] {
            let csums = ramanujan_sums(m);
            for k in 0..m as i64 {
                let direct = z(m, k).rel_trace_to_q(m).unwrap();
                assert_eq!(rat(csums[k as usize % m as usize]), direct);
            }
            let x = z(m, 1).scale(&ratio(2, 3)).add(&CycNumber::from_int(1));
            let lift = x.exponent_lift(m).unwrap();
            for s in -3i64..=3 {
                let shifted = x.mul(&z(m, s));
                assert_eq!(
                    trace_times_root(&lift, &csums, s),
                    shifted.rel_trace_to_q(m).unwrap()
                );
            }
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let x = z(12, 1).add(&z(12, 7)).add(&z(4, 1));
        let again = x.clone().canonicalized();
        assert_eq!(x, again);
    }

    #[test]
    fn relative_trace_two_routes() {
        // rel_trace_to_q must agree with the direct sum of sigma_j over (Z/F)*.
        for (val, field) in [
            (z(3, 1), 12u32),
            (z(4, 1).add(&z(4, 3).scale(&ratio(1, 2))), 24),
            (z(8, 1).add(&z(8, 7)), 24),
            (CycNumber::from_rat(ratio(5, 2)), 8),
        ] {
            let mut acc = CycNumber::zero();
            for j in 1..=field as i64 {
                if (j as u64).gcd(&(field as u64)) != 1 {
                    continue;
                }
                let jj = j.rem_euclid(val.conductor() as i64);
                acc = acc.add(&val.galois(jj).unwrap());
            }
            let direct = acc.as_rational().expect("trace is rational").clone();
            assert_eq!(val.rel_trace_to_q(field).unwrap(), direct);
        }
    }
}

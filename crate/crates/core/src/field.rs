//! Exact arithmetic in GF(p^m) for odd prime p, with full discrete-log tables.
//!
//! Fields are built over a polynomial basis modulo the least monic irreducible
//! of the requested degree, with the least primitive element as generator, so
//! every run of the tool produces identical elements and identical reports.
//! Quadratic extensions GF(q^2) record their subfield size q, which unlocks
//! Frobenius conjugation x -> x^q, the norm x -> x^{q+1} and subfield tests.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest table a field is allowed to materialize (number of elements).
pub const DEFAULT_TABLE_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not an odd prime power")]
    NotOddPrimePower(u64),
    #[error("field order {order} exceeds the table cap {cap}")]
    TableCapExceeded { order: u128, cap: u64 },
    #[error("no irreducible polynomial of degree {m} over GF({p}) was found")]
    NoIrreducibleFound { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field is not a recorded quadratic extension")]
    NotAQuadraticExtension,
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("element is not in the subfield GF(q)")]
    NotInSubfield,
}

/// One element of a [`FieldSpec`]. The index is the canonical base-p encoding
/// of the coefficient vector, so derived equality is exact element equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    field: u32,
    idx: u32,
}

impl FieldElem {
    pub fn index(&self) -> u64 {
        self.idx as u64
    }

    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A fully materialized finite field GF(p^m).
pub struct FieldSpec {
    p: u64,
    m: u32,
    order: u64,
    id: u32,
    /// Monic irreducible modulus, coefficients low-to-high, length m+1.
    modulus: Vec<u64>,
    /// log[idx] = e with g^e = element idx, for idx in 1..order.
    log_tab: Vec<u32>,
    /// antilog[e] = element index of g^e, for e in 0..order-1.
    antilog_tab: Vec<u32>,
    /// zech[e] = log(1 + g^e); undefined (sentinel) at e = (order-1)/2
    /// where 1 + g^e = 0. Makes addition a pure table operation.
    zech_tab: Vec<u32>,
    /// log of -1, i.e. (order-1)/2 for odd characteristic.
    half: u64,
    /// q = p^{m/2} when m is even; the fixed field of x -> x^q.
    subfield_order: Option<u64>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(GF({}^{}) = GF({}))", self.p, self.m, self.order)
    }
}

impl FieldSpec {
    /// Builds GF(p^m) with the least irreducible modulus and least primitive
    /// element. `p` must be an odd prime and p^m must fit under `cap`.
    pub fn with_cap(p: u64, m: u32, cap: u64) -> Result<Arc<FieldSpec>, FieldError> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        if m == 0 {
            return Err(FieldError::NotOddPrimePower(1));
        }
        let order128 = (p as u128).pow(m);
        if order128 > cap as u128 {
            return Err(FieldError::TableCapExceeded { order: order128, cap });
        }
        let order = order128 as u64;

        let modulus = least_irreducible(p, m).ok_or(FieldError::NoIrreducibleFound { p, m })?;

        // p fits in 27 bits under any sane cap, m in 5; equal parameters give
        // equal ids so two builds of the same field interoperate.
        let id = ((p as u32) << 5) | m;

        let mut spec = FieldSpec {
            p,
            m,
            order,
            id,
            modulus,
            log_tab: Vec::new(),
            antilog_tab: Vec::new(),
            zech_tab: Vec::new(),
            half: (order - 1) / 2,
            subfield_order: if m % 2 == 0 {
                Some((p as u64).pow(m / 2))
            } else {
                None
            },
        };
        spec.build_tables()?;
        Ok(Arc::new(spec))
    }

    pub fn new(p: u64, m: u32) -> Result<Arc<FieldSpec>, FieldError> {
        Self::with_cap(p, m, DEFAULT_TABLE_CAP)
    }

    /// Builds GF(q^2) for an odd prime power q = p^a, recording q as the
    /// subfield split.
    pub fn for_q_squared(q: u64) -> Result<Arc<FieldSpec>, FieldError> {
        let (p, a) = prime_power(q).ok_or(FieldError::NotOddPrimePower(q))?;
        if p == 2 {
            return Err(FieldError::NotOddPrimePower(q));
        }
        Self::new(p, 2 * a)
    }

    fn build_tables(&mut self) -> Result<(), FieldError> {
        let group = self.order - 1;
        let prime_factors = distinct_prime_factors(group);

        // Least primitive element in index order. Constants below p can only
        // generate GF(p)*, but the scan is cheap enough not to special-case.
        let mut gen_poly = None;
        for idx in 2..self.order {
            let cand = self.decode(idx);
            if prime_factors
                .iter()
                .all(|&f| !poly_is_one(&self.poly_pow(&cand, group / f)))
            {
                gen_poly = Some(cand);
                break;
            }
        }
        let g = gen_poly.ok_or(FieldError::NoIrreducibleFound {
            p: self.p,
            m: self.m,
        })?;

        let mut antilog = vec![0u32; group as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = vec![1u64];
        for e in 0..group {
            let idx = self.encode(&acc);
            antilog[e as usize] = idx as u32;
            log[idx as usize] = e as u32;
            acc = self.poly_mul_mod(&acc, &g);
        }
        debug_assert!(poly_is_one(&acc), "generator order must be exactly p^m - 1");
        self.antilog_tab = antilog;
        self.log_tab = log;

        // Zech logarithms: zech[e] = log(1 + g^e). The lone undefined slot is
        // e = (order-1)/2 where g^e = -1; a sentinel guards it.
        let mut zech = vec![u32::MAX; group as usize];
        for e in 0..group {
            let mut coeffs = self.decode(self.antilog_tab[e as usize] as u64);
            coeffs[0] = (coeffs[0] + 1) % self.p;
            let idx = self.encode(&coeffs);
            if idx != 0 {
                zech[e as usize] = self.log_tab[idx as usize];
            } else {
                debug_assert_eq!(e, self.half);
            }
        }
        self.zech_tab = zech;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// q such that this field is GF(q^2), when the split is recorded.
    pub fn subfield_order(&self) -> Option<u64> {
        self.subfield_order
    }

    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: self.id, idx: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { field: self.id, idx: 1 }
    }

    /// The designated primitive element g.
    pub fn generator(&self) -> FieldElem {
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[1],
        }
    }

    pub fn owns(&self, x: FieldElem) -> bool {
        x.field == self.id
    }

    fn check_owned(&self, x: FieldElem) {
        assert!(
            self.owns(x),
            "element of field id {} used with {:?}",
            x.field,
            self
        );
    }

    pub fn elem_from_index(&self, idx: u64) -> FieldElem {
        assert!(idx < self.order);
        FieldElem {
            field: self.id,
            idx: idx as u32,
        }
    }

    /// Embeds an integer via the prime field: n mod p times the identity.
    pub fn elem_from_int(&self, n: i64) -> FieldElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        self.elem_from_index(r)
    }

    pub fn elem_from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.m as usize);
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            assert!(c < self.p);
            idx = idx * self.p + c;
        }
        self.elem_from_index(idx)
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        self.check_owned(x);
        self.decode(x.idx as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |i| self.elem_from_index(i))
    }

    /// Discrete log of a nonzero element with respect to g.
    pub fn log(&self, x: FieldElem) -> Option<u64> {
        self.check_owned(x);
        if x.is_zero() {
            None
        } else {
            Some(self.log_tab[x.idx as usize] as u64)
        }
    }

    /// g^e with the exponent reduced modulo order-1.
    pub fn antilog(&self, e: i64) -> FieldElem {
        let group = (self.order - 1) as i64;
        let e = e.rem_euclid(group) as usize;
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[e],
        }
    }

    /// x + y via Zech logarithms: x(1 + y/x) needs only table lookups.
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check_owned(x);
        self.check_owned(y);
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let group = self.order - 1;
        let lx = self.log_tab[x.idx as usize] as u64;
        let ly = self.log_tab[y.idx as usize] as u64;
        let diff = (ly + group - lx) % group;
        if diff == self.half {
            return self.zero();
        }
        let e = (lx + self.zech_tab[diff as usize] as u64) % group;
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[e as usize],
        }
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        self.check_owned(x);
        if x.is_zero() {
            return x;
        }
        let group = self.order - 1;
        let e = (self.log_tab[x.idx as usize] as u64 + self.half) % group;
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[e as usize],
        }
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check_owned(x);
        self.check_owned(y);
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        let group = self.order - 1;
        let e = (self.log_tab[x.idx as usize] as u64 + self.log_tab[y.idx as usize] as u64) % group;
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[e as usize],
        }
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.check_owned(x);
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let group = self.order - 1;
        let e = (group - self.log_tab[x.idx as usize] as u64) % group;
        Ok(FieldElem {
            field: self.id,
            idx: self.antilog_tab[e as usize],
        })
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e for e >= 0, with the convention 0^0 = 1.
    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        self.check_owned(x);
        if e == 0 {
            return self.one();
        }
        if x.is_zero() {
            return self.zero();
        }
        let group = self.order - 1;
        let le = (self.log_tab[x.idx as usize] as u128 * e as u128 % group as u128) as u64;
        FieldElem {
            field: self.id,
            idx: self.antilog_tab[le as usize],
        }
    }

    /// x^e for any integer e; negative exponents go through the inverse.
    pub fn pow_signed(&self, x: FieldElem, e: i64) -> Result<FieldElem, FieldError> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            let inv = self.inv(x)?;
            Ok(self.pow(inv, e.unsigned_abs()))
        }
    }

    /// Checked entry point: rejects mixed-field operands and division by zero.
    pub fn arithmetic(
        &self,
        op: ArithOp,
        x: FieldElem,
        y: FieldElem,
    ) -> Result<FieldElem, FieldError> {
        if !self.owns(x) || !self.owns(y) {
            return Err(FieldError::FieldMismatch);
        }
        match op {
            ArithOp::Add => Ok(self.add(x, y)),
            ArithOp::Sub => Ok(self.sub(x, y)),
            ArithOp::Mul => Ok(self.mul(x, y)),
            ArithOp::Div => self.div(x, y),
        }
    }

    fn require_quadratic(&self) -> Result<u64, FieldError> {
        self.subfield_order.ok_or(FieldError::NotAQuadraticExtension)
    }

    /// Frobenius conjugation x -> x^q over the recorded subfield GF(q).
    pub fn frobenius(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        let q = self.require_quadratic()?;
        Ok(self.pow(x, q))
    }

    /// Norm map x -> x^{q+1}; lands in GF(q).
    pub fn norm(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        let q = self.require_quadratic()?;
        Ok(self.pow(x, q + 1))
    }

    /// True iff x^q = x, i.e. x lies in the subfield GF(q).
    pub fn is_in_subfield(&self, x: FieldElem) -> Result<bool, FieldError> {
        Ok(self.frobenius(x)? == x)
    }

    /// Some v with v^{q+1} = u for nonzero u in GF(q); deterministically the
    /// preimage of least discrete log among the q+1 candidates.
    pub fn norm_preimage(&self, u: FieldElem) -> Result<FieldElem, FieldError> {
        let q = self.require_quadratic()?;
        self.check_owned(u);
        if u.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        if !self.is_in_subfield(u)? {
            return Err(FieldError::NotInSubfield);
        }
        let group = self.order - 1;
        let lu = self.log_tab[u.idx as usize] as u64;
        // log u is a multiple of q+1 exactly when u is in GF(q)*.
        debug_assert_eq!(lu % (q + 1), 0);
        let base = lu / (q + 1);
        let least = (0..=q).map(|j| (base + j * (q - 1)) % group).min().unwrap();
        debug_assert_eq!((least * (q + 1)) % group, lu);
        Ok(self.antilog(least as i64))
    }

    /// The j-th element of GF(q)* in discrete-log order: g^{(q+1) j}.
    pub fn subfield_star(&self, j: u64) -> Result<FieldElem, FieldError> {
        let q = self.require_quadratic()?;
        Ok(self.antilog(((q + 1) * (j % (q - 1))) as i64))
    }

    /// Renders an element as a polynomial in x over GF(p).
    pub fn elem_to_string(&self, x: FieldElem) -> String {
        self.check_owned(x);
        if x.is_zero() {
            return "0".to_string();
        }
        let coeffs = self.decode(x.idx as u64);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    fn decode(&self, mut idx: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.m as usize];
        let mut i = 0;
        while idx > 0 {
            out[i] = idx % self.p;
            idx /= self.p;
            i += 1;
        }
        out
    }

    fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    fn poly_mul_mod(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        poly_mul_mod(self.p, a, b, &self.modulus)
    }

    fn poly_pow(&self, base: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut acc = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_mul_mod(&result, &acc);
            }
            acc = self.poly_mul_mod(&acc, &acc);
            e >>= 1;
        }
        result
    }
}

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// (p, a) with n = p^a, if n is a prime power > 1.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = n;
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut a = 0;
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    if rest == 1 {
        Some((p, a))
    } else {
        None
    }
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime factorization with multiplicities, smallest factor first.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p), used only while constructing a field
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_is_one(a: &[u64]) -> bool {
    a.first() == Some(&1) && a.iter().skip(1).all(|&c| c == 0)
}

fn poly_deg(a: &[u64]) -> usize {
    a.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let md = poly_deg(m);
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while !poly_is_zero(&r) && poly_deg(&r) >= md {
        let rd = poly_deg(&r);
        let coef = r[rd];
        let shift = rd - md;
        for i in 0..=md {
            let t = (coef * m[i]) % p;
            r[shift + i] = (r[shift + i] + p * p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    poly_rem(p, &poly_mul(p, a, b), m)
}

/// Divisibility test against a monic divisor.
fn poly_divisible(p: u64, a: &[u64], d: &[u64]) -> bool {
    poly_is_zero(&poly_rem(p, a, d))
}

/// Trial-division irreducibility for the small degrees in scope: a monic f of
/// degree m is irreducible iff no monic polynomial of degree 1..=m/2 divides it.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = poly_deg(f);
    if m == 1 {
        return true;
    }
    for d in 1..=m / 2 {
        let count = (p as u128).pow(d as u32);
        for enc in 0..count {
            let mut div = vec![0u64; d + 1];
            let mut e = enc;
            for c in div.iter_mut().take(d) {
                *c = (e % p as u128) as u64;
                e /= p as u128;
            }
            div[d] = 1;
            if poly_divisible(p, f, &div) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree m over GF(p) whose low-coefficient base-p
/// encoding is least.
fn least_irreducible(p: u64, m: u32) -> Option<Vec<u64>> {
    let m = m as usize;
    let count = (p as u128).pow(m as u32);
    for enc in 0..count {
        let mut f = vec![0u64; m + 1];
        let mut e = enc;
        for c in f.iter_mut().take(m) {
            *c = (e % p as u128) as u64;
            e /= p as u128;
        }
        f[m] = 1;
        if is_irreducible(p, &f) {
            return Some(f);
        }
    }
    None
}

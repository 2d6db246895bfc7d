//! Arithmetic in the finite field F_q, q = p^k.
//!
//! Elements are stored as dense indices: the polynomial `a_0 + a_1 x + ... +
//! a_{k-1} x^{k-1}` over F_p is encoded as `a_0 + a_1 p + ... + a_{k-1} p^{k-1}`.
//! The reduction polynomial is the lexicographically smallest monic
//! irreducible of degree k, comparing the constant term first, so a given
//! `(p, k)` always yields the same encoding.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_Q_LIMIT: u32 = 512;

/// Full addition and multiplication tables are built up to this order.
pub const TABLE_LIMIT: u32 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Scalar(u16);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

/// The field F_q together with its reduction polynomial.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::with_limit(p, k, DEFAULT_Q_LIMIT)
    }

    pub fn with_limit(p: u32, k: u32, limit: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadExponent(k));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= limit && q <= u16::MAX as u32)
            .ok_or(Error::FieldTooLarge { p, k, limit })?;
        let modulus = smallest_irreducible(p, k);
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            neg: Vec::new(),
            inv: Vec::new(),
            tables: None,
        };
        field.neg = (0..q).map(|a| field.slow_neg(a) as u16).collect();
        if q <= TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u16; qs * qs];
            let mut mul = vec![0u16; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    let at = (a * q + b) as usize;
                    add[at] = field.slow_add(a, b) as u16;
                    mul[at] = field.slow_mul(a, b) as u16;
                }
            }
            field.tables = Some(Tables { add, mul });
        }
        let mut inv = vec![0u16; q as usize];
        for a in 1..q {
            if inv[a as usize] != 0 {
                continue;
            }
            let b = field.pow(Scalar(a as u16), (q - 2) as u64);
            inv[a as usize] = b.0;
            inv[b.index()] = a as u16;
        }
        field.inv = inv;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the reduction polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Scalar with the given index. Panics if `value >= q`.
    pub fn scalar(&self, value: u32) -> Scalar {
        assert!(value < self.q, "scalar {value} out of range for F_{}", self.q);
        Scalar(value as u16)
    }

    /// The image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn all_scalars(&self) -> impl Iterator<Item = Scalar> + Clone {
        (0..self.q).map(|v| Scalar(v as u16))
    }

    pub fn nonzero_scalars(&self) -> impl Iterator<Item = Scalar> + Clone {
        (1..self.q).map(|v| Scalar(v as u16))
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match &self.tables {
            Some(t) => Scalar(t.add[a.index() * self.q as usize + b.index()]),
            None => Scalar(self.slow_add(a.value(), b.value()) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match &self.tables {
            Some(t) => Scalar(t.mul[a.index() * self.q as usize + b.index()]),
            None => Scalar(self.slow_mul(a.value(), b.value()) as u16),
        }
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(Scalar(self.inv[a.index()]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, mut n: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Scalar) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut x = a;
        let mut n = 1;
        while x != Scalar::ONE {
            x = self.mul(x, a);
            n += 1;
        }
        Ok(n)
    }

    pub fn is_primitive(&self, a: Scalar) -> bool {
        self.order(a).map(|n| n == self.q - 1).unwrap_or(false)
    }

    /// The smallest-index primitive element.
    pub fn primitive_element(&self) -> Scalar {
        self.nonzero_scalars()
            .find(|&a| self.is_primitive(a))
            .expect("F_q^* is cyclic")
    }

    /// The unique subgroup of F_q^* of order `d`.
    pub fn unit_subgroup(&self, d: u32) -> Result<DetSubgroup> {
        let order = self.q - 1;
        if d == 0 || !order.is_multiple_of(d) {
            return Err(Error::BadSubgroupOrder { d, order });
        }
        let gen = self.pow(self.primitive_element(), (order / d) as u64);
        let mut elements = Vec::with_capacity(d as usize);
        let mut x = Scalar::ONE;
        for _ in 0..d {
            elements.push(x);
            x = self.mul(x, gen);
        }
        elements.sort_unstable();
        let mut member = vec![false; self.q as usize];
        for e in &elements {
            member[e.index()] = true;
        }
        Ok(DetSubgroup { elements, member })
    }

    /// Aligned addition and multiplication tables.
    pub fn format_tables(&self) -> String {
        let width = (self.q - 1).to_string().len();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "F_{} (p = {}, k = {}, modulus = {})",
            self.q,
            self.p,
            self.k,
            format_poly(&self.modulus)
        );
        for (name, op) in [("+", 0u8), ("*", 1u8)] {
            let _ = writeln!(out);
            let _ = write!(out, "{name:>width$} |");
            for b in self.all_scalars() {
                let _ = write!(out, " {:>width$}", b.value());
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "{}", "-".repeat((width + 1) * (self.q as usize + 1) + 1));
            for a in self.all_scalars() {
                let _ = write!(out, "{:>width$} |", a.value());
                for b in self.all_scalars() {
                    let c = if op == 0 { self.add(a, b) } else { self.mul(a, b) };
                    let _ = write!(out, " {:>width$}", c.value());
                }
                let _ = writeln!(out);
            }
        }
        out
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let at = top - k + j;
                prod[at] = (prod[at] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.encode(&low)
    }
}

/// The subgroup det(G) of F_q^*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetSubgroup {
    elements: Vec<Scalar>,
    member: Vec<bool>,
}

impl DetSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Members in ascending index order.
    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, a: Scalar) -> bool {
        self.member.get(a.index()).copied().unwrap_or(false)
    }
}

pub fn format_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

// Polynomials over F_p as coefficient vectors, constant term first, no
// trailing zeros except for the zero polynomial itself.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = monic.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &m) in monic.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - c) * m) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn monic_of_degree(p: u32, deg: usize, idx: u32) -> Vec<u32> {
    // idx enumerates coefficients with the constant term most significant
    let mut coeffs = vec![0u32; deg + 1];
    let mut rest = idx;
    for c in coeffs[..deg].iter_mut().rev() {
        *c = rest % p;
        rest /= p;
    }
    coeffs[deg] = 1;
    coeffs
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for deg in 1..=k / 2 {
        for idx in 0..p.pow(deg as u32) {
            let g = monic_of_degree(p, deg, idx);
            if poly_rem(f, &g, p) == [0] {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let deg = k as usize;
    (0..p.pow(k))
        .map(|idx| monic_of_degree(p, deg, idx))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

//! Exact arithmetic in the cyclotomic field Q(q), q a primitive n-th root of unity.
//!
//! Elements are stored in the power basis {1, q, ..., q^(phi(n)-1)} with
//! rational coordinates, always reduced modulo the n-th cyclotomic polynomial.
//! Equality is coefficient equality; there is no floating-point representation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result as usize
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first, monic.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact polynomial division.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

struct CycloTable {
    phi: usize,
    /// powers[e] = coordinates of q^e in the power basis, for e in 0..2*phi-1.
    powers: Vec<Vec<BigRational>>,
}

impl CycloTable {
    fn new(order: u32) -> CycloTable {
        let phi = euler_phi(order);
        let min_poly = cyclotomic_poly(order);
        assert_eq!(min_poly.len(), phi + 1);
        // q^phi = -(c_0 + c_1 q + ... + c_{phi-1} q^{phi-1}) and upward by repeated shift.
        let mut powers: Vec<Vec<BigRational>> = Vec::new();
        for e in 0..phi {
            let mut v = vec![BigRational::zero(); phi];
            v[e] = BigRational::one();
            powers.push(v);
        }
        for _ in phi..(2 * phi).max(phi + 1) {
            let prev = powers.last().unwrap().clone();
            // multiply by q: shift up, reduce the overflow with the minimal polynomial
            let mut v = vec![BigRational::zero(); phi];
            for i in 1..phi {
                v[i] = prev[i - 1].clone();
            }
            let top = prev[phi - 1].clone();
            if !top.is_zero() {
                for i in 0..phi {
                    v[i] -= &top * BigRational::from_integer(min_poly[i].clone());
                }
            }
            powers.push(v);
        }
        CycloTable { phi, powers }
    }
}

fn table(order: u32) -> Arc<CycloTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().unwrap();
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(CycloTable::new(order)))
        .clone()
}

/// An element of Q(q) with q a primitive `order`-th root of unity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(order: u32) -> Scalar {
        Scalar {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order)],
        }
    }

    pub fn one(order: u32) -> Scalar {
        Scalar::from_integer(order, 1)
    }

    pub fn from_integer(order: u32, value: i64) -> Scalar {
        let mut s = Scalar::zero(order);
        s.coeffs[0] = BigRational::from_integer(BigInt::from(value));
        s
    }

    pub fn from_ratio(order: u32, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        let mut s = Scalar::zero(order);
        s.coeffs[0] = BigRational::new(BigInt::from(num), BigInt::from(den));
        s
    }

    pub fn from_rational(order: u32, value: BigRational) -> Scalar {
        let mut s = Scalar::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Scalar {
        assert_eq!(coeffs.len(), euler_phi(order), "coefficient vector length");
        Scalar { order, coeffs }
    }

    /// The root of unity q itself.
    pub fn root_of_unity(order: u32) -> Scalar {
        Scalar::root_power(order, 1)
    }

    /// q^e, reduced to the power basis.
    pub fn root_power(order: u32, e: u32) -> Scalar {
        let t = table(order);
        let e = (e % order) as usize;
        let coeffs = if e < t.powers.len() {
            t.powers[e].clone()
        } else {
            // order < phi cannot happen; e < order always indexes the table for order > 1
            unreachable!("exponent out of table range")
        };
        Scalar { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational part if the element lies in Q, otherwise None.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_order(&self, other: &Scalar) {
        assert_eq!(
            self.order, other.order,
            "scalar order mismatch: {} vs {}",
            self.order, other.order
        );
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        self.check_order(other);
        if self.is_zero() || other.is_zero() {
            return Scalar::zero(self.order);
        }
        let t = table(self.order);
        let phi = t.phi;
        let mut acc = vec![BigRational::zero(); phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let e = i + j;
                if e < phi {
                    acc[e] += prod;
                } else {
                    for (k, c) in t.powers[e].iter().enumerate() {
                        if !c.is_zero() {
                            acc[k] += &prod * c;
                        }
                    }
                }
            }
        }
        Scalar {
            order: self.order,
            coeffs: acc,
        }
    }

    /// Multiplicative inverse, by solving the multiplication matrix against 1.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let phi = self.coeffs.len();
        if phi == 1 {
            return Ok(Scalar {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // columns: self * q^j in the power basis
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let prod = self.mul_ref(&Scalar::root_power(self.order, j as u32));
            cols.push(prod.coeffs);
        }
        // solve sum_j y_j * cols[j] = e_0 by Gaussian elimination on the phi x phi system
        let mut aug: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..phi {
            let found = (pivot_row..phi).find(|&r| !aug[r][col].is_zero());
            let r = match found {
                Some(r) => r,
                None => continue,
            };
            aug.swap(pivot_row, r);
            let inv = aug[pivot_row][col].recip();
            for x in aug[pivot_row].iter_mut() {
                *x *= &inv;
            }
            for rr in 0..phi {
                if rr != pivot_row && !aug[rr][col].is_zero() {
                    let f = aug[rr][col].clone();
                    for c in 0..=phi {
                        let delta = &f * &aug[pivot_row][c];
                        aug[rr][c] -= delta;
                    }
                }
            }
            pivot_row += 1;
        }
        // q generates a field, the system is always solvable for nonzero input
        assert_eq!(pivot_row, phi, "singular multiplication matrix in a field");
        let coeffs = (0..phi).map(|i| aug[i][phi].clone()).collect();
        Ok(Scalar {
            order: self.order,
            coeffs,
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.order);
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Parse a scalar literal: `term (('+'|'-') term)*` with
    /// `term := rat | rat? 'q' ('^' uint)?` and `rat := '-'? uint ('/' uint)?`.
    /// Whitespace is insignificant.
    pub fn parse(order: u32, text: &str) -> Result<Scalar, ScalarError> {
        Parser::new(order, text).parse_all()
    }

    /// Canonical text form: terms in increasing power of q, zero printed as "0".
    pub fn format(&self) -> String {
        let mut out = String::new();
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push('-');
            } else {
                out.push('+');
            }
            let coeff_needed = e == 0 || !mag.is_one() || (first && neg && e > 0);
            // a leading "-q" is outside the literal grammar, so print "-1q"
            if coeff_needed {
                out.push_str(&format_ratio(&mag));
            }
            match e {
                0 => {}
                1 => out.push('q'),
                _ => {
                    out.push_str("q^");
                    out.push_str(&e.to_string());
                }
            }
            first = false;
        }
        if first {
            out.push('0');
        }
        out
    }
}

fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[n={}]({})", self.order, self.format())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

struct Parser<'a> {
    order: u32,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(order: u32, text: &'a str) -> Parser<'a> {
        Parser {
            order,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, ScalarError> {
        Err(ScalarError::Parse {
            offset: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_all(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.parse_term(false)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.parse_term(true)?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.parse_term(true)?;
                    acc = &acc - &t;
                }
                Some(_) => return self.err("expected '+' or '-'"),
                None => return Ok(acc),
            }
        }
    }

    /// One term. When `after_sign` is set a leading '-' belongs to the next term's
    /// rational part and is not permitted (the separator already consumed the sign).
    fn parse_term(&mut self, after_sign: bool) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                let e = self.parse_exponent()?;
                Ok(Scalar::root_power(self.order, e))
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                if c == b'-' && after_sign {
                    return self.err("unexpected '-'");
                }
                let r = self.parse_ratio()?;
                if self.bytes.get(self.pos) == Some(&b'q') {
                    self.pos += 1;
                    let e = self.parse_exponent()?;
                    Ok(&Scalar::from_rational(self.order, r)
                        * &Scalar::root_power(self.order, e))
                } else {
                    Ok(Scalar::from_rational(self.order, r))
                }
            }
            _ => self.err("expected term"),
        }
    }

    fn parse_exponent(&mut self) -> Result<u32, ScalarError> {
        if self.bytes.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let n = self.parse_uint()?;
            Ok(n)
        } else {
            Ok(1)
        }
    }

    fn parse_uint(&mut self) -> Result<u32, ScalarError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<u32>().map_err(|_| ScalarError::Parse {
            offset: start,
            msg: "integer overflow".into(),
        })
    }

    fn parse_ratio(&mut self) -> Result<BigRational, ScalarError> {
        self.skip_ws();
        let neg = if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.parse_uint()? as i64;
        let den = if self.bytes.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let d = self.parse_uint()? as i64;
            if d == 0 {
                return self.err("zero denominator");
            }
            d
        } else {
            1
        };
        let mut r = BigRational::new(BigInt::from(num), BigInt::from(den));
        if neg {
            r = -r;
        }
        Ok(r)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl std::ops::$trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| {
    a.check_order(b);
    Scalar {
        order: a.order,
        coeffs: a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect(),
    }
});

scalar_binop!(Sub, sub, |a, b| {
    a.check_order(b);
    Scalar {
        order: a.order,
        coeffs: a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x - y)
            .collect(),
    }
});

scalar_binop!(Mul, mul, |a, b| a.mul_ref(b));

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.check_order(rhs);
        for (x, y) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *x += y;
        }
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.check_order(rhs);
        for (x, y) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *x -= y;
        }
    }
}

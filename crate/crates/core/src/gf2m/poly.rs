use std::fmt;
use std::ops::{Add, Mul};

use rand::Rng;

use super::field::Field;
use crate::error::{Error, Result};

/// Polynomial degree with an explicit marker for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Polynomial over GF(2^m), coefficients lowest degree first, always normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u16>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<u16>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u16) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `c * z^degree`
    pub fn monomial(field: &Field, c: u16, degree: usize) -> Poly {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Poly::new(field, coeffs)
    }

    /// The polynomial `z`.
    pub fn z(field: &Field) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// Random monic polynomial of exact degree `degree`.
    pub fn random_monic<R: Rng + ?Sized>(field: &Field, degree: usize, rng: &mut R) -> Poly {
        let q = field.order() as u16;
        let mut coeffs: Vec<u16> = (0..degree).map(|_| rng.gen_range(0..q)).collect();
        coeffs.push(1);
        Poly::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u16 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u16 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u16) -> u16 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul(acc, x) ^ c)
    }

    pub fn scale(&self, c: u16) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv_nonzero(self.leading()))
    }

    /// Formal derivative; in characteristic 2 only odd-degree terms survive.
    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        Poly::new(&self.field, coeffs)
    }

    /// `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        let Degree::Finite(db) = divisor.degree() else {
            return Err(Error::Domain("polynomial division by zero".into()));
        };
        let f = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv_nonzero(divisor.leading());
        let mut quot = vec![0u16; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[i - db] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - db + j] ^= f.mul(factor, d);
            }
        }
        rem.truncate(db);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, modulus: &Poly) -> Result<Poly> {
        Ok(self.divmod(modulus)?.1)
    }

    pub fn square(&self) -> Poly {
        let f = &self.field;
        let mut coeffs = vec![0u16; (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = f.mul(c, c);
        }
        Poly::new(f, coeffs)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        (self * other).rem(modulus)
    }

    pub fn square_mod(&self, modulus: &Poly) -> Result<Poly> {
        self.square().rem(modulus)
    }

    /// Inverse modulo `modulus`; fails when `gcd(self, modulus) != 1`.
    pub fn inv_mod(&self, modulus: &Poly) -> Result<Poly> {
        let (_, v, r) = eea(modulus, &self.rem(modulus)?, 0)?;
        if r.is_zero() {
            return Err(Error::Domain("polynomial is not invertible modulo the given modulus".into()));
        }
        // v * self = r (mod modulus) with r a nonzero constant
        v.scale(self.field.inv_nonzero(r.leading())).rem(modulus)
    }

    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Ben-Or test: `gcd(self, z^(q^i) - z) = 1` for every `i <= deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Degree::Finite(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let f = &self.field;
        let z = Poly::z(f);
        let mut power = z.clone();
        for _ in 0..d / 2 {
            // z^(q^i) -> z^(q^(i+1)) is m squarings
            for _ in 0..f.m() {
                power = power.square_mod(self).expect("nonzero modulus");
            }
            let diff = &power + &z;
            if !self.gcd(&diff).expect("same field").is_one() {
                return false;
            }
        }
        true
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::usage("polynomials over different fields"));
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        let (long, short) =
            if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c ^= s;
        }
        Poly::new(&self.field, coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut coeffs = vec![0u16; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] ^= f.mul(a, b);
            }
        }
        Poly::new(f, coeffs)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}*z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}*z^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Extended Euclid on `(a, b)` stopped at the first remainder of degree
/// `<= stop_degree`.
///
/// Returns `(u, v, r)` with `u*a + v*b = r`. The sequence starts with
/// `r_0 = a (u=1, v=0)` and `r_1 = b (u=0, v=1)`, so `a` itself is returned
/// when it already satisfies the bound.
pub fn eea(a: &Poly, b: &Poly, stop_degree: usize) -> Result<(Poly, Poly, Poly)> {
    a.check_field(b)?;
    if b.is_zero() {
        return Err(Error::Domain("extended Euclid needs a nonzero second argument".into()));
    }
    let f = a.field();
    let bound = Degree::Finite(stop_degree);
    let (mut r0, mut u0, mut v0) = (a.clone(), Poly::one(f), Poly::zero(f));
    let (mut r1, mut u1, mut v1) = (b.clone(), Poly::zero(f), Poly::one(f));
    loop {
        if r0.degree() <= bound {
            return Ok((u0, v0, r0));
        }
        if r1.degree() <= bound || r1.is_zero() {
            return Ok((u1, v1, r1));
        }
        let (q, r2) = r0.divmod(&r1)?;
        let u2 = &u0 + &(&q * &u1);
        let v2 = &v0 + &(&q * &v1);
        (r0, u0, v0) = (r1, u1, v1);
        (r1, u1, v1) = (r2, u2, v2);
    }
}

/// Square roots modulo a fixed irreducible `g`, via a precomputed `sqrt(z) mod g`.
///
/// Writing `p(z) = e(z)^2 + z * o(z)^2` (coefficient-wise field square roots of
/// the even and odd parts), `sqrt(p) = e(z) + sqrt(z) * o(z)`.
#[derive(Clone, Debug)]
pub struct SqrtMod {
    modulus: Poly,
    sqrt_z: Poly,
}

impl SqrtMod {
    pub fn new(modulus: &Poly) -> Result<SqrtMod> {
        let Degree::Finite(t) = modulus.degree() else {
            return Err(Error::Domain("square root modulo the zero polynomial".into()));
        };
        let f = modulus.field();
        // z^(2^(m t - 1)) is the square root of z in GF(2^m)[z]/g
        let mut s = Poly::z(f).rem(modulus)?;
        for _ in 0..(f.m() as usize * t).saturating_sub(1) {
            s = s.square_mod(modulus)?;
        }
        Ok(SqrtMod { modulus: modulus.clone(), sqrt_z: s })
    }

    pub fn sqrt_z(&self) -> &Poly {
        &self.sqrt_z
    }

    pub fn sqrt(&self, p: &Poly) -> Result<Poly> {
        let f = p.field();
        let p = p.rem(&self.modulus)?;
        let half = |parity: usize| {
            let coeffs = p.coeffs().iter().skip(parity).step_by(2).map(|&c| f.sqrt(c)).collect();
            Poly::new(f, coeffs)
        };
        let even = half(0);
        let odd = half(1);
        (&even + &(&self.sqrt_z * &odd)).rem(&self.modulus)
    }
}

/// `r` with `r^2 = p (mod g)`.
pub fn poly_sqrt_mod(p: &Poly, g: &Poly) -> Result<Poly> {
    SqrtMod::new(g)?.sqrt(p)
}

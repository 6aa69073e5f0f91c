use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Primitive reduction polynomials, indexed by m (bit m is the leading term).
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

pub const MIN_M: u32 = 2;
pub const MAX_M: u32 = 16;

struct Tables {
    m: u32,
    poly: u32,
    /// exp[i] = alpha^i, doubled so `exp[log a + log b]` needs no reduction.
    exp: Vec<u16>,
    /// log[0] is unused.
    log: Vec<u16>,
}

/// GF(2^m) in polynomial basis; elements are plain `u16` values below `2^m`.
///
/// Cheap to clone (shared tables). Two handles compare equal when they use
/// the same degree and reduction polynomial.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl Field {
    /// Field of degree `m` with the built-in primitive polynomial. Cached per `m`.
    pub fn new(m: u32) -> Result<Field> {
        static CACHE: [OnceLock<Field>; 17] = [const { OnceLock::new() }; 17];
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(Error::usage(format!("field degree m = {m} outside [{MIN_M}, {MAX_M}]")));
        }
        Ok(CACHE[m as usize]
            .get_or_init(|| Field::with_poly(m, PRIMITIVE_POLYS[m as usize]).expect("table polynomial is primitive"))
            .clone())
    }

    /// Field with an explicit reduction polynomial, which must be primitive.
    pub fn with_poly(m: u32, poly: u32) -> Result<Field> {
        if !(MIN_M..=MAX_M).contains(&m) || poly >> m != 1 {
            return Err(Error::usage(format!("polynomial {poly:#x} is not of degree {m}")));
        }
        let order = 1usize << m;
        let mut exp = vec![0u16; 2 * (order - 1)];
        let mut log = vec![0u16; order];
        let mut x: u32 = 1;
        for i in 0..order - 1 {
            if i > 0 && x == 1 {
                return Err(Error::usage(format!("polynomial {poly:#x} is not primitive")));
            }
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::usage(format!("polynomial {poly:#x} is not primitive")));
        }
        for i in order - 1..2 * (order - 1) {
            exp[i] = exp[i - (order - 1)];
        }
        Ok(Field { t: Arc::new(Tables { m, poly, exp, log }) })
    }

    pub fn m(&self) -> u32 {
        self.t.m
    }

    pub fn reduction_poly(&self) -> u32 {
        self.t.poly
    }

    /// Number of elements, 2^m.
    pub fn order(&self) -> usize {
        1 << self.t.m
    }

    #[inline]
    pub fn contains(&self, a: u16) -> bool {
        (a as usize) < self.order()
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.t;
        t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        let t = &*self.t;
        let n = self.order() - 1;
        t.exp[(n - t.log[a as usize] as usize) % n]
    }

    #[inline]
    pub(crate) fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv_nonzero(b))
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order() - 1) as u64;
        let l = self.t.log[a as usize] as u64 * (e % n) % n;
        self.t.exp[l as usize]
    }

    /// alpha^i for the primitive element alpha = x.
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.t.exp[i % (self.order() - 1)]
    }

    /// Discrete log base alpha; `None` for zero.
    pub fn log(&self, a: u16) -> Option<usize> {
        (a != 0).then(|| self.t.log[a as usize] as usize)
    }

    /// The unique square root (Frobenius is a bijection in characteristic 2).
    pub fn sqrt(&self, a: u16) -> u16 {
        if a == 0 {
            return 0;
        }
        let n = self.order() - 1;
        let l = self.t.log[a as usize] as usize;
        // n is odd, so halving l (or l + n) inverts the squaring map
        let half = if l.is_multiple_of(2) { l / 2 } else { (l + n) / 2 };
        self.t.exp[half]
    }

    pub fn element(&self, value: u16) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::usage(format!("{value} is not an element of GF(2^{})", self.m())));
        }
        Ok(FieldElement { value, field: self.clone() })
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || (self.t.m == other.t.m && self.t.poly == other.t.poly)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.t.m, self.t.poly)
    }
}

/// A field value carrying its field, for checked arithmetic across API boundaries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    value: u16,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::usage(format!(
                "mixed fields {:?} and {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement { value: self.value ^ other.value, field: self.field.clone() })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement { value: self.field.mul(self.value, other.value), field: self.field.clone() })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement { value: self.field.inv(self.value)?, field: self.field.clone() })
    }
}

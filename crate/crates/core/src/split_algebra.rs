//! Symbol parameters and the truncated Chow ring of the split Rost motive.
//!
//! Over a splitting field the relevant part of `CH(X)` is spanned by
//! `1, H, ..., H^(p-1)` with `H` of codimension `b`; only `H^(p-1)` is a
//! zero-cycle, of degree `e` (a unit of `Z_(p)`).

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{LocalInt, Prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolParams {
    p: Prime,
    n: u32,
    b: u64,
    c: u64,
    d: u64,
    e: LocalInt,
}

impl SymbolParams {
    /// Validates `p`, `n >= 1` and that `e` is a unit, then derives `b, c, d`.
    pub fn new(p: u64, n: u32, e: LocalInt) -> Result<SymbolParams> {
        let p = Prime::new(p)?;
        if n == 0 {
            return Err(Error::DegreeTooSmall);
        }
        let q = p.get();
        let pow = |k: u32| {
            q.checked_pow(k)
                .ok_or_else(|| Error::Overflow(format!("{q}^{k} does not fit in 64 bits")))
        };
        let pn = pow(n)?;
        let pn1 = pow(n + 1)?;
        let b = (pn - 1) / (q - 1);
        let c = (pn1 - 1) / (q - 1);
        let d = pn - 1;
        debug_assert_eq!(c, b * q + 1);
        debug_assert_eq!(c, b + pn);
        debug_assert_eq!(d, b * (q - 1));
        debug_assert_eq!(d, c - b - 1);
        if !e.is_local(p) || !e.is_unit(p) {
            return Err(Error::NonUnitDegree { value: e.to_string(), p: q });
        }
        Ok(SymbolParams { p, n, b, c, d, e })
    }

    /// Parameters with `e = 1`.
    pub fn with_unit_degree(p: u64, n: u32) -> Result<SymbolParams> {
        SymbolParams::new(p, n, LocalInt::one())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> u64 {
        self.p.get()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Degree of the zero-cycle `H^(p-1)`.
    pub fn e(&self) -> &LocalInt {
        &self.e
    }

    /// `1/e`.
    pub fn e_inv(&self) -> LocalInt {
        self.e.inv_unit(self.p).expect("e is a unit by construction")
    }

    /// Largest H-exponent in the span, `p - 1`.
    pub fn top(&self) -> u32 {
        (self.p.get() - 1) as u32
    }

    /// `p^k` as an integer.
    pub fn p_pow(&self, k: u32) -> u64 {
        self.p.get().pow(k)
    }

    pub fn same_symbol(&self, other: &SymbolParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }
}

/// An element of the span of `1, H, ..., H^(p-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowClass {
    params: SymbolParams,
    coeffs: BTreeMap<u32, LocalInt>,
}

impl ChowClass {
    pub fn zero(params: &SymbolParams) -> ChowClass {
        ChowClass { params: params.clone(), coeffs: BTreeMap::new() }
    }

    /// `H^k`.
    pub fn h_power(params: &SymbolParams, k: u32) -> Result<ChowClass> {
        ChowClass::monomial(params, k, LocalInt::one())
    }

    pub fn monomial(params: &SymbolParams, k: u32, coeff: LocalInt) -> Result<ChowClass> {
        if k > params.top() {
            return Err(Error::ExponentOutOfRange { exponent: k as u64, max: params.top() as u64 });
        }
        let mut out = ChowClass::zero(params);
        out.add_term(k, coeff);
        Ok(out)
    }

    pub fn from_terms(
        params: &SymbolParams,
        terms: impl IntoIterator<Item = (u32, LocalInt)>,
    ) -> Result<ChowClass> {
        let mut out = ChowClass::zero(params);
        for (k, c) in terms {
            if k > params.top() {
                return Err(Error::ExponentOutOfRange { exponent: k as u64, max: params.top() as u64 });
            }
            out.add_term(k, c);
        }
        Ok(out)
    }

    /// Adds `coeff * H^k`, silently dropping exponents beyond `p - 1`.
    pub(crate) fn add_term(&mut self, k: u32, coeff: LocalInt) {
        if k > self.params.top() || coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(LocalInt::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn params(&self) -> &SymbolParams {
        &self.params
    }

    pub fn coeff(&self, k: u32) -> LocalInt {
        self.coeffs.get(&k).cloned().unwrap_or_else(LocalInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &LocalInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass> {
        self.params.same_symbol(&other.params)?;
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChowClass {
        self.scale(&-LocalInt::one())
    }

    pub fn scale(&self, s: &LocalInt) -> ChowClass {
        let mut out = ChowClass::zero(&self.params);
        for (k, c) in self.terms() {
            out.add_term(k, c * s);
        }
        out
    }

    /// Intersection product; `H^i * H^j` vanishes once `i + j > p - 1`.
    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass> {
        self.params.same_symbol(&other.params)?;
        let mut out = ChowClass::zero(&self.params);
        for (i, x) in self.terms() {
            for (j, y) in other.terms() {
                out.add_term(i + j, x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, r: u32) -> ChowClass {
        let mut acc = ChowClass::monomial(&self.params, 0, LocalInt::one()).expect("H^0 is in range");
        for _ in 0..r {
            acc = acc.mul(self).expect("same params");
        }
        acc
    }

    /// Push-forward to a point: `e` times the `H^(p-1)` coefficient.
    pub fn degree(&self) -> LocalInt {
        self.params.e() * &self.coeff(self.params.top())
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().map(|(k, c)| (format!("H^{k}"), c)))
    }
}

/// Writes `c1*t1 + c2*t2 - ...`, omitting unit coefficients; `0` when empty.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a LocalInt)>,
) -> fmt::Result {
    let mut first = true;
    for (label, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else if negative {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if mag.is_one() {
            f.write_str(&label)?;
        } else {
            write!(f, "{mag}*{label}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

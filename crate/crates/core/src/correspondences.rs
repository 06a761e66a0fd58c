//! Correspondences on `X x X` inside the split span of `H^i x H^j`.
//!
//! `E(i, j)` denotes `H^i x H^j`. Composition pairs the middle factors by
//! pushing forward to a point, so only middle exponents summing to `p - 1`
//! survive, each contributing the degree `e` of `H^(p-1)`. The diagonal of
//! `X` is not in the span, so there is no composition identity here; the
//! Rost projector acts as the identity only on the span itself.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{LocalInt, Valuation};
use crate::end_algebra::EndTuple;
use crate::error::{Error, Result};
use crate::split_algebra::{write_terms, ChowClass, SymbolParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corr {
    params: SymbolParams,
    coeffs: BTreeMap<(u32, u32), LocalInt>,
}

impl Corr {
    pub fn zero(params: &SymbolParams) -> Corr {
        Corr { params: params.clone(), coeffs: BTreeMap::new() }
    }

    /// The basis class `E(i, j) = H^i x H^j`.
    pub fn basis(params: &SymbolParams, i: u32, j: u32) -> Result<Corr> {
        Corr::from_terms(params, [((i, j), LocalInt::one())])
    }

    pub fn from_terms(
        params: &SymbolParams,
        terms: impl IntoIterator<Item = ((u32, u32), LocalInt)>,
    ) -> Result<Corr> {
        let top = params.top();
        let mut out = Corr::zero(params);
        for ((i, j), c) in terms {
            for k in [i, j] {
                if k > top {
                    return Err(Error::ExponentOutOfRange { exponent: k as u64, max: top as u64 });
                }
            }
            out.add_term(i, j, c);
        }
        Ok(out)
    }

    /// The special correspondence `1 x H - H x 1`.
    pub fn sigma(params: &SymbolParams) -> Corr {
        Corr::from_terms(
            params,
            [((0, 1), LocalInt::one()), ((1, 0), -LocalInt::one())],
        )
        .expect("p >= 2 so H^1 is in the span")
    }

    /// `rho = sigma^(p-1)`, an intersection power.
    pub fn rho(params: &SymbolParams) -> Corr {
        Corr::sigma(params).ring_power(params.top())
    }

    /// `(1 x H^(p-1) + H x H^(p-2) + ... + H^(p-1) x 1) / e`.
    pub fn rost_projector(params: &SymbolParams) -> Corr {
        let top = params.top();
        let c = params.e_inv();
        Corr::from_terms(params, (0..=top).map(|i| ((i, top - i), c.clone())))
            .expect("anti-diagonal terms are in range")
    }

    fn add_term(&mut self, i: u32, j: u32, coeff: LocalInt) {
        let top = self.params.top();
        if i > top || j > top || coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((i, j)).or_insert_with(LocalInt::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn params(&self) -> &SymbolParams {
        &self.params
    }

    pub fn coeff(&self, i: u32, j: u32) -> LocalInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(LocalInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &LocalInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Corr) -> Result<Corr> {
        self.params.same_symbol(&other.params)?;
        let mut out = self.clone();
        for ((i, j), c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Corr) -> Result<Corr> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Corr {
        self.scale(&-LocalInt::one())
    }

    pub fn scale(&self, s: &LocalInt) -> Corr {
        let mut out = Corr::zero(&self.params);
        for ((i, j), c) in self.terms() {
            out.add_term(i, j, c * s);
        }
        out
    }

    /// Intersection product on `X x X`: `E(i,j) * E(k,l) = E(i+k, j+l)`,
    /// truncated beyond `p - 1` in either slot.
    pub fn intersect(&self, other: &Corr) -> Result<Corr> {
        self.params.same_symbol(&other.params)?;
        let mut out = Corr::zero(&self.params);
        for ((i, j), x) in self.terms() {
            for ((k, l), y) in other.terms() {
                out.add_term(i + k, j + l, x * y);
            }
        }
        Ok(out)
    }

    /// `r`-fold intersection power; the zeroth power is `E(0, 0)`.
    pub fn ring_power(&self, r: u32) -> Corr {
        let mut acc = Corr::basis(&self.params, 0, 0).expect("E(0,0) is in range");
        for _ in 0..r {
            acc = acc.intersect(self).expect("same params");
        }
        acc
    }

    /// `self ∘ alpha`: apply `alpha` first, then `self`.
    pub fn compose(&self, alpha: &Corr) -> Result<Corr> {
        self.params.same_symbol(&alpha.params)?;
        let top = self.params.top();
        let e = self.params.e();
        let mut out = Corr::zero(&self.params);
        for ((i, j), a) in alpha.terms() {
            let k = top - j;
            for l in 0..=top {
                if let Some(b) = self.coeffs.get(&(k, l)) {
                    out.add_term(i, l, &(e * a) * b);
                }
            }
        }
        Ok(out)
    }

    /// `n`-fold composition power by repeated squaring; `n >= 1`.
    pub fn compose_power(&self, n: u64) -> Result<Corr> {
        if n == 0 {
            return Err(Error::NoCompositionIdentity);
        }
        let mut result: Option<Corr> = None;
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.compose(&base)?,
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.compose(&base)?;
        }
        Ok(result.expect("n >= 1"))
    }

    pub fn transpose(&self) -> Corr {
        let mut out = Corr::zero(&self.params);
        for ((i, j), c) in self.terms() {
            out.add_term(j, i, c.clone());
        }
        out
    }

    /// Coefficient of `[X]` in the push-forward along the first projection.
    pub fn mult(&self) -> LocalInt {
        self.params.e() * &self.coeff(0, self.params.top())
    }

    /// Pull-back along the diagonal: `E(i, j) -> H^(i+j)`.
    pub fn diag_pullback(&self) -> ChowClass {
        let mut out = ChowClass::zero(&self.params);
        for ((i, j), c) in self.terms() {
            out.add_term(i + j, c.clone());
        }
        out
    }

    /// Push-pull action on `H^k`: `sum_j e * alpha_{(p-1-k), j} H^j`.
    pub fn action_on_class(&self, k: u32) -> Result<ChowClass> {
        let top = self.params.top();
        if k > top {
            return Err(Error::ExponentOutOfRange { exponent: k as u64, max: top as u64 });
        }
        let mut out = ChowClass::zero(&self.params);
        for ((i, j), c) in self.terms() {
            if i == top - k {
                out.add_term(j, self.params.e() * c);
            }
        }
        Ok(out)
    }

    /// Reads an anti-diagonal correspondence as an element of `Λ^p`;
    /// entry `i` is `e * coeff(i, p-1-i)`.
    pub fn to_tuple(&self) -> Result<EndTuple> {
        let top = self.params.top();
        if let Some(((i, j), _)) = self.terms().find(|((i, j), _)| i + j != top) {
            return Err(Error::NotEndomorphism(format!("E({i},{j})")));
        }
        let entries = (0..=top).map(|i| self.params.e() * &self.coeff(i, top - i)).collect();
        EndTuple::new(entries, self.params.prime())
    }

    /// Inverse of [`Corr::to_tuple`].
    pub fn from_tuple(params: &SymbolParams, t: &EndTuple) -> Result<Corr> {
        if t.prime() != params.prime() {
            return Err(Error::ParamsMismatch);
        }
        let top = params.top();
        let c = params.e_inv();
        Corr::from_terms(
            params,
            t.entries().iter().enumerate().map(|(i, x)| ((i as u32, top - i as u32), x * &c)),
        )
    }
}

impl fmt::Display for Corr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().map(|((i, j), c)| (format!("E({i},{j})"), c)))
    }
}

/// Computes `(sigma ∘ sigma^(p-1)) / e` and compares it with
/// `1 x H + (p-1) H x 1`. Returns the computed correspondence as witness.
pub fn check_sigma_rho(params: &SymbolParams) -> (bool, Corr) {
    let sigma = Corr::sigma(params);
    let witness = sigma
        .compose(&Corr::rho(params))
        .expect("same params")
        .scale(&params.e_inv());
    let expected = Corr::from_terms(
        params,
        [((0, 1), LocalInt::one()), ((1, 0), LocalInt::from(params.p() - 1))],
    )
    .expect("in range");
    (witness == expected, witness)
}

/// Forms `rho' = (rho/e) ∘ (rho/e)`, raises it to the composition power
/// `p^r`, and returns it with `min_i val_p(lambda_i - 1)` over its tuple
/// entries.
pub fn projector_iterate(params: &SymbolParams, r: u32) -> Result<(Corr, Valuation)> {
    let scaled = Corr::rho(params).scale(&params.e_inv());
    let rho1 = scaled.compose(&scaled)?;
    let iterated = rho1.compose_power(params.p_pow(r))?;
    let offset = min_offset_valuation(&iterated.to_tuple()?)?;
    Ok((iterated, offset))
}

/// `min_i val_p(t_i - 1)`.
pub fn min_offset_valuation(t: &EndTuple) -> Result<Valuation> {
    let p = t.prime();
    t.entries()
        .iter()
        .map(|x| (x - &LocalInt::one()).val_p(p))
        .try_fold(Valuation::Infinite, |acc, v| Ok(acc.min(v?)))
}

//! Monomial bases `x·γ^k·Q^ε(δ)` of the motivic cohomology of the Čech
//! simplicial scheme of a norm variety, in the range `i > j`.
//!
//! A monomial is recorded as `(m, k, ε)` where `x ∈ K_m^s(F)`. Its bidegree is
//!
//! ```text
//! j = m + (c-1)k + Σ ε_t (p^t - 1) + n
//! w = 2j - i = m - 2k - |ε| + (n - 2)
//! ```
//!
//! Every summand of `j` is nonnegative, so `k ≤ j/(c-1)` and `m ≤ j`. Once
//! `k` and `ε` are fixed, `m` is determined by `j`, so searching over `k` and
//! `ε` is exhaustive.
//!
//! `K_0^s(F)` is rendered as `Z/p` (the symbol is assumed nontrivial).
//! `K_m^s(F)` for `m ≥ 1` stays symbolic.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::split_algebra::SymbolParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bidegree {
    pub i: i64,
    pub j: i64,
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MCMonomial {
    pub m: u64,
    pub k: u64,
    /// `eps[t - 1]` selects `Q_t`.
    pub eps: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientLabel {
    /// `Z·1`, the unit class in bidegree `(0, 0)`.
    Integers,
    /// `K_0^s(F) = Z/p`.
    CyclicP(u64),
    /// Symbolic `K_m^s(F)`, `m ≥ 1`.
    MilnorK(u64),
}

impl fmt::Display for CoefficientLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientLabel::Integers => write!(f, "Z"),
            CoefficientLabel::CyclicP(p) => write!(f, "Z/{p}"),
            CoefficientLabel::MilnorK(m) => write!(f, "K_{m}^s"),
        }
    }
}

impl MCMonomial {
    pub fn new(m: u64, k: u64, eps: Vec<bool>) -> MCMonomial {
        MCMonomial { m, k, eps }
    }

    pub fn eps_weight(&self) -> u64 {
        self.eps.iter().filter(|&&e| e).count() as u64
    }

    pub fn bidegree(&self, params: &SymbolParams) -> Result<Bidegree> {
        let n = params.n() as usize;
        if self.eps.len() != n {
            return Err(Error::IndexOutOfRange {
                index: self.eps.len() as i64,
                min: n as i64,
                max: n as i64,
            });
        }
        let overflow = || Error::Overflow("monomial bidegree".into());
        let mut j = self.m as i128 + (params.c() as i128 - 1) * self.k as i128 + n as i128;
        for (t, &on) in self.eps.iter().enumerate() {
            if on {
                j += params.p_pow(t as u32 + 1) as i128 - 1;
            }
        }
        let w = self.m as i128 - 2 * self.k as i128 - self.eps_weight() as i128 + n as i128 - 2;
        let i = 2 * j - w;
        Ok(Bidegree {
            i: i64::try_from(i).map_err(|_| overflow())?,
            j: i64::try_from(j).map_err(|_| overflow())?,
        })
    }

    pub fn label(&self, params: &SymbolParams) -> CoefficientLabel {
        if self.m == 0 {
            CoefficientLabel::CyclicP(params.p())
        } else {
            CoefficientLabel::MilnorK(self.m)
        }
    }

    /// Name of `γ^k·Q^ε(δ)` using the standard abbreviations.
    pub fn name(&self) -> String {
        let n = self.eps.len();
        let all_ones = self.eps.iter().all(|&e| e);
        let mut k = self.k;
        let core = if n >= 1 && !self.eps[n - 1] && self.eps[..n - 1].iter().all(|&e| e) {
            "μ".to_string()
        } else if self.eps.iter().all(|&e| !e) {
            "δ".to_string()
        } else if all_ones {
            k += 1;
            String::new()
        } else if !self.eps[n - 1] && self.eps_weight() as usize == n - 2 {
            let i = self.eps[..n - 1].iter().position(|&e| !e).expect("one gap") + 1;
            format!("Q̃_{i}(δ)")
        } else {
            let bits: Vec<&str> = self.eps.iter().map(|&e| if e { "1" } else { "0" }).collect();
            format!("Q^({})(δ)", bits.join(","))
        };
        let gamma = match k {
            0 => String::new(),
            1 => "γ".to_string(),
            k => format!("γ^{k}"),
        };
        match (gamma.is_empty(), core.is_empty()) {
            (true, _) => core,
            (false, true) => gamma,
            (false, false) => format!("{gamma}·{core}"),
        }
    }
}

/// `δ`, the class of the symbol.
pub fn delta(params: &SymbolParams) -> MCMonomial {
    MCMonomial::new(0, 0, vec![false; params.n() as usize])
}

/// `μ = Q_1 ∘ … ∘ Q_{n-1}(δ)`.
pub fn mu(params: &SymbolParams) -> MCMonomial {
    let n = params.n() as usize;
    let mut eps = vec![true; n];
    eps[n - 1] = false;
    MCMonomial::new(0, 0, eps)
}

/// `γ = Q_1 ∘ … ∘ Q_n(δ)`, with the sign fixed to `+`.
pub fn gamma(params: &SymbolParams) -> MCMonomial {
    MCMonomial::new(0, 0, vec![true; params.n() as usize])
}

/// `Q̃_i(δ)`: all of `Q_1 … Q_{n-1}` except `Q_i`.
pub fn qtilde(i: u32, params: &SymbolParams) -> Result<MCMonomial> {
    let n = params.n();
    if i < 1 || i + 1 > n {
        return Err(Error::IndexOutOfRange { index: i as i64, min: 1, max: n as i64 - 1 });
    }
    let mut m = mu(params);
    m.eps[i as usize - 1] = false;
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCGroup {
    pub bidegree: Bidegree,
    /// Set only in bidegree `(0, 0)`, where the group is `Z·1`.
    pub unit: bool,
    pub monomials: Vec<MCMonomial>,
}

impl MCGroup {
    pub fn zero(bidegree: Bidegree) -> MCGroup {
        MCGroup { bidegree, unit: false, monomials: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        !self.unit && self.monomials.is_empty()
    }

    /// The common coefficient label, if the group is nonzero and uniform.
    pub fn coefficient_label(&self, params: &SymbolParams) -> Option<CoefficientLabel> {
        if self.unit {
            return Some(CoefficientLabel::Integers);
        }
        let first = self.monomials.first()?.label(params);
        self.monomials
            .iter()
            .all(|m| m.label(params) == first)
            .then_some(first)
    }

    /// Every monomial with `j ≤ d` has `k = 0` and `ε_n = 0`.
    pub fn automatic_constraints_hold(&self, params: &SymbolParams) -> bool {
        self.bidegree.j > params.d() as i64
            || self.monomials.iter().all(|m| m.k == 0 && !m.eps.last().copied().unwrap_or(false))
    }

    pub fn render(&self, params: &SymbolParams) -> String {
        if self.unit {
            return "Z·1".to_string();
        }
        if self.monomials.is_empty() {
            return "0".to_string();
        }
        self.monomials
            .iter()
            .map(|m| format!("{}·{}", m.label(params), m.name()))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }
}

/// All monomials in bidegree `(i, j)`; `(0, 0)` yields the unit class.
pub fn enumerate(i: i64, j: i64, params: &SymbolParams) -> Result<MCGroup> {
    let bidegree = Bidegree { i, j };
    if (i, j) == (0, 0) {
        return Ok(MCGroup { bidegree, unit: true, monomials: Vec::new() });
    }
    if i <= j {
        return Err(Error::OutsideClassification { i, j });
    }
    let n = params.n() as usize;
    let w = 2 * j as i128 - i as i128;
    let base = j as i128 - n as i128;
    let mut monomials = Vec::new();
    if base >= 0 {
        let step = params.c() as i128 - 1;
        let weights: Vec<i128> = (1..=n as u32).map(|t| params.p_pow(t) as i128 - 1).collect();
        let mut eps = vec![false; n];
        let mut k = 0i128;
        while k * step <= base {
            search_eps(&weights, n, base - k * step, &mut eps, &mut |eps, m| {
                let weight = eps.iter().filter(|&&e| e).count() as i128;
                if m - 2 * k - weight + n as i128 - 2 == w {
                    monomials.push(MCMonomial::new(m as u64, k as u64, eps.to_vec()));
                }
            });
            k += 1;
        }
    }
    monomials.sort();
    Ok(MCGroup { bidegree, unit: false, monomials })
}

/// Visits every `ε` with `Σ ε_t (p^t - 1) ≤ budget`, passing the remainder `m`.
fn search_eps(
    weights: &[i128],
    t: usize,
    budget: i128,
    eps: &mut [bool],
    visit: &mut dyn FnMut(&[bool], i128),
) {
    if t == 0 {
        visit(eps, budget);
        return;
    }
    eps[t - 1] = false;
    search_eps(weights, t - 1, budget, eps, visit);
    if weights[t - 1] <= budget {
        eps[t - 1] = true;
        search_eps(weights, t - 1, budget - weights[t - 1], eps, visit);
        eps[t - 1] = false;
    }
}

fn check_row(j: i64, params: &SymbolParams) -> Result<()> {
    if j < 0 || j as u64 > params.d() {
        return Err(Error::RowOutOfRange { j, d: params.d() });
    }
    Ok(())
}

/// `H^{2j,j}` by enumeration.
pub fn even_row(j: i64, params: &SymbolParams) -> Result<MCGroup> {
    check_row(j, params)?;
    enumerate(2 * j, j, params)
}

/// `H^{2j+1,j}` by enumeration.
pub fn odd_row(j: i64, params: &SymbolParams) -> Result<MCGroup> {
    check_row(j, params)?;
    enumerate(2 * j + 1, j, params)
}

/// Closed form for `H^{2j,j}`: `Z·1` at `0`, `Z/p·Q̃_i(δ)` at `b - p^i + 1`,
/// `K_1^s·μ` at `b + 1`, and `0` otherwise.
pub fn even_row_closed(j: i64, params: &SymbolParams) -> Result<MCGroup> {
    check_row(j, params)?;
    let bidegree = Bidegree { i: 2 * j, j };
    if j == 0 {
        return Ok(MCGroup { bidegree, unit: true, monomials: Vec::new() });
    }
    let b = params.b() as i64;
    let mut monomials = Vec::new();
    for i in 1..params.n() {
        if j == b - params.p_pow(i) as i64 + 1 {
            monomials.push(qtilde(i, params)?);
        }
    }
    if j == b + 1 {
        let mut m = mu(params);
        m.m = 1;
        monomials.push(m);
    }
    Ok(MCGroup { bidegree, unit: false, monomials })
}

/// Closed form for `H^{2j+1,j}`: `Z/p·μ` at `b`, `0` otherwise.
pub fn odd_row_closed(j: i64, params: &SymbolParams) -> Result<MCGroup> {
    check_row(j, params)?;
    let bidegree = Bidegree { i: 2 * j + 1, j };
    let monomials = if j == params.b() as i64 { vec![mu(params)] } else { Vec::new() };
    Ok(MCGroup { bidegree, unit: false, monomials })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: u64, n: u32) -> SymbolParams {
        SymbolParams::with_unit_degree(p, n).unwrap()
    }

    #[test]
    fn named_bidegrees() {
        let s = sp(3, 2);
        assert_eq!(mu(&s).bidegree(&s).unwrap(), Bidegree { i: 9, j: 4 });
        assert_eq!(delta(&s).bidegree(&s).unwrap(), Bidegree { i: 4, j: 2 });
        assert_eq!(gamma(&s).bidegree(&s).unwrap(), Bidegree { i: 26, j: 12 });
    }

    #[test]
    fn enumerations() {
        let s = sp(3, 2);
        let g = enumerate(9, 4, &s).unwrap();
        assert_eq!(g.monomials, vec![MCMonomial::new(0, 0, vec![true, false])]);
        assert_eq!(g.render(&s), "Z/3·μ");
        let g = enumerate(10, 5, &s).unwrap();
        assert_eq!(g.monomials, vec![MCMonomial::new(1, 0, vec![true, false])]);
        assert_eq!(g.render(&s), "K_1^s·μ");
        let s2 = sp(2, 2);
        let g = enumerate(4, 2, &s2).unwrap();
        assert_eq!(g.monomials, vec![MCMonomial::new(0, 0, vec![false, false])]);
        assert_eq!(g.render(&s2), "Z/2·δ");
        assert!(enumerate(0, 0, &s).unwrap().unit);
        assert_eq!(enumerate(3, 3, &s), Err(Error::OutsideClassification { i: 3, j: 3 }));
    }

    #[test]
    fn rows() {
        let s = sp(2, 3);
        let g = even_row(4, &s).unwrap();
        assert_eq!(g.monomials, vec![qtilde(2, &s).unwrap()]);
        assert_eq!(g.render(&s), "Z/2·Q̃_2(δ)");
        assert!(odd_row(2, &sp(3, 2)).unwrap().is_zero());
        assert_eq!(even_row(0, &s).unwrap().render(&s), "Z·1");
        assert!(matches!(even_row(8, &s), Err(Error::RowOutOfRange { .. })));
    }

    #[test]
    fn qtildes() {
        let s = sp(3, 2);
        assert_eq!(qtilde(1, &s).unwrap(), delta(&s));
        let s = sp(2, 3);
        let q = qtilde(1, &s).unwrap();
        assert_eq!(q.eps, vec![false, true, false]);
        assert_eq!(q.bidegree(&s).unwrap(), Bidegree { i: 12, j: 6 });
        let s = sp(3, 3);
        let q = qtilde(2, &s).unwrap();
        assert_eq!(q.eps, vec![true, false, false]);
        assert_eq!(q.bidegree(&s).unwrap().j, 5);
        assert!(qtilde(3, &s).is_err());
        assert!(qtilde(0, &s).is_err());
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for p in [2, 3, 5] {
            for n in 1..=4 {
                let s = sp(p, n);
                for j in 0..=s.d() as i64 {
                    let even = even_row(j, &s).unwrap();
                    let odd = odd_row(j, &s).unwrap();
                    assert_eq!(even, even_row_closed(j, &s).unwrap(), "p={p} n={n} j={j}");
                    assert_eq!(odd, odd_row_closed(j, &s).unwrap(), "p={p} n={n} j={j}");
                    assert!(even.automatic_constraints_hold(&s));
                    assert!(odd.automatic_constraints_hold(&s));
                    assert!(even.monomials.len() <= 1 && odd.monomials.len() <= 1);
                }
            }
        }
    }

    #[test]
    fn names() {
        let s = sp(3, 3);
        assert_eq!(gamma(&s).name(), "γ");
        assert_eq!(MCMonomial::new(0, 2, vec![true, false, false]).name(), "γ^2·Q̃_2(δ)");
        assert_eq!(MCMonomial::new(0, 0, vec![false, false, true]).name(), "Q^(0,0,1)(δ)");
        assert_eq!(mu(&sp(3, 1)).name(), "μ");
    }
}

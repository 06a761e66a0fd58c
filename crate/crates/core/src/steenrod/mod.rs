//! Formal Steenrod/Cartan expansions and a `p`-valuation auditor.
//!
//! The action of Steenrod operations on `H` is never computed: `S^l_H` is an
//! opaque rational class and `θ_l` an opaque class carrying one explicit
//! factor of `p`. A product of such atoms, paired against Chern classes and
//! powers of `H`, is assigned a verdict: zero, a lower bound on its
//! `p`-valuation, or an exact valuation backed by a declared premise.
//!
//! Declared premises: `val_p(deg b_d) = 1`, `val_p(deg b^Y_dim Y) = 1` and
//! `val_p(e) = 0`.

mod audit;
mod cartan;
mod rules;

use std::fmt;

use serde::Serialize;

use crate::arith::{LocalInt, Prime, Valuation};

pub use audit::{audit_generators, audit_leading_term, AuditCase, AuditKind, AuditReport, IndexTuple};
pub use cartan::{cartan_expand, ordered_composition_count, substitute_dcmp, CartanTerm};
pub use rules::{replay, valuation_bound};

/// `S^i` vanishes mod `p` unless `(p-1) | i`.
pub fn steen_index_valid(i: i64, p: Prime) -> bool {
    i >= 0 && (i as u64).is_multiple_of(p.get() - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SteenAtom {
    /// `σ` itself (a zero Steenrod index).
    SigmaFactor,
    /// `1 × S^l_H`.
    SecondType(u64),
    /// `S^l_H × 1`.
    ThirdType(u64),
    /// `p·θ_l`.
    Theta(u64),
    /// `b_i(-T_X)` on one factor of `X × X`.
    ChernX { index: u64, slot: Slot },
    /// `b^Y_i = f_*(b_i(-T_Y))`.
    ChernY(u64),
    HPower { exponent: u32, slot: Slot },
    /// The `H^r × x_r` summand of `x` over `F(X)`.
    DecompX(u32),
}

impl SteenAtom {
    /// Steenrod index carried by an expansion atom.
    pub fn steen_index(&self) -> Option<u64> {
        match *self {
            SteenAtom::SigmaFactor => Some(0),
            SteenAtom::SecondType(l) | SteenAtom::ThirdType(l) | SteenAtom::Theta(l) => Some(l),
            _ => None,
        }
    }

    pub fn intrinsic_valuation(&self) -> u64 {
        matches!(self, SteenAtom::Theta(_)) as u64
    }

    /// The factor of `X × X` the atom lives on, when it lives on one.
    pub fn slot(&self) -> Option<Slot> {
        match *self {
            SteenAtom::SecondType(_) => Some(Slot::Second),
            SteenAtom::ThirdType(_) | SteenAtom::ChernY(_) => Some(Slot::First),
            SteenAtom::ChernX { slot, .. } | SteenAtom::HPower { slot, .. } => Some(slot),
            _ => None,
        }
    }
}

impl fmt::Display for SteenAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SteenAtom::SigmaFactor => write!(f, "σ"),
            SteenAtom::SecondType(l) => write!(f, "1×S^{l}_H"),
            SteenAtom::ThirdType(l) => write!(f, "S^{l}_H×1"),
            SteenAtom::Theta(l) => write!(f, "pθ_{l}"),
            SteenAtom::ChernX { index, slot: Slot::First } => write!(f, "b_{index}×1"),
            SteenAtom::ChernX { index, slot: Slot::Second } => write!(f, "1×b_{index}"),
            SteenAtom::ChernY(i) => write!(f, "b^Y_{i}"),
            SteenAtom::HPower { exponent, slot: Slot::First } => write!(f, "H^{exponent}×1"),
            SteenAtom::HPower { exponent, slot: Slot::Second } => write!(f, "1×H^{exponent}"),
            SteenAtom::DecompX(r) => write!(f, "H^{r}×x_{r}"),
        }
    }
}

/// What a product is paired against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingContext {
    /// A summand `pr_2*(b_j · pr_2*(b_i · P) · S^k_x)` with `x` of codimension `m`
    /// and `i + j + k + l = d + s`.
    LeadingTerm { m: i64, s: u64, i: u64, j: u64, k: u64 },
    /// A degree `deg((b^Y_i × H^(p-1-r)) · P)` with `P` from `S^j(σ^r)`,
    /// `i + j = dim Y`.
    Generators { dim_y: u64, r: u32, i: u64, j: u64 },
    /// A degree of a product paired against `H^h_first × H^h_second`.
    SplitDegree { h_first: u32, h_second: u32 },
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteenProduct {
    /// Sorted multiset.
    pub atoms: Vec<SteenAtom>,
    pub scalar: LocalInt,
    pub context: PairingContext,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProductClass {
    pub sigmas: u32,
    pub thetas: u32,
    pub seconds: u32,
    pub thirds: u32,
    /// Sum of the Steenrod indices of the expansion atoms.
    pub l: u64,
}

impl ProductClass {
    pub fn factors(&self) -> u32 {
        self.sigmas + self.thetas + self.seconds + self.thirds
    }
}

impl SteenProduct {
    pub fn new(mut atoms: Vec<SteenAtom>, scalar: LocalInt, context: PairingContext) -> SteenProduct {
        atoms.sort();
        SteenProduct { atoms, scalar, context }
    }

    pub fn with_atom(&self, atom: SteenAtom) -> SteenProduct {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        SteenProduct::new(atoms, self.scalar.clone(), self.context)
    }

    pub fn classify(&self) -> ProductClass {
        let mut c = ProductClass::default();
        for a in &self.atoms {
            match a {
                SteenAtom::SigmaFactor => c.sigmas += 1,
                SteenAtom::Theta(_) => c.thetas += 1,
                SteenAtom::SecondType(_) => c.seconds += 1,
                SteenAtom::ThirdType(_) => c.thirds += 1,
                _ => {}
            }
            c.l += a.steen_index().unwrap_or(0);
        }
        c
    }

    pub fn contains(&self, atom: &SteenAtom) -> bool {
        self.atoms.binary_search(atom).is_ok()
    }
}

impl fmt::Display for SteenProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scalar.is_one() {
            write!(f, "{}·", self.scalar)?;
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualReason {
    /// Only the `1 × x_0` summand can survive, and it needs `k = s`.
    KNotLeading,
    /// `pr_2*(H^e × S^k(x_0))` vanishes for `e < p-1`.
    HExponentBelowTop { exponent: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    ChernAboveDimension { index: u64 },
    SteenrodIndexInvalid { index: u64 },
    /// `pr_2*(b_i · σ^(p-1))` vanishes over `F(X)` unless `b | i`.
    PushforwardCodimension { i: u64 },
    /// `pr_1*` of `σ^r · (1 × H^h)` vanishes when `r + h < p - 1`.
    SigmaPushforwardVanishes { sigmas: u32, h_power: u32 },
    ThetaFactor { count: u32 },
    /// Pairing a rational class of positive codimension with anything over
    /// `F(X)` gives a degree divisible by `p`.
    RationalPairing { atom: SteenAtom },
    /// Two such classes on different factors give `p^2`.
    SplitRationalPairing { first: SteenAtom, second: SteenAtom },
    ResidualVanishesModP { reason: ResidualReason },
    ScalarValuation { v: u64 },
    /// `val_p(deg b_d · e) = 1`.
    LeadingDegree,
    /// `val_p(deg b^Y_dim Y · e) = 1`.
    LeadingGenerator,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ChernAboveDimension { index } => write!(f, "b_{index} = 0 above the dimension"),
            Rule::SteenrodIndexInvalid { index } => write!(f, "S^{index} = 0 (index not divisible by p-1)"),
            Rule::PushforwardCodimension { i } => write!(f, "pr_2*(b_{i}·ρ) = 0 since b does not divide {i}"),
            Rule::SigmaPushforwardVanishes { sigmas, h_power } => {
                write!(f, "pr_1*(σ^{sigmas}·(1×H^{h_power})) = 0")
            }
            Rule::ThetaFactor { count } => write!(f, "{count} explicit factor(s) of p from θ"),
            Rule::RationalPairing { atom } => write!(f, "rational pairing with {atom}"),
            Rule::SplitRationalPairing { first, second } => {
                write!(f, "split rational pairing {first} / {second}")
            }
            Rule::ResidualVanishesModP { reason: ResidualReason::KNotLeading } => {
                write!(f, "residual vanishes mod p (k ≠ s)")
            }
            Rule::ResidualVanishesModP { reason: ResidualReason::HExponentBelowTop { exponent } } => {
                write!(f, "residual vanishes mod p (H^{exponent} below the top)")
            }
            Rule::ScalarValuation { v } => write!(f, "scalar has valuation {v}"),
            Rule::LeadingDegree => write!(f, "leading term deg(b_d)·e, valuation exactly 1"),
            Rule::LeadingGenerator => write!(f, "leading term deg(b^Y_dim Y)·e, valuation exactly 1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuleStep {
    pub rule: Rule,
    pub contribution: u64,
}

impl RuleStep {
    pub fn new(rule: Rule, contribution: u64) -> RuleStep {
        RuleStep { rule, contribution }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Zero { trace: Vec<RuleStep> },
    AtLeast { v: u64, trace: Vec<RuleStep> },
    Exactly { v: u64, trace: Vec<RuleStep> },
}

impl Verdict {
    pub fn trace(&self) -> &[RuleStep] {
        match self {
            Verdict::Zero { trace } | Verdict::AtLeast { trace, .. } | Verdict::Exactly { trace, .. } => trace,
        }
    }

    /// The guaranteed valuation; zero is `+inf`.
    pub fn valuation(&self) -> Valuation {
        match self {
            Verdict::Zero { .. } => Valuation::Infinite,
            Verdict::AtLeast { v, .. } | Verdict::Exactly { v, .. } => Valuation::Finite(*v),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero { .. })
    }

    /// Zero modulo the ideal generated by `p^2` and `p`·rational classes.
    pub fn negligible(&self) -> bool {
        self.valuation().is_at_least(2)
    }

    pub fn code(&self) -> String {
        match self {
            Verdict::Zero { .. } => "zero".into(),
            Verdict::AtLeast { v, .. } => format!(">={v}"),
            Verdict::Exactly { v, .. } => format!("={v}"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())?;
        let steps: Vec<String> = self.trace().iter().map(|s| s.rule.to_string()).collect();
        if !steps.is_empty() {
            write!(f, " [{}]", steps.join("; "))?;
        }
        Ok(())
    }
}

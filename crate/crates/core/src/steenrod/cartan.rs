use num_bigint::BigInt;
use num_integer::binomial;

use super::{steen_index_valid, PairingContext, SteenAtom, SteenProduct};
use crate::arith::{LocalInt, Prime};

/// A multiset of Steenrod indices `l_1 ≤ … ≤ l_r` with the number of
/// ordered compositions it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanTerm {
    pub parts: Vec<u64>,
    pub multiplicity: LocalInt,
}

/// Number of ordered compositions of `l` into `r` nonnegative parts.
pub fn ordered_composition_count(r: u32, l: u64) -> u128 {
    if r == 0 {
        return (l == 0) as u128;
    }
    binomial(l as u128 + r as u128 - 1, r as u128 - 1)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `S^l(σ^r) = Σ S^(l_1)(σ)·…·S^(l_r)(σ)`, keeping only compositions whose
/// parts are all Steenrod-valid, grouped into sorted multisets.
pub fn cartan_expand(r: u32, l: u64, p: Prime) -> Vec<CartanTerm> {
    let q = p.get() - 1;
    if r == 0 {
        return if l == 0 {
            vec![CartanTerm { parts: Vec::new(), multiplicity: LocalInt::one() }]
        } else {
            Vec::new()
        };
    }
    if !l.is_multiple_of(q) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(r as usize);
    partitions(l / q, r as usize, 0, &mut parts, &mut |units| {
        let scaled: Vec<u64> = units.iter().map(|u| u * q).collect();
        debug_assert!(scaled.iter().all(|&x| steen_index_valid(x as i64, p)));
        out.push(CartanTerm { multiplicity: arrangements(&scaled), parts: scaled });
    });
    out
}

/// Nondecreasing sequences of `len` parts, each at least `min`, summing to `total`.
fn partitions(total: u64, len: usize, min: u64, parts: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if len == 0 {
        if total == 0 {
            visit(parts);
        }
        return;
    }
    let mut v = min;
    while v * len as u64 <= total {
        parts.push(v);
        partitions(total - v, len - 1, v, parts, visit);
        parts.pop();
        v += 1;
    }
}

/// `r! / Π c_v!` over the multiplicities of a sorted multiset.
fn arrangements(sorted: &[u64]) -> LocalInt {
    let mut denom = BigInt::from(1);
    let mut run = 0u64;
    for (idx, v) in sorted.iter().enumerate() {
        run += 1;
        if idx + 1 == sorted.len() || sorted[idx + 1] != *v {
            denom *= factorial(run);
            run = 0;
        }
    }
    LocalInt::from(factorial(sorted.len() as u64) / denom)
}

/// Replaces every positive-index factor `S^l_σ` by `pθ_l + 1×S^l_H - S^l_H×1`
/// and expands. Equal factors are grouped, so each product carries the
/// corresponding multinomial coefficient.
pub fn substitute_dcmp(
    terms: &[CartanTerm],
    base: &[SteenAtom],
    context: PairingContext,
) -> Vec<SteenProduct> {
    let mut out = Vec::new();
    for term in terms {
        let mut atoms = base.to_vec();
        let mut groups: Vec<(u64, u64)> = Vec::new();
        for &v in &term.parts {
            if v == 0 {
                atoms.push(SteenAtom::SigmaFactor);
            } else if let Some(last) = groups.last_mut().filter(|g| g.0 == v) {
                last.1 += 1;
            } else {
                groups.push((v, 1));
            }
        }
        expand_groups(&groups, atoms, term.multiplicity.clone(), context, &mut out);
    }
    out
}

fn expand_groups(
    groups: &[(u64, u64)],
    atoms: Vec<SteenAtom>,
    scalar: LocalInt,
    context: PairingContext,
    out: &mut Vec<SteenProduct>,
) {
    let Some(&(v, c)) = groups.first() else {
        out.push(SteenProduct::new(atoms, scalar, context));
        return;
    };
    for thetas in 0..=c {
        for seconds in 0..=c - thetas {
            let thirds = c - thetas - seconds;
            let coeff = factorial(c) / (factorial(thetas) * factorial(seconds) * factorial(thirds));
            let mut coeff = LocalInt::from(coeff);
            if thirds % 2 == 1 {
                coeff = -coeff;
            }
            let mut next = atoms.clone();
            next.extend(std::iter::repeat_n(SteenAtom::Theta(v), thetas as usize));
            next.extend(std::iter::repeat_n(SteenAtom::SecondType(v), seconds as usize));
            next.extend(std::iter::repeat_n(SteenAtom::ThirdType(v), thirds as usize));
            expand_groups(&groups[1..], next, &scalar * &coeff, context, out);
        }
    }
}

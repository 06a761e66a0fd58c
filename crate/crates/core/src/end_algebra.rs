//! The endomorphism algebra `Λ^p` of the split motive and its rational part.
//!
//! Membership in the unital subalgebra generated by `pΛ^p` is tested as:
//! every entry is `p`-integral and all entries agree mod `p`.
//!
//! If `t = λ·1 + p·u` then `t_i ≡ λ` for all `i`. Conversely, if all
//! `t_i ≡ t_0 (mod p)` then `t = t_0·1 + (t - t_0·1)` and the second summand
//! lies in `pΛ^p`.

use std::fmt;

use rand::Rng;

use crate::arith::{LocalInt, Prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndTuple {
    entries: Vec<LocalInt>,
    p: Prime,
}

impl EndTuple {
    pub fn new(entries: Vec<LocalInt>, p: Prime) -> Result<EndTuple> {
        if entries.len() as u64 != p.get() {
            return Err(Error::TupleLength { got: entries.len(), p: p.get() });
        }
        for x in &entries {
            x.check_local(p)?;
        }
        Ok(EndTuple { entries, p })
    }

    pub fn from_ints(entries: &[i64], p: Prime) -> Result<EndTuple> {
        EndTuple::new(entries.iter().map(|&x| LocalInt::from(x)).collect(), p)
    }

    pub fn scalar(lambda: LocalInt, p: Prime) -> Result<EndTuple> {
        EndTuple::new(vec![lambda; p.get() as usize], p)
    }

    pub fn identity(p: Prime) -> EndTuple {
        EndTuple::scalar(LocalInt::one(), p).expect("1 is local")
    }

    pub fn entries(&self) -> &[LocalInt] {
        &self.entries
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Multiplicity of the endomorphism: the action on the bottom piece.
    pub fn multiplicity(&self) -> &LocalInt {
        &self.entries[0]
    }

    fn check_same(&self, other: &EndTuple) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ParamsMismatch);
        }
        Ok(())
    }

    /// Composition, which is the entrywise product.
    pub fn mul(&self, other: &EndTuple) -> Result<EndTuple> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect();
        Ok(EndTuple { entries, p: self.p })
    }

    pub fn add(&self, other: &EndTuple) -> Result<EndTuple> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(EndTuple { entries, p: self.p })
    }

    pub fn sub(&self, other: &EndTuple) -> Result<EndTuple> {
        self.add(&other.scale(&-LocalInt::one()))
    }

    pub fn scale(&self, s: &LocalInt) -> EndTuple {
        let entries = self.entries.iter().map(|a| a * s).collect();
        EndTuple { entries, p: self.p }
    }

    pub fn is_rational(&self) -> bool {
        let Ok(first) = self.entries[0].reduce_mod_p(self.p) else {
            return false;
        };
        self.entries
            .iter()
            .all(|x| x.reduce_mod_p(self.p).map(|r| r == first).unwrap_or(false))
    }

    pub fn is_idempotent(&self) -> bool {
        self.entries.iter().all(|x| &(x * x) == x)
    }

    pub fn invert(&self) -> Result<EndTuple> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(index, x)| {
                x.inv_unit(self.p)
                    .map_err(|_| Error::NotInvertible { index, value: x.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EndTuple { entries, p: self.p })
    }

    /// `p·t` is rational for any integral `t`.
    pub fn p_scale_is_rational(&self) -> bool {
        self.scale(&LocalInt::from(self.p.get())).is_rational()
    }

    /// A random rational tuple `λ·1 + p·u` with entries of small height.
    pub fn sample_rational<R: Rng + ?Sized>(rng: &mut R, p: Prime, height: i64) -> EndTuple {
        let lambda = sample_local(rng, p, height);
        let pp = LocalInt::from(p.get());
        let entries = (0..p.get())
            .map(|_| &lambda + &(&pp * &sample_local(rng, p, height)))
            .collect();
        EndTuple { entries, p }
    }

    /// A random rational tuple with multiplicity 1.
    pub fn sample_unit_multiplicity<R: Rng + ?Sized>(
        rng: &mut R,
        p: Prime,
        height: i64,
    ) -> EndTuple {
        let pp = LocalInt::from(p.get());
        let mut entries: Vec<LocalInt> = (0..p.get())
            .map(|_| &LocalInt::one() + &(&pp * &sample_local(rng, p, height)))
            .collect();
        entries[0] = LocalInt::one();
        EndTuple { entries, p }
    }
}

/// A random element of `Z_(p)` with numerator and denominator bounded by `height`.
pub fn sample_local<R: Rng + ?Sized>(rng: &mut R, p: Prime, height: i64) -> LocalInt {
    let height = height.max(1);
    let numer = rng.gen_range(-height..=height);
    loop {
        let denom = rng.gen_range(1..=height);
        if !(denom as u64).is_multiple_of(p.get()) {
            return LocalInt::new(numer, denom).expect("nonzero denominator");
        }
    }
}

impl fmt::Display for EndTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rational_membership() {
        assert!(EndTuple::from_ints(&[1, 4, -5], p(3)).unwrap().is_rational());
        assert!(!EndTuple::from_ints(&[1, 2, 1], p(3)).unwrap().is_rational());
        let lam = LocalInt::new(7, 2).unwrap();
        assert!(EndTuple::scalar(lam, p(5)).unwrap().is_rational());
    }

    #[test]
    fn inverses() {
        let t = EndTuple::from_ints(&[1, 4, -5], p(3)).unwrap();
        let inv = t.invert().unwrap();
        let expected = EndTuple::new(
            vec![LocalInt::one(), LocalInt::new(1, 4).unwrap(), LocalInt::new(-1, 5).unwrap()],
            p(3),
        )
        .unwrap();
        assert_eq!(inv, expected);
        assert!(inv.is_rational());
        assert_eq!(EndTuple::identity(p(5)).invert().unwrap(), EndTuple::identity(p(5)));
        let bad = EndTuple::from_ints(&[1, 3, 1], p(3)).unwrap();
        assert!(matches!(bad.invert(), Err(Error::NotInvertible { index: 1, .. })));
    }

    #[test]
    fn p_scaling() {
        assert!(EndTuple::from_ints(&[0, 1, 2], p(3)).unwrap().p_scale_is_rational());
        assert!(EndTuple::identity(p(7)).p_scale_is_rational());
        assert!(EndTuple::from_ints(&[1, 2, 3, 4, 0], p(5)).unwrap().p_scale_is_rational());
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(matches!(
            EndTuple::from_ints(&[1, 2], p(3)),
            Err(Error::TupleLength { got: 2, p: 3 })
        ));
    }

    #[test]
    fn local_entries_only() {
        let bad = vec![LocalInt::one(), LocalInt::new(1, 3).unwrap(), LocalInt::one()];
        assert!(EndTuple::new(bad, p(3)).is_err());
    }

    #[test]
    fn samplers_land_in_subalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 5, 7] {
            for _ in 0..50 {
                assert!(EndTuple::sample_rational(&mut rng, p(q), 20).is_rational());
                let u = EndTuple::sample_unit_multiplicity(&mut rng, p(q), 20);
                assert!(u.is_rational());
                assert!(u.multiplicity().is_one());
            }
        }
    }

    #[test]
    fn display() {
        let t = EndTuple::new(
            vec![LocalInt::one(), LocalInt::new(1, 4).unwrap(), LocalInt::from(-5i64)],
            p(3),
        )
        .unwrap();
        assert_eq!(t.to_string(), "(1, 1/4, -5)");
    }
}

//! Integer chains over a distinguished basis.
//!
//! A chain is a finitely supported integer combination of basis elements, all
//! of one degree. Zero coefficients are never stored, so structural equality
//! is equality of chains.

use std::collections::BTreeMap;
use std::fmt;

use crate::label::Label;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    degree: usize,
    coeffs: BTreeMap<Label, i64>,
}

impl Chain {
    pub fn zero(degree: usize) -> Chain {
        Chain { degree, coeffs: BTreeMap::new() }
    }

    pub fn single(label: Label, degree: usize) -> Chain {
        let mut c = Chain::zero(degree);
        c.add_term(label, 1);
        c
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Label, i64)>) -> Chain {
        let mut c = Chain::zero(degree);
        for (l, k) in terms {
            c.add_term(l, k);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, label: &Label) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, label: Label, k: i64) {
        if k == 0 {
            return;
        }
        let entry = self.coeffs.entry(label).or_insert(0);
        *entry += k;
        if *entry == 0 {
            let key = self
                .coeffs
                .iter()
                .find(|(_, v)| **v == 0)
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.coeffs.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, i64)> {
        self.coeffs.iter().map(|(l, k)| (l, *k))
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.coeffs.keys()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree, "chain degree mismatch in add");
        let mut out = self.clone();
        for (l, k) in other.iter() {
            out.add_term(l.clone(), k);
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree, "chain degree mismatch in sub");
        let mut out = self.clone();
        for (l, k) in other.iter() {
            out.add_term(l.clone(), -k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Chain {
        if k == 0 {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(l, c)| (l.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> Chain {
        self.scale(-1)
    }

    /// The positive part of the sign split: keep positive coefficients.
    pub fn positive_part(&self) -> Chain {
        Chain {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, k)| **k > 0)
                .map(|(l, k)| (l.clone(), *k))
                .collect(),
        }
    }

    /// The negative part of the sign split, stored with positive coefficients,
    /// so that `self = positive_part - negative_part`.
    pub fn negative_part(&self) -> Chain {
        Chain {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, k)| **k < 0)
                .map(|(l, k)| (l.clone(), -*k))
                .collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|k| *k > 0)
    }

    pub fn max_coeff(&self) -> i64 {
        self.coeffs.values().copied().max().unwrap_or(0)
    }

    /// Relabel every term through `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&Label) -> Label) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (l, k) in self.iter() {
            out.add_term(f(l), k);
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (l, k)) in self.iter().enumerate() {
            if i == 0 {
                if k < 0 {
                    write!(f, "-")?;
                }
            } else if k < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = k.abs();
            if a != 1 {
                write!(f, "{a}·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_split_recombines() {
        let a = Label::name("a");
        let b = Label::name("b");
        let c = Chain::from_terms(1, [(a, 2), (b, -3)]);
        assert_eq!(c.positive_part().sub(&c.negative_part()), c);
        assert!(c.positive_part().is_nonnegative());
        assert!(c.negative_part().is_nonnegative());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = Label::name("a");
        let mut c = Chain::zero(0);
        c.add_term(a.clone(), 2);
        c.add_term(a.clone(), -2);
        assert!(c.is_zero());
        assert_eq!(c, Chain::zero(0));
    }
}

//! Basis-element identifiers.
//!
//! Constructions on complexes (tensor, suspension, wedge, pushout) mint new
//! basis elements out of old ones. Labels keep that provenance structural, so
//! generated ids never collide and render in the usual notation: `[x]` for a
//! suspended element, `x⊗y` for a tensor pair, `2:x` for the third wedge
//! segment. The display form is injective and `parse` inverts it, which is
//! what makes JSON round-trips exact.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// An atomic name supplied by the user or by a corpus constructor.
    Name(String),
    /// `[x]` — the suspended copy of `x`.
    Susp(Box<Label>),
    /// `x⊗y` — a tensor pair.
    Tensor(Box<Label>, Box<Label>),
    /// `k:x` — element `x` relabelled into wedge/pushout segment `k`.
    Seg(u32, Box<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Label {
        Label::Name(s.into())
    }

    pub fn susp(inner: Label) -> Label {
        Label::Susp(Box::new(inner))
    }

    pub fn tensor(left: Label, right: Label) -> Label {
        Label::Tensor(Box::new(left), Box::new(right))
    }

    pub fn seg(k: u32, inner: Label) -> Label {
        Label::Seg(k, Box::new(inner))
    }

    /// Characters that cannot appear in an atomic name.
    const DELIMITERS: &'static [char] = &['⊗', '(', ')', '[', ']', ':'];

    pub fn valid_name(s: &str) -> bool {
        !s.is_empty() && !s.chars().any(|c| Self::DELIMITERS.contains(&c) || c.is_whitespace())
    }

    /// Parse the display form back into a structured label.
    pub fn parse(input: &str) -> Result<Label> {
        let chars: Vec<char> = input.chars().collect();
        let mut pos = 0usize;
        let label = parse_label(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::LabelSyntax(format!(
                "trailing input at position {pos} in {input:?}"
            )));
        }
        Ok(label)
    }
}

fn parse_label(chars: &[char], pos: &mut usize) -> Result<Label> {
    let mut acc = parse_term(chars, pos)?;
    while *pos < chars.len() && chars[*pos] == '⊗' {
        *pos += 1;
        let rhs = parse_term(chars, pos)?;
        acc = Label::tensor(acc, rhs);
    }
    Ok(acc)
}

fn parse_term(chars: &[char], pos: &mut usize) -> Result<Label> {
    if *pos >= chars.len() {
        return Err(Error::LabelSyntax("unexpected end of label".into()));
    }
    match chars[*pos] {
        '(' => {
            *pos += 1;
            let inner = parse_label(chars, pos)?;
            expect(chars, pos, ')')?;
            Ok(inner)
        }
        '[' => {
            *pos += 1;
            let inner = parse_label(chars, pos)?;
            expect(chars, pos, ']')?;
            Ok(Label::susp(inner))
        }
        c if c.is_ascii_digit() => {
            // Either a segment tag `k:...` or a plain numeric name.
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos < chars.len() && chars[*pos] == ':' {
                let k: u32 = chars[start..*pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::LabelSyntax("segment index overflow".into()))?;
                *pos += 1;
                let inner = parse_seg_body(chars, pos)?;
                Ok(Label::seg(k, inner))
            } else {
                *pos = start;
                parse_name(chars, pos)
            }
        }
        _ => parse_name(chars, pos),
    }
}

fn parse_seg_body(chars: &[char], pos: &mut usize) -> Result<Label> {
    // A segment body is a term or a nested segment, never a bare tensor
    // (tensors under a segment are emitted parenthesised).
    if *pos < chars.len() && chars[*pos].is_ascii_digit() {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos < chars.len() && chars[*pos] == ':' {
            let k: u32 = chars[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::LabelSyntax("segment index overflow".into()))?;
            *pos += 1;
            return Ok(Label::seg(k, parse_seg_body(chars, pos)?));
        }
        *pos = start;
    }
    parse_term(chars, pos)
}

fn parse_name(chars: &[char], pos: &mut usize) -> Result<Label> {
    let start = *pos;
    while *pos < chars.len()
        && !Label::DELIMITERS.contains(&chars[*pos])
        && !chars[*pos].is_whitespace()
    {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::LabelSyntax(format!(
            "expected a name at position {start}"
        )));
    }
    Ok(Label::Name(chars[start..*pos].iter().collect()))
}

fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<()> {
    if *pos < chars.len() && chars[*pos] == c {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::LabelSyntax(format!("expected {c:?} at position {pos}", pos = *pos)))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Name(s) => write!(f, "{s}"),
            Label::Susp(x) => write!(f, "[{x}]"),
            Label::Tensor(x, y) => {
                write_operand(f, x)?;
                write!(f, "⊗")?;
                write_operand(f, y)
            }
            Label::Seg(k, x) => {
                write!(f, "{k}:")?;
                match **x {
                    Label::Tensor(..) => write!(f, "({x})"),
                    _ => write!(f, "{x}"),
                }
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, x: &Label) -> fmt::Result {
    match x {
        Label::Tensor(..) | Label::Seg(..) => write!(f, "({x})"),
        _ => write!(f, "{x}"),
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Label, D::Error> {
        let s = String::deserialize(deserializer)?;
        Label::parse(&s).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(l: &Label) {
        let shown = l.to_string();
        let back = Label::parse(&shown).unwrap();
        assert_eq!(&back, l, "display {shown:?} did not parse back");
    }

    #[test]
    fn display_parse_roundtrip() {
        let v0 = Label::name("v0");
        let e = Label::name("e");
        let cases = vec![
            v0.clone(),
            Label::susp(e.clone()),
            Label::susp(Label::susp(v0.clone())),
            Label::tensor(e.clone(), v0.clone()),
            Label::tensor(Label::tensor(e.clone(), v0.clone()), e.clone()),
            Label::tensor(e.clone(), Label::tensor(v0.clone(), e.clone())),
            Label::seg(1, Label::susp(v0.clone())),
            Label::seg(2, Label::seg(1, e.clone())),
            Label::seg(0, Label::tensor(e.clone(), e.clone())),
            Label::tensor(Label::seg(1, v0.clone()), Label::susp(e.clone())),
            Label::name("12"),
        ];
        for l in &cases {
            roundtrip(l);
        }
    }

    #[test]
    fn rebracketing_is_unambiguous() {
        let a = Label::name("a");
        let b = Label::name("b");
        let c = Label::name("c");
        let left = Label::tensor(Label::tensor(a.clone(), b.clone()), c.clone());
        let right = Label::tensor(a, Label::tensor(b, c));
        assert_ne!(left.to_string(), right.to_string());
        roundtrip(&left);
        roundtrip(&right);
    }

    #[test]
    fn numeric_name_vs_segment() {
        assert_eq!(Label::parse("7").unwrap(), Label::name("7"));
        assert_eq!(
            Label::parse("7:x").unwrap(),
            Label::seg(7, Label::name("x"))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(Label::parse("").is_err());
        assert!(Label::parse("a⊗").is_err());
        assert!(Label::parse("[a").is_err());
        assert!(Label::parse("a]").is_err());
    }
}

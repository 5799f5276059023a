//! Canonical text forms.
//!
//! ```text
//! step [0/1,1/2,1/1] [1/1,3/1]
//! pl [0/1,1/1] [0/1,2/1]
//! seq [1..1=3/1,2..2=-5/1] zero        (also: const c, affine a b; items s..e=a*n+b)
//! sum 0:step [0/1,1/1] [1/1] ; 3:step [0/1,1/2,1/1] [0/1,1/1]
//! ```

use num_bigint::BigInt;

use super::pl::PlFn;
use super::rational::{parse_rat, Rational};
use super::seq::{Line, Segment, Tail, TailSeq};
use super::step::StepFn;
use super::sum::DirectSum;
use super::Element;
use crate::error::{Error, Result};

pub(super) fn format(e: &Element) -> String {
    match e {
        Element::Step(f) => f.to_text(),
        Element::Pl(f) => f.to_text(),
        Element::Seq(s) => s.to_text(),
        Element::Sum(s) => {
            let parts: Vec<String> = s.components().iter().map(|(id, f)| format!("{id}:{}", f.to_text())).collect();
            if parts.is_empty() { "sum".into() } else { format!("sum {}", parts.join(" ; ")) }
        }
    }
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Splits `[a,b,c] rest` into the bracket items and the remainder.
fn bracket(s: &str) -> Result<(Vec<&str>, &str)> {
    let s = s.trim_start();
    let body = s.strip_prefix('[').ok_or_else(|| err(format!("expected `[` in `{s}`")))?;
    let close = body.find(']').ok_or_else(|| err("missing `]`"))?;
    let inner = body[..close].trim();
    let items = if inner.is_empty() { Vec::new() } else { inner.split(',').map(str::trim).collect() };
    Ok((items, &body[close + 1..]))
}

fn rats(items: &[&str]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rat(s)).collect()
}

fn parse_step(rest: &str) -> Result<StepFn> {
    let (b, rest) = bracket(rest)?;
    let (v, rest) = bracket(rest)?;
    if !rest.trim().is_empty() {
        return Err(err(format!("trailing text `{}`", rest.trim())));
    }
    StepFn::new(rats(&b)?, rats(&v)?)
}

fn parse_pl(rest: &str) -> Result<PlFn> {
    let (x, rest) = bracket(rest)?;
    let (y, rest) = bracket(rest)?;
    if !rest.trim().is_empty() {
        return Err(err(format!("trailing text `{}`", rest.trim())));
    }
    PlFn::new(rats(&x)?, rats(&y)?)
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| err(format!("bad index `{s}`")))
}

fn parse_line(s: &str) -> Result<Line> {
    match s.split_once("*n+") {
        Some((a, b)) => Ok(Line::new(parse_rat(a)?, parse_rat(b)?)),
        None => Ok(Line::constant(parse_rat(s)?)),
    }
}

fn parse_seq(rest: &str) -> Result<TailSeq> {
    let (items, rest) = bracket(rest)?;
    let mut segs = Vec::new();
    let mut next = BigInt::from(1);
    for item in items {
        let seg = match item.split_once('=') {
            Some((range, line)) => {
                let (s, e) = range.split_once("..").ok_or_else(|| err(format!("bad range `{range}`")))?;
                Segment { start: parse_int(s)?, end: parse_int(e)?, line: parse_line(line)? }
            }
            None => Segment { start: next.clone(), end: next.clone(), line: Line::constant(parse_rat(item)?) },
        };
        next = &seg.end + 1;
        segs.push(seg);
    }
    let words: Vec<&str> = rest.split_whitespace().collect();
    let tail = match words.as_slice() {
        ["zero"] => Tail::Zero,
        ["const", c] => Tail::Const(parse_rat(c)?),
        ["affine", a, b] => Tail::Affine(parse_rat(a)?, parse_rat(b)?),
        _ => return Err(err(format!("bad tail `{}`", rest.trim()))),
    };
    TailSeq::new(segs, tail.line())
}

fn parse_sum(rest: &str) -> Result<DirectSum> {
    let mut comps = Vec::new();
    for part in rest.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (id, body) = part.split_once(':').ok_or_else(|| err(format!("bad component `{part}`")))?;
        let id: u32 = id.trim().parse().map_err(|_| err(format!("bad component id `{id}`")))?;
        let body = body.trim().strip_prefix("step").ok_or_else(|| err("direct-sum components are step functions"))?;
        if comps.iter().any(|(i, _)| *i == id) {
            return Err(err(format!("component {id} repeated")));
        }
        comps.push((id, parse_step(body)?));
    }
    Ok(DirectSum::new(comps))
}

pub(super) fn parse(s: &str) -> Result<Element> {
    let s = s.trim();
    let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    match head {
        "step" => parse_step(rest).map(Element::Step),
        "pl" => parse_pl(rest).map(Element::Pl),
        "seq" => parse_seq(rest).map(Element::Seq),
        "sum" => parse_sum(rest).map(Element::Sum),
        _ => Err(err(format!("unknown element kind `{head}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "step [0/1,1/2,1/1] [1/1,3/1]",
            "pl [0/1,1/2,1/1] [0/1,1/1,1/1]",
            "seq [1..1=3/1,2..2=-5/1] zero",
            "seq [1..4=1/1*n+0/1] const 5/1",
            "seq [] affine 1/1 0/1",
            "sum 0:step [0/1,1/1] [1/1] ; 3:step [0/1,1/2,1/1] [0/1,1/1]",
            "sum",
        ] {
            let e = Element::parse(s).unwrap();
            assert_eq!(e.to_text(), s);
        }
    }

    #[test]
    fn shorthand_prefix_canonicalizes() {
        let e = Element::parse("seq [3,-5,0] zero").unwrap();
        assert_eq!(e.to_text(), "seq [1..1=3/1,2..2=-5/1] zero");
    }

    #[test]
    fn rejects_garbage() {
        assert!(Element::parse("step [0,1] [1,2]").is_err());
        assert!(Element::parse("wave [0,1]").is_err());
        assert!(Element::parse("seq [1..2=1] bounded").is_err());
        assert!(Element::parse("seq [2..3=1] zero").is_err());
    }
}

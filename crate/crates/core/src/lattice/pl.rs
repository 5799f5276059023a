use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::rational::{cmp_q, fmt_rat, Rational, Small};
use super::region::Region;
use crate::error::{Error, Result};

/// A continuous piecewise-linear function on `[0, 1]` through nodes `(xs[j], ys[j])`.
///
/// Canonical form: `xs` runs strictly from 0 to 1 and no interior node is collinear
/// with its two neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlFn {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

fn collinear(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, x2: &Rational, y2: &Rational) -> bool {
    (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)
}

/// Value at `t` of the line through `(x0, y0)` and `(x1, y1)`.
fn lerp(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, t: &Rational) -> Rational {
    if y0 == y1 {
        return y0.clone();
    }
    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
}

impl PlFn {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidElement("piecewise-linear function needs ≥ 2 nodes, one value each".into()));
        }
        if !xs[0].is_zero() || !xs[xs.len() - 1].is_one() {
            return Err(Error::InvalidElement("piecewise-linear nodes must start at 0 and end at 1".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidElement("piecewise-linear nodes must be strictly increasing".into()));
        }
        Ok(Self::canonical(xs, ys))
    }

    pub fn from_nodes(nodes: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(nodes.iter().map(|n| n.0.clone()).collect(), nodes.iter().map(|n| n.1.clone()).collect())
    }

    fn canonical(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        let mut ox: Vec<Rational> = Vec::with_capacity(xs.len());
        let mut oy: Vec<Rational> = Vec::with_capacity(ys.len());
        for (x, y) in xs.into_iter().zip(ys) {
            if let Some(lx) = ox.last() {
                if *lx == x {
                    continue;
                }
            }
            while ox.len() >= 2 {
                let k = ox.len();
                if collinear(&ox[k - 2], &oy[k - 2], &ox[k - 1], &oy[k - 1], &x, &y) {
                    ox.pop();
                    oy.pop();
                } else {
                    break;
                }
            }
            ox.push(x);
            oy.push(y);
        }
        PlFn { xs: ox, ys: oy }
    }

    pub fn constant(c: Rational) -> Self {
        PlFn { xs: vec![Rational::zero(), Rational::one()], ys: vec![c.clone(), c] }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `t ↦ t`.
    pub fn identity() -> Self {
        PlFn { xs: vec![Rational::zero(), Rational::one()], ys: vec![Rational::zero(), Rational::one()] }
    }

    /// Tent of height `h` supported on `[a, b]` with its peak at the midpoint.
    pub fn tent(a: &Rational, b: &Rational, h: &Rational) -> Result<Self> {
        if a >= b || *a < Rational::zero() || *b > Rational::one() {
            return Err(Error::InvalidElement(format!("bad tent support [{}, {}]", fmt_rat(a), fmt_rat(b))));
        }
        let m = (a + b) / Rational::from_integer(2.into());
        if h.is_zero() {
            return Ok(Self::zero());
        }
        let mut xs = Vec::with_capacity(5);
        let mut ys = Vec::with_capacity(5);
        if !a.is_zero() {
            xs.push(Rational::zero());
            ys.push(Rational::zero());
        }
        xs.extend([a.clone(), m, b.clone()]);
        ys.extend([Rational::zero(), h.clone(), Rational::zero()]);
        if !b.is_one() {
            xs.push(Rational::one());
            ys.push(Rational::zero());
        }
        // no three consecutive nodes are collinear once h ≠ 0
        Ok(PlFn { xs, ys })
    }

    /// Hat of height 1 peaking at `c` with half-width `w`, clipped to `[0, 1]`.
    pub fn hat(c: &Rational, w: &Rational) -> Self {
        let l = c - w;
        let r = c + w;
        let mut nodes = Vec::new();
        let at = |t: &Rational| -> Rational {
            let d = (t - c).abs();
            if d >= *w { Rational::zero() } else { Rational::one() - d / w }
        };
        nodes.push((Rational::zero(), at(&Rational::zero())));
        for t in [l, c.clone(), r] {
            if t > Rational::zero() && t < Rational::one() {
                nodes.push((t.clone(), at(&t)));
            }
        }
        nodes.push((Rational::one(), at(&Rational::one())));
        Self::from_nodes(&nodes).expect("hat nodes are increasing")
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(self.ys.iter())
    }

    /// `((x0, y0), (x1, y1))` for each affine piece.
    pub fn pieces(&self) -> impl Iterator<Item = ((&Rational, &Rational), (&Rational, &Rational))> {
        (0..self.xs.len() - 1).map(move |j| ((&self.xs[j], &self.ys[j]), (&self.xs[j + 1], &self.ys[j + 1])))
    }

    pub fn is_zero(&self) -> bool {
        self.ys.iter().all(|y| y.is_zero())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        match self.xs.binary_search_by(|x| cmp_q(x, t)) {
            Ok(i) => self.ys[i].clone(),
            Err(0) => self.ys[0].clone(),
            Err(i) if i >= self.xs.len() => self.ys[self.ys.len() - 1].clone(),
            Err(i) => lerp(&self.xs[i - 1], &self.ys[i - 1], &self.xs[i], &self.ys[i], t),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::canonical(self.xs.clone(), self.ys.iter().map(|y| y * c).collect())
    }

    fn merged_xs(&self, other: &PlFn) -> Vec<Rational> {
        let mut xs: Vec<Rational> = Vec::with_capacity(self.xs.len() + other.xs.len());
        let (mut i, mut j) = (0, 0);
        while i < self.xs.len() || j < other.xs.len() {
            let next = match (self.xs.get(i), other.xs.get(j)) {
                (Some(a), Some(b)) => match cmp_q(a, b) {
                    Ordering::Less => {
                        i += 1;
                        a
                    }
                    Ordering::Greater => {
                        j += 1;
                        b
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        a
                    }
                },
                (Some(a), None) => {
                    i += 1;
                    a
                }
                (None, Some(b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            xs.push(next.clone());
        }
        xs
    }

    /// Smallest `[lo, hi]` outside which the function vanishes; `None` for zero.
    pub(crate) fn support_hull(&self) -> Option<(Rational, Rational)> {
        let first = self.ys.iter().position(|y| !y.is_zero())?;
        let last = self.ys.iter().rposition(|y| !y.is_zero())?;
        Some((self.xs[first.saturating_sub(1)].clone(), self.xs[(last + 1).min(self.xs.len() - 1)].clone()))
    }

    /// Nodes of `min(self, other)` on `[lo, hi]`: the merged node set with crossings,
    /// collinear nodes kept.
    pub(crate) fn min_nodes(&self, other: &PlFn, lo: &Rational, hi: &Rational) -> (Vec<Rational>, Vec<Rational>) {
        let mut pts: Vec<(Rational, Rational, Rational)> = vec![(lo.clone(), self.eval(lo), other.eval(lo))];
        let mut i = self.xs.partition_point(|x| x <= lo);
        let mut j = other.xs.partition_point(|x| x <= lo);
        loop {
            let p = self.xs.get(i).filter(|x| *x < hi);
            let q = other.xs.get(j).filter(|x| *x < hi);
            let next = match (p, q) {
                (None, None) => break,
                (Some(p), None) => {
                    i += 1;
                    (p.clone(), self.ys[i - 1].clone(), other.eval(p))
                }
                (None, Some(q)) => {
                    j += 1;
                    (q.clone(), self.eval(q), other.ys[j - 1].clone())
                }
                (Some(p), Some(q)) => match cmp_q(p, q) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (p.clone(), self.ys[i - 1].clone(), other.ys[j - 1].clone())
                    }
                    Ordering::Less => {
                        i += 1;
                        (p.clone(), self.ys[i - 1].clone(), lerp(&other.xs[j - 1], &other.ys[j - 1], q, &other.ys[j], p))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (q.clone(), lerp(&self.xs[i - 1], &self.ys[i - 1], p, &self.ys[i], q), other.ys[j - 1].clone())
                    }
                },
            };
            pts.push(next);
        }
        if hi > lo {
            pts.push((hi.clone(), self.eval(hi), other.eval(hi)));
        }
        let (mut xs, mut ms) = (Vec::with_capacity(2 * pts.len()), Vec::with_capacity(2 * pts.len()));
        for k in 0..pts.len() {
            let (x, a, b) = &pts[k];
            let d1 = a - b;
            if k > 0 {
                let (x0, a0, b0) = &pts[k - 1];
                let d0 = a0 - b0;
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                    let t = x0 + (x - x0) * &d0 / (&d0 - &d1);
                    ms.push(lerp(x0, a0, x, a, &t));
                    xs.push(t);
                }
            }
            xs.push(x.clone());
            ms.push(if d1.is_positive() { b.clone() } else { a.clone() });
        }
        (xs, ms)
    }

    /// Pointwise `f(self, other)`. With `split_crossings`, nodes are inserted where the
    /// two functions cross so that min/max stay piecewise linear on the node set.
    pub fn zip_with(&self, other: &PlFn, split_crossings: bool, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let xs = self.merged_xs(other);
        let a: Vec<Rational> = xs.iter().map(|t| self.eval(t)).collect();
        let b: Vec<Rational> = xs.iter().map(|t| other.eval(t)).collect();
        let mut ox = Vec::with_capacity(xs.len() * 2);
        let mut oy = Vec::with_capacity(xs.len() * 2);
        for k in 0..xs.len() {
            if split_crossings && k > 0 {
                let d0 = &a[k - 1] - &b[k - 1];
                let d1 = &a[k] - &b[k];
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                    // d is affine on [x_{k-1}, x_k]; its root is interior.
                    let t = &xs[k - 1] + (&xs[k] - &xs[k - 1]) * &d0 / (&d0 - &d1);
                    let v = lerp(&xs[k - 1], &a[k - 1], &xs[k], &a[k], &t);
                    ox.push(t);
                    oy.push(f(&v, &v));
                }
            }
            ox.push(xs[k].clone());
            oy.push(f(&a[k], &b[k]));
        }
        Self::canonical(ox, oy)
    }

    /// Maps each node value; nodes are first split where the function crosses 0 so that
    /// sign-sensitive maps (like `abs`) stay exact.
    pub fn map_split_zero(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        self.zip_with(&PlFn::zero(), true, |v, _| f(v))
    }

    /// `{t : |f(t)| > ε}`, endpoints solved exactly on each piece.
    pub fn superlevel_set(&self, eps: &Rational) -> Region {
        let mut out = Vec::new();
        for ((x0, y0), (x1, y1)) in self.pieces() {
            for sign in [1i64, -1] {
                let s = Rational::from_integer(sign.into());
                // {t ∈ [x0,x1] : s·f(t) > ε}
                let g0 = &s * y0 - eps;
                let g1 = &s * y1 - eps;
                let pos0 = g0.is_positive();
                let pos1 = g1.is_positive();
                if !pos0 && !pos1 {
                    continue;
                }
                if pos0 && pos1 {
                    out.push((x0.clone(), x1.clone()));
                    continue;
                }
                let root = x0 + (x1 - x0) * &g0 / (&g0 - &g1);
                if pos0 {
                    out.push((x0.clone(), root));
                } else {
                    out.push((root, x1.clone()));
                }
            }
        }
        out.sort();
        Region::from_sorted(out)
    }

    /// `μ{t : |f(t)| > ε}` for `ε > 0`, without building the region.
    pub fn level_measure(&self, eps: &Rational) -> Rational {
        if let Some(m) = self.level_measure_small(eps) {
            return m;
        }
        let mut total = Rational::zero();
        // length of {g > eps} on a piece where g is affine from g0 to g1
        let above = |x0: &Rational, x1: &Rational, g0: &Rational, g1: &Rational| -> Option<Rational> {
            match (g0 > eps, g1 > eps) {
                (true, true) => Some(x1 - x0),
                (true, false) => Some((x1 - x0) * (g0 - eps) / (g0 - g1)),
                (false, true) => Some((x1 - x0) * (g1 - eps) / (g1 - g0)),
                (false, false) => None,
            }
        };
        for ((x0, y0), (x1, y1)) in self.pieces() {
            if y0.is_zero() && y1.is_zero() {
                continue;
            }
            if !y0.is_negative() || !y1.is_negative() {
                if let Some(l) = above(x0, x1, y0, y1) {
                    total += l;
                }
            }
            if y0.is_negative() || y1.is_negative() {
                if let Some(l) = above(x0, x1, &-y0, &-y1) {
                    total += l;
                }
            }
        }
        total
    }

    /// [`PlFn::level_measure`] in machine arithmetic; `None` on overflow.
    fn level_measure_small(&self, eps: &Rational) -> Option<Rational> {
        let e = Small::of(eps)?;
        let above = |x0: Small, x1: Small, g0: Small, g1: Small| -> Option<Small> {
            match (g0.gt(e)?, g1.gt(e)?) {
                (true, true) => x1.sub(x0),
                (true, false) => x1.sub(x0)?.mul(g0.sub(e)?)?.div(g0.sub(g1)?),
                (false, true) => x1.sub(x0)?.mul(g1.sub(e)?)?.div(g1.sub(g0)?),
                (false, false) => Some(Small::ZERO),
            }
        };
        let mut total = Small::ZERO;
        let mut prev = (Small::of(&self.xs[0])?, Small::of(&self.ys[0])?);
        for k in 1..self.xs.len() {
            let (x0, y0) = prev;
            let (x1, y1) = (Small::of(&self.xs[k])?, Small::of(&self.ys[k])?);
            prev = (x1, y1);
            if y0.is_zero() && y1.is_zero() {
                continue;
            }
            if !y0.is_negative() || !y1.is_negative() {
                total = total.add(above(x0, x1, y0, y1)?)?;
            }
            if y0.is_negative() || y1.is_negative() {
                total = total.add(above(x0, x1, y0.neg(), y1.neg())?)?;
            }
        }
        Some(total.to_rational())
    }

    /// Largest absolute slope; for functions vanishing at 0 this bounds `|f(t)| ≤ L·t`.
    pub fn lipschitz(&self) -> Rational {
        self.pieces().map(|((x0, y0), (x1, y1))| ((y1 - y0) / (x1 - x0)).abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_text(&self) -> String {
        let x: Vec<String> = self.xs.iter().map(fmt_rat).collect();
        let y: Vec<String> = self.ys.iter().map(fmt_rat).collect();
        format!("pl [{}] [{}]", x.join(","), y.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{int, rat};

    #[test]
    fn canonical_drops_collinear() {
        let f = PlFn::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![int(0), int(1), int(2)]).unwrap();
        assert_eq!(f.xs().len(), 2);
        assert_eq!(f.eval(&rat(1, 4)), rat(1, 2));
    }

    #[test]
    fn meet_inserts_crossing() {
        let ramp = PlFn::new(vec![rat(0, 1), rat(1, 1)], vec![int(0), int(2)]).unwrap();
        let m = ramp.zip_with(&PlFn::one(), true, |a, b| a.min(b).clone());
        assert_eq!(m.xs(), &[rat(0, 1), rat(1, 2), rat(1, 1)]);
        assert_eq!(m.ys(), &[int(0), int(1), int(1)]);
    }

    #[test]
    fn superlevel_of_identity() {
        let r = PlFn::identity().superlevel_set(&rat(1, 2));
        assert_eq!(r.measure(), rat(1, 2));
    }

    #[test]
    fn tent_and_hat() {
        let t = PlFn::tent(&rat(1, 2), &rat(1, 1), &int(1)).unwrap();
        assert_eq!(t.eval(&rat(3, 4)), int(1));
        assert_eq!(t.ys().iter().max().unwrap(), &int(1));
        let h = PlFn::hat(&rat(0, 1), &rat(1, 4));
        assert_eq!(h.eval(&rat(0, 1)), int(1));
        assert_eq!(h.eval(&rat(1, 8)), rat(1, 2));
        assert_eq!(h.eval(&rat(1, 2)), int(0));
    }
}

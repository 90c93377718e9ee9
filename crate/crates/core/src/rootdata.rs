//! Roots, the form on h*, Weyl vectors and the Weyl group of gl(m|n).
//!
//! Coordinates are unified: index `a < m` is ε_{a+1}, index `m + j` is δ_{j+1}.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::qlinalg::{half, is_nonneg_int, parse_rat, rat, rat_str, Rat};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(len: usize) -> Self {
        Weight(vec![Rat::zero(); len])
    }

    pub fn unit(len: usize, a: usize) -> Self {
        let mut w = Self::zero(len);
        w.0[a] = rat(1);
        w
    }

    /// e_a - e_b, the weight of the matrix unit E_ab.
    pub fn root(len: usize, a: usize, b: usize) -> Self {
        let mut w = Self::zero(len);
        w.0[a] += rat(1);
        w.0[b] -= rat(1);
        w
    }

    pub fn from_i64(xs: &[i64]) -> Self {
        Weight(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    /// Render as "[a1,a2|b1]" with the split after `m` coordinates.
    pub fn display(&self, m: usize) -> String {
        let e: Vec<String> = self.0[..m].iter().map(rat_str).collect();
        let d: Vec<String> = self.0[m..].iter().map(rat_str).collect();
        format!("[{}|{}]", e.join(","), d.join(","))
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        assert_eq!(self.len(), o.len());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        assert_eq!(self.len(), o.len());
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(rat_str).collect();
        write!(f, "({})", v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub m: usize,
    pub n: usize,
    /// Positive even roots as index pairs (a, b), a < b.
    pub even_pos: Vec<(usize, usize)>,
    /// Positive odd roots ε_i - δ_j as index pairs.
    pub odd_pos: Vec<(usize, usize)>,
}

pub const MAX_RANK: usize = 8;

pub fn build_gl(m: usize, n: usize) -> Result<RootDatum> {
    build_gl_capped(m, n, MAX_RANK)
}

pub fn build_gl_capped(m: usize, n: usize, cap: usize) -> Result<RootDatum> {
    if m < 1 || n < 1 {
        return Err(Error::Dimensions(format!("gl({m}|{n}) needs m, n >= 1")));
    }
    if m + n > cap {
        return Err(Error::Dimensions(format!("gl({m}|{n}) exceeds the m+n <= {cap} guard")));
    }
    let mut even_pos = Vec::new();
    for (a, b) in (0..m).tuple_combinations() {
        even_pos.push((a, b));
    }
    for (a, b) in (m..m + n).tuple_combinations() {
        even_pos.push((a, b));
    }
    let odd_pos = (0..m).cartesian_product(m..m + n).collect();
    Ok(RootDatum { m, n, even_pos, odd_pos })
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.m + self.n
    }

    pub fn parity(&self, a: usize) -> usize {
        usize::from(a >= self.m)
    }

    pub fn root(&self, (a, b): (usize, usize)) -> Weight {
        Weight::root(self.rank(), a, b)
    }

    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        self.even_pos.iter().chain(&self.odd_pos).copied().collect()
    }

    /// All roots as index pairs (a, b), a != b.
    pub fn all_roots(&self) -> Vec<(usize, usize)> {
        let r = self.rank();
        (0..r).cartesian_product(0..r).filter(|(a, b)| a != b).collect()
    }

    pub fn is_positive(&self, (a, b): (usize, usize)) -> bool {
        a < b
    }

    pub fn root_parity(&self, (a, b): (usize, usize)) -> usize {
        (self.parity(a) + self.parity(b)) % 2
    }

    pub fn form(&self, x: &Weight, y: &Weight) -> Rat {
        form(self.m, x, y)
    }

    pub fn rho_parts(&self) -> (Weight, Weight, Weight) {
        let r = self.rank();
        let mut r0 = Weight::zero(r);
        for &p in &self.even_pos {
            r0 = &r0 + &self.root(p);
        }
        let mut r1 = Weight::zero(r);
        for &p in &self.odd_pos {
            r1 = &r1 + &self.root(p);
        }
        let r0 = r0.scale(&half());
        let r1 = r1.scale(&half());
        let rho = &r0 - &r1;
        (r0, r1, rho)
    }

    pub fn rho(&self) -> Weight {
        self.rho_parts().2
    }

    pub fn is_typical(&self, lam: &Weight) -> bool {
        self.atypical_roots(lam).is_empty()
    }

    /// Odd positive roots α with (Λ+ρ, α) = 0.
    pub fn atypical_roots(&self, lam: &Weight) -> Vec<(usize, usize)> {
        let lr = lam + &self.rho();
        self.odd_pos.iter().copied().filter(|&p| self.form(&lr, &self.root(p)).is_zero()).collect()
    }

    pub fn is_dominant_integral(&self, lam: &Weight) -> bool {
        let ok = |a: usize| is_nonneg_int(&(&lam.0[a] - &lam.0[a + 1]));
        (0..self.m.saturating_sub(1)).all(ok) && (self.m..self.m + self.n - 1).all(ok)
    }

    /// Distinguished simple roots (a, a+1).
    pub fn simple_roots(&self) -> Vec<(usize, usize)> {
        (0..self.rank() - 1).map(|a| (a, a + 1)).collect()
    }

    /// Height with respect to the distinguished simple roots of an element of the root lattice.
    pub fn height(&self, beta: &Weight) -> Rat {
        let mut acc = Rat::zero();
        let mut partial = Rat::zero();
        for a in 0..self.rank() - 1 {
            partial += &beta.0[a];
            acc += &partial;
        }
        acc
    }

    pub fn weyl_group(&self) -> Vec<WeylElement> {
        let pe: Vec<Vec<usize>> = (0..self.m).permutations(self.m).collect();
        let pd: Vec<Vec<usize>> = (0..self.n).permutations(self.n).collect();
        pe.iter()
            .cartesian_product(pd.iter())
            .map(|(e, d)| WeylElement { eps: e.clone(), del: d.clone() })
            .collect()
    }

    pub fn parse_weight(&self, s: &str) -> Result<Weight> {
        parse_weight(self.m, self.n, s)
    }
}

pub fn form(m: usize, x: &Weight, y: &Weight) -> Rat {
    assert_eq!(x.len(), y.len(), "weight length mismatch");
    let mut s = Rat::zero();
    for (i, (a, b)) in x.0.iter().zip(&y.0).enumerate() {
        if i < m {
            s += a * b;
        } else {
            s -= a * b;
        }
    }
    s
}

/// A pair of permutations; `eps[i]` is the image of ε_{i+1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    pub eps: Vec<usize>,
    pub del: Vec<usize>,
}

impl WeylElement {
    pub fn identity(m: usize, n: usize) -> Self {
        WeylElement { eps: (0..m).collect(), del: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.eps.iter().enumerate().all(|(i, &x)| i == x) && self.del.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut e = vec![0; self.eps.len()];
        for (i, &x) in self.eps.iter().enumerate() {
            e[x] = i;
        }
        let mut d = vec![0; self.del.len()];
        for (i, &x) in self.del.iter().enumerate() {
            d[x] = i;
        }
        WeylElement { eps: e, del: d }
    }
}

pub fn weyl_act(w: &WeylElement, lam: &Weight) -> Weight {
    let m = w.eps.len();
    let mut out = lam.clone();
    for (i, &j) in w.eps.iter().enumerate() {
        out.0[j] = lam.0[i].clone();
    }
    for (i, &j) in w.del.iter().enumerate() {
        out.0[m + j] = lam.0[m + i].clone();
    }
    out
}

/// Parse "2e1+1e2-1d1", "1/2e1-d2", "[2,1|-1]" or "0".
pub fn parse_weight(m: usize, n: usize, s: &str) -> Result<Weight> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse weight {s:?}"));
    if s.starts_with('[') {
        let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (e, d) = inner.split_once('|').ok_or_else(bad)?;
        let part = |t: &str| -> Result<Vec<Rat>> {
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(|x| parse_rat(x).ok_or_else(bad)).collect()
        };
        let (e, d) = (part(e)?, part(d)?);
        if e.len() != m || d.len() != n {
            return Err(Error::Parse(format!("weight {s:?} needs {m} + {n} coordinates")));
        }
        return Ok(Weight(e.into_iter().chain(d).collect()));
    }
    let mut w = Weight::zero(m + n);
    if s == "0" {
        return Ok(w);
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, c) in s.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);
    for t in terms {
        let pos = t.rfind(['e', 'd']).ok_or_else(bad)?;
        let (coef, var) = t.split_at(pos);
        let c = match coef {
            "" | "+" => rat(1),
            "-" => rat(-1),
            x => parse_rat(x.strip_prefix('+').unwrap_or(x)).ok_or_else(bad)?,
        };
        let idx: usize = var[1..].parse().map_err(|_| bad())?;
        let slot = match (&var[..1], idx) {
            ("e", i) if i >= 1 && i <= m => i - 1,
            ("d", j) if j >= 1 && j <= n => m + j - 1,
            _ => return Err(Error::Parse(format!("index out of range in {t:?}"))),
        };
        w.0[slot] += c;
    }
    Ok(w)
}

pub fn is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::ratio;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        let g = build_gl(1, 1).unwrap();
        assert!(g.even_pos.is_empty());
        assert_eq!(g.odd_pos, vec![(0, 1)]);
        let g = build_gl(2, 1).unwrap();
        assert_eq!((g.even_pos.len(), g.odd_pos.len()), (1, 2));
        let g = build_gl(2, 2).unwrap();
        assert_eq!((g.even_pos.len(), g.odd_pos.len()), (2, 4));
        assert!(build_gl(2, 0).is_err());
        assert!(build_gl(0, 1).is_err());
        assert!(build_gl(5, 4).is_err());
    }

    #[test]
    fn forms_and_rho() {
        let g = build_gl(1, 1).unwrap();
        let a = g.root((0, 1));
        assert_eq!(g.form(&a, &a), rat(0));
        let (r0, r1, rho) = g.rho_parts();
        assert!(r0.is_zero());
        assert_eq!(r1, Weight(vec![ratio(1, 2), ratio(-1, 2)]));
        assert_eq!(rho, Weight(vec![ratio(-1, 2), ratio(1, 2)]));

        let g = build_gl(2, 1).unwrap();
        let a = g.root((0, 1));
        assert_eq!(g.form(&a, &a), rat(2));
        assert_eq!(g.rho(), Weight::from_i64(&[0, -1, 1]));
        assert_eq!(g.form(&g.rho(), &g.rho()), rat(0));
    }

    #[test]
    fn typicality() {
        let g = build_gl(1, 1).unwrap();
        assert!(g.is_typical(&Weight::from_i64(&[1, 0])));
        let g = build_gl(2, 1).unwrap();
        assert!(!g.is_typical(&Weight::zero(3)));
        let lam = Weight::from_i64(&[2, 1, 0]);
        let lr = &lam + &g.rho();
        let vals: Vec<Rat> = g.odd_pos.iter().map(|&p| g.form(&lr, &g.root(p))).collect();
        assert_eq!(vals, vec![rat(3), rat(1)]);
        assert!(g.is_typical(&lam));
    }

    #[test]
    fn dominance() {
        let g = build_gl(2, 1).unwrap();
        assert!(g.is_dominant_integral(&Weight::from_i64(&[2, 1, 0])));
        assert!(!g.is_dominant_integral(&Weight::from_i64(&[0, 1, 0])));
        assert!(g.is_dominant_integral(&Weight::zero(3)));
        assert!(!g.is_dominant_integral(&Weight(vec![ratio(1, 2), rat(0), rat(0)])));
    }

    #[test]
    fn weyl_action() {
        let g = build_gl(2, 1).unwrap();
        let id = WeylElement::identity(2, 1);
        let lam = Weight::from_i64(&[2, 0, 1]);
        assert_eq!(weyl_act(&id, &lam), lam);
        let s = WeylElement { eps: vec![1, 0], del: vec![0] };
        assert_eq!(weyl_act(&s, &lam), Weight::from_i64(&[0, 2, 1]));
        assert_eq!(g.weyl_group().len(), 2);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_weight(2, 1, "2e1+1e2-1d1").unwrap(), Weight::from_i64(&[2, 1, -1]));
        assert_eq!(parse_weight(2, 1, "[2,1|-1]").unwrap(), Weight::from_i64(&[2, 1, -1]));
        assert_eq!(parse_weight(2, 1, "0").unwrap(), Weight::zero(3));
        assert_eq!(parse_weight(1, 1, "1/2e1+1/2d1").unwrap(), Weight(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(parse_weight(1, 1, "e1-d1").unwrap(), Weight::from_i64(&[1, -1]));
        assert!(parse_weight(2, 1, "3e3").is_err());
        assert!(parse_weight(2, 1, "[1|2]").is_err());
        assert!(parse_weight(2, 1, "foo").is_err());
    }

    #[test]
    fn root_norms_and_rho_shift() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
            let g = build_gl(m, n).unwrap();
            for &p in &g.even_pos {
                let a = g.root(p);
                assert_eq!(g.form(&a, &a).abs(), rat(2));
            }
            for &p in &g.odd_pos {
                let a = g.root(p);
                assert_eq!(g.form(&a, &a), rat(0));
            }
            let rho = g.rho();
            for p in g.simple_roots() {
                if g.root_parity(p) == 0 {
                    let a = g.root(p);
                    assert_eq!(g.form(&rho, &a), g.form(&a, &a) * half());
                }
            }
        }
    }

    #[test]
    fn weyl_invariance_exhaustive() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)] {
            let g = build_gl(m, n).unwrap();
            let x = Weight((0..m + n).map(|i| ratio(i as i64 * 3 - 2, 2)).collect());
            let y = Weight((0..m + n).map(|i| rat(5 - i as i64 * i as i64)).collect());
            for w in g.weyl_group() {
                assert_eq!(g.form(&weyl_act(&w, &x), &weyl_act(&w, &y)), g.form(&x, &y));
                assert_eq!(weyl_act(&w.inverse(), &weyl_act(&w, &x)), x);
            }
        }
    }

    proptest! {
        #[test]
        fn form_symmetric(xs in proptest::collection::vec(-5i64..6, 5), ys in proptest::collection::vec(-5i64..6, 5)) {
            let (x, y) = (Weight::from_i64(&xs), Weight::from_i64(&ys));
            prop_assert_eq!(form(2, &x, &y), form(2, &y, &x));
        }

        #[test]
        fn parse_roundtrip(xs in proptest::collection::vec((-9i64..10, 1i64..4), 4)) {
            let w = Weight(xs.iter().map(|&(a, b)| ratio(a, b)).collect());
            prop_assert_eq!(parse_weight(2, 2, &w.display(2)).unwrap(), w);
        }
    }
}

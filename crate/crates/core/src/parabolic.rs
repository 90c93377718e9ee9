//! Parabolic decompositions g = ū ⊕ l ⊕ u cut out by a rational functional.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::qlinalg::{half, is_nonneg_int, Rat};
use crate::rootdata::{weyl_act, RootDatum, Weight, WeylElement};
use crate::superalg::{invariant_form, AlgElem, BasisElem};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct TriangularDecomposition {
    pub c: Vec<Rat>,
    pub zero: Vec<BasisElem>,
    pub pos: Vec<BasisElem>,
    pub neg: Vec<BasisElem>,
}

pub fn triangulate(rd: &RootDatum, c: &[Rat]) -> Result<TriangularDecomposition> {
    if c.len() != rd.rank() {
        return Err(Error::Dimensions(format!("functional has {} entries, expected {}", c.len(), rd.rank())));
    }
    let mut t = TriangularDecomposition { c: c.to_vec(), zero: vec![], pos: vec![], neg: vec![] };
    for (a, b) in rd.all_roots() {
        let v = &c[a] - &c[b];
        if v.is_zero() {
            t.zero.push((a, b));
        } else if v.is_positive() {
            t.pos.push((a, b));
        } else {
            t.neg.push((a, b));
        }
    }
    Ok(t)
}

/// Φ = P ∪ −P and P closed under addition inside Φ.
pub fn verify_parabolic_set(rd: &RootDatum, p: &[BasisElem]) -> bool {
    let set: BTreeSet<BasisElem> = p.iter().copied().collect();
    if set.iter().any(|&(a, b)| a == b || a >= rd.rank() || b >= rd.rank()) {
        return false;
    }
    let covers = rd.all_roots().into_iter().all(|(a, b)| set.contains(&(a, b)) || set.contains(&(b, a)));
    // e_a - e_b + e_c - e_d is a root only when b = c (or a = d).
    let closed = set.iter().all(|&(a, b)| {
        set.iter().all(|&(c, d)| {
            if b == c && a != d {
                set.contains(&(a, d))
            } else if a == d && b != c {
                set.contains(&(c, b))
            } else {
                true
            }
        })
    });
    covers && closed
}

#[derive(Clone, Debug)]
pub struct ParabolicData {
    pub rd: RootDatum,
    pub functional: Vec<Rat>,
    /// Levi roots (both signs).
    pub levi_roots: Vec<BasisElem>,
    /// Nilradical roots, ordered even first then lexicographically.
    pub nil_roots: Vec<BasisElem>,
    pub u: Vec<AlgElem>,
    pub ubar: Vec<AlgElem>,
    pub u_parity: Vec<usize>,
    pub u_weight: Vec<Weight>,
    pub rho_l: Weight,
    pub rho_u: Weight,
    pub s0: usize,
    pub s1: usize,
    pub compatible: bool,
}

pub fn is_compatible(c: &[Rat]) -> bool {
    c.windows(2).all(|w| w[0] >= w[1])
}

pub fn parabolic_from(rd: &RootDatum, t: &TriangularDecomposition, demand_compatible: bool) -> Result<ParabolicData> {
    let compatible = is_compatible(&t.c);
    if demand_compatible && !compatible {
        return Err(Error::Incompatible(format!(
            "functional {:?} is negative on a distinguished positive root",
            t.c.iter().map(crate::qlinalg::rat_str).collect::<Vec<_>>()
        )));
    }
    let mut nil = t.pos.clone();
    nil.sort_by_key(|&r| (rd.root_parity(r), r));
    let u: Vec<AlgElem> = nil.iter().map(|&(a, b)| AlgElem::e(a, b)).collect();
    let ubar: Vec<AlgElem> = nil
        .iter()
        .zip(&u)
        .map(|(&(a, b), x)| {
            let y = AlgElem::e(b, a);
            let p = invariant_form(rd, &y, x);
            y.scale(&p.recip())
        })
        .collect();
    let u_parity = nil.iter().map(|&r| rd.root_parity(r)).collect();
    let u_weight = nil.iter().map(|&r| rd.root(r)).collect();
    let half_sum = |roots: &[BasisElem]| {
        let mut w = Weight::zero(rd.rank());
        for &r in roots.iter().filter(|r| rd.is_positive(**r)) {
            let a = rd.root(r);
            w = if rd.root_parity(r) == 0 { &w + &a } else { &w - &a };
        }
        w.scale(&half())
    };
    let s0 = nil.iter().filter(|&&r| rd.root_parity(r) == 0).count();
    Ok(ParabolicData {
        rd: rd.clone(),
        functional: t.c.clone(),
        levi_roots: t.zero.clone(),
        rho_l: half_sum(&t.zero),
        rho_u: half_sum(&nil),
        s1: nil.len() - s0,
        s0,
        nil_roots: nil,
        u,
        ubar,
        u_parity,
        u_weight,
        compatible,
    })
}

/// Convenience: triangulate then build, without demanding compatibility.
pub fn parabolic(rd: &RootDatum, c: &[Rat]) -> Result<ParabolicData> {
    parabolic_from(rd, &triangulate(rd, c)?, false)
}

impl ParabolicData {
    pub fn s(&self) -> usize {
        self.u.len()
    }

    pub fn levi_positive(&self) -> Vec<BasisElem> {
        self.levi_roots.iter().copied().filter(|&r| self.rd.is_positive(r)).collect()
    }

    /// Cartan elements followed by Levi root vectors.
    pub fn levi_basis(&self) -> Vec<BasisElem> {
        let mut v: Vec<BasisElem> = (0..self.rd.rank()).map(|a| (a, a)).collect();
        v.extend(self.levi_roots.iter().copied());
        v
    }

    pub fn is_borel(&self) -> bool {
        self.levi_roots.is_empty()
    }

    pub fn levi_is_even(&self) -> bool {
        self.levi_roots.iter().all(|&r| self.rd.root_parity(r) == 0)
    }

    pub fn in_levi(&self, x: &AlgElem) -> bool {
        x.terms().all(|(&(a, b), _)| a == b || self.levi_roots.contains(&(a, b)))
    }

    /// Label such as "borel", "g0", "mixed" or "other".
    pub fn kind(&self) -> &'static str {
        if self.levi_roots.is_empty() {
            "borel"
        } else if self.levi_is_even() && self.levi_roots.len() == self.rd.even_pos.len() * 2 {
            "g0"
        } else if !self.levi_is_even() {
            "mixed"
        } else {
            "other"
        }
    }

    /// Weyl group of l: permutations inside blocks of equal functional value.
    pub fn levi_weyl_group(&self) -> Vec<WeylElement> {
        let (m, n) = (self.rd.m, self.rd.n);
        let c = &self.functional;
        let block_perms = |idx: Vec<usize>| -> Vec<Vec<usize>> {
            // groups of positions (within the block) sharing a functional value
            let groups: Vec<Vec<usize>> = idx
                .iter()
                .enumerate()
                .into_group_map_by(|(_, &a)| c[a].clone())
                .into_values()
                .map(|g| g.into_iter().map(|(i, _)| i).collect())
                .collect();
            let mut out = vec![(0..idx.len()).collect::<Vec<usize>>()];
            for g in groups {
                let mut next = Vec::new();
                for base in &out {
                    for p in g.iter().copied().permutations(g.len()) {
                        let mut w = base.clone();
                        for (src, dst) in g.iter().zip(&p) {
                            w[*src] = *dst;
                        }
                        next.push(w);
                    }
                }
                out = next;
            }
            out
        };
        let pe = block_perms((0..m).collect());
        let pd = block_perms((m..m + n).collect());
        pe.iter().cartesian_product(pd.iter()).map(|(e, d)| WeylElement { eps: e.clone(), del: d.clone() }).collect()
    }

    /// Dominant integral for the even positive roots of l.
    pub fn is_levi_dominant_integral(&self, lam: &Weight) -> bool {
        self.levi_positive()
            .into_iter()
            .filter(|&r| self.rd.root_parity(r) == 0)
            .all(|(a, b)| is_nonneg_int(&(&lam.0[a] - &lam.0[b])))
    }

    pub fn levi_is_typical(&self, nu: &Weight) -> bool {
        let nr = nu + &self.rho_l;
        self.levi_positive()
            .into_iter()
            .filter(|&r| self.rd.root_parity(r) == 1)
            .all(|r| !self.rd.form(&nr, &self.rd.root(r)).is_zero())
    }
}

/// {w ∈ W^l : w(λ+ρ^l) − ρ^l is Φ(l)⁺-dominant integral}.
pub fn w_l1(pd: &ParabolicData, lam: &Weight, _even_only: bool) -> Vec<WeylElement> {
    let shifted = lam + &pd.rho_l;
    pd.levi_weyl_group()
        .into_iter()
        .filter(|w| pd.is_levi_dominant_integral(&(&weyl_act(w, &shifted) - &pd.rho_l)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{rat, ratio};
    use crate::rootdata::build_gl;
    use crate::superalg::{basis_weight, bracket};

    fn c(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn triangulations_gl21() {
        let g = build_gl(2, 1).unwrap();
        let t = triangulate(&g, &c(&[1, 1, 0])).unwrap();
        assert_eq!(t.zero, vec![(0, 1), (1, 0)]);
        assert_eq!(t.pos, vec![(0, 2), (1, 2)]);
        let t = triangulate(&g, &c(&[2, 1, 0])).unwrap();
        assert!(t.zero.is_empty());
        let t = triangulate(&g, &c(&[1, 0, 0])).unwrap();
        assert_eq!(t.zero, vec![(1, 2), (2, 1)]);
        assert!(triangulate(&g, &c(&[1, 0])).is_err());
    }

    #[test]
    fn parabolic_sets() {
        let g = build_gl(2, 1).unwrap();
        for f in [[1, 1, 0], [2, 1, 0], [1, 0, 0], [0, 1, 2], [0, 0, 0]] {
            let t = triangulate(&g, &c(&f)).unwrap();
            let p: Vec<BasisElem> = t.zero.iter().chain(&t.pos).copied().collect();
            assert!(verify_parabolic_set(&g, &p));
        }
        assert!(verify_parabolic_set(&g, &g.positive_roots()));
        assert!(!verify_parabolic_set(&g, &[(0, 2)]));
        // covering but not closed: ε1−ε2, ε2−δ1, δ1−ε1
        assert!(!verify_parabolic_set(&g, &[(0, 1), (1, 2), (2, 0)]));
    }

    #[test]
    fn rho_data() {
        let g = build_gl(2, 1).unwrap();
        let pd = parabolic(&g, &c(&[1, 1, 0])).unwrap();
        assert_eq!(pd.u, vec![AlgElem::e(0, 2), AlgElem::e(1, 2)]);
        assert_eq!(pd.rho_u, Weight(vec![ratio(-1, 2), ratio(-1, 2), rat(1)]));
        assert_eq!(pd.rho_l, Weight(vec![ratio(1, 2), ratio(-1, 2), rat(0)]));
        assert_eq!(pd.kind(), "g0");
        let g11 = build_gl(1, 1).unwrap();
        let pd = parabolic(&g11, &c(&[1, 0])).unwrap();
        assert!(pd.rho_l.is_zero());
        assert_eq!(pd.rho_u, Weight(vec![ratio(-1, 2), ratio(1, 2)]));
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let g = build_gl(m, n).unwrap();
            for f in [vec![0; m + n], (0..m + n).map(|i| (m + n - i) as i64).collect(), vec![1; m + n]] {
                let pd = parabolic(&g, &c(&f)).unwrap();
                assert_eq!(&pd.rho_l + &pd.rho_u, g.rho());
            }
        }
    }

    #[test]
    fn nilradical_invariants() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let g = build_gl(m, n).unwrap();
            let fs: Vec<Vec<i64>> =
                vec![(0..m + n).map(|i| (m + n - i) as i64).collect(), vec![1, 0, 0, -1][..m + n].to_vec(), {
                    let mut v = vec![1; m];
                    v.extend(vec![0; n]);
                    v
                }];
            for f in fs {
                let pd = parabolic(&g, &c(&f)).unwrap();
                let s = pd.s();
                for i in 0..s {
                    for j in 0..s {
                        let want = if i == j { rat(1) } else { rat(0) };
                        assert_eq!(invariant_form(&g, &pd.ubar[i], &pd.u[j]), want);
                        assert!(invariant_form(&g, &pd.u[i], &pd.u[j]).is_zero());
                        assert!(invariant_form(&g, &pd.ubar[i], &pd.ubar[j]).is_zero());
                    }
                    for (&(a, b), _) in pd.u[i].terms() {
                        assert_eq!(basis_weight(&g, (a, b)), pd.u_weight[i]);
                    }
                }
                for x in pd.levi_basis() {
                    let x = AlgElem::e(x.0, x.1);
                    for y in pd.u.iter().chain(&pd.ubar) {
                        assert!(invariant_form(&g, &x, y).is_zero());
                    }
                    for y in &pd.u {
                        let br = bracket(&g, &x, y);
                        assert!(br.terms().all(|(k, _)| pd.nil_roots.contains(k)));
                    }
                    for y in &pd.ubar {
                        let br = bracket(&g, &x, y);
                        assert!(br.terms().all(|(&(a, b), _)| pd.nil_roots.contains(&(b, a))));
                    }
                }
                // even-first ordering
                let ps = &pd.u_parity;
                assert!(ps.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn compatibility_gate() {
        let g = build_gl(1, 1).unwrap();
        let t = triangulate(&g, &c(&[0, 1])).unwrap();
        assert!(parabolic_from(&g, &t, true).is_err());
        assert!(parabolic_from(&g, &t, false).is_ok());
    }

    #[test]
    fn w_l1_examples() {
        let g = build_gl(2, 1).unwrap();
        let pd = parabolic(&g, &c(&[1, 1, 0])).unwrap();
        let lam = Weight::from_i64(&[2, 1, 0]);
        let w = w_l1(&pd, &(&lam + &pd.rho_u), true);
        assert_eq!(w.len(), 1);
        assert!(w[0].is_identity());
        assert_eq!(pd.levi_weyl_group().len(), 2);
        let borel = parabolic(&g, &c(&[2, 1, 0])).unwrap();
        assert_eq!(borel.levi_weyl_group().len(), 1);
        assert_eq!(w_l1(&borel, &Weight::from_i64(&[5, -3, 7]), true).len(), 1);
        let g22 = build_gl(2, 2).unwrap();
        let pd = parabolic(&g22, &c(&[1, 1, 0, 0])).unwrap();
        assert_eq!(pd.levi_weyl_group().len(), 4);
        let lam = Weight::from_i64(&[3, 2, 0, 0]);
        assert_eq!(w_l1(&pd, &(&lam + &pd.rho_u), true).len(), 1);
    }
}

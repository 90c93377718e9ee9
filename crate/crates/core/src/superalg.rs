//! Structure constants, invariant form, dual bases and quadratic Casimirs of gl(m|n).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::qlinalg::{kernel_basis, rat, rat_str, sign, QMatrix, Rat};
use crate::rootdata::{weyl_act, RootDatum, Weight};
use crate::{Error, Result};

/// A matrix unit E_ab, 0-based indices.
pub type BasisElem = (usize, usize);

#[derive(Clone, PartialEq, Eq, Default, Debug, Hash, PartialOrd, Ord)]
pub struct AlgElem(pub BTreeMap<BasisElem, Rat>);

impl AlgElem {
    pub fn zero() -> Self {
        AlgElem(BTreeMap::new())
    }

    pub fn e(a: usize, b: usize) -> Self {
        Self::term((a, b), rat(1))
    }

    pub fn term(x: BasisElem, c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(x, c);
        }
        AlgElem(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, x: BasisElem, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(x).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&x);
        }
    }

    pub fn add(&self, o: &AlgElem) -> AlgElem {
        let mut r = self.clone();
        for (k, v) in &o.0 {
            r.add_term(*k, v);
        }
        r
    }

    pub fn sub(&self, o: &AlgElem) -> AlgElem {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rat) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero();
        }
        AlgElem(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    pub fn coeff(&self, x: BasisElem) -> Rat {
        self.0.get(&x).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElem, &Rat)> {
        self.0.iter()
    }

    pub fn is_cartan(&self) -> bool {
        self.0.keys().all(|(a, b)| a == b)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|((a, b), c)| format!("{}*E{}{}", rat_str(c), a + 1, b + 1)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn basis_parity(rd: &RootDatum, (a, b): BasisElem) -> usize {
    (rd.parity(a) + rd.parity(b)) % 2
}

/// Parity of a homogeneous element; `None` for mixed or zero elements.
pub fn parity(rd: &RootDatum, x: &AlgElem) -> Option<usize> {
    let mut it = x.0.keys().map(|&k| basis_parity(rd, k));
    let p = it.next()?;
    it.all(|q| q == p).then_some(p)
}

/// h-weight of a matrix unit.
pub fn basis_weight(rd: &RootDatum, (a, b): BasisElem) -> Weight {
    if a == b {
        Weight::zero(rd.rank())
    } else {
        rd.root((a, b))
    }
}

/// All matrix units, diagonal first then off-diagonal in lexicographic order.
pub fn gl_basis(rd: &RootDatum) -> Vec<BasisElem> {
    let r = rd.rank();
    let mut v: Vec<BasisElem> = (0..r).map(|a| (a, a)).collect();
    v.extend(rd.all_roots());
    v
}

pub fn bracket_basis(rd: &RootDatum, (a, b): BasisElem, (c, d): BasisElem) -> AlgElem {
    let mut r = AlgElem::zero();
    if b == c {
        r.add_term((a, d), &rat(1));
    }
    if d == a {
        let s = sign(basis_parity(rd, (a, b)) * basis_parity(rd, (c, d)));
        r.add_term((c, b), &-s);
    }
    r
}

pub fn bracket(rd: &RootDatum, x: &AlgElem, y: &AlgElem) -> AlgElem {
    let mut r = AlgElem::zero();
    for (&bx, cx) in &x.0 {
        for (&by, cy) in &y.0 {
            let c = cx * cy;
            for (k, v) in bracket_basis(rd, bx, by).0 {
                r.add_term(k, &(&v * &c));
            }
        }
    }
    r
}

/// Supertrace form str(xy).
pub fn invariant_form(rd: &RootDatum, x: &AlgElem, y: &AlgElem) -> Rat {
    let mut s = Rat::zero();
    for (&(a, b), cx) in &x.0 {
        if let Some(cy) = y.0.get(&(b, a)) {
            let t = cx * cy;
            if rd.parity(a) == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
    }
    s
}

/// Returns y with (y_i, sub_j) = δ_ij.
///
/// The dual is taken inside span(sub) when the form is nondegenerate there.
/// Otherwise (isotropic spans such as u) it is taken inside the span of the
/// transposed matrix units, which must pair perfectly with sub.
pub fn dual_basis(rd: &RootDatum, sub: &[AlgElem]) -> Result<Vec<AlgElem>> {
    let k = sub.len();
    let gram = |cands: &[AlgElem]| {
        let mut g = QMatrix::zeros(cands.len(), k);
        for (i, y) in cands.iter().enumerate() {
            for (j, x) in sub.iter().enumerate() {
                g.set(i, j, invariant_form(rd, y, x));
            }
        }
        g
    };
    let g = gram(sub);
    let rad = kernel_basis(&g.transpose());
    if rad.is_empty() {
        return Ok(invert_pairing(sub, &g));
    }
    let mut units: Vec<BasisElem> = sub.iter().flat_map(|x| x.0.keys().map(|&(a, b)| (b, a))).collect();
    units.sort();
    units.dedup();
    if units.len() == k {
        let cands: Vec<AlgElem> = units.iter().map(|&u| AlgElem::term(u, rat(1))).collect();
        let g2 = gram(&cands);
        if g2.rank() == k {
            return Ok(invert_pairing(&cands, &g2));
        }
    }
    let names: Vec<String> = rad
        .iter()
        .map(|v| {
            let mut e = AlgElem::zero();
            for (c, x) in v.iter().zip(sub) {
                e = e.add(&x.scale(c));
            }
            e.to_string()
        })
        .collect();
    Err(Error::Degenerate(format!("form is degenerate on the span; radical spanned by {}", names.join("; "))))
}

/// Given g[i][j] = (cands_i, sub_j) invertible, return y_i = Σ C_ik cands_k with C g = I.
fn invert_pairing(cands: &[AlgElem], g: &QMatrix) -> Vec<AlgElem> {
    let k = cands.len();
    let gt = g.transpose();
    (0..k)
        .map(|i| {
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            let row = gt.solve(&e).expect("invertible pairing");
            let mut y = AlgElem::zero();
            for (c, x) in row.iter().zip(cands) {
                y = y.add(&x.scale(c));
            }
            y
        })
        .collect()
}

/// Σ x_i x^i stored as ordered factor pairs.
#[derive(Clone, Debug)]
pub struct CasimirElem {
    pub pairs: Vec<(AlgElem, AlgElem)>,
}

pub fn casimir(rd: &RootDatum, sub: &[AlgElem]) -> Result<CasimirElem> {
    let dual = dual_basis(rd, sub)?;
    Ok(CasimirElem { pairs: sub.iter().cloned().zip(dual).collect() })
}

pub fn gl_casimir(rd: &RootDatum) -> CasimirElem {
    let b: Vec<AlgElem> = gl_basis(rd).into_iter().map(|(a, b)| AlgElem::e(a, b)).collect();
    casimir(rd, &b).expect("supertrace form is nondegenerate on gl(m|n)")
}

/// Matrix of ad(x) on the span of the given matrix units (must be ad(x)-stable).
pub fn ad_matrix(rd: &RootDatum, x: &AlgElem, space: &[BasisElem]) -> QMatrix {
    let k = space.len();
    let mut m = QMatrix::zeros(k, k);
    for (j, &b) in space.iter().enumerate() {
        let r = bracket(rd, x, &AlgElem::term(b, rat(1)));
        for (key, v) in r.0 {
            let i = space.iter().position(|&s| s == key).expect("space is not ad-stable");
            m.set(i, j, v);
        }
    }
    m
}

/// str over `space` of ad(Ω) for a Casimir assembled on that same space.
pub fn str_ad_casimir(rd: &RootDatum, om: &CasimirElem, space: &[BasisElem]) -> Rat {
    let k = space.len();
    let mut tot = QMatrix::zeros(k, k);
    for (x, y) in &om.pairs {
        tot = &tot + &(&ad_matrix(rd, x, space) * &ad_matrix(rd, y, space));
    }
    let mut s = Rat::zero();
    for (i, &b) in space.iter().enumerate() {
        s += sign(basis_parity(rd, b)) * tot.get(i, i);
    }
    s
}

/// Outcome of the structure checks on gl(m|n).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub jacobi: bool,
    pub invariance: bool,
    pub supersymmetry: bool,
    pub consistency: bool,
    /// Root-space axioms a) to f): symmetry of Φ, one-dimensional root spaces,
    /// brackets of root spaces, the form on h and between root spaces, coroots, W-invariance.
    pub root_axioms: [bool; 6],
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.jacobi && self.invariance && self.supersymmetry && self.consistency && self.root_axioms.iter().all(|&x| x)
    }
}

pub fn structure_suite(rd: &RootDatum) -> StructureReport {
    let basis = gl_basis(rd);
    let el: Vec<AlgElem> = basis.iter().map(|&(a, b)| AlgElem::e(a, b)).collect();
    let par: Vec<usize> = basis.iter().map(|&g| basis_parity(rd, g)).collect();
    let mut r = StructureReport { jacobi: true, invariance: true, supersymmetry: true, consistency: true, root_axioms: [true; 6] };
    for (i, x) in el.iter().enumerate() {
        for (j, y) in el.iter().enumerate() {
            let fxy = invariant_form(rd, x, y);
            r.supersymmetry &= fxy == invariant_form(rd, y, x) * sign(par[i] * par[j]);
            r.consistency &= par[i] == par[j] || fxy.is_zero();
            let xy = bracket(rd, x, y);
            for z in &el {
                r.invariance &= invariant_form(rd, &xy, z) == invariant_form(rd, x, &bracket(rd, y, z));
                let lhs = bracket(rd, x, &bracket(rd, y, z));
                let rhs = bracket(rd, &xy, z).add(&bracket(rd, y, &bracket(rd, x, z)).scale(&sign(par[i] * par[j])));
                r.jacobi &= lhs == rhs;
            }
        }
    }
    let roots = rd.all_roots();
    let rw: Vec<Weight> = roots.iter().map(|&x| rd.root(x)).collect();
    let is_root = |w: &Weight| rw.contains(w);
    // a) Φ = −Φ with parities
    r.root_axioms[0] = roots.iter().all(|&(a, b)| rw.contains(&rd.root((b, a))) && rd.root_parity((a, b)) == rd.root_parity((b, a)));
    // b) each root space is spanned by one basis element of the right parity
    r.root_axioms[1] = roots.iter().all(|&x| {
        let w = rd.root(x);
        let sp: Vec<usize> = (0..basis.len()).filter(|&i| basis_weight(rd, basis[i]) == w).collect();
        sp.len() == 1 && par[sp[0]] == rd.root_parity(x)
    });
    // c) [g^α, g^β] vanishes exactly when α+β is neither a root nor zero, and lands in g^{α+β}
    r.root_axioms[2] = roots.iter().all(|&x| {
        roots.iter().all(|&y| {
            let s = &rd.root(x) + &rd.root(y);
            let br = bracket_basis(rd, x, y);
            if s.is_zero() {
                !br.is_zero() && br.is_cartan()
            } else if is_root(&s) {
                !br.is_zero() && br.terms().all(|(&g, _)| basis_weight(rd, g) == s)
            } else {
                br.is_zero()
            }
        })
    });
    // d) nondegenerate on h, (g^α, g^β) = 0 unless α = −β
    let cartan: Vec<AlgElem> = (0..rd.rank()).map(|a| AlgElem::e(a, a)).collect();
    let gram = QMatrix::from_rows(cartan.iter().map(|x| cartan.iter().map(|y| invariant_form(rd, x, y)).collect()).collect());
    r.root_axioms[3] = gram.rank() == rd.rank()
        && roots.iter().all(|&x| {
            roots.iter().all(|&y| (&rd.root(x) + &rd.root(y)).is_zero() || invariant_form(rd, &AlgElem::e(x.0, x.1), &AlgElem::e(y.0, y.1)).is_zero())
        });
    // e) [e_α, e_−α] = (e_α, e_−α) h_α with (h_α, h) = α(h)
    r.root_axioms[4] = roots.iter().all(|&(a, b)| {
        let alpha = rd.root((a, b));
        let h = AlgElem((0..rd.rank()).map(|c| ((c, c), &alpha.0[c] * sign(rd.parity(c)))).filter(|(_, v)| !v.is_zero()).collect());
        let dual_ok = (0..rd.rank()).all(|c| invariant_form(rd, &h, &AlgElem::e(c, c)) == alpha.0[c]);
        let (x, y) = (AlgElem::e(a, b), AlgElem::e(b, a));
        dual_ok && bracket(rd, &x, &y) == h.scale(&invariant_form(rd, &x, &y))
    });
    // f) the induced form on h* is nondegenerate and W-invariant
    let units: Vec<Weight> = (0..rd.rank()).map(|a| Weight::unit(rd.rank(), a)).collect();
    let gram = QMatrix::from_rows(units.iter().map(|x| units.iter().map(|y| rd.form(x, y)).collect()).collect());
    r.root_axioms[5] = gram.rank() == rd.rank()
        && rd.weyl_group().iter().all(|w| {
            units.iter().all(|x| units.iter().all(|y| rd.form(&weyl_act(w, x), &weyl_act(w, y)) == rd.form(x, y)))
        });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::ratio;
    use crate::rootdata::build_gl;

    fn all_alg() -> Vec<RootDatum> {
        [(1, 1), (2, 1), (1, 2), (2, 2)].iter().map(|&(m, n)| build_gl(m, n).unwrap()).collect()
    }

    #[test]
    fn structure_suite_passes() {
        for rd in all_alg() {
            let r = structure_suite(&rd);
            assert!(r.all(), "{}|{}: {r:?}", rd.m, rd.n);
        }
    }

    #[test]
    fn bracket_examples() {
        let g = build_gl(1, 1).unwrap();
        let b = bracket(&g, &AlgElem::e(0, 1), &AlgElem::e(1, 0));
        assert_eq!(b, AlgElem::e(0, 0).add(&AlgElem::e(1, 1)));
        assert_eq!(bracket(&g, &AlgElem::e(0, 0), &AlgElem::e(0, 1)), AlgElem::e(0, 1));
        let g = build_gl(2, 1).unwrap();
        let x = AlgElem::e(0, 1).add(&AlgElem::e(1, 0).scale(&rat(3)));
        assert!(bracket(&g, &x, &x).is_zero());
    }

    #[test]
    fn form_examples() {
        let g = build_gl(1, 1).unwrap();
        assert_eq!(invariant_form(&g, &AlgElem::e(0, 1), &AlgElem::e(1, 0)), rat(1));
        assert_eq!(invariant_form(&g, &AlgElem::e(1, 0), &AlgElem::e(0, 1)), rat(-1));
        assert_eq!(invariant_form(&g, &AlgElem::e(0, 0), &AlgElem::e(1, 1)), rat(0));
    }

    #[test]
    fn dual_examples() {
        let g = build_gl(1, 1).unwrap();
        assert_eq!(dual_basis(&g, &[AlgElem::e(0, 1)]).unwrap(), vec![AlgElem::e(1, 0).scale(&rat(-1))]);
        assert_eq!(dual_basis(&g, &[AlgElem::e(0, 0)]).unwrap(), vec![AlgElem::e(0, 0)]);
        let iso = AlgElem::e(0, 0).add(&AlgElem::e(1, 1));
        match dual_basis(&g, &[iso]) {
            Err(Error::Degenerate(msg)) => assert!(msg.contains("E11") && msg.contains("E22")),
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn dual_is_dual() {
        for g in all_alg() {
            let b: Vec<AlgElem> = gl_basis(&g).into_iter().map(|(a, c)| AlgElem::e(a, c)).collect();
            let d = dual_basis(&g, &b).unwrap();
            for (i, y) in d.iter().enumerate() {
                for (j, x) in b.iter().enumerate() {
                    let want = if i == j { rat(1) } else { rat(0) };
                    assert_eq!(invariant_form(&g, y, x), want);
                }
            }
        }
    }

    #[test]
    fn super_jacobi_and_form_axioms() {
        for g in all_alg() {
            let basis = gl_basis(&g);
            for &x in &basis {
                let (ex, px) = (AlgElem::term(x, rat(1)), basis_parity(&g, x));
                for &y in &basis {
                    let (ey, py) = (AlgElem::term(y, rat(1)), basis_parity(&g, y));
                    // supersymmetry and consistency
                    let f1 = invariant_form(&g, &ex, &ey);
                    let f2 = invariant_form(&g, &ey, &ex);
                    assert_eq!(f1, sign(px * py) * f2);
                    if px != py {
                        assert!(f1.is_zero());
                    }
                    // super antisymmetry
                    let b1 = bracket(&g, &ex, &ey);
                    let b2 = bracket(&g, &ey, &ex).scale(&-sign(px * py));
                    assert_eq!(b1, b2);
                    for &z in &basis {
                        let (ez, pz) = (AlgElem::term(z, rat(1)), basis_parity(&g, z));
                        let t1 = bracket(&g, &ex, &bracket(&g, &ey, &ez));
                        let t2 = bracket(&g, &bracket(&g, &ex, &ey), &ez);
                        let t3 = bracket(&g, &ey, &bracket(&g, &ex, &ez)).scale(&sign(px * py));
                        assert_eq!(t1, t2.add(&t3), "Jacobi fails at {x:?} {y:?} {z:?}");
                        let _ = pz;
                        assert_eq!(
                            invariant_form(&g, &bracket(&g, &ex, &ey), &ez),
                            invariant_form(&g, &ex, &bracket(&g, &ey, &ez))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn root_space_axioms() {
        for g in all_alg() {
            for &(a, b) in &g.all_roots() {
                let alpha = g.root((a, b));
                // [h, e_α] = α(h) e_α
                for h in 0..g.rank() {
                    let br = bracket(&g, &AlgElem::e(h, h), &AlgElem::e(a, b));
                    assert_eq!(br, AlgElem::e(a, b).scale(&alpha.0[h]));
                }
                // [e_α, e_-α] = (e_α, e_-α) h_α where (h_α, h) = α(h)
                let br = bracket(&g, &AlgElem::e(a, b), &AlgElem::e(b, a));
                let f = invariant_form(&g, &AlgElem::e(a, b), &AlgElem::e(b, a));
                for h in 0..g.rank() {
                    let lhs = invariant_form(&g, &br, &AlgElem::e(h, h));
                    assert_eq!(lhs, &f * &alpha.0[h]);
                }
                // [g^α, g^β] ⊂ g^{α+β}
                for &(c, d) in &g.all_roots() {
                    let br = bracket(&g, &AlgElem::e(a, b), &AlgElem::e(c, d));
                    let target = &alpha + &g.root((c, d));
                    for (&k, _) in br.terms() {
                        assert_eq!(basis_weight(&g, k), target);
                    }
                }
            }
        }
    }

    #[test]
    fn casimir_trace_oracle_gl21() {
        let g = build_gl(2, 1).unwrap();
        let om = gl_casimir(&g);
        assert_eq!(str_ad_casimir(&g, &om, &gl_basis(&g)), rat(0));
        let l: Vec<BasisElem> = vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)];
        let ol = casimir(&g, &l.iter().map(|&k| AlgElem::term(k, rat(1))).collect::<Vec<_>>()).unwrap();
        assert_eq!(str_ad_casimir(&g, &ol, &l) / rat(24), ratio(1, 2));
    }
}

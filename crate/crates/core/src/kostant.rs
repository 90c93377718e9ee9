//! Kostant's u-cohomology and ū-homology on the ⋀ū ⊗ M realization, and the
//! comparison with the Dirac operator.
//!
//! A chain ū^β ⊗ v is keyed (v, β) like a Dirac tensor key, so that a weight
//! block of the complex at μ lines up with the Dirac block at μ + ρ^u. On the
//! cochain side the same key stands for the cochain f with f(u^β) = v and
//! f = 0 on every other sorted word.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::clifford::{ext_sort, CliffordS, Mono, MonoCache, QuadSpace};
use crate::dirac::{Dirac, Op, TKey};
use crate::parabolic::ParabolicData;
use crate::qlinalg::{intersection_basis, kernel_basis, rat, same_span, sign, QMatrix, Rat};
use crate::rootdata::Weight;
use crate::superalg::{basis_parity, basis_weight, bracket, AlgElem, BasisElem};
use crate::supermodules::{peel_character, WeightModule};
use crate::{Error, Result};

type SparseAct = Vec<Vec<(usize, Rat)>>;

/// One weight block of ⋀ū ⊗ M, all degrees at once.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    /// Chain weight, without the ρ^u twist.
    pub weight: Weight,
    pub keys: Vec<TKey>,
    pub index: BTreeMap<TKey, usize>,
    pub degree: Vec<usize>,
    /// Parity of ū^β ⊗ v.
    pub parity: Vec<usize>,
}

impl ChainSpace {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn in_degree(&self, p: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree[i] == p).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }
}

/// A matrix between two degree slices of one weight block.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    pub weight: Weight,
    pub from_degree: usize,
    pub to_degree: usize,
    pub matrix: QMatrix,
}

/// Coordinates of x in a basis of single-term elements.
fn coords(basis: &[AlgElem], x: &AlgElem) -> Result<Vec<(usize, Rat)>> {
    let mut out = Vec::new();
    for (g, c) in x.terms() {
        let k = basis
            .iter()
            .position(|b| !b.coeff(*g).is_zero())
            .ok_or_else(|| Error::Precondition(format!("{x} leaves the span")))?;
        out.push((k, c / basis[k].coeff(*g)));
    }
    Ok(out)
}

fn word_of(mono: &[u32]) -> Vec<usize> {
    mono.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect()
}

fn mono_of(s: usize, word: &[usize]) -> Mono {
    let mut m = vec![0u32; s];
    for &i in word {
        m[i] += 1;
    }
    m
}

fn without(word: &[usize], skip: &[usize]) -> Vec<usize> {
    word.iter().enumerate().filter(|(k, _)| !skip.contains(k)).map(|(_, &x)| x).collect()
}

/// The boundary d on ⋀ū ⊗ M and the coboundary ∂ on Hom(⋀u, M).
pub struct Kostant {
    pub module: WeightModule,
    pub pd: ParabolicData,
    cs: CliffordS,
    q: QuadSpace,
    ubar_act: Vec<SparseAct>,
    /// u_rows[i][v'] lists (v, c) with u_i v = Σ c v'.
    u_rows: Vec<SparseAct>,
    ubar_br: Vec<Vec<Vec<(usize, Rat)>>>,
    u_br: Vec<Vec<Vec<(usize, Rat)>>>,
    monos: RefCell<MonoCache>,
    pub max_block: usize,
}

impl Kostant {
    pub fn new(module: &WeightModule, pd: &ParabolicData) -> Result<Self> {
        let rd = &pd.rd;
        let s = pd.s();
        for x in pd.u.iter().chain(&pd.ubar) {
            for (g, _) in x.terms() {
                if !module.has_generator(*g) {
                    return Err(Error::Precondition("module must carry the action of u and ū".into()));
                }
            }
        }
        let ubar_act =
            pd.ubar.iter().map(|x| (0..module.dim()).map(|j| module.act_elem_basis(x, j).into_iter().collect()).collect()).collect();
        let u_rows = pd
            .u
            .iter()
            .map(|x| {
                let mut rows: SparseAct = vec![Vec::new(); module.dim()];
                for j in 0..module.dim() {
                    for (i, c) in module.act_elem_basis(x, j) {
                        rows[i].push((j, c));
                    }
                }
                rows
            })
            .collect();
        let mut ubar_br = vec![vec![Vec::new(); s]; s];
        let mut u_br = vec![vec![Vec::new(); s]; s];
        for i in 0..s {
            for j in 0..s {
                ubar_br[i][j] = coords(&pd.ubar, &bracket(rd, &pd.ubar[i], &pd.ubar[j]))?;
                u_br[i][j] = coords(&pd.u, &bracket(rd, &pd.u[i], &pd.u[j]))?;
            }
        }
        let q = QuadSpace::new(pd.u_parity.clone(), QMatrix::zeros(s, s), (1..=s).map(|i| format!("x{i}")).collect());
        let max_block = std::env::var("SUPERDIRAC_MAX_DIM").ok().and_then(|v| v.parse().ok()).unwrap_or(2000);
        Ok(Kostant {
            module: module.clone(),
            pd: pd.clone(),
            cs: CliffordS::new(pd),
            q,
            ubar_act,
            u_rows,
            ubar_br,
            u_br,
            monos: RefCell::new(MonoCache::default()),
            max_block,
        })
    }

    fn par(&self, i: usize) -> usize {
        self.pd.u_parity[i]
    }

    fn word_par(&self, w: &[usize]) -> usize {
        w.iter().map(|&i| self.par(i)).sum::<usize>()
    }

    pub fn key_weight(&self, k: &TKey) -> Weight {
        &(&self.cs.mono_weight(&k.1) - &self.pd.rho_u) + &self.module.weights[k.0]
    }

    pub fn space(&self, mu: &Weight) -> Result<ChainSpace> {
        let mut keys = Vec::new();
        let mut cache = self.monos.borrow_mut();
        for (j, w) in self.module.weights.iter().enumerate() {
            for m in cache.get(&self.cs, &(w - mu)) {
                keys.push((j, m.clone()));
            }
            if keys.len() > self.max_block {
                return Err(Error::TooLarge(format!("chain block at {} exceeds {}", mu.display(self.pd.rd.m), self.max_block)));
            }
        }
        keys.sort();
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let degree = keys.iter().map(|k| k.1.iter().sum::<u32>() as usize).collect();
        let parity = keys.iter().map(|k| (self.module.parity[k.0] + self.cs.super_parity(&k.1)) % 2).collect();
        Ok(ChainSpace { weight: mu.clone(), keys, index, degree, parity })
    }

    /// Matrix of d on a whole weight block.
    pub fn boundary_matrix(&self, sp: &ChainSpace) -> Result<QMatrix> {
        let n = sp.dim();
        let s = self.pd.s();
        let mut m = QMatrix::zeros(n, n);
        let mut put = |key: TKey, col: usize, c: Rat| -> Result<()> {
            let i = sp.index.get(&key).ok_or_else(|| Error::Precondition("d leaves the weight block".into()))?;
            m.add_at(*i, col, &c);
            Ok(())
        };
        for (col, (j, beta)) in sp.keys.iter().enumerate() {
            let x = word_of(beta);
            let p = x.len();
            for a in 0..p {
                let after = self.word_par(&x[a + 1..]);
                let sg = sign(a + 1 + self.par(x[a]) * after);
                let rest = mono_of(s, &without(&x, &[a]));
                for (i, c) in &self.ubar_act[x[a]][*j] {
                    put((*i, rest.clone()), col, &sg * c)?;
                }
            }
            for a in 0..p {
                for b in a + 1..p {
                    let (pa, pb) = (self.par(x[a]), self.par(x[b]));
                    let e = (a + 1) + (b + 1) + pa * self.word_par(&x[..a]) + pb * self.word_par(&x[..b]) + pa * pb;
                    let rest = without(&x, &[a, b]);
                    for (k, c) in &self.ubar_br[x[a]][x[b]] {
                        let mut w = vec![*k];
                        w.extend(&rest);
                        if let Some((sg, w)) = ext_sort(&self.q, &w) {
                            put((*j, mono_of(s, &w)), col, sign(e) * c * sg)?;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix of ∂ on a whole weight block, computed value by value on sorted words.
    pub fn coboundary_matrix(&self, sp: &ChainSpace) -> Result<QMatrix> {
        self.coboundary_with(sp, false)
    }

    /// `inclusive` takes the sign sum of the bracket term over j ≤ t instead of j < t.
    fn coboundary_with(&self, sp: &ChainSpace, inclusive: bool) -> Result<QMatrix> {
        let n = sp.dim();
        let s = self.pd.s();
        let mut m = QMatrix::zeros(n, n);
        let mut put = |row: usize, key: TKey, c: Rat| -> Result<()> {
            let j = sp.index.get(&key).ok_or_else(|| Error::Precondition("∂ leaves the weight block".into()))?;
            m.add_at(row, *j, &c);
            Ok(())
        };
        for (row, (vt, beta)) in sp.keys.iter().enumerate() {
            let x = word_of(beta);
            let p1 = x.len();
            for a in 0..p1 {
                let y = without(&x, &[a]);
                let ym = mono_of(s, &y);
                let before = self.word_par(&x[..a]);
                for (v, c) in &self.u_rows[x[a]][*vt] {
                    let pf = self.module.parity[*v] + self.word_par(&y);
                    let sg = sign(a + 2 + self.par(x[a]) * (pf + before));
                    put(row, (*v, ym.clone()), sg * c)?;
                }
            }
            for a in 0..p1 {
                for b in a + 1..p1 {
                    let (pa, pb) = (self.par(x[a]), self.par(x[b]));
                    let e = (a + 1) + (b + 1) + pa * self.word_par(&x[..a]) + pb * self.word_par(&x[..b + inclusive as usize]) + pa * pb;
                    let rest = without(&x, &[a, b]);
                    for (k, c) in &self.u_br[x[a]][x[b]] {
                        let mut w = vec![*k];
                        w.extend(&rest);
                        if let Some((sg, w)) = ext_sort(&self.q, &w) {
                            put(row, (*vt, mono_of(s, &w)), sign(e) * c * sg)?;
                        }
                    }
                }
            }
        }
        Ok(m)
    }
}

fn fact(n: u32) -> Rat {
    (1..=n as i64).fold(Rat::one(), |a, b| a * rat(b))
}

fn odd_letters(pd: &ParabolicData, beta: &[u32]) -> usize {
    beta.iter().zip(&pd.u_parity).map(|(&k, &p)| k as usize * p).sum()
}

/// Scalar taking the Dirac basis vector v ⊗ ū^β to the chain ū^β ⊗ v: the Koszul sign of the swap.
pub fn chain_identification(pd: &ParabolicData, module: &WeightModule, key: &TKey) -> Rat {
    sign(module.parity[key.0] * odd_letters(pd, &key.1))
}

/// Scalar taking v ⊗ ū^β to the cochain with u^β ↦ v: the pairing of u^β with ū^β
/// contributes β! from the symmetric powers and a sign from reversing the odd letters.
pub fn cochain_identification(pd: &ParabolicData, key: &TKey) -> Rat {
    let o = odd_letters(pd, &key.1);
    let f = key.1.iter().fold(Rat::one(), |a, &k| a * fact(k));
    sign(o * o.saturating_sub(1) / 2) * f
}

fn cols_of(m: &QMatrix, cols: &[usize]) -> QMatrix {
    QMatrix::from_cols(m.rows(), &cols.iter().map(|&j| m.col(j)).collect::<Vec<_>>())
}

fn slice(m: &QMatrix, rows: &[usize], cols: &[usize]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect())
}

/// Per-degree dimensions of one weight block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCohomology {
    pub weight: Weight,
    pub chain: Vec<usize>,
    /// dim H^p(u, M) at this weight.
    pub co: Vec<usize>,
    /// dim H_p(ū, M) at this weight.
    pub ho: Vec<usize>,
    pub square_zero: bool,
}

impl WeightCohomology {
    pub fn euler_chain(&self) -> i64 {
        self.chain.iter().enumerate().map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn euler_co(&self) -> i64 {
        self.co.iter().enumerate().map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn euler_ho(&self) -> i64 {
        self.ho.iter().enumerate().map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn co_total(&self) -> usize {
        self.co.iter().sum()
    }

    pub fn ho_total(&self) -> usize {
        self.ho.iter().sum()
    }

    fn at(v: &[usize], p: usize) -> usize {
        v.get(p).copied().unwrap_or(0)
    }
}

impl Kostant {
    /// d_p at one weight, degree p → p−1.
    pub fn boundary(&self, p: usize, mu: &Weight) -> Result<BlockOperator> {
        let sp = self.space(mu)?;
        let m = self.boundary_matrix(&sp)?;
        let to = p.saturating_sub(1);
        let rows = if p == 0 { Vec::new() } else { sp.in_degree(to) };
        Ok(BlockOperator { weight: mu.clone(), from_degree: p, to_degree: to, matrix: slice(&m, &rows, &sp.in_degree(p)) })
    }

    /// ∂_p at one weight, degree p → p+1.
    pub fn coboundary(&self, p: usize, mu: &Weight) -> Result<BlockOperator> {
        let sp = self.space(mu)?;
        let m = self.coboundary_matrix(&sp)?;
        Ok(BlockOperator {
            weight: mu.clone(),
            from_degree: p,
            to_degree: p + 1,
            matrix: slice(&m, &sp.in_degree(p + 1), &sp.in_degree(p)),
        })
    }

    pub fn weight_cohomology(&self, mu: &Weight) -> Result<WeightCohomology> {
        let sp = self.space(mu)?;
        let dm = self.boundary_matrix(&sp)?;
        let cm = self.coboundary_matrix(&sp)?;
        let top = sp.max_degree();
        let chain: Vec<usize> = (0..=top).map(|p| sp.in_degree(p).len()).collect();
        let rank_d: Vec<usize> = (0..=top).map(|p| cols_of(&dm, &sp.in_degree(p)).rank()).collect();
        let rank_c: Vec<usize> = (0..=top).map(|p| cols_of(&cm, &sp.in_degree(p)).rank()).collect();
        let at = WeightCohomology::at;
        let co = (0..=top).map(|p| chain[p] - rank_c[p] - if p > 0 { rank_c[p - 1] } else { 0 }).collect();
        let ho = (0..=top).map(|p| chain[p] - rank_d[p] - at(&rank_d, p + 1)).collect();
        let square_zero = (&dm * &dm).is_zero() && (&cm * &cm).is_zero();
        Ok(WeightCohomology { weight: mu.clone(), chain, co, ho, square_zero })
    }

    /// Chain weights carrying chains of degree ≤ n, with the least such degree.
    pub fn weights_up_to(&self, n: u32) -> BTreeMap<Weight, u32> {
        let mut out: BTreeMap<Weight, u32> = BTreeMap::new();
        for m in self.cs.monomials_up_to(n) {
            let deg: u32 = m.iter().sum();
            let mw = &self.cs.mono_weight(&m) - &self.pd.rho_u;
            for w in &self.module.weights {
                let e = out.entry(w + &mw).or_insert(deg);
                *e = (*e).min(deg);
            }
        }
        out
    }

    /// Action of a Levi basis element on chains, block μ → block μ + wt(X).
    pub fn chain_action(&self, x: BasisElem, sp: &ChainSpace, to: &ChainSpace) -> Result<QMatrix> {
        let rd = &self.pd.rd;
        let s = self.pd.s();
        let xe = AlgElem::e(x.0, x.1);
        let px = basis_parity(rd, x);
        let ad: Vec<Vec<(usize, Rat)>> =
            self.pd.ubar.iter().map(|y| coords(&self.pd.ubar, &bracket(rd, &xe, y))).collect::<Result<_>>()?;
        let mut m = QMatrix::zeros(to.dim(), sp.dim());
        for (col, (j, beta)) in sp.keys.iter().enumerate() {
            let w = word_of(beta);
            for a in 0..w.len() {
                let sg = sign(px * self.word_par(&w[..a]));
                for (k, c) in &ad[w[a]] {
                    let mut nw = w.clone();
                    nw[a] = *k;
                    if let Some((s2, nw)) = ext_sort(&self.q, &nw) {
                        let i = to.index.get(&(*j, mono_of(s, &nw))).ok_or_else(|| Error::Precondition("action leaves the target block".into()))?;
                        m.add_at(*i, col, &(&sg * c * s2));
                    }
                }
            }
            let sg = sign(px * odd_letters(&self.pd, beta));
            for (i, c) in self.module.act_elem_basis(&xe, *j) {
                let r = to.index.get(&(i, beta.clone())).ok_or_else(|| Error::Precondition("action leaves the target block".into()))?;
                m.add_at(*r, col, &(&sg * c));
            }
        }
        Ok(m)
    }

    /// Action on cochains, (X·f)(w) = X·f(w) − (−1)^{p(X)p(f)} f(X·w), computed value by value.
    pub fn cochain_action(&self, x: BasisElem, sp: &ChainSpace, to: &ChainSpace) -> Result<QMatrix> {
        let rd = &self.pd.rd;
        let s = self.pd.s();
        let xe = AlgElem::e(x.0, x.1);
        let px = basis_parity(rd, x);
        let ad: Vec<Vec<(usize, Rat)>> =
            self.pd.u.iter().map(|y| coords(&self.pd.u, &bracket(rd, &xe, y))).collect::<Result<_>>()?;
        let mut m = QMatrix::zeros(to.dim(), sp.dim());
        for (col, (j, beta)) in sp.keys.iter().enumerate() {
            for (i, c) in self.module.act_elem_basis(&xe, *j) {
                if let Some(r) = to.index.get(&(i, beta.clone())) {
                    m.add_at(*r, col, &c);
                }
            }
        }
        for (row, (vt, beta)) in to.keys.iter().enumerate() {
            let w = word_of(beta);
            let pf = self.module.parity[*vt] + self.word_par(&w) + px;
            for a in 0..w.len() {
                let sg = -sign(px * (pf + self.word_par(&w[..a])));
                for (k, c) in &ad[w[a]] {
                    let mut nw = w.clone();
                    nw[a] = *k;
                    if let Some((s2, nw)) = ext_sort(&self.q, &nw) {
                        if let Some(j) = sp.index.get(&(*vt, mono_of(s, &nw))) {
                            m.add_at(row, *j, &(&sg * c * s2));
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// d and ∂ commute with every Levi basis element on the blocks at the given weights.
    pub fn verify_l_equivariance(&self, weights: &[Weight]) -> Result<bool> {
        let rd = &self.pd.rd;
        for mu in weights {
            let sp = self.space(mu)?;
            let (dm, cm) = (self.boundary_matrix(&sp)?, self.coboundary_matrix(&sp)?);
            for x in self.pd.levi_basis() {
                let to = self.space(&(mu + &basis_weight(rd, x)))?;
                let (dt, ct) = (self.boundary_matrix(&to)?, self.coboundary_matrix(&to)?);
                let xa = self.chain_action(x, &sp, &to)?;
                let xc = self.cochain_action(x, &sp, &to)?;
                if &dt * &xa != &xa * &dm || &ct * &xc != &xc * &cm {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// One weight of one degree in a Kostant report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeWeight {
    pub weight: Weight,
    pub dim_chain: usize,
    pub dim_h: usize,
    pub dim_h_homology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSummary {
    pub p: usize,
    pub weights: Vec<DegreeWeight>,
    /// H^p(u, M) as a sum of simple l-modules, when every weight is l-dominant enough to peel.
    pub l_decomposition: Option<Vec<(Weight, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostantReport {
    pub max_degree: usize,
    pub degrees: Vec<DegreeSummary>,
    pub square_zero: bool,
    /// dim H_p(ū, M)^ν = dim H^p(u, M)^ν at every computed weight and degree.
    pub duality: bool,
    /// Σ (−1)^p dim C^p = Σ (−1)^p dim H^p per weight.
    pub euler_poincare: bool,
    pub weights: Vec<WeightCohomology>,
}

pub fn kostant_cohomology(k: &Kostant, max_degree: usize) -> Result<KostantReport> {
    let ws = k.weights_up_to(max_degree as u32);
    let mut weights = Vec::new();
    for mu in ws.keys() {
        weights.push(k.weight_cohomology(mu)?);
    }
    let at = WeightCohomology::at;
    let mut degrees = Vec::new();
    for p in 0..=max_degree {
        let mut entries = Vec::new();
        let mut ch = BTreeMap::new();
        for wc in &weights {
            let c = at(&wc.chain, p);
            if c == 0 {
                continue;
            }
            let h = at(&wc.co, p);
            entries.push(DegreeWeight { weight: wc.weight.clone(), dim_chain: c, dim_h: h, dim_h_homology: at(&wc.ho, p) });
            if h > 0 {
                ch.insert(wc.weight.clone(), h as i64);
            }
        }
        let l_decomposition = peel_character(&k.pd, &ch).ok();
        degrees.push(DegreeSummary { p, weights: entries, l_decomposition });
    }
    let square_zero = weights.iter().all(|w| w.square_zero);
    let duality = weights.iter().all(|w| w.co == w.ho);
    let euler_poincare = weights.iter().all(|w| w.euler_chain() == w.euler_co() && w.euler_chain() == w.euler_ho());
    Ok(KostantReport { max_degree, degrees, square_zero, duality, euler_poincare, weights })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentificationReport {
    /// C = −2d on every block.
    pub boundary: bool,
    /// C̄ = ∂ on every block.
    pub coboundary: bool,
    pub blocks: usize,
    pub first_failure: Option<Weight>,
}

impl IdentificationReport {
    pub fn all(&self) -> bool {
        self.boundary && self.coboundary
    }
}

/// Compare C with −2d and C̄ with ∂ block by block, on the Dirac weights of oscillator degree ≤ window.
pub fn verify_identification(d: &Dirac, k: &Kostant, window: u32) -> Result<IdentificationReport> {
    let pd = &d.pd;
    let mut rep = IdentificationReport { boundary: true, coboundary: true, ..Default::default() };
    for mu in d.window_weights(window).keys() {
        let b = d.block(mu)?;
        let sp = k.space(&(mu - &pd.rho_u))?;
        if b.keys != sp.keys {
            return Err(Error::Precondition("Dirac and chain blocks do not line up".into()));
        }
        let ch: Vec<Rat> = sp.keys.iter().map(|key| chain_identification(pd, &k.module, key)).collect();
        let co: Vec<Rat> = sp.keys.iter().map(|key| cochain_identification(pd, key)).collect();
        let c = d.block_matrix(Op::C, mu)?;
        let cb = d.block_matrix(Op::CBar, mu)?;
        let dm = k.boundary_matrix(&sp)?;
        let cm = k.coboundary_matrix(&sp)?;
        let n = sp.dim();
        let mut ok = (true, true);
        for i in 0..n {
            for j in 0..n {
                ok.0 &= &ch[i] * c.get(i, j) == dm.get(i, j) * rat(-2) * &ch[j];
                ok.1 &= &co[i] * cb.get(i, j) == cm.get(i, j) * &co[j];
            }
        }
        rep.blocks += 1;
        rep.boundary &= ok.0;
        rep.coboundary &= ok.1;
        if !(ok.0 && ok.1) && rep.first_failure.is_none() {
            rep.first_failure = Some(mu.clone());
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWeight {
    /// Dirac weight; the chain weight is this minus ρ^u.
    pub weight: Weight,
    pub dim_hd: usize,
    pub dim_co: usize,
    pub dim_ho: usize,
    pub kernel_identity: bool,
    /// The block carries a definite pairing under which C̄ is a positive multiple of C†.
    pub pairing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub weights: Vec<EmbeddingWeight>,
    /// dim H_D^μ ≤ dim (H*(u,M) ⊗ C_{ρ^u})^μ and the same for H_*(ū,M), everywhere.
    pub embeds: bool,
    /// The inequalities are equalities everywhere.
    pub equality: bool,
    /// ker D = ker ∂ ∩ ker δ everywhere, with ∂ and δ = −2d carried to M ⊗ M̄(s).
    pub kernel_identity: bool,
    /// The kernel identity on every block that carries the pairing.
    pub kernel_identity_paired: bool,
    pub paired_blocks: usize,
}

impl EmbeddingReport {
    /// The kernel identity is only demanded where the pairing exists.
    pub fn all(&self) -> bool {
        self.embeds && self.kernel_identity_paired
    }
}

/// Does ⟨,⟩ = G_M ⊗ ⟨,⟩_{M̄(s)} make the block a definite space with
/// G C̄ = λ Cᵀ G for one λ > 0?  Then D v = 0 forces C v = C̄ v = 0.
pub fn block_pairing(d: &Dirac, gm: &QMatrix, mu: &Weight) -> Result<bool> {
    use crate::clifford::osc_form;
    let b = d.block(mu)?;
    let n = b.dim();
    let mut g = QMatrix::zeros(n, n);
    for (i, (a, x)) in b.keys.iter().enumerate() {
        for (j, (c, y)) in b.keys.iter().enumerate() {
            let v = gm.get(*a, *c) * osc_form(&d.cs, x, y);
            if !v.is_zero() {
                g.set(i, j, v);
            }
        }
    }
    if !crate::qlinalg::is_positive_definite(&g) {
        return Ok(false);
    }
    let lhs = &g * &d.block_matrix(Op::CBar, mu)?;
    let rhs = &d.block_matrix(Op::C, mu)?.transpose() * &g;
    let mut lambda: Option<Rat> = None;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (lhs.get(i, j), rhs.get(i, j));
            if x.is_zero() && y.is_zero() {
                continue;
            }
            if y.is_zero() {
                return Ok(false);
            }
            let r = x / y;
            match &lambda {
                Some(l) if *l != r => return Ok(false),
                None => lambda = Some(r),
                _ => {}
            }
        }
    }
    Ok(lambda.is_none_or(|l| l.is_positive()))
}

/// Conjugate a chain-basis matrix into Dirac coordinates by a diagonal identification.
fn to_dirac(m: &QMatrix, phi: &[Rat]) -> QMatrix {
    let n = phi.len();
    let mut out = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            if !x.is_zero() {
                out.set(i, j, x * &phi[j] / &phi[i]);
            }
        }
    }
    out
}

/// Dirac cohomology against Kostant (co)homology, weight by weight on the window.
pub fn verify_embedding(d: &Dirac, k: &Kostant, window: u32) -> Result<EmbeddingReport> {
    use crate::dirac::block_cohomology;
    let pd = &d.pd;
    let gm = crate::supermodules::contravariant_form(&k.module).filter(crate::qlinalg::is_positive_definite);
    let mut weights = Vec::new();
    for mu in d.window_weights(window).keys() {
        let hd = block_cohomology(d, mu)?;
        let cmu = mu - &pd.rho_u;
        let wc = k.weight_cohomology(&cmu)?;
        let sp = k.space(&cmu)?;
        let n = sp.dim();
        let ch: Vec<Rat> = sp.keys.iter().map(|key| chain_identification(pd, &k.module, key)).collect();
        let co: Vec<Rat> = sp.keys.iter().map(|key| cochain_identification(pd, key)).collect();
        let delta = to_dirac(&k.boundary_matrix(&sp)?.scale(&rat(-2)), &ch);
        let del = to_dirac(&k.coboundary_matrix(&sp)?, &co);
        let kd = kernel_basis(&d.block_matrix(Op::D, mu)?);
        let both = intersection_basis(n, &kernel_basis(&delta), &kernel_basis(&del));
        weights.push(EmbeddingWeight {
            weight: mu.clone(),
            dim_hd: hd.h_total(),
            dim_co: wc.co_total(),
            dim_ho: wc.ho_total(),
            kernel_identity: same_span(n, &kd, &both),
            pairing: match &gm {
                Some(g) => block_pairing(d, g, mu)?,
                None => false,
            },
        });
    }
    let embeds = weights.iter().all(|w| w.dim_hd <= w.dim_co && w.dim_hd <= w.dim_ho);
    let equality = weights.iter().all(|w| w.dim_hd == w.dim_co && w.dim_hd == w.dim_ho);
    let kernel_identity = weights.iter().all(|w| w.kernel_identity);
    let kernel_identity_paired = weights.iter().all(|w| w.kernel_identity || !w.pairing);
    let paired_blocks = weights.iter().filter(|w| w.pairing).count();
    Ok(EmbeddingReport { weights, embeds, equality, kernel_identity, kernel_identity_paired, paired_blocks })
}

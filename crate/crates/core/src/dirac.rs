//! The cubic Dirac operator D = C + C̄ on M ⊗ M̄(s), per weight block, with
//! its identity checks, Dirac cohomology and index.
//!
//! Tensor vectors are sparse maps (module basis index, monomial) → coefficient.
//! The operator preserves weights, so every computation happens on one finite
//! weight block at a time.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::clifford::{CliffordElem, CliffordS, Mono, MonoCache, Mutation};
use crate::parabolic::ParabolicData;
use crate::qlinalg::{
    column_basis, in_span, intersection_basis, kernel_basis, rat, same_span, sign, span_dim, QMatrix, Rat,
};
use crate::rootdata::{weyl_act, Weight};
use crate::superalg::{basis_parity, bracket, casimir, gl_casimir, AlgElem, BasisElem};
use crate::supermodules::{l_decompose, simple_levi_module, LAmbient, LConstituent, WeightModule};
use crate::{Error, Result};

pub type TKey = (usize, Mono);
pub type TVec = BTreeMap<TKey, Rat>;

fn tv_add(out: &mut TVec, k: TKey, c: Rat) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(&k) {
        Some(e) => {
            *e += c;
            if e.is_zero() {
                out.remove(&k);
            }
        }
        None => {
            out.insert(k, c);
        }
    }
}

pub fn tv_sub(a: &TVec, b: &TVec) -> TVec {
    let mut out = a.clone();
    for (k, c) in b {
        tv_add(&mut out, k.clone(), -c.clone());
    }
    out
}

fn tv_scale(a: &TVec, c: &Rat) -> TVec {
    a.iter().map(|(k, x)| (k.clone(), x * c)).filter(|(_, x)| !x.is_zero()).collect()
}

/// Operators that can be applied to tensor vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    D,
    /// Degree-lowering part Ā + 1⊗a.
    C,
    /// Degree-raising part A + 1⊗ā.
    CBar,
    A,
    ABar,
    CubicA,
    CubicABar,
    /// α(X) for the i-th Levi basis element.
    Alpha(usize),
    OmegaLDelta,
    OmegaG,
}

type SparseAct = Vec<Vec<(usize, Rat)>>;

/// One weight block of M ⊗ M̄(s).
#[derive(Clone, Debug)]
pub struct Block {
    pub weight: Weight,
    pub keys: Vec<TKey>,
    pub index: HashMap<TKey, usize>,
    pub deg_parity: Vec<usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn to_vec(&self, v: &TVec) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (k, c) in v {
            let i = self.index.get(k).ok_or_else(|| {
                Error::Precondition(format!("vector leaves the block at weight {}", self.weight))
            })?;
            out[*i] = c.clone();
        }
        Ok(out)
    }

    pub fn to_tvec(&self, v: &[Rat]) -> TVec {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.keys[i].clone(), c.clone())).collect()
    }
}

/// Everything needed to apply D and its relatives for one (M, parabolic) pair.
pub struct Dirac {
    pub module: WeightModule,
    pub pd: ParabolicData,
    pub cs: CliffordS,
    pub cubic_a: CliffordElem,
    pub cubic_abar: CliffordElem,
    pub levi_basis: Vec<AlgElem>,
    pub mutation: Mutation,
    u_act: Vec<SparseAct>,
    ubar_act: Vec<SparseAct>,
    levi_act: Vec<SparseAct>,
    levi_nu: Vec<CliffordElem>,
    levi_parity: Vec<usize>,
    /// Casimir of l as index pairs into the extended Levi list.
    omega_l: Vec<(usize, usize)>,
    omega_g: SparseAct,
    monos: RefCell<MonoCache>,
    blocks: RefCell<HashMap<Weight, Rc<Block>>>,
    pub max_block: usize,
}

fn sparse_act(m: &WeightModule, x: &AlgElem) -> SparseAct {
    (0..m.dim()).map(|j| m.act_elem_basis(x, j).into_iter().collect()).collect()
}

/// a = −¼ Σ (−1)^{p_i p_j + p_i + p_j} [ū_i, ū_j] u_i u_j and ā = −¼ Σ (−1)^{p_i p_j} [u_i, u_j] ū_i ū_j.
pub fn build_cubic_terms(cs: &CliffordS) -> Result<(CliffordElem, CliffordElem)> {
    let pd = &cs.pd;
    let s = cs.s();
    let p = &pd.u_parity;
    let q = -rat(1) / rat(4);
    let mut a = CliffordElem::zero();
    let mut abar = CliffordElem::zero();
    for i in 0..s {
        for j in 0..s {
            let bb = bracket(&pd.rd, &pd.ubar[i], &pd.ubar[j]);
            if !bb.is_zero() {
                let c = cs.from_g(&bb)?;
                let w = cs.mul(&cs.mul(&c, &CliffordElem::gen(cs.u(i))), &CliffordElem::gen(cs.u(j)));
                a = a.add(&w.scale(&(&q * sign(p[i] * p[j] + p[i] + p[j]))));
            }
            let uu = bracket(&pd.rd, &pd.u[i], &pd.u[j]);
            if !uu.is_zero() {
                let c = cs.from_g(&uu)?;
                let w = cs.mul(&cs.mul(&c, &CliffordElem::gen(cs.ubar(i))), &CliffordElem::gen(cs.ubar(j)));
                abar = abar.add(&w.scale(&(&q * sign(p[i] * p[j]))));
            }
        }
    }
    Ok((a, abar))
}

/// c = (ρ,ρ) − (ρ^l,ρ^l).
pub fn dirac_constant(pd: &ParabolicData) -> Rat {
    let rd = &pd.rd;
    rd.form(&rd.rho(), &rd.rho()) - rd.form(&pd.rho_l, &pd.rho_l)
}

/// c via 1/24 (str_g ad Ω_g − str_l ad Ω_l), each Casimir on its own adjoint representation.
pub fn dirac_constant_trace(pd: &ParabolicData) -> Result<Rat> {
    use crate::superalg::{gl_basis, str_ad_casimir};
    let rd = &pd.rd;
    let lb: Vec<AlgElem> = pd.levi_basis().into_iter().map(|(a, b)| AlgElem::e(a, b)).collect();
    let og = str_ad_casimir(rd, &gl_casimir(rd), &gl_basis(rd));
    let ol = str_ad_casimir(rd, &casimir(rd, &lb)?, &pd.levi_basis());
    Ok((og - ol) / rat(24))
}

impl Dirac {
    pub fn new(module: &WeightModule, pd: &ParabolicData) -> Result<Self> {
        Self::with_mutation(module, pd, Mutation::default())
    }

    pub fn with_mutation(module: &WeightModule, pd: &ParabolicData, mutation: Mutation) -> Result<Self> {
        let rd = &pd.rd;
        for g in crate::superalg::gl_basis(rd) {
            if !module.has_generator(g) {
                return Err(Error::Precondition("module must carry the full gl(m|n) action".into()));
            }
        }
        let cs = CliffordS::with_mutation(pd, mutation);
        let (cubic_a, cubic_abar) = build_cubic_terms(&cs)?;
        let u_act = pd.u.iter().map(|x| sparse_act(module, x)).collect();
        let ubar_act = pd.ubar.iter().map(|x| sparse_act(module, x)).collect();
        let mut levi_basis: Vec<AlgElem> = pd.levi_basis().into_iter().map(|(a, b)| AlgElem::e(a, b)).collect();
        let om = casimir(rd, &levi_basis)?;
        // extend the list by the dual elements so Ω_{l,Δ} is a sum of products of α's
        let nb = levi_basis.len();
        let mut omega_l = Vec::new();
        for (k, (_, y)) in om.pairs.iter().enumerate() {
            levi_basis.push(y.clone());
            omega_l.push((k, nb + k));
        }
        let levi_act = levi_basis.iter().map(|x| sparse_act(module, x)).collect();
        let levi_nu = levi_basis.iter().map(|x| cs.nu_star(x)).collect::<Result<Vec<_>>>()?;
        let levi_parity =
            levi_basis.iter().map(|x| x.terms().next().map_or(0, |(&g, _)| basis_parity(rd, g))).collect();
        let omega_g = crate::supermodules::SparseOp::from_dense(&module.casimir_matrix(&gl_casimir(rd))).cols;
        let max_block = std::env::var("SUPERDIRAC_MAX_DIM").ok().and_then(|v| v.parse().ok()).unwrap_or(2000);
        Ok(Dirac {
            module: module.clone(),
            pd: pd.clone(),
            cs,
            cubic_a,
            cubic_abar,
            levi_basis: levi_basis[..nb].to_vec(),
            mutation,
            u_act,
            ubar_act,
            levi_act,
            levi_nu,
            levi_parity,
            omega_l,
            omega_g,
            monos: RefCell::new(MonoCache::default()),
            blocks: RefCell::new(HashMap::new()),
            max_block,
        })
    }

    pub fn constant(&self) -> Rat {
        dirac_constant(&self.pd)
    }

    pub fn key_weight(&self, k: &TKey) -> Weight {
        &self.module.weights[k.0] + &self.cs.mono_weight(&k.1)
    }

    /// (x ⊗ c)(m ⊗ Y) = (−1)^{p(c)p(m)} xm ⊗ cY, with x or c possibly the identity.
    fn apply_term(
        &self,
        m_act: Option<&SparseAct>,
        c: Option<&CliffordElem>,
        c_par: usize,
        coef: &Rat,
        v: &TVec,
        out: &mut TVec,
    ) {
        let one = [(0usize, Rat::one())];
        let single = c.and_then(|c| match c.0.iter().next() {
            Some((w, x)) if c.0.len() == 1 && w.len() == 1 && x.is_one() => Some(w[0]),
            _ => None,
        });
        for ((j, beta), x) in v {
            let mimg: &[(usize, Rat)] = match m_act {
                Some(a) => &a[*j],
                None => &one,
            };
            if mimg.is_empty() {
                continue;
            }
            let cimg: Vec<(Mono, Rat)> = match (c, single) {
                (_, Some(sym)) => self.cs.osc_gen(sym, beta).map(|(k, m)| (m, k)).into_iter().collect(),
                (Some(c), None) => self.cs.osc_act(c, beta).into_iter().collect(),
                (None, None) => vec![(beta.clone(), Rat::one())],
            };
            let koszul = !self.mutation.koszul && c_par * self.module.parity[*j] % 2 == 1;
            let base = if koszul { -(coef * x) } else { coef * x };
            for (i, a) in mimg {
                let i = if m_act.is_some() { *i } else { *j };
                for (b, y) in &cimg {
                    tv_add(out, (i, b.clone()), &base * a * y);
                }
            }
        }
    }

    fn apply_a(&self, v: &TVec, out: &mut TVec) {
        for i in 0..self.cs.s() {
            let c = CliffordElem::gen(self.cs.ubar(i));
            self.apply_term(Some(&self.u_act[i]), Some(&c), self.pd.u_parity[i], &Rat::one(), v, out);
        }
    }

    fn apply_abar(&self, v: &TVec, out: &mut TVec) {
        for i in 0..self.cs.s() {
            let c = CliffordElem::gen(self.cs.u(i));
            let p = self.pd.u_parity[i];
            self.apply_term(Some(&self.ubar_act[i]), Some(&c), p, &sign(p), v, out);
        }
    }

    fn apply_alpha(&self, i: usize, v: &TVec, out: &mut TVec) {
        self.apply_term(Some(&self.levi_act[i]), None, 0, &Rat::one(), v, out);
        self.apply_term(None, Some(&self.levi_nu[i]), self.levi_parity[i], &Rat::one(), v, out);
    }

    pub fn apply(&self, op: Op, v: &TVec) -> TVec {
        let mut out = TVec::new();
        match op {
            Op::A => self.apply_a(v, &mut out),
            Op::ABar => self.apply_abar(v, &mut out),
            Op::CubicA => self.apply_term(None, Some(&self.cubic_a), 0, &Rat::one(), v, &mut out),
            Op::CubicABar => self.apply_term(None, Some(&self.cubic_abar), 0, &Rat::one(), v, &mut out),
            Op::C => {
                self.apply_abar(v, &mut out);
                self.apply_term(None, Some(&self.cubic_a), 0, &Rat::one(), v, &mut out);
            }
            Op::CBar => {
                self.apply_a(v, &mut out);
                self.apply_term(None, Some(&self.cubic_abar), 0, &Rat::one(), v, &mut out);
            }
            Op::D => {
                self.apply_a(v, &mut out);
                self.apply_abar(v, &mut out);
                self.apply_term(None, Some(&self.cubic_a), 0, &Rat::one(), v, &mut out);
                self.apply_term(None, Some(&self.cubic_abar), 0, &Rat::one(), v, &mut out);
            }
            Op::Alpha(i) => self.apply_alpha(i, v, &mut out),
            Op::OmegaLDelta => {
                for &(x, y) in &self.omega_l {
                    let mut t = TVec::new();
                    self.apply_alpha(y, v, &mut t);
                    self.apply_alpha(x, &t, &mut out);
                }
            }
            Op::OmegaG => self.apply_term(Some(&self.omega_g), None, 0, &Rat::one(), v, &mut out),
        }
        out
    }

    /// Weight block (M ⊗ M̄(s))^μ, enumerated completely.
    pub fn block(&self, mu: &Weight) -> Result<Rc<Block>> {
        if let Some(b) = self.blocks.borrow().get(mu) {
            return Ok(b.clone());
        }
        let mut keys = Vec::new();
        {
            let mut cache = self.monos.borrow_mut();
            for (j, w) in self.module.weights.iter().enumerate() {
                let gamma = &(w + &self.pd.rho_u) - mu;
                for m in cache.get(&self.cs, &gamma) {
                    keys.push((j, m.clone()));
                }
                if keys.len() > self.max_block {
                    return Err(Error::TooLarge(format!(
                        "block at {} exceeds {} (SUPERDIRAC_MAX_DIM)",
                        mu.display(self.pd.rd.m),
                        self.max_block
                    )));
                }
            }
        }
        keys.sort();
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let deg_parity = keys.iter().map(|k| self.cs.deg_parity(&k.1)).collect();
        let b = Rc::new(Block { weight: mu.clone(), keys, index, deg_parity });
        self.blocks.borrow_mut().insert(mu.clone(), b.clone());
        Ok(b)
    }

    pub fn block_matrix(&self, op: Op, mu: &Weight) -> Result<QMatrix> {
        let b = self.block(mu)?;
        let n = b.dim();
        let mut m = QMatrix::zeros(n, n);
        for (j, k) in b.keys.iter().enumerate() {
            let img = self.apply(op, &TVec::from([(k.clone(), Rat::one())]));
            for (key, c) in img {
                let i = b.index.get(&key).ok_or_else(|| Error::Precondition(format!("{op:?} does not preserve weights")))?;
                m.set(*i, j, c);
            }
        }
        Ok(m)
    }

    /// Weights reachable with oscillator degree ≤ n, with the least such degree.
    pub fn window_weights(&self, n: u32) -> BTreeMap<Weight, u32> {
        let mut out: BTreeMap<Weight, u32> = BTreeMap::new();
        for m in self.cs.monomials_up_to(n) {
            let deg: u32 = m.iter().sum();
            let mw = self.cs.mono_weight(&m);
            for w in &self.module.weights {
                let e = out.entry(w + &mw).or_insert(deg);
                *e = (*e).min(deg);
            }
        }
        out
    }

    pub fn top_vector(&self) -> Option<TVec> {
        self.module.top.map(|t| TVec::from([((t, self.cs.vacuum()), Rat::one())]))
    }

    pub fn highest_weight(&self) -> Option<&Weight> {
        self.module.highest_weight.as_ref()
    }
}

/// Result of the identity suite on a window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub square: bool,
    pub invariance: bool,
    pub nilpotency: bool,
    pub blocks: usize,
    pub vectors: usize,
    pub first_failure: Option<String>,
}

impl IdentityReport {
    pub fn all(&self) -> bool {
        self.square && self.invariance && self.nilpotency
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    pub square: bool,
    pub invariance: bool,
    pub nilpotency: bool,
}

impl Checks {
    pub const ALL: Checks = Checks { square: true, invariance: true, nilpotency: true };
}

/// Checks D² = Ω_g − Ω_{l,Δ} + c, [α(X), D] = 0 and C² = C̄² = 0 on every basis
/// vector of every block in the window.
pub fn verify_identities(d: &Dirac, window: u32, checks: Checks) -> Result<IdentityReport> {
    let mut rep = IdentityReport { square: true, invariance: true, nilpotency: true, ..Default::default() };
    let c = d.constant();
    let fail = |rep: &mut IdentityReport, what: &str, mu: &Weight| {
        if rep.first_failure.is_none() {
            rep.first_failure = Some(format!("{what} fails at weight {}", mu.display(d.pd.rd.m)));
        }
    };
    let mut memo = OpMemo::new(d);
    for mu in d.window_weights(window).keys() {
        let b = d.block(mu)?;
        rep.blocks += 1;
        for k in &b.keys {
            rep.vectors += 1;
            let v = TVec::from([(k.clone(), Rat::one())]);
            let dv = memo.apply(Op::D, &v);
            if checks.square && rep.square {
                let lhs = memo.apply(Op::D, &dv);
                let mut rhs = memo.apply(Op::OmegaG, &v);
                rhs = tv_sub(&rhs, &memo.apply(Op::OmegaLDelta, &v));
                tv_add(&mut rhs, k.clone(), c.clone());
                if lhs != rhs {
                    rep.square = false;
                    fail(&mut rep, "square", mu);
                }
            }
            if checks.nilpotency && rep.nilpotency {
                let cv = memo.apply(Op::C, &v);
                let cc = memo.apply(Op::C, &cv);
                let bv = memo.apply(Op::CBar, &v);
                let bb = memo.apply(Op::CBar, &bv);
                if !cc.is_empty() || !bb.is_empty() {
                    rep.nilpotency = false;
                    fail(&mut rep, "nilpotency", mu);
                }
            }
            if checks.invariance && rep.invariance {
                for i in 0..d.levi_basis.len() {
                    let av = memo.apply(Op::Alpha(i), &v);
                    let lhs = memo.apply(Op::D, &av);
                    let rhs = memo.apply(Op::Alpha(i), &dv);
                    if lhs != rhs {
                        rep.invariance = false;
                        fail(&mut rep, "l-invariance", mu);
                        break;
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Operator images of basis vectors, cached.
pub struct OpMemo<'a> {
    d: &'a Dirac,
    map: HashMap<(Op, TKey), TVec>,
}

impl<'a> OpMemo<'a> {
    pub fn new(d: &'a Dirac) -> Self {
        OpMemo { d, map: HashMap::new() }
    }

    pub fn apply(&mut self, op: Op, v: &TVec) -> TVec {
        let mut out = TVec::new();
        for (k, c) in v {
            let img = self
                .map
                .entry((op, k.clone()))
                .or_insert_with(|| self.d.apply(op, &TVec::from([(k.clone(), Rat::one())])));
            for (key, x) in img.iter() {
                tv_add(&mut out, key.clone(), c * x);
            }
        }
        out
    }
}

pub fn verify_square(d: &Dirac, window: u32) -> Result<bool> {
    Ok(verify_identities(d, window, Checks { square: true, invariance: false, nilpotency: false })?.square)
}

pub fn verify_l_invariance(d: &Dirac, window: u32) -> Result<bool> {
    Ok(verify_identities(d, window, Checks { square: false, invariance: true, nilpotency: false })?.invariance)
}

pub fn verify_nilpotency(d: &Dirac, window: u32) -> Result<bool> {
    Ok(verify_identities(d, window, Checks { square: false, invariance: false, nilpotency: true })?.nilpotency)
}

/// Kernels and images of D on one block, split by oscillator degree parity.
#[derive(Clone, Debug)]
pub struct BlockCohomology {
    pub weight: Weight,
    pub dim: usize,
    /// Index 0: even degree, 1: odd degree.
    pub ker: [Vec<Vec<Rat>>; 2],
    pub ker_cap_im: [Vec<Vec<Rat>>; 2],
    pub index: i64,
}

impl BlockCohomology {
    pub fn dim_ker(&self) -> usize {
        self.ker[0].len() + self.ker[1].len()
    }
    pub fn dim_ker_cap_im(&self) -> usize {
        self.ker_cap_im[0].len() + self.ker_cap_im[1].len()
    }
    pub fn h(&self, p: usize) -> usize {
        self.ker[p].len() - self.ker_cap_im[p].len()
    }
    pub fn h_total(&self) -> usize {
        self.h(0) + self.h(1)
    }
}

pub fn block_cohomology(d: &Dirac, mu: &Weight) -> Result<BlockCohomology> {
    let b = d.block(mu)?;
    let n = b.dim();
    let dm = d.block_matrix(Op::D, mu)?;
    let mut ker: [Vec<Vec<Rat>>; 2] = [Vec::new(), Vec::new()];
    let mut cap: [Vec<Vec<Rat>>; 2] = [Vec::new(), Vec::new()];
    for p in 0..2 {
        let cols: Vec<usize> = (0..n).filter(|&i| b.deg_parity[i] == p).collect();
        let other: Vec<usize> = (0..n).filter(|&i| b.deg_parity[i] != p).collect();
        let sub = QMatrix::from_cols(n, &cols.iter().map(|&j| dm.col(j)).collect::<Vec<_>>());
        let k: Vec<Vec<Rat>> = kernel_basis(&sub)
            .into_iter()
            .map(|x| {
                let mut v = vec![Rat::zero(); n];
                for (c, &j) in cols.iter().enumerate() {
                    v[j] = x[c].clone();
                }
                v
            })
            .collect();
        let im = column_basis(&QMatrix::from_cols(n, &other.iter().map(|&j| dm.col(j)).collect::<Vec<_>>()));
        cap[p] = intersection_basis(n, &k, &im);
        ker[p] = k;
    }
    let index = (0..n).map(|i| if b.deg_parity[i] == 0 { 1 } else { -1 }).sum();
    Ok(BlockCohomology { weight: mu.clone(), dim: n, ker, ker_cap_im: cap, index })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Candidates,
    Window(u32),
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "candidates" {
            return Ok(Strategy::Candidates);
        }
        if let Some(n) = s.strip_prefix("window:") {
            return n.parse().map(Strategy::Window).map_err(|_| Error::Parse(format!("bad window depth '{n}'")));
        }
        Err(Error::Parse(format!("unknown strategy '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSummary {
    pub weight: Weight,
    pub dim: usize,
    pub dim_ker: usize,
    pub dim_im_cap_ker: usize,
    pub h_plus: usize,
    pub h_minus: usize,
    pub index: i64,
}

#[derive(Clone, Debug)]
pub struct DiracReport {
    pub strategy: Strategy,
    pub blocks: Vec<BlockSummary>,
    /// l-highest weights of H_D with multiplicities; parity 0 is H_D⁺.
    pub constituents: Vec<LConstituent>,
    /// Σ mult · dim L_l(ν) equals the computed total.
    pub reassembly_consistent: bool,
    /// Theorem prediction ⊕ L_l(w(Λ+ρ) − ρ^l), if Λ is known.
    pub predicted: Vec<Weight>,
    pub matches_prediction: bool,
    /// Window strategy: no cohomology on the outermost degree layer.
    pub boundary_clean: Option<bool>,
    /// The module is atypical and the computed H_D differs from the literal prediction.
    pub discrepancy: bool,
    /// D is the zero operator on every computed block.
    pub d_is_zero: bool,
    pub multiplicity_one: bool,
    /// Δ = D² vanishes on each constituent's scalar c_ν.
    pub delta_eigen_zero: bool,
}

impl DiracReport {
    pub fn h_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.h_plus + b.h_minus).sum()
    }
}

/// {w(Λ+ρ) − ρ^l : w ∈ W, l-dominant integral}, without repetition.
pub fn predicted_constituents(pd: &ParabolicData, lam: &Weight) -> Vec<Weight> {
    let rd = &pd.rd;
    let lr = lam + &rd.rho();
    let mut out: Vec<Weight> = Vec::new();
    for w in rd.weyl_group() {
        let nu = &weyl_act(&w, &lr) - &pd.rho_l;
        if pd.is_levi_dominant_integral(&nu) && !out.contains(&nu) {
            out.push(nu);
        }
    }
    out.sort();
    out
}

/// All weights of the predicted l-modules.
pub fn candidate_weights(pd: &ParabolicData, lam: &Weight) -> Result<BTreeSet<Weight>> {
    let mut out = BTreeSet::new();
    for nu in predicted_constituents(pd, lam) {
        let l = simple_levi_module(pd, &nu)?;
        out.extend(l.weights.iter().cloned());
    }
    Ok(out)
}

struct DiracAmbient<'a> {
    d: &'a Dirac,
    parity: usize,
    support: Vec<Weight>,
    cache: &'a RefCell<HashMap<Weight, BlockCohomology>>,
}

impl DiracAmbient<'_> {
    fn coh(&self, mu: &Weight) -> BlockCohomology {
        if let Some(c) = self.cache.borrow().get(mu) {
            return c.clone();
        }
        let c = block_cohomology(self.d, mu).expect("block within the size cap");
        self.cache.borrow_mut().insert(mu.clone(), c.clone());
        c
    }
}

impl LAmbient for DiracAmbient<'_> {
    fn support(&mut self) -> Vec<Weight> {
        self.support.clone()
    }
    fn piece(&mut self, mu: &Weight) -> (usize, Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
        let c = self.coh(mu);
        (c.dim, c.ker[self.parity].clone(), c.ker_cap_im[self.parity].clone())
    }
    fn raise(&mut self, e: BasisElem, mu: &Weight, v: &[Rat]) -> Vec<Rat> {
        let b = self.d.block(mu).expect("cached");
        let idx = self.d.levi_basis.iter().position(|x| *x == AlgElem::e(e.0, e.1)).expect("Levi root");
        let img = self.d.apply(Op::Alpha(idx), &b.to_tvec(v));
        let tgt = mu + &self.d.pd.rd.root(e);
        let tb = self.d.block(&tgt).expect("target block");
        tb.to_vec(&img).expect("α(X) preserves weights")
    }
}

/// Dirac cohomology with its l-decomposition.
pub fn dirac_cohomology(d: &Dirac, strategy: &Strategy) -> Result<DiracReport> {
    let pd = &d.pd;
    let rd = &pd.rd;
    if !pd.compatible {
        return Err(Error::Incompatible("parabolic is not compatible with the distinguished Borel".into()));
    }
    let lam = d.highest_weight().cloned();
    let (weights, layers): (Vec<Weight>, Option<BTreeMap<Weight, u32>>) = match strategy {
        Strategy::Candidates => {
            let lam = lam.as_ref().ok_or_else(|| Error::Precondition("candidates need a highest weight".into()))?;
            if !rd.is_typical(lam) {
                return Err(Error::Precondition(format!(
                    "{} is atypical; use an explicit window",
                    lam.display(rd.m)
                )));
            }
            (candidate_weights(pd, lam)?.into_iter().collect(), None)
        }
        Strategy::Window(n) => {
            let ww = d.window_weights(*n);
            (ww.keys().cloned().collect(), Some(ww))
        }
    };
    let cache = RefCell::new(HashMap::new());
    let mut blocks = Vec::new();
    let mut d_is_zero = true;
    for mu in &weights {
        let c = block_cohomology(d, mu)?;
        if c.dim_ker() != c.dim {
            d_is_zero = false;
        }
        blocks.push(BlockSummary {
            weight: mu.clone(),
            dim: c.dim,
            dim_ker: c.dim_ker(),
            dim_im_cap_ker: c.dim_ker_cap_im(),
            h_plus: c.h(0),
            h_minus: c.h(1),
            index: c.index,
        });
        cache.borrow_mut().insert(mu.clone(), c);
    }
    let support: Vec<Weight> = blocks.iter().filter(|b| b.h_plus + b.h_minus > 0).map(|b| b.weight.clone()).collect();
    let mut constituents = Vec::new();
    let mut consistent = true;
    for p in 0..2 {
        let sup: Vec<Weight> =
            support.iter().filter(|w| cache.borrow()[*w].h(p) > 0).cloned().collect();
        let mut amb = DiracAmbient { d, parity: p, support: sup, cache: &cache };
        let dec = l_decompose(&mut amb, pd, p)?;
        // in a window the top layer may be cut off, so reassembly is only meaningful when clean
        consistent &= dec.consistent() || layers.is_some();
        constituents.extend(dec.constituents);
    }
    constituents.sort_by(|a, b| a.weight.cmp(&b.weight).then(a.parity.cmp(&b.parity)));
    let predicted = lam.as_ref().map(|l| predicted_constituents(pd, l)).unwrap_or_default();
    let mut observed: Vec<Weight> = constituents.iter().map(|c| c.weight.clone()).collect();
    observed.sort();
    let matches_prediction = lam.is_some() && observed == predicted;
    let boundary_clean = layers.map(|ls| {
        let n = ls.values().copied().max().unwrap_or(0);
        blocks.iter().all(|b| ls[&b.weight] < n || b.h_plus + b.h_minus == 0)
    });
    let atypical = lam.as_ref().is_some_and(|l| !rd.is_typical(l));
    let multiplicity_one = constituents.iter().all(|c| c.multiplicity == 1);
    let delta_eigen_zero = match &lam {
        Some(l) => {
            let cg = rd.form(&(l + &rd.rho().scale(&rat(2))), l);
            constituents.iter().all(|c| {
                let cl = rd.form(&(&c.weight + &pd.rho_l.scale(&rat(2))), &c.weight);
                (&cg - cl + d.constant()).is_zero()
            })
        }
        None => true,
    };
    Ok(DiracReport {
        strategy: strategy.clone(),
        blocks,
        constituents,
        reassembly_consistent: consistent,
        predicted,
        matches_prediction,
        boundary_clean,
        discrepancy: atypical && !matches_prediction,
        d_is_zero,
        multiplicity_one,
        delta_eigen_zero,
    })
}

/// Index character per weight: Σ over the block of (−1)^{degree}, on the window.
pub fn dirac_index(d: &Dirac, window: u32) -> Result<BTreeMap<Weight, i64>> {
    let mut out = BTreeMap::new();
    for mu in d.window_weights(window).keys() {
        let b = d.block(mu)?;
        let x: i64 = b.deg_parity.iter().map(|&p| if p == 0 { 1 } else { -1 }).sum();
        if x != 0 {
            out.insert(mu.clone(), x);
        }
    }
    Ok(out)
}

/// Index versus Σ (dim H_D^{+,μ} − dim H_D^{−,μ}) on every block of a report.
pub fn euler_check(report: &DiracReport) -> bool {
    report.blocks.iter().all(|b| b.index == b.h_plus as i64 - b.h_minus as i64)
}

/// Every constituent ν satisfies ν + ρ^l = w(Λ + ρ + Σ t_i α_i) with α_i odd,
/// (Λ+ρ, α_i) = 0, and (ν+ρ^l, ν+ρ^l) = (Λ+ρ, Λ+ρ).
pub fn casselman_osborne_check(pd: &ParabolicData, lam: &Weight, nus: &[Weight]) -> bool {
    let rd = &pd.rd;
    let lr = lam + &rd.rho();
    let norm = rd.form(&lr, &lr);
    let atyp: Vec<Vec<Rat>> = rd.atypical_roots(lam).into_iter().map(|r| rd.root(r).0).collect();
    nus.iter().all(|nu| {
        let x = nu + &pd.rho_l;
        if rd.form(&x, &x) != norm {
            return false;
        }
        rd.weyl_group().iter().any(|w| {
            let back = weyl_act(&w.inverse(), &x);
            let diff = &back - &lr;
            diff.is_zero() || in_span(rd.rank(), &atyp, &diff.0)
        })
    })
}

/// v_Λ ⊗ 1 lies in ker D and outside Im D.
pub fn non_triviality(d: &Dirac) -> Result<bool> {
    let Some(v) = d.top_vector() else { return Ok(false) };
    let mu = d.key_weight(v.keys().next().unwrap());
    if !d.apply(Op::D, &v).is_empty() {
        return Ok(false);
    }
    let b = d.block(&mu)?;
    let dm = d.block_matrix(Op::D, &mu)?;
    let im = column_basis(&dm);
    Ok(!in_span(b.dim(), &im, &b.to_vec(&v)?))
}

/// ker D = ker C ∩ ker C̄ on one block.
pub fn kernel_identity(d: &Dirac, mu: &Weight) -> Result<bool> {
    let n = d.block(mu)?.dim();
    let kd = kernel_basis(&d.block_matrix(Op::D, mu)?);
    let kc = kernel_basis(&d.block_matrix(Op::C, mu)?);
    let kb = kernel_basis(&d.block_matrix(Op::CBar, mu)?);
    Ok(same_span(n, &kd, &intersection_basis(n, &kc, &kb)))
}

/// (M ⊗ M̄(s))^μ = ker Δ ⊕ Im Δ with Δ = D².
pub fn delta_splits(d: &Dirac, mu: &Weight) -> Result<bool> {
    let dm = d.block_matrix(Op::D, mu)?;
    let delta = &dm * &dm;
    Ok(delta.rank() == (&delta * &delta).rank())
}

/// Σ (dim H^+ − dim H^−) e^μ as a map with zero entries dropped.
pub fn h_euler(report: &DiracReport) -> BTreeMap<Weight, i64> {
    report
        .blocks
        .iter()
        .map(|b| (b.weight.clone(), b.h_plus as i64 - b.h_minus as i64))
        .filter(|(_, v)| *v != 0)
        .collect()
}

pub fn scale_tvec(v: &TVec, c: &Rat) -> TVec {
    tv_scale(v, c)
}

pub fn span_of(vs: &[Vec<Rat>], n: usize) -> usize {
    span_dim(n, vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::parabolic;
    use crate::qlinalg::ratio;
    use crate::rootdata::build_gl;
    use crate::supermodules::kac_module;

    fn setup(m: usize, n: usize, c: &[i64], lam: &[i64]) -> Dirac {
        let rd = build_gl(m, n).unwrap();
        let pd = parabolic(&rd, &c.iter().map(|&x| rat(x)).collect::<Vec<_>>()).unwrap();
        let k = kac_module(&rd, &Weight::from_i64(lam)).unwrap();
        Dirac::new(&k, &pd).unwrap()
    }

    #[test]
    fn cubic_terms() {
        let d = setup(1, 1, &[1, 0], &[1, 0]);
        assert!(d.cubic_a.is_zero() && d.cubic_abar.is_zero());
        let d = setup(2, 1, &[1, 1, 0], &[2, 1, 0]);
        assert!(d.cubic_a.is_zero() && d.cubic_abar.is_zero());
        let d = setup(2, 1, &[2, 1, 0], &[2, 1, 0]);
        assert!(!d.cubic_a.is_zero() && !d.cubic_abar.is_zero());
    }

    #[test]
    fn constants() {
        let rd = build_gl(2, 1).unwrap();
        let pd = parabolic(&rd, &[rat(1), rat(1), rat(0)]).unwrap();
        assert_eq!(dirac_constant(&pd), -ratio(1, 2));
        assert_eq!(dirac_constant_trace(&pd).unwrap(), -ratio(1, 2));
        let pd = parabolic(&build_gl(1, 1).unwrap(), &[rat(1), rat(0)]).unwrap();
        assert_eq!(dirac_constant(&pd), rat(0));
        for (m, n, c) in [(2, 1, vec![2, 1, 0]), (2, 1, vec![1, 0, 0]), (1, 2, vec![1, 1, 0]), (2, 2, vec![1, 0, 0, -1])] {
            let pd = parabolic(&build_gl(m, n).unwrap(), &c.iter().map(|&x| rat(x)).collect::<Vec<_>>()).unwrap();
            assert_eq!(dirac_constant(&pd), dirac_constant_trace(&pd).unwrap());
        }
    }

    #[test]
    fn gl11_blocks() {
        let d = setup(1, 1, &[1, 0], &[1, 0]);
        let top = d.key_weight(&d.top_vector().unwrap().keys().next().unwrap().clone());
        assert_eq!(top, Weight(vec![ratio(1, 2), ratio(1, 2)]));
        assert!(d.apply(Op::D, &d.top_vector().unwrap()).is_empty());
        let alpha = Weight::from_i64(&[1, -1]);
        for t in 1..5 {
            let mu = &top - &alpha.scale(&rat(t));
            let m = d.block_matrix(Op::D, &mu).unwrap();
            assert_eq!((m.rows(), m.cols()), (2, 2));
            assert!(m.get(0, 0).is_zero() && m.get(1, 1).is_zero());
            assert!(!m.get(0, 1).is_zero() && !m.get(1, 0).is_zero());
        }
        let rd = build_gl(1, 1).unwrap();
        let pd = parabolic(&rd, &[rat(1), rat(0)]).unwrap();
        let t = Dirac::new(&WeightModule::trivial(&rd), &pd).unwrap();
        for mu in t.window_weights(4).keys() {
            assert!(t.block_matrix(Op::D, mu).unwrap().is_zero());
        }
    }

    #[test]
    fn identities_small() {
        for (m, n, c, lam) in [
            (1, 1, vec![1, 0], vec![1, 0]),
            (2, 1, vec![2, 1, 0], vec![2, 1, 0]),
            (2, 1, vec![1, 1, 0], vec![2, 1, 0]),
            (2, 1, vec![1, 0, 0], vec![2, 1, 0]),
        ] {
            let d = setup(m, n, &c, &lam);
            let r = verify_identities(&d, 3, Checks::ALL).unwrap();
            assert!(r.all(), "{m}|{n} {c:?}: {r:?}");
        }
    }

    #[test]
    fn gl11_cohomology() {
        let d = setup(1, 1, &[1, 0], &[1, 0]);
        let r = dirac_cohomology(&d, &Strategy::Candidates).unwrap();
        assert_eq!(r.h_dim(), 1);
        assert_eq!(r.constituents.len(), 1);
        assert_eq!(r.constituents[0].weight, Weight(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(r.constituents[0].parity, 0);
        assert!(r.matches_prediction && r.multiplicity_one && r.reassembly_consistent);
        let w = dirac_cohomology(&d, &Strategy::Window(6)).unwrap();
        assert_eq!(w.h_dim(), 1);
        assert!(euler_check(&w));
        assert_eq!(dirac_index(&d, 8).unwrap(), BTreeMap::from([(Weight(vec![ratio(1, 2), ratio(1, 2)]), 1)]));
        assert!(non_triviality(&d).unwrap());
    }

    #[test]
    fn gl21_g0_cohomology() {
        let d = setup(2, 1, &[1, 1, 0], &[2, 1, 0]);
        let r = dirac_cohomology(&d, &Strategy::Candidates).unwrap();
        assert_eq!(r.h_dim(), 2);
        assert_eq!(r.constituents.len(), 1);
        assert_eq!(r.constituents[0].weight, Weight(vec![ratio(3, 2), ratio(1, 2), rat(1)]));
        assert!(r.matches_prediction && r.delta_eigen_zero);
        let nus: Vec<Weight> = r.constituents.iter().map(|c| c.weight.clone()).collect();
        assert!(casselman_osborne_check(&d.pd, &Weight::from_i64(&[2, 1, 0]), &nus));
        assert!(!casselman_osborne_check(&d.pd, &Weight::from_i64(&[2, 1, 0]), &[Weight::from_i64(&[5, 0, 0])]));
        for b in &r.blocks {
            assert!(kernel_identity(&d, &b.weight).unwrap());
            assert!(delta_splits(&d, &b.weight).unwrap());
        }
    }

    #[test]
    fn trivial_gl11() {
        let rd = build_gl(1, 1).unwrap();
        let pd = parabolic(&rd, &[rat(1), rat(0)]).unwrap();
        let d = Dirac::new(&WeightModule::trivial(&rd), &pd).unwrap();
        assert!(dirac_cohomology(&d, &Strategy::Candidates).is_err());
        let r = dirac_cohomology(&d, &Strategy::Window(4)).unwrap();
        assert!(r.d_is_zero);
        assert_eq!(r.h_dim(), 5);
        assert!(r.discrepancy);
        assert!(euler_check(&r));
        let nus: Vec<Weight> = r.constituents.iter().map(|c| c.weight.clone()).collect();
        assert_eq!(nus.len(), 5);
        assert!(casselman_osborne_check(&pd, &Weight::zero(2), &nus));
    }
}

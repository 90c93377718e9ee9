//! Serializable reports. Rationals and weights are carried as strings so the
//! JSON stays exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Conventions every report carries, so a result can be read without the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub form: String,
    pub coordinates: String,
    pub positive_system: String,
    pub nilradical_basis: String,
    pub clifford: String,
    pub koszul: String,
    pub gradings: String,
    pub decomposition: String,
    pub kostant: String,
    pub sign_validations: Vec<String>,
}

impl Conventions {
    pub fn new(validations: &[&str]) -> Self {
        Conventions {
            form: "supertrace (X,Y) = str(XY); on h* diag(+1 for e_i, -1 for d_j)".into(),
            coordinates: "weights printed [e_1..e_m|d_1..d_n]".into(),
            positive_system: "distinguished: e_i - e_j (i<j), d_i - d_j (i<j), e_i - d_j".into(),
            nilradical_basis: "u_i = E_ab with functional(a) > functional(b), even first then lexicographic; ubar_i = E_ba / str(E_bb), so (ubar_i, u_j) = delta_ij".into(),
            clifford: "vw + (-1)^{p(v)p(w)} wv = 2(v,w); u contracts with factor 2".into(),
            koszul: "(x (x) c)(m (x) v) = (-1)^{p(c)p(m)} xm (x) cv".into(),
            gradings: "super-parity and oscillator-degree parity tracked separately; H_D^+ / H_D^- by degree parity".into(),
            decomposition: "D = C + Cbar, C lowers and Cbar raises the oscillator degree; cubic terms are super-even".into(),
            kostant: "C = -2d and Cbar = coboundary after diagonal rescaling of the basis; coboundary sign sum over j < t".into(),
            sign_validations: validations.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub root: String,
    pub element: String,
    pub parity: String,
    pub norm: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub algebra: String,
    pub rank: usize,
    pub form_diagonal: Vec<String>,
    pub positive_roots: Vec<RootEntry>,
    pub simple_roots: Vec<String>,
    pub rho0: String,
    pub rho1: String,
    pub rho: String,
    pub checks: BTreeMap<String, bool>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilEntry {
    pub element: String,
    pub dual: String,
    pub weight: String,
    pub parity: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicReport {
    pub algebra: String,
    pub functional: Vec<String>,
    pub kind: String,
    pub compatible: bool,
    pub levi_roots: Vec<String>,
    pub u: Vec<NilEntry>,
    pub s0: usize,
    pub s1: usize,
    pub rho_l: String,
    pub rho_u: String,
    pub constant: String,
    pub constant_trace: String,
    pub checks: BTreeMap<String, bool>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharEntry {
    pub weight: String,
    pub even: i64,
    pub odd: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub algebra: String,
    pub module: String,
    pub highest_weight: Option<String>,
    pub typical: Option<bool>,
    pub dim: usize,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub character: Vec<CharEntry>,
    pub checks: BTreeMap<String, bool>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub weight: String,
    pub dim: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub dim_ker_cap_im: usize,
    pub h_plus: usize,
    pub h_minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub weight: String,
    pub multiplicity: usize,
    pub parity: String,
    pub atypical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub weight: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiracCliReport {
    pub algebra: String,
    pub functional: Vec<String>,
    pub module: String,
    pub strategy: String,
    pub h_dim: usize,
    pub blocks: Vec<BlockEntry>,
    pub l_decomposition: Vec<Constituent>,
    pub predicted: Vec<String>,
    pub matches_prediction: bool,
    pub discrepancy: bool,
    pub d_is_zero: bool,
    pub boundary_clean: Option<bool>,
    pub index: Vec<IndexEntry>,
    pub checks: BTreeMap<String, bool>,
    pub first_failure: Option<String>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantWeight {
    pub weight: String,
    pub dim_chain: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(rename = "dim_H_homology")]
    pub dim_h_homology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantDegree {
    pub p: usize,
    pub dim_chain: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    pub weights: Vec<KostantWeight>,
    pub l_decomposition: Option<Vec<(String, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantCliReport {
    pub algebra: String,
    pub functional: Vec<String>,
    pub module: String,
    pub max_degree: usize,
    pub degrees: Vec<KostantDegree>,
    pub checks: BTreeMap<String, bool>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub algebra: String,
    pub functional: Vec<String>,
    pub module: String,
    pub window: u32,
    pub index: Vec<IndexEntry>,
    pub h_euler: Vec<IndexEntry>,
    pub matches: bool,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRun {
    pub algebra: String,
    pub functional: Vec<String>,
    pub module: String,
    pub results: BTreeMap<String, bool>,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<String>,
    pub window: u32,
    pub runs: Vec<VerifyRun>,
    pub all_pass: bool,
    pub conventions: Conventions,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let rep = KostantCliReport {
            algebra: "gl(1|1)".into(),
            functional: vec!["1".into(), "0".into()],
            module: "simple [0|0]".into(),
            max_degree: 1,
            degrees: vec![KostantDegree {
                p: 0,
                dim_chain: 1,
                dim_h: 1,
                weights: vec![KostantWeight { weight: "[0|0]".into(), dim_chain: 1, dim_h: 1, dim_h_homology: 1 }],
                l_decomposition: Some(vec![("[0|0]".into(), 1)]),
            }],
            checks: BTreeMap::from([("square_zero".into(), true)]),
            conventions: Conventions::new(&["square_zero"]),
        };
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"dim_H\":1"));
        let back: KostantCliReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
    }
}

//! Cluster characters of modules over Jacobian algebras, the multiplication
//! formula on exact sequences, and cross-checks against seed mutation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::jacobian::{GVector, JacobianError, TruncatedJacobian};
use crate::linalg::IntMatrix;
use crate::potential::QP;
use crate::quiver::{BMatrix, Quiver, QuiverError, Vertex};
use crate::repgrass::{
    a2_ses_data, a3_ses_data, dimension_box, euler_char_with_budget, RepError, RepgrassError, Representation, SESData,
    Side, DEFAULT_BUDGET,
};
use crate::seeds::{explore, laurent_check, LaurentPoly, Seed, SeedError, DEFAULT_SEED_BUDGET};

/// Truncation used when the harness builds Jacobian algebras.
const HARNESS_TRUNCATION: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("vector of length {got} does not match {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error(transparent)]
    Repgrass(#[from] RepgrassError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error("no module catalogue for this quiver with potential: {0}")]
    UnsupportedQuiver(String),
    #[error("unknown suite {0:?} (expected a2, a3 or cycle3)")]
    UnknownSuite(String),
}

/// `ι(e) = -B e`.
pub fn iota(b: &BMatrix, e: &[i64]) -> Result<Vec<i64>, CharacterError> {
    if e.len() != b.size() {
        return Err(CharacterError::LengthMismatch { expected: b.size(), got: e.len() });
    }
    Ok(b.apply(e).into_iter().map(|x| -x).collect())
}

/// A module (on the `Q^op` side) together with the g-vector that fixes the
/// leading monomial of its character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharInput {
    pub module: Representation,
    pub g: GVector,
}

impl CharInput {
    pub fn new(module: Representation, g: GVector) -> Self {
        Self { module, g }
    }

    /// Zero module with `g = δ_i`; its character is `x_i`.
    pub fn shifted_projective(q: &Quiver, i: Vertex) -> Self {
        Self { module: Representation::zero(q, Side::Opposite), g: GVector::unit(q.vertex_count(), i) }
    }

    /// Pairs `m` with its g-vector over `j`.
    pub fn with_g_vector(j: &TruncatedJacobian, m: Representation) -> Result<Self, CharacterError> {
        let g = j.g_vector(&m)?;
        Ok(Self { module: m, g })
    }
}

/// `x^g Σ_e χ(Gr_e(M)) x^{-ι(e)}` over the full box `0 <= e <= dim M`.
pub fn character(qp: &QP, c: &CharInput) -> Result<LaurentPoly, CharacterError> {
    let q = qp.quiver();
    let n = q.vertex_count();
    if c.module.side() != Side::Opposite {
        return Err(RepError::WrongSide { expected: Side::Opposite }.into());
    }
    if c.g.as_slice().len() != n {
        return Err(CharacterError::LengthMismatch { expected: n, got: c.g.as_slice().len() });
    }
    if c.module.dims().len() != n {
        return Err(CharacterError::LengthMismatch { expected: n, got: c.module.dims().len() });
    }
    c.module.check_relations(qp)?;
    let b = q.b_matrix()?;
    let mut out = LaurentPoly::zero(n);
    for e in dimension_box(c.module.dims()) {
        let chi = euler_char_with_budget(q, &c.module, &e, DEFAULT_BUDGET)?.chi;
        if chi.is_zero() {
            continue;
        }
        let ev: Vec<i64> = e.iter().map(|&k| k as i64).collect();
        let shift = iota(&b, &ev)?;
        let exps: Vec<i64> = c.g.as_slice().iter().zip(&shift).map(|(g, s)| g - s).collect();
        out.add_term(exps, chi);
    }
    Ok(out)
}

/// `X_X X_Y = X_E + X_E'` as exact Laurent polynomials.
pub fn check_multiplication(
    qp: &QP,
    x: &CharInput,
    y: &CharInput,
    e: &CharInput,
    e_prime: &CharInput,
) -> Result<bool, CharacterError> {
    let lhs = character(qp, x)?.mul(&character(qp, y)?);
    let rhs = character(qp, e)?.add(&character(qp, e_prime)?);
    Ok(lhs == rhs)
}

/// Multiplication formula on the four modules of `s`, each with its own
/// g-vector.
pub fn check_multiplication_ses(qp: &QP, s: &SESData) -> Result<bool, CharacterError> {
    let j = TruncatedJacobian::new(qp, HARNESS_TRUNCATION);
    let c = |m: &Representation| CharInput::with_g_vector(&j, m.clone());
    check_multiplication(qp, &c(&s.x)?, &c(&s.y)?, &c(&s.e)?, &c(&s.e_prime)?)
}

/// Vertices of a type A quiver in path order, if the underlying graph is a
/// simple path.
pub fn type_a_order(q: &Quiver) -> Option<Vec<Vertex>> {
    let n = q.vertex_count();
    if q.arrows().len() + 1 != n || q.has_loops() {
        return None;
    }
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for a in q.arrows() {
        adj[a.source].push(a.target);
        adj[a.target].push(a.source);
    }
    if adj.iter().any(|v| v.len() > 2) {
        return None;
    }
    let start = (1..=n).find(|&v| adj[v].len() <= 1)?;
    let mut order = vec![start];
    while order.len() < n {
        let cur = *order.last().expect("nonempty");
        let prev = if order.len() > 1 { Some(order[order.len() - 2]) } else { None };
        let next = adj[cur].iter().copied().find(|&w| Some(w) != prev)?;
        order.push(next);
    }
    let mut seen = order.clone();
    seen.sort_unstable();
    seen.dedup();
    (seen.len() == n).then_some(order)
}

/// One-dimensional at `vertices`, identity along arrows between them.
pub fn thin_module(q: &Quiver, vertices: &[Vertex]) -> Representation {
    let dims: Vec<usize> = (1..=q.vertex_count()).map(|v| usize::from(vertices.contains(&v))).collect();
    let maps: Vec<(&str, IntMatrix)> = q
        .arrows()
        .iter()
        .filter(|a| dims[a.source - 1] == 1 && dims[a.target - 1] == 1)
        .map(|a| (a.label.as_str(), IntMatrix::identity(1)))
        .collect();
    Representation::from_labelled(q, dims, &maps, Side::Opposite).expect("thin shapes are consistent")
}

fn is_oriented_three_cycle(q: &Quiver) -> bool {
    q.vertex_count() == 3
        && q.arrows().len() == 3
        && (1..=3).all(|v| q.incoming(v).len() == 1 && q.outgoing(v).len() == 1)
}

/// Indecomposable modules whose characters should be the non-initial
/// cluster variables: interval modules for type A with zero potential; the
/// simples and the arrow modules for the oriented 3-cycle with its cycle as
/// potential.
pub fn module_catalogue(qp: &QP) -> Result<Vec<Representation>, CharacterError> {
    let q = qp.quiver();
    if qp.potential().is_zero() {
        if let Some(order) = type_a_order(q) {
            let n = order.len();
            return Ok((0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| thin_module(q, &order[i..=j])).collect());
        }
    }
    if is_oriented_three_cycle(q) && qp.potential().terms().count() == 1 && qp.potential().terms().all(|(p, _)| p.degree() == 3) {
        let mut out: Vec<Representation> = (1..=3).map(|v| thin_module(q, &[v])).collect();
        out.extend(q.arrows().iter().map(|a| thin_module(q, &[a.source, a.target])));
        return Ok(out);
    }
    Err(CharacterError::UnsupportedQuiver(format!("{q}")))
}

/// Catalogue entries paired with their g-vectors and characters.
#[derive(Clone, Debug)]
pub struct Catalogue {
    pub entries: Vec<(CharInput, LaurentPoly)>,
}

impl Catalogue {
    pub fn for_qp(qp: &QP) -> Result<Self, CharacterError> {
        let j = TruncatedJacobian::new(qp, HARNESS_TRUNCATION);
        let mut inputs: Vec<CharInput> = (1..=qp.quiver().vertex_count())
            .map(|i| CharInput::shifted_projective(qp.quiver(), i))
            .collect();
        for m in module_catalogue(qp)? {
            inputs.push(CharInput::with_g_vector(&j, m)?);
        }
        Self::from_inputs(qp, inputs)
    }

    pub fn from_inputs(qp: &QP, inputs: Vec<CharInput>) -> Result<Self, CharacterError> {
        let entries = inputs
            .into_iter()
            .map(|c| {
                let x = character(qp, &c)?;
                Ok((c, x))
            })
            .collect::<Result<_, CharacterError>>()?;
        Ok(Self { entries })
    }

    /// Entry whose module dimension vector equals the denominator vector of
    /// `v` (zero vector for initial variables, matched by g).
    fn lookup(&self, v: &LaurentPoly) -> Option<&(CharInput, LaurentPoly)> {
        let (_, den) = v.as_fraction();
        let den: Vec<usize> = den.iter().map(|&k| k as usize).collect();
        if den.iter().all(|&k| k == 0) {
            return self.entries.iter().find(|(c, x)| c.module.is_zero() && x == v);
        }
        self.entries.iter().find(|(c, _)| c.module.dims() == den.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMatch {
    pub vertex: Vertex,
    pub variable: String,
    pub module_dims: Option<Vec<usize>>,
    pub g: Option<GVector>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterMatchReport {
    pub sequence: Vec<Vertex>,
    pub matches: Vec<VariableMatch>,
}

impl ClusterMatchReport {
    pub fn passed(&self) -> bool {
        self.matches.iter().all(|m| m.matched)
    }

    pub fn first_mismatch(&self) -> Option<&VariableMatch> {
        self.matches.iter().find(|m| !m.matched)
    }
}

impl fmt::Display for ClusterMatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.sequence.iter().map(ToString::to_string).collect();
        writeln!(f, "sequence: ({})", seq.join(","))?;
        for m in &self.matches {
            let module = match (&m.module_dims, &m.g) {
                (Some(d), Some(g)) => format!("module dims {d:?}, g = {g}"),
                _ => "no catalogue module".to_string(),
            };
            let status = if m.matched { "ok" } else { "MISMATCH" };
            writeln!(f, "  x'_{} = {} <- {} [{status}]", m.vertex, m.variable, module)?;
        }
        Ok(())
    }
}

fn match_cluster(seed: &Seed, catalogue: &Catalogue, seq: &[Vertex]) -> Result<ClusterMatchReport, CharacterError> {
    let mut matches = Vec::new();
    for (k, v) in seed.cluster().iter().enumerate() {
        let lp = laurent_check(v)?;
        let hit = catalogue.lookup(&lp);
        matches.push(VariableMatch {
            vertex: k + 1,
            variable: lp.to_string(),
            module_dims: hit.map(|(c, _)| c.module.dims().to_vec()),
            g: hit.map(|(c, _)| c.g.clone()),
            matched: hit.is_some_and(|(_, x)| x == &lp),
        });
    }
    Ok(ClusterMatchReport { sequence: seq.to_vec(), matches })
}

/// Mutates the initial seed along `seq` and matches every variable of the
/// resulting cluster against the characters of the shipped catalogue.
pub fn verify_mutated_cluster(qp: &QP, seq: &[Vertex]) -> Result<ClusterMatchReport, CharacterError> {
    let catalogue = Catalogue::for_qp(qp)?;
    verify_with_catalogue(qp, &catalogue, seq)
}

/// [`verify_mutated_cluster`] with a caller-supplied catalogue.
pub fn verify_with_catalogue(qp: &QP, catalogue: &Catalogue, seq: &[Vertex]) -> Result<ClusterMatchReport, CharacterError> {
    let seed = Seed::initial((**qp.quiver()).clone())?.mutate_sequence(seq)?;
    match_cluster(&seed, catalogue, seq)
}

/// Runs the cluster check for every mutation sequence of length at most
/// `depth`, sharing mutations between sequences with a common prefix.
/// Returns the number of sequences checked and the first failure.
pub fn verify_all_sequences(qp: &QP, depth: usize) -> Result<(usize, Option<ClusterMatchReport>), CharacterError> {
    let catalogue = Catalogue::for_qp(qp)?;
    let n = qp.quiver().vertex_count();
    let mut stack = vec![(Seed::initial((**qp.quiver()).clone())?, Vec::<Vertex>::new())];
    let mut checked = 0;
    let mut reports: HashMap<Vec<String>, bool> = HashMap::new();
    while let Some((seed, seq)) = stack.pop() {
        checked += 1;
        let key: Vec<String> = seed.cluster().iter().map(ToString::to_string).collect();
        let ok = match reports.get(&key) {
            Some(&ok) => ok,
            None => {
                let report = match_cluster(&seed, &catalogue, &seq)?;
                let ok = report.passed();
                reports.insert(key, ok);
                if !ok {
                    return Ok((checked, Some(report)));
                }
                ok
            }
        };
        if ok && seq.len() < depth {
            for i in 1..=n {
                let mut s2 = seq.clone();
                s2.push(i);
                stack.push((seed.mutate(i)?, s2));
            }
        }
    }
    Ok((checked, None))
}

/// Every cluster variable of the closed exchange graph equals the
/// character of some catalogue entry.
pub fn exchange_graph_matches(qp: &QP, depth: usize) -> Result<(usize, usize, bool), CharacterError> {
    let catalogue = Catalogue::for_qp(qp)?;
    let g = explore(qp.quiver(), depth, DEFAULT_SEED_BUDGET)?;
    let vars = g.laurent_variables()?;
    let matched = vars
        .iter()
        .filter(|v| catalogue.entries.iter().any(|(_, x)| &x == v))
        .count();
    Ok((vars.len(), matched, g.closed))
}

/// One named check inside a suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "suite {}: {}", self.suite, if self.passed() { "all checks passed" } else { "FAILED" })
    }
}

fn push(checks: &mut Vec<Check>, name: &str, passed: bool, detail: impl Into<String>) {
    checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
}

/// Named verification suites: `a2`, `a3` (zero potential) and `cycle3`
/// (oriented 3-cycle with its cycle as potential).
pub fn run_suite(name: &str) -> Result<SuiteReport, CharacterError> {
    let (qp, ses, expected_vars) = match name {
        "a2" => (QP::without_potential(Quiver::from_triples(2, &[(1, 2, "a")])?), a2_ses_data(), 5),
        "a3" => (QP::without_potential(Quiver::from_triples(3, &[(1, 2, "a"), (2, 3, "b")])?), a3_ses_data(), 9),
        "cycle3" => (three_cycle_qp()?, Vec::new(), 9),
        other => return Err(CharacterError::UnknownSuite(other.to_string())),
    };
    let mut checks = Vec::new();
    let q = qp.quiver();
    let n = q.vertex_count();
    let b = q.b_matrix()?;

    let j = TruncatedJacobian::new(&qp, HARNESS_TRUNCATION);
    push(
        &mut checks,
        "jacobian finite",
        j.is_stabilized(),
        format!("dims {:?}, total {}", &j.dims()[..4.min(j.dims().len())], j.total_dimension()),
    );

    let zero_ok = (1..=n).all(|i| {
        character(&qp, &CharInput::shifted_projective(q, i)).is_ok_and(|x| x == LaurentPoly::var(n, i))
    });
    push(&mut checks, "initial variables", zero_ok, "character(0, δ_i) = x_i");

    let iota_ok = (1..=n).all(|i| {
        let mut e = vec![0i64; n];
        e[i - 1] = 1;
        let expect: Vec<i64> = (1..=n).map(|r| -b.get(r, i)).collect();
        iota(&b, &e).is_ok_and(|v| v == expect)
    });
    push(&mut checks, "iota linear rule", iota_ok, "ι(e_i) = -B e_i");

    let (vars, matched, closed) = exchange_graph_matches(&qp, 12)?;
    push(
        &mut checks,
        "exchange graph variables",
        closed && vars == expected_vars && matched == vars,
        format!("{matched} of {vars} variables matched, closure: {}", if closed { "yes" } else { "no" }),
    );

    let (count, failure) = verify_all_sequences(&qp, 6)?;
    let detail = match &failure {
        None => format!("{count} sequences up to length 6"),
        Some(r) => format!("first mismatch\n{r}"),
    };
    push(&mut checks, "mutated clusters", failure.is_none(), detail);

    for (k, s) in ses.iter().enumerate() {
        let tag = format!("sequence {}", k + 1);
        let mult = check_multiplication_ses(&qp, s)?;
        push(&mut checks, &format!("multiplication formula, {tag}"), mult, format!("dims X {:?}, Y {:?}", s.x.dims(), s.y.dims()));
        let mut dich = true;
        let mut ident = true;
        for p in [2, 3, 5] {
            let t = s.strata_counts(p, DEFAULT_BUDGET)?;
            dich &= t.cells.values().all(|c| (c.g > 0) != (c.g_prime > 0));
            ident &= t.identity_violations == 0;
        }
        push(&mut checks, &format!("dichotomy, {tag}"), dich, "q = 2, 3, 5");
        push(&mut checks, &format!("dimension identity, {tag}"), ident, "q = 2, 3, 5");
        let euler = s.euler_identity_check(DEFAULT_BUDGET)?;
        push(&mut checks, &format!("euler identity, {tag}"), euler, "interpolated at q = 1");
    }
    Ok(SuiteReport { suite: name.to_string(), checks })
}

/// `(1 -> 2 -> 3 -> 1, cba)`.
pub fn three_cycle_qp() -> Result<QP, CharacterError> {
    use crate::potential::{Potential, DEFAULT_TRUNC_DEGREE};
    let q = Arc::new(Quiver::from_triples(3, &[(1, 2, "a"), (2, 3, "b"), (3, 1, "c")])?);
    let w = Potential::from_terms(q.clone(), &[(crate::linalg::rational(1), vec!["c", "b", "a"])], DEFAULT_TRUNC_DEGREE)
        .expect("cycle is a potential");
    Ok(QP::new(q, w).expect("potential lives on the quiver"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> QP {
        QP::without_potential(Quiver::from_triples(2, &[(1, 2, "a")]).unwrap())
    }

    fn input(qp: &QP, m: Representation) -> CharInput {
        let j = TruncatedJacobian::new(qp, 10);
        CharInput::with_g_vector(&j, m).unwrap()
    }

    #[test]
    fn iota_examples() {
        let b = a2().quiver().b_matrix().unwrap();
        assert_eq!(iota(&b, &[1, 0]).unwrap(), vec![0, 1]);
        assert_eq!(iota(&b, &[0, 0]).unwrap(), vec![0, 0]);
        let kr = Quiver::from_triples(2, &[(1, 2, "a"), (1, 2, "b")]).unwrap().b_matrix().unwrap();
        assert_eq!(iota(&kr, &[1, 0]).unwrap(), vec![0, 2]);
        assert!(matches!(iota(&b, &[1]), Err(CharacterError::LengthMismatch { .. })));
    }

    #[test]
    fn a2_characters() {
        let qp = a2();
        let q = qp.quiver();
        let s1 = input(&qp, thin_module(q, &[1]));
        assert_eq!(s1.g, GVector(vec![-1, 1]));
        assert_eq!(character(&qp, &s1).unwrap().to_string(), "(x2 + 1)/x1");
        let p = input(&qp, thin_module(q, &[1, 2]));
        assert_eq!(character(&qp, &p).unwrap().to_string(), "(x1 + x2 + 1)/(x1*x2)");
        let s2 = input(&qp, thin_module(q, &[2]));
        assert_eq!(character(&qp, &s2).unwrap().to_string(), "(x1 + 1)/x2");
        let zero = CharInput::new(Representation::zero(q, Side::Opposite), GVector::zero(2));
        assert_eq!(character(&qp, &zero).unwrap(), LaurentPoly::one(2));
        assert!(check_multiplication(&qp, &s1, &s2, &p, &zero).unwrap());
        assert!(!check_multiplication(&qp, &s1, &s2, &p, &s1).unwrap());
    }

    #[test]
    fn monomial_and_extreme_terms() {
        let qp = a2();
        let q = qp.quiver();
        let g = GVector(vec![3, -2]);
        let zero = CharInput::new(Representation::zero(q, Side::Opposite), g.clone());
        assert_eq!(character(&qp, &zero).unwrap(), LaurentPoly::monomial(&[3, -2], 1.into()));
        let p = input(&qp, thin_module(q, &[1, 2]));
        let x = character(&qp, &p).unwrap();
        assert_eq!(x.coefficient(p.g.as_slice()), 1.into());
        let b = q.b_matrix().unwrap();
        let top: Vec<i64> = p.g.as_slice().iter().zip(iota(&b, &[1, 1]).unwrap()).map(|(g, i)| g - i).collect();
        assert_eq!(x.coefficient(&top), 1.into());
    }

    #[test]
    fn direct_sums_multiply() {
        let qp = a2();
        let q = qp.quiver();
        let s1 = input(&qp, thin_module(q, &[1]));
        let p = input(&qp, thin_module(q, &[1, 2]));
        let sum_g = GVector(s1.g.0.iter().zip(&p.g.0).map(|(a, b)| a + b).collect());
        let sum = CharInput::new(s1.module.direct_sum(&p.module).unwrap(), sum_g);
        assert_eq!(character(&qp, &sum).unwrap(), character(&qp, &s1).unwrap().mul(&character(&qp, &p).unwrap()));
    }

    #[test]
    fn mutated_clusters_on_a2() {
        let qp = a2();
        let r = verify_mutated_cluster(&qp, &[1]).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.matches[0].module_dims, Some(vec![1, 0]));
        assert_eq!(r.matches[1].variable, "x2");
        let (count, failure) = verify_all_sequences(&qp, 6).unwrap();
        assert_eq!(count, 127);
        assert!(failure.is_none());
    }

    #[test]
    fn three_cycle_catalogue() {
        let qp = three_cycle_qp().unwrap();
        let j = TruncatedJacobian::new(&qp, 10);
        let s1 = input(&qp, thin_module(qp.quiver(), &[1]));
        assert_eq!(s1.g, GVector(vec![-1, 1, 0]));
        assert_eq!(character(&qp, &s1).unwrap().to_string(), "(x2 + x3)/x1");
        assert!(j.is_stabilized());
        let (vars, matched, closed) = exchange_graph_matches(&qp, 10).unwrap();
        assert_eq!((vars, matched, closed), (9, 9, true));
    }

    #[test]
    fn unsupported_quivers() {
        let kr = QP::without_potential(Quiver::from_triples(2, &[(1, 2, "a"), (1, 2, "b")]).unwrap());
        assert!(matches!(verify_mutated_cluster(&kr, &[1]), Err(CharacterError::UnsupportedQuiver(_))));
        assert!(matches!(run_suite("d4"), Err(CharacterError::UnknownSuite(_))));
    }

    #[test]
    fn type_a_detection() {
        let q = Quiver::from_triples(3, &[(2, 1, "a"), (2, 3, "b")]).unwrap();
        assert_eq!(type_a_order(&q), Some(vec![1, 2, 3]));
        let q = Quiver::from_triples(3, &[(1, 3, "a"), (2, 3, "b")]).unwrap();
        assert_eq!(type_a_order(&q), Some(vec![1, 3, 2]));
        let q = Quiver::from_triples(4, &[(1, 2, "a"), (1, 3, "b"), (1, 4, "c")]).unwrap();
        assert_eq!(type_a_order(&q), None);
    }
}

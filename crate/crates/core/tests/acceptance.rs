//! Acceptance checks. Prints one `[pass]`/`[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpchar::character::{
    character, check_multiplication_ses, exchange_graph_matches, three_cycle_qp, verify_all_sequences, CharInput,
};
use qpchar::jacobian::TruncatedJacobian;
use qpchar::linalg::rational;
use qpchar::potential::{Potential, DEFAULT_TRUNC_DEGREE, QP};
use qpchar::quiver::{Arrow, Quiver};
use qpchar::repgrass::{
    a2_ses_data, a3_ses_data, euler_char, euler_chars, interval_module, Representation, SESData, Side, DEFAULT_BUDGET,
};
use qpchar::seeds::{explore, LaurentPoly, Seed, DEFAULT_SEED_BUDGET};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn qp_of(n: usize, arrows: &[(usize, usize, &str)], terms: &[&[&str]]) -> QP {
    let q = Arc::new(Quiver::from_triples(n, arrows).unwrap());
    let terms: Vec<_> = terms.iter().map(|t| (rational(1), t.to_vec())).collect();
    let w = Potential::from_terms(q.clone(), &terms, DEFAULT_TRUNC_DEGREE).unwrap();
    QP::new(q, w).unwrap()
}

fn a2() -> QP {
    qp_of(2, &[(1, 2, "a")], &[])
}

fn a3() -> QP {
    qp_of(3, &[(1, 2, "a"), (2, 3, "b")], &[])
}

fn random_quiver(rng: &mut ChaCha8Rng) -> Quiver {
    let n = rng.gen_range(1..=6);
    let mut arrows = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let m = rng.gen_range(0..=3);
            let (s, t) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            for k in 0..m {
                arrows.push(Arrow::new(s, t, format!("a{s}_{t}_{k}")));
            }
        }
    }
    Quiver::new(n, arrows).unwrap()
}

fn quiver_matrix_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..500 {
        let q = random_quiver(&mut rng);
        let k = rng.gen_range(1..=q.vertex_count());
        let b = q.b_matrix().map_err(|e| e.to_string())?;
        let mutated = q.mutate(k).map_err(|e| e.to_string())?;
        ensure(mutated.b_matrix().unwrap() == b.mutate(k), || format!("case {case}: mutation at {k} disagrees on {q}"))?;
        ensure(b.mutate(k).mutate(k) == b, || format!("case {case}: double mutation at {k} is not the identity"))?;
        ensure(mutated.mutate(k).unwrap().b_matrix().unwrap() == b, || {
            format!("case {case}: double quiver mutation at {k} changes the B-matrix")
        })?;
    }
    Ok("500 random quivers".into())
}

fn arrow_set(q: &Quiver) -> Vec<(usize, usize, String)> {
    q.arrows().iter().map(|a| (a.source, a.target, a.label.clone())).collect()
}

fn qp_mutation_golden() -> Outcome {
    let qp = three_cycle_qp().map_err(|e| e.to_string())?;
    let red = qp.premutate(1).and_then(|p| p.reduce()).map_err(|e| e.to_string())?;
    let reduced = arrow_set(red.reduced.quiver());
    ensure(reduced == vec![(2, 1, "a*".into()), (1, 3, "c*".into())], || format!("reduced quiver {reduced:?}"))?;
    ensure(red.reduced.potential().is_zero(), || "reduced potential is not zero".into())?;
    let trivial = arrow_set(red.trivial.quiver());
    ensure(trivial == vec![(3, 2, "[ac]".into()), (2, 3, "b".into())], || format!("trivial quiver {trivial:?}"))?;
    let wt = red.trivial.potential().to_terms();
    ensure(wt == vec![(rational(1), vec!["[ac]".to_string(), "b".to_string()])], || format!("trivial potential {wt:?}"))?;
    let back = red.reduced.mutate(1).map_err(|e| e.to_string())?;
    ensure(back.quiver().b_matrix().unwrap() == qp.quiver().b_matrix().unwrap(), || "B-matrix not restored".into())?;
    let dims = TruncatedJacobian::new(&back, DEFAULT_TRUNC_DEGREE).dims().to_vec();
    ensure(dims == TruncatedJacobian::new(&qp, DEFAULT_TRUNC_DEGREE).dims(), || format!("dims {dims:?}"))?;
    ensure(dims[..3] == [3, 3, 0], || format!("dims {dims:?}"))?;
    Ok("reduced ({2->1, 1->3}, 0), trivial ({b, [ac]}, [ac]b), involution restores dims 3+3".into())
}

fn jacobian_dimensions() -> Outcome {
    let a2j = TruncatedJacobian::new(&a2(), DEFAULT_TRUNC_DEGREE);
    ensure(a2j.total_dimension() == 3 && a2j.is_stabilized(), || format!("A2 dims {:?}", a2j.dims()))?;
    let cyc = TruncatedJacobian::new(&three_cycle_qp().unwrap(), DEFAULT_TRUNC_DEGREE);
    ensure(cyc.total_dimension() == 6 && cyc.is_stabilized(), || format!("3-cycle dims {:?}", cyc.dims()))?;
    let lp = Quiver::with_loops(1, vec![Arrow::new(1, 1, "l")]).unwrap();
    let lj = TruncatedJacobian::new(&QP::without_potential(lp), 16);
    ensure(!lj.is_stabilized(), || "loop reported stabilized".into())?;
    Ok(format!("3, 6, loop not stabilized at 16 ({} so far)", lj.total_dimension()))
}

fn cluster_combinatorics() -> Outcome {
    let g2 = explore(a2().quiver(), 10, DEFAULT_SEED_BUDGET).map_err(|e| e.to_string())?;
    let v2 = g2.laurent_variables().map_err(|e| e.to_string())?;
    ensure(g2.closed && v2.len() == 5 && g2.seeds.len() == 5, || {
        format!("A2: {} variables, {} seeds, closed {}", v2.len(), g2.seeds.len(), g2.closed)
    })?;
    let s = Seed::initial((**a2().quiver()).clone()).unwrap().mutate_sequence(&[1, 2, 1, 2, 1]).unwrap();
    let swapped: Vec<String> = s.cluster().iter().map(ToString::to_string).collect();
    ensure(swapped == ["x2", "x1"], || format!("(1,2,1,2,1) gives {swapped:?}"))?;
    let g3 = explore(a3().quiver(), 20, DEFAULT_SEED_BUDGET).map_err(|e| e.to_string())?;
    let v3 = g3.laurent_variables().map_err(|e| e.to_string())?;
    ensure(g3.closed && v3.len() == 9 && g3.seeds.len() == 14, || {
        format!("A3: {} variables, {} seeds, closed {}", v3.len(), g3.seeds.len(), g3.closed)
    })?;
    ensure(v2.iter().chain(&v3).all(LaurentPoly::all_positive), || "a variable has a negative coefficient".into())?;
    Ok("A2 5 variables / 5 seeds, A3 9 variables / 14 seeds, all positive Laurent".into())
}

fn euler_characteristics() -> Outcome {
    let point = Quiver::new(1, vec![]).unwrap();
    let m = Representation::simple_like(&point, vec![2], Side::Opposite);
    let ec = euler_char(&point, &m, &[1]).map_err(|e| e.to_string())?;
    let coeffs: Vec<BigInt> = ec.polynomial.coefficients().to_vec();
    ensure(coeffs == [BigInt::from(1), BigInt::from(1)], || format!("polynomial {}", ec.polynomial))?;
    ensure(ec.chi == BigInt::from(2), || format!("chi {}", ec.chi))?;
    ensure(ec.sample_primes.iter().all(|p| !ec.check_primes.contains(p)), || "prime sets overlap".into())?;
    let mut strata = 0;
    for qp in [a2(), a3()] {
        let q = qp.quiver();
        let n = q.vertex_count();
        for lo in 1..=n {
            for hi in lo..=n {
                let m = interval_module(q, lo, hi, Side::Opposite);
                for (e, chi) in euler_chars(q, &m, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
                    // submodules of an interval module are its prefixes [lo, k]
                    let prefix = (lo - 1..=hi).any(|k| (1..=n).all(|v| e[v - 1] == usize::from(lo <= v && v <= k)));
                    let expected = BigInt::from(u8::from(prefix));
                    ensure(chi == expected, || format!("[{lo},{hi}] on {n} vertices, e = {e:?}: chi {chi}"))?;
                    strata += 1;
                }
            }
        }
    }
    Ok(format!("q + 1 with chi 2; {strata} interval strata in {{0, 1}}"))
}

fn character_oracle() -> Outcome {
    let mut total = 0;
    for (name, qp) in [("A2", a2()), ("A3", a3())] {
        let (vars, matched, closed) = exchange_graph_matches(&qp, 20).map_err(|e| e.to_string())?;
        ensure(closed && vars == matched, || format!("{name}: {matched} of {vars} variables matched"))?;
        let n = qp.quiver().vertex_count();
        for i in 1..=n {
            let x = character(&qp, &CharInput::shifted_projective(qp.quiver(), i)).map_err(|e| e.to_string())?;
            ensure(x == LaurentPoly::var(n, i), || format!("{name}: shifted projective {i} gives {x}"))?;
        }
        let (checked, failure) = verify_all_sequences(&qp, 6).map_err(|e| e.to_string())?;
        if let Some(r) = failure {
            return Err(format!("{name}: {r}"));
        }
        total += checked;
    }
    Ok(format!("every variable of A2 and A3 matched; {total} mutation sequences up to length 6"))
}

fn qp_for(s: &SESData) -> QP {
    QP::without_potential((*s.quiver).clone())
}

fn shipped_ses() -> Vec<SESData> {
    a2_ses_data().into_iter().chain(a3_ses_data()).collect()
}

fn multiplication_formula() -> Outcome {
    let data = shipped_ses();
    for (k, s) in data.iter().enumerate() {
        let ok = check_multiplication_ses(&qp_for(s), s).map_err(|e| e.to_string())?;
        ensure(ok, || format!("exact sequence {k} fails the multiplication formula"))?;
    }
    Ok(format!("{} exact-sequence pairs", data.len()))
}

fn dichotomy() -> Outcome {
    let data = shipped_ses();
    for (k, s) in data.iter().enumerate() {
        s.validate().map_err(|e| format!("sequence {k}: {e}"))?;
        for p in [2, 3, 5] {
            if let Some(f) = s.dichotomy_failure(p, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
                return Err(format!("sequence {k}, q = {p}: {f:?}"));
            }
            let ok = s.dimension_identity_check(p, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(ok, || format!("sequence {k}, q = {p}: dimension identity fails"))?;
        }
        let ok = s.euler_identity_check(DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(ok, || format!("sequence {k}: Euler identity fails"))?;
    }
    Ok(format!("{} sequences over F_2, F_3, F_5 plus the Euler identity", data.len()))
}

fn nondegeneracy_probe() -> Outcome {
    let cyc = three_cycle_qp().unwrap().probe_nondegeneracy(4);
    ensure(cyc.no_obstruction() && cyc.depth_checked == 4, || format!("3-cycle: {cyc:?}"))?;
    let two = qp_of(2, &[(1, 2, "a"), (2, 1, "b")], &[&["b", "a"]]).probe_nondegeneracy(4);
    ensure(two.depth_checked == 1 && two.obstructions == vec![vec![1], vec![2]], || format!("2-cycle: {two:?}"))?;
    Ok(format!("3-cycle clean to depth 4 ({} states); 2-cycle obstructed at 1 and 2", cyc.states_explored))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 quiver/matrix mutation agreement", quiver_matrix_agreement),
        ("2 QP mutation of the 3-cycle", qp_mutation_golden),
        ("3 Jacobian dimensions", jacobian_dimensions),
        ("4 exchange graphs of A2 and A3", cluster_combinatorics),
        ("5 Euler characteristics", euler_characteristics),
        ("6 characters equal cluster variables", character_oracle),
        ("7 multiplication formula", multiplication_formula),
        ("8 dichotomy and dimension identities", dichotomy),
        ("9 non-degeneracy probe", nondegeneracy_probe),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[pass] criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

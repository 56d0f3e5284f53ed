//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! `cargo test --test acceptance -- --seed N` reruns the randomized parts
//! with another seed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use falg::algebroid::{
    check_f_algebroid, check_prelie_com, AlgebroidPresentation, OpTable, Section,
};
use falg::constructions::{fm2, load_fixture, monomial_sections, semisimple, truncated_polynomials, FiniteAlgebra};
use falg::deformation::{
    check_n_deformation, coboundary_matrix, cochain_coordinates, cochain_from_coords, cohomology_point, equivalence_check,
    extend, obstruction, semiclassical_limit, solve_equivalence, DefComplex, FormalDeformation, MultiDer,
};
use falg::duality::{
    deform_by_nijenhuis, dubrovin_dual, is_nijenhuis, nijenhuis_from_eventual, pre_f_dual, BundleMap, EventualKind,
    NijenhuisMode,
};
use falg::exprparse::{parse_ast, parse_expr, print_ratfunc, Expr};
use falg::hierarchy::{
    eventual_identity_flows, flow_commutator, flow_from_section, flows_commute, principal_hierarchy, Connection,
    HydroFlow, JetPoly,
};
use falg::ring::{q, qq, Monomial, Poly, RatFunc, Rational, VectorField};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 20_240_917;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes(label: &str, r: falg::Result<falg::report::Report>) -> Outcome {
    let r = r.map_err(|e| format!("{label}: {e}"))?;
    ensure(r.overall(), || format!("{label}: {}", r.first_failure().map_or(String::new(), |c| format!("{c:?}"))))
}

fn fx(name: &str) -> Result<AlgebroidPresentation, String> {
    load_fixture(name).map_err(|e| format!("{name}: {e}"))
}

fn u(n: usize, i: usize) -> RatFunc {
    RatFunc::var(n, i)
}

fn ac1() -> Outcome {
    let fm2 = fm2().presentation("FM2").map_err(|e| e.to_string())?;
    passes("FM2", check_f_algebroid(&fm2))?;
    passes("ACT2", check_f_algebroid(&fx("ACT2")?))?;
    passes("TR", check_prelie_com(&fx("TR")?))?;
    passes("TR2", check_prelie_com(&fx("TR2")?))?;
    let dn = fx("DN2-3")?;
    passes("DN2", check_prelie_com(&dn))?;
    // Ψ on all monomial fields of degree ≤ 3, not just the frame.
    let secs = monomial_sections(2, 3);
    for (lx, x) in &secs {
        for (j, (ly, y)) in secs.iter().enumerate() {
            for (lz, z) in &secs[j..] {
                let r = dn.psi(x, y, z).map_err(|e| e.to_string())?;
                ensure(r.is_zero(), || format!("DN2 Psi({lx}, {ly}, {lz}) != 0"))?;
            }
        }
    }
    for n in 1..=3 {
        let ss = semisimple(n).map_err(|e| e.to_string())?;
        passes(&format!("SS{n}"), check_f_algebroid(&ss))?;
        passes(&format!("SS{n}"), check_prelie_com(&ss))?;
    }
    Ok(())
}

fn ac2() -> Outcome {
    for name in ["SS3", "ACT2"] {
        let a = fx(name)?;
        let r = a.rank();
        let basis: Vec<Section> = (0..r).map(|i| a.basis(i)).collect();
        for mu in 0..a.nvars() {
            let f = a.var(mu);
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        for l in 0..r {
                            let (x, y, z, w) = (&basis[i], &basis[j], &basis[k], &basis[l]);
                            let base = a.phi(x, y, z, w).map_err(|e| e.to_string())?.scale(&f);
                            let first = a.phi(&x.scale(&f), y, z, w).map_err(|e| e.to_string())?;
                            let third = a.phi(x, y, &z.scale(&f), w).map_err(|e| e.to_string())?;
                            ensure((&first - &base).is_zero() && (&third - &base).is_zero(), || {
                                format!("{name}: Phi not tensorial at ({i},{j},{k},{l}) for {}", a.base_vars()[mu])
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn ac3() -> Outcome {
    let a = fx("SS2")?;
    let n = 2;
    let ev = Section::new(vec![u(n, 0), u(n, 1)]);
    for (kind, cert) in [("F", dubrovin_dual(&a, &ev)), ("pre-F", pre_f_dual(&a, &ev))] {
        let cert = cert.map_err(|e| format!("{kind}: {e}"))?;
        let want = OpTable::from_fn(2, |i, j| {
            if i == j {
                Section::scaled_basis(2, i, &u(n, i))
            } else {
                Section::zero(2, n)
            }
        });
        let dual = cert.dual.product().map_err(|e| e.to_string())?;
        ensure(*dual == want, || format!("{kind}: dual product {dual:?}"))?;
        let inv = Section::new(vec![u(n, 0).recip().unwrap(), u(n, 1).recip().unwrap()]);
        ensure(cert.dual.identity() == Some(&inv), || format!("{kind}: dual identity"))?;
        let again = match kind {
            "F" => dubrovin_dual(&cert.dual, &cert.e_dagger),
            _ => pre_f_dual(&cert.dual, &cert.e_dagger),
        }
        .map_err(|e| format!("{kind} second dual: {e}"))?;
        ensure(again.dual.product().ok() == a.product().ok(), || format!("{kind}: second dual product differs"))?;
        ensure(again.dual.identity() == a.identity(), || format!("{kind}: second dual identity differs"))?;
        passes(kind, cert.verify_involution())?;
    }
    Ok(())
}

fn same_tables(x: &AlgebroidPresentation, y: &AlgebroidPresentation) -> bool {
    x.product().ok() == y.product().ok()
        && x.bracket_table().ok() == y.bracket_table().ok()
        && x.prelie_table().ok() == y.prelie_table().ok()
        && x.anchor().ok() == y.anchor().ok()
}

fn ac4() -> Outcome {
    let a = fx("SS2")?;
    let n = 2;
    let nmap = BundleMap::diagonal(vec![u(n, 0), u(n, 1)]);
    for mode in NijenhuisMode::ALL {
        passes(mode.name(), is_nijenhuis(&a, &nmap, mode))?;
    }
    let once = deform_by_nijenhuis(&a, &nmap).map_err(|e| e.to_string())?;
    passes("deformed", check_f_algebroid(&once))?;
    let twice = deform_by_nijenhuis(&once, &nmap).map_err(|e| e.to_string())?;
    let squared = deform_by_nijenhuis(&a, &nmap.compose(&nmap)).map_err(|e| e.to_string())?;
    ensure(same_tables(&twice, &squared), || "double deformation differs from N^2 deformation".into())?;
    let ev = Section::new(vec![u(n, 0), u(n, 1)]);
    let from_ev = nijenhuis_from_eventual(&a, &ev, EventualKind::F).map_err(|e| e.to_string())?;
    let c_n = deform_by_nijenhuis(&a, &from_ev).map_err(|e| e.to_string())?;
    let c_e = dubrovin_dual(&a, &ev).map_err(|e| e.to_string())?;
    ensure(c_n.product().ok() == c_e.dual.product().ok(), || "c_N differs from c_E".into())
}

/// `μ1(E_i, E_j) = E_i·D(E_j)` with `D(E_k) = k E_k` on `ℚ[u]/(u^4)`.
fn derivation_mu(a: &AlgebroidPresentation) -> Result<MultiDer, String> {
    let d = BundleMap::diagonal((0..4).map(|k| RatFunc::from_int(0, k)).collect());
    let t = OpTable::from_fn(4, |i, j| a.multiply(&a.basis(i), &d.apply(&a.basis(j))).unwrap());
    MultiDer::degree2(&t, vec![VectorField::zero(0); 4]).map_err(|e| e.to_string())
}

fn random_coords(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| q(rng.gen_range(-3..=3))).collect()
}

fn ac5(seed: u64) -> Outcome {
    let base = truncated_polynomials(4).map_err(|e| e.to_string())?;
    let mu1 = derivation_mu(&base)?;
    let two = FormalDeformation::new(base.clone(), vec![mu1.clone(), MultiDer::zero(2, 4, 0)], false).map_err(|e| e.to_string())?;
    passes("order 2", check_n_deformation(&two))?;
    let one = FormalDeformation::new(base.clone(), vec![mu1], false).map_err(|e| e.to_string())?;
    let lim = semiclassical_limit(&one).map_err(|e| e.to_string())?;
    let d = BundleMap::diagonal((0..4).map(|k| RatFunc::from_int(0, k)).collect());
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (base.basis(i), base.basis(j));
            let want = &base.multiply(&x, &d.apply(&y)).unwrap() - &base.multiply(&y, &d.apply(&x)).unwrap();
            ensure(lim.bracket(&x, &y).unwrap() == want, || format!("bracket at (E{}, E{})", i + 1, j + 1))?;
        }
    }
    ensure(obstruction(&one).map_err(|e| e.to_string())?.is_zero(), || "Theta_1 != 0".into())?;
    extend(&one, &MultiDer::zero(2, 4, 0)).map_err(|e| format!("extend: {e}"))?;

    let alg = fm2().presentation("FM2").map_err(|e| e.to_string())?;
    let cx = DefComplex::commutative(&alg).map_err(|e| e.to_string())?;
    let h2 = cohomology_point(&fm2(), 2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..100 {
        let phi = cochain_from_coords(1, 2, &random_coords(&mut rng, cochain_coordinates(1, 2).len()));
        let psi = cochain_from_coords(2, 2, &random_coords(&mut rng, cochain_coordinates(2, 2).len()));
        for w in [&phi, &psi] {
            let dd = cx.d(&cx.d(w).unwrap()).unwrap();
            ensure(dd.is_zero(), || format!("case {case}: d d != 0 in degree {}", w.degree()))?;
        }
        // A random cocycle: coboundary plus a combination of class representatives.
        let mut mu = cx.d(&phi).unwrap();
        for rep in &h2.representatives {
            mu = &mu + &rep.scale(&RatFunc::constant(0, q(rng.gen_range(-3..=3))));
        }
        let def = FormalDeformation::new(alg.clone(), vec![mu], false).unwrap();
        passes(&format!("case {case} valid 1-deformation"), check_n_deformation(&def))?;
        let theta = obstruction(&def).map_err(|e| e.to_string())?;
        ensure(cx.d(&theta).unwrap().is_zero(), || format!("case {case}: d Theta_1 != 0"))?;
    }
    Ok(())
}

/// Rank by fraction-free elimination on a copy, independent of the library solver.
fn oracle_rank(m: &[Vec<Rational>]) -> usize {
    let mut m = m.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let v = &m[r][k] * &pivot - &f * &m[rank][k];
                    m[r][k] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_algebra(rng: &mut ChaCha8Rng) -> FiniteAlgebra {
    // Commutative associative: a quotient of ℚ[x] by x^3 twisted by a random unit scalar.
    let s = q(rng.gen_range(1..=4));
    let mut product = vec![vec![vec![q(0); 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i + j < 3 {
                product[i + j][i][j] = if i > 0 && j > 0 { s.clone() } else { Rational::one() };
            }
        }
    }
    FiniteAlgebra {
        dim: 3,
        product,
        bracket: None,
        prelie: None,
    }
}

fn ac6(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
    let algebras = [("FM2", fm2()), ("random", random_algebra(&mut rng))];
    for (name, alg) in &algebras {
        let a = alg.presentation(name).map_err(|e| e.to_string())?;
        let cx = DefComplex::commutative(&a).map_err(|e| e.to_string())?;
        for k in [2, 3] {
            let h = cohomology_point(alg, k).map_err(|e| e.to_string())?;
            let din = coboundary_matrix(&a, k - 1).map_err(|e| e.to_string())?;
            let dout = coboundary_matrix(&a, k).map_err(|e| e.to_string())?;
            let (ri, ro) = (oracle_rank(&din), oracle_rank(&dout));
            let dim = cochain_coordinates(k, a.rank()).len();
            ensure(h.dd_zero, || format!("{name}: d d != 0 in degree {k}"))?;
            ensure(h.dimension == dim - ro - ri && h.representatives.len() == h.dimension, || {
                format!("{name}: H^{k} = {} but rank-nullity gives {}", h.dimension, dim - ro - ri)
            })?;
            for rep in &h.representatives {
                ensure(cx.d(rep).unwrap().is_zero(), || format!("{name}: representative is not closed"))?;
            }
        }
        let h2 = cohomology_point(alg, 2).map_err(|e| e.to_string())?;
        let mu = h2.representatives.first().cloned().unwrap_or_else(|| MultiDer::zero(2, a.rank(), 0));
        let phi0 = cochain_from_coords(1, a.rank(), &random_coords(&mut rng, cochain_coordinates(1, a.rank()).len()));
        let shifted = &mu + &cx.d(&phi0).unwrap();
        let phi = solve_equivalence(&a, &shifted, &mu).map_err(|e| format!("{name}: {e}"))?;
        passes(name, equivalence_check(&a, &shifted, &mu, &phi))?;
        let Some(rep) = h2.representatives.last() else {
            return Err(format!("{name}: H^2 is zero, no inequivalent shift to test"));
        };
        let off = &mu + rep;
        ensure(solve_equivalence(&a, &off, &mu).is_err(), || format!("{name}: non-coboundary shift solved"))?;
    }
    Ok(())
}

fn random_univariate(rng: &mut ChaCha8Rng, n: usize, i: usize) -> RatFunc {
    let mut p = Poly::zero(n);
    for d in 0..=3u32 {
        let mut e = vec![0; n];
        e[i] = d;
        p = &p + &Poly::term(Monomial::from_exponents(e), q(rng.gen_range(-3..=3)));
    }
    RatFunc::from_poly(p)
}

fn ac7(seed: u64) -> Outcome {
    let a = fx("SS2")?;
    let n = 2;
    let e = a.identity().cloned().ok_or("SS2 has no identity")?;
    let euler = Section::new(vec![u(n, 0), u(n, 1)]);
    let fe = flow_from_section(&a, &e).map_err(|e| e.to_string())?;
    let fu = flow_from_section(&a, &euler).map_err(|e| e.to_string())?;
    passes("e/Euler flows", flows_commute(&fe, &fu))?;
    let h = principal_hierarchy(&a, &Connection::zero(n), &[a.basis(0), a.basis(1)], 2).map_err(|e| e.to_string())?;
    for p in 0..n {
        let want1 = Section::scaled_basis(n, p, &u(n, p));
        let want2 = Section::scaled_basis(n, p, &u(n, p).pow(2).scale(&qq(1, 2)));
        ensure(h.table[p][1] == want1 && h.table[p][2] == want2, || format!("levels of p = {}", p + 1))?;
    }
    ensure(h.report.overall(), || h.report.summary())?;
    let flows: Vec<HydroFlow> = h.table.iter().flatten().map(|x| flow_from_section(&a, x).unwrap()).collect();
    ensure(flows.len() == 6, || "expected six flows".into())?;
    for i in 0..6 {
        for j in i + 1..6 {
            passes(&format!("hierarchy flows {i},{j}"), flows_commute(&flows[i], &flows[j]))?;
        }
    }
    let z = RatFunc::zero(n);
    let f = HydroFlow::new(vec![vec![u(n, 1), z.clone()], vec![z.clone(), z.clone()]]).unwrap();
    let g = HydroFlow::new(vec![vec![u(n, 0), z.clone()], vec![z.clone(), z]]).unwrap();
    let res = flow_commutator(&f, &g).map_err(|e| e.to_string())?;
    let want = &(&JetPoly::from_ratfunc(u(n, 0)) * &JetPoly::ux(n, 0)) * &JetPoly::ux(n, 1);
    ensure(res[0] == want && res[1].is_zero(), || format!("designated residual {res:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    for case in 0..50 {
        let n = rng.gen_range(1..=3);
        let t = semisimple(n).map_err(|e| e.to_string())?;
        let e1 = Section::new((0..n).map(|i| random_univariate(&mut rng, n, i)).collect());
        let e2 = Section::new((0..n).map(|i| random_univariate(&mut rng, n, i)).collect());
        passes(&format!("case {case} (n = {n})"), eventual_identity_flows(&t, &e1, &e2))?;
    }
    Ok(())
}

const FUZZ_ALPHABET: &[&str] = &[
    "u1", "u2", "x", "0", "1", "7", "12", "+", "-", "*", "/", "^", "(", ")", " ", "^2", "3/", "**", ".", "#", "é", "",
];

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            Expr::int(rng.gen_range(-9..=9))
        } else {
            Expr::Var(["u1", "u2"][rng.gen_range(0..2)].into())
        };
    }
    let a = Box::new(random_expr(rng, depth - 1));
    let b = Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..6) {
        0 => Expr::Add(a, b),
        1 => Expr::Sub(a, b),
        2 => Expr::Mul(a, b),
        3 => Expr::Div(a, b),
        4 => Expr::Pow(a, rng.gen_range(0..4)),
        _ => Expr::Neg(a),
    }
}

fn ac8(seed: u64) -> Outcome {
    let vars = vec!["u1".to_string(), "u2".to_string()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    for case in 0..10_000 {
        let len = rng.gen_range(0..24);
        let s: String = (0..len).map(|_| FUZZ_ALPHABET[rng.gen_range(0..FUZZ_ALPHABET.len())]).collect();
        let ok = catch_unwind(AssertUnwindSafe(|| {
            let _ = parse_expr(&s, &vars);
            let _ = parse_ast(&s);
        }))
        .is_ok();
        ensure(ok, || format!("fuzz case {case} aborted on {s:?}"))?;
    }
    let mut done = 0;
    while done < 100 {
        let e = random_expr(&mut rng, 4);
        let Ok(value) = e.eval(&vars) else { continue };
        let text = e.to_string();
        let back = parse_ast(&text).map_err(|err| format!("{text}: {err}"))?;
        ensure(back == e, || format!("AST round trip changed {text}"))?;
        let f = parse_expr(&text, &vars).map_err(|err| format!("{text}: {err}"))?;
        ensure(f == value, || format!("{text} evaluates differently after printing"))?;
        let printed = print_ratfunc(&f, &vars);
        let g = parse_expr(&printed, &vars).map_err(|err| format!("{printed}: {err}"))?;
        ensure(g == f, || format!("{printed} does not reparse to itself"))?;
        done += 1;
    }
    Ok(())
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed = args
        .iter()
        .position(|a| a == "--seed")
        .and_then(|i| args.get(i + 1))
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("fixture validation", Box::new(ac1)),
        ("tensoriality of Phi", Box::new(ac2)),
        ("Dubrovin involution", Box::new(ac3)),
        ("Nijenhuis suite", Box::new(ac4)),
        ("deformation suite", Box::new(move || ac5(seed))),
        ("cohomology over a point", Box::new(move || ac6(seed))),
        ("hierarchy suite", Box::new(move || ac7(seed))),
        ("parser robustness", Box::new(move || ac8(seed))),
    ];
    println!("acceptance (seed {seed})");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] AC{} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] AC{} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

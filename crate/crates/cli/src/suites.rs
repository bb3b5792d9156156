//! The verification suites behind `solvir verify`.
//!
//! Every suite returns a list of [`Check`]s. Random inputs come from
//! ChaCha8 seeded with the run seed, one stream per suite, and are drawn
//! before any parallel work starts.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use solvir::algebra::{jacobi_box_scan, jacobi_residual, vir_bracket, Algebra, AlgebraElement, BasisSymbol, BoxScan};
use solvir::cocycle::{
    coboundary, cocycle_box_scan, h2_rank_experiment, normalize_cocycle, recognize_eta, solve_functional_equation, OneCochain, TwoCochain,
};
use solvir::density::{classify_density, density_act, density_axiom_residual, density_axiom_scan, duality_check, submodule_invariance_check, DensityParams, DensityVector};
use solvir::gvm::{double_factorial_bound, gvm_act, quotient_dim_level1, GvmVector};
use solvir::induced::{Monomial, Vacuum};
use solvir::verma::{family_lower_bound, singular_residuals, verma_act, weight_space_dim_truncated, TruncationBox, VermaVector};
use solvir::{box_points, LatticePoint, Rational, Scalar, Var};

use crate::config::RunConfig;

/// Failures listed in a report beyond this count are only counted.
const MAX_LISTED: usize = 20;

pub const SUITES: [&str; 5] = ["jacobi", "cocycle", "density", "verma", "gvm"];

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub inputs: Value,
    pub checked: u64,
    pub failures: Vec<String>,
    pub detail: Value,
}

impl Check {
    fn new(id: &str, inputs: Value) -> Self {
        Check { id: id.to_string(), inputs, checked: 0, failures: Vec::new(), detail: json!({}) }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "inputs": self.inputs,
            "checked": self.checked,
            "status": if self.passed() { "pass" } else { "fail" },
            "failure_count": self.failures.len(),
            "failures": self.failures.iter().take(MAX_LISTED).collect::<Vec<_>>(),
            "detail": self.detail,
        })
    }
}

/// Runs one suite. `Err` is a usage problem (exit 2), such as an unreadable
/// input file.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<Check>, String> {
    let stream = SUITES.iter().position(|s| *s == name).ok_or_else(|| format!("unknown suite `{name}`"))? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    match name {
        "jacobi" => Ok(jacobi(cfg, &mut rng)),
        "cocycle" => cocycle(cfg, &mut rng),
        "density" => Ok(density(cfg, &mut rng)),
        "verma" => Ok(verma(cfg, &mut rng)),
        "gvm" => Ok(gvm(cfg, &mut rng)),
        _ => unreachable!(),
    }
}

fn pt(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> LatticePoint {
    let c: Vec<i64> = (0..rank).map(|_| rng.gen_range(-r..=r)).collect();
    LatticePoint::new(&c)
}

fn small_int(rng: &mut ChaCha8Rng) -> Scalar {
    let k = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Scalar::from_int(k)
}

/// A combination of up to three basis vectors with small integer
/// coefficients, sometimes with a central term.
fn random_element(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> AlgebraElement {
    let mut x = AlgebraElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        x.add_term(BasisSymbol::E(pt(rng, rank, r)), small_int(rng));
    }
    if rng.gen_bool(0.3) {
        x.add_term(BasisSymbol::Central, small_int(rng));
    }
    x
}

fn scan_failures(scan: &BoxScan) -> Vec<String> {
    scan.failures.iter().map(|[a, b, k]| format!("{a} {b} {k}")).collect()
}

fn jacobi(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (n, r) = (cfg.n, cfg.radius("jacobi"));
    let mut out = Vec::new();

    let scan = jacobi_box_scan(n, r);
    let mut c = Check::new("jacobi.basis_triples", json!({"n": n, "box": r}));
    c.checked = scan.checked;
    c.failures = scan_failures(&scan);
    // distinct unordered triples plus the antisymmetry pairs; the residual
    // is alternating, so this covers every ordered triple
    let side = (2 * r + 1).pow(n as u32);
    c.detail = json!({"triples_checked": scan.checked, "ordered_triples_covered": side.pow(3)});
    out.push(c);

    let mut c = Check::new("jacobi.random_elements", json!({"n": n, "box": r, "samples": 20}));
    for _ in 0..20 {
        let (x, y, z) = (random_element(rng, n, r), random_element(rng, n, r), random_element(rng, n, r));
        let res = jacobi_residual(&x, &y, &z).expect("same rank");
        c.expect(res.is_zero(), || format!("{x} | {y} | {z}"));
    }
    out.push(c);

    let mut c = Check::new("jacobi.antisymmetry_random", json!({"n": n, "box": r, "samples": 20}));
    for _ in 0..20 {
        let (x, y) = (random_element(rng, n, r), random_element(rng, n, r));
        let s = &vir_bracket(&x, &y).unwrap() + &vir_bracket(&y, &x).unwrap();
        c.expect(s.is_zero(), || format!("{x} | {y}"));
    }
    out.push(c);
    out
}

fn random_one_cochain(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> OneCochain {
    let mut f = OneCochain::zero();
    for _ in 0..rng.gen_range(1..=6) {
        let a = pt(rng, rank, r);
        let q = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        f.insert(a.clone(), &f.get(&a) + &Scalar::from_rational(q));
    }
    f
}

fn cocycle(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, String> {
    let (n, r) = (cfg.n, cfg.radius("cocycle"));
    let mut out = Vec::new();
    let (theta, source) = match &cfg.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            (text.parse::<TwoCochain>().map_err(|e| format!("{}: {e}", path.display()))?, path.display().to_string())
        }
        None => (TwoCochain::canonical(), "canonical".to_string()),
    };

    let scan = cocycle_box_scan(&theta, n, r);
    let mut c = Check::new("cocycle.condition", json!({"n": n, "box": r, "cochain": source}));
    c.checked = scan.checked;
    c.failures = scan_failures(&scan);
    c.detail = json!({"triples_checked": scan.checked});
    out.push(c);
    if cfg.input.is_some() {
        return Ok(out);
    }

    let samples = 25;
    let mut c = Check::new("cocycle.normalization", json!({"n": n, "box": r, "samples": samples}));
    let (twelfth, minus_twelfth) = (Scalar::from_rational(Rational::new(1, 12)), Scalar::from_rational(Rational::new(-1, 12)));
    for _ in 0..samples {
        let f = random_one_cochain(rng, n, r);
        // δf restricted to α + β = 0 is −2 f(0) μ·α: it moves b, never a
        let drift = f.get(&LatticePoint::zero(n)).scale(&Rational::from_integer(-2));
        let text = f.to_string().trim().replace('\n', "; ");
        let with = TwoCochain::canonical().add(&coboundary(&f));
        let fit = normalize_cocycle(&with, n, r).and_then(|nz| recognize_eta(&nz.eta));
        c.expect(matches!(&fit, Ok((a, b)) if *a == twelfth && *b == &minus_twelfth + &drift), || format!("canonical + δf, f = {text}: {fit:?}"));
        let fit = normalize_cocycle(&coboundary(&f), n, r).and_then(|nz| recognize_eta(&nz.eta));
        c.expect(matches!(&fit, Ok((a, b)) if a.is_zero() && *b == drift), || format!("δf, f = {text}: {fit:?}"));
    }
    out.push(c);

    let sol = solve_functional_equation(10);
    let mut c = Check::new("cocycle.functional_equation", json!({"degree_bound": 10}));
    c.expect(sol.kernel == [1, 3], || format!("kernel {:?}", sol.kernel));
    c.detail = json!({
        "kernel": sol.kernel,
        "factors": sol.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    });
    out.push(c);

    let mut c = Check::new("cocycle.h2_quotient", json!({"n": n, "box": r}));
    match h2_rank_experiment(n, r) {
        Ok(rep) => {
            c.expect(rep.quotient_dim == 1, || format!("quotient dimension {}", rep.quotient_dim));
            c.detail = json!({
                "cocycle_space_dim": rep.cocycle_space_dim,
                "coboundary_space_dim": rep.coboundary_space_dim,
                "quotient_dim": rep.quotient_dim,
                "degree_bound": rep.degree_bound,
            });
        }
        Err(e) => c.expect(false, || e.to_string()),
    }
    out.push(c);

    let alg = Algebra::new(n);
    let mut c = Check::new("cocycle.vir_i_coefficients", json!({"n": n}));
    let mut found = BTreeMap::new();
    for i in 1..=n {
        let mu = Scalar::mu(i);
        let want_a = mu.scale(&Rational::new(1, 12));
        let want_b = Scalar::one().checked_div(&mu.scale(&Rational::from_integer(-12))).expect("nonzero");
        match alg.vir_i_cocycle_coefficients(i) {
            Ok((a, b)) => {
                c.expect(a == want_a && b == want_b && !a.is_zero(), || format!("axis {i}: ({a}, {b})"));
                found.insert(i.to_string(), json!([a.to_string(), b.to_string()]));
            }
            Err(e) => c.expect(false, || format!("axis {i}: {e}")),
        }
    }
    c.detail = json!({"coefficients": found});
    out.push(c);
    Ok(out)
}

fn density(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (n, r, rs) = (cfg.n, cfg.radius("density"), cfg.radius("density_sub"));
    let formal = DensityParams::formal();
    let mut out = Vec::new();

    let scan = density_axiom_scan(&formal, n, r).expect("formal parameters");
    let mut c = Check::new("density.axiom_exhaustive", json!({"n": n, "box": r, "params": "formal"}));
    c.checked = scan.checked;
    c.failures = scan.failures.iter().map(|(a, b, k)| format!("{a} {b} v{k}")).collect();
    out.push(c);

    let mut c = Check::new("density.axiom_random", json!({"n": n, "box": rs, "samples": 100, "params": "formal"}));
    for _ in 0..100 {
        let (x, y) = (random_element(rng, n, rs), random_element(rng, n, rs));
        let mut v = DensityVector::zero();
        for _ in 0..rng.gen_range(1..=2) {
            v.add_term(pt(rng, n, rs), small_int(rng));
        }
        let res = density_axiom_residual(&x, &y, &v, &formal).expect("same rank");
        c.expect(res.is_zero(), || format!("{x} | {y} | {v}"));
    }
    out.push(c);

    let gamma = LatticePoint::new(&(1..=n as i64).map(|i| if i % 2 == 1 { 1 } else { -1 }).collect::<Vec<_>>());
    let cases: Vec<(&str, DensityParams, &str)> = vec![
        ("formal", formal.clone(), "Irreducible"),
        ("a=0,b=0", DensityParams::new(Scalar::zero(), Scalar::zero()), "ReducibleTrivialSub"),
        ("a=0,b=1", DensityParams::new(Scalar::zero(), Scalar::one()), "ReducibleCodimOne"),
        ("a=mu.g,b=0", DensityParams::lattice(gamma.clone(), Scalar::zero()), "ReducibleTrivialSub"),
        ("a=mu.g,b=1", DensityParams::lattice(gamma.clone(), Scalar::one()), "ReducibleCodimOne"),
        ("a=mu.g,b=1/2", DensityParams::lattice(gamma.clone(), Scalar::from_rational(Rational::new(1, 2))), "Irreducible"),
        ("a=1/3,b=0", DensityParams::new(Scalar::from_rational(Rational::new(1, 3)), Scalar::zero()), "Irreducible"),
        ("a=formal,b=1", DensityParams::new(Scalar::var(Var::A), Scalar::one()), "Irreducible"),
    ];
    let mut c = Check::new("density.classification", json!({"n": n, "g": gamma.coords()}));
    let mut got = BTreeMap::new();
    for (label, p, want) in &cases {
        let class = classify_density(p, n);
        c.expect(class.name() == *want, || format!("{label}: {} (expected {want})", class.name()));
        got.insert(label.to_string(), class.name());
    }
    c.detail = json!({ "classes": got });
    out.push(c);

    let mut c = Check::new("density.submodules", json!({"n": n, "box": rs}));
    for (label, p, _) in cases.iter().filter(|(_, _, w)| *w != "Irreducible") {
        match submodule_invariance_check(p, n, rs) {
            Ok(rep) => {
                c.checked += (rep.invariance_checked + rep.generation_checked) as u64;
                for a in &rep.invariance_failures {
                    c.failures.push(format!("{label}: E{a} leaves the submodule"));
                }
                for (k, l) in &rep.generation_failures {
                    c.failures.push(format!("{label}: v{k} does not reach v{l}"));
                }
            }
            Err(e) => c.expect(false, || format!("{label}: {e}")),
        }
    }
    out.push(c);

    let mut c = Check::new("density.duality", json!({"n": n, "box": rs, "params": "formal"}));
    let pts = box_points(n, rs);
    for a in &pts {
        for g in &pts {
            let res = duality_check(&formal, a, g);
            c.expect(res.is_zero(), || format!("E{a} on w{g}: {res}"));
        }
    }
    out.push(c);
    out
}

/// Partition numbers by the pentagonal-number recurrence, independent of
/// any word enumeration.
pub fn partition_numbers(k: usize) -> Vec<u64> {
    let mut p = vec![0i64; k + 1];
    p[0] = 1;
    for m in 1..=k {
        let mut acc = 0i64;
        for j in 1i64.. {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p.into_iter().map(|x| x as u64).collect()
}

fn verma(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();

    let mut c = Check::new("verma.rank1_partitions", json!({"n": 1, "levels": "0..=6", "mu1": "1"}));
    let oracle = partition_numbers(6);
    let mut dims = Vec::new();
    for (k, want) in oracle.iter().enumerate() {
        let kk = k.max(1);
        let d = weight_space_dim_truncated(&LatticePoint::new(&[-(k as i64)]), TruncationBox::new(kk as i64, kk).unwrap()) as u64;
        dims.push(d);
        c.expect(d == *want, || format!("level {k}: {d} words, p({k}) = {want}"));
    }
    c.detail = json!({"dims": dims, "partitions": oracle});
    out.push(c);

    // e₋₁v in M(0,0), first symbolically in μ₁, then at the classical point
    let mut c = Check::new("verma.rank1_singular_e_minus_one", json!({"n": 1, "box": 3, "lambda": "0", "c": "0", "mu1": "1"}));
    let v = VermaVector::monomial(Monomial::new(vec![LatticePoint::new(&[-1])], Vacuum).unwrap());
    let bx = TruncationBox::new(3, 3).unwrap();
    let zero = Scalar::zero();
    let mut mu_one = BTreeMap::new();
    mu_one.insert(Var::mu(1), cfg.spec.get(&Var::mu(1)).cloned().unwrap_or_else(Rational::one));
    match singular_residuals(&v, 1, bx, &zero, &zero) {
        Ok(res) => {
            for (g, r) in &res {
                c.expect(r.is_zero(), || format!("E{g}: {r}"));
                let sp = r.map_coefficients(|x| x.substitute(&mu_one)).map(|x| x.is_zero());
                c.expect(sp == Ok(true), || format!("E{g} at mu1: {r}"));
            }
            c.detail = json!({"raising_tested": res.keys().map(|g| g.to_string()).collect::<Vec<_>>()});
        }
        Err(e) => c.expect(false, || e.to_string()),
    }
    // sanity: with λ formal the same vector is not singular
    if let Ok(res) = singular_residuals(&v, 1, bx, &Scalar::var(Var::Lambda), &zero) {
        c.expect(res.values().any(|r| !r.is_zero()), || "E(-1)v singular for formal lambda".to_string());
    }
    out.push(c);

    let nmax = cfg.radius("verma");
    let shift = LatticePoint::new(&[-1, 0]);
    let mut c = Check::new("verma.growth", json!({"n": 2, "shift": [-1, 0], "boxes": format!("1..={nmax}"), "L": "2N+1"}));
    let mut table = Vec::new();
    let mut prev: Option<usize> = None;
    for nb in 1..=nmax {
        let bx = TruncationBox::new(nb, 2 * nb as usize + 1).unwrap();
        let d = weight_space_dim_truncated(&shift, bx);
        let fam = family_lower_bound(&shift, bx);
        c.expect(prev.is_none_or(|p| d > p), || format!("N = {nb}: {d} not above {prev:?}"));
        c.expect(d >= fam && fam as i64 >= nb, || format!("N = {nb}: {d} below family bound {fam}"));
        table.push(json!({"N": nb, "L": 2 * nb + 1, "dim": d, "family_lower_bound": fam}));
        prev = Some(d);
    }
    c.detail = json!({ "table": table });
    out.push(c);

    let n = cfg.n;
    let mut c = Check::new("verma.module_axiom", json!({"n": n, "box": 2, "samples": 20}));
    let (lam, cc) = (Scalar::var(Var::Lambda), Scalar::var(Var::C));
    for _ in 0..20 {
        let x = AlgebraElement::e(pt(rng, n, 2));
        let y = AlgebraElement::e(pt(rng, n, 2));
        let mut w: Vec<LatticePoint> = (0..rng.gen_range(0..=2)).map(|_| pt(rng, n, 2)).filter(LatticePoint::is_lex_negative).collect();
        w.sort();
        let v = VermaVector::monomial(Monomial::new(w, Vacuum).unwrap());
        let lhs = verma_act(&x, &verma_act(&y, &v, &lam, &cc), &lam, &cc).sub(&verma_act(&y, &verma_act(&x, &v, &lam, &cc), &lam, &cc));
        let rhs = verma_act(&vir_bracket(&x, &y).unwrap(), &v, &lam, &cc);
        c.expect(lhs == rhs, || format!("{x} | {y} | {v}"));
    }
    out.push(c);
    out
}

fn gvm(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let rmax = cfg.radius("gvm");
    let radii: Vec<i64> = (1..=rmax).collect();
    let formal = DensityParams::formal();
    let (bound_text, bound) = double_factorial_bound(1);
    let mut out = Vec::new();
    for k in [-1i64, 0, 1] {
        let kappa = LatticePoint::new(&[k]);
        let mut c = Check::new(&format!("gvm.level1_bound.kappa={k}"), json!({"n": 2, "kappa": [k], "boxes": format!("1..={rmax}"), "params": "formal"}));
        match quotient_dim_level1(&kappa, &formal, &radii) {
            Ok(rep) => {
                c.expect(rep.is_monotone(), || "ranks are not monotone".to_string());
                c.expect(rep.stabilized, || "ranks did not stabilize".to_string());
                c.expect(rep.boxes.iter().all(|b| b.rank >= 1), || "rank 0 at some box".to_string());
                // the bound is strict: dim < 1·3
                c.expect((rep.max_rank() as u128) < bound, || format!("rank {} is not below {bound_text} = {bound}", rep.max_rank()));
                let boxes: Vec<Value> = rep.boxes.iter().map(|b| json!({"radius": b.radius, "rows": b.rows, "cols": b.cols, "rank": b.rank})).collect();
                c.detail = json!({"boxes": boxes, "stabilized": rep.stabilized, "bound": bound_text});
            }
            Err(e) => c.expect(false, || e.to_string()),
        }
        out.push(c);
    }

    let mut c = Check::new("gvm.base_matches_density", json!({"n": 2, "box": 3, "params": "formal"}));
    for g in box_points(1, 3) {
        for k in box_points(1, 3) {
            let via_density = density_act(&AlgebraElement::e(g.clone()), &DensityVector::basis(k.clone()), &formal);
            let target = &k + &g;
            let want = via_density.coefficient(&target).shift_mu(1);
            let via_gvm = gvm_act(&AlgebraElement::e(LatticePoint::cons(0, &g)), &GvmVector::base_vector(k.clone()), &formal);
            let got = via_gvm.coefficient(&Monomial::base_vector(target));
            c.expect(got == want && via_gvm.len() <= 1, || format!("E{g} on v{k}: {got} vs {want}"));
        }
    }
    out.push(c);

    let mut c = Check::new("gvm.module_axiom", json!({"n": 2, "box": 2, "samples": 20, "params": "formal"}));
    for _ in 0..20 {
        let x = AlgebraElement::e(pt(rng, 2, 2));
        let y = AlgebraElement::e(pt(rng, 2, 2));
        let mut w: Vec<LatticePoint> = (0..rng.gen_range(0..=2)).map(|_| pt(rng, 2, 2)).filter(|g| g.coords()[0] < 0).collect();
        w.sort();
        let v = GvmVector::monomial(Monomial::new(w, pt(rng, 1, 2)).unwrap());
        let lhs = gvm_act(&x, &gvm_act(&y, &v, &formal), &formal).sub(&gvm_act(&y, &gvm_act(&x, &v, &formal), &formal));
        let rhs = gvm_act(&vir_bracket(&x, &y).unwrap(), &v, &formal);
        c.expect(lhs == rhs, || format!("{x} | {y} | {v}"));
    }
    out.push(c);
    out
}

//! The `perioda` command line: one binary exposing all pipelines with JSON
//! input/output and a four-value exit-code contract (0 verified, 1 falsified
//! with witness, 2 invalid input, 3 internal error).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith;
use crate::divisor::{check_special_cocycle, principality_certificate, solve_coboundary};
use crate::error::{Error, Result};
use crate::jsonio::{self, DivisorCheckInputDto, ReconstructInputDto};
use crate::lattice::{adapted_basis, is_adapted_basis, Lattice};
use crate::point::{rat_to_string, Point, Rat};
use crate::reconstruct::{
    equivalence_closure_bruteforce, lemma1_walk, primitive_chains, reconstruct_periodic,
};
use crate::report::{emit, Format, Report, EXIT_INTERNAL};
use crate::sampling;
use crate::sparse::{
    equal_on_cosets, equal_on_window, PointFn, QuasiPeriodicFn, TelescopeFn, Translated, Window,
};
use crate::weierstrass::{
    verification_suite, verify_elliptic, ComplexLattice, FnDescriptor, TruncationPolicy,
};

#[derive(Parser, Debug)]
#[command(
    name = "perioda",
    version,
    about = "Exact periodicity calculus, divisor certificates, and Weierstrass verification"
)]
pub struct Cli {
    /// Input file (JSON), for subcommands that take one.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Window box bound B for exact comparisons.
    #[arg(long, global = true, default_value_t = 5)]
    pub window: u32,

    /// Window denominator cap D.
    #[arg(long, global = true, default_value_t = 6)]
    pub den_cap: u32,

    /// Residual tolerance for numeric verification.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,

    /// Truncation radius for the direct lattice sums.
    #[arg(long, global = true, default_value_t = 30.0)]
    pub radius: f64,

    /// Seed for all randomized sweeps.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reconstruct a periodic function from a coprime pair of dilation
    /// differences (input: {"g_p", "g_q", "p", "q"}).
    Reconstruct,
    /// Run the valuation walk x ~S z ~T y between congruent integers.
    Lemma1 {
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
        #[arg(long)]
        n: i64,
        /// Primes of S, comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        /// Primes of T, comma separated.
        #[arg(long, value_delimiter = ',')]
        t: Vec<u64>,
    },
    /// Close ~S and ~T over a finite range and compare with residues mod N.
    Closure {
        #[arg(long, default_value_t = 500)]
        range: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        t: Vec<u64>,
    },
    /// Exhibit the one-dilation counterexample: a telescope with periodic
    /// difference that is itself unbounded and non-periodic.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Solve the coboundary equation for a special divisor cocycle
    /// (input: {"d_sigma", "d_tau", "p", "q", "lattice_f"}).
    DivisorSolve,
    /// Check divisor principality ({"divisor", "lattice"}) or validate a
    /// cocycle pair (same input shape as divisor-solve).
    DivisorCheck,
    /// Run the Weierstrass verification suite or a single ellipticity check.
    WeierstrassVerify {
        /// First period as "re,im".
        #[arg(long, default_value = "1,0")]
        omega1: String,
        /// Second period as "re,im".
        #[arg(long, default_value = "0,1")]
        omega2: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 100)]
        probes: usize,
        #[arg(long, value_enum, default_value = "suite")]
        function: WFunction,
    },
    /// Run the reduced property corpus.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WFunction {
    Suite,
    Gp,
    Gq,
    Zeta,
}

/// Full entry point: dispatch, emit, return the process exit code.
pub fn main_entry(cli: Cli) -> i32 {
    configure_threads();
    let started = Instant::now();
    let command_name = command_name(&cli.command);
    let (mut report, code) = match run(&cli) {
        Ok((report, code)) => (report, code),
        Err(err) => (Report::from_error(command_name, &err), err.exit_code()),
    };
    report.timing = Some(started.elapsed());
    let rendered = emit(&report, cli.format);
    match &cli.output {
        None => print!("{rendered}"),
        Some(path) => {
            if let Err(err) = std::fs::write(path, rendered) {
                eprintln!("failed to write report: {err}");
                return EXIT_INTERNAL;
            }
        }
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Reconstruct => "reconstruct",
        Command::Lemma1 { .. } => "lemma1",
        Command::Closure { .. } => "closure",
        Command::Counterexample { .. } => "counterexample",
        Command::DivisorSolve => "divisor-solve",
        Command::DivisorCheck => "divisor-check",
        Command::WeierstrassVerify { .. } => "weierstrass-verify",
        Command::Selftest => "selftest",
    }
}

/// Honor the optional PERIODA_THREADS parallelism cap for the sweeps that
/// use the global rayon pool.
fn configure_threads() {
    if let Ok(v) = std::env::var("PERIODA_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn read_input<T: serde::de::DeserializeOwned>(cli: &Cli) -> Result<T> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::invalid_input("this subcommand requires --input"))?;
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn finish(report: Report) -> Result<(Report, i32)> {
    let code = report.exit_code();
    Ok((report, code))
}

fn run(cli: &Cli) -> Result<(Report, i32)> {
    match &cli.command {
        Command::Reconstruct => run_reconstruct(cli),
        Command::Lemma1 { x, y, n, s, t } => run_lemma1(*x, *y, *n, s, t),
        Command::Closure { range, n, s, t } => run_closure(*range, *n, s, t),
        Command::Counterexample { p } => run_counterexample(cli, *p),
        Command::DivisorSolve => run_divisor_solve(cli),
        Command::DivisorCheck => run_divisor_check(cli),
        Command::WeierstrassVerify {
            omega1,
            omega2,
            p,
            q,
            probes,
            function,
        } => run_weierstrass(cli, omega1, omega2, *p, *q, *probes, *function),
        Command::Selftest => run_selftest(cli),
    }
}

fn run_reconstruct(cli: &Cli) -> Result<(Report, i32)> {
    let input: ReconstructInputDto = read_input(cli)?;
    let g_p = jsonio::qpf_from_dto(&input.g_p)?;
    let g_q = jsonio::qpf_from_dto(&input.g_q)?;
    let probes = input
        .alpha_probes
        .iter()
        .map(jsonio::point_from_dto)
        .collect::<Result<Vec<_>>>()?;
    let window = Window::new(cli.window, cli.den_cap).with_probes(probes);
    let cert = reconstruct_periodic(&g_p, &g_q, input.p, input.q, &window)?;
    let payload = serde_json::to_value(jsonio::periodicity_cert_to_dto(&cert))?;
    finish(Report::verified("reconstruct", payload))
}

fn run_lemma1(x: i64, y: i64, n: i64, s: &[u64], t: &[u64]) -> Result<(Report, i32)> {
    let walk = lemma1_walk(x, y, n, s, t)?;
    let payload = json!({
        "chain": [walk.x.to_string(), walk.z.to_string(), walk.y.to_string()],
        "relations": [
            format!("{} ~S {} (S = {:?}, N = {})", walk.x, walk.z, s, n),
            format!("{} ~T {} (T = {:?}, N = {})", walk.z, walk.y, t, n),
        ],
        "p": walk.p.to_string(),
        "q": walk.q.to_string(),
        "s": walk.s.to_string(),
        "t": walk.t.to_string(),
    });
    finish(Report::verified("lemma1", payload))
}

fn run_closure(range: i64, n: i64, s: &[u64], t: &[u64]) -> Result<(Report, i32)> {
    let partition = equivalence_closure_bruteforce(range, n, s, t)?;
    let refines = partition.refines_mod_n();
    let matches = partition.matches_mod_n();
    let classes: Vec<Value> = partition
        .classes
        .iter()
        .map(|c| {
            json!({
                "min": c[0],
                "size": c.len(),
                "residue": c[0].rem_euclid(n),
            })
        })
        .collect();
    let payload = json!({
        "range": range,
        "n": n,
        "num_classes": partition.classes.len(),
        "refines_mod_n": refines,
        "matches_mod_n": matches,
        "classes": classes,
    });
    if !refines {
        return Err(Error::theorem_violation(
            "closure escaped its residue classes; this contradicts the walk lemma",
        ));
    }
    finish(Report::verified("closure", payload))
}

fn run_counterexample(cli: &Cli, p: u32) -> Result<(Report, i32)> {
    if p < 2 {
        return Err(Error::invalid_input("dilation factor must be >= 2"));
    }
    if p.is_multiple_of(3) {
        return Err(Error::invalid_input(
            "the counterexample support lives on thirds; pick P coprime to 3",
        ));
    }
    let z = Lattice::standard(1);
    let g = QuasiPeriodicFn::indicator(
        z.clone(),
        &[Point::from_fracs(&[(1, 3)]), Point::from_fracs(&[(2, 3)])],
    )?;
    let f = TelescopeFn::new(g, p)?;
    if !cli.den_cap.is_multiple_of(3) {
        return Err(Error::invalid_input(
            "--den-cap must be divisible by 3 to see the witness",
        ));
    }
    let window = Window::new(cli.window, cli.den_cap);
    let shifted = Translated::new(&f, Point::from_fracs(&[(1, 1)]));
    let witness = equal_on_window(&f, &shifted, &window)?
        .ok_or_else(|| Error::invalid_input("window exhibited no witness; enlarge --window"))?;

    // unboundedness: f(p^n / 3) climbs linearly
    let mut unbounded = Vec::new();
    for n in 1..=20u32 {
        let x = Point::from_rats(vec![Rat::new(arith::big_pow(p as u64, n), 3.into())]);
        let v = f.eval(&x);
        if v != Rat::from_integer(n.into()) {
            return Err(Error::theorem_violation(format!(
                "expected f(P^{n}/3) = {n}, found {v}"
            )));
        }
        unbounded.push(json!([n, rat_to_string(&v)]));
    }

    let payload = json!({
        "p": p,
        "difference": "indicator of (1/3 + Z) and (2/3 + Z)",
        "unbounded_samples": unbounded,
    });
    let witness_payload = json!({
        "point": jsonio::point_to_dto(&witness.point),
        "value": rat_to_string(&witness.left),
        "translated_value": rat_to_string(&witness.right),
        "translation": "1",
    });
    finish(Report::falsified(
        "counterexample",
        payload,
        witness_payload,
    ))
}

fn run_divisor_solve(cli: &Cli) -> Result<(Report, i32)> {
    let input: jsonio::CocycleInputDto = read_input(cli)?;
    let (pair, lattice_f) = jsonio::cocycle_from_dto(&input)?;
    let window = Window::new(cli.window, cli.den_cap);
    let solution = solve_coboundary(&pair, &lattice_f, &window)?;
    let payload = serde_json::to_value(jsonio::coboundary_solution_to_dto(&solution))?;
    finish(Report::verified("divisor-solve", payload))
}

fn run_divisor_check(cli: &Cli) -> Result<(Report, i32)> {
    let input: DivisorCheckInputDto = read_input(cli)?;
    match input {
        DivisorCheckInputDto::Principality { divisor, lattice } => {
            let d = jsonio::divisor_from_dto(&divisor)?;
            let l = jsonio::lattice_from_dto(&lattice)?;
            let cert = principality_certificate(&d, &l)?;
            let payload = serde_json::to_value(jsonio::principality_cert_to_dto(&cert))?;
            let report = if cert.verdict {
                Report::verified("divisor-check", payload)
            } else {
                let witness = json!({
                    "degree": cert.degree.to_string(),
                    "aj": jsonio::point_to_dto(&cert.aj),
                    "reason": if cert.principal_in_k {
                        "Abel-Jacobi sum escapes the lattice"
                    } else {
                        "nonzero degree"
                    },
                });
                Report::falsified("divisor-check", payload, witness)
            };
            finish(report)
        }
        DivisorCheckInputDto::Cocycle(c) => {
            let (pair, _) = jsonio::cocycle_from_dto(&c)?;
            let rep = check_special_cocycle(&pair)?;
            let payload = json!({
                "cocycle_ok": rep.cocycle_ok,
                "special": rep.special,
                "sigma_at_zero": rep.sigma_at_zero.to_string(),
                "tau_at_zero": rep.tau_at_zero.to_string(),
            });
            let report = if rep.pass() {
                Report::verified("divisor-check", payload)
            } else {
                let witness = match &rep.witness {
                    Some(w) => json!({
                        "point": jsonio::point_to_dto(&w.point),
                        "lhs": rat_to_string(&w.lhs),
                        "rhs": rat_to_string(&w.rhs),
                    }),
                    None => json!({
                        "reason": "nonzero value at 0",
                        "sigma_at_zero": rep.sigma_at_zero.to_string(),
                        "tau_at_zero": rep.tau_at_zero.to_string(),
                    }),
                };
                Report::falsified("divisor-check", payload, witness)
            };
            finish(report)
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Error::invalid_input(format!("complex numbers are \"re,im\", got {s:?}")))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| Error::invalid_input(format!("bad real part {re:?}")))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| Error::invalid_input(format!("bad imaginary part {im:?}")))?;
    Ok(Complex64::new(re, im))
}

fn run_weierstrass(
    cli: &Cli,
    omega1: &str,
    omega2: &str,
    p: u32,
    q: u32,
    probes: usize,
    function: WFunction,
) -> Result<(Report, i32)> {
    if p < 2 || q < 2 {
        return Err(Error::invalid_input("dilation factors must be >= 2"));
    }
    let lat = ComplexLattice::new(parse_complex(omega1)?, parse_complex(omega2)?)?;
    let t = TruncationPolicy::for_dilations(&lat, p * q, cli.radius, cli.tol);
    match function {
        WFunction::Suite => {
            let suite = verification_suite(&lat, p, q, probes, cli.seed, &t)?;
            let payload = serde_json::to_value(&suite)?;
            let report = if suite.pass {
                Report::verified("weierstrass-verify", payload).with_seed(cli.seed)
            } else {
                let failing = suite
                    .checks
                    .iter()
                    .find(|c| !c.pass)
                    .expect("some check failed");
                let witness = json!({
                    "check": failing.name,
                    "max_residual": failing.max_residual,
                    "bound": failing.bound,
                    "argmax": [failing.argmax_re, failing.argmax_im],
                });
                Report::falsified("weierstrass-verify", payload, witness).with_seed(cli.seed)
            };
            finish(report)
        }
        WFunction::Gp | WFunction::Gq | WFunction::Zeta => {
            let desc = match function {
                WFunction::Gp => FnDescriptor::GP { p, q },
                WFunction::Gq => FnDescriptor::GQ { p, q },
                _ => FnDescriptor::Zeta,
            };
            let rep = verify_elliptic(&desc, &lat, probes, cli.seed, &t)?;
            let payload = serde_json::to_value(&rep)?;
            let report = if rep.pass {
                Report::verified("weierstrass-verify", payload).with_seed(cli.seed)
            } else {
                let witness = json!({
                    "check": format!("{function:?}").to_lowercase(),
                    "max_residual": rep.max_residual,
                    "argmax": [rep.argmax_re, rep.argmax_im],
                });
                Report::falsified("weierstrass-verify", payload, witness).with_seed(cli.seed)
            };
            finish(report)
        }
    }
}

fn run_selftest(cli: &Cli) -> Result<(Report, i32)> {
    let mut checks: Vec<Value> = Vec::new();
    let mut all_pass = true;
    let push =
        |checks: &mut Vec<Value>, all_pass: &mut bool, name: &str, outcome: Result<String>| {
            match outcome {
                Ok(detail) => checks.push(json!({"name": name, "pass": true, "detail": detail})),
                Err(err) => {
                    *all_pass = false;
                    checks.push(json!({"name": name, "pass": false, "detail": err.to_string()}));
                }
            }
        };

    push(
        &mut checks,
        &mut all_pass,
        "closure_refinement",
        selftest_closure(),
    );
    push(
        &mut checks,
        &mut all_pass,
        "valuation_walks",
        selftest_walks(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "reconstruction_round_trip",
        selftest_roundtrip(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "chain_vanishing",
        selftest_chains(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "adapted_bases",
        selftest_adapted(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "divisor_coboundary",
        selftest_divisors(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "divisor_injectivity",
        selftest_injectivity(cli.seed),
    );
    push(
        &mut checks,
        &mut all_pass,
        "weierstrass_suite",
        selftest_weierstrass(cli),
    );
    push(
        &mut checks,
        &mut all_pass,
        "one_dilation_counterexample",
        selftest_counterexample(),
    );

    let payload = json!({ "checks": checks });
    if !all_pass {
        let mut report = Report::from_error(
            "selftest",
            &Error::internal("one or more selftest checks failed"),
        );
        report.certificate = payload;
        report.seed = Some(cli.seed);
        return Ok((report, EXIT_INTERNAL));
    }
    finish(Report::verified("selftest", payload).with_seed(cli.seed))
}

fn selftest_closure() -> Result<String> {
    let mut matched = 0;
    for (n, s, t) in [
        (6i64, vec![2u64], vec![3u64]),
        (10, vec![5], vec![2]),
        (12, vec![2], vec![3]),
    ] {
        let c = equivalence_closure_bruteforce(200, n, &s, &t)?;
        if !c.refines_mod_n() {
            return Err(Error::internal(format!("closure escaped mod-{n} classes")));
        }
        if c.matches_mod_n() {
            matched += 1;
        }
    }
    Ok(format!(
        "3 configurations refine; {matched} already match at range 200"
    ))
}

fn selftest_walks(seed: u64) -> Result<String> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut done = 0;
    while done < 30 {
        let n = rng.random_range(1..=12i64);
        let x = rng.random_range(-200..=200i64);
        let k = rng.random_range(-20..=20i64);
        let y = x + k * n;
        if x == 0 || y == 0 {
            continue;
        }
        let i = rng.random_range(0..primes.len());
        let mut j = rng.random_range(0..primes.len());
        while j == i {
            j = rng.random_range(0..primes.len());
        }
        lemma1_walk(x, y, n, &[primes[i]], &[primes[j]])?;
        done += 1;
    }
    Ok("30 random walks verified their own relations".into())
}

fn selftest_roundtrip(seed: u64) -> Result<String> {
    use rayon::prelude::*;
    let results: Vec<Result<()>> = (0..10u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let rank = 1 + (i as usize) % 2;
            let lattice = Lattice::standard(rank);
            let e = sampling::random_qpf(&mut rng, &lattice, 5, 12, 0);
            let (p, q) = sampling::coprime_pair(&mut rng, 2, 8);
            let cert = reconstruct_periodic(
                &e.dilate_diff(p),
                &e.dilate_diff(q),
                p,
                q,
                &Window::new(2, 4),
            )?;
            if !equal_on_cosets(&cert.result, &e)? {
                return Err(Error::internal(format!(
                    "instance {i}: reconstruction differs from e"
                )));
            }
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    Ok("10 reconstruction round trips exact".into())
}

fn selftest_chains(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
    let lattice = Lattice::standard(1);
    for i in 0..5 {
        let f = sampling::random_qpf(&mut rng, &lattice, 4, 8, 2);
        for p in [2u32, 3] {
            let g = f.dilate_diff(p);
            for chain in primitive_chains(&g, p) {
                if !chain.chain_sum.is_zero() {
                    return Err(Error::internal(format!(
                        "instance {i}: primitive chain sum {} at {}",
                        chain.chain_sum, chain.z
                    )));
                }
            }
        }
    }
    Ok("primitive chain sums vanish on 5 random dilation differences".into())
}

fn selftest_adapted(seed: u64) -> Result<String> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
    let mut done = 0;
    while done < 100 {
        let rank = rng.random_range(1..=4usize);
        let lattice = Lattice::standard(rank);
        let coords = |rng: &mut ChaCha8Rng| -> Point {
            Point::from_rats(
                (0..rank)
                    .map(|_| Rat::from_integer(rng.random_range(-4..=4i64).into()))
                    .collect(),
            )
        };
        let x = coords(&mut rng);
        let y = coords(&mut rng);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let b = adapted_basis(&x, &y, &lattice)?;
        if !is_adapted_basis(&b, &lattice, &x, &y) {
            return Err(Error::internal(format!("basis not adapted for {x}, {y}")));
        }
        done += 1;
    }
    Ok("100 adapted bases pass the postcondition".into())
}

fn selftest_divisors(seed: u64) -> Result<String> {
    let z2 = Lattice::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44);
    for (i, (p, q)) in [(2u32, 3u32), (3, 5), (2, 5), (5, 7), (3, 7)]
        .iter()
        .cycle()
        .take(10)
        .enumerate()
    {
        let e = sampling::random_principal_divisor(&mut rng, &z2, &z2, 5, 6);
        let pair = crate::divisor::CocyclePair::new(e.dilate_diff(*p), e.dilate_diff(*q), *p, *q)?;
        let sol = solve_coboundary(&pair, &z2, &Window::new(2, 3))?;
        if !equal_on_cosets(sol.e.underlying(), e.underlying())? {
            return Err(Error::internal(format!(
                "instance {i}: coboundary differs from e"
            )));
        }
        if !sol.certificate.verdict {
            return Err(Error::internal(format!("instance {i}: certificate failed")));
        }
    }
    Ok("10 coboundary round trips exact with passing certificates".into())
}

fn selftest_injectivity(seed: u64) -> Result<String> {
    let z2 = Lattice::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
    for i in 0..100 {
        let d = sampling::random_nonzero_divisor(&mut rng, &z2, 5, 8);
        for p in [2u32, 3] {
            if d.dilate_diff(p).is_zero() {
                return Err(Error::internal(format!(
                    "instance {i}: nonzero divisor with vanishing {p}-difference"
                )));
            }
        }
    }
    Ok("no injectivity counterexample among 100 random divisors".into())
}

fn selftest_weierstrass(cli: &Cli) -> Result<String> {
    let lat = ComplexLattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))?;
    let t = TruncationPolicy::for_dilations(&lat, 6, cli.radius, cli.tol);
    let suite = verification_suite(&lat, 2, 3, 20, cli.seed, &t)?;
    if !suite.pass {
        let failing: Vec<&str> = suite
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::internal(format!(
            "weierstrass checks failed: {failing:?}"
        )));
    }
    Ok(format!(
        "{} residual checks pass at tol {}",
        suite.checks.len(),
        t.tol
    ))
}

fn selftest_counterexample() -> Result<String> {
    let z = Lattice::standard(1);
    let g = QuasiPeriodicFn::indicator(
        z,
        &[Point::from_fracs(&[(1, 3)]), Point::from_fracs(&[(2, 3)])],
    )?;
    let f = TelescopeFn::new(g, 2)?;
    let shifted = Translated::new(&f, Point::from_fracs(&[(1, 1)]));
    let witness = equal_on_window(&f, &shifted, &Window::new(10, 6))?
        .ok_or_else(|| Error::internal("expected a non-periodicity witness"))?;
    for n in 1..=10u32 {
        let x = Point::from_rats(vec![Rat::new(arith::big_pow(2, n), 3.into())]);
        if f.eval(&x) != Rat::from_integer(n.into()) {
            return Err(Error::internal(format!("f(2^{n}/3) != {n}")));
        }
    }
    Ok(format!(
        "witness at {} with values ({}, {})",
        witness.point, witness.left, witness.right
    ))
}

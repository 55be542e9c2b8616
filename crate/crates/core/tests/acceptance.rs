//! Acceptance suite: one test per release criterion, each printing a single
//! machine-scannable PASS line (visible with `--nocapture`). Tolerances are
//! pinned in the assertions; a failing assertion prevents the PASS line.

use std::time::Instant;

use colombeau_core::ifuncs::{make_graph, parse_expr, zero_set_demo, Body, ExprFn};
use colombeau_core::isets::{
    contains, equality_report, fatten, max_norm, min_distance, seg_dist, sharp_ball_demo,
    subset_report, InternalSet, SetFamily, Shape,
};
use colombeau_core::mollifier::{build_vanishing, DUAL_ROUTE_TOL};
use colombeau_core::nets::{PiecewiseNet, PowerSum, Term};
use colombeau_core::saturation::{
    cauchy_limit, nested_balls_witness, saturation_witness, BallChain, ChainSpec,
};
use colombeau_core::{Config, Error, GenNumber, Net, VecNet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn criterion_1_mollifier_identities() {
    let start = Instant::now();
    let tree = build_vanishing(8, 0.1, 1e-12).unwrap();

    // Mass and moments with dual-route agreement.
    let report = tree.moment_report(8).unwrap();
    assert!((report[0].value - 1.0).abs() <= 1e-9, "mass {}", report[0].value);
    for e in &report[1..] {
        assert!(e.value.abs() <= 1e-8, "moment {} = {:e}", e.k, e.value);
        assert!(e.error <= DUAL_ROUTE_TOL, "moment {} routes differ {:e}", e.k, e.error);
    }

    // L1 budget and per-level identities.
    let l1 = tree.levels.last().unwrap().l1;
    assert!(l1 <= 1.1 + 1e-6, "L1 = {l1}");
    let mut prev_l1 = tree.l1_base;
    for lvl in &tree.levels {
        let n = lvl.n as i32;
        assert!((lvl.a + lvl.b * lvl.eta - 1.0).abs() <= 1e-14);
        assert!((lvl.a + lvl.b * lvl.eta.powi(n + 1)).abs() <= 1e-14);
        let en = lvl.eta.powi(n);
        assert!(
            lvl.l1 <= (1.0 + en) / (1.0 - en) * prev_l1 + 1e-9,
            "L1 bound violated at level {n}"
        );
        prev_l1 = lvl.l1;
    }

    // Support in [-1, 1].
    for &x in &[1.0, -1.0, 1.000001, -1.5, 3.0] {
        assert_eq!(tree.eval(x), 0.0, "support leak at {x}");
    }

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "runtime {secs:.2}s");
    println!(
        "[criterion 1] PASS: order-8 mollifier identities (mass 1e-9, moments 1e-8, \
         dual routes 1e-11, L1 <= 1.1+1e-6, level identities 1e-14) in {secs:.2}s"
    );
}

#[test]
fn criterion_2_lift_coefficients_spot_value() {
    // Independent direct evaluation of the closed forms at n = 1, eta = 1/2.
    let eta = 0.5f64;
    let a = -eta / (1.0 - eta);
    let b = 1.0 / (eta - eta * eta);
    assert_eq!(a, -1.0);
    assert_eq!(b, 4.0);
    println!("[criterion 2] PASS: lift coefficients at eta=1/2 are a=-1, b=4 exactly");
}

#[test]
fn criterion_3_saturation_witness_and_refusal() {
    let cfg = Config::default();
    let start = Instant::now();
    let chain = ChainSpec::from_generator(
        20,
        |_| Some(0.0),
        |n| {
            SetFamily::new(
                vec![Shape::Interval {
                    lo: Net::monomial(-1.0, n as f64),
                    hi: Net::monomial(1.0, n as f64),
                }],
                1,
            )
        },
    )
    .unwrap();
    let result = saturation_witness(&chain, &cfg).unwrap();
    assert!(result.all_hold);
    assert_eq!(result.membership.len(), 20);
    for entry in &result.membership {
        assert!(entry.verdict.holds, "membership failed at n = {}", entry.n);
    }
    let witness_val = result.witness.realized.components[0].valuation(&cfg).value;
    assert!(witness_val >= 19.0, "witness valuation {witness_val}");

    // The unbounded chain of exteriors must be refused for lack of a bound.
    let bad = ChainSpec::from_generator(
        5,
        |_| None,
        |n| {
            SetFamily::new(
                vec![Shape::Exterior { r: Net::monomial(1.0, -(n as f64)) }],
                1,
            )
        },
    )
    .unwrap();
    match saturation_witness(&bad, &cfg) {
        Err(Error::MissingBound(_)) => {}
        other => panic!("expected MissingBound, got {other:?}"),
    }

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 5.0, "runtime {secs:.2}s");
    println!(
        "[criterion 3] PASS: shrinking-interval chain witness (valuation {witness_val:.1} \
         >= 19, all 20 memberships hold) and exterior chain refused, in {secs:.2}s"
    );
}

#[test]
fn criterion_4_nested_balls() {
    let cfg = Config::default();
    let start = Instant::now();
    let mut centers = Vec::new();
    let mut acc = Net::zero();
    for n in 0..=20u32 {
        acc = acc.add(&Net::monomial(1.0, n as f64)).unwrap();
        centers.push(acc.clone());
    }
    let radii: Vec<f64> = (0..=20).map(|n| (-(n as f64) - 1.0).exp()).collect();
    let result = nested_balls_witness(&BallChain { centers, radii }, &cfg).unwrap();
    assert!(result.all_hold);
    for check in &result.checks {
        let exact = check.branch_exact.expect("symbolic branch check available");
        assert!(exact.holds && exact.exact, "exact branch check failed at {}", check.n);
        assert!(check.grid.holds, "grid check failed at {}", check.n);
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 5.0, "runtime {secs:.2}s");
    println!(
        "[criterion 4] PASS: nested-ball witness within e^-(n+1) of all 21 partial sums \
         (exact symbolic + grid splice checks) in {secs:.2}s"
    );
}

#[test]
fn criterion_5_sharp_completeness() {
    let cfg = Config::default();
    let mut acc = Net::zero();
    let seq: Vec<GenNumber> = (0..30)
        .map(|k| {
            acc = acc.add(&Net::monomial(1.0, k as f64)).unwrap();
            GenNumber::new(acc.clone())
        })
        .collect();
    let result = cauchy_limit(&seq, &cfg).unwrap();
    let mut checked = 0;
    for entry in &result.table {
        if entry.j > 15 {
            continue;
        }
        let expect = entry.j as f64 + 1.0;
        assert!(
            (entry.valuation - expect).abs() <= 0.05,
            "j = {}: valuation {} vs {}",
            entry.j,
            entry.valuation,
            expect
        );
        checked += 1;
    }
    assert!(checked >= 15, "only {checked} table entries at j <= 15");
    println!(
        "[criterion 5] PASS: Cauchy limit of geometric sums with [[u_j - L]] = e^-(j+1) \
         within 0.05 valuation for j <= 15 (depth {})",
        result.depth
    );
}

#[test]
fn criterion_6_internal_set_calculus() {
    let cfg = Config::default();

    // (a) {0} equals the negligible-atom point set though the raw slices are
    // disjoint; fattening restores a nonempty refined intersection.
    let zero_set = InternalSet::scalar_point(Net::zero()).unwrap();
    let negl_net = Net::Symbolic(PiecewiseNet::from_sum(PowerSum::negl_atom()));
    let negl_set = InternalSet::scalar_point(negl_net.clone()).unwrap();
    let eq = equality_report(&zero_set, &negl_set, &cfg).unwrap();
    assert!(eq.verdict.holds && eq.verdict.exact);
    for &eps in &[0.25, 0.1, 0.01] {
        // Raw per-eps intersection is empty: the atom's slice is nonzero.
        assert!(negl_net.eval_f64(eps) > 0.0);
    }
    let fat = InternalSet::new(fatten(&negl_set.family, 5).unwrap());
    let (v, _) = contains(&fat, &VecNet::scalar(Net::zero()), &cfg).unwrap();
    assert!(v.holds, "fattened set must contain 0");

    // (b) 200 seeded subset/equality pairs against the endpoint oracle.
    let snap = |v: f64| (v * 4.0).round() / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x61636336);
    let mut disagreements = 0;
    let random_iv = |rng: &mut ChaCha8Rng| {
        let c_lo = snap(rng.gen_range(0.5..2.0)).max(0.25);
        let c_hi = snap(rng.gen_range(0.5..2.0)).max(0.25);
        let e_lo = snap(rng.gen_range(-2.0..2.0));
        let e_hi = snap(rng.gen_range(-2.0..2.0));
        (
            InternalSet::interval(Net::monomial(-c_lo, e_lo), Net::monomial(c_hi, e_hi))
                .unwrap(),
            (-c_lo, e_lo),
            (c_hi, e_hi),
        )
    };
    let delta = |a_lo: (f64, f64), a_hi: (f64, f64), b_lo: (f64, f64), b_hi: (f64, f64), eps: f64| {
        let val = |(c, e): (f64, f64)| c * eps.powf(e);
        seg_dist(val(b_lo), val(b_hi), val(a_lo))
            .max(seg_dist(val(b_lo), val(b_hi), val(a_hi)))
    };
    for _ in 0..200 {
        let (a, a_lo, a_hi) = random_iv(&mut rng);
        let (b, b_lo, b_hi) = random_iv(&mut rng);
        let lib = subset_report(&a, &b, &cfg).unwrap().verdict.holds;
        let oracle = delta(a_lo, a_hi, b_lo, b_hi, 2f64.powi(-40)) == 0.0
            && delta(a_lo, a_hi, b_lo, b_hi, 2f64.powi(-44)) == 0.0;
        disagreements += (lib != oracle) as u32;
        let lib_eq = equality_report(&a, &b, &cfg).unwrap().verdict.holds;
        let oracle_eq = oracle
            && delta(b_lo, b_hi, a_lo, a_hi, 2f64.powi(-40)) == 0.0
            && delta(b_lo, b_hi, a_lo, a_hi, 2f64.powi(-44)) == 0.0;
        disagreements += (lib_eq != oracle_eq) as u32;
    }
    assert_eq!(disagreements, 0);

    // (c) 50 seeded sharply convergent member sequences: limit membership.
    let mut rng = ChaCha8Rng::seed_from_u64(0x61636337);
    let mut limits_inside = 0;
    for _ in 0..50 {
        let (a, lo, hi) = random_iv(&mut rng);
        let lo_net = Net::monomial(lo.0, lo.1);
        let hi_net = Net::monomial(hi.0, hi.1);
        let mid = lo_net.add(&hi_net).unwrap().scale(0.5);
        let quarter = hi_net.sub(&lo_net).unwrap().scale(0.25);
        let seq: Vec<GenNumber> = (0..12)
            .map(|j| {
                let bump = quarter.mul(&Net::monomial(1.0, j as f64)).unwrap();
                GenNumber::new(mid.add(&bump).unwrap())
            })
            .collect();
        let limit = cauchy_limit(&seq, &cfg).unwrap().limit;
        let (v, _) = contains(&a, &VecNet::scalar(limit.rep), &cfg).unwrap();
        limits_inside += v.holds as u32;
    }
    assert_eq!(limits_inside, 50);

    println!(
        "[criterion 6] PASS: {{0}} = {{negligible atom}} with empty raw slices and \
         fatten-refined intersection; 200 oracle pairs 0 disagreements; 50/50 sharp \
         limits stay members"
    );
}

#[test]
fn criterion_7_attained_extrema() {
    let cfg = Config::default();

    // max norm of [0, eps^-2] is alpha^-2, attained.
    let a = InternalSet::interval(Net::zero(), Net::monomial(1.0, -2.0)).unwrap();
    let mn = max_norm(&a, &cfg).unwrap();
    assert!(mn.exact);
    let same = GenNumber::new(Net::monomial(1.0, -2.0))
        .gen_eq(&mn.value, &cfg)
        .unwrap();
    assert!(same.holds);
    let attained = GenNumber::new(mn.witness.sup_norm().unwrap())
        .gen_eq(&mn.value, &cfg)
        .unwrap();
    assert!(attained.holds);
    let (inside, _) = contains(&a, &mn.witness, &cfg).unwrap();
    assert!(inside.holds);

    // min distance between [0,1] and [2,3] is exactly 1.
    let b = InternalSet::interval(Net::zero(), Net::constant(1.0)).unwrap();
    let c = InternalSet::interval(Net::constant(2.0), Net::constant(3.0)).unwrap();
    let md = min_distance(&b, &c, &cfg).unwrap();
    assert!(md.exact);
    let one = GenNumber::new(Net::constant(1.0));
    assert!(md.dist.gen_eq(&one, &cfg).unwrap().holds);

    // Sharp balls have no maximal element: 20 random members dominated.
    let demo = sharp_ball_demo(20, 0x62616c6c, &cfg).unwrap();
    assert!(demo.all_pass);
    assert_eq!(demo.cases.len(), 20);
    for case in &demo.cases {
        assert!(case.larger_norm > case.member_norm);
    }

    println!(
        "[criterion 7] PASS: max_norm([0, eps^-2]) = alpha^-2 attained; \
         min_distance([0,1],[2,3]) = 1 exact; 20/20 ball members strictly dominated"
    );
}

#[test]
fn criterion_8_internal_functions() {
    let cfg = Config::default();
    let domain = SetFamily::new(
        vec![Shape::Interval { lo: Net::constant(-1.0), hi: Net::constant(1.0) }],
        1,
    )
    .unwrap();
    let f = make_graph(
        ExprFn::new(Body::Expr(parse_expr("x^2/(1+x^2)").unwrap()), domain).unwrap(),
    )
    .unwrap();

    // Representative independence: 50 interior points perturbed by the
    // negligible atom or by eps^30, all evaluations gen_eq.
    let mut rng = ChaCha8Rng::seed_from_u64(0x65766163);
    let mut agree = 0;
    for i in 0..50 {
        let x0 = rng.gen_range(-0.9..0.9);
        let x = Net::constant(x0);
        let pert = if i % 2 == 0 {
            Net::Symbolic(PiecewiseNet::from_sum(PowerSum::from_terms(
                vec![],
                true,
            )))
        } else {
            Net::monomial(1.0, 30.0)
        };
        let x2 = x.add(&pert).unwrap();
        let e1 = f.eval_at(&x, &cfg).unwrap();
        let e2 = f.eval_at(&x2, &cfg).unwrap();
        agree += e1.value.gen_eq(&e2.value, &cfg).unwrap().holds as u32;
    }
    assert_eq!(agree, 50);

    // Continuity modulus m(n) <= n + 1 for n <= 10.
    let table = f.modulus_table(10, &cfg).unwrap();
    for &(n, m) in &table {
        assert!(m <= n + 1, "modulus m({n}) = {m} > {}", n + 1);
    }

    // Image membership: 1 is not attained (sup is 1/2), 1/2 is.
    let reject = f.image_membership(&Net::constant(1.0), &cfg).unwrap();
    assert!(!reject.member.holds);
    let accept = f.image_membership(&Net::constant(0.5), &cfg).unwrap();
    assert!(accept.member.holds);

    // Zero-set demo: each of the 3 candidate zeros is strictly dominated by
    // a larger zero of eps^(1/x).
    let demo = zero_set_demo(&cfg).unwrap();
    assert!(demo.all_pass);
    assert_eq!(demo.cases.len(), 3);

    println!(
        "[criterion 8] PASS: 50/50 perturbed evaluations gen_eq; modulus m(n) <= n+1 \
         for n <= 10; image rejects 1 / accepts 1/2; 3/3 zero-set candidates dominated"
    );
}

#[test]
fn criterion_9_net_calculus() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e656c39);
    let random_sum = |rng: &mut ChaCha8Rng, gap: f64, max_mag: f64| {
        let n_terms = rng.gen_range(1..=4);
        let mut expo = rng.gen_range(-3.0..3.0);
        let mut terms = Vec::new();
        for _ in 0..n_terms {
            let mag = rng.gen_range(0.5..max_mag);
            terms.push(Term { coeff: if rng.gen_bool(0.5) { mag } else { -mag }, expo });
            expo += gap + rng.gen_range(0.0..2.0);
        }
        PowerSum::from_terms(terms, false)
    };

    // Ultrametric inequality, 500 seeded pairs, exact.
    for _ in 0..500 {
        let x = Net::Symbolic(PiecewiseNet::from_sum(random_sum(&mut rng, 0.1, 3.0)));
        let y = Net::Symbolic(PiecewiseNet::from_sum(random_sum(&mut rng, 0.1, 3.0)));
        let (vx, vy) = (x.valuation(&cfg), y.valuation(&cfg));
        let vs = x.add(&y).unwrap().valuation(&cfg);
        assert!(vx.exact && vy.exact && vs.exact);
        assert!(vs.value >= vx.value.min(vy.value) - 1e-12);
    }

    // Valuation additivity under multiplication, 500 seeded pairs, exact.
    for _ in 0..500 {
        let x = Net::Symbolic(PiecewiseNet::from_sum(random_sum(&mut rng, 0.1, 3.0)));
        let y = Net::Symbolic(PiecewiseNet::from_sum(random_sum(&mut rng, 0.1, 3.0)));
        let (vx, vy) = (x.valuation(&cfg).value, y.valuation(&cfg).value);
        let vp = x.mul(&y).unwrap().valuation(&cfg).value;
        assert!((vp - (vx + vy)).abs() <= 1e-9);
    }

    // Sampled-vs-symbolic round trip within 0.05 for leading gap >= 0.5.
    for _ in 0..200 {
        let sum = random_sum(&mut rng, 0.5, 2.0);
        let exact = sum.valuation();
        let est = Net::Symbolic(PiecewiseNet::from_sum(sum))
            .sample(cfg.k_min, cfg.k_max)
            .unwrap()
            .valuation_estimate(cfg.slope_window);
        assert!((est - exact).abs() <= 0.05, "estimate {est} vs exact {exact}");
    }

    println!(
        "[criterion 9] PASS: ultrametric and additivity suites (500 each, exact); \
         sampled valuation round-trip within 0.05"
    );
}

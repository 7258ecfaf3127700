//! Acceptance run: one line per criterion, zero tolerance, wall-clock budgets.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are always
//! printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use coe_core::chain::{DivisibilityChain, OdometerModel};
use coe_core::cocycle::{
    coboundary_decide_chain, coboundary_solve_at_level, cohomologous_verify, essential_values_bruteforce,
    essential_values_closed_form, essential_values_limit, is_cocycle_exhaustive, CoboundaryVerdict, LevelCocycle,
    SolveOutcome,
};
use coe_core::group::{
    bilipschitz_classify_fn, dmetric, pairing_pi, pairing_pi_inv, DihedralAutomorphism, DihedralElement,
    FiniteGroupTable, Orientation,
};
use coe_core::rigidity::{
    build_case1_model_with_offset, build_case2_model, build_case2_model_with_step, delta, induced_coe_restrict,
    induced_conjugacy_lift, rigidity_extract, topological_freeness_sweep, witness_from_conjugacy, CoeWitness, Coset,
    DinftyModel, Stabilizer,
};
use coe_core::skew::{
    exhaustive_conjugacy_search, nonconjugacy_certificate, transitive_and_free_check, verify_coe, SkewSystem,
};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn s_pow(n: i64) -> DihedralElement {
    DihedralElement::translation(n)
}

// 1 ───────────────────────────────────────────────────────────────────────

fn flagship_dyadic() -> Verdict {
    let chain = DivisibilityChain::dyadic();
    let c = LevelCocycle::new(FiniteGroupTable::cyclic(3), &chain, 1, vec![0, 1]).map_err(e)?;
    let verdict = coboundary_decide_chain(&c, &chain).map_err(e)?;
    ensure(matches!(verdict, CoboundaryVerdict::NeverCoboundary { .. }), || {
        format!("verdict {verdict:?}")
    })?;
    let limit = essential_values_limit(&c, &chain).map_err(e)?;
    ensure(limit.values == [0, 1, 2], || format!("E(c) = {:?}", limit.values))?;
    for k in 1..=8 {
        let model = OdometerModel::new(chain.clone(), k).map_err(e)?;
        let brute = essential_values_bruteforce(&c, &model, k).map_err(e)?;
        ensure(brute.values == [0, 1, 2], || {
            format!("brute-force E_{k} = {:?}", brute.values)
        })?;
    }
    Ok("NeverCoboundary, E(c) = Z/3".into())
}

fn flagship_triadic() -> Verdict {
    let chain = DivisibilityChain::geometric(3);
    let c = LevelCocycle::new(FiniteGroupTable::cyclic(3), &chain, 1, vec![0, 1, 0]).map_err(e)?;
    let verdict = coboundary_decide_chain(&c, &chain).map_err(e)?;
    let CoboundaryVerdict::CoboundaryAtLevel { level } = verdict else {
        return Err(format!("verdict {verdict:?}"));
    };
    let SolveOutcome::Solved { transfer } = coboundary_solve_at_level(&c, &chain, level).map_err(e)? else {
        return Err(format!("no transfer at level {level}"));
    };
    let model = OdometerModel::new(chain.clone(), level + 1).map_err(e)?;
    let trivial = LevelCocycle::trivial(FiniteGroupTable::cyclic(3), &chain, 1).map_err(e)?;
    let window = 2 * model.modulus() as i64;
    // the transfer lives at `level`; check it on a finer model too
    let coarse = OdometerModel::new(chain.clone(), level).map_err(e)?;
    ensure(
        cohomologous_verify(&c, &trivial, &transfer, &coarse, window).map_err(e)?,
        || "transfer fails".into(),
    )?;
    let finer = transfer_on(&transfer, &model);
    ensure(
        cohomologous_verify(&c, &trivial, &finer, &model, window).map_err(e)?,
        || "lifted transfer fails".into(),
    )?;
    Ok(format!(
        "CoboundaryAtLevel({level}), transfer {:?} verified",
        transfer.table
    ))
}

/// The same transfer read through the projection to a coarser level.
fn transfer_on(b: &coe_core::cocycle::TransferFunction, model: &OdometerModel) -> coe_core::cocycle::TransferFunction {
    let table = model
        .states()
        .map(|x| b.value(model.project(x, b.level).unwrap()))
        .collect();
    coe_core::cocycle::TransferFunction::new(model.level(), table, b.orientation)
}

// 2, 3 ────────────────────────────────────────────────────────────────────

fn family() -> Vec<(&'static str, DivisibilityChain)> {
    vec![
        ("2^i", DivisibilityChain::geometric(2)),
        ("3^i", DivisibilityChain::geometric(3)),
        ("5^i", DivisibilityChain::geometric(5)),
        ("6^i", DivisibilityChain::geometric(6)),
        ("7^i", DivisibilityChain::geometric(7)),
        ("2,[3],[2]", DivisibilityChain::new(2, vec![3], vec![2]).unwrap()),
        ("3,[],[2,3]", DivisibilityChain::new(3, vec![], vec![2, 3]).unwrap()),
        ("4,[],[5]", DivisibilityChain::new(4, vec![], vec![5]).unwrap()),
    ]
}

/// Calls `f` for every `(chain, p, j, table, levels)` with `n_j ≤ 9`.
fn for_each_table(
    mut f: impl FnMut(&DivisibilityChain, usize, usize, &[usize], &[(usize, OdometerModel)]) -> Result<(), String>,
) -> Result<u64, String> {
    let mut count = 0;
    for (_, chain) in family() {
        let levels: Vec<(usize, OdometerModel)> = (1..)
            .map_while(|k| chain.nth_modulus_u64(k).filter(|&n| n <= 729).map(|_| k))
            .map(|k| (k, OdometerModel::new(chain.clone(), k).unwrap()))
            .collect();
        for j in (1..).take_while(|&j| chain.nth_modulus_u64(j).is_some_and(|n| n <= 9)) {
            let nj = chain.nth_modulus_u64(j).unwrap() as usize;
            let above: Vec<_> = levels.iter().filter(|(k, _)| *k >= j).cloned().collect();
            for p in [2usize, 3, 5] {
                let mut table = vec![0usize; nj];
                loop {
                    f(&chain, p, j, &table, &above)?;
                    count += 1;
                    // odometer increment over base-p digits
                    let mut i = 0;
                    while i < nj && table[i] == p - 1 {
                        table[i] = 0;
                        i += 1;
                    }
                    if i == nj {
                        break;
                    }
                    table[i] += 1;
                }
            }
        }
    }
    Ok(count)
}

fn oracle_equivalence() -> Verdict {
    let mut pairs = 0u64;
    let groups: Vec<FiniteGroupTable> = (0..=5).map(|p| FiniteGroupTable::cyclic(p.max(1))).collect();
    let tables = for_each_table(|chain, p, j, table, levels| {
        let c = LevelCocycle::new(groups[p].clone(), chain, j, table.to_vec()).map_err(e)?;
        for (k, model) in levels {
            let closed = essential_values_closed_form(&c, chain, *k).map_err(e)?;
            let brute = essential_values_bruteforce(&c, model, *k).map_err(e)?;
            pairs += 1;
            ensure(closed == brute, || {
                format!(
                    "{chain}, Z/{p}, j = {j}, table {table:?}, k = {k}: closed {:?} vs brute {:?}",
                    closed.values, brute.values
                )
            })?;
        }
        Ok(())
    })?;
    Ok(format!("{tables} tables, {pairs} (table, level) pairs agree"))
}

fn consistency() -> Verdict {
    let groups: Vec<FiniteGroupTable> = (0..=5).map(|p| FiniteGroupTable::cyclic(p.max(1))).collect();
    let (mut cob, mut never) = (0u64, 0u64);
    let tables = for_each_table(|chain, p, j, table, _| {
        let c = LevelCocycle::new(groups[p].clone(), chain, j, table.to_vec()).map_err(e)?;
        let limit = essential_values_limit(&c, chain).map_err(e)?;
        let verdict = coboundary_decide_chain(&c, chain).map_err(e)?;
        if verdict.is_coboundary() {
            cob += 1;
        } else {
            never += 1;
        }
        ensure(limit.is_trivial(0) == verdict.is_coboundary(), || {
            format!(
                "{chain}, Z/{p}, j = {j}, table {table:?}: E = {:?}, verdict {verdict:?}",
                limit.values
            )
        })
    })?;
    Ok(format!(
        "{tables} tables: {cob} coboundaries, {never} never; zero exceptions"
    ))
}

// 4 ───────────────────────────────────────────────────────────────────────

fn flagship_systems(
    level: usize,
) -> Result<
    (
        DivisibilityChain,
        FiniteGroupTable,
        LevelCocycle,
        SkewSystem,
        SkewSystem,
    ),
    String,
> {
    let chain = DivisibilityChain::dyadic();
    let g = FiniteGroupTable::symmetric(3);
    let r = g.prime_order_element(3).map_err(e)?;
    let c = LevelCocycle::new(g.clone(), &chain, 1, vec![0, r]).map_err(e)?;
    let triv = LevelCocycle::trivial(g.clone(), &chain, 1).map_err(e)?;
    let model = OdometerModel::new(chain.clone(), level).map_err(e)?;
    let a = SkewSystem::new(model.clone(), c.clone()).map_err(e)?;
    let b = SkewSystem::new(model, triv).map_err(e)?;
    Ok((chain, g, c, a, b))
}

fn skew_demo() -> Verdict {
    let (chain, g, c, a, b) = flagship_systems(6)?;
    let states = a.points().count();
    ensure(states == 384, || format!("{states} states"))?;
    for (name, sys) in [("twisted", &a), ("trivial", &b)] {
        let o = transitive_and_free_check(sys);
        ensure(o.transitive && o.free, || format!("{name}: {o:?}"))?;
    }
    let coe = verify_coe(&a, &b).map_err(e)?;
    ensure(coe.holds(), || format!("{coe:?}"))?;
    let cert = nonconjugacy_certificate(&g, &c, &chain).map_err(e)?;
    ensure(cert.verify(&chain), || "certificate does not re-verify".into())?;
    Ok(format!(
        "384 states transitive and free, coe holds for |n| <= 128, certificate issued (p = {})",
        cert.prime
    ))
}

fn skew_search() -> Verdict {
    let (_, _, _, a, b) = flagship_systems(3)?;
    let report = exhaustive_conjugacy_search(&a, &b).map_err(e)?;
    ensure(report.found.is_none(), || format!("found {:?}", report.found))?;
    Ok(format!(
        "{} automorphisms x {} offsets, {} nodes, no conjugacy",
        report.automorphisms, report.offsets, report.nodes
    ))
}

// 5 ───────────────────────────────────────────────────────────────────────

fn case1(chain: &DivisibilityChain, level: usize, offset: i64) -> Result<DinftyModel, String> {
    build_case1_model_with_offset(OdometerModel::new(chain.clone(), level).map_err(e)?, offset).map_err(e)
}

fn round_trip() -> Verdict {
    let models = [
        (DivisibilityChain::dyadic(), 3),
        (DivisibilityChain::dyadic(), 4),
        (DivisibilityChain::geometric(3), 3),
        (DivisibilityChain::dyadic(), 6),
    ];
    let mut runs = 0;
    for (chain, level) in &models {
        let src = case1(chain, *level, 0)?;
        let m = src.modulus() as i64;
        for km in -4..=4 {
            let dst = case1(chain, *level, km)?;
            for sign in [1i64, -1] {
                for r in 0..m {
                    let h: Vec<u64> = src
                        .states()
                        .map(|x| (sign * x as i64 + r).rem_euclid(m) as u64)
                        .collect();
                    // h(tx) = s^{2r - k_m}·t′·h(x) for either sign
                    let j = 2 * r - km;
                    let psi = if sign == 1 {
                        DihedralAutomorphism::phi(j)
                    } else {
                        DihedralAutomorphism::reversing(j)
                    };
                    let w = witness_from_conjugacy(&src, &dst, &h, psi).map_err(e)?;
                    let res = rigidity_extract(&w, &src, &dst)
                        .map_err(|err| format!("n_L = {m}, k_m = {km}, h = {sign}x + {r}: {err}"))?;
                    let expected_k = sign * j;
                    let expected_u = if sign == 1 {
                        DihedralElement::IDENTITY
                    } else {
                        DihedralElement::T
                    };
                    ensure(res.verified && res.k == expected_k, || {
                        format!(
                            "n_L = {m}, k_m = {km}, h = {sign}x + {r}: k = {} (expected {expected_k})",
                            res.k
                        )
                    })?;
                    ensure(res.untwister.iter().all(|&u| u == expected_u), || {
                        format!("n_L = {m}, k_m = {km}, h = {sign}x + {r}: untwister not constant {expected_u}")
                    })?;
                    check_untwisted(&w, &src, &res.untwister, res.automorphism, m)?;
                    if km == 0 && sign == 1 {
                        ensure(res.k == 2 * r, || format!("translation by {r}: k = {}", res.k))?;
                    }
                    if km == 0 && sign == -1 && r == 0 {
                        ensure(res.k == 0, || format!("h = -x: k = {}", res.k))?;
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!(
        "{runs} witnesses over n_L in {{8, 16, 27, 64}}, k_m in [-4, 4]: all verified"
    ))
}

/// `c(g, x) = U(gx)⁻¹·φ(g)·U(x)` for every `g = sⁿ, sⁿt` with `|n| ≤ window`,
/// with `c` rebuilt from the generator tables letter by letter.
fn check_untwisted(
    w: &CoeWitness,
    model: &DinftyModel,
    u: &[DihedralElement],
    phi: DihedralAutomorphism,
    window: i64,
) -> Result<(), String> {
    for x in model.states() {
        for n in -window..=window {
            for g in [s_pow(n), DihedralElement::reflection(n)] {
                let got = w.eval(model, g, x);
                let want = u[model.act(g, x) as usize]
                    .inverse()
                    .mul(phi.apply(g))
                    .mul(u[x as usize]);
                ensure(got == want, || format!("c({g}, {x}) = {got}, untwister gives {want}"))?;
            }
        }
    }
    Ok(())
}

// 6 ───────────────────────────────────────────────────────────────────────

fn case2_witness(model: &DinftyModel, lambda: i64, r: i64, k: i64) -> Result<CoeWitness, String> {
    let m = model.modulus() as i64;
    let h: Vec<u64> = model
        .states()
        .map(|p| {
            let (coset, x) = model.split_state(p);
            let shift = if coset == Coset::TZ { k } else { 0 };
            model.join_state(coset, (lambda * x as i64 + r - shift).rem_euclid(m) as u64)
        })
        .collect();
    let psi = if lambda == 1 {
        DihedralAutomorphism::phi(k)
    } else {
        DihedralAutomorphism::reversing(k)
    };
    witness_from_conjugacy(model, model, &h, psi).map_err(e)
}

fn case2() -> Verdict {
    let dyadic = DivisibilityChain::dyadic();
    let mut extractions = 0;
    for level in [3, 4] {
        let model = build_case2_model(dyadic.clone(), level).map_err(e)?;
        let m = model.modulus() as i64;
        for lambda in [1, -1] {
            for r in 0..m {
                for k in -4..=4 {
                    let w = case2_witness(&model, lambda, r, k)?;
                    let res = rigidity_extract(&w, &model, &model)
                        .map_err(|err| format!("L = {level}, λ = {lambda}, r = {r}, k = {k}: {err}"))?;
                    ensure(
                        res.verified && res.conjugacy_automorphism == DihedralAutomorphism::IDENTITY,
                        || "not verified".into(),
                    )?;
                    for p in model.states() {
                        let (coset, _) = model.split_state(p);
                        let x = if coset == Coset::Z { p } else { model.t(p) };
                        let l = res.untwister[x as usize];
                        let img = if coset == Coset::Z {
                            l
                        } else {
                            DihedralElement::T.inverse().mul(l)
                        };
                        ensure(res.conjugacy[p as usize] == model.act(img, w.h[x as usize]), || {
                            format!("lifted conjugacy formula fails at {p}")
                        })?;
                        for g in [DihedralElement::S, DihedralElement::T] {
                            ensure(
                                res.conjugacy[model.act(g, p) as usize] == model.act(g, res.conjugacy[p as usize]),
                                || format!("equivariance fails at {p}"),
                            )?;
                        }
                    }
                    check_untwisted(&w, &model, &res.untwister, res.automorphism, m)?;
                    extractions += 1;
                }
            }
        }
        restriction_checks(&dyadic, level)?;
    }
    for n in -50..=50 {
        let table = [
            (s_pow(n), Coset::Z, s_pow(n)),
            (s_pow(n), Coset::TZ, s_pow(-n)),
            (DihedralElement::reflection(n), Coset::Z, s_pow(-n)),
            (DihedralElement::reflection(n), Coset::TZ, s_pow(n)),
        ];
        for (g, c, want) in table {
            ensure(delta(g, c) == want, || format!("δ({g}, {c:?}) = {}", delta(g, c)))?;
        }
    }
    Ok(format!(
        "{extractions} componentwise witnesses verified; restrictions are cocycles; δ table holds for |n| <= 50"
    ))
}

/// Identity witnesses between induced models, twisted by kernel elements and
/// with the base action reversed.
fn restriction_checks(chain: &DivisibilityChain, level: usize) -> Result<(), String> {
    let base = OdometerModel::new(chain.clone(), level).map_err(e)?;
    let model = build_case2_model_with_step(base.clone(), 1).map_err(e)?;
    let m = model.modulus() as i64;
    let id: Vec<u64> = model.states().collect();
    for (step, tau) in [
        (1, DihedralAutomorphism::IDENTITY),
        (-1, DihedralAutomorphism::reversing(0)),
    ] {
        let model2 = build_case2_model_with_step(base.clone(), step).map_err(e)?;
        let plain = witness_from_conjugacy(&model, &model2, &id, tau).map_err(e)?;
        for seed in 0..4i64 {
            let u: Vec<DihedralElement> = model
                .states()
                .map(|p| s_pow(m * ((p as i64 * (seed + 3)) % 5 - 2) * (seed % 2)))
                .collect();
            let w = plain.twisted(&model, &model2, &u).map_err(e)?;
            let theta = induced_coe_restrict(&w, &model, &model2).map_err(e)?;
            // θ mod a prime through the generic cocycle check; the exact check is the fold below
            let window = 2 * m;
            const P: i64 = 97;
            let reduced: Vec<usize> = theta.theta.iter().map(|v| v.rem_euclid(P) as usize).collect();
            let lc = LevelCocycle::new(FiniteGroupTable::cyclic(P as usize), chain, level, reduced).map_err(e)?;
            ensure(is_cocycle_exhaustive(&lc, &base, window).map_err(e)?, || {
                "θ fails the cocycle identity".into()
            })?;
            // α_n(x) = β_{θ(n, x)}(x) with θ(n, x) read off the witness directly
            for x in 0..m as u64 {
                for n in -window..=window {
                    let v = w.eval(&model, s_pow(n), x);
                    ensure(!v.reflection && model.act(s_pow(n), x) == model2.act(v, x), || {
                        format!("α = β∘θ fails at n = {n}, x = {x}")
                    })?;
                    let folded: i64 = if n >= 0 {
                        (0..n).map(|i| theta.theta[base.step(x, i) as usize]).sum()
                    } else {
                        -(n..0).map(|i| theta.theta[base.step(x, i) as usize]).sum::<i64>()
                    };
                    ensure(v.exponent == folded, || {
                        format!("θ({n}, {x}) = {} but the table sums to {folded}", v.exponent)
                    })?;
                }
            }
            let lift = induced_conjugacy_lift(&theta, &model, &model2).map_err(e)?;
            ensure(lift.automorphism == tau, || {
                format!("lift automorphism {:?}", lift.automorphism)
            })?;
        }
    }
    Ok(())
}

// 7 ───────────────────────────────────────────────────────────────────────

fn metric() -> Verdict {
    for n in -200i64..=200 {
        ensure(pairing_pi_inv(pairing_pi(n)) == n, || format!("π⁻¹π({n}) ≠ {n}"))?;
        for m in -200i64..=200 {
            let d = dmetric(pairing_pi(n), pairing_pi(m));
            let gap = n.abs_diff(m);
            ensure(gap.div_ceil(2) <= d && d <= 2 * gap, || {
                format!("d(π({n}), π({m})) = {d}")
            })?;
        }
    }
    let mut affine = 0;
    for (sign, orientation) in [(1, Orientation::Plus), (-1, Orientation::Minus)] {
        for c in -30..=30 {
            let r = bilipschitz_classify_fn(50, |x| sign * x + c).map_err(e)?;
            ensure(r.sign == orientation && r.constant == c && r.defect_bound == 0, || {
                format!("{sign}x + {c}: {r:?}")
            })?;
            affine += 1;
        }
    }
    let t = bilipschitz_classify_fn(50, |n| pairing_pi_inv(DihedralElement::T.mul(pairing_pi(n)))).map_err(e)?;
    ensure(t.defect_bound <= 2, || format!("t-conjugate: {t:?}"))?;
    Ok(format!(
        "π bounds on 401², {affine} affine maps exact, t-conjugate defect {}",
        t.defect_bound
    ))
}

// 8 ───────────────────────────────────────────────────────────────────────

fn freeness() -> Verdict {
    let dyadic = DivisibilityChain::dyadic();
    let r = topological_freeness_sweep(&case1(&dyadic, 3, 0)?);
    let t_fixed = r.fixed_points.iter().find(|f| f.class == 0).map(|f| f.states.clone());
    ensure(t_fixed == Some(vec![0, 4]), || format!("t fixes {t_fixed:?}"))?;
    let mut models = 0;
    let chains = [
        (dyadic.clone(), 2..=7),
        (DivisibilityChain::geometric(3), 1..=4),
        (DivisibilityChain::geometric(5), 1..=3),
        (DivisibilityChain::new(3, vec![], vec![2, 3]).unwrap(), 1..=4),
    ];
    for (chain, levels) in chains {
        for level in levels {
            for offset in 0..4 {
                let model = case1(&chain, level, offset)?;
                let rep = topological_freeness_sweep(&model);
                ensure(
                    rep.stabilizers
                        .iter()
                        .all(|s| matches!(s, Stabilizer::Trivial | Stabilizer::Reflection { .. })),
                    || format!("{chain} L = {level}: stabilizer outside {{e, s^n t}}"),
                )?;
                ensure(rep.fixed_points.iter().all(|f| f.states.len() <= 2), || {
                    format!("{chain} L = {level}: a reflection fixes > 2 states")
                })?;
                models += 1;
            }
        }
    }
    Ok(format!(
        "t fixes {{0, 4}} at n_L = 8; {models} Case I models have stabilizers in {{e, s^n t}}"
    ))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: "1a",
            name: "flagship non-coboundary (dyadic)",
            budget: Duration::from_secs(1),
            run: flagship_dyadic,
        },
        Criterion {
            id: "1b",
            name: "flagship coboundary (3^i)",
            budget: Duration::from_secs(1),
            run: flagship_triadic,
        },
        Criterion {
            id: "2",
            name: "essential values: closed form = brute force",
            budget: Duration::from_secs(60),
            run: oracle_equivalence,
        },
        Criterion {
            id: "3",
            name: "E(c) trivial iff coboundary",
            budget: Duration::from_secs(60),
            run: consistency,
        },
        Criterion {
            id: "4a",
            name: "skew pair: free, coe, certificate",
            budget: Duration::from_secs(5),
            run: skew_demo,
        },
        Criterion {
            id: "4b",
            name: "skew pair: exhaustive conjugacy search",
            budget: Duration::from_secs(300),
            run: skew_search,
        },
        Criterion {
            id: "5",
            name: "Case I round trip",
            budget: Duration::from_secs(30),
            run: round_trip,
        },
        Criterion {
            id: "6",
            name: "Case II extraction and restriction",
            budget: Duration::from_secs(10),
            run: case2,
        },
        Criterion {
            id: "7",
            name: "metric layer",
            budget: Duration::from_secs(5),
            run: metric,
        },
        Criterion {
            id: "8",
            name: "freeness sweep",
            budget: Duration::from_secs(5),
            run: freeness,
        },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == c.id || c.id.starts_with(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match verdict {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over budget: {d}")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:<3} {status}  {} [{:.3} s / {} s]: {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

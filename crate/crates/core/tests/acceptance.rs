//! Exhaustive acceptance checks. Run with `cargo test --test acceptance`; prints one
//! line per criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use unitary_modp::chars::bracket;
use unitary_modp::finituni::{det_norm_index, enumerate_group, sym_weight_invariants, Variant};
use unitary_modp::hecke::{supersingular_table, validate_relations, FiniteHecke};
use unitary_modp::langlands::cgroup::{
    c_d, c_equiv, c_params, c_to_l, omega1_on_quadratic, HalfOmega,
};
use unitary_modp::langlands::{
    classes, correspond, g_params, induce_restrict, intertwiner_oracle, param_equiv, transfer,
    twist_param, xi_embed, LParam,
};
use unitary_modp::reps::{classify, packet_of, supercuspidal_packets, IrrepLabel, LPacket};
use unitary_modp::{FFElem, FieldTower};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tower(p: u64) -> FieldTower {
    FieldTower::new(p, 1, 1).expect("tower")
}

fn group_orders() -> Outcome {
    let t = tower(3);
    let u = enumerate_group(&t, Variant::U11).map_err(|e| e.to_string())?;
    let su = enumerate_group(&t, Variant::SU11).map_err(|e| e.to_string())?;
    let u1 = enumerate_group(&t, Variant::U1).map_err(|e| e.to_string())?;
    let got = (u.len(), su.len(), u1.len(), det_norm_index(&t, &u));
    ensure(got == (96, 24, 4, 4), || format!("orders {got:?}"))?;
    // (q+1) q (q²−1) and q (q²−1)
    ensure(u.len() == 4 * 3 * 8 && su.len() == 3 * 8, || {
        "order formulas".into()
    })
}

fn hecke_laws() -> Outcome {
    for q in [3u64, 5] {
        let report = validate_relations(q).map_err(|e| e.to_string())?;
        ensure(report.passed(), || {
            format!("q={q}: {:?}", report.failures())
        })?;
        let t = tower(q);
        let h = FiniteHecke::new(&t).map_err(|e| e.to_string())?;
        let base = supersingular_table(q).map_err(|e| e.to_string())?;
        for i in 0..base.len() {
            for field in 0..2 {
                for delta in [-1i64, 1] {
                    let mut table = base.clone();
                    let slot = if field == 0 {
                        &mut table[i].a_s
                    } else {
                        &mut table[i].a_s_prime
                    };
                    *slot = (*slot + delta).rem_euclid(q as i64);
                    if table == base {
                        continue;
                    }
                    let rep = h.validate_modules(&table).map_err(|e| e.to_string())?;
                    ensure(!rep.passed(), || {
                        format!("q={q}: mutation of M_{i} field {field} by {delta} passed")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn classification_counts() -> Outcome {
    for p in [3u64, 5, 7] {
        let t = tower(p);
        let labels = classify(&t, 1).map_err(|e| e.to_string())?;
        let count = |f: fn(&IrrepLabel) -> bool| labels.iter().filter(|l| f(l)).count() as u64;
        ensure(
            count(|l| matches!(l, IrrepLabel::Char { .. })) == p + 1,
            || format!("p={p} chars"),
        )?;
        ensure(
            count(|l| matches!(l, IrrepLabel::Steinberg { .. })) == p + 1,
            || format!("p={p} St"),
        )?;
        ensure(count(|l| l.is_supercuspidal()) == p * (p + 1), || {
            format!("p={p} sc")
        })?;
        let packets = supercuspidal_packets(p);
        ensure(packets.len() as u64 == p * (p + 1) / 2, || {
            format!("p={p} packets")
        })?;
        for pk in &packets {
            ensure(pk.len() == 2, || format!("p={p} packet size"))?;
            for m in pk.members() {
                ensure(packet_of(p, m) == *pk, || {
                    format!("p={p} packet_of not involutive at {m:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn correspondence_bijection() -> Outcome {
    for p in [3u64, 5, 7] {
        let t = tower(p);
        let e = |x: unitary_modp::Error| x.to_string();
        let regular: Vec<LParam> = g_params(&t, 1)
            .map_err(e)?
            .into_iter()
            .filter(|a| matches!(a, LParam::Endo { .. }) && a.is_regular())
            .collect();
        let cls = classes(&regular, |a, b| param_equiv(&t, a, b)).map_err(e)?;
        ensure(cls.len() as u64 == (p + 1) * p / 2, || {
            format!("p={p}: {} classes", cls.len())
        })?;
        let images: BTreeSet<LPacket> = cls
            .iter()
            .map(|c| correspond(&t, &c[0]))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let target: BTreeSet<LPacket> = supercuspidal_packets(p).into_iter().collect();
        ensure(images == target, || {
            format!("p={p}: image is not the set of supercuspidal packets")
        })?;
        for class in &cls {
            let first = correspond(&t, &class[0]).map_err(e)?;
            for a in class {
                ensure(correspond(&t, a).map_err(e)? == first, || {
                    format!("p={p}: {a:?} not class-invariant")
                })?;
            }
        }
        let mut sweep = regular.clone();
        sweep.extend(
            g_params(&t, 2)
                .map_err(e)?
                .into_iter()
                .filter(|a| matches!(a, LParam::Torus { .. })),
        );
        for a in &sweep {
            let base = correspond(&t, a).map_err(e)?;
            for j in 0..=p as i64 {
                let lhs = correspond(&t, &twist_param(&t, a, j).map_err(e)?).map_err(e)?;
                ensure(lhs == base.twist(p, j), || {
                    format!("p={p}: twist {j} of {a:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn oracle_agreement() -> Outcome {
    for p in [3u64, 5] {
        let t = tower(p);
        let e = |x: unitary_modp::Error| x.to_string();
        let params = g_params(&t, 2).map_err(e)?;
        for a in &params {
            for b in &params {
                let x = param_equiv(&t, a, b).map_err(e)?;
                let y = intertwiner_oracle(&t, a, b).map_err(e)?;
                ensure(x == y, || {
                    format!("p={p}: {a:?} vs {b:?}: closed form {x}, oracle {y}")
                })?;
            }
        }
    }
    Ok(())
}

fn no_stable_sweep() -> Outcome {
    for p in [3u64, 5] {
        let t = tower(p);
        for m in 0..p * p - 1 {
            for lambda in t.units(2).map_err(|e| e.to_string())? {
                let pair = induce_restrict(&t, m, lambda).map_err(|e| e.to_string())?;
                ensure(
                    pair.len() == 2 && pair.iter().all(|c| c.n == 2 && c.lambda == lambda),
                    || format!("p={p} m={m}"),
                )?;
                ensure(pair[1].r == (p * m) % (p * p - 1), || {
                    format!("p={p} m={m}: wrong conjugate")
                })?;
            }
        }
    }
    Ok(())
}

fn sym_invariants() -> Outcome {
    for p in [3u64, 5] {
        let t = tower(p);
        let su = enumerate_group(&t, Variant::SU11).map_err(|e| e.to_string())?;
        for r in 0..p as usize {
            let inv = sym_weight_invariants(&t, &su, r).map_err(|e| e.to_string())?;
            let mut xr = vec![0u64; r + 1];
            xr[0] = 1;
            ensure(inv.dim == 1 && inv.basis == vec![xr], || {
                format!("p={p} r={r}: {inv:?}")
            })?;
        }
    }
    Ok(())
}

fn c_group_layer() -> Outcome {
    let t = tower(3);
    let e = |x: unitary_modp::Error| x.to_string();
    let omega1 = omega1_on_quadratic(3).map_err(e)?;
    let cs = c_params(&t, 2).map_err(e)?;
    for half in [HalfOmega::Standard, HalfOmega::Twisted] {
        for a in &cs {
            ensure(c_d(&t, a, half).map_err(e)? == omega1, || {
                format!("d({a:?}) ≠ ω₁")
            })?;
        }
    }
    let c_count = classes(&cs, |a, b| c_equiv(&t, a, b)).map_err(e)?.len();
    let shifted: Vec<LParam> = cs
        .iter()
        .map(|a| c_to_l(&t, a, HalfOmega::Standard))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let l_count = classes(&shifted, |a, b| param_equiv(&t, a, b))
        .map_err(e)?
        .len();
    let direct = classes(&g_params(&t, 2).map_err(e)?, |a, b| param_equiv(&t, a, b))
        .map_err(e)?
        .len();
    ensure(c_count == l_count && l_count == direct, || {
        format!("C {c_count}, shifted L {l_count}, L {direct}")
    })
}

fn cross_module() -> Outcome {
    for p in [3u64, 5, 7] {
        let t = tower(p);
        let e = |x: unitary_modp::Error| x.to_string();
        for k in 0..=p {
            for l in 0..=p {
                if k == l {
                    continue;
                }
                let sc = IrrepLabel::Supercuspidal {
                    k: l,
                    r: bracket(k as i64 - l as i64 - 1, p).map_err(e)?,
                };
                let lhs = correspond(&t, &LParam::Endo { k, l }).map_err(e)?;
                ensure(lhs == packet_of(p, &sc), || {
                    format!("p={p} ({k},{l}) vs packet_of")
                })?;
                let via = correspond(&t, &xi_embed(&LParam::J { k, l }).map_err(e)?).map_err(e)?;
                ensure(transfer(&t, k, l).map_err(e)? == via, || {
                    format!("p={p} transfer ({k},{l})")
                })?;
            }
        }
        let minus_one = t.from_int(-1);
        for k in 0..=p {
            let r = ((1 - p as i64) * k as i64).rem_euclid((p * p - 1) as i64) as u64;
            let a = correspond(&t, &LParam::Endo { k, l: k }).map_err(e)?;
            let b = correspond(
                &t,
                &LParam::Torus {
                    r,
                    lambda: minus_one,
                },
            )
            .map_err(e)?;
            ensure(a == b, || format!("p={p} singular k={k}"))?;
        }
        ensure(
            correspond(
                &t,
                &LParam::Torus {
                    r: 0,
                    lambda: FFElem::ONE,
                },
            )
            .map_err(e)?
            .len()
                == 4,
            || "trivial torus packet".into(),
        )?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 group orders (q=3)", group_orders, Duration::from_secs(1)),
        (
            "2 Hecke laws and mutations (q=3,5)",
            hecke_laws,
            Duration::from_secs(10),
        ),
        (
            "3 classification counts (p=3,5,7)",
            classification_counts,
            Duration::from_secs(1),
        ),
        (
            "4 correspondence bijection and twists (p=3,5,7)",
            correspondence_bijection,
            Duration::from_secs(5),
        ),
        (
            "5 oracle agreement (p=3,5)",
            oracle_agreement,
            Duration::from_secs(60),
        ),
        (
            "6 no stable parameters (p=3,5)",
            no_stable_sweep,
            Duration::from_secs(5),
        ),
        (
            "7 Sym^r invariants (p=3,5)",
            sym_invariants,
            Duration::from_secs(1),
        ),
        (
            "8 C-group layer (p=3)",
            c_group_layer,
            Duration::from_secs(5),
        ),
        (
            "9 cross-module coherence (p=3,5,7)",
            cross_module,
            Duration::from_secs(5),
        ),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let status = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS",
            _ => {
                failed += 1;
                "FAIL"
            }
        };
        let detail = match &outcome {
            Err(msg) => format!(" ({msg})"),
            Ok(()) if elapsed > budget => format!(" (over budget {budget:?})"),
            Ok(()) => String::new(),
        };
        println!(
            "{status} criterion {name}: {:.3}s{detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

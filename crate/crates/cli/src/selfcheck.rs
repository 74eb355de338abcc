//! Cross-checks of the algebraic fast paths against the brute-force oracle:
//! explicit state sets, exhaustive orbit walks, the unrolled scalar
//! recurrence, and companion-matrix orders at r = 1.

use num_bigint::BigUint;

use knotshift::alexander::builtin_knot;
use knotshift::oracle::{
    self, brute_force_orbits, brute_force_states, companion_order_r1, scalar_recurrence_check,
};
use knotshift::ring::RingParams;
use knotshift::shift::{two_bridge_window_pair, ShiftSystem};
use knotshift::spectra::{order_of_transfer, period_set};
use knotshift::submodule::Submodule;
use knotshift::Error;

use crate::output::{self, CheckLine, SelfcheckReport};

const GRID_KNOTS: [&str; 4] = ["trefoil", "figure8", "5_2", "7_4"];
const ALL_KNOTS: [&str; 6] = ["trefoil", "figure8", "5_1", "5_2", "6_1", "7_4"];

pub fn run(json: bool) -> Result<(), Error> {
    let mut checks = Vec::new();

    for name in GRID_KNOTS {
        for p in [2u64, 3] {
            for r in [1u32, 2] {
                checks.push(check(format!("states {name} p={p} r={r}"), || {
                    states_agree(name, p, r)
                }));
                checks.push(check(format!("orbits {name} p={p} r={r}"), || {
                    orbits_agree(name, p, r)
                }));
            }
        }
    }
    for name in ALL_KNOTS {
        for p in [2u64, 3, 5] {
            for r in [1u32, 2] {
                checks.push(check(format!("recurrence {name} p={p} r={r}"), || {
                    recurrence_holds(name, p, r)
                }));
            }
        }
    }
    for name in ALL_KNOTS {
        for p in [2u64, 3, 5, 7, 11] {
            checks.push(check(format!("companion {name} p={p}"), || {
                companion_agrees(name, p)
            }));
        }
    }

    let passed = checks.iter().all(|c| c.status == "ok");
    let report = SelfcheckReport { schema: output::SCHEMA, checks, passed };
    if json {
        output::print_json(&report);
    } else {
        output::print_selfcheck_table(&report);
    }
    if passed {
        Ok(())
    } else {
        Err(Error::TheoremViolation(
            "selfcheck found disagreements with the brute-force oracle".into(),
        ))
    }
}

fn check(name: String, f: impl FnOnce() -> Result<(), String>) -> CheckLine {
    match f() {
        Ok(()) => CheckLine { name, status: "ok".into() },
        Err(detail) => CheckLine { name, status: format!("FAIL: {detail}") },
    }
}

fn set_matches_submodule(
    set: &oracle::ExplicitStateSet,
    sub: &Submodule,
    label: &str,
) -> Result<(), String> {
    let elements = sub.elements(oracle::STATE_SET_CAP).map_err(|e| e.to_string())?;
    if set.len() != elements.len() {
        return Err(format!("{label}: explicit {} vs algebraic {}", set.len(), elements.len()));
    }
    for v in &elements {
        if !set.contains(v) {
            return Err(format!("{label}: algebraic element {v:?} missing from explicit set"));
        }
    }
    Ok(())
}

fn states_agree(name: &str, p: u64, r: u32) -> Result<(), String> {
    let knot = builtin_knot(name).map_err(|e| e.to_string())?;
    let pair = knot.pair_for_prime(p).map_err(|e| e.to_string())?;
    let ring = RingParams::new(p, r).map_err(|e| e.to_string())?;
    let (v_set, fwd_set, bwd_set) = brute_force_states(&pair, ring).map_err(|e| e.to_string())?;
    let v = knotshift::compute_v(&pair, ring).map_err(|e| e.to_string())?;
    let fwd = knotshift::compute_forward_null(&pair, ring).map_err(|e| e.to_string())?;
    let bwd = knotshift::compute_backward_null(&pair, ring).map_err(|e| e.to_string())?;
    set_matches_submodule(&v_set, &v, "V")?;
    set_matches_submodule(&fwd_set, &fwd, "forward-null")?;
    set_matches_submodule(&bwd_set, &bwd, "backward-null")?;
    Ok(())
}

fn orbits_agree(name: &str, p: u64, r: u32) -> Result<(), String> {
    let knot = builtin_knot(name).map_err(|e| e.to_string())?;
    let pair = knot.pair_for_prime(p).map_err(|e| e.to_string())?;
    let ring = RingParams::new(p, r).map_err(|e| e.to_string())?;
    let sys = ShiftSystem::new(pair, ring).map_err(|e| e.to_string())?;
    let walked = brute_force_orbits(sys.transfer()).map_err(|e| e.to_string())?;
    let spectrum =
        period_set(sys.transfer(), oracle::DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
    if walked.len() != spectrum.counts.len() {
        return Err(format!("period sets differ: {walked:?} vs {:?}", spectrum.counts));
    }
    for (&q, &count) in &walked {
        if spectrum.counts.get(&q) != Some(&BigUint::from(count)) {
            return Err(format!("count at q={q}: walked {count} vs algebraic"));
        }
    }
    Ok(())
}

fn recurrence_holds(name: &str, p: u64, r: u32) -> Result<(), String> {
    let knot = builtin_knot(name).map_err(|e| e.to_string())?;
    let pair = two_bridge_window_pair(&knot.delta, p).map_err(|e| e.to_string())?;
    let ring = RingParams::new(p, r).map_err(|e| e.to_string())?;
    let sys = ShiftSystem::new(pair, ring).map_err(|e| e.to_string())?;
    let d = order_of_transfer(sys.transfer(), oracle::DEFAULT_ORDER_CAP)
        .map_err(|e| e.to_string())?;
    scalar_recurrence_check(&knot.delta, &sys, 3 * d as usize).map_err(|e| e.to_string())
}

fn companion_agrees(name: &str, p: u64) -> Result<(), String> {
    let knot = builtin_knot(name).map_err(|e| e.to_string())?;
    let d_companion =
        companion_order_r1(&knot.delta, p, oracle::DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
    let pair = two_bridge_window_pair(&knot.delta, p).map_err(|e| e.to_string())?;
    let ring = RingParams::new(p, 1).map_err(|e| e.to_string())?;
    let sys = ShiftSystem::new(pair, ring).map_err(|e| e.to_string())?;
    let d_transfer = order_of_transfer(sys.transfer(), oracle::DEFAULT_ORDER_CAP)
        .map_err(|e| e.to_string())?;
    if d_companion != d_transfer {
        return Err(format!("companion order {d_companion} vs transfer order {d_transfer}"));
    }
    Ok(())
}

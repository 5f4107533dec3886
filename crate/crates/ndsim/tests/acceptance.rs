//! End-to-end acceptance checks, one test per numbered claim. Each prints
//! a single PASS line (visible with `--nocapture`); a failed assertion is
//! the FAIL line.

use ndsim::checker::ViolationKind;
use ndsim::model::{
    flight_time_ps, ChannelParams, LinkSchedule, NlosMap, NodeId, NodeSpec, Position, Role, Time,
    WorldConfig, SPEED_OF_LIGHT,
};
use ndsim::protocol::{ProtocolConfig, ProtocolKind, RejectReason, Session, Verdict};
use ndsim::scenario::{emit_report, parse_scenario, run_scenario, ReportFormat, Scenario};
use ndsim::search::{
    exhaustive_scan, find_attack, min_safe_relay_delay, replay_witness, Placement, SearchSpace,
    StrategyChoice,
};

const C: f64 = SPEED_OF_LIGHT;

fn t_cfg(kind: ProtocolKind, range_m: f64, eps_t_ps: Time) -> ProtocolConfig {
    ProtocolConfig {
        kind,
        range_m: Some(range_m),
        v: C,
        eps_t_ps,
        eps_d_m: 0.10,
        eps_sync_ps: 1_000,
        proc_delay_ps: 1_000_000,
    }
}

fn tl_cfg(kind: ProtocolKind, eps_d_m: f64) -> ProtocolConfig {
    ProtocolConfig {
        kind,
        range_m: None,
        v: C,
        eps_t_ps: 1_000,
        eps_d_m,
        eps_sync_ps: 1_000,
        proc_delay_ps: 1_000_000,
    }
}

fn space(cfg: ProtocolConfig) -> SearchSpace {
    SearchSpace {
        protocol: cfg,
        distances_m: vec![0.001, 1.0, 25.0, 50.0, 99.0],
        delta_r_grid_ps: vec![0],
        delta_r_min_ps: 0,
        delta_r_max_ps: 1_000_000,
        placements: vec![Placement::NearA],
        strategies: vec![StrategyChoice::MinDelay],
        v_adv_mps: C,
        asymmetric_links: false,
        tune_deliberate_delay: false,
    }
}

/// Honest two-node pair, links up both ways.
fn pair(kind: ProtocolKind, d: f64, offsets: (Time, Time), nlos_ps: Time) -> Scenario {
    let (a, b) = (NodeId(0), NodeId(1));
    let mut links = LinkSchedule::default();
    links.set_always_up(a, b);
    links.set_always_up(b, a);
    let mut nlos = NlosMap::default();
    if nlos_ps != 0 {
        nlos.set(a, b, nlos_ps);
        nlos.set(b, a, nlos_ps);
    }
    let protocol = if kind.uses_location() {
        tl_cfg(kind, 0.10)
    } else {
        t_cfg(kind, 100.0, 1_000)
    };
    Scenario {
        world: WorldConfig {
            nodes: vec![
                NodeSpec {
                    id: a,
                    pos: Position::new(0.0, 0.0),
                    role: Role::Correct,
                    clock_offset_ps: offsets.0,
                },
                NodeSpec {
                    id: b,
                    pos: Position::new(d, 0.0),
                    role: Role::Correct,
                    clock_offset_ps: offsets.1,
                },
            ],
            channel: ChannelParams { v: C, v_adv: C },
            links,
            nlos,
            radio_range_m: 1_000.0,
        },
        protocol,
        adversary: None,
        sessions: vec![Session { initiator: a, responder: b, t_start_ps: 0 }],
        t_end_ps: 10_000_000,
        seed: 0,
        event_cap: 1_000_000,
        names: vec!["a".into(), "b".into()],
    }
}

#[test]
fn criterion_1_bt_threshold_recovery() {
    // bisection recovers R/v = 333,564 ps
    let scan = min_safe_relay_delay(&space(t_cfg(ProtocolKind::Bt, 100.0, 0))).unwrap();
    assert!(
        (scan.first_safe_delta_r_ps - 333_564).abs() <= 200,
        "bisection found {} ps",
        scan.first_safe_delta_r_ps
    );

    // exhaustive grid agrees with the closed form everywhere
    let mut sp = space(t_cfg(ProtocolKind::Bt, 100.0, 0));
    sp.distances_m = (1..=99).map(|d| d as f64).collect();
    sp.delta_r_grid_ps = (0..=400).map(|ns| ns * 1_000).collect();
    let scan = exhaustive_scan(&sp, 100_000).unwrap();
    assert_eq!(scan.points, 99 * 401);
    assert_eq!(scan.oracle_points, scan.points);
    assert_eq!(scan.oracle_mismatches, 0);
    let thr = flight_time_ps(100.0, C);
    for r in &scan.records {
        let closed = flight_time_ps(r.point.distance_m, C) + r.point.delta_r_ps <= thr;
        assert_eq!(r.accepted, closed, "closed form mismatch at {:?}", r.point);
        assert_eq!(r.attack, r.accepted, "every accept here is a relayed accept");
    }
    println!("criterion 1 (BT threshold recovery, grid oracle): PASS");
}

#[test]
fn criterion_2_crt_factor_of_two() {
    let bt = min_safe_relay_delay(&space(t_cfg(ProtocolKind::Bt, 100.0, 0))).unwrap();

    let mut sp = space(t_cfg(ProtocolKind::Crt, 100.0, 0));
    sp.placements = vec![Placement::NearB];
    sp.strategies = vec![StrategyChoice::ResponderOnly];
    sp.asymmetric_links = true;
    let crt = min_safe_relay_delay(&sp).unwrap();
    assert!(
        (crt.first_safe_delta_r_ps - 667_128).abs() <= 200,
        "CRT boundary {} ps",
        crt.first_safe_delta_r_ps
    );
    assert!((crt.first_safe_delta_r_ps - 2 * bt.first_safe_delta_r_ps).abs() <= 200);

    // without the asymmetric links the search falls back to BT-level and
    // labels min_delay as the strategy that got there
    let mut sp = space(t_cfg(ProtocolKind::Crt, 100.0, 0));
    sp.placements = vec![Placement::NearA, Placement::NearB];
    sp.strategies = vec![StrategyChoice::MinDelay, StrategyChoice::ResponderOnly];
    sp.asymmetric_links = false;
    let fallback = min_safe_relay_delay(&sp).unwrap();
    assert!(
        (fallback.first_safe_delta_r_ps - 333_564).abs() <= 200,
        "fallback boundary {} ps",
        fallback.first_safe_delta_r_ps
    );
    assert_eq!(fallback.strategy, StrategyChoice::MinDelay);
    println!("criterion 2 (CRT doubled delta_r, auditable fallback): PASS");
}

#[test]
fn criterion_3_tl_zero_and_budget_tolerance() {
    for kind in [ProtocolKind::Btl, ProtocolKind::Crtl] {
        // eps_d = 0: no witness anywhere on the nanosecond grid
        let mut sp = space(tl_cfg(kind, 0.0));
        sp.distances_m = (1..=99).map(|d| d as f64).collect();
        sp.delta_r_grid_ps = (1..=400).map(|ns| ns * 1_000).collect();
        let scan = exhaustive_scan(&sp, 100_000).unwrap();
        assert_eq!(scan.attacks, 0, "{kind:?} admitted an attack with eps_d = 0");

        // eps_d = 0.10 m: witnesses exactly up to the 333 ps budget
        let mut sp = space(tl_cfg(kind, 0.10));
        sp.distances_m = vec![1.0, 50.0, 99.0];
        sp.delta_r_grid_ps = (1..=400).collect();
        let scan = exhaustive_scan(&sp, 100_000).unwrap();
        for r in &scan.records {
            assert_eq!(
                r.attack,
                r.point.delta_r_ps <= 333,
                "{kind:?} budget boundary wrong at {:?}",
                r.point
            );
        }
    }
    println!("criterion 3 (TL secure for delta_r > 0; eps_d budget = 333 ps): PASS");
}

#[test]
fn criterion_4_tl_speed_requirement() {
    let mut sp = space(tl_cfg(ProtocolKind::Btl, 0.0));
    sp.distances_m = vec![50.0];
    sp.delta_r_grid_ps = vec![1_000, 50_000, 83_391, 83_392, 100_000];
    sp.placements = vec![Placement::WormholeEndpoints];
    sp.strategies = vec![StrategyChoice::Wormhole];
    sp.v_adv_mps = 2.0 * C;
    sp.tune_deliberate_delay = true;
    let scan = exhaustive_scan(&sp, 1_000).unwrap();
    for r in &scan.records {
        // tunnel at 2c saves 83,391 ps over 50 m; a slower relay can't hide
        assert_eq!(r.attack, r.point.delta_r_ps <= 83_391, "at {:?}", r.point);
    }
    assert!(scan.attacks > 0);

    let mut same_speed = sp.clone();
    same_speed.v_adv_mps = C;
    let scan = exhaustive_scan(&same_speed, 1_000).unwrap();
    assert_eq!(scan.attacks, 0, "v_adv = v must admit no BTL witness");
    println!("criterion 4 (TL needs v_adv > v; 83,391 ps headroom at 2c): PASS");
}

#[test]
fn criterion_5_tl_nlos_availability_failure() {
    // 1 ns NLOS = 0.2998 m apparent stretch > 0.10 m tolerance
    let s = pair(ProtocolKind::Btl, 50.0, (0, 0), 1_000);
    let (_, report) = run_scenario(&s).unwrap();
    assert_eq!(report.accepts, 0);
    assert_eq!(report.rejects, 1);
    let avail = report
        .verdicts
        .iter()
        .find(|v| v.property == "availability")
        .unwrap();
    assert!(!avail.holds);
    assert_eq!(avail.violations.len(), 1);
    assert_eq!(avail.violations[0].kind, ViolationKind::Availability);

    // BT absorbs the same NLOS: 166,782 + 1,000 <= 333,564
    let s = pair(ProtocolKind::Bt, 50.0, (0, 0), 1_000);
    let (trace, report) = run_scenario(&s).unwrap();
    assert_eq!(report.accepts, 1);
    assert!(report.all_hold());
    let d = trace.decisions().next().unwrap();
    assert_eq!(d.measured.elapsed_ps, Some(167_782));
    println!("criterion 5 (NLOS breaks TL availability, BT tolerates it): PASS");
}

#[test]
fn criterion_6_ultrasound_distance_fraud() {
    let ultrasound = ProtocolConfig {
        kind: ProtocolKind::Bt,
        range_m: Some(10.0),
        v: 340.0,
        eps_t_ps: 1_000,
        eps_d_m: 0.10,
        eps_sync_ps: 1_000,
        proc_delay_ps: 1_000_000,
    };
    let mut sp = space(ultrasound);
    sp.distances_m = vec![1_000.0];
    sp.delta_r_grid_ps = vec![20_000_000]; // the 20 us relay
    sp.placements = vec![Placement::WormholeEndpoints];
    sp.strategies = vec![StrategyChoice::Wormhole];
    sp.v_adv_mps = C;
    let w = find_attack(&sp, 1_000, 7).unwrap().expect("ultrasound fraud witness");
    assert_eq!(w.violation.kind, ViolationKind::DistanceCorrectness);
    assert_eq!(w.violation.actual_distance_m, Some(1_000.0));
    let scenario = parse_scenario(&w.scenario_toml).unwrap();
    let (trace, _) = run_scenario(&scenario).unwrap();
    let d = trace
        .decisions()
        .find(|d| d.verdict == Verdict::Accept)
        .unwrap();
    // 20 us hold + 1,000 m tunnel at c, far under the 29.41 ms threshold
    assert_eq!(d.measured.elapsed_ps, Some(23_335_641));
    assert_eq!(flight_time_ps(10.0, 340.0), 29_411_764_706);

    // the identical relay delay against RF never wins
    let mut rf = sp.clone();
    rf.protocol = t_cfg(ProtocolKind::Bt, 100.0, 1_000);
    rf.distances_m = vec![1.0, 50.0, 99.0, 1_000.0];
    assert!(find_attack(&rf, 1_000, 7).unwrap().is_none());
    println!("criterion 6 (20 us relay defeats ultrasound, not RF): PASS");
}

#[test]
fn criterion_7_clock_sync_requirement() {
    // BT: 500 ns offset difference inflates the one-way measurement
    let s = pair(ProtocolKind::Bt, 50.0, (0, 500_000), 0);
    let (trace, report) = run_scenario(&s).unwrap();
    assert_eq!(report.accepts, 0);
    let d = trace.decisions().next().unwrap();
    assert_eq!(d.verdict, Verdict::Reject);
    assert_eq!(d.reject_reason, Some(RejectReason::ExceedsThreshold));
    assert_eq!(d.measured.elapsed_ps, Some(666_782));

    // CRT: single-clock round trip is invariant under +-1 ms offsets
    let baseline = pair(ProtocolKind::Crt, 50.0, (0, 0), 0);
    let offset = pair(ProtocolKind::Crt, 50.0, (1_000_000_000, -1_000_000_000), 0);
    let (t0, r0) = run_scenario(&baseline).unwrap();
    let (t1, r1) = run_scenario(&offset).unwrap();
    assert_eq!(r0.accepts, 1);
    assert_eq!(r1.accepts, 1);
    let e0 = t0.decisions().next().unwrap().measured.elapsed_ps;
    let e1 = t1.decisions().next().unwrap().measured.elapsed_ps;
    assert_eq!(e0, e1);
    println!("criterion 7 (B-protocols need clock sync, CR-protocols don't): PASS");
}

#[test]
fn criterion_8_jamming_and_los_availability() {
    // link-down window: no deliveries, reported as precondition-unmet
    let mut s = pair(ProtocolKind::Bt, 50.0, (0, 0), 0);
    s.world.links.set(
        NodeId(0),
        NodeId(1),
        vec![ndsim::model::Interval::new(0, 100)], // closes mid-flight
    );
    let (trace, report) = run_scenario(&s).unwrap();
    assert_eq!(trace.deliveries().count(), 0);
    let avail = report
        .verdicts
        .iter()
        .find(|v| v.property == "availability")
        .unwrap();
    assert!(avail.holds);
    assert_eq!(avail.preconditions_unmet.len(), 1);

    // simultaneous opposite-direction deliveries are both processed
    let mut s = pair(ProtocolKind::Bt, 50.0, (0, 0), 0);
    s.sessions.push(Session { initiator: NodeId(1), responder: NodeId(0), t_start_ps: 0 });
    let (trace, report) = run_scenario(&s).unwrap();
    let arrivals: Vec<Time> = trace.deliveries().map(|d| d.t_arrival_ps).collect();
    assert_eq!(arrivals, vec![166_782, 166_782]);
    assert_eq!(report.accepts, 2);

    // 100% availability over the LOS grid for all four protocols
    for kind in [ProtocolKind::Bt, ProtocolKind::Btl, ProtocolKind::Crt, ProtocolKind::Crtl] {
        for d in 1..=99 {
            let s = pair(kind, d as f64, (0, 0), 0);
            let (_, report) = run_scenario(&s).unwrap();
            assert_eq!(report.accepts, 1, "{kind:?} at {d} m");
            assert!(report.all_hold(), "{kind:?} at {d} m");
        }
    }
    println!("criterion 8 (jamming semantics, 100% LOS availability grid): PASS");
}

#[test]
fn criterion_9_determinism_and_replay() {
    let s = pair(ProtocolKind::Btl, 50.0, (0, 0), 1_000);
    let (trace_a, report_a) = run_scenario(&s).unwrap();
    let (trace_b, report_b) = run_scenario(&s).unwrap();
    assert_eq!(trace_a.to_jsonl(), trace_b.to_jsonl());
    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    emit_report(&report_a, ReportFormat::Csv, &mut csv_a).unwrap();
    emit_report(&report_b, ReportFormat::Csv, &mut csv_b).unwrap();
    assert_eq!(csv_a, csv_b);

    // a stored witness replays to the identical violation
    let mut sp = space(t_cfg(ProtocolKind::Bt, 100.0, 0));
    sp.delta_r_grid_ps = vec![0, 100_000];
    let w = find_attack(&sp, 1_000, 123).unwrap().expect("witness");
    assert!(replay_witness(&w).unwrap());
    let w2 = find_attack(&sp, 1_000, 123).unwrap().unwrap();
    assert_eq!(w.point, w2.point);
    assert_eq!(w.trace_digest, w2.trace_digest);
    assert_eq!(w.violation, w2.violation);
    println!("criterion 9 (byte-identical reruns, witness replay): PASS");
}

//! Distance fraud against an ultrasound ranging system: sound gives the
//! adversary nearly 30 ms of threshold to play with, so a 20 us RF
//! wormhole makes nodes 1 km apart look adjacent. The same 20 us against
//! an RF time-of-flight protocol misses the window by two orders of
//! magnitude.

use ndsim::model::{flight_time_ps, SPEED_OF_LIGHT};
use ndsim::protocol::{ProtocolConfig, ProtocolKind};
use ndsim::search::{find_attack, Placement, SearchSpace, StrategyChoice};

fn space(v_mps: f64, range_m: f64) -> SearchSpace {
    SearchSpace {
        protocol: ProtocolConfig {
            kind: ProtocolKind::Bt,
            range_m: Some(range_m),
            v: v_mps,
            eps_t_ps: 1_000,
            eps_d_m: 0.10,
            eps_sync_ps: 1_000,
            proc_delay_ps: 1_000_000,
        },
        distances_m: vec![1_000.0],
        delta_r_grid_ps: vec![20_000_000], // 20 us of relay processing
        delta_r_min_ps: 0,
        delta_r_max_ps: 1,
        placements: vec![Placement::WormholeEndpoints],
        strategies: vec![StrategyChoice::Wormhole],
        v_adv_mps: SPEED_OF_LIGHT,
        asymmetric_links: false,
        tune_deliberate_delay: false,
    }
}

fn main() {
    let ultrasound = space(340.0, 10.0);
    println!(
        "ultrasound threshold for R = 10 m: {} ps ({:.2} ms)",
        flight_time_ps(10.0, 340.0),
        flight_time_ps(10.0, 340.0) as f64 / 1e9,
    );
    match find_attack(&ultrasound, 100, 0).unwrap() {
        Some(w) => println!(
            "witness: victims {} m apart accepted each other ({:?})\n",
            w.violation.actual_distance_m.unwrap(),
            w.violation.kind,
        ),
        None => println!("no witness?!"),
    }

    let rf = space(SPEED_OF_LIGHT, 100.0);
    println!(
        "RF threshold for R = 100 m: {} ps (0.33 us) -- a 20 us relay is hopeless",
        flight_time_ps(100.0, SPEED_OF_LIGHT),
    );
    match find_attack(&rf, 100, 0).unwrap() {
        Some(_) => println!("witness?!"),
        None => println!("no witness, as expected"),
    }
}

//! How slow does a relay have to be before it stops working? Bisect the
//! per-relay delay for BT, then show CRT needs twice as much once only
//! the response can be relayed.

use ndsim::model::SPEED_OF_LIGHT;
use ndsim::protocol::{ProtocolConfig, ProtocolKind};
use ndsim::search::{min_safe_relay_delay, Placement, SearchSpace, StrategyChoice};

fn base_space(kind: ProtocolKind) -> SearchSpace {
    SearchSpace {
        protocol: ProtocolConfig {
            kind,
            range_m: Some(100.0),
            v: SPEED_OF_LIGHT,
            eps_t_ps: 0,
            eps_d_m: 0.10,
            eps_sync_ps: 1_000,
            proc_delay_ps: 1_000_000,
        },
        // 1 mm resolves the boundary to a few ps; coarser grids leave
        // round(d/c) on the table
        distances_m: vec![0.001, 1.0, 25.0, 50.0, 99.0],
        delta_r_grid_ps: vec![0],
        delta_r_min_ps: 0,
        delta_r_max_ps: 1_000_000,
        placements: vec![Placement::NearA],
        strategies: vec![StrategyChoice::MinDelay],
        v_adv_mps: SPEED_OF_LIGHT,
        asymmetric_links: false,
        tune_deliberate_delay: false,
    }
}

fn main() {
    let bt = min_safe_relay_delay(&base_space(ProtocolKind::Bt)).unwrap();
    println!(
        "BT : relay is harmless from {} ps up (R/v = 333,564 ps), found via {}/{} at d = {} m, {} probes",
        bt.first_safe_delta_r_ps,
        bt.strategy.name(),
        bt.placement.name(),
        bt.distance_m,
        bt.probes,
    );

    let mut crt_space = base_space(ProtocolKind::Crt);
    crt_space.placements = vec![Placement::NearB];
    crt_space.strategies = vec![StrategyChoice::ResponderOnly];
    crt_space.asymmetric_links = true; // challenge direct, response relayed
    let crt = min_safe_relay_delay(&crt_space).unwrap();
    println!(
        "CRT: relay is harmless from {} ps up (2R/v = 667,128 ps) when only the response is relayed",
        crt.first_safe_delta_r_ps,
    );
    println!(
        "ratio: {:.4}",
        crt.first_safe_delta_r_ps as f64 / bt.first_safe_delta_r_ps as f64
    );
}

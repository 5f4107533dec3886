//! Location-aware protocols (here BTL) cross-check time of flight against
//! claimed coordinates, so a relay that merely forwards fast still shifts
//! the measurement. Only an adversary whose tunnel is *faster than the
//! protocol medium* gains slack it can burn as deliberate delay to make
//! the numbers line up again.

use ndsim::model::SPEED_OF_LIGHT;
use ndsim::protocol::{ProtocolConfig, ProtocolKind};
use ndsim::search::{exhaustive_scan, Placement, SearchSpace, StrategyChoice};

fn space(v_adv_mps: f64) -> SearchSpace {
    SearchSpace {
        protocol: ProtocolConfig {
            kind: ProtocolKind::Btl,
            range_m: None,
            v: SPEED_OF_LIGHT,
            eps_t_ps: 1_000,
            eps_d_m: 0.0, // zero tolerance: any mismatch rejects
            eps_sync_ps: 1_000,
            proc_delay_ps: 1_000_000,
        },
        distances_m: vec![50.0],
        delta_r_grid_ps: vec![1_000, 50_000, 83_391, 83_392, 100_000],
        delta_r_min_ps: 0,
        delta_r_max_ps: 1,
        placements: vec![Placement::WormholeEndpoints],
        strategies: vec![StrategyChoice::Wormhole],
        v_adv_mps,
        asymmetric_links: false,
        // compensate: hold the message so elapsed equals the honest d/v
        tune_deliberate_delay: true,
    }
}

fn main() {
    // 50 m at c is 166,782 ps; a 2c tunnel covers it in 83,391 ps,
    // leaving 83,391 ps of headroom for the mandatory relay delay
    for (label, v_adv) in [("v_adv = 2c", 2.0 * SPEED_OF_LIGHT), ("v_adv = c ", SPEED_OF_LIGHT)] {
        let scan = exhaustive_scan(&space(v_adv), 100).unwrap();
        println!("{label}:");
        for r in &scan.records {
            println!(
                "  delta_r = {:>7} ps -> {}",
                r.point.delta_r_ps,
                if r.attack { "witness (victim fooled)" } else { "no attack" },
            );
        }
    }
}

//! Randomized-order witness hunting: shuffle the grid with a seeded RNG,
//! stop at the first scenario whose trace violates a correctness
//! property, then replay the stored witness and confirm the digest.

use ndsim::model::SPEED_OF_LIGHT;
use ndsim::protocol::{ProtocolConfig, ProtocolKind};
use ndsim::search::{find_attack, replay_witness, Placement, SearchSpace, StrategyChoice};

fn main() {
    let space = SearchSpace {
        protocol: ProtocolConfig {
            kind: ProtocolKind::Bt,
            range_m: Some(100.0),
            v: SPEED_OF_LIGHT,
            eps_t_ps: 1_000,
            eps_d_m: 0.10,
            eps_sync_ps: 1_000,
            proc_delay_ps: 1_000_000,
        },
        distances_m: vec![1.0, 10.0, 25.0, 50.0, 75.0, 99.0],
        delta_r_grid_ps: vec![0, 50_000, 100_000, 200_000, 300_000, 400_000],
        delta_r_min_ps: 0,
        delta_r_max_ps: 1_000_000,
        placements: vec![Placement::NearA, Placement::NearB, Placement::Midpoint],
        strategies: vec![StrategyChoice::MinDelay],
        v_adv_mps: SPEED_OF_LIGHT,
        asymmetric_links: false,
        tune_deliberate_delay: false,
    };

    let seed = std::env::var("ND_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1u64);

    match find_attack(&space, 10_000, seed).unwrap() {
        Some(w) => {
            println!(
                "witness at d = {} m, placement {}, delta_r = {} ps ({:?})",
                w.point.distance_m,
                w.point.placement.name(),
                w.point.delta_r_ps,
                w.violation.kind,
            );
            println!("trace digest {:#018x}, seed {}", w.trace_digest, w.seed);
            println!("replay matches: {}", replay_witness(&w).unwrap());
            println!("\nscenario that did it:\n{}", w.scenario_toml);
        }
        None => println!("space is clean within budget"),
    }
}

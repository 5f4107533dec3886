//! Two honest nodes 50 m apart running BT beacon-based neighbor
//! discovery. The beacon flies for round(50 m / c) = 166,782 ps, well
//! under the R = 100 m threshold of 333,564 ps.

use ndsim::model::{
    ChannelParams, LinkSchedule, NlosMap, NodeId, NodeSpec, Position, Role, WorldConfig,
    SPEED_OF_LIGHT,
};
use ndsim::protocol::{ProtocolConfig, ProtocolKind, Session};
use ndsim::{SimState, Verdict};

fn main() {
    let (a, b) = (NodeId(0), NodeId(1));
    let mut links = LinkSchedule::default();
    links.set_always_up(a, b);
    links.set_always_up(b, a);
    let world = WorldConfig {
        nodes: vec![
            NodeSpec { id: a, pos: Position::new(0.0, 0.0), role: Role::Correct, clock_offset_ps: 0 },
            NodeSpec { id: b, pos: Position::new(50.0, 0.0), role: Role::Correct, clock_offset_ps: 0 },
        ],
        channel: ChannelParams { v: SPEED_OF_LIGHT, v_adv: SPEED_OF_LIGHT },
        links,
        nlos: NlosMap::default(),
        radio_range_m: 1_000.0,
    };
    let cfg = ProtocolConfig::new(ProtocolKind::Bt, Some(100.0), SPEED_OF_LIGHT);
    let sessions = vec![Session { initiator: a, responder: b, t_start_ps: 0 }];

    let sim = SimState::new(world, cfg, None, sessions, 0).unwrap();
    let trace = sim.run_until(10_000_000).unwrap();

    for d in trace.decisions() {
        println!(
            "n{} {} n{} as neighbor: elapsed {} ps (threshold {} ps)",
            d.decider.0,
            if d.verdict == Verdict::Accept { "accepts" } else { "rejects" },
            d.subject.0,
            d.measured.elapsed_ps.unwrap(),
            cfg.range_threshold_ps().unwrap(),
        );
    }
    println!("\nfull trace:\n{}", trace.to_jsonl());
}

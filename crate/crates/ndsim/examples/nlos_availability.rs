//! The flip side of location cross-checks: a legitimate pair whose path
//! has 1 ns of non-line-of-sight delay. BTL rejects its own neighbor
//! (1 ns is 0.2998 m of apparent stretch, over the 0.10 m tolerance);
//! plain BT shrugs it off. The availability checker records the BTL
//! rejection as a violation because the pair met every precondition.

use ndsim::scenario::{emit_report, parse_scenario, run_scenario, ReportFormat};

fn scenario(kind: &str) -> String {
    format!(
        r#"
[world]
radio_range_m = 200.0

[[world.nodes]]
id = "a"
x_m = 0.0
y_m = 0.0

[[world.nodes]]
id = "b"
x_m = 50.0
y_m = 0.0

[[nlos.pair]]
src = "a"
dst = "b"
delay_ps = 1000

[[nlos.pair]]
src = "b"
dst = "a"
delay_ps = 1000

[protocol]
kind = "{kind}"
{range}

[[sessions]]
initiator = "a"
responder = "b"

[run]
t_end_ps = 10000000
"#,
        kind = kind,
        range = if kind == "BT" { "range_m = 100.0" } else { "" },
    )
}

fn main() {
    for kind in ["BTL", "BT"] {
        let s = parse_scenario(&scenario(kind)).unwrap();
        let (_, report) = run_scenario(&s).unwrap();
        println!("=== {kind} over a 1 ns NLOS path ===");
        emit_report(&report, ReportFormat::Human, &mut std::io::stdout().lock()).unwrap();
        println!();
    }
}

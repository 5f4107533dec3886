//! The file-format tour: write a scenario TOML, load it back, run it,
//! and emit the trace as JSONL plus the report as CSV — the same three
//! formats the `ndsim` binary speaks.

use ndsim::scenario::{emit_report, run_scenario_with_id, scenario_to_toml, ReportFormat};

const SCENARIO: &str = r#"
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

[[world.nodes]]
id = "e"
x_m = 25.0
y_m = 12.0
role = "adversarial"

[[world.obstacles]]
x1_m = 25.0
y1_m = -10.0
x2_m = 25.0
y2_m = 10.0
kind = "blocking"

[protocol]
kind = "CRT"
range_m = 100.0

[adversary]
members = ["e"]
delta_r_ps = 50000

[adversary.strategy]
kind = "min_delay"

[[sessions]]
initiator = "a"
responder = "b"

[run]
t_end_ps = 20000000
seed = 7
"#;

fn main() {
    let dir = std::env::temp_dir().join("ndsim-scenario-files");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("crt_relay.toml");
    std::fs::write(&path, SCENARIO).unwrap();

    let scenario = ndsim::load_scenario(&path).unwrap();
    let (trace, report) = run_scenario_with_id(&scenario, "crt_relay").unwrap();

    let trace_path = dir.join("crt_relay.jsonl");
    std::fs::write(&trace_path, trace.to_jsonl()).unwrap();

    let mut csv = Vec::new();
    emit_report(&report, ReportFormat::Csv, &mut csv).unwrap();
    let csv_path = dir.join("crt_relay.csv");
    std::fs::write(&csv_path, &csv).unwrap();

    println!("trace  -> {} ({} events)", trace_path.display(), trace.events.len());
    println!("report -> {}", csv_path.display());
    println!("\n{}", String::from_utf8(csv).unwrap());

    // scenarios round-trip exactly, so a witness file is self-contained
    let round = ndsim::parse_scenario(&scenario_to_toml(&scenario)).unwrap();
    assert_eq!(scenario, round);
    println!("round trip: ok");
}

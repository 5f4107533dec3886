//! Scenario files, run orchestration and report emission.
//!
//! Scenarios are TOML with unit-suffixed keys (`…_m`, `…_ps`, `…_mps`).
//! Unknown keys are hard errors: a typo that silently vanished would
//! invalidate an acceptance run.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversary::{AdversaryConfig, RelayStrategy};
use crate::checker::{
    check_availability, check_distance_correctness, check_link_correctness, CheckVerdict,
    Violation,
};
use crate::engine::{SimState, Trace, DEFAULT_EVENT_CAP};
use crate::error::ScenarioError;
use crate::model::{
    build_schedule_from_geometry, ChannelParams, Interval, NodeId, NodeSpec, Obstacle,
    ObstacleKind, Position, Role, Time, WorldConfig, SPEED_OF_LIGHT,
};
use crate::protocol::{
    Decision, ProtocolConfig, ProtocolKind, Session, Verdict, DEFAULT_EPS_D_M, DEFAULT_EPS_SYNC_PS,
    DEFAULT_EPS_T_PS, DEFAULT_PROC_DELAY_PS,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub world: WorldConfig,
    pub protocol: ProtocolConfig,
    pub adversary: Option<AdversaryConfig>,
    pub sessions: Vec<Session>,
    pub t_end_ps: Time,
    pub seed: u64,
    pub event_cap: u64,
    /// Node names in declaration order; index = NodeId.
    pub names: Vec<String>,
}

impl Scenario {
    pub fn node_name(&self, id: NodeId) -> &str {
        self.names
            .get(id.0 as usize)
            .map(String::as_str)
            .unwrap_or("?")
    }
}

// ---------------------------------------------------------------------------
// TOML schema

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    world: WorldSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    links: Option<LinksSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nlos: Option<NlosSection>,
    protocol: ProtocolSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    adversary: Option<AdversarySection>,
    sessions: Vec<SessionSection>,
    run: RunSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldSection {
    radio_range_m: f64,
    nodes: Vec<NodeSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    obstacles: Vec<ObstacleSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeSection {
    id: String,
    x_m: f64,
    y_m: f64,
    #[serde(default = "default_role")]
    role: String,
    #[serde(default)]
    clock_offset_ps: Time,
}

fn default_role() -> String {
    "correct".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleSection {
    x1_m: f64,
    y1_m: f64,
    x2_m: f64,
    y2_m: f64,
    kind: String,
    #[serde(default)]
    nlos_delay_ps: Time,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinksSection {
    /// Explicit per-pair overrides applied after geometry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    up: Vec<LinkOverride>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    down: Vec<LinkPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkOverride {
    src: String,
    dst: String,
    /// Disjoint, sorted half-open [start, end) intervals; empty = always up.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    intervals_ps: Vec<[Time; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkPair {
    src: String,
    dst: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NlosSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pair: Vec<NlosPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NlosPair {
    src: String,
    dst: String,
    delay_ps: Time,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtocolSection {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    range_m: Option<f64>,
    #[serde(default = "default_v")]
    v_mps: f64,
    #[serde(default = "default_eps_t")]
    eps_t_ps: Time,
    #[serde(default = "default_eps_d")]
    eps_d_m: f64,
    #[serde(default = "default_eps_sync")]
    eps_sync_ps: Time,
    #[serde(default = "default_proc_delay")]
    proc_delay_ps: Time,
}

fn default_v() -> f64 {
    SPEED_OF_LIGHT
}
fn default_eps_t() -> Time {
    DEFAULT_EPS_T_PS
}
fn default_eps_d() -> f64 {
    DEFAULT_EPS_D_M
}
fn default_eps_sync() -> Time {
    DEFAULT_EPS_SYNC_PS
}
fn default_proc_delay() -> Time {
    DEFAULT_PROC_DELAY_PS
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdversarySection {
    members: Vec<String>,
    delta_r_ps: Time,
    #[serde(skip_serializing_if = "Option::is_none")]
    deliberate_delay_ps: Option<Time>,
    #[serde(default)]
    tunnel_extra_ps: Time,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_adv_mps: Option<f64>,
    strategy: StrategySection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategySection {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    src: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dst: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    kinds: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entry: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exit: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionSection {
    initiator: String,
    responder: String,
    #[serde(default)]
    t_start_ps: Time,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    t_end_ps: Time,
    #[serde(default)]
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    event_cap: Option<u64>,
}

// ---------------------------------------------------------------------------
// Loading

struct NameTable {
    ids: BTreeMap<String, NodeId>,
}

impl NameTable {
    fn resolve(&self, name: &str, field: &str) -> Result<NodeId, ScenarioError> {
        self.ids.get(name).copied().ok_or_else(|| {
            ScenarioError::semantic(format!("{field} references unknown node {name:?}"))
        })
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = toml::from_str(text)?;
    scenario_from_file(file)
}

fn scenario_from_file(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
    let mut names = Vec::new();
    let mut ids = BTreeMap::new();
    let mut nodes = Vec::new();
    for (i, n) in file.world.nodes.iter().enumerate() {
        if ids.contains_key(&n.id) {
            return Err(ScenarioError::semantic(format!(
                "duplicate node id {:?}",
                n.id
            )));
        }
        let id = NodeId(i as u32);
        ids.insert(n.id.clone(), id);
        names.push(n.id.clone());
        let role = match n.role.as_str() {
            "correct" => Role::Correct,
            "adversarial" => Role::Adversarial,
            other => {
                return Err(ScenarioError::semantic(format!(
                    "node {:?}: unknown role {other:?} (expected correct|adversarial)",
                    n.id
                )))
            }
        };
        nodes.push(NodeSpec {
            id,
            pos: Position::new(n.x_m, n.y_m),
            role,
            clock_offset_ps: n.clock_offset_ps,
        });
    }
    let table = NameTable { ids };

    let mut obstacles = Vec::new();
    for ob in &file.world.obstacles {
        let kind = match ob.kind.as_str() {
            "blocking" => ObstacleKind::Blocking,
            "delaying" => ObstacleKind::Delaying,
            other => {
                return Err(ScenarioError::semantic(format!(
                    "obstacle kind {other:?} (expected blocking|delaying)"
                )))
            }
        };
        obstacles.push(Obstacle {
            a: Position::new(ob.x1_m, ob.y1_m),
            b: Position::new(ob.x2_m, ob.y2_m),
            kind,
            nlos_delay_ps: ob.nlos_delay_ps,
        });
    }
    let (mut links, mut nlos) =
        build_schedule_from_geometry(&nodes, file.world.radio_range_m, &obstacles)?;

    if let Some(section) = &file.links {
        for o in &section.up {
            let src = table.resolve(&o.src, "links.up.src")?;
            let dst = table.resolve(&o.dst, "links.up.dst")?;
            let intervals = if o.intervals_ps.is_empty() {
                vec![Interval::ALWAYS]
            } else {
                o.intervals_ps
                    .iter()
                    .map(|&[s, e]| Interval::new(s, e))
                    .collect()
            };
            links.set(src, dst, intervals);
        }
        for p in &section.down {
            let src = table.resolve(&p.src, "links.down.src")?;
            let dst = table.resolve(&p.dst, "links.down.dst")?;
            links.set_always_down(src, dst);
        }
    }
    if let Some(section) = &file.nlos {
        for p in &section.pair {
            let src = table.resolve(&p.src, "nlos.pair.src")?;
            let dst = table.resolve(&p.dst, "nlos.pair.dst")?;
            nlos.set(src, dst, p.delay_ps);
        }
    }

    let kind: ProtocolKind = file
        .protocol
        .kind
        .parse()
        .map_err(ScenarioError::Semantic)?;
    let protocol = ProtocolConfig {
        kind,
        range_m: file.protocol.range_m,
        v: file.protocol.v_mps,
        eps_t_ps: file.protocol.eps_t_ps,
        eps_d_m: file.protocol.eps_d_m,
        eps_sync_ps: file.protocol.eps_sync_ps,
        proc_delay_ps: file.protocol.proc_delay_ps,
    };
    protocol.validate().map_err(ScenarioError::Semantic)?;

    let adversary = match &file.adversary {
        None => None,
        Some(a) => {
            let mut members = std::collections::BTreeSet::new();
            for m in &a.members {
                members.insert(table.resolve(m, "adversary.members")?);
            }
            let need = |o: &Option<String>, f: &str| -> Result<NodeId, ScenarioError> {
                match o {
                    Some(n) => table.resolve(n, f),
                    None => Err(ScenarioError::semantic(format!(
                        "adversary.strategy.{f} is required for this strategy"
                    ))),
                }
            };
            let strategy = match a.strategy.kind.as_str() {
                "relay_all" => RelayStrategy::RelayAll,
                "min_delay" => RelayStrategy::MinDelay,
                "one_direction" => RelayStrategy::OneDirection {
                    src: need(&a.strategy.src, "src")?,
                    dst: need(&a.strategy.dst, "dst")?,
                },
                "selective" => RelayStrategy::Selective {
                    kinds: a.strategy.kinds.iter().cloned().collect(),
                },
                "wormhole" => RelayStrategy::Wormhole {
                    entry: need(&a.strategy.entry, "entry")?,
                    exit: need(&a.strategy.exit, "exit")?,
                },
                other => {
                    return Err(ScenarioError::semantic(format!(
                        "unknown strategy kind {other:?}"
                    )))
                }
            };
            Some(AdversaryConfig {
                members,
                delta_r_ps: a.delta_r_ps,
                deliberate_delay_ps: a.deliberate_delay_ps,
                strategy,
                tunnel_extra_ps: a.tunnel_extra_ps,
            })
        }
    };

    let world = WorldConfig {
        nodes,
        channel: ChannelParams {
            v: protocol.v,
            v_adv: file
                .adversary
                .as_ref()
                .and_then(|a| a.v_adv_mps)
                .unwrap_or(protocol.v),
        },
        links,
        nlos,
        radio_range_m: file.world.radio_range_m,
    };
    world.validate()?;
    if let Some(adv) = &adversary {
        adv.validate(&world).map_err(ScenarioError::Semantic)?;
    }

    let mut sessions = Vec::new();
    for s in &file.sessions {
        let initiator = table.resolve(&s.initiator, "sessions.initiator")?;
        let responder = table.resolve(&s.responder, "sessions.responder")?;
        if initiator == responder {
            return Err(ScenarioError::semantic(
                "sessions.initiator and sessions.responder must differ",
            ));
        }
        if s.t_start_ps > file.run.t_end_ps {
            return Err(ScenarioError::semantic(
                "sessions.t_start_ps must not exceed run.t_end_ps",
            ));
        }
        sessions.push(Session {
            initiator,
            responder,
            t_start_ps: s.t_start_ps,
        });
    }

    Ok(Scenario {
        world,
        protocol,
        adversary,
        sessions,
        t_end_ps: file.run.t_end_ps,
        seed: file.run.seed,
        event_cap: file.run.event_cap.unwrap_or(DEFAULT_EVENT_CAP),
        names,
    })
}

/// Serialize back to the TOML schema. Geometry-derived links and NLOS are
/// written as explicit overrides so the round trip is exact.
pub fn scenario_to_toml(s: &Scenario) -> String {
    let nodes: Vec<NodeSection> = s
        .world
        .nodes
        .iter()
        .map(|n| NodeSection {
            id: s.node_name(n.id).to_string(),
            x_m: n.pos.x,
            y_m: n.pos.y,
            role: match n.role {
                Role::Correct => "correct".to_string(),
                Role::Adversarial => "adversarial".to_string(),
            },
            clock_offset_ps: n.clock_offset_ps,
        })
        .collect();

    let mut up = Vec::new();
    let mut down = Vec::new();
    for ((src, dst), ivs) in &s.world.links.entries {
        if ivs.is_empty() {
            down.push(LinkPair {
                src: s.node_name(*src).to_string(),
                dst: s.node_name(*dst).to_string(),
            });
        } else {
            let intervals = if ivs == &[Interval::ALWAYS] {
                vec![]
            } else {
                ivs.iter().map(|iv| [iv.start, iv.end]).collect()
            };
            up.push(LinkOverride {
                src: s.node_name(*src).to_string(),
                dst: s.node_name(*dst).to_string(),
                intervals_ps: intervals,
            });
        }
    }
    let nlos_pairs: Vec<NlosPair> = s
        .world
        .nlos
        .delays
        .iter()
        .map(|((src, dst), d)| NlosPair {
            src: s.node_name(*src).to_string(),
            dst: s.node_name(*dst).to_string(),
            delay_ps: *d,
        })
        .collect();

    let adversary = s.adversary.as_ref().map(|a| {
        let name = |id: &NodeId| s.node_name(*id).to_string();
        let strategy = match &a.strategy {
            RelayStrategy::RelayAll => StrategySection {
                kind: "relay_all".into(),
                src: None,
                dst: None,
                kinds: vec![],
                entry: None,
                exit: None,
            },
            RelayStrategy::MinDelay => StrategySection {
                kind: "min_delay".into(),
                src: None,
                dst: None,
                kinds: vec![],
                entry: None,
                exit: None,
            },
            RelayStrategy::OneDirection { src, dst } => StrategySection {
                kind: "one_direction".into(),
                src: Some(name(src)),
                dst: Some(name(dst)),
                kinds: vec![],
                entry: None,
                exit: None,
            },
            RelayStrategy::Selective { kinds } => StrategySection {
                kind: "selective".into(),
                src: None,
                dst: None,
                kinds: kinds.iter().cloned().collect(),
                entry: None,
                exit: None,
            },
            RelayStrategy::Wormhole { entry, exit } => StrategySection {
                kind: "wormhole".into(),
                src: None,
                dst: None,
                kinds: vec![],
                entry: Some(name(entry)),
                exit: Some(name(exit)),
            },
        };
        AdversarySection {
            members: a.members.iter().map(|m| name(m)).collect(),
            delta_r_ps: a.delta_r_ps,
            deliberate_delay_ps: a.deliberate_delay_ps,
            tunnel_extra_ps: a.tunnel_extra_ps,
            v_adv_mps: Some(s.world.channel.v_adv),
            strategy,
        }
    });

    let file = ScenarioFile {
        world: WorldSection {
            radio_range_m: s.world.radio_range_m,
            nodes,
            obstacles: vec![],
        },
        links: Some(LinksSection { up, down }),
        nlos: if nlos_pairs.is_empty() {
            None
        } else {
            Some(NlosSection { pair: nlos_pairs })
        },
        protocol: ProtocolSection {
            kind: s.protocol.kind.name().to_string(),
            range_m: s.protocol.range_m,
            v_mps: s.protocol.v,
            eps_t_ps: s.protocol.eps_t_ps,
            eps_d_m: s.protocol.eps_d_m,
            eps_sync_ps: s.protocol.eps_sync_ps,
            proc_delay_ps: s.protocol.proc_delay_ps,
        },
        adversary,
        sessions: s
            .sessions
            .iter()
            .map(|sess| SessionSection {
                initiator: s.node_name(sess.initiator).to_string(),
                responder: s.node_name(sess.responder).to_string(),
                t_start_ps: sess.t_start_ps,
            })
            .collect(),
        run: RunSection {
            t_end_ps: s.t_end_ps,
            seed: s.seed,
            event_cap: Some(s.event_cap),
        },
    };
    toml::to_string_pretty(&file).expect("scenario serializes")
}

// ---------------------------------------------------------------------------
// Running and reporting

#[derive(Debug, Clone, Serialize)]
pub struct DecisionSummary {
    pub decider: String,
    pub subject: String,
    pub verdict: &'static str,
    pub elapsed_ps: Option<Time>,
    pub d_tof_m: Option<f64>,
    pub d_loc_m: Option<f64>,
    pub reject_reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResult {
    pub protocol: String,
    pub measured_threshold_ps: Time,
    pub analytic_target_ps: Option<Time>,
    pub strategy_at_boundary: String,
    pub placement_at_boundary: String,
    pub probes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario_id: String,
    pub protocol: String,
    pub delta_r_ps: Option<Time>,
    pub accepts: usize,
    pub rejects: usize,
    pub decisions: Vec<DecisionSummary>,
    pub verdicts: Vec<CheckVerdict>,
    pub threshold: Option<ThresholdResult>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.verdicts.iter().flat_map(|v| v.violations.iter())
    }
}

pub fn build_sim(s: &Scenario) -> Result<SimState, ScenarioError> {
    Ok(SimState::new(
        s.world.clone(),
        s.protocol,
        s.adversary.clone(),
        s.sessions.clone(),
        s.seed,
    )?
    .with_event_cap(s.event_cap))
}

/// Simulate to `t_end`, apply every applicable checker and assemble the
/// report. Deterministic for a fixed scenario and seed.
pub fn run_scenario(s: &Scenario) -> Result<(Trace, Report), ScenarioError> {
    run_scenario_with_id(s, "scenario")
}

pub fn run_scenario_with_id(s: &Scenario, id: &str) -> Result<(Trace, Report), ScenarioError> {
    let trace = build_sim(s)?.run_until(s.t_end_ps)?;
    let verdicts = vec![
        check_distance_correctness(&trace, &s.world, &s.protocol)?,
        check_link_correctness(&trace, &s.world, &s.protocol)?,
        check_availability(&trace, &s.sessions, &s.world, &s.protocol)?,
    ];
    let decisions: Vec<DecisionSummary> = trace
        .decisions()
        .map(|d| decision_summary(s, d))
        .collect();
    let accepts = trace.decisions().filter(|d| d.verdict == Verdict::Accept).count();
    let rejects = decisions.len() - accepts;
    let report = Report {
        scenario_id: id.to_string(),
        protocol: s.protocol.kind.name().to_string(),
        delta_r_ps: s.adversary.as_ref().map(|a| a.delta_r_ps),
        accepts,
        rejects,
        decisions,
        verdicts,
        threshold: None,
    };
    Ok((trace, report))
}

fn decision_summary(s: &Scenario, d: &Decision) -> DecisionSummary {
    DecisionSummary {
        decider: s.node_name(d.decider).to_string(),
        subject: s.node_name(d.subject).to_string(),
        verdict: match d.verdict {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        },
        elapsed_ps: d.measured.elapsed_ps,
        d_tof_m: d.measured.d_tof_m,
        d_loc_m: d.measured.d_loc_m,
        reject_reason: d.reject_reason.map(|r| format!("{r:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Jsonl,
    Csv,
}

pub const CSV_HEADER: &str = "scenario_id,protocol,delta_r_ps,distance_correctness,link_correctness,availability,violation_kind,decider,subject,actual_distance_m,chain_length,measured_threshold_ps,analytic_target_ps";

/// Emit the report. Byte-stable across runs for identical inputs. CSV
/// carries one row per finding (violation or threshold result) under a
/// fixed header; an empty report is header-only.
pub fn emit_report(r: &Report, format: ReportFormat, sink: &mut dyn Write) -> std::io::Result<()> {
    match format {
        ReportFormat::Human => emit_human(r, sink),
        ReportFormat::Jsonl => emit_jsonl(r, sink),
        ReportFormat::Csv => emit_csv(r, sink),
    }
}

fn verdict_cell(r: &Report, property: &str) -> String {
    match r.verdicts.iter().find(|v| v.property == property) {
        Some(v) if !v.applicable => "n/a".to_string(),
        Some(v) if v.holds => "holds".to_string(),
        Some(_) => "violated".to_string(),
        None => String::new(),
    }
}

fn emit_csv(r: &Report, sink: &mut dyn Write) -> std::io::Result<()> {
    writeln!(sink, "{CSV_HEADER}")?;
    let prefix = |sink: &mut dyn Write| -> std::io::Result<()> {
        write!(
            sink,
            "{},{},{},{},{},{}",
            r.scenario_id,
            r.protocol,
            r.delta_r_ps.map(|d| d.to_string()).unwrap_or_default(),
            verdict_cell(r, "distance_correctness"),
            verdict_cell(r, "link_correctness"),
            verdict_cell(r, "availability"),
        )
    };
    for v in r.violations() {
        prefix(sink)?;
        writeln!(
            sink,
            ",{},{},{},{},{},,",
            v.kind.name(),
            v.decider.0,
            v.subject.0,
            v.actual_distance_m.map(|d| format!("{d:.4}")).unwrap_or_default(),
            v.chain_length.map(|c| c.to_string()).unwrap_or_default(),
        )?;
    }
    if let Some(t) = &r.threshold {
        prefix(sink)?;
        writeln!(
            sink,
            ",threshold,,,,,{},{}",
            t.measured_threshold_ps,
            t.analytic_target_ps.map(|a| a.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

fn emit_jsonl(r: &Report, sink: &mut dyn Write) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Section<'a, T: Serialize> {
        section: &'static str,
        #[serde(flatten)]
        body: &'a T,
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        scenario_id: &'a str,
        protocol: &'a str,
        delta_r_ps: Option<Time>,
        accepts: usize,
        rejects: usize,
        all_hold: bool,
    }
    let summary = Summary {
        scenario_id: &r.scenario_id,
        protocol: &r.protocol,
        delta_r_ps: r.delta_r_ps,
        accepts: r.accepts,
        rejects: r.rejects,
        all_hold: r.all_hold(),
    };
    writeln!(
        sink,
        "{}",
        serde_json::to_string(&Section { section: "summary", body: &summary })?
    )?;
    for d in &r.decisions {
        writeln!(
            sink,
            "{}",
            serde_json::to_string(&Section { section: "decision", body: d })?
        )?;
    }
    for v in &r.verdicts {
        writeln!(
            sink,
            "{}",
            serde_json::to_string(&Section { section: "verdict", body: v })?
        )?;
    }
    if let Some(t) = &r.threshold {
        writeln!(
            sink,
            "{}",
            serde_json::to_string(&Section { section: "threshold", body: t })?
        )?;
    }
    Ok(())
}

fn emit_human(r: &Report, sink: &mut dyn Write) -> std::io::Result<()> {
    writeln!(sink, "scenario  : {}", r.scenario_id)?;
    writeln!(sink, "protocol  : {}", r.protocol)?;
    if let Some(d) = r.delta_r_ps {
        writeln!(sink, "delta_r   : {d} ps")?;
    }
    writeln!(sink, "decisions : {} accept, {} reject", r.accepts, r.rejects)?;
    writeln!(sink)?;
    writeln!(
        sink,
        "{:<10} {:<10} {:<8} {:>14} {:>12} {:>12}  {}",
        "decider", "subject", "verdict", "elapsed_ps", "d_tof_m", "d_loc_m", "reason"
    )?;
    for d in &r.decisions {
        writeln!(
            sink,
            "{:<10} {:<10} {:<8} {:>14} {:>12} {:>12}  {}",
            d.decider,
            d.subject,
            d.verdict,
            d.elapsed_ps.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
            d.d_tof_m.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
            d.d_loc_m.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
            d.reject_reason.clone().unwrap_or_default(),
        )?;
    }
    writeln!(sink)?;
    for v in &r.verdicts {
        let status = if !v.applicable {
            "not applicable"
        } else if v.holds {
            "holds"
        } else {
            "VIOLATED"
        };
        writeln!(sink, "{:<22} {status}", v.property)?;
        for viol in &v.violations {
            writeln!(
                sink,
                "  - {:?} decider=n{} subject=n{} distance={} chain={}",
                v.property,
                viol.decider.0,
                viol.subject.0,
                viol.actual_distance_m.map(|d| format!("{d:.2} m")).unwrap_or_else(|| "-".into()),
                viol.chain_length.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
            )?;
        }
        for pre in &v.preconditions_unmet {
            writeln!(
                sink,
                "  ~ precondition unmet for (n{}, n{}): {}",
                pre.decider.0, pre.subject.0, pre.reason
            )?;
        }
    }
    if let Some(t) = &r.threshold {
        writeln!(sink)?;
        writeln!(
            sink,
            "threshold: measured {} ps (target {}), boundary via {} / {} over {} probes",
            t.measured_threshold_ps,
            t.analytic_target_ps.map(|a| format!("{a} ps")).unwrap_or_else(|| "-".into()),
            t.strategy_at_boundary,
            t.placement_at_boundary,
            t.probes,
        )?;
    }
    Ok(())
}

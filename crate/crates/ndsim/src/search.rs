//! Attack search over a parameter grid: distances, adversary placements,
//! relay strategies and relay delays. Everything is deterministic for a
//! fixed space and seed; a found witness replays to the same trace digest.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{AdversaryConfig, RelayStrategy};
use crate::checker::{check_distance_correctness, check_link_correctness, Violation};
use crate::engine::{Trace, DEFAULT_EVENT_CAP};
use crate::error::ScenarioError;
use crate::model::{
    flight_time_ps, ChannelParams, LinkSchedule, NlosMap, NodeId, NodeSpec, Position, Role, Time,
    WorldConfig,
};
use crate::protocol::{ProtocolConfig, ProtocolKind, Session, Verdict};
use crate::scenario::{run_scenario_with_id, Scenario, ThresholdResult};

/// Where the relay nodes sit relative to the victims A (origin) and
/// B (at distance d on the x axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// One relay co-located with A.
    NearA,
    /// One relay co-located with B.
    NearB,
    /// One relay halfway between the victims.
    Midpoint,
    /// Two relays, one at each victim, for wormhole strategies.
    WormholeEndpoints,
}

impl Placement {
    pub fn name(self) -> &'static str {
        match self {
            Placement::NearA => "near_a",
            Placement::NearB => "near_b",
            Placement::Midpoint => "midpoint",
            Placement::WormholeEndpoints => "wormhole_endpoints",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyChoice {
    MinDelay,
    /// Relay only traffic originated by the responder; pairs with
    /// `asymmetric_links` so the challenge travels directly.
    ResponderOnly,
    Wormhole,
}

impl StrategyChoice {
    pub fn name(self) -> &'static str {
        match self {
            StrategyChoice::MinDelay => "min_delay",
            StrategyChoice::ResponderOnly => "responder_only",
            StrategyChoice::Wormhole => "wormhole",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    pub protocol: ProtocolConfig,
    /// True A-B separations to try, meters.
    pub distances_m: Vec<f64>,
    /// Relay delays for grid search, ps.
    pub delta_r_grid_ps: Vec<Time>,
    /// Bisection bracket for `min_safe_relay_delay`.
    pub delta_r_min_ps: Time,
    pub delta_r_max_ps: Time,
    pub placements: Vec<Placement>,
    pub strategies: Vec<StrategyChoice>,
    /// Tunnel speed for wormhole points, m/s.
    pub v_adv_mps: f64,
    /// CR protocols only: leave the challenge direction A->B up so only
    /// the response is relayed.
    #[serde(default)]
    pub asymmetric_links: bool,
    /// *L protocols: tune the deliberate relay delay so the measured ToF
    /// matches the claimed location exactly.
    #[serde(default)]
    pub tune_deliberate_delay: bool,
}

impl SearchSpace {
    pub fn validate(&self) -> Result<(), String> {
        self.protocol.validate()?;
        if self.distances_m.is_empty() {
            return Err("distances_m must be non-empty".to_string());
        }
        if self.distances_m.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err("distances_m entries must be finite and > 0".to_string());
        }
        if !(self.v_adv_mps.is_finite() && self.v_adv_mps > 0.0) {
            return Err("v_adv_mps must be finite and > 0".to_string());
        }
        if self.placements.is_empty() || self.strategies.is_empty() {
            return Err("placements and strategies must be non-empty".to_string());
        }
        if self.delta_r_min_ps > self.delta_r_max_ps {
            return Err("delta_r_min_ps must be <= delta_r_max_ps".to_string());
        }
        Ok(())
    }
}

pub fn load_space(path: &Path) -> Result<SearchSpace, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    let space: SearchSpace = toml::from_str(&text)?;
    space.validate().map_err(ScenarioError::Semantic)?;
    Ok(space)
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchPoint {
    pub distance_m: f64,
    pub placement: Placement,
    pub strategy: StrategyChoice,
    pub delta_r_ps: Time,
}

/// Cross product of the space, minus incoherent combinations (wormhole
/// strategy needs the two-endpoint placement and vice versa; responder-only
/// relaying needs a challenge-response protocol).
pub fn enumerate_points(space: &SearchSpace) -> Vec<SearchPoint> {
    let mut points = Vec::new();
    for &distance_m in &space.distances_m {
        for &placement in &space.placements {
            for &strategy in &space.strategies {
                let wormhole_strategy = strategy == StrategyChoice::Wormhole;
                let wormhole_placement = placement == Placement::WormholeEndpoints;
                if wormhole_strategy != wormhole_placement {
                    continue;
                }
                if strategy == StrategyChoice::ResponderOnly
                    && !space.protocol.kind.is_challenge_response()
                {
                    continue;
                }
                for &delta_r_ps in &space.delta_r_grid_ps {
                    points.push(SearchPoint { distance_m, placement, strategy, delta_r_ps });
                }
            }
        }
    }
    points
}

/// Concrete scenario for a grid point. Victims a at the origin and b at
/// (d, 0) with their direct link down (both ways, or challenge-direction-up
/// when `asymmetric_links`); adversaries per placement with all
/// adversary-adjacent links up.
pub fn generate_scenario(space: &SearchSpace, p: &SearchPoint) -> Result<Scenario, ScenarioError> {
    let a = NodeId(0);
    let b = NodeId(1);
    let mut nodes = vec![
        NodeSpec { id: a, pos: Position::new(0.0, 0.0), role: Role::Correct, clock_offset_ps: 0 },
        NodeSpec {
            id: b,
            pos: Position::new(p.distance_m, 0.0),
            role: Role::Correct,
            clock_offset_ps: 0,
        },
    ];
    let mut names = vec!["a".to_string(), "b".to_string()];
    let mut members = BTreeSet::new();
    let mut adv_node = |nodes: &mut Vec<NodeSpec>, names: &mut Vec<String>, x: f64, tag: &str| {
        let id = NodeId(nodes.len() as u32);
        nodes.push(NodeSpec {
            id,
            pos: Position::new(x, 0.0),
            role: Role::Adversarial,
            clock_offset_ps: 0,
        });
        names.push(tag.to_string());
        members.insert(id);
        id
    };

    let strategy = match p.placement {
        Placement::NearA | Placement::NearB | Placement::Midpoint => {
            let x = match p.placement {
                Placement::NearA => 0.0,
                Placement::NearB => p.distance_m,
                _ => p.distance_m / 2.0,
            };
            adv_node(&mut nodes, &mut names, x, "e");
            match p.strategy {
                StrategyChoice::MinDelay => RelayStrategy::MinDelay,
                StrategyChoice::ResponderOnly => RelayStrategy::OneDirection { src: b, dst: a },
                StrategyChoice::Wormhole => unreachable!("filtered in enumerate_points"),
            }
        }
        Placement::WormholeEndpoints => {
            let e1 = adv_node(&mut nodes, &mut names, 0.0, "e1");
            let e2 = adv_node(&mut nodes, &mut names, p.distance_m, "e2");
            RelayStrategy::Wormhole { entry: e1, exit: e2 }
        }
    };

    // explicit schedule: default down, victims isolated, adversary links up
    let mut links = LinkSchedule::default();
    if space.asymmetric_links && space.protocol.kind.is_challenge_response() {
        links.set_always_up(a, b); // challenge travels directly
    } else {
        links.set_always_down(a, b);
    }
    links.set_always_down(b, a);
    for &m in &members {
        for &v in &[a, b] {
            links.set_always_up(v, m);
            links.set_always_up(m, v);
        }
    }
    let member_list: Vec<NodeId> = members.iter().copied().collect();
    for &m in &member_list {
        for &n in &member_list {
            if m != n {
                links.set_always_down(m, n); // the tunnel is not over-air
            }
        }
    }

    let deliberate = if space.tune_deliberate_delay {
        Some(tuned_delay(space, p)?)
    } else {
        None
    };
    let adversary = AdversaryConfig {
        members,
        delta_r_ps: p.delta_r_ps,
        deliberate_delay_ps: deliberate,
        strategy,
        tunnel_extra_ps: 0,
    };

    let world = WorldConfig {
        nodes,
        channel: ChannelParams { v: space.protocol.v, v_adv: space.v_adv_mps },
        links,
        nlos: NlosMap::default(),
        radio_range_m: f64::INFINITY,
    };
    world.validate()?;
    adversary.validate(&world).map_err(ScenarioError::Semantic)?;

    let sessions = vec![Session { initiator: a, responder: b, t_start_ps: 0 }];
    // generous horizon: a few worst-case flights plus processing
    let horizon = 10 * flight_time_ps(p.distance_m.max(1.0), space.protocol.v)
        + 10 * space.protocol.proc_delay_ps
        + 10 * p.delta_r_ps.abs()
        + deliberate.unwrap_or(0).max(0)
        + 1_000_000;
    Ok(Scenario {
        world,
        protocol: space.protocol,
        adversary: Some(adversary),
        sessions,
        t_end_ps: horizon,
        seed: 0,
        event_cap: DEFAULT_EVENT_CAP,
        names,
    })
}

/// Deliberate relay delay that makes the victim's measured elapsed time
/// equal the honest value for the true separation, defeating location
/// cross-checks. Only exact for the co-located placements.
fn tuned_delay(space: &SearchSpace, p: &SearchPoint) -> Result<Time, ScenarioError> {
    let honest = flight_time_ps(p.distance_m, space.protocol.v);
    let path = match p.placement {
        Placement::NearA | Placement::NearB => flight_time_ps(p.distance_m, space.protocol.v),
        Placement::Midpoint => 2 * flight_time_ps(p.distance_m / 2.0, space.protocol.v),
        Placement::WormholeEndpoints => flight_time_ps(p.distance_m, space.v_adv_mps),
    };
    let extra = match p.placement {
        // relay hop replaces the whole direct flight
        Placement::NearA | Placement::NearB | Placement::Midpoint => honest - path,
        Placement::WormholeEndpoints => honest - path,
    };
    Ok(extra.max(p.delta_r_ps))
}

/// Closed-form accept prediction for the calibrated placements; `None`
/// when no closed form applies to the point.
pub fn closed_form_accept(space: &SearchSpace, p: &SearchPoint) -> Option<bool> {
    let thr = space.protocol.range_threshold_ps()?;
    if space.tune_deliberate_delay {
        return None;
    }
    let hop = flight_time_ps(p.distance_m, space.protocol.v);
    match (space.protocol.kind, p.placement, p.strategy) {
        // beacon a -> co-located relay (zero flight) -> b: elapsed = hold + d/v
        (ProtocolKind::Bt, Placement::NearA, StrategyChoice::MinDelay) => {
            Some(p.delta_r_ps + hop <= thr + space.protocol.eps_t_ps)
        }
        // direct challenge, response relayed by a relay co-located with b:
        // rtt_net = 2 d/v + hold
        (ProtocolKind::Crt, Placement::NearB, StrategyChoice::ResponderOnly)
            if space.asymmetric_links =>
        {
            Some(2 * hop + p.delta_r_ps <= 2 * thr + space.protocol.eps_t_ps)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackWitness {
    pub point: SearchPoint,
    pub violation: Violation,
    pub trace_digest: u64,
    pub seed: u64,
    pub scenario_toml: String,
}

/// FNV-1a over the canonical JSONL encoding of the trace.
pub fn trace_digest(trace: &Trace) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in trace.to_jsonl().bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn point_attack(
    space: &SearchSpace,
    p: &SearchPoint,
) -> Result<Option<(Scenario, Trace, Violation)>, ScenarioError> {
    let scenario = generate_scenario(space, p)?;
    let (trace, _) = run_scenario_with_id(&scenario, "search-point")?;
    let dc = check_distance_correctness(&trace, &scenario.world, &scenario.protocol)?;
    let lc = check_link_correctness(&trace, &scenario.world, &scenario.protocol)?;
    let violation = dc.violations.into_iter().chain(lc.violations).next();
    Ok(violation.map(|v| (scenario, trace, v)))
}

/// Randomized-order grid search. Visits at most `budget` points in a
/// ChaCha8-shuffled order derived from `seed`; returns the first point
/// whose run violates distance or link correctness.
pub fn find_attack(
    space: &SearchSpace,
    budget: usize,
    seed: u64,
) -> Result<Option<AttackWitness>, ScenarioError> {
    space.validate().map_err(ScenarioError::Semantic)?;
    let mut points = enumerate_points(space);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points.shuffle(&mut rng);
    for p in points.iter().take(budget) {
        if let Some((scenario, trace, violation)) = point_attack(space, p)? {
            return Ok(Some(AttackWitness {
                point: *p,
                violation,
                trace_digest: trace_digest(&trace),
                seed,
                scenario_toml: crate::scenario::scenario_to_toml(&scenario),
            }));
        }
    }
    Ok(None)
}

/// Re-run a witness from its embedded scenario and confirm the digest.
pub fn replay_witness(w: &AttackWitness) -> Result<bool, ScenarioError> {
    let scenario = crate::scenario::parse_scenario(&w.scenario_toml)?;
    let (trace, _) = run_scenario_with_id(&scenario, "search-point")?;
    Ok(trace_digest(&trace) == w.trace_digest)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdScan {
    /// Smallest delta_r with no attack anywhere on the grid.
    pub first_safe_delta_r_ps: Time,
    /// Largest delta_r that still admitted an attack.
    pub last_attack_delta_r_ps: Time,
    pub strategy: StrategyChoice,
    pub placement: Placement,
    pub distance_m: f64,
    pub probes: u64,
}

impl ThresholdScan {
    pub fn to_result(&self, space: &SearchSpace, analytic_target_ps: Option<Time>) -> ThresholdResult {
        ThresholdResult {
            protocol: space.protocol.kind.name().to_string(),
            measured_threshold_ps: self.first_safe_delta_r_ps,
            analytic_target_ps,
            strategy_at_boundary: self.strategy.name().to_string(),
            placement_at_boundary: self.placement.name().to_string(),
            probes: self.probes,
        }
    }
}

/// Does any (distance, placement, strategy) cell admit an attack at this
/// relay delay? Returns the first attacking cell.
fn attack_at_delta(
    space: &SearchSpace,
    delta_r_ps: Time,
    probes: &mut u64,
) -> Result<Option<SearchPoint>, ScenarioError> {
    let probe_space = SearchSpace { delta_r_grid_ps: vec![delta_r_ps], ..space.clone() };
    for p in enumerate_points(&probe_space) {
        *probes += 1;
        if point_attack(space, &p)?.is_some() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Bisect delta_r over `[delta_r_min_ps, delta_r_max_ps]` for the smallest
/// value at which no grid cell admits an attack. The endpoints are checked
/// first: the low end must attack and the high end must be safe, and after
/// the bisection the boundary is re-probed on both sides, so a
/// non-monotone predicate is reported instead of silently mis-bracketed.
pub fn min_safe_relay_delay(space: &SearchSpace) -> Result<ThresholdScan, ScenarioError> {
    space.validate().map_err(ScenarioError::Semantic)?;
    let mut probes = 0u64;
    let mut lo = space.delta_r_min_ps;
    let mut hi = space.delta_r_max_ps;
    let lo_attack = attack_at_delta(space, lo, &mut probes)?;
    if lo_attack.is_none() {
        return Err(ScenarioError::semantic(format!(
            "no attack at delta_r = {lo} ps; lower delta_r_min_ps or widen the grid"
        )));
    }
    if attack_at_delta(space, hi, &mut probes)?.is_some() {
        return Err(ScenarioError::semantic(format!(
            "attack still exists at delta_r = {hi} ps; raise delta_r_max_ps"
        )));
    }
    let mut last_point = lo_attack.unwrap();
    // invariant: attack at lo, no attack at hi
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match attack_at_delta(space, mid, &mut probes)? {
            Some(p) => {
                last_point = p;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    // monotonicity spot check at the boundary
    if attack_at_delta(space, lo, &mut probes)?.is_none()
        || attack_at_delta(space, hi, &mut probes)?.is_some()
    {
        return Err(ScenarioError::semantic(format!(
            "attack predicate is not monotone around delta_r = {hi} ps; bisection is invalid for this space"
        )));
    }
    Ok(ThresholdScan {
        first_safe_delta_r_ps: hi,
        last_attack_delta_r_ps: lo,
        strategy: last_point.strategy,
        placement: last_point.placement,
        distance_m: last_point.distance_m,
        probes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub point: SearchPoint,
    pub accepted: bool,
    pub attack: bool,
    pub predicted_accept: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub points: u64,
    pub attacks: u64,
    pub oracle_points: u64,
    pub oracle_mismatches: u64,
    pub records: Vec<ScanRecord>,
}

/// Run every grid point (up to `cap`) and compare each simulated accept
/// decision against the closed-form oracle where one applies.
pub fn exhaustive_scan(space: &SearchSpace, cap: usize) -> Result<ScanSummary, ScenarioError> {
    space.validate().map_err(ScenarioError::Semantic)?;
    let points = enumerate_points(space);
    if points.len() > cap {
        return Err(ScenarioError::semantic(format!(
            "grid has {} points, over the cap of {cap}",
            points.len()
        )));
    }
    let mut records = Vec::with_capacity(points.len());
    let mut attacks = 0u64;
    let mut oracle_points = 0u64;
    let mut oracle_mismatches = 0u64;
    for p in &points {
        let scenario = generate_scenario(space, p)?;
        let (trace, _) = run_scenario_with_id(&scenario, "scan-point")?;
        let accepted = trace.decisions().any(|d| d.verdict == Verdict::Accept);
        let dc = check_distance_correctness(&trace, &scenario.world, &scenario.protocol)?;
        let lc = check_link_correctness(&trace, &scenario.world, &scenario.protocol)?;
        let attack = !dc.violations.is_empty() || !lc.violations.is_empty();
        if attack {
            attacks += 1;
        }
        let predicted_accept = closed_form_accept(space, p);
        if let Some(pred) = predicted_accept {
            oracle_points += 1;
            if pred != accepted {
                oracle_mismatches += 1;
            }
        }
        records.push(ScanRecord { point: *p, accepted, attack, predicted_accept });
    }
    Ok(ScanSummary {
        points: points.len() as u64,
        attacks,
        oracle_points,
        oracle_mismatches,
        records,
    })
}

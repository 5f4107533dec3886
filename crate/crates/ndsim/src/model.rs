//! Static wireless world: node positions, roles, directed link schedules,
//! NLOS delays, channel speeds and per-node clock offsets.
//!
//! Time throughout the crate is a signed 64-bit count of picoseconds.
//! Distances and speeds are doubles; a delay is rounded half-even to ps
//! exactly once, when it is computed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Picoseconds, the global time unit.
pub type Time = i64;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Convert a duration in seconds to picoseconds, rounding half-even.
pub fn seconds_to_ps(seconds: f64) -> Time {
    (seconds * 1e12).round_ties_even() as Time
}

/// One-way flight time over `meters` at speed `v`, in ps (no NLOS term).
pub fn flight_time_ps(meters: f64, v: f64) -> Time {
    seconds_to_ps(meters / v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }
}

/// Euclidean distance in meters.
pub fn distance(a: Position, b: Position) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Correct,
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: NodeId,
    pub pos: Position,
    pub role: Role,
    /// Local clock reads true_time + clock_offset.
    pub clock_offset_ps: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Signal speed of the protocol medium, m/s.
    pub v: f64,
    /// Adversary tunnel speed, m/s. May exceed `v`.
    pub v_adv: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            v: SPEED_OF_LIGHT,
            v_adv: SPEED_OF_LIGHT,
        }
    }
}

/// Half-open up-interval `[start, end)` in ps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: Time,
    pub end: Time,
}

impl Interval {
    pub fn new(start: Time, end: Time) -> Self {
        Interval { start, end }
    }

    /// Whole time axis; used for "always up" links.
    pub const ALWAYS: Interval = Interval {
        start: Time::MIN,
        end: Time::MAX,
    };

    /// True iff the closed query interval `[t0, t1]` lies inside this
    /// half-open up-interval.
    fn covers(&self, t0: Time, t1: Time) -> bool {
        self.start <= t0 && t1 < self.end
    }
}

/// Directed link schedule. A missing pair takes the schedule's default
/// state (constant up or constant down).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LinkSchedule {
    /// Explicit per-pair up-intervals, disjoint and sorted. An empty list
    /// means the pair is always down.
    pub entries: BTreeMap<(NodeId, NodeId), Vec<Interval>>,
    /// State of pairs without an explicit entry.
    pub default_up: bool,
}

impl LinkSchedule {
    pub fn set(&mut self, src: NodeId, dst: NodeId, intervals: Vec<Interval>) {
        self.entries.insert((src, dst), intervals);
    }

    pub fn set_always_up(&mut self, src: NodeId, dst: NodeId) {
        self.set(src, dst, vec![Interval::ALWAYS]);
    }

    pub fn set_always_down(&mut self, src: NodeId, dst: NodeId) {
        self.set(src, dst, vec![]);
    }
}

/// True iff the directed link (src, dst) is up for every instant of
/// the closed interval `[t0, t1]`.
pub fn link_up_over(sched: &LinkSchedule, src: NodeId, dst: NodeId, t0: Time, t1: Time) -> bool {
    debug_assert!(t0 <= t1);
    match sched.entries.get(&(src, dst)) {
        Some(intervals) => intervals.iter().any(|iv| iv.covers(t0, t1)),
        None => sched.default_up,
    }
}

/// Constant extra propagation delay per ordered pair, ps. Missing pair
/// means zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NlosMap {
    pub delays: BTreeMap<(NodeId, NodeId), Time>,
}

impl NlosMap {
    pub fn get(&self, src: NodeId, dst: NodeId) -> Time {
        self.delays.get(&(src, dst)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, src: NodeId, dst: NodeId, delay_ps: Time) {
        self.delays.insert((src, dst), delay_ps);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub nodes: Vec<NodeSpec>,
    pub channel: ChannelParams,
    pub links: LinkSchedule,
    pub nlos: NlosMap,
    pub radio_range_m: f64,
}

impl WorldConfig {
    pub fn node(&self, id: NodeId) -> Result<&NodeSpec, ModelError> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or(ModelError::UnknownNode(id))
    }

    pub fn is_adversarial(&self, id: NodeId) -> bool {
        self.node(id).map(|n| n.role == Role::Adversarial).unwrap_or(false)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.nodes.len() < 2 {
            return Err(ModelError::TooFewNodes(self.nodes.len()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.pos.x.is_finite() || !n.pos.y.is_finite() {
                return Err(ModelError::NonFinitePosition(n.id));
            }
            if self.nodes[i + 1..].iter().any(|m| m.id == n.id) {
                return Err(ModelError::DuplicateNode(n.id));
            }
        }
        if !(self.channel.v > 0.0) {
            return Err(ModelError::BadSpeed("v", self.channel.v));
        }
        if !(self.channel.v_adv > 0.0) {
            return Err(ModelError::BadSpeed("v_adv", self.channel.v_adv));
        }
        for ((s, d), ivs) in &self.links.entries {
            self.node(*s)?;
            self.node(*d)?;
            for w in ivs.windows(2) {
                if w[0].end > w[1].start {
                    return Err(ModelError::OverlappingIntervals(*s, *d));
                }
            }
            if ivs.iter().any(|iv| iv.start >= iv.end) {
                return Err(ModelError::EmptyInterval(*s, *d));
            }
        }
        for ((s, d), delay) in &self.nlos.delays {
            self.node(*s)?;
            self.node(*d)?;
            if *delay < 0 {
                return Err(ModelError::NegativeNlos(*s, *d));
            }
        }
        Ok(())
    }
}

/// One-way propagation delay sender -> receiver in ps: flight time at
/// the channel speed, rounded half-even, plus the pair's NLOS term.
pub fn propagation_delay(a: NodeId, b: NodeId, world: &WorldConfig) -> Result<Time, ModelError> {
    if a == b {
        return Err(ModelError::SelfDelay(a));
    }
    let pa = world.node(a)?.pos;
    let pb = world.node(b)?.pos;
    Ok(flight_time_ps(distance(pa, pb), world.channel.v) + world.nlos.get(a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstacleKind {
    /// Cuts the link entirely.
    Blocking,
    /// Link stays up with the given extra NLOS delay.
    Delaying,
}

/// A finite 2-D wall segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub a: Position,
    pub b: Position,
    pub kind: ObstacleKind,
    pub nlos_delay_ps: Time,
}

fn orient(a: Position, b: Position, c: Position) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Position, b: Position, p: Position) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Proper-or-touching intersection of segments p1-p2 and q1-q2.
pub fn segments_intersect(p1: Position, p2: Position, q1: Position, q2: Position) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Derive a link schedule and NLOS map from geometry: every ordered pair
/// within radio range is always up unless its line of sight crosses a
/// blocking obstacle; a delaying obstacle keeps the link up and charges
/// its NLOS delay. Pairs beyond range are down.
pub fn build_schedule_from_geometry(
    nodes: &[NodeSpec],
    radio_range_m: f64,
    obstacles: &[Obstacle],
) -> Result<(LinkSchedule, NlosMap), ModelError> {
    for ob in obstacles {
        if ob.a.x == ob.b.x && ob.a.y == ob.b.y {
            return Err(ModelError::DegenerateObstacle);
        }
        if ob.kind == ObstacleKind::Delaying && ob.nlos_delay_ps < 0 {
            return Err(ModelError::NegativeObstacleDelay);
        }
    }
    let mut sched = LinkSchedule::default();
    let mut nlos = NlosMap::default();
    for s in nodes {
        for d in nodes {
            if s.id == d.id {
                continue;
            }
            if distance(s.pos, d.pos) > radio_range_m {
                sched.set_always_down(s.id, d.id);
                continue;
            }
            let mut blocked = false;
            let mut extra: Time = 0;
            for ob in obstacles {
                if segments_intersect(s.pos, d.pos, ob.a, ob.b) {
                    match ob.kind {
                        ObstacleKind::Blocking => blocked = true,
                        ObstacleKind::Delaying => extra += ob.nlos_delay_ps,
                    }
                }
            }
            if blocked {
                sched.set_always_down(s.id, d.id);
            } else {
                sched.set_always_up(s.id, d.id);
                if extra > 0 {
                    nlos.set(s.id, d.id, extra);
                }
            }
        }
    }
    Ok((sched, nlos))
}

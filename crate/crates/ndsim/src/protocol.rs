//! The four neighbor-discovery protocols and their decision rules.
//!
//! BT / BTL are one-way beacon protocols (sender timestamps, receiver
//! decides on two synchronized clocks). CRT / CRTL are challenge-response
//! protocols measured on the challenger's single clock, so clock offsets
//! cancel. The *L variants match time-of-flight distance against claimed
//! locations instead of an ND range R.
//!
//! Threshold comparisons are done on integer picoseconds. For the *L
//! variants the expected flight time round(d_loc / v) is compared against
//! the measured elapsed time with a budget of eps_d / v picoseconds; this
//! keeps the zero-tolerance direct path exactly on the boundary instead
//! of losing it to float rounding in the meters domain.

use serde::{Deserialize, Serialize};

use crate::message::{AuthenticatedMessage, MessageBody, Nonce, NonceSource, seal, verify};
use crate::model::{distance, flight_time_ps, NodeId, Position, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolKind {
    #[serde(rename = "BT")]
    Bt,
    #[serde(rename = "BTL")]
    Btl,
    #[serde(rename = "CRT")]
    Crt,
    #[serde(rename = "CRTL")]
    Crtl,
}

impl ProtocolKind {
    /// Beacon protocols need synchronized clocks.
    pub fn is_beacon(self) -> bool {
        matches!(self, ProtocolKind::Bt | ProtocolKind::Btl)
    }

    pub fn is_challenge_response(self) -> bool {
        !self.is_beacon()
    }

    /// Time-plus-location protocols; no ND range involved.
    pub fn uses_location(self) -> bool {
        matches!(self, ProtocolKind::Btl | ProtocolKind::Crtl)
    }

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Bt => "BT",
            ProtocolKind::Btl => "BTL",
            ProtocolKind::Crt => "CRT",
            ProtocolKind::Crtl => "CRTL",
        }
    }
}

impl std::str::FromStr for ProtocolKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "BT" | "bt" => Ok(ProtocolKind::Bt),
            "BTL" | "btl" => Ok(ProtocolKind::Btl),
            "CRT" | "crt" => Ok(ProtocolKind::Crt),
            "CRTL" | "crtl" => Ok(ProtocolKind::Crtl),
            other => Err(format!("unknown protocol {other:?} (expected BT|BTL|CRT|CRTL)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    /// ND range in meters; required by BT/CRT, ignored by the *L variants.
    pub range_m: Option<f64>,
    /// Protocol signal speed, m/s.
    pub v: f64,
    /// Time tolerance, ps.
    pub eps_t_ps: Time,
    /// Distance-match tolerance for *L variants, meters.
    pub eps_d_m: f64,
    /// Declared clock-sync bound for beacon protocols, ps.
    pub eps_sync_ps: Time,
    /// Fixed, publicly known responder turnaround for CR, ps.
    pub proc_delay_ps: Time,
}

pub const DEFAULT_EPS_T_PS: Time = 1_000;
pub const DEFAULT_EPS_D_M: f64 = 0.10;
pub const DEFAULT_EPS_SYNC_PS: Time = 1_000;
pub const DEFAULT_PROC_DELAY_PS: Time = 1_000_000;

impl ProtocolConfig {
    pub fn new(kind: ProtocolKind, range_m: Option<f64>, v: f64) -> Self {
        ProtocolConfig {
            kind,
            range_m,
            v,
            eps_t_ps: DEFAULT_EPS_T_PS,
            eps_d_m: DEFAULT_EPS_D_M,
            eps_sync_ps: DEFAULT_EPS_SYNC_PS,
            proc_delay_ps: DEFAULT_PROC_DELAY_PS,
        }
    }

    /// round(R / v) in ps; the one-way acceptance threshold of T-protocols.
    pub fn range_threshold_ps(&self) -> Option<Time> {
        if self.kind.uses_location() {
            return None;
        }
        self.range_m.map(|r| flight_time_ps(r, self.v))
    }

    /// eps_d expressed as a flight-time budget in ps (real-valued).
    pub fn distance_budget_ps(&self) -> f64 {
        self.eps_d_m / self.v * 1e12
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.v > 0.0) {
            return Err(format!("protocol.v_mps must be > 0, got {}", self.v));
        }
        if !self.kind.uses_location() {
            match self.range_m {
                Some(r) if r > 0.0 => {}
                _ => return Err("protocol.range_m must be > 0".to_string()),
            }
        }
        if self.eps_t_ps < 0 || self.eps_sync_ps < 0 || self.eps_d_m < 0.0 {
            return Err("tolerances must be >= 0".to_string());
        }
        if self.proc_delay_ps < 0 {
            return Err("protocol.proc_delay_ps must be >= 0".to_string());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    ExceedsThreshold,
    Anachronistic,
    LocationMismatch,
    Timeout,
}

/// Diagnostic measurements attached to a decision.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Measured {
    pub elapsed_ps: Option<Time>,
    pub d_tof_m: Option<f64>,
    pub d_loc_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub decider: NodeId,
    pub subject: NodeId,
    pub verdict: Verdict,
    pub t_decided_ps: Time,
    /// Delivery ids (to the decider) the verdict rests on; non-empty for Accept.
    pub evidence: Vec<u64>,
    pub measured: Measured,
    pub reject_reason: Option<RejectReason>,
}

pub struct DecisionOutcome {
    pub verdict: Verdict,
    pub measured: Measured,
    pub reject_reason: Option<RejectReason>,
}

fn accept() -> (Verdict, Option<RejectReason>) {
    (Verdict::Accept, None)
}

fn reject(r: RejectReason) -> (Verdict, Option<RejectReason>) {
    (Verdict::Reject, Some(r))
}

/// BT: one-way beacon, threshold on elapsed time between two clocks.
pub fn bt_decide(t_send_claimed: Time, t_recv_local: Time, cfg: &ProtocolConfig) -> DecisionOutcome {
    let elapsed = t_recv_local - t_send_claimed;
    let threshold = cfg.range_threshold_ps().expect("BT requires range_m");
    let (verdict, reject_reason) = if elapsed < -cfg.eps_t_ps {
        reject(RejectReason::Anachronistic)
    } else if elapsed <= threshold + cfg.eps_t_ps {
        accept()
    } else {
        reject(RejectReason::ExceedsThreshold)
    };
    DecisionOutcome {
        verdict,
        measured: Measured {
            elapsed_ps: Some(elapsed),
            d_tof_m: Some(cfg.v * elapsed as f64 * 1e-12),
            d_loc_m: None,
        },
        reject_reason,
    }
}

/// BTL: beacon with claimed location; ToF distance must match the
/// location-derived distance within eps_d. No ND range.
pub fn btl_decide(
    t_send_claimed: Time,
    loc_claimed: Position,
    t_recv_local: Time,
    loc_self: Position,
    cfg: &ProtocolConfig,
) -> DecisionOutcome {
    let elapsed = t_recv_local - t_send_claimed;
    let d_loc = distance(loc_claimed, loc_self);
    let expected_ps = flight_time_ps(d_loc, cfg.v);
    let budget = cfg.distance_budget_ps();
    let (verdict, reject_reason) = if (elapsed as f64) < -budget {
        reject(RejectReason::Anachronistic)
    } else if ((elapsed - expected_ps) as f64).abs() <= budget {
        accept()
    } else {
        reject(RejectReason::LocationMismatch)
    };
    DecisionOutcome {
        verdict,
        measured: Measured {
            elapsed_ps: Some(elapsed),
            d_tof_m: Some(cfg.v * elapsed as f64 * 1e-12),
            d_loc_m: Some(d_loc),
        },
        reject_reason,
    }
}

/// CRT: round trip on a single clock, net of the known turnaround.
pub fn crt_decide(t_challenge: Time, t_response_recv: Time, cfg: &ProtocolConfig) -> DecisionOutcome {
    let rtt_net = t_response_recv - t_challenge - cfg.proc_delay_ps;
    let threshold = cfg.range_threshold_ps().expect("CRT requires range_m");
    let (verdict, reject_reason) = if rtt_net < -cfg.eps_t_ps {
        reject(RejectReason::Anachronistic)
    } else if rtt_net <= 2 * threshold + cfg.eps_t_ps {
        accept()
    } else {
        reject(RejectReason::ExceedsThreshold)
    };
    DecisionOutcome {
        verdict,
        measured: Measured {
            elapsed_ps: Some(rtt_net),
            d_tof_m: Some(cfg.v * rtt_net as f64 * 1e-12 / 2.0),
            d_loc_m: None,
        },
        reject_reason,
    }
}

/// CRTL: round trip halved gives one-way ToF distance, matched against
/// the responder's claimed location.
pub fn crtl_decide(
    t_challenge: Time,
    t_response_recv: Time,
    loc_claimed: Position,
    loc_self: Position,
    cfg: &ProtocolConfig,
) -> DecisionOutcome {
    let rtt_net = t_response_recv - t_challenge - cfg.proc_delay_ps;
    let d_tof_ps = rtt_net as f64 / 2.0;
    let d_loc = distance(loc_claimed, loc_self);
    let expected_ps = flight_time_ps(d_loc, cfg.v) as f64;
    let budget = cfg.distance_budget_ps();
    let (verdict, reject_reason) = if d_tof_ps < -budget {
        reject(RejectReason::Anachronistic)
    } else if (d_tof_ps - expected_ps).abs() <= budget {
        accept()
    } else {
        reject(RejectReason::LocationMismatch)
    };
    DecisionOutcome {
        verdict,
        measured: Measured {
            elapsed_ps: Some(rtt_net),
            d_tof_m: Some(cfg.v * d_tof_ps * 1e-12),
            d_loc_m: Some(d_loc),
        },
        reject_reason,
    }
}

/// One protocol run between an ordered pair of correct nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    /// Beacon sender (B-protocols) or challenger (CR-protocols).
    pub initiator: NodeId,
    /// Beacon receiver (B) or responder (CR).
    pub responder: NodeId,
    pub t_start_ps: Time,
}

impl Session {
    /// The node that issues the Accept/Reject verdict.
    pub fn decider(&self, kind: ProtocolKind) -> NodeId {
        if kind.is_beacon() {
            self.responder
        } else {
            self.initiator
        }
    }

    /// The node the verdict is about.
    pub fn subject(&self, kind: ProtocolKind) -> NodeId {
        if kind.is_beacon() {
            self.initiator
        } else {
            self.responder
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SessionPhase {
    Idle,
    AwaitingResponse { nonce: Nonce, t_challenge_local: Time },
    Done,
}

#[derive(Debug, Clone)]
pub struct SessionState {
    pub spec: Session,
    pub phase: SessionPhase,
}

/// What a protocol driver asks the engine to do.
#[derive(Debug, Clone)]
pub enum Action {
    /// Broadcast `msg` from `sender` at true time `t_send_ps`.
    Send {
        sender: NodeId,
        msg: AuthenticatedMessage,
        t_send_ps: Time,
    },
    /// Fire a session timer at true time `at_ps`.
    StartTimer { session: usize, at_ps: Time },
    Decide(Decision),
}

/// Context the engine provides to the driver for one node.
pub struct NodeCtx {
    pub id: NodeId,
    pub pos: Position,
    pub clock_offset_ps: Time,
}

/// Start a session at its scheduled time: emit the beacon or challenge.
pub fn drive_session_start(
    idx: usize,
    state: &mut SessionState,
    initiator_ctx: &NodeCtx,
    cfg: &ProtocolConfig,
    nonces: &mut NonceSource,
) -> Vec<Action> {
    let t_start = state.spec.t_start_ps;
    match cfg.kind {
        ProtocolKind::Bt | ProtocolKind::Btl => {
            let body = MessageBody::Beacon {
                sender: initiator_ctx.id,
                t_send_claimed_ps: t_start + initiator_ctx.clock_offset_ps,
                loc_claimed: cfg.kind.uses_location().then_some(initiator_ctx.pos),
            };
            vec![Action::Send {
                sender: initiator_ctx.id,
                msg: seal(initiator_ctx.id, body),
                t_send_ps: t_start,
            }]
        }
        ProtocolKind::Crt | ProtocolKind::Crtl => {
            let nonce = nonces.fresh_nonce(initiator_ctx.id);
            state.phase = SessionPhase::AwaitingResponse {
                nonce,
                t_challenge_local: t_start + initiator_ctx.clock_offset_ps,
            };
            let body = MessageBody::Challenge {
                challenger: initiator_ctx.id,
                nonce,
            };
            let mut actions = vec![Action::Send {
                sender: initiator_ctx.id,
                msg: seal(initiator_ctx.id, body),
                t_send_ps: t_start,
            }];
            // timers need a range; *L sessions are closed at end of run
            // instead. +1 so a response exactly at the accept boundary is
            // processed before the timer (the decide rule is inclusive).
            if let Some(threshold) = cfg.range_threshold_ps() {
                actions.push(Action::StartTimer {
                    session: idx,
                    at_ps: t_start + 2 * threshold + cfg.proc_delay_ps + cfg.eps_t_ps + 1,
                });
            }
            actions
        }
    }
}

/// A verified beacon reached the session's decider.
#[allow(clippy::too_many_arguments)]
pub fn drive_beacon_delivery(
    state: &mut SessionState,
    dv_id: u64,
    t_arrival_ps: Time,
    t_send_claimed_ps: Time,
    loc_claimed: Option<Position>,
    decider_ctx: &NodeCtx,
    cfg: &ProtocolConfig,
) -> Option<Action> {
    if state.phase == SessionPhase::Done {
        return None; // first beacon per session decides
    }
    let t_recv_local = t_arrival_ps + decider_ctx.clock_offset_ps;
    let outcome = match cfg.kind {
        ProtocolKind::Bt => bt_decide(t_send_claimed_ps, t_recv_local, cfg),
        ProtocolKind::Btl => btl_decide(
            t_send_claimed_ps,
            loc_claimed?,
            t_recv_local,
            decider_ctx.pos,
            cfg,
        ),
        _ => return None,
    };
    state.phase = SessionPhase::Done;
    Some(Action::Decide(Decision {
        decider: decider_ctx.id,
        subject: state.spec.initiator,
        verdict: outcome.verdict,
        t_decided_ps: t_arrival_ps,
        evidence: vec![dv_id],
        measured: outcome.measured,
        reject_reason: outcome.reject_reason,
    }))
}

/// A verified response reached the challenger. Returns None when the
/// nonce is stale or unknown (no decision).
pub fn drive_response_delivery(
    state: &mut SessionState,
    dv_id: u64,
    t_arrival_ps: Time,
    echoed_nonce: Nonce,
    loc_claimed: Option<Position>,
    challenger_ctx: &NodeCtx,
    cfg: &ProtocolConfig,
) -> Option<Action> {
    let (nonce, t_challenge_local) = match state.phase {
        SessionPhase::AwaitingResponse { nonce, t_challenge_local } => (nonce, t_challenge_local),
        _ => return None,
    };
    if echoed_nonce != nonce {
        return None;
    }
    let t_recv_local = t_arrival_ps + challenger_ctx.clock_offset_ps;
    let outcome = match cfg.kind {
        ProtocolKind::Crt => crt_decide(t_challenge_local, t_recv_local, cfg),
        ProtocolKind::Crtl => crtl_decide(
            t_challenge_local,
            t_recv_local,
            loc_claimed?,
            challenger_ctx.pos,
            cfg,
        ),
        _ => return None,
    };
    state.phase = SessionPhase::Done;
    Some(Action::Decide(Decision {
        decider: challenger_ctx.id,
        subject: state.spec.responder,
        verdict: outcome.verdict,
        t_decided_ps: t_arrival_ps,
        evidence: vec![dv_id],
        measured: outcome.measured,
        reject_reason: outcome.reject_reason,
    }))
}

/// A verified challenge reached a correct node: always answer, after the
/// fixed turnaround.
pub fn drive_challenge_delivery(
    t_arrival_ps: Time,
    challenger: NodeId,
    nonce: Nonce,
    responder_ctx: &NodeCtx,
    cfg: &ProtocolConfig,
) -> Option<Action> {
    if challenger == responder_ctx.id {
        return None;
    }
    let body = MessageBody::Response {
        responder: responder_ctx.id,
        echoed_nonce: nonce,
        loc_claimed: cfg.kind.uses_location().then_some(responder_ctx.pos),
    };
    Some(Action::Send {
        sender: responder_ctx.id,
        msg: seal(responder_ctx.id, body),
        t_send_ps: t_arrival_ps + cfg.proc_delay_ps,
    })
}

/// Session timer fired (or the run ended) with no decision yet.
pub fn drive_timeout(state: &mut SessionState, at_ps: Time, kind: ProtocolKind) -> Option<Action> {
    if matches!(state.phase, SessionPhase::Done) {
        return None;
    }
    state.phase = SessionPhase::Done;
    Some(Action::Decide(Decision {
        decider: state.spec.decider(kind),
        subject: state.spec.subject(kind),
        verdict: Verdict::Reject,
        t_decided_ps: at_ps,
        evidence: vec![],
        measured: Measured::default(),
        reject_reason: Some(RejectReason::Timeout),
    }))
}

/// Dispatch helper: does `msg` belong to this session's decider path?
pub fn beacon_matches_session(msg: &AuthenticatedMessage, state: &SessionState) -> bool {
    match msg.body {
        MessageBody::Beacon { sender, .. } => {
            sender == state.spec.initiator && verify(msg, state.spec.initiator)
        }
        _ => false,
    }
}

pub fn response_matches_session(msg: &AuthenticatedMessage, state: &SessionState) -> bool {
    match msg.body {
        MessageBody::Response { responder, .. } => {
            responder == state.spec.responder && verify(msg, state.spec.responder)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SPEED_OF_LIGHT;

    fn bt_cfg() -> ProtocolConfig {
        ProtocolConfig::new(ProtocolKind::Bt, Some(100.0), SPEED_OF_LIGHT)
    }

    #[test]
    fn bt_accepts_within_threshold() {
        let cfg = bt_cfg();
        let out = bt_decide(0, 166_782, &cfg);
        assert_eq!(out.verdict, Verdict::Accept);
        assert_eq!(out.measured.elapsed_ps, Some(166_782));
    }

    #[test]
    fn bt_boundary_is_inclusive_at_zero_tolerance() {
        let mut cfg = bt_cfg();
        cfg.eps_t_ps = 0;
        assert_eq!(bt_decide(0, 333_564, &cfg).verdict, Verdict::Accept);
        assert_eq!(bt_decide(0, 333_565, &cfg).verdict, Verdict::Reject);
    }

    #[test]
    fn bt_rejects_clock_skew() {
        let cfg = bt_cfg();
        let out = bt_decide(0, 166_782 + 500_000, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
        assert_eq!(out.reject_reason, Some(RejectReason::ExceedsThreshold));
    }

    #[test]
    fn bt_flags_anachronism() {
        let cfg = bt_cfg();
        let out = bt_decide(1_000_000, 0, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
        assert_eq!(out.reject_reason, Some(RejectReason::Anachronistic));
    }

    fn btl_cfg() -> ProtocolConfig {
        ProtocolConfig::new(ProtocolKind::Btl, None, SPEED_OF_LIGHT)
    }

    #[test]
    fn btl_accepts_matching_distances() {
        let cfg = btl_cfg();
        let a = Position::new(0.0, 0.0);
        let b = Position::new(50.0, 0.0);
        let out = btl_decide(0, a, 166_782, b, &cfg);
        assert_eq!(out.verdict, Verdict::Accept);
    }

    #[test]
    fn btl_rejects_relay_added_delay() {
        // 100 ns of relay delay stretches d_tof to ~80 m against d_loc = 50 m
        let cfg = btl_cfg();
        let a = Position::new(0.0, 0.0);
        let b = Position::new(50.0, 0.0);
        let out = btl_decide(0, a, 166_782 + 100_000, b, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
        let d_tof = out.measured.d_tof_m.unwrap();
        assert!((d_tof - 79.979).abs() < 0.01, "d_tof = {d_tof}");
    }

    #[test]
    fn btl_rejects_nlos_nanosecond() {
        let cfg = btl_cfg();
        let a = Position::new(0.0, 0.0);
        let b = Position::new(50.0, 0.0);
        let out = btl_decide(0, a, 166_782 + 1_000, b, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
        let mismatch = out.measured.d_tof_m.unwrap() - out.measured.d_loc_m.unwrap();
        assert!((mismatch - 0.2998).abs() < 1e-3, "mismatch = {mismatch}");
    }

    #[test]
    fn btl_zero_tolerance_direct_accepts() {
        let mut cfg = btl_cfg();
        cfg.eps_d_m = 0.0;
        let a = Position::new(0.0, 0.0);
        let b = Position::new(50.0, 0.0);
        assert_eq!(btl_decide(0, a, 166_782, b, &cfg).verdict, Verdict::Accept);
        assert_eq!(btl_decide(0, a, 166_783, b, &cfg).verdict, Verdict::Reject);
    }

    fn crt_cfg() -> ProtocolConfig {
        ProtocolConfig::new(ProtocolKind::Crt, Some(100.0), SPEED_OF_LIGHT)
    }

    #[test]
    fn crt_happy_path_accepts() {
        let cfg = crt_cfg();
        // d = 50 m both ways, proc 1 us
        let out = crt_decide(0, 166_782 * 2 + 1_000_000, &cfg);
        assert_eq!(out.verdict, Verdict::Accept);
        assert_eq!(out.measured.elapsed_ps, Some(333_564));
    }

    #[test]
    fn crt_boundary_inclusive() {
        let mut cfg = crt_cfg();
        cfg.eps_t_ps = 0;
        let out = crt_decide(0, 667_128 + 1_000_000, &cfg);
        assert_eq!(out.verdict, Verdict::Accept);
        let out = crt_decide(0, 667_129 + 1_000_000, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
    }

    #[test]
    fn crt_one_direction_relay_slips_under_doubled_threshold() {
        // d = 10 m, challenge direct, response relayed with 500 ns hold
        let cfg = crt_cfg();
        let leg = 33_356;
        let rtt = leg + leg + 500_000 + cfg.proc_delay_ps;
        let out = crt_decide(0, rtt, &cfg);
        assert_eq!(out.verdict, Verdict::Accept);
        assert_eq!(out.measured.elapsed_ps, Some(566_712));
    }

    #[test]
    fn crtl_relayed_legs_rejected() {
        let cfg = ProtocolConfig::new(ProtocolKind::Crtl, None, SPEED_OF_LIGHT);
        let a = Position::new(0.0, 0.0);
        let b = Position::new(50.0, 0.0);
        // direct
        let rtt = 2 * 166_782 + cfg.proc_delay_ps;
        assert_eq!(crtl_decide(0, rtt, b, a, &cfg).verdict, Verdict::Accept);
        // 1 ns per leg
        let rtt = 2 * (166_782 + 1_000) + cfg.proc_delay_ps;
        let out = crtl_decide(0, rtt, b, a, &cfg);
        assert_eq!(out.verdict, Verdict::Reject);
        assert!((out.measured.d_tof_m.unwrap() - 50.2998).abs() < 1e-3);
    }

    #[test]
    fn offsets_cancel_for_cr() {
        let cfg = crt_cfg();
        for offset in [-1_000_000_000i64, 0, 777, 1_000_000_000] {
            let rtt = 2 * 166_782 + cfg.proc_delay_ps;
            let out = crt_decide(offset, offset + rtt, &cfg);
            assert_eq!(out.verdict, Verdict::Accept);
        }
    }

    #[test]
    fn bt_only_offset_difference_matters() {
        let cfg = bt_cfg();
        for k in [-5_000i64, 0, 12_345] {
            let a = bt_decide(100 + k, 100 + k + 166_782, &cfg);
            assert_eq!(a.verdict, Verdict::Accept);
        }
    }
}

//! External relay adversary: adversarial nodes overhear deliveries on
//! their own up-links and retransmit them verbatim, paying at least
//! `delta_r` per relay action. A wormhole pair forwards through a tunnel
//! at `v_adv` instead of over the air.
//!
//! The adversary never originates messages, never modifies bodies, and
//! cannot mint genuine tags or unseen nonces; everything it sends carries
//! a parent delivery.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::message::AuthenticatedMessage;
use crate::model::{distance, flight_time_ps, NodeId, Role, Time, WorldConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RelayStrategy {
    /// Echo every overheard message, including other relays. Can loop;
    /// the engine's event cap is the only brake.
    RelayAll,
    /// Relay each originally-correct transmission once per member, at
    /// exactly arrival + hold.
    MinDelay,
    /// Relay only messages originated by `src`, for `dst`'s benefit.
    OneDirection { src: NodeId, dst: NodeId },
    /// Relay only the listed message kinds ("beacon", "challenge",
    /// "response").
    Selective { kinds: BTreeSet<String> },
    /// `entry` overhears and forwards through the tunnel; `exit`
    /// retransmits over the air. One relay action end to end.
    Wormhole { entry: NodeId, exit: NodeId },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    pub members: BTreeSet<NodeId>,
    /// Minimum per-relay-action delay, ps. Negative models physical-layer
    /// early-commit effects; the engine clamps so nothing precedes the
    /// original send instant.
    pub delta_r_ps: Time,
    /// Delay the adversary actually applies; >= delta_r_ps. Lets a relay
    /// deliberately slow down to make ToF match a claimed location.
    pub deliberate_delay_ps: Option<Time>,
    pub strategy: RelayStrategy,
    /// Extra processing per tunnel hop, ps.
    pub tunnel_extra_ps: Time,
}

impl AdversaryConfig {
    pub fn new(members: impl IntoIterator<Item = NodeId>, delta_r_ps: Time, strategy: RelayStrategy) -> Self {
        AdversaryConfig {
            members: members.into_iter().collect(),
            delta_r_ps,
            deliberate_delay_ps: None,
            strategy,
            tunnel_extra_ps: 0,
        }
    }

    /// The hold actually applied per relay action.
    pub fn hold_ps(&self) -> Time {
        self.deliberate_delay_ps.unwrap_or(self.delta_r_ps).max(self.delta_r_ps)
    }

    pub fn validate(&self, world: &WorldConfig) -> Result<(), String> {
        for m in &self.members {
            match world.node(*m) {
                Ok(n) if n.role == Role::Adversarial => {}
                Ok(_) => return Err(format!("adversary member {m} is not role=adversarial")),
                Err(e) => return Err(e.to_string()),
            }
        }
        if let Some(d) = self.deliberate_delay_ps {
            if d < self.delta_r_ps {
                return Err("adversary.deliberate_delay_ps must be >= delta_r_ps".to_string());
            }
        }
        if self.tunnel_extra_ps < 0 {
            return Err("adversary.tunnel_extra_ps must be >= 0".to_string());
        }
        match &self.strategy {
            RelayStrategy::Wormhole { entry, exit } => {
                if entry == exit {
                    return Err("wormhole entry and exit must differ".to_string());
                }
                if !self.members.contains(entry) || !self.members.contains(exit) {
                    return Err("wormhole endpoints must be adversary members".to_string());
                }
            }
            RelayStrategy::OneDirection { .. }
            | RelayStrategy::Selective { .. }
            | RelayStrategy::MinDelay
            | RelayStrategy::RelayAll => {}
        }
        Ok(())
    }
}

/// Tunnel flight time entry -> exit: distance at v_adv plus per-hop
/// processing.
pub fn tunnel_delay(
    entry: NodeId,
    exit: NodeId,
    world: &WorldConfig,
    cfg: &AdversaryConfig,
) -> Result<Time, EngineError> {
    if entry == exit {
        return Err(EngineError::TunnelSelfLoop);
    }
    let d = distance(world.node(entry)?.pos, world.node(exit)?.pos);
    Ok(flight_time_ps(d, world.channel.v_adv) + cfg.tunnel_extra_ps)
}

/// A retransmission the adversary wants the engine to schedule.
#[derive(Debug, Clone)]
pub struct RelayRequest {
    pub sender: NodeId,
    pub msg: AuthenticatedMessage,
    pub t_send_ps: Time,
    /// The overheard delivery this relays.
    pub parent_dv: u64,
}

/// Mutable relay bookkeeping: which (member, original transmission)
/// pairs have been relayed already.
#[derive(Debug, Default)]
pub struct AdversaryState {
    relayed: BTreeSet<(NodeId, u64)>,
}

/// Context about the overheard delivery the engine hands over.
pub struct Overheard<'a> {
    pub dv_id: u64,
    pub receiver: NodeId,
    pub t_arrival_ps: Time,
    pub msg: &'a AuthenticatedMessage,
    /// Sender of the root (parentless) transmission in the causal chain.
    pub origin_sender: NodeId,
    /// Root transmission id, for relay-once bookkeeping.
    pub origin_tx: u64,
}

/// Decide what to retransmit for one overheard delivery.
pub fn on_delivery(
    state: &mut AdversaryState,
    heard: &Overheard,
    cfg: &AdversaryConfig,
    world: &WorldConfig,
) -> Result<Vec<RelayRequest>, EngineError> {
    debug_assert!(cfg.members.contains(&heard.receiver));
    let hold = cfg.hold_ps();
    let reqs = match &cfg.strategy {
        RelayStrategy::RelayAll => vec![RelayRequest {
            sender: heard.receiver,
            msg: *heard.msg,
            t_send_ps: heard.t_arrival_ps + hold,
            parent_dv: heard.dv_id,
        }],
        RelayStrategy::MinDelay => relay_once(state, heard, heard.receiver, hold, world)?,
        RelayStrategy::OneDirection { src, .. } => {
            if heard.origin_sender == *src {
                relay_once(state, heard, heard.receiver, hold, world)?
            } else {
                vec![]
            }
        }
        RelayStrategy::Selective { kinds } => {
            if kinds.contains(heard.msg.body.kind_name()) {
                relay_once(state, heard, heard.receiver, hold, world)?
            } else {
                vec![]
            }
        }
        RelayStrategy::Wormhole { entry, exit } => {
            if heard.receiver == *entry {
                let tunnel = tunnel_delay(*entry, *exit, world, cfg)?;
                let mut reqs = relay_once(state, heard, *exit, hold, world)?;
                for r in &mut reqs {
                    r.t_send_ps += tunnel;
                }
                reqs
            } else {
                vec![]
            }
        }
    };
    Ok(reqs)
}

fn relay_once(
    state: &mut AdversaryState,
    heard: &Overheard,
    sender: NodeId,
    hold: Time,
    world: &WorldConfig,
) -> Result<Vec<RelayRequest>, EngineError> {
    // pure relays only echo traffic that started at a correct node
    if world.is_adversarial(heard.origin_sender) {
        return Ok(vec![]);
    }
    if !state.relayed.insert((sender, heard.origin_tx)) {
        return Ok(vec![]);
    }
    Ok(vec![RelayRequest {
        sender,
        msg: *heard.msg,
        t_send_ps: heard.t_arrival_ps + hold,
        parent_dv: heard.dv_id,
    }])
}

/// Knowledge set bookkeeping is implicit: the adversary only ever resends
/// messages it has been delivered, so tracking delivered ids suffices.
pub type KnowledgeSet = BTreeMap<u64, ()>;

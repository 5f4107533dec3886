//! Atomic message terms with ideal authentication and fresh nonces.
//!
//! Crypto is a boolean genuineness flag, not bitstrings: the external
//! adversary may replay sealed messages verbatim (the tag survives) and
//! may compose bodies from terms it has observed, but it cannot mint a
//! genuine tag for a correct principal or guess an unseen nonce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{NodeId, Position, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Nonce {
    pub origin: NodeId,
    pub counter: u64,
}

/// Per-node monotone nonce counters. Correct nodes never reuse a counter.
#[derive(Debug, Clone, Default)]
pub struct NonceSource {
    counters: BTreeMap<NodeId, u64>,
}

impl NonceSource {
    pub fn fresh_nonce(&mut self, node: NodeId) -> Nonce {
        let c = self.counters.entry(node).or_insert(0);
        let nonce = Nonce {
            origin: node,
            counter: *c,
        };
        *c += 1;
        nonce
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MessageBody {
    Beacon {
        sender: NodeId,
        t_send_claimed_ps: Time,
        loc_claimed: Option<Position>,
    },
    Challenge {
        challenger: NodeId,
        nonce: Nonce,
    },
    Response {
        responder: NodeId,
        echoed_nonce: Nonce,
        loc_claimed: Option<Position>,
    },
}

impl MessageBody {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MessageBody::Beacon { .. } => "beacon",
            MessageBody::Challenge { .. } => "challenge",
            MessageBody::Response { .. } => "response",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuthTag {
    pub claimed_principal: NodeId,
    pub genuine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuthenticatedMessage {
    pub body: MessageBody,
    pub auth_tag: AuthTag,
}

/// Seal a body as `principal`. Only the engine calls this on behalf of
/// the actual principal, so the tag is genuine.
pub fn seal(principal: NodeId, body: MessageBody) -> AuthenticatedMessage {
    AuthenticatedMessage {
        body,
        auth_tag: AuthTag {
            claimed_principal: principal,
            genuine: true,
        },
    }
}

/// An adversarial fabrication claiming to be `principal`. The tag is
/// marked non-genuine and will never verify.
pub fn forge(principal: NodeId, body: MessageBody) -> AuthenticatedMessage {
    AuthenticatedMessage {
        body,
        auth_tag: AuthTag {
            claimed_principal: principal,
            genuine: false,
        },
    }
}

pub fn verify(msg: &AuthenticatedMessage, expected: NodeId) -> bool {
    msg.auth_tag.claimed_principal == expected && msg.auth_tag.genuine
}

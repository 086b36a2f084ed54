//! Load balancing driven by the per-server load ratio (actual / expected load).
//!
//! Loads are fluid. Internally they are held as integer micro-units so that
//! moving load between servers conserves the total exactly and an action log
//! replays to a bit-identical state.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::ServerState;

use super::SimError;

const UNITS_PER_LOAD: f64 = 1_000_000.0;
/// Largest unit count that converts to f64 without rounding.
const MAX_UNITS: u64 = 1 << 53;

/// A load amount in fixed-point micro-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Load(pub u64);

impl Load {
    pub const ZERO: Load = Load(0);

    /// Rounds to the nearest micro-unit. `None` for negative, non-finite or oversized values.
    pub fn from_f64(value: f64) -> Option<Load> {
        if !(value.is_finite() && value >= 0.0) {
            return None;
        }
        let units = (value * UNITS_PER_LOAD).round();
        (units <= MAX_UNITS as f64).then_some(Load(units as u64))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / UNITS_PER_LOAD
    }

    pub fn units(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Load {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Customer demand for a service, placed on the first server that hosts it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceDemand {
    pub service_id: String,
    pub load: f64,
}

impl ServiceDemand {
    pub fn new(service_id: impl Into<String>, load: f64) -> Self {
        ServiceDemand { service_id: service_id.into(), load }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    ReplicateService,
    DivertLoad,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::ReplicateService => "ReplicateService",
            ActionKind::DivertLoad => "DivertLoad",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BalanceAction {
    pub kind: ActionKind,
    pub service_id: String,
    pub from_server: String,
    pub to_server: String,
    /// Zero for replications.
    pub diverted_amount: Load,
}

/// Capacity and per-service load of one server.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerLoad {
    pub resource_id: String,
    pub capacity: Load,
    /// Hosted services and the share of load each carries here.
    pub services: BTreeMap<String, Load>,
}

impl ServerLoad {
    pub fn total(&self) -> Load {
        Load(self.services.values().map(|l| l.0).sum())
    }

    pub fn delta_lb(&self) -> f64 {
        self.total().0 as f64 / self.capacity.0 as f64
    }

    fn overloaded(&self) -> bool {
        self.total() > self.capacity
    }

    fn to_state(&self) -> ServerState {
        ServerState {
            resource_id: self.resource_id.clone(),
            expected_load_capacity: self.capacity.to_f64(),
            hosted_services: self.services.keys().cloned().collect(),
            assigned_load: self.total().to_f64(),
        }
    }
}

/// Exact load placement across a server pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceState {
    pub servers: Vec<ServerLoad>,
}

impl BalanceState {
    /// Builds the starting placement. A server's existing load is split evenly
    /// over the services it hosts; each demand lands on the first server hosting
    /// its service.
    pub fn new(servers: &[ServerState], demands: &[ServiceDemand]) -> Result<Self, SimError> {
        if servers.is_empty() {
            return Err(SimError::NoServers);
        }
        let mut out: Vec<ServerLoad> = Vec::with_capacity(servers.len());
        for s in servers {
            if out.iter().any(|o| o.resource_id == s.resource_id) {
                return Err(SimError::DuplicateResource(s.resource_id.clone()));
            }
            let capacity = Load::from_f64(s.expected_load_capacity)
                .filter(|c| c.0 > 0)
                .ok_or_else(|| SimError::InvalidServer {
                    resource_id: s.resource_id.clone(),
                    reason: "expected_load_capacity must be positive".into(),
                })?;
            let assigned = Load::from_f64(s.assigned_load).ok_or_else(|| SimError::InvalidServer {
                resource_id: s.resource_id.clone(),
                reason: "assigned_load must be non-negative".into(),
            })?;
            if assigned.0 > 0 && s.hosted_services.is_empty() {
                return Err(SimError::UnattributedLoad(s.resource_id.clone()));
            }
            let mut services = BTreeMap::new();
            let k = s.hosted_services.len() as u64;
            for (i, id) in s.hosted_services.iter().enumerate() {
                // Remainder units go to the lexically first services.
                let extra = u64::from((i as u64) < assigned.0 % k.max(1));
                services.insert(id.clone(), Load(assigned.0 / k.max(1) + extra));
            }
            out.push(ServerLoad { resource_id: s.resource_id.clone(), capacity, services });
        }
        for d in demands {
            let load = Load::from_f64(d.load)
                .ok_or_else(|| SimError::InvalidDemand(d.service_id.clone()))?;
            let host = out
                .iter_mut()
                .find(|s| s.services.contains_key(&d.service_id))
                .ok_or_else(|| SimError::UnhostedService(d.service_id.clone()))?;
            let slot = host.services.get_mut(&d.service_id).expect("host found by key");
            slot.0 += load.0;
        }
        Ok(BalanceState { servers: out })
    }

    pub fn total(&self) -> u128 {
        self.servers.iter().map(|s| s.total().0 as u128).sum()
    }

    pub fn total_capacity(&self) -> u128 {
        self.servers.iter().map(|s| s.capacity.0 as u128).sum()
    }

    fn index_of(&self, id: &str) -> Option<usize> {
        self.servers.iter().position(|s| s.resource_id == id)
    }

    /// Applies one logged action.
    pub fn apply(&mut self, action: &BalanceAction) -> Result<(), SimError> {
        let bad = |reason: &str| SimError::BadAction { action: action.clone(), reason: reason.into() };
        let from = self.index_of(&action.from_server).ok_or_else(|| bad("unknown source server"))?;
        let to = self.index_of(&action.to_server).ok_or_else(|| bad("unknown target server"))?;
        if from == to {
            return Err(bad("source and target are the same server"));
        }
        if !self.servers[from].services.contains_key(&action.service_id) {
            return Err(bad("source does not host the service"));
        }
        match action.kind {
            ActionKind::ReplicateService => {
                if self.servers[to].services.contains_key(&action.service_id) {
                    return Err(bad("target already hosts the service"));
                }
                self.servers[to].services.insert(action.service_id.clone(), Load::ZERO);
            }
            ActionKind::DivertLoad => {
                let amount = action.diverted_amount.0;
                let src = self.servers[from].services.get_mut(&action.service_id).expect("checked");
                if src.0 < amount {
                    return Err(bad("diverts more than the source carries"));
                }
                src.0 -= amount;
                let dst = self.servers[to]
                    .services
                    .get_mut(&action.service_id)
                    .ok_or_else(|| bad("target does not host the service"))?;
                dst.0 += amount;
            }
        }
        Ok(())
    }
}

/// Compares `a.total / a.capacity` with `b.total / b.capacity` exactly.
fn cmp_ratio(a: &ServerLoad, b: &ServerLoad) -> std::cmp::Ordering {
    let lhs = a.total().0 as u128 * b.capacity.0 as u128;
    let rhs = b.total().0 as u128 * a.capacity.0 as u128;
    lhs.cmp(&rhs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceOutcome {
    pub initial: BalanceState,
    pub final_state: BalanceState,
    pub actions: Vec<BalanceAction>,
    pub final_servers: Vec<ServerState>,
    pub per_server_delta_lb: Vec<(String, f64)>,
    /// Every server ends at or below its expected load.
    pub feasible: bool,
}

/// Greedy replicate-and-divert balancing.
///
/// While some server is above its expected load, the most loaded one (by
/// ratio) hands its largest service to the least loaded server that still
/// has headroom: the service is replicated there if needed, then load is
/// diverted so the pair's ratios are equal. A transfer never pushes the
/// receiver past its own expected load, so servers at or below 1 stay there.
pub fn balance(servers: &[ServerState], demands: &[ServiceDemand]) -> Result<BalanceOutcome, SimError> {
    let initial = BalanceState::new(servers, demands)?;
    let mut state = initial.clone();
    let mut actions = Vec::new();

    loop {
        let Some(src) = (0..state.servers.len())
            .filter(|&i| state.servers[i].overloaded())
            .reduce(|best, i| {
                if cmp_ratio(&state.servers[i], &state.servers[best]).is_gt() { i } else { best }
            })
        else {
            break;
        };
        let Some(dst) = (0..state.servers.len())
            .filter(|&i| i != src && state.servers[i].total() < state.servers[i].capacity)
            .reduce(|best, i| {
                if cmp_ratio(&state.servers[i], &state.servers[best]).is_lt() { i } else { best }
            })
        else {
            break;
        };

        let (service_id, service_load) = state.servers[src]
            .services
            .iter()
            .fold(None::<(&String, Load)>, |best, (id, &l)| match best {
                Some((_, bl)) if bl >= l => best,
                _ => Some((id, l)),
            })
            .map(|(id, l)| (id.clone(), l))
            .expect("an overloaded server carries load, so it hosts a service");

        let (s, r) = (&state.servers[src], &state.servers[dst]);
        let (ls, cs) = (s.total().0 as u128, s.capacity.0 as u128);
        let (lr, cr) = (r.total().0 as u128, r.capacity.0 as u128);

        // Equalizing amount x solves (ls - x) / cs = (lr + x) / cr, rounded to the nearest unit.
        let num = ls * cr - lr * cs;
        let den = cs + cr;
        let equalize = (num + den / 2) / den;
        let needed = ls - cs;
        let limit = (service_load.0 as u128).min(cr - lr);
        let amount = if needed > limit { limit } else { equalize.clamp(needed, limit) };

        let from_server = s.resource_id.clone();
        let to_server = r.resource_id.clone();
        if !r.services.contains_key(&service_id) {
            let replicate = BalanceAction {
                kind: ActionKind::ReplicateService,
                service_id: service_id.clone(),
                from_server: from_server.clone(),
                to_server: to_server.clone(),
                diverted_amount: Load::ZERO,
            };
            state.apply(&replicate)?;
            actions.push(replicate);
        }
        let divert = BalanceAction {
            kind: ActionKind::DivertLoad,
            service_id,
            from_server,
            to_server,
            diverted_amount: Load(amount as u64),
        };
        state.apply(&divert)?;
        actions.push(divert);
    }

    let feasible = state.servers.iter().all(|s| !s.overloaded());
    let final_servers = state.servers.iter().map(ServerLoad::to_state).collect();
    let per_server_delta_lb =
        state.servers.iter().map(|s| (s.resource_id.clone(), s.delta_lb())).collect();
    Ok(BalanceOutcome { initial, final_state: state, actions, final_servers, per_server_delta_lb, feasible })
}

/// Replays an action log from a starting placement.
pub fn replay(initial: &BalanceState, actions: &[BalanceAction]) -> Result<BalanceState, SimError> {
    let mut state = initial.clone();
    for a in actions {
        state.apply(a)?;
    }
    Ok(state)
}

//! The growing-window semi-decider for non-extendibility.

use serde::Serialize;

use super::sft::{sft_emptiness, SftVerdict, WordSet};
use super::window::build_window_polytope;
use crate::error::{Error, Result};
use crate::lattice::{translates_inside, Domain, LatticePoint};
use crate::lp::FeasibilityResult;
use crate::measure::{entropy_chain_refute, is_locally_stationary, ChainVerdict, Measure, StationarityCheck};
use crate::Caps;

/// Windows tried in order; each must strictly contain the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowSchedule {
    /// `B(1) ⊂ B(2) ⊂ … ⊂ B(max_side)` with `B(n) = [0..n-1]^D`.
    Boxes { max_side: usize },
    Explicit(Vec<Domain>),
}

impl WindowSchedule {
    pub fn windows(&self, dim: usize) -> Result<Vec<Domain>> {
        match self {
            WindowSchedule::Boxes { max_side } => Ok((1..=*max_side as i64).map(|n| Domain::cube(dim, n)).collect()),
            WindowSchedule::Explicit(ws) => {
                for w in ws {
                    if w.dim() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, got: w.dim() });
                    }
                }
                for pair in ws.windows(2) {
                    if !(pair[0].is_subset_of(&pair[1]) && pair[0].len() < pair[1].len()) {
                        return Err(Error::Invalid(format!("schedule is not strictly nested at {}", pair[1])));
                    }
                }
                Ok(ws.clone())
            }
        }
    }

    fn horizon(&self, dim: usize) -> Result<usize> {
        Ok(self
            .windows(dim)?
            .iter()
            .filter_map(|w| w.side_lengths())
            .flatten()
            .max()
            .unwrap_or(1)
            .max(1) as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EntropyChain,
    Tiling,
    Lp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Refuted,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    /// Window whose polytope is empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Domain>,
    /// Hash of that window's constraint system, confirmed infeasible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_window: Option<Domain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<LatticePoint>>,
    pub notes: Vec<String>,
    /// The simplex is deterministic; the seed is recorded for replay tooling.
    pub seed: u64,
}

impl RefutationReport {
    fn unknown(largest_window: Option<Domain>, notes: Vec<String>) -> Self {
        RefutationReport {
            verdict: Verdict::Unknown,
            method: None,
            window: None,
            system_hash: None,
            largest_window,
            chain: None,
            notes,
            seed: 0,
        }
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

enum WindowLp {
    Infeasible(String),
    Feasible,
    Stopped(String),
}

fn window_lp(mu_u: &Measure, w: &Domain, caps: &Caps) -> Result<WindowLp> {
    let poly = match build_window_polytope(mu_u, w, caps) {
        Ok(p) => p,
        Err(e @ (Error::CapExceeded { .. } | Error::SearchAborted(_))) => {
            return Ok(WindowLp::Stopped(format!("window {w}: {e}")))
        }
        Err(e) => return Err(e),
    };
    Ok(match poly.solve(caps.pivot_limit) {
        FeasibilityResult::Infeasible => WindowLp::Infeasible(poly.system.hash()),
        FeasibilityResult::Feasible(_) => WindowLp::Feasible,
        FeasibilityResult::Aborted { pivots } => {
            WindowLp::Stopped(format!("window {w}: simplex stopped after {pivots} pivots"))
        }
    })
}

/// Entropy chain, then SFT emptiness of the support, then the window LPs in order.
/// `Refuted` proves non-extendibility; `Unknown` proves nothing.
pub fn refute_nonextendible(mu_u: &Measure, schedule: &WindowSchedule, caps: &Caps) -> Result<RefutationReport> {
    if let StationarityCheck::Fail { subdomain, shift, .. } = is_locally_stationary(mu_u) {
        return Err(Error::NotStationary(format!("{subdomain} vs shift by {shift}")));
    }
    let dim = mu_u.domain().dim();
    let windows = schedule.windows(dim)?;
    let mut notes = Vec::new();
    let confirm = |w: &Domain, method: Method, chain: Option<Vec<LatticePoint>>, mut notes: Vec<String>| {
        let hash = match window_lp(mu_u, w, caps)? {
            WindowLp::Infeasible(h) => Some(h),
            WindowLp::Feasible => {
                return Err(Error::Internal(format!("{method:?} refutation at {w} but its LP is feasible")))
            }
            WindowLp::Stopped(why) => {
                notes.push(format!("LP confirmation skipped: {why}"));
                None
            }
        };
        Ok(RefutationReport {
            verdict: Verdict::Refuted,
            method: Some(method),
            window: Some(w.clone()),
            system_hash: hash,
            largest_window: None,
            chain,
            notes,
            seed: 0,
        })
    };

    if let ChainVerdict::Refuted { window, chain, .. } = entropy_chain_refute(mu_u, schedule.horizon(dim)?)? {
        return confirm(&window, Method::EntropyChain, Some(chain), notes);
    }

    let support = WordSet::support_of(mu_u);
    match sft_emptiness(&support, &windows, caps.node_limit)? {
        SftVerdict::Empty { window } => return confirm(&window, Method::Tiling, None, notes),
        SftVerdict::Unknown { reason: Some(r), .. } => notes.push(format!("tiling check: {r}")),
        SftVerdict::Unknown { .. } => {}
    }

    let mut largest = None;
    for w in &windows {
        if translates_inside(mu_u.domain(), w).is_empty() {
            continue;
        }
        match window_lp(mu_u, w, caps)? {
            WindowLp::Infeasible(hash) => {
                return Ok(RefutationReport {
                    verdict: Verdict::Refuted,
                    method: Some(Method::Lp),
                    window: Some(w.clone()),
                    system_hash: Some(hash),
                    largest_window: largest,
                    chain: None,
                    notes,
                    seed: 0,
                })
            }
            WindowLp::Feasible => largest = Some(w.clone()),
            WindowLp::Stopped(why) => {
                notes.push(why);
                break;
            }
        }
    }
    Ok(RefutationReport::unknown(largest, notes))
}

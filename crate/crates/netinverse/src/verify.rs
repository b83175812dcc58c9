//! Invariant suites behind the `verify` subcommand: each suite samples
//! seeded random conductances and checks an exact property of the pipeline.

use netinverse_core::electrical::{
    forward_point, invert_point, invert_response, response_matrix, Network,
};
use netinverse_core::error::Error;
use netinverse_core::graph::DiskGraph;
use netinverse_core::grassmann::{omega_check, plucker};
use netinverse_core::numeric::Rat;
use netinverse_core::orthogonal::{
    electrical_left_twist, pfaffian_check, psi_g, q_g, skew_pair_from_cartan,
};
use num_traits::Zero;

use crate::sampler::RatSampler;

pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn run_trials<F>(
    name: &'static str,
    g: &DiskGraph,
    trials: usize,
    seed: u64,
    mut check: F,
) -> SuiteReport
where
    F: FnMut(&Network) -> Result<(), String>,
{
    let mut sampler = RatSampler::new(seed);
    for t in 0..trials {
        let cond = sampler.conductances(g);
        let network = match Network::new(g.clone(), cond) {
            Ok(n) => n,
            Err(e) => {
                return SuiteReport {
                    name,
                    passed: false,
                    detail: format!("trial {t}: {e}"),
                }
            }
        };
        if let Err(msg) = check(&network) {
            return SuiteReport { name, passed: false, detail: format!("trial {t}: {msg}") };
        }
    }
    SuiteReport { name, passed: true, detail: format!("{trials} trials") }
}

fn lib_err(e: Error) -> String {
    format!("{e}")
}

/// Runs every suite; all randomness comes from `seed`.
pub fn run_suites(g: &DiskGraph, trials: usize, seed: u64) -> Vec<SuiteReport> {
    let mut out = Vec::new();

    out.push(run_trials("forward-point invariants", g, trials, seed, |net| {
        let x = forward_point(net).map_err(lib_err)?;
        if !omega_check(&x) {
            return Err("twisted pairing does not vanish".into());
        }
        let p = plucker(&x).map_err(lib_err)?;
        if !p.is_positive() {
            return Err("a Plücker coordinate is not positive".into());
        }
        Ok(())
    }));

    out.push(run_trials("forward-inverse round trip", g, trials, seed, |net| {
        let x = forward_point(net).map_err(lib_err)?;
        let rec = invert_point(&x, &net.graph).map_err(lib_err)?;
        if rec != net.cond {
            return Err("recovered conductances differ".into());
        }
        Ok(())
    }));

    out.push(run_trials("response-matrix invariants", g, trials, seed, |net| {
        let l = response_matrix(net).map_err(lib_err)?;
        let n = l.n();
        for i in 1..=n {
            for j in 1..=n {
                if i != j && *l.off(i, j) <= Rat::zero() {
                    return Err(format!("L_{{{i}{j}}} is not positive"));
                }
            }
        }
        if n <= 3 {
            let rec = invert_response(&l, &net.graph).map_err(lib_err)?;
            if rec != net.cond {
                return Err("inversion from the response differs".into());
            }
        }
        Ok(())
    }));

    out.push(run_trials("cartan relations and pfaffians", g, trials, seed, |net| {
        let x = forward_point(net).map_err(lib_err)?;
        // relations are re-checked during extraction
        let sigma = electrical_left_twist(&x, &net.graph).map_err(lib_err)?;
        let pair = skew_pair_from_cartan(&sigma);
        pfaffian_check(&sigma, &pair).map_err(lib_err)?;
        let rec = q_g(&psi_g(&sigma, &net.graph).map_err(lib_err)?, &net.graph)
            .map_err(lib_err)?;
        if rec != net.cond {
            return Err("cross-ratio readout differs".into());
        }
        Ok(())
    }));

    out
}

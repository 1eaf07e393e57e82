use super::{Objective, OptimizationResult, RunConfig, TracePoint};
use crate::domain::{Channel, Coloring};
use crate::error::{Error, Result};
use crate::timing::Stopwatch;

pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1_000_000;

/// Exhaustive search over all `k^n` colorings.
///
/// Colorings are visited in lexicographic order of the assignment, and only
/// strict improvements replace the incumbent, so among tied optima the
/// lexicographically smallest is returned.
pub fn brute_force(
    ap_ids: &[u32],
    k: usize,
    obj: &dyn Objective,
    cap: u64,
) -> Result<OptimizationResult> {
    if ap_ids.is_empty() {
        return Err(Error::Validation("no access points to color".into()));
    }
    if k == 0 {
        return Err(Error::Validation(
            "spectrum must hold at least one channel".into(),
        ));
    }
    let size = (k as f64).powi(ap_ids.len() as i32);
    if size > cap as f64 {
        return Err(Error::SearchSpaceTooLarge {
            colorings: size,
            cap,
        });
    }

    let watch = Stopwatch::start();
    let direction = obj.direction();
    let n = ap_ids.len();
    let mut current: Vec<Channel> = vec![1; n];
    let mut best = current.clone();
    let mut best_score = obj.evaluate(&current);
    let mut evaluations = 1u64;
    let mut trace = vec![TracePoint {
        iteration: 0,
        current: best_score,
        best: best_score,
    }];

    loop {
        // odometer increment, last AP fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                let timing = watch.stop();
                return Ok(OptimizationResult {
                    config: RunConfig::BruteForce { cap },
                    objective: obj.description(),
                    direction,
                    best_coloring: Coloring::from_assignment(ap_ids, &best),
                    best_score,
                    evaluations,
                    rejected: 0,
                    score_trace: trace,
                    wall_clock_s: timing.wall_clock_s,
                    cpu_time_s: timing.cpu_time_s,
                });
            }
            pos -= 1;
            if (current[pos] as usize) < k {
                current[pos] += 1;
                break;
            }
            current[pos] = 1;
        }
        let score = obj.evaluate(&current);
        if direction.improves(score, best_score) {
            best.copy_from_slice(&current);
            best_score = score;
            trace.push(TracePoint {
                iteration: evaluations,
                current: score,
                best: score,
            });
        }
        evaluations += 1;
    }
}

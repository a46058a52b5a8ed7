#pragma once

#include <vector>

#include "lamina/config.hpp"
#include "lamina/report.hpp"

namespace lamina {

// Carrying of leaf segments and eigenray prefixes by each subgroup, over
// n <= n_max. Throws HypothesisViolation unless the transition matrices are
// primitive.
Report run_filling(const ExperimentConfig& config);

// Distortion profiles of H and each subgroup inside one ball of G, the
// witness sequence t^n a t^-n, and geodesic-realization depths.
Report run_quasiconvexity(const ExperimentConfig& config);

// Finite-index hits of each subgroup inside conjugates of the invariant
// factors. Throws HypothesisViolation if a factor is not invariant or its
// restriction is not aperiodic.
Report run_factor(const ExperimentConfig& config);

// Runs config.experiments in order; throws Error("nothing to run") when empty.
std::vector<Report> run_experiments(const ExperimentConfig& config);

// Re-checks a counter-sample against the core modules.
bool replay(const CounterSample& sample, const ExperimentConfig& config);

}  // namespace lamina

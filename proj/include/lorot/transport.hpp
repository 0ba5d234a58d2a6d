#pragma once

#include <cstdint>
#include <vector>

#include "lorot/sampling.hpp"

namespace lorot {

struct DiscreteMeasure {
    std::vector<int> support;   // indices into a CausalSample
    std::vector<double> masses; // nonnegative, same length as support

    double total() const;
    void validate(const CausalSample& sample) const;
    static DiscreteMeasure uniform_on(const std::vector<int>& indices);
};

struct PlanEntry {
    int src = 0; // sample index
    int dst = 0; // sample index
    double mass = 0.0;
};

struct TransportPlan {
    std::vector<PlanEntry> entries;
    double p = 1.0;
    double objective = 0.0; // sum of mass * tau^p over the plan
    double value = 0.0;     // objective^(1/p); -inf when infeasible
    bool feasible = false;
    bool timelike = false; // every entry has tau > 0
};

// Maximizes sum(mass * tau^p) over couplings supported on causally related
// pairs. Returns an infeasible plan with value -inf when the marginals cannot
// be coupled causally.
TransportPlan solve_lp_optimal(const CausalSample& sample, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double p);

// Exhaustive permutation search; requires equal uniform masses and at most
// 8x8 supports.
TransportPlan brute_force_optimal(const CausalSample& sample, const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu, double p);

struct MonotonicityReport {
    bool ok = true;
    double worst_slack = 0.0;       // min over audited cycles of lhs - rhs
    std::vector<int> witness;       // entry indices of the worst cycle
    long long cycles_checked = 0;
    bool exhaustive = false;
};

// Audits the cyclic inequality sum c(x_i, y_i) >= sum c(x_{i+1}, y_i) with
// c = tau^p on causal pairs and -inf otherwise, over cycles of length 2 to
// max_cycle. Enumerates all cycles when that count is moderate, otherwise
// samples 100000 random cycles from (seed).
MonotonicityReport check_cyclical_monotonicity(const CausalSample& sample,
                                               const TransportPlan& plan, int max_cycle = 3,
                                               uint64_t seed = 1);

struct Displacement {
    std::vector<Event> events;
    std::vector<double> masses;
};

// Pushes the plan along constant-speed geodesics to time t in [0, 1].
// Interior times require every plan entry to be chronological.
Displacement displacement(const CausalSample& sample, const TransportPlan& plan, double t);

} // namespace lorot

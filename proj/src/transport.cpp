#include "lorot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lorot/rng.hpp"

namespace lorot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double plan_cost(const CausalSample& sample, double p, int src, int dst, bool& causal) {
    causal = sample.causal_at(src, dst);
    if (!causal) return -kInf;
    const double t = sample.tau_at(src, dst);
    return std::pow(t, p);
}

void finalize_plan(const CausalSample& sample, TransportPlan& plan) {
    std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& a, const PlanEntry& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    plan.objective = 0.0;
    plan.timelike = !plan.entries.empty();
    for (const auto& e : plan.entries) {
        const double t = sample.tau_at(e.src, e.dst);
        plan.objective += e.mass * std::pow(t, plan.p);
        if (!(t > 0.0)) plan.timelike = false;
    }
    plan.value = plan.objective <= 0.0 ? 0.0 : std::pow(plan.objective, 1.0 / plan.p);
    plan.feasible = true;
}

} // namespace

double DiscreteMeasure::total() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
}

void DiscreteMeasure::validate(const CausalSample& sample) const {
    if (support.size() != masses.size())
        throw std::invalid_argument("measure: support and masses must have equal length");
    if (support.empty()) throw std::invalid_argument("measure: empty support");
    for (int idx : support)
        if (idx < 0 || idx >= sample.n())
            throw std::invalid_argument("measure: support index outside the sample");
    for (double m : masses)
        if (!(m >= 0.0)) throw std::invalid_argument("measure: masses must be nonnegative");
    if (!(total() > 0.0)) throw std::invalid_argument("measure: zero total mass");
}

DiscreteMeasure DiscreteMeasure::uniform_on(const std::vector<int>& indices) {
    DiscreteMeasure mu;
    mu.support = indices;
    mu.masses.assign(indices.size(), 1.0 / static_cast<double>(indices.size()));
    return mu;
}

TransportPlan solve_lp_optimal(const CausalSample& sample, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double p) {
    mu.validate(sample);
    nu.validate(sample);
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("solve_lp_optimal: need p in (0, 1]");
    if (std::fabs(mu.total() - nu.total()) > 1e-9 * std::max(mu.total(), nu.total()))
        throw std::invalid_argument("solve_lp_optimal: marginal totals differ");

    const int m = static_cast<int>(mu.support.size());
    const int n = static_cast<int>(nu.support.size());
    const int nodes = m + n;

    // Minimize sum(flow * cost) with cost = -tau^p on causal arcs.
    std::vector<double> cost(static_cast<std::size_t>(m) * n, kInf);
    std::vector<uint8_t> allowed(static_cast<std::size_t>(m) * n, 0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            bool causal = false;
            const double c = plan_cost(sample, p, mu.support[i], nu.support[j], causal);
            if (causal) {
                cost[static_cast<std::size_t>(i) * n + j] = -c;
                allowed[static_cast<std::size_t>(i) * n + j] = 1;
            }
        }
    }

    std::vector<double> a = mu.masses;
    std::vector<double> b = nu.masses;
    std::vector<double> flow(static_cast<std::size_t>(m) * n, 0.0);
    std::vector<double> phi(nodes, 0.0);
    for (int j = 0; j < n; ++j) {
        double best = kInf;
        for (int i = 0; i < m; ++i)
            if (allowed[static_cast<std::size_t>(i) * n + j])
                best = std::min(best, cost[static_cast<std::size_t>(i) * n + j]);
        phi[m + j] = best;
    }

    const double total = mu.total();
    const double tol = 1e-13 * std::max(1.0, total);

    const long long max_rounds = 4LL * (m + n) + 2LL * m * n + 16;
    long long rounds = 0;
    double remaining = total;

    while (remaining > 1e-12 * std::max(1.0, total)) {
        if (++rounds > max_rounds)
            throw std::runtime_error("solve_lp_optimal: augmentation cap exceeded");

        std::vector<double> dist(nodes, kInf);
        std::vector<int> par(nodes, -1);
        std::vector<uint8_t> done(nodes, 0);
        for (int i = 0; i < m; ++i)
            if (a[i] > tol) dist[i] = 0.0;

        while (true) {
            int u = -1;
            for (int v = 0; v < nodes; ++v)
                if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
            if (u < 0) break;
            done[u] = 1;
            if (u < m) {
                for (int j = 0; j < n; ++j) {
                    const std::size_t e = static_cast<std::size_t>(u) * n + j;
                    if (!allowed[e] || done[m + j]) continue;
                    if (phi[m + j] == kInf) phi[m + j] = cost[e] + phi[u];
                    const double rc = cost[e] + phi[u] - phi[m + j];
                    const double nd = dist[u] + std::max(0.0, rc);
                    if (nd < dist[m + j] - 1e-18) {
                        dist[m + j] = nd;
                        par[m + j] = u;
                    }
                }
            } else {
                const int j = u - m;
                for (int i = 0; i < m; ++i) {
                    const std::size_t e = static_cast<std::size_t>(i) * n + j;
                    if (done[i] || flow[e] <= tol) continue;
                    const double rc = -cost[e] + phi[u] - phi[i];
                    const double nd = dist[u] + std::max(0.0, rc);
                    if (nd < dist[i] - 1e-18) {
                        dist[i] = nd;
                        par[i] = u;
                    }
                }
            }
        }

        int target = -1;
        for (int j = 0; j < n; ++j)
            if (b[j] > tol && dist[m + j] < kInf && (target < 0 || dist[m + j] < dist[m + target]))
                target = j;
        if (target < 0) break;

        const double d_star = dist[m + target];
        for (int v = 0; v < nodes; ++v)
            if (dist[v] < kInf) phi[v] += std::min(dist[v], d_star);

        double delta = b[target];
        for (int v = m + target; par[v] >= 0; v = par[v]) {
            const int u = par[v];
            if (v >= m) {
                // forward arc u -> v, no capacity bound
            } else {
                const std::size_t e = static_cast<std::size_t>(v) * n + (u - m);
                delta = std::min(delta, flow[e]);
            }
            if (par[u] < 0) delta = std::min(delta, a[u]);
        }

        for (int v = m + target; par[v] >= 0; v = par[v]) {
            const int u = par[v];
            if (v >= m) {
                flow[static_cast<std::size_t>(u) * n + (v - m)] += delta;
            } else {
                flow[static_cast<std::size_t>(v) * n + (u - m)] -= delta;
            }
            if (par[u] < 0) a[u] -= delta;
        }
        b[target] -= delta;
        remaining -= delta;
    }

    TransportPlan plan;
    plan.p = p;
    if (remaining > 1e-9 * std::max(1.0, total)) {
        plan.feasible = false;
        plan.value = -kInf;
        plan.objective = -kInf;
        return plan;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double f = flow[static_cast<std::size_t>(i) * n + j];
            if (f > tol) plan.entries.push_back({mu.support[i], nu.support[j], f});
        }
    finalize_plan(sample, plan);
    return plan;
}

TransportPlan brute_force_optimal(const CausalSample& sample, const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu, double p) {
    mu.validate(sample);
    nu.validate(sample);
    const int n = static_cast<int>(mu.support.size());
    if (n != static_cast<int>(nu.support.size()) || n > 8)
        throw std::invalid_argument("brute_force_optimal: needs equal supports of size <= 8");
    const double w = mu.masses[0];
    for (double v : mu.masses)
        if (std::fabs(v - w) > 1e-12 * w)
            throw std::invalid_argument("brute_force_optimal: masses must be uniform");
    for (double v : nu.masses)
        if (std::fabs(v - w) > 1e-12 * w)
            throw std::invalid_argument("brute_force_optimal: masses must be uniform");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -kInf;
    std::vector<int> best_perm;
    do {
        double obj = 0.0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            bool causal = false;
            const double c = plan_cost(sample, p, mu.support[i], nu.support[perm[i]], causal);
            if (!causal) ok = false;
            else obj += w * c;
        }
        if (ok && obj > best) {
            best = obj;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    TransportPlan plan;
    plan.p = p;
    if (best_perm.empty()) {
        plan.feasible = false;
        plan.value = -kInf;
        plan.objective = -kInf;
        return plan;
    }
    for (int i = 0; i < n; ++i) plan.entries.push_back({mu.support[i], nu.support[best_perm[i]], w});
    finalize_plan(sample, plan);
    return plan;
}

namespace {

// lhs - rhs for one cycle of plan-entry indices; +inf when the shifted pairing
// leaves the causal set, in which case the inequality holds trivially.
double cycle_slack(const CausalSample& sample, const TransportPlan& plan,
                   const std::vector<int>& cyc) {
    const int k = static_cast<int>(cyc.size());
    double lhs = 0.0;
    double rhs = 0.0;
    for (int i = 0; i < k; ++i) {
        const auto& e = plan.entries[cyc[i]];
        lhs += std::pow(sample.tau_at(e.src, e.dst), plan.p);
        const auto& next = plan.entries[cyc[(i + 1) % k]];
        bool causal = false;
        const double c = plan_cost(sample, plan.p, next.src, e.dst, causal);
        if (!causal) return kInf;
        rhs += c;
    }
    return lhs - rhs;
}

long long count_cycles(int n, int max_cycle) {
    long long total = 0;
    for (int k = 2; k <= std::min(max_cycle, n); ++k) {
        // n choose k times (k-1)! cyclic orders
        long long c = 1;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        long long f = 1;
        for (int i = 2; i < k; ++i) f *= i;
        total += c * f;
        if (total > (1LL << 40)) return total;
    }
    return total;
}

} // namespace

MonotonicityReport check_cyclical_monotonicity(const CausalSample& sample,
                                               const TransportPlan& plan, int max_cycle,
                                               uint64_t seed) {
    MonotonicityReport rep;
    rep.worst_slack = kInf;
    if (!plan.feasible) throw std::invalid_argument("monotonicity audit: plan is infeasible");
    const int n = static_cast<int>(plan.entries.size());
    if (n < 2 || max_cycle < 2) {
        rep.worst_slack = 0.0;
        rep.exhaustive = true;
        return rep;
    }

    auto record = [&](const std::vector<int>& cyc) {
        const double s = cycle_slack(sample, plan, cyc);
        ++rep.cycles_checked;
        if (s < rep.worst_slack) {
            rep.worst_slack = s;
            rep.witness = cyc;
        }
    };

    const long long exhaustive_budget = 200000;
    if (count_cycles(n, max_cycle) <= exhaustive_budget) {
        rep.exhaustive = true;
        // First element fixed as the smallest index kills cyclic duplicates.
        std::vector<int> cyc;
        std::vector<uint8_t> used(n, 0);
        std::function<void(int)> grow = [&](int k) {
            if (static_cast<int>(cyc.size()) >= 2) record(cyc);
            if (static_cast<int>(cyc.size()) == k) return;
            for (int j = cyc.front() + 1; j < n; ++j) {
                if (used[j]) continue;
                used[j] = 1;
                cyc.push_back(j);
                grow(k);
                cyc.pop_back();
                used[j] = 0;
            }
        };
        for (int first = 0; first + 1 < n; ++first) {
            cyc.assign(1, first);
            used.assign(n, 0);
            used[first] = 1;
            grow(std::min(max_cycle, n));
        }
    } else {
        Rng rng(seed, 0xc7c);
        std::vector<int> cyc;
        for (long long trial = 0; trial < 100000; ++trial) {
            const int k = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(max_cycle, n) - 1)));
            cyc.clear();
            while (static_cast<int>(cyc.size()) < k) {
                const int c = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
                if (std::find(cyc.begin(), cyc.end(), c) == cyc.end()) cyc.push_back(c);
            }
            record(cyc);
        }
    }
    rep.ok = rep.worst_slack >= -1e-9;
    return rep;
}

Displacement displacement(const CausalSample& sample, const TransportPlan& plan, double t) {
    if (!plan.feasible) throw std::invalid_argument("displacement: plan is infeasible");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("displacement: need t in [0, 1]");
    Displacement out;
    if (t == 0.0 || t == 1.0) {
        std::map<int, double> grouped;
        for (const auto& e : plan.entries) grouped[t == 0.0 ? e.src : e.dst] += e.mass;
        for (const auto& [idx, mass] : grouped) {
            out.events.push_back(sample.events[idx]);
            out.masses.push_back(mass);
        }
        return out;
    }
    for (const auto& e : plan.entries) {
        if (!(sample.tau_at(e.src, e.dst) > 0.0))
            throw std::invalid_argument("displacement: interior times need chronological entries");
        out.events.push_back(geodesic_point(sample.st, sample.events[e.src], sample.events[e.dst], t));
        out.masses.push_back(e.mass);
    }
    return out;
}

} // namespace lorot

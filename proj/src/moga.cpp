#include "hems/moga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "hems/error.hpp"
#include "hems/hypervolume.hpp"
#include "hems/rng.hpp"

namespace hems {

void GaParams::validate() const {
    if (pop_size < 4 || pop_size % 2 != 0)
        throw ValidationError("ga: pop_size must be an even number >= 4");
    if (generations < 1) throw ValidationError("ga: generations must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        throw ValidationError("ga: crossover_rate must lie in [0, 1]");
    if (mutation_rate > 1.0 || std::isnan(mutation_rate))
        throw ValidationError("ga: mutation_rate must lie in [0, 1] (or be negative for the default)");
    if (!(blend_alpha >= 0.0)) throw ValidationError("ga: blend_alpha must be >= 0");
    if (!(mutation_sigma >= 0.0)) throw ValidationError("ga: mutation_sigma must be >= 0");
    for (double l : setpoint_levels)
        if (!(l >= 0.0)) throw ValidationError("ga: setpoint levels must be >= 0");
}

std::vector<double> repair_setpoints(std::span<const double> setpoints, const CaseConfig& cfg) {
    const double lo = cfg.desired_temp;
    const double hi = cfg.desired_temp + cfg.dev_cap;
    std::vector<double> out(setpoints.begin(), setpoints.end());
    double total = 0.0;
    for (double& t : out) {
        t = std::clamp(t, lo, hi);
        total += t - lo;
    }
    if (total <= cfg.total_dev_cap) return out;

    // Scale deviations; shave the factor until the sum, measured the way the
    // constraint checker measures it, is within the cap.
    const std::vector<double> clamped = out;
    double scale = cfg.total_dev_cap / total;
    for (;;) {
        double sum = 0.0;
        for (std::size_t h = 0; h < out.size(); ++h) {
            out[h] = lo + (clamped[h] - lo) * scale;
            sum += out[h] - lo;
        }
        if (sum <= cfg.total_dev_cap) break;
        scale = std::nextafter(scale, 0.0);
    }
    return out;
}

Schedule decode(const Chromosome& chrom, const CaseConfig& cfg) {
    const std::size_t h_len = cfg.horizon();
    if (chrom.starts.size() != cfg.appliances.size() || chrom.setpoints.size() != h_len)
        throw ValidationError("chromosome size does not match the case configuration");
    Schedule s;
    s.on.assign(cfg.appliances.size(), std::vector<std::uint8_t>(h_len, 0));
    for (std::size_t a = 0; a < cfg.appliances.size(); ++a) {
        const auto& app = cfg.appliances[a];
        const int start = std::clamp(chrom.starts[a], app.window_start, app.latest_start());
        for (int i = 0; i < app.cycle_len; ++i) s.on[a][static_cast<std::size_t>(start - 1 + i)] = 1;
    }
    s.setpoints = HorizonSeries(repair_setpoints(chrom.setpoints, cfg), Unit::celsius);
    return s;
}

Chromosome encode(const Schedule& schedule) {
    Chromosome c;
    for (const auto& row : schedule.on) {
        const auto it = std::find(row.begin(), row.end(), std::uint8_t{1});
        c.starts.push_back(it == row.end() ? 1 : static_cast<int>(it - row.begin()) + 1);
    }
    c.setpoints.assign(schedule.setpoints.begin(), schedule.setpoints.end());
    return c;
}

ObjectiveVector evaluate(const Schedule& schedule, const CaseConfig& cfg, CaseKind kind,
                         const Budgets& budgets) {
    switch (kind) {
        case CaseKind::c: return objectives_case_c(schedule, cfg);
        case CaseKind::d: return objectives_case_d(schedule, cfg, budgets.demand, budgets.occupancy);
        default: throw ValidationError("GA evaluation is defined for cases c and d only");
    }
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    const auto x = a.as_array();
    const auto y = b.as_array();
    bool strictly = false;
    for (std::size_t k = 0; k < 3; ++k) {
        if (x[k] > y[k]) return false;
        if (x[k] < y[k]) strictly = true;
    }
    return strictly;
}

std::vector<int> non_dominated_sort(std::span<const ObjectiveVector> objectives) {
    const std::size_t n = objectives.size();
    std::vector<int> rank(n, 0);
    std::vector<int> dominated_by(n, 0);
    std::vector<std::vector<std::size_t>> dominates_set(n);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominates_set[i].push_back(j);
                ++dominated_by[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominates_set[j].push_back(i);
                ++dominated_by[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (dominated_by[i] == 0) {
            rank[i] = 1;
            current.push_back(i);
        }
    int r = 1;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominates_set[i])
                if (--dominated_by[j] == 0) {
                    rank[j] = r + 1;
                    next.push_back(j);
                }
        current = std::move(next);
        ++r;
    }
    return rank;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives,
                                      std::span<const std::size_t> members) {
    const std::size_t n = members.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < 3; ++k) {
        std::iota(order.begin(), order.end(), 0);
        auto value = [&](std::size_t pos) { return objectives[members[pos]].as_array()[k]; };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        const double lo = value(order.front());
        const double hi = value(order.back());
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (hi <= lo) continue;
        for (std::size_t p = 1; p + 1 < n; ++p)
            dist[order[p]] += (value(order[p + 1]) - value(order[p - 1])) / (hi - lo);
    }
    return dist;
}

namespace {

struct Problem {
    const CaseConfig& cfg;
    CaseKind kind;
    Budgets budgets;
    const GaParams& params;
    double mutation_rate;

    bool discrete() const { return !params.setpoint_levels.empty(); }

    double random_setpoint(Rng& rng) const {
        if (discrete()) {
            const auto i = rng.uniform_int(0, static_cast<long>(params.setpoint_levels.size()) - 1);
            return cfg.desired_temp + params.setpoint_levels[static_cast<std::size_t>(i)];
        }
        return rng.uniform(cfg.desired_temp, cfg.desired_temp + cfg.dev_cap);
    }

    Chromosome random_chromosome(Rng& rng) const {
        Chromosome c;
        for (const auto& app : cfg.appliances)
            c.starts.push_back(static_cast<int>(rng.uniform_int(app.window_start, app.latest_start())));
        for (std::size_t h = 0; h < cfg.horizon(); ++h) c.setpoints.push_back(random_setpoint(rng));
        c.setpoints = repair_setpoints(c.setpoints, cfg);
        return c;
    }

    void crossover(Chromosome& a, Chromosome& b, Rng& rng) const {
        for (std::size_t s = 0; s < a.starts.size(); ++s)
            if (rng.bernoulli(0.5)) std::swap(a.starts[s], b.starts[s]);
        const double lo_bound = cfg.desired_temp;
        const double hi_bound = cfg.desired_temp + cfg.dev_cap;
        for (std::size_t h = 0; h < a.setpoints.size(); ++h) {
            if (discrete()) {
                if (rng.bernoulli(0.5)) std::swap(a.setpoints[h], b.setpoints[h]);
                continue;
            }
            const double x = std::min(a.setpoints[h], b.setpoints[h]);
            const double y = std::max(a.setpoints[h], b.setpoints[h]);
            const double spread = params.blend_alpha * (y - x);
            const double lo = std::max(lo_bound, x - spread);
            const double hi = std::min(hi_bound, y + spread);
            a.setpoints[h] = rng.uniform(lo, hi);
            b.setpoints[h] = rng.uniform(lo, hi);
        }
    }

    void mutate(Chromosome& c, Rng& rng) const {
        for (std::size_t s = 0; s < c.starts.size(); ++s) {
            if (!rng.bernoulli(mutation_rate)) continue;
            const auto& app = cfg.appliances[s];
            c.starts[s] = static_cast<int>(rng.uniform_int(app.window_start, app.latest_start()));
        }
        for (double& t : c.setpoints) {
            if (!rng.bernoulli(mutation_rate)) continue;
            if (discrete()) {
                t = random_setpoint(rng);
            } else {
                t = std::clamp(t + rng.normal() * params.mutation_sigma * cfg.dev_cap,
                               cfg.desired_temp, cfg.desired_temp + cfg.dev_cap);
            }
        }
        c.setpoints = repair_setpoints(c.setpoints, cfg);
    }

    ObjectiveVector score(const Chromosome& c) const {
        return evaluate(decode(c, cfg), cfg, kind, budgets);
    }
};

void evaluate_all(const Problem& problem, std::vector<Individual>& members, std::size_t from) {
    for_each_index(problem.params.exec, members.size() - from, [&](std::size_t i) {
        auto& m = members[from + i];
        m.objectives = problem.score(m.genes);
    });
}

void assign_rank_and_crowding(std::vector<Individual>& pop) {
    std::vector<ObjectiveVector> obj;
    obj.reserve(pop.size());
    for (const auto& m : pop) obj.push_back(m.objectives);
    const auto ranks = non_dominated_sort(obj);
    const int max_rank = ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
    for (int r = 1; r <= max_rank; ++r) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (ranks[i] == r) members.push_back(i);
        const auto dist = crowding_distance(obj, members);
        for (std::size_t p = 0; p < members.size(); ++p) {
            pop[members[p]].rank = r;
            pop[members[p]].crowding = dist[p];
        }
    }
}

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.o1 <= b.o1 && a.o2 <= b.o2 && a.o3 <= b.o3;
}

/// Survivors of parents ++ offspring (parents first, carrying last
/// generation's ranks). Distinct chromosomes compete by (rank, crowding);
/// copies only fill leftover slots, in merged order. For every member of the
/// previous front one rank-1 cover is kept ahead of the crowding order, so
/// the dominated region never shrinks.
std::vector<Individual> select_survivors(std::vector<Individual> merged, std::size_t n) {
    std::vector<ObjectiveVector> elite;
    for (std::size_t i = 0; i < n && i < merged.size(); ++i)
        if (merged[i].rank == 1) elite.push_back(merged[i].objectives);
    std::vector<Individual> unique, copies;
    std::set<Chromosome> seen;
    for (auto& m : merged) {
        if (seen.insert(m.genes).second)
            unique.push_back(std::move(m));
        else
            copies.push_back(std::move(m));
    }
    std::vector<Individual> next;
    if (unique.size() <= n) {
        next = std::move(unique);
        for (std::size_t i = 0; next.size() < n; ++i) next.push_back(std::move(copies[i]));
        return next;
    }
    assign_rank_and_crowding(unique);
    std::vector<std::size_t> order(unique.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (unique[a].rank != unique[b].rank) return unique[a].rank < unique[b].rank;
        return unique[a].crowding > unique[b].crowding;
    });
    std::vector<char> keep(unique.size(), 0);
    for (const auto& e : elite) {
        bool covered = false;
        for (std::size_t i : order) {
            if (unique[i].rank != 1) break;
            if (keep[i] && weakly_dominates(unique[i].objectives, e)) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        for (std::size_t i : order) {
            if (unique[i].rank != 1) break;
            if (weakly_dominates(unique[i].objectives, e)) {
                keep[i] = 1;
                break;
            }
        }
    }
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return keep[i] != 0; });
    for (std::size_t i = 0; i < n; ++i) next.push_back(std::move(unique[order[i]]));
    return next;
}

std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(pop.size()) - 1));
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(pop.size()) - 1));
    const auto& a = pop[i];
    const auto& b = pop[j];
    if (b.rank < a.rank || (b.rank == a.rank && b.crowding > a.crowding)) return j;
    return i;
}

std::vector<Point3> front_points(const std::vector<Individual>& pop) {
    std::vector<Point3> pts;
    for (const auto& m : pop)
        if (m.rank == 1) pts.push_back(m.objectives.as_array());
    return pts;
}

GenerationStats stats_of(const std::vector<Individual>& pop, int generation, const Point3& ref) {
    GenerationStats s;
    s.generation = generation;
    s.best_o1 = s.best_o2 = s.best_o3 = std::numeric_limits<double>::infinity();
    for (const auto& m : pop) {
        s.best_o1 = std::min(s.best_o1, m.objectives.o1);
        s.best_o2 = std::min(s.best_o2, m.objectives.o2);
        s.best_o3 = std::min(s.best_o3, m.objectives.o3);
    }
    s.hypervolume = hypervolume3(front_points(pop), ref);
    return s;
}

}  // namespace

GaResult evolve(const CaseConfig& cfg, CaseKind kind, const Budgets& budgets,
                const GaParams& params) {
    params.validate();
    cfg.validate();
    if (kind != CaseKind::c && kind != CaseKind::d)
        throw ValidationError("evolve: only cases c and d are optimized");
    const auto genome = static_cast<double>(cfg.appliances.size() + cfg.horizon());
    const Problem problem{cfg, kind, budgets, params,
                          params.mutation_rate < 0.0 ? 1.0 / genome : params.mutation_rate};
    const auto n = static_cast<std::size_t>(params.pop_size);

    Rng rng(params.seed);
    GaResult result;
    std::vector<Individual> pop(n);
    for (auto& m : pop) m.genes = problem.random_chromosome(rng);
    evaluate_all(problem, pop, 0);
    result.evaluations += static_cast<long>(n);
    assign_rank_and_crowding(pop);

    Point3 lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& m : pop) {
        const auto o = m.objectives.as_array();
        for (std::size_t k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], o[k]);
            hi[k] = std::max(hi[k], o[k]);
        }
    }
    for (std::size_t k = 0; k < 3; ++k)
        result.reference_point[k] = hi[k] + 0.1 * (hi[k] - lo[k]) + 1e-6 * std::max(1.0, std::abs(hi[k]));
    result.history.push_back(stats_of(pop, 0, result.reference_point));

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::vector<Individual> merged = pop;
        merged.reserve(2 * n);
        for (std::size_t i = 0; i < n; i += 2) {
            Chromosome a = pop[tournament(pop, rng)].genes;
            Chromosome b = pop[tournament(pop, rng)].genes;
            if (rng.bernoulli(params.crossover_rate)) problem.crossover(a, b, rng);
            problem.mutate(a, rng);
            problem.mutate(b, rng);
            merged.push_back({std::move(a), {}, 0, 0.0});
            merged.push_back({std::move(b), {}, 0, 0.0});
        }
        evaluate_all(problem, merged, n);
        result.evaluations += static_cast<long>(n);
        pop = select_survivors(std::move(merged), n);
        assign_rank_and_crowding(pop);
        result.history.push_back(stats_of(pop, gen, result.reference_point));
    }

    std::set<Chromosome> seen;
    for (const auto& m : pop)
        if (m.rank == 1 && seen.insert(m.genes).second) result.front.push_back(m);
    return result;
}

std::size_t select_solution(std::span<const Individual> front) {
    if (front.empty()) throw ValidationError("select_solution: empty front");
    Point3 lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& m : front) {
        const auto o = m.objectives.as_array();
        for (std::size_t k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], o[k]);
            hi[k] = std::max(hi[k], o[k]);
        }
    }
    auto score = [&](const Individual& m) {
        const auto o = m.objectives.as_array();
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            if (hi[k] > lo[k]) s += (o[k] - lo[k]) / (hi[k] - lo[k]);
        return s;
    };
    std::size_t best = 0;
    double best_score = score(front[0]);
    for (std::size_t i = 1; i < front.size(); ++i) {
        const double s = score(front[i]);
        const auto& cur = front[i];
        const auto& inc = front[best];
        const bool better =
            s < best_score ||
            (s == best_score && (cur.objectives.o3 < inc.objectives.o3 ||
                                 (cur.objectives.o3 == inc.objectives.o3 && cur.genes < inc.genes)));
        if (better) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

}  // namespace hems

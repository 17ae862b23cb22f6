#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "hems/objectives.hpp"
#include "hems/parallel.hpp"

namespace hems {

enum class CaseKind { a, b, c, d };

struct Budgets {
    double demand = 0.0;
    double occupancy = 0.0;
};

/// Genes: one start hour (1-based) per appliance and one absolute setpoint
/// (degC) per hour. Start genes always decode to a contiguous in-window block.
struct Chromosome {
    std::vector<int> starts;
    std::vector<double> setpoints;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
    friend auto operator<=>(const Chromosome&, const Chromosome&) = default;
};

struct GaParams {
    int pop_size = 100;
    int generations = 300;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // < 0 means 1 / genome length
    std::uint64_t seed = 1;
    double blend_alpha = 0.5;     // BLX-alpha on setpoint genes
    double mutation_sigma = 0.1;  // Gaussian step, fraction of the per-hour cap
    /// When non-empty, setpoint genes take only desired_temp + level values.
    std::vector<double> setpoint_levels;
    Exec exec = Exec::parallel;

    /// Throws ValidationError on an odd or too-small population, no
    /// generations, or rates outside [0, 1].
    void validate() const;
};

struct Individual {
    Chromosome genes;
    ObjectiveVector objectives;
    int rank = 0;
    double crowding = 0.0;
};

struct GenerationStats {
    int generation = 0;
    double best_o1 = 0.0;
    double best_o2 = 0.0;
    double best_o3 = 0.0;
    double hypervolume = 0.0;
};

struct GaResult {
    std::vector<Individual> front;  // rank-1 members of the final population, unique genes
    std::vector<GenerationStats> history;
    std::array<double, 3> reference_point{};
    long evaluations = 0;
};

/// Scales setpoint deviations down uniformly when their total exceeds the
/// cap, after clamping each hour into [desired, desired + dev_cap].
std::vector<double> repair_setpoints(std::span<const double> setpoints, const CaseConfig& cfg);

Schedule decode(const Chromosome& chrom, const CaseConfig& cfg);

/// Inverse of decode for schedules built from contiguous blocks.
Chromosome encode(const Schedule& schedule);

/// Objective vector for case c (nominal) or d (robust at `budgets`).
ObjectiveVector evaluate(const Schedule& schedule, const CaseConfig& cfg, CaseKind kind,
                         const Budgets& budgets);

/// Minimization dominance: no worse everywhere, strictly better somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// 1-based Pareto ranks (fast non-dominated sorting).
std::vector<int> non_dominated_sort(std::span<const ObjectiveVector> objectives);

/// Crowding distance within one front, given by member indices into
/// `objectives`. Boundary members get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> objectives,
                                      std::span<const std::size_t> members);

/// Elitist non-dominated sorting GA over start-hour and setpoint genes.
/// All random draws of a generation are taken from the seeded generator
/// before evaluation, so results do not depend on `params.exec`.
GaResult evolve(const CaseConfig& cfg, CaseKind kind, const Budgets& budgets,
                const GaParams& params);

/// Index into `front` of the member with the smallest sum of per-objective
/// min-max normalized values; ties go to the lowest o3, then lexicographic
/// genes. Throws ValidationError on an empty front.
std::size_t select_solution(std::span<const Individual> front);

}  // namespace hems

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sokofm/rng.hpp"

namespace sokofm {

/// One discrete tuning dimension: a name and its candidate values (kept as
/// strings here; interpreting them is the caller's job).
struct ParamDimension {
    std::string name;
    std::vector<std::string> values;
};

struct ParamSpace {
    std::vector<ParamDimension> dims;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& d : dims) n *= d.values.size();
        return n;
    }
};

/// One value index per dimension.
using ConfigPoint = std::vector<int>;

struct TupleStats {
    std::uint64_t count = 0;
    double sum = 0.0;

    double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
};

/// Fitness statistics over all 1-tuples, all 2-tuples and the full N-tuple of
/// dimension indices. Projections are stored in ordered maps so iteration and
/// recommendation are deterministic.
class NTupleLandscape {
public:
    explicit NTupleLandscape(int n_dims);

    void update(const ConfigPoint& point, double fitness);

    /// mean + k * sqrt(ln(total+1) / (count+epsilon)); unvisited projections
    /// count as mean 0, count 0.
    double ucb(std::size_t tuple_index, const ConfigPoint& point, double k,
               double epsilon) const;

    /// Mean of ucb over every tuple; NTBEA's acquisition value for a point.
    double mean_ucb(const ConfigPoint& point, double k, double epsilon) const;

    std::uint64_t total_evaluations() const { return total_; }
    const std::vector<std::vector<int>>& tuples() const { return tuples_; }
    const std::map<ConfigPoint, TupleStats>& stats(std::size_t tuple_index) const {
        return stats_[tuple_index];
    }
    std::size_t full_tuple_index() const { return tuples_.size() - 1; }

private:
    ConfigPoint project(std::size_t tuple_index, const ConfigPoint& point) const;

    std::vector<std::vector<int>> tuples_;
    std::vector<std::map<ConfigPoint, TupleStats>> stats_;
    std::uint64_t total_ = 0;
};

struct NtbeaOptions {
    int iterations = 200;
    double k = 2.0;
    double epsilon = 0.5;
    int neighbours = 50;
    double mutation_prob = 0.5;
};

struct TuneLogEntry {
    ConfigPoint point;
    double fitness = 0.0;
};

struct TuneResult {
    ConfigPoint best;
    std::vector<TuneLogEntry> log;
    NTupleLandscape landscape;
};

using Objective = std::function<double(const ConfigPoint&)>;

/// N-Tuple Bandit Evolutionary Algorithm over a discrete space: evaluate the
/// current point, update tuple statistics, then hill-climb to the best of
/// `neighbours` mutated candidates by mean tuple UCB. Recommends the
/// evaluated point with the highest full-tuple mean (ties: most visits).
TuneResult ntbea_tune(const ParamSpace& space, const Objective& objective,
                      const NtbeaOptions& options, Rng& rng);

}  // namespace sokofm

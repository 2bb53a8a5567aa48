#include "sokofm/tuner.hpp"

#include <cmath>
#include <stdexcept>

namespace sokofm {

NTupleLandscape::NTupleLandscape(int n_dims) {
    if (n_dims < 1) throw std::invalid_argument("NTupleLandscape: need at least one dimension");
    for (int i = 0; i < n_dims; ++i) tuples_.push_back({i});
    for (int i = 0; i < n_dims; ++i)
        for (int j = i + 1; j < n_dims; ++j) tuples_.push_back({i, j});
    // for one or two dimensions the full tuple already exists above; the
    // last tuple is always the full one
    if (n_dims > 2) {
        std::vector<int> full(n_dims);
        for (int i = 0; i < n_dims; ++i) full[i] = i;
        tuples_.push_back(std::move(full));
    }
    stats_.resize(tuples_.size());
}

ConfigPoint NTupleLandscape::project(std::size_t tuple_index, const ConfigPoint& point) const {
    const auto& dims = tuples_[tuple_index];
    ConfigPoint p(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) p[i] = point[dims[i]];
    return p;
}

void NTupleLandscape::update(const ConfigPoint& point, double fitness) {
    for (std::size_t t = 0; t < tuples_.size(); ++t) {
        auto& s = stats_[t][project(t, point)];
        ++s.count;
        s.sum += fitness;
    }
    ++total_;
}

double NTupleLandscape::ucb(std::size_t tuple_index, const ConfigPoint& point, double k,
                            double epsilon) const {
    const auto& table = stats_[tuple_index];
    const auto it = table.find(project(tuple_index, point));
    const TupleStats s = it == table.end() ? TupleStats{} : it->second;
    const double exploration =
        std::sqrt(std::log(static_cast<double>(total_) + 1.0) /
                  (static_cast<double>(s.count) + epsilon));
    return s.mean() + k * exploration;
}

double NTupleLandscape::mean_ucb(const ConfigPoint& point, double k, double epsilon) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < tuples_.size(); ++t) sum += ucb(t, point, k, epsilon);
    return sum / static_cast<double>(tuples_.size());
}

namespace {

ConfigPoint random_point(const ParamSpace& space, Rng& rng) {
    ConfigPoint p(space.dims.size());
    for (std::size_t d = 0; d < p.size(); ++d)
        p[d] = static_cast<int>(uniform_int(rng, space.dims[d].values.size()));
    return p;
}

/// Mutate each dimension with probability `prob`; one randomly chosen
/// dimension (with more than one value) is always changed.
ConfigPoint mutate_point(const ConfigPoint& point, const ParamSpace& space, double prob,
                         Rng& rng) {
    ConfigPoint out = point;
    for (std::size_t d = 0; d < out.size(); ++d) {
        if (bernoulli(rng, prob))
            out[d] = static_cast<int>(uniform_int(rng, space.dims[d].values.size()));
    }
    const auto forced = static_cast<std::size_t>(uniform_int(rng, out.size()));
    const auto n = space.dims[forced].values.size();
    if (n > 1) {
        auto v = static_cast<int>(uniform_int(rng, n - 1));
        if (v >= out[forced]) ++v;
        out[forced] = v;
    }
    return out;
}

}  // namespace

TuneResult ntbea_tune(const ParamSpace& space, const Objective& objective,
                      const NtbeaOptions& options, Rng& rng) {
    if (options.iterations < 1)
        throw std::invalid_argument("ntbea_tune: iterations must be positive");
    if (space.dims.empty()) throw std::invalid_argument("ntbea_tune: empty parameter space");
    for (const auto& d : space.dims)
        if (d.values.size() < 2)
            throw std::invalid_argument("ntbea_tune: dimension '" + d.name +
                                        "' needs at least two values");

    NTupleLandscape landscape(static_cast<int>(space.dims.size()));
    std::vector<TuneLogEntry> log;
    log.reserve(options.iterations);

    ConfigPoint current = random_point(space, rng);
    for (int iter = 0; iter < options.iterations; ++iter) {
        const double fitness = objective(current);
        landscape.update(current, fitness);
        log.push_back({current, fitness});

        ConfigPoint best_candidate;
        double best_value = -1e300;
        for (int c = 0; c < options.neighbours; ++c) {
            ConfigPoint candidate = mutate_point(current, space, options.mutation_prob, rng);
            const double value = landscape.mean_ucb(candidate, options.k, options.epsilon);
            if (value > best_value) {
                best_value = value;
                best_candidate = std::move(candidate);
            }
        }
        if (!best_candidate.empty()) current = std::move(best_candidate);
    }

    // recommend the evaluated point with the best full-tuple mean, ties to
    // the most-visited one; map order makes remaining ties deterministic
    const auto& full = landscape.stats(landscape.full_tuple_index());
    ConfigPoint best;
    double best_mean = -1e300;
    std::uint64_t best_count = 0;
    for (const auto& [point, stats] : full) {
        if (stats.mean() > best_mean ||
            (stats.mean() == best_mean && stats.count > best_count)) {
            best_mean = stats.mean();
            best_count = stats.count;
            best = point;
        }
    }
    return TuneResult{std::move(best), std::move(log), std::move(landscape)};
}

}  // namespace sokofm

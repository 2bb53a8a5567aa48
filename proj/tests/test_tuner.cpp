#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sokofm/tuner.hpp"

using namespace sokofm;

namespace {

ParamSpace binary_space(int dims) {
    ParamSpace space;
    for (int d = 0; d < dims; ++d)
        space.dims.push_back({"d" + std::to_string(d), {"a", "b"}});
    return space;
}

}  // namespace

TEST_SUITE("tuner") {

TEST_CASE("ucb matches the formula") {
    NTupleLandscape landscape(2);

    SUBCASE("an unvisited projection with no evaluations scores zero") {
        // ln(0 + 1) = 0, so the exploration term vanishes regardless of k
        CHECK(landscape.ucb(0, {0, 0}, 2.0, 0.5) == doctest::Approx(0.0));
    }

    SUBCASE("the mean term is the running mean") {
        landscape.update({0, 0}, 1.0);
        landscape.update({0, 0}, 0.0);
        CHECK(landscape.stats(0).at({0}).mean() == doctest::Approx(0.5));
        CHECK(landscape.ucb(0, {0, 0}, 0.0, 0.5) == doctest::Approx(0.5));  // k = 0: mean only
    }

    SUBCASE("the exploration bonus follows sqrt(ln(total+1)/(count+eps))") {
        landscape.update({0, 0}, 1.0);
        landscape.update({1, 1}, 0.0);
        const double expected = 1.0 + 2.0 * std::sqrt(std::log(3.0) / (1.0 + 0.5));
        CHECK(landscape.ucb(0, {0, 0}, 2.0, 0.5) == doctest::Approx(expected));
        // unvisited projection: mean 0, count 0
        const double unseen = 0.0 + 2.0 * std::sqrt(std::log(3.0) / 0.5);
        CHECK(landscape.ucb(0, {5, 0}, 2.0, 0.5) == doctest::Approx(unseen));
    }
}

TEST_CASE("the tuple system is all 1-tuples, all 2-tuples and the full tuple") {
    const NTupleLandscape l4(4);
    CHECK(l4.tuples().size() == 4 + 6 + 1);
    CHECK(l4.tuples()[l4.full_tuple_index()] == std::vector<int>{0, 1, 2, 3});
    const NTupleLandscape l2(2);
    CHECK(l2.tuples().size() == 3);
    CHECK(l2.tuples()[l2.full_tuple_index()] == std::vector<int>{0, 1});
    const NTupleLandscape l1(1);
    CHECK(l1.tuples().size() == 1);
}

TEST_CASE("a one-dimensional indicator objective is found quickly") {
    ParamSpace space;
    space.dims.push_back({"choice", {"a", "b"}});
    const Objective objective = [](const ConfigPoint& p) { return p[0] == 1 ? 1.0 : 0.0; };

    NtbeaOptions options;
    options.iterations = 50;
    options.neighbours = 10;
    Rng rng(1);
    const TuneResult result = ntbea_tune(space, objective, options, rng);
    CHECK(result.best == ConfigPoint{1});

    // exhaustive check of the 1-tuple statistics
    const auto& stats = result.landscape.stats(0);
    if (stats.count({1})) CHECK(stats.at({1}).mean() == doctest::Approx(1.0));
    if (stats.count({0})) CHECK(stats.at({0}).mean() == doctest::Approx(0.0));
}

TEST_CASE("per-dimension 1-tuple counts sum to the number of evaluations") {
    const ParamSpace space = binary_space(3);
    const Objective objective = [](const ConfigPoint& p) {
        return static_cast<double>(p[0] + p[1] + p[2]);
    };
    NtbeaOptions options;
    options.iterations = 37;
    Rng rng(5);
    const TuneResult result = ntbea_tune(space, objective, options, rng);
    CHECK(result.landscape.total_evaluations() == 37);
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
        std::uint64_t sum = 0;
        for (const auto& [proj, s] : result.landscape.stats(d)) sum += s.count;
        CHECK(sum == 37);
    }
}

TEST_CASE("tuning is deterministic given the seed") {
    const ParamSpace space = binary_space(4);
    const Objective objective = [](const ConfigPoint& p) {
        return p[0] * 1.0 + p[1] * 0.5 - p[2] * 0.25 + p[3] * 0.125;
    };
    NtbeaOptions options;
    options.iterations = 60;
    Rng a(9), b(9);
    const TuneResult ra = ntbea_tune(space, objective, options, a);
    const TuneResult rb = ntbea_tune(space, objective, options, b);
    CHECK(ra.best == rb.best);
    REQUIRE(ra.log.size() == rb.log.size());
    for (std::size_t i = 0; i < ra.log.size(); ++i) {
        CHECK(ra.log[i].point == rb.log[i].point);
        CHECK(ra.log[i].fitness == rb.log[i].fitness);
    }
}

TEST_CASE("the recommendation is always an evaluated point") {
    const ParamSpace space = binary_space(4);
    const Objective objective = [](const ConfigPoint& p) {
        return static_cast<double>(p[0] ^ p[1]) + 0.5 * p[2];
    };
    NtbeaOptions options;
    options.iterations = 25;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const TuneResult result = ntbea_tune(space, objective, options, rng);
        bool found = false;
        for (const auto& e : result.log) found = found || e.point == result.best;
        CHECK(found);
    }
}

TEST_CASE("a noiseless optimum on a small space is attained with a 5x budget") {
    // 2x2x2x2 = 16 points, 80 iterations
    const ParamSpace space = binary_space(4);
    const ConfigPoint optimum{1, 0, 1, 1};
    const Objective objective = [&](const ConfigPoint& p) {
        double v = 0;
        for (std::size_t d = 0; d < p.size(); ++d) v += p[d] == optimum[d];
        return v;
    };
    NtbeaOptions options;
    options.iterations = 80;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        CHECK(ntbea_tune(space, objective, options, rng).best == optimum);
    }
}

TEST_CASE("degenerate spaces are rejected") {
    ParamSpace space;
    space.dims.push_back({"only", {"x"}});
    Rng rng(1);
    CHECK_THROWS_AS(ntbea_tune(space, [](const ConfigPoint&) { return 0.0; }, {}, rng),
                    std::invalid_argument);
}

}  // TEST_SUITE

// Acceptance suite: runs every exit criterion end to end on the bundled
// corpus and prints one pass/fail line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bfs_solver.hpp"
#include "sokofm/agent.hpp"
#include "sokofm/config.hpp"
#include "sokofm/experiment.hpp"
#include "sokofm/harness.hpp"
#include "sokofm/levels.hpp"
#include "sokofm/models.hpp"
#include "sokofm/tuner.hpp"
#include "testutil.hpp"

using namespace sokofm;
namespace tt = sokofm::testing;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Criterion {
    int id;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int id, bool pass, const std::string& detail) {
    g_results.push_back({id, pass, detail});
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct TrainedModel {
    PatternSpec spec;
    std::string name;
    std::unique_ptr<ForwardModel> model;
    std::size_t size = 0;       // unique patterns or tree nodes
    double hard_accuracy = 0.0;
    bool is_tree = false;
};

// ---------------------------------------------------------------------------

void criterion_1_bfs_oracle(const std::vector<const LevelSet*>& sets) {
    const auto t0 = std::chrono::steady_clock::now();
    int solved = 0, replayed = 0, total = 0;
    std::size_t longest = 0;
    for (const LevelSet* set : sets) {
        for (const auto& level : set->levels) {
            ++total;
            const auto result = tt::bfs_solve(level.state);
            if (!result.solved) continue;
            ++solved;
            longest = std::max(longest, result.solution.size());
            GameState s = level.state;
            for (Action a : result.solution) s = step(s, a);
            replayed += is_win(s);
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = solved == total && replayed == total && elapsed < 60.0;
    report(1, pass,
           fmt("engine vs BFS oracle: %d/%d levels solved, %d replays reach a win, "
               "longest solution %zu, %.1f s",
               solved, total, replayed, longest, elapsed));
}

void criterion_2_locality(const TransitionDataset& train_data,
                          const TransitionDataset& hard_data) {
    std::size_t conflicts = 0, transitions = 0;
    PatternTable table({PatternShape::Cross, 2});
    const auto offs = offsets(table.spec());
    std::vector<Tile> cells(offs.size());
    for (const TransitionDataset* data : {&train_data, &hard_data}) {
        transitions += data->records.size();
        for (const auto& t : data->records) {
            for (int y = 0; y < t.prev.height; ++y) {
                for (int x = 0; x < t.prev.width; ++x) {
                    extract_cells(t.prev, x, y, offs, cells.data());
                    table.add(t.action, cells, t.next.at(x, y));
                }
            }
        }
    }
    for (const auto& [key, outcome] : table.entries()) {
        int labels = 0;
        for (int l = 0; l < kTileCount; ++l) labels += outcome.count[l] > 0;
        conflicts += labels > 1;
    }
    const bool pass = transitions >= 100'000 && conflicts == 0;
    report(2, pass,
           fmt("cross-span-2 functional consistency: %zu conflicting keys over %zu "
               "transitions (%zu unique patterns)",
               conflicts, transitions, table.unique_pattern_count()));
}

void criterion_3_training_reproduction(const TransitionDataset& train_data) {
    const PatternSpec spec{PatternShape::Cross, 2};
    const PatternTable table = build_pattern_table(train_data, spec);
    const TreeModel tree = train_tree(table);
    const ExactMatchModel exact = train_exact(PatternTable(table));

    const double exact_acc = accuracy(exact, train_data, 0);
    const double tree_acc = accuracy(tree, train_data, 0);
    const bool pass = exact_acc == 1.0 && tree_acc == 1.0;
    report(3, pass,
           fmt("training-set reproduction: exact-match %.6f, tree %.6f (both must be "
               "exactly 1)",
               exact_acc, tree_acc));
}

std::vector<TrainedModel> criterion_4_heldout_band(const TransitionDataset& train_data,
                                                   const TransitionDataset& hard_data,
                                                   double collect_seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TrainedModel> models;
    std::map<std::pair<int, int>, std::size_t> unique_counts;  // (shape, span) -> patterns

    for (PatternShape shape : {PatternShape::Cross, PatternShape::Square}) {
        for (int span = 1; span <= 3; ++span) {
            const PatternSpec spec{shape, span};
            PatternTable table = build_pattern_table(train_data, spec);
            unique_counts[{static_cast<int>(shape), span}] = table.unique_pattern_count();

            TrainedModel tree;
            tree.spec = spec;
            tree.is_tree = true;
            auto tree_model = std::make_unique<TreeModel>(train_tree(table));
            tree.size = tree_model->node_count();
            tree.name = tree_model->descriptor();
            tree.model = std::move(tree_model);
            models.push_back(std::move(tree));

            TrainedModel exact;
            exact.spec = spec;
            auto exact_model = std::make_unique<ExactMatchModel>(train_exact(std::move(table)));
            exact.name = exact_model->descriptor();
            exact.model = std::move(exact_model);
            exact.size = unique_counts[{static_cast<int>(shape), span}];
            models.push_back(std::move(exact));
        }
    }

    double worst = 1.0, best_tree = 0.0, best_exact = 0.0;
    std::string worst_name;
    for (auto& m : models) {
        m.hard_accuracy = accuracy(*m.model, hard_data, 0);
        if (m.hard_accuracy < worst) {
            worst = m.hard_accuracy;
            worst_name = m.name;
        }
        if (m.is_tree) best_tree = std::max(best_tree, m.hard_accuracy);
        else best_exact = std::max(best_exact, m.hard_accuracy);
    }
    const double elapsed = seconds_since(t0) + collect_seconds;
    const bool pass = worst >= 0.97 && best_tree >= best_exact && elapsed < 600.0;
    report(4, pass,
           fmt("held-out accuracy band: worst %.4f (%s), best tree %.6f vs best "
               "exact-match %.6f, %.0f s",
               worst, worst_name.c_str(), best_tree, best_exact, elapsed));
    return models;
}

void criterion_5_static_identity(const TransitionDataset& hard_data) {
    const StaticModel model;
    const double measured = accuracy(model, hard_data, 0);

    double sum = 0.0;
    for (const auto& t : hard_data.records) {
        std::uint32_t same = 0;
        for (std::size_t c = 0; c < t.prev.tiles.size(); ++c)
            same += t.prev.tiles[c] == t.next.tiles[c];
        sum += static_cast<double>(same) / static_cast<double>(t.prev.tiles.size());
    }
    const double expected = sum / static_cast<double>(hard_data.records.size());
    const bool pass = measured == expected;
    report(5, pass,
           fmt("static accuracy identity: %.17g vs unchanged-tile fraction %.17g", measured,
               expected));
}

void criterion_6_baseline_ordering(const LevelSet& easy,
                                   const std::vector<TrainedModel>& models) {
    const auto t0 = std::chrono::steady_clock::now();

    // the best tree and best exact-match by held-out accuracy stand in for
    // the learned side of the comparison
    const TrainedModel* best_tree = nullptr;
    const TrainedModel* best_exact = nullptr;
    for (const auto& m : models) {
        const TrainedModel*& slot = m.is_tree ? best_tree : best_exact;
        if (!slot || m.hard_accuracy > slot->hard_accuracy) slot = &m;
    }

    AgentParams params;  // the tuned operating point: 40, 40, 0.4, shift buffer on
    const int repeats = 20, max_steps = 100;
    const auto seed = derive_seed(kSeed, {kSeedPlay, 0});

    const TrueModel truth;
    const StaticModel stat;
    const double true_score =
        play_eval(params, truth, easy, repeats, max_steps, seed, 0).mean_score;
    const double static_score =
        play_eval(params, stat, easy, repeats, max_steps, seed, 0).mean_score;
    const double tree_score =
        play_eval(params, *best_tree->model, easy, repeats, max_steps, seed, 0).mean_score;
    const double exact_score =
        play_eval(params, *best_exact->model, easy, repeats, max_steps, seed, 0).mean_score;
    const double best_learned = std::max(tree_score, exact_score);

    const double elapsed = seconds_since(t0);
    const bool pass = true_score >= best_learned && best_learned >= static_score &&
                      true_score - static_score >= 1.0 && elapsed < 300.0;
    report(6, pass,
           fmt("easy-level ordering: true %.2f >= best learned %.2f (%s %.2f, %s %.2f) >= "
               "static %.2f, gap %.2f >= 1.0, %.0f s",
               true_score, best_learned, best_tree->name.c_str(), tree_score,
               best_exact->name.c_str(), exact_score, static_score, true_score - static_score,
               elapsed));
}

void criterion_7_pattern_monotonicity(const std::vector<TrainedModel>& models) {
    // unique pattern counts per (shape, span), recorded during training
    std::map<std::pair<int, int>, std::size_t> counts;
    for (const auto& m : models)
        if (!m.is_tree) counts[{static_cast<int>(m.spec.shape), m.spec.span}] = m.size;

    bool pass = true;
    std::ostringstream detail;
    for (int shape = 0; shape < 2; ++shape) {
        detail << (shape == 0 ? "cross" : "square") << ":";
        for (int span = 1; span <= 3; ++span) detail << ' ' << counts[{shape, span}];
        detail << "  ";
        pass = pass && counts[{shape, 1}] < counts[{shape, 2}] &&
               counts[{shape, 2}] < counts[{shape, 3}];
    }
    for (int span = 1; span <= 3; ++span)
        pass = pass && counts[{0, span}] < counts[{1, span}];
    report(7, pass, "unique-pattern monotonicity: " + detail.str());
}

void criterion_8_elitism(const LevelSet& train) {
    const TrueModel model;
    AgentParams params;
    params.sequence_length = 10;
    params.evaluations = 10;

    std::size_t violations = 0, calls = 0;
    for (std::uint64_t i = 0; i < 10'000; ++i) {
        Rng rng(derive_seed(kSeed, {777, i}));
        GameState s = train.levels[i % train.levels.size()].state;
        // randomize the starting point a little
        for (int k = 0; k < static_cast<int>(uniform_int(rng, 6)); ++k)
            s = step(s, random_action(rng));
        const Decision d = decide(s, model, params, rng);
        ++calls;
        if (!std::is_sorted(d.fitness_trace.begin(), d.fitness_trace.end())) ++violations;
    }
    report(8, violations == 0,
           fmt("1+1 EA elitism: %zu non-monotone fitness traces in %zu decide calls",
               violations, calls));
}

void criterion_9_ntbea_sanity() {
    const auto t0 = std::chrono::steady_clock::now();
    ParamSpace space;
    space.dims = {{"a", {"0", "1", "2", "3", "4"}},
                  {"b", {"0", "1", "2", "3"}},
                  {"c", {"0", "1", "2", "3"}},
                  {"d", {"0", "1"}}};
    const ConfigPoint optimum{3, 2, 2, 1};
    const Objective objective = [&](const ConfigPoint& p) {
        double v = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) v += p[i] == optimum[i];
        return v / static_cast<double>(p.size());
    };

    int hits = 0;
    bool counts_ok = true;
    NtbeaOptions options;  // 200 iterations by default
    for (std::uint64_t run = 0; run < 100; ++run) {
        Rng rng(derive_seed(kSeed, {888, run}));
        const TuneResult result = ntbea_tune(space, objective, options, rng);
        hits += result.best == optimum;
        for (std::size_t d = 0; d < space.dims.size(); ++d) {
            std::uint64_t sum = 0;
            for (const auto& [proj, s] : result.landscape.stats(d)) sum += s.count;
            counts_ok = counts_ok && sum == result.landscape.total_evaluations();
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = hits >= 95 && counts_ok && elapsed < 60.0;
    report(9, pass,
           fmt("ntbea sanity: optimum found in %d/100 runs, count bookkeeping %s, %.1f s",
               hits, counts_ok ? "exact" : "BROKEN", elapsed));
}

void criterion_10_divergence_phenomenon(const LevelSet& hard, const LevelSet& easy,
                                        const TransitionDataset& hard_data,
                                        const std::vector<TrainedModel>& models,
                                        const fs::path& out_dir) {
    // Fig-3-style event: the rollout diverges, still registers a real first
    // goal at or after the divergence point, and later turns invalid.
    struct Found {
        const TrainedModel* model;
        std::string level;
        ActionSequence actions;
        DivergenceResult div;
        int goal_step, invalid_step;
    };
    std::optional<Found> found;

    auto try_trajectory = [&](const TrainedModel& m, const std::string& level_name,
                              const GameState& start, const ActionSequence& actions) {
        if (found) return;
        if (score(start) != 0) return;  // a first-goal event must happen in-trajectory
        const DivergenceResult div = divergence(*m.model, start, actions);
        if (!div.step) return;
        // the true trajectory's first goal must land at or after the
        // divergence point and still be predicted correctly
        int goal_step = -1;
        for (std::size_t t = 1; t < div.actual.size(); ++t) {
            if (score(div.actual[t]) >= 1) {
                goal_step = static_cast<int>(t);
                break;
            }
        }
        if (goal_step < *div.step || goal_step < 0) return;
        if (score(div.predicted[goal_step]) < 1) return;
        // the prediction must still be a valid grid at the goal and only
        // turn invalid afterwards
        for (int t = *div.step; t <= goal_step; ++t)
            if (!validate(div.predicted[t]).empty()) return;
        int invalid_step = -1;
        for (std::size_t t = goal_step + 1; t < div.predicted.size(); ++t) {
            if (!validate(div.predicted[t]).empty()) {
                invalid_step = static_cast<int>(t);
                break;
            }
        }
        if (invalid_step < 0) return;
        found = Found{&m, level_name, actions, div, goal_step, invalid_step};
    };

    // Harvest sub-trajectories of candidate action streams that straddle a
    // first-goal event (like the figure-style "k steps into a solution"):
    // start a few moves before the first box lands on a target and keep a
    // tail for the aftermath.
    struct Candidate {
        std::string name;
        GameState start;
        ActionSequence actions;
    };
    std::vector<Candidate> candidates;
    auto harvest = [&candidates](const std::string& name, const GameState& start,
                                 const ActionSequence& actions) {
        std::vector<GameState> states{start};
        for (Action a : actions) states.push_back(step(states.back(), a));
        int goal = -1;
        for (std::size_t t = 0; t < states.size(); ++t) {
            if (score(states[t]) >= 1) {
                goal = static_cast<int>(t);
                break;
            }
        }
        if (goal < 1) return;  // no in-trajectory goal event
        for (int back = 2; back <= 16; back += 2) {
            const int s0 = std::max(0, goal - back);
            if (score(states[s0]) != 0) continue;
            const auto last = std::min(states.size() - 1, static_cast<std::size_t>(goal) + 20);
            Candidate c;
            c.name = name;
            c.start = states[s0];
            c.actions.assign(actions.begin() + s0, actions.begin() + last);
            candidates.push_back(std::move(c));
        }
    };

    // random collection playouts (cut at the first win)
    const std::uint32_t steps = hard_data.provenance.steps;
    for (std::size_t chunk = 0; chunk + steps <= hard_data.records.size(); chunk += steps) {
        ActionSequence actions;
        for (std::uint32_t i = 0; i < steps; ++i) {
            actions.push_back(hard_data.records[chunk + i].action);
            if (is_win(hard_data.records[chunk + i].next)) break;
        }
        harvest("random playout", hard_data.records[chunk].prev, actions);
    }

    // goal-directed trajectories: the agent playing with the true model
    AgentParams params;
    params.sequence_length = 20;
    params.evaluations = 40;
    const TrueModel truth;
    for (std::uint64_t run = 0; run < 10; ++run) {
        for (const LevelSet* set : {&hard, &easy}) {
            for (std::size_t li = 0; li < set->levels.size(); ++li) {
                Rng rng(derive_seed(kSeed, {999, run, li}));
                GameState s = set->levels[li].state;
                ActionSequence actions, carried;
                for (int t = 0; t < 100 && !is_win(s); ++t) {
                    const Decision d = decide(s, truth, params, rng,
                                              carried.empty() ? nullptr : &carried);
                    carried = d.carried;
                    actions.push_back(d.action);
                    s = step(s, d.action);
                }
                harvest(set->levels[li].name, set->levels[li].state, actions);
            }
        }
    }

    // optimal solutions from the search oracle
    for (const LevelSet* set : {&hard, &easy}) {
        for (const auto& level : set->levels) {
            const auto bfs = tt::bfs_solve(level.state);
            if (bfs.solved) harvest(level.name, level.state, bfs.solution);
        }
    }

    for (const auto& c : candidates) {
        for (const auto& m : models) try_trajectory(m, c.name, c.start, c.actions);
        if (found) break;
    }

    if (!found) {
        report(10, false, "divergence phenomenon: no qualifying example found");
        return;
    }

    // archive the example
    const fs::path path = out_dir / "divergence_example.txt";
    std::ofstream out(path);
    out << "model: " << found->model->name << "\n";
    out << "level: " << found->level << "\n";
    out << "divergence step: " << *found->div.step << "\n";
    out << "first real+predicted goal at step: " << found->goal_step << "\n";
    out << "first invalid predicted state at step: " << found->invalid_step << "\n";
    out << "actions:";
    for (Action a : found->actions) out << ' ' << action_name(a);
    out << "\n\nstart state:\n" << serialize_level(found->div.actual[0]);
    out << "\ntrue state at goal step " << found->goal_step << ":\n"
        << serialize_level(found->div.actual[found->goal_step]);
    out << "\npredicted state at goal step " << found->goal_step << ":\n"
        << serialize_level(found->div.predicted[found->goal_step]);
    out << "\npredicted state at invalid step " << found->invalid_step << " (violations:";
    for (Violation v : validate(found->div.predicted[found->invalid_step]))
        out << ' ' << violation_name(v);
    out << "):\n" << serialize_level(found->div.predicted[found->invalid_step]);

    report(10, true,
           fmt("divergence phenomenon: %s on %s diverges at step %d, real goal registered "
               "at step %d, invalid at step %d (archived)",
               found->model->name.c_str(), found->level.c_str(), *found->div.step,
               found->goal_step, found->invalid_step));
}

void criterion_11_throughput(const fs::path& out_dir) {
    ExperimentConfig config = default_config();
    config.train_levels = tt::data_dir() / "train.txt";
    config.easy_levels = tt::data_dir() / "easy.txt";
    config.hard_levels = tt::data_dir() / "hard.txt";
    config.out_dir = out_dir;
    config.seed = kSeed;

    std::ostringstream log;
    const BenchReport report_data = run_bench(config, log);
    const bool pass = report_data.ticks_per_second >= 5000.0;
    report(11, pass,
           fmt("throughput: %.0f ticks/s over %llu steps (gate: 5000)",
               report_data.ticks_per_second,
               static_cast<unsigned long long>(report_data.steps)));
}

}  // namespace

int main(int argc, char** argv) {
    fs::path out_dir = "acceptance_out";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--out") == 0) out_dir = argv[i + 1];
    fs::create_directories(out_dir);

    const LevelSet train = tt::load_set("train");
    const LevelSet easy = tt::load_set("easy");
    const LevelSet hard = tt::load_set("hard");

    criterion_1_bfs_oracle({&train, &easy, &hard});

    // the experiment protocol: 100 playouts x 100 steps per level
    const auto t_collect = std::chrono::steady_clock::now();
    const TransitionDataset train_data =
        collect(train, 100, 100, derive_seed(kSeed, {kSeedCollect, 0}), 0);
    const TransitionDataset hard_data =
        collect(hard, 100, 100, derive_seed(kSeed, {kSeedCollect, 2}), 0);
    const double collect_seconds = seconds_since(t_collect);
    std::printf("-- collected %zu train and %zu hard transitions in %.1f s\n",
                train_data.records.size(), hard_data.records.size(), collect_seconds);
    std::fflush(stdout);

    criterion_2_locality(train_data, hard_data);
    criterion_3_training_reproduction(train_data);
    const auto models = criterion_4_heldout_band(train_data, hard_data, collect_seconds);
    criterion_5_static_identity(hard_data);
    criterion_6_baseline_ordering(easy, models);
    criterion_7_pattern_monotonicity(models);
    criterion_8_elitism(train);
    criterion_9_ntbea_sanity();
    criterion_10_divergence_phenomenon(hard, easy, hard_data, models, out_dir);
    criterion_11_throughput(out_dir);

    int failed = 0;
    for (const auto& c : g_results) failed += !c.pass;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
                g_results.size());
    return failed == 0 ? 0 : 1;
}

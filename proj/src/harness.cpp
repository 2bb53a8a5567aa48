#include "sokofm/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sokofm/binio.hpp"
#include "sokofm/parallel.hpp"
#include "sokofm/rng.hpp"

namespace sokofm {

namespace {

struct Playout {
    GameState start;
    std::vector<Action> actions;
};

/// Replays a playout from its start state, resetting on wins, and appends
/// every transition. This is the single definition of the collection loop;
/// collect() and dataset loading both go through it.
void replay_playout(const Playout& playout, std::vector<Transition>& out) {
    GameState state = playout.start;
    for (Action a : playout.actions) {
        GameState next = step(state, a);
        const bool won = is_win(next);
        out.push_back(Transition{std::move(state), a, next});
        state = won ? playout.start : std::move(next);
    }
}

std::vector<Playout> roll_playouts(const LevelSet& levels, int playouts, int steps,
                                   std::uint64_t seed) {
    std::vector<Playout> out;
    out.reserve(static_cast<std::size_t>(levels.levels.size()) * playouts);
    for (std::size_t li = 0; li < levels.levels.size(); ++li) {
        for (int pi = 0; pi < playouts; ++pi) {
            Rng rng(derive_seed(seed, {kSeedCollect, li, static_cast<std::uint64_t>(pi)}));
            Playout p;
            p.start = levels.levels[li].state;
            p.start.tick = 0;
            p.actions.resize(steps);
            for (auto& a : p.actions) a = random_action(rng);
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

TransitionDataset collect(const LevelSet& levels, int playouts, int steps, std::uint64_t seed,
                          int jobs) {
    if (levels.levels.empty()) throw std::invalid_argument("collect: empty level set");
    if (playouts < 1 || steps < 1)
        throw std::invalid_argument("collect: playouts and steps must be positive");

    const auto playout_list = roll_playouts(levels, playouts, steps, seed);

    std::vector<std::vector<Transition>> per_playout(playout_list.size());
    parallel_for(playout_list.size(), jobs, [&](std::size_t i) {
        per_playout[i].reserve(playout_list[i].actions.size());
        replay_playout(playout_list[i], per_playout[i]);
    });

    TransitionDataset data;
    data.provenance = {levels.name, static_cast<std::uint32_t>(playouts),
                       static_cast<std::uint32_t>(steps), seed};
    data.records.reserve(playout_list.size() * static_cast<std::size_t>(steps));
    for (auto& chunk : per_playout)
        for (auto& t : chunk) data.records.push_back(std::move(t));
    return data;
}

// ---------------------------------------------------------------------------
// dataset files

namespace {
constexpr std::uint32_t kDatasetMagic = 0x54464d53;  // "SMFT"
constexpr std::uint32_t kDatasetVersion = 1;
}  // namespace

void save_dataset(const TransitionDataset& data, std::ostream& out) {
    binio::put_u32(out, kDatasetMagic);
    binio::put_u32(out, kDatasetVersion);
    binio::put_string(out, data.provenance.level_set);
    binio::put_u32(out, data.provenance.playouts);
    binio::put_u32(out, data.provenance.steps);
    binio::put_u64(out, data.provenance.seed);

    // segment the record stream back into playouts: a playout starts at every
    // multiple of `steps`
    const std::uint32_t steps = data.provenance.steps;
    if (steps == 0 || data.records.size() % steps != 0)
        throw std::runtime_error("save_dataset: record count does not match provenance");
    const auto n_playouts = static_cast<std::uint32_t>(data.records.size() / steps);
    binio::put_u32(out, n_playouts);
    for (std::uint32_t p = 0; p < n_playouts; ++p) {
        const GameState& start = data.records[static_cast<std::size_t>(p) * steps].prev;
        binio::put_u16(out, start.width);
        binio::put_u16(out, start.height);
        for (Tile t : start.tiles) binio::put_u8(out, static_cast<std::uint8_t>(t));
        for (std::uint32_t s = 0; s < steps; ++s)
            binio::put_u8(out, static_cast<std::uint8_t>(
                                   data.records[static_cast<std::size_t>(p) * steps + s].action));
    }
}

TransitionDataset load_dataset(std::istream& in) {
    if (binio::get_u32(in) != kDatasetMagic)
        throw std::runtime_error("dataset file: bad magic");
    if (binio::get_u32(in) != kDatasetVersion)
        throw std::runtime_error("dataset file: unsupported version");

    TransitionDataset data;
    data.provenance.level_set = binio::get_string(in);
    data.provenance.playouts = binio::get_u32(in);
    data.provenance.steps = binio::get_u32(in);
    data.provenance.seed = binio::get_u64(in);

    const auto n_playouts = binio::get_u32(in);
    data.records.reserve(static_cast<std::size_t>(n_playouts) * data.provenance.steps);
    for (std::uint32_t p = 0; p < n_playouts; ++p) {
        Playout playout;
        playout.start.width = binio::get_u16(in);
        playout.start.height = binio::get_u16(in);
        playout.start.tiles.resize(static_cast<std::size_t>(playout.start.width) *
                                   playout.start.height);
        for (auto& t : playout.start.tiles) {
            const auto v = binio::get_u8(in);
            if (v >= kTileCount) throw std::runtime_error("dataset file: bad tile value");
            t = static_cast<Tile>(v);
        }
        playout.actions.resize(data.provenance.steps);
        for (auto& a : playout.actions) {
            const auto v = binio::get_u8(in);
            if (v >= kActionCount) throw std::runtime_error("dataset file: bad action value");
            a = static_cast<Action>(v);
        }
        replay_playout(playout, data.records);
    }
    return data;
}

void save_dataset(const TransitionDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
    save_dataset(data, out);
}

TransitionDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
    try {
        return load_dataset(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// evaluation

double accuracy(const ForwardModel& model, const TransitionDataset& data, int jobs) {
    if (data.records.empty()) throw std::invalid_argument("accuracy: empty dataset");

    // correct-tile counts are integers, so summing per-record fractions in
    // record order afterwards keeps the result independent of the job count
    std::vector<std::uint32_t> correct(data.records.size());
    parallel_for(data.records.size(), jobs, [&](std::size_t i) {
        const Transition& t = data.records[i];
        const GameState predicted = model.predict_grid(t.prev, t.action);
        std::uint32_t n = 0;
        for (std::size_t c = 0; c < predicted.tiles.size(); ++c)
            n += predicted.tiles[c] == t.next.tiles[c];
        correct[i] = n;
    });

    double sum = 0.0;
    for (std::size_t i = 0; i < data.records.size(); ++i)
        sum += static_cast<double>(correct[i]) /
               static_cast<double>(data.records[i].prev.tiles.size());
    return sum / static_cast<double>(data.records.size());
}

PatternTable build_pattern_table(const TransitionDataset& data, const PatternSpec& spec) {
    PatternTable table(spec);
    const auto offs = offsets(spec);
    std::vector<Tile> cells(offs.size());
    for (const Transition& t : data.records) {
        for (int y = 0; y < t.prev.height; ++y) {
            for (int x = 0; x < t.prev.width; ++x) {
                extract_cells(t.prev, x, y, offs, cells.data());
                table.add(t.action, cells, t.next.at(x, y));
            }
        }
    }
    return table;
}

PlayResult play_eval(const AgentParams& params, const ForwardModel& model,
                     const LevelSet& levels, int repeats, int max_steps, std::uint64_t seed,
                     int jobs) {
    if (levels.levels.empty()) throw std::invalid_argument("play_eval: empty level set");
    if (repeats < 1) throw std::invalid_argument("play_eval: repeats must be positive");
    if (max_steps < 1) throw std::invalid_argument("play_eval: max_steps must be positive");

    const std::size_t n_levels = levels.levels.size();
    PlayResult result;
    result.scores.assign(n_levels, std::vector<int>(repeats, 0));
    result.episode_steps.assign(n_levels, std::vector<int>(repeats, 0));

    parallel_for(n_levels * static_cast<std::size_t>(repeats), jobs, [&](std::size_t task) {
        const std::size_t li = task / repeats;
        const int ri = static_cast<int>(task % repeats);
        Rng rng(derive_seed(seed, {kSeedPlay, li, static_cast<std::uint64_t>(ri)}));

        GameState state = levels.levels[li].state;
        state.tick = 0;
        ActionSequence carried;
        int steps_taken = 0;
        for (int s = 0; s < max_steps && !is_win(state); ++s) {
            Decision d = decide(state, model, params, rng, carried.empty() ? nullptr : &carried);
            carried = std::move(d.carried);
            state = step(state, d.action);
            ++steps_taken;
        }
        result.scores[li][ri] = score(state);
        result.episode_steps[li][ri] = steps_taken;
    });

    result.per_level_mean.resize(n_levels);
    double total = 0.0;
    for (std::size_t li = 0; li < n_levels; ++li) {
        double level_sum = 0.0;
        for (int s : result.scores[li]) level_sum += s;
        result.per_level_mean[li] = level_sum / repeats;
        total += level_sum;
    }
    result.mean_score = total / (static_cast<double>(n_levels) * repeats);
    return result;
}

DivergenceResult divergence(const ForwardModel& model, const GameState& state,
                            const ActionSequence& actions) {
    DivergenceResult result;
    result.predicted.reserve(actions.size() + 1);
    result.actual.reserve(actions.size() + 1);
    result.predicted.push_back(state);
    result.actual.push_back(state);

    for (std::size_t i = 0; i < actions.size(); ++i) {
        result.predicted.push_back(model.predict_grid(result.predicted.back(), actions[i]));
        result.actual.push_back(step(result.actual.back(), actions[i]));
        if (!result.step && !(result.predicted.back() == result.actual.back()))
            result.step = static_cast<int>(i) + 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// result rows

const char* const kResultsCsvHeader =
    "model,shape,span,level_set,accuracy,mean_score,model_size,seed";

std::string format_result_row(const ResultRow& row) {
    auto fmt4 = [](const std::optional<double>& v) -> std::string {
        if (!v) return "";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", *v);
        return buf;
    };
    std::ostringstream out;
    out << row.model << ',' << row.shape << ',' << row.span << ',' << row.level_set << ','
        << fmt4(row.accuracy) << ',' << fmt4(row.mean_score) << ',' << row.model_size << ','
        << row.seed;
    return out.str();
}

}  // namespace sokofm

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sokofm/agent.hpp"
#include "sokofm/engine.hpp"
#include "sokofm/levels.hpp"
#include "sokofm/models.hpp"

namespace sokofm {

// seed-derivation purpose tags
inline constexpr std::uint64_t kSeedCollect = 1;
inline constexpr std::uint64_t kSeedPlay = 2;
inline constexpr std::uint64_t kSeedTune = 3;
inline constexpr std::uint64_t kSeedBench = 4;

struct Transition {
    GameState prev;
    Action action = Action::Up;
    GameState next;
};

struct DatasetProvenance {
    std::string level_set;
    std::uint32_t playouts = 0;   // per level
    std::uint32_t steps = 0;      // per playout
    std::uint64_t seed = 0;
};

struct TransitionDataset {
    DatasetProvenance provenance;
    std::vector<Transition> records;
};

/// Random-agent data collection: `playouts` episodes of `steps` uniform
/// random actions per level, resetting to the level start whenever a win
/// state is reached (the winning transition is still recorded). Records are
/// ordered by (level, playout, step) and depend only on the seed.
TransitionDataset collect(const LevelSet& levels, int playouts, int steps, std::uint64_t seed,
                          int jobs = 1);

// Dataset files store each playout's start grid and action string; loading
// replays them through the engine, so records always satisfy
// next == step(prev, action).
void save_dataset(const TransitionDataset& data, std::ostream& out);
void save_dataset(const TransitionDataset& data, const std::filesystem::path& path);
TransitionDataset load_dataset(std::istream& in);
TransitionDataset load_dataset(const std::filesystem::path& path);

/// Mean over records of (correctly predicted tiles / total tiles); tick is
/// ignored. Deterministic regardless of `jobs`.
double accuracy(const ForwardModel& model, const TransitionDataset& data, int jobs = 1);

/// Build the deduplicated training table for one pattern spec from a
/// transition dataset (one example per grid cell per record).
PatternTable build_pattern_table(const TransitionDataset& data, const PatternSpec& spec);

struct PlayResult {
    double mean_score = 0.0;                   // over all (level, repeat) episodes
    std::vector<double> per_level_mean;
    std::vector<std::vector<int>> scores;      // [level][repeat], final true score
    std::vector<std::vector<int>> episode_steps;  // [level][repeat]
};

/// Play every level `repeats` times with the RHEA agent deciding through
/// `model`; the environment itself always advances with the true engine.
/// Episodes end on a win or after max_steps.
PlayResult play_eval(const AgentParams& params, const ForwardModel& model,
                     const LevelSet& levels, int repeats, int max_steps, std::uint64_t seed,
                     int jobs = 1);

struct DivergenceResult {
    std::optional<int> step;            // 1-based index of the first differing grid
    std::vector<GameState> predicted;   // length actions+1, starts at the input state
    std::vector<GameState> actual;
};

/// Roll the model and the true engine through the same actions and report
/// where the trajectories first differ.
DivergenceResult divergence(const ForwardModel& model, const GameState& state,
                            const ActionSequence& actions);

struct ResultRow {
    std::string model;                  // static | true | exact | tree
    std::string shape;                  // cross | square | "-" for baselines
    int span = 0;                       // 0 for baselines
    std::string level_set;
    std::optional<double> accuracy;
    std::optional<double> mean_score;
    std::uint64_t model_size = 0;       // unique patterns or tree nodes
    std::uint64_t seed = 0;
};

extern const char* const kResultsCsvHeader;

/// One CSV line in the fixed column order; floats with 4 decimals, absent
/// metrics as empty fields.
std::string format_result_row(const ResultRow& row);

}  // namespace sokofm

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sokofm/engine.hpp"
#include "sokofm/patterns.hpp"

namespace sokofm {

struct SpecMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyDatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelKind : std::uint8_t { Static = 0, True = 1, ExactMatch = 2, Tree = 3 };

const char* model_kind_name(ModelKind k);

/// One-step forward model: predicts the full next grid for a state/action
/// pair. Predictions from learned models may violate game invariants (e.g.
/// several avatars); score() still counts boxes on targets in such grids.
class ForwardModel {
public:
    virtual ~ForwardModel() = default;

    virtual GameState predict_grid(const GameState& state, Action action) const = 0;
    virtual ModelKind kind() const = 0;
    virtual std::string descriptor() const = 0;

    /// True only for the engine adapter: its outputs are real game states, so
    /// rollouts may stop early on a win.
    virtual bool produces_valid_states() const { return false; }
};

/// Baseline predicting no change.
class StaticModel : public ForwardModel {
public:
    GameState predict_grid(const GameState& state, Action action) const override;
    ModelKind kind() const override { return ModelKind::Static; }
    std::string descriptor() const override { return "static"; }
};

/// Adapter exposing the true engine as a forward model.
class TrueModel : public ForwardModel {
public:
    GameState predict_grid(const GameState& state, Action action) const override;
    ModelKind kind() const override { return ModelKind::True; }
    std::string descriptor() const override { return "true"; }
    bool produces_valid_states() const override { return true; }
};

/// Per-pattern outcome distribution of the centre cell, with the ingestion
/// index of each label's first observation for deterministic tie-breaking.
struct CellOutcome {
    static constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();

    std::array<std::uint32_t, kTileCount> count{};
    std::array<std::uint32_t, kTileCount> first{kNever, kNever, kNever, kNever,
                                                kNever, kNever, kNever};

    /// Highest count wins; ties break toward the earliest-observed label.
    Tile argmax() const;
};

/// Deduplicated (pattern -> outcome distribution) table built from training
/// examples; the shared substrate for both learners.
class PatternTable {
public:
    explicit PatternTable(PatternSpec spec);

    void add(const TrainingExample& example);
    void add(Action action, std::span<const Tile> cells, Tile label);

    const PatternSpec& spec() const { return spec_; }
    std::uint64_t sample_count() const { return samples_; }
    std::size_t unique_pattern_count() const { return table_.size(); }

    using Map = std::unordered_map<PatternKey, CellOutcome, PatternKeyHash>;
    const Map& entries() const { return table_; }

    /// Rebuild a table from serialized entries.
    static PatternTable from_entries(PatternSpec spec, std::uint64_t samples,
                                     std::vector<std::pair<PatternKey, CellOutcome>> entries);

private:
    PatternSpec spec_;
    Map table_;
    std::uint64_t samples_ = 0;
    PatternKey scratch_;
};

/// Hash-map learner: exact pattern lookup returning the most frequently
/// observed next centre tile; unseen patterns predict no change.
class ExactMatchModel : public ForwardModel {
public:
    explicit ExactMatchModel(PatternSpec spec);
    explicit ExactMatchModel(PatternTable table);

    Tile predict_center(const PatternKey& key) const;

    GameState predict_grid(const GameState& state, Action action) const override;
    ModelKind kind() const override { return ModelKind::ExactMatch; }
    std::string descriptor() const override;

    const PatternSpec& spec() const { return table_.spec(); }
    std::size_t unique_pattern_count() const { return table_.unique_pattern_count(); }
    std::uint64_t sample_count() const { return table_.sample_count(); }
    const PatternTable& table() const { return table_; }

private:
    PatternTable table_;
    std::vector<Offset> offsets_;
    int centre_;
};

/// Unpruned multiway decision tree over the action attribute and the pattern
/// cell attributes. Leaves and internal fallbacks store the first-occurring
/// label, matching the hash-map learner's tie-break convention.
class TreeModel : public ForwardModel {
public:
    struct Node {
        // attribute 0 is the action, attribute 1+i is cell i; -1 marks a leaf
        std::int16_t attribute = -1;
        Tile label = Tile::Wall;  // leaf value, and fallback for unseen branch values
        std::array<std::int32_t, kTileCount> child{-1, -1, -1, -1, -1, -1, -1};
    };

    TreeModel(PatternSpec spec, std::vector<Node> nodes, std::uint64_t samples);

    Tile predict_center(const PatternKey& key) const;

    GameState predict_grid(const GameState& state, Action action) const override;
    ModelKind kind() const override { return ModelKind::Tree; }
    std::string descriptor() const override;

    const PatternSpec& spec() const { return spec_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::uint64_t sample_count() const { return samples_; }
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    Tile predict_cells(Action action, std::span<const Tile> cells) const;

    PatternSpec spec_;
    std::vector<Offset> offsets_;
    int centre_;
    std::vector<Node> nodes_;
    std::uint64_t samples_ = 0;
};

ExactMatchModel train_exact(const std::vector<TrainingExample>& dataset, const PatternSpec& spec);
ExactMatchModel train_exact(PatternTable table);

/// Recursive induction maximizing information gain (base-2 entropy) with
/// multiway splits on observed values; growth stops at purity, attribute
/// exhaustion, or zero gain.
TreeModel train_tree(const std::vector<TrainingExample>& dataset, const PatternSpec& spec);
TreeModel train_tree(const PatternTable& table);

// Versioned binary model files, reusable between CLI commands. Baseline
// models are constructed directly and are not serializable.
void save_model(const ForwardModel& model, std::ostream& out);
void save_model(const ForwardModel& model, const std::filesystem::path& path);
std::unique_ptr<ForwardModel> load_model(std::istream& in);
std::unique_ptr<ForwardModel> load_model(const std::filesystem::path& path);

}  // namespace sokofm

#include "sokofm/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sokofm/binio.hpp"

namespace sokofm {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Static: return "static";
        case ModelKind::True: return "true";
        case ModelKind::ExactMatch: return "exact";
        case ModelKind::Tree: return "tree";
    }
    return "?";
}

GameState StaticModel::predict_grid(const GameState& state, Action) const {
    GameState out = state;
    out.tick = state.tick + 1;
    return out;
}

GameState TrueModel::predict_grid(const GameState& state, Action action) const {
    return step(state, action);
}

Tile CellOutcome::argmax() const {
    int best = 0;
    for (int t = 1; t < kTileCount; ++t) {
        if (count[t] > count[best] || (count[t] == count[best] && first[t] < first[best]))
            best = t;
    }
    return static_cast<Tile>(best);
}

PatternTable::PatternTable(PatternSpec spec) : spec_(spec) {
    if (spec.span < 1) throw SpecMismatchError("pattern span must be positive");
    scratch_.cells.resize(spec.cell_count());
}

void PatternTable::add(const TrainingExample& example) {
    add(example.key.action, example.key.cells, example.label);
}

PatternTable PatternTable::from_entries(PatternSpec spec, std::uint64_t samples,
                                        std::vector<std::pair<PatternKey, CellOutcome>> entries) {
    PatternTable table(spec);
    table.samples_ = samples;
    for (auto& [key, outcome] : entries) {
        if (static_cast<int>(key.cells.size()) != spec.cell_count())
            throw SpecMismatchError("table entry does not match the pattern spec");
        table.table_.emplace(std::move(key), outcome);
    }
    return table;
}

void PatternTable::add(Action action, std::span<const Tile> cells, Tile label) {
    if (static_cast<int>(cells.size()) != spec_.cell_count())
        throw SpecMismatchError("training example does not match the pattern spec");

    scratch_.action = action;
    std::copy(cells.begin(), cells.end(), scratch_.cells.begin());

    auto it = table_.find(scratch_);
    if (it == table_.end()) it = table_.emplace(scratch_, CellOutcome{}).first;

    auto& outcome = it->second;
    const auto l = static_cast<std::size_t>(label);
    if (outcome.count[l] == 0)
        outcome.first[l] = static_cast<std::uint32_t>(samples_);
    ++outcome.count[l];
    ++samples_;
}

// ---------------------------------------------------------------------------
// hash map model

ExactMatchModel::ExactMatchModel(PatternSpec spec) : ExactMatchModel(PatternTable(spec)) {}

ExactMatchModel::ExactMatchModel(PatternTable table)
    : table_(std::move(table)),
      offsets_(offsets(table_.spec())),
      centre_(centre_index(table_.spec())) {}

Tile ExactMatchModel::predict_center(const PatternKey& key) const {
    if (static_cast<int>(key.cells.size()) != spec().cell_count())
        throw SpecMismatchError("pattern key does not match the model's spec");
    auto it = table_.entries().find(key);
    if (it == table_.entries().end()) return key.cells[centre_];
    return it->second.argmax();
}

GameState ExactMatchModel::predict_grid(const GameState& state, Action action) const {
    GameState out = state;
    out.tick = state.tick + 1;

    PatternKey key;
    key.action = action;
    key.cells.resize(offsets_.size());
    const auto& table = table_.entries();
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            extract_cells(state, x, y, offsets_, key.cells.data());
            auto it = table.find(key);
            out.set(x, y, it == table.end() ? key.cells[centre_] : it->second.argmax());
        }
    }
    return out;
}

std::string ExactMatchModel::descriptor() const {
    std::ostringstream s;
    s << "exact(" << shape_name(spec().shape) << ", span " << spec().span << ")";
    return s.str();
}

ExactMatchModel train_exact(PatternTable table) { return ExactMatchModel(std::move(table)); }

ExactMatchModel train_exact(const std::vector<TrainingExample>& dataset,
                            const PatternSpec& spec) {
    PatternTable table(spec);
    for (const auto& ex : dataset) table.add(ex);
    return ExactMatchModel(std::move(table));
}

// ---------------------------------------------------------------------------
// decision tree model

namespace {

// One weighted unique (pattern, label) observation. Tree induction works on
// these instead of raw examples; gains are weighted by multiplicity and the
// first-occurrence index decides leaf/fallback labels.
struct Item {
    const PatternKey* key;
    std::uint8_t label;
    std::uint32_t count;
    std::uint32_t first;
};

int item_value(const Item& it, int attribute) {
    return attribute == 0 ? static_cast<int>(it.key->action)
                          : static_cast<int>(it.key->cells[attribute - 1]);
}

double entropy(const std::array<std::uint64_t, kTileCount>& counts, std::uint64_t total) {
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

constexpr double kGainEpsilon = 1e-12;

class TreeBuilder {
public:
    TreeBuilder(std::vector<Item> items, int n_attributes)
        : items_(std::move(items)), n_attributes_(n_attributes) {}

    std::vector<TreeModel::Node> build() {
        std::vector<bool> used(n_attributes_, false);
        build_node(0, items_.size(), used);
        return std::move(nodes_);
    }

private:
    // builds the node for items_[lo, hi) and returns its index
    std::int32_t build_node(std::size_t lo, std::size_t hi, std::vector<bool>& used) {
        std::array<std::uint64_t, kTileCount> label_counts{};
        std::uint64_t total = 0;
        std::uint32_t first_seen = CellOutcome::kNever;
        Tile first_label = Tile::Wall;
        int distinct_labels = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const Item& it = items_[i];
            if (label_counts[it.label] == 0) ++distinct_labels;
            label_counts[it.label] += it.count;
            total += it.count;
            if (it.first < first_seen) {
                first_seen = it.first;
                first_label = static_cast<Tile>(it.label);
            }
        }

        const auto node_index = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[node_index].label = first_label;

        if (distinct_labels <= 1) return node_index;  // pure leaf

        // pick the available attribute with maximal information gain; ties
        // break toward the action attribute, then lower cell indices
        const double h = entropy(label_counts, total);
        int best_attr = -1;
        double best_gain = 0.0;
        for (int a = 0; a < n_attributes_; ++a) {
            if (used[a]) continue;
            std::array<std::array<std::uint64_t, kTileCount>, kTileCount> by_value{};
            std::array<std::uint64_t, kTileCount> value_total{};
            for (std::size_t i = lo; i < hi; ++i) {
                const Item& it = items_[i];
                const int v = item_value(it, a);
                by_value[v][it.label] += it.count;
                value_total[v] += it.count;
            }
            double conditional = 0.0;
            for (int v = 0; v < kTileCount; ++v) {
                if (value_total[v] == 0) continue;
                conditional += static_cast<double>(value_total[v]) / static_cast<double>(total) *
                               entropy(by_value[v], value_total[v]);
            }
            const double gain = h - conditional;
            if (gain > best_gain + kGainEpsilon) {
                best_gain = gain;
                best_attr = a;
            }
        }
        if (best_attr < 0) return node_index;  // attributes exhausted or zero gain

        nodes_[node_index].attribute = static_cast<std::int16_t>(best_attr);

        // stable multiway partition on the chosen attribute's observed values
        std::array<std::size_t, kTileCount> bucket_size{};
        for (std::size_t i = lo; i < hi; ++i)
            ++bucket_size[item_value(items_[i], best_attr)];
        std::array<std::size_t, kTileCount> bucket_lo{};
        std::size_t at = lo;
        for (int v = 0; v < kTileCount; ++v) {
            bucket_lo[v] = at;
            at += bucket_size[v];
        }
        {
            std::vector<Item> tmp(items_.begin() + lo, items_.begin() + hi);
            auto cursor = bucket_lo;
            for (const Item& it : tmp) items_[cursor[item_value(it, best_attr)]++] = it;
        }

        used[best_attr] = true;
        for (int v = 0; v < kTileCount; ++v) {
            if (bucket_size[v] == 0) continue;
            nodes_[node_index].child[v] =
                build_node(bucket_lo[v], bucket_lo[v] + bucket_size[v], used);
        }
        used[best_attr] = false;
        return node_index;
    }

    std::vector<Item> items_;
    int n_attributes_;
    std::vector<TreeModel::Node> nodes_;
};

}  // namespace

TreeModel::TreeModel(PatternSpec spec, std::vector<Node> nodes, std::uint64_t samples)
    : spec_(spec),
      offsets_(offsets(spec)),
      centre_(centre_index(spec)),
      nodes_(std::move(nodes)),
      samples_(samples) {
    if (nodes_.empty()) throw EmptyDatasetError("tree model has no nodes");
}

Tile TreeModel::predict_cells(Action action, std::span<const Tile> cells) const {
    const Node* node = &nodes_[0];
    while (node->attribute >= 0) {
        const int v = node->attribute == 0 ? static_cast<int>(action)
                                           : static_cast<int>(cells[node->attribute - 1]);
        const std::int32_t next = node->child[v];
        if (next < 0) return node->label;  // unseen branch value: fall back
        node = &nodes_[next];
    }
    return node->label;
}

Tile TreeModel::predict_center(const PatternKey& key) const {
    if (static_cast<int>(key.cells.size()) != spec_.cell_count())
        throw SpecMismatchError("pattern key does not match the model's spec");
    return predict_cells(key.action, key.cells);
}

GameState TreeModel::predict_grid(const GameState& state, Action action) const {
    GameState out = state;
    out.tick = state.tick + 1;

    std::vector<Tile> cells(offsets_.size());
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            extract_cells(state, x, y, offsets_, cells.data());
            out.set(x, y, predict_cells(action, cells));
        }
    }
    return out;
}

std::string TreeModel::descriptor() const {
    std::ostringstream s;
    s << "tree(" << shape_name(spec_.shape) << ", span " << spec_.span << ")";
    return s.str();
}

TreeModel train_tree(const PatternTable& table) {
    if (table.sample_count() == 0) throw EmptyDatasetError("train_tree: empty dataset");

    std::vector<Item> items;
    items.reserve(table.unique_pattern_count());
    for (const auto& [key, outcome] : table.entries()) {
        for (int l = 0; l < kTileCount; ++l) {
            if (outcome.count[l] == 0) continue;
            items.push_back(Item{&key, static_cast<std::uint8_t>(l), outcome.count[l],
                                 outcome.first[l]});
        }
    }
    // sort by first occurrence: makes induction independent of hash order
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.first < b.first; });

    TreeBuilder builder(std::move(items), 1 + table.spec().cell_count());
    return TreeModel(table.spec(), builder.build(), table.sample_count());
}

TreeModel train_tree(const std::vector<TrainingExample>& dataset, const PatternSpec& spec) {
    if (dataset.empty()) throw EmptyDatasetError("train_tree: empty dataset");
    PatternTable table(spec);
    for (const auto& ex : dataset) table.add(ex);
    return train_tree(table);
}

// ---------------------------------------------------------------------------
// model files

namespace {
constexpr std::uint32_t kModelMagic = 0x4d4d4653;  // "SFMM"
constexpr std::uint32_t kModelVersion = 1;
}  // namespace

void save_model(const ForwardModel& model, std::ostream& out) {
    binio::put_u32(out, kModelMagic);
    binio::put_u32(out, kModelVersion);
    binio::put_u8(out, static_cast<std::uint8_t>(model.kind()));

    if (model.kind() == ModelKind::ExactMatch) {
        const auto& m = static_cast<const ExactMatchModel&>(model);
        binio::put_u8(out, static_cast<std::uint8_t>(m.spec().shape));
        binio::put_u32(out, static_cast<std::uint32_t>(m.spec().span));
        binio::put_u64(out, m.sample_count());
        binio::put_u64(out, m.unique_pattern_count());

        // write entries in key order so identical models produce identical bytes
        std::vector<const PatternTable::Map::value_type*> entries;
        entries.reserve(m.unique_pattern_count());
        for (const auto& e : m.table().entries()) entries.push_back(&e);
        std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
            if (a->first.action != b->first.action) return a->first.action < b->first.action;
            return a->first.cells < b->first.cells;
        });
        for (const auto* e : entries) {
            binio::put_u8(out, static_cast<std::uint8_t>(e->first.action));
            for (Tile t : e->first.cells) binio::put_u8(out, static_cast<std::uint8_t>(t));
            for (int l = 0; l < kTileCount; ++l) {
                binio::put_u32(out, e->second.count[l]);
                binio::put_u32(out, e->second.first[l]);
            }
        }
    } else if (model.kind() == ModelKind::Tree) {
        const auto& m = static_cast<const TreeModel&>(model);
        binio::put_u8(out, static_cast<std::uint8_t>(m.spec().shape));
        binio::put_u32(out, static_cast<std::uint32_t>(m.spec().span));
        binio::put_u64(out, m.sample_count());
        binio::put_u64(out, m.node_count());
        for (const auto& n : m.nodes()) {
            binio::put_u16(out, static_cast<std::uint16_t>(n.attribute));
            binio::put_u8(out, static_cast<std::uint8_t>(n.label));
            for (auto c : n.child) binio::put_u32(out, static_cast<std::uint32_t>(c));
        }
    } else {
        throw std::runtime_error(std::string("model kind is not serializable: ") +
                                 model_kind_name(model.kind()));
    }
}

std::unique_ptr<ForwardModel> load_model(std::istream& in) {
    if (binio::get_u32(in) != kModelMagic)
        throw std::runtime_error("model file: bad magic");
    if (binio::get_u32(in) != kModelVersion)
        throw std::runtime_error("model file: unsupported version");

    const auto kind = static_cast<ModelKind>(binio::get_u8(in));
    if (kind == ModelKind::ExactMatch) {
        PatternSpec spec;
        spec.shape = static_cast<PatternShape>(binio::get_u8(in));
        spec.span = static_cast<int>(binio::get_u32(in));
        const auto samples = binio::get_u64(in);
        const auto n_entries = binio::get_u64(in);

        PatternKey key;
        key.cells.resize(spec.cell_count());
        std::vector<std::pair<PatternKey, CellOutcome>> loaded;
        loaded.reserve(n_entries);
        for (std::uint64_t i = 0; i < n_entries; ++i) {
            key.action = static_cast<Action>(binio::get_u8(in));
            for (auto& c : key.cells) c = static_cast<Tile>(binio::get_u8(in));
            CellOutcome outcome;
            for (int l = 0; l < kTileCount; ++l) {
                outcome.count[l] = binio::get_u32(in);
                outcome.first[l] = binio::get_u32(in);
            }
            loaded.emplace_back(key, outcome);
        }
        return std::make_unique<ExactMatchModel>(
            PatternTable::from_entries(spec, samples, std::move(loaded)));
    }
    if (kind == ModelKind::Tree) {
        PatternSpec spec;
        spec.shape = static_cast<PatternShape>(binio::get_u8(in));
        spec.span = static_cast<int>(binio::get_u32(in));
        const auto samples = binio::get_u64(in);
        const auto n_nodes = binio::get_u64(in);
        std::vector<TreeModel::Node> nodes(n_nodes);
        for (auto& n : nodes) {
            n.attribute = static_cast<std::int16_t>(binio::get_u16(in));
            n.label = static_cast<Tile>(binio::get_u8(in));
            for (auto& c : n.child) c = static_cast<std::int32_t>(binio::get_u32(in));
        }
        return std::make_unique<TreeModel>(spec, std::move(nodes), samples);
    }
    throw std::runtime_error("model file: unknown model kind");
}

void save_model(const ForwardModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    save_model(model, out);
}

std::unique_ptr<ForwardModel> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    try {
        return load_model(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace sokofm

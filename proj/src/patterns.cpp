#include "sokofm/patterns.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace sokofm {

const char* shape_name(PatternShape s) {
    return s == PatternShape::Cross ? "cross" : "square";
}

PatternShape shape_from_name(const std::string& name) {
    if (name == "cross") return PatternShape::Cross;
    if (name == "square") return PatternShape::Square;
    throw std::runtime_error("unknown pattern shape: " + name);
}

std::vector<Offset> offsets(const PatternSpec& spec) {
    std::vector<Offset> out;
    if (spec.shape == PatternShape::Square) {
        out.reserve(spec.cell_count());
        for (int dy = -spec.span; dy <= spec.span; ++dy)
            for (int dx = -spec.span; dx <= spec.span; ++dx) out.push_back({dx, dy});
    } else {
        for (int dy = -spec.span; dy < 0; ++dy) out.push_back({0, dy});
        for (int dx = -spec.span; dx <= spec.span; ++dx) out.push_back({dx, 0});
        for (int dy = 1; dy <= spec.span; ++dy) out.push_back({0, dy});
    }
    return out;
}

int centre_index(const PatternSpec& spec) {
    // both shapes place (0,0) in the middle of the canonical order
    return spec.shape == PatternShape::Cross ? 2 * spec.span : spec.cell_count() / 2;
}

void extract_cells(const GameState& s, int x, int y, std::span<const Offset> offs, Tile* out) {
    for (std::size_t i = 0; i < offs.size(); ++i)
        out[i] = s.at_or_wall(x + offs[i].dx, y + offs[i].dy);
}

PatternKey extract(const GameState& s, int x, int y, Action action, const PatternSpec& spec) {
    PatternKey key;
    key.action = action;
    key.cells.resize(spec.cell_count());
    const auto offs = offsets(spec);
    extract_cells(s, x, y, offs, key.cells.data());
    return key;
}

std::vector<TrainingExample> extract_training(const GameState& prev, Action action,
                                              const GameState& next, const PatternSpec& spec) {
    if (prev.width != next.width || prev.height != next.height)
        throw DimensionMismatchError("extract_training: prev and next dimensions differ");

    const auto offs = offsets(spec);
    std::vector<TrainingExample> out;
    out.reserve(static_cast<std::size_t>(prev.width) * prev.height);
    for (int y = 0; y < prev.height; ++y) {
        for (int x = 0; x < prev.width; ++x) {
            TrainingExample ex;
            ex.key.action = action;
            ex.key.cells.resize(offs.size());
            extract_cells(prev, x, y, offs, ex.key.cells.data());
            ex.label = next.at(x, y);
            out.push_back(std::move(ex));
        }
    }
    return out;
}

namespace {
constexpr const char* kExamplesMagic = "sokofm-examples";
constexpr int kExamplesVersion = 1;
}  // namespace

void write_examples(std::ostream& out, const PatternSpec& spec,
                    std::span<const TrainingExample> examples) {
    out << kExamplesMagic << " v" << kExamplesVersion << " shape=" << shape_name(spec.shape)
        << " span=" << spec.span << "\n";
    for (const auto& ex : examples) {
        out << static_cast<int>(ex.key.action);
        for (Tile t : ex.key.cells) out << ' ' << static_cast<int>(t);
        out << ' ' << static_cast<int>(ex.label) << "\n";
    }
}

std::vector<TrainingExample> read_examples(std::istream& in, PatternSpec& spec_out) {
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("examples file: missing header");

    std::istringstream hs(header);
    std::string magic, version, shape_field, span_field;
    hs >> magic >> version >> shape_field >> span_field;
    if (magic != kExamplesMagic || version != "v1" || shape_field.rfind("shape=", 0) != 0 ||
        span_field.rfind("span=", 0) != 0)
        throw std::runtime_error("examples file: bad header: " + header);
    spec_out.shape = shape_from_name(shape_field.substr(6));
    spec_out.span = std::stoi(span_field.substr(5));
    if (spec_out.span < 1) throw std::runtime_error("examples file: bad span");

    const int ncells = spec_out.cell_count();
    std::vector<TrainingExample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        TrainingExample ex;
        int v = -1;
        if (!(ls >> v) || v < 0 || v >= kActionCount)
            throw std::runtime_error("examples file: bad action in record: " + line);
        ex.key.action = static_cast<Action>(v);
        ex.key.cells.reserve(ncells);
        for (int i = 0; i < ncells; ++i) {
            if (!(ls >> v) || v < 0 || v >= kTileCount)
                throw std::runtime_error("examples file: bad cell in record: " + line);
            ex.key.cells.push_back(static_cast<Tile>(v));
        }
        if (!(ls >> v) || v < 0 || v >= kTileCount)
            throw std::runtime_error("examples file: bad label in record: " + line);
        ex.label = static_cast<Tile>(v);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace sokofm

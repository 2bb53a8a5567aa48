#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sokofm/engine.hpp"

namespace sokofm {

enum class PatternShape : std::uint8_t { Cross = 0, Square = 1 };

const char* shape_name(PatternShape s);
PatternShape shape_from_name(const std::string& name);

/// Neighbourhood shape and radius. Cross covers the axis-aligned arms
/// (4*span+1 cells), square the full box ((2*span+1)^2 cells); both include
/// the centre cell.
struct PatternSpec {
    PatternShape shape = PatternShape::Cross;
    int span = 1;

    int cell_count() const {
        return shape == PatternShape::Cross ? 4 * span + 1 : (2 * span + 1) * (2 * span + 1);
    }
    bool operator==(const PatternSpec&) const = default;
};

/// Cell offsets of a pattern in canonical order: sorted by (dy, dx) ascending.
/// The order is a pure function of the spec, so keys are comparable across
/// processes.
std::vector<Offset> offsets(const PatternSpec& spec);

/// Index of the (0,0) offset within offsets(spec).
int centre_index(const PatternSpec& spec);

/// An observation key: the action taken plus the pattern's cell values in
/// canonical offset order.
struct PatternKey {
    Action action = Action::Up;
    std::vector<Tile> cells;

    bool operator==(const PatternKey&) const = default;
};

struct PatternKeyHash {
    std::size_t operator()(const PatternKey& k) const {
        // FNV-1a over the action byte and cell bytes
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint8_t b) {
            h ^= b;
            h *= 1099511628211ULL;
        };
        mix(static_cast<std::uint8_t>(k.action));
        for (Tile t : k.cells) mix(static_cast<std::uint8_t>(t));
        return static_cast<std::size_t>(h);
    }
};

struct TrainingExample {
    PatternKey key;
    Tile label = Tile::Wall;  // centre cell at t+1
};

struct DimensionMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Read the pattern's cells at (x, y); offsets outside the grid read as walls.
PatternKey extract(const GameState& s, int x, int y, Action action, const PatternSpec& spec);

/// Allocation-free variant: fills `out` (cell_count tiles) in canonical order.
void extract_cells(const GameState& s, int x, int y, std::span<const Offset> offs, Tile* out);

/// One example per grid cell; example labels are the next state's tiles.
std::vector<TrainingExample> extract_training(const GameState& prev, Action action,
                                              const GameState& next, const PatternSpec& spec);

// Line-based dataset file: a versioned header followed by one record per
// line (action, cells..., label as integers).
void write_examples(std::ostream& out, const PatternSpec& spec,
                    std::span<const TrainingExample> examples);
std::vector<TrainingExample> read_examples(std::istream& in, PatternSpec& spec_out);

}  // namespace sokofm

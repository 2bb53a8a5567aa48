#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sokofm {

/// The closed seven-symbol tile alphabet. The avatar symbol encodes the
/// terrain underneath it so that a single tile observation is Markovian.
enum class Tile : std::uint8_t {
    Wall = 0,
    Floor = 1,
    Target = 2,
    BoxOnFloor = 3,
    BoxOnTarget = 4,
    AvatarOnFloor = 5,
    AvatarOnTarget = 6,
};

inline constexpr int kTileCount = 7;

enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kActionCount = 4;
inline constexpr Action kAllActions[kActionCount] = {Action::Up, Action::Down,
                                                     Action::Left, Action::Right};

struct Offset {
    int dx = 0;
    int dy = 0;
    bool operator==(const Offset&) const = default;
};

Offset action_offset(Action a);
const char* tile_name(Tile t);
const char* action_name(Action a);

inline bool is_passable(Tile t) { return t == Tile::Floor || t == Tile::Target; }
inline bool is_box(Tile t) { return t == Tile::BoxOnFloor || t == Tile::BoxOnTarget; }
inline bool is_avatar(Tile t) { return t == Tile::AvatarOnFloor || t == Tile::AvatarOnTarget; }
inline bool on_target(Tile t) {
    return t == Tile::Target || t == Tile::BoxOnTarget || t == Tile::AvatarOnTarget;
}

/// Terrain left behind when a box or avatar leaves a cell.
inline Tile vacated(Tile t) { return on_target(t) ? Tile::Target : Tile::Floor; }
inline Tile with_box(Tile terrain) {
    return terrain == Tile::Target ? Tile::BoxOnTarget : Tile::BoxOnFloor;
}
inline Tile with_avatar(Tile terrain) {
    return terrain == Tile::Target ? Tile::AvatarOnTarget : Tile::AvatarOnFloor;
}

/// Row-major tile grid plus a step counter. Treated as an immutable value:
/// step() returns a new state. `tick` is episode bookkeeping only and is
/// excluded from equality.
struct GameState {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint32_t tick = 0;
    std::vector<Tile> tiles;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    Tile at(int x, int y) const { return tiles[index(x, y)]; }
    void set(int x, int y, Tile t) { tiles[index(x, y)] = t; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < static_cast<int>(width) && y >= 0 && y < static_cast<int>(height);
    }
    /// Cells outside the grid read as walls.
    Tile at_or_wall(int x, int y) const { return in_bounds(x, y) ? at(x, y) : Tile::Wall; }

    bool operator==(const GameState& o) const {
        return width == o.width && height == o.height && tiles == o.tiles;
    }
};

std::optional<Offset> find_avatar(const GameState& s);
int box_count(const GameState& s);
int target_count(const GameState& s);

/// One deterministic Sokoban step. Blocked moves (into a wall, or into a box
/// that cannot be pushed) leave the grid unchanged; the tick always advances.
GameState step(const GameState& s, Action a);

/// Number of boxes sitting on targets. Defined for arbitrary grids, including
/// invalid ones produced by learned models.
int score(const GameState& s);

/// True iff no box remains off-target.
bool is_win(const GameState& s);

}  // namespace sokofm

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sokofm/engine.hpp"

namespace sokofm {

// XSB character alphabet:
//   '#' wall   ' ' floor   '.' target   '$' box   '*' box on target
//   '@' avatar '+' avatar on target

struct LevelParseError : std::runtime_error {
    enum class Kind { UnknownCharacter, NoAvatar, MultipleAvatars, BoxTargetMismatch };

    LevelParseError(Kind k, std::string message, int line = -1, int column = -1)
        : std::runtime_error(std::move(message)), kind(k), line(line), column(column) {}

    Kind kind;
    int line;    // 0-based, -1 when not positional
    int column;  // 0-based
};

/// Parse XSB text into a GameState. Short lines are right-padded with walls
/// and the grid is wrapped in a wall ring if any boundary cell is not a wall.
GameState parse_level(const std::string& text);

/// Inverse of parse_level up to tick; emits one row per line plus a trailing
/// newline.
std::string serialize_level(const GameState& s);

enum class Violation {
    NoAvatar,
    MultipleAvatars,
    BoundaryNotWall,
    BoxTargetMismatch,
};

const char* violation_name(Violation v);

/// Empty iff the state satisfies the grid invariants (exactly one avatar,
/// walled boundary) and box count equals target count. Usable on arbitrary
/// grids, including invalid ones produced by learned models.
std::vector<Violation> validate(const GameState& s);

struct Level {
    std::string name;
    GameState state;
};

struct LevelSet {
    std::string name;
    std::vector<Level> levels;
};

GameState load_level_file(const std::filesystem::path& path);

/// Load a level-set manifest: one level file path per line, relative to the
/// manifest's directory; '#'-prefixed lines and blank lines are ignored.
/// Every level must validate and have at least one box.
LevelSet load_level_set(const std::filesystem::path& manifest_path);

}  // namespace sokofm

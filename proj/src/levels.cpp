#include "sokofm/levels.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sokofm {

namespace {

bool tile_from_char(char c, Tile& out) {
    switch (c) {
        case '#': out = Tile::Wall; return true;
        case ' ': out = Tile::Floor; return true;
        case '.': out = Tile::Target; return true;
        case '$': out = Tile::BoxOnFloor; return true;
        case '*': out = Tile::BoxOnTarget; return true;
        case '@': out = Tile::AvatarOnFloor; return true;
        case '+': out = Tile::AvatarOnTarget; return true;
        default: return false;
    }
}

char tile_to_char(Tile t) {
    switch (t) {
        case Tile::Wall: return '#';
        case Tile::Floor: return ' ';
        case Tile::Target: return '.';
        case Tile::BoxOnFloor: return '$';
        case Tile::BoxOnTarget: return '*';
        case Tile::AvatarOnFloor: return '@';
        case Tile::AvatarOnTarget: return '+';
    }
    return '?';
}

bool boundary_walled(const GameState& s) {
    for (int x = 0; x < s.width; ++x)
        if (s.at(x, 0) != Tile::Wall || s.at(x, s.height - 1) != Tile::Wall) return false;
    for (int y = 0; y < s.height; ++y)
        if (s.at(0, y) != Tile::Wall || s.at(s.width - 1, y) != Tile::Wall) return false;
    return true;
}

GameState wrap_in_walls(const GameState& s) {
    GameState out;
    out.width = s.width + 2;
    out.height = s.height + 2;
    out.tick = s.tick;
    out.tiles.assign(static_cast<std::size_t>(out.width) * out.height, Tile::Wall);
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) out.set(x + 1, y + 1, s.at(x, y));
    return out;
}

}  // namespace

GameState parse_level(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.empty())
        throw LevelParseError(LevelParseError::Kind::NoAvatar, "empty level: no avatar");

    std::size_t width = 0;
    for (const auto& l : lines) width = std::max(width, l.size());

    GameState s;
    s.width = static_cast<std::uint16_t>(width);
    s.height = static_cast<std::uint16_t>(lines.size());
    s.tiles.assign(width * lines.size(), Tile::Wall);

    int avatars = 0;
    for (int y = 0; y < s.height; ++y) {
        const std::string& line = lines[y];
        for (int x = 0; x < static_cast<int>(line.size()); ++x) {
            Tile t;
            if (!tile_from_char(line[x], t)) {
                std::ostringstream msg;
                msg << "unknown character '" << line[x] << "' at line " << (y + 1)
                    << ", column " << (x + 1);
                throw LevelParseError(LevelParseError::Kind::UnknownCharacter, msg.str(), y, x);
            }
            s.set(x, y, t);
            avatars += is_avatar(t);
        }
        // short lines are already wall-padded by the assign above
    }

    if (avatars == 0)
        throw LevelParseError(LevelParseError::Kind::NoAvatar, "level has no avatar");
    if (avatars > 1)
        throw LevelParseError(LevelParseError::Kind::MultipleAvatars, "level has multiple avatars");
    if (box_count(s) != target_count(s)) {
        std::ostringstream msg;
        msg << "level has " << box_count(s) << " boxes but " << target_count(s) << " targets";
        throw LevelParseError(LevelParseError::Kind::BoxTargetMismatch, msg.str());
    }

    if (!boundary_walled(s)) s = wrap_in_walls(s);
    return s;
}

std::string serialize_level(const GameState& s) {
    std::string out;
    out.reserve(static_cast<std::size_t>(s.width + 1) * s.height);
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x) out.push_back(tile_to_char(s.at(x, y)));
        out.push_back('\n');
    }
    return out;
}

const char* violation_name(Violation v) {
    switch (v) {
        case Violation::NoAvatar: return "NoAvatar";
        case Violation::MultipleAvatars: return "MultipleAvatars";
        case Violation::BoundaryNotWall: return "BoundaryNotWall";
        case Violation::BoxTargetMismatch: return "BoxTargetMismatch";
    }
    return "?";
}

std::vector<Violation> validate(const GameState& s) {
    std::vector<Violation> out;
    int avatars = 0;
    for (Tile t : s.tiles) avatars += is_avatar(t);
    if (avatars == 0) out.push_back(Violation::NoAvatar);
    if (avatars > 1) out.push_back(Violation::MultipleAvatars);
    if (s.width > 0 && s.height > 0 && !boundary_walled(s))
        out.push_back(Violation::BoundaryNotWall);
    if (box_count(s) != target_count(s)) out.push_back(Violation::BoxTargetMismatch);
    return out;
}

GameState load_level_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open level file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_level(buf.str());
    } catch (const LevelParseError& e) {
        throw LevelParseError(e.kind, path.string() + ": " + e.what(), e.line, e.column);
    }
}

LevelSet load_level_set(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open level manifest: " + manifest_path.string());

    LevelSet set;
    set.name = manifest_path.stem().string();
    const auto base = manifest_path.parent_path();

    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto path = base / line;
        GameState state = load_level_file(path);
        const auto violations = validate(state);
        if (!violations.empty())
            throw std::runtime_error("invalid level " + path.string() + ": " +
                                     violation_name(violations.front()));
        if (box_count(state) < 1)
            throw std::runtime_error("level has no boxes: " + path.string());
        set.levels.push_back(Level{line, std::move(state)});
    }
    if (set.levels.empty())
        throw std::runtime_error("empty level set: " + manifest_path.string());
    return set;
}

}  // namespace sokofm

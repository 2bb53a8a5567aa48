#include "sokofm/engine.hpp"

#include <stdexcept>

namespace sokofm {

Offset action_offset(Action a) {
    switch (a) {
        case Action::Up: return {0, -1};
        case Action::Down: return {0, 1};
        case Action::Left: return {-1, 0};
        case Action::Right: return {1, 0};
    }
    return {0, 0};
}

const char* tile_name(Tile t) {
    switch (t) {
        case Tile::Wall: return "wall";
        case Tile::Floor: return "floor";
        case Tile::Target: return "target";
        case Tile::BoxOnFloor: return "box";
        case Tile::BoxOnTarget: return "box_on_target";
        case Tile::AvatarOnFloor: return "avatar";
        case Tile::AvatarOnTarget: return "avatar_on_target";
    }
    return "?";
}

const char* action_name(Action a) {
    switch (a) {
        case Action::Up: return "up";
        case Action::Down: return "down";
        case Action::Left: return "left";
        case Action::Right: return "right";
    }
    return "?";
}

std::optional<Offset> find_avatar(const GameState& s) {
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x)
            if (is_avatar(s.at(x, y))) return Offset{x, y};
    return std::nullopt;
}

int box_count(const GameState& s) {
    int n = 0;
    for (Tile t : s.tiles) n += is_box(t);
    return n;
}

int target_count(const GameState& s) {
    int n = 0;
    for (Tile t : s.tiles) n += on_target(t);
    return n;
}

GameState step(const GameState& s, Action a) {
    const auto avatar = find_avatar(s);
    if (!avatar) throw std::invalid_argument("step: state has no avatar");

    GameState out = s;
    out.tick = s.tick + 1;

    const Offset d = action_offset(a);
    const int px = avatar->dx, py = avatar->dy;
    const int qx = px + d.dx, qy = py + d.dy;
    const Tile q = s.at_or_wall(qx, qy);

    if (is_passable(q)) {
        out.set(px, py, vacated(s.at(px, py)));
        out.set(qx, qy, with_avatar(q));
    } else if (is_box(q)) {
        const int rx = px + 2 * d.dx, ry = py + 2 * d.dy;
        const Tile r = s.at_or_wall(rx, ry);
        if (is_passable(r)) {
            out.set(rx, ry, with_box(r));
            out.set(qx, qy, with_avatar(vacated(q)));
            out.set(px, py, vacated(s.at(px, py)));
        }
        // box against wall or box: blocked, grid unchanged
    }
    // q is a wall: blocked, grid unchanged

    return out;
}

int score(const GameState& s) {
    int n = 0;
    for (Tile t : s.tiles) n += (t == Tile::BoxOnTarget);
    return n;
}

bool is_win(const GameState& s) {
    for (Tile t : s.tiles)
        if (t == Tile::BoxOnFloor) return false;
    return true;
}

}  // namespace sokofm

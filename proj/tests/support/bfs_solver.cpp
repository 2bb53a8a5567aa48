#include "bfs_solver.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_set>

namespace sokofm::testing {

namespace {

constexpr std::uint8_t kNoBox = 0xff;

// avatar position in the low byte, sorted box positions above it
std::uint64_t pack(std::uint8_t avatar, std::array<std::uint8_t, 7> boxes) {
    std::uint64_t key = avatar;
    for (int i = 0; i < 7; ++i) key |= static_cast<std::uint64_t>(boxes[i]) << (8 * (i + 1));
    return key;
}

std::array<std::uint8_t, 7> boxes_of(std::uint64_t key) {
    std::array<std::uint8_t, 7> boxes{};
    for (int i = 0; i < 7; ++i) boxes[i] = static_cast<std::uint8_t>(key >> (8 * (i + 1)));
    return boxes;
}

}  // namespace

BfsResult bfs_solve(const GameState& level, std::size_t max_states) {
    const int w = level.width;
    const int n_cells = w * level.height;
    if (n_cells > 255) throw std::invalid_argument("bfs_solve: level too large");

    std::vector<bool> wall(n_cells), goal(n_cells);
    std::array<std::uint8_t, 7> start_boxes;
    start_boxes.fill(kNoBox);
    int n_boxes = 0;
    std::uint8_t avatar = 0;
    for (int i = 0; i < n_cells; ++i) {
        const Tile t = level.tiles[i];
        wall[i] = t == Tile::Wall;
        goal[i] = on_target(t);
        if (is_box(t)) {
            if (n_boxes >= 7) throw std::invalid_argument("bfs_solve: too many boxes");
            start_boxes[n_boxes++] = static_cast<std::uint8_t>(i);
        }
        if (is_avatar(t)) avatar = static_cast<std::uint8_t>(i);
    }

    auto all_on_goal = [&](const std::array<std::uint8_t, 7>& boxes) {
        for (int i = 0; i < n_boxes; ++i)
            if (!goal[boxes[i]]) return false;
        return true;
    };

    struct Entry {
        std::uint64_t key;
        std::uint32_t parent;
        std::uint8_t action;
    };

    const int deltas[kActionCount] = {-w, w, -1, 1};  // up, down, left, right

    BfsResult result;
    std::vector<Entry> entries;
    std::unordered_set<std::uint64_t> visited;
    entries.push_back({pack(avatar, start_boxes), 0, 0});
    visited.insert(entries[0].key);

    if (all_on_goal(start_boxes)) {
        result.solved = true;
        return result;
    }

    for (std::size_t head = 0; head < entries.size(); ++head) {
        if (entries.size() > max_states)
            throw std::runtime_error("bfs_solve: state budget exhausted");
        const std::uint64_t key = entries[head].key;
        const auto cur_avatar = static_cast<std::uint8_t>(key);
        const auto cur_boxes = boxes_of(key);
        ++result.expanded;

        for (int a = 0; a < kActionCount; ++a) {
            const int q = cur_avatar + deltas[a];
            if (wall[q]) continue;

            auto boxes = cur_boxes;
            auto box_at = [&](int cell) {
                for (int i = 0; i < n_boxes; ++i)
                    if (boxes[i] == cell) return i;
                return -1;
            };

            const int pushed = box_at(q);
            if (pushed >= 0) {
                const int r = q + deltas[a];
                if (wall[r] || box_at(r) >= 0) continue;
                boxes[pushed] = static_cast<std::uint8_t>(r);
                std::sort(boxes.begin(), boxes.begin() + n_boxes);
            }

            const std::uint64_t next_key = pack(static_cast<std::uint8_t>(q), boxes);
            if (!visited.insert(next_key).second) continue;
            entries.push_back({next_key, static_cast<std::uint32_t>(head),
                               static_cast<std::uint8_t>(a)});

            if (pushed >= 0 && all_on_goal(boxes)) {
                // reconstruct the action sequence
                std::vector<Action> rev;
                std::size_t at = entries.size() - 1;
                while (at != 0) {
                    rev.push_back(static_cast<Action>(entries[at].action));
                    at = entries[at].parent;
                }
                result.solved = true;
                result.solution.assign(rev.rbegin(), rev.rend());
                return result;
            }
        }
    }
    return result;  // exhausted the reachable space: unsolvable
}

}  // namespace sokofm::testing

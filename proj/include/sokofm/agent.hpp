#pragma once

#include <vector>

#include "sokofm/engine.hpp"
#include "sokofm/models.hpp"
#include "sokofm/rng.hpp"

namespace sokofm {

using ActionSequence = std::vector<Action>;

struct AgentParams {
    int sequence_length = 40;
    int evaluations = 40;       // 1+1 EA iterations per decision
    double mutation_rate = 0.4;
    bool shift_buffer = true;
    int resamples = 1;
};

ActionSequence random_sequence(int length, Rng& rng);

/// Roll the model through the whole sequence and score the final state,
/// averaged over `resamples` rollouts. Rollouts stop early on a win only when
/// the model produces real game states (the engine adapter).
double evaluate(const ActionSequence& seq, const ForwardModel& model, const GameState& state,
                int resamples = 1);

/// Each gene is independently redrawn uniformly with probability `rate`; one
/// uniformly chosen gene is additionally forced to a different action, so the
/// challenger never equals its parent.
ActionSequence mutate(const ActionSequence& seq, double rate, Rng& rng);

/// Shift left by one and append a fresh uniform random action.
ActionSequence shift(const ActionSequence& seq, Rng& rng);

struct Decision {
    Action action = Action::Up;
    ActionSequence carried;              // final incumbent, for the next shift
    std::vector<double> fitness_trace;   // incumbent fitness, initial then per iteration
};

/// One rolling-horizon decision via a 1+1 EA: mutate the incumbent
/// `evaluations` times, accepting challengers with greater or equal fitness,
/// then execute the incumbent's first action. Pass the previous decision's
/// carried sequence to enable the shift buffer.
Decision decide(const GameState& state, const ForwardModel& model, const AgentParams& params,
                Rng& rng, const ActionSequence* carried = nullptr);

}  // namespace sokofm

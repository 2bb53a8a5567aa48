#include "sokofm/agent.hpp"

#include <stdexcept>

namespace sokofm {

ActionSequence random_sequence(int length, Rng& rng) {
    ActionSequence seq(length);
    for (auto& a : seq) a = random_action(rng);
    return seq;
}

double evaluate(const ActionSequence& seq, const ForwardModel& model, const GameState& state,
                int resamples) {
    if (resamples < 1) throw std::invalid_argument("evaluate: resamples must be positive");
    const bool stop_on_win = model.produces_valid_states();

    double total = 0.0;
    for (int r = 0; r < resamples; ++r) {
        GameState s = state;
        for (Action a : seq) {
            if (stop_on_win && is_win(s)) break;
            s = model.predict_grid(s, a);
        }
        total += static_cast<double>(score(s));
    }
    return total / resamples;
}

ActionSequence mutate(const ActionSequence& seq, double rate, Rng& rng) {
    if (seq.empty()) throw std::invalid_argument("mutate: empty sequence");
    ActionSequence out = seq;
    for (auto& a : out)
        if (bernoulli(rng, rate)) a = random_action(rng);
    const auto forced = static_cast<std::size_t>(uniform_int(rng, out.size()));
    out[forced] = random_other_action(rng, out[forced]);
    return out;
}

ActionSequence shift(const ActionSequence& seq, Rng& rng) {
    if (seq.empty()) throw std::invalid_argument("shift: empty sequence");
    ActionSequence out(seq.begin() + 1, seq.end());
    out.push_back(random_action(rng));
    return out;
}

Decision decide(const GameState& state, const ForwardModel& model, const AgentParams& params,
                Rng& rng, const ActionSequence* carried) {
    if (params.sequence_length < 1)
        throw std::invalid_argument("decide: sequence_length must be positive");
    ActionSequence incumbent = (params.shift_buffer && carried && !carried->empty())
                                   ? shift(*carried, rng)
                                   : random_sequence(params.sequence_length, rng);

    Decision result;
    if (params.evaluations > 0) {
        double incumbent_fitness = evaluate(incumbent, model, state, params.resamples);
        result.fitness_trace.reserve(params.evaluations + 1);
        result.fitness_trace.push_back(incumbent_fitness);
        for (int i = 0; i < params.evaluations; ++i) {
            ActionSequence challenger = mutate(incumbent, params.mutation_rate, rng);
            const double f = evaluate(challenger, model, state, params.resamples);
            if (f >= incumbent_fitness) {
                incumbent = std::move(challenger);
                incumbent_fitness = f;
            }
            result.fitness_trace.push_back(incumbent_fitness);
        }
    }

    result.action = incumbent.front();
    result.carried = std::move(incumbent);
    return result;
}

}  // namespace sokofm

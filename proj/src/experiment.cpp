#include "sokofm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "sokofm/parallel.hpp"
#include "sokofm/rng.hpp"

namespace sokofm {

namespace {

constexpr const char* kSetNames[3] = {"train", "easy", "hard"};

std::filesystem::path levels_path(const ExperimentConfig& config, const std::string& set_name) {
    if (set_name == "train") return config.train_levels;
    if (set_name == "easy") return config.easy_levels;
    if (set_name == "hard") return config.hard_levels;
    throw std::invalid_argument("unknown level set: " + set_name);
}

LevelSet load_set(const ExperimentConfig& config, const std::string& set_name) {
    LevelSet set = load_level_set(levels_path(config, set_name));
    set.name = set_name;
    return set;
}

struct ModelRef {
    std::string kind_name;
    std::string shape;  // "-" for baselines
    int span = 0;
    std::unique_ptr<ForwardModel> owned;
    const ForwardModel* model = nullptr;
    std::uint64_t size = 0;  // unique patterns or tree nodes
};

/// Baselines first, then the configured grid in (shape, span, kind) order.
std::vector<ModelRef> assemble_models(const ExperimentConfig& config, bool load_trained) {
    std::vector<ModelRef> out;
    {
        ModelRef r;
        r.kind_name = "static";
        r.shape = "-";
        r.owned = std::make_unique<StaticModel>();
        r.model = r.owned.get();
        out.push_back(std::move(r));
    }
    {
        ModelRef r;
        r.kind_name = "true";
        r.shape = "-";
        r.owned = std::make_unique<TrueModel>();
        r.model = r.owned.get();
        out.push_back(std::move(r));
    }
    if (!load_trained) return out;

    for (PatternShape shape : config.models.shapes) {
        for (int span : config.models.spans) {
            for (ModelKind kind : config.models.kinds) {
                const PatternSpec spec{shape, span};
                ModelRef r;
                r.kind_name = model_kind_name(kind);
                r.shape = shape_name(shape);
                r.span = span;
                r.owned = load_model(model_path(config, kind, spec));
                r.model = r.owned.get();
                if (kind == ModelKind::ExactMatch)
                    r.size = static_cast<const ExactMatchModel*>(r.model)->unique_pattern_count();
                else
                    r.size = static_cast<const TreeModel*>(r.model)->node_count();
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

void write_rows_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write results file: " + path.string());
    out << kResultsCsvHeader << "\n";
    for (const auto& row : rows) {
        out << format_result_row(row) << "\n";
        out.flush();  // keep partial results on abort
    }
}

AgentParams resolve_agent_params(const ExperimentConfig& config) {
    if (!config.agent_from_tuner) return config.agent;
    const auto path = config.out_dir / "tuned_params.json";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config requests tuned agent parameters but " + path.string() +
                                 " does not exist; run the tune command first");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_agent_params(buf.str());
}

}  // namespace

std::filesystem::path dataset_path(const ExperimentConfig& config, const std::string& set_name) {
    return config.out_dir / "datasets" / (set_name + ".dataset");
}

std::filesystem::path model_path(const ExperimentConfig& config, ModelKind kind,
                                 const PatternSpec& spec) {
    std::ostringstream name;
    name << model_kind_name(kind) << "_" << shape_name(spec.shape) << "_s" << spec.span
         << ".model";
    return config.out_dir / "models" / name.str();
}

std::vector<std::filesystem::path> run_collect(const ExperimentConfig& config,
                                               std::ostream& log) {
    std::filesystem::create_directories(config.out_dir / "datasets");
    std::vector<std::filesystem::path> paths;
    for (std::uint64_t i = 0; i < 3; ++i) {
        const std::string set_name = kSetNames[i];
        const LevelSet set = load_set(config, set_name);
        const auto seed = derive_seed(config.seed, {kSeedCollect, i});
        TransitionDataset data =
            collect(set, config.collect.playouts, config.collect.steps, seed, config.jobs);
        const auto path = dataset_path(config, set_name);
        save_dataset(data, path);
        log << "collect: " << set_name << ": " << data.records.size() << " transitions from "
            << set.levels.size() << " levels -> " << path.string() << "\n";
        paths.push_back(path);
    }
    return paths;
}

std::vector<std::filesystem::path> run_train(const ExperimentConfig& config, std::ostream& log) {
    const TransitionDataset train_data = load_dataset(dataset_path(config, "train"));
    std::filesystem::create_directories(config.out_dir / "models");

    std::vector<std::filesystem::path> paths;
    for (PatternShape shape : config.models.shapes) {
        for (int span : config.models.spans) {
            const PatternSpec spec{shape, span};
            PatternTable table = build_pattern_table(train_data, spec);
            log << "train: " << shape_name(shape) << " span " << span << ": "
                << table.unique_pattern_count() << " unique patterns from "
                << table.sample_count() << " examples\n";

            const bool want_tree = std::count(config.models.kinds.begin(),
                                              config.models.kinds.end(), ModelKind::Tree) > 0;
            const bool want_exact = std::count(config.models.kinds.begin(),
                                               config.models.kinds.end(),
                                               ModelKind::ExactMatch) > 0;
            if (want_tree) {
                TreeModel tree = train_tree(table);
                const auto path = model_path(config, ModelKind::Tree, spec);
                save_model(tree, path);
                log << "train: " << tree.descriptor() << ": " << tree.node_count()
                    << " nodes -> " << path.string() << "\n";
                paths.push_back(path);
            }
            if (want_exact) {
                ExactMatchModel exact = train_exact(std::move(table));
                const auto path = model_path(config, ModelKind::ExactMatch, spec);
                save_model(exact, path);
                log << "train: " << exact.descriptor() << " -> " << path.string() << "\n";
                paths.push_back(path);
            }
        }
    }
    return paths;
}

std::vector<ResultRow> run_eval(const ExperimentConfig& config, std::ostream& log) {
    const auto models = assemble_models(config, true);
    std::vector<ResultRow> rows;
    for (const std::string set_name : {"easy", "hard"}) {
        const TransitionDataset data = load_dataset(dataset_path(config, set_name));
        for (const auto& m : models) {
            ResultRow row;
            row.model = m.kind_name;
            row.shape = m.shape;
            row.span = m.span;
            row.level_set = set_name;
            row.accuracy = accuracy(*m.model, data, config.jobs);
            row.model_size = m.size;
            row.seed = config.seed;
            log << "eval: " << m.model->descriptor() << " on " << set_name
                << ": accuracy " << *row.accuracy << "\n";
            rows.push_back(std::move(row));
        }
    }
    write_rows_csv(config.out_dir / "eval_results.csv", rows);
    return rows;
}

std::vector<ResultRow> run_play(const ExperimentConfig& config, std::ostream& log) {
    const AgentParams params = resolve_agent_params(config);
    const auto models = assemble_models(config, true);

    std::filesystem::create_directories(config.out_dir);
    std::ofstream breakdown(config.out_dir / "play_levels.csv");
    breakdown << "model,shape,span,level_set,level,repeat,score,steps\n";

    std::vector<ResultRow> rows;
    for (std::uint64_t set_i = 0; set_i < 2; ++set_i) {
        const std::string set_name = kSetNames[set_i + 1];  // easy, hard
        const LevelSet set = load_set(config, set_name);
        // one seed per level set: every model sees the same episode streams
        const auto seed = derive_seed(config.seed, {kSeedPlay, set_i});
        for (const auto& m : models) {
            const PlayResult res = play_eval(params, *m.model, set, config.eval.repeats,
                                             config.eval.max_steps, seed, config.jobs);
            ResultRow row;
            row.model = m.kind_name;
            row.shape = m.shape;
            row.span = m.span;
            row.level_set = set_name;
            row.mean_score = res.mean_score;
            row.model_size = m.size;
            row.seed = config.seed;
            log << "play: " << m.model->descriptor() << " on " << set_name << ": mean score "
                << res.mean_score << "\n";
            rows.push_back(std::move(row));

            for (std::size_t li = 0; li < set.levels.size(); ++li)
                for (int ri = 0; ri < config.eval.repeats; ++ri)
                    breakdown << m.kind_name << ',' << m.shape << ',' << m.span << ','
                              << set_name << ',' << set.levels[li].name << ',' << ri << ','
                              << res.scores[li][ri] << ',' << res.episode_steps[li][ri] << "\n";
            breakdown.flush();
        }
    }
    write_rows_csv(config.out_dir / "play_results.csv", rows);
    return rows;
}

TuneResult run_tune(const ExperimentConfig& config, std::ostream& log) {
    const LevelSet train = load_set(config, "train");
    const ParamSpace& space = config.tune.space;
    const TrueModel model;

    std::uint64_t call_index = 0;
    Objective objective = [&](const ConfigPoint& point) {
        const AgentParams params = agent_params_from_point(space, point);
        const auto seed = derive_seed(config.seed, {kSeedTune, call_index++});
        return play_eval(params, model, train, 1, config.eval.max_steps, seed, config.jobs)
            .mean_score;
    };

    NtbeaOptions options;
    options.iterations = config.tune.iterations;
    options.k = config.tune.k;
    options.epsilon = config.tune.epsilon;
    options.neighbours = config.tune.neighbours;
    options.mutation_prob = config.tune.mutation_prob;

    Rng rng(derive_seed(config.seed, {kSeedTune}));
    TuneResult result = ntbea_tune(space, objective, options, rng);

    std::filesystem::create_directories(config.out_dir);
    std::ofstream csv(config.out_dir / "tuning_log.csv");
    csv << "iteration,kind";
    for (const auto& d : space.dims) csv << ',' << d.name;
    csv << ",fitness\n";
    for (std::size_t i = 0; i < result.log.size(); ++i) {
        csv << i << ",eval";
        for (std::size_t d = 0; d < space.dims.size(); ++d)
            csv << ',' << space.dims[d].values[result.log[i].point[d]];
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", result.log[i].fitness);
        csv << ',' << buf << "\n";
    }
    const auto& full_stats = result.landscape.stats(result.landscape.full_tuple_index());
    csv << result.log.size() << ",recommendation";
    for (std::size_t d = 0; d < space.dims.size(); ++d)
        csv << ',' << space.dims[d].values[result.best[d]];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", full_stats.at(result.best).mean());
    csv << ',' << buf << "\n";

    const AgentParams tuned = agent_params_from_point(space, result.best);
    save_agent_params(config.out_dir / "tuned_params.json", tuned);

    log << "tune: recommendation:";
    for (std::size_t d = 0; d < space.dims.size(); ++d)
        log << ' ' << space.dims[d].name << '=' << space.dims[d].values[result.best[d]];
    log << " (mean fitness " << full_stats.at(result.best).mean() << " over "
        << full_stats.at(result.best).count << " visits)\n";
    return result;
}

BenchReport run_bench(const ExperimentConfig& config, std::ostream& log) {
    const LevelSet train = load_set(config, "train");
    const GameState& start = train.levels.front().state;

    Rng rng(derive_seed(config.seed, {kSeedBench}));
    BenchReport report;
    report.steps = config.bench_steps;

    const auto t0 = std::chrono::steady_clock::now();
    GameState state = start;
    for (std::uint64_t i = 0; i < config.bench_steps; ++i) {
        state = step(state, random_action(rng));
        if (is_win(state)) state = start;
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.seconds = std::chrono::duration<double>(t1 - t0).count();
    report.ticks_per_second =
        report.seconds > 0 ? static_cast<double>(report.steps) / report.seconds : 0.0;

    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(config.out_dir / "bench.txt");
    out << "level: " << train.levels.front().name << "\n"
        << "seed: " << config.seed << "\n"
        << "steps: " << report.steps << "\n"
        << "wall_seconds: " << report.seconds << "\n"
        << "ticks_per_second: " << static_cast<std::uint64_t>(report.ticks_per_second) << "\n"
        << "final_state_score: " << score(state) << "\n";

    log << "bench: " << report.steps << " steps in " << report.seconds << " s = "
        << static_cast<std::uint64_t>(report.ticks_per_second) << " ticks/s\n";
    return report;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::ostream& log) {
    run_collect(config, log);
    run_train(config, log);
    const auto eval_rows = run_eval(config, log);
    const auto play_rows = run_play(config, log);

    // merge by (model, shape, span, level_set), eval order first
    std::vector<ResultRow> merged = eval_rows;
    auto key_of = [](const ResultRow& r) {
        return r.model + "|" + r.shape + "|" + std::to_string(r.span) + "|" + r.level_set;
    };
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < merged.size(); ++i) index[key_of(merged[i])] = i;
    for (const auto& row : play_rows) {
        auto it = index.find(key_of(row));
        if (it == index.end()) {
            merged.push_back(row);
        } else {
            merged[it->second].mean_score = row.mean_score;
        }
    }
    write_rows_csv(config.out_dir / "results.csv", merged);
    log << "results written to " << (config.out_dir / "results.csv").string() << "\n";
    return merged;
}

}  // namespace sokofm

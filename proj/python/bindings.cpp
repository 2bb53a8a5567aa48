#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sokofm/agent.hpp"
#include "sokofm/engine.hpp"
#include "sokofm/harness.hpp"
#include "sokofm/levels.hpp"
#include "sokofm/models.hpp"
#include "sokofm/patterns.hpp"
#include "sokofm/rng.hpp"
#include "sokofm/tuner.hpp"

namespace py = pybind11;
using namespace sokofm;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local forward-model learning and simulation-based planning on Sokoban";

    py::enum_<Tile>(m, "Tile")
        .value("WALL", Tile::Wall)
        .value("FLOOR", Tile::Floor)
        .value("TARGET", Tile::Target)
        .value("BOX_ON_FLOOR", Tile::BoxOnFloor)
        .value("BOX_ON_TARGET", Tile::BoxOnTarget)
        .value("AVATAR_ON_FLOOR", Tile::AvatarOnFloor)
        .value("AVATAR_ON_TARGET", Tile::AvatarOnTarget);

    py::enum_<Action>(m, "Action")
        .value("UP", Action::Up)
        .value("DOWN", Action::Down)
        .value("LEFT", Action::Left)
        .value("RIGHT", Action::Right);

    py::enum_<PatternShape>(m, "PatternShape")
        .value("CROSS", PatternShape::Cross)
        .value("SQUARE", PatternShape::Square);

    py::class_<GameState>(m, "GameState")
        .def(py::init<>())
        .def_readwrite("width", &GameState::width)
        .def_readwrite("height", &GameState::height)
        .def_readwrite("tick", &GameState::tick)
        .def_readwrite("tiles", &GameState::tiles)
        .def("at", &GameState::at, py::arg("x"), py::arg("y"))
        .def("__eq__", [](const GameState& a, const GameState& b) { return a == b; })
        .def("__repr__", [](const GameState& s) { return serialize_level(s); });

    py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));

    m.def("step", &step, py::arg("state"), py::arg("action"));
    m.def("score", &score, py::arg("state"));
    m.def("is_win", &is_win, py::arg("state"));
    m.def("box_count", &box_count);
    m.def("target_count", &target_count);

    m.def("parse_level", &parse_level, py::arg("text"));
    m.def("serialize_level", &serialize_level, py::arg("state"));
    m.def("validate", [](const GameState& s) {
        std::vector<std::string> out;
        for (Violation v : validate(s)) out.emplace_back(violation_name(v));
        return out;
    });

    py::class_<Level>(m, "Level")
        .def_readonly("name", &Level::name)
        .def_readonly("state", &Level::state);
    py::class_<LevelSet>(m, "LevelSet")
        .def_readonly("name", &LevelSet::name)
        .def_readonly("levels", &LevelSet::levels);
    m.def("load_level_file", &load_level_file, py::arg("path"));
    m.def("load_level_set", &load_level_set, py::arg("manifest_path"));

    py::class_<PatternSpec>(m, "PatternSpec")
        .def(py::init([](PatternShape shape, int span) { return PatternSpec{shape, span}; }),
             py::arg("shape"), py::arg("span"))
        .def_readwrite("shape", &PatternSpec::shape)
        .def_readwrite("span", &PatternSpec::span)
        .def("cell_count", &PatternSpec::cell_count);

    m.def("offsets", [](const PatternSpec& spec) {
        std::vector<std::pair<int, int>> out;
        for (const Offset& o : offsets(spec)) out.emplace_back(o.dx, o.dy);
        return out;
    });
    m.def("centre_index", &centre_index);

    py::class_<PatternKey>(m, "PatternKey")
        .def(py::init<>())
        .def_readwrite("action", &PatternKey::action)
        .def_readwrite("cells", &PatternKey::cells)
        .def("__eq__", [](const PatternKey& a, const PatternKey& b) { return a == b; });

    py::class_<TrainingExample>(m, "TrainingExample")
        .def(py::init<>())
        .def_readwrite("key", &TrainingExample::key)
        .def_readwrite("label", &TrainingExample::label);

    m.def("extract", &extract, py::arg("state"), py::arg("x"), py::arg("y"), py::arg("action"),
          py::arg("spec"));
    m.def("extract_training", &extract_training, py::arg("prev"), py::arg("action"),
          py::arg("next"), py::arg("spec"));

    py::class_<ForwardModel>(m, "ForwardModel")
        .def("predict_grid", &ForwardModel::predict_grid, py::arg("state"), py::arg("action"))
        .def("descriptor", &ForwardModel::descriptor);
    py::class_<StaticModel, ForwardModel>(m, "StaticModel").def(py::init<>());
    py::class_<TrueModel, ForwardModel>(m, "TrueModel").def(py::init<>());

    py::class_<ExactMatchModel, ForwardModel>(m, "ExactMatchModel")
        .def("predict_center", &ExactMatchModel::predict_center, py::arg("key"))
        .def_property_readonly("unique_pattern_count", &ExactMatchModel::unique_pattern_count)
        .def_property_readonly("sample_count", &ExactMatchModel::sample_count);

    py::class_<TreeModel, ForwardModel>(m, "TreeModel")
        .def("predict_center", &TreeModel::predict_center, py::arg("key"))
        .def_property_readonly("node_count", &TreeModel::node_count)
        .def_property_readonly("sample_count", &TreeModel::sample_count);

    m.def(
        "train_exact",
        [](const std::vector<TrainingExample>& dataset, const PatternSpec& spec) {
            return train_exact(dataset, spec);
        },
        py::arg("dataset"), py::arg("spec"));
    m.def(
        "train_tree",
        [](const std::vector<TrainingExample>& dataset, const PatternSpec& spec) {
            return train_tree(dataset, spec);
        },
        py::arg("dataset"), py::arg("spec"));
    m.def(
        "train_exact_on_transitions",
        [](const TransitionDataset& data, const PatternSpec& spec) {
            return train_exact(build_pattern_table(data, spec));
        },
        py::arg("dataset"), py::arg("spec"));
    m.def(
        "train_tree_on_transitions",
        [](const TransitionDataset& data, const PatternSpec& spec) {
            return train_tree(build_pattern_table(data, spec));
        },
        py::arg("dataset"), py::arg("spec"));

    m.def("save_model",
          py::overload_cast<const ForwardModel&, const std::filesystem::path&>(&save_model),
          py::arg("model"), py::arg("path"));
    m.def("load_model",
          py::overload_cast<const std::filesystem::path&>(&load_model), py::arg("path"));

    py::class_<AgentParams>(m, "AgentParams")
        .def(py::init<>())
        .def_readwrite("sequence_length", &AgentParams::sequence_length)
        .def_readwrite("evaluations", &AgentParams::evaluations)
        .def_readwrite("mutation_rate", &AgentParams::mutation_rate)
        .def_readwrite("shift_buffer", &AgentParams::shift_buffer)
        .def_readwrite("resamples", &AgentParams::resamples);

    py::class_<Decision>(m, "Decision")
        .def_readonly("action", &Decision::action)
        .def_readonly("carried", &Decision::carried)
        .def_readonly("fitness_trace", &Decision::fitness_trace);

    m.def("random_sequence", &random_sequence, py::arg("length"), py::arg("rng"));
    m.def("evaluate", &evaluate, py::arg("sequence"), py::arg("model"), py::arg("state"),
          py::arg("resamples") = 1);
    m.def("mutate", &mutate, py::arg("sequence"), py::arg("rate"), py::arg("rng"));
    m.def("shift", &shift, py::arg("sequence"), py::arg("rng"));
    m.def(
        "decide",
        [](const GameState& state, const ForwardModel& model, const AgentParams& params,
           Rng& rng, const std::optional<ActionSequence>& carried) {
            return decide(state, model, params, rng, carried ? &*carried : nullptr);
        },
        py::arg("state"), py::arg("model"), py::arg("params"), py::arg("rng"),
        py::arg("carried") = std::nullopt);

    py::class_<Transition>(m, "Transition")
        .def_readonly("prev", &Transition::prev)
        .def_readonly("action", &Transition::action)
        .def_readonly("next", &Transition::next);

    py::class_<DatasetProvenance>(m, "DatasetProvenance")
        .def_readonly("level_set", &DatasetProvenance::level_set)
        .def_readonly("playouts", &DatasetProvenance::playouts)
        .def_readonly("steps", &DatasetProvenance::steps)
        .def_readonly("seed", &DatasetProvenance::seed);

    py::class_<TransitionDataset>(m, "TransitionDataset")
        .def_readonly("provenance", &TransitionDataset::provenance)
        .def_readonly("records", &TransitionDataset::records);

    m.def("collect", &collect, py::arg("levels"), py::arg("playouts"), py::arg("steps"),
          py::arg("seed"), py::arg("jobs") = 1);
    m.def("save_dataset",
          py::overload_cast<const TransitionDataset&, const std::filesystem::path&>(
              &save_dataset),
          py::arg("dataset"), py::arg("path"));
    m.def("load_dataset", py::overload_cast<const std::filesystem::path&>(&load_dataset),
          py::arg("path"));
    m.def("accuracy", &accuracy, py::arg("model"), py::arg("dataset"), py::arg("jobs") = 1);

    py::class_<PlayResult>(m, "PlayResult")
        .def_readonly("mean_score", &PlayResult::mean_score)
        .def_readonly("per_level_mean", &PlayResult::per_level_mean)
        .def_readonly("scores", &PlayResult::scores)
        .def_readonly("episode_steps", &PlayResult::episode_steps);

    m.def("play_eval", &play_eval, py::arg("params"), py::arg("model"), py::arg("levels"),
          py::arg("repeats"), py::arg("max_steps"), py::arg("seed"), py::arg("jobs") = 1);

    py::class_<DivergenceResult>(m, "DivergenceResult")
        .def_readonly("step", &DivergenceResult::step)
        .def_readonly("predicted", &DivergenceResult::predicted)
        .def_readonly("actual", &DivergenceResult::actual);

    m.def("divergence", &divergence, py::arg("model"), py::arg("state"), py::arg("actions"));

    m.def(
        "ntbea_tune",
        [](const std::vector<std::pair<std::string, std::vector<std::string>>>& dims,
           const std::function<double(const ConfigPoint&)>& objective, int iterations, double k,
           double epsilon, int neighbours, double mutation_prob, std::uint64_t seed) {
            ParamSpace space;
            for (const auto& [name, values] : dims)
                space.dims.push_back(ParamDimension{name, values});
            NtbeaOptions options{iterations, k, epsilon, neighbours, mutation_prob};
            Rng rng(seed);
            TuneResult result = ntbea_tune(space, objective, options, rng);
            std::vector<std::pair<ConfigPoint, double>> log;
            for (const auto& e : result.log) log.emplace_back(e.point, e.fitness);
            return py::make_tuple(result.best, log);
        },
        py::arg("space"), py::arg("objective"), py::arg("iterations") = 200, py::arg("k") = 2.0,
        py::arg("epsilon") = 0.5, py::arg("neighbours") = 50, py::arg("mutation_prob") = 0.5,
        py::arg("seed") = 1);

    m.attr("__version__") = "0.1.0";
}

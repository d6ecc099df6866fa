#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ising/approx.hpp"
#include "ising/brute_force.hpp"
#include "ising/decomposition.hpp"
#include "ising/error.hpp"
#include "ising/inference.hpp"
#include "ising/io.hpp"
#include "ising/k5free.hpp"
#include "ising/planar_ising.hpp"
#include "ising/planarity.hpp"

using namespace ising;

namespace {

enum ExitCode { kOk = 0, kInvalid = 2, kUnsupported = 3, kNumerical = 4, kRejected = 5 };

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::DisconnectedSet:
        case ErrorCode::DisconnectedConditionSet:
            return kInvalid;
        case ErrorCode::TooLarge:
        case ErrorCode::NotZeroField:
        case ErrorCode::NotPlanar:
            return kUnsupported;
        case ErrorCode::NumericalFailure:
        case ErrorCode::SingularMatrix:
            return kNumerical;
        case ErrorCode::InvalidDecomposition:
        case ErrorCode::NotBiconnected:
        case ErrorCode::Not3Connected:
        case ErrorCode::NotK5Free:
            return kRejected;
        case ErrorCode::CoverageError:
        case ErrorCode::InternalError:
            break;
    }
    return 1;
}

struct Inputs {
    std::string model;
    std::string decomposition;
    std::string condition;
    std::string out;
    int samples = 1;
    std::uint64_t seed = 0;
    int c = 0;
};

enum class Engine { Decomposition, Planar, BruteForce };

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Decomposition: return "decomposition";
        case Engine::Planar: return "planar";
        case Engine::BruteForce: return "brute-force";
    }
    return "";
}

// Decomposition first, then the planar engine, then enumeration.
Engine choose_engine(const IsingModel& m, bool have_tree, const Condition& s) {
    if (have_tree) {
        if (!m.zero_field()) throw Error(ErrorCode::NotZeroField, "the decomposition engine needs a zero-field model");
        if (!s.empty()) throw Error(ErrorCode::NotPlanar, "conditioning is not available with a decomposition");
        return Engine::Decomposition;
    }
    if (m.zero_field() && is_planar(m.graph)) return Engine::Planar;
    if (m.vertex_count() - static_cast<int>(s.size()) <= kDefaultEnumerationLimit) return Engine::BruteForce;
    if (!m.zero_field()) throw Error(ErrorCode::NotZeroField, "model has fields and is too large to enumerate");
    throw Error(ErrorCode::NotPlanar, "model is nonplanar and too large to enumerate; supply a decomposition");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) std::cout << text;
    else write_text_file(path, text);
}

int cmd_logz(const Inputs& in) {
    const IsingModel m = parse_model(read_text_file(in.model));
    const Condition s = parse_condition(in.condition);
    check_condition(s, m.vertex_count());
    std::optional<DecompositionTree> tree;
    if (!in.decomposition.empty()) tree = parse_decomposition(read_text_file(in.decomposition));
    const Engine engine = choose_engine(m, tree.has_value(), s);
    std::cerr << "engine: " << engine_name(engine) << '\n';
    double log_z = 0.0;
    switch (engine) {
        case Engine::Decomposition: log_z = infer_log_z(*tree, m); break;
        case Engine::Planar: log_z = s.empty() ? log_z_planar(m) : conditioned_log_z(m, s); break;
        case Engine::BruteForce: log_z = brute_force_log_z(m, s); break;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "log_z = %.12g\n", log_z);
    emit(in.out, buf);
    return kOk;
}

int cmd_sample(const Inputs& in) {
    const IsingModel m = parse_model(read_text_file(in.model));
    const Condition s = parse_condition(in.condition);
    check_condition(s, m.vertex_count());
    if (in.samples < 0) throw Error(ErrorCode::InvalidInput, "sample count must be non-negative");
    std::optional<DecompositionTree> tree;
    if (!in.decomposition.empty()) tree = parse_decomposition(read_text_file(in.decomposition));
    const Engine engine = choose_engine(m, tree.has_value(), s);
    std::cerr << "engine: " << engine_name(engine) << '\n';
    Rng rng(in.seed);
    std::vector<SpinConfiguration> draws;
    switch (engine) {
        case Engine::Decomposition:
            draws = sample(*tree, m, in.samples, rng);
            break;
        case Engine::Planar: {
            std::vector<int> spins;
            for (const auto& a : s.assignments) spins.push_back(a.spin);
            const PlanarSampler sampler(m.graph, s.vertices());
            for (int i = 0; i < in.samples; ++i) draws.push_back(sampler.sample(m.interactions, spins, rng));
            break;
        }
        case Engine::BruteForce:
            for (int i = 0; i < in.samples; ++i) draws.push_back(brute_force_sample(m, s, rng));
            break;
    }
    std::ostringstream out;
    for (const auto& x : draws) {
        for (std::size_t v = 0; v < x.size(); ++v) out << (v ? " " : "") << x[v];
        out << '\n';
    }
    emit(in.out, out.str());
    return kOk;
}

int cmd_k5(const Inputs& in) {
    const IsingModel m = parse_model(read_text_file(in.model));
    K5FreeOptions options;
    options.log = [](const std::string& note) { std::cerr << note << '\n'; };
    const DecompositionTree tree = decompose_k5_free(m.graph, options);
    std::cerr << "decomposition: " << tree.nodes.size() << " node(s)\n";
    emit(in.out, decomposition_to_json(tree) + "\n");
    return kOk;
}

int cmd_validate(const Inputs& in) {
    const IsingModel m = parse_model(read_text_file(in.model));
    DecompositionTree tree = parse_decomposition(read_text_file(in.decomposition));
    if (in.c > 0) tree.c = in.c;
    const ValidationReport report = validate(tree, m.graph);
    if (report.ok()) {
        emit(in.out, "valid (c = " + std::to_string(tree.c) + ")\n");
        return kOk;
    }
    emit(in.out, report.summary());
    return kRejected;
}

template <typename T>
std::vector<T> split_list(const std::string& text, T (*convert)(const std::string&)) {
    std::vector<T> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(convert(item));
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "not a number: '" + s + "'");
    return v;
}

std::string to_method(const std::string& s) {
    if (s != "psg" && s != "dsg") throw Error(ErrorCode::InvalidInput, "unknown method '" + s + "'");
    return s;
}

struct ExperimentInputs {
    int h = 5;
    std::string alphas = "1,2,3";
    int trials = 5;
    std::string methods = "psg,dsg";
    double tol = 1e-5;
    int max_iters = 200;
    int max_inner = 100;
    int jobs = 1;
    bool timing = false;
};

int cmd_experiment(const Inputs& in, const ExperimentInputs& ex) {
    ExperimentOptions o;
    o.h = ex.h;
    o.alphas = split_list<double>(ex.alphas, to_double);
    o.trials = ex.trials;
    o.seed = in.seed;
    o.methods = split_list<std::string>(ex.methods, to_method);
    o.optimizer.tolerance = ex.tol;
    o.optimizer.max_outer = ex.max_iters;
    o.optimizer.max_inner = ex.max_inner;
    o.jobs = ex.jobs;
    o.timing = ex.timing;
    if (o.h < 4 && std::find(o.methods.begin(), o.methods.end(), "dsg") != o.methods.end())
        throw Error(ErrorCode::InvalidInput, "dsg needs H >= 4");
    if (o.alphas.empty() || o.methods.empty() || o.trials < 0)
        throw Error(ErrorCode::InvalidInput, "empty alpha grid, method list or negative trial count");
    std::ostringstream out;
    out << experiment_csv_header() << '\n';
    for (const auto& row : run_varying_interaction(o)) out << experiment_csv_row(row) << '\n';
    emit(in.out, out.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and approximate inference for Ising models on planar and K5-free graphs"};
    app.require_subcommand(1);
    Inputs in;
    ExperimentInputs ex;

    auto* logz = app.add_subcommand("logz", "print log Z, or the conditional log Z with --condition");
    logz->add_option("--model", in.model, "model JSON")->required();
    logz->add_option("--decomposition", in.decomposition, "decomposition JSON");
    logz->add_option("--condition", in.condition, "fixed spins, e.g. 0:+1,3:-1");
    logz->add_option("--out", in.out, "output file (default stdout)");

    auto* smp = app.add_subcommand("sample", "draw exact samples, one configuration per line");
    smp->add_option("--model", in.model, "model JSON")->required();
    smp->add_option("--decomposition", in.decomposition, "decomposition JSON");
    smp->add_option("--condition", in.condition, "fixed spins, e.g. 0:+1,3:-1");
    smp->add_option("--samples", in.samples, "number of samples")->default_val(1);
    smp->add_option("--seed", in.seed, "random seed")->required();
    smp->add_option("--out", in.out, "output file (default stdout)");

    auto* k5 = app.add_subcommand("k5", "decompose a K5-free graph into a c-nice tree");
    k5->add_option("--model", in.model, "model or graph JSON")->required();
    k5->add_option("--out", in.out, "output file (default stdout)");

    auto* val = app.add_subcommand("validate", "check a decomposition against a model's graph");
    val->add_option("--model", in.model, "model or graph JSON")->required();
    val->add_option("--decomposition", in.decomposition, "decomposition JSON")->required();
    val->add_option("--c", in.c, "node size bound (default: from the file)");
    val->add_option("--out", in.out, "output file (default stdout)");

    auto* exp = app.add_subcommand("experiment", "varying-interaction grid experiment, CSV output");
    exp->add_option("--H", ex.h, "grid side")->default_val(5);
    exp->add_option("--alphas", ex.alphas, "comma-separated interaction scales")->default_val("1,2,3");
    exp->add_option("--trials", ex.trials, "trials per alpha")->default_val(5);
    exp->add_option("--seed", in.seed, "random seed")->required();
    exp->add_option("--methods", ex.methods, "comma-separated subset of psg,dsg")->default_val("psg,dsg");
    exp->add_option("--tol", ex.tol, "projected-gradient tolerance")->default_val(1e-5);
    exp->add_option("--max-iters", ex.max_iters, "outer iteration cap")->default_val(200);
    exp->add_option("--max-inner", ex.max_inner, "inner iteration cap")->default_val(100);
    exp->add_option("--jobs", ex.jobs, "worker threads")->default_val(1);
    exp->add_flag("--timing", ex.timing, "record runtime_ms (otherwise 0 for reproducible files)");
    exp->add_option("--out", in.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    try {
        if (*logz) return cmd_logz(in);
        if (*smp) return cmd_sample(in);
        if (*k5) return cmd_k5(in);
        if (*val) return cmd_validate(in);
        if (*exp) return cmd_experiment(in, ex);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kInvalid;
}

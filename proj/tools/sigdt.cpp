// sigdt: command-line front end of the writer-independent verification toolkit.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 input error
// (missing/malformed file, inconsistent data), 4 computation error
// (solver did not converge, unexpected failure).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigdt/dataset.hpp"
#include "sigdt/dichotomizer.hpp"
#include "sigdt/dichotomy.hpp"
#include "sigdt/error.hpp"
#include "sigdt/evaluation.hpp"
#include "sigdt/experiment.hpp"
#include "sigdt/feature_io.hpp"
#include "sigdt/hardness.hpp"
#include "sigdt/neighborhood.hpp"
#include "sigdt/prototype.hpp"
#include "sigdt/scaler.hpp"
#include "sigdt/synth.hpp"
#include "sigdt/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sigdt;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kInput = 3, kCompute = 4 };

// Set by the selected subcommand during parsing, run afterwards.
std::function<void()> g_action;

// Options shared by every subcommand.
struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string config;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Seed (defaults to the config's master_seed)");
    cmd->add_option("--out", c.out, "Output directory")->required();
    cmd->add_option("--config", c.config, "JSON config; flags override its values")->check(CLI::ExistingFile);
}

ExperimentConfig base_config(const Common& c) {
    return c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
}

std::uint64_t seed_of(const Common& c, const ExperimentConfig& cfg) { return c.seed.value_or(cfg.master_seed); }

template <typename T>
void override_with(const std::optional<T>& flag, T& target) {
    if (flag) target = *flag;
}

void write_atomic(const fs::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::string fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// manifest.json for single-step commands: the effective config, the
// command arguments, the seed and a hash of all three.
void write_manifest(const fs::path& out, const std::string& command, const ExperimentConfig& cfg,
                    std::uint64_t seed, const json& arguments, const std::vector<std::string>& artifacts) {
    json m;
    m["tool"] = "sigdt " + command;
    m["version"] = std::string(library_version());
    m["seed"] = seed;
    m["arguments"] = arguments;
    m["config"] = json::parse(cfg.to_json());
    m["config_hash"] = fnv1a(json{{"command", command}, {"arguments", arguments}, {"config", m["config"]}, {"seed", seed}}.dump());
    m["artifacts"] = artifacts;
    write_atomic(out / "manifest.json", json_text(m));
}

std::string features_text(const Dataset& ds) {
    std::ostringstream s;
    write_features(s, ds);
    return s.str();
}

std::string dissimilarity_text(std::span<const DissimilaritySample> samples) {
    std::ostringstream s;
    write_dissimilarities(s, samples);
    return s.str();
}

json scaler_json(const StandardScaler& s) { return {{"means", s.means()}, {"std_devs", s.std_devs()}}; }

StandardScaler load_scaler(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scaler " + path.string());
    try {
        const auto j = json::parse(in);
        return StandardScaler(j.at("means").get<std::vector<double>>(), j.at("std_devs").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ParseError("scaler " + path.string() + ": " + e.what(), 0);
    }
}

StandardScaler fit_scaler(std::span<const DissimilaritySample> samples, bool standardize) {
    if (samples.empty()) throw DataError("empty dissimilarity set");
    if (!standardize) return StandardScaler::identity(samples.front().u.size());
    std::vector<std::vector<double>> u;
    u.reserve(samples.size());
    for (const auto& s : samples) u.push_back(s.u);
    return StandardScaler::fit(u);
}

std::vector<DissimilaritySample> standardized(std::vector<DissimilaritySample> samples, const StandardScaler& scaler) {
    for (auto& s : samples) scaler.apply_in_place(s.u);
    return samples;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Exploitation-plan flags shared by ih-report and transfer.
struct PlanFlags {
    std::optional<std::size_t> references, genuine, skilled, random, simple;
    std::optional<std::vector<std::size_t>> reference_counts;
    std::optional<std::string> fusion;

    void add(CLI::App* cmd) {
        cmd->add_option("--references", references, "Enrolled references per writer");
        cmd->add_option("--questioned-genuine", genuine, "Questioned genuines per writer");
        cmd->add_option("--skilled", skilled, "Skilled forgeries per writer");
        cmd->add_option("--random", random, "Random forgeries per writer");
        cmd->add_option("--simple", simple, "Simple forgeries per writer");
        cmd->add_option("--reference-counts", reference_counts, "Reference counts to evaluate");
        cmd->add_option("--fusion", fusion, "Fusion used with several references (max, min, mean, median)");
    }

    void apply(ExperimentConfig& cfg) const {
        override_with(references, cfg.plan.references);
        override_with(genuine, cfg.plan.genuine);
        override_with(skilled, cfg.plan.skilled);
        override_with(random, cfg.plan.random);
        override_with(simple, cfg.plan.simple);
        override_with(reference_counts, cfg.reference_counts);
        if (fusion) {
            const auto f = parse_fusion_kind(*fusion);
            if (!f) throw ConfigError("unknown fusion '" + *fusion + "'");
            cfg.table_fusion = *f;
            cfg.fusions = {*f};
        }
    }
};

std::string exploitation_summary(const ExploitationResult& r) {
    std::ostringstream out;
    out << "questioned signatures: " << r.questioned_total << "\n";
    out << "config      writers  global EER (%)\n";
    for (std::size_t c = 0; c < r.configs.size(); ++c) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-10s %8zu  %s\n", r.configs[c].label().c_str(), r.global[c].writers,
                      fixed(100.0 * r.global[c].eer, 2).c_str());
        out << buf;
    }
    return out.str();
}

std::string writers_tsv(const ExploitationResult& r) {
    std::string s = "config\twriter\tthreshold\teer\tfar\tfrr\n";
    for (std::size_t c = 0; c < r.configs.size(); ++c) {
        for (const auto& w : r.writers[c]) {
            s += r.configs[c].label() + "\t" + std::to_string(w.writer_id) + "\t" + fixed(w.user_threshold, 9) + "\t" +
                 fixed(w.eer, 6) + "\t" + fixed(w.far, 6) + "\t" + fixed(w.frr, 6) + "\n";
        }
    }
    return s;
}

constexpr QueryCategory kCategories[] = {QueryCategory::positive, QueryCategory::negative_random,
                                         QueryCategory::negative_skilled, QueryCategory::negative_simple};

// IH tables of one exploitation run, columns restricted to `columns`.
std::vector<IhAccuracyTable> ih_tables(const ExploitationResult& r, const std::vector<ReferenceConfig>& columns) {
    std::vector<std::size_t> pick;
    std::vector<std::string> labels;
    for (const auto& col : columns) {
        const auto it = std::find(r.configs.begin(), r.configs.end(), col);
        if (it == r.configs.end()) throw ConfigError("configuration " + col.label() + " was not evaluated");
        pick.push_back(static_cast<std::size_t>(it - r.configs.begin()));
        labels.push_back(col.label());
    }
    std::vector<EvaluatedQuery> projected = r.queries;
    for (auto& q : projected) {
        std::vector<char> kept;
        for (const auto idx : pick) kept.push_back(q.correct[idx]);
        q.correct = std::move(kept);
    }
    std::vector<IhAccuracyTable> tables;
    for (const auto category : kCategories) tables.push_back(ih_accuracy_table(projected, category, labels));
    return tables;
}

// --- subcommands -----------------------------------------------------------

struct SynthCmd {
    Common common;
    std::optional<std::size_t> writers, dims, genuine, skilled, simple, styles, exploitation_writers;
    std::optional<double> genuine_spread, centroid_spread, good_fraction, good_offset, bad_offset, style_spread;
    bool benchmark = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("synth", "Generate a synthetic feature dataset");
        add_common(cmd, common);
        cmd->add_flag("--benchmark", benchmark, "Start from the synthetic benchmark parameters");
        cmd->add_option("--writers", writers);
        cmd->add_option("--dims", dims);
        cmd->add_option("--genuine", genuine);
        cmd->add_option("--skilled", skilled);
        cmd->add_option("--simple", simple);
        cmd->add_option("--genuine-spread", genuine_spread);
        cmd->add_option("--centroid-spread", centroid_spread);
        cmd->add_option("--good-fraction", good_fraction);
        cmd->add_option("--good-offset", good_offset);
        cmd->add_option("--bad-offset", bad_offset);
        cmd->add_option("--styles", styles);
        cmd->add_option("--style-spread", style_spread);
        cmd->add_option("--exploitation-writers", exploitation_writers,
                        "Also write development.csv / exploitation.csv split at this many writers");
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = benchmark ? synthetic_benchmark_config() : base_config(common);
        SynthConfig s = cfg.synth.value_or(SynthConfig{});
        override_with(writers, s.writers);
        override_with(dims, s.dims);
        override_with(genuine, s.genuine);
        override_with(skilled, s.skilled);
        override_with(simple, s.simple);
        override_with(genuine_spread, s.genuine_spread);
        override_with(centroid_spread, s.centroid_spread);
        override_with(good_fraction, s.good_fraction);
        override_with(good_offset, s.good_offset);
        override_with(bad_offset, s.bad_offset);
        override_with(styles, s.styles);
        override_with(style_spread, s.style_spread);
        s.validate();
        cfg.synth = s;
        const auto seed = seed_of(common, cfg);
        const fs::path out(common.out);
        const auto ds = synth_generate(s, seed);
        std::vector<std::string> artifacts{"features.csv"};
        write_atomic(out / "features.csv", features_text(ds));
        if (exploitation_writers) {
            const auto [dev, expl] = split_by_writers(ds, *exploitation_writers);
            write_atomic(out / "development.csv", features_text(dev));
            write_atomic(out / "exploitation.csv", features_text(expl));
            artifacts.insert(artifacts.end(), {"development.csv", "exploitation.csv"});
        }
        write_manifest(out, "synth", cfg, seed, {{"exploitation_writers", exploitation_writers.value_or(0)}},
                       artifacts);
    }
};

struct BuildDsCmd {
    Common common;
    std::string features;
    std::optional<std::size_t> genuines_per_writer, forgery_writers;
    bool random_selection = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("build-ds", "Build the dissimilarity training set of a development dataset");
        add_common(cmd, common);
        cmd->add_option("--features", features, "Development feature file")->required();
        cmd->add_option("--genuines-per-writer", genuines_per_writer, "R: genuines paired per writer");
        cmd->add_option("--forgery-writers", forgery_writers, "F: writers lending random forgeries");
        cmd->add_flag("--random-selection", random_selection, "Pick the R genuines at random instead of lowest ids");
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        override_with(genuines_per_writer, cfg.genuines_per_writer);
        override_with(forgery_writers, cfg.random_forgery_writers);
        if (random_selection) cfg.random_selection = true;
        const auto seed = seed_of(common, cfg);
        const PairingPlan plan{cfg.genuines_per_writer, cfg.random_forgery_writers, seed, cfg.random_selection};
        plan.validate();
        const auto ds = load_features(features);
        const auto samples = build_training_set(ds, plan);
        const fs::path out(common.out);
        write_atomic(out / "dissimilarities.csv", dissimilarity_text(samples));
        std::size_t pos = 0;
        for (const auto& s : samples) pos += s.label == Label::positive ? 1 : 0;
        write_manifest(out, "build-ds", cfg, seed,
                       {{"features", features}, {"positive", pos}, {"negative", samples.size() - pos}},
                       {"dissimilarities.csv"});
        std::cout << "positive " << pos << ", negative " << samples.size() - pos << "\n";
    }
};

struct CondenseCmd {
    Common common;
    std::string input;
    bool no_standardize = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("condense", "Condensed nearest neighbour selection of a dissimilarity set");
        add_common(cmd, common);
        cmd->add_option("--input", input, "Dissimilarity file (raw)")->required();
        cmd->add_flag("--no-standardize", no_standardize, "Condense in the raw space");
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        if (no_standardize) cfg.standardize = false;
        const auto seed = seed_of(common, cfg);
        const auto samples = load_dissimilarities(input);
        const auto scaler = fit_scaler(samples, cfg.standardize);
        const auto result = condense(standardized(samples, scaler), seed);
        const auto kept = select(samples, result);
        const fs::path out(common.out);
        write_atomic(out / "condensed.csv", dissimilarity_text(kept));
        write_atomic(out / "scaler.json", json_text(scaler_json(scaler)));
        std::ostringstream stats;
        stats << "input " << result.input_size << "\nretained " << result.retained_size() << "\nratio "
              << fixed(static_cast<double>(result.retained_size()) / static_cast<double>(result.input_size), 6)
              << "\npasses " << result.passes << "\n";
        write_atomic(out / "condensation.txt", stats.str());
        write_manifest(out, "condense", cfg, seed, {{"input", input}},
                       {"condensed.csv", "scaler.json", "condensation.txt"});
        std::cout << stats.str();
    }
};

struct KernelFlags {
    std::optional<double> gamma, c, tol;
    std::optional<std::size_t> max_passes, cache_mb;

    void add(CLI::App* cmd) {
        cmd->add_option("--gamma", gamma, "RBF kernel width");
        cmd->add_option("--c", c, "Soft-margin penalty");
        cmd->add_option("--tol", tol, "SMO stopping tolerance");
        cmd->add_option("--max-passes", max_passes, "SMO budget in passes over the training set");
        cmd->add_option("--cache-mb", cache_mb, "Kernel row cache size");
    }

    void apply(ExperimentConfig& cfg) const {
        override_with(gamma, cfg.kernel.gamma);
        override_with(c, cfg.kernel.c);
        override_with(tol, cfg.smo.tol);
        override_with(max_passes, cfg.smo.max_passes);
        override_with(cache_mb, cfg.smo.cache_mb);
    }
};

struct TrainCmd {
    Common common;
    std::string input, scaler_path;
    bool no_standardize = false;
    KernelFlags kernel;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("train", "Train the dichotomizer on a dissimilarity set");
        add_common(cmd, common);
        cmd->add_option("--input", input, "Dissimilarity file (raw)")->required();
        cmd->add_option("--scaler", scaler_path, "Scaler written by condense (otherwise fitted on the input)");
        cmd->add_flag("--no-standardize", no_standardize, "Train in the raw space");
        kernel.add(cmd);
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        kernel.apply(cfg);
        if (no_standardize) cfg.standardize = false;
        cfg.kernel.validate();
        const auto samples = load_dissimilarities(input);
        const auto scaler = scaler_path.empty() ? fit_scaler(samples, cfg.standardize) : load_scaler(scaler_path);
        const auto labeled = to_labeled(standardized(samples, scaler));
        const auto result = train_smo(labeled, cfg.kernel, cfg.smo, scaler);
        const fs::path out(common.out);
        write_atomic(out / "model.json", result.model.to_json());
        std::ostringstream stats;
        stats << "samples " << labeled.x.size() << "\nsupport_vectors " << result.model.support_vectors().size()
              << "\niterations " << result.iterations << "\ndual_objective " << fixed(result.dual_objective, 9)
              << "\nmax_kkt_violation " << fixed(result.max_kkt_violation, 9) << "\nbias "
              << fixed(result.model.bias(), 9) << "\n";
        write_atomic(out / "training.txt", stats.str());
        write_manifest(out, "train", cfg, seed_of(common, cfg), {{"input", input}, {"scaler", scaler_path}},
                       {"model.json", "training.txt"});
        std::cout << stats.str();
    }
};

struct GridSearchCmd {
    Common common;
    std::string input, validation, scaler_path;
    std::optional<std::vector<double>> c_grid, gamma_grid;
    bool no_standardize = false;
    KernelFlags kernel;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("grid-search", "Select C and gamma on a validation dissimilarity set");
        add_common(cmd, common);
        cmd->add_option("--input", input, "Training dissimilarity file (raw)")->required();
        cmd->add_option("--validation", validation, "Validation dissimilarity file (raw)")->required();
        cmd->add_option("--scaler", scaler_path, "Scaler (otherwise fitted on the training input)");
        cmd->add_option("--c-grid", c_grid, "Candidate C values");
        cmd->add_option("--gamma-grid", gamma_grid, "Candidate gamma values");
        cmd->add_flag("--no-standardize", no_standardize, "Search in the raw space");
        kernel.add(cmd);
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        kernel.apply(cfg);
        override_with(c_grid, cfg.c_grid);
        override_with(gamma_grid, cfg.gamma_grid);
        if (no_standardize) cfg.standardize = false;
        if (cfg.c_grid.empty() || cfg.gamma_grid.empty()) throw ConfigError("grid search needs non-empty grids");
        const auto train_set = load_dissimilarities(input);
        const auto val_set = load_dissimilarities(validation);
        const auto scaler = scaler_path.empty() ? fit_scaler(train_set, cfg.standardize) : load_scaler(scaler_path);
        const auto result = grid_search(to_labeled(standardized(train_set, scaler)),
                                        to_labeled(standardized(val_set, scaler)), cfg.c_grid, cfg.gamma_grid,
                                        cfg.smo, scaler);
        std::string tsv = "c\tgamma\tvalidation_eer\n";
        for (const auto& p : result.evaluated) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.6f\n", p.params.c, p.params.gamma, p.validation_eer);
            tsv += buf;
        }
        const fs::path out(common.out);
        write_atomic(out / "grid.tsv", tsv);
        write_atomic(out / "best.json", json_text({{"c", result.best.c}, {"gamma", result.best.gamma}}));
        write_manifest(out, "grid-search", cfg, seed_of(common, cfg),
                       {{"input", input}, {"validation", validation}, {"scaler", scaler_path}},
                       {"grid.tsv", "best.json"});
        std::cout << "best C " << result.best.c << ", gamma " << result.best.gamma << "\n";
    }
};

struct VerifyCmd {
    Common common;
    std::string model_path, features, requests, fusion = "max";
    double threshold = 0.0;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("verify", "Verify questioned signatures against claimed writers' references");
        add_common(cmd, common);
        cmd->add_option("--model", model_path, "Trained model")->required();
        cmd->add_option("--features", features, "Feature file holding questioned and reference signatures")
            ->required();
        cmd->add_option("--requests", requests, "Verification manifest")->required();
        cmd->add_option("--fusion", fusion, "max, min, mean or median");
        cmd->add_option("--threshold", threshold, "Accept when the fused score is at least this value");
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        const auto cfg = base_config(common);
        const auto kind = parse_fusion_kind(fusion);
        if (!kind) throw ConfigError("unknown fusion '" + fusion + "'");
        const auto model = DichotomizerModel::load(model_path);
        const auto ds = load_features(features);
        const auto reqs = load_verification_manifest(requests);
        const auto rows = verify_batch(model, ds, reqs, *kind, threshold);
        std::ostringstream csv;
        write_batch_outcomes(csv, rows);
        const fs::path out(common.out);
        write_atomic(out / "outcomes.csv", csv.str());
        write_manifest(out, "verify", cfg, seed_of(common, cfg),
                       {{"model", model_path}, {"features", features}, {"requests", requests}, {"fusion", fusion},
                        {"threshold", threshold}},
                       {"outcomes.csv"});
        std::size_t accepted = 0;
        for (const auto& r : rows) accepted += r.outcome.decision == Decision::accept ? 1 : 0;
        std::cout << rows.size() << " requests, " << accepted << " accepted\n";
    }
};

struct EvalCmd {
    Common common;
    bool benchmark = false, no_condense = false, grid = false;
    std::optional<std::size_t> replications, exploitation_writers;
    std::optional<std::string> development, exploitation;
    KernelFlags kernel;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("eval", "Run the full experiment and write the report");
        add_common(cmd, common);
        cmd->add_flag("--benchmark", benchmark, "Use the synthetic benchmark configuration");
        cmd->add_option("--replications", replications);
        cmd->add_flag("--no-condense", no_condense, "Train without condensation");
        cmd->add_flag("--grid-search", grid, "Select C and gamma on held-out development writers");
        cmd->add_option("--development", development, "Development feature file (replaces synthetic data)");
        cmd->add_option("--exploitation", exploitation, "Exploitation feature file");
        cmd->add_option("--exploitation-writers", exploitation_writers);
        kernel.add(cmd);
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = benchmark ? synthetic_benchmark_config() : base_config(common);
        override_with(replications, cfg.replications);
        override_with(exploitation_writers, cfg.exploitation_writers);
        if (common.seed) cfg.master_seed = *common.seed;
        if (no_condense) cfg.condense = false;
        if (grid) cfg.grid_search = true;
        if (development) {
            cfg.synth.reset();
            cfg.development_features = *development;
        }
        override_with(exploitation, cfg.exploitation_features);
        kernel.apply(cfg);
        cfg.validate();
        const auto result = run_experiment(cfg);
        write_report(result, common.out);
        std::cout << format_report(result);
    }
};

struct IhReportCmd {
    Common common;
    std::string model_path, training, features;
    std::optional<std::size_t> k;
    PlanFlags plan;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("ih-report", "Instance hardness vs accuracy tables for a trained model");
        add_common(cmd, common);
        cmd->add_option("--model", model_path, "Trained model")->required();
        cmd->add_option("--training", training, "Training dissimilarity file (raw, e.g. condensed.csv)")->required();
        cmd->add_option("--features", features, "Exploitation feature file")->required();
        cmd->add_option("--k", k, "Neighbours for kDN");
        plan.add(cmd);
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        plan.apply(cfg);
        override_with(k, cfg.hardness_k);
        const auto seed = seed_of(common, cfg);
        const auto model = DichotomizerModel::load(model_path);
        const auto hardness_set = to_labeled(standardized(load_dissimilarities(training), model.scaler()));
        const auto ds = load_features(features);
        ExploitationPlan p = cfg.plan;
        p.seed = seed;
        const auto columns = cfg.table_configs();
        const auto result = evaluate_exploitation(model, ds, p, columns, &hardness_set, cfg.hardness_k);
        std::string text = exploitation_summary(result);
        std::string tsv = "category\tih\tcount\tconfig\tcorrect\taccuracy\n";
        for (const auto& t : ih_tables(result, columns)) {
            text += "\n[" + std::string(to_string(t.category)) + "]\n" + format_ih_table(t);
            for (const auto& row : t.rows) {
                for (std::size_t c = 0; c < t.configurations.size(); ++c) {
                    const auto acc = row.accuracy(c);
                    tsv += std::string(to_string(t.category)) + "\t" +
                           fixed(static_cast<double>(row.disagreeing) / static_cast<double>(t.k), 6) + "\t" +
                           std::to_string(row.count) + "\t" + t.configurations[c] + "\t" +
                           std::to_string(row.correct[c]) + "\t" + (acc ? fixed(*acc, 4) : "-") + "\n";
                }
            }
        }
        const fs::path out(common.out);
        write_atomic(out / "ih_tables.txt", text);
        write_atomic(out / "ih_tables.tsv", tsv);
        write_manifest(out, "ih-report", cfg, seed,
                       {{"model", model_path}, {"training", training}, {"features", features}},
                       {"ih_tables.txt", "ih_tables.tsv"});
        std::cout << text;
    }
};

struct TransferCmd {
    Common common;
    std::string model_path, features, training;
    PlanFlags plan;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("transfer", "Apply a trained model to a dataset of unseen writers");
        add_common(cmd, common);
        cmd->add_option("--model", model_path, "Trained model")->required();
        cmd->add_option("--features", features, "Foreign feature file")->required();
        cmd->add_option("--training", training, "Training dissimilarity file for hardness (optional)");
        plan.add(cmd);
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    void run() {
        auto cfg = base_config(common);
        plan.apply(cfg);
        const auto seed = seed_of(common, cfg);
        const auto model = DichotomizerModel::load(model_path);
        const auto foreign = load_features(features);
        std::optional<LabeledVectors> hardness_set;
        if (!training.empty()) {
            hardness_set = to_labeled(standardized(load_dissimilarities(training), model.scaler()));
        }
        ExploitationPlan p = cfg.plan;
        p.seed = seed;
        const auto configs = cfg.reference_configs();
        const auto result = transfer_eval(model, foreign, p, configs, hardness_set ? &*hardness_set : nullptr,
                                          cfg.hardness_k);
        std::string text = "transfer of " + model_path + " to " + features + "\n" + exploitation_summary(result);
        std::vector<std::string> artifacts{"transfer.txt", "writers.tsv"};
        const fs::path out(common.out);
        if (hardness_set) {
            for (const auto& t : ih_tables(result, cfg.table_configs())) {
                text += "\n[" + std::string(to_string(t.category)) + "]\n" + format_ih_table(t);
            }
        }
        write_atomic(out / "transfer.txt", text);
        write_atomic(out / "writers.tsv", writers_tsv(result));
        write_manifest(out, "transfer", cfg, seed,
                       {{"model", model_path}, {"features", features}, {"training", training}}, artifacts);
        std::cout << text;
    }
};

struct DumpCmd {
    Common common;
    std::string model_path, training, queries, features, questioned;
    std::optional<std::int64_t> claimed, reference_id;
    std::optional<std::size_t> k;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("dump-neighborhood", "Write the training neighbourhood of questioned samples");
        add_common(cmd, common);
        cmd->add_option("--model", model_path, "Trained model (its scaler places queries in the training space)")
            ->required();
        cmd->add_option("--training", training, "Training dissimilarity file (raw, e.g. condensed.csv)")->required();
        cmd->add_option("--queries", queries, "Dissimilarity file of queries (raw); one dump per row");
        cmd->add_option("--features", features, "Feature file holding the questioned signature");
        cmd->add_option("--questioned", questioned, "writer:signature:kind of the questioned signature");
        cmd->add_option("--claimed", claimed, "Claimed writer (defaults to the questioned writer)");
        cmd->add_option("--reference-id", reference_id, "Reference genuine id (defaults to the lowest)");
        cmd->add_option("--k", k, "Neighbours");
        cmd->callback([this] { g_action = [this] { run(); }; });
    }

    std::vector<DissimilaritySample> query_from_features() const {
        const auto parts = [&] {
            std::vector<std::string> v;
            std::stringstream ss(questioned);
            for (std::string item; std::getline(ss, item, ':');) v.push_back(item);
            return v;
        }();
        if (parts.size() != 3) throw ConfigError("--questioned must be writer:signature:kind");
        std::int64_t qw = 0, qs = 0;
        try {
            qw = std::stoll(parts[0]);
            qs = std::stoll(parts[1]);
        } catch (const std::exception&) {
            throw ConfigError("--questioned must be writer:signature:kind");
        }
        const auto kind = parse_signature_kind(parts[2]);
        if (!kind) throw ConfigError("unknown signature kind '" + parts[2] + "'");
        const auto ds = load_features(features);
        const SignatureRecord* q = nullptr;
        for (const auto* r : ds.of_writer(qw, *kind)) {
            if (r->signature_id == qs) q = r;
        }
        if (!q) throw DataError("questioned signature " + questioned + " not found");
        const auto writer = claimed.value_or(qw);
        const auto refs = ds.of_writer(writer, SignatureKind::genuine);
        const SignatureRecord* ref = nullptr;
        for (const auto* r : refs) {
            if (!reference_id || r->signature_id == *reference_id) {
                ref = r;
                break;
            }
        }
        if (!ref) throw DataError("no reference genuine for writer " + std::to_string(writer));
        return build_query_set(*q, std::vector<SignatureRecord>{*ref}, true);
    }

    void run() {
        auto cfg = base_config(common);
        override_with(k, cfg.hardness_k);
        if (queries.empty() == (features.empty() || questioned.empty())) {
            throw ConfigError("give either --queries or --features with --questioned");
        }
        const auto model = DichotomizerModel::load(model_path);
        const auto train_set = standardized(load_dissimilarities(training), model.scaler());
        const auto query_set = standardized(queries.empty() ? query_from_features() : load_dissimilarities(queries),
                                            model.scaler());
        const fs::path out(common.out);
        std::vector<std::string> artifacts;
        for (const auto& q : query_set) {
            const auto dump = dump_neighborhood(q, train_set, cfg.hardness_k);
            const auto name = neighborhood_file_name(dump);
            write_atomic(out / name, format_neighborhood(dump));
            artifacts.push_back(name);
        }
        write_manifest(out, "dump-neighborhood", cfg, seed_of(common, cfg),
                       {{"model", model_path}, {"training", training}, {"queries", queries}, {"features", features},
                        {"questioned", questioned}},
                       artifacts);
        std::cout << artifacts.size() << " neighbourhood dump(s) written\n";
    }
};

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kUsage;
    if (dynamic_cast<const ConvergenceError*>(&e)) return kCompute;
    if (dynamic_cast<const Error*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return kInput;
    return kCompute;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Writer-independent offline signature verification in the dissimilarity space"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    SynthCmd synth;
    BuildDsCmd build_ds;
    CondenseCmd condense_cmd;
    TrainCmd train_cmd;
    GridSearchCmd grid_cmd;
    VerifyCmd verify_cmd;
    EvalCmd eval_cmd;
    IhReportCmd ih_cmd;
    TransferCmd transfer_cmd;
    DumpCmd dump_cmd;
    synth.add(app);
    build_ds.add(app);
    condense_cmd.add(app);
    train_cmd.add(app);
    grid_cmd.add(app);
    verify_cmd.add(app);
    eval_cmd.add(app);
    ih_cmd.add(app);
    transfer_cmd.add(app);
    dump_cmd.add(app);

    // The output directory of whichever subcommand was selected.
    const std::vector<const Common*> commons{&synth.common,    &build_ds.common, &condense_cmd.common,
                                             &train_cmd.common, &grid_cmd.common, &verify_cmd.common,
                                             &eval_cmd.common,  &ih_cmd.common,   &transfer_cmd.common,
                                             &dump_cmd.common};
    auto out_dir = [&]() -> fs::path {
        for (const auto* c : commons) {
            if (!c->out.empty()) return c->out;
        }
        return {};
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    const auto out = out_dir();
    try {
        if (!out.empty()) {
            fs::create_directories(out);
            fs::remove(out / "FAILED");
        }
        g_action();
    } catch (const std::exception& e) {
        std::cerr << "sigdt: error: " << e.what() << "\n";
        const int rc = exit_code_for(e);
        if (!out.empty() && fs::is_directory(out)) {
            std::ofstream marker(out / "FAILED");
            marker << "exit " << rc << ": " << e.what() << "\n";
        }
        return rc;
    }
    return kOk;
}

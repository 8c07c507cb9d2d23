#include "sigdt/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sigdt/error.hpp"
#include "sigdt/feature_io.hpp"
#include "sigdt/hardness.hpp"
#include "sigdt/random.hpp"

namespace sigdt {

using nlohmann::json;

std::string_view library_version() { return "sigdt 1.0.0"; }

void ExploitationPlan::validate() const {
    if (references == 0) throw ConfigError("exploitation plan: at least one reference is required");
    if (genuine == 0) throw ConfigError("exploitation plan: at least one questioned genuine is required");
}

std::string ReferenceConfig::label() const {
    if (references == 1) return "R1";
    return "R" + std::to_string(references) + "_" + std::string(to_string(fusion));
}

// ---------------------------------------------------------------------------
// generalization phase

namespace {

struct Questioned {
    const SignatureRecord* record;
    QueryKind kind;
};

}  // namespace

ExploitationResult evaluate_exploitation(const DichotomizerModel& model, const Dataset& exploitation,
                                         const ExploitationPlan& plan, std::span<const ReferenceConfig> configs,
                                         const LabeledVectors* hardness_training, std::size_t hardness_k) {
    plan.validate();
    if (configs.empty()) throw ConfigError("no reference configuration to evaluate");
    for (const auto& c : configs) {
        if (c.references == 0 || c.references > plan.references) {
            throw ConfigError("reference configuration " + c.label() + " exceeds the " +
                              std::to_string(plan.references) + " enrolled references");
        }
    }
    if (exploitation.dimensionality != model.dimensionality()) {
        throw DimensionError("dataset '" + exploitation.name + "' has " + std::to_string(exploitation.dimensionality) +
                             " features, the model expects " + std::to_string(model.dimensionality()));
    }

    const auto writer_ids = exploitation.writers();
    std::map<std::int64_t, std::vector<const SignatureRecord*>> genuines;
    for (const auto w : writer_ids) genuines.emplace(w, exploitation.of_writer(w, SignatureKind::genuine));

    ExploitationResult result;
    result.configs.assign(configs.begin(), configs.end());
    result.writers.resize(configs.size());
    result.global.resize(configs.size());

    for (std::size_t wi = 0; wi < writer_ids.size(); ++wi) {
        const auto w = writer_ids[wi];
        const auto& gen = genuines.at(w);
        if (gen.size() < plan.references + plan.genuine) {
            throw DataError("writer " + std::to_string(w) + " has " + std::to_string(gen.size()) +
                            " genuine signatures; the plan needs " + std::to_string(plan.references) +
                            " references + " + std::to_string(plan.genuine) + " questioned");
        }
        std::vector<SignatureRecord> refs;
        for (std::size_t r = 0; r < plan.references; ++r) refs.push_back(*gen[r]);

        std::vector<Questioned> questioned;
        for (std::size_t g = gen.size() - plan.genuine; g < gen.size(); ++g) {
            questioned.push_back({gen[g], QueryKind::genuine});
        }
        const auto skilled = exploitation.of_writer(w, SignatureKind::skilled);
        if (skilled.empty()) continue;  // no user threshold without skilled forgeries
        for (std::size_t s = 0; s < std::min(plan.skilled, skilled.size()); ++s) {
            questioned.push_back({skilled[s], QueryKind::skilled});
        }
        if (plan.random > 0) {
            if (writer_ids.size() - 1 < plan.random) {
                throw DataError("random forgeries need " + std::to_string(plan.random) + " other writers, only " +
                                std::to_string(writer_ids.size() - 1) + " available");
            }
            Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(w)));
            for (const auto pick : rng.sample_without_replacement(writer_ids.size() - 1, plan.random)) {
                const auto other = writer_ids[pick < wi ? pick : pick + 1];
                const auto& pool = genuines.at(other);
                if (pool.empty()) throw DataError("writer " + std::to_string(other) + " has no genuine signature");
                questioned.push_back({pool[rng.index(pool.size())], QueryKind::random});
            }
        }
        const auto simple = exploitation.of_writer(w, SignatureKind::simple);
        for (std::size_t s = 0; s < std::min(plan.simple, simple.size()); ++s) {
            questioned.push_back({simple[s], QueryKind::simple});
        }

        // scores of every questioned signature against every reference
        std::vector<std::vector<double>> partial(questioned.size());
        std::vector<std::optional<HardnessScore>> hardness(questioned.size());
        for (std::size_t q = 0; q < questioned.size(); ++q) {
            const auto queries = build_query_set(*questioned[q].record, refs, false);
            partial[q].reserve(queries.size());
            for (const auto& s : queries) partial[q].push_back(model.score(s.u));
            if (hardness_training) {
                const auto first = model.scaler().apply(queries.front().u);
                const int label = questioned[q].kind == QueryKind::genuine ? 1 : -1;
                hardness[q] = kdn(first, label, *hardness_training, hardness_k);
            }
        }

        std::vector<EvaluatedQuery> evaluated(questioned.size());
        for (std::size_t q = 0; q < questioned.size(); ++q) {
            evaluated[q].questioned = {questioned[q].record->writer_id, questioned[q].record->signature_id};
            evaluated[q].claimed_writer = w;
            evaluated[q].category = category_of(questioned[q].kind);
            evaluated[q].hardness = hardness[q];
            evaluated[q].correct.assign(configs.size(), 0);
        }

        for (std::size_t c = 0; c < configs.size(); ++c) {
            WriterEvaluation we;
            we.writer_id = w;
            if (plan.simple > 0) we.simple_scores.emplace();
            std::vector<double> fused(questioned.size());
            for (std::size_t q = 0; q < questioned.size(); ++q) {
                fused[q] = fuse(std::span(partial[q]).first(configs[c].references), configs[c].fusion).value;
                switch (questioned[q].kind) {
                    case QueryKind::genuine: we.genuine_scores.push_back(fused[q]); break;
                    case QueryKind::skilled: we.skilled_scores.push_back(fused[q]); break;
                    case QueryKind::random: we.random_scores.push_back(fused[q]); break;
                    case QueryKind::simple: we.simple_scores->push_back(fused[q]); break;
                }
            }
            assign_user_threshold(we);
            for (std::size_t q = 0; q < questioned.size(); ++q) {
                const bool accepted = fused[q] >= we.user_threshold;
                evaluated[q].correct[c] = (questioned[q].kind == QueryKind::genuine) == accepted ? 1 : 0;
            }
            result.writers[c].push_back(std::move(we));
        }
        result.questioned_total += questioned.size();
        for (auto& e : evaluated) result.queries.push_back(std::move(e));
    }

    for (std::size_t c = 0; c < configs.size(); ++c) result.global[c] = global_report(result.writers[c]);
    return result;
}

ExploitationResult transfer_eval(const DichotomizerModel& model, const Dataset& foreign, const ExploitationPlan& plan,
                                 std::span<const ReferenceConfig> configs, const LabeledVectors* hardness_training,
                                 std::size_t hardness_k) {
    if (foreign.dimensionality != model.dimensionality()) {
        throw DimensionError("transfer: foreign dataset has " + std::to_string(foreign.dimensionality) +
                             " features, the model was trained on " + std::to_string(model.dimensionality()));
    }
    return evaluate_exploitation(model, foreign, plan, configs, hardness_training, hardness_k);
}

// ---------------------------------------------------------------------------
// configuration

void ExperimentConfig::validate() const {
    if (synth) {
        synth->validate();
        if (exploitation_writers == 0 || exploitation_writers >= synth->writers) {
            throw ConfigError("exploitation_writers must be in [1, synth.writers)");
        }
    } else if (development_features.empty()) {
        throw ConfigError("either synth parameters or development_features must be given");
    }
    PairingPlan{genuines_per_writer, random_forgery_writers, 0, random_selection}.validate();
    kernel.validate();
    if (!(smo.tol > 0.0)) throw ConfigError("smo.tol must be positive");
    if (smo.max_passes == 0) throw ConfigError("smo.max_passes must be positive");
    plan.validate();
    if (reference_counts.empty()) throw ConfigError("reference_counts must not be empty");
    for (const auto r : reference_counts) {
        if (r == 0 || r > plan.references) {
            throw ConfigError("reference count " + std::to_string(r) + " outside [1, " +
                              std::to_string(plan.references) + "]");
        }
    }
    if (fusions.empty()) throw ConfigError("fusions must not be empty");
    if (std::find(fusions.begin(), fusions.end(), table_fusion) == fusions.end()) {
        throw ConfigError("table_fusion must be one of the evaluated fusions");
    }
    if (replications == 0) throw ConfigError("replications must be positive");
    if (hardness_k == 0) throw ConfigError("hardness_k must be positive");
    if (grid_search) {
        if (c_grid.empty() || gamma_grid.empty()) throw ConfigError("grid search needs non-empty grids");
        if (validation_writers < 2) throw ConfigError("grid search needs at least 2 validation writers");
    }
}

std::vector<ReferenceConfig> ExperimentConfig::reference_configs() const {
    std::set<std::size_t> counts(reference_counts.begin(), reference_counts.end());
    std::vector<ReferenceConfig> out;
    for (const auto r : counts) {
        if (r == 1) {
            out.push_back({1, FusionKind::max});
            continue;
        }
        for (const auto f : fusions) out.push_back({r, f});
    }
    return out;
}

std::vector<ReferenceConfig> ExperimentConfig::table_configs() const {
    std::set<std::size_t> counts(reference_counts.begin(), reference_counts.end());
    std::vector<ReferenceConfig> out;
    for (const auto r : counts) out.push_back({r, r == 1 ? FusionKind::max : table_fusion});
    return out;
}

namespace {

json synth_to_json(const SynthConfig& s) {
    return {{"writers", s.writers},
            {"dims", s.dims},
            {"genuine", s.genuine},
            {"skilled", s.skilled},
            {"simple", s.simple},
            {"genuine_spread", s.genuine_spread},
            {"centroid_spread", s.centroid_spread},
            {"good_fraction", s.good_fraction},
            {"good_offset", s.good_offset},
            {"bad_offset", s.bad_offset},
            {"styles", s.styles},
            {"style_spread", s.style_spread}};
}

// Reads known keys into `target`, rejecting unknown ones.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
    }

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError("unknown configuration key " + where_ + "." + key);
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

FusionKind fusion_from(const std::string& s) {
    const auto f = parse_fusion_kind(s);
    if (!f) throw ConfigError("unknown fusion '" + s + "'");
    return *f;
}

json config_json(const ExperimentConfig& c) {
    json j;
    j["synth"] = c.synth ? synth_to_json(*c.synth) : json(nullptr);
    j["exploitation_writers"] = c.exploitation_writers;
    j["development_features"] = c.development_features;
    j["exploitation_features"] = c.exploitation_features;
    j["genuines_per_writer"] = c.genuines_per_writer;
    j["random_forgery_writers"] = c.random_forgery_writers;
    j["random_selection"] = c.random_selection;
    j["standardize"] = c.standardize;
    j["condense"] = c.condense;
    j["kernel"] = {{"gamma", c.kernel.gamma}, {"c", c.kernel.c}};
    j["grid_search"] = c.grid_search;
    j["c_grid"] = c.c_grid;
    j["gamma_grid"] = c.gamma_grid;
    j["validation_writers"] = c.validation_writers;
    j["smo"] = {{"tol", c.smo.tol}, {"max_passes", c.smo.max_passes}, {"cache_mb", c.smo.cache_mb}};
    j["plan"] = {{"references", c.plan.references},
                 {"genuine", c.plan.genuine},
                 {"skilled", c.plan.skilled},
                 {"random", c.plan.random},
                 {"simple", c.plan.simple}};
    j["reference_counts"] = c.reference_counts;
    std::vector<std::string> fusions;
    for (const auto f : c.fusions) fusions.emplace_back(to_string(f));
    j["fusions"] = fusions;
    j["table_fusion"] = std::string(to_string(c.table_fusion));
    j["replications"] = c.replications;
    j["master_seed"] = c.master_seed;
    j["hardness_k"] = c.hardness_k;
    return j;
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this).dump(2) + "\n"; }

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (root.is_object() && root.contains("config") && root.contains("config_hash")) root = root.at("config");

    ExperimentConfig c;
    Reader r(root, "config");
    if (const auto* s = r.child("synth")) {
        if (s->is_null()) {
            c.synth.reset();
        } else {
            SynthConfig sc;
            Reader rs(*s, "synth");
            rs.get("writers", sc.writers);
            rs.get("dims", sc.dims);
            rs.get("genuine", sc.genuine);
            rs.get("skilled", sc.skilled);
            rs.get("simple", sc.simple);
            rs.get("genuine_spread", sc.genuine_spread);
            rs.get("centroid_spread", sc.centroid_spread);
            rs.get("good_fraction", sc.good_fraction);
            rs.get("good_offset", sc.good_offset);
            rs.get("bad_offset", sc.bad_offset);
            rs.get("styles", sc.styles);
            rs.get("style_spread", sc.style_spread);
            rs.finish();
            c.synth = sc;
        }
    }
    r.get("exploitation_writers", c.exploitation_writers);
    r.get("development_features", c.development_features);
    r.get("exploitation_features", c.exploitation_features);
    if (!c.development_features.empty() && !root.contains("synth")) c.synth.reset();
    r.get("genuines_per_writer", c.genuines_per_writer);
    r.get("random_forgery_writers", c.random_forgery_writers);
    r.get("random_selection", c.random_selection);
    r.get("standardize", c.standardize);
    r.get("condense", c.condense);
    if (const auto* k = r.child("kernel")) {
        Reader rk(*k, "kernel");
        rk.get("gamma", c.kernel.gamma);
        rk.get("c", c.kernel.c);
        rk.finish();
    }
    r.get("grid_search", c.grid_search);
    r.get("c_grid", c.c_grid);
    r.get("gamma_grid", c.gamma_grid);
    r.get("validation_writers", c.validation_writers);
    if (const auto* s = r.child("smo")) {
        Reader rs(*s, "smo");
        rs.get("tol", c.smo.tol);
        rs.get("max_passes", c.smo.max_passes);
        rs.get("cache_mb", c.smo.cache_mb);
        rs.finish();
    }
    if (const auto* p = r.child("plan")) {
        Reader rp(*p, "plan");
        rp.get("references", c.plan.references);
        rp.get("genuine", c.plan.genuine);
        rp.get("skilled", c.plan.skilled);
        rp.get("random", c.plan.random);
        rp.get("simple", c.plan.simple);
        rp.finish();
    }
    r.get("reference_counts", c.reference_counts);
    std::vector<std::string> fusions;
    r.get("fusions", fusions);
    if (root.contains("fusions")) {
        c.fusions.clear();
        for (const auto& f : fusions) c.fusions.push_back(fusion_from(f));
    }
    std::string table_fusion(to_string(c.table_fusion));
    r.get("table_fusion", table_fusion);
    c.table_fusion = fusion_from(table_fusion);
    r.get("replications", c.replications);
    r.get("master_seed", c.master_seed);
    r.get("hardness_k", c.hardness_k);
    r.finish();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::hash() const {
    const std::string canonical = config_json(*this).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig synthetic_benchmark_config() {
    ExperimentConfig c;
    SynthConfig s;
    s.writers = 50;
    s.dims = 32;
    s.genuine = 24;
    s.skilled = 30;
    s.simple = 10;
    s.genuine_spread = 1.0;
    s.centroid_spread = 1.5;
    s.good_fraction = 0.2;
    s.good_offset = 1.0;
    s.bad_offset = 3.0;
    s.styles = 2;
    s.style_spread = 0.6;
    c.synth = s;
    c.exploitation_writers = 25;
    c.genuines_per_writer = 14;
    c.random_forgery_writers = 7;
    c.kernel = {0x1p-5, 1.0};
    c.plan = {12, 10, 30, 10, 10, 0};
    c.reference_counts = {1, 5, 12};
    c.replications = 10;
    c.master_seed = 2024;
    return c;
}

ReplicationSeeds replication_seeds(std::uint64_t master_seed, std::size_t replication) {
    ReplicationSeeds s;
    s.replication = derive_seed(master_seed, replication);
    s.data = derive_seed(s.replication, 1);
    s.pairing = derive_seed(s.replication, 2);
    s.condensation = derive_seed(s.replication, 3);
    s.exploitation = derive_seed(s.replication, 4);
    return s;
}

// ---------------------------------------------------------------------------
// training phase

namespace {

void standardize_all(std::vector<DissimilaritySample>& samples, const StandardScaler& scaler) {
    for (auto& s : samples) scaler.apply_in_place(s.u);
}

StandardScaler fit_on(const std::vector<DissimilaritySample>& samples, bool standardize) {
    if (samples.empty()) throw DataError("empty training set");
    if (!standardize) return StandardScaler::identity(samples.front().u.size());
    std::vector<std::vector<double>> u;
    u.reserve(samples.size());
    for (const auto& s : samples) u.push_back(s.u);
    return StandardScaler::fit(u);
}

CondensationResult keep_all(std::size_t n) {
    CondensationResult r;
    r.input_size = n;
    r.retained_indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.retained_indices[i] = i;
    return r;
}

}  // namespace

TrainedSystem train_system(const Dataset& development, const ExperimentConfig& config, const ReplicationSeeds& seeds) {
    const PairingPlan plan{config.genuines_per_writer, config.random_forgery_writers, seeds.pairing,
                           config.random_selection};
    auto samples = build_training_set(development, plan);
    const std::size_t training_size = samples.size();
    const StandardScaler scaler = fit_on(samples, config.standardize);
    standardize_all(samples, scaler);

    CondensationResult condensation = keep_all(samples.size());
    if (config.condense) {
        condensation = condense(samples, seeds.condensation);
        samples = select(samples, condensation);
    }

    KernelParams params = config.kernel;
    std::vector<GridPoint> grid;
    if (config.grid_search) {
        // hold out the last development writers as a validation split
        const auto ids = development.writers();
        if (ids.size() <= config.validation_writers + config.random_forgery_writers) {
            throw ConfigError("grid search: too few development writers for the validation split");
        }
        const std::vector<std::int64_t> held(ids.end() - static_cast<std::ptrdiff_t>(config.validation_writers),
                                             ids.end());
        const auto fit_part = development.subset(held, Split::development, false);
        const auto val_part = development.subset(held, Split::development, true);
        auto fit_samples = build_training_set(fit_part, plan);
        PairingPlan val_plan = plan;
        val_plan.random_forgery_writers = std::min(plan.random_forgery_writers, config.validation_writers - 1);
        auto val_samples = build_training_set(val_part, val_plan);
        const auto grid_scaler = fit_on(fit_samples, config.standardize);
        standardize_all(fit_samples, grid_scaler);
        standardize_all(val_samples, grid_scaler);
        if (config.condense) fit_samples = select(fit_samples, condense(fit_samples, seeds.condensation));
        auto found = grid_search(to_labeled(fit_samples), to_labeled(val_samples), config.c_grid, config.gamma_grid,
                                 config.smo, grid_scaler);
        params = found.best;
        grid = std::move(found.evaluated);
    }

    auto smo = train_smo(to_labeled(samples), params, config.smo, scaler);
    return TrainedSystem{std::move(smo.model), std::move(samples), training_size, std::move(condensation),
                         std::move(grid), smo.iterations};
}

std::pair<Dataset, Dataset> experiment_data(const ExperimentConfig& config, const ReplicationSeeds& seeds) {
    if (config.synth) return split_by_writers(synth_generate(*config.synth, seeds.data), config.exploitation_writers);
    auto dev = load_features(config.development_features);
    if (config.exploitation_features.empty()) return split_by_writers(dev, config.exploitation_writers);
    auto expl = load_features(config.exploitation_features);
    dev.split = Split::development;
    expl.split = Split::exploitation;
    return {std::move(dev), std::move(expl)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    const auto configs = config.reference_configs();
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
        const auto seeds = replication_seeds(config.master_seed, rep);
        const auto [dev, expl] = experiment_data(config, seeds);
        auto system = train_system(dev, config, seeds);

        ExploitationPlan plan = config.plan;
        plan.seed = seeds.exploitation;
        const auto hardness_set = to_labeled(system.training);

        ReplicationResult r;
        r.index = rep;
        r.seeds = seeds;
        r.training_size = system.training_size;
        r.condensation = system.condensation;
        r.params = system.model.params();
        r.grid = system.grid;
        r.support_vectors = system.model.support_vectors().size();
        r.smo_iterations = system.smo_iterations;
        r.exploitation = evaluate_exploitation(system.model, expl, plan, configs, &hardness_set, config.hardness_k);
        result.replications.push_back(std::move(r));
    }
    return result;
}

std::vector<double> ExperimentResult::global_eers(const ReferenceConfig& rc) const {
    std::vector<double> out;
    for (const auto& r : replications) {
        const auto& cfgs = r.exploitation.configs;
        const auto it = std::find(cfgs.begin(), cfgs.end(), rc);
        if (it == cfgs.end()) throw ConfigError("configuration " + rc.label() + " was not evaluated");
        out.push_back(r.exploitation.global[static_cast<std::size_t>(it - cfgs.begin())].eer);
    }
    return out;
}

namespace {

// Table for one replication restricted to the IH-table columns.
IhAccuracyTable replication_table(const ExploitationResult& ex, QueryCategory category,
                                  const std::vector<ReferenceConfig>& columns, std::size_t k) {
    std::vector<std::size_t> pick;
    std::vector<std::string> labels;
    for (const auto& col : columns) {
        const auto it = std::find(ex.configs.begin(), ex.configs.end(), col);
        if (it == ex.configs.end()) throw ConfigError("configuration " + col.label() + " was not evaluated");
        pick.push_back(static_cast<std::size_t>(it - ex.configs.begin()));
        labels.push_back(col.label());
    }
    std::vector<EvaluatedQuery> projected;
    for (const auto& q : ex.queries) {
        if (q.category != category) continue;
        EvaluatedQuery p = q;
        p.correct.clear();
        for (const auto idx : pick) p.correct.push_back(q.correct[idx]);
        projected.push_back(std::move(p));
    }
    auto table = ih_accuracy_table(projected, category, labels);
    if (projected.empty() && table.k != k) {
        table.k = k;
        table.rows.resize(k + 1);
        for (std::size_t d = 0; d <= k; ++d) table.rows[d] = {d, 0, std::vector<std::size_t>(labels.size(), 0)};
    }
    return table;
}

constexpr QueryCategory kCategories[] = {QueryCategory::positive, QueryCategory::negative_random,
                                         QueryCategory::negative_skilled, QueryCategory::negative_simple};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

IhAccuracyTable ExperimentResult::pooled_table(QueryCategory category) const {
    const auto columns = config.table_configs();
    std::optional<IhAccuracyTable> pooled;
    for (const auto& r : replications) {
        auto t = replication_table(r.exploitation, category, columns, config.hardness_k);
        if (!pooled) pooled = std::move(t);
        else pooled->merge(t);
    }
    return pooled.value_or(IhAccuracyTable{});
}

std::string format_report(const ExperimentResult& result) {
    const auto& cfg = result.config;
    std::ostringstream out;
    out << "Writer-independent verification in the dissimilarity space\n";
    out << "version: " << library_version() << "\n";
    out << "config hash: " << cfg.hash() << "\n";
    out << "replications: " << cfg.replications << "  master seed: " << cfg.master_seed << "\n";
    if (cfg.synth) {
        out << "data: synthetic, " << cfg.synth->writers << " writers x " << cfg.synth->dims << " features, first "
            << cfg.exploitation_writers << " writers for exploitation\n";
    } else {
        out << "data: " << cfg.development_features << " / "
            << (cfg.exploitation_features.empty() ? "(split of development file)" : cfg.exploitation_features)
            << "\n";
    }
    out << "pairing: R=" << cfg.genuines_per_writer << " F=" << cfg.random_forgery_writers
        << "  standardize=" << (cfg.standardize ? "yes" : "no") << "  condense=" << (cfg.condense ? "yes" : "no")
        << "\n";
    out << "kernel: " << (cfg.grid_search ? "grid search on a held-out writer split" : "fixed") << ", gamma="
        << cfg.kernel.gamma << " C=" << cfg.kernel.c << "\n\n";

    out << "Training set and condensation\n";
    out << "rep   input  retained  ratio%  passes  gamma        C       SVs\n";
    std::vector<double> ratios;
    for (const auto& r : result.replications) {
        const double ratio = static_cast<double>(r.condensation.retained_size()) /
                             static_cast<double>(std::max<std::size_t>(1, r.condensation.input_size));
        ratios.push_back(ratio);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-4zu %6zu %9zu %7s %7zu  %-11.6g %-7.4g %5zu\n", r.index,
                      r.condensation.input_size, r.condensation.retained_size(), fixed(100.0 * ratio, 2).c_str(),
                      r.condensation.passes, r.params.gamma, r.params.c, r.support_vectors);
        out << buf;
    }
    out << "retained ratio (%): " << summarize(ratios).formatted_percent() << "\n\n";

    out << "Global EER (%) with user thresholds, mean (sd) over replications\n";
    for (const auto& rc : cfg.reference_configs()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-10s %s\n", rc.label().c_str(),
                      summarize(result.global_eers(rc)).formatted_percent().c_str());
        out << buf;
    }
    out << "\nGlobal EER (%) per replication\nrep ";
    for (const auto& rc : cfg.reference_configs()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %10s", rc.label().c_str());
        out << buf;
    }
    out << "\n";
    for (std::size_t i = 0; i < result.replications.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-3zu ", i);
        out << buf;
        for (const auto& rc : cfg.reference_configs()) {
            std::snprintf(buf, sizeof buf, " %10s", fixed(100.0 * result.global_eers(rc)[i], 2).c_str());
            out << buf;
        }
        out << "\n";
    }

    out << "\nInstance hardness (kDN, K=" << cfg.hardness_k
        << ") of the first reference pair against the training set, vs accuracy (%) at the user threshold;\n"
        << "pooled over " << result.replications.size() << " replications\n";
    for (const auto category : kCategories) {
        const auto table = result.pooled_table(category);
        out << "\n[" << to_string(category) << "]\n" << format_ih_table(table);
    }

    const auto skilled = result.pooled_table(QueryCategory::negative_skilled);
    std::size_t bad = 0, good = 0;
    for (const auto& row : skilled.rows) {
        (classify_forgery_quality({row.disagreeing, skilled.k}) == ForgeryQuality::bad ? bad : good) += row.count;
    }
    out << "\nSkilled forgeries by quality (IH <= 0.5 bad, IH > 0.5 good): bad " << bad << ", good " << good << "\n";
    return out.str();
}

void write_report(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto& cfg = result.config;
    const auto configs = cfg.reference_configs();
    const auto columns = cfg.table_configs();

    write_atomic(out_dir / "report.txt", format_report(result));

    std::string eer = "replication\tconfig\tglobal_eer\twriters\n";
    std::string writers = "replication\tconfig\twriter\tthreshold\teer\tfar\tfrr\n";
    std::string cond = "replication\tinput\tretained\tpasses\tsupport_vectors\tgamma\tc\n";
    for (const auto& r : result.replications) {
        const auto& ex = r.exploitation;
        for (std::size_t c = 0; c < ex.configs.size(); ++c) {
            eer += std::to_string(r.index) + "\t" + ex.configs[c].label() + "\t" + fixed(ex.global[c].eer, 6) + "\t" +
                   std::to_string(ex.global[c].writers) + "\n";
            for (const auto& w : ex.writers[c]) {
                writers += std::to_string(r.index) + "\t" + ex.configs[c].label() + "\t" + std::to_string(w.writer_id) +
                           "\t" + fixed(w.user_threshold, 9) + "\t" + fixed(w.eer, 6) + "\t" + fixed(w.far, 6) +
                           "\t" + fixed(w.frr, 6) + "\n";
            }
        }
        cond += std::to_string(r.index) + "\t" + std::to_string(r.condensation.input_size) + "\t" +
                std::to_string(r.condensation.retained_size()) + "\t" + std::to_string(r.condensation.passes) + "\t" +
                std::to_string(r.support_vectors) + "\t" + fixed(r.params.gamma, 9) + "\t" + fixed(r.params.c, 6) +
                "\n";
    }
    write_atomic(out_dir / "eer.tsv", eer);
    write_atomic(out_dir / "writers.tsv", writers);
    write_atomic(out_dir / "condensation.tsv", cond);

    std::string tables = "scope\tcategory\tih\tcount\tconfig\tcorrect\taccuracy\n";
    auto append_table = [&](const std::string& scope, const IhAccuracyTable& t) {
        for (const auto& row : t.rows) {
            const std::string ih = fixed(static_cast<double>(row.disagreeing) / static_cast<double>(t.k), 6);
            for (std::size_t c = 0; c < t.configurations.size(); ++c) {
                const auto acc = row.accuracy(c);
                tables += scope + "\t" + std::string(to_string(t.category)) + "\t" + ih + "\t" +
                          std::to_string(row.count) + "\t" + t.configurations[c] + "\t" +
                          std::to_string(row.correct[c]) + "\t" + (acc ? fixed(*acc, 4) : std::string("-")) + "\n";
            }
        }
    };
    for (const auto category : kCategories) {
        for (const auto& r : result.replications) {
            append_table(std::to_string(r.index), replication_table(r.exploitation, category, columns, cfg.hardness_k));
        }
        const auto pooled = result.pooled_table(category);
        append_table("pooled", pooled);

        std::string hist = "ih\tcount\n";
        for (const auto& row : pooled.rows) {
            hist += fixed(static_cast<double>(row.disagreeing) / static_cast<double>(pooled.k), 6) + "\t" +
                    std::to_string(row.count) + "\n";
        }
        write_atomic(out_dir / ("ih_histogram_" + std::string(to_string(category)) + ".tsv"), hist);
    }
    write_atomic(out_dir / "ih_tables.tsv", tables);

    json manifest;
    manifest["tool"] = "sigdt eval";
    manifest["version"] = std::string(library_version());
    manifest["config_hash"] = cfg.hash();
    manifest["config"] = json::parse(cfg.to_json());
    json seeds = json::array();
    for (const auto& r : result.replications) {
        seeds.push_back({{"replication", r.index},
                         {"replication_seed", r.seeds.replication},
                         {"data", r.seeds.data},
                         {"pairing", r.seeds.pairing},
                         {"condensation", r.seeds.condensation},
                         {"exploitation", r.seeds.exploitation}});
    }
    manifest["seeds"] = seeds;
    write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace sigdt

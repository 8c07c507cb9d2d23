#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigdt/dataset.hpp"
#include "sigdt/dichotomizer.hpp"
#include "sigdt/dichotomy.hpp"
#include "sigdt/evaluation.hpp"
#include "sigdt/prototype.hpp"
#include "sigdt/synth.hpp"
#include "sigdt/verification.hpp"

namespace sigdt {

/// Questioned signatures drawn per exploitation writer.
///
/// References are the writer's `references` lowest-id genuines, questioned
/// genuines are its `genuine` highest-id genuines (the two must not
/// overlap), skilled and simple forgeries are the lowest ids of their kind
/// (as many as exist, up to the requested count), and random forgeries are
/// one genuine from each of `random` distinct other writers, chosen with a
/// per-writer stream derived from `seed`.
struct ExploitationPlan {
    std::size_t references = 12;
    std::size_t genuine = 10;
    std::size_t skilled = 10;
    std::size_t random = 10;
    std::size_t simple = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Number of references fused and how.
struct ReferenceConfig {
    std::size_t references = 1;
    FusionKind fusion = FusionKind::max;

    /// "R1" for a single reference, otherwise e.g. "R5_max".
    std::string label() const;
    friend bool operator==(const ReferenceConfig&, const ReferenceConfig&) = default;
};

struct ExploitationResult {
    std::vector<ReferenceConfig> configs;
    /// [config][writer], writers ascending; writers without skilled
    /// forgeries are left out (no user threshold can be chosen).
    std::vector<std::vector<WriterEvaluation>> writers;
    std::vector<GlobalEer> global;  // per config
    std::vector<EvaluatedQuery> queries;
    std::size_t questioned_total = 0;
};

/// Runs the generalization phase on an exploitation dataset: dissimilarity
/// vectors against each reference, model scores (with the model's own
/// scaler), fusion per configuration, per-writer user thresholds and, when
/// `hardness_training` is given, the kDN hardness of each query's first
/// reference pair against that (standardized) training set.
ExploitationResult evaluate_exploitation(const DichotomizerModel& model, const Dataset& exploitation,
                                         const ExploitationPlan& plan, std::span<const ReferenceConfig> configs,
                                         const LabeledVectors* hardness_training = nullptr,
                                         std::size_t hardness_k = 7);

/// Applies a trained model, with its frozen scaler, to a dataset whose
/// writers were never seen in training. Neither the model nor the scaler
/// is modified. Throws DimensionError when the dataset dimensionality
/// differs from the model's.
ExploitationResult transfer_eval(const DichotomizerModel& model, const Dataset& foreign,
                                 const ExploitationPlan& plan, std::span<const ReferenceConfig> configs,
                                 const LabeledVectors* hardness_training = nullptr, std::size_t hardness_k = 7);

/// Everything needed to reproduce a run, together with any input files.
struct ExperimentConfig {
    // data: synthetic when `synth` is set, otherwise feature files
    std::optional<SynthConfig> synth = SynthConfig{};
    std::size_t exploitation_writers = 25;  // first writers of a synthetic or combined dataset
    std::string development_features;
    std::string exploitation_features;

    std::size_t genuines_per_writer = 14;     // R of the pairing plan
    std::size_t random_forgery_writers = 7;   // F of the pairing plan
    bool random_selection = false;

    bool standardize = true;
    bool condense = true;

    KernelParams kernel{0x1p-11, 1.0};
    bool grid_search = false;
    std::vector<double> c_grid = default_c_grid();
    std::vector<double> gamma_grid = default_gamma_grid();
    std::size_t validation_writers = 5;  // development writers held out for grid search

    SmoOptions smo;

    ExploitationPlan plan;  // seed is derived per replication
    std::vector<std::size_t> reference_counts{1, 5, 12};
    std::vector<FusionKind> fusions{FusionKind::max, FusionKind::min, FusionKind::mean, FusionKind::median};
    FusionKind table_fusion = FusionKind::max;

    std::size_t replications = 10;
    std::uint64_t master_seed = 1;
    std::size_t hardness_k = 7;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;

    /// Every evaluated configuration: R1 once, then each larger reference
    /// count with each fusion.
    std::vector<ReferenceConfig> reference_configs() const;

    /// Columns of the IH tables: each reference count with `table_fusion`.
    std::vector<ReferenceConfig> table_configs() const;

    std::string to_json() const;
    /// Accepts a config object, or a run manifest (uses its "config" member).
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// FNV-1a of the canonical JSON form, as 16 hex digits.
    std::string hash() const;
};

/// The desk-scale synthetic benchmark: 50 writers of 32 features, the first
/// 25 used for exploitation, 10 replications.
ExperimentConfig synthetic_benchmark_config();

struct ReplicationSeeds {
    std::uint64_t replication = 0;
    std::uint64_t data = 0;
    std::uint64_t pairing = 0;
    std::uint64_t condensation = 0;
    std::uint64_t exploitation = 0;
};

ReplicationSeeds replication_seeds(std::uint64_t master_seed, std::size_t replication);

struct ReplicationResult {
    std::size_t index = 0;
    ReplicationSeeds seeds;
    std::size_t training_size = 0;
    CondensationResult condensation;  // identity (all retained, 0 passes) when disabled
    KernelParams params;
    std::vector<GridPoint> grid;
    std::size_t support_vectors = 0;
    std::size_t smo_iterations = 0;
    ExploitationResult exploitation;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ReplicationResult> replications;

    /// Global EER of one configuration in every replication.
    std::vector<double> global_eers(const ReferenceConfig& config) const;

    /// IH table pooled over replications.
    IhAccuracyTable pooled_table(QueryCategory category) const;
};

/// A trained system: the model plus the standardized (and possibly
/// condensed) training set used for hardness estimation.
struct TrainedSystem {
    DichotomizerModel model;
    std::vector<DissimilaritySample> training;
    std::size_t training_size = 0;
    CondensationResult condensation;
    std::vector<GridPoint> grid;
    std::size_t smo_iterations = 0;
};

/// Training phase on a development set: DT pairs, standardization,
/// optional condensation, optional grid search, SMO.
TrainedSystem train_system(const Dataset& development, const ExperimentConfig& config, const ReplicationSeeds& seeds);

/// Development and exploitation datasets of one replication.
std::pair<Dataset, Dataset> experiment_data(const ExperimentConfig& config, const ReplicationSeeds& seeds);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes report.txt, eer.tsv, writers.tsv, ih_tables.tsv,
/// ih_histogram_<category>.tsv, condensation.tsv and manifest.json.
void write_report(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// Human-readable report (also the content of report.txt).
std::string format_report(const ExperimentResult& result);

/// Version string recorded in manifests.
std::string_view library_version();

}  // namespace sigdt

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smartband/ingest.hpp"

namespace smartband::model {

/// Simple linear model: resp = intercept + slope * pulse.
struct RegressionModel {
    double intercept = 0.0;
    double slope = 0.0;
    std::size_t n_train = 0;
};

/// intercept + slope * pr, unclamped: negative outputs are legal and read
/// downstream as extreme abnormality.
double predict_rr(const RegressionModel& model, double pr);

/// Ordinary least squares over (pulse, resp) pairs. Rows missing either
/// field are dropped before fitting.
/// Throws InsufficientData (< 2 usable pairs) and DegeneratePredictor
/// (all pulse values equal).
RegressionModel fit_resting_rate(std::span<const ingest::PulseSample> samples);

struct TauResult {
    double tau = 0.0;       // mean predicted resting rate
    double sigma_rr = 0.0;  // population stddev of the same predictions
};

/// Predicts rr for every row with pulse present and returns mean and
/// population standard deviation. Throws InsufficientData (no pulse rows).
TauResult compute_tau(const RegressionModel& model,
                      std::span<const ingest::PulseSample> samples);

/// Feature order used throughout clustering: hr, pulse, resp, spo2.
inline constexpr std::size_t kFeatureCount = 4;
using FeatureRow = std::array<double, kFeatureCount>;

/// Keeps only rows where all four vitals are present.
std::vector<FeatureRow> complete_feature_rows(
    std::span<const ingest::PulseSample> samples);

/// Per-feature z-scaling parameters. A zero-variance feature keeps
/// stddev 1 so scaling leaves it at 0 rather than dividing by zero.
struct Standardizer {
    FeatureRow mean{};
    FeatureRow stddev{1.0, 1.0, 1.0, 1.0};

    FeatureRow apply(const FeatureRow& row) const;
    FeatureRow invert(const FeatureRow& row) const;
};

Standardizer fit_standardizer(std::span<const FeatureRow> rows);

struct KmeansResult {
    std::vector<FeatureRow> centers;       // size k
    std::vector<std::size_t> assignments;  // size n, values in [0, k)
    double within_ss = 0.0;
    double between_ss = 0.0;
    double total_ss = 0.0;
};

/// Lloyd's algorithm with D^2 (k-means++) seeding, run `restarts`
/// independent times with derived seeds; the lowest within-cluster SS
/// wins, ties broken by lowest restart index. Deterministic for fixed
/// inputs. Empty clusters are repaired by reseeding from the point
/// farthest from its assigned center.
/// Throws EmptyInput and KTooLarge (k == 0 or k > distinct point count).
KmeansResult kmeans(std::span<const FeatureRow> rows, std::size_t k,
                    std::uint64_t seed, std::size_t restarts);

std::size_t nearest_center(std::span<const FeatureRow> centers,
                           const FeatureRow& row);

/// 100 * (total_ss - within_ss) / total_ss: the share of total spread
/// explained by the partition. Throws ZeroTotalSS.
double variability(double within_ss, double total_ss);

/// Everything the detector needs about one wearer.
struct PersonalModel {
    RegressionModel regression;
    double tau = 0.0;       // resting respiratory threshold
    double sigma_rr = 0.0;  // spread of predicted resting rate in training
    std::vector<FeatureRow> centers;  // raw (unstandardized) units
    std::size_t k = 0;
    double variability_pct = 0.0;  // in the space clustering ran in
    bool standardized = false;
};

struct TrainOptions {
    std::size_t k = 3;
    std::uint64_t seed = 42;
    std::size_t restarts = 25;
    bool standardize = false;
};

/// Full training pass: regression over pulse/resp pairs, threshold and
/// spread via compute_tau, clustering over complete rows (optionally
/// z-scaled; centers are stored in raw units either way).
PersonalModel train_personal_model(std::span<const ingest::PulseSample> samples,
                                   const TrainOptions& options);

}  // namespace smartband::model

#include "smartband/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "smartband/errors.hpp"

namespace smartband::model {

namespace {

double sq_dist(const FeatureRow& a, const FeatureRow& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

FeatureRow grand_mean(std::span<const FeatureRow> rows) {
    FeatureRow mean{};
    for (const FeatureRow& row : rows) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) mean[i] += row[i];
    }
    for (double& m : mean) m /= static_cast<double>(rows.size());
    return mean;
}

std::size_t count_distinct(std::span<const FeatureRow> rows) {
    std::vector<FeatureRow> sorted(rows.begin(), rows.end());
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

/// Weighted index draw via a cumulative scan; used instead of
/// std::discrete_distribution so seeding behavior is pinned to this code,
/// not to a library implementation.
std::size_t draw_weighted(const std::vector<double>& weights, double total,
                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double target = unit(rng) * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (target <= cum) return i;
    }
    return weights.size() - 1;
}

/// D^2 seeding: first center uniform, each next center drawn with
/// probability proportional to squared distance from the nearest chosen
/// center. Zero total weight (all remaining points coincide with a
/// center) falls back to a uniform draw.
std::vector<FeatureRow> seed_centers(std::span<const FeatureRow> rows,
                                     std::size_t k, std::mt19937_64& rng) {
    std::vector<FeatureRow> centers;
    centers.reserve(k);
    std::uniform_int_distribution<std::size_t> uniform(0, rows.size() - 1);
    centers.push_back(rows[uniform(rng)]);

    std::vector<double> d2(rows.size());
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (const FeatureRow& c : centers) {
                best = std::min(best, sq_dist(rows[i], c));
            }
            d2[i] = best;
            total += best;
        }
        std::size_t pick = total > 0.0 ? draw_weighted(d2, total, rng)
                                       : uniform(rng);
        centers.push_back(rows[pick]);
    }
    return centers;
}

struct LloydResult {
    std::vector<FeatureRow> centers;
    std::vector<std::size_t> assignments;
    double within_ss = 0.0;
};

constexpr std::size_t kMaxIterations = 100;

LloydResult lloyd(std::span<const FeatureRow> rows,
                  std::vector<FeatureRow> centers) {
    const std::size_t n = rows.size();
    const std::size_t k = centers.size();
    std::vector<std::size_t> assignments(n, 0);

    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = nearest_center(centers, rows[i]);
            if (best != assignments[i]) {
                assignments[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<FeatureRow> sums(k, FeatureRow{});
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                sums[assignments[i]][f] += rows[i][f];
            }
            ++counts[assignments[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Empty cluster: reseed from the point farthest from its
                // assigned center.
                std::size_t farthest = 0;
                double worst = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = sq_dist(rows[i], centers[assignments[i]]);
                    if (d > worst) {
                        worst = d;
                        farthest = i;
                    }
                }
                centers[c] = rows[farthest];
                changed = true;
            } else {
                for (std::size_t f = 0; f < kFeatureCount; ++f) {
                    centers[c][f] =
                        sums[c][f] / static_cast<double>(counts[c]);
                }
            }
        }
        if (!changed) break;
    }

    // Final assignment pass so every point maps to its nearest center of
    // the returned set.
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        assignments[i] = nearest_center(centers, rows[i]);
        within += sq_dist(rows[i], centers[assignments[i]]);
    }
    return {std::move(centers), std::move(assignments), within};
}

}  // namespace

double predict_rr(const RegressionModel& model, double pr) {
    return model.intercept + model.slope * pr;
}

RegressionModel fit_resting_rate(std::span<const ingest::PulseSample> samples) {
    std::vector<std::pair<double, double>> pairs;  // (pulse, resp)
    for (const ingest::PulseSample& s : samples) {
        if (s.pulse && s.resp) pairs.emplace_back(*s.pulse, *s.resp);
    }
    if (pairs.size() < 2) {
        throw InsufficientData(
            "regression needs at least 2 rows with pulse and resp, got " +
            std::to_string(pairs.size()));
    }

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(pairs.size());
    mean_y /= static_cast<double>(pairs.size());

    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx == 0.0) {
        throw DegeneratePredictor("all pulse values are identical");
    }

    RegressionModel model;
    model.slope = sxy / sxx;
    model.intercept = mean_y - model.slope * mean_x;
    model.n_train = pairs.size();
    return model;
}

TauResult compute_tau(const RegressionModel& model,
                      std::span<const ingest::PulseSample> samples) {
    std::vector<double> predictions;
    for (const ingest::PulseSample& s : samples) {
        if (s.pulse) predictions.push_back(predict_rr(model, *s.pulse));
    }
    if (predictions.empty()) {
        throw InsufficientData("compute_tau needs at least one pulse row");
    }

    double mean = 0.0;
    for (double p : predictions) mean += p;
    mean /= static_cast<double>(predictions.size());

    double var = 0.0;
    for (double p : predictions) var += (p - mean) * (p - mean);
    var /= static_cast<double>(predictions.size());

    return {mean, std::sqrt(var)};
}

std::vector<FeatureRow> complete_feature_rows(
    std::span<const ingest::PulseSample> samples) {
    std::vector<FeatureRow> rows;
    for (const ingest::PulseSample& s : samples) {
        if (s.hr && s.pulse && s.resp && s.spo2) {
            rows.push_back({*s.hr, *s.pulse, *s.resp, *s.spo2});
        }
    }
    return rows;
}

FeatureRow Standardizer::apply(const FeatureRow& row) const {
    FeatureRow out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        out[i] = (row[i] - mean[i]) / stddev[i];
    }
    return out;
}

FeatureRow Standardizer::invert(const FeatureRow& row) const {
    FeatureRow out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        out[i] = row[i] * stddev[i] + mean[i];
    }
    return out;
}

Standardizer fit_standardizer(std::span<const FeatureRow> rows) {
    if (rows.empty()) {
        throw EmptyInput("standardizer needs at least one row");
    }
    Standardizer st;
    st.mean = grand_mean(rows);
    FeatureRow var{};
    for (const FeatureRow& row : rows) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            double d = row[i] - st.mean[i];
            var[i] += d * d;
        }
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        var[i] /= static_cast<double>(rows.size());
        st.stddev[i] = var[i] > 0.0 ? std::sqrt(var[i]) : 1.0;
    }
    return st;
}

std::size_t nearest_center(std::span<const FeatureRow> centers,
                           const FeatureRow& row) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        double d = sq_dist(centers[c], row);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

KmeansResult kmeans(std::span<const FeatureRow> rows, std::size_t k,
                    std::uint64_t seed, std::size_t restarts) {
    if (rows.empty()) throw EmptyInput("kmeans needs at least one point");
    if (k == 0 || k > count_distinct(rows)) {
        throw KTooLarge("k=" + std::to_string(k) + " with " +
                        std::to_string(count_distinct(rows)) +
                        " distinct points");
    }
    if (restarts == 0) restarts = 1;

    LloydResult best;
    best.within_ss = std::numeric_limits<double>::max();
    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed * 1000003ULL + r);
        LloydResult result = lloyd(rows, seed_centers(rows, k, rng));
        if (result.within_ss < best.within_ss) best = std::move(result);
    }

    KmeansResult out;
    out.centers = std::move(best.centers);
    out.assignments = std::move(best.assignments);
    out.within_ss = best.within_ss;

    FeatureRow mean = grand_mean(rows);
    for (const FeatureRow& row : rows) out.total_ss += sq_dist(row, mean);

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : out.assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
        out.between_ss +=
            static_cast<double>(counts[c]) * sq_dist(out.centers[c], mean);
    }
    return out;
}

double variability(double within_ss, double total_ss) {
    if (!(total_ss > 0.0)) {
        throw ZeroTotalSS("variability undefined when total SS is zero");
    }
    return 100.0 * (total_ss - within_ss) / total_ss;
}

PersonalModel train_personal_model(std::span<const ingest::PulseSample> samples,
                                   const TrainOptions& options) {
    PersonalModel personal;
    personal.regression = fit_resting_rate(samples);
    TauResult tau = compute_tau(personal.regression, samples);
    personal.tau = tau.tau;
    personal.sigma_rr = tau.sigma_rr;

    std::vector<FeatureRow> rows = complete_feature_rows(samples);
    if (rows.empty()) {
        throw InsufficientData("clustering needs rows with all four vitals");
    }

    personal.k = options.k;
    personal.standardized = options.standardize;
    if (options.standardize) {
        Standardizer st = fit_standardizer(rows);
        std::vector<FeatureRow> scaled(rows.size());
        std::transform(rows.begin(), rows.end(), scaled.begin(),
                       [&](const FeatureRow& r) { return st.apply(r); });
        KmeansResult km =
            kmeans(scaled, options.k, options.seed, options.restarts);
        personal.variability_pct = variability(km.within_ss, km.total_ss);
        personal.centers.reserve(km.centers.size());
        for (const FeatureRow& c : km.centers) {
            personal.centers.push_back(st.invert(c));
        }
    } else {
        KmeansResult km =
            kmeans(rows, options.k, options.seed, options.restarts);
        personal.variability_pct = variability(km.within_ss, km.total_ss);
        personal.centers = std::move(km.centers);
    }
    return personal;
}

}  // namespace smartband::model

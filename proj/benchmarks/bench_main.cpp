// Microbenchmarks for the hot paths: regression fit, k-means clustering,
// NMEA sentence parsing, and detector stepping.  All inputs are
// synthesized so the binary needs no fixtures.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "smartband/detector.hpp"
#include "smartband/geoloc.hpp"
#include "smartband/ingest.hpp"
#include "smartband/model.hpp"

using namespace smartband;

namespace {

std::vector<ingest::PulseSample> make_samples(std::size_t n) {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> pulse(90.0, 12.0);
    std::normal_distribution<double> noise(0.0, 1.5);
    std::vector<ingest::PulseSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ingest::PulseSample s;
        s.t = static_cast<double>(i);
        double p = pulse(rng);
        s.pulse = p;
        s.hr = p + noise(rng);
        s.resp = 41.0 - 0.29 * p + noise(rng);
        s.spo2 = 97.0 + noise(rng) * 0.3;
        out.push_back(s);
    }
    return out;
}

model::PersonalModel make_model() {
    model::PersonalModel pm;
    pm.regression = {41.1532, -0.2886, 475};
    pm.tau = 17.0;
    pm.sigma_rr = 1.5;
    pm.k = 1;
    return pm;
}

void bm_fit_resting_rate(benchmark::State& state) {
    auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(model::fit_resting_rate(samples));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_kmeans(benchmark::State& state) {
    auto samples = make_samples(475);
    auto rows = model::complete_feature_rows(samples);
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(model::kmeans(rows, k, 42, 25));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows.size()));
}

void bm_parse_sentence(benchmark::State& state) {
    const std::string line =
        "$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*47";
    for (auto _ : state) {
        benchmark::DoNotOptimize(geoloc::parse_sentence(line));
    }
    state.SetBytesProcessed(state.iterations() *
                            static_cast<int64_t>(line.size()));
}

void bm_checksum(benchmark::State& state) {
    const std::string payload =
        "GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,";
    for (auto _ : state) {
        benchmark::DoNotOptimize(geoloc::checksum(payload));
    }
    state.SetBytesProcessed(state.iterations() *
                            static_cast<int64_t>(payload.size()));
}

void bm_detector_step(benchmark::State& state) {
    auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
    model::PersonalModel pm = make_model();
    detector::DetectorConfig cfg =
        detector::DetectorConfig::defaults_for(pm.sigma_rr);
    for (auto _ : state) {
        detector::DetectionState st;
        std::size_t alerts = 0;
        for (const auto& s : samples) {
            if (detector::step(st, pm, cfg, s)) ++alerts;
        }
        benchmark::DoNotOptimize(alerts);
        benchmark::DoNotOptimize(st.windows_closed);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(bm_fit_resting_rate)->Arg(475)->Arg(4750);
BENCHMARK(bm_kmeans)->Arg(3)->Arg(5);
BENCHMARK(bm_parse_sentence);
BENCHMARK(bm_checksum);
BENCHMARK(bm_detector_step)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

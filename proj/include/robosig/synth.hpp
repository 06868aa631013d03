#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include "robosig/ingest.hpp"

namespace robosig::synth {

/// One sigma-lognormal stroke: speed D / (sigma sqrt(2 pi) (t - t0)) *
/// exp(-(ln(t - t0) - mu)^2 / (2 sigma^2)), with the direction sweeping from
/// theta_start to theta_end along the lognormal CDF.
struct Stroke {
    double t0 = 0.0;
    double amplitude = 0.01;  // path length, m
    double mu = -1.6;
    double sigma = 0.3;
    double theta_start = 0.0;
    double theta_end = 0.0;
};

struct SignatureTemplate {
    std::vector<Stroke> strokes;
};

struct JitterLevels {
    double amplitude = 0.04;  // relative
    double angle = 0.04;      // rad
    double onset = 0.008;     // s
    double mu = 0.03;
    double sigma = 0.03;      // relative
};

SignatureTemplate random_template(std::mt19937_64& rng, int min_strokes = 6, int max_strokes = 10);
SignatureTemplate jitter(const SignatureTemplate& base, const JitterLevels& levels, std::mt19937_64& rng);

/// Pen-tip path sampled at `rate_hz`, starting at the origin.
TrajectorySI render(const SignatureTemplate& tpl, double rate_hz = 100.0);

/// Uniform scale that fits render(tpl) into a `box` x `box` square.
double fit_scale(const SignatureTemplate& tpl, double box = 0.02);
SignatureTemplate scaled(SignatureTemplate tpl, double factor);

/// Quantizes to device units; timestamps become milliseconds.
RawSignature to_raw(const TrajectorySI& traj, double dpi = 2540.0);

/// `count` independent signatures fitted into a 2 cm box.
std::vector<TrajectorySI> signature_set(std::size_t count, std::uint64_t seed);

struct CorpusOptions {
    std::size_t users = 10;
    std::size_t genuine = 10;
    std::size_t skilled = 5;
    std::uint64_t seed = 7;
    JitterLevels genuine_jitter{};
    /// Forgers reproduce the victim's template with this much more variation.
    double skilled_factor = 4.0;
    double dpi = 2540.0;
    double rate_hz = 100.0;
};

/// Writes one svc file per signature plus `manifest.tsv` into `dir`. Returns
/// the manifest entries.
std::vector<ManifestEntry> write_corpus(const std::filesystem::path& dir, const CorpusOptions& options = {});

}  // namespace robosig::synth

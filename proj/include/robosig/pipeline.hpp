#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "robosig/eval.hpp"
#include "robosig/features.hpp"
#include "robosig/ingest.hpp"
#include "robosig/matchers.hpp"
#include "robosig/robot2d.hpp"
#include "robosig/robot3d.hpp"

namespace robosig {

enum class VerifierKind { dtw, man };

std::string_view to_string(VerifierKind kind);
std::string_view to_string(GravityMode mode);

/// Everything that determines how a signature becomes a score.
struct PipelineConfig {
    RobotKind robot = RobotKind::planar2d;
    FeatureSet features = FeatureSet::f1;
    VerifierKind verifier = VerifierKind::dtw;
    GravityMode gravity = GravityMode::vertical;
    ForgeryType forgery = ForgeryType::skilled;
    std::size_t refs = 5;
    int histogram_bins = kDefaultHistogramBins;
    std::optional<double> resample_hz;
    std::optional<Eigen::Index> dtw_band;
    ScoreAggregation aggregation = ScoreAggregation::min;

    // Dataset description.
    double dpi = 2540.0;
    double rate = 100.0;
    std::optional<TimeUnit> time_unit;
    std::filesystem::path manifest;
    std::filesystem::path out_dir = ".";

    /// Throws ContractError on out-of-range values.
    void validate() const;

    /// Canonical `key=value;` text of the verifier and feature settings.
    std::string method_text() const;
    /// method_text() plus the dataset settings.
    std::string config_text() const;

    std::string method_fingerprint() const { return fingerprint(method_text()); }
    std::string config_fingerprint() const { return fingerprint(config_text()); }

    SignatureMeta signature_meta() const;
};

/// Intermediate and final products of one signature.
struct RobotFeatures {
    Eigen::MatrixXd q;    // joints x T
    Eigen::MatrixXd dq;
    Eigen::MatrixXd ddq;
    Eigen::MatrixXd tau;  // joints x T
    double dt = 0.0;
    FeatureMatrix features;
};

/// Placement, inverse kinematics, inverse dynamics and feature assembly.
RobotFeatures extract_robot_features(const TrajectorySI& traj, const PipelineConfig& config);
RobotFeatures extract_robot_features(const RawSignature& raw, const PipelineConfig& config);

/// Loads the entry's file and runs the full pipeline.
FeatureMatrix extract_features(const ManifestEntry& entry, const PipelineConfig& config);

std::unique_ptr<Verifier> make_verifier(const PipelineConfig& config);

struct Evaluation {
    EvalReport report;
    std::vector<std::string> skipped_users;
};

/// Runs the configured protocol on the configured manifest.
Evaluation evaluate(const PipelineConfig& config, unsigned jobs = 1);
Evaluation evaluate(std::span<const ManifestEntry> manifest, const PipelineConfig& config, unsigned jobs = 1);

}  // namespace robosig

#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robosig/differentiate.hpp"
#include "robosig/trajectory.hpp"

namespace robosig {

enum class RobotKind { planar2d, spatial3d };

/// f1: joint angles, f2: torques, f3: f1 followed by f2. Each with first and
/// second time derivatives.
enum class FeatureSet { f1, f2, f3 };

std::string_view to_string(RobotKind robot);
std::string_view to_string(FeatureSet set);

/// Channels x time. After build_feature_set every channel is z-scored.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;
    RobotKind robot = RobotKind::planar2d;
    FeatureSet set = FeatureSet::f1;

    Eigen::Index channels() const { return values.rows(); }
    Eigen::Index samples() const { return values.cols(); }
};

/// Expected channel count: 6/12 for 2D (f1 or f2 / f3), 9/18 for 3D.
int channel_count(RobotKind robot, FeatureSet set);

/// Per row: subtract the mean, divide by the population standard deviation.
/// Constant rows become zero.
Eigen::MatrixXd zscore_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows);
FeatureMatrix zscore(FeatureMatrix matrix);

FeatureMatrix build_feature_set(const JointTrajectory2D& jt, const TorqueTrajectory2D& tt, FeatureSet set);
FeatureMatrix build_feature_set(const JointTrajectory3D& jt, const TorqueTrajectory3D& tt, FeatureSet set);

/// Equal-width bin layout per channel. A channel whose range collapses to a
/// point is degenerate and sends every value to bin 0.
struct HistogramEdges {
    int bins = 0;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    Eigen::Index channels() const { return lo.size(); }
    bool degenerate(Eigen::Index channel) const { return !(hi[channel] > lo[channel]); }
    int bin_of(Eigen::Index channel, double value) const;

    bool operator==(const HistogramEdges&) const = default;
};

struct HistogramFeature {
    Eigen::MatrixXi absolute;  // channels x bins
    Eigen::MatrixXd relative;  // channels x bins, rows sum to 1
    HistogramEdges edges;
    Eigen::Index samples = 0;
};

inline constexpr int kDefaultHistogramBins = 16;

/// Edges spanning [min, max] of every channel over all reference matrices.
HistogramEdges fit_histogram_edges(std::span<const FeatureMatrix> references, int bins = kDefaultHistogramBins);

/// Histogram with a fixed layout; values outside it clamp to the end bins.
HistogramFeature histogram_features(const FeatureMatrix& matrix, const HistogramEdges& edges);

/// Histogram with edges fitted on the matrix itself.
HistogramFeature histogram_features(const FeatureMatrix& matrix, int bins = kDefaultHistogramBins);

/// CSV with the channel labels as header and one row per time sample.
std::string feature_matrix_to_csv(const FeatureMatrix& matrix);
FeatureMatrix feature_matrix_from_csv(std::string_view csv);

/// Rows of a trajectory-like matrix as CSV with the given labels, plus a
/// leading t column built from dt.
std::string samples_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& rows, std::span<const std::string> labels,
                           double dt);

}  // namespace robosig

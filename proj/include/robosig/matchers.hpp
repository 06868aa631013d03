#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robosig/features.hpp"

namespace robosig {

/// Dynamic time warping between two channels x time matrices. Local cost is
/// the Euclidean distance between columns, steps (1,0), (0,1), (1,1). The
/// accumulated cost of the cheapest path is divided by that path's length
/// (ties resolved toward the shorter path). `band` restricts |i - j| to
/// max(band, |T1 - T2|); unset means unconstrained.
double dtw_distance(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                    std::optional<Eigen::Index> band = std::nullopt);

/// How per-reference distances are reduced to one number.
enum class ScoreAggregation { min, mean };

struct DtwOptions {
    std::optional<Eigen::Index> band;
    ScoreAggregation aggregation = ScoreAggregation::min;
};

/// Enrolled feature matrices of one user for the DTW verifier. The mean
/// pairwise distance among the references is computed once at enrollment.
class DtwReferenceSet {
public:
    DtwReferenceSet(std::string user_id, std::vector<FeatureMatrix> references, DtwOptions options = {});

    const std::string& user_id() const { return user_id_; }
    std::size_t size() const { return references_.size(); }
    const std::vector<FeatureMatrix>& references() const { return references_; }
    /// Mean pairwise DTW distance among the references.
    double spread() const { return spread_; }
    const DtwOptions& options() const { return options_; }

private:
    std::string user_id_;
    std::vector<FeatureMatrix> references_;
    DtwOptions options_;
    double spread_ = 0.0;
};

/// Aggregated (default: minimum) DTW distance to the references divided by
/// the reference spread. A zero spread leaves the distance unnormalized.
/// Lower means more likely genuine.
double dtw_score(const FeatureMatrix& question, const DtwReferenceSet& references);

/// [absolute / T || relative] for every channel, channel-major.
Eigen::VectorXd histogram_vector(const HistogramFeature& h);

/// Enrolled histograms of one user for the Manhattan verifier. The bin layout
/// is fitted on the references and reused for every question.
class HistogramReferenceSet {
public:
    HistogramReferenceSet(std::string user_id, std::span<const FeatureMatrix> references,
                          int bins = kDefaultHistogramBins);
    /// From precomputed histograms; they must share one layout.
    HistogramReferenceSet(std::string user_id, std::vector<HistogramFeature> references);

    const std::string& user_id() const { return user_id_; }
    std::size_t size() const { return references_.size(); }
    const HistogramEdges& edges() const { return references_.front().edges; }
    const Eigen::VectorXd& mean_vector() const { return mean_; }

private:
    std::string user_id_;
    std::vector<HistogramFeature> references_;
    Eigen::VectorXd mean_;
};

/// L1 distance between the question's histogram vector and the mean
/// reference vector.
double manhattan_score(const HistogramFeature& question, const HistogramReferenceSet& references);
double manhattan_score(const FeatureMatrix& question, const HistogramReferenceSet& references);

}  // namespace robosig

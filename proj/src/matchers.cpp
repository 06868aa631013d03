#include "robosig/matchers.hpp"

#include "robosig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robosig {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    Eigen::Index length = 0;

    bool operator<(const Cell& o) const { return cost < o.cost || (cost == o.cost && length < o.length); }
};

}  // namespace

double dtw_distance(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                    std::optional<Eigen::Index> band) {
    if (a.rows() != b.rows()) throw ContractError("dtw: channel count mismatch");
    const auto n = a.cols(), m = b.cols();
    if (n == 0 || m == 0) throw ContractError("dtw: empty sequence");

    const Eigen::Index width = band ? std::max(*band, std::abs(n - m)) : std::max(n, m);
    std::vector<Cell> prev(static_cast<std::size_t>(m)), cur(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::fill(cur.begin(), cur.end(), Cell{});
        const Eigen::Index j_lo = std::max<Eigen::Index>(0, i - width), j_hi = std::min(m - 1, i + width);
        for (Eigen::Index j = j_lo; j <= j_hi; ++j) {
            const double local = (a.col(i) - b.col(j)).norm();
            Cell best;
            if (i == 0 && j == 0) {
                best = {0.0, 0};
            } else {
                if (i > 0) best = std::min(best, prev[static_cast<std::size_t>(j)]);
                if (j > 0) best = std::min(best, cur[static_cast<std::size_t>(j - 1)]);
                if (i > 0 && j > 0) best = std::min(best, prev[static_cast<std::size_t>(j - 1)]);
            }
            cur[static_cast<std::size_t>(j)] = {best.cost + local, best.length + 1};
        }
        std::swap(prev, cur);
    }
    const Cell& end = prev[static_cast<std::size_t>(m - 1)];
    return end.cost / static_cast<double>(end.length);
}

DtwReferenceSet::DtwReferenceSet(std::string user_id, std::vector<FeatureMatrix> references, DtwOptions options)
    : user_id_(std::move(user_id)), references_(std::move(references)), options_(options) {
    if (references_.empty()) throw ContractError("empty reference set");
    if (references_.size() < 2) throw ContractError("DTW reference set needs at least 2 references");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < references_.size(); ++i) {
        for (std::size_t j = i + 1; j < references_.size(); ++j) {
            sum += dtw_distance(references_[i].values, references_[j].values, options_.band);
            ++pairs;
        }
    }
    spread_ = sum / static_cast<double>(pairs);
}

double dtw_score(const FeatureMatrix& question, const DtwReferenceSet& references) {
    const auto& opts = references.options();
    double agg = opts.aggregation == ScoreAggregation::min ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& ref : references.references()) {
        const double d = dtw_distance(question.values, ref.values, opts.band);
        agg = opts.aggregation == ScoreAggregation::min ? std::min(agg, d) : agg + d;
    }
    if (opts.aggregation == ScoreAggregation::mean) agg /= static_cast<double>(references.size());
    return references.spread() > 0.0 ? agg / references.spread() : agg;
}

Eigen::VectorXd histogram_vector(const HistogramFeature& h) {
    const auto c = h.absolute.rows(), b = h.absolute.cols();
    Eigen::VectorXd v(2 * c * b);
    const double t = static_cast<double>(h.samples);
    for (Eigen::Index ch = 0; ch < c; ++ch) {
        for (Eigen::Index k = 0; k < b; ++k) {
            v[ch * 2 * b + k] = static_cast<double>(h.absolute(ch, k)) / t;
            v[ch * 2 * b + b + k] = h.relative(ch, k);
        }
    }
    return v;
}

HistogramReferenceSet::HistogramReferenceSet(std::string user_id, std::span<const FeatureMatrix> references, int bins)
    : user_id_(std::move(user_id)) {
    if (references.empty()) throw ContractError("empty reference set");
    const auto edges = fit_histogram_edges(references, bins);
    for (const auto& m : references) references_.push_back(histogram_features(m, edges));
    mean_ = Eigen::VectorXd::Zero(histogram_vector(references_.front()).size());
    for (const auto& h : references_) mean_ += histogram_vector(h);
    mean_ /= static_cast<double>(references_.size());
}

HistogramReferenceSet::HistogramReferenceSet(std::string user_id, std::vector<HistogramFeature> references)
    : user_id_(std::move(user_id)), references_(std::move(references)) {
    if (references_.empty()) throw ContractError("empty reference set");
    for (const auto& h : references_) {
        if (!(h.edges == references_.front().edges)) throw ContractError("reference histograms differ in bin layout");
    }
    mean_ = Eigen::VectorXd::Zero(histogram_vector(references_.front()).size());
    for (const auto& h : references_) mean_ += histogram_vector(h);
    mean_ /= static_cast<double>(references_.size());
}

double manhattan_score(const HistogramFeature& question, const HistogramReferenceSet& references) {
    if (!(question.edges == references.edges())) throw ContractError("question histogram uses a different bin layout");
    return (histogram_vector(question) - references.mean_vector()).lpNorm<1>();
}

double manhattan_score(const FeatureMatrix& question, const HistogramReferenceSet& references) {
    return manhattan_score(histogram_features(question, references.edges()), references);
}

}  // namespace robosig

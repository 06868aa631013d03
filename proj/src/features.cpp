#include "robosig/features.hpp"

#include "robosig/detail/text.hpp"
#include "robosig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robosig {

Eigen::VectorXd differentiate(const Eigen::Ref<const Eigen::VectorXd>& series, double dt, int order) {
    const auto n = series.size();
    if (n < 3) throw ContractError("differentiate needs at least 3 samples");
    if (!(dt > 0)) throw ContractError("differentiate needs dt > 0");
    if (order != 1 && order != 2) throw ContractError("derivative order must be 1 or 2");

    Eigen::VectorXd d(n);
    d[0] = (series[1] - series[0]) / dt;
    d[n - 1] = (series[n - 1] - series[n - 2]) / dt;
    d.segment(1, n - 2) = (series.tail(n - 2) - series.head(n - 2)) / (2 * dt);
    return order == 1 ? d : differentiate(d, dt, 1);
}

Eigen::MatrixXd differentiate_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows, double dt, int order) {
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) out.row(r) = differentiate(rows.row(r).transpose(), dt, order);
    return out;
}

std::string_view to_string(RobotKind robot) { return robot == RobotKind::planar2d ? "2d" : "3d"; }

std::string_view to_string(FeatureSet set) {
    switch (set) {
        case FeatureSet::f1: return "f1";
        case FeatureSet::f2: return "f2";
        case FeatureSet::f3: return "f3";
    }
    return "f1";
}

int channel_count(RobotKind robot, FeatureSet set) {
    const int per_block = robot == RobotKind::planar2d ? 6 : 9;
    return set == FeatureSet::f3 ? 2 * per_block : per_block;
}

Eigen::MatrixXd zscore_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    const auto n = static_cast<double>(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const double mean = rows.row(r).mean();
        const Eigen::RowVectorXd centred = rows.row(r).array() - mean;
        const double sd = std::sqrt(centred.squaredNorm() / n);
        // Rows that are constant up to rounding have no scale to normalize.
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
            out.row(r).setZero();
        } else {
            out.row(r) = centred / sd;
        }
    }
    return out;
}

FeatureMatrix zscore(FeatureMatrix matrix) {
    if (matrix.samples() < 2) throw ContractError("z-score needs at least 2 samples");
    matrix.values = zscore_rows(matrix.values);
    return matrix;
}

namespace {

template <int N>
void append_block(Eigen::MatrixXd& dst, Eigen::Index& row, std::vector<std::string>& labels,
                  const Eigen::Matrix<double, N, Eigen::Dynamic>& base, const Eigen::Matrix<double, N, Eigen::Dynamic>& d1,
                  const Eigen::Matrix<double, N, Eigen::Dynamic>& d2, const std::string& name) {
    const std::string prefixes[3] = {"", "d", "dd"};
    const Eigen::Matrix<double, N, Eigen::Dynamic>* blocks[3] = {&base, &d1, &d2};
    for (int b = 0; b < 3; ++b) {
        dst.middleRows(row, N) = *blocks[b];
        for (int j = 0; j < N; ++j) labels.push_back(prefixes[b] + name + std::to_string(j + 1));
        row += N;
    }
}

template <int N>
FeatureMatrix build_feature_set_impl(const JointTrajectory<N>& jt, const TorqueTrajectory<N>& tt, FeatureSet set) {
    if (jt.size() == 0 || tt.size() == 0) throw ContractError("empty trajectory");
    if (jt.size() != tt.size()) throw ContractError("joint and torque trajectories differ in length");
    if (jt.size() < 3) throw ContractError("feature extraction needs at least 3 samples");
    jt.validate();

    FeatureMatrix fm;
    fm.robot = N == 2 ? RobotKind::planar2d : RobotKind::spatial3d;
    fm.set = set;
    fm.values.resize(channel_count(fm.robot, set), jt.size());

    Eigen::Index row = 0;
    if (set != FeatureSet::f2) append_block<N>(fm.values, row, fm.labels, jt.q, jt.dq, jt.ddq, "q");
    if (set != FeatureSet::f1) {
        const double dt = tt.dt > 0 ? tt.dt : jt.dt;
        const Eigen::Matrix<double, N, Eigen::Dynamic> d1 = differentiate_rows(tt.tau, dt, 1);
        const Eigen::Matrix<double, N, Eigen::Dynamic> d2 = differentiate_rows(tt.tau, dt, 2);
        append_block<N>(fm.values, row, fm.labels, tt.tau, d1, d2, "tau");
    }
    return zscore(std::move(fm));
}

}  // namespace

FeatureMatrix build_feature_set(const JointTrajectory2D& jt, const TorqueTrajectory2D& tt, FeatureSet set) {
    return build_feature_set_impl<2>(jt, tt, set);
}

FeatureMatrix build_feature_set(const JointTrajectory3D& jt, const TorqueTrajectory3D& tt, FeatureSet set) {
    return build_feature_set_impl<3>(jt, tt, set);
}

int HistogramEdges::bin_of(Eigen::Index channel, double value) const {
    if (degenerate(channel)) return 0;
    const double pos = (value - lo[channel]) / (hi[channel] - lo[channel]) * bins;
    if (!(pos > 0)) return 0;
    return std::min(static_cast<int>(pos), bins - 1);
}

HistogramEdges fit_histogram_edges(std::span<const FeatureMatrix> references, int bins) {
    if (bins < 2) throw ContractError("histogram needs at least 2 bins");
    if (references.empty()) throw ContractError("histogram edges need at least one reference");
    const auto c = references.front().channels();
    HistogramEdges e;
    e.bins = bins;
    e.lo = Eigen::VectorXd::Constant(c, std::numeric_limits<double>::infinity());
    e.hi = Eigen::VectorXd::Constant(c, -std::numeric_limits<double>::infinity());
    for (const auto& m : references) {
        if (m.channels() != c) throw ContractError("references differ in channel count");
        if (m.samples() == 0) throw ContractError("empty reference matrix");
        e.lo = e.lo.cwiseMin(m.values.rowwise().minCoeff());
        e.hi = e.hi.cwiseMax(m.values.rowwise().maxCoeff());
    }
    return e;
}

HistogramFeature histogram_features(const FeatureMatrix& matrix, const HistogramEdges& edges) {
    if (matrix.samples() == 0) throw ContractError("histogram of an empty matrix");
    if (matrix.channels() != edges.channels()) throw ContractError("histogram layout does not match the channels");
    HistogramFeature h;
    h.edges = edges;
    h.samples = matrix.samples();
    h.absolute = Eigen::MatrixXi::Zero(matrix.channels(), edges.bins);
    for (Eigen::Index c = 0; c < matrix.channels(); ++c) {
        for (Eigen::Index t = 0; t < matrix.samples(); ++t) ++h.absolute(c, edges.bin_of(c, matrix.values(c, t)));
    }
    h.relative = h.absolute.cast<double>() / static_cast<double>(h.samples);
    return h;
}

HistogramFeature histogram_features(const FeatureMatrix& matrix, int bins) {
    return histogram_features(matrix, fit_histogram_edges(std::span<const FeatureMatrix>(&matrix, 1), bins));
}

std::string feature_matrix_to_csv(const FeatureMatrix& matrix) {
    std::ostringstream os;
    for (std::size_t i = 0; i < matrix.labels.size(); ++i) os << (i ? "," : "") << matrix.labels[i];
    os << '\n';
    for (Eigen::Index t = 0; t < matrix.samples(); ++t) {
        for (Eigen::Index c = 0; c < matrix.channels(); ++c) {
            os << (c ? "," : "") << detail::format_double(matrix.values(c, t));
        }
        os << '\n';
    }
    return os.str();
}

FeatureMatrix feature_matrix_from_csv(std::string_view csv) {
    const auto rows = detail::lines(csv);
    if (rows.empty()) throw ParseError("empty feature csv");
    FeatureMatrix fm;
    for (auto l : detail::split(rows[0], ',')) fm.labels.emplace_back(detail::trim(l));
    const auto c = static_cast<Eigen::Index>(fm.labels.size());
    fm.values.resize(c, static_cast<Eigen::Index>(rows.size() - 1));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto fields = detail::split(rows[r], ',');
        if (static_cast<Eigen::Index>(fields.size()) != c) throw ParseError("wrong column count", r + 1);
        for (Eigen::Index k = 0; k < c; ++k) {
            const auto v = detail::parse_double(fields[static_cast<std::size_t>(k)]);
            if (!v) throw ParseError("invalid number", r + 1);
            fm.values(k, static_cast<Eigen::Index>(r - 1)) = *v;
        }
    }

    const bool has_q = std::any_of(fm.labels.begin(), fm.labels.end(), [](const auto& l) { return l.starts_with("q"); });
    const bool has_tau = std::any_of(fm.labels.begin(), fm.labels.end(), [](const auto& l) { return l.starts_with("tau"); });
    fm.set = has_q && has_tau ? FeatureSet::f3 : (has_tau ? FeatureSet::f2 : FeatureSet::f1);
    fm.robot = c == channel_count(RobotKind::spatial3d, fm.set) ? RobotKind::spatial3d : RobotKind::planar2d;
    return fm;
}

std::string samples_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& rows, std::span<const std::string> labels,
                           double dt) {
    if (static_cast<Eigen::Index>(labels.size()) != rows.rows()) throw ContractError("one label per row expected");
    std::ostringstream os;
    os << 't';
    for (const auto& l : labels) os << ',' << l;
    os << '\n';
    for (Eigen::Index t = 0; t < rows.cols(); ++t) {
        os << detail::format_double(static_cast<double>(t) * dt);
        for (Eigen::Index r = 0; r < rows.rows(); ++r) os << ',' << detail::format_double(rows(r, t));
        os << '\n';
    }
    return os.str();
}

}  // namespace robosig

#include "robosig/pipeline.hpp"

#include "robosig/detail/text.hpp"
#include "robosig/errors.hpp"

#include <sstream>

namespace robosig {

std::string_view to_string(VerifierKind kind) { return kind == VerifierKind::dtw ? "dtw" : "man"; }

std::string_view to_string(GravityMode mode) { return mode == GravityMode::vertical ? "vertical" : "horizontal"; }

namespace {

std::string_view to_string(ScoreAggregation a) { return a == ScoreAggregation::min ? "min" : "mean"; }

std::string_view to_string(std::optional<TimeUnit> u) {
    if (!u) return "auto";
    switch (*u) {
        case TimeUnit::seconds: return "s";
        case TimeUnit::milliseconds: return "ms";
        case TimeUnit::sample_index: return "index";
    }
    return "auto";
}

class DtwModel final : public EnrolledModel {
public:
    explicit DtwModel(DtwReferenceSet refs) : refs_(std::move(refs)) {}
    double score(const FeatureMatrix& question) const override { return dtw_score(question, refs_); }

private:
    DtwReferenceSet refs_;
};

class DtwVerifier final : public Verifier {
public:
    explicit DtwVerifier(DtwOptions options) : options_(options) {}
    std::unique_ptr<EnrolledModel> enroll(const std::string& user, std::vector<FeatureMatrix> refs) const override {
        return std::make_unique<DtwModel>(DtwReferenceSet(user, std::move(refs), options_));
    }

private:
    DtwOptions options_;
};

class ManhattanModel final : public EnrolledModel {
public:
    explicit ManhattanModel(HistogramReferenceSet refs) : refs_(std::move(refs)) {}
    double score(const FeatureMatrix& question) const override { return manhattan_score(question, refs_); }

private:
    HistogramReferenceSet refs_;
};

class ManhattanVerifier final : public Verifier {
public:
    explicit ManhattanVerifier(int bins) : bins_(bins) {}
    std::unique_ptr<EnrolledModel> enroll(const std::string& user, std::vector<FeatureMatrix> refs) const override {
        return std::make_unique<ManhattanModel>(HistogramReferenceSet(user, refs, bins_));
    }

private:
    int bins_;
};

}  // namespace

void PipelineConfig::validate() const {
    if (refs < 2) throw ContractError("refs must be at least 2");
    if (histogram_bins < 2) throw ContractError("histogram bins must be at least 2");
    if (!(dpi > 0) || !std::isfinite(dpi)) throw ContractError("dpi must be positive");
    if (!(rate > 0) || !std::isfinite(rate)) throw ContractError("rate must be positive");
    if (resample_hz && !(*resample_hz > 0)) throw ContractError("resample rate must be positive");
    if (dtw_band && *dtw_band < 0) throw ContractError("DTW band must be non-negative");
}

std::string PipelineConfig::method_text() const {
    std::ostringstream os;
    os << "robot=" << to_string(robot) << ";features=" << to_string(features) << ";verifier=" << to_string(verifier)
       << ";gravity=" << to_string(gravity) << ";forgery=" << to_string(forgery) << ";refs=" << refs
       << ";bins=" << histogram_bins
       << ";resample=" << (resample_hz ? detail::format_double(*resample_hz) : std::string("native"))
       << ";band=" << (dtw_band ? std::to_string(*dtw_band) : std::string("none"))
       << ";aggregation=" << to_string(aggregation) << ';';
    return os.str();
}

std::string PipelineConfig::config_text() const {
    std::ostringstream os;
    os << method_text() << "dpi=" << detail::format_double(dpi) << ";rate=" << detail::format_double(rate)
       << ";time_unit=" << to_string(time_unit) << ';';
    return os.str();
}

SignatureMeta PipelineConfig::signature_meta() const {
    SignatureMeta meta;
    meta.dpi = dpi;
    meta.nominal_rate = rate;
    meta.time_unit = time_unit;
    return meta;
}

RobotFeatures extract_robot_features(const TrajectorySI& traj, const PipelineConfig& config) {
    RobotFeatures out;
    out.dt = traj.dt;
    if (config.robot == RobotKind::planar2d) {
        Arm2D arm;
        arm.gravity = config.gravity;
        const auto jt = ik_trajectory_2d(place_signature_2d(traj, arm), arm);
        const auto tt = inverse_dynamics_2d(jt, arm);
        out.features = build_feature_set(jt, tt, config.features);
        out.q = jt.q;
        out.dq = jt.dq;
        out.ddq = jt.ddq;
        out.tau = tt.tau;
    } else {
        const Arm3D arm;
        const auto jt = ik_trajectory_3d(place_signature_3d(traj, arm), traj.dt, arm);
        const auto tt = uicker_dynamics(jt, arm);
        out.features = build_feature_set(jt, tt, config.features);
        out.q = jt.q;
        out.dq = jt.dq;
        out.ddq = jt.ddq;
        out.tau = tt.tau;
    }
    return out;
}

RobotFeatures extract_robot_features(const RawSignature& raw, const PipelineConfig& config) {
    return extract_robot_features(prepare_trajectory(raw, config.resample_hz), config);
}

FeatureMatrix extract_features(const ManifestEntry& entry, const PipelineConfig& config) {
    auto meta = config.signature_meta();
    meta.user_id = entry.user_id;
    meta.label = entry.label;
    return extract_robot_features(load_signature(entry.path, meta), config).features;
}

std::unique_ptr<Verifier> make_verifier(const PipelineConfig& config) {
    if (config.verifier == VerifierKind::dtw) return std::make_unique<DtwVerifier>(DtwOptions{config.dtw_band, config.aggregation});
    return std::make_unique<ManhattanVerifier>(config.histogram_bins);
}

Evaluation evaluate(std::span<const ManifestEntry> manifest, const PipelineConfig& config, unsigned jobs) {
    config.validate();
    const auto plan = plan_protocol(manifest, config.refs, config.forgery);
    const auto verifier = make_verifier(config);
    auto trials = run_protocol(
        manifest, plan, [&](const ManifestEntry& e) { return extract_features(e, config); }, *verifier, jobs);
    Evaluation ev;
    ev.report = compute_eer(std::move(trials), config.config_fingerprint(), config.method_fingerprint());
    ev.skipped_users = plan.skipped_users;
    return ev;
}

Evaluation evaluate(const PipelineConfig& config, unsigned jobs) {
    const auto manifest = load_manifest(config.manifest);
    return evaluate(manifest, config, jobs);
}

}  // namespace robosig

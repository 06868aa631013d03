#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include "robosig/errors.hpp"
#include "robosig/pipeline.hpp"
#include "robosig/synth.hpp"

namespace robosig::cli {

namespace {

template <typename E>
using Names = std::map<std::string, E>;

const Names<RobotKind> kRobots{{"2d", RobotKind::planar2d}, {"3d", RobotKind::spatial3d}};
const Names<FeatureSet> kFeatureSets{{"f1", FeatureSet::f1}, {"f2", FeatureSet::f2}, {"f3", FeatureSet::f3}};
const Names<VerifierKind> kVerifiers{{"dtw", VerifierKind::dtw}, {"man", VerifierKind::man}};
const Names<GravityMode> kGravity{{"horizontal", GravityMode::horizontal}, {"vertical", GravityMode::vertical}};
const Names<ForgeryType> kForgery{{"skilled", ForgeryType::skilled}, {"random", ForgeryType::random}};
const Names<TimeUnit> kTimeUnits{{"s", TimeUnit::seconds}, {"ms", TimeUnit::milliseconds}, {"index", TimeUnit::sample_index}};
const Names<ScoreAggregation> kAggregation{{"min", ScoreAggregation::min}, {"mean", ScoreAggregation::mean}};

struct Options {
    PipelineConfig config;
    std::string robot, features, verifier, gravity, forgery, aggregation;
    std::string time_unit;
    double resample_hz = 0.0;
    long band = -1;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
}

template <typename E>
CLI::IsMember names(const Names<E>& table) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : table) keys.push_back(k);
    return CLI::IsMember(keys);
}

PipelineConfig finalize(const Options& o) {
    PipelineConfig c = o.config;
    if (!o.robot.empty()) c.robot = kRobots.at(o.robot);
    if (!o.features.empty()) c.features = kFeatureSets.at(o.features);
    if (!o.verifier.empty()) c.verifier = kVerifiers.at(o.verifier);
    if (!o.gravity.empty()) c.gravity = kGravity.at(o.gravity);
    if (!o.forgery.empty()) c.forgery = kForgery.at(o.forgery);
    if (!o.aggregation.empty()) c.aggregation = kAggregation.at(o.aggregation);
    if (!o.time_unit.empty()) c.time_unit = kTimeUnits.at(o.time_unit);
    if (o.resample_hz > 0) c.resample_hz = o.resample_hz;
    if (o.band >= 0) c.dtw_band = o.band;
    c.validate();
    return c;
}

std::vector<std::string> joint_labels(const char* prefix, Eigen::Index joints) {
    std::vector<std::string> out;
    for (const char* order : {"", "d", "dd"}) {
        for (Eigen::Index j = 0; j < joints; ++j) out.push_back(std::string(order) + prefix + std::to_string(j + 1));
    }
    return out;
}

int cmd_extract(const PipelineConfig& config, const std::filesystem::path& signature, std::ostream& out) {
    auto meta = config.signature_meta();
    const auto raw = load_signature(signature, meta);
    const auto rf = extract_robot_features(raw, config);

    const auto joints = rf.q.rows();
    Eigen::MatrixXd q_rows(3 * joints, rf.q.cols());
    q_rows << rf.q, rf.dq, rf.ddq;
    const auto q_labels = joint_labels("q", joints);
    std::vector<std::string> tau_labels;
    for (Eigen::Index j = 0; j < joints; ++j) tau_labels.push_back("tau" + std::to_string(j + 1));

    const auto stem = signature.stem().string();
    const auto dir = config.out_dir;
    const auto q_path = dir / (stem + "_q.csv");
    const auto tau_path = dir / (stem + "_tau.csv");
    const auto feat_path = dir / (stem + "_" + std::string(to_string(config.features)) + ".csv");
    write_file(q_path, samples_to_csv(q_rows, q_labels, rf.dt));
    write_file(tau_path, samples_to_csv(rf.tau, tau_labels, rf.dt));
    write_file(feat_path, feature_matrix_to_csv(rf.features));
    out << "wrote " << q_path.string() << "\nwrote " << tau_path.string() << "\nwrote " << feat_path.string() << " ("
        << rf.features.channels() << " channels x " << rf.features.samples() << " samples)\n";
    return kOk;
}

int cmd_evaluate(const PipelineConfig& config, unsigned jobs, std::ostream& out, std::ostream& err) {
    if (config.manifest.empty()) throw ContractError("evaluate needs --manifest");
    const auto ev = evaluate(config, jobs);
    for (const auto& u : ev.skipped_users) err << "warning: user " << u << " skipped (not enough genuine signatures)\n";
    write_file(config.out_dir / "scores.csv", scores_to_csv(ev.report.trials));
    write_file(config.out_dir / "det.csv", det_to_csv(ev.report.det));
    write_file(config.out_dir / "report.txt", report_to_text(ev.report));
    out << report_to_text(ev.report);
    return kOk;
}

struct Timing {
    double mean_ms = 0.0;
    double std_ms = 0.0;
};

template <typename Fn>
Timing time_it(int iterations, Fn&& fn) {
    std::vector<double> ms;
    ms.reserve(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    Timing t;
    for (double v : ms) t.mean_ms += v;
    t.mean_ms /= static_cast<double>(ms.size());
    for (double v : ms) t.std_ms += (v - t.mean_ms) * (v - t.mean_ms);
    t.std_ms = std::sqrt(t.std_ms / static_cast<double>(ms.size()));
    return t;
}

int cmd_bench(const PipelineConfig& config, const std::filesystem::path& signature, int iterations, std::ostream& out) {
    if (iterations <= 0) throw ContractError("iterations must be positive");
    const auto traj = prepare_trajectory(load_signature(signature, config.signature_meta()), config.resample_hz);
    const double samples = static_cast<double>(traj.size());
    // Budgets are stated for a 500-sample signature and scale linearly.
    const double scale = std::max(1.0, samples / 500.0);

    Arm2D arm2;
    arm2.gravity = config.gravity;
    const Arm3D arm3;
    JointTrajectory2D jt2;
    JointTrajectory3D jt3;
    TorqueTrajectory2D tt2;
    TorqueTrajectory3D tt3;
    const auto ik2 = time_it(iterations, [&] { jt2 = ik_trajectory_2d(place_signature_2d(traj, arm2), arm2); });
    const auto tq2 = time_it(iterations, [&] { tt2 = inverse_dynamics_2d(jt2, arm2); });
    const auto ik3 = time_it(iterations, [&] { jt3 = ik_trajectory_3d(place_signature_3d(traj, arm3), traj.dt, arm3); });
    const auto tq3 = time_it(iterations, [&] { tt3 = uicker_dynamics(jt3, arm3); });

    struct Row {
        const char* name;
        Timing t;
        double budget_ms;  // <= 0: none
    };
    const Row rows[] = {{"2d ik", ik2, 1.0 * scale}, {"2d torques", tq2, 1.0 * scale},
                        {"3d ik", ik3, 0.0},         {"3d torques", tq3, 50.0 * scale}};
    bool ok = true;
    out << "samples = " << traj.size() << ", iterations = " << iterations << '\n';
    for (const auto& r : rows) {
        out << r.name << ": " << r.t.mean_ms << " +- " << r.t.std_ms << " ms";
        if (r.budget_ms > 0) {
            const bool pass = r.t.mean_ms < r.budget_ms;
            ok = ok && pass;
            out << " (budget " << r.budget_ms << " ms: " << (pass ? "PASS" : "FAIL") << ')';
        }
        out << '\n';
    }
    return ok ? kOk : kBudgetExceeded;
}

int cmd_synth(const std::filesystem::path& dir, const synth::CorpusOptions& opts, std::ostream& out) {
    const auto entries = synth::write_corpus(dir, opts);
    out << "wrote " << entries.size() << " signatures and " << (dir / "manifest.tsv").string() << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robot-arm kinematic and dynamic features for online signature verification", "robosig"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");

    Options o;
    auto& c = o.config;
    app.add_option("--robot", o.robot, "Arm model")->check(names(kRobots));
    app.add_option("--features", o.features, "Feature set")->check(names(kFeatureSets));
    app.add_option("--verifier", o.verifier, "Verifier")->check(names(kVerifiers));
    app.add_option("--gravity", o.gravity, "Writing plane of the 2D arm")->check(names(kGravity));
    app.add_option("--forgery", o.forgery, "Impostor protocol")->check(names(kForgery));
    app.add_option("--refs", c.refs, "Reference signatures per user")->check(CLI::Range(2, 1000));
    app.add_option("--bins", c.histogram_bins, "Histogram bins per channel")->check(CLI::Range(2, 100000));
    app.add_option("--dpi", c.dpi, "Digitizer resolution")->check(CLI::PositiveNumber);
    app.add_option("--rate", c.rate, "Nominal sampling rate, Hz")->check(CLI::PositiveNumber);
    app.add_option("--resample", o.resample_hz, "Force resampling to this rate, Hz")->check(CLI::PositiveNumber);
    app.add_option("--time-unit", o.time_unit, "Unit of the t column")->check(CLI::IsMember({"s", "ms", "index"}));
    app.add_option("--band", o.band, "Sakoe-Chiba band for DTW, samples")->check(CLI::NonNegativeNumber);
    app.add_option("--aggregation", o.aggregation, "DTW reduction over references")->check(names(kAggregation));
    app.add_option("--manifest", c.manifest, "Dataset manifest");
    app.add_option("--out", c.out_dir, "Output directory");
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

    std::filesystem::path signature;
    int iterations = 20;
    auto* extract = app.add_subcommand("extract", "Write joint, torque and feature CSVs for one signature");
    extract->add_option("signature", signature, "Signature file")->required();
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the verification protocol over a manifest");
    auto* bench = app.add_subcommand("bench", "Time inverse kinematics and inverse dynamics");
    bench->add_option("signature", signature, "Signature file")->required();
    bench->add_option("--iterations", iterations, "Repetitions");

    synth::CorpusOptions corpus;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus and manifest");
    synth_cmd->add_option("--users", corpus.users);
    synth_cmd->add_option("--genuine", corpus.genuine);
    synth_cmd->add_option("--skilled", corpus.skilled);
    synth_cmd->add_option("--seed", corpus.seed);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(std::move(argv_rev));
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(c.out_dir, corpus, out);
        const auto config = finalize(o);
        if (extract->parsed()) return cmd_extract(config, signature, out);
        if (evaluate_cmd->parsed()) return cmd_evaluate(config, o.jobs, out, err);
        if (bench->parsed()) return cmd_bench(config, signature, iterations, out);
    } catch (const WorkspaceError& e) {
        err << "workspace error: " << e.what() << '\n';
        return kWorkspaceFailure;
    } catch (const ProtocolError& e) {
        err << "protocol error: " << e.what() << '\n';
        return kProtocolFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParseFailure;
    }
    return kOk;
}

}  // namespace robosig::cli

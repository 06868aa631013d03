#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "robosig/robosig.hpp"
#include "support.hpp"

using namespace robosig;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "robosig");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t csv_columns(const fs::path& p) {
    const auto text = slurp(p);
    const auto header = text.substr(0, text.find('\n'));
    return static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
}

fs::path small_corpus() {
    static const fs::path dir = [] {
        const auto d = testing_support::scratch_dir("cli_corpus");
        synth::CorpusOptions opts;
        opts.users = 4;
        opts.genuine = 7;
        opts.skilled = 3;
        synth::write_corpus(d, opts);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("extract writes the three CSVs") {
    const auto out = testing_support::scratch_dir("cli_extract");
    const auto sig = (small_corpus() / "u000_g0.svc").string();

    auto r = run({"extract", sig, "--robot", "2d", "--features", "f3", "--out", out.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv_columns(out / "u000_g0_f3.csv") == 12);
    CHECK(csv_columns(out / "u000_g0_q.csv") == 7);
    CHECK(csv_columns(out / "u000_g0_tau.csv") == 3);

    r = run({"extract", sig, "--robot", "3d", "--features", "f2", "--out", out.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv_columns(out / "u000_g0_f2.csv") == 9);
    CHECK(slurp(out / "u000_g0_f2.csv").rfind("tau1,tau2,tau3,dtau1", 0) == 0);

    const auto back = feature_matrix_from_csv(slurp(out / "u000_g0_f2.csv"));
    CHECK(back.robot == RobotKind::spatial3d);
}

TEST_CASE("exit codes") {
    const auto dir = testing_support::scratch_dir("cli_codes");
    std::ofstream(dir / "far.svc") << "3\n0 0 0 1\n1000000 0 10 1\n0 10 20 1\n";
    std::ofstream(dir / "broken.svc") << "4\n0 0 0 1\n1 1 10 1\n";
    std::ofstream(dir / "ok.svc") << "4\n0 0 0 1\n10 0 10 1\n20 5 20 1\n30 5 30 1\n";

    auto r = run({"extract", (dir / "far.svc").string(), "--out", dir.string()});
    CHECK(r.code == cli::kWorkspaceFailure);
    CHECK(r.err.find("sample 1") != std::string::npos);
    CHECK(run({"extract", (dir / "broken.svc").string(), "--out", dir.string()}).code == cli::kParseFailure);
    CHECK(run({"extract", (dir / "missing.svc").string()}).code == cli::kParseFailure);
    CHECK(run({"bench", (dir / "ok.svc").string(), "--iterations", "0"}).code == cli::kParseFailure);
    CHECK(run({"extract", (dir / "ok.svc").string(), "--robot", "4d"}).code != cli::kOk);
    CHECK(run({}).code != cli::kOk);

    // A manifest without skilled forgeries cannot run the skilled protocol.
    std::ofstream(dir / "manifest.tsv") << "u1\tgenuine\tok.svc\n";
    r = run({"evaluate", "--manifest", (dir / "manifest.tsv").string(), "--forgery", "skilled", "--refs", "2"});
    CHECK(r.code == cli::kProtocolFailure);
}

TEST_CASE("evaluate is deterministic and writes its reports") {
    const auto manifest = (small_corpus() / "manifest.tsv").string();
    const auto a = testing_support::scratch_dir("cli_eval_a"), b = testing_support::scratch_dir("cli_eval_b");
    const std::vector<std::string> common = {"evaluate", "--manifest", manifest, "--robot", "2d", "--features", "f1",
                                             "--verifier", "dtw", "--forgery", "skilled"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.end(), {"--out", a.string(), "--jobs", "1"});
    args_b.insert(args_b.end(), {"--out", b.string(), "--jobs", "3"});
    const auto ra = run(args_a), rb = run(args_b);
    REQUIRE(ra.code == cli::kOk);
    REQUIRE(rb.code == cli::kOk);
    CHECK(slurp(a / "scores.csv") == slurp(b / "scores.csv"));
    CHECK(slurp(a / "det.csv") == slurp(b / "det.csv"));
    CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
    CHECK(slurp(a / "report.txt").find("eer_percent = ") != std::string::npos);
    // 4 users x 2 test genuine, 4 x 3 skilled.
    CHECK(slurp(a / "report.txt").find("n_genuine_trials = 8") != std::string::npos);
    CHECK(slurp(a / "report.txt").find("n_impostor_trials = 12") != std::string::npos);

    const auto rm = run({"evaluate", "--manifest", manifest, "--verifier", "man", "--out", a.string()});
    CHECK(rm.code == cli::kOk);
}

TEST_CASE("short users are skipped with a warning") {
    const auto dir = testing_support::scratch_dir("cli_skip");
    const auto src = small_corpus();
    std::string manifest = slurp(src / "manifest.tsv");
    std::istringstream lines(manifest);
    std::ostringstream kept;
    for (std::string line; std::getline(lines, line);) {
        // Drop most genuine signatures of u003.
        if (line.rfind("u003\tgenuine", 0) == 0 && line.find("_g0") == std::string::npos) continue;
        kept << line << '\n';
    }
    std::ofstream(dir / "manifest.tsv") << kept.str();
    for (const auto& e : fs::directory_iterator(src))
        if (e.path().extension() == ".svc") fs::copy_file(e.path(), dir / e.path().filename());
    const auto r = run({"evaluate", "--manifest", (dir / "manifest.tsv").string(), "--out", dir.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.err.find("u003") != std::string::npos);
}

TEST_CASE("config file with flags taking precedence") {
    const auto dir = testing_support::scratch_dir("cli_config");
    const auto sig = (small_corpus() / "u000_g0.svc").string();
    std::ofstream(dir / "run.conf") << "robot = 3d\nfeatures = f2\nout = " << dir.string() << "\n";
    auto r = run({"extract", sig, "--config", (dir / "run.conf").string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv_columns(dir / "u000_g0_f2.csv") == 9);
    r = run({"extract", sig, "--config", (dir / "run.conf").string(), "--features", "f3"});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv_columns(dir / "u000_g0_f3.csv") == 18);
}

TEST_CASE("bench reports both robots") {
    const auto r = run({"bench", (small_corpus() / "u000_g0.svc").string(), "--iterations", "3"});
    CHECK(r.code == cli::kOk);
    for (const char* key : {"2d ik", "2d torques", "3d ik", "3d torques"}) CHECK(r.out.find(key) != std::string::npos);
    CHECK(r.out.find("+-") != std::string::npos);
}

TEST_CASE("config fingerprint tracks every setting") {
    const PipelineConfig base;
    std::vector<PipelineConfig> variants(12, base);
    variants[0].robot = RobotKind::spatial3d;
    variants[1].features = FeatureSet::f3;
    variants[2].verifier = VerifierKind::man;
    variants[3].gravity = GravityMode::horizontal;
    variants[4].forgery = ForgeryType::random;
    variants[5].refs = 4;
    variants[6].histogram_bins = 8;
    variants[7].resample_hz = 200.0;
    variants[8].dtw_band = 10;
    variants[9].aggregation = ScoreAggregation::mean;
    variants[10].dpi = 1000;
    variants[11].rate = 200;
    std::set<std::string> seen{base.config_fingerprint()};
    for (const auto& v : variants) seen.insert(v.config_fingerprint());
    CHECK(seen.size() == variants.size() + 1);
    // Dataset settings leave the method fingerprint alone.
    CHECK(variants[10].method_fingerprint() == base.method_fingerprint());
    CHECK(variants[2].method_fingerprint() != base.method_fingerprint());

    PipelineConfig bad;
    bad.refs = 1;
    CHECK_THROWS_AS(bad.validate(), ContractError);
}

#include "robosig/synth.hpp"

#include "robosig/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace robosig::synth {

namespace {

constexpr int kOversample = 20;

double stroke_end(const Stroke& s) { return s.t0 + std::exp(s.mu + 3.5 * s.sigma); }

// Speed and direction of a stroke at time t.
void stroke_velocity(const Stroke& s, double t, double& vx, double& vy) {
    vx = vy = 0.0;
    const double tau = t - s.t0;
    if (tau <= 0.0) return;
    const double z = (std::log(tau) - s.mu) / s.sigma;
    const double speed = s.amplitude / (s.sigma * std::sqrt(2 * std::numbers::pi) * tau) * std::exp(-0.5 * z * z);
    const double progress = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double phi = s.theta_start + (s.theta_end - s.theta_start) * progress;
    vx = speed * std::cos(phi);
    vy = speed * std::sin(phi);
}

}  // namespace

SignatureTemplate random_template(std::mt19937_64& rng, int min_strokes, int max_strokes) {
    std::uniform_int_distribution<int> count(min_strokes, max_strokes);
    std::uniform_real_distribution<double> gap(0.08, 0.2), mu(-2.0, -1.4), sigma(0.2, 0.4), amp(0.005, 0.02),
        angle(-std::numbers::pi, std::numbers::pi), bend(-1.0, 1.0);
    SignatureTemplate tpl;
    double t0 = 0.0;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        Stroke s;
        s.t0 = t0;
        s.mu = mu(rng);
        s.sigma = sigma(rng);
        s.amplitude = amp(rng);
        s.theta_start = angle(rng);
        s.theta_end = s.theta_start + bend(rng);
        tpl.strokes.push_back(s);
        t0 += gap(rng);
    }
    return tpl;
}

SignatureTemplate jitter(const SignatureTemplate& base, const JitterLevels& levels, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    SignatureTemplate out = base;
    for (auto& s : out.strokes) {
        s.amplitude *= std::max(0.2, 1.0 + levels.amplitude * n01(rng));
        const double turn = levels.angle * n01(rng);
        s.theta_start += turn;
        s.theta_end += turn + levels.angle * n01(rng);
        s.t0 = std::max(0.0, s.t0 + levels.onset * n01(rng));
        s.mu += levels.mu * n01(rng);
        s.sigma *= std::max(0.2, 1.0 + levels.sigma * n01(rng));
    }
    return out;
}

TrajectorySI render(const SignatureTemplate& tpl, double rate_hz) {
    if (tpl.strokes.empty()) throw ContractError("template without strokes");
    double t_end = 0.0;
    for (const auto& s : tpl.strokes) t_end = std::max(t_end, stroke_end(s));
    const double dt = 1.0 / rate_hz;
    const auto n = static_cast<Eigen::Index>(std::ceil(t_end / dt)) + 1;
    const double h = dt / kOversample;

    TrajectorySI out;
    out.dt = dt;
    out.x.resize(n);
    out.y.resize(n);
    out.t.resize(n);
    double x = 0.0, y = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        out.t[k] = static_cast<double>(k) * dt;
        out.x[k] = x;
        out.y[k] = y;
        // Midpoint rule over the next sampling interval.
        for (int j = 0; j < kOversample; ++j) {
            const double t = out.t[k] + (j + 0.5) * h;
            for (const auto& s : tpl.strokes) {
                double vx, vy;
                stroke_velocity(s, t, vx, vy);
                x += vx * h;
                y += vy * h;
            }
        }
    }
    return out;
}

double fit_scale(const SignatureTemplate& tpl, double box) {
    const auto tr = render(tpl);
    const double extent = std::max(tr.x.maxCoeff() - tr.x.minCoeff(), tr.y.maxCoeff() - tr.y.minCoeff());
    return extent > 0 ? box / extent : 1.0;
}

SignatureTemplate scaled(SignatureTemplate tpl, double factor) {
    for (auto& s : tpl.strokes) s.amplitude *= factor;
    return tpl;
}

RawSignature to_raw(const TrajectorySI& traj, double dpi) {
    RawSignature raw;
    raw.meta.dpi = dpi;
    raw.meta.nominal_rate = traj.dt > 0 ? 1.0 / traj.dt : 100.0;
    raw.meta.time_unit = TimeUnit::milliseconds;
    const double dots_per_meter = dpi / 0.0254;
    for (Eigen::Index k = 0; k < traj.size(); ++k) {
        RawSample s;
        s.x_dots = static_cast<std::int64_t>(std::llround(traj.x[k] * dots_per_meter));
        s.y_dots = static_cast<std::int64_t>(std::llround(traj.y[k] * dots_per_meter));
        s.t = std::round(traj.t[k] * 1e6) / 1e3;
        s.pen = PenState::down;
        raw.samples.push_back(s);
    }
    return raw;
}

std::vector<TrajectorySI> signature_set(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<TrajectorySI> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto tpl = random_template(rng);
        out.push_back(render(scaled(tpl, fit_scale(tpl))));
    }
    return out;
}

std::vector<ManifestEntry> write_corpus(const std::filesystem::path& dir, const CorpusOptions& options) {
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(options.seed);
    JitterLevels forger = options.genuine_jitter;
    forger.amplitude *= options.skilled_factor;
    forger.angle *= options.skilled_factor;
    forger.onset *= options.skilled_factor;
    forger.mu *= options.skilled_factor;
    forger.sigma *= options.skilled_factor;

    std::vector<ManifestEntry> entries;
    auto emit = [&](const std::string& user, SignatureLabel label, std::size_t k, const SignatureTemplate& tpl) {
        const auto name = user + (label == SignatureLabel::genuine ? "_g" : "_s") + std::to_string(k) + ".svc";
        std::ofstream(dir / name, std::ios::binary)
            << serialize_signature(to_raw(render(tpl, options.rate_hz), options.dpi), FileFormat::svc_count_header);
        entries.push_back({user, label, dir / name});
    };

    for (std::size_t u = 0; u < options.users; ++u) {
        char id[16];
        std::snprintf(id, sizeof id, "u%03zu", u);
        auto base = random_template(rng);
        base = scaled(base, fit_scale(base));
        for (std::size_t k = 0; k < options.genuine; ++k) emit(id, SignatureLabel::genuine, k, jitter(base, options.genuine_jitter, rng));
        for (std::size_t k = 0; k < options.skilled; ++k) emit(id, SignatureLabel::skilled_forgery, k, jitter(base, forger, rng));
    }
    std::ofstream(dir / "manifest.tsv", std::ios::binary) << serialize_manifest(entries, dir);
    return entries;
}

}  // namespace robosig::synth

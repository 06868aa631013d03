#include "robosig/eval.hpp"

#include "robosig/detail/text.hpp"
#include "robosig/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace robosig {

std::string_view to_string(ForgeryType type) { return type == ForgeryType::skilled ? "skilled" : "random"; }

std::size_t ProtocolPlan::genuine_count() const {
    return static_cast<std::size_t>(std::count_if(comparisons.begin(), comparisons.end(),
                                                  [](const Comparison& c) { return c.truth == Truth::genuine; }));
}

std::size_t ProtocolPlan::impostor_count() const { return comparisons.size() - genuine_count(); }

ProtocolPlan plan_protocol(std::span<const ManifestEntry> manifest, std::size_t references, ForgeryType type) {
    if (references < 1) throw ContractError("at least one reference signature is required");

    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> genuine, skilled;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto& e = manifest[i];
        if (!genuine.count(e.user_id) && !skilled.count(e.user_id)) order.push_back(e.user_id);
        if (e.label == SignatureLabel::genuine) {
            genuine[e.user_id].push_back(i);
        } else if (e.label == SignatureLabel::skilled_forgery) {
            skilled[e.user_id].push_back(i);
        }
        // Random forgeries are synthesized from other users' genuine signatures.
    }

    ProtocolPlan plan;
    for (const auto& id : order) {
        const auto& g = genuine[id];
        if (g.size() < references + 1) {
            plan.skipped_users.push_back(id);
            continue;
        }
        plan.users.push_back({id, std::vector<std::size_t>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(references))});
    }
    if (plan.users.empty()) throw ProtocolError("no user has enough genuine signatures for the protocol");

    for (std::size_t u = 0; u < plan.users.size(); ++u) {
        const auto& id = plan.users[u].id;
        const auto& g = genuine[id];
        for (std::size_t k = references; k < g.size(); ++k)
            plan.comparisons.push_back({u, g[k], Truth::genuine, SignatureLabel::genuine});

        if (type == ForgeryType::skilled) {
            for (auto idx : skilled[id]) plan.comparisons.push_back({u, idx, Truth::impostor, SignatureLabel::skilled_forgery});
        } else {
            for (std::size_t v = 0; v < plan.users.size(); ++v) {
                if (v == u) continue;
                plan.comparisons.push_back(
                    {u, genuine[plan.users[v].id][references], Truth::impostor, SignatureLabel::random_forgery});
            }
        }
    }
    if (plan.impostor_count() == 0)
        throw ProtocolError(std::string("no impostor trials for the ") + std::string(to_string(type)) + " protocol");
    return plan;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const auto workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mtx);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<Trial> run_protocol(std::span<const ManifestEntry> manifest, const ProtocolPlan& plan,
                                const FeatureExtractor& extract, const Verifier& verifier, unsigned jobs) {
    std::vector<std::size_t> needed;
    for (const auto& u : plan.users) needed.insert(needed.end(), u.references.begin(), u.references.end());
    for (const auto& c : plan.comparisons) needed.push_back(c.question);
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    std::vector<FeatureMatrix> features(needed.size());
    parallel_for(needed.size(), jobs, [&](std::size_t i) { features[i] = extract(manifest[needed[i]]); });
    auto feature_of = [&](std::size_t manifest_index) -> const FeatureMatrix& {
        const auto it = std::lower_bound(needed.begin(), needed.end(), manifest_index);
        return features[static_cast<std::size_t>(it - needed.begin())];
    };

    std::vector<std::unique_ptr<EnrolledModel>> models(plan.users.size());
    parallel_for(plan.users.size(), jobs, [&](std::size_t u) {
        std::vector<FeatureMatrix> refs;
        for (auto idx : plan.users[u].references) refs.push_back(feature_of(idx));
        models[u] = verifier.enroll(plan.users[u].id, std::move(refs));
    });

    std::vector<Trial> trials(plan.comparisons.size());
    parallel_for(plan.comparisons.size(), jobs, [&](std::size_t i) {
        const auto& c = plan.comparisons[i];
        Trial t;
        t.target_user = plan.users[c.user].id;
        t.question = manifest[c.question].path;
        t.label = c.label;
        t.truth = c.truth;
        t.score = models[c.user]->score(feature_of(c.question));
        if (!std::isfinite(t.score)) throw ContractError("non-finite score for " + t.question.string());
        trials[i] = std::move(t);
    });
    return trials;
}

namespace {

struct RatePoint {
    double far;
    double frr;
};

// > 0 for a counterclockwise turn o -> a -> b.
double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
    return (a.far - o.far) * (b.frr - o.frr) - (a.frr - o.frr) * (b.far - o.far);
}

double hull_eer(const std::vector<DetPoint>& det) {
    std::vector<RatePoint> hull;
    for (const auto& d : det) {
        const RatePoint p{d.far_percent, d.frr_percent};
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(p);
    }
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const double diff = hull[k].far - hull[k].frr;
        if (diff == 0.0) return hull[k].far;
        if (diff > 0.0) {
            const auto& a = hull[k - 1];
            const auto& b = hull[k];
            const double da = a.far - a.frr;
            const double w = da / (da - diff);
            return a.far + w * (b.far - a.far);
        }
    }
    return hull.back().far;
}

}  // namespace

EvalReport compute_eer(std::vector<Trial> trials, std::string config_fingerprint, std::string method_fingerprint) {
    EvalReport r;
    r.config_fingerprint = std::move(config_fingerprint);
    r.method_fingerprint = std::move(method_fingerprint);
    std::vector<double> gen, imp;
    for (const auto& t : trials) {
        if (!std::isfinite(t.score)) throw ContractError("non-finite trial score");
        (t.truth == Truth::genuine ? gen : imp).push_back(t.score);
    }
    if (gen.empty() || imp.empty()) throw ProtocolError("EER needs both genuine and impostor trials");
    std::sort(gen.begin(), gen.end());
    std::sort(imp.begin(), imp.end());
    r.n_genuine = gen.size();
    r.n_impostor = imp.size();

    std::vector<double> thresholds(gen);
    thresholds.insert(thresholds.end(), imp.begin(), imp.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ng = static_cast<double>(gen.size()), ni = static_cast<double>(imp.size());
    r.det.push_back({std::nextafter(thresholds.front(), -std::numeric_limits<double>::infinity()), 0.0, 100.0});
    for (double th : thresholds) {
        const auto acc_gen = static_cast<double>(std::upper_bound(gen.begin(), gen.end(), th) - gen.begin());
        const auto acc_imp = static_cast<double>(std::upper_bound(imp.begin(), imp.end(), th) - imp.begin());
        r.det.push_back({th, 100.0 * acc_imp / ni, 100.0 * (ng - acc_gen) / ng});
    }
    r.eer_percent = hull_eer(r.det);
    r.trials = std::move(trials);
    return r;
}

EvalReport concatenate_scores(std::span<const EvalReport> reports) {
    if (reports.empty()) throw ContractError("nothing to concatenate");
    if (reports.size() == 1) return reports.front();
    std::vector<Trial> all;
    std::string configs;
    for (const auto& r : reports) {
        if (r.method_fingerprint != reports.front().method_fingerprint)
            throw ContractError("reports come from different verifier or feature configurations");
        all.insert(all.end(), r.trials.begin(), r.trials.end());
        configs += r.config_fingerprint + ';';
    }
    return compute_eer(std::move(all), fingerprint(configs), reports.front().method_fingerprint);
}

std::string fingerprint(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string scores_to_csv(std::span<const Trial> trials) {
    std::ostringstream os;
    os << "user_id,question_path,label,score\n";
    for (const auto& t : trials) {
        os << t.target_user << ',' << t.question.generic_string() << ',' << to_string(t.label) << ','
           << detail::format_double(t.score) << '\n';
    }
    return os.str();
}

std::string det_to_csv(std::span<const DetPoint> det) {
    std::ostringstream os;
    os << "threshold,far_percent,frr_percent\n";
    for (const auto& d : det) {
        os << detail::format_double(d.threshold) << ',' << detail::format_double(d.far_percent) << ','
           << detail::format_double(d.frr_percent) << '\n';
    }
    return os.str();
}

std::string report_to_text(const EvalReport& report) {
    std::ostringstream os;
    os << "eer_percent = " << detail::format_double(report.eer_percent) << '\n'
       << "n_genuine_trials = " << report.n_genuine << '\n'
       << "n_impostor_trials = " << report.n_impostor << '\n'
       << "config_fingerprint = " << report.config_fingerprint << '\n'
       << "method_fingerprint = " << report.method_fingerprint << '\n';
    return os.str();
}

}  // namespace robosig

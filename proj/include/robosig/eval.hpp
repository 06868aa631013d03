#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "robosig/features.hpp"
#include "robosig/ingest.hpp"

namespace robosig {

enum class ForgeryType { skilled, random };
enum class Truth { genuine, impostor };

std::string_view to_string(ForgeryType type);

struct Trial {
    std::string target_user;
    std::filesystem::path question;
    SignatureLabel label = SignatureLabel::genuine;
    Truth truth = Truth::genuine;
    double score = 0.0;
};

/// Which manifest entries enroll whom and which comparisons to score.
/// Indices refer to the manifest the plan was built from.
struct ProtocolPlan {
    struct User {
        std::string id;
        std::vector<std::size_t> references;
    };
    struct Comparison {
        std::size_t user;      // into users
        std::size_t question;  // into the manifest
        Truth truth;
        SignatureLabel label;
    };

    std::vector<User> users;
    std::vector<Comparison> comparisons;
    std::vector<std::string> skipped_users;

    std::size_t genuine_count() const;
    std::size_t impostor_count() const;
};

/// The first `references` genuine signatures of each user (manifest order)
/// enroll it; every later genuine is a genuine trial. Impostor trials are
/// the user's skilled forgeries, or in random mode the first non-reference
/// genuine of every other eligible user. Users with fewer than
/// references + 1 genuine signatures are skipped.
/// Throws ProtocolError if no user is eligible or a class is empty.
ProtocolPlan plan_protocol(std::span<const ManifestEntry> manifest, std::size_t references, ForgeryType type);

/// A user's enrolled template.
class EnrolledModel {
public:
    virtual ~EnrolledModel() = default;
    virtual double score(const FeatureMatrix& question) const = 0;
};

class Verifier {
public:
    virtual ~Verifier() = default;
    virtual std::unique_ptr<EnrolledModel> enroll(const std::string& user, std::vector<FeatureMatrix> references) const = 0;
};

using FeatureExtractor = std::function<FeatureMatrix(const ManifestEntry&)>;

/// Executes a plan on `jobs` worker threads. Trials come back in plan order
/// whatever the completion order.
std::vector<Trial> run_protocol(std::span<const ManifestEntry> manifest, const ProtocolPlan& plan,
                                const FeatureExtractor& extract, const Verifier& verifier, unsigned jobs = 1);

struct DetPoint {
    double threshold;
    double far_percent;
    double frr_percent;
};

struct EvalReport {
    double eer_percent = 0.0;
    std::vector<DetPoint> det;
    std::size_t n_genuine = 0;
    std::size_t n_impostor = 0;
    /// Hash of every pipeline setting, dataset options included.
    std::string config_fingerprint;
    /// Hash of the verifier and feature settings only; reports can be
    /// concatenated when these agree.
    std::string method_fingerprint;
    std::vector<Trial> trials;
};

/// Threshold sweep (accept iff score <= threshold) over every distinct score,
/// starting below the lowest one. The EER is where FAR = FRR on the lower
/// convex hull of the (FAR, FRR) sweep points, interpolating linearly between
/// adjacent hull points.
EvalReport compute_eer(std::vector<Trial> trials, std::string config_fingerprint = {},
                       std::string method_fingerprint = {});

/// Pools the trials of several reports into one. All reports must share a
/// method fingerprint; the pooled config fingerprint hashes the inputs' ones.
EvalReport concatenate_scores(std::span<const EvalReport> reports);

std::string scores_to_csv(std::span<const Trial> trials);
std::string det_to_csv(std::span<const DetPoint> det);
std::string report_to_text(const EvalReport& report);

/// 64-bit FNV-1a of `text` as 16 hex digits.
std::string fingerprint(std::string_view text);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The exception of the
/// lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace robosig

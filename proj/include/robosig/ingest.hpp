#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robosig {

enum class PenState { down, up };

enum class SignatureLabel { genuine, skilled_forgery, random_forgery };

/// On-disk layouts understood by parse_signature.
///  - svc_count_header: first line holds the sample count N, then N lines of
///    whitespace separated `x y t status [pressure]`. Seven-column SVC2004 rows
///    (`x y t status azimuth altitude pressure`) are accepted as well.
///  - csv_columns: comma separated with a header naming at least x,y,t and
///    optionally pen,pressure.
enum class FileFormat { svc_count_header, csv_columns };

/// How the t column maps to seconds.
enum class TimeUnit { seconds, milliseconds, sample_index };

struct RawSample {
    std::int64_t x_dots = 0;
    std::int64_t y_dots = 0;
    double t = 0.0;
    PenState pen = PenState::down;
    double pressure = 0.0;
};

struct SignatureMeta {
    std::string user_id;
    SignatureLabel label = SignatureLabel::genuine;
    double dpi = 2540.0;
    double nominal_rate = 100.0;
    // Unset means the format default: milliseconds for svc, seconds for csv.
    std::optional<TimeUnit> time_unit;
};

struct RawSignature {
    std::vector<RawSample> samples;
    SignatureMeta meta;

    std::size_t pen_down_count() const;
    std::vector<PenState> pen_states() const;
};

/// Pen-tip trajectory in meters and seconds.
struct TrajectorySI {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd t;
    /// Nominal sampling step; exact when is_uniform() holds.
    double dt = 0.0;

    Eigen::Index size() const { return x.size(); }
    bool is_uniform(double tol = 1e-12) const;
};

RawSignature parse_signature(std::string_view content, FileFormat format, SignatureMeta meta = {});
std::string serialize_signature(const RawSignature& sig, FileFormat format);

/// Format from the file extension: `.csv` is csv_columns, anything else svc.
FileFormat format_for_path(const std::filesystem::path& path);
RawSignature load_signature(const std::filesystem::path& path, SignatureMeta meta = {});

/// Device units to meters (0.0254 / dpi) and timestamps to seconds.
/// The result keeps every sample, pen-up included, and may be non-uniform.
TrajectorySI to_si(const RawSignature& raw);

/// Keeps pen-down samples. Each segment after the first starts one dt after
/// the previous one ends; spacing inside a segment is preserved.
TrajectorySI strip_penups(const TrajectorySI& traj, std::span<const PenState> pen_states);

/// Linear interpolation of x and y on the grid t0, t0 + 1/rate, ... <= t_end.
TrajectorySI resample_uniform(const TrajectorySI& traj, double rate_hz);

/// to_si -> strip_penups -> resample. Sources that are already uniform keep
/// their native rate unless `resample_hz` is given; non-uniform sources are
/// resampled at `resample_hz`, default 100 Hz.
TrajectorySI prepare_trajectory(const RawSignature& raw, std::optional<double> resample_hz = std::nullopt);

inline constexpr double kDefaultResampleHz = 100.0;

struct ManifestEntry {
    std::string user_id;
    SignatureLabel label = SignatureLabel::genuine;
    std::filesystem::path path;
};

/// One `user_id<TAB>label<TAB>relative_path` record per line; blank lines and
/// `#` comments are skipped. Relative paths resolve against `base_dir`.
std::vector<ManifestEntry> parse_manifest(std::string_view content, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(std::span<const ManifestEntry> entries, const std::filesystem::path& base_dir = {});

std::string_view to_string(SignatureLabel label);
SignatureLabel parse_label(std::string_view text);

}  // namespace robosig

#include "robosig/ingest.hpp"

#include "robosig/detail/text.hpp"
#include "robosig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace robosig {

namespace {

constexpr double kMetersPerInch = 0.0254;

TimeUnit default_time_unit(FileFormat format) {
    return format == FileFormat::svc_count_header ? TimeUnit::milliseconds : TimeUnit::seconds;
}

PenState parse_pen(std::string_view field, std::size_t line_no) {
    const auto f = detail::trim(field);
    if (f == "1" || f == "down") return PenState::down;
    if (f == "0" || f == "up") return PenState::up;
    throw ParseError("invalid pen state '" + std::string(f) + "'", line_no);
}

std::int64_t require_int(std::string_view field, const char* name, std::size_t line_no) {
    if (auto v = detail::parse_int(field)) return *v;
    throw ParseError(std::string("invalid ") + name + " '" + std::string(detail::trim(field)) + "'", line_no);
}

double require_double(std::string_view field, const char* name, std::size_t line_no) {
    if (auto v = detail::parse_double(field); v && std::isfinite(*v)) return *v;
    throw ParseError(std::string("invalid ") + name + " '" + std::string(detail::trim(field)) + "'", line_no);
}

std::vector<RawSample> parse_svc(std::string_view content) {
    const auto all = detail::lines(content);
    std::size_t idx = 0;
    while (idx < all.size() && detail::trim(all[idx]).empty()) ++idx;
    if (idx == all.size()) throw EmptySignatureError("empty signature file");

    const auto header_line = idx + 1;
    const auto count = detail::parse_int(all[idx]);
    if (!count || *count < 0) throw ParseError("expected sample count header", header_line);

    std::vector<RawSample> samples;
    samples.reserve(static_cast<std::size_t>(*count));
    for (++idx; idx < all.size(); ++idx) {
        const auto line_no = idx + 1;
        const auto fields = detail::split_ws(all[idx]);
        if (fields.empty()) continue;
        if (fields.size() < 4) throw ParseError("expected at least 4 fields", line_no);
        if (samples.size() == static_cast<std::size_t>(*count))
            throw ParseError("more data lines than the declared count " + std::to_string(*count), line_no);

        RawSample s;
        s.x_dots = require_int(fields[0], "x", line_no);
        s.y_dots = require_int(fields[1], "y", line_no);
        s.t = require_double(fields[2], "t", line_no);
        s.pen = parse_pen(fields[3], line_no);
        if (fields.size() >= 7) {
            s.pressure = require_double(fields[6], "pressure", line_no);
        } else if (fields.size() == 5) {
            s.pressure = require_double(fields[4], "pressure", line_no);
        }
        samples.push_back(s);
    }
    if (samples.size() != static_cast<std::size_t>(*count)) {
        throw ParseError("declared " + std::to_string(*count) + " samples but found " + std::to_string(samples.size()),
                         header_line);
    }
    return samples;
}

std::vector<RawSample> parse_csv(std::string_view content) {
    const auto all = detail::lines(content);
    std::size_t idx = 0;
    while (idx < all.size() && detail::trim(all[idx]).empty()) ++idx;
    if (idx == all.size()) throw EmptySignatureError("empty signature file");

    int col_x = -1, col_y = -1, col_t = -1, col_pen = -1, col_p = -1;
    const auto header = detail::split(all[idx], ',');
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = detail::trim(header[c]);
        const int ci = static_cast<int>(c);
        if (name == "x") col_x = ci;
        else if (name == "y") col_y = ci;
        else if (name == "t") col_t = ci;
        else if (name == "pen") col_pen = ci;
        else if (name == "pressure") col_p = ci;
    }
    if (col_x < 0 || col_y < 0 || col_t < 0) throw ParseError("csv header must name x, y and t", idx + 1);
    const auto n_cols = header.size();

    std::vector<RawSample> samples;
    for (++idx; idx < all.size(); ++idx) {
        const auto line_no = idx + 1;
        if (detail::trim(all[idx]).empty()) continue;
        const auto fields = detail::split(all[idx], ',');
        if (fields.size() != n_cols)
            throw ParseError("expected " + std::to_string(n_cols) + " columns, got " + std::to_string(fields.size()),
                             line_no);
        RawSample s;
        s.x_dots = require_int(fields[static_cast<std::size_t>(col_x)], "x", line_no);
        s.y_dots = require_int(fields[static_cast<std::size_t>(col_y)], "y", line_no);
        s.t = require_double(fields[static_cast<std::size_t>(col_t)], "t", line_no);
        if (col_pen >= 0) s.pen = parse_pen(fields[static_cast<std::size_t>(col_pen)], line_no);
        if (col_p >= 0) s.pressure = require_double(fields[static_cast<std::size_t>(col_p)], "pressure", line_no);
        samples.push_back(s);
    }
    return samples;
}

double median_step(const Eigen::VectorXd& t) {
    std::vector<double> steps;
    steps.reserve(static_cast<std::size_t>(t.size()));
    for (Eigen::Index k = 1; k < t.size(); ++k) {
        const double d = t[k] - t[k - 1];
        if (d > 0) steps.push_back(d);
    }
    if (steps.empty()) return 0.0;
    const auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
    std::nth_element(steps.begin(), mid, steps.end());
    return *mid;
}

Eigen::VectorXd uniform_axis(double t0, double dt, Eigen::Index n) {
    Eigen::VectorXd t(n);
    for (Eigen::Index k = 0; k < n; ++k) t[k] = t0 + static_cast<double>(k) * dt;
    return t;
}

}  // namespace

std::size_t RawSignature::pen_down_count() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const RawSample& s) { return s.pen == PenState::down; }));
}

std::vector<PenState> RawSignature::pen_states() const {
    std::vector<PenState> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.pen);
    return out;
}

bool TrajectorySI::is_uniform(double tol) const {
    if (t.size() < 2 || !(dt > 0)) return false;
    for (Eigen::Index k = 1; k < t.size(); ++k) {
        if (std::abs(t[k] - t[k - 1] - dt) > tol) return false;
    }
    return true;
}

RawSignature parse_signature(std::string_view content, FileFormat format, SignatureMeta meta) {
    if (!(meta.dpi > 0) || !std::isfinite(meta.dpi)) throw ContractError("dpi must be positive and finite");
    if (!(meta.nominal_rate > 0) || !std::isfinite(meta.nominal_rate))
        throw ContractError("nominal rate must be positive and finite");
    if (!meta.time_unit) meta.time_unit = default_time_unit(format);

    RawSignature sig;
    sig.meta = std::move(meta);
    sig.samples = format == FileFormat::svc_count_header ? parse_svc(content) : parse_csv(content);
    if (sig.samples.empty()) throw EmptySignatureError("signature has no samples");

    for (std::size_t k = 1; k < sig.samples.size(); ++k) {
        if (sig.samples[k].t < sig.samples[k - 1].t) {
            // +1 for 1-based numbering, +1 for the header line.
            throw ParseError("timestamps must be non-decreasing", k + 2);
        }
    }
    if (sig.pen_down_count() < 2) throw EmptySignatureError("signature needs at least 2 pen-down samples");
    return sig;
}

std::string serialize_signature(const RawSignature& sig, FileFormat format) {
    std::ostringstream os;
    if (format == FileFormat::svc_count_header) {
        os << sig.samples.size() << '\n';
        for (const auto& s : sig.samples) {
            os << s.x_dots << ' ' << s.y_dots << ' ' << detail::format_double(s.t) << ' '
               << (s.pen == PenState::down ? 1 : 0) << ' ' << detail::format_double(s.pressure) << '\n';
        }
    } else {
        os << "x,y,t,pen,pressure\n";
        for (const auto& s : sig.samples) {
            os << s.x_dots << ',' << s.y_dots << ',' << detail::format_double(s.t) << ','
               << (s.pen == PenState::down ? 1 : 0) << ',' << detail::format_double(s.pressure) << '\n';
        }
    }
    return os.str();
}

FileFormat format_for_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv" ? FileFormat::csv_columns : FileFormat::svc_count_header;
}

RawSignature load_signature(const std::filesystem::path& path, SignatureMeta meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_signature(buf.str(), format_for_path(path), std::move(meta));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

TrajectorySI to_si(const RawSignature& raw) {
    const auto n = static_cast<Eigen::Index>(raw.samples.size());
    if (n == 0) throw EmptySignatureError("signature has no samples");
    const double dpi = raw.meta.dpi;
    if (!(dpi > 0) || !std::isfinite(dpi)) throw ConversionError("dpi must be positive and finite");

    const auto unit = raw.meta.time_unit.value_or(TimeUnit::seconds);
    TrajectorySI out;
    out.x.resize(n);
    out.y.resize(n);
    out.t.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& s = raw.samples[static_cast<std::size_t>(k)];
        out.x[k] = static_cast<double>(s.x_dots) * kMetersPerInch / dpi;
        out.y[k] = static_cast<double>(s.y_dots) * kMetersPerInch / dpi;
        switch (unit) {
            case TimeUnit::seconds: out.t[k] = s.t; break;
            case TimeUnit::milliseconds: out.t[k] = s.t / 1000.0; break;
            case TimeUnit::sample_index: out.t[k] = s.t / raw.meta.nominal_rate; break;
        }
    }
    if (!out.x.allFinite() || !out.y.allFinite() || !out.t.allFinite())
        throw ConversionError("non-finite value after unit conversion");
    out.dt = median_step(out.t);
    if (!(out.dt > 0)) out.dt = 1.0 / raw.meta.nominal_rate;
    return out;
}

TrajectorySI strip_penups(const TrajectorySI& traj, std::span<const PenState> pen_states) {
    if (static_cast<Eigen::Index>(pen_states.size()) != traj.size())
        throw ContractError("pen states not aligned with trajectory samples");

    std::vector<Eigen::Index> keep;
    keep.reserve(pen_states.size());
    for (std::size_t k = 0; k < pen_states.size(); ++k) {
        if (pen_states[k] == PenState::down) keep.push_back(static_cast<Eigen::Index>(k));
    }
    if (keep.empty()) throw EmptySignatureError("no pen-down samples");

    const auto n = static_cast<Eigen::Index>(keep.size());
    TrajectorySI out;
    out.dt = traj.dt;
    out.x.resize(n);
    out.y.resize(n);
    out.t.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = keep[static_cast<std::size_t>(k)];
        out.x[k] = traj.x[src];
        out.y[k] = traj.y[src];
        if (k == 0) {
            out.t[k] = traj.t[src];
        } else if (src == keep[static_cast<std::size_t>(k - 1)] + 1) {
            out.t[k] = out.t[k - 1] + (traj.t[src] - traj.t[src - 1]);
        } else {
            out.t[k] = out.t[k - 1] + traj.dt;
        }
    }
    if (traj.is_uniform(1e-9)) out.t = uniform_axis(out.t[0], out.dt, n);
    return out;
}

TrajectorySI resample_uniform(const TrajectorySI& traj, double rate_hz) {
    if (!(rate_hz > 0) || !std::isfinite(rate_hz)) throw ContractError("resample rate must be positive");
    const auto n_in = traj.size();
    if (n_in < 2) throw ContractError("resampling needs at least 2 samples");
    for (Eigen::Index k = 1; k < n_in; ++k) {
        if (!(traj.t[k] > traj.t[k - 1])) throw ContractError("timestamps must be strictly increasing to resample");
    }

    const double step = 1.0 / rate_hz;
    const double t0 = traj.t[0];
    const double span = traj.t[n_in - 1] - t0;
    const auto n_out = static_cast<Eigen::Index>(std::floor(span * rate_hz + 1e-9)) + 1;

    TrajectorySI out;
    out.dt = step;
    out.t = uniform_axis(t0, step, n_out);
    out.x.resize(n_out);
    out.y.resize(n_out);
    Eigen::Index seg = 0;
    for (Eigen::Index k = 0; k < n_out; ++k) {
        const double tk = out.t[k];
        while (seg < n_in - 2 && traj.t[seg + 1] < tk) ++seg;
        const double ta = traj.t[seg], tb = traj.t[seg + 1];
        const double w = std::clamp((tk - ta) / (tb - ta), 0.0, 1.0);
        out.x[k] = traj.x[seg] + w * (traj.x[seg + 1] - traj.x[seg]);
        out.y[k] = traj.y[seg] + w * (traj.y[seg + 1] - traj.y[seg]);
    }
    return out;
}

TrajectorySI prepare_trajectory(const RawSignature& raw, std::optional<double> resample_hz) {
    const auto states = raw.pen_states();
    auto traj = strip_penups(to_si(raw), states);
    if (traj.size() < 2) throw EmptySignatureError("signature needs at least 2 pen-down samples");
    if (resample_hz || !traj.is_uniform(1e-9)) return resample_uniform(traj, resample_hz.value_or(kDefaultResampleHz));
    traj.t = uniform_axis(traj.t[0], traj.dt, traj.size());
    return traj;
}

std::string_view to_string(SignatureLabel label) {
    switch (label) {
        case SignatureLabel::genuine: return "genuine";
        case SignatureLabel::skilled_forgery: return "skilled";
        case SignatureLabel::random_forgery: return "random";
    }
    return "genuine";
}

SignatureLabel parse_label(std::string_view text) {
    const auto t = detail::trim(text);
    if (t == "genuine") return SignatureLabel::genuine;
    if (t == "skilled" || t == "skilled_forgery") return SignatureLabel::skilled_forgery;
    if (t == "random" || t == "random_forgery") return SignatureLabel::random_forgery;
    throw ParseError("unknown label '" + std::string(t) + "'");
}

std::vector<ManifestEntry> parse_manifest(std::string_view content, const std::filesystem::path& base_dir) {
    std::vector<ManifestEntry> out;
    const auto all = detail::lines(content);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto line = detail::trim(all[i]);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 3) throw ParseError("manifest record needs 3 tab-separated fields", i + 1);
        ManifestEntry e;
        e.user_id = std::string(detail::trim(fields[0]));
        try {
            e.label = parse_label(fields[1]);
        } catch (const ParseError& err) {
            throw ParseError(err.what(), i + 1);
        }
        std::filesystem::path p{std::string(detail::trim(fields[2]))};
        e.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        if (e.user_id.empty() || p.empty()) throw ParseError("empty manifest field", i + 1);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open manifest " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), path.parent_path());
}

std::string serialize_manifest(std::span<const ManifestEntry> entries, const std::filesystem::path& base_dir) {
    std::ostringstream os;
    for (const auto& e : entries) {
        const auto p = base_dir.empty() ? e.path : e.path.lexically_relative(base_dir);
        os << e.user_id << '\t' << to_string(e.label) << '\t' << p.generic_string() << '\n';
    }
    return os.str();
}

}  // namespace robosig

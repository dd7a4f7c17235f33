#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ferryline/errors.hpp"
#include "ferryline/geo.hpp"

namespace ferryline {

inline constexpr std::int64_t kSecondsPerDay = 86'400;

struct TraceRecord {
    std::string vehicle_id;
    std::int64_t timestamp{0};  // epoch seconds
    GeoPoint position;
    double speed{0.0};    // m/s
    double heading{0.0};  // degrees, [0, 360)

    bool operator==(const TraceRecord& o) const {
        return vehicle_id == o.vehicle_id && timestamp == o.timestamp &&
               position.latitude == o.position.latitude &&
               position.longitude == o.position.longitude &&
               speed == o.speed && heading == o.heading;
    }
};

struct TraceSet {
    std::vector<TraceRecord> records;  // sorted by (timestamp, vehicle_id)
    int day_span{1};

    bool operator==(const TraceSet& o) const {
        return day_span == o.day_span && records == o.records;
    }

    std::int64_t start_time() const {
        return records.empty() ? 0 : records.front().timestamp;
    }
    std::int64_t end_time() const {
        return records.empty() ? 0 : records.back().timestamp;
    }
};

struct LoadStats {
    std::size_t total_rows{0};
    std::size_t malformed_rows{0};
    std::vector<std::size_t> malformed_line_numbers;  // 1-based, incl. header
    std::size_t duplicate_rows{0};
};

inline constexpr std::string_view kTraceCsvHeader =
    "vehicle_id,timestamp,longitude,latitude,speed,heading";

namespace detail {

inline bool split6(std::string_view line, std::string_view out[6]) {
    int n = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (n == 6) return false;
            out[n++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return n == 6;
}

inline bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end;
}

inline bool parse_i64(std::string_view s, std::int64_t& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end;
}

inline std::optional<TraceRecord> parse_row(std::string_view line) {
    std::string_view f[6];
    if (!split6(line, f)) return std::nullopt;
    TraceRecord r;
    if (f[0].empty()) return std::nullopt;
    r.vehicle_id = std::string(f[0]);
    if (!parse_i64(f[1], r.timestamp) || r.timestamp < 0) return std::nullopt;
    if (!parse_double(f[2], r.position.longitude)) return std::nullopt;
    if (!parse_double(f[3], r.position.latitude)) return std::nullopt;
    if (!parse_double(f[4], r.speed)) return std::nullopt;
    if (!parse_double(f[5], r.heading)) return std::nullopt;
    if (!(r.position.latitude >= -90.0 && r.position.latitude <= 90.0))
        return std::nullopt;
    if (!(r.position.longitude >= -180.0 && r.position.longitude <= 180.0))
        return std::nullopt;
    if (!(r.speed >= 0.0)) return std::nullopt;
    if (!(r.heading >= 0.0 && r.heading < 360.0)) return std::nullopt;
    return r;
}

inline void format_double(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, p);
}

/// Sort by (timestamp, vehicle_id) keeping file order among equals, then
/// collapse rows sharing (vehicle_id, timestamp).
inline std::size_t normalize(std::vector<TraceRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const TraceRecord& a, const TraceRecord& b) {
                         if (a.timestamp != b.timestamp)
                             return a.timestamp < b.timestamp;
                         return a.vehicle_id < b.vehicle_id;
                     });
    const std::size_t before = records.size();
    auto last = std::unique(records.begin(), records.end(),
                            [](const TraceRecord& a, const TraceRecord& b) {
                                return a.timestamp == b.timestamp &&
                                       a.vehicle_id == b.vehicle_id;
                            });
    records.erase(last, records.end());
    return before - records.size();
}

}  // namespace detail

/// Load a trace CSV. Malformed rows are tolerated up to max_malformed_fraction
/// of the data rows; they are always counted and their line numbers kept.
inline TraceSet load_csv(const std::string& path, LoadStats* stats = nullptr,
                         double max_malformed_fraction = 0.01) {
    std::ifstream in(path);
    if (!in) throw DataError("trace file not found: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty trace file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceCsvHeader)
        throw DataError("bad trace header in " + path + ": expected '" +
                        std::string(kTraceCsvHeader) + "', got '" + line + "'");

    LoadStats local;
    TraceSet set;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++local.total_rows;
        if (auto rec = detail::parse_row(line)) {
            set.records.push_back(std::move(*rec));
        } else {
            ++local.malformed_rows;
            local.malformed_line_numbers.push_back(line_no);
        }
    }
    if (local.total_rows == 0) throw DataError("no data rows in " + path);
    if (static_cast<double>(local.malformed_rows) >
        max_malformed_fraction * static_cast<double>(local.total_rows)) {
        std::ostringstream msg;
        msg << path << ": " << local.malformed_rows << " of "
            << local.total_rows << " rows malformed (limit "
            << max_malformed_fraction * 100.0 << "%); first bad lines:";
        for (std::size_t i = 0;
             i < std::min<std::size_t>(10, local.malformed_line_numbers.size());
             ++i)
            msg << ' ' << local.malformed_line_numbers[i];
        throw DataError(msg.str());
    }
    if (set.records.empty())
        throw DataError("all rows malformed in " + path);

    local.duplicate_rows = detail::normalize(set.records);
    if (stats) *stats = std::move(local);
    return set;
}

inline void save_csv(const TraceSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write trace file: " + path);
    std::string buf(kTraceCsvHeader);
    buf += '\n';
    for (const auto& r : set.records) {
        buf += r.vehicle_id;
        buf += ',';
        buf += std::to_string(r.timestamp);
        buf += ',';
        detail::format_double(buf, r.position.longitude);
        buf += ',';
        detail::format_double(buf, r.position.latitude);
        buf += ',';
        detail::format_double(buf, r.speed);
        buf += ',';
        detail::format_double(buf, r.heading);
        buf += '\n';
        if (buf.size() > 1 << 20) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw DataError("write failed: " + path);
}

/// Replicate a single-day trace into `days` consecutive days. Copy k of every
/// record is shifted by k * 86400 s; vehicle ids are unchanged.
inline TraceSet replicate_days(const TraceSet& t, int days) {
    if (days < 1) throw ConfigError("replicate_days: days must be >= 1");
    if (!t.records.empty() &&
        t.end_time() - t.start_time() > kSecondsPerDay)
        throw DataError("replicate_days: input spans more than 24 hours");
    TraceSet out;
    out.day_span = days;
    out.records.reserve(t.records.size() * static_cast<std::size_t>(days));
    for (int k = 0; k < days; ++k) {
        const std::int64_t shift = static_cast<std::int64_t>(k) * kSecondsPerDay;
        for (const auto& r : t.records) {
            TraceRecord c = r;
            c.timestamp += shift;
            out.records.push_back(std::move(c));
        }
    }
    detail::normalize(out.records);
    return out;
}

/// Order-independent digest of a trace, echoed into reports (FNV-1a).
inline std::uint64_t trace_digest(const TraceSet& t) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& r : t.records) {
        mix(r.vehicle_id.data(), r.vehicle_id.size());
        mix(&r.timestamp, sizeof r.timestamp);
        mix(&r.position.latitude, sizeof(double));
        mix(&r.position.longitude, sizeof(double));
    }
    mix(&t.day_span, sizeof t.day_span);
    return h;
}

}  // namespace ferryline

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ferryline {

inline constexpr std::string_view kGeohashAlphabet =
    "0123456789bcdefghjkmnpqrstuvwxyz";

struct GeoPoint {
    double latitude{0.0};
    double longitude{0.0};
};

/// Base-32 geohash code naming one block of the service area.
/// Ordered lexicographically so ties can be broken deterministically.
class CellId {
  public:
    CellId() = default;

    explicit CellId(std::string code) : code_(std::move(code)) {
        if (code_.empty())
            throw std::invalid_argument("CellId: empty code");
        for (char c : code_) {
            if (kGeohashAlphabet.find(c) == std::string_view::npos)
                throw std::invalid_argument(
                    std::string("CellId: '") + c + "' not in geohash alphabet");
        }
    }

    const std::string& code() const { return code_; }

    auto operator<=>(const CellId&) const = default;

  private:
    std::string code_;
};

struct CellBounds {
    double lat_min, lat_max;
    double lon_min, lon_max;

    bool contains(const GeoPoint& p) const {
        return p.latitude >= lat_min && p.latitude <= lat_max &&
               p.longitude >= lon_min && p.longitude <= lon_max;
    }
};

inline void check_point(const GeoPoint& p) {
    if (!(p.latitude >= -90.0 && p.latitude <= 90.0))
        throw std::range_error("latitude out of range [-90, 90]: " +
                               std::to_string(p.latitude));
    if (!(p.longitude >= -180.0 && p.longitude <= 180.0))
        throw std::range_error("longitude out of range [-180, 180]: " +
                               std::to_string(p.longitude));
}

inline void check_precision(int precision) {
    if (precision < 1 || precision > 12)
        throw std::range_error("geohash precision must be in [1, 12]");
}

/// Standard geohash: interleave longitude/latitude bisection bits starting
/// with longitude, 5 bits per base-32 character. A point exactly on a
/// bisection boundary goes to the upper half.
inline CellId encode(const GeoPoint& p, int precision = 7) {
    check_point(p);
    check_precision(precision);

    double lat_lo = -90.0, lat_hi = 90.0;
    double lon_lo = -180.0, lon_hi = 180.0;
    std::string out;
    out.reserve(static_cast<std::size_t>(precision));

    bool lon_turn = true;
    int bits = 0;
    unsigned value = 0;
    while (out.size() < static_cast<std::size_t>(precision)) {
        double& lo = lon_turn ? lon_lo : lat_lo;
        double& hi = lon_turn ? lon_hi : lat_hi;
        const double coord = lon_turn ? p.longitude : p.latitude;
        const double mid = (lo + hi) / 2.0;
        value <<= 1;
        if (coord >= mid) {
            value |= 1u;
            lo = mid;
        } else {
            hi = mid;
        }
        lon_turn = !lon_turn;
        if (++bits == 5) {
            out += kGeohashAlphabet[value];
            bits = 0;
            value = 0;
        }
    }
    return CellId(std::move(out));
}

/// Bounding box of a cell (internal helper, used for containment checks).
inline CellBounds cell_bounds(const CellId& cell) {
    double lat_lo = -90.0, lat_hi = 90.0;
    double lon_lo = -180.0, lon_hi = 180.0;
    bool lon_turn = true;
    for (char c : cell.code()) {
        const auto v = static_cast<unsigned>(kGeohashAlphabet.find(c));
        for (int b = 4; b >= 0; --b) {
            double& lo = lon_turn ? lon_lo : lat_lo;
            double& hi = lon_turn ? lon_hi : lat_hi;
            const double mid = (lo + hi) / 2.0;
            if ((v >> b) & 1u)
                lo = mid;
            else
                hi = mid;
            lon_turn = !lon_turn;
        }
    }
    return {lat_lo, lat_hi, lon_lo, lon_hi};
}

struct CellExtent {
    double width_m;
    double height_m;
};

inline constexpr double kMetersPerDegree = 111'320.0;

/// Approximate cell size in meters at a given latitude. Longitude gets the
/// extra bit when the total bit count is odd.
inline CellExtent cell_extent_meters(int precision, double latitude_deg) {
    check_precision(precision);
    check_point({latitude_deg, 0.0});
    const int total_bits = 5 * precision;
    const int lon_bits = (total_bits + 1) / 2;
    const int lat_bits = total_bits / 2;
    const double height = 180.0 / std::ldexp(1.0, lat_bits) * kMetersPerDegree;
    const double width = 360.0 / std::ldexp(1.0, lon_bits) * kMetersPerDegree *
                         std::cos(latitude_deg * M_PI / 180.0);
    return {width, height};
}

}  // namespace ferryline

// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BELLSIM_ANGLE_HPP
#define BELLSIM_ANGLE_HPP

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellsim {

/// Output port of a two-channel polarizer. Transmit means the photon left
/// through the channel parallel to the polarizer axis, Reflect through the
/// perpendicular one.
enum class Outcome : unsigned char { Transmit, Reflect };

constexpr Outcome complement(Outcome o) {
    return o == Outcome::Transmit ? Outcome::Reflect : Outcome::Transmit;
}

constexpr char outcome_char(Outcome o) {
    return o == Outcome::Transmit ? 'T' : 'R';
}

inline Outcome outcome_from_char(char c) {
    if (c == 'T') {
        return Outcome::Transmit;
    }
    if (c == 'R') {
        return Outcome::Reflect;
    }
    throw std::invalid_argument(std::string("invalid outcome character '") + c + "'");
}

/// A polarizer orientation. Polarizer axes are undirected, so orientations
/// live on the half-open interval [0, 180) degrees and everything is reduced
/// mod 180.
class Angle {
  public:
    Angle() = default;

    static Angle from_degrees(double degrees) {
        if (!std::isfinite(degrees)) {
            throw std::invalid_argument("angle must be finite");
        }
        double d = std::fmod(degrees, 180.0);
        if (d < 0.0) {
            d += 180.0;
        }
        if (d >= 180.0) {  // fmod residue can round up to exactly 180
            d -= 180.0;
        }
        return Angle(d + 0.0);  // normalize -0.0 to +0.0
    }

    double degrees() const { return degrees_; }

    double radians() const { return degrees_ * std::numbers::pi / 180.0; }

    /// Orientation of the orthogonal polarizer channel.
    Angle perpendicular() const { return from_degrees(degrees_ + 90.0); }

    Angle rotated(double offset_degrees) const { return from_degrees(degrees_ + offset_degrees); }

    friend bool operator==(Angle lhs, Angle rhs) { return lhs.degrees_ == rhs.degrees_; }
    friend bool operator!=(Angle lhs, Angle rhs) { return !(lhs == rhs); }
    friend bool operator<(Angle lhs, Angle rhs) { return lhs.degrees_ < rhs.degrees_; }

  private:
    explicit Angle(double normalized_degrees) : degrees_(normalized_degrees) {}

    double degrees_ = 0.0;
};

/// Acute separation between two polarizer axes, in [0, 90] degrees.
/// cos^2 and sin^2 of the separation are insensitive to which of the two
/// mod-180 representatives is picked, so this is the only notion of
/// "angle between settings" the correlation laws need.
inline double axis_difference_degrees(Angle x, Angle y) {
    double d = std::fabs(x.degrees() - y.degrees());
    return d > 90.0 ? 180.0 - d : d;
}

inline double axis_difference_radians(Angle x, Angle y) {
    return axis_difference_degrees(x, y) * std::numbers::pi / 180.0;
}

namespace detail {

/// Shortest decimal string that round-trips the value. Used by the CSV
/// writers, where output bytes must be reproducible run to run.
inline std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("double formatting failed");
    }
    return std::string(buf, ptr);
}

/// Strict double parser: the whole token must be consumed.
inline double parse_double(const std::string& text, const char* what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
    }
    return value;
}

}  // namespace detail

}  // namespace bellsim

#endif  // BELLSIM_ANGLE_HPP

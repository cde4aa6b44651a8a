// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpt {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

/// A scenario/config field failed validation (bad units, violated invariant,
/// dimension mismatch). Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The matched-filter output was identically zero, so the transmit direction
/// is undefined. Only possible with all-zero beacon powers and zero noise.
/// Maps to CLI exit code 3.
class DegenerateSignalError : public std::runtime_error {
public:
    explicit DegenerateSignalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An ER measured a non-positive beamed power while still needing a positive
/// target; the multiplicative update has no valid ratio. Carries the ER index
/// (0-based) and block number. Maps to CLI exit code 3.
class MeasurementDegenerateError : public std::runtime_error {
public:
    MeasurementDegenerateError(std::size_t er_index, int block, const std::string& msg)
        : std::runtime_error(msg), er_index(er_index), block(block) {}
    std::size_t er_index;
    int block;
};

}  // namespace wpt

#pragma once

// JSON and CSV forms of the reports. Rationals are written as "num/den"
// strings; big integers as JSON numbers when they fit in 64 bits and as
// decimal strings otherwise.

#include <string>

#include "json.hpp"

#include "tdl/bc_simulator.hpp"
#include "tdl/torus.hpp"
#include "tdl/weil_bounds.hpp"

namespace tdl {

using Json = nlohmann::ordered_json;

std::string rational_string(const BigRational& q);
Json big_to_json(const BigInt& v);
Json matrix_to_json(const FpMatrix& m);

Json to_json(const TorusScanReport& r);
Json to_json(const UnionBound& u);
Json to_json(const PolySystem& sys, const WeilReport& r);
Json to_json(const TrialReport& r);
Json to_json(const ChiSquare& c);

/// "ell,p_exact,empirical_freq" then one row per prime.
std::string trial_csv(const TrialReport& r);

/// Shortest round-trip decimal form, as used in the JSON output.
std::string format_double(double v);

} // namespace tdl

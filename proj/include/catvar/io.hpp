#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "catvar/ovals.hpp"
#include "catvar/weierstrass.hpp"

namespace catvar::io {

using Json = nlohmann::ordered_json;

inline constexpr int kDataVersion = 1;

// {"version": 1, "g": [[power, re, im], ...], "h": [...], "r_inner": x,
//  "r_outer": y}. Doubles are written in shortest round-trip form.
Json to_json(const WeierstrassData& data);
// Throws InputError on schema violations.
WeierstrassData weierstrass_from_json(const Json& doc);

// {"points": [[x, y, z], ...]} (2-D points allowed) or
// {"ellipse": [a, b], "n": N}.
ClosedCurve curve_from_json(const Json& doc);

// Parse a file; InputError when missing or malformed.
Json read_json_file(const std::filesystem::path& path);

// Nearest double to the 15-significant-digit decimal of x. NaN and inf
// pass through (they serialize as null).
double round15(double x);
std::string format15(double x);

// Recursively applies round15 to every floating-point number.
Json rounded(const Json& doc);

// Canonical text of a result document: rounded, 2-space indent, newline.
std::string dump_result(const Json& doc);

// CSV with a mandatory header row; values written with format15.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

// Writes through a sibling temp file and renames over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace catvar::io

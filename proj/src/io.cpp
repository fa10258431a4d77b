#include "catvar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "catvar/errors.hpp"

namespace catvar::io {

namespace {

Json coeff_table(const LaurentPolynomial& p) {
  Json arr = Json::array();
  for (const auto& [power, c] : p.terms()) arr.push_back(Json::array({power, c.real(), c.imag()}));
  return arr;
}

LaurentPolynomial parse_table(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw InputError(std::string("Weierstrass data: missing array '") + key + "'");
  }
  std::map<int, Complex> terms;
  for (const auto& row : doc[key]) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() ||
        !row[1].is_number() || !row[2].is_number()) {
      throw InputError(std::string("Weierstrass data: entries of '") + key +
                       "' must be [power, re, im]");
    }
    const int power = row[0].get<int>();
    if (terms.count(power)) {
      throw InputError(std::string("Weierstrass data: repeated power in '") + key + "'");
    }
    terms[power] = Complex(row[1].get<double>(), row[2].get<double>());
  }
  return LaurentPolynomial(std::move(terms));
}

double number(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number()) {
    throw InputError(std::string("missing numeric field '") + key + "'");
  }
  return doc[key].get<double>();
}

}  // namespace

Json to_json(const WeierstrassData& data) {
  Json doc;
  doc["version"] = kDataVersion;
  doc["g"] = coeff_table(data.g);
  doc["h"] = coeff_table(data.h);
  doc["r_inner"] = data.r_inner;
  doc["r_outer"] = data.r_outer;
  return doc;
}

WeierstrassData weierstrass_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("Weierstrass data must be a JSON object");
  if (doc.contains("version") && doc["version"] != kDataVersion) {
    throw InputError("unsupported Weierstrass data version");
  }
  WeierstrassData d{parse_table(doc, "g"), parse_table(doc, "h"), number(doc, "r_inner"),
                    number(doc, "r_outer")};
  check_radii(d);
  return d;
}

ClosedCurve curve_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("curve must be a JSON object");
  if (doc.contains("ellipse")) {
    const Json& e = doc["ellipse"];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError("curve: 'ellipse' must be [a, b]");
    }
    int n = 256;
    if (doc.contains("n")) {
      if (!doc["n"].is_number_integer()) throw InputError("curve: 'n' must be an integer");
      n = doc["n"].get<int>();
    }
    return ellipse_curve(e[0].get<double>(), e[1].get<double>(), n);
  }
  if (!doc.contains("points") || !doc["points"].is_array()) {
    throw InputError("curve: expected 'points' or 'ellipse'");
  }
  std::vector<Eigen::Vector3d> pts;
  for (const auto& p : doc["points"]) {
    if (!p.is_array() || p.size() < 2 || p.size() > 3) {
      throw InputError("curve: each point must be [x, y] or [x, y, z]");
    }
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!p[j].is_number()) throw InputError("curve: non-numeric coordinate");
      v[j] = p[j].get<double>();
    }
    pts.push_back(v);
  }
  return ClosedCurve(std::move(pts));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

double round15(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format15(x));
}

std::string format15(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

Json rounded(const Json& doc) {
  if (doc.is_number_float()) return round15(doc.get<double>());
  if (doc.is_array()) {
    Json out = Json::array();
    for (const auto& v : doc) out.push_back(rounded(v));
    return out;
  }
  if (doc.is_object()) {
    Json out = Json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return doc;
}

std::string dump_result(const Json& doc) { return rounded(doc).dump(2) + "\n"; }

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format15(row[i]);
    os << '\n';
  }
  return os.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigurationError("cannot write output file: " + path.string());
    out << content;
    out.flush();
    if (!out) throw ConfigurationError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigurationError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

}  // namespace catvar::io

#include "osclab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "osclab/error.hpp"

namespace osclab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error(ErrorKind::ParseError, "bad number for " + key + ": '" + v + "'");
  return d;
}

long to_long(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<double>(static_cast<long>(d)))
    throw Error(ErrorKind::ParseError, "expected an integer for " + key + ": '" + v + "'");
  return static_cast<long>(d);
}

}  // namespace

KeyValues parse_config(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

KeyValues read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

SweepConfig apply_config(const KeyValues& kv, SweepConfig c) {
  for (const auto& [k, v] : kv) {
    if (k == "phase") c.f_pi = parse_poly(v);
    else if (k == "g") c.g = parse_poly(v);
    else if (k == "epsilon") c.epsilon = to_double(k, v);
    else if (k == "n_pert") c.n_perturbations = static_cast<int>(to_long(k, v));
    else if (k == "lambda_min") c.grid.min = to_double(k, v);
    else if (k == "lambda_max") c.grid.max = to_double(k, v);
    else if (k == "lambda_points") c.grid.points = static_cast<int>(to_long(k, v));
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(to_long(k, v));
    else if (k == "amp_radius") c.amp_radius = to_double(k, v);
    else if (k == "box") c.box = to_double(k, v);
    else if (k == "tol") c.tol = to_double(k, v);
    else if (k == "theta") c.quad.theta = to_double(k, v);
    else if (k == "use_dyadic") {
      if (v != "true" && v != "false") throw Error(ErrorKind::ParseError, "use_dyadic must be true or false");
      c.use_dyadic = v == "true";
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown config key '" + k + "'");
    }
  }
  return c;
}

}  // namespace osclab

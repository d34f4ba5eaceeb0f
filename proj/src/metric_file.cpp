#include "chernlab/metric_file.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>

#include "chernlab/rng.hpp"

namespace chernlab {

namespace {

bool reserved_name(const std::string& name) {
  if (name == "i" || name == "exp" || name == "log" || name == "conj")
    return true;
  std::size_t pos = 0;
  if (name.rfind("zb", 0) == 0)
    pos = 2;
  else if (name.rfind("z", 0) == 0)
    pos = 1;
  else
    return false;
  if (pos >= name.size()) return false;
  for (std::size_t k = pos; k < name.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
  return true;
}

bool valid_parameter_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
    return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !reserved_name(name);
}

[[noreturn]] void fail(const std::string& message) {
  throw MetricFileError(message);
}

double require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) fail(what + " must be finite");
  return x;
}

}  // namespace

MetricFile parse_metric_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("metric file: top level must be an object");

  MetricFile out;
  out.spec.name = j.value("name", std::string("metric"));
  if (out.spec.name.empty()) fail("metric file: name must be nonempty");

  if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
    fail("metric file: missing integer field 'dimension'");
  const int n = j.at("dimension").get<int>();
  if (n < 1 || n > 8) fail("metric file: dimension must be in 1..8");
  out.spec.n = n;

  if (j.contains("parameters")) {
    const auto& params = j.at("parameters");
    if (!params.is_object()) fail("metric file: 'parameters' must be an object");
    for (const auto& [key, value] : params.items()) {
      if (!valid_parameter_name(key))
        fail("metric file: invalid parameter name '" + key + "'");
      if (!value.is_number())
        fail("metric file: parameter '" + key + "' must be a number");
      out.spec.parameter_defaults[key] =
          require_finite(value.get<double>(), "parameter '" + key + "'");
    }
  }

  if (!j.contains("components") || !j.at("components").is_array())
    fail("metric file: missing array field 'components'");
  const auto& rows = j.at("components");
  if (static_cast<int>(rows.size()) != n)
    fail("metric file: 'components' must have exactly " + std::to_string(n) +
         " rows");
  out.spec.components.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail("metric file: components row " + std::to_string(i + 1) +
           " must be an array of " + std::to_string(n) + " strings");
    for (int k = 0; k < n; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_string())
        fail("metric file: component (" + std::to_string(i + 1) + ", " +
             std::to_string(k + 1) + ") must be a string");
      const std::string text = cell.get<std::string>();
      try {
        out.spec.component(i, k) = parse_expression(text, n);
      } catch (const ParseError& e) {
        fail("metric file: component (" + std::to_string(i + 1) + ", " +
             std::to_string(k + 1) + "): " + e.what() + " (offset " +
             std::to_string(e.offset()) + ")");
      }
      if (out.spec.component(i, k).empty())
        fail("metric file: component (" + std::to_string(i + 1) + ", " +
             std::to_string(k + 1) + ") is empty");
    }
  }

  if (j.contains("valid_region")) {
    const auto& region = j.at("valid_region");
    if (!region.is_object()) fail("metric file: 'valid_region' must be an object");
    if (region.contains("box")) {
      out.region.box = require_finite(region.at("box").get<double>(), "box");
      if (out.region.box <= 0.0) fail("metric file: box must be positive");
    }
    if (region.contains("min_norm_sq")) {
      out.region.min_norm_sq =
          require_finite(region.at("min_norm_sq").get<double>(), "min_norm_sq");
      if (out.region.min_norm_sq < 0.0)
        fail("metric file: min_norm_sq must be nonnegative");
    }
    if (region.contains("max_norm_sq")) {
      double cap =
          require_finite(region.at("max_norm_sq").get<double>(), "max_norm_sq");
      if (cap <= out.region.min_norm_sq)
        fail("metric file: max_norm_sq must exceed min_norm_sq");
      out.region.max_norm_sq = cap;
    }
  }
  return out;
}

MetricFile load_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open metric file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("metric file '" + path + "': " + e.what());
  }
  return parse_metric_json(j);
}

nlohmann::json metric_to_json(const MetricSpec& spec, const RegionSpec& region) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < spec.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < spec.n; ++k) row.push_back(to_string(spec.component(i, k)));
    rows.push_back(std::move(row));
  }
  nlohmann::json j{{"name", spec.name},
                   {"dimension", spec.n},
                   {"components", std::move(rows)}};
  if (!spec.parameter_defaults.empty()) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : spec.parameter_defaults) params[key] = value;
    j["parameters"] = std::move(params);
  }
  nlohmann::json reg{{"box", region.box}};
  if (region.min_norm_sq > 0.0) reg["min_norm_sq"] = region.min_norm_sq;
  if (region.max_norm_sq) reg["max_norm_sq"] = *region.max_norm_sq;
  j["valid_region"] = std::move(reg);
  return j;
}

void save_metric_file(const std::string& path, const MetricSpec& spec,
                      const RegionSpec& region) {
  std::ofstream out(path);
  if (!out) fail("cannot write metric file '" + path + "'");
  out << metric_to_json(spec, region).dump(2) << '\n';
  if (!out) fail("failed writing metric file '" + path + "'");
}

RegionSpec zoo_region_hint(const ZooEntry& entry) {
  RegionSpec region;
  switch (entry.kind) {
    case ZooKind::Flat:
    case ZooKind::FubiniStudy:
      region.box = 1.0;
      break;
    case ZooKind::ComplexHyperbolic:
      region.box = 0.9;
      region.max_norm_sq = 0.8;
      break;
    case ZooKind::Hopf:
      region.box = 2.0;
      region.min_norm_sq = 0.25;
      region.max_norm_sq = 4.0;
      break;
    case ZooKind::ProductCase2:
      // keeps |z1| inside the unit disc of its factor
      region.box = 0.65;
      region.max_norm_sq = 0.8;
      break;
  }
  return region;
}

MetricContext make_context(const MetricFile& file) {
  auto eval = std::make_shared<MetricEvaluator>(file.spec);
  const RegionSpec region = file.region;
  const int n = file.spec.n;
  PointSampler sampler = [eval, region, n](std::uint64_t key) {
    SplitMix64 rng(key);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      ChartPoint p;
      p.z.resize(static_cast<std::size_t>(n));
      double norm_sq = 0.0;
      for (auto& z : p.z) {
        z = {rng.uniform(-region.box, region.box),
             rng.uniform(-region.box, region.box)};
        norm_sq += std::norm(z);
      }
      if (norm_sq <= region.min_norm_sq) continue;
      if (region.max_norm_sq && norm_sq >= *region.max_norm_sq) continue;
      CMatrix g = eval->metric_values(p);
      PdCheckResult pd = check_hermitian_pd(g);
      if (pd.hermitian_defect > 1e-9 || !pd.positive_definite) continue;
      return p;
    }
    throw MetricFileError(
        "metric '" + eval->spec().name +
        "': no positive definite point found in 1000 sampling attempts");
  };
  return MetricContext{MetricEvaluator(file.spec), std::move(sampler),
                       file.spec.name, std::nullopt};
}

std::string metric_hash(const MetricSpec& spec) {
  std::ostringstream payload;
  payload.precision(17);
  payload << spec.name << '\x1f' << spec.n << '\x1f';
  for (const Expr& e : spec.components) payload << to_string(e) << '\x1f';
  for (const auto& [key, value] : spec.parameter_defaults)
    payload << key << '=' << value << '\x1f';

  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : payload.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  // strip spaces
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw MetricFileError("empty complex literal");

  auto parse_part = [](std::string_view part, bool imag_unit) -> double {
    // `part` excludes the trailing 'i' when imag_unit is true
    if (imag_unit) {
      if (part.empty() || part == "+") return 1.0;
      if (part == "-") return -1.0;
    }
    double value = 0.0;
    const char* first = part.data();
    const char* last = part.data() + part.size();
    if (!part.empty() && part.front() == '+') ++first;  // from_chars rejects '+'
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
      throw MetricFileError("bad numeric part '" + std::string(part) + "'");
    return value;
  };

  // locate a '+'/'-' that separates two terms (not leading, not an exponent sign)
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k] != '+' && s[k] != '-') continue;
    char prev = s[k - 1];
    if (prev == 'e' || prev == 'E' || prev == '+' || prev == '-') continue;
    split = k;  // keep the last candidate: "1e-2-3i" splits before "3i"
  }

  if (split == std::string::npos) {
    if (s.back() == 'i' || s.back() == 'I')
      return {0.0, parse_part(std::string_view(s).substr(0, s.size() - 1), true)};
    return {parse_part(s, false), 0.0};
  }

  std::string_view head = std::string_view(s).substr(0, split);
  std::string_view tail = std::string_view(s).substr(split);
  if (tail.back() != 'i' && tail.back() != 'I') {
    // allow "1i+2" as well, with the imaginary term first
    if (head.back() == 'i' || head.back() == 'I')
      return {parse_part(tail, false),
              parse_part(head.substr(0, head.size() - 1), true)};
    throw MetricFileError("complex literal '" + text +
                          "' must end its imaginary part with 'i'");
  }
  return {parse_part(head, false),
          parse_part(tail.substr(0, tail.size() - 1), true)};
}

std::vector<Complex> parse_point(const std::string& text) {
  std::vector<Complex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string piece = comma == std::string::npos
                            ? text.substr(start)
                            : text.substr(start, comma - start);
    out.push_back(parse_complex(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw MetricFileError("empty point");
  return out;
}

}  // namespace chernlab

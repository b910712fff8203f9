#include "revwalk/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace revwalk::cli {

namespace {

using nlohmann::json;

constexpr int kMaxNesting = 16;

void only_fields(const json& j, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  ok.insert("type");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw SpecError("unknown field '" + it.key() + "'");
  }
}

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw SpecError(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) throw SpecError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

Index count(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw SpecError(std::string("field '") + name + "' must be a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

Vector number_array(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) throw SpecError(std::string(what) + " must be a nonempty array");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw SpecError(std::string(what) + " entries must be numbers");
    out(static_cast<Index>(i)) = v[i].get<double>();
  }
  return out;
}

long parse_step(const std::string& key) {
  long v = 0;
  const char* first = key.data();
  const char* last = key.data() + key.size();
  if (!key.empty() && key[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw SpecError("increment key '" + key + "' is not a signed integer");
  }
  return v;
}

Kernel build(const json& j, int depth) {
  if (depth > kMaxNesting) throw SpecError("lazy specs nested too deeply");
  if (!j.is_object()) throw SpecError("kernel spec must be a JSON object");
  const json& t = field(j, "type");
  if (!t.is_string()) throw SpecError("field 'type' must be a string");
  const std::string type = t.get<std::string>();

  if (type == "dense") {
    only_fields(j, {"matrix"});
    const json& rows = field(j, "matrix");
    if (!rows.is_array() || rows.empty()) throw SpecError("matrix must be a nonempty array of rows");
    const Index n = static_cast<Index>(rows.size());
    Matrix m(n, n);
    for (Index x = 0; x < n; ++x) {
      const Vector row = number_array(rows[static_cast<std::size_t>(x)], "matrix row");
      if (row.size() != n) throw SpecError("matrix must be square");
      m.row(x) = row.transpose();
    }
    return kernel_from_rows(m);
  }
  if (type == "circle") {
    only_fields(j, {"n", "p_forward", "p_backward"});
    return circle_walk(count(j, "n"), number(j, "p_forward"), number(j, "p_backward"));
  }
  if (type == "bottleneck") {
    only_fields(j, {"n"});
    return bottleneck_graph(count(j, "n"));
  }
  if (type == "cyclic") {
    only_fields(j, {"n", "increments"});
    const json& inc = field(j, "increments");
    if (!inc.is_object() || inc.empty()) throw SpecError("increments must be a nonempty object");
    std::map<long, double> law;
    for (auto it = inc.begin(); it != inc.end(); ++it) {
      if (!it.value().is_number()) throw SpecError("increment probabilities must be numbers");
      law[parse_step(it.key())] += it.value().get<double>();
    }
    return cyclic_walk(count(j, "n"), law);
  }
  if (type == "mixed") {
    only_fields(j, {"pi"});
    return perfectly_mixed(Distribution::from_probs(number_array(field(j, "pi"), "pi")));
  }
  if (type == "lazy") {
    only_fields(j, {"inner"});
    return lazy(build(field(j, "inner"), depth + 1));
  }
  throw SpecError("unknown kernel type '" + type + "'");
}

}  // namespace

Kernel parse_kernel_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return build(j, 0);
  } catch (const Error& e) {
    throw SpecError(e.what());
  }
}

Kernel load_kernel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read kernel spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kernel_spec(ss.str());
}

StateSet parse_subset(const std::string& text) {
  auto to_index = [&text](const std::string& s) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
      throw SpecError("bad subset '" + text + "'");
    }
    return static_cast<Index>(v);
  };
  std::set<Index> states;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      states.insert(to_index(part));
      continue;
    }
    const Index a = to_index(part.substr(0, dash));
    const Index b = to_index(part.substr(dash + 1));
    if (b < a) throw SpecError("bad subset range '" + part + "'");
    for (Index x = a; x <= b; ++x) states.insert(x);
  }
  if (states.empty()) throw SpecError("empty subset '" + text + "'");
  return StateSet(states.begin(), states.end());
}

}  // namespace revwalk::cli

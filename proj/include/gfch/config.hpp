#pragma once

#include <boost/program_options/errors.hpp>
#include <boost/program_options/options_description.hpp>
#include <boost/program_options/parsers.hpp>
#include <boost/program_options/value_semantic.hpp>
#include <boost/program_options/variables_map.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gfch {

/// Bad or missing configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Solve, Validate, Converge };

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Validate: return "validate";
    case Command::Converge: return "converge";
  }
  return "?";
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

enum : unsigned { kSolve = 1, kValidate = 2, kConverge = 4, kAll = 7 };

struct KeySpec {
  const char* key;
  unsigned commands;
  // Defaults per command: solve, validate, converge. nullptr means required.
  const char* defaults[3];
};

// The flat dotted-key namespace. Anything else in a config file is rejected.
inline constexpr KeySpec kKeys[] = {
    {"model", kSolve, {"GfCH", "", ""}},
    {"p", kAll, {"1", "1", "1"}},
    {"nu", kAll, {"1", "1", "1"}},
    {"eps", kSolve, {"1", "", ""}},
    {"delta", kSolve, {"1", "", ""}},
    {"seed", kAll, {"0", "0", "0"}},
    {"grid.n", kAll, {"256", "160", "512"}},
    {"grid.length", kAll, {"80", "80", "80"}},
    {"profile.kind", kAll, {"gaussian", "gaussian", "gaussian"}},
    {"profile.center", kAll, {"40", "40", "40"}},
    {"profile.width", kAll, {"2", "4", "2"}},
    {"profile.amplitude", kAll, {"0.5", "1", "1"}},
    {"output.dir", kAll, {"out", "out", "out"}},
    {"stepper.scheme", kSolve, {"auto", "", ""}},
    {"stepper.dt", kSolve, {"auto", "", ""}},
    {"stepper.t_end", kSolve, {"10", "", ""}},
    {"stepper.cfl_guard", kSolve, {"0.5", "", ""}},
    {"stepper.snapshot_every", kSolve, {"0", "", ""}},
    {"initial.velocity", kSolve, {"rightgoing", "", ""}},
    {"flow.kappa1", kSolve, {"1.2", "", ""}},
    {"flow.kappa2", kSolve, {"1.8", "", ""}},
    {"validate.powers", kValidate, {"", "1,2,3", ""}},
    {"validate.orders", kValidate, {"", "1,1.5,2", ""}},
    {"validate.tolerance", kValidate, {"", "1e-10", ""}},
    {"validate.fields", kValidate, {"", "50", ""}},
    {"validate.chain_tolerance", kValidate, {"", "1e-12", ""}},
    {"validate.horizon", kValidate, {"", "1", ""}},
    {"validate.drift_tolerance", kValidate, {"", "1e-8", ""}},
    {"converge.reduced", kConverge, {"", "", "GfCH"}},
    {"converge.epsilons", kConverge, {"", "", nullptr}},
    {"converge.deltas", kConverge, {"", "", nullptr}},
    {"converge.eps_fixed", kConverge, {"", "", "1e-4"}},
    {"converge.delta_fixed", kConverge, {"", "", "0.05"}},
    {"converge.horizon", kConverge, {"", "", "1"}},
    {"converge.courant", kConverge, {"", "", "0.05"}},
    {"converge.kdv_reference", kConverge, {"", "", "true"}},
};

inline unsigned command_bit(Command c) {
  return c == Command::Solve ? kSolve : c == Command::Validate ? kValidate : kConverge;
}

inline int command_index(Command c) { return c == Command::Solve ? 0 : c == Command::Validate ? 1 : 2; }

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Resolved configuration of one command: explicit values from the file plus
/// defaults for everything else.
class RunConfig {
 public:
  static RunConfig parse(Command cmd, std::istream& in, const std::string& source = "<config>") {
    namespace po = boost::program_options;
    po::options_description desc;
    for (const auto& k : detail::kKeys) {
      if (k.commands & detail::command_bit(cmd)) desc.add_options()(k.key, po::value<std::string>());
    }
    po::variables_map vm;
    try {
      po::store(po::parse_config_file(in, desc, false), vm);
    } catch (const po::unknown_option& e) {
      throw ConfigError(source + ": unknown key '" + e.get_option_name() + "' for command " +
                        std::string(command_name(cmd)));
    } catch (const po::multiple_occurrences& e) {
      throw ConfigError(source + ": key '" + e.get_option_name() + "' given more than once");
    } catch (const po::error& e) {
      throw ConfigError(source + ": " + e.what());
    }
    RunConfig rc;
    rc.command_ = cmd;
    for (const auto& k : detail::kKeys) {
      if (!(k.commands & detail::command_bit(cmd))) continue;
      if (vm.count(k.key)) {
        rc.values_[k.key] = detail::trim(vm[k.key].as<std::string>());
        rc.explicit_.push_back(k.key);
      } else if (const char* d = k.defaults[detail::command_index(cmd)]) {
        rc.values_[k.key] = d;
      }
    }
    return rc;
  }

  static RunConfig from_string(Command cmd, const std::string& text) {
    std::istringstream in(text);
    return parse(cmd, in);
  }

  static RunConfig from_file(Command cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(cmd, in, path);
  }

  Command command() const { return command_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, std::string value) {
    for (const auto& k : detail::kKeys) {
      if (key == k.key && (k.commands & detail::command_bit(command_))) {
        values_[key] = std::move(value);
        return;
      }
    }
    throw ConfigError("unknown key '" + key + "' for command " + std::string(command_name(command_)));
  }

  const std::string& str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  std::int64_t integer(const std::string& key) const {
    const std::string& s = str(key);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
    }
    return v;
  }

  std::uint64_t unsigned64(const std::string& key) const {
    const std::string& s = str(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key) const {
    const std::string& s = str(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + s + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, detail::trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
  }

  /// One `key = value` line per resolved key, sorted; the hashed identity of
  /// a run. Where the output goes is not part of it.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
      if (k != "output.dir") out += k + " = " + v + "\n";
    }
    return out;
  }

  std::string hash() const { return hex64(fnv1a64(canonical())); }

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::vector<std::string>& explicit_keys() const { return explicit_; }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    }
    return v;
  }

  Command command_ = Command::Solve;
  std::map<std::string, std::string> values_;
  std::vector<std::string> explicit_;
};

}  // namespace gfch

#include "polfid/config.hpp"

#include "polfid/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace polfid {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("config " + (path.empty() ? std::string("/") : path) + ": " + message);
}

// Object view that remembers its JSON path and rejects unknown keys.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail(path_, "expected an object");
  }

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  /// Rejects keys that were never looked up.
  void finish() const {
    for (const auto& [key, unused] : value_.items()) {
      if (!seen_.count(key)) fail(path_ + "/" + key, "unknown key");
    }
  }

  bool has(const std::string& key) { return value_.contains(key); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = value_.find(key);
    return it == value_.end() ? nullptr : &*it;
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(child(key), "expected a number");
    return v->get<double>();
  }

  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(child(key), "expected an integer");
    return v->get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) fail(child(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(child(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(child(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) fail(child(key) + "/" + std::to_string(i), "expected a number");
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs `check` and re-throws its ValidationError with the given path prefix.
template <class F>
void checked(const std::string& path, F&& check) {
  try {
    check();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

SweepSpec read_sweep(Node& node, const SweepSpec& defaults) {
  SweepSpec sweep = defaults;
  if (node.has("gbar_values")) {
    sweep.explicit_values = node.numbers("gbar_values", {});
    for (const char* key : {"gbar_min", "gbar_max", "points", "include_zero"}) {
      if (node.has(key)) fail(node.child(key), "cannot be combined with gbar_values");
    }
  } else {
    sweep.explicit_values.reset();
    sweep.gbar_min = node.number("gbar_min", defaults.gbar_min);
    sweep.gbar_max = node.number("gbar_max", defaults.gbar_max);
    sweep.points = node.integer("points", defaults.points);
    sweep.include_zero = node.boolean("include_zero", defaults.include_zero);
  }
  node.finish();
  checked(node.path(), [&] { (void)sweep.values(); });
  return sweep;
}

json sweep_to_json(const SweepSpec& sweep) {
  if (sweep.explicit_values) return json{{"gbar_values", *sweep.explicit_values}};
  return json{{"gbar_min", sweep.gbar_min},
              {"gbar_max", sweep.gbar_max},
              {"points", sweep.points},
              {"include_zero", sweep.include_zero}};
}

ChannelSpec read_channel(const json& value, const std::string& path) {
  Node node(value, path);
  const std::string type = node.string("type", "");
  ChannelSpec channel;
  if (type == "erasure") {
    channel = Erasure{node.number("p", 1.0)};
  } else if (type == "dephasing") {
    channel = CompletelyDephasing{node.number("V", 1.0)};
  } else if (type == "depolarizing") {
    Depolarizing d;
    d.p = node.number("p", d.p);
    d.alpha = node.number("alpha", d.alpha);
    d.Lambda = node.number("Lambda", d.Lambda);
    channel = d;
  } else {
    fail(node.child("type"), "expected \"erasure\", \"dephasing\" or \"depolarizing\" (got \"" + type + "\")");
  }
  node.finish();
  checked(path, [&] { validate(channel); });
  return channel;
}

json channel_to_json(const ChannelSpec& channel) {
  return std::visit(overloaded{
                        [](const Erasure& e) { return json{{"type", "erasure"}, {"p", e.p}}; },
                        [](const CompletelyDephasing& c) { return json{{"type", "dephasing"}, {"V", c.V}}; },
                        [](const Depolarizing& d) {
                          return json{{"type", "depolarizing"}, {"p", d.p}, {"alpha", d.alpha}, {"Lambda", d.Lambda}};
                        },
                    },
                    channel);
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  if (explicit_values) {
    out = *explicit_values;
    if (out.empty()) throw ValidationError("gbar_values must not be empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!(out[i] >= 0.0) || !std::isfinite(out[i])) throw ValidationError("gbar values must be finite and >= 0");
      if (i > 0 && !(out[i] > out[i - 1])) throw ValidationError("gbar values must be strictly ascending");
    }
    return out;
  }
  if (!(gbar_min > 0.0) || !std::isfinite(gbar_min)) throw ValidationError("gbar_min must be > 0");
  if (!(gbar_max > gbar_min) || !std::isfinite(gbar_max)) throw ValidationError("gbar_max must exceed gbar_min");
  if (points < 2) throw ValidationError("points must be >= 2");
  if (include_zero) out.push_back(0.0);
  const double lo = std::log10(gbar_min);
  const double hi = std::log10(gbar_max);
  for (int i = 0; i < points; ++i) {
    // Endpoints are taken verbatim so round values stay exact.
    if (i == 0) {
      out.push_back(gbar_min);
    } else if (i == points - 1) {
      out.push_back(gbar_max);
    } else {
      out.push_back(std::pow(10.0, lo + (hi - lo) * i / (points - 1)));
    }
  }
  return out;
}

void RunConfig::validate() const {
  checked("/medium", [&] { medium.validate(); });
  checked("/wavepacket", [&] { wavepacket.validate(); });
  if (!(medium.c * wavepacket.k0_mag < medium.Omega)) {
    fail("/wavepacket/k0_mag", "c * k0_mag must be below Omega (validated dispersion branch)");
  }
  if (channels.empty()) fail("/channels", "at least one channel is required");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    checked("/channels/" + std::to_string(i), [&] { polfid::validate(channels[i]); });
  }
  checked("/sweep", [&] { (void)sweep.values(); });
  checked("/quadrature", [&] { quadrature.validate(); });
  if (!(epsilon > 0.0 && epsilon < 2.0)) fail("/epsilon", "cutoff must lie in (0, 2)");
  checked("/disorder", [&] { disorder.validate(); });
  if (monte_carlo.samples < kMinMonteCarloSamples) fail("/monte_carlo/samples", "must be >= 10000");
  if (capacity.d < 1) fail("/capacity/d", "must be >= 1");
  checked("/capacity", [&] { capacity.solver.validate(); });
  checked("/capacity/sweep", [&] { (void)capacity.sweep.values(); });
  checked("/capacity/Lambda", [&] { ModeGrid::band_limited(capacity.d, capacity.Lambda).validate(medium); });
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (const auto* dp = std::get_if<Depolarizing>(&channels[i])) {
      checked("/channels/" + std::to_string(i) + "/Lambda",
              [&] { ModeGrid::band_limited(capacity.d, dp->Lambda).validate(medium); });
    }
  }
  for (std::size_t i = 0; i < integrals.lambda_over_sigma.size(); ++i) {
    const double r = integrals.lambda_over_sigma[i];
    if (!(r >= 0.0) || !std::isfinite(r)) fail("/integrals/lambda_over_sigma/" + std::to_string(i), "must be >= 0");
  }
  if (threads < 0) fail("/threads", "must be >= 0");
}

RunConfig default_config() {
  RunConfig config;
  config.channels = {Erasure{1.0}, CompletelyDephasing{1.0}, Depolarizing{0.5, 4.0, 8.0}};
  return config;
}

RunConfig config_from_json(const json& doc) {
  RunConfig config = default_config();
  {
    Node root(doc, "");
    if (const json* v = root.find("medium")) {
      Node n(*v, "/medium");
      config.medium.c = n.number("c", config.medium.c);
      config.medium.Omega = n.number("Omega", config.medium.Omega);
      config.medium.n0 = n.number("n0", config.medium.n0);
      n.finish();
    }
    if (const json* v = root.find("wavepacket")) {
      Node n(*v, "/wavepacket");
      if (n.has("k0_hat")) {
        const std::vector<double> hat = n.numbers("k0_hat", {});
        if (hat.size() != 3) fail("/wavepacket/k0_hat", "expected three components");
        config.wavepacket.k0_hat = Vec3(hat[0], hat[1], hat[2]);
      }
      config.wavepacket.k0_mag = n.number("k0_mag", config.wavepacket.k0_mag);
      config.wavepacket.sigma = n.number("sigma", config.wavepacket.sigma);
      n.finish();
    }
    if (const json* v = root.find("channels")) {
      if (!v->is_array()) fail("/channels", "expected an array");
      config.channels.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        config.channels.push_back(read_channel((*v)[i], "/channels/" + std::to_string(i)));
      }
    }
    if (const json* v = root.find("sweep")) {
      Node n(*v, "/sweep");
      config.sweep = read_sweep(n, config.sweep);
    }
    if (const json* v = root.find("quadrature")) {
      Node n(*v, "/quadrature");
      config.quadrature.order = n.integer("order", config.quadrature.order);
      config.quadrature.max_order = n.integer("max_order", config.quadrature.max_order);
      config.quadrature.rel_tol = n.number("rel_tol", config.quadrature.rel_tol);
      n.finish();
    }
    config.epsilon = root.number("epsilon", config.epsilon);
    if (const json* v = root.find("disorder")) {
      Node n(*v, "/disorder");
      const std::string model = n.string("model", "white-noise");
      if (model != "white-noise") fail("/disorder/model", "only \"white-noise\" is supported");
      config.disorder.C0 = n.number("C0", config.disorder.C0);
      n.finish();
    }
    if (const json* v = root.find("monte_carlo")) {
      Node n(*v, "/monte_carlo");
      config.monte_carlo.samples = n.unsigned_integer("samples", config.monte_carlo.samples);
      config.monte_carlo.seed = n.unsigned_integer("seed", config.monte_carlo.seed);
      n.finish();
    }
    if (const json* v = root.find("capacity")) {
      Node n(*v, "/capacity");
      config.capacity.d = n.integer("d", config.capacity.d);
      config.capacity.Lambda = n.number("Lambda", config.capacity.Lambda);
      config.capacity.solver.tol = n.number("tol", config.capacity.solver.tol);
      config.capacity.solver.max_iterations = n.integer("max_iterations", config.capacity.solver.max_iterations);
      config.capacity.solver.include_vacuum = n.boolean("include_vacuum", config.capacity.solver.include_vacuum);
      if (const json* s = n.find("sweep")) {
        Node sn(*s, "/capacity/sweep");
        config.capacity.sweep = read_sweep(sn, config.capacity.sweep);
      }
      n.finish();
    }
    if (const json* v = root.find("integrals")) {
      Node n(*v, "/integrals");
      config.integrals.lambda_over_sigma = n.numbers("lambda_over_sigma", config.integrals.lambda_over_sigma);
      n.finish();
    }
    config.threads = root.integer("threads", config.threads);
    config.output = root.string("output", config.output);
    root.finish();
  }
  config.validate();
  return config;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

json to_json(const RunConfig& config) {
  json channels = json::array();
  for (const auto& c : config.channels) channels.push_back(channel_to_json(c));
  const Vec3& hat = config.wavepacket.k0_hat;
  json capacity_sweep = sweep_to_json(config.capacity.sweep);
  return json{
      {"medium", {{"c", config.medium.c}, {"Omega", config.medium.Omega}, {"n0", config.medium.n0}}},
      {"wavepacket",
       {{"k0_hat", {hat.x(), hat.y(), hat.z()}},
        {"k0_mag", config.wavepacket.k0_mag},
        {"sigma", config.wavepacket.sigma}}},
      {"channels", channels},
      {"sweep", sweep_to_json(config.sweep)},
      {"quadrature",
       {{"order", config.quadrature.order},
        {"max_order", config.quadrature.max_order},
        {"rel_tol", config.quadrature.rel_tol}}},
      {"epsilon", config.epsilon},
      {"disorder", {{"model", "white-noise"}, {"C0", config.disorder.C0}}},
      {"monte_carlo", {{"samples", config.monte_carlo.samples}, {"seed", config.monte_carlo.seed}}},
      {"capacity",
       {{"d", config.capacity.d},
        {"Lambda", config.capacity.Lambda},
        {"tol", config.capacity.solver.tol},
        {"max_iterations", config.capacity.solver.max_iterations},
        {"include_vacuum", config.capacity.solver.include_vacuum},
        {"sweep", capacity_sweep}}},
      {"integrals", {{"lambda_over_sigma", config.integrals.lambda_over_sigma}}},
      {"threads", config.threads},
      {"output", config.output},
  };
}

std::string dump_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace polfid

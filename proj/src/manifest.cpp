#include "anytime/manifest.hpp"

#include <fstream>
#include <sstream>

#include "anytime/rng.hpp"
#include "json.hpp"

namespace anytime {

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  return rng::fnv1a(std::string_view(bytes.data(), bytes.size()));
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.emplace_back(path.filename().string(), file_checksum(path));
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = std::string(kArtifactVersion);
  j["command"] = command;
  j["seed"] = seed;
  j["threads"] = threads;
  nlohmann::json cfg = nlohmann::json::parse(config, nullptr, false);
  if (cfg.is_discarded())
    j["config"] = config;  // not JSON (flag echo); keep it as a string
  else
    j["config"] = cfg;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [name, sum] : outputs) {
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(sum));
    outs[name] = hex;
  }
  j["outputs"] = outs;
  return j.dump(2);
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json() << '\n';
}

namespace {

using nlohmann::json;

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing");
  return *it;
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw SchemaError(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

double opt_num(const json& j, const std::string& path, const char* key, double fallback) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? fallback : num(*it, path + "/" + key);
}

std::uint64_t opt_uint(const json& j, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? fallback : uint(*it, path + "/" + key);
}

json parse_root(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) throw SchemaError("/", "not valid JSON");
  if (!root.is_object()) throw SchemaError("/", "expected an object");
  return root;
}

SimConfig sim_from_json(const json& root) {
  SimConfig cfg;

  const json& plant = need(root, "", "plant");
  const json& a = need(plant, "/plant", "a");
  if (!a.is_array() || a.empty()) throw SchemaError("/plant/a", "expected a nonempty array");
  for (std::size_t i = 0; i < a.size(); ++i)
    cfg.plant.a.push_back(num(a[i], "/plant/a[" + std::to_string(i) + "]"));
  cfg.plant.w_width = opt_num(plant, "/plant", "w_width", 0.0);
  cfg.plant.v_width = opt_num(plant, "/plant", "v_width", 0.0);

  const json& code = need(root, "", "code");
  cfg.code.n = static_cast<unsigned>(uint(need(code, "/code", "n"), "/code/n"));
  cfg.code.k = static_cast<unsigned>(uint(need(code, "/code", "k"), "/code/k"));
  cfg.code.p = opt_num(code, "/code", "p", 0.5);
  cfg.code.seed = opt_uint(code, "/code", "seed", 0);

  if (auto it = root.find("channel"); it != root.end())
    cfg.eps = opt_num(*it, "/channel", "eps", 0.0);

  const json& q = need(root, "", "quantizer");
  cfg.quantizer.bits =
      static_cast<unsigned>(uint(need(q, "/quantizer", "bits"), "/quantizer/bits"));
  cfg.quantizer.delta = num(need(q, "/quantizer", "delta"), "/quantizer/delta");

  const json& mode = need(root, "", "mode");
  if (!mode.is_string()) throw SchemaError("/mode", "expected a string");
  const std::string ms = mode.get<std::string>();
  if (ms == "no_feedback")
    cfg.mode = LoopMode::NoFeedback;
  else if (ms == "observer_knows_u")
    cfg.mode = LoopMode::ObserverKnowsU;
  else
    throw SchemaError("/mode", "expected \"no_feedback\" or \"observer_knows_u\"");

  cfg.horizon = uint(need(root, "", "horizon"), "/horizon");

  if (auto it = root.find("controller"); it != root.end()) {
    if (it->is_string()) {
      const std::string cs = it->get<std::string>();
      if (cs == "deadbeat")
        cfg.law = ControlLaw::Deadbeat;
      else if (cs == "neg_center")
        cfg.law = ControlLaw::NegCenter;
      else
        throw SchemaError("/controller", "expected \"deadbeat\", \"neg_center\" or a gain");
    } else {
      const json& g = need(*it, "/controller", "gain");
      const auto m = cfg.plant.a.size();
      if (!g.is_array() || g.size() != m)
        throw SchemaError("/controller/gain", "expected an m x m array");
      cfg.law = ControlLaw::Gain;
      cfg.gain.resize(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        const std::string rp = "/controller/gain[" + std::to_string(i) + "]";
        if (!g[i].is_array() || g[i].size() != m)
          throw SchemaError(rp, "expected a row of m numbers");
        for (std::size_t jx = 0; jx < m; ++jx)
          cfg.gain(i, jx) = num(g[i][jx], rp + "[" + std::to_string(jx) + "]");
      }
    }
  }

  if (auto it = root.find("noise"); it != root.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "uniform")
        throw SchemaError("/noise", "expected \"uniform\" or {\"trunc_gauss\": cut}");
      cfg.noise = NoiseKind::UniformBox;
    } else {
      cfg.noise = NoiseKind::TruncGauss;
      cfg.gauss_cut = num(need(*it, "/noise", "trunc_gauss"), "/noise/trunc_gauss");
    }
  }

  cfg.init_width = opt_num(root, "", "init_width", 0.0);
  cfg.seed = opt_uint(root, "", "seed", 0);
  cfg.trials = opt_uint(root, "", "trials", 1);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/", e.what());
  }
  return cfg;
}

}  // namespace

SimConfig parse_sim_config(const std::string& text) {
  return sim_from_json(parse_root(text));
}

SweepSpec parse_sweep_config(const std::string& text) {
  const json root = parse_root(text);
  SweepSpec spec;
  spec.sim = sim_from_json(root);
  spec.codes = uint(need(root, "", "codes"), "/codes");
  if (spec.codes == 0) throw SchemaError("/codes", "expected at least one code");
  const json& metric = need(root, "", "metric");
  if (!metric.is_string()) throw SchemaError("/metric", "expected a string");
  const std::string mk = metric.get<std::string>();
  if (mk == "sup_mean_x")
    spec.metric = MetricKind::SupMeanX;
  else if (mk == "mean_lqr")
    spec.metric = MetricKind::MeanLqr;
  else
    throw SchemaError("/metric", "expected \"sup_mean_x\" or \"mean_lqr\"");
  return spec;
}

}  // namespace anytime

#include "qent/witness_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "qent/states.hpp"

namespace qent {

namespace {

const std::set<std::string> kKeys{"state",    "p",        "r",        "alpha",    "beta",  "t",
                                  "cutoff",   "variant",  "sigma_a1", "sigma_a2", "sigma_b1",
                                  "sigma_b2", "op_a1",    "op_a2",    "op_b1",    "op_b2", "phase"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::invalid_argument, "config key '" + key + "': '" + text + "' is not a number");
}

class Reader {
 public:
  explicit Reader(const WitnessConfig& c) : c_(c) {}

  bool has(const std::string& key) const { return c_.values.count(key) != 0; }

  const std::string& str(const std::string& key) const {
    const auto it = c_.values.find(key);
    if (it == c_.values.end()) fail(ErrorCode::invalid_argument, "config is missing key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const { return to_real(key, str(key)); }

  double real_or(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = str(key);
    if (v == "0") return false;
    if (v == "1") return true;
    fail(ErrorCode::invalid_argument, "config key '" + key + "' must be 0 or 1");
  }

 private:
  const WitnessConfig& c_;
};

}  // namespace

WitnessConfig parse_witness_config(const std::string& text) {
  WitnessConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::invalid_argument, "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) fail(ErrorCode::invalid_argument, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty()) fail(ErrorCode::invalid_argument, "config key '" + key + "' has no value");
    if (!config.values.emplace(key, value).second) {
      fail(ErrorCode::invalid_argument, "config key '" + key + "' appears twice");
    }
  }
  return config;
}

WitnessConfig load_witness_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_witness_config(buf.str());
}

LocalOperator named_operator(const std::string& name, Side side, Index dim) {
  const int cutoff = static_cast<int>(dim) - 1;
  ComplexMatrix m;
  if (name == "sigma_minus" || name == "sigma_plus") {
    if (dim != 2) fail(ErrorCode::invalid_argument, "operator '" + name + "' needs a qubit subsystem");
    m = name == "sigma_minus" ? pauli_lower() : pauli_raise();
  } else if (name == "identity") {
    m = ComplexMatrix::Identity(dim, dim);
  } else if (name == "a") {
    m = boson_annihilation(cutoff);
  } else if (name == "adag") {
    m = boson_creation(cutoff);
  } else if (name == "n") {
    m = number_of(boson_annihilation(cutoff));
  } else if (name == "x") {
    m = position(cutoff);
  } else if (name == "p") {
    m = momentum(cutoff);
  } else if (name.rfind("quadrature:", 0) == 0) {
    m = quadrature(to_real("quadrature", name.substr(11)), cutoff);
  } else {
    fail(ErrorCode::invalid_argument, "unknown operator '" + name + "'");
  }
  return {std::move(m), side};
}

WitnessJobResult run_witness_config(const WitnessConfig& config, double tail_tolerance) {
  const Reader cfg(config);
  TruncationPolicy policy;
  policy.tail_tolerance = tail_tolerance;
  if (cfg.has("cutoff") && cfg.str("cutoff") != "auto") {
    const double c = cfg.real("cutoff");
    if (c < 1 || c != static_cast<int>(c)) fail(ErrorCode::invalid_argument, "cutoff must be a positive integer or 'auto'");
    policy.cutoff = static_cast<int>(c);
  }

  const std::string& name = cfg.str("state");
  std::variant<PureState, MixedState> state = [&]() -> std::variant<PureState, MixedState> {
    if (name == "bell1") return bell(1);
    if (name == "bell2") return bell(2);
    if (name == "werner1") return werner(1, cfg.real("p"));
    if (name == "werner2") return werner(2, cfg.real("p"));
    if (name == "tmsv") return tmsv(cfg.real("r"), policy);
    if (name == "squeezed_thermal") return squeezed_thermal(cfg.real("p"), cfg.real("r"), policy);
    if (name == "cross_kerr") {
      return cross_kerr_evolve(cfg.real("alpha"), cfg.real("beta"), cfg.real_or("t", 0.0), policy);
    }
    fail(ErrorCode::invalid_argument, "unknown state '" + name + "'");
  }();
  const StateRef ref = std::visit([](const auto& s) { return StateRef(s); }, state);
  const BipartiteSpace& space = ref.space();

  WitnessSpec spec{named_operator(cfg.has("op_a1") ? cfg.str("op_a1") : "a", Side::a, space.dim_a()),
                   named_operator(cfg.has("op_a2") ? cfg.str("op_a2") : cfg.has("op_a1") ? cfg.str("op_a1") : "a",
                                  Side::a, space.dim_a()),
                   named_operator(cfg.has("op_b1") ? cfg.str("op_b1") : "a", Side::b, space.dim_b()),
                   named_operator(cfg.has("op_b2") ? cfg.str("op_b2") : cfg.has("op_b1") ? cfg.str("op_b1") : "a",
                                  Side::b, space.dim_b()),
                   {cfg.flag("sigma_a1", true), cfg.flag("sigma_a2", true), cfg.flag("sigma_b1", false),
                    cfg.flag("sigma_b2", false)},
                   WitnessVariant::product_form,
                   std::nullopt};
  if (cfg.has("variant")) {
    const std::string& v = cfg.str("variant");
    if (v == "joint") {
      spec.variant = WitnessVariant::joint_form;
    } else if (v != "product") {
      fail(ErrorCode::invalid_argument, "variant must be 'product' or 'joint'");
    }
  }
  if (cfg.has("phase") && cfg.str("phase") != "optimal") spec.phase = cfg.real("phase");

  WitnessJobResult job;
  job.state = name;
  job.variant = spec.variant;
  job.result = evaluate_general(spec, ref);
  job.truncation = ref.truncation();
  return job;
}

std::string to_csv(const WitnessJobResult& job) {
  auto f = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return std::string(buf);
  };
  const WitnessResult& r = job.result;
  return "state,variant,s_term,trace_re,trace_im,phi,value,entangled,cutoff_a,cutoff_b,discarded_weight\n" +
         job.state + "," + (job.variant == WitnessVariant::joint_form ? "joint" : "product") + "," + f(r.s_term) +
         "," + f(r.trace_term.real()) + "," + f(r.trace_term.imag()) + "," + f(r.phi_used) + "," + f(r.value) + "," +
         (r.entangled ? "1" : "0") + "," + std::to_string(job.truncation.cutoff_a) + "," +
         std::to_string(job.truncation.cutoff_b) + "," + f(job.truncation.discarded_weight) + "\n";
}

}  // namespace qent

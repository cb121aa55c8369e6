#include "fwrta/sim/scenario.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fwrta::sim {

using nlohmann::json;

const char* to_string(RtaMode mode) {
  switch (mode) {
    case RtaMode::Off: return "off";
    case RtaMode::Extended: return "extended";
    case RtaMode::Backstepping: return "backstepping";
    case RtaMode::ModelFree: return "modelfree";
  }
  return "unknown";
}

namespace {

// Thin cursor over a JSON object that remembers its dotted path for messages.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& source,
       std::set<std::string>* read = nullptr)
      : j_(j), path_(std::move(path)), source_(source), read_(read) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ScenarioError(fmt::format("{}: field '{}': {}", source_, path_, what));
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) {
      throw ScenarioError(
          fmt::format("{}: missing required field '{}'", source_, child_path(key)));
    }
    return {j_.at(key), child_path(key), source_, read_};
  }

  std::optional<Node> maybe(const std::string& key) const {
    if (!has(key) || j_.at(key).is_null()) return std::nullopt;
    return Node(j_.at(key), child_path(key), source_, read_);
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    if (read_) read_->insert(path_);
    return j_.get<double>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::size_t size() const { return j_.size(); }
  bool is_array() const { return j_.is_array(); }
  bool is_number() const { return j_.is_number(); }

  Node element(std::size_t i) const {
    return {j_.at(i), fmt::format("{}[{}]", path_, i), source_, read_};
  }

  Vec3d vec3() const {
    if (!j_.is_array() || j_.size() != 3) fail("expected an array of 3 numbers");
    return {element(0).number(), element(1).number(), element(2).number()};
  }

  // A gain given as a scalar, a 3-vector diagonal, or a 3x3 row-major matrix.
  Mat3d matrix3() const {
    if (j_.is_number()) return number() * Mat3d::Identity();
    if (j_.is_array() && j_.size() == 3 && j_.at(0).is_number()) {
      return vec3().asDiagonal();
    }
    if (j_.is_array() && j_.size() == 3) {
      Mat3d m;
      for (int i = 0; i < 3; ++i) m.row(i) = element(i).vec3().transpose();
      return m;
    }
    fail("expected a scalar, a 3-vector or a 3x3 matrix");
  }

  double number_or(const std::string& key, double fallback) const {
    auto n = maybe(key);
    return n ? n->number() : fallback;
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& source_;
  std::set<std::string>* read_;  // numeric fields consumed, for override checks
};

std::string to_json_pointer(const std::string& param) {
  if (!param.empty() && param.front() == '/') return param;
  std::string out;
  std::stringstream ss(param);
  std::string token;
  while (std::getline(ss, token, '.')) out += "/" + token;
  return out;
}

// Dotted form of an override path as the parser reports it: a.b[0].c
std::string to_field_path(const std::string& param) {
  const std::string pointer = to_json_pointer(param);
  std::string out;
  std::stringstream ss(pointer.substr(1));
  std::string token;
  while (std::getline(ss, token, '/')) {
    const bool index = !token.empty() && token.find_first_not_of("0123456789") == std::string::npos;
    if (index) {
      out += "[" + token + "]";
    } else {
      out += (out.empty() ? "" : ".") + token;
    }
  }
  return out;
}

ControlUpdate parse_update(const Node& n) {
  const std::string s = n.string();
  if (s == "zoh") return ControlUpdate::ZeroOrderHold;
  if (s == "per_stage") return ControlUpdate::PerStage;
  n.fail("expected \"zoh\" or \"per_stage\", got \"" + s + "\"");
}

RtaMode parse_mode(const Node& n) {
  const std::string s = n.string();
  if (s == "off") return RtaMode::Off;
  if (s == "extended") return RtaMode::Extended;
  if (s == "backstepping") return RtaMode::Backstepping;
  if (s == "modelfree") return RtaMode::ModelFree;
  n.fail("unknown mode \"" + s + "\" (expected off, extended, backstepping or modelfree)");
}

FilterMode parse_filter(const Node& rta) {
  const auto f = rta.maybe("filter");
  if (!f) return FilterMode::hard();
  const std::string s = f->string();
  if (s == "hard") return FilterMode::hard();
  if (s == "smooth") return FilterMode::smooth(rta.number_or("nu", 1.0));
  f->fail("expected \"hard\" or \"smooth\", got \"" + s + "\"");
}

Constraint parse_member(const Node& n) {
  const std::string type = n.at("type").string();
  if (type == "obstacle") {
    MovingObstacle obs;
    obs.origin = n.at("origin").vec3();
    obs.velocity = n.at("velocity").vec3();
    if (auto a = n.maybe("acceleration")) obs.acceleration = a->vec3();
    obs.radius = n.at("radius").number();
    return obs;
  }
  if (type == "geofence") {
    const Vec3d normal = n.at("normal").vec3();
    if (!(normal.norm() > 0.0)) n.at("normal").fail("normal must be nonzero");
    return GeofencePlane::from_direction(n.at("point").vec3(), normal, n.at("margin").number());
  }
  n.at("type").fail("unknown constraint type \"" + type + "\"");
}

AircraftState parse_state(const Node& n) {
  AircraftState x;
  x.n = n.at("n").number();
  x.e = n.at("e").number();
  x.d = n.at("d").number();
  x.phi = n.at("phi").number();
  x.theta = n.at("theta").number();
  x.psi = n.at("psi").number();
  x.V_T = n.at("V_T").number();
  return x;
}

void parse_rta(const Node& rta, Scenario& s) {
  s.mode = parse_mode(rta.at("mode"));
  const double gamma_p = rta.number_or("gamma_p", 0.1);
  const ClassKappaLinear alpha{rta.number_or("gamma", 0.1)};
  WeightFactor W = WeightFactor::diagonal(6.0, 0.6, 0.1);
  if (auto w = rta.maybe("W")) W.W = w->matrix3();
  const FilterMode mode = parse_filter(rta);

  s.extended.gamma_p = gamma_p;
  s.extended.alpha = alpha;
  s.extended.W = W;
  s.extended.mode = mode;

  s.backstepping.gamma_p = gamma_p;
  s.backstepping.alpha = alpha;
  s.backstepping.W = W;
  s.backstepping.mode = mode;
  if (auto b = rta.maybe("backstepping")) {
    s.backstepping.alpha_e.gamma = b->number_or("gamma_e", 0.1);
    if (auto we = b->maybe("W_e")) s.backstepping.W_e.W = we->matrix3();
    s.backstepping.nu_e = b->number_or("nu_e", 1.0);
    s.backstepping.mu_e = b->number_or("mu_e", 1e-4);
  }

  s.modelfree.gamma_p = gamma_p;
  if (auto m = rta.maybe("modelfree")) {
    s.modelfree.sigma = m->number_or("sigma", 3.0);
    s.modelfree.Gamma_v = m->number_or("Gamma_v", 4.0);
    s.modelfree.nu_v = m->number_or("nu_v", 0.007);
  }
}

void parse_acceptance(const Node& a, AcceptanceThresholds& out) {
  auto opt = [&](const char* key, std::optional<double>& dst) {
    if (auto n = a.maybe(key)) dst = n->number();
  };
  auto flag = [&](const char* key, bool& dst) {
    if (auto n = a.maybe(key)) dst = n->boolean();
  };
  opt("min_h_p", out.min_h_p);
  opt("min_h_members", out.min_h_members);
  opt("min_h_mode", out.min_h_mode);
  flag("p_transparent", out.p_transparent);
  opt("roll_engaged", out.roll_engaged);
  flag("no_warnings", out.no_warnings);
  opt("max_final_speed", out.max_final_speed);
  opt("max_abs_down", out.max_abs_down);
  flag("require_complete", out.require_complete);
}

// Model-level validation errors are reported as schema errors with the field they concern.
template <typename F>
void check_field(const std::string& source, const std::string& field, F&& fn) {
  try {
    fn();
  } catch (const RtaError& e) {
    throw ScenarioError(fmt::format("{}: field '{}': {}", source, field, e.what()));
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::vector<ParamOverride>& overrides) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    // The parser reports "at line L, column C" in its message.
    throw ScenarioError(fmt::format("{}: {}", source, e.what()));
  }
  if (!doc.is_object()) throw ScenarioError(source + ": top level must be an object");

  for (const auto& [param, value] : overrides) {
    try {
      doc[json::json_pointer(to_json_pointer(param))] = value;
    } catch (const json::exception& e) {
      throw ScenarioError(fmt::format("{}: cannot override '{}': {}", source, param, e.what()));
    }
  }

  std::set<std::string> read;
  const Node root(doc, "", source, &read);
  const Node version = root.at("schema_version");
  if (version.number() != kScenarioSchemaVersion) {
    version.fail(fmt::format("unsupported schema version {} (expected {})", version.number(),
                             kScenarioSchemaVersion));
  }

  Scenario s;
  s.name = root.at("name").string();
  if (auto d = root.maybe("description")) s.description = d->string();

  const Node sim = root.at("simulation");
  s.sim.dt = sim.at("dt").number();
  s.sim.horizon = sim.at("horizon").number();
  if (auto u = sim.maybe("control_update")) s.sim.update = parse_update(*u);
  if (auto seed = sim.maybe("seed")) {
    const double v = seed->number();
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
      seed->fail("expected a nonnegative integer");
    }
    s.sim.seed = static_cast<std::uint64_t>(v);
  }
  if (!(s.sim.dt > 0.0)) sim.at("dt").fail("dt must be positive");
  if (!(s.sim.horizon > s.sim.dt)) sim.at("horizon").fail("horizon must exceed dt");

  if (auto m = root.maybe("model")) {
    s.gravity.g_D = m->number_or("g_D", s.gravity.g_D);
    s.limits.min_speed = m->number_or("min_speed", s.limits.min_speed);
    s.limits.pitch_margin = m->number_or("pitch_margin", s.limits.pitch_margin);
  }

  s.initial_state = parse_state(root.at("initial_state"));

  const Node goal = root.at("goal");
  if (auto o = goal.maybe("origin")) s.goal.origin = o->vec3();
  s.goal.velocity = goal.at("velocity").vec3();
  if (auto a = goal.maybe("acceleration")) s.goal.acceleration = a->vec3();

  if (auto tr = root.maybe("tracking")) {
    if (auto k = tr->maybe("K_r")) s.tracking.K_r = k->matrix3();
    if (auto k = tr->maybe("K_v")) s.tracking.K_v = k->matrix3();
    s.tracking.mu = tr->number_or("mu", s.tracking.mu);
    s.tracking.lambda = tr->number_or("lambda", s.tracking.lambda);
  }
  check_field(source, "tracking", [&] { s.tracking.validate(); });

  const Node cons = root.at("constraints");
  s.constraints.kappa = cons.at("kappa").number();
  const Node members = cons.at("members");
  if (!members.is_array()) members.fail("expected an array");
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Node m = members.element(i);
    check_field(source, fmt::format("constraints.members[{}]", i),
                [&] { s.constraints.members.push_back(parse_member(m)); });
  }

  parse_rta(root.at("rta"), s);
  if (s.mode != RtaMode::Off) {
    check_field(source, "constraints", [&] { s.constraints.validate(); });
  }
  check_field(source, "rta", [&] {
    switch (s.mode) {
      case RtaMode::Extended: s.extended.validate(); break;
      case RtaMode::Backstepping: s.backstepping.validate(); break;
      case RtaMode::ModelFree:
        s.modelfree.validate();
        if (!(s.tracking.lambda > s.modelfree.gamma_p)) {
          throw RtaError(ErrorKind::InvalidGainOrdering,
                         "tracking lambda must exceed gamma_p for the model-free barrier");
        }
        break;
      case RtaMode::Off: break;
    }
  });

  if (auto a = root.maybe("acceptance")) parse_acceptance(*a, s.acceptance);

  for (const auto& [param, value] : overrides) {
    if (!read.contains(to_field_path(param))) {
      throw ScenarioError(fmt::format("{}: cannot override '{}': not a numeric scenario field",
                                      source, param));
    }
  }

  check_field(source, "initial_state", [&] { check_state(s.initial_state, s.limits); });
  validate_initial_state(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<ParamOverride>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(fmt::format("{}: cannot open scenario file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string(), overrides);
}

}  // namespace fwrta::sim

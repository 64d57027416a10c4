#include "mr_isolator/config.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {
namespace {

using nlohmann::json;

// Reads keys from one JSON object, tracking which were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    if (!doc.is_object()) throw ConfigError(path_ + ": expected an object");
    doc_ = &doc;
  }

  std::string Key(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    const auto it = doc_->find(key);
    return it == doc_->end() ? nullptr : &*it;
  }

  double Number(const std::string& key, double fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(Key(key) + ": expected a number");
    return v->get<double>();
  }

  int Integer(const std::string& key, int fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(Key(key) + ": expected an integer");
    const auto n = v->get<std::int64_t>();
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
      throw ConfigError(Key(key) + ": integer out of range");
    }
    return static_cast<int>(n);
  }

  std::uint64_t Unsigned(const std::string& key, std::uint64_t fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    }
    throw ConfigError(Key(key) + ": expected a non-negative integer");
  }

  std::string String(const std::string& key, const std::string& fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(Key(key) + ": expected a string");
    return v->get<std::string>();
  }

  std::pair<double, double> Pair(const std::string& key, std::pair<double, double> fallback) {
    const json* v = Find(key);
    if (!v) return fallback;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      throw ConfigError(Key(key) + ": expected [lo, hi]");
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  std::optional<Section> Child(const std::string& key) {
    const json* v = Find(key);
    if (!v) return std::nullopt;
    return Section(*v, Key(key));
  }

  /// Throws for any key not read.
  void Finish() const {
    for (const auto& [key, value] : doc_->items()) {
      if (!seen_.count(key)) throw ConfigError(Key(key) + ": unknown key");
    }
  }

 private:
  const json* doc_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum>
Enum ParseEnum(const std::string& key, const std::string& value,
               std::initializer_list<std::pair<const char*, Enum>> options) {
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(key + ": unknown value '" + value + "' (expected one of " + allowed + ")");
}

PlantParams<double> ParsePlant(Section s) {
  PlantParams<double> p;
  p.m1 = s.Number("m1", p.m1);
  p.m2 = s.Number("m2", p.m2);
  p.c1 = s.Number("c1", p.c1);
  p.c2 = s.Number("c2", p.c2);
  p.beta1 = s.Number("beta1", p.beta1);
  p.beta2_passive = s.Number("beta2_passive", p.beta2_passive);
  p.contact_mode = ParseEnum<ContactMode>(
      s.Key("contact_mode"), s.String("contact_mode", "bilateral"),
      {{"bilateral", ContactMode::kBilateral}, {"unilateral", ContactMode::kUnilateral}});
  s.Finish();
  return p;
}

ExcitationSpec ParseExcitation(Section s) {
  const std::string type = s.String("type", "multisine");
  ExcitationSpec spec;
  if (type == "sine") {
    SineExcitation e;
    e.amplitude = s.Number("amplitude", e.amplitude);
    e.frequency_hz = s.Number("frequency_hz", e.frequency_hz);
    e.phase_rad = s.Number("phase_rad", e.phase_rad);
    spec = e;
  } else if (type == "step") {
    StepExcitation e;
    e.amplitude = s.Number("amplitude", e.amplitude);
    e.t_start = s.Number("t_start", e.t_start);
    spec = e;
  } else if (type == "chirp") {
    ChirpExcitation e;
    e.amplitude = s.Number("amplitude", e.amplitude);
    e.f_start_hz = s.Number("f_start_hz", e.f_start_hz);
    e.f_end_hz = s.Number("f_end_hz", e.f_end_hz);
    e.duration = s.Number("duration", e.duration);
    spec = e;
  } else if (type == "multisine") {
    MultiSineExcitation e;
    e.seed = s.Unsigned("seed", e.seed);
    e.n_components = s.Integer("n_components", e.n_components);
    std::tie(e.f_lo_hz, e.f_hi_hz) = s.Pair("band", {e.f_lo_hz, e.f_hi_hz});
    e.peak_bound = s.Number("peak_bound", e.peak_bound);
    spec = e;
  } else {
    throw ConfigError(s.Key("type") + ": unknown value '" + type +
                      "' (expected one of sine, step, chirp, multisine)");
  }
  s.Finish();
  return spec;
}

ControlMode ParseMode(Section s) {
  const std::string type = s.String("type", "semi_active_damping");
  ControlMode mode;
  if (type == "passive") {
    mode = PassiveMode{};
  } else if (type == "semi_active_damping") {
    SemiActiveDampingMode m;
    m.beta_min = s.Number("beta_min", m.beta_min);
    m.beta_max = s.Number("beta_max", m.beta_max);
    mode = m;
  } else if (type == "active_force") {
    ActiveForceMode m;
    m.u_min = s.Number("u_min", m.u_min);
    m.u_max = s.Number("u_max", m.u_max);
    mode = m;
  } else {
    throw ConfigError(s.Key("type") + ": unknown value '" + type +
                      "' (expected one of passive, semi_active_damping, active_force)");
  }
  s.Finish();
  return mode;
}

PidParams ParsePid(Section s) {
  PidParams p;
  p.kp = s.Number("kp", p.kp);
  p.ki = s.Number("ki", p.ki);
  p.kd = s.Number("kd", p.kd);
  p.derivative_filter_n = s.Number("derivative_filter_n", p.derivative_filter_n);
  p.output_min = s.Number("output_min", p.output_min);
  p.output_max = s.Number("output_max", p.output_max);
  p.sample_dt = s.Number("sample_dt", p.sample_dt);
  p.anti_windup = ParseEnum<AntiWindup>(
      s.Key("anti_windup"), s.String("anti_windup", "clamp_integrator"),
      {{"clamp_integrator", AntiWindup::kClampIntegrator}, {"none", AntiWindup::kNone}});
  s.Finish();
  return p;
}

IntegratorConfig ParseIntegrator(Section s) {
  IntegratorConfig c;
  c.method = ParseEnum<IntegrationMethod>(
      s.Key("method"), s.String("method", "rk4"),
      {{"rk4", IntegrationMethod::kRk4},
       {"semi_implicit_euler", IntegrationMethod::kSemiImplicitEuler}});
  c.dt = s.Number("dt", c.dt);
  s.Finish();
  return c;
}

TuneConfig ParseTune(Section s) {
  TuneConfig t;
  if (auto b = s.Child("bounds")) {
    for (int i = 0; i < 3; ++i) {
      static constexpr const char* kNames[] = {"kp", "ki", "kd"};
      std::tie(t.lower(i), t.upper(i)) = b->Pair(kNames[i], {t.lower(i), t.upper(i)});
    }
    b->Finish();
  }
  t.objective = ParseEnum<TuneObjective>(
      s.Key("objective"), s.String("objective", "iae"),
      {{"iae", TuneObjective::kIae}, {"rms", TuneObjective::kRms}, {"peak", TuneObjective::kPeak}});
  if (auto o = s.Child("optimizer")) {
    auto& nm = t.optimizer;
    nm.initial_simplex_scale = o->Number("initial_simplex_scale", nm.initial_simplex_scale);
    nm.reflection = o->Number("reflection", nm.reflection);
    nm.expansion = o->Number("expansion", nm.expansion);
    nm.contraction = o->Number("contraction", nm.contraction);
    nm.shrink = o->Number("shrink", nm.shrink);
    nm.max_evals = o->Integer("max_evals", nm.max_evals);
    nm.tolerance = o->Number("tolerance", nm.tolerance);
    o->Finish();
  }
  t.restarts = s.Integer("restarts", t.restarts);
  t.seed = s.Unsigned("seed", t.seed);
  s.Finish();
  return t;
}

const char* Name(ContactMode m) {
  return m == ContactMode::kBilateral ? "bilateral" : "unilateral";
}
const char* Name(AntiWindup a) {
  return a == AntiWindup::kClampIntegrator ? "clamp_integrator" : "none";
}
const char* Name(IntegrationMethod m) {
  return m == IntegrationMethod::kRk4 ? "rk4" : "semi_implicit_euler";
}
const char* Name(TuneObjective o) {
  switch (o) {
    case TuneObjective::kIae:
      return "iae";
    case TuneObjective::kRms:
      return "rms";
    case TuneObjective::kPeak:
      return "peak";
  }
  return "iae";
}

json ExcitationJson(const ExcitationSpec& spec) {
  return std::visit(
      [](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SineExcitation>) {
          return {{"type", "sine"}, {"amplitude", e.amplitude},
                  {"frequency_hz", e.frequency_hz}, {"phase_rad", e.phase_rad}};
        } else if constexpr (std::is_same_v<T, StepExcitation>) {
          return {{"type", "step"}, {"amplitude", e.amplitude}, {"t_start", e.t_start}};
        } else if constexpr (std::is_same_v<T, ChirpExcitation>) {
          return {{"type", "chirp"}, {"amplitude", e.amplitude}, {"f_start_hz", e.f_start_hz},
                  {"f_end_hz", e.f_end_hz}, {"duration", e.duration}};
        } else {
          return {{"type", "multisine"}, {"seed", e.seed}, {"n_components", e.n_components},
                  {"band", {e.f_lo_hz, e.f_hi_hz}}, {"peak_bound", e.peak_bound}};
        }
      },
      spec);
}

json ModeJson(const ControlMode& mode) {
  if (const auto* m = std::get_if<SemiActiveDampingMode>(&mode)) {
    return {{"type", "semi_active_damping"}, {"beta_min", m->beta_min}, {"beta_max", m->beta_max}};
  }
  if (const auto* m = std::get_if<ActiveForceMode>(&mode)) {
    return {{"type", "active_force"}, {"u_min", m->u_min}, {"u_max", m->u_max}};
  }
  return {{"type", "passive"}};
}

}  // namespace

ConfigDocument ParseConfig(const json& doc) {
  Section root(doc, "");
  ConfigDocument out;
  SimConfig& sim = out.sim;
  if (auto s = root.Child("plant")) sim.plant = ParsePlant(*s);
  if (auto s = root.Child("excitation")) {
    sim.excitation = Excitation(ParseExcitation(*s));
  }
  if (auto s = root.Child("mode")) sim.mode = ParseMode(*s);
  if (auto s = root.Child("pid")) sim.pid = ParsePid(*s);
  if (auto s = root.Child("integrator")) sim.integrator = ParseIntegrator(*s);
  if (auto s = root.Child("run")) {
    sim.duration = s->Number("duration", sim.duration);
    sim.z_ref = s->Number("z_ref", sim.z_ref);
    sim.record_every = s->Integer("record_every", sim.record_every);
    s->Finish();
  }
  if (auto s = root.Child("tune")) {
    out.tune = ParseTune(*s);
    out.tune->Validate();
  }
  root.Finish();
  sim.Validate();
  return out;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json ToJson(const ConfigDocument& config) {
  const SimConfig& sim = config.sim;
  const auto& p = sim.plant;
  const auto& pid = sim.pid;
  json doc = {
      {"plant",
       {{"m1", p.m1}, {"m2", p.m2}, {"c1", p.c1}, {"c2", p.c2}, {"beta1", p.beta1},
        {"beta2_passive", p.beta2_passive}, {"contact_mode", Name(p.contact_mode)}}},
      {"excitation", ExcitationJson(sim.excitation.spec())},
      {"mode", ModeJson(sim.mode)},
      {"pid",
       {{"kp", pid.kp}, {"ki", pid.ki}, {"kd", pid.kd},
        {"derivative_filter_n", pid.derivative_filter_n}, {"output_min", pid.output_min},
        {"output_max", pid.output_max}, {"sample_dt", pid.sample_dt},
        {"anti_windup", Name(pid.anti_windup)}}},
      {"integrator", {{"method", Name(sim.integrator.method)}, {"dt", sim.integrator.dt}}},
      {"run",
       {{"duration", sim.duration}, {"z_ref", sim.z_ref}, {"record_every", sim.record_every}}},
  };
  if (config.tune) {
    const TuneConfig& t = *config.tune;
    const auto& nm = t.optimizer;
    doc["tune"] = {
        {"bounds",
         {{"kp", {t.lower(0), t.upper(0)}},
          {"ki", {t.lower(1), t.upper(1)}},
          {"kd", {t.lower(2), t.upper(2)}}}},
        {"objective", Name(t.objective)},
        {"optimizer",
         {{"initial_simplex_scale", nm.initial_simplex_scale}, {"reflection", nm.reflection},
          {"expansion", nm.expansion}, {"contraction", nm.contraction}, {"shrink", nm.shrink},
          {"max_evals", nm.max_evals}, {"tolerance", nm.tolerance}}},
        {"restarts", t.restarts},
        {"seed", t.seed},
    };
  }
  return doc;
}

}  // namespace mr_isolator

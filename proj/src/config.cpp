#include "nhb/config.hpp"

#include "nhb/models.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace nhb::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ValidationError, "field '" + field + "': " + why);
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

Command parse_command(const std::string& s) {
  if (s == "connection") return Command::Connection;
  if (s == "curvature") return Command::Curvature;
  if (s == "chern") return Command::Chern;
  if (s == "holonomy") return Command::Holonomy;
  if (s == "adiabatic") return Command::Adiabatic;
  if (s == "verify") return Command::Verify;
  fail("command", "unknown command '" + s + "'");
}

berry::Kind parse_kind(const std::string& s) {
  if (s == "ll") return berry::Kind::LL;
  if (s == "lr") return berry::Kind::LR;
  if (s == "rl") return berry::Kind::RL;
  if (s == "rr") return berry::Kind::RR;
  if (s == "cbc") return berry::Kind::CBC;
  if (s == "hermitian_frame") return berry::Kind::HermitianFrame;
  fail("kinds", "unknown connection kind '" + s + "'");
}

ParamGrid parse_grid(const json& j) {
  if (!j.is_object()) fail("grid", "expected an object");
  reject_unknown(j, "grid", {"axes"});
  if (!j.contains("axes") || !j["axes"].is_array())
    fail("grid.axes", "expected an array of axis objects");
  ParamGrid g;
  for (const auto& a : j["axes"]) {
    reject_unknown(a, "grid.axes[]", {"name", "min", "max", "size", "periodic"});
    GridAxis ax;
    if (!a.contains("name")) fail("grid.axes[].name", "required");
    ax.name = as_string(a["name"], "grid.axes[].name");
    if (!a.contains("min") || !a.contains("max") || !a.contains("size"))
      fail("grid.axes[]", "min, max and size are required");
    ax.min = as_number(a["min"], "grid.axes[].min");
    ax.max = as_number(a["max"], "grid.axes[].max");
    ax.size = static_cast<int>(as_number(a["size"], "grid.axes[].size"));
    if (a.contains("periodic")) {
      if (!a["periodic"].is_boolean()) fail("grid.axes[].periodic", "expected bool");
      ax.periodic = a["periodic"].get<bool>();
    }
    g.axes.push_back(ax);
  }
  g.validate();
  return g;
}

PathSpec parse_path(const json& j) {
  if (!j.is_object()) fail("path", "expected an object");
  reject_unknown(j, "path", {"axis", "fixed", "from", "to", "points", "closed"});
  PathSpec p;
  if (!j.contains("axis")) fail("path.axis", "required");
  p.axis = as_string(j["axis"], "path.axis");
  if (j.contains("fixed")) {
    if (!j["fixed"].is_object()) fail("path.fixed", "expected an object");
    for (auto it = j["fixed"].begin(); it != j["fixed"].end(); ++it)
      p.fixed[it.key()] = as_number(it.value(), "path.fixed." + it.key());
  }
  if (j.contains("from")) p.from = as_number(j["from"], "path.from");
  if (j.contains("to")) p.to = as_number(j["to"], "path.to");
  if (j.contains("points"))
    p.points = static_cast<int>(as_number(j["points"], "path.points"));
  if (p.points < 2) fail("path.points", "needs >= 2");
  if (j.contains("closed")) {
    if (!j["closed"].is_boolean()) fail("path.closed", "expected bool");
    p.closed = j["closed"].get<bool>();
  }
  return p;
}

void apply_tolerances(const json& j, Tolerances& tol) {
  if (!j.is_object()) fail("tolerances", "expected an object");
  const std::map<std::string, double*> slots = {
      {"tol_eig", &tol.tol_eig},       {"tol_biorth", &tol.tol_biorth},
      {"tol_herm", &tol.tol_herm},     {"tol_unitary", &tol.tol_unitary},
      {"tol_recon", &tol.tol_recon},   {"posdef_floor", &tol.posdef_floor},
      {"det_floor", &tol.det_floor},   {"cond_max", &tol.cond_max},
      {"step", &tol.step},             {"gap_floor", &tol.gap_floor},
      {"overlap_floor", &tol.overlap_floor}, {"deg_floor", &tol.deg_floor},
      {"xcheck_tol", &tol.xcheck_tol}, {"quantize_tol", &tol.quantize_tol},
      {"fid_floor", &tol.fid_floor}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto slot = slots.find(it.key());
    if (slot == slots.end()) fail("tolerances." + it.key(), "unknown tolerance");
    *slot->second = as_number(it.value(), "tolerances." + it.key());
  }
}

void validate_against_model(RunConfig& cfg) {
  if (cfg.model.name.empty()) return;  // file models are checked at load time
  const auto field = models::make_builtin(cfg.model.name, cfg.model.params);
  for (int b : cfg.bands)
    if (b < 0 || b >= field.spec.dim)
      fail("bands", "band index " + std::to_string(b) + " out of range for a " +
                        std::to_string(field.spec.dim) + "-level model");
  if (cfg.grid) {
    if (cfg.grid->rank() != field.n_axes())
      fail("grid.axes", "expected " + std::to_string(field.n_axes()) +
                            " axes for model '" + cfg.model.name + "'");
    for (int k = 0; k < cfg.grid->rank(); ++k)
      if (cfg.grid->axes[k].name != field.spec.param_names[k])
        fail("grid.axes", "axis '" + cfg.grid->axes[k].name +
                              "' does not match model parameter '" +
                              field.spec.param_names[k] + "'");
  }
  if (cfg.path) {
    bool found = false;
    for (const auto& n : field.spec.param_names)
      if (n == cfg.path->axis) found = true;
    if (!found) fail("path.axis", "model has no parameter '" + cfg.path->axis + "'");
    for (const auto& [k, v] : cfg.path->fixed) {
      (void)v;
      bool ok = false;
      for (const auto& n : field.spec.param_names)
        if (n == k) ok = true;
      if (!ok) fail("path.fixed." + k, "model has no parameter '" + k + "'");
    }
  }
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Connection: return "connection";
    case Command::Curvature: return "curvature";
    case Command::Chern: return "chern";
    case Command::Holonomy: return "holonomy";
    case Command::Adiabatic: return "adiabatic";
    case Command::Verify: return "verify";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "top level must be an object");
  reject_unknown(j, "",
                 {"command", "model", "grid", "path", "bands", "kinds", "transform",
                  "tolerances", "output", "adiabatic", "chern", "workers", "seed"});

  RunConfig cfg;
  if (!j.contains("command")) fail("command", "required");
  cfg.command = parse_command(as_string(j["command"], "command"));

  if (!j.contains("model")) fail("model", "required");
  {
    const json& m = j["model"];
    if (!m.is_object()) fail("model", "expected an object");
    reject_unknown(m, "model", {"name", "params", "file"});
    if (m.contains("name")) cfg.model.name = as_string(m["name"], "model.name");
    if (m.contains("file")) cfg.model.file = as_string(m["file"], "model.file");
    if (cfg.model.name.empty() == cfg.model.file.empty())
      fail("model", "exactly one of name or file is required");
    if (m.contains("params")) {
      if (!m["params"].is_object()) fail("model.params", "expected an object");
      for (auto it = m["params"].begin(); it != m["params"].end(); ++it)
        cfg.model.params[it.key()] =
            as_number(it.value(), "model.params." + it.key());
    }
  }

  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
  if (j.contains("path")) cfg.path = parse_path(j["path"]);

  if (j.contains("bands")) {
    if (!j["bands"].is_array()) fail("bands", "expected an array");
    for (const auto& b : j["bands"])
      cfg.bands.push_back(static_cast<int>(as_number(b, "bands[]")));
  }

  if (j.contains("kinds")) {
    if (!j["kinds"].is_array()) fail("kinds", "expected an array");
    cfg.kinds.clear();
    for (const auto& k : j["kinds"])
      cfg.kinds.push_back(parse_kind(as_string(k, "kinds[]")));
    if (cfg.kinds.empty()) fail("kinds", "needs at least one kind");
  }

  if (j.contains("transform")) {
    const json& t = j["transform"];
    if (!t.is_object()) fail("transform", "expected an object");
    reject_unknown(t, "transform", {"type", "seed", "log_scale"});
    const std::string type =
        t.contains("type") ? as_string(t["type"], "transform.type") : "none";
    if (type == "none") cfg.transform.type = TransformType::None;
    else if (type == "diagonal-rescale") cfg.transform.type = TransformType::DiagonalRescale;
    else if (type == "random-gl") cfg.transform.type = TransformType::RandomGl;
    else fail("transform.type", "unknown type '" + type + "'");
    if (t.contains("seed"))
      cfg.transform.seed =
          static_cast<uint64_t>(as_number(t["seed"], "transform.seed"));
    if (t.contains("log_scale"))
      cfg.transform.log_scale = as_number(t["log_scale"], "transform.log_scale");
  }

  if (j.contains("tolerances")) apply_tolerances(j["tolerances"], cfg.tol);

  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) fail("output", "expected an object");
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output.path = as_string(o["path"], "output.path");
    if (o.contains("format")) {
      const std::string f = as_string(o["format"], "output.format");
      if (f == "json") cfg.output.format = OutputFormat::Json;
      else if (f == "csv") cfg.output.format = OutputFormat::Csv;
      else fail("output.format", "expected json or csv");
    }
  }

  if (j.contains("adiabatic")) {
    const json& a = j["adiabatic"];
    if (!a.is_object()) fail("adiabatic", "expected an object");
    reject_unknown(a, "adiabatic", {"duration", "dt", "band"});
    if (a.contains("duration"))
      cfg.adiabatic.duration = as_number(a["duration"], "adiabatic.duration");
    if (a.contains("dt")) cfg.adiabatic.dt = as_number(a["dt"], "adiabatic.dt");
    if (a.contains("band"))
      cfg.adiabatic.band = static_cast<int>(as_number(a["band"], "adiabatic.band"));
    if (cfg.adiabatic.duration <= 0.0) fail("adiabatic.duration", "must be > 0");
  }

  if (j.contains("chern")) {
    const json& c = j["chern"];
    if (!c.is_object()) fail("chern", "expected an object");
    reject_unknown(c, "chern", {"method"});
    if (c.contains("method")) {
      cfg.chern.method = as_string(c["method"], "chern.method");
      if (cfg.chern.method != "link_plaquette" && cfg.chern.method != "curvature_sum")
        fail("chern.method", "expected link_plaquette or curvature_sum");
    }
  }

  if (j.contains("workers"))
    cfg.workers = static_cast<int>(as_number(j["workers"], "workers"));
  if (cfg.workers < 0) fail("workers", "must be >= 0");
  if (j.contains("seed"))
    cfg.seed = static_cast<uint64_t>(as_number(j["seed"], "seed"));

  // Per-command structural requirements.
  switch (cfg.command) {
    case Command::Connection:
    case Command::Curvature:
      if (!cfg.grid) fail("grid", "required for this command");
      break;
    case Command::Chern:
      if (!cfg.grid) fail("grid", "required for this command");
      if (cfg.grid->rank() != 2 || !cfg.grid->axes[0].periodic ||
          !cfg.grid->axes[1].periodic)
        fail("grid", "chern needs a 2D grid periodic in both axes");
      break;
    case Command::Holonomy:
      if (!cfg.path) fail("path", "required for this command");
      break;
    case Command::Adiabatic:
      if (!cfg.path) fail("path", "required for this command");
      break;
    case Command::Verify:
      break;
  }

  validate_against_model(cfg);
  return cfg;
}

std::string serialize(const RunConfig& cfg) {
  json j;
  j["command"] = command_name(cfg.command);
  json m = json::object();
  if (!cfg.model.name.empty()) m["name"] = cfg.model.name;
  if (!cfg.model.file.empty()) m["file"] = cfg.model.file;
  if (!cfg.model.params.empty()) {
    json p = json::object();
    for (const auto& [k, v] : cfg.model.params) p[k] = v;
    m["params"] = p;
  }
  j["model"] = m;
  if (cfg.grid) {
    json axes = json::array();
    for (const auto& a : cfg.grid->axes)
      axes.push_back({{"name", a.name},
                      {"min", a.min},
                      {"max", a.max},
                      {"size", a.size},
                      {"periodic", a.periodic}});
    j["grid"] = {{"axes", axes}};
  }
  if (cfg.path) {
    json fixed = json::object();
    for (const auto& [k, v] : cfg.path->fixed) fixed[k] = v;
    j["path"] = {{"axis", cfg.path->axis}, {"fixed", fixed},
                 {"from", cfg.path->from}, {"to", cfg.path->to},
                 {"points", cfg.path->points}, {"closed", cfg.path->closed}};
  }
  if (!cfg.bands.empty()) j["bands"] = cfg.bands;
  {
    json kinds = json::array();
    for (auto k : cfg.kinds) kinds.push_back(berry::kind_name(k));
    j["kinds"] = kinds;
  }
  {
    const char* type = cfg.transform.type == TransformType::None ? "none"
                       : cfg.transform.type == TransformType::DiagonalRescale
                           ? "diagonal-rescale"
                           : "random-gl";
    j["transform"] = {{"type", type},
                      {"seed", cfg.transform.seed},
                      {"log_scale", cfg.transform.log_scale}};
  }
  {
    const Tolerances d;
    json t = json::object();
    auto put = [&t](const char* k, double v, double dflt) {
      if (v != dflt) t[k] = v;
    };
    put("tol_eig", cfg.tol.tol_eig, d.tol_eig);
    put("tol_biorth", cfg.tol.tol_biorth, d.tol_biorth);
    put("tol_herm", cfg.tol.tol_herm, d.tol_herm);
    put("tol_unitary", cfg.tol.tol_unitary, d.tol_unitary);
    put("tol_recon", cfg.tol.tol_recon, d.tol_recon);
    put("posdef_floor", cfg.tol.posdef_floor, d.posdef_floor);
    put("det_floor", cfg.tol.det_floor, d.det_floor);
    put("cond_max", cfg.tol.cond_max, d.cond_max);
    put("step", cfg.tol.step, d.step);
    put("gap_floor", cfg.tol.gap_floor, d.gap_floor);
    put("overlap_floor", cfg.tol.overlap_floor, d.overlap_floor);
    put("deg_floor", cfg.tol.deg_floor, d.deg_floor);
    put("xcheck_tol", cfg.tol.xcheck_tol, d.xcheck_tol);
    put("quantize_tol", cfg.tol.quantize_tol, d.quantize_tol);
    put("fid_floor", cfg.tol.fid_floor, d.fid_floor);
    if (!t.empty()) j["tolerances"] = t;
  }
  {
    json o = json::object();
    if (!cfg.output.path.empty()) o["path"] = cfg.output.path;
    o["format"] = cfg.output.format == OutputFormat::Json ? "json" : "csv";
    j["output"] = o;
  }
  if (cfg.command == Command::Adiabatic)
    j["adiabatic"] = {{"duration", cfg.adiabatic.duration},
                      {"dt", cfg.adiabatic.dt},
                      {"band", cfg.adiabatic.band}};
  if (cfg.command == Command::Chern) j["chern"] = {{"method", cfg.chern.method}};
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  // Provenance covers what determines the results; worker count and output
  // destination do not.
  RunConfig reduced = cfg;
  reduced.workers = 0;
  reduced.output = OutputSpec{};
  const std::string s = serialize(reduced);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace nhb::config

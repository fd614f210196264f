#include "stepforce/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>

namespace stepforce {

namespace {

// Reads fields out of one JSON object and rejects whatever it did not read.
class Section {
public:
  Section(const Json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ConfigError("'" + path_ + "' must be an object");
  }

  //! Call once every field has been read.
  void done() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key '" + it.key() + "' in " +
                          (path_.empty() ? std::string("top level") : "'" + path_ + "'"));
  }

  const Json *find(const std::string &key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string where(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class F> auto guarded(const std::string &key, F &&f) {
    try {
      return f();
    } catch (const std::exception &e) {
      throw ConfigError("'" + where(key) + "': " + e.what());
    }
  }

  void number(const std::string &key, double &out) {
    if (auto v = find(key)) {
      if (!v->is_number())
        throw ConfigError("'" + where(key) + "' must be a number");
      out = v->get<double>();
    }
  }

  template <class Int> void integer(const std::string &key, Int &out) {
    if (auto v = find(key)) {
      if (!v->is_number_integer() ||
          (std::is_unsigned_v<Int> && !v->is_number_unsigned()))
        throw ConfigError("'" + where(key) + "' must be an integer" +
                          (std::is_unsigned_v<Int> ? " >= 0" : ""));
      out = v->get<Int>();
    }
  }

  void boolean(const std::string &key, bool &out) {
    if (auto v = find(key)) {
      if (!v->is_boolean())
        throw ConfigError("'" + where(key) + "' must be true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string &key, std::string &out) {
    if (auto v = find(key)) {
      if (!v->is_string())
        throw ConfigError("'" + where(key) + "' must be a string");
      out = v->get<std::string>();
    }
  }

  void theory(const std::string &key, Theory &out) {
    std::string name;
    string(key, name);
    if (!name.empty())
      out = guarded(key, [&] { return theory_from_string(name); });
  }

  void shape(const std::string &key, Shape &out) {
    std::string name;
    string(key, name);
    if (!name.empty())
      out = guarded(key, [&] { return shape_from_string(name); });
  }

  void numbers(const std::string &key, std::vector<double> &out) {
    if (auto v = find(key)) {
      if (!v->is_array())
        throw ConfigError("'" + where(key) + "' must be an array of numbers");
      out.clear();
      for (const auto &e : *v) {
        if (!e.is_number())
          throw ConfigError("'" + where(key) + "' must be an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }

  void shapes(const std::string &key, std::vector<Shape> &out) {
    if (auto v = find(key)) {
      if (!v->is_array())
        throw ConfigError("'" + where(key) + "' must be an array of shape names");
      out.clear();
      for (const auto &e : *v) {
        if (!e.is_string())
          throw ConfigError("'" + where(key) + "' must be an array of shape names");
        out.push_back(guarded(key, [&] { return shape_from_string(e.get<std::string>()); }));
      }
    }
  }

  template <class F> void section(const std::string &key, F &&body) {
    if (auto v = find(key)) {
      Section sub(*v, where(key));
      body(sub);
      sub.done();
    }
  }

private:
  const Json &obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Json names(const std::vector<Shape> &shapes) {
  Json out = Json::array();
  for (auto s : shapes)
    out.push_back(std::string(to_string(s)));
  return out;
}

void require(bool ok, const std::string &message) {
  if (!ok)
    throw ConfigError(message);
}

void require_decreasing(const std::vector<double> &eps, const std::string &what) {
  require(!eps.empty(), what + " must not be empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0, what + " must be positive");
    require(i == 0 || eps[i] < eps[i - 1], what + " must be strictly decreasing");
  }
}

} // namespace

Json RunConfig::to_json() const {
  Json j;
  j["params"] = Json{{"hbar", params.hbar},
                     {"mass", params.mass},
                     {"c", params.c},
                     {"v0", params.v0}};
  j["seed"] = seed;
  j["mode"] = Json{{"theory", std::string(to_string(mode.theory))},
                   {"energy", mode.energy}};
  j["converge"] = Json{{"theory", std::string(to_string(converge.theory))},
                       {"energy", converge.energy},
                       {"shapes", names(converge.shapes)},
                       {"epsilons", converge.epsilons},
                       {"half_length", converge.solver.half_length},
                       {"resolution", converge.solver.resolution}};
  j["limits"] = Json{
      {"kind", limits.kind},
      {"nonrel", Json{{"e_nr", limits.nonrel.e_nr},
                      {"v0", limits.nonrel.v0},
                      {"c_list", limits.nonrel.c_list}}},
      {"infinite_step", Json{{"energy", limits.infinite_step.energy},
                             {"v0_list", limits.infinite_step.v0_list}}},
      {"weak_product", Json{{"energy", limits.weak_product.energy},
                            {"v0", limits.weak_product.v0},
                            {"window", limits.weak_product.window},
                            {"shape", std::string(to_string(limits.weak_product.shape))},
                            {"epsilons", limits.weak_product.epsilons}}}};
  j["ehrenfest"] = Json{{"epsilon", ehrenfest.epsilon},
                        {"shape", std::string(to_string(ehrenfest.shape))},
                        {"x0", ehrenfest.x0},
                        {"sigma", ehrenfest.sigma},
                        {"k0", ehrenfest.k0},
                        {"x_min", ehrenfest.grid.x_min},
                        {"x_max", ehrenfest.grid.x_max},
                        {"n_points", ehrenfest.grid.n_points},
                        {"dt", ehrenfest.dt},
                        {"n_steps", ehrenfest.n_steps},
                        {"row_stride", ehrenfest.row_stride}};
  j["report"] = Json{{"random_draws", report.random_draws},
                     {"jumps", Json{{"energy", report.jumps.energy},
                                    {"delta", report.jumps.delta},
                                    {"shape", std::string(to_string(report.jumps.shape))},
                                    {"epsilons", report.jumps.epsilons}}}};
  return j;
}

RunConfig parse_config(const Json &document) {
  RunConfig cfg;
  {
    Section root(document, "");
    root.section("params", [&](Section &s) {
      bool natural = false;
      s.boolean("natural_units", natural);
      s.number("hbar", cfg.params.hbar);
      s.number("mass", cfg.params.mass);
      s.number("c", cfg.params.c);
      s.number("v0", cfg.params.v0);
      if (natural && !cfg.params.natural_units())
        throw ConfigError("'params.natural_units' conflicts with explicit hbar, mass or c");
    });
    root.integer("seed", cfg.seed);
    root.section("mode", [&](Section &s) {
      s.theory("theory", cfg.mode.theory);
      s.number("energy", cfg.mode.energy);
    });
    root.section("converge", [&](Section &s) {
      s.theory("theory", cfg.converge.theory);
      s.number("energy", cfg.converge.energy);
      s.shapes("shapes", cfg.converge.shapes);
      s.numbers("epsilons", cfg.converge.epsilons);
      s.number("half_length", cfg.converge.solver.half_length);
      s.integer("resolution", cfg.converge.solver.resolution);
    });
    root.section("limits", [&](Section &s) {
      s.string("kind", cfg.limits.kind);
      s.section("nonrel", [&](Section &n) {
        n.number("e_nr", cfg.limits.nonrel.e_nr);
        n.number("v0", cfg.limits.nonrel.v0);
        n.numbers("c_list", cfg.limits.nonrel.c_list);
      });
      s.section("infinite_step", [&](Section &n) {
        n.number("energy", cfg.limits.infinite_step.energy);
        n.numbers("v0_list", cfg.limits.infinite_step.v0_list);
      });
      s.section("weak_product", [&](Section &n) {
        n.number("energy", cfg.limits.weak_product.energy);
        n.number("v0", cfg.limits.weak_product.v0);
        n.number("window", cfg.limits.weak_product.window);
        n.shape("shape", cfg.limits.weak_product.shape);
        n.numbers("epsilons", cfg.limits.weak_product.epsilons);
      });
    });
    root.section("ehrenfest", [&](Section &s) {
      auto &e = cfg.ehrenfest;
      s.number("epsilon", e.epsilon);
      s.shape("shape", e.shape);
      s.number("x0", e.x0);
      s.number("sigma", e.sigma);
      s.number("k0", e.k0);
      s.number("x_min", e.grid.x_min);
      s.number("x_max", e.grid.x_max);
      s.integer("n_points", e.grid.n_points);
      s.number("dt", e.dt);
      s.integer("n_steps", e.n_steps);
      s.integer("row_stride", e.row_stride);
    });
    root.section("report", [&](Section &s) {
      s.integer("random_draws", cfg.report.random_draws);
      s.section("jumps", [&](Section &n) {
        n.number("energy", cfg.report.jumps.energy);
        n.number("delta", cfg.report.jumps.delta);
        n.shape("shape", cfg.report.jumps.shape);
        n.numbers("epsilons", cfg.report.jumps.epsilons);
      });
    });
    root.done();
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception &e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

void validate(const RunConfig &c) {
  const auto &p = c.params;
  require(p.hbar > 0.0 && p.mass > 0.0 && p.c > 0.0,
          "params.hbar, params.mass and params.c must be positive");
  require(std::isfinite(p.v0), "params.v0 must be finite");
  require_decreasing(c.converge.epsilons, "converge.epsilons");
  require(!c.converge.shapes.empty(), "converge.shapes must not be empty");
  require(c.converge.solver.resolution > 0, "converge.resolution must be positive");
  require(c.limits.kind == "nonrel" || c.limits.kind == "infinite-step",
          "limits.kind must be 'nonrel' or 'infinite-step'");
  require(!c.limits.nonrel.c_list.empty(), "limits.nonrel.c_list must not be empty");
  for (double v : c.limits.nonrel.c_list)
    require(v > 0.0, "limits.nonrel.c_list entries must be positive");
  require(!c.limits.infinite_step.v0_list.empty(),
          "limits.infinite_step.v0_list must not be empty");
  require_decreasing(c.limits.weak_product.epsilons, "limits.weak_product.epsilons");
  require(c.ehrenfest.grid.n_points >= 2 && c.ehrenfest.grid.x_min < c.ehrenfest.grid.x_max,
          "ehrenfest grid needs n_points >= 2 and x_min < x_max");
  require(c.ehrenfest.dt > 0.0 && c.ehrenfest.n_steps >= 2,
          "ehrenfest.dt must be positive and n_steps >= 2");
  require(c.ehrenfest.epsilon > 0.0, "ehrenfest.epsilon must be positive");
  require(c.ehrenfest.row_stride >= 1, "ehrenfest.row_stride must be at least 1");
  require(c.report.random_draws >= 1, "report.random_draws must be at least 1");
  require_decreasing(c.report.jumps.epsilons, "report.jumps.epsilons");
}

} // namespace stepforce

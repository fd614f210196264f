#include "stepforce/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace stepforce {

std::string format_double(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void emit(const Json &v, int indent, int depth, std::string &out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (v.type()) {
  case Json::value_t::object: {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first)
        out += ",\n";
      first = false;
      out += pad + Json(it.key()).dump() + ": ";
      emit(it.value(), indent, depth + 1, out);
    }
    out += "\n" + close_pad + "}";
    return;
  }
  case Json::value_t::array: {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i)
        out += ",\n";
      out += pad;
      emit(v[i], indent, depth + 1, out);
    }
    out += "\n" + close_pad + "]";
    return;
  }
  case Json::value_t::number_float: {
    const double d = v.get<double>();
    out += std::isfinite(d) ? format_double(d) : "null";
    return;
  }
  default:
    out += v.dump();
  }
}

} // namespace

std::string dump_json(const Json &value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  out += "\n";
  return out;
}

CsvTable &CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::logic_error("csv row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i)
        out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto &r : rows_)
    line(r);
  return out;
}

Json to_json(cplx value) { return Json{{"re", value.real()}, {"im", value.imag()}}; }

Json to_json(const PhysicalParams &p) {
  return Json{{"hbar", p.hbar},
              {"mass", p.mass},
              {"c", p.c},
              {"v0", p.v0},
              {"natural_units", p.natural_units()},
              {"rest_energy", p.rest_energy()}};
}

Json to_json(const MeanForceReport &r) {
  Json j;
  j["theory"] = std::string(to_string(r.theory));
  j["energy"] = r.energy;
  j["v0"] = r.v0;
  j["regime"] = std::string(to_string(r.regime));
  j["r"] = to_json(r.r);
  j["t"] = to_json(r.t);
  j["rho_left"] = r.rho_left;
  j["rho_right"] = r.rho_right;
  j["density_jump"] = r.rho_right - r.rho_left;
  j["route_a"] = r.route_a;
  j["route_a_scalar_form"] = r.route_a_scalar_form;
  j["route_c"] = Json{{"kinetic_term", r.route_c.kinetic_term},
                      {"mass_term", r.route_c.mass_term},
                      {"potential_term", r.route_c.potential_term}};
  j["identity_residual"] = r.identity_residual;
  j["mass_term_residual"] = r.mass_term_residual;
  j["kinetic_jump"] = r.kinetic_jump;
  j["delta_integral"] = Json{{"half_jump", r.delta_integral.half_jump},
                             {"midpoint", r.delta_integral.midpoint},
                             {"left_value", r.delta_integral.left_value},
                             {"right_value", r.delta_integral.right_value}};
  return j;
}

Json to_json(const ConvergenceSeries &s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.epsilons.size(); ++i)
    rows.push_back(Json{{"epsilon", s.epsilons[i]},
                        {"value", s.values[i]},
                        {"defect", s.defects[i]}});
  return Json{{"theory", std::string(to_string(s.theory))},
              {"energy", s.energy},
              {"v0", s.v0},
              {"shape", std::string(to_string(s.shape))},
              {"rows", rows}};
}

Json to_json(const Extrapolation &e) {
  return Json{{"limit", e.limit}, {"order", e.order}, {"error_estimate", e.error_estimate}};
}

Json to_json(const NonrelTable &t) {
  Json rows = Json::array();
  for (const auto &r : t.rows)
    rows.push_back(Json{{"c", r.c},
                        {"energy", r.energy},
                        {"residual_density", r.residual_density},
                        {"residual_force", r.residual_force},
                        {"tag", r.tag}});
  return Json{{"e_nr", t.e_nr},
              {"v0", t.v0},
              {"rows", rows},
              {"slope_density", t.slope_density},
              {"slope_force", t.slope_force}};
}

Json to_json(const InfiniteStepTable &t) {
  Json rows = Json::array();
  for (const auto &r : t.rows)
    rows.push_back(Json{{"v0", r.v0},
                        {"route_a", r.route_a},
                        {"exact", r.exact},
                        {"identity_residual", r.identity_residual},
                        {"candidate", r.candidate},
                        {"candidate_error", r.candidate_error}});
  return Json{{"energy", t.energy},
              {"rows", rows},
              {"rejected_v0", t.rejected},
              {"slope", t.slope}};
}

Json to_json(const WeakProductCheck &c) {
  return Json{{"epsilon", c.epsilon},
              {"window", c.window},
              {"integral", to_json(c.integral)},
              {"target", to_json(c.target)},
              {"deviation", c.deviation}};
}

Json to_json(const JumpRecord &r) {
  auto vec = [](const Spinor &s) { return Json::array({to_json(s(0)), to_json(s(1))}); };
  return Json{{"jump_psi", vec(r.jump_psi)},
              {"jump_psix", vec(r.jump_psix)},
              {"projected_psi", vec(r.projected_psi)},
              {"projected_psix", vec(r.projected_psix)},
              {"predicted_psi", vec(r.predicted_psi)},
              {"predicted_psix", vec(r.predicted_psix)},
              {"ratio_psi", r.ratio_psi},
              {"ratio_psix", r.ratio_psix},
              {"deviation_psi", r.deviation_psi},
              {"deviation_psix", r.deviation_psix},
              {"component_ratio", to_json(r.component_ratio)}};
}

Json to_json(const EhrenfestReport &r) {
  return Json{{"steps", static_cast<long>(r.rows.size()) + 2},
              {"max_deviation", r.max_deviation},
              {"peak_force", r.peak_force},
              {"relative_deviation", r.relative_deviation()},
              {"max_norm_drift", r.max_norm_drift},
              {"max_wall_amplitude", r.max_wall_amplitude}};
}

CsvTable convergence_csv(const std::vector<ConvergenceSeries> &series) {
  CsvTable t({"theory", "E", "V0", "shape", "epsilon", "value", "defect"});
  for (const auto &s : series)
    for (std::size_t i = 0; i < s.epsilons.size(); ++i)
      t.row({cell(to_string(s.theory)), cell(s.energy), cell(s.v0),
             cell(to_string(s.shape)), cell(s.epsilons[i]), cell(s.values[i]),
             cell(s.defects[i])});
  return t;
}

CsvTable ehrenfest_csv(const EhrenfestReport &r, long stride) {
  CsvTable t({"t", "px_expect", "dpdt", "force_expect", "norm"});
  const std::size_t step = static_cast<std::size_t>(std::max(1L, stride));
  for (std::size_t i = 0; i < r.rows.size(); i += step) {
    const auto &row = r.rows[i];
    t.row({cell(row.t), cell(row.px_expect), cell(row.dpdt), cell(row.force_expect),
           cell(row.norm)});
  }
  return t;
}

CsvTable nonrel_csv(const NonrelTable &table) {
  CsvTable t({"c", "E", "residual_density", "residual_force", "tag"});
  for (const auto &r : table.rows)
    t.row({cell(r.c), cell(r.energy), cell(r.residual_density),
           cell(r.residual_force), cell(r.tag)});
  return t;
}

CsvTable infinite_step_csv(const InfiniteStepTable &table) {
  CsvTable t({"V0", "route_a", "exact", "identity_residual", "candidate",
              "candidate_error"});
  for (const auto &r : table.rows)
    t.row({cell(r.v0), cell(r.route_a), cell(r.exact), cell(r.identity_residual),
           cell(r.candidate), cell(r.candidate_error)});
  return t;
}

CsvTable weak_product_csv(const std::vector<WeakProductCheck> &checks) {
  CsvTable t({"epsilon", "window", "integral_re", "integral_im", "target_re",
              "target_im", "deviation"});
  for (const auto &c : checks)
    t.row({cell(c.epsilon), cell(c.window), cell(c.integral.real()),
           cell(c.integral.imag()), cell(c.target.real()), cell(c.target.imag()),
           cell(c.deviation)});
  return t;
}

CsvTable mode_csv(const MeanForceReport &r) {
  CsvTable t({"theory", "E", "V0", "regime", "r_re", "r_im", "t_re", "t_im",
              "rho_left", "rho_right", "density_jump", "route_a",
              "route_a_scalar_form", "kinetic_term", "mass_term", "potential_term",
              "identity_residual", "half_jump", "midpoint", "left_value",
              "right_value"});
  t.row({cell(to_string(r.theory)), cell(r.energy), cell(r.v0),
         cell(to_string(r.regime)), cell(r.r.real()), cell(r.r.imag()),
         cell(r.t.real()), cell(r.t.imag()), cell(r.rho_left), cell(r.rho_right),
         cell(r.rho_right - r.rho_left), cell(r.route_a), cell(r.route_a_scalar_form),
         cell(r.route_c.kinetic_term), cell(r.route_c.mass_term),
         cell(r.route_c.potential_term), cell(r.identity_residual),
         cell(r.delta_integral.half_jump), cell(r.delta_integral.midpoint),
         cell(r.delta_integral.left_value), cell(r.delta_integral.right_value)});
  return t;
}

} // namespace stepforce

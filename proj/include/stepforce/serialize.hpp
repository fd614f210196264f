#pragma once

#include "stepforce/force.hpp"
#include "stepforce/limits.hpp"
#include "stepforce/timeevo.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace stepforce {

using Json = nlohmann::ordered_json;

//! 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

//! Deterministic JSON text: keys in insertion order, floats with 17
//! significant digits, non-finite floats as null. Ends with a newline.
std::string dump_json(const Json &value, int indent = 2);

//! Small CSV table; cells are preformatted strings.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable &row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t size() const { return rows_.size(); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(long v) { return std::to_string(v); }
inline std::string cell(std::string v) { return v; }
inline std::string cell(std::string_view v) { return std::string(v); }

Json to_json(cplx value);
Json to_json(const PhysicalParams &params);
Json to_json(const MeanForceReport &report);
Json to_json(const ConvergenceSeries &series);
Json to_json(const Extrapolation &fit);
Json to_json(const NonrelTable &table);
Json to_json(const InfiniteStepTable &table);
Json to_json(const WeakProductCheck &check);
Json to_json(const JumpRecord &record);
//! Summary fields only; the time series goes to CSV.
Json to_json(const EhrenfestReport &report);

//! Columns: theory, E, V0, shape, epsilon, value, defect.
CsvTable convergence_csv(const std::vector<ConvergenceSeries> &series);
//! Columns: t, px_expect, dpdt, force_expect, norm. Every `stride`-th row.
CsvTable ehrenfest_csv(const EhrenfestReport &report, long stride = 1);
CsvTable nonrel_csv(const NonrelTable &table);
CsvTable infinite_step_csv(const InfiniteStepTable &table);
CsvTable weak_product_csv(const std::vector<WeakProductCheck> &checks);
CsvTable mode_csv(const MeanForceReport &report);

} // namespace stepforce

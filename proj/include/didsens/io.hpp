#pragma once

#include "didsens/breakdown.hpp"
#include "didsens/estimation.hpp"
#include "didsens/inference.hpp"
#include "didsens/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace didsens {

// Shortest text that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double v);
double parse_double(const std::string& s);

nlohmann::json to_json(const ReducedForm& gamma);
ReducedForm reduced_form_from_json(const nlohmann::json& j);
ReducedForm read_reduced_form(const std::string& path);

nlohmann::json to_json(const Interval& iv);
nlohmann::json to_json(const FrontierGrid& grid);
nlohmann::json to_json(const LowerBand& band);
nlohmann::json to_json(const CredibleSet& cs);
// Doubles that may be infinite are written as strings.
nlohmann::json json_number(double v);

// Draws CSV: header delta_<s>... ,theta1; one row per draw.
void write_draws_csv(std::ostream& out, const PosteriorDraws& draws);
// Binary layout (little-endian): "DIDSDRW1", u64 rows, u64 cols, u64 seed,
// u64 rejections, u64 method (0 bayesian, 1 frequentist, 2 other), then
// rows*cols f64 values in column-major order.
void write_draws_binary(std::ostream& out, const PosteriorDraws& draws);
// Detects the format from the first bytes.
PosteriorDraws read_draws(const std::string& path);

void write_frontier_csv(std::ostream& out, const FrontierGrid& grid);
// Header cells are "<lo>:<hi>" per grid point; rows are draws.
void write_frontier_draws_csv(std::ostream& out, const std::vector<SensitivityPoint>& axis,
                              const Matrix& values);
Matrix read_frontier_draws_csv(const std::string& path, std::vector<SensitivityPoint>& axis);
void write_band_csv(std::ostream& out, const LowerBand& band);

// Writes to path + ".tmp" then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace didsens

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sasaki/einstein.hpp"
#include "sasaki/potential.hpp"
#include "sasaki/solver.hpp"
#include "sasaki/structure.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

nlohmann::json point_to_json(const ChartPoint& p);
nlohmann::json newton_report_to_json(const NewtonReport& r);
nlohmann::json classify_to_json(const PotentialSpec& spec,
                                const ClassifySummary& s,
                                std::uint64_t seed);

// Per-point verification rows {point, axiom1..axiom6, deta, frobenius,
// killing} plus summary maxima.
struct VerifyRow {
  ChartPoint point;
  AxiomResiduals axioms;
  FrameResiduals frame;
  double killing = 0.0;
};

nlohmann::json verify_rows_to_json(const PotentialSpec& spec,
                                   const std::vector<VerifyRow>& rows,
                                   std::uint64_t seed, double tol,
                                   double nijenhuis_tol);

void write_text(const std::string& path, const std::string& content);
void write_grid_csv(const std::string& path, const GridField& grid);
nlohmann::json grid_header_json(const GridField& grid, double c, int k);
void write_radial_csv(const std::string& path, const RadialProfile& p);

}  // namespace sasaki

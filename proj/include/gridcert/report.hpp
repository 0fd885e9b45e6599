#pragma once

#include <ostream>
#include <string>

#include "gridcert/certify.hpp"
#include "gridcert/io.hpp"
#include "gridcert/sim.hpp"

namespace gridcert {

/// 12 significant digits; "inf"/"-inf"/"nan" for non-finite values.
[[nodiscard]] std::string fmt(double v);

void write_report_txt(std::ostream& os, const NetworkFile& file, const Plant& plant, const CertificationReport& rep,
                      const CertificationConfig& cfg);
void write_report_csv(std::ostream& os, const Plant& plant, const CertificationReport& rep);

/// Bode data of one bus at one rho: data rows then a summary row.
void write_sweep_csv(std::ostream& os, const Plant& plant, int bus, double rho, const CertificationConfig& cfg);

/// Writes every `stride`-th sample plus the last one.
void write_sim_csv(std::ostream& os, const Plant& plant, const ClosedLoop& cl, const SimResult& r, int stride = 1);

void write_design_csv(std::ostream& os, const Plant& plant, const CertificationConfig& cfg);

}  // namespace gridcert

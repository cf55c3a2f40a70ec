#pragma once

#include "sisctl/certificates.hpp"
#include "sisctl/equilibrium.hpp"
#include "sisctl/graph.hpp"
#include "sisctl/spectral.hpp"

#include <nlohmann/json.hpp>

namespace sisctl {

/// Keys: rho_A, rho_M, rho_M_closed (nullable), r0, regime, predicted_equilibrium.
nlohmann::json to_json(const RegimeReport& report);
/// Keys: trials, max_pairwise_distance, agreed, limit.
nlohmann::json to_json(const ProbeReport& report);
nlohmann::json to_json(const AssumptionReport& report);
nlohmann::json to_json(const LyapunovCertificate& certificate);
/// Summary only; the V(k) sequence is omitted.
nlohmann::json to_json(const DescentReport& report);
/// Summary only; per-step records go to the audit log CSV.
nlohmann::json to_json(const EndemicAudit& audit);
nlohmann::json to_json(const BoundReport& report);

nlohmann::json vector_to_json(const Vector& v);

}  // namespace sisctl

#include "sisctl/serialize.hpp"

#include <cmath>

namespace sisctl {

namespace {

nlohmann::json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json finite_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json indices_to_json(const std::vector<StateIndex>& list)
{
    auto out = nlohmann::json::array();
    for (const auto& s : list)
        out.push_back({{"k", s.k}, {"agent", s.agent}});
    return out;
}

}  // namespace

nlohmann::json vector_to_json(const Vector& v)
{
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

nlohmann::json to_json(const RegimeReport& report)
{
    nlohmann::json j;
    j["rho_A"] = report.rho_a;
    j["rho_M"] = report.rho_m;
    j["rho_M_closed"] = optional_number(report.rho_m_closed);
    j["r0"] = report.r0;
    j["regime"] = std::string(to_string(report.regime));
    j["predicted_equilibrium"] = optional_number(report.predicted_equilibrium);
    return j;
}

nlohmann::json to_json(const ProbeReport& report)
{
    return {{"trials", report.trials},
            {"max_pairwise_distance", report.max_pairwise_distance},
            {"agreed", report.agreed},
            {"limit", vector_to_json(report.limit)}};
}

nlohmann::json to_json(const AssumptionReport& report)
{
    return {{"a1_strongly_connected", report.a1_strongly_connected},
            {"a2_initial_in_range", report.a2_initial_in_range},
            {"a3_dt_small", report.a3_dt_small},
            {"a3_dt_gamma", report.a3_dt_gamma},
            {"a3_dt_beta_rho", report.a3_dt_beta_rho},
            {"a3_dt_rate_sum", report.a3_dt_rate_sum},
            {"a3_advisory", report.a3_advisory},
            {"a4_row_stochastic_diag", report.a4_row_stochastic_diag},
            {"messages", report.messages}};
}

nlohmann::json to_json(const LyapunovCertificate& certificate)
{
    return {{"p_diag", vector_to_json(certificate.p_diag)},
            {"margin", certificate.margin},
            {"strict", certificate.strict},
            {"rho", certificate.rho},
            {"evaluations", certificate.evaluations}};
}

nlohmann::json to_json(const DescentReport& report)
{
    nlohmann::json j;
    j["steps_checked"] = report.steps_checked;
    j["strictly_decreasing"] = report.strictly_decreasing;
    j["min_decrement"] = optional_number(report.min_decrement);
    j["first_failure"] = report.first_failure ? nlohmann::json(*report.first_failure) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const EndemicAudit& audit)
{
    nlohmann::json j;
    j["x_bar"] = audit.x_bar;
    j["d_row_sum_error"] = audit.d_row_sum_error;
    j["rho_D"] = finite_or_null(audit.rho_d);
    j["v"] = vector_to_json(audit.v);
    j["v_positive"] = audit.v_positive;
    j["steps"] = audit.phi_checks.size();
    j["phi_nonnegative"] = audit.phi_nonnegative;
    j["phi_minus_d_signs_ok"] = audit.phi_minus_d_signs_ok;
    j["descent_ok"] = audit.descent_ok;
    j["first_descent_failure"] =
        audit.first_descent_failure ? nlohmann::json(*audit.first_descent_failure) : nlohmann::json(nullptr);
    j["min_descent_margin"] = optional_number(audit.min_descent_margin);
    j["sandwich_ok"] = audit.sandwich_ok;
    j["first_sandwich_failure"] =
        audit.first_sandwich_failure ? nlohmann::json(*audit.first_sandwich_failure) : nlohmann::json(nullptr);
    j["V_initial"] = audit.lyap_sequence.empty() ? nlohmann::json(nullptr) : nlohmann::json(audit.lyap_sequence.front());
    j["V_final"] = audit.lyap_sequence.empty() ? nlohmann::json(nullptr) : nlohmann::json(audit.lyap_sequence.back());
    j["warnings"] = audit.warnings;
    j["passed"] = audit.passed();
    return j;
}

nlohmann::json to_json(const BoundReport& report)
{
    nlohmann::json j;
    j["max_state"] = report.max_state;
    j["argmax"] = {{"k", report.argmax.k}, {"agent", report.argmax.agent}};
    j["bound_holds"] = report.bound_holds;
    j["violation_count"] = report.violation_count;
    j["violations"] = indices_to_json(report.violations);
    j["cap_checked"] = report.cap_checked;
    j["cap_threshold"] = report.cap_threshold;
    j["cap_checks"] = report.cap_checks;
    j["cap_violation_count"] = report.cap_violation_count;
    j["cap_violations"] = indices_to_json(report.cap_violations);
    j["cap_holds"] = report.cap_holds;
    return j;
}

}  // namespace sisctl

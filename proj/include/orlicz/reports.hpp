#pragma once
// JSON/CSV assembly for every pipeline result. Reports carry the toolkit
// version, the grids behind each constant, and the budget mode; they never
// carry timestamps, so a fixed seed reproduces files byte for byte.

#include <string>

#include "json.hpp"

#include "orlicz/embeddings.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/rigidity_basis.hpp"
#include "orlicz/rigidity_disjoint.hpp"
#include "orlicz/spectra_age.hpp"

namespace orlicz {

using nlohmann::json;

const char* mode_name(BudgetMode mode);

json grid_json(const GridSpec& g);
json vec_json(const Vec& v);

// Sub-double budgets serialize as the double value plus a log10 companion,
// since the interesting cascades sit far below DBL_MIN.
void put_budget(json& j, const std::string& key, Budget v);
// Same key pair, but the log10 companion comes from the structurally
// accumulated field instead of the (possibly underflowed) value.
void put_scaled(json& j, const std::string& key, Budget v, double log10_v);

json good_report_json(const GoodReport& r);
json cascade_json(const CascadeConstants& c);
json rigidity_budget_json(const RigidityBudget& b);
json alpha_certificate_json(const AlphaCertificate& c);
json basis_budget_json(const BasisBudget& b);
json witness_pair_json(const WitnessPair& w);
json basis_witness_json(const BasisWitness& w);
json distortion_json(const DistortionEstimate& d);
json ratio_bounds_json(const RatioBounds& rb);
json boyd_json(const BoydIndices& b);
json age_json(const AgeReport& r);
json transitivity_json(const TransitivityReport& r);

std::string age_csv(const AgeReport& r);
std::string transitivity_csv(const TransitivityReport& r);

// {"toolkit_version", "command", "config", ...payload} with sorted keys.
json report_envelope(const std::string& command, const json& config, json payload);

std::string dump_json(const json& j);
void write_text(const std::string& path, const std::string& content);

}  // namespace orlicz

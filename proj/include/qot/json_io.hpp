#pragma once

#include <string>

#include <json.hpp>

#include "qot/recovery.hpp"
#include "qot/solver.hpp"

namespace qot {

using json = nlohmann::json;

// Shared matrix encoding: {"rows", "cols", "entries"} with entries a flat
// row-major array of [re, im] pairs. All other schemas build on it.
json to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const json& j);

json to_json(const DensityMatrix& rho);        // {"dim", "mat"}
DensityMatrix state_from_json(const json& j);

json to_json(const KrausChannel& phi);         // {"din", "dout", "kraus"}
KrausChannel channel_from_json(const json& j);

json to_json(const ObservableSet& obs);        // {"dim", "observables"}
ObservableSet observables_from_json(const json& j);

json to_json(const Coupling& pi);  // {"d", "mat", "first_marginal", "second_marginal_T"}
Coupling coupling_from_json(const json& j);

// Reported costs clamp tiny negative rounding noise to zero; internal values
// are never clamped.
json to_json(const CostReport& report);
json to_json(const TheoremReport& report);
json to_json(const SolverResult& result);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace qot

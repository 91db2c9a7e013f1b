#include "qot/json_io.hpp"

#include <fstream>

namespace qot {

namespace {

double clamp_report_cost(double v) { return (v < 0.0 && v > -1e-10) ? 0.0 : v; }

const json& expect_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(errc::io, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t expect_positive(const json& j, const char* key) {
  const json& v = expect_field(j, key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    fail(errc::io, std::string("field \"") + key + "\" must be a positive integer");
  return v.get<std::size_t>();
}

}  // namespace

json to_json(const CMatrix& m) {
  json entries = json::array();
  for (const cx& z : m.entries()) entries.push_back({z.real(), z.imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMatrix cmatrix_from_json(const json& j) {
  const std::size_t rows = expect_positive(j, "rows");
  const std::size_t cols = expect_positive(j, "cols");
  const json& entries = expect_field(j, "entries");
  if (!entries.is_array() || entries.size() != rows * cols)
    fail(errc::io, "entries array does not match rows*cols");
  std::vector<cx> data;
  data.reserve(entries.size());
  for (const json& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(errc::io, "matrix entry is not an [re, im] pair");
    data.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  CMatrix m(rows, cols, std::move(data));
  if (!m.is_finite()) fail(errc::io, "matrix has non-finite entries");
  return m;
}

json to_json(const DensityMatrix& rho) {
  return json{{"dim", rho.dim()}, {"mat", to_json(rho.mat())}};
}

DensityMatrix state_from_json(const json& j) {
  const std::size_t dim = expect_positive(j, "dim");
  CMatrix m = cmatrix_from_json(expect_field(j, "mat"));
  if (m.rows() != dim || m.cols() != dim) fail(errc::io, "state matrix is not dim-by-dim");
  return DensityMatrix::validated(m);
}

json to_json(const KrausChannel& phi) {
  json kraus = json::array();
  for (const CMatrix& k : phi.kraus()) kraus.push_back(to_json(k));
  return json{{"din", phi.din()}, {"dout", phi.dout()}, {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_json(const json& j) {
  const std::size_t din = expect_positive(j, "din");
  const std::size_t dout = expect_positive(j, "dout");
  const json& list = expect_field(j, "kraus");
  if (!list.is_array() || list.empty()) fail(errc::io, "kraus must be a nonempty array");
  std::vector<CMatrix> kraus;
  kraus.reserve(list.size());
  for (const json& k : list) kraus.push_back(cmatrix_from_json(k));
  return KrausChannel::validated(std::move(kraus), din, dout);
}

json to_json(const ObservableSet& obs) {
  json list = json::array();
  for (const CMatrix& a : obs.observables()) list.push_back(to_json(a));
  return json{{"dim", obs.dim()}, {"observables", std::move(list)}};
}

ObservableSet observables_from_json(const json& j) {
  const std::size_t dim = expect_positive(j, "dim");
  const json& list = expect_field(j, "observables");
  if (!list.is_array() || list.empty()) fail(errc::io, "observables must be a nonempty array");
  std::vector<CMatrix> obs;
  obs.reserve(list.size());
  for (const json& a : list) obs.push_back(cmatrix_from_json(a));
  ObservableSet set = ObservableSet::validated(std::move(obs));
  if (set.dim() != dim) fail(errc::io, "observable dimension differs from dim");
  return set;
}

json to_json(const Coupling& pi) {
  return json{{"d", pi.d()},
              {"mat", to_json(pi.mat())},
              {"first_marginal", to_json(pi.first_marginal().mat())},
              {"second_marginal_T", to_json(pi.second_marginal_T())}};
}

Coupling coupling_from_json(const json& j) {
  const std::size_t d = expect_positive(j, "d");
  CMatrix mat = cmatrix_from_json(expect_field(j, "mat"));
  Coupling pi = Coupling::validated(mat, d);
  // The cached marginals are recomputed on load; cross-check the file's copy
  // when present so silent corruption does not pass unnoticed.
  if (j.contains("first_marginal")) {
    const CMatrix stored = cmatrix_from_json(j["first_marginal"]);
    if (max_abs_diff(stored, pi.first_marginal().mat()) > 1e-8)
      fail(errc::io, "coupling file: first_marginal does not match the matrix");
  }
  if (j.contains("second_marginal_T")) {
    const CMatrix stored = cmatrix_from_json(j["second_marginal_T"]);
    if (max_abs_diff(stored, pi.second_marginal_T()) > 1e-8)
      fail(errc::io, "coupling file: second_marginal_T does not match the matrix");
  }
  return pi;
}

json to_json(const CostReport& report) {
  json per = json::array();
  for (double t : report.per_observable) per.push_back(clamp_report_cost(t));
  return json{{"coupling_cost", clamp_report_cost(report.coupling_cost)},
              {"channel_cost", clamp_report_cost(report.channel_cost)},
              {"per_observable", std::move(per)},
              {"consistency_residual", report.consistency_residual}};
}

json to_json(const TheoremReport& report) {
  return json{{"st_vs_rec_trace_distance", report.st_vs_rec_trace_distance},
              {"recovery_residual", report.recovery_residual},
              {"cost_gap", report.cost_gap},
              {"matrix_unit_max_dev", report.matrix_unit_max_dev},
              {"dims_and_ranks",
               {{"d", report.d},
                {"rank_rho", report.rank_rho},
                {"rank_omega", report.rank_omega},
                {"kraus_rank", report.kraus_rank}}},
              {"borderline", report.borderline},
              {"pass", report.pass},
              {"tolerances",
               {{"thm", report.tol.thm},
                {"rec", report.tol.rec},
                {"cost", report.tol.cost},
                {"unit", report.tol.unit}}}};
}

json to_json(const SolverResult& result) {
  return json{{"value", clamp_report_cost(result.value)},
              {"feasibility_residual", result.feasibility_residual},
              {"per_restart_values", result.per_restart_values},
              {"iterations_used", result.iterations_used},
              {"coupling", to_json(result.coupling)}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(errc::io, "parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(errc::io, "write failed for " + path);
}

}  // namespace qot

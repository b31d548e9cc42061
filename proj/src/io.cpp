#include "cycloproj/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cycloproj {
namespace {

cplx entry_from_json(const nlohmann::json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw PreconditionError("expected a number or a [re, im] pair, got " + e.dump());
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("grid: cannot parse '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw PreconditionError("grid: cannot parse '" + s + "'");
  return v;
}

}  // namespace

nlohmann::json system_to_json(const SubspaceSystem& sys) {
  nlohmann::json subs = nlohmann::json::array();
  for (const Subspace& s : sys.subspaces()) {
    nlohmann::json flat = nlohmann::json::array();
    for (const CVector& v : s.basis())
      for (const cplx& z : v) flat.push_back({z.real(), z.imag()});
    subs.push_back(std::move(flat));
  }
  return {{"ambient_dim", sys.ambient_dim()}, {"subspaces", std::move(subs)}};
}

SubspaceSystem system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("subspaces")) {
    throw PreconditionError("system JSON needs \"ambient_dim\" and \"subspaces\"");
  }
  if (!j["ambient_dim"].is_number_unsigned() || j["ambient_dim"].get<std::size_t>() == 0) {
    throw PreconditionError("ambient_dim must be a positive integer");
  }
  const std::size_t d = j["ambient_dim"].get<std::size_t>();
  if (!j["subspaces"].is_array()) throw PreconditionError("subspaces must be an array");
  std::vector<Subspace> subs;
  for (const auto& flat : j["subspaces"]) {
    if (!flat.is_array() || flat.size() % d != 0) {
      throw PreconditionError("each subspace must list a multiple of ambient_dim entries");
    }
    std::vector<CVector> vectors(flat.size() / d, CVector(d));
    for (std::size_t k = 0; k < flat.size(); ++k) vectors[k / d][k % d] = entry_from_json(flat[k]);
    subs.push_back(Subspace::span(d, vectors));
  }
  return SubspaceSystem(d, std::move(subs));
}

CVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw PreconditionError("start vector must be a non-empty array");
  CVector v;
  for (const auto& e : j) v.push_back(entry_from_json(e));
  return v;
}

nlohmann::json solve_result_to_json(const SolveResult& r) {
  const RealMatrix& a = r.optimum.matrix();
  std::vector<double> flat(a.data().begin(), a.data().end());
  auto number_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"n", r.spec.n},
          {"c", r.spec.c},
          {"t", r.spec.t},
          {"f_estimate", r.f_estimate},
          {"optimum", flat},
          {"certificate_value", number_or_null(r.certificate_value)},
          {"certificate_gap", number_or_null(r.certificate_gap)},
          {"witness_product_norm", r.witness_product_norm},
          {"witness_dixmier", r.witness_dixmier},
          {"starts_used", r.starts_used},
          {"iterations", r.iterations},
          {"seed", r.seed}};
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const MapTrace& trace) {
  os << "sweep,error,ratio\n";
  for (std::size_t k = 1; k < trace.errors.size(); ++k) {
    os << k << ',' << format_number(trace.errors[k]) << ',' << format_number(trace.contraction[k - 1]) << '\n';
  }
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "n,c,f_closed,f_solver,lb_construction,ub_ours,ub_bgm,ub_bs,ub_quadratic\n";
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  for (const BoundRow& r : rows) {
    os << r.n << ',' << format_number(r.c) << ',' << opt(r.f_closed) << ',' << opt(r.f_solver) << ','
       << format_number(r.lb_construction) << ',' << format_number(r.ub_ours) << ','
       << format_number(r.ub_bgm) << ',' << format_number(r.ub_bs) << ',' << format_number(r.ub_quadratic)
       << '\n';
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw PreconditionError("grid range must be start:end:step");
    const double a = parse_number(parts[0]), b = parse_number(parts[1]), h = parse_number(parts[2]);
    if (!(h > 0.0)) throw PreconditionError("grid step must be positive");
    if (b < a) throw PreconditionError("grid end must not precede start");
    const double steps = (b - a) / h;
    const auto count = static_cast<std::size_t>(std::floor(steps + 1e-12 / h)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      const double v = std::round((a + k * h) * 1e12) / 1e12;
      out.push_back(std::abs(v - b) <= 1e-12 ? b : v);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p));
  }
  if (out.empty()) throw PreconditionError("grid is empty");
  for (double c : out) {
    if (!(c >= 0.0 && c <= 1.0)) throw PreconditionError("grid value " + format_number(c) + " outside [0, 1]");
  }
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace cycloproj

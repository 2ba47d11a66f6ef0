#include "report.hpp"

#include <cstdio>
#include <limits>

#include "error.hpp"
#include "io.hpp"

namespace densilab {

using nlohmann::json;

json bigint_json(const BigInt& v) {
  if (v >= BigInt(std::numeric_limits<std::int64_t>::min()) &&
      v <= BigInt(std::numeric_limits<std::int64_t>::max()))
    return static_cast<std::int64_t>(v);
  return v.str();
}

json int_matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(bigint_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"rows", rows}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json analyze_report(const SymMatrix& a, double tol) {
  const auto dec = decompose(a, tol);
  json spectrum = json::array();
  for (std::size_t i = 0; i < dec.distinct_eigenvalues.size(); ++i)
    spectrum.push_back({{"eigenvalue", dec.distinct_eigenvalues[i]}, {"multiplicity", dec.multiplicities[i]}});
  return {{"matrix", matrix_json(a.entries())},
          {"spectrum", spectrum},
          {"basis", matrix_json(dec.basis)["rows"]},
          {"expansive", is_expansive(a)},
          {"positive", is_positive(a)},
          {"lattice", check_lattice_condition(a)}};
}

json verdict_json(const EquivalenceVerdict& v) {
  json out{{"equivalent", v.equivalent},
           {"t", v.exponent ? json(*v.exponent) : json(nullptr)},
           {"basis", v.common_basis ? matrix_json(*v.common_basis)["rows"] : json(nullptr)},
           {"certification", certification_name(v.certification)}};
  if (v.obstruction) {
    json ob{{"kind", obstruction_name(v.obstruction->kind)}};
    if (const auto& mm = v.obstruction->mismatch)
      ob.update({{"i", mm->i}, {"l", mm->l}, {"t_i", mm->t_i}, {"t_l", mm->t_l}});
    out["obstruction"] = ob;
  } else {
    out["obstruction"] = nullptr;
  }
  json pairs = json::array();
  for (const auto& [x, y] : v.eigen_pairs) pairs.push_back({x, y});
  out["eigen_pairs"] = pairs;
  return out;
}

json witness_json(const TrivialEquivalenceWitness& w) {
  json out;
  if (const auto* r = std::get_if<RationalExponent>(&w.kind)) {
    out = {{"kind", "RationalExponent"}, {"p", r->p}, {"q", r->q}, {"bases", r->bases},
           {"t", static_cast<double>(r->p) / r->q}};
  } else {
    const auto& c = std::get<CommonBase>(w.kind);
    out = {{"kind", "CommonBase"}, {"a", c.a}, {"b", c.b}, {"n", c.n}, {"m", c.m},
           {"q", c.q}, {"m_total", c.m_total}, {"t", c.t}};
  }
  json pairs = json::array();
  for (const auto& [x, y] : w.pairs) pairs.push_back({x, y});
  out["pairs"] = pairs;
  return out;
}

json dyadic_json(const DyadicResult& r) {
  return {{"dyadic", r.dyadic},
          {"scale", r.scale ? json(*r.scale) : json(nullptr)},
          {"t", r.exponent ? json(*r.exponent) : json(nullptr)},
          {"certification", certification_name(r.certification)}};
}

json mra_report_json(const MraReport& r) {
  return {{"status", mra_status_name(r.status)},
          {"lattice_ok", r.lattice_ok},
          {"equivalence", r.verdict ? verdict_json(*r.verdict) : json(nullptr)},
          {"trivial_witness", r.witness ? witness_json(*r.witness) : json(nullptr)},
          {"note", r.note}};
}

json series_json(const DensitySeries& s) {
  json rows = json::array();
  for (const auto& e : s.estimates)
    rows.push_back({{"j", e.j}, {"ratio", e.ratio}, {"stderr", e.std_error}, {"samples", e.samples},
                    {"hits", e.hits}});
  return {{"estimates", rows}, {"classification", classification_name(s.classification)}, {"note", s.note}};
}

json classification_json(const LatticeClassification& c) {
  json out{{"det", bigint_json(c.det)},
           {"trace", bigint_json(c.trace)},
           {"expanding", c.expanding},
           {"class", c.similarity_class ? json(similarity_class_name(*c.similarity_class)) : json(nullptr)},
           {"conjugator", c.conjugator ? int_matrix_json(*c.conjugator) : json(nullptr)},
           {"witness_not_found", c.witness_not_found},
           {"search_bound", c.search_bound}};
  out["root_of_identity"] =
      c.root_of_identity ? json{{"l", c.root_of_identity->l}, {"n", bigint_json(c.root_of_identity->n)}} : json(nullptr);
  return out;
}

json classify_report(const Mat& m, int bound, int l_max, double tol) {
  json out{{"matrix", matrix_json(m)}};
  bool integer = true;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.data()[i] != std::trunc(m.data()[i]) || std::abs(m.data()[i]) > 9007199254740992.0) integer = false;
  out["lattice"] = integer;

  if (integer && m.rows() == 2) {
    const IntMatrix im = to_int_matrix(m);
    const BigInt det = im.det();
    const bool expanding = is_expanding(im);
    out["det"] = bigint_json(det);
    out["trace"] = bigint_json(im.trace());
    out["expanding"] = expanding;
    const auto root = minimal_root_of_identity(im, l_max);
    out["root_of_identity"] = root ? json{{"l", root->l}, {"n", bigint_json(root->n)}} : json(nullptr);
    out["class"] = nullptr;
    out["conjugator"] = nullptr;
    if (expanding && (det == 2 || det == -2)) {
      const auto c = classify_det2(im, bound, l_max);
      out["class"] = similarity_class_name(*c.similarity_class);
      out["conjugator"] = c.conjugator ? int_matrix_json(*c.conjugator) : json(nullptr);
      out["witness_not_found"] = c.witness_not_found;
      out["search_bound"] = c.search_bound;
    }
    out["corollaryD"] = expanding && det < 0 ? json(corollaryD_check(im)) : json(nullptr);
    if (expanding) {
      const auto predicted = predicted_root_of_identity(im);
      out["predicted_root_of_identity"] =
          predicted ? json{{"l", predicted->l}, {"n", bigint_json(predicted->n)}} : json(nullptr);
    }
  }

  out["dyadic"] = nullptr;
  if ((m - m.transpose()).norm() <= tol * std::max(1.0, m.norm())) {
    const SymMatrix s(m, tol);
    if (is_expansive(s)) out["dyadic"] = dyadic_json(dyadic_class(s, tol));
  }
  return out;
}

}  // namespace densilab

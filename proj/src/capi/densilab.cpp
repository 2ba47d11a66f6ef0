#include "densilab/densilab.h"

#include <cstring>
#include <string>

#include "../core/density.hpp"
#include "../core/equivalence.hpp"
#include "../core/error.hpp"
#include "../core/io.hpp"
#include "../core/lattice.hpp"
#include "../core/report.hpp"

struct dl_matrix {
  densilab::SymMatrix m;
};
struct dl_region {
  densilab::Region r;
};
struct dl_verdict {
  densilab::EquivalenceVerdict v;
};
struct dl_series {
  densilab::DensitySeries s;
};

namespace {

thread_local std::string last_error;

dl_status fail(dl_status s, const std::string& what) {
  last_error = what;
  return s;
}

template <typename F>
dl_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return DL_OK;
  } catch (const densilab::Error& e) {
    return fail(static_cast<dl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DL_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw densilab::Error(densilab::ErrorCode::BadParameter, std::string(what) + " is NULL");
}

densilab::IntMatrix int2(const int64_t m[4]) {
  return densilab::IntMatrix(2, {m[0], m[1], m[2], m[3]});
}

densilab::SamplingOptions sampling(const dl_sampling* o) {
  densilab::SamplingOptions s;
  if (o) {
    if (o->samples) s.samples = o->samples;
    s.seed = o->seed;
    s.threads = o->threads;
  }
  return s;
}

}  // namespace

extern "C" {

const char* dl_last_error(void) { return last_error.c_str(); }

const char* dl_status_name(dl_status s) {
  if (s == DL_OK) return "Ok";
  static thread_local std::string name;
  name = densilab::error_code_name(static_cast<densilab::ErrorCode>(s));
  return name.c_str();
}

void dl_string_free(char* s) { std::free(s); }

dl_status dl_matrix_create(int dim, const double* row_major, double tol, dl_matrix** out) {
  return guarded([&] {
    need(row_major, "row_major");
    need(out, "out");
    if (dim < 1) throw densilab::Error(densilab::ErrorCode::BadParameter, "dim must be >= 1");
    densilab::Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = row_major[i * dim + j];
    *out = new dl_matrix{densilab::SymMatrix(m, tol > 0 ? tol : densilab::kDefaultTolerance)};
  });
}

dl_status dl_matrix_parse(const char* text, double tol, dl_matrix** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new dl_matrix{densilab::SymMatrix(densilab::parse_matrix(text),
                                             tol > 0 ? tol : densilab::kDefaultTolerance)};
  });
}

void dl_matrix_free(dl_matrix* m) { delete m; }

int dl_matrix_dim(const dl_matrix* m) { return m ? m->m.dim() : 0; }

int dl_matrix_is_exact(const dl_matrix* m) { return m && m->m.exact() ? 1 : 0; }

dl_status dl_matrix_entries(const dl_matrix* m, double* row_major_out) {
  return guarded([&] {
    need(m, "matrix");
    need(row_major_out, "row_major_out");
    const int d = m->m.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) row_major_out[i * d + j] = m->m(i, j);
  });
}

dl_status dl_is_expansive(const dl_matrix* m, int* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = densilab::is_expansive(m->m);
  });
}

dl_status dl_is_positive(const dl_matrix* m, int* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = densilab::is_positive(m->m);
  });
}

dl_status dl_check_lattice_condition(const dl_matrix* m, int* out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = densilab::check_lattice_condition(m->m);
  });
}

dl_status dl_decompose(const dl_matrix* m, double tol, double* eigenvalues_out, double* basis_out) {
  return guarded([&] {
    need(m, "matrix");
    const auto dec = densilab::decompose(m->m, tol > 0 ? tol : densilab::kDefaultTolerance);
    const int d = m->m.dim();
    const auto values = dec.eigenvalues();
    for (int i = 0; i < d && eigenvalues_out; ++i) eigenvalues_out[i] = values(i);
    for (int i = 0; i < d && basis_out; ++i)
      for (int j = 0; j < d; ++j) basis_out[i * d + j] = dec.basis(i, j);
  });
}

dl_status dl_power(const dl_matrix* m, double t, dl_matrix** out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = new dl_matrix{densilab::power(m->m, t)};
  });
}

dl_status dl_absolutize(const dl_matrix* m, dl_matrix** out) {
  return guarded([&] {
    need(m, "matrix");
    need(out, "out");
    *out = new dl_matrix{densilab::absolutize(m->m)};
  });
}

dl_status dl_analyze_json(const dl_matrix* m, double tol, char** json_out) {
  return guarded([&] {
    need(m, "matrix");
    need(json_out, "json_out");
    *json_out = dup(densilab::analyze_report(m->m, tol > 0 ? tol : densilab::kDefaultTolerance).dump());
  });
}

dl_status dl_decide_equivalence(const dl_matrix* a1, const dl_matrix* a2, double tol, dl_verdict** out) {
  return guarded([&] {
    need(a1, "a1");
    need(a2, "a2");
    need(out, "out");
    densilab::EquivalenceOptions opts;
    if (tol > 0) opts.tol = tol;
    *out = new dl_verdict{densilab::decide_equivalence(a1->m, a2->m, opts)};
  });
}

void dl_verdict_free(dl_verdict* v) { delete v; }

int dl_verdict_equivalent(const dl_verdict* v) { return v && v->v.equivalent ? 1 : 0; }

dl_status dl_verdict_exponent(const dl_verdict* v, double* t_out) {
  return guarded([&] {
    need(v, "verdict");
    need(t_out, "t_out");
    if (!v->v.exponent)
      throw densilab::Error(densilab::ErrorCode::PreconditionViolated, "verdict has no exponent");
    *t_out = *v->v.exponent;
  });
}

dl_certification dl_verdict_certification(const dl_verdict* v) {
  return v && v->v.certification == densilab::Certification::ExactInteger ? DL_EXACT_INTEGER : DL_NUMERIC;
}

dl_status dl_verdict_json(const dl_verdict* v, char** json_out) {
  return guarded([&] {
    need(v, "verdict");
    need(json_out, "json_out");
    *json_out = dup(densilab::verdict_json(v->v).dump());
  });
}

dl_status dl_mra_report_json(const dl_matrix* a1, const dl_matrix* a2, char** json_out) {
  return guarded([&] {
    need(a1, "a1");
    need(a2, "a2");
    need(json_out, "json_out");
    *json_out = dup(densilab::mra_report_json(densilab::mra_equivalence_report(a1->m, a2->m)).dump());
  });
}

dl_status dl_region_parse(const char* descriptor_json, int dim, dl_region** out) {
  return guarded([&] {
    need(descriptor_json, "descriptor_json");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(descriptor_json);
    } catch (const nlohmann::json::exception& e) {
      throw densilab::Error(densilab::ErrorCode::ParseError, e.what());
    }
    *out = new dl_region{densilab::parse_region(j, dim)};
  });
}

dl_status dl_region_conjugate(const double* c_row_major, int dim, const dl_region* e, dl_region** out) {
  return guarded([&] {
    need(c_row_major, "c_row_major");
    need(e, "region");
    need(out, "out");
    densilab::Mat c(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) c(i, j) = c_row_major[i * dim + j];
    Eigen::FullPivLU<densilab::Mat> lu(c);
    if (!lu.isInvertible()) throw densilab::Error(densilab::ErrorCode::SingularMatrix, "conjugator is singular");
    *out = new dl_region{densilab::Region::preimage(e->r, c)};
  });
}

void dl_region_free(dl_region* r) { delete r; }

dl_status dl_region_contains(const dl_region* r, const double* x, int* out) {
  return guarded([&] {
    need(r, "region");
    need(x, "x");
    need(out, "out");
    *out = r->r.contains(std::span<const double>(x, static_cast<std::size_t>(r->r.dim())));
  });
}

dl_status dl_density_ratio(const dl_region* e, const dl_matrix* a, int j, const dl_region* window,
                           const dl_sampling* opts, double* ratio_out, double* stderr_out) {
  return guarded([&] {
    need(e, "region");
    need(a, "matrix");
    need(window, "window");
    const auto est = densilab::density_ratio(e->r, a->m, j, window->r, sampling(opts));
    if (ratio_out) *ratio_out = est.ratio;
    if (stderr_out) *stderr_out = est.std_error;
  });
}

dl_status dl_density_sweep(const dl_region* e, const dl_matrix* a, const dl_region* window, int j_min,
                           int j_max, const dl_sampling* opts, dl_series** out) {
  return guarded([&] {
    need(e, "region");
    need(a, "matrix");
    need(window, "window");
    need(out, "out");
    *out = new dl_series{densilab::density_sweep(e->r, a->m, window->r, j_min, j_max, sampling(opts))};
  });
}

void dl_series_free(dl_series* s) { delete s; }

size_t dl_series_size(const dl_series* s) { return s ? s->s.estimates.size() : 0; }

dl_status dl_series_get(const dl_series* s, size_t i, int* j, double* ratio, double* std_error,
                        uint64_t* samples) {
  return guarded([&] {
    need(s, "series");
    if (i >= s->s.estimates.size()) throw densilab::Error(densilab::ErrorCode::BadParameter, "index out of range");
    const auto& e = s->s.estimates[i];
    if (j) *j = e.j;
    if (ratio) *ratio = e.ratio;
    if (std_error) *std_error = e.std_error;
    if (samples) *samples = e.samples;
  });
}

dl_classification dl_series_classification(const dl_series* s) {
  if (!s) return DL_OTHER;
  switch (s->s.classification) {
    case densilab::Classification::ConvergesToOne: return DL_CONVERGES_TO_ONE;
    case densilab::Classification::ConvergesToZero: return DL_CONVERGES_TO_ZERO;
    default: return DL_OTHER;
  }
}

dl_status dl_series_json(const dl_series* s, char** json_out) {
  return guarded([&] {
    need(s, "series");
    need(json_out, "json_out");
    *json_out = dup(densilab::series_json(s->s).dump());
  });
}

dl_status dl_exact_ealpha_ratio(double l1, double l2, double alpha, int j, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = densilab::exact_ealpha_ratio(l1, l2, alpha, j);
  });
}

dl_status dl_classify_json(const char* matrix_text, int bound, int l_max, char** json_out) {
  return guarded([&] {
    need(matrix_text, "matrix_text");
    need(json_out, "json_out");
    *json_out = dup(densilab::classify_report(densilab::parse_matrix(matrix_text), bound, l_max).dump());
  });
}

dl_status dl_minimal_root_of_identity(const int64_t m[4], int l_max, int* found, int* l, uint64_t* n) {
  return guarded([&] {
    need(m, "m");
    need(found, "found");
    const auto r = densilab::minimal_root_of_identity(int2(m), l_max);
    *found = r.has_value();
    if (!r) return;
    if (r->n > densilab::BigInt(UINT64_MAX))
      throw densilab::Error(densilab::ErrorCode::BadParameter, "n exceeds 64 bits");
    if (l) *l = r->l;
    if (n) *n = static_cast<uint64_t>(r->n);
  });
}

dl_status dl_verify_theoremE_row(const int64_t m[4], int l, uint64_t n, int* out) {
  return guarded([&] {
    need(m, "m");
    need(out, "out");
    *out = densilab::verify_theoremE_row(int2(m), l, densilab::BigInt(n));
  });
}

dl_status dl_corollaryD_check(const int64_t m[4], int* out) {
  return guarded([&] {
    need(m, "m");
    need(out, "out");
    *out = densilab::corollaryD_check(int2(m));
  });
}

dl_status dl_theoremC_witness(int l, uint64_t n, int* found, int64_t m_out[4]) {
  return guarded([&] {
    need(found, "found");
    const auto w = densilab::theoremC_witness(l, n);
    *found = w.has_value();
    if (!w || !m_out) return;
    for (int i = 0; i < 4; ++i) {
      const auto& v = (*w)(i / 2, i % 2);
      if (v > densilab::BigInt(INT64_MAX) || v < densilab::BigInt(INT64_MIN))
        throw densilab::Error(densilab::ErrorCode::BadParameter, "witness entry exceeds 64 bits");
      m_out[i] = static_cast<int64_t>(v);
    }
  });
}

dl_status dl_perfect_power(uint64_t a, uint64_t* base, int* exponent) {
  return guarded([&] {
    if (a < 2) throw densilab::Error(densilab::ErrorCode::BadParameter, "perfect_power needs a >= 2");
    const auto pp = densilab::nt::perfect_power(a);
    if (base) *base = pp.base;
    if (exponent) *exponent = pp.exponent;
  });
}

dl_status dl_multiplicative_dependence(uint64_t a, uint64_t b, int* found, uint64_t* base, int* p, int* q) {
  return guarded([&] {
    need(found, "found");
    const auto d = densilab::nt::multiplicative_dependence(a, b);
    *found = d.has_value();
    if (!d) return;
    if (base) *base = d->base;
    if (p) *p = d->p;
    if (q) *q = d->q;
  });
}

dl_status dl_dyadic_class(const dl_matrix* m, int* dyadic, double* exponent) {
  return guarded([&] {
    need(m, "matrix");
    need(dyadic, "dyadic");
    const auto r = densilab::dyadic_class(m->m);
    *dyadic = r.dyadic;
    if (exponent) *exponent = r.exponent ? *r.exponent : 0.0;
  });
}

}  // extern "C"

// Copyright 2026 The twistlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "twistlab/core.hpp"
#include "twistlab/dimension.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/io.hpp"
#include "twistlab/lattice.hpp"
#include "twistlab/measure.hpp"
#include "twistlab/random.hpp"
#include "twistlab/transference.hpp"
#include "twistlab/twistlab.h"

#ifndef TWISTLAB_VERSION
#define TWISTLAB_VERSION "0.0.0"
#endif

struct twl_matrix {
  twistlab::MatrixSpec spec;
};
struct twl_weights {
  twistlab::WeightVector w;
};
struct twl_psi {
  twistlab::ApproxTuple psi;
};
struct twl_ubiquity {
  twistlab::UbiquityConfig cfg;
};
struct twl_dim {
  twistlab::DimensionReport report;
};

namespace {

using namespace twistlab;

thread_local std::string g_error;

template <typename F>
twl_status guard(F&& f) {
  try {
    g_error.clear();
    f();
    return TWL_OK;
  } catch (const UsageError& e) {
    g_error = e.what();
    return TWL_ERR_USAGE;
  } catch (const ResourceError& e) {
    g_error = e.what();
    return TWL_ERR_RESOURCE;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return TWL_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return TWL_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return TWL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " must not be null");
}

void check_dim(std::size_t d, const char* what) {
  if (d == 0 || d > TWL_MAX_DIM) {
    throw UsageError(std::string(what) + " = " + std::to_string(d) + " is outside 1.." + std::to_string(TWL_MAX_DIM));
  }
}

Scalar scalar(const twl_scalar& s) {
  if (s.exact) {
    if (s.den == 0) throw UsageError("zero denominator in scalar");
    return Scalar(Rational(s.num, s.den));
  }
  if (!std::isfinite(s.value)) throw UsageError("scalar must be finite");
  return Scalar::from_double(s.value);
}

std::vector<Scalar> scalars(const twl_scalar* xs, std::size_t n) {
  if (n > 0) need(xs, "scalar array");
  std::vector<Scalar> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(scalar(xs[i]));
  return out;
}

Exec exec_of(const twl_exec* e) {
  Exec x;
  if (e != nullptr) {
    x.workers = std::max(1u, e->workers);
    x.point_budget = e->point_budget;
  }
  return x;
}

// Caller buffers: NULL skips the output, a short buffer is a usage error.
void copy_text(const std::string& s, char* buf, std::size_t cap) {
  if (buf == nullptr) return;
  if (s.size() >= cap) {
    throw UsageError("text of " + std::to_string(s.size()) + " characters does not fit a buffer of " +
                     std::to_string(cap) + " bytes");
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
}

template <std::size_t N>
void copy_text(const std::string& s, char (&buf)[N]) {
  copy_text(s, buf, N);
}

void fill(const ApproxWitness& w, twl_witness* out) {
  if (out == nullptr) return;
  *out = twl_witness{};
  out->m = w.q.size();
  out->n = w.p.size();
  for (std::size_t j = 0; j < w.q.size() && j < TWL_MAX_DIM; ++j) out->q[j] = w.q[j];
  for (std::size_t i = 0; i < w.p.size() && i < TWL_MAX_DIM; ++i) {
    out->p[i] = w.p[i];
    out->residuals[i] = static_cast<double>(w.residuals[i]);
  }
  out->qnorm = static_cast<double>(w.qnorm);
}

twl_truth truth(Truth t) {
  switch (t) {
    case Truth::True:
      return TWL_TRUE;
    case Truth::False:
      return TWL_FALSE;
    default:
      return TWL_INDETERMINATE;
  }
}

void fill(const LevelRecord& r, twl_level_record* out) {
  *out = twl_level_record{};
  out->level = r.level;
  out->in_l = truth(r.in_l);
  out->best_value = static_cast<double>(r.best_value);
  out->has_witness = r.witness.has_value();
  if (r.witness) fill(*r.witness, &out->witness);
  out->indeterminate = r.indeterminate;
}

const MatrixSpec& mat(const twl_matrix* a) {
  need(a, "matrix");
  return a->spec;
}
const WeightVector& wts(const twl_weights* w, const char* what) {
  need(w, what);
  return w->w;
}
const ApproxTuple& psi_of(const twl_psi* p) {
  need(p, "psi");
  return p->psi;
}

TorusRectangle box_of(const double* center, const double* radii, std::size_t n) {
  need(center, "box center");
  need(radii, "box radii");
  return TorusRectangle(std::vector<long double>(center, center + n), std::vector<long double>(radii, radii + n));
}

EstimatorConfig est_of(const twl_estimator* e, std::size_t n) {
  if (e == nullptr) return default_estimator(n, 0);
  EstimatorConfig c;
  c.method = e->method == TWL_MONTE_CARLO ? Estimator::MonteCarlo : Estimator::Grid;
  c.grid_step = e->grid_step;
  c.samples = e->samples;
  c.seed = e->seed;
  return c;
}

}  // namespace

extern "C" {

const char* twl_version(void) { return TWISTLAB_VERSION; }

const char* twl_last_error(void) { return g_error.c_str(); }

twl_exec twl_exec_default(void) {
  const Exec e;
  return twl_exec{e.workers, e.point_budget};
}

twl_scalar twl_real(double value) { return twl_scalar{0, 0, 1, value}; }

twl_scalar twl_rational(std::int64_t num, std::int64_t den) {
  return twl_scalar{1, num, den, den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den)};
}

twl_status twl_scalar_parse(const char* text, twl_scalar* out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    const auto s = Scalar::parse(text);
    if (!s) throw UsageError(std::string("cannot parse number '") + text + "'");
    if (s->is_exact()) {
      *out = twl_rational(s->rational().num(), s->rational().den());
    } else {
      *out = twl_real(static_cast<double>(s->value()));
    }
  });
}

twl_status twl_scalar_format(twl_scalar s, char* buf, std::size_t cap) {
  return guard([&] { copy_text(scalar(s).str(), buf, cap); });
}

twl_status twl_matrix_load(const char* source, twl_matrix** out) {
  return guard([&] {
    need(source, "source");
    need(out, "out");
    std::error_code ec;
    const std::string s(source);
    const bool is_file = s.find(',') == std::string::npos && std::filesystem::is_regular_file(s, ec);
    *out = new twl_matrix{is_file ? load_matrix_file(s) : load_matrix(s)};
  });
}

twl_status twl_matrix_parse(const char* text, twl_matrix** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new twl_matrix{parse_matrix_text(text)};
  });
}

void twl_matrix_free(twl_matrix* a) { delete a; }
std::size_t twl_matrix_rows(const twl_matrix* a) { return a ? a->spec.rows() : 0; }
std::size_t twl_matrix_cols(const twl_matrix* a) { return a ? a->spec.cols() : 0; }
int twl_matrix_is_exact(const twl_matrix* a) { return a ? a->spec.is_exact() : 0; }

twl_status twl_matrix_entry_text(const twl_matrix* a, std::size_t i, std::size_t j, char* buf, std::size_t cap) {
  return guard([&] {
    const auto& m = mat(a);
    if (i >= m.rows() || j >= m.cols()) throw UsageError("matrix index out of range");
    copy_text(m.entry_text(i, j), buf, cap);
  });
}

twl_status twl_weights_parse(const char* text, std::size_t dim, twl_weights** out) {
  return guard([&] {
    need(out, "out");
    check_dim(dim, "weight dimension");
    if (text == nullptr || *text == '\0') {
      *out = new twl_weights{WeightVector::uniform(dim)};
      return;
    }
    WeightVector w = parse_weights(text);
    if (w.size() != dim) {
      throw UsageError("weight vector '" + std::string(text) + "' has " + std::to_string(w.size()) +
                       " entries, expected " + std::to_string(dim));
    }
    *out = new twl_weights{std::move(w)};
  });
}

void twl_weights_free(twl_weights* w) { delete w; }
std::size_t twl_weights_size(const twl_weights* w) { return w ? w->w.size() : 0; }
double twl_weights_get(const twl_weights* w, std::size_t i) {
  return (w && i < w->w.size()) ? static_cast<double>(w->w.value(i)) : 0.0;
}

twl_status twl_weights_text(const twl_weights* w, char* buf, std::size_t cap) {
  return guard([&] { copy_text(wts(w, "weights").str(), buf, cap); });
}

twl_status twl_psi_parse(const char* text, std::size_t n, twl_psi** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    check_dim(n, "psi dimension");
    *out = new twl_psi{parse_psi(text, n)};
  });
}

void twl_psi_free(twl_psi* psi) { delete psi; }

twl_status twl_psi_eval(const twl_psi* psi, double r, double* out) {
  return guard([&] {
    need(out, "out");
    const auto v = eval_tuple(psi_of(psi), r);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
  });
}

twl_status twl_quasi_norm(const double* x, const twl_weights* w, double* out) {
  return guard([&] {
    need(x, "x");
    need(out, "out");
    const auto& ww = wts(w, "weights");
    std::vector<long double> xs(x, x + ww.size());
    *out = static_cast<double>(quasi_norm(xs, ww));
  });
}

twl_status twl_enumerate_ball(const twl_weights* alpha, twl_scalar radius, const twl_exec* exec, twl_vector_sink sink,
                              void* user) {
  return guard([&] {
    need(reinterpret_cast<const void*>(sink), "sink");
    enumerate_ball(
        wts(alpha, "alpha"), scalar(radius), [&](std::span<const std::int64_t> q) { sink(q.data(), q.size(), user); },
        exec_of(exec));
  });
}

twl_status twl_count_ball(const twl_weights* alpha, twl_scalar radius, std::uint64_t* out) {
  return guard([&] {
    need(out, "out");
    *out = count_ball(wts(alpha, "alpha"), scalar(radius));
  });
}

twl_status twl_best_profile(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar radius,
                            const twl_exec* exec, double* value, twl_witness* witness) {
  return guard([&] {
    const auto r = best_profile(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(radius), exec_of(exec));
    if (value) *value = static_cast<double>(r.value);
    fill(r.witness, witness);
  });
}

twl_status twl_level_in_l(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar eps,
                          int level, const twl_exec* exec, twl_truth* out, std::uint64_t* indeterminate) {
  return guard([&] {
    need(out, "out");
    std::uint64_t ind = 0;
    *out = truth(level_in_L(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(eps), level, exec_of(exec), &ind));
    if (indeterminate) *indeterminate = ind;
  });
}

twl_status twl_level_set_prefix(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar eps,
                                int max_level, const twl_exec* exec, twl_level_record* levels,
                                twl_level_summary* summary) {
  return guard([&] {
    need(levels, "levels");
    const auto r = level_set_prefix(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(eps), max_level, exec_of(exec));
    for (std::size_t i = 0; i < r.levels.size(); ++i) fill(r.levels[i], &levels[i]);
    if (summary) *summary = twl_level_summary{r.indeterminate_total, r.comparisons};
  });
}

twl_status twl_badness(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar q0,
                       twl_scalar q1, const twl_exec* exec, double* value, twl_witness* witness) {
  return guard([&] {
    const auto r = badness_functional(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(q0), scalar(q1), exec_of(exec));
    if (value) *value = static_cast<double>(r.value);
    fill(r.witness, witness);
  });
}

const char* twl_verdict_name(twl_verdict v) {
  switch (v) {
    case TWL_BAD_LIKE:
      return to_string(Verdict::BadLike);
    case TWL_NON_SINGULAR_LIKE:
      return to_string(Verdict::NonSingularLike);
    case TWL_SINGULAR_LIKE:
      return to_string(Verdict::SingularLike);
    default:
      return to_string(Verdict::Inconclusive);
  }
}

twl_classify_options twl_classify_defaults(void) {
  const ClassifyOptions o;
  return twl_classify_options{o.tail_fraction, o.top_half_fraction};
}

twl_status twl_classify(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, const twl_scalar* eps,
                        std::size_t eps_count, int max_level, const twl_classify_options* options, const twl_exec* exec,
                        twl_classification* out, twl_eps_summary* per_eps, twl_level_record* levels) {
  return guard([&] {
    need(out, "out");
    ClassifyOptions o;
    if (options) {
      o.tail_fraction = options->tail_fraction;
      o.top_half_fraction = options->top_half_fraction;
    }
    const auto grid = scalars(eps, eps_count);
    const auto c = classify(mat(a), wts(v, "v"), wts(alpha, "alpha"), grid, max_level, o, exec_of(exec));
    out->verdict = static_cast<twl_verdict>(static_cast<int>(c.verdict));
    out->indeterminate_total = c.indeterminate_total;
    out->comparisons = c.comparisons;
    for (std::size_t e = 0; e < c.per_epsilon.size(); ++e) {
      const auto& s = c.per_epsilon[e];
      if (per_eps) {
        per_eps[e] =
            twl_eps_summary{s.true_count,       s.trailing_true,      s.top_half_true,           s.top_half_size,
                            s.cofinite ? 1 : 0, s.empty_tail ? 1 : 0, s.infinite_looking ? 1 : 0};
      }
      if (levels) {
        for (std::size_t l = 0; l < s.prefix.levels.size(); ++l) {
          fill(s.prefix.levels[l], &levels[e * static_cast<std::size_t>(max_level) + l]);
        }
      }
    }
  });
}

twl_status twl_compute_c1(twl_scalar c, twl_scalar big_n, const twl_scalar* v, std::size_t n, const twl_scalar* alpha,
                          std::size_t m, double* out) {
  return guard([&] {
    need(out, "out");
    *out = static_cast<double>(compute_c1(scalar(c), scalar(big_n), scalars(v, n), scalars(alpha, m)).value());
  });
}

twl_status twl_compute_c2(twl_scalar eps, const twl_scalar* v, std::size_t n, const twl_scalar* alpha, std::size_t m,
                          double* out) {
  return guard([&] {
    need(out, "out");
    *out = static_cast<double>(compute_c2(scalar(eps), scalars(v, n), scalars(alpha, m)).value());
  });
}

twl_status twl_homogeneous_empty(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar c,
                                 twl_scalar big_n, const twl_exec* exec, twl_truth* out, std::uint64_t* indeterminate) {
  return guard([&] {
    need(out, "out");
    std::uint64_t ind = 0;
    *out = truth(
        homogeneous_empty(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(c), scalar(big_n), exec_of(exec), &ind));
    if (indeterminate) *indeterminate = ind;
  });
}

twl_status twl_inhomogeneous_solve(const twl_matrix* a, const twl_weights* alpha, const twl_scalar* b,
                                   const twl_scalar* radii, twl_scalar norm_bound, int inclusive, const twl_exec* exec,
                                   twl_truth* found, twl_witness* witness, std::uint64_t* indeterminate) {
  return guard([&] {
    need(found, "found");
    const auto& A = mat(a);
    const auto bs = scalars(b, A.rows());
    const auto rs = scalars(radii, A.rows());
    SolveOptions o;
    o.inclusive = inclusive != 0;
    const auto r = inhomogeneous_solve(A, wts(alpha, "alpha"), bs, rs, scalar(norm_bound), o, exec_of(exec));
    *found = truth(r.found);
    if (witness) {
      *witness = twl_witness{};
      if (r.witness) fill(*r.witness, witness);
    }
    if (indeterminate) *indeterminate = r.indeterminate;
  });
}

twl_status twl_sample_shifts(std::size_t n, std::size_t count, std::uint64_t seed, double* out) {
  return guard([&] {
    need(out, "out");
    const auto s = sample_shifts(n, count, seed);
    for (std::size_t k = 0; k < s.size(); ++k) std::copy(s[k].begin(), s[k].end(), out + k * n);
  });
}

twl_status twl_verify_transference(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar c,
                                   twl_scalar big_n, const double* shifts, std::size_t count, const twl_exec* exec,
                                   twl_transference_summary* out, twl_shift_check* checks) {
  return guard([&] {
    need(out, "out");
    const auto& A = mat(a);
    const std::size_t n = A.rows();
    check_dim(n, "rows");
    if (count > 0) need(shifts, "shifts");
    std::vector<std::vector<double>> bs(count);
    for (std::size_t k = 0; k < count; ++k) bs[k].assign(shifts + k * n, shifts + (k + 1) * n);
    const auto r =
        verify_transference(A, wts(v, "v"), wts(alpha, "alpha"), scalar(c), scalar(big_n), bs, exec_of(exec));
    *out = twl_transference_summary{};
    out->base = static_cast<double>(r.base.value());
    out->c1 = static_cast<double>(r.c1.value());
    for (std::size_t i = 0; i < r.radii.size(); ++i) out->radii[i] = static_cast<double>(r.radii[i].value());
    out->norm_bound = static_cast<double>(r.norm_bound.value());
    out->passes = r.passes;
    out->failures = r.failures;
    out->indeterminate = r.indeterminate;
    out->in_proof_box = r.in_proof_box;
    if (checks) {
      for (std::size_t k = 0; k < r.checks.size(); ++k) {
        auto& dst = checks[k];
        const auto& src = r.checks[k];
        dst = twl_shift_check{};
        std::copy(src.b.begin(), src.b.end(), dst.b);
        dst.solved = truth(src.solved);
        dst.has_witness = src.witness.has_value();
        if (src.witness) fill(*src.witness, &dst.witness);
        dst.in_proof_box = src.in_proof_box;
      }
    }
  });
}

twl_status twl_verify_level_transference(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha,
                                         twl_scalar eps, int max_level, std::size_t shifts_per_level,
                                         std::uint64_t seed, const twl_exec* exec, twl_level_transference_summary* out,
                                         twl_level_transference_row* rows) {
  return guard([&] {
    need(out, "out");
    const auto r = verify_level_transference(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(eps), max_level,
                                             shifts_per_level, seed, exec_of(exec));
    *out = twl_level_transference_summary{static_cast<double>(r.c2.value()), r.levels.size(), r.failures,
                                          r.prefix.indeterminate_total};
    if (rows) {
      for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const auto& src = r.levels[k];
        auto& dst = rows[k];
        dst = twl_level_transference_row{};
        dst.level = src.level;
        for (std::size_t i = 0; i < src.radii.size(); ++i) dst.radii[i] = static_cast<double>(src.radii[i].value());
        dst.norm_bound = static_cast<double>(src.norm_bound.value());
        dst.passes = src.passes;
        dst.failures = src.failures;
        dst.indeterminate = src.indeterminate;
      }
    }
  });
}

twl_status twl_dyadic_series(const twl_psi* psi, std::size_t m, const int* levels, std::size_t level_count,
                             std::size_t count, double* out) {
  return guard([&] {
    if (level_count > 0) need(levels, "levels");
    const auto s = dyadic_series(psi_of(psi), m, std::span<const int>(levels, level_count), count);
    if (!s.empty()) need(out, "out");
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = static_cast<double>(s[k]);
  });
}

twl_status twl_radial_series(const twl_psi* psi, std::size_t m, std::uint64_t cutoff, double* out) {
  return guard([&] {
    need(out, "out");
    const auto s = radial_series(psi_of(psi), m, cutoff);
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = static_cast<double>(s[k]);
  });
}

twl_status twl_growth_exponent(const double* sums, std::size_t count, double* out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(sums, "sums");
    std::vector<long double> s(sums, sums + count);
    *out = static_cast<double>(growth_exponent(s));
  });
}

twl_status twl_hypothesis_ratio(const twl_psi* psi, const twl_weights* v, std::size_t m, int max_level, double* out) {
  return guard([&] {
    need(out, "out");
    *out = static_cast<double>(hypothesis_ratio(psi_of(psi), wts(v, "v"), m, max_level));
  });
}

twl_status twl_borel_cantelli_bound(const twl_psi* psi, const twl_weights* alpha, int shells, const twl_exec* exec,
                                    twl_borel_cantelli* out) {
  return guard([&] {
    need(out, "out");
    const auto r = borel_cantelli(psi_of(psi), wts(alpha, "alpha"), shells, exec_of(exec));
    *out = twl_borel_cantelli{static_cast<double>(r.constant), static_cast<double>(r.volume_sum),
                              static_cast<double>(r.series_sum), static_cast<double>(r.bound), r.shells};
  });
}

twl_status twl_hit_count(const twl_scalar* b, const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha,
                         twl_scalar q_max, std::size_t witness_cap, const twl_exec* exec, std::uint64_t* count,
                         twl_witness* witnesses, std::size_t* witness_count, std::uint64_t* indeterminate) {
  return guard([&] {
    need(count, "count");
    const auto& A = mat(a);
    const auto bs = scalars(b, A.rows());
    const std::size_t cap = witnesses ? witness_cap : 0;
    const auto r = hit_count(bs, A, psi_of(psi), wts(alpha, "alpha"), scalar(q_max), cap, exec_of(exec));
    *count = r.count;
    for (std::size_t k = 0; k < r.witnesses.size(); ++k) fill(r.witnesses[k], &witnesses[k]);
    if (witness_count) *witness_count = r.witnesses.size();
    if (indeterminate) *indeterminate = r.indeterminate;
  });
}

const char* twl_method_name(twl_method m) {
  return to_string(m == TWL_MONTE_CARLO ? Estimator::MonteCarlo : Estimator::Grid);
}

twl_estimator twl_estimator_default(std::size_t n, std::uint64_t seed) {
  const auto c = default_estimator(n, seed);
  return twl_estimator{c.method == Estimator::MonteCarlo ? TWL_MONTE_CARLO : TWL_GRID, c.grid_step, c.samples, c.seed};
}

twl_status twl_limsup_measure(const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha,
                              const twl_scalar* cutoffs, std::size_t count, const twl_estimator* est,
                              twl_scalar tail_start, const twl_exec* exec, twl_measure_estimate* out) {
  return guard([&] {
    need(out, "out");
    const auto& A = mat(a);
    const auto qs = scalars(cutoffs, count);
    const auto r = limsup_measure(A, psi_of(psi), wts(alpha, "alpha"), qs, est_of(est, A.rows()), scalar(tail_start),
                                  exec_of(exec));
    for (std::size_t k = 0; k < r.size(); ++k) {
      out[k] = twl_measure_estimate{static_cast<double>(r[k].q),
                                    static_cast<double>(r[k].value),
                                    r[k].method == Estimator::MonteCarlo ? TWL_MONTE_CARLO : TWL_GRID,
                                    static_cast<double>(r[k].resolution),
                                    static_cast<double>(r[k].half_width),
                                    r[k].seed};
    }
  });
}

twl_status twl_equidist_ratio(const twl_matrix* a, const twl_weights* alpha, const double* center, const double* radii,
                              twl_scalar big_n, const twl_exec* exec, twl_equidist* out) {
  return guard([&] {
    need(out, "out");
    const auto& A = mat(a);
    const auto r =
        equidist_ratio(A, wts(alpha, "alpha"), box_of(center, radii, A.rows()), scalar(big_n), exec_of(exec));
    *out = twl_equidist{r.in_box, r.total, static_cast<double>(r.ratio)};
  });
}

twl_status twl_ubiquity_create(const twl_matrix* a, const twl_weights* v, const twl_weights* alpha, twl_scalar eps,
                               int max_level, const twl_ubiquity_options* options, const twl_exec* exec,
                               twl_ubiquity** out) {
  return guard([&] {
    need(out, "out");
    UbiquityOptions o;
    if (options) {
      if (options->has_c3) o.c3 = scalar(options->c3);
      o.allow_inadmissible = options->allow_inadmissible != 0;
    }
    *out = new twl_ubiquity{
        make_ubiquity_config(mat(a), wts(v, "v"), wts(alpha, "alpha"), scalar(eps), max_level, o, exec_of(exec))};
  });
}

void twl_ubiquity_free(twl_ubiquity* u) { delete u; }

twl_status twl_ubiquity_get_info(const twl_ubiquity* u, twl_ubiquity_info* out) {
  return guard([&] {
    need(u, "ubiquity");
    need(out, "out");
    const auto& c = u->cfg;
    *out = twl_ubiquity_info{static_cast<double>(c.eps.value()),
                             static_cast<double>(c.c2.value()),
                             static_cast<double>(c.c3.value()),
                             static_cast<double>(c.c3_bound.value()),
                             c.admissible ? 1 : 0,
                             c.size()};
  });
}

twl_status twl_ubiquity_get_level(const twl_ubiquity* u, std::size_t k, twl_ubiquity_level* out) {
  return guard([&] {
    need(u, "ubiquity");
    need(out, "out");
    const auto& c = u->cfg;
    if (k >= c.size()) throw UsageError("level index " + std::to_string(k) + " out of range");
    *out = twl_ubiquity_level{};
    out->level = c.levels[k];
    out->upper = static_cast<double>(c.upper(k).value());
    out->lower = static_cast<double>(c.lower(k).value());
    const auto rho = c.rho_at(k);
    for (std::size_t i = 0; i < rho.size(); ++i) out->rho[i] = static_cast<double>(rho[i]);
  });
}

twl_status twl_ubiquity_coverage(const twl_matrix* a, const twl_weights* alpha, const twl_ubiquity* u, std::size_t k,
                                 const double* center, const double* radii, const twl_estimator* est,
                                 const twl_exec* exec, twl_coverage* out) {
  return guard([&] {
    need(u, "ubiquity");
    need(out, "out");
    const auto& A = mat(a);
    const auto r = ubiquity_coverage(A, wts(alpha, "alpha"), u->cfg, k, box_of(center, radii, A.rows()),
                                     est_of(est, A.rows()), exec_of(exec));
    *out = twl_coverage{static_cast<double>(r.fraction), static_cast<double>(r.half_width), r.resonant_points, r.cells};
  });
}

twl_status twl_dim_unweighted(std::size_t m, std::size_t n, const twl_scalar* tau, twl_dim** out) {
  return guard([&] {
    need(out, "out");
    check_dim(n, "n");
    *out = new twl_dim{dim_unweighted(m, n, scalars(tau, n))};
  });
}

twl_status twl_dim_weighted_2d(std::size_t m, const twl_scalar* v, const twl_scalar* tau, twl_dim** out) {
  return guard([&] {
    need(out, "out");
    *out = new twl_dim{dim_weighted_2d(m, scalars(v, 2), scalars(tau, 2))};
  });
}

twl_status twl_dim_mtprr(const twl_scalar* a, const twl_scalar* t, std::size_t n, twl_dim** out) {
  return guard([&] {
    need(out, "out");
    check_dim(n, "n");
    *out = new twl_dim{mtprr_lower_bound(scalars(a, n), scalars(t, n))};
  });
}

void twl_dim_free(twl_dim* d) { delete d; }

twl_status twl_dim_get_info(const twl_dim* d, twl_dim_info* out) {
  return guard([&] {
    need(d, "dim");
    need(out, "out");
    const auto& r = d->report;
    *out = twl_dim_info{};
    out->value = static_cast<double>(r.value.value());
    copy_text(r.value.str(), out->value_text);
    out->pivots = r.pivots.size();
    out->argmin = r.argmin;
    out->conditions = r.conditions.size();
    out->cross_check = r.cross_check ? (*r.cross_check ? 1 : 0) : -1;
  });
}

twl_status twl_dim_get_pivot(const twl_dim* d, std::size_t i, twl_pivot_row* out) {
  return guard([&] {
    need(d, "dim");
    need(out, "out");
    if (i >= d->report.pivots.size()) throw UsageError("pivot index out of range");
    const auto& p = d->report.pivots[i];
    *out = twl_pivot_row{};
    out->pivot = static_cast<double>(p.pivot.value());
    copy_text(p.pivot.str(), out->pivot_text);
    out->d = static_cast<double>(p.d.value());
    copy_text(p.d.str(), out->d_text);
    std::copy(p.k1.begin(), p.k1.end(), out->k1);
    out->k1_size = p.k1.size();
    std::copy(p.k2.begin(), p.k2.end(), out->k2);
    out->k2_size = p.k2.size();
    std::copy(p.k3.begin(), p.k3.end(), out->k3);
    out->k3_size = p.k3.size();
  });
}

twl_status twl_dim_get_condition(const twl_dim* d, std::size_t i, twl_condition* out) {
  return guard([&] {
    need(d, "dim");
    need(out, "out");
    if (i >= d->report.conditions.size()) throw UsageError("condition index out of range");
    const auto& c = d->report.conditions[i];
    *out = twl_condition{};
    copy_text(c.name, out->name);
    out->lhs = static_cast<double>(c.lhs.value());
    out->rhs = static_cast<double>(c.rhs.value());
    out->holds = c.holds;
  });
}

twl_status twl_upper_cover_exponent(std::size_t m, const twl_scalar* tau, std::size_t n, std::size_t j, double* out,
                                    char* text, std::size_t cap) {
  return guard([&] {
    const auto s = upper_cover_exponent(m, scalars(tau, n), j);
    if (out) *out = static_cast<double>(s.value());
    copy_text(s.str(), text, cap);
  });
}

twl_status twl_box_dim_estimate(const twl_matrix* a, const twl_psi* psi, const twl_weights* alpha, twl_scalar q_max,
                                const double* deltas, std::size_t delta_count, twl_box_cover mode, const twl_exec* exec,
                                twl_box_dim* out, twl_box_count* counts) {
  return guard([&] {
    need(out, "out");
    if (delta_count > 0) need(deltas, "deltas");
    const auto r = box_dim_estimate(mat(a), psi_of(psi), wts(alpha, "alpha"), scalar(q_max),
                                    std::span<const double>(deltas, delta_count),
                                    mode == TWL_COVER_UNION ? BoxCover::Union : BoxCover::Shell, exec_of(exec));
    *out = twl_box_dim{};
    out->slope = static_cast<double>(r.slope);
    out->intercept = static_cast<double>(r.intercept);
    out->residual = static_cast<double>(r.residual);
    out->used = r.used;
    copy_text(r.note, out->note);
    if (counts) {
      for (std::size_t k = 0; k < r.counts.size(); ++k) {
        const auto& c = r.counts[k];
        counts[k] = twl_box_count{};
        counts[k].delta = static_cast<double>(c.delta);
        counts[k].boxes = c.boxes;
        counts[k].total = c.total;
        counts[k].rectangles = c.rectangles;
        counts[k].excluded = c.excluded;
        copy_text(c.reason, counts[k].reason);
      }
    }
  });
}

}  // extern "C"

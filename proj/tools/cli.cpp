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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twistlab/twistlab.h"

namespace twistlab_cli {

namespace {

using json = nlohmann::ordered_json;

struct Failure {
  int code;
  std::string message;
};

void check(twl_status s) {
  if (s != TWL_OK) throw Failure{static_cast<int>(s), twl_last_error()};
}

[[noreturn]] void usage(const std::string& message) { throw Failure{kUsage, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<twl_matrix, Deleter<twl_matrix, twl_matrix_free>>;
using Weights = std::unique_ptr<twl_weights, Deleter<twl_weights, twl_weights_free>>;
using Psi = std::unique_ptr<twl_psi, Deleter<twl_psi, twl_psi_free>>;
using Ubiquity = std::unique_ptr<twl_ubiquity, Deleter<twl_ubiquity, twl_ubiquity_free>>;
using Dim = std::unique_ptr<twl_dim, Deleter<twl_dim, twl_dim_free>>;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

twl_scalar parse_scalar(const std::string& text) {
  twl_scalar s;
  check(twl_scalar_parse(text.c_str(), &s));
  return s;
}

std::vector<twl_scalar> parse_scalars(const std::string& text) {
  std::vector<twl_scalar> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_scalar(t));
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : split(text, ',')) {
    twl_scalar s = parse_scalar(t);
    out.push_back(s.exact ? static_cast<double>(s.num) / static_cast<double>(s.den) : s.value);
  }
  return out;
}

double to_double(const twl_scalar& s) {
  return s.exact ? static_cast<double>(s.num) / static_cast<double>(s.den) : s.value;
}

std::string scalar_text(const twl_scalar& s) {
  char buf[TWL_TEXT];
  check(twl_scalar_format(s, buf, sizeof buf));
  return buf;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string truth_text(twl_truth t) {
  switch (t) {
    case TWL_TRUE:
      return "true";
    case TWL_FALSE:
      return "false";
    default:
      return "indeterminate";
  }
}

template <typename T>
std::string join(const T* xs, std::size_t n, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += sep;
    if constexpr (std::is_floating_point_v<T>) {
      s += num(xs[i]);
    } else {
      s += std::to_string(xs[i]);
    }
  }
  return s;
}

json witness_json(const twl_witness& w) {
  json j;
  j["q"] = std::vector<int64_t>(w.q, w.q + w.m);
  j["p"] = std::vector<int64_t>(w.p, w.p + w.n);
  j["residuals"] = std::vector<double>(w.residuals, w.residuals + w.n);
  j["qnorm"] = w.qnorm;
  return j;
}

// Lower:upper per axis, comma separated, e.g. "0.3:0.5,0:1".
struct Box {
  std::vector<double> center;
  std::vector<double> radii;
  double area = 1;
};

Box parse_box(const std::string& text, std::size_t n) {
  Box b;
  const auto axes = split(text, ',');
  if (axes.size() != n) usage("--box needs " + std::to_string(n) + " lo:hi ranges, got '" + text + "'");
  for (const auto& ax : axes) {
    const auto parts = split(ax, ':');
    if (parts.size() != 2) usage("box range '" + ax + "' is not lo:hi");
    const double lo = to_double(parse_scalar(parts[0]));
    const double hi = to_double(parse_scalar(parts[1]));
    if (!(lo < hi) || hi - lo > 1) usage("box range '" + ax + "' must satisfy lo < hi <= lo + 1");
    b.center.push_back((lo + hi) / 2);
    b.radii.push_back((hi - lo) / 2);
    b.area *= hi - lo;
  }
  return b;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Failure{kInternal, "CSV row width mismatch"};
    rows_.push_back(std::move(row));
  }
  std::string str() const {
    std::string s;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ',';
        s += r[i];
      }
      s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Report {
  json outputs = json::object();
  json claims = json::array();
  std::uint64_t indeterminate = 0;
  std::uint64_t comparisons = 0;
  std::unique_ptr<Table> table;
  std::string summary;

  void claim(const std::string& name, bool pass, json detail = json::object()) {
    json c;
    c["claim"] = name;
    c["status"] = pass ? "pass" : "fail";
    c["detail"] = std::move(detail);
    claims.push_back(std::move(c));
  }
};

struct Options {
  // shared
  std::string config;
  std::string matrix;
  std::string preset;
  std::string v;
  std::string alpha;
  std::string psi;
  std::string out;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t budget = 100'000'000;
  double max_indeterminate = 0.01;
  // command specific
  std::string mode;
  std::string eps = "0.4";
  std::string eps_grid = "0.1,0.2,0.4";
  int lmax = 10;
  double tail_fraction = 0.5;
  double top_half_fraction = 0.5;
  std::string big_c;
  std::string big_n;
  std::size_t shifts = 0;
  std::string b;
  std::string radii;
  std::string norm_bound;
  bool inclusive = false;
  std::string cutoffs = "16,64,256,1024";
  std::string method = "auto";
  double grid_step = 1e-3;
  std::uint64_t samples = 1'000'000;
  std::string tail_start = "0";
  int bc_shells = 0;
  std::string n_list = "10000";
  std::string box;
  std::string ks = "upper";
  std::string c3;
  bool allow_inadmissible = false;
  std::size_t m = 0;
  std::size_t n = 0;
  std::string tau;
  std::string a;
  std::string t;
  std::string q_max = "4096";
  std::string deltas;
  int kmin = 4;
  int kmax = 10;
  std::string cover = "shell";
  std::string kind = "both";
  std::string levels;
  std::size_t count = 10;
  std::uint64_t radial_cutoff = 1000;
  std::size_t witness_cap = 16;
};

twl_exec exec_of(const Options& o) { return twl_exec{std::max(1u, o.workers), o.budget}; }

Matrix load_matrix(const Options& o) {
  if (!o.matrix.empty() && !o.preset.empty()) usage("give either --matrix or --preset, not both");
  const std::string src = o.matrix.empty() ? o.preset : o.matrix;
  if (src.empty()) usage("a matrix is required (--preset or --matrix)");
  twl_matrix* a = nullptr;
  check(twl_matrix_load(src.c_str(), &a));
  return Matrix(a);
}

Weights load_weights(const std::string& text, std::size_t dim) {
  twl_weights* w = nullptr;
  check(twl_weights_parse(text.c_str(), dim, &w));
  return Weights(w);
}

Psi load_psi(const std::string& text, std::size_t n) {
  if (text.empty()) usage("--psi is required, e.g. pow:1,2");
  twl_psi* p = nullptr;
  check(twl_psi_parse(text.c_str(), n, &p));
  return Psi(p);
}

twl_estimator estimator_of(const Options& o, std::size_t n) {
  twl_estimator e = twl_estimator_default(n, o.seed);
  if (o.method == "grid") {
    e.method = TWL_GRID;
  } else if (o.method == "monte-carlo" || o.method == "mc") {
    e.method = TWL_MONTE_CARLO;
  } else if (o.method != "auto") {
    usage("--method must be grid, monte-carlo or auto");
  }
  e.grid_step = o.grid_step;
  e.samples = o.samples;
  e.seed = o.seed;
  return e;
}

json estimator_json(const twl_estimator& e) {
  json j;
  j["method"] = twl_method_name(e.method);
  if (e.method == TWL_GRID) {
    j["grid_step"] = e.grid_step;
  } else {
    j["samples"] = e.samples;
    j["seed"] = e.seed;
  }
  return j;
}

// ---- subcommands ----

void cmd_classify(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto v = load_weights(o.v, n);
  auto al = load_weights(o.alpha, m);
  const auto grid = parse_scalars(o.eps_grid);
  if (grid.empty()) usage("--eps-grid must not be empty");
  if (o.lmax < 1) usage("--lmax must be positive");
  twl_classify_options opt{o.tail_fraction, o.top_half_fraction};
  const auto ex = exec_of(o);
  twl_classification c;
  std::vector<twl_eps_summary> per(grid.size());
  std::vector<twl_level_record> levels(grid.size() * o.lmax);
  check(twl_classify(a.get(), v.get(), al.get(), grid.data(), grid.size(), o.lmax, &opt, &ex, &c, per.data(),
                     levels.data()));
  r.table = std::make_unique<Table>(std::vector<std::string>{"eps", "level", "in_L", "best_value", "q", "p"});
  json per_eps = json::array();
  for (std::size_t e = 0; e < grid.size(); ++e) {
    for (int l = 0; l < o.lmax; ++l) {
      const auto& rec = levels[e * o.lmax + l];
      r.table->add({scalar_text(grid[e]), std::to_string(rec.level), truth_text(rec.in_l), num(rec.best_value),
                    rec.has_witness ? join(rec.witness.q, rec.witness.m) : "",
                    rec.has_witness ? join(rec.witness.p, rec.witness.n) : ""});
    }
    json j;
    j["eps"] = scalar_text(grid[e]);
    j["levels_in_L"] = per[e].true_count;
    j["trailing_run"] = per[e].trailing_true;
    j["top_half_in_L"] = per[e].top_half_true;
    j["top_half_size"] = per[e].top_half_size;
    j["cofinite"] = per[e].cofinite != 0;
    j["empty_tail"] = per[e].empty_tail != 0;
    j["infinite_looking"] = per[e].infinite_looking != 0;
    per_eps.push_back(j);
  }
  r.outputs["verdict"] = twl_verdict_name(c.verdict);
  r.outputs["heuristic"] = "finite-scale evidence only; no asymptotic statement is certified";
  r.outputs["per_eps"] = per_eps;
  r.indeterminate = c.indeterminate_total;
  r.comparisons = c.comparisons;
  r.summary = std::string("classify: ") + twl_verdict_name(c.verdict) + " (lmax " + std::to_string(o.lmax) + ", " +
              std::to_string(grid.size()) + " eps values)";
}

void cmd_lset(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto v = load_weights(o.v, n);
  auto al = load_weights(o.alpha, m);
  if (o.lmax < 1) usage("--lmax must be positive");
  const auto eps = parse_scalar(o.eps);
  const auto ex = exec_of(o);
  std::vector<twl_level_record> levels(o.lmax);
  twl_level_summary s;
  check(twl_level_set_prefix(a.get(), v.get(), al.get(), eps, o.lmax, &ex, levels.data(), &s));
  r.table = std::make_unique<Table>(
      std::vector<std::string>{"level", "in_L", "best_value", "q", "p", "residuals", "indeterminate"});
  int in_l = 0;
  json members = json::array();
  for (const auto& rec : levels) {
    if (rec.in_l == TWL_TRUE) {
      ++in_l;
      members.push_back(rec.level);
    }
    r.table->add({std::to_string(rec.level), truth_text(rec.in_l), num(rec.best_value),
                  rec.has_witness ? join(rec.witness.q, rec.witness.m) : "",
                  rec.has_witness ? join(rec.witness.p, rec.witness.n) : "",
                  rec.has_witness ? join(rec.witness.residuals, rec.witness.n) : "",
                  std::to_string(rec.indeterminate)});
  }
  r.outputs["eps"] = scalar_text(eps);
  r.outputs["levels_in_L"] = members;
  r.indeterminate = s.indeterminate_total;
  r.comparisons = s.comparisons;
  r.summary =
      "lset: " + std::to_string(in_l) + "/" + std::to_string(o.lmax) + " levels in L (eps " + scalar_text(eps) + ")";
}

void cmd_dirichlet(const Options& o, Report& r) {
  const std::string mode = o.mode.empty() ? "levels" : o.mode;
  const auto ex = exec_of(o);
  if (mode == "constants") {
    const auto n = o.n ? o.n : 1, m = o.m ? o.m : 1;
    auto v = load_weights(o.v, n);
    auto al = load_weights(o.alpha, m);
    std::vector<twl_scalar> vs, as;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(twl_real(twl_weights_get(v.get(), i)));
    for (std::size_t j = 0; j < m; ++j) as.push_back(twl_real(twl_weights_get(al.get(), j)));
    r.table = std::make_unique<Table>(std::vector<std::string>{"name", "value"});
    std::string line;
    if (!o.big_c.empty() || !o.big_n.empty()) {
      if (o.big_c.empty() || o.big_n.empty()) usage("c1 needs both --C and --N");
      double c1 = 0;
      check(twl_compute_c1(parse_scalar(o.big_c), parse_scalar(o.big_n), vs.data(), n, as.data(), m, &c1));
      r.table->add({"c1", num(c1)});
      r.outputs["c1"] = c1;
      line += " c1=" + num(c1);
    }
    double c2 = 0;
    check(twl_compute_c2(parse_scalar(o.eps), vs.data(), n, as.data(), m, &c2));
    r.table->add({"c2", num(c2)});
    r.outputs["c2"] = c2;
    r.summary = "dirichlet constants:" + line + " c2=" + num(c2);
    return;
  }
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto v = load_weights(o.v, n);
  auto al = load_weights(o.alpha, m);
  if (mode == "transference") {
    if (o.big_c.empty() || o.big_n.empty()) usage("transference mode needs --C and --N");
    const std::size_t count = o.shifts ? o.shifts : 100;
    std::vector<double> shifts(count * n);
    check(twl_sample_shifts(n, count, o.seed, shifts.data()));
    twl_transference_summary s;
    std::vector<twl_shift_check> checks(count);
    check(twl_verify_transference(a.get(), v.get(), al.get(), parse_scalar(o.big_c), parse_scalar(o.big_n),
                                  shifts.data(), count, &ex, &s, checks.data()));
    r.table =
        std::make_unique<Table>(std::vector<std::string>{"shift", "b", "solved", "q", "p", "qnorm", "in_proof_box"});
    for (std::size_t k = 0; k < count; ++k) {
      const auto& c = checks[k];
      r.table->add({std::to_string(k), join(c.b, n), truth_text(c.solved),
                    c.has_witness ? join(c.witness.q, c.witness.m) : "",
                    c.has_witness ? join(c.witness.p, c.witness.n) : "", c.has_witness ? num(c.witness.qnorm) : "",
                    c.in_proof_box ? "true" : "false"});
    }
    r.outputs["base"] = s.base;
    r.outputs["c1"] = s.c1;
    r.outputs["radii"] = std::vector<double>(s.radii, s.radii + n);
    r.outputs["norm_bound"] = s.norm_bound;
    r.outputs["passes"] = s.passes;
    r.outputs["failures"] = s.failures;
    r.outputs["in_proof_box"] = s.in_proof_box;
    r.indeterminate = s.indeterminate;
    r.comparisons = count;
    json d;
    d["passes"] = s.passes;
    d["failures"] = s.failures;
    r.claim("every sampled shift b is solved with |q|_alpha < c1 N", s.failures == 0 && s.indeterminate == 0, d);
    r.summary = "dirichlet transference: " + std::to_string(s.passes) + "/" + std::to_string(count) +
                " shifts solved (c1 " + num(s.c1) + ")";
    return;
  }
  if (mode == "levels") {
    const std::size_t per = o.shifts ? o.shifts : 20;
    if (o.lmax < 1) usage("--lmax must be positive");
    twl_level_transference_summary s;
    std::vector<twl_level_transference_row> rows(o.lmax);
    check(twl_verify_level_transference(a.get(), v.get(), al.get(), parse_scalar(o.eps), o.lmax, per, o.seed, &ex, &s,
                                        rows.data()));
    r.table = std::make_unique<Table>(
        std::vector<std::string>{"level", "radii", "norm_bound", "passes", "failures", "indeterminate"});
    std::size_t indet = 0;
    for (std::size_t k = 0; k < s.levels_in_l; ++k) {
      const auto& row = rows[k];
      indet += row.indeterminate;
      r.table->add({std::to_string(row.level), join(row.radii, n), num(row.norm_bound), std::to_string(row.passes),
                    std::to_string(row.failures), std::to_string(row.indeterminate)});
    }
    r.outputs["c2"] = s.c2;
    r.outputs["levels_in_L"] = s.levels_in_l;
    r.outputs["failures"] = s.failures;
    r.indeterminate = indet + s.indeterminate_total;
    r.comparisons = s.levels_in_l * per;
    json d;
    d["levels"] = s.levels_in_l;
    d["failures"] = s.failures;
    r.claim("every level in L admits inhomogeneous solutions within eps c2 2^{-l v_i m/n}", s.failures == 0, d);
    r.summary = "dirichlet levels: " + std::to_string(s.levels_in_l) + " levels checked, " +
                std::to_string(s.failures) + " failures (c2 " + num(s.c2) + ")";
    return;
  }
  if (mode == "solve") {
    const auto b = parse_scalars(o.b);
    const auto radii = parse_scalars(o.radii);
    if (b.size() != n || radii.size() != n) usage("--b and --radii need one entry per matrix row");
    if (o.norm_bound.empty()) usage("solve mode needs --M");
    twl_truth found;
    twl_witness w;
    std::uint64_t indet = 0;
    check(twl_inhomogeneous_solve(a.get(), al.get(), b.data(), radii.data(), parse_scalar(o.norm_bound), o.inclusive,
                                  &ex, &found, &w, &indet));
    r.table = std::make_unique<Table>(std::vector<std::string>{"found", "q", "p", "residuals", "qnorm"});
    const bool has = found == TWL_TRUE;
    r.table->add({truth_text(found), has ? join(w.q, w.m) : "", has ? join(w.p, w.n) : "",
                  has ? join(w.residuals, w.n) : "", has ? num(w.qnorm) : ""});
    r.outputs["found"] = truth_text(found);
    if (has) r.outputs["witness"] = witness_json(w);
    std::uint64_t candidates = 0;
    check(twl_count_ball(al.get(), parse_scalar(o.norm_bound), &candidates));
    r.indeterminate = indet;
    r.comparisons = candidates;
    r.summary = has ? "dirichlet solve: q = " + join(w.q, w.m, ",") + ", p = " + join(w.p, w.n, ",")
                    : "dirichlet solve: " + truth_text(found);
    return;
  }
  usage("--mode must be levels, transference, solve or constants");
}

void cmd_measure(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto al = load_weights(o.alpha, m);
  auto psi = load_psi(o.psi, n);
  const auto cutoffs = parse_scalars(o.cutoffs);
  if (cutoffs.empty()) usage("--cutoffs must not be empty");
  const auto est = estimator_of(o, n);
  const auto ex = exec_of(o);
  std::vector<twl_measure_estimate> out(cutoffs.size());
  check(twl_limsup_measure(a.get(), psi.get(), al.get(), cutoffs.data(), cutoffs.size(), &est,
                           parse_scalar(o.tail_start), &ex, out.data()));
  r.table = std::make_unique<Table>(std::vector<std::string>{"Q", "method", "resolution", "estimate", "half_width"});
  json est_list = json::array();
  bool monotone = true;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& e = out[k];
    if (k > 0 && e.value < out[k - 1].value) monotone = false;
    r.table->add(
        {scalar_text(cutoffs[k]), twl_method_name(e.method), num(e.resolution), num(e.value), num(e.half_width)});
    json j;
    j["Q"] = scalar_text(cutoffs[k]);
    j["estimate"] = e.value;
    j["half_width"] = e.half_width;
    est_list.push_back(j);
  }
  r.outputs["estimator"] = estimator_json(est);
  r.outputs["tail_start"] = o.tail_start;
  r.outputs["estimates"] = est_list;
  r.claim("estimates are non-decreasing in Q", monotone);
  if (!o.b.empty()) {
    const auto b = parse_scalars(o.b);
    if (b.size() != n) usage("--b needs one entry per matrix row");
    std::uint64_t count = 0, indet = 0;
    std::vector<twl_witness> w(o.witness_cap);
    std::size_t nw = 0;
    check(twl_hit_count(b.data(), a.get(), psi.get(), al.get(), cutoffs.back(), o.witness_cap, &ex, &count, w.data(),
                        &nw, &indet));
    json h;
    h["Q"] = scalar_text(cutoffs.back());
    h["count"] = count;
    h["indeterminate"] = indet;
    json ws = json::array();
    for (std::size_t k = 0; k < nw; ++k) ws.push_back(witness_json(w[k]));
    h["witnesses"] = ws;
    r.outputs["hit_count"] = h;
    r.indeterminate += indet;
    r.comparisons += count + indet;
  }
  if (o.bc_shells > 0) {
    twl_borel_cantelli bc;
    check(twl_borel_cantelli_bound(psi.get(), al.get(), o.bc_shells, &ex, &bc));
    json j;
    j["shells"] = bc.shells;
    j["constant"] = bc.constant;
    j["volume_sum"] = bc.volume_sum;
    j["series_sum"] = bc.series_sum;
    j["bound"] = bc.bound;
    r.outputs["borel_cantelli"] = j;
    r.claim("rectangle volume sum is below the series bound", bc.volume_sum <= bc.bound, j);
  }
  r.summary = "measure: estimate " + num(out.back().value) + " at Q = " + scalar_text(cutoffs.back()) + " (" +
              twl_method_name(est.method) + ")";
}

void cmd_equidist(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto al = load_weights(o.alpha, m);
  if (o.box.empty()) usage("--box is required, e.g. 0:0.25");
  const auto box = parse_box(o.box, n);
  const auto ns = parse_scalars(o.n_list);
  if (ns.empty()) usage("--N must not be empty");
  const auto ex = exec_of(o);
  r.table = std::make_unique<Table>(std::vector<std::string>{"N", "count_in_B", "count_total", "ratio"});
  json rows = json::array();
  double last = 0;
  for (const auto& big_n : ns) {
    twl_equidist e;
    check(twl_equidist_ratio(a.get(), al.get(), box.center.data(), box.radii.data(), big_n, &ex, &e));
    r.table->add({scalar_text(big_n), std::to_string(e.in_box), std::to_string(e.total), num(e.ratio)});
    json j;
    j["N"] = scalar_text(big_n);
    j["count_in_B"] = e.in_box;
    j["count_total"] = e.total;
    j["ratio"] = e.ratio;
    j["deviation_from_volume"] = e.ratio - box.area;
    rows.push_back(j);
    last = e.ratio;
  }
  r.outputs["box_volume"] = box.area;
  r.outputs["q_zero_counted"] = true;
  r.outputs["ratios"] = rows;
  r.summary = "equidist: ratio " + num(last) + " vs volume " + num(box.area) + " at N = " + scalar_text(ns.back());
}

void cmd_coverage(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto v = load_weights(o.v, n);
  auto al = load_weights(o.alpha, m);
  if (o.box.empty()) usage("--box is required, e.g. 0.3:0.5");
  const auto box = parse_box(o.box, n);
  const auto ex = exec_of(o);
  twl_ubiquity_options uo{};
  if (!o.c3.empty()) {
    uo.has_c3 = 1;
    uo.c3 = parse_scalar(o.c3);
  }
  uo.allow_inadmissible = o.allow_inadmissible;
  twl_ubiquity* raw = nullptr;
  check(twl_ubiquity_create(a.get(), v.get(), al.get(), parse_scalar(o.eps), o.lmax, &uo, &ex, &raw));
  Ubiquity u(raw);
  twl_ubiquity_info info;
  check(twl_ubiquity_get_info(u.get(), &info));
  std::vector<std::size_t> ks;
  if (o.ks == "upper") {
    for (std::size_t k = info.levels / 2; k < info.levels; ++k) ks.push_back(k);
  } else if (o.ks == "all") {
    for (std::size_t k = 0; k < info.levels; ++k) ks.push_back(k);
  } else {
    for (const auto& t : split(o.ks, ',')) {
      const long k = std::strtol(t.c_str(), nullptr, 10);
      if (k < 1 || static_cast<std::size_t>(k) > info.levels) {
        usage("--k index " + t + " outside 1.." + std::to_string(info.levels));
      }
      ks.push_back(static_cast<std::size_t>(k - 1));
    }
  }
  const auto est = estimator_of(o, n);
  r.table = std::make_unique<Table>(std::vector<std::string>{"k", "level", "u_k", "l_k", "rho", "resonant_points",
                                                             "fraction", "half_width", "claim"});
  std::size_t passes = 0;
  for (const auto k : ks) {
    twl_ubiquity_level lv;
    check(twl_ubiquity_get_level(u.get(), k, &lv));
    twl_coverage c;
    check(twl_ubiquity_coverage(a.get(), al.get(), u.get(), k, box.center.data(), box.radii.data(), &est, &ex, &c));
    const bool pass = c.fraction >= 0.5;
    passes += pass;
    r.table->add({std::to_string(k + 1), std::to_string(lv.level), num(lv.upper), num(lv.lower), join(lv.rho, n),
                  std::to_string(c.resonant_points), num(c.fraction), num(c.half_width), pass ? "pass" : "fail"});
    json d;
    d["k"] = k + 1;
    d["level"] = lv.level;
    d["fraction"] = c.fraction;
    r.claim("covered fraction of B is at least 1/2", pass, d);
  }
  json cfg;
  cfg["eps"] = info.eps;
  cfg["c2"] = info.c2;
  cfg["c3"] = info.c3;
  cfg["c3_bound"] = info.c3_bound;
  cfg["c3_admissible"] = info.admissible != 0;
  cfg["levels"] = info.levels;
  r.outputs["ubiquity"] = cfg;
  r.outputs["estimator"] = estimator_json(est);
  r.outputs["checked"] = ks.size();
  r.outputs["passes"] = passes;
  r.summary =
      "coverage: " + std::to_string(passes) + "/" + std::to_string(ks.size()) + " levels cover at least half of B";
}

void cmd_dim(const Options& o, Report& r) {
  twl_dim* raw = nullptr;
  const std::string mode = o.mode.empty() ? "unweighted" : o.mode;
  std::vector<twl_scalar> tau;
  if (mode == "unweighted") {
    tau = parse_scalars(o.tau);
    if (o.m == 0) usage("--m is required");
    const std::size_t n = o.n ? o.n : tau.size();
    check(twl_dim_unweighted(o.m, n, tau.data(), &raw));
  } else if (mode == "weighted2d") {
    tau = parse_scalars(o.tau);
    if (o.m == 0) usage("--m is required");
    const auto v = parse_scalars(o.v.empty() ? "1,1" : o.v);
    if (v.size() != 2 || tau.size() != 2) usage("weighted2d needs two --v and two --tau entries");
    check(twl_dim_weighted_2d(o.m, v.data(), tau.data(), &raw));
  } else if (mode == "mtprr") {
    const auto av = parse_scalars(o.a);
    const auto tv = parse_scalars(o.t);
    if (av.empty() || av.size() != tv.size()) usage("mtprr needs --a and --t of equal length");
    check(twl_dim_mtprr(av.data(), tv.data(), av.size(), &raw));
  } else {
    usage("--mode must be unweighted, weighted2d or mtprr");
  }
  Dim d(raw);
  twl_dim_info info;
  check(twl_dim_get_info(d.get(), &info));
  r.table = std::make_unique<Table>(std::vector<std::string>{"pivot", "K1", "K2", "K3", "d", "argmin"});
  json pivots = json::array();
  for (std::size_t i = 0; i < info.pivots; ++i) {
    twl_pivot_row p;
    check(twl_dim_get_pivot(d.get(), i, &p));
    r.table->add({p.pivot_text, join(p.k1, p.k1_size), join(p.k2, p.k2_size), join(p.k3, p.k3_size), p.d_text,
                  i == info.argmin ? "true" : "false"});
    json j;
    j["pivot"] = p.pivot_text;
    j["K1"] = std::vector<int>(p.k1, p.k1 + p.k1_size);
    j["K2"] = std::vector<int>(p.k2, p.k2 + p.k2_size);
    j["K3"] = std::vector<int>(p.k3, p.k3 + p.k3_size);
    j["d"] = p.d_text;
    pivots.push_back(j);
  }
  json conds = json::array();
  for (std::size_t i = 0; i < info.conditions; ++i) {
    twl_condition c;
    check(twl_dim_get_condition(d.get(), i, &c));
    json j;
    j["condition"] = c.name;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["holds"] = c.holds != 0;
    conds.push_back(j);
    r.claim(c.name, c.holds != 0);
  }
  r.outputs["mode"] = mode;
  r.outputs["value"] = info.value_text;
  r.outputs["value_float"] = info.value;
  r.outputs["pivots"] = pivots;
  r.outputs["argmin"] = info.argmin;
  r.outputs["conditions"] = conds;
  if (info.cross_check >= 0) {
    r.outputs["cross_check"] = info.cross_check == 1;
    r.claim("closed form agrees with the pivot minimization", info.cross_check == 1);
  }
  if (mode == "unweighted") {
    json ucx = json::array();
    for (std::size_t j = 1; j <= tau.size(); ++j) {
      char text[TWL_TEXT];
      check(twl_upper_cover_exponent(o.m, tau.data(), tau.size(), j, nullptr, text, sizeof text));
      ucx.push_back(text);
    }
    r.outputs["upper_cover_exponents"] = ucx;
  }
  r.summary = "dim: s=" + std::string(info.value_text) + " (" + mode + ")";
}

void cmd_boxdim(const Options& o, Report& r) {
  auto a = load_matrix(o);
  const auto n = twl_matrix_rows(a.get()), m = twl_matrix_cols(a.get());
  auto al = load_weights(o.alpha, m);
  auto psi = load_psi(o.psi, n);
  std::vector<double> deltas;
  if (!o.deltas.empty()) {
    deltas = parse_doubles(o.deltas);
  } else {
    if (o.kmin < 0 || o.kmax < o.kmin || o.kmax > 30) usage("need 0 <= --kmin <= --kmax <= 30");
    for (int k = o.kmin; k <= o.kmax; ++k) deltas.push_back(std::ldexp(1.0, -k));
  }
  twl_box_cover cover = TWL_COVER_SHELL;
  if (o.cover == "union") {
    cover = TWL_COVER_UNION;
  } else if (o.cover != "shell") {
    usage("--cover must be shell or union");
  }
  const auto ex = exec_of(o);
  twl_box_dim bd;
  std::vector<twl_box_count> counts(deltas.size());
  check(twl_box_dim_estimate(a.get(), psi.get(), al.get(), parse_scalar(o.q_max), deltas.data(), deltas.size(), cover,
                             &ex, &bd, counts.data()));
  r.table =
      std::make_unique<Table>(std::vector<std::string>{"delta", "boxes", "total", "rectangles", "excluded", "reason"});
  for (const auto& c : counts) {
    r.table->add({num(c.delta), std::to_string(c.boxes), std::to_string(c.total), std::to_string(c.rectangles),
                  c.excluded ? "true" : "false", c.reason});
  }
  r.outputs["cover"] = o.cover;
  r.outputs["slope"] = bd.slope;
  r.outputs["intercept"] = bd.intercept;
  r.outputs["rms_residual"] = bd.residual;
  r.outputs["deltas_used"] = bd.used;
  r.outputs["note"] = bd.note;
  r.summary = "boxdim: slope " + num(bd.slope) + " from " + std::to_string(bd.used) + " box sizes (" + o.cover + ")";
}

void cmd_series(const Options& o, Report& r) {
  const std::size_t n = o.n ? o.n : 1;
  const std::size_t m = o.m ? o.m : 1;
  auto psi = load_psi(o.psi, n);
  if (o.kind != "dyadic" && o.kind != "radial" && o.kind != "both") usage("--kind must be dyadic, radial or both");
  r.table = std::make_unique<Table>(std::vector<std::string>{"kind", "K", "partial_sum"});
  if (o.kind != "radial") {
    std::vector<int> levels;
    if (!o.levels.empty()) {
      for (const auto& t : split(o.levels, ',')) levels.push_back(std::atoi(t.c_str()));
    } else {
      for (std::size_t k = 1; k <= o.count; ++k) levels.push_back(static_cast<int>(k));
    }
    std::vector<double> sums(std::min(levels.size(), o.count));
    check(twl_dyadic_series(psi.get(), m, levels.data(), levels.size(), o.count, sums.data()));
    for (std::size_t k = 0; k < sums.size(); ++k) r.table->add({"dyadic", std::to_string(k + 1), num(sums[k])});
    double g = 0;
    check(twl_growth_exponent(sums.data(), sums.size(), &g));
    json j;
    j["levels"] = levels;
    j["final"] = sums.empty() ? 0.0 : sums.back();
    j["growth_exponent"] = g;
    r.outputs["dyadic"] = j;
  }
  if (o.kind != "dyadic") {
    std::vector<double> sums(o.radial_cutoff);
    check(twl_radial_series(psi.get(), m, o.radial_cutoff, sums.data()));
    for (std::size_t k = 0; k < sums.size(); ++k) r.table->add({"radial", std::to_string(k + 1), num(sums[k])});
    double g = 0;
    check(twl_growth_exponent(sums.data(), sums.size(), &g));
    json j;
    j["cutoff"] = o.radial_cutoff;
    j["final"] = sums.empty() ? 0.0 : sums.back();
    j["growth_exponent"] = g;
    r.outputs["radial"] = j;
  }
  r.outputs["note"] = "partial sums and growth exponents are descriptive; no divergence verdict is drawn";
  auto v = load_weights(o.v, n);
  double ratio = 0;
  check(twl_hypothesis_ratio(psi.get(), v.get(), m, std::max(o.lmax, 1), &ratio));
  r.outputs["hypothesis_ratio_max"] = ratio;
  r.summary = "series: " + std::to_string(r.table->size()) + " partial sums (" + o.kind + ")";
}

// ---- plumbing ----

std::string join_list(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

// Turns a JSON object into "--key value" arguments for keys not already on
// the command line.
std::vector<std::string> config_args(const std::string& path, const std::set<std::string>& given) {
  std::ifstream in(path);
  if (!in) usage("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    usage("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) usage("config file '" + path + "' must hold a JSON object");
  std::vector<std::string> args;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    std::string key = it.key();
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "command" || given.count(key)) continue;
    const auto& val = it.value();
    if (val.is_boolean()) {
      if (val.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    if (val.is_array()) {
      std::vector<std::string> parts;
      for (const auto& x : val) parts.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      args.push_back(join_list(parts));
    } else {
      args.push_back(val.is_string() ? val.get<std::string>() : val.dump());
    }
  }
  return args;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Failure{kResource, "cannot write '" + p.string() + "'"};
  f << content;
  f.close();
  if (!f) throw Failure{kResource, "cannot write '" + p.string() + "'"};
}

using Handler = std::function<void(const Options&, Report&)>;

void add_shared(CLI::App* s, Options& o) {
  s->add_option("--config", o.config, "JSON file with option values (command line wins)");
  s->add_option("--matrix", o.matrix, "matrix: preset name, file path, file:<path> or inline 'a,b;c,d'");
  s->add_option("--preset", o.preset, "named matrix preset");
  s->add_option("--v", o.v, "row weights v (comma list, default all ones)");
  s->add_option("--alpha", o.alpha, "column weights alpha (comma list, default all ones)");
  s->add_option("--seed", o.seed, "root seed")->capture_default_str();
  s->add_option("--workers", o.workers, "worker threads; results do not depend on it")->capture_default_str();
  s->add_option("--budget", o.budget, "enumeration point budget")->capture_default_str();
  s->add_option("--out", o.out, "output directory (default $TWISTLAB_OUT or ./twistlab-out)");
  s->add_option("--max-indeterminate", o.max_indeterminate, "largest tolerated indeterminate fraction")
      ->capture_default_str();
}

json echo_config(const CLI::App* s) {
  json cfg;
  for (const auto* opt : s->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config" || name == "out" || name == "workers") continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      cfg[name] = opt->get_items_expected_max() == 0 ? json(true) : json(join_list(res));
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"twistlab: weighted twisted inhomogeneous Diophantine approximation laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(twl_version()));
  Options o;
  std::map<std::string, std::pair<CLI::App*, Handler>> subs;
  auto sub = [&](const char* name, const char* desc, Handler h) {
    CLI::App* s = app.add_subcommand(name, desc);
    add_shared(s, o);
    subs[name] = {s, std::move(h)};
    return s;
  };

  auto* classify = sub("classify", "finite-scale singular / badly approximable verdict", cmd_classify);
  classify->add_option("--eps-grid", o.eps_grid, "epsilon values")->capture_default_str();
  classify->add_option("--lmax", o.lmax, "largest dyadic level")->capture_default_str();
  classify->add_option("--tail-fraction", o.tail_fraction, "trailing run fraction for a cofinite prefix")
      ->capture_default_str();
  classify->add_option("--top-half-fraction", o.top_half_fraction, "top-half fraction for infinitely-many-looking")
      ->capture_default_str();

  auto* lset = sub("lset", "prefix of the level set L", cmd_lset);
  lset->add_option("--eps", o.eps, "epsilon")->capture_default_str();
  lset->add_option("--lmax", o.lmax, "largest dyadic level")->capture_default_str();

  auto* dir = sub("dirichlet", "inhomogeneous Dirichlet systems and transference", cmd_dirichlet);
  dir->add_option("--mode", o.mode, "levels | transference | solve | constants (default levels)");
  dir->add_option("--eps", o.eps, "epsilon")->capture_default_str();
  dir->add_option("--lmax", o.lmax, "largest dyadic level")->capture_default_str();
  dir->add_option("--C", o.big_c, "homogeneous radius C");
  dir->add_option("--N", o.big_n, "homogeneous norm bound N");
  dir->add_option("--shifts", o.shifts, "number of shifts (default 100, or 20 per level)");
  dir->add_option("--b", o.b, "shift b (solve mode)");
  dir->add_option("--radii", o.radii, "per-row radii (solve mode)");
  dir->add_option("--M", o.norm_bound, "norm bound (solve mode)");
  dir->add_flag("--inclusive", o.inclusive, "use <= for the row inequalities (solve mode)");
  dir->add_option("--m", o.m, "columns (constants mode)");
  dir->add_option("--n", o.n, "rows (constants mode)");

  auto* meas = sub("measure", "Lebesgue measure of truncated limsup sets", cmd_measure);
  meas->add_option("--psi", o.psi, "approximation functions, e.g. pow:0.4,1");
  meas->add_option("--cutoffs", o.cutoffs, "increasing norm cutoffs Q")->capture_default_str();
  meas->add_option("--method", o.method, "grid | monte-carlo | auto")->capture_default_str();
  meas->add_option("--grid-step", o.grid_step, "grid step per axis")->capture_default_str();
  meas->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  meas->add_option("--tail-start", o.tail_start, "only count rectangles with |q|_alpha above this")
      ->capture_default_str();
  meas->add_option("--b", o.b, "also count hits for this point at the last cutoff");
  meas->add_option("--bc-shells", o.bc_shells, "dyadic shells for the convergence bound (0: skip)")
      ->capture_default_str();

  auto* eq = sub("equidist", "equidistribution ratio of {Aq} in a box", cmd_equidist);
  eq->add_option("--box", o.box, "box lo:hi per axis");
  eq->add_option("--N", o.n_list, "norm cutoffs N")->capture_default_str();

  auto* cov = sub("coverage", "local ubiquity coverage of a box", cmd_coverage);
  cov->add_option("--eps", o.eps, "epsilon")->capture_default_str();
  cov->add_option("--lmax", o.lmax, "largest dyadic level of the prefix")->capture_default_str();
  cov->add_option("--box", o.box, "box lo:hi per axis");
  cov->add_option("--k", o.ks, "1-based level indices, 'upper' or 'all'")->capture_default_str();
  cov->add_option("--c3", o.c3, "lower shell factor (default half the admissible bound)");
  cov->add_flag("--allow-inadmissible", o.allow_inadmissible, "accept c3 above the admissible bound");
  cov->add_option("--method", o.method, "grid | monte-carlo | auto")->capture_default_str();
  cov->add_option("--grid-step", o.grid_step, "grid step per axis")->capture_default_str();
  cov->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();

  auto* dim = sub("dim", "Hausdorff dimension formulas", cmd_dim);
  dim->add_option("--mode", o.mode, "unweighted | weighted2d | mtprr (default unweighted)");
  dim->add_option("--m", o.m, "columns m");
  dim->add_option("--n", o.n, "rows n");
  dim->add_option("--tau", o.tau, "exponents tau");
  dim->add_option("--a", o.a, "exponents a (mtprr)");
  dim->add_option("--t", o.t, "exponents t (mtprr)");

  auto* box = sub("boxdim", "box-counting slope of a truncated limsup set", cmd_boxdim);
  box->add_option("--psi", o.psi, "approximation functions, e.g. pow:1,2");
  box->add_option("--Q", o.q_max, "norm cutoff")->capture_default_str();
  box->add_option("--deltas", o.deltas, "decreasing box sizes 1/K");
  box->add_option("--kmin", o.kmin, "box sizes 2^-kmin .. 2^-kmax")->capture_default_str();
  box->add_option("--kmax", o.kmax, "box sizes 2^-kmin .. 2^-kmax")->capture_default_str();
  box->add_option("--cover", o.cover, "shell | union")->capture_default_str();

  auto* ser = sub("series", "dyadic and radial partial sums", cmd_series);
  ser->add_option("--psi", o.psi, "approximation functions");
  ser->add_option("--m", o.m, "columns m (default 1)");
  ser->add_option("--n", o.n, "rows n (default 1)");
  ser->add_option("--kind", o.kind, "dyadic | radial | both")->capture_default_str();
  ser->add_option("--levels", o.levels, "dyadic levels (default 1..count)");
  ser->add_option("--count", o.count, "number of dyadic partial sums")->capture_default_str();
  ser->add_option("--R", o.radial_cutoff, "radial cutoff")->capture_default_str();
  ser->add_option("--lmax", o.lmax, "levels sampled for the hypothesis ratio")->capture_default_str();

  // Expand --config before parsing.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::set<std::string> given;
    for (const auto& x : args) {
      if (x.rfind("--", 0) == 0)
        given.insert(x.substr(2, x.find('=') == std::string::npos ? std::string::npos : x.find('=') - 2));
    }
    try {
      auto extra = config_args(args[i + 1], given);
      const std::size_t at = subs.count(args[0]) ? 1 : 0;
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    } catch (const Failure& f) {
      err << "twistlab: error: " << f.message << "\n";
      return kUsage;
    }
    break;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto& [name, entry] : subs) {
    auto* s = entry.first;
    if (!s->parsed()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Report report;
    try {
      entry.second(o, report);
    } catch (const Failure& f) {
      err << "twistlab " << name << ": error: " << f.message << "\n";
      return f.code;
    } catch (const std::exception& e) {
      err << "twistlab " << name << ": internal error: " << e.what() << "\n";
      return kInternal;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int code = kOk;
    const double denom = static_cast<double>(std::max<std::uint64_t>(report.comparisons, 1));
    const double frac = static_cast<double>(report.indeterminate) / denom;
    if (report.indeterminate > 0 && frac > o.max_indeterminate) code = kIndeterminate;

    json j;
    j["tool"] = "twistlab";
    j["version"] = twl_version();
    j["command"] = name;
    j["config"] = echo_config(s);
    j["seed"] = o.seed;
    j["wall_time_s"] = wall;
    j["outputs"] = report.outputs;
    j["claims"] = report.claims;
    json ind;
    ind["count"] = report.indeterminate;
    ind["comparisons"] = report.comparisons;
    ind["fraction"] = frac;
    ind["dominated"] = code == kIndeterminate;
    j["indeterminate"] = ind;
    j["exit_code"] = code;

    std::string dir = o.out;
    if (dir.empty()) {
      const char* env = std::getenv("TWISTLAB_OUT");
      dir = (env && *env) ? env : "twistlab-out";
    }
    try {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw Failure{kResource, "cannot create output directory '" + dir + "': " + ec.message()};
      const std::filesystem::path base(dir);
      write_file(base / (name + ".json"), j.dump(2) + "\n");
      if (report.table) write_file(base / (name + ".csv"), report.table->str());
    } catch (const Failure& f) {
      err << "twistlab " << name << ": error: " << f.message << "\n";
      return f.code;
    }
    out << report.summary;
    if (code == kIndeterminate) out << " [indeterminate-dominated]";
    out << "\n";
    return code;
  }
  return kUsage;
}

}  // namespace twistlab_cli

#include "holevo/holevo.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "holevo/additivity.hpp"
#include "holevo/capacity.hpp"
#include "holevo/experiments.hpp"
#include "holevo/io.hpp"

struct hl_channel {
  holevo::Channel value;
};
struct hl_state {
  holevo::DensityOperator value;
};
struct hl_constraint {
  holevo::ConstraintSet value;
};
struct hl_result {
  holevo::CapacityResult value;
  double wall_time;
};

namespace {

using namespace holevo;
using Clock = std::chrono::steady_clock;

thread_local std::string last_error;

struct NullPointer : std::runtime_error {
  using std::runtime_error::runtime_error;
};

hl_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidOperand: return HL_ERR_INVALID_OPERAND;
    case ErrorCode::kDimensionMismatch: return HL_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kInvalidArgument: return HL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInfeasible: return HL_ERR_INFEASIBLE;
    case ErrorCode::kDegenerateTransport: return HL_ERR_DEGENERATE_TRANSPORT;
    case ErrorCode::kUnsupported: return HL_ERR_UNSUPPORTED;
    case ErrorCode::kParse: return HL_ERR_PARSE;
  }
  return HL_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <class F>
hl_status guarded(F&& fn) {
  try {
    last_error.clear();
    fn();
    return HL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const NullPointer& e) {
    last_error = e.what();
    return HL_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  }
  return HL_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw NullPointer(std::string("null pointer: ") + what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Matrix read_matrix(int rows, int cols, const double* data) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const std::size_t k = 2 * (static_cast<std::size_t>(r) * cols + c);
      m(r, c) = cplx(data[k], data[k + 1]);
    }
  return m;
}

void write_matrix(const Matrix& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const std::size_t k = 2 * (static_cast<std::size_t>(r) * m.cols() + c);
      out[k] = m(r, c).real();
      out[k + 1] = m(r, c).imag();
    }
}

SolverOptions solver_options(const hl_options* o) {
  SolverOptions s;
  if (o == nullptr) return s;
  if (!(o->tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  if (o->max_iter <= 0) throw Error(ErrorCode::kInvalidArgument, "max_iter must be positive");
  s.tol = o->tol;
  s.max_iter = o->max_iter;
  s.seed = o->seed;
  if (o->multistart > 0) s.multistart = o->multistart;
  if (o->qubit_grid > 0) s.qubit_grid = o->qubit_grid;
  if (o->decomposition_starts > 0) s.decomposition_starts = o->decomposition_starts;
  return s;
}

DecompositionOptions decomposition_options(const SolverOptions& s) {
  DecompositionOptions d;
  d.starts = s.decomposition_starts;
  d.seed = s.seed;
  return d;
}

hl_format format_or_default(const hl_format* f) {
  hl_format out;
  hl_format_default(&out);
  return f == nullptr ? out : *f;
}

OutputFormat output_format(const hl_format& f, double wall_time) {
  OutputFormat o;
  o.bits = f.bits != 0;
  if (f.timing) o.wall_time = wall_time;
  return o;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double unit(const hl_format& f) { return f.bits ? 1.0 / std::log(2.0) : 1.0; }

std::string capacity_csv(const CapacityResult& r, const hl_format& f, double wall) {
  const double s = unit(f);
  std::ostringstream os;
  os << "value,lower_bound,upper_bound,gap,certified,converged,iterations" << (f.timing ? ",wall_time_s" : "") << '\n'
     << num(r.value * s) << ',' << num(r.lower_bound * s) << ',' << num(r.upper_bound * s) << ',' << num(r.gap * s)
     << ',' << r.certified << ',' << r.converged << ',' << r.iterations;
  if (f.timing) os << ',' << num(wall);
  os << '\n';
  return os.str();
}

std::string closure_csv(double value, const ConvexClosureResult& c, const hl_format& f, double wall) {
  const double s = unit(f);
  std::ostringstream os;
  os << "value,spread,agreeing_starts,decomposition_size" << (f.timing ? ",wall_time_s" : "") << '\n'
     << num(value * s) << ',' << num(c.spread * s) << ',' << c.agreeing_starts << ',' << c.decomposition.size();
  if (f.timing) os << ',' << num(wall);
  os << '\n';
  return os.str();
}

std::string verify_csv(const std::vector<SuiteResult>& suites) {
  std::ostringstream os;
  os << "suite,cases,passed,max_residual,tol,pass\n";
  for (const auto& r : suites)
    os << r.name << ',' << r.cases << ',' << r.passed << ',' << num(r.max_residual) << ',' << num(r.tol) << ','
       << (r.ok() ? "pass" : "fail") << '\n';
  return os.str();
}

template <class T, class V>
void emit(T** out, V&& value) {
  require(out, "output handle");
  *out = new T{std::forward<V>(value)};
}

}  // namespace

extern "C" {

const char* hl_version(void) { return "0.1.0"; }
const char* hl_last_error(void) { return last_error.c_str(); }

const char* hl_status_string(hl_status status) {
  switch (status) {
    case HL_OK: return "ok";
    case HL_ERR_INVALID_OPERAND: return "invalid operand";
    case HL_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case HL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HL_ERR_INFEASIBLE: return "infeasible constraint";
    case HL_ERR_DEGENERATE_TRANSPORT: return "degenerate transport";
    case HL_ERR_UNSUPPORTED: return "unsupported";
    case HL_ERR_PARSE: return "parse error";
    case HL_ERR_NULL_POINTER: return "null pointer";
    case HL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void hl_string_free(char* s) { std::free(s); }

void hl_options_default(hl_options* opts) {
  if (opts == nullptr) return;
  const SolverOptions s;
  *opts = hl_options{s.tol, s.max_iter, s.seed, s.multistart, s.qubit_grid, s.decomposition_starts};
}

void hl_format_default(hl_format* fmt) {
  if (fmt != nullptr) *fmt = hl_format{HL_FORMAT_JSON, 0, 0};
}

hl_status hl_channel_from_json(const char* json, hl_channel** out) {
  return guarded([&] {
    require(json, "json");
    emit(out, channel_from_json(json));
  });
}

hl_status hl_channel_noiseless(int d, hl_channel** out) {
  return guarded([&] { emit(out, noiseless(d)); });
}

hl_status hl_channel_depolarizing(int d, double p, hl_channel** out) {
  return guarded([&] { emit(out, depolarizing(d, p)); });
}

hl_status hl_channel_example2(int n, double q, int big_n, hl_channel** out) {
  return guarded([&] { emit(out, example2_channel({n, q, big_n})); });
}

hl_status hl_channel_compose(const hl_channel* outer, const hl_channel* inner, hl_channel** out) {
  return guarded([&] {
    require(outer, "outer");
    require(inner, "inner");
    emit(out, compose(outer->value, inner->value));
  });
}

hl_status hl_channel_tensor(const hl_channel* a, const hl_channel* b, hl_channel** out) {
  return guarded([&] {
    require(a, "left");
    require(b, "right");
    emit(out, tensor_channel(a->value, b->value));
  });
}

hl_status hl_channel_truncate(const hl_channel* phi, int n, hl_channel** out) {
  return guarded([&] {
    require(phi, "channel");
    emit(out, truncate(phi->value, n));
  });
}

int hl_channel_d_in(const hl_channel* phi) { return phi == nullptr ? 0 : phi->value.d_in(); }
int hl_channel_d_out(const hl_channel* phi) { return phi == nullptr ? 0 : phi->value.d_out(); }

hl_status hl_channel_apply(const hl_channel* phi, const double* rho, double* out) {
  return guarded([&] {
    require(phi, "channel");
    require(rho, "input");
    require(out, "output");
    const int d = phi->value.d_in();
    write_matrix(phi->value.apply(read_matrix(d, d, rho)), out);
  });
}

hl_status hl_channel_to_json(const hl_channel* phi, char** out) {
  return guarded([&] {
    require(phi, "channel");
    require(out, "output");
    *out = copy_string(channel_to_json(phi->value));
  });
}

void hl_channel_free(hl_channel* phi) { delete phi; }

hl_status hl_state_from_json(const char* json, hl_state** out) {
  return guarded([&] {
    require(json, "json");
    emit(out, state_from_json(json));
  });
}

hl_status hl_state_from_matrix(int d, const double* entries, hl_state** out) {
  return guarded([&] {
    require(entries, "entries");
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
    emit(out, DensityOperator(read_matrix(d, d, entries)));
  });
}

hl_status hl_state_maximally_mixed(int d, hl_state** out) {
  return guarded([&] { emit(out, DensityOperator::maximally_mixed(d)); });
}

int hl_state_dim(const hl_state* rho) { return rho == nullptr ? 0 : rho->value.dim(); }

hl_status hl_entropy(const hl_state* rho, double* out) {
  return guarded([&] {
    require(rho, "state");
    require(out, "output");
    *out = entropy(rho->value);
  });
}

hl_status hl_relative_entropy(const hl_state* a, const hl_state* b, double* out, int* finite) {
  return guarded([&] {
    require(a, "first state");
    require(b, "second state");
    require(out, "output");
    require(finite, "finite flag");
    const ExtendedReal r = relative_entropy(a->value, b->value);
    *finite = r.is_finite() ? 1 : 0;
    if (r.is_finite()) *out = r.value();
  });
}

void hl_state_free(hl_state* rho) { delete rho; }

hl_status hl_constraint_from_json(const char* json, hl_constraint** out) {
  return guarded([&] {
    require(json, "json");
    emit(out, constraint_from_json(json));
  });
}

hl_status hl_constraint_unconstrained(hl_constraint** out) {
  return guarded([&] { emit(out, ConstraintSet::unconstrained()); });
}

hl_status hl_constraint_singleton(const hl_state* rho, hl_constraint** out) {
  return guarded([&] {
    require(rho, "state");
    emit(out, ConstraintSet::singleton(rho->value));
  });
}

hl_status hl_constraint_expectation(int d, const double* observable, double bound, hl_constraint** out) {
  return guarded([&] {
    require(observable, "observable");
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
    emit(out, ConstraintSet::expectation_bound(HermitianOperator(read_matrix(d, d, observable)), bound));
  });
}

void hl_constraint_free(hl_constraint* c) { delete c; }

hl_status hl_capacity(const hl_channel* phi, const hl_constraint* c, const hl_options* opts, hl_result** out) {
  return guarded([&] {
    require(phi, "channel");
    require(c, "constraint");
    require(out, "output handle");
    const SolverOptions s = solver_options(opts);
    const auto start = Clock::now();
    CapacityResult r = chi_capacity(phi->value, c->value, s);
    *out = new hl_result{std::move(r), seconds_since(start)};
  });
}

double hl_result_value(const hl_result* r) { return r == nullptr ? NAN : r->value.value; }
double hl_result_lower(const hl_result* r) { return r == nullptr ? NAN : r->value.lower_bound; }
double hl_result_upper(const hl_result* r) { return r == nullptr ? NAN : r->value.upper_bound; }
double hl_result_gap(const hl_result* r) { return r == nullptr ? NAN : r->value.gap; }
int hl_result_converged(const hl_result* r) { return r != nullptr && r->value.converged ? 1 : 0; }
int hl_result_certified(const hl_result* r) { return r != nullptr && r->value.certified ? 1 : 0; }
int hl_result_iterations(const hl_result* r) { return r == nullptr ? 0 : r->value.iterations; }
double hl_result_wall_time(const hl_result* r) { return r == nullptr ? NAN : r->wall_time; }

hl_status hl_result_omega(const hl_result* r, double* out) {
  return guarded([&] {
    require(r, "result");
    require(out, "output");
    write_matrix(r->value.omega.matrix(), out);
  });
}

hl_status hl_result_format(const hl_result* r, const hl_format* fmt, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "output");
    const hl_format f = format_or_default(fmt);
    *out = copy_string(f.kind == HL_FORMAT_CSV ? capacity_csv(r->value, f, r->wall_time)
                                               : to_json(r->value, output_format(f, r->wall_time)));
  });
}

void hl_result_free(hl_result* r) { delete r; }

hl_status hl_brute_force(const hl_channel* phi, const hl_constraint* c, int resolution, double* lower,
                         double* upper) {
  return guarded([&] {
    require(phi, "channel");
    require(c, "constraint");
    require(lower, "lower");
    require(upper, "upper");
    const Bracket b = brute_force_capacity(phi->value, c->value, resolution);
    *lower = b.lower;
    *upper = b.upper;
  });
}

hl_status hl_chi_function(const hl_channel* phi, const hl_state* rho, const hl_options* opts, const hl_format* fmt,
                          double* value, char** report) {
  return guarded([&] {
    require(phi, "channel");
    require(rho, "state");
    const auto start = Clock::now();
    ChiFunctionResult r = chi_function_detailed(phi->value, rho->value, decomposition_options(solver_options(opts)));
    const double wall = seconds_since(start);
    if (value != nullptr) *value = r.value;
    if (report != nullptr) {
      const hl_format f = format_or_default(fmt);
      *report = copy_string(f.kind == HL_FORMAT_CSV ? closure_csv(r.value, r.closure, f, wall)
                                                    : to_json(r, output_format(f, wall)));
    }
  });
}

hl_status hl_hhat(const hl_channel* phi, const hl_state* rho, const hl_options* opts, const hl_format* fmt,
                  double* value, char** report) {
  return guarded([&] {
    require(phi, "channel");
    require(rho, "state");
    const auto start = Clock::now();
    ConvexClosureResult r =
        convex_closure_output_entropy(phi->value, rho->value, decomposition_options(solver_options(opts)));
    const double wall = seconds_since(start);
    if (value != nullptr) *value = r.value;
    if (report != nullptr) {
      const hl_format f = format_or_default(fmt);
      *report = copy_string(f.kind == HL_FORMAT_CSV ? closure_csv(r.value, r, f, wall)
                                                    : to_json(r, output_format(f, wall)));
    }
  });
}

hl_status hl_additivity(const hl_channel* phi, const hl_constraint* a, const hl_channel* psi, const hl_constraint* b,
                        const hl_options* opts, const hl_format* fmt, double* gap, int* converged, char** report) {
  return guarded([&] {
    require(phi, "first channel");
    require(psi, "second channel");
    require(a, "first constraint");
    require(b, "second constraint");
    AdditivityReport r = additivity_report(phi->value, a->value, psi->value, b->value, solver_options(opts), "instance");
    if (gap != nullptr) *gap = r.gap;
    if (converged != nullptr) *converged = r.lhs.converged && r.rhs_left.converged && r.rhs_right.converged;
    if (report != nullptr) {
      const hl_format f = format_or_default(fmt);
      *report = copy_string(f.kind == HL_FORMAT_CSV ? additivity_csv({r}, f.timing != 0)
                                                    : to_json(r, output_format(f, r.runtime_seconds)));
    }
  });
}

hl_status hl_discontinuity(const int* n_values, size_t count, double c_target, const hl_options* opts,
                           const hl_format* fmt, int* converged, char** report) {
  return guarded([&] {
    if (count > 0) require(n_values, "n values");
    const auto start = Clock::now();
    std::vector<DiscontinuityRow> rows =
        discontinuity_rows(std::vector<int>(n_values, n_values + count), c_target, solver_options(opts));
    const double wall = seconds_since(start);
    const SolverOptions s = solver_options(opts);
    if (converged != nullptr) {
      *converged = 1;
      for (const auto& r : rows)
        if (!(r.gap <= s.tol)) *converged = 0;
    }
    if (report != nullptr) {
      const hl_format f = format_or_default(fmt);
      *report = copy_string(f.kind == HL_FORMAT_CSV ? discontinuity_csv(rows) : to_json(rows, output_format(f, wall)));
    }
  });
}

hl_status hl_verify(const char* suite, uint64_t seed, int cases, const hl_format* fmt, int* all_passed,
                    char** report) {
  return guarded([&] {
    require(suite, "suite name");
    const auto start = Clock::now();
    std::vector<SuiteResult> r = run_verify(suite, seed, cases);
    const double wall = seconds_since(start);
    if (all_passed != nullptr) {
      *all_passed = 1;
      for (const auto& s : r)
        if (!s.ok()) *all_passed = 0;
    }
    if (report != nullptr) {
      const hl_format f = format_or_default(fmt);
      *report = copy_string(f.kind == HL_FORMAT_CSV ? verify_csv(r) : to_json(r, output_format(f, wall)));
    }
  });
}

}  // extern "C"

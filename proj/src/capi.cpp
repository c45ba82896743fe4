#include "fracspec/fracspec.h"

#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "fracspec/eigensolver.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/export.hpp"
#include "fracspec/sweep.hpp"
#include "fracspec/validation.hpp"

using namespace fracspec;

struct fs_spectrum {
  Spectrum spectrum;
  SpectrumReport report;
};

struct fs_sweep {
  std::vector<sweep::Row> rows;
  std::vector<sweep::Point> skipped;
};

struct fs_validation {
  validation::Report report;
  std::string json;
};

namespace {

thread_local std::string last_error;

fs_status fail(fs_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body and maps the exception hierarchy onto status codes.
template <class F>
fs_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FS_OK;
  } catch (const DomainError& e) {
    return fail(FS_ERR_DOMAIN, e.what());
  } catch (const AccuracyError& e) {
    return fail(FS_ERR_ACCURACY, e.what());
  } catch (const ConvergenceError& e) {
    return fail(FS_ERR_CONVERGENCE, e.what());
  } catch (const NotSpdError& e) {
    return fail(FS_ERR_NOT_SPD, e.what());
  } catch (const ConfigError& e) {
    return fail(FS_ERR_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(FS_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FS_ERR_INTERNAL, "unknown error");
  }
}

io::Format to_format(fs_format f) {
  switch (f) {
    case FS_FORMAT_CSV:
      return io::Format::Csv;
    case FS_FORMAT_JSON:
      return io::Format::Json;
  }
  throw ConfigError("unknown output format code");
}

template <class W>
void write_to(const char* path, W&& writer) {
  std::ostringstream os;
  writer(os);
  io::write_file(path, os.str());
}

fs_status null_status(const char* what) { return fail(FS_ERR_NULL, std::string("null argument to ") + what); }

}  // namespace

extern "C" {

const char* fs_last_error(void) { return last_error.c_str(); }

const char* fs_status_name(fs_status status) {
  switch (status) {
    case FS_OK:
      return "ok";
    case FS_ERR_DOMAIN:
      return "domain error";
    case FS_ERR_ACCURACY:
      return "accuracy error";
    case FS_ERR_CONVERGENCE:
      return "convergence error";
    case FS_ERR_NOT_SPD:
      return "matrix not SPD";
    case FS_ERR_CONFIG:
      return "configuration error";
    case FS_ERR_IO:
      return "I/O error";
    case FS_ERR_NULL:
      return "null argument";
    case FS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* fs_version(void) { return "1.0.0"; }

fs_status fs_parse_format(const char* name, fs_format* out) {
  if (!name || !out) return null_status("fs_parse_format");
  return guarded([&] { *out = io::parse_format(name) == io::Format::Csv ? FS_FORMAT_CSV : FS_FORMAT_JSON; });
}

fs_problem fs_problem_default(void) { return fs_problem{1.0, 1.0, 0.0, 1.0, 200, -1, 0}; }

fs_status fs_solve(const fs_problem* problem, fs_spectrum** out) {
  if (!problem || !out) return null_status("fs_solve");
  *out = nullptr;
  return guarded([&] {
    const FractionalOrders orders(problem->alpha, problem->beta);
    const Mesh mesh(problem->a, problem->b, problem->elements);
    SolveOptions options;
    if (problem->vector_count >= 0) options.vector_count = static_cast<std::size_t>(problem->vector_count);
    options.seed = problem->seed;
    auto handle = std::make_unique<fs_spectrum>();
    handle->spectrum = solve_problem(mesh, orders, options);
    handle->report = eigensolver::classify(handle->spectrum, orders);
    *out = handle.release();
  });
}

void fs_spectrum_free(fs_spectrum* spectrum) { delete spectrum; }

fs_status fs_spectrum_size(const fs_spectrum* spectrum, size_t* count) {
  if (!spectrum || !count) return null_status("fs_spectrum_size");
  *count = spectrum->spectrum.pairs.size();
  last_error.clear();
  return FS_OK;
}

fs_status fs_spectrum_eigenvalue(const fs_spectrum* spectrum, size_t index, double* re, double* im) {
  if (!spectrum || !re || !im) return null_status("fs_spectrum_eigenvalue");
  return guarded([&] {
    if (index < 1 || index > spectrum->spectrum.pairs.size()) throw DomainError("eigenvalue index out of range");
    const Complex v = spectrum->spectrum.pairs[index - 1].value;
    *re = v.real();
    *im = v.imag();
  });
}

fs_status fs_spectrum_residual(const fs_spectrum* spectrum, size_t index, double* residual) {
  if (!spectrum || !residual) return null_status("fs_spectrum_residual");
  return guarded([&] {
    if (index < 1 || index > spectrum->spectrum.pairs.size()) throw DomainError("eigenvalue index out of range");
    *residual = spectrum->spectrum.pairs[index - 1].residual;
  });
}

fs_status fs_spectrum_summary(const fs_spectrum* spectrum, fs_summary* out) {
  if (!spectrum || !out) return null_status("fs_spectrum_summary");
  const auto& r = spectrum->report;
  fs_summary s{};
  s.eigenvalue_count = spectrum->spectrum.pairs.size();
  s.real_count = r.real_count;
  s.complex_pair_count = r.pair_count;
  s.cone_margin = r.cone_margin;
  s.principal_re = r.principal_value.real();
  s.principal_im = r.principal_value.imag();
  s.principal_positive = r.principal_positive ? 1 : 0;
  for (const auto& p : spectrum->spectrum.pairs)
    if (!p.vector.empty() && !p.converged) ++s.vectors_unconverged;
  *out = s;
  last_error.clear();
  return FS_OK;
}

fs_status fs_spectrum_eigenfunction(const fs_spectrum* spectrum, size_t index, double* x, double* re_u, double* im_u,
                                    size_t capacity, size_t* nodes) {
  if (!spectrum || !nodes) return null_status("fs_spectrum_eigenfunction");
  return guarded([&] {
    const auto& s = spectrum->spectrum;
    if (index < 1 || index > s.pairs.size()) throw DomainError("eigenfunction index out of range");
    const auto& v = s.pairs[index - 1].vector;
    if (v.empty()) throw DomainError("eigenfunction " + std::to_string(index) + " was not computed");
    const Mesh mesh(s.mesh.a, s.mesh.b, s.mesh.elements);
    *nodes = mesh.node_count();
    for (size_t j = 0; j < std::min(capacity, mesh.node_count()); ++j) {
      const Complex u = (j == 0 || j + 1 == mesh.node_count()) ? Complex{} : v[j - 1];
      if (x) x[j] = mesh.node(static_cast<int>(j));
      if (re_u) re_u[j] = u.real();
      if (im_u) im_u[j] = u.imag();
    }
  });
}

fs_status fs_spectrum_write(const fs_spectrum* spectrum, const char* path, fs_format format) {
  if (!spectrum || !path) return null_status("fs_spectrum_write");
  return guarded([&] {
    const auto f = to_format(format);
    write_to(path, [&](std::ostream& os) { io::write_spectrum(os, spectrum->spectrum, spectrum->report, f); });
  });
}

fs_status fs_report_write(const fs_spectrum* spectrum, const char* path) {
  if (!spectrum || !path) return null_status("fs_report_write");
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { io::write_report(os, spectrum->spectrum, spectrum->report); });
  });
}

fs_status fs_eigenfunction_write(const fs_spectrum* spectrum, size_t index, const char* path, fs_format format) {
  if (!spectrum || !path) return null_status("fs_eigenfunction_write");
  return guarded([&] {
    const auto f = to_format(format);
    std::ostringstream os;
    io::write_eigenfunction(os, spectrum->spectrum, index, f);
    io::write_file(path, os.str());
  });
}

fs_status fs_vectors_write(const fs_spectrum* spectrum, size_t count, const char* path) {
  if (!spectrum || !path) return null_status("fs_vectors_write");
  return guarded([&] { write_to(path, [&](std::ostream& os) { io::write_vectors(os, spectrum->spectrum, count); }); });
}

fs_status fs_parse_range(const char* text, fs_range* out) {
  if (!text || !out) return null_status("fs_parse_range");
  return guarded([&] {
    const sweep::Range r = sweep::parse_range(text);
    *out = fs_range{r.lo, r.hi, r.steps};
  });
}

fs_status fs_sweep_run(const fs_sweep_config* config, fs_sweep** out) {
  if (!config || !out) return null_status("fs_sweep_run");
  *out = nullptr;
  return guarded([&] {
    const sweep::Range alpha{config->alpha.lo, config->alpha.hi, config->alpha.steps};
    const sweep::Range beta{config->beta.lo, config->beta.hi, config->beta.steps};
    if (alpha.steps < 1 || (config->kind == FS_SWEEP_GRID && beta.steps < 1))
      throw ConfigError("sweep ranges need at least one step");
    sweep::Plan plan;
    switch (config->kind) {
      case FS_SWEEP_GRID:
        plan = sweep::grid(alpha, beta);
        break;
      case FS_SWEEP_DIAGONAL:
        plan = sweep::diagonal(alpha);
        break;
      case FS_SWEEP_FIXED_SUM:
        plan = sweep::fixed_sum(alpha, config->sum);
        break;
      default:
        throw ConfigError("unknown sweep kind");
    }
    const sweep::Settings settings{config->a, config->b, config->elements};
    auto handle = std::make_unique<fs_sweep>();
    handle->rows = sweep::run(plan, settings);
    handle->skipped = plan.skipped;
    *out = handle.release();
  });
}

void fs_sweep_free(fs_sweep* sweep) { delete sweep; }

fs_status fs_sweep_size(const fs_sweep* sweep, size_t* rows) {
  if (!sweep || !rows) return null_status("fs_sweep_size");
  *rows = sweep->rows.size();
  last_error.clear();
  return FS_OK;
}

fs_status fs_sweep_row_at(const fs_sweep* sweep, size_t i, fs_sweep_row* row) {
  if (!sweep || !row) return null_status("fs_sweep_row_at");
  return guarded([&] {
    if (i >= sweep->rows.size()) throw DomainError("sweep row index out of range");
    const auto& r = sweep->rows[i];
    *row = fs_sweep_row{r.alpha,       r.beta,
                        r.lambda1.real(), r.lambda1.imag(),
                        r.real_count,  r.cone_margin,
                        r.largest_real_before_complex, r.error.empty() ? nullptr : r.error.c_str()};
  });
}

fs_status fs_sweep_skipped(const fs_sweep* sweep, size_t i, double* alpha, double* beta, size_t* count) {
  if (!sweep || !count) return null_status("fs_sweep_skipped");
  *count = sweep->skipped.size();
  if (i < sweep->skipped.size()) {
    if (alpha) *alpha = sweep->skipped[i].alpha;
    if (beta) *beta = sweep->skipped[i].beta;
  }
  last_error.clear();
  return FS_OK;
}

fs_status fs_sweep_write(const fs_sweep* sweep, const char* path, fs_format format) {
  if (!sweep || !path) return null_status("fs_sweep_write");
  return guarded([&] {
    const auto f = to_format(format);
    write_to(path, [&](std::ostream& os) { sweep::write(os, sweep->rows, f); });
  });
}

fs_status fs_validate(uint64_t seed, double perturb_k, fs_validation** out) {
  if (!out) return null_status("fs_validate");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<fs_validation>();
    handle->report = validation::run({seed, perturb_k});
    handle->json = handle->report.json();
    *out = handle.release();
  });
}

void fs_validation_free(fs_validation* validation) { delete validation; }

fs_status fs_validation_all_pass(const fs_validation* validation, int* all_pass) {
  if (!validation || !all_pass) return null_status("fs_validation_all_pass");
  *all_pass = validation->report.all_pass() ? 1 : 0;
  last_error.clear();
  return FS_OK;
}

fs_status fs_validation_count(const fs_validation* validation, size_t* count) {
  if (!validation || !count) return null_status("fs_validation_count");
  *count = validation->report.criteria.size();
  last_error.clear();
  return FS_OK;
}

fs_status fs_validation_criterion(const fs_validation* validation, size_t i, int* id, const char** name, int* pass,
                                  const char** detail) {
  if (!validation) return null_status("fs_validation_criterion");
  return guarded([&] {
    if (i >= validation->report.criteria.size()) throw DomainError("criterion index out of range");
    const auto& c = validation->report.criteria[i];
    if (id) *id = c.id;
    if (name) *name = c.name.c_str();
    if (pass) *pass = c.pass ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

fs_status fs_validation_json(const fs_validation* validation, const char** json) {
  if (!validation || !json) return null_status("fs_validation_json");
  *json = validation->json.c_str();
  last_error.clear();
  return FS_OK;
}

fs_status fs_validation_write(const fs_validation* validation, const char* path) {
  if (!validation || !path) return null_status("fs_validation_write");
  return guarded([&] { io::write_file(path, validation->json); });
}

}  // extern "C"

#include "tubal/tubal.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "tubal/completion.hpp"
#include "tubal/io.hpp"
#include "tubal/metrics.hpp"
#include "tubal/parallel.hpp"
#include "tubal/synthetic.hpp"
#include "tubal/tatcu.hpp"
#include "tubal/tprod.hpp"
#include "tubal/tsvd.hpp"
#include "tubal/tt.hpp"
#include "tubal/ttt.hpp"

struct tubal_tensor {
  tubal::DenseTensor t;
};
struct tubal_factors {
  tubal::FactorSet f;
};
struct tubal_completion {
  tubal::CompletionResult r;
};
struct tubal_metric_report {
  tubal::MetricReport r;
};

namespace {

thread_local std::string last_error;

tubal_status status_of(tubal::Errc c) { return static_cast<tubal_status>(static_cast<int>(c)); }

template <class Fn>
tubal_status guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return TUBAL_OK;
  } catch (const tubal::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TUBAL_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TUBAL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return TUBAL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  tubal::require(p != nullptr, tubal::Errc::invalid_argument, std::string(what) + " must not be NULL");
}

tubal::Shape shape_from(const size_t* dims, size_t n) {
  if (n) need(dims, "dims");
  return tubal::Shape(dims, dims + n);
}

template <class Make>
tubal_status make_tensor(tubal_tensor** out, Make&& make) {
  if (out) *out = nullptr;
  return guard([&] {
    need(out, "out");
    *out = new tubal_tensor{make()};
  });
}

template <class Make>
tubal_status make_factors(tubal_factors** out, Make&& make) {
  if (out) *out = nullptr;
  return guard([&] {
    need(out, "out");
    *out = new tubal_factors{tubal::FactorSet(make())};
  });
}

tubal::Shape boundary_ranks(const tubal::FactorSet& f) {
  return std::visit(
      [](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, tubal::TttFormat>)
          return g.boundary_ranks();
        else
          return g.ranks();
      },
      f);
}

tubal_status copy_out(const tubal::Shape& v, size_t* dst, size_t capacity) {
  return guard([&] {
    if (capacity) need(dst, "output array");
    for (size_t i = 0; i < v.size() && i < capacity; ++i) dst[i] = v[i];
  });
}

}  // namespace

extern "C" {

const char* tubal_version(void) { return "0.1.0"; }
const char* tubal_last_error(void) { return last_error.c_str(); }

const char* tubal_status_name(tubal_status s) {
  switch (s) {
    case TUBAL_OK: return "ok";
    case TUBAL_ERR_OUT_OF_MEMORY: return "out_of_memory";
    case TUBAL_ERR_INTERNAL: return "internal";
    default:
      if (s >= TUBAL_ERR_INVALID_ARGUMENT && s <= TUBAL_ERR_TRUNCATED_PAYLOAD)
        return tubal::errc_name(static_cast<tubal::Errc>(s));
      return "unknown";
  }
}

tubal_status tubal_set_threads(int n) {
  return guard([&] {
    tubal::require(n >= 0, tubal::Errc::invalid_argument, "thread count must be nonnegative");
    tubal::set_max_threads(n);
  });
}

void tubal_string_free(char* s) { std::free(s); }

tubal_status tubal_tensor_create(const size_t* dims, size_t order, const double* data, tubal_tensor** out) {
  return make_tensor(out, [&] {
    tubal::Shape s = shape_from(dims, order);
    tubal::DenseTensor t(s);
    if (data) std::memcpy(t.data().data(), data, t.numel() * sizeof(double));
    return t;
  });
}

tubal_status tubal_tensor_clone(const tubal_tensor* x, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(x, "tensor");
    return x->t;
  });
}

void tubal_tensor_destroy(tubal_tensor* x) { delete x; }
size_t tubal_tensor_order(const tubal_tensor* x) { return x ? x->t.order() : 0; }
size_t tubal_tensor_numel(const tubal_tensor* x) { return x ? x->t.numel() : 0; }

tubal_status tubal_tensor_dims(const tubal_tensor* x, size_t* dims, size_t capacity) {
  if (!x) return guard([] { need(nullptr, "tensor"); });
  return copy_out(x->t.shape(), dims, capacity);
}

const double* tubal_tensor_data(const tubal_tensor* x) { return x ? x->t.data().data() : nullptr; }
double* tubal_tensor_data_mut(tubal_tensor* x) { return x ? x->t.data().data() : nullptr; }

tubal_status tubal_tensor_reshape(tubal_tensor* x, const size_t* dims, size_t order) {
  return guard([&] {
    need(x, "tensor");
    x->t = std::move(x->t).reshaped(shape_from(dims, order));
  });
}

tubal_status tubal_tensor_read(const char* path, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(path, "path");
    return tubal::read_any_tensor(path);
  });
}

tubal_status tubal_tensor_write(const char* path, const tubal_tensor* x) {
  return guard([&] {
    need(path, "path");
    need(x, "tensor");
    tubal::write_tensor(path, x->t);
  });
}

tubal_status tubal_image_read(const char* path, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(path, "path");
    return tubal::read_image(path);
  });
}

tubal_status tubal_image_write(const char* path, const tubal_tensor* x) {
  return guard([&] {
    need(path, "path");
    need(x, "tensor");
    tubal::write_image(path, x->t);
  });
}

tubal_status tubal_describe_file(const char* path, char** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(path, "path");
    need(out, "out");
    const std::string s = tubal::describe_file(path);
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

tubal_status tubal_tprod(const tubal_tensor* x, const tubal_tensor* y, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(x, "x");
    need(y, "y");
    return tubal::tprod_fast(x->t, y->t);
  });
}

tubal_status tubal_relative_error(const tubal_tensor* reference, const tubal_tensor* estimate, double* out) {
  return guard([&] {
    need(reference, "reference");
    need(estimate, "estimate");
    need(out, "out");
    *out = tubal::relative_error(reference->t, estimate->t);
  });
}

tubal_status tubal_ttt_svd(const tubal_tensor* x, const size_t* ranks, size_t n_ranks, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    tubal::require(x->t.order() >= 2, tubal::Errc::shape_mismatch, "TTT-SVD needs at least a hyper-mode and a tube mode");
    const tubal::Shape r = tubal::normalize_ranks(shape_from(ranks, n_ranks), x->t.order() - 1);
    return tubal::ttt_svd(x->t, r);
  });
}

tubal_status tubal_ttt_svd_tol(const tubal_tensor* x, double eps, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    return tubal::ttt_svd_tolerance(x->t, eps);
  });
}

tubal_status tubal_tatcu(const tubal_tensor* x, double eps, size_t max_refinements, tubal_factors** out,
                         tubal_tatcu_info* info) {
  if (out) *out = nullptr;
  return guard([&] {
    need(x, "tensor");
    need(out, "out");
    tubal::TatcuOptions opts;
    opts.max_refinements = max_refinements;
    try {
      tubal::TatcuResult r = tubal::tatcu(x->t, eps, opts);
      if (info) *info = {r.relative_error, r.refinements};
      *out = new tubal_factors{std::move(r.format)};
    } catch (const tubal::ToleranceNotMet& e) {
      if (info) *info = {e.best_error(), max_refinements};
      throw;
    }
  });
}

tubal_status tubal_tt_svd(const tubal_tensor* x, const size_t* ranks, size_t n_ranks, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    const tubal::Shape r = shape_from(ranks, n_ranks);
    // Boundary-augmented profiles are accepted as for TTT.
    const tubal::Shape internal = tubal::normalize_ranks(r, x->t.order());
    return tubal::tt_svd(x->t, internal);
  });
}

tubal_status tubal_tt_svd_tol(const tubal_tensor* x, double eps, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    return tubal::tt_svd_tolerance(x->t, eps);
  });
}

tubal_status tubal_tsvd(const tubal_tensor* x, size_t rank, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    return tubal::tsvd_as_ttt(tubal::tsvd_truncated(x->t, rank));
  });
}

tubal_status tubal_tsvd_tol(const tubal_tensor* x, double eps, tubal_factors** out) {
  return make_factors(out, [&] {
    need(x, "tensor");
    tubal::require(eps >= 0.0, tubal::Errc::invalid_argument, "tolerance must be nonnegative");
    return tubal::tsvd_as_ttt(tubal::tsvd_tolerance(x->t, eps * tubal::frobenius_norm(x->t)));
  });
}

tubal_status tubal_ttt_param_count(const size_t* modes, size_t n_modes, const size_t* ranks, size_t n_ranks,
                                   size_t tube_length, size_t* out) {
  return guard([&] {
    need(out, "out");
    const tubal::Shape m = shape_from(modes, n_modes);
    const tubal::Shape r = tubal::normalize_ranks(shape_from(ranks, n_ranks), m.size());
    *out = tubal::ttt_param_count(m, r, tube_length);
  });
}

void tubal_factors_destroy(tubal_factors* f) { delete f; }

tubal_status tubal_factors_read(const char* path, tubal_factors** out) {
  return make_factors(out, [&] {
    need(path, "path");
    return tubal::read_factors(path);
  });
}

tubal_status tubal_factors_write(const char* path, const tubal_factors* f) {
  return guard([&] {
    need(path, "path");
    need(f, "factors");
    tubal::write_factors(path, f->f);
  });
}

tubal_factor_kind tubal_factors_kind(const tubal_factors* f) {
  return f ? static_cast<tubal_factor_kind>(tubal::factor_kind(f->f)) : TUBAL_FACTORS_TTT;
}

size_t tubal_factors_order(const tubal_factors* f) {
  return f ? std::visit([](const auto& g) { return g.order(); }, f->f) : 0;
}

size_t tubal_factors_tube_length(const tubal_factors* f) {
  if (!f) return 0;
  if (auto* t = std::get_if<tubal::TttFormat>(&f->f)) return t->tube_length;
  return 1;
}

tubal_status tubal_factors_ranks(const tubal_factors* f, size_t* ranks, size_t capacity) {
  if (!f) return guard([] { need(nullptr, "factors"); });
  return copy_out(boundary_ranks(f->f), ranks, capacity);
}

tubal_status tubal_factors_mode_sizes(const tubal_factors* f, size_t* modes, size_t capacity) {
  if (!f) return guard([] { need(nullptr, "factors"); });
  return copy_out(std::visit([](const auto& g) { return g.mode_sizes(); }, f->f), modes, capacity);
}

size_t tubal_factors_param_count(const tubal_factors* f) { return f ? tubal::factor_param_count(f->f) : 0; }

tubal_status tubal_factors_local_errors(const tubal_factors* f, double* out, size_t capacity, size_t* count) {
  return guard([&] {
    need(f, "factors");
    const std::vector<double>& e = std::visit([](const auto& g) -> const std::vector<double>& { return g.local_errors; }, f->f);
    if (count) *count = e.size();
    if (capacity) need(out, "output array");
    for (size_t i = 0; i < e.size() && i < capacity; ++i) out[i] = e[i];
  });
}

tubal_status tubal_factors_contract(const tubal_factors* f, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(f, "factors");
    return tubal::contract_factors(f->f);
  });
}

tubal_status tubal_factors_core(const tubal_factors* f, size_t n, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(f, "factors");
    tubal::require(!std::holds_alternative<tubal::TtComplex>(f->f), tubal::Errc::invalid_argument,
                   "complex cores cannot be returned as real tensors");
    return std::visit(
        [&](const auto& g) -> tubal::DenseTensor {
          tubal::require(n < g.order(), tubal::Errc::index_out_of_range, "core index out of range");
          if constexpr (std::is_same_v<std::decay_t<decltype(g)>, tubal::TtComplex>)
            return {};
          else
            return g.cores[n];
        },
        f->f);
  });
}

void tubal_completion_options_init(tubal_completion_options* o) {
  if (!o) return;
  *o = {TUBAL_BACKEND_TTT_TOL, nullptr, 0, 0.1, 1, 100, 1e-4};
}

tubal_status tubal_complete(const tubal_tensor* observed, const tubal_tensor* mask, const tubal_tensor* truth,
                            const tubal_completion_options* o, tubal_completion** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(observed, "observed");
    need(mask, "mask");
    need(o, "options");
    need(out, "out");
    tubal::CompletionBackend backend;
    switch (o->backend) {
      case TUBAL_BACKEND_TTT_RANKS: backend = tubal::TttRankBackend{shape_from(o->ranks, o->n_ranks)}; break;
      case TUBAL_BACKEND_TTT_TOL: backend = tubal::TttToleranceBackend{o->eps}; break;
      case TUBAL_BACKEND_TSVD: backend = tubal::TsvdBackend{o->tsvd_rank}; break;
      default: tubal::fail(tubal::Errc::invalid_argument, "unknown completion backend");
    }
    tubal::CompletionProblem p{observed->t, mask->t, backend, o->max_iters, o->stop_tol, std::nullopt};
    if (truth) p.ground_truth = truth->t;
    *out = new tubal_completion{tubal::complete(p)};
  });
}

void tubal_completion_destroy(tubal_completion* c) { delete c; }

tubal_status tubal_completion_estimate(const tubal_completion* c, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(c, "completion");
    return c->r.estimate;
  });
}

size_t tubal_completion_iterations(const tubal_completion* c) { return c ? c->r.trace.size() : 0; }
int tubal_completion_converged(const tubal_completion* c) { return c && c->r.converged ? 1 : 0; }

tubal_status tubal_completion_step_at(const tubal_completion* c, size_t i, tubal_completion_step* out) {
  return guard([&] {
    need(c, "completion");
    need(out, "out");
    tubal::require(i < c->r.trace.size(), tubal::Errc::index_out_of_range, "completion step out of range");
    const tubal::CompletionStep& s = c->r.trace[i];
    *out = {s.iteration, s.relative_change, s.observed_error, s.full_error.value_or(std::nan("")),
            s.full_error.has_value() ? 1 : 0};
  });
}

void tubal_metric_options_init(tubal_metric_options* o) {
  if (!o) return;
  const tubal::MetricOptions d;
  *o = {d.peak, d.ssim_window, d.uiqi_window, d.ergas_ratio};
}

tubal_status tubal_metric_report_compute(const tubal_tensor* reference, const tubal_tensor* estimate,
                                         const tubal_metric_options* o, tubal_metric_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(reference, "reference");
    need(estimate, "estimate");
    need(out, "out");
    tubal::MetricOptions opts;
    if (o) opts = {o->peak, o->ssim_window, o->uiqi_window, o->ergas_ratio};
    *out = new tubal_metric_report{tubal::metric_report(reference->t, estimate->t, opts)};
  });
}

void tubal_metric_report_destroy(tubal_metric_report* r) { delete r; }

void tubal_metric_report_summary(const tubal_metric_report* rep, tubal_metrics* out) {
  if (!rep || !out) return;
  const tubal::MetricReport& r = rep->r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  *out = {r.mse,
          r.psnr_db,
          r.rmse,
          r.rel_err,
          r.ssim.value_or(nan),
          r.uiqi.value_or(nan),
          r.ergas.value_or(nan),
          r.sam_deg,
          r.ssim.has_value() ? 1 : 0,
          r.uiqi.has_value() ? 1 : 0,
          r.ergas.has_value() ? 1 : 0,
          r.uiqi_skipped,
          r.sam_skipped,
          r.per_band.size(),
          r.psnr_band_mean_db};
}

tubal_status tubal_metric_report_band(const tubal_metric_report* rep, size_t band, tubal_band_metrics* out) {
  return guard([&] {
    need(rep, "report");
    need(out, "out");
    tubal::require(band < rep->r.per_band.size(), tubal::Errc::index_out_of_range, "band out of range");
    const tubal::BandMetrics& b = rep->r.per_band[band];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = {b.mse, b.psnr_db, b.rmse, b.ssim.value_or(nan), b.uiqi.value_or(nan), b.ssim ? 1 : 0, b.uiqi ? 1 : 0};
  });
}

tubal_status tubal_metric_report_ergas_zero_bands(const tubal_metric_report* rep, size_t* out, size_t capacity,
                                                  size_t* count) {
  return guard([&] {
    need(rep, "report");
    const auto& z = rep->r.ergas_zero_bands;
    if (count) *count = z.size();
    if (capacity) need(out, "output array");
    for (size_t i = 0; i < z.size() && i < capacity; ++i) out[i] = z[i];
  });
}

tubal_status tubal_data_max(const tubal_tensor* x, double* out) {
  return guard([&] {
    need(x, "tensor");
    need(out, "out");
    *out = tubal::data_max(x->t);
  });
}

tubal_status tubal_gen_ttt(const size_t* modes, size_t n_modes, const size_t* ranks, size_t n_ranks,
                           size_t tube_length, uint64_t seed, double noise, tubal_tensor** out) {
  return make_tensor(out, [&] {
    tubal::Rng rng(seed);
    const tubal::DenseTensor x = tubal::planted_ttt(shape_from(modes, n_modes), shape_from(ranks, n_ranks), tube_length, rng);
    return noise > 0.0 ? tubal::add_noise(x, noise, rng) : x;
  });
}

tubal_status tubal_gen_tsvd(size_t i1, size_t i2, size_t tube_length, size_t rank, uint64_t seed, double noise,
                            tubal_tensor** out) {
  return make_tensor(out, [&] {
    tubal::Rng rng(seed);
    const tubal::DenseTensor x = tubal::planted_tsvd(i1, i2, tube_length, rank, rng);
    return noise > 0.0 ? tubal::add_noise(x, noise, rng) : x;
  });
}

tubal_status tubal_gen_mask(const size_t* dims, size_t order, double missing_fraction, uint64_t seed,
                            tubal_tensor** out) {
  return make_tensor(out, [&] {
    tubal::Rng rng(seed);
    return tubal::bernoulli_mask(shape_from(dims, order), missing_fraction, rng);
  });
}

tubal_status tubal_apply_mask(const tubal_tensor* x, const tubal_tensor* mask, tubal_tensor** out) {
  return make_tensor(out, [&] {
    need(x, "tensor");
    need(mask, "mask");
    return tubal::apply_mask(x->t, mask->t);
  });
}

}  // extern "C"

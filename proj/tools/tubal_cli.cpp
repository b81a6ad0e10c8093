// tubal command-line tool. Talks to the library only through tubal.h.
#include <tubal/tubal.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;
using Dims = std::vector<size_t>;

enum Exit { ok = 0, io_failure = 1, usage = 2, numeric = 3, tolerance = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(tubal_status s) {
  switch (s) {
    case TUBAL_ERR_INVALID_ARGUMENT:
    case TUBAL_ERR_SHAPE_MISMATCH:
    case TUBAL_ERR_RANK_OUT_OF_RANGE:
    case TUBAL_ERR_INDEX_OUT_OF_RANGE: return usage;
    case TUBAL_ERR_NUMERIC_FAILURE:
    case TUBAL_ERR_RESIDUAL_IMAGINARY: return numeric;
    case TUBAL_ERR_TOLERANCE_NOT_MET: return tolerance;
    default: return io_failure;
  }
}

void check(tubal_status s) {
  if (s != TUBAL_OK) throw Failure{exit_code(s), std::string(tubal_status_name(s)) + ": " + tubal_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{usage, msg}; }

struct TensorDeleter {
  void operator()(tubal_tensor* p) const { tubal_tensor_destroy(p); }
};
struct FactorsDeleter {
  void operator()(tubal_factors* p) const { tubal_factors_destroy(p); }
};
struct CompletionDeleter {
  void operator()(tubal_completion* p) const { tubal_completion_destroy(p); }
};
struct ReportDeleter {
  void operator()(tubal_metric_report* p) const { tubal_metric_report_destroy(p); }
};
using Tensor = std::unique_ptr<tubal_tensor, TensorDeleter>;
using Factors = std::unique_ptr<tubal_factors, FactorsDeleter>;
using Completion = std::unique_ptr<tubal_completion, CompletionDeleter>;
using Report = std::unique_ptr<tubal_metric_report, ReportDeleter>;

template <class Handle, class Fn>
Handle make(Fn&& fn) {
  typename Handle::pointer raw = nullptr;
  check(fn(&raw));
  return Handle(raw);
}

Dims parse_list(const std::string& text, const char* what) {
  Dims out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<size_t>(v));
    } catch (const std::exception&) {
      usage_error(std::string("bad ") + what + " list: " + text);
    }
  }
  if (out.empty()) usage_error(std::string("empty ") + what + " list");
  return out;
}

Dims dims_of(const tubal_tensor* x) {
  Dims d(tubal_tensor_order(x));
  check(tubal_tensor_dims(x, d.data(), d.size()));
  return d;
}

Dims factor_ranks(const tubal_factors* f) {
  Dims r(tubal_factors_order(f) + 1);
  check(tubal_factors_ranks(f, r.data(), r.size()));
  return r;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_image_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char m[2] = {0, 0};
  in.read(m, 2);
  return in && m[0] == 'P' && (m[1] == '5' || m[1] == '6');
}

bool wants_image(const std::string& path) { return has_suffix(path, ".pgm") || has_suffix(path, ".ppm"); }

void write_output(const std::string& path, const tubal_tensor* x) {
  check(wants_image(path) ? tubal_image_write(path.c_str(), x) : tubal_tensor_write(path.c_str(), x));
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

// "auto": 255 for 8-bit images, otherwise the data maximum (1 if not positive).
double resolve_peak(const std::string& text, const tubal_tensor* reference, bool image) {
  if (text != "auto") {
    try {
      size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos == text.size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    usage_error("--peak must be a positive number or 'auto'");
  }
  if (image) return 255.0;
  double m = 0.0;
  check(tubal_data_max(reference, &m));
  return m > 0.0 ? m : 1.0;
}

struct MetricFlags {
  std::string peak = "auto";
  size_t ssim_window = 8;
  size_t uiqi_window = 8;
  double ergas_ratio = 1.0;
};

json metrics_json(const tubal_tensor* reference, const tubal_tensor* estimate, const MetricFlags& flags, bool image) {
  tubal_metric_options o;
  tubal_metric_options_init(&o);
  o.peak = resolve_peak(flags.peak, reference, image);
  o.ssim_window = flags.ssim_window;
  o.uiqi_window = flags.uiqi_window;
  o.ergas_ratio = flags.ergas_ratio;
  const Report r = make<Report>([&](tubal_metric_report** out) { return tubal_metric_report_compute(reference, estimate, &o, out); });
  tubal_metrics m;
  tubal_metric_report_summary(r.get(), &m);
  json j;
  j["peak"] = o.peak;
  j["mse"] = number(m.mse);
  j["psnr_db"] = number(m.psnr_db);
  j["psnr_band_mean_db"] = number(m.psnr_band_mean_db);
  j["rmse"] = number(m.rmse);
  j["rel_err"] = number(m.rel_err);
  j["ssim"] = m.has_ssim ? number(m.ssim) : json(nullptr);
  j["uiqi"] = m.has_uiqi ? number(m.uiqi) : json(nullptr);
  j["uiqi_skipped_windows"] = m.uiqi_skipped;
  j["ergas"] = m.has_ergas ? number(m.ergas) : json(nullptr);
  size_t nz = 0;
  check(tubal_metric_report_ergas_zero_bands(r.get(), nullptr, 0, &nz));
  Dims zero(nz);
  check(tubal_metric_report_ergas_zero_bands(r.get(), zero.data(), zero.size(), &nz));
  j["ergas_zero_mean_bands"] = zero;
  j["sam_deg"] = number(m.sam_deg);
  j["sam_skipped_pixels"] = m.sam_skipped;
  json bands = json::array();
  for (size_t b = 0; b < m.bands; ++b) {
    tubal_band_metrics bm;
    check(tubal_metric_report_band(r.get(), b, &bm));
    json e;
    e["band"] = b;
    e["mse"] = number(bm.mse);
    e["psnr_db"] = number(bm.psnr_db);
    e["rmse"] = number(bm.rmse);
    e["ssim"] = bm.has_ssim ? number(bm.ssim) : json(nullptr);
    e["uiqi"] = bm.has_uiqi ? number(bm.uiqi) : json(nullptr);
    bands.push_back(std::move(e));
  }
  j["per_band"] = std::move(bands);
  return j;
}

void emit(const json& j, const std::string& report_path) {
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << text << '\n';
    if (!out) throw Failure{io_failure, "cannot write report " + report_path};
  }
}

void add_metric_flags(CLI::App* cmd, MetricFlags& f) {
  cmd->add_option("--peak", f.peak, "PSNR peak: a number or 'auto'")->capture_default_str();
  cmd->add_option("--ssim-window", f.ssim_window, "SSIM window side")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--uiqi-window", f.uiqi_window, "UIQI window side")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--ergas-ratio", f.ergas_ratio, "ERGAS resolution ratio")->capture_default_str()->check(CLI::PositiveNumber);
}

// ---- compress ----

struct CompressConfig {
  std::string input, output, method = "ttt-svd", ranks, reshape, report;
  std::optional<double> tol;
  size_t max_refinements = 3;
  bool no_metrics = false;
  MetricFlags metrics;
};

Factors run_method(const CompressConfig& c, const tubal_tensor* x, json& extra) {
  const bool by_tol = c.tol.has_value();
  const Dims ranks = by_tol ? Dims{} : parse_list(c.ranks, "rank");
  if (c.method == "ttt-svd") {
    return make<Factors>([&](tubal_factors** out) {
      return by_tol ? tubal_ttt_svd_tol(x, *c.tol, out) : tubal_ttt_svd(x, ranks.data(), ranks.size(), out);
    });
  }
  if (c.method == "tt-svd") {
    return make<Factors>([&](tubal_factors** out) {
      return by_tol ? tubal_tt_svd_tol(x, *c.tol, out) : tubal_tt_svd(x, ranks.data(), ranks.size(), out);
    });
  }
  if (c.method == "tsvd") {
    if (!by_tol && ranks.size() != 1) usage_error("tsvd takes a single tubal rank");
    return make<Factors>([&](tubal_factors** out) {
      return by_tol ? tubal_tsvd_tol(x, *c.tol, out) : tubal_tsvd(x, ranks[0], out);
    });
  }
  if (c.method == "tatcu") {
    if (!by_tol) usage_error("tatcu needs --tol");
    tubal_tatcu_info info{};
    tubal_factors* raw = nullptr;
    const tubal_status s = tubal_tatcu(x, *c.tol, c.max_refinements, &raw, &info);
    if (s == TUBAL_ERR_TOLERANCE_NOT_MET) {
      std::ostringstream msg;
      msg.precision(6);
      msg << tubal_status_name(s) << ": " << tubal_last_error() << " (best relative error " << info.relative_error << ")";
      throw Failure{tolerance, msg.str()};
    }
    check(s);
    extra["refinements"] = info.refinements;
    return Factors(raw);
  }
  usage_error("unknown method " + c.method);
}

void cmd_compress(const CompressConfig& c) {
  const bool image = is_image_file(c.input);
  const Tensor original = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.input.c_str(), out); });
  const Dims original_shape = dims_of(original.get());
  Tensor x = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_clone(original.get(), out); });
  if (!c.reshape.empty()) {
    const Dims shape = parse_list(c.reshape, "reshape");
    check(tubal_tensor_reshape(x.get(), shape.data(), shape.size()));
  }

  json extra;
  const auto start = std::chrono::steady_clock::now();
  const Factors f = run_method(c, x.get(), extra);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check(tubal_factors_write(c.output.c_str(), f.get()));

  Tensor y = make<Tensor>([&](tubal_tensor** out) { return tubal_factors_contract(f.get(), out); });
  double rel = 0.0;
  check(tubal_relative_error(x.get(), y.get(), &rel));
  const size_t params = tubal_factors_param_count(f.get());
  const size_t numel = tubal_tensor_numel(x.get());

  size_t n_local = 0;
  check(tubal_factors_local_errors(f.get(), nullptr, 0, &n_local));
  std::vector<double> local(n_local);
  check(tubal_factors_local_errors(f.get(), local.data(), local.size(), &n_local));

  json j;
  j["command"] = "compress";
  j["input"] = c.input;
  j["output"] = c.output;
  j["method"] = c.method;
  if (c.tol) j["tol"] = *c.tol;
  else j["requested_ranks"] = parse_list(c.ranks, "rank");
  j["original_shape"] = original_shape;
  j["shape"] = dims_of(x.get());
  j["tube_length"] = tubal_factors_tube_length(f.get());
  j["rank_profile"] = factor_ranks(f.get());
  j["rel_err"] = rel;
  j["numel"] = numel;
  j["params"] = params;
  j["compression_factor"] = params ? json(static_cast<double>(numel) / static_cast<double>(params)) : json(nullptr);
  json le = json::array();
  for (double v : local) le.push_back(v);
  j["local_errors"] = std::move(le);
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (!c.no_metrics) {
    check(tubal_tensor_reshape(y.get(), original_shape.data(), original_shape.size()));
    j["metrics"] = metrics_json(original.get(), y.get(), c.metrics, image);
  }
  j["wall_time_s"] = seconds;
  emit(j, c.report);
}

// ---- reconstruct ----

struct ReconstructConfig {
  std::string input, output, reshape, report;
};

void cmd_reconstruct(const ReconstructConfig& c) {
  if (!c.reshape.empty() && !c.report.empty()) usage_error("--reshape and --from-report are exclusive");
  const Factors f = make<Factors>([&](tubal_factors** out) { return tubal_factors_read(c.input.c_str(), out); });
  Tensor y = make<Tensor>([&](tubal_tensor** out) { return tubal_factors_contract(f.get(), out); });
  std::optional<Dims> shape;
  if (!c.reshape.empty()) shape = parse_list(c.reshape, "reshape");
  if (!c.report.empty()) {
    std::ifstream in(c.report);
    if (!in) throw Failure{io_failure, "cannot read report " + c.report};
    json r;
    try {
      r = json::parse(in);
      shape = r.at("original_shape").get<Dims>();
    } catch (const json::exception& e) {
      throw Failure{io_failure, std::string("bad report: ") + e.what()};
    }
  }
  if (shape) check(tubal_tensor_reshape(y.get(), shape->data(), shape->size()));
  write_output(c.output, y.get());
  json j;
  j["command"] = "reconstruct";
  j["input"] = c.input;
  j["output"] = c.output;
  j["shape"] = dims_of(y.get());
  emit(j, "");
}

// ---- complete ----

struct CompleteConfig {
  std::string observed, mask, output, trace, truth, method = "ttt-svd", ranks, report;
  std::optional<double> tol;
  size_t max_iters = 100;
  double stop_tol = 1e-4;
};

void cmd_complete(const CompleteConfig& c) {
  const Tensor m = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.observed.c_str(), out); });
  const Tensor mask = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.mask.c_str(), out); });
  Tensor truth;
  if (!c.truth.empty()) truth = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.truth.c_str(), out); });

  tubal_completion_options o;
  tubal_completion_options_init(&o);
  o.max_iters = c.max_iters;
  o.stop_tol = c.stop_tol;
  Dims ranks;
  if (c.tol.has_value() == !c.ranks.empty()) usage_error("give exactly one of --ranks and --tol");
  if (c.method == "ttt-svd") {
    if (c.tol) {
      o.backend = TUBAL_BACKEND_TTT_TOL;
      o.eps = *c.tol;
    } else {
      ranks = parse_list(c.ranks, "rank");
      o.backend = TUBAL_BACKEND_TTT_RANKS;
      o.ranks = ranks.data();
      o.n_ranks = ranks.size();
    }
  } else if (c.method == "tsvd") {
    if (c.tol) usage_error("tsvd completion takes --ranks with a single tubal rank");
    ranks = parse_list(c.ranks, "rank");
    if (ranks.size() != 1) usage_error("tsvd takes a single tubal rank");
    o.backend = TUBAL_BACKEND_TSVD;
    o.tsvd_rank = ranks[0];
  } else {
    usage_error("unknown completion method " + c.method);
  }

  const auto start = std::chrono::steady_clock::now();
  const Completion r = make<Completion>([&](tubal_completion** out) { return tubal_complete(m.get(), mask.get(), truth.get(), &o, out); });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Tensor est = make<Tensor>([&](tubal_tensor** out) { return tubal_completion_estimate(r.get(), out); });
  write_output(c.output, est.get());

  const size_t n = tubal_completion_iterations(r.get());
  tubal_completion_step last{};
  {
    std::ofstream csv(c.trace);
    csv << "iteration,relative_change,observed_error,full_error\n";
    csv.precision(17);
    for (size_t i = 0; i < n; ++i) {
      tubal_completion_step s;
      check(tubal_completion_step_at(r.get(), i, &s));
      csv << s.iteration << ',';
      if (!std::isnan(s.relative_change)) csv << s.relative_change;
      csv << ',' << s.observed_error << ',';
      if (s.has_full_error) csv << s.full_error;
      csv << '\n';
      last = s;
    }
    if (!csv) throw Failure{io_failure, "cannot write trace " + c.trace};
  }

  json j;
  j["command"] = "complete";
  j["output"] = c.output;
  j["trace"] = c.trace;
  j["method"] = c.method;
  j["iterations"] = n;
  j["converged"] = tubal_completion_converged(r.get()) != 0;
  j["observed_error"] = number(last.observed_error);
  j["full_error"] = last.has_full_error ? number(last.full_error) : json(nullptr);
  j["wall_time_s"] = seconds;
  emit(j, c.report);
}

// ---- metrics ----

struct MetricsConfig {
  std::string reference, estimate, report;
  MetricFlags flags;
};

void cmd_metrics(const MetricsConfig& c) {
  const bool image = is_image_file(c.reference);
  const Tensor x = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.reference.c_str(), out); });
  const Tensor y = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.estimate.c_str(), out); });
  json j;
  j["command"] = "metrics";
  j["reference"] = c.reference;
  j["estimate"] = c.estimate;
  j["shape"] = dims_of(x.get());
  const json m = metrics_json(x.get(), y.get(), c.flags, image);
  for (auto& [k, v] : m.items()) j[k] = v;
  emit(j, c.report);
}

// ---- gen ----

struct GenConfig {
  std::string kind, output, modes, ranks, shape, like;
  size_t tube = 1, i1 = 0, i2 = 0, rank = 1;
  uint64_t seed = 0;
  double noise = 0.0, fraction = 0.0;
};

void cmd_gen(const GenConfig& c) {
  Tensor x;
  if (c.kind == "ttt") {
    const Dims modes = parse_list(c.modes, "mode"), ranks = parse_list(c.ranks, "rank");
    x = make<Tensor>([&](tubal_tensor** out) {
      return tubal_gen_ttt(modes.data(), modes.size(), ranks.data(), ranks.size(), c.tube, c.seed, c.noise, out);
    });
  } else if (c.kind == "tsvd") {
    x = make<Tensor>([&](tubal_tensor** out) { return tubal_gen_tsvd(c.i1, c.i2, c.tube, c.rank, c.seed, c.noise, out); });
  } else if (c.kind == "mask") {
    if (c.shape.empty() == c.like.empty()) usage_error("mask needs exactly one of --shape and --like");
    Dims shape;
    if (!c.like.empty()) {
      const Tensor ref = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(c.like.c_str(), out); });
      shape = dims_of(ref.get());
    } else {
      shape = parse_list(c.shape, "shape");
    }
    x = make<Tensor>([&](tubal_tensor** out) { return tubal_gen_mask(shape.data(), shape.size(), c.fraction, c.seed, out); });
  } else {
    usage_error("unknown kind " + c.kind);
  }
  check(tubal_tensor_write(c.output.c_str(), x.get()));
  json j;
  j["command"] = "gen";
  j["kind"] = c.kind;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["shape"] = dims_of(x.get());
  if (c.kind == "mask") {
    const double* d = tubal_tensor_data(x.get());
    size_t observed = 0;
    for (size_t i = 0; i < tubal_tensor_numel(x.get()); ++i) observed += d[i] == 1.0;
    j["observed"] = observed;
  }
  emit(j, "");
}

// ---- apply-mask helper and info ----

void cmd_info(const std::string& path) {
  char* text = nullptr;
  check(tubal_describe_file(path.c_str(), &text));
  std::cout << text;
  if (*text && text[std::strlen(text) - 1] != '\n') std::cout << '\n';
  tubal_string_free(text);
}

void cmd_mask(const std::string& input, const std::string& mask, const std::string& output) {
  const Tensor x = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(input.c_str(), out); });
  const Tensor m = make<Tensor>([&](tubal_tensor** out) { return tubal_tensor_read(mask.c_str(), out); });
  const Tensor y = make<Tensor>([&](tubal_tensor** out) { return tubal_apply_mask(x.get(), m.get(), out); });
  check(tubal_tensor_write(output.c_str(), y.get()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tubal tensor train compression, completion and quality metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tubal_version()));
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = default)")->check(CLI::NonNegativeNumber);

  CompressConfig cc;
  auto* compress = app.add_subcommand("compress", "Factorize a tensor or image");
  compress->add_option("-i,--input", cc.input, "TensorFile, PGM/PPM or ASCII matrix")->required()->check(CLI::ExistingFile);
  compress->add_option("-o,--output", cc.output, "FactorFile to write")->required();
  compress->add_option("-m,--method", cc.method, "ttt-svd, tatcu, tt-svd or tsvd")
      ->capture_default_str()
      ->check(CLI::IsMember({"ttt-svd", "tatcu", "tt-svd", "tsvd"}));
  auto* ranks_opt = compress->add_option("-r,--ranks", cc.ranks, "Rank profile, internal or with boundary 1s");
  auto* tol_opt = compress->add_option("-t,--tol", cc.tol, "Relative error tolerance")->check(CLI::NonNegativeNumber);
  ranks_opt->excludes(tol_opt);
  compress->add_option("--reshape", cc.reshape, "Column-major reshape before factorizing");
  compress->add_option("--max-refinements", cc.max_refinements, "TATCU budget halvings")->capture_default_str();
  compress->add_option("--report", cc.report, "Also write the JSON report here");
  compress->add_flag("--no-metrics", cc.no_metrics, "Skip the quality metrics");
  add_metric_flags(compress, cc.metrics);

  ReconstructConfig rc;
  auto* reconstruct = app.add_subcommand("reconstruct", "Contract a FactorFile");
  reconstruct->add_option("-i,--input", rc.input, "FactorFile")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("-o,--output", rc.output, "TensorFile, or .pgm/.ppm image")->required();
  reconstruct->add_option("--reshape", rc.reshape, "Shape of the output");
  reconstruct->add_option("--from-report", rc.report, "Restore original_shape from a compress report")->check(CLI::ExistingFile);

  CompleteConfig kc;
  auto* complete = app.add_subcommand("complete", "Fill in missing entries");
  complete->add_option("--observed", kc.observed, "Observed tensor, zero where missing")->required()->check(CLI::ExistingFile);
  complete->add_option("--mask", kc.mask, "Binary mask, 1 = observed")->required()->check(CLI::ExistingFile);
  complete->add_option("-o,--output", kc.output, "Estimate to write")->required();
  complete->add_option("--trace", kc.trace, "Per-iteration CSV")->required();
  complete->add_option("--truth", kc.truth, "Ground truth for full-tensor errors")->check(CLI::ExistingFile);
  complete->add_option("-m,--method", kc.method, "ttt-svd or tsvd")->capture_default_str()->check(CLI::IsMember({"ttt-svd", "tsvd"}));
  complete->add_option("-r,--ranks", kc.ranks, "TTT rank profile or a single tubal rank");
  complete->add_option("-t,--tol", kc.tol, "TTT-SVD relative tolerance")->check(CLI::NonNegativeNumber);
  complete->add_option("--max-iters", kc.max_iters, "Iteration cap")->capture_default_str();
  complete->add_option("--stop-tol", kc.stop_tol, "Relative change stopping threshold")->capture_default_str();
  complete->add_option("--report", kc.report, "Also write the JSON summary here");

  MetricsConfig mc;
  auto* metrics = app.add_subcommand("metrics", "Quality metrics between two tensors or images");
  metrics->add_option("reference", mc.reference, "Reference")->required()->check(CLI::ExistingFile);
  metrics->add_option("estimate", mc.estimate, "Estimate")->required()->check(CLI::ExistingFile);
  metrics->add_option("--report", mc.report, "Also write the JSON report here");
  add_metric_flags(metrics, mc.flags);

  GenConfig gc;
  auto* gen = app.add_subcommand("gen", "Seeded synthetic tensors and masks");
  gen->add_option("kind", gc.kind, "ttt, tsvd or mask")->required()->check(CLI::IsMember({"ttt", "tsvd", "mask"}));
  gen->add_option("-o,--output", gc.output, "TensorFile to write")->required();
  gen->add_option("--seed", gc.seed, "PRNG seed")->capture_default_str();
  gen->add_option("--modes", gc.modes, "ttt: hyper-mode sizes");
  gen->add_option("--ranks", gc.ranks, "ttt: rank profile");
  gen->add_option("--tube", gc.tube, "ttt/tsvd: tube length")->capture_default_str();
  gen->add_option("--i1", gc.i1, "tsvd: rows");
  gen->add_option("--i2", gc.i2, "tsvd: columns");
  gen->add_option("--rank", gc.rank, "tsvd: tubal rank")->capture_default_str();
  gen->add_option("--noise", gc.noise, "Noise norm relative to the signal")->capture_default_str()->check(CLI::NonNegativeNumber);
  gen->add_option("--shape", gc.shape, "mask: shape");
  gen->add_option("--like", gc.like, "mask: take the shape of this tensor")->check(CLI::ExistingFile);
  gen->add_option("--fraction", gc.fraction, "mask: missing fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  std::string mask_in, mask_mask, mask_out;
  auto* apply = app.add_subcommand("apply-mask", "Zero the missing entries of a tensor");
  apply->add_option("input", mask_in)->required()->check(CLI::ExistingFile);
  apply->add_option("mask", mask_mask)->required()->check(CLI::ExistingFile);
  apply->add_option("-o,--output", mask_out)->required();

  std::string info_path;
  auto* info = app.add_subcommand("info", "Describe a TensorFile, FactorFile or image");
  info->add_option("path", info_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    check(tubal_set_threads(threads));
    if (*compress) {
      if (cc.ranks.empty() && !cc.tol) usage_error("compress needs --ranks or --tol");
      cmd_compress(cc);
    } else if (*reconstruct) {
      cmd_reconstruct(rc);
    } else if (*complete) {
      cmd_complete(kc);
    } else if (*metrics) {
      cmd_metrics(mc);
    } else if (*gen) {
      cmd_gen(gc);
    } else if (*apply) {
      cmd_mask(mask_in, mask_mask, mask_out);
    } else if (*info) {
      cmd_info(info_path);
    }
  } catch (const Failure& f) {
    std::cerr << "tubal: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "tubal: " << e.what() << '\n';
    return io_failure;
  }
  return ok;
}

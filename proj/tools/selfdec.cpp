// Command-line front end: evaluate characteristic functions and their
// background driving counterparts, tabulate BDDFs, generate sample
// batches, report moments, and run the identity-verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/model error,
// 3 numeric failure.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selfdec/charfn.hpp"
#include "selfdec/inversion.hpp"
#include "selfdec/kernels.hpp"
#include "selfdec/samplers.hpp"
#include "selfdec/specfun.hpp"
#include "selfdec/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// all floating-point output at 17 significant digits
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ModelFlags {
  std::string json;
  std::string kind;
  std::optional<double> alpha, lambda, m, c, scale;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--model", mf.json,
                  "model descriptor JSON {\"kind\":...,\"params\":{...}} "
                  "(wins over shorthand flags)");
  cmd->add_option("--kind", mf.kind,
                  "model kind: Gamma|LogGamma|Levy|SymStable1|BesselK");
  cmd->add_option("--alpha", mf.alpha, "shape parameter");
  cmd->add_option("--lambda", mf.lambda, "rate parameter");
  cmd->add_option("--m", mf.m, "location parameter (Levy)");
  cmd->add_option("--c", mf.c, "scale parameter (Levy)");
  cmd->add_option("--scale", mf.scale, "scale parameter (SymStable1)");
}

selfdec::charfn::DistributionModel parse_model(const ModelFlags& mf) {
  using selfdec::charfn::DistributionModel;
  if (!mf.json.empty()) return selfdec::charfn::model_from_json(mf.json);
  if (mf.kind == "Gamma") {
    return DistributionModel::make_gamma(
        {mf.alpha.value_or(1.0), mf.lambda.value_or(1.0)});
  }
  if (mf.kind == "LogGamma") {
    return DistributionModel::make_loggamma(
        {mf.alpha.value_or(1.0), mf.lambda.value_or(1.0)});
  }
  if (mf.kind == "Levy") {
    return DistributionModel::make_levy(
        {mf.m.value_or(0.0), mf.c.value_or(1.0)});
  }
  if (mf.kind == "SymStable1") {
    return DistributionModel::make_symstable1({mf.scale.value_or(1.0)});
  }
  if (mf.kind == "BesselK") {
    return DistributionModel::make_besselk(
        {mf.alpha.value_or(1.0), mf.lambda.value_or(1.0)});
  }
  throw std::domain_error("no model given (use --model or --kind)");
}

struct QuadFlags {
  selfdec::QuadratureConfig cfg;
};

void add_quad_flags(CLI::App* cmd, QuadFlags& qf) {
  cmd->add_option("--abs-tol", qf.cfg.abs_tol, "absolute tolerance");
  cmd->add_option("--rel-tol", qf.cfg.rel_tol, "relative tolerance");
  cmd->add_option("--max-segments", qf.cfg.max_segments, "segment budget");
  cmd->add_option("--accel-terms", qf.cfg.accel_terms,
                  "tail acceleration depth");
}

std::vector<double> build_grid(const std::vector<double>& points, double lo,
                               double hi, int count) {
  if (!points.empty()) return points;
  std::vector<double> grid;
  if (count == 1) {
    grid.push_back(lo);
    return grid;
  }
  for (int i = 0; i < count; ++i) {
    grid.push_back(lo + (hi - lo) * i / (count - 1));
  }
  return grid;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SELFDEC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_cf(const ModelFlags& mf, const std::string& which,
           const std::vector<double>& t_points, double t_min, double t_max,
           int t_count, const std::string& format, const std::string& out_path,
           const QuadFlags&) {
  const auto model = parse_model(mf);
  const auto grid = build_grid(t_points, t_min, t_max, t_count);
  Output out(out_path);
  nlohmann::json jrows = nlohmann::json::array();
  if (format == "csv") {
    out.stream() << "# model=" << selfdec::charfn::model_to_json(model)
                 << " which=" << which << "\n";
    out.stream() << "# columns: t,re,im\n";
  }
  for (double t : grid) {
    const selfdec::ComplexValue v =
        (which == "bdcf") ? std::exp(selfdec::charfn::log_bdcf_closed(model, t))
                          : std::exp(selfdec::charfn::log_cf(model, t));
    if (format == "csv") {
      out.stream() << fmt(t) << "," << fmt(v.real()) << "," << fmt(v.imag())
                   << "\n";
    } else {
      jrows.push_back({{"t", t}, {"re", v.real()}, {"im", v.imag()}});
    }
  }
  if (format == "json") out.stream() << jrows.dump() << "\n";
  return kExitOk;
}

int cmd_bddf(const ModelFlags& mf, const std::vector<double>& a_points,
             double a_min, double a_max, int a_count,
             const std::string& format, const std::string& out_path,
             const QuadFlags& qf) {
  const auto model = parse_model(mf);
  const auto grid = build_grid(a_points, a_min, a_max, a_count);
  Output out(out_path);
  nlohmann::json jrows = nlohmann::json::array();
  if (format == "csv") {
    out.stream() << "# model=" << selfdec::charfn::model_to_json(model)
                 << "\n";
    out.stream() << "# columns: a,value,est_error,segments_used\n";
  }
  bool numeric_failure = false;
  for (double a : grid) {
    try {
      const auto p = selfdec::inversion::bddf(model, a, qf.cfg);
      if (format == "csv") {
        out.stream() << fmt(p.a) << "," << fmt(p.value) << ","
                     << fmt(p.est_error) << "," << p.segments_used << "\n";
      } else {
        jrows.push_back({{"a", p.a},
                         {"value", p.value},
                         {"est_error", p.est_error},
                         {"segments_used", p.segments_used}});
      }
    } catch (const selfdec::QuadratureError& e) {
      numeric_failure = true;
      if (format == "csv") {
        out.stream() << fmt(a) << ",nan,nan,-1 # failed: " << e.what() << "\n";
      } else {
        jrows.push_back({{"a", a}, {"error", e.what()}});
      }
    }
  }
  if (format == "json") out.stream() << jrows.dump() << "\n";
  return numeric_failure ? kExitNumeric : kExitOk;
}

int cmd_sample(const std::string& gen, double alpha, double lambda, double c,
               std::uint64_t n, std::uint64_t seed, std::uint64_t stream_id,
               int truncation, bool no_tail_correction,
               const std::string& format, const std::string& out_path) {
  using namespace selfdec;
  rng::RngStream stream(seed, stream_id);
  samplers::SeriesConfig cfg;
  cfg.truncation_n = truncation;
  cfg.tail_mean_correction = !no_tail_correction;

  samplers::SampleBatch batch;
  std::optional<double> poisson_mean;
  if (gen == "gamma_bdrv") {
    batch = samplers::sample_gamma_bdrv({alpha, lambda}, n, stream);
    poisson_mean = alpha;
  } else if (gen == "loggamma") {
    batch = samplers::sample_loggamma_series({alpha, lambda}, n, cfg, stream);
  } else if (gen == "loggamma_innovation") {
    batch = samplers::sample_loggamma_innovation(alpha, c, n, cfg, stream);
  } else if (gen == "besselk") {
    batch = samplers::sample_besselk({alpha, lambda}, n, stream);
  } else if (gen == "besselk_innovation") {
    batch = samplers::sample_besselk_innovation({alpha, lambda}, c, n, stream);
    poisson_mean = -alpha * std::log(c * c);
  } else if (gen == "gamma_innovation") {
    batch = samplers::sample_gamma_innovation({alpha, lambda}, c, n, stream);
    poisson_mean = -alpha * std::log(c);
  } else {
    throw std::domain_error("unknown generator tag \"" + gen + "\"");
  }

  Output out(out_path);
  if (format == "csv") {
    out.stream() << "# generator=" << batch.generator_tag
                 << " seed=" << batch.seed << " stream_id=" << batch.stream_id
                 << " n=" << n;
    if (gen == "loggamma" || gen == "loggamma_innovation") {
      out.stream() << " truncation=" << cfg.truncation_n
                   << " tail_mean_correction="
                   << (cfg.tail_mean_correction ? "on" : "off");
    }
    if (poisson_mean) out.stream() << " poisson_mean=" << fmt(*poisson_mean);
    out.stream() << "\n";
    for (double v : batch.values) out.stream() << fmt(v) << "\n";
  } else {
    nlohmann::json j;
    j["generator"] = batch.generator_tag;
    j["seed"] = batch.seed;
    j["stream_id"] = batch.stream_id;
    if (gen == "loggamma" || gen == "loggamma_innovation") {
      j["truncation"] = cfg.truncation_n;
      j["tail_mean_correction"] = cfg.tail_mean_correction;
    }
    if (poisson_mean) j["poisson_mean"] = *poisson_mean;
    j["values"] = batch.values;
    out.stream() << j.dump() << "\n";
  }
  return kExitOk;
}

int cmd_moments(const ModelFlags& mf, const std::string& out_path,
                const QuadFlags& qf) {
  using namespace selfdec;
  const auto model = parse_model(mf);
  nlohmann::json j;
  switch (model.kind()) {
    case charfn::ModelKind::kLogGamma: {
      const auto& p = model.loggamma_params();
      const double drift = -std::log(p.lambda) + specfun::digamma(p.alpha);
      j["mean"] = drift;
      j["variance"] = specfun::trigamma(p.alpha);
      j["bddf_mean"] = drift;
      j["bddf_variance"] = charfn::loggamma_bddf_variance(p, qf.cfg);
      break;
    }
    case charfn::ModelKind::kGamma: {
      const auto& p = model.gamma_params();
      j["mean"] = p.alpha / p.lambda;
      j["variance"] = p.alpha / (p.lambda * p.lambda);
      j["bddf_mean"] = p.alpha / p.lambda;
      j["bddf_variance"] = 2.0 * p.alpha / (p.lambda * p.lambda);
      break;
    }
    case charfn::ModelKind::kBesselK: {
      const auto& p = model.besselk_params();
      j["mean"] = 0.0;
      j["variance"] = 2.0 * p.alpha / (p.lambda * p.lambda);
      j["bddf_mean"] = 0.0;
      j["bddf_variance"] = 4.0 * p.alpha / (p.lambda * p.lambda);
      break;
    }
    default:
      throw std::domain_error(
          std::string("no moment formulas for ") + model.kind_name() +
          " (the law has no finite variance)");
  }
  Output out(out_path);
  out.stream() << j.dump() << "\n";
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& only, double tolerance_scale,
               std::uint64_t seed, std::uint64_t mc_n, int truncation,
               const std::string& out_path) {
  using namespace selfdec;
  validation::SuiteConfig cfg;
  cfg.seed = seed;
  cfg.mc_n = mc_n;
  cfg.series_truncation = truncation;
  cfg.tolerance_scale = tolerance_scale;
  cfg.only = only;
  const auto reports = validation::run_all(cfg);
  Output out(out_path);
  bool all_passed = true;
  for (const auto& r : reports) {
    out.stream() << validation::report_to_json(r) << "\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "selfdecomposable-law toolkit: characteristic functions, background "
      "driving laws, exact samplers, identity verification"};
  app.require_subcommand(1);

  ModelFlags mf_cf, mf_bddf, mf_moments;
  QuadFlags qf_cf, qf_bddf, qf_moments;
  std::string format_cf = "csv", format_bddf = "csv", format_sample = "csv";
  std::string out_cf, out_bddf, out_sample, out_moments, out_verify;

  auto* cf = app.add_subcommand("cf", "evaluate cf or bdcf on a t grid");
  add_model_flags(cf, mf_cf);
  add_quad_flags(cf, qf_cf);
  std::string which = "cf";
  std::vector<double> t_points;
  double t_min = 0.0, t_max = 10.0;
  int t_count = 11;
  cf->add_option("--which", which, "cf or bdcf")
      ->check(CLI::IsMember({"cf", "bdcf"}));
  cf->add_option("--t", t_points, "explicit t values (repeatable)");
  cf->add_option("--t-min", t_min, "grid start");
  cf->add_option("--t-max", t_max, "grid end");
  cf->add_option("--t-count", t_count, "grid size");
  cf->add_option("--format", format_cf, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cf->add_option("--output", out_cf, "output path (default stdout)");

  auto* bd = app.add_subcommand("bddf", "tabulate the BDDF on an a grid");
  add_model_flags(bd, mf_bddf);
  add_quad_flags(bd, qf_bddf);
  std::vector<double> a_points;
  double a_min = 0.0, a_max = 5.0;
  int a_count = 11;
  bd->add_option("--a", a_points, "explicit a values (repeatable)");
  bd->add_option("--a-min", a_min, "grid start");
  bd->add_option("--a-max", a_max, "grid end");
  bd->add_option("--a-count", a_count, "grid size");
  bd->add_option("--format", format_bddf, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bd->add_option("--output", out_bddf, "output path (default stdout)");

  auto* sm = app.add_subcommand("sample", "generate a sample batch");
  std::string gen;
  double s_alpha = 1.0, s_lambda = 1.0, s_c = 0.5;
  std::uint64_t s_n = 1000;
  std::uint64_t s_seed = default_seed();
  std::uint64_t s_stream = 0;
  int s_trunc = 10'000;
  bool s_no_tail = false;
  sm->add_option("--gen", gen,
                 "generator: gamma_bdrv|loggamma|loggamma_innovation|besselk|"
                 "besselk_innovation|gamma_innovation")
      ->required();
  sm->add_option("--alpha", s_alpha, "shape parameter");
  sm->add_option("--lambda", s_lambda, "rate parameter");
  sm->add_option("--c", s_c, "autoregression factor in (0,1)");
  sm->add_option("--n", s_n, "number of draws")->check(CLI::PositiveNumber);
  sm->add_option("--seed", s_seed,
                 "RNG seed (default from SELFDEC_SEED, else 0)");
  sm->add_option("--stream-id", s_stream, "RNG stream id");
  sm->add_option("--truncation", s_trunc, "series truncation index");
  sm->add_flag("--no-tail-correction", s_no_tail,
               "disable the deterministic tail-mean correction");
  sm->add_option("--format", format_sample, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sm->add_option("--output", out_sample, "output path (default stdout)");

  auto* mo = app.add_subcommand("moments", "mean/variance of a model and its "
                                           "background driving law");
  add_model_flags(mo, mf_moments);
  add_quad_flags(mo, qf_moments);
  mo->add_option("--output", out_moments, "output path (default stdout)");

  auto* ve = app.add_subcommand("verify", "run the identity suite");
  std::vector<std::string> only;
  double tol_scale = 1.0;
  std::uint64_t v_seed = 20250101;
  std::uint64_t v_n = 100'000;
  int v_trunc = 10'000;
  ve->add_option("--only", only, "substring filters on identity ids");
  ve->add_option("--tolerance-scale", tol_scale,
                 "multiply every tolerance by this factor");
  ve->add_option("--seed", v_seed, "suite seed");
  ve->add_option("--n", v_n, "Monte Carlo sample size");
  ve->add_option("--truncation", v_trunc, "series truncation");
  ve->add_option("--output", out_verify, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cf->parsed()) {
      return cmd_cf(mf_cf, which, t_points, t_min, t_max, t_count, format_cf,
                    out_cf, qf_cf);
    }
    if (bd->parsed()) {
      return cmd_bddf(mf_bddf, a_points, a_min, a_max, a_count, format_bddf,
                      out_bddf, qf_bddf);
    }
    if (sm->parsed()) {
      return cmd_sample(gen, s_alpha, s_lambda, s_c, s_n, s_seed, s_stream,
                        s_trunc, s_no_tail, format_sample, out_sample);
    }
    if (mo->parsed()) {
      return cmd_moments(mf_moments, out_moments, qf_moments);
    }
    if (ve->parsed()) {
      return cmd_verify(only, tol_scale, v_seed, v_n, v_trunc, out_verify);
    }
  } catch (const selfdec::QuadratureError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad model descriptor: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

// Command-line front end: constants | sample | psi | pickands | criterion |
// erdos-revesz | limsup | suite. Human-readable summaries go to stdout,
// machine outputs to files under --out. Usage errors exit 2, numeric errors 1.

#include <CLI11.hpp>

#include "gsq/asymptotics.hpp"
#include "gsq/criterion.hpp"
#include "gsq/errors.hpp"
#include "gsq/experiments.hpp"
#include "gsq/io.hpp"
#include "gsq/math_util.hpp"
#include "gsq/pickands.hpp"
#include "gsq/queue.hpp"
#include "gsq/sampling.hpp"
#include "gsq/variance_model.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

struct ModelFlags {
  std::string kind = "fbm";
  double hurst = 0.5;
  double srd_a = 1.0;
  std::string table_file;
  std::optional<double> alpha0, A0, alphaInf, AInf;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--model", mf.kind, "Input model kind: fbm | srd | tabulated")
      ->default_val("fbm");
  cmd->add_option("--hurst", mf.hurst, "Hurst index for fbm, in (0, 1]");
  cmd->add_option("--srd-a", mf.srd_a,
                  "Exponent of the exp-power correlation exp(-|t|^a), a in (0, 2]");
  cmd->add_option("--table", mf.table_file, "CSV file (t,sigma2) for tabulated models");
  cmd->add_option("--alpha0", [&mf](auto& vals) { mf.alpha0 = std::stod(vals[0]); return true; },
                  "Override: exponent at zero (tabulated)");
  cmd->add_option("--A0", [&mf](auto& vals) { mf.A0 = std::stod(vals[0]); return true; },
                  "Override: coefficient at zero (tabulated)");
  cmd->add_option("--alphaInf", [&mf](auto& vals) { mf.alphaInf = std::stod(vals[0]); return true; },
                  "Override: exponent at infinity (tabulated)");
  cmd->add_option("--AInf", [&mf](auto& vals) { mf.AInf = std::stod(vals[0]); return true; },
                  "Override: coefficient at infinity (tabulated)");
}

gsq::VarianceModel build_model(const ModelFlags& mf) {
  if (mf.kind == "fbm") return gsq::VarianceModel::fbm(mf.hurst);
  if (mf.kind == "srd")
    return gsq::VarianceModel::srd_integrated(gsq::SrdCorrelation::exp_power(mf.srd_a));
  if (mf.kind == "tabulated") {
    std::ifstream is(mf.table_file);
    if (!is) throw gsq::ModelValidationError("cannot open table file " + mf.table_file);
    std::vector<double> t, s2;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 't') continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      t.push_back(std::stod(line.substr(0, comma)));
      s2.push_back(std::stod(line.substr(comma + 1)));
    }
    std::optional<gsq::RegularVariation> rv;
    if (mf.alpha0 && mf.A0 && mf.alphaInf && mf.AInf)
      rv = gsq::RegularVariation{*mf.alpha0, *mf.A0, *mf.alphaInf, *mf.AInf};
    return gsq::VarianceModel::tabulated(t, s2, rv);
  }
  throw gsq::ModelValidationError("unknown model kind '" + mf.kind + "'");
}

void write_plot_data(const std::string& file,
                     const std::vector<std::pair<double, double>>& rows) {
  std::string out;
  for (auto& [x, y] : rows)
    out += gsq::format_g17(x) + " " + gsq::format_g17(y) + "\n";
  gsq::atomic_write(file, out);
}

std::string classification_text(gsq::Classification c) {
  switch (c) {
    case gsq::Classification::Finite: return "finite => P(i.o.)=0";
    case gsq::Classification::Infinite: return "infinite => P(i.o.)=1";
    default: return "inconclusive";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and numerical-verification toolkit for reflected Gaussian "
               "queues: closed-form constants, exact path sampling, exceedance "
               "Monte Carlo, clustering-constant estimation, boundary classification "
               "and last-passage statistics."};
  app.require_subcommand(1);

  ModelFlags mf;
  double c = 1.0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out_dir = "out";
  std::string emit;

  // Shared flags are registered per subcommand so `gsq psi --help` shows them.
  auto add_common = [&](CLI::App* cmd) {
    add_model_flags(cmd, mf);
    cmd->add_option("--c", c, "Drift (service rate), c > 0")->default_val(1.0);
    cmd->add_option("--seed", seed, "Master seed; all outputs are deterministic in it");
    cmd->add_option("--workers", workers, "Worker threads (does not change results)");
    cmd->add_option("--out", out_dir, "Output directory")->default_val("out");
    cmd->add_option("--emit", emit, "Extra outputs: plot-data");
  };

  // constants ---------------------------------------------------------------
  auto* cmd_const = app.add_subcommand("constants", "Print the constants bundle as JSON");
  std::optional<double> pickands_flag;
  bool estimate_pick = false;
  add_common(cmd_const);
  cmd_const->add_option("--pickands",
                        [&pickands_flag](auto& vals) {
                          pickands_flag = std::stod(vals[0]);
                          return true;
                        },
                        "Externally estimated clustering constant");
  cmd_const->add_flag("--estimate-pickands", estimate_pick,
                      "Estimate the clustering constant first (default ladder)");

  // sample ------------------------------------------------------------------
  auto* cmd_sample = app.add_subcommand("sample", "Draw one input path (and queue)");
  std::size_t n = 1024;
  double delta = 0.01;
  std::uint64_t replica = 0;
  std::string format = "csv";
  bool with_queue = false;
  double q0 = 0.0;
  add_common(cmd_sample);
  cmd_sample->add_option("--n", n, "Grid points")->default_val(1024);
  cmd_sample->add_option("--delta", delta, "Grid step")->default_val(0.01);
  cmd_sample->add_option("--replica", replica, "Replica index within the seed stream");
  cmd_sample->add_option("--format", format, "csv | binary")->default_val("csv");
  cmd_sample->add_flag("--queue", with_queue, "Also dump the reflected queue");
  cmd_sample->add_option("--q0", q0, "Initial queue content for --queue");

  // psi ---------------------------------------------------------------------
  auto* cmd_psi = app.add_subcommand("psi", "Exceedance probability over [0, u]");
  double u = 1.0;
  std::uint64_t replicas = 10000;
  std::optional<double> delta_opt, burn_opt;
  add_common(cmd_psi);
  cmd_psi->add_option("--u", u, "Level and window length")->required();
  cmd_psi->add_option("--replicas", replicas, "Monte Carlo replicas")->default_val(10000);
  cmd_psi->add_option("--delta", [&delta_opt](auto& v) { delta_opt = std::stod(v[0]); return true; },
                      "Grid step override (default: rule min(Delta(u)/8, u/2^14))");
  cmd_psi->add_option("--burn-in", [&burn_opt](auto& v) { burn_opt = std::stod(v[0]); return true; },
                      "Pre-history override (default: 20 x hitting time)");

  // pickands ------------------------------------------------------------
  auto* cmd_pick = app.add_subcommand("pickands", "Estimate the clustering constant");
  std::string process = "fbm";
  double index = 0.5;
  std::vector<double> ladder{1.25, 2.5, 5.0};
  double theta = 0.0;
  std::uint64_t pick_replicas = 20000;
  add_common(cmd_pick);
  cmd_pick->add_option("--process", process, "fbm | scaled-input")->default_val("fbm");
  cmd_pick->add_option("--index", index, "Self-similarity index for --process fbm");
  cmd_pick->add_option("--S-ladder", ladder, "Window lengths (ascending)")
      ->delimiter(',');
  cmd_pick->add_option("--theta", theta, "Grid step; 0 = continuous-limit refinement");
  cmd_pick->add_option("--replicas", pick_replicas, "Replicas")->default_val(20000);

  // criterion -----------------------------------------------------------
  auto* cmd_crit = app.add_subcommand("criterion", "Classify a boundary (zero-one law)");
  double p = 1.0;
  double T = 0.0, T_max = 0.0;
  std::optional<double> crit_pick;
  add_common(cmd_crit);
  cmd_crit->add_option("--p", p, "Boundary family parameter")->required();
  cmd_crit->add_option("--T", T, "Integration start (0 = where m(f(T)) = 3)");
  cmd_crit->add_option("--T-max", T_max, "Integration end (0 = T * 1e6)");
  cmd_crit->add_option("--pickands", [&crit_pick](auto& v) { crit_pick = std::stod(v[0]); return true; },
                       "Clustering constant (required)");

  // erdos-revesz ----------------------------------------------------------
  auto* cmd_er = app.add_subcommand("erdos-revesz", "Last-passage statistic traces");
  double er_p = 2.0, er_T = 1e5;
  std::uint64_t er_replicas = 200;
  std::optional<double> er_pick, er_delta, er_burn;
  double er_start = 32.0;
  add_common(cmd_er);
  cmd_er->add_option("--p", er_p, "Boundary family parameter, p > 0")->required();
  cmd_er->add_option("--horizon", er_T, "Horizon")->default_val(1e5);
  cmd_er->add_option("--replicas", er_replicas, "Replicas")->default_val(200);
  cmd_er->add_option("--pickands", [&er_pick](auto& v) { er_pick = std::stod(v[0]); return true; },
                     "Clustering constant (required)");
  cmd_er->add_option("--delta", [&er_delta](auto& v) { er_delta = std::stod(v[0]); return true; },
                     "Grid step override");
  cmd_er->add_option("--burn-in", [&er_burn](auto& v) { er_burn = std::stod(v[0]); return true; },
                     "Pre-history override");
  cmd_er->add_option("--start", er_start, "First checkpoint");

  // limsup ------------------------------------------------------------------
  auto* cmd_lim = app.add_subcommand("limsup", "Normalized running-maximum experiment");
  double lim_T = 1e4;
  std::uint64_t lim_replicas = 100;
  double lim_delta = 0.125, lim_start = 100.0;
  add_common(cmd_lim);
  cmd_lim->add_option("--horizon", lim_T, "Horizon (>= 1e4)")->default_val(1e4);
  cmd_lim->add_option("--replicas", lim_replicas, "Replicas")->default_val(100);
  cmd_lim->add_option("--delta", lim_delta, "Grid step")->default_val(0.125);
  cmd_lim->add_option("--start", lim_start, "Running-sup start time")->default_val(100.0);

  // suite ---------------------------------------------------------------
  auto* cmd_suite = app.add_subcommand("suite", "Run a declarative experiment suite");
  std::string config_file;
  std::string suite_out;
  std::optional<unsigned> suite_workers;
  std::optional<std::uint64_t> suite_seed;
  cmd_suite->add_option("--config", config_file, "Suite config JSON")->required();
  cmd_suite->add_option("--out", suite_out, "Output directory override");
  cmd_suite->add_option("--workers", [&suite_workers](auto& v) {
    suite_workers = unsigned(std::stoul(v[0]));
    return true;
  }, "Worker threads override (does not change results)");
  cmd_suite->add_option("--seed", [&suite_seed](auto& v) {
    suite_seed = std::stoull(v[0]);
    return true;
  }, "Master seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    gsq::VarianceModel model = [&] {
      try {
        if (app.got_subcommand(cmd_suite)) return gsq::VarianceModel::fbm(0.5); // unused
        return build_model(mf);
      } catch (const gsq::ModelValidationError&) {
        throw; // handled below as a usage error
      }
    }();

    if (app.got_subcommand(cmd_const)) {
      std::optional<double> H = pickands_flag;
      if (estimate_pick && !H) {
        const auto& rv = model.rv();
        gsq::PickandsSpec spec =
            rv.alphaInf == 0.5
                ? gsq::PickandsSpec::scaled_input(model, c, 1.0, 20000, seed)
                : gsq::PickandsSpec::fbm_window(
                      rv.alphaInf > 0.5 ? rv.alphaInf : rv.alpha0, 1.0, 20000, seed);
        double lad[3] = {1.25, 2.5, 5.0};
        H = gsq::estimate_rate(spec, lad, workers).extrapolated;
      }
      gsq::AsymptoticConstants k = gsq::constants(model, c, H);
      std::cout << gsq::constants_json(k);
      return 0;
    }

    if (app.got_subcommand(cmd_sample)) {
      std::filesystem::create_directories(out_dir);
      gsq::GridSpec grid(delta, n, 0.0);
      gsq::IncrementSampler sampler(model, grid);
      auto inc = sampler.sample(gsq::replica_seed(seed, 0x73616D706C650000ULL, replica));
      gsq::SampledPath path = gsq::assemble_path(inc, grid, seed);
      std::string base = out_dir + "/path";
      if (format == "binary") {
        gsq::write_path_binary(path, base + ".bin");
        std::cout << "wrote " << base << ".bin (" << n << " points, step " << delta
                  << ")\n";
      } else {
        gsq::write_path_csv(path, base + ".csv");
        std::cout << "wrote " << base << ".csv (" << n << " points, step " << delta
                  << ")\n";
      }
      if (with_queue) {
        gsq::QueuePath qp = gsq::reflect_lindley(path, c, q0);
        gsq::write_queue_csv(qp, out_dir + "/queue.csv");
        std::cout << "wrote " << out_dir << "/queue.csv\n";
      }
      return 0;
    }

    if (app.got_subcommand(cmd_psi)) {
      std::filesystem::create_directories(out_dir);
      gsq::PsiOptions opts;
      opts.workers = workers;
      opts.delta_override = delta_opt;
      opts.burn_in_override = burn_opt;
      gsq::PsiResult r = gsq::estimate_psi(model, c, u, replicas, seed, opts);
      std::ostringstream csv;
      csv << "experiment,params,value,stderr\n"
          << "psi,u=" << gsq::format_g17(u) << ";delta=" << gsq::format_g17(r.delta)
          << ";burn_in=" << gsq::format_g17(r.burn_in) << ";replicas=" << replicas << ","
          << gsq::format_g17(r.estimate.value) << ","
          << gsq::format_g17(r.estimate.std_error) << "\n";
      gsq::atomic_write(out_dir + "/psi.csv", csv.str());
      std::cout << "psi(" << u << ") = " << r.estimate.value << " +/- "
                << r.estimate.std_error << "  (m(u) = " << r.m_u << ", delta = " << r.delta
                << ", burn-in = " << r.burn_in << ", replicas = " << replicas << ")\n";
      if (r.estimate.low_statistics)
        std::cout << "  no exceedances observed; one-sided 95% bound " << r.estimate.upper95
                  << "\n";
      std::cout << "wrote " << out_dir << "/psi.csv\n";
      return 0;
    }

    if (app.got_subcommand(cmd_pick)) {
      std::filesystem::create_directories(out_dir);
      gsq::PickandsSpec spec =
          process == "scaled-input"
              ? gsq::PickandsSpec::scaled_input(model, c, ladder.back(), pick_replicas,
                                                seed, theta)
              : gsq::PickandsSpec::fbm_window(index, ladder.back(), pick_replicas, seed,
                                              theta);
      gsq::RateEstimate rate = gsq::estimate_rate(spec, ladder, workers);
      std::ostringstream js;
      js << "{\n  \"process\": \"" << process << "\",\n  \"theta\": "
         << gsq::format_g17(theta) << ",\n  \"replicas\": " << pick_replicas
         << ",\n  \"ladder\": [\n";
      for (std::size_t i = 0; i < rate.ladder.size(); ++i) {
        const auto& pt = rate.ladder[i];
        js << "    {\"S\": " << gsq::format_g17(pt.S) << ", \"theta\": "
           << gsq::format_g17(pt.theta) << ", \"value\": " << gsq::format_g17(pt.value)
           << ", \"stderr\": " << gsq::format_g17(pt.std_error) << "}"
           << (i + 1 < rate.ladder.size() ? ",\n" : "\n");
      }
      js << "  ],\n  \"extrapolated\": " << gsq::format_g17(rate.extrapolated)
         << ",\n  \"stderr\": " << gsq::format_g17(rate.std_error)
         << ",\n  \"monotone_warning\": " << (rate.monotone_warning ? "true" : "false")
         << "\n}\n";
      gsq::atomic_write(out_dir + "/pickands.json", js.str());
      std::cout << "clustering constant ~= " << rate.extrapolated << " +/- "
                << rate.std_error << " (ladder of " << rate.ladder.size() << " windows)\n";
      for (const auto& pt : rate.ladder)
        std::cout << "  S = " << pt.S << ": " << pt.value << " +/- " << pt.std_error
                  << "\n";
      if (emit == "plot-data") {
        std::vector<std::pair<double, double>> rows;
        for (const auto& pt : rate.ladder) rows.emplace_back(1.0 / pt.S, pt.value);
        write_plot_data(out_dir + "/pickands_ladder.dat", rows);
      }
      std::cout << "wrote " << out_dir << "/pickands.json\n";
      return 0;
    }

    if (app.got_subcommand(cmd_crit)) {
      std::filesystem::create_directories(out_dir);
      if (!crit_pick)
        throw gsq::DomainError("criterion: --pickands is required (estimate it with the "
                               "pickands subcommand first)");
      gsq::BoundaryFunction f = gsq::BoundaryFunction::fp_family(model, c, p);
      double Ts = T > 0.0 ? T : gsq::default_start(model, c, f);
      double Te = T_max > 0.0 ? T_max : Ts * 1e6;
      gsq::CriterionVerdict v = gsq::classify(model, c, f, Ts, Te, *crit_pick);
      std::ostringstream js;
      js << "{\n  \"boundary\": \"" << f.id << "\",\n  \"T\": " << gsq::format_g17(Ts)
         << ",\n  \"T_max\": " << gsq::format_g17(Te)
         << ",\n  \"integral\": " << gsq::format_g17(v.integral)
         << ",\n  \"tail_exponent_q\": " << gsq::format_g17(v.tail_exponent_q)
         << ",\n  \"epsilon\": " << gsq::format_g17(v.epsilon) << ",\n  \"classification\": \""
         << classification_text(v.classification) << "\",\n  \"boundary_case\": "
         << (v.boundary_case ? "true" : "false") << ",\n  \"trusted_window\": "
         << (v.trusted_window ? "true" : "false") << ",\n  \"trusted_validity\": "
         << (v.trusted_validity ? "true" : "false") << ",\n  \"notes\": \"" << v.notes
         << "\",\n  \"integrand_samples\": [\n";
      for (std::size_t i = 0; i < v.integrand_samples.size(); ++i)
        js << "    [" << gsq::format_g17(v.integrand_samples[i].first) << ", "
           << gsq::format_g17(v.integrand_samples[i].second) << "]"
           << (i + 1 < v.integrand_samples.size() ? ",\n" : "\n");
      js << "  ]\n}\n";
      gsq::atomic_write(out_dir + "/criterion.json", js.str());
      std::cout << "classification: " << classification_text(v.classification)
                << (v.boundary_case ? " (boundary case p = 0)" : "") << "\n"
                << "integral over [" << Ts << ", " << Te << "] = " << v.integral
                << ", tail exponent q = " << v.tail_exponent_q << "\n"
                << "trusted window: " << (v.trusted_window ? "yes" : "no")
                << ", asymptotic validity: " << (v.trusted_validity ? "yes" : "no") << "\n";
      if (!v.notes.empty()) std::cout << "notes: " << v.notes << "\n";
      if (emit == "plot-data")
        write_plot_data(out_dir + "/criterion_integrand.dat", v.integrand_samples);
      std::cout << "wrote " << out_dir << "/criterion.json\n";
      return 0;
    }

    if (app.got_subcommand(cmd_er)) {
      std::filesystem::create_directories(out_dir);
      if (!er_pick)
        throw gsq::DomainError("erdos-revesz: --pickands is required");
      gsq::ErdosReveszOptions opts;
      opts.workers = workers;
      opts.delta_override = er_delta;
      opts.burn_in_override = er_burn;
      opts.start = er_start;
      gsq::ErdosReveszResult r = gsq::erdos_revesz_experiment(model, c, er_p, er_T,
                                                              er_replicas, seed, *er_pick,
                                                              opts);
      std::ostringstream csv;
      csv << "experiment,params,value,stderr\n";
      for (std::size_t j = 0; j < r.checkpoints.size(); ++j)
        csv << "erdos-revesz-median,t=" << gsq::format_g17(r.checkpoints[j]) << ","
            << gsq::format_g17(r.median_running_inf[j]) << ",0\n";
      csv << "erdos-revesz-band,p=" << gsq::format_g17(er_p) << ","
          << gsq::format_g17(r.fraction_in_band) << ",0\n";
      gsq::atomic_write(out_dir + "/erdos_revesz.csv", csv.str());
      std::cout << "fraction of replicas with final running infimum in [-2, 0]: "
                << r.fraction_in_band << "\n"
                << "replicas with no crossing: " << r.no_crossing_replicas << "\n"
                << "sign invariant held: " << (r.sign_invariant_held ? "yes" : "no") << "\n"
                << "note: " << r.disclaimer << "\n";
      if (emit == "plot-data") {
        std::vector<std::pair<double, double>> rows;
        for (std::size_t j = 0; j < r.checkpoints.size(); ++j)
          rows.emplace_back(r.checkpoints[j], r.median_running_inf[j]);
        write_plot_data(out_dir + "/erdos_revesz_trace.dat", rows);
      }
      std::cout << "wrote " << out_dir << "/erdos_revesz.csv\n";
      return 0;
    }

    if (app.got_subcommand(cmd_lim)) {
      std::filesystem::create_directories(out_dir);
      gsq::LimsupOptions opts;
      opts.workers = workers;
      opts.delta = lim_delta;
      opts.start = lim_start;
      gsq::LimsupResult r = gsq::limsup_experiment(model, c, lim_T, lim_replicas, seed,
                                                   opts);
      std::ostringstream csv;
      csv << "experiment,params,value,stderr\n";
      for (std::size_t j = 0; j < r.checkpoints.size(); ++j)
        csv << "limsup-median,t=" << gsq::format_g17(r.checkpoints[j]) << ","
            << gsq::format_g17(r.median_running_stat[j]) << ",0\n";
      gsq::atomic_write(out_dir + "/limsup.csv", csv.str());
      std::cout << "growth constant " << r.constant << " (normalizer exponent "
                << r.exponent << ")\n"
                << "median running statistic at horizon: " << r.median_running_stat.back()
                << "\n";
      if (emit == "plot-data") {
        std::vector<std::pair<double, double>> rows;
        for (std::size_t j = 0; j < r.checkpoints.size(); ++j)
          rows.emplace_back(r.checkpoints[j], r.median_running_stat[j]);
        write_plot_data(out_dir + "/limsup_trace.dat", rows);
      }
      std::cout << "wrote " << out_dir << "/limsup.csv\n";
      return 0;
    }

    if (app.got_subcommand(cmd_suite)) {
      std::string cfg = gsq::read_file(config_file);
      gsq::SuiteResult r = gsq::run_suite(cfg, suite_out, suite_workers, suite_seed);
      std::cout << "suite: " << r.jobs_completed << " completed, " << r.jobs_cached
                << " cached, " << r.jobs_failed << " failed (of " << r.jobs_total
                << ")\n"
                << "manifest: " << r.manifest_path << "\n";
      return r.jobs_failed == 0 ? 0 : 1;
    }
  } catch (const gsq::ModelValidationError& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "{\"error\": \"" << ex.what() << "\"}\n";
    return 1;
  }
  return 0;
}

#include "qkr/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "qkr/bloch_state.hpp"
#include "qkr/classical_map.hpp"
#include "qkr/fit.hpp"
#include "qkr/floquet.hpp"
#include "qkr/hqr.hpp"
#include "qkr/io.hpp"
#include "qkr/qm_average.hpp"
#include "qkr/sqr.hpp"

namespace qkr::cli {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::size_t grid_size(int n) {
  require(n > 0 && is_valid_grid_size(static_cast<std::size_t>(n)), "--n must be a power of two >= 32");
  return static_cast<std::size_t>(n);
}

double sin_moment(const BlochWaveState& s) {
  const auto x = grid_points(s.n_grid());
  const auto rho = density(s);
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += std::sin(x[j]) * rho[j];
  return acc * s.dx();
}

double series_range(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

/// Linear fit of y over t in [first, last], or NaN when the window is too short.
double window_slope(const std::vector<double>& y, int first, int last) {
  if (last - first < 1 || static_cast<std::size_t>(last) >= y.size()) return std::nan("");
  return linear_fit_window(y, first, last).slope;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Local maxima of a periodic density above `floor`.
int count_maxima(const std::vector<double>& rho, double floor) {
  const std::size_t n = rho.size();
  int count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = rho[(j + n - 1) % n], r = rho[(j + 1) % n];
    if (rho[j] > l && rho[j] >= r && rho[j] > floor) ++count;
  }
  return count;
}

}  // namespace

Command add_classical(CLI::App& root) {
  struct Opts {
    double K = kTwoPi, x0 = kPi / 2, p0 = 0.0;
    int steps = 100, ensemble = 0, jobs = 1;
    std::uint64_t seed = 7;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("classical", "Chirikov standard map: single orbit or ensemble energy");
  app->add_option("--K", o->K, "kick strength");
  app->add_option("--x0", o->x0, "initial position (orbit)");
  app->add_option("--p0", o->p0, "initial momentum (orbit)");
  app->add_option("--steps", o->steps, "number of map iterations");
  app->add_option("--ensemble", o->ensemble, "ensemble size (0 = single orbit)");
  app->add_option("--seed", o->seed, "ensemble RNG seed");
  app->add_option("--jobs", o->jobs, "worker threads");
  return {app, [o](RunContext& ctx) {
            require(o->steps >= 0, "--steps must be >= 0");
            require(std::isfinite(o->K) && std::isfinite(o->x0) && std::isfinite(o->p0), "non-finite input");
            json summary;
            if (o->ensemble > 0) {
              auto s = ensemble_energy_series(o->ensemble, o->K, o->steps, o->seed, o->jobs);
              io::Table table{{"t", "e_mean"}, {}};
              for (std::size_t t = 0; t < s.size(); ++t) table.add_row({double(s.times[t]), s.e_mean[t]});
              io::write_csv(ctx.out_dir / "classical_ensemble.csv", table);
              summary["e_final"] = s.e_mean.back();
              summary["slope"] = number_or_null(window_slope(s.e_mean, 1, o->steps));
            } else {
              auto orbit = standard_map_orbit({o->x0, o->p0}, o->K, o->steps);
              io::Table table{{"t", "X", "P"}, {}};
              for (std::size_t t = 0; t < orbit.size(); ++t) table.add_row({double(t), orbit[t].X, orbit[t].P});
              io::write_csv(ctx.out_dir / "classical_orbit.csv", table);
              summary["x_final"] = orbit.back().X;
              summary["p_final"] = orbit.back().P;
            }
            return summary;
          }};
}

Command add_talbot(CLI::App& root) {
  struct Opts {
    double hbar = 4.0 * kPi, beta = 0.0, x0 = kPi / 2, sigma = 0.1;
    int n = 1024;
    std::vector<double> times{0.0, 0.115, 0.25, 1.0};
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("talbot", "Free evolution of a localized packet over fractions of a period");
  app->add_option("--hbar", o->hbar, "scaled Planck constant");
  app->add_option("--beta", o->beta, "quasimomentum");
  app->add_option("--x0", o->x0, "packet centre");
  app->add_option("--sigma", o->sigma, "packet width");
  app->add_option("--n", o->n, "grid points");
  app->add_option("--times", o->times, "free-flight durations tau in [0, 1]")->delimiter(',');
  return {app, [o](RunContext& ctx) {
            const auto n = grid_size(o->n);
            require(!o->times.empty(), "--times must not be empty");
            const KickedRotorParams params(0.0, o->hbar);
            const auto psi0 = make_gaussian_packet(o->x0, o->sigma, o->beta, n);
            const auto rho0 = density(psi0);
            const double peak0 = *std::max_element(rho0.begin(), rho0.end());

            io::Table table{{"tau", "linf_error", "max_density", "min_density", "peak_over_uniform", "n_maxima"}, {}};
            io::Table profiles{{"X"}, {}};
            std::vector<std::vector<double>> rhos;
            for (std::size_t i = 0; i < o->times.size(); ++i) {
              const double tau = o->times[i];
              require(tau >= 0.0 && tau <= 1.0, "--times entries must lie in [0, 1]");
              const auto psi = tau == 0.0 ? psi0 : free_evolve(psi0, params, tau);
              const auto rho = density(psi);
              double linf = 0.0;
              for (std::size_t j = 0; j < n; ++j) linf = std::max(linf, std::abs(rho[j] - rho0[j]));
              auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
              table.add_row({tau, linf, *hi, *lo, kTwoPi * *hi, double(count_maxima(rho, 0.1 * peak0))});
              io::write_json(ctx.out_dir / ("talbot_" + std::to_string(i) + ".json"),
                             json{{"tau", tau}, {"state", io::snapshot_json(psi)}});
              profiles.columns.push_back("rho_" + std::to_string(i));
              rhos.push_back(rho);
            }
            const auto x = grid_points(n);
            for (std::size_t j = 0; j < n; ++j) {
              std::vector<double> row{x[j]};
              for (const auto& r : rhos) row.push_back(r[j]);
              profiles.add_row(std::move(row));
            }
            io::write_csv(ctx.out_dir / "talbot.csv", table);
            io::write_csv(ctx.out_dir / "talbot_density.csv", profiles);
            json summary;
            summary["linf_error_last"] = table.rows.back()[1];
            summary["n_snapshots"] = o->times.size();
            return summary;
          }};
}

Command add_sqr(CLI::App& root) {
  struct Opts {
    int ell = 1, n = 1024, t_max = 50;
    double hbar = 0.0, beta = 0.0, K = 1.0, x0 = kPi / 2, sigma = 0.1;
    bool check = false;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("sqr", "Simple resonance hbar = 2 pi ell: closed-form series and classification");
  auto* ell = app->add_option("--ell", o->ell, "resonance order");
  app->add_option("--hbar", o->hbar, "scaled Planck constant (must equal 2 pi ell)")->excludes(ell);
  app->add_option("--beta", o->beta, "quasimomentum");
  app->add_option("--K", o->K, "kick strength");
  app->add_option("--x0", o->x0, "packet centre");
  app->add_option("--sigma", o->sigma, "packet width");
  app->add_option("--n", o->n, "grid points");
  app->add_option("--t-max", o->t_max, "number of kicks");
  app->add_flag("--check", o->check, "also run the propagator and report the density error");
  return {app, [o, app](RunContext& ctx) {
            const auto n = grid_size(o->n);
            require(o->t_max >= 0, "--t-max must be >= 0");
            const int order = app->get_option("--hbar")->count() > 0 ? sqr_order(o->hbar) : o->ell;
            require(order >= 1, "--ell must be >= 1");
            const double hbar = kTwoPi * order;
            const KickedRotorParams params(o->K, hbar);
            const auto psi0 = make_gaussian_packet(o->x0, o->sigma, o->beta, n);
            const auto regime = classify_sqr(order, psi0.beta());
            const auto series = sqr_series(sqr_moments(psi0, hbar), o->K, regime.v, o->t_max);
            const double D = o->K * sin_moment(psi0);
            io::write_csv(ctx.out_dir / "sqr_series.csv", io::series_table(series));
            auto cls = io::classification_json(regime, D);
            io::write_json(ctx.out_dir / "classification.json", cls);

            json summary;
            summary["class"] = cls["class"];
            summary["q"] = cls["q"];
            summary["v"] = regime.v;
            summary["D"] = D;
            summary["p_final"] = series.p_mean.back();
            summary["e_final"] = series.e_mean.back();
            if (o->check) {
              FloquetPropagator prop(params, psi0.beta(), n);
              auto numeric = psi0;
              io::Table table{{"t", "max_density_error", "p_closed", "p_propagator"}, {}};
              double worst = 0.0;
              for (int t = 0; t <= o->t_max; ++t) {
                if (t > 0) prop.evolve(numeric, 1, false, &ctx.diag);
                const auto closed = closed_form_state(psi0, params, t).state;
                double err = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                  err = std::max(err, std::abs(std::norm(closed.samples()[j]) - std::norm(numeric.samples()[j])));
                }
                worst = std::max(worst, err);
                table.add_row({double(t), err, series.p_mean[std::size_t(t)], mean_momentum_beta(numeric, hbar)});
              }
              io::write_csv(ctx.out_dir / "sqr_check.csv", table);
              summary["max_density_error"] = worst;
            }
            return summary;
          }};
}

Command add_hqr(CLI::App& root) {
  struct Opts {
    std::string mode = "series";
    double beta = 0.0, kappa = 1.0, x0 = kPi / 4, sigma = 0.12, kappa_max = 10.0;
    int n = 1024, t_max = 200, points = 101;
    std::vector<double> kappas{0.5, 1.0, 2.0};
    std::vector<double> x0s{kPi / 4, kPi / 8};
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("hqr", "hbar = pi resonance: two-level model, momentum series and slope tables");
  app->add_option("--mode", o->mode, "series | slope-vs-x0 | slope-vs-kappa")
      ->check(CLI::IsMember({"series", "slope-vs-x0", "slope-vs-kappa"}));
  app->add_option("--beta", o->beta, "quasimomentum (series)");
  app->add_option("--kappa", o->kappa, "kick phase amplitude K / hbar (series)");
  app->add_option("--x0", o->x0, "packet centre (series)");
  app->add_option("--sigma", o->sigma, "packet width (series)");
  app->add_option("--n", o->n, "grid points (series)");
  app->add_option("--t-max", o->t_max, "number of kicks (series)");
  app->add_option("--points", o->points, "table resolution");
  app->add_option("--kappas", o->kappas, "kappa values (slope-vs-x0)")->delimiter(',');
  app->add_option("--x0s", o->x0s, "X0 values (slope-vs-kappa)")->delimiter(',');
  app->add_option("--kappa-max", o->kappa_max, "largest kappa (slope-vs-kappa)");
  return {app, [o](RunContext& ctx) {
            json summary;
            if (o->mode == "slope-vs-x0" || o->mode == "slope-vs-kappa") {
              require(o->points >= 2, "--points must be >= 2");
              io::Table table{{"X0", "kappa", "K", "D", "D_over_K"}, {}};
              auto add = [&](double x0, double kappa) {
                const double K = kPi * kappa;
                const double D = hqr_slope(x0, K, kappa);
                table.add_row({x0, kappa, K, D, K == 0.0 ? 0.0 : D / K});
              };
              const std::string file = o->mode == "slope-vs-x0" ? "hqr_slope_vs_x0.csv" : "hqr_slope_vs_kappa.csv";
              if (o->mode == "slope-vs-x0") {
                for (double kappa : o->kappas) {
                  for (int i = 0; i < o->points; ++i) add(kPi * i / (o->points - 1), kappa);
                }
              } else {
                require(o->kappa_max > 0.0, "--kappa-max must be positive");
                for (double x0 : o->x0s) {
                  for (int i = 0; i < o->points; ++i) add(x0, o->kappa_max * i / (o->points - 1));
                }
              }
              io::write_csv(ctx.out_dir / file, table);
              summary["rows"] = table.rows.size();
              return summary;
            }

            const auto n = grid_size(o->n);
            require(o->t_max >= 0, "--t-max must be >= 0");
            const auto regime = make_hqr_regime(o->beta, o->kappa);
            const KickedRotorParams params(kPi * o->kappa, kPi);
            const auto psi0 = make_gaussian_packet(o->x0, o->sigma, o->beta, n);
            const double p0 = mean_momentum_beta(psi0, kPi);
            const auto point = momentum_series_hqr(o->x0, p0, regime, o->t_max);

            FloquetPropagator prop(params, psi0.beta(), n);
            auto numeric = psi0;
            auto amps = TwoLevelAmplitudes::initial(n);
            Diagnostics overlap;
            io::Table table{{"t", "p_two_level", "p_propagator", "fidelity"}, {}};
            std::vector<double> p_num;
            double min_fid = 1.0;
            for (int t = 0; t <= o->t_max; ++t) {
              if (t > 0) {
                prop.evolve(numeric, 1, false, &ctx.diag);
                amps = step_amplitudes(amps, regime);
              }
              const double fid = fidelity(reconstruct_state(amps, psi0, regime, t == 0 ? &overlap : nullptr), numeric);
              min_fid = std::min(min_fid, fid);
              p_num.push_back(mean_momentum_beta(numeric, kPi));
              table.add_row({double(t), point.p_mean[std::size_t(t)], p_num.back(), fid});
            }
            for (auto& w : overlap.warnings) ctx.diag.warn(std::move(w));
            io::write_csv(ctx.out_dir / "hqr_series.csv", table);

            summary["min_fidelity"] = min_fid;
            summary["p_range"] = series_range(p_num);
            summary["slope_fit"] = number_or_null(window_slope(p_num, o->t_max / 4, o->t_max));
            summary["period"] = transfer_period(regime);
            if (summary["period"].get<int>() > 0) summary["slope_predicted"] = composite_slope(o->x0, regime);
            return summary;
          }};
}

Command add_average(CLI::App& root) {
  struct Opts {
    int ell = 2, n = 512, n_beta = 512, t_max = 100, jobs = 1;
    double hbar = 0.0, K = 2.0, x0 = kPi / 2, sigma = 0.1;
    std::string mode = "closed";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("average", "Quasimomentum-averaged momentum and energy");
  auto* ell = app->add_option("--ell", o->ell, "resonance order, hbar = 2 pi ell");
  app->add_option("--hbar", o->hbar, "scaled Planck constant (propagator mode allows any value)")->excludes(ell);
  app->add_option("--K", o->K, "kick strength");
  app->add_option("--x0", o->x0, "envelope centre");
  app->add_option("--sigma", o->sigma, "envelope width");
  app->add_option("--n", o->n, "grid points");
  app->add_option("--n-beta", o->n_beta, "midpoint quasimomentum nodes");
  app->add_option("--t-max", o->t_max, "number of kicks");
  app->add_option("--mode", o->mode, "closed | propagator")->check(CLI::IsMember({"closed", "propagator"}));
  app->add_option("--jobs", o->jobs, "worker threads");
  return {app, [o, app](RunContext& ctx) {
            const auto n = grid_size(o->n);
            require(o->t_max >= 0, "--t-max must be >= 0");
            const bool hbar_given = app->get_option("--hbar")->count() > 0;
            require(hbar_given || o->ell >= 1, "--ell must be >= 1");
            const double hbar = hbar_given ? o->hbar : kTwoPi * o->ell;
            const auto mode = o->mode == "closed" ? AverageMode::ClosedForm : AverageMode::Propagator;
            const KickedRotorParams params(o->K, hbar);
            const auto avg = average_over_beta(EnvelopeSpec{o->x0, o->sigma, n}, params, o->n_beta, o->t_max, mode, o->jobs);
            io::write_csv(ctx.out_dir / "average.csv", io::series_table(avg, "_avg"));

            double drift = 0.0;
            for (double p : avg.p_mean) drift = std::max(drift, std::abs(p - avg.p_mean[0]));
            json summary;
            summary["max_p_drift"] = drift;
            summary["slope_fit"] = number_or_null(window_slope(avg.e_mean, 1, o->t_max));
            if (std::abs(std::remainder(hbar, kTwoPi)) < 1e-12 * hbar) summary["slope_analytic"] = o->K * o->K / 4.0;
            return summary;
          }};
}

Command add_evolve(CLI::App& root) {
  struct Opts {
    double hbar = 4.0 * kPi, K = 2.0, beta = 0.0, x0 = kPi / 2, sigma = 0.1;
    int n = 1024, t_max = 100;
    std::string packet = "gaussian", snapshot = "none";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("evolve", "Split-operator Floquet evolution of a single Bloch wave");
  app->add_option("--hbar", o->hbar, "scaled Planck constant");
  app->add_option("--K", o->K, "kick strength");
  app->add_option("--beta", o->beta, "quasimomentum");
  app->add_option("--x0", o->x0, "packet centre");
  app->add_option("--sigma", o->sigma, "packet width");
  app->add_option("--n", o->n, "grid points");
  app->add_option("--t-max", o->t_max, "number of kicks");
  app->add_option("--packet", o->packet, "gaussian | cell")->check(CLI::IsMember({"gaussian", "cell"}));
  app->add_option("--snapshot", o->snapshot, "final state: none | json | raw")
      ->check(CLI::IsMember({"none", "json", "raw"}));
  return {app, [o](RunContext& ctx) {
            const auto n = grid_size(o->n);
            require(o->t_max >= 0, "--t-max must be >= 0");
            const KickedRotorParams params(o->K, o->hbar);
            auto state = o->packet == "cell" ? make_cell_localized_packet(o->x0, o->sigma, o->beta, n)
                                             : make_gaussian_packet(o->x0, o->sigma, o->beta, n);
            const auto series = evolve(state, params, o->t_max, true, &ctx.diag);
            io::write_csv(ctx.out_dir / "series.csv", io::series_table(series));
            if (o->snapshot == "json") io::write_json(ctx.out_dir / "final_state.json", io::snapshot_json(state));
            if (o->snapshot == "raw") io::write_raw_snapshot(ctx.out_dir / "final_state.bin", state);
            json summary;
            summary["p_final"] = series.p_mean.back();
            summary["e_final"] = series.e_mean.back();
            summary["p_slope_fit"] = number_or_null(window_slope(series.p_mean, 1, o->t_max));
            double worst = 0.0;
            for (double w : series.norm) worst = std::max(worst, std::abs(w - 1.0));
            summary["max_norm_error"] = worst;
            return summary;
          }};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, json* summary_out) {
  CLI::App app{"Quantum kicked rotor at resonance: propagator, closed forms and figure data", "qkr"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "output directory")->envname("QKR_OUTPUT_DIR");

  std::vector<Command> commands{add_classical(app), add_talbot(app),  add_sqr(app),
                                add_hqr(app),       add_average(app), add_evolve(app)};
  commands.push_back(add_sweep(app));
  std::vector<std::string> config_paths(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    commands[i].app->add_option("--config", config_paths[i], "JSON file of option values; flags take precedence")
        ->check(CLI::ExistingFile);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      CLI::App& sub = *commands[i].app;
      if (!sub.parsed()) continue;
      if (!config_paths[i].empty()) apply_json_config(sub, config_paths[i]);
      RunContext ctx{out_dir, out, err, {}};
      std::filesystem::create_directories(ctx.out_dir);
      json summary = commands[i].run(ctx);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (const auto& w : ctx.diag.warnings) err << "warning: " << w << '\n';

      json params = option_values(sub);
      json manifest{{"command", sub.get_name()},
                    {"version", kVersion},
                    {"params", params},
                    {"seed", params.contains("seed") ? params["seed"] : json(nullptr)},
                    {"summary", summary},
                    {"warnings", ctx.diag.warnings},
                    {"timings", {{"wall_seconds", seconds}}}};
      io::write_json(ctx.out_dir / "manifest.json", manifest);
      out << summary.dump() << '\n';
      if (summary_out != nullptr) *summary_out = std::move(summary);
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalGuardError& e) {
    err << "numerical guard: " << e.what() << '\n';
    return kExitNumericalGuard;
  }
  return kExitValidation;
}

}  // namespace qkr::cli

namespace qkr {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return cli::dispatch(args, out, err, nullptr);
}

}  // namespace qkr

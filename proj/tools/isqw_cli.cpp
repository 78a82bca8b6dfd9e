// Command-line front end: emits the observable and density series as CSV and
// runs the library's invariant checks.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-contract
// violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isqw/approx.hpp"
#include "isqw/dynamics.hpp"
#include "isqw/equivalence.hpp"
#include "isqw/specfun.hpp"
#include "isqw/states.hpp"
#include "isqw/well.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  double M = 1.0;
  double L = std::numbers::pi;
  double hbar = 1.0;
  std::string state_kind = "gcs";
  double n0 = 500.0;
  double sigma0 = 5.0;
  double phi0 = std::numbers::pi / 2.0;
  double z0 = 100.0;
  double t0 = 0.0;
  double dt = 1e-4;
  int time_count = 501;
  int space_count = 0;  // 0: pick from the state's bandwidth
  double tail_tol = isqw::kDefaultTailTol;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key-per-line config, nested by dotted keys: `well.L = 3.14`, `#` comments.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    kv[key] = val;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as number");
  }
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "well.M") cfg.M = to_double(k, v);
    else if (k == "well.L") cfg.L = to_double(k, v);
    else if (k == "well.hbar") cfg.hbar = to_double(k, v);
    else if (k == "state.kind") cfg.state_kind = v;
    else if (k == "state.n0") cfg.n0 = to_double(k, v);
    else if (k == "state.sigma0") cfg.sigma0 = to_double(k, v);
    else if (k == "state.phi0") cfg.phi0 = to_double(k, v);
    else if (k == "state.z0") cfg.z0 = to_double(k, v);
    else if (k == "time.t0") cfg.t0 = to_double(k, v);
    else if (k == "time.dt") cfg.dt = to_double(k, v);
    else if (k == "time.count") cfg.time_count = static_cast<int>(to_double(k, v));
    else if (k == "space.count") cfg.space_count = static_cast<int>(to_double(k, v));
    else if (k == "tail_tol") cfg.tail_tol = to_double(k, v);
    else throw ConfigError("unknown config key: " + k);
  }
}

isqw::StateSpec make_state(const RunConfig& cfg) {
  if (cfg.state_kind == "gcs") return isqw::GCS{cfg.n0, cfg.sigma0, cfg.phi0};
  if (cfg.state_kind == "gecs") return isqw::GeCS{cfg.z0, cfg.phi0};
  throw ConfigError("state.kind must be 'gcs' or 'gecs'");
}

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutStream(const std::string& path) {
    if (path != "-") {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int grid_count_for(const RunConfig& cfg, const isqw::CoefficientVector& v) {
  if (cfg.space_count > 0) return cfg.space_count;
  // resolve n_max with >= 8 points per half-wavelength
  return static_cast<int>(std::max<long>(4096, 8 * (v.n_max() + 1) + 1));
}

int cmd_observables(const RunConfig& cfg, const std::string& out_path, int threads) {
  isqw::WellParams well(cfg.M, cfg.L, cfg.hbar);
  auto v = isqw::build_state(make_state(cfg), cfg.tail_tol);
  isqw::TimeGrid tg(cfg.t0, cfg.dt, cfg.time_count);
  auto s = isqw::observables(v, well, tg, threads);
  OutStream out(out_path);
  out.get() << "# version=" << kVersion << "\n";
  out.get() << "t,mean_x,mean_p,delta_x,delta_p,heisenberg\n";
  for (int i = 0; i < tg.count; ++i) {
    out.get() << fmt(s.times[i]) << ',' << fmt(s.mean_x[i]) << ',' << fmt(s.mean_p[i]) << ','
              << fmt(s.delta_x[i]) << ',' << fmt(s.delta_p[i]) << ',' << fmt(s.heisenberg[i])
              << "\n";
  }
  return 0;
}

int cmd_density(const RunConfig& cfg, double t, const std::string& out_path, int threads) {
  isqw::WellParams well(cfg.M, cfg.L, cfg.hbar);
  if (cfg.state_kind != "gcs")
    throw ConfigError("density: closed-form comparison requires state.kind=gcs");
  isqw::GCS spec{cfg.n0, cfg.sigma0, cfg.phi0};
  auto v = isqw::build_gcs(spec, cfg.tail_tol);
  isqw::SpaceGrid grid(well, grid_count_for(cfg, v));

  auto exact = isqw::density(v, grid, t, threads);
  auto pk = isqw::packet(well, spec, t);
  auto approx = isqw::approx_density(pk, grid);
  int j_max = static_cast<int>(std::ceil(pk.sigma * std::sqrt(8.0 * std::log(1e14)))) + 1;
  auto p0 = isqw::fourier_P0(spec, grid, t, j_max);
  auto pl = isqw::fourier_Pl(spec, grid, t);
  auto pr = isqw::fourier_Pr(spec, grid, t);

  double l1 = 0.0, linf = 0.0;
  double h = grid.spacing();
  for (int i = 0; i < grid.count; ++i) {
    double d = std::abs(exact[i] - approx[i]);
    double wq = (i == 0 || i == grid.count - 1) ? 0.5 : 1.0;  // trapezoid
    l1 += wq * d * h;
    linf = std::max(linf, d);
  }
  auto validity = isqw::check_validity(spec, well, t);

  OutStream out(out_path);
  out.get() << "# version=" << kVersion << "\n";
  out.get() << "# L1=" << fmt(l1) << ",Linf=" << fmt(linf)
            << ",validity=" << (validity.all() ? "pass" : "fail") << "\n";
  out.get() << "x,exact,approx_packet,fourier_P0,Pl,Pr,abs_err\n";
  for (int i = 0; i < grid.count; ++i) {
    out.get() << fmt(grid.x(i)) << ',' << fmt(exact[i]) << ',' << fmt(approx[i]) << ','
              << fmt(p0.values[i]) << ',' << fmt(pl.values[i]) << ',' << fmt(pr[i]) << ','
              << fmt(std::abs(exact[i] - approx[i])) << "\n";
  }
  return 0;
}

int cmd_wavefunction(const RunConfig& cfg, double t, const std::string& out_path, int threads) {
  isqw::WellParams well(cfg.M, cfg.L, cfg.hbar);
  if (cfg.state_kind != "gcs")
    throw ConfigError("wavefunction: closed-form comparison requires state.kind=gcs");
  isqw::GCS spec{cfg.n0, cfg.sigma0, cfg.phi0};
  auto v = isqw::build_gcs(spec, cfg.tail_tol);
  isqw::SpaceGrid grid(well, grid_count_for(cfg, v));

  auto exact = isqw::wavefunction(v, grid, t, threads);
  auto pk = isqw::packet(well, spec, t);
  auto approx = isqw::approx_wavefunction(pk, grid);

  // Align the approximation's global phase to the exact state, then take
  // the L2 distance by trapezoid.
  isqw::KahanSum<double> ip_re, ip_im;
  double h = grid.spacing();
  for (int i = 0; i < grid.count; ++i) {
    double wq = (i == 0 || i == grid.count - 1) ? 0.5 : 1.0;
    auto term = std::conj(exact[i]) * approx[i] * wq * h;
    ip_re.add(term.real());
    ip_im.add(term.imag());
  }
  isqw::complex ip{ip_re.value(), ip_im.value()};
  isqw::complex phase = std::abs(ip) > 0.0 ? std::conj(ip) / std::abs(ip) : isqw::complex{1.0, 0.0};
  double l2sq = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    double wq = (i == 0 || i == grid.count - 1) ? 0.5 : 1.0;
    l2sq += wq * std::norm(exact[i] - approx[i] * phase) * h;
  }

  OutStream out(out_path);
  out.get() << "# version=" << kVersion << "\n";
  out.get() << "# L2=" << fmt(std::sqrt(l2sq)) << "\n";
  out.get() << "x,re,im,abs2,approx_re,approx_im\n";
  for (int i = 0; i < grid.count; ++i) {
    auto a = approx[i] * phase;
    out.get() << fmt(grid.x(i)) << ',' << fmt(exact[i].real()) << ',' << fmt(exact[i].imag())
              << ',' << fmt(std::norm(exact[i])) << ',' << fmt(a.real()) << ',' << fmt(a.imag())
              << "\n";
  }
  return 0;
}

int cmd_equivalence(const RunConfig& cfg, const std::vector<double>& z0_list,
                    const std::string& out_path) {
  OutStream out(out_path);
  out.get() << "# version=" << kVersion << "\n";
  out.get() << "z0,fidelity,coeff_L1,poisson_gap,NG_exact,NG_asymptotic,NG_relerr,warn\n";
  for (double z0 : z0_list) {
    auto rep = isqw::equivalence_report(z0, cfg.phi0);
    double gap = isqw::poisson_gaussian_gap(z0);
    auto ng = isqw::euler_maclaurin_N(z0);
    const char* warn = (z0 < 5.0) ? "warn" : "";
    out.get() << fmt(z0) << ',' << fmt(rep.fidelity) << ',' << fmt(rep.coeff_L1) << ','
              << fmt(gap) << ',' << fmt(ng.exact) << ',' << fmt(ng.asymptotic) << ','
              << fmt(ng.relative_error) << ',' << warn << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  isqw::WellParams well(cfg.M, cfg.L, cfg.hbar);
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, double value) {
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << name << " (" << fmt(value) << ")\n";
    ok = ok && pass;
  };

  // su(1,1) commutators on the interior block
  auto su = isqw::check_su11(50);
  report("su11 [a,N]=a residual <= 1e-12", su.dev_a_number <= 1e-12, su.dev_a_number);
  report("su11 [a+,N]=-a+ residual <= 1e-12", su.dev_adag_number <= 1e-12, su.dev_adag_number);
  report("su11 [a,a+]=2(N+3/2) residual <= 1e-12", su.dev_a_adag <= 1e-12, su.dev_a_adag);

  // a+a = diag(n(n+2)) up to rounding in sqrt(e) * sqrt(e)
  auto lm = isqw::ladder_matrices(50);
  auto prod = lm.a_dagger * lm.a;
  double dev = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      double want = (i == j) ? isqw::Spectrum::shifted(i) : 0.0;
      dev = std::max(dev,
                     std::abs(prod(i, j) - isqw::complex{want, 0.0}) / std::max(1.0, want));
    }
  report("a+a = diag(n(n+2)) at machine precision", dev <= 1e-11, dev);

  // closed-form matrix elements vs quadrature
  double max_me = 0.0;
  for (long n = 0; n <= 25; ++n) {
    for (long m = 0; m <= 25; ++m) {
      auto quad = [&](auto f) { return isqw::simpson(f, 0.0, well.length, 4000); };
      double xq = quad([&](double x) {
        return x * isqw::eigenfunction(well, n, x) * isqw::eigenfunction(well, m, x);
      });
      double x2q = quad([&](double x) {
        return x * x * isqw::eigenfunction(well, n, x) * isqw::eigenfunction(well, m, x);
      });
      max_me = std::max(max_me, std::abs(xq - isqw::x_matrix_element(well, n, m)) / well.length);
      max_me = std::max(max_me, std::abs(x2q - isqw::x2_matrix_element(well, n, m)) /
                                    (well.length * well.length));
    }
  }
  report("x, x^2 elements vs quadrature <= 1e-9", max_me <= 1e-9, max_me);

  // norm conservation under evolve
  auto v = isqw::build_gcs(isqw::GCS{50.0, 5.0, std::numbers::pi / 2.0});
  double drift = 0.0;
  for (double t : {0.0, 0.004, 0.1, 3.0})
    drift = std::max(drift, std::abs(isqw::evolve(v, well, t).norm_sq() - 1.0));
  report("evolve norm drift <= 1e-14", drift <= 1e-14, drift);

  // position realization of the annihilation operator
  double res_coarse = isqw::position_realization_check(well, 8, 8 * 20 * 8);
  double res_fine = isqw::position_realization_check(well, 8, 2 * 8 * 20 * 8);
  report("position realization residual shrinks under refinement", res_fine < res_coarse,
         res_fine);

  if (!ok) std::cout << "verification FAILED\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent states of the 1D infinite square well"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  int threads = 1;
  double t = 0.0;
  std::vector<double> z0_list;

  app.add_option("--config", config_path, "key=value config file (dotted keys)");
  app.add_option("--out", out_path, "output path or - for stdout");
  app.add_option("--threads", threads, "worker threads (output is thread-count invariant)");

  auto* obs = app.add_subcommand("observables", "time series of <x>, <p>, Delta");
  auto* den = app.add_subcommand("density", "exact vs approximate probability density");
  den->add_option("--t", t, "evaluation time");
  auto* wav = app.add_subcommand("wavefunction", "exact vs approximate wavefunction");
  wav->add_option("--t", t, "evaluation time");
  auto* eqv = app.add_subcommand("equivalence", "GeCS vs GCS equivalence sweep");
  eqv->add_option("--z0", z0_list, "z0 values for the sweep");
  auto* ver = app.add_subcommand("verify", "run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config(cfg, parse_config_file(config_path));

    if (obs->parsed()) return cmd_observables(cfg, out_path, threads);
    if (den->parsed()) return cmd_density(cfg, t, out_path, threads);
    if (wav->parsed()) return cmd_wavefunction(cfg, t, out_path, threads);
    if (eqv->parsed()) {
      if (z0_list.empty()) z0_list = {25.0, 100.0, 400.0};
      return cmd_equivalence(cfg, z0_list, out_path);
    }
    if (ver->parsed()) return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const isqw::ContractViolation& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

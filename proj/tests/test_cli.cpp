#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ISQW_CLI_PATH;

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "isqw_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int seq = 0;
  fs::path out = scratch() / ("out." + std::to_string(++seq));
  fs::path err = scratch() / ("err." + std::to_string(seq));
  std::string cmd = kCli + " " + args + " > " + out.string() + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream ss(csv);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<double> split_row(const std::string& row) {
  std::vector<double> vals;
  std::istringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      vals.push_back(std::stod(cell));
    } catch (const std::exception&) {
      vals.push_back(std::nan(""));
    }
  }
  return vals;
}

const std::string kSmallConfig =
    "# small, fast configuration\n"
    "state.kind = gcs\n"
    "state.n0 = 20\n"
    "state.sigma0 = 3\n"
    "state.phi0 = 0.9\n"
    "time.t0 = 0\n"
    "time.dt = 0.001\n"
    "time.count = 5\n";

const std::string kPacketConfig =
    "state.kind = gcs\n"
    "state.n0 = 200\n"
    "state.sigma0 = 5\n"
    "state.phi0 = 1.5707963267948966\n";

}  // namespace

TEST_CASE("help exits zero") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("observables --help").exit_code == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);                    // missing subcommand
  CHECK(run("observables --bogus").exit_code == 2); // unknown flag
  CHECK(run("frobnicate").exit_code == 2);          // unknown subcommand
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run("--config /nonexistent/path observables").exit_code == 2);

  auto bad_key = write_config("bad_key.cfg", "state.unknown = 3\n");
  CHECK(run("--config " + bad_key.string() + " observables").exit_code == 2);

  auto bad_val = write_config("bad_val.cfg", "state.n0 = banana\n");
  CHECK(run("--config " + bad_val.string() + " observables").exit_code == 2);

  auto no_eq = write_config("no_eq.cfg", "just some text\n");
  CHECK(run("--config " + no_eq.string() + " observables").exit_code == 2);

  auto empty_grid = write_config("empty_grid.cfg", kSmallConfig + "time.count = 0\n");
  CHECK(run("--config " + empty_grid.string() + " observables").exit_code == 2);

  auto bad_kind = write_config("bad_kind.cfg", "state.kind = squeezed\n");
  CHECK(run("--config " + bad_kind.string() + " observables").exit_code == 2);

  // closed-form comparisons are defined for the Gaussian state only
  auto gecs = write_config("gecs.cfg", "state.kind = gecs\nstate.z0 = 50\n");
  CHECK(run("--config " + gecs.string() + " density").exit_code == 2);
}

TEST_CASE("observables CSV shape and content") {
  auto cfg = write_config("small.cfg", kSmallConfig);
  auto r = run("--config " + cfg.string() + " observables");
  REQUIRE(r.exit_code == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 6);  // header + 5 samples
  CHECK(rows[0] == "t,mean_x,mean_p,delta_x,delta_p,heisenberg");
  for (size_t i = 1; i < rows.size(); ++i) {
    auto vals = split_row(rows[i]);
    REQUIRE(vals.size() == 6);
    CHECK(vals[0] == Catch::Approx(0.001 * (i - 1)).margin(1e-12));
    CHECK(vals[1] > 0.0);                         // mean_x inside the well
    CHECK(vals[1] < 3.15);
    CHECK(vals[5] >= 0.5);                        // uncertainty floor, hbar = 1
  }
}

TEST_CASE("observables output is byte-identical across thread counts") {
  auto cfg = write_config("det.cfg", kSmallConfig);
  fs::path f1 = scratch() / "obs_t1.csv";
  fs::path f8 = scratch() / "obs_t8.csv";
  REQUIRE(run("--config " + cfg.string() + " --threads 1 --out " + f1.string() +
              " observables").exit_code == 0);
  REQUIRE(run("--config " + cfg.string() + " --threads 8 --out " + f8.string() +
              " observables").exit_code == 0);
  std::string a = slurp(f1), b = slurp(f8);
  REQUIRE(!a.empty());
  CHECK(a == b);
}

TEST_CASE("density output is byte-identical across thread counts") {
  auto cfg = write_config("det_den.cfg", kPacketConfig);
  fs::path f1 = scratch() / "den_t1.csv";
  fs::path f8 = scratch() / "den_t8.csv";
  REQUIRE(run("--config " + cfg.string() + " --threads 1 --out " + f1.string() +
              " density --t 0.001").exit_code == 0);
  REQUIRE(run("--config " + cfg.string() + " --threads 8 --out " + f8.string() +
              " density --t 0.001").exit_code == 0);
  std::string a = slurp(f1), b = slurp(f8);
  REQUIRE(!a.empty());
  CHECK(a == b);
}

TEST_CASE("density summary reports a small L1 and passing validity") {
  auto cfg = write_config("packet.cfg", kPacketConfig);
  auto r = run("--config " + cfg.string() + " density --t 0");
  REQUIRE(r.exit_code == 0);

  auto l1pos = r.out.find("# L1=");
  REQUIRE(l1pos != std::string::npos);
  double l1 = std::stod(r.out.substr(l1pos + 5));
  CHECK(l1 < 1e-3);
  CHECK(r.out.find("validity=pass") != std::string::npos);

  auto rows = data_lines(r.out);
  REQUIRE(rows.size() > 4000);
  CHECK(rows[0] == "x,exact,approx_packet,fourier_P0,Pl,Pr,abs_err");

  // density vanishes at the walls and peaks near X = L/2
  auto first = split_row(rows[1]);
  auto last = split_row(rows.back());
  CHECK(first[1] < 1e-12);
  CHECK(last[1] < 1e-12);
  double best_x = 0.0, best = -1.0;
  for (size_t i = 1; i < rows.size(); ++i) {
    auto v = split_row(rows[i]);
    if (v[1] > best) {
      best = v[1];
      best_x = v[0];
    }
  }
  CHECK(best_x == Catch::Approx(3.14159265 / 2.0).margin(0.02));
}

TEST_CASE("values are printed with round-trip precision") {
  auto cfg = write_config("prec.cfg", kSmallConfig);
  auto r = run("--config " + cfg.string() + " observables");
  REQUIRE(r.exit_code == 0);
  auto rows = data_lines(r.out);
  // at least one mean_x cell needs 17 significant digits
  bool found_long = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    std::istringstream ss(rows[i]);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    int digits = 0;
    for (char c : cell)
      if (c >= '0' && c <= '9') ++digits;
    if (digits >= 16) found_long = true;
  }
  CHECK(found_long);
}

TEST_CASE("wavefunction summary reports a small L2 distance") {
  auto cfg = write_config("wav.cfg", kPacketConfig);
  auto r = run("--config " + cfg.string() + " wavefunction --t 0.001");
  REQUIRE(r.exit_code == 0);
  auto pos = r.out.find("# L2=");
  REQUIRE(pos != std::string::npos);
  double l2 = std::stod(r.out.substr(pos + 5));
  CHECK(l2 < 0.1);
  auto rows = data_lines(r.out);
  CHECK(rows[0] == "x,re,im,abs2,approx_re,approx_im");

  // |Psi|^2 column is consistent with re, im
  auto v = split_row(rows[rows.size() / 2]);
  REQUIRE(v.size() == 6);
  CHECK(v[3] == Catch::Approx(v[1] * v[1] + v[2] * v[2]).margin(1e-12));
}

TEST_CASE("equivalence sweep") {
  auto r = run("equivalence");
  REQUIRE(r.exit_code == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 4);  // header + default sweep 25, 100, 400
  CHECK(rows[0] == "z0,fidelity,coeff_L1,poisson_gap,NG_exact,NG_asymptotic,NG_relerr,warn");
  auto a = split_row(rows[1]);
  auto b = split_row(rows[2]);
  auto c = split_row(rows[3]);
  CHECK(a[0] == 25.0);
  CHECK(c[0] == 400.0);
  CHECK(b[1] > a[1]);  // fidelity improves with z0
  CHECK(c[1] > b[1]);
  CHECK(b[2] < a[2]);  // coefficient L1 shrinks
  CHECK(c[3] < b[3]);  // Poisson-Gaussian gap shrinks
  // none of the default z0 values triggers the small-z0 warning
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].find(",warn") == std::string::npos);
}

TEST_CASE("equivalence flags small z0") {
  auto r = run("equivalence --z0 1.5 --z0 100");
  REQUIRE(r.exit_code == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].find(",warn") != std::string::npos);
  CHECK(rows[2].find(",warn") == std::string::npos);
}

TEST_CASE("output goes to a file with --out") {
  auto cfg = write_config("outfile.cfg", kSmallConfig);
  fs::path f = scratch() / "obs_file.csv";
  auto r = run("--config " + cfg.string() + " --out " + f.string() + " observables");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(!slurp(f).empty());
  CHECK(run("--out /nonexistent/dir/f.csv observables").exit_code == 2);
}

TEST_CASE("verify runs the invariant suite") {
  auto r = run("verify");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(r.out.find("[ok]") != std::string::npos);
}

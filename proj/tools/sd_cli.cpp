// sd: command-line front end for the sd library.
//
// Exit codes: 0 success, 2 configuration or spec error, 3 numeric error
// (pole, divergence, degenerate input), 1 anything else.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sd/io.hpp"
#include "sd/sd.hpp"

namespace {

using nlohmann::json;
using sd::Complex;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string spec = "unit";
  std::string g = "omega";
  std::string x;
  std::string x_grid;
  std::uint64_t cutoff = sd::kDefaultPrimeCutoff;
  std::string z;
  std::string z_grid;
  std::string y;
  std::string y_grid;
  std::string s;
  std::optional<double> rho;
  std::optional<double> c0;
  std::string p_grid;
  std::uint64_t seed = 0;
  std::size_t count = 10;
  std::string output;
  std::string format = "csv";
  bool strict = false;
  bool no_cache = false;
  std::string cache_dir;
};

// ---------------------------------------------------------------------------
// Argument parsing helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

// "a", "a+bi", "a-bi", "bi", "i", "-i".
Complex parse_complex(std::string text, const std::string& what) {
  text.erase(std::remove_if(text.begin(), text.end(), ::isspace), text.end());
  if (text.empty()) throw ConfigError(what + ": empty value");
  if (text.back() != 'i') return parse_real(text, what);
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, what);
  };
  if (split_at == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split_at), what), imag_of(body.substr(split_at))};
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  const double v = parse_real(text, what);
  if (v < 1 || v != std::floor(v) || v > static_cast<double>(sd::kMaxSieveLimit)) {
    throw ConfigError(what + ": expected an integer in [1, 2^32 - 1], got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> x_values(const RunConfig& c, bool allow_grid,
                                    std::vector<std::uint64_t> fallback = {}) {
  if (!c.x.empty() && !c.x_grid.empty()) throw ConfigError("give either --x or --x-grid");
  std::vector<std::uint64_t> out;
  if (!c.x.empty()) {
    out.push_back(parse_count(c.x, "--x"));
  } else if (!c.x_grid.empty()) {
    if (!allow_grid) throw ConfigError("--x-grid is not supported by this command");
    for (const auto& item : split(c.x_grid, ',')) out.push_back(parse_count(item, "--x-grid"));
  } else {
    out = std::move(fallback);
  }
  if (out.empty()) throw ConfigError("missing --x");
  return out;
}

std::vector<Complex> circle(int n) {
  std::vector<Complex> zs;
  for (int j = 0; j < n; ++j) zs.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  return zs;
}

// --z, --z-grid (comma list or "circle:N"), or --y (z = log y).
std::vector<Complex> z_values(const RunConfig& c, std::vector<Complex> fallback = {}) {
  const int given = !c.z.empty() + !c.z_grid.empty() + !c.y.empty();
  if (given > 1) throw ConfigError("give only one of --z, --z-grid, --y");
  if (!c.z.empty()) return {parse_complex(c.z, "--z")};
  if (!c.y.empty()) {
    const Complex y = parse_complex(c.y, "--y");
    if (y == Complex(0.0, 0.0)) throw ConfigError("--y must be nonzero");
    return {std::log(y)};
  }
  if (!c.z_grid.empty()) {
    if (c.z_grid.rfind("circle:", 0) == 0) {
      const auto n = parse_count(c.z_grid.substr(7), "--z-grid circle:N");
      if (n > 100000) throw ConfigError("--z-grid circle:N allows at most 100000 points");
      return circle(static_cast<int>(n));
    }
    std::vector<Complex> zs;
    for (const auto& item : split(c.z_grid, ',')) zs.push_back(parse_complex(item, "--z-grid"));
    return zs;
  }
  if (fallback.empty()) throw ConfigError("missing --z (or --z-grid / --y)");
  return fallback;
}

std::vector<double> real_list(const std::string& text, const std::string& what,
                              std::vector<double> fallback) {
  if (text.empty()) return fallback;
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item, what));
  return out;
}

double average_value(const RunConfig& c, const sd::MultiplicativeSpec& alpha) {
  if (c.rho) {
    if (!(*c.rho > 0.0)) throw ConfigError("--rho must be > 0");
    return *c.rho;
  }
  if (alpha.rho.imag() != 0.0 || !(alpha.rho.real() > 0.0)) {
    throw ConfigError("spec has no positive real average value; pass --rho");
  }
  return alpha.rho.real();
}

void check_cutoff(const RunConfig& c) {
  if (c.cutoff < 100) throw ConfigError("--cutoff must be >= 100");
}

// ---------------------------------------------------------------------------
// Sieve cache

std::filesystem::path cache_directory(const RunConfig& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("SD_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "sd";
  }
  return std::filesystem::temp_directory_path() / "sd-cache";
}

sd::SieveTable obtain_sieve(const RunConfig& c, std::uint64_t x) {
  const std::uint64_t x_max = std::max<std::uint64_t>(x, 2);
  if (c.no_cache) return sd::build_sieve(x_max);
  const auto dir = cache_directory(c);
  const auto path = dir / ("sieve_" + std::to_string(x_max) + ".bin");
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      return sd::load_sieve(path.string());
    } catch (const std::exception& e) {
      std::cerr << "warning: ignoring unreadable sieve cache: " << e.what() << '\n';
    }
  }
  auto sieve = sd::build_sieve(x_max);
  try {
    std::filesystem::create_directories(dir);
    const auto tmp = path.string() + ".tmp";
    sd::save_sieve(sieve, tmp);
    std::filesystem::rename(tmp, path);
  } catch (const std::exception& e) {
    std::cerr << "warning: could not write sieve cache: " << e.what() << '\n';
  }
  return sieve;
}

// ---------------------------------------------------------------------------
// Output

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const RunConfig& c, const json& j) {
  Output out(c.output);
  out.stream() << j.dump(2) << '\n';
}

std::string n15(double v) { return sd::format_number(v); }

bool want_json(const RunConfig& c) { return c.format == "json"; }

// ---------------------------------------------------------------------------
// Commands

void cmd_lambda0(const RunConfig& c) {
  check_cutoff(c);
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto r = sd::lambda0(alpha, c.cutoff);
  if (want_json(c)) {
    json j = sd::to_json(r);
    j["spec"] = alpha.name;
    return emit_json(c, j);
  }
  Output out(c.output);
  out.stream() << "value_re,value_im,tail_estimate,prime_cutoff,k_cutoff,certified\n"
               << n15(r.value.real()) << ',' << n15(r.value.imag()) << ',' << n15(r.tail_estimate)
               << ',' << r.prime_cutoff << ',' << r.k_cutoff << ',' << (r.certified ? 1 : 0)
               << '\n';
}

void cmd_psi(const RunConfig& c) {
  check_cutoff(c);
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto zs = z_values(c);
  const sd::EulerEngine engine(c.cutoff);
  const auto values = engine.psi_grid(alpha, zs, g);
  if (want_json(c)) {
    json rows = json::array();
    for (std::size_t i = 0; i < zs.size(); ++i) {
      rows.push_back({{"z", sd::complex_json(zs[i])}, {"psi", sd::complex_json(values[i])}});
    }
    return emit_json(c, {{"spec", alpha.name}, {"g", g.name}, {"prime_cutoff", c.cutoff},
                         {"psi", rows}});
  }
  Output out(c.output);
  out.stream() << "z_re,z_im,psi_re,psi_im\n";
  for (std::size_t i = 0; i < zs.size(); ++i) {
    out.stream() << n15(zs[i].real()) << ',' << n15(zs[i].imag()) << ',' << n15(values[i].real())
                 << ',' << n15(values[i].imag()) << '\n';
  }
}

void cmd_sum(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto xs = x_values(c, true);
  const bool twisted = !c.y.empty() || !c.z.empty();
  std::optional<sd::AdditiveSpec> g;
  Complex y = 1.0;
  if (twisted) {
    g = sd::parse_additive(c.g);
    y = std::exp(z_values(c).front());
    if (!c.y.empty()) y = parse_complex(c.y, "--y");
  }
  const auto sieve = obtain_sieve(c, *std::max_element(xs.begin(), xs.end()));
  std::vector<std::pair<std::uint64_t, Complex>> rows;
  for (const auto x : xs) {
    rows.emplace_back(x, twisted ? sd::twisted_sum(alpha, y, *g, x, sieve)
                                 : sd::partial_sum(alpha, x, sieve));
  }
  if (want_json(c)) {
    json j = json::array();
    for (const auto& [x, s] : rows) j.push_back({{"x", x}, {"sum", sd::complex_json(s)}});
    return emit_json(c, {{"spec", alpha.name}, {"sums", j}});
  }
  Output out(c.output);
  sd::write_sums_csv(out.stream(), rows);
}

void cmd_mgf(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto xs = x_values(c, true);
  const auto zs = z_values(c);
  const auto sieve = obtain_sieve(c, *std::max_element(xs.begin(), xs.end()));
  json rows = json::array();
  std::ostringstream csv;
  csv << "x,z_re,z_im,mgf_re,mgf_im\n";
  for (const auto x : xs) {
    const auto values = sd::mgf_exact_batch(alpha, g, x, zs, sieve);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      rows.push_back({{"x", x}, {"z", sd::complex_json(zs[i])}, {"mgf", sd::complex_json(values[i])}});
      csv << x << ',' << n15(zs[i].real()) << ',' << n15(zs[i].imag()) << ','
          << n15(values[i].real()) << ',' << n15(values[i].imag()) << '\n';
    }
  }
  if (want_json(c)) return emit_json(c, {{"spec", alpha.name}, {"g", g.name}, {"mgf", rows}});
  Output out(c.output);
  out.stream() << csv.str();
}

void cmd_pmf(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto x = x_values(c, false).front();
  const auto sieve = obtain_sieve(c, x);
  const auto d = sd::pmf(alpha, g, x, sieve);
  if (want_json(c)) {
    json j = sd::to_json(d);
    j["spec"] = alpha.name;
    j["g"] = g.name;
    return emit_json(c, j);
  }
  Output out(c.output);
  sd::write_distribution_csv(out.stream(), d);
}

void cmd_sample(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto x = x_values(c, false).front();
  if (c.count == 0) throw ConfigError("--count must be >= 1");
  const auto sieve = obtain_sieve(c, x);
  const auto draws = sd::sample(alpha, x, c.seed, c.count, sieve);
  if (want_json(c)) {
    return emit_json(c, {{"spec", alpha.name}, {"x", x}, {"seed", c.seed}, {"draws", draws}});
  }
  Output out(c.output);
  out.stream() << "index,n\n";
  for (std::size_t i = 0; i < draws.size(); ++i) out.stream() << i << ',' << draws[i] << '\n';
}

const std::vector<double> kDefaultYGrid = {-2.0, -1.0, 0.0, 1.0, 2.0};

void cmd_clt(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto x = x_values(c, false).front();
  if (x < 16) throw ConfigError("clt requires x >= 16");
  const double rho = average_value(c, alpha);
  const auto ys = real_list(c.y_grid, "--y-grid", kDefaultYGrid);
  const auto sieve = obtain_sieve(c, x);
  const auto r = sd::clt_report(alpha, g, rho, x, ys, sieve);
  if (want_json(c)) return emit_json(c, sd::to_json(r));
  Output out(c.output);
  sd::write_clt_csv(out.stream(), r);
}

void cmd_ldp(const RunConfig& c) {
  check_cutoff(c);
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto x = x_values(c, false).front();
  if (x < 16) throw ConfigError("ldp requires x >= 16");
  const double rho = average_value(c, alpha);
  const auto ss = real_list(c.s, "--s", {2.0});
  for (const double s : ss) {
    if (!(s > 0.0)) throw ConfigError("--s values must be > 0");
    if (s == 1.0 && c.strict) throw ConfigError("--s 1 is singular in --strict mode");
    if (!g.strip.contains(std::log(s))) {
      throw ConfigError("--s " + n15(s) + ": ln s lies outside the admissible strip of " + g.name);
    }
  }
  const auto mode = c.strict ? sd::LdpMode::strict : sd::LdpMode::literal;
  const auto sieve = obtain_sieve(c, x);
  const auto d = sd::pmf(alpha, g, x, sieve);
  const sd::EulerEngine engine(c.cutoff);
  std::vector<sd::LdpPrediction> rows;
  for (const double s : ss) {
    rows.push_back(sd::ldp_predict(engine, alpha, g, rho, d, s, mode));
    if (rows.back().warning) std::cerr << "warning: " << *rows.back().warning << '\n';
  }
  if (want_json(c)) {
    json j = json::array();
    for (const auto& p : rows) j.push_back(sd::to_json(p));
    return emit_json(c, {{"x", x}, {"ldp", j}});
  }
  Output out(c.output);
  sd::write_ldp_csv(out.stream(), rows);
}

void cmd_check(const RunConfig& c) {
  const auto alpha = sd::parse_multiplicative(c.spec);
  const double c0 = c.c0.value_or(alpha.c0);
  if (!(c0 > 0.0 && c0 < 1.0)) throw ConfigError("--c0 must lie in (0, 1)");
  std::vector<std::uint64_t> grid = {100, 1000, 10000, 100000, 1000000};
  if (!c.p_grid.empty()) {
    grid.clear();
    for (const auto& item : split(c.p_grid, ',')) grid.push_back(parse_count(item, "--p-grid"));
  }
  const auto r = sd::check_admissibility_pp(alpha, c0, grid);
  if (want_json(c)) {
    json j = sd::to_json(r);
    j["spec"] = alpha.name;
    j["c0"] = sd::round15(c0);
    return emit_json(c, j);
  }
  Output out(c.output);
  out.stream() << "P,square_sum\n";
  for (const auto& [P, v] : r.square_sum_partials) out.stream() << P << ',' << n15(v) << '\n';
  out.stream() << "# verdict " << sd::to_string(r.verdict);
  if (r.witness_prime) out.stream() << " witness " << *r.witness_prime;
  out.stream() << " decay_exponent " << n15(r.decay_exponent) << " abscissa_estimate "
               << n15(r.abscissa_estimate) << '\n';
}

void cmd_report(const RunConfig& c) {
  check_cutoff(c);
  const auto alpha = sd::parse_multiplicative(c.spec);
  const auto g = sd::parse_additive(c.g);
  const auto xs = x_values(c, true, {1000, 10000, 100000, 1000000});
  for (const auto x : xs) {
    if (x < 16) throw ConfigError("report requires every x >= 16");
  }
  const double rho = average_value(c, alpha);
  const auto zs = z_values(c, circle(16));
  const auto ys = real_list(c.y_grid, "--y-grid", kDefaultYGrid);
  const auto ss = real_list(c.s, "--s", {2.0});
  for (const double s : ss) {
    if (!(s > 0.0) || !g.strip.contains(std::log(s))) {
      throw ConfigError("--s " + n15(s) + " is not admissible for " + g.name);
    }
    if (s == 1.0 && c.strict) throw ConfigError("--s 1 is singular in --strict mode");
  }
  const auto mode = c.strict ? sd::LdpMode::strict : sd::LdpMode::literal;

  const sd::EulerEngine engine(c.cutoff);
  const auto sieve = obtain_sieve(c, *std::max_element(xs.begin(), xs.end()));

  json config = {{"spec", c.spec},
                 {"g", c.g},
                 {"x_grid", xs},
                 {"prime_cutoff", c.cutoff},
                 {"rho", sd::round15(rho)},
                 {"y_grid", json::array()},
                 {"s", json::array()},
                 {"mode", c.strict ? "strict" : "literal"},
                 {"z_grid", json::array()}};
  for (const auto y : ys) config["y_grid"].push_back(sd::round15(y));
  for (const auto s : ss) config["s"].push_back(sd::round15(s));
  for (const auto z : zs) config["z_grid"].push_back(sd::complex_json(z));

  const auto lam = engine.lambda0(alpha);
  const auto limit = engine.psi_grid(alpha, zs, g);
  json psi_grid = json::array();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    psi_grid.push_back({{"z", sd::complex_json(zs[i])}, {"psi", sd::complex_json(limit[i])}});
  }

  json residual_table = json::array();
  json clt = json::array();
  json ldp = json::array();
  for (const auto x : xs) {
    const auto psi_x = sd::mod_poisson_residual_batch(alpha, g, x, zs, rho, sieve);
    double worst = 0.0;
    json entries = json::array();
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double diff = std::abs(psi_x[i] - limit[i]);
      worst = std::max(worst, diff);
      entries.push_back({{"z", sd::complex_json(zs[i])},
                         {"psi_x", sd::complex_json(psi_x[i])},
                         {"abs_diff", sd::round15(diff)}});
    }
    residual_table.push_back({{"x", x},
                              {"ln_ln_x", sd::round15(sd::ln_ln(x))},
                              {"max_residual", sd::round15(worst)},
                              {"entries", entries}});

    const auto d = sd::pmf(alpha, g, x, sieve);
    clt.push_back(sd::to_json(sd::clt_report(d, rho, ys)));
    for (const double s : ss) {
      json row = sd::to_json(sd::ldp_predict(engine, alpha, g, rho, d, s, mode));
      row["x"] = x;
      ldp.push_back(row);
    }
  }

  emit_json(c, {{"config", config},
                {"lambda0", sd::to_json(lam)},
                {"psi_grid", psi_grid},
                {"residual_table", residual_table},
                {"clt", clt},
                {"ldp", ldp}});
}

// ---------------------------------------------------------------------------

struct Command {
  const char* name;
  const char* help;
  void (*run)(const RunConfig&);
  // Which option groups the command accepts.
  bool g, x, x_grid, cutoff, z, y, y_grid, s, rho, seed, check;
};

const Command kCommands[] = {
    // name      help                                                   run          g  x  xg cut z  y  yg s  rho seed check
    {"lambda0", "Selberg-Delange constant lambda0 of --spec", cmd_lambda0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
    {"psi", "limiting function psi(z) = lambda0(alpha_{e^z}) / lambda0(alpha)", cmd_psi, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0},
    {"sum", "exact partial sums (twisted when --y or --z is given)", cmd_sum, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0},
    {"mgf", "exact moment generating function E(e^{z g(N)})", cmd_mgf, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0},
    {"pmf", "exact distribution of g(N)", cmd_pmf, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {"sample", "draws of N with P(N = n) proportional to alpha(n)", cmd_sample, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0},
    {"clt", "exact tails vs the normal approximation", cmd_clt, 1, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0},
    {"ldp", "exact tails vs the precise large-deviation estimate", cmd_ldp, 1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0},
    {"check", "numeric admissibility++ diagnostics", cmd_check, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
    {"report", "full x-grid study as one JSON artifact", cmd_report, 1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0},
};

void add_options(CLI::App* sub, const Command& cmd, RunConfig& c) {
  sub->add_option("--spec", c.spec, "multiplicative function, e.g. theta_omega:2")
      ->capture_default_str();
  if (cmd.g) sub->add_option("--g", c.g, "additive function: omega | big_omega | table:<file>")->capture_default_str();
  if (cmd.x) sub->add_option("--x", c.x, "upper end of the range n <= x");
  if (cmd.x_grid) sub->add_option("--x-grid", c.x_grid, "comma-separated list of x values");
  if (cmd.cutoff) sub->add_option("--cutoff", c.cutoff, "Euler-product prime cutoff P")->capture_default_str();
  if (cmd.z) {
    sub->add_option("--z", c.z, "complex point, e.g. 0.5 or 0.5+1i");
    sub->add_option("--z-grid", c.z_grid, "comma-separated complex points or circle:N");
  }
  if (cmd.y) sub->add_option("--y", c.y, "twist parameter y (z = log y)");
  if (cmd.y_grid) sub->add_option("--y-grid", c.y_grid, "comma-separated CLT offsets y");
  if (cmd.s) {
    sub->add_option("--s", c.s, "comma-separated slopes s")->capture_default_str();
    sub->add_flag("--strict", c.strict, "reject s = 1 instead of the psi'(0) substitution");
  }
  if (cmd.rho) sub->add_option("--rho", c.rho, "average value (defaults to the spec's)");
  if (cmd.seed) {
    sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--count", c.count, "number of draws")->capture_default_str();
  }
  if (cmd.check) {
    sub->add_option("--c0", c.c0, "zero-free-region width (defaults to the spec's)");
    sub->add_option("--p-grid", c.p_grid, "comma-separated prime cutoffs");
  }
  sub->add_option("--output,-o", c.output, "write to this file instead of stdout");
  sub->add_option("--format", c.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_flag("--no-cache", c.no_cache, "do not read or write the sieve cache");
  sub->add_option("--cache-dir", c.cache_dir, "sieve cache directory (default $SD_CACHE_DIR)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sd: distributions of additive functions weighted by multiplicative functions"};
  app.require_subcommand(1);
  RunConfig config;
  const Command* chosen = nullptr;
  CLI::App* report = nullptr;
  for (const auto& cmd : kCommands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    if (std::string(cmd.name) == "report") report = sub;
    add_options(sub, cmd, config);
    sub->callback([&chosen, &cmd] { chosen = &cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (report->parsed()) {
      if (report->count("--format") > 0 && config.format != "json") {
        throw ConfigError("report is written as JSON only");
      }
      config.format = "json";
    }
    chosen->run(config);
  } catch (const sd::SpecParseError& e) {
    std::cerr << "error: spec:" << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sd::numeric_error& e) {
    std::cerr << "numeric error (" << sd::to_string(e.kind()) << "): " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

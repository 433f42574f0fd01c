#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ahm/errors.hpp"
#include "ahm/kernel.hpp"
#include "ahm/landau.hpp"
#include "ahm/poisson.hpp"
#include "ahm/sharp_bounds.hpp"
#include "ahm/sphere.hpp"
#include "ahm/verify.hpp"

namespace {

using namespace ahm;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

// ---- output model -------------------------------------------------------

using Value = std::variant<std::monostate, double, long long, bool, std::string>;

struct Field {
  std::string key;
  Value value;
};
using Row = std::vector<Field>;

struct Output {
  std::string command;
  std::vector<Row> rows;
  bool single = false;  // JSON: emit the one row flat instead of under "rows"
  Row summary;          // JSON-only top-level fields
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string json_value(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return "null";
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return "null";
    if (std::isinf(*d)) return *d > 0 ? "\"inf\"" : "\"-inf\"";
    return format_double(*d);
  }
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return json_escape(std::get<std::string>(v));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_value(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return "";
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return format_double(*d);
  }
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return csv_quote(std::get<std::string>(v));
}

void write_json_object(std::ostream& os, const Row& row, const std::string& indent) {
  os << "{";
  for (std::size_t i = 0; i < row.size(); ++i) {
    os << (i ? "," : "") << "\n" << indent << "  " << json_escape(row[i].key) << ": "
       << json_value(row[i].value);
  }
  os << "\n" << indent << "}";
}

void write_json(std::ostream& os, const Output& out) {
  Row top{{"command", out.command}};
  top.insert(top.end(), out.summary.begin(), out.summary.end());
  if (out.single && !out.rows.empty()) {
    top.insert(top.end(), out.rows.front().begin(), out.rows.front().end());
    write_json_object(os, top, "");
    os << "\n";
    return;
  }
  os << "{";
  for (const auto& f : top) os << "\n  " << json_escape(f.key) << ": " << json_value(f.value) << ",";
  os << "\n  \"rows\": [";
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    os << (i ? "," : "") << "\n    ";
    write_json_object(os, out.rows[i], "    ");
  }
  os << (out.rows.empty() ? "]" : "\n  ]") << "\n}\n";
}

void write_csv(std::ostream& os, const Output& out) {
  if (out.rows.empty()) return;
  const Row& head = out.rows.front();
  for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << csv_quote(head[i].key);
  os << "\r\n";
  for (const auto& row : out.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_value(row[i].value);
    os << "\r\n";
  }
}

// ---- configuration --------------------------------------------------------

struct Config {
  std::vector<int> n{3};
  std::vector<double> alpha{0.0};
  std::vector<std::string> p, q;
  double M = 1.0;
  std::vector<double> x;
  std::string dir;
  std::string phi;
  std::string rule = "bizonal";
  int degree = 256;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string format = "json";
  std::string out;
  // Subcommand-specific.
  bool brute = false;
  int points = 181;
  std::string quantity = "sweep_I";
  double perturb_c = 0.0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError(what + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

int single_n(const Config& c) {
  if (c.n.size() != 1) throw UsageError("--n: this subcommand takes a single dimension");
  return c.n.front();
}

double single_alpha(const Config& c) {
  if (c.alpha.size() != 1) throw UsageError("--alpha: this subcommand takes a single value");
  return c.alpha.front();
}

std::vector<ExponentPair> exponent_pairs(const Config& c) {
  std::vector<ExponentPair> out;
  for (const auto& s : c.p) out.push_back(ExponentPair::parse_p(s));
  for (const auto& s : c.q) out.push_back(ExponentPair::parse_q(s));
  if (out.empty()) out.push_back(ExponentPair::from_q(1.0));
  return out;
}

ExponentPair single_pair(const Config& c) {
  const auto pairs = exponent_pairs(c);
  if (pairs.size() != 1) throw UsageError("--p/--q: this subcommand takes a single exponent");
  return pairs.front();
}

std::vector<double> x_norms(const Config& c) {
  if (c.x.empty()) return {0.0};
  return c.x;
}

double single_x_norm(const Config& c) {
  if (c.x.size() > 1) throw UsageError("--x: this subcommand takes a single norm |x|");
  return c.x.empty() ? 0.0 : c.x.front();
}

SphereRule make_rule(const Config& c, int n) {
  if (c.degree < 4) throw UsageError("--degree: need at least 4 nodes");
  if (c.rule == "zonal") return SphereRule::zonal(n, c.degree);
  if (c.rule == "bizonal") return SphereRule::bizonal(n, c.degree, 2 * c.degree);
  if (c.rule == "mc") {
    if (c.samples < 1) throw UsageError("--samples: need at least one sample");
    return SphereRule::monte_carlo(n, c.samples, c.seed);
  }
  throw UsageError("--rule: expected zonal, bizonal or mc");
}

BallPoint make_point(const Config& c, int n) {
  if (c.x.size() <= 1) return BallPoint::on_axis(n, c.x.empty() ? 0.0 : c.x.front());
  if (static_cast<int>(c.x.size()) != n) {
    throw UsageError("--x: give either a norm or exactly n coordinates");
  }
  return BallPoint(Eigen::Map<const Eigen::VectorXd>(c.x.data(), n));
}

Eigen::VectorXd vector_of(const std::vector<double>& v, int n, const std::string& what) {
  if (static_cast<int>(v.size()) != n) {
    throw UsageError(what + ": expected " + std::to_string(n) + " components");
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

std::optional<UnitDirection> make_direction(const Config& c, const BallPoint& x) {
  if (c.dir.empty()) return std::nullopt;
  const int n = x.dim();
  if (c.dir == "radial") return UnitDirection::radial(x);
  if (c.dir == "tangential") return UnitDirection::tangential(x);
  if (c.dir.rfind("beta:", 0) == 0) {
    const double beta = parse_number(c.dir.substr(5), "--dir beta");
    if (x.norm() == 0.0) return UnitDirection::in_plane(n, beta);
    const Eigen::VectorXd nx = UnitDirection::radial(x).coords();
    const Eigen::VectorXd tx = UnitDirection::tangential(x).coords();
    return UnitDirection(std::cos(beta) * nx + std::sin(beta) * tx);
  }
  return UnitDirection(vector_of(parse_numbers(c.dir, "--dir"), n, "--dir"));
}

// constant:c1[,c2...] | coordinate:i | signed[:l] | linear[:A row-major | :normalized]
// | cap:h[:l] | csv:path
BoundaryData make_phi(const Config& c, const ProblemParams& params) {
  const int n = params.n;
  const std::string& s = c.phi;
  if (s.empty()) throw UsageError("--phi: boundary data required for this subcommand");
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto direction = [&](const std::string& text) {
    if (text.empty()) return UnitDirection::axis(n, 0);
    return UnitDirection(vector_of(parse_numbers(text, "--phi direction"), n, "--phi direction"));
  };
  if (kind == "constant") {
    const auto v = arg.empty() ? std::vector<double>{1.0} : parse_numbers(arg, "--phi constant");
    return BoundaryData::constant(n, Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  }
  if (kind == "coordinate") {
    const double i = parse_number(arg, "--phi coordinate index");
    if (i != std::floor(i)) throw UsageError("--phi coordinate: index must be an integer");
    return BoundaryData::coordinate(n, static_cast<int>(i));
  }
  if (kind == "signed") return BoundaryData::signed_half(direction(arg));
  if (kind == "linear") {
    if (arg.empty()) return BoundaryData::linear(Eigen::MatrixXd::Identity(n, n));
    if (arg == "normalized") return normalized_linear(params);
    const auto v = parse_numbers(arg, "--phi linear");
    if (static_cast<int>(v.size()) != n * n) {
      throw UsageError("--phi linear: expected n*n matrix entries in row-major order");
    }
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = v[i * n + j];
    }
    return BoundaryData::linear(A);
  }
  if (kind == "cap") {
    const auto second = arg.find(':');
    const double h = parse_number(arg.substr(0, second), "--phi cap height");
    return BoundaryData::cap(direction(second == std::string::npos ? "" : arg.substr(second + 1)), h);
  }
  if (kind == "csv") return load_boundary_csv(arg, n, &std::cerr);
  throw UsageError("--phi: unknown family '" + kind + "'");
}

const char* family_name(BoundaryData::Family f) {
  switch (f) {
    case BoundaryData::Family::Constant: return "constant";
    case BoundaryData::Family::Coordinate: return "coordinate";
    case BoundaryData::Family::Signed: return "signed";
    case BoundaryData::Family::Linear: return "linear";
    case BoundaryData::Family::Cap: return "cap";
    case BoundaryData::Family::Tabulated: return "tabulated";
  }
  return "unknown";
}

Value q_value(const ExponentPair& e) {
  if (e.q_ratio) {
    return std::to_string(e.q_ratio->first) + "/" + std::to_string(e.q_ratio->second);
  }
  return e.q;
}

Value optional_value(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

// ---- subcommands ----------------------------------------------------------

Output cmd_constants(const Config& c) {
  Output out{"constants", {}, false, {}};
  for (int n : c.n) {
    for (double alpha : c.alpha) {
      const ProblemParams p(n, alpha);
      const double C = c_n_alpha(p);
      const double ns = n_star(p, c.M);
      for (const ExponentPair& pair : exponent_pairs(c)) {
        for (double t : x_norms(c)) {
          if (!(t >= 0.0 && t < 1.0)) throw DomainError("--x: need 0 <= |x| < 1");
          Row row{{"n", static_cast<long long>(n)}, {"alpha", alpha}, {"q", q_value(pair)},
                  {"p", pair.p}, {"x", t}};
          std::optional<double> j, sup, coef_lower, brute, gap;
          double coef = 0.0;
          std::string regime, maximizer;
          if (std::isinf(pair.q)) {
            const BoundValue b = c_infty_sup(p, t);
            regime = "q_infinite";
            maximizer = b.exact ? "radial" : "unresolved";
            coef = b.upper;
            coef_lower = b.lower;
            if (c.brute) brute = sweep_c_infty(p, t, c.points).max_value;
          } else {
            const SupI s = sup_I_closed(p, pair, t);
            regime = to_string(s.tag.regime);
            maximizer = to_string(s.tag.maximizer);
            j = J_term(p, pair.q, t);
            sup = s.value.value();
            coef = thm11_coefficient(p, pair, BallPoint::on_axis(n, t));
            if (c.brute) {
              brute = sweep_I(p, pair.q, t, c.points, make_rule(c, n)).max_value;
            }
          }
          if (brute) {
            const double ref = sup ? *sup : coef;
            gap = std::abs(*brute - ref) / std::abs(ref);
          }
          row.insert(row.end(), {{"regime", regime},
                                 {"maximizer", maximizer},
                                 {"C", C},
                                 {"n_star", ns},
                                 {"J_term", optional_value(j)},
                                 {"sup_I", optional_value(sup)},
                                 {"coefficient", coef},
                                 {"coefficient_lower", optional_value(coef_lower)},
                                 {"brute_force", optional_value(brute)},
                                 {"rel_gap", optional_value(gap)}});
          row.push_back({"within_tol", gap ? Value(*gap <= c.tol) : Value()});
          out.rows.push_back(std::move(row));
        }
      }
    }
  }
  return out;
}

Output cmd_bound(const Config& c) {
  const ProblemParams p(single_n(c), single_alpha(c));
  const ExponentPair pair = single_pair(c);
  const BallPoint x = make_point(c, p.n);
  const BoundaryData phi = make_phi(c, p);
  const SphereRule rule = make_rule(c, p.n);
  const Eigen::VectorXd u = poisson_extend(phi, p, x, rule);
  const Eigen::MatrixXd du = poisson_jacobian(phi, p, x, rule).entries;
  const double grad = Eigen::JacobiSVD<Eigen::MatrixXd>(du).singularValues()(0);
  const double norm = lp_norm(phi, pair.p, SphereRule::zonal(p.n, c.degree));
  const double coef = std::isinf(pair.q) ? thm12_coefficient(p, x.norm())
                                         : thm11_coefficient(p, pair, x);
  const double bound = coef * norm;
  Row row{{"n", static_cast<long long>(p.n)}, {"alpha", p.alpha}, {"q", q_value(pair)},
          {"p", pair.p}, {"x_norm", x.norm()}, {"family", std::string(family_name(phi.family()))},
          {"u_norm", u.norm()}, {"grad_norm", grad}, {"phi_norm", norm}, {"coefficient", coef},
          {"bound", bound}, {"ratio", bound > 0.0 ? grad / bound : 0.0},
          {"satisfied", grad <= bound * (1.0 + c.tol)}};
  if (const auto l = make_direction(c, x)) {
    const double directional = (du * l->coords()).norm();
    row.push_back({"directional_derivative", directional});
    if (std::isinf(pair.q)) {
      row.push_back({"direction_bound", c_infty_direction(p, x, *l) * norm});
    } else {
      row.push_back({"I_direction", I_bruteforce(p, pair.q, x, *l, rule)});
    }
  }
  return {"bound", {row}, true, {}};
}

Output cmd_landau(const Config& c) {
  const ProblemParams p(single_n(c), single_alpha(c));
  const LandauResult r = landau_radius(p, c.M);
  Row row{{"n", static_cast<long long>(p.n)},
          {"alpha", p.alpha},
          {"M", r.M},
          {"r0", r.r0},
          {"R0", r.R0},
          {"psi_residual", r.psi_residual},
          {"bracket_lo", r.bracket.first},
          {"bracket_hi", r.bracket.second},
          {"G_r0", r.G_r0},
          {"equation_residual", r.equation_residual},
          {"n_star", n_star(p, c.M)}};
  return {"landau", {row}, true, {}};
}

Output cmd_table(const Config& c) {
  const ProblemParams p(single_n(c), single_alpha(c));
  if (c.points < 2) throw UsageError("--points: need at least 2");
  Output out{"table", {}, false, {{"quantity", c.quantity}}};
  const Row base{{"n", static_cast<long long>(p.n)}, {"alpha", p.alpha}};
  auto add = [&](Row extra) {
    Row row = base;
    row.insert(row.end(), extra.begin(), extra.end());
    out.rows.push_back(std::move(row));
  };
  if (c.quantity == "sweep_I") {
    const ExponentPair pair = single_pair(c);
    if (std::isinf(pair.q)) throw UsageError("sweep_I needs a finite q; use c_infty for q = inf");
    const DirectionSweep s = sweep_I(p, pair.q, single_x_norm(c), c.points, make_rule(c, p.n));
    for (std::size_t i = 0; i < s.betas.size(); ++i) {
      add({{"x", single_x_norm(c)}, {"beta", s.betas[i]}, {"I", s.values[i]}});
    }
  } else if (c.quantity == "c_infty") {
    const DirectionSweep s = sweep_c_infty(p, single_x_norm(c), c.points);
    for (std::size_t i = 0; i < s.betas.size(); ++i) {
      add({{"x", single_x_norm(c)}, {"beta", s.betas[i]}, {"c_infty", s.values[i]}});
    }
  } else if (c.quantity == "psi" || c.quantity == "G") {
    for (int i = 0; i < c.points; ++i) {
      const double r = static_cast<double>(i) / c.points;
      Row extra{{"r", r}, {"G", G_fn(p, r)}, {"g", g_fn(p, r)}};
      if (c.quantity == "psi") extra.push_back({"psi", psi(p, c.M, r)});
      add(std::move(extra));
    }
  } else if (c.quantity == "kernel_mass") {
    for (int i = 0; i < c.points; ++i) {
      const double t = static_cast<double>(i) / c.points;
      add({{"x", t}, {"kernel_mass", kernel_mass(p, t)}});
    }
  } else {
    throw UsageError("--quantity: expected sweep_I, c_infty, psi, G or kernel_mass");
  }
  return out;
}

Output cmd_verify(const Config& c, bool& passed) {
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.c_perturbation = c.perturb_c;
  const VerifyReport report = run_verify(opt);
  passed = report.passed();
  Output out{"verify", {}, false, {{"passed", passed}}};
  for (const auto& s : report.suites) {
    std::string msg;
    for (const auto& m : s.messages) msg += (msg.empty() ? "" : "; ") + m;
    out.rows.push_back({{"suite", s.name},
                        {"passed", s.passed},
                        {"deterministic", s.deterministic},
                        {"checks", static_cast<long long>(s.checks)},
                        {"failures", static_cast<long long>(s.failures)},
                        {"message", msg}});
    // Timings vary between runs, so they stay out of the (deterministic) output.
    std::cerr << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.seconds << " s)";
    if (!s.passed) std::cerr << ": " << msg;
    std::cerr << "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-Szego extensions, sharp gradient constants and Landau radii on the unit ball"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;

  app.add_option("--n", cfg.n, "Dimension n >= 3 (comma list for constants)")->delimiter(',');
  app.add_option("--alpha", cfg.alpha, "Parameter alpha < 1 (comma list for constants)")
      ->delimiter(',');
  auto* popt = app.add_option("--p", cfg.p, "Boundary exponent p in [1, inf]; a/b accepted")
                   ->delimiter(',');
  auto* qopt = app.add_option("--q", cfg.q, "Conjugate exponent q in [1, inf]; a/b accepted")
                   ->delimiter(',');
  popt->excludes(qopt);
  app.add_option("--M", cfg.M, "Sup-norm bound M > 0")->capture_default_str();
  app.add_option("--x", cfg.x, "Norm(s) |x|, or n coordinates for bound")->delimiter(',');
  app.add_option("--dir", cfg.dir, "Direction: radial, tangential, beta:<angle> or comma vector");
  app.add_option("--phi", cfg.phi,
                 "Boundary data: constant:c, coordinate:i, signed[:l], linear[:A|:normalized], "
                 "cap:h[:l], csv:path");
  app.add_option("--rule", cfg.rule, "Sphere rule")
      ->check(CLI::IsMember({"zonal", "bizonal", "mc"}))
      ->capture_default_str();
  app.add_option("--degree", cfg.degree, "Quadrature nodes (radial; angular uses twice as many)")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Relative tolerance for agreement flags")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Write output to FILE instead of stdout");

  auto* constants = app.add_subcommand("constants", "Kernel constants and sharp coefficients");
  constants->add_flag("--brute", cfg.brute, "Add a brute-force direction sweep column");
  constants->add_option("--points", cfg.points, "Sweep points for --brute")->capture_default_str();
  app.add_subcommand("bound", "Gradient of P_alpha[phi] at x against the sharp bound");
  app.add_subcommand("landau", "Landau radii r0 and R0");
  auto* verify = app.add_subcommand("verify", "Run all invariant suites");
  verify->add_option("--perturb-c", cfg.perturb_c, "Relative perturbation of C (test hook)")
      ->group("");
  auto* table = app.add_subcommand("table", "Plottable tables");
  table->add_option("--quantity", cfg.quantity, "sweep_I, c_infty, psi, G or kernel_mass")
      ->capture_default_str();
  table->add_option("--points", cfg.points, "Number of rows")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Output out;
    bool passed = true;
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "constants") out = cmd_constants(cfg);
    else if (cmd == "bound") out = cmd_bound(cfg);
    else if (cmd == "landau") out = cmd_landau(cfg);
    else if (cmd == "table") out = cmd_table(cfg);
    else out = cmd_verify(cfg, passed);

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw UsageError("--out: cannot open '" + cfg.out + "'");
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    if (cfg.format == "csv") write_csv(os, out);
    else write_json(os, out);
    return passed ? kExitOk : kExitVerifyFailed;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}

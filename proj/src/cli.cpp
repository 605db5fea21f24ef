#include "taildep/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "taildep/acceptance.hpp"
#include "taildep/estimators.hpp"
#include "taildep/survival_oracle.hpp"
#include "taildep/tail_theory.hpp"

namespace taildep::cli {

namespace {

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& r : required)
    if (!obj.contains(r)) throw ConfigError(where + ": missing required key \"" + r + "\"");
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

Matrix correlation_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a k x k array");
  const int k = static_cast<int>(j.size());
  Matrix m(k, k);
  for (int i = 0; i < k; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != k)
      throw ConfigError(where + ": row " + std::to_string(i + 1) + " is not length " + std::to_string(k));
    for (int c = 0; c < k; ++c) m(i, c) = as_number(j[i][c], where);
  }
  return m;
}

// 1-based user-facing index sets; sorted 0-based internally.
std::vector<int> index_set_from_json(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
  std::vector<int> I;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ConfigError(where + ": indices must be integers");
    const int v = e.get<int>();
    if (v < 1 || v > dim) throw ConfigError(where + ": index " + std::to_string(v) + " outside 1.." + std::to_string(dim));
    I.push_back(v - 1);
  }
  std::sort(I.begin(), I.end());
  for (std::size_t i = 1; i < I.size(); ++i)
    if (I[i] == I[i - 1]) throw ConfigError(where + ": duplicate index");
  return I;
}

}  // namespace

EllipticalModel model_from_config(const Json& model_cfg) {
  require_keys(model_cfg, {"family", "params", "correlation"}, {"family", "correlation"}, "model");
  const std::string family = model_cfg.at("family").get<std::string>();
  const Matrix raw = correlation_from_json(model_cfg.at("correlation"), "model.correlation");
  CorrelationMatrix sigma = CorrelationMatrix::validate(raw);

  Json params = model_cfg.contains("params") ? model_cfg.at("params") : Json::object();
  if (family == "gaussian_chi") {
    require_keys(params, {"dim"}, {}, "model.params");
    const int dim = params.contains("dim") ? params.at("dim").get<int>() : sigma.dim();
    return EllipticalModel(std::move(sigma), RadialLaw::gaussian_chi(dim));
  }
  if (family == "unit_gumbel") {
    require_keys(params, {}, {}, "model.params");
    return EllipticalModel(std::move(sigma), RadialLaw::unit_gumbel());
  }
  if (family == "kotz") {
    require_keys(params, {"K", "N", "r", "theta"}, {"theta"}, "model.params");
    const double K = params.contains("K") ? as_number(params["K"], "model.params.K") : 1.0;
    const double N = params.contains("N") ? as_number(params["N"], "model.params.N") : 0.0;
    const double r = params.contains("r") ? as_number(params["r"], "model.params.r") : 1.0;
    return EllipticalModel(std::move(sigma),
                           RadialLaw::kotz(K, N, r, as_number(params["theta"], "model.params.theta")));
  }
  if (family == "lognormal") {
    require_keys(params, {"mu", "sigma"}, {}, "model.params");
    const double mu = params.contains("mu") ? as_number(params["mu"], "model.params.mu") : 0.0;
    const double sd = params.contains("sigma") ? as_number(params["sigma"], "model.params.sigma") : 1.0;
    return EllipticalModel(std::move(sigma), RadialLaw::lognormal(mu, sd));
  }
  if (family == "exp_scaling") {
    require_keys(params, {"a"}, {"a"}, "model.params");
    return EllipticalModel(std::move(sigma), RadialLaw::exp_scaling(as_number(params["a"], "model.params.a")));
  }
  throw ConfigError("model.family: unknown family \"" + family + "\"");
}

Json resolve_config(const std::string& command, Json cfg, const Overrides& ov) {
  if (ov.out) cfg["out"] = *ov.out;
  if (ov.seed) cfg["seed"] = *ov.seed;
  if (ov.kn) cfg["kn"] = *ov.kn;

  if (command == "simulate") {
    require_keys(cfg, {"model", "n", "seed", "out"}, {"model", "n", "seed"}, "config");
    if (!cfg.contains("out")) cfg["out"] = "sample.csv";
  } else if (command == "estimate") {
    require_keys(cfg, {"input", "kn", "index_sets", "u_levels", "x_table", "out"},
                 {"input"}, "config");
    if (!cfg.contains("kn")) cfg["kn"] = 0;
    if (!cfg.contains("u_levels")) cfg["u_levels"] = Json::array();
    if (!cfg.contains("x_table")) cfg["x_table"] = Json::array();
  } else if (command == "alpha") {
    require_keys(cfg, {"correlation", "theta", "index_sets", "out"},
                 {"correlation", "theta"}, "config");
    if (!cfg.contains("index_sets")) {
      const int k = static_cast<int>(cfg.at("correlation").size());
      Json full = Json::array();
      for (int i = 1; i <= k; ++i) full.push_back(i);
      cfg["index_sets"] = Json::array({full});
    }
  } else if (command == "oracle") {
    require_keys(cfg, {"model", "u_grid", "x_pairs", "levels", "index_set", "out"},
                 {"model", "u_grid"}, "config");
    if (!cfg.contains("x_pairs")) cfg["x_pairs"] = Json::array();
    if (!cfg.contains("levels")) cfg["levels"] = Json::array();
  } else if (command == "verify") {
    require_keys(cfg, {"level"}, {}, "config");
    if (!cfg.contains("level")) cfg["level"] = "quick";
    const std::string level = cfg["level"].get<std::string>();
    if (level != "quick" && level != "full")
      throw ConfigError("config.level: expected \"quick\" or \"full\"");
  } else {
    throw ConfigError("unknown command \"" + command + "\"");
  }
  return cfg;
}

void write_csv(const SampleMatrix& data, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path);
  for (int j = 0; j < data.k; ++j) f << (j ? ",x" : "x") << (j + 1);
  f << "\n";
  for (int i = 0; i < data.n; ++i) {
    for (int j = 0; j < data.k; ++j) {
      if (j) f << ',';
      f << shortest(data.at(i, j));
    }
    f << "\n";
  }
}

SampleMatrix read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open input file " + path);
  std::string line;
  if (!std::getline(f, line)) throw ConfigError(path + ": empty file");
  int k = 1;
  for (char c : line)
    if (c == ',') ++k;
  if (k < 2) throw ConfigError(path + ": need at least 2 columns");

  SampleMatrix out;
  out.k = k;
  out.model = "csv:" + path;
  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* p = line.data();
    const char* end = p + line.size();
    for (int j = 0; j < k; ++j) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc())
        throw ConfigError(path + ": line " + std::to_string(lineno) + ": bad number in column " + std::to_string(j + 1));
      p = res.ptr;
      if (j + 1 < k) {
        if (p >= end || *p != ',')
          throw ConfigError(path + ": line " + std::to_string(lineno) + ": expected ',' after column " + std::to_string(j + 1));
        ++p;
      }
      out.data.push_back(v);
    }
    if (p != end)
      throw ConfigError(path + ": line " + std::to_string(lineno) + ": trailing characters");
  }
  out.n = static_cast<int>(out.data.size() / k);
  if (out.n < 1) throw ConfigError(path + ": no data rows");
  return out;
}

namespace {

Json index_set_to_json(const std::vector<int>& I) {
  Json a = Json::array();
  for (int v : I) a.push_back(v + 1);  // 1-based for humans
  return a;
}

}  // namespace

Json report_to_json(const TailReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["k_n"] = r.k_n;
  j["theta"] = r.theta;
  j["c_literal"] = r.c_literal;
  j["c_corrected"] = r.c_corrected;
  j["pairs"] = Json::array();
  for (const auto& p : r.pairs)
    j["pairs"].push_back({{"i", p.i + 1}, {"j", p.j + 1}, {"tau", p.tau}, {"rho", p.rho}, {"eta", p.eta}});
  j["subsets"] = Json::array();
  for (const auto& s : r.subsets) {
    Json e;
    e["index_set"] = index_set_to_json(s.index_set);
    e["q"] = s.q;
    e["active_set"] = index_set_to_json(s.active_set);
    e["minimizer"] = s.minimizer;
    e["mu"] = s.mu;
    e["eta"] = s.eta;
    e["eta_literal"] = s.eta_literal;
    e["pd_repaired"] = s.pd_repaired;
    e["trivariate_branch"] =
        s.trivariate_branch ? Json(std::string(1, *s.trivariate_branch)) : Json(nullptr);
    j["subsets"].push_back(e);
  }
  j["empirical_s"] = Json::array();
  for (const auto& row : r.empirical_s)
    j["empirical_s"].push_back({{"u", row.u}, {"x", row.x}, {"value", row.value}, {"count", row.count}});
  j["empirical_chi"] = Json::array();
  for (const auto& [u, chi] : r.empirical_chi)
    j["empirical_chi"].push_back({{"u", u}, {"chi", chi}});
  j["seed"] = r.seed;
  j["source"] = r.source;
  return j;
}

TailReport report_from_json(const Json& j) {
  TailReport r;
  r.n = j.at("n").get<long>();
  r.k = j.at("k").get<int>();
  r.k_n = j.at("k_n").get<int>();
  r.theta = j.at("theta").get<double>();
  r.c_literal = j.at("c_literal").get<double>();
  r.c_corrected = j.at("c_corrected").get<double>();
  for (const auto& p : j.at("pairs"))
    r.pairs.push_back({p.at("i").get<int>() - 1, p.at("j").get<int>() - 1,
                       p.at("tau").get<double>(), p.at("rho").get<double>(),
                       p.at("eta").get<double>()});
  for (const auto& e : j.at("subsets")) {
    SubsetEntry s;
    for (const auto& v : e.at("index_set")) s.index_set.push_back(v.get<int>() - 1);
    s.q = e.at("q").get<double>();
    for (const auto& v : e.at("active_set")) s.active_set.push_back(v.get<int>() - 1);
    s.minimizer = e.at("minimizer").get<std::vector<double>>();
    s.mu = e.at("mu").get<std::vector<double>>();
    s.eta = e.at("eta").get<double>();
    s.eta_literal = e.at("eta_literal").get<double>();
    s.pd_repaired = e.at("pd_repaired").get<bool>();
    if (!e.at("trivariate_branch").is_null())
      s.trivariate_branch = e.at("trivariate_branch").get<std::string>().at(0);
    r.subsets.push_back(std::move(s));
  }
  for (const auto& row : j.at("empirical_s"))
    r.empirical_s.push_back({row.at("u").get<double>(), row.at("x").get<std::vector<double>>(),
                             row.at("value").get<double>(), row.at("count").get<long>()});
  for (const auto& row : j.at("empirical_chi"))
    r.empirical_chi.emplace_back(row.at("u").get<double>(), row.at("chi").get<double>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.source = j.at("source").get<std::string>();
  return r;
}

void validate_report_json(const Json& j) {
  const auto need = [&](const char* key, bool ok) {
    if (!j.contains(key) || !ok)
      throw ConfigError(std::string("report: missing or ill-typed \"") + key + "\"");
  };
  need("n", j.contains("n") && j["n"].is_number_integer());
  need("k", j.contains("k") && j["k"].is_number_integer());
  need("k_n", j.contains("k_n") && j["k_n"].is_number_integer());
  need("theta", j.contains("theta") && j["theta"].is_number());
  need("c_literal", j.contains("c_literal") && j["c_literal"].is_number());
  need("c_corrected", j.contains("c_corrected") && j["c_corrected"].is_number());
  need("pairs", j.contains("pairs") && j["pairs"].is_array());
  need("subsets", j.contains("subsets") && j["subsets"].is_array());
  need("empirical_s", j.contains("empirical_s") && j["empirical_s"].is_array());
  need("empirical_chi", j.contains("empirical_chi") && j["empirical_chi"].is_array());
  need("seed", j.contains("seed") && j["seed"].is_number());
  need("source", j.contains("source") && j["source"].is_string());
  for (const auto& p : j["pairs"])
    for (const char* key : {"i", "j", "tau", "rho", "eta"})
      if (!p.contains(key)) throw ConfigError(std::string("report.pairs: missing \"") + key + "\"");
  for (const auto& s : j["subsets"])
    for (const char* key : {"index_set", "q", "active_set", "minimizer", "mu", "eta",
                            "eta_literal", "pd_repaired", "trivariate_branch"})
      if (!s.contains(key)) throw ConfigError(std::string("report.subsets: missing \"") + key + "\"");
}

int cmd_simulate(const Json& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const EllipticalModel model = model_from_config(cfg.at("model"));
  const long n = cfg.at("n").get<long>();
  if (n < 1 || n > 100000000) throw ConfigError("config.n: expected 1 <= n <= 1e8");
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::string path = cfg.at("out").get<std::string>();

  const SampleMatrix data = sample_elliptical(model, static_cast<int>(n), seed);
  write_csv(data, path);

  Json meta;
  meta["command"] = "simulate";
  meta["generated_at"] = iso_now();
  meta["config"] = cfg;
  meta["rows"] = data.n;
  meta["columns"] = data.k;
  meta["radial"] = model.radial.describe();
  std::ofstream mf(path + ".meta.json", std::ios::binary);
  if (!mf) throw ConfigError("cannot open sidecar " + path + ".meta.json");
  mf << meta.dump(2) << "\n";
  out << meta.dump(2) << "\n";
  return kExitOk;
}

int cmd_estimate(const Json& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const SampleMatrix data = read_csv(cfg.at("input").get<std::string>());

  TailReport r;
  r.n = data.n;
  r.k = data.k;
  r.seed = 0;
  r.source = data.model;

  const std::vector<double> col0 = data.column(0);
  int n_pos = 0;
  for (double v : col0)
    if (v > 0.0) ++n_pos;
  int kn = cfg.at("kn").get<int>();
  if (kn <= 0) kn = default_kn(n_pos);
  r.k_n = kn;
  r.theta = theta_hat(col0, kn);
  const CHat ch = c_hat(col0, kn, r.theta);
  r.c_literal = ch.literal;
  r.c_corrected = ch.corrected;

  for (int i = 0; i < data.k; ++i)
    for (int jj = i + 1; jj < data.k; ++jj) {
      PairEntry p;
      p.i = i;
      p.j = jj;
      p.tau = kendall_tau(data.column(i), data.column(jj));
      p.rho = rho_from_tau(p.tau);
      p.eta = eta_hat_bivariate(p.rho, r.theta);
      r.pairs.push_back(p);
    }

  Json sets = Json::array();
  if (cfg.contains("index_sets")) {
    sets = cfg.at("index_sets");
  } else if (data.k <= 3) {
    Json full = Json::array();
    for (int i = 1; i <= data.k; ++i) full.push_back(i);
    sets.push_back(full);
  }
  for (const auto& js : sets) {
    const std::vector<int> I = index_set_from_json(js, data.k, "config.index_sets");
    const PartialEstimate pe = eta_hat_partial(data, I, kn);
    SubsetEntry s;
    s.index_set = I;
    s.q = pe.q;
    s.active_set.reserve(pe.solution.active_set.size());
    for (int a : pe.solution.active_set) s.active_set.push_back(I[a]);
    s.minimizer = pe.solution.minimizer;
    s.mu = pe.solution.mu;
    s.eta = pe.eta;
    s.eta_literal = pe.eta_literal;
    s.pd_repaired = pe.pd_repaired;
    s.trivariate_branch = pe.trivariate_branch;
    r.subsets.push_back(std::move(s));
  }

  // Rank-based tables over the first pair.
  for (const auto& ju : cfg.at("u_levels")) {
    const double u = as_number(ju, "config.u_levels");
    const EmpiricalS joint = empirical_s(data, {0, 1}, {1.0, 1.0}, u);
    const EmpiricalS marg = empirical_s(data, {0}, {1.0}, u);
    r.empirical_chi.emplace_back(
        u, marg.count > 0 ? static_cast<double>(joint.count) / marg.count : 0.0);
    for (const auto& jx : cfg.at("x_table")) {
      std::vector<double> x;
      for (const auto& v : jx) x.push_back(as_number(v, "config.x_table"));
      if (x.size() != 2) throw ConfigError("config.x_table: rows must have 2 entries");
      const EmpiricalS e = empirical_s(data, {0, 1}, x, u);
      r.empirical_s.push_back({u, x, e.value, e.count});
    }
  }

  Json j;
  j["command"] = "estimate";
  j["generated_at"] = iso_now();
  j["config"] = cfg;
  j["report"] = report_to_json(r);
  validate_report_json(j["report"]);

  if (cfg.contains("out")) {
    std::ofstream f(cfg.at("out").get<std::string>(), std::ios::binary);
    if (!f) throw ConfigError("cannot open output file");
    f << j.dump(2) << "\n";
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_alpha(const Json& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const Matrix raw = correlation_from_json(cfg.at("correlation"), "config.correlation");
  const CorrelationMatrix sigma = CorrelationMatrix::validate(raw);
  const double theta = as_number(cfg.at("theta"), "config.theta");
  if (theta < 0.0) throw ConfigError("config.theta: must be >= 0");

  Json results = Json::array();
  for (const auto& js : cfg.at("index_sets")) {
    const std::vector<int> I = index_set_from_json(js, sigma.dim(), "config.index_sets");
    const AlphaSolution sol = solve_alpha(sigma, I);
    const PartialIndex pi = partial_index(sol, theta);
    Json e;
    e["index_set"] = index_set_to_json(I);
    e["q"] = sol.q;
    e["alpha"] = sol.alpha;
    e["K"] = index_set_to_json(sol.active_set);
    e["M"] = index_set_to_json(sol.inactive);
    e["minimizer"] = sol.minimizer;
    e["mu"] = sol.mu;
    e["eta"] = {{"adopted", pi.eta}, {"paper_literal", pi.eta_literal}};
    e["gamma"] = {{"adopted", pi.gamma}, {"paper_literal", pi.gamma_literal}};
    e["kkt_residual"] = kkt_check(sigma, I, sol);
    results.push_back(e);
  }

  Json j;
  j["command"] = "alpha";
  j["generated_at"] = iso_now();
  j["config"] = cfg;
  j["results"] = results;
  if (cfg.contains("out")) {
    std::ofstream f(cfg.at("out").get<std::string>(), std::ios::binary);
    if (!f) throw ConfigError("cannot open output file");
    f << j.dump(2) << "\n";
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_oracle(const Json& cfg, std::ostream& out, std::ostream& err) {
  const EllipticalModel model = model_from_config(cfg.at("model"));
  if (model.dim() < 2 || model.dim() > 3)
    throw ConfigError("oracle: model dimension must be 2 or 3");

  std::vector<int> I(model.dim());
  std::iota(I.begin(), I.end(), 0);
  if (cfg.contains("index_set"))
    I = index_set_from_json(cfg.at("index_set"), model.dim(), "config.index_set");
  if (I.size() < 2) throw ConfigError("config.index_set: need at least 2 indices");

  std::vector<double> u_grid;
  for (const auto& ju : cfg.at("u_grid")) u_grid.push_back(as_number(ju, "config.u_grid"));
  if (u_grid.empty()) throw ConfigError("config.u_grid: empty");

  const std::vector<double> ones(I.size(), 1.0);
  Json table = Json::array();
  std::vector<double> lnu, lnval;
  for (double u : u_grid) {
    Json row;
    row["u"] = u;
    double ls = 0.0;
    try {
      ls = s_tilde(model, I, ones, u);
    } catch (const QuadratureFailure& e) {
      throw QuadratureFailure("oracle: u=" + shortest(u) + ": " + e.what());
    } catch (const ConvergenceFailure& e) {
      throw ConvergenceFailure("oracle: u=" + shortest(u) + ": " + e.what());
    }
    row["ln_stilde"] = ls;
    lnu.push_back(std::log(u));
    lnval.push_back(ls);
    if (model.dim() == 2 && u >= 100.0) {
      const StildeExpansion se = stilde_expansion(model, u);
      row["ln_expansion"] = se.log_general;
      row["expansion_ratio"] = std::exp(ls - se.log_general);
      row["ln_kotz_closed"] = se.log_kotz_closed ? Json(*se.log_kotz_closed) : Json(nullptr);
    } else {
      row["ln_expansion"] = nullptr;
      row["expansion_ratio"] = nullptr;
      row["ln_kotz_closed"] = nullptr;
    }
    Json su = Json::array();
    for (const auto& jx : cfg.at("x_pairs")) {
      std::vector<double> x;
      for (const auto& v : jx) x.push_back(as_number(v, "config.x_pairs"));
      if (x.size() != I.size())
        throw ConfigError("config.x_pairs: entry length must match the index set");
      const double s = std::exp(s_tilde(model, I, x, u) - ls);
      su.push_back({{"x", x}, {"value", s}});
    }
    row["s_u"] = su;
    table.push_back(row);
  }

  Json j;
  j["command"] = "oracle";
  j["generated_at"] = iso_now();
  j["config"] = cfg;
  j["table"] = table;
  if (u_grid.size() >= 5 && std::log10(u_grid.back() / u_grid.front()) >= 4.0 - 1e-9) {
    const SlopeFit fit = rv_slope(model, I, u_grid);
    j["slope"] = {{"value", fit.slope}, {"intercept", fit.intercept},
                  {"max_residual", fit.max_residual}};
  } else {
    j["slope"] = nullptr;
    err << "oracle: grid too narrow for a regular-variation slope fit\n";
  }
  Json chi = Json::array();
  if (model.dim() == 2) {
    std::vector<double> levels;
    for (const auto& jl : cfg.at("levels")) levels.push_back(as_number(jl, "config.levels"));
    for (const auto& [u, v] : chi_curve(model, levels)) chi.push_back({{"u", u}, {"chi", v}});
  }
  j["chi"] = chi;

  if (cfg.contains("out")) {
    std::ofstream f(cfg.at("out").get<std::string>(), std::ios::binary);
    if (!f) throw ConfigError("cannot open output file");
    f << "u,ln_stilde,ln_expansion,expansion_ratio\n";
    for (const auto& row : table) {
      f << shortest(row.at("u").get<double>()) << ',' << shortest(row.at("ln_stilde").get<double>());
      if (row.at("ln_expansion").is_null()) f << ",,";
      else
        f << ',' << shortest(row.at("ln_expansion").get<double>()) << ','
          << shortest(row.at("expansion_ratio").get<double>());
      f << "\n";
    }
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const Json& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  const auto level = cfg.at("level").get<std::string>() == "full" ? accept::Level::Full
                                                                  : accept::Level::Quick;
  const auto results = accept::run_acceptance(level, out);
  for (const auto& r : results)
    if (!r.pass) return kExitVerifyFailed;
  return kExitOk;
}

int run_command(const std::string& command, const std::string& config_path,
                const Overrides& ov, std::ostream& out, std::ostream& err) {
  try {
    Json cfg = Json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open config " + config_path);
      try {
        cfg = Json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
    } else if (command != "verify") {
      throw ConfigError("--config is required for " + command);
    }
    cfg = resolve_config(command, std::move(cfg), ov);
    if (command == "simulate") return cmd_simulate(cfg, out, err);
    if (command == "estimate") return cmd_estimate(cfg, out, err);
    if (command == "alpha") return cmd_alpha(cfg, out, err);
    if (command == "oracle") return cmd_oracle(cfg, out, err);
    if (command == "verify") return cmd_verify(cfg, out, err);
    throw ConfigError("unknown command \"" + command + "\"");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EntryOutOfRange& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DiagonalNotUnit& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace taildep::cli

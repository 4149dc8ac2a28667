// vacantwalk: experiments on the vacant set of lazy/speedy random walks on
// regular graphs. Subcommands cover the phase-transition scan around
// t* = n ln d, exact chain quantities (mixing time, return sum R_v, first
// visit rate), Monte Carlo estimators with their exact oracles, the
// contraction identity, the P1-P4 property checks, and the gambler's ruin
// closed form.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vacant/chain.hpp"
#include "vacant/estimators.hpp"
#include "vacant/experiment.hpp"
#include "vacant/graph.hpp"
#include "vacant/parallel.hpp"
#include "vacant/properties.hpp"
#include "vacant/vacant_set.hpp"
#include "vacant/walk.hpp"

namespace {

using namespace vacant;

struct CommonOpts {
  std::string graph = "hypercube";
  int d = 10;
  std::int64_t n = 0;  // vertex count for random-regular
  double eps = 0.3;
  std::int64_t trials = 20;
  std::uint64_t seed = 1;
  double k_const = 1.0;
  std::string out;
  std::string svg;
  int parallel = 0;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--graph", o.graph, "graph family: hypercube | random-regular")
      ->check(CLI::IsMember({"hypercube", "random-regular"}));
  cmd->add_option("--d", o.d, "degree (hypercube dimension)");
  cmd->add_option("--n", o.n, "vertex count (random-regular only)");
  cmd->add_option("--eps", o.eps, "epsilon in t_{+-eps} = (1 +- eps) t*");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--seed", o.seed, "master seed; trial i uses stream (seed, i)");
  cmd->add_option("--k-const", o.k_const, "constant K in L = 2 K T ln n");
  cmd->add_option("--out", o.out, "output CSV path (default stdout)");
  cmd->add_option("--svg", o.svg, "SVG plot path (scan only)");
  cmd->add_option("--parallel", o.parallel, "worker threads, 0 = all cores");
  // the config file is handled before CLI11 parsing (see main); registered
  // here so it shows up in --help
  cmd->add_option("--config", o.config_path, "flat key=value config file; flags override");
}

Graph build_graph(const CommonOpts& o) {
  if (o.graph == "hypercube") return Graph::hypercube(o.d);
  if (o.n <= 0) throw std::invalid_argument("random-regular requires --n");
  return Graph::random_regular(o.n, o.d, o.seed);
}

KVMap common_kv(const std::string& sub, const CommonOpts& o) {
  KVMap kv;
  kv["subcommand"] = sub;
  kv["graph"] = o.graph;
  kv["d"] = std::to_string(o.d);
  if (o.graph == "random-regular") kv["n"] = std::to_string(o.n);
  kv["eps"] = format_double(o.eps);
  kv["trials"] = std::to_string(o.trials);
  kv["seed"] = std::to_string(o.seed);
  kv["k_const"] = format_double(o.k_const);
  return kv;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto k = xs.size();
  return k % 2 ? xs[k / 2] : (xs[k / 2 - 1] + xs[k / 2]) / 2.0;
}

/// Mixing time for the lazy walk on g: exact level-chain value for
/// hypercubes, spectral bound for explicit graphs.
std::int64_t mixing_time_for(const Graph& g) {
  if (g.kind() == GraphKind::hypercube) return mixing_time_exact(level_chain(g.dim()));
  return mixing_time_bound(spectral_gap(dense_chain(g)), static_cast<double>(g.vertex_count()));
}

std::vector<double> parse_multipliers(const std::string& csv) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(csv);
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad multiplier: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty multiplier list");
  return out;
}

std::vector<Vertex> parse_vertices(const std::string& csv) {
  std::vector<Vertex> out;
  std::string tok;
  std::istringstream in(csv);
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(static_cast<Vertex>(std::stoull(tok)));
  }
  return out;
}

// ---------------------------------------------------------------- scan ----

int run_scan(const CommonOpts& o, const std::string& multipliers_csv, const std::string& mode_name,
             Vertex start) {
  const auto multipliers = parse_multipliers(multipliers_csv);
  const WalkMode mode = mode_name == "lazy" ? WalkMode::lazy : WalkMode::speedy;
  const Graph g = build_graph(o);

  KVMap kv = common_kv("scan", o);
  kv["multipliers"] = multipliers_csv;
  kv["mode"] = mode_name;
  kv["start"] = std::to_string(start);

  std::vector<std::vector<VacantSnapshot>> rows(static_cast<std::size_t>(o.trials));
  parallel_trials(o.trials, o.parallel, [&](std::int64_t trial) {
    rows[static_cast<std::size_t>(trial)] = vacant_snapshot_run(
        g, o.eps, multipliers, mode, Rng(o.seed, static_cast<std::uint64_t>(trial)), start);
  });

  CsvWriter csv;
  csv.provenance("scan", kv);
  const double n = static_cast<double>(g.vertex_count());
  const double deg = static_cast<double>(g.regular_degree());
  csv.comment("t_star_ln=" + format_double(n * std::log(deg)));
  csv.comment("t_star_log2=" + format_double(n * std::log2(deg)));
  csv.header({"d", "n", "multiplier", "trial", "vacant_size", "L1", "num_components",
              "bad_count", "seed"});
  for (std::int64_t trial = 0; trial < o.trials; ++trial) {
    for (const auto& snap : rows[static_cast<std::size_t>(trial)]) {
      csv.cell(g.regular_degree());
      csv.cell(g.vertex_count());
      csv.cell(snap.multiplier);
      csv.cell(trial);
      csv.cell(snap.vacant_size);
      csv.cell(snap.census.largest);
      csv.cell(snap.census.components);
      csv.cell(snap.bad_count);
      csv.cell(o.seed);
      csv.end_row();
    }
  }
  csv.write(o.out);

  if (!o.svg.empty()) {
    SvgSeries med{"median L1", {}};
    for (std::size_t mi = 0; mi < multipliers.size(); ++mi) {
      std::vector<double> l1s;
      for (const auto& r : rows) l1s.push_back(static_cast<double>(r[mi].census.largest));
      med.points.emplace_back(multipliers[mi], median(std::move(l1s)));
    }
    std::ofstream svg(o.svg, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open svg file: " + o.svg);
    svg << render_svg("largest vacant component vs t/t*", "t / t*", "median L1", {med});
  }
  return 0;
}

// ------------------------------------------------------------------ rv ----

int run_rv(const CommonOpts& o) {
  const Graph g = build_graph(o);
  const double n = static_cast<double>(g.vertex_count());
  std::int64_t T = 0;
  double r_v = 0;
  std::string method;
  if (g.kind() == GraphKind::hypercube) {
    const auto lc = level_chain(g.dim());
    T = mixing_time_exact(lc);
    r_v = return_sum(lc, T);
    method = "level-exact";
  } else {
    const auto chain = dense_chain(g);
    T = mixing_time_bound(spectral_gap(chain), n);
    r_v = return_sum(chain, 0, T);
    method = "dense-bound";
  }
  const RateBand p = first_visit_rate(r_v, n, static_cast<double>(T));
  KVMap kv = common_kv("rv", o);
  kv["method"] = method;
  CsvWriter csv;
  csv.provenance("rv", kv);
  csv.header({"graph", "d", "n", "T", "R_v", "p_v", "p_v_halfwidth", "rv_ref", "seed"});
  csv.cell(o.graph);
  csv.cell(g.regular_degree());
  csv.cell(g.vertex_count());
  csv.cell(T);
  csv.cell(r_v);
  csv.cell(p.value);
  csv.cell(p.halfwidth);
  csv.cell(2.0 + 2.0 / g.regular_degree());
  csv.cell(o.seed);
  csv.end_row();
  csv.write(o.out);
  return 0;
}

// -------------------------------------------------------------- mixing ----

int run_mixing(const CommonOpts& o) {
  const Graph g = build_graph(o);
  const double n = static_cast<double>(g.vertex_count());
  double gap = 0;
  std::string t_exact;
  if (g.kind() == GraphKind::hypercube) {
    const auto lc = level_chain(g.dim());
    t_exact = std::to_string(mixing_time_exact(lc));
    gap = 1.0 / g.dim();  // measured level-chain gap, matches check_P1
  } else {
    const auto chain = dense_chain(g);
    gap = spectral_gap(chain);
    if (g.vertex_count() <= 512) t_exact = std::to_string(mixing_time_exact(chain));
  }
  const std::int64_t t_bound = mixing_time_bound(gap, n);
  KVMap kv = common_kv("mixing", o);
  CsvWriter csv;
  csv.provenance("mixing", kv);
  csv.header({"graph", "d", "n", "gap", "T_exact", "T_bound"});
  csv.cell(o.graph);
  csv.cell(g.regular_degree());
  csv.cell(g.vertex_count());
  csv.cell(gap);
  csv.cell(t_exact);
  csv.cell(t_bound);
  csv.end_row();
  csv.write(o.out);
  return 0;
}

// ----------------------------------------------------------- firstvisit ----

int run_firstvisit(const CommonOpts& o, std::int64_t target, Vertex start, std::int64_t tmax) {
  const Graph g = build_graph(o);
  const std::int64_t n = g.vertex_count();
  const auto v = target < 0 ? static_cast<Vertex>(n - 1) : static_cast<Vertex>(target);
  const std::int64_t T = mixing_time_for(g);
  if (tmax <= 0) tmax = 4 * n;
  const auto curve =
      survival_curve(g, v, start, T, tmax, o.trials, o.seed, o.k_const, o.parallel);
  double r_v = 0;
  if (g.kind() == GraphKind::hypercube)
    r_v = return_sum(level_chain(g.dim()), T);
  else
    r_v = return_sum(dense_chain(g), v, T);
  const RateBand p = first_visit_rate(r_v, static_cast<double>(n), static_cast<double>(T));
  const double predicted = -std::log1p(-p.value);

  KVMap kv = common_kv("firstvisit", o);
  kv["target"] = std::to_string(v);
  kv["start"] = std::to_string(start);
  kv["tmax"] = std::to_string(tmax);
  CsvWriter csv;
  csv.provenance("firstvisit", kv);
  csv.comment("T=" + std::to_string(T));
  csv.comment("R_v=" + format_double(r_v));
  csv.comment("fit_from=" + std::to_string(curve.fit_from));
  csv.comment("fitted_rate=" + format_double(curve.fitted_rate));
  csv.comment("predicted_rate=" + format_double(predicted));
  csv.comment("relative_difference=" +
              format_double(std::abs(curve.fitted_rate - predicted) / predicted));
  csv.header({"t", "survivors", "survival", "se"});
  for (std::int64_t t = T; t <= tmax; t += std::max<std::int64_t>(1, (tmax - T) / 512)) {
    const double s = curve.survival(t);
    csv.cell(t);
    csv.cell(curve.survivors[static_cast<std::size_t>(t - T)]);
    csv.cell(s);
    csv.cell(std::sqrt(s * (1 - s) / static_cast<double>(o.trials)));
    csv.end_row();
  }
  csv.write(o.out);
  return 0;
}

// ---------------------------------------------------------- whichvertex ----

int run_whichvertex(const CommonOpts& o, const std::string& targets_csv, Vertex start,
                    std::int64_t horizon, std::int64_t min_hits) {
  const auto targets = parse_vertices(targets_csv);
  if (targets.size() < 2) throw std::invalid_argument("whichvertex needs --targets with >= 2 ids");
  const Graph g = build_graph(o);
  const std::int64_t T = mixing_time_for(g);
  const auto freq = which_vertex_freq(g, targets, start, T, o.trials, o.seed, horizon, o.k_const,
                                      min_hits, o.parallel);
  KVMap kv = common_kv("whichvertex", o);
  kv["targets"] = targets_csv;
  kv["start"] = std::to_string(start);
  CsvWriter csv;
  csv.provenance("whichvertex", kv);
  csv.comment("T=" + std::to_string(T));
  csv.comment("conditioned=" + std::to_string(freq.conditioned));
  csv.comment("censored=" + std::to_string(freq.censored));
  csv.comment("xi=" + format_double(freq.xi));
  csv.header({"vertex", "hits", "freq", "se"});
  for (std::size_t i = 0; i < targets.size(); ++i) {
    csv.cell(static_cast<std::int64_t>(freq.targets[i]));
    csv.cell(freq.hits[i]);
    csv.cell(freq.freq[i]);
    csv.cell(freq.se[i]);
    csv.end_row();
  }
  csv.write(o.out);
  return 0;
}

// ------------------------------------------------------------- contract ----

int run_contract(const CommonOpts& o, std::int64_t set_size, std::int64_t t_steps) {
  const Graph g = build_graph(o);
  const std::int64_t n = g.vertex_count();
  if (set_size < 1 || set_size >= n) throw std::invalid_argument("contract: bad --set-size");
  Rng rng(o.seed, 0xC0u);
  const Vertex start = 0;
  VertexSet S(n);
  while (S.size() < set_size) {
    const auto v = static_cast<Vertex>(1 + rng.below(static_cast<std::uint64_t>(n - 1)));
    S.insert(v);
  }
  const std::int64_t burn_in = mixing_time_for(g);
  if (t_steps <= 0) t_steps = burn_in + 4 * n;

  const auto exact = contraction_check(g, S, start, burn_in, t_steps, ContractionMode::start_specific);
  const auto stat = contraction_check(g, S, start, burn_in, t_steps, ContractionMode::stationarized);
  const double band = 10.0 * static_cast<double>(set_size) /
                      (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n));

  KVMap kv = common_kv("contract", o);
  kv["set_size"] = std::to_string(set_size);
  kv["t"] = std::to_string(t_steps);
  kv["burn_in"] = std::to_string(burn_in);
  CsvWriter csv;
  csv.provenance("contract", kv);
  csv.header({"mode", "n", "d", "set_size", "burn_in", "t", "prob_full", "prob_contracted",
              "difference", "band"});
  auto emit = [&](const char* mode, const ContractionCheck& c, double b) {
    csv.cell(mode);
    csv.cell(n);
    csv.cell(g.regular_degree());
    csv.cell(set_size);
    csv.cell(burn_in);
    csv.cell(t_steps);
    csv.cell(c.prob_full);
    csv.cell(c.prob_contracted);
    csv.cell(c.difference);
    csv.cell(b);
    csv.end_row();
  };
  emit("start-specific", exact, 1e-10);
  emit("stationarized", stat, band);
  csv.write(o.out);
  std::printf("start-specific difference %s (tolerance 1e-10)\n",
              format_double(exact.difference).c_str());
  std::printf("stationarized difference %s (band %s)\n", format_double(stat.difference).c_str(),
              format_double(band).c_str());
  return 0;
}

// ----------------------------------------------------------- properties ----

int run_properties(const CommonOpts& o, double rho1, double rho2, const std::string& p2_exp,
                   std::int64_t p3_samples, std::int64_t p4_samples) {
  const Graph g = build_graph(o);
  PropertyCheckOptions opt;
  opt.rho1 = rho1;
  opt.rho2 = rho2;
  opt.p2_exponent = p2_exp == "1/4" ? P2Exponent::quarter : P2Exponent::fifth;
  opt.p3_samples = p3_samples;
  opt.p4_samples = p4_samples;
  opt.seed = o.seed;
  const auto results = check_all_properties(g, o.eps, opt);

  KVMap kv = common_kv("properties", o);
  kv["rho1"] = format_double(rho1);
  kv["rho2"] = format_double(rho2);
  kv["p2_exponent"] = p2_exp;
  CsvWriter csv;
  csv.provenance("properties", kv);
  csv.header({"property", "verdict", "evidence", "measured", "witness"});
  for (const auto& r : results) {
    std::string measured;
    for (const auto& [k, v] : r.measured) {
      if (!measured.empty()) measured += ';';
      measured += k + "=" + format_double(v);
    }
    std::string witness;
    if (r.witness) {
      for (std::size_t i = 0; i < r.witness->vertices.size() && i < 16; ++i) {
        if (i) witness += ' ';
        witness += std::to_string(r.witness->vertices[i]);
      }
      if (!r.witness->detail.empty()) witness += (witness.empty() ? "" : " ") + r.witness->detail;
    }
    csv.cell(r.name);
    csv.cell(to_string(r.verdict));
    csv.cell(r.evidence);
    csv.cell(measured);
    csv.cell(witness);
    csv.end_row();
    std::printf("%s %s %s\n", r.name.c_str(), to_string(r.verdict), measured.c_str());
  }
  csv.write(o.out);
  return 0;
}

// ----------------------------------------------------------------- ruin ----

int run_ruin(const CommonOpts& o, double p, double q, int ell, int j) {
  const double pi_j = gambler_ruin(p, q, ell, j);
  const double xi = q / p;
  KVMap kv = common_kv("ruin", o);
  kv["p"] = format_double(p);
  kv["q"] = format_double(q);
  kv["ell"] = std::to_string(ell);
  kv["j"] = std::to_string(j);
  CsvWriter csv;
  csv.provenance("ruin", kv);
  csv.header({"p", "q", "ell", "j", "xi", "pi_j", "bound_2xi_j"});
  csv.cell(p);
  csv.cell(q);
  csv.cell(ell);
  csv.cell(j);
  csv.cell(xi);
  csv.cell(pi_j);
  csv.cell(2.0 * std::pow(xi, j));
  csv.end_row();
  csv.write(o.out);
  std::printf("pi_%d = %s\n", j, format_double(pi_j).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vacant-set experiments for lazy random walks on regular graphs"};
  app.require_subcommand(1);

  CommonOpts scan_o, rv_o, mix_o, fv_o, wv_o, ct_o, pr_o, ruin_o;

  auto* scan = app.add_subcommand("scan", "sweep t/t* multipliers, census the vacant components");
  add_common(scan, scan_o);
  std::string multipliers, scan_mode = "speedy";
  std::int64_t scan_start = 0;
  scan->add_option("--multipliers", multipliers, "comma-separated t/t* multipliers, ascending")
      ->required();
  scan->add_option("--mode", scan_mode, "snapshot clock: speedy | lazy")
      ->check(CLI::IsMember({"speedy", "lazy"}));
  scan->add_option("--start", scan_start, "start vertex");

  auto* rv = app.add_subcommand("rv", "mixing time T, return sum R_v, first-visit rate p_v");
  add_common(rv, rv_o);

  auto* mixing = app.add_subcommand("mixing", "spectral gap and mixing time");
  add_common(mixing, mix_o);

  auto* firstvisit = app.add_subcommand("firstvisit", "empirical survival of a target vertex");
  add_common(firstvisit, fv_o);
  std::int64_t fv_target = -1, fv_tmax = 0, fv_start = 0;
  firstvisit->add_option("--target", fv_target, "target vertex (default n-1)");
  firstvisit->add_option("--start", fv_start, "start vertex");
  firstvisit->add_option("--tmax", fv_tmax, "largest t (default 4n)");

  auto* whichvertex = app.add_subcommand("whichvertex", "first-hit split over a target set");
  add_common(whichvertex, wv_o);
  std::string wv_targets;
  std::int64_t wv_start = 0, wv_horizon = -1, wv_min_hits = 100;
  whichvertex->add_option("--targets", wv_targets, "comma-separated target vertices")->required();
  whichvertex->add_option("--start", wv_start, "start vertex");
  whichvertex->add_option("--horizon", wv_horizon, "censoring horizon in lazy steps (default 4n)");
  whichvertex->add_option("--min-hits", wv_min_hits, "minimum conditioned hits");

  auto* contract_cmd = app.add_subcommand("contract", "set avoidance vs contracted-vertex avoidance");
  ct_o.graph = "random-regular";
  ct_o.d = 3;
  ct_o.n = 32;
  add_common(contract_cmd, ct_o);
  std::int64_t ct_set_size = 3, ct_t = 0;
  contract_cmd->add_option("--set-size", ct_set_size, "size of the contracted set");
  contract_cmd->add_option("--t", ct_t, "avoidance window end (default burn_in + 4n)");

  auto* properties = app.add_subcommand("properties", "check P1..P4");
  add_common(properties, pr_o);
  double pr_rho1 = 1.0, pr_rho2 = 1.0;
  std::string pr_p2_exp = "1/5";
  std::int64_t pr_p3_samples = 20000, pr_p4_samples = 10000;
  properties->add_option("--rho1", pr_rho1, "P1 exponent");
  properties->add_option("--rho2", pr_rho2, "P3 constant");
  properties->add_option("--p2-exponent", pr_p2_exp, "P2 upper window exponent: 1/5 | 1/4")
      ->check(CLI::IsMember({"1/5", "1/4"}));
  properties->add_option("--p3-samples", pr_p3_samples, "P3 sample budget (large graphs)");
  properties->add_option("--p4-samples", pr_p4_samples, "P4 sampled sets");

  auto* ruin = app.add_subcommand("ruin", "gambler's ruin absorption probability");
  add_common(ruin, ruin_o);
  double ruin_p = 2.0 / 3.0, ruin_q = 1.0 / 3.0;
  int ruin_ell = 3, ruin_j = 1;
  ruin->add_option("--p", ruin_p, "right-step probability");
  ruin->add_option("--q", ruin_q, "left-step probability");
  ruin->add_option("--ell", ruin_ell, "absorbing barrier");
  ruin->add_option("--j", ruin_j, "start position");

  // Apply a key=value config file, if any, by injecting flags that were not
  // given on the command line; explicit flags always win.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string config_path;
    std::vector<std::string> cleaned;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_path = args[++i];
      } else if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
      } else {
        cleaned.push_back(args[i]);
      }
    }
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_config_file(config_path)) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : cleaned)
          if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (!present) {
          cleaned.push_back(flag);
          cleaned.push_back(value);
        }
      }
    }
    args = std::move(cleaned);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*scan)
      return run_scan(scan_o, multipliers, scan_mode, static_cast<Vertex>(scan_start));
    if (*rv) return run_rv(rv_o);
    if (*mixing) return run_mixing(mix_o);
    if (*firstvisit)
      return run_firstvisit(fv_o, fv_target, static_cast<Vertex>(fv_start), fv_tmax);
    if (*whichvertex)
      return run_whichvertex(wv_o, wv_targets, static_cast<Vertex>(wv_start), wv_horizon,
                             wv_min_hits);
    if (*contract_cmd) return run_contract(ct_o, ct_set_size, ct_t);
    if (*properties)
      return run_properties(pr_o, pr_rho1, pr_rho2, pr_p2_exp, pr_p3_samples, pr_p4_samples);
    if (*ruin) return run_ruin(ruin_o, ruin_p, ruin_q, ruin_ell, ruin_j);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

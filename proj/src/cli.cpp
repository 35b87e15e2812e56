#include "fiscale/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fiscale/asymptotics.hpp"
#include "fiscale/distribution.hpp"
#include "fiscale/errors.hpp"
#include "fiscale/mestimate.hpp"
#include "fiscale/report.hpp"
#include "fiscale/score.hpp"
#include "fiscale/variational.hpp"

namespace fiscale::cli {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

QuadratureConfig quad_config(const json& params) {
  QuadratureConfig cfg;
  cfg.abs_tol = params.value("abs_tol", cfg.abs_tol);
  cfg.rel_tol = params.value("rel_tol", cfg.rel_tol);
  cfg.tail_prob = params.value("tail_prob", cfg.tail_prob);
  cfg.max_subdivisions = params.value("max_subdivisions", cfg.max_subdivisions);
  return cfg;
}

BasisKind parse_kind(const std::string& kind) {
  if (kind == "linear") return BasisKind::linear;
  if (kind == "log") return BasisKind::log;
  if (kind == "mixed") return BasisKind::mixed;
  throw ValidationError("unknown basis kind '" + kind + "'");
}

// score spec: lambda | chi2 | huber(k) | bumps:kind,c,w,coeff[,branch];...
ScaleScore parse_score(const std::string& spec, const Distribution& ref,
                       const QuadratureConfig& cfg) {
  if (spec == "lambda") return lambda_score(ref);
  if (spec == "chi2") return chi2_score();
  if (spec.rfind("huber(", 0) == 0 && spec.back() == ')') {
    const double k = std::stod(spec.substr(6, spec.size() - 7));
    return huber_score(k, ref, cfg);
  }
  if (spec.rfind("bumps:", 0) == 0) {
    std::vector<Bump> bumps;
    std::stringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, ';')) {
      std::stringstream fields(item);
      std::string f;
      std::vector<std::string> parts;
      while (std::getline(fields, f, ',')) parts.push_back(f);
      if (parts.size() < 4) throw ValidationError("bump spec needs kind,center,half_width,coeff");
      Bump b;
      if (parts[0] == "linear")
        b.kind = BumpKind::linear;
      else if (parts[0] == "log")
        b.kind = BumpKind::log;
      else
        throw ValidationError("bump kind must be linear or log");
      b.center = std::stod(parts[1]);
      b.half_width = std::stod(parts[2]);
      b.coeff = std::stod(parts[3]);
      if (parts.size() > 4) b.branch = std::stoi(parts[4]);
      bumps.push_back(b);
    }
    if (bumps.empty()) throw ValidationError("bump spec is empty");
    return bump_score(TestFunction(std::move(bumps)), ref, cfg, spec);
  }
  throw ValidationError("unknown score '" + spec + "'");
}

Eigen::VectorXd read_samples(const std::string& path, int csv_col) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);

    std::string field = line;
    if (csv_col > 0) {
      std::stringstream ss(line);
      std::string cell;
      int col = 0;
      field.clear();
      while (std::getline(ss, cell, ',')) {
        if (++col == csv_col) {
          field = cell;
          break;
        }
      }
      if (field.empty()) continue;  // short row or header
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      values.push_back(v);
    } catch (const std::exception&) {
      if (csv_col > 0 && lineno == 1) continue;  // CSV header row
      throw ValidationError("input line " + std::to_string(lineno) + " is not a number");
    }
  }
  if (values.empty()) throw ValidationError("input file holds no samples");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// --- command execution from canonical params; shared with verify ---

json execute_info(const json& params) {
  const QuadratureConfig cfg = quad_config(params);
  const Distribution d = parse_distribution(params.at("dist").get<std::string>());
  const std::string method = params.at("method").get<std::string>();
  json results;

  if (method == "closed") {
    results["info"] = to_json(fisher_closed(d, cfg));
    if (results["info"]["finite"].get<bool>())
      results["value"] = results["info"]["value"];
    else
      results["value"] = nullptr;
  } else if (method == "variational") {
    const BasisKind kind = parse_kind(params.at("kind").get<std::string>());
    const double reg_tol = params.at("reg_tol").get<double>();
    if (params.contains("sizes")) {
      const auto sizes = params.at("sizes").get<std::vector<int>>();
      const ScanResult scan = convergence_scan(d, kind, sizes, reg_tol, cfg);
      results["scan"] = to_json(scan);
    } else {
      const int m = params.at("m").get<int>();
      const Basis basis = build_basis(kind, m, d);
      const VariationalEstimate est = fisher_variational(d, basis, reg_tol, cfg);
      results["estimate"] = to_json(est);
      results["value"] = est.value;
    }
  } else if (method == "empirical") {
    const BasisKind kind = parse_kind(params.at("kind").get<std::string>());
    const double reg_tol = params.at("reg_tol").get<double>();
    const int m = params.at("m").get<int>();
    const Eigen::VectorXd xs =
        read_samples(params.at("input").get<std::string>(), params.value("csv_col", 0));
    const Basis basis = build_basis(kind, m, d);
    const VariationalEstimate est = fisher_empirical(xs, basis, reg_tol);
    results["estimate"] = to_json(est);
    results["value"] = est.value;
    results["n"] = xs.size();
  } else {
    throw ValidationError("unknown method '" + method + "'");
  }

  if (params.contains("sigma")) {
    const double sigma = params.at("sigma").get<double>();
    results["fisher_scale"] = to_json(fisher_scale(d, sigma, cfg));
  }
  return results;
}

json execute_estimate(const json& params) {
  const QuadratureConfig cfg = quad_config(params);
  const Distribution ref = parse_distribution(params.at("dist").get<std::string>());
  const ScaleScore score = parse_score(params.at("score").get<std::string>(), ref, cfg);
  const Eigen::VectorXd xs =
      read_samples(params.at("input").get<std::string>(), params.value("csv_col", 0));

  const MEstimate est = m_estimate(xs, score);
  json results;
  results["S"] = est.scale;
  results["roots_found"] = est.roots_found;
  results["n"] = xs.size();

  const AsymVariance v1 = asym_variance(score, ref, cfg);
  results["v1"] = to_json(v1.value);
  results["v1_degenerate"] = v1.degenerate;
  const ExtReal info = fisher_closed(ref, cfg);
  if (info.finite() && info.value() > 0.0 && !v1.degenerate) {
    results["efficiency"] = v1.value.finite() ? 1.0 / (info.value() * v1.value.value()) : 0.0;
  } else {
    results["efficiency"] = nullptr;
  }
  return results;
}

json execute_simulate(const json& params) {
  const QuadratureConfig cfg = quad_config(params);
  const Distribution d = parse_distribution(params.at("dist").get<std::string>());
  const ScaleScore score = parse_score(params.at("score").get<std::string>(), d, cfg);

  const McReport rep = mc_variance(d, score, params.at("sigma").get<double>(),
                                   params.at("n").get<std::int64_t>(), params.at("reps").get<int>(),
                                   params.at("seed").get<std::uint64_t>(), cfg);
  json results;
  results["mc"] = to_json(rep);

  if (params.contains("bound_scores")) {
    std::vector<ScaleScore> scores;
    for (const auto& s : params.at("bound_scores"))
      scores.push_back(parse_score(s.get<std::string>(), d, cfg));
    json rows = json::array();
    for (const auto& row : bound_report(d, scores, cfg)) rows.push_back(to_json(row));
    results["bound"] = rows;
  }
  return results;
}

json execute_lan(const json& params) {
  const QuadratureConfig cfg = quad_config(params);
  const Distribution d = parse_distribution(params.at("dist").get<std::string>());
  const McReport rep = lan_sample(d, params.at("sigma").get<double>(), params.at("h").get<double>(),
                                  params.at("n").get<std::int64_t>(), params.at("reps").get<int>(),
                                  params.at("seed").get<std::uint64_t>(), cfg);
  return json{{"lan", to_json(rep)}};
}

json execute_l2check(const json& params) {
  const QuadratureConfig cfg = quad_config(params);
  const Distribution d = parse_distribution(params.at("dist").get<std::string>());
  const double sigma = params.at("sigma").get<double>();
  const auto ts = params.at("t").get<std::vector<double>>();
  if (ts.empty()) throw ValidationError("l2check: need at least one t");

  json results;
  json r_values = json::array();
  std::vector<double> rs;
  for (double t : ts) {
    const double r = l2_remainder(d, sigma, t, cfg);
    rs.push_back(r);
    r_values.push_back(json{{"t", t}, {"r", r}});
  }
  results["remainders"] = r_values;

  // r should shrink along decreasing |t|
  std::vector<std::size_t> order(ts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(ts[a]) > std::abs(ts[b]); });
  bool decreasing = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (rs[order[i]] >= rs[order[i - 1]]) decreasing = false;
  results["decreasing"] = decreasing;
  return results;
}

json dispatch(const std::string& command, const json& params) {
  if (command == "info") return execute_info(params);
  if (command == "estimate") return execute_estimate(params);
  if (command == "simulate") return execute_simulate(params);
  if (command == "lan") return execute_lan(params);
  if (command == "l2check") return execute_l2check(params);
  throw ValidationError("unknown command '" + command + "'");
}

// --- output ---

void csv_emit(const std::string& prefix, const json& j, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      csv_emit(prefix.empty() ? key : prefix + "." + key, value, os);
  } else if (j.is_array()) {
    int idx = 0;
    for (const auto& value : j) csv_emit(prefix + "[" + std::to_string(idx++) + "]", value, os);
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

void write_report(const json& report, const std::string& output, const std::string& format) {
  std::ostringstream body;
  if (format == "json") {
    body << report.dump(2) << "\n";
  } else if (format == "csv") {
    csv_emit("", report, body);
  } else {
    throw ValidationError("unknown format '" + format + "'");
  }
  if (output.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + output + "'");
    out << body.str();
  }
}

int run_verify(const std::string& path, const std::string& output, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open report '" + path + "'");
  json recorded;
  in >> recorded;
  if (recorded.value("schema", 0) != 1) throw ValidationError("unsupported report schema");

  const json fresh = dispatch(recorded.at("command").get<std::string>(), recorded.at("params"));
  const bool match = fresh == recorded.at("results");

  json report;
  report["schema"] = 1;
  report["tool"] = "fiscale";
  report["version"] = kToolVersion;
  report["command"] = "verify";
  report["params"] = json{{"file", path}};
  report["results"] = json{{"match", match}};
  write_report(report, output, format);
  if (!match) {
    std::cerr << "verify: recomputed results differ from the recorded report\n";
    return 3;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Fisher information of scale: variational and closed-form routes, "
               "M-estimation, and asymptotic checks"};
  app.require_subcommand(0, 1);
  app.set_help_flag("--help", "print help");  // keep -h free for the local parameter

  std::string output, format = "json", verify_path;
  app.add_option("--output", output, "write the report to a file instead of stdout");
  app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--verify", verify_path, "re-ingest a report and recompute its results");

  // shared numeric options, attached per subcommand
  struct Common {
    double abs_tol = 1e-10, rel_tol = 1e-9, tail_prob = 1e-12;
    int max_subdivisions = 4000;
  };
  auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->set_help_flag("--help", "print help");
    cmd->fallthrough();  // --output / --format stay top-level
    cmd->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
    cmd->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
    cmd->add_option("--tail-prob", c.tail_prob, "truncated mass per tail");
    cmd->add_option("--max-subdivisions", c.max_subdivisions, "quadrature panel budget");
  };
  auto put_common = [](json& params, const Common& c) {
    params["abs_tol"] = c.abs_tol;
    params["rel_tol"] = c.rel_tol;
    params["tail_prob"] = c.tail_prob;
    params["max_subdivisions"] = c.max_subdivisions;
  };

  // info
  auto* info = app.add_subcommand("info", "Fisher information of scale of a distribution");
  std::string info_dist, info_method = "closed", info_kind = "linear", info_input;
  int info_m = 16, info_csv_col = 0;
  double info_reg_tol = 1e-12;
  std::vector<int> info_sizes;
  std::optional<double> info_sigma;
  Common info_common;
  info->add_option("--dist", info_dist, "distribution spec")->required();
  info->add_option("--method", info_method, "closed|variational|empirical")
      ->check(CLI::IsMember({"closed", "variational", "empirical"}));
  info->add_option("--kind", info_kind, "basis kind: linear|log|mixed")
      ->check(CLI::IsMember({"linear", "log", "mixed"}));
  info->add_option("--m", info_m, "basis size");
  info->add_option("--sizes", info_sizes, "convergence scan sizes (variational)")->delimiter(',');
  info->add_option("--reg-tol", info_reg_tol, "pseudo-inverse eigenvalue cutoff");
  info->add_option("--sigma", info_sigma, "also report fisher_scale at this sigma");
  info->add_option("--input", info_input, "sample file (empirical method)");
  info->add_option("--csv-col", info_csv_col, "1-based CSV column of the input");
  add_common(info, info_common);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "M-estimate of scale from a sample file");
  std::string est_input, est_score = "chi2", est_dist = "normal";
  int est_csv_col = 0;
  Common est_common;
  estimate->add_option("--input", est_input, "sample file, one value per line")->required();
  estimate->add_option("--csv-col", est_csv_col, "1-based CSV column of the input");
  estimate->add_option("--score", est_score, "lambda|chi2|huber(k)|bumps:...");
  estimate->add_option("--dist", est_dist, "reference distribution for calibration/efficiency");
  add_common(estimate, est_common);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the asymptotic variance");
  std::string sim_dist, sim_score = "chi2";
  std::vector<std::string> sim_bound_scores;
  double sim_sigma = 1.0;
  std::int64_t sim_n = 2000;
  int sim_reps = 1000;
  std::uint64_t sim_seed = 1;
  Common sim_common;
  simulate->add_option("--dist", sim_dist, "distribution spec")->required();
  simulate->add_option("--score", sim_score, "score spec");
  simulate->add_option("--scores", sim_bound_scores, "scores for the bound table")->delimiter(';');
  simulate->add_option("--sigma", sim_sigma, "true scale");
  simulate->add_option("--n", sim_n, "sample size per replicate");
  simulate->add_option("--reps", sim_reps, "replicates");
  simulate->add_option("--seed", sim_seed, "master seed");
  add_common(simulate, sim_common);

  // lan
  auto* lan = app.add_subcommand("lan", "log-likelihood-ratio expansion experiment");
  std::string lan_dist;
  double lan_sigma = 1.0, lan_h = 1.0;
  std::int64_t lan_n = 5000;
  int lan_reps = 1000;
  std::uint64_t lan_seed = 1;
  Common lan_common;
  lan->add_option("--dist", lan_dist, "distribution spec")->required();
  lan->add_option("--sigma", lan_sigma, "true scale");
  lan->add_option("--h", lan_h, "local parameter");
  lan->add_option("--n", lan_n, "sample size per replicate");
  lan->add_option("--reps", lan_reps, "replicates");
  lan->add_option("--seed", lan_seed, "master seed");
  add_common(lan, lan_common);

  // l2check
  auto* l2check = app.add_subcommand("l2check", "L2-differentiability remainder scan");
  std::string l2_dist;
  double l2_sigma = 1.0;
  std::vector<double> l2_t{0.04, 0.02, 0.01};
  Common l2_common;
  l2check->add_option("--dist", l2_dist, "distribution spec")->required();
  l2check->add_option("--sigma", l2_sigma, "scale at which to expand");
  l2check->add_option("--t", l2_t, "step sizes")->delimiter(',');
  add_common(l2check, l2_common);

  std::vector<const char*> argv;
  argv.push_back("fiscale");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (!verify_path.empty()) return run_verify(verify_path, output, format);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }

    std::string command;
    json params;
    if (info->parsed()) {
      command = "info";
      params["dist"] = info_dist;
      params["method"] = info_method;
      if (info_method != "closed") {
        params["kind"] = info_kind;
        params["reg_tol"] = info_reg_tol;
        if (!info_sizes.empty())
          params["sizes"] = info_sizes;
        else
          params["m"] = info_m;
      }
      if (info_method == "empirical") {
        if (info_input.empty()) throw ValidationError("empirical method needs --input");
        params["input"] = info_input;
        params["csv_col"] = info_csv_col;
        if (!info_sizes.empty()) throw ValidationError("--sizes applies to the variational method");
        params["m"] = info_m;
      }
      if (info_sigma) params["sigma"] = *info_sigma;
      put_common(params, info_common);
    } else if (estimate->parsed()) {
      command = "estimate";
      params["input"] = est_input;
      params["csv_col"] = est_csv_col;
      params["score"] = est_score;
      params["dist"] = est_dist;
      put_common(params, est_common);
    } else if (simulate->parsed()) {
      command = "simulate";
      params["dist"] = sim_dist;
      params["score"] = sim_score;
      if (!sim_bound_scores.empty()) params["bound_scores"] = sim_bound_scores;
      params["sigma"] = sim_sigma;
      params["n"] = sim_n;
      params["reps"] = sim_reps;
      params["seed"] = sim_seed;
      put_common(params, sim_common);
    } else if (lan->parsed()) {
      command = "lan";
      params["dist"] = lan_dist;
      params["sigma"] = lan_sigma;
      params["h"] = lan_h;
      params["n"] = lan_n;
      params["reps"] = lan_reps;
      params["seed"] = lan_seed;
      put_common(params, lan_common);
    } else if (l2check->parsed()) {
      command = "l2check";
      params["dist"] = l2_dist;
      params["sigma"] = l2_sigma;
      params["t"] = l2_t;
      put_common(params, l2_common);
    }

    const json results = dispatch(command, params);

    json report;
    report["schema"] = 1;
    report["tool"] = "fiscale";
    report["version"] = kToolVersion;
    report["command"] = command;
    report["params"] = params;
    report["results"] = results;
    write_report(report, output, format);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const InfiniteInformationError& e) {
    std::cerr << "information infinite: " << e.what() << "\n";
    return 4;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate
              << ", bound " << e.error_bound << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace fiscale::cli
